//! Randomized search for a line spread of GF(2)^6 in general position:
//! 21 pairwise disjoint lines covering every point, with every three
//! lines spanning a subspace of dimension at least 5. The dual of such
//! a spread is a collection of 21 solids in which every plane lies in at
//! most two members.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{rref, PackingCollection, SpaceError};

#[derive(Debug, Error)]
pub enum SpreadSearchError {
    #[error("search budget exhausted after {0} nodes")]
    BudgetExhausted(u64),
    #[error("space error: {0}")]
    Space(#[from] SpaceError),
}

/// A line of GF(2)^6 as its three nonzero vectors, packed into 6-bit ints.
type Line = [u8; 3];

fn all_lines() -> Vec<Line> {
    let mut out = Vec::with_capacity(651);
    for a in 1u8..64 {
        for b in a + 1..64 {
            let c = a ^ b;
            if c > b {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn rank6(vectors: impl Iterator<Item = u8>) -> u32 {
    // basis[i] has leading bit i
    let mut basis = [0u8; 6];
    let mut rank = 0;
    for mut v in vectors {
        while v != 0 {
            let lead = (7 - v.leading_zeros()) as usize;
            if basis[lead] == 0 {
                basis[lead] = v;
                rank += 1;
                break;
            }
            v ^= basis[lead];
        }
    }
    rank
}

/// Every triple among `chosen` and `cand` must span dimension >= 5.
/// Spread lines are pairwise disjoint, so each pair spans dimension 4 and
/// the triple condition is just: `cand` does not lie inside the pair span.
fn triple_ok(chosen: &[Line], cand: Line) -> bool {
    for i in 0..chosen.len() {
        for j in i + 1..chosen.len() {
            let span = rank6(
                chosen[i]
                    .iter()
                    .chain(chosen[j].iter())
                    .chain(cand.iter())
                    .copied(),
            );
            if span < 5 {
                return false;
            }
        }
    }
    true
}

struct SpreadSearch {
    lines: Vec<Line>,
    budget: u64,
    nodes: u64,
}

impl SpreadSearch {
    fn extend(&mut self, rng: &mut ChaCha8Rng, chosen: &mut Vec<Line>, covered: u64) -> bool {
        if chosen.len() == 21 {
            return true;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return false;
        }
        let Some(pt) = (1u8..64).find(|&p| covered & (1u64 << p) == 0) else {
            return false;
        };
        let mut cands: Vec<Line> = self
            .lines
            .iter()
            .filter(|l| {
                l.contains(&pt)
                    && l.iter().all(|&v| covered & (1u64 << v) == 0)
                    && triple_ok(chosen, **l)
            })
            .copied()
            .collect();
        cands.shuffle(rng);
        for l in cands {
            let mask = l.iter().fold(0u64, |m, &v| m | 1u64 << v);
            chosen.push(l);
            if self.extend(rng, chosen, covered | mask) {
                return true;
            }
            chosen.pop();
            if self.nodes > self.budget {
                return false;
            }
        }
        false
    }
}

/// Find a general-position line spread of GF(2)^6 with the given seed.
/// Deterministic for a fixed seed. Returns the 21 lines as a packing
/// collection in GF(2)^6.
pub fn search_special_spread(seed: u64, budget: u64) -> Result<PackingCollection, SpreadSearchError> {
    let mut search = SpreadSearch { lines: all_lines(), budget, nodes: 0 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = Vec::with_capacity(21);
    // Restart with fresh randomness while budget remains.
    loop {
        chosen.clear();
        if search.extend(&mut rng, &mut chosen, 0) {
            break;
        }
        if search.nodes > search.budget {
            return Err(SpreadSearchError::BudgetExhausted(search.nodes));
        }
    }
    let blocks = chosen
        .iter()
        .map(|l| {
            let rows: Vec<Vec<u32>> = l[..2]
                .iter()
                .map(|&v| (0..6).map(|i| ((v >> (5 - i)) & 1) as u32).collect())
                .collect();
            rref(2, rows)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PackingCollection::new(2, 6, 2, blocks)?)
}
