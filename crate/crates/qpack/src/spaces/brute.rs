//! Exhaustive branch-and-bound search for maximum packings on small
//! parameter sets.

use num_traits::ToPrimitive;

use super::{
    enumerate_grassmannian, subspaces_of, PackingCollection, PackingParams, SpaceError,
    SubspaceMatrix,
};
use crate::qnum::gaussian_binom;

/// Outcome of [`brute_force_max`]. When the node budget runs out before
/// the search tree is exhausted, `exact` is false and `size` is only a
/// lower bound on the true maximum.
#[derive(Debug, Clone)]
pub struct BruteForceResult {
    pub size: u64,
    pub best: PackingCollection,
    pub exact: bool,
    pub nodes: u64,
}

struct Search {
    cov_sets: Vec<Vec<usize>>,
    lambda: u64,
    repeated: bool,
    per_block: u64,
    capacity: u64,
    node_budget: u64,
    nodes: u64,
    truncated: bool,
    best_size: usize,
    best: Vec<usize>,
    chosen: Vec<usize>,
}

impl Search {
    fn run(&mut self, start: usize, coverage: &mut [u64], used: u64) {
        self.nodes += 1;
        if self.nodes > self.node_budget {
            self.truncated = true;
            return;
        }
        if self.chosen.len() > self.best_size {
            self.best_size = self.chosen.len();
            self.best = self.chosen.clone();
        }
        // Counting prune: each further block consumes per_block coverage
        // units out of the remaining capacity.
        let max_more = (self.capacity - used) / self.per_block;
        if self.chosen.len() as u64 + max_more <= self.best_size as u64 {
            return;
        }
        for i in start..self.cov_sets.len() {
            if self.truncated {
                return;
            }
            let fits = self.cov_sets[i].iter().all(|&s| coverage[s] < self.lambda);
            if !fits {
                continue;
            }
            for &s in &self.cov_sets[i] {
                coverage[s] += 1;
            }
            self.chosen.push(i);
            let next = if self.repeated { i } else { i + 1 };
            self.run(next, coverage, used + self.per_block);
            self.chosen.pop();
            for &s in &self.cov_sets[i] {
                coverage[s] -= 1;
            }
        }
    }
}

/// Compute the exact maximum packing size by depth-first search over the
/// canonical Grassmannian ordering, with the first block anchored to the
/// first subspace in that ordering (every maximum packing has an image
/// under GL(n,q) containing it).
pub fn brute_force_max(params: PackingParams, node_budget: u64) -> Result<BruteForceResult, SpaceError> {
    params.validate()?;
    let (q, n, k, t) = (params.q, params.n as usize, params.k as usize, params.t as usize);
    let blocks = enumerate_grassmannian(q, n, k, 2_000_000)?;
    let t_subs = enumerate_grassmannian(q, n, t, 2_000_000)?;
    let index: std::collections::HashMap<&SubspaceMatrix, usize> =
        t_subs.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut cov_sets = Vec::with_capacity(blocks.len());
    for b in &blocks {
        let set: Vec<usize> = subspaces_of(b, t)?
            .iter()
            .map(|s| *index.get(s).expect("t-subspace of a block is in the ambient list"))
            .collect();
        cov_sets.push(set);
    }
    let per_block = gaussian_binom(k as i64, t as i64, q as u64)
        .to_u64()
        .expect("per-block t-subspace count fits in u64 at brute-force sizes");
    let capacity = params.lambda * t_subs.len() as u64;

    let mut search = Search {
        cov_sets,
        lambda: params.lambda,
        repeated: params.repeated,
        per_block,
        capacity,
        node_budget,
        nodes: 0,
        truncated: false,
        best_size: 0,
        best: Vec::new(),
        chosen: Vec::new(),
    };
    // Anchor the first block.
    let mut coverage = vec![0u64; t_subs.len()];
    for &s in &search.cov_sets[0] {
        coverage[s] += 1;
    }
    search.chosen.push(0);
    let next = if params.repeated && params.lambda > 1 { 0 } else { 1 };
    search.run(next, &mut coverage, per_block);

    let chosen_blocks: Vec<SubspaceMatrix> = search.best.iter().map(|&i| blocks[i].clone()).collect();
    let best = PackingCollection::new(q, n, k, chosen_blocks)?;
    Ok(BruteForceResult {
        size: search.best_size as u64,
        best,
        exact: !search.truncated,
        nodes: search.nodes,
    })
}
