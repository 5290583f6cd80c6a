//! The linkage construction for covering Grassmannian codes
//! B_q(n, k, delta; alpha): any alpha distinct codewords (k-subspaces of
//! GF(q)^n) span a subspace of dimension at least k + delta.
//!
//! Three regimes:
//! * degenerate (n < k + delta): any alpha - 1 distinct subspaces qualify
//!   vacuously, giving min(alpha - 1, [n;k]_q);
//! * base (k + delta <= n < k + 2 delta): the lifted union of disjoint
//!   MRD translates;
//! * recursive (n >= k + 2 delta): a code on n - t columns, extended by
//!   MRD suffix matrices, plus (when t >= k) an appended code supported
//!   on the last t + k - delta coordinates.

use num_traits::ToPrimitive;

use super::mrd::{disjoint_translates, lifted_mrd, mrd_union_size, MrdError};
use crate::bounds::CoveringParams;
use crate::qnum::ExactInt;
use crate::spaces::{enumerate_grassmannian, rref, PackingCollection, SubspaceMatrix};

/// The linkage regime for given covering parameters, including the chosen
/// column split for the recursive case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkagePlan {
    Degenerate,
    LiftedMrd,
    Split { t: u32, appended: bool },
}

/// All applicable plans for the given parameters (every admissible t in
/// the recursive regime).
pub fn linkage_plans(b: CoveringParams) -> Vec<LinkagePlan> {
    let (n, k, delta) = (b.n, b.k, b.delta);
    if b.alpha < 2 || delta < 1 || delta > k {
        return Vec::new();
    }
    if n < k + delta {
        return vec![LinkagePlan::Degenerate];
    }
    if n < k + 2 * delta {
        return vec![LinkagePlan::LiftedMrd];
    }
    (delta..=n - k - delta)
        .map(|t| LinkagePlan::Split { t, appended: t >= k })
        .collect()
}

/// The sub-instance a split plan recurses on.
pub fn split_child(b: CoveringParams, t: u32) -> CoveringParams {
    CoveringParams { n: b.n - t, ..b }
}

/// The appended tail instance of a case-2b split (t >= k).
pub fn appended_tail(b: CoveringParams, t: u32) -> CoveringParams {
    CoveringParams { n: t + b.k - b.delta, ..b }
}

/// Size delivered by a plan, given the sizes of its children.
/// `child` is the size on n - t columns; `tail` the appended size.
pub fn plan_size(
    b: CoveringParams,
    plan: LinkagePlan,
    child: Option<&ExactInt>,
    tail: Option<&ExactInt>,
) -> Option<ExactInt> {
    let am1 = ExactInt::from(b.alpha - 1);
    let q = ExactInt::from(b.q as u64);
    match plan {
        LinkagePlan::Degenerate => b.degenerate_value(),
        LinkagePlan::LiftedMrd => {
            let hi = b.k.max(b.n - b.k);
            let lo = b.k.min(b.n - b.k);
            if lo < b.delta {
                return None;
            }
            Some(am1 * q.pow(hi * (lo - b.delta + 1)))
        }
        LinkagePlan::Split { t, appended } => {
            let exp = if t < b.k {
                b.k * (t - b.delta + 1)
            } else {
                t * (b.k - b.delta + 1)
            };
            let mut size = am1 * q.pow(exp) * child?;
            if appended {
                size += tail?;
            }
            Some(size)
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LinkageError {
    #[error("budget of {0} blocks exceeded")]
    BudgetExceeded(u64),
    #[error("parameters admit no linkage plan")]
    NoPlan,
    #[error("rank-code error: {0}")]
    Mrd(#[from] MrdError),
    #[error("space error: {0}")]
    Space(#[from] crate::spaces::SpaceError),
}

/// Explicitly assemble a covering code, choosing at every level the split
/// that maximizes the purely recursive size. Returns the k-subspaces of
/// GF(q)^n together with the per-level plan trace.
pub fn linkage_explicit(
    b: CoveringParams,
    budget: u64,
) -> Result<(PackingCollection, Vec<String>), LinkageError> {
    let mut trace = Vec::new();
    let blocks = assemble(b, budget, &mut trace)?;
    Ok((PackingCollection::new(b.q, b.n as usize, b.k as usize, blocks)?, trace))
}

/// Purely recursive size (no database): the best plan at every level.
pub fn recursive_size(b: CoveringParams) -> Option<ExactInt> {
    linkage_plans(b)
        .into_iter()
        .filter_map(|plan| {
            let child = match plan {
                LinkagePlan::Split { t, .. } => Some(recursive_size(split_child(b, t))?),
                _ => None,
            };
            let tail = match plan {
                LinkagePlan::Split { t, appended: true } => {
                    Some(tail_value(appended_tail(b, t))?)
                }
                _ => None,
            };
            plan_size(b, plan, child.as_ref(), tail.as_ref())
        })
        .max()
}

fn tail_value(tail: CoveringParams) -> Option<ExactInt> {
    tail.degenerate_value().or_else(|| recursive_size(tail))
}

fn best_plan(b: CoveringParams) -> Option<LinkagePlan> {
    linkage_plans(b).into_iter().max_by_key(|&plan| {
        let child = match plan {
            LinkagePlan::Split { t, .. } => recursive_size(split_child(b, t)),
            _ => None,
        };
        let tail = match plan {
            LinkagePlan::Split { t, appended: true } => tail_value(appended_tail(b, t)),
            _ => None,
        };
        plan_size(b, plan, child.as_ref(), tail.as_ref())
    })
}

fn assemble(
    b: CoveringParams,
    budget: u64,
    trace: &mut Vec<String>,
) -> Result<Vec<SubspaceMatrix>, LinkageError> {
    let plan = best_plan(b).ok_or(LinkageError::NoPlan)?;
    let expected = plan_expected(b, plan);
    if expected.as_ref().and_then(|e| e.to_u64()).map_or(true, |e| e > budget) {
        return Err(LinkageError::BudgetExceeded(budget));
    }
    let (q, n, k, delta) = (b.q, b.n as usize, b.k as usize, b.delta as usize);
    let blocks = match plan {
        LinkagePlan::Degenerate => {
            let count = b
                .degenerate_value()
                .and_then(|v| v.to_u64())
                .ok_or(LinkageError::NoPlan)?;
            trace.push(format!("degenerate n={n} k={k}: first {count} subspaces"));
            enumerate_grassmannian(q, n, k, budget)?
                .into_iter()
                .take(count as usize)
                .collect()
        }
        LinkagePlan::LiftedMrd => {
            trace.push(format!("lifted-mrd n={n} k={k} delta={delta} alpha={}", b.alpha));
            lifted_mrd(q, n, k, delta, b.alpha, budget)?
                .blocks()
                .to_vec()
        }
        LinkagePlan::Split { t, appended } => {
            trace.push(format!(
                "split n={n} k={k} delta={delta} alpha={} t={t} appended={appended}",
                b.alpha
            ));
            let child_blocks = assemble(split_child(b, t), budget, trace)?;
            let suffixes =
                disjoint_translates(q, k, t as usize, delta, b.alpha - 1, budget)?;
            let mut out = Vec::new();
            for v in &child_blocks {
                for a in &suffixes.codewords {
                    let rows: Vec<Vec<u32>> = v
                        .rows()
                        .iter()
                        .zip(a)
                        .map(|(vr, ar)| {
                            let mut row = Vec::with_capacity(n);
                            row.extend_from_slice(vr);
                            row.extend_from_slice(ar);
                            row
                        })
                        .collect();
                    out.push(rref(q, rows)?);
                }
            }
            if appended {
                let tail = appended_tail(b, t);
                let tail_n = tail.n as usize;
                let tail_blocks = if tail.n < tail.k + tail.delta {
                    let count = tail
                        .degenerate_value()
                        .and_then(|v| v.to_u64())
                        .ok_or(LinkageError::NoPlan)?;
                    if count > 0 && tail.k <= tail.n {
                        enumerate_grassmannian(q, tail_n, k, budget)?
                            .into_iter()
                            .take(count as usize)
                            .collect()
                    } else {
                        Vec::new()
                    }
                } else {
                    assemble(tail, budget, trace)?
                };
                for block in tail_blocks {
                    let rows: Vec<Vec<u32>> = block
                        .rows()
                        .iter()
                        .map(|r| {
                            let mut row = vec![0u32; n - tail_n];
                            row.extend_from_slice(r);
                            row
                        })
                        .collect();
                    out.push(rref(q, rows)?);
                }
            }
            out
        }
    };
    Ok(blocks)
}

fn plan_expected(b: CoveringParams, plan: LinkagePlan) -> Option<ExactInt> {
    match plan {
        LinkagePlan::Degenerate => b.degenerate_value(),
        LinkagePlan::LiftedMrd => Some(ExactInt::from(mrd_union_size(
            b.q,
            b.k as usize,
            (b.n - b.k) as usize,
            b.delta as usize,
            b.alpha - 1,
        ) as u64)),
        LinkagePlan::Split { t, .. } => {
            let child = recursive_size(split_child(b, t))?;
            let tail = if t >= b.k { tail_value(appended_tail(b, t)) } else { None };
            plan_size(b, plan, Some(&child), tail.as_ref())
        }
    }
}

/// Check the covering property on `sample` seeded random alpha-subsets:
/// each must span dimension >= k + delta.
pub fn verify_covering(
    c: &PackingCollection,
    delta: usize,
    alpha: u64,
    sample: usize,
    seed: u64,
) -> Result<bool, LinkageError> {
    use rand::seq::index::sample as index_sample;
    use rand::SeedableRng;
    let k = c.k();
    let need = k + delta;
    let blocks = c.blocks();
    let m = blocks.len();
    let a = alpha as usize;
    if a > m {
        return Ok(true);
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..sample {
        let picks = index_sample(&mut rng, m, a);
        let mut rows: Vec<Vec<u32>> = Vec::with_capacity(a * k);
        for i in picks {
            rows.extend(blocks[i].rows().iter().cloned());
        }
        let dim = rref(c.q(), rows)?.dim();
        if dim < need {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A covering code equals a packing of the dual blocks: B_q(n,k,delta;alpha)
/// codewords dualize to (n-k)-subspaces forming an
/// (n-k-delta+1)-(n, n-k, alpha-1) packing.
pub fn to_packing_side(c: &PackingCollection) -> Result<PackingCollection, LinkageError> {
    Ok(c.dual()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::is_packing;

    fn cp(q: u32, n: u32, k: u32, delta: u32, alpha: u64) -> CoveringParams {
        CoveringParams { q, n, k, delta, alpha }
    }

    fn size(b: CoveringParams) -> u64 {
        recursive_size(b).unwrap().to_u64().unwrap()
    }

    #[test]
    fn plan_selection() {
        assert_eq!(linkage_plans(cp(2, 3, 2, 2, 3)), vec![LinkagePlan::Degenerate]);
        assert_eq!(linkage_plans(cp(2, 4, 2, 2, 3)), vec![LinkagePlan::LiftedMrd]);
        assert_eq!(linkage_plans(cp(2, 5, 2, 2, 3)), vec![LinkagePlan::LiftedMrd]);
        assert_eq!(
            linkage_plans(cp(2, 8, 2, 2, 3)),
            vec![
                LinkagePlan::Split { t: 2, appended: true },
                LinkagePlan::Split { t: 3, appended: true },
                LinkagePlan::Split { t: 4, appended: true },
            ]
        );
    }

    #[test]
    fn recursive_sizes_b_2_8_2_2() {
        // B_2(4,2,2;alpha) = (alpha-1) * 4; then t = 2 splits:
        // B_2(6) = (alpha-1)*4*B_2(4) + 1, B_2(8) = (alpha-1)*4*B_2(6) + 1
        assert_eq!(size(cp(2, 4, 2, 2, 3)), 8);
        assert_eq!(size(cp(2, 6, 2, 2, 3)), 65);
        assert_eq!(size(cp(2, 8, 2, 2, 3)), 521);
    }

    #[test]
    fn plan_size_with_db_children() {
        // the engine substitutes stronger children: B_2(6,2,2;3) = 121
        // gives the table value 969 for B_2(8,2,2;3) at t = 2
        let b = cp(2, 8, 2, 2, 3);
        let v = plan_size(
            b,
            LinkagePlan::Split { t: 2, appended: true },
            Some(&ExactInt::from(121u32)),
            Some(&ExactInt::from(1u32)),
        );
        assert_eq!(v.unwrap().to_u64().unwrap(), 969);
        // B_2(8,2,2;4) with child 195: 3*4*195 + 1 = 2341
        let v = plan_size(
            cp(2, 8, 2, 2, 4),
            LinkagePlan::Split { t: 2, appended: true },
            Some(&ExactInt::from(195u32)),
            Some(&ExactInt::from(1u32)),
        );
        assert_eq!(v.unwrap().to_u64().unwrap(), 2341);
        // B_2(8,2,2;5) with child 336: 4*4*336 + 1 = 5377
        let v = plan_size(
            cp(2, 8, 2, 2, 5),
            LinkagePlan::Split { t: 2, appended: true },
            Some(&ExactInt::from(336u32)),
            Some(&ExactInt::from(1u32)),
        );
        assert_eq!(v.unwrap().to_u64().unwrap(), 5377);
    }

    #[test]
    fn explicit_assembly_b_2_6_2_2_3() {
        let (c, trace) = linkage_explicit(cp(2, 6, 2, 2, 3), 10_000).unwrap();
        assert_eq!(c.cardinality(), 65);
        assert!(!trace.is_empty());
        // covering property, exhaustive over alpha-subsets is too big;
        // sample heavily plus check the dual packing exactly
        assert!(verify_covering(&c, 2, 3, 2000, 1).unwrap());
        let dual = to_packing_side(&c).unwrap();
        // dual: 4-subspaces of GF(2)^6, t = n-k-delta+1 = 3, lambda = 2
        let v = is_packing(&dual, 3, 2).unwrap();
        assert!(v.valid);
    }

    #[test]
    fn explicit_assembly_b_2_8_2_2_3() {
        let (c, _) = linkage_explicit(cp(2, 8, 2, 2, 3), 10_000).unwrap();
        assert_eq!(c.cardinality(), 521);
        assert!(verify_covering(&c, 2, 3, 1500, 7).unwrap());
    }

    #[test]
    fn budget_respected() {
        assert!(matches!(
            linkage_explicit(cp(2, 8, 2, 2, 3), 100),
            Err(LinkageError::BudgetExceeded(100))
        ));
    }
}
