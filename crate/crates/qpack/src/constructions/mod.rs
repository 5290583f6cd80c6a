//! Lower-bound constructions: trivial geometric families, lifted MRD
//! codes, the linkage construction, spread multiples, and the exact-value
//! rules that pair a construction with a matching upper bound.

mod designs;
pub mod linkage;
pub mod mrd;

pub use designs::{disjoint_spread_count, spread_multiple};
pub use mrd::{disjoint_translates, gabidulin_mrd, lift, lifted_mrd, mrd_union_size, MrdError, RankCode};

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::qnum::{gaussian_binom, ExactInt};
use crate::spaces::{
    dual_space, enumerate_grassmannian, rref, PackingCollection, PackingParams, SpaceError,
};

#[derive(Debug, thiserror::Error)]
pub enum ConstructionError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("budget of {0} blocks exceeded")]
    BudgetExceeded(u64),
    #[error("space error: {0}")]
    Space(#[from] SpaceError),
    #[error("rank-code error: {0}")]
    Mrd(#[from] MrdError),
}

/// Rule tag for a construction, carried through provenance and audits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    TrivialAll,
    TakeLambda,
    ExcludePoint,
    DisjointSubspace,
    LiftedMrd,
    Linkage,
    SpreadMultiple,
    ExactIntersection,
    SpecialSpread,
    LambdaFold,
    Database,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Method::TrivialAll => "trivial-all",
            Method::TakeLambda => "take-lambda",
            Method::ExcludePoint => "exclude-point",
            Method::DisjointSubspace => "disjoint-subspace",
            Method::LiftedMrd => "lifted-mrd",
            Method::Linkage => "linkage",
            Method::SpreadMultiple => "spread-multiple",
            Method::ExactIntersection => "exact-intersection",
            Method::SpecialSpread => "special-spread",
            Method::LambdaFold => "lambda-fold",
            Method::Database => "database",
        };
        f.write_str(s)
    }
}

/// Outcome of a construction: a certified size, the rule that produced
/// it, an explicit collection when generated within budget, and the
/// recursive children (for composed constructions).
#[derive(Debug, Clone)]
pub struct ConstructionResult {
    pub params: PackingParams,
    pub method: Method,
    pub size: ExactInt,
    /// The construction also certifies the matching upper bound.
    pub exact: bool,
    pub collection: Option<PackingCollection>,
    pub detail: String,
    pub children: Vec<ConstructionResult>,
}

impl ConstructionResult {
    /// One JSON object per node, depth-first, as an audit trail.
    pub fn audit_jsonl(&self) -> String {
        let mut out = String::new();
        self.audit_into(0, &mut out);
        out
    }

    fn audit_into(&self, depth: usize, out: &mut String) {
        let obj = serde_json::json!({
            "depth": depth,
            "rule": self.method,
            "params": self.params,
            "size": self.size.to_string(),
            "exact": self.exact,
            "explicit": self.collection.is_some(),
            "detail": self.detail,
        });
        out.push_str(&obj.to_string());
        out.push('\n');
        for c in &self.children {
            c.audit_into(depth + 1, out);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrivialKind {
    All,
    ExcludePoint,
    DisjointSubspace,
    TakeLambda,
}

/// The four basic families. Explicit collections are generated when the
/// size fits in `budget`; otherwise only the size is reported.
pub fn trivial_construction(
    kind: TrivialKind,
    p: PackingParams,
    budget: u64,
) -> Result<ConstructionResult, ConstructionError> {
    p.validate().map_err(|e| ConstructionError::Precondition(e.to_string()))?;
    let q = p.q as u64;
    let (n, k) = (p.n as usize, p.k as usize);
    let containing = gaussian_binom((p.n - p.t) as i64, (p.k - p.t) as i64, q);
    match kind {
        TrivialKind::All => {
            if ExactInt::from(p.lambda) < containing {
                return Err(ConstructionError::Precondition(format!(
                    "all-subspaces needs lambda >= [n-t; k-t]_q = {containing}"
                )));
            }
            let size = gaussian_binom(p.n as i64, p.k as i64, q);
            let collection = match size.to_u64() {
                Some(s) if s <= budget => Some(PackingCollection::new(
                    p.q,
                    n,
                    k,
                    enumerate_grassmannian(p.q, n, k, budget)?,
                )?),
                _ => None,
            };
            Ok(ConstructionResult {
                params: p,
                method: Method::TrivialAll,
                size,
                exact: true,
                collection,
                detail: format!("all {k}-subspaces of GF({q})^{n}"),
                children: Vec::new(),
            })
        }
        TrivialKind::TakeLambda => {
            if ExactInt::from(p.lambda) >= containing {
                return Err(ConstructionError::Precondition(format!(
                    "take-lambda needs lambda < [n-t; k-t]_q = {containing}"
                )));
            }
            let collection = if p.lambda <= budget {
                let blocks: Vec<_> = enumerate_grassmannian(p.q, n, k, budget.max(1_000_000))
                    .map(|v| v.into_iter().take(p.lambda as usize).collect::<Vec<_>>())
                    .unwrap_or_default();
                if blocks.len() as u64 == p.lambda {
                    Some(PackingCollection::new(p.q, n, k, blocks)?)
                } else {
                    None
                }
            } else {
                None
            };
            Ok(ConstructionResult {
                params: p,
                method: Method::TakeLambda,
                size: ExactInt::from(p.lambda),
                exact: false,
                collection,
                detail: format!("any {} {k}-subspaces", p.lambda),
                children: Vec::new(),
            })
        }
        TrivialKind::ExcludePoint => {
            if p.n < 3 || p.k != p.n - 1 || p.t != p.n - 2 || p.lambda != q {
                return Err(ConstructionError::Precondition(
                    "exclude-point needs (k, t, lambda) = (n-1, n-2, q), n >= 3".into(),
                ));
            }
            let size = ExactInt::from(q).pow(p.n - 1);
            let collection = match size.to_u64() {
                Some(s) if s <= budget => {
                    // hyperplanes missing the point <e_1>: duals of <v>
                    // with v_1 = 1
                    let tail = (q as u128).pow(p.n - 1);
                    let mut blocks = Vec::with_capacity(tail as usize);
                    for mut idx in 0..tail {
                        let mut v = vec![0u32; n];
                        v[0] = 1;
                        for x in v[1..].iter_mut() {
                            *x = (idx % q as u128) as u32;
                            idx /= q as u128;
                        }
                        blocks.push(dual_space(&rref(p.q, vec![v])?)?);
                    }
                    Some(PackingCollection::new(p.q, n, k, blocks)?)
                }
                _ => None,
            };
            Ok(ConstructionResult {
                params: p,
                method: Method::ExcludePoint,
                size,
                exact: false,
                collection,
                detail: "all hyperplanes missing a fixed point".into(),
                children: Vec::new(),
            })
        }
        TrivialKind::DisjointSubspace => {
            if p.k >= p.n {
                return Err(ConstructionError::Precondition("disjoint-subspace needs k < n".into()));
            }
            let needed = ExactInt::from(q).pow((p.n - p.k) * (p.k - p.t));
            if ExactInt::from(p.lambda) < needed {
                return Err(ConstructionError::Precondition(format!(
                    "disjoint-subspace needs lambda >= q^((n-k)(k-t)) = {needed}"
                )));
            }
            let size = ExactInt::from(q).pow((p.n - p.k) * p.k);
            let collection = match size.to_u64() {
                Some(s) if s <= budget => {
                    // k-subspaces meeting <e_{k+1},...,e_n> trivially:
                    // rowspace(I_k | A) over all A
                    let total = (q as u128).pow((p.n - p.k) * p.k);
                    let mut blocks = Vec::with_capacity(total as usize);
                    for mut idx in 0..total {
                        let mut rows = vec![vec![0u32; n]; k];
                        for (r, row) in rows.iter_mut().enumerate() {
                            row[r] = 1;
                            for x in row[k..].iter_mut() {
                                *x = (idx % q as u128) as u32;
                                idx /= q as u128;
                            }
                        }
                        blocks.push(rref(p.q, rows)?);
                    }
                    Some(PackingCollection::new(p.q, n, k, blocks)?)
                }
                _ => None,
            };
            Ok(ConstructionResult {
                params: p,
                method: Method::DisjointSubspace,
                size,
                exact: false,
                collection,
                detail: "all k-subspaces disjoint from a fixed (n-k)-subspace".into(),
                children: Vec::new(),
            })
        }
    }
}

/// Exact value from disjoint spreads: A_q(n,k,1;j) = j [n;1]/[k;1] for
/// j within the known count. Size-only.
pub fn design_multiples(p: PackingParams) -> Option<ConstructionResult> {
    let (size, src) = spread_multiple(p)?;
    Some(ConstructionResult {
        params: p,
        method: Method::SpreadMultiple,
        size,
        exact: true,
        collection: None,
        detail: src.to_string(),
        children: Vec::new(),
    })
}

/// Parameter regimes where a construction meets a matching upper bound.
pub fn exact_rules(p: PackingParams, budget: u64) -> Option<ConstructionResult> {
    let q = p.q as u64;
    let containing = gaussian_binom((p.n - p.t) as i64, (p.k - p.t) as i64, q);
    // all-subspaces regime: every t-subspace lies in exactly [n-t;k-t]_q blocks
    if ExactInt::from(p.lambda) >= containing {
        return trivial_construction(TrivialKind::All, p, budget).ok();
    }
    // intersection rule: lambda + 1 blocks would intersect in dimension >= t
    let lk = (p.lambda + 1) as i128 * p.k as i128 - p.lambda as i128 * p.n as i128;
    if lk >= p.t as i128 {
        let mut r = trivial_construction(TrivialKind::TakeLambda, p, budget).ok()?;
        r.method = Method::ExactIntersection;
        r.exact = true;
        r.detail = format!("{} blocks; any {} intersect in dimension >= t", p.lambda, p.lambda + 1);
        return Some(r);
    }
    // excluded point: A_q(n, n-1, n-2; q) = q^{n-1}
    if p.n >= 3 && p.k == p.n - 1 && p.t == p.n - 2 && p.lambda == q {
        let mut r = trivial_construction(TrivialKind::ExcludePoint, p, budget).ok()?;
        r.exact = true;
        return Some(r);
    }
    // disjoint spreads
    design_multiples(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::is_packing;

    fn p(q: u32, n: u32, k: u32, t: u32, lambda: u64) -> PackingParams {
        PackingParams::new(q, n, k, t, lambda, false).unwrap()
    }

    fn sz(r: &ConstructionResult) -> u64 {
        r.size.to_u64().unwrap()
    }

    #[test]
    fn trivial_all() {
        // A_2(4,2,2;2): every line is in [2;0] = 1... the containing count
        // is [n-t;k-t] = [2;0]_2 = 1, so lambda = 1 suffices at t = k
        let r = trivial_construction(TrivialKind::All, p(2, 4, 2, 2, 1), 10_000).unwrap();
        assert_eq!(sz(&r), 35);
        assert!(r.exact);
        let c = r.collection.unwrap();
        assert!(is_packing(&c, 2, 1).unwrap().valid);
        // with lambda = 2 still all 35, per the table
        let r = trivial_construction(TrivialKind::All, p(2, 4, 2, 2, 2), 10_000).unwrap();
        assert_eq!(sz(&r), 35);
        // guard: lambda too small at t < k
        assert!(trivial_construction(TrivialKind::All, p(2, 4, 2, 1, 2), 10_000).is_err());
    }

    #[test]
    fn trivial_take_lambda() {
        let r = trivial_construction(TrivialKind::TakeLambda, p(2, 6, 4, 2, 3), 10_000).unwrap();
        assert_eq!(sz(&r), 3);
        let c = r.collection.unwrap();
        assert_eq!(c.cardinality(), 3);
        // 3 blocks never cover a 2-subspace 4 times
        assert!(is_packing(&c, 2, 3).unwrap().valid);
    }

    #[test]
    fn trivial_exclude_point() {
        // A_2(5,4,3;2) >= 16
        let r = trivial_construction(TrivialKind::ExcludePoint, p(2, 5, 4, 3, 2), 10_000).unwrap();
        assert_eq!(sz(&r), 16);
        let c = r.collection.unwrap();
        assert_eq!(c.cardinality(), 16);
        assert!(is_packing(&c, 3, 2).unwrap().valid);
        // A_3(3,2,1;3) >= 9
        let r = trivial_construction(TrivialKind::ExcludePoint, p(3, 3, 2, 1, 3), 10_000).unwrap();
        assert_eq!(sz(&r), 9);
        assert!(is_packing(&r.collection.unwrap(), 1, 3).unwrap().valid);
        assert!(trivial_construction(TrivialKind::ExcludePoint, p(2, 5, 4, 3, 3), 10_000).is_err());
    }

    #[test]
    fn trivial_disjoint_subspace() {
        // q=2, n=5, k=4, t=3: lambda = q^{(n-k)(k-t)} = 2, size q^{(n-k)k} = 16
        let r = trivial_construction(TrivialKind::DisjointSubspace, p(2, 5, 4, 3, 2), 10_000).unwrap();
        assert_eq!(sz(&r), 16);
        let c = r.collection.unwrap();
        assert!(is_packing(&c, 3, 2).unwrap().valid);
        // the a=1 specialization of the corollary: q=2, n=5 -> 16
        // q=2, n=4, k=2, t=1: lambda = 4, size 16... [4;2]=35 check packs
        let r = trivial_construction(TrivialKind::DisjointSubspace, p(2, 4, 2, 1, 4), 10_000).unwrap();
        assert_eq!(sz(&r), 16);
        let c = r.collection.unwrap();
        let v = is_packing(&c, 1, 4).unwrap();
        assert!(v.valid);
        assert_eq!(v.max_coverage, 4);
    }

    #[test]
    fn exact_rule_dispatch() {
        // intersection: A_2(5,4,1;2)... (3*4 - 2*5) = 2 >= 1 -> exactly 2
        let r = exact_rules(p(2, 5, 4, 1, 2), 10_000).unwrap();
        assert_eq!(r.method, Method::ExactIntersection);
        assert_eq!(sz(&r), 2);
        assert!(r.exact);
        // all-subspaces: A_3(4,3,2;4) = 40
        let r = exact_rules(p(3, 4, 3, 2, 4), 100_000).unwrap();
        assert_eq!(r.method, Method::TrivialAll);
        assert_eq!(sz(&r), 40);
        // exclude point: A_2(6,5,4;2) = 32
        let r = exact_rules(p(2, 6, 5, 4, 2), 100_000).unwrap();
        assert_eq!(r.method, Method::ExcludePoint);
        assert_eq!(sz(&r), 32);
        // spread multiple: A_2(4,2,1;2) = 10
        let r = exact_rules(p(2, 4, 2, 1, 2), 10_000).unwrap();
        assert_eq!(r.method, Method::SpreadMultiple);
        assert_eq!(sz(&r), 10);
        // nothing exact here
        assert!(exact_rules(p(2, 7, 3, 2, 2), 10_000).is_none());
    }

    #[test]
    fn audit_lines() {
        let r = trivial_construction(TrivialKind::TakeLambda, p(2, 6, 4, 2, 3), 0).unwrap();
        let audit = r.audit_jsonl();
        assert_eq!(audit.lines().count(), 1);
        let v: serde_json::Value = serde_json::from_str(audit.lines().next().unwrap()).unwrap();
        assert_eq!(v["rule"], "take-lambda");
        assert_eq!(v["size"], "3");
    }
}
