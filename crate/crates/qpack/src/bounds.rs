//! Upper-bound rules for subspace packings. Each rule is a pure function
//! of the parameters (and, for the recursive rules, of an already-known
//! bound on the smaller instance); the engine wires up the recursion and
//! takes the minimum over all applicable rules.

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::divisible::{reduce_frac, ReducedFraction};
use crate::qnum::{gaussian_binom, points, ExactInt};
use crate::spaces::PackingParams;

/// Which rule produced a bound; used in provenance reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    Packing,
    JohnsonPoint,
    JohnsonHyperplane,
    ComboHyperplane,
    ImprovedJohnson,
    SecondJohnson,
    IntersectionTrivial,
    IntersectionRecursion,
    Quadratic,
    Duality,
    DropRepeats,
    Trivial,
    Database,
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Rule::Packing => "packing",
            Rule::JohnsonPoint => "johnson-point",
            Rule::JohnsonHyperplane => "johnson-hyperplane",
            Rule::ComboHyperplane => "combo-hyperplane",
            Rule::ImprovedJohnson => "improved-johnson",
            Rule::SecondJohnson => "second-johnson",
            Rule::IntersectionTrivial => "intersection-trivial",
            Rule::IntersectionRecursion => "intersection-recursion",
            Rule::Quadratic => "quadratic",
            Rule::Duality => "duality",
            Rule::DropRepeats => "drop-repeats",
            Rule::Trivial => "trivial",
            Rule::Database => "database",
        };
        f.write_str(s)
    }
}

fn qp(q: u32, e: u32) -> ExactInt {
    ExactInt::from(q as u64).pow(e)
}

/// floor(lambda [n;t]_q / [k;t]_q); valid for both variants.
pub fn packing_bound(p: PackingParams) -> ExactInt {
    let num = ExactInt::from(p.lambda) * gaussian_binom(p.n as i64, p.t as i64, p.q as u64);
    num / gaussian_binom(p.k as i64, p.t as i64, p.q as u64)
}

/// floor((q^n - 1)/(q^k - 1) * sub), where `sub` bounds the packing number
/// with parameters (n-1, k-1, t-1; lambda). Requires t >= 2.
pub fn johnson_point(p: PackingParams, sub: &ExactInt) -> Option<ExactInt> {
    if p.t < 2 {
        return None;
    }
    let num = (qp(p.q, p.n) - 1u32) * sub;
    Some(num / (qp(p.q, p.k) - 1u32))
}

/// floor((q^n - 1)/(q^{n-k} - 1) * sub), where `sub` bounds the packing
/// number with parameters (n-1, k, t; lambda). Requires k < n.
pub fn johnson_hyperplane(p: PackingParams, sub: &ExactInt) -> Option<ExactInt> {
    if p.k >= p.n {
        return None;
    }
    let num = (qp(p.q, p.n) - 1u32) * sub;
    Some(num / (qp(p.q, p.n - p.k) - 1u32))
}

/// Combination of the packing bound inside a hyperplane with the
/// hyperplane-counting Johnson argument:
/// max over 0 <= x <= x_cap of
/// min(x + floor((lambda [n-1;t] - x [k;t]) / [k-1;t]), floor((q^n-1) x / (q^{n-k}-1))).
/// `x_cap` is any upper bound on the packing number in a hyperplane,
/// i.e. on parameters (n-1, k, t; lambda). Requires t < k < n.
pub fn combo_hyperplane(p: PackingParams, x_cap: &ExactInt) -> Option<ExactInt> {
    if !(p.t < p.k && p.k < p.n) {
        return None;
    }
    let q = p.q as u64;
    let hyper_cap = ExactInt::from(p.lambda) * gaussian_binom(p.n as i64 - 1, p.t as i64, q)
        / gaussian_binom(p.k as i64, p.t as i64, q);
    let cap = x_cap.min(&hyper_cap).to_u64()?;
    let lam_nt = ExactInt::from(p.lambda) * gaussian_binom(p.n as i64 - 1, p.t as i64, q);
    let kt = gaussian_binom(p.k as i64, p.t as i64, q);
    let k1t = gaussian_binom(p.k as i64 - 1, p.t as i64, q);
    let qn1 = qp(p.q, p.n) - 1u32;
    let qnk1 = qp(p.q, p.n - p.k) - 1u32;
    let mut best = ExactInt::zero();
    for x in 0..=cap {
        let x = ExactInt::from(x);
        let covered = &x * &kt;
        if covered > lam_nt {
            break; // x blocks cannot fit in a hyperplane
        }
        let inside = &x + (&lam_nt - covered) / &k1t;
        let counted = &qn1 * &x / &qnk1;
        let cand = inside.min(counted);
        if cand > best {
            best = cand;
        }
    }
    Some(best)
}

/// The divisible-code refinement of the Johnson bound:
/// {[n;1] * sub / [k;1]}_k for t >= 2 (with `sub` bounding
/// (n-1, k-1, t-1; lambda)), and {lambda [n;1] / [k;1]}_k for t = 1.
/// Returns None when the residual configuration is infeasible for every
/// candidate value, which the caller must treat as "no packing at all of
/// positive size" -- in practice it cannot occur for valid parameters.
pub fn improved_johnson(p: PackingParams, sub: Option<&ExactInt>) -> Option<ExactInt> {
    let a = if p.t >= 2 {
        points(p.n as u64, p.q as u64) * sub?
    } else {
        ExactInt::from(p.lambda) * points(p.n as u64, p.q as u64)
    };
    match reduce_frac(&a, p.k as u64, p.q as u64) {
        ReducedFraction::Bound(b) => Some(b),
        ReducedFraction::Infeasible => None,
    }
}

/// The q-analog of Johnson's second bound; only applicable for
/// lambda = 1 and (q^k - 1)^2 > (q^n - 1)(q^{t-1} - 1).
pub fn second_johnson(p: PackingParams) -> Option<ExactInt> {
    if p.lambda != 1 {
        return None;
    }
    let qk1 = qp(p.q, p.k) - 1u32;
    let qn1 = qp(p.q, p.n) - 1u32;
    let qt1 = qp(p.q, p.t - 1) - 1u32;
    let lhs = &qk1 * &qk1;
    let rhs = &qn1 * &qt1;
    if lhs <= rhs {
        return None;
    }
    let num = (qp(p.q, p.k) - qp(p.q, p.t - 1)) * &qn1;
    Some(num / (lhs - rhs))
}

/// Dimension argument: lambda + 1 blocks intersect in dimension at least
/// (lambda+1)k - lambda n, so when that is >= t and lambda < [n-t; k-t]_q
/// the packing has at most lambda blocks. Applies to the repeated variant
/// (hence to both).
pub fn intersection_trivial(p: PackingParams) -> Option<ExactInt> {
    let lk = (p.lambda + 1) as i128 * p.k as i128 - p.lambda as i128 * p.n as i128;
    if lk < p.t as i128 {
        return None;
    }
    if ExactInt::from(p.lambda) >= gaussian_binom((p.n - p.t) as i64, (p.k - p.t) as i64, p.q as u64) {
        return None;
    }
    Some(ExactInt::from(p.lambda))
}

/// Conditions for the recursion A^r_q(n,k,t;lambda) <= 1 + A^r_q(k, 2k-n, t; lambda-1).
pub fn intersection_recursion_child(p: PackingParams) -> Option<PackingParams> {
    if p.lambda <= 1 || 2 * p.k <= p.n || p.t > 2 * p.k - p.n {
        return None;
    }
    PackingParams::new(p.q, p.k, 2 * p.k - p.n, p.t, p.lambda - 1, true).ok()
}

/// Hyperplane-distribution (Bonferroni) bound for the repeated variant at
/// k = n-2, t = n-3, lambda = 2:
/// min over m with 2(q+1)m > [n-2;1] of
/// floor([n;1] m(m+1) / (2(q+1)m - [n-2;1])).
pub fn quadratic_bound(p: PackingParams) -> Option<ExactInt> {
    if p.n < 4 || p.k != p.n - 2 || p.t != p.n - 3 || p.lambda != 2 {
        return None;
    }
    let q = p.q as u64;
    let mu0 = points(p.n as u64, q);
    let mu1 = q + 1; // [2;1]_q
    let mu2 = points(p.n as u64 - 2, q);
    // optimal real m = (mu2 + sqrt(mu2^2 + mu2)) / (2 mu1); scan a window
    // around it
    let disc = (&mu2 * &mu2 + &mu2).sqrt();
    let m_star = ((&mu2 + disc) / (2 * mu1)).to_u64()?;
    let mut best: Option<ExactInt> = None;
    for m in m_star.saturating_sub(3)..=m_star + 3 {
        let m_big = ExactInt::from(m);
        let denom_pos = ExactInt::from(2 * mu1) * &m_big;
        if denom_pos <= mu2 {
            continue;
        }
        let denom = denom_pos - &mu2;
        let val = &mu0 * &m_big * (m_big.clone() + 1u32) / denom;
        if best.as_ref().map_or(true, |b| val < *b) {
            best = Some(val);
        }
    }
    best
}

/// The lambda = 1 orthogonal-complement symmetry:
/// A_q(n,k,t;1) = A_q(n, n-k, n-2k+t; 1), valid when n - 2k + t >= 1.
pub fn duality_params(p: PackingParams) -> Option<PackingParams> {
    if p.lambda != 1 || p.repeated {
        return None;
    }
    let t2 = p.n as i64 - 2 * p.k as i64 + p.t as i64;
    if t2 < 1 {
        return None;
    }
    let dual = PackingParams::new(p.q, p.n, p.n - p.k, t2 as u32, 1, false).ok()?;
    if dual == p {
        None
    } else {
        Some(dual)
    }
}

/// Parameters (n, k, delta; alpha) of a covering Grassmannian code
/// B_q(n, k, delta; alpha), with the translation to subspace packings:
/// B_q(n,k,delta;alpha) = A_q(n, n-k, n-k-delta+1; alpha-1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoveringParams {
    pub q: u32,
    pub n: u32,
    pub k: u32,
    pub delta: u32,
    pub alpha: u64,
}

impl CoveringParams {
    /// A_q(n,k,t;lambda) expressed as a covering code:
    /// B_q(n, n-k, k-t+1; lambda+1).
    pub fn from_packing(p: PackingParams) -> CoveringParams {
        CoveringParams {
            q: p.q,
            n: p.n,
            k: p.n - p.k,
            delta: p.k - p.t + 1,
            alpha: p.lambda + 1,
        }
    }

    /// The packing parameters this covering code counts. None for the
    /// degenerate shapes where n < k + delta.
    pub fn to_packing(self) -> Option<PackingParams> {
        if self.n < self.k + self.delta || self.alpha < 2 {
            return None;
        }
        PackingParams::new(
            self.q,
            self.n,
            self.n - self.k,
            self.n - self.k - self.delta + 1,
            self.alpha - 1,
            false,
        )
        .ok()
    }

    /// In the degenerate regime n < k + delta any two distinct k-subspaces
    /// are automatically far enough apart, so the count is
    /// min(alpha - 1, [n; k]_q).
    pub fn degenerate_value(self) -> Option<ExactInt> {
        if self.n >= self.k + self.delta {
            return None;
        }
        let all = gaussian_binom(self.n as i64, self.k as i64, self.q as u64);
        Some(ExactInt::from(self.alpha - 1).min(all))
    }
}

/// The trivial ceiling [n;k]_q on distinct blocks (t = k, lambda >= 1
/// only binds via distinctness) and lambda [n;k]_q with repeats.
pub fn trivial_cap(p: PackingParams) -> ExactInt {
    let all = gaussian_binom(p.n as i64, p.k as i64, p.q as u64);
    if p.repeated {
        ExactInt::from(p.lambda) * all
    } else {
        all
    }
}
