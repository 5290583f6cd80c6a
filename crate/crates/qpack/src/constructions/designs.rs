//! Size-only lower/exact bounds from literature facts about pairwise
//! disjoint spreads (partial and full parallelisms). A k-spread of
//! GF(q)^n is a 1-(n,k,1)_q design; s pairwise disjoint spreads give the
//! exact value A_q(n,k,1;j) = j [n;1]_q / [k;1]_q for every j <= s.
//!
//! Facts are recorded here as data with sources; nothing is derived at
//! runtime beyond evaluating the closed-form spread counts.

use num_traits::ToPrimitive;

use crate::qnum::{gaussian_binom, points, ExactInt};
use crate::spaces::PackingParams;

/// Number of spreads in a full k-parallelism of GF(q)^n:
/// [n;k]_q [k;1]_q / [n;1]_q.
fn full_parallelism_count(q: u64, n: u64, k: u64) -> u64 {
    let v = gaussian_binom(n as i64, k as i64, q) * points(k, q) / points(n, q);
    v.to_u64().expect("spread counts stay small")
}

/// The best known number of pairwise disjoint k-spreads of GF(q)^n,
/// with a citation string. None when k does not divide n or no fact
/// applies.
pub fn disjoint_spread_count(q: u32, n: u32, k: u32) -> Option<(u64, &'static str)> {
    if k == 0 || k >= n || n % k != 0 {
        return None;
    }
    let (ql, nl, kl) = (q as u64, n as u64, k as u64);
    let mut best: Option<(u64, &'static str)> = None;
    let mut update = |s: u64, src: &'static str| {
        if best.map_or(true, |(b, _)| s > b) {
            best = Some((s, src));
        }
    };
    if k == 2 {
        // full 2-parallelisms
        if q == 2 && n % 2 == 0 {
            update(full_parallelism_count(ql, nl, kl), "Baker 1976 / Wettl 1991: 2-parallelisms of GF(2)^n, n even");
        }
        if n.is_power_of_two() && n >= 4 {
            update(full_parallelism_count(ql, nl, kl), "Beutelspacher 1990: 2-parallelisms of GF(q)^(2^i), i >= 2");
        }
        if q == 3 && n == 6 {
            update(full_parallelism_count(ql, nl, kl), "Etzion-Vardy 2012: 2-parallelism of GF(3)^6");
        }
        if n % 2 == 0 && n >= 4 {
            // partial parallelism: [2 floor(log2(n-1)) + 1; 1]_q disjoint spreads
            let e = 2 * (63 - ((n - 1) as u64).leading_zeros() as u64) + 1;
            let s = points(e, ql).to_u64().unwrap_or(u64::MAX);
            update(s, "Beutelspacher 1990: partial 2-parallelisms of GF(q)^n, n even");
        }
    }
    if q == 2 && k == 3 && n == 6 {
        update(full_parallelism_count(ql, nl, kl), "Hishida-Jimbo 2000 / Sarmiento 2002: 3-parallelism of GF(2)^6");
    }
    if q == 2 {
        update((1u64 << k) - 1, "Etzion 2015: 2^k - 1 disjoint k-spreads of GF(2)^n, k | n");
    }
    best
}

/// Exact value j [n;1]/[k;1] for A_q(n,k,1;j) when j pairwise disjoint
/// k-spreads are known to exist.
pub fn spread_multiple(p: PackingParams) -> Option<(ExactInt, &'static str)> {
    if p.t != 1 {
        return None;
    }
    let (s, src) = disjoint_spread_count(p.q, p.n, p.k)?;
    if p.lambda > s {
        return None;
    }
    let size = ExactInt::from(p.lambda) * points(p.n as u64, p.q as u64)
        / points(p.k as u64, p.q as u64);
    Some((size, src))
}
