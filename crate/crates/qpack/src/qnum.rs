//! Exact integer q-combinatorics: Gaussian binomial coefficients,
//! q-Pochhammer ratios, and the asymptotic comparison band.
//!
//! All bound magnitudes stay in arbitrary precision; floating point never
//! enters a bound value.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

pub type ExactInt = BigUint;
pub type Rational = BigRational;

static GAUSS_MEMO: Lazy<Mutex<HashMap<(u64, u64, u64), ExactInt>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// The Gaussian binomial coefficient [n; k]_q: the number of k-subspaces
/// of GF(q)^n. Zero when k < 0 or k > n.
pub fn gaussian_binom(n: i64, k: i64, q: u64) -> ExactInt {
    assert!(q >= 2, "gaussian_binom requires q >= 2");
    if k < 0 || k > n || n < 0 {
        return ExactInt::zero();
    }
    let (n, k) = (n as u64, k as u64);
    let key = (n, k, q);
    if let Some(v) = GAUSS_MEMO.lock().unwrap().get(&key) {
        return v.clone();
    }
    // prod_{i=0}^{k-1} (q^{n-i} - 1) / (q^{i+1} - 1); the partial product
    // after j steps equals [n; j]_q, so each division is exact.
    let q = BigUint::from(q);
    let one = BigUint::one();
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= q.pow((n - i) as u32) - &one;
        acc /= q.pow((i + 1) as u32) - &one;
    }
    GAUSS_MEMO.lock().unwrap().insert(key, acc.clone());
    acc
}

/// Convenience: [n;1]_q = (q^n - 1)/(q - 1) as the point count of GF(q)^n.
pub fn points(n: u64, q: u64) -> ExactInt {
    gaussian_binom(n as i64, 1, q)
}

fn pochhammer(q: u64, n: u64) -> Rational {
    // (1/q; 1/q)_n = prod_{i=1}^{n} (1 - q^{-i})
    let mut acc = Rational::one();
    let q = BigInt::from(q);
    for i in 1..=n {
        let qi = q.pow(i as u32);
        acc *= Rational::new(&qi - 1, qi);
    }
    acc
}

/// Certified numeric guard: for t < k the ratio below is < 1.7314 for
/// all q >= 2, via (1/q;1/q)_{k-t} <= (q-1)/q and
/// (q-1)/(q (1/q;1/q)_oo) <= 1/(2 (1/2;1/2)_oo) < 1.7314.
pub const POCHHAMMER_RATIO_GUARD: (u64, u64) = (17314, 10000);

/// The exact rational (1/q;1/q)_{k-t} / (1/q;1/q)_k.
pub fn pochhammer_ratio(q: u64, k: u64, t: u64) -> Rational {
    assert!(t <= k, "pochhammer_ratio requires t <= k");
    assert!(q >= 2);
    pochhammer(q, k - t) / pochhammer(q, k)
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum QnumError {
    #[error("asymptotic band requires k <= n - k")]
    KTooLarge,
}

/// The asymptotic comparison band lambda*q^{t(n-k)} <= A^r_q(n,k,t;lambda)
/// <= ratio * lambda * q^{t(n-k)}, valid for k <= n - k.
pub fn asymptotic_band(
    q: u64,
    n: u64,
    k: u64,
    t: u64,
    lambda: u64,
) -> Result<(ExactInt, Rational), QnumError> {
    if k > n - k {
        return Err(QnumError::KTooLarge);
    }
    let lower = BigUint::from(lambda) * BigUint::from(q).pow((t * (n - k)) as u32);
    let upper = pochhammer_ratio(q, k, t) * Rational::from(BigInt::from(lower.clone()));
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn gb(n: i64, k: i64, q: u64) -> u64 {
        gaussian_binom(n, k, q).to_u64().unwrap()
    }

    #[test]
    fn known_values() {
        assert_eq!(gb(3, 1, 2), 7);
        assert_eq!(gb(4, 2, 2), 35);
        assert_eq!(gb(6, 3, 2), 1395);
        assert_eq!(gb(8, 4, 2), 200787);
        assert_eq!(gb(4, 3, 3), 40);
        assert_eq!(gb(0, 0, 2), 1);
        assert_eq!(gb(3, 4, 2), 0);
        assert_eq!(gaussian_binom(3, -1, 2), ExactInt::zero());
    }

    #[test]
    fn pascal_identity_and_symmetry() {
        // [n;k]_q = q^k [n-1;k]_q + [n-1;k-1]_q
        for q in [2u64, 3] {
            for n in 2i64..=12 {
                for k in 0..=n {
                    let lhs = gaussian_binom(n, k, q);
                    let rhs = ExactInt::from(q).pow(k as u32) * gaussian_binom(n - 1, k, q)
                        + gaussian_binom(n - 1, k - 1, q);
                    assert_eq!(lhs, rhs, "pascal failed at n={n} k={k} q={q}");
                    assert_eq!(lhs, gaussian_binom(n, n - k, q), "symmetry at n={n} k={k} q={q}");
                }
            }
        }
    }

    #[test]
    fn pochhammer_ratio_examples() {
        assert_eq!(pochhammer_ratio(2, 5, 0), Rational::one());
        // (2,2,1): (1 - 1/2) / ((1 - 1/2)(1 - 1/4)) = 4/3
        assert_eq!(
            pochhammer_ratio(2, 2, 1),
            Rational::new(BigInt::from(4), BigInt::from(3))
        );
    }

    #[test]
    fn pochhammer_guard_holds() {
        // the ratio is increasing in t, so t = k - 1 at large k is the
        // worst case; k = 30 is well past where the tail stabilizes
        let (num, den) = POCHHAMMER_RATIO_GUARD;
        let guard = Rational::new(BigInt::from(num), BigInt::from(den));
        for q in [2u64, 3, 4, 5] {
            for t in 0..30 {
                let r = pochhammer_ratio(q, 30, t);
                assert!(r < guard, "ratio out of band for q={q} t={t}");
            }
        }
    }

    #[test]
    fn asymptotic_band_examples() {
        let (lo, hi) = asymptotic_band(2, 6, 3, 2, 1).unwrap();
        assert_eq!(lo, ExactInt::from(64u32));
        assert!(hi >= Rational::from(BigInt::from(64)));
        let (lo, _) = asymptotic_band(2, 6, 3, 2, 2).unwrap();
        assert_eq!(lo, ExactInt::from(128u32));
        let (lo, _) = asymptotic_band(2, 8, 4, 2, 2).unwrap();
        assert_eq!(lo, ExactInt::from(512u32));
        assert_eq!(asymptotic_band(2, 5, 3, 2, 1).unwrap_err(), QnumError::KTooLarge);
    }
}
