//! Lengths of q^r-divisible linear codes over GF(q), and the rounding
//! refinement they enable for Johnson-type bounds.
//!
//! A nonempty multiset of points (1-subspaces) of some GF(q)-vector space
//! is realizable as the column multiset of a q^r-divisible code exactly
//! when its cardinality is a non-negative integer combination of the base
//! lengths s_i = q^i * [r+1-i; 1]_q for 0 <= i <= r.

use std::collections::HashMap;
use std::sync::Mutex;

use num_traits::ToPrimitive;
use once_cell::sync::Lazy;

use crate::qnum::{gaussian_binom, points, ExactInt};

/// Attainability table for lengths of q^r-divisible codes, with a
/// certified horizon beyond which every length is attainable.
#[derive(Debug, Clone)]
pub struct DivisibleLengths {
    pub q: u64,
    pub r: u64,
    /// Base lengths s_i = q^i [r+1-i; 1]_q, i = 0..=r.
    pub bases: Vec<u64>,
    /// table[len] for len < horizon; lengths >= horizon are all attainable.
    table: Vec<bool>,
    horizon: u64,
}

static CACHE: Lazy<Mutex<HashMap<(u64, u64), DivisibleLengths>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

impl DivisibleLengths {
    pub fn get(q: u64, r: u64) -> DivisibleLengths {
        let key = (q, r);
        if let Some(v) = CACHE.lock().unwrap().get(&key) {
            return v.clone();
        }
        let v = DivisibleLengths::build(q, r);
        CACHE.lock().unwrap().insert(key, v.clone());
        v
    }

    fn build(q: u64, r: u64) -> DivisibleLengths {
        assert!(q >= 2);
        let bases: Vec<u64> = (0..=r)
            .map(|i| {
                q.pow(i as u32)
                    * points(r + 1 - i, q)
                        .to_u64()
                        .expect("base length fits in u64 for supported r")
            })
            .collect();
        // Numerical semigroup generated by the bases. Grow the table until
        // a full run of [r+1; 1]_q consecutive attainable lengths appears:
        // the smallest base s_0 = [r+1;1]_q then reaches everything beyond.
        let run_needed = bases[0];
        let mut table = vec![false; 1];
        table[0] = true;
        let mut run = 0u64;
        let mut horizon = None;
        let mut len = 0u64;
        while horizon.is_none() {
            len += 1;
            if len as usize >= table.len() {
                table.resize(table.len() * 2 + 16, false);
            }
            let ok = bases
                .iter()
                .any(|&b| b <= len && table[(len - b) as usize]);
            table[len as usize] = ok;
            run = if ok { run + 1 } else { 0 };
            if run == run_needed {
                horizon = Some(len + 1 - run_needed);
            }
        }
        let horizon = horizon.unwrap();
        table.truncate(len as usize + 1);
        DivisibleLengths { q, r, bases, table, horizon }
    }

    /// First length such that every length >= it is attainable.
    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn attainable(&self, len: &ExactInt) -> bool {
        match len.to_u64() {
            Some(l) if l < self.horizon => self.table[l as usize],
            _ => true,
        }
    }
}

/// Is `len` the length of some q^r-divisible code over GF(q)?
pub fn attainable(q: u64, r: u64, len: &ExactInt) -> bool {
    DivisibleLengths::get(q, r).attainable(len)
}

/// Result of the divisible-code rounding of a fraction a / [k; 1]_q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReducedFraction {
    /// The largest b <= floor(a / [k;1]_q) such that a - b [k;1]_q is an
    /// attainable length of a q^{k-1}-divisible code.
    Bound(ExactInt),
    /// No such b >= 0 exists: the covering configuration the fraction
    /// models is infeasible outright.
    Infeasible,
}

/// The rounding operation {a / [k;1]_q}_k: descend from the plain floor
/// until the residual point count is realizable by a q^{k-1}-divisible
/// code.
pub fn reduce_frac(a: &ExactInt, k: u64, q: u64) -> ReducedFraction {
    assert!(k >= 1);
    let den = gaussian_binom(k as i64, 1, q);
    let lengths = DivisibleLengths::get(q, k - 1);
    let mut b = a / &den;
    loop {
        let rem = a - &b * &den;
        if lengths.attainable(&rem) {
            return ReducedFraction::Bound(b);
        }
        if b == ExactInt::from(0u32) {
            return ReducedFraction::Infeasible;
        }
        b -= 1u32;
    }
}
