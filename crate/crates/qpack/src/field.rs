//! Arithmetic in prime fields GF(p) and extension fields GF(p^m).
//!
//! Elements are encoded as integers in `[0, q)`: the element with polynomial
//! coordinates `c_0 + c_1 x + ... + c_{m-1} x^{m-1}` is encoded as
//! `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`. The encoding is canonical, so
//! matrices over the field hash and compare bit-exactly.

use std::fmt;
use std::sync::Arc;
use std::sync::Mutex;

use once_cell::sync::Lazy;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NonPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus polynomial is not monic of degree {0}")]
    BadModulusShape(u32),
    #[error("modulus polynomial is reducible over GF({0})")]
    ReducibleModulus(u32),
    #[error("field order {0} exceeds the supported range")]
    OrderTooLarge(u64),
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("elements belong to different fields")]
    MixedFields,
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A concrete finite field GF(p^m), q = p^m <= 2^16.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    m: u32,
    q: u32,
    /// Monic modulus polynomial, coefficients low-to-high, length m+1.
    modulus: Vec<u32>,
    /// Full multiplication table (q*q entries); q <= 2^16 keeps this small
    /// for the parameter ranges we care about (q <= 512 in practice).
    mul_table: Option<Vec<u32>>,
    inv_table: Option<Vec<u32>>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)?;
        if self.m > 1 {
            write!(f, " = GF({}^{})", self.p, self.m)?;
        }
        Ok(())
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}
impl Eq for FieldSpec {}

const TABLE_LIMIT: u64 = 1024;

impl FieldSpec {
    /// Build GF(p^m). With `modulus == None` the lexicographically least
    /// monic irreducible polynomial of degree m is selected, so identical
    /// inputs always produce identical arithmetic.
    pub fn new(p: u32, m: u32, modulus: Option<Vec<u32>>) -> Result<FieldSpec, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u64).checked_pow(m).ok_or(FieldError::OrderTooLarge(u64::MAX))?;
        if q > 1 << 16 {
            return Err(FieldError::OrderTooLarge(q));
        }
        let q = q as u32;
        let modulus = match modulus {
            Some(coeffs) => {
                if coeffs.len() != m as usize + 1
                    || coeffs[m as usize] != 1
                    || coeffs.iter().any(|&c| c >= p)
                {
                    return Err(FieldError::BadModulusShape(m));
                }
                if m > 1 && !poly_is_irreducible(p, &coeffs) {
                    return Err(FieldError::ReducibleModulus(p));
                }
                coeffs
            }
            None => default_modulus(p, m),
        };
        let mut spec = FieldSpec { p, m, q, modulus, mul_table: None, inv_table: None };
        if (q as u64) * (q as u64) <= TABLE_LIMIT * TABLE_LIMIT {
            let mut table = vec![0u32; (q as usize) * (q as usize)];
            for a in 0..q {
                for b in a..q {
                    let v = spec.mul_slow(a, b);
                    table[(a as usize) * (q as usize) + b as usize] = v;
                    table[(b as usize) * (q as usize) + a as usize] = v;
                }
            }
            let mut inv = vec![0u32; q as usize];
            for a in 1..q {
                inv[a as usize] = spec.pow_raw(a, (q - 2) as u64, &table);
            }
            spec.mul_table = Some(table);
            spec.inv_table = Some(inv);
        }
        Ok(spec)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.q && b < self.q);
        if self.p == 2 {
            return a ^ b;
        }
        if self.m == 1 {
            return (a + b) % self.p;
        }
        let mut out = 0u32;
        let mut mult = 1u32;
        let (mut a, mut b) = (a, b);
        for _ in 0..self.m {
            out += ((a % self.p + b % self.p) % self.p) * mult;
            a /= self.p;
            b /= self.p;
            mult *= self.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        debug_assert!(a < self.q);
        if self.p == 2 {
            return a;
        }
        if self.m == 1 {
            return (self.p - a) % self.p;
        }
        let mut out = 0u32;
        let mut mult = 1u32;
        let mut a = a;
        for _ in 0..self.m {
            out += ((self.p - a % self.p) % self.p) * mult;
            a /= self.p;
            mult *= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.q && b < self.q);
        if let Some(table) = &self.mul_table {
            return table[(a as usize) * (self.q as usize) + b as usize];
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        // Schoolbook polynomial product followed by reduction mod the modulus.
        let ad = digits(a, self.p, self.m);
        let bd = digits(b, self.p, self.m);
        let deg = (2 * self.m - 2) as usize;
        let mut prod = vec![0u64; deg + 1];
        for (i, &ai) in ad.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in bd.iter().enumerate() {
                prod[i + j] += ai as u64 * bj as u64;
            }
        }
        for c in prod.iter_mut() {
            *c %= self.p as u64;
        }
        // Reduce: x^m = -(modulus lower part).
        for i in (self.m as usize..=deg).rev() {
            let c = prod[i] % self.p as u64;
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..self.m as usize {
                let mj = self.modulus[j] as u64;
                if mj == 0 {
                    continue;
                }
                let sub = (c * mj) % self.p as u64;
                let idx = i - self.m as usize + j;
                prod[idx] = (prod[idx] + self.p as u64 - sub) % self.p as u64;
            }
        }
        let mut out = 0u32;
        let mut mult = 1u32;
        for c in prod.iter().take(self.m as usize) {
            out += (*c as u32) * mult;
            mult = mult.saturating_mul(self.p);
        }
        out
    }

    fn pow_raw(&self, a: u32, mut e: u64, table: &[u32]) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = table[(acc as usize) * (self.q as usize) + base as usize];
            }
            base = table[(base as usize) * (self.q as usize) + base as usize];
            e >>= 1;
        }
        acc
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        e %= (self.q - 1) as u64;
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Result<u32, FieldError> {
        if a == 0 {
            return Err(FieldError::ZeroInverse);
        }
        if let Some(inv) = &self.inv_table {
            return Ok(inv[a as usize]);
        }
        Ok(self.pow(a, (self.q - 2) as u64))
    }

    /// frobenius^i: x -> x^(p^i).
    pub fn frobenius(&self, a: u32, i: u32) -> u32 {
        let e = (self.p as u64).pow(i % self.m);
        self.pow(a, e)
    }
}

fn digits(mut a: u32, p: u32, m: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(m as usize);
    for _ in 0..m {
        out.push(a % p);
        a /= p;
    }
    out
}

/// Polynomials over GF(p) as coefficient vectors, low-to-high, used only for
/// irreducibility testing of moduli (degrees <= 16).
fn poly_trim(v: &mut Vec<u32>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn poly_rem(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db], p);
    while r.len() > db && !(r.len() == 1 && r[0] == 0) {
        let dr = r.len() - 1;
        let factor = (r[dr] as u64 * lead_inv as u64 % p as u64) as u32;
        for j in 0..=db {
            let idx = dr - db + j;
            let sub = (factor as u64 * b[j] as u64 % p as u64) as u32;
            r[idx] = ((r[idx] + p) - sub) % p;
        }
        poly_trim(&mut r);
        if r.iter().all(|&c| c == 0) {
            return vec![0];
        }
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
pub fn poly_is_irreducible(p: u32, coeffs: &[u32]) -> bool {
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    if coeffs[0] == 0 {
        return false; // divisible by x
    }
    for d in 1..=deg / 2 {
        // All monic polynomials of degree d: p^d lower coefficient choices.
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut v = idx;
            for _ in 0..d {
                div.push((v % p as u64) as u32);
                v /= p as u64;
            }
            div.push(1);
            let rem = poly_rem(p, coeffs, &div);
            if rem.len() == 1 && rem[0] == 0 {
                return false;
            }
        }
    }
    true
}

/// Lexicographically least monic irreducible of degree m over GF(p),
/// ordering lower coefficients as a base-p integer.
fn default_modulus(p: u32, m: u32) -> Vec<u32> {
    if m == 1 {
        return vec![0, 1]; // x; unused for prime fields but keeps the shape
    }
    let count = (p as u64).pow(m);
    for idx in 0..count {
        let mut coeffs = Vec::with_capacity(m as usize + 1);
        let mut v = idx;
        for _ in 0..m {
            coeffs.push((v % p as u64) as u32);
            v /= p as u64;
        }
        coeffs.push(1);
        if poly_is_irreducible(p, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over GF(p)")
}

/// Shared cache of fields keyed by order, with the deterministic default
/// modulus. Subspace code routines look fields up by q = p^m.
static FIELD_CACHE: Lazy<Mutex<std::collections::HashMap<u32, Arc<FieldSpec>>>> =
    Lazy::new(|| Mutex::new(std::collections::HashMap::new()));

/// Factor q as p^m; error if q is not a prime power.
pub fn prime_power(q: u32) -> Result<(u32, u32), FieldError> {
    if q < 2 {
        return Err(FieldError::NonPrime(q));
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut m = 0;
            let mut v = q;
            while v % p == 0 {
                v /= p;
                m += 1;
            }
            if v != 1 {
                return Err(FieldError::NonPrime(q));
            }
            return Ok((p, m));
        }
        p += 1;
    }
    Ok((q, 1))
}

pub fn field_for_order(q: u32) -> Result<Arc<FieldSpec>, FieldError> {
    let mut cache = FIELD_CACHE.lock().unwrap();
    if let Some(f) = cache.get(&q) {
        return Ok(f.clone());
    }
    let (p, m) = prime_power(q)?;
    let spec = Arc::new(FieldSpec::new(p, m, None)?);
    cache.insert(q, spec.clone());
    Ok(spec)
}

/// An element paired with its field, mainly for tests and examples; hot
/// paths use the raw `u32` methods on `FieldSpec`.
#[derive(Clone)]
pub struct FieldElement {
    pub spec: Arc<FieldSpec>,
    pub value: u32,
}

impl FieldElement {
    pub fn new(spec: Arc<FieldSpec>, value: u32) -> FieldElement {
        assert!(value < spec.order());
        FieldElement { spec, value }
    }

    pub fn checked_add(&self, rhs: &FieldElement) -> Result<FieldElement, FieldError> {
        if self.spec != rhs.spec {
            return Err(FieldError::MixedFields);
        }
        Ok(FieldElement { spec: self.spec.clone(), value: self.spec.add(self.value, rhs.value) })
    }

    pub fn checked_mul(&self, rhs: &FieldElement) -> Result<FieldElement, FieldError> {
        if self.spec != rhs.spec {
            return Err(FieldError::MixedFields);
        }
        Ok(FieldElement { spec: self.spec.clone(), value: self.spec.mul(self.value, rhs.value) })
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        Ok(FieldElement { spec: self.spec.clone(), value: self.spec.inv(self.value)? })
    }

    pub fn frobenius(&self, i: u32) -> FieldElement {
        FieldElement { spec: self.spec.clone(), value: self.spec.frobenius(self.value, i) }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{:?}", self.value, self.spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = FieldSpec::new(3, 1, None).unwrap();
        assert_eq!(f.order(), 3);
        assert_eq!(f.mul(2, 2), 1);
        assert_eq!(f.add(2, 2), 1);
        assert_eq!(f.inv(2).unwrap(), 2);
    }

    #[test]
    fn gf8_with_standard_modulus() {
        // x^3 + x + 1
        let f = FieldSpec::new(2, 3, Some(vec![1, 1, 0, 1])).unwrap();
        assert_eq!(f.order(), 8);
        // x * x^2 = x^3 = x + 1
        let x = 2u32;
        let x2 = 4u32;
        assert_eq!(f.mul(x, x2), 3);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(FieldSpec::new(4, 1, None).unwrap_err(), FieldError::NonPrime(4));
        // x^2 + 1 = (x+1)^2 over GF(2)
        assert_eq!(
            FieldSpec::new(2, 2, Some(vec![1, 0, 1])).unwrap_err(),
            FieldError::ReducibleModulus(2)
        );
        let f = FieldSpec::new(2, 1, None).unwrap();
        assert_eq!(f.inv(0).unwrap_err(), FieldError::ZeroInverse);
    }

    #[test]
    fn frobenius_fixes_gf2() {
        let f = FieldSpec::new(2, 1, None).unwrap();
        for a in f.elements() {
            assert_eq!(f.frobenius(a, 1), a);
        }
    }

    #[test]
    fn field_axioms_exhaustive_small_orders() {
        for q in [2u32, 3, 4, 8, 9] {
            let f = field_for_order(q).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    if b != 0 {
                        let binv = f.inv(b).unwrap();
                        assert_eq!(f.mul(b, binv), 1, "inverse failed in GF({q})");
                    }
                    for c in f.elements() {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c)),
                            "distributivity failed in GF({q})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_is_automorphism() {
        for q in [4u32, 8, 9] {
            let f = field_for_order(q).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(
                        f.frobenius(f.add(a, b), 1),
                        f.add(f.frobenius(a, 1), f.frobenius(b, 1))
                    );
                    assert_eq!(
                        f.frobenius(f.mul(a, b), 1),
                        f.mul(f.frobenius(a, 1), f.frobenius(b, 1))
                    );
                }
            }
            // fixes the prime subfield
            for a in 0..f.characteristic() {
                assert_eq!(f.frobenius(a, 1), a);
            }
        }
    }

    #[test]
    fn deterministic_default_modulus() {
        let a = FieldSpec::new(2, 4, None).unwrap();
        let b = FieldSpec::new(2, 4, None).unwrap();
        assert_eq!(a.modulus(), b.modulus());
    }

    #[test]
    fn element_wrapper_mixed_fields() {
        let f2 = field_for_order(2).unwrap();
        let f3 = field_for_order(3).unwrap();
        let a = FieldElement::new(f2, 1);
        let b = FieldElement::new(f3, 1);
        assert_eq!(a.checked_add(&b).unwrap_err(), FieldError::MixedFields);
    }
}
