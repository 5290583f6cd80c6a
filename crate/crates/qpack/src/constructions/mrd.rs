//! Gabidulin maximum rank distance codes, pairwise-disjoint translate
//! unions, and lifting to subspace collections.
//!
//! A Gabidulin code of designed distance delta in GF(q)^{m x nu}
//! (m >= nu) consists of the evaluations of linearized polynomials
//! f(x) = sum f_i x^{q^i}, with nu - delta + 1 coefficients, at nu
//! GF(q)-independent points of GF(q^m). Nesting by designed distance
//! yields the disjoint translate family: cosets of the delta-code inside
//! the (delta-1)-code, shifted by multiples of the extra monomial.

use std::sync::Arc;

use thiserror::Error;

use crate::field::{field_for_order, FieldSpec};
use crate::spaces::{rref, PackingCollection, SpaceError, SubspaceMatrix};

#[derive(Debug, Error)]
pub enum MrdError {
    #[error("invalid rank-code parameters: {0}")]
    BadParams(String),
    #[error("enumeration budget exceeded: code has {0} codewords, budget {1}")]
    BudgetExceeded(u128, u64),
    #[error("field error: {0}")]
    Field(#[from] crate::field::FieldError),
    #[error("space error: {0}")]
    Space(#[from] SpaceError),
}

/// GF(q^m) as polynomials over the (possibly non-prime) base field GF(q),
/// reduced modulo a monic irreducible of degree m. Elements are coordinate
/// vectors over GF(q) in the basis 1, x, ..., x^{m-1}, which makes the
/// expansion of codeword symbols into matrix columns immediate.
struct ExtField {
    base: Arc<FieldSpec>,
    m: usize,
    /// Coefficients c_0..c_{m-1} with x^m = -(c_0 + c_1 x + ... ).
    reduction: Vec<u32>,
}

type ExtElem = Vec<u32>;

impl ExtField {
    fn new(q: u32, m: usize) -> Result<ExtField, MrdError> {
        assert!(m >= 1);
        let base = field_for_order(q)?;
        let modulus = irreducible_poly(&base, m)
            .ok_or_else(|| MrdError::BadParams(format!("no irreducible of degree {m} over GF({q})")))?;
        let reduction = modulus[..m].iter().map(|&c| base.neg(c)).collect();
        Ok(ExtField { base, m, reduction })
    }

    fn zero(&self) -> ExtElem {
        vec![0; self.m]
    }

    fn monomial(&self, i: usize) -> ExtElem {
        let mut e = self.zero();
        e[i] = 1;
        e
    }

    fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        a.iter().zip(b).map(|(&x, &y)| self.base.add(x, y)).collect()
    }

    #[cfg(test)]
    fn scale(&self, c: u32, a: &ExtElem) -> ExtElem {
        a.iter().map(|&x| self.base.mul(c, x)).collect()
    }

    fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let m = self.m;
        let mut prod = vec![0u32; 2 * m - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = self.base.add(prod[i + j], self.base.mul(ai, bj));
            }
        }
        // reduce degrees >= m downward
        for d in (m..2 * m - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &r) in self.reduction.iter().enumerate() {
                prod[d - m + i] = self.base.add(prod[d - m + i], self.base.mul(c, r));
            }
        }
        prod.truncate(m);
        prod
    }

    fn pow(&self, a: &ExtElem, mut e: u128) -> ExtElem {
        let mut result = self.monomial(0);
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }

    /// a^{q^i}, the i-fold q-Frobenius.
    fn frob(&self, a: &ExtElem, i: usize) -> ExtElem {
        let mut r = a.clone();
        for _ in 0..i {
            r = self.pow(&r.clone(), self.base.order() as u128);
        }
        r
    }
}

/// Lexicographically least monic irreducible of degree m over the given
/// field, as coefficients c_0..c_m (c_m = 1).
fn irreducible_poly(base: &FieldSpec, m: usize) -> Option<Vec<u32>> {
    let q = base.order() as u64;
    let mut coeffs = vec![0u32; m + 1];
    coeffs[m] = 1;
    let total = (q as u128).pow(m as u32);
    for idx in 0..total {
        let mut v = idx;
        for c in coeffs[..m].iter_mut() {
            *c = (v % q as u128) as u32;
            v /= q as u128;
        }
        if poly_irreducible(base, &coeffs) {
            return Some(coeffs);
        }
    }
    None
}

/// Trial division by all monic polynomials of degree <= deg/2.
fn poly_irreducible(base: &FieldSpec, poly: &[u32]) -> bool {
    let deg = poly.len() - 1;
    if deg == 0 || poly[0] == 0 {
        return deg == 0 && poly[0] != 0;
    }
    let q = base.order() as u64;
    for d in 1..=deg / 2 {
        let mut div = vec![0u32; d + 1];
        div[d] = 1;
        let total = (q as u128).pow(d as u32);
        for idx in 0..total {
            let mut v = idx;
            for c in div[..d].iter_mut() {
                *c = (v % q as u128) as u32;
                v /= q as u128;
            }
            if poly_divides(base, &div, poly) {
                return false;
            }
        }
    }
    true
}

fn poly_divides(base: &FieldSpec, div: &[u32], poly: &[u32]) -> bool {
    let mut rem: Vec<u32> = poly.to_vec();
    let d = div.len() - 1;
    while rem.len() > d {
        let lead = *rem.last().unwrap();
        if lead != 0 {
            let shift = rem.len() - 1 - d;
            for (i, &c) in div.iter().enumerate() {
                let sub = base.mul(lead, c);
                rem[shift + i] = base.sub(rem[shift + i], sub);
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

/// A rank-metric code: a list of k x eta matrices over GF(q) with a
/// certified minimum rank distance.
#[derive(Debug, Clone)]
pub struct RankCode {
    pub q: u32,
    pub rows: usize,
    pub cols: usize,
    pub codewords: Vec<Vec<Vec<u32>>>,
    pub min_distance: usize,
}

impl RankCode {
    /// Exhaustively (or for large codes, on a sample) check that all
    /// distinct pairs are at rank distance >= min_distance.
    pub fn verify(&self, pair_budget: u64) -> Result<bool, MrdError> {
        let n = self.codewords.len();
        let mut checked = 0u64;
        for i in 0..n {
            for j in i + 1..n {
                if checked >= pair_budget {
                    return Ok(true);
                }
                let d = crate::spaces::rank_distance(self.q, &self.codewords[i], &self.codewords[j])?;
                if d < self.min_distance {
                    return Ok(false);
                }
                checked += 1;
            }
        }
        Ok(true)
    }
}

/// Number of codewords of the (translated union of) Gabidulin code(s):
/// count * q^{max(k,eta)(min(k,eta)-delta+1)}.
pub fn mrd_union_size(q: u32, k: usize, eta: usize, delta: usize, count: u64) -> u128 {
    let m = k.max(eta) as u32;
    let kappa = (k.min(eta) - delta + 1) as u32;
    count as u128 * (q as u128).pow(m * kappa)
}

/// A linear MRD code in GF(q)^{k x eta} with minimum rank distance delta.
pub fn gabidulin_mrd(q: u32, k: usize, eta: usize, delta: usize, budget: u64) -> Result<RankCode, MrdError> {
    disjoint_translates(q, k, eta, delta, 1, budget)
}

/// The union of `count` pairwise disjoint translates of a linear MRD code
/// with minimum rank distance delta. Within each translate the distance
/// is delta; across translates it is delta - 1 (for count = 1 the whole
/// union keeps distance delta).
pub fn disjoint_translates(
    q: u32,
    k: usize,
    eta: usize,
    delta: usize,
    count: u64,
    budget: u64,
) -> Result<RankCode, MrdError> {
    let nu = k.min(eta);
    let m = k.max(eta);
    if delta < 1 || delta > nu {
        return Err(MrdError::BadParams(format!(
            "need 1 <= delta <= min(k, eta), got delta={delta} k={k} eta={eta}"
        )));
    }
    if count == 0 {
        return Err(MrdError::BadParams("need at least one translate".into()));
    }
    if count > 1 && delta < 2 {
        return Err(MrdError::BadParams(
            "disjoint translates need delta >= 2 (the union drops to distance delta - 1)".into(),
        ));
    }
    let q_big = q as u128;
    if count as u128 > q_big.pow(nu as u32) {
        return Err(MrdError::BadParams(format!(
            "at most q^min(k,eta) = {} translates exist, requested {count}",
            q_big.pow(nu as u32)
        )));
    }
    let total = mrd_union_size(q, k, eta, delta, count);
    if total > budget as u128 {
        return Err(MrdError::BudgetExceeded(total, budget));
    }

    let field = ExtField::new(q, m)?;
    let kappa = nu - delta + 1;
    // Evaluation points 1, x, ..., x^{nu-1}; precompute their q^i powers
    // for i = 0..=kappa (index kappa feeds the translate monomial).
    let mut point_powers: Vec<Vec<ExtElem>> = Vec::with_capacity(nu);
    for j in 0..nu {
        let g = field.monomial(j);
        let powers: Vec<ExtElem> = (0..=kappa).map(|i| field.frob(&g, i)).collect();
        point_powers.push(powers);
    }
    // Translate offsets: the first `count` elements of GF(q^m) in
    // coordinate-odometer order (the first is zero: the code itself).
    let mut offsets: Vec<ExtElem> = Vec::with_capacity(count as usize);
    {
        let mut e = field.zero();
        for _ in 0..count {
            offsets.push(e.clone());
            for digit in e.iter_mut() {
                *digit += 1;
                if *digit < q {
                    break;
                }
                *digit = 0;
            }
        }
    }

    let transpose = k < eta;
    let mut codewords = Vec::with_capacity(total as usize);
    let coeff_count = (q_big.pow(m as u32)).pow(kappa as u32);
    for a in &offsets {
        for mut idx in 0..coeff_count {
            // decode idx into kappa coefficients of GF(q^m)
            let mut columns: Vec<ExtElem> = vec![field.zero(); nu];
            for i in 0..kappa {
                let mut f_i = field.zero();
                for digit in f_i.iter_mut() {
                    *digit = (idx % q_big) as u32;
                    idx /= q_big;
                }
                if f_i.iter().all(|&d| d == 0) {
                    continue;
                }
                for (j, col) in columns.iter_mut().enumerate() {
                    *col = field.add(col, &field.mul(&f_i, &point_powers[j][i]));
                }
            }
            if a.iter().any(|&d| d != 0) {
                for (j, col) in columns.iter_mut().enumerate() {
                    *col = field.add(col, &field.mul(a, &point_powers[j][kappa]));
                }
            }
            // columns[j][r] is entry (r, j) of the m x nu matrix
            let mat: Vec<Vec<u32>> = if transpose {
                (0..nu).map(|j| columns[j].clone()).collect()
            } else {
                (0..m).map(|r| (0..nu).map(|j| columns[j][r]).collect()).collect()
            };
            codewords.push(mat);
        }
    }
    Ok(RankCode {
        q,
        rows: k,
        cols: eta,
        codewords,
        min_distance: if count > 1 { delta - 1 } else { delta },
    })
}

/// Lift a rank code in GF(q)^{k x (n-k)} to k-subspaces rowspace(I_k | A)
/// of GF(q)^n.
pub fn lift(code: &RankCode, n: usize) -> Result<Vec<SubspaceMatrix>, MrdError> {
    let k = code.rows;
    if code.cols + k != n {
        return Err(MrdError::BadParams(format!(
            "lifting needs cols = n - k, got {} x {} into ambient {n}",
            code.rows, code.cols
        )));
    }
    let mut out = Vec::with_capacity(code.codewords.len());
    for a in &code.codewords {
        let rows: Vec<Vec<u32>> = (0..k)
            .map(|r| {
                let mut row = vec![0u32; n];
                row[r] = 1;
                row[k..].copy_from_slice(&a[r]);
                row
            })
            .collect();
        out.push(rref(code.q, rows)?);
    }
    Ok(out)
}

/// Construction: the lifted union of disjoint MRD translates, a covering
/// Grassmannian code in which any alpha distinct codewords span dimension
/// at least k + delta. Returns the k-subspaces of GF(q)^n.
pub fn lifted_mrd(
    q: u32,
    n: usize,
    k: usize,
    delta: usize,
    alpha: u64,
    budget: u64,
) -> Result<PackingCollection, MrdError> {
    if alpha < 2 {
        return Err(MrdError::BadParams("need alpha >= 2".into()));
    }
    if k + delta > n {
        return Err(MrdError::BadParams(format!("need k + delta <= n, got {k} + {delta} > {n}")));
    }
    let code = disjoint_translates(q, k, n - k, delta, alpha - 1, budget)?;
    let blocks = lift(&code, n)?;
    Ok(PackingCollection::new(q, n, k, blocks)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{is_packing, rank_distance};

    #[test]
    fn irreducible_polys() {
        let f2 = field_for_order(2).unwrap();
        // degree 2 over GF(2): x^2 + x + 1
        assert_eq!(irreducible_poly(&f2, 2).unwrap(), vec![1, 1, 1]);
        // degree 3 over GF(2): x^3 + x + 1
        assert_eq!(irreducible_poly(&f2, 3).unwrap(), vec![1, 1, 0, 1]);
        let f3 = field_for_order(3).unwrap();
        // degree 2 over GF(3): x^2 + 1
        assert_eq!(irreducible_poly(&f3, 2).unwrap(), vec![1, 0, 1]);
    }

    #[test]
    fn ext_field_axioms_small() {
        let f = ExtField::new(2, 3).unwrap();
        let one = f.monomial(0);
        let x = f.monomial(1);
        // x^3 = x + 1 under x^3 + x + 1
        let x3 = f.pow(&x, 3);
        assert_eq!(x3, f.add(&x, &one));
        // multiplicative order of x is 7
        assert_eq!(f.pow(&x, 7), one);
        assert_ne!(f.pow(&x, 3), one);
        // frobenius is additive: (a+b)^2 = a^2 + b^2
        let a = f.add(&x, &one);
        let b = f.pow(&x, 5);
        assert_eq!(f.frob(&f.add(&a, &b), 1), f.add(&f.frob(&a, 1), &f.frob(&b, 1)));
    }

    #[test]
    fn ext_field_over_gf4() {
        // GF(4^2) built on the non-prime base GF(4)
        let f = ExtField::new(4, 2).unwrap();
        let x = f.monomial(1);
        let one = f.monomial(0);
        // x has order dividing 15 and not 5 or 3 only if it's primitive;
        // at minimum x^15 = 1 in GF(16)*
        assert_eq!(f.pow(&x, 15), one);
        // q-frobenius fixes exactly the base field elements
        for c in 0..4u32 {
            let e = f.scale(c, &one);
            assert_eq!(f.frob(&e, 1), e);
        }
        assert_ne!(f.frob(&x, 1), x);
    }

    #[test]
    fn mrd_sizes() {
        // (2,3,3,2): 2^{3*2} = 64
        let c = gabidulin_mrd(2, 3, 3, 2, 1_000_000).unwrap();
        assert_eq!(c.codewords.len(), 64);
        // delta = 1: the whole matrix space
        let c = gabidulin_mrd(2, 2, 2, 1, 1_000_000).unwrap();
        assert_eq!(c.codewords.len(), 16);
        // transpose normalization: 2 x 4 with delta 2 -> 2^{4*1} = 16
        let c = gabidulin_mrd(2, 2, 4, 2, 1_000_000).unwrap();
        assert_eq!(c.codewords.len(), 16);
        assert_eq!((c.rows, c.cols), (2, 4));
        assert_eq!(mrd_union_size(2, 2, 4, 2, 3), 48);
    }

    #[test]
    fn mrd_distance_exhaustive() {
        for (q, k, eta, delta) in [(2u32, 3usize, 3usize, 2usize), (2, 3, 3, 3), (3, 2, 2, 2), (2, 2, 4, 2)] {
            let c = gabidulin_mrd(q, k, eta, delta, 1_000_000).unwrap();
            assert!(c.verify(u64::MAX).unwrap(), "distance {delta} violated for q={q} k={k} eta={eta}");
            // all codewords distinct
            let set: std::collections::HashSet<_> = c.codewords.iter().cloned().collect();
            assert_eq!(set.len(), c.codewords.len());
            // zero matrix is a codeword (linearity spot check)
            assert!(c.codewords.iter().any(|m| m.iter().all(|r| r.iter().all(|&x| x == 0))));
        }
    }

    #[test]
    fn translate_union_distances() {
        // union of 2 translates at delta = 2: cross pairs >= 1, in-code >= 2
        let u = disjoint_translates(2, 3, 3, 2, 2, 1_000_000).unwrap();
        assert_eq!(u.codewords.len(), 128);
        assert!(u.verify(u64::MAX).unwrap());
        let single = 64;
        // verify the sharper in-code distance on each translate half
        for half in 0..2 {
            let block = &u.codewords[half * single..(half + 1) * single];
            for i in 0..single {
                for j in i + 1..single {
                    let d = rank_distance(2, &block[i], &block[j]).unwrap();
                    assert!(d >= 2);
                }
            }
        }
        // some cross pair is at distance exactly 1 = delta - 1
        let mut min_cross = usize::MAX;
        for a in &u.codewords[..single] {
            for b in &u.codewords[single..] {
                min_cross = min_cross.min(rank_distance(2, a, b).unwrap());
            }
        }
        assert_eq!(min_cross, 1);
    }

    #[test]
    fn translate_guards() {
        assert!(disjoint_translates(2, 3, 3, 1, 2, 1_000_000).is_err());
        assert!(disjoint_translates(2, 3, 3, 4, 1, 1_000_000).is_err());
        assert!(disjoint_translates(2, 2, 2, 2, 5, 1_000_000).is_err());
        assert!(matches!(
            gabidulin_mrd(2, 4, 4, 2, 10),
            Err(MrdError::BudgetExceeded(_, 10))
        ));
    }

    #[test]
    fn lifted_mrd_packs() {
        // B_2(6,3,2;alpha) for alpha in {2,3}: 64(alpha-1) planes of
        // GF(2)^6, any alpha of which span dimension >= 5; dually a
        // packing with t = n-k-delta+1 = 2 and lambda = alpha-1.
        for alpha in [2u64, 3] {
            let c = lifted_mrd(2, 6, 3, 2, alpha, 1_000_000).unwrap();
            assert_eq!(c.cardinality() as u64, 64 * (alpha - 1));
            let dual = c.dual().unwrap();
            let v = is_packing(&dual, 2, alpha - 1).unwrap();
            assert!(v.valid, "alpha = {alpha}");
        }
    }

    #[test]
    fn lifted_mrd_a_side_512() {
        // A_2(8,4,2;2) >= 512 via B_2(8,4,3;3): 2 * 2^{4*2} = 512
        assert_eq!(mrd_union_size(2, 4, 4, 3, 2), 512);
        assert_eq!(mrd_union_size(2, 4, 4, 3, 3), 768);
        assert_eq!(mrd_union_size(2, 4, 4, 3, 4), 1024);
    }
}
