//! Canonical subspace representation, Grassmannian enumeration, incidence
//! counting, the packing-validity checker, and distances.
//!
//! A subspace is represented by the unique matrix in reduced row echelon
//! form whose row space it is, so equality, hashing, and ordering are all
//! bit-exact on the representation.

mod brute;
mod spread;

pub use brute::{brute_force_max, BruteForceResult};
pub use spread::{search_special_spread, SpreadSearchError};

use std::fmt;
use std::io::{BufRead, Write};
use std::sync::Arc;

use thiserror::Error;

use crate::field::{field_for_order, prime_power, FieldSpec};
use crate::qnum::{gaussian_binom, ExactInt};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpaceError {
    #[error("zero matrix has no subspace representation")]
    ZeroMatrix,
    #[error("ambient parameters do not match: {0}")]
    AmbientMismatch(String),
    #[error("enumeration budget exceeded: {0} subspaces requested, budget {1}")]
    BudgetExceeded(ExactInt, u64),
    #[error("invalid packing parameters: {0}")]
    BadParams(String),
    #[error("field error: {0}")]
    Field(#[from] crate::field::FieldError),
    #[error("malformed certificate at line {line}: {msg}")]
    BadCertificate { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for SpaceError {
    fn from(e: std::io::Error) -> Self {
        SpaceError::Io(e.to_string())
    }
}

/// The parameter tuple indexing A_q(n,k,t;lambda) (no repeated blocks)
/// or A^r_q(n,k,t;lambda) (`repeated: true`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct PackingParams {
    pub q: u32,
    pub n: u32,
    pub k: u32,
    pub t: u32,
    pub lambda: u64,
    pub repeated: bool,
}

impl PackingParams {
    pub fn new(q: u32, n: u32, k: u32, t: u32, lambda: u64, repeated: bool) -> Result<Self, SpaceError> {
        let p = PackingParams { q, n, k, t, lambda, repeated };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), SpaceError> {
        if prime_power(self.q).is_err() {
            return Err(SpaceError::BadParams(format!("q = {} is not a prime power", self.q)));
        }
        if !(1 <= self.t && self.t <= self.k && self.k <= self.n) {
            return Err(SpaceError::BadParams(format!(
                "need 1 <= t <= k <= n, got t={} k={} n={}",
                self.t, self.k, self.n
            )));
        }
        if self.lambda == 0 {
            return Err(SpaceError::BadParams("lambda must be >= 1".into()));
        }
        Ok(())
    }

    pub fn with_repeated(mut self, repeated: bool) -> Self {
        self.repeated = repeated;
        self
    }
}

impl fmt::Display for PackingParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "A{}_{}({},{},{};{})",
            if self.repeated { "^r" } else { "" },
            self.q,
            self.n,
            self.k,
            self.t,
            self.lambda
        )
    }
}

/// A k-subspace of GF(q)^n, stored as its k x n RREF matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubspaceMatrix {
    q: u32,
    n: usize,
    rows: Vec<Vec<u32>>,
}

impl fmt::Debug for SubspaceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}x{}/GF({})", self.rows.len(), self.n, self.q)?;
        for r in &self.rows {
            write!(f, " ")?;
            for &c in r {
                write!(f, "{c}")?;
            }
        }
        write!(f, ">")
    }
}

impl SubspaceMatrix {
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }
    pub fn field(&self) -> Arc<FieldSpec> {
        field_for_order(self.q).expect("q validated at construction")
    }

    /// Row-major base-q digit string, used by the certificate format and
    /// the ILP sidecar map.
    pub fn digit_string(&self) -> String {
        let mut s = String::with_capacity(self.dim() * self.n);
        for r in &self.rows {
            for &c in r {
                s.push(char::from_digit(c, 10).expect("q <= 10 in serialized packings"));
            }
        }
        s
    }

    pub fn from_digit_string(q: u32, n: usize, k: usize, s: &str) -> Result<SubspaceMatrix, SpaceError> {
        let digits: Vec<u32> = s
            .chars()
            .map(|c| c.to_digit(10).filter(|&d| d < q).ok_or(SpaceError::ZeroMatrix))
            .collect::<Result<_, _>>()
            .map_err(|_| SpaceError::BadCertificate { line: 0, msg: format!("bad digit in {s:?}") })?;
        if digits.len() != k * n {
            return Err(SpaceError::BadCertificate {
                line: 0,
                msg: format!("expected {} digits, got {}", k * n, digits.len()),
            });
        }
        let rows: Vec<Vec<u32>> = digits.chunks(n).map(|c| c.to_vec()).collect();
        rref(q, rows)
    }
}

/// Reduce `rows` to the canonical RREF representative of their span.
/// Zero rows are dropped; an all-zero input is an error.
pub fn rref(q: u32, rows: Vec<Vec<u32>>) -> Result<SubspaceMatrix, SpaceError> {
    let field = field_for_order(q)?;
    let n = rows.first().map(|r| r.len()).unwrap_or(0);
    if rows.iter().any(|r| r.len() != n) {
        return Err(SpaceError::AmbientMismatch("ragged rows".into()));
    }
    let mut m = rows;
    let rank = rref_in_place(&field, &mut m);
    m.truncate(rank);
    if rank == 0 {
        return Err(SpaceError::ZeroMatrix);
    }
    Ok(SubspaceMatrix { q, n, rows: m })
}

/// In-place RREF; returns the rank. Rows beyond the rank are zero.
pub(crate) fn rref_in_place(field: &FieldSpec, m: &mut [Vec<u32>]) -> usize {
    let nrows = m.len();
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut pivot_row = 0;
    for col in 0..ncols {
        if pivot_row == nrows {
            break;
        }
        let Some(src) = (pivot_row..nrows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(pivot_row, src);
        let inv = field.inv(m[pivot_row][col]).expect("pivot nonzero");
        if inv != 1 {
            for c in col..ncols {
                m[pivot_row][c] = field.mul(m[pivot_row][c], inv);
            }
        }
        for r in 0..nrows {
            if r != pivot_row && m[r][col] != 0 {
                let factor = m[r][col];
                for c in col..ncols {
                    let sub = field.mul(factor, m[pivot_row][c]);
                    m[r][c] = field.sub(m[r][c], sub);
                }
            }
        }
        pivot_row += 1;
    }
    pivot_row
}

pub(crate) fn rank_of(field: &FieldSpec, rows: &[Vec<u32>]) -> usize {
    let mut m: Vec<Vec<u32>> = rows.to_vec();
    rref_in_place(field, &mut m)
}

/// Enumerate all k-subspaces of GF(q)^n in the deterministic order:
/// pivot-column sets in lexicographic order, then free entries counted
/// row-major as base-q digits.
pub fn enumerate_grassmannian(
    q: u32,
    n: usize,
    k: usize,
    budget: u64,
) -> Result<Vec<SubspaceMatrix>, SpaceError> {
    let count = gaussian_binom(n as i64, k as i64, q as u64);
    if count > ExactInt::from(budget) {
        return Err(SpaceError::BudgetExceeded(count, budget));
    }
    if k == 0 || k > n {
        return Ok(Vec::new());
    }
    field_for_order(q)?;
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        emit_for_pivots(q, n, k, &pivots, &mut out);
        // next k-combination of {0..n-1} in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if pivots[i] < n - (k - i) {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn emit_for_pivots(q: u32, n: usize, k: usize, pivots: &[usize], out: &mut Vec<SubspaceMatrix>) {
    // Free positions: (i, j) with j > pivots[i] and j not a pivot column.
    let mut free: Vec<(usize, usize)> = Vec::new();
    for i in 0..k {
        for j in pivots[i] + 1..n {
            if !pivots.contains(&j) {
                free.push((i, j));
            }
        }
    }
    let mut digits = vec![0u32; free.len()];
    loop {
        let mut rows = vec![vec![0u32; n]; k];
        for i in 0..k {
            rows[i][pivots[i]] = 1;
        }
        for (d, &(i, j)) in digits.iter().zip(free.iter()) {
            rows[i][j] = *d;
        }
        out.push(SubspaceMatrix { q, n, rows });
        // row-major odometer: last free position varies fastest
        let mut pos = free.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < q {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// dim(U+V) and dim(U cap V) for subspaces of the same ambient space.
pub fn dim_sum_intersect(u: &SubspaceMatrix, v: &SubspaceMatrix) -> Result<(usize, usize), SpaceError> {
    if u.q != v.q || u.n != v.n {
        return Err(SpaceError::AmbientMismatch(format!(
            "({}, GF({})) vs ({}, GF({}))",
            u.n, u.q, v.n, v.q
        )));
    }
    let field = u.field();
    let mut stacked: Vec<Vec<u32>> = u.rows.iter().chain(v.rows.iter()).cloned().collect();
    let sum = rref_in_place(&field, &mut stacked);
    let inter = u.dim() + v.dim() - sum;
    Ok((sum, inter))
}

/// Subspace distance d_S(U,V) = 2 dim(U+V) - dim U - dim V.
pub fn subspace_distance(u: &SubspaceMatrix, v: &SubspaceMatrix) -> Result<usize, SpaceError> {
    let (sum, _) = dim_sum_intersect(u, v)?;
    Ok(2 * sum - u.dim() - v.dim())
}

/// Rank distance d_R(A,B) = rank(A - B) on equally shaped matrices over GF(q).
pub fn rank_distance(q: u32, a: &[Vec<u32>], b: &[Vec<u32>]) -> Result<usize, SpaceError> {
    if a.len() != b.len() || a.iter().zip(b).any(|(x, y)| x.len() != y.len()) {
        return Err(SpaceError::AmbientMismatch("matrix shapes differ".into()));
    }
    let field = field_for_order(q)?;
    let diff: Vec<Vec<u32>> = a
        .iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(&u, &v)| field.sub(u, v)).collect())
        .collect();
    Ok(rank_of(&field, &diff))
}

/// Orthogonal complement with respect to the standard bilinear form.
pub fn dual_space(u: &SubspaceMatrix) -> Result<SubspaceMatrix, SpaceError> {
    if u.dim() == u.n {
        return Err(SpaceError::BadParams("dual of the full space is zero-dimensional".into()));
    }
    let field = u.field();
    let n = u.n;
    let k = u.dim();
    // Solve u * x^T = 0. u is already in RREF with pivot columns P; for each
    // non-pivot column c the vector with 1 at c and -u[i][c] at pivot i spans
    // the kernel.
    let mut pivots = Vec::with_capacity(k);
    for row in &u.rows {
        let p = row.iter().position(|&x| x != 0).expect("RREF rows nonzero");
        pivots.push(p);
    }
    let mut basis = Vec::with_capacity(n - k);
    for c in 0..n {
        if pivots.contains(&c) {
            continue;
        }
        let mut v = vec![0u32; n];
        v[c] = 1;
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = field.neg(u.rows[i][c]);
        }
        basis.push(v);
    }
    rref(u.q, basis)
}

/// Number of u-subspaces U of GF(q)^n with U cap F = J, where dim F = f,
/// dim J = j: q^{(f-j)(u-j)} * [n-f; u-j]_q.
pub fn count_fixed_intersection(q: u64, n: u64, f: u64, j: u64, u: u64) -> Result<ExactInt, SpaceError> {
    if j > f.min(u) || f > n || u > n {
        return Err(SpaceError::BadParams(format!(
            "count_fixed_intersection needs j <= min(f,u) <= n, got n={n} f={f} j={j} u={u}"
        )));
    }
    Ok(ExactInt::from(q).pow(((f - j) * (u - j)) as u32)
        * gaussian_binom((n - f) as i64, (u - j) as i64, q))
}

/// A multiset of k-subspaces with common ambient (q, n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingCollection {
    q: u32,
    n: usize,
    k: usize,
    blocks: Vec<SubspaceMatrix>,
}

impl PackingCollection {
    pub fn new(q: u32, n: usize, k: usize, blocks: Vec<SubspaceMatrix>) -> Result<Self, SpaceError> {
        for b in &blocks {
            if b.q != q || b.n != n || b.dim() != k {
                return Err(SpaceError::AmbientMismatch(format!(
                    "block {:?} does not live in G_{}({}, {})",
                    b, q, n, k
                )));
            }
        }
        Ok(PackingCollection { q, n, k, blocks })
    }

    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> usize {
        self.k
    }
    /// Cardinality counts multiplicity.
    pub fn cardinality(&self) -> usize {
        self.blocks.len()
    }
    pub fn blocks(&self) -> &[SubspaceMatrix] {
        &self.blocks
    }

    pub fn multiplicity_of(&self, b: &SubspaceMatrix) -> usize {
        self.blocks.iter().filter(|x| *x == b).count()
    }

    pub fn has_repeats(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.blocks.iter().any(|b| !seen.insert(b.clone()))
    }

    /// Dualize every block: a collection of (n-k)-subspaces.
    pub fn dual(&self) -> Result<PackingCollection, SpaceError> {
        let blocks: Vec<SubspaceMatrix> =
            self.blocks.iter().map(dual_space).collect::<Result<_, _>>()?;
        PackingCollection::new(self.q, self.n, self.n - self.k, blocks)
    }
}

/// All t-subspaces of the row space of `block`, canonicalized in the
/// ambient space.
pub fn subspaces_of(block: &SubspaceMatrix, t: usize) -> Result<Vec<SubspaceMatrix>, SpaceError> {
    let k = block.dim();
    if t > k {
        return Ok(Vec::new());
    }
    let field = block.field();
    // Enumerate t-subspaces of the k-dimensional coordinate space and map
    // their bases through the block rows.
    let coord = enumerate_grassmannian(block.q, k, t, u64::MAX)?;
    let mut out = Vec::with_capacity(coord.len());
    for c in coord {
        let rows: Vec<Vec<u32>> = c
            .rows
            .iter()
            .map(|coef| {
                let mut v = vec![0u32; block.n];
                for (i, &ci) in coef.iter().enumerate() {
                    if ci == 0 {
                        continue;
                    }
                    for (vj, &bj) in v.iter_mut().zip(block.rows[i].iter()) {
                        *vj = field.add(*vj, field.mul(ci, bj));
                    }
                }
                v
            })
            .collect();
        out.push(rref(block.q, rows)?);
    }
    Ok(out)
}

/// Verdict of the packing check: maximum t-subspace coverage and one
/// witness attaining it.
#[derive(Debug, Clone)]
pub struct PackingVerdict {
    pub valid: bool,
    pub max_coverage: u64,
    pub witness: Option<SubspaceMatrix>,
}

/// Check that every t-subspace is contained in at most `lambda` blocks,
/// multiplicities counted.
pub fn is_packing(c: &PackingCollection, t: usize, lambda: u64) -> Result<PackingVerdict, SpaceError> {
    let mut coverage: std::collections::HashMap<SubspaceMatrix, u64> = std::collections::HashMap::new();
    for block in &c.blocks {
        for sub in subspaces_of(block, t)? {
            *coverage.entry(sub).or_insert(0) += 1;
        }
    }
    // Deterministic witness: maximum coverage, ties broken by the least
    // subspace in the canonical ordering.
    let mut max_coverage = 0u64;
    let mut witness: Option<SubspaceMatrix> = None;
    for (sub, cov) in coverage {
        if cov > max_coverage || (cov == max_coverage && witness.as_ref().map_or(true, |w| sub < *w)) {
            max_coverage = cov;
            witness = Some(sub);
        }
    }
    Ok(PackingVerdict { valid: max_coverage <= lambda, max_coverage, witness })
}

/// Serialize a packing: header "q n k count", then one block per line as
/// k*n base-q digits row-major.
pub fn write_certificate<W: Write>(c: &PackingCollection, mut w: W) -> Result<(), SpaceError> {
    writeln!(w, "{} {} {} {}", c.q, c.n, c.k, c.cardinality())?;
    for b in &c.blocks {
        writeln!(w, "{}", b.digit_string())?;
    }
    Ok(())
}

pub fn read_certificate<R: BufRead>(r: R) -> Result<PackingCollection, SpaceError> {
    let mut lines = r.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or(SpaceError::BadCertificate { line: 1, msg: "empty file".into() })?;
    let header = header?;
    let parts: Vec<u64> = header
        .split_whitespace()
        .map(|s| s.parse::<u64>())
        .collect::<Result<_, _>>()
        .map_err(|e| SpaceError::BadCertificate { line: 1, msg: e.to_string() })?;
    let [q, n, k, count] = parts[..] else {
        return Err(SpaceError::BadCertificate { line: 1, msg: "expected 'q n k count'".into() });
    };
    let (q, n, k) = (q as u32, n as usize, k as usize);
    let mut blocks = Vec::with_capacity(count as usize);
    for (idx, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let b = SubspaceMatrix::from_digit_string(q, n, k, line.trim()).map_err(|e| {
            SpaceError::BadCertificate { line: idx + 1, msg: e.to_string() }
        })?;
        if b.dim() != k {
            return Err(SpaceError::BadCertificate {
                line: idx + 1,
                msg: format!("block has rank {} != {}", b.dim(), k),
            });
        }
        blocks.push(b);
    }
    if blocks.len() != count as usize {
        return Err(SpaceError::BadCertificate {
            line: 1,
            msg: format!("header count {} != {} blocks", count, blocks.len()),
        });
    }
    PackingCollection::new(q, n, k, blocks)
}
