//! Integer-linear-programming export: the extensive formulation of the
//! packing problem and its orbit reduction under a prescribed matrix
//! group, written as solver-ready LP-format files.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::engine::Engine;
use crate::field::field_for_order;
use crate::qnum::{gaussian_binom, ExactInt};
use crate::spaces::{
    dim_sum_intersect, enumerate_grassmannian, rref, PackingParams, SpaceError, SubspaceMatrix,
};

#[derive(Debug, thiserror::Error)]
pub enum IlpError {
    #[error("variable budget of {0} exceeded ({1} required)")]
    BudgetExceeded(u64, ExactInt),
    #[error("group closure exceeds the cap of {0} elements")]
    GroupTooLarge(usize),
    #[error("generator {0} is not invertible over GF({1})")]
    NonInvertible(usize, u32),
    #[error("generator {0} is not a {1}x{1} matrix")]
    BadShape(usize, usize),
    #[error("space error: {0}")]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One sparse constraint row: sum of coeff * var <= rhs.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(usize, u64)>,
    pub rhs: ExactInt,
}

/// A maximization model over integer variables x0..x{n-1}, each bounded
/// by 0 <= x <= var_upper (binary when var_upper == 1 and the packing
/// forbids repeats).
#[derive(Debug, Clone)]
pub struct IlpModel {
    pub params: PackingParams,
    /// objective weight per variable (orbit sizes after reduction, all
    /// ones for the extensive formulation)
    pub weights: Vec<u64>,
    pub var_upper: u64,
    pub constraints: Vec<Constraint>,
    /// order of the reduction group, if any
    pub group_order: Option<usize>,
}

impl IlpModel {
    pub fn num_vars(&self) -> usize {
        self.weights.len()
    }

    fn binary(&self) -> bool {
        self.var_upper == 1
    }

    /// Render in the standard LP text format.
    pub fn to_lp(&self) -> String {
        let mut out = String::from("Maximize\n obj:");
        for (i, &w) in self.weights.iter().enumerate() {
            let sep = if i == 0 { " " } else { " + " };
            if w == 1 {
                write!(out, "{sep}x{i}").unwrap();
            } else {
                write!(out, "{sep}{w} x{i}").unwrap();
            }
        }
        out.push_str("\nSubject To\n");
        for c in &self.constraints {
            write!(out, " {}:", c.name).unwrap();
            for (j, &(var, coeff)) in c.terms.iter().enumerate() {
                let sep = if j == 0 { " " } else { " + " };
                if coeff == 1 {
                    write!(out, "{sep}x{var}").unwrap();
                } else {
                    write!(out, "{sep}{coeff} x{var}").unwrap();
                }
            }
            writeln!(out, " <= {}", c.rhs).unwrap();
        }
        out.push_str("Bounds\n");
        for i in 0..self.num_vars() {
            writeln!(out, " 0 <= x{i} <= {}", self.var_upper).unwrap();
        }
        out.push_str(if self.binary() { "Binaries\n" } else { "Generals\n" });
        for i in 0..self.num_vars() {
            let sep = if i % 16 == 15 || i + 1 == self.num_vars() { "\n" } else { "" };
            write!(out, " x{i}{sep}").unwrap();
        }
        out.push_str("End\n");
        out
    }

    /// Write the model and its variable sidecar map (`index<TAB>digits`,
    /// one line per variable, digits = row-major RREF representative).
    pub fn write_files(&self, path: &Path, reps: &[SubspaceMatrix]) -> Result<(), IlpError> {
        std::fs::write(path, self.to_lp())?;
        let mut map = String::new();
        for (i, r) in reps.iter().enumerate() {
            writeln!(map, "{i}\t{}", r.digit_string()).unwrap();
        }
        std::fs::write(path.with_extension("map"), map)?;
        Ok(())
    }
}

pub const DEFAULT_VAR_BUDGET: u64 = 100_000;

fn check_budget(p: PackingParams, budget: u64) -> Result<(), IlpError> {
    let vars = gaussian_binom(p.n as i64, p.k as i64, p.q as u64);
    if vars > ExactInt::from(budget) {
        return Err(IlpError::BudgetExceeded(budget, vars));
    }
    Ok(())
}

/// The extensive formulation: one binary (or 0..lambda integer, for
/// packings with repeated blocks) variable per k-subspace, one coverage
/// row per t-subspace. With `aux` supplied, one extra row per i-subspace
/// (i = 1..t-1) bounded by the engine's best upper bound for the derived
/// sub-instance. Returns the model and the variable representatives.
pub fn extensive_model(
    p: PackingParams,
    aux: Option<&Engine>,
    budget: u64,
) -> Result<(IlpModel, Vec<SubspaceMatrix>), IlpError> {
    check_budget(p, budget)?;
    let (n, k, t) = (p.n as usize, p.k as usize, p.t as usize);
    let blocks = enumerate_grassmannian(p.q, n, k, budget)?;
    let mut constraints = Vec::new();
    // coverage rows, then optional auxiliary rows, both in Grassmannian
    // order of the constrained subspace
    let mut dims: Vec<(usize, ExactInt)> = vec![(t, ExactInt::from(p.lambda))];
    if let Some(engine) = aux {
        for i in 1..t {
            let sub = PackingParams::new(
                p.q,
                p.n - i as u32,
                p.k - i as u32,
                p.t - i as u32,
                p.lambda,
                p.repeated,
            )
            .expect("derived sub-instance is valid");
            dims.push((i, engine.best_upper(sub).value));
        }
    }
    for (dim, rhs) in dims {
        let small = enumerate_grassmannian(p.q, n, dim, u64::MAX)?;
        let index: HashMap<&SubspaceMatrix, usize> =
            small.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut rows: Vec<Vec<(usize, u64)>> = vec![Vec::new(); small.len()];
        for (u_idx, block) in blocks.iter().enumerate() {
            for v in crate::spaces::subspaces_of(block, dim)? {
                rows[index[&v]].push((u_idx, 1));
            }
        }
        let prefix = if dim == t { "cov" } else { "aux" };
        for (i, terms) in rows.into_iter().enumerate() {
            constraints.push(Constraint {
                name: format!("{prefix}{dim}_{i}"),
                terms,
                rhs: rhs.clone(),
            });
        }
    }
    let model = IlpModel {
        params: p,
        weights: vec![1; blocks.len()],
        var_upper: if p.repeated { p.lambda } else { 1 },
        constraints,
        group_order: None,
    };
    Ok((model, blocks))
}

/// Build and write the extensive model plus its sidecar map.
pub fn emit_extensive(
    p: PackingParams,
    aux: Option<&Engine>,
    path: &Path,
    budget: u64,
) -> Result<IlpModel, IlpError> {
    let (model, reps) = extensive_model(p, aux, budget)?;
    model.write_files(path, &reps)?;
    Ok(model)
}

pub const DEFAULT_GROUP_CAP: usize = 10_000;

type Matrix = Vec<Vec<u32>>;

/// A finite subgroup of GL(n, q), enumerated from generators.
pub struct MatrixGroup {
    q: u32,
    n: usize,
    elements: Vec<Matrix>,
}

impl MatrixGroup {
    /// Close the generators under multiplication (which, in a finite
    /// group, also yields all inverses). Fails if any generator is
    /// singular or the closure exceeds `cap` elements.
    pub fn from_generators(
        q: u32,
        n: usize,
        generators: Vec<Matrix>,
        cap: usize,
    ) -> Result<MatrixGroup, IlpError> {
        let field = field_for_order(q).map_err(|_| IlpError::NonInvertible(0, q))?;
        for (i, g) in generators.iter().enumerate() {
            if g.len() != n || g.iter().any(|r| r.len() != n) {
                return Err(IlpError::BadShape(i, n));
            }
            match rref(q, g.clone()) {
                Ok(m) if m.dim() == n => {}
                _ => return Err(IlpError::NonInvertible(i, q)),
            }
        }
        let mul = |a: &Matrix, b: &Matrix| -> Matrix {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let mut s = 0u32;
                            for l in 0..n {
                                s = field.add(s, field.mul(a[i][l], b[l][j]));
                            }
                            s
                        })
                        .collect()
                })
                .collect()
        };
        let identity: Matrix =
            (0..n).map(|i| (0..n).map(|j| u32::from(i == j)).collect()).collect();
        let mut seen: HashMap<Matrix, ()> = HashMap::new();
        let mut elements = vec![identity.clone()];
        seen.insert(identity, ());
        let mut frontier = 0;
        while frontier < elements.len() {
            let current = elements[frontier].clone();
            frontier += 1;
            for g in &generators {
                let next = mul(&current, g);
                if seen.insert(next.clone(), ()).is_none() {
                    elements.push(next);
                    if elements.len() > cap {
                        return Err(IlpError::GroupTooLarge(cap));
                    }
                }
            }
        }
        Ok(MatrixGroup { q, n, elements })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Image of a subspace under one group element (row space of U * M).
    fn act(&self, u: &SubspaceMatrix, m: &Matrix) -> Result<SubspaceMatrix, SpaceError> {
        let field = field_for_order(self.q).expect("validated");
        let rows: Vec<Vec<u32>> = u
            .rows()
            .iter()
            .map(|r| {
                (0..self.n)
                    .map(|j| {
                        let mut s = 0u32;
                        for (l, &rl) in r.iter().enumerate() {
                            s = field.add(s, field.mul(rl, m[l][j]));
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        rref(self.q, rows)
    }

    /// Orbits on the k-subspaces: representatives (the minimal member),
    /// orbit index of every subspace, and orbit sizes. Deterministic:
    /// orbits appear in Grassmannian order of their representative.
    pub fn orbits(&self, k: usize, budget: u64) -> Result<Orbits, IlpError> {
        let all = enumerate_grassmannian(self.q, self.n, k, budget)?;
        let mut orbit_of: HashMap<SubspaceMatrix, usize> = HashMap::new();
        let mut reps = Vec::new();
        let mut sizes = Vec::new();
        for u in &all {
            if orbit_of.contains_key(u) {
                continue;
            }
            let idx = reps.len();
            let mut members = vec![u.clone()];
            orbit_of.insert(u.clone(), idx);
            let mut frontier = 0;
            while frontier < members.len() {
                let cur = members[frontier].clone();
                frontier += 1;
                for m in &self.elements {
                    let img = self.act(&cur, m)?;
                    if !orbit_of.contains_key(&img) {
                        orbit_of.insert(img.clone(), idx);
                        members.push(img);
                    }
                }
            }
            reps.push(u.clone());
            sizes.push(members.len());
        }
        Ok(Orbits { reps, sizes, orbit_of })
    }

    /// Burnside consistency: the orbit count must equal the average
    /// number of fixed k-subspaces over the group.
    pub fn burnside_check(&self, k: usize, orbits: &Orbits, budget: u64) -> Result<bool, IlpError> {
        let all = enumerate_grassmannian(self.q, self.n, k, budget)?;
        let mut fixed_total = 0usize;
        for m in &self.elements {
            for u in &all {
                if self.act(u, m)? == *u {
                    fixed_total += 1;
                }
            }
        }
        Ok(fixed_total == orbits.reps.len() * self.order())
    }
}

pub struct Orbits {
    pub reps: Vec<SubspaceMatrix>,
    pub sizes: Vec<usize>,
    pub orbit_of: HashMap<SubspaceMatrix, usize>,
}

/// Orbit statistics reported alongside a reduced model.
#[derive(Debug, Clone)]
pub struct OrbitStats {
    pub group_order: usize,
    pub k_orbits: usize,
    pub t_orbits: usize,
    pub k_size_sum: ExactInt,
    pub t_size_sum: ExactInt,
    pub burnside_ok: bool,
}

/// The orbit reduction: one variable per k-orbit with objective weight =
/// orbit size, one row per t-orbit whose coefficient on a k-orbit is the
/// number of that orbit's members containing a fixed representative of
/// the t-orbit.
pub fn kramer_mesner_reduce(
    p: PackingParams,
    group: &MatrixGroup,
    budget: u64,
) -> Result<(IlpModel, Vec<SubspaceMatrix>, OrbitStats), IlpError> {
    check_budget(p, budget)?;
    let (k, t) = (p.k as usize, p.t as usize);
    let k_orbits = group.orbits(k, budget)?;
    let t_orbits = group.orbits(t, u64::MAX)?;
    // count incidences orbit-against-orbit by running over all blocks
    // once; the per-representative coefficient is the total divided by
    // the t-orbit size (the group action is incidence-preserving)
    let mut incid = vec![vec![0u64; k_orbits.reps.len()]; t_orbits.reps.len()];
    for (u, &uo) in &k_orbits.orbit_of {
        for v in crate::spaces::subspaces_of(u, t)? {
            incid[t_orbits.orbit_of[&v]][uo] += 1;
        }
    }
    let mut constraints = Vec::new();
    for (vi, row) in incid.iter().enumerate() {
        let vsize = t_orbits.sizes[vi] as u64;
        let terms: Vec<(usize, u64)> = row
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c > 0)
            .map(|(uo, &c)| {
                debug_assert_eq!(c % vsize, 0, "incidence not orbit-uniform");
                (uo, c / vsize)
            })
            .collect();
        constraints.push(Constraint {
            name: format!("orb{vi}"),
            terms,
            rhs: ExactInt::from(p.lambda),
        });
    }
    let burnside_ok = group.burnside_check(k, &k_orbits, budget)?;
    let stats = OrbitStats {
        group_order: group.order(),
        k_orbits: k_orbits.reps.len(),
        t_orbits: t_orbits.reps.len(),
        k_size_sum: k_orbits.sizes.iter().map(|&s| ExactInt::from(s as u64)).sum(),
        t_size_sum: t_orbits.sizes.iter().map(|&s| ExactInt::from(s as u64)).sum(),
        burnside_ok,
    };
    let model = IlpModel {
        params: p,
        weights: k_orbits.sizes.iter().map(|&s| s as u64).collect(),
        var_upper: if p.repeated { p.lambda } else { 1 },
        constraints,
        group_order: Some(group.order()),
    };
    Ok((model, k_orbits.reps, stats))
}

/// Containment test used by round-trip checks: v <= u.
pub fn contains(u: &SubspaceMatrix, v: &SubspaceMatrix) -> Result<bool, SpaceError> {
    let (sum, _) = dim_sum_intersect(u, v)?;
    Ok(sum == u.dim())
}
