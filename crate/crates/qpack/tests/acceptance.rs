//! End-to-end acceptance checks, one per shipped guarantee. Each
//! criterion prints a single pass/fail line; the suite fails if any
//! criterion does.

use std::panic::{catch_unwind, AssertUnwindSafe};

use num_traits::ToPrimitive;

use qpack::bounds::{
    combo_hyperplane, improved_johnson, johnson_hyperplane, packing_bound, quadratic_bound,
    CoveringParams,
};
use qpack::constructions::linkage::{linkage_explicit, recursive_size, to_packing_side};
use qpack::constructions::{lifted_mrd, trivial_construction, TrivialKind};
use qpack::divisible::{attainable, reduce_frac, ReducedFraction};
use qpack::engine::{all_cells, Database, Engine};
use qpack::ilp::{extensive_model, kramer_mesner_reduce, MatrixGroup};
use qpack::qnum::{gaussian_binom, ExactInt};
use qpack::spaces::{
    brute_force_max, enumerate_grassmannian, is_packing, rref, search_special_spread,
    PackingParams,
};

fn p(q: u32, n: u32, k: u32, t: u32, lambda: u64, repeated: bool) -> PackingParams {
    PackingParams::new(q, n, k, t, lambda, repeated).unwrap()
}

fn big(v: u64) -> ExactInt {
    ExactInt::from(v)
}

fn criterion_1_counting_kernel() {
    for q in [2u32, 3] {
        for n in 0..=6usize {
            for k in 0..=n {
                let expected = gaussian_binom(n as i64, k as i64, q as u64);
                if k == 0 {
                    assert_eq!(expected, big(1));
                    continue;
                }
                let listed = enumerate_grassmannian(q, n, k, u64::MAX).unwrap();
                assert_eq!(
                    big(listed.len() as u64),
                    expected,
                    "G_{q}({n},{k}) enumeration disagrees with the Gaussian binomial"
                );
            }
        }
    }
}

fn criterion_2_divisible_oracle() {
    // naive oracle: nonnegative combinations of the base lengths 8, 12, 14, 15
    let naive = |l: u64| -> bool {
        for d in 0..=l / 15 {
            for c in 0..=(l - 15 * d) / 14 {
                for b in 0..=(l - 15 * d - 14 * c) / 12 {
                    if (l - 15 * d - 14 * c - 12 * b) % 8 == 0 {
                        return true;
                    }
                }
            }
        }
        false
    };
    for l in 0..=200u64 {
        assert_eq!(attainable(2, 3, &big(l)), naive(l), "length {l}");
    }
    assert!(!attainable(2, 3, &big(4)));
    assert!(!attainable(2, 3, &big(19)));
    assert_eq!(reduce_frac(&big(17374), 4, 2), ReducedFraction::Bound(big(1156)));
    assert_eq!(reduce_frac(&big(63 * 32), 4, 2), ReducedFraction::Bound(big(132)));
}

fn criterion_3_bound_rules() {
    assert_eq!(packing_bound(p(2, 5, 3, 2, 2, true)), big(44));
    assert_eq!(johnson_hyperplane(p(2, 5, 3, 2, 2, true), &big(8)), Some(big(82)));
    assert_eq!(combo_hyperplane(p(2, 5, 3, 2, 2, true), &big(10)), Some(big(41)));
    assert_eq!(combo_hyperplane(p(2, 7, 4, 3, 3, true), &big(279)), Some(big(2358)));
    assert_eq!(combo_hyperplane(p(2, 7, 5, 1, 3, true), &big(1)), Some(big(11)));
    assert_eq!(quadratic_bound(p(2, 5, 3, 2, 2, true)), Some(big(33)));
    assert_eq!(quadratic_bound(p(2, 6, 4, 3, 2, true)), Some(big(126)));
    assert_eq!(quadratic_bound(p(2, 7, 5, 4, 2, true)), Some(big(478)));
    assert_eq!(quadratic_bound(p(2, 8, 6, 5, 2, true)), Some(big(1870)));
    assert_eq!(improved_johnson(p(2, 9, 4, 2, 1, false), Some(&big(34))), Some(big(1156)));
    assert_eq!(improved_johnson(p(2, 6, 4, 3, 2, true), Some(&big(32))), Some(big(132)));
    assert_eq!(improved_johnson(p(2, 8, 3, 1, 3, true), None), Some(big(107)));
    // intersection recursion, without any database assistance
    let pure = Engine::new(Database::new());
    let b = pure.best_upper(p(2, 8, 5, 1, 2, false));
    assert_eq!(b.value, big(10));
    assert!(b.prov.render().contains("intersection-recursion"), "{}", b.prov.render());
    // ... and with the known exact sub-instance value it recurses through
    let seeded = Engine::seeded();
    assert_eq!(seeded.best_upper(p(2, 8, 6, 2, 3, false)).value, big(22));
}

fn criterion_4_construction_cells() {
    let engine = Engine::seeded();
    for (lambda, mrd, link) in [(2, 512, 969), (3, 768, 2341), (4, 1024, 5377)] {
        assert_eq!(
            engine.best_lower(p(2, 8, 4, 2, lambda, false)).value,
            big(mrd),
            "lifted-MRD cell at lambda {lambda}"
        );
        assert_eq!(
            engine.best_lower(p(2, 8, 6, 5, lambda, false)).value,
            big(link),
            "linkage cell at lambda {lambda}"
        );
    }
}

fn criterion_5_explicit_certificates() {
    // the four basic families on small ambient spaces
    let trivial_cases = [
        (TrivialKind::All, p(2, 4, 2, 2, 1, false)),
        (TrivialKind::All, p(2, 6, 3, 3, 1, false)),
        (TrivialKind::All, p(3, 4, 2, 2, 1, false)),
        (TrivialKind::TakeLambda, p(2, 6, 4, 2, 3, false)),
        (TrivialKind::TakeLambda, p(3, 5, 3, 2, 2, false)),
        (TrivialKind::ExcludePoint, p(2, 5, 4, 3, 2, false)),
        (TrivialKind::ExcludePoint, p(3, 4, 3, 2, 3, false)),
        (TrivialKind::DisjointSubspace, p(2, 4, 2, 1, 4, false)),
        (TrivialKind::DisjointSubspace, p(2, 6, 3, 2, 8, false)),
    ];
    for (kind, params) in trivial_cases {
        let r = trivial_construction(kind, params, 10_000).unwrap();
        let c = r.collection.expect("explicit within budget");
        assert_eq!(big(c.cardinality() as u64), r.size, "{kind:?} size formula at {params:?}");
        let v = is_packing(&c, params.t as usize, params.lambda).unwrap();
        assert!(v.valid, "{kind:?} invalid at {params:?}");
    }
    // lifted MRD: covering code with n = 6, k = 3, delta = 2
    for alpha in [2u64, 3] {
        let c = lifted_mrd(2, 6, 3, 2, alpha, 1_000_000).unwrap();
        assert_eq!(c.cardinality() as u64, (alpha - 1) * 64, "lifted-MRD size formula");
        // packing side: t = n - k - delta + 1 = 2, lambda = alpha - 1
        let v = is_packing(&c, 2, alpha - 1).unwrap();
        assert!(v.valid, "lifted MRD invalid at alpha {alpha}");
    }
    // one full linkage assembly
    let b = CoveringParams { q: 2, n: 8, k: 2, delta: 2, alpha: 3 };
    let (cover, trace) = linkage_explicit(b, 1_000_000).unwrap();
    assert!(!trace.is_empty());
    let packing = to_packing_side(&cover).unwrap();
    // the explicit assembly realizes exactly its recursive size formula
    // (database-assisted sub-instances would push the count higher, but
    // only the purely recursive plan is materialized)
    let formula = recursive_size(b).unwrap();
    assert_eq!(big(packing.cardinality() as u64), formula);
    let v = is_packing(&packing, 5, 2).unwrap();
    assert!(v.valid, "linkage packing invalid");
}

fn criterion_6_brute_force_values() {
    for (q, n, k, t, lambda, want) in [
        (2, 3, 2, 1, 2, 4u64),
        (2, 4, 3, 2, 2, 8),
        (2, 4, 3, 1, 2, 2),
        (3, 3, 2, 1, 2, 4),
        (2, 4, 2, 1, 2, 10),
        (3, 4, 3, 1, 3, 5),
    ] {
        let r = brute_force_max(p(q, n, k, t, lambda, false), 100_000_000).unwrap();
        assert!(r.exact, "budget exhausted on ({q},{n},{k},{t};{lambda})");
        assert_eq!(r.size, want, "A_{q}({n},{k},{t};{lambda})");
        let v = is_packing(&r.best, t as usize, lambda).unwrap();
        assert!(v.valid);
    }
}

fn criterion_7_exact_value_rules() {
    let engine = Engine::seeded();
    for q in [2u32, 3] {
        for n in 3..=5u32 {
            let params = p(q, n, n - 1, n - 2, q as u64, false);
            let expected = big((q as u64).pow(n - 1));
            assert_eq!(
                engine.exact_value(params),
                Some(expected.clone()),
                "A_{q}({n},{},{};{q}) engine value",
                n - 1,
                n - 2
            );
            // matching explicit construction
            let r = trivial_construction(TrivialKind::ExcludePoint, params, 100_000).unwrap();
            assert_eq!(r.size, expected);
            let c = r.collection.unwrap();
            assert!(is_packing(&c, params.t as usize, params.lambda).unwrap().valid);
        }
    }
    // cells settled by the intersection argument alone: the value is lambda
    let i_cells: Vec<_> = all_cells()
        .into_iter()
        .filter(|c| {
            c.lower_tags == ['i']
                && c.upper_tags == ['i']
                && c.lower == c.upper
                && c.lower.to_u64() == Some(c.params.lambda)
        })
        .collect();
    assert!(i_cells.len() >= 5, "expected at least five intersection-exact cells");
    for cell in i_cells.iter().take(5) {
        assert_eq!(
            engine.exact_value(cell.params),
            Some(big(cell.params.lambda)),
            "intersection-exact cell {:?}",
            cell.params
        );
    }
}

fn criterion_8_special_spread() {
    // seed 0 succeeds within seconds; documented as the reference seed
    let lines = search_special_spread(0, 50_000_000).unwrap();
    assert_eq!(lines.cardinality(), 21);
    let solids = lines.dual().unwrap();
    assert_eq!(solids.cardinality(), 21);
    let v = is_packing(&solids, 2, 2).unwrap();
    assert!(v.valid, "dual solids are not a 2-(6,4,2) packing");
    assert_eq!(v.max_coverage, 2);
    // no three solids meet in a line: triple intersections stay below
    // dimension 2, equivalently any three of the dual lines span >= 5
    let blocks = lines.blocks();
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            for l in j + 1..blocks.len() {
                let rows: Vec<Vec<u32>> = blocks[i]
                    .rows()
                    .iter()
                    .chain(blocks[j].rows())
                    .chain(blocks[l].rows())
                    .cloned()
                    .collect();
                assert!(rref(2, rows).unwrap().dim() >= 5, "triple {i},{j},{l}");
            }
        }
    }
}

fn criterion_9_table_reproduction() {
    let engine = Engine::seeded();
    for (q, n_max) in [(2u32, 8u32), (3, 5)] {
        for lambda in 2..=4u64 {
            let report = engine.reproduce_table(q, lambda, n_max).unwrap();
            assert!(
                report.findings.is_empty(),
                "q={q} lambda={lambda}: {:?}",
                report.findings
            );
            for cell in &report.cells {
                assert!(cell.sound, "unsound cell {:?}", cell.params);
                if cell.lower_required {
                    assert!(cell.lower_match, "required lower mismatch {:?}", cell.params);
                }
                if cell.upper_required {
                    assert!(cell.upper_match, "required upper mismatch {:?}", cell.params);
                }
            }
        }
    }
}

fn criterion_10_global_properties() {
    let engine = Engine::seeded();
    for q in [2u32, 3] {
        for n in 2..=9u32 {
            for k in 1..=n {
                if gaussian_binom(n as i64, k as i64, q as u64) > big(700) {
                    continue;
                }
                for t in 1..=k {
                    for lambda in 1..=4u64 {
                        for repeated in [false, true] {
                            let params = p(q, n, k, t, lambda, repeated);
                            let lower = engine.best_lower(params).value;
                            let upper = engine.best_upper(params).value;
                            assert!(lower <= upper, "inverted bounds at {params:?}");
                            if lambda < 4 {
                                let next = p(q, n, k, t, lambda + 1, repeated);
                                assert!(
                                    lower <= engine.best_lower(next).value,
                                    "lower not lambda-monotone at {params:?}"
                                );
                                assert!(
                                    upper <= engine.best_upper(next).value,
                                    "upper not lambda-monotone at {params:?}"
                                );
                            }
                            if !repeated {
                                let rep = params.with_repeated(true);
                                assert!(
                                    lower <= engine.best_lower(rep).value,
                                    "A > A^r (lower) at {params:?}"
                                );
                                assert!(
                                    upper <= engine.best_upper(rep).value,
                                    "A > A^r (upper) at {params:?}"
                                );
                            }
                            // the oracle needs the t-side to be desk-scale
                            // too: each block carries [k;t]_q coverage sets
                            if gaussian_binom(n as i64, t as i64, q as u64) <= big(700) {
                                let r = brute_force_max(params, 50_000).unwrap();
                                let found = big(r.size);
                                assert!(found <= upper, "brute exceeds upper at {params:?}");
                                if r.exact {
                                    assert!(lower <= found, "lower exceeds maximum at {params:?}");
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

fn criterion_11_ilp_export() {
    let params = p(2, 3, 2, 1, 2, false);
    let (model, reps) = extensive_model(params, None, 100_000).unwrap();
    assert_eq!(model.num_vars(), 7);
    assert_eq!(reps.len(), 7);
    assert_eq!(model.constraints.len(), 7);
    // external solver step: optional, run only when one is installed
    match solve_with_external(&model.to_lp()) {
        Some(optimum) => assert_eq!(optimum, 4, "external solver optimum"),
        None => println!("  (no LP solver on PATH; solver check skipped)"),
    }
    // orbit reduction bookkeeping over a cyclic coordinate shift
    let shift: Vec<Vec<u32>> =
        (0..7).map(|i| (0..7).map(|j| u32::from(j == (i + 1) % 7)).collect()).collect();
    let group = MatrixGroup::from_generators(2, 7, vec![shift], 10_000).unwrap();
    assert_eq!(group.order(), 7);
    let (reduced, _, stats) =
        kramer_mesner_reduce(p(2, 7, 3, 2, 1, false), &group, 100_000).unwrap();
    assert_eq!(stats.k_size_sum, gaussian_binom(7, 3, 2));
    assert_eq!(stats.t_size_sum, gaussian_binom(7, 2, 2));
    assert!(stats.burnside_ok);
    assert_eq!(reduced.num_vars(), stats.k_orbits);
}

fn solve_with_external(lp: &str) -> Option<i64> {
    let dir = tempfile::tempdir().ok()?;
    let model = dir.path().join("model.lp");
    let solution = dir.path().join("model.sol");
    std::fs::write(&model, lp).ok()?;
    let out = std::process::Command::new("glpsol")
        .arg("--lp")
        .arg(&model)
        .arg("-o")
        .arg(&solution)
        .output()
        .ok()?;
    if !out.status.success() {
        return None;
    }
    let text = std::fs::read_to_string(&solution).ok()?;
    let line = text.lines().find(|l| l.starts_with("Objective:"))?;
    // "Objective:  obj = 4 (MAXimum)"
    line.split_whitespace().nth(3)?.parse().ok()
}

#[test]
fn acceptance() {
    let criteria: Vec<(&str, fn())> = vec![
        ("counting kernel", criterion_1_counting_kernel),
        ("divisible-length oracle", criterion_2_divisible_oracle),
        ("bound rules", criterion_3_bound_rules),
        ("construction table cells", criterion_4_construction_cells),
        ("explicit certificates", criterion_5_explicit_certificates),
        ("brute-force values", criterion_6_brute_force_values),
        ("exact-value rules", criterion_7_exact_value_rules),
        ("special spread search", criterion_8_special_spread),
        ("table reproduction", criterion_9_table_reproduction),
        ("global property grid", criterion_10_global_properties),
        ("ILP export", criterion_11_ilp_export),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run));
        match outcome {
            Ok(()) => println!("criterion {:2} ({name}): PASS", i + 1),
            Err(cause) => {
                let msg = cause
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| cause.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panic".into());
                println!("criterion {:2} ({name}): FAIL - {msg}", i + 1);
                failed.push(*name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
