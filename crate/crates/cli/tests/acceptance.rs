//! One PASS/FAIL line per acceptance criterion. Criteria listed in
//! `KNOWN_UNATTAINABLE` are computed faithfully and reported, but do not
//! fail the run; every other criterion must pass.

#[path = "../../core/tests/common/mod.rs"]
mod common;
#[path = "../../core/tests/common/jet_oracle.rs"]
mod jet_oracle;

use std::time::{Duration, Instant};

use lieclass::run_args;
use lieclass_core::catalog::{basis_presentation, optimal_system_catalog, optimal_system_fields, table3_rows};
use lieclass_core::determining::{equivalence_family, equivalence_residuals, is_symmetry, PdeInstance, Verdict};
use lieclass_core::fieldlang::{parse_chart, parse_expression, parse_field, parse_lsf, ChartDecl};
use lieclass_core::invclass::audit_table3;
use lieclass_core::liealg::{adjoint_exp, lie_series, ExpPoly, LieAlgebraPresentation, Q};
use lieclass_core::optsys::{audit_optimal_system, AdjointGroup, AuditConfig, CoeffVector};
use lieclass_core::symcore::normalize;
use lieclass_core::{Expr, Symbol, VectorField};
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_UNATTAINABLE: [u32; 2] = [5, 8];

const TABLE1: [[&str; 6]; 6] = [
    ["0", "0", "-Y3", "-Y4", "0", "-Y6"],
    ["0", "0", "0", "-Y3", "0", "0"],
    ["Y3", "0", "0", "0", "0", "0"],
    ["Y4", "Y3", "0", "0", "0", "0"],
    ["0", "0", "0", "0", "0", "0"],
    ["Y6", "0", "0", "0", "0", "0"],
];

const TABLE2: [[&str; 6]; 6] = [
    ["Y1", "Y2", "e^sY3", "e^sY4", "Y5", "e^sY6"],
    ["Y1", "Y2", "Y3", "Y4+sY3", "Y5", "Y6"],
    ["Y1-sY3", "Y2", "Y3", "Y4", "Y5", "Y6"],
    ["Y1-sY4", "Y2-sY3", "Y3", "Y4", "Y5", "Y6"],
    ["Y1", "Y2", "Y3", "Y4", "Y5", "Y6"],
    ["Y1-sY6", "Y2", "Y3", "Y4", "Y5", "Y6"],
];

struct Line {
    id: u32,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Table cell as `(coefficient, generator)` terms, coefficient one of
/// 1, s, e^s with a sign.
fn cell_terms(cell: &str) -> Vec<(ExpPoly, usize)> {
    if cell == "0" {
        return vec![];
    }
    let mut out = Vec::new();
    let mut rest = cell;
    while !rest.is_empty() {
        let neg = rest.starts_with('-');
        rest = rest.trim_start_matches(['+', '-']);
        let y = rest.find('Y').expect("generator");
        let coef = &rest[..y];
        let digits: String = rest[y + 1..].chars().take_while(|c| c.is_ascii_digit()).collect();
        let k: usize = digits.parse().expect("index");
        rest = &rest[y + 1 + digits.len()..];
        let sign = if neg { q(-1) } else { q(1) };
        let c = match coef {
            "" => ExpPoly::term(sign, 0, 0),
            "s" => ExpPoly::term(sign, 0, 1),
            "e^s" => ExpPoly::term(sign, 1, 0),
            other => panic!("unexpected coefficient {}", other),
        };
        out.push((c, k - 1));
    }
    out
}

fn combination_field(p: &LieAlgebraPresentation, cell: &str) -> VectorField {
    let mut v = VectorField::zero();
    for (c, k) in cell_terms(cell) {
        let c = c.as_constant().expect("constant coefficient in the commutator table");
        v = v.add(&p.basis[k].scale(&Expr::rational(c)));
    }
    v
}

fn squash(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace() && *c != '*').collect()
}

fn json_table(args: &[&str]) -> (i32, serde_json::Value) {
    let out = run_args(std::iter::once("lieclass").chain(args.iter().copied()));
    (out.code, serde_json::from_str(&out.text).unwrap_or(serde_json::Value::Null))
}

fn criterion1() -> (bool, String) {
    let p = basis_presentation(false).unwrap();
    let mut bad = Vec::new();
    for i in 0..6 {
        for j in 0..6 {
            let lhs = p.basis[i].bracket(&p.basis[j]);
            if lhs != combination_field(&p, TABLE1[i][j]) {
                bad.push(format!("[Y{},Y{}]", i + 1, j + 1));
            }
        }
    }
    let (code, v) = json_table(&["brackets", "--format", "json"]);
    for i in 0..6 {
        for j in 0..6 {
            if squash(v["table"][i][j].as_str().unwrap_or("?")) != TABLE1[i][j] {
                bad.push(format!("cmd cell ({},{})", i + 1, j + 1));
            }
        }
    }
    (code == 0 && bad.is_empty(), if bad.is_empty() { "36/36 identities".into() } else { bad.join(", ") })
}

fn criterion2() -> (bool, String) {
    let p = basis_presentation(false).unwrap();
    let mut bad = Vec::new();
    for i in 0..6 {
        let m = adjoint_exp(&p, i).unwrap();
        for j in 0..6 {
            let mut want = vec![ExpPoly::zero(); 6];
            for (c, k) in cell_terms(TABLE2[i][j]) {
                want[k] = &want[k] + &c;
            }
            if m.column(j) != want {
                bad.push(format!("Ad(Y{})Y{}", i + 1, j + 1));
            }
        }
    }
    let (code, v) = json_table(&["adjoint", "--format", "json"]);
    let cells = v["table"].as_array().map_or(0, |r| r.iter().map(|c| c.as_array().map_or(0, Vec::len)).sum());
    (
        code == 0 && cells == 36 && bad.is_empty(),
        if bad.is_empty() { format!("{} entries exact", cells) } else { bad.join(", ") },
    )
}

fn criterion3() -> (bool, String) {
    let (code, v) = json_table(&["brackets", "--printed-Y5", "--format", "json"]);
    let w = &v["witnesses"][0];
    let pass = code == 2 && v["closed"] == false && w["i"] == 1 && w["j"] == 5;
    (pass, format!("exit {}, witness [Y{}, Y{}] = {}", code, w["i"], w["j"], w["residual"]))
}

fn criterion4() -> (bool, String) {
    let c = ChartDecl::standard();
    let pde = PdeInstance::arbitrary();
    let dt = is_symmetry(&parse_field("d_t", &c).unwrap(), &pde).unwrap();
    let mut notes = vec![format!("d_t: {}", dt.label())];
    let mut pass = dt.is_yes();
    for src in ["d_x", "d_y", "x*d_x"] {
        let v = is_symmetry(&parse_field(src, &c).unwrap(), &pde).unwrap();
        let ok = matches!(&v, Verdict::No { witness } if witness.iter().any(|w| w.contains("F'[")));
        pass &= ok;
        notes.push(format!("{}: {}", src, v.label()));
    }
    (pass, notes.join(", "))
}

fn criterion5() -> (bool, String) {
    let t = Expr::sym("t");
    let chart = ChartDecl::standard();
    let e = |s: &str| parse_expression(s, &chart).unwrap();
    let mut failing = Vec::new();
    let mut total = 0;
    for (an, a) in [("1", Expr::one()), ("t", t.clone()), ("t^2", &t * &t)] {
        for b in ["1", "x", "y", "x*y", "x^2 - y^2"] {
            total += 1;
            if !equivalence_residuals(&equivalence_family(&a, &e(b))).unwrap().all_zero() {
                failing.push(format!("a={},beta={}", an, b));
            }
        }
    }
    let broken_fails = !equivalence_residuals(&equivalence_family(&t, &e("x^2"))).unwrap().all_zero();
    (
        failing.is_empty() && broken_fails,
        format!("{}/{} members nonzero residual; beta=x^2 rejected: {}", failing.len(), total, broken_fails),
    )
}

fn criterion6() -> (bool, String) {
    let p = basis_presentation(false).unwrap();
    let mut bad = Vec::new();
    for i in 0..6 {
        let m = adjoint_exp(&p, i).unwrap();
        for j in 0..6 {
            if m.taylor_column(j, 5) != lie_series(&p, i, j, 5).unwrap() {
                bad.push(format!("({},{})", i + 1, j + 1));
            }
        }
    }
    (bad.is_empty(), if bad.is_empty() { "36 columns to order 5".into() } else { bad.join(", ") })
}

fn criterion7() -> (bool, String) {
    let g = AdjointGroup::new(basis_presentation(false).unwrap()).unwrap();
    let reps: Vec<(String, CoeffVector)> =
        optimal_system_catalog().unwrap().into_iter().map(|(n, v)| (n, CoeffVector(v))).collect();
    let r = audit_optimal_system(&g, &reps, &AuditConfig::default());
    let reduced = r.counts.matched + r.counts.matched_with_residue + r.counts.unmatched;
    let invariant = |n: usize| r.invariants.iter().any(|i| i.is_ratio(n, 1));
    let again = run_args(["lieclass", "optsys", "--format", "json"]).text;
    let deterministic = again == run_args(["lieclass", "optsys", "--format", "json"]).text;
    let pass = reduced == 1000
        && r.replay_failures == 0
        && invariant(2)
        && invariant(5)
        && r.case_1a_normalization_refuted
        && deterministic;
    (
        pass,
        format!(
            "{} reduced, {} replay failures, a2/a1 {}, a5/a1 {}, case 1a refuted {}, deterministic {}",
            reduced,
            r.replay_failures,
            invariant(2),
            invariant(5),
            r.case_1a_normalization_refuted,
            deterministic
        ),
    )
}

fn criterion8() -> (bool, String) {
    let rows = table3_rows().unwrap();
    let a = audit_table3(&rows, &optimal_system_fields(false).unwrap()).unwrap();
    let translation_rows: Vec<usize> = rows
        .iter()
        .filter(|r| {
            r.xadd
                .components()
                .iter()
                .all(|(c, e)| ["y", "t", "u"].contains(&c.name()) && e.as_rational().is_some())
        })
        .map(|r| r.n)
        .collect();
    let failing: Vec<usize> = translation_rows
        .iter()
        .copied()
        .filter(|n| !a.rows[n - 1].printed.all_pass())
        .collect();
    let r32 = &a.rows[31].printed.i1;
    let worked = squash(&r32.expr) == "u+x/y" && !r32.pass;
    let golden = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/classify.json")).unwrap_or_default();
    let frozen = run_args(["lieclass", "classify", "--format", "json"]).text == golden;
    (
        a.rows.len() == 32 && failing.is_empty() && worked && frozen,
        format!(
            "{} rows; translation rows {:?}, failing {:?}; u + x/y residual {}; golden {}",
            a.rows.len(),
            translation_rows,
            failing,
            r32.residual,
            if frozen { "matches" } else { "differs" }
        ),
    )
}

fn criterion9() -> (bool, String) {
    let mut notes = Vec::new();
    let p = basis_presentation(false).unwrap();
    let jacobi = p.jacobi_defects().is_empty() && p.jacobi_fields_hold();
    notes.push(format!("jacobi {}", jacobi));

    let mut runner = TestRunner::new(Config { cases: 500, failure_persistence: None, ..Config::default() });
    let vars = common::VARS;
    let diff_ok = runner
        .run(&(common::tree(2, true, true), common::tree(2, true, true), -5i64..=5, 0usize..3), |(a, b, k, v)| {
            let (Ok(a), Ok(b)) = (normalize(&a), normalize(&b)) else { return Ok(()) };
            let v = Symbol::new(vars[v]);
            let leib = &(&a * &b).diff(&v) - &(&(&a.diff(&v) * &b) + &(&a * &b.diff(&v)));
            let k = Expr::int(k);
            let lin = &(&(&k * &a) + &b).diff(&v) - &(&(&k * &a.diff(&v)) + &b.diff(&v));
            proptest::prop_assert!(leib.is_zero() && lin.is_zero());
            Ok(())
        })
        .is_ok();
    notes.push(format!("leibniz/linearity {}", diff_ok));

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..120 {
        let x = jet_oracle::random_point_field(&mut rng);
        let u = jet_oracle::SamplePoly::random(&mut rng);
        let pt = [rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5)];
        worst = worst.max(jet_oracle::max_discrepancy(&x, &u, pt, 1e-4));
    }
    let jets_ok = worst < 1e-6;
    notes.push(format!("jet oracle max {:.1e}", worst));

    let mut runner = TestRunner::new(Config { cases: 10_000, failure_persistence: None, ..Config::default() });
    let idem = runner
        .run(&common::tree(3, true, true), |t| {
            if let Ok(e) = normalize(&t) {
                proptest::prop_assert_eq!(normalize(&e.to_tree()).unwrap(), e);
            }
            Ok(())
        })
        .is_ok();
    notes.push(format!("normalize idempotent {}", idem));

    let chart = ChartDecl::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(0xfa22);
    let pieces = ["x", "u_x", "d_y", "Phi", "exp", "(", ")", "+", "-", "*", "/", "^", "2", ",", ";", "'", "[", "]", "{", "}", " "];
    let total = std::panic::catch_unwind(move || {
        for i in 0..100_000 {
            let text: String = if i % 2 == 0 {
                let bytes: Vec<u8> = (0..rng.random_range(0..40)).map(|_| rng.random()).collect();
                String::from_utf8_lossy(&bytes).into_owned()
            } else {
                (0..rng.random_range(0..25)).map(|_| pieces[rng.random_range(0..pieces.len())]).collect()
            };
            let _ = parse_expression(&text, &chart);
            let _ = parse_field(&text, &chart);
            let _ = parse_chart(&text);
            let _ = parse_lsf(&text);
        }
    })
    .is_ok();
    notes.push(format!("parser total {}", total));

    (jacobi && diff_ok && jets_ok && idem && total, notes.join(", "))
}

fn main() {
    let budgets: [(u32, Option<u64>, fn() -> (bool, String)); 9] = [
        (1, Some(1), criterion1),
        (2, Some(1), criterion2),
        (3, None, criterion3),
        (4, None, criterion4),
        (5, Some(5), criterion5),
        (6, None, criterion6),
        (7, Some(30), criterion7),
        (8, Some(60), criterion8),
        (9, None, criterion9),
    ];
    let mut lines = Vec::new();
    for (id, budget, f) in budgets {
        let start = Instant::now();
        let (mut pass, mut detail) = f();
        let elapsed = start.elapsed();
        if let Some(secs) = budget {
            if elapsed > Duration::from_secs(secs) {
                pass = false;
                detail.push_str(&format!("; over the {} s budget", secs));
            }
        }
        lines.push(Line { id, pass, detail, elapsed });
    }
    let mut unexpected = 0;
    for l in &lines {
        println!(
            "criterion {}: {} ({:.2} s) {}",
            l.id,
            if l.pass { "PASS" } else { "FAIL" },
            l.elapsed.as_secs_f64(),
            l.detail
        );
        if !l.pass && !KNOWN_UNATTAINABLE.contains(&l.id) {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        eprintln!("{} criteria failed unexpectedly", unexpected);
        std::process::exit(1);
    }
}
