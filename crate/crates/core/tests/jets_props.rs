mod common;

#[path = "common/jet_oracle.rs"]
mod jet_oracle;

use jet_oracle::*;
use lieclass_core::fieldlang::parse_field;
use lieclass_core::jets::{prolong2, JetSpace};
use lieclass_core::{ChartDecl, Expr};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn numeric_jet_oracle_on_random_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..120 {
        let x = random_point_field(&mut rng);
        let u = SamplePoly::random(&mut rng);
        let p = [
            rng.random_range(-0.5..0.5),
            rng.random_range(-0.5..0.5),
            rng.random_range(-0.5..0.5),
        ];
        let d = max_discrepancy(&x, &u, p, 1e-4);
        assert!(d < 1e-6, "discrepancy {} for field {}", d, x);
    }
}

#[test]
fn numeric_jet_oracle_on_named_fields() {
    let chart = ChartDecl::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for src in ["y*d_x", "x*d_x + u*d_u", "x*d_x + y*d_y + t*d_t + u*d_u", "t^2*d_t + x*t*d_x + u*x^2*d_u"] {
        let x = parse_field(src, &chart).unwrap();
        for _ in 0..10 {
            let u = SamplePoly::random(&mut rng);
            let d = max_discrepancy(&x, &u, [0.3, -0.2, 0.1], 1e-4);
            assert!(d < 1e-6, "{}: {}", src, d);
        }
    }
}

fn coeff_strategy() -> impl Strategy<Value = String> {
    prop::collection::vec(
        (prop::sample::select(vec!["1", "x", "y", "t", "u", "x*u", "t^2", "y*x"]), -3i32..=3),
        1..4,
    )
    .prop_map(|v| {
        v.iter()
            .map(|(m, k)| format!("({})*{}", k, m))
            .collect::<Vec<_>>()
            .join(" + ")
    })
}

fn field_strategy() -> impl Strategy<Value = String> {
    prop::collection::vec(coeff_strategy(), 4).prop_map(|c| {
        format!("({})*d_x + ({})*d_y + ({})*d_t + ({})*d_u", c[0], c[1], c[2], c[3])
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn prolongation_is_linear(a in field_strategy(), b in field_strategy(), p in -4i64..=4, q in -4i64..=4) {
        let chart = ChartDecl::standard();
        let js = JetSpace::standard();
        let (x, y) = (parse_field(&a, &chart).unwrap(), parse_field(&b, &chart).unwrap());
        let (p, q) = (Expr::int(p), Expr::int(q));
        let combo = x.scale(&p).add(&y.scale(&q));
        let lhs = prolong2(&js, &combo).unwrap();
        let px = prolong2(&js, &x).unwrap();
        let py = prolong2(&js, &y).unwrap();
        for (s, c) in &lhs.jet_coeffs {
            let want = &(&p * &px.jet_coeffs[s]) + &(&q * &py.jet_coeffs[s]);
            prop_assert_eq!(c, &want);
        }
    }
}
