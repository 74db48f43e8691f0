use lieclass_core::fieldlang::{
    parse_chart, parse_expression, parse_field, parse_lsf, render_field, ChartDecl,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PIECES: [&str; 30] = [
    "x", "y", "t", "u", "f", "u_x", "u_yy", "d_x", "d_f", "Phi", "F", "exp", "(", ")", "+",
    "-", "*", "/", "^", "2", "0", ",", ";", "'", "[", "]", "chart", "{", "}", " ",
];

#[test]
fn parser_is_total_on_random_bytes() {
    let chart = ChartDecl::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for i in 0..100_000 {
        let text = if i % 2 == 0 {
            let len = rng.random_range(0..40);
            let bytes: Vec<u8> = (0..len).map(|_| rng.random()).collect();
            String::from_utf8_lossy(&bytes).into_owned()
        } else {
            let len = rng.random_range(0..25);
            (0..len)
                .map(|_| PIECES[rng.random_range(0..PIECES.len())])
                .collect()
        };
        let _ = parse_expression(&text, &chart);
        let _ = parse_field(&text, &chart);
        let _ = parse_chart(&text);
        let _ = parse_lsf(&text);
    }
}

#[test]
fn deep_nesting_is_an_error_not_a_crash() {
    let chart = ChartDecl::standard();
    let text = format!("{}x{}", "(".repeat(5000), ")".repeat(5000));
    assert!(parse_expression(&text, &chart).is_err());
    let text = "-".repeat(5000) + "x";
    assert!(parse_expression(&text, &chart).is_err());
}

fn coeff() -> impl Strategy<Value = String> {
    let atoms = prop::sample::select(vec![
        "x", "y", "t", "u", "f", "1", "2", "x/y", "exp(-y)", "Phi(u + x/y)", "(x - y)", "u^2",
    ]);
    prop::collection::vec((atoms, -3i32..=3), 1..4).prop_map(|v| {
        v.into_iter()
            .map(|(a, k)| format!("({})*{}", k, a))
            .collect::<Vec<_>>()
            .join(" + ")
    })
}

proptest! {
    #[test]
    fn field_render_round_trips(
        parts in prop::collection::vec((coeff(), prop::sample::select(vec!["x", "y", "t", "u", "f"])), 1..5)
    ) {
        let chart = ChartDecl::standard();
        let src = parts
            .iter()
            .map(|(c, d)| format!("({})*d_{}", c, d))
            .collect::<Vec<_>>()
            .join(" + ");
        let v = parse_field(&src, &chart).unwrap();
        let again = parse_field(&render_field(&v), &chart).unwrap();
        prop_assert_eq!(again, v);
    }
}
