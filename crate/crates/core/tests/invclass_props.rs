use lieclass_core::catalog::{basis_presentation, optimal_system_fields, table3_rows};
use lieclass_core::determining::{is_symmetry, PdeInstance};
use lieclass_core::fieldlang::{parse_expression, parse_field, ChartDecl};
use lieclass_core::invclass::{
    annihilator_check, audit_table3, first_integrals, functionally_independent, project,
};
use lieclass_core::liealg::Q;
use proptest::prelude::*;

fn combination(c: &[i64]) -> lieclass_core::VectorField {
    let b = basis_presentation(false).unwrap();
    b.combine(&c.iter().map(|&k| Q::from_integer(k.into())).collect::<Vec<_>>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn integrals_are_annihilated_and_independent(
        c in proptest::collection::vec(-3i64..=3, 6),
        seed in any::<u64>(),
    ) {
        let z = project(&combination(&c)).unwrap();
        if let Ok(r) = first_integrals(&z) {
            for i in &r.integrals {
                prop_assert!(annihilator_check(&z, i).is_zero(), "{} kills {}?", z, i);
            }
            prop_assert!(functionally_independent(&r.integrals, 5, seed), "{:?}", r.integrals);
        }
    }
}

#[test]
fn every_item_projection_has_integrals() {
    for (name, y) in optimal_system_fields(false).unwrap() {
        let z = project(&y).unwrap();
        let r = first_integrals(&z).unwrap_or_else(|e| panic!("{}: {}", name, e));
        assert!(r.integrals.len() >= 2, "{}: {:?}", name, r.integrals);
    }
}

#[test]
fn passing_rows_keep_time_translation() {
    let a = audit_table3(&table3_rows().unwrap(), &optimal_system_fields(false).unwrap()).unwrap();
    let chart = ChartDecl::standard();
    let dt = parse_field("d_t", &chart).unwrap();
    let mut seen = 0;
    for r in a.rows.iter().filter(|r| r.printed.all_pass()) {
        let f = parse_expression(&r.printed.f_form, &chart).unwrap();
        assert!(is_symmetry(&dt, &PdeInstance::with_f(f)).unwrap().is_yes(), "row {}", r.n);
        seen += 1;
    }
    assert!(seen > 0);
}
