use super::*;
use crate::catalog::{basis_presentation, optimal_system_fields, table3_rows};
use crate::fieldlang::{parse_expression, parse_field, ChartDecl};

fn chart() -> ChartDecl {
    ChartDecl::standard()
}

fn fld(s: &str) -> VectorField {
    parse_field(s, &chart()).unwrap()
}

fn ex(s: &str) -> Expr {
    parse_expression(s, &chart()).unwrap()
}

fn same_set(got: &[Expr], want: &[&str]) {
    let mut g: Vec<String> = got.iter().map(|e| e.to_string()).collect();
    let mut w: Vec<String> = want.iter().map(|s| ex(s).to_string()).collect();
    g.sort();
    w.sort();
    assert_eq!(g, w);
}

#[test]
fn projection_drops_d_t() {
    let b = basis_presentation(false).unwrap();
    let z = project(&b.basis[0]).unwrap();
    assert_eq!(z, fld("x*d_x + y*d_y + u*d_u + f*d_f"));
    assert!(project(&b.basis[4]).map(|z| is_degenerate(&z)).unwrap());
}

#[test]
fn projection_rejects_t_dependence() {
    let e = project(&fld("t*d_x")).unwrap_err();
    assert!(matches!(e, InvError::TDependentProjection { .. }));
}

#[test]
fn shear_keeps_y_u_f() {
    let r = first_integrals(&fld("y*d_x")).unwrap();
    same_set(&r.integrals, &["y", "u", "f"]);
}

#[test]
fn dilation_gives_ratios() {
    let r = first_integrals(&fld("x*d_x + y*d_y + u*d_u + f*d_f")).unwrap();
    assert_eq!(r.integrals.len(), 3);
    same_set(&r.integrals, &["u/x", "y/x", "f/x"]);
}

#[test]
fn translation_pair() {
    let r = first_integrals(&fld("-d_y + d_u")).unwrap();
    same_set(&r.integrals, &["x", "u + y", "f"]);
}

#[test]
fn clock_coordinate_for_last_row() {
    let z = fld("y*d_x - d_y - d_u - f*d_f");
    let r = first_integrals(&z).unwrap();
    assert_eq!(r.integrals.len(), 3);
    for i in &r.integrals {
        assert!(annihilator_check(&z, i).is_zero(), "{}", i);
    }
    assert!(functionally_independent(&r.integrals, 5, 7));
    // the printed invariant is not annihilated
    assert!(!annihilator_check(&z, &ex("u + x/y")).is_zero());
}

#[test]
fn off_chart_coordinate() {
    assert!(matches!(first_integrals(&fld("d_t")), Err(InvError::OffChart(_))));
}

#[test]
fn row_three_passes() {
    let row = build_row("3", &fld("-d_y"), &ex("u"), &ex("f"), &fld("-d_y")).unwrap();
    assert!(row.all_pass());
    assert_eq!(row.f_form, ex("Phi(u)").to_string());
}

#[test]
fn row_two_fails_with_witness() {
    let row = build_row("2", &fld("y*d_x"), &ex("u"), &ex("f"), &fld("y*d_x")).unwrap();
    assert!(row.i1.pass && row.i2.pass);
    let Verdict::No { witness } = &row.symmetry else {
        panic!("expected no, got {}", row.symmetry);
    };
    let w = witness.join(" ").replace(' ', "");
    assert!(w.contains("Phi(u)") && w.contains("u_xy"), "{}", w);
}

#[test]
fn weight_requires_linear_f() {
    assert!(matches!(weight_of(&ex("f^2")), Err(InvError::FNotSolvable(_))));
    assert!(matches!(weight_of(&ex("u")), Err(InvError::FNotSolvable(_))));
    assert_eq!(weight_of(&ex("f*exp(-y)")).unwrap(), ex("exp(y)"));
}

#[test]
fn table_has_thirty_two_rows() {
    let rows = table3_rows().unwrap();
    assert_eq!(rows.len(), 32);
    assert_eq!(rows[31].i1, ex("u + x/y"));
}

#[test]
fn items_project_onto_rows() {
    let items = optimal_system_fields(false).unwrap();
    let rows = table3_rows().unwrap();
    let a = audit_table3(&rows[..4], &items).unwrap();
    assert_eq!(a.rows.len(), 4);
    assert!(a.rows[2].printed.all_pass());
    assert!(a.summary.all_pass.contains(&3));
    assert!(a.summary.symmetry_fail.contains(&2));
}
