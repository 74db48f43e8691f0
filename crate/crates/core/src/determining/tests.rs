use super::*;
use crate::fieldlang::{parse_expression, parse_field, ChartDecl};

fn chart() -> ChartDecl {
    ChartDecl::standard()
}

fn e(s: &str) -> Expr {
    parse_expression(s, &chart()).unwrap()
}

fn field(s: &str) -> VectorField {
    parse_field(s, &chart()).unwrap()
}

const FARGS: &str = "x,y,u,u_x,u_y";

#[test]
fn residual_examples() {
    let pde = PdeInstance::arbitrary();
    assert!(symmetry_residual(&field("d_t"), &pde).unwrap().is_zero());
    assert_eq!(
        symmetry_residual(&field("d_x"), &pde).unwrap(),
        e(&format!("-F'[0]({})*(u_xx + u_yy)", FARGS))
    );
    let pde = PdeInstance::with_f(e("Phi(u)"));
    assert_eq!(
        symmetry_residual(&field("y*d_x"), &pde).unwrap(),
        e("2*Phi(u)*u_xy")
    );
}

#[test]
fn verdict_examples() {
    let pde = PdeInstance::arbitrary();
    assert_eq!(is_symmetry(&field("d_t"), &pde).unwrap(), Verdict::Yes);
    let phi = PdeInstance::with_f(e("Phi(u)"));
    assert_eq!(is_symmetry(&field("-d_y"), &phi).unwrap(), Verdict::Yes);
    let scaled = PdeInstance::with_f(e("x*Phi(u/x)"));
    assert_eq!(
        is_symmetry(&field("x*d_x + y*d_y + t*d_t + u*d_u"), &scaled).unwrap(),
        Verdict::Yes
    );
}

#[test]
fn principal_algebra_failures_name_f_derivatives() {
    let pde = PdeInstance::arbitrary();
    for (src, atom) in [("d_x", "F'[0]"), ("d_y", "F'[1]"), ("x*d_x", "F'[0]")] {
        match is_symmetry(&field(src), &pde).unwrap() {
            Verdict::No { witness } => {
                assert!(witness.iter().any(|w| w.contains(atom)), "{}: {:?}", src, witness)
            }
            v => panic!("{}: {:?}", src, v),
        }
    }
}

#[test]
fn only_time_translation_survives_for_arbitrary_f() {
    let pde = PdeInstance::arbitrary();
    let basis = [field("d_x"), field("d_y"), field("d_t"), field("x*d_x + y*d_y + t*d_t + u*d_u")];
    let vals = [-1i64, 0, 1];
    for a in vals {
        for b in vals {
            for c in vals {
                for d in vals {
                    let k = [a, b, c, d];
                    if k == [0; 4] {
                        continue;
                    }
                    let mut x = VectorField::zero();
                    for (ki, bi) in k.iter().zip(&basis) {
                        x = x.add(&bi.scale(&Expr::int(*ki)));
                    }
                    let yes = is_symmetry(&x, &pde).unwrap().is_yes();
                    assert_eq!(yes, a == 0 && b == 0 && d == 0, "{:?}", k);
                }
            }
        }
    }
}

#[test]
fn residual_is_linear_in_the_field() {
    let pde = PdeInstance::with_f(e("exp(-x/y)*Phi(u + x/y)"));
    let a = field("y*d_x + u*d_u");
    let b = field("x*t*d_t - d_y");
    let lhs = symmetry_residual(&a.scale(&Expr::int(3)).add(&b), &pde).unwrap();
    let rhs = &(&Expr::int(3) * &symmetry_residual(&a, &pde).unwrap())
        + &symmetry_residual(&b, &pde).unwrap();
    assert_eq!(lhs, rhs);
}

fn general_chart() -> ChartDecl {
    crate::fieldlang::parse_chart(
        "vars x y t; dep u; class f; param c1 c2 c3 c4;
         fun F(x,y,u,u_x,u_y); fun X1(x,y,t,u), X2(x,y,t,u), X3(x,y,t,u), P(x,y,t,u);",
    )
    .unwrap()
}

#[test]
fn general_ansatz_forces_time_only_xi3() {
    let c = general_chart();
    let ansatz = parse_field(
        "X1(x,y,t,u)*d_x + X2(x,y,t,u)*d_y + X3(x,y,t,u)*d_t + P(x,y,t,u)*d_u",
        &c,
    )
    .unwrap();
    let heat = PdeInstance::with_f(Expr::one());
    let sys = determining_system(&ansatz, &heat).unwrap();
    assert!(!sys.is_empty());
    // ξ³ = x with everything else zero violates a member.
    let body = |s: &str| parse_expression(s, &c).unwrap();
    let sub = Substitution::new()
        .bind_function("X1", vec![], Expr::zero())
        .bind_function("X2", vec![], Expr::zero())
        .bind_function("X3", ["x", "y", "t", "u"].iter().map(|s| Symbol::new(s)).collect(), body("x"))
        .bind_function("P", vec![], Expr::zero());
    let spec = sys.specialize(&sub).unwrap();
    assert!(!spec.is_empty());
    // A genuine heat symmetry, the scaling 2t d_t + x d_x + y d_y, clears every member.
    let params: Vec<Symbol> = ["x", "y", "t", "u"].iter().map(|s| Symbol::new(s)).collect();
    let sub = Substitution::new()
        .bind_function("X1", params.clone(), body("x"))
        .bind_function("X2", params.clone(), body("y"))
        .bind_function("X3", params.clone(), body("2*t"))
        .bind_function("P", params, Expr::zero());
    assert!(sys.specialize(&sub).unwrap().is_empty());
}

#[test]
fn translation_ansatz_gives_empty_system() {
    let pde = PdeInstance::arbitrary();
    assert!(determining_system(&field("d_t"), &pde).unwrap().is_empty());
}

#[test]
fn shear_ansatz_shows_missing_conformal_constraint() {
    let pde = PdeInstance::arbitrary();
    let sys = determining_system(&field("y*d_x"), &pde).unwrap();
    let member = sys
        .equations
        .iter()
        .find(|q| q.marker.contains("u_xy"))
        .expect("a u_xy member");
    assert_eq!(member.expr, Expr::int(2));
}

#[test]
fn equivalence_examples() {
    let y1 = field("x*d_x + y*d_y + t*d_t + u*d_u + f*d_f");
    assert!(equivalence_residuals(&y1).unwrap().all_zero());
    assert!(equivalence_residuals(&field("d_x")).unwrap().all_zero());
    let c = crate::fieldlang::parse_chart(
        "vars x y t; dep u; class f; fun a(t);",
    )
    .unwrap();
    let y = parse_field("a(t)*d_t - a'[0](t)*f*d_f", &c).unwrap();
    let r = equivalence_residuals(&y).unwrap();
    assert!(r.main.is_zero());
    assert!(r.mu_ut.is_zero());
    // μ_t = −a''·f survives unless a is at most linear.
    assert_eq!(r.mu_t, parse_expression("-a'[0,0](t)*f", &c).unwrap());
}

#[test]
fn family_members() {
    let t = Expr::sym("t");
    let harmonic = ["1", "x", "y", "x*y", "x^2 - y^2"];
    for a in [Expr::one(), t.clone()] {
        for b in harmonic {
            let y = equivalence_family(&a, &e(b));
            let r = equivalence_residuals(&y).unwrap();
            // The scaling constant with the printed μ and the shear constant both survive.
            assert_eq!(r.main, e("c1*f*(u_xx + u_yy) + 2*c2*f*u_xy"), "beta = {}", b);
            assert!(r.mu_t.is_zero() && r.mu_ut.is_zero());
        }
    }
    let y = equivalence_family(&(&t * &t), &Expr::one());
    assert_eq!(equivalence_residuals(&y).unwrap().mu_t, e("-2*f"));
    let y = equivalence_family(&t, &e("x^2"));
    let r = equivalence_residuals(&y).unwrap();
    assert_eq!(r.main, e("c1*f*(u_xx + u_yy) + 2*c2*f*u_xy - 2*f"));
}

#[test]
fn doubled_scaling_weight_clears_c1() {
    let y = parse_field("x*d_x + y*d_y + u*d_u + 2*f*d_f", &chart()).unwrap();
    assert!(equivalence_residuals(&y).unwrap().all_zero());
}
