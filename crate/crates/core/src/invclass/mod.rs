//! Projection of subalgebra representatives to `(x, y, u, f)`, their
//! invariants, and the classification rows built from them.

mod audit;
mod integrals;
#[cfg(test)]
mod tests;

use serde::Serialize;
use thiserror::Error;

use crate::determining::{is_symmetry, DetError, PdeInstance, Verdict};
use crate::field::VectorField;
use crate::symcore::{Expr, Symbol};

pub use audit::{audit_table3, load_table3, RowReport, Table3Audit, Table3Row, YMatch};
pub use integrals::{first_integrals, functionally_independent, FirstIntegrals};

/// Coordinates of the projected chart.
pub const PROJECTED: [&str; 4] = ["x", "y", "u", "f"];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InvError {
    #[error("projected coefficient of d_{coord} depends on t: {coeff}")]
    TDependentProjection { coord: String, coeff: String },
    #[error("no first-integral strategy applies to {0}")]
    StrategyExhausted(String),
    #[error("coordinate `{0}` is not on the projected chart")]
    OffChart(String),
    #[error("f-level invariant is not linear in f: {0}")]
    FNotSolvable(String),
    #[error(transparent)]
    Det(#[from] DetError),
}

/// Drops `d_t` and checks that nothing left depends on `t`.
pub fn project(y: &VectorField) -> Result<VectorField, InvError> {
    let t = Symbol::new("t");
    let mut out = VectorField::zero();
    for (c, e) in y.components() {
        if *c == t {
            continue;
        }
        if e.contains_symbol(&t) {
            return Err(InvError::TDependentProjection {
                coord: c.name().to_string(),
                coeff: e.to_string(),
            });
        }
        out.set(c.clone(), e.clone());
    }
    Ok(out)
}

/// Zero, or a pure `f`-scaling: such projections give no condition on the
/// shape of `f` in `(x, y, u)`.
pub fn is_degenerate(z: &VectorField) -> bool {
    z.coordinates().all(|c| c.name() == "f")
}

/// `Z(I)`, normalized; zero means `I` is invariant.
pub fn annihilator_check(z: &VectorField, i: &Expr) -> Expr {
    z.apply(i)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantCheck {
    pub expr: String,
    pub residual: String,
    pub pass: bool,
}

impl InvariantCheck {
    fn new(z: &VectorField, i: &Expr) -> Self {
        let r = annihilator_check(z, i);
        InvariantCheck {
            expr: i.to_string(),
            residual: r.to_string(),
            pass: r.is_zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationRow {
    pub id: String,
    pub z: String,
    pub i1: InvariantCheck,
    pub i2: InvariantCheck,
    pub weight: String,
    pub f_form: String,
    pub xadd: String,
    pub symmetry: Verdict,
}

impl ClassificationRow {
    pub fn all_pass(&self) -> bool {
        self.i1.pass && self.i2.pass && self.symmetry.is_yes()
    }

    pub fn verdicts(&self) -> [bool; 3] {
        [self.i1.pass, self.i2.pass, self.symmetry.is_yes()]
    }
}

/// `f = weight` when `I₂ = f/weight`.
pub fn weight_of(i2: &Expr) -> Result<Expr, InvError> {
    let f = Symbol::new("f");
    let c = i2.diff(&f);
    let linear = !c.is_zero() && !c.contains_symbol(&f) && (i2 - &(&c * &Expr::symbol(&f))).is_zero();
    if !linear {
        return Err(InvError::FNotSolvable(i2.to_string()));
    }
    c.recip().map_err(|_| InvError::FNotSolvable(i2.to_string()))
}

pub fn phi_of(arg: &Expr) -> Expr {
    Expr::func("Phi", vec![arg.clone()], vec![])
}

/// Row from `I₂ = Φ(I₁)` solved as `f = weight·Φ(I₁)`, with both
/// annihilator checks and the symmetry test of `xadd` for that `f`.
pub fn build_row(
    id: &str,
    z: &VectorField,
    i1: &Expr,
    i2: &Expr,
    xadd: &VectorField,
) -> Result<ClassificationRow, InvError> {
    let w = weight_of(i2)?;
    let f_form = &w * &phi_of(i1);
    let symmetry = is_symmetry(xadd, &PdeInstance::with_f(f_form.clone()))?;
    Ok(ClassificationRow {
        id: id.to_string(),
        z: z.to_string(),
        i1: InvariantCheck::new(z, i1),
        i2: InvariantCheck::new(z, i2),
        weight: w.to_string(),
        f_form: f_form.to_string(),
        xadd: xadd.to_string(),
        symmetry,
    })
}
