//! Symmetry residuals, mechanically split determining systems and
//! equivalence-generator checks for `u_t = f·(u_xx + u_yy)`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::field::VectorField;
use crate::jets::{prolong2, prolong_equivalence, CoefficientFunction, JetError, JetSpace};
use crate::symcore::{collect_by, Atom, Expr, MarkerMonomial, SymError, Substitution, Symbol};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum DetError {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error("marker monomial `{0}` has degree above 2 in second-order jets")]
    MarkerDegree(String),
}

/// `u_t − f·(u_xx + u_yy) = 0` with `f` either the arbitrary unknown
/// `F(x,y,u,u_x,u_y)` or a concrete expression. Unknown functions occurring
/// in `f` are treated as arbitrary.
#[derive(Clone, Debug)]
pub struct PdeInstance {
    pub jets: JetSpace,
    pub f: Expr,
    /// Right-hand side of `u_t = rhs`; `f·(u_xx + u_yy)` unless built by
    /// [`PdeInstance::with_rhs`].
    pub rhs: Expr,
}

impl PdeInstance {
    pub fn arbitrary() -> PdeInstance {
        PdeInstance::with_f(CoefficientFunction::standard().value())
    }

    pub fn with_f(f: Expr) -> PdeInstance {
        let mut p = PdeInstance {
            jets: JetSpace::standard(),
            f,
            rhs: Expr::zero(),
        };
        p.rhs = &p.f * &p.laplacian();
        p
    }

    /// `u_t = rhs` for an arbitrary second-order right-hand side; `f` is
    /// left at zero.
    pub fn with_rhs(rhs: Expr) -> PdeInstance {
        PdeInstance {
            jets: JetSpace::standard(),
            f: Expr::zero(),
            rhs,
        }
    }

    fn j(&self, along: &[&str]) -> Expr {
        Expr::symbol(&self.jets.jet(along).expect("standard jet"))
    }

    pub fn laplacian(&self) -> Expr {
        &self.j(&["x", "x"]) + &self.j(&["y", "y"])
    }

    /// `u_t − rhs`.
    pub fn equation(&self) -> Expr {
        &self.j(&["t"]) - &self.rhs
    }

    /// `u_t ↦ f·(u_xx + u_yy)`.
    pub fn on_manifold(&self) -> Substitution {
        Substitution::new().bind_symbol(
            self.jets.jet(&["t"]).expect("u_t"),
            self.rhs.clone(),
        )
    }

    /// Names of the unknown functions in the right-hand side.
    pub fn arbitrary_functions(&self) -> BTreeSet<String> {
        self.rhs
            .func_atoms()
            .iter()
            .map(|a| a.name.to_string())
            .collect()
    }

    /// Marker test for splitting: jets of order 1 and 2, and every atom of
    /// an arbitrary function.
    fn marker(&self) -> impl Fn(&Atom) -> bool + '_ {
        let funcs = self.arbitrary_functions();
        move |a: &Atom| match a {
            Atom::Sym(s) => matches!(self.jets.order_of(s), Some(1 | 2)),
            Atom::Func(f) => funcs.contains(f.name.as_ref()),
        }
    }
}

/// `X⁽²⁾Δ` restricted to solutions.
pub fn symmetry_residual(x: &VectorField, pde: &PdeInstance) -> Result<Expr, DetError> {
    let pf = prolong2(&pde.jets, x)?;
    let r = pf.apply(&pde.equation());
    let r = r.substitute(&pde.on_manifold())?;
    if let Some(s) = pde.jets.scratch_jets(&r).first() {
        return Err(JetError::ScratchJetLeft(s.name().to_string()).into());
    }
    Ok(r)
}

/// One member of a determining system: the coefficient of `marker`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeterminingEquation {
    pub marker: String,
    pub coefficient: String,
    #[serde(skip)]
    pub key: MarkerMonomial,
    #[serde(skip)]
    pub expr: Expr,
}

impl fmt::Display for DeterminingEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {} = 0", self.marker, self.coefficient)
    }
}

/// Equations required to vanish, one per marker monomial.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DeterminingSystem {
    pub equations: Vec<DeterminingEquation>,
}

impl DeterminingSystem {
    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// Members after `s`; empty members are dropped.
    pub fn specialize(&self, s: &Substitution) -> Result<DeterminingSystem, SymError> {
        let mut out = Vec::new();
        for eq in &self.equations {
            let e = eq.expr.substitute(s)?;
            if !e.is_zero() {
                out.push(DeterminingEquation {
                    marker: eq.marker.clone(),
                    coefficient: e.to_string(),
                    key: eq.key.clone(),
                    expr: e,
                });
            }
        }
        Ok(DeterminingSystem { equations: out })
    }
}

fn second_order_degree(pde: &PdeInstance, k: &MarkerMonomial) -> u32 {
    k.0.iter()
        .filter(|(a, _)| {
            a.as_symbol()
                .is_some_and(|s| pde.jets.order_of(s) == Some(2))
        })
        .map(|(_, d)| d)
        .sum()
}

/// Splits a residual by marker monomials.
pub fn split(residual: &Expr, pde: &PdeInstance) -> Result<DeterminingSystem, DetError> {
    let marker = pde.marker();
    let parts = collect_by(residual, &marker)?;
    let mut equations = Vec::new();
    for (k, c) in parts {
        if second_order_degree(pde, &k) > 2 {
            return Err(DetError::MarkerDegree(k.to_string()));
        }
        equations.push(DeterminingEquation {
            marker: k.to_string(),
            coefficient: c.to_string(),
            key: k,
            expr: c,
        });
    }
    Ok(DeterminingSystem { equations })
}

/// Residual of an ansatz (whose coefficients may be unknown functions),
/// split into the coefficients that must vanish.
pub fn determining_system(
    ansatz: &VectorField,
    pde: &PdeInstance,
) -> Result<DeterminingSystem, DetError> {
    split(&symmetry_residual(ansatz, pde)?, pde)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Yes,
    /// Some split coefficient is a nonzero constant multiple of known
    /// quantities; `witness` lists the offending terms.
    No { witness: Vec<String> },
    /// Every nonzero split coefficient involves free parameters or unknown
    /// functions of the field itself; they are the remaining constraints.
    Conditional { constraints: Vec<String> },
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No { .. } => "no",
            Verdict::Conditional { .. } => "conditional",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Yes => write!(f, "yes"),
            Verdict::No { witness } => write!(f, "no: {}", witness.join("; ")),
            Verdict::Conditional { constraints } => {
                write!(f, "conditional: {}", constraints.join("; "))
            }
        }
    }
}

fn is_free(e: &Expr, x: &VectorField, params: &BTreeSet<Symbol>) -> bool {
    let field_funcs: BTreeSet<String> = x
        .components()
        .iter()
        .flat_map(|(_, c)| c.func_atoms())
        .map(|a| a.name.to_string())
        .collect();
    e.func_atoms().iter().any(|a| field_funcs.contains(a.name.as_ref()))
        || e.symbols().iter().any(|s| params.contains(s))
}

/// Decides whether `x` is a symmetry of `pde` for arbitrary unknown
/// functions in `f`. Symbols in `params` are free constants of the field.
pub fn is_symmetry_with(
    x: &VectorField,
    pde: &PdeInstance,
    params: &BTreeSet<Symbol>,
) -> Result<Verdict, DetError> {
    let r = symmetry_residual(x, pde)?;
    if r.is_zero() {
        return Ok(Verdict::Yes);
    }
    let sys = split(&r, pde)?;
    let mut witness = Vec::new();
    let mut constraints = Vec::new();
    for eq in &sys.equations {
        let term = if eq.key.is_one() {
            eq.coefficient.clone()
        } else {
            format!("({})*{}", eq.coefficient, eq.marker)
        };
        if is_free(&eq.expr, x, params) {
            constraints.push(term);
        } else {
            witness.push(term);
        }
    }
    Ok(if witness.is_empty() {
        Verdict::Conditional { constraints }
    } else {
        Verdict::No { witness }
    })
}

/// [`is_symmetry_with`] treating `s` and `c1..c4` as free constants.
pub fn is_symmetry(x: &VectorField, pde: &PdeInstance) -> Result<Verdict, DetError> {
    let params = ["s", "c1", "c2", "c3", "c4"].iter().map(|s| Symbol::new(s)).collect();
    is_symmetry_with(x, pde, &params)
}

/// The three conditions an equivalence generator must meet.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceResiduals {
    /// `φ^t − f(φ^xx + φ^yy) − μ(u_xx + u_yy)` on solutions, `f` a coordinate.
    pub main: Expr,
    pub mu_t: Expr,
    pub mu_ut: Expr,
}

impl EquivalenceResiduals {
    pub fn all_zero(&self) -> bool {
        self.main.is_zero() && self.mu_t.is_zero() && self.mu_ut.is_zero()
    }
}

pub fn equivalence_residuals(y: &VectorField) -> Result<EquivalenceResiduals, DetError> {
    let js = JetSpace::standard();
    let pf = prolong_equivalence(&js, y, &CoefficientFunction::standard())?;
    let f = Expr::sym("f");
    let pde = PdeInstance::with_f(f.clone());
    let lap = pde.laplacian();
    let main = &(&pf.phi("u_t") - &(&f * &(&pf.phi("u_xx") + &pf.phi("u_yy"))))
        - &(&y.coeff("f") * &lap);
    let main = main.substitute(&pde.on_manifold())?;
    Ok(EquivalenceResiduals {
        main,
        mu_t: pf.mu_t.expect("set by prolong_equivalence"),
        mu_ut: pf.mu_ut.expect("set by prolong_equivalence"),
    })
}

/// The generator family with constants `c1..c4`, time function `a` and
/// potential `beta` substituted in.
pub fn equivalence_family(a: &Expr, beta: &Expr) -> VectorField {
    let c = |i: usize| Expr::sym(&format!("c{}", i));
    let (x, y, u, f) = (Expr::sym("x"), Expr::sym("y"), Expr::sym("u"), Expr::sym("f"));
    let da = a.diff(&Symbol::new("t"));
    VectorField::from_pairs([
        ("x", &(&(&c(1) * &x) + &(&c(2) * &y)) + &c(3)),
        ("y", &(&c(1) * &y) + &c(4)),
        ("t", a.clone()),
        ("u", &(&c(1) * &u) + beta),
        ("f", &(&c(1) - &da) * &f),
    ])
}

#[cfg(test)]
mod tests;
