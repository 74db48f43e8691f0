//! One-dimensional subalgebras up to the adjoint action: reduction by
//! adjoint moves and scaling, orbit invariants, and the audit of a
//! claimed list of representatives.

mod audit;
mod canonical;
mod invariants;
mod reduce;

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::field::VectorField;
use crate::liealg::{
    adjoint_exp, render_combination, span_coordinates, AdjointMatrix, LieAlgebraPresentation,
    LieError, Matrix, ParamValue, Q,
};
use crate::symcore::{Expr, Substitution, Symbol};

pub use audit::{audit_optimal_system, AuditConfig, AuditReport, Category, SampleOutcome};
pub use canonical::canonical_form;
pub use invariants::{orbit_invariants, OrbitInvariant};
pub use reduce::{reduce, Case, ParameterResidue, ReductionTrace, TraceOutcome};

pub const DEFAULT_SEED: u64 = 0xC1A5_51F1;
pub const DEFAULT_SAMPLES: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MoveError {
    #[error("adjoint matrix of Y{} is not rational at s = {}", .generator + 1, .s)]
    Irrational { generator: usize, s: ParamValue },
    #[error("scaling by zero")]
    ZeroScale,
    #[error("unknown reflection `{0}`")]
    UnknownReflection(String),
}

/// Coordinates of `Σ a_i Y_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CoeffVector(pub Vec<Q>);

impl CoeffVector {
    pub fn from_ints(v: &[i64]) -> Self {
        CoeffVector(v.iter().map(|&n| Q::from_integer(n.into())).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn get(&self, i: usize) -> &Q {
        &self.0[i]
    }

    pub fn scaled(&self, l: &Q) -> Self {
        CoeffVector(self.0.iter().map(|c| c * l).collect())
    }

    pub fn render(&self, names: &[String]) -> String {
        render_combination(&self.0, names, None, |q: &Q| q.is_zero())
    }
}

impl fmt::Display for CoeffVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|q| q.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for CoeffVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|q| q.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Move {
    Scale {
        #[serde(serialize_with = "ser_q")]
        factor: Q,
    },
    Adj {
        generator: usize,
        s: ParamValue,
    },
    Reflect {
        coordinate: String,
    },
}

fn ser_q<S: serde::Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

impl Move {
    pub fn describe(&self, names: &[String]) -> String {
        match self {
            Move::Scale { factor } => format!("scale {}", factor),
            Move::Adj { generator, s } => format!("Ad(exp({}*{}))", s, names[*generator]),
            Move::Reflect { coordinate } => format!("reflect {} -> -{}", coordinate, coordinate),
        }
    }
}

/// A closed algebra with its adjoint matrices and the available
/// coordinate reflections.
#[derive(Debug, Clone)]
pub struct AdjointGroup {
    pub presentation: LieAlgebraPresentation,
    pub matrices: Vec<AdjointMatrix>,
    pub reflections: Vec<(String, Matrix)>,
    words: Vec<Vec<String>>,
}

const REFLECTED: [&str; 4] = ["x", "t", "u", "f"];

/// Push-forward of the basis under `c ↦ −c`, when it stays in the span.
fn reflection_matrix(p: &LieAlgebraPresentation, c: &str) -> Option<Matrix> {
    let sym = Symbol::new(c);
    let tmp = Symbol::new(&format!("{}'", c));
    let out = Substitution::new().bind_symbol(sym.clone(), -&Expr::symbol(&tmp));
    let back = Substitution::new().bind_symbol(tmp, Expr::symbol(&sym));
    let n = p.dim();
    let mut cols = Vec::with_capacity(n);
    for y in &p.basis {
        let img = y
            .try_map(|a, e| {
                let e = e.substitute(&out)?.substitute(&back)?;
                Ok(if a == &sym { -&e } else { e })
            })
            .ok()?;
        cols.push(span_coordinates(&p.basis, &img)?);
    }
    Some((0..n).map(|k| (0..n).map(|j| cols[j][k].clone()).collect()).collect())
}

impl AdjointGroup {
    pub fn new(presentation: LieAlgebraPresentation) -> Result<Self, LieError> {
        presentation.require_closed()?;
        let matrices = (0..presentation.dim())
            .map(|i| adjoint_exp(&presentation, i))
            .collect::<Result<Vec<_>, _>>()?;
        let reflections = REFLECTED
            .iter()
            .filter_map(|c| reflection_matrix(&presentation, c).map(|m| (c.to_string(), m)))
            .collect();
        let mut g = AdjointGroup {
            presentation,
            matrices,
            reflections,
            words: Vec::new(),
        };
        g.words = g.distinct_words();
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.presentation.dim()
    }

    pub fn names(&self) -> &[String] {
        &self.presentation.names
    }

    /// Exact image of `a` under `Ad(exp(s·Y_g))`.
    pub fn adjoint(&self, g: usize, s: &ParamValue, a: &CoeffVector) -> Result<CoeffVector, MoveError> {
        let m = &self.matrices[g];
        let mut out = Vec::with_capacity(a.0.len());
        for row in &m.entries {
            let mut acc = Q::zero();
            for (e, c) in row.iter().zip(&a.0) {
                if c.is_zero() || e.is_zero() {
                    continue;
                }
                let v = e.eval_param(s).ok_or_else(|| MoveError::Irrational {
                    generator: g,
                    s: s.clone(),
                })?;
                acc += v * c;
            }
            out.push(acc);
        }
        Ok(CoeffVector(out))
    }

    pub fn reflect(&self, coordinate: &str, a: &CoeffVector) -> Result<CoeffVector, MoveError> {
        let (_, m) = self
            .reflections
            .iter()
            .find(|(c, _)| c == coordinate)
            .ok_or_else(|| MoveError::UnknownReflection(coordinate.to_string()))?;
        Ok(CoeffVector(
            m.iter()
                .map(|row| row.iter().zip(&a.0).map(|(x, y)| x * y).sum())
                .collect(),
        ))
    }

    pub fn apply(&self, mv: &Move, a: &CoeffVector) -> Result<CoeffVector, MoveError> {
        match mv {
            Move::Scale { factor } if factor.is_zero() => Err(MoveError::ZeroScale),
            Move::Scale { factor } => Ok(a.scaled(factor)),
            Move::Adj { generator, s } => self.adjoint(*generator, s, a),
            Move::Reflect { coordinate } => self.reflect(coordinate, a),
        }
    }

    pub fn replay(&self, input: &CoeffVector, moves: &[Move]) -> Result<CoeffVector, MoveError> {
        moves.iter().try_fold(input.clone(), |a, m| self.apply(m, &a))
    }

    /// The field `Σ a_i Y_i`.
    pub fn field_of(&self, a: &CoeffVector) -> VectorField {
        self.presentation.combine(&a.0)
    }

    /// Reflection words with pairwise distinct actions on the algebra,
    /// identity first.
    pub fn reflection_words(&self) -> &[Vec<String>] {
        &self.words
    }

    fn distinct_words(&self) -> Vec<Vec<String>> {
        let n = self.reflections.len();
        let dim = self.dim();
        let mut seen = Vec::new();
        let mut out = Vec::new();
        for mask in 0..1usize << n {
            let word: Vec<String> = (0..n)
                .filter(|b| mask & (1 << b) != 0)
                .map(|b| self.reflections[b].0.clone())
                .collect();
            let action: Vec<CoeffVector> = (0..dim)
                .map(|j| {
                    let mut e = vec![Q::zero(); dim];
                    e[j] = Q::one();
                    self.apply_word(&word, &CoeffVector(e))
                })
                .collect();
            if !seen.contains(&action) {
                seen.push(action);
                out.push(word);
            }
        }
        out
    }

    pub fn apply_word(&self, word: &[String], a: &CoeffVector) -> CoeffVector {
        word.iter()
            .fold(a.clone(), |v, c| self.reflect(c, &v).expect("listed reflection"))
    }
}

pub(crate) fn is_unit(q: &Q) -> bool {
    q.is_one() || (-q).is_one()
}
