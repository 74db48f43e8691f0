//! Vector fields `Σ cᵢ ∂/∂zᵢ` with exact coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::symcore::{Expr, SymError, Symbol};

/// Display and iteration rank of a coordinate: x, y, t, u, f first, then
/// everything else by name.
pub fn coordinate_rank(s: &Symbol) -> (usize, String) {
    const FIXED: [&str; 5] = ["x", "y", "t", "u", "f"];
    match FIXED.iter().position(|n| *n == s.name()) {
        Some(i) => (i, String::new()),
        None => (FIXED.len(), s.name().to_string()),
    }
}

/// A vector field as a map from coordinate to coefficient. Zero
/// coefficients are never stored, so structural equality is field equality.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VectorField {
    coeffs: BTreeMap<Symbol, Expr>,
}

impl VectorField {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, Expr)>,
        S: Into<Symbol>,
    {
        let mut v = Self::zero();
        for (s, c) in pairs {
            let s = s.into();
            let c = &v.coeff_of(&s) + &c;
            v.set(s, c);
        }
        v
    }

    /// `∂/∂name`.
    pub fn partial(name: &str) -> Self {
        Self::from_pairs([(Symbol::new(name), Expr::one())])
    }

    pub fn set(&mut self, s: Symbol, c: Expr) {
        if c.is_zero() {
            self.coeffs.remove(&s);
        } else {
            self.coeffs.insert(s, c);
        }
    }

    pub fn coeff(&self, name: &str) -> Expr {
        self.coeff_of(&Symbol::new(name))
    }

    pub fn coeff_of(&self, s: &Symbol) -> Expr {
        self.coeffs.get(s).cloned().unwrap_or_else(Expr::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero components in display order.
    pub fn components(&self) -> Vec<(&Symbol, &Expr)> {
        let mut v: Vec<_> = self.coeffs.iter().collect();
        v.sort_by_key(|(s, _)| coordinate_rank(s));
        v
    }

    pub fn coordinates(&self) -> impl Iterator<Item = &Symbol> {
        self.coeffs.keys()
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        let mut out = self.clone();
        for (s, c) in &other.coeffs {
            let sum = &out.coeff_of(s) + c;
            out.set(s.clone(), sum);
        }
        out
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        self.add(&other.scale(&Expr::int(-1)))
    }

    pub fn scale(&self, k: &Expr) -> VectorField {
        let mut out = VectorField::zero();
        for (s, c) in &self.coeffs {
            out.set(s.clone(), c * k);
        }
        out
    }

    /// First-order action on a function: `Σ cᵢ ∂e/∂zᵢ`.
    pub fn apply(&self, e: &Expr) -> Expr {
        self.coeffs
            .iter()
            .map(|(s, c)| c * &e.diff(s))
            .sum()
    }

    /// Lie bracket `[self, other]` with components `self(otherᵃ) − other(selfᵃ)`.
    pub fn bracket(&self, other: &VectorField) -> VectorField {
        let mut out = VectorField::zero();
        let keys: std::collections::BTreeSet<&Symbol> =
            self.coeffs.keys().chain(other.coeffs.keys()).collect();
        for s in keys {
            let c = &self.apply(&other.coeff_of(s)) - &other.apply(&self.coeff_of(s));
            out.set(s.clone(), c);
        }
        out
    }

    /// Coefficient-wise map that may fail.
    pub fn try_map(
        &self,
        mut f: impl FnMut(&Symbol, &Expr) -> Result<Expr, SymError>,
    ) -> Result<VectorField, SymError> {
        let mut out = VectorField::zero();
        for (s, c) in &self.coeffs {
            out.set(s.clone(), f(s, c)?);
        }
        Ok(out)
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.components().into_iter().enumerate() {
            let text = if c.is_one() {
                format!("d_{}", s)
            } else if (-c).is_one() {
                format!("-d_{}", s)
            } else {
                let body = c.to_string();
                if c.numerator().len() > 1 {
                    format!("({})*d_{}", body, s)
                } else {
                    format!("{}*d_{}", body, s)
                }
            };
            match (i, text.strip_prefix('-')) {
                (0, _) => write!(f, "{}", text)?,
                (_, Some(rest)) => write!(f, " - {}", rest)?,
                (_, None) => write!(f, " + {}", text)?,
            }
        }
        Ok(())
    }
}
