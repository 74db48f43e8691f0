use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::error::SymError;
use super::expr::{Atom, Expr};
use super::poly::Poly;

impl Expr {
    /// Floating-point value; `env` supplies every atom.
    pub fn eval_f64(&self, env: &dyn Fn(&Atom) -> Option<f64>) -> Result<f64, SymError> {
        let n = eval_poly_f64(&self.num, env)?;
        let d = eval_poly_f64(&self.den, env)?;
        Ok(n / d)
    }

    /// Exact value for expressions without exponentials; `env` supplies
    /// every atom.
    pub fn eval_rational(
        &self,
        env: &dyn Fn(&Atom) -> Option<BigRational>,
    ) -> Result<BigRational, SymError> {
        let n = eval_poly_q(&self.num, env)?;
        let d = eval_poly_q(&self.den, env)?;
        if d == BigRational::from_integer(0.into()) {
            return Err(SymError::DegenerateDivision);
        }
        Ok(n / d)
    }
}

fn eval_poly_f64(p: &Poly, env: &dyn Fn(&Atom) -> Option<f64>) -> Result<f64, SymError> {
    let mut acc = 0.0;
    for (m, c) in p.terms() {
        let mut t = c.to_f64().unwrap_or(f64::NAN);
        for (a, k) in m.powers() {
            let v = env(a).ok_or_else(|| SymError::Unevaluable(Expr::atom(a.clone()).to_string()))?;
            t *= v.powi(*k as i32);
        }
        if let Some(e) = m.exp_arg() {
            t *= e.eval_f64(env)?.exp();
        }
        acc += t;
    }
    Ok(acc)
}

fn eval_poly_q(
    p: &Poly,
    env: &dyn Fn(&Atom) -> Option<BigRational>,
) -> Result<BigRational, SymError> {
    let mut acc = BigRational::from_integer(0.into());
    for (m, c) in p.terms() {
        if let Some(e) = m.exp_arg() {
            return Err(SymError::Unevaluable(format!("exp({})", e)));
        }
        let mut t = c.clone();
        for (a, k) in m.powers() {
            let v = env(a).ok_or_else(|| SymError::Unevaluable(Expr::atom(a.clone()).to_string()))?;
            t *= num_traits::pow(v, *k as usize);
        }
        acc += t;
    }
    Ok(acc)
}
