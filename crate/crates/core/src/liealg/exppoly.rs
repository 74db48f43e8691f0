//! The ring ℚ[s]·exp(ℤs): finite sums `q·s^p·e^{c·s}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::symcore::{Expr, Symbol};

use super::linalg::{q, Q};

/// A value of the group parameter: either a rational `s`, or `s = ln r`
/// for a positive rational `r` (so that `e^s` stays rational).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum ParamValue {
    #[serde(serialize_with = "ser_q")]
    Rational(Q),
    #[serde(serialize_with = "ser_q")]
    LogOf(Q),
}

fn ser_q<S: serde::Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Rational(q) => write!(f, "{}", q),
            ParamValue::LogOf(r) => write!(f, "ln({})", r),
        }
    }
}

/// Sum of `coeff · s^power · e^{rate·s}` keyed by `(rate, power)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExpPoly {
    terms: BTreeMap<(i64, u32), Q>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        Self::term(c, 0, 0)
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn term(c: Q, rate: i64, power: u32) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert((rate, power), c);
        }
        ExpPoly { terms: t }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, u32), &Q)> {
        self.terms.iter()
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, key: (i64, u32), c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = ExpPoly::zero();
        for (k, v) in &self.terms {
            out.add_term(*k, v * c);
        }
        out
    }

    /// d/ds.
    pub fn derivative(&self) -> Self {
        let mut out = ExpPoly::zero();
        for (&(r, p), c) in &self.terms {
            out.add_term((r, p), c * q(r));
            if p > 0 {
                out.add_term((r, p - 1), c * q(p as i64));
            }
        }
        out
    }

    /// Value at s = 0.
    pub fn at_zero(&self) -> Q {
        self.terms
            .iter()
            .filter(|((_, p), _)| *p == 0)
            .map(|(_, c)| c.clone())
            .sum()
    }

    /// Taylor coefficients of s⁰..s^order.
    pub fn taylor(&self, order: u32) -> Vec<Q> {
        let mut out = vec![Q::zero(); order as usize + 1];
        for (&(r, p), c) in &self.terms {
            // s^p e^{rs} = Σ_n r^n/n! s^{n+p}
            let mut coef = c.clone();
            for n in 0..=order {
                let deg = n + p;
                if deg > order {
                    break;
                }
                out[deg as usize] += &coef;
                coef = coef * q(r) / q(n as i64 + 1);
            }
        }
        out
    }

    /// `∫_0^s τ^p e^{cτ} dτ`.
    fn integral_basis(c: i64, p: u32) -> ExpPoly {
        if c == 0 {
            return ExpPoly::term(Q::one() / q(p as i64 + 1), 0, p + 1);
        }
        // e^{cs} Σ_j (−1)^j p!/(p−j)! s^{p−j}/c^{j+1} − (−1)^p p!/c^{p+1}
        let cq = q(c);
        let mut out = ExpPoly::zero();
        let mut fall = Q::one();
        let mut cpow = cq.clone();
        for j in 0..=p {
            let sign = if j % 2 == 0 { Q::one() } else { -Q::one() };
            out.add_term((c, p - j), sign * &fall / &cpow);
            fall *= q((p - j) as i64);
            cpow *= &cq;
        }
        let mut pfact = Q::one();
        for k in 1..=p {
            pfact *= q(k as i64);
        }
        let mut cp1 = Q::one();
        for _ in 0..=p {
            cp1 *= &cq;
        }
        let sign = if p % 2 == 0 { Q::one() } else { -Q::one() };
        out.add_term((0, 0), -(sign * pfact / cp1));
        out
    }

    /// `∫_0^s self(τ) dτ`.
    pub fn integral(&self) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (&(r, p), c) in &self.terms {
            out = &out + &ExpPoly::integral_basis(r, p).scale(c);
        }
        out
    }

    /// `self(s) · e^{rate·s}`.
    pub fn shift(&self, rate: i64) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (&(r, p), c) in &self.terms {
            out.add_term((r + rate, p), c.clone());
        }
        out
    }

    pub fn to_expr(&self, s: &Symbol) -> Expr {
        let sv = Expr::symbol(s);
        self.terms
            .iter()
            .map(|(&(r, p), c)| {
                let mut t = Expr::rational(c.clone());
                t = &t * &sv.powi(p as i32).expect("nonnegative power");
                if r != 0 {
                    t = &t * &Expr::exp(&Expr::int(r) * &sv);
                }
                t
            })
            .sum()
    }

    /// Value at a rational `s` when there is no exponential part.
    pub fn eval_polynomial(&self, s: &Q) -> Option<Q> {
        let mut acc = Q::zero();
        for (&(r, p), c) in &self.terms {
            if r != 0 {
                return None;
            }
            acc += c * num_traits::pow(s.clone(), p as usize);
        }
        Some(acc)
    }

    /// Exact value at a parameter, when it is rational there.
    pub fn eval_param(&self, v: &ParamValue) -> Option<Q> {
        match v {
            ParamValue::Rational(s) if s.is_zero() => Some(self.at_zero()),
            ParamValue::Rational(s) => self.eval_polynomial(s),
            ParamValue::LogOf(r) => {
                if !r.is_positive() {
                    return None;
                }
                let mut acc = Q::zero();
                for (&(rate, p), c) in &self.terms {
                    if p > 0 && !r.is_one() {
                        return None;
                    }
                    if p > 0 {
                        continue;
                    }
                    let f = if rate >= 0 {
                        num_traits::pow(r.clone(), rate as usize)
                    } else {
                        num_traits::pow(r.recip(), (-rate) as usize)
                    };
                    acc += c * f;
                }
                Some(acc)
            }
        }
    }

    pub fn eval_f64(&self, s: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|(&(r, p), c)| c.to_f64().unwrap_or(f64::NAN) * s.powi(p as i32) * (r as f64 * s).exp())
            .sum()
    }

    /// Whether the only exponentials present have the form `e^{rs}` with a
    /// polynomial factor of degree zero.
    pub fn is_pure_exponential(&self) -> bool {
        self.terms.keys().all(|(_, p)| *p == 0)
    }
}

impl Add for &ExpPoly {
    type Output = ExpPoly;
    fn add(self, o: &ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        for (k, v) in &o.terms {
            out.add_term(*k, v.clone());
        }
        out
    }
}

impl Sub for &ExpPoly {
    type Output = ExpPoly;
    fn sub(self, o: &ExpPoly) -> ExpPoly {
        self + &(-o)
    }
}

impl Neg for &ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        self.scale(&-Q::one())
    }
}

impl Mul for &ExpPoly {
    type Output = ExpPoly;
    fn mul(self, o: &ExpPoly) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (&(r1, p1), c1) in &self.terms {
            for (&(r2, p2), c2) in &o.terms {
                out.add_term((r1 + r2, p1 + p2), c1 * c2);
            }
        }
        out
    }
}

fn fmt_rate_power(f: &mut fmt::Formatter<'_>, r: i64, p: u32) -> fmt::Result {
    let mut parts = Vec::new();
    match p {
        0 => {}
        1 => parts.push("s".to_string()),
        _ => parts.push(format!("s^{}", p)),
    }
    match r {
        0 => {}
        1 => parts.push("e^s".to_string()),
        -1 => parts.push("e^(-s)".to_string()),
        _ => parts.push(format!("e^({}s)", r)),
    }
    write!(f, "{}", parts.join("*"))
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Highest rate and power first reads naturally: e^s, s, 1.
        let mut first = true;
        for (&(r, p), c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag: BigRational = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = r == 0 && p == 0;
            if unit {
                write!(f, "{}", mag)?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{}*", mag)?;
            }
            fmt_rate_power(f, r, p)?;
        }
        Ok(())
    }
}
