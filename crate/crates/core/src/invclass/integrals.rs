use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::field::VectorField;
use crate::liealg::Q;
use crate::symcore::{collect_by, Atom, Expr, Symbol};

use super::{InvError, PROJECTED};

/// Integrals of a projected field and the strategy that produced them.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FirstIntegrals {
    #[serde(serialize_with = "ser_exprs")]
    pub integrals: Vec<Expr>,
    pub strategy: &'static str,
    /// Whether the set has the maximal size (one less than the number of
    /// coordinates, for a nonzero field).
    pub complete: bool,
}

fn ser_exprs<S: serde::Serializer>(v: &[Expr], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|e| e.to_string()))
}

struct Affine {
    coord: Symbol,
    lambda: Expr,
    kappa: Expr,
}

/// Splits `c = λ·d + κ` with λ, κ free of `d`.
fn affine_in(c: &Expr, d: &Symbol) -> Option<(Expr, Expr)> {
    let lambda = c.diff(d);
    if lambda.contains_symbol(d) {
        return None;
    }
    let kappa = c - &(&lambda * &Expr::symbol(d));
    Some((lambda, kappa))
}

fn only_in(e: &Expr, allowed: &BTreeSet<Symbol>) -> bool {
    e.func_atoms().is_empty() && e.symbols().iter().all(|s| allowed.contains(s))
}

/// `∫ c dp` for `c` polynomial in `p` over a `p`-free denominator.
fn integrate_in(c: &Expr, p: &Symbol) -> Option<Expr> {
    if c.denominator().terms().any(|(m, _)| m.degree_of(&Atom::Sym(p.clone())) > 0) {
        return None;
    }
    let is_p = |a: &Atom| a.as_symbol() == Some(p);
    let num = Expr::from_parts(c.numerator().clone(), crate::symcore::Poly::one()).ok()?;
    let parts = collect_by(&num, &is_p).ok()?;
    let den = Expr::from_parts(c.denominator().clone(), crate::symcore::Poly::one()).ok()?;
    let mut acc = Expr::zero();
    for (k, coeff) in parts {
        let n = k.degree();
        let term = Expr::symbol(p).powi(n as i32 + 1).ok()?;
        acc = &acc + &(&coeff * &term).scale(&Q::new(BigInt::one(), BigInt::from(n + 1)));
    }
    acc.try_div(&den).ok()
}

fn ratio_power(d: &Expr, p: &Expr, ld: &Q, lp: &Q) -> Option<Expr> {
    // d / p^{λd/λp}, cleared to integer exponents.
    let r = ld / lp;
    let (n, m) = (r.numer().to_i32()?, r.denom().to_i32()?);
    d.powi(m).ok()?.try_div(&p.powi(n).ok()?).ok()
}

fn shifted(a: &Affine) -> Option<Expr> {
    if a.kappa.is_zero() {
        return Some(Expr::symbol(&a.coord));
    }
    Some(&Expr::symbol(&a.coord) + &a.kappa.try_div(&a.lambda).ok()?)
}

/// Scaling ratios over the coordinates with constant `λ ≠ 0`.
fn scaling(fits: &[&Affine]) -> Vec<Expr> {
    let Some(pivot) = fits.iter().find(|a| a.kappa.is_zero()).or(fits.first()) else {
        return Vec::new();
    };
    let Some(lp) = pivot.lambda.as_rational() else {
        return Vec::new();
    };
    let Some(pe) = shifted(pivot) else {
        return Vec::new();
    };
    fits.iter()
        .filter(|a| a.coord != pivot.coord)
        .filter_map(|a| ratio_power(&shifted(a)?, &pe, &a.lambda.as_rational()?, &lp))
        .collect()
}

/// Integrals of `z` on the `(x, y, u, f)` chart, by the first strategy that
/// covers every moving coordinate: absent coordinates, scaling ratios,
/// translation pairs, then a clock coordinate with affine companions.
pub fn first_integrals(z: &VectorField) -> Result<FirstIntegrals, InvError> {
    let coords: Vec<Symbol> = PROJECTED.iter().map(|c| Symbol::new(c)).collect();
    if let Some(c) = z.coordinates().find(|c| !coords.contains(c)) {
        return Err(InvError::OffChart(c.name().to_string()));
    }
    let absent: BTreeSet<Symbol> = coords.iter().filter(|c| z.coeff_of(c).is_zero()).cloned().collect();
    let mut out: Vec<Expr> = coords
        .iter()
        .filter(|c| absent.contains(c))
        .map(Expr::symbol)
        .collect();
    let moving: Vec<Symbol> = coords.iter().filter(|c| !absent.contains(c)).cloned().collect();
    let want = coords.len() - 1;
    if moving.is_empty() {
        return Err(InvError::StrategyExhausted("zero field".into()));
    }
    if moving.len() == 1 {
        return Ok(FirstIntegrals { integrals: out, strategy: "absent", complete: true });
    }
    let affine: Vec<Option<Affine>> = moving
        .iter()
        .map(|d| {
            affine_in(&z.coeff_of(d), d).map(|(lambda, kappa)| Affine { coord: d.clone(), lambda, kappa })
        })
        .collect();
    let fits_scaling = |a: &Affine| {
        a.lambda.as_rational().is_some_and(|l| !l.is_zero()) && only_in(&a.kappa, &absent)
    };
    let all_affine: Vec<&Affine> = affine.iter().flatten().collect();
    let everything = all_affine.len() == moving.len();

    if everything && all_affine.iter().all(|a| fits_scaling(a)) {
        out.extend(scaling(&all_affine));
        return finish(z, out, "scaling", want);
    }
    if everything
        && all_affine
            .iter()
            .all(|a| a.lambda.is_zero() && a.kappa.as_rational().is_some())
    {
        let p = all_affine[0];
        let kp = p.kappa.as_rational().expect("constant");
        for a in &all_affine[1..] {
            let k = a.kappa.as_rational().expect("constant");
            out.push(&Expr::symbol(&a.coord) - &Expr::symbol(&p.coord).scale(&(k / &kp)));
        }
        return finish(z, out, "translation", want);
    }

    // A clock coordinate: Z(p) = k with k built from absent coordinates.
    let clock = moving.iter().find(|p| {
        let c = z.coeff_of(p);
        !c.is_zero() && only_in(&c, &absent)
    });
    if let Some(p) = clock {
        let k = z.coeff_of(p);
        let tau = Expr::symbol(p).try_div(&k).expect("nonzero");
        let mut with_p = absent.clone();
        with_p.insert(p.clone());
        let mut all = true;
        for d in moving.iter().filter(|d| *d != p) {
            let c = z.coeff_of(d);
            let got = if !c.contains_symbol(d) && only_in(&c, &with_p) {
                integrate_in(&c, p)
                    .and_then(|i| i.try_div(&k).ok())
                    .map(|i| &Expr::symbol(d) - &i)
            } else {
                affine_in(&c, d).and_then(|(l, kap)| {
                    if !only_in(&l, &absent) || !only_in(&kap, &absent) || l.is_zero() {
                        return None;
                    }
                    let a = Affine { coord: d.clone(), lambda: l.clone(), kappa: kap };
                    Some(&shifted(&a)? * &Expr::exp(-&(&l * &tau)))
                })
            };
            match got {
                Some(i) => out.push(i),
                None => all = false,
            }
        }
        if all {
            return finish(z, out, "clock", want);
        }
    }

    // Partial: scaling ratios over the coordinates that allow them.
    let fits: Vec<&Affine> = all_affine.into_iter().filter(|a| fits_scaling(a)).collect();
    if fits.len() >= 2 {
        out.extend(scaling(&fits));
    }
    if out.is_empty() {
        return Err(InvError::StrategyExhausted(z.to_string()));
    }
    finish(z, out, "partial", want)
}

fn finish(z: &VectorField, integrals: Vec<Expr>, strategy: &'static str, want: usize) -> Result<FirstIntegrals, InvError> {
    let integrals: Vec<Expr> = integrals.into_iter().filter(|i| z.apply(i).is_zero()).collect();
    let complete = integrals.len() == want;
    Ok(FirstIntegrals { integrals, strategy, complete })
}

/// Rank of the gradient matrix of `integrals` at `points` random points of
/// the positive orthant; points where a gradient entry is undefined are
/// redrawn.
pub fn functionally_independent(integrals: &[Expr], points: usize, seed: u64) -> bool {
    let coords: Vec<Symbol> = PROJECTED.iter().map(|c| Symbol::new(c)).collect();
    let grads: Vec<Vec<Expr>> = integrals
        .iter()
        .map(|i| coords.iter().map(|c| i.diff(c)).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut good = 0;
    for _ in 0..points * 20 {
        let vals: Vec<(Symbol, f64)> = coords
            .iter()
            .map(|c| {
                let n: i64 = rng.random_range(5..=40);
                let d: i64 = rng.random_range(7..=16);
                (c.clone(), n as f64 / d as f64)
            })
            .collect();
        let env = |a: &Atom| a.as_symbol().and_then(|s| vals.iter().find(|(c, _)| c == s).map(|v| v.1));
        let m: Option<Vec<Vec<f64>>> = grads
            .iter()
            .map(|row| row.iter().map(|e| e.eval_f64(&env).ok().filter(|v| v.is_finite() && v.abs() < 1e12)).collect())
            .collect();
        let Some(m) = m.filter(|m| m.iter().all(|r| r.iter().any(|v| *v != 0.0))) else {
            continue;
        };
        if rank(m) < integrals.len() {
            return false;
        }
        good += 1;
        if good == points {
            return true;
        }
    }
    false
}

fn rank(mut m: Vec<Vec<f64>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    for row in m.iter_mut() {
        let s = row.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if s > 0.0 {
            row.iter_mut().for_each(|v| *v /= s);
        }
    }
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs())) else {
            break;
        };
        if m[p][c].abs() < 1e-9 {
            continue;
        }
        m.swap(r, p);
        for i in 0..rows {
            if i != r {
                let f = m[i][c] / m[r][c];
                for j in c..cols {
                    m[i][j] -= f * m[r][j];
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}
