//! Small exact linear algebra over ℚ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;
pub type Matrix = Vec<Vec<Q>>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let inner = b.len();
    let mut out = vec![vec![Q::zero(); m]; n];
    for i in 0..n {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

pub fn mat_add_scaled_identity(a: &Matrix, c: &Q) -> Matrix {
    let mut out = a.clone();
    for (i, row) in out.iter_mut().enumerate() {
        row[i] += c;
    }
    out
}

pub fn mat_scale(a: &Matrix, c: &Q) -> Matrix {
    a.iter()
        .map(|r| r.iter().map(|x| x * c).collect())
        .collect()
}

pub fn trace(a: &Matrix) -> Q {
    (0..a.len()).map(|i| a[i][i].clone()).sum()
}

/// Solves `rows · x = rhs` exactly. Returns `None` when inconsistent;
/// free variables are set to zero. Also returns the rank.
pub fn solve(rows: &[Vec<Q>], rhs: &[Q]) -> (Option<Vec<Q>>, usize) {
    let n = rows.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Q>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for v in m[row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let d = &f * &m[row][c];
                    m[r][c] -= d;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    let rank = pivots.len();
    if m[rank..].iter().any(|r| !r[n].is_zero()) {
        return (None, rank);
    }
    let mut x = vec![Q::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][n].clone();
    }
    (Some(x), rank)
}

/// Characteristic polynomial `det(λI − A)` by Faddeev–LeVerrier; the
/// returned coefficients are in increasing degree, leading one.
pub fn char_poly(a: &Matrix) -> Vec<Q> {
    let n = a.len();
    let mut coeffs = vec![Q::zero(); n + 1];
    coeffs[n] = Q::one();
    let mut m = vec![vec![Q::zero(); n]; n];
    for k in 1..=n {
        // M_k = A·M_{k−1} + c_{n−k+1}·I
        m = mat_add_scaled_identity(&mat_mul(a, &m), &coeffs[n - k + 1]);
        let am = mat_mul(a, &m);
        coeffs[n - k] = -trace(&am) / q(k as i64);
    }
    coeffs
}

fn eval_poly(p: &[Q], x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

fn deflate(p: &[Q], r: &Q) -> Vec<Q> {
    // Synthetic division by (λ − r).
    let n = p.len() - 1;
    let mut out = vec![Q::zero(); n];
    let mut carry = Q::zero();
    for i in (0..n).rev() {
        carry = &p[i + 1] + &carry * r;
        out[i] = carry.clone();
    }
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            out.push(d.clone());
            let e = &n / &d;
            if e != d {
                out.push(e);
            }
        }
        d += 1;
    }
    out
}

/// All roots with multiplicity when every root is an integer.
pub fn integer_roots(p: &[Q]) -> Option<Vec<i64>> {
    let mut p = p.to_vec();
    let mut roots = Vec::new();
    while p.len() > 1 {
        if p[0].is_zero() {
            roots.push(0);
            p.remove(0);
            continue;
        }
        // Clear denominators to get an integer polynomial.
        let l = p
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let c0 = (&p[0] * Q::from_integer(l)).to_integer();
        let mut found = None;
        for d in divisors(&c0) {
            for cand in [d.clone(), -d] {
                let x = Q::from_integer(cand.clone());
                if eval_poly(&p, &x).is_zero() {
                    found = Some(cand);
                    break;
                }
            }
            if found.is_some() {
                break;
            }
        }
        let r = found?;
        let rq = Q::from_integer(r.clone());
        p = deflate(&p, &rq);
        roots.push(i64::try_from(r).ok()?);
    }
    roots.sort_unstable();
    Some(roots)
}
