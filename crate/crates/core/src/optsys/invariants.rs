use num_traits::Zero;
use serde::Serialize;

use crate::liealg::Q;
use crate::symcore::{Expr, Substitution, Symbol};

use super::{AdjointGroup, CoeffVector};

/// A ratio `a_num / a_den` constant along every adjoint flow. `holds_on`
/// names the stratum when the ratio is invariant only there.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitInvariant {
    pub expr: String,
    pub num: Option<usize>,
    pub den: Option<usize>,
    pub holds_on: Option<String>,
}

impl OrbitInvariant {
    pub fn eval(&self, a: &CoeffVector) -> Option<Q> {
        match (self.num, self.den) {
            (Some(n), Some(d)) if !a.get(d - 1).is_zero() => Some(a.get(n - 1) / a.get(d - 1)),
            (None, None) => Some(Q::from_integer(1.into())),
            _ => None,
        }
    }

    pub fn is_ratio(&self, num: usize, den: usize) -> bool {
        self.num == Some(num) && self.den == Some(den) && self.holds_on.is_none()
    }
}

fn coeff_symbol(i: usize) -> Symbol {
    Symbol::new(&format!("a{}", i + 1))
}

/// Components of `M_g(s)·a` with symbolic `a` and `s`.
fn flowed(g: &AdjointGroup, gen: usize, s: &Symbol) -> Vec<Expr> {
    let m = g.matrices[gen].to_exprs(s);
    m.iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(j, e)| e * &Expr::symbol(&coeff_symbol(j)))
                .sum()
        })
        .collect()
}

fn ratio_constant(flows: &[Vec<Expr>], num: usize, den: usize, s: &Symbol, on: &Substitution) -> bool {
    flows.iter().all(|f| {
        let n = f[num].substitute(on).expect("acyclic");
        let d = f[den].substitute(on).expect("acyclic");
        if d.is_zero() {
            return false;
        }
        // d/ds (n/d) = 0  ⟺  n'd − nd' = 0
        (&(&n.diff(s) * &d) - &(&n * &d.diff(s))).is_zero()
    })
}

/// Ratios of coefficients that every adjoint flow leaves fixed, checked
/// by differentiating in `s` with everything symbolic. Scaling fixes
/// every ratio. Also reports ratios invariant only on the `a1 = 0`
/// stratum.
pub fn orbit_invariants(g: &AdjointGroup) -> Vec<OrbitInvariant> {
    let s = Symbol::new("s");
    let n = g.dim();
    let flows: Vec<Vec<Expr>> = (0..n).map(|i| flowed(g, i, &s)).collect();
    let mut out = vec![OrbitInvariant {
        expr: "1".into(),
        num: None,
        den: None,
        holds_on: None,
    }];
    let everywhere = Substitution::new();
    let first_zero = Substitution::new().bind_symbol(coeff_symbol(0), Expr::zero());
    for den in 0..n {
        for num in (den + 1)..n {
            let expr = format!("a{}/a{}", num + 1, den + 1);
            let holds_on = if ratio_constant(&flows, num, den, &s, &everywhere) {
                None
            } else if den != 0 && ratio_constant(&flows, num, den, &s, &first_zero) {
                Some("a1 = 0".to_string())
            } else {
                continue;
            };
            out.push(OrbitInvariant {
                expr,
                num: Some(num + 1),
                den: Some(den + 1),
                holds_on,
            });
        }
    }
    out
}
