use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::liealg::{ExpPoly, ParamValue, Q};

use super::{is_unit, AdjointGroup, CoeffVector, Move};

/// Branch of the case analysis a vector falls into, with the list items
/// that branch claims to produce. `claimed` is empty for vectors the case
/// analysis does not cover.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Case {
    pub label: &'static str,
    pub claimed: &'static [usize],
}

impl Case {
    pub fn covered(&self) -> bool {
        !self.claimed.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParameterResidue {
    /// 1-based coefficient index.
    pub index: usize,
    #[serde(serialize_with = "super::ser_q")]
    pub value: Q,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceOutcome {
    Representative { item: usize, name: String },
    Family { descriptor: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReductionTrace {
    pub input: CoeffVector,
    pub moves: Vec<Move>,
    pub output: CoeffVector,
    pub case: Case,
    pub outcome: TraceOutcome,
    pub residues: Vec<ParameterResidue>,
    pub notes: Vec<String>,
}

struct Reducer<'a> {
    g: &'a AdjointGroup,
    a: CoeffVector,
    moves: Vec<Move>,
    notes: Vec<String>,
}

const Y1: usize = 0;
const Y3: usize = 2;
const Y4: usize = 3;
const Y6: usize = 5;

fn sign(q: &Q) -> Q {
    if q.is_negative() {
        -Q::one()
    } else {
        Q::one()
    }
}

impl<'a> Reducer<'a> {
    fn a(&self, k: usize) -> &Q {
        self.a.get(k)
    }

    fn push(&mut self, mv: Move) {
        let trivial = match &mv {
            Move::Scale { factor } => factor.is_one(),
            Move::Adj { s: ParamValue::Rational(s), .. } => s.is_zero(),
            Move::Adj { s: ParamValue::LogOf(r), .. } => r.is_one(),
            Move::Reflect { .. } => false,
        };
        if trivial {
            return;
        }
        self.a = self.g.apply(&mv, &self.a).expect("solved moves are rational");
        self.moves.push(mv);
    }

    fn scale(&mut self, l: Q) {
        self.push(Move::Scale { factor: l });
    }

    /// `(M_g(s)a)_k` as a function of `s`.
    fn component(&self, g: usize, k: usize) -> ExpPoly {
        self.g.matrices[g].entries[k]
            .iter()
            .zip(&self.a.0)
            .fold(ExpPoly::zero(), |acc, (e, c)| &acc + &e.scale(c))
    }

    /// A parameter with `(M_g(s)a)_k = target`, when one is rational.
    fn solve_for(&self, g: usize, k: usize, target: &Q) -> Option<ParamValue> {
        let f = &self.component(g, k) - &ExpPoly::constant(target.clone());
        let terms: Vec<_> = f.terms().map(|(k, c)| (*k, c.clone())).collect();
        if terms.iter().all(|((r, _), _)| *r == 0) {
            let c0 = terms.iter().find(|(k, _)| *k == (0, 0)).map(|t| t.1.clone()).unwrap_or_default();
            let c1 = terms.iter().find(|(k, _)| *k == (0, 1)).map(|t| t.1.clone())?;
            if terms.iter().any(|((_, p), _)| *p > 1) {
                return None;
            }
            return Some(ParamValue::Rational(-c0 / c1));
        }
        if terms.iter().any(|((_, p), _)| *p > 0) {
            return None;
        }
        let c0 = terms.iter().find(|(k, _)| k.0 == 0).map(|t| t.1.clone()).unwrap_or_default();
        let exps: Vec<_> = terms.iter().filter(|(k, _)| k.0 != 0).collect();
        if exps.len() != 1 {
            return None;
        }
        let ((rate, _), c1) = exps[0];
        let w = -c0 / c1;
        if !w.is_positive() {
            return None;
        }
        match rate {
            1 => Some(ParamValue::LogOf(w)),
            -1 => Some(ParamValue::LogOf(w.recip())),
            _ => None,
        }
    }

    /// Clears `a_k`, first with the named generator. If that cannot work,
    /// uses the first generator that clears it and leaves the rest alone.
    fn kill(&mut self, k: usize, named: Option<usize>) {
        if self.a(k).is_zero() {
            return;
        }
        if let Some(g) = named {
            if let Some(s) = self.solve_for(g, k, &Q::zero()) {
                self.push(Move::Adj { generator: g, s });
                return;
            }
            self.notes.push(format!(
                "Ad(exp(s*{})) cannot clear a{}; another generator is used",
                self.g.names()[g],
                k + 1
            ));
        }
        for g in 0..self.g.dim() {
            let Some(s) = self.solve_for(g, k, &Q::zero()) else {
                continue;
            };
            let next = self.g.adjoint(g, &s, &self.a).expect("rational");
            let clean = (0..self.g.dim()).all(|j| j == k || next.get(j) == self.a(j));
            if clean {
                self.push(Move::Adj { generator: g, s });
                return;
            }
        }
        self.notes.push(format!("no single move clears a{}", k + 1));
    }

    /// Brings `|a_k|` to one along the flow of `g`, if possible.
    fn unit_along(&mut self, g: usize, k: usize) -> bool {
        if self.a(k).is_zero() {
            return false;
        }
        let target = sign(self.a(k));
        match self.solve_for(g, k, &target) {
            Some(s) => {
                self.push(Move::Adj { generator: g, s });
                true
            }
            None => false,
        }
    }
}

fn residues_of(a: &CoeffVector) -> Vec<ParameterResidue> {
    a.0.iter()
        .enumerate()
        .filter(|(_, q)| !q.is_zero() && !is_unit(q))
        .map(|(i, q)| ParameterResidue {
            index: i + 1,
            value: q.clone(),
        })
        .collect()
}

/// Runs the case analysis on `a`. `reps` holds the listed representatives
/// in item order; `reflections` allows the coordinate reflections as
/// extra moves. The algebra must be the six-dimensional one with the
/// basis order of the built-in catalog.
pub fn reduce(
    g: &AdjointGroup,
    reps: &[(String, CoeffVector)],
    a: &CoeffVector,
    reflections: bool,
) -> ReductionTrace {
    let mut r = Reducer {
        g,
        a: a.clone(),
        moves: Vec::new(),
        notes: Vec::new(),
    };
    let nz = |r: &Reducer, k: usize| !r.a(k).is_zero();
    let case = if a.is_zero() {
        Case { label: "zero", claimed: &[] }
    } else if nz(&r, 0) {
        r.scale(r.a(0).recip());
        r.kill(Y3, Some(Y3));
        r.kill(Y4, Some(Y4));
        r.kill(Y6, Some(Y6));
        if nz(&r, Y3) {
            r.notes.push(format!(
                "clearing a4 with Y4 reintroduced a3 = {}; cleared again",
                r.a(Y3)
            ));
            r.kill(Y3, Some(Y3));
        }
        match (nz(&r, 1), nz(&r, 4)) {
            (true, true) => Case { label: "1a", claimed: &[19, 28, 29, 30] },
            (false, true) => Case { label: "1b", claimed: &[4, 31] },
            (true, false) => Case { label: "1c", claimed: &[5, 13] },
            (false, false) => Case { label: "1d", claimed: &[1] },
        }
    } else if nz(&r, Y4) {
        r.scale(-r.a(Y4).recip());
        r.kill(Y3, Some(Y3));
        if nz(&r, 1) {
            r.scale(r.a(1).recip());
            if !is_unit(r.a(Y4)) {
                r.notes.push("scaling a2 to 1 moved a4; the Y1 flow restores |a4| = 1".into());
                r.unit_along(Y1, Y4);
            }
            if r.a(Y4).is_positive() {
                r.notes.push("a4 ends at +1: its sign relative to a2 is not changed by any flow".into());
            }
            match (nz(&r, 4), nz(&r, 5)) {
                (false, false) => Case { label: "2a-1", claimed: &[6] },
                (false, true) => Case { label: "2a-2", claimed: &[16, 18] },
                (true, true) => Case { label: "2a-3", claimed: &[15, 17, 27, 32] },
                (true, false) => Case { label: "2a (a2≠0, a5≠0, a6=0)", claimed: &[] },
            }
        } else {
            if nz(&r, 4) && !is_unit(r.a(4)) {
                r.scale(r.a(4).abs().recip());
                r.unit_along(Y1, Y4);
            }
            match (nz(&r, 4), nz(&r, 5)) {
                (false, false) => Case { label: "2a-4", claimed: &[3] },
                (false, true) => Case { label: "2a-5", claimed: &[7, 8] },
                (true, true) => Case { label: "2a-6", claimed: &[14, 24, 25, 26] },
                (true, false) => Case { label: "2a (a2=0, a5≠0, a6=0)", claimed: &[] },
            }
        }
    } else if nz(&r, 1) {
        r.kill(Y3, None);
        r.scale(r.a(1).recip());
        r.unit_along(Y1, Y6);
        match (nz(&r, 4), nz(&r, 5)) {
            (false, false) => Case { label: "2b-1", claimed: &[2] },
            (true, true) => Case { label: "2b-2", claimed: &[20, 21, 22, 23] },
            (true, false) => Case { label: "2b-3", claimed: &[9, 10] },
            (false, true) => Case { label: "2b-4", claimed: &[11, 12] },
        }
    } else {
        // Outside the case analysis: normalize anyway.
        if nz(&r, 4) {
            r.scale(r.a(4).recip());
            let k = if nz(&r, Y3) { Y3 } else { Y6 };
            r.unit_along(Y1, k);
        } else {
            let k = if nz(&r, Y3) { Y3 } else { Y6 };
            r.scale(r.a(k).recip());
        }
        Case { label: "2b (a2=0)", claimed: &[] }
    };

    let find = |v: &CoeffVector| {
        reps.iter()
            .position(|(_, rep)| rep == v)
            .filter(|i| case.claimed.contains(&(i + 1)))
    };
    let mut hit = find(&r.a);
    if hit.is_none() && reflections {
        'words: for w in g.reflection_words().iter().skip(1) {
            for sgn in [Q::one(), -Q::one()] {
                let v = g.apply_word(&w, &r.a).scaled(&sgn);
                if find(&v).is_some() {
                    for c in w {
                        r.push(Move::Reflect { coordinate: c.clone() });
                    }
                    r.scale(sgn);
                    hit = find(&r.a);
                    break 'words;
                }
            }
        }
    }
    if !case.covered() {
        r.notes.push(format!("case {} is not treated by the case analysis", case.label));
    }
    let outcome = match hit {
        Some(i) => TraceOutcome::Representative {
            item: i + 1,
            name: reps[i].0.clone(),
        },
        None => TraceOutcome::Family {
            descriptor: r.a.render(g.names()),
        },
    };
    ReductionTrace {
        input: a.clone(),
        residues: residues_of(&r.a),
        output: r.a,
        moves: r.moves,
        case,
        outcome,
        notes: r.notes,
    }
}

impl ReductionTrace {
    pub fn replays(&self, g: &AdjointGroup) -> bool {
        g.replay(&self.input, &self.moves).ok().as_ref() == Some(&self.output)
    }
}
