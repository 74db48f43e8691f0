use serde::Serialize;

use crate::determining::{is_symmetry, PdeInstance, Verdict};
use crate::field::VectorField;
use crate::fieldlang::LsfFile;
use crate::symcore::{Expr, Symbol};

use super::{
    build_row, first_integrals, phi_of, project, weight_of, ClassificationRow, FirstIntegrals,
    InvError,
};

/// One printed row: projected operator, invariant, weight of the equation
/// and additional operator.
#[derive(Clone, Debug)]
pub struct Table3Row {
    pub n: usize,
    pub z: VectorField,
    pub i1: Expr,
    pub weight: Expr,
    pub xadd: VectorField,
}

/// Rows `Z<n>, I<n>, W<n>, X<n>` for n = 1, 2, … until one is missing.
pub fn load_table3(file: &LsfFile) -> Vec<Table3Row> {
    let mut out = Vec::new();
    for n in 1.. {
        let (Some(z), Some(i1), Some(w), Some(x)) = (
            file.field(&format!("Z{}", n)),
            file.expr(&format!("I{}", n)),
            file.expr(&format!("W{}", n)),
            file.field(&format!("X{}", n)),
        ) else {
            break;
        };
        out.push(Table3Row {
            n,
            z: z.clone(),
            i1: i1.clone(),
            weight: w.clone(),
            xadd: x.clone(),
        });
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Recomputed {
    pub integrals: FirstIntegrals,
    pub row: Option<ClassificationRow>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RowReport {
    pub n: usize,
    pub printed: ClassificationRow,
    /// `u_t = weight·Φ(u_xx + u_yy)` read literally.
    pub literal: Verdict,
    /// Invariants recomputed from the projected operator.
    pub recomputed: Option<Recomputed>,
    /// List items whose projection is this row's operator.
    pub y_items: Vec<usize>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct YMatch {
    pub y_item: usize,
    pub z_rows: Vec<usize>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub rows: usize,
    pub all_pass: Vec<usize>,
    pub i1_fail: Vec<usize>,
    pub i2_fail: Vec<usize>,
    pub symmetry_fail: Vec<usize>,
    pub recomputed_all_pass: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table3Audit {
    pub rows: Vec<RowReport>,
    pub y_to_z: Vec<YMatch>,
    pub summary: Summary,
}

fn recompute(row: &Table3Row) -> Option<Recomputed> {
    let ints = match first_integrals(&row.z) {
        Ok(i) => i,
        Err(e) => {
            return Some(Recomputed {
                integrals: FirstIntegrals { integrals: vec![], strategy: "none", complete: false },
                row: None,
                note: Some(e.to_string()),
            })
        }
    };
    let u = Symbol::new("u");
    let f = Symbol::new("f");
    let i1 = ints.integrals.iter().find(|i| i.contains_symbol(&u) && !i.contains_symbol(&f));
    let i2 = ints.integrals.iter().find(|i| weight_of(i).is_ok());
    let (row_out, note) = match (i1, i2) {
        (Some(i1), Some(i2)) => match build_row(&format!("{}*", row.n), &row.z, i1, i2, &row.xadd) {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(e.to_string())),
        },
        _ => (None, Some("no u-level and f-level invariant pair".into())),
    };
    Some(Recomputed { integrals: ints, row: row_out, note })
}

/// Audits every row: the printed invariant and `f/weight` against the
/// projected operator, the additional operator against the solved
/// `f`, the literal reading of the equation, and recomputed invariants.
/// `items` are the list representatives as fields, matched to rows by
/// the content of their projections.
pub fn audit_table3(rows: &[Table3Row], items: &[(String, VectorField)]) -> Result<Table3Audit, InvError> {
    let projections: Vec<Option<VectorField>> = items.iter().map(|(_, y)| project(y).ok()).collect();
    let f = Expr::sym("f");
    let mut reports = Vec::new();
    let mut summary = Summary { rows: rows.len(), ..Default::default() };
    for row in rows {
        let i2 = f.try_div(&row.weight).map_err(|e| InvError::FNotSolvable(e.to_string()))?;
        let printed = build_row(&row.n.to_string(), &row.z, &row.i1, &i2, &row.xadd)?;
        let lap = PdeInstance::with_f(Expr::one()).laplacian();
        let literal = is_symmetry(&row.xadd, &PdeInstance::with_rhs(&row.weight * &phi_of(&lap)))?;
        let y_items: Vec<usize> = projections
            .iter()
            .enumerate()
            .filter(|(_, p)| p.as_ref() == Some(&row.z))
            .map(|(k, _)| k + 1)
            .collect();
        let mut notes = Vec::new();
        if !y_items.is_empty() && !y_items.contains(&row.n) {
            notes.push(format!(
                "operator is the projection of item(s) {:?}, not item {}",
                y_items, row.n
            ));
        }
        if y_items.is_empty() {
            notes.push("operator is not the projection of any list item".into());
        }
        let recomputed = recompute(row);
        let [a, b, c] = printed.verdicts();
        if a && b && c {
            summary.all_pass.push(row.n);
        }
        if !a {
            summary.i1_fail.push(row.n);
        }
        if !b {
            summary.i2_fail.push(row.n);
        }
        if !c {
            summary.symmetry_fail.push(row.n);
        }
        if recomputed.as_ref().and_then(|r| r.row.as_ref()).is_some_and(|r| r.all_pass()) {
            summary.recomputed_all_pass.push(row.n);
        }
        reports.push(RowReport {
            n: row.n,
            printed,
            literal,
            recomputed,
            y_items,
            notes,
        });
    }
    let y_to_z = projections
        .iter()
        .enumerate()
        .map(|(k, p)| YMatch {
            y_item: k + 1,
            z_rows: rows
                .iter()
                .filter(|r| p.as_ref() == Some(&r.z))
                .map(|r| r.n)
                .collect(),
        })
        .collect();
    Ok(Table3Audit { rows: reports, y_to_z, summary })
}
