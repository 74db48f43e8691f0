use std::collections::BTreeMap;

use crate::field::VectorField;
use crate::symcore::Expr;

use super::chart::{parse_decls, ChartDecl};
use super::error::ParseError;
use super::lexer::{tokenize, Tok};
use super::parser::{expr_to_field, field_to_expr, parse_expr_at, Cursor, Scope};

/// Contents of a `.lsf` file: one chart followed by named fields and
/// expressions, in file order.
#[derive(Clone, Debug)]
pub struct LsfFile {
    pub chart: ChartDecl,
    pub fields: Vec<(String, VectorField)>,
    pub exprs: Vec<(String, Expr)>,
}

impl LsfFile {
    pub fn field(&self, name: &str) -> Option<&VectorField> {
        self.fields.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn expr(&self, name: &str) -> Option<&Expr> {
        self.exprs.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    /// Renders back to `.lsf` text.
    pub fn render(&self) -> String {
        let mut out = format!("chart {{ {} }}\n", self.chart.render());
        for (n, v) in &self.fields {
            out.push_str(&format!("field {} = {};\n", n, v));
        }
        for (n, e) in &self.exprs {
            out.push_str(&format!("expr {} = {};\n", n, e));
        }
        out
    }
}

/// Parses a `.lsf` document. The chart block must come first; field and
/// expression bodies may refer to earlier definitions of the same sort.
pub fn parse_lsf(text: &str) -> Result<LsfFile, ParseError> {
    let mut cur = Cursor::new(tokenize(text)?);
    match cur.peek() {
        Tok::Ident(k) if k == "chart" => {
            cur.bump();
        }
        _ => return Err(cur.unexpected("`chart`")),
    }
    cur.expect(Tok::LBrace)?;
    let chart = parse_decls(&mut cur, true)?;
    cur.expect(Tok::RBrace)?;

    let mut fields = Vec::new();
    let mut exprs = Vec::new();
    let mut field_refs: BTreeMap<String, Expr> = BTreeMap::new();
    let mut expr_refs: BTreeMap<String, Expr> = BTreeMap::new();
    loop {
        let kw = match cur.peek().clone() {
            Tok::Eof => break,
            Tok::Ident(k) if k == "field" || k == "expr" => {
                cur.bump();
                k
            }
            _ => return Err(cur.unexpected("`field`, `expr` or end of input")),
        };
        let name_pos = cur.pos();
        let name = cur.ident()?;
        if chart.kind_of(&name).is_some()
            || field_refs.contains_key(&name)
            || expr_refs.contains_key(&name)
            || name == "exp"
            || name.starts_with("d_")
        {
            return Err(ParseError::DuplicateSymbol {
                pos: name_pos,
                name,
            });
        }
        cur.expect(Tok::Eq)?;
        let body_pos = cur.pos();
        if kw == "field" {
            let scope = Scope {
                chart: Some(&chart),
                refs: &field_refs,
                field: true,
            };
            let e = parse_expr_at(&mut cur, &scope)?;
            let v = expr_to_field(&e, body_pos)?;
            field_refs.insert(name.clone(), field_to_expr(&v));
            fields.push((name, v));
        } else {
            let scope = Scope {
                chart: Some(&chart),
                refs: &expr_refs,
                field: false,
            };
            let e = parse_expr_at(&mut cur, &scope)?;
            expr_refs.insert(name.clone(), e.clone());
            exprs.push((name, e));
        }
        cur.expect(Tok::Semi)?;
    }
    Ok(LsfFile {
        chart,
        fields,
        exprs,
    })
}
