use std::collections::BTreeMap;

use crate::symcore::{Symbol, SymbolKind};

use super::error::{ParseError, Pos};
use super::lexer::{tokenize, Tok};
use super::parser::Cursor;

/// Declared unknown function: name plus formal argument names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionDecl {
    pub name: String,
    pub params: Vec<Symbol>,
}

impl FunctionDecl {
    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

/// Validated symbol table of a chart. Jet coordinates up to order two are
/// derived from the independent and dependent coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartDecl {
    pub independent: Vec<Symbol>,
    pub dependent: Vec<Symbol>,
    pub jets: Vec<Symbol>,
    pub classification: Vec<Symbol>,
    pub parameters: Vec<Symbol>,
    pub functions: BTreeMap<String, FunctionDecl>,
}

/// Jet name for dependent `u` and a multi-index of independent positions,
/// e.g. `u_xt`. Letters follow the order of the independent coordinates.
pub fn jet_name(dep: &Symbol, indep: &[Symbol], index: &[usize]) -> String {
    let mut idx = index.to_vec();
    idx.sort_unstable();
    let letters: String = idx.iter().map(|&i| indep[i].name()).collect();
    format!("{}_{}", dep, letters)
}

impl ChartDecl {
    fn from_decls(
        independent: Vec<Symbol>,
        dependent: Vec<Symbol>,
        classification: Vec<Symbol>,
        parameters: Vec<Symbol>,
        functions: BTreeMap<String, FunctionDecl>,
    ) -> ChartDecl {
        let mut jets = Vec::new();
        for u in &dependent {
            let n = independent.len();
            for i in 0..n {
                jets.push(Symbol::new(&jet_name(u, &independent, &[i])));
            }
            for i in 0..n {
                for j in i..n {
                    jets.push(Symbol::new(&jet_name(u, &independent, &[i, j])));
                }
            }
        }
        ChartDecl {
            independent,
            dependent,
            jets,
            classification,
            parameters,
            functions,
        }
    }

    /// Chart used throughout: `vars x y t; dep u; class f; param s c1 c2 c3 c4;
    /// fun F(x,y,u,u_x,u_y); fun Phi(l);`.
    pub fn standard() -> ChartDecl {
        parse_chart(STANDARD_CHART).expect("standard chart parses")
    }

    pub fn kind_of(&self, name: &str) -> Option<SymbolKind> {
        let has = |v: &[Symbol]| v.iter().any(|s| s.name() == name);
        if has(&self.independent) {
            Some(SymbolKind::IndependentCoordinate)
        } else if has(&self.dependent) {
            Some(SymbolKind::DependentCoordinate)
        } else if has(&self.jets) {
            Some(SymbolKind::JetCoordinate)
        } else if has(&self.classification) {
            Some(SymbolKind::ClassificationCoordinate)
        } else if has(&self.parameters) {
            Some(SymbolKind::FormalParameter)
        } else if self.functions.contains_key(name) {
            Some(SymbolKind::UnknownFunction)
        } else {
            None
        }
    }

    /// Coordinates that may carry a `d_` component.
    pub fn is_coordinate(&self, name: &str) -> bool {
        matches!(
            self.kind_of(name),
            Some(
                SymbolKind::IndependentCoordinate
                    | SymbolKind::DependentCoordinate
                    | SymbolKind::JetCoordinate
                    | SymbolKind::ClassificationCoordinate
            )
        )
    }

    pub fn function(&self, name: &str) -> Option<&FunctionDecl> {
        self.functions.get(name)
    }

    /// Jet symbol for `dep` differentiated along the given independent names.
    pub fn jet(&self, dep: &str, along: &[&str]) -> Option<Symbol> {
        let idx: Option<Vec<usize>> = along
            .iter()
            .map(|a| self.independent.iter().position(|s| s.name() == *a))
            .collect();
        let dep = self.dependent.iter().find(|s| s.name() == dep)?;
        Some(Symbol::new(&jet_name(dep, &self.independent, &idx?)))
    }

    /// Text form accepted by [`parse_chart`].
    pub fn render(&self) -> String {
        let names = |v: &[Symbol]| {
            v.iter()
                .map(|s| s.name().to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut out = String::new();
        for (kw, v) in [
            ("vars", &self.independent),
            ("dep", &self.dependent),
            ("class", &self.classification),
            ("param", &self.parameters),
        ] {
            if !v.is_empty() {
                out.push_str(&format!("{} {}; ", kw, names(v)));
            }
        }
        for f in self.functions.values() {
            out.push_str(&format!("fun {}({}); ", f.name, names(&f.params).replace(' ', ",")));
        }
        out.trim_end().to_string()
    }
}

pub(crate) const STANDARD_CHART: &str =
    "vars x y t; dep u; class f; param s c1 c2 c3 c4; fun F(x,y,u,u_x,u_y); fun Phi(l);";

fn reserved(name: &str) -> bool {
    name == "exp"
        || name.starts_with("d_")
        || matches!(name, "chart" | "field" | "expr" | "vars" | "dep" | "class" | "param" | "fun")
}

/// Parses declarations until `}` (when `braced`) or end of input.
pub(crate) fn parse_decls(cur: &mut Cursor, braced: bool) -> Result<ChartDecl, ParseError> {
    let mut seen: BTreeMap<String, Pos> = BTreeMap::new();
    let mut independent = Vec::new();
    let mut dependent = Vec::new();
    let mut classification = Vec::new();
    let mut parameters = Vec::new();
    let mut functions = BTreeMap::new();

    let mut declare = |name: &str, pos: Pos| -> Result<(), ParseError> {
        if reserved(name) {
            return Err(ParseError::Syntax {
                pos,
                message: format!("`{}` is reserved", name),
            });
        }
        if seen.insert(name.to_string(), pos).is_some() {
            return Err(ParseError::DuplicateSymbol {
                pos,
                name: name.to_string(),
            });
        }
        Ok(())
    };

    loop {
        let pos = cur.pos();
        match cur.peek().clone() {
            Tok::RBrace if braced => break,
            Tok::Eof if !braced => break,
            Tok::Ident(kind) => {
                cur.bump();
                match kind.as_str() {
                    "vars" | "dep" | "class" | "param" => {
                        while let Tok::Ident(name) = cur.peek().clone() {
                            let p = cur.pos();
                            cur.bump();
                            declare(&name, p)?;
                            let s = Symbol::new(&name);
                            match kind.as_str() {
                                "vars" => independent.push(s),
                                "dep" => dependent.push(s),
                                "class" => classification.push(s),
                                _ => parameters.push(s),
                            }
                        }
                    }
                    "fun" => loop {
                        let p = cur.pos();
                        let name = cur.ident()?;
                        declare(&name, p)?;
                        cur.expect(Tok::LParen)?;
                        let mut params = Vec::new();
                        if *cur.peek() != Tok::RParen {
                            loop {
                                params.push(Symbol::new(&cur.ident()?));
                                if *cur.peek() == Tok::Comma {
                                    cur.bump();
                                } else {
                                    break;
                                }
                            }
                        }
                        cur.expect(Tok::RParen)?;
                        functions.insert(name.clone(), FunctionDecl { name, params });
                        if *cur.peek() == Tok::Comma {
                            cur.bump();
                        } else {
                            break;
                        }
                    },
                    other => {
                        return Err(ParseError::UnknownKind {
                            pos,
                            kind: other.to_string(),
                        })
                    }
                }
                cur.expect(Tok::Semi)?;
            }
            other => {
                return Err(ParseError::Syntax {
                    pos,
                    message: format!("expected a declaration, found {}", other.describe()),
                })
            }
        }
    }
    let chart = ChartDecl::from_decls(independent, dependent, classification, parameters, functions);
    for j in &chart.jets {
        if let Some(p) = seen.get(j.name()) {
            return Err(ParseError::DuplicateSymbol {
                pos: *p,
                name: j.name().to_string(),
            });
        }
    }
    Ok(chart)
}

/// Parses a chart, either bare (`vars x y t; dep u;`) or wrapped in
/// `chart { … }`.
pub fn parse_chart(text: &str) -> Result<ChartDecl, ParseError> {
    let toks = tokenize(text)?;
    let mut cur = Cursor::new(toks);
    let braced = matches!(cur.peek(), Tok::Ident(k) if k == "chart");
    if braced {
        cur.bump();
        cur.expect(Tok::LBrace)?;
    }
    let chart = parse_decls(&mut cur, braced)?;
    if braced {
        cur.expect(Tok::RBrace)?;
    }
    cur.expect(Tok::Eof)?;
    Ok(chart)
}
