use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::field::VectorField;
use crate::symcore::{collect_by, normalize, Atom, Expr, Substitution, Symbol, Tree};

use super::chart::ChartDecl;
use super::error::{ParseError, Pos};
use super::lexer::{tokenize, Spanned, Tok};

const MAX_DEPTH: usize = 200;
const MAX_EXPONENT: i64 = 64;

pub(crate) struct Cursor {
    toks: Vec<Spanned>,
    at: usize,
}

impl Cursor {
    pub(crate) fn new(toks: Vec<Spanned>) -> Self {
        Cursor { toks, at: 0 }
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].tok
    }

    pub(crate) fn pos(&self) -> Pos {
        self.toks[self.at].pos
    }

    pub(crate) fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].tok.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    pub(crate) fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&want.describe()))
        }
    }

    pub(crate) fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    pub(crate) fn unexpected(&self, wanted: &str) -> ParseError {
        ParseError::Syntax {
            pos: self.pos(),
            message: format!("expected {}, found {}", wanted, self.peek().describe()),
        }
    }
}

/// Name resolution for one parse.
pub(crate) struct Scope<'a> {
    /// `None` accepts every identifier as a symbol and every call as an
    /// unknown function of matching arity.
    pub chart: Option<&'a ChartDecl>,
    /// Earlier definitions that may be referenced by name.
    pub refs: &'a BTreeMap<String, Expr>,
    /// Whether `d_<coordinate>` markers are allowed.
    pub field: bool,
}

struct ExprParser<'s, 'a> {
    cur: &'s mut Cursor,
    scope: &'s Scope<'a>,
    depth: usize,
}

impl ExprParser<'_, '_> {
    fn expr(&mut self, min_bp: u8) -> Result<Tree, ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::Syntax {
                pos: self.cur.pos(),
                message: "expression nested too deeply".into(),
            });
        }
        let mut lhs = self.prefix()?;
        loop {
            let (bp, right) = match self.cur.peek() {
                Tok::Plus | Tok::Minus => (10, 11),
                Tok::Star | Tok::Slash => (20, 21),
                Tok::Caret => (30, 30),
                _ => break,
            };
            if bp < min_bp {
                break;
            }
            let op = self.cur.bump();
            lhs = match op {
                Tok::Caret => {
                    let n = self.exponent()?;
                    Tree::Pow(Box::new(lhs), n)
                }
                Tok::Plus => Tree::Add(vec![lhs, self.expr(right)?]),
                Tok::Minus => Tree::Add(vec![lhs, negate(self.expr(right)?)]),
                Tok::Star => Tree::Mul(vec![lhs, self.expr(right)?]),
                _ => Tree::Mul(vec![lhs, Tree::Pow(Box::new(self.expr(right)?), -1)]),
            };
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn exponent(&mut self) -> Result<i32, ParseError> {
        let pos = self.cur.pos();
        let paren = *self.cur.peek() == Tok::LParen;
        if paren {
            self.cur.bump();
        }
        let neg = *self.cur.peek() == Tok::Minus;
        if neg {
            self.cur.bump();
        }
        let n = match self.cur.bump() {
            Tok::Int(n) => n,
            _ => {
                return Err(ParseError::Syntax {
                    pos,
                    message: "exponent must be an integer literal".into(),
                })
            }
        };
        if paren {
            self.cur.expect(Tok::RParen)?;
        }
        let too_big = || ParseError::Syntax {
            pos,
            message: format!("exponent larger than {}", MAX_EXPONENT),
        };
        let mut v = n.to_i64().filter(|v| *v <= MAX_EXPONENT).ok_or_else(too_big)?;
        // `^` is right-associative; with literal exponents that is folding.
        if !paren && *self.cur.peek() == Tok::Caret {
            self.cur.bump();
            let m = self.exponent()?;
            if m < 0 {
                return Err(ParseError::Syntax {
                    pos,
                    message: "nested exponent must be non-negative".into(),
                });
            }
            v = (v as i128)
                .checked_pow(m as u32)
                .filter(|r| *r <= MAX_EXPONENT as i128)
                .ok_or_else(too_big)? as i64;
        }
        Ok(if neg { -v } else { v } as i32)
    }

    fn prefix(&mut self) -> Result<Tree, ParseError> {
        let pos = self.cur.pos();
        match self.cur.bump() {
            Tok::Int(n) => Ok(Tree::Num(BigRational::from_integer(n))),
            Tok::Minus => Ok(negate(self.expr(25)?)),
            Tok::Plus => self.expr(25),
            Tok::LParen => {
                let e = self.expr(0)?;
                self.cur.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => self.identifier(name, pos),
            other => Err(ParseError::Syntax {
                pos,
                message: format!("expected an expression, found {}", other.describe()),
            }),
        }
    }

    fn args(&mut self) -> Result<Vec<Tree>, ParseError> {
        self.cur.expect(Tok::LParen)?;
        let mut out = Vec::new();
        if *self.cur.peek() != Tok::RParen {
            loop {
                out.push(self.expr(0)?);
                if *self.cur.peek() == Tok::Comma {
                    self.cur.bump();
                } else {
                    break;
                }
            }
        }
        self.cur.expect(Tok::RParen)?;
        Ok(out)
    }

    fn deriv_index(&mut self) -> Result<Vec<usize>, ParseError> {
        self.cur.expect(Tok::Prime)?;
        self.cur.expect(Tok::LBracket)?;
        let mut out = Vec::new();
        loop {
            let pos = self.cur.pos();
            match self.cur.bump() {
                Tok::Int(n) => match n.to_usize().filter(|v| *v < 64) {
                    Some(v) => out.push(v),
                    None => {
                        return Err(ParseError::Syntax {
                            pos,
                            message: "derivative index out of range".into(),
                        })
                    }
                },
                other => {
                    return Err(ParseError::Syntax {
                        pos,
                        message: format!("expected a derivative index, found {}", other.describe()),
                    })
                }
            }
            if *self.cur.peek() == Tok::Comma {
                self.cur.bump();
            } else {
                break;
            }
        }
        self.cur.expect(Tok::RBracket)?;
        Ok(out)
    }

    fn identifier(&mut self, name: String, pos: Pos) -> Result<Tree, ParseError> {
        let is_call = matches!(self.cur.peek(), Tok::LParen)
            || (matches!(self.cur.peek(), Tok::Prime) && matches!(self.cur.peek2(), Tok::LBracket));
        if !is_call {
            return self.plain_name(name, pos);
        }
        if name == "exp" && *self.cur.peek() == Tok::LParen {
            let mut a = self.args()?;
            if a.len() != 1 {
                return Err(ParseError::Arity {
                    pos,
                    name,
                    expected: 1,
                    got: a.len(),
                });
            }
            return Ok(Tree::Exp(Box::new(a.pop().unwrap())));
        }
        let deriv = if *self.cur.peek() == Tok::Prime {
            self.deriv_index()?
        } else {
            Vec::new()
        };
        let args = self.args()?;
        let arity = match self.scope.chart {
            None => args.len(),
            Some(c) => match c.function(&name) {
                Some(f) => f.arity(),
                None => return Err(ParseError::UnknownSymbol { pos, name }),
            },
        };
        if args.len() != arity {
            return Err(ParseError::Arity {
                pos,
                name,
                expected: arity,
                got: args.len(),
            });
        }
        if deriv.iter().any(|&d| d >= arity) {
            return Err(ParseError::Syntax {
                pos,
                message: format!("derivative index exceeds the arity of `{}`", name),
            });
        }
        Ok(Tree::Call {
            name: Arc::from(name.as_str()),
            deriv,
            args,
        })
    }

    fn plain_name(&mut self, name: String, pos: Pos) -> Result<Tree, ParseError> {
        if let Some(coord) = name.strip_prefix("d_") {
            let known = match self.scope.chart {
                Some(c) => c.is_coordinate(coord),
                None => true,
            };
            if self.scope.field && known {
                return Ok(Tree::Sym(Symbol::new(&name)));
            }
            return Err(ParseError::InvalidField {
                pos,
                message: if self.scope.field {
                    format!("`{}` is not a declared coordinate", coord)
                } else {
                    format!("`{}` is only allowed in a field", name)
                },
            });
        }
        let ok = match self.scope.chart {
            None => true,
            Some(c) => {
                self.scope.refs.contains_key(&name)
                    || (c.kind_of(&name).is_some() && c.function(&name).is_none())
            }
        };
        if ok {
            Ok(Tree::Sym(Symbol::new(&name)))
        } else {
            Err(ParseError::UnknownSymbol { pos, name })
        }
    }
}

fn negate(t: Tree) -> Tree {
    Tree::Mul(vec![Tree::Num(-BigRational::one()), t])
}

/// Parses one expression at the cursor and normalizes it, resolving
/// references to earlier definitions.
pub(crate) fn parse_expr_at(cur: &mut Cursor, scope: &Scope) -> Result<Expr, ParseError> {
    let pos = cur.pos();
    let tree = ExprParser {
        cur,
        scope,
        depth: 0,
    }
    .expr(0)?;
    let e = normalize(&tree).map_err(|source| ParseError::Math { pos, source })?;
    if scope.refs.is_empty() {
        return Ok(e);
    }
    let used = e.symbols();
    let mut sub = Substitution::new();
    for (k, v) in scope.refs {
        if used.contains(&Symbol::new(k)) {
            sub = sub.bind(k, v.clone());
        }
    }
    if sub.is_empty() {
        return Ok(e);
    }
    e.substitute(&sub)
        .map_err(|source| ParseError::Math { pos, source })
}

/// Splits an expression linear in `d_` markers into a vector field.
pub(crate) fn expr_to_field(e: &Expr, pos: Pos) -> Result<VectorField, ParseError> {
    let is_marker = |a: &Atom| a.as_symbol().is_some_and(|s| s.name().starts_with("d_"));
    let parts = collect_by(e, &is_marker).map_err(|_| ParseError::InvalidField {
        pos,
        message: "field body is not linear in d_ terms".into(),
    })?;
    let mut v = VectorField::zero();
    for (k, c) in parts {
        if k.is_one() {
            return Err(ParseError::InvalidField {
                pos,
                message: format!("term `{}` has no d_ factor", c),
            });
        }
        if k.degree() != 1 {
            return Err(ParseError::InvalidField {
                pos,
                message: format!("term in `{}` is not linear in d_ terms", k),
            });
        }
        let name = k.0[0].0.as_symbol().expect("marker is a symbol").name();
        v.set(Symbol::new(&name["d_".len()..]), c);
    }
    Ok(v)
}

/// Encodes a field as an expression `Σ c·d_z` so later bodies can reference it.
pub(crate) fn field_to_expr(v: &VectorField) -> Expr {
    v.components()
        .into_iter()
        .map(|(s, c)| c * &Expr::sym(&format!("d_{}", s)))
        .sum()
}

fn finish(cur: &mut Cursor) -> Result<(), ParseError> {
    if *cur.peek() == Tok::Semi {
        cur.bump();
    }
    cur.expect(Tok::Eof)
}

/// Parses an expression over `chart`.
pub fn parse_expression(text: &str, chart: &ChartDecl) -> Result<Expr, ParseError> {
    let mut cur = Cursor::new(tokenize(text)?);
    let refs = BTreeMap::new();
    let scope = Scope {
        chart: Some(chart),
        refs: &refs,
        field: false,
    };
    let e = parse_expr_at(&mut cur, &scope)?;
    finish(&mut cur)?;
    Ok(e)
}

/// Parses an expression without a chart: every identifier is a symbol and
/// every call an unknown function of the arity used.
pub fn parse_expression_free(text: &str) -> Result<Expr, ParseError> {
    let mut cur = Cursor::new(tokenize(text)?);
    let refs = BTreeMap::new();
    let scope = Scope {
        chart: None,
        refs: &refs,
        field: false,
    };
    let e = parse_expr_at(&mut cur, &scope)?;
    finish(&mut cur)?;
    Ok(e)
}

/// Parses a field body `Σ coeff*d_<coordinate>` over `chart`.
pub fn parse_field(text: &str, chart: &ChartDecl) -> Result<VectorField, ParseError> {
    let mut cur = Cursor::new(tokenize(text)?);
    let refs = BTreeMap::new();
    let scope = Scope {
        chart: Some(chart),
        refs: &refs,
        field: true,
    };
    let pos = cur.pos();
    let e = parse_expr_at(&mut cur, &scope)?;
    finish(&mut cur)?;
    expr_to_field(&e, pos)
}
