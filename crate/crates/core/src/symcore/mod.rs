//! Exact symbolic expressions: canonical rational normal form over
//! rationals, symbols, exponential atoms and unknown-function atoms.

mod collect;
mod error;
mod eval;
mod expr;
mod poly;
mod subst;
mod symbol;
mod tree;

pub use collect::{collect, collect_by, MarkerMonomial};
pub use error::SymError;
pub use expr::{Atom, Expr, FuncAtom};
pub use poly::{Mono, Poly};
pub use subst::Substitution;
pub use symbol::{Symbol, SymbolKind};
pub use tree::{normalize, Tree};

/// Partial derivative, free-function form of [`Expr::diff`].
pub fn diff(e: &Expr, v: &Symbol) -> Expr {
    e.diff(v)
}

/// Simultaneous substitution, free-function form of [`Expr::substitute`].
pub fn substitute(e: &Expr, bindings: &Substitution) -> Result<Expr, SymError> {
    e.substitute(bindings)
}
