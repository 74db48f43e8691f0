//! The `.lsf` text format: chart declarations, expressions and vector
//! fields. See `docs/lsf.ebnf` for the grammar.

mod chart;
mod error;
mod lexer;
mod lsf;
mod parser;

pub use chart::{jet_name, parse_chart, ChartDecl, FunctionDecl};
pub use error::{ParseError, Pos};
pub use lsf::{parse_lsf, LsfFile};
pub use parser::{parse_expression, parse_expression_free, parse_field};

/// Renders a field in the syntax accepted by [`parse_field`].
pub fn render_field(v: &crate::field::VectorField) -> String {
    v.to_string()
}
