//! Exact symbolic machinery for Lie symmetry analysis of the class of
//! two-dimensional nonlinear heat equations `u_t = f(x,y,u,u_x,u_y)(u_xx+u_yy)`.
//!
//! The crate is organized bottom-up: [`symcore`] is the expression engine,
//! [`fieldlang`] parses the `.lsf` input format, [`jets`] prolongs vector
//! fields, [`determining`] builds symmetry conditions, [`liealg`] handles
//! finite-dimensional Lie algebras of fields, [`optsys`] reduces
//! one-dimensional subalgebras, and [`invclass`] assembles classification
//! rows and audits them.

pub mod catalog;
pub mod determining;
pub mod field;
pub mod fieldlang;
pub mod invclass;
pub mod jets;
pub mod liealg;
pub mod optsys;
pub mod symcore;

pub use field::VectorField;
pub use fieldlang::{parse_chart, parse_expression, parse_field, parse_lsf, ChartDecl, ParseError};
pub use symcore::{Expr, SymError, Symbol};
