//! Plain-text metric definitions.
//!
//! ```text
//! metric "name" {
//!   coords: t, x, y, z;
//!   params: r_g = 1;
//!   let r = sqrt(x^2 + y^2 + z^2);
//!   g[0,0] = 1 - r_g / r;
//!   ...
//! }
//! ```
//!
//! Identifiers must be declared before use. `^` takes a constant exponent.

pub mod ast;
pub mod catalog;
pub mod error;
pub mod eval;
pub mod lexer;
pub mod parser;
pub mod printer;

pub use ast::{BinOp, Expr, Func, MetricSpec};
pub use catalog::{builtin_catalog, compiled, lookup, CatalogEntry, CoordBox, CATALOG};
pub use error::{DslError, EvalError};
pub use eval::{eval_metric_jet2, CompiledMetric, MetricEvalError};
pub use parser::{parse_constant, parse_metric};
pub use printer::{print_expr, print_metric};
