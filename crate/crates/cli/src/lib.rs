//! Front end for `wv`: group expressions, command dispatch and reports.

pub mod commands;
pub mod expr;
pub mod report;
mod suite;

pub use commands::{run, CliError, Command, CriterionKind, NormalSpec, Options, Outcome};
pub use expr::{parse_group_expr, ExprError, GroupExpr};
pub use report::{Format, Report};
pub use suite::{CROSS_CHECK_MAX_EXPONENT, CROSS_CHECK_MAX_RANK, EXAMPLE_2_TIME_LIMIT, ITEMS};
