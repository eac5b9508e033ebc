//! Command-line access to the `causa` engine: the model file format, the
//! bundled fixtures, and [`run_command`], which the `causa` binary wraps.

pub mod dsl;
pub mod fixtures;
mod report;
mod run;

pub use dsl::{parse_context_list, parse_model_document, ContextList, DslError, ModelDocument};
pub use report::QueryResult;
pub use run::{run_command, Cli, Outcome};

use causa::Rational;

/// Exact rationals always print as `p/q`.
pub fn ratio(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Variant name of an engine error, used in diagnostics.
pub fn error_kind(e: &causa::Error) -> String {
    let debug = format!("{e:?}");
    debug
        .split(|c: char| !c.is_ascii_alphanumeric())
        .next()
        .unwrap_or_default()
        .to_string()
}
