use thiserror::Error;

/// Errors raised while building models, parsing formulas, or running searches.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable `{0}` is declared more than once")]
    DuplicateVariable(String),

    #[error("variable `{0}` has an empty range")]
    EmptyRange(String),

    #[error("value `{value}` appears more than once in the range of `{variable}`")]
    DuplicateValue { variable: String, value: String },

    #[error("a model needs at least one endogenous variable")]
    NoEndogenousVariables,

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("value `{value}` is not in the range of `{variable}`")]
    RangeViolation { variable: String, value: String },

    #[error("`{0}` is exogenous; only endogenous variables may be used here")]
    ExogenousVariable(String),

    #[error("`{0}` is endogenous; a context only binds exogenous variables")]
    EndogenousInContext(String),

    #[error("equation for `{target}` is not total: {detail}")]
    PartialEquation { target: String, detail: String },

    #[error("equation for `{0}` is given more than once")]
    DuplicateEquation(String),

    #[error("equation for `{target}` maps the parent tuple ({tuple}) more than once")]
    DuplicateRow { target: String, tuple: String },

    #[error("equation for `{target}` has a row of arity {found}, expected {expected}")]
    RowArity {
        target: String,
        expected: usize,
        found: usize,
    },

    #[error("endogenous variables form a cycle: {}", .0.join(" -> "))]
    CyclicModel(Vec<String>),

    #[error("context does not bind `{0}`")]
    IncompleteContext(String),

    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },

    #[error("`{0}` is intervened on more than once")]
    DuplicateInterventionTarget(String),

    #[error("`{0}` appears more than once in a conjunction")]
    DuplicateConjunct(String),

    #[error("explanations must be conjunctions of primitive events")]
    DisjunctiveCandidate,

    #[error("the candidate conjunction is empty")]
    EmptyCandidate,

    #[error("the epistemic state has no contexts")]
    EmptyEpistemicState,

    #[error("context {0} is listed more than once")]
    DuplicateContext(String),

    #[error("situation {0} is listed more than once")]
    DuplicateSituation(String),

    #[error("invalid probability weights: {0}")]
    InvalidWeights(String),

    #[error("this operation needs probability weights")]
    MissingWeights,

    #[error("the candidate has probability zero")]
    ZeroProbabilityCandidate,

    #[error("prior is inconsistent with the epistemic state: {0}")]
    InconsistentPrior(String),

    #[error("the core of the partial explanation fails {clause}")]
    CoreNotExplanation { clause: &'static str, core: Vec<usize> },

    #[error("EX3 needs a nonempty hypothesis set")]
    EmptyHypothesisSet,

    #[error("`{variable}` is not part of every model in the situation set")]
    VariableMismatch { variable: String },

    #[error("search budget of {limit} evaluations exhausted after {visited}")]
    SearchBudgetExceeded { limit: u64, visited: u64 },

    #[error("max width must be at least 1")]
    ZeroWidth,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
