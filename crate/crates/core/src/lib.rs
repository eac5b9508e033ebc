//! Structural causal models, actual causality, and causal explanation.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`]: finite recursive causal models, contexts, interventions.
//! * [`formula`]: the causal formula language and its satisfaction relation.
//! * [`causality`]: sufficient and actual causes with counterfactual witnesses.
//! * [`explanation`]: explanations relative to a set of contexts, partial
//!   explanations, goodness and explanatory power.
//! * [`general`]: explanations relative to situations drawn from several
//!   models, and probabilistic causal models.
//!
//! Probability-carrying types are generic over a [`Probability`] scalar; the
//! aliases below fix the exact rational instantiation used throughout the
//! tests and the command-line tool.

pub mod causality;
pub mod error;
pub mod explanation;
pub mod formula;
pub mod general;
pub mod model;
pub mod prob;

pub use causality::{
    check_ac1, check_actual_cause, enumerate_actual_causes, enumerate_sufficient_causes, find_ac2_witness,
    verify_witness, Ac2Witness, Budget, CauseClass, CauseVerdict, Partition, DEFAULT_BUDGET,
};
pub use error::{Error, Result};
pub use explanation::{
    check_explanation, enumerate_explanations, explanatory_power, gardenfors_power, goodness, partial_core,
    partial_explanation, ActualWorld, EpistemicState, ExplanationOptions, ExplanationReport, PartialExplanationReport,
    PriorState,
};
pub use formula::{
    evaluate, holds_conjunct, parse_formula, BooleanExpr, CausalFormula, CausalLeaf, ConjunctiveEvent, Expr,
    PrimitiveEvent,
};
pub use general::{
    characterizing_formula, check_general_explanation, enumerate_general_explanations, model_valid,
    probability_of_cause, probability_of_formula, GeneralExplanation, GeneralExplanationReport,
    ProbabilisticCausalModel, SituationSet,
};
pub use model::{
    validate_model, Assignment, CausalModel, Context, EquationTable, Range, Signature, Situation, Var, VarKind,
};
pub use prob::Probability;

/// Exact probabilities.
pub type Rational = num_rational::BigRational;

pub type ExactEpistemicState = EpistemicState<Rational>;
pub type ExactPriorState = PriorState<Rational>;
pub type ExactSituationSet = SituationSet<Rational>;
pub type ExactProbabilisticModel = ProbabilisticCausalModel<Rational>;
pub type ExactPartialReport = PartialExplanationReport<Rational>;

pub type FloatEpistemicState = EpistemicState<f64>;
pub type FloatPriorState = PriorState<f64>;
pub type FloatProbabilisticModel = ProbabilisticCausalModel<f64>;
