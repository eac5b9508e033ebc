//! Explanations relative to an epistemic state.
//!
//! `X=x` explains `φ` relative to a set `K` of contexts when
//!
//! * **EX1**: `φ` holds in every context of `K`,
//! * **EX2**: `X=x` is a sufficient cause of `φ` in every context of `K`
//!   where it holds,
//! * **EX3**: no proper nonempty sub-conjunction satisfies EX2, and
//! * **EX4**: `X=x` is false in some context of `K` and true in another.
//!
//! A candidate that fails EX2 may still be a partial explanation: its core
//! is `K` minus the contexts where it holds without being a sufficient cause.
//! Goodness and explanatory power are conditional probabilities of that core.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::causality::{for_each_combination, Budget, Checker};
use crate::error::{Error, Result};
use crate::formula::eval::resolve_conjunct;
use crate::formula::{CausalFormula, CompiledFormula, ConjunctiveEvent};
use crate::model::{CausalModel, Context, Var};
use crate::prob::{check_distribution, conditional, sum, Probability};

/// A nonempty set of contexts the agent considers possible, optionally
/// weighted by a probability.
#[derive(Debug, Clone)]
pub struct EpistemicState<P> {
    model: Arc<CausalModel>,
    contexts: Vec<Context>,
    weights: Option<Vec<P>>,
}

fn check_contexts(model: &CausalModel, contexts: &[Context]) -> Result<()> {
    if contexts.is_empty() {
        return Err(Error::EmptyEpistemicState);
    }
    let sig = model.signature();
    for (i, c) in contexts.iter().enumerate() {
        sig.check_context(c)?;
        if contexts[..i].contains(c) {
            return Err(Error::DuplicateContext(sig.display_context(c).to_string()));
        }
    }
    Ok(())
}

impl<P: Probability> EpistemicState<P> {
    pub fn new(model: Arc<CausalModel>, contexts: Vec<Context>) -> Result<Self> {
        check_contexts(&model, &contexts)?;
        Ok(EpistemicState {
            model,
            contexts,
            weights: None,
        })
    }

    /// A weighted state. Weights must be nonnegative and sum to one.
    pub fn weighted(model: Arc<CausalModel>, weighted: Vec<(Context, P)>) -> Result<Self> {
        let (contexts, weights): (Vec<Context>, Vec<P>) = weighted.into_iter().unzip();
        check_contexts(&model, &contexts)?;
        check_distribution(&weights)?;
        Ok(EpistemicState {
            model,
            contexts,
            weights: Some(weights),
        })
    }

    pub fn model(&self) -> &Arc<CausalModel> {
        &self.model
    }

    pub fn contexts(&self) -> &[Context] {
        &self.contexts
    }

    pub fn weights(&self) -> Option<&[P]> {
        self.weights.as_deref()
    }

    fn require_weights(&self) -> Result<&[P]> {
        self.weights.as_deref().ok_or(Error::MissingWeights)
    }
}

/// The agent's state before learning the explanandum: a superset `K⁻` of
/// contexts with a prior `Pr⁻`.
#[derive(Debug, Clone)]
pub struct PriorState<P> {
    model: Arc<CausalModel>,
    contexts: Vec<Context>,
    weights: Vec<P>,
}

impl<P: Probability> PriorState<P> {
    pub fn new(model: Arc<CausalModel>, weighted: Vec<(Context, P)>) -> Result<Self> {
        let (contexts, weights): (Vec<Context>, Vec<P>) = weighted.into_iter().unzip();
        check_contexts(&model, &contexts)?;
        check_distribution(&weights)?;
        Ok(PriorState {
            model,
            contexts,
            weights,
        })
    }

    pub fn model(&self) -> &Arc<CausalModel> {
        &self.model
    }

    pub fn contexts(&self) -> &[Context] {
        &self.contexts
    }

    pub fn weights(&self) -> &[P] {
        &self.weights
    }

    /// The posterior state: the contexts of `K⁻` where `phi` holds, with
    /// `Pr⁻` conditioned on them.
    pub fn condition(&self, phi: &CausalFormula) -> Result<EpistemicState<P>> {
        let compiled = CompiledFormula::compile(phi, self.model.signature())?;
        let kept: Vec<usize> = (0..self.contexts.len())
            .filter(|&i| compiled.holds(&self.model, &self.contexts[i]))
            .collect();
        if kept.is_empty() {
            return Err(Error::EmptyEpistemicState);
        }
        let mass = sum(kept.iter().map(|&i| &self.weights[i]));
        if mass.is_zero() {
            return Err(Error::InconsistentPrior(
                "the explanandum has prior probability zero".into(),
            ));
        }
        Ok(EpistemicState {
            model: Arc::clone(&self.model),
            contexts: kept.iter().map(|&i| self.contexts[i].clone()).collect(),
            weights: Some(kept.iter().map(|&i| self.weights[i].clone() / mass.clone()).collect()),
        })
    }

    /// Checks that `state` is this prior conditioned on `phi`.
    fn check_posterior(&self, state: &EpistemicState<P>, phi: &CausalFormula) -> Result<()> {
        if !(Arc::ptr_eq(&self.model, &state.model) || *self.model == *state.model) {
            return Err(Error::InconsistentPrior("prior and state use different models".into()));
        }
        let expected = self.condition(phi)?;
        let mut want: Vec<(&Context, &P)> = expected
            .contexts
            .iter()
            .zip(expected.weights.as_deref().unwrap_or(&[]))
            .collect();
        want.sort_by(|a, b| a.0.cmp(b.0));
        let mut have: Vec<&Context> = state.contexts.iter().collect();
        have.sort();
        if have.len() != want.len() || have.iter().zip(&want).any(|(h, w)| *h != w.0) {
            return Err(Error::InconsistentPrior(
                "the state is not the set of prior contexts satisfying the explanandum".into(),
            ));
        }
        if let Some(weights) = &state.weights {
            for (c, w) in state.contexts.iter().zip(weights) {
                let (_, expected) = want.iter().find(|(k, _)| *k == c).expect("same contexts");
                if !same_probability(w, expected) {
                    return Err(Error::InconsistentPrior(format!(
                        "weight {w} of {} differs from the conditioned prior {expected}",
                        self.model.signature().display_context(c)
                    )));
                }
            }
        }
        Ok(())
    }
}

fn same_probability<P: Probability>(a: &P, b: &P) -> bool {
    if b.is_zero() {
        return a.is_zero();
    }
    (a.clone() / b.clone()).is_unit()
}

/// The optional "true in the actual world" requirement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActualWorld {
    pub context: Context,
    /// Also require the actual context to be one of the contexts in `K`.
    pub in_k: bool,
}

/// Knobs for [`enumerate_explanations`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplanationOptions {
    /// Largest number of conjuncts considered.
    pub max_width: usize,
    /// Also consider conjuncts over variables that occur in the explanandum.
    /// Off by default: such events are trivially sufficient for the
    /// explanandum wherever they hold.
    pub include_explanandum: bool,
    pub actual: Option<ActualWorld>,
}

impl Default for ExplanationOptions {
    fn default() -> Self {
        ExplanationOptions {
            max_width: usize::MAX,
            include_explanandum: false,
            actual: None,
        }
    }
}

/// Clause-by-clause result of an explanation check.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplanationReport {
    pub candidate: ConjunctiveEvent,
    pub phi: CausalFormula,
    pub ex1: bool,
    pub ex2: bool,
    pub ex3: bool,
    pub ex4: bool,
    /// Contexts where the candidate holds but is not a sufficient cause.
    pub failing_contexts: Vec<Context>,
    /// A sub-conjunction satisfying EX2, when EX3 fails.
    pub ex3_blocker: Option<ConjunctiveEvent>,
    /// Whether the actual-world requirement held, when one was given.
    pub actual: Option<bool>,
    pub verdict: bool,
}

/// A partial explanation: its core and the associated probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialExplanationReport<P> {
    pub candidate: ConjunctiveEvent,
    pub core: Vec<Context>,
    /// First clause that fails when the candidate is checked against the
    /// core alone.
    pub core_failure: Option<&'static str>,
    pub goodness: Option<P>,
    pub probability_of_explanation: Option<P>,
    pub power: Option<P>,
    pub gardenfors_power: Option<P>,
}

/// One context of an epistemic state, with its causality checker and a
/// cache of sufficiency results.
pub(crate) struct Site<'a> {
    checker: Checker<'a>,
    pub(crate) phi_holds: bool,
    cache: HashMap<Vec<(Var, usize)>, bool>,
}

impl<'a> Site<'a> {
    pub(crate) fn new(model: &'a CausalModel, context: &'a Context, phi: &'a CompiledFormula) -> Self {
        Site {
            checker: Checker::new(model, context, phi),
            phi_holds: phi.holds(model, context),
            cache: HashMap::new(),
        }
    }

    pub(crate) fn state(&self) -> &[usize] {
        self.checker.actual()
    }

    pub(crate) fn holds(&self, lits: &[(Var, usize)]) -> bool {
        self.checker.holds(lits)
    }

    pub(crate) fn sufficient(&mut self, lits: &[(Var, usize)], budget: &mut Budget) -> Result<bool> {
        if let Some(&hit) = self.cache.get(lits) {
            return Ok(hit);
        }
        let hit = self.checker.sufficient(lits, budget)?.is_some();
        self.cache.insert(lits.to_vec(), hit);
        Ok(hit)
    }
}

struct Engine<'a> {
    sites: Vec<Site<'a>>,
    ex2_cache: HashMap<Vec<(Var, usize)>, bool>,
}

impl<'a> Engine<'a> {
    fn new(model: &'a CausalModel, contexts: &'a [Context], phi: &'a CompiledFormula) -> Self {
        Engine {
            sites: contexts.iter().map(|c| Site::new(model, c, phi)).collect(),
            ex2_cache: HashMap::new(),
        }
    }

    fn ex1(&self) -> bool {
        self.sites.iter().all(|s| s.phi_holds)
    }

    fn ex4(&self, lits: &[(Var, usize)]) -> bool {
        self.sites.iter().any(|s| s.holds(lits)) && self.sites.iter().any(|s| !s.holds(lits))
    }

    /// Indices of sites where `lits` holds but is not sufficient.
    fn failing(&mut self, lits: &[(Var, usize)], budget: &mut Budget) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for (i, site) in self.sites.iter_mut().enumerate() {
            if site.holds(lits) && !site.sufficient(lits, budget)? {
                out.push(i);
            }
        }
        Ok(out)
    }

    fn ex2(&mut self, lits: &[(Var, usize)], budget: &mut Budget) -> Result<bool> {
        if let Some(&hit) = self.ex2_cache.get(lits) {
            return Ok(hit);
        }
        let mut hit = true;
        for site in self.sites.iter_mut() {
            if site.holds(lits) && !site.sufficient(lits, budget)? {
                hit = false;
                break;
            }
        }
        self.ex2_cache.insert(lits.to_vec(), hit);
        Ok(hit)
    }

    /// First proper nonempty sub-conjunction satisfying EX2, smallest first.
    fn ex3_blocker(&mut self, lits: &[(Var, usize)], budget: &mut Budget) -> Result<Option<Vec<(Var, usize)>>> {
        for width in 1..lits.len() {
            let mut subs = Vec::new();
            for_each_combination(lits.len(), width, |idx| {
                subs.push(idx.iter().map(|&i| lits[i]).collect::<Vec<_>>())
            });
            for sub in subs {
                if self.ex2(&sub, budget)? {
                    return Ok(Some(sub));
                }
            }
        }
        Ok(None)
    }
}

fn to_event(model: &CausalModel, lits: &[(Var, usize)]) -> ConjunctiveEvent {
    let sig = model.signature();
    ConjunctiveEvent::from_pairs(lits.iter().map(|&(v, x)| (sig.name(v), sig.value_name(v, x))))
        .expect("distinct variables")
}

fn actual_holds(
    model: &CausalModel,
    contexts: &[Context],
    lits: &[(Var, usize)],
    actual: &ActualWorld,
) -> Result<bool> {
    model.signature().check_context(&actual.context)?;
    if actual.in_k && !contexts.contains(&actual.context) {
        return Ok(false);
    }
    let state = model.solve_state(&actual.context, &[]);
    Ok(lits.iter().all(|&(v, x)| state[v.index()] == x))
}

/// Checks EX1 to EX4 for `candidate` as an explanation of `phi`.
pub fn check_explanation<P: Probability>(
    state: &EpistemicState<P>,
    candidate: &ConjunctiveEvent,
    phi: &CausalFormula,
    actual: Option<&ActualWorld>,
    budget: &mut Budget,
) -> Result<ExplanationReport> {
    if candidate.is_empty() {
        return Err(Error::EmptyCandidate);
    }
    let model = &*state.model;
    let compiled = CompiledFormula::compile(phi, model.signature())?;
    let lits = resolve_conjunct(candidate, model.signature())?;
    let mut engine = Engine::new(model, &state.contexts, &compiled);

    let ex1 = engine.ex1();
    let ex4 = engine.ex4(&lits);
    let failing = engine.failing(&lits, budget)?;
    let ex2 = failing.is_empty();
    let blocker = engine.ex3_blocker(&lits, budget)?;
    let actual = actual
        .map(|a| actual_holds(model, &state.contexts, &lits, a))
        .transpose()?;
    Ok(ExplanationReport {
        candidate: candidate.clone(),
        phi: phi.clone(),
        ex1,
        ex2,
        ex3: blocker.is_none(),
        ex4,
        failing_contexts: failing.iter().map(|&i| state.contexts[i].clone()).collect(),
        ex3_blocker: blocker.as_deref().map(|b| to_event(model, b)),
        actual,
        verdict: ex1 && ex2 && blocker.is_none() && ex4 && actual != Some(false),
    })
}

/// Candidate conjunctions over `vars` that hold in at least one site, in
/// range order. Only these can pass EX4.
pub(crate) fn observed_values(states: &[&[usize]], vars: &[Var]) -> Vec<Vec<(Var, usize)>> {
    let mut seen: Vec<Vec<usize>> = states
        .iter()
        .map(|s| vars.iter().map(|v| s[v.index()]).collect())
        .collect();
    seen.sort();
    seen.dedup();
    seen.into_iter()
        .map(|vals| vars.iter().copied().zip(vals).collect())
        .collect()
}

/// All explanations of `phi` with at most `options.max_width` conjuncts,
/// ordered by width, then variables in declaration order, then values in
/// range order.
pub fn enumerate_explanations<P: Probability>(
    state: &EpistemicState<P>,
    phi: &CausalFormula,
    options: &ExplanationOptions,
    budget: &mut Budget,
) -> Result<Vec<ConjunctiveEvent>> {
    if options.max_width == 0 {
        return Err(Error::ZeroWidth);
    }
    let model = &*state.model;
    let sig = model.signature();
    let compiled = CompiledFormula::compile(phi, sig)?;
    let mut engine = Engine::new(model, &state.contexts, &compiled);
    if !engine.ex1() {
        return Ok(Vec::new());
    }
    let excluded = phi.variables();
    let pool: Vec<Var> = sig
        .endogenous()
        .iter()
        .copied()
        .filter(|&v| options.include_explanandum || !excluded.contains(&sig.name(v)))
        .collect();

    let mut out = Vec::new();
    for width in 1..=options.max_width.min(pool.len()) {
        let mut combos = Vec::new();
        for_each_combination(pool.len(), width, |idx| {
            combos.push(idx.iter().map(|&i| pool[i]).collect::<Vec<Var>>())
        });
        for vars in combos {
            let states: Vec<&[usize]> = engine.sites.iter().map(|s| s.state()).collect();
            for lits in observed_values(&states, &vars) {
                if !engine.ex4(&lits) || !engine.ex2(&lits, budget)? {
                    continue;
                }
                if engine.ex3_blocker(&lits, budget)?.is_some() {
                    continue;
                }
                if let Some(a) = &options.actual {
                    if !actual_holds(model, &state.contexts, &lits, a)? {
                        continue;
                    }
                }
                out.push(to_event(model, &lits));
            }
        }
    }
    Ok(out)
}

/// Indices of the core contexts: all of `K` except where the candidate holds
/// without being a sufficient cause.
fn raw_core(engine: &mut Engine<'_>, lits: &[(Var, usize)], budget: &mut Budget) -> Result<Vec<usize>> {
    let failing = engine.failing(lits, budget)?;
    Ok((0..engine.sites.len()).filter(|i| !failing.contains(i)).collect())
}

/// The first of EX1, EX4, EX3 that fails on the core (EX2 holds there by
/// construction).
fn core_failure(
    model: &CausalModel,
    contexts: &[Context],
    core: &[usize],
    compiled: &CompiledFormula,
    lits: &[(Var, usize)],
    budget: &mut Budget,
) -> Result<Option<&'static str>> {
    if core.is_empty() {
        return Ok(Some("EX4"));
    }
    let core_contexts: Vec<Context> = core.iter().map(|&i| contexts[i].clone()).collect();
    let mut engine = Engine::new(model, &core_contexts, compiled);
    Ok(if !engine.ex1() {
        Some("EX1")
    } else if !engine.ex4(lits) {
        Some("EX4")
    } else if engine.ex3_blocker(lits, budget)?.is_some() {
        Some("EX3")
    } else {
        None
    })
}

/// The core of `candidate` as a partial explanation. Fails with
/// `CoreNotExplanation` when the candidate does not explain `phi` relative
/// to that core.
pub fn partial_core<P: Probability>(
    state: &EpistemicState<P>,
    candidate: &ConjunctiveEvent,
    phi: &CausalFormula,
    budget: &mut Budget,
) -> Result<Vec<Context>> {
    if candidate.is_empty() {
        return Err(Error::EmptyCandidate);
    }
    let model = &*state.model;
    let compiled = CompiledFormula::compile(phi, model.signature())?;
    let lits = resolve_conjunct(candidate, model.signature())?;
    let mut engine = Engine::new(model, &state.contexts, &compiled);
    let core = raw_core(&mut engine, &lits, budget)?;
    if let Some(clause) = core_failure(model, &state.contexts, &core, &compiled, &lits, budget)? {
        return Err(Error::CoreNotExplanation { clause, core });
    }
    Ok(core.iter().map(|&i| state.contexts[i].clone()).collect())
}

struct Core {
    lits: Vec<(Var, usize)>,
    members: Vec<Context>,
    failure: Option<&'static str>,
}

fn compute_core<P: Probability>(
    state: &EpistemicState<P>,
    candidate: &ConjunctiveEvent,
    phi: &CausalFormula,
    budget: &mut Budget,
) -> Result<Core> {
    if candidate.is_empty() {
        return Err(Error::EmptyCandidate);
    }
    let model = &*state.model;
    let compiled = CompiledFormula::compile(phi, model.signature())?;
    let lits = resolve_conjunct(candidate, model.signature())?;
    let mut engine = Engine::new(model, &state.contexts, &compiled);
    let core = raw_core(&mut engine, &lits, budget)?;
    let failure = core_failure(model, &state.contexts, &core, &compiled, &lits, budget)?;
    Ok(Core {
        lits,
        members: core.iter().map(|&i| state.contexts[i].clone()).collect(),
        failure,
    })
}

/// `Pr(event ∩ pred)` and `Pr(event)` over weighted contexts.
fn masses<P: Probability>(
    model: &CausalModel,
    contexts: &[Context],
    weights: &[P],
    lits: &[(Var, usize)],
    pred: impl Fn(&Context) -> bool,
) -> (P, P) {
    let mut joint = P::zero();
    let mut event = P::zero();
    for (c, w) in contexts.iter().zip(weights) {
        let state = model.solve_state(c, &[]);
        if lits.iter().all(|&(v, x)| state[v.index()] == x) {
            event = event + w.clone();
            if pred(c) {
                joint = joint + w.clone();
            }
        }
    }
    (joint, event)
}

/// `Pr(core | X=x)` under the state's own weights.
pub fn goodness<P: Probability>(
    state: &EpistemicState<P>,
    candidate: &ConjunctiveEvent,
    phi: &CausalFormula,
    budget: &mut Budget,
) -> Result<P> {
    let weights = state.require_weights()?;
    let core = compute_core(state, candidate, phi, budget)?;
    let (joint, event) = masses(&state.model, &state.contexts, weights, &core.lits, |c| {
        core.members.contains(c)
    });
    conditional(joint, event)
}

/// `Pr⁻(core | X=x)`: the prior probability that the candidate holds and is
/// a sufficient cause of `phi`, given that it holds.
pub fn explanatory_power<P: Probability>(
    prior: &PriorState<P>,
    state: &EpistemicState<P>,
    candidate: &ConjunctiveEvent,
    phi: &CausalFormula,
    budget: &mut Budget,
) -> Result<P> {
    prior.check_posterior(state, phi)?;
    let core = compute_core(state, candidate, phi, budget)?;
    let (joint, event) = masses(&prior.model, &prior.contexts, &prior.weights, &core.lits, |c| {
        core.members.contains(c)
    });
    conditional(joint, event)
}

/// `Pr⁻(K | X=x)`, which equals `Pr⁻(phi | X=x)`.
pub fn gardenfors_power<P: Probability>(
    prior: &PriorState<P>,
    state: &EpistemicState<P>,
    candidate: &ConjunctiveEvent,
    phi: &CausalFormula,
) -> Result<P> {
    prior.check_posterior(state, phi)?;
    if candidate.is_empty() {
        return Err(Error::EmptyCandidate);
    }
    let lits = resolve_conjunct(candidate, prior.model.signature())?;
    let (joint, event) = masses(&prior.model, &prior.contexts, &prior.weights, &lits, |c| {
        state.contexts.contains(c)
    });
    conditional(joint, event)
}

/// Core, goodness, probability and (given a prior) both power measures.
/// Probabilities are absent when the state carries no weights.
pub fn partial_explanation<P: Probability>(
    state: &EpistemicState<P>,
    prior: Option<&PriorState<P>>,
    candidate: &ConjunctiveEvent,
    phi: &CausalFormula,
    budget: &mut Budget,
) -> Result<PartialExplanationReport<P>> {
    let core = compute_core(state, candidate, phi, budget)?;
    let (goodness, probability) = match &state.weights {
        Some(weights) => {
            let (joint, event) = masses(&state.model, &state.contexts, weights, &core.lits, |c| {
                core.members.contains(c)
            });
            (Some(conditional(joint, event.clone())?), Some(event))
        }
        None => (None, None),
    };
    let (power, gardenfors) = match prior {
        Some(prior) => (
            Some(explanatory_power(prior, state, candidate, phi, budget)?),
            Some(gardenfors_power(prior, state, candidate, phi)?),
        ),
        None => (None, None),
    };
    Ok(PartialExplanationReport {
        candidate: candidate.clone(),
        core: core.members,
        core_failure: core.failure,
        goodness,
        probability_of_explanation: probability,
        power,
        gardenfors_power: gardenfors,
    })
}

impl fmt::Display for ExplanationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} explains {}: {} (EX1 {}, EX2 {}, EX3 {}, EX4 {})",
            self.candidate, self.phi, self.verdict, self.ex1, self.ex2, self.ex3, self.ex4
        )
    }
}
