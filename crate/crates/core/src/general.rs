//! Explanations under model uncertainty, and probabilistic causal models.
//!
//! A general explanation is a pair `(ψ, X=x)`: `ψ` is a causal formula that
//! restricts the models under consideration, `X=x` a conjunction of events.
//! It is checked against a set of situations that may come from different
//! models. EX2 only looks at situations whose model validates `ψ`; EX3 is
//! decided against a finite, caller-supplied set of hypotheses `Ψ`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::causality::{for_each_combination, subset, Budget, Checker};
use crate::error::{Error, Result};
use crate::explanation::{observed_values, Site};
use crate::formula::eval::resolve_conjunct;
use crate::formula::{CausalFormula, CompiledFormula, ConjunctiveEvent, Expr, PrimitiveEvent};
use crate::model::{for_each_tuple, CausalModel, Context, Situation, Var};
use crate::prob::{check_distribution, sum, Probability};

/// A nonempty set of situations, possibly from different models, with
/// optional weights.
#[derive(Debug, Clone)]
pub struct SituationSet<P> {
    situations: Vec<Situation>,
    weights: Option<Vec<P>>,
    /// Index into `models` for each situation.
    model_of: Vec<usize>,
    models: Vec<Arc<CausalModel>>,
}

impl<P: Probability> SituationSet<P> {
    pub fn new(situations: Vec<Situation>) -> Result<Self> {
        if situations.is_empty() {
            return Err(Error::EmptyEpistemicState);
        }
        let mut models: Vec<Arc<CausalModel>> = Vec::new();
        let mut model_of = Vec::with_capacity(situations.len());
        for (i, s) in situations.iter().enumerate() {
            if situations[..i].contains(s) {
                let ctx = s.model.signature().display_context(&s.context).to_string();
                return Err(Error::DuplicateSituation(ctx));
            }
            let idx = match models.iter().position(|m| Arc::ptr_eq(m, &s.model) || **m == *s.model) {
                Some(idx) => idx,
                None => {
                    models.push(Arc::clone(&s.model));
                    models.len() - 1
                }
            };
            model_of.push(idx);
        }
        Ok(SituationSet {
            situations,
            weights: None,
            model_of,
            models,
        })
    }

    pub fn weighted(weighted: Vec<(Situation, P)>) -> Result<Self> {
        let (situations, weights): (Vec<Situation>, Vec<P>) = weighted.into_iter().unzip();
        let mut set = SituationSet::new(situations)?;
        check_distribution(&weights)?;
        set.weights = Some(weights);
        Ok(set)
    }

    pub fn situations(&self) -> &[Situation] {
        &self.situations
    }

    pub fn weights(&self) -> Option<&[P]> {
        self.weights.as_deref()
    }

    /// The distinct models occurring in the set, in order of first
    /// appearance.
    pub fn models(&self) -> &[Arc<CausalModel>] {
        &self.models
    }

    /// Index into [`models`](Self::models) of each situation's model.
    pub fn model_indices(&self) -> &[usize] {
        &self.model_of
    }
}

/// `(ψ, X=x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralExplanation {
    pub psi: CausalFormula,
    pub event: ConjunctiveEvent,
}

impl fmt::Display for GeneralExplanation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.psi, self.event)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralExplanationReport {
    pub candidate: GeneralExplanation,
    pub phi: CausalFormula,
    pub ex1: bool,
    pub ex2: bool,
    pub ex3: bool,
    pub ex4: bool,
    /// Indices of the models (see [`SituationSet::models`]) that validate `ψ`.
    pub valid_models: Vec<usize>,
    /// Indices of situations covered by EX2 where the event is not a
    /// sufficient cause.
    pub failing_situations: Vec<usize>,
    /// A pair that blocks EX3, if any.
    pub blocker: Option<GeneralExplanation>,
    pub verdict: bool,
}

/// Whether `psi` holds in every context of `model`. A formula that mentions
/// variables or values outside the model's signature is not valid there.
pub fn model_valid(model: &CausalModel, psi: &CausalFormula) -> bool {
    let Ok(compiled) = CompiledFormula::compile(psi, model.signature()) else {
        return false;
    };
    model.enumerate_contexts().iter().all(|c| compiled.holds(model, c))
}

/// A formula valid in exactly the models that behave like `model` under
/// every intervention on all but one endogenous variable.
///
/// For each context `u` it conjoins, over every endogenous `V` and every
/// setting `e` of the other endogenous variables, the atom
/// `[others<-e](V=f_V(e, u))`; the result is the disjunction of these
/// per-context descriptions, duplicates removed. A model validates it iff
/// each of its contexts responds to interventions exactly as some context of
/// `model` does.
pub fn characterizing_formula(model: &CausalModel) -> CausalFormula {
    let sig = model.signature();
    let endo = sig.endogenous();
    let mut descriptions: Vec<CausalFormula> = Vec::new();
    for ctx in model.enumerate_contexts() {
        let mut atoms = Vec::new();
        for &target in endo {
            let others: Vec<Var> = endo.iter().copied().filter(|&v| v != target).collect();
            let sizes: Vec<usize> = others.iter().map(|&v| sig.range(v).len()).collect();
            for_each_tuple(&sizes, |vals| {
                let setting: Vec<(Var, usize)> = others.iter().copied().zip(vals.iter().copied()).collect();
                let state = model.solve_state(&ctx, &setting);
                let intervention: Vec<PrimitiveEvent> = setting
                    .iter()
                    .map(|&(v, x)| PrimitiveEvent::new(sig.name(v), sig.value_name(v, x)))
                    .collect();
                let body = Expr::leaf(PrimitiveEvent::new(
                    sig.name(target),
                    sig.value_name(target, state[target.index()]),
                ));
                atoms.push(CausalFormula::intervened(intervention, body).expect("distinct targets"));
            });
        }
        let description = Expr::all(atoms);
        if !descriptions.contains(&description) {
            descriptions.push(description);
        }
    }
    Expr::any(descriptions)
}

/// Per-situation data for one candidate event: resolved literals and the
/// site used for sufficiency checks.
struct Sites<'a> {
    set_models: &'a [Arc<CausalModel>],
    model_of: &'a [usize],
    sites: Vec<Site<'a>>,
    /// Validity of each hypothesis, by formula text, per model.
    validity: HashMap<String, Vec<bool>>,
}

impl<'a> Sites<'a> {
    fn valid_models(&mut self, psi: &CausalFormula) -> Vec<bool> {
        let key = psi.to_string();
        if let Some(v) = self.validity.get(&key) {
            return v.clone();
        }
        let v: Vec<bool> = self.set_models.iter().map(|m| model_valid(m, psi)).collect();
        self.validity.insert(key, v.clone());
        v
    }

    fn lits(&self, i: usize, event: &ConjunctiveEvent) -> Result<Vec<(Var, usize)>> {
        let model = &self.set_models[self.model_of[i]];
        resolve_conjunct(event, model.signature()).map_err(mismatch)
    }

    /// Situations covered by EX2 where `event` is not sufficient.
    fn ex2_failures(&mut self, valid: &[bool], event: &ConjunctiveEvent, budget: &mut Budget) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for i in 0..self.sites.len() {
            if !valid[self.model_of[i]] {
                continue;
            }
            let lits = self.lits(i, event)?;
            let site = &mut self.sites[i];
            if site.holds(&lits) && !site.sufficient(&lits, budget)? {
                out.push(i);
            }
        }
        Ok(out)
    }
}

fn mismatch(err: Error) -> Error {
    match err {
        Error::UnknownVariable(variable) | Error::ExogenousVariable(variable) => Error::VariableMismatch { variable },
        Error::RangeViolation { variable, .. } => Error::VariableMismatch { variable },
        other => other,
    }
}

fn compile_all(models: &[Arc<CausalModel>], phi: &CausalFormula) -> Result<Vec<CompiledFormula>> {
    models
        .iter()
        .map(|m| CompiledFormula::compile(phi, m.signature()).map_err(mismatch))
        .collect()
}

fn build_sites<'a, P>(set: &'a SituationSet<P>, compiled: &'a [CompiledFormula]) -> Sites<'a> {
    Sites {
        set_models: &set.models,
        model_of: &set.model_of,
        sites: set
            .situations
            .iter()
            .zip(&set.model_of)
            .map(|(s, &m)| Site::new(&set.models[m], &s.context, &compiled[m]))
            .collect(),
        validity: HashMap::new(),
    }
}

fn superset(a: &[bool], b: &[bool]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| x || !y)
}

fn hypothesis_set(psi: &CausalFormula, hypotheses: &[CausalFormula]) -> Result<Vec<CausalFormula>> {
    if hypotheses.is_empty() {
        return Err(Error::EmptyHypothesisSet);
    }
    let mut out: Vec<CausalFormula> = Vec::new();
    for h in hypotheses.iter().chain(std::iter::once(psi)) {
        if !out.contains(h) {
            out.push(h.clone());
        }
    }
    Ok(out)
}

struct Outcome {
    ex1: bool,
    ex4: bool,
    valid: Vec<bool>,
    failing: Vec<usize>,
    blocker: Option<GeneralExplanation>,
}

fn check_in(
    sites: &mut Sites<'_>,
    set_len: usize,
    candidate: &GeneralExplanation,
    hypotheses: &[CausalFormula],
    budget: &mut Budget,
) -> Result<Outcome> {
    let ex1 = sites.sites.iter().all(|s| s.phi_holds);
    let mut holds = Vec::with_capacity(set_len);
    for i in 0..set_len {
        let lits = sites.lits(i, &candidate.event)?;
        holds.push(sites.sites[i].holds(&lits));
    }
    let ex4 = holds.iter().any(|&h| h) && holds.iter().any(|&h| !h);
    let valid = sites.valid_models(&candidate.psi);
    let failing = sites.ex2_failures(&valid, &candidate.event, budget)?;

    // EX3: a pair (ψ', X'=x') whose ψ' is valid in at least the same models,
    // with X' ⊆ X, that differs from the candidate in its valid set or its
    // event and satisfies EX2. Hypotheses equivalent to ψ with the same event
    // are the same explanation and do not block.
    let n = candidate.event.len();
    let mut blocker = None;
    'outer: for psi2 in hypotheses {
        let valid2 = sites.valid_models(psi2);
        if !superset(&valid2, &valid) {
            continue;
        }
        let widths: Vec<usize> = if valid2 == valid {
            (0..n).collect()
        } else {
            (0..=n).collect()
        };
        for width in widths {
            let mut subsets = Vec::new();
            for_each_combination(n, width, |idx| subsets.push(idx.to_vec()));
            for idx in subsets {
                let sub = candidate.event.subset(&idx);
                if sites.ex2_failures(&valid2, &sub, budget)?.is_empty() {
                    blocker = Some(GeneralExplanation {
                        psi: psi2.clone(),
                        event: sub,
                    });
                    break 'outer;
                }
            }
        }
    }
    Ok(Outcome {
        ex1,
        ex4,
        valid,
        failing,
        blocker,
    })
}

/// Checks EX1 to EX4 for `(ψ, X=x)` against a set of situations. `ψ` is
/// added to `hypotheses` if missing.
pub fn check_general_explanation<P: Probability>(
    set: &SituationSet<P>,
    candidate: &GeneralExplanation,
    phi: &CausalFormula,
    hypotheses: &[CausalFormula],
    budget: &mut Budget,
) -> Result<GeneralExplanationReport> {
    if candidate.event.is_empty() {
        return Err(Error::EmptyCandidate);
    }
    let hypotheses = hypothesis_set(&candidate.psi, hypotheses)?;
    let compiled = compile_all(&set.models, phi)?;
    let mut sites = build_sites(set, &compiled);
    let Outcome {
        ex1,
        ex4,
        valid,
        failing,
        blocker,
    } = check_in(&mut sites, set.situations.len(), candidate, &hypotheses, budget)?;
    let ex2 = failing.is_empty();
    let ex3 = blocker.is_none();
    Ok(GeneralExplanationReport {
        candidate: candidate.clone(),
        phi: phi.clone(),
        ex1,
        ex2,
        ex3,
        ex4,
        valid_models: (0..valid.len()).filter(|&i| valid[i]).collect(),
        failing_situations: failing,
        blocker,
        verdict: ex1 && ex2 && ex3 && ex4,
    })
}

/// All general explanations `(ψ, X=x)` with `ψ` drawn from `hypotheses` and
/// at most `max_width` conjuncts over variables endogenous in every model.
/// Conjuncts over the explanandum's variables are skipped unless
/// `include_explanandum` is set. Results follow the hypothesis order, then
/// the candidate order of [`crate::enumerate_explanations`].
pub fn enumerate_general_explanations<P: Probability>(
    set: &SituationSet<P>,
    phi: &CausalFormula,
    hypotheses: &[CausalFormula],
    max_width: usize,
    include_explanandum: bool,
    budget: &mut Budget,
) -> Result<Vec<GeneralExplanation>> {
    if max_width == 0 {
        return Err(Error::ZeroWidth);
    }
    if hypotheses.is_empty() {
        return Err(Error::EmptyHypothesisSet);
    }
    let compiled = compile_all(&set.models, phi)?;
    let mut sites = build_sites(set, &compiled);
    if !sites.sites.iter().all(|s| s.phi_holds) {
        return Ok(Vec::new());
    }

    // Candidate variables: endogenous in the first model and in every other.
    let first = set.models[0].signature();
    let excluded = phi.variables();
    let pool: Vec<&str> = first
        .endogenous()
        .iter()
        .map(|&v| first.name(v))
        .filter(|name| {
            set.models.iter().all(|m| {
                let sig = m.signature();
                sig.lookup(name).is_some_and(|v| sig.endogenous().contains(&v))
            })
        })
        .filter(|name| include_explanandum || !excluded.contains(name))
        .collect();

    // Events are compared by name; collect the value names observed in each
    // situation for every combination of pool variables.
    let mut events: Vec<ConjunctiveEvent> = Vec::new();
    for width in 1..=max_width.min(pool.len()) {
        let mut combos = Vec::new();
        for_each_combination(pool.len(), width, |idx| combos.push(idx.to_vec()));
        for idx in combos {
            let names: Vec<&str> = idx.iter().map(|&i| pool[i]).collect();
            let mut seen: Vec<Vec<String>> = Vec::new();
            for (s, &m) in set.situations.iter().zip(&set.model_of) {
                let sig = set.models[m].signature();
                let vars: Vec<Var> = names.iter().map(|n| sig.lookup(n).expect("in pool")).collect();
                let state = set.models[m].solve_state(&s.context, &[]);
                let lits = observed_values(&[&state], &vars);
                for lit in lits {
                    let vals: Vec<String> = lit.iter().map(|&(v, x)| sig.value_name(v, x).to_owned()).collect();
                    if !seen.contains(&vals) {
                        seen.push(vals);
                    }
                }
            }
            seen.sort_by(|a, b| {
                let pos = |vals: &Vec<String>| -> Vec<usize> {
                    names
                        .iter()
                        .zip(vals)
                        .map(|(n, v)| {
                            let var = first.lookup(n).expect("in pool");
                            first.range(var).position(v).unwrap_or(usize::MAX)
                        })
                        .collect()
                };
                pos(a).cmp(&pos(b)).then_with(|| a.cmp(b))
            });
            for vals in seen {
                let event = ConjunctiveEvent::from_pairs(names.iter().copied().zip(vals.iter().map(String::as_str)))?;
                events.push(event);
            }
        }
    }

    let mut ordered: Vec<CausalFormula> = Vec::new();
    for h in hypotheses {
        if !ordered.contains(h) {
            ordered.push(h.clone());
        }
    }
    let mut out = Vec::new();
    for psi in &ordered {
        for event in &events {
            let candidate = GeneralExplanation {
                psi: psi.clone(),
                event: event.clone(),
            };
            let o = check_in(&mut sites, set.situations.len(), &candidate, &ordered, budget)?;
            if o.ex1 && o.ex4 && o.failing.is_empty() && o.blocker.is_none() {
                out.push(candidate);
            }
        }
    }
    Ok(out)
}

/// A causal model with a probability on its contexts.
#[derive(Debug, Clone)]
pub struct ProbabilisticCausalModel<P> {
    model: Arc<CausalModel>,
    contexts: Vec<Context>,
    weights: Vec<P>,
}

impl<P: Probability> ProbabilisticCausalModel<P> {
    /// Contexts not listed get weight zero.
    pub fn new(model: Arc<CausalModel>, weighted: Vec<(Context, P)>) -> Result<Self> {
        let sig = model.signature();
        let contexts = model.enumerate_contexts();
        let mut weights = vec![P::zero(); contexts.len()];
        let mut listed = vec![false; contexts.len()];
        for (c, w) in weighted {
            sig.check_context(&c)?;
            let i = contexts.iter().position(|k| *k == c).expect("checked context");
            if listed[i] {
                return Err(Error::DuplicateContext(sig.display_context(&c).to_string()));
            }
            listed[i] = true;
            weights[i] = w;
        }
        check_distribution(&weights)?;
        Ok(ProbabilisticCausalModel {
            model,
            contexts,
            weights,
        })
    }

    pub fn uniform(model: Arc<CausalModel>) -> Self {
        let contexts = model.enumerate_contexts();
        let n = contexts.len() as i64;
        let weights = vec![P::from_ratio(1, n); contexts.len()];
        ProbabilisticCausalModel {
            model,
            contexts,
            weights,
        }
    }

    pub fn model(&self) -> &Arc<CausalModel> {
        &self.model
    }

    /// All contexts in canonical order, each with its weight.
    pub fn distribution(&self) -> impl Iterator<Item = (&Context, &P)> {
        self.contexts.iter().zip(&self.weights)
    }

    /// The prior over all contexts, for use with explanatory power.
    pub fn prior(&self) -> crate::explanation::PriorState<P> {
        crate::explanation::PriorState::new(
            Arc::clone(&self.model),
            self.distribution().map(|(c, w)| (c.clone(), w.clone())).collect(),
        )
        .expect("distribution already checked")
    }
}

/// Total weight of the contexts satisfying `phi`.
pub fn probability_of_formula<P: Probability>(pmodel: &ProbabilisticCausalModel<P>, phi: &CausalFormula) -> Result<P> {
    let compiled = CompiledFormula::compile(phi, pmodel.model.signature())?;
    let hits: Vec<&P> = pmodel
        .distribution()
        .filter(|(c, _)| compiled.holds(&pmodel.model, c))
        .map(|(_, w)| w)
        .collect();
    Ok(sum(hits.into_iter()))
}

/// Total weight of the contexts where `candidate` is an actual cause of
/// `phi`.
pub fn probability_of_cause<P: Probability>(
    pmodel: &ProbabilisticCausalModel<P>,
    candidate: &ConjunctiveEvent,
    phi: &CausalFormula,
    budget: &mut Budget,
) -> Result<P> {
    if candidate.is_empty() {
        return Err(Error::EmptyCandidate);
    }
    let model = &*pmodel.model;
    let compiled = CompiledFormula::compile(phi, model.signature())?;
    let lits = resolve_conjunct(candidate, model.signature())?;
    let mut total = P::zero();
    for (c, w) in pmodel.distribution() {
        let checker = Checker::new(model, c, &compiled);
        if checker.sufficient(&lits, budget)?.is_none() {
            continue;
        }
        let mut minimal = true;
        for mask in 1u64..(1 << lits.len()) - 1 {
            if checker.sufficient(&subset(&lits, mask), budget)?.is_some() {
                minimal = false;
                break;
            }
        }
        if minimal {
            total = total + w.clone();
        }
    }
    Ok(total)
}
