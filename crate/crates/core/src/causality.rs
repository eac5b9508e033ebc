//! Sufficient and actual causes.
//!
//! `X=x` is a sufficient cause of `φ` in `(M, u)` when
//!
//! * **AC1**: both `X=x` and `φ` hold in `(M, u)`, and
//! * **AC2**: some partition `(Z, W)` of the endogenous variables with
//!   `X ⊆ Z`, and some setting `(x', w')` of `(X, W)`, give
//!   (a) `[X<-x', W<-w']¬φ`, and (b) `[X<-x, W'<-w', Z'<-z*]φ` for every
//!   `W' ⊆ W` and `Z' ⊆ Z`, where `z*` are the actual values in `(M, u)`.
//!
//! It is an actual cause when, in addition, **AC3** holds: no proper nonempty
//! sub-conjunction satisfies AC1 and AC2.
//!
//! The witness search is exhaustive. Partitions are visited by increasing
//! `|W|` and then lexicographically over the canonical variable order; for
//! each partition the settings `w'` are visited in range order and, for each
//! `w'`, the first `x'` satisfying (a) is taken. Clause (b) does not depend on
//! `x'`, so it is checked once per `w'`. `Z'` ranges over subsets of `Z \ X`;
//! pinning a member of `X` to its actual value would repeat `X<-x`.
//!
//! Every formula evaluation is charged to a [`Budget`].

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::eval::resolve_conjunct;
use crate::formula::{CausalFormula, CompiledFormula, ConjunctiveEvent};
use crate::model::{for_each_tuple, Assignment, CausalModel, Context, Situation, Var};

/// Default number of formula evaluations a single query may perform.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Counter of formula evaluations with a hard limit.
#[derive(Debug, Clone)]
pub struct Budget {
    limit: u64,
    visited: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, visited: 0 }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    pub fn visited(&self) -> u64 {
        self.visited
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub(crate) fn tick(&mut self) -> Result<()> {
        if self.visited >= self.limit {
            return Err(Error::SearchBudgetExceeded {
                limit: self.limit,
                visited: self.visited,
            });
        }
        self.visited += 1;
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}

/// `(Z, W)`: a split of the endogenous variables, candidate variables in `Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub zside: Vec<String>,
    pub wside: Vec<String>,
}

/// Data that makes AC2 true: the partition, the alternative setting `x'` of
/// the candidate, the contingency `w'`, and the actual values `z*` of `Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ac2Witness {
    pub partition: Partition,
    pub alt_x: Assignment,
    pub alt_w: Assignment,
    pub baseline_z: Assignment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CauseClass {
    NotACause,
    SufficientCause,
    ActualCause,
}

impl fmt::Display for CauseClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CauseClass::NotACause => "not-a-cause",
            CauseClass::SufficientCause => "sufficient-cause",
            CauseClass::ActualCause => "actual-cause",
        })
    }
}

/// Clause-by-clause result of a causality check. `ac2` is only searched
/// when AC1 holds.
#[derive(Debug, Clone, PartialEq)]
pub struct CauseVerdict {
    pub candidate: ConjunctiveEvent,
    pub phi: CausalFormula,
    pub ac1: bool,
    pub ac2: Option<Ac2Witness>,
    pub ac3: bool,
    pub class: CauseClass,
}

impl CauseVerdict {
    pub fn is_sufficient(&self) -> bool {
        self.ac1 && self.ac2.is_some()
    }

    pub fn is_actual(&self) -> bool {
        self.class == CauseClass::ActualCause
    }
}

#[derive(Debug, Clone)]
pub(crate) struct RawWitness {
    wside: Vec<Var>,
    alt_x: Vec<(Var, usize)>,
    alt_w: Vec<(Var, usize)>,
}

/// Causality queries against one situation and one explanandum.
pub(crate) struct Checker<'a> {
    model: &'a CausalModel,
    context: &'a Context,
    phi: &'a CompiledFormula,
    actual: Vec<usize>,
}

impl<'a> Checker<'a> {
    pub(crate) fn new(model: &'a CausalModel, context: &'a Context, phi: &'a CompiledFormula) -> Self {
        let actual = model.solve_state(context, &[]);
        Checker {
            model,
            context,
            phi,
            actual,
        }
    }

    pub(crate) fn actual(&self) -> &[usize] {
        &self.actual
    }

    pub(crate) fn holds(&self, lits: &[(Var, usize)]) -> bool {
        lits.iter().all(|&(v, x)| self.actual[v.index()] == x)
    }

    fn eval(&self, overrides: &[(Var, usize)], budget: &mut Budget) -> Result<bool> {
        budget.tick()?;
        Ok(self.phi.eval_under(self.model, self.context, overrides))
    }

    pub(crate) fn ac1(&self, lits: &[(Var, usize)], budget: &mut Budget) -> Result<bool> {
        if !self.holds(lits) {
            return Ok(false);
        }
        self.eval(&[], budget)
    }

    /// AC1 and AC2 together.
    pub(crate) fn sufficient(&self, lits: &[(Var, usize)], budget: &mut Budget) -> Result<Option<RawWitness>> {
        if !self.ac1(lits, budget)? {
            return Ok(None);
        }
        self.ac2(lits, budget)
    }

    pub(crate) fn ac2(&self, lits: &[(Var, usize)], budget: &mut Budget) -> Result<Option<RawWitness>> {
        if lits.is_empty() {
            // (a) and (b) with W' = W would need both ¬φ and φ under W <- w'
            return Ok(None);
        }
        let sig = self.model.signature();
        let x_vars: Vec<Var> = lits.iter().map(|&(v, _)| v).collect();
        let rest: Vec<Var> = sig
            .endogenous()
            .iter()
            .copied()
            .filter(|v| !x_vars.contains(v))
            .collect();
        let x_sizes: Vec<usize> = x_vars.iter().map(|&v| sig.range(v).len()).collect();
        let x_actual: Vec<usize> = lits.iter().map(|&(_, x)| x).collect();

        for size in 0..=rest.len() {
            let mut found = None;
            let mut failure = None;
            for_each_combination(rest.len(), size, |w_idx| {
                if found.is_some() || failure.is_some() {
                    return;
                }
                let wside: Vec<Var> = w_idx.iter().map(|&i| rest[i]).collect();
                let z_rest: Vec<Var> = rest.iter().copied().filter(|v| !wside.contains(v)).collect();
                match self.search_partition(lits, &x_sizes, &x_actual, &wside, &z_rest, budget) {
                    Ok(Some(w)) => found = Some(w),
                    Ok(None) => {}
                    Err(e) => failure = Some(e),
                }
            });
            if let Some(e) = failure {
                return Err(e);
            }
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    fn search_partition(
        &self,
        lits: &[(Var, usize)],
        x_sizes: &[usize],
        x_actual: &[usize],
        wside: &[Var],
        z_rest: &[Var],
        budget: &mut Budget,
    ) -> Result<Option<RawWitness>> {
        let sig = self.model.signature();
        let w_sizes: Vec<usize> = wside.iter().map(|&v| sig.range(v).len()).collect();
        let mut result = Ok(None);
        for_each_tuple(&w_sizes, |w_vals| {
            if !matches!(result, Ok(None)) {
                return;
            }
            let alt_w: Vec<(Var, usize)> = wside.iter().copied().zip(w_vals.iter().copied()).collect();
            let alt_x = match self.clause_a(lits, x_sizes, x_actual, &alt_w, budget) {
                Ok(Some(x)) => x,
                Ok(None) => return,
                Err(e) => {
                    result = Err(e);
                    return;
                }
            };
            match self.clause_b(lits, &alt_w, z_rest, budget) {
                Ok(true) => {
                    result = Ok(Some(RawWitness {
                        wside: wside.to_vec(),
                        alt_x,
                        alt_w,
                    }))
                }
                Ok(false) => {}
                Err(e) => result = Err(e),
            }
        });
        result
    }

    /// First `x' != x` with `[X<-x', W<-w']¬φ`.
    fn clause_a(
        &self,
        lits: &[(Var, usize)],
        x_sizes: &[usize],
        x_actual: &[usize],
        alt_w: &[(Var, usize)],
        budget: &mut Budget,
    ) -> Result<Option<Vec<(Var, usize)>>> {
        let mut result = Ok(None);
        let mut overrides = Vec::with_capacity(lits.len() + alt_w.len());
        for_each_tuple(x_sizes, |x_vals| {
            if !matches!(result, Ok(None)) || x_vals == x_actual {
                return;
            }
            overrides.clear();
            overrides.extend(lits.iter().zip(x_vals).map(|(&(v, _), &x)| (v, x)));
            overrides.extend_from_slice(alt_w);
            match self.eval(&overrides, budget) {
                Ok(false) => result = Ok(Some(overrides[..lits.len()].to_vec())),
                Ok(true) => {}
                Err(e) => result = Err(e),
            }
        });
        result
    }

    /// `[X<-x, W'<-w', Z'<-z*]φ` for all `W' ⊆ W`, `Z' ⊆ Z \ X`.
    fn clause_b(
        &self,
        lits: &[(Var, usize)],
        alt_w: &[(Var, usize)],
        z_rest: &[Var],
        budget: &mut Budget,
    ) -> Result<bool> {
        let mut overrides = Vec::with_capacity(lits.len() + alt_w.len() + z_rest.len());
        for w_mask in 0u64..(1 << alt_w.len()) {
            for z_mask in 0u64..(1 << z_rest.len()) {
                overrides.clear();
                overrides.extend_from_slice(lits);
                overrides.extend(
                    alt_w
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| w_mask & (1 << i) != 0)
                        .map(|(_, &b)| b),
                );
                overrides.extend(
                    z_rest
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| z_mask & (1 << i) != 0)
                        .map(|(_, &v)| (v, self.actual[v.index()])),
                );
                if !self.eval(&overrides, budget)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub(crate) fn witness(&self, lits: &[(Var, usize)], raw: &RawWitness) -> Ac2Witness {
        let sig = self.model.signature();
        let zside: Vec<Var> = sig
            .endogenous()
            .iter()
            .copied()
            .filter(|v| !raw.wside.contains(v))
            .collect();
        let _ = lits;
        Ac2Witness {
            partition: Partition {
                zside: zside.iter().map(|&v| sig.name(v).to_owned()).collect(),
                wside: raw.wside.iter().map(|&v| sig.name(v).to_owned()).collect(),
            },
            alt_x: Assignment::from_indexed(sig, raw.alt_x.iter().copied()),
            alt_w: Assignment::from_indexed(sig, raw.alt_w.iter().copied()),
            baseline_z: Assignment::from_indexed(sig, zside.iter().map(|&v| (v, self.actual[v.index()]))),
        }
    }

    /// Full verdict with AC3 over all proper nonempty sub-conjunctions.
    pub(crate) fn verdict(
        &self,
        candidate: &ConjunctiveEvent,
        phi: &CausalFormula,
        lits: &[(Var, usize)],
        budget: &mut Budget,
    ) -> Result<CauseVerdict> {
        let ac1 = self.ac1(lits, budget)?;
        let ac2 = if ac1 { self.ac2(lits, budget)? } else { None };
        let mut ac3 = true;
        for mask in 1u64..(1 << lits.len()) - 1 {
            let sub: Vec<(Var, usize)> = subset(lits, mask);
            if self.sufficient(&sub, budget)?.is_some() {
                ac3 = false;
                break;
            }
        }
        let class = classify(ac1, ac2.is_some(), ac3);
        Ok(CauseVerdict {
            candidate: candidate.clone(),
            phi: phi.clone(),
            ac1,
            ac2: ac2.map(|raw| self.witness(lits, &raw)),
            ac3,
            class,
        })
    }
}

fn classify(ac1: bool, ac2: bool, ac3: bool) -> CauseClass {
    match (ac1 && ac2, ac3) {
        (true, true) => CauseClass::ActualCause,
        (true, false) => CauseClass::SufficientCause,
        _ => CauseClass::NotACause,
    }
}

pub(crate) fn subset<T: Copy>(items: &[T], mask: u64) -> Vec<T> {
    items
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, &t)| t)
        .collect()
}

/// Calls `f` with each `k`-subset of `0..n` as sorted indices, in
/// lexicographic order.
pub(crate) fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                break;
            }
            if i == 0 {
                return;
            }
        }
        if idx[i] >= n - k + i {
            return;
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

struct Prepared {
    phi: CompiledFormula,
    lits: Vec<(Var, usize)>,
}

fn prepare(situation: &Situation, candidate: &ConjunctiveEvent, phi: &CausalFormula) -> Result<Prepared> {
    let sig = situation.model.signature();
    Ok(Prepared {
        phi: CompiledFormula::compile(phi, sig)?,
        lits: resolve_conjunct(candidate, sig)?,
    })
}

/// AC1: the candidate and `phi` both hold in the situation.
pub fn check_ac1(situation: &Situation, candidate: &ConjunctiveEvent, phi: &CausalFormula) -> Result<bool> {
    let p = prepare(situation, candidate, phi)?;
    let checker = Checker::new(&situation.model, &situation.context, &p.phi);
    checker.ac1(&p.lits, &mut Budget::unlimited())
}

/// First AC2 witness in canonical search order, if any.
pub fn find_ac2_witness(
    situation: &Situation,
    candidate: &ConjunctiveEvent,
    phi: &CausalFormula,
    budget: &mut Budget,
) -> Result<Option<Ac2Witness>> {
    let p = prepare(situation, candidate, phi)?;
    let checker = Checker::new(&situation.model, &situation.context, &p.phi);
    Ok(checker.ac2(&p.lits, budget)?.map(|raw| checker.witness(&p.lits, &raw)))
}

/// Re-checks clauses (a) and (b) of a witness by direct evaluation.
pub fn verify_witness(
    situation: &Situation,
    candidate: &ConjunctiveEvent,
    phi: &CausalFormula,
    witness: &Ac2Witness,
) -> Result<bool> {
    let p = prepare(situation, candidate, phi)?;
    let sig = situation.model.signature();
    let alt_x = witness.alt_x.resolve(sig)?;
    let alt_w = witness.alt_w.resolve(sig)?;
    let z_star = witness.baseline_z.resolve(sig)?;
    let actual = situation.model.solve_state(&situation.context, &[]);
    if z_star.iter().any(|&(v, x)| actual[v.index()] != x) {
        return Ok(false);
    }
    let mut a = alt_x.clone();
    a.extend_from_slice(&alt_w);
    if p.phi.eval_under(&situation.model, &situation.context, &a) {
        return Ok(false);
    }
    for w_mask in 0u64..(1 << alt_w.len()) {
        for z_mask in 0u64..(1 << z_star.len()) {
            let mut o = p.lits.clone();
            o.extend(subset(&alt_w, w_mask));
            o.extend(subset(&z_star, z_mask));
            if !p.phi.eval_under(&situation.model, &situation.context, &o) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// AC1, AC2 and AC3 for `candidate` as a cause of `phi`.
pub fn check_actual_cause(
    situation: &Situation,
    candidate: &ConjunctiveEvent,
    phi: &CausalFormula,
    budget: &mut Budget,
) -> Result<CauseVerdict> {
    let p = prepare(situation, candidate, phi)?;
    let checker = Checker::new(&situation.model, &situation.context, &p.phi);
    checker.verdict(candidate, phi, &p.lits, budget)
}

/// Every conjunction of at most `max_width` events that is an actual cause
/// of `phi`, by width and then canonical variable order.
pub fn enumerate_actual_causes(
    situation: &Situation,
    phi: &CausalFormula,
    max_width: usize,
    budget: &mut Budget,
) -> Result<Vec<CauseVerdict>> {
    enumerate_causes(situation, phi, max_width, budget, true)
}

/// Every conjunction of at most `max_width` events that is a sufficient
/// cause of `phi` (actual causes included).
pub fn enumerate_sufficient_causes(
    situation: &Situation,
    phi: &CausalFormula,
    max_width: usize,
    budget: &mut Budget,
) -> Result<Vec<CauseVerdict>> {
    enumerate_causes(situation, phi, max_width, budget, false)
}

fn enumerate_causes(
    situation: &Situation,
    phi: &CausalFormula,
    max_width: usize,
    budget: &mut Budget,
    actual_only: bool,
) -> Result<Vec<CauseVerdict>> {
    if max_width == 0 {
        return Err(Error::ZeroWidth);
    }
    let model = &situation.model;
    let sig = model.signature();
    let compiled = CompiledFormula::compile(phi, sig)?;
    let checker = Checker::new(model, &situation.context, &compiled);
    let endo = sig.endogenous();
    // Only actual values can satisfy AC1.
    let lits_of =
        |vars: &[Var]| -> Vec<(Var, usize)> { vars.iter().map(|&v| (v, checker.actual()[v.index()])).collect() };

    let mut memo: HashMap<Vec<Var>, Option<RawWitness>> = HashMap::new();
    let mut out = Vec::new();
    for width in 1..=max_width.min(endo.len()) {
        let mut combos = Vec::new();
        for_each_combination(endo.len(), width, |idx| {
            combos.push(idx.iter().map(|&i| endo[i]).collect::<Vec<Var>>())
        });
        for vars in combos {
            let lits = lits_of(&vars);
            let raw = checker.sufficient(&lits, budget)?;
            memo.insert(vars.clone(), raw.clone());
            let Some(raw) = raw else { continue };
            let mut ac3 = true;
            for mask in 1u64..(1 << vars.len()) - 1 {
                let sub = subset(&vars, mask);
                let hit = match memo.get(&sub) {
                    Some(r) => r.is_some(),
                    None => {
                        let r = checker.sufficient(&lits_of(&sub), budget)?;
                        let hit = r.is_some();
                        memo.insert(sub, r);
                        hit
                    }
                };
                if hit {
                    ac3 = false;
                    break;
                }
            }
            if actual_only && !ac3 {
                continue;
            }
            let candidate =
                ConjunctiveEvent::from_pairs(lits.iter().map(|&(v, x)| (sig.name(v), sig.value_name(v, x))))?;
            out.push(CauseVerdict {
                candidate,
                phi: phi.clone(),
                ac1: true,
                ac2: Some(checker.witness(&lits, &raw)),
                ac3,
                class: classify(true, true, ac3),
            });
        }
    }
    Ok(out)
}
