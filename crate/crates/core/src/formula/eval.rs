use super::{CausalFormula, CausalLeaf, ConjunctiveEvent, Expr};
use crate::error::Result;
use crate::model::{CausalModel, Context, Signature, Situation, Var};

#[derive(Debug, Clone)]
enum Leaf {
    Event(Var, usize),
    Atom {
        overrides: Vec<(Var, usize)>,
        body: Expr<(Var, usize)>,
    },
}

/// A formula with names resolved against one signature.
///
/// Evaluation under an outer intervention `[X<-x]` composes with the
/// formula's own atoms: `[X<-x]([Y<-y]ψ)` is evaluated in `(M_{X<-x})_{Y<-y}`,
/// so inner bindings win on shared variables.
#[derive(Debug, Clone)]
pub struct CompiledFormula {
    expr: Expr<Leaf>,
}

impl CompiledFormula {
    pub fn compile(formula: &CausalFormula, sig: &Signature) -> Result<Self> {
        formula.check(sig)?;
        let expr = formula.try_map(&mut |leaf| -> Result<Leaf> {
            Ok(match leaf {
                CausalLeaf::Event(e) => {
                    let (var, value) = sig.endogenous_binding(&e.variable, &e.value)?;
                    Leaf::Event(var, value)
                }
                CausalLeaf::Intervened { intervention, body } => Leaf::Atom {
                    overrides: intervention
                        .iter()
                        .map(|b| sig.endogenous_binding(&b.variable, &b.value))
                        .collect::<Result<_>>()?,
                    body: body.try_map(&mut |e| sig.endogenous_binding(&e.variable, &e.value))?,
                },
            })
        })?;
        Ok(CompiledFormula { expr })
    }

    /// Truth of the formula in `(model, context)` after pinning `outer`.
    pub(crate) fn eval_under(&self, model: &CausalModel, context: &Context, outer: &[(Var, usize)]) -> bool {
        let base = model.solve_state(context, outer);
        self.eval_state(model, context, outer, &base)
    }

    /// Like [`eval_under`](Self::eval_under) with the solved state for
    /// `outer` already at hand.
    pub(crate) fn eval_state(
        &self,
        model: &CausalModel,
        context: &Context,
        outer: &[(Var, usize)],
        base: &[usize],
    ) -> bool {
        let mut scratch: Vec<usize> = Vec::new();
        let mut combined: Vec<(Var, usize)> = Vec::new();
        self.expr.eval_with(&mut |leaf| match leaf {
            Leaf::Event(var, value) => base[var.index()] == *value,
            Leaf::Atom { overrides, body } => {
                combined.clear();
                combined.extend_from_slice(outer);
                combined.extend_from_slice(overrides);
                scratch.resize(base.len(), 0);
                model.solve_into(context, &combined, &mut scratch);
                body.eval_with(&mut |&(var, value)| scratch[var.index()] == value)
            }
        })
    }

    pub fn holds(&self, model: &CausalModel, context: &Context) -> bool {
        self.eval_under(model, context, &[])
    }
}

/// `(M, u) |= formula`.
pub fn evaluate(situation: &Situation, formula: &CausalFormula) -> Result<bool> {
    let compiled = CompiledFormula::compile(formula, situation.model.signature())?;
    Ok(compiled.holds(&situation.model, &situation.context))
}

/// Whether the solved state of the situation assigns every listed value.
pub fn holds_conjunct(situation: &Situation, event: &ConjunctiveEvent) -> Result<bool> {
    let lits = resolve_conjunct(event, situation.model.signature())?;
    let state = situation.model.solve_state(&situation.context, &[]);
    Ok(lits.iter().all(|&(v, x)| state[v.index()] == x))
}

pub(crate) fn resolve_conjunct(event: &ConjunctiveEvent, sig: &Signature) -> Result<Vec<(Var, usize)>> {
    event
        .events()
        .iter()
        .map(|e| sig.endogenous_binding(&e.variable, &e.value))
        .collect()
}
