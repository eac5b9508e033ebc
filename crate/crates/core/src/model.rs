//! Finite recursive structural causal models.
//!
//! A [`CausalModel`] pairs a [`Signature`] (exogenous and endogenous
//! variables with finite ranges) with one extensional equation table per
//! endogenous variable. Models are validated once on construction: every
//! table must be total and well-ranged and the endogenous dependency graph
//! must be acyclic, so every context has exactly one solution.
//!
//! Values are opaque symbols. Internally a value is its position in the
//! variable's [`Range`], and a variable is its position in the signature.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Position of a variable in its [`Signature`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub(crate) usize);

impl Var {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    Exogenous,
    Endogenous,
}

/// Ordered, nonempty, duplicate-free list of symbolic values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Range {
    values: Vec<String>,
}

impl Range {
    fn new(variable: &str, values: Vec<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyRange(variable.to_owned()));
        }
        let mut seen = HashSet::new();
        for v in &values {
            if !seen.insert(v.as_str()) {
                return Err(Error::DuplicateValue {
                    variable: variable.to_owned(),
                    value: v.clone(),
                });
            }
        }
        Ok(Range { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[String] {
        &self.values
    }

    pub fn value(&self, index: usize) -> &str {
        &self.values[index]
    }

    pub fn position(&self, value: &str) -> Option<usize> {
        self.values.iter().position(|v| v == value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    name: String,
    kind: VarKind,
    range: Range,
}

impl Variable {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> VarKind {
        self.kind
    }

    pub fn range(&self) -> &Range {
        &self.range
    }
}

/// Variables of a model, in declaration order.
#[derive(Debug, Clone)]
pub struct Signature {
    vars: Vec<Variable>,
    by_name: HashMap<String, Var>,
    exogenous: Vec<Var>,
    endogenous: Vec<Var>,
}

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars
    }
}

impl Eq for Signature {}

#[derive(Debug, Default)]
pub struct SignatureBuilder {
    decls: Vec<(String, VarKind, Vec<String>)>,
}

impl SignatureBuilder {
    pub fn exogenous<S, I, V>(mut self, name: S, values: I) -> Self
    where
        S: Into<String>,
        I: IntoIterator<Item = V>,
        V: Into<String>,
    {
        self.decls.push((
            name.into(),
            VarKind::Exogenous,
            values.into_iter().map(Into::into).collect(),
        ));
        self
    }

    pub fn endogenous<S, I, V>(mut self, name: S, values: I) -> Self
    where
        S: Into<String>,
        I: IntoIterator<Item = V>,
        V: Into<String>,
    {
        self.decls.push((
            name.into(),
            VarKind::Endogenous,
            values.into_iter().map(Into::into).collect(),
        ));
        self
    }

    pub fn build(self) -> Result<Signature> {
        let mut vars = Vec::with_capacity(self.decls.len());
        let mut by_name = HashMap::new();
        let mut exogenous = Vec::new();
        let mut endogenous = Vec::new();
        for (i, (name, kind, values)) in self.decls.into_iter().enumerate() {
            if name.is_empty() {
                return Err(Error::UnknownVariable(name));
            }
            if by_name.insert(name.clone(), Var(i)).is_some() {
                return Err(Error::DuplicateVariable(name));
            }
            let range = Range::new(&name, values)?;
            match kind {
                VarKind::Exogenous => exogenous.push(Var(i)),
                VarKind::Endogenous => endogenous.push(Var(i)),
            }
            vars.push(Variable { name, kind, range });
        }
        if endogenous.is_empty() {
            return Err(Error::NoEndogenousVariables);
        }
        Ok(Signature {
            vars,
            by_name,
            exogenous,
            endogenous,
        })
    }
}

impl Signature {
    pub fn builder() -> SignatureBuilder {
        SignatureBuilder::default()
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn exogenous(&self) -> &[Var] {
        &self.exogenous
    }

    pub fn endogenous(&self) -> &[Var] {
        &self.endogenous
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        self.by_name.get(name).copied()
    }

    pub fn var(&self, name: &str) -> Result<Var> {
        self.lookup(name).ok_or_else(|| Error::UnknownVariable(name.to_owned()))
    }

    pub fn variable(&self, var: Var) -> &Variable {
        &self.vars[var.0]
    }

    pub fn name(&self, var: Var) -> &str {
        &self.vars[var.0].name
    }

    pub fn kind(&self, var: Var) -> VarKind {
        self.vars[var.0].kind
    }

    pub fn range(&self, var: Var) -> &Range {
        &self.vars[var.0].range
    }

    pub fn value_name(&self, var: Var, value: usize) -> &str {
        self.vars[var.0].range.value(value)
    }

    pub fn value_index(&self, var: Var, value: &str) -> Result<usize> {
        self.range(var).position(value).ok_or_else(|| Error::RangeViolation {
            variable: self.name(var).to_owned(),
            value: value.to_owned(),
        })
    }

    /// Resolves `name = value` against an endogenous variable.
    pub fn endogenous_binding(&self, name: &str, value: &str) -> Result<(Var, usize)> {
        let var = self.var(name)?;
        if self.kind(var) != VarKind::Endogenous {
            return Err(Error::ExogenousVariable(name.to_owned()));
        }
        Ok((var, self.value_index(var, value)?))
    }

    /// Builds a context from `(name, value)` pairs, one per exogenous variable.
    pub fn context<'a, I>(&self, pairs: I) -> Result<Context>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut slots: Vec<Option<usize>> = vec![None; self.exogenous.len()];
        for (name, value) in pairs {
            let var = self.var(name)?;
            if self.kind(var) != VarKind::Exogenous {
                return Err(Error::EndogenousInContext(name.to_owned()));
            }
            let slot = self
                .exogenous
                .iter()
                .position(|&v| v == var)
                .expect("exogenous var is listed");
            if slots[slot].is_some() {
                return Err(Error::DuplicateVariable(name.to_owned()));
            }
            slots[slot] = Some(self.value_index(var, value)?);
        }
        let values = slots
            .into_iter()
            .zip(&self.exogenous)
            .map(|(slot, &var)| slot.ok_or_else(|| Error::IncompleteContext(self.name(var).to_owned())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Context { values })
    }

    /// Parses `U1=v1, U2=v2`.
    pub fn parse_context(&self, text: &str) -> Result<Context> {
        let mut pairs = Vec::new();
        for (i, part) in text.split(',').enumerate() {
            let part = part.trim();
            if part.is_empty() && self.exogenous.is_empty() && i == 0 {
                continue;
            }
            let (name, value) = part.split_once('=').ok_or_else(|| Error::Syntax {
                column: 1,
                message: format!("expected NAME=VALUE, found `{part}`"),
            })?;
            pairs.push((name.trim(), value.trim()));
        }
        self.context(pairs)
    }

    pub fn display_context<'a>(&'a self, context: &'a Context) -> impl fmt::Display + 'a {
        DisplayContext { sig: self, context }
    }

    pub(crate) fn check_context(&self, context: &Context) -> Result<()> {
        if context.values.len() != self.exogenous.len() {
            return Err(Error::IncompleteContext(format!(
                "expected {} exogenous values, found {}",
                self.exogenous.len(),
                context.values.len()
            )));
        }
        for (&var, &value) in self.exogenous.iter().zip(&context.values) {
            if value >= self.range(var).len() {
                return Err(Error::RangeViolation {
                    variable: self.name(var).to_owned(),
                    value: value.to_string(),
                });
            }
        }
        Ok(())
    }
}

struct DisplayContext<'a> {
    sig: &'a Signature,
    context: &'a Context,
}

impl fmt::Display for DisplayContext<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (&var, &value)) in self.sig.exogenous.iter().zip(&self.context.values).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}={}", self.sig.name(var), self.sig.value_name(var, value))?;
        }
        Ok(())
    }
}

/// One value per exogenous variable, stored as range positions in the
/// signature's exogenous order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Context {
    values: Vec<usize>,
}

impl Context {
    pub fn values(&self) -> &[usize] {
        &self.values
    }
}

/// Named bindings of endogenous variables, used both for intervention
/// settings and for solved states.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Assignment {
    bindings: Vec<(String, String)>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I, K, V>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        let mut a = Assignment::new();
        for (k, v) in pairs {
            a.insert(k, v);
        }
        a
    }

    /// Binds `name`, replacing any earlier binding of the same variable.
    pub fn insert(&mut self, name: impl Into<String>, value: impl Into<String>) {
        let name = name.into();
        let value = value.into();
        match self.bindings.iter_mut().find(|(n, _)| *n == name) {
            Some(slot) => slot.1 = value,
            None => self.bindings.push((name, value)),
        }
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.bindings.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.bindings.iter().map(|(n, v)| (n.as_str(), v.as_str()))
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub(crate) fn from_indexed(sig: &Signature, pairs: impl IntoIterator<Item = (Var, usize)>) -> Self {
        Assignment {
            bindings: pairs
                .into_iter()
                .map(|(var, value)| (sig.name(var).to_owned(), sig.value_name(var, value).to_owned()))
                .collect(),
        }
    }

    pub(crate) fn resolve(&self, sig: &Signature) -> Result<Vec<(Var, usize)>> {
        self.iter()
            .map(|(name, value)| sig.endogenous_binding(name, value))
            .collect()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (n, v)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{n}={v}")?;
        }
        Ok(())
    }
}

/// Extensional description of one structural equation, by name.
///
/// `rows` maps parent-value tuples (in `parents` order) to the target's
/// value; `default` covers every tuple not listed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationTable {
    pub target: String,
    pub parents: Vec<String>,
    pub rows: Vec<(Vec<String>, String)>,
    pub default: Option<String>,
}

impl EquationTable {
    pub fn constant(target: impl Into<String>, value: impl Into<String>) -> Self {
        EquationTable {
            target: target.into(),
            parents: Vec::new(),
            rows: Vec::new(),
            default: Some(value.into()),
        }
    }

    /// Lists every parent tuple explicitly, taking each output from `f`.
    pub fn tabulate<F>(sig: &Signature, target: &str, parents: &[&str], mut f: F) -> Result<Self>
    where
        F: FnMut(&[&str]) -> String,
    {
        let ranges = parents
            .iter()
            .map(|p| sig.var(p).map(|v| sig.range(v).values()))
            .collect::<Result<Vec<_>>>()?;
        let mut rows = Vec::new();
        for_each_tuple(&ranges.iter().map(|r| r.len()).collect::<Vec<_>>(), |tuple| {
            let vals: Vec<&str> = tuple.iter().zip(&ranges).map(|(&i, r)| r[i].as_str()).collect();
            let out = f(&vals);
            rows.push((vals.iter().map(|s| s.to_string()).collect(), out));
        });
        Ok(EquationTable {
            target: target.to_owned(),
            parents: parents.iter().map(|s| s.to_string()).collect(),
            rows,
            default: None,
        })
    }
}

/// Calls `f` with every tuple in the product of `0..sizes[i]`, last position
/// varying fastest.
pub(crate) fn for_each_tuple(sizes: &[usize], mut f: impl FnMut(&[usize])) {
    if sizes.contains(&0) {
        return;
    }
    let mut tuple = vec![0; sizes.len()];
    loop {
        f(&tuple);
        let mut pos = sizes.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < sizes[pos] {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

#[derive(Debug, Clone)]
struct Equation {
    parents: Vec<Var>,
    strides: Vec<usize>,
    /// Output for every parent tuple, indexed by mixed radix over `parents`.
    table: Vec<usize>,
    rows: BTreeMap<Vec<usize>, usize>,
    default: Option<usize>,
}

impl Equation {
    fn eval(&self, state: &[usize]) -> usize {
        let idx: usize = self
            .parents
            .iter()
            .zip(&self.strides)
            .map(|(p, s)| state[p.0] * s)
            .sum();
        self.table[idx]
    }

    fn constant(value: usize) -> Self {
        Equation {
            parents: Vec::new(),
            strides: Vec::new(),
            table: vec![value],
            rows: BTreeMap::new(),
            default: Some(value),
        }
    }
}

/// A validated recursive structural causal model.
#[derive(Debug, Clone)]
pub struct CausalModel {
    signature: Arc<Signature>,
    /// Indexed by variable; `None` for exogenous variables.
    equations: Vec<Option<Equation>>,
    order: Vec<Var>,
}

impl PartialEq for CausalModel {
    fn eq(&self, other: &Self) -> bool {
        self.signature == other.signature
            && self.equations.iter().zip(&other.equations).all(|(a, b)| match (a, b) {
                (None, None) => true,
                (Some(a), Some(b)) => a.parents == b.parents && a.table == b.table,
                _ => false,
            })
    }
}

impl Eq for CausalModel {}

/// Validates a raw model description: one total, well-ranged table per
/// endogenous variable and an acyclic endogenous dependency graph.
pub fn validate_model(signature: Signature, tables: Vec<EquationTable>) -> Result<CausalModel> {
    CausalModel::new(signature, tables)
}

impl CausalModel {
    pub fn new(signature: Signature, tables: Vec<EquationTable>) -> Result<Self> {
        let mut equations: Vec<Option<Equation>> = vec![None; signature.len()];
        for table in tables {
            let target = signature.var(&table.target)?;
            if signature.kind(target) != VarKind::Endogenous {
                return Err(Error::ExogenousVariable(table.target.clone()));
            }
            if equations[target.0].is_some() {
                return Err(Error::DuplicateEquation(table.target.clone()));
            }
            equations[target.0] = Some(compile_table(&signature, target, &table)?);
        }
        for &var in signature.endogenous() {
            if equations[var.0].is_none() {
                return Err(Error::PartialEquation {
                    target: signature.name(var).to_owned(),
                    detail: "no equation given".into(),
                });
            }
        }
        let order = topological_order(&signature, &equations)?;
        Ok(CausalModel {
            signature: Arc::new(signature),
            equations,
            order,
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    /// Endogenous variables in dependency order, ties broken by declaration order.
    pub fn topological_order(&self) -> &[Var] {
        &self.order
    }

    pub fn parents(&self, var: Var) -> &[Var] {
        self.equations[var.0]
            .as_ref()
            .map(|e| e.parents.as_slice())
            .unwrap_or(&[])
    }

    /// The equation of `var` in table form (rows as given plus default).
    pub fn equation_table(&self, var: Var) -> Option<EquationTable> {
        let eq = self.equations[var.0].as_ref()?;
        let sig = &self.signature;
        Some(EquationTable {
            target: sig.name(var).to_owned(),
            parents: eq.parents.iter().map(|&p| sig.name(p).to_owned()).collect(),
            rows: eq
                .rows
                .iter()
                .map(|(tuple, &out)| {
                    (
                        tuple
                            .iter()
                            .zip(&eq.parents)
                            .map(|(&v, &p)| sig.value_name(p, v).to_owned())
                            .collect(),
                        sig.value_name(var, out).to_owned(),
                    )
                })
                .collect(),
            default: eq.default.map(|d| sig.value_name(var, d).to_owned()),
        })
    }

    /// Value of `var` under its own equation, given the other variables in `state`.
    pub fn mechanism(&self, var: Var, state: &[usize]) -> Option<usize> {
        self.equations[var.0].as_ref().map(|e| e.eval(state))
    }

    pub fn enumerate_contexts(&self) -> Vec<Context> {
        let sizes: Vec<usize> = self
            .signature
            .exogenous()
            .iter()
            .map(|&v| self.signature.range(v).len())
            .collect();
        let mut out = Vec::new();
        for_each_tuple(&sizes, |t| out.push(Context { values: t.to_vec() }));
        out
    }

    /// The unique solution of the equations in `context`, by name.
    pub fn solve(&self, context: &Context) -> Result<Assignment> {
        self.signature.check_context(context)?;
        let state = self.solve_state(context, &[]);
        Ok(Assignment::from_indexed(
            &self.signature,
            self.signature.endogenous().iter().map(|&v| (v, state[v.0])),
        ))
    }

    /// `M_{X<-x}`: replaces the equations of the bound variables by constants.
    pub fn intervene(&self, setting: &Assignment) -> Result<CausalModel> {
        let bindings = setting.resolve(&self.signature)?;
        let mut seen = HashSet::new();
        for &(var, _) in &bindings {
            if !seen.insert(var) {
                return Err(Error::DuplicateInterventionTarget(self.signature.name(var).to_owned()));
            }
        }
        let mut equations = self.equations.clone();
        for (var, value) in bindings {
            equations[var.0] = Some(Equation::constant(value));
        }
        Ok(CausalModel {
            signature: Arc::clone(&self.signature),
            equations,
            order: self.order.clone(),
        })
    }

    /// Full state vector (indexed by variable) for `context`, with the
    /// variables in `overrides` pinned. Later overrides of the same variable win.
    pub(crate) fn solve_state(&self, context: &Context, overrides: &[(Var, usize)]) -> Vec<usize> {
        let mut state = vec![0; self.signature.len()];
        self.solve_into(context, overrides, &mut state);
        state
    }

    pub(crate) fn solve_into(&self, context: &Context, overrides: &[(Var, usize)], state: &mut [usize]) {
        for (&var, &value) in self.signature.exogenous().iter().zip(&context.values) {
            state[var.0] = value;
        }
        for &var in &self.order {
            state[var.0] = match overrides.iter().rev().find(|(v, _)| *v == var) {
                Some(&(_, value)) => value,
                None => self.equations[var.0]
                    .as_ref()
                    .expect("endogenous variable has an equation")
                    .eval(state),
            };
        }
    }
}

fn compile_table(sig: &Signature, target: Var, table: &EquationTable) -> Result<Equation> {
    let target_name = sig.name(target);
    let mut parents = Vec::with_capacity(table.parents.len());
    for p in &table.parents {
        let var = sig.var(p)?;
        if var == target {
            return Err(Error::CyclicModel(vec![p.clone(), p.clone()]));
        }
        if parents.contains(&var) {
            return Err(Error::DuplicateVariable(p.clone()));
        }
        parents.push(var);
    }
    let sizes: Vec<usize> = parents.iter().map(|&p| sig.range(p).len()).collect();
    let mut strides = vec![1; parents.len()];
    for i in (0..parents.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * sizes[i + 1];
    }
    let total: usize = sizes.iter().product();

    let mut rows = BTreeMap::new();
    for (tuple, out) in &table.rows {
        if tuple.len() != parents.len() {
            return Err(Error::RowArity {
                target: target_name.to_owned(),
                expected: parents.len(),
                found: tuple.len(),
            });
        }
        let idx = tuple
            .iter()
            .zip(&parents)
            .map(|(v, &p)| sig.value_index(p, v))
            .collect::<Result<Vec<_>>>()?;
        let out = sig.value_index(target, out)?;
        if rows.insert(idx, out).is_some() {
            return Err(Error::DuplicateRow {
                target: target_name.to_owned(),
                tuple: tuple.join(","),
            });
        }
    }
    let default = table
        .default
        .as_deref()
        .map(|d| sig.value_index(target, d))
        .transpose()?;

    let mut dense = Vec::with_capacity(total);
    let mut missing = None;
    for_each_tuple(&sizes, |t| match rows.get(t).copied().or(default) {
        Some(v) => dense.push(v),
        None => {
            if missing.is_none() {
                missing = Some(
                    t.iter()
                        .zip(&parents)
                        .map(|(&v, &p)| sig.value_name(p, v))
                        .collect::<Vec<_>>()
                        .join(","),
                );
            }
            dense.push(0);
        }
    });
    if let Some(tuple) = missing {
        return Err(Error::PartialEquation {
            target: target_name.to_owned(),
            detail: format!("no row for ({tuple}) and no default"),
        });
    }
    Ok(Equation {
        parents,
        strides,
        table: dense,
        rows,
        default,
    })
}

fn topological_order(sig: &Signature, equations: &[Option<Equation>]) -> Result<Vec<Var>> {
    let endo = sig.endogenous();
    let mut indegree: HashMap<Var, usize> = HashMap::new();
    let mut children: HashMap<Var, Vec<Var>> = HashMap::new();
    for &v in endo {
        let eq = equations[v.0].as_ref().expect("checked above");
        let endo_parents: Vec<Var> = eq
            .parents
            .iter()
            .copied()
            .filter(|&p| sig.kind(p) == VarKind::Endogenous)
            .collect();
        indegree.insert(v, endo_parents.len());
        for p in endo_parents {
            children.entry(p).or_default().push(v);
        }
    }
    let mut order = Vec::with_capacity(endo.len());
    let mut done = vec![false; sig.len()];
    while order.len() < endo.len() {
        // smallest declaration index among ready variables
        let next = endo.iter().copied().find(|v| !done[v.0] && indegree[v] == 0);
        let Some(next) = next else {
            return Err(Error::CyclicModel(find_cycle(sig, equations, &done)));
        };
        done[next.0] = true;
        order.push(next);
        for c in children.get(&next).into_iter().flatten() {
            *indegree.get_mut(c).expect("endogenous") -= 1;
        }
    }
    Ok(order)
}

fn find_cycle(sig: &Signature, equations: &[Option<Equation>], done: &[bool]) -> Vec<String> {
    // Every remaining variable has an unfinished endogenous parent; walking
    // parents from any of them must revisit a node.
    let start = sig
        .endogenous()
        .iter()
        .copied()
        .find(|v| !done[v.0])
        .expect("a variable remains");
    let mut path = vec![start];
    let mut cur = start;
    loop {
        let eq = equations[cur.0].as_ref().expect("endogenous");
        let parent = eq
            .parents
            .iter()
            .copied()
            .find(|&p| sig.kind(p) == VarKind::Endogenous && !done[p.0])
            .expect("unfinished parent");
        if let Some(pos) = path.iter().position(|&v| v == parent) {
            // path[i + 1] is a parent of path[i]; report in causal direction
            let mut cycle = vec![sig.name(parent).to_owned()];
            cycle.extend(path[pos..].iter().rev().map(|&v| sig.name(v).to_owned()));
            return cycle;
        }
        path.push(parent);
        cur = parent;
    }
}

/// A model together with one of its contexts.
#[derive(Debug, Clone)]
pub struct Situation {
    pub model: Arc<CausalModel>,
    pub context: Context,
}

impl Situation {
    pub fn new(model: Arc<CausalModel>, context: Context) -> Result<Self> {
        model.signature().check_context(&context)?;
        Ok(Situation { model, context })
    }

    pub fn solve(&self) -> Assignment {
        self.model
            .solve(&self.context)
            .expect("context checked on construction")
    }
}

impl PartialEq for Situation {
    fn eq(&self, other: &Self) -> bool {
        self.context == other.context && (Arc::ptr_eq(&self.model, &other.model) || *self.model == *other.model)
    }
}
