//! The causal formula language.
//!
//! Formulas are Boolean combinations of primitive events `X=x` and of
//! interventional atoms `[Y1<-y1, ..., Yk<-yk](body)`, where `body` is a
//! Boolean combination of primitive events. The concrete grammar is
//!
//! ```text
//! formula := or
//! or      := and ('|' and)*
//! and     := unary ('&' unary)*
//! unary   := '!' unary | atom
//! atom    := '[' bind (',' bind)* ']' '(' inner ')' | '(' formula ')'
//!          | event | 'TRUE' | 'FALSE'
//! bind    := IDENT '<-' VALUE
//! event   := IDENT '=' VALUE
//! ```
//!
//! where `inner` is the same grammar without brackets. `!` binds tighter
//! than `&`, which binds tighter than `|`; binary operators associate left.

pub(crate) mod eval;
mod parser;

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{Signature, VarKind};

pub use eval::{evaluate, holds_conjunct, CompiledFormula};
pub use parser::{parse_boolean, parse_formula, parse_unchecked};

/// `X = x` for an endogenous variable `X`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimitiveEvent {
    pub variable: String,
    pub value: String,
}

impl PrimitiveEvent {
    pub fn new(variable: impl Into<String>, value: impl Into<String>) -> Self {
        PrimitiveEvent {
            variable: variable.into(),
            value: value.into(),
        }
    }
}

impl fmt::Display for PrimitiveEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.variable, self.value)
    }
}

/// Boolean expression tree over leaves of type `L`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr<L> {
    Const(bool),
    Leaf(L),
    Not(Box<Expr<L>>),
    And(Box<Expr<L>>, Box<Expr<L>>),
    Or(Box<Expr<L>>, Box<Expr<L>>),
}

impl<L> Expr<L> {
    pub fn leaf(leaf: L) -> Self {
        Expr::Leaf(leaf)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Self) -> Self {
        Expr::Not(Box::new(e))
    }

    pub fn and(a: Self, b: Self) -> Self {
        Expr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Self, b: Self) -> Self {
        Expr::Or(Box::new(a), Box::new(b))
    }

    /// Left-nested conjunction; `TRUE` when empty.
    pub fn all(items: impl IntoIterator<Item = Self>) -> Self {
        items.into_iter().reduce(Expr::and).unwrap_or(Expr::Const(true))
    }

    /// Left-nested disjunction; `FALSE` when empty.
    pub fn any(items: impl IntoIterator<Item = Self>) -> Self {
        items.into_iter().reduce(Expr::or).unwrap_or(Expr::Const(false))
    }

    pub fn leaves(&self) -> Vec<&L> {
        let mut out = Vec::new();
        self.visit(&mut |l| out.push(l));
        out
    }

    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a L)) {
        match self {
            Expr::Const(_) => {}
            Expr::Leaf(l) => f(l),
            Expr::Not(e) => e.visit(f),
            Expr::And(a, b) | Expr::Or(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    pub fn try_map<M, E>(&self, f: &mut impl FnMut(&L) -> Result<M, E>) -> Result<Expr<M>, E> {
        Ok(match self {
            Expr::Const(b) => Expr::Const(*b),
            Expr::Leaf(l) => Expr::Leaf(f(l)?),
            Expr::Not(e) => Expr::not(e.try_map(f)?),
            Expr::And(a, b) => Expr::and(a.try_map(f)?, b.try_map(f)?),
            Expr::Or(a, b) => Expr::or(a.try_map(f)?, b.try_map(f)?),
        })
    }

    pub fn eval_with(&self, f: &mut impl FnMut(&L) -> bool) -> bool {
        match self {
            Expr::Const(b) => *b,
            Expr::Leaf(l) => f(l),
            Expr::Not(e) => !e.eval_with(f),
            Expr::And(a, b) => a.eval_with(f) && b.eval_with(f),
            Expr::Or(a, b) => a.eval_with(f) || b.eval_with(f),
        }
    }
}

/// Boolean combination of primitive events.
pub type BooleanExpr = Expr<PrimitiveEvent>;

/// Leaf of a causal formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CausalLeaf {
    Event(PrimitiveEvent),
    /// `[Y<-y](body)`; the intervention is nonempty and its variables distinct.
    Intervened {
        intervention: Vec<PrimitiveEvent>,
        body: BooleanExpr,
    },
}

/// Boolean combination of primitive events and interventional atoms.
pub type CausalFormula = Expr<CausalLeaf>;

impl CausalFormula {
    pub fn event(variable: impl Into<String>, value: impl Into<String>) -> Self {
        Expr::Leaf(CausalLeaf::Event(PrimitiveEvent::new(variable, value)))
    }

    /// `[intervention](body)`; an empty intervention yields `body` itself.
    pub fn intervened(intervention: Vec<PrimitiveEvent>, body: BooleanExpr) -> Result<Self> {
        check_distinct(&intervention, Error::DuplicateInterventionTarget)?;
        if intervention.is_empty() {
            return body.try_map(&mut |e| Ok::<_, Error>(CausalLeaf::Event(e.clone())));
        }
        Ok(Expr::Leaf(CausalLeaf::Intervened { intervention, body }))
    }

    pub fn from_boolean(body: &BooleanExpr) -> Self {
        body.try_map(&mut |e| Ok::<_, Error>(CausalLeaf::Event(e.clone())))
            .expect("infallible")
    }

    /// Variables mentioned anywhere in the formula, including intervention targets.
    pub fn variables(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        fn push<'a>(name: &'a str, out: &mut Vec<&'a str>) {
            if !out.contains(&name) {
                out.push(name);
            }
        }
        for leaf in self.leaves() {
            match leaf {
                CausalLeaf::Event(e) => push(&e.variable, &mut out),
                CausalLeaf::Intervened { intervention, body } => {
                    for b in intervention {
                        push(&b.variable, &mut out);
                    }
                    for e in body.leaves() {
                        push(&e.variable, &mut out);
                    }
                }
            }
        }
        out
    }

    /// Checks every variable and value against `sig`.
    pub fn check(&self, sig: &Signature) -> Result<()> {
        for leaf in self.leaves() {
            match leaf {
                CausalLeaf::Event(e) => check_event(e, sig)?,
                CausalLeaf::Intervened { intervention, body } => {
                    check_distinct(intervention, Error::DuplicateInterventionTarget)?;
                    for b in intervention {
                        check_event(b, sig)?;
                    }
                    for e in body.leaves() {
                        check_event(e, sig)?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_event(e: &PrimitiveEvent, sig: &Signature) -> Result<()> {
    let var = sig.var(&e.variable)?;
    if sig.kind(var) != VarKind::Endogenous {
        return Err(Error::ExogenousVariable(e.variable.clone()));
    }
    sig.value_index(var, &e.value).map(|_| ())
}

fn check_distinct(events: &[PrimitiveEvent], err: fn(String) -> Error) -> Result<()> {
    for (i, e) in events.iter().enumerate() {
        if events[..i].iter().any(|p| p.variable == e.variable) {
            return Err(err(e.variable.clone()));
        }
    }
    Ok(())
}

/// A conjunction `X1=x1 & ... & Xk=xk` over distinct variables.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConjunctiveEvent {
    events: Vec<PrimitiveEvent>,
}

impl ConjunctiveEvent {
    pub fn new(events: Vec<PrimitiveEvent>) -> Result<Self> {
        check_distinct(&events, Error::DuplicateConjunct)?;
        Ok(ConjunctiveEvent { events })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self> {
        Self::new(pairs.into_iter().map(|(v, x)| PrimitiveEvent::new(v, x)).collect())
    }

    /// Reads a conjunction of primitive events out of a parsed formula.
    /// Anything else (disjunction, negation, interventions) is rejected.
    pub fn from_formula(formula: &CausalFormula) -> Result<Self> {
        fn collect(f: &CausalFormula, out: &mut Vec<PrimitiveEvent>) -> Result<()> {
            match f {
                Expr::Const(true) => Ok(()),
                Expr::Leaf(CausalLeaf::Event(e)) => {
                    out.push(e.clone());
                    Ok(())
                }
                Expr::And(a, b) => {
                    collect(a, out)?;
                    collect(b, out)
                }
                _ => Err(Error::DisjunctiveCandidate),
            }
        }
        let mut events = Vec::new();
        collect(formula, &mut events)?;
        Self::new(events)
    }

    pub fn events(&self) -> &[PrimitiveEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn to_formula(&self) -> CausalFormula {
        Expr::all(
            self.events
                .iter()
                .map(|e| CausalFormula::event(e.variable.clone(), e.value.clone())),
        )
    }

    /// Sub-conjunction keeping the events at the given positions.
    pub fn subset(&self, positions: &[usize]) -> Self {
        ConjunctiveEvent {
            events: positions.iter().map(|&i| self.events[i].clone()).collect(),
        }
    }

    pub fn check(&self, sig: &Signature) -> Result<()> {
        self.events.iter().try_for_each(|e| check_event(e, sig))
    }
}

impl fmt::Display for ConjunctiveEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.events.is_empty() {
            return f.write_str("TRUE");
        }
        for (i, e) in self.events.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl fmt::Display for CausalLeaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CausalLeaf::Event(e) => write!(f, "{e}"),
            CausalLeaf::Intervened { intervention, body } => {
                f.write_str("[")?;
                for (i, b) in intervention.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}<-{}", b.variable, b.value)?;
                }
                write!(f, "]({body})")
            }
        }
    }
}

// precedence levels: Or = 0, And = 1, Not/atoms = 2
fn write_expr<L: fmt::Display>(e: &Expr<L>, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let (prec, paren) = match e {
        Expr::Or(..) => (0, min > 0),
        Expr::And(..) => (1, min > 1),
        _ => (2, false),
    };
    if paren {
        f.write_str("(")?;
    }
    match e {
        Expr::Const(true) => f.write_str("TRUE")?,
        Expr::Const(false) => f.write_str("FALSE")?,
        Expr::Leaf(l) => write!(f, "{l}")?,
        Expr::Not(inner) => {
            f.write_str("!")?;
            write_expr(inner, 2, f)?;
        }
        Expr::And(a, b) => {
            write_expr(a, prec, f)?;
            f.write_str(" & ")?;
            write_expr(b, prec + 1, f)?;
        }
        Expr::Or(a, b) => {
            write_expr(a, prec, f)?;
            f.write_str(" | ")?;
            write_expr(b, prec + 1, f)?;
        }
    }
    if paren {
        f.write_str(")")?;
    }
    Ok(())
}

impl<L: fmt::Display> fmt::Display for Expr<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(self, 0, f)
    }
}
