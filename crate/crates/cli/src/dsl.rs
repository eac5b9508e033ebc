//! The model file format.
//!
//! ```text
//! # comment
//! exo U : {u0, u1}
//! endo X : {0, 1}
//! eq X (U): (u0) -> 0; default -> 1
//! prob:
//!     U=u0 -> 1/4
//!     U=u1 -> 3/4
//! ```
//!
//! An `eq` statement may continue on the next line after `:` or `;`.
//! Context and weight files use the entry syntax of the `prob:` block, with
//! the weight optional.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use causa::{CausalModel, Context, EquationTable, Error, ExactProbabilisticModel, Rational, Signature, VarKind};
use thiserror::Error as ThisError;

#[derive(Debug, Clone, PartialEq, ThisError)]
pub enum DslError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: {source}")]
    Model { line: usize, column: usize, source: Error },
}

impl DslError {
    /// Name of the underlying model error, or `SyntaxError`.
    pub fn kind(&self) -> String {
        match self {
            DslError::Syntax { .. } => "SyntaxError".into(),
            DslError::Model { source, .. } => crate::error_kind(source),
        }
    }
}

type DslResult<T> = std::result::Result<T, DslError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Pos {
    fn syntax(self, message: impl Into<String>) -> DslError {
        DslError::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn model(self, source: Error) -> DslError {
        DslError::Model {
            line: self.line,
            column: self.column,
            source,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Colon,
    Semi,
    Comma,
    Eq,
    Slash,
    Arrow,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Newline,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Newline => f.write_str("end of line"),
        }
    }
}

fn word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-' | '+' | '\'')
}

fn lex(text: &str) -> DslResult<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut j = 0;
        while j < chars.len() {
            let pos = Pos {
                line: i + 1,
                column: j + 1,
            };
            let c = chars[j];
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                j += 1;
                continue;
            }
            let single = match c {
                ':' => Some(Tok::Colon),
                ';' => Some(Tok::Semi),
                ',' => Some(Tok::Comma),
                '=' => Some(Tok::Eq),
                '/' => Some(Tok::Slash),
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                '{' => Some(Tok::LBrace),
                '}' => Some(Tok::RBrace),
                _ => None,
            };
            if let Some(tok) = single {
                out.push((tok, pos));
                j += 1;
            } else if c == '-' && chars.get(j + 1) == Some(&'>') {
                out.push((Tok::Arrow, pos));
                j += 2;
            } else if word_char(c) {
                let start = j;
                while j < chars.len() && word_char(chars[j]) && !(chars[j] == '-' && chars.get(j + 1) == Some(&'>')) {
                    j += 1;
                }
                out.push((Tok::Word(chars[start..j].iter().collect()), pos));
            } else {
                return Err(pos.syntax(format!("unexpected character `{c}`")));
            }
        }
        out.push((
            Tok::Newline,
            Pos {
                line: i + 1,
                column: chars.len() + 1,
            },
        ));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

impl Parser {
    fn new(text: &str) -> DslResult<Self> {
        let toks = lex(text)?;
        let end = toks.last().map(|t| t.1).unwrap_or(Pos { line: 1, column: 1 });
        Ok(Parser { toks, at: 0, end })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.0)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map(|t| t.1).unwrap_or(self.end)
    }

    fn skip_newlines(&mut self) {
        while self.peek() == Some(&Tok::Newline) {
            self.at += 1;
        }
    }

    fn expect(&mut self, tok: Tok) -> DslResult<Pos> {
        let pos = self.pos();
        match self.peek() {
            Some(t) if *t == tok => {
                self.at += 1;
                Ok(pos)
            }
            Some(t) => Err(pos.syntax(format!("expected {tok}, found {t}"))),
            None => Err(pos.syntax(format!("expected {tok}, found end of input"))),
        }
    }

    fn eat(&mut self, tok: Tok) -> bool {
        if self.peek() == Some(&tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn word(&mut self, what: &str) -> DslResult<Word> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.at += 1;
                Ok((w, pos))
            }
            Some(t) => Err(pos.syntax(format!("expected {what}, found {t}"))),
            None => Err(pos.syntax(format!("expected {what}, found end of input"))),
        }
    }

    fn name(&mut self) -> DslResult<Word> {
        let (w, pos) = self.word("a variable name")?;
        let mut chars = w.chars();
        let ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(pos.syntax(format!("`{w}` is not a valid variable name")));
        }
        Ok((w, pos))
    }

    fn end_of_statement(&mut self) -> DslResult<()> {
        match self.peek() {
            None => Ok(()),
            Some(Tok::Newline) => {
                self.at += 1;
                Ok(())
            }
            Some(t) => Err(self.pos().syntax(format!("expected end of line, found {t}"))),
        }
    }

    /// `v1, v2, ...` up to (not including) `close`.
    fn values(&mut self, close: Tok) -> DslResult<Vec<Word>> {
        let mut out = Vec::new();
        if self.peek() == Some(&close) {
            return Ok(out);
        }
        loop {
            out.push(self.word("a value")?);
            if !self.eat(Tok::Comma) {
                return Ok(out);
            }
        }
    }

    /// `p/q` or `p`.
    fn rational(&mut self) -> DslResult<(Rational, Pos)> {
        let (num, pos) = self.word("a probability")?;
        let text = if self.eat(Tok::Slash) {
            format!("{num}/{}", self.word("a denominator")?.0)
        } else {
            num
        };
        let value: Rational = text
            .parse()
            .map_err(|_| pos.syntax(format!("`{text}` is not a rational number")))?;
        Ok((value, pos))
    }

    /// `U1=v1, U2=v2 [-> p/q]` on one line.
    fn entry(&mut self) -> DslResult<RawEntry> {
        let pos = self.pos();
        let mut pairs = Vec::new();
        if !matches!(self.peek(), Some(Tok::Arrow | Tok::Newline) | None) {
            loop {
                let (name, npos) = self.name()?;
                self.expect(Tok::Eq)?;
                let (value, _) = self.word("a value")?;
                pairs.push((name, value, npos));
                if !self.eat(Tok::Comma) {
                    break;
                }
            }
        }
        let weight = if self.eat(Tok::Arrow) {
            Some(self.rational()?)
        } else {
            None
        };
        self.end_of_statement()?;
        Ok(RawEntry { pairs, weight, pos })
    }
}

#[derive(Debug)]
struct RawEntry {
    pairs: Vec<(String, String, Pos)>,
    weight: Option<(Rational, Pos)>,
    pos: Pos,
}

impl RawEntry {
    fn context(&self, sig: &Signature) -> DslResult<Context> {
        // check names first so the error points at the offending pair
        for (name, value, pos) in &self.pairs {
            let var = sig.var(name).map_err(|e| pos.model(e))?;
            if sig.kind(var) != VarKind::Exogenous {
                return Err(pos.model(Error::EndogenousInContext(name.clone())));
            }
            sig.value_index(var, value).map_err(|e| pos.model(e))?;
        }
        sig.context(self.pairs.iter().map(|(n, v, _)| (n.as_str(), v.as_str())))
            .map_err(|e| self.pos.model(e))
    }
}

/// A token and where it starts.
type Word = (String, Pos);

/// A variable declaration: kind, name, name position, range.
type Decl = (VarKind, String, Pos, Vec<Word>);

struct RawEquation {
    target: Word,
    parents: Vec<Word>,
    rows: Vec<(Vec<Word>, Word)>,
    default: Option<Word>,
    pos: Pos,
}

const KEYWORDS: [&str; 4] = ["exo", "endo", "eq", "prob"];

/// A parsed model file: the model and its optional prior over contexts.
#[derive(Debug, Clone)]
pub struct ModelDocument {
    pub model: Arc<CausalModel>,
    pub prob: Option<Vec<(Context, Rational)>>,
}

impl ModelDocument {
    pub fn parse(text: &str) -> DslResult<Self> {
        parse_model_document(text)
    }

    /// The probabilistic model given by the `prob:` block, if any.
    pub fn probabilistic(&self) -> Option<Result<ExactProbabilisticModel, Error>> {
        self.prob
            .as_ref()
            .map(|p| ExactProbabilisticModel::new(Arc::clone(&self.model), p.clone()))
    }
}

pub fn parse_model_document(text: &str) -> DslResult<ModelDocument> {
    let mut p = Parser::new(text)?;
    let mut decls: Vec<Decl> = Vec::new();
    let mut eqs: Vec<RawEquation> = Vec::new();
    let mut prob: Option<(Pos, Vec<RawEntry>)> = None;

    loop {
        p.skip_newlines();
        if p.peek().is_none() {
            break;
        }
        let (kw, kpos) = p.word("`exo`, `endo`, `eq` or `prob`")?;
        match kw.as_str() {
            "exo" | "endo" => {
                let (name, npos) = p.name()?;
                p.expect(Tok::Colon)?;
                p.expect(Tok::LBrace)?;
                let values = p.values(Tok::RBrace)?;
                p.expect(Tok::RBrace)?;
                p.end_of_statement()?;
                let kind = if kw == "exo" {
                    VarKind::Exogenous
                } else {
                    VarKind::Endogenous
                };
                decls.push((kind, name, npos, values));
            }
            "eq" => {
                let target = p.name()?;
                p.expect(Tok::LParen)?;
                let mut parents = Vec::new();
                if p.peek() != Some(&Tok::RParen) {
                    loop {
                        parents.push(p.name()?);
                        if !p.eat(Tok::Comma) {
                            break;
                        }
                    }
                }
                p.expect(Tok::RParen)?;
                p.expect(Tok::Colon)?;
                let mut eq = RawEquation {
                    target,
                    parents,
                    rows: Vec::new(),
                    default: None,
                    pos: kpos,
                };
                loop {
                    p.skip_newlines();
                    let rpos = p.pos();
                    if p.eat(Tok::LParen) {
                        let tuple = p.values(Tok::RParen)?;
                        p.expect(Tok::RParen)?;
                        p.expect(Tok::Arrow)?;
                        eq.rows.push((tuple, p.word("a value")?));
                    } else if matches!(p.peek(), Some(Tok::Word(w)) if w == "default") {
                        p.at += 1;
                        if eq.default.is_some() {
                            return Err(rpos.syntax("more than one default row"));
                        }
                        p.expect(Tok::Arrow)?;
                        eq.default = Some(p.word("a value")?);
                    } else {
                        let found = p.peek().map(|t| t.to_string()).unwrap_or("end of input".into());
                        return Err(rpos.syntax(format!("expected a row `(..) -> v` or `default -> v`, found {found}")));
                    }
                    if !p.eat(Tok::Semi) {
                        break;
                    }
                }
                p.end_of_statement()?;
                eqs.push(eq);
            }
            "prob" => {
                if prob.is_some() {
                    return Err(kpos.syntax("more than one `prob:` block"));
                }
                p.expect(Tok::Colon)?;
                p.end_of_statement()?;
                let mut entries = Vec::new();
                loop {
                    p.skip_newlines();
                    match p.peek() {
                        None => break,
                        Some(Tok::Word(w)) if KEYWORDS.contains(&w.as_str()) => break,
                        _ => {}
                    }
                    let entry = p.entry()?;
                    if entry.weight.is_none() {
                        return Err(entry.pos.syntax("a `prob:` entry needs `-> p/q`"));
                    }
                    entries.push(entry);
                }
                prob = Some((kpos, entries));
            }
            other => return Err(kpos.syntax(format!("expected `exo`, `endo`, `eq` or `prob`, found `{other}`"))),
        }
    }

    let sig = build_signature(&decls)?;
    let tables = check_equations(&sig, &eqs)?;
    let model = CausalModel::new(sig.clone(), tables).map_err(|e| locate(e, &decls, &eqs))?;
    let model = Arc::new(model);

    let prob = match prob {
        None => None,
        Some((ppos, entries)) => {
            let mut weighted = Vec::new();
            for e in &entries {
                let c = e.context(&sig)?;
                if weighted.iter().any(|(k, _)| *k == c) {
                    let shown = sig.display_context(&c).to_string();
                    return Err(e.pos.model(Error::DuplicateContext(shown)));
                }
                weighted.push((c, e.weight.clone().expect("checked above").0));
            }
            ExactProbabilisticModel::new(Arc::clone(&model), weighted.clone()).map_err(|e| ppos.model(e))?;
            Some(weighted)
        }
    };
    Ok(ModelDocument { model, prob })
}

fn build_signature(decls: &[Decl]) -> DslResult<Signature> {
    let mut b = Signature::builder();
    let mut seen: HashMap<&str, Pos> = HashMap::new();
    for (kind, name, pos, values) in decls {
        if seen.insert(name, *pos).is_some() {
            return Err(pos.model(Error::DuplicateVariable(name.clone())));
        }
        if values.is_empty() {
            return Err(pos.model(Error::EmptyRange(name.clone())));
        }
        for (i, (v, vpos)) in values.iter().enumerate() {
            if values[..i].iter().any(|(w, _)| w == v) {
                return Err(vpos.model(Error::DuplicateValue {
                    variable: name.clone(),
                    value: v.clone(),
                }));
            }
        }
        let vals = values.iter().map(|v| v.0.clone());
        b = match kind {
            VarKind::Exogenous => b.exogenous(name.clone(), vals),
            VarKind::Endogenous => b.endogenous(name.clone(), vals),
        };
    }
    b.build().map_err(|e| Pos { line: 1, column: 1 }.model(e))
}

fn check_equations(sig: &Signature, eqs: &[RawEquation]) -> DslResult<Vec<EquationTable>> {
    let mut out = Vec::new();
    for eq in eqs {
        let (target, tpos) = &eq.target;
        let tvar = sig.var(target).map_err(|e| tpos.model(e))?;
        if sig.kind(tvar) == VarKind::Exogenous {
            return Err(tpos.model(Error::ExogenousVariable(target.clone())));
        }
        let mut pvars = Vec::new();
        for (name, pos) in &eq.parents {
            pvars.push(sig.var(name).map_err(|e| pos.model(e))?);
        }
        for (tuple, (out_value, opos)) in &eq.rows {
            if tuple.len() != pvars.len() {
                let pos = tuple.first().map(|t| t.1).unwrap_or(eq.pos);
                return Err(pos.model(Error::RowArity {
                    target: target.clone(),
                    expected: pvars.len(),
                    found: tuple.len(),
                }));
            }
            for ((v, vpos), &pv) in tuple.iter().zip(&pvars) {
                sig.value_index(pv, v).map_err(|e| vpos.model(e))?;
            }
            sig.value_index(tvar, out_value).map_err(|e| opos.model(e))?;
        }
        if let Some((d, dpos)) = &eq.default {
            sig.value_index(tvar, d).map_err(|e| dpos.model(e))?;
        }
        out.push(EquationTable {
            target: target.clone(),
            parents: eq.parents.iter().map(|p| p.0.clone()).collect(),
            rows: eq
                .rows
                .iter()
                .map(|(t, o)| (t.iter().map(|v| v.0.clone()).collect(), o.0.clone()))
                .collect(),
            default: eq.default.as_ref().map(|d| d.0.clone()),
        });
    }
    Ok(out)
}

/// Attaches the most relevant source position to a model validation error.
fn locate(e: Error, decls: &[Decl], eqs: &[RawEquation]) -> DslError {
    let eq_named = |name: &str, nth: usize| eqs.iter().filter(|q| q.target.0 == name).nth(nth).map(|q| q.pos);
    let decl_named = |name: &str| decls.iter().find(|d| d.1 == name).map(|d| d.2);
    let pos = match &e {
        Error::DuplicateEquation(t) => eq_named(t, 1),
        Error::PartialEquation { target, .. } | Error::DuplicateRow { target, .. } => {
            eq_named(target, 0).or_else(|| decl_named(target))
        }
        Error::CyclicModel(cycle) => cycle.first().and_then(|t| eq_named(t, 0)),
        Error::RangeViolation { variable, .. } => eq_named(variable, 0).or_else(|| decl_named(variable)),
        _ => None,
    };
    pos.unwrap_or(Pos { line: 1, column: 1 }).model(e)
}

/// A context or weight file: one context per line, optionally `-> p/q`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextList {
    pub entries: Vec<(Context, Option<Rational>)>,
}

impl ContextList {
    /// The weights, when every line has one; `None` when no line has one.
    pub fn weights(&self) -> Option<Vec<Rational>> {
        self.entries.iter().map(|e| e.1.clone()).collect()
    }

    pub fn contexts(&self) -> Vec<Context> {
        self.entries.iter().map(|e| e.0.clone()).collect()
    }
}

pub fn parse_context_list(text: &str, sig: &Signature) -> DslResult<ContextList> {
    let mut p = Parser::new(text)?;
    let mut entries: Vec<(Context, Option<Rational>)> = Vec::new();
    let mut first_weighted = None;
    loop {
        p.skip_newlines();
        if p.peek().is_none() {
            break;
        }
        if matches!(p.peek(), Some(Tok::Word(w)) if w == "prob") && entries.is_empty() {
            // an optional `prob:` header, as in a model file
            let save = p.at;
            p.at += 1;
            if p.eat(Tok::Colon) && p.peek().is_none_or(|t| *t == Tok::Newline) {
                continue;
            }
            p.at = save;
        }
        let e = p.entry()?;
        let weighted = e.weight.is_some();
        if *first_weighted.get_or_insert(weighted) != weighted {
            return Err(e.pos.syntax("either every line carries a weight or none does"));
        }
        let c = e.context(sig)?;
        if entries.iter().any(|(k, _)| *k == c) {
            return Err(e
                .pos
                .model(Error::DuplicateContext(sig.display_context(&c).to_string())));
        }
        entries.push((c, e.weight.map(|w| w.0)));
    }
    Ok(ContextList { entries })
}

fn join<T: AsRef<str>>(items: &[T]) -> String {
    items.iter().map(|s| s.as_ref()).collect::<Vec<_>>().join(", ")
}

/// Canonical text of a model document.
impl fmt::Display for ModelDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = self.model.signature();
        for &v in sig.exogenous() {
            writeln!(f, "exo {} : {{{}}}", sig.name(v), join(sig.range(v).values()))?;
        }
        for &v in sig.endogenous() {
            writeln!(f, "endo {} : {{{}}}", sig.name(v), join(sig.range(v).values()))?;
        }
        for &v in sig.endogenous() {
            let table = self
                .model
                .equation_table(v)
                .expect("endogenous variables have equations");
            write!(f, "eq {} ({}):", table.target, join(&table.parents))?;
            let mut rows: Vec<String> = table
                .rows
                .iter()
                .map(|(t, o)| format!("({}) -> {o}", join(t)))
                .collect();
            if let Some(d) = &table.default {
                rows.push(format!("default -> {d}"));
            }
            if rows.len() == 1 {
                writeln!(f, " {}", rows[0])?;
            } else {
                writeln!(f)?;
                writeln!(f, "    {}", rows.join(";\n    "))?;
            }
        }
        if let Some(prob) = &self.prob {
            writeln!(f, "prob:")?;
            for (c, w) in prob {
                writeln!(f, "    {} -> {}", sig.display_context(c), crate::ratio(w))?;
            }
        }
        Ok(())
    }
}
