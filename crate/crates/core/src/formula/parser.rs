use super::{BooleanExpr, CausalFormula, CausalLeaf, Expr, PrimitiveEvent};
use crate::error::{Error, Result};
use crate::model::Signature;

/// Parses `text` and checks it against `signature`.
pub fn parse_formula(text: &str, signature: &Signature) -> Result<CausalFormula> {
    let f = parse_unchecked(text)?;
    f.check(signature)?;
    Ok(f)
}

/// Parses `text` without resolving names. Used for formulas that are
/// evaluated against several models with different signatures.
pub fn parse_unchecked(text: &str) -> Result<CausalFormula> {
    let mut p = Parser::new(text);
    let f = p.or(&Parser::causal_atom)?;
    p.expect_end()?;
    Ok(f)
}

/// Parses a Boolean combination of primitive events (no interventions).
pub fn parse_boolean(text: &str) -> Result<BooleanExpr> {
    let mut p = Parser::new(text);
    let f = p.or(&Parser::boolean_atom)?;
    p.expect_end()?;
    Ok(f)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

type AtomFn<L> = dyn Fn(&mut Parser) -> Result<Expr<L>>;

impl Parser {
    fn new(src: &str) -> Self {
        Parser {
            chars: src.chars().collect(),
            pos: 0,
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            column: self.pos + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.error(format!("expected `{c}`, found `{found}`")),
                None => self.error(format!("expected `{c}`, found end of input")),
            }
        }
    }

    fn expect_end(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.error(format!("unexpected `{c}`")),
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        match self.chars.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() || *c == '_' => self.pos += 1,
            Some(c) => return self.error(format!("expected a variable name, found `{c}`")),
            None => return self.error("expected a variable name, found end of input"),
        }
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_')
        {
            self.pos += 1;
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn value(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|&c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-' | '+' | '\''))
        {
            self.pos += 1;
        }
        if start == self.pos {
            return match self.chars.get(self.pos) {
                Some(c) => self.error(format!("expected a value, found `{c}`")),
                None => self.error("expected a value, found end of input"),
            };
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn or<L>(&mut self, atom: &AtomFn<L>) -> Result<Expr<L>> {
        let mut lhs = self.and(atom)?;
        while self.eat('|') {
            let rhs = self.and(atom)?;
            lhs = Expr::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and<L>(&mut self, atom: &AtomFn<L>) -> Result<Expr<L>> {
        let mut lhs = self.unary(atom)?;
        while self.eat('&') {
            let rhs = self.unary(atom)?;
            lhs = Expr::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary<L>(&mut self, atom: &AtomFn<L>) -> Result<Expr<L>> {
        if self.eat('!') {
            return Ok(Expr::not(self.unary(atom)?));
        }
        atom(self)
    }

    /// `event | TRUE | FALSE`
    fn event_or_const(&mut self) -> Result<Expr<PrimitiveEvent>> {
        let name = self.ident()?;
        if self.eat('=') {
            let value = self.value()?;
            return Ok(Expr::Leaf(PrimitiveEvent::new(name, value)));
        }
        match name.as_str() {
            "TRUE" => Ok(Expr::Const(true)),
            "FALSE" => Ok(Expr::Const(false)),
            _ => self.error(format!("expected `=` after `{name}`")),
        }
    }

    fn boolean_atom(&mut self) -> Result<BooleanExpr> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.or(&Parser::boolean_atom)?;
                self.expect(')')?;
                Ok(inner)
            }
            Some('[') => self.error("interventions cannot be nested inside an intervened formula"),
            _ => self.event_or_const(),
        }
    }

    fn causal_atom(&mut self) -> Result<CausalFormula> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.or(&Parser::causal_atom)?;
                self.expect(')')?;
                Ok(inner)
            }
            Some('[') => {
                self.pos += 1;
                let mut intervention: Vec<PrimitiveEvent> = Vec::new();
                loop {
                    let start = self.pos;
                    let name = self.ident()?;
                    self.skip_ws();
                    if !(self.eat('<') && self.chars.get(self.pos) == Some(&'-')) {
                        return self.error(format!("expected `<-` after `{name}`"));
                    }
                    self.pos += 1;
                    let value = self.value()?;
                    if intervention.iter().any(|b| b.variable == name) {
                        self.pos = start;
                        return Err(Error::DuplicateInterventionTarget(name));
                    }
                    intervention.push(PrimitiveEvent::new(name, value));
                    if !self.eat(',') {
                        break;
                    }
                }
                self.expect(']')?;
                self.expect('(')?;
                let body = self.or(&Parser::boolean_atom)?;
                self.expect(')')?;
                Ok(Expr::Leaf(CausalLeaf::Intervened { intervention, body }))
            }
            _ => Ok(self
                .event_or_const()?
                .try_map(&mut |e| Ok::<_, Error>(CausalLeaf::Event(e.clone())))?),
        }
    }
}
