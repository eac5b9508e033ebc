use serde::Serialize;
use serde_json::{Map, Value};

/// The machine-readable result of one command. Field order and map key
/// order are fixed, so identical inputs give byte-identical JSON.
#[derive(Debug, Clone, Serialize)]
pub struct QueryResult {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub verdict: Option<bool>,
    pub clauses: Map<String, Value>,
    pub witnesses: Vec<Value>,
    pub values: Map<String, Value>,
    /// Human-readable rendering.
    #[serde(skip)]
    pub text: Vec<String>,
}

impl QueryResult {
    pub(crate) fn new(command: &str) -> Self {
        QueryResult {
            command: command.to_owned(),
            inputs: Map::new(),
            verdict: None,
            clauses: Map::new(),
            witnesses: Vec::new(),
            values: Map::new(),
            text: Vec::new(),
        }
    }

    pub(crate) fn input(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.to_owned(), value.into());
        self
    }

    pub(crate) fn clause(&mut self, key: &str, value: bool) -> &mut Self {
        self.clauses.insert(key.to_owned(), Value::Bool(value));
        self
    }

    pub(crate) fn value(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.values.insert(key.to_owned(), value.into());
        self
    }

    pub(crate) fn line(&mut self, line: impl Into<String>) -> &mut Self {
        self.text.push(line.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain JSON values serialize")
    }
}
