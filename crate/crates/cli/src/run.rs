use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use causa::{
    characterizing_formula, check_actual_cause, check_explanation, check_general_explanation, enumerate_actual_causes,
    enumerate_explanations, enumerate_general_explanations, enumerate_sufficient_causes, evaluate, explanatory_power,
    gardenfors_power, goodness, parse_formula, partial_explanation, probability_of_cause, probability_of_formula,
    Ac2Witness, ActualWorld, Assignment, Budget, CausalFormula, CausalModel, CauseVerdict, ConjunctiveEvent, Context,
    Error, ExactEpistemicState, ExactPriorState, ExactProbabilisticModel, ExactSituationSet, ExplanationOptions,
    GeneralExplanation, Rational, Situation, DEFAULT_BUDGET,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error as ThisError;

use crate::dsl::{parse_context_list, parse_model_document, DslError, ModelDocument};
use crate::report::QueryResult;
use crate::{error_kind, fixtures, ratio};

/// Decide causes and explanations in finite structural causal models.
///
/// MODEL arguments name a model file or a bundled fixture (see `causa
/// fixtures`); context, situation and hypothesis files likewise.
#[derive(Debug, Parser)]
#[command(name = "causa", version)]
pub struct Cli {
    /// Print the result as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Maximum number of formula evaluations per search.
    #[arg(long, global = true, value_name = "N")]
    budget: Option<u64>,
    /// Largest conjunction considered when enumerating.
    #[arg(long, global = true, value_name = "N")]
    max_width: Option<usize>,
    /// Require explanations to hold in this context (explain only).
    #[arg(long, global = true, value_name = "CONTEXT")]
    require_actual: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a causal formula in a situation.
    Eval {
        model: String,
        #[arg(long)]
        context: String,
        #[arg(long)]
        formula: String,
    },
    /// Solve the equations in a context, optionally after an intervention.
    Solve {
        model: String,
        #[arg(long)]
        context: String,
        /// Intervention, as `X=x, Y=y`.
        #[arg(long = "do", value_name = "SETTING")]
        intervention: Option<String>,
    },
    /// Check or enumerate actual causes.
    Cause(CauseArgs),
    /// Check or enumerate sufficient causes.
    Suffcause(CauseArgs),
    /// Check or enumerate explanations over a set of contexts.
    Explain {
        model: String,
        /// Context file describing the epistemic state.
        #[arg(long, value_name = "FILE")]
        k: String,
        #[arg(long)]
        phi: String,
        /// Candidate conjunction; enumerate when absent.
        #[arg(long)]
        candidate: Option<String>,
        /// Also consider events over the explanandum's own variables.
        #[arg(long)]
        include_explanandum: bool,
    },
    /// Core, goodness and power of a partial explanation.
    Partial(ProbArgs),
    /// Goodness of a partial explanation.
    Goodness(ProbArgs),
    /// Explanatory power of a candidate.
    Power {
        #[command(flatten)]
        base: ProbArgs,
        #[arg(long, value_enum, default_value_t = Measure::Causal)]
        measure: Measure,
    },
    /// Check or enumerate explanations over situations from several models.
    GeneralExplain {
        /// Situation file: lines `MODEL : CONTEXT`.
        #[arg(long, value_name = "FILE")]
        situations: String,
        #[arg(long)]
        phi: String,
        /// Hypothesis of the candidate; a formula or `valid:MODEL`.
        #[arg(long, requires = "candidate")]
        psi: Option<String>,
        #[arg(long, requires = "psi")]
        candidate: Option<String>,
        /// Hypothesis file, one per line; defaults to `TRUE`.
        #[arg(long, value_name = "FILE")]
        psi_set: Option<String>,
        #[arg(long)]
        include_explanandum: bool,
    },
    /// Probability of a formula, or that a conjunction is a cause.
    Prob {
        model: String,
        #[arg(long, conflicts_with = "cause", required_unless_present = "cause")]
        formula: Option<String>,
        #[arg(long, requires = "phi")]
        cause: Option<String>,
        #[arg(long)]
        phi: Option<String>,
        /// Weight file; defaults to the model's `prob:` block, else uniform.
        #[arg(long, value_name = "FILE")]
        weights: Option<String>,
    },
    /// List the bundled models and files.
    Fixtures,
}

#[derive(Debug, Args)]
struct CauseArgs {
    model: String,
    #[arg(long)]
    context: String,
    #[arg(long)]
    phi: String,
    #[arg(long, conflicts_with = "enumerate", required_unless_present = "enumerate")]
    candidate: Option<String>,
    #[arg(long)]
    enumerate: bool,
}

#[derive(Debug, Args)]
struct ProbArgs {
    model: String,
    #[arg(long)]
    phi: String,
    #[arg(long)]
    candidate: String,
    /// Weighted context file for the state; defaults to the prior
    /// conditioned on the explanandum.
    #[arg(long, value_name = "FILE")]
    k: Option<String>,
    /// Weighted context file for the prior; defaults to the model's
    /// `prob:` block.
    #[arg(long, value_name = "FILE")]
    prior: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Measure {
    Causal,
    Gardenfors,
}

#[derive(Debug, ThisError)]
enum CliError {
    #[error("{file}:{source}")]
    File { file: String, source: DslError },
    #[error("{flag}: {source}")]
    Arg { flag: &'static str, source: Error },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn kind(&self) -> String {
        match self {
            CliError::File { source, .. } => source.kind(),
            CliError::Arg { source, .. } | CliError::Core(source) => error_kind(source),
            CliError::Usage(_) => "UsageError".into(),
        }
    }

    fn exit_code(&self) -> i32 {
        match self {
            CliError::Arg { source, .. } | CliError::Core(source)
                if matches!(source, Error::SearchBudgetExceeded { .. }) =>
            {
                3
            }
            _ => 2,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn arg<T>(flag: &'static str, r: causa::Result<T>) -> CliResult<T> {
    r.map_err(|source| CliError::Arg { flag, source })
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the tool on `argv` (without the program name): exit code 0 for any
/// definite answer, 2 for usage and input errors, 3 when the search budget
/// runs out.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = std::iter::once(std::ffi::OsString::from("causa")).chain(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let json = cli.json;
    match execute(&cli) {
        Ok(result) => Outcome {
            code: 0,
            stdout: if json {
                result.to_json() + "\n"
            } else {
                result.text.join("\n") + "\n"
            },
            stderr: String::new(),
        },
        Err(e) => {
            let stderr = if json {
                let diag = json!({ "error": e.kind(), "message": e.to_string() });
                serde_json::to_string_pretty(&diag).expect("plain JSON") + "\n"
            } else {
                format!("error[{}]: {e}\n", e.kind())
            };
            Outcome {
                code: e.exit_code(),
                stdout: String::new(),
                stderr,
            }
        }
    }
}

/// Reads a file, falling back to a bundled fixture of the same name.
fn read_source(arg: &str, base: Option<&Path>) -> CliResult<(String, String)> {
    let mut candidates: Vec<PathBuf> = Vec::new();
    if let Some(dir) = base {
        candidates.push(dir.join(arg));
    }
    candidates.push(PathBuf::from(arg));
    for path in candidates {
        if path.is_file() {
            return std::fs::read_to_string(&path)
                .map(|text| (path.display().to_string(), text))
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())));
        }
    }
    if let Some(f) = fixtures::model(arg).or_else(|| fixtures::file(arg)) {
        return Ok((f.name.to_owned(), f.text.to_owned()));
    }
    Err(CliError::Usage(format!("no file or bundled fixture named `{arg}`")))
}

struct Session<'a> {
    cli: &'a Cli,
    models: HashMap<String, Arc<ModelDocument>>,
}

impl<'a> Session<'a> {
    fn budget(&self) -> Budget {
        Budget::new(self.cli.budget.unwrap_or(DEFAULT_BUDGET))
    }

    fn max_width(&self, default: usize) -> CliResult<usize> {
        match self.cli.max_width {
            Some(0) => Err(CliError::Arg {
                flag: "--max-width",
                source: Error::ZeroWidth,
            }),
            Some(w) => Ok(w),
            None => Ok(default),
        }
    }

    fn model(&mut self, arg: &str, base: Option<&Path>) -> CliResult<Arc<ModelDocument>> {
        if let Some(doc) = self.models.get(arg) {
            return Ok(Arc::clone(doc));
        }
        let (file, text) = read_source(arg, base)?;
        let doc = Arc::new(parse_model_document(&text).map_err(|source| CliError::File { file, source })?);
        self.models.insert(arg.to_owned(), Arc::clone(&doc));
        Ok(doc)
    }

    fn contexts(&self, arg: &str, model: &CausalModel) -> CliResult<crate::ContextList> {
        let (file, text) = read_source(arg, None)?;
        parse_context_list(&text, model.signature()).map_err(|source| CliError::File { file, source })
    }

    fn state(&self, arg: &str, model: &Arc<CausalModel>) -> CliResult<ExactEpistemicState> {
        let list = self.contexts(arg, model)?;
        Ok(match list.weights() {
            Some(w) => ExactEpistemicState::weighted(Arc::clone(model), list.contexts().into_iter().zip(w).collect())?,
            None => ExactEpistemicState::new(Arc::clone(model), list.contexts())?,
        })
    }

    fn prior(&self, arg: Option<&str>, doc: &ModelDocument) -> CliResult<Option<ExactPriorState>> {
        if let Some(arg) = arg {
            let list = self.contexts(arg, &doc.model)?;
            let weights = list
                .weights()
                .ok_or_else(|| CliError::Usage(format!("{arg}: a prior needs a weight on every line")))?;
            return Ok(Some(ExactPriorState::new(
                Arc::clone(&doc.model),
                list.contexts().into_iter().zip(weights).collect(),
            )?));
        }
        Ok(doc.probabilistic().transpose()?.map(|p| p.prior()))
    }
}

fn formula(flag: &'static str, text: &str, model: &CausalModel) -> CliResult<CausalFormula> {
    arg(flag, parse_formula(text, model.signature()))
}

fn candidate(flag: &'static str, text: &str, model: &CausalModel) -> CliResult<ConjunctiveEvent> {
    let f = formula(flag, text, model)?;
    let c = arg(flag, ConjunctiveEvent::from_formula(&f))?;
    arg(flag, c.check(model.signature()))?;
    Ok(c)
}

fn context(flag: &'static str, text: &str, model: &CausalModel) -> CliResult<Context> {
    arg(flag, model.signature().parse_context(text))
}

fn show_context(model: &CausalModel, c: &Context) -> String {
    model.signature().display_context(c).to_string()
}

fn assignment_json(a: &Assignment) -> Value {
    Value::Object(a.iter().map(|(k, v)| (k.to_owned(), Value::from(v))).collect())
}

fn witness_json(w: &Ac2Witness) -> Value {
    json!({
        "Z": w.partition.zside,
        "W": w.partition.wside,
        "x_prime": assignment_json(&w.alt_x),
        "w_prime": assignment_json(&w.alt_w),
        "z_star": assignment_json(&w.baseline_z),
    })
}

fn witness_text(w: &Ac2Witness) -> String {
    let w_side = if w.partition.wside.is_empty() {
        "{}".to_string()
    } else {
        format!("{{{}}}", w.partition.wside.join(", "))
    };
    let mut s = format!("W = {w_side}, x' = {}", w.alt_x);
    if !w.alt_w.is_empty() {
        s.push_str(&format!(", w' = {}", w.alt_w));
    }
    s
}

fn require_no_actual(cli: &Cli) -> CliResult<()> {
    if cli.require_actual.is_some() {
        return Err(CliError::Usage("--require-actual only applies to `explain`".into()));
    }
    Ok(())
}

fn execute(cli: &Cli) -> CliResult<QueryResult> {
    let mut s = Session {
        cli,
        models: HashMap::new(),
    };
    if !matches!(cli.command, Command::Explain { .. }) {
        require_no_actual(cli)?;
    }
    match &cli.command {
        Command::Eval {
            model,
            context: ctx,
            formula: text,
        } => {
            let doc = s.model(model, None)?;
            let m = &doc.model;
            let c = context("--context", ctx, m)?;
            let f = formula("--formula", text, m)?;
            let sit = Situation::new(Arc::clone(m), c)?;
            let holds = evaluate(&sit, &f)?;
            let mut r = QueryResult::new("eval");
            r.input("model", model.as_str())
                .input("context", show_context(m, &sit.context))
                .input("formula", f.to_string());
            r.verdict = Some(holds);
            r.line(holds.to_string());
            Ok(r)
        }
        Command::Solve {
            model,
            context: ctx,
            intervention,
        } => {
            let doc = s.model(model, None)?;
            let mut m: CausalModel = (*doc.model).clone();
            let c = context("--context", ctx, &m)?;
            let mut r = QueryResult::new("solve");
            r.input("model", model.as_str()).input("context", show_context(&m, &c));
            if let Some(text) = intervention {
                let setting = candidate("--do", text, &m)?;
                let a = Assignment::from_pairs(setting.events().iter().map(|e| (e.variable.clone(), e.value.clone())));
                m = arg("--do", m.intervene(&a))?;
                r.input("do", setting.to_string());
            }
            let state = m.solve(&c)?;
            r.value("state", assignment_json(&state));
            r.line(state.to_string());
            Ok(r)
        }
        Command::Cause(a) => cause(&mut s, a, false),
        Command::Suffcause(a) => cause(&mut s, a, true),
        Command::Explain {
            model,
            k,
            phi,
            candidate: cand,
            include_explanandum,
        } => {
            let doc = s.model(model, None)?;
            let m = &doc.model;
            let state = s.state(k, m)?;
            let f = formula("--phi", phi, m)?;
            let actual = cli
                .require_actual
                .as_ref()
                .map(|text| context("--require-actual", text, m).map(|context| ActualWorld { context, in_k: false }))
                .transpose()?;
            let mut r = QueryResult::new("explain");
            r.input("model", model.as_str())
                .input(
                    "k",
                    Value::from(state.contexts().iter().map(|c| show_context(m, c)).collect::<Vec<_>>()),
                )
                .input("phi", f.to_string());
            if let Some(a) = &actual {
                r.input("require_actual", show_context(m, &a.context));
            }
            let mut budget = s.budget();
            match cand {
                Some(text) => {
                    let c = candidate("--candidate", text, m)?;
                    r.input("candidate", c.to_string());
                    let rep = check_explanation(&state, &c, &f, actual.as_ref(), &mut budget)?;
                    r.verdict = Some(rep.verdict);
                    r.clause("EX1", rep.ex1)
                        .clause("EX2", rep.ex2)
                        .clause("EX3", rep.ex3)
                        .clause("EX4", rep.ex4);
                    if let Some(a) = rep.actual {
                        r.clause("actual", a);
                    }
                    let failing: Vec<String> = rep.failing_contexts.iter().map(|c| show_context(m, c)).collect();
                    r.value("failing_contexts", failing.clone())
                        .value("ex3_blocker", rep.ex3_blocker.as_ref().map(|b| b.to_string()));
                    r.line(format!(
                        "{c} {} an explanation of {f}",
                        if rep.verdict { "is" } else { "is not" }
                    ));
                    for (name, ok) in [("EX1", rep.ex1), ("EX2", rep.ex2), ("EX3", rep.ex3), ("EX4", rep.ex4)] {
                        r.line(format!("  {name} {ok}"));
                    }
                    if let Some(a) = rep.actual {
                        r.line(format!("  actual {a}"));
                    }
                    for c in &failing {
                        r.line(format!("  not sufficient in {c}"));
                    }
                    if let Some(b) = &rep.ex3_blocker {
                        r.line(format!("  {b} already satisfies EX2"));
                    }
                }
                None => {
                    let opts = ExplanationOptions {
                        max_width: s.max_width(usize::MAX)?,
                        include_explanandum: *include_explanandum,
                        actual,
                    };
                    let found = enumerate_explanations(&state, &f, &opts, &mut budget)?;
                    list(&mut r, "explanations", "no explanation", &found);
                }
            }
            Ok(r)
        }
        Command::Partial(a) => partial(&mut s, a, "partial"),
        Command::Goodness(a) => partial(&mut s, a, "goodness"),
        Command::Power { base, measure } => {
            let doc = s.model(&base.model, None)?;
            let m = &doc.model;
            let f = formula("--phi", &base.phi, m)?;
            let c = candidate("--candidate", &base.candidate, m)?;
            let prior = s
                .prior(base.prior.as_deref(), &doc)?
                .ok_or_else(|| CliError::Usage("power needs a prior: pass --prior or add a `prob:` block".into()))?;
            let state = match &base.k {
                Some(k) => s.state(k, m)?,
                None => prior.condition(&f)?,
            };
            let value = match measure {
                Measure::Causal => explanatory_power(&prior, &state, &c, &f, &mut s.budget())?,
                Measure::Gardenfors => gardenfors_power(&prior, &state, &c, &f)?,
            };
            let mut r = QueryResult::new("power");
            r.input("model", base.model.as_str())
                .input("phi", f.to_string())
                .input("candidate", c.to_string())
                .input(
                    "measure",
                    match measure {
                        Measure::Causal => "causal",
                        Measure::Gardenfors => "gardenfors",
                    },
                );
            r.value("power", ratio(&value));
            r.line(ratio(&value));
            Ok(r)
        }
        Command::GeneralExplain {
            situations,
            phi,
            psi,
            candidate: cand,
            psi_set,
            include_explanandum,
        } => general(
            &mut s,
            situations,
            phi,
            psi.as_deref(),
            cand.as_deref(),
            psi_set.as_deref(),
            *include_explanandum,
        ),
        Command::Prob {
            model,
            formula: text,
            cause,
            phi,
            weights,
        } => {
            let doc = s.model(model, None)?;
            let m = &doc.model;
            let (pmodel, source) = match weights {
                Some(w) => {
                    let list = s.contexts(w, m)?;
                    let ws = list
                        .weights()
                        .ok_or_else(|| CliError::Usage(format!("{w}: every line needs a weight")))?;
                    (
                        ExactProbabilisticModel::new(Arc::clone(m), list.contexts().into_iter().zip(ws).collect())?,
                        w.clone(),
                    )
                }
                None => match doc.probabilistic() {
                    Some(p) => (p?, "model".to_string()),
                    None => (ExactProbabilisticModel::uniform(Arc::clone(m)), "uniform".to_string()),
                },
            };
            let mut r = QueryResult::new("prob");
            r.input("model", model.as_str()).input("distribution", source);
            let p = match (text, cause, phi) {
                (Some(text), _, _) => {
                    let f = formula("--formula", text, m)?;
                    r.input("formula", f.to_string());
                    probability_of_formula(&pmodel, &f)?
                }
                (None, Some(c), Some(phi)) => {
                    let c = candidate("--cause", c, m)?;
                    let f = formula("--phi", phi, m)?;
                    r.input("cause", c.to_string()).input("phi", f.to_string());
                    probability_of_cause(&pmodel, &c, &f, &mut s.budget())?
                }
                _ => return Err(CliError::Usage("pass --formula, or --cause with --phi".into())),
            };
            r.value("probability", ratio(&p));
            r.line(ratio(&p));
            Ok(r)
        }
        Command::Fixtures => {
            let mut r = QueryResult::new("fixtures");
            let models: Vec<Value> = fixtures::MODELS
                .iter()
                .map(|f| json!({ "name": f.name, "summary": f.summary }))
                .collect();
            let files: Vec<Value> = fixtures::FILES
                .iter()
                .map(|f| json!({ "name": f.name, "summary": f.summary }))
                .collect();
            r.value("models", models).value("files", files);
            r.line("models:");
            for f in fixtures::MODELS {
                r.line(format!("  {:<32} {}", f.name, f.summary));
            }
            r.line("files:");
            for f in fixtures::FILES {
                r.line(format!("  {:<32} {}", f.name, f.summary));
            }
            Ok(r)
        }
    }
}

fn list<T: ToString>(r: &mut QueryResult, key: &str, none: &str, items: &[T]) {
    let names: Vec<String> = items.iter().map(|i| i.to_string()).collect();
    if names.is_empty() {
        r.line(none);
    }
    for n in &names {
        r.line(n.clone());
    }
    r.value(key, names);
}

fn verdict_clauses(r: &mut QueryResult, v: &CauseVerdict) {
    r.clause("AC1", v.ac1)
        .clause("AC2", v.ac2.is_some())
        .clause("AC3", v.ac3);
}

fn cause(s: &mut Session, a: &CauseArgs, sufficient: bool) -> CliResult<QueryResult> {
    let doc = s.model(&a.model, None)?;
    let m = &doc.model;
    let c = context("--context", &a.context, m)?;
    let f = formula("--phi", &a.phi, m)?;
    let sit = Situation::new(Arc::clone(m), c)?;
    let name = if sufficient { "suffcause" } else { "cause" };
    let mut r = QueryResult::new(name);
    r.input("model", a.model.as_str())
        .input("context", show_context(m, &sit.context))
        .input("phi", f.to_string());
    let mut budget = s.budget();
    match &a.candidate {
        Some(text) => {
            let cand = candidate("--candidate", text, m)?;
            r.input("candidate", cand.to_string());
            let v = check_actual_cause(&sit, &cand, &f, &mut budget)?;
            let verdict = if sufficient { v.is_sufficient() } else { v.is_actual() };
            r.verdict = Some(verdict);
            verdict_clauses(&mut r, &v);
            if let Some(w) = &v.ac2 {
                r.witnesses.push(witness_json(w));
            }
            r.value("class", v.class.to_string());
            let what = if sufficient {
                "a sufficient cause"
            } else {
                "an actual cause"
            };
            r.line(format!(
                "{cand} {} {what} of {f} ({})",
                if verdict { "is" } else { "is not" },
                v.class
            ));
            r.line(format!("  AC1 {}", v.ac1));
            match &v.ac2 {
                Some(w) => r.line(format!("  AC2 true ({})", witness_text(w))),
                None => r.line("  AC2 false"),
            };
            r.line(format!("  AC3 {}", v.ac3));
        }
        None => {
            let width = s.max_width(m.signature().endogenous().len())?;
            let found = if sufficient {
                enumerate_sufficient_causes(&sit, &f, width, &mut budget)?
            } else {
                enumerate_actual_causes(&sit, &f, width, &mut budget)?
            };
            for v in &found {
                let mut w = witness_json(v.ac2.as_ref().expect("enumerated causes have witnesses"));
                w.as_object_mut()
                    .expect("object")
                    .insert("candidate".into(), Value::from(v.candidate.to_string()));
                r.witnesses.push(w);
            }
            let cands: Vec<&ConjunctiveEvent> = found.iter().map(|v| &v.candidate).collect();
            let names: Vec<String> = cands.iter().map(|c| c.to_string()).collect();
            list(&mut r, "causes", "no cause", &names);
        }
    }
    Ok(r)
}

fn partial(s: &mut Session, a: &ProbArgs, command: &str) -> CliResult<QueryResult> {
    let doc = s.model(&a.model, None)?;
    let m = &doc.model;
    let f = formula("--phi", &a.phi, m)?;
    let c = candidate("--candidate", &a.candidate, m)?;
    let prior = s.prior(a.prior.as_deref(), &doc)?;
    let state = match (&a.k, &prior) {
        (Some(k), _) => s.state(k, m)?,
        (None, Some(p)) => p.condition(&f)?,
        (None, None) => {
            return Err(CliError::Usage(
                "pass --k, or give the model a prior with --prior or a `prob:` block".into(),
            ))
        }
    };
    let mut r = QueryResult::new(command);
    r.input("model", a.model.as_str())
        .input("phi", f.to_string())
        .input("candidate", c.to_string())
        .input(
            "k",
            Value::from(state.contexts().iter().map(|k| show_context(m, k)).collect::<Vec<_>>()),
        );
    let mut budget = s.budget();
    if command == "goodness" {
        let g = goodness(&state, &c, &f, &mut budget)?;
        r.value("goodness", ratio(&g));
        r.line(ratio(&g));
        return Ok(r);
    }
    let rep = partial_explanation(&state, prior.as_ref(), &c, &f, &mut budget)?;
    r.verdict = Some(rep.core_failure.is_none());
    let core: Vec<String> = rep.core.iter().map(|k| show_context(m, k)).collect();
    let opt = |p: &Option<Rational>| p.as_ref().map(ratio);
    r.value("core", core.clone())
        .value("core_failure", rep.core_failure)
        .value("goodness", opt(&rep.goodness))
        .value("probability_of_explanation", opt(&rep.probability_of_explanation))
        .value("power", opt(&rep.power))
        .value("gardenfors_power", opt(&rep.gardenfors_power));
    r.line(format!("core of {c}: {} context(s)", core.len()));
    for k in &core {
        r.line(format!("  {k}"));
    }
    match rep.core_failure {
        Some(clause) => r.line(format!("the core does not make it an explanation ({clause} fails)")),
        None => r.line("it is an explanation relative to its core"),
    };
    for (name, v) in [
        ("goodness", &rep.goodness),
        ("probability of explanation", &rep.probability_of_explanation),
        ("power", &rep.power),
        ("gardenfors power", &rep.gardenfors_power),
    ] {
        if let Some(v) = v {
            r.line(format!("{name}: {}", ratio(v)));
        }
    }
    Ok(r)
}

/// A hypothesis as written, and the formula it denotes.
struct Hypothesis {
    label: String,
    formula: CausalFormula,
}

fn hypothesis(s: &mut Session, text: &str, base: Option<&Path>) -> CliResult<Hypothesis> {
    let text = text.trim();
    let formula = match text.strip_prefix("valid:") {
        Some(name) => characterizing_formula(&s.model(name.trim(), base)?.model),
        None => arg("--psi", causa::formula::parse_unchecked(text))?,
    };
    Ok(Hypothesis {
        label: text.to_owned(),
        formula,
    })
}

fn general(
    s: &mut Session,
    situations: &str,
    phi: &str,
    psi: Option<&str>,
    cand: Option<&str>,
    psi_set: Option<&str>,
    include_explanandum: bool,
) -> CliResult<QueryResult> {
    let (file, text) = read_source(situations, None)?;
    let base = Path::new(&file).parent().map(Path::to_path_buf);
    let mut sits = Vec::new();
    let mut shown = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or_default().trim();
        if line.is_empty() {
            continue;
        }
        let bad = |message: String| CliError::File {
            file: file.clone(),
            source: DslError::Syntax {
                line: i + 1,
                column: 1,
                message,
            },
        };
        let (name, ctx) = line
            .split_once(':')
            .ok_or_else(|| bad("expected `MODEL : CONTEXT`".into()))?;
        let doc = s.model(name.trim(), base.as_deref())?;
        let c = doc
            .model
            .signature()
            .parse_context(ctx.trim())
            .map_err(|e| bad(e.to_string()))?;
        shown.push(format!("{} : {}", name.trim(), show_context(&doc.model, &c)));
        sits.push(Situation::new(Arc::clone(&doc.model), c)?);
    }
    let set = ExactSituationSet::new(sits)?;
    let phi_f = arg("--phi", causa::formula::parse_unchecked(phi))?;

    let mut hyps = Vec::new();
    match psi_set {
        Some(path) => {
            let (pfile, ptext) = read_source(path, None)?;
            let pbase = Path::new(&pfile).parent().map(Path::to_path_buf);
            for line in ptext.lines() {
                let line = line.split('#').next().unwrap_or_default().trim();
                if !line.is_empty() {
                    hyps.push(hypothesis(s, line, pbase.as_deref())?);
                }
            }
        }
        None => hyps.push(Hypothesis {
            label: "TRUE".into(),
            formula: CausalFormula::Const(true),
        }),
    }
    let label = |hyps: &[Hypothesis], f: &CausalFormula| {
        hyps.iter()
            .find(|h| h.formula == *f)
            .map_or_else(|| f.to_string(), |h| h.label.clone())
    };

    let mut r = QueryResult::new("general-explain");
    r.input("situations", shown)
        .input("phi", phi_f.to_string())
        .input("hypotheses", hyps.iter().map(|h| h.label.clone()).collect::<Vec<_>>());
    let formulas: Vec<CausalFormula> = hyps.iter().map(|h| h.formula.clone()).collect();
    let mut budget = s.budget();
    match (psi, cand) {
        (Some(psi), Some(cand)) => {
            let h = hypothesis(s, psi, base.as_deref())?;
            let event = arg("--candidate", causa::formula::parse_unchecked(cand))
                .and_then(|f| arg("--candidate", ConjunctiveEvent::from_formula(&f)))?;
            let shown = format!("({}, {event})", h.label);
            r.input("candidate", shown.clone());
            let g = GeneralExplanation {
                psi: h.formula.clone(),
                event,
            };
            hyps.push(h);
            let rep = check_general_explanation(&set, &g, &phi_f, &formulas, &mut budget)?;
            r.verdict = Some(rep.verdict);
            r.clause("EX1", rep.ex1)
                .clause("EX2", rep.ex2)
                .clause("EX3", rep.ex3)
                .clause("EX4", rep.ex4);
            r.value("valid_models", rep.valid_models.clone())
                .value("failing_situations", rep.failing_situations.clone())
                .value(
                    "blocker",
                    rep.blocker
                        .as_ref()
                        .map(|b| format!("({}, {})", label(&hyps, &b.psi), b.event)),
                );
            r.line(format!(
                "{shown} {} an explanation of {phi_f}",
                if rep.verdict { "is" } else { "is not" }
            ));
            for (name, ok) in [("EX1", rep.ex1), ("EX2", rep.ex2), ("EX3", rep.ex3), ("EX4", rep.ex4)] {
                r.line(format!("  {name} {ok}"));
            }
            if let Some(b) = &rep.blocker {
                r.line(format!("  blocked by ({}, {})", label(&hyps, &b.psi), b.event));
            }
        }
        _ => {
            let width = s.max_width(usize::MAX)?;
            let found =
                enumerate_general_explanations(&set, &phi_f, &formulas, width, include_explanandum, &mut budget)?;
            let names: Vec<String> = found
                .iter()
                .map(|g| format!("({}, {})", label(&hyps, &g.psi), g.event))
                .collect();
            list(&mut r, "explanations", "no explanation", &names);
        }
    }
    Ok(r)
}
