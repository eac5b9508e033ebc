#![allow(dead_code)]

use std::sync::Arc;

use causa::formula::parse_unchecked;
use causa::{
    Budget, CausalFormula, CausalModel, ConjunctiveEvent, Context, EpistemicState, EquationTable, Probability,
    Rational, Signature, Situation,
};

pub fn r(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

pub fn bit(b: bool) -> String {
    if b { "1" } else { "0" }.to_string()
}

pub fn budget() -> Budget {
    Budget::default()
}

pub fn phi(text: &str) -> CausalFormula {
    parse_unchecked(text).unwrap()
}

pub fn conj(text: &str) -> ConjunctiveEvent {
    ConjunctiveEvent::from_formula(&parse_unchecked(text).unwrap()).unwrap()
}

pub fn ctx(m: &CausalModel, text: &str) -> Context {
    m.signature().parse_context(text).unwrap()
}

pub fn at(m: &Arc<CausalModel>, text: &str) -> Situation {
    Situation::new(Arc::clone(m), ctx(m, text)).unwrap()
}

pub fn state(m: &Arc<CausalModel>, contexts: &[&str]) -> EpistemicState<Rational> {
    EpistemicState::new(Arc::clone(m), contexts.iter().map(|c| ctx(m, c)).collect()).unwrap()
}

pub fn weighted(m: &Arc<CausalModel>, contexts: &[(&str, Rational)]) -> EpistemicState<Rational> {
    EpistemicState::weighted(
        Arc::clone(m),
        contexts.iter().map(|(c, w)| (ctx(m, c), w.clone())).collect(),
    )
    .unwrap()
}

pub fn names(events: &[ConjunctiveEvent]) -> Vec<String> {
    events.iter().map(|e| e.to_string()).collect()
}

fn arson_sig(extra_exo: bool) -> Signature {
    let mut b = Signature::builder().exogenous("U", ["u00", "u10", "u01", "u11"]);
    if extra_exo {
        b = b.exogenous("UL", ["0", "1"]);
    }
    b.endogenous("ML1", ["0", "1"])
        .endogenous("ML2", ["0", "1"])
        .endogenous("FB", ["0", "1"])
        .build()
        .unwrap()
}

fn matches(sig: &Signature) -> Vec<EquationTable> {
    vec![
        EquationTable::tabulate(sig, "ML1", &["U"], |u| u[0][1..2].to_string()).unwrap(),
        EquationTable::tabulate(sig, "ML2", &["U"], |u| u[0][2..3].to_string()).unwrap(),
    ]
}

/// Either match suffices.
pub fn arson_disjunctive() -> Arc<CausalModel> {
    let sig = arson_sig(false);
    let mut eqs = matches(&sig);
    eqs.push(EquationTable::tabulate(&sig, "FB", &["ML1", "ML2"], |m| bit(m[0] == "1" || m[1] == "1")).unwrap());
    Arc::new(CausalModel::new(sig, eqs).unwrap())
}

/// Both matches are needed.
pub fn arson_conjunctive() -> Arc<CausalModel> {
    let sig = arson_sig(false);
    let mut eqs = matches(&sig);
    eqs.push(EquationTable::tabulate(&sig, "FB", &["ML1", "ML2"], |m| bit(m[0] == "1" && m[1] == "1")).unwrap());
    Arc::new(CausalModel::new(sig, eqs).unwrap())
}

/// Conjunctive arsonists plus an exogenous alternative cause (lightning).
pub fn arson_conjunctive_other_causes() -> Arc<CausalModel> {
    let sig = arson_sig(true);
    let mut eqs = matches(&sig);
    eqs.push(
        EquationTable::tabulate(&sig, "FB", &["ML1", "ML2", "UL"], |m| {
            bit((m[0] == "1" && m[1] == "1") || m[2] == "1")
        })
        .unwrap(),
    );
    Arc::new(CausalModel::new(sig, eqs).unwrap())
}

/// Disjunctive arsonists, but fire also needs oxygen.
pub fn arson_oxygen() -> Arc<CausalModel> {
    let sig = Signature::builder()
        .exogenous("U", ["u00", "u10", "u01", "u11"])
        .exogenous("UO", ["0", "1"])
        .endogenous("ML1", ["0", "1"])
        .endogenous("ML2", ["0", "1"])
        .endogenous("O", ["0", "1"])
        .endogenous("FB", ["0", "1"])
        .build()
        .unwrap();
    let mut eqs = matches(&sig);
    eqs.push(EquationTable::tabulate(&sig, "O", &["UO"], |u| u[0].to_string()).unwrap());
    eqs.push(
        EquationTable::tabulate(&sig, "FB", &["ML1", "ML2", "O"], |m| {
            bit((m[0] == "1" || m[1] == "1") && m[2] == "1")
        })
        .unwrap(),
    );
    Arc::new(CausalModel::new(sig, eqs).unwrap())
}

/// April showers: AS and ES copy their exogenous parents; F is 0 (no fire),
/// 1 (May) or 2 (June).
pub fn april_showers() -> Arc<CausalModel> {
    let storms = ["00", "10", "01", "11"];
    let sig = Signature::builder()
        .exogenous("UAS", ["0", "1"])
        .exogenous("UES", storms)
        .endogenous("AS", ["0", "1"])
        .endogenous("ES", storms)
        .endogenous("F", ["0", "1", "2"])
        .build()
        .unwrap();
    let eqs = vec![
        EquationTable::tabulate(&sig, "AS", &["UAS"], |u| u[0].to_string()).unwrap(),
        EquationTable::tabulate(&sig, "ES", &["UES"], |u| u[0].to_string()).unwrap(),
        EquationTable::tabulate(&sig, "F", &["AS", "ES"], |p| {
            let (may, june) = (&p[1][0..1] == "1", &p[1][1..2] == "1");
            let wet = p[0] == "1";
            match (wet, may, june) {
                (_, false, false) => "0",
                (false, true, _) => "1",
                _ => "2",
            }
            .to_string()
        })
        .unwrap(),
    ];
    Arc::new(CausalModel::new(sig, eqs).unwrap())
}

pub fn victoria() -> Arc<CausalModel> {
    let sig = Signature::builder()
        .exogenous("UC", ["0", "1"])
        .exogenous("US", ["0", "1"])
        .exogenous("USal", ["0", "1"])
        .endogenous("Canaries", ["0", "1"])
        .endogenous("Sunny", ["0", "1"])
        .endogenous("Salon", ["0", "1"])
        .endogenous("Tan", ["0", "1"])
        .build()
        .unwrap();
    let eqs = vec![
        EquationTable::tabulate(&sig, "Canaries", &["UC"], |u| u[0].to_string()).unwrap(),
        EquationTable::tabulate(&sig, "Sunny", &["US"], |u| u[0].to_string()).unwrap(),
        EquationTable::tabulate(&sig, "Salon", &["USal"], |u| u[0].to_string()).unwrap(),
        EquationTable::tabulate(&sig, "Tan", &["Canaries", "Sunny", "Salon"], |p| {
            bit((p[0] == "1" && p[1] == "1") || p[2] == "1")
        })
        .unwrap(),
    ];
    Arc::new(CausalModel::new(sig, eqs).unwrap())
}

/// The five tan-compatible contexts with their weights.
pub fn victoria_state(m: &Arc<CausalModel>) -> EpistemicState<Rational> {
    weighted(
        m,
        &[
            ("UC=1, US=1, USal=0", r(3, 10)),
            ("UC=1, US=1, USal=1", r(3, 20)),
            ("UC=1, US=0, USal=1", r(1, 20)),
            ("UC=0, US=1, USal=1", r(1, 4)),
            ("UC=0, US=0, USal=1", r(1, 4)),
        ],
    )
}

/// Television: `T = U0`; `P = T` when `U1 = 1`, otherwise the inexplicable
/// cause blanks the picture.
pub fn tv() -> Arc<CausalModel> {
    let sig = Signature::builder()
        .exogenous("U0", ["0", "1"])
        .exogenous("U1", ["0", "1"])
        .endogenous("T", ["0", "1"])
        .endogenous("P", ["0", "1"])
        .build()
        .unwrap();
    let eqs = vec![
        EquationTable::tabulate(&sig, "T", &["U0"], |u| u[0].to_string()).unwrap(),
        EquationTable::tabulate(&sig, "P", &["T", "U1"], |p| bit(p[0] == "1" && p[1] == "1")).unwrap(),
    ];
    Arc::new(CausalModel::new(sig, eqs).unwrap())
}

/// Television with the inexplicable cause named: `I = U1`.
pub fn tv_named() -> Arc<CausalModel> {
    let sig = Signature::builder()
        .exogenous("U0", ["0", "1"])
        .exogenous("U1", ["0", "1"])
        .endogenous("T", ["0", "1"])
        .endogenous("I", ["0", "1"])
        .endogenous("P", ["0", "1"])
        .build()
        .unwrap();
    let eqs = vec![
        EquationTable::tabulate(&sig, "T", &["U0"], |u| u[0].to_string()).unwrap(),
        EquationTable::tabulate(&sig, "I", &["U1"], |u| u[0].to_string()).unwrap(),
        EquationTable::tabulate(&sig, "P", &["T", "I"], |p| bit(p[0] == "1" && p[1] == "1")).unwrap(),
    ];
    Arc::new(CausalModel::new(sig, eqs).unwrap())
}

pub const TV_K: [&str; 3] = ["U0=0, U1=0", "U0=1, U1=0", "U0=0, U1=1"];

pub fn tv_weighted(m: &Arc<CausalModel>) -> EpistemicState<Rational> {
    weighted(
        m,
        &[
            ("U0=0, U1=0", r(1, 20)),
            ("U0=1, U1=0", r(1, 2)),
            ("U0=0, U1=1", r(9, 20)),
        ],
    )
}

fn paresis_sig() -> Signature {
    Signature::builder()
        .exogenous("U1", ["0", "1"])
        .exogenous("U2", ["0", "1"])
        .endogenous("S", ["0", "1"])
        .endogenous("P", ["0", "1"])
        .build()
        .unwrap()
}

/// Syphilis leads to paresis when the hidden factor `U2` is present.
pub fn paresis() -> Arc<CausalModel> {
    let sig = paresis_sig();
    let eqs = vec![
        EquationTable::tabulate(&sig, "S", &["U1"], |u| u[0].to_string()).unwrap(),
        EquationTable::tabulate(&sig, "P", &["S", "U2"], |p| bit(p[0] == "1" && p[1] == "1")).unwrap(),
    ];
    Arc::new(CausalModel::new(sig, eqs).unwrap())
}

/// Alternative model: paresis does not depend on syphilis.
pub fn paresis_alt() -> Arc<CausalModel> {
    let sig = paresis_sig();
    let eqs = vec![
        EquationTable::tabulate(&sig, "S", &["U1"], |u| u[0].to_string()).unwrap(),
        EquationTable::tabulate(&sig, "P", &["U2"], |p| p[0].to_string()).unwrap(),
    ];
    Arc::new(CausalModel::new(sig, eqs).unwrap())
}

/// Low pressure `L` causes rain `R`; the barometer `B` falls with low
/// pressure unless it is defective.
pub fn barometer() -> Arc<CausalModel> {
    let sig = Signature::builder()
        .exogenous("U", ["0", "1"])
        .exogenous("D", ["0", "1"])
        .endogenous("L", ["0", "1"])
        .endogenous("R", ["0", "1"])
        .endogenous("B", ["0", "1"])
        .build()
        .unwrap();
    let eqs = vec![
        EquationTable::tabulate(&sig, "L", &["U"], |u| u[0].to_string()).unwrap(),
        EquationTable::tabulate(&sig, "R", &["L"], |p| p[0].to_string()).unwrap(),
        EquationTable::tabulate(&sig, "B", &["L", "D"], |p| bit(p[0] == "1" && p[1] == "0")).unwrap(),
    ];
    Arc::new(CausalModel::new(sig, eqs).unwrap())
}
