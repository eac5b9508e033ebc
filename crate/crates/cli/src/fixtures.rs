//! Models and input files bundled with the tool.

pub struct Fixture {
    pub name: &'static str,
    pub summary: &'static str,
    pub text: &'static str,
}

pub const MODELS: &[Fixture] = &[
    Fixture {
        name: "arson_disjunctive",
        summary: "two arsonists, either match suffices",
        text: include_str!("../fixtures/arson_disjunctive.causa"),
    },
    Fixture {
        name: "arson_conjunctive",
        summary: "two arsonists, both matches needed",
        text: include_str!("../fixtures/arson_conjunctive.causa"),
    },
    Fixture {
        name: "arson_conjunctive_other_causes",
        summary: "conjunctive arsonists plus lightning",
        text: include_str!("../fixtures/arson_conjunctive_other_causes.causa"),
    },
    Fixture {
        name: "arson_oxygen",
        summary: "disjunctive arsonists, fire also needs oxygen; with prior",
        text: include_str!("../fixtures/arson_oxygen.causa"),
    },
    Fixture {
        name: "april_showers",
        summary: "April rains and May/June electrical storms",
        text: include_str!("../fixtures/april_showers.causa"),
    },
    Fixture {
        name: "victoria",
        summary: "Victoria's tan: Canaries and sun, or a salon",
        text: include_str!("../fixtures/victoria.causa"),
    },
    Fixture {
        name: "tv",
        summary: "television with an exogenous inexplicable cause",
        text: include_str!("../fixtures/tv.causa"),
    },
    Fixture {
        name: "tv_named",
        summary: "television with the inexplicable cause as variable I",
        text: include_str!("../fixtures/tv_named.causa"),
    },
    Fixture {
        name: "paresis",
        summary: "syphilis causes paresis given a hidden factor",
        text: include_str!("../fixtures/paresis.causa"),
    },
    Fixture {
        name: "paresis_alt",
        summary: "paresis independent of syphilis",
        text: include_str!("../fixtures/paresis_alt.causa"),
    },
    Fixture {
        name: "barometer",
        summary: "low pressure, rain and a possibly defective barometer; with prior",
        text: include_str!("../fixtures/barometer.causa"),
    },
];

/// Context, situation and hypothesis files.
pub const FILES: &[Fixture] = &[
    Fixture {
        name: "k_arson.ctx",
        summary: "arson contexts with at least one match",
        text: include_str!("../fixtures/k_arson.ctx"),
    },
    Fixture {
        name: "k_arson_other_causes.ctx",
        summary: "arson contexts for the model with lightning",
        text: include_str!("../fixtures/k_arson_other_causes.ctx"),
    },
    Fixture {
        name: "k_arson_single.ctx",
        summary: "both arsonists, as the only context",
        text: include_str!("../fixtures/k_arson_single.ctx"),
    },
    Fixture {
        name: "k_april.ctx",
        summary: "all six April-showers contexts with a storm",
        text: include_str!("../fixtures/k_april.ctx"),
    },
    Fixture {
        name: "k_april_june.ctx",
        summary: "April-showers contexts with a June fire",
        text: include_str!("../fixtures/k_april_june.ctx"),
    },
    Fixture {
        name: "k_april_single.ctx",
        summary: "the actual April-showers context",
        text: include_str!("../fixtures/k_april_single.ctx"),
    },
    Fixture {
        name: "k_victoria.ctx",
        summary: "weighted tanned contexts",
        text: include_str!("../fixtures/k_victoria.ctx"),
    },
    Fixture {
        name: "k_tv.ctx",
        summary: "television contexts without a picture",
        text: include_str!("../fixtures/k_tv.ctx"),
    },
    Fixture {
        name: "k_tv_weighted.ctx",
        summary: "the same, weighted",
        text: include_str!("../fixtures/k_tv_weighted.ctx"),
    },
    Fixture {
        name: "s_paresis.sit",
        summary: "paresis situations from both models",
        text: include_str!("../fixtures/s_paresis.sit"),
    },
    Fixture {
        name: "s_paresis_single.sit",
        summary: "one situation of the paresis model",
        text: include_str!("../fixtures/s_paresis_single.sit"),
    },
    Fixture {
        name: "psi_paresis.psi",
        summary: "hypotheses TRUE and the paresis model's description",
        text: include_str!("../fixtures/psi_paresis.psi"),
    },
];

/// Short names accepted in place of a fixture name.
const ALIASES: &[(&str, &str)] = &[("arson", "arson_disjunctive")];

pub fn model(name: &str) -> Option<&'static Fixture> {
    let name = ALIASES.iter().find(|a| a.0 == name).map_or(name, |a| a.1);
    MODELS.iter().find(|f| f.name == name)
}

pub fn file(name: &str) -> Option<&'static Fixture> {
    FILES.iter().find(|f| f.name == name)
}
