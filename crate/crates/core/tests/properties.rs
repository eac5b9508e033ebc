mod oracle;

use std::collections::BTreeSet;

use causa::formula::parse_unchecked;
use causa::{
    enumerate_actual_causes, enumerate_explanations, evaluate, explanatory_power, gardenfors_power, goodness,
    Assignment, Budget, ConjunctiveEvent, EpistemicState, ExplanationOptions, PriorState, Rational, Situation,
};
use num_traits::{One, Zero};
use oracle::{Net, F};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn lits_of(event: &ConjunctiveEvent) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = event
        .events()
        .iter()
        .map(|e| (e.variable[1..].parse().unwrap(), e.value.parse().unwrap()))
        .collect();
    out.sort();
    out
}

fn event_of(lits: &[(usize, usize)]) -> ConjunctiveEvent {
    let names: Vec<(String, String)> = lits
        .iter()
        .map(|&(v, x)| (oracle::endo_name(v), x.to_string()))
        .collect();
    ConjunctiveEvent::from_pairs(names.iter().map(|(a, b)| (a.as_str(), b.as_str()))).unwrap()
}

fn setting(lits: &[(usize, usize)]) -> Assignment {
    Assignment::from_pairs(lits.iter().map(|&(v, x)| (oracle::endo_name(v), x.to_string())))
}

fn random_setting(rng: &mut StdRng, net: &Net) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for v in 0..net.endo.len() {
        if rng.gen_bool(0.4) {
            out.push((v, rng.gen_range(0..net.endo[v])));
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn solve_matches_fixed_point(seed in any::<u64>()) {
        let net = Net::random(seed, 4, 3);
        let m = net.model();
        let mut rng = StdRng::seed_from_u64(seed ^ 0x5eed);
        let set = random_setting(&mut rng, &net);
        let mi = m.intervene(&setting(&set)).unwrap();
        let mut over = net.none();
        for &(v, x) in &set {
            over[v] = Some(x);
        }
        for u in net.contexts() {
            let c = net.context(&m, &u);
            let plain: Vec<usize> = net.solve(&u, &net.none());
            let got = m.solve(&c).unwrap();
            for (i, x) in plain.iter().enumerate() {
                let want = x.to_string();
                prop_assert_eq!(got.get(&oracle::endo_name(i)), Some(want.as_str()));
            }
            let forced = net.solve(&u, &over);
            let got = mi.solve(&c).unwrap();
            for (i, x) in forced.iter().enumerate() {
                let want = x.to_string();
                prop_assert_eq!(got.get(&oracle::endo_name(i)), Some(want.as_str()));
            }
        }
    }

    #[test]
    fn interventions_compose(seed in any::<u64>()) {
        let net = Net::random(seed, 4, 3);
        let m = net.model();
        let mut rng = StdRng::seed_from_u64(seed ^ 0xc0de);
        let a = random_setting(&mut rng, &net);
        let b: Vec<(usize, usize)> = random_setting(&mut rng, &net)
            .into_iter()
            .filter(|(v, _)| !a.iter().any(|(w, _)| w == v))
            .collect();
        let both: Vec<(usize, usize)> = a.iter().chain(&b).copied().collect();
        let stepwise = m.intervene(&setting(&a)).unwrap().intervene(&setting(&b)).unwrap();
        let direct = m.intervene(&setting(&both)).unwrap();
        for u in net.contexts() {
            let c = net.context(&m, &u);
            let s = stepwise.solve(&c).unwrap();
            prop_assert_eq!(&s, &direct.solve(&c).unwrap());
            for &(v, x) in &both {
                let want = x.to_string();
                prop_assert_eq!(s.get(&oracle::endo_name(v)), Some(want.as_str()));
            }
        }
    }

    #[test]
    fn interventions_leave_non_descendants(seed in any::<u64>()) {
        let net = Net::random(seed, 4, 3);
        let m = net.model();
        let sig = m.signature();
        let mut rng = StdRng::seed_from_u64(seed ^ 0xd00d);
        let target = rng.gen_range(0..net.endo.len());
        let value = rng.gen_range(0..net.endo[target]);
        let mi = m.intervene(&setting(&[(target, value)])).unwrap();
        // descendants of the target, by closure over the parent lists
        let mut desc = BTreeSet::from([target]);
        loop {
            let before = desc.len();
            for (i, ps) in net.parents.iter().enumerate() {
                if ps.iter().any(|p| matches!(p, oracle::Node::Endo(j) if desc.contains(j))) {
                    desc.insert(i);
                }
            }
            if desc.len() == before {
                break;
            }
        }
        for u in net.contexts() {
            let c = net.context(&m, &u);
            let (a, b) = (m.solve(&c).unwrap(), mi.solve(&c).unwrap());
            for &v in sig.endogenous() {
                let i: usize = sig.name(v)[1..].parse().unwrap();
                if !desc.contains(&i) {
                    prop_assert_eq!(a.get(sig.name(v)), b.get(sig.name(v)));
                }
            }
        }
    }

    #[test]
    fn formulas_match_reference_semantics(seed in any::<u64>()) {
        let net = Net::random(seed, 4, 3);
        let m = net.model();
        let mut rng = StdRng::seed_from_u64(seed ^ 0xf00);
        let f = F::random(&mut rng, &net, 3, true);
        let phi = f.formula();
        for u in net.contexts() {
            let s = Situation::new(m.clone(), net.context(&m, &u)).unwrap();
            prop_assert_eq!(evaluate(&s, &phi).unwrap(), oracle::eval(&net, &u, &net.none(), &f));
        }
    }

    #[test]
    fn printing_round_trips(seed in any::<u64>()) {
        let net = Net::random(seed, 4, 3);
        let mut rng = StdRng::seed_from_u64(seed ^ 0xabc);
        let phi = F::random(&mut rng, &net, 4, true).formula();
        let text = phi.to_string();
        prop_assert_eq!(parse_unchecked(&text).unwrap(), phi, "{}", text);
    }

    #[test]
    fn de_morgan(seed in any::<u64>()) {
        let net = Net::random(seed, 4, 3);
        let m = net.model();
        let mut rng = StdRng::seed_from_u64(seed ^ 0xdead);
        let a = F::random(&mut rng, &net, 2, true).formula();
        let b = F::random(&mut rng, &net, 2, true).formula();
        use causa::CausalFormula as C;
        let lhs = C::not(C::and(a.clone(), b.clone()));
        let rhs = C::or(C::not(a.clone()), C::not(b.clone()));
        let lhs2 = C::not(C::or(a.clone(), b.clone()));
        let rhs2 = C::and(C::not(a), C::not(b));
        for u in net.contexts() {
            let s = Situation::new(m.clone(), net.context(&m, &u)).unwrap();
            prop_assert_eq!(evaluate(&s, &lhs).unwrap(), evaluate(&s, &rhs).unwrap());
            prop_assert_eq!(evaluate(&s, &lhs2).unwrap(), evaluate(&s, &rhs2).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    /// Conjunctive actual causes are rare; every one found is confirmed by
    /// the reference checker.
    #[test]
    fn wide_actual_causes_are_genuine(seed in any::<u64>()) {
        let net = Net::random(seed, 4, 3);
        let m = net.model();
        let mut rng = StdRng::seed_from_u64(seed ^ 0x1);
        let f = F::random(&mut rng, &net, 2, false);
        let u = net.contexts()[rng.gen_range(0..net.contexts().len())].clone();
        let s = Situation::new(m.clone(), net.context(&m, &u)).unwrap();
        let causes = enumerate_actual_causes(&s, &f.formula(), net.endo.len(), &mut Budget::default()).unwrap();
        for c in causes.iter().filter(|c| c.candidate.len() > 1) {
            prop_assert!(oracle::actual_cause(&net, &u, &lits_of(&c.candidate), &f), "{}", c.candidate);
        }
    }
}

/// When every subset of W must keep the explanandum, actual causes need not
/// be single conjuncts. Here V1=0 & V2=0 is a cause and neither conjunct is.
#[test]
fn conjunctive_actual_cause() {
    let seed = 6937740812425448435;
    let net = Net::random(seed, 4, 3);
    let m = net.model();
    let mut rng = StdRng::seed_from_u64(seed ^ 0x1);
    let f = F::random(&mut rng, &net, 2, false);
    let u = net.contexts()[rng.gen_range(0..net.contexts().len())].clone();
    assert_eq!(f.formula().to_string(), "V1=0 & V2=0 | !V0=0");
    assert_eq!(u, [0, 1]);
    let s = Situation::new(m.clone(), net.context(&m, &u)).unwrap();
    let causes: Vec<String> = enumerate_actual_causes(&s, &f.formula(), 3, &mut Budget::default())
        .unwrap()
        .iter()
        .map(|c| c.candidate.to_string())
        .collect();
    assert_eq!(causes, ["V0=1", "V1=0 & V2=0"]);
    assert!(oracle::actual_cause(&net, &u, &[(1, 0), (2, 0)], &f));
    assert!(!oracle::sufficient(&net, &u, &[(1, 0)], &f));
    assert!(!oracle::sufficient(&net, &u, &[(2, 0)], &f));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(250))]

    #[test]
    fn actual_causes_match_oracle(seed in any::<u64>()) {
        let net = Net::random(seed, 3, 2);
        let m = net.model();
        let mut rng = StdRng::seed_from_u64(seed ^ 0x2);
        let f = F::random(&mut rng, &net, 2, true);
        for u in net.contexts() {
            let s = Situation::new(m.clone(), net.context(&m, &u)).unwrap();
            let got: BTreeSet<Vec<(usize, usize)>> =
                enumerate_actual_causes(&s, &f.formula(), net.endo.len(), &mut Budget::default())
                    .unwrap()
                    .iter()
                    .map(|v| lits_of(&v.candidate))
                    .collect();
            let want: BTreeSet<Vec<(usize, usize)>> = oracle::candidates(&net)
                .into_iter()
                .filter(|c| oracle::actual_cause(&net, &u, c, &f))
                .collect();
            prop_assert_eq!(got, want);
        }
    }

    #[test]
    fn explanations_match_oracle(seed in any::<u64>()) {
        let net = Net::random(seed, 3, 2);
        let m = net.model();
        let mut rng = StdRng::seed_from_u64(seed ^ 0x3);
        let f = F::random(&mut rng, &net, 2, true);
        let all = net.contexts();
        let sat: Vec<Vec<usize>> =
            all.iter().filter(|u| oracle::eval(&net, u, &net.none(), &f)).cloned().collect();
        let pool = if sat.is_empty() || rng.gen_bool(0.2) { all } else { sat };
        let k: Vec<Vec<usize>> = pool.iter().filter(|_| rng.gen_bool(0.7)).cloned().collect();
        let k = if k.is_empty() { vec![pool[0].clone()] } else { k };
        let state = EpistemicState::<Rational>::new(m.clone(), k.iter().map(|u| net.context(&m, u)).collect()).unwrap();
        let opts = ExplanationOptions { include_explanandum: true, ..Default::default() };
        let got: BTreeSet<Vec<(usize, usize)>> = enumerate_explanations(&state, &f.formula(), &opts, &mut Budget::default())
            .unwrap()
            .iter()
            .map(lits_of)
            .collect();
        let want: BTreeSet<Vec<(usize, usize)>> = oracle::candidates(&net)
            .into_iter()
            .filter(|c| oracle::explanation(&net, &k, c, &f))
            .collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn layered_explanations_match_oracle(seed in any::<u64>()) {
        let net = Net::layered(seed);
        let m = net.model();
        let mut rng = StdRng::seed_from_u64(seed ^ 0x5);
        let f = F::Ev(net.endo.len() - 1, 1);
        let sat: Vec<Vec<usize>> =
            net.contexts().into_iter().filter(|u| oracle::eval(&net, u, &net.none(), &f)).collect();
        prop_assume!(!sat.is_empty());
        let k: Vec<Vec<usize>> = sat.iter().filter(|_| rng.gen_bool(0.8)).cloned().collect();
        let k = if k.is_empty() { sat } else { k };
        let state = EpistemicState::<Rational>::new(m.clone(), k.iter().map(|u| net.context(&m, u)).collect()).unwrap();
        let got: BTreeSet<Vec<(usize, usize)>> =
            enumerate_explanations(&state, &f.formula(), &ExplanationOptions::default(), &mut Budget::default())
                .unwrap()
                .iter()
                .map(lits_of)
                .collect();
        let want: BTreeSet<Vec<(usize, usize)>> = oracle::candidates(&net)
            .into_iter()
            .filter(|c| !c.iter().any(|&(v, _)| f.mentions(v)))
            .filter(|c| oracle::explanation(&net, &k, c, &f))
            .collect();
        prop_assert_eq!(got, want);
    }

    /// Goodness is a probability, and 1 for complete explanations; power
    /// agrees with the baseline measure on complete explanations.
    #[test]
    fn goodness_and_power_bounds(seed in any::<u64>()) {
        let net = Net::random(seed, 3, 2);
        let m = net.model();
        let mut rng = StdRng::seed_from_u64(seed ^ 0x4);
        let f = F::random(&mut rng, &net, 2, false);
        let phi = f.formula();
        let raw: Vec<i64> = net.contexts().iter().map(|_| rng.gen_range(1..10)).collect();
        let total: i64 = raw.iter().sum();
        let prior = PriorState::new(
            m.clone(),
            net.contexts()
                .iter()
                .zip(&raw)
                .map(|(u, &w)| (net.context(&m, u), Rational::new(w.into(), total.into())))
                .collect(),
        )
        .unwrap();
        let Ok(k) = prior.condition(&phi) else { return Ok(()); };
        let full: BTreeSet<Vec<(usize, usize)>> =
            enumerate_explanations(&k, &phi, &ExplanationOptions { include_explanandum: true, ..Default::default() }, &mut Budget::default())
                .unwrap()
                .iter()
                .map(lits_of)
                .collect();
        for cand in oracle::candidates(&net) {
            let event = event_of(&cand);
            let Ok(g) = goodness(&k, &event, &phi, &mut Budget::default()) else { continue };
            prop_assert!(g >= Rational::zero() && g <= Rational::one());
            if full.contains(&cand) {
                prop_assert_eq!(g, Rational::one());
                let p = explanatory_power(&prior, &k, &event, &phi, &mut Budget::default()).unwrap();
                let b = gardenfors_power(&prior, &k, &event, &phi).unwrap();
                prop_assert_eq!(p, b);
            }
        }
    }
}

/// The random instances above are not mostly trivial.
#[test]
fn random_instances_are_informative() {
    let (mut causes, mut explained, mut wide) = (0, 0, 0);
    for seed in 0..200u64 {
        let net = Net::layered(seed);
        let f = F::Ev(net.endo.len() - 1, 1);
        let all = net.contexts();
        let k: Vec<Vec<usize>> = all
            .iter()
            .filter(|u| oracle::eval(&net, u, &net.none(), &f))
            .cloned()
            .collect();
        if k.is_empty() {
            continue;
        }
        let found: Vec<_> = oracle::candidates(&net)
            .into_iter()
            .filter(|c| oracle::explanation(&net, &k, c, &f))
            .collect();
        explained += usize::from(!found.is_empty());
        wide += usize::from(found.iter().any(|c| c.len() > 1));
        causes += usize::from(
            oracle::candidates(&net)
                .iter()
                .any(|c| oracle::actual_cause(&net, &k[0], c, &f)),
        );
    }
    assert!(causes > 50 && explained > 30 && wide > 0, "{causes} {explained} {wide}");
}
