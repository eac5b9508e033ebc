//! Brute-force reference semantics, written independently of the engine.
//!
//! Models are solved by checking every endogenous assignment against every
//! equation, and every search is a plain nested loop over all subsets and
//! value tuples.

#![allow(dead_code)]

use std::sync::Arc;

use causa::{BooleanExpr, CausalFormula, CausalModel, Context, EquationTable, PrimitiveEvent, Signature};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Node {
    Exo(usize),
    Endo(usize),
}

/// A random finite model: exogenous and endogenous range sizes, parents and
/// tabulated equations (mixed radix over parents, last varying fastest).
#[derive(Debug, Clone)]
pub struct Net {
    pub exo: Vec<usize>,
    pub endo: Vec<usize>,
    pub parents: Vec<Vec<Node>>,
    pub tables: Vec<Vec<usize>>,
}

pub fn exo_name(i: usize) -> String {
    format!("U{i}")
}

pub fn endo_name(i: usize) -> String {
    format!("V{i}")
}

impl Net {
    pub fn random(seed: u64, max_endo: usize, max_range: usize) -> Net {
        Net::random_with(seed, 2, max_endo, max_range)
    }

    pub fn random_with(seed: u64, max_exo: usize, max_endo: usize, max_range: usize) -> Net {
        let mut rng = StdRng::seed_from_u64(seed);
        let exo = vec![2; rng.gen_range(1..=max_exo)];
        let n = rng.gen_range(1..=max_endo);
        let endo: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=max_range)).collect();
        // a random rank order keeps the graph acyclic without tying it to
        // declaration order
        let mut rank: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            rank.swap(i, rng.gen_range(0..=i));
        }
        let mut parents = Vec::new();
        let mut tables = Vec::new();
        for i in 0..n {
            let mut ps = Vec::new();
            for j in 0..n {
                if rank[j] < rank[i] && rng.gen_bool(0.6) {
                    ps.push(Node::Endo(j));
                }
            }
            for u in 0..exo.len() {
                if rng.gen_bool(0.75) {
                    ps.push(Node::Exo(u));
                }
            }
            let rows: usize = ps
                .iter()
                .map(|p| match p {
                    Node::Exo(u) => exo[*u],
                    Node::Endo(j) => endo[*j],
                })
                .product();
            tables.push((0..rows).map(|_| rng.gen_range(0..endo[i])).collect());
            parents.push(ps);
        }
        Net {
            exo,
            endo,
            parents,
            tables,
        }
    }

    /// Binary leaves reading the exogenous variables, and a binary sink
    /// reading the leaves; the shape under which conjunctions explain.
    pub fn layered(seed: u64) -> Net {
        let mut rng = StdRng::seed_from_u64(seed);
        let exo = vec![2; rng.gen_range(2..=3)];
        let leaves = rng.gen_range(2..=3);
        let mut parents = Vec::new();
        let mut tables = Vec::new();
        for i in 0..leaves {
            if rng.gen_bool(0.7) {
                parents.push(vec![Node::Exo(i % exo.len())]);
                tables.push(vec![0, 1]);
            } else {
                parents.push(exo.iter().enumerate().map(|(u, _)| Node::Exo(u)).collect());
                tables.push((0..1 << exo.len()).map(|_| rng.gen_range(0..2)).collect());
            }
        }
        parents.push((0..leaves).map(Node::Endo).collect());
        tables.push((0..1 << leaves).map(|_| rng.gen_range(0..2)).collect());
        Net {
            exo,
            endo: vec![2; leaves + 1],
            parents,
            tables,
        }
    }

    fn size(&self, node: Node) -> usize {
        match node {
            Node::Exo(u) => self.exo[u],
            Node::Endo(j) => self.endo[j],
        }
    }

    pub fn model(&self) -> Arc<CausalModel> {
        let values = |k: usize| (0..k).map(|x| x.to_string()).collect::<Vec<_>>();
        let mut b = Signature::builder();
        for (i, &k) in self.exo.iter().enumerate() {
            b = b.exogenous(exo_name(i), values(k));
        }
        for (i, &k) in self.endo.iter().enumerate() {
            b = b.endogenous(endo_name(i), values(k));
        }
        let sig = b.build().unwrap();
        let mut eqs = Vec::new();
        for i in 0..self.endo.len() {
            let names: Vec<String> = self.parents[i]
                .iter()
                .map(|p| match p {
                    Node::Exo(u) => exo_name(*u),
                    Node::Endo(j) => endo_name(*j),
                })
                .collect();
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let eq = EquationTable::tabulate(&sig, &endo_name(i), &refs, |vals| {
                let tuple: Vec<usize> = vals.iter().map(|v| v.parse().unwrap()).collect();
                self.lookup(i, &tuple).to_string()
            })
            .unwrap();
            eqs.push(eq);
        }
        Arc::new(CausalModel::new(sig, eqs).unwrap())
    }

    fn lookup(&self, i: usize, tuple: &[usize]) -> usize {
        let mut idx = 0;
        for (p, &x) in self.parents[i].iter().zip(tuple) {
            idx = idx * self.size(*p) + x;
        }
        self.tables[i][idx]
    }

    pub fn contexts(&self) -> Vec<Vec<usize>> {
        product(&self.exo)
    }

    pub fn context(&self, m: &CausalModel, u: &[usize]) -> Context {
        let names: Vec<String> = (0..u.len()).map(exo_name).collect();
        let vals: Vec<String> = u.iter().map(|x| x.to_string()).collect();
        m.signature()
            .context(names.iter().map(String::as_str).zip(vals.iter().map(String::as_str)))
            .unwrap()
    }

    /// The unique endogenous assignment satisfying every equation not
    /// overridden, found by exhaustive search.
    pub fn solve(&self, u: &[usize], over: &[Option<usize>]) -> Vec<usize> {
        let mut found = None;
        for v in product(&self.endo) {
            let ok = (0..self.endo.len()).all(|i| match over[i] {
                Some(x) => v[i] == x,
                None => {
                    let tuple: Vec<usize> = self.parents[i]
                        .iter()
                        .map(|p| match p {
                            Node::Exo(k) => u[*k],
                            Node::Endo(j) => v[*j],
                        })
                        .collect();
                    v[i] == self.lookup(i, &tuple)
                }
            });
            if ok {
                assert!(found.is_none(), "recursive models have one solution");
                found = Some(v);
            }
        }
        found.expect("recursive models have a solution")
    }

    pub fn none(&self) -> Vec<Option<usize>> {
        vec![None; self.endo.len()]
    }
}

/// Every tuple in the product of `0..sizes[i]`.
pub fn product(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &k in sizes {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..k).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// Every subset of `items`, as vectors.
pub fn subsets<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    (0..1usize << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, t)| t.clone())
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum F {
    True,
    Ev(usize, usize),
    Not(Box<F>),
    And(Box<F>, Box<F>),
    Or(Box<F>, Box<F>),
    /// Intervention over distinct variables; the body has no interventions.
    Do(Vec<(usize, usize)>, Box<F>),
}

impl F {
    pub fn random(rng: &mut StdRng, net: &Net, depth: u32, allow_do: bool) -> F {
        let n = net.endo.len();
        let choice = if depth == 0 {
            0
        } else {
            rng.gen_range(0..if allow_do { 5 } else { 4 })
        };
        match choice {
            0 => {
                let v = rng.gen_range(0..n);
                F::Ev(v, rng.gen_range(0..net.endo[v]))
            }
            1 => F::Not(Box::new(F::random(rng, net, depth - 1, allow_do))),
            2 => F::And(
                Box::new(F::random(rng, net, depth - 1, allow_do)),
                Box::new(F::random(rng, net, depth - 1, allow_do)),
            ),
            3 => F::Or(
                Box::new(F::random(rng, net, depth - 1, allow_do)),
                Box::new(F::random(rng, net, depth - 1, allow_do)),
            ),
            _ => {
                let mut set = Vec::new();
                for v in 0..n {
                    if rng.gen_bool(0.4) {
                        set.push((v, rng.gen_range(0..net.endo[v])));
                    }
                }
                if set.is_empty() {
                    let v = rng.gen_range(0..n);
                    set.push((v, rng.gen_range(0..net.endo[v])));
                }
                F::Do(set, Box::new(F::random(rng, net, depth - 1, false)))
            }
        }
    }

    fn boolean(&self) -> BooleanExpr {
        match self {
            F::True => BooleanExpr::Const(true),
            F::Ev(v, x) => BooleanExpr::leaf(PrimitiveEvent::new(endo_name(*v), x.to_string())),
            F::Not(a) => BooleanExpr::not(a.boolean()),
            F::And(a, b) => BooleanExpr::and(a.boolean(), b.boolean()),
            F::Or(a, b) => BooleanExpr::or(a.boolean(), b.boolean()),
            F::Do(..) => panic!("nested intervention"),
        }
    }

    pub fn formula(&self) -> CausalFormula {
        match self {
            F::True => CausalFormula::Const(true),
            F::Ev(v, x) => CausalFormula::event(endo_name(*v), x.to_string()),
            F::Not(a) => CausalFormula::not(a.formula()),
            F::And(a, b) => CausalFormula::and(a.formula(), b.formula()),
            F::Or(a, b) => CausalFormula::or(a.formula(), b.formula()),
            F::Do(set, body) => CausalFormula::intervened(
                set.iter()
                    .map(|&(v, x)| PrimitiveEvent::new(endo_name(v), x.to_string()))
                    .collect(),
                body.boolean(),
            )
            .unwrap(),
        }
    }

    pub fn mentions(&self, v: usize) -> bool {
        match self {
            F::True => false,
            F::Ev(w, _) => *w == v,
            F::Not(a) => a.mentions(v),
            F::And(a, b) | F::Or(a, b) => a.mentions(v) || b.mentions(v),
            F::Do(set, body) => set.iter().any(|&(w, _)| w == v) || body.mentions(v),
        }
    }
}

pub fn eval(net: &Net, u: &[usize], over: &[Option<usize>], f: &F) -> bool {
    match f {
        F::True => true,
        F::Ev(v, x) => net.solve(u, over)[*v] == *x,
        F::Not(a) => !eval(net, u, over, a),
        F::And(a, b) => eval(net, u, over, a) && eval(net, u, over, b),
        F::Or(a, b) => eval(net, u, over, a) || eval(net, u, over, b),
        F::Do(set, body) => {
            let mut inner = over.to_vec();
            for &(v, x) in set {
                inner[v] = Some(x);
            }
            eval(net, u, &inner, body)
        }
    }
}

fn with(net: &Net, settings: &[&[(usize, usize)]]) -> Vec<Option<usize>> {
    let mut over = net.none();
    for s in settings {
        for &(v, x) in *s {
            over[v] = Some(x);
        }
    }
    over
}

pub fn holds(net: &Net, u: &[usize], lits: &[(usize, usize)]) -> bool {
    let actual = net.solve(u, &net.none());
    lits.iter().all(|&(v, x)| actual[v] == x)
}

/// AC1 and AC2 by exhaustive search. `Z'` ranges over all subsets of the
/// complement of `W`, so it may include the candidate's own variables.
pub fn sufficient(net: &Net, u: &[usize], lits: &[(usize, usize)], f: &F) -> bool {
    if lits.is_empty() || !holds(net, u, lits) || !eval(net, u, &net.none(), f) {
        return false;
    }
    let actual = net.solve(u, &net.none());
    let n = net.endo.len();
    let xs: Vec<usize> = lits.iter().map(|l| l.0).collect();
    let rest: Vec<usize> = (0..n).filter(|v| !xs.contains(v)).collect();
    for w in subsets(&rest) {
        let z: Vec<usize> = (0..n).filter(|v| !w.contains(v)).collect();
        let x_sizes: Vec<usize> = xs.iter().map(|&v| net.endo[v]).collect();
        let w_sizes: Vec<usize> = w.iter().map(|&v| net.endo[v]).collect();
        for wv in product(&w_sizes) {
            let w_set: Vec<(usize, usize)> = w.iter().copied().zip(wv.iter().copied()).collect();
            let flips = product(&x_sizes).into_iter().any(|xv| {
                let x_set: Vec<(usize, usize)> = xs.iter().copied().zip(xv).collect();
                !eval(net, u, &with(net, &[&x_set, &w_set]), f)
            });
            if !flips {
                continue;
            }
            let robust = subsets(&w_set).iter().all(|ws| {
                subsets(&z).iter().all(|zs| {
                    let z_set: Vec<(usize, usize)> = zs.iter().map(|&v| (v, actual[v])).collect();
                    eval(net, u, &with(net, &[lits, ws, &z_set]), f)
                })
            });
            if robust {
                return true;
            }
        }
    }
    false
}

fn proper_nonempty(lits: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    subsets(lits)
        .into_iter()
        .filter(|s| !s.is_empty() && s.len() < lits.len())
        .collect()
}

pub fn actual_cause(net: &Net, u: &[usize], lits: &[(usize, usize)], f: &F) -> bool {
    sufficient(net, u, lits, f) && proper_nonempty(lits).iter().all(|s| !sufficient(net, u, s, f))
}

fn ex2(net: &Net, k: &[Vec<usize>], lits: &[(usize, usize)], f: &F) -> bool {
    k.iter().all(|u| !holds(net, u, lits) || sufficient(net, u, lits, f))
}

pub fn explanation(net: &Net, k: &[Vec<usize>], lits: &[(usize, usize)], f: &F) -> bool {
    k.iter().all(|u| eval(net, u, &net.none(), f))
        && ex2(net, k, lits, f)
        && proper_nonempty(lits).iter().all(|s| !ex2(net, k, s, f))
        && k.iter().any(|u| holds(net, u, lits))
        && k.iter().any(|u| !holds(net, u, lits))
}

/// All conjunctions of primitive events, by variable subset then value tuple.
pub fn candidates(net: &Net) -> Vec<Vec<(usize, usize)>> {
    let vars: Vec<usize> = (0..net.endo.len()).collect();
    let mut out = Vec::new();
    for s in subsets(&vars) {
        if s.is_empty() {
            continue;
        }
        let sizes: Vec<usize> = s.iter().map(|&v| net.endo[v]).collect();
        for vals in product(&sizes) {
            out.push(s.iter().copied().zip(vals).collect());
        }
    }
    out
}

pub fn lits_text(lits: &[(usize, usize)]) -> String {
    let mut sorted = lits.to_vec();
    sorted.sort();
    sorted
        .iter()
        .map(|&(v, x)| format!("{}={x}", endo_name(v)))
        .collect::<Vec<_>>()
        .join(" & ")
}
