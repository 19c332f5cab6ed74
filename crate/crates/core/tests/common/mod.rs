//! Helpers shared by the integration tests: corpus access, seeded random
//! generators for programs and theories, and brute-force oracles that are
//! independent of the library's solvers.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use aelab::syntax::{Atom, Formula, Program, Rule, Term, Theory};
use aelab::textio::{parse_program, parse_theory};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus_text(name: &str) -> String {
    std::fs::read_to_string(corpus_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn program(stem: &str) -> Program {
    parse_program(&corpus_text(&format!("{stem}.lp"))).expect("corpus program parses")
}

pub fn theory(stem: &str) -> Theory {
    parse_theory(&corpus_text(&format!("{stem}.fot"))).expect("corpus theory parses")
}

/// Every `.lp` file of the corpus, sorted by name.
pub fn corpus_programs() -> Vec<(String, Program)> {
    let mut out: Vec<(String, Program)> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "lp"))
        .map(|p| {
            let stem = p.file_stem().unwrap().to_string_lossy().to_string();
            let prog = parse_program(&std::fs::read_to_string(&p).unwrap()).expect("corpus program parses");
            (stem, prog)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Every `.fot` theory of the corpus (the witness probe file excluded),
/// sorted by name.
pub fn corpus_theories() -> Vec<(String, Theory)> {
    let mut out: Vec<(String, Theory)> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "fot"))
        .filter(|p| p.file_stem().is_some_and(|s| s != "witnesses"))
        .map(|p| {
            let stem = p.file_stem().unwrap().to_string_lossy().to_string();
            let th = parse_theory(&std::fs::read_to_string(&p).unwrap()).expect("corpus theory parses");
            (stem, th)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of random programs.
#[derive(Clone, Copy, Debug)]
pub struct ProgramShape {
    pub max_constants: usize,
    pub max_predicates: usize,
    pub max_rules: usize,
    pub max_ground_atoms: usize,
    pub disjunctive: bool,
    pub negation: bool,
    pub variables: bool,
    /// Every variable occurs in the positive body.
    pub safe: bool,
}

impl ProgramShape {
    /// ≤3 constants, ≤3 predicates of arity ≤1, ≤4 rules, ≤12 ground atoms.
    pub fn small() -> ProgramShape {
        ProgramShape {
            max_constants: 3,
            max_predicates: 3,
            max_rules: 4,
            max_ground_atoms: 12,
            disjunctive: true,
            negation: true,
            variables: true,
            safe: false,
        }
    }
}

const CONSTANTS: [&str; 3] = ["a", "b", "c"];
const PREDICATES: [&str; 4] = ["p", "q", "r", "s"];
const VARIABLES: [&str; 2] = ["X", "Y"];

fn random_atom(r: &mut ChaCha8Rng, preds: &[(&'static str, usize)], consts: &[&str], vars: &[&str]) -> Atom {
    let (p, arity) = *preds.choose(r).unwrap();
    let args = (0..arity)
        .map(|_| {
            // With neither variables nor constants available, fall back to an
            // unrestricted variable; callers reject the resulting unsafe rule.
            if consts.is_empty() && vars.is_empty() {
                Term::var(VARIABLES[0])
            } else if !vars.is_empty() && (consts.is_empty() || r.gen_bool(0.5)) {
                Term::var(vars.choose(r).unwrap())
            } else {
                Term::constant(consts.choose(r).unwrap())
            }
        })
        .collect();
    Atom::pred(p, args)
}

/// A random program of the given shape; the number of ground atoms over
/// its own signature never exceeds the shape's bound.
pub fn random_program(r: &mut ChaCha8Rng, shape: ProgramShape) -> Program {
    loop {
        let nconst = r.gen_range(0..=shape.max_constants);
        let consts: Vec<&str> = CONSTANTS[..nconst].to_vec();
        let npred = r.gen_range(1..=shape.max_predicates);
        let preds: Vec<(&'static str, usize)> = PREDICATES[..npred].iter().map(|&p| (p, r.gen_range(0..=1))).collect();
        let vars: Vec<&str> = if shape.variables { VARIABLES.to_vec() } else { Vec::new() };
        let nrules = r.gen_range(1..=shape.max_rules);
        let mut rules = Vec::new();
        for _ in 0..nrules {
            let nhead = if shape.disjunctive && r.gen_bool(0.25) { 2 } else { 1 };
            let npos = r.gen_range(0..=2);
            let nneg = if shape.negation { r.gen_range(0..=1) } else { 0 };
            let pos: Vec<Atom> = (0..npos).map(|_| random_atom(r, &preds, &consts, &vars)).collect();
            let body_vars: BTreeSet<String> = pos.iter().flat_map(Atom::vars).collect();
            let restricted: Vec<&str> = if shape.safe {
                vars.iter().copied().filter(|v| body_vars.contains(*v)).collect()
            } else {
                vars.clone()
            };
            let head: Vec<Atom> = (0..nhead).map(|_| random_atom(r, &preds, &consts, &restricted)).collect();
            let neg: Vec<Atom> = (0..nneg).map(|_| random_atom(r, &preds, &consts, &restricted)).collect();
            if let Ok(rule) = Rule::new(head, pos, neg) {
                rules.push(rule);
            }
        }
        let Ok(p) = Program::new(rules, &[]) else { continue };
        if p.rules.is_empty() || p.signature.ground_atom_count(0) > shape.max_ground_atoms as u128 {
            continue;
        }
        if shape.safe && !p.is_safe() {
            continue;
        }
        return p;
    }
}

/// A random objective formula over a few symbols (any shape, including
/// quantifiers, equalities, disequalities and the modal operator). Only
/// variables in `bound` occur free.
pub fn random_formula(r: &mut ChaCha8Rng, depth: usize, bound: &mut Vec<String>) -> Formula {
    let leaf = depth == 0 || r.gen_bool(0.3);
    if leaf {
        let terms: Vec<Term> = CONSTANTS[..2]
            .iter()
            .map(|c| Term::constant(c))
            .chain(bound.iter().map(|v| Term::var(v)))
            .collect();
        return match r.gen_range(0..5) {
            0 => Formula::Atom(Atom::prop(["s", "t"][r.gen_range(0..2)])),
            1 => Formula::Atom(Atom::equality(terms.choose(r).unwrap().clone(), terms.choose(r).unwrap().clone())),
            2 => Formula::neq(terms.choose(r).unwrap().clone(), terms.choose(r).unwrap().clone()),
            _ => Formula::Atom(Atom::pred(PREDICATES[r.gen_range(0..3)], vec![terms.choose(r).unwrap().clone()])),
        };
    }
    match r.gen_range(0..7) {
        0 => Formula::not(random_formula(r, depth - 1, bound)),
        1 => Formula::and(random_formula(r, depth - 1, bound), random_formula(r, depth - 1, bound)),
        2 => Formula::or(random_formula(r, depth - 1, bound), random_formula(r, depth - 1, bound)),
        3 => Formula::implies(random_formula(r, depth - 1, bound), random_formula(r, depth - 1, bound)),
        4 => Formula::modal(random_formula(r, depth - 1, bound)),
        q => {
            let v = VARIABLES[bound.len() % 2].to_string();
            bound.push(v.clone());
            let body = random_formula(r, depth - 1, bound);
            bound.pop();
            if q == 5 {
                Formula::exists(&v, body)
            } else {
                Formula::forall(&v, body)
            }
        }
    }
}

/// A random Horn theory over unary and nullary predicates and ≤2 constants.
pub fn random_horn_theory(r: &mut ChaCha8Rng) -> Theory {
    let atom = |r: &mut ChaCha8Rng, var: bool| -> Atom {
        match r.gen_range(0..3) {
            0 => Atom::prop(PREDICATES[r.gen_range(0..2)]),
            _ => {
                let t = if var && r.gen_bool(0.6) {
                    Term::var("X")
                } else {
                    Term::constant(CONSTANTS[r.gen_range(0..2)])
                };
                Atom::pred(PREDICATES[2 + r.gen_range(0..2)], vec![t])
            }
        }
    };
    let n = r.gen_range(1..=4);
    let mut formulas = Vec::new();
    for _ in 0..n {
        let nbody = r.gen_range(0..=2);
        let body: Vec<Formula> = (0..nbody).map(|_| Formula::Atom(atom(r, true))).collect();
        let head = Formula::Atom(atom(r, true));
        let matrix = match Formula::conj(body) {
            Some(b) => Formula::implies(b, head),
            None => head,
        };
        formulas.push(matrix.universal_closure());
    }
    Theory::new(formulas, &["a", "b"]).expect("closed formulas")
}

// ---------------------------------------------------------------------------
// Brute-force stable models.

/// Ground instances of the rules over the constants of the signature
/// (or `c0` when there are none), computed without the library.
pub fn naive_grounding(p: &Program) -> Vec<(Vec<Atom>, Vec<Atom>, Vec<Atom>)> {
    let mut names: Vec<String> = p.signature.constants.iter().cloned().collect();
    if names.is_empty() {
        names.push("c0".into());
    }
    let mut out = Vec::new();
    for rule in &p.rules {
        let vars: Vec<String> = rule.vars().into_iter().collect();
        let mut idx = vec![0usize; vars.len()];
        loop {
            let beta = vars
                .iter()
                .cloned()
                .zip(idx.iter().map(|&i| Term::constant(&names[i])))
                .collect();
            let g = rule.substitute(&beta);
            out.push((g.head.clone(), g.pos.clone(), g.neg.clone()));
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < names.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    out
}

fn subsets<T: Clone + Ord>(items: &[T]) -> Vec<BTreeSet<T>> {
    (0..1usize << items.len())
        .map(|mask| (0..items.len()).filter(|i| mask >> i & 1 == 1).map(|i| items[i].clone()).collect())
        .collect()
}

/// Stable models by definition: M is a minimal model of the reduct of the
/// grounding w.r.t. M. Exponential; only for tiny programs.
pub fn brute_force_stable_models(p: &Program) -> Vec<BTreeSet<Atom>> {
    let ground = naive_grounding(p);
    let mut atoms: BTreeSet<Atom> = BTreeSet::new();
    for (h, b, n) in &ground {
        atoms.extend(h.iter().chain(b).chain(n).cloned());
    }
    let atoms: Vec<Atom> = atoms.into_iter().collect();
    let is_model = |rules: &[(Vec<Atom>, Vec<Atom>)], m: &BTreeSet<Atom>| {
        rules
            .iter()
            .all(|(h, b)| !b.iter().all(|a| m.contains(a)) || h.iter().any(|a| m.contains(a)))
    };
    let mut out = Vec::new();
    for m in subsets(&atoms) {
        let reduct: Vec<(Vec<Atom>, Vec<Atom>)> = ground
            .iter()
            .filter(|(_, _, n)| n.iter().all(|a| !m.contains(a)))
            .map(|(h, b, _)| (h.clone(), b.clone()))
            .collect();
        if !is_model(&reduct, &m) {
            continue;
        }
        let mv: Vec<Atom> = m.iter().cloned().collect();
        let minimal = subsets(&mv).into_iter().all(|s| s.len() == m.len() || !is_model(&reduct, &s));
        if minimal {
            out.push(m);
        }
    }
    out.sort();
    out
}

pub fn sorted_strings(m: &BTreeSet<Atom>) -> Vec<String> {
    let mut v: Vec<String> = m.iter().map(aelab::textio::render_atom).collect();
    v.sort();
    v
}
