//! Classical logic-program semantics: grounding, the Gelfond–Lifschitz
//! reduct, minimal Herbrand models, stable models, and syntactic program
//! classification (normal, positive, safe, ground, DL-safe, weakly DL-safe).

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::error::{Caps, Error, Result};
use crate::syntax::{tuples, Atom, Program, Rule};

/// A set of ground Pred atoms (reflexive equalities are implicit).
pub type HerbrandInterpretation = BTreeSet<Atom>;

/// Syntactic properties of a program.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct ProgramClass {
    pub normal: bool,
    pub positive: bool,
    pub safe: bool,
    pub ground: bool,
    pub dl_safe: bool,
    pub weakly_dl_safe: bool,
}

/// gr(P): all ground instances of the rules over the names of Σ_P, keeping
/// the signature of P.
pub fn grounding(p: &Program, depth: usize, caps: &Caps) -> Result<Program> {
    let count = p.signature.ground_atom_count(depth);
    if count > caps.atoms as u128 {
        return Err(Error::cap("ground atoms", count, caps.atoms as u128));
    }
    let names = p.signature.names(depth);
    let mut rules = Vec::new();
    for r in &p.rules {
        let vars: Vec<String> = r.vars().into_iter().collect();
        if vars.is_empty() {
            rules.push(r.clone());
            continue;
        }
        let instances = (names.len() as u128).saturating_pow(vars.len() as u32);
        if instances > caps.kernels as u128 {
            return Err(Error::cap("ground rule instances", instances, caps.kernels as u128));
        }
        for combo in tuples(&names, vars.len()) {
            let beta = vars.iter().cloned().zip(combo).collect();
            rules.push(r.substitute(&beta));
        }
    }
    Ok(Program {
        rules,
        signature: p.signature.clone(),
    })
}

/// P^M: rules whose negative body meets M are deleted, `not` literals are
/// stripped from the remaining ones.
pub fn reduct(pg: &Program, m: &HerbrandInterpretation) -> Program {
    let rules = pg
        .rules
        .iter()
        .filter(|r| r.neg.iter().all(|a| !m.contains(a)))
        .map(|r| Rule {
            head: r.head.clone(),
            pos: r.pos.clone(),
            neg: Vec::new(),
        })
        .collect();
    Program {
        rules,
        signature: pg.signature.clone(),
    }
}

/// Whether M satisfies every rule of a ground program (negation read
/// classically: `not c` holds iff c ∉ M).
pub fn is_model(pg: &Program, m: &HerbrandInterpretation) -> bool {
    pg.rules.iter().all(|r| {
        let body = r.pos.iter().all(|a| m.contains(a)) && r.neg.iter().all(|a| !m.contains(a));
        !body || r.head.iter().any(|a| m.contains(a))
    })
}

/// Head atoms of a ground program — minimal and stable models only contain these.
fn head_atoms(pg: &Program) -> Vec<Atom> {
    let set: BTreeSet<Atom> = pg.rules.iter().flat_map(|r| r.head.iter().cloned()).collect();
    set.into_iter().collect()
}

fn ensure_ground(pg: &Program) -> Result<()> {
    if pg.is_ground() {
        Ok(())
    } else {
        Err(Error::Semantic("program must be ground".into()))
    }
}

fn check_subset_cap(n: usize, caps: &Caps) -> Result<()> {
    let needed = 1u128 << n.min(127);
    if n > caps.atoms || needed > caps.kernels as u128 {
        return Err(Error::cap("candidate interpretations", needed, caps.kernels as u128));
    }
    Ok(())
}

/// All ⊆-minimal Herbrand models of a positive ground program, enumerated
/// by increasing cardinality; supersets of models already found are pruned.
pub fn minimal_models(pg: &Program, caps: &Caps) -> Result<Vec<HerbrandInterpretation>> {
    ensure_ground(pg)?;
    if !pg.is_positive() {
        return Err(Error::Semantic("minimal_models needs a positive program".into()));
    }
    let universe = head_atoms(pg);
    check_subset_cap(universe.len(), caps)?;
    let mut found: Vec<HerbrandInterpretation> = Vec::new();
    let n = universe.len();
    for size in 0..=n {
        let mut layer = Vec::new();
        for combo in combinations(n, size) {
            let m: HerbrandInterpretation = combo.iter().map(|&i| universe[i].clone()).collect();
            if found.iter().any(|f| f.is_subset(&m)) {
                continue;
            }
            if is_model(pg, &m) {
                layer.push(m);
            }
        }
        found.extend(layer);
    }
    found.sort();
    Ok(found)
}

/// Index subsets of `0..n` with exactly `k` elements, lexicographically.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Whether M is a ⊆-minimal model of the positive ground program `pos`.
fn is_minimal_model(pos: &Program, m: &HerbrandInterpretation) -> bool {
    if !is_model(pos, m) {
        return false;
    }
    if pos.is_normal() {
        return least_model(pos) == *m;
    }
    let atoms: Vec<&Atom> = m.iter().collect();
    // Any model strictly inside M refutes minimality; check all proper subsets.
    let n = atoms.len();
    (0..(1u64 << n) - 1).all(|mask| {
        let sub: HerbrandInterpretation = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| atoms[i].clone()).collect();
        !is_model(pos, &sub)
    })
}

/// Least model of a positive normal ground program (fixpoint iteration).
fn least_model(pos: &Program) -> HerbrandInterpretation {
    let mut m = HerbrandInterpretation::new();
    loop {
        let mut changed = false;
        for r in &pos.rules {
            if r.pos.iter().all(|a| m.contains(a)) && !m.contains(&r.head[0]) {
                m.insert(r.head[0].clone());
                changed = true;
            }
        }
        if !changed {
            return m;
        }
    }
}

/// Whether M is a stable model of the ground program `pg`.
pub fn is_stable_model(pg: &Program, m: &HerbrandInterpretation) -> bool {
    is_minimal_model(&reduct(pg, m), m)
}

/// All stable models of P (over gr(P) at the given term depth), sorted.
/// Candidates range over subsets of the head atoms of gr(P).
pub fn stable_models(p: &Program, depth: usize, caps: &Caps) -> Result<Vec<HerbrandInterpretation>> {
    let pg = grounding(p, depth, caps)?;
    let universe = head_atoms(&pg);
    check_subset_cap(universe.len(), caps)?;
    let n = universe.len();
    let mut models: Vec<HerbrandInterpretation> = (0..(1u64 << n))
        .into_par_iter()
        .filter_map(|mask| {
            let m: HerbrandInterpretation =
                (0..n).filter(|i| mask >> i & 1 == 1).map(|i| universe[i].clone()).collect();
            is_stable_model(&pg, &m).then_some(m)
        })
        .collect();
    models.sort();
    Ok(models)
}

/// Computes the classification flags. Rule atoms are atoms whose predicate
/// is not among `theory_predicates`.
pub fn classify_program(p: &Program, theory_predicates: &BTreeSet<String>) -> ProgramClass {
    let is_rule_atom = |a: &Atom| match a {
        Atom::Pred(name, _) => !theory_predicates.contains(name),
        Atom::Eq(..) => false,
    };
    let safe = p.is_safe();
    let mut dl_safe = safe;
    let mut weakly = safe;
    for r in &p.rules {
        let mut in_rule_atoms = BTreeSet::new();
        let mut in_theory_atoms = BTreeSet::new();
        for a in &r.pos {
            if is_rule_atom(a) {
                a.collect_vars(&mut in_rule_atoms);
            } else {
                a.collect_vars(&mut in_theory_atoms);
            }
        }
        let mut other = BTreeSet::new();
        for a in r.head.iter().chain(&r.neg) {
            a.collect_vars(&mut other);
        }
        for v in r.vars() {
            if !in_rule_atoms.contains(&v) {
                dl_safe = false;
                // Weak DL-safety: a variable outside rule atoms of B⁺ may only
                // occur in the non-rule atoms of B⁺.
                if other.contains(&v) || !in_theory_atoms.contains(&v) {
                    weakly = false;
                }
            }
        }
    }
    ProgramClass {
        normal: p.is_normal(),
        positive: p.is_positive(),
        safe,
        ground: p.is_ground(),
        dl_safe,
        weakly_dl_safe: weakly,
    }
}

/// Predicates used in a program, with arities.
pub fn program_predicates(p: &Program) -> BTreeMap<String, usize> {
    p.signature.predicates.clone()
}
