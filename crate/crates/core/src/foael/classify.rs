//! Syntactic theory classes (∅, Prop, Horn, gHorn, Uni, FoL), Skolemization
//! of generalized Horn theories, and the intersection of named models.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::syntax::{Formula, Signature, Term, Theory};

use super::{Interpretation, VariableAssignment};

/// Theory classes, ordered roughly from most to least specific.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum TheoryClass {
    Empty,
    Prop,
    Horn,
    GHorn,
    Uni,
    FoL,
}

impl TheoryClass {
    pub fn label(self) -> &'static str {
        match self {
            TheoryClass::Empty => "Empty",
            TheoryClass::Prop => "Prop",
            TheoryClass::Horn => "Horn",
            TheoryClass::GHorn => "gHorn",
            TheoryClass::Uni => "Uni",
            TheoryClass::FoL => "FoL",
        }
    }
}

/// Classification result: the most specific class, every class the theory
/// belongs to, and whether some formula only fits gHorn after splitting a
/// conjunctive existential head `∃ȳ(h₁ ∧ … ∧ hₘ)` (detected, not applied).
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct TheoryClassification {
    pub class: TheoryClass,
    pub memberships: BTreeSet<TheoryClass>,
    pub multi_head_rewrite: bool,
}

impl TheoryClassification {
    pub fn is(&self, c: TheoryClass) -> bool {
        self.memberships.contains(&c)
    }
}

fn strip_foralls(f: &Formula) -> (Vec<String>, &Formula) {
    let mut vars = Vec::new();
    let mut cur = f;
    while let Formula::Forall(v, g) = cur {
        vars.push(v.clone());
        cur = g;
    }
    (vars, cur)
}

fn strip_exists(f: &Formula) -> (Vec<String>, &Formula) {
    let mut vars = Vec::new();
    let mut cur = f;
    while let Formula::Exists(v, g) = cur {
        vars.push(v.clone());
        cur = g;
    }
    (vars, cur)
}

fn is_atom(f: &Formula) -> bool {
    matches!(f, Formula::Atom(_))
}

/// A conjunction of atoms (a single atom counts).
fn is_atom_conj(f: &Formula) -> bool {
    match f {
        Formula::And(a, b) => is_atom_conj(a) && is_atom_conj(b),
        other => is_atom(other),
    }
}

fn literals<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::Or(a, b) => {
            literals(a, out);
            literals(b, out);
        }
        other => out.push(other),
    }
}

/// A disjunction of literals with at most one positive literal.
fn is_horn_clause(f: &Formula) -> bool {
    let mut lits = Vec::new();
    literals(f, &mut lits);
    let mut positives = 0;
    for l in lits {
        match l {
            Formula::Atom(_) => positives += 1,
            Formula::Not(a) if is_atom(a) => {}
            Formula::Neq(..) => {}
            _ => return false,
        }
    }
    positives <= 1
}

/// Matrix of a Horn formula: `h`, `b₁ ∧ … ∧ bₙ → h`, `¬(b₁ ∧ … ∧ bₙ)`, or a
/// Horn clause.
fn is_horn_matrix(m: &Formula) -> bool {
    match m {
        Formula::Implies(body, head) => is_atom_conj(body) && is_atom(head),
        Formula::Not(body) => is_atom_conj(body),
        other => is_atom(other) || is_horn_clause(other),
    }
}

/// Head shape of a gHorn formula: `∃ȳ. h`. Returns (fits, needs-rewrite).
fn ghorn_head(h: &Formula) -> (bool, bool) {
    let (ys, inner) = strip_exists(h);
    if is_atom(inner) {
        (true, false)
    } else if !ys.is_empty() && is_atom_conj(inner) {
        (false, true)
    } else {
        (false, false)
    }
}

fn is_quantifier_free(f: &Formula) -> bool {
    let mut ok = true;
    f.walk(&mut |g| {
        if matches!(g, Formula::Exists(..) | Formula::Forall(..)) {
            ok = false;
        }
    });
    ok
}

fn is_propositional(f: &Formula) -> bool {
    is_quantifier_free(f)
        && f.atoms()
            .iter()
            .all(|a| matches!(a, crate::syntax::Atom::Pred(_, args) if args.is_empty()))
}

/// No existential quantifier in negation normal form.
fn is_universal(f: &Formula, positive: bool) -> bool {
    match f {
        Formula::Atom(_) | Formula::Neq(..) => true,
        Formula::Not(g) => is_universal(g, !positive),
        Formula::And(a, b) | Formula::Or(a, b) => is_universal(a, positive) && is_universal(b, positive),
        Formula::Implies(a, b) => is_universal(a, !positive) && is_universal(b, positive),
        Formula::Forall(_, g) => positive && is_universal(g, positive),
        Formula::Exists(_, g) => !positive && is_universal(g, positive),
        Formula::Modal(_) => false,
    }
}

fn formula_classes(f: &Formula) -> (BTreeSet<TheoryClass>, bool) {
    let mut out = BTreeSet::from([TheoryClass::FoL]);
    let mut rewrite = false;
    if is_propositional(f) {
        out.insert(TheoryClass::Prop);
    }
    if is_universal(f, true) {
        out.insert(TheoryClass::Uni);
    }
    let (_, matrix) = strip_foralls(f);
    if is_horn_matrix(matrix) {
        out.insert(TheoryClass::Horn);
        out.insert(TheoryClass::GHorn);
    } else {
        let (fits, needs) = match matrix {
            Formula::Implies(body, head) if is_atom_conj(body) => ghorn_head(head),
            other => ghorn_head(other),
        };
        if fits {
            out.insert(TheoryClass::GHorn);
        }
        rewrite |= needs;
    }
    (out, rewrite)
}

/// The most specific class of an objective theory.
pub fn classify_theory(phi: &Theory) -> Result<TheoryClassification> {
    if !phi.is_objective() {
        return Err(Error::ModalNotAllowed);
    }
    let mut memberships: BTreeSet<TheoryClass> = [
        TheoryClass::Empty,
        TheoryClass::Prop,
        TheoryClass::Horn,
        TheoryClass::GHorn,
        TheoryClass::Uni,
        TheoryClass::FoL,
    ]
    .into();
    let mut rewrite = false;
    for f in &phi.formulas {
        memberships.remove(&TheoryClass::Empty);
        let (cls, r) = formula_classes(f);
        memberships = memberships.intersection(&cls).copied().collect();
        rewrite |= r;
    }
    let class = *memberships.iter().next().expect("FoL always present");
    Ok(TheoryClassification {
        class,
        memberships,
        multi_head_rewrite: rewrite,
    })
}

/// Replaces the existential head variables of each gHorn formula by fresh
/// Skolem constants (no preceding universals) or Skolem functions of the
/// preceding universal variables.
pub fn skolemize(phi: &Theory) -> Result<Theory> {
    let cls = classify_theory(phi)?;
    if !(cls.is(TheoryClass::GHorn) || cls.is(TheoryClass::Prop)) {
        return Err(Error::NotGHorn(format!("theory class is {}", cls.class.label())));
    }
    let sig = &phi.signature;
    let taken = |name: &str| {
        sig.constants.contains(name) || sig.functions.contains_key(name) || sig.predicates.contains_key(name)
    };
    let mut counter = 0usize;
    let mut fresh = || loop {
        let name = format!("sk{counter}");
        counter += 1;
        if !taken(&name) {
            return name;
        }
    };
    let mut out = Vec::with_capacity(phi.formulas.len());
    for f in &phi.formulas {
        let (xs, matrix) = strip_foralls(f);
        let (body, head) = match matrix {
            Formula::Implies(b, h) => (Some(b.as_ref()), h.as_ref()),
            other => (None, other),
        };
        let (ys, h) = strip_exists(head);
        if ys.is_empty() {
            out.push(f.clone());
            continue;
        }
        let mut beta = BTreeMap::new();
        for y in &ys {
            let name = fresh();
            let term = if xs.is_empty() {
                Term::Const(name)
            } else {
                Term::Func(name, xs.iter().map(|x| Term::Var(x.clone())).collect())
            };
            beta.insert(y.clone(), term);
        }
        let new_head = h.apply_substitution(&beta);
        let new_matrix = match body {
            Some(b) => Formula::implies(b.clone(), new_head),
            None => new_head,
        };
        out.push(xs.iter().rev().fold(new_matrix, |acc, x| Formula::forall(x, acc)));
    }
    Theory::with_signature(out, phi.signature.clone())
}

/// The "intersection" of named interpretations over one signature: the
/// domain consists of the tuples (t^{w₁}, …, t^{wₖ}) for names t, and a
/// relation holds of tuples iff it holds componentwise in every wⱼ.
pub fn intersect_models(ws: &[Interpretation]) -> Result<Interpretation> {
    let first = ws.first().ok_or_else(|| Error::Semantic("intersect_models needs at least one model".into()))?;
    for w in ws {
        if w.const_denotation.keys().ne(first.const_denotation.keys()) {
            return Err(Error::Semantic("models over different signatures".into()));
        }
        for e in 0..w.domain_size {
            if w.names_of(e).is_empty() {
                return Err(Error::NotNamed(e));
            }
        }
    }
    let empty = VariableAssignment::new();
    let names = first.names();
    let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut order: Vec<Vec<usize>> = Vec::new();
    let mut const_denotation = BTreeMap::new();
    for t in &names {
        let tuple: Vec<usize> = ws.iter().map(|w| w.eval_term(t, &empty).expect("name denotes")).collect();
        let id = *index.entry(tuple.clone()).or_insert_with(|| {
            order.push(tuple.clone());
            order.len() - 1
        });
        if let Term::Const(c) = t {
            const_denotation.insert(c.clone(), id);
        }
    }
    let n = order.len();
    let elems: Vec<usize> = (0..n).collect();
    let mut func_denotation = BTreeMap::new();
    for (f, table) in &first.func_denotation {
        let arity = table.keys().next().map_or(0, Vec::len);
        let mut m = BTreeMap::new();
        for args in crate::syntax::tuples(&elems, arity) {
            let image: Vec<usize> = ws
                .iter()
                .enumerate()
                .map(|(j, w)| {
                    let comp: Vec<usize> = args.iter().map(|&a| order[a][j]).collect();
                    w.func_denotation[f][&comp]
                })
                .collect();
            let id = index
                .get(&image)
                .ok_or_else(|| Error::Unsupported("function image outside the named domain".into()))?;
            m.insert(args, *id);
        }
        func_denotation.insert(f.clone(), m);
    }
    let mut relations = BTreeMap::new();
    for p in first.relations.keys() {
        let arity = ws
            .iter()
            .flat_map(|w| w.relations[p].iter().next().map(Vec::len))
            .next();
        let mut rel = BTreeSet::new();
        if let Some(arity) = arity {
            for args in crate::syntax::tuples(&elems, arity) {
                let all = ws.iter().enumerate().all(|(j, w)| {
                    let comp: Vec<usize> = args.iter().map(|&a| order[a][j]).collect();
                    w.relations[p].contains(&comp)
                });
                if all {
                    rel.insert(args);
                }
            }
        }
        relations.insert(p.clone(), rel);
    }
    Ok(Interpretation {
        domain_size: n,
        const_denotation,
        func_denotation,
        relations,
        name_depth: first.name_depth,
    })
}

/// Predicates of a signature (helper for callers that only need names).
pub fn predicate_names(sig: &Signature) -> BTreeSet<String> {
    sig.predicates.keys().cloned().collect()
}
