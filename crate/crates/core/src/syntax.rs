//! Terms, atoms, formulas, rules, programs and theories, plus the purely
//! syntactic operations on them (free variables, name substitution,
//! universal closure, desugaring, ground atoms of a signature).

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

/// Name of the constant added to a signature that has predicates of positive
/// arity but no constants of its own.
pub const IMPLICIT_CONSTANT: &str = "c0";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    Func(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.to_string())
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::Func(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Nesting depth of function applications (constants and variables: 0).
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 0,
            Term::Func(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::Func(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn substitute(&self, beta: &NameSubstitution) -> Term {
        match self {
            Term::Var(v) => beta.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Const(_) => self.clone(),
            Term::Func(f, args) => Term::Func(f.clone(), args.iter().map(|a| a.substitute(beta)).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Pred(String, Vec<Term>),
    /// Always stored with the smaller term first; build with [`Atom::equality`].
    Eq(Term, Term),
}

impl Atom {
    pub fn pred(name: &str, args: Vec<Term>) -> Atom {
        Atom::Pred(name.to_string(), args)
    }

    /// A 0-ary predicate atom.
    pub fn prop(name: &str) -> Atom {
        Atom::Pred(name.to_string(), Vec::new())
    }

    /// Equality atom in canonical orientation.
    pub fn equality(lhs: Term, rhs: Term) -> Atom {
        if rhs < lhs {
            Atom::Eq(rhs, lhs)
        } else {
            Atom::Eq(lhs, rhs)
        }
    }

    pub fn is_equality(&self) -> bool {
        matches!(self, Atom::Eq(..))
    }

    /// `t = t` for identical terms.
    pub fn is_reflexive(&self) -> bool {
        matches!(self, Atom::Eq(l, r) if l == r)
    }

    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Atom::Pred(_, args) => args.iter().collect(),
            Atom::Eq(l, r) => vec![l, r],
        }
    }

    pub fn is_ground(&self) -> bool {
        self.terms().into_iter().all(Term::is_ground)
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        for t in self.terms() {
            t.collect_vars(out);
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn substitute(&self, beta: &NameSubstitution) -> Atom {
        match self {
            Atom::Pred(p, args) => Atom::Pred(p.clone(), args.iter().map(|a| a.substitute(beta)).collect()),
            Atom::Eq(l, r) => Atom::equality(l.substitute(beta), r.substitute(beta)),
        }
    }

    /// `(symbol, arity)` of a predicate atom.
    pub fn predicate(&self) -> Option<(&str, usize)> {
        match self {
            Atom::Pred(p, args) => Some((p.as_str(), args.len())),
            Atom::Eq(..) => None,
        }
    }
}

/// First-order autoepistemic formulas. `Atom`, `Not`, `And`, `Exists` and
/// `Modal` are the core connectives; `Or`, `Implies`, `Forall` and `Neq` are
/// sugar kept for faithful printing and removed by [`Formula::desugar`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Modal(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    /// Canonically oriented like [`Atom::Eq`].
    Neq(Term, Term),
}

impl Formula {
    pub fn atom(a: Atom) -> Formula {
        Formula::Atom(a)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(v: &str, f: Formula) -> Formula {
        Formula::Exists(v.to_string(), Box::new(f))
    }

    pub fn forall(v: &str, f: Formula) -> Formula {
        Formula::Forall(v.to_string(), Box::new(f))
    }

    pub fn modal(f: Formula) -> Formula {
        Formula::Modal(Box::new(f))
    }

    pub fn neq(l: Term, r: Term) -> Formula {
        if r < l {
            Formula::Neq(r, l)
        } else {
            Formula::Neq(l, r)
        }
    }

    /// Left-nested conjunction; `None` for an empty sequence.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        items.into_iter().reduce(Formula::and)
    }

    /// Left-nested disjunction; `None` for an empty sequence.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        items.into_iter().reduce(Formula::or)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => {
                for v in a.vars() {
                    if !bound.contains(&v) {
                        out.insert(v);
                    }
                }
            }
            Formula::Neq(l, r) => {
                let mut vs = BTreeSet::new();
                l.collect_vars(&mut vs);
                r.collect_vars(&mut vs);
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::Not(f) | Formula::Modal(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Replaces free occurrences of the variables in `dom(beta)`.
    pub fn apply_substitution(&self, beta: &NameSubstitution) -> Formula {
        if beta.is_empty() {
            return self.clone();
        }
        match self {
            Formula::Atom(a) => Formula::Atom(a.substitute(beta)),
            Formula::Neq(l, r) => Formula::neq(l.substitute(beta), r.substitute(beta)),
            Formula::Not(f) => Formula::not(f.apply_substitution(beta)),
            Formula::Modal(f) => Formula::modal(f.apply_substitution(beta)),
            Formula::And(a, b) => Formula::and(a.apply_substitution(beta), b.apply_substitution(beta)),
            Formula::Or(a, b) => Formula::or(a.apply_substitution(beta), b.apply_substitution(beta)),
            Formula::Implies(a, b) => Formula::implies(a.apply_substitution(beta), b.apply_substitution(beta)),
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                let body = if beta.contains_key(v) {
                    let mut inner = beta.clone();
                    inner.remove(v);
                    f.apply_substitution(&inner)
                } else {
                    f.apply_substitution(beta)
                };
                match self {
                    Formula::Exists(..) => Formula::exists(v, body),
                    _ => Formula::forall(v, body),
                }
            }
        }
    }

    /// `(∀)φ`: all free variables universally quantified, outermost first in
    /// lexicographic order.
    pub fn universal_closure(&self) -> Formula {
        self.free_vars()
            .into_iter()
            .rev()
            .fold(self.clone(), |acc, v| Formula::forall(&v, acc))
    }

    /// Rewrites all sugar into the core connectives.
    pub fn desugar(&self) -> Formula {
        match self {
            Formula::Atom(_) => self.clone(),
            Formula::Not(f) => Formula::not(f.desugar()),
            Formula::And(a, b) => Formula::and(a.desugar(), b.desugar()),
            Formula::Exists(v, f) => Formula::exists(v, f.desugar()),
            Formula::Modal(f) => Formula::modal(f.desugar()),
            Formula::Or(a, b) => Formula::not(Formula::and(Formula::not(a.desugar()), Formula::not(b.desugar()))),
            Formula::Implies(a, b) => {
                Formula::not(Formula::and(Formula::not(Formula::not(a.desugar())), Formula::not(b.desugar())))
            }
            Formula::Forall(v, f) => Formula::not(Formula::exists(v, Formula::not(f.desugar()))),
            Formula::Neq(l, r) => Formula::not(Formula::Atom(Atom::equality(l.clone(), r.clone()))),
        }
    }

    /// True when the formula contains no modal operator.
    pub fn is_objective(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Neq(..) => true,
            Formula::Modal(_) => false,
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => f.is_objective(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => a.is_objective() && b.is_objective(),
        }
    }

    /// The scopes ψ of all modal subformulas `L ψ` (outermost occurrences
    /// first, nested ones included).
    pub fn modal_scopes(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        self.walk(&mut |f| {
            if let Formula::Modal(inner) = f {
                out.push(inner.as_ref());
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, visit: &mut dyn FnMut(&'a Formula)) {
        visit(self);
        match self {
            Formula::Atom(_) | Formula::Neq(..) => {}
            Formula::Not(f) | Formula::Modal(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => f.walk(visit),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.walk(visit);
                b.walk(visit);
            }
        }
    }

    /// All atoms occurring in the formula (sugar `≠` reported as `=`).
    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.walk(&mut |f| match f {
            Formula::Atom(a) => out.push(a.clone()),
            Formula::Neq(l, r) => out.push(Atom::equality(l.clone(), r.clone())),
            _ => {}
        });
        out
    }

    /// The signature of the symbols used in the formula.
    pub fn signature(&self) -> Result<Signature> {
        let mut sig = Signature::default();
        for a in self.atoms() {
            sig.add_atom(&a)?;
        }
        Ok(sig)
    }
}

/// A partial map from variables to names (ground terms).
pub type NameSubstitution = BTreeMap<String, Term>;

/// A finite signature. `functions` is empty unless function symbols are
/// explicitly used.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub constants: BTreeSet<String>,
    pub functions: BTreeMap<String, usize>,
    pub predicates: BTreeMap<String, usize>,
    /// Set when `constants` holds only [`IMPLICIT_CONSTANT`], added to satisfy
    /// the "some constant exists" requirement rather than taken from the text.
    pub implicit_constant: bool,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn with_constants<'a>(mut self, names: impl IntoIterator<Item = &'a str>) -> Signature {
        for n in names {
            self.constants.insert(n.to_string());
        }
        self
    }

    pub fn with_predicate(mut self, name: &str, arity: usize) -> Signature {
        self.predicates.insert(name.to_string(), arity);
        self
    }

    pub fn with_function(mut self, name: &str, arity: usize) -> Signature {
        self.functions.insert(name.to_string(), arity);
        self
    }

    pub fn add_predicate(&mut self, name: &str, arity: usize) -> Result<()> {
        match self.predicates.get(name) {
            Some(&a) if a != arity => Err(Error::Semantic(format!(
                "predicate `{name}` used with arities {a} and {arity}"
            ))),
            _ => {
                self.predicates.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    pub fn add_term(&mut self, t: &Term) -> Result<()> {
        match t {
            Term::Var(_) => Ok(()),
            Term::Const(c) => {
                self.constants.insert(c.clone());
                Ok(())
            }
            Term::Func(f, args) => {
                match self.functions.get(f) {
                    Some(&a) if a != args.len() => {
                        return Err(Error::Semantic(format!(
                            "function `{f}` used with arities {a} and {}",
                            args.len()
                        )))
                    }
                    _ => {
                        self.functions.insert(f.clone(), args.len());
                    }
                }
                args.iter().try_for_each(|a| self.add_term(a))
            }
        }
    }

    pub fn add_atom(&mut self, a: &Atom) -> Result<()> {
        if let Atom::Pred(p, args) = a {
            self.add_predicate(p, args.len())?;
        }
        a.terms().into_iter().try_for_each(|t| self.add_term(t))
    }

    /// Restores the invariant "predicates of positive arity imply a constant"
    /// by adding [`IMPLICIT_CONSTANT`], and drops a previously added implicit
    /// constant once real constants are present.
    pub fn normalize(&mut self) {
        let needs_constant = self.predicates.values().any(|&a| a > 0) || !self.functions.is_empty();
        if self.implicit_constant && self.constants.len() > 1 {
            self.constants.remove(IMPLICIT_CONSTANT);
            self.implicit_constant = false;
        }
        if self.constants.is_empty() && needs_constant {
            self.constants.insert(IMPLICIT_CONSTANT.to_string());
            self.implicit_constant = true;
        }
    }

    /// Σ₁ ∪ Σ₂; fails on arity clashes.
    pub fn union(&self, other: &Signature) -> Result<Signature> {
        let mut out = Signature::default();
        for sig in [self, other] {
            for c in &sig.constants {
                if !(sig.implicit_constant && c == IMPLICIT_CONSTANT) {
                    out.constants.insert(c.clone());
                }
            }
            for (p, &a) in &sig.predicates {
                out.add_predicate(p, a)?;
            }
            for (f, &a) in &sig.functions {
                match out.functions.get(f) {
                    Some(&b) if b != a => {
                        return Err(Error::Semantic(format!("function `{f}` used with arities {a} and {b}")))
                    }
                    _ => {
                        out.functions.insert(f.clone(), a);
                    }
                }
            }
        }
        out.normalize();
        Ok(out)
    }

    /// Whether every symbol of `other` is present here with the same arity.
    pub fn contains(&self, other: &Signature) -> bool {
        other
            .constants
            .iter()
            .all(|c| self.constants.contains(c) || (other.implicit_constant && c == IMPLICIT_CONSTANT))
            && other.predicates.iter().all(|(p, a)| self.predicates.get(p) == Some(a))
            && other.functions.iter().all(|(f, a)| self.functions.get(f) == Some(a))
    }

    /// The names N_Σ of term depth ≤ `depth`, in term order.
    pub fn names(&self, depth: usize) -> Vec<Term> {
        let mut all: BTreeSet<Term> = self.constants.iter().map(|c| Term::Const(c.clone())).collect();
        for _ in 0..depth {
            let mut next = Vec::new();
            for (f, &arity) in &self.functions {
                let current: Vec<Term> = all.iter().cloned().collect();
                for args in tuples(&current, arity) {
                    let t = Term::Func(f.clone(), args);
                    if !all.contains(&t) {
                        next.push(t);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            all.extend(next);
        }
        all.into_iter().collect()
    }

    /// Number of ground atoms (see [`Signature::ground_atoms`]) without
    /// materializing them.
    pub fn ground_atom_count(&self, depth: usize) -> u128 {
        let n = self.names(depth).len() as u128;
        let preds: u128 = self.predicates.values().map(|&a| n.saturating_pow(a as u32)).sum();
        preds + n * n.saturating_sub(1) / 2
    }

    /// All Pred atoms over names of depth ≤ `depth`, followed by the
    /// canonical equalities between distinct names.
    pub fn ground_atoms(&self, depth: usize, cap: usize) -> Result<Vec<Atom>> {
        let count = self.ground_atom_count(depth);
        if count > cap as u128 {
            return Err(Error::cap("ground atoms", count, cap as u128));
        }
        let mut out = self.ground_pred_atoms(depth);
        out.extend(self.ground_equalities(depth));
        Ok(out)
    }

    /// The Pred part of [`Signature::ground_atoms`] (no cap check).
    pub fn ground_pred_atoms(&self, depth: usize) -> Vec<Atom> {
        let names = self.names(depth);
        let mut out = Vec::new();
        for (p, &arity) in &self.predicates {
            for args in tuples(&names, arity) {
                out.push(Atom::Pred(p.clone(), args));
            }
        }
        out
    }

    /// Canonical equalities between distinct names.
    pub fn ground_equalities(&self, depth: usize) -> Vec<Atom> {
        let names = self.names(depth);
        let mut out = Vec::new();
        for i in 0..names.len() {
            for j in i + 1..names.len() {
                out.push(Atom::equality(names[i].clone(), names[j].clone()));
            }
        }
        out
    }
}

/// All `arity`-tuples over `items`, in lexicographic order.
pub fn tuples<T: Clone>(items: &[T], arity: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        let mut next = Vec::with_capacity(out.len() * items.len());
        for prefix in &out {
            for it in items {
                let mut t = prefix.clone();
                t.push(it.clone());
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// A disjunctive rule `h₁ | … | hₖ :- b₁, …, bₘ, not c₁, …, not cₙ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub head: Vec<Atom>,
    pub pos: Vec<Atom>,
    pub neg: Vec<Atom>,
}

impl Rule {
    pub fn new(head: Vec<Atom>, pos: Vec<Atom>, neg: Vec<Atom>) -> Result<Rule> {
        let r = Rule { head, pos, neg };
        r.check()?;
        Ok(r)
    }

    pub fn fact(head: Atom) -> Rule {
        Rule {
            head: vec![head],
            pos: Vec::new(),
            neg: Vec::new(),
        }
    }

    fn check(&self) -> Result<()> {
        if self.head.is_empty() {
            return Err(Error::Semantic("rule with an empty head".into()));
        }
        if self.atoms().any(Atom::is_equality) {
            return Err(Error::Semantic("equality atom in a rule".into()));
        }
        Ok(())
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.head.iter().chain(&self.pos).chain(&self.neg)
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for a in self.atoms() {
            a.collect_vars(&mut out);
        }
        out
    }

    pub fn is_normal(&self) -> bool {
        self.head.len() == 1
    }

    pub fn is_positive(&self) -> bool {
        self.neg.is_empty()
    }

    pub fn is_ground(&self) -> bool {
        self.atoms().all(Atom::is_ground)
    }

    /// Every variable occurs in the positive body.
    pub fn is_safe(&self) -> bool {
        let mut pos = BTreeSet::new();
        for a in &self.pos {
            a.collect_vars(&mut pos);
        }
        self.vars().is_subset(&pos)
    }

    pub fn substitute(&self, beta: &NameSubstitution) -> Rule {
        let sub = |atoms: &Vec<Atom>| atoms.iter().map(|a| a.substitute(beta)).collect();
        Rule {
            head: sub(&self.head),
            pos: sub(&self.pos),
            neg: sub(&self.neg),
        }
    }
}

/// A logic program with its signature Σ_P.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub rules: Vec<Rule>,
    pub signature: Signature,
}

impl Program {
    /// Builds a program whose signature is derived from the rules plus the
    /// given extra constants.
    pub fn new(rules: Vec<Rule>, extra_constants: &[&str]) -> Result<Program> {
        let mut signature = Signature::default();
        for r in &rules {
            r.check()?;
            for a in r.atoms() {
                signature.add_atom(a)?;
            }
        }
        for c in extra_constants {
            signature.constants.insert(c.to_string());
        }
        signature.normalize();
        Ok(Program { rules, signature })
    }

    /// Same rules, explicitly chosen signature (must cover the rules).
    pub fn with_signature(rules: Vec<Rule>, mut signature: Signature) -> Result<Program> {
        let derived = Program::new(rules.clone(), &[])?;
        signature.normalize();
        if !signature.contains(&derived.signature) {
            return Err(Error::Semantic("signature does not cover the rules".into()));
        }
        Ok(Program { rules, signature })
    }

    pub fn is_normal(&self) -> bool {
        self.rules.iter().all(Rule::is_normal)
    }

    pub fn is_positive(&self) -> bool {
        self.rules.iter().all(Rule::is_positive)
    }

    pub fn is_ground(&self) -> bool {
        self.rules.iter().all(Rule::is_ground)
    }

    pub fn is_safe(&self) -> bool {
        self.rules.iter().all(Rule::is_safe)
    }
}

/// A set of sentences (modal operator permitted) with its signature.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Theory {
    pub formulas: Vec<Formula>,
    pub signature: Signature,
}

impl Theory {
    /// Builds a theory of sentences; the signature is derived from the
    /// formulas plus the extra constants.
    pub fn new(formulas: Vec<Formula>, extra_constants: &[&str]) -> Result<Theory> {
        let mut signature = Signature::default();
        for f in &formulas {
            let free = f.free_vars();
            if !free.is_empty() {
                return Err(Error::Semantic(format!(
                    "formula has free variables {}",
                    free.into_iter().collect::<Vec<_>>().join(", ")
                )));
            }
            for a in f.atoms() {
                signature.add_atom(&a)?;
            }
        }
        for c in extra_constants {
            signature.constants.insert(c.to_string());
        }
        signature.normalize();
        Ok(Theory { formulas, signature })
    }

    pub fn empty() -> Theory {
        Theory::default()
    }

    /// Same formulas over a larger signature.
    pub fn with_signature(formulas: Vec<Formula>, signature: Signature) -> Result<Theory> {
        let derived = Theory::new(formulas.clone(), &[])?;
        let signature = signature.union(&derived.signature)?;
        Ok(Theory { formulas, signature })
    }

    pub fn is_objective(&self) -> bool {
        self.formulas.iter().all(Formula::is_objective)
    }

    /// Union of the two formula sequences over the joint signature.
    pub fn union(&self, other: &Theory) -> Result<Theory> {
        let mut formulas = self.formulas.clone();
        formulas.extend(other.formulas.iter().cloned());
        Ok(Theory {
            formulas,
            signature: self.signature.union(&other.signature)?,
        })
    }
}
