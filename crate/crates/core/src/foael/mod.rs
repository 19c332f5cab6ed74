//! First-order autoepistemic model theory: finite interpretations, name
//! substitutions associated with variable assignments, any-name and
//! all-name satisfaction, and entailment over an interpretation space.
//!
//! Two evaluators live here. [`satisfies`] is the direct recursive
//! definition on one explicit [`Interpretation`]; entailment instead uses
//! [`table`], which evaluates a formula on all relation assignments of a
//! frame at once. The direct evaluator serves as the reference for tests.

pub mod classify;
pub mod space;
pub mod table;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Caps, Error, Result};
use crate::expand::BeliefKernel;
use crate::syntax::{tuples, Atom, Formula, NameSubstitution, Signature, Term, Theory};

pub use classify::{classify_theory, intersect_models, skolemize, TheoryClass, TheoryClassification};
pub use space::{frames, Frame, InterpretationSpace, Layout, Mode};
use table::{conjoin, FrameCompiler, Node, Table};

/// Answers "is the closed formula ψ believed?" for modal atoms `L ψ`.
pub trait ModalOracle: Sync {
    fn believes(&self, closed: &Formula) -> Result<bool>;
}

/// Membership in a kernel Γ plus the implicit reflexive equalities. Only
/// objective atoms may be asked.
#[derive(Clone, Copy, Debug)]
pub struct KernelLookup<'a>(pub &'a BeliefKernel);

impl ModalOracle for KernelLookup<'_> {
    fn believes(&self, closed: &Formula) -> Result<bool> {
        match closed {
            Formula::Atom(a) => Ok(self.0.contains(a)),
            other => Err(Error::ModalScopeTooRich(crate::textio::render_formula(other))),
        }
    }
}

/// An oracle that believes nothing but the reflexive equalities.
pub struct EmptyBeliefs;

impl ModalOracle for EmptyBeliefs {
    fn believes(&self, closed: &Formula) -> Result<bool> {
        Ok(matches!(closed, Formula::Atom(a) if a.is_reflexive()))
    }
}

/// A finite first-order interpretation; equality is element identity.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Interpretation {
    pub domain_size: usize,
    pub const_denotation: BTreeMap<String, usize>,
    /// Serialized as `[arguments, value]` pairs (JSON keys must be strings).
    #[serde(serialize_with = "serialize_functions")]
    pub func_denotation: BTreeMap<String, BTreeMap<Vec<usize>, usize>>,
    pub relations: BTreeMap<String, BTreeSet<Vec<usize>>>,
    /// Term depth of the names used for modal evaluation.
    #[serde(skip)]
    pub name_depth: usize,
}

fn serialize_functions<S: serde::Serializer>(
    funcs: &BTreeMap<String, BTreeMap<Vec<usize>, usize>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(funcs.len()))?;
    for (f, table) in funcs {
        let pairs: Vec<(&Vec<usize>, &usize)> = table.iter().collect();
        map.serialize_entry(f, &pairs)?;
    }
    map.end()
}

/// Values of the variables relevant to a formula.
pub type VariableAssignment = BTreeMap<String, usize>;

impl Interpretation {
    /// Builds the interpretation of `frame` whose relations are the set
    /// bits of `assignment`.
    pub fn from_frame(frame: &Frame, layout: &Layout, assignment: u64, name_depth: usize) -> Interpretation {
        let mut relations: BTreeMap<String, BTreeSet<Vec<usize>>> =
            layout.offsets.keys().map(|p| (p.clone(), BTreeSet::new())).collect();
        for bit in 0..layout.nbits {
            if assignment >> bit & 1 == 1 {
                let (p, args) = layout.decode(bit);
                relations.get_mut(&p).expect("layout predicate").insert(args);
            }
        }
        let func_denotation = frame
            .funcs
            .iter()
            .map(|(f, (arity, table))| {
                let m = tuples(&(0..frame.domain).collect::<Vec<_>>(), *arity)
                    .into_iter()
                    .zip(table.iter().copied())
                    .collect();
                (f.clone(), m)
            })
            .collect();
        Interpretation {
            domain_size: frame.domain,
            const_denotation: frame.consts.clone(),
            func_denotation,
            relations,
            name_depth,
        }
    }

    /// Denotation of a term under a variable assignment.
    pub fn eval_term(&self, t: &Term, b: &VariableAssignment) -> Option<usize> {
        match t {
            Term::Var(v) => b.get(v).copied(),
            Term::Const(c) => self.const_denotation.get(c).copied(),
            Term::Func(f, args) => {
                let vals: Option<Vec<usize>> = args.iter().map(|a| self.eval_term(a, b)).collect();
                self.func_denotation.get(f)?.get(&vals?).copied()
            }
        }
    }

    /// The names (ground terms up to `name_depth`) of this interpretation.
    pub fn names(&self) -> Vec<Term> {
        let mut sig = Signature::new();
        sig.constants = self.const_denotation.keys().cloned().collect();
        for (f, table) in &self.func_denotation {
            let arity = table.keys().next().map_or(0, Vec::len);
            sig.functions.insert(f.clone(), arity);
        }
        sig.names(self.name_depth)
    }

    /// Names denoting element `e`.
    pub fn names_of(&self, e: usize) -> Vec<Term> {
        let empty = VariableAssignment::new();
        self.names()
            .into_iter()
            .filter(|t| self.eval_term(t, &empty) == Some(e))
            .collect()
    }

    /// Whether every element is denoted by some name.
    pub fn is_named(&self) -> bool {
        (0..self.domain_size).all(|e| !self.names_of(e).is_empty())
    }

    fn holds_atom(&self, a: &Atom, b: &VariableAssignment) -> bool {
        match a {
            Atom::Eq(l, r) => self.eval_term(l, b) == self.eval_term(r, b),
            Atom::Pred(p, args) => {
                let vals: Option<Vec<usize>> = args.iter().map(|t| self.eval_term(t, b)).collect();
                match (vals, self.relations.get(p)) {
                    (Some(v), Some(rel)) => rel.contains(&v),
                    _ => false,
                }
            }
        }
    }
}

/// All name substitutions associated with `b` on `vars`: each variable with
/// a named value is mapped to one of its names; variables with unnamed
/// values are left out.
pub fn associated_substitutions(w: &Interpretation, b: &VariableAssignment, vars: &BTreeSet<String>) -> Vec<NameSubstitution> {
    let mut out = vec![NameSubstitution::new()];
    for v in vars {
        let Some(&e) = b.get(v) else { continue };
        let names = w.names_of(e);
        if names.is_empty() {
            continue;
        }
        out = out
            .into_iter()
            .flat_map(|beta| {
                names.iter().map(move |t| {
                    let mut next = beta.clone();
                    next.insert(v.clone(), t.clone());
                    next
                })
            })
            .collect();
    }
    out
}

/// (w, B) ⊨ φ relative to the belief oracle, in the given mode.
pub fn satisfies(w: &Interpretation, b: &VariableAssignment, oracle: &dyn ModalOracle, phi: &Formula, mode: Mode) -> Result<bool> {
    Ok(match phi {
        Formula::Atom(a) => w.holds_atom(a, b),
        Formula::Neq(l, r) => w.eval_term(l, b) != w.eval_term(r, b),
        Formula::Not(g) => !satisfies(w, b, oracle, g, mode)?,
        Formula::And(x, y) => satisfies(w, b, oracle, x, mode)? && satisfies(w, b, oracle, y, mode)?,
        Formula::Or(x, y) => satisfies(w, b, oracle, x, mode)? || satisfies(w, b, oracle, y, mode)?,
        Formula::Implies(x, y) => !satisfies(w, b, oracle, x, mode)? || satisfies(w, b, oracle, y, mode)?,
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let exists = matches!(phi, Formula::Exists(..));
            let mut inner = b.clone();
            for e in 0..w.domain_size {
                inner.insert(v.clone(), e);
                if satisfies(w, &inner, oracle, g, mode)? == exists {
                    return Ok(exists);
                }
            }
            !exists
        }
        Formula::Modal(psi) => {
            let vars = psi.free_vars();
            let betas = associated_substitutions(w, b, &vars);
            let closes = |beta: &NameSubstitution| vars.iter().all(|v| beta.contains_key(v));
            match mode {
                Mode::Any => {
                    for beta in &betas {
                        if closes(beta) && oracle.believes(&psi.apply_substitution(beta))? {
                            return Ok(true);
                        }
                    }
                    false
                }
                Mode::All => {
                    for beta in &betas {
                        if !closes(beta) || !oracle.believes(&psi.apply_substitution(beta))? {
                            return Ok(false);
                        }
                    }
                    true
                }
            }
        }
    })
}

/// w ⊨ φ: satisfaction under every assignment of φ's free variables.
pub fn holds(w: &Interpretation, oracle: &dyn ModalOracle, phi: &Formula, mode: Mode) -> Result<bool> {
    let vars: Vec<String> = phi.free_vars().into_iter().collect();
    let elems: Vec<usize> = (0..w.domain_size).collect();
    for combo in tuples(&elems, vars.len()) {
        let b: VariableAssignment = vars.iter().cloned().zip(combo).collect();
        if !satisfies(w, &b, oracle, phi, mode)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every interpretation of the space, frame by frame.
pub fn enumerate_interpretations(
    sig: &Signature,
    depth: usize,
    space: InterpretationSpace,
    caps: &Caps,
) -> Result<impl Iterator<Item = Interpretation>> {
    let fs = frames(sig, depth, space, caps)?;
    let mut total: u128 = 0;
    let mut items = Vec::with_capacity(fs.len());
    for f in fs {
        let layout = Layout::new(sig, f.domain);
        total += 1u128 << layout.nbits.min(100);
        if total > caps.interpretations as u128 {
            return Err(Error::cap("interpretations", total, caps.interpretations as u128));
        }
        items.push((f, layout));
    }
    Ok(items.into_iter().flat_map(move |(f, layout)| {
        (0..1u64 << layout.nbits).map(move |a| Interpretation::from_frame(&f, &layout, a, depth))
    }))
}

/// Outcome of an entailment check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// No countermodel; `exact` is false when only a bounded space was searched.
    Entailed { exact: bool },
    Countermodel(Box<Interpretation>),
}

impl Verdict {
    pub fn is_entailed(&self) -> bool {
        matches!(self, Verdict::Entailed { .. })
    }
}

/// A theory compiled against every frame of a space.
#[derive(Clone, Debug)]
pub struct CompiledTheory {
    pub theory: Theory,
    pub signature: Signature,
    pub depth: usize,
    pub mode: Mode,
    pub space: InterpretationSpace,
    pub frames: Vec<CompiledFrame>,
}

#[derive(Clone, Debug)]
pub struct CompiledFrame {
    pub compiler: FrameCompiler,
    /// Conjunction of the theory's formulas.
    pub theory: Node,
}

impl CompiledFrame {
    pub fn nbits(&self) -> usize {
        self.compiler.nbits()
    }
}

impl CompiledTheory {
    /// Compiles `theory` over the signature `sig` (which must contain the
    /// theory's own signature, e.g. joined with a probe signature).
    pub fn new(theory: &Theory, sig: &Signature, depth: usize, mode: Mode, space: InterpretationSpace, caps: &Caps) -> Result<CompiledTheory> {
        let fs = frames(sig, depth, space, caps)?;
        let mut total: u128 = 0;
        let mut frames_out = Vec::with_capacity(fs.len());
        for f in fs {
            let layout = Layout::new(sig, f.domain);
            total += 1u128 << layout.nbits.min(100);
            if total > caps.interpretations as u128 {
                return Err(Error::cap("interpretations", total, caps.interpretations as u128));
            }
            let compiler = FrameCompiler::new(f, layout, mode)?;
            let parts: Vec<Node> = theory.formulas.iter().map(|phi| compiler.compile_sentence(phi)).collect();
            let node = if parts.is_empty() {
                Node::Fixed(Table::constant(compiler.nbits(), true))
            } else {
                conjoin(parts)
            };
            frames_out.push(CompiledFrame { compiler, theory: node });
        }
        Ok(CompiledTheory {
            theory: theory.clone(),
            signature: sig.clone(),
            depth,
            mode,
            space,
            frames: frames_out,
        })
    }

    /// Per-frame model tables of the theory under the oracle.
    pub fn models(&self, oracle: &dyn ModalOracle) -> Result<Vec<Table>> {
        self.frames
            .iter()
            .map(|f| Ok(f.theory.eval(f.nbits(), oracle)?.into_owned()))
            .collect()
    }

    /// Per-frame compilation of a sentence.
    pub fn compile(&self, phi: &Formula) -> Vec<Node> {
        self.frames.iter().map(|f| f.compiler.compile_sentence(phi)).collect()
    }

    /// Entailment of `phi` given precomputed model tables.
    pub fn entails_with(&self, models: &[Table], oracle: &dyn ModalOracle, phi: &Formula) -> Result<Verdict> {
        for (f, m) in self.frames.iter().zip(models) {
            if m.is_empty() {
                continue;
            }
            let node = f.compiler.compile_sentence(phi);
            let mut t = node.eval(f.nbits(), oracle)?.into_owned();
            t.negate();
            t.and_assign(m);
            if let Some(a) = t.first() {
                return Ok(Verdict::Countermodel(Box::new(Interpretation::from_frame(
                    &f.compiler.frame,
                    &f.compiler.layout,
                    a,
                    self.depth,
                ))));
            }
        }
        Ok(Verdict::Entailed {
            exact: self.space.is_exact(),
        })
    }
}

/// Φ ⊨ φ relative to the oracle: no interpretation of the space models Φ
/// but not φ. Countermodels are reported smallest domain first.
pub fn entails(
    phi_theory: &Theory,
    oracle: &dyn ModalOracle,
    phi: &Formula,
    mode: Mode,
    space: InterpretationSpace,
    depth: usize,
    caps: &Caps,
) -> Result<Verdict> {
    if !phi.is_closed() {
        return Err(Error::Semantic("entailment query must be a sentence".into()));
    }
    let sig = phi_theory.signature.union(&phi.signature()?)?;
    let compiled = CompiledTheory::new(phi_theory, &sig, depth, mode, space, caps)?;
    let models = compiled.models(oracle)?;
    compiled.entails_with(&models, oracle, phi)
}
