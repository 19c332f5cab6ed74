//! Stable expansions. For theories whose modal operators only scope
//! objective atoms, a stable expansion is determined by its kernel Γ — the
//! objective ground atoms it contains — and Γ must equal the set of atoms
//! entailed by the theory relative to Γ. Expansions are found by guessing
//! every congruence-closed candidate Γ and verifying this fixpoint.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::error::{Caps, Error, Result};
use crate::foael::table::Table;
use crate::foael::{CompiledTheory, InterpretationSpace, KernelLookup, ModalOracle, Mode};
use crate::syntax::{Atom, Formula, Signature, Term, Theory};
use crate::textio::render_atom;

/// The objective ground atoms of a stable expansion (reflexive equalities
/// implicit).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BeliefKernel {
    pub atoms: BTreeSet<Atom>,
    pub equalities: BTreeSet<Atom>,
}

impl BeliefKernel {
    pub fn new(items: impl IntoIterator<Item = Atom>) -> BeliefKernel {
        let mut k = BeliefKernel::default();
        for a in items {
            k.insert(a);
        }
        k
    }

    pub fn insert(&mut self, a: Atom) {
        match a {
            Atom::Eq(ref l, ref r) if l == r => {}
            Atom::Eq(l, r) => {
                self.equalities.insert(Atom::equality(l, r));
            }
            p => {
                self.atoms.insert(p);
            }
        }
    }

    /// Membership, with reflexive equalities always present.
    pub fn contains(&self, a: &Atom) -> bool {
        match a {
            Atom::Eq(l, r) if l == r => true,
            Atom::Eq(l, r) => self.equalities.contains(&Atom::equality(l.clone(), r.clone())),
            p => self.atoms.contains(p),
        }
    }

    pub fn len(&self) -> usize {
        self.atoms.len() + self.equalities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = &Atom> {
        self.atoms.iter().chain(&self.equalities)
    }

    /// Canonical atom strings, sorted.
    pub fn sorted_strings(&self) -> Vec<String> {
        let mut v: Vec<String> = self.iter().map(render_atom).collect();
        v.sort();
        v
    }

    /// Like [`BeliefKernel::sorted_strings`], adding `t = t` for the given names.
    pub fn sorted_strings_with_reflexive(&self, names: &[Term]) -> Vec<String> {
        let mut v = self.sorted_strings();
        v.extend(names.iter().map(|t| render_atom(&Atom::Eq(t.clone(), t.clone()))));
        v.sort();
        v
    }

    /// The Pred atoms only.
    pub fn pred_atoms(&self) -> &BTreeSet<Atom> {
        &self.atoms
    }
}

/// A stable expansion, identified with its kernel.
#[derive(Clone)]
pub struct Expansion {
    pub kernel: BeliefKernel,
    pub consistent: bool,
    pub mode: Mode,
    pub space: InterpretationSpace,
    pub theory: Arc<Theory>,
    engine: Arc<CompiledTheory>,
    models: Arc<Vec<Table>>,
    cache: Arc<Mutex<HashMap<Formula, bool>>>,
}

impl std::fmt::Debug for Expansion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Expansion")
            .field("kernel", &self.kernel.sorted_strings())
            .field("consistent", &self.consistent)
            .field("mode", &self.mode)
            .field("space", &self.space)
            .finish()
    }
}

/// Outcome of a membership query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Membership {
    pub member: bool,
    /// False when the verdict rests on a bounded interpretation space.
    pub exact: bool,
}

impl Expansion {
    /// Decides φ ∈ T for the expansion T with this kernel.
    pub fn member(&self, phi: &Formula) -> Result<Membership> {
        let exact = self.space.is_exact();
        if !phi.is_closed() {
            return Err(Error::Semantic("membership query must be a sentence".into()));
        }
        if !self.consistent {
            if phi.is_objective() {
                return Ok(Membership { member: true, exact });
            }
            return Err(Error::InconsistentKernel);
        }
        if let Formula::Atom(a) = phi {
            return Ok(Membership {
                member: self.kernel.contains(a),
                exact,
            });
        }
        if let Some(&m) = self.cache.lock().expect("membership cache").get(phi) {
            return Ok(Membership { member: m, exact });
        }
        let sig = phi.signature()?;
        if !self.engine.signature.contains(&sig) {
            return Err(Error::Semantic(format!(
                "query `{}` uses symbols outside the theory's signature",
                crate::textio::render_formula(phi)
            )));
        }
        let verdict = self.engine.entails_with(&self.models, self, phi)?;
        let m = verdict.is_entailed();
        self.cache.lock().expect("membership cache").insert(phi.clone(), m);
        Ok(Membership { member: m, exact })
    }

    /// Membership where the inconsistent expansion (the whole language)
    /// contains every formula.
    pub fn contains(&self, phi: &Formula) -> Result<Membership> {
        if !self.consistent {
            return Ok(Membership {
                member: true,
                exact: self.space.is_exact(),
            });
        }
        self.member(phi)
    }

    /// Model tables of the theory relative to this kernel, one per frame.
    /// A model of the expansion's theory (relative to the expansion) that
    /// falsifies the sentence, or `None` if the sentence is a member.
    pub fn countermodel(&self, phi: &Formula) -> Result<Option<crate::foael::Interpretation>> {
        if !phi.is_closed() {
            return Err(Error::Semantic("membership query must be a sentence".into()));
        }
        if !self.consistent {
            return Ok(None);
        }
        match self.engine.entails_with(&self.models, self, phi)? {
            crate::foael::Verdict::Countermodel(w) => Ok(Some(*w)),
            _ => Ok(None),
        }
    }

    pub fn model_tables(&self) -> &[Table] {
        &self.models
    }

    pub fn engine(&self) -> &CompiledTheory {
        &self.engine
    }
}

impl ModalOracle for Expansion {
    fn believes(&self, closed: &Formula) -> Result<bool> {
        Ok(self.member(closed)?.member)
    }
}

/// Set partitions of `0..n` as restricted-growth strings.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let limit = if cur.is_empty() { 0 } else { max + 1 };
        for v in 0..=limit {
            cur.push(v);
            rec(n, max.max(v), cur, out);
            cur.pop();
        }
    }
    rec(n, 0, &mut cur, &mut out);
    out
}

/// One equivalence of names together with the classes of ground atoms
/// modulo that equivalence; candidate kernels pick a subset of classes.
#[derive(Clone, Debug)]
struct KernelFamily {
    equalities: Vec<Atom>,
    classes: Vec<Vec<Atom>>,
}

impl KernelFamily {
    fn kernel(&self, mask: u64) -> BeliefKernel {
        let mut k = BeliefKernel::new(self.equalities.iter().cloned());
        for (i, class) in self.classes.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for a in class {
                    k.insert(a.clone());
                }
            }
        }
        k
    }
}

fn kernel_families(sig: &Signature, depth: usize, caps: &Caps) -> Result<Vec<KernelFamily>> {
    let count = sig.ground_atom_count(depth);
    if count > caps.atoms as u128 {
        return Err(Error::cap("ground atoms", count, caps.atoms as u128));
    }
    let names = sig.names(depth);
    let preds = sig.ground_pred_atoms(depth);
    let mut families = Vec::new();
    let mut total: u128 = 0;
    for part in partitions(names.len()) {
        let rep = |t: &Term| -> Term {
            match names.iter().position(|n| n == t) {
                Some(i) => names[part.iter().position(|&b| b == part[i]).expect("block")].clone(),
                None => t.clone(),
            }
        };
        // Congruence: names built from equivalent arguments must be equivalent.
        let congruent = names.iter().enumerate().all(|(i, s)| {
            names.iter().enumerate().all(|(j, t)| match (s, t) {
                (Term::Func(f, xs), Term::Func(g, ys)) if f == g && xs.iter().zip(ys).all(|(x, y)| rep(x) == rep(y)) => {
                    part[i] == part[j]
                }
                _ => true,
            })
        });
        if !congruent {
            continue;
        }
        let mut equalities = Vec::new();
        for i in 0..names.len() {
            for j in i + 1..names.len() {
                if part[i] == part[j] {
                    equalities.push(Atom::equality(names[i].clone(), names[j].clone()));
                }
            }
        }
        let mut classes: Vec<(Atom, Vec<Atom>)> = Vec::new();
        for a in &preds {
            let key = match a {
                Atom::Pred(p, args) => Atom::Pred(p.clone(), args.iter().map(&rep).collect()),
                other => other.clone(),
            };
            match classes.iter_mut().find(|(k, _)| *k == key) {
                Some((_, members)) => members.push(a.clone()),
                None => classes.push((key, vec![a.clone()])),
            }
        }
        total += 1u128 << classes.len().min(100);
        if total > caps.kernels as u128 {
            return Err(Error::cap("candidate kernels", total, caps.kernels as u128));
        }
        families.push(KernelFamily {
            equalities,
            classes: classes.into_iter().map(|(_, m)| m).collect(),
        });
    }
    Ok(families)
}

/// Every congruence-closed set of ground atoms and nontrivial equalities.
pub fn candidate_kernels(sig: &Signature, depth: usize, caps: &Caps) -> Result<Vec<BeliefKernel>> {
    let families = kernel_families(sig, depth, caps)?;
    Ok(families
        .iter()
        .flat_map(|f| (0..1u64 << f.classes.len()).map(move |m| f.kernel(m)))
        .collect())
}

/// Precomputed per-frame data for the fixpoint test.
struct Checker {
    engine: Arc<CompiledTheory>,
    atoms: Vec<Atom>,
    /// For each frame and atom: `Ok(bit)` for Pred atoms, `Err(equal)` for
    /// equalities (whose truth is fixed by the frame).
    probes: Vec<Vec<std::result::Result<usize, bool>>>,
}

impl Checker {
    fn new(phi: &Theory, mode: Mode, space: InterpretationSpace, depth: usize, caps: &Caps) -> Result<Checker> {
        for f in &phi.formulas {
            for scope in f.modal_scopes() {
                if !matches!(scope, Formula::Atom(_)) {
                    return Err(Error::ModalScopeTooRich(crate::textio::render_formula(scope)));
                }
            }
        }
        let atoms = phi.signature.ground_atoms(depth, caps.atoms)?;
        let engine = CompiledTheory::new(phi, &phi.signature, depth, mode, space, caps)?;
        let probes = engine
            .frames
            .iter()
            .map(|f| {
                atoms
                    .iter()
                    .map(|a| match a {
                        Atom::Pred(p, args) => {
                            let vals: Vec<usize> =
                                args.iter().map(|t| f.compiler.frame.eval_ground(t).expect("name")).collect();
                            Ok(f.compiler.layout.bit(p, &vals).expect("bit"))
                        }
                        Atom::Eq(l, r) => Err(f.compiler.frame.eval_ground(l) == f.compiler.frame.eval_ground(r)),
                    })
                    .collect()
            })
            .collect();
        Ok(Checker {
            engine: Arc::new(engine),
            atoms,
            probes,
        })
    }

    /// `None` if Γ is not a stable kernel, else `Some(consistent)`.
    fn check(&self, kernel: &BeliefKernel) -> Result<Option<bool>> {
        let oracle = KernelLookup(kernel);
        let in_kernel: Vec<bool> = self.atoms.iter().map(|a| kernel.contains(a)).collect();
        let mut entailed = vec![true; self.atoms.len()];
        let mut any_model = false;
        for (f, probes) in self.engine.frames.iter().zip(&self.probes) {
            let m = f.theory.eval(f.nbits(), &oracle)?;
            if m.is_empty() {
                continue;
            }
            any_model = true;
            for (i, probe) in probes.iter().enumerate() {
                if !entailed[i] {
                    continue;
                }
                let holds = match probe {
                    Ok(bit) => m.all_have_bit(*bit),
                    Err(equal) => *equal,
                };
                if !holds {
                    entailed[i] = false;
                    if in_kernel[i] {
                        return Ok(None);
                    }
                }
            }
        }
        if !any_model {
            return Ok(in_kernel.iter().all(|&b| b).then_some(false));
        }
        Ok((entailed == in_kernel).then_some(true))
    }

    fn expansion(&self, kernel: BeliefKernel, consistent: bool, theory: &Arc<Theory>) -> Result<Expansion> {
        let models = self.engine.models(&KernelLookup(&kernel))?;
        Ok(Expansion {
            kernel,
            consistent,
            mode: self.engine.mode,
            space: self.engine.space,
            theory: theory.clone(),
            engine: self.engine.clone(),
            models: Arc::new(models),
            cache: Arc::new(Mutex::new(HashMap::new())),
        })
    }
}

/// Whether Γ equals the set of ground atoms entailed by Φ relative to Γ.
pub fn is_stable_kernel(
    phi: &Theory,
    kernel: &BeliefKernel,
    mode: Mode,
    space: InterpretationSpace,
    depth: usize,
    caps: &Caps,
) -> Result<bool> {
    Ok(Checker::new(phi, mode, space, depth, caps)?.check(kernel)?.is_some())
}

/// All stable expansions of Φ, sorted by kernel text.
pub fn stable_expansions(phi: &Theory, mode: Mode, space: InterpretationSpace, depth: usize, caps: &Caps) -> Result<Vec<Expansion>> {
    let checker = Checker::new(phi, mode, space, depth, caps)?;
    let families = kernel_families(&phi.signature, depth, caps)?;
    let candidates: Vec<(usize, u64)> = families
        .iter()
        .enumerate()
        .flat_map(|(i, f)| (0..1u64 << f.classes.len()).map(move |m| (i, m)))
        .collect();
    let found: Vec<(BeliefKernel, bool)> = candidates
        .par_iter()
        .map(|&(i, m)| {
            let k = families[i].kernel(m);
            Ok(checker.check(&k)?.map(|consistent| (k, consistent)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let theory = Arc::new(phi.clone());
    let mut out = found
        .into_iter()
        .map(|(k, c)| checker.expansion(k, c, &theory))
        .collect::<Result<Vec<_>>>()?;
    out.sort_by_key(|e| e.kernel.sorted_strings());
    Ok(out)
}

/// Decides φ ∈ T for the expansion of Φ with kernel Γ (Γ must be stable).
pub fn member(
    phi: &Theory,
    kernel: &BeliefKernel,
    query: &Formula,
    mode: Mode,
    space: InterpretationSpace,
    depth: usize,
    caps: &Caps,
) -> Result<Membership> {
    let checker = Checker::new(phi, mode, space, depth, caps)?;
    let consistent = checker
        .check(kernel)?
        .ok_or_else(|| Error::Semantic("kernel is not a stable kernel of the theory".into()))?;
    checker.expansion(kernel.clone(), consistent, &Arc::new(phi.clone()))?.member(query)
}

/// Autoepistemic consequence of one probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Consequence {
    /// Member of every expansion.
    Holds { exact: bool },
    /// Missing from some expansion.
    Fails { exact: bool },
    /// The theory has no stable expansion at all.
    VacuouslyTrue,
}

impl Consequence {
    pub fn holds(self) -> bool {
        !matches!(self, Consequence::Fails { .. })
    }
}

/// For each probe: is it in every stable expansion of Φ?
pub fn consequences(
    phi: &Theory,
    probes: &[Formula],
    mode: Mode,
    space: InterpretationSpace,
    depth: usize,
    caps: &Caps,
) -> Result<Vec<(Formula, Consequence)>> {
    let exps = stable_expansions(phi, mode, space, depth, caps)?;
    consequences_of(&exps, probes)
}

/// [`consequences`] for already computed expansions.
pub fn consequences_of(exps: &[Expansion], probes: &[Formula]) -> Result<Vec<(Formula, Consequence)>> {
    probes
        .iter()
        .map(|p| {
            if exps.is_empty() {
                return Ok((p.clone(), Consequence::VacuouslyTrue));
            }
            let mut exact = true;
            for e in exps {
                let m = e.contains(p)?;
                exact &= m.exact;
                if !m.member {
                    return Ok((p.clone(), Consequence::Fails { exact }));
                }
            }
            Ok((p.clone(), Consequence::Holds { exact }))
        })
        .collect()
}
