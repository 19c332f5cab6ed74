//! Correspondence checks between theories: equivalence of stable expansions
//! and inclusion of autoepistemic consequences on finite probe families, and
//! harnesses for the inclusion graph between embeddings, the correspondence
//! table for combinations, grounding invariance, and closed domains.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use crate::embed::{combine_with, embed_program_with, rule_body, EmbedOptions, EmbeddingKind, EmbeddingVariant};
use crate::error::{Caps, Error, Result};
use crate::expand::{stable_expansions, Expansion};
use crate::foael::{classify_theory, Interpretation, InterpretationSpace, Mode, TheoryClass};
use crate::lp::grounding;
use crate::syntax::{Atom, Formula, Program, Signature, Theory};
use crate::textio::{parse_formulas, render_formula, render_rule};

/// Distinguishing formulas from the worked counterexamples, appended to
/// probe families whenever their symbols fit the signature.
pub const WITNESS_PROBES: &str = include_str!("../../../corpus/witnesses.fot");

/// The bundled witness probes.
pub fn witness_probes() -> Vec<Formula> {
    parse_formulas(WITNESS_PROBES).expect("bundled witness probes parse")
}

/// Finite surrogates for the formula classes compared by correspondences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ProbeLevel {
    /// Objective ground atoms (equalities included).
    Oga,
    /// Objective ground clauses of at most the given width.
    Og(usize),
    /// Og plus quantified templates over unary predicates.
    O(usize),
    /// O plus the modal literals `L α` and `¬L α`.
    Full(usize),
}

impl ProbeLevel {
    pub fn label(self) -> &'static str {
        match self {
            ProbeLevel::Oga => "oga",
            ProbeLevel::Og(_) => "og",
            ProbeLevel::O(_) => "o",
            ProbeLevel::Full(_) => "full",
        }
    }

    pub fn parse(s: &str, width: usize) -> Option<ProbeLevel> {
        match s.to_ascii_lowercase().as_str() {
            "oga" => Some(ProbeLevel::Oga),
            "og" => Some(ProbeLevel::Og(width)),
            "o" => Some(ProbeLevel::O(width)),
            "full" => Some(ProbeLevel::Full(width)),
            _ => None,
        }
    }

    fn width(self) -> usize {
        match self {
            ProbeLevel::Oga => 1,
            ProbeLevel::Og(w) | ProbeLevel::O(w) | ProbeLevel::Full(w) => w,
        }
    }

    /// Whether an extra probe belongs to this level.
    fn admits(self, f: &Formula) -> bool {
        match self {
            ProbeLevel::Oga => matches!(f, Formula::Atom(a) if a.is_ground()),
            ProbeLevel::Og(_) => f.is_objective() && is_quantifier_free(f),
            ProbeLevel::O(_) => f.is_objective(),
            ProbeLevel::Full(_) => true,
        }
    }
}

fn is_quantifier_free(f: &Formula) -> bool {
    let mut ok = f.is_closed();
    f.walk(&mut |g| {
        if matches!(g, Formula::Exists(..) | Formula::Forall(..)) {
            ok = false;
        }
    });
    ok
}

/// Settings shared by all checks.
#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub mode: Mode,
    /// `None` selects `Bounded(|names| + 2)` for each signature.
    pub space: Option<InterpretationSpace>,
    pub depth: usize,
    pub caps: Caps,
    pub width: usize,
    pub options: EmbedOptions,
    /// Appended to every probe family (filtered by level and signature).
    pub extra_probes: Vec<Formula>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            mode: Mode::Any,
            space: None,
            depth: 0,
            caps: Caps::default(),
            width: 2,
            options: EmbedOptions::default(),
            extra_probes: witness_probes(),
        }
    }
}

impl CheckConfig {
    pub fn space_for(&self, sig: &Signature) -> InterpretationSpace {
        self.space
            .unwrap_or_else(|| InterpretationSpace::default_bounded(sig, self.depth))
    }

    pub fn with_mode(&self, mode: Mode) -> CheckConfig {
        CheckConfig { mode, ..self.clone() }
    }

    pub fn with_space(&self, space: InterpretationSpace) -> CheckConfig {
        CheckConfig {
            space: Some(space),
            ..self.clone()
        }
    }
}

/// The probe family of a level over Σ, followed by the admissible extra
/// probes; duplicates are removed.
pub fn probe_family(sig: &Signature, level: ProbeLevel, depth: usize, extra: &[Formula], caps: &Caps) -> Result<Vec<Formula>> {
    let atoms = sig.ground_atoms(depth, caps.atoms)?;
    let literal = |a: &Atom, negative: bool| -> Formula {
        match (a, negative) {
            (_, false) => Formula::Atom(a.clone()),
            (Atom::Eq(l, r), true) => Formula::neq(l.clone(), r.clone()),
            (p, true) => Formula::not(Formula::Atom(p.clone())),
        }
    };
    let mut out: Vec<Formula> = Vec::new();
    if level == ProbeLevel::Oga {
        out.extend(atoms.iter().cloned().map(Formula::Atom));
    } else {
        let width = level.width().max(1).min(atoms.len().max(1));
        let mut count: u128 = 0;
        for k in 1..=width {
            count += binomial(atoms.len(), k) << k;
        }
        if count > caps.kernels as u128 {
            return Err(Error::cap("probes", count, caps.kernels as u128));
        }
        for k in 1..=width.min(atoms.len()) {
            let combos = combinations(atoms.len(), k);
            for mask in 0..1usize << k {
                for combo in &combos {
                    let lits = combo
                        .iter()
                        .enumerate()
                        .map(|(pos, &i)| literal(&atoms[i], mask >> (k - 1 - pos) & 1 == 1));
                    out.push(Formula::disj(lits).expect("nonempty clause"));
                }
            }
        }
    }
    if matches!(level, ProbeLevel::O(_) | ProbeLevel::Full(_)) {
        let unary: Vec<&String> = sig.predicates.iter().filter(|(_, &a)| a == 1).map(|(p, _)| p).collect();
        let px = |p: &str| Formula::Atom(Atom::pred(p, vec![crate::syntax::Term::var("X")]));
        for p in &unary {
            out.push(Formula::forall("X", px(p)));
            out.push(Formula::exists("X", px(p)));
        }
        for p in &unary {
            for q in &unary {
                if p != q {
                    out.push(Formula::forall("X", Formula::implies(px(p), px(q))));
                }
            }
        }
    }
    if let ProbeLevel::Full(_) = level {
        for a in &atoms {
            let la = Formula::modal(Formula::Atom(a.clone()));
            out.push(la.clone());
            out.push(Formula::not(la));
        }
    }
    for f in extra {
        if level.admits(f) && f.is_closed() && sig.contains(&f.signature()?) {
            out.push(f.clone());
        }
    }
    let mut seen = HashSet::new();
    out.retain(|f| seen.insert(f.clone()));
    Ok(out)
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// All k-subsets of 0..n in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Evidence for a failed check.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Witness {
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub program: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interpretation: Option<Interpretation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assignment: Option<BTreeMap<String, usize>>,
    /// The probe itself, for programmatic inspection.
    #[serde(skip)]
    pub probe_formula: Option<Formula>,
}

impl Witness {
    fn with_probe(reason: String, probe: &Formula) -> Witness {
        Witness {
            reason,
            probe: Some(render_formula(probe)),
            probe_formula: Some(probe.clone()),
            ..Witness::default()
        }
    }
}

/// Outcome of a correspondence or inclusion check.
#[derive(Clone, Debug, Serialize)]
pub struct CorrespondenceVerdict {
    pub holds: bool,
    pub level: String,
    /// `"exact"` or `"bounded(D)"`.
    pub exactness: String,
    /// The full language is approximated by a finite probe family.
    pub probe_limited: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// Expansions of one theory together with their probe memberships.
pub struct Analysis {
    pub expansions: Vec<Expansion>,
    /// `vectors[i][j]`: expansion i contains probe j.
    pub vectors: Vec<Vec<bool>>,
}

impl Analysis {
    pub fn new(theory: &Theory, probes: &[Formula], mode: Mode, space: InterpretationSpace, cfg: &CheckConfig) -> Result<Analysis> {
        let expansions = stable_expansions(theory, mode, space, cfg.depth, &cfg.caps)?;
        let vectors = expansions
            .iter()
            .map(|e| probes.iter().map(|p| Ok(e.contains(p)?.member)).collect::<Result<Vec<bool>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Analysis { expansions, vectors })
    }

    /// Membership of each probe in every expansion (all true if there is none).
    pub fn consequences(&self, nprobes: usize) -> Vec<bool> {
        (0..nprobes).map(|j| self.vectors.iter().all(|v| v[j])).collect()
    }
}

fn kernel_strings(e: &Expansion) -> Vec<String> {
    if e.consistent {
        e.kernel.sorted_strings()
    } else {
        vec!["<inconsistent>".into()]
    }
}

/// Perfect matching on the bipartite graph linking probe-indistinguishable
/// expansions; `None` when it exists, else a witness.
fn match_expansions(a: &Analysis, b: &Analysis, probes: &[Formula]) -> Option<Witness> {
    fn augment(i: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &j in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                if owner[j].is_none() || augment(owner[j].expect("owner"), adj, seen, owner) {
                    owner[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    let unmatched = |x: &Analysis, y: &Analysis, side: &str| -> Option<Witness> {
        let adj: Vec<Vec<usize>> = x
            .vectors
            .iter()
            .map(|v| (0..y.vectors.len()).filter(|&j| y.vectors[j] == *v).collect())
            .collect();
        let mut owner = vec![None; y.vectors.len()];
        for i in 0..x.vectors.len() {
            let mut seen = vec![false; y.vectors.len()];
            if !augment(i, &adj, &mut seen, &mut owner) {
                let mut w = match y
                    .vectors
                    .iter()
                    .min_by_key(|v| v.iter().zip(&x.vectors[i]).filter(|(p, q)| p != q).count())
                {
                    Some(closest) => {
                        let j = (0..probes.len()).find(|&j| closest[j] != x.vectors[i][j]).unwrap_or(0);
                        let reason = if closest[j] == x.vectors[i][j] {
                            format!("expansion of the {side} theory has no distinct partner")
                        } else {
                            format!(
                                "expansion of the {side} theory {} the probe, its closest counterpart {}",
                                if x.vectors[i][j] { "contains" } else { "lacks" },
                                if closest[j] { "contains it" } else { "lacks it" }
                            )
                        };
                        Witness::with_probe(reason, &probes[j])
                    }
                    None => Witness {
                        reason: format!("the {side} theory has an expansion, the other has none"),
                        ..Witness::default()
                    },
                };
                w.kernel = Some(kernel_strings(&x.expansions[i]));
                return Some(w);
            }
        }
        None
    };
    if a.vectors.len() != b.vectors.len() {
        let (x, y, side) = if a.vectors.len() > b.vectors.len() { (a, b, "first") } else { (b, a, "second") };
        if let Some(w) = unmatched(x, y, side) {
            return Some(w);
        }
        return Some(Witness {
            reason: format!("the theories have {} and {} expansions", a.vectors.len(), b.vectors.len()),
            ..Witness::default()
        });
    }
    unmatched(a, b, "first").or_else(|| unmatched(b, a, "second"))
}

fn joint(phi1: &Theory, phi2: &Theory) -> Result<(Theory, Theory, Signature)> {
    let sig = phi1.signature.union(&phi2.signature)?;
    Ok((
        Theory::with_signature(phi1.formulas.clone(), sig.clone())?,
        Theory::with_signature(phi2.formulas.clone(), sig.clone())?,
        sig,
    ))
}

/// Φ₁ ≡_γ Φ₂: the stable expansions agree on the probes of the level, up
/// to a one-to-one correspondence. Both theories are read over their joint
/// signature.
pub fn equiv_at(phi1: &Theory, phi2: &Theory, level: ProbeLevel, cfg: &CheckConfig) -> Result<CorrespondenceVerdict> {
    let (t1, t2, sig) = joint(phi1, phi2)?;
    let space = cfg.space_for(&sig);
    let probes = probe_family(&sig, level, cfg.depth, &cfg.extra_probes, &cfg.caps)?;
    let a = Analysis::new(&t1, &probes, cfg.mode, space, cfg)?;
    let b = Analysis::new(&t2, &probes, cfg.mode, space, cfg)?;
    let witness = match_expansions(&a, &b, &probes);
    Ok(CorrespondenceVerdict {
        holds: witness.is_none(),
        level: level.label().into(),
        exactness: space.exactness_label(),
        probe_limited: matches!(level, ProbeLevel::Full(_)),
        witness,
    })
}

fn inclusion_witness(c1: &[bool], c2: &[bool], probes: &[Formula]) -> Option<Witness> {
    (0..probes.len())
        .find(|&j| c1[j] && !c2[j])
        .map(|j| Witness::with_probe("consequence of the first theory but not of the second".into(), &probes[j]))
}

/// Cn(Φ₁) ∩ probes ⊆ Cn(Φ₂) ∩ probes.
pub fn cn_subset_at(phi1: &Theory, phi2: &Theory, level: ProbeLevel, cfg: &CheckConfig) -> Result<CorrespondenceVerdict> {
    let (t1, t2, sig) = joint(phi1, phi2)?;
    let space = cfg.space_for(&sig);
    let probes = probe_family(&sig, level, cfg.depth, &cfg.extra_probes, &cfg.caps)?;
    let c1 = Analysis::new(&t1, &probes, cfg.mode, space, cfg)?.consequences(probes.len());
    let c2 = Analysis::new(&t2, &probes, cfg.mode, space, cfg)?.consequences(probes.len());
    let witness = inclusion_witness(&c1, &c2, &probes);
    Ok(CorrespondenceVerdict {
        holds: witness.is_none(),
        level: level.label().into(),
        exactness: space.exactness_label(),
        probe_limited: matches!(level, ProbeLevel::Full(_)),
        witness,
    })
}

// ---------------------------------------------------------------------------
// Inclusion graph between the consequences of the embeddings.

use EmbeddingKind::{EBv, EHv, HPv, EB, EH, HP};

/// Part (a) compares all objective consequences, part (b) the ground ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GraphPart {
    A,
    B,
}

impl GraphPart {
    pub fn label(self) -> &'static str {
        match self {
            GraphPart::A => "a",
            GraphPart::B => "b",
        }
    }
}

/// Arcs `(from, to)` meaning Cn(from) ⊆ Cn(to), for normal programs (all
/// six embeddings) or arbitrary programs (disjunctive embeddings only);
/// `safe` adds the arcs valid for safe programs.
pub fn inclusion_arcs(part: GraphPart, normal: bool, safe: bool) -> Vec<(EmbeddingKind, EmbeddingKind)> {
    let mut arcs = Vec::new();
    match (part, normal) {
        (GraphPart::A, true) => {
            arcs.extend([(EBv, HPv), (EB, EH), (EB, EHv), (EB, EBv), (EB, HP), (HP, HPv), (EH, EHv), (EHv, EH)]);
            if safe {
                arcs.extend([(EH, EBv), (EHv, EBv), (EH, EB), (EHv, EB)]);
            }
        }
        (GraphPart::A, false) => {
            arcs.push((EBv, HPv));
            if safe {
                arcs.push((EHv, EBv));
            }
        }
        (GraphPart::B, true) => {
            let low = [EHv, EH, EB];
            let high = [EBv, HPv];
            for x in low {
                for y in low.iter().chain(&high).chain(&[HP]) {
                    if x != *y {
                        arcs.push((x, *y));
                    }
                }
            }
            arcs.extend([(EBv, HPv), (HPv, EBv), (HP, EBv), (HP, HPv)]);
        }
        (GraphPart::B, false) => {
            arcs.extend([(EHv, EBv), (EHv, HPv), (EBv, HPv), (HPv, EBv)]);
        }
    }
    arcs
}

pub fn reachable(arcs: &[(EmbeddingKind, EmbeddingKind)], from: EmbeddingKind, to: EmbeddingKind) -> bool {
    let mut seen = BTreeSet::from([from]);
    let mut stack = vec![from];
    while let Some(x) = stack.pop() {
        if x == to {
            return true;
        }
        for &(a, b) in arcs {
            if a == x && seen.insert(b) {
                stack.push(b);
            }
        }
    }
    false
}

fn applicable_kinds(normal: bool) -> Vec<EmbeddingKind> {
    if normal {
        EmbeddingKind::ALL.to_vec()
    } else {
        vec![HPv, EBv, EHv]
    }
}

/// One required inclusion, checked on one program.
#[derive(Clone, Debug, Serialize)]
pub struct InclusionCheck {
    pub part: &'static str,
    pub program: String,
    pub from: &'static str,
    pub to: &'static str,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// A pair that the graph does not connect, with the program showing that
/// the inclusion indeed fails (if the corpus contains one).
#[derive(Clone, Debug, Serialize)]
pub struct NonEdgeCheck {
    pub part: &'static str,
    /// `normal`, `safe normal`, `disjunctive`, or `safe disjunctive`.
    pub scope: &'static str,
    pub from: &'static str,
    pub to: &'static str,
    pub witnessed_by: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Figure1Report {
    pub holds: bool,
    pub exactness: Vec<String>,
    pub inclusions: Vec<InclusionCheck>,
    pub non_edges: Vec<NonEdgeCheck>,
}

impl Figure1Report {
    pub fn failed_inclusions(&self) -> impl Iterator<Item = &InclusionCheck> {
        self.inclusions.iter().filter(|c| !c.holds)
    }

    pub fn unwitnessed_non_edges(&self) -> impl Iterator<Item = &NonEdgeCheck> {
        self.non_edges.iter().filter(|c| c.witnessed_by.is_none())
    }
}

struct ProgramConsequences {
    name: String,
    normal: bool,
    safe: bool,
    probes: Vec<Formula>,
    ground: Vec<bool>,
    cn: BTreeMap<EmbeddingKind, Vec<bool>>,
}

fn program_consequences(name: &str, p: &Program, cfg: &CheckConfig) -> Result<(ProgramConsequences, InterpretationSpace)> {
    let space = cfg.space_for(&p.signature);
    let probes = probe_family(&p.signature, ProbeLevel::O(cfg.width), cfg.depth, &cfg.extra_probes, &cfg.caps)?;
    let ground = probes.iter().map(is_quantifier_free).collect();
    let mut cn = BTreeMap::new();
    for kind in applicable_kinds(p.is_normal()) {
        let theory = embed_program_with(p, EmbeddingVariant::new(kind), cfg.depth, cfg.options, &cfg.caps)?;
        let a = Analysis::new(&theory, &probes, cfg.mode, space, cfg)?;
        cn.insert(kind, a.consequences(probes.len()));
    }
    Ok((
        ProgramConsequences {
            name: name.to_string(),
            normal: p.is_normal(),
            safe: p.is_safe(),
            probes,
            ground,
            cn,
        },
        space,
    ))
}

impl ProgramConsequences {
    /// Witness for Cn(from) ⊄ Cn(to) at the part's level.
    fn non_inclusion(&self, part: GraphPart, from: EmbeddingKind, to: EmbeddingKind) -> Option<Witness> {
        let (c1, c2) = (self.cn.get(&from)?, self.cn.get(&to)?);
        (0..self.probes.len())
            .find(|&j| (part == GraphPart::A || self.ground[j]) && c1[j] && !c2[j])
            .map(|j| {
                let mut w = Witness::with_probe(
                    format!("consequence of {} but not of {}", from.label(), to.label()),
                    &self.probes[j],
                );
                w.program = Some(self.name.clone());
                w
            })
    }
}

/// Checks every inclusion implied by the graph on every program, and that
/// every pair not connected by the graph is refuted by some program.
pub fn figure1_check(corpus: &[(String, Program)], cfg: &CheckConfig) -> Result<Figure1Report> {
    let mut infos = Vec::new();
    let mut exactness = BTreeSet::new();
    for (name, p) in corpus {
        let (info, space) = program_consequences(name, p, cfg)?;
        exactness.insert(space.exactness_label());
        infos.push(info);
    }
    let mut inclusions = Vec::new();
    for part in [GraphPart::A, GraphPart::B] {
        for info in &infos {
            let arcs = inclusion_arcs(part, info.normal, info.safe && part == GraphPart::A);
            for from in applicable_kinds(info.normal) {
                for to in applicable_kinds(info.normal) {
                    if from != to && reachable(&arcs, from, to) {
                        let witness = info.non_inclusion(part, from, to);
                        inclusions.push(InclusionCheck {
                            part: part.label(),
                            program: info.name.clone(),
                            from: from.label(),
                            to: to.label(),
                            holds: witness.is_none(),
                            witness,
                        });
                    }
                }
            }
        }
    }
    let mut non_edges = Vec::new();
    let scopes: [(GraphPart, &'static str, bool, bool); 6] = [
        (GraphPart::A, "normal", true, false),
        (GraphPart::A, "safe normal", true, true),
        (GraphPart::A, "disjunctive", false, false),
        (GraphPart::A, "safe disjunctive", false, true),
        (GraphPart::B, "normal", true, false),
        (GraphPart::B, "disjunctive", false, false),
    ];
    for (part, scope, normal, safe) in scopes {
        let arcs = inclusion_arcs(part, normal, safe);
        for from in applicable_kinds(normal) {
            for to in applicable_kinds(normal) {
                if from == to || reachable(&arcs, from, to) {
                    continue;
                }
                let found = infos
                    .iter()
                    .filter(|i| (!normal || i.normal) && (!safe || i.safe))
                    .find_map(|i| i.non_inclusion(part, from, to).map(|w| (i.name.clone(), w)));
                non_edges.push(NonEdgeCheck {
                    part: part.label(),
                    scope,
                    from: from.label(),
                    to: to.label(),
                    witnessed_by: found.as_ref().map(|(n, _)| n.clone()),
                    witness: found.map(|(_, w)| w),
                });
            }
        }
    }
    let holds = inclusions.iter().all(|c| c.holds) && non_edges.iter().all(|c| c.witnessed_by.is_some());
    Ok(Figure1Report {
        holds,
        exactness: exactness.into_iter().collect(),
        inclusions,
        non_edges,
    })
}

// ---------------------------------------------------------------------------
// Correspondence table for combinations ι(Φ, P).

/// Strength of a correspondence: all formulas (approximated by the full
/// probe family), objective ground formulas, objective ground atoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Strength {
    Oga,
    Og,
    All,
}

impl Strength {
    pub fn label(self) -> &'static str {
        match self {
            Strength::Oga => "oga",
            Strength::Og => "og",
            Strength::All => "full",
        }
    }

    pub fn probe_level(self, width: usize) -> ProbeLevel {
        match self {
            Strength::Oga => ProbeLevel::Oga,
            Strength::Og => ProbeLevel::Og(width),
            Strength::All => ProbeLevel::Full(width),
        }
    }
}

/// Program columns of the table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProgramColumn {
    Any,
    Safe,
    Ground,
}

/// A statement `ι_a ≡_level ι_b` of one cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    pub row: TheoryClass,
    pub column: ProgramColumn,
    pub a: EmbeddingKind,
    pub b: EmbeddingKind,
    pub strength: Strength,
    /// Applies to positive programs only.
    pub positive: bool,
}

/// The entries of the correspondence table, followed by the extra
/// correspondences for positive programs; every other correspondence
/// follows by weakening, reflexivity, symmetry and transitivity.
pub const TABLE1: [TableEntry; 14] = [
    TableEntry { row: TheoryClass::FoL, column: ProgramColumn::Any, a: EH, b: EHv, strength: Strength::All, positive: false },
    TableEntry { row: TheoryClass::FoL, column: ProgramColumn::Ground, a: EB, b: EH, strength: Strength::All, positive: false },
    TableEntry { row: TheoryClass::FoL, column: ProgramColumn::Ground, a: HPv, b: EBv, strength: Strength::All, positive: false },
    TableEntry { row: TheoryClass::GHorn, column: ProgramColumn::Ground, a: HP, b: EH, strength: Strength::Oga, positive: false },
    TableEntry { row: TheoryClass::GHorn, column: ProgramColumn::Ground, a: HPv, b: EHv, strength: Strength::Oga, positive: false },
    TableEntry { row: TheoryClass::Prop, column: ProgramColumn::Any, a: HPv, b: EBv, strength: Strength::Og, positive: false },
    TableEntry { row: TheoryClass::Prop, column: ProgramColumn::Any, a: EB, b: EH, strength: Strength::Og, positive: false },
    TableEntry { row: TheoryClass::Prop, column: ProgramColumn::Safe, a: EB, b: EH, strength: Strength::All, positive: false },
    TableEntry { row: TheoryClass::Empty, column: ProgramColumn::Any, a: HP, b: EB, strength: Strength::Oga, positive: false },
    TableEntry { row: TheoryClass::Empty, column: ProgramColumn::Any, a: HP, b: EH, strength: Strength::Oga, positive: false },
    TableEntry { row: TheoryClass::Empty, column: ProgramColumn::Any, a: HPv, b: EHv, strength: Strength::Oga, positive: false },
    TableEntry { row: TheoryClass::GHorn, column: ProgramColumn::Safe, a: EB, b: EH, strength: Strength::Oga, positive: true },
    TableEntry { row: TheoryClass::Horn, column: ProgramColumn::Any, a: HP, b: EB, strength: Strength::Oga, positive: true },
    TableEntry { row: TheoryClass::Horn, column: ProgramColumn::Any, a: EB, b: EH, strength: Strength::Oga, positive: true },
];

/// `LP`, `sLP`, `gLP`, with an `n` for normal programs (ground wins over safe).
pub fn program_cell(p: &Program) -> String {
    let prefix = if p.is_ground() {
        "g"
    } else if p.is_safe() {
        "s"
    } else {
        ""
    };
    format!("{prefix}{}LP", if p.is_normal() { "n" } else { "" })
}

fn column_applies(c: ProgramColumn, p: &Program) -> bool {
    match c {
        ProgramColumn::Any => true,
        ProgramColumn::Safe => p.is_safe(),
        ProgramColumn::Ground => p.is_ground(),
    }
}

/// The strongest correspondence derivable for each pair of distinct
/// applicable embeddings from the table entries that apply.
pub fn table1_closure(memberships: &BTreeSet<TheoryClass>, p: &Program) -> Vec<(EmbeddingKind, EmbeddingKind, Strength)> {
    let kinds = applicable_kinds(p.is_normal());
    let entries: Vec<&TableEntry> = TABLE1
        .iter()
        .filter(|e| memberships.contains(&e.row) && column_applies(e.column, p) && (!e.positive || p.is_positive()))
        .filter(|e| kinds.contains(&e.a) && kinds.contains(&e.b))
        .collect();
    // EH and EH∨ coincide structurally on normal programs.
    let structural: Vec<(EmbeddingKind, EmbeddingKind)> = if p.is_normal() { vec![(EH, EHv)] } else { vec![] };
    let mut out = Vec::new();
    for (i, &x) in kinds.iter().enumerate() {
        for &y in &kinds[i + 1..] {
            for s in [Strength::All, Strength::Og, Strength::Oga] {
                let mut arcs: Vec<(EmbeddingKind, EmbeddingKind)> = entries
                    .iter()
                    .filter(|e| e.strength >= s)
                    .flat_map(|e| [(e.a, e.b), (e.b, e.a)])
                    .collect();
                arcs.extend(structural.iter().flat_map(|&(a, b)| [(a, b), (b, a)]));
                if reachable(&arcs, x, y) {
                    out.push((x, y, s));
                    break;
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct DerivedCorrespondence {
    pub a: &'static str,
    pub b: &'static str,
    pub strength: &'static str,
    pub verdict: CorrespondenceVerdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table1Report {
    pub holds: bool,
    pub theory_class: &'static str,
    pub theory_memberships: Vec<&'static str>,
    pub program_class: String,
    pub checks: Vec<DerivedCorrespondence>,
}

/// Classifies (Φ, P), derives the correspondences the table predicts, and
/// checks each one on the combinations.
pub fn table1_check(phi: &Theory, p: &Program, cfg: &CheckConfig) -> Result<Table1Report> {
    let cls = classify_theory(phi)?;
    let pairs = table1_closure(&cls.memberships, p);
    let mut combos: BTreeMap<EmbeddingKind, Theory> = BTreeMap::new();
    for kind in applicable_kinds(p.is_normal()) {
        combos.insert(
            kind,
            combine_with(phi, p, EmbeddingVariant::new(kind), cfg.depth, cfg.options, false, &cfg.caps)?,
        );
    }
    let sig = combos.values().next().map(|t| t.signature.clone()).unwrap_or_default();
    let space = cfg.space_for(&sig);
    let mut analyses: BTreeMap<(EmbeddingKind, Strength), (Vec<Formula>, Analysis)> = BTreeMap::new();
    let mut checks = Vec::new();
    for (a, b, s) in pairs {
        for kind in [a, b] {
            if !analyses.contains_key(&(kind, s)) {
                let probes = probe_family(&sig, s.probe_level(cfg.width), cfg.depth, &cfg.extra_probes, &cfg.caps)?;
                let an = Analysis::new(&combos[&kind], &probes, cfg.mode, space, cfg)?;
                analyses.insert((kind, s), (probes, an));
            }
        }
        let (probes, x) = &analyses[&(a, s)];
        let (_, y) = &analyses[&(b, s)];
        let witness = match_expansions(x, y, probes);
        checks.push(DerivedCorrespondence {
            a: a.label(),
            b: b.label(),
            strength: s.label(),
            verdict: CorrespondenceVerdict {
                holds: witness.is_none(),
                level: s.probe_level(cfg.width).label().into(),
                exactness: space.exactness_label(),
                probe_limited: s == Strength::All,
                witness,
            },
        });
    }
    Ok(Table1Report {
        holds: checks.iter().all(|c| c.verdict.holds),
        theory_class: cls.class.label(),
        theory_memberships: cls.memberships.iter().map(|c| c.label()).collect(),
        program_class: program_cell(p),
        checks,
    })
}

// ---------------------------------------------------------------------------
// Grounding invariance and closed domains.

/// gr(P) instantiated over the names of Σ_Φ ∪ Σ_P, keeping Σ_P as the
/// program's signature (so the axiom schemas stay relative to Σ_P).
pub fn joint_grounding(phi: &Theory, p: &Program, depth: usize, caps: &Caps) -> Result<Program> {
    let widened = Program {
        rules: p.rules.clone(),
        signature: p.signature.union(&phi.signature)?,
    };
    let g = grounding(&widened, depth, caps)?;
    Ok(Program {
        rules: g.rules,
        signature: p.signature.clone(),
    })
}

/// ι(Φ, P) ≡_oga ι(Φ, gr(P)), with P grounded over the joint names.
pub fn grounding_invariance(v: EmbeddingVariant, phi: &Theory, p: &Program, cfg: &CheckConfig) -> Result<CorrespondenceVerdict> {
    let gp = joint_grounding(phi, p, cfg.depth, &cfg.caps)?;
    let t1 = combine_with(phi, p, v, cfg.depth, cfg.options, false, &cfg.caps)?;
    let t2 = combine_with(phi, &gp, v, cfg.depth, cfg.options, false, &cfg.caps)?;
    equiv_at(&t1, &t2, ProbeLevel::Oga, cfg)
}

/// Whether rule bodies of ι(Φ, P) can only be satisfied by assignments
/// mapping every rule variable to a named individual, in every model of
/// every stable expansion.
pub fn closed_domain_check(v: EmbeddingVariant, phi: &Theory, p: &Program, cfg: &CheckConfig) -> Result<CorrespondenceVerdict> {
    let theory = combine_with(phi, p, v, cfg.depth, cfg.options, false, &cfg.caps)?;
    let space = cfg.space_for(&theory.signature);
    let exps = stable_expansions(&theory, cfg.mode, space, cfg.depth, &cfg.caps)?;
    let verdict = |witness: Option<Witness>| CorrespondenceVerdict {
        holds: witness.is_none(),
        level: "closed-domain".into(),
        exactness: space.exactness_label(),
        probe_limited: false,
        witness,
    };
    for e in &exps {
        if !e.consistent {
            continue;
        }
        for (frame, models) in e.engine().frames.iter().zip(e.model_tables()) {
            if models.is_empty() {
                continue;
            }
            let compiler = &frame.compiler;
            let f = &compiler.frame;
            if (0..f.domain).all(|el| f.is_named(el)) {
                continue;
            }
            for r in &p.rules {
                let vars: Vec<String> = r.vars().into_iter().collect();
                let body = rule_body(r, v.kind);
                let elems: Vec<usize> = (0..f.domain).collect();
                for values in crate::syntax::tuples(&elems, vars.len()) {
                    if values.iter().all(|&el| f.is_named(el)) {
                        continue;
                    }
                    let mut env: Vec<(String, usize)> = vars.iter().cloned().zip(values.iter().copied()).collect();
                    let mut sat = match &body {
                        Some(b) => compiler.compile(b, &mut env).eval(frame.nbits(), e)?.into_owned(),
                        None => crate::foael::table::Table::constant(frame.nbits(), true),
                    };
                    sat.and_assign(models);
                    if let Some(assignment) = sat.first() {
                        let w = Interpretation::from_frame(f, &compiler.layout, assignment, cfg.depth);
                        return Ok(verdict(Some(Witness {
                            reason: "a rule body holds under an assignment with an unnamed individual".into(),
                            kernel: Some(kernel_strings(e)),
                            rule: Some(render_rule(r)),
                            interpretation: Some(w),
                            assignment: Some(vars.iter().cloned().zip(values.iter().copied()).collect()),
                            ..Witness::default()
                        })));
                    }
                }
            }
        }
    }
    Ok(verdict(None))
}

/// Convenience: the combinations ι_kind(Φ, P) for the given kinds.
pub fn combinations_of(phi: &Theory, p: &Program, kinds: &[EmbeddingKind], cfg: &CheckConfig) -> Result<Vec<(EmbeddingKind, Theory)>> {
    kinds
        .iter()
        .map(|&k| Ok((k, combine_with(phi, p, EmbeddingVariant::new(k), cfg.depth, cfg.options, false, &cfg.caps)?)))
        .collect()
}
