//! Embeddings of logic programs into autoepistemic logic, the unique-names
//! and positive-introspection axiom schemas, and combinations ι(Φ, P).

use crate::error::{Caps, Error, Result};
use crate::syntax::{Atom, Formula, Program, Rule, Signature, Term, Theory};

/// The six embedding transformations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum EmbeddingKind {
    HP,
    EB,
    EH,
    HPv,
    EBv,
    EHv,
}

impl EmbeddingKind {
    pub const ALL: [EmbeddingKind; 6] = [
        EmbeddingKind::HP,
        EmbeddingKind::EB,
        EmbeddingKind::EH,
        EmbeddingKind::HPv,
        EmbeddingKind::EBv,
        EmbeddingKind::EHv,
    ];

    /// Accepts only normal programs.
    pub fn is_normal_only(self) -> bool {
        matches!(self, EmbeddingKind::HP | EmbeddingKind::EB | EmbeddingKind::EH)
    }

    /// Whether the positive body atoms are believed as well as true.
    pub fn believes_body(self) -> bool {
        !matches!(self, EmbeddingKind::HP | EmbeddingKind::HPv)
    }

    /// Whether the derived head atom is believed as well as true.
    pub fn believes_head(self) -> bool {
        matches!(self, EmbeddingKind::EH | EmbeddingKind::EHv)
    }

    /// Whether the positive introspection axioms are added.
    pub fn adds_pia(self) -> bool {
        matches!(self, EmbeddingKind::HPv | EmbeddingKind::EBv)
    }

    /// CLI spelling: `hp`, `eb`, `eh`, `hp-v`, `eb-v`, `eh-v`.
    pub fn label(self) -> &'static str {
        match self {
            EmbeddingKind::HP => "hp",
            EmbeddingKind::EB => "eb",
            EmbeddingKind::EH => "eh",
            EmbeddingKind::HPv => "hp-v",
            EmbeddingKind::EBv => "eb-v",
            EmbeddingKind::EHv => "eh-v",
        }
    }

    pub fn parse(s: &str) -> Option<EmbeddingKind> {
        EmbeddingKind::ALL.into_iter().find(|k| k.label() == s.to_ascii_lowercase())
    }
}

/// An embedding with (τ) or without (τ⁻) the unique-names axioms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct EmbeddingVariant {
    pub kind: EmbeddingKind,
    pub with_una: bool,
}

impl EmbeddingVariant {
    pub fn new(kind: EmbeddingKind) -> EmbeddingVariant {
        EmbeddingVariant { kind, with_una: true }
    }

    pub fn without_una(kind: EmbeddingKind) -> EmbeddingVariant {
        EmbeddingVariant { kind, with_una: false }
    }

    /// `hp`, `hp-v`, … with a `-minus` suffix for τ⁻.
    pub fn label(self) -> String {
        if self.with_una {
            self.kind.label().to_string()
        } else {
            format!("{}-minus", self.kind.label())
        }
    }
}

/// Options for the axiom schemas.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct EmbedOptions {
    /// Use the single quantified unique-names axiom instead of one axiom per
    /// pair of names.
    pub una_quantified: bool,
    /// Let positive introspection range over ground equalities too.
    pub pia_equalities: bool,
}

/// The body of a rule as a formula: `⋀ bᵢ` (with `L bᵢ` for the believing
/// embeddings) `∧ ⋀ ¬L cⱼ`; `None` for an empty body.
pub fn rule_body(r: &Rule, kind: EmbeddingKind) -> Option<Formula> {
    let mut parts = Vec::new();
    for b in &r.pos {
        parts.push(Formula::Atom(b.clone()));
        if kind.believes_body() {
            parts.push(Formula::modal(Formula::Atom(b.clone())));
        }
    }
    for c in &r.neg {
        parts.push(Formula::not(Formula::modal(Formula::Atom(c.clone()))));
    }
    Formula::conj(parts)
}

/// The consequent `⋁ hₖ`, or `⋁ (hₖ ∧ L hₖ)` for the believing-head variants.
pub fn rule_head(r: &Rule, kind: EmbeddingKind) -> Formula {
    let disjuncts = r.head.iter().map(|h| {
        let a = Formula::Atom(h.clone());
        if kind.believes_head() {
            Formula::and(a.clone(), Formula::modal(a))
        } else {
            a
        }
    });
    Formula::disj(disjuncts).expect("rules have nonempty heads")
}

/// The embedding of one rule, universally closed.
pub fn embed_rule(r: &Rule, kind: EmbeddingKind) -> Result<Formula> {
    if kind.is_normal_only() && !r.is_normal() {
        return Err(Error::NotNormal(crate::textio::render_rule(r)));
    }
    let head = rule_head(r, kind);
    let matrix = match rule_body(r, kind) {
        Some(body) => Formula::implies(body, head),
        None => head,
    };
    Ok(matrix.universal_closure())
}

fn check_names(sig: &Signature, depth: usize, caps: &Caps) -> Result<Vec<Term>> {
    let names = sig.names(depth);
    let pairs = (names.len() as u128) * (names.len() as u128).saturating_sub(1) / 2;
    if pairs > caps.interpretations as u128 {
        return Err(Error::cap("unique-names axioms", pairs, caps.interpretations as u128));
    }
    Ok(names)
}

/// `¬L(t₁ = t₂) ⊃ t₁ ≠ t₂` for every unordered pair of distinct names.
pub fn una_axioms(sig: &Signature, depth: usize, caps: &Caps) -> Result<Theory> {
    let names = check_names(sig, depth, caps)?;
    let mut out = Vec::new();
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            let eq = Atom::equality(names[i].clone(), names[j].clone());
            let (l, r) = match &eq {
                Atom::Eq(l, r) => (l.clone(), r.clone()),
                _ => unreachable!(),
            };
            out.push(Formula::implies(
                Formula::not(Formula::modal(Formula::Atom(eq))),
                Formula::neq(l, r),
            ));
        }
    }
    Theory::with_signature(out, sig.clone())
}

/// The single axiom `∀x, y (L x=x ∧ L y=y ∧ ¬L x=y ⊃ x ≠ y)`.
pub fn una_quantified_axiom() -> Formula {
    let (x, y) = (Term::var("X"), Term::var("Y"));
    let lx = Formula::modal(Formula::Atom(Atom::Eq(x.clone(), x.clone())));
    let ly = Formula::modal(Formula::Atom(Atom::Eq(y.clone(), y.clone())));
    let not_lxy = Formula::not(Formula::modal(Formula::Atom(Atom::Eq(x.clone(), y.clone()))));
    Formula::implies(Formula::and(Formula::and(lx, ly), not_lxy), Formula::neq(x, y)).universal_closure()
}

/// `α ⊃ L α` for every ground atom α (equalities optional).
pub fn pia_axioms(sig: &Signature, depth: usize, include_equalities: bool, caps: &Caps) -> Result<Theory> {
    let count = sig.ground_atom_count(depth);
    if count > caps.interpretations as u128 {
        return Err(Error::cap("introspection axioms", count, caps.interpretations as u128));
    }
    let mut atoms = sig.ground_pred_atoms(depth);
    if include_equalities {
        atoms.extend(sig.ground_equalities(depth));
    }
    let out = atoms
        .into_iter()
        .map(|a| Formula::implies(Formula::Atom(a.clone()), Formula::modal(Formula::Atom(a))))
        .collect();
    Theory::with_signature(out, sig.clone())
}

/// τ(P) (or τ⁻(P)): rule embeddings, then the unique-names axioms, then
/// (for HP∨ and EB∨) the introspection axioms, all relative to Σ_P.
pub fn embed_program(p: &Program, v: EmbeddingVariant, depth: usize, caps: &Caps) -> Result<Theory> {
    embed_program_with(p, v, depth, EmbedOptions::default(), caps)
}

pub fn embed_program_with(p: &Program, v: EmbeddingVariant, depth: usize, opts: EmbedOptions, caps: &Caps) -> Result<Theory> {
    let mut formulas = p.rules.iter().map(|r| embed_rule(r, v.kind)).collect::<Result<Vec<_>>>()?;
    if v.with_una {
        if opts.una_quantified {
            formulas.push(una_quantified_axiom());
        } else {
            formulas.extend(una_axioms(&p.signature, depth, caps)?.formulas);
        }
    }
    if v.kind.adds_pia() {
        formulas.extend(pia_axioms(&p.signature, depth, opts.pia_equalities, caps)?.formulas);
    }
    Theory::with_signature(formulas, p.signature.clone())
}

/// ι(Φ, P) = Φ ∪ τ(P) over Σ_Φ ∪ Σ_P. Φ must be objective unless
/// `allow_modal` is set.
pub fn combine(phi: &Theory, p: &Program, v: EmbeddingVariant, depth: usize, caps: &Caps) -> Result<Theory> {
    combine_with(phi, p, v, depth, EmbedOptions::default(), false, caps)
}

pub fn combine_with(
    phi: &Theory,
    p: &Program,
    v: EmbeddingVariant,
    depth: usize,
    opts: EmbedOptions,
    allow_modal: bool,
    caps: &Caps,
) -> Result<Theory> {
    if !allow_modal && !phi.is_objective() {
        return Err(Error::ModalNotAllowed);
    }
    phi.union(&embed_program_with(p, v, depth, opts, caps)?)
}
