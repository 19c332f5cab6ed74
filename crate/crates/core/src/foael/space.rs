//! Interpretation spaces. A *frame* fixes the domain size and the
//! denotations of constants and function symbols; the relations are left
//! open and enumerated separately (see [`super::table`]).

use std::collections::BTreeMap;

use crate::error::{Caps, Error, Result};
use crate::syntax::{Signature, Term};

/// Any-name (`E`) or all-name (`A`) semantics of the modal operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Any,
    All,
}

impl Mode {
    pub fn label(self) -> &'static str {
        match self {
            Mode::Any => "any",
            Mode::All => "all",
        }
    }
}

/// The interpretations quantified over by entailment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InterpretationSpace {
    /// Domain = the names, each name denoting itself.
    StandardNames,
    /// Every interpretation with at most `D` elements.
    Bounded(usize),
}

impl InterpretationSpace {
    /// `Bounded(|names| + 2)`.
    pub fn default_bounded(sig: &Signature, depth: usize) -> InterpretationSpace {
        InterpretationSpace::Bounded(sig.names(depth).len() + 2)
    }

    /// Entailment verdicts are exact only under standard names.
    pub fn is_exact(self) -> bool {
        matches!(self, InterpretationSpace::StandardNames)
    }

    /// `"exact"` or `"bounded(D)"`.
    pub fn exactness_label(self) -> String {
        match self {
            InterpretationSpace::StandardNames => "exact".into(),
            InterpretationSpace::Bounded(d) => format!("bounded({d})"),
        }
    }

    pub fn label(self) -> String {
        match self {
            InterpretationSpace::StandardNames => "standard-names".into(),
            InterpretationSpace::Bounded(d) => format!("bounded:{d}"),
        }
    }
}

/// Domain size and denotations of all constants and function symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub domain: usize,
    pub consts: BTreeMap<String, usize>,
    /// Function tables, indexed by the mixed-radix encoding of the arguments.
    pub funcs: BTreeMap<String, (usize, Vec<usize>)>,
    /// Names (of the configured depth) denoting each element, in term order.
    pub names: Vec<Vec<Term>>,
}

impl Frame {
    fn new(domain: usize, consts: BTreeMap<String, usize>, funcs: BTreeMap<String, (usize, Vec<usize>)>, all_names: &[Term]) -> Frame {
        let mut f = Frame {
            domain,
            consts,
            funcs,
            names: vec![Vec::new(); domain],
        };
        for t in all_names {
            if let Some(e) = f.eval_ground(t) {
                f.names[e].push(t.clone());
            }
        }
        f
    }

    /// Denotation of a ground term.
    pub fn eval_ground(&self, t: &Term) -> Option<usize> {
        match t {
            Term::Var(_) => None,
            Term::Const(c) => self.consts.get(c).copied(),
            Term::Func(f, args) => {
                let vals: Option<Vec<usize>> = args.iter().map(|a| self.eval_ground(a)).collect();
                self.apply(f, &vals?)
            }
        }
    }

    pub fn apply(&self, f: &str, args: &[usize]) -> Option<usize> {
        let (arity, table) = self.funcs.get(f)?;
        debug_assert_eq!(*arity, args.len());
        let idx = args.iter().fold(0, |acc, &a| acc * self.domain + a);
        table.get(idx).copied()
    }

    pub fn is_named(&self, e: usize) -> bool {
        !self.names[e].is_empty()
    }
}

/// Restricted-growth labelings of `n` items with labels < `d`.
fn restricted_growth(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, d: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let limit = if cur.is_empty() { 0 } else { (max + 1).min(d - 1) };
        for v in 0..=limit {
            cur.push(v);
            rec(n, d, max.max(v), cur, out);
            cur.pop();
        }
    }
    rec(n, d, 0, &mut cur, &mut out);
    out
}

/// All frames of a space. Under standard names there is one frame (a
/// single unnamed element when the signature has no names at all).
pub fn frames(sig: &Signature, depth: usize, space: InterpretationSpace, caps: &Caps) -> Result<Vec<Frame>> {
    let names = sig.names(depth);
    if !sig.functions.is_empty() && depth == 0 {
        return Err(Error::Unsupported(
            "function symbols require a term depth of at least 1".into(),
        ));
    }
    match space {
        InterpretationSpace::StandardNames => {
            if !sig.functions.is_empty() {
                return Err(Error::Unsupported(
                    "standard-names space with function symbols (names are not closed under functions)".into(),
                ));
            }
            let consts: BTreeMap<String, usize> = sig.constants.iter().cloned().zip(0..).collect();
            let domain = consts.len().max(1);
            Ok(vec![Frame::new(domain, consts, BTreeMap::new(), &names)])
        }
        InterpretationSpace::Bounded(max) => {
            if max == 0 {
                return Err(Error::Semantic("bounded space needs D ≥ 1".into()));
            }
            let consts: Vec<&String> = sig.constants.iter().collect();
            let mut out = Vec::new();
            for d in 1..=max {
                let labelings = restricted_growth(consts.len(), d);
                let func_tables = function_tables(sig, d, caps)?;
                for lab in &labelings {
                    let cmap: BTreeMap<String, usize> = consts.iter().map(|c| (*c).clone()).zip(lab.iter().copied()).collect();
                    for ft in &func_tables {
                        out.push(Frame::new(d, cmap.clone(), ft.clone(), &names));
                        if out.len() as u64 > caps.interpretations {
                            return Err(Error::cap("frames", out.len() as u128, caps.interpretations as u128));
                        }
                    }
                }
            }
            Ok(out)
        }
    }
}

/// Every combination of function tables over a domain of size `d`.
fn function_tables(sig: &Signature, d: usize, caps: &Caps) -> Result<Vec<BTreeMap<String, (usize, Vec<usize>)>>> {
    let mut out = vec![BTreeMap::new()];
    for (f, &arity) in &sig.functions {
        let cells = d.pow(arity as u32);
        let count = (d as u128).saturating_pow(cells as u32);
        if count * out.len() as u128 > caps.interpretations as u128 {
            return Err(Error::cap("function tables", count * out.len() as u128, caps.interpretations as u128));
        }
        let mut next = Vec::new();
        for base in &out {
            for code in 0..count as u64 {
                let mut table = Vec::with_capacity(cells);
                let mut c = code;
                for _ in 0..cells {
                    table.push((c % d as u64) as usize);
                    c /= d as u64;
                }
                let mut m: BTreeMap<String, (usize, Vec<usize>)> = base.clone();
                m.insert(f.clone(), (arity, table));
                next.push(m);
            }
        }
        out = next;
    }
    Ok(out)
}

/// Bit layout of the relations of one frame: one bit per (predicate, tuple).
#[derive(Clone, Debug)]
pub struct Layout {
    pub domain: usize,
    pub offsets: BTreeMap<String, (usize, usize)>,
    pub nbits: usize,
}

impl Layout {
    pub fn new(sig: &Signature, domain: usize) -> Layout {
        let mut offsets = BTreeMap::new();
        let mut n = 0;
        for (p, &arity) in &sig.predicates {
            offsets.insert(p.clone(), (n, arity));
            n += domain.pow(arity as u32);
        }
        Layout {
            domain,
            offsets,
            nbits: n,
        }
    }

    pub fn bit(&self, pred: &str, args: &[usize]) -> Option<usize> {
        let (off, arity) = self.offsets.get(pred)?;
        if *arity != args.len() {
            return None;
        }
        Some(off + args.iter().fold(0, |acc, &a| acc * self.domain + a))
    }

    /// Inverse of [`Layout::bit`].
    pub fn decode(&self, bit: usize) -> (String, Vec<usize>) {
        for (p, &(off, arity)) in &self.offsets {
            let size = self.domain.pow(arity as u32);
            if bit >= off && bit < off + size {
                let mut idx = bit - off;
                let mut args = vec![0; arity];
                for slot in args.iter_mut().rev() {
                    *slot = idx % self.domain;
                    idx /= self.domain;
                }
                return (p.clone(), args);
            }
        }
        panic!("bit {bit} outside layout");
    }
}
