//! Truth tables over all relation assignments of a frame.
//!
//! With the frame fixed, an interpretation is a bit vector of length
//! `nbits` (one bit per ground relation fact). A formula is compiled, per
//! frame, into a [`Node`] whose objective parts are already folded into
//! [`Table`]s: bitsets over the `2^nbits` assignments. Only modal leaves
//! remain symbolic; they depend on the belief oracle and evaluate to a
//! constant table.

use std::borrow::Cow;

use crate::error::{Error, Result};
use crate::syntax::{Atom, Formula, NameSubstitution, Term};

use super::space::{Frame, Layout, Mode};
use super::ModalOracle;

/// Largest supported number of relation bits in one frame.
pub const MAX_BITS: usize = 30;

/// Bitset over `2^nbits` relation assignments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    words: Vec<u64>,
    nbits: usize,
}

/// Within-word patterns of relation bits 0..5.
const PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

impl Table {
    fn word_count(nbits: usize) -> usize {
        if nbits <= 6 {
            1
        } else {
            1 << (nbits - 6)
        }
    }

    fn mask(nbits: usize) -> u64 {
        if nbits >= 6 {
            u64::MAX
        } else {
            (1u64 << (1 << nbits)) - 1
        }
    }

    pub fn constant(nbits: usize, value: bool) -> Table {
        let w = if value { Table::mask(nbits) } else { 0 };
        Table {
            words: vec![w; Table::word_count(nbits)],
            nbits,
        }
    }

    /// The assignments in which relation bit `bit` is true.
    pub fn var(nbits: usize, bit: usize) -> Table {
        let n = Table::word_count(nbits);
        let mask = Table::mask(nbits);
        let words = if bit < 6 {
            vec![PATTERNS[bit] & mask; n]
        } else {
            (0..n).map(|w| if (w >> (bit - 6)) & 1 == 1 { u64::MAX } else { 0 }).collect()
        };
        Table { words, nbits }
    }

    pub fn nbits(&self) -> usize {
        self.nbits
    }

    pub fn and_assign(&mut self, other: &Table) {
        self.words.iter_mut().zip(&other.words).for_each(|(a, b)| *a &= b);
    }

    pub fn or_assign(&mut self, other: &Table) {
        self.words.iter_mut().zip(&other.words).for_each(|(a, b)| *a |= b);
    }

    pub fn negate(&mut self) {
        let mask = Table::mask(self.nbits);
        self.words.iter_mut().for_each(|a| *a = !*a & mask);
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        let mask = Table::mask(self.nbits);
        self.words.iter().all(|&w| w == mask)
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Whether every assignment in `self` is also in `other`.
    pub fn is_subset(&self, other: &Table) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Whether relation bit `bit` is true in every assignment of `self`.
    pub fn all_have_bit(&self, bit: usize) -> bool {
        if bit < 6 {
            let p = !PATTERNS[bit];
            self.words.iter().all(|w| w & p == 0)
        } else {
            self.words
                .iter()
                .enumerate()
                .all(|(i, &w)| (i >> (bit - 6)) & 1 == 1 || w == 0)
        }
    }

    /// Whether relation bit `bit` is false in every assignment of `self`.
    pub fn none_have_bit(&self, bit: usize) -> bool {
        if bit < 6 {
            let p = PATTERNS[bit];
            self.words.iter().all(|w| w & p == 0)
        } else {
            self.words
                .iter()
                .enumerate()
                .all(|(i, &w)| (i >> (bit - 6)) & 1 == 0 || w == 0)
        }
    }

    /// The smallest assignment (as a bit vector) in the table.
    pub fn first(&self) -> Option<u64> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| (i as u64) * 64 + w.trailing_zeros() as u64)
    }

    /// All assignments in the table, ascending.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as u64;
                    w &= w - 1;
                    Some(i as u64 * 64 + t)
                }
            })
        })
    }
}

/// A modal leaf `L ψ` under a fixed variable assignment: the candidate
/// closed instances ψβ for the associated name substitutions β.
#[derive(Clone, Debug)]
pub enum Leaf {
    /// No associated substitution closes ψ.
    False,
    /// True iff some instance is believed.
    Any(Vec<Formula>),
    /// True iff every instance is believed.
    All(Vec<Formula>),
}

impl Leaf {
    pub fn eval(&self, oracle: &dyn ModalOracle) -> Result<bool> {
        match self {
            Leaf::False => Ok(false),
            Leaf::Any(alts) => {
                for a in alts {
                    if oracle.believes(a)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Leaf::All(alts) => {
                for a in alts {
                    if !oracle.believes(a)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

/// A formula compiled against a frame.
#[derive(Clone, Debug)]
pub enum Node {
    Fixed(Table),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Modal(Leaf),
}

impl Node {
    /// Evaluates the node with the given belief oracle; `nbits` is the
    /// table width of the frame the node was compiled for.
    pub fn eval(&self, nbits: usize, oracle: &dyn ModalOracle) -> Result<Cow<'_, Table>> {
        Ok(match self {
            Node::Fixed(t) => Cow::Borrowed(t),
            Node::Not(n) => {
                let mut t = n.eval(nbits, oracle)?.into_owned();
                t.negate();
                Cow::Owned(t)
            }
            Node::And(children) => {
                let mut acc: Option<Table> = None;
                for c in children {
                    let t = c.eval(nbits, oracle)?;
                    match &mut acc {
                        None => acc = Some(t.into_owned()),
                        Some(a) => a.and_assign(&t),
                    }
                    if acc.as_ref().is_some_and(Table::is_empty) {
                        break;
                    }
                }
                Cow::Owned(acc.expect("non-empty conjunction"))
            }
            Node::Or(children) => {
                let mut acc: Option<Table> = None;
                for c in children {
                    let t = c.eval(nbits, oracle)?;
                    match &mut acc {
                        None => acc = Some(t.into_owned()),
                        Some(a) => a.or_assign(&t),
                    }
                    if acc.as_ref().is_some_and(Table::is_full) {
                        break;
                    }
                }
                Cow::Owned(acc.expect("non-empty disjunction"))
            }
            Node::Modal(leaf) => Cow::Owned(Table::constant(nbits, leaf.eval(oracle)?)),
        })
    }

    /// Modal leaves in the node (for inspection and tests).
    pub fn leaves(&self) -> Vec<&Leaf> {
        let mut out = Vec::new();
        fn rec<'a>(n: &'a Node, out: &mut Vec<&'a Leaf>) {
            match n {
                Node::Fixed(_) => {}
                Node::Not(c) => rec(c, out),
                Node::And(cs) | Node::Or(cs) => cs.iter().for_each(|c| rec(c, out)),
                Node::Modal(l) => out.push(l),
            }
        }
        rec(self, &mut out);
        out
    }
}

/// A frame together with its relation layout; compiles formulas.
#[derive(Clone, Debug)]
pub struct FrameCompiler {
    pub frame: Frame,
    pub layout: Layout,
    pub mode: Mode,
}

impl FrameCompiler {
    pub fn new(frame: Frame, layout: Layout, mode: Mode) -> Result<FrameCompiler> {
        if layout.nbits > MAX_BITS {
            return Err(Error::cap("relation bits per frame", layout.nbits as u128, MAX_BITS as u128));
        }
        Ok(FrameCompiler { frame, layout, mode })
    }

    pub fn nbits(&self) -> usize {
        self.layout.nbits
    }

    fn term(&self, t: &Term, env: &[(String, usize)]) -> usize {
        match t {
            Term::Var(v) => env
                .iter()
                .rev()
                .find(|(n, _)| n == v)
                .map(|(_, e)| *e)
                .unwrap_or_else(|| panic!("unbound variable {v}")),
            Term::Const(c) => self.frame.consts[c],
            Term::Func(f, args) => {
                let vals: Vec<usize> = args.iter().map(|a| self.term(a, env)).collect();
                self.frame.apply(f, &vals).expect("function table")
            }
        }
    }

    fn fixed(&self, value: bool) -> Node {
        Node::Fixed(Table::constant(self.nbits(), value))
    }

    fn atom(&self, a: &Atom, env: &[(String, usize)]) -> Node {
        match a {
            Atom::Eq(l, r) => self.fixed(self.term(l, env) == self.term(r, env)),
            Atom::Pred(p, args) => {
                let vals: Vec<usize> = args.iter().map(|t| self.term(t, env)).collect();
                let bit = self.layout.bit(p, &vals).expect("predicate in layout");
                Node::Fixed(Table::var(self.nbits(), bit))
            }
        }
    }

    /// Compiles a formula whose free variables are bound by `env`.
    pub fn compile(&self, f: &Formula, env: &mut Vec<(String, usize)>) -> Node {
        match f {
            Formula::Atom(a) => self.atom(a, env),
            Formula::Neq(l, r) => self.fixed(self.term(l, env) != self.term(r, env)),
            Formula::Not(g) => negate(self.compile(g, env)),
            Formula::And(a, b) => conjoin(vec![self.compile(a, env), self.compile(b, env)]),
            Formula::Or(a, b) => disjoin(vec![self.compile(a, env), self.compile(b, env)]),
            Formula::Implies(a, b) => disjoin(vec![negate(self.compile(a, env)), self.compile(b, env)]),
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let mut parts = Vec::with_capacity(self.frame.domain);
                for e in 0..self.frame.domain {
                    env.push((v.clone(), e));
                    parts.push(self.compile(g, env));
                    env.pop();
                }
                if matches!(f, Formula::Exists(..)) {
                    disjoin(parts)
                } else {
                    conjoin(parts)
                }
            }
            Formula::Modal(g) => Node::Modal(self.leaf(g, env)),
        }
    }

    /// Associated name substitutions for the free variables of ψ.
    fn leaf(&self, psi: &Formula, env: &[(String, usize)]) -> Leaf {
        let vars: Vec<String> = psi.free_vars().into_iter().collect();
        let mut choices: Vec<&Vec<Term>> = Vec::with_capacity(vars.len());
        for v in &vars {
            let e = self.term(&Term::Var(v.clone()), env);
            let names = &self.frame.names[e];
            if names.is_empty() {
                return Leaf::False;
            }
            choices.push(names);
        }
        let mut alts: Vec<Formula> = Vec::new();
        let mut idx = vec![0usize; vars.len()];
        loop {
            let beta: NameSubstitution = vars
                .iter()
                .zip(&idx)
                .zip(&choices)
                .map(|((v, &i), ns)| (v.clone(), ns[i].clone()))
                .collect();
            let inst = psi.apply_substitution(&beta);
            if !alts.contains(&inst) {
                alts.push(inst);
            }
            // Odometer increment.
            let mut k = vars.len();
            loop {
                if k == 0 {
                    return match self.mode {
                        Mode::Any => Leaf::Any(alts),
                        Mode::All => Leaf::All(alts),
                    };
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    /// Compiles a sentence.
    pub fn compile_sentence(&self, f: &Formula) -> Node {
        self.compile(f, &mut Vec::new())
    }
}

fn negate(n: Node) -> Node {
    match n {
        Node::Fixed(mut t) => {
            t.negate();
            Node::Fixed(t)
        }
        Node::Not(inner) => *inner,
        other => Node::Not(Box::new(other)),
    }
}

/// Conjunction with the fixed parts folded into one table.
pub fn conjoin(parts: Vec<Node>) -> Node {
    let mut fixed: Option<Table> = None;
    let mut rest = Vec::new();
    for p in parts {
        match p {
            Node::Fixed(t) => match &mut fixed {
                None => fixed = Some(t),
                Some(f) => f.and_assign(&t),
            },
            Node::And(cs) => {
                for c in cs {
                    match c {
                        Node::Fixed(t) => match &mut fixed {
                            None => fixed = Some(t),
                            Some(f) => f.and_assign(&t),
                        },
                        other => rest.push(other),
                    }
                }
            }
            other => rest.push(other),
        }
    }
    if let Some(f) = &fixed {
        if f.is_empty() || rest.is_empty() {
            return Node::Fixed(fixed.unwrap());
        }
        if !f.is_full() {
            rest.insert(0, Node::Fixed(fixed.unwrap()));
        }
    }
    if rest.len() == 1 {
        rest.pop().unwrap()
    } else {
        Node::And(rest)
    }
}

/// Disjunction with the fixed parts folded into one table.
pub fn disjoin(parts: Vec<Node>) -> Node {
    let mut fixed: Option<Table> = None;
    let mut rest = Vec::new();
    for p in parts {
        match p {
            Node::Fixed(t) => match &mut fixed {
                None => fixed = Some(t),
                Some(f) => f.or_assign(&t),
            },
            Node::Or(cs) => {
                for c in cs {
                    match c {
                        Node::Fixed(t) => match &mut fixed {
                            None => fixed = Some(t),
                            Some(f) => f.or_assign(&t),
                        },
                        other => rest.push(other),
                    }
                }
            }
            other => rest.push(other),
        }
    }
    if let Some(f) = &fixed {
        if f.is_full() || rest.is_empty() {
            return Node::Fixed(fixed.unwrap());
        }
        if !f.is_empty() {
            rest.insert(0, Node::Fixed(fixed.unwrap()));
        }
    }
    if rest.len() == 1 {
        rest.pop().unwrap()
    } else {
        Node::Or(rest)
    }
}
