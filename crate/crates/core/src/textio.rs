//! Concrete syntax: a tokenizer, recursive-descent parsers for `.lp`
//! programs and `.fot` theories, and a canonical pretty-printer whose output
//! re-parses to an equal value.
//!
//! Programs: `h1 | h2 :- b1, not c1.`; theories use `L`, `-`, `&`, `|`,
//! `->` (tightest first, `->` right-associative), `forall`/`exists X, Y.`,
//! `=` and `!=`. `%` starts a line comment and `#const a.` declares a
//! constant.

use crate::error::{Error, ParseError, Result};
use crate::expand::BeliefKernel;
use crate::syntax::{Atom, Formula, Program, Rule, Term, Theory};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    /// Identifier starting with a lowercase letter.
    Lower(String),
    /// Identifier starting with an uppercase letter.
    Upper(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Bar,
    If,
    Amp,
    Minus,
    Arrow,
    Eq,
    Neq,
    Const,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Lower(s) | Tok::Upper(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Bar => "`|`".into(),
            Tok::If => "`:-`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Neq => "`!=`".into(),
            Tok::Const => "`#const`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> std::result::Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, column);
        let mut push = |tok: Tok, len: usize, i: &mut usize, column: &mut usize| {
            out.push(Spanned {
                tok,
                line: start_line,
                column: start_col,
            });
            *i += len;
            *column += len;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                column = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                column += 1;
            }
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => push(Tok::LParen, 1, &mut i, &mut column),
            ')' => push(Tok::RParen, 1, &mut i, &mut column),
            ',' => push(Tok::Comma, 1, &mut i, &mut column),
            '.' => push(Tok::Dot, 1, &mut i, &mut column),
            '|' => push(Tok::Bar, 1, &mut i, &mut column),
            '&' => push(Tok::Amp, 1, &mut i, &mut column),
            '=' => push(Tok::Eq, 1, &mut i, &mut column),
            '-' if chars.get(i + 1) == Some(&'>') => push(Tok::Arrow, 2, &mut i, &mut column),
            '-' => push(Tok::Minus, 1, &mut i, &mut column),
            ':' if chars.get(i + 1) == Some(&'-') => push(Tok::If, 2, &mut i, &mut column),
            '!' if chars.get(i + 1) == Some(&'=') => push(Tok::Neq, 2, &mut i, &mut column),
            '#' => {
                let word: String = chars[i + 1..].iter().take_while(|c| c.is_ascii_alphanumeric()).collect();
                if word == "const" {
                    push(Tok::Const, 6, &mut i, &mut column);
                } else {
                    return Err(ParseError {
                        line,
                        column,
                        expected: "`#const` directive".into(),
                    });
                }
            }
            c if c.is_ascii_alphabetic() => {
                let word: String = chars[i..]
                    .iter()
                    .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                    .collect();
                let len = word.chars().count();
                let tok = if c.is_ascii_lowercase() {
                    Tok::Lower(word)
                } else {
                    Tok::Upper(word)
                };
                push(tok, len, &mut i, &mut column);
            }
            _ => {
                return Err(ParseError {
                    line,
                    column,
                    expected: format!("a token, found `{c}`"),
                })
            }
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

const KEYWORDS: [&str; 3] = ["not", "forall", "exists"];

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

/// Result of parsing an atomic position: either an atom or a `!=` literal.
enum Atomic {
    Atom(Atom),
    Neq(Term, Term),
}

impl Parser {
    fn new(text: &str) -> Result<Parser> {
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, idx: usize, expected: impl Into<String>) -> Error {
        let s = &self.toks[idx];
        Error::Parse(ParseError {
            line: s.line,
            column: s.column,
            expected: format!("{}, found {}", expected.into(), s.tok.describe()),
        })
    }

    fn error(&self, expected: impl Into<String>) -> Error {
        self.error_at(self.pos, expected)
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(tok.describe()))
        }
    }

    fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    /// Parses `#const a.` after the `#const` token has been seen.
    fn const_directive(&mut self) -> Result<String> {
        self.expect(Tok::Const)?;
        match self.bump() {
            Tok::Lower(name) if !KEYWORDS.contains(&name.as_str()) => {
                self.expect(Tok::Dot)?;
                Ok(name)
            }
            _ => Err(self.error_at(self.pos - 1, "a constant symbol")),
        }
    }

    /// A term. `after_comma` is the index of a preceding separator, used as
    /// the error position when no term follows it.
    fn term(&mut self, after_comma: Option<usize>) -> Result<Term> {
        match self.peek().clone() {
            Tok::Upper(v) if v != "L" => {
                self.bump();
                Ok(Term::Var(v))
            }
            Tok::Lower(name) if !KEYWORDS.contains(&name.as_str()) => {
                self.bump();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    let args = self.term_list()?;
                    Ok(Term::Func(name, args))
                } else {
                    Ok(Term::Const(name))
                }
            }
            _ => match after_comma {
                Some(idx) => Err(self.error_at(idx, "a term after `,`")),
                None => Err(self.error("a term")),
            },
        }
    }

    /// `t1, …, tn )` after an opening parenthesis.
    fn term_list(&mut self) -> Result<Vec<Term>> {
        let mut args = vec![self.term(None)?];
        while *self.peek() == Tok::Comma {
            let comma = self.pos;
            self.bump();
            args.push(self.term(Some(comma))?);
        }
        self.expect(Tok::RParen)?;
        Ok(args)
    }

    /// An atom, an equality `t1 = t2`, or `t1 != t2`.
    fn atomic(&mut self, after_comma: Option<usize>) -> Result<Atomic> {
        let start = self.pos;
        match self.peek().clone() {
            Tok::Lower(name) if !KEYWORDS.contains(&name.as_str()) => {
                self.bump();
                let args = if *self.peek() == Tok::LParen {
                    self.bump();
                    self.term_list()?
                } else {
                    Vec::new()
                };
                if matches!(self.peek(), Tok::Eq | Tok::Neq) {
                    let lhs = if args.is_empty() {
                        Term::Const(name)
                    } else {
                        Term::Func(name, args)
                    };
                    return self.equality_rest(lhs);
                }
                Ok(Atomic::Atom(Atom::Pred(name, args)))
            }
            Tok::Upper(name) if name != "L" => {
                if *self.peek_at(1) == Tok::LParen {
                    // Uppercase predicate symbol applied to arguments.
                    self.bump();
                    self.bump();
                    let args = self.term_list()?;
                    if matches!(self.peek(), Tok::Eq | Tok::Neq) {
                        return Err(self.error_at(start, "a lowercase function symbol"));
                    }
                    return Ok(Atomic::Atom(Atom::Pred(name, args)));
                }
                self.bump();
                if matches!(self.peek(), Tok::Eq | Tok::Neq) {
                    self.equality_rest(Term::Var(name))
                } else {
                    Err(self.error("`=` or `!=` after a variable"))
                }
            }
            _ => match after_comma {
                Some(idx) => Err(self.error_at(idx, "an atom after `,`")),
                None => Err(self.error("an atom")),
            },
        }
    }

    fn equality_rest(&mut self, lhs: Term) -> Result<Atomic> {
        let neq = self.bump() == Tok::Neq;
        let rhs = self.term(None)?;
        Ok(if neq {
            Atomic::Neq(lhs, rhs)
        } else {
            Atomic::Atom(Atom::equality(lhs, rhs))
        })
    }

    fn rule_atom(&mut self, after_comma: Option<usize>) -> Result<Atom> {
        match self.atomic(after_comma)? {
            Atomic::Atom(a @ Atom::Pred(..)) => Ok(a),
            _ => Err(Error::Semantic(format!(
                "equality atom in a rule (line {})",
                self.toks[self.pos.saturating_sub(1)].line
            ))),
        }
    }

    fn rule(&mut self) -> Result<Rule> {
        let mut head = vec![self.rule_atom(None)?];
        while *self.peek() == Tok::Bar {
            self.bump();
            head.push(self.rule_atom(None)?);
        }
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        if *self.peek() == Tok::If {
            self.bump();
            let mut after_comma = None;
            loop {
                if *self.peek() == Tok::Lower("not".into()) {
                    self.bump();
                    neg.push(self.rule_atom(None)?);
                } else {
                    pos.push(self.rule_atom(after_comma)?);
                }
                if *self.peek() == Tok::Comma {
                    after_comma = Some(self.pos);
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::Dot)?;
        Ok(Rule { head, pos, neg })
    }

    fn program(&mut self) -> Result<Program> {
        let mut rules = Vec::new();
        let mut consts = Vec::new();
        while !self.at_eof() {
            if *self.peek() == Tok::Const {
                consts.push(self.const_directive()?);
            } else {
                rules.push(self.rule()?);
            }
        }
        let refs: Vec<&str> = consts.iter().map(String::as_str).collect();
        Program::new(rules, &refs)
    }

    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut acc = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Minus => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Upper(l) if l == "L" => {
                self.bump();
                Ok(Formula::modal(self.unary()?))
            }
            Tok::Lower(q) if q == "forall" || q == "exists" => {
                self.bump();
                let mut vars = Vec::new();
                loop {
                    match self.bump() {
                        Tok::Upper(v) if v != "L" => vars.push(v),
                        _ => return Err(self.error_at(self.pos - 1, "a variable")),
                    }
                    if *self.peek() == Tok::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
                self.expect(Tok::Dot)?;
                let body = self.formula()?;
                Ok(vars.iter().rev().fold(body, |acc, v| {
                    if q == "forall" {
                        Formula::forall(v, acc)
                    } else {
                        Formula::exists(v, acc)
                    }
                }))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            _ => match self.atomic(None)? {
                Atomic::Atom(a) => Ok(Formula::Atom(a)),
                Atomic::Neq(l, r) => Ok(Formula::neq(l, r)),
            },
        }
    }

    /// Sentences terminated by `.`, with optional `#const` directives.
    fn sentences(&mut self) -> Result<(Vec<Formula>, Vec<String>)> {
        let mut formulas = Vec::new();
        let mut consts = Vec::new();
        while !self.at_eof() {
            if *self.peek() == Tok::Const {
                consts.push(self.const_directive()?);
            } else {
                formulas.push(self.formula()?);
                self.expect(Tok::Dot)?;
            }
        }
        Ok((formulas, consts))
    }
}

/// Parses a `.lp` program.
pub fn parse_program(text: &str) -> Result<Program> {
    Parser::new(text)?.program()
}

/// Parses a `.fot` theory; every formula must be a sentence.
pub fn parse_theory(text: &str) -> Result<Theory> {
    let (formulas, consts) = Parser::new(text)?.sentences()?;
    let refs: Vec<&str> = consts.iter().map(String::as_str).collect();
    Theory::new(formulas, &refs)
}

/// Parses a single formula (free variables allowed), with or without a
/// terminating `.`.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    if *p.peek() == Tok::Dot {
        p.bump();
    }
    if !p.at_eof() {
        return Err(p.error("end of input"));
    }
    Ok(f)
}

/// Parses a probe file: a sequence of sentences.
pub fn parse_formulas(text: &str) -> Result<Vec<Formula>> {
    Ok(Parser::new(text)?.sentences()?.0)
}

pub fn render_term(t: &Term) -> String {
    match t {
        Term::Var(v) | Term::Const(v) => v.clone(),
        Term::Func(f, args) => format!("{f}({})", args.iter().map(render_term).collect::<Vec<_>>().join(", ")),
    }
}

pub fn render_atom(a: &Atom) -> String {
    match a {
        Atom::Pred(p, args) if args.is_empty() => p.clone(),
        Atom::Pred(p, args) => format!("{p}({})", args.iter().map(render_term).collect::<Vec<_>>().join(", ")),
        Atom::Eq(l, r) => format!("{} = {}", render_term(l), render_term(r)),
    }
}

// Binding strength used by the printer: higher binds tighter.
const P_QUANT: u8 = 0;
const P_IMPL: u8 = 1;
const P_OR: u8 = 2;
const P_AND: u8 = 3;
const P_UNARY: u8 = 4;
const P_EQ: u8 = 5;
const P_ATOM: u8 = 6;

fn strength(f: &Formula) -> u8 {
    match f {
        Formula::Forall(..) | Formula::Exists(..) => P_QUANT,
        Formula::Implies(..) => P_IMPL,
        Formula::Or(..) => P_OR,
        Formula::And(..) => P_AND,
        Formula::Not(_) | Formula::Modal(_) => P_UNARY,
        Formula::Neq(..) | Formula::Atom(Atom::Eq(..)) => P_EQ,
        Formula::Atom(_) => P_ATOM,
    }
}

fn write_formula(f: &Formula, min: u8, out: &mut String) {
    let paren = strength(f) < min;
    if paren {
        out.push('(');
    }
    match f {
        Formula::Atom(a) => out.push_str(&render_atom(a)),
        Formula::Neq(l, r) => {
            out.push_str(&format!("{} != {}", render_term(l), render_term(r)));
        }
        Formula::Not(g) => {
            out.push('-');
            write_formula(g, unary_operand_min(g), out);
        }
        Formula::Modal(g) => {
            let min = unary_operand_min(g);
            out.push_str(if strength(g) < min { "L" } else { "L " });
            write_formula(g, min, out);
        }
        Formula::And(a, b) => {
            write_formula(a, P_AND, out);
            out.push_str(" & ");
            write_formula(b, P_UNARY, out);
        }
        Formula::Or(a, b) => {
            write_formula(a, P_OR, out);
            out.push_str(" | ");
            write_formula(b, P_AND, out);
        }
        Formula::Implies(a, b) => {
            write_formula(a, P_OR, out);
            out.push_str(" -> ");
            write_formula(b, P_IMPL, out);
        }
        Formula::Forall(..) | Formula::Exists(..) => {
            let forall = matches!(f, Formula::Forall(..));
            let mut vars = Vec::new();
            let mut body = f;
            loop {
                match (body, forall) {
                    (Formula::Forall(v, g), true) | (Formula::Exists(v, g), false) => {
                        vars.push(v.clone());
                        body = g;
                    }
                    _ => break,
                }
            }
            out.push_str(if forall { "forall " } else { "exists " });
            out.push_str(&vars.join(", "));
            out.push_str(". ");
            write_formula(body, P_QUANT, out);
        }
    }
    if paren {
        out.push(')');
    }
}

/// Operands of `-` and `L` are unary formulas; (in)equalities are
/// parenthesized for readability.
fn unary_operand_min(g: &Formula) -> u8 {
    if strength(g) == P_EQ {
        P_ATOM
    } else {
        P_UNARY
    }
}

/// A formula without the terminating `.`.
pub fn render_formula(f: &Formula) -> String {
    let mut s = String::new();
    write_formula(f, P_QUANT, &mut s);
    s
}

/// A formula as a `.fot` statement.
pub fn render_sentence(f: &Formula) -> String {
    format!("{}.", render_formula(f))
}

pub fn render_rule(r: &Rule) -> String {
    let head = r.head.iter().map(render_atom).collect::<Vec<_>>().join(" | ");
    let body: Vec<String> = r
        .pos
        .iter()
        .map(render_atom)
        .chain(r.neg.iter().map(|a| format!("not {}", render_atom(a))))
        .collect();
    if body.is_empty() {
        format!("{head}.")
    } else {
        format!("{head} :- {}.", body.join(", "))
    }
}

fn const_directives(sig: &crate::syntax::Signature, used: &crate::syntax::Signature) -> Vec<String> {
    sig.constants
        .iter()
        .filter(|c| !used.constants.contains(*c))
        .filter(|c| !(sig.implicit_constant && c.as_str() == crate::syntax::IMPLICIT_CONSTANT))
        .map(|c| format!("#const {c}."))
        .collect()
}

pub fn render_program(p: &Program) -> String {
    let used = Program::new(p.rules.clone(), &[]).map(|q| q.signature).unwrap_or_default();
    let mut lines = const_directives(&p.signature, &used);
    lines.extend(p.rules.iter().map(render_rule));
    lines.join("\n")
}

pub fn render_theory(t: &Theory) -> String {
    let used = Theory::new(t.formulas.clone(), &[]).map(|u| u.signature).unwrap_or_default();
    let mut lines = const_directives(&t.signature, &used);
    lines.extend(t.formulas.iter().map(render_sentence));
    lines.join("\n")
}

/// `p(a). q.` — atoms and equalities sorted by their text.
pub fn render_kernel(k: &BeliefKernel) -> String {
    k.sorted_strings()
        .into_iter()
        .map(|s| format!("{s}."))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Anything with a canonical textual form.
pub trait Render {
    fn render(&self) -> String;
}

impl Render for Program {
    fn render(&self) -> String {
        render_program(self)
    }
}

impl Render for Theory {
    fn render(&self) -> String {
        render_theory(self)
    }
}

impl Render for Formula {
    fn render(&self) -> String {
        render_sentence(self)
    }
}

impl Render for BeliefKernel {
    fn render(&self) -> String {
        render_kernel(self)
    }
}

impl Render for Atom {
    fn render(&self) -> String {
        render_atom(self)
    }
}

impl Render for Rule {
    fn render(&self) -> String {
        render_rule(self)
    }
}
