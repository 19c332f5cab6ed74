mod common;

use aelab::error::Error;
use aelab::syntax::{Atom, Formula, Program, Rule, Signature, Term, Theory};
use aelab::textio::{
    parse_formula, parse_formulas, parse_program, parse_theory, render_formula, render_program, render_rule,
    render_sentence, render_theory,
};
use proptest::prelude::*;

#[test]
fn program_rendering_is_canonical() {
    let p = parse_program("q(X)|r(X):-p(X),not s(X).  p(a).\n% comment\np(b).").unwrap();
    assert_eq!(render_program(&p), "q(X) | r(X) :- p(X), not s(X).\np(a).\np(b).");
}

#[test]
fn theory_rendering_uses_minimal_parentheses() {
    let t = parse_theory("forall X. ((p(X) & L p(X)) & -L s(X)) -> ((q(X) & L q(X)) | (r(X) & L r(X))).").unwrap();
    assert_eq!(
        render_theory(&t),
        "forall X. p(X) & L p(X) & -L s(X) -> q(X) & L q(X) | r(X) & L r(X)."
    );
    let f = parse_formula("-L(a = b) -> a != b").unwrap();
    assert_eq!(render_sentence(&f), "-L(a = b) -> a != b.");
}

#[test]
fn implication_is_right_associative() {
    let f = parse_formula("p -> q -> r").unwrap();
    let expected = Formula::implies(
        Formula::Atom(Atom::prop("p")),
        Formula::implies(Formula::Atom(Atom::prop("q")), Formula::Atom(Atom::prop("r"))),
    );
    assert_eq!(f, expected);
    let g = parse_formula("(p -> q) -> r").unwrap();
    assert_eq!(render_formula(&g), "(p -> q) -> r");
}

#[test]
fn quantifier_lists_bind_each_variable() {
    let f = parse_formula("forall X, Y. p(X) -> q(Y)").unwrap();
    assert!(matches!(&f, Formula::Forall(x, inner) if x == "X" && matches!(inner.as_ref(), Formula::Forall(y, _) if y == "Y")));
    assert!(f.is_closed());
}

#[test]
fn const_directive_extends_the_signature() {
    let p = parse_program("#const b.\np(a).").unwrap();
    assert!(p.signature.constants.contains("b"));
    assert_eq!(render_program(&p), "#const b.\np(a).");
    assert_eq!(parse_program(&render_program(&p)).unwrap(), p);
}

#[test]
fn parse_errors_carry_positions() {
    let Err(Error::Parse(e)) = parse_program("p(a).\nq(X :- p(X).") else {
        panic!("expected a parse error")
    };
    assert_eq!(e.line, 2);
    assert!(e.column > 1);
    assert!(parse_program("p(a)").is_err(), "missing final dot");
}

#[test]
fn uppercase_identifiers_are_variables_unless_applied() {
    let p = parse_program("P(X) :- q(X).").unwrap();
    assert_eq!(p.rules[0].head[0].predicate(), Some(("P", 1)));
    assert!(parse_program("q :- X.").is_err(), "a variable is not an atom");
}

#[test]
fn rules_reject_equalities_and_empty_heads() {
    assert!(matches!(parse_program("p(X) :- q(X), X = a."), Err(_)));
    assert!(matches!(Rule::new(vec![], vec![Atom::prop("p")], vec![]), Err(Error::Semantic(_))));
    assert!(parse_program(":- p.").is_err());
}

#[test]
fn theories_must_be_closed() {
    assert!(matches!(parse_theory("p(X)."), Err(Error::Semantic(_))));
    assert!(parse_theory("forall X. p(X).").is_ok());
}

#[test]
fn arity_clashes_are_rejected() {
    assert!(parse_program("p(a). p.").is_err());
    assert!(parse_theory("p(a) & p(a, b).").is_err());
}

#[test]
fn signature_adds_an_implicit_constant_only_when_needed() {
    let p = parse_program("q(X) :- p(X).").unwrap();
    assert_eq!(p.signature.names(0), vec![Term::constant("c0")]);
    let prop = parse_program("q :- p.").unwrap();
    assert!(prop.signature.names(0).is_empty());
    let named = parse_program("q(a).").unwrap();
    let joint = p.signature.union(&named.signature).unwrap();
    assert_eq!(joint.names(0), vec![Term::constant("a")], "union drops the implicit constant");
}

#[test]
fn names_grow_with_term_depth() {
    let sig = Signature::new().with_constants(["a"]).with_function("f", 1).with_predicate("p", 1);
    assert_eq!(sig.names(0).len(), 1);
    assert_eq!(sig.names(2).len(), 3);
    // three p-atoms plus one equality per unordered pair of distinct names
    assert_eq!(sig.ground_atom_count(2), 3 + 3);
}

#[test]
fn rule_classification() {
    let safe = parse_program("q(X) :- p(X), not r(X).").unwrap();
    assert!(safe.is_safe() && safe.is_normal() && !safe.is_positive() && !safe.is_ground());
    let unsafe_ = parse_program("q :- not p(X).").unwrap();
    assert!(!unsafe_.is_safe());
    let disj = parse_program("p | q.").unwrap();
    assert!(!disj.is_normal() && disj.is_ground() && disj.is_positive());
}

#[test]
fn substitution_and_closure() {
    let f = parse_formula("p(X) & L q(X, Y)").unwrap();
    assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), vec!["X", "Y"]);
    assert_eq!(render_formula(&f.universal_closure()), "forall X, Y. p(X) & L q(X, Y)");
    let beta = [("X".to_string(), Term::constant("a"))].into_iter().collect();
    assert_eq!(render_formula(&f.apply_substitution(&beta)), "p(a) & L q(a, Y)");
    let bound = parse_formula("exists X. p(X)").unwrap();
    assert_eq!(bound.apply_substitution(&beta), bound, "bound occurrences are untouched");
}

#[test]
fn objective_and_modal_scopes() {
    let f = parse_formula("p -> L q & -L(r | s)").unwrap();
    assert!(!f.is_objective());
    assert_eq!(f.modal_scopes().len(), 2);
    assert!(parse_formula("p | -q").unwrap().is_objective());
}

#[test]
fn probe_files_parse_as_sentences() {
    let fs = parse_formulas("% probes\nb -> a.\nforall X. q(X).").unwrap();
    assert_eq!(fs.len(), 2);
}

#[test]
fn corpus_round_trips() {
    for (name, p) in common::corpus_programs() {
        assert_eq!(parse_program(&render_program(&p)).unwrap(), p, "{name}");
    }
    for (name, t) in common::corpus_theories() {
        assert_eq!(parse_theory(&render_theory(&t)).unwrap(), t, "{name}");
    }
    for f in aelab::corr::witness_probes() {
        assert_eq!(parse_formula(&render_sentence(&f)).unwrap(), f);
    }
}

#[test]
fn rule_rendering_matches_grammar() {
    let r = Rule::new(
        vec![Atom::prop("a"), Atom::pred("b", vec![Term::var("X")])],
        vec![Atom::pred("c", vec![Term::var("X")])],
        vec![Atom::prop("d")],
    )
    .unwrap();
    assert_eq!(render_rule(&r), "a | b(X) :- c(X), not d.");
    assert_eq!(Program::new(vec![r.clone()], &[]).unwrap().rules, vec![r]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_programs_round_trip(seed in any::<u64>()) {
        let p = common::random_program(&mut common::rng(seed), common::ProgramShape::small());
        let text = render_program(&p);
        prop_assert_eq!(parse_program(&text).unwrap(), p);
    }

    #[test]
    fn random_formulas_round_trip(seed in any::<u64>(), depth in 0usize..5) {
        let f = common::random_formula(&mut common::rng(seed), depth, &mut Vec::new());
        let text = render_sentence(&f);
        let back = parse_formula(&text).unwrap();
        prop_assert_eq!(&back, &f, "{}", text);
        let t = Theory::new(vec![f], &[]).unwrap();
        prop_assert_eq!(parse_theory(&render_theory(&t)).unwrap(), t);
    }

    #[test]
    fn rendering_is_idempotent(seed in any::<u64>(), depth in 0usize..5) {
        let f = common::random_formula(&mut common::rng(seed), depth, &mut Vec::new());
        let once = render_sentence(&f);
        let twice = render_sentence(&parse_formula(&once).unwrap());
        prop_assert_eq!(once, twice);
    }
}
