mod common;

use std::collections::BTreeSet;

use aelab::embed::{embed_program, EmbeddingKind, EmbeddingVariant};
use aelab::expand::{candidate_kernels, consequences, is_stable_kernel, member, stable_expansions, BeliefKernel, Consequence, Expansion};
use aelab::foael::{InterpretationSpace, Mode};
use aelab::lp::{grounding, stable_models};
use aelab::syntax::{Atom, Formula, Program, Signature, Theory};
use aelab::textio::{parse_formula, parse_theory, render_program};
use aelab::{Caps, Error};
use proptest::prelude::*;

const MODES: [Mode; 2] = [Mode::Any, Mode::All];

fn f(text: &str) -> Formula {
    parse_formula(text).unwrap()
}

fn atom(text: &str) -> Atom {
    match f(text) {
        Formula::Atom(x) => x,
        other => panic!("not an atom: {other:?}"),
    }
}

fn kernel(atoms: &[&str]) -> BeliefKernel {
    BeliefKernel::new(atoms.iter().map(|a| atom(a)))
}

fn embedding(p: &Program, v: EmbeddingVariant) -> Theory {
    embed_program(p, v, 0, &Caps::default()).unwrap()
}

fn expansions(t: &Theory, mode: Mode, space: InterpretationSpace) -> Vec<Expansion> {
    stable_expansions(t, mode, space, 0, &Caps::default()).unwrap()
}

fn kernels(exps: &[Expansion]) -> Vec<Vec<String>> {
    exps.iter().map(|e| e.kernel.sorted_strings()).collect()
}

/// Pred-atom kernels of the consistent expansions, sorted.
fn consistent_kernels(exps: &[Expansion]) -> Vec<BTreeSet<Atom>> {
    let mut out: Vec<BTreeSet<Atom>> = exps.iter().filter(|e| e.consistent).map(|e| e.kernel.pred_atoms().clone()).collect();
    out.sort();
    out
}

fn applicable(p: &Program) -> Vec<EmbeddingKind> {
    EmbeddingKind::ALL.into_iter().filter(|k| p.is_normal() || !k.is_normal_only()).collect()
}

#[test]
fn candidate_kernels_are_congruence_closed() {
    let caps = Caps::default();
    let q = Signature::new().with_predicate("q", 0);
    assert_eq!(candidate_kernels(&q, 0, &caps).unwrap().len(), 2);
    let one = Signature::new().with_constants(["a"]).with_predicate("p", 1);
    assert_eq!(candidate_kernels(&one, 0, &caps).unwrap().len(), 2);
    let two = Signature::new().with_constants(["a", "b"]).with_predicate("p", 1);
    let ks = candidate_kernels(&two, 0, &caps).unwrap();
    let (ab, pa, pb) = (atom("a = b"), atom("p(a)"), atom("p(b)"));
    for k in &ks {
        if k.contains(&ab) {
            assert_eq!(k.contains(&pa), k.contains(&pb), "{:?}", k.sorted_strings());
        }
    }
    // 4 subsets without a = b, 2 with it
    assert_eq!(ks.len(), 6);
}

#[test]
fn stable_kernel_examples() {
    let caps = Caps::default();
    let p47 = embedding(&common::program("ex4_7"), EmbeddingVariant::new(EmbeddingKind::HP));
    let k = kernel(&["q(a)", "p(a)", "r(a)"]);
    assert!(is_stable_kernel(&p47, &k, Mode::Any, InterpretationSpace::StandardNames, 0, &caps).unwrap());
    let exps = expansions(&p47, Mode::Any, InterpretationSpace::StandardNames);
    assert_eq!(kernels(&exps), vec![vec!["p(a)", "q(a)", "r(a)"]]);

    let p48 = embedding(&common::program("ex4_8"), EmbeddingVariant::without_una(EmbeddingKind::HP));
    let space = InterpretationSpace::Bounded(4);
    assert!(is_stable_kernel(&p48, &kernel(&["p(n1)", "r(n2)"]), Mode::Any, space, 0, &caps).unwrap());
    let all = expansions(&p48, Mode::All, space);
    assert_eq!(all.iter().filter(|e| e.consistent).map(|e| e.kernel.sorted_strings()).collect::<Vec<_>>(), vec![vec!["p(n1)", "q", "r(n2)"]]);

    let empty = Theory::with_signature(vec![], Signature::new().with_constants(["a"]).with_predicate("p", 1)).unwrap();
    assert!(!is_stable_kernel(&empty, &kernel(&["p(a)"]), Mode::Any, space, 0, &caps).unwrap());
}

#[test]
fn disjunctive_fact_has_two_expansions() {
    let t = embedding(&common::program("ex4_13"), EmbeddingVariant::new(EmbeddingKind::HPv));
    let exps = expansions(&t, Mode::Any, InterpretationSpace::StandardNames);
    assert_eq!(kernels(&exps), vec![vec!["p"], vec!["q"]]);
    let cn = consequences(&t, &[f("p | q"), f("p")], Mode::Any, InterpretationSpace::StandardNames, 0, &Caps::default()).unwrap();
    assert!(cn[0].1.holds());
    assert!(!cn[1].1.holds());
    let eh = embedding(&common::program("ex4_13"), EmbeddingVariant::new(EmbeddingKind::EHv));
    let cn = consequences(&eh, &[f("-p"), f("-q")], Mode::Any, InterpretationSpace::StandardNames, 0, &Caps::default()).unwrap();
    assert!(cn.iter().all(|(_, c)| !c.holds()));
}

#[test]
fn example_program_expansions_match_stable_models() {
    let p = common::program("ex2_2");
    let models = stable_models(&p, 0, &Caps::default()).unwrap();
    for k in EmbeddingKind::ALL.into_iter().filter(|k| !k.is_normal_only()) {
        for mode in MODES {
            let exps = expansions(&embedding(&p, EmbeddingVariant::new(k)), mode, InterpretationSpace::StandardNames);
            assert_eq!(exps.len(), 4);
            assert_eq!(consistent_kernels(&exps), models, "{k:?} {mode:?}");
        }
    }
}

#[test]
fn membership_queries() {
    let space = InterpretationSpace::Bounded(3);
    let p = common::program("ex5_1");
    let hp = expansions(&embedding(&p, EmbeddingVariant::new(EmbeddingKind::HP)), Mode::Any, space);
    let eb = expansions(&embedding(&p, EmbeddingVariant::new(EmbeddingKind::EB)), Mode::Any, space);
    assert_eq!(hp.len(), 1);
    assert_eq!(eb.len(), 1);
    assert!(hp[0].member(&f("b -> a")).unwrap().member);
    assert!(!eb[0].member(&f("b -> a")).unwrap().member);
    assert!(eb[0].member(&f("L b -> b")).unwrap().member);
    assert!(!eb[0].member(&f("b -> L b")).unwrap().member);
    assert!(!eb[0].member(&f("b -> a")).unwrap().exact);

    let p = common::program("ex5_3");
    let eh = expansions(&embedding(&p, EmbeddingVariant::new(EmbeddingKind::EH)), Mode::Any, space);
    let eb = expansions(&embedding(&p, EmbeddingVariant::new(EmbeddingKind::EB)), Mode::Any, space);
    assert!(eh[0].member(&f("forall X. q(X)")).unwrap().member);
    assert!(!eb[0].member(&f("forall X. q(X)")).unwrap().member);

    let p = common::program("ex5_4");
    let hp = expansions(&embedding(&p, EmbeddingVariant::new(EmbeddingKind::HP)), Mode::Any, space);
    let eb = expansions(&embedding(&p, EmbeddingVariant::new(EmbeddingKind::EB)), Mode::Any, space);
    assert!(hp[0].member(&f("forall X. p(X) -> q(X)")).unwrap().member);
    assert!(!eb[0].member(&f("forall X. p(X) -> q(X)")).unwrap().member);
}

#[test]
fn modal_membership_follows_the_stable_set_laws() {
    let t = embedding(&common::program("ex2_2"), EmbeddingVariant::new(EmbeddingKind::HPv));
    for e in expansions(&t, Mode::Any, InterpretationSpace::StandardNames) {
        for a in ["p(a)", "q(a)", "r(b)", "s(a)"] {
            let plain = e.member(&f(a)).unwrap().member;
            assert_eq!(e.member(&f(&format!("L {a}"))).unwrap().member, plain);
            assert_eq!(e.member(&f(&format!("-L {a}"))).unwrap().member, !plain);
        }
    }
}

#[test]
fn member_requires_a_stable_kernel() {
    let t = embedding(&common::program("ex5_1"), EmbeddingVariant::new(EmbeddingKind::HP));
    let space = InterpretationSpace::StandardNames;
    let caps = Caps::default();
    assert!(member(&t, &kernel(&[]), &f("b -> a"), Mode::Any, space, 0, &caps).unwrap().member);
    assert!(member(&t, &kernel(&["a"]), &f("a"), Mode::Any, space, 0, &caps).is_err());
}

#[test]
fn inconsistent_theories_and_vacuous_consequence() {
    let t = parse_theory("p. -p.").unwrap();
    let exps = expansions(&t, Mode::Any, InterpretationSpace::StandardNames);
    assert_eq!(exps.len(), 1);
    assert!(!exps[0].consistent);
    assert!(exps[0].contains(&f("q | -q")).unwrap().member);
    assert!(matches!(exps[0].member(&f("L p")), Err(Error::InconsistentKernel)));

    let none = parse_theory("-L p -> p.").unwrap();
    assert!(expansions(&none, Mode::Any, InterpretationSpace::StandardNames).is_empty());
    let cn = consequences(&none, &[f("p")], Mode::Any, InterpretationSpace::StandardNames, 0, &Caps::default()).unwrap();
    assert_eq!(cn[0].1, Consequence::VacuouslyTrue);
}

#[test]
fn rich_modal_scopes_are_rejected() {
    let t = parse_theory("L(p | q) -> r.").unwrap();
    assert!(matches!(
        stable_expansions(&t, Mode::Any, InterpretationSpace::StandardNames, 0, &Caps::default()),
        Err(Error::ModalScopeTooRich(_))
    ));
}

#[test]
fn corpus_expansions_survive_grounding_and_bounded_spaces() {
    for (name, p) in common::corpus_programs() {
        if !p.signature.functions.is_empty() {
            continue;
        }
        let g = grounding(&p, 0, &Caps::default()).unwrap();
        let n = p.signature.names(0).len();
        for k in applicable(&p) {
            let v = EmbeddingVariant::new(k);
            for mode in MODES {
                let std = expansions(&embedding(&p, v), mode, InterpretationSpace::StandardNames);
                let gr = expansions(&embedding(&g, v), mode, InterpretationSpace::StandardNames);
                assert_eq!(kernels(&std), kernels(&gr), "{name} {k:?} {mode:?} grounding");
                let bounded = expansions(&embedding(&p, v), mode, InterpretationSpace::Bounded(n.max(1)));
                assert_eq!(kernels(&std), kernels(&bounded), "{name} {k:?} {mode:?} bounded");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn embeddings_are_faithful(seed in any::<u64>()) {
        let p = common::random_program(&mut common::rng(seed), common::ProgramShape::small());
        let models = common::brute_force_stable_models(&p);
        for k in applicable(&p) {
            for mode in MODES {
                let t = embedding(&p, EmbeddingVariant::new(k));
                let exps = expansions(&t, mode, InterpretationSpace::StandardNames);
                prop_assert_eq!(&consistent_kernels(&exps), &models, "{:?} {:?}\n{}", k, mode, render_program(&p));
                for e in &exps {
                    prop_assert!(is_stable_kernel(&t, &e.kernel, mode, InterpretationSpace::StandardNames, 0, &Caps::default()).unwrap());
                }
            }
        }
    }

    #[test]
    fn standard_names_agree_with_bounded_spaces(seed in any::<u64>()) {
        let shape = common::ProgramShape { max_constants: 2, max_ground_atoms: 8, ..common::ProgramShape::small() };
        let p = common::random_program(&mut common::rng(seed), shape);
        let n = p.signature.names(0).len().max(1);
        for k in applicable(&p) {
            let t = embedding(&p, EmbeddingVariant::new(k));
            for mode in MODES {
                let std = expansions(&t, mode, InterpretationSpace::StandardNames);
                for d in [n, n + 1] {
                    prop_assert_eq!(kernels(&std), kernels(&expansions(&t, mode, InterpretationSpace::Bounded(d))), "{:?} {:?} D={}", k, mode, d);
                }
            }
        }
    }
}

#[test]
fn minus_variant_is_faithful_in_all_name_mode() {
    let p = common::program("ex4_8");
    let models = stable_models(&p, 0, &Caps::default()).unwrap();
    let t = embedding(&p, EmbeddingVariant::without_una(EmbeddingKind::HP));
    let exps = expansions(&t, Mode::All, InterpretationSpace::Bounded(4));
    assert_eq!(consistent_kernels(&exps), models);
}
