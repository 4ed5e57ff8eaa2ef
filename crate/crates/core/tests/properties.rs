use std::collections::BTreeMap;

use proptest::prelude::*;

use datr::backbone::compile;
use datr::crosscheck::run_crosscheck;
use datr::forward::{eval_query, EvalLimits, Value};
use datr::matcher::{match_sequence, Bindings};
use datr::path::{Atom, AttrPath, ConstraintSet, NodeName};
use datr::reverse::{expand_answer, reverse_query, reverse_query_traced};
use datr::syntax::{parse_source, Descriptor, Sentence, Theory};
use datr::term::{NonTerminal, PathTerm, Symbol, Var};

const NOUNS: &str = include_str!("fixtures/nouns.dtr");

fn path_of(max: usize) -> impl Strategy<Value = AttrPath> {
    prop::collection::vec(prop::sample::select(vec!["a", "b", "c"]), 0..=max)
        .prop_map(|v| v.into_iter().map(Atom::new).collect())
}

fn constraint_of(max: usize) -> impl Strategy<Value = ConstraintSet> {
    prop::collection::vec(path_of(3), 0..=max)
        .prop_map(|v| ConstraintSet::from_paths(v.into_iter().filter(|p| !p.is_empty())))
}

fn node() -> impl Strategy<Value = NodeName> {
    prop::sample::select(vec!["A", "B", "C"]).prop_map(NodeName::new)
}

fn descriptor() -> impl Strategy<Value = Descriptor> {
    let atom = prop::sample::select(vec!["x", "y"]).prop_map(Atom::new);
    prop_oneof![
        atom.prop_map(Descriptor::AtomValue),
        (node(), path_of(2)).prop_map(|(n, p)| Descriptor::LocalNodePath(n, p)),
        node().prop_map(Descriptor::LocalNode),
        path_of(2).prop_map(Descriptor::LocalPath),
        (node(), path_of(2)).prop_map(|(n, p)| Descriptor::GlobalNodePath(n, p)),
        node().prop_map(Descriptor::GlobalNode),
        path_of(2).prop_map(Descriptor::GlobalPath),
    ]
}

fn sentence_rhs() -> impl Strategy<Value = Vec<Descriptor>> {
    prop_oneof![
        1 => Just(vec![Descriptor::EmptyValue]),
        6 => prop::collection::vec(descriptor(), 1..=2),
    ]
}

/// Small random theories; duplicates are collapsed by keying on the LHS.
fn theory() -> impl Strategy<Value = Theory> {
    prop::collection::vec(((node(), path_of(2)), sentence_rhs()), 1..8).prop_map(|entries| {
        let by_lhs: BTreeMap<_, _> = entries.into_iter().collect();
        let sentences = by_lhs
            .into_iter()
            .map(|((node, lhs_path), rhs)| Sentence {
                node,
                lhs_path,
                rhs,
            })
            .collect();
        Theory::new(sentences).expect("keys are unique")
    })
}

fn small_limits() -> EvalLimits {
    EvalLimits {
        max_path_len: 5,
        max_depth: 24,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn printed_theory_parses_back(th in theory()) {
        let printed = th.to_string();
        let again = parse_source(&printed).unwrap();
        prop_assert_eq!(again, th);
    }

    #[test]
    fn residual_splits_satisfaction(c in constraint_of(4), p in path_of(3), e in path_of(3)) {
        let whole = c.satisfied_by(&p.concat(&e));
        let split = c.satisfied_by(&p) && c.residual(&p).satisfied_by(&e);
        prop_assert_eq!(whole, split);
    }

    #[test]
    fn satisfaction_is_antitone(c in constraint_of(3), extra in constraint_of(3), x in path_of(4)) {
        let d = c.union(&extra);
        if d.satisfied_by(&x) {
            prop_assert!(c.satisfied_by(&x));
        }
        prop_assert_eq!(c.minimized().satisfied_by(&x), c.satisfied_by(&x));
    }

    #[test]
    fn sequence_match_ignores_order(
        pairs in prop::collection::vec((path_of(2), constraint_of(2)), 1..4),
        ext in path_of(2),
        shift in 0usize..4,
    ) {
        let mut rule = Vec::new();
        let mut item = Vec::new();
        for (i, (p, c)) in pairs.iter().enumerate() {
            let name = format!("N{i}");
            let base = 4 * i as u32;
            rule.push(Symbol::Nt(NonTerminal::new(&name, "", &[], Var(base), Var(base + 1))));
            if let Symbol::Nt(nt) = rule.last_mut().unwrap() {
                nt.path = PathTerm::closed(p.clone());
            }
            let mut it = NonTerminal::new(&name, "", &[], Var(base + 2), Var(base + 3));
            it.path = PathTerm::closed(p.concat(&ext));
            it.constraint = c.clone();
            item.push(Symbol::Nt(it));
        }
        let floor = 4 * pairs.len() as u32;
        let a = match_sequence(&rule, &item, &Bindings::above(floor)).unwrap();
        let k = shift % rule.len();
        rule.rotate_left(k);
        item.rotate_left(k);
        let b = match_sequence(&rule, &item, &Bindings::above(floor)).unwrap();
        prop_assert_eq!(&a.suffix, &b.suffix);
        prop_assert_eq!(&a.suffix, &PathTerm::closed(ext));
        prop_assert_eq!(a.constraint, b.constraint);
    }

    #[test]
    fn reverse_runs_are_deterministic_and_monotone(
        words in prop::collection::vec(prop::sample::select(vec!["house", "sheep", "foot", "feet", "s"]), 0..4),
    ) {
        let rules = compile(&parse_source(NOUNS).unwrap()).unwrap();
        let value = Value(words.into_iter().map(Atom::new).collect());
        let first = reverse_query_traced(&rules, value.atoms(), EvalLimits::default(), true);
        let again = reverse_query_traced(&rules, value.atoms(), EvalLimits::default(), true);
        prop_assert_eq!(&first.outcome.answers, &again.outcome.answers);
        prop_assert_eq!(&first.chart, &again.chart);
        let sizes: Vec<usize> = first.trace.iter().map(|r| r.chart_size).collect();
        prop_assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn noun_answers_evaluate_to_their_value(
        words in prop::collection::vec(prop::sample::select(vec!["house", "sheep", "foot", "feet", "s"]), 0..3),
    ) {
        let th = parse_source(NOUNS).unwrap();
        let rules = compile(&th).unwrap();
        let value = Value(words.into_iter().map(Atom::new).collect());
        let out = reverse_query(&rules, value.atoms(), EvalLimits::default());
        let alphabet: Vec<Atom> = th.attribute_alphabet().into_iter().collect();
        for a in &out.answers {
            for q in expand_answer(a, &alphabet, a.path.len() + 2) {
                prop_assert_eq!(eval_query(&th, &q, EvalLimits::default()), Ok(value.clone()), "{} from {}", q, a);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Reverse answers agree with forward evaluation on random theories:
    /// never unsound, and complete whenever no chart item was suppressed.
    #[test]
    fn random_theories_round_trip(th in theory()) {
        let rules = compile(&th).unwrap();
        let report = run_crosscheck(&th, &rules, 2, small_limits());
        prop_assert!(
            report.violations.is_empty(),
            "theory:\n{}\nviolation {:?}", th, report.violations.first()
        );
        if report.suppressed == 0 {
            prop_assert!(report.misses.is_empty(), "theory:\n{}\nmiss {:?}", th, report.misses.first());
        }
    }
}
