//! Reference values for the four-variable example net.

use cpnet_core::dominance::{improving_flips, DominanceEngine, Measures, PruningConfig, ZeroTraversalReason};
use cpnet_core::fixtures::{self, example_constraints, example_net, outcome};
use cpnet_core::oracle::{Entailment, PreferenceGraph};
use cpnet_core::ordering::{consistent_order, constrained_order, ConstraintSet};
use cpnet_core::rank::{ancestors, descendent_paths, preference_position, Ranker, VariableStats};
use cpnet_core::{Outcome, DEFAULT_ENUMERATION_BUDGET};
use num_bigint::BigInt;
use num_rational::BigRational;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn parse_all(list: &[&str]) -> Vec<Outcome> {
    list.iter().map(|s| s.parse().unwrap()).collect()
}

#[test]
fn structure() {
    let net = example_net();
    assert_eq!(net.outcomes().count(), 24);
    assert_eq!(ancestors(&net, 2).unwrap(), vec![0, 1]);
    assert!(ancestors(&net, 0).unwrap().is_empty());
    assert_eq!(descendent_paths(&net, 0).unwrap(), 2u32.into());
    assert_eq!(descendent_paths(&net, 3).unwrap(), 0u32.into());
    assert_eq!(VariableStats::new(&net), VariableStats::by_matrix(&net));
    assert_eq!(preference_position(&net, 2, 3, &[2, 1]).unwrap(), q(1, 1));
    assert!(ancestors(&net, 4).is_err());
}

#[test]
fn reference_ranks() {
    let net = example_net();
    let ranker = Ranker::new(&net);
    let rank = |v: &[u16]| ranker.rank(&outcome(v)).into_ratio();
    assert_eq!(rank(&[2, 1, 3, 2]), q(61, 12));
    assert_eq!(rank(&[1, 1, 2, 2]), q(77, 12));
    assert_eq!(rank(&[2, 2, 1, 1]), q(39, 12));
    assert_eq!(rank(&[2, 1, 3, 1]), q(121, 24));
}

#[test]
fn least_improvements() {
    let net = example_net();
    let ranker = Ranker::new(&net);
    assert_eq!(ranker.least_rank_improvement().values(), &[q(7, 6), q(7, 6), q(1, 8), q(1, 24)]);
    let (o, p) = (outcome(&[2, 1, 3, 1]), outcome(&[2, 1, 2, 2]));
    assert_eq!(ranker.least_rank_difference(&o, &p), q(1, 6));
    assert_eq!(ranker.least_rank_difference(&o, &o), q(0, 1));
    assert_eq!(ranker.least_rank_difference(&outcome(&[1, 1, 1, 1]), &outcome(&[2, 2, 2, 2])), q(5, 2));
    assert_eq!(ranker.min_rank_difference(&o, &p).unwrap(), q(1, 24));
    assert_eq!(ranker.min_rank_difference(&outcome(&[1, 1, 1, 1]), &outcome(&[2, 2, 1, 1])).unwrap(), q(7, 6));
    assert!(ranker.min_rank_difference(&o, &o).is_err());
}

#[test]
fn full_ordering_with_ties() {
    let net = example_net();
    let ranker = Ranker::new(&net);
    let ordering = consistent_order(&ranker, None, false, DEFAULT_ENUMERATION_BUDGET).unwrap();
    let groups: Vec<Vec<Outcome>> =
        ordering.groups().iter().map(|g| g.entries.iter().map(|e| e.outcome.clone()).collect()).collect();
    let expected: Vec<Vec<Outcome>> = [
        &["1,1,1,1"][..],
        &["1,1,1,2"],
        &["1,1,2,2"],
        &["1,1,2,1"],
        &["1,1,3,2"],
        &["1,1,3,1"],
        &["1,2,2,2", "2,1,3,2"],
        &["1,2,2,1", "2,1,3,1"],
        &["1,2,3,2", "2,1,1,1"],
        &["1,2,3,1", "2,1,1,2"],
        &["1,2,1,1", "2,1,2,2"],
        &["1,2,1,2", "2,1,2,1"],
        &["2,2,3,2"],
        &["2,2,3,1"],
        &["2,2,2,2"],
        &["2,2,2,1"],
        &["2,2,1,1"],
        &["2,2,1,2"],
    ]
    .iter()
    .map(|g| parse_all(g))
    .collect();
    assert_eq!(groups, expected);
    assert_eq!(groups.iter().filter(|g| g.len() == 2).count(), 6);

    let graph = PreferenceGraph::build(&net, DEFAULT_ENUMERATION_BUDGET).unwrap();
    let strict = consistent_order(&ranker, None, true, DEFAULT_ENUMERATION_BUDGET).unwrap();
    assert_eq!(strict.outcomes(), expected.concat());
    assert!(graph.verify_consistent_ordering(&strict.outcomes()).is_ok());
}

#[test]
fn constrained_chain() {
    let net = example_net();
    let ranker = Ranker::new(&net);
    let constraints = ConstraintSet::predicate(example_constraints);
    let ordering = constrained_order(&ranker, &constraints, true, DEFAULT_ENUMERATION_BUDGET).unwrap();
    let expected = parse_all(&["1,1,2,2", "1,1,2,1", "1,1,3,2", "1,1,3,1", "1,2,3,1", "1,2,1,1", "1,2,1,2"]);
    assert_eq!(ordering.outcomes(), expected);

    let full = consistent_order(&ranker, None, true, DEFAULT_ENUMERATION_BUDGET).unwrap();
    let restricted: Vec<Outcome> = full.outcomes().into_iter().filter(example_constraints).collect();
    assert_eq!(restricted, expected);

    let everything = ConstraintSet::predicate(|_| true);
    assert_eq!(constrained_order(&ranker, &everything, true, DEFAULT_ENUMERATION_BUDGET).unwrap(), full);
}

#[test]
fn dominance_trace() {
    let net = example_net();
    let engine = DominanceEngine::new(&net);
    assert_eq!(improving_flips(&net, &outcome(&[2, 1, 1, 1])), vec![outcome(&[1, 1, 1, 1]), outcome(&[2, 1, 3, 1])]);
    let (o, p) = (outcome(&[2, 1, 3, 1]), outcome(&[2, 1, 2, 2]));
    let result = engine.dominates(&o, &p, &PruningConfig::new(Measures::RANK)).unwrap();
    assert!(result.answer);
    assert_eq!(result.layer(1), vec![outcome(&[2, 1, 1, 2])]);
    assert_eq!(result.layer(2), vec![outcome(&[2, 1, 1, 1])]);
    let witness = result.witness.unwrap();
    assert_eq!(witness.len() - 1, 3);
    assert_eq!(witness, parse_all(&["2,1,2,2", "2,1,1,2", "2,1,1,1", "2,1,3,1"]));

    let graph = PreferenceGraph::build(&net, DEFAULT_ENUMERATION_BUDGET).unwrap();
    assert_eq!(graph.entails(&o, &p), Entailment::StrictlyPreferred);

    let r = engine.dominates(&outcome(&[2, 2, 1, 1]), &outcome(&[1, 1, 2, 2]), &PruningConfig::new(Measures::RANK));
    let r = r.unwrap();
    assert_eq!((r.answer, r.outcomes_traversed, r.zero_traversal_reason), (false, 0, Some(ZeroTraversalReason::RankInitial)));
}

#[test]
fn equal_rank_pair_is_incomparable() {
    let net = fixtures::example_net();
    let graph = PreferenceGraph::build(&net, DEFAULT_ENUMERATION_BUDGET).unwrap();
    assert_eq!(graph.entails(&outcome(&[1, 2, 2, 2]), &outcome(&[2, 1, 3, 2])), Entailment::Incomparable);
    let worst = outcome(&[2, 2, 1, 2]);
    let mut ordering = vec![worst.clone()];
    ordering.extend(net.outcomes().filter(|o| *o != worst));
    assert!(graph.verify_consistent_ordering(&ordering).is_err());
}
