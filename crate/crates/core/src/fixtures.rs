//! Small reference problems used throughout tests, the repro harness and the
//! property audit.

use std::sync::Arc;

use crate::model::{Classifier, ExplanationProblem, WeightedVotingGame};
use crate::subset::FeatureSet;

/// Boolean problem from an expression over `m` features at `point`.
pub fn problem(expr: &str, m: usize, point: &[i64]) -> ExplanationProblem {
    let classifier = Classifier::from_expression(expr, Some(m)).expect("fixture model is valid");
    ExplanationProblem::new(Arc::new(classifier), point.to_vec(), None)
        .expect("fixture instance is valid")
}

pub const CONJUNCTION_EXPR: &str = "x1 & (x2 | x3 & x4)";

/// `κ = x1 ∧ (x2 ∨ (x3 ∧ x4))` at `v = (1,1,1,1)`.
pub fn conjunction_problem() -> ExplanationProblem {
    problem(CONJUNCTION_EXPR, 4, &[1, 1, 1, 1])
}

/// `κ(x1, x2) = x1` at `v = (1,1)`.
pub fn dictator_problem() -> ExplanationProblem {
    problem("x1", 2, &[1, 1])
}

fn family(sets: &[&[usize]]) -> Vec<FeatureSet> {
    sets.iter()
        .map(|s| FeatureSet::from_features(s.iter().copied()))
        .collect()
}

/// AXp family where one singleton competes with two large explanations.
pub fn singleton_versus_large_family() -> (usize, Vec<FeatureSet>) {
    (7, family(&[&[1], &[2, 3, 4, 5, 6], &[2, 3, 4, 5, 7]]))
}

/// AXp family where a pair competes with many size-three explanations sharing
/// feature 2. The listing repeats `{2,5,6}`; as a set family it is kept once.
pub fn pair_versus_many_triples_family() -> (usize, Vec<FeatureSet>) {
    (
        8,
        family(&[
            &[1, 8],
            &[2, 3, 4],
            &[2, 3, 5],
            &[2, 3, 6],
            &[2, 3, 7],
            &[2, 4, 5],
            &[2, 4, 6],
            &[2, 4, 7],
            &[2, 5, 6],
            &[2, 5, 7],
            &[2, 5, 6],
        ]),
    )
}

/// `[3; 2,1,1]`
pub fn small_game() -> WeightedVotingGame {
    WeightedVotingGame::new(3, vec![2, 1, 1]).expect("valid game")
}
