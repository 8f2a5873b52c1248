#![allow(dead_code)]

use proptest::prelude::*;
use std::sync::Arc;

use fislab::model::{Classifier, ExplanationProblem, Label};

/// Non-constant boolean truth table over `m` features in `range`, with an
/// instance drawn from its points.
pub fn problem(
    range: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = ExplanationProblem> {
    range
        .prop_flat_map(|m| {
            let n = 1usize << m;
            (
                Just(m),
                proptest::collection::vec(any::<bool>(), n)
                    .prop_filter("non-constant", |t| t.iter().any(|&b| b != t[0])),
                0..n,
            )
        })
        .prop_map(|(m, table, rank)| {
            let labels: Vec<Label> = table.into_iter().map(Label::from).collect();
            let c = Classifier::from_truth_table(m, labels).expect("non-constant table");
            ExplanationProblem::at_rank(Arc::new(c), rank)
        })
}

/// Proptest configuration with regression files stored next to each test.
pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: Some(Box::new(
            proptest::test_runner::FileFailurePersistence::WithSource("regressions"),
        )),
        ..ProptestConfig::default()
    }
}
