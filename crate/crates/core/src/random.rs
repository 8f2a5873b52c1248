//! Seeded generator of random explanation problems.
//!
//! Problem `k` of a stream depends only on the stream seed and `k`, so
//! searches can evaluate problems in any order and still report the lowest
//! failing index.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::ops::RangeInclusive;
use std::sync::Arc;

use crate::model::{Classifier, ExplanationProblem, Label};

pub const DEFAULT_FEATURE_RANGE: RangeInclusive<usize> = 2..=6;

/// Uniform random non-constant boolean truth tables with a uniformly drawn
/// instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemStream {
    seed: u64,
    features: RangeInclusive<usize>,
}

impl ProblemStream {
    pub fn new(seed: u64) -> Self {
        ProblemStream {
            seed,
            features: DEFAULT_FEATURE_RANGE,
        }
    }

    /// Restricts the number of features; the range must lie within `1..=16`.
    pub fn with_features(mut self, features: RangeInclusive<usize>) -> Self {
        assert!(
            *features.start() >= 1 && *features.end() <= 16 && !features.is_empty(),
            "feature range must lie within 1..=16"
        );
        self.features = features;
        self
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn features(&self) -> RangeInclusive<usize> {
        self.features.clone()
    }

    fn rng(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    /// The classifier of problem `index`.
    pub fn classifier(&self, index: u64) -> Arc<Classifier> {
        let mut rng = self.rng(index);
        let m = rng.gen_range(self.features.clone());
        let n = 1usize << m;
        loop {
            let labels: Vec<Label> = (0..n).map(|_| Label::from(rng.gen::<bool>())).collect();
            if labels.iter().any(|&l| l != labels[0]) {
                let c = Classifier::from_truth_table(m, labels).expect("non-constant table");
                return Arc::new(c);
            }
        }
    }

    /// Problem `index`: its classifier with an instance drawn uniformly.
    pub fn problem(&self, index: u64) -> ExplanationProblem {
        let classifier = self.classifier(index);
        let mut rng = self.rng(index);
        // Skip the draws already consumed by the classifier.
        rng.set_word_pos(1u128 << 40);
        let rank = rng.gen_range(0..classifier.n_points());
        ExplanationProblem::at_rank(classifier, rank)
    }

    /// Every instance of classifier `index`, in lexicographic order.
    pub fn all_instances(&self, index: u64) -> Vec<ExplanationProblem> {
        let classifier = self.classifier(index);
        (0..classifier.n_points())
            .map(|rank| ExplanationProblem::at_rank(Arc::clone(&classifier), rank))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let a = ProblemStream::new(7);
        let b = ProblemStream::new(7);
        for k in 0..20 {
            assert_eq!(a.classifier(k).outputs(), b.classifier(k).outputs());
            assert_eq!(a.problem(k).instance(), b.problem(k).instance());
        }
        let c = ProblemStream::new(8);
        assert!((0..20).any(|k| a.classifier(k).outputs() != c.classifier(k).outputs()));
    }

    #[test]
    fn problems_are_non_constant_and_in_range() {
        let s = ProblemStream::new(0);
        for k in 0..100 {
            let c = s.classifier(k);
            assert!((2..=6).contains(&c.n_features()));
            assert!(c.outputs().iter().any(|&l| l != c.outputs()[0]));
        }
    }

    #[test]
    fn restricted_range() {
        let s = ProblemStream::new(3).with_features(3..=3);
        assert!((0..10).all(|k| s.classifier(k).n_features() == 3));
        assert_eq!(s.all_instances(0).len(), 8);
    }
}
