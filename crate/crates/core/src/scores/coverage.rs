use num_bigint::BigInt;

use crate::explain::{self, FamilyKind};
use crate::model::{agreement_set, ExplanationProblem, Point};
use crate::rational::Rational;
use crate::subset::FeatureSet;

/// Features whose family members cover the point with agreement set `agree`.
fn covered_features(members: &[FeatureSet], agree: FeatureSet) -> FeatureSet {
    members
        .iter()
        .filter(|s| s.is_subset(agree))
        .fold(FeatureSet::EMPTY, |acc, &s| acc.union(s))
}

/// `𝒱(i)`: points `x` such that some AXp containing `i` is a subset of
/// `ℐ(x; v)`, in lexicographic order.
pub fn coverage_set(problem: &ExplanationProblem, feature: usize) -> Vec<Point> {
    let axps = explain::enumerate_axps(problem);
    let members: Vec<FeatureSet> = axps.containing(feature).collect();
    let v = &problem.instance().point;
    problem
        .select_points(FeatureSet::EMPTY)
        .into_iter()
        .filter(|x| {
            let agree = agreement_set(x, v);
            members.iter().any(|s| s.is_subset(agree))
        })
        .collect()
}

/// `|𝒱(i)| / |𝔽|` for every feature, using the given family (AXps for the
/// primal score, CXps for its dual).
pub fn coverage_score(problem: &ExplanationProblem, kind: FamilyKind) -> Vec<Rational> {
    let fam = explain::family(problem, kind);
    let classifier = problem.classifier();
    let m = problem.n_features();
    let reference = problem.rank();
    let v_idx: Vec<usize> = (1..=m)
        .map(|i| classifier.value_index(reference, i))
        .collect();
    let mut counts = vec![0u64; m];
    for rank in 0..classifier.n_points() {
        let agree = FeatureSet::from_features(
            (1..=m).filter(|&i| classifier.value_index(rank, i) == v_idx[i - 1]),
        );
        for i in covered_features(&fam.members, agree).iter() {
            counts[i - 1] += 1;
        }
    }
    let total = BigInt::from(classifier.n_points());
    counts
        .into_iter()
        .map(|c| Rational::new(BigInt::from(c), total.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn coverage_sets_on_conjunction() {
        let p = fixtures::conjunction_problem();
        assert_eq!(coverage_set(&p, 1).len(), 5);
        let c2 = coverage_set(&p, 2);
        assert_eq!(c2.len(), 4);
        assert!(c2.iter().all(|x| x[0] == 1 && x[1] == 1));
    }

    #[test]
    fn irrelevant_feature_covers_nothing() {
        let p = fixtures::dictator_problem();
        assert!(coverage_set(&p, 2).is_empty());
        assert_eq!(coverage_set(&p, 1).len(), 2);
    }
}
