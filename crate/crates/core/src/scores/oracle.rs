//! Independent computation routes used to cross-check the template formulas.

use itertools::Itertools;
use num_bigint::BigInt;

use super::coefficient_sigma;
use crate::charfun::CharacteristicTable;
use crate::error::{Error, Result};
use crate::model::ExplanationProblem;
use crate::rational::{self, Rational};
use crate::subset::FeatureSet;

pub const MAX_ORACLE_FEATURES: usize = 8;

/// Shapley value as the average marginal contribution over all `m!` orderings.
pub fn shapley_permutation_oracle(table: &CharacteristicTable) -> Result<Vec<Rational>> {
    let m = table.n_features();
    if m > MAX_ORACLE_FEATURES {
        return Err(Error::ScaleLimit(format!(
            "permutation oracle supports at most {MAX_ORACLE_FEATURES} features, got {m}"
        )));
    }
    let mut totals = vec![rational::zero(); m];
    let mut orderings: u64 = 0;
    for order in (1..=m).permutations(m) {
        orderings += 1;
        let mut before = FeatureSet::EMPTY;
        for &i in &order {
            let after = before.with(i);
            totals[i - 1] += table.value(after) - table.value(before);
            before = after;
        }
    }
    let n = Rational::from_integer(BigInt::from(orderings));
    Ok(totals.into_iter().map(|t| t / &n).collect())
}

fn conditional_expectation(problem: &ExplanationProblem, fixed: FeatureSet) -> Rational {
    let classifier = problem.classifier();
    let points = problem.select_points(fixed);
    let total: i64 = points
        .iter()
        .map(|x| {
            i64::from(
                classifier
                    .evaluate(x)
                    .expect("selected points are in domain"),
            )
        })
        .sum();
    Rational::new(BigInt::from(total), BigInt::from(points.len()))
}

/// SHAP scores evaluated straight from the defining sum, with every
/// conditional expectation recomputed by enumerating `Υ(S; v)` and
/// re-evaluating the model body.
pub fn expected_value_shap_direct(problem: &ExplanationProblem) -> Vec<Rational> {
    let m = problem.n_features();
    (1..=m)
        .map(|i| {
            FeatureSet::all(m)
                .filter(|s| s.contains(i))
                .fold(rational::zero(), |acc, s| {
                    let delta = conditional_expectation(problem, s)
                        - conditional_expectation(problem, s.without(i));
                    acc + delta * coefficient_sigma(m, s.len()).expect("non-empty set")
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charfun::{cf_expected, cf_waxp, cf_wvg};
    use crate::fixtures;
    use crate::rational::{frac, int};
    use crate::scores::{compute_fis, template_score, Fis, FisId, Template, TemplateId};

    #[test]
    fn oracle_matches_subset_formula_on_conjunction() {
        let p = fixtures::conjunction_problem();
        let w = cf_waxp(&p);
        let s = compute_fis(Fis::primal(FisId::S), &p).unwrap();
        assert_eq!(shapley_permutation_oracle(&w).unwrap(), s.values);
    }

    #[test]
    fn oracle_on_small_cases() {
        let p = fixtures::problem("x1", 1, &[1]);
        assert_eq!(
            shapley_permutation_oracle(&cf_waxp(&p)).unwrap(),
            vec![int(1)]
        );
        let game = cf_wvg(&fixtures::small_game());
        assert_eq!(
            shapley_permutation_oracle(&game).unwrap(),
            vec![frac(2, 3), frac(1, 6), frac(1, 6)]
        );
    }

    #[test]
    fn oracle_rejects_large_tables() {
        let t = CharacteristicTable::zero(9);
        assert!(matches!(
            shapley_permutation_oracle(&t),
            Err(Error::ScaleLimit(_))
        ));
    }

    #[test]
    fn direct_shap_agrees_with_template() {
        let p = fixtures::conjunction_problem();
        let via_template = template_score(
            Template::primal(TemplateId::ShapleyShubik),
            &p,
            &cf_expected(&p),
        )
        .unwrap();
        assert_eq!(expected_value_shap_direct(&p), via_template.values);
    }
}
