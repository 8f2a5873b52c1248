mod common;

use proptest::prelude::*;

use fislab::charfun::{cf_expected, cf_similarity, cf_waxp, CharacteristicTable};
use fislab::explain::{self, enumerate_axps};
use fislab::rational::{frac, int, pow2, Rational};
use fislab::scores::{
    compute_fis, coverage_set, evaluate_template, evaluate_template_with,
    expected_value_shap_direct, shapley_permutation_oracle, template_score, wvg_power_index, Fis,
    FisId, Template, TemplateId,
};
use fislab::{fixtures, CharFnId, Execution, FeatureSet, WeightedVotingGame};

fn table_strategy(m: usize) -> impl Strategy<Value = CharacteristicTable> {
    proptest::collection::vec((-20i64..20, 1i64..6), 1usize << m).prop_map(move |v| {
        let values: Vec<Rational> = v.into_iter().map(|(n, d)| frac(n, d)).collect();
        CharacteristicTable::from_values(CharFnId::Custom("random".into()), m, values).unwrap()
    })
}

proptest! {
    #![proptest_config(common::config(96))]

    #[test]
    fn shapley_efficiency_and_gamma(p in common::problem(1..=6)) {
        let sum = |id| compute_fis(Fis::primal(id), &p).unwrap().sum();
        prop_assert_eq!(sum(FisId::S), int(1));
        prop_assert_eq!(sum(FisId::D), int(1));
        let axps = enumerate_axps(&p);
        let sizes: usize = axps.members.iter().map(|s| s.len()).sum();
        prop_assert_eq!(sum(FisId::H), frac(sizes as i64, axps.len() as i64));
    }

    #[test]
    fn shapley_and_banzhaf_are_self_dual(p in common::problem(1..=6)) {
        for id in [FisId::S, FisId::B] {
            prop_assert_eq!(
                compute_fis(Fis::primal(id), &p).unwrap().values,
                compute_fis(Fis::dual_of(id), &p).unwrap().values
            );
        }
    }

    #[test]
    fn shap_template_matches_direct_sum(p in common::problem(1..=5)) {
        prop_assert_eq!(
            compute_fis(Fis::primal(FisId::E), &p).unwrap().values,
            expected_value_shap_direct(&p)
        );
    }

    #[test]
    fn permutation_oracle_matches_formula(t in table_strategy(5)) {
        prop_assert_eq!(
            shapley_permutation_oracle(&t).unwrap(),
            evaluate_template(TemplateId::ShapleyShubik, &t, None).unwrap()
        );
    }

    #[test]
    fn positive_scaling_scales_linear_templates(p in common::problem(2..=5), n in 1i64..9, d in 1i64..9) {
        let factor = frac(n, d);
        for table in [cf_waxp(&p), cf_expected(&p), cf_similarity(&p)] {
            let scaled = table.scale(&factor);
            for id in [
                TemplateId::ShapleyShubik,
                TemplateId::Banzhaf,
                TemplateId::DeeganPackel,
                TemplateId::HollerPackel,
                TemplateId::Andjiga,
            ] {
                let base = template_score(Template::primal(id), &p, &table).unwrap();
                let big = template_score(Template::primal(id), &p, &scaled).unwrap();
                let expected: Vec<Rational> = base.values.iter().map(|v| v * &factor).collect();
                prop_assert_eq!(&big.values, &expected);
                prop_assert_eq!(big.ranking(), base.ranking());
            }
        }
    }

    #[test]
    fn explanation_scores_vanish_exactly_on_irrelevant_features(p in common::problem(1..=6)) {
        let relevant = explain::relevant_features(&p);
        for id in [FisId::S, FisId::B, FisId::J, FisId::D, FisId::H, FisId::R, FisId::RNorm, FisId::A, FisId::C, FisId::V] {
            let sv = compute_fis(Fis::primal(id), &p).unwrap();
            for i in 1..=p.n_features() {
                let v = sv.get(i);
                prop_assert!(*v >= int(0));
                prop_assert_eq!(*v > int(0), relevant.contains(i), "{} feature {}", id, i);
            }
        }
    }

    #[test]
    fn banzhaf_counts_critical_sets(p in common::problem(1..=6)) {
        let m = p.n_features();
        let sv = compute_fis(Fis::primal(FisId::B), &p).unwrap();
        let scale = Rational::from_integer(pow2(m as u32 - 1));
        for i in 1..=m {
            let count = FeatureSet::all(m)
                .filter(|s| s.contains(i) && explain::is_critical(&p, i, *s).unwrap())
                .count();
            prop_assert_eq!(sv.get(i) * &scale, int(count as i64));
        }
    }

    #[test]
    fn sequential_and_parallel_agree(t in table_strategy(6)) {
        for id in [TemplateId::ShapleyShubik, TemplateId::Banzhaf, TemplateId::Johnston] {
            prop_assert_eq!(
                evaluate_template_with(Execution::Sequential, id, &t, None).unwrap(),
                evaluate_template_with(Execution::Parallel, id, &t, None).unwrap()
            );
        }
    }
}

#[test]
fn large_tables_agree_across_schedules() {
    let t = CharacteristicTable::build_with(
        Execution::Parallel,
        CharFnId::Custom("big".into()),
        13,
        |s| frac(i64::from(s.mask() % 7), 1 + s.len() as i64),
    );
    for id in [TemplateId::ShapleyShubik, TemplateId::Johnston] {
        assert_eq!(
            evaluate_template_with(Execution::Sequential, id, &t, None).unwrap(),
            evaluate_template(id, &t, None).unwrap()
        );
    }
}

#[test]
fn coverage_examples() {
    let p = fixtures::conjunction_problem();
    assert_eq!(coverage_set(&p, 1).len(), 5);
    assert_eq!(coverage_set(&p, 2).len(), 4);
    assert!(coverage_set(&fixtures::dictator_problem(), 2).is_empty());
}

#[test]
fn voting_game_indices() {
    let g = WeightedVotingGame::new(3, vec![2, 1, 1]).unwrap();
    assert_eq!(
        wvg_power_index(&g, TemplateId::ShapleyShubik)
            .unwrap()
            .values,
        vec![frac(2, 3), frac(1, 6), frac(1, 6)]
    );
    assert!(WeightedVotingGame::new(5, vec![2, 1, 1]).is_err());
}

#[test]
fn expected_value_table_values() {
    let p = fixtures::conjunction_problem();
    let e = cf_expected(&p);
    assert_eq!(e.value(FeatureSet::EMPTY), &frac(5, 16));
    assert_eq!(e.value(p.all_features()), &int(1));
    let m = cf_similarity(&p);
    assert_eq!(m.value(FeatureSet::from_features([1, 2])), &int(1));
    assert_eq!(m.value(FeatureSet::EMPTY), &frac(5, 16));
    let q = fislab::fixtures::problem("x1", 1, &[1]);
    assert_eq!(cf_expected(&q).value(FeatureSet::EMPTY), &frac(1, 2));
}
