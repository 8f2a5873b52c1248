mod common;

use proptest::prelude::*;

use fislab::charfun::{cf_expected, cf_generator, cf_waxp};
use fislab::props::{
    check_additivity, check_duality, check_dummy, check_efficiency, check_symmetry,
    search_counterexample, DualityLevel, MatrixConfig, PropertyId, PropertyMatrix, Subject,
};
use fislab::random::ProblemStream;
use fislab::scores::{FisId, Template, TemplateId};
use fislab::{fixtures, CharFnId, Execution, Fis};

proptest! {
    #![proptest_config(common::config(64))]

    #[test]
    fn duality_levels_form_a_chain(p in common::problem(1..=5)) {
        for id in [FisId::S, FisId::B, FisId::J, FisId::D, FisId::H, FisId::R, FisId::A, FisId::C, FisId::V] {
            let v = check_duality(&p, id).unwrap();
            match &v.level {
                DualityLevel::Strong => prop_assert_eq!(&v.primal.values, &v.dual.values),
                DualityLevel::Equivalent(a) => {
                    prop_assert!(*a > fislab::rational::zero());
                    let scaled: Vec<_> = v.primal.values.iter().map(|x| x * a).collect();
                    prop_assert_eq!(&scaled, &v.dual.values);
                }
                _ => {}
            }
            if v.level.is_at_least_equivalent() {
                prop_assert!(v.level.is_at_least_weak());
            }
        }
    }

    #[test]
    fn template_axioms_on_random_problems(p in common::problem(1..=5)) {
        let w = cf_waxp(&p);
        let e = cf_expected(&p);
        let ss = Template::primal(TemplateId::ShapleyShubik);
        prop_assert!(!check_efficiency(&p, ss, &w).unwrap().is_violation());
        prop_assert!(!check_efficiency(&p, ss, &e).unwrap().is_violation());
        for id in [TemplateId::ShapleyShubik, TemplateId::Banzhaf, TemplateId::Johnston] {
            prop_assert!(!check_symmetry(&p, Template::primal(id), &w).unwrap().is_violation());
            prop_assert!(!check_symmetry(&p, Template::primal(id), &e).unwrap().is_violation());
        }
        for id in TemplateId::ALL {
            prop_assert!(!check_dummy(&p, Template::primal(id), &w).unwrap().is_violation());
            prop_assert!(!check_dummy(&p, Template::primal(id), &e).unwrap().is_violation());
        }
        for id in [TemplateId::ShapleyShubik, TemplateId::Banzhaf, TemplateId::DeeganPackel, TemplateId::HollerPackel, TemplateId::Andjiga] {
            prop_assert!(!check_additivity(&p, Template::primal(id), &w, &e).unwrap().is_violation());
        }
    }
}

#[test]
fn every_violation_rechecks() {
    let p = fixtures::dictator_problem();
    let g = cf_generator(&p);
    let v = check_symmetry(&p, Template::primal(TemplateId::DeeganPackel), &g).unwrap();
    assert!(v.is_violation());
    assert_eq!(v.recheck().unwrap().outcome, v.outcome);
    let q = fixtures::conjunction_problem();
    let w = cf_waxp(&q);
    let b = check_efficiency(&q, Template::primal(TemplateId::Banzhaf), &w).unwrap();
    assert!(b.is_violation());
    assert_eq!(b.recheck().unwrap().outcome, b.outcome);
}

#[test]
fn reference_duality_levels() {
    let p = fixtures::conjunction_problem();
    assert_eq!(
        check_duality(&p, FisId::S).unwrap().level,
        DualityLevel::Strong
    );
    assert_eq!(
        check_duality(&p, FisId::D).unwrap().level,
        DualityLevel::None
    );
    assert_eq!(
        check_duality(&p, FisId::J).unwrap().level,
        DualityLevel::Weak
    );
}

#[test]
fn search_is_schedule_independent() {
    let stream = ProblemStream::new(5).with_features(2..=5);
    for (property, fis) in [
        (PropertyId::P05, FisId::E),
        (PropertyId::P08, FisId::E),
        (PropertyId::P05, FisId::S),
    ] {
        let subject = Subject::Fis(Fis::primal(fis));
        let seq =
            search_counterexample(property, &subject, &stream, 500, Execution::Sequential).unwrap();
        let par =
            search_counterexample(property, &subject, &stream, 500, Execution::Parallel).unwrap();
        assert_eq!(seq.as_ref().map(|c| c.index), par.as_ref().map(|c| c.index));
        if let Some(c) = seq {
            assert!(c.verdict.recheck().unwrap().is_violation());
        }
    }
}

#[test]
fn fixed_problem_search_returns_generator_witness() {
    let subject = Subject::Template {
        template: Template::primal(TemplateId::DeeganPackel),
        charfn: CharFnId::Generator,
    };
    let checks =
        fislab::props::checks_for(PropertyId::P02, &subject, &fixtures::dictator_problem())
            .unwrap();
    assert!(checks[0].run().unwrap().is_violation());
}

#[test]
fn property_matrix_agrees_with_reference_cells() {
    let config = MatrixConfig {
        seed: 0,
        budget: 100,
        exec: Execution::default(),
    };
    let m = PropertyMatrix::compute(config).unwrap();
    assert!(m.is_consistent(), "{}", m.to_text());
    for w in &m.witnesses {
        assert!(w.verdict.recheck().unwrap().is_violation());
    }
    let again = PropertyMatrix::compute(MatrixConfig {
        exec: Execution::Sequential,
        ..config
    })
    .unwrap();
    assert_eq!(m.to_json(), again.to_json());
}
