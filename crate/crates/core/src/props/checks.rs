use std::collections::BTreeMap;
use std::sync::Arc;

use super::{check_duality, Check, DualityLevel, Outcome, PropertyVerdict, Witness};
use crate::charfun::CharacteristicTable;
use crate::error::{Error, Result};
use crate::explain;
use crate::model::{ExplanationProblem, Label};
use crate::rational::{self, Rational};
use crate::scores::{compute_fis, template_score, Fis, Template};
use crate::subset::FeatureSet;

fn shared(problem: &ExplanationProblem) -> Arc<ExplanationProblem> {
    Arc::new(problem.clone())
}

fn shared_table(table: &CharacteristicTable) -> Arc<CharacteristicTable> {
    Arc::new(table.clone())
}

/// P01: `Σ_i score(i) = ν(ℱ) − ν(∅)`.
pub fn check_efficiency(
    problem: &ExplanationProblem,
    template: Template,
    table: &CharacteristicTable,
) -> Result<PropertyVerdict> {
    Check::Efficiency {
        problem: shared(problem),
        template,
        table: shared_table(table),
    }
    .run()
}

/// P02: features symmetric under the table receive equal scores.
pub fn check_symmetry(
    problem: &ExplanationProblem,
    template: Template,
    table: &CharacteristicTable,
) -> Result<PropertyVerdict> {
    Check::Symmetry {
        problem: shared(problem),
        template,
        table: shared_table(table),
    }
    .run()
}

/// P03: the score of `ν_1 + ν_2` is the sum of the scores.
pub fn check_additivity(
    problem: &ExplanationProblem,
    template: Template,
    left: &CharacteristicTable,
    right: &CharacteristicTable,
) -> Result<PropertyVerdict> {
    Check::Additivity {
        problem: shared(problem),
        template,
        left: shared_table(left),
        right: shared_table(right),
    }
    .run()
}

/// P04: a feature with `ν(S ∪ {i}) = ν(S)` for every `S` scores 0.
pub fn check_dummy(
    problem: &ExplanationProblem,
    template: Template,
    table: &CharacteristicTable,
) -> Result<PropertyVerdict> {
    Check::Dummy {
        problem: shared(problem),
        template,
        table: shared_table(table),
    }
    .run()
}

/// P05: `𝔸_i ⊆ 𝔸_j` implies `score(i) ≤ score(j)`.
pub fn check_minimal_monotonicity(
    problem: &ExplanationProblem,
    fis: Fis,
) -> Result<PropertyVerdict> {
    Check::MinimalMonotonicity {
        problem: shared(problem),
        fis,
    }
    .run()
}

/// P06: the score total `γ = Σ_i score(i)`.
pub fn gamma_value(problem: &ExplanationProblem, fis: Fis) -> Result<Rational> {
    Ok(compute_fis(fis, problem)?.sum())
}

/// P07: scores are unchanged when classes are renamed by `sigma`.
pub fn check_class_relabeling(
    problem: &ExplanationProblem,
    fis: Fis,
    sigma: &BTreeMap<Label, Label>,
) -> Result<PropertyVerdict> {
    // Reject invalid bijections before building the check.
    problem.classifier().relabel(sigma)?;
    Check::ClassRelabeling {
        problem: shared(problem),
        fis,
        sigma: sigma.clone(),
    }
    .run()
}

/// P08: `score(i) ≠ 0` exactly for relevant features.
pub fn check_relevancy_consistency(
    problem: &ExplanationProblem,
    fis: Fis,
) -> Result<PropertyVerdict> {
    Check::RelevancyConsistency {
        problem: shared(problem),
        fis,
    }
    .run()
}

/// The relabeling sending each class to the next one in sorted order, which
/// swaps the two classes of a boolean classifier.
pub fn rotation(problem: &ExplanationProblem) -> BTreeMap<Label, Label> {
    let classes = problem.classifier().classes();
    classes
        .iter()
        .enumerate()
        .map(|(k, &c)| (c, classes[(k + 1) % classes.len()]))
        .collect()
}

/// The same check over a different problem instance.
pub(super) fn with_problem(check: &Check, problem: Arc<ExplanationProblem>) -> Check {
    let mut copy = check.clone();
    match &mut copy {
        Check::Efficiency { problem: p, .. }
        | Check::Symmetry { problem: p, .. }
        | Check::Additivity { problem: p, .. }
        | Check::Dummy { problem: p, .. }
        | Check::MinimalMonotonicity { problem: p, .. }
        | Check::ClassRelabeling { problem: p, .. }
        | Check::RelevancyConsistency { problem: p, .. }
        | Check::Duality { problem: p, .. } => *p = problem,
    }
    copy
}

fn outcome(witness: Option<Witness>) -> Outcome {
    witness.map_or(Outcome::NoViolationFound, Outcome::Violated)
}

/// Whether `ν(S ∪ {i}) = ν(S ∪ {j})` for every `S ⊆ ℱ ∖ {i, j}`.
fn symmetric(table: &CharacteristicTable, i: usize, j: usize) -> bool {
    let m = table.n_features();
    let pair = FeatureSet::from_features([i, j]);
    FeatureSet::all(m)
        .filter(|s| !s.intersects(pair))
        .all(|s| table.value(s.with(i)) == table.value(s.with(j)))
}

fn is_dummy(table: &CharacteristicTable, i: usize) -> bool {
    FeatureSet::all(table.n_features())
        .filter(|s| !s.contains(i))
        .all(|s| table.value(s.with(i)) == table.value(s))
}

pub(super) fn evaluate(check: &Check) -> Result<Outcome> {
    match check {
        Check::Efficiency {
            problem,
            template,
            table,
        } => {
            let sv = template_score(*template, problem, table)?;
            let m = problem.n_features();
            let sum = sv.sum();
            let expected = table.value(FeatureSet::full(m)) - table.value(FeatureSet::EMPTY);
            Ok(outcome(
                (sum != expected).then_some(Witness::Efficiency { sum, expected }),
            ))
        }
        Check::Symmetry {
            problem,
            template,
            table,
        } => {
            let sv = template_score(*template, problem, table)?;
            let m = problem.n_features();
            let witness = (1..=m)
                .flat_map(|i| (i + 1..=m).map(move |j| (i, j)))
                .find(|&(i, j)| sv.get(i) != sv.get(j) && symmetric(table, i, j))
                .map(|(i, j)| Witness::Symmetry {
                    i,
                    j,
                    score_i: sv.get(i).clone(),
                    score_j: sv.get(j).clone(),
                });
            Ok(outcome(witness))
        }
        Check::Additivity {
            problem,
            template,
            left,
            right,
        } => {
            let combined = template_score(*template, problem, &left.sum(right)?)?;
            let a = template_score(*template, problem, left)?;
            let b = template_score(*template, problem, right)?;
            let witness = (1..=problem.n_features()).find_map(|i| {
                let separate = a.get(i) + b.get(i);
                (combined.get(i) != &separate).then(|| Witness::Additivity {
                    feature: i,
                    combined: combined.get(i).clone(),
                    separate,
                })
            });
            Ok(outcome(witness))
        }
        Check::Dummy {
            problem,
            template,
            table,
        } => {
            let sv = template_score(*template, problem, table)?;
            let witness = (1..=problem.n_features())
                .find(|&i| sv.get(i) != &rational::zero() && is_dummy(table, i))
                .map(|i| Witness::Dummy {
                    feature: i,
                    score: sv.get(i).clone(),
                });
            Ok(outcome(witness))
        }
        Check::MinimalMonotonicity { problem, fis } => {
            let sv = compute_fis(*fis, problem)?;
            let axps = explain::enumerate_axps(problem);
            let m = problem.n_features();
            let members: Vec<Vec<FeatureSet>> =
                (1..=m).map(|i| axps.containing(i).collect()).collect();
            let witness = (1..=m)
                .flat_map(|i| (1..=m).filter(move |&j| j != i).map(move |j| (i, j)))
                .find(|&(i, j)| {
                    sv.get(i) > sv.get(j)
                        && members[i - 1].iter().all(|s| members[j - 1].contains(s))
                })
                .map(|(i, j)| Witness::MinimalMonotonicity {
                    i,
                    j,
                    score_i: sv.get(i).clone(),
                    score_j: sv.get(j).clone(),
                });
            Ok(outcome(witness))
        }
        Check::ClassRelabeling {
            problem,
            fis,
            sigma,
        } => {
            let before = compute_fis(*fis, problem)?;
            let after = compute_fis(*fis, &problem.relabeled(sigma)?)?;
            let witness = (1..=problem.n_features())
                .find(|&i| before.get(i) != after.get(i))
                .map(|i| Witness::ClassRelabeling {
                    feature: i,
                    before: before.get(i).clone(),
                    after: after.get(i).clone(),
                });
            Ok(outcome(witness))
        }
        Check::RelevancyConsistency { problem, fis } => {
            let sv = compute_fis(*fis, problem)?;
            let relevant = explain::relevant_features(problem);
            let witness = (1..=problem.n_features())
                .find(|&i| (sv.get(i) != &rational::zero()) != relevant.contains(i))
                .map(|i| Witness::RelevancyConsistency {
                    feature: i,
                    relevant: relevant.contains(i),
                    score: sv.get(i).clone(),
                });
            Ok(outcome(witness))
        }
        Check::Duality {
            problem,
            fis,
            required,
        } => {
            if fis.dual {
                return Err(Error::Contract(format!(
                    "duality is checked on primal scores, got {fis}"
                )));
            }
            let verdict = check_duality(problem, fis.id)?;
            let witness = (verdict.level.rank() < required.rank()).then(|| Witness::Duality {
                required: required.clone(),
                found: verdict.level.clone(),
            });
            Ok(outcome(witness))
        }
    }
}

/// Lowest admissible level for a [`Check::Duality`] to pass.
pub(super) fn default_duality_requirement() -> DualityLevel {
    DualityLevel::Equivalent(rational::one())
}
