use serde::{Serialize, Serializer};
use std::fmt;
use std::sync::Arc;

use super::Check;
use super::PropertyVerdict;
use crate::error::Result;
use crate::model::ExplanationProblem;
use crate::rational::{self, Rational};
use crate::scores::{compute_fis, Fis, FisId, ScoreVector};

/// How closely a dual score tracks its primal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DualityLevel {
    /// Different feature orderings.
    None,
    /// Same total preorder on features, ties included.
    Weak,
    /// `dual = α · primal` for a single `α > 0`.
    Equivalent(Rational),
    /// `dual = primal`.
    Strong,
}

impl DualityLevel {
    /// Position in the chain `none < weak < equivalent < strong`.
    pub fn rank(&self) -> u8 {
        match self {
            DualityLevel::None => 0,
            DualityLevel::Weak => 1,
            DualityLevel::Equivalent(_) => 2,
            DualityLevel::Strong => 3,
        }
    }

    pub fn is_at_least_weak(&self) -> bool {
        self.rank() >= 1
    }

    pub fn is_at_least_equivalent(&self) -> bool {
        self.rank() >= 2
    }

    /// The scaling factor; 1 for strong duality.
    pub fn alpha(&self) -> Option<Rational> {
        match self {
            DualityLevel::Equivalent(a) => Some(a.clone()),
            DualityLevel::Strong => Some(rational::one()),
            _ => None,
        }
    }
}

impl fmt::Display for DualityLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DualityLevel::None => f.write_str("none"),
            DualityLevel::Weak => f.write_str("weak"),
            DualityLevel::Equivalent(a) => write!(f, "equivalent({})", rational::to_string(a)),
            DualityLevel::Strong => f.write_str("strong"),
        }
    }
}

impl Serialize for DualityLevel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Comparison of a score with its dual on one problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualityVerdict {
    pub level: DualityLevel,
    pub primal: ScoreVector,
    pub dual: ScoreVector,
}

/// The single `α > 0` with `dual = α · primal`, if there is one.
fn common_ratio(primal: &[Rational], dual: &[Rational]) -> Option<Rational> {
    let zero = rational::zero();
    let mut alpha: Option<Rational> = None;
    for (p, d) in primal.iter().zip(dual) {
        match (p == &zero, d == &zero) {
            (true, true) => continue,
            (false, false) => {
                let r = d / p;
                if r <= zero || alpha.as_ref().is_some_and(|a| *a != r) {
                    return None;
                }
                alpha = Some(r);
            }
            _ => return None,
        }
    }
    alpha
}

fn same_preorder(primal: &[Rational], dual: &[Rational]) -> bool {
    let m = primal.len();
    (0..m).all(|i| (i + 1..m).all(|j| primal[i].cmp(&primal[j]) == dual[i].cmp(&dual[j])))
}

/// Classifies the relation between two score vectors over the same features.
pub fn classify(primal: &[Rational], dual: &[Rational]) -> DualityLevel {
    if primal == dual {
        DualityLevel::Strong
    } else if let Some(alpha) = common_ratio(primal, dual) {
        DualityLevel::Equivalent(alpha)
    } else if same_preorder(primal, dual) {
        DualityLevel::Weak
    } else {
        DualityLevel::None
    }
}

/// P09: computes the primal and dual scores and grades their relation.
pub fn check_duality(problem: &ExplanationProblem, fis: FisId) -> Result<DualityVerdict> {
    let primal = compute_fis(Fis::primal(fis), problem)?;
    let dual = compute_fis(Fis::dual_of(fis), problem)?;
    Ok(DualityVerdict {
        level: classify(&primal.values, &dual.values),
        primal,
        dual,
    })
}

/// P09 as a pass/fail check: passes when the level reaches `required`.
pub fn check_duality_at_least(
    problem: &ExplanationProblem,
    fis: FisId,
    required: DualityLevel,
) -> Result<PropertyVerdict> {
    Check::Duality {
        problem: Arc::new(problem.clone()),
        fis: Fis::primal(fis),
        required,
    }
    .run()
}
