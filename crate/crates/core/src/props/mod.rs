//! Audit of feature importance scores against properties P01 to P09.
//!
//! Properties are universally quantified, so a check on one problem can
//! only refute. A passing check is reported as "no violation found".

mod checks;
mod duality;
mod matrix;
mod search;

use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

pub use checks::{
    check_additivity, check_class_relabeling, check_dummy, check_efficiency,
    check_minimal_monotonicity, check_relevancy_consistency, check_symmetry, gamma_value, rotation,
};
pub use duality::{check_duality, check_duality_at_least, DualityLevel, DualityVerdict};
pub use matrix::{
    pinned_expectation, Cell, Expectation, MatrixConfig, MatrixRow, PropertyMatrix, WitnessRecord,
};
pub use search::{checks_for, search_counterexample, Counterexample, Subject};

use crate::charfun::CharacteristicTable;
use crate::error::{Error, Result};
use crate::model::{ExplanationProblem, Label};
use crate::rational::{self, Rational};
use crate::scores::{Fis, Template};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PropertyId {
    P01,
    P02,
    P03,
    P04,
    P05,
    P06,
    P07,
    P08,
    P09,
}

impl PropertyId {
    pub const ALL: [PropertyId; 9] = [
        PropertyId::P01,
        PropertyId::P02,
        PropertyId::P03,
        PropertyId::P04,
        PropertyId::P05,
        PropertyId::P06,
        PropertyId::P07,
        PropertyId::P08,
        PropertyId::P09,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PropertyId::P01 => "efficiency",
            PropertyId::P02 => "symmetry",
            PropertyId::P03 => "additivity",
            PropertyId::P04 => "dummy player",
            PropertyId::P05 => "minimal monotonicity",
            PropertyId::P06 => "gamma-efficiency",
            PropertyId::P07 => "class relabeling independence",
            PropertyId::P08 => "relevancy consistency",
            PropertyId::P09 => "duality",
        }
    }

    /// Properties stated for template scores over arbitrary tables.
    pub fn is_template_level(self) -> bool {
        matches!(
            self,
            PropertyId::P01 | PropertyId::P02 | PropertyId::P03 | PropertyId::P04
        )
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for PropertyId {
    type Err = Error;

    /// Accepts `P05`, `p5` and `5`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let digits = t
            .strip_prefix('P')
            .or_else(|| t.strip_prefix('p'))
            .unwrap_or(t);
        match digits.parse::<usize>() {
            Ok(n @ 1..=9) => Ok(PropertyId::ALL[n - 1]),
            _ => Err(Error::UnknownId(s.to_string())),
        }
    }
}

/// Concrete data showing a property violation.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `Σ_i score(i) ≠ ν(ℱ) − ν(∅)`.
    Efficiency {
        #[serde(serialize_with = "rational::serialize")]
        sum: Rational,
        #[serde(serialize_with = "rational::serialize")]
        expected: Rational,
    },
    /// Features `i` and `j` are symmetric under the table but scored apart.
    Symmetry {
        i: usize,
        j: usize,
        #[serde(serialize_with = "rational::serialize")]
        score_i: Rational,
        #[serde(serialize_with = "rational::serialize")]
        score_j: Rational,
    },
    /// The score of the summed table differs from the summed scores.
    Additivity {
        feature: usize,
        #[serde(serialize_with = "rational::serialize")]
        combined: Rational,
        #[serde(serialize_with = "rational::serialize")]
        separate: Rational,
    },
    /// A dummy feature receives a non-zero score.
    Dummy {
        feature: usize,
        #[serde(serialize_with = "rational::serialize")]
        score: Rational,
    },
    /// `𝔸_i ⊆ 𝔸_j` yet `score(i) > score(j)`.
    MinimalMonotonicity {
        i: usize,
        j: usize,
        #[serde(serialize_with = "rational::serialize")]
        score_i: Rational,
        #[serde(serialize_with = "rational::serialize")]
        score_j: Rational,
    },
    /// Relabeling the classes changes the score of `feature`.
    ClassRelabeling {
        feature: usize,
        #[serde(serialize_with = "rational::serialize")]
        before: Rational,
        #[serde(serialize_with = "rational::serialize")]
        after: Rational,
    },
    /// `score(feature) ≠ 0` disagrees with the relevancy of `feature`.
    RelevancyConsistency {
        feature: usize,
        relevant: bool,
        #[serde(serialize_with = "rational::serialize")]
        score: Rational,
    },
    /// Primal and dual scores relate more weakly than required.
    Duality {
        required: DualityLevel,
        found: DualityLevel,
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = rational::to_string;
        match self {
            Witness::Efficiency { sum, expected } => {
                write!(
                    f,
                    "sum of scores {} != nu(F) - nu(empty) = {}",
                    r(sum),
                    r(expected)
                )
            }
            Witness::Symmetry {
                i,
                j,
                score_i,
                score_j,
            } => write!(
                f,
                "features {i} and {j} are symmetric but score {} vs {}",
                r(score_i),
                r(score_j)
            ),
            Witness::Additivity {
                feature,
                combined,
                separate,
            } => write!(
                f,
                "feature {feature}: score of summed table {} != sum of scores {}",
                r(combined),
                r(separate)
            ),
            Witness::Dummy { feature, score } => {
                write!(f, "dummy feature {feature} scores {}", r(score))
            }
            Witness::MinimalMonotonicity {
                i,
                j,
                score_i,
                score_j,
            } => write!(
                f,
                "AXps of {i} are AXps of {j} but score {} > {}",
                r(score_i),
                r(score_j)
            ),
            Witness::ClassRelabeling {
                feature,
                before,
                after,
            } => write!(
                f,
                "feature {feature} scores {} before relabeling and {} after",
                r(before),
                r(after)
            ),
            Witness::RelevancyConsistency {
                feature,
                relevant,
                score,
            } => write!(
                f,
                "feature {feature} is {} but scores {}",
                if *relevant { "relevant" } else { "irrelevant" },
                r(score)
            ),
            Witness::Duality { required, found } => {
                write!(f, "duality level {found} is weaker than {required}")
            }
        }
    }
}

/// Result of one check.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", content = "witness", rename_all = "snake_case")]
pub enum Outcome {
    NoViolationFound,
    Violated(Witness),
}

impl Outcome {
    pub fn is_violation(&self) -> bool {
        matches!(self, Outcome::Violated(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Outcome::Violated(w) => Some(w),
            Outcome::NoViolationFound => None,
        }
    }
}

/// The inputs of a check, kept so that any verdict can be re-evaluated.
#[derive(Debug, Clone)]
pub enum Check {
    Efficiency {
        problem: Arc<ExplanationProblem>,
        template: Template,
        table: Arc<CharacteristicTable>,
    },
    Symmetry {
        problem: Arc<ExplanationProblem>,
        template: Template,
        table: Arc<CharacteristicTable>,
    },
    Additivity {
        problem: Arc<ExplanationProblem>,
        template: Template,
        left: Arc<CharacteristicTable>,
        right: Arc<CharacteristicTable>,
    },
    Dummy {
        problem: Arc<ExplanationProblem>,
        template: Template,
        table: Arc<CharacteristicTable>,
    },
    MinimalMonotonicity {
        problem: Arc<ExplanationProblem>,
        fis: Fis,
    },
    ClassRelabeling {
        problem: Arc<ExplanationProblem>,
        fis: Fis,
        sigma: BTreeMap<Label, Label>,
    },
    RelevancyConsistency {
        problem: Arc<ExplanationProblem>,
        fis: Fis,
    },
    Duality {
        problem: Arc<ExplanationProblem>,
        fis: Fis,
        required: DualityLevel,
    },
}

impl Check {
    pub fn property(&self) -> PropertyId {
        match self {
            Check::Efficiency { .. } => PropertyId::P01,
            Check::Symmetry { .. } => PropertyId::P02,
            Check::Additivity { .. } => PropertyId::P03,
            Check::Dummy { .. } => PropertyId::P04,
            Check::MinimalMonotonicity { .. } => PropertyId::P05,
            Check::ClassRelabeling { .. } => PropertyId::P07,
            Check::RelevancyConsistency { .. } => PropertyId::P08,
            Check::Duality { .. } => PropertyId::P09,
        }
    }

    pub fn problem(&self) -> &Arc<ExplanationProblem> {
        match self {
            Check::Efficiency { problem, .. }
            | Check::Symmetry { problem, .. }
            | Check::Additivity { problem, .. }
            | Check::Dummy { problem, .. }
            | Check::MinimalMonotonicity { problem, .. }
            | Check::ClassRelabeling { problem, .. }
            | Check::RelevancyConsistency { problem, .. }
            | Check::Duality { problem, .. } => problem,
        }
    }

    /// Human-readable name of the score or template under test.
    pub fn subject(&self) -> String {
        match self {
            Check::Efficiency {
                template, table, ..
            }
            | Check::Symmetry {
                template, table, ..
            }
            | Check::Dummy {
                template, table, ..
            } => format!("{template} with {}", table.id()),
            Check::Additivity {
                template,
                left,
                right,
                ..
            } => format!("{template} with {} + {}", left.id(), right.id()),
            Check::MinimalMonotonicity { fis, .. }
            | Check::ClassRelabeling { fis, .. }
            | Check::RelevancyConsistency { fis, .. }
            | Check::Duality { fis, .. } => fis.to_string(),
        }
    }

    /// Evaluates the property on the stored inputs.
    pub fn run(&self) -> Result<PropertyVerdict> {
        let outcome = checks::evaluate(self)?;
        Ok(PropertyVerdict {
            property: self.property(),
            subject: self.subject(),
            outcome,
            check: self.clone(),
        })
    }
}

/// A property verdict on one problem, with the inputs that produced it.
#[derive(Debug, Clone)]
pub struct PropertyVerdict {
    pub property: PropertyId,
    pub subject: String,
    pub outcome: Outcome,
    pub check: Check,
}

impl PropertyVerdict {
    pub fn is_violation(&self) -> bool {
        self.outcome.is_violation()
    }

    /// Re-evaluates the stored inputs on a fresh copy of the problem, so no
    /// memoized explanation family is reused.
    pub fn recheck(&self) -> Result<PropertyVerdict> {
        let problem = self.check.problem();
        let copy = Arc::new(ExplanationProblem::at_rank(
            Arc::clone(problem.classifier()),
            problem.rank(),
        ));
        checks::with_problem(&self.check, copy).run()
    }
}

impl fmt::Display for PropertyVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let point = &self.check.problem().instance().point;
        let point: Vec<String> = point.iter().map(i64::to_string).collect();
        match &self.outcome {
            Outcome::NoViolationFound => write!(
                f,
                "{} {} at v=({}): no violation found",
                self.property,
                self.subject,
                point.join(",")
            ),
            Outcome::Violated(w) => write!(
                f,
                "{} {} at v=({}): VIOLATED, {w}",
                self.property,
                self.subject,
                point.join(",")
            ),
        }
    }
}

impl Serialize for PropertyVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let problem = self.check.problem();
        let mut st = s.serialize_struct("PropertyVerdict", 5)?;
        st.serialize_field("property", &self.property)?;
        st.serialize_field("subject", &self.subject)?;
        st.serialize_field("outcome", &self.outcome)?;
        st.serialize_field("model", &problem.classifier().to_document())?;
        st.serialize_field("point", &problem.instance().point)?;
        st.end()
    }
}
