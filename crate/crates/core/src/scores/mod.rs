//! Template scores, instantiated feature importance scores and their oracles.

mod coverage;
mod fis;
mod oracle;
mod template;
mod wvg;

use serde::{Serialize, Serializer};
use std::fmt;

pub use coverage::{coverage_score, coverage_set};
pub use fis::{compute_fis, compute_named, Definition, Fis, FisId};
pub use oracle::{expected_value_shap_direct, shapley_permutation_oracle, MAX_ORACLE_FEATURES};
pub use template::{
    coefficient_sigma, evaluate_template, evaluate_template_with, score_family, template_score,
    FamilyMode, Template, TemplateId,
};
pub use wvg::wvg_power_index;

use crate::charfun::CharFnId;
use crate::rational::{self, Rational};

/// Per-feature exact scores; entry `k` belongs to feature `k + 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreVector {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub template: Option<Template>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "serialize_id"
    )]
    pub charfn: Option<CharFnId>,
    #[serde(serialize_with = "serialize_values")]
    pub values: Vec<Rational>,
}

fn serialize_id<S: Serializer>(id: &Option<CharFnId>, s: S) -> Result<S::Ok, S::Error> {
    match id {
        Some(id) => s.serialize_str(&id.to_string()),
        None => s.serialize_none(),
    }
}

fn serialize_values<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(values.iter().map(rational::to_string))
}

impl ScoreVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Score of feature `i` (1-based).
    pub fn get(&self, feature: usize) -> &Rational {
        &self.values[feature - 1]
    }

    pub fn sum(&self) -> Rational {
        self.values.iter().fold(rational::zero(), |acc, v| acc + v)
    }

    /// 1-based rank of each feature: 1 + number of strictly larger scores.
    pub fn ranking(&self) -> Vec<usize> {
        self.values
            .iter()
            .map(|v| 1 + self.values.iter().filter(|w| *w > v).count())
            .collect()
    }

    pub fn rational_strings(&self) -> Vec<String> {
        self.values.iter().map(rational::to_string).collect()
    }
}

impl fmt::Display for ScoreVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} = ({})",
            self.label,
            self.rational_strings().join(", ")
        )
    }
}
