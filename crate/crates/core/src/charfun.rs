//! Materialized characteristic-function tables over all `2^m` subsets.

use num_traits::{Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::explain::{self, lattice};
use crate::model::{ExplanationProblem, WeightedVotingGame};
use crate::rational::{self, Rational};
use crate::subset::FeatureSet;

/// Which characteristic function produced a table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum CharFnId {
    /// Conditional expected value of the classifier.
    Expected,
    /// Fraction of points matching the predicted class.
    Similarity,
    /// Indicator of AXps.
    Axp,
    /// Indicator of CXps (dual of `Axp`).
    Cxp,
    /// Indicator of WAXps.
    Waxp,
    /// Indicator of WCXps (dual of `Waxp`).
    Wcxp,
    /// Indicator of generator sets.
    Generator,
    /// Indicator of winning coalitions of a voting game.
    Wvg,
    /// Indicator of membership in an injected family.
    Family,
    Sum(Box<CharFnId>, Box<CharFnId>),
    Scaled(Box<CharFnId>),
    Custom(String),
}

impl CharFnId {
    /// The characteristic function obtained by swapping (W)AXp references for
    /// (W)CXp ones. `None` when the function does not reference explanations.
    pub fn dual(&self) -> Option<CharFnId> {
        match self {
            CharFnId::Axp => Some(CharFnId::Cxp),
            CharFnId::Cxp => Some(CharFnId::Axp),
            CharFnId::Waxp => Some(CharFnId::Wcxp),
            CharFnId::Wcxp => Some(CharFnId::Waxp),
            CharFnId::Sum(a, b) => Some(CharFnId::Sum(Box::new(a.dual()?), Box::new(b.dual()?))),
            _ => None,
        }
    }
}

impl fmt::Display for CharFnId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharFnId::Expected => f.write_str("CF_E"),
            CharFnId::Similarity => f.write_str("CF_M"),
            CharFnId::Axp => f.write_str("CF_A"),
            CharFnId::Cxp => f.write_str("CF_A_DUAL"),
            CharFnId::Waxp => f.write_str("CF_W"),
            CharFnId::Wcxp => f.write_str("CF_W_DUAL"),
            CharFnId::Generator => f.write_str("CF_G"),
            CharFnId::Wvg => f.write_str("CF_WVG"),
            CharFnId::Family => f.write_str("CF_FAMILY"),
            CharFnId::Sum(a, b) => write!(f, "CF_SUM({a},{b})"),
            CharFnId::Scaled(a) => write!(f, "CF_SCALED({a})"),
            CharFnId::Custom(name) => write!(f, "CF_CUSTOM({name})"),
        }
    }
}

/// Exact values `ν(S)` for every mask `S ⊆ {1..m}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicTable {
    id: CharFnId,
    n_features: usize,
    values: Vec<Rational>,
}

impl CharacteristicTable {
    pub fn from_values(id: CharFnId, n_features: usize, values: Vec<Rational>) -> Result<Self> {
        if values.len() != 1usize << n_features {
            return Err(Error::Contract(format!(
                "{} values for {n_features} features",
                values.len()
            )));
        }
        Ok(CharacteristicTable {
            id,
            n_features,
            values,
        })
    }

    /// Builds `ν` by evaluating `f` on every mask.
    pub fn build<F>(id: CharFnId, n_features: usize, f: F) -> Self
    where
        F: Fn(FeatureSet) -> Rational + Sync + Send,
    {
        Self::build_with(exec::for_size(1usize << n_features), id, n_features, f)
    }

    /// [`CharacteristicTable::build`] with an explicit schedule.
    pub fn build_with<F>(exec: Execution, id: CharFnId, n_features: usize, f: F) -> Self
    where
        F: Fn(FeatureSet) -> Rational + Sync + Send,
    {
        let n = 1usize << n_features;
        let values = exec.map_range(n, |mask| f(FeatureSet::from_mask(mask as u32)));
        CharacteristicTable {
            id,
            n_features,
            values,
        }
    }

    pub fn indicator<F>(id: CharFnId, n_features: usize, pred: F) -> Self
    where
        F: Fn(FeatureSet) -> bool + Sync + Send,
    {
        Self::build(id, n_features, |s| {
            if pred(s) {
                rational::one()
            } else {
                rational::zero()
            }
        })
    }

    pub fn zero(n_features: usize) -> Self {
        Self::build(CharFnId::Custom("zero".into()), n_features, |_| {
            rational::zero()
        })
    }

    pub fn id(&self) -> &CharFnId {
        &self.id
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, set: FeatureSet) -> &Rational {
        &self.values[set.index()]
    }

    /// `Δ_i(S) = ν(S) − ν(S∖{i})`, requiring `i ∈ S`.
    pub fn delta_i(&self, feature: usize, set: FeatureSet) -> Result<Rational> {
        if !set.contains(feature) {
            return Err(Error::Contract(format!(
                "feature {feature} is not in {set}"
            )));
        }
        Ok(self.delta_unchecked(feature, set))
    }

    pub(crate) fn delta_unchecked(&self, feature: usize, set: FeatureSet) -> Rational {
        self.value(set) - self.value(set.without(feature))
    }

    /// `Δ(S) = Σ_{i∈S} Δ_i(S)`.
    pub fn delta_total(&self, set: FeatureSet) -> Rational {
        set.iter()
            .map(|i| self.delta_unchecked(i, set))
            .fold(rational::zero(), |acc, d| acc + d)
    }

    /// Pointwise sum `ν₁ + ν₂`.
    pub fn sum(&self, other: &CharacteristicTable) -> Result<Self> {
        if self.n_features != other.n_features {
            return Err(Error::DimensionMismatch {
                left: self.n_features,
                right: other.n_features,
            });
        }
        Ok(CharacteristicTable {
            id: CharFnId::Sum(Box::new(self.id.clone()), Box::new(other.id.clone())),
            n_features: self.n_features,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        CharacteristicTable {
            id: CharFnId::Scaled(Box::new(self.id.clone())),
            n_features: self.n_features,
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn is_monotone(&self) -> bool {
        FeatureSet::all(self.n_features).all(|s| {
            (1..=self.n_features)
                .filter(|&i| !s.contains(i))
                .all(|i| self.value(s) <= self.value(s.with(i)))
        })
    }

    pub fn is_boolean_valued(&self) -> bool {
        self.values
            .iter()
            .all(|v| v.is_zero() || *v == rational::one())
    }

    pub fn has_negative(&self) -> bool {
        self.values.iter().any(|v| v.is_negative())
    }

    /// `mask → "p/q"` for debugging output.
    pub fn export(&self) -> BTreeMap<u32, String> {
        self.values
            .iter()
            .enumerate()
            .map(|(mask, v)| (mask as u32, rational::to_string(v)))
            .collect()
    }
}

/// `ν_e(S) = E[κ | x_S = v_S]` under the uniform distribution.
pub fn cf_expected(problem: &ExplanationProblem) -> CharacteristicTable {
    let lat = lattice(problem);
    CharacteristicTable::build(CharFnId::Expected, problem.n_features(), |s| {
        Rational::new(lat.label_sum[s.index()].into(), lat.size[s.index()].into())
    })
}

/// `ν_m(S)`: fraction of `Υ(S; v)` predicted as `κ(v)`.
pub fn cf_similarity(problem: &ExplanationProblem) -> CharacteristicTable {
    let lat = lattice(problem);
    CharacteristicTable::build(CharFnId::Similarity, problem.n_features(), |s| {
        Rational::new(lat.matching[s.index()].into(), lat.size[s.index()].into())
    })
}

pub fn cf_axp(problem: &ExplanationProblem) -> CharacteristicTable {
    let axps = explain::enumerate_axps(problem);
    CharacteristicTable::indicator(CharFnId::Axp, problem.n_features(), |s| axps.contains(s))
}

pub fn cf_cxp(problem: &ExplanationProblem) -> CharacteristicTable {
    let cxps = explain::enumerate_cxps(problem);
    CharacteristicTable::indicator(CharFnId::Cxp, problem.n_features(), |s| cxps.contains(s))
}

pub fn cf_waxp(problem: &ExplanationProblem) -> CharacteristicTable {
    let waxp = explain::waxp_indicator(problem);
    CharacteristicTable::indicator(CharFnId::Waxp, problem.n_features(), |s| waxp[s.index()])
}

pub fn cf_wcxp(problem: &ExplanationProblem) -> CharacteristicTable {
    let wcxp = explain::wcxp_indicator(problem);
    CharacteristicTable::indicator(CharFnId::Wcxp, problem.n_features(), |s| wcxp[s.index()])
}

/// `ν_G(S) = 1` iff adding any single missing feature yields a WAXp.
pub fn cf_generator(problem: &ExplanationProblem) -> CharacteristicTable {
    let waxp = explain::waxp_indicator(problem);
    let m = problem.n_features();
    CharacteristicTable::indicator(CharFnId::Generator, m, |s| {
        (1..=m)
            .filter(|&i| !s.contains(i))
            .all(|i| waxp[s.with(i).index()])
    })
}

/// Indicator of winning coalitions.
pub fn cf_wvg(game: &WeightedVotingGame) -> CharacteristicTable {
    CharacteristicTable::indicator(CharFnId::Wvg, game.n_voters(), |s| game.is_winning(s))
}

/// Indicator of membership in `family`.
pub fn cf_family(n_features: usize, family: &[FeatureSet]) -> CharacteristicTable {
    CharacteristicTable::indicator(CharFnId::Family, n_features, |s| family.contains(&s))
}

pub fn cf_sum(a: &CharacteristicTable, b: &CharacteristicTable) -> Result<CharacteristicTable> {
    a.sum(b)
}

/// Builds the named table for `problem`.
pub fn table_for(problem: &ExplanationProblem, id: &CharFnId) -> Result<CharacteristicTable> {
    Ok(match id {
        CharFnId::Expected => cf_expected(problem),
        CharFnId::Similarity => cf_similarity(problem),
        CharFnId::Axp => cf_axp(problem),
        CharFnId::Cxp => cf_cxp(problem),
        CharFnId::Waxp => cf_waxp(problem),
        CharFnId::Wcxp => cf_wcxp(problem),
        CharFnId::Generator => cf_generator(problem),
        CharFnId::Sum(a, b) => table_for(problem, a)?.sum(&table_for(problem, b)?)?,
        other => {
            return Err(Error::Contract(format!(
                "{other} cannot be derived from an explanation problem"
            )))
        }
    })
}
