use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

use super::ScoreVector;
use crate::charfun::{cf_family, CharacteristicTable};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::explain::{self, FamilyKind};
use crate::model::ExplanationProblem;
use crate::rational::{self, Rational};
use crate::subset::FeatureSet;

/// The power indices generalized into template scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TemplateId {
    ShapleyShubik,
    Banzhaf,
    Johnston,
    DeeganPackel,
    HollerPackel,
    /// `max Δ_i(S)/|S|` over the family.
    Responsibility,
    /// `max Δ_i(S)/(|S|·|family|)`.
    ResponsibilityNormalized,
    Andjiga,
}

impl TemplateId {
    pub const ALL: [TemplateId; 8] = [
        TemplateId::ShapleyShubik,
        TemplateId::Banzhaf,
        TemplateId::Johnston,
        TemplateId::DeeganPackel,
        TemplateId::HollerPackel,
        TemplateId::Responsibility,
        TemplateId::ResponsibilityNormalized,
        TemplateId::Andjiga,
    ];

    pub fn short(self) -> &'static str {
        match self {
            TemplateId::ShapleyShubik => "S",
            TemplateId::Banzhaf => "B",
            TemplateId::Johnston => "J",
            TemplateId::DeeganPackel => "D",
            TemplateId::HollerPackel => "H",
            TemplateId::Responsibility => "R",
            TemplateId::ResponsibilityNormalized => "R_NORM",
            TemplateId::Andjiga => "A",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TemplateId::ShapleyShubik => "Shapley-Shubik",
            TemplateId::Banzhaf => "Banzhaf",
            TemplateId::Johnston => "Johnston",
            TemplateId::DeeganPackel => "Deegan-Packel",
            TemplateId::HollerPackel => "Holler-Packel",
            TemplateId::Responsibility => "Responsibility",
            TemplateId::ResponsibilityNormalized => "Responsibility (normalized)",
            TemplateId::Andjiga => "Andjiga",
        }
    }

    /// Family the template ranges over in its primal form.
    pub fn default_mode(self) -> FamilyMode {
        match self {
            TemplateId::ShapleyShubik | TemplateId::Banzhaf | TemplateId::Johnston => {
                FamilyMode::AllSubsets
            }
            TemplateId::DeeganPackel
            | TemplateId::HollerPackel
            | TemplateId::Responsibility
            | TemplateId::ResponsibilityNormalized => FamilyMode::Family(FamilyKind::Axp),
            TemplateId::Andjiga => FamilyMode::Family(FamilyKind::Waxp),
        }
    }

    pub fn uses_family(self) -> bool {
        self.default_mode() != FamilyMode::AllSubsets
    }
}

impl fmt::Display for TemplateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TSc_{}", self.short())
    }
}

impl FromStr for TemplateId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase().replace('-', "_");
        TemplateId::ALL
            .into_iter()
            .find(|t| {
                t.short() == key
                    || t.name().to_ascii_uppercase().replace(['-', ' '], "_") == key
                    || format!("TSC_{}", t.short()) == key
            })
            .ok_or_else(|| Error::UnknownId(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FamilyMode {
    AllSubsets,
    Family(FamilyKind),
}

impl FamilyMode {
    pub fn dual(self) -> FamilyMode {
        match self {
            FamilyMode::AllSubsets => FamilyMode::AllSubsets,
            FamilyMode::Family(k) => FamilyMode::Family(k.dual()),
        }
    }
}

/// A template together with the family it sums (or maximizes) over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Template {
    pub id: TemplateId,
    pub mode: FamilyMode,
}

impl Template {
    pub fn primal(id: TemplateId) -> Self {
        Template {
            id,
            mode: id.default_mode(),
        }
    }

    pub fn dual(self) -> Self {
        Template {
            id: self.id,
            mode: self.mode.dual(),
        }
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mode {
            FamilyMode::AllSubsets => write!(f, "{}", self.id),
            FamilyMode::Family(k) => write!(f, "{}[{k}]", self.id),
        }
    }
}

/// `ς(k) = 1 / (n · C(n−1, k−1))`.
pub fn coefficient_sigma(n_features: usize, set_size: usize) -> Result<Rational> {
    if set_size == 0 || set_size > n_features {
        return Err(Error::Contract(format!(
            "set size {set_size} outside 1..={n_features}"
        )));
    }
    let denom =
        BigInt::from(n_features) * rational::binomial(n_features as u64 - 1, set_size as u64 - 1);
    Ok(Rational::new(BigInt::from(1), denom))
}

/// Evaluates a template on `table`. Family-based templates range over
/// `family`, which must be supplied for them and is ignored otherwise.
pub fn evaluate_template(
    id: TemplateId,
    table: &CharacteristicTable,
    family: Option<&[FeatureSet]>,
) -> Result<Vec<Rational>> {
    let exec = exec::for_size((1usize << table.n_features()) * table.n_features());
    evaluate_template_with(exec, id, table, family)
}

/// [`evaluate_template`] with an explicit schedule for the subset sweeps.
pub fn evaluate_template_with(
    exec: Execution,
    id: TemplateId,
    table: &CharacteristicTable,
    family: Option<&[FeatureSet]>,
) -> Result<Vec<Rational>> {
    let m = table.n_features();
    let family = if id.uses_family() {
        Some(family.ok_or_else(|| Error::Contract(format!("{id} needs an explanation family")))?)
    } else {
        None
    };
    let values = match id {
        TemplateId::ShapleyShubik => {
            let sigma: Vec<Rational> = (1..=m)
                .map(|k| coefficient_sigma(m, k).expect("size in range"))
                .collect();
            exec.map_range(m, |k| {
                let i = k + 1;
                subsets_containing(m, i).fold(rational::zero(), |acc, s| {
                    let d = table.delta_unchecked(i, s);
                    if d.is_zero() {
                        acc
                    } else {
                        acc + d * &sigma[s.len() - 1]
                    }
                })
            })
        }
        TemplateId::Banzhaf => {
            let scale = Rational::new(BigInt::from(1), rational::pow2(m as u32 - 1));
            exec.map_range(m, |k| {
                let i = k + 1;
                let total = subsets_containing(m, i)
                    .fold(rational::zero(), |acc, s| acc + table.delta_unchecked(i, s));
                total * &scale
            })
        }
        TemplateId::Johnston => {
            let totals: Vec<Rational> = exec.map_range(1usize << m, |mask| {
                table.delta_total(FeatureSet::from_mask(mask as u32))
            });
            exec.map_range(m, |k| {
                let i = k + 1;
                subsets_containing(m, i).fold(rational::zero(), |acc, s| {
                    let total = &totals[s.index()];
                    if total.is_zero() {
                        acc
                    } else {
                        acc + table.delta_unchecked(i, s) / total
                    }
                })
            })
        }
        TemplateId::DeeganPackel | TemplateId::Andjiga => {
            let family = family.expect("checked above");
            let size = family.len();
            (1..=m)
                .map(|i| {
                    family
                        .iter()
                        .filter(|s| s.contains(i))
                        .fold(rational::zero(), |acc, &s| {
                            acc + table.delta_unchecked(i, s)
                                / Rational::from_integer(BigInt::from(s.len() * size))
                        })
                })
                .collect()
        }
        TemplateId::HollerPackel => {
            let family = family.expect("checked above");
            let size = family.len();
            (1..=m)
                .map(|i| {
                    family
                        .iter()
                        .filter(|s| s.contains(i))
                        .fold(rational::zero(), |acc, &s| {
                            acc + table.delta_unchecked(i, s)
                                / Rational::from_integer(BigInt::from(size))
                        })
                })
                .collect()
        }
        TemplateId::Responsibility | TemplateId::ResponsibilityNormalized => {
            let family = family.expect("checked above");
            let per_family = if id == TemplateId::ResponsibilityNormalized {
                family.len()
            } else {
                1
            };
            (1..=m)
                .map(|i| {
                    family
                        .iter()
                        .filter(|s| s.contains(i))
                        .map(|&s| {
                            table.delta_unchecked(i, s)
                                / Rational::from_integer(BigInt::from(s.len() * per_family))
                        })
                        .max()
                        .unwrap_or_else(rational::zero)
                })
                .collect()
        }
    };
    Ok(values)
}

fn subsets_containing(m: usize, feature: usize) -> impl Iterator<Item = FeatureSet> {
    let bit = 1u32 << (feature - 1);
    (0..(1u64 << (m - 1))).map(move |k| {
        // spread k over the bits other than `feature`
        let k = k as u32;
        let low = k & (bit - 1);
        let high = (k & !(bit - 1)) << 1;
        FeatureSet::from_mask(low | high | bit)
    })
}

/// Template score on an explanation problem, with the family resolved from the
/// template's mode.
pub fn template_score(
    template: Template,
    problem: &ExplanationProblem,
    table: &CharacteristicTable,
) -> Result<ScoreVector> {
    if table.n_features() != problem.n_features() {
        return Err(Error::DimensionMismatch {
            left: table.n_features(),
            right: problem.n_features(),
        });
    }
    let values = match template.mode {
        FamilyMode::AllSubsets => evaluate_template(template.id, table, None)?,
        FamilyMode::Family(kind) => {
            let fam = explain::family(problem, kind);
            evaluate_template(template.id, table, Some(&fam.members))?
        }
    };
    Ok(ScoreVector {
        label: template.to_string(),
        template: Some(template),
        charfn: Some(table.id().clone()),
        values,
    })
}

/// Scores a directly supplied explanation family, using its membership
/// indicator as the characteristic function.
pub fn score_family(
    id: TemplateId,
    n_features: usize,
    family: &[FeatureSet],
) -> Result<ScoreVector> {
    let mut members = family.to_vec();
    crate::subset::canonicalize(&mut members);
    if let Some(bad) = members
        .iter()
        .find(|s| !s.is_subset(FeatureSet::full(n_features)))
    {
        return Err(Error::Contract(format!(
            "family member {bad} exceeds {n_features} features"
        )));
    }
    let table = cf_family(n_features, &members);
    let values = evaluate_template(id, &table, Some(&members))?;
    Ok(ScoreVector {
        label: format!("{id}[family]"),
        template: None,
        charfn: Some(table.id().clone()),
        values,
    })
}
