use serde::Serialize;
use std::fmt;
use std::str::FromStr;

use super::{coverage_score, template_score, FamilyMode, ScoreVector, Template, TemplateId};
use crate::charfun::{table_for, CharFnId};
use crate::error::{Error, Result};
use crate::explain::FamilyKind;
use crate::model::ExplanationProblem;

/// The instantiated feature importance scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FisId {
    /// Shapley-Shubik over the expected value (SHAP).
    E,
    /// Shapley-Shubik over the similarity function.
    M,
    /// Shapley-Shubik over WAXp criticality.
    S,
    B,
    J,
    D,
    H,
    R,
    #[serde(rename = "R_NORM")]
    RNorm,
    A,
    /// Responsibility over CXps with the WCXp indicator.
    C,
    /// Coverage of feature space by AXps containing the feature.
    V,
}

impl FisId {
    pub const ALL: [FisId; 12] = [
        FisId::E,
        FisId::M,
        FisId::S,
        FisId::B,
        FisId::J,
        FisId::D,
        FisId::H,
        FisId::R,
        FisId::RNorm,
        FisId::A,
        FisId::C,
        FisId::V,
    ];

    /// Scores whose value depends only on explanation families.
    pub const EXPLANATION_BASED: [FisId; 10] = [
        FisId::S,
        FisId::B,
        FisId::J,
        FisId::D,
        FisId::H,
        FisId::R,
        FisId::RNorm,
        FisId::A,
        FisId::C,
        FisId::V,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FisId::E => "E",
            FisId::M => "M",
            FisId::S => "S",
            FisId::B => "B",
            FisId::J => "J",
            FisId::D => "D",
            FisId::H => "H",
            FisId::R => "R",
            FisId::RNorm => "R_NORM",
            FisId::A => "A",
            FisId::C => "C",
            FisId::V => "V",
        }
    }

    pub fn definition(self) -> Definition {
        let t = |id: TemplateId, charfn: CharFnId| Definition::Template {
            template: Template::primal(id),
            charfn,
        };
        match self {
            FisId::E => t(TemplateId::ShapleyShubik, CharFnId::Expected),
            FisId::M => t(TemplateId::ShapleyShubik, CharFnId::Similarity),
            FisId::S => t(TemplateId::ShapleyShubik, CharFnId::Waxp),
            FisId::B => t(TemplateId::Banzhaf, CharFnId::Waxp),
            FisId::J => t(TemplateId::Johnston, CharFnId::Waxp),
            FisId::D => t(TemplateId::DeeganPackel, CharFnId::Axp),
            FisId::H => t(TemplateId::HollerPackel, CharFnId::Axp),
            FisId::R => t(TemplateId::Responsibility, CharFnId::Axp),
            FisId::RNorm => t(TemplateId::ResponsibilityNormalized, CharFnId::Axp),
            FisId::A => t(TemplateId::Andjiga, CharFnId::Waxp),
            FisId::C => Definition::Template {
                template: Template {
                    id: TemplateId::Responsibility,
                    mode: FamilyMode::Family(FamilyKind::Cxp),
                },
                charfn: CharFnId::Wcxp,
            },
            FisId::V => Definition::Coverage(FamilyKind::Axp),
        }
    }

    /// Underlying template, if the score is a template instantiation.
    pub fn template(self) -> Option<Template> {
        match self.definition() {
            Definition::Template { template, .. } => Some(template),
            Definition::Coverage(_) => None,
        }
    }
}

impl fmt::Display for FisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sv_{}", self.as_str())
    }
}

impl FromStr for FisId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase();
        let key = key.strip_prefix("SV_").unwrap_or(&key);
        FisId::ALL
            .into_iter()
            .find(|f| f.as_str() == key || (key == "RNORM" && *f == FisId::RNorm))
            .ok_or_else(|| Error::UnknownId(s.to_string()))
    }
}

/// How a score is computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Definition {
    Template {
        template: Template,
        charfn: CharFnId,
    },
    Coverage(FamilyKind),
}

impl Definition {
    /// Swaps every (W)AXp reference for the matching (W)CXp one.
    pub fn dual(&self) -> Option<Definition> {
        match self {
            Definition::Template { template, charfn } => Some(Definition::Template {
                template: template.dual(),
                charfn: charfn.dual()?,
            }),
            Definition::Coverage(kind) => Some(Definition::Coverage(kind.dual())),
        }
    }
}

/// A score, primal or dual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Fis {
    pub id: FisId,
    pub dual: bool,
}

impl Fis {
    pub fn primal(id: FisId) -> Self {
        Fis { id, dual: false }
    }

    pub fn dual_of(id: FisId) -> Self {
        Fis { id, dual: true }
    }

    pub fn flipped(self) -> Self {
        Fis {
            id: self.id,
            dual: !self.dual,
        }
    }

    pub fn definition(self) -> Result<Definition> {
        let primal = self.id.definition();
        if self.dual {
            primal
                .dual()
                .ok_or_else(|| Error::NoDual(self.id.to_string()))
        } else {
            Ok(primal)
        }
    }
}

impl fmt::Display for Fis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dual {
            write!(f, "dual({})", self.id)
        } else {
            write!(f, "{}", self.id)
        }
    }
}

impl FromStr for Fis {
    type Err = Error;

    /// Accepts `D`, `sv_D`, `dual(D)` and `D^d`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let lower = t.to_ascii_lowercase();
        if lower.starts_with("dual(") && lower.ends_with(')') {
            return Ok(Fis::dual_of(t[5..t.len() - 1].parse()?));
        }
        if let Some(inner) = t.strip_suffix("^d") {
            return Ok(Fis::dual_of(inner.parse()?));
        }
        Ok(Fis::primal(t.parse()?))
    }
}

/// Evaluates a score definition on `problem`.
pub fn compute_named(
    definition: &Definition,
    label: String,
    problem: &ExplanationProblem,
) -> Result<ScoreVector> {
    match definition {
        Definition::Template { template, charfn } => {
            let table = table_for(problem, charfn)?;
            let mut sv = template_score(*template, problem, &table)?;
            sv.label = label;
            Ok(sv)
        }
        Definition::Coverage(kind) => Ok(ScoreVector {
            label,
            template: None,
            charfn: None,
            values: coverage_score(problem, *kind),
        }),
    }
}

pub fn compute_fis(fis: Fis, problem: &ExplanationProblem) -> Result<ScoreVector> {
    compute_named(&fis.definition()?, fis.to_string(), problem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{frac, int, Rational};

    fn run(fis: Fis) -> Vec<Rational> {
        compute_fis(fis, &fixtures::conjunction_problem())
            .unwrap()
            .values
    }

    fn q(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|&(n, d)| frac(n, d)).collect()
    }

    #[test]
    fn deegan_holler_responsibility_on_conjunction() {
        assert_eq!(
            run(Fis::primal(FisId::D)),
            q(&[(5, 12), (1, 4), (1, 6), (1, 6)])
        );
        assert_eq!(
            run(Fis::dual_of(FisId::D)),
            q(&[(1, 3), (1, 3), (1, 6), (1, 6)])
        );
        assert_eq!(
            run(Fis::primal(FisId::H)),
            q(&[(1, 1), (1, 2), (1, 2), (1, 2)])
        );
        assert_eq!(
            run(Fis::dual_of(FisId::H)),
            q(&[(1, 3), (2, 3), (1, 3), (1, 3)])
        );
        assert_eq!(
            run(Fis::primal(FisId::RNorm)),
            q(&[(1, 4), (1, 4), (1, 6), (1, 6)])
        );
        assert_eq!(
            run(Fis::dual_of(FisId::RNorm)),
            q(&[(1, 3), (1, 6), (1, 6), (1, 6)])
        );
        assert_eq!(
            run(Fis::primal(FisId::R)),
            q(&[(1, 2), (1, 2), (1, 3), (1, 3)])
        );
    }

    #[test]
    fn johnston_andjiga_coverage_on_conjunction() {
        assert_eq!(
            run(Fis::primal(FisId::J)),
            q(&[(17, 6), (3, 2), (1, 3), (1, 3)])
        );
        assert_eq!(
            run(Fis::dual_of(FisId::J)),
            q(&[(5, 1), (2, 1), (1, 2), (1, 2)])
        );
        assert_eq!(
            run(Fis::primal(FisId::A)),
            q(&[(7, 20), (7, 30), (1, 15), (1, 15)])
        );
        assert_eq!(
            run(Fis::dual_of(FisId::A)),
            q(&[(17, 66), (4, 33), (1, 22), (1, 22)])
        );
        assert_eq!(
            run(Fis::primal(FisId::V)),
            q(&[(5, 16), (1, 4), (1, 8), (1, 8)])
        );
        assert_eq!(
            run(Fis::dual_of(FisId::V)),
            q(&[(1, 2), (3, 8), (1, 4), (1, 4)])
        );
    }

    #[test]
    fn single_feature_scores() {
        let p = fixtures::problem("x1", 1, &[1]);
        for id in [FisId::S, FisId::B] {
            assert_eq!(
                compute_fis(Fis::primal(id), &p).unwrap().values,
                vec![int(1)]
            );
        }
    }

    #[test]
    fn expected_value_scores_have_no_dual() {
        let p = fixtures::conjunction_problem();
        assert!(matches!(
            compute_fis(Fis::dual_of(FisId::E), &p),
            Err(Error::NoDual(_))
        ));
        assert!(matches!(
            compute_fis(Fis::dual_of(FisId::M), &p),
            Err(Error::NoDual(_))
        ));
    }

    #[test]
    fn parse_ids() {
        assert_eq!("sv_D".parse::<Fis>().unwrap(), Fis::primal(FisId::D));
        assert_eq!("dual(H)".parse::<Fis>().unwrap(), Fis::dual_of(FisId::H));
        assert_eq!("V^d".parse::<Fis>().unwrap(), Fis::dual_of(FisId::V));
        assert_eq!("r_norm".parse::<Fis>().unwrap(), Fis::primal(FisId::RNorm));
        assert!(matches!("Z".parse::<Fis>(), Err(Error::UnknownId(_))));
        assert_eq!(Fis::dual_of(FisId::C).to_string(), "dual(sv_C)");
    }
}
