use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use super::{checks_for, Check, PropertyId, PropertyVerdict, Subject};
use crate::charfun::CharFnId;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fixtures;
use crate::model::{ExplanationProblem, Label};
use crate::random::ProblemStream;
use crate::rational::{self, Rational};
use crate::scores::{Definition, Fis, FisId};

/// Classification fixed by the reference propositions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Holds,
    Fails,
}

/// The reference classification of `fis` under `property`, where one is
/// stated. Cells without a statement are computed but not compared.
pub fn pinned_expectation(fis: FisId, property: PropertyId) -> Option<Expectation> {
    use Expectation::{Fails, Holds};
    use FisId::*;
    let nine = [S, B, D, H, R, J, A, C, V];
    match property {
        PropertyId::P01 => match fis {
            S => Some(Holds),
            D | H | R | B | J | A => Some(Fails),
            _ => None,
        },
        PropertyId::P02 => match fis {
            S | B | J => Some(Holds),
            D | H | R | A => Some(Fails),
            _ => None,
        },
        PropertyId::P03 => match fis {
            S | D | H | B | A => Some(Holds),
            J | R => Some(Fails),
            _ => None,
        },
        PropertyId::P04 => match fis {
            S | B | J | D | H | R | A => Some(Holds),
            _ => None,
        },
        PropertyId::P05 => match fis {
            E | M => Some(Fails),
            f if nine.contains(&f) => Some(Holds),
            _ => None,
        },
        PropertyId::P06 => None,
        PropertyId::P07 | PropertyId::P08 => match fis {
            E => Some(Fails),
            f if nine.contains(&f) => Some(Holds),
            _ => None,
        },
        PropertyId::P09 => match fis {
            S | B => Some(Holds),
            D | H | R | J | A | V => Some(Fails),
            _ => None,
        },
    }
}

/// One cell of the property matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// No violation on any audited problem.
    Holds,
    /// Violated; the index points into [`PropertyMatrix::witnesses`].
    Fails(usize),
    NotApplicable,
    /// Score total on the reference problem.
    Gamma(Rational),
}

impl Cell {
    pub fn agrees_with(&self, expectation: Expectation) -> bool {
        matches!(
            (self, expectation),
            (Cell::Holds, Expectation::Holds) | (Cell::Fails(_), Expectation::Fails)
        )
    }

    fn label(&self) -> String {
        match self {
            Cell::Holds => "holds*".into(),
            Cell::Fails(k) => format!("fails[{k}]"),
            Cell::NotApplicable => "n/a".into(),
            Cell::Gamma(g) => format!("g={}", rational::to_string(g)),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixRow {
    pub fis: FisId,
    pub cells: Vec<Cell>,
}

/// A recorded violation with the problem it came from.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessRecord {
    pub id: usize,
    pub fis: FisId,
    pub property: PropertyId,
    pub source: String,
    pub verdict: PropertyVerdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatrixConfig {
    pub seed: u64,
    /// Random problems audited per cell, after the fixed reference problems.
    pub budget: u64,
    pub exec: Execution,
}

impl Default for MatrixConfig {
    fn default() -> Self {
        MatrixConfig {
            seed: 0,
            budget: 200,
            exec: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Disagreement {
    pub fis: FisId,
    pub property: PropertyId,
    pub expected: Expectation,
    pub found: Cell,
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyMatrix {
    pub seed: u64,
    pub budget: u64,
    pub properties: Vec<PropertyId>,
    pub rows: Vec<MatrixRow>,
    pub witnesses: Vec<WitnessRecord>,
}

fn reference_problems() -> Vec<(String, ExplanationProblem)> {
    vec![
        (
            format!("{} at (1,1,1,1)", fixtures::CONJUNCTION_EXPR),
            fixtures::conjunction_problem(),
        ),
        (
            "x1 over 2 features at (1,1)".into(),
            fixtures::dictator_problem(),
        ),
    ]
}

/// Characteristic functions a template is audited with, the row's own first.
fn template_battery(own: &CharFnId) -> Vec<CharFnId> {
    let mut ids = vec![own.clone()];
    for id in [CharFnId::Generator, CharFnId::Waxp, CharFnId::Expected] {
        if !ids.contains(&id) {
            ids.push(id);
        }
    }
    ids
}

/// Extra relabelings applied to the reference problems.
fn fixed_relabelings() -> Vec<BTreeMap<Label, Label>> {
    vec![[(0, 7), (1, 3)].into_iter().collect()]
}

/// All checks for one cell on one problem.
fn cell_checks(
    fis: FisId,
    property: PropertyId,
    problem: &ExplanationProblem,
    fixed: bool,
) -> Result<Vec<Check>> {
    if property.is_template_level() {
        let Definition::Template { template, charfn } = fis.definition() else {
            return Err(Error::Contract(format!("{fis} is not a template score")));
        };
        let mut checks = Vec::new();
        for id in template_battery(&charfn) {
            let subject = Subject::Template {
                template,
                charfn: id,
            };
            checks.extend(checks_for(property, &subject, problem)?);
        }
        return Ok(checks);
    }
    let mut checks = checks_for(property, &Subject::Fis(Fis::primal(fis)), problem)?;
    if property == PropertyId::P07 && fixed {
        for sigma in fixed_relabelings() {
            checks.push(Check::ClassRelabeling {
                problem: Arc::new(problem.clone()),
                fis: Fis::primal(fis),
                sigma,
            });
        }
    }
    Ok(checks)
}

fn first_violation(checks: &[Check]) -> Result<Option<PropertyVerdict>> {
    for c in checks {
        let v = c.run()?;
        if v.is_violation() {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

fn applicable(fis: FisId, property: PropertyId) -> bool {
    match property {
        p if p.is_template_level() => matches!(fis.definition(), Definition::Template { .. }),
        PropertyId::P09 => fis.definition().dual().is_some(),
        _ => true,
    }
}

impl PropertyMatrix {
    /// Audits every score under every property on the reference problems and
    /// on `config.budget` random problems.
    pub fn compute(config: MatrixConfig) -> Result<PropertyMatrix> {
        let stream = ProblemStream::new(config.seed);
        let reference = reference_problems();
        let mut rows = Vec::new();
        let mut witnesses = Vec::new();
        for fis in FisId::ALL {
            let mut cells = Vec::new();
            for property in PropertyId::ALL {
                let cell = if property == PropertyId::P06 {
                    Cell::Gamma(super::gamma_value(&reference[0].1, Fis::primal(fis))?)
                } else if !applicable(fis, property) {
                    Cell::NotApplicable
                } else {
                    match Self::audit(fis, property, &reference, &stream, config)? {
                        None => Cell::Holds,
                        Some((source, verdict)) => {
                            let id = witnesses.len();
                            witnesses.push(WitnessRecord {
                                id,
                                fis,
                                property,
                                source,
                                verdict,
                            });
                            Cell::Fails(id)
                        }
                    }
                };
                cells.push(cell);
            }
            rows.push(MatrixRow { fis, cells });
        }
        Ok(PropertyMatrix {
            seed: config.seed,
            budget: config.budget,
            properties: PropertyId::ALL.to_vec(),
            rows,
            witnesses,
        })
    }

    fn audit(
        fis: FisId,
        property: PropertyId,
        reference: &[(String, ExplanationProblem)],
        stream: &ProblemStream,
        config: MatrixConfig,
    ) -> Result<Option<(String, PropertyVerdict)>> {
        for (name, problem) in reference {
            if let Some(v) = first_violation(&cell_checks(fis, property, problem, true)?)? {
                return Ok(Some((name.clone(), v)));
            }
        }
        let n = usize::try_from(config.budget)
            .map_err(|_| Error::ScaleLimit(format!("budget {} too large", config.budget)))?;
        let found = config.exec.find_first(n, |k| {
            let problem = stream.problem(k as u64);
            cell_checks(fis, property, &problem, false)
                .and_then(|checks| first_violation(&checks))
                .transpose()
        });
        match found {
            None => Ok(None),
            Some((k, Ok(v))) => Ok(Some((
                format!("random problem {k} of seed {}", stream.seed()),
                v,
            ))),
            Some((_, Err(e))) => Err(e),
        }
    }

    pub fn cell(&self, fis: FisId, property: PropertyId) -> &Cell {
        let row = self
            .rows
            .iter()
            .find(|r| r.fis == fis)
            .expect("every score has a row");
        &row.cells[property as usize]
    }

    /// Pinned cells whose computed value contradicts the reference
    /// classification.
    pub fn disagreements(&self) -> Vec<Disagreement> {
        let mut out = Vec::new();
        for row in &self.rows {
            for (property, cell) in PropertyId::ALL.into_iter().zip(&row.cells) {
                if let Some(expected) = pinned_expectation(row.fis, property) {
                    if !cell.agrees_with(expected) {
                        out.push(Disagreement {
                            fis: row.fis,
                            property,
                            expected,
                            found: cell.clone(),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn is_consistent(&self) -> bool {
        self.disagreements().is_empty()
    }

    /// Plain-text table with one row per score and one column per property.
    pub fn to_text(&self) -> String {
        let width = 10;
        let mut out = String::new();
        let _ = write!(out, "{:<11}", "FIS");
        for p in &self.properties {
            let _ = write!(out, "{:<width$}", p.to_string());
        }
        out.push('\n');
        for row in &self.rows {
            let _ = write!(out, "{:<11}", format!("sv_{}", row.fis.as_str()));
            for (property, cell) in PropertyId::ALL.into_iter().zip(&row.cells) {
                let mut label = cell.label();
                if let Some(expected) = pinned_expectation(row.fis, property) {
                    if !cell.agrees_with(expected) {
                        label.push('!');
                    }
                }
                let _ = write!(out, "{label:<width$}");
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "\n* no violation found on the reference problems and {} random problems (seed {}); not a proof.",
            self.budget, self.seed
        );
        let _ = writeln!(
            out,
            "g = score total on the reference conjunction problem (P06)."
        );
        let _ = writeln!(out, "! = contradicts the reference classification.");
        if !self.witnesses.is_empty() {
            out.push_str("\nWitnesses:\n");
            for w in &self.witnesses {
                let _ = writeln!(
                    out,
                    "[{}] sv_{} {} on {}: {}",
                    w.id,
                    w.fis.as_str(),
                    w.property,
                    w.source,
                    w.verdict
                );
            }
        }
        let disagreements = self.disagreements();
        if disagreements.is_empty() {
            out.push_str("\nAll pinned cells agree with the reference classification.\n");
        } else {
            out.push_str("\nDisagreements with the reference classification:\n");
            for d in disagreements {
                let _ = writeln!(
                    out,
                    "sv_{} {}: expected {:?}, found {}",
                    d.fis.as_str(),
                    d.property,
                    d.expected,
                    d.found.label()
                );
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Report<'a> {
            matrix: &'a PropertyMatrix,
            disagreements: Vec<Disagreement>,
        }
        serde_json::to_string_pretty(&Report {
            matrix: self,
            disagreements: self.disagreements(),
        })
        .expect("matrix serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pinned_cells_cover_the_nine_family_scores() {
        for fis in [
            FisId::S,
            FisId::B,
            FisId::D,
            FisId::H,
            FisId::R,
            FisId::J,
            FisId::A,
            FisId::C,
            FisId::V,
        ] {
            for p in [PropertyId::P05, PropertyId::P07, PropertyId::P08] {
                assert_eq!(pinned_expectation(fis, p), Some(Expectation::Holds));
            }
        }
        assert_eq!(
            pinned_expectation(FisId::E, PropertyId::P07),
            Some(Expectation::Fails)
        );
        assert_eq!(pinned_expectation(FisId::V, PropertyId::P06), None);
    }

    #[test]
    fn small_matrix_matches_reference_classification() {
        let m = PropertyMatrix::compute(MatrixConfig {
            seed: 0,
            budget: 20,
            exec: Execution::default(),
        })
        .unwrap();
        assert_eq!(
            m.cell(FisId::D, PropertyId::P06),
            &Cell::Gamma(rational::one())
        );
        assert_eq!(m.cell(FisId::E, PropertyId::P09), &Cell::NotApplicable);
        assert_eq!(m.cell(FisId::V, PropertyId::P01), &Cell::NotApplicable);
        for w in &m.witnesses {
            assert!(w.verdict.recheck().unwrap().is_violation());
        }
        assert!(m.to_text().contains("sv_D"));
    }
}
