use std::fmt;
use std::sync::Arc;

use super::checks::default_duality_requirement;
use super::{rotation, Check, PropertyId, PropertyVerdict};
use crate::charfun::{cf_expected, cf_similarity, table_for, CharFnId, CharacteristicTable};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::explain;
use crate::model::ExplanationProblem;
use crate::random::ProblemStream;
use crate::scores::{Definition, Fis, Template};

/// What a property is checked against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Subject {
    /// An instantiated score.
    Fis(Fis),
    /// A template score with an explicit characteristic function.
    Template {
        template: Template,
        charfn: CharFnId,
    },
}

impl Subject {
    /// The template and characteristic function underlying the subject.
    fn template(&self) -> Result<(Template, CharFnId)> {
        match self {
            Subject::Template { template, charfn } => Ok((*template, charfn.clone())),
            Subject::Fis(fis) => match fis.definition()? {
                Definition::Template { template, charfn } => Ok((template, charfn)),
                Definition::Coverage(_) => {
                    Err(Error::Contract(format!("{fis} is not a template score")))
                }
            },
        }
    }

    fn fis(&self, property: PropertyId) -> Result<Fis> {
        match self {
            Subject::Fis(fis) => Ok(*fis),
            Subject::Template { .. } => Err(Error::Contract(format!(
                "{property} is stated for feature importance scores, not templates"
            ))),
        }
    }
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Fis(fis) => write!(f, "{fis}"),
            Subject::Template { template, charfn } => write!(f, "{template} with {charfn}"),
        }
    }
}

/// Indicators of the first two AXps, when the problem has at least two.
fn split_family_tables(
    problem: &ExplanationProblem,
) -> Option<(CharacteristicTable, CharacteristicTable)> {
    let axps = explain::enumerate_axps(problem);
    let m = problem.n_features();
    if axps.len() < 2 {
        return None;
    }
    let (a, b) = (axps.members[0], axps.members[1]);
    Some((
        CharacteristicTable::indicator(CharFnId::Custom(format!("AXP{a}")), m, move |s| s == a),
        CharacteristicTable::indicator(CharFnId::Custom(format!("AXP{b}")), m, move |s| s == b),
    ))
}

/// The checks run for `property` on one problem.
///
/// Template-level properties use the subject's own table. Additivity pairs
/// the own table with itself, with the expected-value and similarity
/// tables, and splits the AXp family into two single-set indicators.
/// Relabeling rotates the class labels. Duality asks for at least
/// equivalence.
pub fn checks_for(
    property: PropertyId,
    subject: &Subject,
    problem: &ExplanationProblem,
) -> Result<Vec<Check>> {
    let shared = Arc::new(problem.clone());
    let checks = match property {
        PropertyId::P01 | PropertyId::P02 | PropertyId::P04 => {
            let (template, charfn) = subject.template()?;
            let table = Arc::new(table_for(problem, &charfn)?);
            let check = match property {
                PropertyId::P01 => Check::Efficiency {
                    problem: shared,
                    template,
                    table,
                },
                PropertyId::P02 => Check::Symmetry {
                    problem: shared,
                    template,
                    table,
                },
                _ => Check::Dummy {
                    problem: shared,
                    template,
                    table,
                },
            };
            vec![check]
        }
        PropertyId::P03 => {
            let (template, charfn) = subject.template()?;
            let own = Arc::new(table_for(problem, &charfn)?);
            let mut pairs = vec![
                (Arc::clone(&own), Arc::clone(&own)),
                (Arc::clone(&own), Arc::new(cf_expected(problem))),
                (Arc::clone(&own), Arc::new(cf_similarity(problem))),
            ];
            if let Some((a, b)) = split_family_tables(problem) {
                pairs.push((Arc::new(a), Arc::new(b)));
            }
            pairs
                .into_iter()
                .map(|(left, right)| Check::Additivity {
                    problem: Arc::clone(&shared),
                    template,
                    left,
                    right,
                })
                .collect()
        }
        PropertyId::P05 => vec![Check::MinimalMonotonicity {
            problem: shared,
            fis: subject.fis(property)?,
        }],
        PropertyId::P06 => {
            return Err(Error::Contract(
                "P06 reports a gamma value and has no violation predicate".into(),
            ))
        }
        PropertyId::P07 => vec![Check::ClassRelabeling {
            sigma: rotation(problem),
            problem: shared,
            fis: subject.fis(property)?,
        }],
        PropertyId::P08 => vec![Check::RelevancyConsistency {
            problem: shared,
            fis: subject.fis(property)?,
        }],
        PropertyId::P09 => {
            let fis = subject.fis(property)?;
            fis.flipped().definition()?;
            vec![Check::Duality {
                problem: shared,
                fis,
                required: default_duality_requirement(),
            }]
        }
    };
    Ok(checks)
}

/// A violation found by [`search_counterexample`].
#[derive(Debug, Clone)]
pub struct Counterexample {
    /// Index of the violating problem in the stream.
    pub index: u64,
    pub seed: u64,
    pub verdict: PropertyVerdict,
}

/// Runs the checks for `property` on problems `0..budget` of `stream` and
/// returns the violation with the lowest index. Parallel and sequential
/// execution return the same result.
pub fn search_counterexample(
    property: PropertyId,
    subject: &Subject,
    stream: &ProblemStream,
    budget: u64,
    exec: Execution,
) -> Result<Option<Counterexample>> {
    if budget == 0 {
        return Err(Error::Contract("search budget must be at least 1".into()));
    }
    // Surface unsupported combinations before spawning any work.
    checks_for(property, subject, &stream.problem(0))?;
    let n = usize::try_from(budget)
        .map_err(|_| Error::ScaleLimit(format!("budget {budget} too large")))?;
    let found = exec.find_first(n, |k| {
        let problem = stream.problem(k as u64);
        let checks = match checks_for(property, subject, &problem) {
            Ok(c) => c,
            Err(e) => return Some(Err(e)),
        };
        checks.iter().find_map(|c| match c.run() {
            Ok(v) if v.is_violation() => Some(Ok(v)),
            Ok(_) => None,
            Err(e) => Some(Err(e)),
        })
    });
    match found {
        None => Ok(None),
        Some((k, Ok(verdict))) => Ok(Some(Counterexample {
            index: k as u64,
            seed: stream.seed(),
            verdict,
        })),
        Some((_, Err(e))) => Err(e),
    }
}
