//! Abductive and contrastive explanations, criticality, relevancy and
//! minimal-hitting-set duality, all decided by exhaustive enumeration.

use serde::Serialize;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::model::ExplanationProblem;
use crate::subset::{canonicalize, FeatureSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum FamilyKind {
    Waxp,
    Axp,
    Wcxp,
    Cxp,
}

impl FamilyKind {
    pub fn dual(self) -> FamilyKind {
        match self {
            FamilyKind::Waxp => FamilyKind::Wcxp,
            FamilyKind::Axp => FamilyKind::Cxp,
            FamilyKind::Wcxp => FamilyKind::Waxp,
            FamilyKind::Cxp => FamilyKind::Axp,
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FamilyKind::Waxp => "WAXp",
            FamilyKind::Axp => "AXp",
            FamilyKind::Wcxp => "WCXp",
            FamilyKind::Cxp => "CXp",
        };
        f.write_str(s)
    }
}

/// A family of explanations in canonical order (cardinality, then mask).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExplanationFamily {
    pub kind: FamilyKind,
    pub members: Vec<FeatureSet>,
}

impl ExplanationFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, set: FeatureSet) -> bool {
        self.members.contains(&set)
    }

    /// Members containing feature `i`.
    pub fn containing(&self, i: usize) -> impl Iterator<Item = FeatureSet> + '_ {
        self.members.iter().copied().filter(move |s| s.contains(i))
    }

    pub fn union(&self) -> FeatureSet {
        self.members
            .iter()
            .fold(FeatureSet::EMPTY, |acc, &s| acc.union(s))
    }
}

/// Point counts per subset, aggregated over `Υ(S; v)` for every mask `S`.
#[derive(Debug)]
pub(crate) struct LatticeCounts {
    /// `|Υ(S; v)|`
    pub size: Vec<u64>,
    /// `Σ_{x ∈ Υ(S;v)} κ(x)`
    pub label_sum: Vec<u128>,
    /// `|{x ∈ Υ(S;v) : κ(x) = κ(v)}|`
    pub matching: Vec<u64>,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Cache {
    lattice: OnceLock<Arc<LatticeCounts>>,
    axps: OnceLock<Arc<ExplanationFamily>>,
    cxps: OnceLock<Arc<ExplanationFamily>>,
}

/// Histogram of points by agreement set with `v`, then a superset-sum
/// transform so entry `S` aggregates every `x` with `S ⊆ ℐ(x; v)`.
pub(crate) fn lattice(problem: &ExplanationProblem) -> Arc<LatticeCounts> {
    problem
        .cache
        .lattice
        .get_or_init(|| {
            let classifier = problem.classifier();
            let m = problem.n_features();
            let n = 1usize << m;
            let reference = problem.rank();
            let target = problem.prediction();
            let v_idx: Vec<usize> = (1..=m)
                .map(|i| classifier.value_index(reference, i))
                .collect();
            let mut size = vec![0u64; n];
            let mut label_sum = vec![0u128; n];
            let mut matching = vec![0u64; n];
            for (rank, &label) in classifier.outputs().iter().enumerate() {
                let mut agree = 0usize;
                for i in 1..=m {
                    if classifier.value_index(rank, i) == v_idx[i - 1] {
                        agree |= 1 << (i - 1);
                    }
                }
                size[agree] += 1;
                label_sum[agree] += u128::from(label);
                matching[agree] += u64::from(label == target);
            }
            for bit in 0..m {
                let b = 1usize << bit;
                for mask in 0..n {
                    if mask & b == 0 {
                        size[mask] += size[mask | b];
                        label_sum[mask] += label_sum[mask | b];
                        matching[mask] += matching[mask | b];
                    }
                }
            }
            Arc::new(LatticeCounts {
                size,
                label_sum,
                matching,
            })
        })
        .clone()
}

/// Weak abductive explanation: fixing `S` to `v_S` forces `κ(v)`.
/// Decided by enumerating `Υ(S; v)`.
pub fn is_waxp(problem: &ExplanationProblem, set: FeatureSet) -> bool {
    let classifier = problem.classifier();
    let target = problem.prediction();
    classifier
        .ranks_matching(problem.rank(), set)
        .all(|r| classifier.label_at(r) == target)
}

/// Weak contrastive explanation: freeing `S` (fixing the rest to `v`) lets the
/// prediction change. Decided by enumerating `Υ(ℱ∖S; v)`.
pub fn is_wcxp(problem: &ExplanationProblem, set: FeatureSet) -> bool {
    let classifier = problem.classifier();
    let target = problem.prediction();
    let fixed = set.complement(problem.n_features());
    classifier
        .ranks_matching(problem.rank(), fixed)
        .any(|r| classifier.label_at(r) != target)
}

/// `WAXp(S)` for every mask, from the aggregated lattice counts.
pub fn waxp_indicator(problem: &ExplanationProblem) -> Vec<bool> {
    let lat = lattice(problem);
    lat.matching
        .iter()
        .zip(&lat.size)
        .map(|(hit, total)| hit == total)
        .collect()
}

/// `WCXp(S)` for every mask: some point of `Υ(ℱ∖S; v)` changes class.
pub fn wcxp_indicator(problem: &ExplanationProblem) -> Vec<bool> {
    let lat = lattice(problem);
    let full = problem.all_features();
    (0..lat.size.len())
        .map(|mask| {
            let fixed = FeatureSet::from_mask(mask as u32)
                .complement(full.len())
                .index();
            lat.matching[fixed] < lat.size[fixed]
        })
        .collect()
}

/// Every subset of `universe` in canonical order.
fn canonical_subsets(universe: FeatureSet) -> Vec<FeatureSet> {
    let mut subsets: Vec<FeatureSet> = (0..=universe.mask() as u64)
        .map(|m| FeatureSet::from_mask(m as u32))
        .filter(|s| s.is_subset(universe))
        .collect();
    subsets.sort_by(FeatureSet::canonical_cmp);
    subsets
}

/// Scans candidates in canonical order and keeps those satisfying `pred` that
/// contain no previously kept member.
fn minimal_members(
    candidates: &[FeatureSet],
    pred: impl Fn(FeatureSet) -> bool,
) -> Vec<FeatureSet> {
    let mut kept: Vec<FeatureSet> = Vec::new();
    for &s in candidates {
        if pred(s) && !kept.iter().any(|k| k.is_subset(s)) {
            kept.push(s);
        }
    }
    kept
}

pub fn enumerate_axps(problem: &ExplanationProblem) -> Arc<ExplanationFamily> {
    problem
        .cache
        .axps
        .get_or_init(|| {
            let waxp = waxp_indicator(problem);
            let candidates = canonical_subsets(problem.all_features());
            Arc::new(ExplanationFamily {
                kind: FamilyKind::Axp,
                members: minimal_members(&candidates, |s| waxp[s.index()]),
            })
        })
        .clone()
}

pub fn enumerate_cxps(problem: &ExplanationProblem) -> Arc<ExplanationFamily> {
    problem
        .cache
        .cxps
        .get_or_init(|| {
            let wcxp = wcxp_indicator(problem);
            let candidates = canonical_subsets(problem.all_features());
            Arc::new(ExplanationFamily {
                kind: FamilyKind::Cxp,
                members: minimal_members(&candidates, |s| wcxp[s.index()]),
            })
        })
        .clone()
}

pub fn enumerate_waxps(problem: &ExplanationProblem) -> ExplanationFamily {
    let waxp = waxp_indicator(problem);
    let mut members: Vec<FeatureSet> = FeatureSet::all(problem.n_features())
        .filter(|s| waxp[s.index()])
        .collect();
    canonicalize(&mut members);
    ExplanationFamily {
        kind: FamilyKind::Waxp,
        members,
    }
}

pub fn enumerate_wcxps(problem: &ExplanationProblem) -> ExplanationFamily {
    let wcxp = wcxp_indicator(problem);
    let mut members: Vec<FeatureSet> = FeatureSet::all(problem.n_features())
        .filter(|s| wcxp[s.index()])
        .collect();
    canonicalize(&mut members);
    ExplanationFamily {
        kind: FamilyKind::Wcxp,
        members,
    }
}

/// Family of the given kind for `problem`.
pub fn family(problem: &ExplanationProblem, kind: FamilyKind) -> Arc<ExplanationFamily> {
    match kind {
        FamilyKind::Axp => enumerate_axps(problem),
        FamilyKind::Cxp => enumerate_cxps(problem),
        FamilyKind::Waxp => Arc::new(enumerate_waxps(problem)),
        FamilyKind::Wcxp => Arc::new(enumerate_wcxps(problem)),
    }
}

/// All subset-minimal subsets of `universe` meeting every member of `family`.
pub fn minimal_hitting_sets(family: &[FeatureSet], universe: FeatureSet) -> Vec<FeatureSet> {
    let candidates = canonical_subsets(universe);
    minimal_members(&candidates, |h| family.iter().all(|&m| h.intersects(m)))
}

/// Union of all AXps.
pub fn relevant_features(problem: &ExplanationProblem) -> FeatureSet {
    enumerate_axps(problem).union()
}

pub fn is_relevant(problem: &ExplanationProblem, feature: usize) -> bool {
    relevant_features(problem).contains(feature)
}

fn require_member(feature: usize, set: FeatureSet) -> Result<()> {
    if set.contains(feature) {
        Ok(())
    } else {
        Err(Error::Contract(format!(
            "feature {feature} is not in {set}"
        )))
    }
}

/// `Crit(i, S)`: `S` is a WAXp and `S∖{i}` is not.
pub fn is_critical(problem: &ExplanationProblem, feature: usize, set: FeatureSet) -> Result<bool> {
    require_member(feature, set)?;
    Ok(is_waxp(problem, set) && !is_waxp(problem, set.without(feature)))
}

/// `Crit_d(i, S)`: `S` is a WCXp and `S∖{i}` is not.
pub fn is_critical_dual(
    problem: &ExplanationProblem,
    feature: usize,
    set: FeatureSet,
) -> Result<bool> {
    require_member(feature, set)?;
    Ok(is_wcxp(problem, set) && !is_wcxp(problem, set.without(feature)))
}
