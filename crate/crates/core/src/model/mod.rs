//! Discrete classifiers, instances and explanation problems.

mod document;
pub mod expr;
pub mod tree;
mod wvg;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

pub use document::{BodyDoc, FeatureDoc, InstanceDoc, ModelDocument};
pub use expr::Expr;
pub use tree::{Branch, TreeNode};
pub use wvg::WeightedVotingGame;

use crate::error::{Error, Result};
use crate::explain::Cache;
use crate::subset::FeatureSet;

pub type Label = u32;
/// A point in feature space, one domain value per feature.
pub type Point = Vec<i64>;

/// Environment variable that raises or lowers the feature-count limit.
pub const MAX_FEATURES_ENV: &str = "FISLAB_MAX_FEATURES";
pub const DEFAULT_MAX_FEATURES: usize = 16;
pub const HARD_MAX_FEATURES: usize = 20;
pub const DEFAULT_MAX_POINTS: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureDomain {
    id: usize,
    values: Vec<i64>,
}

impl FeatureDomain {
    pub fn new(id: usize, values: Vec<i64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidModel(format!(
                "feature {id} has an empty domain"
            )));
        }
        let distinct: BTreeSet<_> = values.iter().collect();
        if distinct.len() != values.len() {
            return Err(Error::InvalidModel(format!(
                "feature {id} has duplicate domain values"
            )));
        }
        Ok(FeatureDomain { id, values })
    }

    pub fn boolean(id: usize) -> Self {
        FeatureDomain {
            id,
            values: vec![0, 1],
        }
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    /// A single-valued domain makes the feature trivially irrelevant.
    pub fn is_trivial(&self) -> bool {
        self.values.len() < 2
    }

    pub fn is_boolean(&self) -> bool {
        self.values == [0, 1]
    }

    pub fn index_of(&self, value: i64) -> Option<usize> {
        self.values.iter().position(|&x| x == value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Body {
    /// One label per point, in lexicographic point order.
    Table(Vec<Label>),
    Tree(TreeNode),
    BoolExpr(Expr),
    Wvg(WeightedVotingGame),
}

impl Body {
    fn eval(&self, values: &[i64], table_rank: usize) -> Label {
        match self {
            Body::Table(labels) => labels[table_rank],
            Body::Tree(root) => root.eval(values),
            Body::BoolExpr(e) => Label::from(e.eval(values)),
            Body::Wvg(game) => {
                let coalition = FeatureSet::from_features(
                    values
                        .iter()
                        .enumerate()
                        .filter(|(_, &x)| x == 1)
                        .map(|(i, _)| i + 1),
                );
                Label::from(game.is_winning(coalition))
            }
        }
    }
}

/// Load-time limits on problem size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScaleLimits {
    pub max_features: usize,
    pub max_points: usize,
}

impl Default for ScaleLimits {
    fn default() -> Self {
        ScaleLimits {
            max_features: DEFAULT_MAX_FEATURES,
            max_points: DEFAULT_MAX_POINTS,
        }
    }
}

impl ScaleLimits {
    /// Defaults, with the feature limit taken from `FISLAB_MAX_FEATURES`
    /// when set (capped at 20).
    pub fn from_env() -> Self {
        let mut limits = ScaleLimits::default();
        if let Some(n) = std::env::var(MAX_FEATURES_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
        {
            limits.max_features = n.min(HARD_MAX_FEATURES);
        }
        limits
    }
}

/// A total, non-constant classification function over a discrete feature
/// space. The label of every point is materialized at construction.
#[derive(Debug, Clone)]
pub struct Classifier {
    features: Vec<FeatureDomain>,
    classes: Vec<Label>,
    body: Body,
    strides: Vec<usize>,
    outputs: Vec<Label>,
}

impl PartialEq for Classifier {
    fn eq(&self, other: &Self) -> bool {
        self.features == other.features
            && self.classes == other.classes
            && self.outputs == other.outputs
    }
}

impl Classifier {
    pub fn new(
        features: Vec<FeatureDomain>,
        classes: Option<Vec<Label>>,
        body: Body,
    ) -> Result<Self> {
        Self::with_limits(features, classes, body, ScaleLimits::from_env())
    }

    pub fn with_limits(
        features: Vec<FeatureDomain>,
        classes: Option<Vec<Label>>,
        body: Body,
        limits: ScaleLimits,
    ) -> Result<Self> {
        let m = features.len();
        if m == 0 {
            return Err(Error::InvalidModel("no features".into()));
        }
        if m > limits.max_features {
            return Err(Error::ScaleLimit(format!(
                "{m} features exceed the limit of {}",
                limits.max_features
            )));
        }
        for (k, f) in features.iter().enumerate() {
            if f.id != k + 1 {
                return Err(Error::InvalidModel(format!(
                    "feature ids must be 1..{m} in order, found {} at position {}",
                    f.id,
                    k + 1
                )));
            }
        }
        let mut n_points: usize = 1;
        for f in &features {
            n_points = n_points
                .checked_mul(f.size())
                .filter(|&n| n <= limits.max_points)
                .ok_or_else(|| {
                    Error::ScaleLimit(format!(
                        "feature space exceeds {} points",
                        limits.max_points
                    ))
                })?;
        }
        let mut strides = vec![1usize; m];
        for i in (0..m.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * features[i + 1].size();
        }

        match &body {
            Body::Table(labels) if labels.len() != n_points => {
                return Err(Error::InvalidModel(format!(
                    "table lists {} labels for {n_points} points",
                    labels.len()
                )));
            }
            Body::Tree(root) => root.validate(&features)?,
            Body::BoolExpr(e) => {
                require_boolean(&features, "boolean expression")?;
                if e.max_feature() > m {
                    return Err(Error::InvalidModel(format!(
                        "expression references unknown feature x{}",
                        e.max_feature()
                    )));
                }
            }
            Body::Wvg(game) => {
                require_boolean(&features, "weighted voting game")?;
                if game.n_voters() != m {
                    return Err(Error::InvalidModel(format!(
                        "game has {} weights for {m} features",
                        game.n_voters()
                    )));
                }
            }
            _ => {}
        }

        let mut classifier = Classifier {
            features,
            classes: Vec::new(),
            body,
            strides,
            outputs: Vec::new(),
        };
        let outputs: Vec<Label> = (0..n_points)
            .map(|rank| {
                let values = classifier.point_at(rank);
                classifier.body.eval(&values, rank)
            })
            .collect();
        let emitted: BTreeSet<Label> = outputs.iter().copied().collect();
        if emitted.len() < 2 {
            return Err(Error::InvalidModel(
                "classification function is constant".into(),
            ));
        }
        let classes: Vec<Label> = match classes {
            Some(declared) => {
                let declared_set: BTreeSet<Label> = declared.iter().copied().collect();
                if declared_set.len() != declared.len() {
                    return Err(Error::InvalidModel("duplicate class labels".into()));
                }
                if let Some(stray) = emitted.iter().find(|c| !declared_set.contains(c)) {
                    return Err(Error::InvalidModel(format!(
                        "classifier emits undeclared class {stray}"
                    )));
                }
                declared_set.into_iter().collect()
            }
            None => emitted.into_iter().collect(),
        };
        classifier.classes = classes;
        classifier.outputs = outputs;
        Ok(classifier)
    }

    /// Boolean classifier from an expression. With `n_features` unset the
    /// largest referenced variable fixes the dimension.
    pub fn from_expression(text: &str, n_features: Option<usize>) -> Result<Self> {
        let e = expr::parse(text)?;
        let m = n_features.unwrap_or_else(|| e.max_feature()).max(1);
        let features = (1..=m).map(FeatureDomain::boolean).collect();
        Classifier::new(features, Some(vec![0, 1]), Body::BoolExpr(e))
    }

    /// Boolean classifier from a truth table in lexicographic order.
    pub fn from_truth_table(m: usize, labels: Vec<Label>) -> Result<Self> {
        let features = (1..=m).map(FeatureDomain::boolean).collect();
        Classifier::new(features, None, Body::Table(labels))
    }

    pub fn from_game(game: WeightedVotingGame) -> Result<Self> {
        let features = (1..=game.n_voters()).map(FeatureDomain::boolean).collect();
        Classifier::new(features, Some(vec![0, 1]), Body::Wvg(game))
    }

    pub fn n_features(&self) -> usize {
        self.features.len()
    }

    pub fn features(&self) -> &[FeatureDomain] {
        &self.features
    }

    pub fn classes(&self) -> &[Label] {
        &self.classes
    }

    pub fn body(&self) -> &Body {
        &self.body
    }

    pub fn n_points(&self) -> usize {
        self.outputs.len()
    }

    /// Labels of all points in lexicographic order.
    pub fn outputs(&self) -> &[Label] {
        &self.outputs
    }

    pub fn is_boolean(&self) -> bool {
        self.features.iter().all(FeatureDomain::is_boolean)
    }

    pub fn warnings(&self) -> Vec<String> {
        self.features
            .iter()
            .filter(|f| f.is_trivial())
            .map(|f| format!("feature {} has a single-valued domain", f.id))
            .collect()
    }

    /// Evaluates the model body on `point`.
    pub fn evaluate(&self, point: &[i64]) -> Result<Label> {
        let rank = self.rank_of(point)?;
        Ok(self.body.eval(point, rank))
    }

    pub fn label_at(&self, rank: usize) -> Label {
        self.outputs[rank]
    }

    pub fn rank_of(&self, point: &[i64]) -> Result<usize> {
        if point.len() != self.features.len() {
            return Err(Error::Arity {
                expected: self.features.len(),
                got: point.len(),
            });
        }
        point
            .iter()
            .zip(&self.features)
            .zip(&self.strides)
            .try_fold(0usize, |acc, ((&x, f), &stride)| {
                let idx = f.index_of(x).ok_or(Error::Domain {
                    feature: f.id,
                    value: x,
                })?;
                Ok(acc + idx * stride)
            })
    }

    pub fn point_at(&self, rank: usize) -> Point {
        self.features
            .iter()
            .zip(&self.strides)
            .map(|(f, &stride)| f.values[(rank / stride) % f.size()])
            .collect()
    }

    /// Domain index of feature `i` (1-based) at point `rank`.
    pub(crate) fn value_index(&self, rank: usize, feature: usize) -> usize {
        (rank / self.strides[feature - 1]) % self.features[feature - 1].size()
    }

    /// Ranks of all points agreeing with `reference` on `fixed`, ascending.
    pub fn ranks_matching(
        &self,
        reference: usize,
        fixed: FeatureSet,
    ) -> impl Iterator<Item = usize> + '_ {
        let base: usize = fixed
            .iter()
            .map(|i| self.value_index(reference, i) * self.strides[i - 1])
            .sum();
        let free: Vec<(usize, usize)> = (1..=self.n_features())
            .filter(|&i| !fixed.contains(i))
            .map(|i| (self.strides[i - 1], self.features[i - 1].size()))
            .collect();
        let count: usize = free.iter().map(|&(_, size)| size).product();
        (0..count).map(move |mut k| {
            let mut rank = base;
            for &(stride, size) in free.iter().rev() {
                rank += (k % size) * stride;
                k /= size;
            }
            rank
        })
    }

    /// Applies a class relabeling `σ`, which must be a bijection on the
    /// declared classes.
    pub fn relabel(&self, sigma: &BTreeMap<Label, Label>) -> Result<Classifier> {
        for c in &self.classes {
            if !sigma.contains_key(c) {
                return Err(Error::InvalidRelabeling(format!("class {c} is not mapped")));
            }
        }
        let images: BTreeSet<Label> = self.classes.iter().map(|c| sigma[c]).collect();
        if images.len() != self.classes.len() {
            return Err(Error::InvalidRelabeling("mapping is not injective".into()));
        }
        let map = |c: Label| sigma[&c];
        let body = match &self.body {
            Body::Tree(root) => Body::Tree(relabel_tree(root, &map)),
            _ => Body::Table(self.outputs.iter().map(|&c| map(c)).collect()),
        };
        Classifier::with_limits(
            self.features.clone(),
            Some(images.into_iter().collect()),
            body,
            ScaleLimits {
                max_features: HARD_MAX_FEATURES,
                max_points: DEFAULT_MAX_POINTS,
            },
        )
    }
}

fn relabel_tree(node: &TreeNode, map: &impl Fn(Label) -> Label) -> TreeNode {
    match node {
        TreeNode::Leaf { leaf } => TreeNode::Leaf { leaf: map(*leaf) },
        TreeNode::Split { feature, branches } => TreeNode::Split {
            feature: *feature,
            branches: branches
                .iter()
                .map(|b| Branch {
                    value: b.value,
                    node: relabel_tree(&b.node, map),
                })
                .collect(),
        },
    }
}

fn require_boolean(features: &[FeatureDomain], what: &str) -> Result<()> {
    match features.iter().find(|f| !f.is_boolean()) {
        Some(f) => Err(Error::InvalidModel(format!(
            "{what} needs boolean features; feature {} has domain {:?}",
            f.id, f.values
        ))),
        None => Ok(()),
    }
}

/// `{ i | x_i = v_i }`.
pub fn agreement_set(x: &[i64], v: &[i64]) -> FeatureSet {
    FeatureSet::from_features(
        x.iter()
            .zip(v)
            .enumerate()
            .filter(|(_, (a, b))| a == b)
            .map(|(i, _)| i + 1),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub point: Point,
    pub label: Label,
}

/// A classifier paired with an instance `(v, κ(v))`.
#[derive(Debug, Clone)]
pub struct ExplanationProblem {
    classifier: Arc<Classifier>,
    instance: Instance,
    rank: usize,
    pub(crate) cache: Cache,
}

impl ExplanationProblem {
    /// Builds a problem; a supplied `label` must match the prediction.
    pub fn new(classifier: Arc<Classifier>, point: Point, label: Option<Label>) -> Result<Self> {
        let rank = classifier.rank_of(&point)?;
        let predicted = classifier.label_at(rank);
        if let Some(given) = label {
            if given != predicted {
                return Err(Error::LabelMismatch { given, predicted });
            }
        }
        Ok(ExplanationProblem {
            classifier,
            instance: Instance {
                point,
                label: predicted,
            },
            rank,
            cache: Cache::default(),
        })
    }

    pub fn at_rank(classifier: Arc<Classifier>, rank: usize) -> Self {
        let point = classifier.point_at(rank);
        let label = classifier.label_at(rank);
        ExplanationProblem {
            classifier,
            instance: Instance { point, label },
            rank,
            cache: Cache::default(),
        }
    }

    pub fn classifier(&self) -> &Arc<Classifier> {
        &self.classifier
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn n_features(&self) -> usize {
        self.classifier.n_features()
    }

    pub fn all_features(&self) -> FeatureSet {
        FeatureSet::full(self.n_features())
    }

    pub fn prediction(&self) -> Label {
        self.instance.label
    }

    pub(crate) fn rank(&self) -> usize {
        self.rank
    }

    /// `Υ(S; v)` in lexicographic order.
    pub fn select_points(&self, fixed: FeatureSet) -> Vec<Point> {
        self.classifier
            .ranks_matching(self.rank, fixed)
            .map(|r| self.classifier.point_at(r))
            .collect()
    }

    /// The same problem over a relabeled classifier.
    pub fn relabeled(&self, sigma: &BTreeMap<Label, Label>) -> Result<ExplanationProblem> {
        let classifier = Arc::new(self.classifier.relabel(sigma)?);
        Ok(ExplanationProblem::at_rank(classifier, self.rank))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p_star() -> ExplanationProblem {
        let c = Classifier::from_expression("x1 & (x2 | x3 & x4)", None).unwrap();
        ExplanationProblem::new(Arc::new(c), vec![1, 1, 1, 1], None).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let c = Classifier::from_expression("x1 & (x2 | x3 & x4)", None).unwrap();
        assert_eq!(c.evaluate(&[1, 0, 1, 1]).unwrap(), 1);
        assert_eq!(c.evaluate(&[0, 1, 1, 1]).unwrap(), 0);
        let c1 = Classifier::from_expression("x1", Some(2)).unwrap();
        assert_eq!(c1.evaluate(&[1, 0]).unwrap(), 1);
        assert!(matches!(
            c1.evaluate(&[2, 0]),
            Err(Error::Domain {
                feature: 1,
                value: 2
            })
        ));
        assert!(matches!(c1.evaluate(&[1]), Err(Error::Arity { .. })));
    }

    #[test]
    fn select_points_cardinalities() {
        let p = p_star();
        let pts = p.select_points(FeatureSet::from_features([1, 2]));
        assert_eq!(
            pts,
            vec![
                vec![1, 1, 0, 0],
                vec![1, 1, 0, 1],
                vec![1, 1, 1, 0],
                vec![1, 1, 1, 1]
            ]
        );
        assert_eq!(p.select_points(p.all_features()), vec![vec![1, 1, 1, 1]]);
        let all = p.select_points(FeatureSet::EMPTY);
        assert_eq!(all.len(), 16);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn agreement_examples() {
        let v = [1, 1, 1, 1];
        assert_eq!(
            agreement_set(&[1, 0, 1, 1], &v),
            FeatureSet::from_features([1, 3, 4])
        );
        assert_eq!(agreement_set(&v, &v), FeatureSet::full(4));
        assert_eq!(agreement_set(&[0, 0, 0, 0], &v), FeatureSet::EMPTY);
    }

    #[test]
    fn non_boolean_selection_follows_domains() {
        let features = vec![
            FeatureDomain::new(1, vec![0, 1, 2]).unwrap(),
            FeatureDomain::new(2, vec![5, 7]).unwrap(),
        ];
        let c = Classifier::new(features, None, Body::Table(vec![0, 0, 1, 0, 2, 2])).unwrap();
        assert_eq!(c.point_at(3), vec![1, 7]);
        let p = ExplanationProblem::new(Arc::new(c), vec![2, 5], None).unwrap();
        assert_eq!(p.prediction(), 2);
        assert_eq!(
            p.select_points(FeatureSet::singleton(2)),
            vec![vec![0, 5], vec![1, 5], vec![2, 5]]
        );
    }

    #[test]
    fn constant_and_malformed_models_are_rejected() {
        assert!(Classifier::from_truth_table(2, vec![1, 1, 1, 1]).is_err());
        assert!(Classifier::from_truth_table(2, vec![1, 0, 1]).is_err());
        assert!(Classifier::from_expression("x3", Some(2)).is_err());
        assert!(FeatureDomain::new(1, vec![0, 0]).is_err());
        assert!(FeatureDomain::new(1, vec![]).is_err());
        let features = (1..=2).map(FeatureDomain::boolean).collect();
        assert!(Classifier::new(features, Some(vec![0]), Body::Table(vec![0, 1, 0, 1])).is_err());
    }

    #[test]
    fn scale_limit_is_enforced() {
        let features: Vec<_> = (1..=5).map(FeatureDomain::boolean).collect();
        let limits = ScaleLimits {
            max_features: 4,
            max_points: 1 << 20,
        };
        let body = Body::BoolExpr(expr::parse("x1").unwrap());
        assert!(matches!(
            Classifier::with_limits(features, None, body, limits),
            Err(Error::ScaleLimit(_))
        ));
    }

    #[test]
    fn label_mismatch_is_reported() {
        let c = Arc::new(Classifier::from_expression("x1", Some(2)).unwrap());
        assert!(matches!(
            ExplanationProblem::new(c, vec![1, 1], Some(0)),
            Err(Error::LabelMismatch {
                given: 0,
                predicted: 1
            })
        ));
    }

    #[test]
    fn relabeling() {
        let c = Classifier::from_expression("x1 & x2", None).unwrap();
        let swap: BTreeMap<Label, Label> = [(0, 1), (1, 0)].into();
        let r = c.relabel(&swap).unwrap();
        assert!(r
            .outputs()
            .iter()
            .zip(c.outputs())
            .all(|(a, b)| *a == 1 - *b));
        let id: BTreeMap<Label, Label> = [(0, 0), (1, 1)].into();
        assert_eq!(c.relabel(&id).unwrap().outputs(), c.outputs());
        let odd: BTreeMap<Label, Label> = [(0, 7), (1, 3)].into();
        assert_eq!(c.relabel(&odd).unwrap().classes(), &[3, 7]);
        let partial: BTreeMap<Label, Label> = [(0, 1)].into();
        assert!(matches!(
            c.relabel(&partial),
            Err(Error::InvalidRelabeling(_))
        ));
        let collapse: BTreeMap<Label, Label> = [(0, 1), (1, 1)].into();
        assert!(matches!(
            c.relabel(&collapse),
            Err(Error::InvalidRelabeling(_))
        ));
    }

    #[test]
    fn wvg_body_matches_game() {
        let g = WeightedVotingGame::new(3, vec![2, 1, 1]).unwrap();
        let c = Classifier::from_game(g).unwrap();
        assert_eq!(c.evaluate(&[1, 1, 0]).unwrap(), 1);
        assert_eq!(c.evaluate(&[0, 1, 1]).unwrap(), 0);
    }
}
