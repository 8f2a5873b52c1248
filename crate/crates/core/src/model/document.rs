//! JSON model and instance documents.

use serde::{Deserialize, Serialize};

use super::{expr, Body, Classifier, FeatureDomain, Label, Point, TreeNode, WeightedVotingGame};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureDoc {
    pub id: usize,
    pub values: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BodyDoc {
    Table { labels: Vec<Label> },
    Tree { root: TreeNode },
    Boolexpr { expr: String },
    Wvg { quota: u64, weights: Vec<u64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub features: Vec<FeatureDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<Label>>,
    pub body: BodyDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceDoc {
    pub point: Point,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Label>,
}

impl ModelDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }

    pub fn into_classifier(self) -> Result<Classifier> {
        let features = self
            .features
            .into_iter()
            .map(|f| FeatureDomain::new(f.id, f.values))
            .collect::<Result<Vec<_>>>()?;
        let body = match self.body {
            BodyDoc::Table { labels } => Body::Table(labels),
            BodyDoc::Tree { root } => Body::Tree(root),
            BodyDoc::Boolexpr { expr } => Body::BoolExpr(expr::parse(&expr)?),
            BodyDoc::Wvg { quota, weights } => Body::Wvg(WeightedVotingGame::new(quota, weights)?),
        };
        Classifier::new(features, self.classes, body)
    }
}

impl InstanceDoc {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }
}

impl Classifier {
    /// Parses a JSON model document.
    pub fn parse_document(text: &str) -> Result<Classifier> {
        ModelDocument::parse(text)?.into_classifier()
    }

    pub fn to_document(&self) -> ModelDocument {
        let body = match self.body() {
            Body::Table(labels) => BodyDoc::Table {
                labels: labels.clone(),
            },
            Body::Tree(root) => BodyDoc::Tree { root: root.clone() },
            Body::BoolExpr(e) => BodyDoc::Boolexpr {
                expr: e.to_string(),
            },
            Body::Wvg(g) => BodyDoc::Wvg {
                quota: g.quota(),
                weights: g.weights().to_vec(),
            },
        };
        ModelDocument {
            features: self
                .features()
                .iter()
                .map(|f| FeatureDoc {
                    id: f.id(),
                    values: f.values().to_vec(),
                })
                .collect(),
            classes: Some(self.classes().to_vec()),
            body,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("model documents serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_body_kind() {
        let boolexpr = r#"{"features":[{"id":1,"values":[0,1]},{"id":2,"values":[0,1]},
            {"id":3,"values":[0,1]},{"id":4,"values":[0,1]}],
            "classes":[0,1],"body":{"kind":"boolexpr","expr":"x1 & (x2 | x3 & x4)"}}"#;
        let c = Classifier::parse_document(boolexpr).unwrap();
        assert_eq!(c.outputs().iter().filter(|&&y| y == 1).count(), 5);

        let table = r#"{"features":[{"id":1,"values":[0,1]},{"id":2,"values":[0,1]}],
            "body":{"kind":"table","labels":[0,0,1,1]}}"#;
        let t = Classifier::parse_document(table).unwrap();
        assert_eq!(t.evaluate(&[1, 0]).unwrap(), 1);

        let tree = r#"{"features":[{"id":1,"values":[0,1,2]},{"id":2,"values":[0,1]}],
            "classes":[0,1,2],
            "body":{"kind":"tree","root":{"feature":1,"branches":[
                {"value":0,"node":{"leaf":0}},
                {"value":1,"node":{"feature":2,"branches":[
                    {"value":0,"node":{"leaf":1}},{"value":1,"node":{"leaf":2}}]}},
                {"value":2,"node":{"leaf":2}}]}}}"#;
        let tr = Classifier::parse_document(tree).unwrap();
        assert_eq!(tr.evaluate(&[1, 1]).unwrap(), 2);
        assert_eq!(tr.evaluate(&[1, 0]).unwrap(), 1);
        assert_eq!(tr.evaluate(&[0, 1]).unwrap(), 0);

        let wvg = r#"{"features":[{"id":1,"values":[0,1]},{"id":2,"values":[0,1]},{"id":3,"values":[0,1]}],
            "body":{"kind":"wvg","quota":3,"weights":[2,1,1]}}"#;
        let w = Classifier::parse_document(wvg).unwrap();
        assert_eq!(w.evaluate(&[1, 0, 1]).unwrap(), 1);
    }

    #[test]
    fn rejects_bad_documents() {
        let non_total =
            r#"{"features":[{"id":1,"values":[0,1]}],"body":{"kind":"table","labels":[0]}}"#;
        assert!(matches!(
            Classifier::parse_document(non_total),
            Err(Error::InvalidModel(_))
        ));
        let unknown =
            r#"{"features":[{"id":1,"values":[0,1]}],"body":{"kind":"boolexpr","expr":"x1 | x2"}}"#;
        assert!(matches!(
            Classifier::parse_document(unknown),
            Err(Error::InvalidModel(_))
        ));
        let syntax =
            r#"{"features":[{"id":1,"values":[0,1]}],"body":{"kind":"boolexpr","expr":"x1 &"}}"#;
        assert!(matches!(
            Classifier::parse_document(syntax),
            Err(Error::Syntax { token: 3, .. })
        ));
        let partial_tree = r#"{"features":[{"id":1,"values":[0,1]}],
            "body":{"kind":"tree","root":{"feature":1,"branches":[{"value":0,"node":{"leaf":0}}]}}}"#;
        assert!(matches!(
            Classifier::parse_document(partial_tree),
            Err(Error::InvalidModel(_))
        ));
        assert!(matches!(
            Classifier::parse_document("{"),
            Err(Error::Document(_))
        ));
    }

    #[test]
    fn instance_documents() {
        let i = InstanceDoc::parse(r#"{"point":[1,1,1,1]}"#).unwrap();
        assert_eq!(i.label, None);
        let j = InstanceDoc::parse(r#"{"point":[1,0],"label":1}"#).unwrap();
        assert_eq!(j.label, Some(1));
    }
}
