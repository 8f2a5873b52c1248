//! Multi-way decision trees over discrete features, one test per node.

use serde::{Deserialize, Serialize};

use super::{FeatureDomain, Label};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TreeNode {
    Leaf {
        leaf: Label,
    },
    Split {
        feature: usize,
        branches: Vec<Branch>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub value: i64,
    pub node: TreeNode,
}

impl TreeNode {
    pub fn eval(&self, values: &[i64]) -> Label {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { leaf } => return *leaf,
                TreeNode::Split { feature, branches } => {
                    let x = values[feature - 1];
                    node = &branches
                        .iter()
                        .find(|b| b.value == x)
                        .expect("validated tree covers every domain value")
                        .node;
                }
            }
        }
    }

    /// Checks that every split names a known feature and has exactly one
    /// branch per domain value.
    pub fn validate(&self, features: &[FeatureDomain]) -> Result<()> {
        match self {
            TreeNode::Leaf { .. } => Ok(()),
            TreeNode::Split { feature, branches } => {
                let domain = features.get(feature.wrapping_sub(1)).ok_or_else(|| {
                    Error::InvalidModel(format!("tree tests unknown feature {feature}"))
                })?;
                for value in &domain.values {
                    let hits = branches.iter().filter(|b| b.value == *value).count();
                    if hits != 1 {
                        return Err(Error::InvalidModel(format!(
                            "tree split on feature {feature} has {hits} branches for value {value}"
                        )));
                    }
                }
                if let Some(extra) = branches.iter().find(|b| !domain.values.contains(&b.value)) {
                    return Err(Error::InvalidModel(format!(
                        "tree split on feature {feature} has branch for value {} outside its domain",
                        extra.value
                    )));
                }
                branches.iter().try_for_each(|b| b.node.validate(features))
            }
        }
    }
}
