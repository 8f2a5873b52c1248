use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::{canonicalize, FeatureSet, MAX_MASK_FEATURES};

/// A weighted voting game `[Q; w1, ..., wm]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedVotingGame {
    quota: u64,
    weights: Vec<u64>,
}

impl WeightedVotingGame {
    pub fn new(quota: u64, weights: Vec<u64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidGame("no voters".into()));
        }
        if weights.len() > MAX_MASK_FEATURES {
            return Err(Error::InvalidGame(format!(
                "{} voters exceed the {MAX_MASK_FEATURES}-voter limit",
                weights.len()
            )));
        }
        let total: u64 = weights.iter().sum();
        if quota > total {
            return Err(Error::InvalidGame(format!(
                "quota {quota} exceeds total weight {total}"
            )));
        }
        Ok(WeightedVotingGame { quota, weights })
    }

    pub fn quota(&self) -> u64 {
        self.quota
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn n_voters(&self) -> usize {
        self.weights.len()
    }

    pub fn weight_of(&self, coalition: FeatureSet) -> u64 {
        coalition.iter().map(|i| self.weights[i - 1]).sum()
    }

    pub fn is_winning(&self, coalition: FeatureSet) -> bool {
        self.weight_of(coalition) >= self.quota
    }

    /// Minimal winning coalitions in canonical order.
    pub fn minimal_winning_coalitions(&self) -> Vec<FeatureSet> {
        let mut family: Vec<FeatureSet> = FeatureSet::all(self.n_voters())
            .filter(|&s| self.is_winning(s) && s.iter().all(|i| !self.is_winning(s.without(i))))
            .collect();
        canonicalize(&mut family);
        family
    }

    /// All winning coalitions in canonical order.
    pub fn winning_coalitions(&self) -> Vec<FeatureSet> {
        let mut family: Vec<FeatureSet> = FeatureSet::all(self.n_voters())
            .filter(|&s| self.is_winning(s))
            .collect();
        canonicalize(&mut family);
        family
    }
}

impl std::fmt::Display for WeightedVotingGame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let ws: Vec<String> = self.weights.iter().map(u64::to_string).collect();
        write!(f, "[{}; {}]", self.quota, ws.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quota_above_total_weight_is_rejected() {
        assert!(WeightedVotingGame::new(5, vec![2, 1, 1]).is_err());
        assert!(WeightedVotingGame::new(4, vec![2, 1, 1]).is_ok());
    }

    #[test]
    fn minimal_winning_coalitions_of_3_211() {
        let g = WeightedVotingGame::new(3, vec![2, 1, 1]).unwrap();
        assert!(g.is_winning(FeatureSet::from_features([1, 2])));
        assert!(!g.is_winning(FeatureSet::from_features([2, 3])));
        assert_eq!(
            g.minimal_winning_coalitions(),
            vec![
                FeatureSet::from_features([1, 2]),
                FeatureSet::from_features([1, 3])
            ]
        );
        assert_eq!(g.to_string(), "[3; 2,1,1]");
    }

    #[test]
    fn quota_equal_to_total_only_grand_coalition_wins() {
        let g = WeightedVotingGame::new(4, vec![2, 1, 1]).unwrap();
        assert_eq!(g.winning_coalitions(), vec![FeatureSet::full(3)]);
    }
}
