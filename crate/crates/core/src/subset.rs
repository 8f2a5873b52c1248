//! Feature subsets as bit masks. Feature `i` (1-based) occupies bit `i - 1`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;

/// Maximum number of features a mask can address.
pub const MAX_MASK_FEATURES: usize = 32;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FeatureSet(u32);

impl FeatureSet {
    pub const EMPTY: FeatureSet = FeatureSet(0);

    pub fn from_mask(mask: u32) -> Self {
        FeatureSet(mask)
    }

    /// The full set `{1..m}`.
    pub fn full(m: usize) -> Self {
        debug_assert!(m <= MAX_MASK_FEATURES);
        if m == 32 {
            FeatureSet(u32::MAX)
        } else {
            FeatureSet((1u32 << m) - 1)
        }
    }

    pub fn singleton(feature: usize) -> Self {
        FeatureSet(1 << (feature - 1))
    }

    /// Builds a set from 1-based feature indices.
    pub fn from_features<I: IntoIterator<Item = usize>>(features: I) -> Self {
        features
            .into_iter()
            .fold(FeatureSet::EMPTY, |acc, i| acc.with(i))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn contains(self, feature: usize) -> bool {
        (1..=MAX_MASK_FEATURES).contains(&feature) && self.0 & (1 << (feature - 1)) != 0
    }

    pub fn with(self, feature: usize) -> Self {
        FeatureSet(self.0 | (1 << (feature - 1)))
    }

    pub fn without(self, feature: usize) -> Self {
        FeatureSet(self.0 & !(1 << (feature - 1)))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: FeatureSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset(self, other: FeatureSet) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn intersects(self, other: FeatureSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: FeatureSet) -> Self {
        FeatureSet(self.0 | other.0)
    }

    pub fn intersection(self, other: FeatureSet) -> Self {
        FeatureSet(self.0 & other.0)
    }

    /// Complement relative to `{1..m}`.
    pub fn complement(self, m: usize) -> Self {
        FeatureSet(!self.0 & FeatureSet::full(m).0)
    }

    /// Ascending 1-based feature indices.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(bit + 1)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `{1..m}` in mask order.
    pub fn all(m: usize) -> impl Iterator<Item = FeatureSet> {
        (0..(1u64 << m)).map(|mask| FeatureSet(mask as u32))
    }

    /// Canonical order used by every family: cardinality, then mask value.
    pub fn canonical_cmp(&self, other: &FeatureSet) -> Ordering {
        self.len().cmp(&other.len()).then(self.0.cmp(&other.0))
    }
}

/// Sorts a family into canonical order and removes duplicates.
pub fn canonicalize(family: &mut Vec<FeatureSet>) {
    family.sort_by(FeatureSet::canonical_cmp);
    family.dedup();
}

impl fmt::Debug for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for FeatureSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for FeatureSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let features = Vec::<usize>::deserialize(deserializer)?;
        if let Some(bad) = features.iter().find(|&&i| i == 0 || i > MAX_MASK_FEATURES) {
            return Err(serde::de::Error::custom(format!(
                "feature index {bad} out of range"
            )));
        }
        Ok(FeatureSet::from_features(features))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let s = FeatureSet::from_features([1, 3, 4]);
        assert_eq!(s.mask(), 0b1101);
        assert_eq!(s.len(), 3);
        assert!(s.contains(3) && !s.contains(2));
        assert_eq!(s.without(3).to_vec(), vec![1, 4]);
        assert_eq!(s.complement(4), FeatureSet::singleton(2));
        assert_eq!(s.to_string(), "{1,3,4}");
        assert_eq!(FeatureSet::EMPTY.to_string(), "{}");
        assert!(FeatureSet::from_features([1]).is_proper_subset(s));
    }

    #[test]
    fn canonical_ordering() {
        let mut fam = vec![
            FeatureSet::from_features([2, 4]),
            FeatureSet::from_features([1]),
            FeatureSet::from_features([2, 3]),
            FeatureSet::from_features([1]),
        ];
        canonicalize(&mut fam);
        let rendered: Vec<String> = fam.iter().map(|s| s.to_string()).collect();
        assert_eq!(rendered, ["{1}", "{2,3}", "{2,4}"]);
    }

    #[test]
    fn serde_as_index_lists() {
        let s = FeatureSet::from_features([2, 5]);
        assert_eq!(serde_json::to_string(&s).unwrap(), "[2,5]");
        let back: FeatureSet = serde_json::from_str("[5,2]").unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<FeatureSet>("[0]").is_err());
    }
}
