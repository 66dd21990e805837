use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A subset of weight indices `{0, …, n-1}`, stored as a bitmask.
///
/// Ordered by cardinality, then lexicographically by sorted members, which
/// is the canonical order for face lists. Serialized as a sorted list of
/// 1-based indices.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct IndexSet(u64);

impl IndexSet {
    pub const CAPACITY: usize = 64;

    pub fn empty() -> Self {
        IndexSet(0)
    }

    pub fn full(n: usize) -> Self {
        assert!(n <= Self::CAPACITY);
        if n == Self::CAPACITY {
            IndexSet(u64::MAX)
        } else {
            IndexSet((1u64 << n) - 1)
        }
    }

    pub fn from_bits(bits: u64) -> Self {
        IndexSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        IndexSet(1 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        i < Self::CAPACITY && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1 << i);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn intersection(self, other: Self) -> Self {
        IndexSet(self.0 & other.0)
    }

    pub fn union(self, other: Self) -> Self {
        IndexSet(self.0 | other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..Self::CAPACITY).filter(move |&i| self.contains(i))
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Image under a relabelling `i ↦ map[i]`.
    pub fn mapped(self, map: &[usize]) -> Self {
        self.iter().fold(IndexSet::empty(), |mut acc, i| {
            acc.insert(map[i]);
            acc
        })
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = IndexSet::empty();
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.to_vec().cmp(&other.to_vec()))
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// 1-based, e.g. `{1,2,3}`.
impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(|i| i as u64 + 1))
    }
}

impl<'de> Deserialize<'de> for IndexSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let v: Vec<u64> = Vec::deserialize(d)?;
        let mut s = IndexSet::empty();
        for i in v {
            if i == 0 || i > Self::CAPACITY as u64 {
                return Err(D::Error::custom(format!("index {i} out of range")));
            }
            s.insert(i as usize - 1);
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_by_size_then_members() {
        let mut v = [
            IndexSet::from_iter([0, 1, 2]),
            IndexSet::from_iter([2]),
            IndexSet::empty(),
            IndexSet::from_iter([1]),
        ];
        v.sort();
        assert_eq!(
            v.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            ["{}", "{2}", "{3}", "{1,2,3}"]
        );
    }

    #[test]
    fn set_operations() {
        let a = IndexSet::from_iter([0, 2]);
        let b = IndexSet::from_iter([2, 3]);
        assert_eq!(a.intersection(b), IndexSet::singleton(2));
        assert_eq!(a.union(b).len(), 3);
        assert!(IndexSet::singleton(2).is_subset(a));
        assert_eq!(IndexSet::full(3).to_vec(), vec![0, 1, 2]);
        assert_eq!(a.mapped(&[3, 1, 0, 2]), IndexSet::from_iter([3, 0]));
    }

    #[test]
    fn json_is_one_based() {
        let s = IndexSet::from_iter([0, 4]);
        assert_eq!(serde_json::to_string(&s).unwrap(), "[1,5]");
        assert_eq!(serde_json::from_str::<IndexSet>("[1,5]").unwrap(), s);
        assert!(serde_json::from_str::<IndexSet>("[0]").is_err());
    }
}
