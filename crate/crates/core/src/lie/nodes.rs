use std::fmt;

/// A subset of the simple roots `{alpha_1, ..., alpha_l}`, stored as a bitmask.
///
/// Nodes are 1-based: node `i` lives in bit `i - 1`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeSet(u32);

/// Largest rank representable by [`NodeSet`] and sign vectors.
pub const MAX_RANK: usize = 32;

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    pub fn full(rank: usize) -> Self {
        assert!(rank <= MAX_RANK, "rank {rank} exceeds {MAX_RANK}");
        if rank == MAX_RANK {
            NodeSet(u32::MAX)
        } else {
            NodeSet((1u32 << rank) - 1)
        }
    }

    pub fn from_bits(bits: u32) -> Self {
        NodeSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn single(node: usize) -> Self {
        NodeSet::EMPTY.with(node)
    }

    pub fn contains(self, node: usize) -> bool {
        (1..=MAX_RANK).contains(&node) && self.0 & (1 << (node - 1)) != 0
    }

    pub fn with(self, node: usize) -> Self {
        assert!((1..=MAX_RANK).contains(&node), "node {node} out of range");
        NodeSet(self.0 | (1 << (node - 1)))
    }

    pub fn without(self, node: usize) -> Self {
        assert!((1..=MAX_RANK).contains(&node), "node {node} out of range");
        NodeSet(self.0 & !(1 << (node - 1)))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & other.0)
    }

    pub fn difference(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & !other.0)
    }

    pub fn complement(self, rank: usize) -> NodeSet {
        NodeSet::full(rank).difference(self)
    }

    pub fn is_subset(self, other: NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Nodes in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (1..=MAX_RANK).filter(move |&i| self.contains(i))
    }

    /// 1-based position of `node` among the members listed in increasing order.
    pub fn position(self, node: usize) -> Option<usize> {
        self.iter().position(|i| i == node).map(|p| p + 1)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `{1..=rank}` with exactly `size` members, in
    /// lexicographic order of their sorted member lists.
    pub fn subsets_of_size(rank: usize, size: usize) -> Vec<NodeSet> {
        let mut out: Vec<NodeSet> = (0u32..(1u32 << rank))
            .map(NodeSet)
            .filter(|s| s.len() == size)
            .collect();
        out.sort_by_key(|s| s.to_vec());
        out
    }
}

impl FromIterator<usize> for NodeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(NodeSet::EMPTY, NodeSet::with)
    }
}

impl fmt::Display for NodeSet {
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

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_are_one_based() {
        let s: NodeSet = [2, 4, 5].into_iter().collect();
        assert_eq!(s.position(2), Some(1));
        assert_eq!(s.position(5), Some(3));
        assert_eq!(s.position(3), None);
        assert_eq!(s.to_string(), "{2,4,5}");
        assert_eq!(s.complement(5).to_vec(), vec![1, 3]);
    }

    #[test]
    fn subsets_are_lexicographic() {
        let subs = NodeSet::subsets_of_size(3, 2);
        let lists: Vec<_> = subs.iter().map(|s| s.to_vec()).collect();
        assert_eq!(lists, vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
    }
}
