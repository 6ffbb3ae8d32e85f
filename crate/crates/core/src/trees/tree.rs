use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kinematics::legs_of;

/// Default largest leaf count accepted by [`enumerate_trees`].
pub const TREE_CUTOFF: usize = 9;

/// A subtree hanging below an edge, on its way down from leaf `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Sub {
    Leaf(usize),
    /// Internal vertex; children sorted by their smallest leaf.
    Node { mask: u32, children: Vec<Arc<Sub>> },
}

impl Sub {
    pub fn mask(&self) -> u32 {
        match self {
            Sub::Leaf(l) => 1 << (l - 1),
            Sub::Node { mask, .. } => *mask,
        }
    }

    fn min_leaf(&self) -> u32 {
        self.mask().trailing_zeros()
    }

    fn node(mut children: Vec<Arc<Sub>>) -> Sub {
        children.sort_by_key(|c| c.min_leaf());
        let mask = children.iter().fold(0, |m, c| m | c.mask());
        Sub::Node { mask, children }
    }
}

impl fmt::Display for Sub {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sub::Leaf(l) => write!(f, "{l}"),
            Sub::Node { children, .. } => {
                f.write_str("(")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// An internal vertex seen from leaf `n`: the legs below it and the masks
/// of the subtrees hanging from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexView {
    pub below: u32,
    pub children: Vec<u32>,
    /// True for the vertex adjacent to leaf `n`, whose upward edge is external.
    pub is_top: bool,
}

impl VertexView {
    pub fn valence(&self) -> usize {
        self.children.len() + 1
    }
}

/// Series-reduced tree with leaves `1..=n`, stored rooted at leaf `n`.
///
/// Leaf labels make the rooted form with children sorted by smallest leaf a
/// canonical form, so structural equality is isomorphism fixing leaves.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LeafTree {
    n_leaves: usize,
    top: Arc<Sub>,
}

impl LeafTree {
    pub fn n_leaves(&self) -> usize {
        self.n_leaves
    }

    pub fn top(&self) -> &Arc<Sub> {
        &self.top
    }

    /// Internal vertices, parents before children.
    pub fn vertices(&self) -> Vec<VertexView> {
        let mut out = Vec::new();
        let mut stack = vec![(self.top.clone(), true)];
        while let Some((sub, is_top)) = stack.pop() {
            if let Sub::Node { mask, children } = &*sub {
                out.push(VertexView {
                    below: *mask,
                    children: children.iter().map(|c| c.mask()).collect(),
                    is_top,
                });
                for c in children.iter().rev() {
                    stack.push((c.clone(), false));
                }
            }
        }
        out
    }

    /// Masks (legs below, leaf `n` excluded) of the internal edges.
    pub fn internal_edges(&self) -> Vec<u32> {
        self.vertices()
            .into_iter()
            .filter(|v| !v.is_top)
            .map(|v| v.below)
            .collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices().len()
    }

    /// Builds the canonical tree from an undirected edge list on vertex ids
    /// `1..=n` (leaves) and `> n` (internal vertices).
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<LeafTree> {
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &(u, v) in edges {
            adj.entry(u).or_default().push(v);
            adj.entry(v).or_default().push(u);
        }
        let bad = |msg: &str| Error::InvalidConfig(format!("not a leaf-labelled tree: {msg}"));
        if adj.len() != edges.len() + 1 {
            return Err(bad("vertex and edge counts disagree"));
        }
        for (&v, nb) in &adj {
            let leaf = (1..=n).contains(&v);
            if leaf != (nb.len() == 1) && !(n == 2 && leaf) {
                return Err(bad("leaf labels must sit on degree-one vertices"));
            }
            if !leaf && nb.len() < 3 {
                return Err(bad("internal vertex of valence below three"));
            }
        }
        let start = *adj
            .get(&n)
            .and_then(|nb| nb.first())
            .ok_or_else(|| bad("leaf n missing"))?;
        fn build(
            v: usize,
            parent: usize,
            n: usize,
            adj: &BTreeMap<usize, Vec<usize>>,
            seen: &mut BTreeSet<usize>,
        ) -> Option<Arc<Sub>> {
            if !seen.insert(v) {
                return None;
            }
            if (1..=n).contains(&v) {
                return Some(Arc::new(Sub::Leaf(v)));
            }
            let mut children = Vec::new();
            for &w in &adj[&v] {
                if w != parent {
                    children.push(build(w, v, n, adj, seen)?);
                }
            }
            Some(Arc::new(Sub::node(children)))
        }
        let mut seen = BTreeSet::from([n]);
        let top = build(start, n, n, &adj, &mut seen).ok_or_else(|| bad("cycle"))?;
        if seen.len() != adj.len() {
            return Err(bad("disconnected"));
        }
        Ok(LeafTree { n_leaves: n, top })
    }

    /// Undirected edge list with leaves `1..=n` and internal ids from `n+1`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut next = self.n_leaves + 1;
        fn walk(sub: &Sub, parent: usize, next: &mut usize, out: &mut Vec<(usize, usize)>) {
            match sub {
                Sub::Leaf(l) => out.push((parent, *l)),
                Sub::Node { children, .. } => {
                    let id = *next;
                    *next += 1;
                    out.push((parent, id));
                    for c in children {
                        walk(c, id, next, out);
                    }
                }
            }
        }
        walk(&self.top, self.n_leaves, &mut next, &mut out);
        out
    }
}

impl fmt::Display for LeafTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.top, self.n_leaves)
    }
}

/// Calls `visit` with the blocks of every set partition of the bits of
/// `mask`, blocks ordered by their smallest bit.
pub fn for_each_mask_partition(mask: u32, visit: &mut impl FnMut(&[u32])) {
    let bits: Vec<u32> = (0..32).filter(|b| mask >> b & 1 == 1).collect();
    fn rec(i: usize, bits: &[u32], blocks: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
        if i == bits.len() {
            visit(blocks);
            return;
        }
        let bit = 1u32 << bits[i];
        for j in 0..blocks.len() {
            blocks[j] |= bit;
            rec(i + 1, bits, blocks, visit);
            blocks[j] &= !bit;
        }
        blocks.push(bit);
        rec(i + 1, bits, blocks, visit);
        blocks.pop();
    }
    if mask != 0 {
        rec(0, &bits, &mut Vec::new(), visit);
    }
}

/// Set partitions of `mask` into at least two blocks.
pub fn proper_partitions(mask: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for_each_mask_partition(mask, &mut |blocks| {
        if blocks.len() >= 2 {
            out.push(blocks.to_vec());
        }
    });
    out
}

/// Memoized rooted subtrees over leaf subsets.
#[derive(Default)]
pub struct SubtreeCache {
    memo: HashMap<u32, Arc<Vec<Arc<Sub>>>>,
}

impl SubtreeCache {
    pub fn new() -> SubtreeCache {
        SubtreeCache::default()
    }

    /// Every rooted series-reduced subtree whose leaves are exactly `mask`.
    pub fn subtrees(&mut self, mask: u32) -> Arc<Vec<Arc<Sub>>> {
        if let Some(v) = self.memo.get(&mask) {
            return v.clone();
        }
        let out = if mask.count_ones() == 1 {
            vec![Arc::new(Sub::Leaf(mask.trailing_zeros() as usize + 1))]
        } else {
            let mut out = Vec::new();
            for blocks in proper_partitions(mask) {
                let lists: Vec<_> = blocks.iter().map(|&b| self.subtrees(b)).collect();
                for_each_product(&lists, &mut |children| {
                    out.push(Arc::new(Sub::Node {
                        mask,
                        children: children.to_vec(),
                    }));
                });
            }
            out
        };
        let out = Arc::new(out);
        self.memo.insert(mask, out.clone());
        out
    }
}

/// Cartesian product over lists, visiting each choice in lexicographic order.
pub fn for_each_product<T: Clone>(lists: &[Arc<Vec<T>>], visit: &mut impl FnMut(&[T])) {
    fn rec<T: Clone>(i: usize, lists: &[Arc<Vec<T>>], cur: &mut Vec<T>, visit: &mut impl FnMut(&[T])) {
        if i == lists.len() {
            visit(cur);
            return;
        }
        for item in lists[i].iter() {
            cur.push(item.clone());
            rec(i + 1, lists, cur, visit);
            cur.pop();
        }
    }
    rec(0, lists, &mut Vec::with_capacity(lists.len()), visit);
}

/// Streams every tree on `n >= 2` leaves in the deterministic enumeration
/// order without storing the full list.
pub fn visit_trees(n: usize, visit: &mut impl FnMut(&LeafTree)) -> Result<()> {
    if !(2..=16).contains(&n) {
        return Err(Error::InvalidConfig(format!("tree leaf count must lie in 2..=16, got {n}")));
    }
    if n == 2 {
        visit(&LeafTree {
            n_leaves: 2,
            top: Arc::new(Sub::Leaf(1)),
        });
        return Ok(());
    }
    let lower = (1u32 << (n - 1)) - 1;
    let mut cache = SubtreeCache::new();
    for blocks in proper_partitions(lower) {
        let lists: Vec<_> = blocks.iter().map(|&b| cache.subtrees(b)).collect();
        for_each_product(&lists, &mut |children| {
            let tree = LeafTree {
                n_leaves: n,
                top: Arc::new(Sub::Node {
                    mask: lower,
                    children: children.to_vec(),
                }),
            };
            visit(&tree);
        });
    }
    Ok(())
}

/// All leaf-labelled series-reduced trees on `n` leaves.
pub fn enumerate_trees(n: usize) -> Result<Vec<LeafTree>> {
    enumerate_trees_with_cutoff(n, TREE_CUTOFF)
}

pub fn enumerate_trees_with_cutoff(n: usize, cutoff: usize) -> Result<Vec<LeafTree>> {
    if n > cutoff {
        return Err(Error::CutoffExceeded {
            what: "n",
            value: n,
            cutoff,
        });
    }
    let mut out = Vec::new();
    visit_trees(n, &mut |t| out.push(t.clone()))?;
    Ok(out)
}

/// Number of trees on `n` leaves, counted without building them.
pub fn tree_count(n: usize) -> u128 {
    if n == 2 {
        return 1;
    }
    let mut memo: HashMap<u32, u128> = HashMap::new();
    fn count(mask: u32, memo: &mut HashMap<u32, u128>) -> u128 {
        if mask.count_ones() == 1 {
            return 1;
        }
        if let Some(&c) = memo.get(&mask) {
            return c;
        }
        let mut total = 0;
        for blocks in proper_partitions(mask) {
            total += blocks.iter().map(|&b| count(b, memo)).product::<u128>();
        }
        memo.insert(mask, total);
        total
    }
    count((1u32 << (n - 1)) - 1, &mut memo)
}

/// Independent generator: grows every tree on `n` leaves from the star on
/// three leaves by attaching leaf `k` to an existing internal vertex or by
/// splitting an existing edge. Returns the canonical forms, failing if the
/// same tree is produced twice.
pub fn trees_by_insertion(n: usize) -> Result<Vec<LeafTree>> {
    if n < 3 {
        return enumerate_trees(n);
    }
    // Vertex ids: leaves 1..=n, internal vertices from 100 upward.
    let mut current: Vec<Vec<(usize, usize)>> = vec![vec![(100, 1), (100, 2), (100, 3)]];
    for k in 4..=n {
        let mut next = Vec::new();
        for edges in &current {
            let next_id = edges.iter().map(|&(u, v)| u.max(v)).max().unwrap_or(100) + 1;
            let internal: BTreeSet<usize> = edges
                .iter()
                .flat_map(|&(u, v)| [u, v])
                .filter(|&v| v >= 100)
                .collect();
            for &v in &internal {
                let mut e = edges.clone();
                e.push((v, k));
                next.push(e);
            }
            for (idx, &(u, v)) in edges.iter().enumerate() {
                let mut e = edges.clone();
                e.remove(idx);
                e.extend([(u, next_id), (next_id, v), (next_id, k)]);
                next.push(e);
            }
        }
        current = next;
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for edges in current {
        let relabelled: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(u, v)| {
                let f = |x: usize| if x >= 100 { x - 100 + n + 1 } else { x };
                (f(u), f(v))
            })
            .collect();
        let tree = LeafTree::from_edges(n, &relabelled)?;
        let key = tree.to_string();
        if !seen.insert(key.clone()) {
            return Err(Error::InvalidConfig(format!("insertion produced {key} twice")));
        }
        out.push(tree);
    }
    Ok(out)
}

/// Contributions after splitting each combined vertex of valence `k` into
/// its `k + 1` marked parts.
pub fn expanded_vertex_count(n: usize) -> Result<u128> {
    if n < 3 {
        return Err(Error::InvalidConfig("expanded count needs n >= 3".into()));
    }
    let mut memo: HashMap<u32, u128> = HashMap::new();
    fn weight(mask: u32, memo: &mut HashMap<u32, u128>) -> u128 {
        if mask.count_ones() == 1 {
            return 1;
        }
        if let Some(&c) = memo.get(&mask) {
            return c;
        }
        let mut total = 0;
        for blocks in proper_partitions(mask) {
            let valence = blocks.len() as u128 + 1;
            total += (valence + 1) * blocks.iter().map(|&b| weight(b, memo)).product::<u128>();
        }
        memo.insert(mask, total);
        total
    }
    Ok(weight((1u32 << (n - 1)) - 1, &mut memo))
}

/// The same count, summed literally over enumerated trees.
pub fn expanded_vertex_count_by_trees(n: usize) -> Result<u128> {
    let mut total = 0u128;
    visit_trees(n, &mut |t| {
        total += t
            .vertices()
            .iter()
            .map(|v| v.valence() as u128 + 1)
            .product::<u128>();
    })?;
    Ok(total)
}

/// Legs of a mask as a display string, e.g. `{1,3}`.
pub fn mask_label(mask: u32) -> String {
    let legs: Vec<String> = legs_of(mask).map(|l| l.to_string()).collect();
    format!("{{{}}}", legs.join(","))
}
