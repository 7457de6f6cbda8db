//! Canonical binary tree shapes.
//!
//! A [`TreeShape`] is an immutable, reference-counted value. Every internal
//! node stores its children in canonical order: the first child never has a
//! smaller CP rank than the second. Ordering is decided structurally by
//! [`compare_shapes`], which never touches big integers.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

#[derive(Clone)]
pub struct TreeShape(Arc<Node>);

struct Node {
    children: Option<(TreeShape, TreeShape)>,
    leaves: u64,
    height: u64,
}

impl Drop for Node {
    // Deep chains (caterpillars) would otherwise drop recursively.
    fn drop(&mut self) {
        let mut pending: Vec<TreeShape> = Vec::new();
        if let Some((a, b)) = self.children.take() {
            pending.push(a);
            pending.push(b);
        }
        while let Some(t) = pending.pop() {
            if let Ok(mut node) = Arc::try_unwrap(t.0) {
                if let Some((a, b)) = node.children.take() {
                    pending.push(a);
                    pending.push(b);
                }
            }
        }
    }
}

/// Per-shape quantities used by the probability formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeMetrics {
    pub leaves: u64,
    /// Height in edges.
    pub height: u64,
    /// Internal nodes whose two subtrees have the same shape, `s(t)`.
    pub symmetric_nodes: u64,
    /// `r -> d_r(t)`: number of internal nodes with `r` descendant leaves.
    pub subtree_leaf_counts: BTreeMap<u64, u64>,
}

impl TreeShape {
    /// The single leaf, rank 1.
    pub fn leaf() -> TreeShape {
        static LEAF: OnceLock<TreeShape> = OnceLock::new();
        LEAF.get_or_init(|| {
            TreeShape(Arc::new(Node {
                children: None,
                leaves: 1,
                height: 0,
            }))
        })
        .clone()
    }

    /// Joins two shapes under a new root, putting the larger-ranked child
    /// first.
    pub fn node(a: TreeShape, b: TreeShape) -> TreeShape {
        let (first, second) = match compare_shapes(&a, &b) {
            Ordering::Less => (b, a),
            _ => (a, b),
        };
        TreeShape::from_ordered(first, second)
    }

    /// Caller guarantees `first >= second`.
    pub(crate) fn from_ordered(first: TreeShape, second: TreeShape) -> TreeShape {
        debug_assert!(compare_shapes(&first, &second) != Ordering::Less);
        let leaves = first.leaf_count().saturating_add(second.leaf_count());
        let height = 1 + first.height().max(second.height());
        TreeShape(Arc::new(Node {
            children: Some((first, second)),
            leaves,
            height,
        }))
    }

    /// The `n`-leaf caterpillar: every internal node has a leaf child.
    pub fn caterpillar(n: u64) -> Result<TreeShape> {
        if n == 0 {
            return Err(Error::TooFewLeaves { min: 1, got: 0 });
        }
        let leaf = TreeShape::leaf();
        let mut t = leaf.clone();
        for _ in 1..n {
            t = TreeShape::from_ordered(t, leaf.clone());
        }
        Ok(t)
    }

    /// The `n`-leaf pseudocaterpillar: a chain of `n - 3` internal nodes
    /// whose bottom node carries two cherries.
    pub fn pseudocaterpillar(n: u64) -> Result<TreeShape> {
        if n < 4 {
            return Err(Error::TooFewLeaves { min: 4, got: n });
        }
        let leaf = TreeShape::leaf();
        let cherry = TreeShape::from_ordered(leaf.clone(), leaf.clone());
        let mut t = TreeShape::from_ordered(cherry.clone(), cherry);
        for _ in 4..n {
            t = TreeShape::from_ordered(t, leaf.clone());
        }
        Ok(t)
    }

    pub fn is_leaf(&self) -> bool {
        self.0.children.is_none()
    }

    /// Children in canonical order (larger rank first).
    pub fn children(&self) -> Option<(&TreeShape, &TreeShape)> {
        self.0.children.as_ref().map(|(a, b)| (a, b))
    }

    pub fn leaf_count(&self) -> u64 {
        self.0.leaves
    }

    pub fn height(&self) -> u64 {
        self.0.height
    }

    pub fn is_caterpillar(&self) -> bool {
        self.0.height + 1 == self.0.leaves
    }

    pub fn ptr_eq(a: &TreeShape, b: &TreeShape) -> bool {
        Arc::ptr_eq(&a.0, &b.0)
    }

    fn key(&self) -> *const () {
        Arc::as_ptr(&self.0) as *const ()
    }

    /// Bottom-up fold with memoization on shared subtrees. `internal`
    /// receives the values of the first and second child.
    pub(crate) fn fold<T: Clone>(
        &self,
        mut leaf: impl FnMut() -> T,
        mut internal: impl FnMut(&T, &T) -> T,
    ) -> T {
        let mut memo: HashMap<*const (), T> = HashMap::new();
        let mut stack: Vec<(&TreeShape, bool)> = vec![(self, false)];
        while let Some((t, expanded)) = stack.pop() {
            if memo.contains_key(&t.key()) {
                continue;
            }
            match t.children() {
                None => {
                    memo.insert(t.key(), leaf());
                }
                Some((a, b)) if expanded => {
                    let v = internal(&memo[&a.key()], &memo[&b.key()]);
                    memo.insert(t.key(), v);
                }
                Some((a, b)) => {
                    stack.push((t, true));
                    stack.push((b, false));
                    stack.push((a, false));
                }
            }
        }
        memo.remove(&self.key()).expect("root evaluated")
    }

    /// Leaf count, height, symmetric nodes and `d_r` in one traversal.
    pub fn metrics(&self) -> ShapeMetrics {
        let mut symmetric_nodes = 0;
        let mut counts = BTreeMap::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            if let Some((a, b)) = t.children() {
                *counts.entry(t.leaf_count()).or_insert(0) += 1;
                if a == b {
                    symmetric_nodes += 1;
                }
                stack.push(a);
                stack.push(b);
            }
        }
        ShapeMetrics {
            leaves: self.leaf_count(),
            height: self.height(),
            symmetric_nodes,
            subtree_leaf_counts: counts,
        }
    }

    /// Checks the canonical child order at every internal node.
    pub fn is_canonical(&self) -> bool {
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            if let Some((a, b)) = t.children() {
                if compare_shapes(a, b) == Ordering::Less {
                    return false;
                }
                stack.push(a);
                stack.push(b);
            }
        }
        true
    }
}

/// Orders two shapes by CP rank without computing ranks.
///
/// A leaf is below every internal node; internal nodes compare their first
/// children, then their second children. The rank map
/// `(L, R) -> L(L-1)/2 + 1 + R` is strictly increasing in lexicographic
/// `(L, R)` on `L >= R >= 1`, so this is exactly rank order. Shapes of
/// different height are ordered by height directly, since every rank of
/// height `h` lies below every rank of height `h + 1`.
pub fn compare_shapes(a: &TreeShape, b: &TreeShape) -> Ordering {
    let mut stack = vec![(a, b)];
    while let Some((x, y)) = stack.pop() {
        if TreeShape::ptr_eq(x, y) {
            continue;
        }
        match x.height().cmp(&y.height()) {
            Ordering::Equal => {}
            other => return other,
        }
        match (x.children(), y.children()) {
            (None, None) => {}
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some((x1, x2)), Some((y1, y2))) => {
                stack.push((x2, y2));
                stack.push((x1, y1));
            }
        }
    }
    Ordering::Equal
}

impl PartialEq for TreeShape {
    fn eq(&self, other: &Self) -> bool {
        self.leaf_count() == other.leaf_count()
            && compare_shapes(self, other) == Ordering::Equal
    }
}

impl Eq for TreeShape {}

impl PartialOrd for TreeShape {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TreeShape {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_shapes(self, other)
    }
}

impl fmt::Debug for TreeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::newick::to_newick(self))
    }
}

impl fmt::Display for TreeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::newick::to_newick(self))
    }
}
