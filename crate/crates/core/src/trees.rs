//! Rooted trees: the combinatorial invariant attached to a configuration.
//!
//! Vertices are numbered `1..=n`, vertex `0` is the root. A tree carries an
//! explicit child order per vertex; by default children are listed in
//! increasing vertex order, and [`RootedTree::with_child_order`] installs a
//! planar order. Equality of trees ignores that order: two trees are equal when
//! their parent maps and labeled flags agree.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `n` accepted by [`enumerate_trees`].
pub const MAX_ENUMERATION: usize = 10;

#[derive(Clone, Debug)]
pub struct RootedTree {
    parents: Vec<usize>,
    labeled: bool,
    children: Vec<Vec<usize>>,
}

impl PartialEq for RootedTree {
    fn eq(&self, other: &Self) -> bool {
        self.labeled == other.labeled && self.parents == other.parents
    }
}

impl Eq for RootedTree {}

impl RootedTree {
    /// Builds a tree from `parents[v - 1] = parent of v`, with `0` the root.
    pub fn new(parents: Vec<usize>, labeled: bool) -> Result<Self> {
        let n = parents.len();
        for (i, &p) in parents.iter().enumerate() {
            if p > n {
                return Err(Error::InvalidTree(format!(
                    "parent {p} of vertex {} is out of range 0..={n}",
                    i + 1
                )));
            }
            if p == i + 1 {
                return Err(Error::InvalidTree(format!("vertex {p} is its own parent")));
            }
        }
        // every vertex must reach the root in at most n steps
        let mut state = vec![0u8; n + 1]; // 0 unknown, 1 on stack, 2 reaches root
        state[0] = 2;
        for start in 1..=n {
            let mut path = Vec::new();
            let mut v = start;
            while state[v] == 0 {
                state[v] = 1;
                path.push(v);
                v = parents[v - 1];
            }
            if state[v] == 1 {
                return Err(Error::InvalidTree(format!("cycle through vertex {v}")));
            }
            for u in path {
                state[u] = 2;
            }
        }
        let mut children = vec![Vec::new(); n + 1];
        for v in 1..=n {
            children[parents[v - 1]].push(v);
        }
        Ok(Self {
            parents,
            labeled,
            children,
        })
    }

    pub fn empty(labeled: bool) -> Self {
        Self {
            parents: Vec::new(),
            labeled,
            children: vec![Vec::new()],
        }
    }

    /// Root with `m` leaf children.
    pub fn star(m: usize, labeled: bool) -> Self {
        Self::new(vec![0; m], labeled).expect("star is a tree")
    }

    /// Root -> 1 -> 2 -> ... -> n.
    pub fn path(n: usize, labeled: bool) -> Self {
        Self::new((0..n).collect(), labeled).expect("path is a tree")
    }

    /// Number of non-root vertices.
    pub fn len(&self) -> usize {
        self.parents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parents.is_empty()
    }

    pub fn is_labeled(&self) -> bool {
        self.labeled
    }

    pub fn parents(&self) -> &[usize] {
        &self.parents
    }

    pub fn parent(&self, v: usize) -> usize {
        self.parents[v - 1]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn root_children(&self) -> &[usize] {
        &self.children[0]
    }

    pub fn with_labeled(mut self, labeled: bool) -> Self {
        self.labeled = labeled;
        self
    }

    /// Replaces the child order of every vertex. Each list must be a
    /// permutation of the current children of that vertex.
    pub fn with_child_order(mut self, order: Vec<Vec<usize>>) -> Result<Self> {
        if order.len() != self.children.len() {
            return Err(Error::InvalidTree("child order has wrong length".into()));
        }
        for (v, (new, old)) in order.iter().zip(&self.children).enumerate() {
            let mut a = new.clone();
            let mut b = old.clone();
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                return Err(Error::InvalidTree(format!(
                    "child order of vertex {v} is not a permutation of its children"
                )));
            }
        }
        self.children = order;
        Ok(self)
    }

    /// Vertices in breadth-first order starting at the root, following the
    /// stored child order.
    pub fn bfs_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.len() + 1);
        order.push(0);
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            order.extend_from_slice(&self.children[v]);
        }
        order
    }

    /// `T(v)`: the maximal subtree rooted at `v`, renumbered in breadth-first
    /// order. Returns the subtree and, for each of its non-root vertices, the
    /// original vertex index.
    pub fn subtree(&self, v: usize) -> (RootedTree, Vec<usize>) {
        let mut order = vec![v];
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            order.extend_from_slice(&self.children[u]);
        }
        let mut index = vec![usize::MAX; self.len() + 1];
        for (i, &u) in order.iter().enumerate() {
            index[u] = i;
        }
        let parents = order[1..].iter().map(|&u| index[self.parent(u)]).collect();
        let mut tree = RootedTree::new(parents, self.labeled).expect("subtree of a tree");
        let order_children = order
            .iter()
            .map(|&u| self.children[u].iter().map(|&c| index[c]).collect())
            .collect();
        tree = tree.with_child_order(order_children).expect("same children");
        (tree, order[1..].to_vec())
    }

    /// Strict descendants of `v` in breadth-first order.
    pub fn descendants(&self, v: usize) -> Vec<usize> {
        let mut out = self.children[v].clone();
        let mut head = 0;
        while head < out.len() {
            let u = out[head];
            head += 1;
            out.extend_from_slice(&self.children[u]);
        }
        out
    }

    /// Applies a vertex relabeling `perm[v - 1] = new label of v`.
    pub fn relabel(&self, perm: &[usize]) -> Result<RootedTree> {
        let n = self.len();
        if perm.len() != n {
            return Err(Error::Mismatch("relabeling has wrong length".into()));
        }
        let mut parents = vec![0; n];
        for v in 1..=n {
            let p = self.parent(v);
            let np = if p == 0 { 0 } else { perm[p - 1] };
            parents[perm[v - 1] - 1] = np;
        }
        RootedTree::new(parents, self.labeled)
    }
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", vertex_codes(self, self.labeled)[0])
    }
}

/// Tree document: `{"parents": [...], "labeled": bool}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDocument {
    pub parents: Vec<usize>,
    #[serde(default)]
    pub labeled: bool,
}

impl From<&RootedTree> for TreeDocument {
    fn from(t: &RootedTree) -> Self {
        TreeDocument {
            parents: t.parents.clone(),
            labeled: t.labeled,
        }
    }
}

impl TryFrom<TreeDocument> for RootedTree {
    type Error = Error;
    fn try_from(doc: TreeDocument) -> Result<Self> {
        RootedTree::new(doc.parents, doc.labeled)
    }
}

/// Sorted-children parenthesis normal form of an unlabeled rooted tree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalCode(pub String);

impl CanonicalCode {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Number of non-root vertices encoded.
    pub fn vertex_count(&self) -> usize {
        self.0.len() / 2 - 1
    }

    /// Rebuilds a tree (breadth-first numbering) from a code.
    pub fn to_tree(&self) -> Result<RootedTree> {
        let bytes = self.0.as_bytes();
        let mut parents = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        let mut next = 0usize;
        let mut started = false;
        for &b in bytes {
            match b {
                b'(' => {
                    if let Some(&top) = stack.last() {
                        next += 1;
                        parents.push(top);
                        stack.push(next);
                    } else if !started {
                        started = true;
                        stack.push(0);
                    } else {
                        return Err(Error::InvalidTree(format!("bad code {}", self.0)));
                    }
                }
                b')' => {
                    stack
                        .pop()
                        .ok_or_else(|| Error::InvalidTree(format!("bad code {}", self.0)))?;
                }
                _ => return Err(Error::InvalidTree(format!("bad code {}", self.0))),
            }
        }
        if !stack.is_empty() {
            return Err(Error::InvalidTree(format!("bad code {}", self.0)));
        }
        // parents were assigned in depth-first order; that is a valid numbering
        RootedTree::new(parents, false)
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Code of every vertex's subtree (index 0 is the root). With `labeled`, each
/// non-root vertex code is prefixed by its label, so codes of distinct
/// subtrees never coincide.
pub fn vertex_codes(t: &RootedTree, labeled: bool) -> Vec<String> {
    let order = t.bfs_order();
    let mut codes = vec![String::new(); t.len() + 1];
    for &v in order.iter().rev() {
        let mut kids: Vec<&str> = t.children(v).iter().map(|&c| codes[c].as_str()).collect();
        kids.sort_unstable();
        let mut s = String::with_capacity(2 + kids.iter().map(|k| k.len()).sum::<usize>());
        if labeled && v != 0 {
            s.push_str(&v.to_string());
        }
        s.push('(');
        for k in kids {
            s.push_str(k);
        }
        s.push(')');
        codes[v] = s;
    }
    codes
}

/// Same tree with every child list sorted by (subtree code, vertex). For
/// unlabeled trees, isomorphic subtrees then receive identical breadth-first
/// numberings from [`RootedTree::subtree`].
pub fn canonically_ordered(t: &RootedTree) -> RootedTree {
    let codes = vertex_codes(t, t.is_labeled());
    let order = (0..=t.len())
        .map(|v| {
            let mut kids = t.children(v).to_vec();
            kids.sort_by(|&a, &b| codes[a].cmp(&codes[b]).then(a.cmp(&b)));
            kids
        })
        .collect();
    t.clone().with_child_order(order).expect("same children")
}

pub fn canonical_code(t: &RootedTree) -> CanonicalCode {
    CanonicalCode(vertex_codes(t, false).swap_remove(0))
}

/// Labeled trees compare by parent map; otherwise by canonical code.
pub fn trees_isomorphic(a: &RootedTree, b: &RootedTree) -> bool {
    if a.is_labeled() && b.is_labeled() {
        a.parents() == b.parents()
    } else {
        canonical_code(a) == canonical_code(b)
    }
}

/// All rooted trees with `n` non-root vertices, as sorted canonical codes.
pub fn enumerate_trees(n: usize) -> Result<Vec<CanonicalCode>> {
    if n > MAX_ENUMERATION {
        return Err(Error::OutOfRange(format!(
            "enumeration is limited to n <= {MAX_ENUMERATION}, got {n}"
        )));
    }
    // by_size[k]: codes of trees with k vertices in total (root included)
    let mut by_size: Vec<Vec<String>> = vec![Vec::new(), vec!["()".to_string()]];
    for k in 2..=n + 1 {
        let mut found = BTreeSet::new();
        let mut picked = Vec::new();
        forests(&by_size, k - 1, (k - 1, usize::MAX), &mut picked, &mut found);
        by_size.push(found.into_iter().collect());
    }
    Ok(by_size[n + 1].iter().cloned().map(CanonicalCode).collect())
}

// Multisets of subtrees with total size `remaining`, chosen in non-increasing
// (size, index) order so each multiset is produced once.
fn forests(
    by_size: &[Vec<String>],
    remaining: usize,
    max_key: (usize, usize),
    picked: &mut Vec<(usize, usize)>,
    out: &mut BTreeSet<String>,
) {
    if remaining == 0 {
        let mut kids: Vec<&str> = picked
            .iter()
            .map(|&(s, i)| by_size[s][i].as_str())
            .collect();
        kids.sort_unstable();
        out.insert(format!("({})", kids.concat()));
        return;
    }
    for size in (1..=remaining.min(max_key.0)).rev() {
        let limit = if size == max_key.0 {
            max_key.1.min(by_size[size].len().saturating_sub(1))
        } else {
            by_size[size].len() - 1
        };
        for idx in (0..=limit).rev() {
            picked.push((size, idx));
            forests(by_size, remaining - size, (size, idx), picked, out);
            picked.pop();
        }
    }
}

/// Partition of the root-child positions `1..=m` (positions follow the
/// tree's stored child order) by isomorphism type of the hanging subtree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChildPartition {
    pub blocks: Vec<Vec<usize>>,
}

impl ChildPartition {
    pub fn ground_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Block index of every position (0-based position in, block index out).
    pub fn block_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.ground_size()];
        for (b, block) in self.blocks.iter().enumerate() {
            for &p in block {
                out[p - 1] = b;
            }
        }
        out
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }
}

/// Blocks are ordered by the code of their subtrees. Labeled trees use
/// labeled codes, which makes the partition discrete.
pub fn child_partition(t: &RootedTree) -> ChildPartition {
    let codes = vertex_codes(t, t.is_labeled());
    let mut groups: std::collections::BTreeMap<&str, Vec<usize>> = Default::default();
    for (pos, &c) in t.root_children().iter().enumerate() {
        groups.entry(codes[c].as_str()).or_default().push(pos + 1);
    }
    ChildPartition {
        blocks: groups.into_values().collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthIndex {
    /// `depths[v - 1]`: number of non-root proper ancestors of `v`.
    pub depths: Vec<usize>,
    pub dmax: usize,
}

pub fn depth_index(t: &RootedTree) -> DepthIndex {
    let mut depths = vec![0usize; t.len()];
    for v in t.bfs_order().into_iter().skip(1) {
        let p = t.parent(v);
        depths[v - 1] = if p == 0 { 0 } else { depths[p - 1] + 1 };
    }
    let dmax = depths.iter().copied().max().unwrap_or(0);
    DepthIndex { depths, dmax }
}

/// The star formed by the root and its children (the tree of the
/// configuration obtained by forgetting every nested curve).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootRestriction {
    pub tree: RootedTree,
    /// Original vertex of each vertex of `tree`.
    pub labels: Vec<usize>,
}

pub fn restrict_to_root_children(t: &RootedTree) -> RootRestriction {
    let labels = t.root_children().to_vec();
    RootRestriction {
        tree: RootedTree::star(labels.len(), t.is_labeled()),
        labels,
    }
}
