use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::braid::{
    braid_in_block_subgroup, braid_is_trivial, braid_permutation, permutation_word, BraidWord,
    Permutation,
};
use crate::error::{Error, Result};
use crate::trees::{canonically_ordered, child_partition, vertex_codes, RootedTree, TreeDocument};

/// Parent-compatible bijection of the non-root vertices of a tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeAutomorphism {
    tree: RootedTree,
    /// `vertex_map[v - 1]` is the image of `v`.
    vertex_map: Vec<usize>,
}

impl TreeAutomorphism {
    pub fn new(tree: RootedTree, vertex_map: Vec<usize>) -> Result<Self> {
        let n = tree.len();
        Permutation::new(vertex_map.clone())
            .map_err(|_| Error::InvalidTree(format!("{vertex_map:?} is not a bijection of 1..={n}")))?;
        if vertex_map.len() != n {
            return Err(Error::Mismatch("vertex map has wrong length".into()));
        }
        let image = |v: usize| if v == 0 { 0 } else { vertex_map[v - 1] };
        for v in 1..=n {
            if tree.parent(image(v)) != image(tree.parent(v)) {
                return Err(Error::InvalidTree(format!(
                    "vertex map does not respect the parent of {v}"
                )));
            }
        }
        if tree.is_labeled() && vertex_map.iter().enumerate().any(|(i, &j)| i + 1 != j) {
            return Err(Error::InvalidTree("labeled trees have no nontrivial automorphisms".into()));
        }
        Ok(Self { tree, vertex_map })
    }

    pub fn identity(tree: RootedTree) -> Self {
        let vertex_map = (1..=tree.len()).collect();
        Self { tree, vertex_map }
    }

    pub fn tree(&self) -> &RootedTree {
        &self.tree
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn apply(&self, v: usize) -> usize {
        if v == 0 {
            0
        } else {
            self.vertex_map[v - 1]
        }
    }

    pub fn is_identity(&self) -> bool {
        self.vertex_map.iter().enumerate().all(|(i, &j)| i + 1 == j)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &TreeAutomorphism) -> Result<TreeAutomorphism> {
        if self.tree != other.tree {
            return Err(Error::Mismatch("automorphisms of different trees".into()));
        }
        Ok(TreeAutomorphism {
            tree: self.tree.clone(),
            vertex_map: other.vertex_map.iter().map(|&v| self.apply(v)).collect(),
        })
    }
}

/// Element of the braided automorphism group of a tree: a braid on the
/// root-child positions together with one element per hanging subtree.
/// Positions follow the canonical child order (by subtree code, then
/// vertex), so isomorphic subtrees occupy contiguous positions and share
/// one numbering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BAutElement {
    tree: RootedTree,
    braid: BraidWord,
    children: Vec<BAutElement>,
}

/// Subtrees hanging from the root, in canonical position order.
fn child_trees(t: &RootedTree) -> Vec<RootedTree> {
    t.root_children().iter().map(|&v| t.subtree(v).0).collect()
}

impl BAutElement {
    pub fn identity(tree: &RootedTree) -> Self {
        let tree = canonically_ordered(tree);
        let children = child_trees(&tree).iter().map(Self::identity).collect();
        Self {
            braid: BraidWord::empty(tree.root_children().len()),
            tree,
            children,
        }
    }

    /// Checks the block constraint at every level.
    pub fn new(tree: &RootedTree, braid: BraidWord, children: Vec<BAutElement>) -> Result<Self> {
        let tree = canonically_ordered(tree);
        let m = tree.root_children().len();
        if braid.strands() != m || children.len() != m {
            return Err(Error::Mismatch(format!(
                "root has {m} children; braid has {} strands and {} child elements",
                braid.strands(),
                children.len()
            )));
        }
        if !braid_in_block_subgroup(&braid, &child_partition(&tree))? {
            return Err(Error::InvalidTree(format!(
                "braid {braid} permutes non-isomorphic subtrees"
            )));
        }
        for (sub, child) in child_trees(&tree).iter().zip(&children) {
            if *sub != child.tree {
                return Err(Error::Mismatch("child element belongs to another subtree".into()));
            }
        }
        Ok(Self {
            tree,
            braid,
            children,
        })
    }

    pub fn tree(&self) -> &RootedTree {
        &self.tree
    }

    pub fn braid(&self) -> &BraidWord {
        &self.braid
    }

    pub fn children(&self) -> &[BAutElement] {
        &self.children
    }

    /// Total number of braid letters over all levels.
    pub fn word_length(&self) -> usize {
        self.braid.len() + self.children.iter().map(Self::word_length).sum::<usize>()
    }
}

/// `(g, β) · (g', β') = (g · β(g'), β β')`: braids concatenate and the child
/// at position `i` is `a_i · b_{σ_a^{-1}(i)}`.
pub fn baut_compose(a: &BAutElement, b: &BAutElement) -> Result<BAutElement> {
    if a.tree != b.tree {
        return Err(Error::Mismatch("elements of different trees".into()));
    }
    let sigma_inv = braid_permutation(&a.braid).inverse();
    let children = (0..a.children.len())
        .map(|i| baut_compose(&a.children[i], &b.children[sigma_inv.apply(i + 1) - 1]))
        .collect::<Result<Vec<_>>>()?;
    Ok(BAutElement {
        tree: a.tree.clone(),
        braid: a.braid.concat(&b.braid)?,
        children,
    })
}

pub fn baut_inverse(a: &BAutElement) -> BAutElement {
    let sigma = braid_permutation(&a.braid);
    BAutElement {
        tree: a.tree.clone(),
        braid: a.braid.inverse(),
        children: (0..a.children.len())
            .map(|i| baut_inverse(&a.children[sigma.apply(i + 1) - 1]))
            .collect(),
    }
}

/// Every braid, at every level, is the trivial braid.
pub fn baut_is_trivial(a: &BAutElement) -> Result<bool> {
    if !braid_is_trivial(&a.braid)? {
        return Ok(false);
    }
    for c in &a.children {
        if !baut_is_trivial(c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Equality in the group, decided through `a · b^{-1}`.
pub fn baut_equal(a: &BAutElement, b: &BAutElement) -> Result<bool> {
    baut_is_trivial(&baut_compose(a, &baut_inverse(b))?)
}

/// Image in `Aut(T)`: the root child at position `i` goes to position
/// `σ(i)`, and its subtree is carried along by the projection of the child
/// element at the target position.
pub fn baut_project(a: &BAutElement) -> TreeAutomorphism {
    let t = &a.tree;
    let mut map = vec![0usize; t.len()];
    let sigma = braid_permutation(&a.braid);
    let roots = t.root_children();
    let subs: Vec<(RootedTree, Vec<usize>)> = roots.iter().map(|&v| t.subtree(v)).collect();
    for i in 0..roots.len() {
        let k = sigma.apply(i + 1) - 1;
        map[roots[i] - 1] = roots[k];
        let inner = baut_project(&a.children[k]);
        let (source, target) = (&subs[i].1, &subs[k].1);
        for (s, &v) in source.iter().enumerate() {
            map[v - 1] = target[inner.apply(s + 1) - 1];
        }
    }
    TreeAutomorphism {
        tree: t.clone(),
        vertex_map: map,
    }
}

pub fn baut_is_pure(a: &BAutElement) -> bool {
    baut_project(a).is_identity()
}

/// Random element: at every level a random word of length at most
/// `max_len`, corrected by a bubble-sort word so that its permutation is a
/// uniformly random block-preserving permutation.
pub fn random_baut<R: Rng + ?Sized>(tree: &RootedTree, max_len: usize, rng: &mut R) -> BAutElement {
    let tree = canonically_ordered(tree);
    let m = tree.root_children().len();
    let mut word = Vec::new();
    if m >= 2 {
        let len = rng.gen_range(0..=max_len);
        for _ in 0..len {
            let g = rng.gen_range(1..m as i32);
            word.push(if rng.gen_bool(0.5) { g } else { -g });
        }
        let current = braid_permutation(&BraidWord::new(m, word.clone()).expect("in range"));
        let mut target: Vec<usize> = (1..=m).collect();
        for block in child_partition(&tree).blocks {
            let mut shuffled = block.clone();
            shuffled.shuffle(rng);
            for (&from, &to) in block.iter().zip(&shuffled) {
                target[from - 1] = to;
            }
        }
        let target = Permutation::new(target).expect("block shuffle is a permutation");
        let fix = current.inverse().compose(&target);
        for g in permutation_word(&fix) {
            word.push(if rng.gen_bool(0.5) { g } else { -g });
        }
    }
    let children = child_trees(&tree)
        .iter()
        .map(|sub| random_baut(sub, max_len, rng))
        .collect();
    BAutElement {
        braid: BraidWord::new(m, word).expect("in range"),
        tree,
        children,
    }
}

/// `|Aut(T)|`: the product over all vertices of the factorials of the
/// sizes of their sibling isomorphism classes.
pub fn aut_order(t: &RootedTree) -> BigUint {
    let codes = vertex_codes(t, t.is_labeled());
    let mut order = BigUint::from(1u32);
    for v in 0..=t.len() {
        let mut kids: Vec<&str> = t.children(v).iter().map(|&c| codes[c].as_str()).collect();
        kids.sort_unstable();
        let mut run = 0u32;
        for k in 0..kids.len() {
            run = if k > 0 && kids[k] == kids[k - 1] { run + 1 } else { 1 };
            order *= run;
        }
    }
    order
}

/// Nonzero child counts of the root and of every vertex, largest first.
pub fn pure_signature(t: &RootedTree) -> Vec<usize> {
    let mut counts: Vec<usize> = (0..=t.len())
        .map(|v| t.children(v).len())
        .filter(|&c| c > 0)
        .collect();
    counts.sort_unstable_by(|a, b| b.cmp(a));
    counts
}

/// Recursive JSON form of an element; the tree travels separately.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BAutElementDoc {
    pub braid: BraidWord,
    #[serde(default)]
    pub children: Vec<BAutElementDoc>,
}

/// An element together with its tree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BAutDocument {
    pub tree: TreeDocument,
    pub element: BAutElementDoc,
}

impl BAutElementDoc {
    pub fn from_element(a: &BAutElement) -> Self {
        Self {
            braid: a.braid.clone(),
            children: a.children.iter().map(Self::from_element).collect(),
        }
    }

    /// Missing children default to identities.
    pub fn to_element(&self, tree: &RootedTree) -> Result<BAutElement> {
        let canon = canonically_ordered(tree);
        let subs = child_trees(&canon);
        if !self.children.is_empty() && self.children.len() != subs.len() {
            return Err(Error::Mismatch(format!(
                "{} child elements for {} subtrees",
                self.children.len(),
                subs.len()
            )));
        }
        let children = subs
            .iter()
            .enumerate()
            .map(|(i, sub)| match self.children.get(i) {
                Some(doc) => doc.to_element(sub),
                None => Ok(BAutElement::identity(sub)),
            })
            .collect::<Result<Vec<_>>>()?;
        BAutElement::new(&canon, self.braid.clone(), children)
    }
}

impl BAutDocument {
    pub fn from_element(a: &BAutElement) -> Self {
        Self {
            tree: TreeDocument::from(a.tree()),
            element: BAutElementDoc::from_element(a),
        }
    }

    pub fn to_element(&self) -> Result<BAutElement> {
        let tree = RootedTree::try_from(self.tree.clone())?;
        self.element.to_element(&tree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::braid::braid_in_block_subgroup;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn brute_force_order(t: &RootedTree) -> usize {
        let n = t.len();
        let mut perm: Vec<usize> = (1..=n).collect();
        let mut count = 0;
        permute(&mut perm, 0, &mut |p| {
            let image = |v: usize| if v == 0 { 0 } else { p[v - 1] };
            if (1..=n).all(|v| t.parent(image(v)) == image(t.parent(v))) {
                count += 1;
            }
        });
        count
    }

    fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permute(p, k + 1, f);
            p.swap(k, i);
        }
    }

    fn star(m: usize) -> RootedTree {
        RootedTree::star(m, false)
    }

    #[test]
    fn orders() {
        assert_eq!(aut_order(&RootedTree::path(5, false)), BigUint::from(1u32));
        assert_eq!(aut_order(&star(3)), BigUint::from(6u32));
        let seven_circles = RootedTree::new(vec![0, 5, 2, 2, 0, 7, 5], false).unwrap();
        assert_eq!(aut_order(&seven_circles), BigUint::from(2u32));
        assert_eq!(brute_force_order(&seven_circles), 2);
        assert_eq!(aut_order(&seven_circles.clone().with_labeled(true)), BigUint::from(1u32));
    }

    #[test]
    fn signatures() {
        assert_eq!(pure_signature(&RootedTree::path(1, false)), vec![1]);
        let seven_circles = RootedTree::new(vec![0, 5, 2, 2, 0, 7, 5], true).unwrap();
        assert_eq!(pure_signature(&seven_circles), vec![2, 2, 2, 1]);
        assert_eq!(pure_signature(&star(4)), vec![4]);
    }

    #[test]
    fn star_projection() {
        let t = star(3);
        let a = BAutElement::new(&t, BraidWord::new(3, vec![1]).unwrap(), child_trees(&t).iter().map(BAutElement::identity).collect()).unwrap();
        assert_eq!(baut_project(&a).vertex_map(), &[2, 1, 3]);
        assert!(!baut_is_pure(&a));
        let sq = baut_compose(&a, &a).unwrap();
        assert!(baut_is_pure(&sq));
        assert!(!baut_is_trivial(&sq).unwrap());
        assert!(baut_is_trivial(&baut_compose(&a, &baut_inverse(&a)).unwrap()).unwrap());
    }

    #[test]
    fn block_constraint_is_enforced() {
        // Root children: a leaf and a cherry; they may not swap.
        let t = RootedTree::new(vec![0, 0, 2], false).unwrap();
        let kids = child_trees(&canonically_ordered(&t)).iter().map(BAutElement::identity).collect();
        assert!(BAutElement::new(&t, BraidWord::new(2, vec![1]).unwrap(), kids).is_err());
    }

    #[test]
    fn random_elements_are_valid_and_projection_is_a_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let t = RootedTree::new(vec![0, 0, 0, 1, 2, 3, 4, 5, 6, 0], false).unwrap();
        for _ in 0..50 {
            let a = random_baut(&t, 6, &mut rng);
            let b = random_baut(&t, 6, &mut rng);
            assert!(braid_in_block_subgroup(a.braid(), &child_partition(a.tree())).unwrap());
            let pa = baut_project(&a);
            TreeAutomorphism::new(pa.tree().clone(), pa.vertex_map().to_vec()).unwrap();
            let ab = baut_compose(&a, &b).unwrap();
            assert_eq!(baut_project(&ab), pa.compose(&baut_project(&b)).unwrap());
            assert!(baut_equal(&baut_compose(&ab, &baut_inverse(&b)).unwrap(), &a).unwrap());
        }
    }

    #[test]
    fn labeled_trees_give_pure_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = RootedTree::new(vec![0, 0, 0, 1, 1], true).unwrap();
        for _ in 0..20 {
            assert!(baut_is_pure(&random_baut(&t, 8, &mut rng)));
        }
    }

    #[test]
    fn document_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let t = RootedTree::new(vec![0, 0, 1, 2], false).unwrap();
        let a = random_baut(&t, 5, &mut rng);
        let doc = BAutDocument::from_element(&a);
        let json = serde_json::to_string(&doc).unwrap();
        let back: BAutDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_element().unwrap(), a);
    }
}
