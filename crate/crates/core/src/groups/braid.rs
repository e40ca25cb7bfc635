use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::trees::ChildPartition;

/// Bijection of `1..=m`, stored as the list of images.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &i in &images {
            if i == 0 || i > m || seen[i - 1] {
                return Err(Error::OutOfRange(format!("{images:?} is not a permutation")));
            }
            seen[i - 1] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(m: usize) -> Self {
        Self {
            images: (1..=m).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&i| self.images[i - 1]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j - 1] = i + 1;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i + 1 == j)
    }

    /// Precomposes with the transposition `(k k+1)`.
    fn swap_positions(&mut self, k: usize) {
        self.images.swap(k - 1, k);
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

/// Word in the Artin generators of the braid group on `strands` strands:
/// `k` is `σ_k`, `-k` is `σ_k^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BraidDoc", into = "BraidDoc")]
pub struct BraidWord {
    strands: usize,
    word: Vec<i32>,
}

#[derive(Serialize, Deserialize)]
struct BraidDoc {
    strands: usize,
    word: Vec<i32>,
}

impl TryFrom<BraidDoc> for BraidWord {
    type Error = Error;
    fn try_from(d: BraidDoc) -> Result<Self> {
        Self::new(d.strands, d.word)
    }
}

impl From<BraidWord> for BraidDoc {
    fn from(b: BraidWord) -> Self {
        BraidDoc {
            strands: b.strands,
            word: b.word,
        }
    }
}

impl BraidWord {
    pub fn new(strands: usize, word: Vec<i32>) -> Result<Self> {
        if let Some(&g) = word
            .iter()
            .find(|&&g| g == 0 || g.unsigned_abs() as usize >= strands)
        {
            return Err(Error::OutOfRange(format!(
                "generator {g} is not valid on {strands} strands"
            )));
        }
        Ok(Self { strands, word })
    }

    pub fn empty(strands: usize) -> Self {
        Self {
            strands,
            word: Vec::new(),
        }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn word(&self) -> &[i32] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            word: self.word.iter().rev().map(|g| -g).collect(),
        }
    }

    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord> {
        if self.strands != other.strands {
            return Err(Error::Mismatch(format!(
                "braids on {} and {} strands",
                self.strands, other.strands
            )));
        }
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        Ok(BraidWord {
            strands: self.strands,
            word,
        })
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        for (k, g) in self.word.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            if *g > 0 {
                write!(f, "s{g}")?;
            } else {
                write!(f, "s{}^-1", -g)?;
            }
        }
        Ok(())
    }
}

/// `t_{a_1} ∘ … ∘ t_{a_n}` for the word `a_1 … a_n`, so that the map is a
/// homomorphism onto the symmetric group.
pub fn braid_permutation(b: &BraidWord) -> Permutation {
    let mut p = Permutation::identity(b.strands);
    for &g in &b.word {
        p.swap_positions(g.unsigned_abs() as usize);
    }
    p
}

/// A positive word whose permutation is `p` (bubble sort).
pub fn permutation_word(p: &Permutation) -> Vec<i32> {
    let mut a = p.images.clone();
    let mut swaps = Vec::new();
    let n = a.len();
    for pass in 0..n {
        for k in 0..n.saturating_sub(pass + 1) {
            if a[k] > a[k + 1] {
                a.swap(k, k + 1);
                swaps.push(k as i32 + 1);
            }
        }
    }
    swaps.reverse();
    swaps
}

pub fn braid_in_block_subgroup(b: &BraidWord, p: &ChildPartition) -> Result<bool> {
    if p.ground_size() != b.strands {
        return Err(Error::Mismatch(format!(
            "braid on {} strands, partition of {} positions",
            b.strands,
            p.ground_size()
        )));
    }
    let block = p.block_of();
    let perm = braid_permutation(b);
    Ok((1..=b.strands).all(|i| block[i - 1] == block[perm.apply(i) - 1]))
}

/// Default number of handle reductions before giving up.
pub const DEFAULT_REDUCTION_BUDGET: usize = 1_000_000;

/// Decides whether `b` is the identity braid by handle reduction.
pub fn braid_is_trivial(b: &BraidWord) -> Result<bool> {
    braid_is_trivial_with_budget(b, DEFAULT_REDUCTION_BUDGET)
}

pub fn braid_is_trivial_with_budget(b: &BraidWord, budget: usize) -> Result<bool> {
    Ok(handle_reduce(b.word.clone(), budget)?.is_empty())
}

/// Repeatedly reduces the handle that ends leftmost. A word without
/// handles is empty exactly when the braid is trivial.
pub fn handle_reduce(mut w: Vec<i32>, budget: usize) -> Result<Vec<i32>> {
    let mut steps = 0usize;
    loop {
        free_reduce(&mut w);
        let Some((start, end)) = leftmost_handle(&w) else {
            return Ok(w);
        };
        steps += 1;
        if steps > budget {
            return Err(Error::Undecided(budget));
        }
        let k = w[start].abs();
        let e = w[start].signum();
        let mut middle = Vec::with_capacity(3 * (end - start));
        for &g in &w[start + 1..end] {
            if g.abs() == k + 1 {
                middle.extend_from_slice(&[-e * (k + 1), g.signum() * k, e * (k + 1)]);
            } else {
                middle.push(g);
            }
        }
        w.splice(start..=end, middle);
    }
}

fn free_reduce(w: &mut Vec<i32>) {
    let mut out: Vec<i32> = Vec::with_capacity(w.len());
    for &g in w.iter() {
        if out.last() == Some(&-g) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    *w = out;
}

/// `σ_k^e v σ_k^{-e}` where `v` has no letter of index `k` or `k - 1`.
fn leftmost_handle(w: &[i32]) -> Option<(usize, usize)> {
    // Last position of each generator index, and of its blocking neighbor.
    let max = w.iter().map(|g| g.unsigned_abs() as usize).max().unwrap_or(0);
    let mut last: Vec<Option<usize>> = vec![None; max + 2];
    for (j, &g) in w.iter().enumerate() {
        let k = g.unsigned_abs() as usize;
        if let Some(i) = last[k] {
            let blocked = k >= 2 && last[k - 1].is_some_and(|b| b > i);
            if w[i] == -g && !blocked {
                return Some((i, j));
            }
        }
        last[k] = Some(j);
    }
    None
}

/// Reduced word in the free group on `x_1, …, x_m` (`-k` is `x_k^{-1}`).
pub type FreeWord = Vec<i32>;

fn push_reduced(out: &mut FreeWord, g: i32) {
    if out.last() == Some(&-g) {
        out.pop();
    } else {
        out.push(g);
    }
}

/// Images of `x_1, …, x_m` under the Artin action of `b`, letters applied
/// left to right by substitution.
pub fn free_group_action(b: &BraidWord) -> Vec<FreeWord> {
    let m = b.strands;
    let mut images: Vec<FreeWord> = (1..=m as i32).map(|k| vec![k]).collect();
    for &g in &b.word {
        let i = g.unsigned_abs() as i32;
        let letter_image = |x: i32| -> FreeWord {
            let k = x.abs();
            let base: FreeWord = if g > 0 {
                if k == i {
                    vec![i, i + 1, -i]
                } else if k == i + 1 {
                    vec![i]
                } else {
                    vec![k]
                }
            } else if k == i {
                vec![i + 1]
            } else if k == i + 1 {
                vec![-(i + 1), i, i + 1]
            } else {
                vec![k]
            };
            if x > 0 {
                base
            } else {
                base.iter().rev().map(|y| -y).collect()
            }
        };
        for img in images.iter_mut() {
            let mut next = FreeWord::with_capacity(img.len() + 2);
            for &x in img.iter() {
                for y in letter_image(x) {
                    push_reduced(&mut next, y);
                }
            }
            *img = next;
        }
    }
    images
}

/// Independent triviality check: the action on the free group is faithful.
pub fn braid_is_trivial_by_action(b: &BraidWord) -> bool {
    free_group_action(b)
        .iter()
        .enumerate()
        .all(|(k, img)| img.as_slice() == [k as i32 + 1])
}
