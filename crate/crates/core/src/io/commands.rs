use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::sampler::random_configuration;
use super::Document;
use crate::conformal::{conformal_retract_detailed, StageDiagnostics};
use crate::curves::{curve_nesting_tree, is_convex, ConvexRetraction, Curve, JordanConfiguration};
use crate::error::{Error, Result};
use crate::geometry::circle_nesting_tree;
use crate::groups::{
    aut_order, baut_compose, baut_inverse, baut_is_pure, baut_is_trivial, baut_project,
    braid_is_trivial, braid_permutation, pure_signature, BAutDocument, BraidWord,
};
use crate::trees::{canonical_code, enumerate_trees, CanonicalCode, RootedTree, TreeDocument};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyVerdict {
    pub same_component: bool,
    pub labeled: bool,
    pub tree_a: TreeDocument,
    pub tree_b: TreeDocument,
    pub code_a: CanonicalCode,
    pub code_b: CanonicalCode,
}

fn nesting_tree(doc: &Document) -> Result<RootedTree> {
    match doc {
        Document::Circles(c) => circle_nesting_tree(c),
        Document::Curves(j) => curve_nesting_tree(j),
        other => Err(Error::Document(format!(
            "expected circles or curves, got {:?}",
            other.kind()
        ))),
    }
}

/// Whether two configurations lie in the same path component: equal
/// canonical codes, or equal parent arrays when `labeled`.
pub fn cmd_classify(a: &Document, b: &Document, labeled: bool) -> Result<ClassifyVerdict> {
    let ta = nesting_tree(a)?;
    let tb = nesting_tree(b)?;
    let code_a = canonical_code(&ta);
    let code_b = canonical_code(&tb);
    let same_component = if labeled {
        ta.parents() == tb.parents()
    } else {
        code_a == code_b
    };
    Ok(ClassifyVerdict {
        same_component,
        labeled,
        tree_a: TreeDocument::from(&ta),
        tree_b: TreeDocument::from(&tb),
        code_a,
        code_b,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentCount {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub enumerated: usize,
    pub observed: usize,
}

/// Counts distinct nesting-tree classes among `samples` random
/// configurations of `n` circles, next to the enumeration count.
pub fn cmd_count_components(n: usize, samples: usize, seed: u64) -> Result<ComponentCount> {
    if !(1..=6).contains(&n) {
        return Err(Error::OutOfRange(format!("n = {n}, expected 1..=6")));
    }
    let enumerated = enumerate_trees(n)?.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    for _ in 0..samples {
        let c = random_configuration(n, &mut rng)?;
        seen.insert(canonical_code(&circle_nesting_tree(&c)?));
    }
    Ok(ComponentCount {
        n,
        samples,
        seed,
        enumerated,
        observed: seen.len(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pipeline {
    Auto,
    Convex,
    Conformal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RetractOptions {
    pub frames_per_stage: usize,
    pub pipeline: Pipeline,
}

impl Default for RetractOptions {
    fn default() -> Self {
        Self {
            frames_per_stage: 8,
            pipeline: Pipeline::Auto,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RetractOutput {
    pub pipeline: Pipeline,
    pub tree: TreeDocument,
    pub frames: Vec<JordanConfiguration>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub stages: Vec<StageDiagnostics>,
}

fn first_non_convex(j: &JordanConfiguration) -> Option<usize> {
    j.curves.iter().position(|c| match c {
        Curve::Polygon(p) => !is_convex(p),
        Curve::Round(_) => false,
    })
}

/// Rounds a circles or curves document. `Auto` picks the convex pipeline
/// when every polygon is convex.
pub fn cmd_retract(doc: &Document, opts: RetractOptions) -> Result<RetractOutput> {
    let j = doc.to_configuration()?;
    let pipeline = match opts.pipeline {
        Pipeline::Auto if first_non_convex(&j).is_none() => Pipeline::Convex,
        Pipeline::Auto => Pipeline::Conformal,
        p => p,
    };
    match pipeline {
        Pipeline::Convex => {
            let r = ConvexRetraction::new(&j)?;
            Ok(RetractOutput {
                pipeline,
                tree: TreeDocument::from(r.tree()),
                frames: r.frames(opts.frames_per_stage),
                stages: Vec::new(),
            })
        }
        _ => {
            let r = conformal_retract_detailed(&j, opts.frames_per_stage)?;
            Ok(RetractOutput {
                pipeline,
                tree: TreeDocument::from(&r.tree),
                frames: r.frames,
                stages: r.stages,
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupCommand {
    AutOrder,
    Signature,
    Compose,
    Inverse,
    IsPure,
    IsTrivial,
    Project,
}

fn tree_of(doc: &Document) -> Result<RootedTree> {
    match doc {
        Document::Tree(t) => Ok(t.clone()),
        Document::Baut(b) => RootedTree::try_from(b.tree.clone()),
        other => Ok(nesting_tree(other)?.with_labeled(false)),
    }
}

fn single(docs: &[Document]) -> Result<&Document> {
    match docs {
        [d] => Ok(d),
        _ => Err(Error::Document(format!(
            "expected one input document, got {}",
            docs.len()
        ))),
    }
}

fn order_value(t: &RootedTree) -> Value {
    let order = aut_order(t);
    match u64::try_from(&order) {
        Ok(v) => json!(v),
        Err(_) => json!(order.to_string()),
    }
}

/// Runs a group-layer command; the result is a JSON document.
pub fn cmd_group(cmd: GroupCommand, docs: &[Document]) -> Result<Value> {
    match cmd {
        GroupCommand::AutOrder => Ok(json!({ "aut_order": order_value(&tree_of(single(docs)?)?) })),
        GroupCommand::Signature => {
            Ok(json!({ "pure_signature": pure_signature(&tree_of(single(docs)?)?) }))
        }
        GroupCommand::Compose => compose_all(docs),
        GroupCommand::Inverse => match single(docs)? {
            Document::Braid(b) => Ok(json!(b.inverse())),
            Document::Baut(d) => Ok(json!(BAutDocument::from_element(&baut_inverse(
                &d.to_element()?
            )))),
            other => Err(wrong_kind(other)),
        },
        GroupCommand::IsPure => match single(docs)? {
            Document::Braid(b) => Ok(json!({ "pure": braid_permutation(b).is_identity() })),
            Document::Baut(d) => Ok(json!({ "pure": baut_is_pure(&d.to_element()?) })),
            other => Err(wrong_kind(other)),
        },
        GroupCommand::IsTrivial => match single(docs)? {
            Document::Braid(b) => Ok(json!({ "trivial": braid_is_trivial(b)? })),
            Document::Baut(d) => Ok(json!({ "trivial": baut_is_trivial(&d.to_element()?)? })),
            other => Err(wrong_kind(other)),
        },
        GroupCommand::Project => match single(docs)? {
            Document::Braid(b) => Ok(json!({ "permutation": braid_permutation(b) })),
            Document::Baut(d) => {
                let a = d.to_element()?;
                let p = baut_project(&a);
                Ok(json!({
                    "tree": TreeDocument::from(a.tree()),
                    "vertex_map": p.vertex_map(),
                }))
            }
            other => Err(wrong_kind(other)),
        },
    }
}

fn wrong_kind(doc: &Document) -> Error {
    Error::Document(format!(
        "expected a braid or baut document, got {:?}",
        doc.kind()
    ))
}

/// Left-to-right product of two or more braids or elements.
fn compose_all(docs: &[Document]) -> Result<Value> {
    if docs.len() < 2 {
        return Err(Error::Document("compose needs at least two inputs".into()));
    }
    match &docs[0] {
        Document::Braid(first) => {
            let mut acc: BraidWord = first.clone();
            for d in &docs[1..] {
                match d {
                    Document::Braid(b) => acc = acc.concat(b)?,
                    other => return Err(wrong_kind(other)),
                }
            }
            Ok(json!(acc))
        }
        Document::Baut(first) => {
            let mut acc = first.to_element()?;
            for d in &docs[1..] {
                match d {
                    Document::Baut(b) => acc = baut_compose(&acc, &b.to_element()?)?,
                    other => return Err(wrong_kind(other)),
                }
            }
            Ok(json!(BAutDocument::from_element(&acc)))
        }
        other => Err(wrong_kind(other)),
    }
}
