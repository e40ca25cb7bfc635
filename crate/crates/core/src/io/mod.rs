//! JSON documents, SVG output, the random configuration sampler and the
//! command drivers behind the `jck` binary.

mod commands;
mod sampler;
mod svg;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::curves::{Curve, JordanConfiguration};
use crate::error::{Error, Result};
use crate::geometry::{validate_configuration, CircleConfiguration};
use crate::groups::{BAutDocument, BraidWord};
use crate::trees::{RootedTree, TreeDocument};

pub use commands::{
    cmd_classify, cmd_count_components, cmd_group, cmd_retract, ClassifyVerdict, ComponentCount,
    GroupCommand, Pipeline, RetractOptions, RetractOutput,
};
pub use sampler::{random_configuration, realize_tree};
pub use svg::{fmt_sig, frame_to_svg, frames_to_svg, SvgViewport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocumentKind {
    Circles,
    Curves,
    Tree,
    Braid,
    Baut,
}

/// A parsed input document, validated by its module's rules.
#[derive(Clone, Debug, PartialEq)]
pub enum Document {
    Circles(CircleConfiguration),
    Curves(JordanConfiguration),
    Tree(RootedTree),
    Braid(BraidWord),
    Baut(BAutDocument),
}

impl Document {
    pub fn kind(&self) -> DocumentKind {
        match self {
            Document::Circles(_) => DocumentKind::Circles,
            Document::Curves(_) => DocumentKind::Curves,
            Document::Tree(_) => DocumentKind::Tree,
            Document::Braid(_) => DocumentKind::Braid,
            Document::Baut(_) => DocumentKind::Baut,
        }
    }

    /// Detects the kind from the top-level keys.
    pub fn parse(text: &str) -> Result<Document> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Document("expected a JSON object".into()))?;
        let kind = if obj.contains_key("circles") {
            DocumentKind::Circles
        } else if obj.contains_key("curves") {
            DocumentKind::Curves
        } else if obj.contains_key("element") {
            DocumentKind::Baut
        } else if obj.contains_key("parents") {
            DocumentKind::Tree
        } else if obj.contains_key("strands") {
            DocumentKind::Braid
        } else {
            return Err(Error::Document("unrecognized document".into()));
        };
        Self::parse_as(value, kind)
    }

    pub fn parse_as(value: Value, kind: DocumentKind) -> Result<Document> {
        let de = |e: serde_json::Error| Error::Document(e.to_string());
        Ok(match kind {
            DocumentKind::Circles => {
                let c: CircleConfiguration = serde_json::from_value(value).map_err(de)?;
                for circle in &c.circles {
                    circle.check()?;
                }
                Document::Circles(c)
            }
            DocumentKind::Curves => Document::Curves(serde_json::from_value(value).map_err(de)?),
            DocumentKind::Tree => {
                let doc: TreeDocument = serde_json::from_value(value).map_err(de)?;
                Document::Tree(RootedTree::try_from(doc)?)
            }
            DocumentKind::Braid => Document::Braid(serde_json::from_value(value).map_err(de)?),
            DocumentKind::Baut => {
                let doc: BAutDocument = serde_json::from_value(value).map_err(de)?;
                doc.to_element()?;
                Document::Baut(doc)
            }
        })
    }

    pub fn to_json(&self) -> String {
        let s = match self {
            Document::Circles(c) => serde_json::to_string(c),
            Document::Curves(j) => serde_json::to_string(j),
            Document::Tree(t) => serde_json::to_string(&TreeDocument::from(t)),
            Document::Braid(b) => serde_json::to_string(b),
            Document::Baut(b) => serde_json::to_string(b),
        };
        s.expect("documents serialize")
    }

    /// Circles and curves as a Jordan configuration (circles stay exact).
    pub fn to_configuration(&self) -> Result<JordanConfiguration> {
        match self {
            Document::Circles(c) => Ok(circles_as_curves(c)),
            Document::Curves(j) => Ok(j.clone()),
            other => Err(Error::Document(format!(
                "expected circles or curves, got {:?}",
                other.kind()
            ))),
        }
    }
}

pub fn circles_as_curves(c: &CircleConfiguration) -> JordanConfiguration {
    JordanConfiguration::new(c.circles.iter().map(|&c| Curve::Round(c)).collect())
}

/// Validation report for a circles or curves document.
pub fn validation_report(doc: &Document) -> Result<(bool, Value)> {
    match doc {
        Document::Circles(c) => {
            let r = validate_configuration(c);
            Ok((r.is_ok(), serde_json::to_value(&r).expect("serializable")))
        }
        Document::Curves(j) => {
            let r = crate::curves::validate_curves(j);
            Ok((r.is_ok(), serde_json::to_value(&r).expect("serializable")))
        }
        other => Err(Error::Document(format!(
            "cannot validate a {:?} document",
            other.kind()
        ))),
    }
}
