//! Embedding certificates: synthesis from open books and checking against
//! the numeric verifier.

mod check;
mod synth;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::openbook::OpenBook;

pub use check::{check_certificate, run_thm1_suite, structure_issues};
pub use synth::{
    expand_images, synth_corollary, synth_thm1, synth_thm1_with, synth_type1, synth_type1_with, SynthParams,
    B2_CAVEAT, DEFAULT_BASE_SUPPORT,
};

/// One scheduled move on the mapping-torus circle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Step {
    /// `τ^{n+1}_power` on the target node, supported in `|y| < support`.
    AmbientTwist { node: String, power: i64, support: f64 },
    /// `j_t`, `t: 0 → 1`: push the source page off the zero section.
    IsotopeAway { node: String, eps: f64, delta: f64 },
    /// `j_t`, `t: 1 → 0`.
    IsotopeBack { node: String },
    /// Extension of the page isotopy to the ambient manifold.
    ExtendIsotopy { citation: String },
    /// Gluing the mapping torus to `binding × D²`.
    GlueMappingTorus { citation: String },
}

impl Step {
    pub fn node(&self) -> Option<&str> {
        match self {
            Step::AmbientTwist { node, .. } | Step::IsotopeAway { node, .. } | Step::IsotopeBack { node } => Some(node),
            _ => None,
        }
    }

    pub fn is_symbolic(&self) -> bool {
        self.node().is_none()
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::AmbientTwist { node, power, support } => write!(f, "AmbientTwist({node}, {power}, support {support})"),
            Step::IsotopeAway { node, eps, delta } => write!(f, "IsotopeAway({node}, eps {eps}, delta {delta})"),
            Step::IsotopeBack { node } => write!(f, "IsotopeBack({node})"),
            Step::ExtendIsotopy { .. } => f.write_str("ExtendIsotopy"),
            Step::GlueMappingTorus { .. } => f.write_str("GlueMappingTorus"),
        }
    }
}

/// Steps run inside `[t0, t1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub t0: f64,
    pub t1: f64,
    pub steps: Vec<Step>,
}

impl Block {
    /// The node of a node block (`None` for the symbolic block).
    pub fn node(&self) -> Option<&str> {
        self.steps.iter().find_map(Step::node)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub eps: f64,
    pub delta: f64,
}

impl Params {
    pub fn m0(&self) -> f64 {
        0.5 * self.eps.min(self.delta)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    /// `thm1`, `type1`, or `surface`.
    pub construction: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// A contact open book embedding, spelled out as a schedule of moves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingCertificate {
    pub source: OpenBook,
    pub target: OpenBook,
    #[serde(rename = "nodeMap")]
    pub node_map: BTreeMap<String, String>,
    pub schedule: Vec<Block>,
    pub params: Params,
    #[serde(default)]
    pub metadata: Metadata,
}

impl EmbeddingCertificate {
    /// Parses and checks references: every step node and node-map entry
    /// must exist.
    pub fn from_json(text: &str) -> Result<Self> {
        let cert: EmbeddingCertificate =
            serde_json::from_str(text).map_err(|e| Error::MalformedCertificate(e.to_string()))?;
        cert.check_references()?;
        Ok(cert)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub(crate) fn check_references(&self) -> Result<()> {
        let bad = |m: String| Err(Error::MalformedCertificate(m));
        for (s, t) in &self.node_map {
            if self.source.page().node(s).is_none() {
                return bad(format!("nodeMap names unknown source node `{s}`"));
            }
            if self.target.page().node(t).is_none() {
                return bad(format!("nodeMap names unknown target node `{t}`"));
            }
        }
        for block in &self.schedule {
            if !(block.t0.is_finite() && block.t1.is_finite()) {
                return bad("non-finite schedule interval".into());
            }
            for step in &block.steps {
                if let Some(node) = step.node() {
                    if self.target.page().node(node).is_none() {
                        return bad(format!("step `{step}` names unknown target node"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Node blocks in schedule order.
    pub fn node_blocks(&self) -> impl Iterator<Item = &Block> {
        self.schedule.iter().filter(|b| b.node().is_some())
    }
}

impl fmt::Display for EmbeddingCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "source: {}", self.source)?;
        writeln!(f, "target: {}", self.target)?;
        writeln!(f, "params: eps = {}, delta = {}, m0 = {}", self.params.eps, self.params.delta, self.params.m0())?;
        for b in &self.schedule {
            let steps: Vec<String> = b.steps.iter().map(ToString::to_string).collect();
            writeln!(f, "[{:.4}, {:.4}] {}", b.t0, b.t1, steps.join("; "))?;
        }
        if let Some(p) = &self.metadata.presentation {
            writeln!(f, "presentation: {p}")?;
        }
        for note in &self.metadata.notes {
            writeln!(f, "note: {note}")?;
        }
        Ok(())
    }
}
