use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Not evaluated numerically (no coordinate model, or `n` too large).
    Skipped,
    /// Checked for well-formedness only.
    Symbolic,
}

impl Status {
    pub fn is_failure(self) -> bool {
        self == Status::Fail
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
            Status::Symbolic => "symbolic",
        })
    }
}

/// One checked claim.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Obligation {
    pub name: String,
    /// Node block the obligation belongs to, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node: Option<String>,
    pub status: Status,
    /// Measured discrepancy (or the measured bound for distance checks).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measured: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Obligation {
    pub fn new(name: impl Into<String>, status: Status) -> Self {
        Obligation {
            name: name.into(),
            node: None,
            status,
            measured: None,
            tolerance: None,
            samples: 0,
            seed: None,
            detail: String::new(),
        }
    }

    pub fn pass_if(name: impl Into<String>, ok: bool) -> Self {
        Self::new(name, if ok { Status::Pass } else { Status::Fail })
    }

    /// Passes iff `measured < tolerance`.
    pub fn below(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        let mut o = Self::pass_if(name, measured < tolerance);
        o.measured = Some(measured);
        o.tolerance = Some(tolerance);
        o
    }

    pub fn node(mut self, node: impl Into<String>) -> Self {
        self.node = Some(node.into());
        self
    }

    pub fn samples(mut self, samples: usize, seed: u64) -> Self {
        self.samples = samples;
        self.seed = Some(seed);
        self
    }

    pub fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

/// Outcome of a verification run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub seed: u64,
    pub obligations: Vec<Obligation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        !self.obligations.iter().any(|o| o.status.is_failure())
    }

    pub fn failures(&self) -> impl Iterator<Item = &Obligation> {
        self.obligations.iter().filter(|o| o.status.is_failure())
    }

    pub fn find(&self, name: &str) -> impl Iterator<Item = &Obligation> {
        let name = name.to_string();
        self.obligations.iter().filter(move |o| o.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {}", self.seed)?;
        for o in &self.obligations {
            write!(f, "{:<8} {:<26}", o.status.to_string(), o.name)?;
            if let Some(n) = &o.node {
                write!(f, " node={n}")?;
            }
            if let Some(m) = o.measured {
                write!(f, " measured={m:.3e}")?;
            }
            if let Some(t) = o.tolerance {
                write!(f, " tol={t:.0e}")?;
            }
            if o.samples > 0 {
                write!(f, " samples={}", o.samples)?;
            }
            if !o.detail.is_empty() {
                write!(f, " ({})", o.detail)?;
            }
            writeln!(f)?;
        }
        for flag in &self.flags {
            writeln!(f, "flag: {flag}")?;
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}
