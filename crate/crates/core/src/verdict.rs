//! Three-valued answers to relation queries.

use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Holds,
    Fails,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    SymbolicDefinite,
    Numeric,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// Least grid point after which no violation was seen. This is an upper
    /// bound on the true threshold.
    Threshold {
        n0: String,
        upper_bound: bool,
    },
    Counterexample {
        point: String,
        detail: String,
    },
    /// A violation repeating along an unbounded family, with sample instances.
    Scheme {
        description: String,
        instances: Vec<String>,
    },
    Horizon {
        point: String,
        reason: String,
    },
    Symbolic {
        lhs: String,
        rhs: String,
    },
    Constant {
        c: String,
    },
    Constants {
        pairs: Vec<(String, String)>,
    },
    Exponent {
        k: u32,
    },
    Accumulation {
        modulus: u32,
        limsup: String,
        liminf: String,
    },
    Mapping {
        pairs: Vec<(String, String)>,
    },
    Rule {
        name: String,
    },
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub relation: String,
    pub lhs: String,
    pub rhs: String,
    pub outcome: Outcome,
    pub witness: Witness,
    pub mode: Mode,
}

impl Verdict {
    pub fn new(
        relation: &str,
        lhs: impl Into<String>,
        rhs: impl Into<String>,
        outcome: Outcome,
        witness: Witness,
        mode: Mode,
    ) -> Self {
        Verdict {
            relation: relation.to_string(),
            lhs: lhs.into(),
            rhs: rhs.into(),
            outcome,
            witness,
            mode,
        }
    }

    pub fn holds(&self) -> bool {
        self.outcome == Outcome::Holds
    }

    pub fn fails(&self) -> bool {
        self.outcome == Outcome::Fails
    }

    pub fn unknown(&self) -> bool {
        self.outcome == Outcome::Unknown
    }

    pub fn is_symbolic(&self) -> bool {
        self.mode == Mode::SymbolicDefinite
    }

    /// Same verdict under a different relation name and operands.
    pub fn relabel(mut self, relation: &str, lhs: &str, rhs: &str) -> Self {
        self.relation = relation.to_string();
        self.lhs = lhs.to_string();
        self.rhs = rhs.to_string();
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).unwrap_or(serde_json::Value::Null)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}: {:?} ({:?})",
            self.lhs, self.relation, self.rhs, self.outcome, self.mode
        )
    }
}
