use std::fmt;

use serde::Serialize;

/// Outcome of a triviality test. Semi-decision procedures answer `Unknown`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Trivial,
    Nontrivial,
    Unknown,
}

impl Verdict {
    pub fn from_bool(trivial: bool) -> Self {
        if trivial {
            Verdict::Trivial
        } else {
            Verdict::Nontrivial
        }
    }

    pub fn is_trivial(self) -> bool {
        self == Verdict::Trivial
    }

    /// Conjunction over independent factors.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Nontrivial, _) | (_, Verdict::Nontrivial) => Verdict::Nontrivial,
            (Verdict::Unknown, _) | (_, Verdict::Unknown) => Verdict::Unknown,
            _ => Verdict::Trivial,
        }
    }

    /// Process exit code used by the command line tool.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Trivial => 0,
            Verdict::Nontrivial => 1,
            Verdict::Unknown => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Trivial => "trivial",
            Verdict::Nontrivial => "nontrivial",
            Verdict::Unknown => "unknown",
        })
    }
}
