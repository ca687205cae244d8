//! Outcome of one structural check on one input.

use std::fmt;

use crate::family::{Family, SetWord};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub id: &'static str,
    pub status: CheckStatus,
    /// Free-form facts recorded while checking (counts, sub-results).
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail(Countermodel),
    /// The check does not apply to this input.
    PreconditionFailed(String),
    /// The check applies but its hypothesis side is empty.
    Vacuous(String),
}

/// A concrete input on which a checked statement fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Countermodel {
    pub family: Option<Family>,
    pub detail: String,
    pub sets: Vec<SetWord>,
    pub element: Option<usize>,
}

impl Countermodel {
    pub fn new(detail: impl Into<String>) -> Countermodel {
        Countermodel {
            family: None,
            detail: detail.into(),
            sets: Vec::new(),
            element: None,
        }
    }

    pub fn in_family(mut self, f: &Family) -> Self {
        self.family = Some(f.clone());
        self
    }

    pub fn with_sets(mut self, sets: impl IntoIterator<Item = SetWord>) -> Self {
        self.sets.extend(sets);
        self
    }

    pub fn at_element(mut self, i: usize) -> Self {
        self.element = Some(i);
        self
    }
}

impl LemmaReport {
    pub fn new(id: &'static str, status: CheckStatus) -> LemmaReport {
        LemmaReport {
            id,
            status,
            notes: Vec::new(),
        }
    }

    pub fn pass(id: &'static str) -> LemmaReport {
        Self::new(id, CheckStatus::Pass)
    }

    pub fn fail(id: &'static str, witness: Countermodel) -> LemmaReport {
        Self::new(id, CheckStatus::Fail(witness))
    }

    pub fn precondition(id: &'static str, reason: impl Into<String>) -> LemmaReport {
        Self::new(id, CheckStatus::PreconditionFailed(reason.into()))
    }

    pub fn vacuous(id: &'static str, reason: impl Into<String>) -> LemmaReport {
        Self::new(id, CheckStatus::Vacuous(reason.into()))
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn is_fail(&self) -> bool {
        matches!(self.status, CheckStatus::Fail(_))
    }

    pub fn is_pass(&self) -> bool {
        matches!(self.status, CheckStatus::Pass)
    }
}

impl CheckStatus {
    pub fn name(&self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail(_) => "fail",
            CheckStatus::PreconditionFailed(_) => "precondition-failed",
            CheckStatus::Vacuous(_) => "vacuous",
        }
    }
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.id, self.status.name())?;
        match &self.status {
            CheckStatus::Fail(c) => write!(f, " ({})", c.detail),
            CheckStatus::PreconditionFailed(r) | CheckStatus::Vacuous(r) => write!(f, " ({r})"),
            CheckStatus::Pass => Ok(()),
        }
    }
}
