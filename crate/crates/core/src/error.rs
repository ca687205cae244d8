use thiserror::Error;

use crate::search::SearchCertificate;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Transitive closure of the supplied relation puts an element below itself.
    #[error("relation is cyclic: element {} would be below itself", .element + 1)]
    Cycle { element: usize },

    #[error("element index {} out of range for a poset of size {size}", .index + 1)]
    IndexOutOfRange { index: usize, size: usize },

    #[error("ground size {0} is outside 1..=63")]
    GroundSize(usize),

    #[error("set {set} is not a subset of the ground set {ground}")]
    SetOutOfRange { set: String, ground: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("ground size {n} exceeds the scan limit {limit}")]
    GroundTooLarge { n: usize, limit: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(Box<BudgetState>),
}

/// What a search had established when it ran out of budget.
#[derive(Debug, Clone)]
pub struct BudgetState {
    pub detail: String,
    /// Best saturated family known so far, as a non-exhausted certificate.
    pub partial: Option<SearchCertificate>,
}

impl std::fmt::Display for BudgetState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.detail)?;
        if let Some(cert) = &self.partial {
            write!(f, " (best upper bound {})", cert.value)?;
        }
        Ok(())
    }
}
