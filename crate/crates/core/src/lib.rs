//! Induced saturation of small posets in the Boolean lattice.
//!
//! Families are sets of subsets of `[n]` (bitmasks, `n <= 63`); patterns are
//! small posets. The crate decides P-freeness and P-saturation, searches for
//! the minimum size of a saturated family, and checks structural statements
//! about diamond-saturated families and about pairs of set systems.

pub mod check;
pub mod derived;
pub mod embedding;
pub mod error;
pub mod family;
pub mod pair_system;
pub mod poset;
pub mod saturation;
pub mod search;

pub use check::{CheckStatus, Countermodel, LemmaReport};
pub use embedding::{completes_copy, find_induced_copy, Embedding, Matcher};
pub use error::{BudgetState, Error, Result};
pub use family::{Family, SetWord};
pub use poset::{Builtin, PatternPoset};
pub use saturation::{chain_family, is_p_free, saturation_verdict, SaturationVerdict};
pub use search::{sat_number, SearchCertificate, SearchConfig};
