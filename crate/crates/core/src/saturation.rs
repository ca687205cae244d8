//! P-freeness and P-saturation of families.

use rayon::prelude::*;

use crate::embedding::{Embedding, Matcher};
use crate::error::{Error, Result};
use crate::family::{all_sets, check_ground, Family, SetWord};
use crate::poset::PatternPoset;

/// Largest ground size for which full `2^n` scans are allowed by default.
pub const SCAN_LIMIT: usize = 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SaturationVerdict {
    ContainsCopy(Embedding),
    /// The canonically first absent set whose addition creates no copy.
    NotSaturated(SetWord),
    Saturated,
}

impl SaturationVerdict {
    pub fn is_saturated(&self) -> bool {
        matches!(self, SaturationVerdict::Saturated)
    }

    pub fn name(&self) -> &'static str {
        match self {
            SaturationVerdict::ContainsCopy(_) => "contains-copy",
            SaturationVerdict::NotSaturated(_) => "not-saturated",
            SaturationVerdict::Saturated => "saturated",
        }
    }
}

pub fn is_p_free(f: &Family, p: &PatternPoset) -> bool {
    Matcher::new(p).find(f.ground_size(), f.sets()).is_none()
}

pub(crate) fn check_scan(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        Err(Error::GroundTooLarge { n, limit })
    } else {
        Ok(())
    }
}

/// Verdict with the default scan limit. The missing-set scan runs on the
/// current rayon pool; the reported witness does not depend on it.
pub fn saturation_verdict(f: &Family, p: &PatternPoset) -> Result<SaturationVerdict> {
    saturation_verdict_with_limit(f, p, SCAN_LIMIT)
}

pub fn saturation_verdict_with_limit(
    f: &Family,
    p: &PatternPoset,
    limit: usize,
) -> Result<SaturationVerdict> {
    check_scan(f.ground_size(), limit)?;
    Ok(verdict(&Matcher::new(p), f, true))
}

/// Shared by the search, which already runs inside a parallel loop.
pub(crate) fn verdict(matcher: &Matcher, f: &Family, parallel: bool) -> SaturationVerdict {
    let n = f.ground_size();
    if let Some(e) = matcher.find(n, f.sets()) {
        return SaturationVerdict::ContainsCopy(e);
    }
    let fails = |&s: &SetWord| !f.contains(s) && matcher.find_through(n, f.sets(), s).is_none();
    let candidates = all_sets(n);
    let first = if parallel {
        candidates.par_iter().copied().find_first(|s| fails(s))
    } else {
        candidates.iter().find(|s| fails(s)).copied()
    };
    match first {
        Some(s) => SaturationVerdict::NotSaturated(s),
        None => SaturationVerdict::Saturated,
    }
}

/// `{∅, {1}, {1,2}, ..., [n]}`.
pub fn chain_family(n: usize) -> Result<Family> {
    check_ground(n)?;
    Family::new(n, (0..=n).map(SetWord::full))
}
