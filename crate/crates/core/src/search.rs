//! Exact saturation numbers by isomorph-free level-wise search.
//!
//! Level `k` holds one canonical representative of every P-free family of
//! size `k`. A family is saturated exactly when none of its one-set
//! extensions is P-free, so the pass that tests level `k` for saturation also
//! yields the extensions that seed level `k + 1`. Levels are generated in
//! increasing `k`; the first level containing a saturated family gives the
//! saturation number.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embedding::Matcher;
use crate::error::{BudgetState, Error, Result};
use crate::family::{all_sets, check_ground, Family, SetWord};
use crate::poset::PatternPoset;
use crate::saturation::{chain_family, check_scan, verdict, SCAN_LIMIT};

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Upper limit on generated extensions, summed over all levels.
    pub max_nodes: u64,
    pub max_time: Option<Duration>,
    pub workers: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_nodes: 100_000_000,
            max_time: Some(Duration::from_secs(600)),
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelStats {
    pub size: usize,
    /// Canonical P-free families of this size.
    pub families: usize,
    pub saturated: usize,
}

#[derive(Clone, Debug, Default)]
pub struct SearchStats {
    /// Extensions generated (before deduplication), over all levels.
    pub nodes: u64,
    pub levels: Vec<LevelStats>,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct SearchCertificate {
    pub n: usize,
    pub pattern: PatternPoset,
    /// Size of `witness`; the saturation number when `exhausted`.
    pub value: usize,
    pub witness: Family,
    /// True iff every size below `value` was refuted.
    pub exhausted: bool,
    /// Every size below this was refuted.
    pub lower_bound: usize,
    pub stats: SearchStats,
}

/// One finished level, as stored in a [`LevelCache`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Level {
    pub size: usize,
    pub free: Vec<Family>,
    pub saturated: Vec<Family>,
    /// Extensions generated while building this level.
    pub nodes: u64,
}

/// Persistence for finished levels so interrupted searches resume.
pub trait LevelCache: Sync {
    fn load(&self, n: usize, pattern: &PatternPoset, size: usize) -> Option<Level>;
    fn store(&self, n: usize, pattern: &PatternPoset, level: &Level);
}

struct Search<'a> {
    n: usize,
    pattern: &'a PatternPoset,
    matcher: Matcher,
    universe: Vec<SetWord>,
    config: &'a SearchConfig,
    cache: Option<&'a dyn LevelCache>,
    started: Instant,
    out_of_time: AtomicBool,
    nodes: u64,
    levels: Vec<LevelStats>,
    /// Size of a known saturated family; reaching it ends the search.
    known_upper: Option<usize>,
}

enum Outcome {
    Found {
        size: usize,
        saturated: Vec<Family>,
    },
    /// Every size below the known upper bound was refuted.
    MeetsUpperBound,
    OutOfBudget {
        refuted_below: usize,
        detail: String,
    },
}

impl<'a> Search<'a> {
    fn timed_out(&self) -> bool {
        if self.out_of_time.load(Ordering::Relaxed) {
            return true;
        }
        if let Some(limit) = self.config.max_time {
            if self.started.elapsed() > limit {
                self.out_of_time.store(true, Ordering::Relaxed);
                return true;
            }
        }
        false
    }

    /// Sets whose addition keeps `f` P-free; `None` if time ran out.
    fn free_additions(&self, f: &Family) -> Option<Vec<SetWord>> {
        if self.timed_out() {
            return None;
        }
        Some(
            self.universe
                .iter()
                .copied()
                .filter(|&s| {
                    !f.contains(s) && self.matcher.find_through(self.n, f.sets(), s).is_none()
                })
                .collect(),
        )
    }

    fn additions_for(&self, free: &[Family]) -> Option<Vec<Vec<SetWord>>> {
        free.par_iter().map(|f| self.free_additions(f)).collect()
    }

    fn validated(&self, level: Level, size: usize) -> Option<Level> {
        let ok = level.size == size
            && level.saturated.iter().all(|f| {
                f.len() == size
                    && f.ground_size() == self.n
                    && verdict(&self.matcher, f, false).is_saturated()
            });
        ok.then_some(level)
    }

    fn run(&mut self) -> Result<Outcome> {
        let mut free = vec![Family::empty(self.n)?];
        let mut size = 0usize;
        let mut level_nodes = 0u64;
        let mut pending: Option<Level> = None;
        loop {
            let cached = pending.take().or_else(|| {
                self.cache
                    .and_then(|c| c.load(self.n, self.pattern, size))
                    .and_then(|l| self.validated(l, size))
            });
            let mut additions = None;
            let saturated = match cached {
                Some(level) => {
                    free = level.free;
                    level_nodes = level.nodes;
                    level.saturated
                }
                None => {
                    let adds = match self.additions_for(&free) {
                        Some(a) => a,
                        None => return Ok(self.out_of_time(size)),
                    };
                    let saturated: Vec<Family> = free
                        .iter()
                        .zip(&adds)
                        .filter(|(_, a)| a.is_empty())
                        .map(|(f, _)| f.clone())
                        .collect();
                    if let Some(cache) = self.cache {
                        cache.store(
                            self.n,
                            self.pattern,
                            &Level {
                                size,
                                free: free.clone(),
                                saturated: saturated.clone(),
                                nodes: level_nodes,
                            },
                        );
                    }
                    additions = Some(adds);
                    saturated
                }
            };
            self.nodes += level_nodes;
            self.levels.push(LevelStats {
                size,
                families: free.len(),
                saturated: saturated.len(),
            });
            if !saturated.is_empty() {
                return Ok(Outcome::Found { size, saturated });
            }
            // A maximal P-free family is saturated, so an unsaturated level
            // always has extensions.
            debug_assert!(!free.is_empty());
            if self.known_upper == Some(size + 1) {
                return Ok(Outcome::MeetsUpperBound);
            }

            if let Some(next) = self
                .cache
                .and_then(|c| c.load(self.n, self.pattern, size + 1))
                .and_then(|l| self.validated(l, size + 1))
            {
                pending = Some(next);
                size += 1;
                continue;
            }
            let adds = match additions {
                Some(a) => a,
                None => match self.additions_for(&free) {
                    Some(a) => a,
                    None => return Ok(self.out_of_time(size + 1)),
                },
            };
            let generated: u64 = adds.iter().map(|a| a.len() as u64).sum();
            if self.nodes + generated > self.config.max_nodes {
                return Ok(Outcome::OutOfBudget {
                    refuted_below: size + 1,
                    detail: format!(
                        "node budget {} exhausted while extending size {size}",
                        self.config.max_nodes
                    ),
                });
            }
            let children: Option<Vec<Vec<Family>>> = free
                .par_iter()
                .zip(adds.par_iter())
                .map(|(f, a)| {
                    if self.timed_out() {
                        return None;
                    }
                    Some(a.iter().map(|&s| f.with(s).canonical_form()).collect())
                })
                .collect();
            let Some(children) = children else {
                return Ok(self.out_of_time(size + 1));
            };
            let mut next: Vec<Family> = children.into_iter().flatten().collect();
            next.par_sort_unstable();
            next.dedup();
            free = next;
            level_nodes = generated;
            size += 1;
        }
    }

    fn out_of_time(&self, refuted_below: usize) -> Outcome {
        Outcome::OutOfBudget {
            refuted_below,
            detail: format!(
                "time budget {:?} exhausted",
                self.config.max_time.unwrap_or_default()
            ),
        }
    }
}

fn run_search(
    n: usize,
    pattern: &PatternPoset,
    config: &SearchConfig,
    cache: Option<&dyn LevelCache>,
    known_upper: Option<usize>,
) -> Result<(Outcome, SearchStats)> {
    check_ground(n)?;
    check_scan(n, SCAN_LIMIT)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .map_err(|e| Error::Parameter(format!("cannot start worker pool: {e}")))?;
    let mut search = Search {
        n,
        pattern,
        matcher: Matcher::new(pattern),
        universe: all_sets(n),
        config,
        cache,
        started: Instant::now(),
        out_of_time: AtomicBool::new(false),
        nodes: 0,
        levels: Vec::new(),
        known_upper,
    };
    let outcome = pool.install(|| search.run())?;
    let stats = SearchStats {
        nodes: search.nodes,
        levels: search.levels,
        elapsed: search.started.elapsed(),
    };
    Ok((outcome, stats))
}

/// Extends greedily in canonical set order until maximal P-free, which is
/// saturated. Starts from the chain when the chain is P-free.
pub fn greedy_saturated(n: usize, pattern: &PatternPoset) -> Result<Family> {
    check_ground(n)?;
    check_scan(n, SCAN_LIMIT)?;
    let matcher = Matcher::new(pattern);
    let chain = chain_family(n)?;
    let mut f = if matcher.find(n, chain.sets()).is_none() {
        chain
    } else {
        Family::empty(n)?
    };
    for s in all_sets(n) {
        if !f.contains(s) && matcher.find_through(n, f.sets(), s).is_none() {
            f = f.with(s);
        }
    }
    Ok(f)
}

fn budget_error(
    n: usize,
    pattern: &PatternPoset,
    upper: Option<Family>,
    refuted_below: usize,
    detail: String,
    stats: SearchStats,
) -> Error {
    let partial = upper
        .or_else(|| greedy_saturated(n, pattern).ok())
        .map(|witness| SearchCertificate {
            n,
            pattern: pattern.clone(),
            value: witness.len(),
            lower_bound: refuted_below.min(witness.len()),
            witness,
            exhausted: false,
            stats,
        });
    Error::BudgetExceeded(Box::new(BudgetState { detail, partial }))
}

/// `sat*(n, pattern)` with a saturated witness of that size.
///
/// The greedy family of [`greedy_saturated`] bounds the search: once every
/// smaller size is refuted it is returned as the witness. Otherwise the
/// witness is the least canonical saturated family of minimum size.
///
/// On budget exhaustion the error carries a non-exhausted certificate whose
/// witness is the greedy family.
pub fn sat_number(
    n: usize,
    pattern: &PatternPoset,
    config: &SearchConfig,
) -> Result<SearchCertificate> {
    sat_number_cached(n, pattern, config, None)
}

pub fn sat_number_cached(
    n: usize,
    pattern: &PatternPoset,
    config: &SearchConfig,
    cache: Option<&dyn LevelCache>,
) -> Result<SearchCertificate> {
    let upper = greedy_saturated(n, pattern)?;
    let (outcome, stats) = run_search(n, pattern, config, cache, Some(upper.len()))?;
    let certificate = |value: usize, witness: Family, stats: SearchStats| SearchCertificate {
        n,
        pattern: pattern.clone(),
        value,
        witness,
        exhausted: true,
        lower_bound: value,
        stats,
    };
    match outcome {
        Outcome::Found { size, saturated } => {
            let witness = saturated.into_iter().min().expect("nonempty level");
            Ok(certificate(size, witness, stats))
        }
        Outcome::MeetsUpperBound => Ok(certificate(upper.len(), upper, stats)),
        Outcome::OutOfBudget {
            refuted_below,
            detail,
        } => Err(budget_error(
            n,
            pattern,
            Some(upper),
            refuted_below,
            detail,
            stats,
        )),
    }
}

/// Every saturated family of minimum size, one canonical representative per
/// relabeling orbit, sorted.
pub fn enumerate_min_saturated(
    n: usize,
    pattern: &PatternPoset,
    config: &SearchConfig,
) -> Result<Vec<Family>> {
    let (outcome, stats) = run_search(n, pattern, config, None, None)?;
    match outcome {
        Outcome::Found { mut saturated, .. } => {
            saturated.sort();
            Ok(saturated)
        }
        Outcome::MeetsUpperBound => unreachable!("no upper bound was given"),
        Outcome::OutOfBudget {
            refuted_below,
            detail,
        } => Err(budget_error(n, pattern, None, refuted_below, detail, stats)),
    }
}
