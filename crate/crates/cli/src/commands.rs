//! Command-line surface: argument parsing and one function per subcommand.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{ArgGroup, Parser, Subcommand};
use posat::derived::{derive, run_suite, DerivedStructures};
use posat::pair_system::{
    check_restriction, check_size_lower_bound, exact_min_size, generated_membership,
    sample_generating_pairs, EnumConfig, FValue, PairSystem, RestrictionCheck,
};
use posat::search::{
    enumerate_min_saturated, greedy_saturated, sat_number_cached, LevelCache, SearchConfig,
};
use posat::{
    chain_family, saturation_verdict, CheckStatus, Error, Family, LemmaReport, PatternPoset,
    SaturationVerdict, SearchCertificate,
};
use serde_json::{json, Map, Value};

use crate::cache::{sha256_hex, DiskCache, StoredCertificate};
use crate::report::{family_value, set_value, sets_value, Format, Report, Status};

pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Parser)]
#[command(name = "posat", version, about = "Induced poset saturation laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Node budget for searches and enumerations (accepts forms like 1e6).
    #[arg(long, global = true, value_parser = parse_count)]
    pub budget_nodes: Option<u64>,

    /// Wall-clock budget in seconds for sat-number searches.
    #[arg(long, global = true)]
    pub budget_secs: Option<u64>,

    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Cache directory; falls back to $POSAT_CACHE_DIR, then .posat-cache/.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,

    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Add wall-clock timings to reports (makes them run-dependent).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a family is saturated for a pattern.
    Verify { family: PathBuf, pattern: String },
    /// Exact minimum size of a saturated family over [n].
    Satnum { n: usize, pattern: String },
    /// Derived structures (maxima, diamond tops, generators) of a family.
    Derive { family: PathBuf },
    /// Run the structural check suite on a family or on every minimum
    /// diamond-saturated family over [n].
    #[command(group(ArgGroup::new("input").required(true).args(["family", "enumerate"])))]
    Lab {
        family: Option<PathBuf>,
        #[arg(long, value_name = "N")]
        enumerate: Option<usize>,
    },
    /// Checks on generating pairs over [n] with parameter m.
    Fcheck {
        n: usize,
        m: usize,
        /// Compute the exact minimum size of a generating pair.
        #[arg(long)]
        exact: bool,
        /// Sample this many generating pairs and check their restrictions.
        #[arg(long, value_name = "COUNT")]
        claims: Option<usize>,
        /// Check a pair read from a file.
        #[arg(long, value_name = "FILE")]
        pair: Option<PathBuf>,
    },
    /// Print a family in the family text format.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// {∅, {1}, {1,2}, ..., [n]}.
    Chain { n: usize },
    /// Every subset of [n].
    Power { n: usize },
    /// Every k-subset of [n].
    Layer { n: usize, k: usize },
    /// A saturated family built greedily for the pattern.
    Greedy { n: usize, pattern: String },
}

/// Integer counts, also written in scientific notation (`1e6`, `2.5e3`).
pub fn parse_count(s: &str) -> Result<u64, String> {
    let s = s.trim().replace('_', "");
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a count"))?;
    if !v.is_finite() || v < 0.0 || v.fract() != 0.0 || v > u64::MAX as f64 {
        return Err(format!("`{s}` is not a whole nonnegative count"));
    }
    Ok(v as u64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

#[derive(Debug)]
struct CliError {
    message: String,
    code: i32,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::BudgetExceeded(_)) {
            3
        } else {
            2
        };
        CliError {
            message: e.to_string(),
            code,
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError {
        message: format!("cannot read {}: {e}", path.display()),
        code: 2,
    }
}

struct Context<'a> {
    cli: &'a Cli,
    workers: usize,
    pool: rayon::ThreadPool,
    started: Instant,
}

impl Context<'_> {
    fn search_config(&self) -> SearchConfig {
        let mut config = SearchConfig {
            workers: self.workers,
            ..SearchConfig::default()
        };
        if let Some(n) = self.cli.budget_nodes {
            config.max_nodes = n;
        }
        if let Some(s) = self.cli.budget_secs {
            config.max_time = Some(Duration::from_secs(s));
        }
        config
    }

    fn enum_config(&self) -> EnumConfig {
        let mut config = EnumConfig {
            workers: self.workers,
            ..EnumConfig::default()
        };
        if let Some(n) = self.cli.budget_nodes {
            config.max_nodes = n;
        }
        config
    }

    fn cache(&self) -> Option<DiskCache> {
        (!self.cli.no_cache).then(|| DiskCache::resolve(self.cli.cache_dir.as_deref()))
    }

    fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        self.pool.install(f)
    }

    /// Budget flags echoed into reports, since they can change the outcome.
    fn budget_args(&self, args: &mut Map<String, Value>) {
        args.insert("budget_nodes".into(), json!(self.cli.budget_nodes));
        args.insert("budget_secs".into(), json!(self.cli.budget_secs));
    }

    fn finish(&self, mut report: Report) -> Report {
        if self.cli.timings {
            report.set(
                "timing",
                json!({ "elapsed_ms": self.started.elapsed().as_millis() as u64 }),
            );
        }
        report
    }
}

fn read_input(path: &Path) -> Result<(String, String), CliError> {
    let bytes = std::fs::read(path).map_err(|e| io_error(path, e))?;
    let hash = sha256_hex(&bytes);
    let text = String::from_utf8(bytes).map_err(|_| CliError {
        message: format!("{} is not UTF-8 text", path.display()),
        code: 2,
    })?;
    Ok((text, hash))
}

fn pattern_inputs(p: &PatternPoset) -> Value {
    json!({ "literal": p.to_literal(), "key": p.canonical_key() })
}

pub fn run(cli: &Cli) -> Outcome {
    let workers = cli
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(p) => p,
        Err(e) => {
            return Outcome {
                stdout: String::new(),
                stderr: format!("error: cannot start worker pool: {e}\n"),
                code: 2,
            }
        }
    };
    let ctx = Context {
        cli,
        workers,
        pool,
        started: Instant::now(),
    };
    let result = match &cli.command {
        Command::Gen { kind } => {
            return match gen(kind) {
                Ok(f) => Outcome {
                    stdout: f.to_text(),
                    stderr: String::new(),
                    code: 0,
                },
                Err(e) => error_outcome(e.into()),
            }
        }
        Command::Verify { family, pattern } => verify(&ctx, family, pattern),
        Command::Satnum { n, pattern } => satnum(&ctx, *n, pattern),
        Command::Derive { family } => derive_cmd(&ctx, family),
        Command::Lab { family, enumerate } => lab(&ctx, family.as_deref(), *enumerate),
        Command::Fcheck {
            n,
            m,
            exact,
            claims,
            pair,
        } => fcheck(&ctx, *n, *m, *exact, *claims, pair.as_deref()),
    };
    match result {
        Ok(report) => {
            let report = ctx.finish(report);
            Outcome {
                stdout: report.render(cli.format),
                stderr: String::new(),
                code: report.status().exit_code(),
            }
        }
        Err(e) => error_outcome(e),
    }
}

fn error_outcome(e: CliError) -> Outcome {
    Outcome {
        stdout: String::new(),
        stderr: format!("error: {}\n", e.message),
        code: e.code,
    }
}

fn gen(kind: &GenKind) -> posat::Result<Family> {
    match kind {
        GenKind::Chain { n } => chain_family(*n),
        GenKind::Power { n } => Family::power_set(*n),
        GenKind::Layer { n, k } => {
            let sets = Family::power_set(*n)?;
            Family::new(*n, sets.iter().filter(|s| s.len() == *k))
        }
        GenKind::Greedy { n, pattern } => greedy_saturated(*n, &PatternPoset::parse(pattern)?),
    }
}

fn verify(ctx: &Context, path: &Path, pattern: &str) -> Result<Report, CliError> {
    let (text, hash) = read_input(path)?;
    let f = Family::parse(&text)?;
    let p = PatternPoset::parse(pattern)?;
    let verdict = ctx.install(|| saturation_verdict(&f, &p))?;
    let mut report = Report::new(
        "verify",
        json!({ "family": path.display().to_string(), "pattern": pattern }),
    );
    report.set(
        "inputs",
        json!({ "family_sha256": hash, "pattern": pattern_inputs(&p) }),
    );
    let mut result = json!({
        "verdict": verdict.name(),
        "n": f.ground_size(),
        "family_size": f.len(),
    });
    match verdict {
        SaturationVerdict::ContainsCopy(e) => result["copy"] = sets_value(e.image()),
        SaturationVerdict::NotSaturated(s) => result["addable_set"] = set_value(s),
        SaturationVerdict::Saturated => {}
    }
    report.set("result", result);
    Ok(report)
}

fn level_stats_value(levels: &[posat::search::LevelStats]) -> Value {
    Value::Array(
        levels
            .iter()
            .map(|l| json!({ "size": l.size, "families": l.families, "saturated": l.saturated }))
            .collect(),
    )
}

fn satnum(ctx: &Context, n: usize, pattern: &str) -> Result<Report, CliError> {
    let p = PatternPoset::parse(pattern)?;
    let mut args = Map::new();
    args.insert("n".into(), json!(n));
    args.insert("pattern".into(), json!(pattern));
    ctx.budget_args(&mut args);
    let mut report = Report::new("satnum", Value::Object(args));
    report.set("inputs", json!({ "pattern": pattern_inputs(&p) }));

    let cache = ctx.cache();
    let stored = match &cache {
        Some(c) => ctx.install(|| c.load_certificate(n, &p)),
        None => None,
    };
    let stored = match stored {
        Some(s) => s,
        None => {
            let config = ctx.search_config();
            let level_cache = cache.as_ref().map(|c| c as &dyn LevelCache);
            match sat_number_cached(n, &p, &config, level_cache) {
                Ok(cert) => {
                    let stored = stored_from(&cert);
                    if let Some(c) = &cache {
                        c.store_certificate(&p, &stored);
                    }
                    stored
                }
                Err(Error::BudgetExceeded(state)) => {
                    let mut result = json!({ "exhausted": false, "detail": state.detail });
                    if let Some(partial) = &state.partial {
                        result["upper_bound"] = json!(partial.value);
                        result["lower_bound"] = json!(partial.lower_bound);
                        result["witness"] = family_value(&partial.witness);
                        report.set(
                            "stats",
                            json!({ "nodes": partial.stats.nodes, "levels": level_stats_value(&partial.stats.levels) }),
                        );
                    }
                    report.set("result", result);
                    report.set_status(Status::BudgetExceeded);
                    return Ok(report);
                }
                Err(e) => return Err(e.into()),
            }
        }
    };
    let witness = Family::parse(&stored.witness)?;
    let verified = ctx
        .install(|| saturation_verdict(&witness, &p))?
        .is_saturated();
    report.set(
        "result",
        json!({
            "value": stored.value,
            "exhausted": true,
            "lower_bound": stored.value,
            "witness": family_value(&witness),
            "witness_verified": verified,
        }),
    );
    report.set(
        "stats",
        json!({ "nodes": stored.nodes, "levels": level_stats_value(&stored.levels) }),
    );
    if !verified {
        report.set_status(Status::Fail);
    }
    Ok(report)
}

fn stored_from(cert: &SearchCertificate) -> StoredCertificate {
    StoredCertificate {
        n: cert.n,
        pattern_key: cert.pattern.canonical_key(),
        value: cert.value,
        witness: cert.witness.to_text(),
        nodes: cert.stats.nodes,
        levels: cert.stats.levels.clone(),
    }
}

fn derived_value(d: &DerivedStructures) -> Value {
    json!({
        "maxima": sets_value(d.maxima.iter()),
        "tops": sets_value(d.tops.iter()),
        "top_witnesses": d.tops.iter().zip(&d.top_witnesses).map(|(t, w)| json!({
            "top": set_value(t),
            "bottom": set_value(w.bottom),
            "left": set_value(w.left),
            "right": set_value(w.right),
        })).collect::<Vec<_>>(),
        "minimal_tops": sets_value(d.minimal_tops.iter()),
        "free_tops": sets_value(d.free_tops.iter()),
        "generators_of": d.generators_of.iter().map(|(a, g)| json!({
            "top": set_value(*a),
            "generators": sets_value(g.iter()),
        })).collect::<Vec<_>>(),
        "generators": sets_value(d.generators.iter()),
        "uncovered_by_generators": set_value(d.uncovered_by_generators),
        "uncovered_by_free_tops": set_value(d.uncovered_by_free_tops),
    })
}

fn derive_cmd(ctx: &Context, path: &Path) -> Result<Report, CliError> {
    let (text, hash) = read_input(path)?;
    let f = Family::parse(&text)?;
    let d = ctx.install(|| derive(&f))?;
    let mut report = Report::new("derive", json!({ "family": path.display().to_string() }));
    report.set("inputs", json!({ "family_sha256": hash }));
    report.set("family", family_value(&f));
    report.set("result", derived_value(&d));
    Ok(report)
}

pub fn check_value(r: &LemmaReport) -> Value {
    let mut v = json!({ "id": r.id, "status": r.status.name(), "notes": r.notes });
    match &r.status {
        CheckStatus::Fail(c) => {
            let mut w = json!({ "detail": c.detail, "sets": sets_value(c.sets.iter().copied()) });
            if let Some(i) = c.element {
                w["element"] = json!(i + 1);
            }
            if let Some(f) = &c.family {
                w["family"] = family_value(f);
            }
            v["witness"] = w;
        }
        CheckStatus::PreconditionFailed(reason) | CheckStatus::Vacuous(reason) => {
            v["reason"] = json!(reason);
        }
        CheckStatus::Pass => {}
    }
    v
}

fn lab(ctx: &Context, path: Option<&Path>, enumerate: Option<usize>) -> Result<Report, CliError> {
    let mut args = Map::new();
    let mut report;
    let families = match (path, enumerate) {
        (Some(path), _) => {
            let (text, hash) = read_input(path)?;
            args.insert("family".into(), json!(path.display().to_string()));
            report = Report::new("lab", Value::Object(args));
            report.set("inputs", json!({ "family_sha256": hash }));
            vec![Family::parse(&text)?]
        }
        (None, Some(n)) => {
            args.insert("enumerate".into(), json!(n));
            ctx.budget_args(&mut args);
            report = Report::new("lab", Value::Object(args));
            match enumerate_min_saturated(n, &PatternPoset::diamond(), &ctx.search_config()) {
                Ok(fams) => fams,
                Err(Error::BudgetExceeded(state)) => {
                    report.set("result", json!({ "detail": state.detail }));
                    report.set_status(Status::BudgetExceeded);
                    return Ok(report);
                }
                Err(e) => return Err(e.into()),
            }
        }
        (None, None) => unreachable!("clap requires a family file or --enumerate"),
    };
    let suites = ctx.install(|| {
        families
            .iter()
            .map(run_suite)
            .collect::<posat::Result<Vec<_>>>()
    })?;
    let mut counts = Map::new();
    for name in ["pass", "fail", "vacuous", "precondition-failed"] {
        counts.insert(name.into(), json!(0));
    }
    let mut entries = Vec::new();
    for (f, suite) in families.iter().zip(&suites) {
        for r in suite {
            let c = counts.get_mut(r.status.name()).expect("known status");
            *c = json!(c.as_u64().unwrap_or(0) + 1);
            if r.is_fail() {
                report.escalate(Status::Fail);
            }
        }
        entries.push(json!({
            "family": family_value(f),
            "checks": suite.iter().map(check_value).collect::<Vec<_>>(),
        }));
    }
    report.set("families", Value::Array(entries));
    report.set(
        "summary",
        json!({ "families": families.len(), "checks": counts }),
    );
    Ok(report)
}

fn restriction_value(c: &RestrictionCheck) -> Value {
    json!({
        "t": c.t,
        "applies": c.applies,
        "tops_agree": c.tops_agree,
        "restricted_low_high": c.restricted_low_high,
        "restricted_generating": c.restricted_generating,
        "holds": c.holds(),
    })
}

fn pair_value(ps: &PairSystem) -> Value {
    json!({
        "ground": set_value(ps.ground().universe()),
        "ambient": ps.ground().ambient(),
        "m": ps.m(),
        "generators": sets_value(ps.generators().iter()),
        "blockers": sets_value(ps.blockers().iter()),
        "size": ps.size(),
    })
}

/// Attempts allowed per requested sample.
const TRIES_PER_SAMPLE: usize = 2000;

fn fcheck(
    ctx: &Context,
    n: usize,
    m: usize,
    exact: bool,
    claims: Option<usize>,
    pair: Option<&Path>,
) -> Result<Report, CliError> {
    let mut args = Map::new();
    args.insert("n".into(), json!(n));
    args.insert("m".into(), json!(m));
    args.insert("exact".into(), json!(exact));
    args.insert("claims".into(), json!(claims));
    if claims.is_some() {
        args.insert("seed".into(), json!(ctx.cli.seed));
    }
    if let Some(p) = pair {
        args.insert("pair".into(), json!(p.display().to_string()));
    }
    ctx.budget_args(&mut args);
    let mut report = Report::new("fcheck", Value::Object(args));
    let config = ctx.enum_config();

    match check_size_lower_bound(n, m, &config) {
        Ok(r) => {
            if r.is_fail() {
                report.escalate(Status::Fail);
            }
            report.set("bound_check", check_value(&r));
        }
        Err(Error::BudgetExceeded(state)) => {
            report.set(
                "bound_check",
                json!({ "status": "budget-exceeded", "detail": state.detail }),
            );
            report.escalate(Status::BudgetExceeded);
        }
        Err(e) => return Err(e.into()),
    }

    let mut corpus: Vec<PairSystem> = Vec::new();
    if exact {
        match exact_min_size(n, m, &config) {
            Ok(res) => {
                let mut v = json!({ "candidates": res.nodes });
                match res.value {
                    FValue::Infinite => v["value"] = json!("infinite"),
                    FValue::Finite { size, witness } => {
                        let valid = generated_membership(&witness)?.in_class();
                        if !valid || size + 2 * m < n {
                            report.escalate(Status::Fail);
                        }
                        v["value"] = json!(size);
                        v["witness"] = pair_value(&witness);
                        v["witness_generating"] = json!(valid);
                        corpus.push(witness);
                    }
                }
                report.set("exact", v);
            }
            Err(Error::BudgetExceeded(state)) => {
                report.set(
                    "exact",
                    json!({ "status": "budget-exceeded", "detail": state.detail }),
                );
                report.escalate(Status::BudgetExceeded);
            }
            Err(e) => return Err(e.into()),
        }
    }

    if let Some(path) = pair {
        let (text, hash) = read_input(path)?;
        let ps = PairSystem::parse(&text)?;
        let membership = generated_membership(&ps)?;
        let mut v = json!({
            "sha256": hash,
            "pair": pair_value(&ps),
            "membership": membership.describe(),
        });
        if membership.in_class() {
            let check = check_restriction(&ps)?;
            if !check.holds() {
                report.escalate(Status::Fail);
            }
            v["restriction"] = restriction_value(&check);
        }
        report.set("pair", v);
    }

    if let Some(count) = claims {
        let sampled = sample_generating_pairs(
            &[(n, m)],
            ctx.cli.seed,
            count,
            count.saturating_mul(TRIES_PER_SAMPLE),
        )?;
        let found = sampled.len();
        corpus.extend(sampled);
        let mut applicable = 0usize;
        let mut violations = Vec::new();
        for ps in &corpus {
            let check = check_restriction(ps)?;
            applicable += usize::from(check.applies);
            if !check.holds() {
                violations
                    .push(json!({ "pair": ps.to_text(), "check": restriction_value(&check) }));
            }
        }
        if !violations.is_empty() {
            report.escalate(Status::Fail);
        }
        report.set(
            "claims",
            json!({
                "requested": count,
                "sampled": found,
                "checked": corpus.len(),
                "applicable": applicable,
                "violations": violations,
            }),
        );
    }
    Ok(report)
}
