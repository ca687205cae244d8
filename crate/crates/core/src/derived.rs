//! Structures derived from a diamond-saturated family and checks of the
//! statements relating them.
//!
//! For a family `F` over `[n]`:
//!
//! * `maxima` are the maximal members of `F`;
//! * `tops` are the `X ⊆ [n]` sitting strictly above an induced V-shape
//!   `R ⊊ P, Q` (with `P`, `Q` incomparable) of members of `F`, i.e. the
//!   tops of diamonds whose other three sets lie in `F`;
//! * `minimal_tops` are the minimal elements of `tops`;
//! * `free_tops` are the minimal tops containing no maximal member;
//! * `generators` are the members of `F` in some diamond under a free top;
//! * `uncovered_by_generators` / `uncovered_by_free_tops` are the elements
//!   of `[n]` in no generator / in no free top.

use itertools::Itertools;

use crate::check::{Countermodel, LemmaReport};
use crate::error::Result;
use crate::family::{Family, SetWord};
use crate::pair_system::{
    generated_membership, minimal_diamond_tops, GroundSet, Membership, PairSystem,
};
use crate::poset::PatternPoset;
use crate::saturation::{check_scan, saturation_verdict, SaturationVerdict, SCAN_LIMIT};

/// An induced V-shape `bottom ⊊ left, right` with `left`, `right`
/// incomparable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VShape {
    pub bottom: SetWord,
    pub left: SetWord,
    pub right: SetWord,
}

impl VShape {
    pub fn top(&self) -> SetWord {
        self.left.union(self.right)
    }

    fn sets(&self) -> [SetWord; 3] {
        [self.bottom, self.left, self.right]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedStructures {
    pub maxima: Family,
    pub tops: Family,
    /// One diamond under each member of `tops`, in the same order.
    pub top_witnesses: Vec<VShape>,
    pub minimal_tops: Family,
    pub free_tops: Family,
    /// `(A, generators of A)` for each free top `A`.
    pub generators_of: Vec<(SetWord, Family)>,
    pub generators: Family,
    pub uncovered_by_generators: SetWord,
    pub uncovered_by_free_tops: SetWord,
}

/// All induced V-shapes among the members of `f`.
pub fn v_shapes(f: &Family) -> Vec<VShape> {
    let sets = f.sets();
    let mut out = Vec::new();
    for (&p, &q) in sets.iter().tuple_combinations() {
        if p.is_subset(q) || q.is_subset(p) {
            continue;
        }
        let meet = p.intersection(q);
        for &r in sets {
            if r.is_subset(meet) {
                out.push(VShape {
                    bottom: r,
                    left: p,
                    right: q,
                });
            }
        }
    }
    out
}

/// Computes every derived structure, scanning all of `P([n])` for tops.
pub fn derive(f: &Family) -> Result<DerivedStructures> {
    let n = f.ground_size();
    check_scan(n, SCAN_LIMIT)?;
    let shapes = v_shapes(f);
    // X is a diamond top over F exactly when some V-shape lies strictly
    // below it, i.e. when X contains the union of its two upper sets.
    let mut tops = Vec::new();
    let mut top_witnesses = Vec::new();
    for x in crate::family::all_sets(n) {
        if let Some(w) = shapes.iter().find(|v| v.top().is_subset(x)) {
            tops.push(x);
            top_witnesses.push(*w);
        }
    }
    let tops = Family::from_unsorted(n, tops);
    let maxima = f.maximal_sets();
    let minimal_tops = tops.minimal_sets();
    let free_tops = Family::from_unsorted(
        n,
        minimal_tops
            .iter()
            .filter(|a| !maxima.iter().any(|b| b.is_subset(*a)))
            .collect(),
    );
    let generators_of: Vec<(SetWord, Family)> = free_tops
        .iter()
        .map(|a| {
            let gens = shapes
                .iter()
                .filter(|v| v.top().is_subset(a))
                .flat_map(|v| v.sets())
                .collect::<Vec<_>>();
            (a, Family::new(n, gens).expect("members of f"))
        })
        .collect();
    let generators = generators_of
        .iter()
        .fold(Family::empty(n).expect("valid n"), |acc, (_, g)| {
            acc.union(g)
        });
    let full = SetWord::full(n);
    Ok(DerivedStructures {
        uncovered_by_generators: full.difference(generators.union_of_members()),
        uncovered_by_free_tops: full.difference(free_tops.union_of_members()),
        maxima,
        tops,
        top_witnesses,
        minimal_tops,
        free_tops,
        generators_of,
        generators,
    })
}

const EXTREME_SIZE: &str = "extreme-set-size";
const TOPS_MAXIMA: &str = "free-tops-and-maxima-chain-saturated";
const SIZE_BOUNDS: &str = "size-bounds";
const COORDINATE_COVER: &str = "coordinate-cover";
const COORDINATE_COUNTS: &str = "coordinate-counts";
const UNCOVERED: &str = "uncovered-coordinates";
const LINEAR_SIZE: &str = "linear-size-bound";
const LINEAR_STRUCTURE: &str = "linear-bound-structure";

fn diamond_saturated(f: &Family) -> Result<Option<String>> {
    let d = PatternPoset::diamond();
    Ok(match saturation_verdict(f, &d)? {
        SaturationVerdict::Saturated => None,
        SaturationVerdict::ContainsCopy(_) => Some("family contains a diamond".into()),
        SaturationVerdict::NotSaturated(s) => {
            Some(format!("family is not diamond-saturated: {s} can be added"))
        }
    })
}

/// Reason the standing assumptions (diamond-saturated, `∅, [n] ∉ f`) fail.
fn standing(f: &Family) -> Result<Option<String>> {
    if let Some(r) = diamond_saturated(f)? {
        return Ok(Some(r));
    }
    if f.contains(SetWord::EMPTY) {
        return Ok(Some("family contains the empty set".into()));
    }
    if f.contains(f.ground()) {
        return Ok(Some("family contains the full ground set".into()));
    }
    Ok(None)
}

/// A saturated family containing `∅` or `[n]` has at least `n + 1` members.
pub fn check_extreme_set_size(f: &Family) -> Result<LemmaReport> {
    if let Some(r) = diamond_saturated(f)? {
        return Ok(LemmaReport::precondition(EXTREME_SIZE, r));
    }
    let n = f.ground_size();
    if !f.contains(SetWord::EMPTY) && !f.contains(f.ground()) {
        return Ok(LemmaReport::vacuous(
            EXTREME_SIZE,
            "neither the empty set nor [n] is a member",
        ));
    }
    Ok(if f.len() > n {
        LemmaReport::pass(EXTREME_SIZE).note(format!("|F|={} n+1={}", f.len(), n + 1))
    } else {
        LemmaReport::fail(
            EXTREME_SIZE,
            Countermodel::new(format!("|F|={} < n+1={}", f.len(), n + 1)).in_family(f),
        )
    })
}

pub fn check_free_tops_and_maxima(f: &Family) -> Result<LemmaReport> {
    match standing(f)? {
        Some(r) => Ok(LemmaReport::precondition(TOPS_MAXIMA, r)),
        None => free_tops_and_maxima_with(f, &derive(f)?),
    }
}

/// Free tops and maxima are disjoint and together form a saturated family
/// for the two-element chain.
pub fn free_tops_and_maxima_with(f: &Family, d: &DerivedStructures) -> Result<LemmaReport> {
    if let Some(s) = d.free_tops.iter().find(|&s| d.maxima.contains(s)) {
        return Ok(LemmaReport::fail(
            TOPS_MAXIMA,
            Countermodel::new("a set is both a free top and a maximum")
                .in_family(f)
                .with_sets([s]),
        ));
    }
    let joined = d.free_tops.union(&d.maxima);
    Ok(match saturation_verdict(&joined, &PatternPoset::c2())? {
        SaturationVerdict::Saturated => LemmaReport::pass(TOPS_MAXIMA).note(format!(
            "|free tops|={} |maxima|={}",
            d.free_tops.len(),
            d.maxima.len()
        )),
        SaturationVerdict::ContainsCopy(e) => LemmaReport::fail(
            TOPS_MAXIMA,
            Countermodel::new("free tops and maxima contain a comparable pair")
                .in_family(f)
                .with_sets(e.image()),
        ),
        SaturationVerdict::NotSaturated(s) => LemmaReport::fail(
            TOPS_MAXIMA,
            Countermodel::new("a set is incomparable to every free top and maximum")
                .in_family(f)
                .with_sets([s]),
        ),
    })
}

pub fn check_size_bounds(f: &Family) -> Result<LemmaReport> {
    match standing(f)? {
        Some(r) => Ok(LemmaReport::precondition(SIZE_BOUNDS, r)),
        None => Ok(size_bounds_with(f, &derive(f)?)),
    }
}

/// Every maximum has at least `n - |F|` elements and every free top at
/// most `|F|`.
pub fn size_bounds_with(f: &Family, d: &DerivedStructures) -> LemmaReport {
    let n = f.ground_size();
    let size = f.len();
    if let Some(b) = d.maxima.iter().find(|b| b.len() + size < n) {
        return LemmaReport::fail(
            SIZE_BOUNDS,
            Countermodel::new(format!(
                "maximum of size {} < n-|F|={}",
                b.len(),
                n.saturating_sub(size)
            ))
            .in_family(f)
            .with_sets([b]),
        );
    }
    if let Some(a) = d.free_tops.iter().find(|a| a.len() > size) {
        return LemmaReport::fail(
            SIZE_BOUNDS,
            Countermodel::new(format!("free top of size {} > |F|={size}", a.len()))
                .in_family(f)
                .with_sets([a]),
        );
    }
    let report = LemmaReport::pass(SIZE_BOUNDS);
    if d.free_tops.is_empty() {
        report.note("free-top bound vacuous: no free tops")
    } else {
        report
    }
}

pub fn check_coordinate_cover(f: &Family) -> Result<LemmaReport> {
    match standing(f)? {
        Some(r) => Ok(LemmaReport::precondition(COORDINATE_COVER, r)),
        None => Ok(coordinate_cover_with(f, &derive(f)?)),
    }
}

/// Every `i` is either added along an edge `W \ {i} ⊊ W` inside `F`, or
/// missing from some maximum.
pub fn coordinate_cover_with(f: &Family, d: &DerivedStructures) -> LemmaReport {
    for i in f.ground().elements() {
        let edge = f.iter().any(|w| w.contains(i) && f.contains(w.without(i)));
        let missed = d.maxima.iter().any(|b| !b.contains(i));
        if !edge && !missed {
            return LemmaReport::fail(
                COORDINATE_COVER,
                Countermodel::new(format!(
                    "element {} lies in every maximum and on no edge of F",
                    i + 1
                ))
                .in_family(f)
                .at_element(i),
            );
        }
    }
    LemmaReport::pass(COORDINATE_COVER)
}

pub fn check_coordinate_counts(f: &Family) -> Result<LemmaReport> {
    match standing(f)? {
        Some(r) => Ok(LemmaReport::precondition(COORDINATE_COUNTS, r)),
        None => Ok(coordinate_counts_with(f, &derive(f)?)),
    }
}

/// When `|F| < n/2`: at least `n + 1 - |F|` elements are missed by some
/// maximum, and at least `n + 1 - 2|F|` of those lie in some free top.
pub fn coordinate_counts_with(f: &Family, d: &DerivedStructures) -> LemmaReport {
    let n = f.ground_size();
    let size = f.len();
    if 2 * size >= n {
        return LemmaReport::vacuous(COORDINATE_COUNTS, format!("|F|={size} is not below n/2"));
    }
    let missed: Vec<usize> = f
        .ground()
        .elements()
        .filter(|&i| d.maxima.iter().any(|b| !b.contains(i)))
        .collect();
    let in_tops = missed
        .iter()
        .filter(|&&i| d.free_tops.iter().any(|a| a.contains(i)))
        .count();
    let note = format!("missed={} missed-in-free-tops={in_tops}", missed.len());
    if missed.len() + size < n + 1 {
        return LemmaReport::fail(
            COORDINATE_COUNTS,
            Countermodel::new(format!("{note}; need missed >= {}", n + 1 - size)).in_family(f),
        );
    }
    if in_tops + 2 * size < n + 1 {
        return LemmaReport::fail(
            COORDINATE_COUNTS,
            Countermodel::new(format!(
                "{note}; need missed-in-free-tops >= {}",
                n + 1 - 2 * size
            ))
            .in_family(f),
        );
    }
    LemmaReport::pass(COORDINATE_COUNTS).note(note)
}

pub fn check_uncovered_coordinates(f: &Family) -> Result<LemmaReport> {
    match standing(f)? {
        Some(r) => Ok(LemmaReport::precondition(UNCOVERED, r)),
        None => Ok(uncovered_coordinates_with(f, &derive(f)?)),
    }
}

/// The elements in no generator are exactly those in no free top, and each
/// free top is the union of two generators.
pub fn uncovered_coordinates_with(f: &Family, d: &DerivedStructures) -> LemmaReport {
    if d.uncovered_by_generators != d.uncovered_by_free_tops {
        return LemmaReport::fail(
            UNCOVERED,
            Countermodel::new(format!(
                "uncovered by generators {} but by free tops {}",
                d.uncovered_by_generators, d.uncovered_by_free_tops
            ))
            .in_family(f)
            .with_sets([d.uncovered_by_generators, d.uncovered_by_free_tops]),
        );
    }
    let gens = d.generators.sets();
    for a in d.free_tops.iter() {
        let split = gens
            .iter()
            .tuple_combinations()
            .any(|(p, q)| p.union(*q) == a);
        if !split {
            return LemmaReport::fail(
                UNCOVERED,
                Countermodel::new("free top is not a union of two generators")
                    .in_family(f)
                    .with_sets([a]),
            );
        }
    }
    LemmaReport::pass(UNCOVERED)
}

/// Reports of the linear lower-bound pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearBoundReports {
    /// `5|F| ≥ n + 1`.
    pub size: LemmaReport,
    /// In the regime `∅, [n] ∉ F` and `|F| ≤ n/4`: the free tops are
    /// recovered as the minimal diamond tops of (generators, trimmed
    /// maxima) over `[n]` minus the uncovered elements, and that pair is
    /// generating with parameter `|F|`.
    pub structure: LemmaReport,
}

pub fn linear_bound_pipeline(f: &Family) -> Result<LinearBoundReports> {
    if let Some(r) = diamond_saturated(f)? {
        return Ok(LinearBoundReports {
            size: LemmaReport::precondition(LINEAR_SIZE, r.clone()),
            structure: LemmaReport::precondition(LINEAR_STRUCTURE, r),
        });
    }
    let in_regime = standing(f)?.is_none() && 4 * f.len() <= f.ground_size();
    let derived = if in_regime { Some(derive(f)?) } else { None };
    linear_bound_with(f, derived.as_ref())
}

/// The pipeline on precomputed structures; `None` marks the structural
/// regime as not applying.
pub fn linear_bound_with(f: &Family, d: Option<&DerivedStructures>) -> Result<LinearBoundReports> {
    let n = f.ground_size();
    let size = if 5 * f.len() > n {
        LemmaReport::pass(LINEAR_SIZE).note(format!("5|F|={} n+1={}", 5 * f.len(), n + 1))
    } else {
        LemmaReport::fail(
            LINEAR_SIZE,
            Countermodel::new(format!("5|F|={} < n+1={}", 5 * f.len(), n + 1)).in_family(f),
        )
    };
    let structure = match d {
        None => LemmaReport::vacuous(
            LINEAR_STRUCTURE,
            "outside the regime: empty set or [n] present, or |F| > n/4",
        ),
        Some(d) => linear_structure(f, d)?,
    };
    Ok(LinearBoundReports { size, structure })
}

fn linear_structure(f: &Family, d: &DerivedStructures) -> Result<LemmaReport> {
    let n = f.ground_size();
    let m = f.len();
    let fail = |detail: String| {
        LemmaReport::fail(LINEAR_STRUCTURE, Countermodel::new(detail).in_family(f))
    };
    let uncovered = d.uncovered_by_generators;
    let rest = SetWord::full(n).difference(uncovered);
    if rest.len() < 2 * m + 1 {
        return Ok(fail(format!(
            "remaining ground set has {} elements, fewer than 2|F|+1={}",
            rest.len(),
            2 * m + 1
        )));
    }
    let trimmed = Family::new(n, d.maxima.iter().map(|b| b.difference(uncovered)))?;
    let ps = PairSystem::new(GroundSet::new(n, rest)?, m, d.generators.clone(), trimmed)?;
    let tops = minimal_diamond_tops(&ps)?;
    if tops != d.free_tops {
        return Ok(LemmaReport::fail(
            LINEAR_STRUCTURE,
            Countermodel::new(format!(
                "minimal tops of the trimmed pair {:?} differ from the free tops {:?}",
                tops.sets(),
                d.free_tops.sets()
            ))
            .in_family(f)
            .with_sets(tops.iter().chain(d.free_tops.iter())),
        ));
    }
    Ok(match generated_membership(&ps)? {
        Membership::InClass => LemmaReport::pass(LINEAR_STRUCTURE).note(format!(
            "|generators|={} |trimmed maxima|={}",
            ps.generators().len(),
            ps.blockers().len()
        )),
        other => fail(format!(
            "trimmed pair is not generating: {}",
            other.describe()
        )),
    })
}

/// Every check on one family, in a fixed order. The structures are derived
/// once when the standing assumptions hold.
pub fn run_suite(f: &Family) -> Result<Vec<LemmaReport>> {
    let mut out = vec![check_extreme_set_size(f)?];
    let d = match standing(f)? {
        None => {
            let d = derive(f)?;
            out.push(free_tops_and_maxima_with(f, &d)?);
            out.push(size_bounds_with(f, &d));
            out.push(coordinate_cover_with(f, &d));
            out.push(coordinate_counts_with(f, &d));
            out.push(uncovered_coordinates_with(f, &d));
            Some(d)
        }
        Some(r) => {
            for id in [
                TOPS_MAXIMA,
                SIZE_BOUNDS,
                COORDINATE_COVER,
                COORDINATE_COUNTS,
                UNCOVERED,
            ] {
                out.push(LemmaReport::precondition(id, r.clone()));
            }
            None
        }
    };
    let linear = if diamond_saturated(f)?.is_some() {
        linear_bound_pipeline(f)?
    } else {
        let regime = d.as_ref().filter(|_| 4 * f.len() <= f.ground_size());
        linear_bound_with(f, regime)?
    };
    out.push(linear.size);
    out.push(linear.structure);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::CheckStatus;
    use crate::saturation::chain_family;
    use crate::search::{enumerate_min_saturated, SearchConfig};

    fn fam(n: usize, sets: &[&[usize]]) -> Family {
        Family::from_labels(n, sets).unwrap()
    }

    fn w(labels: &[usize]) -> SetWord {
        SetWord::from_labels(labels.iter().copied())
    }

    #[test]
    fn derive_examples() {
        let d = derive(&fam(2, &[&[1], &[2], &[1, 2]])).unwrap();
        assert_eq!(d.maxima, fam(2, &[&[1, 2]]));
        assert!(d.tops.is_empty() && d.free_tops.is_empty() && d.generators.is_empty());
        assert_eq!(d.uncovered_by_generators, SetWord::full(2));
        assert_eq!(d.uncovered_by_free_tops, SetWord::full(2));

        let f = fam(3, &[&[3], &[1, 3], &[2, 3]]);
        let d = derive(&f).unwrap();
        assert_eq!(d.tops, fam(3, &[&[1, 2, 3]]));
        assert_eq!(d.minimal_tops, fam(3, &[&[1, 2, 3]]));
        assert_eq!(d.maxima, fam(3, &[&[1, 3], &[2, 3]]));
        assert!(d.free_tops.is_empty());
        assert_eq!(
            d.top_witnesses,
            vec![VShape {
                bottom: w(&[3]),
                left: w(&[1, 3]),
                right: w(&[2, 3])
            }]
        );

        let d = derive(&chain_family(3).unwrap()).unwrap();
        assert!(d.tops.is_empty() && d.free_tops.is_empty() && d.generators.is_empty());
        assert_eq!(d.uncovered_by_generators, SetWord::full(3));
    }

    #[test]
    fn generators_include_the_bottoms() {
        let f = fam(4, &[&[], &[1], &[2], &[1, 3], &[2, 4]]);
        let d = derive(&f).unwrap();
        assert_eq!(d.maxima, fam(4, &[&[1, 3], &[2, 4]]));
        assert_eq!(d.minimal_tops, fam(4, &[&[1, 2]]));
        assert_eq!(d.free_tops, fam(4, &[&[1, 2]]));
        assert_eq!(d.generators, fam(4, &[&[], &[1], &[2]]));
        assert_eq!(
            d.generators_of,
            vec![(w(&[1, 2]), fam(4, &[&[], &[1], &[2]]))]
        );
        assert_eq!(d.uncovered_by_generators, w(&[3, 4]));
        assert_eq!(d.uncovered_by_free_tops, w(&[3, 4]));
    }

    #[test]
    fn extreme_size_examples() {
        let r = check_extreme_set_size(&chain_family(4).unwrap()).unwrap();
        assert!(r.is_pass());
        let r = check_extreme_set_size(&fam(2, &[&[1], &[2], &[1, 2]])).unwrap();
        assert!(r.is_pass());
        let r = check_extreme_set_size(&fam(2, &[&[1]])).unwrap();
        assert!(matches!(r.status, CheckStatus::PreconditionFailed(_)));
    }

    #[test]
    fn standing_assumptions_gate_the_checks() {
        let r = check_free_tops_and_maxima(&chain_family(3).unwrap()).unwrap();
        assert!(matches!(r.status, CheckStatus::PreconditionFailed(_)));
        // {1},{2} is diamond-free but {1,2} can still be added.
        let r = check_size_bounds(&fam(3, &[&[1], &[2]])).unwrap();
        assert!(matches!(r.status, CheckStatus::PreconditionFailed(_)));
    }

    fn doctored(f: &Family) -> DerivedStructures {
        derive(f).unwrap()
    }

    #[test]
    fn size_bounds_report_doctored_maxima() {
        let f = fam(4, &[&[1], &[2]]);
        let mut d = doctored(&f);
        d.maxima = fam(4, &[&[1]]);
        let r = size_bounds_with(&f, &d);
        assert!(r.is_fail());
        let mut d = doctored(&f);
        d.maxima = Family::empty(4).unwrap();
        d.free_tops = fam(4, &[&[1, 2, 3]]);
        assert!(size_bounds_with(&f, &d).is_fail());
        d.free_tops = Family::empty(4).unwrap();
        let r = size_bounds_with(&f, &d);
        assert!(r.is_pass());
        assert!(r.notes.iter().any(|n| n.contains("vacuous")));
    }

    #[test]
    fn coordinate_cover_mechanics() {
        let f = fam(3, &[&[1], &[1, 2]]);
        let mut d = doctored(&f);
        d.maxima = fam(3, &[&[1, 2, 3]]);
        // Element 1 is on no edge of F and lies in the only maximum.
        let r = coordinate_cover_with(&f, &d);
        match r.status {
            CheckStatus::Fail(c) => assert_eq!(c.element, Some(0)),
            other => panic!("{other:?}"),
        }
        let f = fam(3, &[&[], &[1], &[1, 2], &[1, 2, 3]]);
        let mut d = doctored(&f);
        d.maxima = fam(3, &[&[1, 2, 3]]);
        assert!(coordinate_cover_with(&f, &d).is_pass());
    }

    #[test]
    fn coordinate_counts_mechanics() {
        let f = fam(6, &[&[1], &[2]]);
        let mut d = doctored(&f);
        d.maxima = fam(6, &[&[1, 2, 3, 4, 5]]);
        assert!(coordinate_counts_with(&f, &d).is_fail());
        d.maxima = fam(6, &[&[1], &[2, 3, 4, 5, 6]]);
        d.free_tops = Family::empty(6).unwrap();
        assert!(coordinate_counts_with(&f, &d).is_fail());
        d.free_tops = fam(6, &[&[1, 2, 3, 4, 5, 6]]);
        assert!(coordinate_counts_with(&f, &d).is_pass());
        let big = fam(4, &[&[1], &[2]]);
        assert!(matches!(
            coordinate_counts_with(&big, &doctored(&big)).status,
            CheckStatus::Vacuous(_)
        ));
    }

    #[test]
    fn uncovered_coordinates_mechanics() {
        let f = fam(3, &[&[1], &[2]]);
        let mut d = doctored(&f);
        assert!(uncovered_coordinates_with(&f, &d).is_pass());
        d.uncovered_by_free_tops = w(&[3]);
        assert!(uncovered_coordinates_with(&f, &d).is_fail());
        let mut d = doctored(&f);
        d.free_tops = fam(3, &[&[1, 3]]);
        assert!(uncovered_coordinates_with(&f, &d).is_fail());
    }

    #[test]
    fn linear_pipeline_on_chains() {
        for n in 1..=8 {
            let r = linear_bound_pipeline(&chain_family(n).unwrap()).unwrap();
            assert!(r.size.is_pass());
            assert!(matches!(r.structure.status, CheckStatus::Vacuous(_)));
        }
        let r = linear_bound_pipeline(&fam(2, &[&[1]])).unwrap();
        assert!(matches!(r.size.status, CheckStatus::PreconditionFailed(_)));
    }

    #[test]
    fn linear_size_fails_on_doctored_input() {
        let f = fam(10, &[&[1]]);
        let r = linear_bound_with(&f, None).unwrap();
        assert!(r.size.is_fail());
    }

    #[test]
    fn suite_on_all_minimum_families() {
        let cfg = SearchConfig::default();
        for n in 1..=4 {
            let fams = enumerate_min_saturated(n, &PatternPoset::diamond(), &cfg).unwrap();
            for f in fams {
                let reports = run_suite(&f).unwrap();
                assert_eq!(reports.len(), 8);
                assert!(reports.iter().all(|r| !r.is_fail()), "{f}: {reports:?}");
                let d = derive(&f).unwrap();
                assert!(d.minimal_tops.is_antichain());
                assert!(d
                    .uncovered_by_free_tops
                    .is_subset(d.uncovered_by_generators));
                assert_eq!(run_suite(&f).unwrap(), reports);
            }
        }
    }
}
