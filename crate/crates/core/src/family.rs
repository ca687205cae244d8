//! Subsets of a ground set `[n]` packed into machine words, and duplicate-free
//! families of them.
//!
//! Sets are ordered by cardinality first and numeric value second; every
//! [`Family`] keeps its members in that order so two equal families always
//! have identical member lists and identical serializations.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_GROUND: usize = 63;

/// Default ground size up to which [`Family::canonical_form`] is exact.
pub const CANONICAL_LIMIT: usize = 12;

/// A subset of `[n]`; bit `i` stands for element `i + 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SetWord(pub u64);

impl SetWord {
    pub const EMPTY: SetWord = SetWord(0);

    /// The whole ground set `[n]`.
    pub fn full(n: usize) -> SetWord {
        debug_assert!(n <= MAX_GROUND);
        SetWord((1u64 << n) - 1)
    }

    /// Builds a set from 0-based element indices.
    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> SetWord {
        SetWord(elements.into_iter().fold(0, |acc, i| acc | (1u64 << i)))
    }

    /// Builds a set from 1-based element labels.
    pub fn from_labels<I: IntoIterator<Item = usize>>(labels: I) -> SetWord {
        Self::from_elements(labels.into_iter().map(|l| l - 1))
    }

    pub fn singleton(i: usize) -> SetWord {
        SetWord(1u64 << i)
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    #[inline]
    pub fn is_subset(self, other: SetWord) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_proper_subset(self, other: SetWord) -> bool {
        self.0 != other.0 && self.is_subset(other)
    }

    /// True when one of the two sets strictly contains the other.
    #[inline]
    pub fn strictly_comparable(self, other: SetWord) -> bool {
        self.is_proper_subset(other) || other.is_proper_subset(self)
    }

    #[inline]
    pub fn union(self, other: SetWord) -> SetWord {
        SetWord(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: SetWord) -> SetWord {
        SetWord(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: SetWord) -> SetWord {
        SetWord(self.0 & !other.0)
    }

    #[inline]
    pub fn with(self, i: usize) -> SetWord {
        SetWord(self.0 | 1u64 << i)
    }

    #[inline]
    pub fn without(self, i: usize) -> SetWord {
        SetWord(self.0 & !(1u64 << i))
    }

    /// 0-based member indices in increasing order.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// Relabels elements: element `i` moves to position `perm[i]`.
    pub fn permuted(self, perm: &[usize]) -> SetWord {
        SetWord(self.elements().fold(0, |acc, i| acc | 1u64 << perm[i]))
    }

    /// All subsets of `self`, in increasing numeric order.
    pub fn subsets(self) -> impl Iterator<Item = SetWord> {
        let mask = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask {
                None
            } else {
                Some((cur.wrapping_sub(mask)) & mask)
            };
            Some(SetWord(cur))
        })
    }

    /// Space-separated 1-based labels, `-` for the empty set.
    pub fn to_line(self) -> String {
        if self.is_empty() {
            "-".to_string()
        } else {
            self.elements().map(|i| (i + 1).to_string()).join(" ")
        }
    }
}

impl Ord for SetWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for SetWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SetWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{{}}}",
            self.elements().map(|i| (i + 1).to_string()).join(",")
        )
    }
}

impl fmt::Debug for SetWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn check_ground(n: usize) -> Result<()> {
    if n == 0 || n > MAX_GROUND {
        Err(Error::GroundSize(n))
    } else {
        Ok(())
    }
}

/// All `2^n` subsets of `[n]` in canonical set order.
pub fn all_sets(n: usize) -> Vec<SetWord> {
    let mut sets: Vec<SetWord> = SetWord::full(n).subsets().collect();
    sets.sort_unstable();
    sets
}

/// A duplicate-free family of subsets of `[n]`, kept in canonical set order.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Family {
    n: usize,
    sets: Vec<SetWord>,
}

impl Family {
    /// Builds a family, sorting and dropping duplicate sets.
    pub fn new<I: IntoIterator<Item = SetWord>>(n: usize, sets: I) -> Result<Family> {
        check_ground(n)?;
        let full = SetWord::full(n);
        let mut sets: Vec<SetWord> = sets.into_iter().collect();
        if let Some(bad) = sets.iter().find(|s| !s.is_subset(full)) {
            return Err(Error::SetOutOfRange {
                set: bad.to_string(),
                ground: full.to_string(),
            });
        }
        sets.sort_unstable();
        sets.dedup();
        Ok(Family { n, sets })
    }

    pub fn empty(n: usize) -> Result<Family> {
        Family::new(n, [])
    }

    /// Internal constructor for member lists already known to be in range.
    pub(crate) fn from_unsorted(n: usize, mut sets: Vec<SetWord>) -> Family {
        sets.sort_unstable();
        sets.dedup();
        Family { n, sets }
    }

    /// Convenience for tests and examples: 1-based label lists.
    pub fn from_labels(n: usize, sets: &[&[usize]]) -> Result<Family> {
        Family::new(
            n,
            sets.iter().map(|s| SetWord::from_labels(s.iter().copied())),
        )
    }

    pub fn power_set(n: usize) -> Result<Family> {
        check_ground(n)?;
        Ok(Family {
            n,
            sets: all_sets(n),
        })
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn ground(&self) -> SetWord {
        SetWord::full(self.n)
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[SetWord] {
        &self.sets
    }

    pub fn iter(&self) -> impl Iterator<Item = SetWord> + '_ {
        self.sets.iter().copied()
    }

    pub fn contains(&self, s: SetWord) -> bool {
        self.sets.binary_search(&s).is_ok()
    }

    /// `self ∪ {s}`.
    pub fn with(&self, s: SetWord) -> Family {
        let mut sets = self.sets.clone();
        if let Err(pos) = sets.binary_search(&s) {
            sets.insert(pos, s);
        }
        Family { n: self.n, sets }
    }

    pub fn without(&self, s: SetWord) -> Family {
        Family {
            n: self.n,
            sets: self.sets.iter().copied().filter(|&t| t != s).collect(),
        }
    }

    pub fn union(&self, other: &Family) -> Family {
        Family::from_unsorted(self.n, self.iter().chain(other.iter()).collect())
    }

    pub fn intersection(&self, other: &Family) -> Family {
        Family {
            n: self.n,
            sets: self.iter().filter(|&s| other.contains(s)).collect(),
        }
    }

    /// Union of all members.
    pub fn union_of_members(&self) -> SetWord {
        self.iter().fold(SetWord::EMPTY, SetWord::union)
    }

    /// Sets of `[n]` absent from the family, in canonical order.
    pub fn missing_sets(&self) -> Vec<SetWord> {
        all_sets(self.n)
            .into_iter()
            .filter(|&s| !self.contains(s))
            .collect()
    }

    pub fn is_antichain(&self) -> bool {
        self.sets
            .iter()
            .tuple_combinations()
            .all(|(a, b)| !a.strictly_comparable(*b))
    }

    /// True when the members are pairwise comparable.
    pub fn is_chain(&self) -> bool {
        self.sets
            .iter()
            .tuple_combinations()
            .all(|(a, b)| a.is_subset(*b) || b.is_subset(*a))
    }

    /// Members not strictly contained in another member.
    pub fn maximal_sets(&self) -> Family {
        let sets = self
            .iter()
            .filter(|&s| !self.iter().any(|t| s.is_proper_subset(t)))
            .collect();
        Family { n: self.n, sets }
    }

    /// Members not strictly containing another member.
    pub fn minimal_sets(&self) -> Family {
        let sets = self
            .iter()
            .filter(|&s| !self.iter().any(|t| t.is_proper_subset(s)))
            .collect();
        Family { n: self.n, sets }
    }

    /// Relabels the ground set: element `i` moves to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Family {
        debug_assert_eq!(perm.len(), self.n);
        Family::from_unsorted(self.n, self.iter().map(|s| s.permuted(perm)).collect())
    }

    /// Orbit representative under relabelings of `[n]`, exact up to
    /// [`CANONICAL_LIMIT`].
    pub fn canonical_form(&self) -> Family {
        self.canonical_form_with_limit(CANONICAL_LIMIT).family
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical_form() == *self
    }

    pub fn canonical_form_with_limit(&self, limit: usize) -> Canonical {
        canonicalize(self, limit)
    }

    /// Serializes in the family text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for s in &self.sets {
            out.push_str(&s.to_line());
            out.push('\n');
        }
        out
    }

    /// Parses the family text format: an `n=<N>` header, then one set per
    /// line as increasing 1-based labels, `-` for the empty set. Blank lines
    /// and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Family> {
        parse_family_lines(text.lines().enumerate().map(|(i, l)| (i + 1, l)), None)
    }
}

pub(crate) fn parse_header_n(line_no: usize, line: &str) -> Result<usize> {
    let rest = line.strip_prefix("n=").ok_or_else(|| Error::Parse {
        line: line_no,
        message: format!("expected `n=<N>` header, found `{line}`"),
    })?;
    let n: usize = rest.trim().parse().map_err(|_| Error::Parse {
        line: line_no,
        message: format!("bad ground size `{rest}`"),
    })?;
    if n == 0 || n > MAX_GROUND {
        return Err(Error::Parse {
            line: line_no,
            message: format!("ground size {n} outside 1..={MAX_GROUND}"),
        });
    }
    Ok(n)
}

pub(crate) fn parse_set_line(line_no: usize, line: &str, n: usize) -> Result<SetWord> {
    if line == "-" {
        return Ok(SetWord::EMPTY);
    }
    let mut set = SetWord::EMPTY;
    let mut last = 0usize;
    for tok in line.split_whitespace() {
        let label: usize = tok.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("bad element `{tok}`"),
        })?;
        if label == 0 || label > n {
            return Err(Error::Parse {
                line: line_no,
                message: format!("element {label} outside 1..={n}"),
            });
        }
        if label <= last {
            return Err(Error::Parse {
                line: line_no,
                message: "elements must be strictly increasing".into(),
            });
        }
        last = label;
        set = set.with(label - 1);
    }
    Ok(set)
}

/// Shared by the family and pair-system parsers. `n` is `Some` when the header
/// was already consumed by the caller.
pub(crate) fn parse_family_lines<'a, I>(lines: I, n: Option<usize>) -> Result<Family>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let mut n = n;
    let mut sets = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut last_line = 0;
    for (line_no, raw) in lines {
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match n {
            None => n = Some(parse_header_n(line_no, line)?),
            Some(n) => {
                let set = parse_set_line(line_no, line, n)?;
                if !seen.insert(set) {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("duplicate set {set}"),
                    });
                }
                sets.push(set);
            }
        }
    }
    let n = n.ok_or(Error::Parse {
        line: last_line.max(1),
        message: "missing `n=<N>` header".into(),
    })?;
    Ok(Family::from_unsorted(n, sets))
}

impl Ord for Family {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.sets.cmp(&other.sets))
    }
}

impl PartialOrd for Family {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self.sets.iter().map(|s| s.to_string()).join(", ");
        write!(f, "{{{body}}} over [{}]", self.n)
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Result of canonicalization; `exact` is false when the ground set was above
/// the limit and only the refinement heuristic was applied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    pub family: Family,
    pub exact: bool,
}

/// Colour refinement of the ground elements. Colours are ranks of
/// label-free signatures, so relabeling the family relabels the colouring.
/// Elements lying in more sets get smaller colours.
fn refine_colours(n: usize, sets: &[SetWord]) -> Vec<u32> {
    let mut memberships: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, s) in sets.iter().enumerate() {
        for i in s.elements() {
            memberships[i].push(k);
        }
    }
    let initial: Vec<(usize, Vec<usize>)> = (0..n)
        .map(|i| {
            let mut cards: Vec<usize> = memberships[i].iter().map(|&k| sets[k].len()).collect();
            cards.sort_unstable();
            (usize::MAX - memberships[i].len(), cards)
        })
        .collect();
    let mut colours = rank(&initial);
    let mut classes = count_distinct(&colours);
    loop {
        let set_colours: Vec<Vec<u32>> = sets
            .iter()
            .map(|s| {
                let mut c: Vec<u32> = s.elements().map(|i| colours[i]).collect();
                c.sort_unstable();
                c
            })
            .collect();
        let sigs: Vec<(u32, Vec<&Vec<u32>>)> = (0..n)
            .map(|i| {
                let mut c: Vec<&Vec<u32>> =
                    memberships[i].iter().map(|&k| &set_colours[k]).collect();
                c.sort_unstable();
                (colours[i], c)
            })
            .collect();
        let next = rank(&sigs);
        let next_classes = count_distinct(&next);
        colours = next;
        if next_classes == classes {
            return colours;
        }
        classes = next_classes;
    }
}

fn rank<T: Ord>(sigs: &[T]) -> Vec<u32> {
    let mut order: Vec<&T> = sigs.iter().collect();
    order.sort_unstable();
    order.dedup();
    sigs.iter()
        .map(|s| order.binary_search(&s).expect("signature present") as u32)
        .collect()
}

fn count_distinct(colours: &[u32]) -> usize {
    colours.iter().copied().max().map_or(0, |m| m as usize + 1)
}

fn canonicalize(family: &Family, limit: usize) -> Canonical {
    let n = family.n;
    let colours = refine_colours(n, &family.sets);

    // Twins (identical membership columns) are interchangeable, so only the
    // order of twin classes inside each colour cell matters.
    let mut columns: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
    let words = family.sets.len().div_ceil(64).max(1);
    for i in 0..n {
        let mut col = vec![0u64; words];
        for (k, s) in family.sets.iter().enumerate() {
            if s.contains(i) {
                col[k / 64] |= 1 << (k % 64);
            }
        }
        columns.entry(col).or_default().push(i);
    }
    let mut cells: Vec<Vec<Vec<usize>>> = vec![Vec::new(); count_distinct(&colours)];
    let mut twins: Vec<Vec<usize>> = columns.into_values().collect();
    twins.sort_unstable();
    for class in twins {
        cells[colours[class[0]] as usize].push(class);
    }

    let image = |arrangement: &[&Vec<usize>]| -> Vec<SetWord> {
        let mut perm = vec![0usize; n];
        let mut pos = 0;
        for class in arrangement {
            for &i in class.iter() {
                perm[i] = pos;
                pos += 1;
            }
        }
        let mut img: Vec<SetWord> = family.sets.iter().map(|s| s.permuted(&perm)).collect();
        img.sort_unstable();
        img
    };

    if n > limit {
        let flat: Vec<&Vec<usize>> = cells.iter().flatten().collect();
        return Canonical {
            family: Family {
                n,
                sets: image(&flat),
            },
            exact: false,
        };
    }

    let per_cell: Vec<Vec<Vec<&Vec<usize>>>> = cells
        .iter()
        .map(|cell| cell.iter().permutations(cell.len()).collect())
        .collect();
    let mut best: Option<Vec<SetWord>> = None;
    for combo in per_cell.iter().multi_cartesian_product() {
        let arrangement: Vec<&Vec<usize>> = combo.into_iter().flatten().copied().collect();
        let img = image(&arrangement);
        if best.as_ref().is_none_or(|b| img < *b) {
            best = Some(img);
        }
    }
    // n >= 1, so there is at least one cell and one arrangement.
    let sets = best.expect("at least one arrangement");
    Canonical {
        family: Family { n, sets },
        exact: true,
    }
}
