//! Induced copies of a pattern inside a family ordered by inclusion.

use crate::error::{Error, Result};
use crate::family::{Family, SetWord};
use crate::poset::PatternPoset;

/// Images of the pattern elements, indexed by pattern element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub assignment: Vec<SetWord>,
}

impl Embedding {
    /// Injective, and `a < b` exactly when `image(a) ⊊ image(b)`.
    pub fn is_valid(&self, pattern: &PatternPoset) -> bool {
        let img = &self.assignment;
        if img.len() != pattern.size() {
            return false;
        }
        (0..img.len()).all(|a| {
            (0..img.len()).all(|b| {
                a == b || (img[a] != img[b] && pattern.lt(a, b) == img[a].is_proper_subset(img[b]))
            })
        })
    }

    pub fn image(&self) -> impl Iterator<Item = SetWord> + '_ {
        self.assignment.iter().copied()
    }
}

/// A pattern preprocessed for repeated searches: a static placement order
/// and per-element cardinality bounds from the longest chains through it.
#[derive(Clone, Debug)]
pub struct Matcher {
    pattern: PatternPoset,
    depth: Vec<usize>,
    height: Vec<usize>,
    /// Placement orders; `orders[p]` starts with element `p` (for pinning),
    /// `orders[size]` is the unpinned order.
    orders: Vec<Vec<usize>>,
}

impl Matcher {
    pub fn new(pattern: &PatternPoset) -> Matcher {
        let k = pattern.size();
        let degree: Vec<usize> = (0..k)
            .map(|a| (0..k).filter(|&b| pattern.comparable(a, b)).count())
            .collect();
        let order_from = |start: Option<usize>| -> Vec<usize> {
            let mut placed: Vec<usize> = Vec::with_capacity(k);
            let mut left: Vec<usize> = (0..k).collect();
            if let Some(s) = start {
                placed.push(s);
                left.retain(|&a| a != s);
            }
            while !left.is_empty() {
                // Most comparabilities to placed elements, then most overall.
                let (pos, _) = left
                    .iter()
                    .enumerate()
                    .max_by_key(|&(_, &a)| {
                        let linked = placed.iter().filter(|&&b| pattern.comparable(a, b)).count();
                        (linked, degree[a], std::cmp::Reverse(a))
                    })
                    .expect("nonempty");
                placed.push(left.remove(pos));
            }
            placed
        };
        let mut orders: Vec<Vec<usize>> = (0..k).map(|p| order_from(Some(p))).collect();
        orders.push(order_from(None));
        Matcher {
            pattern: pattern.clone(),
            depth: pattern.depth(),
            height: pattern.height(),
            orders,
        }
    }

    pub fn pattern(&self) -> &PatternPoset {
        &self.pattern
    }

    /// Searches `sets` (distinct subsets of `[n]`) for an induced copy.
    pub fn find(&self, n: usize, sets: &[SetWord]) -> Option<Embedding> {
        let order = &self.orders[self.pattern.size()];
        self.search(n, sets, order, None)
    }

    /// Searches `sets ∪ {extra}` for a copy using `extra`; `extra` must not
    /// be in `sets`. Pattern elements are tried as the image of `extra` in
    /// index order.
    pub fn find_through(&self, n: usize, sets: &[SetWord], extra: SetWord) -> Option<Embedding> {
        (0..self.pattern.size())
            .find_map(|p| self.search(n, sets, &self.orders[p], Some((p, extra))))
    }

    fn search(
        &self,
        n: usize,
        sets: &[SetWord],
        order: &[usize],
        pinned: Option<(usize, SetWord)>,
    ) -> Option<Embedding> {
        let k = self.pattern.size();
        let available = sets.len() + usize::from(pinned.is_some());
        if available < k {
            return None;
        }
        let mut img = vec![SetWord::EMPTY; k];
        let mut used = vec![false; sets.len()];
        let start = match pinned {
            Some((p, s)) => {
                if !self.fits_bounds(n, p, s) {
                    return None;
                }
                img[p] = s;
                1
            }
            None => 0,
        };
        if self.extend(n, sets, order, start, &mut img, &mut used) {
            Some(Embedding { assignment: img })
        } else {
            None
        }
    }

    #[inline]
    fn fits_bounds(&self, n: usize, a: usize, s: SetWord) -> bool {
        let c = s.len();
        c >= self.depth[a] && c + self.height[a] <= n
    }

    fn extend(
        &self,
        n: usize,
        sets: &[SetWord],
        order: &[usize],
        step: usize,
        img: &mut [SetWord],
        used: &mut [bool],
    ) -> bool {
        if step == order.len() {
            return true;
        }
        let a = order[step];
        let placed = &order[..step];
        for (idx, &s) in sets.iter().enumerate() {
            if used[idx] || !self.fits_bounds(n, a, s) {
                continue;
            }
            let ok = placed.iter().all(|&b| {
                let t = img[b];
                s != t
                    && self.pattern.lt(a, b) == s.is_proper_subset(t)
                    && self.pattern.lt(b, a) == t.is_proper_subset(s)
            });
            if !ok {
                continue;
            }
            img[a] = s;
            used[idx] = true;
            if self.extend(n, sets, order, step + 1, img, used) {
                return true;
            }
            used[idx] = false;
        }
        false
    }
}

/// Some induced copy of `pattern` in `host`, first in the backtracker's order.
pub fn find_induced_copy(host: &Family, pattern: &PatternPoset) -> Option<Embedding> {
    Matcher::new(pattern).find(host.ground_size(), host.sets())
}

/// An induced copy in `host ∪ {s}` whose image contains `s`.
pub fn completes_copy(
    host: &Family,
    s: SetWord,
    pattern: &PatternPoset,
) -> Result<Option<Embedding>> {
    if host.contains(s) {
        return Err(Error::Precondition(format!("{s} is already in the family")));
    }
    if !s.is_subset(host.ground()) {
        return Err(Error::SetOutOfRange {
            set: s.to_string(),
            ground: host.ground().to_string(),
        });
    }
    Ok(Matcher::new(pattern).find_through(host.ground_size(), host.sets(), s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::Builtin;
    use itertools::Itertools;

    fn fam(n: usize, sets: &[&[usize]]) -> Family {
        Family::from_labels(n, sets).unwrap()
    }

    /// Tries every injection of pattern elements into host sets.
    fn brute_force_copy(host: &Family, pattern: &PatternPoset) -> bool {
        host.sets().iter().permutations(pattern.size()).any(|img| {
            Embedding {
                assignment: img.into_iter().copied().collect(),
            }
            .is_valid(pattern)
        })
    }

    #[test]
    fn find_copy_examples() {
        let d = PatternPoset::diamond();
        let p2 = Family::power_set(2).unwrap();
        let e = find_induced_copy(&p2, &d).expect("P([2]) is a diamond");
        assert!(e.is_valid(&d));
        assert_eq!(e.assignment[0], SetWord::EMPTY);
        assert_eq!(e.assignment[3], SetWord::full(2));

        assert!(find_induced_copy(&fam(2, &[&[], &[1], &[1, 2]]), &d).is_none());

        let host = fam(3, &[&[3], &[1, 3], &[2, 3], &[1, 2, 3]]);
        assert!(brute_force_copy(&host, &d));
        assert!(find_induced_copy(&host, &d).unwrap().is_valid(&d));
    }

    #[test]
    fn completes_copy_examples() {
        let d = PatternPoset::diamond();
        let host = fam(2, &[&[1], &[2], &[1, 2]]);
        let e = completes_copy(&host, SetWord::EMPTY, &d).unwrap().unwrap();
        assert_eq!(e.assignment[0], SetWord::EMPTY);
        assert!(e.is_valid(&d));

        assert!(
            completes_copy(&fam(2, &[&[1]]), SetWord::from_labels([2]), &d)
                .unwrap()
                .is_none()
        );

        let host = fam(3, &[&[3], &[1, 3], &[2, 3]]);
        let top = SetWord::full(3);
        let e = completes_copy(&host, top, &d).unwrap().unwrap();
        assert_eq!(e.assignment[3], top);

        assert!(matches!(
            completes_copy(&host, SetWord::from_labels([3]), &d),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn incomparability_is_enforced() {
        // A 3-chain contains a V only as a non-induced copy.
        let chain = fam(3, &[&[1], &[1, 2], &[1, 2, 3]]);
        let v = PatternPoset::builtin(Builtin::V).unwrap();
        assert!(find_induced_copy(&chain, &v).is_none());
        let c3 = PatternPoset::builtin(Builtin::Chain(3)).unwrap();
        assert!(find_induced_copy(&chain, &c3).is_some());
        let a2 = PatternPoset::builtin(Builtin::Antichain(2)).unwrap();
        assert!(find_induced_copy(&chain, &a2).is_none());
    }

    #[test]
    fn agrees_with_brute_force_exhaustively_at_n2() {
        let patterns: Vec<PatternPoset> = [
            Builtin::Point,
            Builtin::Diamond,
            Builtin::C2,
            Builtin::V,
            Builtin::Lambda,
            Builtin::Butterfly,
            Builtin::Chain(3),
            Builtin::Antichain(2),
        ]
        .into_iter()
        .map(|b| PatternPoset::builtin(b).unwrap())
        .collect();
        for bits in 0u32..16 {
            let sets = (0..4u64).filter(|i| bits >> i & 1 == 1).map(SetWord);
            let host = Family::new(2, sets).unwrap();
            for p in &patterns {
                let found = find_induced_copy(&host, p);
                assert_eq!(found.is_some(), brute_force_copy(&host, p), "{host} {p}");
                if let Some(e) = found {
                    assert!(e.is_valid(p));
                    assert!(e.image().all(|s| host.contains(s)));
                }
            }
        }
    }

    #[test]
    fn presence_is_monotone_under_adding_sets() {
        let d = PatternPoset::diamond();
        let host = fam(3, &[&[3], &[1, 3], &[2, 3], &[1, 2, 3]]);
        for s in crate::family::all_sets(3) {
            assert!(find_induced_copy(&host.with(s), &d).is_some());
        }
    }
}
