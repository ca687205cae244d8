//! Reference implementations written from the definitions only, with no
//! pruning and no shared code beyond the set and poset types.
#![allow(dead_code)]

use posat::{PatternPoset, SetWord};

/// Whether some injective assignment of pattern elements to `sets` maps the
/// strict order exactly onto strict inclusion.
pub fn has_induced_copy(sets: &[SetWord], pattern: &PatternPoset) -> bool {
    let k = pattern.size();
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    injections(sets.len(), k, &mut chosen, &mut |idx| {
        (0..k).all(|a| {
            (0..k)
                .all(|b| a == b || pattern.lt(a, b) == is_strict_subset(sets[idx[a]], sets[idx[b]]))
        })
    })
}

fn is_strict_subset(a: SetWord, b: SetWord) -> bool {
    a.0 & !b.0 == 0 && a.0 != b.0
}

fn injections(
    m: usize,
    k: usize,
    chosen: &mut Vec<usize>,
    test: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if chosen.len() == k {
        return test(chosen);
    }
    for i in 0..m {
        if chosen.contains(&i) {
            continue;
        }
        chosen.push(i);
        if injections(m, k, chosen, test) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// The family of sets whose bits are set in `mask`, `2^n` candidates.
fn family_of_mask(n: usize, mask: u64) -> Vec<SetWord> {
    (0..1u64 << n)
        .filter(|s| mask >> s & 1 == 1)
        .map(SetWord)
        .collect()
}

pub fn is_saturated(n: usize, sets: &[SetWord], pattern: &PatternPoset) -> bool {
    if has_induced_copy(sets, pattern) {
        return false;
    }
    (0..1u64 << n)
        .map(SetWord)
        .filter(|s| !sets.contains(s))
        .all(|s| {
            let mut bigger = sets.to_vec();
            bigger.push(s);
            has_induced_copy(&bigger, pattern)
        })
}

/// Minimum size of a saturated family over `[n]` and all families of that
/// size, found by checking every one of the `2^(2^n)` families (`n <= 3`).
pub fn all_min_saturated(n: usize, pattern: &PatternPoset) -> (usize, Vec<Vec<SetWord>>) {
    assert!(n <= 3, "naive enumeration is for n <= 3");
    let mut best = usize::MAX;
    let mut found = Vec::new();
    for mask in 0..1u64 << (1u64 << n) {
        let size = mask.count_ones() as usize;
        if size > best {
            continue;
        }
        let sets = family_of_mask(n, mask);
        if is_saturated(n, &sets, pattern) {
            if size < best {
                best = size;
                found.clear();
            }
            found.push(sets);
        }
    }
    (best, found)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Smallest sorted bit list over all `n!` relabelings; equal exactly for
/// families in the same orbit.
pub fn orbit_key(n: usize, sets: &[SetWord]) -> Vec<u64> {
    permutations(n)
        .into_iter()
        .map(|perm| {
            let mut bits: Vec<u64> = sets
                .iter()
                .map(|s| {
                    (0..n)
                        .filter(|&i| s.0 >> i & 1 == 1)
                        .map(|i| 1u64 << perm[i])
                        .sum()
                })
                .collect();
            bits.sort_unstable();
            bits
        })
        .min()
        .expect("at least one permutation")
}
