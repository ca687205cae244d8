//! Abstract finite posets: the patterns whose induced copies we look for.
//!
//! Elements are `0..size` internally and printed 1-based. The strict order is
//! stored transitively closed as one bitmask row per element.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};

pub const MAX_PATTERN: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PatternPoset {
    size: usize,
    /// `above[a]` has bit `b` set iff `a < b`.
    above: Vec<u64>,
    label: Option<String>,
}

/// Named patterns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    Point,
    Diamond,
    C2,
    V,
    Lambda,
    Butterfly,
    Chain(usize),
    Antichain(usize),
}

impl PatternPoset {
    /// Builds a poset from strict pairs `(a, b)` meaning `a < b`, taking the
    /// transitive closure.
    pub fn new(size: usize, strict_pairs: &[(usize, usize)]) -> Result<PatternPoset> {
        if size == 0 || size > MAX_PATTERN {
            return Err(Error::Parameter(format!(
                "pattern size {size} outside 1..={MAX_PATTERN}"
            )));
        }
        let mut above = vec![0u64; size];
        for &(a, b) in strict_pairs {
            for idx in [a, b] {
                if idx >= size {
                    return Err(Error::IndexOutOfRange { index: idx, size });
                }
            }
            above[a] |= 1 << b;
        }
        // Warshall over bit rows.
        for k in 0..size {
            for a in 0..size {
                if above[a] >> k & 1 == 1 {
                    above[a] |= above[k];
                }
            }
        }
        if let Some(element) = (0..size).find(|&a| above[a] >> a & 1 == 1) {
            return Err(Error::Cycle { element });
        }
        Ok(PatternPoset {
            size,
            above,
            label: None,
        })
    }

    pub fn builtin(which: Builtin) -> Result<PatternPoset> {
        let p = match which {
            Builtin::Point => Self::new(1, &[])?,
            Builtin::Diamond => Self::new(4, &[(0, 1), (0, 2), (1, 3), (2, 3)])?,
            Builtin::C2 => Self::new(2, &[(0, 1)])?,
            Builtin::V => Self::new(3, &[(0, 1), (0, 2)])?,
            Builtin::Lambda => Self::new(3, &[(0, 2), (1, 2)])?,
            Builtin::Butterfly => Self::new(4, &[(0, 2), (0, 3), (1, 2), (1, 3)])?,
            Builtin::Chain(k) => {
                Self::check_param(k)?;
                Self::new(k, &(1..k).map(|i| (i - 1, i)).collect::<Vec<_>>())?
            }
            Builtin::Antichain(k) => {
                Self::check_param(k)?;
                Self::new(k, &[])?
            }
        };
        Ok(p.with_label(which.name()))
    }

    fn check_param(k: usize) -> Result<()> {
        if k == 0 {
            Err(Error::Parameter("parametric patterns need k >= 1".into()))
        } else {
            Ok(())
        }
    }

    pub fn diamond() -> PatternPoset {
        Self::builtin(Builtin::Diamond).expect("valid builtin")
    }

    pub fn c2() -> PatternPoset {
        Self::builtin(Builtin::C2).expect("valid builtin")
    }

    /// `top` placed entirely above `bottom`. Bottom elements keep their
    /// indices; top elements are shifted past them.
    pub fn linear_sum(top: &PatternPoset, bottom: &PatternPoset) -> Result<PatternPoset> {
        let offset = bottom.size;
        let mut pairs = bottom.pairs();
        pairs.extend(
            top.pairs()
                .into_iter()
                .map(|(a, b)| (a + offset, b + offset)),
        );
        for a in 0..bottom.size {
            for b in 0..top.size {
                pairs.push((a, b + offset));
            }
        }
        Self::new(bottom.size + top.size, &pairs)
    }

    /// Layered poset, first layer at the bottom; `a < b` iff `a`'s layer is
    /// strictly below `b`'s.
    pub fn complete_multipartite(layer_sizes: &[usize]) -> Result<PatternPoset> {
        if layer_sizes.is_empty() || layer_sizes.contains(&0) {
            return Err(Error::Parameter(
                "complete multipartite poset needs at least one layer, all nonempty".into(),
            ));
        }
        let layer_of: Vec<usize> = layer_sizes
            .iter()
            .enumerate()
            .flat_map(|(l, &s)| std::iter::repeat_n(l, s))
            .collect();
        let pairs: Vec<(usize, usize)> = (0..layer_of.len())
            .tuple_combinations()
            .filter(|&(a, b)| layer_of[a] < layer_of[b])
            .collect();
        let label = format!("K:{}", layer_sizes.iter().join(","));
        Ok(Self::new(layer_of.len(), &pairs)?.with_label(label))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> PatternPoset {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.above[a] >> b & 1 == 1
    }

    #[inline]
    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.lt(a, b) || self.lt(b, a)
    }

    /// Bitmask of elements strictly above `a`.
    pub fn above_mask(&self, a: usize) -> u64 {
        self.above[a]
    }

    /// All strict pairs `(a, b)` with `a < b`, closure included.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.size)
            .flat_map(|a| {
                (0..self.size)
                    .filter(move |&b| self.lt(a, b))
                    .map(move |b| (a, b))
            })
            .collect()
    }

    /// Pairs `a < b` with nothing strictly between.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        self.pairs()
            .into_iter()
            .filter(|&(a, b)| !(0..self.size).any(|c| self.lt(a, c) && self.lt(c, b)))
            .collect()
    }

    pub fn below_count(&self, a: usize) -> usize {
        (0..self.size).filter(|&b| self.lt(b, a)).count()
    }

    pub fn above_count(&self, a: usize) -> usize {
        self.above[a].count_ones() as usize
    }

    /// Length of the longest chain ending at `a`, counting edges.
    pub fn depth(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.size).collect();
        order.sort_by_key(|&a| self.below_count(a));
        let mut depth = vec![0usize; self.size];
        for &a in &order {
            depth[a] = (0..self.size)
                .filter(|&b| self.lt(b, a))
                .map(|b| depth[b] + 1)
                .max()
                .unwrap_or(0);
        }
        depth
    }

    /// Length of the longest chain starting at `a`, counting edges.
    pub fn height(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.size).collect();
        order.sort_by_key(|&a| self.above_count(a));
        let mut height = vec![0usize; self.size];
        for &a in &order {
            height[a] = (0..self.size)
                .filter(|&b| self.lt(a, b))
                .map(|b| height[b] + 1)
                .max()
                .unwrap_or(0);
        }
        height
    }

    /// Whether an order-preserving-and-reflecting bijection exists.
    pub fn is_isomorphic(&self, other: &PatternPoset) -> bool {
        if self.size != other.size || self.pairs().len() != other.pairs().len() {
            return false;
        }
        let sig = |p: &PatternPoset, a: usize| (p.below_count(a), p.above_count(a));
        let mut mine: Vec<_> = (0..self.size).map(|a| sig(self, a)).collect();
        let mut theirs: Vec<_> = (0..other.size).map(|a| sig(other, a)).collect();
        mine.sort_unstable();
        theirs.sort_unstable();
        if mine != theirs {
            return false;
        }
        let mut map = vec![usize::MAX; self.size];
        let mut used = vec![false; other.size];
        self.extend_iso(other, 0, &mut map, &mut used)
    }

    fn extend_iso(
        &self,
        other: &PatternPoset,
        a: usize,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if a == self.size {
            return true;
        }
        for b in 0..other.size {
            if used[b]
                || self.below_count(a) != other.below_count(b)
                || self.above_count(a) != other.above_count(b)
            {
                continue;
            }
            let consistent = (0..a).all(|c| {
                self.lt(c, a) == other.lt(map[c], b) && self.lt(a, c) == other.lt(b, map[c])
            });
            if !consistent {
                continue;
            }
            map[a] = b;
            used[b] = true;
            if self.extend_iso(other, a + 1, map, used) {
                return true;
            }
            used[b] = false;
        }
        map[a] = usize::MAX;
        false
    }

    /// A string identifying the isomorphism class: the smallest relation
    /// matrix over relabelings that keep (below, above) counts sorted.
    pub fn canonical_key(&self) -> String {
        let k = self.size;
        let mut cells: Vec<((usize, usize), Vec<usize>)> = Vec::new();
        for a in 0..k {
            let key = (self.below_count(a), self.above_count(a));
            match cells.iter_mut().find(|(c, _)| *c == key) {
                Some((_, members)) => members.push(a),
                None => cells.push((key, vec![a])),
            }
        }
        cells.sort();
        let per_cell: Vec<Vec<Vec<usize>>> = cells
            .iter()
            .map(|(_, m)| m.iter().copied().permutations(m.len()).collect())
            .collect();
        let mut best: Option<Vec<u64>> = None;
        for combo in per_cell.iter().multi_cartesian_product() {
            let order: Vec<usize> = combo.into_iter().flatten().copied().collect();
            let mut pos = vec![0usize; k];
            for (p, &a) in order.iter().enumerate() {
                pos[a] = p;
            }
            let mut rows = vec![0u64; k];
            for (a, b) in self.pairs() {
                rows[pos[a]] |= 1 << pos[b];
            }
            if best.as_ref().is_none_or(|r| rows < *r) {
                best = Some(rows);
            }
        }
        let rows = best.unwrap_or_default();
        format!("{k}:{}", rows.iter().map(|r| format!("{r:x}")).join("."))
    }

    /// Parses a pattern spec: a builtin name (`diamond`, `c2`, `v`, `lambda`,
    /// `butterfly`, `point`, `chain:K`, `antichain:K`, `K:n1,n2,...`) or a
    /// literal `poset k; a<b, c<d` with 1-based indices.
    pub fn parse(spec: &str) -> Result<PatternPoset> {
        let spec = spec.trim();
        let bad = |message: String| Error::Parse { line: 1, message };
        if let Some(rest) = spec.strip_prefix("poset") {
            let (size_part, rel_part) = match rest.split_once(';') {
                Some((s, r)) => (s, r),
                None => (rest, ""),
            };
            let size: usize = size_part
                .trim()
                .parse()
                .map_err(|_| bad(format!("bad poset size `{}`", size_part.trim())))?;
            let mut pairs = Vec::new();
            for rel in rel_part.split(',').map(str::trim).filter(|r| !r.is_empty()) {
                let (a, b) = rel
                    .split_once('<')
                    .ok_or_else(|| bad(format!("expected `a<b`, found `{rel}`")))?;
                let parse_idx = |s: &str| -> Result<usize> {
                    let v: usize = s
                        .trim()
                        .parse()
                        .map_err(|_| bad(format!("bad element `{}`", s.trim())))?;
                    if v == 0 {
                        return Err(bad("elements are 1-based".into()));
                    }
                    Ok(v - 1)
                };
                pairs.push((parse_idx(a)?, parse_idx(b)?));
            }
            return Self::new(size, &pairs);
        }
        let lower = spec.to_ascii_lowercase();
        let param = |s: &str| -> Result<usize> {
            s.trim()
                .parse()
                .map_err(|_| bad(format!("bad parameter `{s}` in `{spec}`")))
        };
        let which = match lower.as_str() {
            "diamond" | "d2" => Builtin::Diamond,
            "c2" => Builtin::C2,
            "v" => Builtin::V,
            "lambda" => Builtin::Lambda,
            "butterfly" => Builtin::Butterfly,
            "point" => Builtin::Point,
            _ => {
                if let Some(k) = lower.strip_prefix("chain:") {
                    Builtin::Chain(param(k)?)
                } else if let Some(k) = lower.strip_prefix("antichain:") {
                    Builtin::Antichain(param(k)?)
                } else if let Some(layers) = lower.strip_prefix("k:") {
                    let sizes = layers.split(',').map(param).collect::<Result<Vec<_>>>()?;
                    return Self::complete_multipartite(&sizes);
                } else {
                    return Err(bad(format!("unknown pattern `{spec}`")));
                }
            }
        };
        Self::builtin(which)
    }

    /// The literal form accepted by [`PatternPoset::parse`], using cover pairs.
    pub fn to_literal(&self) -> String {
        let rels = self
            .cover_pairs()
            .into_iter()
            .map(|(a, b)| format!("{}<{}", a + 1, b + 1))
            .join(", ");
        format!("poset {}; {rels}", self.size)
    }
}

impl Builtin {
    pub fn name(self) -> String {
        match self {
            Builtin::Point => "point".into(),
            Builtin::Diamond => "diamond".into(),
            Builtin::C2 => "c2".into(),
            Builtin::V => "v".into(),
            Builtin::Lambda => "lambda".into(),
            Builtin::Butterfly => "butterfly".into(),
            Builtin::Chain(k) => format!("chain:{k}"),
            Builtin::Antichain(k) => format!("antichain:{k}"),
        }
    }
}

impl fmt::Display for PatternPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(l) => f.write_str(l),
            None => f.write_str(&self.to_literal()),
        }
    }
}

impl fmt::Debug for PatternPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_literal())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn builtins() -> Vec<PatternPoset> {
        [
            Builtin::Point,
            Builtin::Diamond,
            Builtin::C2,
            Builtin::V,
            Builtin::Lambda,
            Builtin::Butterfly,
            Builtin::Chain(3),
            Builtin::Antichain(2),
            Builtin::Antichain(3),
        ]
        .into_iter()
        .map(|b| PatternPoset::builtin(b).unwrap())
        .collect()
    }

    #[test]
    fn make_poset_closes_transitively() {
        let d = PatternPoset::new(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(d.pairs(), vec![(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)]);
        assert!(!d.comparable(1, 2));

        let point = PatternPoset::new(1, &[]).unwrap();
        assert_eq!(point.size(), 1);
        assert!(point.pairs().is_empty());

        let chain = PatternPoset::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(chain.lt(0, 2));
    }

    #[test]
    fn make_poset_errors() {
        assert!(matches!(
            PatternPoset::new(3, &[(0, 1), (1, 2), (2, 0)]),
            Err(Error::Cycle { .. })
        ));
        assert!(matches!(
            PatternPoset::new(2, &[(0, 0)]),
            Err(Error::Cycle { element: 0 })
        ));
        assert!(matches!(
            PatternPoset::new(2, &[(0, 2)]),
            Err(Error::IndexOutOfRange { index: 2, size: 2 })
        ));
    }

    #[test]
    fn builtin_shapes() {
        let d = PatternPoset::diamond();
        assert_eq!(d.pairs(), vec![(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)]);
        let a2 = PatternPoset::builtin(Builtin::Antichain(2)).unwrap();
        assert_eq!(a2.size(), 2);
        assert!(a2.pairs().is_empty());
        let bf = PatternPoset::builtin(Builtin::Butterfly).unwrap();
        assert_eq!(bf.pairs(), vec![(0, 2), (0, 3), (1, 2), (1, 3)]);
        assert!(PatternPoset::builtin(Builtin::Chain(0)).is_err());
    }

    #[test]
    fn linear_sum_examples() {
        let point = PatternPoset::builtin(Builtin::Point).unwrap();
        let a2 = PatternPoset::builtin(Builtin::Antichain(2)).unwrap();
        let v = PatternPoset::linear_sum(&a2, &point).unwrap();
        assert_eq!(
            v.pairs(),
            PatternPoset::builtin(Builtin::V).unwrap().pairs()
        );

        let d = PatternPoset::linear_sum(&point, &v).unwrap();
        assert!(d.is_isomorphic(&PatternPoset::diamond()));

        let c1 = PatternPoset::builtin(Builtin::Chain(1)).unwrap();
        let c2 = PatternPoset::linear_sum(&c1, &c1).unwrap();
        assert!(c2.is_isomorphic(&PatternPoset::builtin(Builtin::Chain(2)).unwrap()));
    }

    #[test]
    fn complete_multipartite_examples() {
        let k121 = PatternPoset::complete_multipartite(&[1, 2, 1]).unwrap();
        assert!(k121.is_isomorphic(&PatternPoset::diamond()));
        let k22 = PatternPoset::complete_multipartite(&[2, 2]).unwrap();
        assert_eq!(
            k22.pairs(),
            PatternPoset::builtin(Builtin::Butterfly).unwrap().pairs()
        );
        let k3 = PatternPoset::complete_multipartite(&[3]).unwrap();
        assert!(k3.is_isomorphic(&PatternPoset::builtin(Builtin::Antichain(3)).unwrap()));
        assert!(PatternPoset::complete_multipartite(&[]).is_err());
        assert!(PatternPoset::complete_multipartite(&[1, 0]).is_err());
    }

    /// Isomorphism by trying every bijection, no pruning.
    fn brute_isomorphic(p: &PatternPoset, q: &PatternPoset) -> bool {
        p.size() == q.size()
            && (0..q.size()).permutations(q.size()).any(|m| {
                (0..p.size()).all(|a| (0..p.size()).all(|b| p.lt(a, b) == q.lt(m[a], m[b])))
            })
    }

    #[test]
    fn isomorphism_examples_and_oracle() {
        let v = PatternPoset::builtin(Builtin::V).unwrap();
        let l = PatternPoset::builtin(Builtin::Lambda).unwrap();
        assert!(!v.is_isomorphic(&l));
        let c3 = PatternPoset::builtin(Builtin::Chain(3)).unwrap();
        assert!(c3.is_isomorphic(&c3.clone()));
        let k121 = PatternPoset::complete_multipartite(&[1, 2, 1]).unwrap();
        assert!(brute_isomorphic(&PatternPoset::diamond(), &k121));
        for p in builtins() {
            for q in builtins() {
                assert_eq!(p.is_isomorphic(&q), brute_isomorphic(&p, &q), "{p} vs {q}");
            }
        }
    }

    #[test]
    fn isomorphism_is_an_equivalence() {
        let all = builtins();
        for p in &all {
            assert!(p.is_isomorphic(p));
            for q in &all {
                assert_eq!(p.is_isomorphic(q), q.is_isomorphic(p));
                for r in &all {
                    if p.is_isomorphic(q) && q.is_isomorphic(r) {
                        assert!(p.is_isomorphic(r));
                    }
                }
            }
        }
    }

    #[test]
    fn linear_sum_is_associative_up_to_isomorphism() {
        let all = builtins();
        for p in &all {
            for q in &all {
                for r in &all {
                    let left =
                        PatternPoset::linear_sum(&PatternPoset::linear_sum(p, q).unwrap(), r)
                            .unwrap();
                    let right =
                        PatternPoset::linear_sum(p, &PatternPoset::linear_sum(q, r).unwrap())
                            .unwrap();
                    assert!(left.is_isomorphic(&right));
                }
            }
        }
    }

    #[test]
    fn closure_is_idempotent() {
        for p in builtins() {
            let again = PatternPoset::new(p.size(), &p.pairs()).unwrap();
            assert_eq!(again.pairs(), p.pairs());
            let from_covers = PatternPoset::new(p.size(), &p.cover_pairs()).unwrap();
            assert_eq!(from_covers.pairs(), p.pairs());
        }
    }

    #[test]
    fn canonical_key_separates_classes() {
        let all = builtins();
        for p in &all {
            for q in &all {
                assert_eq!(p.canonical_key() == q.canonical_key(), p.is_isomorphic(q));
            }
        }
        let relabeled = PatternPoset::new(4, &[(3, 1), (3, 0), (1, 2), (0, 2)]).unwrap();
        assert_eq!(
            relabeled.canonical_key(),
            PatternPoset::diamond().canonical_key()
        );
    }

    #[test]
    fn parse_specs() {
        assert!(PatternPoset::parse("diamond")
            .unwrap()
            .is_isomorphic(&PatternPoset::diamond()));
        assert_eq!(PatternPoset::parse("chain:4").unwrap().size(), 4);
        assert!(PatternPoset::parse("K:1,2,1")
            .unwrap()
            .is_isomorphic(&PatternPoset::diamond()));
        let lit = PatternPoset::parse("poset 4; 1<2, 1<3, 2<4, 3<4").unwrap();
        assert_eq!(lit.pairs(), PatternPoset::diamond().pairs());
        assert_eq!(PatternPoset::parse("poset 2").unwrap().pairs(), vec![]);
        assert_eq!(PatternPoset::parse(&lit.to_literal()).unwrap(), lit);
        assert!(PatternPoset::parse("poset 2; 1<3").is_err());
        assert!(PatternPoset::parse("poset 2; 0<1").is_err());
        assert!(PatternPoset::parse("hexagon").is_err());
    }
}
