//! Finite spectral spaces as posets of primes.
//!
//! A point `a` lies below `b` when the prime `a` is contained in `b`. On a
//! finite spectral space every open set of the Hochster dual topology is
//! quasi-compact, so the Thomason subsets are exactly the up-sets
//! (specialization closed subsets) of this order.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest poset handled; point sets are 64-bit masks.
pub const MAX_POINTS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimeId(String);

impl PrimeId {
    pub fn new(label: impl Into<String>) -> Self {
        PrimeId(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PrimeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for PrimeId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl From<&str> for PrimeId {
    fn from(s: &str) -> Self {
        PrimeId(s.to_string())
    }
}

/// A subset of the points of some poset, stored as a bit mask over the
/// canonical element order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointSet(u64);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn from_bits(bits: u64) -> Self {
        PointSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        PointSet(1 << i)
    }

    /// The set `{0, .., n-1}`.
    pub fn first(n: usize) -> Self {
        if n >= 64 {
            PointSet(u64::MAX)
        } else {
            PointSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 & (1 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn union(self, other: PointSet) -> PointSet {
        PointSet(self.0 | other.0)
    }

    pub fn intersection(self, other: PointSet) -> PointSet {
        PointSet(self.0 & other.0)
    }

    pub fn difference(self, other: PointSet) -> PointSet {
        PointSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: PointSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
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
}

impl FromIterator<usize> for PointSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = PointSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

/// A finite poset of primes with sorted labels and a precomputed
/// reachability relation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpectralPoset {
    labels: Vec<PrimeId>,
    // up[i] = {j | i <= j}, down[i] = {j | j <= i}
    up: Vec<PointSet>,
    down: Vec<PointSet>,
}

impl SpectralPoset {
    /// Builds a poset from labels and generating pairs `(a, b)` meaning
    /// `a <= b`. Reflexive and transitive pairs may be omitted.
    pub fn new<S: AsRef<str>>(elements: &[S], leq: &[(S, S)]) -> Result<Self> {
        let mut labels: Vec<PrimeId> = elements.iter().map(|s| PrimeId::new(s.as_ref())).collect();
        labels.sort();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("duplicate prime label {}", w[0])));
        }
        if labels.len() > MAX_POINTS {
            return Err(Error::unsupported(format!(
                "posets with more than {MAX_POINTS} points"
            )));
        }
        let n = labels.len();
        let find = |s: &str| -> Result<usize> {
            labels
                .binary_search_by(|l| l.as_str().cmp(s))
                .map_err(|_| Error::invalid(format!("unknown prime label {s}")))
        };
        let mut up: Vec<PointSet> = (0..n).map(PointSet::singleton).collect();
        for (a, b) in leq {
            let (a, b) = (find(a.as_ref())?, find(b.as_ref())?);
            up[a].insert(b);
        }
        Self::from_relation(labels, up)
    }

    /// `up[i]` lists the points above `i` (the relation need not be closed).
    pub fn from_relation(labels: Vec<PrimeId>, mut up: Vec<PointSet>) -> Result<Self> {
        let n = labels.len();
        if up.len() != n {
            return Err(Error::invalid("relation size does not match element count"));
        }
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("labels must be strictly sorted"));
        }
        for (i, row) in up.iter_mut().enumerate() {
            row.insert(i);
        }
        // transitive closure, Warshall over bit rows
        for k in 0..n {
            for i in 0..n {
                if up[i].contains(k) {
                    up[i] = up[i].union(up[k]);
                }
            }
        }
        for i in 0..n {
            for j in up[i].iter() {
                if j != i && up[j].contains(i) {
                    return Err(Error::invalid(format!(
                        "order relation is not antisymmetric: {} and {} lie above each other",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        let mut down = vec![PointSet::EMPTY; n];
        for (i, row) in up.iter().enumerate() {
            for j in row.iter() {
                down[j].insert(i);
            }
        }
        Ok(SpectralPoset { labels, up, down })
    }

    /// The discrete order on the given labels.
    pub fn antichain<S: AsRef<str>>(elements: &[S]) -> Result<Self> {
        Self::new(elements, &[])
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[PrimeId] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &PrimeId {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .binary_search_by(|l| l.as_str().cmp(label))
            .map_err(|_| Error::invalid(format!("prime {label} is not a point of the poset")))
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn up_of(&self, i: usize) -> PointSet {
        self.up[i]
    }

    pub fn down_of(&self, i: usize) -> PointSet {
        self.down[i]
    }

    pub fn full(&self) -> PointSet {
        PointSet::first(self.len())
    }

    pub fn point_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<PointSet> {
        labels.iter().map(|l| self.index_of(l.as_ref())).collect()
    }

    pub fn labels_of(&self, set: PointSet) -> Vec<&str> {
        set.iter().map(|i| self.labels[i].as_str()).collect()
    }

    pub fn format_set(&self, set: PointSet) -> String {
        format!("{{{}}}", self.labels_of(set).join(", "))
    }

    pub fn check_members(&self, set: PointSet) -> Result<()> {
        if set.is_subset(self.full()) {
            Ok(())
        } else {
            Err(Error::invalid("point set has members outside the poset"))
        }
    }

    /// Smallest up-set containing `set`.
    pub fn specialization_closure(&self, set: PointSet) -> Result<PointSet> {
        self.check_members(set)?;
        Ok(self.closure_unchecked(set))
    }

    pub(crate) fn closure_unchecked(&self, set: PointSet) -> PointSet {
        set.iter().fold(PointSet::EMPTY, |acc, i| acc.union(self.up[i]))
    }

    pub fn is_thomason(&self, set: PointSet) -> Result<bool> {
        Ok(self.specialization_closure(set)? == set)
    }

    pub fn down_closure(&self, set: PointSet) -> PointSet {
        set.iter().fold(PointSet::EMPTY, |acc, i| acc.union(self.down[i]))
    }

    pub fn maximal_points(&self) -> PointSet {
        (0..self.len()).filter(|&i| self.up[i] == PointSet::singleton(i)).collect()
    }

    pub fn minimal_points(&self) -> PointSet {
        (0..self.len()).filter(|&i| self.down[i] == PointSet::singleton(i)).collect()
    }

    /// Minimal elements of `set`; for an up-set these generate it.
    pub fn minimal_elements(&self, set: PointSet) -> PointSet {
        set.iter()
            .filter(|&i| self.down[i].intersection(set) == PointSet::singleton(i))
            .collect()
    }

    /// The down-set `↓p` as a poset in its own right, with its inclusion.
    pub fn localization(self: &Arc<Self>, p: &str) -> Result<(Arc<SpectralPoset>, Embedding)> {
        let pi = self.index_of(p)?;
        let members: Vec<usize> = self.down[pi].iter().collect();
        let labels: Vec<PrimeId> = members.iter().map(|&i| self.labels[i].clone()).collect();
        let up = members
            .iter()
            .map(|&a| {
                members
                    .iter()
                    .enumerate()
                    .filter(|&(_, &b)| self.leq(a, b))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        let local = Arc::new(SpectralPoset::from_relation(labels, up)?);
        let embedding = Embedding {
            source: local.clone(),
            target: self.clone(),
            map: members,
        };
        Ok((local, embedding))
    }

    /// Every up-set, in increasing order of bit mask.
    pub fn up_sets(&self) -> Vec<PointSet> {
        // decide points from the top down, so everything above a point is
        // settled before the point itself
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.down[i].len()));
        let mut out = Vec::new();
        self.up_sets_rec(&order, 0, PointSet::EMPTY, &mut out);
        out.sort();
        out
    }

    fn up_sets_rec(&self, order: &[usize], at: usize, acc: PointSet, out: &mut Vec<PointSet>) {
        if at == order.len() {
            out.push(acc);
            return;
        }
        let i = order[at];
        self.up_sets_rec(order, at + 1, acc, out);
        if self.up[i].difference(PointSet::singleton(i)).is_subset(acc) {
            let mut with = acc;
            with.insert(i);
            self.up_sets_rec(order, at + 1, with, out);
        }
    }

    /// Cover relations `(a, b)` with `a < b` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            for b in self.up[a].iter() {
                if a == b {
                    continue;
                }
                let between = self.up[a]
                    .intersection(self.down[b])
                    .difference(PointSet::singleton(a).union(PointSet::singleton(b)));
                if between.is_empty() {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Relabel points through `f`, keeping the order.
    pub fn relabel(&self, f: impl Fn(&PrimeId) -> PrimeId) -> Result<(SpectralPoset, Vec<usize>)> {
        let new_labels: Vec<PrimeId> = self.labels.iter().map(&f).collect();
        let mut perm: Vec<usize> = (0..self.len()).collect();
        perm.sort_by(|&a, &b| new_labels[a].cmp(&new_labels[b]));
        // perm[new_index] = old_index
        let mut position = vec![0; self.len()];
        for (new, &old) in perm.iter().enumerate() {
            position[old] = new;
        }
        let labels: Vec<PrimeId> = perm.iter().map(|&old| new_labels[old].clone()).collect();
        let up = perm
            .iter()
            .map(|&old| self.up[old].iter().map(|j| position[j]).collect())
            .collect();
        Ok((SpectralPoset::from_relation(labels, up)?, position))
    }
}

/// An order embedding of one poset into another.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Arc<SpectralPoset>,
    target: Arc<SpectralPoset>,
    map: Vec<usize>,
}

impl Embedding {
    pub fn new(source: Arc<SpectralPoset>, target: Arc<SpectralPoset>, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::invalid("embedding map must cover every source point"));
        }
        if map.iter().any(|&j| j >= target.len()) {
            return Err(Error::invalid("embedding map leaves the target poset"));
        }
        for a in 0..source.len() {
            for b in 0..source.len() {
                if source.leq(a, b) != target.leq(map[a], map[b]) {
                    return Err(Error::invalid(format!(
                        "map is not an order embedding at ({}, {})",
                        source.label(a),
                        source.label(b)
                    )));
                }
            }
        }
        // order reflection already forces injectivity
        Ok(Embedding { source, target, map })
    }

    pub fn source(&self) -> &Arc<SpectralPoset> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SpectralPoset> {
        &self.target
    }

    pub fn map_point(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn image(&self) -> PointSet {
        self.map.iter().copied().collect()
    }

    /// `Y*`: the image of a subset of the source.
    pub fn star_image(&self, set: PointSet) -> Result<PointSet> {
        self.source.check_members(set)?;
        Ok(set.iter().map(|i| self.map[i]).collect())
    }

    /// Points of the source whose image lies in `set`.
    pub fn preimage(&self, set: PointSet) -> PointSet {
        (0..self.map.len()).filter(|&i| set.contains(self.map[i])).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv() -> Arc<SpectralPoset> {
        Arc::new(SpectralPoset::new(&["p", "m1", "m2"], &[("p", "m1"), ("p", "m2")]).unwrap())
    }

    fn chain() -> Arc<SpectralPoset> {
        Arc::new(SpectralPoset::new(&["p0", "p1", "m"], &[("p0", "p1"), ("p1", "m")]).unwrap())
    }

    fn set(p: &SpectralPoset, l: &[&str]) -> PointSet {
        p.point_set(l).unwrap()
    }

    #[test]
    fn closure_examples() {
        let p = pv();
        assert_eq!(p.specialization_closure(set(&p, &["p"])).unwrap(), p.full());
        assert_eq!(p.specialization_closure(set(&p, &["m1"])).unwrap(), set(&p, &["m1"]));
        let c = chain();
        assert_eq!(
            c.specialization_closure(set(&c, &["p1"])).unwrap(),
            set(&c, &["p1", "m"])
        );
        assert!(p.specialization_closure(PointSet::singleton(5)).is_err());
    }

    #[test]
    fn thomason_examples() {
        let p = pv();
        assert!(p.is_thomason(set(&p, &["m1", "m2"])).unwrap());
        assert!(!p.is_thomason(set(&p, &["p"])).unwrap());
        assert!(p.is_thomason(PointSet::EMPTY).unwrap());
        assert!(chain().is_thomason(PointSet::EMPTY).unwrap());
    }

    #[test]
    fn localization_examples() {
        let p = pv();
        let (local, emb) = p.localization("m1").unwrap();
        assert_eq!(local.labels_of(local.full()), vec!["m1", "p"]);
        assert!(local.leq(local.index_of("p").unwrap(), local.index_of("m1").unwrap()));
        assert_eq!(emb.star_image(local.full()).unwrap(), set(&p, &["p", "m1"]));
        let (single, _) = p.localization("p").unwrap();
        assert_eq!(single.len(), 1);
        let anti = Arc::new(SpectralPoset::antichain(&["(2)", "(3)"]).unwrap());
        let (l2, _) = anti.localization("(2)").unwrap();
        assert_eq!(l2.labels_of(l2.full()), vec!["(2)"]);
        assert!(p.localization("q").is_err());
    }

    #[test]
    fn star_image_examples() {
        let p = pv();
        let (local, emb) = p.localization("m1").unwrap();
        assert_eq!(emb.star_image(set(&local, &["m1"])).unwrap(), set(&p, &["m1"]));
        assert_eq!(emb.star_image(PointSet::EMPTY).unwrap(), PointSet::EMPTY);
        assert_eq!(
            emb.star_image(set(&local, &["p", "m1"])).unwrap(),
            set(&p, &["p", "m1"])
        );
    }

    #[test]
    fn maximal_points_examples() {
        let p = pv();
        assert_eq!(p.maximal_points(), set(&p, &["m1", "m2"]));
        let c = chain();
        assert_eq!(c.maximal_points(), set(&c, &["m"]));
        let anti = SpectralPoset::antichain(&["(2)", "(3)"]).unwrap();
        assert_eq!(anti.maximal_points(), anti.full());
    }

    #[test]
    fn rejects_cycles_and_duplicates() {
        assert!(SpectralPoset::new(&["a", "b"], &[("a", "b"), ("b", "a")]).is_err());
        assert!(SpectralPoset::new(&["a", "a"], &[]).is_err());
        assert!(SpectralPoset::new(&["a"], &[("a", "z")]).is_err());
    }

    #[test]
    fn up_sets_of_v() {
        let p = pv();
        let ups = p.up_sets();
        // ∅, {m1}, {m2}, {m1,m2}, full
        assert_eq!(ups.len(), 5);
        assert!(ups.iter().all(|&u| p.is_thomason(u).unwrap()));
    }

    #[test]
    fn embedding_rejects_non_embeddings() {
        let p = pv();
        let c = chain();
        // p0 -> p, p1 -> m1, m -> m2 breaks p1 <= m
        assert!(Embedding::new(c, p, vec![0, 1, 2]).is_err());
    }
}
