//! Thomason sets and decreasing Thomason filtrations.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::spectral_poset::{Embedding, PointSet, PrimeId, SpectralPoset};

/// An up-set of a finite poset together with its minimal generators.
#[derive(Clone, Debug)]
pub struct ThomasonSet {
    poset: Arc<SpectralPoset>,
    members: PointSet,
    generators: PointSet,
}

impl PartialEq for ThomasonSet {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
            && (Arc::ptr_eq(&self.poset, &other.poset) || self.poset == other.poset)
    }
}

impl Eq for ThomasonSet {}

impl ThomasonSet {
    pub fn new(poset: Arc<SpectralPoset>, members: PointSet) -> Result<Self> {
        if !poset.is_thomason(members)? {
            return Err(Error::NotThomason(poset.format_set(members)));
        }
        let generators = poset.minimal_elements(members);
        Ok(ThomasonSet { poset, members, generators })
    }

    /// `⋃ ↑g` over the given generators.
    pub fn generated_by(poset: Arc<SpectralPoset>, generators: PointSet) -> Result<Self> {
        let members = poset.specialization_closure(generators)?;
        Self::new(poset, members)
    }

    pub fn from_labels<S: AsRef<str>>(poset: Arc<SpectralPoset>, labels: &[S]) -> Result<Self> {
        let members = poset.point_set(labels)?;
        Self::new(poset, members)
    }

    pub fn empty(poset: Arc<SpectralPoset>) -> Self {
        ThomasonSet { poset, members: PointSet::EMPTY, generators: PointSet::EMPTY }
    }

    pub fn full(poset: Arc<SpectralPoset>) -> Self {
        let members = poset.full();
        let generators = poset.minimal_elements(members);
        ThomasonSet { poset, members, generators }
    }

    pub fn poset(&self) -> &Arc<SpectralPoset> {
        &self.poset
    }

    pub fn members(&self) -> PointSet {
        self.members
    }

    pub fn generators(&self) -> Vec<&PrimeId> {
        self.generators.iter().map(|i| self.poset.label(i)).collect()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.poset.labels_of(self.members)
    }

    pub fn contains(&self, label: &str) -> bool {
        self.poset.index_of(label).map(|i| self.members.contains(i)).unwrap_or(false)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.members == self.poset.full()
    }

    pub fn is_subset(&self, other: &ThomasonSet) -> bool {
        self.members.is_subset(other.members)
    }
}

impl fmt::Display for ThomasonSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.poset.format_set(self.members))
    }
}

/// A decreasing `Z`-indexed sequence of up-sets.
///
/// Stored as a step function: `low_tail` holds for every degree before the
/// first step, and each step `(c, X)` holds from degree `c` up to the next
/// step. Consecutive values differ, which makes the representation
/// canonical.
#[derive(Clone, Debug)]
pub struct ThomasonFiltration {
    poset: Arc<SpectralPoset>,
    low_tail: PointSet,
    steps: Vec<(i64, PointSet)>,
}

impl PartialEq for ThomasonFiltration {
    fn eq(&self, other: &Self) -> bool {
        self.low_tail == other.low_tail
            && self.steps == other.steps
            && (Arc::ptr_eq(&self.poset, &other.poset) || self.poset == other.poset)
    }
}

impl Eq for ThomasonFiltration {}

impl ThomasonFiltration {
    /// Builds a filtration from tails and explicit values. A breakpoint
    /// `(n, X)` fixes `X_n = X` and keeps it until the next breakpoint; past
    /// the last breakpoint the high tail takes over.
    pub fn new(
        poset: Arc<SpectralPoset>,
        low_tail: PointSet,
        breakpoints: &[(i64, PointSet)],
        high_tail: PointSet,
    ) -> Result<Self> {
        let mut bps = breakpoints.to_vec();
        bps.sort_by_key(|&(n, _)| n);
        if let Some(w) = bps.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::invalid(format!("breakpoint {} listed twice", w[0].0)));
        }
        if bps.is_empty() && low_tail != high_tail {
            return Err(Error::invalid(
                "a filtration without breakpoints must have equal tails",
            ));
        }
        let mut steps = bps.clone();
        if let Some(&(last, _)) = bps.last() {
            steps.push((last + 1, high_tail));
        }
        Self::from_steps(poset, low_tail, steps)
    }

    /// Builds a filtration from a step list `(c, X)` meaning `X_n = X` for
    /// `c <= n` until the next step. Redundant steps are dropped.
    pub fn from_steps(
        poset: Arc<SpectralPoset>,
        low_tail: PointSet,
        mut steps: Vec<(i64, PointSet)>,
    ) -> Result<Self> {
        steps.sort_by_key(|&(n, _)| n);
        if let Some(w) = steps.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::invalid(format!("degree {} assigned twice", w[0].0)));
        }
        let check = |s: PointSet| -> Result<()> {
            if poset.is_thomason(s)? {
                Ok(())
            } else {
                Err(Error::NotThomason(poset.format_set(s)))
            }
        };
        check(low_tail)?;
        let mut prev = low_tail;
        let mut normalized: Vec<(i64, PointSet)> = Vec::with_capacity(steps.len());
        for (n, s) in steps {
            check(s)?;
            if !s.is_subset(prev) {
                return Err(Error::FiltrationOrder {
                    degree: n,
                    detail: format!(
                        "X_{} = {} does not contain X_{} = {}",
                        n - 1,
                        poset.format_set(prev),
                        n,
                        poset.format_set(s)
                    ),
                });
            }
            if s != prev {
                normalized.push((n, s));
            }
            prev = s;
        }
        Ok(ThomasonFiltration { poset, low_tail, steps: normalized })
    }

    pub fn constant(poset: Arc<SpectralPoset>, value: PointSet) -> Result<Self> {
        Self::from_steps(poset, value, Vec::new())
    }

    /// The filtration with `X_n = values[n - lo]` on `[lo, hi]` and the end
    /// values extended as tails.
    pub fn from_window(poset: Arc<SpectralPoset>, lo: i64, values: &[PointSet]) -> Result<Self> {
        let first = *values.first().ok_or_else(|| Error::invalid("empty window"))?;
        let steps = values.iter().enumerate().skip(1).map(|(i, &s)| (lo + i as i64, s)).collect();
        Self::from_steps(poset, first, steps)
    }

    pub fn poset(&self) -> &Arc<SpectralPoset> {
        &self.poset
    }

    pub fn low_tail(&self) -> PointSet {
        self.low_tail
    }

    pub fn high_tail(&self) -> PointSet {
        self.steps.last().map(|&(_, s)| s).unwrap_or(self.low_tail)
    }

    pub fn steps(&self) -> &[(i64, PointSet)] {
        &self.steps
    }

    /// Canonical breakpoint list: every change point except the last, plus
    /// the degree just before the last change.
    pub fn breakpoints(&self) -> Vec<(i64, PointSet)> {
        let k = self.steps.len();
        if k == 0 {
            return Vec::new();
        }
        let mut out: Vec<(i64, PointSet)> = self.steps[..k - 1].to_vec();
        let last = self.steps[k - 1].0 - 1;
        if out.last().map(|&(n, _)| n) != Some(last) {
            out.push((last, self.at(last)));
        }
        out
    }

    /// `X_n`.
    pub fn at(&self, n: i64) -> PointSet {
        match self.steps.partition_point(|&(c, _)| c <= n) {
            0 => self.low_tail,
            i => self.steps[i - 1].1,
        }
    }

    pub fn set_at(&self, n: i64) -> ThomasonSet {
        let members = self.at(n);
        ThomasonSet {
            poset: self.poset.clone(),
            members,
            generators: self.poset.minimal_elements(members),
        }
    }

    /// Degrees where the value can change, together with the degree before
    /// the first change. Evaluating there determines the filtration.
    pub fn sample_degrees(&self) -> Vec<i64> {
        let mut out: Vec<i64> = self.steps.iter().map(|&(c, _)| c).collect();
        if let Some(&first) = out.first() {
            out.insert(0, first - 1);
        }
        out
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.high_tail().is_empty() && self.low_tail == self.poset.full()
    }

    pub fn is_constant(&self) -> bool {
        self.steps.is_empty()
    }

    /// Degreewise restriction to `↓m` for a maximal point `m`, transported
    /// to the localization poset.
    pub fn restrict(&self, m: &str) -> Result<(ThomasonFiltration, Embedding)> {
        let mi = self.poset.index_of(m)?;
        if !self.poset.maximal_points().contains(mi) {
            return Err(Error::invalid(format!("{m} is not a maximal point")));
        }
        let (local, emb) = self.poset.localization(m)?;
        let f = self.pull_back(&emb)?;
        debug_assert!(Arc::ptr_eq(f.poset(), &local));
        Ok((f, emb))
    }

    /// Degreewise preimage along an embedding into this filtration's poset.
    pub fn pull_back(&self, emb: &Embedding) -> Result<ThomasonFiltration> {
        if **emb.target() != *self.poset {
            return Err(Error::invalid("embedding target is not the filtration poset"));
        }
        let steps = self.steps.iter().map(|&(c, s)| (c, emb.preimage(s))).collect();
        Self::from_steps(emb.source().clone(), emb.preimage(self.low_tail), steps)
    }

    /// Every filtration whose values change only inside `[lo, hi]`.
    pub fn enumerate_window(poset: &Arc<SpectralPoset>, lo: i64, hi: i64) -> Vec<ThomasonFiltration> {
        let ups = poset.up_sets();
        let len = (hi - lo + 1).max(1) as usize;
        let mut out = Vec::new();
        let mut chain = Vec::with_capacity(len);
        enumerate_chains(&ups, len, &mut chain, &mut |values| {
            out.push(
                Self::from_window(poset.clone(), lo, values)
                    .expect("decreasing chains of up-sets are filtrations"),
            );
        });
        out
    }

    pub fn display(&self) -> String {
        let mut parts = vec![self.poset.format_set(self.low_tail)];
        for &(c, s) in &self.steps {
            parts.push(format!("{}@{}", self.poset.format_set(s), c));
        }
        parts.join(" / ")
    }
}

impl fmt::Display for ThomasonFiltration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

fn enumerate_chains(
    ups: &[PointSet],
    len: usize,
    chain: &mut Vec<PointSet>,
    emit: &mut dyn FnMut(&[PointSet]),
) {
    if chain.len() == len {
        emit(chain);
        return;
    }
    for &u in ups {
        if chain.last().is_none_or(|&prev| u.is_subset(prev)) {
            chain.push(u);
            enumerate_chains(ups, len, chain, emit);
            chain.pop();
        }
    }
}
