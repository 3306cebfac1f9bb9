//! Compatibility of local families and the glue/localize correspondence
//! over the localizations at maximal points.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::spectral_poset::{Embedding, PointSet, PrimeId, SpectralPoset};
use crate::thomason::{ThomasonFiltration, ThomasonSet};

/// Label of the closed point in the two-point template poset.
pub const TEMPLATE_CLOSED: &str = "m";
/// Label of the generic point in the two-point template poset.
pub const TEMPLATE_GENERIC: &str = "(0)";

/// The chain `(0) < m` on which default filtrations are written. A value
/// `∅`, `{m}` or full is read on `↓m` as `∅`, `{m}` or all of `↓m`.
pub fn template_poset() -> Arc<SpectralPoset> {
    Arc::new(
        SpectralPoset::new(&[TEMPLATE_GENERIC, TEMPLATE_CLOSED], &[(TEMPLATE_GENERIC, TEMPLATE_CLOSED)])
            .expect("two-point chain"),
    )
}

pub(crate) fn instantiate_template(template: &ThomasonFiltration, local: &Arc<SpectralPoset>, top: usize) -> Result<ThomasonFiltration> {
    let tp = template.poset();
    if tp.len() != 2 || tp.index_of(TEMPLATE_CLOSED).is_err() || tp.index_of(TEMPLATE_GENERIC).is_err() {
        return Err(Error::invalid("default template must live on the chain (0) < m"));
    }
    let closed = tp.index_of(TEMPLATE_CLOSED)?;
    let map = |s: PointSet| {
        if s == tp.full() {
            local.full()
        } else if s.contains(closed) {
            PointSet::singleton(top)
        } else {
            PointSet::EMPTY
        }
    };
    let steps = template.steps().iter().map(|&(c, s)| (c, map(s))).collect();
    ThomasonFiltration::from_steps(local.clone(), map(template.low_tail()), steps)
}

#[derive(Clone, Debug)]
struct Local<T> {
    point: usize,
    embedding: Embedding,
    value: T,
}

/// Outcome of testing condition (†) at one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibilityReport {
    pub degree: i64,
    pub dagger_holds: bool,
    /// First violation `(m, m', p)` in label order.
    pub violating_pair: Option<(PrimeId, PrimeId, PrimeId)>,
    /// Whether the union of the local images is an up-set.
    pub glued_thomason: bool,
}

/// Both sides of the set-level equivalence for one family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub condition_i: bool,
    pub condition_ii: bool,
    pub union: PointSet,
    pub ideal_union: PointSet,
}

impl LemmaReport {
    pub fn equivalent(&self) -> bool {
        self.condition_i == self.condition_ii
    }
}

/// One up-set on each localization at a maximal point.
#[derive(Clone, Debug)]
pub struct LocalSets {
    poset: Arc<SpectralPoset>,
    degree: i64,
    locals: Vec<Local<PointSet>>,
}

impl PartialEq for LocalSets {
    fn eq(&self, other: &Self) -> bool {
        *self.poset == *other.poset
            && self.locals.len() == other.locals.len()
            && self.locals.iter().zip(&other.locals).all(|(a, b)| a.point == b.point && a.value == b.value)
    }
}

fn localizations(poset: &Arc<SpectralPoset>) -> Result<Vec<(usize, Arc<SpectralPoset>, Embedding)>> {
    poset
        .maximal_points()
        .iter()
        .map(|m| {
            let (local, emb) = poset.localization(poset.label(m).as_str())?;
            Ok((m, local, emb))
        })
        .collect()
}

impl LocalSets {
    /// `X ↦ {X ∩ ↓m}`.
    pub fn localize(x: &ThomasonSet) -> Result<Self> {
        let poset = x.poset().clone();
        let locals = localizations(&poset)?
            .into_iter()
            .map(|(point, _, embedding)| {
                let value = embedding.preimage(x.members());
                Local { point, embedding, value }
            })
            .collect();
        Ok(LocalSets { poset, degree: 0, locals })
    }

    /// Sets given by label lists on each localization; maximal points that
    /// are not mentioned get `∅`.
    pub fn from_labels(poset: Arc<SpectralPoset>, sets: &BTreeMap<String, Vec<String>>) -> Result<Self> {
        let maximal = poset.maximal_points();
        for key in sets.keys() {
            let i = poset.index_of(key)?;
            if !maximal.contains(i) {
                return Err(Error::invalid(format!("{key} is not a maximal point")));
            }
        }
        let mut locals = Vec::new();
        for (point, local, embedding) in localizations(&poset)? {
            let value = match sets.get(poset.label(point).as_str()) {
                Some(labels) => local.point_set(labels)?,
                None => PointSet::EMPTY,
            };
            if !local.is_thomason(value)? {
                return Err(Error::NotThomason(local.format_set(value)));
            }
            locals.push(Local { point, embedding, value });
        }
        Ok(LocalSets { poset, degree: 0, locals })
    }

    /// Local values in the order of `poset.maximal_points()`, each a subset
    /// of the corresponding localization.
    pub fn from_values(poset: Arc<SpectralPoset>, values: &[PointSet]) -> Result<Self> {
        let locs = localizations(&poset)?;
        if locs.len() != values.len() {
            return Err(Error::invalid("one local set per maximal point is required"));
        }
        let mut locals = Vec::new();
        for ((point, local, embedding), &value) in locs.into_iter().zip(values) {
            if !local.is_thomason(value)? {
                return Err(Error::NotThomason(local.format_set(value)));
            }
            locals.push(Local { point, embedding, value });
        }
        Ok(LocalSets { poset, degree: 0, locals })
    }

    pub fn poset(&self) -> &Arc<SpectralPoset> {
        &self.poset
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// `(m, X(m))` with `X(m)` on the localization at `m`.
    pub fn entries(&self) -> impl Iterator<Item = (&PrimeId, &Embedding, PointSet)> {
        self.locals.iter().map(|l| (self.poset.label(l.point), &l.embedding, l.value))
    }

    pub fn get(&self, m: &str) -> Option<PointSet> {
        let i = self.poset.index_of(m).ok()?;
        self.locals.iter().find(|l| l.point == i).map(|l| l.value)
    }

    fn images(&self) -> Vec<PointSet> {
        self.locals
            .iter()
            .map(|l| l.embedding.star_image(l.value).expect("local value lies in its localization"))
            .collect()
    }

    /// `⋃ X(m)*`, without any compatibility check.
    pub fn union_of_images(&self) -> PointSet {
        self.images().into_iter().fold(PointSet::EMPTY, PointSet::union)
    }

    pub fn check_dagger(&self) -> CompatibilityReport {
        let images = self.images();
        let mut violating_pair = None;
        'pairs: for (a, la) in self.locals.iter().enumerate() {
            for (b, lb) in self.locals.iter().enumerate().skip(a + 1) {
                let down_a = self.poset.down_of(la.point);
                let down_b = self.poset.down_of(lb.point);
                if down_a.intersection(down_b).is_empty() {
                    continue;
                }
                let left = images[a].intersection(down_b);
                let right = images[b].intersection(down_a);
                let diff = left.difference(right).union(right.difference(left));
                if let Some(p) = diff.iter().next() {
                    violating_pair = Some((
                        self.poset.label(la.point).clone(),
                        self.poset.label(lb.point).clone(),
                        self.poset.label(p).clone(),
                    ));
                    break 'pairs;
                }
            }
        }
        let union = images.into_iter().fold(PointSet::EMPTY, PointSet::union);
        CompatibilityReport {
            degree: self.degree,
            dagger_holds: violating_pair.is_none(),
            violating_pair,
            glued_thomason: self.poset.closure_unchecked(union) == union,
        }
    }

    /// `⋃ X(m)*` once (†) holds.
    pub fn glue(&self) -> Result<ThomasonSet> {
        let report = self.check_dagger();
        if let Some((m, m2, p)) = report.violating_pair {
            return Err(Error::IncompatibleFamily {
                degree: self.degree,
                left: m.to_string(),
                right: m2.to_string(),
                prime: p.to_string(),
            });
        }
        let union = self.union_of_images();
        if !report.glued_thomason {
            return Err(Error::Internal(format!(
                "glued set {} is not an up-set although (†) holds",
                self.poset.format_set(union)
            )));
        }
        ThomasonSet::new(self.poset.clone(), union)
    }

    /// Compares (†) plus Thomason-ness of the union with the description
    /// through principal closed sets `↑g` lying locally inside the family.
    pub fn lemma_equiv(&self) -> LemmaReport {
        let report = self.check_dagger();
        let union = self.union_of_images();
        let images = self.images();
        let mut ideal_union = PointSet::EMPTY;
        for g in 0..self.poset.len() {
            let up = self.poset.up_of(g);
            let inside = self.locals.iter().zip(&images).all(|(l, &img)| {
                up.intersection(self.poset.down_of(l.point)).is_subset(img)
            });
            if inside {
                ideal_union = ideal_union.union(up);
            }
        }
        LemmaReport {
            condition_i: report.dagger_holds && report.glued_thomason,
            condition_ii: union == ideal_union,
            union,
            ideal_union,
        }
    }
}

/// A Thomason filtration on each localization at a maximal point.
#[derive(Clone, Debug)]
pub struct LocalFamily {
    poset: Arc<SpectralPoset>,
    locals: Vec<Local<ThomasonFiltration>>,
}

impl PartialEq for LocalFamily {
    fn eq(&self, other: &Self) -> bool {
        *self.poset == *other.poset
            && self.locals.len() == other.locals.len()
            && self.locals.iter().zip(&other.locals).all(|(a, b)| a.point == b.point && a.value == b.value)
    }
}

impl LocalFamily {
    /// Materializes a family on a finite poset: exceptions are taken as
    /// given, every other maximal point receives the default template.
    pub fn new(
        poset: Arc<SpectralPoset>,
        default: Option<&ThomasonFiltration>,
        exceptions: &BTreeMap<String, ThomasonFiltration>,
    ) -> Result<Self> {
        let maximal = poset.maximal_points();
        for key in exceptions.keys() {
            let i = poset.index_of(key)?;
            if !maximal.contains(i) {
                return Err(Error::invalid(format!("exception key {key} is not a maximal point")));
            }
        }
        let mut locals = Vec::new();
        for (point, local, embedding) in localizations(&poset)? {
            let label = poset.label(point).as_str();
            let value = match exceptions.get(label) {
                Some(f) => {
                    if **f.poset() != *local {
                        return Err(Error::invalid(format!(
                            "exception at {label} does not live on the localization at {label}"
                        )));
                    }
                    ThomasonFiltration::from_steps(local.clone(), f.low_tail(), f.steps().to_vec())?
                }
                None => {
                    let template = default.ok_or_else(|| {
                        Error::invalid(format!("no default and no exception for maximal point {label}"))
                    })?;
                    let top = local.index_of(label)?;
                    instantiate_template(template, &local, top)?
                }
            };
            locals.push(Local { point, embedding, value });
        }
        Ok(LocalFamily { poset, locals })
    }

    /// Local filtrations in the order of `poset.maximal_points()`.
    pub fn from_filtrations(poset: Arc<SpectralPoset>, filtrations: Vec<ThomasonFiltration>) -> Result<Self> {
        let locs = localizations(&poset)?;
        if locs.len() != filtrations.len() {
            return Err(Error::invalid("one local filtration per maximal point is required"));
        }
        let mut locals = Vec::new();
        for ((point, local, embedding), f) in locs.into_iter().zip(filtrations) {
            if **f.poset() != *local {
                return Err(Error::invalid(format!(
                    "filtration for {} does not live on its localization",
                    poset.label(point)
                )));
            }
            let value = ThomasonFiltration::from_steps(local, f.low_tail(), f.steps().to_vec())?;
            locals.push(Local { point, embedding, value });
        }
        Ok(LocalFamily { poset, locals })
    }

    /// `F ↦ {F restricted to ↓m}`.
    pub fn localize(f: &ThomasonFiltration) -> Result<Self> {
        let poset = f.poset().clone();
        let locals = localizations(&poset)?
            .into_iter()
            .map(|(point, _, embedding)| {
                let value = f.pull_back(&embedding)?;
                Ok(Local { point, embedding, value })
            })
            .collect::<Result<_>>()?;
        Ok(LocalFamily { poset, locals })
    }

    pub fn poset(&self) -> &Arc<SpectralPoset> {
        &self.poset
    }

    pub fn entries(&self) -> impl Iterator<Item = (&PrimeId, &ThomasonFiltration)> {
        self.locals.iter().map(|l| (self.poset.label(l.point), &l.value))
    }

    pub fn get(&self, m: &str) -> Option<&ThomasonFiltration> {
        let i = self.poset.index_of(m).ok()?;
        self.locals.iter().find(|l| l.point == i).map(|l| &l.value)
    }

    pub fn level(&self, n: i64) -> LocalSets {
        LocalSets {
            poset: self.poset.clone(),
            degree: n,
            locals: self
                .locals
                .iter()
                .map(|l| Local { point: l.point, embedding: l.embedding.clone(), value: l.value.at(n) })
                .collect(),
        }
    }

    pub fn check_dagger(&self, n: i64) -> CompatibilityReport {
        self.level(n).check_dagger()
    }

    pub fn check_lemma_equiv(&self, n: i64) -> LemmaReport {
        self.level(n).lemma_equiv()
    }

    /// Degrees that determine every local filtration.
    pub fn sample_degrees(&self) -> Vec<i64> {
        let mut changes: Vec<i64> =
            self.locals.iter().flat_map(|l| l.value.steps().iter().map(|&(c, _)| c)).collect();
        changes.sort_unstable();
        changes.dedup();
        match changes.first() {
            Some(&first) => std::iter::once(first - 1).chain(changes).collect(),
            None => vec![0],
        }
    }

    /// First degree where (†) fails, if any.
    pub fn first_violation(&self) -> Option<CompatibilityReport> {
        self.sample_degrees()
            .into_iter()
            .map(|n| self.check_dagger(n))
            .find(|r| !r.dagger_holds)
    }

    /// Degreewise gluing.
    pub fn glue(&self) -> Result<ThomasonFiltration> {
        let degrees = self.sample_degrees();
        let mut values = Vec::with_capacity(degrees.len());
        for &n in &degrees {
            values.push((n, self.level(n).glue()?.members()));
        }
        let low_tail = values[0].1;
        ThomasonFiltration::from_steps(self.poset.clone(), low_tail, values[1..].to_vec())
    }
}
