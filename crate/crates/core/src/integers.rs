//! The symbolic adapter for `Spec Z`: the generic point `(0)` below every
//! maximal ideal `(p)`, of which there are infinitely many.
//!
//! Only what gluing over `mSpec Z` needs is supported: Thomason sets,
//! localizations at `(p)` (two-point chains), cyclic modules `Z/m`, and
//! families given by a default plus finitely many exceptions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gluing::{instantiate_template, template_poset, TEMPLATE_CLOSED};
use crate::rings::{factor_integer, is_prime};
use crate::spectral_poset::{PointSet, SpectralPoset};
use crate::thomason::ThomasonFiltration;

pub const GENERIC: &str = "(0)";

/// Primes in increasing order, computed lazily.
pub fn primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| is_prime(n))
}

pub fn prime_label(p: u64) -> String {
    format!("({p})")
}

/// Parses `"(p)"` or `"p"` for a prime `p`.
pub fn parse_prime(label: &str) -> Result<u64> {
    let inner = label.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(label);
    match inner.trim().parse::<u64>() {
        Ok(p) if is_prime(p) => Ok(p),
        Ok(0) => Err(Error::invalid("(0) is not a maximal ideal of Z")),
        _ => Err(Error::invalid(format!("{label} is not a maximal ideal of Z"))),
    }
}

/// A Thomason subset of `Spec Z`: a set of maximal ideals, or everything.
/// Unions of infinitely many `V(p)` give cofinite sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ZSet {
    Finite(BTreeSet<u64>),
    Cofinite(BTreeSet<u64>),
    Full,
}

impl ZSet {
    pub fn empty() -> Self {
        ZSet::Finite(BTreeSet::new())
    }

    pub fn all_maximal() -> Self {
        ZSet::Cofinite(BTreeSet::new())
    }

    pub fn primes<I: IntoIterator<Item = u64>>(ps: I) -> Self {
        ZSet::Finite(ps.into_iter().collect())
    }

    /// `V(n)`.
    pub fn v_of(n: u64) -> Self {
        if n == 0 {
            ZSet::Full
        } else {
            ZSet::Finite(factor_integer(n).into_iter().map(|(p, _)| p).collect())
        }
    }

    pub fn contains_generic(&self) -> bool {
        matches!(self, ZSet::Full)
    }

    pub fn contains_prime(&self, p: u64) -> bool {
        match self {
            ZSet::Finite(s) => s.contains(&p),
            ZSet::Cofinite(s) => !s.contains(&p),
            ZSet::Full => true,
        }
    }

    pub fn is_subset(&self, other: &ZSet) -> bool {
        match (self, other) {
            (_, ZSet::Full) => true,
            (ZSet::Full, _) => false,
            (ZSet::Finite(a), ZSet::Finite(b)) => a.is_subset(b),
            (ZSet::Finite(a), ZSet::Cofinite(b)) => a.is_disjoint(b),
            (ZSet::Cofinite(_), ZSet::Finite(_)) => false,
            (ZSet::Cofinite(a), ZSet::Cofinite(b)) => b.is_subset(a),
        }
    }

    pub fn union(&self, other: &ZSet) -> ZSet {
        match (self, other) {
            (ZSet::Full, _) | (_, ZSet::Full) => ZSet::Full,
            (ZSet::Finite(a), ZSet::Finite(b)) => ZSet::Finite(a | b),
            (ZSet::Finite(a), ZSet::Cofinite(b)) | (ZSet::Cofinite(b), ZSet::Finite(a)) => {
                ZSet::Cofinite(b - a)
            }
            (ZSet::Cofinite(a), ZSet::Cofinite(b)) => ZSet::Cofinite(a & b),
        }
    }

    /// `X ∩ ↓(p)` on the chain `(0) < (p)`.
    pub fn localize(&self, p: u64) -> PointSet {
        if self.contains_generic() {
            PointSet::from_bits(0b11)
        } else if self.contains_prime(p) {
            PointSet::singleton(1)
        } else {
            PointSet::EMPTY
        }
    }

    /// Primes singled out by the description.
    pub fn mentioned(&self) -> BTreeSet<u64> {
        match self {
            ZSet::Finite(s) | ZSet::Cofinite(s) => s.clone(),
            ZSet::Full => BTreeSet::new(),
        }
    }

    fn template_value(&self) -> PointSet {
        match self {
            ZSet::Full => PointSet::from_bits(0b11),
            ZSet::Cofinite(_) => PointSet::singleton(1),
            ZSet::Finite(_) => PointSet::EMPTY,
        }
    }
}

fn list(s: &BTreeSet<u64>) -> String {
    s.iter().map(|&p| prime_label(p)).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for ZSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZSet::Finite(s) => write!(f, "{{{}}}", list(s)),
            ZSet::Cofinite(s) if s.is_empty() => f.write_str("mSpec Z"),
            ZSet::Cofinite(s) => write!(f, "mSpec Z \\ {{{}}}", list(s)),
            ZSet::Full => f.write_str("Spec Z"),
        }
    }
}

/// `Spec Z_(p)`: the chain `(0) < (p)`.
pub fn local_poset(p: u64) -> Result<Arc<SpectralPoset>> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    let top = prime_label(p);
    Ok(Arc::new(SpectralPoset::new(&[GENERIC, top.as_str()], &[(GENERIC, top.as_str())])?))
}

/// `Supp Z/m`.
pub fn support_of_cyclic(m: u64) -> ZSet {
    ZSet::v_of(m)
}

/// `κ(p)` as the cyclic module `Z/p`.
pub fn residue_field(label: &str) -> Result<u64> {
    if label.trim() == GENERIC {
        return Err(Error::unsupported("κ((0)) = Q is not a finite module"));
    }
    parse_prime(label)
}

/// A decreasing `Z`-indexed sequence of Thomason subsets of `Spec Z`, as a
/// step function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZFiltration {
    low_tail: ZSet,
    steps: Vec<(i64, ZSet)>,
}

impl ZFiltration {
    pub fn from_steps(low_tail: ZSet, mut steps: Vec<(i64, ZSet)>) -> Result<Self> {
        steps.sort_by_key(|s| s.0);
        if let Some(w) = steps.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::invalid(format!("degree {} assigned twice", w[0].0)));
        }
        let mut prev = low_tail.clone();
        let mut out: Vec<(i64, ZSet)> = Vec::new();
        for (n, s) in steps {
            if !s.is_subset(&prev) {
                return Err(Error::FiltrationOrder { degree: n, detail: format!("{s} ⊄ {prev}") });
            }
            if s != prev {
                out.push((n, s.clone()));
            }
            prev = s;
        }
        Ok(ZFiltration { low_tail, steps: out })
    }

    pub fn at(&self, n: i64) -> &ZSet {
        self.steps.iter().rev().find(|s| s.0 <= n).map_or(&self.low_tail, |s| &s.1)
    }

    pub fn low_tail(&self) -> &ZSet {
        &self.low_tail
    }

    pub fn steps(&self) -> &[(i64, ZSet)] {
        &self.steps
    }

    /// The localized family: default from the shape of each level, and an
    /// exception at every prime some level singles out.
    pub fn localize(&self) -> Result<ZFamily> {
        let tp = template_poset();
        let default = ThomasonFiltration::from_steps(
            tp,
            self.low_tail.template_value(),
            self.steps.iter().map(|(n, s)| (*n, s.template_value())).collect(),
        )?;
        let mut primes = self.low_tail.mentioned();
        for (_, s) in &self.steps {
            primes.extend(s.mentioned());
        }
        let mut exceptions = BTreeMap::new();
        for p in primes {
            let local = local_poset(p)?;
            let f = ThomasonFiltration::from_steps(
                local,
                self.low_tail.localize(p),
                self.steps.iter().map(|(n, s)| (*n, s.localize(p))).collect(),
            )?;
            exceptions.insert(p, f);
        }
        ZFamily::new(default, exceptions)
    }

    pub fn display(&self) -> String {
        let mut out = format!("…, {}", self.low_tail);
        for (n, s) in &self.steps {
            out.push_str(&format!(" | {n}: {s}"));
        }
        out.push_str(", …");
        out
    }
}

/// A family of filtrations on the localizations `Spec Z_(p)`, one per
/// prime: the default template everywhere except finitely many primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZFamily {
    default: ThomasonFiltration,
    exceptions: BTreeMap<u64, ThomasonFiltration>,
}

/// First failure of (†): the generic point is in the local set at one
/// prime but not at the other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZViolation {
    pub degree: i64,
    pub with_generic: u64,
    pub without_generic: u64,
}

impl ZFamily {
    /// Exceptions equal to the instantiated default are dropped.
    pub fn new(default: ThomasonFiltration, exceptions: BTreeMap<u64, ThomasonFiltration>) -> Result<Self> {
        if **default.poset() != *template_poset() {
            return Err(Error::invalid(format!("default must live on the chain (0) < {TEMPLATE_CLOSED}")));
        }
        let mut kept = BTreeMap::new();
        for (p, f) in exceptions {
            let local = local_poset(p)?;
            if **f.poset() != *local {
                return Err(Error::invalid(format!("exception at {} does not live on (0) < {}", prime_label(p), prime_label(p))));
            }
            if f != instantiate_template(&default, &local, 1)? {
                kept.insert(p, f);
            }
        }
        Ok(ZFamily { default, exceptions: kept })
    }

    pub fn default(&self) -> &ThomasonFiltration {
        &self.default
    }

    pub fn exceptions(&self) -> &BTreeMap<u64, ThomasonFiltration> {
        &self.exceptions
    }

    pub fn at(&self, p: u64) -> Result<ThomasonFiltration> {
        match self.exceptions.get(&p) {
            Some(f) => Ok(f.clone()),
            None => instantiate_template(&self.default, &local_poset(p)?, 1),
        }
    }

    /// A prime using the default, the least one not among the exceptions.
    fn default_prime(&self) -> u64 {
        primes().find(|p| !self.exceptions.contains_key(p)).expect("infinitely many primes")
    }

    pub fn sample_degrees(&self) -> Vec<i64> {
        let mut ds: BTreeSet<i64> = self.default.sample_degrees().into_iter().collect();
        for f in self.exceptions.values() {
            ds.extend(f.sample_degrees());
        }
        if ds.is_empty() {
            ds.insert(0);
        }
        ds.into_iter().collect()
    }

    /// Any two localizations share exactly the generic point, so (†)
    /// asks that all levels agree on it.
    pub fn check_dagger(&self, n: i64) -> Option<ZViolation> {
        let q = self.default_prime();
        let generic_default = self.default.at(n).contains(0);
        let mut with = generic_default.then_some(q);
        let mut without = (!generic_default).then_some(q);
        for (&p, f) in &self.exceptions {
            if f.at(n).contains(0) {
                with = Some(with.map_or(p, |w| w.min(p)));
            } else {
                without = Some(without.map_or(p, |w| w.min(p)));
            }
        }
        match (with, without) {
            (Some(a), Some(b)) => Some(ZViolation { degree: n, with_generic: a, without_generic: b }),
            _ => None,
        }
    }

    pub fn first_violation(&self) -> Option<ZViolation> {
        self.sample_degrees().into_iter().find_map(|n| self.check_dagger(n))
    }

    fn glue_level(&self, n: i64) -> Result<ZSet> {
        if let Some(v) = self.check_dagger(n) {
            return Err(Error::IncompatibleFamily {
                degree: n,
                left: prime_label(v.with_generic),
                right: prime_label(v.without_generic),
                prime: GENERIC.to_string(),
            });
        }
        let d = self.default.at(n);
        if d.contains(0) {
            return Ok(ZSet::Full);
        }
        let closed_default = d.contains(1);
        let odd: BTreeSet<u64> =
            self.exceptions.iter().filter(|(_, f)| f.at(n).contains(1) != closed_default).map(|(&p, _)| p).collect();
        Ok(if closed_default { ZSet::Cofinite(odd) } else { ZSet::Finite(odd) })
    }

    /// `⋃_p X(p)*` degreewise.
    pub fn glue(&self) -> Result<ZFiltration> {
        let degrees = self.sample_degrees();
        let low = self.glue_level(degrees[0])?;
        let steps = degrees[1..].iter().map(|&n| Ok((n, self.glue_level(n)?))).collect::<Result<Vec<_>>>()?;
        ZFiltration::from_steps(low, steps)
    }
}
