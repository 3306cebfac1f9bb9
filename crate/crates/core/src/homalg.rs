//! Bounded complexes over finite rings, Koszul complexes, cohomology and
//! derived Hom out of perfect complexes.
//!
//! Degrees are cohomological. A term `X^n = R^{g_n} / rowspace(A_n)` and the
//! differential `d^n : X^n → X^{n+1}` is a `g_n × g_{n+1}` matrix acting on
//! row vectors.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::spectral_poset::PointSet;
use crate::rings::matrix::{self, Mat};
use crate::rings::{Elem, FiniteModule, FiniteRing, GMat, Ideal};

#[derive(Clone, Debug, PartialEq)]
pub struct BoundedComplex {
    ring: Arc<FiniteRing>,
    lo: i64,
    terms: Vec<FiniteModule>,
    diffs: Vec<GMat>,
}

fn sign(ring: &FiniteRing, m: &GMat, negative: bool) -> GMat {
    if negative {
        m.scale(ring, &ring.from_int(-1))
    } else {
        m.clone()
    }
}

impl BoundedComplex {
    /// `terms[i]` sits in degree `lo + i`; `diffs[i]` goes from degree
    /// `lo + i` to `lo + i + 1`.
    pub fn new(ring: Arc<FiniteRing>, lo: i64, terms: Vec<FiniteModule>, diffs: Vec<GMat>) -> Result<Self> {
        let c = Self::new_unchecked(ring, lo, terms, diffs)?;
        c.validate()?;
        Ok(c)
    }

    fn new_unchecked(ring: Arc<FiniteRing>, lo: i64, terms: Vec<FiniteModule>, diffs: Vec<GMat>) -> Result<Self> {
        if diffs.len() + 1 != terms.len().max(1) {
            return Err(Error::invalid("a complex needs one differential between consecutive terms"));
        }
        for t in &terms {
            if **t.ring() != *ring {
                return Err(Error::RingMismatch("complex terms over different rings".into()));
            }
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.rows() != terms[i].generators() || d.cols() != terms[i + 1].generators() {
                return Err(Error::invalid(format!(
                    "differential in degree {} has shape {}x{}, expected {}x{}",
                    lo + i as i64,
                    d.rows(),
                    d.cols(),
                    terms[i].generators(),
                    terms[i + 1].generators()
                )));
            }
        }
        Ok(BoundedComplex { ring, lo, terms, diffs })
    }

    fn validate(&self) -> Result<()> {
        let ring = &self.ring;
        for (i, d) in self.diffs.iter().enumerate() {
            let n = self.lo + i as i64;
            let src = self.terms[i].relations();
            let dst = self.terms[i + 1].relations();
            for (f, r) in ring.factors().iter().enumerate() {
                let image = src.part(f).mul(r, d.part(f));
                if !matrix::rowspace_contains(r, dst.part(f), &image) {
                    return Err(Error::invalid(format!("differential in degree {n} is not well defined")));
                }
                if let Some(next) = self.diffs.get(i + 1) {
                    let dd = d.part(f).mul(r, next.part(f));
                    if !matrix::rowspace_contains(r, self.terms[i + 2].relations().part(f), &dd) {
                        return Err(Error::invalid(format!("d∘d is nonzero starting in degree {n}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn zero(ring: Arc<FiniteRing>) -> Self {
        BoundedComplex { ring, lo: 0, terms: Vec::new(), diffs: Vec::new() }
    }

    /// `M[-n]`: the module concentrated in degree `n`.
    pub fn stalk(module: FiniteModule, n: i64) -> Self {
        BoundedComplex { ring: module.ring().clone(), lo: n, terms: vec![module], diffs: Vec::new() }
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    /// Degrees carrying a term, `None` for the zero complex.
    pub fn range(&self) -> Option<(i64, i64)> {
        if self.terms.is_empty() {
            None
        } else {
            Some((self.lo, self.lo + self.terms.len() as i64 - 1))
        }
    }

    pub fn term(&self, n: i64) -> Option<&FiniteModule> {
        if n < self.lo {
            return None;
        }
        self.terms.get((n - self.lo) as usize)
    }

    pub fn generators_at(&self, n: i64) -> usize {
        self.term(n).map_or(0, |t| t.generators())
    }

    /// `d^n`, the zero matrix outside the stored range.
    pub fn differential(&self, n: i64) -> GMat {
        if n >= self.lo {
            if let Some(d) = self.diffs.get((n - self.lo) as usize) {
                return d.clone();
            }
        }
        GMat::zeros(&self.ring, self.generators_at(n), self.generators_at(n + 1))
    }

    fn relations_at(&self, n: i64) -> GMat {
        match self.term(n) {
            Some(t) => t.relations().clone(),
            None => GMat::zeros(&self.ring, 0, 0),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(FiniteModule::is_zero)
    }

    /// Invariant factors of `H^n` per local factor.
    pub fn cohomology_parts(&self, n: i64) -> Vec<Vec<u32>> {
        let ring = &self.ring;
        let g = self.generators_at(n);
        if g == 0 {
            return vec![Vec::new(); ring.num_factors()];
        }
        let a_n = self.relations_at(n);
        let a_next = self.relations_at(n + 1);
        let d_n = self.differential(n);
        let d_prev = self.differential(n - 1);
        ring.factors()
            .iter()
            .enumerate()
            .map(|(f, r)| {
                let z = if self.generators_at(n + 1) == 0 {
                    Mat::identity(r, g)
                } else {
                    matrix::preimage(r, d_n.part(f), a_next.part(f))
                };
                let b = d_prev.part(f).vstack(a_n.part(f));
                matrix::quotient_parts(r, &z, &b)
            })
            .collect()
    }

    pub fn cohomology(&self, n: i64) -> FiniteModule {
        FiniteModule::from_parts(self.ring.clone(), &self.cohomology_parts(n)).expect("valid exponents")
    }

    pub fn support_of_cohomology(&self, n: i64) -> PointSet {
        let parts = self.cohomology_parts(n);
        self.ring.points_of_factors((0..parts.len()).filter(|&f| !parts[f].is_empty()))
    }

    /// Whether every cohomology module of `self` and `other` agrees up to
    /// isomorphism.
    pub fn same_cohomology(&self, other: &BoundedComplex) -> bool {
        let degrees = span(self.range(), other.range());
        *self.ring == *other.ring
            && degrees.is_none_or(|(a, b)| (a..=b).all(|n| self.cohomology_parts(n) == other.cohomology_parts(n)))
    }

    /// `X[k]` with `X[k]^n = X^{n+k}` and differentials scaled by `(-1)^k`.
    pub fn shift(&self, k: i64) -> BoundedComplex {
        let neg = k.rem_euclid(2) == 1;
        BoundedComplex {
            ring: self.ring.clone(),
            lo: self.lo - k,
            terms: self.terms.clone(),
            diffs: self.diffs.iter().map(|d| sign(&self.ring, d, neg)).collect(),
        }
    }

    pub fn direct_sum(&self, other: &BoundedComplex) -> Result<BoundedComplex> {
        if *self.ring != *other.ring {
            return Err(Error::RingMismatch("direct sum of complexes over different rings".into()));
        }
        let Some((a, b)) = span(self.range(), other.range()) else {
            return Ok(BoundedComplex::zero(self.ring.clone()));
        };
        let zero = FiniteModule::zero(self.ring.clone());
        let mut terms = Vec::new();
        let mut diffs = Vec::new();
        for n in a..=b {
            let x = self.term(n).unwrap_or(&zero);
            let y = other.term(n).unwrap_or(&zero);
            terms.push(x.direct_sum(y)?);
            if n < b {
                diffs.push(self.differential(n).block_diag(&other.differential(n)));
            }
        }
        Ok(BoundedComplex { ring: self.ring.clone(), lo: a, terms, diffs })
    }

    /// The component at factor `f`, over the local ring.
    pub fn project(&self, local: &Arc<FiniteRing>, f: usize) -> Result<BoundedComplex> {
        let terms = self.terms.iter().map(|t| t.project(local.clone(), f)).collect::<Result<Vec<_>>>()?;
        let diffs = self.diffs.iter().map(|d| d.project(f)).collect();
        Ok(BoundedComplex { ring: local.clone(), lo: self.lo, terms, diffs })
    }

    /// A complex over the local factor `f` of `ring`, viewed over `ring`.
    pub fn restrict_scalars(&self, ring: &Arc<FiniteRing>, f: usize) -> Result<BoundedComplex> {
        check_local(&self.ring, ring, f)?;
        let terms = self.terms.iter().map(|t| t.restrict_scalars(ring, f)).collect::<Result<Vec<_>>>()?;
        let diffs = self.diffs.iter().map(|d| GMat::lift_from_factor(ring, d.part(0), f)).collect();
        Ok(BoundedComplex { ring: ring.clone(), lo: self.lo, terms, diffs })
    }

    pub fn to_json(&self) -> Value {
        let mut terms = Map::new();
        let mut diffs = Map::new();
        for (i, t) in self.terms.iter().enumerate() {
            let n = self.lo + i as i64;
            let entry = if t.relations().rows() == 0 {
                json!({ "free": t.generators() })
            } else {
                json!({ "generators": t.generators(), "relations": self.ring.matrix_to_json(t.relations()) })
            };
            terms.insert(n.to_string(), entry);
            if let Some(d) = self.diffs.get(i) {
                diffs.insert(n.to_string(), self.ring.matrix_to_json(d));
            }
        }
        json!({ "ring": self.ring.descriptor(), "terms": terms, "differentials": diffs })
    }

    pub fn from_json(v: &Value) -> Result<BoundedComplex> {
        let ring_v = v.get("ring").ok_or_else(|| Error::parse("ring", "missing ring"))?;
        let desc = serde_json::from_value(ring_v.clone()).map_err(|e| Error::parse("ring", e.to_string()))?;
        Self::from_json_with_ring(v, FiniteRing::new(desc)?)
    }

    pub fn from_json_with_ring(v: &Value, ring: Arc<FiniteRing>) -> Result<BoundedComplex> {
        let terms_v = v
            .get("terms")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::parse("terms", "expected an object keyed by degree"))?;
        let mut terms: BTreeMap<i64, FiniteModule> = BTreeMap::new();
        for (k, t) in terms_v {
            let n: i64 = k.parse().map_err(|_| Error::parse(format!("terms.{k}"), "degree keys must be integers"))?;
            let module = if let Some(free) = t.get("free") {
                let g = free.as_u64().ok_or_else(|| Error::parse(format!("terms.{k}.free"), "expected a rank"))?;
                FiniteModule::free(ring.clone(), g as usize)
            } else {
                FiniteModule::from_json_with_ring(t, ring.clone()).map_err(|e| match e {
                    Error::Parse { path, message } => Error::parse(format!("terms.{k}.{path}"), message),
                    other => other,
                })?
            };
            terms.insert(n, module);
        }
        let diffs_v = match v.get("differentials") {
            None => Map::new(),
            Some(d) => d.as_object().cloned().ok_or_else(|| Error::parse("differentials", "expected an object"))?,
        };
        let (lo, hi) = match (terms.keys().next(), terms.keys().next_back()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => {
                if !diffs_v.is_empty() {
                    return Err(Error::parse("differentials", "differentials given for a complex without terms"));
                }
                return Ok(BoundedComplex::zero(ring));
            }
        };
        let zero = FiniteModule::zero(ring.clone());
        let all_terms: Vec<FiniteModule> = (lo..=hi).map(|n| terms.get(&n).cloned().unwrap_or_else(|| zero.clone())).collect();
        let mut diffs = Vec::new();
        for n in lo..hi {
            let (g0, g1) = (all_terms[(n - lo) as usize].generators(), all_terms[(n - lo + 1) as usize].generators());
            let d = match diffs_v.get(&n.to_string()) {
                Some(m) => {
                    let d = ring.parse_matrix(m, Some(g1)).map_err(|e| Error::parse(format!("differentials.{n}"), e.to_string()))?;
                    if d.rows() != g0 {
                        return Err(Error::parse(format!("differentials.{n}"), format!("expected {g0} rows")));
                    }
                    d
                }
                None => GMat::zeros(&ring, g0, g1),
            };
            diffs.push(d);
        }
        for k in diffs_v.keys() {
            let n: i64 = k.parse().map_err(|_| Error::parse(format!("differentials.{k}"), "degree keys must be integers"))?;
            if n < lo || n >= hi {
                return Err(Error::parse(format!("differentials.{k}"), "differential outside the term range"));
            }
        }
        BoundedComplex::new(ring, lo, all_terms, diffs)
    }
}

fn span(a: Option<(i64, i64)>, b: Option<(i64, i64)>) -> Option<(i64, i64)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some((a0, a1)), Some((b0, b1))) => Some((a0.min(b0), a1.max(b1))),
    }
}

fn check_local(local: &FiniteRing, ring: &FiniteRing, f: usize) -> Result<()> {
    if local.num_factors() != 1 || f >= ring.num_factors() || local.factor(0) != ring.factor(f) {
        return Err(Error::RingMismatch(format!("{} is not a local factor of {}", local.descriptor(), ring.descriptor())));
    }
    Ok(())
}


/// A bounded complex of finitely generated projectives. Each generator of
/// a term spans `e R` for an idempotent `e`, recorded as the set of local
/// factors where it lives; free generators live everywhere.
#[derive(Clone, Debug, PartialEq)]
pub struct PerfectComplex {
    ring: Arc<FiniteRing>,
    lo: i64,
    masks: Vec<Vec<Vec<bool>>>,
    diffs: Vec<GMat>,
}

impl PerfectComplex {
    /// A complex of free modules of the given ranks.
    pub fn free(ring: Arc<FiniteRing>, lo: i64, ranks: &[usize], diffs: Vec<GMat>) -> Result<Self> {
        let nf = ring.num_factors();
        let masks = ranks.iter().map(|&r| vec![vec![true; nf]; r]).collect();
        Self::new(ring, lo, masks, diffs)
    }

    pub fn new(ring: Arc<FiniteRing>, lo: i64, masks: Vec<Vec<Vec<bool>>>, diffs: Vec<GMat>) -> Result<Self> {
        let c = PerfectComplex { ring, lo, masks, diffs };
        c.as_bounded()?;
        Ok(c)
    }

    pub fn zero(ring: Arc<FiniteRing>) -> Self {
        PerfectComplex { ring, lo: 0, masks: Vec::new(), diffs: Vec::new() }
    }

    pub fn from_bounded(c: &BoundedComplex) -> Result<Self> {
        let mut ranks = Vec::new();
        for t in &c.terms {
            if !t.relations().is_zero() {
                return Err(Error::invalid("derived Hom needs a complex of free modules as its source"));
            }
            ranks.push(t.generators());
        }
        Self::free(c.ring.clone(), c.lo, &ranks, c.diffs.clone())
    }

    /// `K(x)`: `R →·x R` in degrees `-1, 0`.
    pub fn koszul_one(ring: &Arc<FiniteRing>, x: &Elem) -> Self {
        let d = ring.mat_from_elems(&[vec![x.clone()]], 1);
        Self::free(ring.clone(), -1, &[1, 1], vec![d]).expect("two-term complex")
    }

    /// `K(x_1, ..., x_n) = K(x_1) ⊗ ... ⊗ K(x_n)`.
    pub fn koszul(ring: &Arc<FiniteRing>, xs: &[Elem]) -> Result<Self> {
        let (first, rest) = xs.split_first().ok_or_else(|| Error::invalid("Koszul complex of an empty sequence"))?;
        let mut k = Self::koszul_one(ring, first);
        for x in rest {
            k = k.tensor_free(&Self::koszul_one(ring, x))?;
        }
        Ok(k)
    }

    /// `K(I)` on the principal generator of `I`.
    pub fn koszul_of_ideal(ring: &Arc<FiniteRing>, i: &Ideal) -> Self {
        Self::koszul_one(ring, &ring.ideal_generator(i))
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn range(&self) -> Option<(i64, i64)> {
        if self.masks.is_empty() {
            None
        } else {
            Some((self.lo, self.lo + self.masks.len() as i64 - 1))
        }
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.masks.iter().map(Vec::len).collect()
    }

    fn rank_at(&self, n: i64) -> usize {
        if n < self.lo {
            return 0;
        }
        self.masks.get((n - self.lo) as usize).map_or(0, Vec::len)
    }

    fn masks_at(&self, n: i64) -> &[Vec<bool>] {
        if n < self.lo {
            return &[];
        }
        self.masks.get((n - self.lo) as usize).map_or(&[], |m| m.as_slice())
    }

    pub fn differential(&self, n: i64) -> GMat {
        if n >= self.lo {
            if let Some(d) = self.diffs.get((n - self.lo) as usize) {
                return d.clone();
            }
        }
        GMat::zeros(&self.ring, self.rank_at(n), self.rank_at(n + 1))
    }

    fn idempotent_relations(ring: &FiniteRing, masks: &[Vec<bool>]) -> GMat {
        let n = masks.len();
        let mut rel = GMat::zeros(ring, n, n);
        for (j, mask) in masks.iter().enumerate() {
            let off: Vec<usize> = (0..ring.num_factors()).filter(|&f| !mask[f]).collect();
            rel.set(j, j, &ring.idempotent(&off));
        }
        rel
    }

    /// The same complex as a presented bounded complex.
    pub fn as_bounded(&self) -> Result<BoundedComplex> {
        let terms = self
            .masks
            .iter()
            .map(|m| FiniteModule::new(self.ring.clone(), m.len(), Self::idempotent_relations(&self.ring, m)))
            .collect::<Result<Vec<_>>>()?;
        BoundedComplex::new(self.ring.clone(), self.lo, terms, self.diffs.clone())
    }

    pub fn shift(&self, k: i64) -> PerfectComplex {
        let neg = k.rem_euclid(2) == 1;
        PerfectComplex {
            ring: self.ring.clone(),
            lo: self.lo - k,
            masks: self.masks.clone(),
            diffs: self.diffs.iter().map(|d| sign(&self.ring, d, neg)).collect(),
        }
    }

    pub fn direct_sum(&self, other: &PerfectComplex) -> Result<PerfectComplex> {
        if *self.ring != *other.ring {
            return Err(Error::RingMismatch("direct sum of complexes over different rings".into()));
        }
        let Some((a, b)) = span(self.range(), other.range()) else {
            return Ok(PerfectComplex::zero(self.ring.clone()));
        };
        let mut masks = Vec::new();
        let mut diffs = Vec::new();
        for n in a..=b {
            let mut m = self.masks_at(n).to_vec();
            m.extend_from_slice(other.masks_at(n));
            masks.push(m);
            if n < b {
                diffs.push(self.differential(n).block_diag(&other.differential(n)));
            }
        }
        Ok(PerfectComplex { ring: self.ring.clone(), lo: a, masks, diffs })
    }

    /// Tensor product of two complexes of free modules, blocks of
    /// `(P ⊗ Q)^n` ordered by the degree of the `P` factor.
    pub fn tensor_free(&self, other: &PerfectComplex) -> Result<PerfectComplex> {
        let ring = &self.ring;
        if *ring != other.ring {
            return Err(Error::RingMismatch("tensor of complexes over different rings".into()));
        }
        if self.masks.iter().chain(&other.masks).flatten().any(|m| m.iter().any(|&b| !b)) {
            return Err(Error::unsupported("tensor products of non-free perfect complexes"));
        }
        let (Some((a0, a1)), Some((b0, b1))) = (self.range(), other.range()) else {
            return Ok(PerfectComplex::zero(ring.clone()));
        };
        let lo = a0 + b0;
        let hi = a1 + b1;
        // block layout of each total degree: (a, offset)
        let layout = |n: i64| -> Vec<(i64, usize, usize)> {
            let mut out = Vec::new();
            let mut off = 0;
            for a in a0..=a1 {
                let b = n - a;
                let size = self.rank_at(a) * other.rank_at(b);
                if size > 0 {
                    out.push((a, off, size));
                    off += size;
                }
            }
            out
        };
        let total = |n: i64| layout(n).iter().map(|&(_, _, s)| s).sum::<usize>();
        let ranks: Vec<usize> = (lo..=hi).map(total).collect();
        let mut diffs = Vec::new();
        for n in lo..hi {
            let mut d = GMat::zeros(ring, total(n), total(n + 1));
            let src = layout(n);
            let dst = layout(n + 1);
            let find = |a: i64| dst.iter().find(|&&(x, _, _)| x == a).map(|&(_, off, _)| off);
            for &(a, off, _) in &src {
                let b = n - a;
                let qb = other.rank_at(b);
                // d(p ⊗ q) = dp ⊗ q, into block a + 1
                if let Some(doff) = find(a + 1) {
                    let dp = self.differential(a);
                    let qb_next = other.rank_at(b);
                    for i in 0..self.rank_at(a) {
                        for i2 in 0..self.rank_at(a + 1) {
                            let e = dp.entry(i, i2);
                            if ring.is_zero(&e) {
                                continue;
                            }
                            for j in 0..qb {
                                d.set(off + i * qb + j, doff + i2 * qb_next + j, &e);
                            }
                        }
                    }
                }
                // (-1)^a p ⊗ dq, into block a
                if let Some(doff) = find(a) {
                    let dq = sign(ring, &other.differential(b), a.rem_euclid(2) == 1);
                    let qb_next = other.rank_at(b + 1);
                    for i in 0..self.rank_at(a) {
                        for j in 0..qb {
                            for j2 in 0..qb_next {
                                let e = dq.entry(j, j2);
                                if !ring.is_zero(&e) {
                                    d.set(off + i * qb + j, doff + i * qb_next + j2, &e);
                                }
                            }
                        }
                    }
                }
            }
            diffs.push(d);
        }
        Self::free(ring.clone(), lo, &ranks, diffs)
    }

    /// The component at factor `f` over the local ring; generators that do
    /// not live at `f` are dropped.
    pub fn project(&self, local: &Arc<FiniteRing>, f: usize) -> Result<PerfectComplex> {
        check_local(local, &self.ring, f)?;
        let keep: Vec<Vec<usize>> =
            self.masks.iter().map(|m| (0..m.len()).filter(|&j| m[j][f]).collect()).collect();
        let masks = keep.iter().map(|k| vec![vec![true]; k.len()]).collect();
        let diffs = self
            .diffs
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let m = d.part(f);
                let mut out = Mat::zeros(keep[i].len(), keep[i + 1].len());
                for (a, &r) in keep[i].iter().enumerate() {
                    for (b, &c) in keep[i + 1].iter().enumerate() {
                        out.set(a, b, m.get(r, c));
                    }
                }
                GMat::from_parts(vec![out])
            })
            .collect();
        Ok(PerfectComplex { ring: local.clone(), lo: self.lo, masks, diffs })
    }

    /// A perfect complex over the local factor `f` of `ring`, viewed over
    /// `ring`: each generator becomes `e_f R`.
    pub fn restrict_scalars(&self, ring: &Arc<FiniteRing>, f: usize) -> Result<PerfectComplex> {
        check_local(&self.ring, ring, f)?;
        let nf = ring.num_factors();
        let masks = self
            .masks
            .iter()
            .map(|m| m.iter().map(|_| (0..nf).map(|g| g == f).collect()).collect())
            .collect();
        let diffs = self.diffs.iter().map(|d| GMat::lift_from_factor(ring, d.part(0), f)).collect();
        Ok(PerfectComplex { ring: ring.clone(), lo: self.lo, masks, diffs })
    }

    pub fn to_json(&self) -> Value {
        let b = self.as_bounded().expect("valid perfect complex");
        b.to_json()
    }
}

/// `Hom(P^n, Y^q)` as a presented module: generator `(j, t)` sends the
/// `j`-th generator of `P^n` to the `t`-th generator of `Y^q`.
fn hom_block(ring: &FiniteRing, masks: &[Vec<bool>], y: &FiniteModule) -> GMat {
    let gy = y.generators();
    let n = masks.len() * gy;
    let mut rel = GMat::zeros(ring, 0, n);
    let a = y.relations();
    for (j, mask) in masks.iter().enumerate() {
        let mut block = GMat::zeros(ring, a.rows(), n);
        for r in 0..a.rows() {
            for t in 0..gy {
                block.set(r, j * gy + t, &a.entry(r, t));
            }
        }
        rel = rel.vstack(&block);
        let off: Vec<usize> = (0..ring.num_factors()).filter(|&f| !mask[f]).collect();
        if !off.is_empty() {
            let e = ring.idempotent(&off);
            let mut kill = GMat::zeros(ring, gy, n);
            for t in 0..gy {
                kill.set(t, j * gy + t, &e);
            }
            rel = rel.vstack(&kill);
        }
    }
    rel
}

/// Total Hom complex restricted to degrees `[i - 1, i + 1]`.
fn hom_complex_window(p: &PerfectComplex, y: &BoundedComplex, i: i64) -> Result<BoundedComplex> {
    let ring = p.ring();
    let (Some((a, b)), Some(_)) = (p.range(), y.range()) else {
        return Ok(BoundedComplex::zero(ring.clone()));
    };
    let zero = FiniteModule::zero(ring.clone());
    // blocks of Tot^N: n in [a, b] with Hom(P^n, Y^{n+N})
    let blocks = |nn: i64| -> Vec<(i64, usize, usize)> {
        let mut out = Vec::new();
        let mut off = 0;
        for n in a..=b {
            let size = p.rank_at(n) * y.generators_at(n + nn);
            if size > 0 {
                out.push((n, off, size));
                off += size;
            }
        }
        out
    };
    let degrees = [i - 1, i, i + 1];
    let mut terms = Vec::new();
    for &nn in &degrees {
        let bl = blocks(nn);
        let width: usize = bl.iter().map(|&(_, _, s)| s).sum();
        let mut rel = GMat::zeros(ring, 0, width);
        for &(n, off, size) in &bl {
            let yq = y.term(n + nn).unwrap_or(&zero);
            let h = hom_block(ring, p.masks_at(n), yq);
            let mut placed = GMat::zeros(ring, h.rows(), width);
            for r in 0..h.rows() {
                for c in 0..size {
                    placed.set(r, off + c, &h.entry(r, c));
                }
            }
            rel = rel.vstack(&placed);
        }
        terms.push(FiniteModule::new(ring.clone(), width, rel)?);
    }
    let mut diffs = Vec::new();
    for &nn in &degrees[..2] {
        let src = blocks(nn);
        let dst = blocks(nn + 1);
        let width_src: usize = src.iter().map(|&(_, _, s)| s).sum();
        let width_dst: usize = dst.iter().map(|&(_, _, s)| s).sum();
        let mut d = GMat::zeros(ring, width_src, width_dst);
        let find = |n: i64| dst.iter().find(|&&(x, _, _)| x == n).map(|&(_, off, _)| off);
        for &(n, off, _) in &src {
            let gy = y.generators_at(n + nn);
            let gp = p.rank_at(n);
            // d_Y ∘ f : block n of Tot^N to block n of Tot^{N+1}
            if let Some(doff) = find(n) {
                let dy = y.differential(n + nn);
                let gy_next = y.generators_at(n + nn + 1);
                for j in 0..gp {
                    for t in 0..gy {
                        for t2 in 0..gy_next {
                            let e = dy.entry(t, t2);
                            if !ring.is_zero(&e) {
                                d.set(off + j * gy + t, doff + j * gy_next + t2, &e);
                            }
                        }
                    }
                }
            }
            // -(-1)^N f ∘ d_P : block n of Tot^N to block n - 1 of Tot^{N+1}
            if let Some(doff) = find(n - 1) {
                let dp = sign(ring, &p.differential(n - 1), nn.rem_euclid(2) == 0);
                let gp_prev = p.rank_at(n - 1);
                for l in 0..gp {
                    for j in 0..gp_prev {
                        let e = dp.entry(j, l);
                        if ring.is_zero(&e) {
                            continue;
                        }
                        for t in 0..gy {
                            d.set(off + l * gy + t, doff + j * gy + t, &e);
                        }
                    }
                }
            }
        }
        diffs.push(d);
    }
    BoundedComplex::new(ring.clone(), i - 1, terms, diffs)
}

/// `H^i(Tot Hom(P, Y)) = Hom_{D(R)}(P, Y[i])` invariant factors.
pub fn derived_hom_parts(p: &PerfectComplex, y: &BoundedComplex, i: i64) -> Result<Vec<Vec<u32>>> {
    if *p.ring() != *y.ring() {
        return Err(Error::RingMismatch(format!(
            "source over {} but target over {}",
            p.ring().descriptor(),
            y.ring().descriptor()
        )));
    }
    Ok(hom_complex_window(p, y, i)?.cohomology_parts(i))
}

pub fn derived_hom(p: &PerfectComplex, y: &BoundedComplex, i: i64) -> Result<FiniteModule> {
    let parts = derived_hom_parts(p, y, i)?;
    FiniteModule::from_parts(p.ring().clone(), &parts)
}

/// `log_q` of `|Hom_{D(R)}(P, Y[i])|` summed over factors, zero iff the
/// group vanishes.
pub fn derived_hom_size_log(p: &PerfectComplex, y: &BoundedComplex, i: i64) -> Result<u32> {
    Ok(derived_hom_parts(p, y, i)?.iter().flatten().sum())
}

/// `|Hom_{D(R)}(P, Y[i])|`.
pub fn derived_hom_order(p: &PerfectComplex, y: &BoundedComplex, i: i64) -> Result<u128> {
    let parts = derived_hom_parts(p, y, i)?;
    Ok(p.ring().factors().iter().zip(&parts).map(|(r, ps)| (r.q() as u128).pow(ps.iter().sum())).product())
}

/// `Y ⊗ R_m` over the local ring at `m`; equal to the colocalization on a
/// finite ring.
pub fn localize_complex(y: &BoundedComplex, m: &str) -> Result<(BoundedComplex, Arc<FiniteRing>, usize)> {
    let (local, f) = y.ring().localize(m)?;
    Ok((y.project(&local, f)?, local, f))
}

pub fn colocalize_complex(y: &BoundedComplex, m: &str) -> Result<(BoundedComplex, Arc<FiniteRing>, usize)> {
    localize_complex(y, m)
}

pub fn localize_perfect(p: &PerfectComplex, m: &str) -> Result<(PerfectComplex, Arc<FiniteRing>, usize)> {
    let (local, f) = p.ring().localize(m)?;
    Ok((p.project(&local, f)?, local, f))
}
