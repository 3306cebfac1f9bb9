//! Finitely presented modules over a finite ring.

use std::collections::HashSet;
use std::sync::Arc;

use serde_json::{json, Value};

use super::chain::ChainRing;
use super::matrix;
use super::{Elem, FiniteRing, GMat, Ideal};
use crate::error::{Error, Result};
use crate::spectral_poset::PointSet;

/// `M = R^g / rowspace(relations)` with its invariant factors cached per
/// local factor: `M_i ≅ ⊕_j R_i/π^{parts[i][j]}`, parts descending.
#[derive(Clone, Debug)]
pub struct FiniteModule {
    ring: Arc<FiniteRing>,
    gens: usize,
    relations: GMat,
    parts: Vec<Vec<u32>>,
}

impl PartialEq for FiniteModule {
    fn eq(&self, other: &Self) -> bool {
        *self.ring == *other.ring && self.gens == other.gens && self.relations == other.relations
    }
}

impl FiniteModule {
    pub fn new(ring: Arc<FiniteRing>, gens: usize, relations: GMat) -> Result<Self> {
        if relations.cols() != gens {
            return Err(Error::invalid(format!(
                "relation rows have {} entries but the module has {gens} generators",
                relations.cols()
            )));
        }
        let parts = ring
            .factors()
            .iter()
            .enumerate()
            .map(|(f, r)| matrix::cokernel_parts(r, relations.part(f)))
            .collect();
        Ok(FiniteModule { ring, gens, relations, parts })
    }

    pub fn free(ring: Arc<FiniteRing>, n: usize) -> Self {
        let rel = GMat::zeros(&ring, 0, n);
        Self::new(ring, n, rel).expect("free module")
    }

    pub fn zero(ring: Arc<FiniteRing>) -> Self {
        Self::free(ring, 0)
    }

    /// `R/I`.
    pub fn cyclic(ring: Arc<FiniteRing>, ideal: &Ideal) -> Self {
        let g = ring.ideal_generator(ideal);
        let rel = ring.mat_from_elems(&[vec![g]], 1);
        Self::new(ring, 1, rel).expect("cyclic module")
    }

    /// `⊕ R_i/π_i^a` over the given exponents, one generator per summand.
    pub fn from_parts(ring: Arc<FiniteRing>, parts: &[Vec<u32>]) -> Result<Self> {
        if parts.len() != ring.num_factors() {
            return Err(Error::invalid("one exponent list per local factor is required"));
        }
        let mut diag = Vec::new();
        for (f, ps) in parts.iter().enumerate() {
            let r = ring.factor(f);
            for &a in ps {
                if a > r.k() {
                    return Err(Error::invalid(format!("exponent {a} exceeds the nilpotency index {}", r.k())));
                }
                let mut e = ring.one();
                e.0[f] = r.pi_pow(a);
                diag.push(e);
            }
        }
        let n = diag.len();
        let rows: Vec<Vec<Elem>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { diag[i].clone() } else { ring.zero() }).collect())
            .collect();
        let rel = ring.mat_from_elems(&rows, n);
        Self::new(ring, n, rel)
    }

    /// `E(R/m)` for the maximal ideal of factor `f`: the local factor itself.
    pub fn local_injective(ring: Arc<FiniteRing>, f: usize) -> Self {
        let mut parts = vec![Vec::new(); ring.num_factors()];
        parts[f].push(ring.factor(f).k());
        Self::from_parts(ring, &parts).expect("valid exponents")
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn generators(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &GMat {
        &self.relations
    }

    pub fn parts(&self) -> &[Vec<u32>] {
        &self.parts
    }

    pub fn factor_parts(&self, f: usize) -> &[u32] {
        &self.parts[f]
    }

    /// `log_{q_i} |M_i|` per factor.
    pub fn log_orders(&self) -> Vec<u32> {
        self.parts.iter().map(|p| p.iter().sum()).collect()
    }

    pub fn order(&self) -> u128 {
        self.ring
            .factors()
            .iter()
            .zip(&self.parts)
            .map(|(r, p)| (r.q() as u128).pow(p.iter().sum()))
            .product()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|p| p.is_empty())
    }

    pub fn is_isomorphic(&self, other: &FiniteModule) -> bool {
        *self.ring == *other.ring && self.parts == other.parts
    }

    pub fn annihilator(&self) -> Ideal {
        Ideal { exps: self.parts.iter().map(|p| p.first().copied().unwrap_or(0)).collect() }
    }

    pub fn support(&self) -> PointSet {
        self.ring.points_of_factors((0..self.parts.len()).filter(|&f| !self.parts[f].is_empty()))
    }

    pub fn direct_sum(&self, other: &FiniteModule) -> Result<FiniteModule> {
        if *self.ring != *other.ring {
            return Err(Error::RingMismatch("direct sum of modules over different rings".into()));
        }
        let rel = self.relations.block_diag(&other.relations);
        FiniteModule::new(self.ring.clone(), self.gens + other.gens, rel)
    }

    pub fn power(&self, n: usize) -> FiniteModule {
        (0..n).fold(FiniteModule::zero(self.ring.clone()), |acc, _| acc.direct_sum(self).expect("same ring"))
    }

    /// `e M` for the idempotent supported on `factors`, presented on the
    /// same generators as `M / (1 - e) M`.
    pub fn restrict_to_factors(&self, factors: &[usize]) -> FiniteModule {
        let ring = &self.ring;
        let comp = ring.idempotent(&(0..ring.num_factors()).filter(|f| !factors.contains(f)).collect::<Vec<_>>());
        let kill = GMat::identity(ring, self.gens).scale(ring, &comp);
        FiniteModule::new(ring.clone(), self.gens, self.relations.vstack(&kill)).expect("same width")
    }

    /// The component at factor `f` as a module over the local ring.
    pub fn project(&self, local: Arc<FiniteRing>, f: usize) -> Result<FiniteModule> {
        if local.num_factors() != 1 || local.factor(0) != self.ring.factor(f) {
            return Err(Error::RingMismatch(format!(
                "{} is not the local factor {} of {}",
                local.descriptor(),
                f,
                self.ring.descriptor()
            )));
        }
        FiniteModule::new(local, self.gens, self.relations.project(f))
    }

    /// A module over the local factor `f` of `ring`, viewed over `ring`.
    pub fn restrict_scalars(&self, ring: &Arc<FiniteRing>, f: usize) -> Result<FiniteModule> {
        if self.ring.num_factors() != 1 || f >= ring.num_factors() || self.ring.factor(0) != ring.factor(f) {
            return Err(Error::RingMismatch(format!(
                "{} is not a local factor of {}",
                self.ring.descriptor(),
                ring.descriptor()
            )));
        }
        let lifted = GMat::lift_from_factor(ring, self.relations.part(0), f);
        let comp = ring.idempotent(&(0..ring.num_factors()).filter(|&g| g != f).collect::<Vec<_>>());
        let kill = GMat::identity(ring, self.gens).scale(ring, &comp);
        FiniteModule::new(ring.clone(), self.gens, lifted.vstack(&kill))
    }

    /// `R/m` for the prime of factor `f`.
    pub fn residue_field(ring: Arc<FiniteRing>, f: usize) -> FiniteModule {
        let mut exps = vec![0; ring.num_factors()];
        exps[f] = 1;
        FiniteModule::cyclic(ring, &Ideal { exps })
    }

    /// `log_{q_i} |Hom(M, N)_i|` per factor.
    pub fn hom_log_orders(&self, other: &FiniteModule) -> Vec<u32> {
        self.parts
            .iter()
            .zip(&other.parts)
            .map(|(a, b)| a.iter().map(|&x| b.iter().map(|&y| x.min(y)).sum::<u32>()).sum())
            .collect()
    }

    pub fn hom_order(&self, other: &FiniteModule) -> u128 {
        self.ring
            .factors()
            .iter()
            .zip(self.hom_log_orders(other))
            .map(|(r, e)| (r.q() as u128).pow(e))
            .product()
    }

    pub fn hom_is_zero(&self, other: &FiniteModule) -> bool {
        self.hom_log_orders(other).iter().all(|&e| e == 0)
    }

    /// Baer's criterion by element sweep: for every ideal `(a)`, each
    /// element killed by `ann(a)` is divisible by `a`. Ideals are products
    /// of local ideals, so the sweep runs factor by factor.
    pub fn is_injective(&self) -> bool {
        self.ring.factors().iter().zip(&self.parts).all(|(r, parts)| baer_local(r, parts))
    }

    /// Whether `other` is isomorphic to a direct summand of `self`.
    pub fn has_summand(&self, other: &FiniteModule) -> bool {
        self.parts.iter().zip(&other.parts).all(|(a, b)| multiset_contains(a, b))
    }

    /// Elements in presentation coordinates, one representative per class.
    pub fn elements(&self, limit: usize) -> Result<Vec<Vec<Elem>>> {
        if self.order() > limit as u128 {
            return Err(Error::unsupported(format!("listing a module with more than {limit} elements")));
        }
        let ring_elems = self.ring.elements();
        let ambient = (ring_elems.len() as u128).checked_pow(self.gens as u32).unwrap_or(u128::MAX);
        if ambient > 1 << 16 {
            return Err(Error::unsupported("listing elements of a module with a large free cover"));
        }
        let mut reps: Vec<Vec<Elem>> = Vec::new();
        let mut vec = vec![0usize; self.gens];
        loop {
            let x: Vec<Elem> = vec.iter().map(|&i| ring_elems[i].clone()).collect();
            if !reps.iter().any(|r| self.same_class(r, &x)) {
                reps.push(x);
            }
            let mut pos = 0;
            loop {
                if pos == self.gens {
                    return Ok(reps);
                }
                vec[pos] += 1;
                if vec[pos] == ring_elems.len() {
                    vec[pos] = 0;
                    pos += 1;
                } else {
                    break;
                }
            }
        }
    }

    fn same_class(&self, a: &[Elem], b: &[Elem]) -> bool {
        self.ring.factors().iter().enumerate().all(|(f, r)| {
            let diff: Vec<u64> = a.iter().zip(b).map(|(x, y)| r.sub(x.0[f], y.0[f])).collect();
            matrix::in_rowspace(r, self.relations.part(f), &diff)
        })
    }

    pub fn is_zero_element(&self, x: &[Elem]) -> bool {
        let zero = vec![self.ring.zero(); self.gens];
        self.same_class(x, &zero)
    }

    pub fn describe(&self) -> String {
        self.ring.describe_parts(&self.parts)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": self.ring.descriptor(),
            "generators": self.gens,
            "relations": self.ring.matrix_to_json(&self.relations),
            "structure": self.describe(),
            "order": self.order().to_string(),
        })
    }

    pub fn from_json(v: &Value) -> Result<FiniteModule> {
        let ring_v = v.get("ring").ok_or_else(|| Error::parse("ring", "missing ring"))?;
        let desc = serde_json::from_value(ring_v.clone()).map_err(|e| Error::parse("ring", e.to_string()))?;
        let ring = FiniteRing::new(desc)?;
        Self::from_json_with_ring(v, ring)
    }

    pub fn from_json_with_ring(v: &Value, ring: Arc<FiniteRing>) -> Result<FiniteModule> {
        let gens = match v.get("generators") {
            Some(g) => Some(g.as_u64().ok_or_else(|| Error::parse("generators", "expected an integer"))? as usize),
            None => None,
        };
        let rel_v = v.get("relations").cloned().unwrap_or(Value::Array(Vec::new()));
        let rel = ring.parse_matrix(&rel_v, gens).map_err(|e| Error::parse("relations", e.to_string()))?;
        let gens = match gens {
            Some(g) => g,
            None if rel.rows() > 0 => rel.cols(),
            None => return Err(Error::parse("generators", "a module without relations needs \"generators\"")),
        };
        FiniteModule::new(ring, gens, rel)
    }
}

pub(crate) fn multiset_contains(big: &[u32], small: &[u32]) -> bool {
    let mut pool = big.to_vec();
    for x in small {
        match pool.iter().position(|y| y == x) {
            Some(i) => {
                pool.swap_remove(i);
            }
            None => return false,
        }
    }
    true
}

/// Elements of `⊕ R/π^{a_j}` realized inside `R^n` through
/// `R/π^a ≅ π^{k-a} R`.
fn local_elements(r: &ChainRing, parts: &[u32]) -> Vec<Vec<u64>> {
    let coords: Vec<Vec<u64>> = parts
        .iter()
        .map(|&a| r.elements().filter(|&x| r.valuation(x) >= r.k() - a).collect())
        .collect();
    let mut out = vec![Vec::new()];
    for c in &coords {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u64>| {
                c.iter().map(move |&x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn baer_local(r: &ChainRing, parts: &[u32]) -> bool {
    let elems = local_elements(r, parts);
    let k = r.k();
    (0..=k).all(|e| {
        let a = r.pi_pow(e);
        let ann = r.pi_pow(k - e);
        let divisible: HashSet<Vec<u64>> = elems.iter().map(|y| y.iter().map(|&c| r.mul(a, c)).collect()).collect();
        elems
            .iter()
            .filter(|x| x.iter().all(|&c| r.mul(ann, c) == 0))
            .all(|x| divisible.contains(x))
    })
}

/// The indecomposable injectives `E(R/m)`, one per maximal ideal in label
/// order, each checked against Baer's criterion.
pub fn indecomposable_injectives(ring: &Arc<FiniteRing>) -> Result<Vec<FiniteModule>> {
    (0..ring.spec().len())
        .map(|pt| {
            let e = FiniteModule::local_injective(ring.clone(), ring.factor_of_point(pt));
            if e.is_injective() {
                Ok(e)
            } else {
                Err(Error::Internal(format!("E(R/{}) fails Baer's criterion", ring.spec().label(pt))))
            }
        })
        .collect()
}
