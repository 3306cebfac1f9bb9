//! Hereditary torsion pairs and cosilting modules over finite rings.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gluing::LocalSets;
use crate::homalg::BoundedComplex;
use crate::rings::matrix;
use crate::rings::{indecomposable_injectives, Elem, FiniteModule, FiniteRing, GMat, Ideal};
use crate::spectral_poset::PointSet;
use crate::thomason::{ThomasonFiltration, ThomasonSet};
use crate::tstructures::{coaisle_membership, TStructureDescriptor};

#[derive(Clone, Debug, PartialEq)]
pub struct TorsionPairDescriptor {
    ring: Arc<FiniteRing>,
    thomason: ThomasonSet,
}

impl TorsionPairDescriptor {
    pub fn new(ring: Arc<FiniteRing>, thomason: ThomasonSet) -> Result<Self> {
        if **thomason.poset() != **ring.spec() {
            return Err(Error::invalid(format!("Thomason set does not live on Spec {}", ring.descriptor())));
        }
        Ok(TorsionPairDescriptor { ring, thomason })
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn thomason(&self) -> &ThomasonSet {
        &self.thomason
    }

    pub fn is_torsion(&self, m: &FiniteModule) -> bool {
        is_torsion(m, &self.thomason)
    }

    pub fn is_torsionfree(&self, m: &FiniteModule) -> bool {
        is_torsionfree(m, &self.thomason)
    }
}

fn check_set(m: &FiniteModule, x: &ThomasonSet) {
    debug_assert!(**x.poset() == **m.ring().spec(), "Thomason set on a different spectrum");
}

/// The largest submodule supported in `X`. An element lies in it iff its
/// annihilator `I` has `V(I) ⊆ X`, which over a finite ring means its
/// components outside `X` vanish.
pub fn torsion_submodule(m: &FiniteModule, x: &ThomasonSet) -> FiniteModule {
    check_set(m, x);
    m.restrict_to_factors(&m.ring().factors_of_points(x.members()))
}

pub fn is_torsion(m: &FiniteModule, x: &ThomasonSet) -> bool {
    check_set(m, x);
    m.support().is_subset(x.members())
}

pub fn is_torsionfree(m: &FiniteModule, x: &ThomasonSet) -> bool {
    torsion_submodule(m, x).is_zero()
}

/// `⋃ V(I)` over the given torsion cyclics `R/I`.
pub fn thomason_of_torsion_class(ring: &Arc<FiniteRing>, ideals: &[Ideal]) -> ThomasonSet {
    let members = ideals.iter().fold(PointSet::EMPTY, |acc, i| acc.union(ring.v_points(i)));
    ThomasonSet::new(ring.spec().clone(), members).expect("unions of closed sets are closed")
}

/// The ideals `I` with `R/I` torsion for `X`.
pub fn torsion_cyclics(ring: &Arc<FiniteRing>, x: &ThomasonSet) -> Vec<Ideal> {
    ring.ideals()
        .into_iter()
        .filter(|i| is_torsion(&FiniteModule::cyclic(ring.clone(), i), x))
        .collect()
}

/// Indecomposable injectives with no `X`-torsion.
pub fn injective_class_of(ring: &Arc<FiniteRing>, x: &ThomasonSet) -> Result<Vec<FiniteModule>> {
    Ok(indecomposable_injectives(ring)?.into_iter().filter(|e| is_torsionfree(e, x)).collect())
}

/// The cyclics `R/I` with `Hom(R/I, E) = 0` for every `E` in the class.
pub fn cyclics_orthogonal_to(ring: &Arc<FiniteRing>, class: &[FiniteModule]) -> Vec<Ideal> {
    ring.ideals()
        .into_iter()
        .filter(|i| {
            let c = FiniteModule::cyclic(ring.clone(), i);
            class.iter().all(|e| c.hom_is_zero(e))
        })
        .collect()
}

/// Full below degree 0, `X0` in degree 0, empty above.
pub fn two_term_filtration(x0: &ThomasonSet) -> ThomasonFiltration {
    let poset = x0.poset().clone();
    ThomasonFiltration::new(poset.clone(), poset.full(), &[(0, x0.members())], PointSet::EMPTY)
        .expect("full ⊇ X0 ⊇ ∅")
}

/// Every isomorphism class of modules with `|M| <= bound`.
pub fn modules_up_to(ring: &Arc<FiniteRing>, bound: u128) -> Vec<FiniteModule> {
    let mut per_factor: Vec<Vec<(u128, Vec<u32>)>> = Vec::new();
    for r in ring.factors() {
        let mut list = Vec::new();
        let mut current = Vec::new();
        partitions(r.k(), r.q() as u128, 1, bound, &mut current, &mut list);
        per_factor.push(list);
    }
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    combine(&per_factor, 1, bound, &mut chosen, &mut |parts| {
        out.push(FiniteModule::from_parts(ring.clone(), parts).expect("valid exponents"));
    });
    out
}

fn partitions(max: u32, q: u128, size: u128, bound: u128, current: &mut Vec<u32>, out: &mut Vec<(u128, Vec<u32>)>) {
    out.push((size, current.clone()));
    let cap = current.last().copied().unwrap_or(max);
    for a in (1..=cap).rev() {
        let Some(next) = q.checked_pow(a).and_then(|s| s.checked_mul(size)) else {
            continue;
        };
        if next <= bound {
            current.push(a);
            partitions(max, q, next, bound, current, out);
            current.pop();
        }
    }
}

fn combine(
    per_factor: &[Vec<(u128, Vec<u32>)>],
    size: u128,
    bound: u128,
    chosen: &mut Vec<Vec<u32>>,
    emit: &mut dyn FnMut(&[Vec<u32>]),
) {
    let Some((first, rest)) = per_factor.split_first() else {
        emit(chosen);
        return;
    };
    for (s, parts) in first {
        if size * s <= bound {
            chosen.push(parts.clone());
            combine(rest, size * s, bound, chosen, emit);
            chosen.pop();
        }
    }
}

/// `0 → C → Q0 →η Q1` with `Q0`, `Q1` injective.
#[derive(Clone, Debug, PartialEq)]
pub struct CosiltingModule {
    ring: Arc<FiniteRing>,
    module: FiniteModule,
    q0: FiniteModule,
    q1: FiniteModule,
    eta: GMat,
}

/// Outcome of checking `B_η = Cogen(C)` on the test modules of order at
/// most `bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct CosiltingCheck {
    pub bound: u128,
    pub tested: usize,
    pub counterexample: Option<FiniteModule>,
}

impl CosiltingCheck {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Invariant factors of `ker(η: Q0 → Q1)` per local factor.
fn kernel_parts(ring: &FiniteRing, q0: &FiniteModule, q1: &FiniteModule, eta: &GMat) -> Vec<Vec<u32>> {
    ring.factors()
        .iter()
        .enumerate()
        .map(|(f, r)| {
            let z = matrix::preimage(r, eta.part(f), q1.relations().part(f));
            matrix::quotient_parts(r, &z, q0.relations().part(f))
        })
        .collect()
}

impl CosiltingModule {
    pub fn new(module: FiniteModule, q0: FiniteModule, q1: FiniteModule, eta: GMat) -> Result<Self> {
        let ring = module.ring().clone();
        if *q0.ring() != ring || *q1.ring() != ring {
            return Err(Error::RingMismatch("copresentation over a different ring".into()));
        }
        if eta.rows() != q0.generators() || eta.cols() != q1.generators() {
            return Err(Error::invalid(format!(
                "η has shape {}x{}, expected {}x{}",
                eta.rows(),
                eta.cols(),
                q0.generators(),
                q1.generators()
            )));
        }
        for (name, q) in [("q0", &q0), ("q1", &q1)] {
            if !q.is_injective() {
                return Err(Error::invalid(format!("{name} = {} fails Baer's criterion", q.describe())));
            }
        }
        for (f, r) in ring.factors().iter().enumerate() {
            let image = q0.relations().part(f).mul(r, eta.part(f));
            if !matrix::rowspace_contains(r, q1.relations().part(f), &image) {
                return Err(Error::invalid("η is not well defined on q0"));
            }
        }
        let kernel = FiniteModule::from_parts(ring.clone(), &kernel_parts(&ring, &q0, &q1, &eta))?;
        if !kernel.is_isomorphic(&module) {
            return Err(Error::invalid(format!(
                "ker η = {} is not isomorphic to the module {}",
                kernel.describe(),
                module.describe()
            )));
        }
        Ok(CosiltingModule { ring, module, q0, q1, eta })
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn module(&self) -> &FiniteModule {
        &self.module
    }

    pub fn q0(&self) -> &FiniteModule {
        &self.q0
    }

    pub fn q1(&self) -> &FiniteModule {
        &self.q1
    }

    pub fn eta(&self) -> &GMat {
        &self.eta
    }

    pub fn is_degenerate(&self) -> bool {
        self.module.is_zero()
    }

    /// `M ∈ B_η`: `Hom(M, Q0) → Hom(M, Q1)` is onto. Its kernel is
    /// `Hom(M, C)`, so onto-ness is a count.
    pub fn in_b_eta(&self, m: &FiniteModule) -> bool {
        let h0 = m.hom_log_orders(&self.q0);
        let h1 = m.hom_log_orders(&self.q1);
        let hc = m.hom_log_orders(&self.module);
        (0..h0.len()).all(|f| h0[f] == h1[f] + hc[f])
    }

    /// `M ∈ Cogen(C)`.
    pub fn in_cogen(&self, m: &FiniteModule) -> bool {
        cogenerated_by(m, &self.module)
    }

    pub fn check(&self, bound: u128) -> CosiltingCheck {
        let tests = modules_up_to(&self.ring, bound);
        let counterexample = tests.iter().find(|m| self.in_b_eta(m) != self.in_cogen(m)).cloned();
        CosiltingCheck { bound, tested: tests.len(), counterexample }
    }

    pub fn default_bound(&self) -> u128 {
        (self.ring.size() as u128).pow(2)
    }

    pub fn is_cosilting(&self) -> bool {
        self.check(self.default_bound()).holds()
    }

    /// `⋃ V(I)` over the ideals with `Hom(R/I, C) = 0`.
    pub fn thomason_set(&self) -> ThomasonSet {
        cosilting_thomason_of_module(&self.module)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": self.ring.descriptor(),
            "module": self.module.to_json(),
            "q0": self.q0.to_json(),
            "q1": self.q1.to_json(),
            "eta": self.ring.matrix_to_json(&self.eta),
        })
    }

    pub fn from_json(v: &Value) -> Result<CosiltingModule> {
        let ring_v = v.get("ring").ok_or_else(|| Error::parse("ring", "missing ring"))?;
        let desc = serde_json::from_value(ring_v.clone()).map_err(|e| Error::parse("ring", e.to_string()))?;
        let ring = FiniteRing::new(desc)?;
        let load = |key: &str| -> Result<FiniteModule> {
            let m = v.get(key).ok_or_else(|| Error::parse(key, "missing"))?;
            FiniteModule::from_json_with_ring(m, ring.clone()).map_err(|e| match e {
                Error::Parse { path, message } => Error::parse(format!("{key}.{path}"), message),
                other => other,
            })
        };
        let module = load("module")?;
        match (v.get("q0"), v.get("q1"), v.get("eta")) {
            (None, None, None) => search_copresentation(&module, None)?
                .ok_or_else(|| Error::invalid(format!("{} admits no cosilting copresentation", module.describe()))),
            (Some(_), Some(_), eta) => {
                let q0 = load("q0")?;
                let q1 = load("q1")?;
                let eta = match eta {
                    Some(e) => ring
                        .parse_matrix(e, Some(q1.generators()))
                        .map_err(|err| Error::parse("eta", err.to_string()))?,
                    None => GMat::zeros(&ring, q0.generators(), q1.generators()),
                };
                if eta.rows() != q0.generators() {
                    return Err(Error::parse("eta", format!("expected {} rows", q0.generators())));
                }
                CosiltingModule::new(module, q0, q1, eta)
            }
            _ => Err(Error::parse("q0", "q0 and q1 must be given together")),
        }
    }
}

/// `M` embeds in a finite power of `C`. Over a chain ring `R/π^a` embeds
/// in `R/π^c` iff `a <= c`, so this compares the largest invariant factors
/// factor by factor.
pub fn cogenerated_by(m: &FiniteModule, c: &FiniteModule) -> bool {
    (0..m.ring().num_factors()).all(|f| {
        let top_m = m.factor_parts(f).iter().copied().max().unwrap_or(0);
        let top_c = c.factor_parts(f).iter().copied().max().unwrap_or(0);
        top_m <= top_c
    })
}

pub fn cosilting_thomason_of_module(c: &FiniteModule) -> ThomasonSet {
    let ring = c.ring();
    let orthogonal: Vec<Ideal> =
        ring.ideals().into_iter().filter(|i| FiniteModule::cyclic(ring.clone(), i).hom_is_zero(c)).collect();
    thomason_of_torsion_class(ring, &orthogonal)
}

/// The largest `X0` for which `C[0]` lies in the coaisle of
/// `two_term_filtration(X0)`, computed through Koszul orthogonality.
pub fn two_term_level_of(c: &FiniteModule) -> Result<ThomasonSet> {
    let ring = c.ring();
    let y = BoundedComplex::stalk(c.clone(), 0);
    let admits = |s: PointSet| -> Result<bool> {
        let x0 = ThomasonSet::new(ring.spec().clone(), s)?;
        let t = TStructureDescriptor::new(ring.clone(), two_term_filtration(&x0))?;
        coaisle_membership(&y, &t)
    };
    let mut union = PointSet::EMPTY;
    let mut any = false;
    for s in ring.spec().up_sets() {
        if admits(s)? {
            union = union.union(s);
            any = true;
        }
    }
    if !any {
        return Err(Error::Internal("no two-term level admits C[0]".into()));
    }
    // admissible levels are closed under unions, so the union is the largest
    if !admits(union)? {
        return Err(Error::Internal(format!(
            "admissible levels have no largest element ({})",
            ring.spec().format_set(union)
        )));
    }
    ThomasonSet::new(ring.spec().clone(), union)
}

/// Searches copresentations `0 → C → Q0 →η Q1` with `Q0, Q1` sums of
/// indecomposable injectives of rank at most `rank_bound` per factor, up to
/// automorphisms of `Q0` and `Q1` (a diagonal `η`). The first cosilting
/// witness in order of increasing ranks is returned.
pub fn search_copresentation(c: &FiniteModule, rank_bound: Option<usize>) -> Result<Option<CosiltingModule>> {
    let ring = c.ring().clone();
    let nf = ring.num_factors();
    let max_parts = (0..nf).map(|f| c.factor_parts(f).len()).max().unwrap_or(0);
    let bound = rank_bound.unwrap_or(max_parts + 1);
    let mut per_factor = Vec::new();
    for f in 0..nf {
        let local = ring.localize(ring.factor_label(f).as_str())?.0;
        let local_c = c.project(local.clone(), f)?;
        let parts = c.factor_parts(f).to_vec();
        let k = ring.factor(f).k();
        let free = parts.iter().filter(|&&a| a == k).count();
        let torsion: Vec<u32> = parts.iter().copied().filter(|&a| a < k).collect();
        let mut found = None;
        'search: for r0 in parts.len()..=bound.max(parts.len()) {
            // r0 - parts.len() extra generators map isomorphically onto Q1
            let extra = r0 - parts.len();
            for r1 in (torsion.len() + extra)..=bound.max(torsion.len() + extra) {
                let cand = local_copresentation(&local, &local_c, &torsion, free, extra, r1)?;
                if cand.is_cosilting() {
                    found = Some(cand);
                    break 'search;
                }
            }
        }
        match found {
            Some(cand) => per_factor.push(cand),
            None => return Ok(None),
        }
    }
    let mut family = BTreeMap::new();
    for (f, m) in per_factor.into_iter().enumerate() {
        family.insert(ring.factor_label(f).as_str().to_string(), m);
    }
    glue_cosilting(&ring, &family).map(Some)
}

fn local_copresentation(
    local: &Arc<FiniteRing>,
    c: &FiniteModule,
    torsion: &[u32],
    free: usize,
    extra: usize,
    r1: usize,
) -> Result<CosiltingModule> {
    let r = local.factor(0);
    let r0 = free + torsion.len() + extra;
    let q0 = FiniteModule::free(local.clone(), r0);
    let q1 = FiniteModule::free(local.clone(), r1);
    let mut eta = GMat::zeros(local, r0, r1);
    // rows: free parts ↦ 0, torsion part π^a ↦ π^a, extra ↦ unit
    for (j, &a) in torsion.iter().enumerate() {
        eta.set(free + j, j, &Elem(vec![r.pi_pow(a)]));
    }
    for j in 0..extra {
        eta.set(free + torsion.len() + j, torsion.len() + j, &local.one());
    }
    CosiltingModule::new(c.clone(), q0, q1, eta)
}

/// `C ↦ {C^m}` by projection to the local factors.
pub fn components_of_cosilting(c: &CosiltingModule) -> Result<BTreeMap<String, CosiltingModule>> {
    let ring = &c.ring;
    let mut out = BTreeMap::new();
    for f in 0..ring.num_factors() {
        let label = ring.factor_label(f).as_str();
        let (local, lf) = ring.localize(label)?;
        debug_assert_eq!(lf, f);
        let m = CosiltingModule::new(
            c.module.project(local.clone(), f)?,
            c.q0.project(local.clone(), f)?,
            c.q1.project(local.clone(), f)?,
            c.eta.project(f),
        )?;
        out.insert(label.to_string(), m);
    }
    Ok(out)
}

/// `∏_m C(m)` with the copresentations combined factor by factor.
pub fn glue_cosilting(ring: &Arc<FiniteRing>, family: &BTreeMap<String, CosiltingModule>) -> Result<CosiltingModule> {
    if family.len() != ring.num_factors() {
        return Err(Error::invalid(format!(
            "expected one component per maximal ideal of {}, got {}",
            ring.descriptor(),
            family.len()
        )));
    }
    let mut module = FiniteModule::zero(ring.clone());
    let mut q0 = FiniteModule::zero(ring.clone());
    let mut q1 = FiniteModule::zero(ring.clone());
    let mut eta = GMat::zeros(ring, 0, 0);
    for f in 0..ring.num_factors() {
        let label = ring.factor_label(f).as_str();
        let comp = family.get(label).ok_or_else(|| Error::invalid(format!("no component at {label}")))?;
        let (expected, _) = ring.localize(label)?;
        if *comp.ring != *expected {
            return Err(Error::RingMismatch(format!(
                "component at {label} lives over {}, expected {}",
                comp.ring.descriptor(),
                expected.descriptor()
            )));
        }
        module = module.direct_sum(&comp.module.restrict_scalars(ring, f)?)?;
        q0 = q0.direct_sum(&comp.q0.restrict_scalars(ring, f)?)?;
        q1 = q1.direct_sum(&comp.q1.restrict_scalars(ring, f)?)?;
        eta = eta.block_diag(&GMat::lift_from_factor(ring, comp.eta.part(0), f));
    }
    CosiltingModule::new(module, q0, q1, eta)
}

/// Componentwise Thomason sets as a family on `Spec R`, glued.
pub fn glue_component_sets(ring: &Arc<FiniteRing>, family: &BTreeMap<String, CosiltingModule>) -> Result<ThomasonSet> {
    let spec = ring.spec();
    let mut values = Vec::new();
    for i in spec.maximal_points().iter() {
        let m = spec.label(i).as_str();
        let comp = family.get(m).ok_or_else(|| Error::invalid(format!("no component at {m}")))?;
        let local = comp.thomason_set();
        debug_assert_eq!(spec.localization(m)?.0.len(), local.poset().len());
        values.push(local.members());
    }
    let sets = LocalSets::from_values(spec.clone(), &values)?;
    let report = sets.check_dagger();
    if !report.dagger_holds {
        return Err(Error::Internal("componentwise Thomason sets fail (†)".into()));
    }
    sets.glue()
}

/// `Prod(C) = Prod(D)` on finite modules: each is a summand of a power of
/// the other, with powers at most `power_bound` (default `|D|` resp. `|C|`).
pub fn cosilting_equivalent(c: &FiniteModule, d: &FiniteModule, power_bound: Option<usize>) -> bool {
    summand_of_power(c, d, power_bound.unwrap_or_else(|| order_bound(d)))
        && summand_of_power(d, c, power_bound.unwrap_or_else(|| order_bound(c)))
}

fn order_bound(m: &FiniteModule) -> usize {
    usize::try_from(m.order()).unwrap_or(usize::MAX)
}

/// The least `k <= bound` with `C` a summand of `D^k`, by Krull–Schmidt
/// over the local factors.
pub fn power_needed(c: &FiniteModule, d: &FiniteModule) -> Option<usize> {
    let mut k = 0;
    for f in 0..c.ring().num_factors() {
        let mut counts: BTreeMap<u32, (usize, usize)> = BTreeMap::new();
        for &a in c.factor_parts(f) {
            counts.entry(a).or_default().0 += 1;
        }
        for &a in d.factor_parts(f) {
            counts.entry(a).or_default().1 += 1;
        }
        for (need, have) in counts.values() {
            if *need > 0 {
                if *have == 0 {
                    return None;
                }
                k = k.max(need.div_ceil(*have));
            }
        }
    }
    Some(k)
}

fn summand_of_power(c: &FiniteModule, d: &FiniteModule, bound: usize) -> bool {
    match power_needed(c, d) {
        Some(k) if k <= bound => d.power(k).has_summand(c),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> Arc<FiniteRing> {
        FiniteRing::zmod(n).unwrap()
    }

    fn cyc(r: &Arc<FiniteRing>, n: i64) -> FiniteModule {
        FiniteModule::new(r.clone(), 1, r.mat_from_elems(&[vec![r.from_int(n)]], 1)).unwrap()
    }

    fn set(r: &Arc<FiniteRing>, labels: &[&str]) -> ThomasonSet {
        ThomasonSet::from_labels(r.spec().clone(), labels).unwrap()
    }

    #[test]
    fn torsion_examples() {
        let r = z(12);
        let x = set(&r, &["(2)"]);
        let t = torsion_submodule(&FiniteModule::free(r.clone(), 1), &x);
        assert_eq!(t.describe(), "Z/4");
        assert_eq!(torsion_submodule(&cyc(&r, 0), &set(&r, &["(2)", "(3)"])).describe(), "Z/12");
        assert!(torsion_submodule(&cyc(&r, 0), &set(&r, &[])).is_zero());
        assert!(is_torsion(&cyc(&r, 4), &x));
        assert!(is_torsionfree(&cyc(&r, 3), &x));
        let z6 = cyc(&r, 6);
        assert!(!is_torsion(&z6, &x) && !is_torsionfree(&z6, &x));
    }

    #[test]
    fn torsion_class_examples() {
        let r = z(12);
        let two = r.parse_ideal(&json!(2)).unwrap();
        let four = r.parse_ideal(&json!(4)).unwrap();
        let six = r.parse_ideal(&json!(6)).unwrap();
        assert_eq!(thomason_of_torsion_class(&r, &[two, four]).labels(), vec!["(2)"]);
        assert_eq!(thomason_of_torsion_class(&r, &[six]).labels(), vec!["(2)", "(3)"]);
        assert!(thomason_of_torsion_class(&r, &[]).is_empty());
    }

    #[test]
    fn injective_class_examples() {
        let r = z(12);
        let d = |x: &ThomasonSet| injective_class_of(&r, x).unwrap().iter().map(FiniteModule::describe).collect::<Vec<_>>();
        assert_eq!(d(&set(&r, &["(2)"])), vec!["Z/3"]);
        assert_eq!(d(&set(&r, &[])), vec!["Z/4", "Z/3"]);
        assert!(d(&set(&r, &["(2)", "(3)"])).is_empty());
    }

    #[test]
    fn cosilting_examples() {
        let r = z(12);
        let c = CosiltingModule::new(cyc(&r, 3), cyc(&r, 3), cyc(&r, 4), GMat::zeros(&r, 1, 1)).unwrap();
        assert!(c.is_cosilting());
        assert_eq!(c.thomason_set().labels(), vec!["(2)"]);
        let full = cyc(&r, 4).direct_sum(&cyc(&r, 3)).unwrap();
        assert!(cosilting_thomason_of_module(&full).is_empty());
        assert!(cosilting_thomason_of_module(&FiniteModule::zero(r.clone())).is_full());
        assert_eq!(two_term_level_of(c.module()).unwrap(), c.thomason_set());
        // a wrong kernel is rejected
        assert!(CosiltingModule::new(cyc(&r, 4), cyc(&r, 3), cyc(&r, 4), GMat::zeros(&r, 1, 1)).is_err());
    }

    #[test]
    fn two_term_examples() {
        let r = z(12);
        let f = two_term_filtration(&set(&r, &["(2)"]));
        assert!(f.is_nondegenerate());
        assert_eq!(f.at(-1), r.spec().full());
        assert_eq!(r.spec().format_set(f.at(0)), "{(2)}");
        assert!(f.at(1).is_empty());
        assert!(two_term_filtration(&set(&r, &[])).is_nondegenerate());
    }

    #[test]
    fn split_and_glue() {
        let r = z(12);
        let full = cyc(&r, 4).direct_sum(&cyc(&r, 3)).unwrap();
        let c = search_copresentation(&full, None).unwrap().unwrap();
        let parts = components_of_cosilting(&c).unwrap();
        assert_eq!(parts["(2)"].module().describe(), "Z/4");
        assert_eq!(parts["(3)"].module().describe(), "Z/3");
        let back = glue_cosilting(&r, &parts).unwrap();
        assert!(cosilting_equivalent(back.module(), c.module(), None));
        assert!(back.thomason_set().is_empty());

        let z4 = z(4);
        let z3 = z(3);
        let zero = search_copresentation(&FiniteModule::zero(z4.clone()), None).unwrap().unwrap();
        let three = search_copresentation(&FiniteModule::free(z3.clone(), 1), None).unwrap().unwrap();
        let fam = BTreeMap::from([("(2)".to_string(), zero), ("(3)".to_string(), three)]);
        let glued = glue_cosilting(&r, &fam).unwrap();
        assert_eq!(glued.module().describe(), "Z/3");
        assert_eq!(glued.thomason_set().labels(), vec!["(2)"]);
        assert_eq!(glue_component_sets(&r, &fam).unwrap(), glued.thomason_set());
    }

    #[test]
    fn non_cosilting_has_no_witness() {
        let r = z(8);
        assert!(search_copresentation(&cyc(&r, 2), None).unwrap().is_none());
    }

    #[test]
    fn equivalence_examples() {
        let r = z(12);
        let z3 = cyc(&r, 3);
        assert!(cosilting_equivalent(&z3, &z3.power(2), None));
        let full = cyc(&r, 4).direct_sum(&z3).unwrap();
        assert!(!cosilting_equivalent(&z3, &full, None));
        let zero = FiniteModule::zero(r.clone());
        assert!(cosilting_equivalent(&zero, &zero, None));
        assert_eq!(power_needed(&z3.power(3), &z3), Some(3));
    }

    #[test]
    fn module_enumeration() {
        let r = z(12);
        let ms = modules_up_to(&r, 12);
        // 2-parts of size <= 12 (six) times 1, those of size <= 4 times Z/3, and Z/3 ⊕ Z/3
        assert_eq!(ms.len(), 11);
    }
}
