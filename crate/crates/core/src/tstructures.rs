//! Compactly generated t-structures on `D(R)` for a finite ring `R`, given
//! by Thomason filtrations of `Spec R`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gluing::LocalFamily;
use crate::homalg::{self, BoundedComplex, PerfectComplex};
use crate::spectral_poset::{PointSet, SpectralPoset};
use crate::rings::{FiniteModule, FiniteRing, Ideal};
use crate::thomason::ThomasonFiltration;

/// Length of the Koszul complexes used as compact generators. Every ideal
/// of a finite ring is principal, so one generator suffices.
pub const KOSZUL_LENGTH: i64 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct TStructureDescriptor {
    ring: Arc<FiniteRing>,
    filtration: ThomasonFiltration,
}

impl TStructureDescriptor {
    pub fn new(ring: Arc<FiniteRing>, filtration: ThomasonFiltration) -> Result<Self> {
        if **filtration.poset() != **ring.spec() {
            return Err(Error::invalid(format!(
                "filtration does not live on Spec {}",
                ring.descriptor()
            )));
        }
        Ok(TStructureDescriptor { ring, filtration })
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn filtration(&self) -> &ThomasonFiltration {
        &self.filtration
    }

    fn check_ring(&self, ring: &FiniteRing) -> Result<()> {
        if *ring != *self.ring {
            return Err(Error::RingMismatch(format!(
                "complex over {} but t-structure over {}",
                ring.descriptor(),
                self.ring.descriptor()
            )));
        }
        Ok(())
    }
}

/// `Supp H^n(X) ⊆ X_n` for every `n`.
pub fn aisle_membership(x: &BoundedComplex, t: &TStructureDescriptor) -> Result<bool> {
    t.check_ring(x.ring())?;
    let Some((lo, hi)) = x.range() else {
        return Ok(true);
    };
    Ok((lo..=hi).all(|n| x.support_of_cohomology(n).is_subset(t.filtration.at(n))))
}

/// For a fixed `Y`: every pair `(n, V(I))` with `Hom(K(I), Y[n]) ≠ 0`.
/// Membership in any coaisle then reduces to subset checks.
#[derive(Clone, Debug, PartialEq)]
pub struct CoaisleProfile {
    pub window: Option<(i64, i64)>,
    pub obstructions: Vec<(i64, Ideal, PointSet)>,
}

impl CoaisleProfile {
    pub fn new(y: &BoundedComplex) -> Result<Self> {
        let ring = y.ring();
        let Some((lo, hi)) = y.range() else {
            return Ok(CoaisleProfile { window: None, obstructions: Vec::new() });
        };
        let window = (lo - KOSZUL_LENGTH, hi + KOSZUL_LENGTH);
        let mut obstructions = Vec::new();
        for ideal in ring.ideals() {
            let v = ring.v_points(&ideal);
            let k = PerfectComplex::koszul_of_ideal(ring, &ideal);
            for n in window.0..=window.1 {
                if homalg::derived_hom_size_log(&k, y, n)? > 0 {
                    obstructions.push((n, ideal.clone(), v));
                }
            }
        }
        Ok(CoaisleProfile { window: Some(window), obstructions })
    }

    pub fn admits(&self, f: &ThomasonFiltration) -> bool {
        self.obstructions.iter().all(|&(n, _, v)| !v.is_subset(f.at(n)))
    }

    /// The first `(n, I)` with `V(I) ⊆ X_n` and a nonzero Hom, if any.
    pub fn witness(&self, f: &ThomasonFiltration) -> Option<(i64, &Ideal)> {
        self.obstructions.iter().find(|&&(n, _, v)| v.is_subset(f.at(n))).map(|(n, i, _)| (*n, i))
    }
}

/// `Hom(K(I), Y[n]) = 0` for every ideal `I` and degree `n` with
/// `V(I) ⊆ X_n`.
pub fn coaisle_membership(y: &BoundedComplex, t: &TStructureDescriptor) -> Result<bool> {
    t.check_ring(y.ring())?;
    Ok(CoaisleProfile::new(y)?.admits(&t.filtration))
}

/// `κ(p)[-n] ∈ U`, cross-checked against `p ∈ X_n`.
pub fn kappa_test(p: &str, n: i64, t: &TStructureDescriptor) -> Result<bool> {
    let f = t.ring.factor_of_label(p)?;
    let kappa = FiniteModule::residue_field(t.ring.clone(), f);
    let verdict = aisle_membership(&BoundedComplex::stalk(kappa, n), t)?;
    let expected = t.filtration.at(n).contains(t.ring.point_of_factor(f));
    if verdict != expected {
        return Err(Error::Internal(format!(
            "κ({p})[{}] aisle verdict {verdict} disagrees with membership of {p} in X_{n}",
            -n
        )));
    }
    Ok(verdict)
}

/// Moves a filtration onto an isomorphic poset with the same point order.
fn transport(f: &ThomasonFiltration, target: &Arc<SpectralPoset>) -> Result<ThomasonFiltration> {
    let source = f.poset();
    let same = source.len() == target.len()
        && (0..source.len()).all(|a| (0..source.len()).all(|b| source.leq(a, b) == target.leq(a, b)));
    if !same {
        return Err(Error::invalid("posets are not isomorphic in index order"));
    }
    ThomasonFiltration::from_steps(target.clone(), f.low_tail(), f.steps().to_vec())
}

/// The t-structure on `D(R_m)` cut out by `X ∩ ↓m`.
pub fn localize_tstructure(t: &TStructureDescriptor, m: &str) -> Result<TStructureDescriptor> {
    let (local, _) = t.ring.localize(m)?;
    let (restricted, _) = t.filtration.restrict(m)?;
    let f = transport(&restricted, local.spec())?;
    TStructureDescriptor::new(local, f)
}

/// The localized family, one descriptor per maximal ideal.
pub fn localize_family(t: &TStructureDescriptor) -> Result<BTreeMap<String, TStructureDescriptor>> {
    let spec = t.ring.spec();
    spec.maximal_points()
        .iter()
        .map(|i| {
            let m = spec.label(i).as_str();
            Ok((m.to_string(), localize_tstructure(t, m)?))
        })
        .collect()
}

/// Glues one local descriptor per maximal ideal back into a descriptor on
/// `ring`.
pub fn glue_tstructures(
    ring: &Arc<FiniteRing>,
    family: &BTreeMap<String, TStructureDescriptor>,
) -> Result<TStructureDescriptor> {
    let spec = ring.spec();
    let mut filtrations = Vec::new();
    for i in spec.maximal_points().iter() {
        let m = spec.label(i).as_str();
        let local = family.get(m).ok_or_else(|| Error::invalid(format!("no local t-structure at {m}")))?;
        let (expected, _) = ring.localize(m)?;
        if *local.ring != *expected {
            return Err(Error::RingMismatch(format!(
                "local t-structure at {m} lives over {}, expected {}",
                local.ring.descriptor(),
                expected.descriptor()
            )));
        }
        let (down, _) = spec.localization(m)?;
        filtrations.push(transport(&local.filtration, &down)?);
    }
    let glued = LocalFamily::from_filtrations(spec.clone(), filtrations)?.glue()?;
    TStructureDescriptor::new(ring.clone(), glued)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degeneracy {
    Nondegenerate,
    Stable,
    DegenerateOther,
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Degeneracy::Nondegenerate => "nondegenerate",
            Degeneracy::Stable => "stable",
            Degeneracy::DegenerateOther => "degenerate-other",
        })
    }
}

pub fn classify_degeneracy(t: &TStructureDescriptor) -> Degeneracy {
    classify_filtration(&t.filtration)
}

pub fn classify_filtration(f: &ThomasonFiltration) -> Degeneracy {
    if f.is_nondegenerate() {
        Degeneracy::Nondegenerate
    } else if f.is_constant() {
        Degeneracy::Stable
    } else {
        Degeneracy::DegenerateOther
    }
}
