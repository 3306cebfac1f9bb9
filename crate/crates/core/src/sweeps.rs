//! Exhaustive and seeded property sweeps over the generated corpora.
//!
//! Each sweep returns a [`SweepReport`]; violations carry a JSON fixture
//! that replays the failing instance through the command-line tool.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::catalog;
use crate::error::Result;
use crate::formats;
use crate::gluing::{LocalFamily, LocalSets};
use crate::homalg::{self, BoundedComplex, PerfectComplex};
use crate::rings::{Elem, FiniteModule, FiniteRing};
use crate::spectral_poset::{PointSet, SpectralPoset};
use crate::thomason::{ThomasonFiltration, ThomasonSet};
use crate::torsion_cosilting as tc;
use crate::tstructures::{self, CoaisleProfile, TStructureDescriptor};

pub const DEFAULT_SEED: u64 = 20240611;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Violation {
    pub property: String,
    pub detail: String,
    pub fixture: Value,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SweepReport {
    pub name: String,
    /// Instances checked, in the unit named by the sweep.
    pub instances: usize,
    pub counters: BTreeMap<String, usize>,
    pub violations: Vec<Violation>,
}

impl SweepReport {
    fn new(name: &str) -> Self {
        SweepReport { name: name.to_string(), instances: 0, counters: BTreeMap::new(), violations: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn counter(&self, key: &str) -> usize {
        self.counters.get(key).copied().unwrap_or(0)
    }

    fn absorb(&mut self, part: Partial) {
        self.instances += part.instances;
        for (k, v) in part.counters {
            *self.counters.entry(k).or_default() += v;
        }
        self.violations.extend(part.violations);
    }

    fn from_parts(name: &str, parts: Vec<Partial>) -> Self {
        let mut r = SweepReport::new(name);
        for p in parts {
            r.absorb(p);
        }
        r
    }

    pub fn summary(&self) -> String {
        let counters: Vec<String> = self.counters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!(
            "{}: {} instances, {} violations{}",
            self.name,
            self.instances,
            self.violations.len(),
            if counters.is_empty() { String::new() } else { format!(" ({})", counters.join(", ")) }
        )
    }
}

#[derive(Default)]
struct Partial {
    instances: usize,
    counters: BTreeMap<String, usize>,
    violations: Vec<Violation>,
}

impl Partial {
    fn count(&mut self, key: &str, n: usize) {
        *self.counters.entry(key.to_string()).or_default() += n;
    }

    fn fail(&mut self, property: &str, detail: impl Into<String>, fixture: Value) {
        self.violations.push(Violation { property: property.to_string(), detail: detail.into(), fixture });
    }

    fn check(&mut self, ok: bool, property: &str, detail: impl FnOnce() -> String, fixture: impl FnOnce() -> Value) {
        if !ok {
            self.fail(property, detail(), fixture());
        }
    }
}

fn par_map<T: Sync, F: Fn(usize, &T) -> Partial + Sync>(items: &[T], f: F) -> Vec<Partial> {
    items.par_iter().enumerate().map(|(i, x)| f(i, x)).collect()
}

fn error_partial(property: &str, e: crate::Error, fixture: Value) -> Partial {
    let mut p = Partial::default();
    p.fail(property, e.to_string(), fixture);
    p
}

fn sets_fixture(poset: &Arc<SpectralPoset>, values: &[PointSet]) -> Value {
    let mut ex = Map::new();
    for (m, v) in poset.maximal_points().iter().zip(values) {
        let (local, _) = poset.localization(poset.label(m).as_str()).expect("maximal point");
        ex.insert(poset.label(m).as_str().to_string(), formats::set_to_json(&local, *v));
    }
    json!({ "poset": formats::poset_to_json(poset), "exceptions": ex })
}

fn set_fixture(x: &ThomasonSet) -> Value {
    json!({ "poset": formats::poset_to_json(x.poset()), "set": formats::set_to_json(x.poset(), x.members()) })
}

fn filtration_fixture(f: &ThomasonFiltration) -> Value {
    json!({ "poset": formats::poset_to_json(f.poset()), "filtration": formats::filtration_to_json(f) })
}

fn same_family(a: &LocalFamily, b: &LocalFamily) -> bool {
    a.entries().count() == b.entries().count() && a.entries().zip(b.entries()).all(|(x, y)| x.0 == y.0 && x.1 == y.1)
}

/// Set-level glue/localize bijection on every poset with at most
/// `max_poset` points.
pub fn gluing_sets(max_poset: usize) -> SweepReport {
    let posets = catalog::posets_up_to(max_poset);
    let parts = par_map(&posets, |_, poset| {
        let mut part = Partial::default();
        part.count("posets", 1);
        for s in poset.up_sets() {
            part.instances += 1;
            part.count("up_sets", 1);
            let x = ThomasonSet::new(poset.clone(), s).expect("up-set");
            match LocalSets::localize(&x).and_then(|l| l.glue()) {
                Ok(g) => part.check(g == x, "glue∘localize = id", || format!("{x} glued back to {g}"), || set_fixture(&x)),
                Err(e) => part.fail("glue∘localize = id", e.to_string(), set_fixture(&x)),
            }
        }
        for values in catalog::local_upset_families(poset) {
            part.instances += 1;
            part.count("families", 1);
            let fam = LocalSets::from_values(poset.clone(), &values).expect("local up-sets");
            let report = fam.check_dagger();
            if !report.dagger_holds {
                part.check(fam.glue().is_err(), "incompatible families do not glue", String::new, || sets_fixture(poset, &values));
                continue;
            }
            part.count("compatible", 1);
            match fam.glue().and_then(|g| LocalSets::localize(&g)) {
                Ok(back) => part.check(
                    back == fam,
                    "localize∘glue = id",
                    || "family changed after a glue/localize roundtrip".into(),
                    || sets_fixture(poset, &values),
                ),
                Err(e) => part.fail("localize∘glue = id", e.to_string(), sets_fixture(poset, &values)),
            }
        }
        part
    });
    SweepReport::from_parts("gluing-sets", parts)
}

/// (†) against the principal-closed-set description, and (†) forcing the
/// union to be an up-set.
pub fn lemma_equivalence(max_poset: usize) -> SweepReport {
    let posets = catalog::posets_up_to(max_poset);
    let parts = par_map(&posets, |_, poset| {
        let mut part = Partial::default();
        for values in catalog::local_upset_families(poset) {
            part.instances += 1;
            let fam = LocalSets::from_values(poset.clone(), &values).expect("local up-sets");
            let report = fam.check_dagger();
            let lemma = fam.lemma_equiv();
            part.check(
                lemma.equivalent(),
                "condition (i) ⟺ condition (ii)",
                || format!("(i) = {}, (ii) = {}", lemma.condition_i, lemma.condition_ii),
                || sets_fixture(poset, &values),
            );
            if report.dagger_holds {
                part.count("dagger", 1);
                part.check(
                    report.glued_thomason,
                    "(†) ⟹ glued set is Thomason",
                    || format!("union {} is not an up-set", poset.format_set(lemma.union)),
                    || sets_fixture(poset, &values),
                );
            }
        }
        part
    });
    SweepReport::from_parts("lemma-equivalence", parts)
}

/// Filtration-level bijection with non-degeneracy and constancy, for every
/// filtration changing only inside `[lo, hi]`.
pub fn gluing_filtrations(max_poset: usize, lo: i64, hi: i64) -> SweepReport {
    let posets = catalog::posets_up_to(max_poset);
    let parts = par_map(&posets, |_, poset| {
        let mut part = Partial::default();
        for f in ThomasonFiltration::enumerate_window(poset, lo, hi) {
            part.instances += 1;
            part.count("filtrations", 1);
            let fam = match LocalFamily::localize(&f) {
                Ok(fam) => fam,
                Err(e) => {
                    part.fail("localize", e.to_string(), filtration_fixture(&f));
                    continue;
                }
            };
            match fam.glue() {
                Ok(g) => part.check(g == f, "glue∘localize = id", || format!("{} became {}", f.display(), g.display()), || filtration_fixture(&f)),
                Err(e) => part.fail("glue∘localize = id", e.to_string(), filtration_fixture(&f)),
            }
            let local_nondeg = fam.entries().all(|(_, l)| l.is_nondegenerate());
            part.check(
                f.is_nondegenerate() == local_nondeg,
                "non-degeneracy is local",
                || format!("global {} vs local {}", f.is_nondegenerate(), local_nondeg),
                || filtration_fixture(&f),
            );
            let local_const = fam.entries().all(|(_, l)| l.is_constant());
            part.check(
                f.is_constant() == local_const,
                "stable ⟺ constant is local",
                || format!("global {} vs local {}", f.is_constant(), local_const),
                || filtration_fixture(&f),
            );
        }
        let locals: Vec<Vec<ThomasonFiltration>> = poset
            .maximal_points()
            .iter()
            .map(|m| {
                let (local, _) = poset.localization(poset.label(m).as_str()).expect("maximal point");
                ThomasonFiltration::enumerate_window(&local, lo, hi)
            })
            .collect();
        for choice in catalog::cartesian(&locals) {
            part.instances += 1;
            part.count("families", 1);
            let fam = LocalFamily::from_filtrations(poset.clone(), choice).expect("local filtrations");
            let fixture = || formats::local_family_to_json(&fam);
            if fam.first_violation().is_some() {
                part.check(fam.glue().is_err(), "incompatible families do not glue", String::new, fixture);
                continue;
            }
            part.count("compatible", 1);
            let g = match fam.glue() {
                Ok(g) => g,
                Err(e) => {
                    part.fail("compatible families glue", e.to_string(), fixture());
                    continue;
                }
            };
            match LocalFamily::localize(&g) {
                Ok(back) => part.check(same_family(&back, &fam), "localize∘glue = id", || g.display(), fixture),
                Err(e) => part.fail("localize∘glue = id", e.to_string(), fixture()),
            }
            let local_nondeg = fam.entries().all(|(_, l)| l.is_nondegenerate());
            part.check(g.is_nondegenerate() == local_nondeg, "glue reflects non-degeneracy", || g.display(), fixture);
            let local_const = fam.entries().all(|(_, l)| l.is_constant());
            part.check(g.is_constant() == local_const, "glue reflects constancy", || g.display(), fixture);
            // on the empty spectrum every filtration is both constant and non-degenerate
            let stable = tstructures::classify_filtration(&g) == tstructures::Degeneracy::Stable;
            part.check(
                poset.is_empty() || stable == g.is_constant(),
                "stable ⟺ constant",
                || g.display(),
                fixture,
            );
        }
        part
    });
    SweepReport::from_parts("gluing-filtrations", parts)
}

/// The rings of the Koszul sweep: `Z/n` for `2 <= n <= max_n` and every
/// `F_p[x]/(f)` with `p <= 5`, `1 <= deg f <= 3`.
pub fn koszul_rings(max_n: u64) -> Vec<Arc<FiniteRing>> {
    let mut rings = catalog::zmod_rings(2, max_n);
    for p in [2, 3, 5] {
        rings.extend(catalog::poly_rings(p, 3));
    }
    rings
}

fn ring_fixture(ring: &FiniteRing) -> Value {
    serde_json::to_value(ring.descriptor()).expect("descriptor serializes")
}

/// `Supp H^k(K(I)) ⊆ V(I)` for every ideal, on the canonical generator
/// and on redundant generating sequences.
pub fn koszul_support(rings: &[Arc<FiniteRing>]) -> SweepReport {
    let parts = par_map(rings, |_, ring| {
        let mut part = Partial::default();
        part.count("rings", 1);
        for ideal in ring.ideals() {
            let g = ring.ideal_generator(&ideal);
            let v = ring.v_points(&ideal);
            for xs in [vec![g.clone()], vec![g.clone(), g.clone()], vec![g.clone(), ring.zero()]] {
                part.instances += 1;
                let fixture = || {
                    json!({
                        "ring": ring_fixture(ring),
                        "generators": xs.iter().map(|x| ring.elem_to_json(x)).collect::<Vec<_>>(),
                    })
                };
                let k = match PerfectComplex::koszul(ring, &xs).and_then(|k| k.as_bounded()) {
                    Ok(k) => k,
                    Err(e) => {
                        part.fail("Koszul complex builds", e.to_string(), fixture());
                        continue;
                    }
                };
                let (lo, hi) = k.range().expect("nonempty");
                for n in lo..=hi {
                    let s = k.support_of_cohomology(n);
                    part.check(
                        s.is_subset(v),
                        "Supp H(K(I)) ⊆ V(I)",
                        || format!("H^{n} supported on {} ⊄ {}", ring.spec().format_set(s), ring.spec().format_set(v)),
                        fixture,
                    );
                }
            }
        }
        part
    });
    SweepReport::from_parts("koszul-support", parts)
}

/// A generated complex with a short name for reports.
#[derive(Clone, Debug)]
pub struct Named<T> {
    pub name: String,
    pub value: T,
}

/// Perfect complexes built from shifted Koszul complexes and their sums.
pub fn perfect_corpus(ring: &Arc<FiniteRing>, shifts: &[i64], sums: usize, rng: &mut ChaCha8Rng) -> Vec<Named<PerfectComplex>> {
    let mut out = Vec::new();
    for ideal in ring.ideals() {
        let k = PerfectComplex::koszul_of_ideal(ring, &ideal);
        for &n in shifts {
            out.push(Named { name: format!("K{}[{}]", ring.display_ideal(&ideal), -n), value: k.shift(-n) });
        }
    }
    let base = out.len();
    for _ in 0..sums {
        let a = rng.gen_range(0..base);
        let b = rng.gen_range(0..base);
        let sum = out[a].value.direct_sum(&out[b].value).expect("same ring");
        out.push(Named { name: format!("{} ⊕ {}", out[a].name, out[b].name), value: sum });
    }
    out
}

fn random_two_term(ring: &Arc<FiniteRing>, degree: i64, rng: &mut ChaCha8Rng) -> Option<Named<BoundedComplex>> {
    let ideals = ring.ideals();
    let elements = ring.elements();
    for _ in 0..8 {
        let i = ideals.choose(rng)?;
        let j = ideals.choose(rng)?;
        let y = elements.choose(rng)?;
        let a = FiniteModule::cyclic(ring.clone(), i);
        let b = FiniteModule::cyclic(ring.clone(), j);
        let d = ring.mat_from_elems(&[vec![y.clone()]], 1);
        if let Ok(c) = BoundedComplex::new(ring.clone(), degree, vec![a, b], vec![d]) {
            let name = format!(
                "R/{} →{} R/{} in degree {degree}",
                ring.display_ideal(i),
                ring.display_elem(y),
                ring.display_ideal(j)
            );
            return Some(Named { name, value: c });
        }
    }
    None
}

/// Stalks of cyclic modules in the given degrees, plus seeded two-term
/// complexes of cyclics.
pub fn bounded_corpus(ring: &Arc<FiniteRing>, degrees: &[i64], random: usize, rng: &mut ChaCha8Rng) -> Vec<Named<BoundedComplex>> {
    let mut out = Vec::new();
    for ideal in ring.ideals() {
        for &n in degrees {
            let m = FiniteModule::cyclic(ring.clone(), &ideal);
            out.push(Named { name: format!("R/{}[{}]", ring.display_ideal(&ideal), -n), value: BoundedComplex::stalk(m, n) });
        }
    }
    for _ in 0..random {
        let n = *degrees.choose(rng).expect("degrees");
        if let Some(c) = random_two_term(ring, n, rng) {
            out.push(c);
        }
    }
    out
}

fn rng_for(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn descriptor(ring: &Arc<FiniteRing>, f: &ThomasonFiltration) -> TStructureDescriptor {
    TStructureDescriptor::new(ring.clone(), f.clone()).expect("filtration on Spec R")
}

/// `Hom(X, Y) = 0` for `X` in the aisle and `Y` in the coaisle of every
/// filtration in `[lo, hi]`.
pub fn orthogonality(rings: &[Arc<FiniteRing>], lo: i64, hi: i64, seed: u64) -> SweepReport {
    let parts = par_map(rings, |index, ring| {
        let mut part = Partial::default();
        part.count("rings", 1);
        let mut rng = rng_for(seed, index);
        let xs = perfect_corpus(ring, &[lo - 1, lo, hi], 4, &mut rng);
        let ys = bounded_corpus(ring, &[lo - 1, lo, hi], 4, &mut rng);
        let xb: Vec<BoundedComplex> = xs.iter().map(|x| x.value.as_bounded().expect("valid")).collect();
        let profiles: Vec<CoaisleProfile> = match ys.iter().map(|y| CoaisleProfile::new(&y.value)).collect::<Result<_>>() {
            Ok(p) => p,
            Err(e) => return error_partial("coaisle profile", e, ring_fixture(ring)),
        };
        let mut hom_zero: Vec<Vec<Option<bool>>> = vec![vec![None; ys.len()]; xs.len()];
        for f in ThomasonFiltration::enumerate_window(ring.spec(), lo, hi) {
            part.count("filtrations", 1);
            let t = descriptor(ring, &f);
            let aisle: Vec<usize> =
                (0..xs.len()).filter(|&i| tstructures::aisle_membership(&xb[i], &t).unwrap_or(false)).collect();
            let coaisle: Vec<usize> = (0..ys.len()).filter(|&j| profiles[j].admits(&f)).collect();
            for &i in &aisle {
                for &j in &coaisle {
                    part.instances += 1;
                    let zero = *hom_zero[i][j].get_or_insert_with(|| {
                        homalg::derived_hom_size_log(&xs[i].value, &ys[j].value, 0).map(|s| s == 0).unwrap_or(false)
                    });
                    part.check(
                        zero,
                        "Hom(aisle, coaisle) = 0",
                        || format!("Hom({}, {}) ≠ 0 for {}", xs[i].name, ys[j].name, f.display()),
                        || {
                            json!({
                                "ring": ring_fixture(ring),
                                "filtration": formats::filtration_to_json(&f),
                                "source": xb[i].to_json(),
                                "complex": ys[j].value.to_json(),
                            })
                        },
                    );
                }
            }
        }
        part
    });
    SweepReport::from_parts("orthogonality", parts)
}

/// Coaisle membership against its componentwise shadow, and the
/// descriptor gluing roundtrip, on product rings.
pub fn local_global(rings: &[Arc<FiniteRing>], lo: i64, hi: i64, seed: u64) -> SweepReport {
    let parts = par_map(rings, |index, ring| {
        let mut part = Partial::default();
        part.count("rings", 1);
        let mut rng = rng_for(seed, index);
        let ys = bounded_corpus(ring, &[lo - 1, lo, hi], 6, &mut rng);
        let spec = ring.spec();
        let maximal: Vec<String> = spec.maximal_points().iter().map(|m| spec.label(m).as_str().to_string()).collect();
        let mut global = Vec::new();
        let mut local = Vec::new();
        for y in &ys {
            let g = CoaisleProfile::new(&y.value);
            let l: Result<Vec<CoaisleProfile>> = maximal
                .iter()
                .map(|m| homalg::localize_complex(&y.value, m).and_then(|(c, _, _)| CoaisleProfile::new(&c)))
                .collect();
            match (g, l) {
                (Ok(g), Ok(l)) => {
                    global.push(g);
                    local.push(l);
                }
                (Err(e), _) | (_, Err(e)) => return error_partial("coaisle profile", e, y.value.to_json()),
            }
        }
        for f in ThomasonFiltration::enumerate_window(spec, lo, hi) {
            part.count("filtrations", 1);
            let t = descriptor(ring, &f);
            let family = match tstructures::localize_family(&t) {
                Ok(fam) => fam,
                Err(e) => {
                    part.fail("localize t-structure", e.to_string(), filtration_fixture(&f));
                    continue;
                }
            };
            match tstructures::glue_tstructures(ring, &family) {
                Ok(back) => part.check(back == t, "descriptor family glues back", || f.display(), || filtration_fixture(&f)),
                Err(e) => part.fail("descriptor family glues back", e.to_string(), filtration_fixture(&f)),
            }
            let local_filtrations: Vec<ThomasonFiltration> =
                maximal.iter().map(|m| family[m].filtration().clone()).collect();
            for (j, y) in ys.iter().enumerate() {
                part.instances += 1;
                let whole = global[j].admits(&f);
                let parts_ok = local[j].iter().zip(&local_filtrations).all(|(p, lf)| p.admits(lf));
                part.check(
                    whole == parts_ok,
                    "coaisle membership is local",
                    || format!("{}: global {whole}, componentwise {parts_ok} for {}", y.name, f.display()),
                    || {
                        json!({
                            "ring": ring_fixture(ring),
                            "filtration": formats::filtration_to_json(&f),
                            "complex": y.value.to_json(),
                        })
                    },
                );
            }
        }
        // every family of local descriptors glues and localizes back
        let locals: Vec<Vec<TStructureDescriptor>> = maximal
            .iter()
            .map(|m| {
                let (lr, _) = ring.localize(m).expect("maximal");
                ThomasonFiltration::enumerate_window(lr.spec(), lo, hi).into_iter().map(|lf| descriptor(&lr, &lf)).collect()
            })
            .collect();
        for choice in catalog::cartesian(&locals) {
            part.count("local_families", 1);
            let family: BTreeMap<String, TStructureDescriptor> = maximal.iter().cloned().zip(choice).collect();
            let ok = tstructures::glue_tstructures(ring, &family)
                .and_then(|t| tstructures::localize_family(&t))
                .map(|back| back == family);
            part.check(
                matches!(ok, Ok(true)),
                "descriptor gluing is a bijection",
                || format!("{ok:?}"),
                || ring_fixture(ring),
            );
        }
        part
    });
    SweepReport::from_parts("local-global", parts)
}

/// Torsion/Thomason roundtrip and the injective-class bijection.
pub fn torsion_bijections(rings: &[Arc<FiniteRing>]) -> SweepReport {
    let parts = par_map(rings, |_, ring| {
        let mut part = Partial::default();
        part.count("rings", 1);
        let mut seen: BTreeMap<Vec<String>, PointSet> = BTreeMap::new();
        for s in ring.spec().up_sets() {
            part.instances += 1;
            let x = ThomasonSet::new(ring.spec().clone(), s).expect("up-set");
            let fixture = || json!({ "ring": ring_fixture(ring), "set": formats::set_to_json(ring.spec(), s) });
            let cyclics = tc::torsion_cyclics(ring, &x);
            let back = tc::thomason_of_torsion_class(ring, &cyclics);
            part.check(back == x, "torsion class recovers X", || format!("{x} became {back}"), fixture);
            let class = match tc::injective_class_of(ring, &x) {
                Ok(c) => c,
                Err(e) => {
                    part.fail("injective class", e.to_string(), fixture());
                    continue;
                }
            };
            let key: Vec<String> = class.iter().map(|e| format!("{:?}", e.parts())).collect();
            if let Some(prev) = seen.insert(key, s) {
                part.fail(
                    "injective_class_of is injective",
                    format!("{} and {x} share an injective class", ring.spec().format_set(prev)),
                    fixture(),
                );
            }
            let recovered = tc::cyclics_orthogonal_to(ring, &class);
            part.check(recovered == cyclics, "Hom(-, E) = 0 recovers the torsion cyclics", String::new, fixture);
            for a in &class {
                for b in &class {
                    let sum = a.direct_sum(b).expect("same ring");
                    let closed = sum.is_injective()
                        && tc::is_torsionfree(&sum, &x)
                        && class.iter().any(|e| e.is_isomorphic(a))
                        && class.iter().any(|e| e.is_isomorphic(b));
                    part.check(closed, "class closed under finite products", || sum.describe(), fixture);
                }
            }
        }
        part
    });
    SweepReport::from_parts("torsion-bijections", parts)
}

/// The cosilting fixtures: `(name, module, optional explicit copresentation)`.
pub fn cosilting_fixtures() -> Vec<(String, tc::CosiltingModule)> {
    let mut out = Vec::new();
    let z12 = FiniteRing::zmod(12).expect("ring");
    let cyc = |r: &Arc<FiniteRing>, n: i64| {
        FiniteModule::new(r.clone(), 1, r.mat_from_elems(&[vec![r.from_int(n)]], 1)).expect("cyclic")
    };
    let explicit = tc::CosiltingModule::new(
        cyc(&z12, 3),
        cyc(&z12, 3),
        cyc(&z12, 4),
        crate::rings::GMat::zeros(&z12, 1, 1),
    )
    .expect("Z/3 → Z/3 → Z/4");
    out.push(("Z/3 over Z/12 (η: Z/3 → Z/4)".to_string(), explicit));
    for ring in catalog::product_rings() {
        let ideals = ring.ideals();
        for ideal in &ideals {
            let m = FiniteModule::cyclic(ring.clone(), ideal);
            if let Ok(Some(c)) = tc::search_copresentation(&m, None) {
                out.push((format!("R/{} over {}", ring.display_ideal(ideal), ring.descriptor()), c));
            }
        }
        if let Ok(Some(c)) = tc::search_copresentation(&FiniteModule::free(ring.clone(), 2), None) {
            out.push((format!("R^2 over {}", ring.descriptor()), c));
        }
    }
    out
}

pub fn cosilting_gluing(fixtures: &[(String, tc::CosiltingModule)]) -> SweepReport {
    let parts = par_map(fixtures, |_, (name, c)| {
        let mut part = Partial::default();
        part.instances += 1;
        let fixture = || c.to_json();
        let check = c.check(c.default_bound());
        part.count("test_modules", check.tested);
        part.check(check.holds(), "B_η = Cogen(C)", || format!("{name}: {:?}", check.counterexample.as_ref().map(|m| m.describe())), fixture);
        let x = c.thomason_set();
        match tc::two_term_level_of(c.module()) {
            Ok(level) => part.check(level == x, "Thomason set = two-term level 0", || format!("{name}: {x} vs {level}"), fixture),
            Err(e) => part.fail("two-term level", e.to_string(), fixture()),
        }
        part.check(
            tc::two_term_filtration(&x).is_nondegenerate(),
            "two-term filtration is non-degenerate",
            String::new,
            fixture,
        );
        let split = match tc::components_of_cosilting(c) {
            Ok(s) => s,
            Err(e) => {
                part.fail("split", e.to_string(), fixture());
                return part;
            }
        };
        for (m, comp) in &split {
            part.check(comp.is_cosilting(), "components are cosilting", || format!("{name} at {m}"), fixture);
        }
        match tc::glue_cosilting(c.ring(), &split) {
            Ok(g) => {
                part.check(
                    tc::cosilting_equivalent(g.module(), c.module(), None),
                    "split then glue is equivalent",
                    || format!("{name}: {} vs {}", g.module().describe(), c.module().describe()),
                    fixture,
                );
                part.check(g.thomason_set() == x, "glued Thomason set", || name.clone(), fixture);
            }
            Err(e) => part.fail("glue", e.to_string(), fixture()),
        }
        match tc::glue_component_sets(c.ring(), &split) {
            Ok(s) => part.check(s == x, "componentwise sets glue to the global set", || format!("{name}: {s} vs {x}"), fixture),
            Err(e) => part.fail("componentwise sets glue", e.to_string(), fixture()),
        }
        part
    });
    SweepReport::from_parts("cosilting-gluing", parts)
}

/// `|Hom(X_m, Y, i)| = |Hom(X, Y^m, i)| = |Hom_{R_m}(X_m, Y_m, i)|`.
pub fn adjunction(rings: &[Arc<FiniteRing>], seed: u64, per_ring: usize) -> SweepReport {
    let parts = par_map(rings, |index, ring| {
        let mut part = Partial::default();
        part.count("rings", 1);
        let mut rng = rng_for(seed, index);
        let elements = ring.elements();
        let mut xs: Vec<Named<PerfectComplex>> = Vec::new();
        while xs.len() < per_ring {
            let len = rng.gen_range(1..=2);
            let gens: Vec<Elem> = (0..len).map(|_| elements.choose(&mut rng).expect("elements").clone()).collect();
            let shift = rng.gen_range(-1..=1);
            let k = PerfectComplex::koszul(ring, &gens).expect("nonempty").shift(shift);
            let name = format!(
                "K({})[{shift}]",
                gens.iter().map(|g| ring.display_elem(g)).collect::<Vec<_>>().join(", ")
            );
            xs.push(Named { name, value: k });
        }
        let ys = bounded_corpus(ring, &[-1, 0, 1], per_ring, &mut rng);
        let ys: Vec<Named<BoundedComplex>> = ys.choose_multiple(&mut rng, per_ring.min(ys.len())).cloned().collect();
        let spec = ring.spec();
        let maximal: Vec<String> = spec.maximal_points().iter().map(|m| spec.label(m).as_str().to_string()).collect();
        for x in &xs {
            for y in &ys {
                for i in -2..=2 {
                    part.instances += 1;
                    for m in &maximal {
                        let outcome = (|| -> Result<(u128, u128, u128)> {
                            let (xm, _, f) = homalg::localize_perfect(&x.value, m)?;
                            let (ym, _, _) = homalg::colocalize_complex(&y.value, m)?;
                            let lhs = homalg::derived_hom_order(&xm.restrict_scalars(ring, f)?, &y.value, i)?;
                            let rhs = homalg::derived_hom_order(&x.value, &ym.restrict_scalars(ring, f)?, i)?;
                            let mid = homalg::derived_hom_order(&xm, &ym, i)?;
                            Ok((lhs, rhs, mid))
                        })();
                        let fixture = || {
                            json!({
                                "ring": ring_fixture(ring),
                                "at": m,
                                "degree": i,
                                "source": x.value.to_json(),
                                "complex": y.value.to_json(),
                            })
                        };
                        match outcome {
                            Ok((lhs, rhs, mid)) => part.check(
                                lhs == rhs && rhs == mid,
                                "localize ⊣ colocalize on Hom orders",
                                || format!("{} vs {} at {m}, i = {i}: {lhs}, {rhs}, {mid}", x.name, y.name),
                                fixture,
                            ),
                            Err(e) => part.fail("adjunction", e.to_string(), fixture()),
                        }
                    }
                }
            }
        }
        part
    });
    SweepReport::from_parts("adjunction", parts)
}

/// Sizes and seed for the full suite.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub max_poset: usize,
    pub filtration_poset: usize,
    pub window: i64,
    pub max_ring: u64,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { max_poset: 6, filtration_poset: 4, window: 2, max_ring: 30, seed: DEFAULT_SEED }
    }
}

/// Every sweep in a fixed order.
pub fn run_all(cfg: &SuiteConfig) -> Vec<SweepReport> {
    // Z/n sweeps reach twice the ring bound: 60 at the default
    let zmod_bound = 2 * cfg.max_ring;
    let mut torsion_rings = catalog::zmod_rings(2, zmod_bound);
    torsion_rings.extend(catalog::product_rings());
    vec![
        gluing_sets(cfg.max_poset),
        lemma_equivalence(cfg.max_poset),
        gluing_filtrations(cfg.filtration_poset, -cfg.window, cfg.window),
        koszul_support(&koszul_rings(zmod_bound)),
        orthogonality(&catalog::rings_up_to(cfg.max_ring), -1, 1, cfg.seed),
        local_global(&catalog::product_rings(), -1, 1, cfg.seed),
        torsion_bijections(&torsion_rings),
        cosilting_gluing(&cosilting_fixtures()),
        adjunction(&catalog::product_rings(), cfg.seed, 6),
    ]
}
