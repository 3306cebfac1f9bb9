//! Generated corpora: finite posets up to isomorphism and small finite
//! rings.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::rings::{poly, FiniteRing, RingDescriptor};
use crate::spectral_poset::{PointSet, SpectralPoset};

/// Strict order relation as `above[i]` bitmasks on points `0..n`.
type Relation = Vec<u64>;

/// Lexicographically least relation matrix over all relabelings.
fn canonical(rel: &Relation) -> Vec<u64> {
    let n = rel.len();
    // points sorted by (number below, number above) bound the relabelings
    let below = |i: usize| rel.iter().filter(|&&r| r >> i & 1 == 1).count();
    let key = |i: usize| (below(i), rel[i].count_ones() as usize);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.sort_by_key(|&i| key(i));
    let mut best: Option<Vec<u64>> = None;
    permute_within_classes(&perm, &key, 0, &mut perm.clone(), &mut |p| {
        let mut pos = vec![0; n];
        for (new, &old) in p.iter().enumerate() {
            pos[old] = new;
        }
        let image: Vec<u64> = p
            .iter()
            .map(|&old| (0..n).filter(|&j| rel[old] >> j & 1 == 1).fold(0u64, |acc, j| acc | 1 << pos[j]))
            .collect();
        if best.as_ref().is_none_or(|b| image < *b) {
            best = Some(image);
        }
    });
    best.unwrap_or_default()
}

fn permute_within_classes(
    sorted: &[usize],
    key: &dyn Fn(usize) -> (usize, usize),
    start: usize,
    current: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if start == sorted.len() {
        emit(current);
        return;
    }
    let k = key(sorted[start]);
    let end = (start..sorted.len()).find(|&i| key(sorted[i]) != k).unwrap_or(sorted.len());
    let mut class: Vec<usize> = sorted[start..end].to_vec();
    let len = class.len();
    heap_permutations(&mut class, len, &mut |perm| {
        current[start..end].copy_from_slice(perm);
        permute_within_classes(sorted, key, end, current, emit);
    });
}

fn heap_permutations(items: &mut [usize], k: usize, emit: &mut dyn FnMut(&[usize])) {
    if k <= 1 {
        emit(items);
        return;
    }
    for i in 0..k - 1 {
        heap_permutations(items, k - 1, emit);
        if k.is_multiple_of(2) {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
    heap_permutations(items, k - 1, emit);
}

/// Down-sets of a strict order on `0..n`.
fn down_sets(rel: &Relation) -> Vec<u64> {
    let n = rel.len();
    (0u64..1 << n)
        .filter(|&s| (0..n).all(|i| s >> i & 1 == 0 || (0..n).all(|j| rel[j] >> i & 1 == 0 || s >> j & 1 == 1)))
        .collect()
}

fn to_poset(rel: &Relation) -> Arc<SpectralPoset> {
    let labels: Vec<String> = (0..rel.len()).map(|i| format!("x{i}")).collect();
    let mut pairs = Vec::new();
    for (i, &r) in rel.iter().enumerate() {
        for j in 0..rel.len() {
            if r >> j & 1 == 1 {
                pairs.push((labels[i].clone(), labels[j].clone()));
            }
        }
    }
    Arc::new(SpectralPoset::new(&labels, &pairs).expect("strict order"))
}

/// One representative of every isomorphism class of posets with exactly
/// `n` points, `n <= 7`.
pub fn posets_of_size(n: usize) -> Vec<Arc<SpectralPoset>> {
    let mut level: Vec<Relation> = vec![Vec::new()];
    for size in 0..n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for rel in &level {
            // the new point is maximal and sits above exactly a down-set
            for d in down_sets(rel) {
                let mut r = rel.clone();
                for (i, above) in r.iter_mut().enumerate() {
                    if d >> i & 1 == 1 {
                        *above |= 1 << size;
                    }
                }
                r.push(0);
                let c = canonical(&r);
                if seen.insert(c.clone()) {
                    next.push(c);
                }
            }
        }
        level = next;
    }
    level.iter().map(to_poset).collect()
}

/// Every poset with at most `n` points, by size.
pub fn posets_up_to(n: usize) -> Vec<Arc<SpectralPoset>> {
    (0..=n).flat_map(posets_of_size).collect()
}

/// The family at one degree: one up-set per localization.
pub fn local_upset_families(poset: &Arc<SpectralPoset>) -> Vec<Vec<PointSet>> {
    let locals: Vec<Vec<PointSet>> = poset
        .maximal_points()
        .iter()
        .map(|m| poset.localization(poset.label(m).as_str()).expect("maximal point").0.up_sets())
        .collect();
    cartesian(&locals)
}

pub fn cartesian<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for list in lists {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                list.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect();
    }
    out
}

/// Monic polynomials of degree `d` over `F_p`, coefficients low to high.
pub fn monic_polys(p: u64, d: usize) -> Vec<Vec<i64>> {
    (0..p.pow(d as u32))
        .map(|i| {
            let mut f = poly::from_index(i, p);
            f.resize(d, 0);
            f.push(1);
            f.into_iter().map(|c| c as i64).collect()
        })
        .collect()
}

/// `F_p[x]/(f)` for every monic `f` of degree `1..=max_deg`.
pub fn poly_rings(p: u64, max_deg: usize) -> Vec<Arc<FiniteRing>> {
    (1..=max_deg)
        .flat_map(|d| monic_polys(p, d))
        .map(|f| FiniteRing::new(RingDescriptor::poly_quot(p, &f)).expect("monic modulus"))
        .collect()
}

pub fn zmod_rings(lo: u64, hi: u64) -> Vec<Arc<FiniteRing>> {
    (lo..=hi).map(|n| FiniteRing::zmod(n).expect("n >= 2")).collect()
}

/// Every ring of the supported kinds with `|R| <= bound`: `Z/n`, the
/// polynomial quotients, and products of two of them.
pub fn rings_up_to(bound: u64) -> Vec<Arc<FiniteRing>> {
    let mut base: Vec<RingDescriptor> = (2..=bound).map(RingDescriptor::zmod).collect();
    for p in [2u64, 3, 5, 7] {
        let mut d = 1;
        while p.pow(d as u32) <= bound {
            for f in monic_polys(p, d) {
                base.push(RingDescriptor::poly_quot(p, &f));
            }
            d += 1;
        }
    }
    let size = |d: &RingDescriptor| FiniteRing::new(d.clone()).map(|r| r.size()).unwrap_or(u64::MAX);
    let sizes: Vec<u64> = base.iter().map(size).collect();
    let mut out: Vec<RingDescriptor> = base.clone();
    for i in 0..base.len() {
        for j in i..base.len() {
            if sizes[i] * sizes[j] <= bound {
                out.push(RingDescriptor::product(vec![base[i].clone(), base[j].clone()]));
            }
        }
    }
    out.into_iter().map(|d| FiniteRing::new(d).expect("supported ring")).collect()
}

/// Rings with two or three local factors.
pub fn product_rings() -> Vec<Arc<FiniteRing>> {
    let descs = vec![
        RingDescriptor::zmod(6),
        RingDescriptor::zmod(12),
        RingDescriptor::zmod(18),
        RingDescriptor::zmod(20),
        RingDescriptor::zmod(30),
        RingDescriptor::zmod(60),
        RingDescriptor::poly_quot(2, &[0, 1, 1]),
        RingDescriptor::poly_quot(2, &[0, 0, 1, 1]),
        RingDescriptor::poly_quot(3, &[0, 2, 0, 1]),
        RingDescriptor::product(vec![RingDescriptor::zmod(4), RingDescriptor::poly_quot(2, &[1, 1, 1])]),
        RingDescriptor::product(vec![RingDescriptor::poly_quot(2, &[0, 0, 1]), RingDescriptor::zmod(3)]),
        RingDescriptor::product(vec![
            RingDescriptor::zmod(2),
            RingDescriptor::zmod(9),
            RingDescriptor::poly_quot(2, &[1, 1, 1]),
        ]),
    ];
    descs.into_iter().map(|d| FiniteRing::new(d).expect("supported ring")).collect()
}
