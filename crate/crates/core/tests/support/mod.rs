//! Brute-force oracles. Everything here works from first principles: the
//! order relation of a poset, or plain integer arithmetic modulo `n`.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use serde_json::{json, Map, Value};
use spectral_glue::spectral_poset::SpectralPoset;

// ---------------------------------------------------------------- posets

pub fn subsets(n: usize) -> impl Iterator<Item = u64> {
    0u64..(1u64 << n)
}

pub fn is_upset(p: &SpectralPoset, s: u64) -> bool {
    let n = p.len();
    (0..n).all(|a| s >> a & 1 == 0 || (0..n).all(|b| !p.leq(a, b) || s >> b & 1 == 1))
}

pub fn upsets(p: &SpectralPoset) -> Vec<u64> {
    subsets(p.len()).filter(|&s| is_upset(p, s)).collect()
}

pub fn maximal(p: &SpectralPoset) -> Vec<usize> {
    let n = p.len();
    (0..n).filter(|&a| (0..n).all(|b| b == a || !p.leq(a, b))).collect()
}

pub fn down(p: &SpectralPoset, m: usize) -> u64 {
    (0..p.len()).filter(|&a| p.leq(a, m)).fold(0, |acc, a| acc | 1 << a)
}

pub fn up(p: &SpectralPoset, g: usize) -> u64 {
    (0..p.len()).filter(|&b| p.leq(g, b)).fold(0, |acc, b| acc | 1 << b)
}

/// `X(m) = X ∩ ↓m`, kept inside the ambient poset.
pub fn localize_set(p: &SpectralPoset, x: u64) -> Vec<u64> {
    maximal(p).into_iter().map(|m| x & down(p, m)).collect()
}

/// Every family of one up-set of `↓m` per maximal point, as subsets of the
/// ambient poset. An up-set of `↓m` is an up-set of the ambient poset
/// intersected with `↓m`.
pub fn local_families(p: &SpectralPoset) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = vec![Vec::new()];
    for m in maximal(p) {
        let d = down(p, m);
        let locals: BTreeSet<u64> = upsets(p).into_iter().map(|u| u & d).collect();
        out = out
            .into_iter()
            .flat_map(|prefix| {
                locals.iter().map(move |&l| {
                    let mut v = prefix.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
    }
    out
}

/// (†): a point below two maximal points lies in both local sets or in
/// neither.
pub fn dagger(p: &SpectralPoset, family: &[u64]) -> bool {
    let ms = maximal(p);
    for (i, &a) in ms.iter().enumerate() {
        for (j, &b) in ms.iter().enumerate() {
            let common = down(p, a) & down(p, b);
            if (family[i] & common) != (family[j] & common) {
                return false;
            }
        }
    }
    true
}

pub fn glue_sets(family: &[u64]) -> u64 {
    family.iter().fold(0, |acc, &s| acc | s)
}

/// The union of all `↑g` that lie locally inside the family.
pub fn principal_union(p: &SpectralPoset, family: &[u64]) -> u64 {
    let ms = maximal(p);
    let mut out = 0;
    for g in 0..p.len() {
        let u = up(p, g);
        if ms.iter().zip(family).all(|(&m, &x)| u & down(p, m) & !x == 0) {
            out |= u;
        }
    }
    out
}

/// Decreasing chains of `len` up-sets.
pub fn decreasing_chains(p: &SpectralPoset, len: usize) -> usize {
    let ups = upsets(p);
    let mut counts: Vec<usize> = vec![1; ups.len()];
    for _ in 1..len {
        counts = ups
            .iter()
            .map(|&a| ups.iter().zip(&counts).filter(|(&b, _)| b & !a == 0).map(|(_, c)| c).sum())
            .collect();
    }
    counts.iter().sum()
}

/// Isomorphism by trying every bijection (small posets only).
pub fn isomorphic(a: &SpectralPoset, b: &SpectralPoset) -> bool {
    let n = a.len();
    if n != b.len() {
        return false;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    fn rec(a: &SpectralPoset, b: &SpectralPoset, k: usize, perm: &mut Vec<usize>) -> bool {
        let n = perm.len();
        if k == n {
            return (0..n).all(|i| (0..n).all(|j| a.leq(i, j) == b.leq(perm[i], perm[j])));
        }
        for t in k..n {
            perm.swap(k, t);
            let ok = (0..=k).all(|i| a.leq(i, k) == b.leq(perm[i], perm[k]) && a.leq(k, i) == b.leq(perm[k], perm[i]));
            if ok && rec(a, b, k + 1, perm) {
                return true;
            }
            perm.swap(k, t);
        }
        false
    }
    rec(a, b, 0, &mut perm)
}

// ------------------------------------------------------ integers modulo n

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

pub fn prime_divisors(n: i64) -> Vec<i64> {
    (2..=n).filter(|&p| n % p == 0 && (2..p).all(|q| p % q != 0)).collect()
}

pub fn divisors(n: i64) -> Vec<i64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

pub fn label(p: i64) -> String {
    format!("({p})")
}

/// The idempotent of `Z/n` that is 1 on the `p`-primary factor.
pub fn idempotent(n: i64, p: i64) -> i64 {
    let mut q = 1;
    while n % (q * p) == 0 {
        q *= p;
    }
    (0..n).find(|&e| e % q == 1 % q && e % (n / q) == 0).expect("CRT")
}

/// `(Z/n)^g` modulo the span of `relations`, by listing cosets.
#[derive(Clone, Debug)]
pub struct QMod {
    pub n: i64,
    pub g: usize,
    pub relations: Vec<Vec<i64>>,
    span: HashSet<Vec<i64>>,
    pub reps: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
}

fn all_vectors(n: i64, g: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..g {
        out = out.into_iter().flat_map(|v| (0..n).map(move |c| { let mut w = v.clone(); w.push(c); w })).collect();
    }
    out
}

impl QMod {
    pub fn new(n: i64, g: usize, relations: Vec<Vec<i64>>) -> Self {
        let zero = vec![0; g];
        let mut span: HashSet<Vec<i64>> = HashSet::from([zero.clone()]);
        let mut frontier = vec![zero];
        while let Some(v) = frontier.pop() {
            for r in &relations {
                let w: Vec<i64> = v.iter().zip(r).map(|(a, b)| (a + b).rem_euclid(n)).collect();
                if span.insert(w.clone()) {
                    frontier.push(w);
                }
            }
        }
        let mut reps = Vec::new();
        let mut index = HashMap::new();
        for v in all_vectors(n, g) {
            if index.contains_key(&v) {
                continue;
            }
            let id = reps.len();
            for s in &span {
                let w: Vec<i64> = v.iter().zip(s).map(|(a, b)| (a + b).rem_euclid(n)).collect();
                index.insert(w, id);
            }
            reps.push(v);
        }
        QMod { n, g, relations, span, reps, index }
    }

    pub fn free(n: i64, g: usize) -> Self {
        QMod::new(n, g, Vec::new())
    }

    pub fn zero(n: i64) -> Self {
        QMod::new(n, 0, Vec::new())
    }

    pub fn size(&self) -> usize {
        self.reps.len()
    }

    pub fn id(&self, v: &[i64]) -> usize {
        let w: Vec<i64> = v.iter().map(|a| a.rem_euclid(self.n)).collect();
        self.index[&w]
    }

    pub fn is_zero(&self, v: &[i64]) -> bool {
        self.id(v) == self.id(&vec![0; self.g])
    }

    pub fn to_json(&self) -> Value {
        if self.relations.is_empty() {
            json!({ "free": self.g })
        } else {
            json!({ "generators": self.g, "relations": self.relations })
        }
    }
}

pub fn apply(n: i64, v: &[i64], m: &[Vec<i64>], cols: usize) -> Vec<i64> {
    (0..cols).map(|j| v.iter().zip(m).map(|(a, row)| a * row[j]).sum::<i64>().rem_euclid(n)).collect()
}

fn add(n: i64, a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| (x + y).rem_euclid(n)).collect()
}

fn scale(n: i64, c: i64, a: &[i64]) -> Vec<i64> {
    a.iter().map(|x| (c * x).rem_euclid(n)).collect()
}

/// A bounded complex over `Z/n` with row-vector differentials.
#[derive(Clone, Debug)]
pub struct QComplex {
    pub n: i64,
    pub lo: i64,
    pub terms: Vec<QMod>,
    pub diffs: Vec<Vec<Vec<i64>>>,
}

impl QComplex {
    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn term(&self, k: i64) -> Option<&QMod> {
        if k < self.lo || k > self.hi() {
            None
        } else {
            Some(&self.terms[(k - self.lo) as usize])
        }
    }

    fn diff(&self, k: i64) -> Option<&Vec<Vec<i64>>> {
        if k < self.lo || k >= self.hi() {
            None
        } else {
            Some(&self.diffs[(k - self.lo) as usize])
        }
    }

    /// `d_k(v)` as a vector of the next term, or `None` past the end.
    pub fn d(&self, k: i64, v: &[i64]) -> Option<Vec<i64>> {
        let next = self.term(k + 1)?;
        Some(apply(self.n, v, self.diff(k)?, next.g))
    }

    /// Relations map into relations and `d∘d` vanishes modulo relations.
    pub fn is_valid(&self) -> bool {
        for k in self.lo..self.hi() {
            let next = self.term(k + 1).expect("in range");
            let t = self.term(k).expect("in range");
            for r in &t.relations {
                if !next.is_zero(&self.d(k, r).expect("in range")) {
                    return false;
                }
            }
            if k + 2 <= self.hi() {
                for v in all_vectors(self.n, t.g) {
                    let dd = self.d(k + 1, &self.d(k, &v).expect("in range")).expect("in range");
                    if !self.term(k + 2).expect("in range").is_zero(&dd) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn cohomology_order(&self, k: i64) -> u64 {
        let Some(t) = self.term(k) else { return 1 };
        let kernel = t
            .reps
            .iter()
            .filter(|v| match (self.d(k, v), self.term(k + 1)) {
                (Some(w), Some(next)) => next.is_zero(&w),
                _ => true,
            })
            .count();
        let image: HashSet<usize> = match self.term(k - 1) {
            Some(prev) => prev.reps.iter().map(|v| t.id(&self.d(k - 1, v).expect("in range"))).collect(),
            None => HashSet::from([t.id(&vec![0; t.g])]),
        };
        (kernel / image.len()) as u64
    }

    /// Primes of `Z/n` dividing `|H^k|`.
    pub fn cohomology_support(&self, k: i64) -> BTreeSet<String> {
        let order = self.cohomology_order(k) as i64;
        prime_divisors(self.n).into_iter().filter(|p| order % p == 0).map(label).collect()
    }

    /// `e·Y` for the idempotent of the `p`-primary factor.
    pub fn primary_part(&self, p: i64) -> QComplex {
        let e = idempotent(self.n, p);
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut rel = t.relations.clone();
                for i in 0..t.g {
                    let mut row = vec![0; t.g];
                    row[i] = (1 - e).rem_euclid(self.n);
                    rel.push(row);
                }
                QMod::new(self.n, t.g, rel)
            })
            .collect();
        QComplex { n: self.n, lo: self.lo, terms, diffs: self.diffs.clone() }
    }

    pub fn to_json(&self) -> Value {
        let mut terms = Map::new();
        let mut diffs = Map::new();
        for (i, t) in self.terms.iter().enumerate() {
            let k = self.lo + i as i64;
            terms.insert(k.to_string(), t.to_json());
            if let Some(d) = self.diffs.get(i) {
                diffs.insert(k.to_string(), json!(d));
            }
        }
        json!({ "ring": { "kind": "zmod", "n": self.n }, "terms": terms, "differentials": diffs })
    }
}

/// A complex of finite free `Z/n`-modules.
#[derive(Clone, Debug)]
pub struct FreeComplex {
    pub n: i64,
    pub lo: i64,
    pub ranks: Vec<usize>,
    pub diffs: Vec<Vec<Vec<i64>>>,
}

impl FreeComplex {
    pub fn koszul(n: i64, x: i64) -> Self {
        FreeComplex { n, lo: -1, ranks: vec![1, 1], diffs: vec![vec![vec![x.rem_euclid(n)]]] }
    }

    /// `K(x, y)`: ranks 1, 2, 1 in degrees -2, -1, 0.
    pub fn koszul2(n: i64, x: i64, y: i64) -> Self {
        FreeComplex { n, lo: -2, ranks: vec![1, 2, 1], diffs: vec![vec![vec![(-y).rem_euclid(n), x.rem_euclid(n)]], vec![vec![x], vec![y]]] }
    }

    pub fn shift(&self, k: i64) -> Self {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        FreeComplex {
            n: self.n,
            lo: self.lo - k,
            ranks: self.ranks.clone(),
            diffs: self.diffs.iter().map(|d| d.iter().map(|r| r.iter().map(|c| (sign * c).rem_euclid(self.n)).collect()).collect()).collect(),
        }
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.ranks.len() as i64 - 1
    }

    pub fn as_complex(&self) -> QComplex {
        QComplex { n: self.n, lo: self.lo, terms: self.ranks.iter().map(|&r| QMod::free(self.n, r)).collect(), diffs: self.diffs.clone() }
    }

    pub fn to_json(&self) -> Value {
        self.as_complex().to_json()
    }
}

/// `|Hom_{K(Z/n)}(P, Y[i])|`: chain maps modulo null-homotopic ones.
pub fn hom_order(p: &FreeComplex, y: &QComplex, i: i64) -> u64 {
    let n = p.n;
    let zero = QMod::zero(n);
    let target = |k: i64| y.term(k).unwrap_or(&zero);
    // slots: one element of Y^{k+i} per generator of P^k
    let degrees: Vec<i64> = (p.lo..=p.hi()).collect();
    let slots: Vec<(i64, usize)> = degrees.iter().flat_map(|&k| (0..p.ranks[(k - p.lo) as usize]).map(move |j| (k, j))).collect();
    let sizes: Vec<usize> = slots.iter().map(|&(k, _)| target(k + i).size()).collect();
    let total: usize = sizes.iter().product();
    assert!(total <= 4_000_000, "oracle instance too large ({total})");
    let pd = |k: i64| -> Option<&Vec<Vec<i64>>> {
        if k < p.lo || k >= p.hi() {
            None
        } else {
            Some(&p.diffs[(k - p.lo) as usize])
        }
    };
    let slot_index: HashMap<(i64, usize), usize> = slots.iter().enumerate().map(|(s, &kj)| (kj, s)).collect();
    // f(e_j of degree k) ∈ Y^{k+i}
    let is_chain_map = |f: &[Vec<i64>]| -> bool {
        for (s, &(k, j)) in slots.iter().enumerate() {
            let t = k + i;
            let Some(next) = y.term(t + 1) else { continue };
            let lhs = y.d(t, &f[s]).unwrap_or_else(|| vec![0; next.g]);
            let mut rhs = vec![0; next.g];
            if let Some(e) = pd(k) {
                for (l, c) in e[j].iter().enumerate() {
                    rhs = add(n, &rhs, &scale(n, *c, &f[slot_index[&(k + 1, l)]]));
                }
            }
            if next.id(&lhs) != next.id(&rhs) {
                return false;
            }
        }
        true
    };
    let ids = |f: &[Vec<i64>]| -> Vec<usize> { slots.iter().enumerate().map(|(s, &(k, _))| target(k + i).id(&f[s])).collect() };
    let mut chain_maps = 0u64;
    let mut counter = vec![0usize; slots.len()];
    loop {
        let f: Vec<Vec<i64>> = slots.iter().enumerate().map(|(s, &(k, _))| target(k + i).reps[counter[s]].clone()).collect();
        if is_chain_map(&f) {
            chain_maps += 1;
        }
        if !advance(&mut counter, &sizes) {
            break;
        }
    }
    // homotopies: one element of Y^{k+i-1} per generator of P^k
    let hsizes: Vec<usize> = slots.iter().map(|&(k, _)| target(k + i - 1).size()).collect();
    let htotal: usize = hsizes.iter().product();
    assert!(htotal <= 4_000_000, "oracle instance too large ({htotal})");
    let mut boundaries: HashSet<Vec<usize>> = HashSet::new();
    let mut counter = vec![0usize; slots.len()];
    loop {
        let h: Vec<Vec<i64>> = slots.iter().enumerate().map(|(s, &(k, _))| target(k + i - 1).reps[counter[s]].clone()).collect();
        let f: Vec<Vec<i64>> = slots
            .iter()
            .enumerate()
            .map(|(s, &(k, j))| {
                let t = target(k + i);
                let mut v = y.d(k + i - 1, &h[s]).unwrap_or_else(|| vec![0; t.g]);
                if let Some(e) = pd(k) {
                    for (l, c) in e[j].iter().enumerate() {
                        v = add(n, &v, &scale(n, *c, &h[slot_index[&(k + 1, l)]]));
                    }
                }
                v
            })
            .collect();
        boundaries.insert(ids(&f));
        if !advance(&mut counter, &hsizes) {
            break;
        }
    }
    chain_maps / boundaries.len() as u64
}

fn advance(counter: &mut [usize], sizes: &[usize]) -> bool {
    for (c, &s) in counter.iter_mut().zip(sizes) {
        *c += 1;
        if *c < s {
            return true;
        }
        *c = 0;
    }
    false
}

/// `Hom(K(d), Y[k]) ≠ 0` whenever `V(d) ⊆ X_k`, tested on a window wide
/// enough to see every nonzero Hom.
pub fn coaisle_brute(y: &QComplex, at: impl Fn(i64) -> BTreeSet<String>) -> bool {
    let n = y.n;
    for d in divisors(n) {
        let v: BTreeSet<String> = prime_divisors(n).into_iter().filter(|p| d % p == 0).map(label).collect();
        let k = FreeComplex::koszul(n, d);
        for deg in y.lo - 3..=y.hi() + 3 {
            if v.is_subset(&at(deg)) && hom_order(&k, y, deg) > 1 {
                return false;
            }
        }
    }
    true
}

/// Elements of `⊕ Z/d_i`, as tuples.
pub fn cyclic_sum_elements(orders: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &d in orders {
        out = out.into_iter().flat_map(|v| (0..d).map(move |c| { let mut w = v.clone(); w.push(c); w })).collect();
    }
    out
}

pub fn element_order(x: &[i64], orders: &[i64]) -> i64 {
    x.iter().zip(orders).map(|(&a, &d)| d / gcd(a, d)).fold(1, |acc, o| acc / gcd(acc, o) * o)
}

/// Homomorphisms `⊕ Z/d_i → Z/c`, as tuples of images.
pub fn homs_to_cyclic(orders: &[i64], c: i64) -> Vec<Vec<i64>> {
    let choices: Vec<Vec<i64>> = orders.iter().map(|&d| (0..c).filter(|&y| (d * y) % c == 0).collect()).collect();
    let mut out = vec![Vec::new()];
    for ch in &choices {
        out = out.into_iter().flat_map(|v| ch.iter().map(move |&y| { let mut w = v.clone(); w.push(y); w })).collect();
    }
    out
}

/// `M` embeds in a product of copies of `C`: the homs `M → C` separate
/// points.
pub fn cogenerated_brute(m: &[i64], c: &[i64]) -> bool {
    let homs: Vec<(i64, Vec<i64>)> = c.iter().flat_map(|&cj| homs_to_cyclic(m, cj).into_iter().map(move |h| (cj, h))).collect();
    cyclic_sum_elements(m).iter().filter(|x| x.iter().any(|&a| a != 0)).all(|x| {
        homs.iter().any(|(cj, h)| x.iter().zip(h).map(|(a, b)| a * b).sum::<i64>() % cj != 0)
    })
}

/// Every hom `M → Q1` factors through `η: Q0 → Q1`, where `η` sends the
/// generator of the `i`-th summand of `Q0` to `eta[i]` in `Q1`.
pub fn b_eta_brute(m: &[i64], q0: &[i64], q1: &[i64], eta: &[Vec<i64>]) -> bool {
    // a hom M → ⊕ Z/c_j is a tuple of homs into each summand
    let homs_into = |q: &[i64]| -> Vec<Vec<Vec<i64>>> {
        let mut out: Vec<Vec<Vec<i64>>> = vec![Vec::new()];
        for &cj in q {
            let hs = homs_to_cyclic(m, cj);
            out = out.into_iter().flat_map(|v| hs.iter().map(move |h| { let mut w = v.clone(); w.push(h.clone()); w })).collect();
        }
        out
    };
    let into_q1: HashSet<Vec<Vec<i64>>> = homs_into(q1).into_iter().collect();
    let mut image: HashSet<Vec<Vec<i64>>> = HashSet::new();
    for f in homs_into(q0) {
        // (η∘f)(e_i) = Σ_j f_j(e_i) · eta[j]
        let g: Vec<Vec<i64>> = q1
            .iter()
            .enumerate()
            .map(|(t, &ct)| (0..m.len()).map(|i| f.iter().zip(eta).map(|(fj, row)| fj[i] * row[t]).sum::<i64>().rem_euclid(ct)).collect())
            .collect();
        image.insert(g);
    }
    image == into_q1
}
