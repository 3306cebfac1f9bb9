//! Concrete finite commutative rings: `Z/n`, `F_p[x]/(f)` and finite
//! products, all handled through their decomposition into local chain
//! rings.

pub mod chain;
pub mod matrix;
pub mod module;
pub mod poly;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::spectral_poset::{PointSet, PrimeId, SpectralPoset};
use crate::thomason::ThomasonSet;
use chain::{ChainKind, ChainRing};
use matrix::Mat;
use poly::Poly;

pub use module::{indecomposable_injectives, FiniteModule};

/// Ring description as read from JSON.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingDescriptor {
    Zmod { n: u64 },
    PolyQuot { p: u64, f: Vec<i64> },
    Product { factors: Vec<RingDescriptor> },
    Integers,
}

impl RingDescriptor {
    pub fn zmod(n: u64) -> Self {
        RingDescriptor::Zmod { n }
    }

    pub fn poly_quot(p: u64, f: &[i64]) -> Self {
        RingDescriptor::PolyQuot { p, f: f.to_vec() }
    }

    pub fn product(factors: Vec<RingDescriptor>) -> Self {
        RingDescriptor::Product { factors }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Zmod { n } => write!(f, "Z/{n}"),
            RingDescriptor::PolyQuot { p, f: coeffs } => {
                let c: Poly = coeffs.iter().map(|&c| c.rem_euclid(*p as i64) as u64).collect();
                write!(f, "F_{p}[x]/({})", poly::display(&poly::trim(c)))
            }
            RingDescriptor::Product { factors } => {
                let parts: Vec<String> = factors.iter().map(|d| d.to_string()).collect();
                write!(f, "{}", parts.join(" x "))
            }
            RingDescriptor::Integers => write!(f, "Z"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Prime factorization by trial division, primes ascending.
pub fn factor_integer(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut k = 0;
            while n.is_multiple_of(d) {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

const MAX_ZMOD: u64 = 1_000_000;

/// A ring element: one residue per local factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub Vec<u64>);

#[derive(Debug)]
enum Shape {
    Zmod { n: u64, lifts: Vec<u64> },
    Poly { p: u64, f: Poly, lifts: Vec<Poly> },
    Product { parts: Vec<(Arc<FiniteRing>, usize)> },
}

/// A finite commutative ring `R ≅ ∏ R_i` with local chain factors `R_i`.
#[derive(Debug)]
pub struct FiniteRing {
    descriptor: RingDescriptor,
    shape: Shape,
    factors: Vec<ChainRing>,
    factor_labels: Vec<PrimeId>,
    poset: Arc<SpectralPoset>,
    point_of_factor: Vec<usize>,
    factor_of_point: Vec<usize>,
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.descriptor == other.descriptor
    }
}

impl Eq for FiniteRing {}

fn strip_parens(s: &str) -> &str {
    s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(s)
}

impl FiniteRing {
    pub fn new(descriptor: RingDescriptor) -> Result<Arc<Self>> {
        let (shape, factors, labels) = match &descriptor {
            RingDescriptor::Zmod { n } => {
                let n = *n;
                if n < 2 {
                    return Err(Error::invalid("Z/n needs n >= 2"));
                }
                if n > MAX_ZMOD {
                    return Err(Error::unsupported(format!("Z/n with n > {MAX_ZMOD}")));
                }
                let fs = factor_integer(n);
                let mut factors = Vec::new();
                let mut labels = Vec::new();
                let mut lifts = Vec::new();
                for &(p, k) in &fs {
                    let pk = p.pow(k);
                    let rest = n / pk;
                    // rest * (rest^{-1} mod p^k) is 1 at p and 0 elsewhere
                    let local = ChainRing::zmod_pk(p, k);
                    let inv = local.inverse(rest % pk).unwrap_or(0);
                    lifts.push(((rest as u128 * inv as u128) % n as u128) as u64);
                    factors.push(local);
                    labels.push(PrimeId::new(format!("({p})")));
                }
                (Shape::Zmod { n, lifts }, factors, labels)
            }
            RingDescriptor::PolyQuot { p, f } => {
                let p = *p;
                if !is_prime(p) {
                    return Err(Error::invalid(format!("{p} is not prime")));
                }
                let f: Poly = poly::trim(f.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect());
                match poly::degree(&f) {
                    None | Some(0) => return Err(Error::invalid("f must be nonconstant mod p")),
                    Some(d) if (p as f64).powi(d as i32) > 2.0e6 => {
                        return Err(Error::unsupported("F_p[x]/(f) with more than 2e6 elements"))
                    }
                    _ => {}
                }
                let f = poly::monic(&f, p);
                let fs = poly::factor(&f, p);
                let mut factors = Vec::new();
                let mut labels = Vec::new();
                let mut lifts = Vec::new();
                for (pi, k) in &fs {
                    let pk = poly::pow(pi, *k, p);
                    let rest = poly::divrem(&f, &pk, p).0;
                    let inv = poly::inv_mod(&rest, &pk, p).unwrap_or_default();
                    lifts.push(poly::rem(&poly::mul(&rest, &inv, p), &f, p));
                    labels.push(PrimeId::new(format!("({})", poly::display(pi))));
                    factors.push(ChainRing::poly_pk(p, pi.clone(), *k));
                }
                (Shape::Poly { p, f, lifts }, factors, labels)
            }
            RingDescriptor::Product { factors: parts_desc } => {
                if parts_desc.is_empty() {
                    return Err(Error::invalid("a product needs at least one factor"));
                }
                let subs: Vec<Arc<FiniteRing>> =
                    parts_desc.iter().cloned().map(FiniteRing::new).collect::<Result<_>>()?;
                let mut factors = Vec::new();
                let mut labels = Vec::new();
                let mut parts = Vec::new();
                for (t, sub) in subs.iter().enumerate() {
                    parts.push((sub.clone(), factors.len()));
                    for (i, f) in sub.factors.iter().enumerate() {
                        let comps: Vec<&str> = (0..subs.len())
                            .map(|s| if s == t { strip_parens(sub.factor_labels[i].as_str()) } else { "1" })
                            .collect();
                        labels.push(PrimeId::new(format!("({})", comps.join(","))));
                        factors.push(clone_chain(f));
                    }
                }
                (Shape::Product { parts }, factors, labels)
            }
            RingDescriptor::Integers => {
                return Err(Error::unsupported(
                    "the integers are handled by the symbolic adapter, not as a finite ring",
                ))
            }
        };
        let poset = Arc::new(SpectralPoset::antichain(&labels)?);
        let point_of_factor: Vec<usize> =
            labels.iter().map(|l| poset.index_of(l.as_str()).expect("label present")).collect();
        let mut factor_of_point = vec![0; labels.len()];
        for (f, &pt) in point_of_factor.iter().enumerate() {
            factor_of_point[pt] = f;
        }
        Ok(Arc::new(FiniteRing {
            descriptor,
            shape,
            factors,
            factor_labels: labels,
            poset,
            point_of_factor,
            factor_of_point,
        }))
    }

    pub fn zmod(n: u64) -> Result<Arc<Self>> {
        Self::new(RingDescriptor::zmod(n))
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.descriptor
    }

    pub fn factors(&self) -> &[ChainRing] {
        &self.factors
    }

    pub fn factor(&self, i: usize) -> &ChainRing {
        &self.factors[i]
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn size(&self) -> u64 {
        self.factors.iter().map(|f| f.size()).product()
    }

    /// The spectrum: an antichain, one point per local factor.
    pub fn spec(&self) -> &Arc<SpectralPoset> {
        &self.poset
    }

    pub fn factor_label(&self, i: usize) -> &PrimeId {
        &self.factor_labels[i]
    }

    pub fn point_of_factor(&self, i: usize) -> usize {
        self.point_of_factor[i]
    }

    pub fn factor_of_point(&self, pt: usize) -> usize {
        self.factor_of_point[pt]
    }

    pub fn factor_of_label(&self, label: &str) -> Result<usize> {
        let pt = self.poset.index_of(label)?;
        Ok(self.factor_of_point[pt])
    }

    /// Points of the spectrum for a set of factor indices.
    pub fn points_of_factors(&self, factors: impl IntoIterator<Item = usize>) -> PointSet {
        factors.into_iter().map(|f| self.point_of_factor[f]).collect()
    }

    pub fn factors_of_points(&self, set: PointSet) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().map(|p| self.factor_of_point[p]).collect();
        out.sort_unstable();
        out
    }

    /// Primes with their ideals, in label order.
    pub fn spec_with_ideals(&self) -> Vec<(PrimeId, Ideal)> {
        (0..self.poset.len())
            .map(|pt| {
                let f = self.factor_of_point[pt];
                let mut exps = vec![0; self.factors.len()];
                exps[f] = 1;
                (self.poset.label(pt).clone(), Ideal { exps })
            })
            .collect()
    }

    /// The local factor at a maximal point, as a ring in its own right.
    pub fn localize(&self, m: &str) -> Result<(Arc<FiniteRing>, usize)> {
        let f = self.factor_of_label(m)?;
        Ok((FiniteRing::new(chain_descriptor(&self.factors[f]))?, f))
    }

    // elements

    pub fn zero(&self) -> Elem {
        Elem(vec![0; self.factors.len()])
    }

    pub fn one(&self) -> Elem {
        Elem(self.factors.iter().map(|f| f.one()).collect())
    }

    pub fn from_int(&self, n: i64) -> Elem {
        Elem(self.factors.iter().map(|f| f.from_int(n)).collect())
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        Elem(self.factors.iter().enumerate().map(|(i, f)| f.add(a.0[i], b.0[i])).collect())
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        Elem(self.factors.iter().enumerate().map(|(i, f)| f.mul(a.0[i], b.0[i])).collect())
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        Elem(self.factors.iter().enumerate().map(|(i, f)| f.neg(a.0[i])).collect())
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        a.0.iter().all(|&x| x == 0)
    }

    pub fn is_unit(&self, a: &Elem) -> bool {
        self.factors.iter().enumerate().all(|(i, f)| f.is_unit(a.0[i]))
    }

    /// The idempotent that is `1` on the given factors and `0` elsewhere.
    pub fn idempotent(&self, on: &[usize]) -> Elem {
        Elem((0..self.factors.len()).map(|i| if on.contains(&i) { 1 } else { 0 }).collect())
    }

    /// Every element, in lexicographic order of factor residues.
    pub fn elements(&self) -> Vec<Elem> {
        let mut out = vec![Elem(Vec::new())];
        for f in &self.factors {
            out = out
                .into_iter()
                .flat_map(|e| {
                    f.elements().map(move |x| {
                        let mut v = e.0.clone();
                        v.push(x);
                        Elem(v)
                    })
                })
                .collect();
        }
        out
    }

    pub fn parse_elem(&self, v: &Value) -> Result<Elem> {
        match (&self.shape, v) {
            (_, Value::Number(n)) => {
                let n = n.as_i64().ok_or_else(|| Error::invalid(format!("element {n} out of range")))?;
                Ok(self.from_int(n))
            }
            (Shape::Zmod { .. }, Value::String(s)) => {
                let n: i64 = s.trim().parse().map_err(|_| Error::invalid(format!("bad element {s:?}")))?;
                Ok(self.from_int(n))
            }
            (Shape::Poly { p, .. }, Value::String(s)) => {
                let a = poly::parse(s, *p)?;
                Ok(Elem(self.factors.iter().map(|f| f.reduce_poly(&a)).collect()))
            }
            (Shape::Poly { p, .. }, Value::Array(cs)) => {
                let a: Poly = cs
                    .iter()
                    .map(|c| {
                        c.as_i64()
                            .map(|c| c.rem_euclid(*p as i64) as u64)
                            .ok_or_else(|| Error::invalid("polynomial coefficients must be integers"))
                    })
                    .collect::<Result<_>>()?;
                Ok(Elem(self.factors.iter().map(|f| f.reduce_poly(&poly::trim(a.clone()))).collect()))
            }
            (Shape::Product { parts }, Value::Array(items)) => {
                if items.len() != parts.len() {
                    return Err(Error::invalid(format!(
                        "product element needs {} components, got {}",
                        parts.len(),
                        items.len()
                    )));
                }
                let mut out = Vec::new();
                for ((sub, _), item) in parts.iter().zip(items) {
                    out.extend(sub.parse_elem(item)?.0);
                }
                Ok(Elem(out))
            }
            _ => Err(Error::invalid(format!("cannot read {v} as an element of {}", self.descriptor))),
        }
    }

    pub fn elem_to_json(&self, a: &Elem) -> Value {
        match &self.shape {
            Shape::Zmod { .. } => Value::from(self.crt_int(a)),
            Shape::Poly { .. } => Value::from(self.display_elem(a)),
            Shape::Product { parts } => Value::Array(
                parts
                    .iter()
                    .map(|(sub, off)| sub.elem_to_json(&Elem(a.0[*off..*off + sub.num_factors()].to_vec())))
                    .collect(),
            ),
        }
    }

    fn crt_int(&self, a: &Elem) -> u64 {
        match &self.shape {
            Shape::Zmod { n, lifts } => {
                let n = *n as u128;
                (a.0.iter().zip(lifts).map(|(&x, &e)| x as u128 * e as u128 % n).sum::<u128>() % n) as u64
            }
            _ => unreachable!("integer reconstruction only for Z/n"),
        }
    }

    fn crt_poly(&self, a: &Elem) -> Poly {
        match &self.shape {
            Shape::Poly { p, f, lifts } => {
                let mut acc: Poly = Vec::new();
                for (i, (fct, e)) in self.factors.iter().zip(lifts).enumerate() {
                    let term = poly::mul(&fct.element_poly(a.0[i]), e, *p);
                    acc = poly::add(&acc, &term, *p);
                }
                poly::rem(&acc, f, *p)
            }
            _ => unreachable!("polynomial reconstruction only for F_p[x]/(f)"),
        }
    }

    pub fn display_elem(&self, a: &Elem) -> String {
        match &self.shape {
            Shape::Zmod { .. } => self.crt_int(a).to_string(),
            Shape::Poly { .. } => poly::display(&self.crt_poly(a)),
            Shape::Product { parts } => {
                let comps: Vec<String> = parts
                    .iter()
                    .map(|(sub, off)| sub.display_elem(&Elem(a.0[*off..*off + sub.num_factors()].to_vec())))
                    .collect();
                format!("({})", comps.join(","))
            }
        }
    }

    // ideals

    pub fn ideal_from_generators(&self, gens: &[Elem]) -> Ideal {
        Ideal {
            exps: self
                .factors
                .iter()
                .enumerate()
                .map(|(i, f)| gens.iter().map(|g| f.valuation(g.0[i])).min().unwrap_or(f.k()))
                .collect(),
        }
    }

    pub fn ideal_from_exponents(&self, exps: Vec<u32>) -> Result<Ideal> {
        if exps.len() != self.factors.len() || exps.iter().zip(&self.factors).any(|(&e, f)| e > f.k()) {
            return Err(Error::invalid("ideal exponents do not fit the ring"));
        }
        Ok(Ideal { exps })
    }

    pub fn parse_ideal(&self, v: &Value) -> Result<Ideal> {
        let gens = match v {
            Value::Array(items) if !matches!(self.shape, Shape::Product { .. }) || items.iter().all(Value::is_array) => {
                items.iter().map(|g| self.parse_elem(g)).collect::<Result<Vec<_>>>()?
            }
            other => vec![self.parse_elem(other)?],
        };
        if gens.is_empty() {
            return Err(Error::invalid("an ideal needs at least one generator"));
        }
        Ok(self.ideal_from_generators(&gens))
    }

    pub fn unit_ideal(&self) -> Ideal {
        Ideal { exps: vec![0; self.factors.len()] }
    }

    pub fn zero_ideal(&self) -> Ideal {
        Ideal { exps: self.factors.iter().map(|f| f.k()).collect() }
    }

    /// All ideals, lexicographic in the exponent vector.
    pub fn ideals(&self) -> Vec<Ideal> {
        let mut out = vec![Vec::new()];
        for f in &self.factors {
            out = out
                .into_iter()
                .flat_map(|e: Vec<u32>| {
                    (0..=f.k()).map(move |x| {
                        let mut v = e.clone();
                        v.push(x);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(|exps| Ideal { exps }).collect()
    }

    pub fn ideal_generator(&self, i: &Ideal) -> Elem {
        Elem(self.factors.iter().zip(&i.exps).map(|(f, &e)| f.pi_pow(e)).collect())
    }

    /// Points of the spectrum containing `I`.
    pub fn v_points(&self, i: &Ideal) -> PointSet {
        self.points_of_factors(i.exps.iter().enumerate().filter(|(_, &e)| e >= 1).map(|(f, _)| f))
    }

    pub fn v_of_ideal(&self, i: &Ideal) -> ThomasonSet {
        ThomasonSet::new(self.poset.clone(), self.v_points(i)).expect("subsets of an antichain are up-sets")
    }

    pub fn display_ideal(&self, i: &Ideal) -> String {
        match &self.shape {
            Shape::Zmod { n, .. } => {
                let g: u64 = self.factors.iter().zip(&i.exps).map(|(f, &e)| f.characteristic_prime().pow(e)).product();
                if g == *n {
                    "(0)".into()
                } else {
                    format!("({g})")
                }
            }
            Shape::Poly { p, f, .. } => {
                let mut g: Poly = vec![1];
                for (fct, &e) in self.factors.iter().zip(&i.exps) {
                    if let ChainKind::PolyPk { pi, .. } = fct.kind() {
                        g = poly::mul(&g, &poly::pow(pi, e, *p), *p);
                    }
                }
                if g == *f {
                    "(0)".into()
                } else {
                    format!("({})", poly::display(&g))
                }
            }
            Shape::Product { parts } => {
                let comps: Vec<String> = parts
                    .iter()
                    .map(|(sub, off)| {
                        let sub_ideal = Ideal { exps: i.exps[*off..*off + sub.num_factors()].to_vec() };
                        strip_parens(&sub.display_ideal(&sub_ideal)).to_string()
                    })
                    .collect();
                format!("({})", comps.join(","))
            }
        }
    }

    /// Human-readable module structure from per-factor exponents.
    pub fn describe_parts(&self, parts: &[Vec<u32>]) -> String {
        match &self.shape {
            Shape::Zmod { .. } | Shape::Poly { .. } => {
                let count = parts.iter().map(Vec::len).max().unwrap_or(0);
                if count == 0 {
                    return "0".into();
                }
                let summands: Vec<String> = (0..count)
                    .map(|t| {
                        let exps: Vec<u32> = parts.iter().map(|p| p.get(t).copied().unwrap_or(0)).collect();
                        self.describe_cyclic(&exps)
                    })
                    .collect();
                summands.join(" ⊕ ")
            }
            Shape::Product { parts: subs } => {
                if parts.iter().all(Vec::is_empty) {
                    return "0".into();
                }
                let comps: Vec<String> = subs
                    .iter()
                    .map(|(sub, off)| sub.describe_parts(&parts[*off..*off + sub.num_factors()]))
                    .collect();
                format!("({})", comps.join(", "))
            }
        }
    }

    fn describe_cyclic(&self, exps: &[u32]) -> String {
        match &self.shape {
            Shape::Zmod { .. } => {
                let d: u64 = self.factors.iter().zip(exps).map(|(f, &e)| f.characteristic_prime().pow(e)).product();
                format!("Z/{d}")
            }
            Shape::Poly { p, .. } => {
                let mut g: Poly = vec![1];
                for (fct, &e) in self.factors.iter().zip(exps) {
                    if let ChainKind::PolyPk { pi, .. } = fct.kind() {
                        g = poly::mul(&g, &poly::pow(pi, e, *p), *p);
                    }
                }
                if poly::degree(&g) == Some(1) {
                    format!("F_{p}")
                } else {
                    format!("F_{p}[x]/({})", poly::display(&g))
                }
            }
            Shape::Product { .. } => unreachable!("products are described componentwise"),
        }
    }

    pub fn ideal_to_json(&self, i: &Ideal) -> Value {
        Value::Array(vec![self.elem_to_json(&self.ideal_generator(i))])
    }

    // matrices

    pub fn mat_from_elems(&self, rows: &[Vec<Elem>], cols: usize) -> GMat {
        GMat {
            rows: rows.len(),
            cols,
            parts: (0..self.factors.len())
                .map(|f| Mat::from_rows(rows.iter().map(|r| r.iter().map(|e| e.0[f]).collect()).collect(), cols))
                .collect(),
        }
    }

    pub fn parse_matrix(&self, v: &Value, cols: Option<usize>) -> Result<GMat> {
        let rows = v.as_array().ok_or_else(|| Error::invalid("a matrix must be a list of rows"))?;
        let mut parsed = Vec::new();
        for r in rows {
            let r = r.as_array().ok_or_else(|| Error::invalid("matrix rows must be lists"))?;
            parsed.push(r.iter().map(|e| self.parse_elem(e)).collect::<Result<Vec<_>>>()?);
        }
        let width = match (cols, parsed.first()) {
            (Some(c), _) => c,
            (None, Some(r)) => r.len(),
            (None, None) => 0,
        };
        if parsed.iter().any(|r| r.len() != width) {
            return Err(Error::invalid(format!("matrix rows must all have {width} entries")));
        }
        Ok(self.mat_from_elems(&parsed, width))
    }

    pub fn matrix_to_json(&self, m: &GMat) -> Value {
        Value::Array(
            (0..m.rows)
                .map(|i| Value::Array((0..m.cols).map(|j| self.elem_to_json(&m.entry(i, j))).collect()))
                .collect(),
        )
    }
}

fn clone_chain(c: &ChainRing) -> ChainRing {
    match c.kind() {
        ChainKind::ZmodPk { p } => ChainRing::zmod_pk(*p, c.k()),
        ChainKind::PolyPk { p, pi } => ChainRing::poly_pk(*p, pi.clone(), c.k()),
    }
}

/// Descriptor of a single chain ring.
pub fn chain_descriptor(c: &ChainRing) -> RingDescriptor {
    match c.kind() {
        ChainKind::ZmodPk { p } => RingDescriptor::zmod(p.pow(c.k())),
        ChainKind::PolyPk { p, pi } => {
            let f = poly::pow(pi, c.k(), *p);
            RingDescriptor::PolyQuot { p: *p, f: f.iter().map(|&x| x as i64).collect() }
        }
    }
}

/// An ideal `∏ (π_i^{e_i})`; every ideal of such a ring has this form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ideal {
    pub exps: Vec<u32>,
}

impl Ideal {
    pub fn product(&self, other: &Ideal, ring: &FiniteRing) -> Ideal {
        Ideal {
            exps: self.exps.iter().zip(&other.exps).zip(ring.factors()).map(|((a, b), f)| (a + b).min(f.k())).collect(),
        }
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        Ideal { exps: self.exps.iter().zip(&other.exps).map(|(&a, &b)| a.min(b)).collect() }
    }

    pub fn contains(&self, ring: &FiniteRing, x: &Elem) -> bool {
        ring.factors().iter().enumerate().all(|(i, f)| f.valuation(x.0[i]) >= self.exps[i])
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// `|R/I|`.
    pub fn quotient_order(&self, ring: &FiniteRing) -> u64 {
        ring.factors().iter().zip(&self.exps).map(|(f, &e)| f.q().pow(e)).product()
    }
}

/// A matrix over a finite ring, one chain-ring matrix per factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GMat {
    rows: usize,
    cols: usize,
    parts: Vec<Mat>,
}

impl GMat {
    pub fn zeros(ring: &FiniteRing, rows: usize, cols: usize) -> Self {
        GMat { rows, cols, parts: (0..ring.num_factors()).map(|_| Mat::zeros(rows, cols)).collect() }
    }

    pub fn identity(ring: &FiniteRing, n: usize) -> Self {
        GMat { rows: n, cols: n, parts: ring.factors().iter().map(|f| Mat::identity(f, n)).collect() }
    }

    pub fn from_parts(parts: Vec<Mat>) -> Self {
        let (rows, cols) = parts.first().map(|m| (m.rows(), m.cols())).unwrap_or((0, 0));
        debug_assert!(parts.iter().all(|m| m.rows() == rows && m.cols() == cols));
        GMat { rows, cols, parts }
    }

    /// The matrix that is `m` at factor `f` and zero elsewhere.
    pub fn lift_from_factor(ring: &FiniteRing, m: &Mat, f: usize) -> Self {
        let mut parts: Vec<Mat> = (0..ring.num_factors()).map(|_| Mat::zeros(m.rows(), m.cols())).collect();
        parts[f] = m.clone();
        GMat { rows: m.rows(), cols: m.cols(), parts }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn part(&self, f: usize) -> &Mat {
        &self.parts[f]
    }

    pub fn parts(&self) -> &[Mat] {
        &self.parts
    }

    pub fn entry(&self, i: usize, j: usize) -> Elem {
        Elem(self.parts.iter().map(|m| m.get(i, j)).collect())
    }

    pub fn set(&mut self, i: usize, j: usize, e: &Elem) {
        for (m, &x) in self.parts.iter_mut().zip(&e.0) {
            m.set(i, j, x);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(Mat::is_zero)
    }

    fn zip_map(&self, ring: &FiniteRing, other: &GMat, f: impl Fn(&ChainRing, &Mat, &Mat) -> Mat) -> GMat {
        GMat::from_parts(
            ring.factors().iter().zip(self.parts.iter().zip(&other.parts)).map(|(r, (a, b))| f(r, a, b)).collect(),
        )
    }

    pub fn mul(&self, ring: &FiniteRing, other: &GMat) -> GMat {
        let mut out = self.zip_map(ring, other, |r, a, b| a.mul(r, b));
        out.rows = self.rows;
        out.cols = other.cols;
        out
    }

    pub fn add(&self, ring: &FiniteRing, other: &GMat) -> GMat {
        self.zip_map(ring, other, |r, a, b| a.add(r, b))
    }

    pub fn scale(&self, ring: &FiniteRing, c: &Elem) -> GMat {
        let mut out = GMat::from_parts(
            ring.factors().iter().zip(&self.parts).zip(&c.0).map(|((r, m), &x)| m.scale(r, x)).collect(),
        );
        out.rows = self.rows;
        out.cols = self.cols;
        out
    }

    pub fn vstack(&self, other: &GMat) -> GMat {
        let mut out = GMat::from_parts(self.parts.iter().zip(&other.parts).map(|(a, b)| a.vstack(b)).collect());
        out.rows = self.rows + other.rows;
        out.cols = self.cols;
        out
    }

    pub fn hstack(&self, other: &GMat) -> GMat {
        let mut out = GMat::from_parts(self.parts.iter().zip(&other.parts).map(|(a, b)| a.hstack(b)).collect());
        out.rows = self.rows;
        out.cols = self.cols + other.cols;
        out
    }

    pub fn block_diag(&self, other: &GMat) -> GMat {
        let mut out = GMat::from_parts(self.parts.iter().zip(&other.parts).map(|(a, b)| a.block_diag(b)).collect());
        out.rows = self.rows + other.rows;
        out.cols = self.cols + other.cols;
        out
    }

    pub fn transpose(&self) -> GMat {
        let mut out = GMat::from_parts(self.parts.iter().map(Mat::transpose).collect());
        out.rows = self.cols;
        out.cols = self.rows;
        out
    }

    /// Keeps only the given factor, as a matrix over that factor alone.
    pub fn project(&self, f: usize) -> GMat {
        GMat { rows: self.rows, cols: self.cols, parts: vec![self.parts[f].clone()] }
    }

    /// `x ↦ x self` on a row vector of ring elements.
    pub fn apply(&self, ring: &FiniteRing, x: &[Elem]) -> Vec<Elem> {
        let per: Vec<Vec<u64>> = ring
            .factors()
            .iter()
            .enumerate()
            .map(|(f, r)| self.parts[f].apply(r, &x.iter().map(|e| e.0[f]).collect::<Vec<_>>()))
            .collect();
        (0..self.cols).map(|j| Elem(per.iter().map(|v| v[j]).collect())).collect()
    }
}
