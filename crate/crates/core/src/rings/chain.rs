//! Finite local chain rings `Z/p^k` and `F_p[x]/(π^k)`.
//!
//! Every ideal is a power of the maximal ideal `(π)`, so elements are
//! classified by their valuation. Elements are encoded as integers in
//! `0..size`: residues for `Z/p^k`, base-`p` coefficient strings for the
//! polynomial case.

use std::fmt;

use super::poly::{self, Poly};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ChainKind {
    ZmodPk { p: u64 },
    PolyPk { p: u64, pi: Poly },
}

#[derive(Clone, Debug)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
}

pub struct ChainRing {
    kind: ChainKind,
    k: u32,
    q: u64,
    size: u64,
    // π^k as a polynomial, for the polynomial kind
    modulus: Poly,
    tables: Option<Tables>,
}

impl fmt::Debug for ChainRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainRing({})", self.describe())
    }
}

impl PartialEq for ChainRing {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.k == other.k
    }
}

impl Eq for ChainRing {}

const TABLE_LIMIT: u64 = 256;

impl ChainRing {
    pub fn zmod_pk(p: u64, k: u32) -> Self {
        let size = p.pow(k);
        Self::build(ChainKind::ZmodPk { p }, k, p, size, Vec::new())
    }

    /// `F_p[x]/(π^k)` for a monic irreducible `π`.
    pub fn poly_pk(p: u64, pi: Poly, k: u32) -> Self {
        let d = poly::degree(&pi).expect("nonconstant") as u32;
        let q = p.pow(d);
        let size = q.pow(k);
        let modulus = poly::pow(&pi, k, p);
        Self::build(ChainKind::PolyPk { p, pi }, k, q, size, modulus)
    }

    fn build(kind: ChainKind, k: u32, q: u64, size: u64, modulus: Poly) -> Self {
        let mut ring = ChainRing { kind, k, q, size, modulus, tables: None };
        if matches!(ring.kind, ChainKind::PolyPk { .. }) && size <= TABLE_LIMIT {
            let n = size as usize;
            let mut add = vec![0u32; n * n];
            let mut mul = vec![0u32; n * n];
            for a in 0..size {
                for b in 0..size {
                    add[(a * size + b) as usize] = ring.add_slow(a, b) as u32;
                    mul[(a * size + b) as usize] = ring.mul_slow(a, b) as u32;
                }
            }
            ring.tables = Some(Tables { add, mul });
        }
        ring
    }

    pub fn kind(&self) -> &ChainKind {
        &self.kind
    }

    pub fn characteristic_prime(&self) -> u64 {
        match &self.kind {
            ChainKind::ZmodPk { p } | ChainKind::PolyPk { p, .. } => *p,
        }
    }

    /// Nilpotency index: `π^k = 0`, `π^{k-1} ≠ 0`.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// Size of the residue field.
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            ChainKind::ZmodPk { p } => format!("Z/{}", p.pow(self.k)),
            ChainKind::PolyPk { p, pi } => {
                if self.k == 1 {
                    format!("F_{p}[x]/({})", poly::display(pi))
                } else {
                    format!("F_{p}[x]/(({})^{})", poly::display(pi), self.k)
                }
            }
        }
    }

    /// Generator of the maximal ideal as a string, e.g. `2` or `x+1`.
    pub fn uniformizer_label(&self) -> String {
        match &self.kind {
            ChainKind::ZmodPk { p } => p.to_string(),
            ChainKind::PolyPk { pi, .. } => poly::display(pi),
        }
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn one(&self) -> u64 {
        1 % self.size
    }

    pub fn elements(&self) -> std::ops::Range<u64> {
        0..self.size
    }

    fn as_poly(&self, a: u64) -> Poly {
        poly::from_index(a, self.characteristic_prime())
    }

    fn from_poly(&self, a: &[u64]) -> u64 {
        let p = self.characteristic_prime();
        poly::to_index(&poly::rem(a, &self.modulus, p), p)
    }

    /// The image of a polynomial (polynomial kind) in this ring.
    pub fn reduce_poly(&self, a: &[u64]) -> u64 {
        match &self.kind {
            ChainKind::ZmodPk { .. } => {
                let v = a.first().copied().unwrap_or(0);
                v % self.size
            }
            ChainKind::PolyPk { .. } => self.from_poly(a),
        }
    }

    /// The image of an integer in this ring.
    pub fn from_int(&self, n: i64) -> u64 {
        match &self.kind {
            ChainKind::ZmodPk { .. } => n.rem_euclid(self.size as i64) as u64,
            ChainKind::PolyPk { p, .. } => n.rem_euclid(*p as i64) as u64,
        }
    }

    pub fn element_poly(&self, a: u64) -> Poly {
        self.as_poly(a)
    }

    fn add_slow(&self, a: u64, b: u64) -> u64 {
        match &self.kind {
            ChainKind::ZmodPk { .. } => (a + b) % self.size,
            ChainKind::PolyPk { p, .. } => {
                let p = *p;
                let s = poly::add(&self.as_poly(a), &self.as_poly(b), p);
                poly::to_index(&s, p)
            }
        }
    }

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        match &self.kind {
            ChainKind::ZmodPk { .. } => ((a as u128 * b as u128) % self.size as u128) as u64,
            ChainKind::PolyPk { p, .. } => {
                let m = poly::mul(&self.as_poly(a), &self.as_poly(b), *p);
                self.from_poly(&m)
            }
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        match (&self.kind, &self.tables) {
            (ChainKind::ZmodPk { .. }, _) => {
                let s = a + b;
                if s >= self.size {
                    s - self.size
                } else {
                    s
                }
            }
            (_, Some(t)) => t.add[(a * self.size + b) as usize] as u64,
            _ => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match (&self.kind, &self.tables) {
            (ChainKind::ZmodPk { .. }, _) => self.mul_slow(a, b),
            (_, Some(t)) => t.mul[(a * self.size + b) as usize] as u64,
            _ => self.mul_slow(a, b),
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        match &self.kind {
            ChainKind::ZmodPk { .. } => (self.size - a) % self.size,
            ChainKind::PolyPk { p, .. } => poly::to_index(&poly::neg(&self.as_poly(a), *p), *p),
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn pow(&self, a: u64, e: u32) -> u64 {
        (0..e).fold(self.one(), |acc, _| self.mul(acc, a))
    }

    /// `π^e`, zero once `e >= k`.
    pub fn pi_pow(&self, e: u32) -> u64 {
        if e >= self.k {
            return 0;
        }
        match &self.kind {
            ChainKind::ZmodPk { p } => p.pow(e),
            ChainKind::PolyPk { p, pi } => self.from_poly(&poly::pow(pi, e, *p)),
        }
    }

    /// `a = π^v u` with `u` a unit; returns `(v, u)`, `(k, 0)` for zero.
    pub fn split(&self, a: u64) -> (u32, u64) {
        if a == 0 {
            return (self.k, 0);
        }
        match &self.kind {
            ChainKind::ZmodPk { p } => {
                let mut v = 0;
                let mut u = a;
                while u.is_multiple_of(*p) {
                    u /= p;
                    v += 1;
                }
                (v, u)
            }
            ChainKind::PolyPk { p, pi } => {
                let mut v = 0;
                let mut u = self.as_poly(a);
                loop {
                    let (q, r) = poly::divrem(&u, pi, *p);
                    if !r.is_empty() {
                        break;
                    }
                    u = q;
                    v += 1;
                }
                (v, self.from_poly(&u))
            }
        }
    }

    pub fn valuation(&self, a: u64) -> u32 {
        self.split(a).0
    }

    pub fn is_unit(&self, a: u64) -> bool {
        self.valuation(a) == 0
    }

    pub fn inverse(&self, a: u64) -> Option<u64> {
        if !self.is_unit(a) {
            return None;
        }
        match &self.kind {
            ChainKind::ZmodPk { .. } => {
                let (g, x, _) = ext_gcd_i(a as i128, self.size as i128);
                debug_assert_eq!(g, 1);
                Some(x.rem_euclid(self.size as i128) as u64)
            }
            ChainKind::PolyPk { p, .. } => {
                let inv = poly::inv_mod(&self.as_poly(a), &self.modulus, *p)?;
                Some(poly::to_index(&inv, *p))
            }
        }
    }

    /// Some `c` with `b c = a`, provided `v(a) >= v(b)`.
    pub fn div_exact(&self, a: u64, b: u64) -> Option<u64> {
        let (va, ua) = self.split(a);
        let (vb, ub) = self.split(b);
        if a == 0 {
            return Some(0);
        }
        if va < vb {
            return None;
        }
        let c = self.mul(self.pi_pow(va - vb), self.mul(ua, self.inverse(ub)?));
        debug_assert_eq!(self.mul(b, c), a);
        Some(c)
    }

    pub fn display(&self, a: u64) -> String {
        match &self.kind {
            ChainKind::ZmodPk { .. } => a.to_string(),
            ChainKind::PolyPk { .. } => poly::display(&self.as_poly(a)),
        }
    }
}

fn ext_gcd_i(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd_i(b, a % b);
        (g, y, x - (a / b) * y)
    }
}
