//! Dense univariate polynomials over a prime field `F_p`.
//!
//! Coefficients are stored low degree first with no trailing zeros; the
//! zero polynomial is the empty vector.

use crate::error::{Error, Result};

pub type Poly = Vec<u64>;

pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[u64]) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub fn reduce(a: &[u64], p: u64) -> Poly {
    trim(a.iter().map(|&c| c % p).collect())
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

pub fn neg(a: &[u64], p: u64) -> Poly {
    trim(a.iter().map(|&c| (p - c % p) % p).collect())
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    add(a, &neg(b, p), p)
}

pub fn scale(a: &[u64], c: u64, p: u64) -> Poly {
    trim(a.iter().map(|&x| x * c % p).collect())
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

pub fn pow(a: &[u64], e: u32, p: u64) -> Poly {
    let mut out = vec![1 % p];
    for _ in 0..e {
        out = mul(&out, a, p);
    }
    trim(out)
}

pub fn inv_mod_prime(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and small
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Poly, Poly) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = inv_mod_prime(b[db], p);
    let mut r: Poly = reduce(a, p);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = r[dr] * lead_inv % p;
        let shift = dr - db;
        q[shift] = c;
        for (i, &bc) in b.iter().enumerate() {
            r[i + shift] = (r[i + shift] + p - bc * c % p) % p;
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> Poly {
    divrem(a, b, p).1
}

pub fn monic(a: &[u64], p: u64) -> Poly {
    match a.last() {
        None => Vec::new(),
        Some(&lead) => scale(a, inv_mod_prime(lead, p), p),
    }
}

/// `(g, s, t)` with `s a + t b = g`, `g` monic (or zero).
pub fn ext_gcd(a: &[u64], b: &[u64], p: u64) -> (Poly, Poly, Poly) {
    let (mut r0, mut r1) = (reduce(a, p), reduce(b, p));
    let (mut s0, mut s1): (Poly, Poly) = (vec![1], Vec::new());
    let (mut t0, mut t1): (Poly, Poly) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match r0.last() {
        None => (r0, s0, t0),
        Some(&lead) => {
            let inv = inv_mod_prime(lead, p);
            (scale(&r0, inv, p), scale(&s0, inv, p), scale(&t0, inv, p))
        }
    }
}

/// Inverse of `a` modulo `m`, if `a` is a unit there.
pub fn inv_mod(a: &[u64], m: &[u64], p: u64) -> Option<Poly> {
    let (g, s, _) = ext_gcd(a, m, p);
    if g == vec![1] {
        Some(rem(&s, m, p))
    } else {
        None
    }
}

/// All monic polynomials of the given degree, in increasing index order.
pub fn monic_of_degree(d: usize, p: u64) -> impl Iterator<Item = Poly> {
    let count = p.pow(d as u32);
    (0..count).map(move |idx| {
        let mut c = from_index(idx, p);
        c.resize(d, 0);
        c.push(1);
        c
    })
}

/// Base-`p` digits of `idx` as coefficients.
pub fn from_index(mut idx: u64, p: u64) -> Poly {
    let mut out = Vec::new();
    while idx > 0 {
        out.push(idx % p);
        idx /= p;
    }
    out
}

pub fn to_index(a: &[u64], p: u64) -> u64 {
    a.iter().rev().fold(0u64, |acc, &c| acc * p + c)
}

/// Factorization `f = c · ∏ π_i^{k_i}` into monic irreducibles by trial
/// division with the smallest-degree monic divisor.
pub fn factor(f: &[u64], p: u64) -> Vec<(Poly, u32)> {
    let mut rest = monic(f, p);
    let mut out: Vec<(Poly, u32)> = Vec::new();
    let mut d = 1;
    while degree(&rest).unwrap_or(0) >= 1 {
        if 2 * d > degree(&rest).unwrap() {
            out.push((rest.clone(), 1));
            break;
        }
        let mut found = false;
        for cand in monic_of_degree(d, p) {
            let (q, r) = divrem(&rest, &cand, p);
            if r.is_empty() {
                rest = q;
                match out.last_mut() {
                    Some((last, k)) if *last == cand => *k += 1,
                    _ => out.push((cand, 1)),
                }
                found = true;
                break;
            }
        }
        if !found {
            d += 1;
        }
    }
    // merge a trailing factor equal to an earlier one
    let mut merged: Vec<(Poly, u32)> = Vec::new();
    for (f, k) in out {
        match merged.iter_mut().find(|(g, _)| *g == f) {
            Some((_, kk)) => *kk += k,
            None => merged.push((f, k)),
        }
    }
    merged
}

pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let fs = factor(f, p);
    degree(f).unwrap_or(0) >= 1 && fs.len() == 1 && fs[0].1 == 1
}

pub fn display(a: &[u64]) -> String {
    if a.is_empty() {
        return "0".to_string();
    }
    let mut terms = Vec::new();
    for (i, &c) in a.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
        let term = match i {
            0 => coef,
            1 => format!("{coef}x"),
            _ => format!("{coef}x^{i}"),
        };
        terms.push(term);
    }
    terms.join("+")
}

/// Parses expressions such as `x^2+x+1`, `2x+1`, `3*x^2-1` or `4`.
pub fn parse(s: &str, p: u64) -> Result<Poly> {
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Error::invalid("empty polynomial"));
    }
    let mut out: Poly = Vec::new();
    let mut rest = cleaned.as_str();
    while !rest.is_empty() {
        let (negative, body) = match rest.as_bytes()[0] {
            b'+' => (false, &rest[1..]),
            b'-' => (true, &rest[1..]),
            _ => (false, rest),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let term = &body[..end];
        rest = &body[end..];
        let (coef, exp) = parse_term(term, s)?;
        let coef = coef % p;
        let coef = if negative { (p - coef) % p } else { coef };
        if out.len() <= exp {
            out.resize(exp + 1, 0);
        }
        out[exp] = (out[exp] + coef) % p;
    }
    Ok(trim(out))
}

fn parse_term(term: &str, whole: &str) -> Result<(u64, usize)> {
    let bad = || Error::invalid(format!("cannot parse polynomial {whole:?}"));
    if term.is_empty() {
        return Err(bad());
    }
    match term.find('x') {
        None => term.parse::<u64>().map(|c| (c, 0)).map_err(|_| bad()),
        Some(pos) => {
            let coef_part = term[..pos].trim_end_matches('*');
            let coef = if coef_part.is_empty() { 1 } else { coef_part.parse::<u64>().map_err(|_| bad())? };
            let exp_part = &term[pos + 1..];
            let exp = if exp_part.is_empty() {
                1
            } else {
                exp_part.strip_prefix('^').ok_or_else(bad)?.parse::<usize>().map_err(|_| bad())?
            };
            Ok((coef, exp))
        }
    }
}
