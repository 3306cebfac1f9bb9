//! JSON loaders and writers for the command-line formats.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::gluing::{template_poset, LocalFamily};
use crate::integers::{self, ZFamily, ZFiltration, ZSet};
use crate::rings::{FiniteRing, RingDescriptor};
use crate::spectral_poset::{PointSet, SpectralPoset};
use crate::thomason::ThomasonFiltration;

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::parse(path.display().to_string(), format!("cannot read: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::parse(path.display().to_string(), e.to_string()))
}

/// Prefixes the path of a parse error.
pub fn at<T>(prefix: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { path, message } if path.is_empty() => Error::parse(prefix, message),
        Error::Parse { path, message } => Error::parse(format!("{prefix}.{path}"), message),
        other => other,
    })
}

#[derive(Clone, Debug)]
pub enum RingRef {
    Finite(Arc<FiniteRing>),
    Integers,
}

fn ring_descriptor(v: &Value) -> Result<RingDescriptor> {
    let inner = v.get("ring").unwrap_or(v);
    serde_json::from_value(inner.clone()).map_err(|e| Error::parse("", e.to_string()))
}

/// `{"kind": ...}` or an object carrying it under `"ring"`.
pub fn ring_from_json(v: &Value) -> Result<RingRef> {
    match ring_descriptor(v)? {
        RingDescriptor::Integers => Ok(RingRef::Integers),
        d => Ok(RingRef::Finite(FiniteRing::new(d)?)),
    }
}

pub fn finite_ring_from_json(v: &Value) -> Result<Arc<FiniteRing>> {
    match ring_from_json(v)? {
        RingRef::Finite(r) => Ok(r),
        RingRef::Integers => Err(Error::unsupported("this operation needs a finite ring, not the integers")),
    }
}

fn looks_like_ring(v: &Value) -> bool {
    v.get("kind").is_some() || v.get("ring").is_some()
}

/// Either `{"elements": [...], "leq": [[a, b], ...]}` or a ring, read as
/// its spectrum.
pub fn poset_from_json(v: &Value) -> Result<Arc<SpectralPoset>> {
    if looks_like_ring(v) {
        return Ok(finite_ring_from_json(v)?.spec().clone());
    }
    let elements = v
        .get("elements")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::parse("elements", "expected an array of labels"))?;
    let labels = elements
        .iter()
        .enumerate()
        .map(|(i, e)| e.as_str().map(str::to_string).ok_or_else(|| Error::parse(format!("elements[{i}]"), "expected a string")))
        .collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::new();
    if let Some(leq) = v.get("leq") {
        let leq = leq.as_array().ok_or_else(|| Error::parse("leq", "expected an array of pairs"))?;
        for (i, pair) in leq.iter().enumerate() {
            match pair.as_array().map(Vec::as_slice) {
                Some([Value::String(a), Value::String(b)]) => pairs.push((a.clone(), b.clone())),
                _ => return Err(Error::parse(format!("leq[{i}]"), "expected a pair of labels")),
            }
        }
    }
    Ok(Arc::new(SpectralPoset::new(&labels, &pairs)?))
}

pub fn poset_to_json(p: &SpectralPoset) -> Value {
    let leq: Vec<Value> = p.covers().into_iter().map(|(a, b)| json!([p.label(a).as_str(), p.label(b).as_str()])).collect();
    json!({ "elements": p.labels().iter().map(|l| l.as_str()).collect::<Vec<_>>(), "leq": leq })
}

/// `"full"`, `"empty"` or a list of labels.
pub fn set_from_json(poset: &SpectralPoset, v: &Value) -> Result<PointSet> {
    match v {
        Value::String(s) if s == "full" => Ok(poset.full()),
        Value::String(s) if s == "empty" => Ok(PointSet::EMPTY),
        Value::Array(items) => {
            let mut out = PointSet::EMPTY;
            for (i, item) in items.iter().enumerate() {
                let label = item.as_str().ok_or_else(|| Error::parse(format!("[{i}]"), "expected a label"))?;
                out.insert(poset.index_of(label).map_err(|e| Error::parse(format!("[{i}]"), e.to_string()))?);
            }
            Ok(out)
        }
        _ => Err(Error::parse("", "expected \"full\", \"empty\" or a list of labels")),
    }
}

pub fn set_to_json(poset: &SpectralPoset, s: PointSet) -> Value {
    json!(poset.labels_of(s))
}

/// Filtration JSON; a bare set is read as a constant filtration.
pub fn filtration_from_json(poset: &Arc<SpectralPoset>, v: &Value) -> Result<ThomasonFiltration> {
    if !v.is_object() {
        let s = set_from_json(poset, v)?;
        return ThomasonFiltration::constant(poset.clone(), s);
    }
    let low = at("low_tail", set_from_json(poset, v.get("low_tail").ok_or_else(|| Error::parse("low_tail", "missing"))?))?;
    let mut bps = Vec::new();
    if let Some(b) = v.get("breakpoints") {
        let arr = b.as_array().ok_or_else(|| Error::parse("breakpoints", "expected an array"))?;
        for (i, bp) in arr.iter().enumerate() {
            let path = format!("breakpoints[{i}]");
            let n = bp.get("n").and_then(Value::as_i64).ok_or_else(|| Error::parse(format!("{path}.n"), "expected an integer"))?;
            let set = bp.get("set").ok_or_else(|| Error::parse(format!("{path}.set"), "missing"))?;
            bps.push((n, at(&format!("{path}.set"), set_from_json(poset, set))?));
        }
    }
    let high = match v.get("high_tail") {
        Some(h) => at("high_tail", set_from_json(poset, h))?,
        None => bps.iter().max_by_key(|b| b.0).map_or(low, |b| b.1),
    };
    ThomasonFiltration::new(poset.clone(), low, &bps, high)
}

pub fn filtration_to_json(f: &ThomasonFiltration) -> Value {
    let p = f.poset();
    let bps: Vec<Value> =
        f.breakpoints().into_iter().map(|(n, s)| json!({ "n": n, "set": set_to_json(p, s) })).collect();
    json!({
        "low_tail": set_to_json(p, f.low_tail()),
        "breakpoints": bps,
        "high_tail": set_to_json(p, f.high_tail()),
    })
}

#[derive(Clone, Debug)]
pub enum FamilyRef {
    Finite(LocalFamily),
    Integers(ZFamily),
}

/// Family JSON: `{"poset": <poset or ring>, "default": <filtration>,
/// "exceptions": {"m": <filtration>}}`. The default lives on the chain
/// `(0) < m`; each exception on the localization at its key.
pub fn family_from_json(v: &Value) -> Result<FamilyRef> {
    let base = v.get("poset").or_else(|| v.get("ring")).ok_or_else(|| Error::parse("poset", "missing"))?;
    let template = template_poset();
    let default = match v.get("default") {
        Some(d) => Some(at("default", filtration_from_json(&template, d))?),
        None => None,
    };
    let empty = Map::new();
    let exceptions = match v.get("exceptions") {
        None => &empty,
        Some(e) => e.as_object().ok_or_else(|| Error::parse("exceptions", "expected an object"))?,
    };
    let integers = looks_like_ring(base) && matches!(at("poset", ring_descriptor(base))?, RingDescriptor::Integers);
    if integers {
        let default = default.ok_or_else(|| Error::parse("default", "a family over Spec Z needs a default"))?;
        let mut ex = BTreeMap::new();
        for (k, f) in exceptions {
            let p = at(&format!("exceptions.{k}"), integers::parse_prime(k).map_err(|e| Error::parse("", e.to_string())))?;
            ex.insert(p, at(&format!("exceptions.{k}"), filtration_from_json(&integers::local_poset(p)?, f))?);
        }
        return Ok(FamilyRef::Integers(ZFamily::new(default, ex)?));
    }
    let poset = at("poset", poset_from_json(base))?;
    let mut ex = BTreeMap::new();
    for (k, f) in exceptions {
        let (local, _) = poset.localization(k).map_err(|e| Error::parse(format!("exceptions.{k}"), e.to_string()))?;
        ex.insert(k.clone(), at(&format!("exceptions.{k}"), filtration_from_json(&local, f))?);
    }
    Ok(FamilyRef::Finite(LocalFamily::new(poset, default.as_ref(), &ex)?))
}

pub fn local_family_to_json(f: &LocalFamily) -> Value {
    let mut ex = Map::new();
    for (m, filt) in f.entries() {
        ex.insert(m.as_str().to_string(), filtration_to_json(filt));
    }
    json!({ "poset": poset_to_json(f.poset()), "exceptions": ex })
}

fn zset_to_json(s: &ZSet) -> Value {
    let labels = |ps: &BTreeSet<u64>| ps.iter().map(|&p| integers::prime_label(p)).collect::<Vec<_>>();
    match s {
        ZSet::Full => json!("full"),
        ZSet::Finite(ps) => json!(labels(ps)),
        ZSet::Cofinite(ps) => json!({ "all_maximal_except": labels(ps) }),
    }
}

/// `"full"`, `"empty"`, a list of prime labels, or
/// `{"all_maximal_except": [...]}`. A list naming `(0)` is all of `Spec Z`.
pub fn zset_from_json(v: &Value) -> Result<ZSet> {
    let primes = |items: &[Value]| -> Result<(BTreeSet<u64>, bool)> {
        let mut ps = BTreeSet::new();
        let mut generic = false;
        for (i, item) in items.iter().enumerate() {
            let label = item.as_str().ok_or_else(|| Error::parse(format!("[{i}]"), "expected a prime label"))?;
            if label == integers::GENERIC {
                generic = true;
            } else {
                ps.insert(integers::parse_prime(label).map_err(|e| Error::parse(format!("[{i}]"), e.to_string()))?);
            }
        }
        Ok((ps, generic))
    };
    match v {
        Value::String(s) if s == "full" => Ok(ZSet::Full),
        Value::String(s) if s == "empty" => Ok(ZSet::empty()),
        Value::Array(items) => match primes(items)? {
            (_, true) => Ok(ZSet::Full),
            (ps, false) => Ok(ZSet::Finite(ps)),
        },
        Value::Object(o) => {
            let items = o
                .get("all_maximal_except")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::parse("all_maximal_except", "expected an array of prime labels"))?;
            match at("all_maximal_except", primes(items))? {
                (_, true) => Err(Error::parse("all_maximal_except", "the generic point is not maximal")),
                (ps, false) => Ok(ZSet::Cofinite(ps)),
            }
        }
        _ => Err(Error::parse("", "expected a Thomason subset of Spec Z")),
    }
}

/// `{"low_tail": <set>, "steps": [{"n": .., "set": ..}]}`, or a bare set.
pub fn zfiltration_from_json(v: &Value) -> Result<ZFiltration> {
    if !v.is_object() || v.get("all_maximal_except").is_some() {
        return ZFiltration::from_steps(zset_from_json(v)?, Vec::new());
    }
    let low = at("low_tail", zset_from_json(v.get("low_tail").ok_or_else(|| Error::parse("low_tail", "missing"))?))?;
    let mut steps = Vec::new();
    if let Some(arr) = v.get("steps").or_else(|| v.get("breakpoints")) {
        let arr = arr.as_array().ok_or_else(|| Error::parse("steps", "expected an array"))?;
        for (i, st) in arr.iter().enumerate() {
            let path = format!("steps[{i}]");
            let n = st.get("n").and_then(Value::as_i64).ok_or_else(|| Error::parse(format!("{path}.n"), "expected an integer"))?;
            let set = st.get("set").ok_or_else(|| Error::parse(format!("{path}.set"), "missing"))?;
            steps.push((n, at(&format!("{path}.set"), zset_from_json(set))?));
        }
    }
    ZFiltration::from_steps(low, steps)
}

pub fn zfiltration_to_json(f: &ZFiltration) -> Value {
    let steps: Vec<Value> = f.steps().iter().map(|(n, s)| json!({ "n": n, "set": zset_to_json(s) })).collect();
    json!({ "low_tail": zset_to_json(f.low_tail()), "steps": steps })
}

pub fn zfamily_to_json(f: &ZFamily) -> Value {
    let mut ex = Map::new();
    for (p, filt) in f.exceptions() {
        ex.insert(integers::prime_label(*p), filtration_to_json(filt));
    }
    json!({ "poset": { "kind": "integers" }, "default": filtration_to_json(f.default()), "exceptions": ex })
}
