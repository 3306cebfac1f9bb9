//! Command-line front end. Every subcommand reads JSON inputs, prints a
//! deterministic report on stdout and encodes its verdict in the exit code.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::formats::{self, FamilyRef, RingRef};
use crate::gluing::LocalFamily;
use crate::homalg::{self, BoundedComplex, PerfectComplex};
use crate::integers;
use crate::rings::{FiniteModule, FiniteRing};
use crate::spectral_poset::SpectralPoset;
use crate::sweeps::{self, SuiteConfig};
use crate::thomason::{ThomasonFiltration, ThomasonSet};
use crate::torsion_cosilting as tc;
use crate::tstructures::{self, CoaisleProfile, TStructureDescriptor};

pub const JOBS_ENV: &str = "SPECTRAL_GLUE_JOBS";

#[derive(Parser, Debug)]
#[command(name = "spectral-glue", version, about = "Thomason filtrations, gluing over maximal ideals and t-structures over small rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Ring JSON, e.g. {"kind": "zmod", "n": 12}
    #[arg(long, global = true)]
    ring: Option<PathBuf>,
    /// Poset JSON: {"elements": [...], "leq": [[a, b], ...]}
    #[arg(long, global = true)]
    poset: Option<PathBuf>,
    /// Filtration JSON, or a bare Thomason set for a constant filtration
    #[arg(long, global = true)]
    filtration: Option<PathBuf>,
    /// Family of local filtrations
    #[arg(long, global = true)]
    family: Option<PathBuf>,
    /// Bounded complex JSON
    #[arg(long, global = true)]
    complex: Option<PathBuf>,
    /// Perfect source complex for derived-hom
    #[arg(long, global = true)]
    source: Option<PathBuf>,
    /// Module JSON, or a cosilting JSON for the cosilting verbs
    #[arg(long, global = true)]
    module: Option<PathBuf>,
    /// Ring elements as a JSON array, e.g. '[2, 3]'
    #[arg(long, global = true)]
    elements: Option<String>,
    /// Restrict to one maximal point
    #[arg(long, global = true)]
    at: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    degree: Option<i64>,
    /// Machine-readable output
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, default_value_t = sweeps::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true)]
    max_poset: Option<usize>,
    #[arg(long, global = true)]
    max_ring: Option<u64>,
    #[arg(long, global = true)]
    window: Option<i64>,
    #[arg(long, global = true, env = JOBS_ENV)]
    jobs: Option<usize>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Describe a poset or the spectrum of a ring
    Spec,
    /// Localize a filtration at every maximal point
    Localize,
    /// Glue a family of local filtrations
    Glue,
    /// Check condition (†) on a family
    CompatCheck,
    /// Compare (†) with the principal-closed-set description
    LemmaEquiv,
    /// Koszul complexes and the supports of their cohomology
    Koszul,
    Cohomology,
    /// Order and structure of Hom(X, Y[i]) in the derived category
    DerivedHom,
    AisleTest,
    CoaisleTest,
    TstrLocalize,
    TstrClassify,
    /// Torsion pair of a Thomason set
    Torsion,
    TorsionRoundtrip,
    CosiltingSet,
    CosiltingGlue,
    CosiltingSplit,
    /// Run the property sweeps
    Fuzz,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Value,
}

impl Verdict {
    fn of(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Value => "value",
        }
    }
}

/// Report of one invocation. Rendering is a pure function of the inputs.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub command: String,
    pub verdict: Verdict,
    pub lines: Vec<String>,
    pub result: Value,
    pub witnesses: Vec<Value>,
}

impl RunReport {
    fn new(command: &str) -> Self {
        RunReport { command: command.to_string(), verdict: Verdict::Value, lines: Vec::new(), result: Value::Null, witnesses: Vec::new() }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let v = json!({
                "command": self.command,
                "verdict": self.verdict.as_str(),
                "result": self.result,
                "witnesses": self.witnesses,
            });
            return serde_json::to_string_pretty(&v).expect("json") + "\n";
        }
        let mut out = format!("$ {}\n", self.command);
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out.push_str(&format!("verdict: {}\n", self.verdict.as_str()));
        out
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Fail => 1,
            _ => 0,
        }
    }
}

/// What the binary prints: `stdout` is deterministic, `stderr` carries
/// timing and errors.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and executes the command.
/// Exit codes: 0 pass or value, 1 fail, 2 usage or input error.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let echo = {
        let mut parts: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
        parts.insert(0, "spectral-glue".into());
        parts.join(" ")
    };
    let start = Instant::now();
    let result = match cli.jobs {
        Some(j) if j > 0 => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => pool.install(|| execute(&cli, &echo)),
            Err(e) => Err(Error::invalid(format!("cannot start {j} workers: {e}"))),
        },
        _ => execute(&cli, &echo),
    };
    let elapsed = format!("time: {:.3} s\n", start.elapsed().as_secs_f64());
    match result {
        Ok(report) => Outcome { code: report.exit_code(), stdout: report.render(cli.json), stderr: elapsed },
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n{elapsed}") },
    }
}

fn load(flag: &str, path: &Option<PathBuf>) -> Result<Value> {
    let p = path.as_ref().ok_or_else(|| Error::invalid(format!("--{flag} is required")))?;
    formats::read_json(p)
}

struct Inputs<'a> {
    cli: &'a Cli,
}

impl Inputs<'_> {
    fn ring_ref(&self) -> Result<RingRef> {
        formats::at("ring", formats::ring_from_json(&load("ring", &self.cli.ring)?))
    }

    fn ring(&self) -> Result<Arc<FiniteRing>> {
        match self.ring_ref()? {
            RingRef::Finite(r) => Ok(r),
            RingRef::Integers => Err(Error::unsupported("this command needs a finite ring, not the integers")),
        }
    }

    /// `--poset`, else the spectrum of `--ring`.
    fn poset(&self) -> Result<Arc<SpectralPoset>> {
        if self.cli.poset.is_some() {
            return formats::at("poset", formats::poset_from_json(&load("poset", &self.cli.poset)?));
        }
        if self.cli.ring.is_some() {
            return Ok(self.ring()?.spec().clone());
        }
        Err(Error::invalid("--poset or --ring is required"))
    }

    fn filtration(&self, poset: &Arc<SpectralPoset>) -> Result<ThomasonFiltration> {
        formats::at("filtration", formats::filtration_from_json(poset, &load("filtration", &self.cli.filtration)?))
    }

    fn descriptor(&self) -> Result<TStructureDescriptor> {
        let ring = self.ring()?;
        let f = self.filtration(ring.spec())?;
        TStructureDescriptor::new(ring, f)
    }

    fn complex(&self, ring: &Arc<FiniteRing>) -> Result<BoundedComplex> {
        formats::at("complex", BoundedComplex::from_json_with_ring(&load("complex", &self.cli.complex)?, ring.clone()))
    }

    fn source(&self, ring: &Arc<FiniteRing>) -> Result<PerfectComplex> {
        let b = formats::at("source", BoundedComplex::from_json_with_ring(&load("source", &self.cli.source)?, ring.clone()))?;
        PerfectComplex::from_bounded(&b)
    }

    fn module(&self, ring: &Arc<FiniteRing>) -> Result<FiniteModule> {
        formats::at("module", FiniteModule::from_json_with_ring(&load("module", &self.cli.module)?, ring.clone()))
    }

    /// The Thomason set at `--degree` (default 0) of `--filtration`.
    fn thomason_set(&self, poset: &Arc<SpectralPoset>) -> Result<ThomasonSet> {
        Ok(self.filtration(poset)?.set_at(self.cli.degree.unwrap_or(0)))
    }

    fn family(&self) -> Result<FamilyRef> {
        formats::at("family", formats::family_from_json(&load("family", &self.cli.family)?))
    }

    /// A cosilting JSON from `--module`, with `--ring` filled in when the
    /// file omits it.
    fn cosilting_value(&self) -> Result<Value> {
        let mut v = load("module", &self.cli.module)?;
        if v.get("ring").is_none() {
            let ring = self.ring()?;
            let obj = v.as_object_mut().ok_or_else(|| Error::parse("module", "expected an object"))?;
            obj.insert("ring".into(), serde_json::to_value(ring.descriptor()).expect("descriptor"));
        }
        Ok(v)
    }
}

fn describe_set(poset: &SpectralPoset, x: &ThomasonSet) -> String {
    poset.format_set(x.members())
}

fn filtration_line(f: &ThomasonFiltration) -> String {
    if f.is_constant() {
        f.poset().format_set(f.low_tail())
    } else {
        f.display()
    }
}

fn execute(cli: &Cli, echo: &str) -> Result<RunReport> {
    let inputs = Inputs { cli };
    let mut r = RunReport::new(echo);
    match cli.command {
        Command::Spec => spec(&inputs, &mut r)?,
        Command::Localize => localize(&inputs, &mut r)?,
        Command::Glue => glue(&inputs, &mut r)?,
        Command::CompatCheck => compat_check(&inputs, &mut r)?,
        Command::LemmaEquiv => lemma_equiv(&inputs, &mut r)?,
        Command::Koszul => koszul(&inputs, &mut r)?,
        Command::Cohomology => cohomology(&inputs, &mut r)?,
        Command::DerivedHom => derived_hom(&inputs, &mut r)?,
        Command::AisleTest => aisle_test(&inputs, &mut r)?,
        Command::CoaisleTest => coaisle_test(&inputs, &mut r)?,
        Command::TstrLocalize => tstr_localize(&inputs, &mut r)?,
        Command::TstrClassify => tstr_classify(&inputs, &mut r)?,
        Command::Torsion => torsion(&inputs, &mut r)?,
        Command::TorsionRoundtrip => torsion_roundtrip(&inputs, &mut r)?,
        Command::CosiltingSet => cosilting_set(&inputs, &mut r)?,
        Command::CosiltingGlue => cosilting_glue(&inputs, &mut r)?,
        Command::CosiltingSplit => cosilting_split(&inputs, &mut r)?,
        Command::Fuzz => fuzz(cli, &mut r)?,
    }
    Ok(r)
}

fn spec(inputs: &Inputs, r: &mut RunReport) -> Result<()> {
    if inputs.cli.poset.is_none() {
        if let RingRef::Integers = inputs.ring_ref()? {
            r.line("Spec Z: generic point (0) below every maximal ideal (p)");
            r.line("Thomason sets: finite sets of maximal ideals, their cofinite complements, and Spec Z");
            r.result = json!({ "ring": { "kind": "integers" }, "generic": integers::GENERIC });
            return Ok(());
        }
    }
    let poset = inputs.poset()?;
    r.line(format!("points: {}", poset.labels().iter().map(|l| l.as_str()).collect::<Vec<_>>().join(", ")));
    let covers: Vec<String> =
        poset.covers().into_iter().map(|(a, b)| format!("{} < {}", poset.label(a), poset.label(b))).collect();
    r.line(format!("covers: {}", if covers.is_empty() { "none".to_string() } else { covers.join(", ") }));
    r.line(format!("maximal: {}", poset.format_set(poset.maximal_points())));
    r.line(format!("minimal: {}", poset.format_set(poset.minimal_points())));
    let ups = poset.up_sets();
    r.line(format!("Thomason sets: {}", ups.len()));
    let mut result = json!({
        "poset": formats::poset_to_json(&poset),
        "maximal": formats::set_to_json(&poset, poset.maximal_points()),
        "thomason_sets": ups.iter().map(|&s| formats::set_to_json(&poset, s)).collect::<Vec<_>>(),
    });
    if inputs.cli.poset.is_none() {
        let ring = inputs.ring()?;
        r.line(format!("ring: {} of order {}", ring.descriptor(), ring.size()));
        let mut ideals = Vec::new();
        for ideal in ring.ideals() {
            let v = ring.v_points(&ideal);
            r.line(format!("  ideal {}: V = {}", ring.display_ideal(&ideal), ring.spec().format_set(v)));
            ideals.push(json!({ "ideal": ring.ideal_to_json(&ideal), "v": formats::set_to_json(ring.spec(), v) }));
        }
        result["ring"] = serde_json::to_value(ring.descriptor()).expect("descriptor");
        result["ideals"] = Value::Array(ideals);
    }
    r.result = result;
    Ok(())
}

fn localize(inputs: &Inputs, r: &mut RunReport) -> Result<()> {
    if inputs.cli.poset.is_none() && matches!(inputs.ring_ref()?, RingRef::Integers) {
        let f = formats::at("filtration", formats::zfiltration_from_json(&load("filtration", &inputs.cli.filtration)?))?;
        let fam = f.localize()?;
        r.line(format!("filtration: {}", f.display()));
        r.line(format!("at every other prime: {}", fam.default().display()));
        for (p, lf) in fam.exceptions() {
            r.line(format!("  at {}: {}", integers::prime_label(*p), lf.display()));
        }
        r.result = formats::zfamily_to_json(&fam);
        return Ok(());
    }
    let poset = inputs.poset()?;
    let f = inputs.filtration(&poset)?;
    let fam = LocalFamily::localize(&f)?;
    r.line(format!("filtration: {}", filtration_line(&f)));
    let mut ex = Map::new();
    for (m, lf) in fam.entries() {
        if inputs.cli.at.as_deref().is_some_and(|a| a != m.as_str()) {
            continue;
        }
        r.line(format!("  at {m}: {}", filtration_line(lf)));
        ex.insert(m.as_str().to_string(), formats::filtration_to_json(lf));
    }
    if let Some(a) = &inputs.cli.at {
        if ex.is_empty() {
            return Err(Error::invalid(format!("{a} is not a maximal point")));
        }
    }
    r.result = json!({ "poset": formats::poset_to_json(&poset), "exceptions": ex });
    Ok(())
}

fn incompatibility_witness(r: &mut RunReport, e: &Error) -> bool {
    if let Error::IncompatibleFamily { degree, left, right, prime } = e {
        r.line(format!("(†) fails at degree {degree}: {prime} lies below {left} and {right} but only one local set contains it"));
        r.witnesses.push(json!({ "degree": degree, "m1": left, "m2": right, "p": prime }));
        r.verdict = Verdict::Fail;
        true
    } else {
        false
    }
}

fn glue(inputs: &Inputs, r: &mut RunReport) -> Result<()> {
    match inputs.family()? {
        FamilyRef::Finite(fam) => match fam.glue() {
            Ok(g) => {
                r.line(format!("glued: {}", filtration_line(&g)));
                r.result = formats::filtration_to_json(&g);
                if g.is_constant() {
                    r.result = formats::set_to_json(g.poset(), g.low_tail());
                }
                r.verdict = Verdict::Pass;
            }
            Err(e) if incompatibility_witness(r, &e) => {}
            Err(e) => return Err(e),
        },
        FamilyRef::Integers(fam) => match fam.glue() {
            Ok(g) => {
                r.line(format!("glued: {}", g.display()));
                r.result = formats::zfiltration_to_json(&g);
                r.verdict = Verdict::Pass;
            }
            Err(e) if incompatibility_witness(r, &e) => {}
            Err(e) => return Err(e),
        },
    }
    Ok(())
}

fn compat_check(inputs: &Inputs, r: &mut RunReport) -> Result<()> {
    match inputs.family()? {
        FamilyRef::Finite(fam) => {
            let report = match inputs.cli.degree {
                Some(n) => Some(fam.check_dagger(n)).filter(|c| !c.dagger_holds),
                None => fam.first_violation(),
            };
            match report {
                None => {
                    r.line("(†) holds at every degree");
                    r.verdict = Verdict::Pass;
                }
                Some(c) => {
                    let (m1, m2, p) = c.violating_pair.clone().expect("violations carry a witness");
                    r.line(format!("(†) fails at degree {}: witness ({m1}, {m2}, {p})", c.degree));
                    r.witnesses.push(json!({ "degree": c.degree, "m1": m1.as_str(), "m2": m2.as_str(), "p": p.as_str() }));
                    r.verdict = Verdict::Fail;
                }
            }
        }
        FamilyRef::Integers(fam) => {
            let v = match inputs.cli.degree {
                Some(n) => fam.check_dagger(n),
                None => fam.first_violation(),
            };
            match v {
                None => {
                    r.line("(†) holds at every degree");
                    r.verdict = Verdict::Pass;
                }
                Some(v) => {
                    let (a, b) = (integers::prime_label(v.with_generic), integers::prime_label(v.without_generic));
                    r.line(format!("(†) fails at degree {}: witness ({a}, {b}, {})", v.degree, integers::GENERIC));
                    r.witnesses.push(json!({ "degree": v.degree, "m1": a, "m2": b, "p": integers::GENERIC }));
                    r.verdict = Verdict::Fail;
                }
            }
        }
    }
    Ok(())
}

fn lemma_equiv(inputs: &Inputs, r: &mut RunReport) -> Result<()> {
    let FamilyRef::Finite(fam) = inputs.family()? else {
        return Err(Error::unsupported("lemma-equiv needs a family over a finite poset"));
    };
    let degrees = match inputs.cli.degree {
        Some(n) => vec![n],
        None => fam.sample_degrees(),
    };
    let poset = fam.poset().clone();
    let mut all = true;
    let mut rows = Vec::new();
    for n in degrees {
        let l = fam.check_lemma_equiv(n);
        all &= l.equivalent();
        r.line(format!(
            "degree {n}: (i) {} (ii) {}, union {}, ideal union {}",
            l.condition_i,
            l.condition_ii,
            poset.format_set(l.union),
            poset.format_set(l.ideal_union)
        ));
        rows.push(json!({
            "degree": n,
            "condition_i": l.condition_i,
            "condition_ii": l.condition_ii,
            "union": formats::set_to_json(&poset, l.union),
            "ideal_union": formats::set_to_json(&poset, l.ideal_union),
        }));
    }
    r.result = Value::Array(rows);
    r.verdict = Verdict::of(all);
    Ok(())
}

fn cohomology_rows(r: &mut RunReport, c: &BoundedComplex) -> Vec<Value> {
    let ring = c.ring();
    let mut rows = Vec::new();
    if let Some((lo, hi)) = c.range() {
        for n in lo..=hi {
            let h = c.cohomology(n);
            let s = c.support_of_cohomology(n);
            r.line(format!("  H^{n} = {}, support {}", h.describe(), ring.spec().format_set(s)));
            rows.push(json!({ "degree": n, "module": h.to_json(), "support": formats::set_to_json(ring.spec(), s) }));
        }
    }
    rows
}

fn koszul(inputs: &Inputs, r: &mut RunReport) -> Result<()> {
    let ring = inputs.ring()?;
    let lists: Vec<Vec<crate::rings::Elem>> = match &inputs.cli.elements {
        Some(text) => {
            let v: Value = serde_json::from_str(text).map_err(|e| Error::parse("elements", e.to_string()))?;
            let arr = v.as_array().ok_or_else(|| Error::parse("elements", "expected a JSON array"))?;
            let xs = arr
                .iter()
                .enumerate()
                .map(|(i, x)| formats::at(&format!("elements[{i}]"), ring.parse_elem(x)))
                .collect::<Result<Vec<_>>>()?;
            vec![xs]
        }
        None => ring.ideals().iter().map(|i| vec![ring.ideal_generator(i)]).collect(),
    };
    let mut ok = true;
    let mut out = Vec::new();
    for xs in lists {
        let ideal = ring.ideal_from_generators(&xs);
        let v = ring.v_points(&ideal);
        let k = PerfectComplex::koszul(&ring, &xs)?.as_bounded()?;
        let names: Vec<String> = xs.iter().map(|x| ring.display_elem(x)).collect();
        r.line(format!("K({}): ideal {}, V = {}", names.join(", "), ring.display_ideal(&ideal), ring.spec().format_set(v)));
        let rows = cohomology_rows(r, &k);
        let (lo, hi) = k.range().expect("nonempty");
        let supported = (lo..=hi).all(|n| k.support_of_cohomology(n).is_subset(v));
        ok &= supported;
        if !supported {
            r.witnesses.push(json!({ "elements": xs.iter().map(|x| ring.elem_to_json(x)).collect::<Vec<_>>() }));
        }
        out.push(json!({
            "elements": xs.iter().map(|x| ring.elem_to_json(x)).collect::<Vec<_>>(),
            "v": formats::set_to_json(ring.spec(), v),
            "cohomology": rows,
            "supported_on_v": supported,
        }));
    }
    r.result = Value::Array(out);
    r.verdict = Verdict::of(ok);
    Ok(())
}

fn cohomology(inputs: &Inputs, r: &mut RunReport) -> Result<()> {
    let ring = inputs.ring()?;
    let c = inputs.complex(&ring)?;
    if c.is_zero() {
        r.line("zero complex");
    }
    r.result = Value::Array(cohomology_rows(r, &c));
    Ok(())
}

fn derived_hom(inputs: &Inputs, r: &mut RunReport) -> Result<()> {
    let ring = inputs.ring()?;
    let x = inputs.source(&ring)?;
    let y = inputs.complex(&ring)?;
    let i = inputs.cli.degree.unwrap_or(0);
    let h = homalg::derived_hom(&x, &y, i)?;
    r.line(format!("Hom(X, Y[{i}]) = {} of order {}", h.describe(), h.order()));
    r.result = json!({ "degree": i, "order": h.order().to_string(), "module": h.to_json() });
    r.verdict = Verdict::Value;
    Ok(())
}

fn aisle_test(inputs: &Inputs, r: &mut RunReport) -> Result<()> {
    let t = inputs.descriptor()?;
    let x = inputs.complex(t.ring())?;
    let member = tstructures::aisle_membership(&x, &t)?;
    let spec = t.ring().spec();
    if let Some((lo, hi)) = x.range() {
        for n in lo..=hi {
            let s = x.support_of_cohomology(n);
            if !s.is_subset(t.filtration().at(n)) {
                r.line(format!("degree {n}: Supp H^{n} = {} is not inside X_{n} = {}", spec.format_set(s), spec.format_set(t.filtration().at(n))));
                r.witnesses.push(json!({ "degree": n, "support": formats::set_to_json(spec, s) }));
                break;
            }
        }
    }
    r.line(format!("in aisle: {member}"));
    r.result = json!({ "member": member });
    r.verdict = Verdict::of(member);
    Ok(())
}

fn coaisle_test(inputs: &Inputs, r: &mut RunReport) -> Result<()> {
    let t = inputs.descriptor()?;
    let y = inputs.complex(t.ring())?;
    let member = tstructures::coaisle_membership(&y, &t)?;
    let ring = t.ring();
    if let Some((n, ideal)) = CoaisleProfile::new(&y)?.witness(t.filtration()) {
        let v = ring.v_points(ideal);
        r.line(format!(
            "degree {n}: Hom(K({}), Y[{n}]) ≠ 0 while V = {} ⊆ X_{n}",
            ring.display_ideal(ideal),
            ring.spec().format_set(v)
        ));
        r.witnesses.push(json!({ "degree": n, "ideal": ring.ideal_to_json(ideal), "v": formats::set_to_json(ring.spec(), v) }));
    }
    r.line(format!("in coaisle: {member}"));
    r.result = json!({ "member": member });
    r.verdict = Verdict::of(member);
    Ok(())
}

fn tstr_localize(inputs: &Inputs, r: &mut RunReport) -> Result<()> {
    let t = inputs.descriptor()?;
    let family = tstructures::localize_family(&t)?;
    let mut out = Map::new();
    for (m, lt) in &family {
        if inputs.cli.at.as_deref().is_some_and(|a| a != m) {
            continue;
        }
        r.line(format!("at {m}: {} with {}", lt.ring().descriptor(), filtration_line(lt.filtration())));
        out.insert(
            m.clone(),
            json!({
                "ring": serde_json::to_value(lt.ring().descriptor()).expect("descriptor"),
                "filtration": formats::filtration_to_json(lt.filtration()),
            }),
        );
    }
    if let Some(a) = &inputs.cli.at {
        if out.is_empty() {
            return Err(Error::invalid(format!("{a} is not a maximal ideal")));
        }
    }
    r.result = Value::Object(out);
    Ok(())
}

fn tstr_classify(inputs: &Inputs, r: &mut RunReport) -> Result<()> {
    let poset = inputs.poset()?;
    let f = inputs.filtration(&poset)?;
    let class = tstructures::classify_filtration(&f);
    r.line(format!("{}: {class}", filtration_line(&f)));
    r.result = json!({ "class": class.to_string() });
    Ok(())
}

fn torsion(inputs: &Inputs, r: &mut RunReport) -> Result<()> {
    let ring = inputs.ring()?;
    let x = inputs.thomason_set(ring.spec())?;
    r.line(format!("X = {}", describe_set(ring.spec(), &x)));
    let cyclics = tc::torsion_cyclics(&ring, &x);
    let names: Vec<String> = cyclics.iter().map(|i| format!("R/{}", ring.display_ideal(i))).collect();
    r.line(format!("torsion cyclics: {}", names.join(", ")));
    let class = tc::injective_class_of(&ring, &x)?;
    r.line(format!("torsion-free indecomposable injectives: {}", class.iter().map(FiniteModule::describe).collect::<Vec<_>>().join(", ")));
    let mut result = json!({
        "set": formats::set_to_json(ring.spec(), x.members()),
        "torsion_cyclics": cyclics.iter().map(|i| ring.ideal_to_json(i)).collect::<Vec<_>>(),
        "injectives": class.iter().map(FiniteModule::to_json).collect::<Vec<_>>(),
    });
    if inputs.cli.module.is_some() {
        let m = inputs.module(&ring)?;
        let t = tc::torsion_submodule(&m, &x);
        let (is_t, is_f) = (tc::is_torsion(&m, &x), tc::is_torsionfree(&m, &x));
        r.line(format!("t(M) = {}; torsion {is_t}, torsion-free {is_f}", t.describe()));
        result["module"] = json!({ "torsion_part": t.to_json(), "is_torsion": is_t, "is_torsionfree": is_f });
    }
    r.result = result;
    Ok(())
}

fn torsion_roundtrip(inputs: &Inputs, r: &mut RunReport) -> Result<()> {
    let ring = inputs.ring()?;
    let report = sweeps::torsion_bijections(std::slice::from_ref(&ring));
    r.line(format!("{} Thomason sets checked", report.instances));
    for v in &report.violations {
        r.line(format!("  {}: {} {}", v.property, v.detail, v.fixture));
        r.witnesses.push(v.fixture.clone());
    }
    r.result = json!({ "instances": report.instances, "violations": report.violations.len() });
    r.verdict = Verdict::of(report.passed());
    Ok(())
}

/// A cosilting JSON, or a bare module whose copresentation is searched.
fn cosilting_from(inputs: &Inputs) -> Result<Option<tc::CosiltingModule>> {
    let v = inputs.cosilting_value()?;
    if v.get("q0").is_some() {
        return formats::at("module", tc::CosiltingModule::from_json(&v)).map(Some);
    }
    let ring = formats::at("module.ring", formats::finite_ring_from_json(v.get("ring").expect("filled in")))?;
    let inner = v.get("module").cloned().unwrap_or_else(|| v.clone());
    let m = formats::at("module", FiniteModule::from_json_with_ring(&inner, ring))?;
    tc::search_copresentation(&m, None)
}

fn cosilting_lines(r: &mut RunReport, c: &tc::CosiltingModule) {
    let spec = c.ring().spec();
    r.line(format!("C = {}: 0 → C → {} → {}", c.module().describe(), c.q0().describe(), c.q1().describe()));
    r.line(format!("Thomason set: {}", describe_set(spec, &c.thomason_set())));
}

fn cosilting_set(inputs: &Inputs, r: &mut RunReport) -> Result<()> {
    match cosilting_from(inputs)? {
        None => {
            r.line("no cosilting copresentation within the rank bound");
            r.verdict = Verdict::Fail;
        }
        Some(c) => {
            let check = c.check(c.default_bound());
            cosilting_lines(r, &c);
            r.line(format!("B_η = Cogen(C) on {} test modules: {}", check.tested, check.holds()));
            if let Some(m) = &check.counterexample {
                r.witnesses.push(m.to_json());
            }
            r.result = json!({
                "set": formats::set_to_json(c.ring().spec(), c.thomason_set().members()),
                "cosilting": c.to_json(),
            });
            r.verdict = Verdict::of(check.holds());
        }
    }
    Ok(())
}

fn cosilting_split(inputs: &Inputs, r: &mut RunReport) -> Result<()> {
    let c = cosilting_from(inputs)?.ok_or_else(|| Error::invalid("module is not cosilting within the rank bound"))?;
    cosilting_lines(r, &c);
    let mut out = Map::new();
    for (m, comp) in tc::components_of_cosilting(&c)? {
        r.line(format!("  at {m}: {} over {}, set {}", comp.module().describe(), comp.ring().descriptor(), describe_set(comp.ring().spec(), &comp.thomason_set())));
        out.insert(m, comp.to_json());
    }
    r.result = json!({ "ring": c.ring().descriptor(), "components": out });
    Ok(())
}

fn cosilting_glue(inputs: &Inputs, r: &mut RunReport) -> Result<()> {
    let v = load("family", &inputs.cli.family)?;
    let ring = match v.get("ring") {
        Some(rv) => formats::at("family.ring", formats::finite_ring_from_json(rv))?,
        None => inputs.ring()?,
    };
    let comps = v
        .get("components")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::parse("family.components", "expected an object keyed by maximal ideal"))?;
    let mut family = BTreeMap::new();
    for (m, cv) in comps {
        let path = format!("family.components.{m}");
        let (local, _) = ring.localize(m).map_err(|e| Error::parse(path.clone(), e.to_string()))?;
        let mut cv = cv.clone();
        if let Some(obj) = cv.as_object_mut() {
            obj.entry("ring").or_insert_with(|| serde_json::to_value(local.descriptor()).expect("descriptor"));
        }
        let c = if cv.get("q0").is_some() {
            formats::at(&path, tc::CosiltingModule::from_json(&cv))?
        } else {
            let inner = cv.get("module").cloned().unwrap_or_else(|| cv.clone());
            let module = formats::at(&path, FiniteModule::from_json_with_ring(&inner, local))?;
            tc::search_copresentation(&module, None)?
                .ok_or_else(|| Error::invalid(format!("component at {m} is not cosilting within the rank bound")))?
        };
        family.insert(m.clone(), c);
    }
    let glued = tc::glue_cosilting(&ring, &family)?;
    let set = tc::glue_component_sets(&ring, &family)?;
    cosilting_lines(r, &glued);
    let agrees = set == glued.thomason_set();
    r.line(format!("componentwise sets glue to {}", describe_set(ring.spec(), &set)));
    r.result = json!({ "cosilting": glued.to_json(), "set": formats::set_to_json(ring.spec(), set.members()) });
    r.verdict = Verdict::of(agrees && glued.is_cosilting());
    Ok(())
}

fn fuzz(cli: &Cli, r: &mut RunReport) -> Result<()> {
    let mut cfg = SuiteConfig { seed: cli.seed, ..SuiteConfig::default() };
    if let Some(p) = cli.max_poset {
        if p > 7 {
            return Err(Error::invalid("--max-poset is limited to 7"));
        }
        cfg.max_poset = p;
        cfg.filtration_poset = p.min(4);
    }
    if let Some(n) = cli.max_ring {
        if n < 2 {
            return Err(Error::invalid("--max-ring must be at least 2"));
        }
        cfg.max_ring = n;
    }
    if let Some(w) = cli.window {
        if !(0..=3).contains(&w) {
            return Err(Error::invalid("--window must lie in 0..=3"));
        }
        cfg.window = w;
    }
    r.line(format!(
        "seed {}, posets ≤ {}, filtrations on posets ≤ {} in [-{w}, {w}], rings |R| ≤ {}",
        cfg.seed,
        cfg.max_poset,
        cfg.filtration_poset,
        cfg.max_ring,
        w = cfg.window
    ));
    let reports = sweeps::run_all(&cfg);
    let mut ok = true;
    let mut out = Vec::new();
    for rep in &reports {
        ok &= rep.passed();
        r.line(rep.summary());
        for v in rep.violations.iter().take(5) {
            r.line(format!("  {}: {}", v.property, v.detail));
            r.line(format!("  fixture: {}", v.fixture));
        }
        if rep.violations.len() > 5 {
            r.line(format!("  … {} more", rep.violations.len() - 5));
        }
        r.witnesses.extend(rep.violations.iter().map(|v| json!({ "sweep": rep.name, "property": v.property, "detail": v.detail, "fixture": v.fixture })));
        out.push(json!({ "name": rep.name, "instances": rep.instances, "counters": rep.counters, "violations": rep.violations.len() }));
    }
    r.result = json!({ "seed": cfg.seed, "sweeps": out });
    r.verdict = Verdict::of(ok);
    Ok(())
}
