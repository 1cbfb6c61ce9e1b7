//! Run configurations, consistency checks, and JSON/text reports.
//!
//! Reports are fully deterministic: exact integers (Gram entries,
//! discriminants, H²) are emitted as JSON integers of arbitrary size, and
//! every real number is pre-rendered to a decimal string at the configured
//! precision, so emitting the same run twice is byte-identical and
//! `parse(emit(r)) == r` exactly.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Number, Value};

use crate::conevol::{mc_volume, positive_cone_volume, volume_bounds, TruncatedCone};
use crate::error::Error;
use crate::exact_linalg::IntSymMatrix;
use crate::quaternion::{QuatAlg, QuatElem};
use crate::surfaces::{
    build_model, closed_form_discriminant, closed_form_volume, validate_ample_on, SurfaceSpec,
};
use crate::Result;

/// Closed formula vs. the Lorentz-frame route must agree to this relative error.
pub const REL_TOL_CLOSED_VS_PROP1: f64 = 1e-12;
/// Monte Carlo estimates must fall within this many standard errors of the
/// exact volume …
pub const MC_SIGMA_FACTOR: f64 = 4.0;
/// … plus this many ε·|reference| of rounding slack, which is what keeps the
/// degenerate ρ = 1 case (stderr exactly 0) honest: there the check compares
/// two algebraically equal f64 computations that may differ in the last ulp.
pub const MC_ULP_SLACK: f64 = 8.0;

pub const DEFAULT_SAMPLES: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_PRECISION: usize = 12;

/// What the run computes volumes for: a taxonomy surface or a raw lattice.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, PartialEq)]
pub enum SurfaceInput {
    Taxonomy(SurfaceSpec),
    Generic { gram: IntSymMatrix, canonical_ample: Vec<i64> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub surface: SurfaceInput,
    /// Ample class to truncate with; defaults to the canonical one.
    pub ample: Option<Vec<i64>>,
    pub samples: u64,
    pub seed: u64,
    pub mc: bool,
    /// Significant decimal digits for real numbers in the report (1..=17).
    pub precision: usize,
}

impl RunConfig {
    pub fn new(surface: SurfaceInput) -> Self {
        RunConfig {
            surface,
            ample: None,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            mc: true,
            precision: DEFAULT_PRECISION,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceDesc {
    pub kind: String,
    pub params: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub estimate: String,
    pub stderr: String,
    pub samples: u64,
    pub seed: u64,
    pub hits: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub nef: String,
    pub positive: String,
    pub big: String,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeReport {
    pub surface: SurfaceDesc,
    pub rho: usize,
    pub signature: [usize; 3],
    pub gram: Vec<Vec<Number>>,
    pub discriminant: Number,
    pub ample: Vec<i64>,
    pub h_squared: Number,
    /// Absent for generic lattices (no classification formula applies).
    pub closed_form_volume: Option<String>,
    pub positive_cone_volume: String,
    pub bounds: BoundsReport,
    pub mc: Option<McReport>,
    pub checks: Vec<CheckReport>,
}

impl VolumeReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn from_json(s: &str) -> Result<VolumeReport> {
        serde_json::from_str(s).map_err(|e| Error::Config(format!("invalid report JSON: {e}")))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let p = &mut out;
        use std::fmt::Write;
        writeln!(p, "surface: {} {}", self.surface.kind, self.surface.params).unwrap();
        writeln!(
            p,
            "rho: {}   signature: ({},{},{})",
            self.rho, self.signature[0], self.signature[1], self.signature[2]
        )
        .unwrap();
        writeln!(p, "gram:").unwrap();
        for row in &self.gram {
            let cells: Vec<String> = row.iter().map(|n| n.to_string()).collect();
            writeln!(p, "  [{}]", cells.join(", ")).unwrap();
        }
        writeln!(p, "discriminant: {}", self.discriminant).unwrap();
        writeln!(p, "ample: {:?}   H^2: {}", self.ample, self.h_squared).unwrap();
        if let Some(cf) = &self.closed_form_volume {
            writeln!(p, "closed-form volume:   {cf}").unwrap();
        }
        writeln!(p, "positive-cone volume: {}", self.positive_cone_volume).unwrap();
        writeln!(
            p,
            "bounds: nef {} | positive {} | big {}{}",
            self.bounds.nef,
            self.bounds.positive,
            self.bounds.big,
            if self.bounds.equal { " (coincide)" } else { "" }
        )
        .unwrap();
        if let Some(mc) = &self.mc {
            writeln!(
                p,
                "mc: {} +- {}  (samples {}, seed {}, hits {})",
                mc.estimate, mc.stderr, mc.samples, mc.seed, mc.hits
            )
            .unwrap();
        }
        writeln!(p, "checks:").unwrap();
        for c in &self.checks {
            writeln!(
                p,
                "  {:<22} {}  {}",
                c.name,
                if c.passed { "PASS" } else { "FAIL" },
                c.detail
            )
            .unwrap();
        }
        writeln!(p, "overall: {}", if self.all_passed() { "PASS" } else { "FAIL" }).unwrap();
        out
    }
}

fn format_real(x: f64, precision: usize) -> String {
    let digits = precision.clamp(1, 17);
    format!("{:.*e}", digits - 1, x)
}

fn number_from_bigint(x: &BigInt) -> Number {
    serde_json::from_str(&x.to_string()).expect("integer literal")
}

fn rational_value(x: &num_rational::BigRational) -> Value {
    if x.is_integer() {
        Value::Number(number_from_bigint(&x.to_integer()))
    } else {
        Value::String(x.to_string())
    }
}

fn quat_coords_value(q: &QuatElem) -> Value {
    Value::Array(q.coords().iter().map(|c| rational_value(c)).collect())
}

fn spec_params(spec: &SurfaceSpec) -> Value {
    match spec {
        SurfaceSpec::IntegerMult | SurfaceSpec::ProductNonIsogenous => json!({}),
        SurfaceSpec::RealMult { d, f } | SurfaceSpec::ComplexMult { d, f } => {
            json!({ "d": d, "f": f })
        }
        SurfaceSpec::QuaternionMult { a, b } => {
            let alg = a.alg();
            let mut m = Map::new();
            m.insert("alpha".into(), json!(alg.alpha()));
            m.insert("beta".into(), json!(alg.beta()));
            m.insert("a".into(), quat_coords_value(a));
            m.insert("b".into(), quat_coords_value(b));
            Value::Object(m)
        }
        SurfaceSpec::ProductIsogenousNoCm { min_degree } => json!({ "min_degree": min_degree }),
        SurfaceSpec::ProductIsogenousCm { d, f1, f2 } => json!({ "d": d, "f1": f1, "f2": f2 }),
    }
}

struct Resolved {
    kind: String,
    params: Value,
    spec: Option<SurfaceSpec>,
    gram: IntSymMatrix,
    canonical: Vec<i64>,
}

fn resolve(input: &SurfaceInput) -> Result<Resolved> {
    match input {
        SurfaceInput::Taxonomy(spec) => {
            let model = build_model(spec)?;
            Ok(Resolved {
                kind: spec.kind().to_string(),
                params: spec_params(spec),
                spec: Some(spec.clone()),
                gram: model.gram().clone(),
                canonical: model.canonical_ample().to_vec(),
            })
        }
        SurfaceInput::Generic { gram, canonical_ample } => {
            let inertia = gram.signature();
            if !inertia.is_hyperbolic(gram.dim()) {
                return Err(Error::Signature {
                    pos: inertia.pos,
                    neg: inertia.neg,
                    zero: inertia.zero,
                });
            }
            validate_ample_on(gram, canonical_ample, canonical_ample)?;
            Ok(Resolved {
                kind: "generic".to_string(),
                params: json!({}),
                spec: None,
                gram: gram.clone(),
                canonical: canonical_ample.clone(),
            })
        }
    }
}

fn check(name: &str, passed: bool, detail: String) -> CheckReport {
    CheckReport { name: name.to_string(), passed, detail }
}

/// Builds the model, computes every volume route that applies, and runs the
/// consistency checks.  Errors are reserved for invalid input; a report
/// with failing checks is returned normally so callers can surface it.
pub fn run(cfg: &RunConfig) -> Result<VolumeReport> {
    if !(1..=17).contains(&cfg.precision) {
        return Err(Error::Config(format!("precision must be in 1..=17, got {}", cfg.precision)));
    }
    let resolved = resolve(&cfg.surface)?;
    let rho = resolved.gram.dim();
    let coords = cfg.ample.clone().unwrap_or_else(|| resolved.canonical.clone());
    let ample = validate_ample_on(&resolved.gram, &resolved.canonical, &coords)?;
    let inertia = resolved.gram.signature();
    let det = resolved.gram.det_exact();
    let lorentz = positive_cone_volume(&resolved.gram, &coords)?;
    let bounds = volume_bounds(&resolved.gram, &coords, resolved.spec.is_some())?;

    let mut checks = Vec::new();
    checks.push(check(
        "signature",
        inertia.is_hyperbolic(rho),
        format!("({},{},{})", inertia.pos, inertia.neg, inertia.zero),
    ));
    checks.push(check("ampleness", true, format!("H^2 = {}", ample.h_squared())));

    let closed = match &resolved.spec {
        Some(spec) => {
            let cf_disc = closed_form_discriminant(spec)?;
            checks.push(check(
                "det-vs-closed-form",
                cf_disc == det,
                format!("closed {cf_disc}, det {det}"),
            ));
            let cv = closed_form_volume(spec, &ample)?;
            let rel = (cv - lorentz).abs() / cv.abs().max(lorentz.abs());
            checks.push(check(
                "closed-form-vs-prop1",
                rel <= REL_TOL_CLOSED_VS_PROP1,
                format!("relative difference {rel:.3e}"),
            ));
            Some(cv)
        }
        None => None,
    };

    let mc = if cfg.mc {
        let cone = TruncatedCone::new(resolved.gram.clone(), coords.clone())?;
        let est = mc_volume(&cone, cfg.samples, cfg.seed)?;
        let tol = MC_SIGMA_FACTOR * est.stderr + MC_ULP_SLACK * f64::EPSILON * lorentz.abs();
        checks.push(check(
            "mc-within-4-stderr",
            (est.estimate - lorentz).abs() <= tol,
            format!(
                "estimate {}, exact {}, stderr {}",
                format_real(est.estimate, cfg.precision),
                format_real(lorentz, cfg.precision),
                format_real(est.stderr, cfg.precision),
            ),
        ));
        Some(McReport {
            estimate: format_real(est.estimate, cfg.precision),
            stderr: format_real(est.stderr, cfg.precision),
            samples: est.samples,
            seed: est.seed,
            hits: est.hits,
        })
    } else {
        None
    };

    Ok(VolumeReport {
        surface: SurfaceDesc { kind: resolved.kind, params: resolved.params },
        rho,
        signature: [inertia.pos, inertia.neg, inertia.zero],
        gram: resolved
            .gram
            .rows()
            .iter()
            .map(|r| r.iter().map(number_from_bigint).collect())
            .collect(),
        discriminant: number_from_bigint(&det),
        ample: coords,
        h_squared: number_from_bigint(ample.h_squared()),
        closed_form_volume: closed.map(|v| format_real(v, cfg.precision)),
        positive_cone_volume: format_real(lorentz, cfg.precision),
        bounds: BoundsReport {
            nef: format_real(bounds.nef, cfg.precision),
            positive: format_real(bounds.positive, cfg.precision),
            big: format_real(bounds.big, cfg.precision),
            equal: bounds.equal,
        },
        mc,
        checks,
    })
}

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::Config(format!("{what} must be a JSON object")))
}

fn expect_keys(obj: &Map<String, Value>, allowed: &[&str], what: &str) -> Result<()> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(Error::Config(format!("unknown key `{key}` in {what}")));
        }
    }
    Ok(())
}

fn get_i64(obj: &Map<String, Value>, key: &str, what: &str) -> Result<i64> {
    obj.get(key)
        .and_then(Value::as_i64)
        .ok_or_else(|| Error::Config(format!("{what} needs integer field `{key}`")))
}

fn get_u64(obj: &Map<String, Value>, key: &str, what: &str) -> Result<u64> {
    obj.get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Config(format!("{what} needs nonnegative integer field `{key}`")))
}

fn get_u32(obj: &Map<String, Value>, key: &str, what: &str) -> Result<u32> {
    let v = get_u64(obj, key, what)?;
    u32::try_from(v).map_err(|_| Error::Config(format!("field `{key}` of {what} is too large")))
}

fn get_i64_array(obj: &Map<String, Value>, key: &str, len: usize, what: &str) -> Result<Vec<i64>> {
    let arr = obj
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Config(format!("{what} needs array field `{key}`")))?;
    if arr.len() != len {
        return Err(Error::Config(format!("field `{key}` of {what} must have length {len}")));
    }
    arr.iter()
        .map(|v| {
            v.as_i64().ok_or_else(|| Error::Config(format!("entries of `{key}` must be integers")))
        })
        .collect()
}

fn parse_bigint(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .to_string()
            .parse::<BigInt>()
            .map_err(|_| Error::Config(format!("expected an integer, got {n}"))),
        _ => Err(Error::Config(format!("expected an integer, got {v}"))),
    }
}

fn parse_surface(v: &Value) -> Result<SurfaceInput> {
    let obj = as_object(v, "surface")?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Config("surface needs a string field `kind`".into()))?;
    let input = match kind {
        "simple_integer_mult" => {
            expect_keys(obj, &["kind"], kind)?;
            SurfaceInput::Taxonomy(SurfaceSpec::IntegerMult)
        }
        "simple_real_mult" | "simple_complex_mult" => {
            expect_keys(obj, &["kind", "d", "f"], kind)?;
            let d = get_i64(obj, "d", kind)?;
            let f = get_u32(obj, "f", kind)?;
            SurfaceInput::Taxonomy(if kind == "simple_real_mult" {
                SurfaceSpec::RealMult { d, f }
            } else {
                SurfaceSpec::ComplexMult { d, f }
            })
        }
        "simple_quaternion_mult" => {
            expect_keys(obj, &["kind", "alpha", "beta", "a", "b"], kind)?;
            let alpha = get_i64(obj, "alpha", kind)?;
            let beta = get_i64(obj, "beta", kind)?;
            let alg = QuatAlg::new(alpha, beta)?;
            let a = get_i64_array(obj, "a", 4, kind)?;
            let b = get_i64_array(obj, "b", 4, kind)?;
            SurfaceInput::Taxonomy(SurfaceSpec::QuaternionMult {
                a: QuatElem::from_integers(alg, [a[0], a[1], a[2], a[3]]),
                b: QuatElem::from_integers(alg, [b[0], b[1], b[2], b[3]]),
            })
        }
        "product_non_isogenous" => {
            expect_keys(obj, &["kind"], kind)?;
            SurfaceInput::Taxonomy(SurfaceSpec::ProductNonIsogenous)
        }
        "product_isogenous_no_cm" => {
            expect_keys(obj, &["kind", "min_degree"], kind)?;
            let min_degree = get_u64(obj, "min_degree", kind)?;
            SurfaceInput::Taxonomy(SurfaceSpec::ProductIsogenousNoCm { min_degree })
        }
        "product_isogenous_cm" => {
            expect_keys(obj, &["kind", "d", "f1", "f2"], kind)?;
            SurfaceInput::Taxonomy(SurfaceSpec::ProductIsogenousCm {
                d: get_i64(obj, "d", kind)?,
                f1: get_u32(obj, "f1", kind)?,
                f2: get_u32(obj, "f2", kind)?,
            })
        }
        "generic" => {
            expect_keys(obj, &["kind", "gram", "canonical_ample"], kind)?;
            let rows_v = obj
                .get("gram")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Config("generic surface needs array field `gram`".into()))?;
            let mut rows = Vec::with_capacity(rows_v.len());
            for rv in rows_v {
                let row_v = rv
                    .as_array()
                    .ok_or_else(|| Error::Config("gram rows must be arrays".into()))?;
                let row: Result<Vec<BigInt>> = row_v.iter().map(parse_bigint).collect();
                rows.push(row?);
            }
            let gram = IntSymMatrix::from_bigint_rows(rows)?;
            let n = gram.dim();
            let canonical_ample = get_i64_array(obj, "canonical_ample", n, kind)?;
            SurfaceInput::Generic { gram, canonical_ample }
        }
        other => return Err(Error::Config(format!("unknown surface kind `{other}`"))),
    };
    Ok(input)
}

/// Parses a run configuration from JSON.  Unknown keys are rejected.
pub fn parse_run_config(json: &str) -> Result<RunConfig> {
    let v: Value =
        serde_json::from_str(json).map_err(|e| Error::Config(format!("invalid JSON: {e}")))?;
    let obj = as_object(&v, "configuration")?;
    expect_keys(obj, &["surface", "ample", "samples", "seed", "mc", "precision"], "configuration")?;
    let surface = parse_surface(
        obj.get("surface")
            .ok_or_else(|| Error::Config("configuration needs a `surface` object".into()))?,
    )?;
    let mut cfg = RunConfig::new(surface);
    if let Some(av) = obj.get("ample") {
        let arr = av
            .as_array()
            .ok_or_else(|| Error::Config("`ample` must be an array of integers".into()))?;
        let coords: Result<Vec<i64>> = arr
            .iter()
            .map(|x| {
                x.as_i64().ok_or_else(|| Error::Config("`ample` entries must be integers".into()))
            })
            .collect();
        cfg.ample = Some(coords?);
    }
    if obj.contains_key("samples") {
        cfg.samples = get_u64(obj, "samples", "configuration")?;
    }
    if obj.contains_key("seed") {
        cfg.seed = get_u64(obj, "seed", "configuration")?;
    }
    if let Some(mv) = obj.get("mc") {
        cfg.mc = mv.as_bool().ok_or_else(|| Error::Config("`mc` must be a boolean".into()))?;
    }
    if obj.contains_key("precision") {
        cfg.precision = get_u64(obj, "precision", "configuration")? as usize;
    }
    Ok(cfg)
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub family: String,
    pub ranges: Vec<(String, i64, i64)>,
    pub samples: u64,
    pub seed: u64,
    pub mc: bool,
    pub precision: usize,
}

impl SweepConfig {
    pub fn new(family: &str, ranges: Vec<(String, i64, i64)>) -> Self {
        SweepConfig {
            family: family.to_string(),
            ranges,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            mc: false,
            precision: DEFAULT_PRECISION,
        }
    }
}

/// Parses range arguments of the form `key=lo..hi` or `key=value`.
pub fn parse_ranges(args: &[String]) -> Result<Vec<(String, i64, i64)>> {
    let mut out = Vec::new();
    for arg in args {
        for piece in arg.split(',').filter(|s| !s.is_empty()) {
            let (key, rest) = piece.split_once('=').ok_or_else(|| {
                Error::Config(format!("range `{piece}` must look like key=lo..hi"))
            })?;
            let (lo, hi) = match rest.split_once("..") {
                Some((a, b)) => (a, b),
                None => (rest, rest),
            };
            let lo: i64 =
                lo.parse().map_err(|_| Error::Config(format!("bad lower bound in `{piece}`")))?;
            let hi: i64 =
                hi.parse().map_err(|_| Error::Config(format!("bad upper bound in `{piece}`")))?;
            if hi < lo {
                return Err(Error::Config(format!("empty range `{piece}`")));
            }
            out.push((key.to_string(), lo, hi));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub params: Value,
    pub rho: usize,
    pub discriminant: Number,
    pub h_squared: Number,
    pub closed_form_volume: String,
    pub positive_cone_volume: String,
    pub mc: Option<McReport>,
    pub checks_passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub family: String,
    pub rows: Vec<SweepRow>,
    /// Parameter tuples rejected by the model builder (e.g. non-squarefree d).
    pub skipped: u64,
}

impl SweepReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.checks_passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sweep serialization")
    }

    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        writeln!(
            out,
            "family: {}   rows: {}   skipped: {}",
            self.family,
            self.rows.len(),
            self.skipped
        )
        .unwrap();
        for r in &self.rows {
            let mc =
                r.mc.as_ref()
                    .map(|m| format!("  mc {} +- {}", m.estimate, m.stderr))
                    .unwrap_or_default();
            writeln!(
                out,
                "{}  rho {}  disc {}  H^2 {}  closed {}  cone {}{}  {}",
                r.params,
                r.rho,
                r.discriminant,
                r.h_squared,
                r.closed_form_volume,
                r.positive_cone_volume,
                mc,
                if r.checks_passed { "ok" } else { "FAIL" }
            )
            .unwrap();
        }
        out
    }
}

fn family_keys(family: &str) -> Result<&'static [&'static str]> {
    Ok(match family {
        "simple_integer_mult" | "product_non_isogenous" => &[],
        "simple_real_mult" | "simple_complex_mult" => &["d", "f"],
        "product_isogenous_no_cm" => &["min_degree"],
        "product_isogenous_cm" => &["d", "f1", "f2"],
        "simple_quaternion_mult" => {
            return Err(Error::Config(
                "simple_quaternion_mult takes element data, not ranges; use `run`".into(),
            ))
        }
        other => return Err(Error::Config(format!("unknown sweep family `{other}`"))),
    })
}

const SWEEP_CAP: u64 = 100_000;

/// Builds one model per parameter tuple in the (inclusive) ranges and
/// reports discriminants and volumes, with the same checks as `run`.
/// Tuples the builder rejects (non-squarefree d, zero conductors reaching
/// the builder, …) are counted in `skipped`.
pub fn sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    if !(1..=17).contains(&cfg.precision) {
        return Err(Error::Config(format!("precision must be in 1..=17, got {}", cfg.precision)));
    }
    let keys = family_keys(&cfg.family)?;
    if cfg.ranges.len() != keys.len()
        || keys.iter().any(|k| !cfg.ranges.iter().any(|(name, _, _)| name == k))
    {
        let given: Vec<&str> = cfg.ranges.iter().map(|(n, _, _)| n.as_str()).collect();
        return Err(Error::Config(format!(
            "family `{}` sweeps over {:?}, got ranges for {:?}",
            cfg.family, keys, given
        )));
    }
    // Ranges in canonical key order.
    let ordered: Vec<(String, i64, i64)> = keys
        .iter()
        .map(|k| {
            cfg.ranges.iter().find(|(name, _, _)| name == k).cloned().expect("key checked above")
        })
        .collect();
    let mut total: u64 = 1;
    for (_, lo, hi) in &ordered {
        total = total.saturating_mul((hi - lo + 1) as u64);
    }
    if total > SWEEP_CAP {
        return Err(Error::Config(format!("sweep would build {total} models (cap {SWEEP_CAP})")));
    }

    let mut rows = Vec::new();
    let mut skipped = 0u64;
    let mut tuple: Vec<i64> = ordered.iter().map(|(_, lo, _)| *lo).collect();
    loop {
        match sweep_row(cfg, keys, &tuple) {
            Ok(row) => rows.push(row),
            Err(Error::Spec(_)) | Err(Error::RealField(_)) | Err(Error::Signature { .. }) => {
                skipped += 1
            }
            Err(e) => return Err(e),
        }
        // odometer
        let mut pos = tuple.len();
        loop {
            if pos == 0 {
                return Ok(SweepReport { family: cfg.family.clone(), rows, skipped });
            }
            pos -= 1;
            if tuple[pos] < ordered[pos].2 {
                tuple[pos] += 1;
                // reset the faster-moving digits
                for (i, t) in tuple.iter_mut().enumerate().skip(pos + 1) {
                    *t = ordered[i].1;
                }
                break;
            }
        }
    }
}

fn u32_param(v: i64, key: &str) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::Spec(format!("{key} = {v} out of range")))
}

fn sweep_row(cfg: &SweepConfig, keys: &[&str], tuple: &[i64]) -> Result<SweepRow> {
    let spec = match cfg.family.as_str() {
        "simple_integer_mult" => SurfaceSpec::IntegerMult,
        "product_non_isogenous" => SurfaceSpec::ProductNonIsogenous,
        "simple_real_mult" => SurfaceSpec::RealMult { d: tuple[0], f: u32_param(tuple[1], "f")? },
        "simple_complex_mult" => {
            SurfaceSpec::ComplexMult { d: tuple[0], f: u32_param(tuple[1], "f")? }
        }
        "product_isogenous_no_cm" => SurfaceSpec::ProductIsogenousNoCm {
            min_degree: u64::try_from(tuple[0])
                .map_err(|_| Error::Spec(format!("min_degree = {} out of range", tuple[0])))?,
        },
        "product_isogenous_cm" => SurfaceSpec::ProductIsogenousCm {
            d: tuple[0],
            f1: u32_param(tuple[1], "f1")?,
            f2: u32_param(tuple[2], "f2")?,
        },
        other => return Err(Error::Config(format!("unknown sweep family `{other}`"))),
    };
    let mut run_cfg = RunConfig::new(SurfaceInput::Taxonomy(spec));
    run_cfg.samples = cfg.samples;
    run_cfg.seed = cfg.seed;
    run_cfg.mc = cfg.mc;
    run_cfg.precision = cfg.precision;
    let report = run(&run_cfg)?;
    let mut params = Map::new();
    for (k, v) in keys.iter().zip(tuple.iter()) {
        params.insert((*k).to_string(), json!(v));
    }
    Ok(SweepRow {
        params: Value::Object(params),
        rho: report.rho,
        discriminant: report.discriminant.clone(),
        h_squared: report.h_squared.clone(),
        closed_form_volume: report
            .closed_form_volume
            .clone()
            .expect("taxonomy rows always have a closed form"),
        positive_cone_volume: report.positive_cone_volume.clone(),
        mc: report.mc.clone(),
        checks_passed: report.all_passed(),
    })
}
