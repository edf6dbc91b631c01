//! Closed-form evaluators for the effective bound chain.
//!
//! Every quantity is a function of the dimension `n`, a certified lower bound
//! `sys` for the systole and a handful of auxiliary integers. Bounds that can
//! overflow binary64 come in pairs: a linear evaluator returning `+∞` on
//! overflow and an `_ln` evaluator that stays finite.
//!
//! Conditional statements never abort: [`bound_report`] evaluates everything
//! and records which hypotheses hold.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_4, LN_2, PI, SQRT_2};
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest `n` for which `n!` is evaluated (`171!` overflows binary64).
pub const FACTORIAL_CAP: usize = 170;

/// `(4π)⁴`.
pub fn four_pi_fourth() -> f64 {
    (4.0 * PI).powi(4)
}

/// `(8π)⁴`.
pub fn eight_pi_fourth() -> f64 {
    (8.0 * PI).powi(4)
}

/// `ln sinh x` for `x ≥ 0`, accurate for small and huge `x`.
pub fn ln_sinh(x: f64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    x - LN_2 + (-(-2.0 * x).exp_m1()).ln()
}

fn ln_factorial(m: usize) -> f64 {
    (2..=m).map(|k| (k as f64).ln()).sum()
}

fn factorial(m: usize) -> f64 {
    (2..=m).map(|k| k as f64).product()
}

/// Natural log of an exact integer via a 64-bit mantissa and a binary exponent.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.iter_u64_digits().next().unwrap_or(0) as f64).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).iter_u64_digits().next().unwrap_or(0);
    (top as f64).ln() + shift as f64 * LN_2
}

fn exact_factorial(n: usize) -> BigUint {
    (2..=n as u64).fold(BigUint::from(1u32), |acc, k| acc * k)
}

fn check_factorial_cap(n: usize) -> Result<()> {
    if n > FACTORIAL_CAP {
        return Err(Error::InvalidInput(format!("n = {n} exceeds the factorial cap {FACTORIAL_CAP}")));
    }
    Ok(())
}

/// `(4π)^m / m! · sinh^{2m}(sys/2)`.
pub fn volume_lower_bound(m: usize, sys: f64) -> f64 {
    ball_volume_bound(m, 0.5 * sys, 1.0)
}

pub fn volume_lower_bound_ln(m: usize, sys: f64) -> f64 {
    ball_volume_bound_ln(m, 0.5 * sys, 1.0)
}

/// `(4π)^m / m! · sinh^{2m}(r) · mult`.
pub fn ball_volume_bound(m: usize, r: f64, mult: f64) -> f64 {
    (4.0 * PI).powi(m as i32) / factorial(m) * r.sinh().powi(2 * m as i32) * mult
}

pub fn ball_volume_bound_ln(m: usize, r: f64, mult: f64) -> f64 {
    m as f64 * (4.0 * PI).ln() - ln_factorial(m) + 2.0 * m as f64 * ln_sinh(r) + mult.ln()
}

/// `(n+1)^m · sinh^{2m}(sys/2)`.
pub fn log_degree_lower_bound(m: usize, n: usize, sys: f64) -> f64 {
    ((n + 1) as f64).powi(m as i32) * (0.5 * sys).sinh().powi(2 * m as i32)
}

pub fn log_degree_lower_bound_ln(m: usize, n: usize, sys: f64) -> f64 {
    m as f64 * ((n + 1) as f64).ln() + 2.0 * m as f64 * ln_sinh(0.5 * sys)
}

/// Normalisation constant `(n+1)/4π` between the Bergman volume form and the
/// first Chern form of the log-canonical bundle.
pub fn chern_normalization(n: usize) -> f64 {
    (n + 1) as f64 / (4.0 * PI)
}

/// `1 − n + √2·e^{sys/4}`.
pub fn trace_lower_bound(n: usize, sys: f64) -> f64 {
    1.0 - n as f64 + SQRT_2 * (0.25 * sys).exp()
}

/// `ln(1 − n + √2·e^{sys/4})`; `NaN`-free, `−∞` when the bound is not positive.
pub fn trace_lower_bound_ln(n: usize, sys: f64) -> f64 {
    ln_shifted_exp(0.25 * sys, 1.0 - n as f64)
}

/// `ln(√2·e^{a} + b)`, or `−∞` when the argument is not positive.
fn ln_shifted_exp(a: f64, b: f64) -> f64 {
    let rel = b / SQRT_2 * (-a).exp();
    if rel <= -1.0 {
        return f64::NEG_INFINITY;
    }
    a + 0.5 * LN_2 + rel.ln_1p()
}

/// `min{(λ−n−1)^{1/4}, (λ−n−1)^{1/2}}`.
pub fn depth_from_trace(lambda: f64, n: usize) -> Result<f64> {
    let x = lambda - n as f64 - 1.0;
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Precondition(format!("trace {lambda} ≤ n + 1 gives a vacuous depth bound")));
    }
    Ok(x.powf(0.25).min(x.sqrt()))
}

/// Depth lower bound `min{(s'−2n)^{1/4}, (s'−2n)^{1/2}}` with
/// `s' = √2·e^{sys/4}`, evaluated as `depth_from_trace ∘ trace_lower_bound`.
pub fn depth_lower_bound(n: usize, sys: f64) -> Result<f64> {
    depth_from_trace(trace_lower_bound(n, sys), n)
}

pub fn depth_lower_bound_ln(n: usize, sys: f64) -> Result<f64> {
    let ln_radicand = ln_shifted_exp(0.25 * sys, -2.0 * n as f64);
    if ln_radicand == f64::NEG_INFINITY {
        return Err(Error::Precondition(format!("sys = {sys} gives a vacuous depth bound")));
    }
    Ok(if ln_radicand >= 0.0 {
        0.25 * ln_radicand
    } else {
        0.5 * ln_radicand
    })
}

/// `4·ln(5n + (4π)⁴)`.
pub fn threshold_ample(n: usize) -> f64 {
    4.0 * (5.0 * n as f64 + four_pi_fourth()).ln()
}

/// `4·ln(5n + (8π)⁴)`.
pub fn threshold_canonical(n: usize) -> f64 {
    4.0 * (5.0 * n as f64 + eight_pi_fourth()).ln()
}

/// `(n/4π)^m · e^{m·sys/16}`.
pub fn degree_lower_bound(m: usize, n: usize, sys: f64) -> f64 {
    (n as f64 / (4.0 * PI)).powi(m as i32) * (m as f64 * sys / 16.0).exp()
}

pub fn degree_lower_bound_ln(m: usize, n: usize, sys: f64) -> f64 {
    m as f64 * ((n as f64).ln() - (4.0 * PI).ln() + sys / 16.0)
}

/// `(m/4π)^m · e^{m·sys/16}`.
pub fn canonical_volume_lower_bound(m: usize, sys: f64) -> f64 {
    (m as f64 / (4.0 * PI)).powi(m as i32) * (m as f64 * sys / 16.0).exp()
}

pub fn canonical_volume_lower_bound_ln(m: usize, sys: f64) -> f64 {
    degree_lower_bound_ln(m, m, sys)
}

/// `20·max{n·ln((1+2n+n!)(n+s)), ln(5n+(8π)⁴)}` with `n!` exact.
pub fn very_ampleness_threshold(n: usize, s: usize) -> Result<f64> {
    check_factorial_cap(n)?;
    let base = BigUint::from(1 + 2 * n as u64) + exact_factorial(n);
    let product = base * BigUint::from((n + s) as u64);
    let first = n as f64 * ln_biguint(&product);
    let second = (5.0 * n as f64 + eight_pi_fourth()).ln();
    Ok(20.0 * first.max(second))
}

/// `20·ln(5n + (8π)⁴)`, the hypothesis of the thick-part Seshadri bound.
pub fn seshadri_thick_threshold(n: usize) -> f64 {
    20.0 * (5.0 * n as f64 + eight_pi_fourth()).ln()
}

/// `20·max{n·ln(5n(1+2n+n!)), ln(5n+(8π)⁴)}`.
pub fn full_very_ampleness_sys_threshold(n: usize) -> Result<f64> {
    check_factorial_cap(n)?;
    let product = (BigUint::from(1 + 2 * n as u64) + exact_factorial(n)) * BigUint::from(5 * n as u64);
    let first = n as f64 * ln_biguint(&product);
    let second = (5.0 * n as f64 + eight_pi_fourth()).ln();
    Ok(20.0 * first.max(second))
}

/// `2√(2n/π)`.
pub fn boundary_systole_threshold(n: usize) -> f64 {
    2.0 * (2.0 * n as f64 / PI).sqrt()
}

/// `(π/4)·sys(D)²`, the Seshadri bound along the boundary divisor.
pub fn boundary_seshadri_bound(sys_d: f64) -> f64 {
    FRAC_PI_4 * sys_d * sys_d
}

/// `(n+1)/(8π) · sinh²(sys/2)`.
pub fn seshadri_thick_bound(n: usize, sys: f64) -> f64 {
    (n + 1) as f64 / (8.0 * PI) * (0.5 * sys).sinh().powi(2)
}

pub fn seshadri_thick_bound_ln(n: usize, sys: f64) -> f64 {
    ((n + 1) as f64).ln() - (8.0 * PI).ln() + 2.0 * ln_sinh(0.5 * sys)
}

/// `e^{sys/20}`, the Seshadri threshold separating the thin locus.
pub fn seshadri_locus_threshold(sys: f64) -> f64 {
    (sys / 20.0).exp()
}

/// `4π·F·(n+3)·(1+ε) / e^{sys/16}`.
pub fn sparsity_exponent(n: usize, sys: f64, field_degree: u32, epsilon: f64) -> f64 {
    4.0 * PI * field_degree as f64 * (n + 3) as f64 * (1.0 + epsilon) / (sys / 16.0).exp()
}

pub fn sparsity_exponent_ln(n: usize, sys: f64, field_degree: u32, epsilon: f64) -> f64 {
    (4.0 * PI).ln() + (field_degree as f64).ln() + ((n + 3) as f64).ln() + epsilon.ln_1p() - sys / 16.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BicanonicalReport {
    pub globally_generated_2k: bool,
    pub very_ample_mod_d_2k: bool,
    pub very_ample_3k: bool,
}

pub fn bicanonical_report(n: usize, sys: f64) -> Result<BicanonicalReport> {
    let ok = sys >= very_ampleness_threshold(n, 1)?;
    Ok(BicanonicalReport {
        globally_generated_2k: ok,
        very_ample_mod_d_2k: ok,
        very_ample_3k: ok,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct JetsReport {
    pub separates_jets_2k: bool,
    /// `s/2` when certified, `0` otherwise.
    pub seshadri_lb: f64,
}

pub fn jets_and_seshadri(n: usize, sys: f64, s: usize) -> Result<JetsReport> {
    let ok = sys >= very_ampleness_threshold(n, s)?;
    Ok(JetsReport {
        separates_jets_2k: ok,
        seshadri_lb: if ok { 0.5 * s as f64 } else { 0.0 },
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThickSeshadri {
    pub value: f64,
    pub ln_value: f64,
    pub locus_threshold: f64,
    pub certified: bool,
}

pub fn seshadri_thick(n: usize, sys: f64) -> ThickSeshadri {
    ThickSeshadri {
        value: seshadri_thick_bound(n, sys),
        ln_value: seshadri_thick_bound_ln(n, sys),
        locus_threshold: seshadri_locus_threshold(sys),
        certified: sys >= seshadri_thick_threshold(n),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FullVeryAmpleness {
    /// `2n` when certified, `0` otherwise.
    pub seshadri_lb: f64,
    pub very_ample_2k: bool,
    pub boundary_seshadri_bound: f64,
}

pub fn full_very_ampleness(n: usize, sys: f64, sys_d: Option<f64>) -> Result<FullVeryAmpleness> {
    let sys_d = sys_d.ok_or_else(|| Error::InvalidInput("sysD is required".into()))?;
    let ok = sys_d > boundary_systole_threshold(n) && sys >= full_very_ampleness_sys_threshold(n)?;
    Ok(FullVeryAmpleness {
        seshadri_lb: if ok { 2.0 * n as f64 } else { 0.0 },
        very_ample_2k: ok,
        boundary_seshadri_bound: boundary_seshadri_bound(sys_d),
    })
}

/// User-supplied parameters. `sys` is always a certified lower bound for the
/// systole, never an enumeration estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundInputs {
    pub n: usize,
    pub sys: f64,
    pub m: usize,
    pub s: usize,
    #[serde(default, skip_serializing_if = "Option::is_none", rename = "sysD")]
    pub sys_d: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

impl BoundInputs {
    pub fn new(n: usize, sys: f64) -> Self {
        Self {
            n,
            sys,
            m: 1,
            s: 1,
            sys_d: None,
            field_degree: None,
            epsilon: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        if self.n == 0 || self.n > FACTORIAL_CAP {
            return bad(format!("n must lie in 1..={FACTORIAL_CAP}, got {}", self.n));
        }
        if !(self.sys.is_finite() && self.sys > 0.0) {
            return bad(format!("sys must be positive and finite, got {}", self.sys));
        }
        if self.m == 0 || self.m > self.n {
            return bad(format!("m must lie in 1..=n, got {}", self.m));
        }
        if self.s == 0 {
            return bad("s must be at least 1".into());
        }
        if let Some(d) = self.sys_d {
            if !(d.is_finite() && d > 0.0) {
                return bad(format!("sysD must be positive and finite, got {d}"));
            }
        }
        if self.field_degree == Some(0) {
            return bad("field degree must be at least 1".into());
        }
        if let Some(e) = self.epsilon {
            if !(e.is_finite() && e >= 0.0) {
                return bad(format!("epsilon must be nonnegative and finite, got {e}"));
            }
        }
        Ok(())
    }
}

/// `f64` that serialises `±∞` as the strings `"+inf"` / `"-inf"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReportNumber(pub f64);

impl Serialize for ReportNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            x if x == f64::INFINITY => s.serialize_str("+inf"),
            x if x == f64::NEG_INFINITY => s.serialize_str("-inf"),
            x => s.serialize_f64(x),
        }
    }
}

impl<'de> Deserialize<'de> for ReportNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Self(x)),
            Raw::Str(s) if s == "+inf" => Ok(Self(f64::INFINITY)),
            Raw::Str(s) if s == "-inf" => Ok(Self(f64::NEG_INFINITY)),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("unexpected number string {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReportValue {
    Flag(bool),
    Number(ReportNumber),
}

impl ReportValue {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Self::Number(x) => Some(x.0),
            Self::Flag(_) => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Self::Flag(b) => Some(*b),
            Self::Number(_) => None,
        }
    }
}

/// One hypothesis check: the certification it gates, the threshold entry it
/// was compared against and whether it holds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Assumption {
    pub name: String,
    pub statement: String,
    pub threshold: Option<String>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub inputs: BoundInputs,
    #[serde(flatten)]
    pub entries: BTreeMap<String, ReportValue>,
    pub assumptions: Vec<Assumption>,
}

impl BoundReport {
    pub fn number(&self, key: &str) -> Option<f64> {
        self.entries.get(key).and_then(ReportValue::as_f64)
    }

    pub fn flag(&self, key: &str) -> Option<bool> {
        self.entries.get(key).and_then(ReportValue::as_bool)
    }

    pub fn assumption(&self, name: &str) -> Option<&Assumption> {
        self.assumptions.iter().find(|a| a.name == name)
    }

    /// Every flag that is gated by a threshold, paired with whether that
    /// flag is reproduced by comparing `sys` (or `sysD`) with the stored
    /// threshold values.
    pub fn recompute_flags(&self) -> Vec<(&'static str, bool)> {
        let sys = self.inputs.sys;
        let num = |k: &str| self.number(k).unwrap_or(f64::NAN);
        let flag = |k: &str| self.flag(k).unwrap_or(false);
        let mut out = vec![
            ("degreeCertified", flag("degreeCertified") == (sys >= num("thresholdAmple"))),
            ("depthCertified", flag("depthCertified") == (sys >= num("thresholdAmple"))),
            ("canonicalVolumeCertified", flag("canonicalVolumeCertified") == (sys >= num("thresholdCanonical"))),
            ("globallyGenerated2K", flag("globallyGenerated2K") == (sys >= num("veryAmplenessThreshold"))),
            ("veryAmpleModD2K", flag("veryAmpleModD2K") == (sys >= num("veryAmplenessThreshold"))),
            ("veryAmple3K", flag("veryAmple3K") == (sys >= num("veryAmplenessThreshold"))),
            ("separatesJets2K", flag("separatesJets2K") == (sys >= num("jetsThreshold"))),
            ("seshadriThickCertified", flag("seshadriThickCertified") == (sys >= num("seshadriThickThreshold"))),
        ];
        if let Some(sys_d) = self.inputs.sys_d {
            let ok = sys_d > num("sysDThreshold") && sys >= num("fullVeryAmplenessSysThreshold");
            out.push(("veryAmple2K", flag("veryAmple2K") == ok));
        }
        if self.entries.contains_key("sparsityCertified") {
            let eps_ok = self.inputs.epsilon.is_some_and(|e| e > 0.0);
            out.push(("sparsityCertified", flag("sparsityCertified") == (sys >= num("thresholdAmple") && eps_ok)));
        }
        out
    }

    /// Grouped human-readable rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let i = &self.inputs;
        out.push_str(&format!("inputs: n={} sys={} m={} s={}", i.n, i.sys, i.m, i.s));
        if let Some(d) = i.sys_d {
            out.push_str(&format!(" sysD={d}"));
        }
        if let Some(f) = i.field_degree {
            out.push_str(&format!(" fieldDegree={f}"));
        }
        if let Some(e) = i.epsilon {
            out.push_str(&format!(" epsilon={e}"));
        }
        out.push('\n');
        for (title, keys) in TEXT_GROUPS {
            let present: Vec<&str> = keys.iter().copied().filter(|k| self.entries.contains_key(*k)).collect();
            if present.is_empty() {
                continue;
            }
            out.push_str(&format!("\n[{title}]\n"));
            for key in present {
                out.push_str(&format!("  {key:<32} {}\n", self.entries[key]));
            }
        }
        out.push_str("\n[hypotheses]\n");
        for a in &self.assumptions {
            let mark = if a.holds { "holds" } else { "NOT CERTIFIED" };
            out.push_str(&format!("  {:<28} {:<14} {}\n", a.name, mark, a.statement));
        }
        out
    }
}

impl fmt::Display for ReportValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Flag(b) => write!(f, "{b}"),
            Self::Number(ReportNumber(x)) if x.is_infinite() => write!(f, "{}", if *x > 0.0 { "+inf" } else { "-inf" }),
            Self::Number(ReportNumber(x)) => write!(f, "{x:.12e}"),
        }
    }
}

const TEXT_GROUPS: &[(&str, &[&str])] = &[
    ("thresholds", &[
        "thresholdAmple",
        "thresholdCanonical",
        "veryAmplenessThreshold",
        "jetsThreshold",
        "seshadriThickThreshold",
        "fullVeryAmplenessSysThreshold",
        "sysDThreshold",
    ]),
    ("Bergman volume of subvarieties", &[
        "volumeLowerBound",
        "volumeLowerBoundLn",
        "ballVolumeBound",
        "ballVolumeBoundLn",
    ]),
    ("log-canonical degree of subvarieties", &[
        "chernNormalization",
        "logDegreeLowerBound",
        "logDegreeLowerBoundLn",
    ]),
    ("trace and cusp depth", &[
        "traceLowerBound",
        "traceLowerBoundLn",
        "depthLowerBound",
        "depthLowerBoundLn",
        "depthExponentialBound",
        "depthCertified",
    ]),
    ("canonical degree of subvarieties", &[
        "degreeLowerBound",
        "degreeLowerBoundLn",
        "degreeCertified",
    ]),
    ("canonical volume of subvarieties", &[
        "canonicalVolumeLowerBound",
        "canonicalVolumeLowerBoundLn",
        "canonicalVolumeCertified",
    ]),
    ("bicanonical and tricanonical systems", &[
        "globallyGenerated2K",
        "veryAmpleModD2K",
        "veryAmple3K",
    ]),
    ("separation of jets", &["separatesJets2K", "seshadriLowerBound"]),
    ("Seshadri constant on the thick part", &[
        "seshadriThickBound",
        "seshadriThickBoundLn",
        "seshadriLocusThreshold",
        "seshadriLocusThresholdLn",
        "seshadriThickCertified",
    ]),
    ("very ampleness with boundary", &[
        "boundarySeshadriBound",
        "fullSeshadriLowerBound",
        "veryAmple2K",
    ]),
    ("rational point sparsity", &[
        "sparsityExponent",
        "sparsityExponentLn",
        "sparsityCertified",
    ]),
];

/// Evaluates every bound for `inputs`, recording each hypothesis check.
pub fn bound_report(inputs: &BoundInputs) -> Result<BoundReport> {
    inputs.validate()?;
    let BoundInputs { n, sys, m, s, .. } = *inputs;
    let mut e: BTreeMap<String, ReportValue> = BTreeMap::new();
    let mut put = |k: &str, x: f64| {
        debug_assert!(!x.is_nan(), "{k} is NaN");
        e.insert(k.to_string(), ReportValue::Number(ReportNumber(x)));
    };

    let t_ample = threshold_ample(n);
    let t_canonical = threshold_canonical(n);
    let t_very = very_ampleness_threshold(n, 1)?;
    let t_jets = very_ampleness_threshold(n, s)?;
    let t_thick = seshadri_thick_threshold(n);
    let t_full = full_very_ampleness_sys_threshold(n)?;
    put("thresholdAmple", t_ample);
    put("thresholdCanonical", t_canonical);
    put("veryAmplenessThreshold", t_very);
    put("jetsThreshold", t_jets);
    put("seshadriThickThreshold", t_thick);
    put("fullVeryAmplenessSysThreshold", t_full);
    put("sysDThreshold", boundary_systole_threshold(n));

    put("volumeLowerBound", volume_lower_bound(m, sys));
    put("volumeLowerBoundLn", volume_lower_bound_ln(m, sys));
    put("ballVolumeBound", ball_volume_bound(m, 0.5 * sys, 1.0));
    put("ballVolumeBoundLn", ball_volume_bound_ln(m, 0.5 * sys, 1.0));
    put("chernNormalization", chern_normalization(n));
    put("logDegreeLowerBound", log_degree_lower_bound(m, n, sys));
    put("logDegreeLowerBoundLn", log_degree_lower_bound_ln(m, n, sys));
    put("traceLowerBound", trace_lower_bound(n, sys));
    put("traceLowerBoundLn", trace_lower_bound_ln(n, sys));
    if let (Ok(d), Ok(dl)) = (depth_lower_bound(n, sys), depth_lower_bound_ln(n, sys)) {
        put("depthLowerBound", d);
        put("depthLowerBoundLn", dl);
    }
    put("depthExponentialBound", (sys / 16.0).exp());
    put("degreeLowerBound", degree_lower_bound(m, n, sys));
    put("degreeLowerBoundLn", degree_lower_bound_ln(m, n, sys));
    put("canonicalVolumeLowerBound", canonical_volume_lower_bound(m, sys));
    put("canonicalVolumeLowerBoundLn", canonical_volume_lower_bound_ln(m, sys));
    let jets = jets_and_seshadri(n, sys, s)?;
    put("seshadriLowerBound", jets.seshadri_lb);
    let thick = seshadri_thick(n, sys);
    put("seshadriThickBound", thick.value);
    put("seshadriThickBoundLn", thick.ln_value);
    put("seshadriLocusThreshold", thick.locus_threshold);
    put("seshadriLocusThresholdLn", sys / 20.0);
    let full = inputs.sys_d.map(|d| full_very_ampleness(n, sys, Some(d))).transpose()?;
    if let Some(full) = &full {
        put("boundarySeshadriBound", full.boundary_seshadri_bound);
        put("fullSeshadriLowerBound", full.seshadri_lb);
    }
    let sparsity_inputs = inputs.field_degree.zip(inputs.epsilon);
    if let Some((f, eps)) = sparsity_inputs {
        put("sparsityExponent", sparsity_exponent(n, sys, f, eps));
        put("sparsityExponentLn", sparsity_exponent_ln(n, sys, f, eps));
    }

    let ample_ok = sys >= t_ample;
    let bican = bicanonical_report(n, sys)?;
    let mut flag = |k: &str, b: bool| {
        e.insert(k.to_string(), ReportValue::Flag(b));
    };
    flag("depthCertified", ample_ok);
    flag("degreeCertified", ample_ok);
    flag("canonicalVolumeCertified", sys >= t_canonical);
    flag("globallyGenerated2K", bican.globally_generated_2k);
    flag("veryAmpleModD2K", bican.very_ample_mod_d_2k);
    flag("veryAmple3K", bican.very_ample_3k);
    flag("separatesJets2K", jets.separates_jets_2k);
    flag("seshadriThickCertified", thick.certified);
    if let Some(full) = &full {
        flag("veryAmple2K", full.very_ample_2k);
    }
    let eps_positive = inputs.epsilon.is_some_and(|x| x > 0.0);
    if sparsity_inputs.is_some() {
        flag("sparsityCertified", ample_ok && eps_positive);
    }

    let mut assumptions = vec![
        Assumption {
            name: "sysAboveAmpleThreshold".into(),
            statement: "sys ≥ 4·ln(5n + (4π)⁴); gates depth, degree and sparsity".into(),
            threshold: Some("thresholdAmple".into()),
            holds: ample_ok,
        },
        Assumption {
            name: "sysAboveCanonicalThreshold".into(),
            statement: "sys ≥ 4·ln(5n + (8π)⁴); gates canonical volume".into(),
            threshold: Some("thresholdCanonical".into()),
            holds: sys >= t_canonical,
        },
        Assumption {
            name: "sysAboveVeryAmpleness".into(),
            statement: "sys ≥ 20·max{n·ln((1+2n+n!)(n+1)), ln(5n+(8π)⁴)}; gates 2K and 3K".into(),
            threshold: Some("veryAmplenessThreshold".into()),
            holds: bican.very_ample_3k,
        },
        Assumption {
            name: "sysAboveJetsThreshold".into(),
            statement: "sys ≥ 20·max{n·ln((1+2n+n!)(n+s)), ln(5n+(8π)⁴)}; gates s-jets".into(),
            threshold: Some("jetsThreshold".into()),
            holds: jets.separates_jets_2k,
        },
        Assumption {
            name: "sysAboveThickSeshadri".into(),
            statement: "sys ≥ 20·ln(5n + (8π)⁴); gates the thick-part Seshadri bound".into(),
            threshold: Some("seshadriThickThreshold".into()),
            holds: thick.certified,
        },
        Assumption {
            name: "sysIsCertifiedLowerBound".into(),
            statement: "sys is a user-certified lower bound for the systole".into(),
            threshold: None,
            holds: true,
        },
    ];
    match inputs.sys_d {
        Some(d) => {
            assumptions.push(Assumption {
                name: "sysDAboveThreshold".into(),
                statement: "sys(D) > 2·√(2n/π)".into(),
                threshold: Some("sysDThreshold".into()),
                holds: d > boundary_systole_threshold(n),
            });
            assumptions.push(Assumption {
                name: "sysAboveFullVeryAmpleness".into(),
                statement: "sys ≥ 20·max{n·ln(5n(1+2n+n!)), ln(5n+(8π)⁴)}".into(),
                threshold: Some("fullVeryAmplenessSysThreshold".into()),
                holds: sys >= t_full,
            });
        }
        None => assumptions.push(Assumption {
            name: "sysDProvided".into(),
            statement: "boundary systole supplied; boundary bounds skipped".into(),
            threshold: None,
            holds: false,
        }),
    }
    match sparsity_inputs {
        Some(_) => assumptions.push(Assumption {
            name: "epsilonPositive".into(),
            statement: "ε > 0 for the sparsity exponent".into(),
            threshold: None,
            holds: eps_positive,
        }),
        None => assumptions.push(Assumption {
            name: "sparsityInputsProvided".into(),
            statement: "field degree and ε supplied; sparsity exponent skipped".into(),
            threshold: None,
            holds: false,
        }),
    }

    Ok(BoundReport {
        inputs: inputs.clone(),
        entries: e,
        assumptions,
    })
}
