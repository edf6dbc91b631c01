//! Seeded oracle suites cross-checking closed forms against independent
//! numerical evaluations. Each suite produces a table of checks; the first
//! failing case of a check is kept as a counterexample.

use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fixtures;
use crate::hermitian::{form_value, GroupElement, HermitianForm};
use crate::isometry::{self, heisenberg_compose, heisenberg_to_matrix, translation_length, HeisenbergElement};
use crate::siegel::{
    act, distance, distance_lower_bound, embed, horoball_intersection_sampler, horoballs_disjoint, min_displacement_oracle,
    unembed, Cusp, OracleBudget, SiegelPoint,
};

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Metric,
    Trace,
    Length,
    Heisenberg,
    Horoball,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Metric, Suite::Trace, Suite::Length, Suite::Heisenberg, Suite::Horoball];

    pub fn name(self) -> &'static str {
        match self {
            Self::Metric => "metric",
            Self::Trace => "trace",
            Self::Length => "length",
            Self::Heisenberg => "heisenberg",
            Self::Horoball => "horoball",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

/// Sizes of the randomised suites.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub metric_pairs: usize,
    pub trace_fixtures: usize,
    pub heisenberg_pairs: usize,
    pub horoball_grid: usize,
    pub oracle: OracleBudget,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            metric_pairs: 10_000,
            trace_fixtures: 100,
            heisenberg_pairs: 1000,
            horoball_grid: 15,
            oracle: OracleBudget::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckRow {
    pub name: String,
    pub cases: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Counterexample {
    pub suite: Suite,
    pub check: String,
    pub seed: u64,
    pub case: usize,
    pub error: f64,
    pub data: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<CheckRow>,
    pub counterexamples: Vec<Counterexample>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Writes the first counterexample to `dir/<suite>-counterexample.json`.
    pub fn write_reproduction(&self, dir: &Path) -> Result<Option<PathBuf>> {
        let Some(first) = self.counterexamples.first() else {
            return Ok(None);
        };
        std::fs::create_dir_all(dir)?;
        let path = dir.join(format!("{}-counterexample.json", self.suite.name()));
        std::fs::write(&path, serde_json::to_string_pretty(first)?)?;
        Ok(Some(path))
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} (seed {})", self.suite.name(), self.seed)?;
        writeln!(f, "  {:<44} {:>7} {:>12} {:>10}  result", "check", "cases", "max error", "tol")?;
        for c in &self.checks {
            writeln!(
                f,
                "  {:<44} {:>7} {:>12.3e} {:>10.1e}  {}",
                c.name,
                c.cases,
                c.max_error,
                c.tolerance,
                if c.passed { "pass" } else { "FAIL" }
            )?;
        }
        for cx in &self.counterexamples {
            writeln!(f, "  counterexample: {} case {} error {:.3e}", cx.check, cx.case, cx.error)?;
        }
        Ok(())
    }
}

/// Accumulates the worst error of one check and its first failing case.
struct Check {
    name: String,
    tolerance: f64,
    cases: usize,
    max_error: f64,
    failure: Option<(usize, f64, serde_json::Value)>,
}

impl Check {
    fn new(name: &str, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            tolerance,
            cases: 0,
            max_error: 0.0,
            failure: None,
        }
    }

    fn record(&mut self, error: f64, data: impl FnOnce() -> serde_json::Value) {
        let case = self.cases;
        self.cases += 1;
        let error = if error.is_nan() { f64::INFINITY } else { error };
        self.max_error = self.max_error.max(error);
        if error > self.tolerance && self.failure.is_none() {
            self.failure = Some((case, error, data()));
        }
    }
}

fn finish(suite: Suite, seed: u64, checks: Vec<Check>) -> SuiteReport {
    let mut rows = Vec::new();
    let mut counterexamples = Vec::new();
    for c in checks {
        rows.push(CheckRow {
            name: c.name.clone(),
            cases: c.cases,
            max_error: c.max_error,
            tolerance: c.tolerance,
            passed: c.failure.is_none() && c.cases > 0,
        });
        if let Some((case, error, data)) = c.failure {
            counterexamples.push(Counterexample {
                suite,
                check: c.name,
                seed,
                case,
                error,
                data,
            });
        }
    }
    SuiteReport {
        suite,
        seed,
        checks: rows,
        counterexamples,
    }
}

fn point_json(p: &SiegelPoint) -> serde_json::Value {
    serde_json::to_value(p).unwrap_or_default()
}

fn matrix_json(g: &GroupElement) -> serde_json::Value {
    serde_json::to_value(g.matrix()).unwrap_or_default()
}

pub fn run(suite: Suite, config: &SuiteConfig) -> SuiteReport {
    match suite {
        Suite::Metric => metric_suite(config),
        Suite::Trace => trace_suite(config),
        Suite::Length => length_suite(config),
        Suite::Heisenberg => heisenberg_suite(config),
        Suite::Horoball => horoball_suite(config),
    }
}

/// Isometry invariance, symmetry, round trip, form value and lower-bound
/// dominance on random pairs, plus the fixed `(0,0,1)`, `(0,0,4)` values.
pub fn metric_suite(config: &SuiteConfig) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut invariance = Check::new("isometry invariance", 1e-8);
    let mut symmetry = Check::new("symmetry", 1e-12);
    let mut round_trip = Check::new("embed/unembed round trip (relative)", 1e-12);
    let mut form = Check::new("form value = -u (relative)", 1e-12);
    let mut dominance = Check::new("distance >= lower bound", 1e-10);
    let mut equality = Check::new("lower bound attained on ζ, v equal", 1e-10);
    for case in 0..config.metric_pairs {
        let n = 2 + case % 2;
        let p = fixtures::random_point(&mut rng, n);
        let q = fixtures::random_point(&mut rng, n);
        let g = fixtures::random_member(&mut rng, n, 2);
        let d = distance(&p, &q).unwrap_or(f64::NAN);
        let moved = act(&g, &p).and_then(|gp| act(&g, &q).and_then(|gq| distance(&gp, &gq)));
        match moved {
            Ok(dm) => invariance.record((dm - d).abs(), || {
                serde_json::json!({"p": point_json(&p), "q": point_json(&q), "g": matrix_json(&g)})
            }),
            // The image landed on the cusp at infinity; nothing to compare.
            Err(_) => {}
        }
        symmetry.record((d - distance(&q, &p).unwrap_or(f64::NAN)).abs(), || {
            serde_json::json!({"p": point_json(&p), "q": point_json(&q)})
        });
        let back = unembed(&embed(&p));
        let rt = back.map_or(f64::INFINITY, |b| {
            let dz: f64 = b.zeta.iter().zip(&p.zeta).map(|(a, c)| (a - c).norm()).fold(0.0, f64::max);
            let scale = 1.0 + p.zeta_norm_sqr() + p.v.abs() + p.u;
            dz.max((b.v - p.v).abs()).max((b.u - p.u).abs()) / scale
        });
        round_trip.record(rt, || serde_json::json!({"p": point_json(&p)}));
        let q_value = form_value(&HermitianForm::standard(n), &embed(&p)).unwrap_or(f64::NAN);
        let scale = 1.0 + p.zeta_norm_sqr() + p.v.abs() + p.u;
        form.record((q_value + p.u).abs() / scale.powi(2), || serde_json::json!({"p": point_json(&p)}));
        let lb = distance_lower_bound(p.u, q.u).unwrap_or(f64::NAN);
        dominance.record((lb - d).max(0.0), || serde_json::json!({"p": point_json(&p), "q": point_json(&q)}));
        let same = SiegelPoint::new(p.zeta.clone(), p.v, q.u);
        let d_same = distance(&p, &same).unwrap_or(f64::NAN);
        equality.record((d_same - lb).abs(), || serde_json::json!({"p": point_json(&p), "u": q.u}));
    }

    let exact = 2.0 * (25.0f64 / 16.0).acosh();
    let d14 = distance(&SiegelPoint::on_axis(2, 0.0, 1.0), &SiegelPoint::on_axis(2, 0.0, 4.0)).unwrap_or(f64::NAN);
    let mut fixed = Check::new("d((0,0,1),(0,0,4)) = 2·acosh(25/16)", 1e-10);
    fixed.record((d14 - exact).abs(), || serde_json::json!({"distance": d14}));
    let mut vs_length = Check::new("d((0,0,1),(0,0,4)) = length(diag(2,1,1/2))", 1e-4);
    let len = translation_length(&fixtures::dilation(2, Complex64::new(2.0, 0.0))).unwrap_or(f64::NAN);
    vs_length.record((d14 - len).abs(), || serde_json::json!({"distance": d14, "length": len}));

    finish(
        Suite::Metric,
        config.seed,
        vec![invariance, symmetry, round_trip, form, dominance, equality, fixed, vs_length],
    )
}

/// Commutator trace identity on random `(t, M)` with the trace computed by
/// matrix multiplication.
pub fn trace_suite(config: &SuiteConfig) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x7ace);
    let mut identity = Check::new("tr[g_∞(0,t), M] = n+1+|tc/2|² (scaled)", 1e-8);
    let mut stabilizer = Check::new("c = 0 gives trace n+1", 1e-8);
    for case in 0..config.trace_fixtures {
        let n = 2 + case % 3;
        let t = rng.gen_range(-4.0..4.0);
        let factors = 1 + case % 3;
        let m = fixtures::random_member(&mut rng, n, factors);
        let r = isometry::commutator_trace_check(t, &m);
        let c = isometry::c_entry(&m);
        let scale = 1.0 + (t * c).norm_sqr();
        identity.record(r.residual / scale, || {
            serde_json::json!({"t": t, "M": matrix_json(&m), "trace": [r.trace.re, r.trace.im], "predicted": r.predicted})
        });
        let h = heisenberg_to_matrix(&fixtures::random_heisenberg(&mut rng, n, Cusp::Infinity))
            .compose(&fixtures::random_dilation(&mut rng, n));
        let rs = isometry::commutator_trace_check(t, &h);
        stabilizer.record((rs.trace - Complex64::new((n + 1) as f64, 0.0)).norm(), || {
            serde_json::json!({"t": t, "M": matrix_json(&h)})
        });
    }
    finish(Suite::Trace, config.seed, vec![identity, stabilizer])
}

/// The 20 hyperbolic length fixtures: `r ∈ {1.2, 1.5, 2, 3, 5}`, `n ∈ {2, 3}`,
/// diagonal and conjugated.
pub fn length_fixtures(seed: u64) -> Vec<(f64, GroupElement)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1e97);
    let mut out = Vec::new();
    for n in [2, 3] {
        for conjugate in [false, true] {
            for r in [1.2, 1.5, 2.0, 3.0, 5.0] {
                out.push((r, fixtures::hyperbolic_fixture(&mut rng, n, r, conjugate)));
            }
        }
    }
    out
}

pub fn length_suite(config: &SuiteConfig) -> SuiteReport {
    let mut oracle = Check::new("length vs displacement oracle", 1e-4);
    let mut modulus = Check::new("recovered r", 1e-6);
    for (r, g) in length_fixtures(config.seed) {
        let exact = isometry::length_from_modulus(r);
        let len = translation_length(&g).unwrap_or(f64::NAN);
        modulus.record((len - exact).abs(), || serde_json::json!({"r": r, "M": matrix_json(&g)}));
        let o = min_displacement_oracle(&g, &config.oracle);
        oracle.record((len - o.value).abs(), || {
            serde_json::json!({"r": r, "M": matrix_json(&g), "length": len, "oracle": o.value, "argmin": point_json(&o.argmin)})
        });
    }
    finish(Suite::Length, config.seed, vec![oracle, modulus])
}

pub fn heisenberg_suite(config: &SuiteConfig) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x4e15);
    let mut law = Check::new("composition law = matrix product", 1e-12);
    let mut assoc = Check::new("associativity", 1e-12);
    let mut commute = Check::new("vertical translations commute exactly", 0.0);
    for case in 0..config.heisenberg_pairs {
        let n = 2 + case % 3;
        let cusp = if case % 2 == 0 { Cusp::Infinity } else { Cusp::Zero };
        let a = fixtures::random_heisenberg(&mut rng, n, cusp);
        let b = fixtures::random_heisenberg(&mut rng, n, cusp);
        let c = fixtures::random_heisenberg(&mut rng, n, cusp);
        let ab = heisenberg_compose(&a, &b).expect("same cusp");
        let product = heisenberg_to_matrix(&a).matrix() * heisenberg_to_matrix(&b).matrix();
        law.record(product.frobenius_distance(heisenberg_to_matrix(&ab).matrix()), || {
            serde_json::json!({"a": a, "b": b})
        });
        let left = heisenberg_compose(&ab, &c).expect("same cusp");
        let right = heisenberg_compose(&a, &heisenberg_compose(&b, &c).expect("same cusp")).expect("same cusp");
        let err = left
            .tau
            .iter()
            .zip(&right.tau)
            .map(|(x, y)| (x - y).norm())
            .fold((left.t - right.t).abs(), f64::max);
        assoc.record(err, || serde_json::json!({"a": a, "b": b, "c": c}));
        let va = heisenberg_to_matrix(&HeisenbergElement::vertical(n, a.t, cusp));
        let vb = heisenberg_to_matrix(&HeisenbergElement::vertical(n, b.t, cusp));
        let d = (va.matrix() * vb.matrix()).frobenius_distance(&(vb.matrix() * va.matrix()));
        commute.record(d, || serde_json::json!({"s": a.t, "t": b.t}));
    }
    finish(Suite::Heisenberg, config.seed, vec![law, assoc, commute])
}

/// Heights `u₀, u_∞` on a geometric grid over `[0.5, 8]`, skipping cells
/// within `0.1` of the product-4 locus.
pub fn horoball_grid(size: usize) -> Vec<(f64, f64)> {
    let at = |i: usize| 0.5 * 16f64.powf(i as f64 / (size.max(2) - 1) as f64);
    let mut out = Vec::new();
    for i in 0..size {
        for j in 0..size {
            let (u0, u_inf) = (at(i), at(j));
            if (u0 * u_inf - 4.0).abs() >= 0.1 {
                out.push((u0, u_inf));
            }
        }
    }
    out
}

pub fn horoball_suite(config: &SuiteConfig) -> SuiteReport {
    let mut agree = Check::new("disjointness = sampler verdict", 0.0);
    let mut sup = Check::new("sampler supremum = 4/u_∞", 1e-3);
    let budget = OracleBudget {
        search: crate::optimize::MultiStart {
            starts: 8,
            seed: config.seed,
            ..config.oracle.search.clone()
        },
        ..config.oracle.clone()
    };
    for (u0, u_inf) in horoball_grid(config.horoball_grid) {
        let Ok(sample) = horoball_intersection_sampler(2, u0, u_inf, &budget) else {
            agree.record(f64::INFINITY, || serde_json::json!({"u0": u0, "uInf": u_inf}));
            continue;
        };
        let disjoint = horoballs_disjoint(u0, u_inf).unwrap_or(false);
        let found = sample.witness.is_some();
        agree.record(if disjoint == !found { 0.0 } else { 1.0 }, || {
            serde_json::json!({"u0": u0, "uInf": u_inf, "disjoint": disjoint, "witness": sample.witness.as_ref().map(point_json)})
        });
        sup.record((sample.sup_estimate - 4.0 / u_inf).abs(), || {
            serde_json::json!({"uInf": u_inf, "estimate": sample.sup_estimate})
        });
    }
    finish(Suite::Horoball, config.seed, vec![agree, sup])
}
