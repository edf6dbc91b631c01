//! Derivative-free box-constrained minimisation: golden-section line search,
//! Powell's conjugate-direction method on top of it, and a deterministic
//! multi-start driver.
//!
//! These routines back the numerical oracles (displacement infimum, horoball
//! intersection sampler). They are used to cross-check closed forms, never to
//! produce certified values.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Clone, Debug, PartialEq)]
pub struct SearchBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl SearchBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(lower.len(), upper.len());
        assert!(lower.iter().zip(&upper).all(|(l, u)| l <= u));
        Self { lower, upper }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn center(&self) -> Vec<f64> {
        self.lower.iter().zip(&self.upper).map(|(l, u)| 0.5 * (l + u)).collect()
    }

    fn clamp(&self, x: &mut [f64]) {
        for ((xi, l), u) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            *xi = xi.clamp(*l, *u);
        }
    }

    /// Parameter interval `[t₀, t₁]` keeping `x + t·d` inside the box.
    fn feasible_interval(&self, x: &[f64], d: &[f64]) -> (f64, f64) {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for i in 0..x.len() {
            if d[i].abs() < 1e-300 {
                continue;
            }
            let a = (self.lower[i] - x[i]) / d[i];
            let b = (self.upper[i] - x[i]) / d[i];
            lo = lo.max(a.min(b));
            hi = hi.min(a.max(b));
        }
        (lo.min(0.0), hi.max(0.0))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiStart {
    /// Number of starting points; start `0` is the box centre.
    pub starts: usize,
    /// Line-search resolution in the search parameter.
    pub tol: f64,
    /// Powell sweeps allowed per start before giving up.
    pub max_sweeps: usize,
    pub seed: u64,
}

impl Default for MultiStart {
    fn default() -> Self {
        Self {
            starts: 64,
            tol: 1e-6,
            max_sweeps: 200,
            seed: 0x5eed_c0de,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub converged: bool,
    pub evaluations: usize,
}

/// Golden-section search for a minimum of `f` on `[a, b]`.
/// Returns `(argmin, min, evaluations)`.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> (f64, f64, usize) {
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut evals = 2;
    while (b - a) > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        evals += 1;
    }
    if fc <= fd {
        (c, fc, evals)
    } else {
        (d, fd, evals)
    }
}

struct LineResult {
    t: f64,
    value: f64,
    evaluations: usize,
}

/// Minimise `t ↦ f(x + t·d)` over the feasible segment, growing the bracket
/// while the minimum sits on an artificial (non-box) edge.
fn line_minimize<F: Fn(&[f64]) -> f64>(
    f: &F,
    bounds: &SearchBox,
    x: &[f64],
    fx: f64,
    d: &[f64],
    step: &mut f64,
    tol: f64,
) -> LineResult {
    let (tlo, thi) = bounds.feasible_interval(x, d);
    let mut evaluations = 0;
    let mut probe = x.to_vec();
    let mut eval = |t: f64| {
        for i in 0..x.len() {
            probe[i] = x[i] + t * d[i];
        }
        bounds.clamp(&mut probe);
        f(&probe)
    };
    let mut best = LineResult {
        t: 0.0,
        value: fx,
        evaluations: 0,
    };
    for _ in 0..40 {
        let a = tlo.max(-*step);
        let b = thi.min(*step);
        if b - a <= tol {
            break;
        }
        let (t, v, n) = golden_section(&mut eval, a, b, tol);
        evaluations += n;
        if v < best.value {
            best.t = t;
            best.value = v;
        }
        let edge = 2.0 * tol;
        let at_low = (t - a) < edge && a > tlo;
        let at_high = (b - t) < edge && b < thi;
        if at_low || at_high {
            *step *= 4.0;
        } else {
            *step = (4.0 * best.t.abs()).max(100.0 * tol);
            break;
        }
    }
    best.evaluations = evaluations;
    best
}

/// Powell's method from `x0`, with every line search done by golden section.
pub fn powell<F: Fn(&[f64]) -> f64>(f: &F, bounds: &SearchBox, x0: &[f64], tol: f64, max_sweeps: usize) -> Minimum {
    let dim = x0.len();
    let mut x = x0.to_vec();
    bounds.clamp(&mut x);
    let mut fx = f(&x);
    let mut evaluations = 1;
    let axes = || -> Vec<Vec<f64>> {
        (0..dim)
            .map(|i| {
                let mut e = vec![0.0; dim];
                e[i] = 1.0;
                e
            })
            .collect()
    };
    let mut dirs = axes();
    let widths: Vec<f64> = bounds.lower.iter().zip(&bounds.upper).map(|(l, u)| u - l).collect();
    let mut steps: Vec<f64> = widths.iter().map(|w| (0.25 * w).max(tol)).collect();
    let ftol = 1e-14;

    for sweep in 0..max_sweeps {
        if sweep > 0 && sweep % (dim + 1) == 0 {
            dirs = axes();
            steps = widths.iter().map(|w| (0.25 * w).max(tol)).collect();
        }
        let x_start = x.clone();
        let f_start = fx;
        let mut biggest_drop = 0.0;
        let mut biggest_idx = 0;
        let mut max_move: f64 = 0.0;
        for (k, d) in dirs.iter().enumerate() {
            let before = fx;
            let res = line_minimize(f, bounds, &x, fx, d, &mut steps[k], tol);
            evaluations += res.evaluations;
            if res.value < fx {
                for i in 0..dim {
                    x[i] += res.t * d[i];
                }
                bounds.clamp(&mut x);
                fx = res.value;
                max_move = max_move.max(res.t.abs());
            }
            if before - fx > biggest_drop {
                biggest_drop = before - fx;
                biggest_idx = k;
            }
        }

        let decrease = f_start - fx;
        if decrease <= ftol * (1.0 + fx.abs()) && max_move <= 10.0 * tol {
            return Minimum {
                x,
                value: fx,
                converged: true,
                evaluations,
            };
        }

        // Conjugate direction from the net move of this sweep.
        let net: Vec<f64> = x.iter().zip(&x_start).map(|(a, b)| a - b).collect();
        let len = net.iter().map(|v| v * v).sum::<f64>().sqrt();
        if len > tol {
            let unit: Vec<f64> = net.iter().map(|v| v / len).collect();
            let mut step = 2.0 * len;
            let res = line_minimize(f, bounds, &x, fx, &unit, &mut step, tol);
            evaluations += res.evaluations;
            if res.value < fx {
                for i in 0..dim {
                    x[i] += res.t * unit[i];
                }
                bounds.clamp(&mut x);
                fx = res.value;
            }
            dirs[biggest_idx] = unit;
            steps[biggest_idx] = step;
        }
    }
    Minimum {
        x,
        value: fx,
        converged: false,
        evaluations,
    }
}

/// Start point `i`; independent of the total number of starts so that a
/// larger budget always contains the smaller one.
pub fn start_point(bounds: &SearchBox, seed: u64, index: usize) -> Vec<f64> {
    if index == 0 {
        return bounds.center();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    bounds
        .lower
        .iter()
        .zip(&bounds.upper)
        .map(|(l, u)| if u > l { rng.gen_range(*l..*u) } else { *l })
        .collect()
}

/// Multi-start Powell. Starts run in parallel; the reduction picks the lowest
/// value, ties by start index, so the result does not depend on scheduling.
pub fn minimize<F: Fn(&[f64]) -> f64 + Sync>(f: &F, bounds: &SearchBox, opts: &MultiStart) -> Minimum {
    let runs: Vec<Minimum> = (0..opts.starts.max(1))
        .into_par_iter()
        .map(|i| {
            let x0 = start_point(bounds, opts.seed, i);
            powell(f, bounds, &x0, opts.tol, opts.max_sweeps)
        })
        .collect();
    let evaluations = runs.iter().map(|r| r.evaluations).sum();
    let mut best = runs
        .into_iter()
        .reduce(|a, b| if b.value < a.value { b } else { a })
        .expect("at least one start");
    best.evaluations = evaluations;
    best
}
