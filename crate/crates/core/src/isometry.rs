//! Classification of isometries of complex hyperbolic space, translation
//! length of hyperbolic elements, the Heisenberg group at a cusp and the trace
//! identities behind the cusp-depth estimates.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{eigenvalues, singular_values, GroupElement, SquareMatrix};
use crate::siegel::Cusp;

/// Default threshold on `ρ − 1` for calling an element hyperbolic.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Eigenvalues closer than this (after scaling to `|det| = 1`) are treated as
/// one cluster. Perturbed Jordan blocks split by roughly `ε^{1/k}`, so the
/// radius has to sit well above `1e-5`.
pub const CLUSTER_RADIUS: f64 = 1e-3;

/// Singular values below `RANK_TOL·‖M‖₂` count as zero in the rank test.
pub const RANK_TOL: f64 = 1e-8;

const INDETERMINATE_MARGIN: f64 = 10.0 * f64::EPSILON;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IsometryKind {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl fmt::Display for IsometryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Elliptic => "elliptic",
            Self::Parabolic => "parabolic",
            Self::Hyperbolic => "hyperbolic",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsometryClass {
    pub kind: IsometryKind,
    /// Dilation modulus `r > 1` for hyperbolic elements, `1` otherwise.
    pub r: f64,
    /// Argument of the largest-modulus eigenvalue in `(−π, π]`; hyperbolic only.
    pub theta: f64,
    /// Distance of the decisive quantity from its threshold.
    pub margin: f64,
}

struct Cluster {
    mean: Complex64,
    multiplicity: usize,
}

fn cluster_eigenvalues(eig: &[Complex64]) -> Vec<Cluster> {
    // Single-linkage clustering via union-find; n + 1 ≤ 16 so O(k²) is fine.
    let k = eig.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..k {
        for j in i + 1..k {
            if (eig[i] - eig[j]).norm() <= CLUSTER_RADIUS {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut clusters: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..k {
        let root = find(&mut parent, i);
        match clusters.iter_mut().find(|c| c.0 == root) {
            Some(c) => {
                c.1 += eig[i];
                c.2 += 1;
            }
            None => clusters.push((root, eig[i], 1)),
        }
    }
    clusters
        .into_iter()
        .map(|(_, sum, m)| Cluster {
            mean: sum / m as f64,
            multiplicity: m,
        })
        .collect()
}

/// Elliptic / parabolic / hyperbolic classification.
///
/// Hyperbolicity is decided by the scale-free ratio `ρ = max|λ| / min|λ|`
/// over eigenvalue clusters; below the threshold the element is parabolic
/// exactly when some repeated eigenvalue has a deficient eigenspace.
pub fn classify(m: &GroupElement, tol: f64) -> Result<IsometryClass> {
    let unit = m.unit_representative();
    let eig = eigenvalues(&unit)?;
    let clusters = cluster_eigenvalues(&eig);
    let max = clusters.iter().max_by(|a, b| a.mean.norm().total_cmp(&b.mean.norm())).unwrap();
    let min_mod = clusters.iter().map(|c| c.mean.norm()).fold(f64::INFINITY, f64::min);
    let rho = max.mean.norm() / min_mod;
    let rho_margin = (rho - 1.0 - tol).abs();

    if rho > 1.0 + tol {
        if rho_margin < INDETERMINATE_MARGIN {
            return Err(Error::Indeterminate {
                first: IsometryKind::Hyperbolic,
                second: IsometryKind::Elliptic,
                margin: rho_margin,
            });
        }
        return Ok(IsometryClass {
            kind: IsometryKind::Hyperbolic,
            r: rho.sqrt(),
            theta: max.mean.arg(),
            margin: rho_margin,
        });
    }

    let spectral_norm = singular_values(&unit)?[0];
    let threshold = RANK_TOL * spectral_norm;
    let mut deficient = false;
    let mut gap = f64::INFINITY;
    for cluster in clusters.iter().filter(|c| c.multiplicity > 1) {
        let shifted = unit.sub(&SquareMatrix::identity(unit.dim()).scale(cluster.mean));
        let sv = singular_values(&shifted)?;
        // Diagonalizable on this cluster iff the `multiplicity` smallest
        // singular values all vanish; the decisive one is the largest of them.
        let decisive = sv[sv.len() - cluster.multiplicity];
        gap = gap.min((decisive - threshold).abs() / spectral_norm);
        if decisive > threshold {
            deficient = true;
        }
    }
    let kind = if deficient {
        IsometryKind::Parabolic
    } else {
        IsometryKind::Elliptic
    };
    let margin = rho_margin.min(gap);
    if margin < INDETERMINATE_MARGIN {
        let other = if rho_margin < gap {
            IsometryKind::Hyperbolic
        } else if deficient {
            IsometryKind::Elliptic
        } else {
            IsometryKind::Parabolic
        };
        return Err(Error::Indeterminate {
            first: kind,
            second: other,
            margin,
        });
    }
    Ok(IsometryClass {
        kind,
        r: 1.0,
        theta: 0.0,
        margin,
    })
}

/// `2·acosh((r + 1/r)² / 4)`.
pub fn length_from_modulus(r: f64) -> f64 {
    let x = 0.25 * (r + r.recip()).powi(2);
    2.0 * x.max(1.0).acosh()
}

pub fn translation_length(m: &GroupElement) -> Result<f64> {
    let class = classify(m, DEFAULT_TOL)?;
    if class.kind != IsometryKind::Hyperbolic {
        return Err(Error::NotHyperbolic(class.kind));
    }
    Ok(length_from_modulus(class.r))
}

/// Heisenberg translation `(τ, t)` based at one of the two standard cusps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeisenbergElement {
    pub tau: Vec<Complex64>,
    pub t: f64,
    pub cusp: Cusp,
}

impl HeisenbergElement {
    pub fn new(tau: Vec<Complex64>, t: f64, cusp: Cusp) -> Self {
        Self { tau, t, cusp }
    }

    pub fn vertical(n: usize, t: f64, cusp: Cusp) -> Self {
        Self {
            tau: vec![Complex64::new(0.0, 0.0); n - 1],
            t,
            cusp,
        }
    }
}

/// Upper-triangular `g_∞(τ, t)` or lower-triangular `g₀(σ, s)`:
///
/// ```text
/// g_∞ = [ 1  −τ*  −(‖τ‖² + it)/2 ]      g₀ = [ 1               0    0 ]
///       [ 0   I    τ             ]           [ σ               I    0 ]
///       [ 0   0    1             ]           [ −(‖σ‖² + is)/2  −σ*  1 ]
/// ```
pub fn heisenberg_to_matrix(h: &HeisenbergElement) -> GroupElement {
    let dim = h.tau.len() + 2;
    let last = dim - 1;
    let mut m = SquareMatrix::identity(dim);
    let norm_sq: f64 = h.tau.iter().map(Complex64::norm_sqr).sum();
    let corner = Complex64::new(-0.5 * norm_sq, -0.5 * h.t);
    match h.cusp {
        Cusp::Infinity => {
            for (k, tau) in h.tau.iter().enumerate() {
                m.set(0, k + 1, -tau.conj());
                m.set(k + 1, last, *tau);
            }
            m.set(0, last, corner);
        }
        Cusp::Zero => {
            for (k, sigma) in h.tau.iter().enumerate() {
                m.set(k + 1, 0, *sigma);
                m.set(last, k + 1, -sigma.conj());
            }
            m.set(last, 0, corner);
        }
    }
    GroupElement::unchecked(m).expect("heisenberg matrices are nonzero")
}

/// Group law `(τ₁, t₁)(τ₂, t₂) = (τ₁ + τ₂, t₁ + t₂ + 2·Im⟨τ₁, τ₂⟩)` with
/// `⟨a, b⟩ = Σ āₖbₖ`; matches the product of the matrices above.
pub fn heisenberg_compose(a: &HeisenbergElement, b: &HeisenbergElement) -> Result<HeisenbergElement> {
    if a.cusp != b.cusp {
        return Err(Error::CuspMismatch);
    }
    if a.tau.len() != b.tau.len() {
        return Err(Error::DimensionMismatch {
            expected: a.tau.len(),
            found: b.tau.len(),
        });
    }
    let inner: Complex64 = a.tau.iter().zip(&b.tau).map(|(x, y)| x.conj() * y).sum();
    // g₀ = J g_∞ J, so the law is the same at both cusps.
    Ok(HeisenbergElement {
        tau: a.tau.iter().zip(&b.tau).map(|(x, y)| x + y).collect(),
        t: a.t + b.t + 2.0 * inner.im,
        cusp: a.cusp,
    })
}

/// The `c` entry (bottom-left) of the `|det| = 1` representative.
pub fn c_entry(m: &GroupElement) -> Complex64 {
    let u = m.unit_representative();
    u.get(u.dim() - 1, 0)
}

/// `true` iff `|c| ≤ tol·‖M‖` on the normal form.
pub fn fixes_infinity(m: &GroupElement, tol: f64) -> bool {
    let nf = m.normal_form();
    nf.get(nf.dim() - 1, 0).norm() <= tol * nf.frobenius_norm()
}

/// `[[0, 0, 1/c̄], [0, A, 0], [c, 0, 0]]`, exchanging `q_∞` and `q₀`.
pub fn swap_form(c: Complex64, rotation: &SquareMatrix) -> Result<GroupElement> {
    if c.norm() == 0.0 {
        return Err(Error::InvalidInput("swap needs c ≠ 0".into()));
    }
    let k = rotation.dim();
    let unitary_defect = (&rotation.adjoint() * rotation).frobenius_distance(&SquareMatrix::identity(k));
    if unitary_defect > 1e-10 {
        return Err(Error::InvalidInput(format!("rotation block is not unitary (defect {unitary_defect:.3e})")));
    }
    let dim = k + 2;
    let mut m = SquareMatrix::zeros(dim);
    m.set(0, dim - 1, c.conj().inv());
    m.set(dim - 1, 0, c);
    for i in 0..k {
        for j in 0..k {
            m.set(i + 1, j + 1, rotation.get(i, j));
        }
    }
    GroupElement::unchecked(m)
}

/// `|2/c|²`, the bound on `u(z)·u(Mz)` for elements not fixing `q_∞`.
pub fn u_product_bound(m: &GroupElement) -> Result<f64> {
    if fixes_infinity(m, 1e-12) {
        return Err(Error::StabilizerElement);
    }
    Ok(4.0 / c_entry(m).norm_sqr())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CommutatorTrace {
    pub trace: Complex64,
    pub predicted: f64,
    pub residual: f64,
}

/// `tr(g M g⁻¹ M⁻¹)` for the vertical translation `g = g_∞(0, t)`, computed by
/// matrix multiplication, against the prediction `n + 1 + |tc/2|²`.
pub fn commutator_trace_check(t: f64, m: &GroupElement) -> CommutatorTrace {
    let g = heisenberg_to_matrix(&HeisenbergElement::vertical(m.n(), t, Cusp::Infinity));
    let commutator = &(&(g.matrix() * m.matrix()) * g.inverse().matrix()) * m.inverse().matrix();
    let trace = commutator.trace();
    let c = c_entry(m);
    let predicted = (m.n() + 1) as f64 + (0.5 * t * c).norm_sqr();
    CommutatorTrace {
        trace,
        predicted,
        residual: (trace - predicted).norm(),
    }
}

/// `|tr|` of the representative with `|det| = 1`; the phase choice does not
/// change the modulus.
pub fn abs_trace(m: &GroupElement) -> f64 {
    m.unit_representative().trace().norm()
}

/// If `M` is projectively a vertical translation `g_∞(0, t)`, returns `t`.
pub fn vertical_translation_length(m: &GroupElement, tol: f64) -> Option<f64> {
    let mat = m.matrix();
    let dim = mat.dim();
    let a = mat.get(0, 0);
    if a.norm() == 0.0 {
        return None;
    }
    let scaled = mat.scale(a.inv());
    let corner = scaled.get(0, dim - 1);
    let mut expected = SquareMatrix::identity(dim);
    expected.set(0, dim - 1, Complex64::new(0.0, corner.im));
    let scale = scaled.frobenius_norm();
    if scaled.frobenius_distance(&expected) > tol * scale {
        return None;
    }
    let t = -2.0 * corner.im;
    (t.abs() > tol * scale).then_some(t)
}
