//! Horospherical coordinates `(ζ, v, u)` on the Siegel domain, the embedding
//! into `ℙ(ℂ^{n,1})`, the Bergman distance, horoballs at the two standard cusps
//! and numerical oracles built on them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{GroupElement, ProjectivePoint};
use crate::optimize::{self, MultiStart, SearchBox};

/// Slack allowed below 1 in the `acosh` argument before clamping.
const ACOSH_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SiegelPoint {
    pub zeta: Vec<Complex64>,
    pub v: f64,
    pub u: f64,
}

impl SiegelPoint {
    pub fn new(zeta: Vec<Complex64>, v: f64, u: f64) -> Self {
        Self { zeta, v, u }
    }

    /// `(0, v, u)` in the ball of complex dimension `n`.
    pub fn on_axis(n: usize, v: f64, u: f64) -> Self {
        Self {
            zeta: vec![Complex64::new(0.0, 0.0); n.saturating_sub(1)],
            v,
            u,
        }
    }

    /// Complex dimension `n` of the ambient ball.
    pub fn n(&self) -> usize {
        self.zeta.len() + 1
    }

    pub fn zeta_norm_sqr(&self) -> f64 {
        self.zeta.iter().map(Complex64::norm_sqr).sum()
    }

    fn require_interior(&self) -> Result<()> {
        if !(self.u > 0.0) {
            return Err(Error::NonpositiveHeight(self.u));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cusp {
    Infinity,
    Zero,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Horoball {
    pub cusp: Cusp,
    pub height: f64,
}

impl Horoball {
    pub fn new(cusp: Cusp, height: f64) -> Result<Self> {
        if !(height > 0.0) {
            return Err(Error::NonpositiveHeight(height));
        }
        Ok(Self { cusp, height })
    }
}

/// `ψ(ζ, v, u) = [½(−‖ζ‖² − u + iv), ζ, 1]`.
pub fn embed(p: &SiegelPoint) -> ProjectivePoint {
    let mut coords = Vec::with_capacity(p.zeta.len() + 2);
    coords.push(Complex64::new(-0.5 * (p.zeta_norm_sqr() + p.u), 0.5 * p.v));
    coords.extend_from_slice(&p.zeta);
    coords.push(Complex64::new(1.0, 0.0));
    ProjectivePoint::new(coords).expect("last coordinate is 1")
}

/// Inverse of [`embed`] on points with nonzero last coordinate.
pub fn unembed(z: &ProjectivePoint) -> Result<SiegelPoint> {
    let c = z.coords();
    let last = c[c.len() - 1];
    if last.norm() <= 1e-15 * z.norm_sqr().sqrt() {
        return Err(Error::PointAtInfinity);
    }
    let inv = last.inv();
    let w1 = c[0] * inv;
    let zeta: Vec<Complex64> = c[1..c.len() - 1].iter().map(|x| x * inv).collect();
    let zeta_sq: f64 = zeta.iter().map(Complex64::norm_sqr).sum();
    let u = -2.0 * w1.re - zeta_sq;
    let scale = 1.0 + 2.0 * w1.re.abs() + zeta_sq;
    if u <= -1e-12 * scale {
        return Err(Error::OutsideDomain { u });
    }
    Ok(SiegelPoint {
        zeta,
        v: 2.0 * w1.im,
        u,
    })
}

/// The quantity `|‖ζ₁−ζ₂‖² + u₁ + u₂ + i(v₁ − v₂) + 2i·Im⟨ζ₁,ζ₂⟩|² / (4u₁u₂)`,
/// with `⟨a, b⟩ = Σ aₖ·b̄ₖ`.
fn distance_argument(p: &SiegelPoint, q: &SiegelPoint) -> f64 {
    let mut diff_sq = 0.0;
    let mut inner = Complex64::new(0.0, 0.0);
    for (a, b) in p.zeta.iter().zip(&q.zeta) {
        diff_sq += (a - b).norm_sqr();
        inner += a * b.conj();
    }
    let w = Complex64::new(diff_sq + p.u + q.u, p.v - q.v + 2.0 * inner.im);
    w.norm_sqr() / (4.0 * p.u * q.u)
}

fn clamped_acosh(x: f64) -> f64 {
    debug_assert!(x >= 1.0 - ACOSH_SLACK, "acosh argument {x} below 1");
    x.max(1.0).acosh()
}

/// Bergman distance `2·acosh(…)` between interior points.
pub fn distance(p: &SiegelPoint, q: &SiegelPoint) -> Result<f64> {
    p.require_interior()?;
    q.require_interior()?;
    if p.zeta.len() != q.zeta.len() {
        return Err(Error::DimensionMismatch {
            expected: p.zeta.len(),
            found: q.zeta.len(),
        });
    }
    Ok(2.0 * clamped_acosh(distance_argument(p, q)))
}

/// `2·acosh((u₁+u₂)²/(4u₁u₂))`, attained when `ζ₁ = ζ₂` and `v₁ = v₂`.
pub fn distance_lower_bound(u1: f64, u2: f64) -> Result<f64> {
    if !(u1 > 0.0) {
        return Err(Error::NonpositiveHeight(u1));
    }
    if !(u2 > 0.0) {
        return Err(Error::NonpositiveHeight(u2));
    }
    Ok(2.0 * clamped_acosh((u1 + u2).powi(2) / (4.0 * u1 * u2)))
}

/// Action of a group element by matrix multiplication on `ψ(p)`.
pub fn act(m: &GroupElement, p: &SiegelPoint) -> Result<SiegelPoint> {
    if m.matrix().dim() != p.zeta.len() + 2 {
        return Err(Error::DimensionMismatch {
            expected: m.matrix().dim(),
            found: p.zeta.len() + 2,
        });
    }
    let image = m.matrix().apply(embed(p).coords());
    let last = image[image.len() - 1];
    let norm = image.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
    if last.norm() <= 1e-14 * norm {
        return Err(Error::ImageAtInfinity);
    }
    match unembed(&ProjectivePoint::new(image)?) {
        Err(Error::PointAtInfinity) => Err(Error::ImageAtInfinity),
        other => other,
    }
}

/// Height of the image of `p` under the standard swap `[[0,0,1],[0,I,0],[1,0,0]]`:
/// `4u / |‖ζ‖² + u − iv|²`.
pub fn swapped_height(p: &SiegelPoint) -> f64 {
    let w = Complex64::new(p.zeta_norm_sqr() + p.u, -p.v);
    4.0 * p.u / w.norm_sqr()
}

pub fn horoball_contains(ball: &Horoball, p: &SiegelPoint) -> bool {
    match ball.cusp {
        Cusp::Infinity => p.u > ball.height,
        Cusp::Zero => p.u > 0.0 && swapped_height(p) > ball.height,
    }
}

/// `B₀(u₀)` and `B_∞(u_∞)` are disjoint iff `u₀·u_∞ ≥ 4`.
pub fn horoballs_disjoint(u0: f64, u_inf: f64) -> Result<bool> {
    if !(u0 > 0.0) {
        return Err(Error::NonpositiveHeight(u0));
    }
    if !(u_inf > 0.0) {
        return Err(Error::NonpositiveHeight(u_inf));
    }
    Ok(u0 * u_inf >= 4.0)
}

/// Sampling parameters for the numerical oracles.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleBudget {
    pub search: MultiStart,
    /// Multiplies every half-width of the default search box.
    pub box_scale: f64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            search: MultiStart::default(),
            box_scale: 1.0,
        }
    }
}

impl OracleBudget {
    pub fn with_starts(starts: usize) -> Self {
        Self {
            search: MultiStart {
                starts,
                ..MultiStart::default()
            },
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub value: f64,
    pub argmin: SiegelPoint,
    pub converged: bool,
    pub evaluations: usize,
}

/// Decode optimiser coordinates `[Re ζ₁, Im ζ₁, …, v, log u]`.
fn decode(x: &[f64]) -> SiegelPoint {
    let k = (x.len() - 2) / 2;
    let zeta = (0..k).map(|i| Complex64::new(x[2 * i], x[2 * i + 1])).collect();
    SiegelPoint {
        zeta,
        v: x[x.len() - 2],
        u: x[x.len() - 1].exp(),
    }
}

/// Numerical upper approximation of `inf_z d(z, Mz)`: multi-start Powell /
/// golden-section search over `ζ ∈ [−4,4]^{2(n−1)}`, `v ∈ [−8,8]`,
/// `log u ∈ [−3,3]` (all scaled by `budget.box_scale`). Test oracle only.
pub fn min_displacement_oracle(m: &GroupElement, budget: &OracleBudget) -> OracleResult {
    let n = m.n();
    let s = budget.box_scale;
    let mut lower = vec![-4.0 * s; 2 * (n - 1)];
    let mut upper = vec![4.0 * s; 2 * (n - 1)];
    lower.extend([-8.0 * s, -3.0 * s]);
    upper.extend([8.0 * s, 3.0 * s]);
    let bounds = SearchBox::new(lower, upper);
    let f = |x: &[f64]| {
        let p = decode(x);
        match act(m, &p) {
            Ok(q) if q.u > 0.0 => distance(&p, &q).unwrap_or(f64::INFINITY),
            _ => f64::INFINITY,
        }
    };
    let best = optimize::minimize(&f, &bounds, &budget.search);
    OracleResult {
        value: best.value,
        argmin: decode(&best.x),
        converged: best.converged,
        evaluations: best.evaluations,
    }
}

#[derive(Clone, Debug)]
pub struct IntersectionSample {
    /// Best value found for `sup { u(ιp) : p ∈ B_∞(u_∞) }`.
    pub sup_estimate: f64,
    /// A point lying in both `B₀(u₀)` and `B_∞(u_∞)`, when one was found.
    pub witness: Option<SiegelPoint>,
}

/// Searches `B_∞(u_∞)` for points of `B₀(u₀)` by maximising the swapped height
/// over `u = u_∞ + eˢ`.
pub fn horoball_intersection_sampler(n: usize, u0: f64, u_inf: f64, budget: &OracleBudget) -> Result<IntersectionSample> {
    horoballs_disjoint(u0, u_inf)?;
    let s = budget.box_scale;
    let mut lower = vec![-4.0 * s; 2 * (n - 1)];
    let mut upper = vec![4.0 * s; 2 * (n - 1)];
    lower.extend([-8.0 * s, -30.0]);
    upper.extend([8.0 * s, (8.0 * u_inf.max(1.0)).ln() * s]);
    let bounds = SearchBox::new(lower, upper);
    let point = |x: &[f64]| {
        let mut p = decode(x);
        p.u = u_inf + x[x.len() - 1].exp();
        p
    };
    let f = |x: &[f64]| -swapped_height(&point(x));
    let best = optimize::minimize(&f, &bounds, &budget.search);
    let p = point(&best.x);
    let inside_inf = horoball_contains(&Horoball::new(Cusp::Infinity, u_inf)?, &p);
    let inside_zero = horoball_contains(&Horoball::new(Cusp::Zero, u0)?, &p);
    Ok(IntersectionSample {
        sup_estimate: -best.value,
        witness: (inside_inf && inside_zero).then_some(p),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{form_value, HermitianForm, SquareMatrix};
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag_element(a: f64) -> GroupElement {
        GroupElement::new(SquareMatrix::from_real_rows(&[&[a, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0 / a]]).unwrap(), 1e-12)
            .unwrap()
    }

    #[test]
    fn embed_examples() {
        let z = embed(&SiegelPoint::on_axis(2, 0.0, 1.0));
        assert_eq!(z.coords(), &[c(-0.5, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let z = embed(&SiegelPoint::on_axis(2, 0.0, 0.0));
        assert_eq!(z.coords(), &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(form_value(&HermitianForm::standard(2), &z).unwrap(), 0.0);
        let p = SiegelPoint::new(vec![c(1.0, 0.0)], 2.0, 3.0);
        assert_eq!(embed(&p).coords(), &[c(-2.0, 1.0), c(1.0, 0.0), c(1.0, 0.0)]);
        assert_abs_diff_eq!(form_value(&HermitianForm::standard(2), &embed(&p)).unwrap(), -3.0, epsilon = 1e-14);
    }

    #[test]
    fn unembed_examples() {
        let p = unembed(&ProjectivePoint::new(vec![c(-0.5, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap()).unwrap();
        assert_eq!(p, SiegelPoint::on_axis(2, 0.0, 1.0));
        let p = unembed(&ProjectivePoint::new(vec![c(-2.0, 1.0), c(1.0, 0.0), c(1.0, 0.0)]).unwrap()).unwrap();
        assert_eq!(p, SiegelPoint::new(vec![c(1.0, 0.0)], 2.0, 3.0));
        let inf = ProjectivePoint::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(matches!(unembed(&inf), Err(Error::PointAtInfinity)));
        let outside = ProjectivePoint::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(unembed(&outside), Err(Error::OutsideDomain { .. })));
    }

    #[test]
    fn distance_examples() {
        let a = SiegelPoint::on_axis(2, 0.0, 1.0);
        assert_eq!(distance(&a, &a).unwrap(), 0.0);
        let b = SiegelPoint::on_axis(2, 0.0, 4.0);
        assert_abs_diff_eq!(distance(&a, &b).unwrap(), 2.0 * (25.0f64 / 16.0).acosh(), epsilon = 1e-14);
        let p = SiegelPoint::on_axis(2, 1.0, 2.0);
        let q = SiegelPoint::on_axis(2, -1.0, 2.0);
        let d = distance(&p, &q).unwrap();
        assert!(d > 0.0 && d > distance_lower_bound(2.0, 2.0).unwrap());
        assert!(matches!(distance(&SiegelPoint::on_axis(2, 0.0, 0.0), &a), Err(Error::NonpositiveHeight(_))));
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(distance_lower_bound(3.0, 3.0).unwrap(), 0.0);
        assert_abs_diff_eq!(distance_lower_bound(1.0, 4.0).unwrap(), 2.0 * (25.0f64 / 16.0).acosh(), epsilon = 1e-15);
        assert!(distance_lower_bound(-1.0, 1.0).is_err());
    }

    #[test]
    fn act_examples() {
        let p = SiegelPoint::new(vec![c(0.3, -0.2)], 0.7, 1.9);
        let id = GroupElement::identity(2);
        let q = act(&id, &p).unwrap();
        assert_abs_diff_eq!(q.u, p.u, epsilon = 1e-14);
        assert_abs_diff_eq!(q.v, p.v, epsilon = 1e-14);

        let q = act(&diag_element(2.0), &SiegelPoint::on_axis(2, 0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(q.u, 4.0, epsilon = 1e-14);
        assert_abs_diff_eq!(q.v, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn horoball_examples() {
        let p = SiegelPoint::on_axis(2, 0.0, 2.0);
        assert!(horoball_contains(&Horoball::new(Cusp::Infinity, 1.0).unwrap(), &p));
        assert_abs_diff_eq!(swapped_height(&p), 2.0, epsilon = 1e-15);
        assert!(horoball_contains(&Horoball::new(Cusp::Zero, 1.0).unwrap(), &p));
        assert!(!horoball_contains(&Horoball::new(Cusp::Zero, 5.0).unwrap(), &p));
        assert!(Horoball::new(Cusp::Zero, 0.0).is_err());
    }

    #[test]
    fn disjointness_examples() {
        assert!(horoballs_disjoint(2.0, 2.0).unwrap());
        assert!(!horoballs_disjoint(1.0, 1.0).unwrap());
        assert!(horoballs_disjoint(0.0, 1.0).is_err());
    }

    #[test]
    fn sampler_finds_intersection_below_product_four() {
        let s = horoball_intersection_sampler(2, 1.5, 2.0, &OracleBudget::with_starts(8)).unwrap();
        assert!(s.witness.is_some());
        assert!((s.sup_estimate - 2.0).abs() < 1e-3);
    }

    #[test]
    fn oracle_examples() {
        let id = GroupElement::identity(2);
        let r = min_displacement_oracle(&id, &OracleBudget::with_starts(4));
        assert!(r.value < 1e-7);
        let r = min_displacement_oracle(&diag_element(2.0), &OracleBudget::with_starts(8));
        assert!((r.value - 2.0 * (25.0f64 / 16.0).acosh()).abs() < 1e-4, "{}", r.value);
    }

    #[test]
    fn point_json_shape() {
        let p = SiegelPoint::new(vec![c(1.0, -2.0)], 0.5, 3.0);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"zeta":[[1.0,-2.0]],"v":0.5,"u":3.0}"#);
    }
}
