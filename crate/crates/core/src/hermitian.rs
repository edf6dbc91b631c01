//! Complex scalar and small dense matrix arithmetic, the Hermitian form `J₀`
//! of signature `(n,1)`, membership in `U(J₀)` and projective normalisation.
//!
//! Matrices are stored row-major. They serialize as an array of rows, each
//! entry a `[re, im]` pair of doubles.

use std::fmt;
use std::ops::Mul;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type ComplexScalar = Complex64;

/// Largest supported matrix dimension `n + 1`.
pub const MAX_DIM: usize = 16;

/// Relative tolerance for treating two entry moduli as tied when choosing the
/// pivot of the projective normal form.
const PIVOT_TIE_TOL: f64 = 1e-9;

#[derive(Clone, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl SquareMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("matrix has non-finite entries".into()));
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::InvalidInput(format!(
                    "matrix is not square: row of length {} in a {dim}-row matrix",
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Self::new(dim, entries)
    }

    /// Real-valued rows, convenient for fixtures.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        let dim = diag.len();
        let mut m = Self::zeros(dim);
        for (i, &d) in diag.iter().enumerate() {
            m.entries[i * dim + i] = d;
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.entries.chunks(self.dim).map(<[_]>::to_vec).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(self * other)
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(v.len(), self.dim);
        self.entries
            .chunks(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn determinant(&self) -> Complex64 {
        self.to_nalgebra().determinant()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.entries)
    }
}

impl Mul for &SquareMatrix {
    type Output = SquareMatrix;

    fn mul(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * rhs.entries[k * n + j];
                }
            }
        }
        SquareMatrix { dim: n, entries: out }
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SquareMatrix({}x{}) [", self.dim, self.dim)?;
        for row in self.entries.chunks(self.dim) {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:>+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Serialize for SquareMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SquareMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Complex64>>::deserialize(deserializer)?;
        SquareMatrix::from_rows(rows).map_err(D::Error::custom)
    }
}

/// A point of `ℙ(ℂ^{n,1})`; equality is up to a nonzero complex scalar.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProjectivePoint {
    coords: Vec<Complex64>,
}

impl ProjectivePoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.iter().all(|z| z.norm_sqr() == 0.0) {
            return Err(Error::InvalidInput("projective point has all coordinates zero".into()));
        }
        if coords.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("projective point has non-finite coordinates".into()));
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coords.iter().map(Complex64::norm_sqr).sum()
    }

    /// `true` when the two points span the same complex line, i.e. the 2×2
    /// minors `aᵢbⱼ − aⱼbᵢ` vanish relative to `‖a‖‖b‖`.
    pub fn projectively_eq(&self, other: &Self, tol: f64) -> bool {
        if self.coords.len() != other.coords.len() {
            return false;
        }
        let scale = (self.norm_sqr() * other.norm_sqr()).sqrt();
        let a = &self.coords;
        let b = &other.coords;
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                if (a[i] * b[j] - a[j] * b[i]).norm() > tol * scale {
                    return false;
                }
            }
        }
        true
    }
}

/// A Hermitian form `z ↦ z* J z` together with its signature `(p, q)`.
#[derive(Clone, Debug)]
pub struct HermitianForm {
    matrix: SquareMatrix,
    signature: (usize, usize),
}

impl HermitianForm {
    /// The form `J₀` of signature `(n,1)` that exchanges the first and last
    /// coordinates and is the identity on the middle block.
    pub fn standard(n: usize) -> Self {
        let dim = n + 1;
        let mut m = SquareMatrix::zeros(dim);
        let one = Complex64::new(1.0, 0.0);
        m.set(0, dim - 1, one);
        m.set(dim - 1, 0, one);
        for i in 1..dim - 1 {
            m.set(i, i, one);
        }
        Self {
            matrix: m,
            signature: (n, 1),
        }
    }

    pub fn new(matrix: SquareMatrix) -> Result<Self> {
        if matrix.dim() < 2 {
            return Err(Error::InvalidInput("hermitian form needs dimension at least 2".into()));
        }
        let scale = matrix.frobenius_norm().max(1.0);
        if matrix.frobenius_distance(&matrix.adjoint()) > 1e-12 * scale {
            return Err(Error::InvalidInput("form matrix is not Hermitian".into()));
        }
        let eig = matrix.to_nalgebra().symmetric_eigenvalues();
        let cut = 1e-12 * scale;
        let p = eig.iter().filter(|&&x| x > cut).count();
        let q = eig.iter().filter(|&&x| x < -cut).count();
        if p + q != matrix.dim() {
            return Err(Error::InvalidInput("form is degenerate".into()));
        }
        Ok(Self {
            matrix,
            signature: (p, q),
        })
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.matrix
    }

    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `J M* J`, which equals `M⁻¹` exactly when `M ∈ U(J)` and `J² = I`.
    pub fn adjoint_inverse(&self, m: &SquareMatrix) -> SquareMatrix {
        &(&self.matrix * &m.adjoint()) * &self.matrix
    }
}

/// `Re(z* J z)`. The imaginary part must vanish up to `10⁻¹⁰·‖z‖²`.
pub fn form_value(form: &HermitianForm, z: &ProjectivePoint) -> Result<f64> {
    if z.coords().len() != form.dim() {
        return Err(Error::DimensionMismatch {
            expected: form.dim(),
            found: z.coords().len(),
        });
    }
    let jz = form.matrix().apply(z.coords());
    let value: Complex64 = z.coords().iter().zip(&jz).map(|(a, b)| a.conj() * b).sum();
    debug_assert!(
        value.im.abs() <= 1e-10 * z.norm_sqr() * form.matrix().frobenius_norm(),
        "hermitian form produced imaginary part {}",
        value.im
    );
    Ok(value.re)
}

/// `‖(J M* J) M − I‖_F`; zero exactly when `M ∈ U(J)`.
pub fn membership_residual(form: &HermitianForm, m: &SquareMatrix) -> Result<f64> {
    if m.dim() != form.dim() {
        return Err(Error::DimensionMismatch {
            expected: form.dim(),
            found: m.dim(),
        });
    }
    let product = &form.adjoint_inverse(m) * m;
    Ok(product.frobenius_distance(&SquareMatrix::identity(m.dim())))
}

/// Index of the normal-form pivot: the entry of largest modulus, ties (within
/// a relative `1e-9`) broken by lowest row-major index.
fn pivot_index(m: &SquareMatrix) -> Option<usize> {
    let max = m.max_abs_entry();
    if max == 0.0 {
        return None;
    }
    let cut = max * (1.0 - PIVOT_TIE_TOL);
    m.entries().iter().position(|z| z.norm() >= cut)
}

/// Canonical projective representative: `M` divided by its pivot entry, so
/// the pivot becomes exactly `1`.
pub fn projective_normalize(m: &SquareMatrix) -> Result<SquareMatrix> {
    let idx = pivot_index(m).ok_or_else(|| Error::InvalidInput("zero matrix has no projective class".into()))?;
    let pivot = m.entries()[idx];
    if pivot == Complex64::new(1.0, 0.0) {
        return Ok(m.clone());
    }
    let inv = pivot.inv();
    let mut out = m.scale(inv);
    out.entries[idx] = Complex64::new(1.0, 0.0);
    Ok(out)
}

fn check_dim(m: &SquareMatrix) -> Result<()> {
    if m.dim() > MAX_DIM {
        return Err(Error::DimensionTooLarge(m.dim()));
    }
    Ok(())
}

/// Eigenvalues with multiplicity, sorted by `(modulus, argument)`.
pub fn eigenvalues(m: &SquareMatrix) -> Result<Vec<Complex64>> {
    check_dim(m)?;
    let schur = nalgebra::Schur::try_new(m.to_nalgebra(), f64::EPSILON, 10_000).ok_or(Error::NoConvergence)?;
    let mut eig: Vec<Complex64> = schur
        .eigenvalues()
        .ok_or(Error::NoConvergence)?
        .iter()
        .copied()
        .collect();
    eig.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.arg().total_cmp(&b.arg())));
    Ok(eig)
}

/// Singular values in descending order.
pub fn singular_values(m: &SquareMatrix) -> Result<Vec<f64>> {
    check_dim(m)?;
    let mut sv: Vec<f64> = m.to_nalgebra().singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Validated element of `PU(n,1)` carried by a `U(J₀)` representative.
///
/// `matrix` is the representative products are formed with; `normal_form` is
/// the canonical projective representative used as a deduplication key.
#[derive(Clone, Debug)]
pub struct GroupElement {
    matrix: SquareMatrix,
    membership_residual: f64,
    normal_form: SquareMatrix,
    word: Option<Vec<usize>>,
}

impl GroupElement {
    /// Default residual budget for accepting a matrix as a group element.
    pub const DEFAULT_TOL: f64 = 1e-8;

    pub fn new(matrix: SquareMatrix, tol: f64) -> Result<Self> {
        let element = Self::unchecked(matrix)?;
        if element.membership_residual > tol || element.membership_residual.is_nan() {
            return Err(Error::NotAMember {
                name: None,
                residual: element.membership_residual,
                tol,
            });
        }
        Ok(element)
    }

    /// Computes the residual and normal form without enforcing membership.
    pub fn unchecked(matrix: SquareMatrix) -> Result<Self> {
        if matrix.dim() < 2 {
            return Err(Error::InvalidInput("group elements need dimension n + 1 ≥ 2".into()));
        }
        check_dim(&matrix)?;
        let form = HermitianForm::standard(matrix.dim() - 1);
        let membership_residual = membership_residual(&form, &matrix)?;
        let normal_form = projective_normalize(&matrix)?;
        Ok(Self {
            matrix,
            membership_residual,
            normal_form,
            word: None,
        })
    }

    pub fn identity(n: usize) -> Self {
        let m = SquareMatrix::identity(n + 1);
        Self {
            normal_form: m.clone(),
            matrix: m,
            membership_residual: 0.0,
            word: Some(Vec::new()),
        }
    }

    pub fn with_word(mut self, word: Vec<usize>) -> Self {
        self.word = Some(word);
        self
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.matrix
    }

    pub fn normal_form(&self) -> &SquareMatrix {
        &self.normal_form
    }

    pub fn membership_residual(&self) -> f64 {
        self.membership_residual
    }

    pub fn word(&self) -> Option<&[usize]> {
        self.word.as_deref()
    }

    /// Complex dimension `n` of the ball.
    pub fn n(&self) -> usize {
        self.matrix.dim() - 1
    }

    /// The representative scaled to `|det| = 1`. For a member of `U(J₀)` this
    /// is the matrix itself up to rounding; entries such as `c` are read here.
    pub fn unit_representative(&self) -> SquareMatrix {
        let det = self.matrix.determinant().norm();
        let s = det.powf(-1.0 / self.matrix.dim() as f64);
        self.matrix.scale(Complex64::new(s, 0.0))
    }

    /// Inverse via `J₀ M* J₀`, rescaled so projective representatives of any
    /// modulus are inverted exactly. The word is not carried over.
    pub fn inverse(&self) -> Self {
        let form = HermitianForm::standard(self.n());
        let det = self.matrix.determinant().norm();
        let s = det.powf(-2.0 / self.matrix.dim() as f64);
        let inv = form.adjoint_inverse(&self.matrix).scale(Complex64::new(s, 0.0));
        Self::unchecked(inv).expect("inverse of a valid element")
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self::unchecked(&self.matrix * &other.matrix).expect("product of valid elements")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag(values: &[f64]) -> SquareMatrix {
        SquareMatrix::diagonal(&values.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>())
    }

    #[test]
    fn form_value_examples() {
        let j = HermitianForm::standard(2);
        let z = ProjectivePoint::new(vec![c(-0.5, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(form_value(&j, &z).unwrap(), -1.0, epsilon = 1e-15);
        let q0 = ProjectivePoint::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(form_value(&j, &q0).unwrap(), 0.0);
        let qinf = ProjectivePoint::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(form_value(&j, &qinf).unwrap(), 0.0);
    }

    #[test]
    fn zero_vector_rejected() {
        assert!(ProjectivePoint::new(vec![c(0.0, 0.0); 3]).is_err());
    }

    #[test]
    fn standard_form_signature() {
        for n in 1..6 {
            let j = HermitianForm::standard(n);
            let recomputed = HermitianForm::new(j.matrix().clone()).unwrap();
            assert_eq!(recomputed.signature(), (n, 1));
        }
    }

    #[test]
    fn membership_residual_examples() {
        let j = HermitianForm::standard(2);
        assert_eq!(membership_residual(&j, &SquareMatrix::identity(3)).unwrap(), 0.0);
        assert_abs_diff_eq!(membership_residual(&j, &diag(&[2.0, 1.0, 0.5])).unwrap(), 0.0, epsilon = 1e-15);
        // J M* J = diag(1,1,2) so the product is diag(2,1,2): residual √2.
        let r = membership_residual(&j, &diag(&[2.0, 1.0, 1.0])).unwrap();
        assert_abs_diff_eq!(r, 2f64.sqrt(), epsilon = 1e-15);
        assert!(matches!(
            membership_residual(&j, &SquareMatrix::identity(4)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn normalize_examples() {
        let i3 = SquareMatrix::identity(3);
        assert_eq!(projective_normalize(&i3.scale(c(0.0, 1.0))).unwrap(), i3);
        let m = SquareMatrix::diagonal(&[c(0.0, 2.0), c(0.0, 1.0), c(0.0, 0.5)]);
        let nf = projective_normalize(&m).unwrap();
        assert!(nf.frobenius_distance(&diag(&[1.0, 0.5, 0.25])) < 1e-15);
        assert!(projective_normalize(&SquareMatrix::zeros(3)).is_err());
    }

    #[test]
    fn normalize_ties_pick_lowest_index() {
        // diag(1, i, 1): all entries tie, pivot is (0,0).
        let m = SquareMatrix::diagonal(&[c(1.0, 0.0), c(0.0, 1.0), c(1.0, 0.0)]);
        assert_eq!(projective_normalize(&m).unwrap(), m);
        let rotated = m.scale(c(0.6, 0.8));
        assert!(projective_normalize(&rotated).unwrap().frobenius_distance(&m) < 1e-15);
    }

    #[test]
    fn eigenvalue_examples() {
        let e = eigenvalues(&SquareMatrix::identity(3)).unwrap();
        assert!(e.iter().all(|z| (z - c(1.0, 0.0)).norm() < 1e-14));
        let e = eigenvalues(&diag(&[2.0, 1.0, 0.5])).unwrap();
        for (z, want) in e.iter().zip([0.5, 1.0, 2.0]) {
            assert_abs_diff_eq!(z.re, want, epsilon = 1e-14);
            assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-14);
        }
        let g = SquareMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        let e = eigenvalues(&g).unwrap();
        assert_eq!(e.len(), 3);
        assert!(e.iter().all(|z| (z - c(1.0, 0.0)).norm() < 1e-12));
    }

    #[test]
    fn eigenvalue_dimension_cap() {
        assert!(matches!(
            eigenvalues(&SquareMatrix::identity(17)),
            Err(Error::DimensionTooLarge(17))
        ));
    }

    #[test]
    fn inverse_handles_scaled_representatives() {
        let m = diag(&[2.0, 1.0, 0.5]).scale(c(0.0, 3.0));
        let g = GroupElement::unchecked(m).unwrap();
        let prod = &g.matrix().clone() * g.inverse().matrix();
        assert!(prod.frobenius_distance(&SquareMatrix::identity(3)) < 1e-14);
    }

    #[test]
    fn matrix_json_encoding() {
        let m = SquareMatrix::diagonal(&[c(2.0, 0.5), c(1.0, 0.0)]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[[[2.0,0.5],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]");
        let back: SquareMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<SquareMatrix>("[[[1,0],[0,0]]]").is_err());
    }

    #[test]
    fn non_member_rejected() {
        let err = GroupElement::new(diag(&[2.0, 1.0, 1.0]), 1e-8).unwrap_err();
        assert!(matches!(err, Error::NotAMember { .. }));
    }
}
