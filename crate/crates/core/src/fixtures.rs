//! Shipped lattice documents and seeded generators of random group elements
//! used by the oracle suites, tests and examples.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::hermitian::{GroupElement, SquareMatrix};
use crate::isometry::{heisenberg_to_matrix, swap_form, HeisenbergElement};
use crate::siegel::{Cusp, SiegelPoint};

/// `n = 2`: vertical translation `t`, swap `s` (`c = 1`, rotation `i`) and
/// the dilation `d = diag(2, 1, 1/2)`.
pub const SYNTHETIC_2: &str = include_str!("../fixtures/synthetic-2.json");
/// `n = 2`: the Heisenberg translations `(1, 0)`, `(i, 0)` and `(0, 2)`.
pub const HEISENBERG_2: &str = include_str!("../fixtures/heisenberg-2.json");
/// `n = 3` analogue of [`SYNTHETIC_2`] with dilation `diag(3, 1, 1, 1/3)`.
pub const SYNTHETIC_3: &str = include_str!("../fixtures/synthetic-3.json");

pub fn complex<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-radius..radius), rng.gen_range(-radius..radius))
}

pub fn phase<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(-PI..PI))
}

/// Random `k×k` unitary as a product of complex Givens rotations and phases.
pub fn random_unitary<R: Rng>(rng: &mut R, k: usize) -> SquareMatrix {
    let phases: Vec<Complex64> = (0..k).map(|_| phase(rng)).collect();
    let mut u = SquareMatrix::diagonal(&phases);
    for i in 0..k {
        for j in i + 1..k {
            let (s, c) = rng.gen_range(-PI..PI).sin_cos();
            let e = phase(rng);
            let mut g = SquareMatrix::identity(k);
            g.set(i, i, Complex64::new(c, 0.0));
            g.set(i, j, -e * s);
            g.set(j, i, e.conj() * s);
            g.set(j, j, Complex64::new(c, 0.0));
            u = &u * &g;
        }
    }
    u
}

pub fn random_heisenberg<R: Rng>(rng: &mut R, n: usize, cusp: Cusp) -> HeisenbergElement {
    HeisenbergElement::new((0..n - 1).map(|_| complex(rng, 1.0)).collect(), rng.gen_range(-2.0..2.0), cusp)
}

/// `diag(a, I, 1/ā)`.
pub fn dilation(n: usize, a: Complex64) -> GroupElement {
    let mut diag = vec![Complex64::new(1.0, 0.0); n + 1];
    diag[0] = a;
    diag[n] = a.conj().inv();
    GroupElement::unchecked(SquareMatrix::diagonal(&diag)).expect("nonzero dilation")
}

/// `diag(1, A, 1)` for a unitary block `A`.
pub fn rotation(a: &SquareMatrix) -> GroupElement {
    let k = a.dim();
    let mut m = SquareMatrix::identity(k + 2);
    for i in 0..k {
        for j in 0..k {
            m.set(i + 1, j + 1, a.get(i, j));
        }
    }
    GroupElement::unchecked(m).expect("nonzero rotation")
}

pub fn random_swap<R: Rng>(rng: &mut R, n: usize) -> GroupElement {
    let c = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(-PI..PI));
    swap_form(c, &random_unitary(rng, n - 1)).expect("valid swap")
}

pub fn random_dilation<R: Rng>(rng: &mut R, n: usize) -> GroupElement {
    dilation(n, Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(-PI..PI)))
}

/// One random building block: a Heisenberg translation at either cusp, a
/// rotation, a swap or a dilation.
pub fn random_factor<R: Rng>(rng: &mut R, n: usize) -> GroupElement {
    match rng.gen_range(0..5) {
        0 => heisenberg_to_matrix(&random_heisenberg(rng, n, Cusp::Infinity)),
        1 => heisenberg_to_matrix(&random_heisenberg(rng, n, Cusp::Zero)),
        2 => rotation(&random_unitary(rng, n - 1)),
        3 => random_swap(rng, n),
        _ => random_dilation(rng, n),
    }
}

/// Product of `factors` random building blocks.
pub fn random_member<R: Rng>(rng: &mut R, n: usize, factors: usize) -> GroupElement {
    (0..factors).fold(GroupElement::identity(n), |acc, _| acc.compose(&random_factor(rng, n)))
}

/// `diag(r, I, 1/r)`, optionally conjugated by a random two-factor member.
pub fn hyperbolic_fixture<R: Rng>(rng: &mut R, n: usize, r: f64, conjugate: bool) -> GroupElement {
    let h = dilation(n, Complex64::new(r, 0.0));
    if !conjugate {
        return h;
    }
    let g = random_member(rng, n, 2);
    g.compose(&h).compose(&g.inverse())
}

/// Random point of the Siegel domain with `|ζ|, |v| ≲ 2` and `u ∈ [e^{-2}, e^2]`.
pub fn random_point<R: Rng>(rng: &mut R, n: usize) -> SiegelPoint {
    SiegelPoint::new(
        (0..n - 1).map(|_| complex(rng, 2.0)).collect(),
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0f64..2.0).exp(),
    )
}
