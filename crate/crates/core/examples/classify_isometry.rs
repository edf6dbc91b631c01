//! Classifies a dilation, a rotation and a Heisenberg translation, before and
//! after conjugating by a random group element.

use cusp_certify::fixtures::{dilation, random_member, random_unitary, rotation};
use cusp_certify::isometry::{self, heisenberg_to_matrix, HeisenbergElement};
use cusp_certify::{Cusp, GroupElement};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn report(label: &str, g: &GroupElement) {
    match isometry::classify(g, isometry::DEFAULT_TOL) {
        Ok(c) => {
            let length = isometry::translation_length(g).map(|l| format!(" length {l:.9}")).unwrap_or_default();
            println!("{label:<28} {:<10} margin {:.2e}{length}", c.kind, c.margin);
        }
        Err(e) => println!("{label:<28} {e}"),
    }
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = 3;
    let g = random_member(&mut rng, n, 3);
    let conj = |m: &GroupElement| g.compose(m).compose(&g.inverse());

    let elements = [
        ("dilation diag(2, I, 1/2)", dilation(n, Complex64::new(2.0, 0.0))),
        ("rotation diag(1, A, 1)", rotation(&random_unitary(&mut rng, n - 1))),
        ("Heisenberg (τ, 1)", heisenberg_to_matrix(&HeisenbergElement::new(vec![Complex64::new(0.5, 0.5); n - 1], 1.0, Cusp::Infinity))),
        ("loxodromic diag(2i, I, i/2)", dilation(n, Complex64::new(0.0, 2.0))),
    ];
    for (label, m) in &elements {
        report(label, m);
        report("  conjugated", &conj(m));
    }
}
