//! The Heisenberg group law at the cusp at infinity and its matrix model.

use cusp_certify::isometry::{heisenberg_compose, heisenberg_to_matrix, vertical_translation_length, HeisenbergElement};
use cusp_certify::Cusp;
use num_complex::Complex64;

fn main() {
    let a = HeisenbergElement::new(vec![Complex64::new(1.0, 0.0)], 0.0, Cusp::Infinity);
    let b = HeisenbergElement::new(vec![Complex64::new(0.0, 1.0)], 0.0, Cusp::Infinity);
    let ab = heisenberg_compose(&a, &b).unwrap();
    let ba = heisenberg_compose(&b, &a).unwrap();
    println!("(1,0)·(i,0) = ({}, {})", ab.tau[0], ab.t);
    println!("(i,0)·(1,0) = ({}, {})", ba.tau[0], ba.t);

    let product = heisenberg_to_matrix(&a).compose(&heisenberg_to_matrix(&b));
    let law = heisenberg_to_matrix(&ab);
    println!("matrix product vs law: {:.1e}", product.matrix().frobenius_distance(law.matrix()));

    let commutator = heisenberg_to_matrix(&a)
        .compose(&heisenberg_to_matrix(&b))
        .compose(&heisenberg_to_matrix(&a).inverse())
        .compose(&heisenberg_to_matrix(&b).inverse());
    println!("[a, b] is vertical with t = {:?}", vertical_translation_length(&commutator, 1e-12));
}
