mod common;

use cusp_certify::bounds::{self, *};
use cusp_certify::fixtures::{self, hyperbolic_fixture, random_heisenberg, random_member, random_point, rotation};
use cusp_certify::hermitian::{eigenvalues, form_value, projective_normalize};
use cusp_certify::isometry::{self, heisenberg_compose, heisenberg_to_matrix, IsometryKind};
use cusp_certify::lattice::{load_lattice, word_ball, BallOptions};
use cusp_certify::siegel::{act, distance, distance_lower_bound, embed, unembed};
use cusp_certify::{Cusp, GroupElement, HermitianForm, ProjectivePoint};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn relative_residual(g: &GroupElement) -> f64 {
    g.membership_residual() / g.matrix().frobenius_norm().powi(2)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn products_and_inverses_stay_in_the_group(seed: u64, n in 2usize..5) {
        let mut r = rng(seed);
        let a = random_member(&mut r, n, 3);
        let b = random_member(&mut r, n, 3);
        prop_assert!(relative_residual(&a.compose(&b)) < 1e-8);
        prop_assert!(relative_residual(&a.inverse()) < 1e-8);
        let id = a.compose(&a.inverse());
        prop_assert!((isometry::abs_trace(&id) - (n + 1) as f64).abs() < 1e-8);
    }

    #[test]
    fn form_is_preserved(seed: u64, n in 2usize..5) {
        let mut r = rng(seed);
        let g = random_member(&mut r, n, 3);
        let form = HermitianForm::standard(n);
        let z: Vec<Complex64> = (0..=n).map(|_| fixtures::complex(&mut r, 1.0)).collect();
        let z = ProjectivePoint::new(z).unwrap();
        let gz = ProjectivePoint::new(g.matrix().apply(z.coords())).unwrap();
        let before = form_value(&form, &z).unwrap();
        let after = form_value(&form, &gz).unwrap();
        let scale = g.matrix().frobenius_norm().powi(2) * z.norm_sqr();
        prop_assert!((before - after).abs() <= 1e-12 * scale, "{before} vs {after}");
    }

    #[test]
    fn embedded_points_have_form_value_minus_u(seed: u64, n in 2usize..5) {
        let mut r = rng(seed);
        let p = random_point(&mut r, n);
        let value = form_value(&HermitianForm::standard(n), &embed(&p)).unwrap();
        prop_assert!((value + p.u).abs() <= 1e-12 * embed(&p).norm_sqr());
        let back = unembed(&embed(&p)).unwrap();
        prop_assert!((back.u - p.u).abs() <= 1e-12 * p.u.max(1.0));
        prop_assert!((back.v - p.v).abs() <= 1e-12);
    }

    #[test]
    fn distance_is_invariant_and_bounded_below(seed: u64, n in 2usize..5) {
        let mut r = rng(seed);
        let g = random_member(&mut r, n, 2);
        let p = random_point(&mut r, n);
        let q = random_point(&mut r, n);
        let d = distance(&p, &q).unwrap();
        let gd = distance(&act(&g, &p).unwrap(), &act(&g, &q).unwrap()).unwrap();
        prop_assert!((d - gd).abs() <= 1e-6 * d.max(1.0), "{d} vs {gd}");
        prop_assert!(d >= distance_lower_bound(p.u, q.u).unwrap() - 1e-9);
        prop_assert!(distance(&p, &p).unwrap() < 1e-6);
    }

    #[test]
    fn normalization_is_idempotent(seed: u64, n in 2usize..5) {
        let mut r = rng(seed);
        let g = random_member(&mut r, n, 3);
        let scaled = g.matrix().scale(fixtures::complex(&mut r, 3.0) + Complex64::new(0.0, 0.1));
        let once = projective_normalize(&scaled).unwrap();
        let twice = projective_normalize(&once).unwrap();
        prop_assert_eq!(once.entries(), twice.entries());
    }

    #[test]
    fn spectrum_is_conjugation_invariant(seed: u64, n in 2usize..4, r0 in 1.2f64..4.0) {
        let mut r = rng(seed);
        let a = fixtures::random_unitary(&mut r, n - 1);
        let m = hyperbolic_fixture(&mut r, n, r0, false).compose(&rotation(&a));
        let g = random_member(&mut r, n, 1);
        let c = g.compose(&m).compose(&g.inverse());
        let moduli = |x: &GroupElement| -> Vec<f64> {
            eigenvalues(&x.unit_representative()).unwrap().iter().map(|z| z.norm()).collect()
        };
        for (x, y) in moduli(&m).iter().zip(moduli(&c)) {
            prop_assert!((x - y).abs() < 1e-8, "{x} vs {y}");
        }
        prop_assert!(rel(isometry::abs_trace(&m), isometry::abs_trace(&c)) < 1e-8);
    }

    #[test]
    fn classification_is_conjugation_and_scale_invariant(seed: u64, n in 2usize..4, r0 in 1.2f64..4.0) {
        let mut r = rng(seed);
        let g = random_member(&mut r, n, 1);
        let h = hyperbolic_fixture(&mut r, n, r0, false);
        let conj = g.compose(&h).compose(&g.inverse());
        let a = isometry::classify(&h, isometry::DEFAULT_TOL).unwrap();
        let b = isometry::classify(&conj, isometry::DEFAULT_TOL).unwrap();
        prop_assert_eq!(b.kind, IsometryKind::Hyperbolic);
        prop_assert!(rel(a.r, b.r) < 1e-8);
        prop_assert!(rel(a.r, r0) < 1e-12);

        let scale = Complex64::from_polar(r.gen_range(0.1..10.0), r.gen_range(-3.0..3.0));
        let scaled = GroupElement::unchecked(conj.matrix().scale(scale)).unwrap();
        let c = isometry::classify(&scaled, isometry::DEFAULT_TOL).unwrap();
        prop_assert_eq!(c.kind, IsometryKind::Hyperbolic);
        prop_assert!(rel(c.r, b.r) < 1e-8);

        let v = heisenberg_to_matrix(&cusp_certify::isometry::HeisenbergElement::vertical(n, r.gen_range(0.5..4.0), Cusp::Infinity));
        let pv = g.compose(&v).compose(&g.inverse());
        prop_assert_eq!(isometry::classify(&pv, isometry::DEFAULT_TOL).unwrap().kind, IsometryKind::Parabolic);
        let e = rotation(&fixtures::random_unitary(&mut r, n - 1));
        let pe = g.compose(&e).compose(&g.inverse());
        prop_assert_eq!(isometry::classify(&pe, isometry::DEFAULT_TOL).unwrap().kind, IsometryKind::Elliptic);
    }

    #[test]
    fn heisenberg_law_is_associative_and_matches_matrices(seed: u64, n in 2usize..5, zero: bool) {
        let mut r = rng(seed);
        let cusp = if zero { Cusp::Zero } else { Cusp::Infinity };
        let [a, b, c] = [0, 1, 2].map(|_| random_heisenberg(&mut r, n, cusp));
        let left = heisenberg_compose(&heisenberg_compose(&a, &b).unwrap(), &c).unwrap();
        let right = heisenberg_compose(&a, &heisenberg_compose(&b, &c).unwrap()).unwrap();
        prop_assert!((left.t - right.t).abs() < 1e-12);
        for (x, y) in left.tau.iter().zip(&right.tau) {
            prop_assert!((x - y).norm() < 1e-12);
        }
        let product = heisenberg_to_matrix(&a).compose(&heisenberg_to_matrix(&b));
        let law = heisenberg_to_matrix(&heisenberg_compose(&a, &b).unwrap());
        prop_assert!(product.matrix().frobenius_distance(law.matrix()) < 1e-12);
    }

    #[test]
    fn height_product_is_bounded_for_non_stabilizers(seed: u64, n in 2usize..4) {
        let mut r = rng(seed);
        let m = random_member(&mut r, n, 3);
        prop_assume!(!isometry::fixes_infinity(&m, 1e-9));
        let bound = isometry::u_product_bound(&m).unwrap();
        for _ in 0..8 {
            let p = random_point(&mut r, n);
            let q = act(&m, &p).unwrap();
            prop_assert!(p.u * q.u <= bound * (1.0 + 1e-9), "{} > {bound}", p.u * q.u);
        }
    }

    #[test]
    fn linear_and_log_forms_agree(n in 1usize..12, sys in 1.0f64..600.0, m in 1usize..4) {
        let agree = |lin: f64, ln: f64| {
            if lin <= 0.0 {
                ln == f64::NEG_INFINITY
            } else {
                lin.is_infinite() || (lin.ln() - ln).abs() <= 1e-10 * ln.abs().max(1.0)
            }
        };
        prop_assert!(agree(volume_lower_bound(m, sys), volume_lower_bound_ln(m, sys)));
        prop_assert!(agree(log_degree_lower_bound(m, n, sys), log_degree_lower_bound_ln(m, n, sys)));
        prop_assert!(agree(trace_lower_bound(n, sys), trace_lower_bound_ln(n, sys)));
        prop_assert!(agree(degree_lower_bound(m, n, sys), degree_lower_bound_ln(m, n, sys)));
        prop_assert!(agree(canonical_volume_lower_bound(m, sys), canonical_volume_lower_bound_ln(m, sys)));
        prop_assert!(agree(seshadri_thick_bound(n, sys), seshadri_thick_bound_ln(n, sys)));
        prop_assert!(agree(sparsity_exponent(n, sys, 2, 0.1), sparsity_exponent_ln(n, sys, 2, 0.1)));
        if sys >= threshold_ample(n) {
            let d = depth_lower_bound(n, sys).unwrap();
            prop_assert!(agree(d, depth_lower_bound_ln(n, sys).unwrap()));
        }
    }

    #[test]
    fn bounds_are_monotone_in_sys(n in 1usize..12, sys in 1.0f64..500.0, step in 0.01f64..5.0) {
        let hi = sys + step;
        prop_assert!(volume_lower_bound_ln(2, hi) >= volume_lower_bound_ln(2, sys));
        prop_assert!(trace_lower_bound_ln(n, hi) >= trace_lower_bound_ln(n, sys));
        prop_assert!(log_degree_lower_bound_ln(2, n, hi) >= log_degree_lower_bound_ln(2, n, sys));
        prop_assert!(degree_lower_bound_ln(2, n, hi) >= degree_lower_bound_ln(2, n, sys));
        prop_assert!(canonical_volume_lower_bound_ln(2, hi) >= canonical_volume_lower_bound_ln(2, sys));
        prop_assert!(seshadri_thick_bound_ln(n, hi) >= seshadri_thick_bound_ln(n, sys));
        prop_assert!(sparsity_exponent_ln(n, hi, 2, 0.1) <= sparsity_exponent_ln(n, sys, 2, 0.1));
        if sys >= threshold_ample(n) {
            prop_assert!(depth_lower_bound(n, hi).unwrap() >= depth_lower_bound(n, sys).unwrap());
        }
    }
}

#[test]
fn boundary_threshold_gives_seshadri_two_n() {
    for n in 1..=20 {
        let value = boundary_seshadri_bound(boundary_systole_threshold(n));
        assert!((value - 2.0 * n as f64).abs() <= 4.0 * f64::EPSILON * n as f64, "n={n}: {value}");
    }
}

#[test]
fn word_balls_are_nested_and_closed() {
    let spec = load_lattice(fixtures::SYNTHETIC_2).unwrap();
    let opts = BallOptions::for_spec(&spec);
    let balls: Vec<_> = (1..=4).map(|l| word_ball(&spec, l, &opts).unwrap()).collect();
    for pair in balls.windows(2) {
        for g in pair[0].elements() {
            assert!(pair[1].position(g.matrix()).is_some());
        }
    }
    let mut r = rng(11);
    for g in balls[3].elements() {
        assert!(relative_residual(g) < 1e-8);
        if isometry::fixes_infinity(g, 1e-9) {
            continue;
        }
        let bound = isometry::u_product_bound(g).unwrap();
        for _ in 0..4 {
            let p = random_point(&mut r, 2);
            let q = act(g, &p).unwrap();
            assert!(p.u * q.u <= bound * (1.0 + 1e-9));
        }
    }
}

#[test]
fn canonical_threshold_exceeds_ample_threshold() {
    for n in 1..=bounds::FACTORIAL_CAP {
        assert!(threshold_canonical(n) > threshold_ample(n));
    }
}
