//! Evaluates the positivity bounds for a given dimension and certified
//! systole lower bound.
//!
//! `cargo run --example effective_bounds -- 2 300`

use cusp_certify::bounds::{self, bound_report, BoundInputs};

fn main() {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(2, |s| s.parse().expect("n"));
    let sys: f64 = args.next().map_or(300.0, |s| s.parse().expect("sys"));

    println!("thresholds for n = {n}");
    println!("  ample       {:.6}", bounds::threshold_ample(n));
    println!("  canonical   {:.6}", bounds::threshold_canonical(n));
    println!("  very ample  {:.6}", bounds::very_ampleness_threshold(n, 1).unwrap());
    println!("  sys(D)      {:.6}", bounds::boundary_systole_threshold(n));
    println!();

    let inputs = BoundInputs {
        sys_d: Some(3.0),
        field_degree: Some(2),
        epsilon: Some(0.1),
        ..BoundInputs::new(n, sys)
    };
    print!("{}", bound_report(&inputs).unwrap().to_text());
}
