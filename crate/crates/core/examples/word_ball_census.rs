//! Enumerates word balls of the shipped synthetic lattice and prints the
//! census. Every estimate here is one-sided.
//!
//! `cargo run --release --example word_ball_census -- 6`

use cusp_certify::fixtures::SYNTHETIC_2;
use cusp_certify::lattice::{self, load_lattice, word_ball, BallOptions};

fn main() {
    let max: usize = std::env::args().nth(1).map_or(4, |s| s.parse().expect("length"));
    let spec = load_lattice(SYNTHETIC_2).unwrap();
    let opts = BallOptions::for_spec(&spec);
    println!("{:>2} {:>6} {:>5} {:>5} {:>5} {:>12} {:>8} {:>6} {:>6}", "L", "size", "ell", "par", "hyp", "sys", "lambda", "tMin", "cMin");
    for length in 1..=max {
        let ball = word_ball(&spec, length, &opts).unwrap();
        let c = lattice::census(&ball, &spec);
        let show = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.4}"));
        println!(
            "{length:>2} {:>6} {:>5} {:>5} {:>5} {:>12} {:>8} {:>6} {:>6}",
            c.element_count,
            c.counts.elliptic,
            c.counts.parabolic,
            c.counts.hyperbolic,
            show(c.sys_upper_estimate),
            show(c.lambda_estimate),
            show(c.cusp_stats.as_ref().and_then(|s| s.t_min_vertical)),
            show(c.cusp_stats.as_ref().and_then(|s| s.c_min_non_stabilizer)),
        );
    }
    for flag in lattice::one_sidedness_flags() {
        println!("note: {flag}");
    }
}
