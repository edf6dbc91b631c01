//! Horoballs at 0 and infinity are disjoint exactly when `u₀·u_∞ ≥ 4`; the
//! sampler searches for a common point.

use cusp_certify::siegel::{horoball_intersection_sampler, horoballs_disjoint, OracleBudget};

fn main() {
    let budget = OracleBudget::with_starts(8);
    println!("{:>5} {:>5} {:>9} {:>10} {:>10}", "u0", "uinf", "disjoint", "sup", "4/uinf");
    for (u0, u_inf) in [(1.0, 2.0), (1.0, 5.0), (2.0, 1.5), (2.0, 2.5), (0.5, 10.0)] {
        let disjoint = horoballs_disjoint(u0, u_inf).unwrap();
        let sample = horoball_intersection_sampler(2, u0, u_inf, &budget).unwrap();
        println!("{u0:>5} {u_inf:>5} {disjoint:>9} {:>10.6} {:>10.6}", sample.sup_estimate, 4.0 / u_inf);
        if let Some(w) = sample.witness {
            println!("      common point: v = {:.4}, u = {:.4}", w.v, w.u);
        }
    }
}
