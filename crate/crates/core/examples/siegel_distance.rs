//! Bergman distances in Siegel coordinates and their invariance under the
//! group action.

use cusp_certify::fixtures::{random_member, random_point};
use cusp_certify::siegel::{act, distance, distance_lower_bound};
use cusp_certify::SiegelPoint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let p = SiegelPoint::on_axis(2, 0.0, 1.0);
    let q = SiegelPoint::on_axis(2, 0.0, 4.0);
    let d = distance(&p, &q).unwrap();
    println!("d((0,0,1), (0,0,4)) = {d:.15}");
    println!("2·acosh(25/16)      = {:.15}", 2.0 * (25.0f64 / 16.0).acosh());

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    println!("\n{:>10} {:>10} {:>12} {:>10}", "d(p,q)", "lower", "d(gp,gq)", "drift");
    for _ in 0..6 {
        let p = random_point(&mut rng, 3);
        let q = random_point(&mut rng, 3);
        let g = random_member(&mut rng, 3, 3);
        let d = distance(&p, &q).unwrap();
        let gd = distance(&act(&g, &p).unwrap(), &act(&g, &q).unwrap()).unwrap();
        let lb = distance_lower_bound(p.u, q.u).unwrap();
        println!("{d:>10.6} {lb:>10.6} {gd:>12.6} {:>10.1e}", (d - gd).abs());
    }
}
