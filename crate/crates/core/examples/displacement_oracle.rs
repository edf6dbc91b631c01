//! Compares the eigenvalue formula for translation length with a numerical
//! minimisation of the displacement `d(z, Mz)`.

use cusp_certify::fixtures::hyperbolic_fixture;
use cusp_certify::isometry::translation_length;
use cusp_certify::siegel::{min_displacement_oracle, OracleBudget};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let budget = OracleBudget::default();
    println!("{:>4} {:>6} {:>12} {:>12} {:>9}", "r", "conj", "formula", "oracle", "diff");
    for r in [1.2, 2.0, 5.0] {
        for conjugate in [false, true] {
            let m = hyperbolic_fixture(&mut rng, 2, r, conjugate);
            let formula = translation_length(&m).unwrap();
            let oracle = min_displacement_oracle(&m, &budget);
            println!("{r:>4} {conjugate:>6} {formula:>12.8} {:>12.8} {:>9.1e}", oracle.value, (formula - oracle.value).abs());
        }
    }
}
