//! Runs the oracle suites with reduced sizes and prints their tables.

use cusp_certify::verify::{self, Suite, SuiteConfig};

fn main() {
    let config = SuiteConfig {
        metric_pairs: 500,
        heisenberg_pairs: 100,
        horoball_grid: 5,
        ..SuiteConfig::default()
    };
    for suite in Suite::ALL {
        print!("{}", verify::run(suite, &config));
    }
}
