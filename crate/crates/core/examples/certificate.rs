//! Runs the command-line front end in-process and checks the digest of the
//! certificate it emits.

use cusp_certify::cli::{self, results_digest, Certificate};

fn main() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(["cusp-certify", "bounds", "--n", "2", "--sys", "2000", "--m", "2", "--format", "json"], &mut out, &mut err);
    assert_eq!(code, cli::EXIT_OK, "{}", String::from_utf8_lossy(&err));

    let cert: Certificate = serde_json::from_slice(&out).unwrap();
    println!("tool       {}", cert.tool_version);
    println!("command    {}", cert.command);
    println!("inputs     {}", cert.inputs_digest);
    println!("results    {}", cert.results_digest);
    println!("recomputed {}", results_digest(&cert.results));
    println!("volumeLowerBound   {}", cert.results["volumeLowerBound"]);
    println!("volumeLowerBoundLn {}", cert.results["volumeLowerBoundLn"]);
    for flag in &cert.one_sidedness_flags {
        println!("flag: {flag}");
    }
}
