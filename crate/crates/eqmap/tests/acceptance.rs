use std::process::ExitCode;

use eqmap::verify::{Suite, VerifyOptions};

fn main() -> ExitCode {
    let suite = Suite::new(VerifyOptions::default());
    let results = suite.run_all();
    println!("\nacceptance criteria");
    for r in &results {
        println!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("\nacceptance: {} passed, {failed} failed\n", results.len() - failed);
    if failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
