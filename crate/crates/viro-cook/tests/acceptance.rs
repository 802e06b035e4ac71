//! Runs every acceptance criterion and prints one line per criterion.

use std::process::ExitCode;

fn main() -> ExitCode {
    let results = viro_cook::verify::run_suite("all").expect("known suite");
    for r in &results {
        println!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
