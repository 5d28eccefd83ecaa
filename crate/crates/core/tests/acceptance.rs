use std::process::ExitCode;

use migrate_sched::acceptance::run_all;

fn main() -> ExitCode {
    let verdicts = run_all();
    for v in &verdicts {
        println!("{v}");
    }
    let failed: Vec<u8> = verdicts.iter().filter(|v| !v.passed).map(|v| v.id).collect();
    println!("acceptance: {} of {} criteria passed", verdicts.len() - failed.len(), verdicts.len());
    if failed.is_empty() && verdicts.len() == 9 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
