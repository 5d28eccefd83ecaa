use migrate_sched::num::rat;
use migrate_sched::{run_alg_opt, solve_alpha, Instance, RunOptions};

fn main() -> migrate_sched::Result<()> {
    let p = solve_alpha(3)?;
    println!("alpha_3 = {}, mu_3 = {}", p.alpha, p.mu);
    let inst = Instance::new(3, vec![rat(5, 1), rat(3, 2), rat(7, 1)])?;
    let out = run_alg_opt(&inst, &RunOptions::checked())?;
    assert!(out.report.ok());
    println!("{} migrations, makespan {}", out.report.migrations, out.report.makespan);
    Ok(())
}
