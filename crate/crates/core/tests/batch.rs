use migrate_sched::alpha::solve_alpha;
use migrate_sched::batch::{exit_code, run_batch, AlgSpec};
use migrate_sched::generate::{generate, GenKind, GenSpec};
use migrate_sched::num::rat;
use migrate_sched::RunOptions;

#[test]
fn three_algorithms_on_a_hundred_seeds() {
    let algs = [AlgSpec::Opt, AlgSpec::Budget(rat(5, 3)), AlgSpec::List];
    let instances: Vec<_> = (0..100)
        .map(|s| {
            let spec = GenSpec::new(GenKind::Uniform, 10, 3, s);
            (spec.label(), generate(&spec).unwrap())
        })
        .collect();
    let rows = run_batch(&algs, &instances, &RunOptions::checked()).unwrap();
    assert_eq!(rows.len(), 300);
    assert_eq!(exit_code(&rows), 0);

    let p = solve_alpha(3).unwrap();
    let ratio_caps = [p.alpha.clone(), rat(5, 3), rat(5, 3)];
    let migration_caps = [p.mu * 3, 12, 0];
    for (k, (_, r)) in rows.iter().enumerate() {
        assert!(r.violations.is_empty());
        assert!(r.ratio_vs_opt.as_ref().unwrap() <= &ratio_caps[k % 3]);
        assert!(r.migrations <= migration_caps[k % 3]);
        assert_eq!(r.ratio_vs_l, &r.makespan / &r.lower_bound);
    }
}
