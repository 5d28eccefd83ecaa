use migrate_sched::baselines::opt_makespan;
use migrate_sched::bounds::{BoundTrackerC, BoundTrackerOpt};
use migrate_sched::model::{read_trace, small_load, write_trace};
use migrate_sched::num::{int, rat};
use migrate_sched::{run_alg_c, run_alg_opt, run_list, Instance, OnlineScheduler, OptScheduler, Rational, RunOptions, ScheduleState};
use proptest::prelude::*;

fn sizes(max_len: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((0i64..=40, 1i64..=6).prop_map(|(a, b)| rat(a, b)), 1..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn incremental_small_loads_match_filtering(m in 2usize..=6, ps in sizes(40)) {
        let mut s = OptScheduler::<Rational>::new(m, true).unwrap();
        let am1 = s.profile().alpha.clone() - int(1);
        for p in ps {
            s.accept(p).unwrap();
            let cut = &am1 * s.tracker().lower_bound().unwrap();
            let direct: Vec<Rational> = s.state().machines.iter().map(|mc| small_load(mc, &cut)).collect();
            prop_assert_eq!(s.small_loads(), direct);
        }
    }

    #[test]
    fn lower_bounds_are_monotone(m in 2usize..=6, ps in sizes(30)) {
        let mut a = BoundTrackerOpt::<Rational>::new(m);
        let mut b = BoundTrackerC::<Rational>::new(m);
        let (mut la, mut lb) = (int(0), int(0));
        for p in ps {
            let na = a.push(p.clone()).unwrap().clone();
            let nb = b.push(p).unwrap().clone();
            prop_assert!(na >= la && nb >= lb);
            la = na;
            lb = nb;
        }
    }

    #[test]
    fn lower_bounds_never_exceed_opt(m in 2usize..=4, ps in sizes(10)) {
        let inst = Instance::new(m, ps.clone()).unwrap();
        let opt = opt_makespan(&inst).unwrap();
        let mut a = BoundTrackerOpt::<Rational>::new(m);
        let mut b = BoundTrackerC::<Rational>::new(m);
        for p in ps {
            a.push(p.clone()).unwrap();
            b.push(p).unwrap();
        }
        prop_assert!(*a.lower_bound().unwrap() <= opt);
        prop_assert!(*b.lower_bound().unwrap() <= opt);
    }

    #[test]
    fn event_log_replays_to_the_same_schedule(m in 2usize..=6, ps in sizes(40), which in 0usize..4) {
        let inst = Instance::new(m, ps).unwrap();
        let opts = RunOptions::default();
        let out = match which {
            0 => run_alg_opt(&inst, &opts),
            1 => run_alg_c(&inst, &rat(5, 3), &opts),
            2 => run_alg_c(&inst, &rat(7, 4), &opts),
            _ => run_list(&inst, &opts),
        }.unwrap();
        prop_assert!(out.report.ok());
        let replayed = ScheduleState::replay(m, &inst.jobs, &out.schedule.events).unwrap();
        prop_assert_eq!(replayed.job_ids(), out.schedule.job_ids());
        prop_assert_eq!(replayed.loads(), out.schedule.loads());

        let mut buf = Vec::new();
        write_trace(&out.schedule.events, &mut buf).unwrap();
        let back = read_trace(buf.as_slice()).unwrap();
        prop_assert_eq!(back, out.schedule.events);
    }
}

#[test]
fn replay_rejects_a_bad_log() {
    use migrate_sched::Event;
    let inst = Instance::new(2, vec![int(1), int(2)]).unwrap();
    let twice = [Event::Assign { job: 1, to: 0 }, Event::Assign { job: 1, to: 1 }];
    assert!(ScheduleState::replay(2, &inst.jobs, &twice).is_err());
    let wrong_source = [Event::Assign { job: 1, to: 0 }, Event::Migrate { job: 1, from: 1, to: 0 }];
    assert!(ScheduleState::replay(2, &inst.jobs, &wrong_source).is_err());
    let unknown = [Event::Assign { job: 9, to: 0 }];
    assert!(ScheduleState::replay(2, &inst.jobs, &unknown).is_err());
}
