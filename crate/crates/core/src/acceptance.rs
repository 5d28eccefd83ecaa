//! The acceptance suite: one pass/fail verdict per criterion, each with a
//! short detail line. Used by the `verify` subcommand and the `acceptance`
//! test target.

use std::fmt;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::adversary::{is_non_decreasing, play_adversary, AdversaryOutcome};
use crate::alg_opt::{run_alg_opt_with, OptScheduler};
use crate::alg_budget::run_alg_c;
use crate::alpha::{alpha_sequence, f_m_with, limit_constant, solve_alpha, cesaro_gap, AlphaProfile, HarmonicTable};
use crate::baselines::{opt_makespan_guarded, pairing_opt, run_list, DEFAULT_ORACLE_GUARD};
use crate::bounds::{BoundTrackerC, BoundTrackerOpt};
use crate::error::Result;
use crate::generate::{generate, GenKind, GenSpec};
use crate::model::{small_load, Event, Instance, ScheduleState};
use crate::num::{fmt_decimal, int, rat, Rational};
use crate::report::{RunOptions, RunReport};

#[derive(Debug, Clone)]
pub struct Verdict {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] criterion {} ({}): {} [{:.2?}]",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed
        )
    }
}

fn verdict(id: u8, title: &'static str, start: Instant, result: Result<(bool, String)>) -> Verdict {
    let (passed, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    Verdict {
        id,
        title,
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

const TABLE: [(usize, i64, i64, usize); 10] = [
    (2, 4, 3, 10),
    (3, 15, 11, 9),
    (4, 11, 8, 9),
    (5, 125, 89, 8),
    (6, 137, 97, 8),
    (7, 273, 193, 8),
    (8, 586, 411, 8),
    (9, 1863, 1303, 8),
    (10, 5029, 3517, 8),
    (11, 58091, 40451, 7),
];

pub fn criterion_1() -> Verdict {
    let start = Instant::now();
    let result = (|| {
        let mut bad = Vec::new();
        for (m, num, den, mu) in TABLE {
            let p = solve_alpha(m)?;
            if p.alpha != rat(num, den) || p.mu != mu {
                bad.push(format!("m={m}: got {} / mu {}", p.alpha, p.mu));
            }
        }
        let elapsed = start.elapsed();
        let fast = elapsed < Duration::from_secs(1);
        let ok = bad.is_empty() && fast;
        let detail = if bad.is_empty() {
            format!("all 10 values exact, {elapsed:.2?} (limit 1 s)")
        } else {
            bad.join("; ")
        };
        Ok((ok, detail))
    })();
    verdict(1, "alpha_m and mu_m table", start, result)
}

pub fn criterion_2() -> Verdict {
    let start = Instant::now();
    let result = (|| {
        let limit = limit_constant(6);
        let seq = alpha_sequence(2000)?;
        let monotone = seq.windows(2).all(|w| w[0] <= w[1]);
        let last = seq.last().expect("nonempty");
        let gap_lo = &limit.lo - last;
        let gap_hi = &limit.hi - last;
        let in_range = gap_lo > Rational::zero() && gap_hi < rat(1, 1000);
        let elapsed = start.elapsed();
        let fast = elapsed < Duration::from_secs(30);
        Ok((
            monotone && in_range && fast,
            format!(
                "limit {}, alpha_2000 {}, gap in [{}, {}] (limit 0.001), non-decreasing: {monotone}, {elapsed:.2?} (limit 30 s)",
                limit.to_decimal(7),
                fmt_decimal(last, 7),
                fmt_decimal(&gap_lo, 4),
                fmt_decimal(&gap_hi, 4)
            ),
        ))
    })();
    verdict(2, "limit constant and monotone sequence", start, result)
}

pub fn criterion_3() -> Verdict {
    let start = Instant::now();
    let result = (|| {
        let table = HarmonicTable::up_to(500);
        let mut bad = Vec::new();
        for m in 2..=500 {
            let near_one = int(1) + rat(1, 3 * m as i64);
            if f_m_with(&table, m, &near_one)? >= int(1) {
                bad.push(format!("f_{m}(1+1/(3m)) >= 1"));
            }
            if f_m_with(&table, m, &int(2))? < int(1) {
                bad.push(format!("f_{m}(2) < 1"));
            }
        }
        for m in [2usize, 3, 5, 10, 50] {
            let grid: Vec<Rational> = (1..=50).map(|k| int(1) + rat(k, 50)).collect();
            let values = grid
                .iter()
                .map(|a| f_m_with(&table, m, a))
                .collect::<Result<Vec<_>>>()?;
            if !values.windows(2).all(|w| w[0] < w[1]) {
                bad.push(format!("f_{m} not strictly increasing on the grid"));
            }
        }
        let detail = if bad.is_empty() {
            "endpoint inequalities for m = 2..500 and strict growth on 50-point grids hold".to_string()
        } else {
            bad.join("; ")
        };
        Ok((bad.is_empty(), detail))
    })();
    verdict(3, "properties of f_m", start, result)
}

/// Everything the desk-scale criteria need from one instance.
pub struct DeskCase {
    pub instance: Instance<Rational>,
    pub opt: Rational,
    pub opt_run: RunReport,
    pub opt_events: Vec<Event>,
    pub c53: RunReport,
    pub c74: RunReport,
    pub list: RunReport,
}

/// Random desk-scale instances: `count` of them, `m` in 2..=5, `n` in 1..=12.
pub fn desk_instances(count: usize) -> Vec<Instance<Rational>> {
    (0..count)
        .map(|i| {
            let m = 2 + i % 4;
            let n = 1 + (i / 4) % 12;
            let mut spec = GenSpec::new(GenKind::Uniform, n, m, 1000 + i as u64);
            match i % 4 {
                0 | 1 => {
                    spec.max = 10;
                    spec.den_max = 6;
                }
                2 => {
                    spec.kind = GenKind::Geometric;
                    spec.max = 6;
                }
                _ => {
                    spec.max = 3;
                    spec.den_max = 12;
                }
            }
            generate(&spec).expect("valid spec")
        })
        .collect()
}

pub fn desk_runs(count: usize) -> Result<Vec<DeskCase>> {
    let profiles: Vec<AlphaProfile> = (2..=5).map(solve_alpha).collect::<Result<_>>()?;
    desk_instances(count)
        .into_par_iter()
        .map(|instance| {
            let opt = opt_makespan_guarded(&instance, DEFAULT_ORACLE_GUARD)?;
            let opts = RunOptions::default().with_opt(opt.clone());
            let opt_out = run_alg_opt_with(&instance, profiles[instance.m - 2].clone(), &opts)?;
            let c53 = run_alg_c(&instance, &rat(5, 3), &opts)?.report;
            let c74 = run_alg_c(&instance, &rat(7, 4), &opts)?.report;
            let list = run_list(&instance, &opts)?.report;
            Ok(DeskCase {
                opt,
                opt_events: opt_out.schedule.events,
                opt_run: opt_out.report,
                c53,
                c74,
                list,
                instance,
            })
        })
        .collect()
}

pub fn criterion_4(cases: &[DeskCase], elapsed: Duration) -> Verdict {
    let start = Instant::now();
    let mut bad = Vec::new();
    for (k, case) in cases.iter().enumerate() {
        let alpha = solve_alpha(case.instance.m).expect("m >= 2").alpha;
        let checks = [
            ("opt", &case.opt_run, alpha),
            ("c=5/3", &case.c53, rat(5, 3)),
            ("c=7/4", &case.c74, rat(7, 4)),
        ];
        for (name, report, ratio) in checks {
            if report.makespan > &ratio * &case.opt || !report.violations.is_empty() {
                bad.push(format!("instance {k} {name}: makespan {} vs OPT {}", report.makespan, case.opt));
            }
        }
    }
    let fast = elapsed < Duration::from_secs(300);
    let ok = cases.len() >= 1000 && bad.is_empty() && fast;
    let detail = if bad.is_empty() {
        format!(
            "{} instances, 0 violations ({} runs note makespan above alpha_m L, informational), max ratios opt {} / c=5/3 {} / c=7/4 {}, {elapsed:.2?} (limit 5 min)",
            cases.len(),
            cases
                .iter()
                .flat_map(|c| [&c.opt_run, &c.c53, &c.c74])
                .filter(|r| !r.warnings.is_empty())
                .count(),
            max_ratio(cases.iter().map(|c| &c.opt_run)),
            max_ratio(cases.iter().map(|c| &c.c53)),
            max_ratio(cases.iter().map(|c| &c.c74)),
        )
    } else {
        format!("{} failures: {}", bad.len(), bad.iter().take(5).cloned().collect::<Vec<_>>().join("; "))
    };
    Verdict {
        id: 4,
        title: "competitiveness against the exact optimum",
        passed: ok,
        detail,
        elapsed: elapsed + start.elapsed(),
    }
}

fn max_ratio<'a>(reports: impl Iterator<Item = &'a RunReport>) -> String {
    let best = reports
        .filter_map(|r| r.ratio_vs_opt.clone())
        .fold(Rational::zero(), crate::num::max_of);
    fmt_decimal(&best, 5)
}

/// Shrinking-stress runs: `count` instances with `n` growing to `n_max`.
pub struct StressCase {
    pub m: usize,
    pub n: usize,
    pub opt_run: RunReport,
    pub c53: RunReport,
    pub c74: RunReport,
}

pub fn stress_runs(count: usize, n_max: usize) -> Result<Vec<StressCase>> {
    const MS: [usize; 6] = [2, 3, 4, 5, 8, 11];
    (0..count)
        .into_par_iter()
        .map(|i| {
            let m = MS[i % MS.len()];
            let n = ((i + 1) * n_max / count).max(1);
            let spec = GenSpec::new(GenKind::ShrinkingStress, n, m, 5000 + i as u64);
            let instance = generate(&spec)?;
            let opts = RunOptions::default();
            Ok(StressCase {
                m,
                n,
                opt_run: crate::alg_opt::run_alg_opt(&instance, &opts)?.report,
                c53: run_alg_c(&instance, &rat(5, 3), &opts)?.report,
                c74: run_alg_c(&instance, &rat(7, 4), &opts)?.report,
            })
        })
        .collect()
}

/// Budget checks on one triple of reports, recomputed from the counts.
fn budget_failures(m: usize, opt_run: &RunReport, c53: &RunReport, c74: &RunReport) -> Vec<String> {
    let mu = solve_alpha(m).expect("m >= 2").mu;
    let a = m / 2;
    let mut bad = Vec::new();
    if opt_run.per_machine_removals.iter().any(|&r| r > mu) || opt_run.migrations > mu * m {
        bad.push(format!("opt on m={m}: removals {:?}, migrations {}", opt_run.per_machine_removals, opt_run.migrations));
    }
    if c53.per_machine_removals[..a].iter().any(|&r| r > 7) || c53.migrations > 4 * m {
        bad.push(format!("c=5/3 on m={m}: removals {:?}, migrations {}", c53.per_machine_removals, c53.migrations));
    }
    if c74.per_machine_removals[..a].iter().any(|&r| r > 4) || 2 * c74.migrations > 5 * m {
        bad.push(format!("c=7/4 on m={m}: removals {:?}, migrations {}", c74.per_machine_removals, c74.migrations));
    }
    for (name, r) in [("opt", opt_run), ("c=5/3", c53), ("c=7/4", c74)] {
        if !r.violations.is_empty() {
            bad.push(format!("{name} on m={m}: {}", r.violations[0]));
        }
    }
    bad
}

pub fn criterion_5(desk: &[DeskCase], stress: &[StressCase], elapsed: Duration) -> Verdict {
    let start = Instant::now();
    let mut bad = Vec::new();
    for c in desk {
        bad.extend(budget_failures(c.instance.m, &c.opt_run, &c.c53, &c.c74));
    }
    for c in stress {
        bad.extend(budget_failures(c.m, &c.opt_run, &c.c53, &c.c74));
    }
    let n_max = stress.iter().map(|c| c.n).max().unwrap_or(0);
    let worst = |f: &dyn Fn(&StressCase) -> f64| stress.iter().map(f).fold(0.0, f64::max);
    let detail = if bad.is_empty() {
        format!(
            "{} desk + {} stress instances (n up to {n_max}); worst migrations/m: opt {:.2}, c=5/3 {:.2}, c=7/4 {:.2}",
            desk.len(),
            stress.len(),
            worst(&|c| c.opt_run.migrations as f64 / c.m as f64),
            worst(&|c| c.c53.migrations as f64 / c.m as f64),
            worst(&|c| c.c74.migrations as f64 / c.m as f64),
        )
    } else {
        format!("{} failures: {}", bad.len(), bad.iter().take(5).cloned().collect::<Vec<_>>().join("; "))
    };
    Verdict {
        id: 5,
        title: "migration budgets",
        passed: bad.is_empty() && stress.len() >= 200,
        detail,
        elapsed: elapsed + start.elapsed(),
    }
}

/// Recompute the profile condition from an arrival log: before each job is
/// placed, some machine `j` must carry small load at most `beta(j) L_t^*`.
/// Small loads are recomputed by filtering the replayed machine contents.
pub fn profile_condition_failures(instance: &Instance<Rational>, events: &[Event]) -> Result<Vec<usize>> {
    let profile = solve_alpha(instance.m)?;
    let am1 = &profile.alpha - int(1);
    let mut tracker = BoundTrackerOpt::<Rational>::new(instance.m);
    let mut state = ScheduleState::<Rational>::new(instance.m);
    let mut failures = Vec::new();
    let arrivals = events.iter().filter_map(|e| match *e {
        Event::Assign { job, to } => Some((job, to)),
        Event::Migrate { .. } => None,
    });
    for (job, to) in arrivals {
        let j = instance.jobs[job - 1].clone();
        let l = tracker.push(j.p.clone())?.clone();
        let lstar = tracker.lstar(&profile.alpha)?;
        let cut = &am1 * &l;
        let exists = state
            .machines
            .iter()
            .zip(&profile.beta)
            .any(|(mc, b)| small_load(mc, &cut) <= b * &lstar);
        if !exists {
            failures.push(job);
        }
        state.assign(j, to);
    }
    Ok(failures)
}

pub fn criterion_6(desk: &[DeskCase], stress: &[StressCase], elapsed: Duration) -> Verdict {
    let start = Instant::now();
    let result = (|| {
        let live = desk
            .iter()
            .map(|c| &c.opt_run)
            .chain(stress.iter().map(|c| &c.opt_run))
            .flat_map(|r| r.violations.iter())
            .filter(|v| v.name == "profile-machine-exists")
            .count();
        let mut replayed = 0;
        for c in desk {
            replayed += profile_condition_failures(&c.instance, &c.opt_events)?.len();
        }
        let runs = desk.len() + stress.len();
        Ok((
            live == 0 && replayed == 0,
            format!("{runs} runs checked live: {live} failures; {} desk runs recomputed from the log: {replayed} failures", desk.len()),
        ))
    })();
    let mut v = verdict(6, "profile machine exists at every arrival", start, result);
    v.elapsed += elapsed;
    v
}

pub fn adversary_table(m: usize, n_primes: &[usize], eps: &Rational) -> Result<Vec<AdversaryOutcome>> {
    let profile = solve_alpha(m)?;
    n_primes
        .par_iter()
        .map(|&n| {
            let mut s = OptScheduler::<Rational>::with_profile(profile.clone(), false);
            play_adversary(&mut s, n, eps)
        })
        .collect()
}

pub fn criterion_7() -> Verdict {
    let start = Instant::now();
    let result = (|| {
        let eps = rat(1, 1000);
        let mut ok = true;
        let mut parts = Vec::new();
        for m in [2usize, 3] {
            let alpha = solve_alpha(m)?.alpha;
            let n_primes: Vec<usize> = [100, 1000, 10000].iter().map(|n: &usize| n.div_ceil(m) * m).collect();
            let table = adversary_table(m, &n_primes, &eps)?;
            let last = &table.last().expect("three rows").ratio_lb;
            let close = *last >= &alpha - rat(2, 100);
            let mono = is_non_decreasing(&table);
            ok &= close && mono;
            let ratios: Vec<String> = table.iter().map(|o| fmt_decimal(&o.ratio_lb, 6)).collect();
            parts.push(format!(
                "m={m}, n' {:?}: ratios {} (alpha_m {}), non-decreasing {mono}",
                n_primes,
                ratios.join(" -> "),
                fmt_decimal(&alpha, 6)
            ));
        }
        let small = adversary_table(2, &[100], &eps)?.remove(0);
        let inst = Instance::new(2, small.sequence.clone())?;
        let opt = opt_makespan_guarded(&inst, inst.n())?;
        let upper_ok = small.opt_upper >= opt;
        ok &= upper_ok;
        parts.push(format!("m=2, n'=100: opt_upper {} >= OPT {}", small.opt_upper, opt));
        Ok((ok, parts.join("; ")))
    })();
    verdict(7, "adversary trend", start, result)
}

/// Random instances of at most `2m` jobs whose smallest job exceeds a third
/// of the optimum, with their optimum.
pub fn pairing_instances(count: usize, seed: u64) -> Result<Vec<(Instance<Rational>, Rational)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = Vec::new();
    let mut attempts = 0;
    while found.len() < count && attempts < 200 * count {
        attempts += 1;
        let m = rng.gen_range(1..=4usize).max(2);
        let n = rng.gen_range(1..=2 * m);
        let sizes: Vec<Rational> = (0..n)
            .map(|_| {
                let den = rng.gen_range(1..=4i64);
                rat(rng.gen_range(5 * den..=12 * den), den)
            })
            .collect();
        let inst = Instance::new(m, sizes)?;
        let opt = opt_makespan_guarded(&inst, DEFAULT_ORACLE_GUARD)?;
        let min = inst.jobs.iter().map(|j| j.p.clone()).min().expect("n >= 1");
        if min * int(3) > opt {
            found.push((inst, opt));
        }
    }
    Ok(found)
}

pub fn criterion_8(desk: &[DeskCase]) -> Verdict {
    let start = Instant::now();
    let result = (|| {
        let pairs = pairing_instances(500, 77)?;
        let mut bad = Vec::new();
        for (inst, opt) in &pairs {
            let paired = pairing_opt(&inst.sizes(), inst.m)?;
            if paired != *opt {
                bad.push(format!("pairing {paired} != OPT {opt} on {:?}", inst.sizes()));
            }
        }
        for c in desk {
            let m = c.instance.m as i64;
            if c.list.makespan > rat(2 * m - 1, m) * &c.opt {
                bad.push(format!("list {} > (2-1/m) OPT {}", c.list.makespan, c.opt));
            }
            let mut a = BoundTrackerOpt::<Rational>::new(c.instance.m);
            let mut b = BoundTrackerC::<Rational>::new(c.instance.m);
            for j in &c.instance.jobs {
                a.push(j.p.clone())?;
                b.push(j.p.clone())?;
            }
            for l in [a.lower_bound(), b.lower_bound()].into_iter().flatten() {
                if *l > c.opt {
                    bad.push(format!("L {l} > OPT {}", c.opt));
                }
            }
        }
        let detail = if bad.is_empty() {
            format!(
                "{} pairing instances agree with the oracle; List and both lower bounds hold on {} instances",
                pairs.len(),
                desk.len()
            )
        } else {
            bad.iter().take(5).cloned().collect::<Vec<_>>().join("; ")
        };
        Ok((bad.is_empty() && pairs.len() >= 500, detail))
    })();
    verdict(8, "oracle cross-checks", start, result)
}

pub fn criterion_9() -> Verdict {
    let start = Instant::now();
    let result = (|| {
        let mut ok = true;
        let mut parts = Vec::new();
        for m in [1usize, 10, 100, 1000] {
            let gap = cesaro_gap(m)?;
            let bound = rat(1, 6 * (m * (m + 1)) as i64);
            let holds = gap.lo > Rational::zero() && gap.hi < bound;
            ok &= holds;
            parts.push(format!("m={m}: {} < {}", gap.to_decimal(10), fmt_decimal(&bound, 10)));
        }
        Ok((ok, parts.join("; ")))
    })();
    verdict(9, "Cesaro bound on harmonic numbers", start, result)
}

/// Run the whole suite. `desk_count` and the stress sizes are parameters so
/// callers can run a quick version; the criteria need at least 1000 desk
/// instances and 200 stress instances.
pub fn run_all_with(desk_count: usize, stress_count: usize, stress_n_max: usize) -> Vec<Verdict> {
    let mut out = vec![criterion_1(), criterion_2(), criterion_3()];
    let t = Instant::now();
    let desk = desk_runs(desk_count);
    let desk_time = t.elapsed();
    let t = Instant::now();
    let stress = stress_runs(stress_count, stress_n_max);
    let stress_time = t.elapsed();
    match (&desk, &stress) {
        (Ok(desk), Ok(stress)) => {
            out.push(criterion_4(desk, desk_time));
            out.push(criterion_5(desk, stress, desk_time + stress_time));
            out.push(criterion_6(desk, stress, desk_time + stress_time));
        }
        _ => {
            let msg = desk
                .as_ref()
                .err()
                .or(stress.as_ref().err())
                .map(|e| e.to_string())
                .unwrap_or_default();
            for (id, title) in [
                (4, "competitiveness against the exact optimum"),
                (5, "migration budgets"),
                (6, "profile machine exists at every arrival"),
            ] {
                out.push(Verdict {
                    id,
                    title,
                    passed: false,
                    detail: format!("error: {msg}"),
                    elapsed: desk_time + stress_time,
                });
            }
        }
    }
    out.push(criterion_7());
    out.push(criterion_8(desk.as_deref().unwrap_or(&[])));
    out.push(criterion_9());
    out
}

pub fn run_all() -> Vec<Verdict> {
    run_all_with(1200, 200, 10_000)
}
