//! List and LPT baselines, the exact branch-and-bound makespan oracle and the
//! closed-form pairing schedule for at most `2m` jobs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, ToPrimitive, Zero};

use crate::bounds::{BoundTrackerC, BoundTrackerOpt};
use crate::error::{Checker, Error, Result};
use crate::model::{Event, Instance, Job, ScheduleState};
use crate::num::{max_of, Rational, Scalar};
use crate::online::OnlineScheduler;
use crate::report::{Outcome, ReportParts, RunOptions};

pub const DEFAULT_ORACLE_GUARD: usize = 22;
pub const ORACLE_GUARD_ENV: &str = "MIGRATE_SCHED_ORACLE_GUARD";

/// Job-count limit for the exact oracle: `MIGRATE_SCHED_ORACLE_GUARD` if set
/// to a valid integer, otherwise 22.
pub fn oracle_guard() -> usize {
    std::env::var(ORACLE_GUARD_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ORACLE_GUARD)
}

/// Graham's List scheduling as an online scheduler.
#[derive(Debug, Clone)]
pub struct ListScheduler<S> {
    state: ScheduleState<S>,
}

impl<S: Scalar> ListScheduler<S> {
    pub fn new(m: usize) -> Self {
        Self {
            state: ScheduleState::new(m),
        }
    }

    pub fn state(&self) -> &ScheduleState<S> {
        &self.state
    }
}

impl<S: Scalar> OnlineScheduler<S> for ListScheduler<S> {
    fn name(&self) -> String {
        "list".into()
    }

    fn machines(&self) -> usize {
        self.state.m()
    }

    fn accept(&mut self, p: S) -> Result<usize> {
        if p.is_neg() {
            return Err(Error::InvalidArgument(format!("negative processing time {p:?}")));
        }
        let to = self.state.least_loaded(0..self.state.m()).expect("m >= 2");
        let id = self.state.events.len() + 1;
        self.state.assign(Job::new(id, p), to);
        Ok(to)
    }

    fn loads(&self) -> Vec<S> {
        self.state.loads()
    }

    fn finalize(&mut self) -> Result<Vec<Event>> {
        Ok(Vec::new())
    }
}

/// Larger of the two tracker bounds after the whole instance.
fn final_lower_bound<S: Scalar>(instance: &Instance<S>) -> Result<S> {
    let mut a = BoundTrackerOpt::new(instance.m);
    let mut b = BoundTrackerC::new(instance.m);
    let mut l = S::zero();
    for job in &instance.jobs {
        let la = a.push(job.p.clone())?.clone();
        let lb = b.push(job.p.clone())?.clone();
        l = max_of(la, lb);
    }
    Ok(l)
}

fn baseline_report<S: Scalar>(
    alg: &str,
    instance: &Instance<S>,
    schedule: ScheduleState<S>,
    opts: &RunOptions,
    ratio_cap: Option<Rational>,
) -> Result<Outcome<S>> {
    let opt = opts.resolve_opt(instance)?;
    let lower_bound = final_lower_bound(instance)?;
    let mut checker = Checker::new(opts.strict && S::EXACT);
    if let (Some(opt), Some(cap)) = (&opt, ratio_cap) {
        let makespan = schedule.makespan().to_ratio();
        let bound = cap * opt;
        checker.ensure(makespan <= bound, "competitive-ratio", None, || {
            format!("makespan {makespan} exceeds the {alg} guarantee {bound}")
        })?;
    }
    Ok(ReportParts {
        alg: alg.into(),
        instance,
        schedule,
        lower_bound,
        opt,
        removals: vec![0; instance.m],
        violations: checker.violations,
        warnings: checker.warnings,
    }
    .finish())
}

pub fn run_list<S: Scalar>(instance: &Instance<S>, opts: &RunOptions) -> Result<Outcome<S>> {
    let mut state = ScheduleState::new(instance.m);
    for job in &instance.jobs {
        let to = state.least_loaded(0..instance.m).expect("m >= 2");
        state.assign(job.clone(), to);
    }
    let m = instance.m as i64;
    let cap = Rational::new((2 * m - 1).into(), m.into());
    baseline_report("list", instance, state, opts, Some(cap))
}

/// Longest processing time first: an offline baseline that sorts the jobs
/// before list scheduling them.
pub fn run_lpt<S: Scalar>(instance: &Instance<S>, opts: &RunOptions) -> Result<Outcome<S>> {
    let mut jobs = instance.jobs.clone();
    crate::alg_opt::sort_desc(&mut jobs);
    let mut state = ScheduleState::new(instance.m);
    for job in jobs {
        let to = state.least_loaded(0..instance.m).expect("m >= 2");
        state.assign(job, to);
    }
    let m = instance.m as i64;
    let cap = Rational::new((4 * m - 1).into(), (3 * m).into());
    baseline_report("lpt", instance, state, opts, Some(cap))
}

/// Exact optimum makespan, refusing instances above [`oracle_guard`].
pub fn opt_makespan(instance: &Instance<Rational>) -> Result<Rational> {
    opt_makespan_guarded(instance, oracle_guard())
}

/// Exact optimum makespan by branch and bound, with an explicit job limit.
/// Zero-length jobs do not count against the limit.
pub fn opt_makespan_guarded(instance: &Instance<Rational>, guard: usize) -> Result<Rational> {
    let sizes: Vec<&Rational> = instance.jobs.iter().map(|j| &j.p).filter(|p| !p.is_zero()).collect();
    if sizes.len() > guard {
        return Err(Error::OracleGuard {
            n: sizes.len(),
            guard,
        });
    }
    if sizes.is_empty() {
        return Ok(Rational::zero());
    }
    let scale = sizes.iter().fold(BigInt::from(1), |acc, p| acc.lcm(p.denom()));
    let ints: Vec<BigInt> = sizes.iter().map(|p| p.numer() * (&scale / p.denom())).collect();
    let total: BigInt = ints.iter().sum();
    let best = match total.to_u64() {
        Some(_) => BigInt::from(branch_and_bound(
            ints.iter().map(|v| v.to_u64().expect("fits")).collect(),
            instance.m,
        )),
        None => branch_and_bound(ints, instance.m),
    };
    Ok(Rational::new(best, scale))
}

/// Minimum makespan of integer jobs on `m` identical machines.
fn branch_and_bound<T>(mut jobs: Vec<T>, m: usize) -> T
where
    T: Integer + Clone + FromPrimitive + for<'a> std::ops::AddAssign<&'a T> + for<'a> std::ops::SubAssign<&'a T>,
{
    jobs.sort_by(|a, b| b.cmp(a));
    let mut total = T::zero();
    for p in &jobs {
        total += p;
    }
    let machines = T::from_usize(m).expect("machine count fits");
    let lower = max_of(total.div_ceil(&machines), jobs[0].clone());

    // LPT gives the initial incumbent
    let mut loads = vec![T::zero(); m];
    for p in &jobs {
        let k = argmin(&loads);
        loads[k] += p;
    }
    let mut best = loads.iter().max().cloned().expect("m >= 1");

    let mut search = Search {
        jobs: &jobs,
        loads: vec![T::zero(); m],
        best: &mut best,
        lower: &lower,
    };
    search.descend(0, T::zero());
    best
}

fn argmin<T: Ord>(v: &[T]) -> usize {
    let mut k = 0;
    for (i, x) in v.iter().enumerate() {
        if *x < v[k] {
            k = i;
        }
    }
    k
}

struct Search<'a, T> {
    jobs: &'a [T],
    loads: Vec<T>,
    best: &'a mut T,
    lower: &'a T,
}

impl<T> Search<'_, T>
where
    T: Integer + Clone + for<'b> std::ops::AddAssign<&'b T> + for<'b> std::ops::SubAssign<&'b T>,
{
    /// Returns true once the incumbent matches the global lower bound.
    fn descend(&mut self, i: usize, current_max: T) -> bool {
        if *self.best == *self.lower {
            return true;
        }
        if i == self.jobs.len() {
            if current_max < *self.best {
                *self.best = current_max;
            }
            return *self.best == *self.lower;
        }
        let p = &self.jobs[i];
        for k in 0..self.loads.len() {
            // machines with equal load are interchangeable; this also means
            // only the first empty machine is ever opened
            if self.loads[..k].contains(&self.loads[k]) {
                continue;
            }
            let mut next = self.loads[k].clone();
            next += p;
            if next >= *self.best {
                continue;
            }
            let new_max = max_of(current_max.clone(), next.clone());
            self.loads[k] = next;
            let done = self.descend(i + 1, new_max);
            self.loads[k] -= p;
            if done {
                return true;
            }
        }
        false
    }
}

/// Makespan of the schedule that pairs the `i`-th largest job with the
/// `(2m+1-i)`-th largest. Accepts at most `2m` jobs.
pub fn pairing_opt(sizes: &[Rational], m: usize) -> Result<Rational> {
    if m == 0 || sizes.len() > 2 * m {
        return Err(Error::InvalidArgument(format!(
            "pairing needs at most 2m = {} jobs, got {}",
            2 * m,
            sizes.len()
        )));
    }
    let mut sorted = sizes.to_vec();
    sorted.sort_by(|a, b| b.cmp(a));
    let get = |k: usize| sorted.get(k - 1).cloned().unwrap_or_else(Rational::zero);
    Ok((1..=m)
        .map(|i| get(i) + get(2 * m + 1 - i))
        .fold(Rational::zero(), max_of))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat};

    fn inst(m: usize, sizes: &[i64]) -> Instance<Rational> {
        Instance::new(m, sizes.iter().map(|&v| int(v))).unwrap()
    }

    #[test]
    fn list_examples() {
        let out = run_list(&inst(2, &[1, 1, 1]), &RunOptions::checked()).unwrap();
        assert_eq!(out.report.makespan, int(2));
        assert_eq!(out.report.migrations, 0);
        assert_eq!(out.report.opt, Some(int(2)));
        let out = run_list(&inst(3, &[5]), &RunOptions::default()).unwrap();
        assert_eq!(out.report.makespan, int(5));
    }

    #[test]
    fn list_as_online_scheduler() {
        let mut s = ListScheduler::<Rational>::new(2);
        assert_eq!(s.accept(int(1)).unwrap(), 0);
        assert_eq!(s.accept(int(1)).unwrap(), 1);
        assert_eq!(s.accept(int(2)).unwrap(), 0);
        assert!(s.finalize().unwrap().is_empty());
        assert_eq!(s.loads(), vec![int(3), int(1)]);
    }

    #[test]
    fn lpt_sorts_first() {
        let out = run_lpt(&inst(2, &[2, 2, 2, 3, 3]), &RunOptions::default()).unwrap();
        assert_eq!(out.report.makespan, int(7));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(opt_makespan(&inst(2, &[3, 3, 2, 2, 2])).unwrap(), int(6));
        assert_eq!(opt_makespan(&inst(5, &[1])).unwrap(), int(1));
        assert_eq!(opt_makespan(&inst(2, &[1, 1])).unwrap(), int(1));
        assert_eq!(opt_makespan(&inst(3, &[])).unwrap(), int(0));
        let frac = Instance::new(2, vec![rat(1, 2), rat(1, 3), rat(1, 6)]).unwrap();
        assert_eq!(opt_makespan(&frac).unwrap(), rat(1, 2));
    }

    #[test]
    fn oracle_guard_is_enforced() {
        let big = inst(2, &[1; 30]);
        match opt_makespan_guarded(&big, 22) {
            Err(Error::OracleGuard { n: 30, guard: 22 }) => {}
            other => panic!("expected guard error, got {other:?}"),
        }
        assert_eq!(opt_makespan_guarded(&big, 30).unwrap(), int(15));
    }

    #[test]
    fn oracle_handles_huge_numbers() {
        let huge = Rational::from_integer(BigInt::from(u64::MAX) * 3);
        let inst = Instance::new(2, vec![huge.clone(), huge.clone(), huge.clone() * int(2)]).unwrap();
        assert_eq!(opt_makespan(&inst).unwrap(), huge * int(2));
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing_opt(&[int(4), int(3), int(3), int(2)], 2).unwrap(), int(6));
        assert_eq!(pairing_opt(&[int(7)], 3).unwrap(), int(7));
        assert_eq!(pairing_opt(&[int(1), int(1)], 1).unwrap(), int(2));
        assert!(pairing_opt(&vec![int(1); 5], 2).is_err());
    }
}
