//! ALG(alpha_m): keeps a load profile over the currently small jobs during
//! arrivals, then removes a bounded number of jobs per machine and
//! reassigns them by pairing the large ones.

use crate::alpha::{solve_alpha, AlphaProfile};
use crate::bounds::{BoundTrackerOpt, SmallLoads};
use crate::error::{Checker, Error, Result, Violation};
use crate::model::{Event, Instance, Job, ScheduleState};
use crate::num::{max_of, Scalar};
use crate::online::OnlineScheduler;
use crate::report::{Outcome, ReportParts, RunOptions};

/// One or two jobs of `R'` that are reassigned together.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSet<S> {
    /// 0-based positions in the sorted `R'`.
    pub members: Vec<usize>,
    pub pi: S,
}

/// Build `P_1..P_m` from `R'` sorted by non-increasing size and order them by
/// non-increasing total (stable, so ties keep the original numbering).
///
/// `P_i` holds the `i`-th largest job and, if it exists and is more than half
/// as large, the `(2m+1-i)`-th largest. Empty sets are omitted.
pub fn pair_sets<S: Scalar>(sorted: &[S], m: usize) -> Vec<PairSet<S>> {
    let two = S::from_int(2);
    let mut sets = Vec::new();
    for i in 1..=m.min(sorted.len()) {
        let mut members = vec![i - 1];
        let mut pi = sorted[i - 1].clone();
        let partner = 2 * m + 1 - i;
        if partner <= sorted.len() && sorted[partner - 1] > sorted[i - 1].clone() / two.clone() {
            members.push(partner - 1);
            pi += sorted[partner - 1].clone();
        }
        sets.push(PairSet { members, pi });
    }
    sets.sort_by(|a, b| b.pi.partial_cmp(&a.pi).unwrap_or(std::cmp::Ordering::Equal));
    sets
}

/// Sort jobs by non-increasing size, ties by id.
pub(crate) fn sort_desc<S: Scalar>(jobs: &mut [Job<S>]) {
    jobs.sort_by(|a, b| {
        b.p.partial_cmp(&a.p)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.id.cmp(&b.id))
    });
}

#[derive(Debug, Clone)]
pub struct OptScheduler<S> {
    profile: AlphaProfile,
    alpha: S,
    alpha_m1: S,
    beta: Vec<S>,
    state: ScheduleState<S>,
    tracker: BoundTrackerOpt<S>,
    small: SmallLoads<S>,
    checker: Checker,
    last_l: Option<S>,
    removals: Vec<usize>,
    /// Total of the heaviest pair set formed during reassignment.
    pi_max: Option<S>,
    finalized: bool,
}

impl<S: Scalar> OptScheduler<S> {
    pub fn new(m: usize, strict: bool) -> Result<Self> {
        Ok(Self::with_profile(solve_alpha(m)?, strict))
    }

    pub fn with_profile(profile: AlphaProfile, strict: bool) -> Self {
        let m = profile.m;
        let alpha = S::from_ratio(&profile.alpha);
        Self {
            alpha_m1: alpha.clone() - S::from_int(1),
            alpha,
            beta: profile.beta.iter().map(S::from_ratio).collect(),
            profile,
            state: ScheduleState::new(m),
            tracker: BoundTrackerOpt::new(m),
            small: SmallLoads::new(m),
            checker: Checker::new(strict && S::EXACT),
            last_l: None,
            removals: vec![0; m],
            pi_max: None,
            finalized: false,
        }
    }

    pub fn profile(&self) -> &AlphaProfile {
        &self.profile
    }

    pub fn state(&self) -> &ScheduleState<S> {
        &self.state
    }

    pub fn tracker(&self) -> &BoundTrackerOpt<S> {
        &self.tracker
    }

    /// Small-job load per machine at the current threshold.
    pub fn small_loads(&self) -> Vec<S> {
        (0..self.state.m()).map(|j| self.small.small(j).clone()).collect()
    }

    pub fn removals(&self) -> &[usize] {
        &self.removals
    }

    pub fn pi_max(&self) -> Option<&S> {
        self.pi_max.as_ref()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.checker.violations
    }

    /// First machine whose small load fits its profile share of `L_t^*`.
    fn profile_machine(&self, lstar: &S) -> Option<usize> {
        (0..self.state.m()).find(|&j| *self.small.small(j) <= self.beta[j].clone() * lstar.clone())
    }

    fn arrive(&mut self, p: S) -> Result<usize> {
        if self.finalized {
            return Err(Error::InvalidArgument("job arrived after finalize".into()));
        }
        let m = self.state.m();
        let l = self.tracker.push(p.clone())?.clone();
        let t = self.tracker.t();
        if let Some(prev) = &self.last_l {
            let ok = *prev <= l;
            self.checker
                .ensure(ok, "lower-bound-monotone", Some(t), || format!("L went from {prev:?} to {l:?}"))?;
        }
        self.last_l = Some(l.clone());

        let threshold = self.alpha_m1.clone() * l;
        self.small.advance(&threshold);
        let is_small = p <= threshold;
        let large_now = self.small.large_count() + usize::from(!is_small);
        self.checker.ensure(large_now <= 2 * m, "large-job-count", Some(t), || {
            format!("{large_now} jobs are large, more than 2m = {}", 2 * m)
        })?;

        let lstar = self.tracker.lstar(&self.alpha)?;
        let candidate = self.profile_machine(&lstar);
        if candidate.is_none() {
            self.checker.fail(Violation::new(
                "profile-machine-exists",
                Some(t),
                format!("no machine has small load within beta(j) * L* = beta(j) * {lstar:?}"),
            ))?;
        }
        let to = match (is_small, candidate) {
            (true, Some(j)) => j,
            _ => self.state.least_loaded(0..m).expect("m >= 2"),
        };
        self.state.assign(Job::new(t, p.clone()), to);
        self.small.insert(to, t, &p);
        Ok(to)
    }

    fn migrate(&mut self) -> Result<Vec<Event>> {
        if self.finalized {
            return Err(Error::InvalidArgument("finalize called twice".into()));
        }
        self.finalized = true;
        let first_migration = self.state.events.len();
        let Ok(l) = self.tracker.lower_bound().cloned() else {
            return Ok(Vec::new());
        };
        let m = self.state.m();
        let mu = self.profile.mu;
        let lstar = self.tracker.lstar(&self.alpha)?;
        let large_cut = self.alpha_m1.clone() * l.clone();
        let cap_all = self.alpha.clone() * l.clone();

        // removal
        let mut removed: Vec<(Job<S>, usize)> = Vec::new();
        for j in 0..m {
            let cap = max_of(self.beta[j].clone() * lstar.clone(), large_cut.clone());
            while *self.state.load(j) > cap {
                let Some(job) = self.state.take_largest(j) else { break };
                removed.push((job, j));
                self.removals[j] += 1;
            }
            let count = self.removals[j];
            self.checker.ensure(count <= mu, "removal-cap", None, || {
                format!("machine {} needed {count} removals, cap is {mu}", j + 1)
            })?;
            let load = self.state.load(j).clone();
            let ok = load <= cap && cap <= cap_all;
            self.checker.ensure(ok, "post-removal-load", None, || {
                format!("machine {} left with load {load:?}, cap {cap:?}, alpha*L {cap_all:?}", j + 1)
            })?;
        }
        if removed.is_empty() {
            return Ok(Vec::new());
        }

        // reassignment
        let origin: std::collections::HashMap<usize, usize> =
            removed.iter().map(|(job, from)| (job.id, *from)).collect();
        let mut jobs: Vec<Job<S>> = removed.into_iter().map(|(job, _)| job).collect();
        sort_desc(&mut jobs);
        let (large, rest): (Vec<Job<S>>, Vec<Job<S>>) =
            jobs.into_iter().partition(|job| job.p > large_cut);
        let r_len = large.len();
        self.checker.ensure(r_len <= 2 * m, "reassign-large-count", None, || {
            format!("|R'| = {r_len} exceeds 2m = {}", 2 * m)
        })?;

        let sizes: Vec<S> = large.iter().map(|job| job.p.clone()).collect();
        let sets = pair_sets(&sizes, m);
        self.pi_max = sets.first().map(|s| s.pi.clone());
        let mut paired = vec![false; large.len()];
        for set in &sets {
            let to = self.state.least_loaded(0..m).expect("m >= 2");
            for &k in &set.members {
                paired[k] = true;
                let job = large[k].clone();
                let from = origin[&job.id];
                self.state.place_migrated(job, from, to);
            }
        }
        let mut leftover: Vec<Job<S>> = large
            .into_iter()
            .zip(paired)
            .filter(|(_, used)| !used)
            .map(|(job, _)| job)
            .chain(rest)
            .collect();
        sort_desc(&mut leftover);
        for job in leftover {
            let to = self.state.least_loaded(0..m).expect("m >= 2");
            let from = origin[&job.id];
            self.state.place_migrated(job, from, to);
        }

        let migrations = self.state.events.len() - first_migration;
        self.checker.ensure(migrations <= mu * m, "migration-budget", None, || {
            format!("{migrations} migrations exceed mu*m = {}", mu * m)
        })?;
        Ok(self.state.events[first_migration..].to_vec())
    }

    fn into_parts(self) -> (ScheduleState<S>, Checker, Vec<usize>) {
        (self.state, self.checker, self.removals)
    }
}

impl<S: Scalar> OnlineScheduler<S> for OptScheduler<S> {
    fn name(&self) -> String {
        "opt".into()
    }

    fn machines(&self) -> usize {
        self.state.m()
    }

    fn accept(&mut self, p: S) -> Result<usize> {
        self.arrive(p)
    }

    fn loads(&self) -> Vec<S> {
        self.state.loads()
    }

    fn finalize(&mut self) -> Result<Vec<Event>> {
        self.migrate()
    }
}

/// Run ALG(alpha_m) on a whole instance.
pub fn run_alg_opt<S: Scalar>(instance: &Instance<S>, opts: &RunOptions) -> Result<Outcome<S>> {
    let profile = solve_alpha(instance.m)?;
    run_alg_opt_with(instance, profile, opts)
}

/// As [`run_alg_opt`], with a precomputed profile for `instance.m`.
pub fn run_alg_opt_with<S: Scalar>(
    instance: &Instance<S>,
    profile: AlphaProfile,
    opts: &RunOptions,
) -> Result<Outcome<S>> {
    if profile.m != instance.m {
        return Err(Error::InvalidArgument(format!(
            "profile is for m = {}, instance has m = {}",
            profile.m, instance.m
        )));
    }
    let opt = opts.resolve_opt(instance)?;
    let mut sched = OptScheduler::<S>::with_profile(profile, opts.strict);
    for job in &instance.jobs {
        sched.arrive(job.p.clone())?;
    }
    sched.migrate()?;
    let alpha = sched.profile.alpha.clone();
    let pi_max = sched.pi_max.as_ref().map(Scalar::to_ratio);
    let lower_bound = sched
        .tracker
        .lower_bound()
        .cloned()
        .unwrap_or_else(|_| S::zero());
    let (schedule, mut checker, removals) = sched.into_parts();

    let makespan = schedule.makespan().to_ratio();
    let l = lower_bound.to_ratio();
    if makespan > &alpha * &l {
        checker.warn(format!(
            "makespan {makespan} exceeds alpha_m * L = {}; L is only a lower bound on OPT",
            &alpha * &l
        ));
    }
    if let Some(opt) = &opt {
        let bound = &alpha * opt;
        checker.ensure(makespan <= bound, "competitive-ratio", None, || {
            format!("makespan {makespan} exceeds alpha_m * OPT = {bound}")
        })?;
        if let Some(pi) = &pi_max {
            checker.ensure(pi <= opt, "pair-set-within-opt", None, || {
                format!("heaviest pair set {pi} exceeds OPT = {opt}")
            })?;
        }
        checker.ensure(&l <= opt, "lower-bound-valid", None, || format!("L = {l} exceeds OPT = {opt}"))?;
    }
    Ok(ReportParts {
        alg: "opt".into(),
        instance,
        schedule,
        lower_bound,
        opt,
        removals,
        violations: checker.violations,
        warnings: checker.warnings,
    }
    .finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat, Rational};

    fn inst(m: usize, sizes: &[Rational]) -> Instance<Rational> {
        Instance::new(m, sizes.iter().cloned()).unwrap()
    }

    #[test]
    fn two_unit_jobs_on_two_machines() {
        let mut s = OptScheduler::<Rational>::new(2, true).unwrap();
        assert_eq!(s.accept(int(1)).unwrap(), 0);
        assert_eq!(s.accept(int(1)).unwrap(), 1);
        assert_eq!(s.loads(), vec![int(1), int(1)]);
        let moves = s.finalize().unwrap();
        assert_eq!(
            moves,
            vec![
                Event::Migrate { job: 1, from: 0, to: 0 },
                Event::Migrate { job: 2, from: 1, to: 1 },
            ]
        );
        assert_eq!(s.removals(), &[1, 1]);

        let out = run_alg_opt(&inst(2, &[int(1), int(1)]), &RunOptions::checked()).unwrap();
        assert_eq!(out.report.makespan, int(1));
        assert_eq!(out.report.migrations, 2);
        assert_eq!(out.report.ratio_vs_l, int(1));
        assert!(out.report.ok());
    }

    #[test]
    fn zero_job_goes_to_first_machine() {
        let mut s = OptScheduler::<Rational>::new(2, true).unwrap();
        assert_eq!(s.accept(int(0)).unwrap(), 0);
    }

    #[test]
    fn single_large_job_m3() {
        let mut s = OptScheduler::<Rational>::new(3, true).unwrap();
        assert_eq!(s.accept(int(3)).unwrap(), 0);
        assert_eq!(s.tracker().lower_bound().unwrap(), &int(1));
    }

    #[test]
    fn pairing_example() {
        let sets = pair_sets(&[int(4), int(3), int(3), int(2)], 2);
        assert_eq!(sets.len(), 2);
        assert_eq!(sets[0].members, vec![1, 2]);
        assert_eq!(sets[0].pi, int(6));
        assert_eq!(sets[1].members, vec![0]);
        assert_eq!(sets[1].pi, int(4));
        assert!(pair_sets::<Rational>(&[], 3).is_empty());
        let sets = pair_sets(&[int(1), int(1)], 2);
        assert_eq!(sets.iter().map(|s| s.members.clone()).collect::<Vec<_>>(), vec![vec![0], vec![1]]);
    }

    #[test]
    fn balanced_small_jobs_need_no_migration() {
        let n = 40;
        let out = run_alg_opt(&inst(2, &vec![rat(1, n); n as usize]), &RunOptions::default()).unwrap();
        assert!(out.report.ok());
        assert!(out.report.makespan <= rat(4, 3) * int(1));
    }

    #[test]
    fn empty_instance() {
        let out = run_alg_opt(&inst(3, &[]), &RunOptions::checked()).unwrap();
        assert_eq!(out.report.makespan, int(0));
        assert_eq!(out.report.migrations, 0);
        assert_eq!(out.report.ratio_vs_l, int(1));
    }

    #[test]
    fn float_mode_matches_exact_on_dyadic_sizes() {
        let sizes = [int(3), rat(1, 2), rat(5, 4), int(2), rat(1, 8), int(7), rat(3, 2)];
        let exact = run_alg_opt(&inst(3, &sizes), &RunOptions::default()).unwrap();
        let float = run_alg_opt(&inst(3, &sizes).to_float(), &RunOptions::default()).unwrap();
        assert_eq!(exact.report.makespan, float.report.makespan);
        assert_eq!(exact.schedule.events, float.schedule.events);
    }
}
