//! The adaptive lower-bound adversary, played at a concrete sequence length.
//!
//! Phase 1 presents `n'` jobs of size `m/n'` (total load `m`). If the
//! scheduler already has a machine at load `alpha_m` or more, `m` tiny jobs of
//! size `eps'/m` follow. Otherwise, with loads sorted ascending, the smallest
//! `j0` whose load reaches `(alpha_m - 1) m/(m - j0)` exists, and `j0` jobs of
//! size `m/(m - j0)` follow. The scheduler's makespan after its migrations
//! divided by an explicit upper bound on the optimum is the certified ratio.

use std::collections::HashMap;

use num_traits::Zero;
use serde::Serialize;

use crate::alpha::solve_alpha;
use crate::error::{Error, Result};
use crate::model::Event;
use crate::num::{fraction_str, int, max_of, rat, Rational};
use crate::online::OnlineScheduler;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdversaryOutcome {
    pub scheduler: String,
    pub m: usize,
    pub n_prime: usize,
    #[serde(with = "fraction_str")]
    pub eps: Rational,
    /// `"overloaded"` or `"profile-gap(j0)"`.
    pub branch: String,
    #[serde(serialize_with = "fractions")]
    pub phase1_loads: Vec<Rational>,
    #[serde(serialize_with = "fractions")]
    pub sequence: Vec<Rational>,
    pub migrations: usize,
    #[serde(with = "fraction_str")]
    pub alg_makespan: Rational,
    #[serde(with = "fraction_str")]
    pub opt_upper: Rational,
    #[serde(with = "fraction_str")]
    pub ratio_lb: Rational,
}

fn fractions<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(crate::num::fmt_fraction))
}

/// Loads and job locations as the adversary sees them, kept independently of
/// the scheduler's own bookkeeping.
struct Ledger {
    loads: Vec<Rational>,
    location: HashMap<usize, usize>,
    sizes: Vec<Rational>,
}

impl Ledger {
    fn new(m: usize) -> Self {
        Self {
            loads: vec![Rational::zero(); m],
            location: HashMap::new(),
            sizes: Vec::new(),
        }
    }

    fn feed<A: OnlineScheduler<Rational> + ?Sized>(&mut self, sched: &mut A, p: Rational) -> Result<()> {
        let to = sched.accept(p.clone())?;
        if to >= self.loads.len() {
            return Err(Error::InvalidArgument(format!("scheduler used machine {} of {}", to + 1, self.loads.len())));
        }
        self.loads[to] += &p;
        self.sizes.push(p);
        self.location.insert(self.sizes.len(), to);
        Ok(())
    }

    fn apply(&mut self, moves: &[Event]) -> Result<()> {
        for e in moves {
            let Event::Migrate { job, from, to } = *e else {
                return Err(Error::InvalidArgument("finalize returned a non-migration event".into()));
            };
            if self.location.get(&job) != Some(&from) || to >= self.loads.len() {
                return Err(Error::InvalidArgument(format!("inconsistent migration of job {job}")));
            }
            let p = &self.sizes[job - 1];
            self.loads[from] -= p;
            self.loads[to] += p;
            self.location.insert(job, to);
        }
        Ok(())
    }
}

/// Play the adversary against `sched`, which must be fresh.
pub fn play_adversary<A: OnlineScheduler<Rational> + ?Sized>(
    sched: &mut A,
    n_prime: usize,
    eps: &Rational,
) -> Result<AdversaryOutcome> {
    let m = sched.machines();
    if n_prime < m || !n_prime.is_multiple_of(m) {
        return Err(Error::InvalidArgument(format!(
            "n' must be a positive multiple of m = {m}, got {n_prime}"
        )));
    }
    if *eps <= Rational::zero() {
        return Err(Error::InvalidArgument(format!("eps' must be positive, got {eps}")));
    }
    let alpha = solve_alpha(m)?.alpha;
    let mm = m as i64;
    let p1 = rat(mm, n_prime as i64);
    let mut ledger = Ledger::new(m);
    for _ in 0..n_prime {
        ledger.feed(sched, p1.clone())?;
    }
    let phase1_loads = ledger.loads.clone();
    if sched.loads() != phase1_loads {
        return Err(Error::InvalidArgument("scheduler reports loads that disagree with its placements".into()));
    }

    let (branch, opt_upper) = if phase1_loads.iter().any(|l| *l >= alpha) {
        let p2 = eps / int(mm);
        for _ in 0..m {
            ledger.feed(sched, p2.clone())?;
        }
        ("overloaded".to_string(), int(1) + p2)
    } else {
        let mut sorted = phase1_loads.clone();
        sorted.sort();
        let am1 = &alpha - int(1);
        let j0 = (1..m)
            .find(|&j| sorted[j - 1] >= &am1 * rat(mm, (m - j) as i64))
            .ok_or_else(|| {
                Error::Invariant(crate::error::Violation::new(
                    "adversary-gap-exists",
                    None,
                    format!("all loads are below alpha_m and no machine reaches its profile: {sorted:?}"),
                ))
            })?;
        let p2 = rat(mm, (m - j0) as i64);
        for _ in 0..j0 {
            ledger.feed(sched, p2.clone())?;
        }
        let mut upper = p2;
        if !n_prime.is_multiple_of(m - j0) {
            upper += &p1;
        }
        (format!("profile-gap({j0})"), upper)
    };

    let moves = sched.finalize()?;
    ledger.apply(&moves)?;
    let alg_makespan = ledger.loads.iter().cloned().fold(Rational::zero(), max_of);
    Ok(AdversaryOutcome {
        scheduler: sched.name(),
        m,
        n_prime,
        eps: eps.clone(),
        branch,
        phase1_loads,
        sequence: ledger.sizes,
        migrations: moves.len(),
        ratio_lb: &alg_makespan / &opt_upper,
        alg_makespan,
        opt_upper,
    })
}

/// One game per `n'`, each against a fresh scheduler from `factory`.
pub fn sweep_adversary<F>(factory: F, n_primes: &[usize], eps: &Rational) -> Result<Vec<AdversaryOutcome>>
where
    F: Fn() -> Result<Box<dyn OnlineScheduler<Rational>>>,
{
    if n_primes.is_empty() {
        return Err(Error::InvalidArgument("empty n' list".into()));
    }
    n_primes
        .iter()
        .map(|&n| {
            let mut sched = factory()?;
            play_adversary(sched.as_mut(), n, eps)
        })
        .collect()
}

/// Whether the ratios in a sweep never decrease.
pub fn is_non_decreasing(outcomes: &[AdversaryOutcome]) -> bool {
    outcomes.windows(2).all(|w| w[0].ratio_lb <= w[1].ratio_lb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::ListScheduler;

    #[test]
    fn list_on_two_machines() {
        let mut s = ListScheduler::<Rational>::new(2);
        let out = play_adversary(&mut s, 100, &rat(1, 100)).unwrap();
        assert_eq!(out.phase1_loads, vec![int(1), int(1)]);
        assert_eq!(out.branch, "profile-gap(1)");
        assert_eq!(out.alg_makespan, int(3));
        assert_eq!(out.opt_upper, int(2));
        assert_eq!(out.ratio_lb, rat(3, 2));
        assert_eq!(out.sequence.len(), 101);
    }

    #[test]
    fn degenerate_n_prime_equals_m() {
        let mut s = ListScheduler::<Rational>::new(3);
        let out = play_adversary(&mut s, 3, &rat(1, 10)).unwrap();
        assert_eq!(out.phase1_loads, vec![int(1); 3]);
        assert!(out.ratio_lb >= int(1));
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut s = ListScheduler::<Rational>::new(2);
        assert!(play_adversary(&mut s, 3, &rat(1, 10)).is_err());
        assert!(play_adversary(&mut s, 4, &int(0)).is_err());
    }

    #[test]
    fn sweep_single_entry() {
        let f = || -> Result<Box<dyn OnlineScheduler<Rational>>> { Ok(Box::new(ListScheduler::new(2))) };
        let table = sweep_adversary(f, &[10], &rat(1, 10)).unwrap();
        assert_eq!(table.len(), 1);
        assert!(sweep_adversary(f, &[], &rat(1, 10)).is_err());
    }
}
