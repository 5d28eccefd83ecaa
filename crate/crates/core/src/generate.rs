//! Seeded instance generators.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adversary::play_adversary;
use crate::alg_opt::OptScheduler;
use crate::alpha::solve_alpha;
use crate::bounds::BoundTrackerOpt;
use crate::error::{Error, Result};
use crate::model::Instance;
use crate::num::{floor_to_int, int, rat, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    /// Sizes `a/b` with `b` uniform in `1..=den_max` and `a/b` uniform-ish in `(0, max]`.
    Uniform,
    /// Integer sizes `2^e` with `e` uniform in `0..=max`.
    Geometric,
    /// Jobs just above the large threshold of ALG(alpha_m), followed by filler
    /// that raises the lower bound until they count as small.
    ShrinkingStress,
    /// The adversary's sequence against ALG(alpha_m) with `n' = n` rounded up
    /// to a multiple of `m`.
    Adversarial,
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GenKind::Uniform => "uniform",
            GenKind::Geometric => "geometric",
            GenKind::ShrinkingStress => "shrinking-stress",
            GenKind::Adversarial => "adversarial",
        })
    }
}

impl FromStr for GenKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(GenKind::Uniform),
            "geometric" => Ok(GenKind::Geometric),
            "shrinking-stress" | "shrinking" => Ok(GenKind::ShrinkingStress),
            "adversarial" => Ok(GenKind::Adversarial),
            other => Err(Error::InvalidArgument(format!("unknown generator kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub kind: GenKind,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    /// Uniform: largest size. Geometric: largest exponent. Shrinking-stress:
    /// largest filler size.
    pub max: u32,
    /// Uniform only: largest denominator.
    pub den_max: u32,
}

impl GenSpec {
    pub fn new(kind: GenKind, n: usize, m: usize, seed: u64) -> Self {
        Self {
            kind,
            n,
            m,
            seed,
            max: 10,
            den_max: 4,
        }
    }

    pub fn label(&self) -> String {
        format!("{}-m{}-n{}-s{}", self.kind, self.m, self.n, self.seed)
    }
}

pub fn generate(spec: &GenSpec) -> Result<Instance<Rational>> {
    if spec.n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if spec.m < 2 {
        return Err(Error::InvalidArgument(format!("need m >= 2 machines, got {}", spec.m)));
    }
    if spec.max == 0 || spec.den_max == 0 {
        return Err(Error::InvalidArgument("max and den_max must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let sizes = match spec.kind {
        GenKind::Uniform => (0..spec.n)
            .map(|_| {
                let den = rng.gen_range(1..=spec.den_max as i64);
                let num = rng.gen_range(1..=spec.max as i64 * den);
                rat(num, den)
            })
            .collect(),
        GenKind::Geometric => (0..spec.n)
            .map(|_| {
                let e = rng.gen_range(0..=spec.max.min(62));
                int(1i64 << e)
            })
            .collect(),
        GenKind::ShrinkingStress => shrinking_stress(spec, &mut rng)?,
        GenKind::Adversarial => {
            let n_prime = spec.n.div_ceil(spec.m) * spec.m;
            let mut sched = OptScheduler::<Rational>::new(spec.m, false)?;
            play_adversary(&mut sched, n_prime, &rat(1, 1000))?.sequence
        }
    };
    Instance::new(spec.m, sizes)
}

/// Smallest integer size that would be large for ALG(alpha_m) if it arrived
/// next, given the tracker state before its arrival.
fn barely_large(tracker: &BoundTrackerOpt<Rational>, alpha_m1: &Rational) -> Rational {
    let current = tracker.lower_bound().cloned().unwrap_or_else(|_| Rational::zero());
    let mut p = Rational::from_integer(floor_to_int(&(alpha_m1 * current)) + 1);
    // L grows with p, so raise p until it clears its own threshold
    for _ in 0..64 {
        let mut probe = tracker.clone();
        let l = probe.push(p.clone()).expect("nonnegative").clone();
        let cut = alpha_m1 * l;
        if p > cut {
            return p;
        }
        p = Rational::from_integer(floor_to_int(&cut) + 1);
    }
    p
}

fn shrinking_stress(spec: &GenSpec, rng: &mut ChaCha8Rng) -> Result<Vec<Rational>> {
    let alpha_m1 = solve_alpha(spec.m)?.alpha - int(1);
    let mut tracker = BoundTrackerOpt::<Rational>::new(spec.m);
    let front = spec.n.min(4 * spec.m).max(1);
    let scale = int(spec.max as i64);
    let mut sizes = Vec::with_capacity(spec.n);
    for t in 0..spec.n {
        let p = if t == 0 {
            scale.clone()
        } else if t < front || rng.gen_ratio(1, 10) {
            barely_large(&tracker, &alpha_m1)
        } else {
            int(rng.gen_range(1..=spec.max as i64))
        };
        tracker.push(p.clone())?;
        sizes.push(p);
    }
    Ok(sizes)
}

/// Indices (1-based) of jobs that were large when they arrived and are small
/// against the final lower bound.
pub fn shrunk_jobs(instance: &Instance<Rational>, alpha: &Rational) -> Vec<usize> {
    let am1 = alpha - int(1);
    let mut tracker = BoundTrackerOpt::<Rational>::new(instance.m);
    let mut large_at_arrival = Vec::new();
    for job in &instance.jobs {
        let l = tracker.push(job.p.clone()).expect("nonnegative").clone();
        if job.p > &am1 * l {
            large_at_arrival.push(job.id);
        }
    }
    let Ok(final_l) = tracker.lower_bound() else {
        return Vec::new();
    };
    let cut = &am1 * final_l;
    large_at_arrival
        .into_iter()
        .filter(|&id| instance.jobs[id - 1].p <= cut)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let spec = GenSpec::new(GenKind::Uniform, 5, 3, 7);
        let a = generate(&spec).unwrap();
        assert_eq!(a, generate(&spec).unwrap());
        assert_eq!(a.n(), 5);
        let other = GenSpec { seed: 8, ..spec };
        assert_ne!(a, generate(&other).unwrap());
    }

    #[test]
    fn single_job() {
        for kind in [GenKind::Uniform, GenKind::Geometric, GenKind::ShrinkingStress] {
            assert_eq!(generate(&GenSpec::new(kind, 1, 2, 1)).unwrap().n(), 1);
        }
        assert!(generate(&GenSpec::new(GenKind::Uniform, 0, 2, 1)).is_err());
        assert!(generate(&GenSpec::new(GenKind::Uniform, 3, 1, 1)).is_err());
    }

    #[test]
    fn shrinking_stress_flips_classification() {
        let spec = GenSpec::new(GenKind::ShrinkingStress, 60, 2, 3);
        let inst = generate(&spec).unwrap();
        let alpha = solve_alpha(2).unwrap().alpha;
        assert!(!shrunk_jobs(&inst, &alpha).is_empty());
        assert!(inst.jobs.iter().all(|j| j.p.is_integer()));
    }

    #[test]
    fn adversarial_sequence_shape() {
        let inst = generate(&GenSpec::new(GenKind::Adversarial, 9, 2, 0)).unwrap();
        assert!(inst.n() >= 10);
        assert_eq!(inst.jobs[0].p, rat(2, 10));
    }

    #[test]
    fn kind_round_trip() {
        for k in [GenKind::Uniform, GenKind::Geometric, GenKind::ShrinkingStress, GenKind::Adversarial] {
            assert_eq!(k.to_string().parse::<GenKind>().unwrap(), k);
        }
    }
}
