//! The competitive-ratio constant `alpha_m` and the machine load profile.
//!
//! `f_m(alpha) = (alpha-1)(H_{m-1} - H_{k-1}) + k*alpha/m` with
//! `k = ceil((1 - 1/alpha) m)` is piecewise linear and strictly increasing in
//! `alpha`; `alpha_m` is its unique root of `f_m = 1`. All of this is done in
//! exact rational arithmetic. Only [`limit_constant`] and [`cesaro_gap`]
//! leave the rationals, and they return verified enclosures.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::enclose::{bits_for_digits, exp_bounds, ln_bounds, euler_gamma, Enclosure};
use crate::error::{Error, Result};
use crate::num::{ceil_to_int, floor_to_int, fraction_str, int, rat, Rational};

/// Exact `H_k = 1 + 1/2 + ... + 1/k`, with `H_0 = 0`.
pub fn harmonic(k: usize) -> Rational {
    (1..=k).fold(Rational::zero(), |acc, i| acc + rat(1, i as i64))
}

/// Prefix table `H_0..=H_n`, shared when many `m` are solved at once.
#[derive(Debug, Clone)]
pub struct HarmonicTable {
    values: Vec<Rational>,
}

impl HarmonicTable {
    pub fn up_to(n: usize) -> Self {
        let mut values = Vec::with_capacity(n + 1);
        values.push(Rational::zero());
        for i in 1..=n {
            let next = &values[i - 1] + rat(1, i as i64);
            values.push(next);
        }
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `H_k`; panics if the table is too short.
    pub fn get(&self, k: usize) -> &Rational {
        &self.values[k]
    }
}

fn check_m(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("machine count must be >= 2, got {m}")));
    }
    Ok(())
}

/// `ceil((1 - 1/alpha) m)`, the index of the linear piece containing `alpha`.
pub fn piece_of(m: usize, alpha: &Rational) -> usize {
    let k = ceil_to_int(&((alpha - Rational::one()) * int(m as i64) / alpha));
    k.to_usize().expect("piece index fits usize")
}

fn f_on_piece(table: &HarmonicTable, m: usize, k: usize, alpha: &Rational) -> Rational {
    let tail = table.get(m - 1) - table.get(k - 1);
    (alpha - Rational::one()) * tail + int(k as i64) * alpha / int(m as i64)
}

/// Evaluate `f_m(alpha)` exactly.
pub fn f_m(m: usize, alpha: &Rational) -> Result<Rational> {
    let table = HarmonicTable::up_to(m);
    f_m_with(&table, m, alpha)
}

pub fn f_m_with(table: &HarmonicTable, m: usize, alpha: &Rational) -> Result<Rational> {
    check_m(m)?;
    if *alpha <= Rational::one() {
        return Err(Error::InvalidArgument(format!("f_m needs alpha > 1, got {alpha}")));
    }
    let k = piece_of(m, alpha);
    Ok(f_on_piece(table, m, k, alpha))
}

/// Root of the linear equation for piece `k`: `(a-1) D + k a / m = 1`.
fn root_on_piece(table: &HarmonicTable, m: usize, k: usize) -> Rational {
    let d = table.get(m - 1) - table.get(k - 1);
    (Rational::one() + &d) / (d + rat(k as i64, m as i64))
}

/// `alpha_m` by locating the piece with a binary search over breakpoints.
///
/// Piece `k` covers `(m/(m-k+1), m/(m-k)]`; since `f_m` is increasing, the root
/// lies on the first piece whose right breakpoint already reaches 1.
pub fn solve_alpha_value(table: &HarmonicTable, m: usize) -> Result<Rational> {
    check_m(m)?;
    let reaches_one = |k: usize| {
        let right = rat(m as i64, (m - k) as i64);
        f_on_piece(table, m, k, &right) >= Rational::one()
    };
    let (mut lo, mut hi) = (1usize, m - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if reaches_one(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let alpha = root_on_piece(table, m, lo);
    if piece_of(m, &alpha) != lo || f_on_piece(table, m, lo, &alpha) != Rational::one() {
        return Err(Error::InvalidArgument(format!(
            "no consistent piece found for m={m} (internal error)"
        )));
    }
    Ok(alpha)
}

/// `alpha_m` by solving every piece in ascending order and keeping the
/// consistent one. Slower than [`solve_alpha_value`]; checks uniqueness.
pub fn solve_alpha_scan(m: usize) -> Result<Rational> {
    check_m(m)?;
    let table = HarmonicTable::up_to(m);
    let consistent: Vec<Rational> = (1..m)
        .map(|k| (k, root_on_piece(&table, m, k)))
        .filter(|(k, a)| *a > Rational::one() && piece_of(m, a) == *k)
        .map(|(_, a)| a)
        .collect();
    match consistent.as_slice() {
        [alpha] => Ok(alpha.clone()),
        other => Err(Error::InvalidArgument(format!(
            "expected exactly one consistent piece for m={m}, found {}",
            other.len()
        ))),
    }
}

/// `ceil((2 - alpha)/(alpha - 1)^2) + 4`, the per-machine removal cap.
pub fn migration_cap(alpha: &Rational) -> usize {
    let am1 = alpha - Rational::one();
    let q = (int(2) - alpha) / (&am1 * &am1);
    ceil_to_int(&q).to_usize().expect("cap fits usize") + 4
}

/// Everything ALG(alpha_m) needs to know about a machine count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaProfile {
    pub m: usize,
    #[serde(with = "fraction_str")]
    pub alpha: Rational,
    /// `beta[j-1]` is the profile coefficient of machine `j`.
    #[serde(serialize_with = "serialize_fractions")]
    pub beta: Vec<Rational>,
    pub mu: usize,
    /// `floor(m / alpha)`: machines `1..=k_break` follow the harmonic part.
    pub k_break: usize,
}

fn serialize_fractions<S: serde::Serializer>(
    v: &[Rational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(crate::num::fmt_fraction))
}

impl AlphaProfile {
    pub fn from_alpha(m: usize, alpha: Rational) -> Self {
        let k_break = floor_to_int(&(int(m as i64) / &alpha))
            .to_usize()
            .expect("k_break fits usize");
        let am1 = &alpha - Rational::one();
        let beta = (1..=m)
            .map(|j| {
                if j <= k_break {
                    &am1 * rat(m as i64, (m - j) as i64)
                } else {
                    alpha.clone()
                }
            })
            .collect();
        let mu = migration_cap(&alpha);
        Self {
            m,
            alpha,
            beta,
            mu,
            k_break,
        }
    }

    /// Profile coefficient `beta(j)` for a 1-based machine number.
    pub fn beta_of(&self, j: usize) -> &Rational {
        &self.beta[j - 1]
    }

    /// `(1/m) sum_j beta(j)`, which equals `f_m(alpha_m) = 1`.
    pub fn mean_beta(&self) -> Rational {
        self.beta.iter().fold(Rational::zero(), |acc, b| acc + b) / int(self.m as i64)
    }
}

pub fn solve_alpha(m: usize) -> Result<AlphaProfile> {
    let table = HarmonicTable::up_to(m);
    solve_alpha_with(&table, m)
}

pub fn solve_alpha_with(table: &HarmonicTable, m: usize) -> Result<AlphaProfile> {
    let alpha = solve_alpha_value(table, m)?;
    Ok(AlphaProfile::from_alpha(m, alpha))
}

/// `alpha_m` for every `m` in `2..=m_max`, sharing one harmonic table.
pub fn alpha_sequence(m_max: usize) -> Result<Vec<Rational>> {
    let table = HarmonicTable::up_to(m_max);
    (2..=m_max).map(|m| solve_alpha_value(&table, m)).collect()
}

/// Root of `x e + e = e^x` on `[2, 3]`, enclosed to width below
/// `10^-(digits+2)` by bisection with verified signs.
pub fn limit_root(digits: usize) -> Enclosure {
    let target = num_traits::pow(int(10), digits + 3).recip();
    let mut bits = bits_for_digits(digits + 6);
    let (mut lo, mut hi) = (int(2), int(3));
    // alpha = 1 + 1/x, and |d alpha / dx| = 1/x^2 <= 1/4 on [2, 3]; bisect x
    // until its width (hence alpha's) is below the target.
    while &hi - &lo >= target {
        let mid = (&lo + &hi) / int(2);
        let e = exp_bounds(&Rational::one(), bits);
        let ex = exp_bounds(&mid, bits);
        let x1 = &mid + Rational::one();
        let g_lo = &ex.lo - &e.hi * &x1;
        let g_hi = &ex.hi - &e.lo * &x1;
        if g_lo > Rational::zero() {
            hi = mid;
        } else if g_hi < Rational::zero() {
            lo = mid;
        } else {
            // sign undecided at this precision
            bits *= 2;
        }
    }
    Enclosure::new(lo, hi)
}

/// `W_{-1}(-1/e^2) / (1 + W_{-1}(-1/e^2))`, the limit of `alpha_m`, as an
/// enclosure narrower than `10^-(digits+2)`. Use
/// [`Enclosure::to_decimal`] with `digits` to print it.
pub fn limit_constant(digits: usize) -> Enclosure {
    let x = limit_root(digits.max(1));
    Enclosure::new(
        Rational::one() + x.hi.recip(),
        Rational::one() + x.lo.recip(),
    )
}

/// `H_m - ln(m(m+1))/2 - gamma`, enclosed at 50-digit working precision.
pub fn cesaro_gap(m: usize) -> Result<Enclosure> {
    cesaro_gap_with_digits(m, 50)
}

pub fn cesaro_gap_with_digits(m: usize, digits: usize) -> Result<Enclosure> {
    if m < 1 {
        return Err(Error::InvalidArgument("cesaro_gap needs m >= 1".into()));
    }
    if digits > 85 {
        return Err(Error::InvalidArgument(
            "gamma is only stored to 90 digits; ask for at most 85".into(),
        ));
    }
    let bits = bits_for_digits(digits);
    let h = harmonic(m);
    let y = Rational::from_integer(BigInt::from(m) * BigInt::from(m + 1));
    let ln = ln_bounds(&y, bits);
    let gamma = euler_gamma();
    let half = rat(1, 2);
    Ok(Enclosure::new(
        &h - &half * &ln.hi - &gamma.hi,
        &h - &half * &ln.lo - &gamma.lo,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_values() {
        assert_eq!(harmonic(0), Rational::zero());
        assert_eq!(harmonic(1), int(1));
        assert_eq!(harmonic(3), rat(11, 6));
        let t = HarmonicTable::up_to(10);
        assert_eq!(t.get(10), &harmonic(10));
    }

    #[test]
    fn f_m_examples() {
        assert_eq!(f_m(2, &rat(4, 3)).unwrap(), int(1));
        assert_eq!(f_m(3, &rat(15, 11)).unwrap(), int(1));
        assert_eq!(f_m(2, &int(2)).unwrap(), int(2));
        assert!(f_m(2, &int(1)).is_err());
        assert!(f_m(2, &rat(1, 2)).is_err());
        assert!(f_m(1, &int(2)).is_err());
    }

    #[test]
    fn solve_examples() {
        let p2 = solve_alpha(2).unwrap();
        assert_eq!((p2.alpha.clone(), p2.mu), (rat(4, 3), 10));
        let p5 = solve_alpha(5).unwrap();
        assert_eq!((p5.alpha.clone(), p5.mu), (rat(125, 89), 8));
        let p11 = solve_alpha(11).unwrap();
        assert_eq!((p11.alpha.clone(), p11.mu), (rat(58091, 40451), 7));
        assert!(solve_alpha(1).is_err());
    }

    #[test]
    fn profile_shape() {
        let p = solve_alpha(3).unwrap();
        // floor(3 / (15/11)) = floor(33/15) = 2
        assert_eq!(p.k_break, 2);
        assert_eq!(p.beta_of(1), &(rat(4, 11) * rat(3, 2)));
        assert_eq!(p.beta_of(2), &(rat(4, 11) * int(3)));
        assert_eq!(p.beta_of(3), &rat(15, 11));
        assert_eq!(p.mean_beta(), int(1));
    }

    #[test]
    fn scan_agrees_with_bisection() {
        for m in 2..=40 {
            assert_eq!(solve_alpha_scan(m).unwrap(), solve_alpha(m).unwrap().alpha, "m={m}");
        }
    }

    #[test]
    fn limit_constant_digits() {
        let l5 = limit_constant(5);
        assert_eq!(l5.to_decimal(5), "1.4659");
        assert!(l5.width() < num_traits::pow(int(10), 7).recip());
        let l6 = limit_constant(6);
        assert_eq!(l6.to_decimal(6), "1.46594");
        let x = limit_root(6);
        assert_eq!(x.to_decimal(6), "2.14619");
        // the enclosed alpha is 1 + 1/x
        assert!(l6.contains(&(Rational::one() + x.midpoint().recip())));
    }

    #[test]
    fn limit_is_above_alpha_200() {
        let l = limit_constant(6);
        assert!(l.lo > solve_alpha(200).unwrap().alpha);
    }

    #[test]
    fn cesaro_examples() {
        let g1 = cesaro_gap(1).unwrap();
        assert_eq!(g1.to_decimal(4), "0.07621");
        assert!(g1.lo > Rational::zero() && g1.hi < rat(1, 12));
        let g10 = cesaro_gap(10).unwrap();
        assert!(g10.lo > Rational::zero() && g10.hi < rat(1, 660));
        let g100 = cesaro_gap(100).unwrap();
        assert!(g100.lo > Rational::zero() && g100.hi < rat(1, 60600));
        assert!(g1.width() < num_traits::pow(int(10), 45).recip());
    }
}
