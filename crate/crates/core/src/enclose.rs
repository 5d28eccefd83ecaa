//! Verified rational enclosures of a few transcendental quantities.
//!
//! Series are summed in binary fixed point twice, once rounding every term
//! down and once rounding up, so the true value always lies between the two
//! results. Truncated tails are bounded explicitly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::num::{fmt_decimal, rat, Rational};

/// Closed interval `[lo, hi]` known to contain a real quantity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: Rational,
    pub hi: Rational,
}

impl Enclosure {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Midpoint rounded to `sig` significant digits.
    pub fn to_decimal(&self, sig: usize) -> String {
        fmt_decimal(&self.midpoint(), sig)
    }

    pub fn to_f64(&self) -> f64 {
        crate::num::ratio_to_f64(&self.midpoint())
    }
}

/// Fractional bits needed for roughly `digits` decimal digits plus guard bits.
pub(crate) fn bits_for_digits(digits: usize) -> usize {
    // log2(10) < 3.33
    (digits * 333).div_ceil(100) + 32
}

fn scale(bits: usize) -> BigInt {
    BigInt::one() << bits
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_ceil(b)
}

fn from_fixed(v: BigInt, bits: usize) -> Rational {
    Rational::new(v, scale(bits))
}

/// Bounds on `exp(x)` for `0 <= x <= 8`.
pub fn exp_bounds(x: &Rational, bits: usize) -> Enclosure {
    assert!(!x.is_negative() && *x <= rat(8, 1), "exp_bounds domain is [0, 8]");
    let (a, b) = (x.numer().clone(), x.denom().clone());
    let mut lo_term = scale(bits);
    let mut hi_term = scale(bits);
    let mut lo_sum = lo_term.clone();
    let mut hi_sum = hi_term.clone();
    let two_x = x * rat(2, 1);
    let mut k: u64 = 1;
    loop {
        let kb = &b * BigInt::from(k);
        lo_term = (&lo_term * &a).div_floor(&kb);
        hi_term = ceil_div(&(&hi_term * &a), &kb);
        // once k > 2x + 2, every later ratio x/(j+1) is at most 1/2
        if Rational::from_integer(BigInt::from(k)) > &two_x + rat(2, 1) && hi_term <= BigInt::one() {
            // tail from k on is at most twice its first term
            hi_sum += &hi_term * BigInt::from(2);
            break;
        }
        lo_sum += &lo_term;
        hi_sum += &hi_term;
        k += 1;
    }
    Enclosure::new(from_fixed(lo_sum, bits), from_fixed(hi_sum, bits))
}

/// Bounds on `atanh(u)` for `0 <= u <= 1/2`.
fn atanh_bounds(u: &Rational, bits: usize) -> Enclosure {
    assert!(!u.is_negative() && *u <= rat(1, 2));
    if u.is_zero() {
        return Enclosure::new(Rational::zero(), Rational::zero());
    }
    let (a, b) = (u.numer().clone(), u.denom().clone());
    let (a2, b2) = (&a * &a, &b * &b);
    // fixed-point powers u^(2i+1)
    let mut lo_pow = (scale(bits) * &a).div_floor(&b);
    let mut hi_pow = ceil_div(&(scale(bits) * &a), &b);
    let mut lo_sum = BigInt::zero();
    let mut hi_sum = BigInt::zero();
    let mut i: u64 = 0;
    loop {
        let d = BigInt::from(2 * i + 1);
        lo_sum += lo_pow.div_floor(&d);
        hi_sum += ceil_div(&hi_pow, &d);
        lo_pow = (&lo_pow * &a2).div_floor(&b2);
        hi_pow = ceil_div(&(&hi_pow * &a2), &b2);
        i += 1;
        if hi_pow <= BigInt::one() {
            // remaining terms: sum of u^(2j+1)/(2j+1) <= next power / (1 - u^2) <= 4/3 next power
            hi_sum += &hi_pow * BigInt::from(2);
            break;
        }
    }
    Enclosure::new(from_fixed(lo_sum, bits), from_fixed(hi_sum, bits))
}

/// Bounds on `ln(y)` for a rational `y >= 1`.
pub fn ln_bounds(y: &Rational, bits: usize) -> Enclosure {
    assert!(*y >= Rational::one(), "ln_bounds expects y >= 1");
    let two = rat(2, 1);
    let mut z = y.clone();
    let mut k: u64 = 0;
    while z >= two {
        z /= &two;
        k += 1;
    }
    let u = (&z - Rational::one()) / (&z + Rational::one());
    let frac = atanh_bounds(&u, bits);
    let ln2 = atanh_bounds(&rat(1, 3), bits);
    let kk = Rational::from_integer(BigInt::from(k));
    Enclosure::new(
        &two * (&kk * &ln2.lo + &frac.lo),
        &two * (&kk * &ln2.hi + &frac.hi),
    )
}

const EULER_GAMMA_DIGITS: &str =
    "577215664901532860606512090082402431042159335939923598805767234884867726777664670936947063";

/// Euler-Mascheroni constant, enclosed to about 90 decimal digits.
pub fn euler_gamma() -> Enclosure {
    let den = num_traits::pow(BigInt::from(10), EULER_GAMMA_DIGITS.len());
    let num: BigInt = EULER_GAMMA_DIGITS.parse().expect("digit string");
    let lo = Rational::new(num.clone(), den.clone());
    let hi = Rational::new(num + 1, den);
    Enclosure::new(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::ratio_to_f64;

    #[test]
    fn exp_encloses_float_reference() {
        for (n, d) in [(0, 1), (1, 1), (1, 3), (2, 1), (5, 2), (3, 1), (7, 1)] {
            let x = rat(n, d);
            let e = exp_bounds(&x, 80);
            let reference = (n as f64 / d as f64).exp();
            assert!(ratio_to_f64(&e.lo) <= reference * (1.0 + 1e-15));
            assert!(ratio_to_f64(&e.hi) >= reference * (1.0 - 1e-15));
            assert!(e.width() < rat(1, 1 << 30));
        }
    }

    #[test]
    fn ln_encloses_float_reference() {
        for y in [1i64, 2, 3, 10, 110, 10100, 1001000] {
            let e = ln_bounds(&rat(y, 1), 80);
            let reference = (y as f64).ln();
            assert!(ratio_to_f64(&e.lo) <= reference + 1e-12);
            assert!(ratio_to_f64(&e.hi) >= reference - 1e-12);
            assert!(e.width() < rat(1, 1 << 30));
        }
        let e1 = ln_bounds(&rat(1, 1), 64);
        assert!(e1.contains(&Rational::zero()));
    }

    #[test]
    fn gamma_digits() {
        let g = euler_gamma();
        assert_eq!(g.to_decimal(11), "0.57721566490");
    }
}
