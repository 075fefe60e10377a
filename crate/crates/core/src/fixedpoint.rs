//! Fixed-point binary arithmetic over arbitrary-precision integers.
//!
//! A value is a `BigInt` mantissa `m` at an implicit scale of `2^w`
//! ("`w` fractional bits"), representing `m / 2^w`. All operations round to
//! nearest, so each introduces at most one ulp of error at the working
//! precision. This is the support layer for the signature-defect oracle,
//! which needs `cot(pi k / p)` to a few hundred bits: pi comes from a Machin
//! arctangent series, sine and cosine of the base angle from their Taylor
//! series, and the multiples of the angle from the addition recurrence.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::Rational;

/// Product of two fixed-point values at `frac_bits`, rounded to nearest.
pub fn mul(a: &BigInt, b: &BigInt, frac_bits: u32) -> BigInt {
    shift_round(a * b, frac_bits)
}

/// Quotient of two fixed-point values at `frac_bits`, rounded to nearest.
/// The divisor must be nonzero.
pub fn div(num: &BigInt, den: &BigInt, frac_bits: u32) -> BigInt {
    div_round(&(num << frac_bits), den)
}

/// Integer-rounded division `a / n` (`n` nonzero), i.e. division of a
/// fixed-point value by an exact integer.
pub fn div_round(a: &BigInt, n: &BigInt) -> BigInt {
    debug_assert!(!n.is_zero());
    let (q, r) = num_integer::Integer::div_rem(a, n);
    if &r.abs() * 2 >= n.abs() {
        if (a.sign() == n.sign()) || r.is_zero() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Drop `shift` low bits, rounding to nearest (ties away from zero).
fn shift_round(v: BigInt, shift: u32) -> BigInt {
    if shift == 0 {
        return v;
    }
    let half = BigInt::one() << (shift - 1);
    if v.is_negative() {
        -((-v + half) >> shift)
    } else {
        (v + half) >> shift
    }
}

/// Reduce a mantissa from `from_bits` to `to_bits` fractional bits,
/// rounding to nearest.
pub fn round_to_bits(m: &BigInt, from_bits: u32, to_bits: u32) -> BigInt {
    assert!(to_bits <= from_bits);
    shift_round(m.clone(), from_bits - to_bits)
}

/// The exact rational `m / 2^frac_bits` represented by a mantissa.
pub fn to_rational(m: &BigInt, frac_bits: u32) -> Rational {
    Rational::new(m.clone(), BigInt::one() << frac_bits)
}

/// `arctan(1/x)` as a mantissa at `frac_bits`, by the alternating series
/// `sum_j (-1)^j / ((2j+1) x^(2j+1))`. Truncation stops when the power term
/// underflows; the alternating-series remainder is then below one ulp.
fn atan_recip(x: u64, frac_bits: u32) -> BigInt {
    let x2 = BigInt::from(x) * x;
    let mut power = (BigInt::one() << frac_bits) / x; // 2^w / x^(2j+1)
    let mut sum = power.clone();
    let mut n = 1u64;
    loop {
        power /= &x2;
        if power.is_zero() {
            break;
        }
        n += 2;
        let contribution = &power / n;
        if n % 4 == 1 {
            sum += contribution;
        } else {
            sum -= contribution;
        }
    }
    sum
}

/// pi as a mantissa at `frac_bits`, accurate to within one ulp.
///
/// Machin's formula `pi = 16 arctan(1/5) - 4 arctan(1/239)`, evaluated with
/// 32 internal guard bits so the series and rounding errors vanish into the
/// final rounding.
pub fn pi(frac_bits: u32) -> BigInt {
    let work = frac_bits + 32;
    let v = 16 * atan_recip(5, work) - 4 * atan_recip(239, work);
    round_to_bits(&v, work, frac_bits)
}

/// Sine and cosine of a fixed-point angle with `|theta| <= 2`, by Taylor
/// series. Both results are accurate to a few hundred ulp at `frac_bits`,
/// which callers absorb into their guard bits.
pub fn sin_cos(theta: &BigInt, frac_bits: u32) -> (BigInt, BigInt) {
    let theta_sq = mul(theta, theta, frac_bits);

    let mut sin = theta.clone();
    let mut term = theta.clone();
    let mut j = 0u64;
    while !term.is_zero() {
        j += 1;
        term = mul(&term, &theta_sq, frac_bits) / ((2 * j) * (2 * j + 1));
        if j % 2 == 1 {
            sin -= &term;
        } else {
            sin += &term;
        }
    }

    let one = BigInt::one() << frac_bits;
    let mut cos = one.clone();
    let mut term = one;
    let mut j = 0u64;
    while !term.is_zero() {
        j += 1;
        term = mul(&term, &theta_sq, frac_bits) / ((2 * j - 1) * (2 * j));
        if j % 2 == 1 {
            cos -= &term;
        } else {
            cos += &term;
        }
    }

    (sin, cos)
}
