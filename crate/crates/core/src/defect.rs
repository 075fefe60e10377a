//! Signature defects of isolated fixed points on 4-manifolds.
//!
//! An isolated fixed point whose isotropy group of order `p` acts on the
//! tangent space by `(z1, z2) -> (mu_p^k z1, mu_p^(kq) z2)`, with `k` and
//! `q` coprime to `p` and `mu_p = exp(2 pi i / p)`, contributes the defect
//!
//! ```text
//! I_{p,q} = sum_k (1 + mu_p^k)(1 + mu_p^(kq)) / ((1 - mu_p^k)(1 - mu_p^(kq)))
//!         = -4p * s(q,p),
//! ```
//!
//! the sum running over the `p - 1` values of `k` with `mu_p^k != 1`
//! (letting `k` reach `p` would put `1 - mu_p^p = 0` in a denominator; the
//! restricted range is the only reading consistent with `-4p s(q,p)`). At
//! `q = -1`, the case forced for automorphisms preserving a nowhere-zero
//! holomorphic 2-form, this specializes to `I_{p,-1} = (p-1)(p-2)/3 >= 0`.
//!
//! [`defect_closed`] and [`defect_special_linear`] are exact; [`defect_direct`]
//! evaluates the root-of-unity sum itself, in the equivalent cotangent form
//! `-sum_k cot(pi k / p) cot(pi k q / p)`, in fixed-point arithmetic of a
//! requested precision. It is a verification oracle only: downstream
//! consumers use the exact routes.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::dedekind::{dedekind_sum_closed, DedekindInput};
use crate::{fixedpoint, Rational};

/// Largest isotropy order accepted by the oracle, which stores a cotangent
/// table of length `p - 1` at the working precision.
pub const MAX_ORACLE_ORDER: i64 = 1 << 20;

/// Smallest accepted oracle precision, in fractional bits.
pub const MIN_ORACLE_BITS: u32 = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DefectError {
    #[error("q = {q} and p = {p} are not coprime")]
    NotCoprime { q: i64, p: i64 },
    #[error("isotropy order must be at least 2, got {p}")]
    OrderTooSmall { p: i64 },
    #[error("oracle precision must be at least {MIN_ORACLE_BITS} fractional bits, got {bits}")]
    PrecisionTooLow { bits: u32 },
    #[error("oracle order {p} exceeds the supported maximum {MAX_ORACLE_ORDER}")]
    OrderTooLargeForOracle { p: i64 },
    #[error("{0} is not a signature defect: three times it is not an integer")]
    NotADefect(Rational),
}

/// An isolated fixed-point datum: isotropy of order `p >= 2` acting on the
/// tangent space by `(z1, z2) -> (mu_p^k z1, mu_p^(kq) z2)`, with `k` and
/// `q` both coprime to `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalRep {
    p: i64,
    k: i64,
    q: i64,
}

impl LocalRep {
    pub fn new(p: i64, k: i64, q: i64) -> Result<Self, DefectError> {
        if p < 2 {
            return Err(DefectError::OrderTooSmall { p });
        }
        if k.gcd(&p) != 1 {
            return Err(DefectError::NotCoprime { q: k, p });
        }
        if q.gcd(&p) != 1 {
            return Err(DefectError::NotCoprime { q, p });
        }
        Ok(LocalRep { p, k, q })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// Whether the tangent representation lands in SL_2(C), i.e. the
    /// determinant `mu_p^(k + kq)` is 1; equivalently `q = -1 (mod p)`.
    pub fn is_special_linear(&self) -> bool {
        (self.q + 1).rem_euclid(self.p) == 0
    }

    /// The signature defect of this fixed point, which depends only on
    /// `(p, q)`.
    pub fn defect(&self) -> DefectValue {
        defect_closed(self.p, self.q).expect("validated on construction")
    }
}

/// An exact signature defect. Three times the value is always an integer,
/// since `6p * s(q,p)` is an integer and `I_{p,q} = -4p * s(q,p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectValue {
    value: Rational,
}

impl DefectValue {
    /// Wrap a rational, enforcing the integrality of `3 * value`.
    pub fn try_new(value: Rational) -> Result<Self, DefectError> {
        if (&value * Rational::from_integer(BigInt::from(3))).is_integer() {
            Ok(DefectValue { value })
        } else {
            Err(DefectError::NotADefect(value))
        }
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn into_value(self) -> Rational {
        self.value
    }
}

impl fmt::Display for DefectValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn check_pq(p: i64, q: i64) -> Result<(), DefectError> {
    if p < 2 {
        return Err(DefectError::OrderTooSmall { p });
    }
    if q.gcd(&p) != 1 {
        return Err(DefectError::NotCoprime { q, p });
    }
    Ok(())
}

/// Exact defect `I_{p,q} = -4p * s(q,p)`. The result depends only on the
/// residue of `q` modulo `p`.
pub fn defect_closed(p: i64, q: i64) -> Result<DefectValue, DefectError> {
    check_pq(p, q)?;
    let input = DedekindInput::new(q, p).expect("checked above");
    let s = dedekind_sum_closed(&input).expect("p >= 2");
    let value = Rational::from_integer(BigInt::from(-4) * p) * s;
    Ok(DefectValue { value })
}

/// The `q = -1` specialization `I_{p,-1} = (p-1)(p-2)/3`, which is
/// nonnegative for every `p >= 2`.
pub fn defect_special_linear(p: i64) -> Result<DefectValue, DefectError> {
    if p < 2 {
        return Err(DefectError::OrderTooSmall { p });
    }
    let numer = BigInt::from(p - 1) * BigInt::from(p - 2);
    Ok(DefectValue {
        value: Rational::new(numer, BigInt::from(3)),
    })
}

/// An approximate real number: `mantissa / 2^frac_bits`, together with a
/// guaranteed bound `|true - reported| <= 2^err_exp`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxReal {
    mantissa: BigInt,
    frac_bits: u32,
    err_exp: i32,
}

impl ApproxReal {
    /// The exact rational value of the stored mantissa.
    pub fn value(&self) -> Rational {
        fixedpoint::to_rational(&self.mantissa, self.frac_bits)
    }

    pub fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    /// Exponent of the guaranteed error bound: the true value lies within
    /// `2^err_exp` of [`Self::value`].
    pub fn err_exp(&self) -> i32 {
        self.err_exp
    }

    pub fn error_bound(&self) -> Rational {
        if self.err_exp >= 0 {
            Rational::from_integer(BigInt::one() << self.err_exp as u32)
        } else {
            Rational::new(BigInt::one(), BigInt::one() << self.err_exp.unsigned_abs())
        }
    }
}

impl fmt::Display for ApproxReal {
    /// Decimal rendering with as many fractional digits as the precision
    /// supports, capped at 40.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.frac_bits as usize * 30103) / 100_000).clamp(1, 40);
        let neg = self.mantissa.is_negative();
        let abs = self.mantissa.abs();
        let int_part = &abs >> self.frac_bits;
        let mut frac = &abs - (&int_part << self.frac_bits);
        let mut rendered = String::with_capacity(digits);
        for _ in 0..digits {
            frac *= 10;
            let digit = &frac >> self.frac_bits;
            rendered.push(char::from(b'0' + u8::try_from(&digit % 10u8).unwrap()));
            frac -= digit << self.frac_bits;
        }
        while rendered.len() > 1 && rendered.ends_with('0') {
            rendered.pop();
        }
        write!(f, "{}{int_part}.{rendered}", if neg { "-" } else { "" })
    }
}

/// Evaluate the defect sum numerically as `-sum_{k=1}^{p-1} cot(pi k / p) *
/// cot(pi k q / p)` in fixed-point arithmetic of `frac_bits` fractional
/// bits (at least [`MIN_ORACLE_BITS`]).
///
/// The working precision carries `64 + 5 * bitlen(p)` guard bits, which
/// dominates the linear error growth of the angle recurrence, the `~p`
/// magnification from the cotangent poles near `k = 0` and `k = p`, and the
/// final summation; the returned bound `2^-frac_bits` is conservative.
pub fn defect_direct(p: i64, q: i64, frac_bits: u32) -> Result<ApproxReal, DefectError> {
    check_pq(p, q)?;
    if frac_bits < MIN_ORACLE_BITS {
        return Err(DefectError::PrecisionTooLow { bits: frac_bits });
    }
    if p > MAX_ORACLE_ORDER {
        return Err(DefectError::OrderTooLargeForOracle { p });
    }

    let bitlen = 64 - (p as u64).leading_zeros();
    let work = frac_bits + 64 + 5 * bitlen;

    let pi = fixedpoint::pi(work);
    let theta = fixedpoint::div_round(&pi, &BigInt::from(p));
    let (sin_step, cos_step) = fixedpoint::sin_cos(&theta, work);

    // cot(pi k / p) for k = 1 .. p-1, via the angle-addition recurrence.
    let count = (p - 1) as usize;
    let mut cots = Vec::with_capacity(count);
    let mut sin_k = sin_step.clone();
    let mut cos_k = cos_step.clone();
    for _ in 0..count {
        debug_assert!(!sin_k.is_zero());
        cots.push(fixedpoint::div(&cos_k, &sin_k, work));
        let next_sin =
            fixedpoint::mul(&sin_k, &cos_step, work) + fixedpoint::mul(&cos_k, &sin_step, work);
        let next_cos =
            fixedpoint::mul(&cos_k, &cos_step, work) - fixedpoint::mul(&sin_k, &sin_step, work);
        sin_k = next_sin;
        cos_k = next_cos;
    }

    let q_red = q.rem_euclid(p) as usize;
    let p_us = p as usize;
    let mut acc = BigInt::zero();
    let mut j = 0usize;
    for k in 1..p_us {
        j += q_red;
        if j >= p_us {
            j -= p_us;
        }
        acc -= fixedpoint::mul(&cots[k - 1], &cots[j - 1], work);
    }

    Ok(ApproxReal {
        mantissa: fixedpoint::round_to_bits(&acc, work, frac_bits),
        frac_bits,
        err_exp: -(frac_bits as i32),
    })
}
