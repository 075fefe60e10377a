//! Dedekind sums in exact rational arithmetic.
//!
//! The sawtooth function is
//!
//! ```text
//! ((x)) = x - [x] - 1/2   if x is not an integer,
//! ((x)) = 0               if x is an integer,
//! ```
//!
//! where `[x]` is the greatest integer less than or equal to `x`. The
//! Dedekind sum of coprime integers `q` and `p >= 1` is the defining sum
//!
//! ```text
//! s(q,p) = sum_{k=1}^{p} ((k/p)) ((kq/p)),
//! ```
//!
//! and for `p >= 2` it also satisfies the lattice-point identity
//!
//! ```text
//! 6p * s(q,p) = (p-1)(2pq - q - 3p/2) - 6 f_p(q),
//! f_p(q) = sum_{k=1}^{p-1} k [kq/p].
//! ```
//!
//! Both routes are implemented and must agree exactly; the defining sum is
//! the reference implementation and the identity is validated against it
//! across the whole test range, including negative `q` (which the signature
//! defect computation applies at `q = -1`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::Rational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DedekindError {
    #[error("q = {q} and p = {p} are not coprime (gcd = {gcd})")]
    NotCoprime { q: BigInt, p: BigInt, gcd: BigInt },
    #[error("modulus must be at least {min}, got {p}")]
    ModulusTooSmall { p: BigInt, min: u32 },
    #[error("division by zero")]
    ZeroDivisor,
}

/// Validated argument pair of a Dedekind sum: an integer `q` and a modulus
/// `p >= 1` with `gcd(q, p) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DedekindInput {
    q: BigInt,
    p: BigInt,
}

impl DedekindInput {
    pub fn new(q: impl Into<BigInt>, p: impl Into<BigInt>) -> Result<Self, DedekindError> {
        let q = q.into();
        let p = p.into();
        if p < BigInt::one() {
            return Err(DedekindError::ModulusTooSmall { p, min: 1 });
        }
        let gcd = q.gcd(&p);
        if !gcd.is_one() {
            return Err(DedekindError::NotCoprime { q, p, gcd });
        }
        Ok(DedekindInput { q, p })
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }
}

/// The sawtooth function `((x))`: zero at integers, `x - [x] - 1/2`
/// otherwise. The result always lies in the open interval (-1/2, 1/2).
pub fn sawtooth(x: &Rational) -> Rational {
    if x.is_integer() {
        Rational::zero()
    } else {
        x - x.floor() - Rational::new(BigInt::one(), BigInt::from(2))
    }
}

/// Floored integer division `[a/b]`, rounding toward negative infinity for
/// negative arguments as well.
pub fn floor_div(a: &BigInt, b: &BigInt) -> Result<BigInt, DedekindError> {
    if b.is_zero() {
        return Err(DedekindError::ZeroDivisor);
    }
    Ok(a.div_floor(b))
}

/// The defining sum `s(q,p) = sum_{k=1}^{p} ((k/p)) ((kq/p))`, evaluated
/// exactly.
///
/// For `0 < k < p` the arguments are non-integral (coprimality keeps `kq`
/// off the multiples of `p`), so `((k/p)) = (2k - p) / 2p` and
/// `((kq/p)) = (2j - p) / 2p` with `j = kq mod p`; the `k = p` term is zero
/// by the integer rule. The terms are accumulated over the common
/// denominator `4p^2` and reduced once at the end.
pub fn dedekind_sum_direct(input: &DedekindInput) -> Rational {
    let p = &input.p;
    if p.is_one() {
        // Every term has integral arguments.
        return Rational::zero();
    }
    let q_red = input.q.mod_floor(p);
    let two = BigInt::from(2);

    let mut j = BigInt::zero();
    let mut k = BigInt::one();
    let mut numer = BigInt::zero();
    while &k < p {
        j += &q_red;
        if &j >= p {
            j -= p;
        }
        numer += (&two * &k - p) * (&two * &j - p);
        k += 1;
    }
    Rational::new(numer, 4 * p * p)
}

/// The lattice-point sum `f_p(q) = sum_{k=1}^{p-1} k [kq/p]` for `p >= 2`
/// and `gcd(q, p) = 1`.
pub fn f_p(q: &BigInt, p: &BigInt) -> Result<BigInt, DedekindError> {
    let two = BigInt::from(2);
    if p < &two {
        return Err(DedekindError::ModulusTooSmall {
            p: p.clone(),
            min: 2,
        });
    }
    let gcd = q.gcd(p);
    if !gcd.is_one() {
        return Err(DedekindError::NotCoprime {
            q: q.clone(),
            p: p.clone(),
            gcd,
        });
    }
    let mut acc = BigInt::zero();
    let mut k = BigInt::one();
    while &k < p {
        acc += &k * floor_div(&(&k * q), p)?;
        k += 1;
    }
    Ok(acc)
}

/// `s(q,p)` recovered from the identity `6p s(q,p) = (p-1)(2pq - q - 3p/2)
/// - 6 f_p(q)`, for `p >= 2`.
///
/// Multiplying through by 2 clears the half-integer term:
/// `s(q,p) = ((p-1)(4pq - 2q - 3p) - 12 f_p(q)) / 12p`.
pub fn dedekind_sum_closed(input: &DedekindInput) -> Result<Rational, DedekindError> {
    let (q, p) = (&input.q, &input.p);
    let fp = f_p(q, p)?;
    let numer = (p - 1) * (4 * p * q - 2 * q - 3 * p) - 12 * fp;
    Ok(Rational::new(numer, 12 * p))
}
