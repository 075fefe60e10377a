//! Topological bookkeeping on 4-manifolds: Chern-number conversions, the
//! Lefschetz fixed-point lower bound, the G-signature balance equation, and
//! the argument excluding automorphisms of order 4 and 9.
//!
//! For a compact complex surface, `c2` is the topological Euler number,
//! the signature is `(c1^2 - 2 c2) / 3`, and the holomorphic Euler
//! characteristic is `chi(O) = (c1^2 + c2) / 12` (Noether's formula). For a
//! periodic, orientation-preserving self-diffeomorphism with isolated fixed
//! points acting trivially on rational second cohomology, the Lefschetz
//! fixed point theorem counts
//!
//! ```text
//! n = 2 + b_2 - Trace(f*|H^1) - Trace(f*|H^3) >= 2 - 2 b_1 + b_2 = chi(M),
//! ```
//!
//! since each trace is at most the corresponding Betti number. The
//! G-signature theorem for a cyclic action with isolated fixed points reads
//!
//! ```text
//! |G| sign(M/G) = sign(M) + sum_m def_m.
//! ```
//!
//! [`prime_square_exclusion`] chains these together: an automorphism g of
//! order p^2 (p = 2 or 3) acting trivially on H^2 would force
//! `c1^2 >= p^2 c2`, contradicting the Miyaoka-Yau bound `c1^2 <= 3 c2`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::constraints::RuleId;
use crate::defect::{defect_special_linear, DefectValue};
use crate::{rat_int, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GSignatureError {
    #[error("{name} must be positive, got {value}")]
    NotPositive { name: &'static str, value: i64 },
    #[error("{quantity} is not integral: {modulus} does not divide {combination} = {value}")]
    Congruence {
        quantity: &'static str,
        modulus: i64,
        combination: &'static str,
        value: i64,
    },
    #[error("trace on H^{degree} is {trace}, exceeding the Betti bound {betti}")]
    TraceExceedsBetti {
        degree: u8,
        trace: Rational,
        betti: u32,
    },
    #[error("either both traces or neither must be supplied")]
    PartialTraces,
    #[error("Poincare duality requires b1 = b3; got b1 = {b1}, b3 = {b3}")]
    BettiMismatch { b1: u32, b3: u32 },
    #[error("fixed point count {0} is not an integer")]
    NonIntegralCount(Rational),
    #[error("the excluded order must be the square of p = 2 or 3, got p = {p}")]
    SmallPrimeOutOfRange { p: u8 },
    #[error("intermediate value exceeds the machine integer range")]
    Overflow,
}

/// Chern numbers `(c1^2, c2)` of a surface of general type; both are
/// positive there, which the constructor enforces. The divisibility
/// conditions needed for an integral signature and `chi(O)` are checked
/// where those quantities are requested.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfaceInvariants {
    c1sq: i64,
    c2: i64,
}

impl SurfaceInvariants {
    pub fn new(c1sq: i64, c2: i64) -> Result<Self, GSignatureError> {
        if c1sq <= 0 {
            return Err(GSignatureError::NotPositive {
                name: "c1^2",
                value: c1sq,
            });
        }
        if c2 <= 0 {
            return Err(GSignatureError::NotPositive {
                name: "c2",
                value: c2,
            });
        }
        Ok(SurfaceInvariants { c1sq, c2 })
    }

    pub fn c1sq(&self) -> i64 {
        self.c1sq
    }

    pub fn c2(&self) -> i64 {
        self.c2
    }
}

/// Classical invariants derived from `(c1^2, c2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Topology {
    pub euler: i64,
    pub signature: i64,
    pub chi_o: i64,
}

/// Euler number, signature `(c1^2 - 2 c2)/3`, and `chi(O) = (c1^2 + c2)/12`,
/// with each divisibility failure reported as the violated congruence.
pub fn chern_to_topology(s: &SurfaceInvariants) -> Result<Topology, GSignatureError> {
    let c1sq = i128::from(s.c1sq);
    let c2 = i128::from(s.c2);

    let sig_num = c1sq - 2 * c2;
    if sig_num % 3 != 0 {
        return Err(GSignatureError::Congruence {
            quantity: "signature",
            modulus: 3,
            combination: "c1^2 - 2 c2",
            value: sig_num as i64,
        });
    }
    let chi_num = c1sq + c2;
    if chi_num % 12 != 0 {
        return Err(GSignatureError::Congruence {
            quantity: "chi(O)",
            modulus: 12,
            combination: "c1^2 + c2",
            value: chi_num as i64,
        });
    }
    let signature = i64::try_from(sig_num / 3).map_err(|_| GSignatureError::Overflow)?;
    let chi_o = i64::try_from(chi_num / 12).map_err(|_| GSignatureError::Overflow)?;
    Ok(Topology {
        euler: s.c2,
        signature,
        chi_o,
    })
}

/// Betti numbers of a closed oriented 4-manifold, optionally with the
/// traces of an induced action on H^1 and H^3. Traces are bounded in
/// absolute value by the corresponding Betti number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiData {
    b1: u32,
    b2: u32,
    b3: u32,
    trace1: Option<Rational>,
    trace3: Option<Rational>,
}

impl BettiData {
    pub fn new(
        b1: u32,
        b2: u32,
        b3: u32,
        trace1: Option<Rational>,
        trace3: Option<Rational>,
    ) -> Result<Self, GSignatureError> {
        for (degree, trace, betti) in [(1u8, &trace1, b1), (3, &trace3, b3)] {
            if let Some(t) = trace {
                if t.abs() > rat_int(i64::from(betti)) {
                    return Err(GSignatureError::TraceExceedsBetti {
                        degree,
                        trace: t.clone(),
                        betti,
                    });
                }
            }
        }
        if trace1.is_some() != trace3.is_some() {
            return Err(GSignatureError::PartialTraces);
        }
        Ok(BettiData {
            b1,
            b2,
            b3,
            trace1,
            trace3,
        })
    }

    pub fn b1(&self) -> u32 {
        self.b1
    }

    pub fn b2(&self) -> u32 {
        self.b2
    }

    pub fn b3(&self) -> u32 {
        self.b3
    }
}

/// Fixed-point count of a periodic diffeomorphism inducing the identity on
/// H^2. With traces supplied this is the exact Lefschetz count
/// `2 + b2 - tr(H^1) - tr(H^3)`; without them it is the lower bound
/// `chi(M) = 2 - 2 b1 + b2`, which requires `b1 = b3`.
pub fn lefschetz_lower_bound(b: &BettiData) -> Result<i64, GSignatureError> {
    match (&b.trace1, &b.trace3) {
        (Some(t1), Some(t3)) => {
            let n = rat_int(2 + i64::from(b.b2)) - t1 - t3;
            if !n.is_integer() {
                return Err(GSignatureError::NonIntegralCount(n));
            }
            i64::try_from(n.to_integer()).map_err(|_| GSignatureError::Overflow)
        }
        (None, None) => {
            if b.b1 != b.b3 {
                return Err(GSignatureError::BettiMismatch { b1: b.b1, b3: b.b3 });
            }
            Ok(2 - 2 * i64::from(b.b1) + i64::from(b.b2))
        }
        _ => Err(GSignatureError::PartialTraces),
    }
}

/// Residual of the G-signature equation:
/// `|G| sign(M/G) - sign(M) - sum(defects)`. Zero certifies consistency of
/// the supplied data; a nonzero value is itself the diagnostic.
pub fn g_signature_balance(
    group_order: u64,
    sign_quotient: i64,
    sign_total: i64,
    defects: &[DefectValue],
) -> Rational {
    let mut residual =
        Rational::from_integer(BigInt::from(group_order) * sign_quotient) - rat_int(sign_total);
    for d in defects {
        residual -= d.value();
    }
    residual
}

/// Machine-checkable trace of the argument excluding elements of order
/// `p^2` (p = 2 or 3) from the automorphism groups in question.
///
/// Every field is a named intermediate of the derivation: the Lefschetz
/// count of fixed points of `g`, the defect each contributes, the
/// nonnegativity of the `g^p`-orbit defects, and the resulting lower bound
/// on `c1^2` against the Miyaoka-Yau cap.
#[derive(Debug, Clone, PartialEq)]
pub struct ExclusionReport {
    pub p_small: u8,
    /// `p^2`, the order of the hypothetical element `g`.
    pub element_order: i64,
    pub c2: i64,
    /// `|X^g| >= c2`: the Lefschetz lower bound on fixed points of `g`.
    pub fixed_points_lower_bound: i64,
    /// `I_{p^2,-1} = (p^2-1)(p^2-2)/3`, the defect at each fixed point of `g`.
    pub defect_at_element: Rational,
    /// `I_{p,-1}`, the defect type contributed on the fixed set of `g^p`.
    pub defect_at_power: Rational,
    /// The `g^p` defects are nonnegative, so dropping them only weakens the
    /// bound.
    pub power_defects_nonnegative: bool,
    /// Lower bound `c1^2 >= p^2 c2` implied by the G-signature equation.
    pub required_c1sq: i64,
    /// Miyaoka-Yau upper bound `3 c2`.
    pub miyaoka_yau_cap: i64,
    pub contradiction: bool,
    /// The imported rule the derivation contradicts.
    pub rule: RuleId,
}

/// Run the order-`p^2` exclusion for `p_small` in {2, 3} and a surface
/// with Euler number `c2 >= 1`.
///
/// The G-signature equation for the cyclic group generated by `g`, acting
/// trivially on H^2, gives `(p^2-1) sign(X) = sum over X^g + sum over
/// X^(g^p)` of defects. Each fixed point of `g` has local type `q = -1`
/// and contributes `(p^2-1)(p^2-2)/3 >= 0`, there are at least `c2` of
/// them, and the `g^p` terms are nonnegative; with `sign(X) =
/// (c1^2 - 2 c2)/3` this rearranges to `c1^2 >= p^2 c2`, which exceeds the
/// Miyaoka-Yau cap `3 c2` for every `c2 >= 1`.
pub fn prime_square_exclusion(p_small: u8, c2: i64) -> Result<ExclusionReport, GSignatureError> {
    if !(p_small == 2 || p_small == 3) {
        return Err(GSignatureError::SmallPrimeOutOfRange { p: p_small });
    }
    if c2 < 1 {
        return Err(GSignatureError::NotPositive {
            name: "c2",
            value: c2,
        });
    }
    let element_order = i64::from(p_small) * i64::from(p_small);
    let defect_at_element = defect_special_linear(element_order)
        .expect("order >= 4")
        .into_value();
    let defect_at_power = defect_special_linear(i64::from(p_small))
        .expect("order >= 2")
        .into_value();
    let power_defects_nonnegative = defect_at_power >= Rational::zero();
    debug_assert!(power_defects_nonnegative);

    let required_c1sq = element_order
        .checked_mul(c2)
        .ok_or(GSignatureError::Overflow)?;
    let miyaoka_yau_cap = c2.checked_mul(3).ok_or(GSignatureError::Overflow)?;

    Ok(ExclusionReport {
        p_small,
        element_order,
        c2,
        fixed_points_lower_bound: c2,
        defect_at_element,
        defect_at_power,
        power_defects_nonnegative,
        required_c1sq,
        miyaoka_yau_cap,
        contradiction: required_c1sq > miyaoka_yau_cap,
        rule: RuleId::MiyaokaYau,
    })
}
