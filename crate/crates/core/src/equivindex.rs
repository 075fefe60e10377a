//! Equivariant Cauchy-Riemann index arithmetic over orbifold Riemann
//! surfaces, and the numeric audit of the invariant-curve decomposition.
//!
//! For an equivariant pseudoholomorphic map from a surface with an
//! `H`-action, quotient orbifold of underlying genus `g` and `k` marked
//! points of orders `m_i` with rotation numbers `(m_i1, m_i2)`, the index
//! operator has half-index
//!
//! ```text
//! d = deg / |H| + 2 - 2g - sum_i (m_i1 + m_i2) / m_i,
//! ```
//!
//! where `deg` is the pairing of `c1(TM)` with the image class. Genuine
//! equivariant maps always produce integers, so a non-integral value is
//! reported as an error diagnosing inconsistent data. The dimension of the
//! moduli space of `H`-equivariant complex structures equals that of
//! complex structures on the marked quotient:
//!
//! ```text
//! 0        g = 0, k <= 3        1        g = 1, k = 0
//! k - 3    g = 0, k > 3         k - 1    g = 1, k > 0
//! 3g - 3 + k                    g >= 2,
//! ```
//!
//! and nonemptiness of the moduli space of maps forces `d + dim >= 0`,
//! which under the SL2 condition `m_i1 + m_i2 = m_i` becomes the case
//! inequalities evaluated by [`case_classify`]. Cases (i) and (iii) carry
//! sharper variants (i') and (iii') because the quotient still has a
//! positive-dimensional automorphism group there.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use num_bigint::BigInt;

use crate::{rat_int, Rational};

#[derive(Debug, Error, PartialEq)]
pub enum EquivIndexError {
    #[error("index value {0} is not an integer; the orbifold data is inconsistent")]
    NonIntegralIndex(Rational),
    #[error(
        "marked point {index} has rotation numbers ({m1}, {m2}) with m1 + m2 != m = {m}; \
         the SL2 condition fails"
    )]
    NotSpecialLinear {
        index: usize,
        m: u64,
        m1: u64,
        m2: u64,
    },
    #[error("rotation numbers must satisfy 0 < m1, m2 < m; got m = {m}, m1 = {m1}, m2 = {m2}")]
    RotationOutOfRange { m: u64, m1: u64, m2: u64 },
    #[error("group order |H| must be at least 1")]
    ZeroGroupOrder,
    #[error("index value {0} exceeds the machine integer range")]
    IndexOutOfRange(Rational),
}

/// A marked point of an orbifold Riemann surface: isotropy of order
/// `m >= 2` acting on the tangent space of the image by the pair of
/// rotation numbers `(m1, m2)` with `0 < m1, m2 < m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MarkedPointRaw")]
pub struct MarkedPoint {
    m: u64,
    m1: u64,
    m2: u64,
}

#[derive(Deserialize)]
struct MarkedPointRaw {
    m: u64,
    m1: u64,
    m2: u64,
}

impl TryFrom<MarkedPointRaw> for MarkedPoint {
    type Error = EquivIndexError;

    fn try_from(raw: MarkedPointRaw) -> Result<Self, Self::Error> {
        MarkedPoint::new(raw.m, raw.m1, raw.m2)
    }
}

impl MarkedPoint {
    pub fn new(m: u64, m1: u64, m2: u64) -> Result<Self, EquivIndexError> {
        if m1 == 0 || m2 == 0 || m1 >= m || m2 >= m {
            return Err(EquivIndexError::RotationOutOfRange { m, m1, m2 });
        }
        Ok(MarkedPoint { m, m1, m2 })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn m1(&self) -> u64 {
        self.m1
    }

    pub fn m2(&self) -> u64 {
        self.m2
    }

    /// The SL2 condition `m1 + m2 = m`: the isotropy representation has
    /// determinant 1.
    pub fn is_sl2(&self) -> bool {
        self.m1 + self.m2 == self.m
    }
}

/// Quotient-orbifold data feeding the index formula: `|H|`, the underlying
/// genus of the quotient, the marked points, and the degree pairing
/// `c1(TM) . f_*([Sigma])`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "OrbifoldDataRaw")]
pub struct OrbifoldData {
    h_order: u64,
    quotient_genus: u64,
    marked: Vec<MarkedPoint>,
    degree: i64,
}

#[derive(Deserialize)]
struct OrbifoldDataRaw {
    h_order: u64,
    quotient_genus: u64,
    marked: Vec<MarkedPoint>,
    degree: i64,
}

impl TryFrom<OrbifoldDataRaw> for OrbifoldData {
    type Error = EquivIndexError;

    fn try_from(raw: OrbifoldDataRaw) -> Result<Self, Self::Error> {
        OrbifoldData::new(raw.h_order, raw.quotient_genus, raw.marked, raw.degree)
    }
}

impl OrbifoldData {
    pub fn new(
        h_order: u64,
        quotient_genus: u64,
        marked: Vec<MarkedPoint>,
        degree: i64,
    ) -> Result<Self, EquivIndexError> {
        if h_order == 0 {
            return Err(EquivIndexError::ZeroGroupOrder);
        }
        Ok(OrbifoldData {
            h_order,
            quotient_genus,
            marked,
            degree,
        })
    }

    pub fn h_order(&self) -> u64 {
        self.h_order
    }

    pub fn quotient_genus(&self) -> u64 {
        self.quotient_genus
    }

    pub fn marked(&self) -> &[MarkedPoint] {
        &self.marked
    }

    /// Number of marked points.
    pub fn k(&self) -> usize {
        self.marked.len()
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// `deg / |H|` as an exact rational.
    fn normalized_degree(&self) -> Rational {
        Rational::new(BigInt::from(self.degree), BigInt::from(self.h_order))
    }
}

/// Exact rational evaluation of the half-index
/// `deg/|H| + 2 - 2g - sum (m1 + m2)/m`, returned as an integer.
///
/// A non-integral value cannot come from a genuine equivariant map and is
/// reported as [`EquivIndexError::NonIntegralIndex`] carrying the exact
/// rational.
pub fn cr_index(d: &OrbifoldData) -> Result<i64, EquivIndexError> {
    let mut value =
        d.normalized_degree() + rat_int(2) - rat_int(2) * rat_int(d.quotient_genus as i64);
    for mp in &d.marked {
        value -= Rational::new(BigInt::from(mp.m1 + mp.m2), BigInt::from(mp.m));
    }
    if !value.is_integer() {
        return Err(EquivIndexError::NonIntegralIndex(value));
    }
    i64::try_from(value.to_integer()).map_err(|_| EquivIndexError::IndexOutOfRange(value))
}

/// Complex dimension of the moduli space of complex structures on a
/// genus-`g` surface with `k` marked points (equivalently, of equivariant
/// complex structures upstairs).
pub fn moduli_dim(quotient_genus: u64, k: u64) -> u64 {
    match (quotient_genus, k) {
        (0, 0..=3) => 0,
        (0, _) => k - 3,
        (1, 0) => 1,
        (1, _) => k - 1,
        (g, _) => 3 * g - 3 + k,
    }
}

/// The seven case labels of the nonemptiness inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseId {
    I,
    IPrime,
    Ii,
    Iii,
    IiiPrime,
    Iv,
    V,
}

impl CaseId {
    pub fn label(self) -> &'static str {
        match self {
            CaseId::I => "(i)",
            CaseId::IPrime => "(i')",
            CaseId::Ii => "(ii)",
            CaseId::Iii => "(iii)",
            CaseId::IiiPrime => "(iii')",
            CaseId::Iv => "(iv)",
            CaseId::V => "(v)",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One evaluated inequality: its left-hand side and whether `lhs >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseEvaluation {
    pub case: CaseId,
    pub lhs: Rational,
    pub satisfied: bool,
}

/// Classification outcome: the base inequality for the `(g, k)` cell, plus
/// the sharper primed inequality where one exists. The primed inequality
/// governs the verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseReport {
    pub base: CaseEvaluation,
    pub sharpened: Option<CaseEvaluation>,
}

impl CaseReport {
    /// The evaluation that decides the verdict.
    pub fn governing(&self) -> &CaseEvaluation {
        self.sharpened.as_ref().unwrap_or(&self.base)
    }

    pub fn satisfied(&self) -> bool {
        self.governing().satisfied
    }
}

fn evaluate(case: CaseId, lhs: Rational) -> CaseEvaluation {
    let satisfied = lhs >= Rational::from_integer(BigInt::from(0));
    CaseEvaluation {
        case,
        lhs,
        satisfied,
    }
}

/// Identify which case inequality applies to the orbifold datum from
/// `(g, k)`, evaluate its left-hand side exactly, and report the verdict.
///
/// Requires every marked point to satisfy the SL2 condition
/// `m1 + m2 = m`, under which each marked-point term of the index formula
/// collapses to 1; violations are rejected with the offending point.
pub fn case_classify(d: &OrbifoldData) -> Result<CaseReport, EquivIndexError> {
    for (index, mp) in d.marked.iter().enumerate() {
        if !mp.is_sl2() {
            return Err(EquivIndexError::NotSpecialLinear {
                index,
                m: mp.m,
                m1: mp.m1,
                m2: mp.m2,
            });
        }
    }
    let x = d.normalized_degree();
    let g = d.quotient_genus;
    let k = d.k() as i64;

    let report = match (g, k) {
        (0, 0..=3) => CaseReport {
            base: evaluate(CaseId::I, &x + rat_int(2 - k)),
            sharpened: Some(evaluate(CaseId::IPrime, &x - rat_int(1))),
        },
        (0, _) => CaseReport {
            base: evaluate(CaseId::Ii, &x - rat_int(1)),
            sharpened: None,
        },
        (1, 0) => CaseReport {
            base: evaluate(CaseId::Iii, &x + rat_int(1)),
            sharpened: Some(evaluate(CaseId::IiiPrime, x.clone())),
        },
        (1, _) => CaseReport {
            base: evaluate(CaseId::Iv, &x - rat_int(1)),
            sharpened: None,
        },
        (g, _) => CaseReport {
            base: evaluate(CaseId::V, &x + rat_int(g as i64 - 1)),
            sharpened: None,
        },
    };
    Ok(report)
}

/// Verdict of the `c1(TM) . C <= 0` constraint for a candidate curve on a
/// minimal surface, given `C^2` and `K . C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CanonicalDegreeReport {
    pub square: i64,
    pub k_dot: i64,
    pub minimal: bool,
    /// `K . C >= 0`, equivalently `c1(TM) . C <= 0`.
    pub constraint_holds: bool,
    /// Genus forced by adjunction, `(C^2 + K.C)/2 + 1`, when integral.
    pub implied_genus: Option<i64>,
    /// Violation through the embedded (-1)-sphere pattern, which is
    /// impossible on a minimal surface.
    pub minimality_contradiction: bool,
}

/// Check `K . C >= 0` for a candidate curve. When the constraint fails on
/// a minimal surface with the (-1)-sphere signature `C^2 = K.C = -1`
/// (adjunction genus 0), the report flags the minimality contradiction.
pub fn canonical_degree_check(square: i64, k_dot: i64, minimal: bool) -> CanonicalDegreeReport {
    let constraint_holds = k_dot >= 0;
    let sum = square + k_dot;
    let implied_genus = (sum % 2 == 0).then_some(sum / 2 + 1);
    let minimality_contradiction = minimal && !constraint_holds && square == -1 && k_dot == -1;
    CanonicalDegreeReport {
        square,
        k_dot,
        minimal,
        constraint_holds,
        implied_genus,
        minimality_contradiction,
    }
}

/// One irreducible piece of the invariant-curve decomposition: an embedded
/// curve `C` of the given genus with self-intersection `C^2`, appearing
/// with a positive multiplicity, invariant under a stabilizer of the given
/// order, and pairing `K . C` with the canonical class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveDatum {
    pub genus: u64,
    pub square: i64,
    pub multiplicity: u64,
    pub stabilizer_order: u64,
    pub k_dot: i64,
}

/// The individual conditions audited by [`decomposition_audit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditCheckKind {
    /// Positive-square curves appear with multiplicity 1.
    MultiplicityOne,
    /// Adjunction equality `2(genus - 1) = C^2 + K . C`.
    Adjunction,
    /// `K . C = C^2` for positive-square curves.
    KdotEqualsSquare,
    /// `|G|` divides `genus - 1` for positive-square curves.
    GenusDivisibility,
    /// `sum_i n_i^2 C_i^2 = c1^2`.
    SumSquares,
    /// `sum over positive-square curves of C_i^2 = c1^2` (zero-square
    /// curves contribute nothing); applies when no square is negative.
    SumPositiveSquares,
}

impl AuditCheckKind {
    pub fn key(self) -> &'static str {
        match self {
            AuditCheckKind::MultiplicityOne => "multiplicity_one",
            AuditCheckKind::Adjunction => "adjunction",
            AuditCheckKind::KdotEqualsSquare => "k_dot_equals_square",
            AuditCheckKind::GenusDivisibility => "genus_divisibility",
            AuditCheckKind::SumSquares => "sum_squares",
            AuditCheckKind::SumPositiveSquares => "sum_positive_squares",
        }
    }
}

impl fmt::Display for AuditCheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditCheck {
    pub kind: AuditCheckKind,
    /// Index of the curve the check concerns; `None` for global checks.
    pub curve: Option<usize>,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub passed: bool,
    pub checks: Vec<AuditCheck>,
}

impl AuditReport {
    pub fn failures(&self) -> impl Iterator<Item = &AuditCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn failed_kinds(&self) -> Vec<AuditCheckKind> {
        self.failures().map(|c| c.kind).collect()
    }
}

/// Audit a curve list against the numeric conclusions of the
/// decomposition: per positive-square curve, multiplicity one, adjunction,
/// `K . C = C^2`, and `|G| | genus - 1`; adjunction for every other curve;
/// and the two global sum identities. Failures are report entries, never
/// errors.
pub fn decomposition_audit(c1sq: i64, group_order: u64, curves: &[CurveDatum]) -> AuditReport {
    let mut checks = Vec::new();
    let mut weighted_sum = BigInt::from(0);
    let mut positive_sum = BigInt::from(0);
    let mut any_negative = false;

    for (i, c) in curves.iter().enumerate() {
        let genus_minus_1 = i128::from(c.genus) - 1;
        let adj_lhs = 2 * genus_minus_1;
        let adj_rhs = i128::from(c.square) + i128::from(c.k_dot);
        checks.push(AuditCheck {
            kind: AuditCheckKind::Adjunction,
            curve: Some(i),
            passed: adj_lhs == adj_rhs,
            detail: format!("2(genus - 1) = {adj_lhs} vs C^2 + K.C = {adj_rhs}"),
        });

        if c.square > 0 {
            checks.push(AuditCheck {
                kind: AuditCheckKind::MultiplicityOne,
                curve: Some(i),
                passed: c.multiplicity == 1,
                detail: format!(
                    "C^2 = {} > 0 requires n = 1, got n = {}",
                    c.square, c.multiplicity
                ),
            });
            checks.push(AuditCheck {
                kind: AuditCheckKind::KdotEqualsSquare,
                curve: Some(i),
                passed: c.k_dot == c.square,
                detail: format!("K.C = {} vs C^2 = {}", c.k_dot, c.square),
            });
            let divisible = genus_minus_1.rem_euclid(i128::from(group_order)) == 0;
            checks.push(AuditCheck {
                kind: AuditCheckKind::GenusDivisibility,
                curve: Some(i),
                passed: divisible,
                detail: format!("genus - 1 = {genus_minus_1} mod |G| = {group_order}"),
            });
            positive_sum += BigInt::from(c.square);
        }
        if c.square < 0 {
            any_negative = true;
        }
        weighted_sum += BigInt::from(c.multiplicity) * c.multiplicity * c.square;
    }

    let target = BigInt::from(c1sq);
    checks.push(AuditCheck {
        kind: AuditCheckKind::SumSquares,
        curve: None,
        passed: weighted_sum == target,
        detail: format!("sum n_i^2 C_i^2 = {weighted_sum} vs c1^2 = {c1sq}"),
    });
    if !any_negative {
        checks.push(AuditCheck {
            kind: AuditCheckKind::SumPositiveSquares,
            curve: None,
            passed: positive_sum == target,
            detail: format!("sum of positive C_i^2 = {positive_sum} vs c1^2 = {c1sq}"),
        });
    }

    AuditReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}
