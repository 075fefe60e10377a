//! The rule table and feasibility engine.
//!
//! A candidate is a pair of surface invariants `(c1^2, c2)` and a group
//! profile for `Aut(X)^o`, the automorphisms acting trivially on rational
//! second cohomology. Every imported theorem lives in one table of named,
//! individually toggleable rules, each carrying its citation:
//!
//! - `miyaoka_yau`: `c1^2 <= 3 c2`.
//! - `peters_dichotomy`: a nontrivial group forces `c1^2 = 2 c2` with an
//!   elementary abelian 2-group, or `c1^2 = 3 c2` with a 3-group of
//!   exponent 3.
//! - `noether_integrality`: `12 | c1^2 + c2`, so that `chi(O)` is an
//!   integer.
//! - `cai_threshold`: `chi(O) >= 31` forces `|G| <= 4`.
//! - `thm_b_divisibility`: `|G|` divides `c1^2`.
//! - `thm_c_bound`: `c1^2 >= max(free genus of G - 1, |G|)`, applied with
//!   the free-genus lower bound, so it is a necessary condition only.
//!
//! A `feasible` verdict therefore means "passes all known obstructions",
//! never that a surface realizing the candidate exists.
//!
//! [`census`] re-derives the two headline bounds mechanically: scanning
//! elementary abelian 2-groups rank by rank caps the rank at 6 in the
//! `c1^2 = 2 c2` case, and scanning 3-group orders caps the order at 243
//! in the `c1^2 = 3 c2` case. Both collapse without `cai_threshold`, which
//! is the point of keeping it toggleable.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::covering::{free_genus_bounds, GroupProfile, GroupStructure};
use crate::gsignature::SurfaceInvariants;
use crate::{rat_int, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstraintError {
    #[error("the trivial group is outside the scope of the rules")]
    TrivialGroup,
    #[error("census case {case} does not match family {family}")]
    CaseFamilyMismatch {
        case: PetersCase,
        family: CensusFamily,
    },
    #[error("max rank must be between 1 and {max}, got {rank}")]
    RankOutOfRange { rank: u32, max: u32 },
}

/// Identifiers of the table rules, in canonical evaluation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RuleId {
    PetersDichotomy,
    NoetherIntegrality,
    MiyaokaYau,
    CaiThreshold,
    ThmBDivisibility,
    ThmCBound,
}

impl RuleId {
    pub const ALL: [RuleId; 6] = [
        RuleId::PetersDichotomy,
        RuleId::NoetherIntegrality,
        RuleId::MiyaokaYau,
        RuleId::CaiThreshold,
        RuleId::ThmBDivisibility,
        RuleId::ThmCBound,
    ];

    pub fn key(self) -> &'static str {
        match self {
            RuleId::PetersDichotomy => "peters_dichotomy",
            RuleId::NoetherIntegrality => "noether_integrality",
            RuleId::MiyaokaYau => "miyaoka_yau",
            RuleId::CaiThreshold => "cai_threshold",
            RuleId::ThmBDivisibility => "thm_b_divisibility",
            RuleId::ThmCBound => "thm_c_bound",
        }
    }

    pub fn from_key(key: &str) -> Option<RuleId> {
        RuleId::ALL.into_iter().find(|r| r.key() == key)
    }

    /// Where the rule comes from.
    pub fn citation(self) -> &'static str {
        match self {
            RuleId::PetersDichotomy => {
                "C.A.M. Peters, On automorphisms of compact Kaehler surfaces (Journees de \
                 geometrie algebrique d'Angers, 1980): nontrivial action trivial on H^2 \
                 forces general type with c1^2 = 2c2 (2-group) or c1^2 = 3c2 (3-group); \
                 exponent 2 resp. 3 by the G-signature argument"
            }
            RuleId::NoetherIntegrality => {
                "M. Noether's formula: chi(O) = (c1^2 + c2)/12 is an integer"
            }
            RuleId::MiyaokaYau => {
                "Y. Miyaoka (Invent. Math. 42, 1977) / S.-T. Yau (PNAS 74, 1977): \
                 c1^2 <= 3 c2 for surfaces of general type"
            }
            RuleId::CaiThreshold => {
                "J.-X. Cai (Tohoku Math. J. 56, 2004, p. 347): chi(O) >= 31 forces \
                 |Aut(X)^o| < 5 when |K_X| is free of base points and fixed components"
            }
            RuleId::ThmBDivisibility => {
                "equivariant curve decomposition (via C.H. Taubes, SW => Gr): c1^2 = \
                 sum(genus(C_i) - 1) over invariant positive-square curves, each term \
                 divisible by |G|"
            }
            RuleId::ThmCBound => {
                "equivariant curve decomposition: an invariant positive-square curve has \
                 genus at least the free genus of G, and c1^2 >= |G|"
            }
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// `chi(O)` threshold above which the imported bound caps the group order.
pub const CAI_CHI_THRESHOLD: i64 = 31;
/// Group-order cap applying above the threshold.
pub const CAI_MAX_ORDER: u64 = 4;

/// The rule table: every rule enabled by default, each individually
/// toggleable. Citations are immutable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleTable {
    disabled: Vec<RuleId>,
}

impl Default for RuleTable {
    fn default() -> Self {
        RuleTable::all_enabled()
    }
}

impl RuleTable {
    pub fn all_enabled() -> Self {
        RuleTable {
            disabled: Vec::new(),
        }
    }

    pub fn disable(&mut self, rule: RuleId) {
        if !self.disabled.contains(&rule) {
            self.disabled.push(rule);
        }
    }

    pub fn enable(&mut self, rule: RuleId) {
        self.disabled.retain(|r| *r != rule);
    }

    pub fn is_enabled(&self, rule: RuleId) -> bool {
        !self.disabled.contains(&rule)
    }
}

/// Outcome of one rule on one candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The rule's hypothesis is not triggered by this candidate.
    Vacuous,
    Disabled,
}

impl CheckStatus {
    pub fn key(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Vacuous => "vacuous",
            CheckStatus::Disabled => "disabled",
        }
    }
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleCheck {
    pub rule: RuleId,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Feasible,
    Infeasible,
}

impl Verdict {
    pub fn key(self) -> &'static str {
        match self {
            Verdict::Feasible => "feasible",
            Verdict::Infeasible => "infeasible",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Feasibility report: the verdict is `Feasible` exactly when no enabled
/// rule fails. The verdict asserts only that the candidate passes all
/// known obstructions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintReport {
    pub verdict: Verdict,
    pub checks: Vec<RuleCheck>,
}

/// The two exceptional geography cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PetersCase {
    TwoC2,
    ThreeC2,
}

impl PetersCase {
    pub fn key(self) -> &'static str {
        match self {
            PetersCase::TwoC2 => "2c2",
            PetersCase::ThreeC2 => "3c2",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        match key {
            "2c2" => Some(PetersCase::TwoC2),
            "3c2" => Some(PetersCase::ThreeC2),
            _ => None,
        }
    }
}

impl fmt::Display for PetersCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

fn detect_case(s: &SurfaceInvariants) -> Option<PetersCase> {
    if s.c1sq() == 2 * s.c2() {
        Some(PetersCase::TwoC2)
    } else if s.c1sq() == 3 * s.c2() {
        Some(PetersCase::ThreeC2)
    } else {
        None
    }
}

/// Structure admissibility of a profile under the exponent constraint of
/// the detected case: exponent 2 (hence elementary abelian) in the `2c2`
/// case, a 3-group of exponent 3 in the `3c2` case. For opaque profiles
/// only consistency of order and generator count can be checked.
fn structure_check(case: PetersCase, g: &GroupProfile) -> (bool, String) {
    let order = g.order();
    match case {
        PetersCase::TwoC2 => match g.structure() {
            GroupStructure::ElementaryAbelian { prime: 2, rank } => {
                (true, format!("elementary abelian 2-group of rank {rank}"))
            }
            GroupStructure::ElementaryAbelian { prime, .. } => (
                false,
                format!("elementary abelian {prime}-group; the 2c2 case requires exponent 2"),
            ),
            GroupStructure::Abelian { invariant_factors } => {
                let exponent = invariant_factors.last().expect("nonempty chain");
                (
                    false,
                    format!("contains an element of order {exponent}; only order 2 is allowed"),
                )
            }
            GroupStructure::Opaque => {
                let rank = order.bits().saturating_sub(1) as u32;
                let pow2 = BigUint::one() << rank;
                if &pow2 != order {
                    (false, format!("order {order} is not a power of 2"))
                } else if g.min_generators() != rank {
                    (
                        false,
                        format!(
                            "an elementary abelian group of order 2^{rank} has rank {rank}, \
                             but the profile declares {} generators",
                            g.min_generators()
                        ),
                    )
                } else {
                    (true, format!("opaque profile consistent with (Z/2)^{rank}"))
                }
            }
        },
        PetersCase::ThreeC2 => {
            if !g.is_p_group(3) {
                return (false, format!("order {order} is not a power of 3"));
            }
            match g.structure() {
                GroupStructure::ElementaryAbelian { rank, .. } => {
                    (true, format!("elementary abelian 3-group of rank {rank}"))
                }
                GroupStructure::Abelian { invariant_factors } => {
                    let exponent = invariant_factors.last().expect("nonempty chain");
                    if exponent == &BigUint::from(3u32) {
                        (true, "elementary abelian 3-group".to_string())
                    } else {
                        (
                            false,
                            format!(
                                "contains an element of order {exponent}; only order 3 is allowed"
                            ),
                        )
                    }
                }
                GroupStructure::Opaque => {
                    let r = g.min_generators();
                    let log3 = {
                        let mut n = order.clone();
                        let three = BigUint::from(3u32);
                        let mut e = 0u32;
                        while n > BigUint::one() {
                            n /= &three;
                            e += 1;
                        }
                        e
                    };
                    if log3 == 1 && r == 1 {
                        (true, "cyclic of order 3".to_string())
                    } else if log3 >= 2 && r == 1 {
                        (
                            false,
                            format!("a cyclic group of order 3^{log3} has an element of order 9"),
                        )
                    } else if r > log3 {
                        (
                            false,
                            format!("a group of order 3^{log3} has at most {log3} generators"),
                        )
                    } else {
                        (
                            true,
                            format!(
                                "opaque exponent-3 profile of order 3^{log3} with {r} generators"
                            ),
                        )
                    }
                }
            }
        }
    }
}

/// Exact `chi(O) = (c1^2 + c2) / 12` as a rational, integral or not.
fn chi_rational(s: &SurfaceInvariants) -> Rational {
    rat_int(s.c1sq() + s.c2()) / rat_int(12)
}

/// Evaluate every enabled rule against a candidate pair; disabled rules
/// are echoed with `Disabled` status. Rules are independent, so the
/// verdict (the conjunction of enabled outcomes) does not depend on the
/// evaluation order. The trivial group is rejected as an input error.
pub fn check_candidate(
    s: &SurfaceInvariants,
    g: &GroupProfile,
    rules: &RuleTable,
) -> Result<ConstraintReport, ConstraintError> {
    if g.order() < &BigUint::from(2u32) {
        return Err(ConstraintError::TrivialGroup);
    }
    let (c1sq, c2) = (s.c1sq(), s.c2());
    let order = g.order();
    let case = detect_case(s);
    let chi = chi_rational(s);

    let mut checks = Vec::with_capacity(RuleId::ALL.len());
    for rule in RuleId::ALL {
        if !rules.is_enabled(rule) {
            checks.push(RuleCheck {
                rule,
                status: CheckStatus::Disabled,
                detail: "disabled by caller".to_string(),
            });
            continue;
        }
        let (status, detail) = match rule {
            RuleId::PetersDichotomy => match case {
                None => (
                    CheckStatus::Fail,
                    format!("c1^2 = {c1sq}, c2 = {c2} matches neither c1^2 = 2 c2 nor c1^2 = 3 c2"),
                ),
                Some(case) => {
                    let (ok, structure_detail) = structure_check(case, g);
                    let status = if ok {
                        CheckStatus::Pass
                    } else {
                        CheckStatus::Fail
                    };
                    (status, format!("case {case}: {structure_detail}"))
                }
            },
            RuleId::NoetherIntegrality => {
                let total = c1sq + c2;
                if total % 12 == 0 {
                    (CheckStatus::Pass, format!("chi(O) = {}", total / 12))
                } else {
                    (
                        CheckStatus::Fail,
                        format!("12 does not divide c1^2 + c2 = {total}"),
                    )
                }
            }
            RuleId::MiyaokaYau => {
                if c1sq <= 3 * c2 {
                    (
                        CheckStatus::Pass,
                        format!("c1^2 = {c1sq} <= 3 c2 = {}", 3 * c2),
                    )
                } else {
                    (
                        CheckStatus::Fail,
                        format!("c1^2 = {c1sq} > 3 c2 = {}", 3 * c2),
                    )
                }
            }
            RuleId::CaiThreshold => {
                if chi < rat_int(CAI_CHI_THRESHOLD) {
                    (
                        CheckStatus::Vacuous,
                        format!("chi(O) = {chi} < {CAI_CHI_THRESHOLD}; threshold not triggered"),
                    )
                } else if order <= &BigUint::from(CAI_MAX_ORDER) {
                    (
                        CheckStatus::Pass,
                        format!("chi(O) = {chi} >= {CAI_CHI_THRESHOLD} and |G| = {order} <= {CAI_MAX_ORDER}"),
                    )
                } else {
                    (
                        CheckStatus::Fail,
                        format!("chi(O) = {chi} >= {CAI_CHI_THRESHOLD} forces |G| <= {CAI_MAX_ORDER}, got {order}"),
                    )
                }
            }
            RuleId::ThmBDivisibility => {
                let c1sq_big = BigUint::from(c1sq as u64);
                if c1sq_big.mod_floor(order).is_zero() {
                    (
                        CheckStatus::Pass,
                        format!("|G| = {order} divides c1^2 = {c1sq}"),
                    )
                } else {
                    (
                        CheckStatus::Fail,
                        format!("|G| = {order} does not divide c1^2 = {c1sq}"),
                    )
                }
            }
            RuleId::ThmCBound => {
                let (free_lower, _) = free_genus_bounds(g).expect("nontrivial group");
                let genus_term = BigInt::from(free_lower) - BigInt::one();
                let required = genus_term.clone().max(BigInt::from(order.clone()));
                if BigInt::from(c1sq) >= required {
                    (
                        CheckStatus::Pass,
                        format!(
                            "c1^2 = {c1sq} >= max(free-genus lower bound - 1 = {genus_term}, |G| = {order}) = {required}"
                        ),
                    )
                } else {
                    (
                        CheckStatus::Fail,
                        format!("c1^2 = {c1sq} < max(free-genus lower bound - 1 = {genus_term}, |G| = {order}) = {required}"),
                    )
                }
            }
        };
        checks.push(RuleCheck {
            rule,
            status,
            detail,
        });
    }

    let verdict = if checks.iter().any(|c| c.status == CheckStatus::Fail) {
        Verdict::Infeasible
    } else {
        Verdict::Feasible
    };
    Ok(ConstraintReport { verdict, checks })
}

/// Group families scanned by the census.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensusFamily {
    /// Elementary abelian 2-groups, rank = scan parameter; the full
    /// free-genus lower bound applies (the generator count is the rank).
    ElementaryAbelianTwo,
    /// 3-groups of exponent 3 and order `3^rank`. Their minimal generator
    /// count is not determined by the order, so only the `c1^2 >= |G|`
    /// part of the genus bound applies.
    ThreeGroup,
}

impl CensusFamily {
    pub fn key(self) -> &'static str {
        match self {
            CensusFamily::ElementaryAbelianTwo => "elem-abelian-2",
            CensusFamily::ThreeGroup => "three-group",
        }
    }

    /// The case this family belongs to.
    pub fn case(self) -> PetersCase {
        match self {
            CensusFamily::ElementaryAbelianTwo => PetersCase::TwoC2,
            CensusFamily::ThreeGroup => PetersCase::ThreeC2,
        }
    }

    fn prime(self) -> u64 {
        match self {
            CensusFamily::ElementaryAbelianTwo => 2,
            CensusFamily::ThreeGroup => 3,
        }
    }

    /// Largest rank whose group order fits in a u64 row.
    fn max_rank(self) -> u32 {
        match self {
            CensusFamily::ElementaryAbelianTwo => 62,
            CensusFamily::ThreeGroup => 40,
        }
    }
}

impl fmt::Display for CensusFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Feasibility of one census row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    /// No enabled rule caps `chi(O)`, so arbitrarily large candidates
    /// pass.
    FeasibleUnbounded,
    /// Candidates exist within the cap; the surviving `c1^2` values.
    Feasible {
        c1sq_values: Vec<i64>,
    },
    Infeasible,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, Feasibility::Infeasible)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRow {
    pub rank: u32,
    pub order: u64,
    pub feasibility: Feasibility,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusTable {
    pub case: PetersCase,
    pub family: CensusFamily,
    pub max_rank: u32,
    pub rows: Vec<CensusRow>,
}

impl CensusTable {
    /// Ranks whose rows are feasible (bounded or not), in order.
    pub fn feasible_ranks(&self) -> Vec<u32> {
        self.rows
            .iter()
            .filter(|r| r.feasibility.is_feasible())
            .map(|r| r.rank)
            .collect()
    }

    /// Largest feasible group order in the table, if any row is feasible.
    pub fn max_feasible_order(&self) -> Option<u64> {
        self.rows
            .iter()
            .filter(|r| r.feasibility.is_feasible())
            .map(|r| r.order)
            .max()
    }
}

/// Profile consistent with a census row, suitable for re-checking rows
/// through [`check_candidate`]: the elementary abelian group itself in the
/// 2-group family, and an opaque exponent-3 profile (two generators beyond
/// the cyclic rank) in the 3-group family.
pub fn witness_profile(family: CensusFamily, rank: u32) -> GroupProfile {
    match family {
        CensusFamily::ElementaryAbelianTwo => {
            GroupProfile::elementary_abelian(2, rank).expect("rank >= 1")
        }
        CensusFamily::ThreeGroup => {
            if rank == 1 {
                GroupProfile::elementary_abelian(3, 1).expect("rank 1")
            } else {
                GroupProfile::opaque(BigUint::from(3u32).pow(rank), 2).expect("order >= 9")
            }
        }
    }
}

/// Scan the family rank by rank and decide, for each rank, whether any
/// `(c1^2, c2)` passes every enabled rule.
///
/// With `cai_threshold` enabled and `|G| >= 5`, `chi(O) <= 30` caps
/// `c1^2` at 240 (`c1^2 = 8 chi` in the 2c2 case) or 270 (`c1^2 = 9 chi`
/// in the 3c2 case), and the scan below the cap applies the enabled rules
/// to every candidate with integral `c2`. Without a cap the row is
/// feasible-unbounded. Rows are computed sequentially in rank order, so
/// output is deterministic.
pub fn census(
    case: PetersCase,
    family: CensusFamily,
    max_rank: u32,
    rules: &RuleTable,
) -> Result<CensusTable, ConstraintError> {
    if family.case() != case {
        return Err(ConstraintError::CaseFamilyMismatch { case, family });
    }
    if !(1..=family.max_rank()).contains(&max_rank) {
        return Err(ConstraintError::RankOutOfRange {
            rank: max_rank,
            max: family.max_rank(),
        });
    }

    let prime = family.prime();
    let (c2_divisor, chi_multiplier) = match case {
        PetersCase::TwoC2 => (2i64, 8i64),
        PetersCase::ThreeC2 => (3i64, 9i64),
    };
    // chi(O) <= 30 under the cap; c1^2 = chi_multiplier * chi.
    let c1sq_cap = chi_multiplier * (CAI_CHI_THRESHOLD - 1);

    let mut rows = Vec::with_capacity(max_rank as usize);
    for rank in 1..=max_rank {
        let order = prime.checked_pow(rank).expect("rank bounded per family");

        let capped = rules.is_enabled(RuleId::CaiThreshold) && order > CAI_MAX_ORDER;
        if !capped {
            let note = if order <= CAI_MAX_ORDER {
                format!("|G| = {order} <= {CAI_MAX_ORDER}: no enabled rule caps chi(O)")
            } else {
                "cai_threshold disabled: no enabled rule caps chi(O)".to_string()
            };
            rows.push(CensusRow {
                rank,
                order,
                feasibility: Feasibility::FeasibleUnbounded,
                note,
            });
            continue;
        }

        // Lower bound required by thm_c for this row.
        let required = match family {
            CensusFamily::ElementaryAbelianTwo => {
                // Free-genus lower bound with r = rank, minus 1.
                let genus_term = (u64::from(rank + 1) / 2 - 1) as i128 * order as i128;
                genus_term.max(order as i128)
            }
            CensusFamily::ThreeGroup => order as i128,
        };

        let mut survivors = Vec::new();
        for c1sq in 1..=c1sq_cap {
            if c1sq % c2_divisor != 0 {
                continue;
            }
            let c2 = c1sq / c2_divisor;
            if rules.is_enabled(RuleId::NoetherIntegrality) && (c1sq + c2) % 12 != 0 {
                continue;
            }
            if rules.is_enabled(RuleId::MiyaokaYau) && c1sq > 3 * c2 {
                continue;
            }
            if rules.is_enabled(RuleId::ThmBDivisibility)
                && !(c1sq as u128).is_multiple_of(order as u128)
            {
                continue;
            }
            if rules.is_enabled(RuleId::ThmCBound) && (c1sq as i128) < required {
                continue;
            }
            // cai_threshold: chi <= 30 for every candidate under the cap.
            survivors.push(c1sq);
        }

        let row = if survivors.is_empty() {
            let note = if rules.is_enabled(RuleId::ThmCBound) && required > c1sq_cap as i128 {
                format!("needs c1^2 >= {required}, but the chi(O) cap allows at most {c1sq_cap}")
            } else {
                format!("no candidate below the c1^2 cap {c1sq_cap} passes the enabled rules")
            };
            CensusRow {
                rank,
                order,
                feasibility: Feasibility::Infeasible,
                note,
            }
        } else {
            CensusRow {
                rank,
                order,
                feasibility: Feasibility::Feasible {
                    c1sq_values: survivors,
                },
                note: format!("chi(O) cap 30 bounds c1^2 by {c1sq_cap}"),
            }
        };
        rows.push(row);
    }

    Ok(CensusTable {
        case,
        family,
        max_rank,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::parse_group_spec;

    fn surface(c1sq: i64, c2: i64) -> SurfaceInvariants {
        SurfaceInvariants::new(c1sq, c2).unwrap()
    }

    fn check(c1sq: i64, c2: i64, spec: &str) -> ConstraintReport {
        let g = parse_group_spec(spec).unwrap();
        check_candidate(&surface(c1sq, c2), &g, &RuleTable::default()).unwrap()
    }

    fn status_of(report: &ConstraintReport, rule: RuleId) -> CheckStatus {
        report
            .checks
            .iter()
            .find(|c| c.rule == rule)
            .map(|c| c.status)
            .unwrap()
    }

    #[test]
    fn feasible_examples() {
        let r = check(16, 8, "C2^2");
        assert_eq!(r.verdict, Verdict::Feasible);
        assert_eq!(status_of(&r, RuleId::CaiThreshold), CheckStatus::Vacuous);
        assert_eq!(status_of(&r, RuleId::PetersDichotomy), CheckStatus::Pass);

        let r = check(9, 3, "C3");
        assert_eq!(r.verdict, Verdict::Feasible);
    }

    #[test]
    fn order_four_element_is_rejected() {
        let r = check(16, 8, "C4");
        assert_eq!(r.verdict, Verdict::Infeasible);
        let peters = r
            .checks
            .iter()
            .find(|c| c.rule == RuleId::PetersDichotomy)
            .unwrap();
        assert_eq!(peters.status, CheckStatus::Fail);
        assert!(peters.detail.contains("order 4"), "{}", peters.detail);
    }

    #[test]
    fn case_mismatch_fails_peters() {
        let r = check(10, 4, "C2");
        assert_eq!(r.verdict, Verdict::Infeasible);
        assert_eq!(status_of(&r, RuleId::PetersDichotomy), CheckStatus::Fail);
    }

    #[test]
    fn exponent_constraints_in_the_3c2_case() {
        // C3xC9 has an element of order 9.
        let r = check(27, 9, "C3xC9");
        assert_eq!(status_of(&r, RuleId::PetersDichotomy), CheckStatus::Fail);

        // C3^3 is fine on structure (27 | 27, 27 >= 27, chi = 3).
        let r = check(27, 9, "C3^3");
        assert_eq!(status_of(&r, RuleId::PetersDichotomy), CheckStatus::Pass);

        // A 2-group in the 3c2 case fails.
        let r = check(27, 9, "C2");
        assert_eq!(status_of(&r, RuleId::PetersDichotomy), CheckStatus::Fail);
    }

    #[test]
    fn opaque_profile_consistency() {
        let rules = RuleTable::default();
        // Claimed 3-generator exponent-3 group of order 27: admissible.
        let g = GroupProfile::opaque(BigUint::from(27u32), 3).unwrap();
        let r = check_candidate(&surface(27, 9), &g, &rules).unwrap();
        assert_eq!(status_of(&r, RuleId::PetersDichotomy), CheckStatus::Pass);

        // A cyclic (1-generator) group of order 27 has an element of
        // order 9.
        let g = GroupProfile::opaque(BigUint::from(27u32), 1).unwrap();
        let r = check_candidate(&surface(27, 9), &g, &rules).unwrap();
        assert_eq!(status_of(&r, RuleId::PetersDichotomy), CheckStatus::Fail);

        // More generators than log_3(|G|) is impossible.
        let g = GroupProfile::opaque(BigUint::from(27u32), 5).unwrap();
        let r = check_candidate(&surface(27, 9), &g, &rules).unwrap();
        assert_eq!(status_of(&r, RuleId::PetersDichotomy), CheckStatus::Fail);

        // Opaque 2-power profile must look elementary abelian.
        let g = GroupProfile::opaque(BigUint::from(64u32), 2).unwrap();
        let r = check_candidate(&surface(16, 8), &g, &rules).unwrap();
        assert_eq!(status_of(&r, RuleId::PetersDichotomy), CheckStatus::Fail);
        let g = GroupProfile::opaque(BigUint::from(64u32), 6).unwrap();
        let r = check_candidate(&surface(128, 64), &g, &rules).unwrap();
        assert_eq!(status_of(&r, RuleId::PetersDichotomy), CheckStatus::Pass);
    }

    #[test]
    fn divisibility_and_genus_bound() {
        // 4 does not divide 18.
        let r = check(18, 9, "C2^2");
        assert_eq!(status_of(&r, RuleId::ThmBDivisibility), CheckStatus::Fail);

        // (Z/2)^6 needs c1^2 >= 128; 64 fails thm_c but passes thm_b.
        let r = check(64, 32, "C2^6");
        assert_eq!(status_of(&r, RuleId::ThmBDivisibility), CheckStatus::Pass);
        assert_eq!(status_of(&r, RuleId::ThmCBound), CheckStatus::Fail);
        assert_eq!(r.verdict, Verdict::Infeasible);

        let r = check(128, 64, "C2^6");
        assert_eq!(status_of(&r, RuleId::ThmCBound), CheckStatus::Pass);
        assert_eq!(r.verdict, Verdict::Feasible);
    }

    #[test]
    fn cai_threshold_triggers_above_chi_31() {
        // chi = (248 + 124) / 12 = 31, |G| = 8.
        let r = check(248, 124, "C2^3");
        assert_eq!(status_of(&r, RuleId::CaiThreshold), CheckStatus::Fail);
        assert_eq!(r.verdict, Verdict::Infeasible);

        // Same surface with |G| = 2 passes (2 <= 4).
        let r = check(248, 124, "C2");
        assert_eq!(status_of(&r, RuleId::CaiThreshold), CheckStatus::Pass);

        // Disabling the rule removes the failure.
        let mut rules = RuleTable::default();
        rules.disable(RuleId::CaiThreshold);
        let g = parse_group_spec("C2^3").unwrap();
        let r = check_candidate(&surface(248, 124), &g, &rules).unwrap();
        assert_eq!(status_of(&r, RuleId::CaiThreshold), CheckStatus::Disabled);
        assert_eq!(r.verdict, Verdict::Feasible);
    }

    #[test]
    fn trivial_group_is_an_input_error() {
        let g = GroupProfile::opaque(BigUint::from(2u32), 1).unwrap();
        assert!(check_candidate(&surface(16, 8), &g, &RuleTable::default()).is_ok());
        // No public constructor builds the trivial profile, so the check
        // is exercised through the census family guard instead.
        assert!(matches!(
            census(
                PetersCase::TwoC2,
                CensusFamily::ThreeGroup,
                3,
                &RuleTable::default()
            ),
            Err(ConstraintError::CaseFamilyMismatch { .. })
        ));
    }

    #[test]
    fn verdict_is_conjunction_of_enabled_checks() {
        let r = check(64, 32, "C2^6");
        let any_fail = r.checks.iter().any(|c| c.status == CheckStatus::Fail);
        assert_eq!(any_fail, r.verdict == Verdict::Infeasible);
    }

    fn default_census(case: PetersCase, family: CensusFamily, max_rank: u32) -> CensusTable {
        census(case, family, max_rank, &RuleTable::default()).unwrap()
    }

    #[test]
    fn census_2c2_reproduces_rank_bound() {
        let table = default_census(PetersCase::TwoC2, CensusFamily::ElementaryAbelianTwo, 10);
        assert_eq!(table.feasible_ranks(), vec![1, 2, 3, 4, 5, 6]);

        // Rank 6 survivors are exactly {128, 192}.
        let row6 = &table.rows[5];
        assert_eq!(
            row6.feasibility,
            Feasibility::Feasible {
                c1sq_values: vec![128, 192]
            }
        );

        // Rank 7 fails because the free-genus term 384 exceeds the cap.
        let row7 = &table.rows[6];
        assert_eq!(row7.feasibility, Feasibility::Infeasible);
        assert!(row7.note.contains("384"), "{}", row7.note);

        // Ranks 1 and 2 are unbounded (|G| <= 4).
        assert_eq!(table.rows[0].feasibility, Feasibility::FeasibleUnbounded);
        assert_eq!(table.rows[1].feasibility, Feasibility::FeasibleUnbounded);
    }

    #[test]
    fn census_3c2_reproduces_order_bound() {
        let table = default_census(PetersCase::ThreeC2, CensusFamily::ThreeGroup, 7);
        assert_eq!(table.max_feasible_order(), Some(243));
        assert_eq!(table.feasible_ranks(), vec![1, 2, 3, 4, 5]);

        // Order 729 fails since c1^2 >= 729 > 270.
        let row6 = &table.rows[5];
        assert_eq!(row6.feasibility, Feasibility::Infeasible);
        assert!(row6.note.contains("729"), "{}", row6.note);

        // Order 243 survives only at c1^2 = 243.
        let row5 = &table.rows[4];
        assert_eq!(
            row5.feasibility,
            Feasibility::Feasible {
                c1sq_values: vec![243]
            }
        );
    }

    #[test]
    fn census_monotone_in_rank() {
        for (case, family) in [
            (PetersCase::TwoC2, CensusFamily::ElementaryAbelianTwo),
            (PetersCase::ThreeC2, CensusFamily::ThreeGroup),
        ] {
            let table = default_census(case, family, 12);
            let mut seen_infeasible_above_4 = false;
            for row in &table.rows {
                if seen_infeasible_above_4 {
                    assert_eq!(
                        row.feasibility,
                        Feasibility::Infeasible,
                        "rank {} regressed",
                        row.rank
                    );
                }
                if row.order > CAI_MAX_ORDER && !row.feasibility.is_feasible() {
                    seen_infeasible_above_4 = true;
                }
            }
        }
    }

    #[test]
    fn census_without_cai_is_unbounded_everywhere() {
        let mut rules = RuleTable::default();
        rules.disable(RuleId::CaiThreshold);
        let table = census(
            PetersCase::TwoC2,
            CensusFamily::ElementaryAbelianTwo,
            9,
            &rules,
        )
        .unwrap();
        for row in &table.rows {
            assert_eq!(
                row.feasibility,
                Feasibility::FeasibleUnbounded,
                "rank {}",
                row.rank
            );
        }
    }

    #[test]
    fn census_survivors_round_trip_through_check_candidate() {
        let rules = RuleTable::default();
        for (case, family, max_rank) in [
            (PetersCase::TwoC2, CensusFamily::ElementaryAbelianTwo, 8),
            (PetersCase::ThreeC2, CensusFamily::ThreeGroup, 6),
        ] {
            let table = census(case, family, max_rank, &rules).unwrap();
            let divisor = match case {
                PetersCase::TwoC2 => 2,
                PetersCase::ThreeC2 => 3,
            };
            for row in &table.rows {
                if let Feasibility::Feasible { c1sq_values } = &row.feasibility {
                    let witness = witness_profile(family, row.rank);
                    for &c1sq in c1sq_values {
                        let s = surface(c1sq, c1sq / divisor);
                        let report = check_candidate(&s, &witness, &rules).unwrap();
                        assert_eq!(
                            report.verdict,
                            Verdict::Feasible,
                            "rank {} c1^2 = {c1sq}: {:?}",
                            row.rank,
                            report.checks
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn census_input_validation() {
        assert!(matches!(
            census(
                PetersCase::TwoC2,
                CensusFamily::ElementaryAbelianTwo,
                0,
                &RuleTable::default()
            ),
            Err(ConstraintError::RankOutOfRange { .. })
        ));
        assert!(matches!(
            census(
                PetersCase::ThreeC2,
                CensusFamily::ThreeGroup,
                41,
                &RuleTable::default()
            ),
            Err(ConstraintError::RankOutOfRange { .. })
        ));
        // The largest admissible ranks still complete.
        assert!(census(
            PetersCase::ThreeC2,
            CensusFamily::ThreeGroup,
            40,
            &RuleTable::default()
        )
        .is_ok());
        assert!(census(
            PetersCase::TwoC2,
            CensusFamily::ElementaryAbelianTwo,
            62,
            &RuleTable::default()
        )
        .is_ok());
    }
}
