//! Free actions of finite groups on Riemann surfaces.
//!
//! A free action of `G` on a surface of genus `m` with quotient of genus
//! `n` satisfies `m - 1 = |G| (n - 1)`. The *free genus* of `G` is the
//! minimal genus of a surface carrying a free `G`-action; writing `r` for
//! the minimal number of generators of `G`, it is pinched between
//!
//! ```text
//! ([(r+1)/2] - 1) |G| + 1   and   (r - 1) |G| + 1.
//! ```
//!
//! Only these two printed bounds are computed; the free genus itself is not
//! (it is unknown in general), so consumers treat the lower bound as a
//! necessary condition only.
//!
//! Group profiles describe a finite group by order, minimal generator
//! count, and structure. Abelian structure is normalized to invariant
//! factors, and products of a single prime with all exponents one are
//! tagged elementary abelian. The textual grammar is a product of cyclic
//! groups: `spec := factor ("x" factor)*`, `factor := "C" n ("^" e)?`, as
//! in `C2^6` or `C3xC9`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoveringError {
    #[error("parse error at position {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("the trivial group is not admitted here")]
    TrivialGroup,
    #[error("group order must be at least 1")]
    OrderZero,
    #[error("{order} does not divide m - 1 = {m_minus_1}")]
    Indivisible { m_minus_1: i64, order: u64 },
    #[error("no free action exists: genus-{quotient_genus} quotient forces negative total genus")]
    NoSuchCovering { quotient_genus: u64 },
    #[error("genus exceeds the machine integer range")]
    Overflow,
    #[error("rank must be at least 1")]
    RankZero,
    #[error("{value} is not prime")]
    NotPrime { value: u64 },
    #[error("opaque profile of order {order} needs a generator count of at least 1")]
    MissingGenerators { order: BigUint },
}

/// Structure tag of a finite group profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupStructure {
    /// `(Z/p)^rank` for a prime `p`.
    ElementaryAbelian { prime: u64, rank: u32 },
    /// Finite abelian group in invariant-factor form `d_1 | d_2 | ... | d_t`.
    Abelian { invariant_factors: Vec<BigUint> },
    /// Structure not carried by the profile; order and generator count are
    /// supplied by the caller.
    Opaque,
}

/// A finite group described by its order, its minimal number of
/// generators, and a structure tag. `min_generators` is zero exactly for
/// the trivial group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupProfile {
    order: BigUint,
    min_generators: u32,
    structure: GroupStructure,
}

/// Largest cyclic factor accepted by the grammar; factorization stays
/// trivial below this.
pub const MAX_CYCLIC_FACTOR: u64 = 1 << 32;

/// Largest repeat exponent accepted by the grammar.
pub const MAX_FACTOR_EXPONENT: u32 = 4096;

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    debug_assert!((2..=MAX_CYCLIC_FACTOR).contains(&n));
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0u32;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn is_prime(n: u64) -> bool {
    (2..=MAX_CYCLIC_FACTOR).contains(&n) && factorize(n) == vec![(n, 1)]
}

impl GroupProfile {
    /// `(Z/p)^rank` for a prime `p <= 2^32` and `rank >= 1`.
    pub fn elementary_abelian(prime: u64, rank: u32) -> Result<Self, CoveringError> {
        if !is_prime(prime) {
            return Err(CoveringError::NotPrime { value: prime });
        }
        if rank == 0 {
            return Err(CoveringError::RankZero);
        }
        Ok(GroupProfile {
            order: BigUint::from(prime).pow(rank),
            min_generators: rank,
            structure: GroupStructure::ElementaryAbelian { prime, rank },
        })
    }

    /// Normalize a direct product of cyclic groups to invariant factors.
    ///
    /// The elementary divisors (prime powers) of all factors are collected
    /// per prime and sorted; the i-th largest across every prime multiply
    /// into the i-th largest invariant factor. Factors equal to 1
    /// contribute nothing; a product of order 1 is rejected.
    pub fn from_cyclic_factors(factors: &[u64]) -> Result<Self, CoveringError> {
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &f in factors {
            if f == 1 {
                continue;
            }
            for (p, e) in factorize(f) {
                by_prime.entry(p).or_default().push(e);
            }
        }
        if by_prime.is_empty() {
            return Err(CoveringError::TrivialGroup);
        }
        let count = by_prime.values().map(Vec::len).max().unwrap();
        for exps in by_prime.values_mut() {
            exps.sort_unstable_by(|a, b| b.cmp(a));
        }

        // Slot 0 collects the largest prime power of every prime, so the
        // slots are divisor-ordered from the top down.
        let mut slots = vec![BigUint::one(); count];
        for (&p, exps) in &by_prime {
            for (i, &e) in exps.iter().enumerate() {
                slots[i] *= BigUint::from(p).pow(e);
            }
        }
        slots.reverse();
        let order = slots.iter().product();
        let min_generators = count as u32;

        let elementary =
            by_prime.len() == 1 && by_prime.values().next().unwrap().iter().all(|&e| e == 1);
        let structure = if elementary {
            let prime = *by_prime.keys().next().unwrap();
            GroupStructure::ElementaryAbelian {
                prime,
                rank: min_generators,
            }
        } else {
            GroupStructure::Abelian {
                invariant_factors: slots,
            }
        };
        Ok(GroupProfile {
            order,
            min_generators,
            structure,
        })
    }

    /// A profile carrying only an order and a caller-supplied minimal
    /// generator count, for groups outside the abelian grammar.
    pub fn opaque(order: BigUint, min_generators: u32) -> Result<Self, CoveringError> {
        if order < BigUint::from(2u32) {
            return Err(CoveringError::TrivialGroup);
        }
        if min_generators == 0 {
            return Err(CoveringError::MissingGenerators { order });
        }
        Ok(GroupProfile {
            order,
            min_generators,
            structure: GroupStructure::Opaque,
        })
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn min_generators(&self) -> u32 {
        self.min_generators
    }

    pub fn structure(&self) -> &GroupStructure {
        &self.structure
    }

    /// The exponent (largest element order), when the structure determines
    /// it.
    pub fn exponent(&self) -> Option<BigUint> {
        match &self.structure {
            GroupStructure::ElementaryAbelian { prime, .. } => Some(BigUint::from(*prime)),
            GroupStructure::Abelian { invariant_factors } => invariant_factors.last().cloned(),
            GroupStructure::Opaque => None,
        }
    }

    /// Whether the order is a power of the prime `p`.
    pub fn is_p_group(&self, p: u64) -> bool {
        let p = BigUint::from(p);
        let mut n = self.order.clone();
        let zero = BigUint::from(0u32);
        while &n % &p == zero {
            n /= &p;
        }
        n.is_one()
    }

    /// Rendering in the cyclic-product grammar, for profiles whose
    /// structure is carried explicitly. Parsing it back yields an equal
    /// profile.
    pub fn canonical_spec(&self) -> Option<String> {
        match &self.structure {
            GroupStructure::ElementaryAbelian { prime, rank } => Some(if *rank == 1 {
                format!("C{prime}")
            } else {
                format!("C{prime}^{rank}")
            }),
            GroupStructure::Abelian { invariant_factors } => {
                let mut runs: Vec<(BigUint, u32)> = Vec::new();
                for d in invariant_factors {
                    match runs.last_mut() {
                        Some((value, count)) if value == d => *count += 1,
                        _ => runs.push((d.clone(), 1)),
                    }
                }
                Some(
                    runs.iter()
                        .map(|(value, count)| {
                            if *count == 1 {
                                format!("C{value}")
                            } else {
                                format!("C{value}^{count}")
                            }
                        })
                        .collect::<Vec<_>>()
                        .join("x"),
                )
            }
            GroupStructure::Opaque => None,
        }
    }
}

impl fmt::Display for GroupProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.canonical_spec() {
            Some(spec) => write!(f, "{spec}"),
            None => write!(f, "G(|G|={}, r={})", self.order, self.min_generators),
        }
    }
}

/// Parse the cyclic-product grammar: `spec := factor ("x" factor)*`,
/// `factor := "C" n ("^" e)?`, with `n >= 1` (unit factors vanish) and
/// `e >= 1`. Syntax errors carry the byte position; an order-1 product is
/// rejected.
pub fn parse_group_spec(text: &str) -> Result<GroupProfile, CoveringError> {
    let bytes = text.as_bytes();
    let mut pos = 0usize;
    let mut factors: Vec<u64> = Vec::new();

    fn parse_number(
        bytes: &[u8],
        pos: &mut usize,
        what: &str,
        max: u64,
    ) -> Result<u64, CoveringError> {
        let start = *pos;
        let mut value: u64 = 0;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u64::from(bytes[*pos] - b'0')))
                .filter(|&v| v <= max)
                .ok_or(CoveringError::Parse {
                    pos: start,
                    message: format!("{what} exceeds the maximum {max}"),
                })?;
            *pos += 1;
        }
        if *pos == start {
            return Err(CoveringError::Parse {
                pos: start,
                message: format!("expected {what}"),
            });
        }
        Ok(value)
    }

    loop {
        if pos >= bytes.len() || bytes[pos] != b'C' {
            return Err(CoveringError::Parse {
                pos,
                message: "expected 'C'".into(),
            });
        }
        pos += 1;
        let base = parse_number(bytes, &mut pos, "cyclic order", MAX_CYCLIC_FACTOR)?;
        if base == 0 {
            return Err(CoveringError::Parse {
                pos: pos - 1,
                message: "cyclic order must be positive".into(),
            });
        }
        let mut exponent = 1u32;
        if pos < bytes.len() && bytes[pos] == b'^' {
            pos += 1;
            let e = parse_number(
                bytes,
                &mut pos,
                "repeat exponent",
                u64::from(MAX_FACTOR_EXPONENT),
            )?;
            if e == 0 {
                return Err(CoveringError::Parse {
                    pos: pos - 1,
                    message: "repeat exponent must be positive".into(),
                });
            }
            exponent = e as u32;
        }
        factors.extend(std::iter::repeat_n(base, exponent as usize));

        if pos >= bytes.len() {
            break;
        }
        if bytes[pos] != b'x' {
            return Err(CoveringError::Parse {
                pos,
                message: "expected 'x' or end of input".into(),
            });
        }
        pos += 1;
    }

    GroupProfile::from_cyclic_factors(&factors)
}

/// Covering data of a free action: total genus `m`, quotient genus `n`,
/// and group order, bound by `m - 1 = |G| (n - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoveringData {
    pub total_genus: u64,
    pub quotient_genus: u64,
    pub group_order: u64,
}

/// The genus known on input when completing covering data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnownGenus {
    Total(u64),
    Quotient(u64),
}

/// Complete the free-quotient relation `m - 1 = |G| (n - 1)` from either
/// genus. Solving for the quotient genus requires `|G|` to divide `m - 1`;
/// solving for the total genus fails only when it would be negative (a
/// genus-0 quotient under a nontrivial group).
pub fn riemann_hurwitz_free(
    known: KnownGenus,
    group_order: u64,
) -> Result<CoveringData, CoveringError> {
    if group_order == 0 {
        return Err(CoveringError::OrderZero);
    }
    let order = i128::from(group_order);
    match known {
        KnownGenus::Quotient(n) => {
            let m = order * (i128::from(n) - 1) + 1;
            if m < 0 {
                return Err(CoveringError::NoSuchCovering { quotient_genus: n });
            }
            Ok(CoveringData {
                total_genus: u64::try_from(m).map_err(|_| CoveringError::Overflow)?,
                quotient_genus: n,
                group_order,
            })
        }
        KnownGenus::Total(m) => {
            let m_minus_1 = i128::from(m) - 1;
            if m_minus_1.rem_euclid(order) != 0 {
                return Err(CoveringError::Indivisible {
                    m_minus_1: m_minus_1 as i64,
                    order: group_order,
                });
            }
            let n = m_minus_1 / order + 1;
            if n < 0 {
                return Err(CoveringError::NoSuchCovering { quotient_genus: 0 });
            }
            Ok(CoveringData {
                total_genus: m,
                quotient_genus: u64::try_from(n).map_err(|_| CoveringError::Overflow)?,
                group_order,
            })
        }
    }
}

/// The two printed bounds on the free genus of a nontrivial group:
/// `([(r+1)/2] - 1) |G| + 1 <= free genus <= (r - 1) |G| + 1`.
pub fn free_genus_bounds(g: &GroupProfile) -> Result<(BigUint, BigUint), CoveringError> {
    if g.order < BigUint::from(2u32) {
        return Err(CoveringError::TrivialGroup);
    }
    let r = g.min_generators;
    debug_assert!(r >= 1);
    let lower = BigUint::from(r.div_ceil(2) - 1) * &g.order + 1u32;
    let upper = BigUint::from(r - 1) * &g.order + 1u32;
    Ok((lower, upper))
}
