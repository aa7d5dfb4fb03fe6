//! Distances between elections: votewise l^p distances and tournament distances.
//!
//! Finite-p votewise values are reported as p-th powers so that every
//! comparison stays exact. The normalized variant divides the p-th power by
//! the voter count `n`, which makes it homogeneous (`d(kE, kE') = d(E, E')`)
//! for every `p` and matches the Wasserstein cost of the two vote
//! distributions.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::elections::{tournament_matrix, AnonymousProfile, Profile};
use crate::error::{Error, Result};
use crate::rankings::GroundMetric;
use crate::scalar::{powi, Scalar};

/// Largest finite exponent accepted (keeps exact powers of small integers cheap).
pub const MAX_FINITE_EXPONENT: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exponent {
    Finite(u32),
    Infinity,
}

impl Exponent {
    pub fn finite(p: u32) -> Result<Self> {
        if p == 0 || p > MAX_FINITE_EXPONENT {
            return Err(Error::InvalidSpec(format!(
                "exponent must lie in 1..={MAX_FINITE_EXPONENT}, got {p}"
            )));
        }
        Ok(Exponent::Finite(p))
    }

    /// `v^p` for finite p; `v` itself for p = inf.
    pub fn power<S: Scalar>(&self, v: &S) -> S {
        match self {
            Exponent::Finite(p) => powi(v, *p),
            Exponent::Infinity => v.clone(),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinity)
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "inf" | "infinity" | "oo" | "∞" => Ok(Exponent::Infinity),
            _ => {
                let p: u32 = t.parse().map_err(|_| {
                    Error::InvalidSpec(format!(
                        "exponent `{t}`: only positive integers and `inf` are supported"
                    ))
                })?;
                Exponent::finite(p)
            }
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

/// A value that may be `+inf` (elections that cannot be compared, empty
/// consensus classes). `Finite(_) < Infinite` in the derived order.
#[derive(Debug, Clone, PartialEq, PartialOrd)]
pub enum Extended<S> {
    Finite(S),
    Infinite,
}

impl<S: Scalar> Extended<S> {
    pub fn finite(&self) -> Option<&S> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }

    /// Total order for exact scalars; floats fall back to `Equal` on NaN.
    pub fn cmp_total(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }

    /// `"p/q"` or `"inf"`.
    pub fn to_ratio_string(&self) -> String {
        match self {
            Extended::Finite(v) => v.to_ratio_string(),
            Extended::Infinite => "inf".to_string(),
        }
    }
}

impl<S: Scalar> fmt::Display for Extended<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ratio_string())
    }
}

/// A votewise distance: ground metric, exponent, optional division by `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct VotewiseSpec<S> {
    pub ground: GroundMetric<S>,
    pub p: Exponent,
    pub normalized: bool,
}

impl<S: Scalar> VotewiseSpec<S> {
    pub fn new(ground: GroundMetric<S>, p: Exponent, normalized: bool) -> Self {
        VotewiseSpec {
            ground,
            p,
            normalized,
        }
    }

    /// Combines per-voter ground distances into the reported value.
    pub fn aggregate<'a>(&self, parts: impl IntoIterator<Item = &'a S>, n: usize) -> S {
        match self.p {
            Exponent::Infinity => parts
                .into_iter()
                .fold(S::zero(), |acc, v| S::max_of(acc, v.clone())),
            Exponent::Finite(p) => {
                let total = parts.into_iter().fold(S::zero(), |acc, v| acc + powi(v, p));
                if self.normalized {
                    total / S::from_int(n as i64)
                } else {
                    total
                }
            }
        }
    }
}

/// Votewise distance between voter-aligned profiles (p-th power for finite p).
/// Profiles with different voter counts are incomparable and give `Infinite`.
pub fn votewise_distance<S: Scalar>(
    spec: &VotewiseSpec<S>,
    e: &Profile,
    f: &Profile,
) -> Result<Extended<S>> {
    if e.candidates() != f.candidates() {
        return Err(Error::Mismatch(
            "profiles over different candidate sets".into(),
        ));
    }
    spec.ground.validate(e.candidates().len())?;
    if e.voters() != f.voters() {
        return Ok(Extended::Infinite);
    }
    let parts = e
        .ballots()
        .iter()
        .zip(f.ballots())
        .map(|(a, b)| spec.ground.distance(a, b))
        .collect::<Result<Vec<S>>>()?;
    Ok(Extended::Finite(spec.aggregate(&parts, e.voters())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct TournamentSpec {
    pub reduced: bool,
}

/// Entrywise l1 distance between (reduced) tournament matrices.
pub fn tournament_distance(
    spec: TournamentSpec,
    e: &AnonymousProfile,
    f: &AnonymousProfile,
) -> Result<u64> {
    if e.candidates() != f.candidates() {
        return Err(Error::Mismatch(
            "profiles over different candidate sets".into(),
        ));
    }
    let (mut a, mut b) = (tournament_matrix(e), tournament_matrix(f));
    if spec.reduced {
        a = a.reduced();
        b = b.reduced();
    }
    a.l1_distance(&b)
}
