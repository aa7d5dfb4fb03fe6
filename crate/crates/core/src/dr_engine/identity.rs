use rand::Rng;

use crate::elections::{all_profiles, AnonymousProfile};
use crate::error::{Error, Result};
use crate::rankings::{CandidateSet, SRanking};
use crate::scalar::Scalar;

use super::boundary::{chunk_rng, sample_profile, Sampler};
use super::rule::Rule;

/// Classical rules and the distance-rationalizations they coincide with.
pub const CLASSICAL_IDENTITIES: [(&str, &str); 6] = [
    ("borda", "dr(wunam,kendall,p=1)"),
    ("borda", "dr(wunam,borda-footrule,p=1)"),
    ("plurality", "dr(wunam,hamming,p=1)"),
    ("kemeny", "dr(sunam,kendall,p=1)"),
    ("modal", "dr(sunam,hamming,p=1)"),
    ("copeland", "dr(cond,rt)"),
];

/// First profile on which two rules choose different winner sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub profile: AnonymousProfile,
    pub lhs: Vec<SRanking>,
    pub rhs: Vec<SRanking>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub profiles_checked: u64,
    pub mismatch: Option<Mismatch>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

fn compare<S: Scalar>(
    lhs: &Rule<S>,
    rhs: &Rule<S>,
    e: &AnonymousProfile,
) -> Result<Option<Mismatch>> {
    let a = lhs.outcome(e)?.winner_set();
    let b = rhs.outcome(e)?.winner_set();
    Ok((a != b).then(|| Mismatch {
        profile: e.clone(),
        lhs: a,
        rhs: b,
    }))
}

/// Compares winner sets on every anonymous profile with `1..=n_max` voters.
pub fn check_identity<S: Scalar>(
    lhs: &Rule<S>,
    rhs: &Rule<S>,
    m: usize,
    n_max: u64,
) -> Result<IdentityReport> {
    let candidates = CandidateSet::alphabetic(m)?;
    let mut checked = 0;
    for n in 1..=n_max {
        for e in all_profiles(&candidates, n)? {
            checked += 1;
            if let Some(mm) = compare(lhs, rhs, &e)? {
                return Ok(IdentityReport {
                    profiles_checked: checked,
                    mismatch: Some(mm),
                });
            }
        }
    }
    Ok(IdentityReport {
        profiles_checked: checked,
        mismatch: None,
    })
}

/// Compares winner sets on `samples` impartial-culture profiles with voter
/// counts drawn uniformly from `1..=n_max`.
pub fn check_identity_sampled<S: Scalar>(
    lhs: &Rule<S>,
    rhs: &Rule<S>,
    m: usize,
    n_max: u64,
    samples: u64,
    seed: u64,
) -> Result<IdentityReport> {
    if n_max == 0 {
        return Err(Error::InvalidSpec("n_max must be positive".into()));
    }
    let candidates = CandidateSet::alphabetic(m)?;
    let mut rng = chunk_rng(seed, 0);
    for i in 0..samples {
        let n = rng.random_range(1..=n_max);
        let e = sample_profile(&candidates, n, Sampler::ImpartialCulture, &mut rng)?;
        if let Some(mm) = compare(lhs, rhs, &e)? {
            return Ok(IdentityReport {
                profiles_checked: i + 1,
                mismatch: Some(mm),
            });
        }
    }
    Ok(IdentityReport {
        profiles_checked: samples,
        mismatch: None,
    })
}
