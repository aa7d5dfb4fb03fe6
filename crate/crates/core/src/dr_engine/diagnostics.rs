//! Property checks on consensus classes, each failure with a witness.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::consensus::ConsensusSpec;
use crate::elections::{
    all_profiles, composition_count, realize, vote_distribution, AnonymousProfile, SimplexPoint,
};
use crate::error::Result;
use crate::rankings::{all_rankings, CandidateSet, Ranking, SRanking};
use crate::scalar::Scalar;
use crate::transport::next_permutation;

use super::boundary::{chunk_rng, sample_profile, Sampler};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    Neutrality,
    Homogeneity,
    Convexity,
    Separation,
    Consistency,
}

impl Check {
    pub const ALL: [Check; 5] = [
        Check::Neutrality,
        Check::Homogeneity,
        Check::Convexity,
        Check::Separation,
        Check::Consistency,
    ];

    pub fn parse(name: &str) -> Option<Check> {
        Some(match name.trim() {
            "neutrality" => Check::Neutrality,
            "homogeneity" => Check::Homogeneity,
            "convexity" => Check::Convexity,
            "separation" => Check::Separation,
            "consistency" => Check::Consistency,
            _ => return None,
        })
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Check::Neutrality => "neutrality",
            Check::Homogeneity => "homogeneity",
            Check::Convexity => "convexity",
            Check::Separation => "separation",
            Check::Consistency => "consistency",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagnosticBounds {
    /// Largest voter count for class representatives.
    pub n_max: u64,
    /// Largest voter count in the separation schedule (starts at 2).
    pub separation_n_max: u64,
    /// Random profiles added per voter count.
    pub samples: u64,
    pub seed: u64,
    /// Largest number of profiles enumerated per voter count before sampling instead.
    pub enumeration_cap: u128,
}

impl Default for DiagnosticBounds {
    fn default() -> Self {
        DiagnosticBounds {
            n_max: 4,
            separation_n_max: 40,
            samples: 20,
            seed: 1,
            enumeration_cap: 20_000,
        }
    }
}

/// Profiles (and derived data) demonstrating a failed check.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub profiles: Vec<AnonymousProfile>,
    /// Candidate relabeling `c -> permutation[c]` (neutrality).
    pub permutation: Option<Vec<usize>>,
    /// Vote distribution of the combined profile (convexity, consistency).
    pub point: Option<Vec<BigRational>>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub check: Check,
    pub passed: bool,
    pub witness: Option<Witness>,
    /// Separation only: smallest total variation distance between
    /// representatives of different classes.
    pub infimum: Option<BigRational>,
    /// Separation only: running infimum after each voter count.
    pub series: Vec<(u64, BigRational)>,
}

impl CheckResult {
    fn pass(check: Check) -> Self {
        CheckResult {
            check,
            passed: true,
            witness: None,
            infimum: None,
            series: Vec::new(),
        }
    }

    fn fail(check: Check, witness: Witness) -> Self {
        CheckResult {
            check,
            passed: false,
            witness: Some(witness),
            infimum: None,
            series: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsReport {
    pub results: Vec<CheckResult>,
}

impl Witness {
    pub fn to_json(&self) -> Value {
        json!({
            "profiles": self.profiles.iter().map(|e| json!({
                "candidates": e.candidates().names(),
                "counts": e.counts(),
            })).collect::<Vec<_>>(),
            "permutation": self.permutation,
            "point": self.point.as_ref().map(|x| x.iter().map(|v| v.to_ratio_string()).collect::<Vec<_>>()),
            "note": self.note,
        })
    }
}

impl CheckResult {
    pub fn to_json(&self) -> Value {
        json!({
            "check": self.check.to_string(),
            "passed": self.passed,
            "witness": self.witness.as_ref().map(Witness::to_json),
            "infimum": self.infimum.as_ref().map(|v| v.to_ratio_string()),
            "series": self.series.iter().map(|(n, v)| json!([n, v.to_ratio_string()])).collect::<Vec<_>>(),
        })
    }
}

impl DiagnosticsReport {
    pub fn to_json(&self) -> Value {
        json!({ "checks": self.results.iter().map(CheckResult::to_json).collect::<Vec<_>>() })
    }

    pub fn result(&self, check: Check) -> Option<&CheckResult> {
        self.results.iter().find(|r| r.check == check)
    }

    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }
}

/// Profiles with `n` voters: exhaustive when small, otherwise sampled.
fn profiles_with(
    candidates: &CandidateSet,
    n: u64,
    bounds: &DiagnosticBounds,
) -> Result<Vec<AnonymousProfile>> {
    let big_m = all_rankings(candidates.len())?.len();
    if composition_count(n, big_m) <= bounds.enumeration_cap {
        return Ok(all_profiles(candidates, n)?.collect());
    }
    let mut rng = chunk_rng(bounds.seed, n);
    (0..bounds.enumeration_cap.min(2000) as u64)
        .map(|_| sample_profile(candidates, n, Sampler::ImpartialCulture, &mut rng))
        .collect()
}

/// Realizations of the explicitly listed points of a consensus.
fn listed_points<S: Scalar>(k: &ConsensusSpec<S>) -> Vec<&Vec<S>> {
    match k {
        ConsensusSpec::PointSets(p) => p.classes.iter().flat_map(|(_, v)| v).collect(),
        ConsensusSpec::Augmented { base, extra } => {
            let mut out = listed_points(base);
            out.extend(extra.classes.iter().flat_map(|(_, v)| v));
            out
        }
        _ => Vec::new(),
    }
}

struct Representative {
    profile: AnonymousProfile,
    class: SRanking,
}

fn representatives<S: Scalar>(
    k: &ConsensusSpec<S>,
    candidates: &CandidateSet,
    bounds: &DiagnosticBounds,
) -> Result<Vec<Representative>> {
    let mut out = Vec::new();
    for n in 1..=bounds.n_max {
        for e in profiles_with(candidates, n, bounds)? {
            if let Some(class) = k.membership(&e)? {
                out.push(Representative { profile: e, class });
            }
        }
    }
    for coords in listed_points(k) {
        let Ok(x) = SimplexPoint::new(candidates.clone(), coords.clone()) else {
            continue;
        };
        for n in 1..=bounds.n_max.max(2) {
            if let Ok(e) = realize(&x, n) {
                if out.iter().any(|r| r.profile == e) {
                    continue;
                }
                if let Some(class) = k.membership(&e)? {
                    out.push(Representative { profile: e, class });
                }
            }
        }
    }
    Ok(out)
}

fn point_of(e: &AnonymousProfile) -> Vec<BigRational> {
    vote_distribution::<BigRational>(e).coords().to_vec()
}

fn neutrality<S: Scalar>(
    k: &ConsensusSpec<S>,
    candidates: &CandidateSet,
    reps: &[Representative],
    bounds: &DiagnosticBounds,
) -> Result<CheckResult> {
    let m = candidates.len();
    let mut pool: Vec<AnonymousProfile> = reps.iter().map(|r| r.profile.clone()).collect();
    for n in 1..=bounds.n_max.min(3) {
        pool.extend(profiles_with(candidates, n, bounds)?);
    }
    let mut perm: Vec<usize> = (0..m).collect();
    loop {
        for e in &pool {
            let moved = e.relabel(&perm);
            let expected = k.membership(e)?.map(|r| r.relabel(&perm));
            let found = k.membership(&moved)?;
            if expected != found {
                return Ok(CheckResult::fail(
                    Check::Neutrality,
                    Witness {
                        profiles: vec![e.clone(), moved],
                        permutation: Some(perm.clone()),
                        point: None,
                        note: format!(
                            "relabeled outcome {} but membership of relabeled profile is {}",
                            show(&expected, candidates),
                            show(&found, candidates)
                        ),
                    },
                ));
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(CheckResult::pass(Check::Neutrality))
}

fn show(r: &Option<SRanking>, candidates: &CandidateSet) -> String {
    r.as_ref()
        .map(|r| r.display(candidates))
        .unwrap_or_else(|| "none".into())
}

fn homogeneity<S: Scalar>(
    k: &ConsensusSpec<S>,
    candidates: &CandidateSet,
    reps: &[Representative],
    bounds: &DiagnosticBounds,
) -> Result<CheckResult> {
    let mut pool: Vec<AnonymousProfile> = reps.iter().map(|r| r.profile.clone()).collect();
    for n in 1..=bounds.n_max.min(3) {
        pool.extend(profiles_with(candidates, n, bounds)?);
    }
    for e in &pool {
        let base = k.membership(e)?;
        for factor in [2, 3] {
            let scaled = e.scaled(factor);
            let got = k.membership(&scaled)?;
            if got != base {
                return Ok(CheckResult::fail(
                    Check::Homogeneity,
                    Witness {
                        profiles: vec![e.clone(), scaled],
                        permutation: None,
                        point: None,
                        note: format!(
                            "membership {} changes to {} after scaling by {factor}",
                            show(&base, candidates),
                            show(&got, candidates)
                        ),
                    },
                ));
            }
        }
    }
    Ok(CheckResult::pass(Check::Homogeneity))
}

/// Concatenations of same-class pairs must stay in the class. With
/// `equal_sizes` only pairs with the same voter count are combined, so the
/// combined distribution is the midpoint of the two.
fn closure<S: Scalar>(
    check: Check,
    k: &ConsensusSpec<S>,
    candidates: &CandidateSet,
    reps: &[Representative],
    equal_sizes: bool,
) -> Result<CheckResult> {
    for (i, a) in reps.iter().enumerate() {
        for b in &reps[i + 1..] {
            if a.class != b.class {
                continue;
            }
            let same = a.profile.voters() == b.profile.voters();
            if same != equal_sizes {
                continue;
            }
            let joined = a.profile.concat(&b.profile)?;
            let got = k.membership(&joined)?;
            if got.as_ref() != Some(&a.class) {
                return Ok(CheckResult::fail(
                    check,
                    Witness {
                        point: Some(point_of(&joined)),
                        profiles: vec![a.profile.clone(), b.profile.clone(), joined],
                        permutation: None,
                        note: format!(
                            "two profiles in class {} combine to a profile in {}",
                            a.class.display(candidates),
                            show(&got, candidates)
                        ),
                    },
                ));
            }
        }
    }
    Ok(CheckResult::pass(check))
}

/// Balanced profile with `n` voters (the first `n mod M` types get one extra).
fn center_profile(candidates: &CandidateSet, n: u64) -> Result<AnonymousProfile> {
    let big_m = all_rankings(candidates.len())?.len() as u64;
    let counts = (0..big_m)
        .map(|i| n / big_m + u64::from(i < n % big_m))
        .collect();
    AnonymousProfile::new(candidates.clone(), counts)
}

/// Profiles obtained by changing one ballot.
fn one_moves(e: &AnonymousProfile) -> Vec<AnonymousProfile> {
    let counts = e.counts();
    let mut out = Vec::new();
    for from in 0..counts.len() {
        if counts[from] == 0 {
            continue;
        }
        for to in 0..counts.len() {
            if to == from {
                continue;
            }
            let mut c = counts.to_vec();
            c[from] -= 1;
            c[to] += 1;
            out.push(AnonymousProfile::new(e.candidates().clone(), c).expect("same voter count"));
        }
    }
    out
}

/// Twice the total variation distance times `n`, for equal voter counts.
fn l1_counts(a: &AnonymousProfile, b: &AnonymousProfile) -> u64 {
    a.counts()
        .iter()
        .zip(b.counts())
        .map(|(x, y)| x.abs_diff(*y))
        .sum()
}

fn separation<S: Scalar>(
    k: &ConsensusSpec<S>,
    candidates: &CandidateSet,
    bounds: &DiagnosticBounds,
) -> Result<CheckResult> {
    let mut best: Option<(BigRational, AnonymousProfile, AnonymousProfile)> = None;
    let mut series = Vec::new();
    for n in 2..=bounds.separation_n_max.max(2) {
        let center = center_profile(candidates, n)?;
        let mut pool = vec![center.clone()];
        pool.extend(one_moves(&center));
        for t in all_rankings(candidates.len())? {
            pool.push(AnonymousProfile::unanimous(candidates.clone(), t, n)?);
        }
        let mut rng = chunk_rng(bounds.seed, n);
        for _ in 0..bounds.samples {
            pool.push(sample_profile(
                candidates,
                n,
                Sampler::ImpartialCulture,
                &mut rng,
            )?);
        }
        let classified: Vec<(AnonymousProfile, SRanking)> = pool
            .into_iter()
            .filter_map(|e| match k.membership(&e) {
                Ok(Some(c)) => Some(Ok((e, c))),
                Ok(None) => None,
                Err(err) => Some(Err(err)),
            })
            .collect::<Result<_>>()?;
        let mut consider = |a: &AnonymousProfile, b: &AnonymousProfile| {
            let tv = BigRational::new(BigInt::from(l1_counts(a, b)), BigInt::from(2 * n));
            if best.as_ref().is_none_or(|(d, _, _)| &tv < d) {
                best = Some((tv, a.clone(), b.clone()));
            }
        };
        for (i, (a, ca)) in classified.iter().enumerate() {
            for (b, cb) in &classified[i + 1..] {
                if ca != cb {
                    consider(a, b);
                }
            }
            for b in one_moves(a) {
                if let Some(cb) = k.membership(&b)? {
                    if &cb != ca {
                        consider(a, &b);
                    }
                }
            }
        }
        if let Some((d, _, _)) = &best {
            series.push((n, d.clone()));
        }
    }
    let threshold = BigRational::new(
        BigInt::from(2),
        BigInt::from(bounds.separation_n_max.max(2)),
    );
    let (passed, witness, infimum) = match best {
        None => (true, None, None),
        Some((d, a, b)) => {
            let passed = d > threshold;
            let witness = (!passed).then(|| Witness {
                profiles: vec![a, b],
                permutation: None,
                point: None,
                note: format!(
                    "profiles in different classes at total variation distance {}",
                    d.to_ratio_string()
                ),
            });
            (passed, witness, Some(d))
        }
    };
    Ok(CheckResult {
        check: Check::Separation,
        passed,
        witness,
        infimum,
        series,
    })
}

/// Runs the requested checks on a consensus over `m` candidates.
pub fn consensus_diagnostics<S: Scalar>(
    k: &ConsensusSpec<S>,
    checks: &[Check],
    m: usize,
    bounds: &DiagnosticBounds,
) -> Result<DiagnosticsReport> {
    k.validate(m)?;
    let candidates = CandidateSet::alphabetic(m)?;
    let reps = representatives(k, &candidates, bounds)?;
    let mut results = Vec::new();
    for &check in checks {
        results.push(match check {
            Check::Neutrality => neutrality(k, &candidates, &reps, bounds)?,
            Check::Homogeneity => homogeneity(k, &candidates, &reps, bounds)?,
            Check::Convexity => closure(check, k, &candidates, &reps, true)?,
            Check::Consistency => closure(check, k, &candidates, &reps, false)?,
            Check::Separation => separation(k, &candidates, bounds)?,
        });
    }
    Ok(DiagnosticsReport { results })
}

/// The point `(1/2) e_u + (1/2) e_v` for two rankings.
pub fn half_half<S: Scalar>(m: usize, u: &Ranking, v: &Ranking) -> Result<Vec<S>> {
    let big_m = all_rankings(m)?.len();
    let mut x = vec![S::zero(); big_m];
    x[u.lex_index()] = S::from_ratio(1, 2);
    x[v.lex_index()] = x[v.lex_index()].clone() + S::from_ratio(1, 2);
    Ok(x)
}
