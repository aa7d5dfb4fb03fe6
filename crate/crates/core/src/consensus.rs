//! Consensus classes: membership, votewise minimizers and distances to a class.
//!
//! Unanimity-type consensuses are handled through their generalized-unanimity
//! form: outcome `r` owns a set `S_r` of rankings and a profile belongs to
//! `K_r` when every ballot lies in `S_r`. For these the distance from a
//! profile to `K_r` has the closed form `sum_t counts[t] * delta(t, r)^p`
//! where `delta(t, r)` is the ground distance from `t` to the nearest member
//! of `S_r`.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::elections::{
    composition_count, condorcet_winner, vote_distribution, AnonymousProfile, Compositions,
    SimplexPoint,
};
use crate::error::{Error, Result};
use crate::flow::solve_transport;
use crate::metrics::{Exponent, Extended, VotewiseSpec};
use crate::rankings::{
    all_rankings, distance_matrix, enumerate_s_rankings, CandidateSet, GroundMetric, Ranking,
    SRanking,
};
use crate::scalar::{common_denominator, powi, Scalar};

/// Size limits for the Condorcet brute force.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CondorcetBounds {
    pub max_candidates: usize,
    pub max_voters: u64,
    /// Largest number of target profiles enumerated for non-Hamming grounds.
    pub max_targets: u128,
}

impl Default for CondorcetBounds {
    fn default() -> Self {
        CondorcetBounds {
            max_candidates: 4,
            max_voters: 12,
            max_targets: 200_000,
        }
    }
}

/// Outcome `r` owns the ranking set `S_r` (lexicographic indices, sorted).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuClasses {
    m: usize,
    s: usize,
    classes: Vec<(SRanking, Vec<usize>)>,
}

impl GuClasses {
    /// Validates sizes, nonemptiness and pairwise disjointness.
    pub fn new(m: usize, s: usize, classes: Vec<(SRanking, Vec<usize>)>) -> Result<Self> {
        let big_m = all_rankings(m)?.len();
        let mut seen_out = HashSet::new();
        let mut owner: Vec<Option<usize>> = vec![None; big_m];
        let mut cleaned = Vec::with_capacity(classes.len());
        for (ci, (r, mut set)) in classes.into_iter().enumerate() {
            if r.len() != s {
                return Err(Error::InvalidSpec(format!(
                    "outcome of size {} in a size-{s} consensus",
                    r.len()
                )));
            }
            if !seen_out.insert(r.clone()) {
                return Err(Error::InvalidSpec("outcome listed twice".into()));
            }
            if set.is_empty() {
                return Err(Error::InvalidSpec("empty ranking set".into()));
            }
            set.sort_unstable();
            set.dedup();
            for &t in &set {
                if t >= big_m {
                    return Err(Error::InvalidSpec(format!(
                        "ranking index {t} out of range"
                    )));
                }
                if owner[t].is_some() {
                    return Err(Error::InvalidSpec(format!(
                        "ranking {} belongs to two outcomes",
                        all_rankings(m)?[t]
                    )));
                }
                owner[t] = Some(ci);
            }
            cleaned.push((r, set));
        }
        Ok(GuClasses {
            m,
            s,
            classes: cleaned,
        })
    }

    /// `S_r` = rankings whose top-`s` prefix is `r`.
    pub fn prefix_classes(m: usize, s: usize) -> Result<Self> {
        let rankings = all_rankings(m)?;
        let classes = enumerate_s_rankings(m, s)?
            .into_iter()
            .map(|r| {
                let set = rankings
                    .iter()
                    .enumerate()
                    .filter(|(_, t)| r.is_prefix_of(t))
                    .map(|(i, _)| i)
                    .collect();
                (r, set)
            })
            .collect();
        GuClasses::new(m, s, classes)
    }

    pub fn candidates(&self) -> usize {
        self.m
    }

    pub fn output_size(&self) -> usize {
        self.s
    }

    pub fn classes(&self) -> &[(SRanking, Vec<usize>)] {
        &self.classes
    }

    pub fn class_of(&self, r: &SRanking) -> Option<&[usize]> {
        self.classes
            .iter()
            .find(|(o, _)| o == r)
            .map(|(_, set)| set.as_slice())
    }

    /// Outcome whose set contains ranking index `t`.
    pub fn owner(&self, t: usize) -> Option<&SRanking> {
        self.classes
            .iter()
            .find(|(_, set)| set.binary_search(&t).is_ok())
            .map(|(r, _)| r)
    }
}

/// Parses `{"a>b": ["a>b>c", ...], ...}`.
pub fn parse_gu_json(text: &str, candidates: &CandidateSet) -> Result<GuClasses> {
    let map: BTreeMap<String, Vec<String>> = serde_json::from_str(text)
        .map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))?;
    let mut s = None;
    let mut classes = Vec::new();
    for (key, list) in map {
        let r = candidates.parse_s_ranking(&key)?;
        if *s.get_or_insert(r.len()) != r.len() {
            return Err(Error::InvalidSpec("outcomes of different sizes".into()));
        }
        let set = list
            .iter()
            .map(|t| candidates.parse_ranking(t).map(|t| t.lex_index()))
            .collect::<Result<Vec<_>>>()?;
        classes.push((r, set));
    }
    let s = s.ok_or_else(|| Error::InvalidSpec("no outcomes listed".into()))?;
    GuClasses::new(candidates.len(), s, classes)
}

/// Finite sets of simplex points per outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct PointClasses<S> {
    pub s: usize,
    pub classes: Vec<(SRanking, Vec<Vec<S>>)>,
}

/// A simplex segment; either endpoint may be excluded.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment<S> {
    pub start: Vec<S>,
    pub end: Vec<S>,
    pub start_open: bool,
    pub end_open: bool,
}

impl<S: Scalar> Segment<S> {
    pub fn closed(start: Vec<S>, end: Vec<S>) -> Self {
        Segment {
            start,
            end,
            start_open: false,
            end_open: false,
        }
    }

    /// Parameter `t` with `x = start + t (end - start)`, if `x` is on the segment.
    pub fn parameter_of(&self, x: &[S]) -> Option<S> {
        if x.len() != self.start.len() {
            return None;
        }
        let dir: Vec<S> = self
            .end
            .iter()
            .zip(&self.start)
            .map(|(e, s)| e.clone() - s.clone())
            .collect();
        let pivot = dir.iter().position(|d| !d.close_to(&S::zero()));
        let t = match pivot {
            None => S::zero(),
            Some(k) => (x[k].clone() - self.start[k].clone()) / dir[k].clone(),
        };
        let on_line = x
            .iter()
            .zip(&self.start)
            .zip(&dir)
            .all(|((xi, si), di)| xi.close_to(&(si.clone() + t.clone() * di.clone())));
        if !on_line {
            return None;
        }
        let after_start = if self.start_open {
            t > S::zero()
        } else {
            t >= S::zero()
        };
        let before_end = if self.end_open {
            t < S::one()
        } else {
            t <= S::one()
        };
        (after_start && before_end && (pivot.is_some() || !(self.start_open || self.end_open)))
            .then_some(t)
    }

    pub fn contains(&self, x: &[S]) -> bool {
        self.parameter_of(x).is_some()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentClasses<S> {
    pub s: usize,
    pub classes: Vec<(SRanking, Vec<Segment<S>>)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConsensusSpec<S> {
    /// All voters share the top-`s` prefix; `None` means full rankings.
    StrongUnanimity(Option<usize>),
    /// All voters share the top candidate.
    WeakUnanimity,
    /// A candidate beats every other by a strict majority.
    Condorcet,
    GeneralizedUnanimity(GuClasses),
    PointSets(PointClasses<S>),
    SegmentSets(SegmentClasses<S>),
    /// A base consensus with extra points assigned to outcomes.
    Augmented {
        base: Box<ConsensusSpec<S>>,
        extra: PointClasses<S>,
    },
}

impl<S: Scalar> ConsensusSpec<S> {
    pub fn output_size(&self, m: usize) -> usize {
        match self {
            ConsensusSpec::StrongUnanimity(s) => s.unwrap_or(m),
            ConsensusSpec::WeakUnanimity | ConsensusSpec::Condorcet => 1,
            ConsensusSpec::GeneralizedUnanimity(g) => g.s,
            ConsensusSpec::PointSets(p) => p.s,
            ConsensusSpec::SegmentSets(p) => p.s,
            ConsensusSpec::Augmented { base, .. } => base.output_size(m),
        }
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        all_rankings(m)?;
        match self {
            ConsensusSpec::StrongUnanimity(Some(s)) if *s == 0 || *s > m => Err(
                Error::InvalidSpec(format!("prefix length {s} outside 1..={m}")),
            ),
            ConsensusSpec::GeneralizedUnanimity(g) if g.m != m => Err(Error::Mismatch(format!(
                "consensus over {} candidates used with {m}",
                g.m
            ))),
            ConsensusSpec::Augmented { base, extra } => {
                base.validate(m)?;
                if extra.s != base.output_size(m) {
                    return Err(Error::InvalidSpec(
                        "extra outcomes of the wrong size".into(),
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Generalized-unanimity form, when the consensus has one.
    pub fn gu_classes(&self, m: usize) -> Result<Option<GuClasses>> {
        self.validate(m)?;
        Ok(match self {
            ConsensusSpec::StrongUnanimity(s) => {
                Some(GuClasses::prefix_classes(m, s.unwrap_or(m))?)
            }
            ConsensusSpec::WeakUnanimity => Some(GuClasses::prefix_classes(m, 1)?),
            ConsensusSpec::GeneralizedUnanimity(g) => Some(g.clone()),
            _ => None,
        })
    }

    /// The outcome assigned to a profile, if any.
    pub fn membership(&self, e: &AnonymousProfile) -> Result<Option<SRanking>> {
        let m = e.candidates().len();
        self.validate(m)?;
        match self {
            ConsensusSpec::Condorcet => Ok(condorcet_winner(e).map(SRanking::single)),
            ConsensusSpec::PointSets(_)
            | ConsensusSpec::SegmentSets(_)
            | ConsensusSpec::Augmented { .. } => self.membership_point(&vote_distribution::<S>(e)),
            _ => {
                let gu = self.gu_classes(m)?.expect("unanimity-type consensus");
                Ok(gu_membership(&gu, e.counts().iter().map(|&c| c > 0)))
            }
        }
    }

    /// The outcome assigned to a point of the vote simplex, if any.
    pub fn membership_point(&self, x: &SimplexPoint<S>) -> Result<Option<SRanking>> {
        let m = x.candidates().len();
        self.validate(m)?;
        match self {
            ConsensusSpec::Condorcet => Ok(point_condorcet_winner(x).map(SRanking::single)),
            ConsensusSpec::PointSets(p) => single_owner(
                p.classes
                    .iter()
                    .filter(|(_, pts)| pts.iter().any(|q| same_point(q, x.coords())))
                    .map(|(r, _)| r),
            ),
            ConsensusSpec::SegmentSets(p) => single_owner(
                p.classes
                    .iter()
                    .filter(|(_, segs)| segs.iter().any(|g| g.contains(x.coords())))
                    .map(|(r, _)| r),
            ),
            ConsensusSpec::Augmented { base, extra } => {
                let from_base = base.membership_point(x)?;
                let from_extra = single_owner(
                    extra
                        .classes
                        .iter()
                        .filter(|(_, pts)| pts.iter().any(|q| same_point(q, x.coords())))
                        .map(|(r, _)| r),
                )?;
                match (from_base, from_extra) {
                    (Some(a), Some(b)) if a != b => {
                        Err(Error::InvalidSpec("point assigned to two outcomes".into()))
                    }
                    (a, b) => Ok(a.or(b)),
                }
            }
            _ => {
                let gu = self.gu_classes(m)?.expect("unanimity-type consensus");
                Ok(gu_membership(
                    &gu,
                    x.coords().iter().map(|v| !v.close_to(&S::zero())),
                ))
            }
        }
    }
}

fn same_point<S: Scalar>(a: &[S], b: &[S]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(u, v)| u.close_to(v))
}

fn single_owner<'a>(mut owners: impl Iterator<Item = &'a SRanking>) -> Result<Option<SRanking>> {
    let first = owners.next().cloned();
    if let Some(f) = &first {
        if owners.any(|o| o != f) {
            return Err(Error::InvalidSpec("point assigned to two outcomes".into()));
        }
    }
    Ok(first)
}

fn gu_membership(gu: &GuClasses, support: impl Iterator<Item = bool>) -> Option<SRanking> {
    let support: Vec<usize> = support
        .enumerate()
        .filter(|(_, s)| *s)
        .map(|(i, _)| i)
        .collect();
    let owner = gu.owner(*support.first()?)?;
    let set = gu.class_of(owner)?;
    support
        .iter()
        .all(|t| set.binary_search(t).is_ok())
        .then(|| owner.clone())
}

/// Condorcet winner of a simplex point (strict pairwise majority of mass).
pub fn point_condorcet_winner<S: Scalar>(x: &SimplexPoint<S>) -> Option<usize> {
    let m = x.candidates().len();
    let rankings = x.rankings();
    let mut net = vec![S::zero(); m * m];
    for (r, v) in rankings.iter().zip(x.coords()) {
        if v.close_to(&S::zero()) {
            continue;
        }
        let order = r.order();
        for i in 0..m {
            for j in i + 1..m {
                let (a, b) = (order[i], order[j]);
                net[a * m + b] = net[a * m + b].clone() + v.clone();
                net[b * m + a] = net[b * m + a].clone() - v.clone();
            }
        }
    }
    (0..m).find(|&c| {
        (0..m)
            .all(|b| b == c || (net[c * m + b] > S::zero() && !net[c * m + b].close_to(&S::zero())))
    })
}

/// Nearest member of `S_r` to `t` (first in canonical order on ties) and its distance.
pub fn vmp_minimizer<S: Scalar>(
    gu: &GuClasses,
    g: &GroundMetric<S>,
    t: &Ranking,
    r: &SRanking,
) -> Result<Option<(Ranking, S)>> {
    let rankings = all_rankings(gu.m)?;
    let Some(set) = gu.class_of(r) else {
        return Ok(None);
    };
    let mut best: Option<(usize, S)> = None;
    for &u in set {
        let d = g.distance(t, &rankings[u])?;
        if best.as_ref().is_none_or(|(_, b)| d < *b) {
            best = Some((u, d));
        }
    }
    Ok(best.map(|(u, d)| (rankings[u].clone(), d)))
}

/// `delta(t, r)` for every ranking `t` in canonical order; `None` if `S_r` is empty.
pub fn delta_table<S: Scalar>(
    gu: &GuClasses,
    g: &GroundMetric<S>,
    r: &SRanking,
) -> Result<Option<Vec<S>>> {
    let table = distance_matrix(g, gu.m)?;
    Ok(delta_from_matrix(gu, &table, r))
}

fn delta_from_matrix<S: Scalar>(gu: &GuClasses, table: &[S], r: &SRanking) -> Option<Vec<S>> {
    let set = gu.class_of(r)?;
    let big_m = all_rankings(gu.m).ok()?.len();
    Some(
        (0..big_m)
            .map(|t| {
                set.iter()
                    .map(|&u| table[t * big_m + u].clone())
                    .reduce(S::min_of)
                    .expect("class is nonempty")
            })
            .collect(),
    )
}

/// Delta tables for every outcome of a generalized-unanimity consensus,
/// computed once per (consensus, ground) pair.
#[derive(Debug, Clone)]
pub struct VmpTables<S> {
    gu: GuClasses,
    outcomes: Vec<SRanking>,
    deltas: Vec<Option<Vec<S>>>,
}

impl<S: Scalar> VmpTables<S> {
    pub fn new(gu: GuClasses, g: &GroundMetric<S>) -> Result<Self> {
        let table = distance_matrix(g, gu.m)?;
        let outcomes = enumerate_s_rankings(gu.m, gu.s)?;
        let deltas = outcomes
            .iter()
            .map(|r| delta_from_matrix(&gu, &table, r))
            .collect();
        Ok(VmpTables {
            gu,
            outcomes,
            deltas,
        })
    }

    pub fn classes(&self) -> &GuClasses {
        &self.gu
    }

    /// All size-`s` outcomes in canonical order.
    pub fn outcomes(&self) -> &[SRanking] {
        &self.outcomes
    }

    pub fn delta(&self, r: &SRanking) -> Option<&[S]> {
        let i = self.outcomes.iter().position(|o| o == r)?;
        self.deltas[i].as_deref()
    }

    pub fn delta_at(&self, outcome_index: usize) -> Option<&[S]> {
        self.deltas[outcome_index].as_deref()
    }

    /// Closed-form distance from `counts` to `K_r` (p-th power convention).
    pub fn score(
        &self,
        outcome_index: usize,
        spec: &VotewiseSpec<S>,
        counts: &[u64],
    ) -> Extended<S> {
        let Some(delta) = self.delta_at(outcome_index) else {
            return Extended::Infinite;
        };
        Extended::Finite(vmp_score(delta, spec.p, spec.normalized, counts))
    }
}

/// `sum_t counts[t] delta_t^p` (divided by `n` when normalized); the maximum
/// of `delta_t` over the support for p = inf.
pub fn vmp_score<S: Scalar>(delta: &[S], p: Exponent, normalized: bool, counts: &[u64]) -> S {
    match p {
        Exponent::Infinity => counts
            .iter()
            .zip(delta)
            .filter(|(c, _)| **c > 0)
            .fold(S::zero(), |acc, (_, d)| S::max_of(acc, d.clone())),
        Exponent::Finite(p) => {
            let mut total = S::zero();
            let mut n = 0u64;
            for (&c, d) in counts.iter().zip(delta) {
                if c > 0 {
                    total = total + S::from_int(c as i64) * powi(d, p);
                    n += c;
                }
            }
            if normalized {
                total / S::from_int(n as i64)
            } else {
                total
            }
        }
    }
}

/// Distance from a profile to `K_r` under a votewise distance.
pub fn distance_to_consensus<S: Scalar>(
    k: &ConsensusSpec<S>,
    spec: &VotewiseSpec<S>,
    e: &AnonymousProfile,
    r: &SRanking,
) -> Result<Extended<S>> {
    distance_to_consensus_bounded(k, spec, e, r, CondorcetBounds::default())
}

pub fn distance_to_consensus_bounded<S: Scalar>(
    k: &ConsensusSpec<S>,
    spec: &VotewiseSpec<S>,
    e: &AnonymousProfile,
    r: &SRanking,
    bounds: CondorcetBounds,
) -> Result<Extended<S>> {
    let m = e.candidates().len();
    spec.ground.validate(m)?;
    if r.len() != k.output_size(m) {
        return Err(Error::Mismatch(format!(
            "outcome of size {} for a size-{} consensus",
            r.len(),
            k.output_size(m)
        )));
    }
    match k {
        ConsensusSpec::Condorcet => condorcet_distance(spec, e, r.order()[0], bounds),
        ConsensusSpec::PointSets(_)
        | ConsensusSpec::SegmentSets(_)
        | ConsensusSpec::Augmented { .. } => Err(Error::Unsupported(
            "point and segment consensuses are measured on the simplex, not by votewise distances"
                .into(),
        )),
        _ => {
            let gu = k.gu_classes(m)?.expect("unanimity-type consensus");
            match delta_table(&gu, &spec.ground, r)? {
                None => Ok(Extended::Infinite),
                Some(delta) => Ok(Extended::Finite(vmp_score(
                    &delta,
                    spec.p,
                    spec.normalized,
                    e.counts(),
                ))),
            }
        }
    }
}

/// Net pairwise margins of `winner` against every other candidate, and for
/// each ranking type the set of candidates it places above `winner`.
fn margins_against(e: &AnonymousProfile, winner: usize) -> (Vec<i64>, Vec<Vec<usize>>) {
    let m = e.candidates().len();
    let rankings = e.rankings();
    let mut margin = vec![0i64; m];
    let mut above = Vec::with_capacity(rankings.len());
    for (t, &c) in rankings.iter().zip(e.counts()) {
        let pos = t.positions();
        let ahead: Vec<usize> = (0..m).filter(|&b| pos[b] < pos[winner]).collect();
        for b in 0..m {
            if b == winner {
                continue;
            }
            if pos[b] < pos[winner] {
                margin[b] -= c as i64;
            } else {
                margin[b] += c as i64;
            }
        }
        above.push(ahead);
    }
    (margin, above)
}

/// Fewest ballots that must change for `winner` to become the Condorcet winner.
/// Changed ballots are moved to a ranking with `winner` on top, which flips
/// every pairwise contest the ballot lost.
pub fn condorcet_changes_needed(e: &AnonymousProfile, winner: usize) -> u64 {
    let m = e.candidates().len();
    let (margin, above) = margins_against(e, winner);
    let wins = |gain: &[i64]| (0..m).all(|b| b == winner || margin[b] + gain[b] > 0);
    let types: Vec<usize> = (0..above.len())
        .filter(|&t| e.counts()[t] > 0 && !above[t].is_empty())
        .collect();

    fn search(
        idx: usize,
        left: u64,
        types: &[usize],
        counts: &[u64],
        above: &[Vec<usize>],
        gain: &mut Vec<i64>,
        wins: &dyn Fn(&[i64]) -> bool,
    ) -> bool {
        if left == 0 {
            return wins(gain);
        }
        if idx == types.len() {
            return false;
        }
        let t = types[idx];
        let cap = counts[t].min(left);
        for take in (0..=cap).rev() {
            for &b in &above[t] {
                gain[b] += 2 * take as i64;
            }
            let ok = search(idx + 1, left - take, types, counts, above, gain, wins);
            for &b in &above[t] {
                gain[b] -= 2 * take as i64;
            }
            if ok {
                return true;
            }
        }
        false
    }

    let available: u64 = types.iter().map(|&t| e.counts()[t]).sum();
    for k in 0..=available {
        let mut gain = vec![0i64; m];
        if search(0, k, &types, e.counts(), &above, &mut gain, &wins) {
            return k;
        }
    }
    // Unreachable: changing every ballot that ranks someone above `winner`
    // leaves `winner` on top of all ballots.
    available
}

fn condorcet_distance<S: Scalar>(
    spec: &VotewiseSpec<S>,
    e: &AnonymousProfile,
    winner: usize,
    bounds: CondorcetBounds,
) -> Result<Extended<S>> {
    let m = e.candidates().len();
    let n = e.voters();
    if m > bounds.max_candidates || n > bounds.max_voters {
        return Err(Error::Capacity(format!(
            "Condorcet distance search limited to {} candidates and {} voters",
            bounds.max_candidates, bounds.max_voters
        )));
    }
    if matches!(spec.ground, GroundMetric::Discrete) {
        let k = condorcet_changes_needed(e, winner);
        let value = match spec.p {
            Exponent::Infinity => S::from_int(i64::from(k > 0)),
            Exponent::Finite(_) if spec.normalized => S::from_ratio(k as i64, n as i64),
            Exponent::Finite(_) => S::from_int(k as i64),
        };
        return Ok(Extended::Finite(value));
    }
    let Exponent::Finite(p) = spec.p else {
        return Err(Error::Unsupported(
            "Condorcet distance with p = inf needs the discrete ground".into(),
        ));
    };
    let big_m = e.counts().len();
    let targets = composition_count(n, big_m);
    if targets > bounds.max_targets {
        return Err(Error::Capacity(format!(
            "{targets} candidate target profiles exceed the bound {}",
            bounds.max_targets
        )));
    }
    let table = distance_matrix(&spec.ground, m)?;
    let powered: Vec<BigRational> = table
        .iter()
        .map(|d| {
            powi(d, p)
                .to_big_ratio()
                .ok_or_else(|| Error::InvalidSpec("non-finite ground distance".into()))
        })
        .collect::<Result<_>>()?;
    let denom = common_denominator(&powered);
    let costs: Vec<i128> = powered
        .iter()
        .map(|c| {
            (c * BigRational::from_integer(denom.clone()))
                .to_integer()
                .to_i128()
                .ok_or_else(|| Error::Capacity("ground costs exceed 128-bit integers".into()))
        })
        .collect::<Result<_>>()?;
    let supply: Vec<i128> = e.counts().iter().map(|&c| c as i128).collect();
    let mut best: Option<i128> = None;
    for counts in Compositions::new(n, big_m) {
        let target = AnonymousProfile::new(e.candidates().clone(), counts.clone())?;
        if condorcet_winner(&target) != Some(winner) {
            continue;
        }
        let demand: Vec<i128> = counts.iter().map(|&c| c as i128).collect();
        let plan = solve_transport(&supply, &demand, &costs)?;
        if best.is_none_or(|b| plan.cost < b) {
            best = Some(plan.cost);
        }
    }
    let Some(best) = best else {
        return Ok(Extended::Infinite);
    };
    let mut value = S::from_big_ratio(&BigRational::new(BigInt::from(best), denom));
    if spec.normalized {
        value = value / S::from_int(n as i64);
    }
    Ok(Extended::Finite(value))
}

/// Whether every member of each class is at positive distance from every
/// other class (exhaustive for generalized-unanimity consensuses).
pub fn distinguishes<S: Scalar>(gu: &GuClasses, g: &GroundMetric<S>) -> Result<bool> {
    let table = distance_matrix(g, gu.m)?;
    let big_m = all_rankings(gu.m)?.len();
    for (r, set) in gu.classes() {
        for (r2, other) in gu.classes() {
            if r == r2 {
                continue;
            }
            for &t in set {
                if other
                    .iter()
                    .any(|&u| table[t * big_m + u].close_to(&S::zero()))
                {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elections::parse_profile;

    type Q = BigRational;

    fn seven() -> AnonymousProfile {
        parse_profile("3: a>b>c\n2: b>a>c\n2: c>b>a\n").unwrap()
    }

    fn q(v: i64) -> Q {
        Q::from_int(v)
    }

    fn cs3() -> CandidateSet {
        CandidateSet::alphabetic(3).unwrap()
    }

    #[test]
    fn membership_examples() {
        let unanimous = parse_profile("4: a>b>c").unwrap();
        let sunam = ConsensusSpec::<Q>::StrongUnanimity(None);
        assert_eq!(
            sunam.membership(&unanimous).unwrap(),
            Some(SRanking::new(vec![0, 1, 2], 3).unwrap())
        );
        assert_eq!(
            ConsensusSpec::<Q>::Condorcet.membership(&seven()).unwrap(),
            Some(SRanking::single(1))
        );
        let split = parse_profile("a>b>c\na>c>b").unwrap();
        assert_eq!(
            ConsensusSpec::<Q>::WeakUnanimity
                .membership(&split)
                .unwrap(),
            Some(SRanking::single(0))
        );
        assert_eq!(sunam.membership(&split).unwrap(), None);
        assert_eq!(
            ConsensusSpec::<Q>::WeakUnanimity
                .membership(&seven())
                .unwrap(),
            None
        );
    }

    #[test]
    fn vmp_minimizer_examples() {
        let wunam = GuClasses::prefix_classes(3, 1).unwrap();
        let cba = cs3().parse_ranking("c>b>a").unwrap();
        let (xi, d) = vmp_minimizer(
            &wunam,
            &GroundMetric::<Q>::Kendall,
            &cba,
            &SRanking::single(0),
        )
        .unwrap()
        .unwrap();
        assert_eq!(xi.display(&cs3()), "a>c>b");
        assert_eq!(d, q(2));
        let sunam = GuClasses::prefix_classes(3, 3).unwrap();
        let r = cs3().parse_ranking("b>c>a").unwrap();
        let (xi, d) = vmp_minimizer(&sunam, &GroundMetric::<Q>::Footrule, &r, &r.prefix(3))
            .unwrap()
            .unwrap();
        assert_eq!((xi, d), (r.clone(), q(0)));
        let bac = cs3().parse_ranking("b>a>c").unwrap();
        let (xi, d) = vmp_minimizer(
            &wunam,
            &GroundMetric::<Q>::Discrete,
            &bac,
            &SRanking::single(0),
        )
        .unwrap()
        .unwrap();
        assert_eq!((xi.display(&cs3()), d), ("a>b>c".to_string(), q(1)));
    }

    #[test]
    fn delta_table_examples() {
        let wunam = GuClasses::prefix_classes(3, 1).unwrap();
        let a = SRanking::single(0);
        let k = delta_table(&wunam, &GroundMetric::<Q>::Kendall, &a)
            .unwrap()
            .unwrap();
        assert_eq!(k, [0, 0, 1, 2, 1, 2].map(q).to_vec());
        let f = delta_table(&wunam, &GroundMetric::<Q>::Footrule, &a)
            .unwrap()
            .unwrap();
        assert_eq!(f[5], q(4));
        let sunam = GuClasses::prefix_classes(3, 3).unwrap();
        let abc = SRanking::new(vec![0, 1, 2], 3).unwrap();
        let h = delta_table(&sunam, &GroundMetric::<Q>::Discrete, &abc)
            .unwrap()
            .unwrap();
        assert_eq!(h, [0, 1, 1, 1, 1, 1].map(q).to_vec());
    }

    #[test]
    fn distance_to_consensus_examples() {
        let spec = VotewiseSpec::new(GroundMetric::<Q>::Kendall, Exponent::Finite(1), false);
        let d = distance_to_consensus(
            &ConsensusSpec::WeakUnanimity,
            &spec,
            &seven(),
            &SRanking::single(1),
        )
        .unwrap();
        assert_eq!(d, Extended::Finite(q(5)));

        let unanimous = parse_profile("3: b>c>a").unwrap();
        let r = cs3().parse_ranking("b>c>a").unwrap().prefix(3);
        let d = distance_to_consensus(&ConsensusSpec::StrongUnanimity(None), &spec, &unanimous, &r)
            .unwrap();
        assert_eq!(d, Extended::Finite(q(0)));

        let hamming = VotewiseSpec::new(GroundMetric::<Q>::Discrete, Exponent::Finite(1), false);
        let e = parse_profile("2: a>b>c\n3: b>c>a").unwrap();
        let d = distance_to_consensus(
            &ConsensusSpec::Condorcet,
            &hamming,
            &e,
            &SRanking::single(0),
        )
        .unwrap();
        assert_eq!(d, Extended::Finite(q(1)));
    }

    #[test]
    fn condorcet_distance_under_kendall() {
        let spec = VotewiseSpec::new(GroundMetric::<Q>::Kendall, Exponent::Finite(1), false);
        let e = parse_profile("2: a>b>c\n3: b>c>a").unwrap();
        // One bca ballot moved to abc costs 2 swaps; moving it to bac then
        // still leaves b ahead of a, so 2 is optimal.
        let d = distance_to_consensus(&ConsensusSpec::Condorcet, &spec, &e, &SRanking::single(0))
            .unwrap();
        assert_eq!(d, Extended::Finite(q(2)));
    }

    #[test]
    fn empty_outcome_classes_score_infinite() {
        let cands = cs3();
        let gu = parse_gu_json(r#"{"a": ["a>b>c"], "b": ["b>a>c", "b>c>a"]}"#, &cands).unwrap();
        let k = ConsensusSpec::<Q>::GeneralizedUnanimity(gu);
        let spec = VotewiseSpec::new(GroundMetric::<Q>::Kendall, Exponent::Finite(1), false);
        let d = distance_to_consensus(&k, &spec, &seven(), &SRanking::single(2)).unwrap();
        assert!(d.is_infinite());
        let d = distance_to_consensus(&k, &spec, &seven(), &SRanking::single(0)).unwrap();
        // bac -> abc 1 each, cba -> abc 3 each.
        assert_eq!(d, Extended::Finite(q(2 + 6)));
    }

    #[test]
    fn gu_loader_rejects_overlaps() {
        let cands = cs3();
        let err = parse_gu_json(r#"{"a": ["a>b>c"], "b": ["a>b>c"]}"#, &cands);
        assert!(matches!(err, Err(Error::InvalidSpec(_))));
        assert!(parse_gu_json(r#"{"a": []}"#, &cands).is_err());
        assert!(parse_gu_json(r#"{"a": ["a>b>d"]}"#, &cands).is_err());
    }

    #[test]
    fn segments_respect_open_endpoints() {
        let seg = Segment {
            start: vec![q(0), q(1)],
            end: vec![q(1), q(0)],
            start_open: true,
            end_open: false,
        };
        assert!(!seg.contains(&[q(0), q(1)]));
        assert!(seg.contains(&[q(1), q(0)]));
        assert!(seg.contains(&[Q::from_ratio(1, 3), Q::from_ratio(2, 3)]));
        assert!(!seg.contains(&[Q::from_ratio(1, 3), Q::from_ratio(1, 3)]));
    }

    #[test]
    fn distinguishing_requires_separated_classes() {
        let wunam = GuClasses::prefix_classes(3, 1).unwrap();
        assert!(distinguishes(&wunam, &GroundMetric::<Q>::Kendall).unwrap());
        // 2-approval weights do not tell apart rankings with the same top pair.
        let two_approval = GroundMetric::WeightedFootrule(vec![q(1), q(1), q(0)]);
        assert!(!distinguishes(&wunam, &two_approval).unwrap());
    }
}
