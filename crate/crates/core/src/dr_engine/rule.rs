use crate::consensus::{
    distance_to_consensus_bounded, CondorcetBounds, ConsensusSpec, GuClasses, VmpTables,
};
use crate::elections::{
    tournament_matrix, vote_distribution, AnonymousProfile, SimplexPoint, TournamentMatrix,
};
use crate::error::{Error, Result};
use crate::metrics::{Exponent, Extended, TournamentSpec, VotewiseSpec};
use crate::rankings::{all_rankings, enumerate_s_rankings, SRanking};
use crate::scalar::{powi, Scalar};

use super::oracles::OracleKind;
use super::outcome::{Objective, RuleOutcome};

#[derive(Debug, Clone, PartialEq)]
pub enum DistanceSpec<S> {
    Votewise(VotewiseSpec<S>),
    Tournament(TournamentSpec),
    /// l^p distance on the vote simplex, measured to the corners of a class.
    SimplexLp(Exponent),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleSpec<S> {
    pub consensus: ConsensusSpec<S>,
    pub distance: DistanceSpec<S>,
}

/// A distance-rationalizable rule bound to a candidate count, with its
/// per-outcome tables precomputed.
#[derive(Debug, Clone)]
pub struct DrRule<S> {
    spec: RuleSpec<S>,
    m: usize,
    outcomes: Vec<SRanking>,
    gu: Option<GuClasses>,
    tables: Option<VmpTables<S>>,
    bounds: CondorcetBounds,
}

impl<S: Scalar> DrRule<S> {
    pub fn new(spec: RuleSpec<S>, m: usize) -> Result<Self> {
        spec.consensus.validate(m)?;
        let s = spec.consensus.output_size(m);
        let outcomes = enumerate_s_rankings(m, s)?;
        let gu = spec.consensus.gu_classes(m)?;
        let tables = match (&spec.distance, &gu) {
            (DistanceSpec::Votewise(v), Some(gu)) => Some(VmpTables::new(gu.clone(), &v.ground)?),
            _ => None,
        };
        match (&spec.distance, &spec.consensus) {
            (DistanceSpec::Votewise(v), ConsensusSpec::Condorcet) => v.ground.validate(m)?,
            (DistanceSpec::Votewise(_), ConsensusSpec::PointSets(_))
            | (DistanceSpec::Votewise(_), ConsensusSpec::SegmentSets(_))
            | (DistanceSpec::Votewise(_), ConsensusSpec::Augmented { .. }) => {
                return Err(Error::Unsupported(
                    "point and segment consensuses need a simplex distance".into(),
                ))
            }
            (DistanceSpec::Tournament(t), k) => {
                if !t.reduced {
                    return Err(Error::Unsupported(
                        "only the reduced tournament distance is supported in rules".into(),
                    ));
                }
                if !matches!(
                    k,
                    ConsensusSpec::Condorcet
                        | ConsensusSpec::StrongUnanimity(_)
                        | ConsensusSpec::WeakUnanimity
                ) {
                    return Err(Error::Unsupported(
                        "tournament distances pair with Condorcet or unanimity consensuses".into(),
                    ));
                }
            }
            (DistanceSpec::SimplexLp(_), _) if gu.is_none() => {
                return Err(Error::Unsupported(
                    "simplex l^p rules need a unanimity-type consensus".into(),
                ))
            }
            _ => {}
        }
        Ok(DrRule {
            spec,
            m,
            outcomes,
            gu,
            tables,
            bounds: CondorcetBounds::default(),
        })
    }

    pub fn with_condorcet_bounds(mut self, bounds: CondorcetBounds) -> Self {
        self.bounds = bounds;
        self
    }

    pub fn spec(&self) -> &RuleSpec<S> {
        &self.spec
    }

    pub fn candidates(&self) -> usize {
        self.m
    }

    pub fn outcomes(&self) -> &[SRanking] {
        &self.outcomes
    }

    /// Delta tables when the rule has the closed form `sum_t x_t delta(t, r)^p`.
    pub fn vmp_tables(&self) -> Option<&VmpTables<S>> {
        self.tables.as_ref()
    }

    /// Whether every consensus profile is at positive distance from every
    /// other class. `None` when this cannot be decided by exhaustion.
    pub fn distinguishes(&self) -> Result<Option<bool>> {
        match (&self.spec.distance, &self.gu) {
            (DistanceSpec::Votewise(v), Some(gu)) => {
                crate::consensus::distinguishes(gu, &v.ground).map(Some)
            }
            _ => Ok(None),
        }
    }

    fn check_profile(&self, e: &AnonymousProfile) -> Result<()> {
        if e.candidates().len() != self.m {
            return Err(Error::Mismatch(format!(
                "rule over {} candidates applied to a profile over {}",
                self.m,
                e.candidates().len()
            )));
        }
        Ok(())
    }

    pub fn score(&self, e: &AnonymousProfile, index: usize) -> Result<Extended<S>> {
        self.check_profile(e)?;
        let r = &self.outcomes[index];
        match &self.spec.distance {
            DistanceSpec::Votewise(v) => match &self.tables {
                Some(t) => Ok(t.score(index, v, e.counts())),
                None => distance_to_consensus_bounded(&self.spec.consensus, v, e, r, self.bounds),
            },
            DistanceSpec::Tournament(_) => {
                tournament_score(&self.spec.consensus, &tournament_matrix(e).reduced(), r)
            }
            DistanceSpec::SimplexLp(p) => {
                let x: SimplexPoint<S> = vote_distribution(e);
                Ok(self.corner_score(x.coords(), index, *p))
            }
        }
    }

    fn corner_score(&self, x: &[S], index: usize, p: Exponent) -> Extended<S> {
        let gu = self.gu.as_ref().expect("checked at construction");
        match gu.class_of(&self.outcomes[index]) {
            None => Extended::Infinite,
            Some(set) => Extended::Finite(
                set.iter()
                    .map(|&t| corner_distance(x, t, p))
                    .reduce(S::min_of)
                    .expect("class is nonempty"),
            ),
        }
    }

    /// Argmin outcome on a profile.
    pub fn outcome(&self, e: &AnonymousProfile) -> Result<RuleOutcome<S>> {
        self.check_profile(e)?;
        let scores = (0..self.outcomes.len())
            .map(|i| self.score(e, i))
            .collect::<Result<Vec<_>>>()?;
        RuleOutcome::from_scores(self.outcomes.clone(), scores, Objective::Minimize)
    }

    /// The induced rule on the vote simplex, for homogeneous distances.
    pub fn outcome_point(&self, x: &SimplexPoint<S>) -> Result<RuleOutcome<S>> {
        if x.candidates().len() != self.m {
            return Err(Error::Mismatch(
                "point over a different candidate count".into(),
            ));
        }
        let scores = (0..self.outcomes.len())
            .map(|i| match &self.spec.distance {
                DistanceSpec::SimplexLp(p) => Ok(self.corner_score(x.coords(), i, *p)),
                DistanceSpec::Votewise(v) => match &self.tables {
                    Some(t) => Ok(match t.delta_at(i) {
                        None => Extended::Infinite,
                        Some(delta) => Extended::Finite(point_vmp_score(delta, v.p, x.coords())),
                    }),
                    None => Err(Error::Unsupported(
                        "this consensus has no closed form on the simplex".into(),
                    )),
                },
                DistanceSpec::Tournament(_) => {
                    let signs = point_tournament_signs(x);
                    tournament_score(&self.spec.consensus, &signs, &self.outcomes[i])
                }
            })
            .collect::<Result<Vec<_>>>()?;
        RuleOutcome::from_scores(self.outcomes.clone(), scores, Objective::Minimize)
    }
}

/// `sum_t x_t delta_t^p`, or the largest `delta_t` over the support for p = inf.
fn point_vmp_score<S: Scalar>(delta: &[S], p: Exponent, x: &[S]) -> S {
    match p {
        Exponent::Infinity => x
            .iter()
            .zip(delta)
            .filter(|(v, _)| !v.close_to(&S::zero()))
            .fold(S::zero(), |acc, (_, d)| S::max_of(acc, d.clone())),
        Exponent::Finite(p) => x
            .iter()
            .zip(delta)
            .fold(S::zero(), |acc, (v, d)| acc + v.clone() * powi(d, p)),
    }
}

fn point_tournament_signs<S: Scalar>(x: &SimplexPoint<S>) -> TournamentMatrix {
    // Scale to integers: only signs matter, so compare masses directly.
    let m = x.candidates().len();
    let rankings = x.rankings();
    let mut net = vec![S::zero(); m * m];
    for (r, v) in rankings.iter().zip(x.coords()) {
        let order = r.order();
        for i in 0..m {
            for j in i + 1..m {
                let (a, b) = (order[i], order[j]);
                net[a * m + b] = net[a * m + b].clone() + v.clone();
                net[b * m + a] = net[b * m + a].clone() - v.clone();
            }
        }
    }
    let entries: Vec<i64> = net
        .iter()
        .map(|v| {
            if v.close_to(&S::zero()) {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            }
        })
        .collect();
    TournamentMatrix::from_entries(m, entries).expect("square by construction")
}

/// Reduced-tournament distance from a sign matrix to the class of `r`.
///
/// Every sign pattern on the pairs not fixed by the consensus is realizable
/// by some profile, so only the fixed pairs contribute: each fixed pair whose
/// sign is not `+1` costs `2 * (1 - sign)` over its two matrix entries.
pub fn tournament_score<S: Scalar>(
    k: &ConsensusSpec<S>,
    signs: &TournamentMatrix,
    r: &SRanking,
) -> Result<Extended<S>> {
    let m = signs.size();
    let fixed: Vec<(usize, usize)> = match k {
        ConsensusSpec::Condorcet => {
            let c = r.order()[0];
            (0..m).filter(|&b| b != c).map(|b| (c, b)).collect()
        }
        ConsensusSpec::StrongUnanimity(_) | ConsensusSpec::WeakUnanimity => {
            let order = r.order();
            let mut pairs = Vec::new();
            for (i, &a) in order.iter().enumerate() {
                for b in 0..m {
                    if b != a && !order[..=i].contains(&b) {
                        pairs.push((a, b));
                    }
                }
            }
            pairs
        }
        _ => {
            return Err(Error::Unsupported(
                "tournament distances pair with Condorcet or unanimity consensuses".into(),
            ))
        }
    };
    let total: i64 = fixed
        .iter()
        .map(|&(a, b)| 2 * (1 - signs.entry(a, b).signum()))
        .sum();
    Ok(Extended::Finite(S::from_int(total)))
}

/// l^p distance (p-th power for finite p) from `x` to the corner `e_t`.
pub fn corner_distance<S: Scalar>(x: &[S], t: usize, p: Exponent) -> S {
    let gap = S::one() - x[t].clone();
    match p {
        Exponent::Infinity => x
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != t)
            .fold(gap, |acc, (_, v)| S::max_of(acc, v.clone())),
        Exponent::Finite(p) => x
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != t)
            .fold(powi(&gap, p), |acc, (_, v)| acc + powi(v, p)),
    }
}

/// The simplex rule with strong unanimity of size `s` and the l^p distance,
/// by direct minimization over corners.
pub fn simplex_lp_rule<S: Scalar>(
    s: usize,
    p: Exponent,
    x: &SimplexPoint<S>,
) -> Result<RuleOutcome<S>> {
    let m = x.candidates().len();
    let rule = DrRule::new(
        RuleSpec {
            consensus: ConsensusSpec::StrongUnanimity(Some(s)),
            distance: DistanceSpec::SimplexLp(p),
        },
        m,
    )?;
    rule.outcome_point(x)
}

/// Top-`s` prefixes of the rankings with maximal coordinate, sorted.
pub fn simplex_lp_closed_form<S: Scalar>(s: usize, x: &SimplexPoint<S>) -> Result<Vec<SRanking>> {
    let m = x.candidates().len();
    if s == 0 || s > m {
        return Err(Error::InvalidSpec(format!(
            "prefix length {s} outside 1..={m}"
        )));
    }
    let rankings = all_rankings(m)?;
    let best = x
        .coords()
        .iter()
        .cloned()
        .reduce(S::max_of)
        .expect("simplex is nonempty");
    let mut out: Vec<SRanking> = rankings
        .iter()
        .zip(x.coords())
        .filter(|(_, v)| v.close_to(&best))
        .map(|(r, _)| r.prefix(s))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Either a distance-rationalizable rule or a direct tally.
#[derive(Debug, Clone)]
pub enum Rule<S> {
    Dr(DrRule<S>),
    Oracle(OracleKind<S>),
}

impl<S: Scalar> Rule<S> {
    pub fn outcome(&self, e: &AnonymousProfile) -> Result<RuleOutcome<S>> {
        match self {
            Rule::Dr(r) => r.outcome(e),
            Rule::Oracle(k) => super::oracles::oracle_rule(k, e),
        }
    }
}

/// One-off evaluation of a rule spec.
pub fn dr_outcome<S: Scalar>(spec: &RuleSpec<S>, e: &AnonymousProfile) -> Result<RuleOutcome<S>> {
    DrRule::new(spec.clone(), e.candidates().len())?.outcome(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elections::parse_profile;
    use crate::rankings::{CandidateSet, GroundMetric};
    use num_rational::BigRational;

    type Q = BigRational;

    fn seven() -> AnonymousProfile {
        parse_profile("3: a>b>c\n2: b>a>c\n2: c>b>a\n").unwrap()
    }

    fn votewise(k: ConsensusSpec<Q>, g: GroundMetric<Q>, p: Exponent) -> RuleSpec<Q> {
        RuleSpec {
            consensus: k,
            distance: DistanceSpec::Votewise(VotewiseSpec::new(g, p, false)),
        }
    }

    #[test]
    fn borda_profile_scores() {
        let spec = votewise(
            ConsensusSpec::WeakUnanimity,
            GroundMetric::Kendall,
            Exponent::Finite(1),
        );
        let out = dr_outcome(&spec, &seven()).unwrap();
        let got: Vec<String> = out.scores.iter().map(|s| s.to_ratio_string()).collect();
        assert_eq!(got, ["6", "5", "10"]);
        assert_eq!(out.winners, vec![SRanking::single(1)]);
    }

    #[test]
    fn modal_ranking_on_unanimous_profile() {
        let spec = votewise(
            ConsensusSpec::StrongUnanimity(None),
            GroundMetric::Discrete,
            Exponent::Finite(1),
        );
        let e = parse_profile("3: a>b>c").unwrap();
        let out = dr_outcome(&spec, &e).unwrap();
        assert_eq!(out.winners.len(), 1);
        assert_eq!(out.winners[0].order(), &[0, 1, 2]);
        assert_eq!(
            out.score_of(&out.winners[0]),
            Some(&Extended::Finite(Q::from_int(0)))
        );
    }

    #[test]
    fn copeland_through_reduced_tournaments() {
        let spec = RuleSpec {
            consensus: ConsensusSpec::<Q>::Condorcet,
            distance: DistanceSpec::Tournament(TournamentSpec { reduced: true }),
        };
        let out = dr_outcome(&spec, &seven()).unwrap();
        assert_eq!(out.winners, vec![SRanking::single(1)]);
        let cycle = parse_profile("a>b>c\nb>c>a\nc>a>b").unwrap();
        assert_eq!(dr_outcome(&spec, &cycle).unwrap().winners.len(), 3);
    }

    #[test]
    fn simplex_rule_examples() {
        let c = CandidateSet::alphabetic(3).unwrap();
        let q = |p, d| Q::from_ratio(p, d);
        let z = || Q::from_int(0);
        let x =
            SimplexPoint::new(c.clone(), vec![q(3, 7), z(), q(2, 7), z(), z(), q(2, 7)]).unwrap();
        for p in [Exponent::Finite(1), Exponent::Finite(2), Exponent::Infinity] {
            let out = simplex_lp_rule(3, p, &x).unwrap();
            assert_eq!(out.winner_set(), simplex_lp_closed_form(3, &x).unwrap());
            assert_eq!(out.winners[0].order(), &[0, 1, 2]);
        }
        let u = SimplexPoint::<Q>::center(c.clone()).unwrap();
        assert_eq!(
            simplex_lp_rule(3, Exponent::Finite(2), &u)
                .unwrap()
                .winners
                .len(),
            6
        );
        let y = SimplexPoint::new(c, vec![q(2, 5), z(), q(2, 5), z(), z(), q(1, 5)]).unwrap();
        let out = simplex_lp_rule(1, Exponent::Finite(1), &y).unwrap();
        assert_eq!(
            out.winner_set(),
            vec![SRanking::single(0), SRanking::single(1)]
        );
    }

    #[test]
    fn all_infinite_scores_are_an_error() {
        let out = RuleOutcome::<Q>::from_scores(
            vec![SRanking::single(0)],
            vec![Extended::Infinite],
            Objective::Minimize,
        );
        assert_eq!(out.unwrap_err(), Error::AllInfinite);
    }

    #[test]
    fn unreduced_tournaments_are_rejected() {
        let spec = RuleSpec {
            consensus: ConsensusSpec::<Q>::Condorcet,
            distance: DistanceSpec::Tournament(TournamentSpec { reduced: false }),
        };
        assert!(matches!(DrRule::new(spec, 3), Err(Error::Unsupported(_))));
    }
}
