//! Textbook tallies, independent of the distance machinery.

use crate::elections::AnonymousProfile;
use crate::error::{Error, Result};
use crate::metrics::Extended;
use crate::rankings::{all_rankings, SRanking};
use crate::scalar::Scalar;

use super::outcome::{Objective, RuleOutcome};

#[derive(Debug, Clone, PartialEq)]
pub enum OracleKind<S> {
    Borda,
    Plurality,
    /// One point for each of the top `k` positions.
    KApproval(usize),
    /// Positional scores `w[0]` for first place, `w[1]` for second, ...
    Scoring(Vec<S>),
    Kemeny,
    /// Wins count 1, pairwise ties 1/2.
    Copeland,
    /// The most frequent ballots.
    ModalRanking,
}

impl<S: Scalar> OracleKind<S> {
    pub fn name(&self) -> String {
        match self {
            OracleKind::Borda => "borda".into(),
            OracleKind::Plurality => "plurality".into(),
            OracleKind::KApproval(k) => format!("approval({k})"),
            OracleKind::Scoring(w) => format!(
                "scoring({})",
                w.iter()
                    .map(Scalar::to_ratio_string)
                    .collect::<Vec<_>>()
                    .join(";")
            ),
            OracleKind::Kemeny => "kemeny".into(),
            OracleKind::Copeland => "copeland".into(),
            OracleKind::ModalRanking => "modal".into(),
        }
    }

    /// Positional weights for the scoring-type tallies.
    pub fn weights(&self, m: usize) -> Option<Vec<S>> {
        match self {
            OracleKind::Borda => Some((0..m).rev().map(|v| S::from_int(v as i64)).collect()),
            OracleKind::Plurality => Some((0..m).map(|i| S::from_int(i64::from(i == 0))).collect()),
            OracleKind::KApproval(k) => {
                Some((0..m).map(|i| S::from_int(i64::from(i < *k))).collect())
            }
            OracleKind::Scoring(w) => Some(w.clone()),
            _ => None,
        }
    }
}

fn positional<S: Scalar>(w: &[S], e: &AnonymousProfile) -> Vec<S> {
    let m = e.candidates().len();
    let mut score = vec![S::zero(); m];
    for (t, c) in e.support() {
        let weight = S::from_int(c as i64);
        for (pos, &cand) in t.order().iter().enumerate() {
            score[cand] = score[cand].clone() + weight.clone() * w[pos].clone();
        }
    }
    score
}

/// Direct evaluation of a classical rule.
pub fn oracle_rule<S: Scalar>(
    kind: &OracleKind<S>,
    e: &AnonymousProfile,
) -> Result<RuleOutcome<S>> {
    let m = e.candidates().len();
    let singles = || (0..m).map(SRanking::single).collect::<Vec<_>>();
    let wrap = |v: Vec<S>| v.into_iter().map(Extended::Finite).collect::<Vec<_>>();
    match kind {
        OracleKind::Borda
        | OracleKind::Plurality
        | OracleKind::KApproval(_)
        | OracleKind::Scoring(_) => {
            let w = kind.weights(m).expect("positional rule");
            if w.len() != m {
                return Err(Error::InvalidSpec(format!(
                    "{} positional weights for {m} candidates",
                    w.len()
                )));
            }
            if let OracleKind::KApproval(k) = kind {
                if *k == 0 || *k > m {
                    return Err(Error::InvalidSpec(format!(
                        "approval count {k} outside 1..={m}"
                    )));
                }
            }
            RuleOutcome::from_scores(singles(), wrap(positional(&w, e)), Objective::Maximize)
        }
        OracleKind::Copeland => {
            let pair = e.pairwise_counts();
            let half = S::from_ratio(1, 2);
            let scores = (0..m)
                .map(|c| {
                    (0..m).filter(|&b| b != c).fold(S::zero(), |acc, b| {
                        let (win, lose) = (pair[c * m + b], pair[b * m + c]);
                        if win > lose {
                            acc + S::one()
                        } else if win == lose {
                            acc + half.clone()
                        } else {
                            acc
                        }
                    })
                })
                .collect();
            RuleOutcome::from_scores(singles(), wrap(scores), Objective::Maximize)
        }
        OracleKind::Kemeny => {
            let pair = e.pairwise_counts();
            let rankings = all_rankings(m)?;
            let scores = rankings
                .iter()
                .map(|r| {
                    let o = r.order();
                    let mut agree = 0u64;
                    for i in 0..m {
                        for j in i + 1..m {
                            agree += pair[o[i] * m + o[j]];
                        }
                    }
                    S::from_int(agree as i64)
                })
                .collect();
            let outcomes = rankings.iter().map(|r| r.prefix(m)).collect();
            RuleOutcome::from_scores(outcomes, wrap(scores), Objective::Maximize)
        }
        OracleKind::ModalRanking => {
            let rankings = all_rankings(m)?;
            let outcomes = rankings.iter().map(|r| r.prefix(m)).collect();
            let scores = e.counts().iter().map(|&c| S::from_int(c as i64)).collect();
            RuleOutcome::from_scores(outcomes, wrap(scores), Objective::Maximize)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elections::parse_profile;
    use num_rational::BigRational;

    type Q = BigRational;

    fn seven() -> AnonymousProfile {
        parse_profile("3: a>b>c\n2: b>a>c\n2: c>b>a\n").unwrap()
    }

    #[test]
    fn borda_and_plurality_tallies() {
        let b = oracle_rule::<Q>(&OracleKind::Borda, &seven()).unwrap();
        assert_eq!(b.winners, vec![SRanking::single(1)]);
        assert_eq!(
            b.score_of(&SRanking::single(1)),
            Some(&Extended::Finite(Q::from_int(9)))
        );
        let p = oracle_rule::<Q>(&OracleKind::Plurality, &seven()).unwrap();
        assert_eq!(p.winners, vec![SRanking::single(0)]);
        assert_eq!(
            p.score_of(&SRanking::single(0)),
            Some(&Extended::Finite(Q::from_int(3)))
        );
    }

    #[test]
    fn kemeny_and_modal_on_unanimous_profile() {
        let e = parse_profile("2: b>a>c").unwrap();
        for kind in [OracleKind::<Q>::Kemeny, OracleKind::ModalRanking] {
            let out = oracle_rule(&kind, &e).unwrap();
            assert_eq!(out.winners.len(), 1);
            assert_eq!(out.winners[0].order(), &[1, 0, 2]);
        }
    }

    #[test]
    fn copeland_cycle_ties() {
        let cycle = parse_profile("a>b>c\nb>c>a\nc>a>b").unwrap();
        let out = oracle_rule::<Q>(&OracleKind::Copeland, &cycle).unwrap();
        assert_eq!(out.winners.len(), 3);
        let out = oracle_rule::<Q>(&OracleKind::Copeland, &seven()).unwrap();
        assert_eq!(out.winners, vec![SRanking::single(1)]);
    }

    #[test]
    fn approval_validates_k() {
        assert!(oracle_rule::<Q>(&OracleKind::KApproval(0), &seven()).is_err());
        let two = oracle_rule::<Q>(&OracleKind::KApproval(2), &seven()).unwrap();
        // approvals: a 5, b 7, c 2
        assert_eq!(two.winners, vec![SRanking::single(1)]);
    }
}
