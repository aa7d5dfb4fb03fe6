use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::metrics::Extended;
use crate::rankings::{CandidateSet, SRanking};
use crate::scalar::Scalar;

/// Whether winners minimize (distance rules) or maximize (tallies) their score.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Minimize,
    Maximize,
}

/// Scores of every outcome and the optimal set. Winner sets are never tie-broken.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleOutcome<S> {
    pub outcomes: Vec<SRanking>,
    pub scores: Vec<Extended<S>>,
    pub winners: Vec<SRanking>,
    pub objective: Objective,
}

impl<S: Scalar> RuleOutcome<S> {
    /// Computes the optimal set. Infinite scores never win; if every score
    /// is infinite the consensus cannot be reached and this is an error.
    pub fn from_scores(
        outcomes: Vec<SRanking>,
        scores: Vec<Extended<S>>,
        objective: Objective,
    ) -> Result<Self> {
        let finite: Vec<(usize, &S)> = scores
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.finite().map(|v| (i, v)))
            .collect();
        if finite.is_empty() {
            return Err(Error::AllInfinite);
        }
        let best = finite
            .iter()
            .map(|(_, v)| *v)
            .fold(None::<&S>, |acc, v| match (acc, objective) {
                (None, _) => Some(v),
                (Some(a), Objective::Minimize) if v < a => Some(v),
                (Some(a), Objective::Maximize) if v > a => Some(v),
                (a, _) => a,
            })
            .expect("nonempty")
            .clone();
        let winners = finite
            .iter()
            .filter(|(_, v)| v.close_to(&best))
            .map(|(i, _)| outcomes[*i].clone())
            .collect();
        Ok(RuleOutcome {
            outcomes,
            scores,
            winners,
            objective,
        })
    }

    pub fn is_tied(&self) -> bool {
        self.winners.len() >= 2
    }

    pub fn score_of(&self, r: &SRanking) -> Option<&Extended<S>> {
        self.outcomes
            .iter()
            .position(|o| o == r)
            .map(|i| &self.scores[i])
    }

    /// Winners as a sorted list (for set comparisons).
    pub fn winner_set(&self) -> Vec<SRanking> {
        let mut w = self.winners.clone();
        w.sort();
        w
    }

    pub fn to_json(&self, candidates: &CandidateSet) -> Value {
        let mut scores = Map::new();
        for (o, s) in self.outcomes.iter().zip(&self.scores) {
            scores.insert(o.display(candidates), Value::String(s.to_ratio_string()));
        }
        json!({
            "winners": self.winners.iter().map(|w| w.display(candidates)).collect::<Vec<_>>(),
            "scores": scores,
            "objective": match self.objective {
                Objective::Minimize => "min",
                Objective::Maximize => "max",
            },
        })
    }
}
