//! Consensus distances and rule outcomes checked against brute force.

use num_traits::Zero;
use proptest::prelude::*;

use drvote::consensus::{
    distance_to_consensus, distinguishes, ConsensusSpec, GuClasses, VmpTables,
};
use drvote::dr_engine::{
    check_identity, check_identity_sampled, parse_rule, DistanceSpec, DrRule, Rule, RuleSpec,
    CLASSICAL_IDENTITIES,
};
use drvote::elections::{
    all_profiles, condorcet_winner, tournament_matrix, AnonymousProfile, Profile,
};
use drvote::metrics::{votewise_distance, Exponent, Extended, TournamentSpec, VotewiseSpec};
use drvote::rankings::{
    all_rankings, enumerate_s_rankings, CandidateSet, GroundMetric, Ranking, SRanking,
};
use drvote::Rational;

type Q = Rational;

fn abc() -> CandidateSet {
    CandidateSet::alphabetic(3).unwrap()
}

fn class_members(k: &ConsensusSpec<Q>, m: usize, r: &SRanking) -> Vec<Ranking> {
    let s = k.output_size(m);
    all_rankings(m)
        .unwrap()
        .iter()
        .filter(|t| match k {
            ConsensusSpec::StrongUnanimity(_) | ConsensusSpec::WeakUnanimity => t.prefix(s) == *r,
            _ => unreachable!(),
        })
        .cloned()
        .collect()
}

/// Minimum votewise distance over every ballot list drawn from `members`.
fn brute_min(spec: &VotewiseSpec<Q>, e: &Profile, members: &[Ranking]) -> Q {
    let n = e.voters();
    let mut idx = vec![0usize; n];
    let mut best: Option<Q> = None;
    loop {
        let ballots = idx.iter().map(|&i| members[i].clone()).collect();
        let f = Profile::new(e.candidates().clone(), ballots).unwrap();
        let d = votewise_distance(spec, e, &f)
            .unwrap()
            .finite()
            .cloned()
            .unwrap();
        if best.as_ref().is_none_or(|b| d < *b) {
            best = Some(d);
        }
        let mut k = 0;
        while k < n && idx[k] + 1 == members.len() {
            idx[k] = 0;
            k += 1;
        }
        if k == n {
            return best.unwrap();
        }
        idx[k] += 1;
    }
}

#[test]
fn vmp_closed_form_matches_brute_force() {
    let consensuses = [
        ConsensusSpec::WeakUnanimity,
        ConsensusSpec::StrongUnanimity(Some(1)),
        ConsensusSpec::StrongUnanimity(Some(2)),
        ConsensusSpec::StrongUnanimity(None),
    ];
    let grounds = [
        GroundMetric::Discrete,
        GroundMetric::Kendall,
        GroundMetric::Footrule,
    ];
    for k in &consensuses {
        let outcomes = enumerate_s_rankings(3, k.output_size(3)).unwrap();
        for g in &grounds {
            for p in [Exponent::Finite(1), Exponent::Finite(2)] {
                let spec = VotewiseSpec::new(g.clone(), p, false);
                for n in 1..=4 {
                    for e in all_profiles(&abc(), n).unwrap() {
                        for r in &outcomes {
                            let closed = distance_to_consensus(k, &spec, &e, r).unwrap();
                            let brute = brute_min(&spec, &e.to_profile(), &class_members(k, 3, r));
                            assert_eq!(
                                closed,
                                Extended::Finite(brute),
                                "{k:?} {g:?} {p:?} {e:?} {r:?}"
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn delta_vanishes_exactly_on_the_class() {
    for m in 2..=4 {
        for s in 1..=m {
            let gu = GuClasses::prefix_classes(m, s).unwrap();
            for g in [
                GroundMetric::<Q>::Discrete,
                GroundMetric::Kendall,
                GroundMetric::Footrule,
            ] {
                assert!(distinguishes(&gu, &g).unwrap());
                let tables = VmpTables::new(gu.clone(), &g).unwrap();
                for r in tables.outcomes() {
                    let delta = tables.delta(r).unwrap();
                    for (t, ranking) in all_rankings(m).unwrap().iter().enumerate() {
                        assert_eq!(delta[t].is_zero(), r.is_prefix_of(ranking));
                    }
                }
            }
        }
    }
}

#[test]
fn condorcet_hamming_counts_changed_ballots() {
    let hamming = VotewiseSpec::new(GroundMetric::<Q>::Discrete, Exponent::Finite(1), false);
    for n in 1..=6u64 {
        let profiles: Vec<AnonymousProfile> = all_profiles(&abc(), n).unwrap().collect();
        for e in &profiles {
            for c in 0..3 {
                // Anonymous profiles align best by keeping their common ballots.
                let oracle = profiles
                    .iter()
                    .filter(|f| condorcet_winner(f) == Some(c))
                    .map(|f| {
                        n - e
                            .counts()
                            .iter()
                            .zip(f.counts())
                            .map(|(a, b)| *a.min(b))
                            .sum::<u64>()
                    })
                    .min();
                let d = distance_to_consensus(
                    &ConsensusSpec::Condorcet,
                    &hamming,
                    e,
                    &SRanking::single(c),
                )
                .unwrap();
                match oracle {
                    Some(k) => {
                        assert_eq!(d, Extended::Finite(Q::from_integer(k.into())), "{e:?} {c}");
                        assert!(k <= n);
                    }
                    None => assert!(d.is_infinite(), "{e:?} {c}"),
                }
            }
        }
    }
}

fn sign_matrices(m: usize) -> Vec<Vec<i64>> {
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
        .collect();
    let mut out = Vec::new();
    for code in 0..3usize.pow(pairs.len() as u32) {
        let mut t = vec![0i64; m * m];
        let mut c = code;
        for &(a, b) in &pairs {
            let s = (c % 3) as i64 - 1;
            c /= 3;
            t[a * m + b] = s;
            t[b * m + a] = -s;
        }
        out.push(t);
    }
    out
}

#[test]
fn copeland_tournament_score_matches_sign_search() {
    for m in 3..=4 {
        let c = CandidateSet::alphabetic(m).unwrap();
        let rule = DrRule::<Q>::new(
            RuleSpec {
                consensus: ConsensusSpec::Condorcet,
                distance: DistanceSpec::Tournament(TournamentSpec { reduced: true }),
            },
            m,
        )
        .unwrap();
        let targets = sign_matrices(m);
        let max_n = if m == 3 { 5 } else { 3 };
        for n in 1..=max_n {
            for e in all_profiles(&c, n).unwrap() {
                let signs: Vec<i64> = tournament_matrix(&e)
                    .entries()
                    .iter()
                    .map(|v| v.signum())
                    .collect();
                for (i, r) in rule.outcomes().iter().enumerate() {
                    let w = r.order()[0];
                    let oracle = targets
                        .iter()
                        .filter(|t| (0..m).all(|b| b == w || t[w * m + b] == 1))
                        .map(|t| {
                            t.iter()
                                .zip(&signs)
                                .map(|(x, y)| (x - y).abs())
                                .sum::<i64>()
                        })
                        .min()
                        .unwrap();
                    assert_eq!(
                        rule.score(&e, i).unwrap(),
                        Extended::Finite(Q::from_integer(oracle.into()))
                    );
                }
            }
        }
    }
}

#[test]
fn classical_identities_sampled_at_four_candidates() {
    for (lhs, rhs) in CLASSICAL_IDENTITIES {
        let report = check_identity_sampled(
            &parse_rule::<Q>(lhs, 4).unwrap(),
            &parse_rule::<Q>(rhs, 4).unwrap(),
            4,
            4,
            150,
            7,
        )
        .unwrap();
        assert!(report.passed(), "{lhs} vs {rhs}: {:?}", report.mismatch);
    }
}

#[test]
fn k_approval_is_a_weighted_footrule_rule() {
    for m in 3..=4 {
        for k in 1..m {
            let w: Vec<&str> = (0..m).map(|i| if i < k { "1" } else { "0" }).collect();
            let rhs = format!("dr(wunam,wfootrule({}),p=1)", w.join(";"));
            let lhs = parse_rule::<Q>(&format!("approval({k})"), m).unwrap();
            let rhs = parse_rule::<Q>(&rhs, m).unwrap();
            let report = if m == 3 {
                check_identity(&lhs, &rhs, m, 5).unwrap()
            } else {
                check_identity_sampled(&lhs, &rhs, m, 4, 150, 11).unwrap()
            };
            assert!(report.passed(), "k={k} m={m}: {:?}", report.mismatch);
        }
    }
}

const RULES: [&str; 8] = [
    "dr(wunam,kendall,p=1)",
    "dr(sunam,footrule,p=2)",
    "dr(sunam(2),hamming,p=inf)",
    "dr(wunam,borda-footrule,p=2,norm)",
    "dr(cond,hamming)",
    "dr(cond,kendall,p=2)",
    "dr(cond,rt)",
    "dr(sunam(1),lp,p=2)",
];

fn sorted(mut v: Vec<SRanking>) -> Vec<SRanking> {
    v.sort();
    v
}

fn profile_strategy() -> impl Strategy<Value = AnonymousProfile> {
    proptest::collection::vec(0u64..=2, 6)
        .prop_filter("nonempty", |c| c.iter().sum::<u64>() > 0)
        .prop_map(|c| AnonymousProfile::new(abc(), c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn winners_are_exact_argmins(e in profile_strategy(), ri in 0usize..RULES.len()) {
        let Rule::Dr(rule) = parse_rule::<Q>(RULES[ri], 3).unwrap() else { unreachable!() };
        let outcome = rule.outcome(&e).unwrap();
        let scores: Vec<Extended<Q>> = (0..rule.outcomes().len()).map(|i| rule.score(&e, i).unwrap()).collect();
        let best = scores.iter().filter_map(|s| s.finite()).min().unwrap().clone();
        for (r, s) in rule.outcomes().iter().zip(&scores) {
            let wins = outcome.winners.contains(r);
            prop_assert_eq!(wins, s.finite() == Some(&best), "{} {:?}", RULES[ri], r);
        }
    }

    #[test]
    fn rules_are_neutral(e in profile_strategy(), ri in 0usize..RULES.len(), pi in 0usize..6) {
        let rule = parse_rule::<Q>(RULES[ri], 3).unwrap();
        let perm = all_rankings(3).unwrap()[pi].order().to_vec();
        let moved = sorted(rule.outcome(&e).unwrap().winners.iter().map(|r| r.relabel(&perm)).collect());
        prop_assert_eq!(sorted(rule.outcome(&e.relabel(&perm)).unwrap().winners), moved);
    }

    #[test]
    fn unanimity_rules_are_homogeneous(e in profile_strategy(), ri in 0usize..4, k in 2u64..4) {
        let rule = parse_rule::<Q>(RULES[ri], 3).unwrap();
        prop_assert_eq!(
            sorted(rule.outcome(&e.scaled(k)).unwrap().winners),
            sorted(rule.outcome(&e).unwrap().winners)
        );
    }
}
