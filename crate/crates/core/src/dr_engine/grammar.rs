//! Textual rule names.
//!
//! ```text
//! rule      := oracle | "dr(" consensus "," distance ["," "p=" exp] ["," "norm"] ")"
//! consensus := "wunam" | "sunam" | "sunam(" s ")" | "cond" | "gu"
//! distance  := "hamming" | "discrete" | "kendall" | "footrule" | "borda-footrule"
//!            | "wfootrule(" w ";" ... ")" | "wkendall(" w ";" ... ")"
//!            | "t" | "rt" | "lp"
//! oracle    := "borda" | "plurality" | "kemeny" | "copeland" | "modal"
//!            | "approval(" k ")" | "scoring(" w ";" ... ")"
//! ```

use crate::consensus::{ConsensusSpec, GuClasses};
use crate::error::{Error, Result};
use crate::metrics::{Exponent, TournamentSpec, VotewiseSpec};
use crate::rankings::GroundMetric;
use crate::scalar::Scalar;

use super::oracles::OracleKind;
use super::rule::{DistanceSpec, DrRule, Rule, RuleSpec};

fn bad(text: &str, message: impl std::fmt::Display) -> Error {
    Error::InvalidSpec(format!("rule `{text}`: {message}"))
}

/// Splits on top-level commas.
fn split_args(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

/// `name(args)` to `(name, Some(args))`; bare names to `(name, None)`.
fn call(s: &str) -> Option<(&str, Option<&str>)> {
    match s.find('(') {
        None => Some((s.trim(), None)),
        Some(i) => {
            let inner = s[i + 1..].strip_suffix(')')?;
            Some((s[..i].trim(), Some(inner.trim())))
        }
    }
}

fn weights<S: Scalar>(text: &str, args: Option<&str>) -> Result<Vec<S>> {
    let args = args.ok_or_else(|| bad(text, "weights expected"))?;
    args.split(';').map(|w| S::parse_ratio(w.trim())).collect()
}

fn oracle<S: Scalar>(text: &str, name: &str, args: Option<&str>) -> Result<Option<OracleKind<S>>> {
    let no_args = |k| match args {
        None => Ok(Some(k)),
        Some(_) => Err(bad(text, format!("`{name}` takes no arguments"))),
    };
    match name {
        "borda" => no_args(OracleKind::Borda),
        "plurality" => no_args(OracleKind::Plurality),
        "kemeny" => no_args(OracleKind::Kemeny),
        "copeland" => no_args(OracleKind::Copeland),
        "modal" | "modal_ranking" => no_args(OracleKind::ModalRanking),
        "approval" | "k-approval" => {
            let k = args
                .and_then(|a| a.parse::<usize>().ok())
                .ok_or_else(|| bad(text, "approval needs a positive integer"))?;
            Ok(Some(OracleKind::KApproval(k)))
        }
        "scoring" => Ok(Some(OracleKind::Scoring(weights(text, args)?))),
        _ => Ok(None),
    }
}

fn consensus<S: Scalar>(text: &str, arg: &str, gu: Option<GuClasses>) -> Result<ConsensusSpec<S>> {
    let (name, args) = call(arg).ok_or_else(|| bad(text, "unbalanced parentheses"))?;
    match (name, args) {
        ("wunam", None) => Ok(ConsensusSpec::WeakUnanimity),
        ("sunam", None) => Ok(ConsensusSpec::StrongUnanimity(None)),
        ("sunam", Some(s)) => {
            let s = s
                .parse::<usize>()
                .map_err(|_| bad(text, format!("bad prefix length `{s}`")))?;
            Ok(ConsensusSpec::StrongUnanimity(Some(s)))
        }
        ("cond", None) => Ok(ConsensusSpec::Condorcet),
        ("gu", None) => gu
            .map(ConsensusSpec::GeneralizedUnanimity)
            .ok_or_else(|| bad(text, "`gu` needs a class file")),
        _ => Err(bad(text, format!("unknown consensus `{arg}`"))),
    }
}

fn ground<S: Scalar>(
    text: &str,
    name: &str,
    args: Option<&str>,
    m: usize,
) -> Result<Option<GroundMetric<S>>> {
    Ok(Some(match (name, args) {
        ("hamming" | "discrete", None) => GroundMetric::Discrete,
        ("kendall", None) => GroundMetric::Kendall,
        ("footrule", None) => GroundMetric::Footrule,
        ("borda-footrule", None) => GroundMetric::WeightedFootrule(GroundMetric::borda_weights(m)),
        ("wfootrule", a) => GroundMetric::WeightedFootrule(weights(text, a)?),
        ("wkendall", a) => GroundMetric::WeightedKendall(weights(text, a)?),
        _ => return Ok(None),
    }))
}

/// Parses a rule for `m` candidates. `gu` supplies the classes for the `gu`
/// consensus.
pub fn parse_rule_with<S: Scalar>(text: &str, m: usize, gu: Option<GuClasses>) -> Result<Rule<S>> {
    let compact: String = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_lowercase();
    let (name, args) = call(&compact).ok_or_else(|| bad(text, "unbalanced parentheses"))?;
    if name != "dr" {
        return match oracle(text, name, args)? {
            Some(kind) => {
                if let Some(w) = kind.weights(m) {
                    if w.len() != m {
                        return Err(bad(text, format!("{} weights for {m} candidates", w.len())));
                    }
                }
                Ok(Rule::Oracle(kind))
            }
            None => Err(bad(text, format!("unknown rule `{name}`"))),
        };
    }
    let args = split_args(args.ok_or_else(|| bad(text, "dr needs arguments"))?);
    if args.len() < 2 {
        return Err(bad(text, "dr needs a consensus and a distance"));
    }
    let k = consensus(text, args[0], gu)?;
    let mut p = None;
    let mut normalized = false;
    for opt in &args[2..] {
        if let Some(v) = opt.strip_prefix("p=") {
            p = Some(v.parse::<Exponent>().map_err(|e| bad(text, e))?);
        } else if *opt == "norm" {
            normalized = true;
        } else {
            return Err(bad(text, format!("unknown option `{opt}`")));
        }
    }
    let (dname, dargs) = call(args[1]).ok_or_else(|| bad(text, "unbalanced parentheses"))?;
    let distance = match (dname, dargs) {
        ("t" | "rt", None) => {
            if p.is_some() || normalized {
                return Err(bad(text, "tournament distances take no options"));
            }
            DistanceSpec::Tournament(TournamentSpec {
                reduced: dname == "rt",
            })
        }
        ("lp", None) => {
            if normalized {
                return Err(bad(text, "`norm` does not apply to lp"));
            }
            DistanceSpec::SimplexLp(p.unwrap_or(Exponent::Finite(1)))
        }
        _ => {
            let g = ground(text, dname, dargs, m)?
                .ok_or_else(|| bad(text, format!("unknown distance `{}`", args[1])))?;
            g.validate(m)?;
            DistanceSpec::Votewise(VotewiseSpec::new(
                g,
                p.unwrap_or(Exponent::Finite(1)),
                normalized,
            ))
        }
    };
    Ok(Rule::Dr(DrRule::new(
        RuleSpec {
            consensus: k,
            distance,
        },
        m,
    )?))
}

/// Parses a consensus name on its own (`wunam`, `sunam(2)`, `cond`, `gu`).
pub fn parse_consensus<S: Scalar>(text: &str, gu: Option<GuClasses>) -> Result<ConsensusSpec<S>> {
    let compact: String = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_lowercase();
    consensus(text, &compact, gu)
}

pub fn parse_rule<S: Scalar>(text: &str, m: usize) -> Result<Rule<S>> {
    parse_rule_with(text, m, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn splits_nested_arguments() {
        assert_eq!(split_args("a,b(1,2),c"), vec!["a", "b(1,2)", "c"]);
    }

    #[test]
    fn parses_dr_rules() {
        let r = parse_rule::<Q>("dr(sunam, footrule, p=2, norm)", 3).unwrap();
        let Rule::Dr(d) = r else { panic!() };
        assert_eq!(
            d.spec().distance,
            DistanceSpec::Votewise(VotewiseSpec::new(
                GroundMetric::Footrule,
                Exponent::Finite(2),
                true
            ))
        );
        assert!(parse_rule::<Q>("dr(wunam,wfootrule(2;1;0))", 3).is_ok());
        assert!(parse_rule::<Q>("dr(sunam(1),lp,p=inf)", 3).is_ok());
        assert!(parse_rule::<Q>("dr(cond,lp)", 3).is_err());
        assert!(parse_rule::<Q>("dr(cond,rt)", 3).is_ok());
        assert!(parse_rule::<Q>("dr(sunam(2),hamming,p=inf)", 3).is_ok());
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            "dr(wunam)",
            "dr(wunam,kendall,p=1/2)",
            "dr(gu,kendall)",
            "dr(nope,kendall)",
            "dr(cond,t)",
            "dr(wunam,wfootrule(0;1;2))",
            "scoring(1;0)",
            "bogus",
            "dr(wunam,kendall",
        ] {
            assert!(parse_rule::<Q>(text, 3).is_err(), "{text}");
        }
    }

    #[test]
    fn parses_oracles() {
        for (text, want) in [
            ("borda", OracleKind::<Q>::Borda),
            ("Approval(2)", OracleKind::KApproval(2)),
            ("modal_ranking", OracleKind::ModalRanking),
        ] {
            match parse_rule::<Q>(text, 3).unwrap() {
                Rule::Oracle(k) => assert_eq!(k, want),
                _ => panic!(),
            }
        }
    }
}
