//! Batch front-end for `drvote`. [`run`] is the whole program; `main` only
//! forwards its output and exit code.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use drvote::consensus::{parse_gu_json, ConsensusSpec, GuClasses, PointClasses};
use drvote::dr_engine::{
    boundary_fraction, check_identity, chunk_rng, consensus_diagnostics, half_half,
    parse_consensus, parse_rule, parse_rule_with, sample_profile, Check, DiagnosticBounds, Rule,
    Sampler, CLASSICAL_IDENTITIES,
};
use drvote::elections::{format_profile, parse_profile, parse_simplex_point, AnonymousProfile};
use drvote::geometry::{large_bisector_in_simplex, large_bisector_l1, partition_solve};
use drvote::metrics::Exponent;
use drvote::rankings::{CandidateSet, GroundMetric, SRanking};
use drvote::transport::wasserstein_with;
use drvote::{Error, Rational, Scalar};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "drvote", version, about = "Distance-rationalized voting rules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct EmitArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Emit::Json)]
    emit: Emit,
    /// Decimal digits in CSV output.
    #[arg(long, default_value_t = 6)]
    precision: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Emit {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Culture {
    /// Impartial culture.
    Ic,
    /// Uniform over anonymous profiles.
    Simplex,
}

impl From<Culture> for Sampler {
    fn from(c: Culture) -> Sampler {
        match c {
            Culture::Ic => Sampler::ImpartialCulture,
            Culture::Simplex => Sampler::UniformSimplex,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Winners of a rule on a profile file.
    Winners {
        #[arg(long)]
        rule: String,
        #[arg(long)]
        profile: String,
        /// Class file for the `gu` consensus.
        #[arg(long)]
        gu: Option<String>,
        /// Keep only the lexicographically first winner.
        #[arg(long)]
        tie_break: bool,
        #[command(flatten)]
        emit: EmitArgs,
    },
    /// Scores of every outcome.
    Score {
        #[arg(long)]
        rule: String,
        #[arg(long)]
        profile: String,
        #[arg(long)]
        gu: Option<String>,
        #[command(flatten)]
        emit: EmitArgs,
    },
    /// Wasserstein distance between two simplex points.
    Wasserstein {
        #[arg(long)]
        ground: String,
        #[arg(long, default_value = "1")]
        p: String,
        x: String,
        y: String,
        /// Admit 7 or 8 candidates (dense cost tables of 5040^2 or 40320^2 entries).
        #[arg(long)]
        allow_large: bool,
        #[command(flatten)]
        emit: EmitArgs,
    },
    /// Large-bisector test for two points under l1.
    Bisector {
        #[arg(long, required = true)]
        l1: bool,
        /// Also test inside the vote simplex.
        #[arg(long)]
        simplex: bool,
        x: String,
        y: String,
    },
    /// Equal-sum split of nonnegative integers.
    Partition {
        #[arg(required = true)]
        values: Vec<u64>,
    },
    /// Check rule identities exhaustively.
    Verify {
        #[arg(long, default_value = "identities")]
        suite: String,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 5)]
        nmax: u64,
    },
    /// Estimate the fraction of tied profiles.
    Boundary {
        #[arg(long)]
        rule: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Culture::Ic)]
        culture: Culture,
        /// Worker threads (the estimate does not depend on it).
        #[arg(long)]
        threads: Option<usize>,
        #[command(flatten)]
        emit: EmitArgs,
    },
    /// Property checks on a consensus.
    Diagnose {
        /// wunam, sunam, sunam(s), cond, gu or nonconvex.
        #[arg(long)]
        consensus: String,
        /// Comma-separated checks; all when omitted.
        #[arg(long)]
        checks: Option<String>,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long)]
        gu: Option<String>,
        /// Largest voter count in the separation schedule.
        #[arg(long, default_value_t = 40)]
        nmax: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        emit: EmitArgs,
    },
    /// Random profile in the text format.
    Gen {
        #[arg(long, value_enum, default_value_t = Culture::Ic)]
        culture: Culture,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Capacity(_) => EXIT_CAPACITY,
            Error::Internal(_) => EXIT_FAILED,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn read(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))
}

fn in_file<T>(path: &str, r: drvote::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{path}: {}", f.message);
        f
    })
}

/// `r` rounded half away from zero to `digits` decimals.
pub fn decimal(r: &Rational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled: BigInt = r.numer().abs() * &scale * 2 + r.denom();
    let (q, _) = scaled.div_rem(&(r.denom() * 2));
    let sign = if r.is_negative() && !q.is_zero() {
        "-"
    } else {
        ""
    };
    let text = q.to_string();
    if digits == 0 {
        return format!("{sign}{text}");
    }
    let padded = format!("{text:0>width$}", width = digits + 1);
    let (int, frac) = padded.split_at(padded.len() - digits);
    format!("{sign}{int}.{frac}")
}

fn ratio_decimal(text: &str, digits: usize) -> String {
    match Rational::parse_ratio(text) {
        Ok(r) => decimal(&r, digits),
        Err(_) => text.to_string(),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn load_gu(path: Option<&str>, candidates: &CandidateSet) -> Result<Option<GuClasses>, Failure> {
    match path {
        None => Ok(None),
        Some(p) => Ok(Some(in_file(p, parse_gu_json(&read(p)?, candidates))?)),
    }
}

fn load_rule(
    rule: &str,
    profile: &str,
    gu: Option<&str>,
) -> Result<(Rule<Rational>, AnonymousProfile), Failure> {
    let e = in_file(profile, parse_profile(&read(profile)?))?;
    let classes = load_gu(gu, e.candidates())?;
    let rule = parse_rule_with(rule, e.candidates().len(), classes)?;
    Ok((rule, e))
}

fn ground_metric(name: &str, m: usize) -> Result<GroundMetric<Rational>, Failure> {
    let rule = parse_rule::<Rational>(&format!("dr(wunam,{name})"), m)?;
    match rule {
        Rule::Dr(d) => match &d.spec().distance {
            drvote::dr_engine::DistanceSpec::Votewise(v) => Ok(v.ground.clone()),
            _ => Err(usage(format!("`{name}` is not a ground metric"))),
        },
        Rule::Oracle(_) => Err(usage(format!("`{name}` is not a ground metric"))),
    }
}

fn nonconvex_consensus() -> Result<ConsensusSpec<Rational>, Failure> {
    let c = CandidateSet::alphabetic(3)?;
    let bca = c.parse_ranking("b>c>a")?;
    let cba = c.parse_ranking("c>b>a")?;
    Ok(ConsensusSpec::Augmented {
        base: Box::new(ConsensusSpec::WeakUnanimity),
        extra: PointClasses {
            s: 1,
            classes: vec![(SRanking::single(0), vec![half_half(3, &bca, &cba)?])],
        },
    })
}

fn execute(cli: Cli) -> Result<(i32, String), Failure> {
    match cli.command {
        Command::Winners {
            rule,
            profile,
            gu,
            tie_break,
            emit,
        } => {
            let (rule, e) = load_rule(&rule, &profile, gu.as_deref())?;
            let mut out = rule.outcome(&e)?;
            if tie_break {
                out.winners.sort();
                out.winners.truncate(1);
            }
            let names: Vec<String> = out
                .winners
                .iter()
                .map(|w| w.display(e.candidates()))
                .collect();
            Ok((
                EXIT_OK,
                match emit.emit {
                    Emit::Json => pretty(&out.to_json(e.candidates())),
                    Emit::Csv => {
                        let mut s = String::from("winner\n");
                        for n in names {
                            let _ = writeln!(s, "{n}");
                        }
                        s
                    }
                },
            ))
        }
        Command::Score {
            rule,
            profile,
            gu,
            emit,
        } => {
            let (rule, e) = load_rule(&rule, &profile, gu.as_deref())?;
            let out = rule.outcome(&e)?;
            let rows: Vec<(String, String)> = out
                .outcomes
                .iter()
                .zip(&out.scores)
                .map(|(o, s)| (o.display(e.candidates()), s.to_ratio_string()))
                .collect();
            Ok((
                EXIT_OK,
                match emit.emit {
                    Emit::Json => pretty(&json!({
                        "objective": out.to_json(e.candidates())["objective"],
                        "scores": rows.iter().map(|(o, s)| json!({"outcome": o, "score": s})).collect::<Vec<_>>(),
                    })),
                    Emit::Csv => {
                        let mut s = String::from("outcome,score,decimal\n");
                        for (o, v) in rows {
                            let _ = writeln!(s, "{o},{v},{}", ratio_decimal(&v, emit.precision));
                        }
                        s
                    }
                },
            ))
        }
        Command::Wasserstein {
            ground,
            p,
            x,
            y,
            allow_large,
            emit,
        } => {
            let xs = in_file(&x, parse_simplex_point::<Rational>(&read(&x)?))?;
            let ys = in_file(&y, parse_simplex_point::<Rational>(&read(&y)?))?;
            let g = ground_metric(&ground, xs.candidates().len())?;
            let p: Exponent = p.parse()?;
            let t = wasserstein_with(&g, p, &xs, &ys, allow_large)?;
            Ok((
                EXIT_OK,
                match emit.emit {
                    Emit::Json => pretty(&t.to_json()),
                    Emit::Csv => {
                        let mut s = String::from("from,to,mass,decimal\n");
                        let names = drvote::rankings::all_rankings(xs.candidates().len())?;
                        for (i, j, mass) in &t.coupling {
                            let _ = writeln!(
                                s,
                                "{},{},{},{}",
                                names[*i].display(xs.candidates()),
                                names[*j].display(xs.candidates()),
                                mass.to_ratio_string(),
                                decimal(mass, emit.precision)
                            );
                        }
                        s
                    }
                },
            ))
        }
        Command::Bisector { l1, simplex, x, y } => {
            if !l1 {
                return Err(usage("only --l1 bisectors are supported"));
            }
            let xs = in_file(
                &x,
                drvote::elections::parse_rational_vector::<Rational>(&read(&x)?),
            )?;
            let ys = in_file(
                &y,
                drvote::elections::parse_rational_vector::<Rational>(&read(&y)?),
            )?;
            let mut v = large_bisector_l1(&xs, &ys)?.to_json();
            if simplex {
                let inner = large_bisector_in_simplex(&xs, &ys)?;
                v["simplex"] = json!({
                    "large": inner.is_some(),
                    "point": inner.map(|z| z.iter().map(|a| a.to_ratio_string()).collect::<Vec<_>>()),
                });
            }
            Ok((EXIT_OK, pretty(&v)))
        }
        Command::Partition { values } => Ok((
            EXIT_OK,
            match partition_solve(&values)? {
                None => "none\n".into(),
                Some(side) => pretty(&json!({
                    "subset": side,
                    "complement": (0..values.len()).filter(|i| !side.contains(i)).collect::<Vec<_>>(),
                })),
            },
        )),
        Command::Verify { suite, m, nmax } => verify(&suite, m, nmax),
        Command::Boundary {
            rule,
            m,
            n,
            trials,
            seed,
            culture,
            threads,
            emit,
        } => {
            let r = parse_rule::<Rational>(&rule, m)?;
            let run = || boundary_fraction(&r, m, n, culture.into(), trials, seed);
            let est = match threads {
                None => run()?,
                Some(t) => rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build()
                    .map_err(|e| usage(e.to_string()))?
                    .install(run)?,
            };
            let fraction = est.fraction.to_ratio_string();
            Ok((
                EXIT_OK,
                match emit.emit {
                    Emit::Json => pretty(&json!({
                        "rule": rule,
                        "m": m,
                        "n": n,
                        "seed": seed,
                        "trials": est.trials,
                        "tied": est.tied,
                        "fraction": fraction,
                        "radius95": format!("{:.6}", est.radius),
                    })),
                    Emit::Csv => format!(
                        "n,trials,tied,fraction,decimal\n{n},{},{},{fraction},{}\n",
                        est.trials,
                        est.tied,
                        decimal(&est.fraction, emit.precision)
                    ),
                },
            ))
        }
        Command::Diagnose {
            consensus,
            checks,
            m,
            gu,
            nmax,
            seed,
            emit,
        } => {
            let candidates = CandidateSet::alphabetic(m)?;
            let k = if consensus.trim() == "nonconvex" {
                if m != 3 {
                    return Err(usage("the nonconvex example has 3 candidates"));
                }
                nonconvex_consensus()?
            } else {
                parse_consensus(&consensus, load_gu(gu.as_deref(), &candidates)?)?
            };
            let checks: Vec<Check> = match checks {
                None => Check::ALL.to_vec(),
                Some(list) => list
                    .split(',')
                    .map(|c| Check::parse(c).ok_or_else(|| usage(format!("unknown check `{c}`"))))
                    .collect::<Result<_, _>>()?,
            };
            let bounds = DiagnosticBounds {
                separation_n_max: nmax,
                seed,
                ..DiagnosticBounds::default()
            };
            let report = consensus_diagnostics(&k, &checks, m, &bounds)?;
            Ok((
                EXIT_OK,
                match emit.emit {
                    Emit::Json => pretty(&report.to_json()),
                    Emit::Csv => {
                        let mut s = String::from("check,n,infimum,decimal\n");
                        for r in &report.results {
                            for (n, v) in &r.series {
                                let _ = writeln!(
                                    s,
                                    "{},{n},{},{}",
                                    r.check,
                                    v.to_ratio_string(),
                                    decimal(v, emit.precision)
                                );
                            }
                        }
                        s
                    }
                },
            ))
        }
        Command::Gen {
            culture,
            m,
            n,
            seed,
        } => {
            let candidates = CandidateSet::alphabetic(m)?;
            let mut rng = chunk_rng(seed, 0);
            let e = sample_profile(&candidates, n, culture.into(), &mut rng)?;
            Ok((EXIT_OK, format_profile(&e)))
        }
    }
}

fn verify(suite: &str, m: usize, nmax: u64) -> Result<(i32, String), Failure> {
    if suite != "identities" {
        return Err(usage(format!("unknown suite `{suite}`")));
    }
    let mut out = String::new();
    let mut code = EXIT_OK;
    for (oracle, dr) in CLASSICAL_IDENTITIES {
        let lhs = parse_rule::<Rational>(oracle, m)?;
        let rhs = parse_rule::<Rational>(dr, m)?;
        let report = check_identity(&lhs, &rhs, m, nmax)?;
        let status = if report.passed() { "pass" } else { "FAIL" };
        let _ = write!(
            out,
            "{status}  {oracle} = {dr}  ({} profiles)",
            report.profiles_checked
        );
        if let Some(mm) = &report.mismatch {
            code = EXIT_FAILED;
            let _ = write!(out, "  counterexample counts {:?}", mm.profile.counts());
        }
        out.push('\n');
    }
    Ok((code, out))
}

/// Runs the program on `argv` (including the program name).
pub fn run<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Output {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(cli) {
        Ok((code, stdout)) => Output {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(f) => Output {
            code: f.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_round_half_away_from_zero() {
        let r = |s: &str| Rational::parse_ratio(s).unwrap();
        assert_eq!(decimal(&r("3/5"), 3), "0.600");
        assert_eq!(decimal(&r("2/3"), 2), "0.67");
        assert_eq!(decimal(&r("-1/8"), 2), "-0.13");
        assert_eq!(decimal(&r("1/1000"), 2), "0.00");
        assert_eq!(decimal(&r("7/2"), 0), "4");
        assert_eq!(decimal(&r("123/10"), 1), "12.3");
    }
}
