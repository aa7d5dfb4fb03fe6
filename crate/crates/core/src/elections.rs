//! Profiles, anonymous profiles, simplex points and tournament matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rankings::{all_rankings, CandidateSet, Ranking};
use crate::scalar::{sum, Scalar};

/// Ballot list: voter `i` submitted `ballots[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    candidates: CandidateSet,
    ballots: Vec<Ranking>,
}

impl Profile {
    pub fn new(candidates: CandidateSet, ballots: Vec<Ranking>) -> Result<Self> {
        if ballots.is_empty() {
            return Err(Error::InvalidSpec("profile has no voters".into()));
        }
        if let Some(b) = ballots.iter().find(|b| b.len() != candidates.len()) {
            return Err(Error::Mismatch(format!(
                "ballot over {} candidates in a profile over {}",
                b.len(),
                candidates.len()
            )));
        }
        Ok(Profile {
            candidates,
            ballots,
        })
    }

    pub fn candidates(&self) -> &CandidateSet {
        &self.candidates
    }

    pub fn ballots(&self) -> &[Ranking] {
        &self.ballots
    }

    pub fn voters(&self) -> usize {
        self.ballots.len()
    }

    /// `k` consecutive copies of every ballot.
    pub fn replicate(&self, k: usize) -> Profile {
        let ballots = self
            .ballots
            .iter()
            .flat_map(|b| std::iter::repeat_n(b.clone(), k))
            .collect();
        Profile {
            candidates: self.candidates.clone(),
            ballots,
        }
    }
}

/// Ballot-type counts indexed by the lexicographic ranking order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AnonymousProfile {
    candidates: CandidateSet,
    counts: Vec<u64>,
}

impl AnonymousProfile {
    pub fn new(candidates: CandidateSet, counts: Vec<u64>) -> Result<Self> {
        let m_fact = all_rankings(candidates.len())?.len();
        if counts.len() != m_fact {
            return Err(Error::Mismatch(format!(
                "{} counts for {} rankings",
                counts.len(),
                m_fact
            )));
        }
        if counts.iter().all(|&c| c == 0) {
            return Err(Error::InvalidSpec("profile has no voters".into()));
        }
        Ok(AnonymousProfile { candidates, counts })
    }

    /// Every voter submits `ranking`.
    pub fn unanimous(candidates: CandidateSet, ranking: &Ranking, n: u64) -> Result<Self> {
        let mut counts = vec![0; all_rankings(candidates.len())?.len()];
        counts[ranking.lex_index()] = n;
        Self::new(candidates, counts)
    }

    pub fn candidates(&self) -> &CandidateSet {
        &self.candidates
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn voters(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn rankings(&self) -> &'static [Ranking] {
        all_rankings(self.candidates.len()).expect("validated at construction")
    }

    /// Nonzero ballot types with their multiplicities.
    pub fn support(&self) -> impl Iterator<Item = (&'static Ranking, u64)> + '_ {
        self.rankings()
            .iter()
            .zip(&self.counts)
            .filter(|(_, &c)| c > 0)
            .map(|(r, &c)| (r, c))
    }

    /// The ballot list in canonical order.
    pub fn to_profile(&self) -> Profile {
        let ballots = self
            .support()
            .flat_map(|(r, c)| std::iter::repeat_n(r.clone(), c as usize))
            .collect();
        Profile {
            candidates: self.candidates.clone(),
            ballots,
        }
    }

    /// `k` copies of every voter.
    pub fn scaled(&self, k: u64) -> AnonymousProfile {
        AnonymousProfile {
            candidates: self.candidates.clone(),
            counts: self.counts.iter().map(|c| c * k).collect(),
        }
    }

    /// Union of the two voter sets.
    pub fn concat(&self, other: &AnonymousProfile) -> Result<AnonymousProfile> {
        if self.candidates != other.candidates {
            return Err(Error::Mismatch("different candidate sets".into()));
        }
        Ok(AnonymousProfile {
            candidates: self.candidates.clone(),
            counts: self
                .counts
                .iter()
                .zip(&other.counts)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Relabels candidates inside every ballot (candidate `c` becomes `perm[c]`).
    pub fn relabel(&self, perm: &[usize]) -> AnonymousProfile {
        let mut counts = vec![0; self.counts.len()];
        for (r, c) in self.support() {
            counts[r.relabel(perm).lex_index()] += c;
        }
        AnonymousProfile {
            candidates: self.candidates.clone(),
            counts,
        }
    }

    /// `n_ab`: number of voters ranking `a` above `b`, row-major `m x m`.
    pub fn pairwise_counts(&self) -> Vec<u64> {
        let m = self.candidates.len();
        let mut n = vec![0u64; m * m];
        for (r, c) in self.support() {
            let order = r.order();
            for i in 0..m {
                for j in i + 1..m {
                    n[order[i] * m + order[j]] += c;
                }
            }
        }
        n
    }
}

/// Forgets voter identities.
pub fn vote_number_map(profile: &Profile) -> AnonymousProfile {
    let m_fact = all_rankings(profile.candidates.len())
        .expect("profile candidate count is bounded")
        .len();
    let mut counts = vec![0u64; m_fact];
    for b in &profile.ballots {
        counts[b.lex_index()] += 1;
    }
    AnonymousProfile {
        candidates: profile.candidates.clone(),
        counts,
    }
}

/// Rational frequency vector over all rankings, summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint<S> {
    candidates: CandidateSet,
    coords: Vec<S>,
}

impl<S: Scalar> SimplexPoint<S> {
    pub fn new(candidates: CandidateSet, coords: Vec<S>) -> Result<Self> {
        let m_fact = all_rankings(candidates.len())?.len();
        if coords.len() != m_fact {
            return Err(Error::Mismatch(format!(
                "{} coordinates for {} rankings",
                coords.len(),
                m_fact
            )));
        }
        if coords.iter().any(|x| x.is_negative()) {
            return Err(Error::InvalidSpec("negative simplex coordinate".into()));
        }
        let total: S = sum(&coords);
        if !total.close_to(&S::one()) {
            return Err(Error::InvalidSpec(format!(
                "coordinates sum to {}, not 1",
                total.to_ratio_string()
            )));
        }
        Ok(SimplexPoint { candidates, coords })
    }

    /// The corner `e_t` for ranking `t`.
    pub fn corner(candidates: CandidateSet, ranking: &Ranking) -> Result<Self> {
        let m_fact = all_rankings(candidates.len())?.len();
        let mut coords = vec![S::zero(); m_fact];
        coords[ranking.lex_index()] = S::one();
        Ok(SimplexPoint { candidates, coords })
    }

    /// The center `(1/M, ..., 1/M)`.
    pub fn center(candidates: CandidateSet) -> Result<Self> {
        let m_fact = all_rankings(candidates.len())?.len();
        let c = S::from_ratio(1, m_fact as i64);
        Ok(SimplexPoint {
            candidates,
            coords: vec![c; m_fact],
        })
    }

    pub fn candidates(&self) -> &CandidateSet {
        &self.candidates
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn rankings(&self) -> &'static [Ranking] {
        all_rankings(self.candidates.len()).expect("validated at construction")
    }
}

/// Relative frequencies `counts / n`.
pub fn vote_distribution<S: Scalar>(profile: &AnonymousProfile) -> SimplexPoint<S> {
    let n = profile.voters() as i64;
    SimplexPoint {
        candidates: profile.candidates.clone(),
        coords: profile
            .counts
            .iter()
            .map(|&c| S::from_ratio(c as i64, n))
            .collect(),
    }
}

/// Inverse of [`vote_distribution`] at voter count `n`.
pub fn realize<S: Scalar>(x: &SimplexPoint<S>, n: u64) -> Result<AnonymousProfile> {
    if n == 0 {
        return Err(Error::InvalidSpec("voter count must be positive".into()));
    }
    let scale = S::from_int(n as i64);
    let counts = x
        .coords
        .iter()
        .enumerate()
        .map(|(i, v)| {
            (v.clone() * scale.clone())
                .integer_value()
                .filter(|c| *c >= 0)
                .map(|c| c as u64)
                .ok_or(Error::NonIntegral { coordinate: i })
        })
        .collect::<Result<Vec<_>>>()?;
    AnonymousProfile::new(x.candidates.clone(), counts)
}

/// Net pairwise support matrix: entry `(a, b)` is `n_ab - n_ba`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TournamentMatrix {
    m: usize,
    entries: Vec<i64>,
}

impl TournamentMatrix {
    /// Row-major `m x m` entries; must be antisymmetric.
    pub fn from_entries(m: usize, entries: Vec<i64>) -> Result<Self> {
        if entries.len() != m * m {
            return Err(Error::Mismatch(format!(
                "{} entries for a {m} x {m} matrix",
                entries.len()
            )));
        }
        for a in 0..m {
            for b in 0..m {
                if entries[a * m + b] != -entries[b * m + a] {
                    return Err(Error::InvalidSpec(
                        "tournament matrix must be antisymmetric".into(),
                    ));
                }
            }
        }
        Ok(TournamentMatrix { m, entries })
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn entry(&self, a: usize, b: usize) -> i64 {
        self.entries[a * self.m + b]
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    /// Componentwise sign.
    pub fn reduced(&self) -> TournamentMatrix {
        TournamentMatrix {
            m: self.m,
            entries: self.entries.iter().map(|e| e.signum()).collect(),
        }
    }

    /// Entrywise l1 norm of the difference.
    pub fn l1_distance(&self, other: &TournamentMatrix) -> Result<u64> {
        if self.m != other.m {
            return Err(Error::Mismatch("tournaments of different sizes".into()));
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.abs_diff(*b))
            .sum())
    }
}

pub fn tournament_matrix(profile: &AnonymousProfile) -> TournamentMatrix {
    let m = profile.candidates.len();
    let n = profile.pairwise_counts();
    let mut entries = vec![0i64; m * m];
    for a in 0..m {
        for b in 0..m {
            if a != b {
                entries[a * m + b] = n[a * m + b] as i64 - n[b * m + a] as i64;
            }
        }
    }
    TournamentMatrix { m, entries }
}

/// The candidate beating every other candidate by a strict majority of ballots.
pub fn condorcet_winner(profile: &AnonymousProfile) -> Option<usize> {
    let t = tournament_matrix(profile);
    (0..t.m).find(|&c| (0..t.m).all(|b| b == c || t.entry(c, b) > 0))
}

/// Iterator over all vectors of `parts` nonnegative integers summing to `total`,
/// in lexicographically decreasing order of the first coordinate.
pub struct Compositions {
    current: Vec<u64>,
    total: u64,
    done: bool,
}

impl Compositions {
    pub fn new(total: u64, parts: usize) -> Self {
        let mut current = vec![0; parts];
        let done = parts == 0;
        if !done {
            current[0] = total;
        }
        Compositions {
            current,
            total,
            done,
        }
    }
}

impl Iterator for Compositions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let k = self.current.len();
        // Move one unit from the rightmost nonzero non-last part to its right neighbour,
        // collecting everything past it.
        let mut i = k.saturating_sub(1);
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.current[i] > 0 {
                let tail: u64 = self.current[i + 1..].iter().sum();
                self.current[i] -= 1;
                for v in &mut self.current[i + 1..] {
                    *v = 0;
                }
                self.current[i + 1] = tail + 1;
                break;
            }
        }
        if k == 1 {
            self.done = true;
        }
        let _ = self.total;
        Some(out)
    }
}

/// Number of compositions of `total` into `parts` parts, saturating.
pub fn composition_count(total: u64, parts: usize) -> u128 {
    if parts == 0 {
        return u128::from(total == 0);
    }
    // C(total + parts - 1, parts - 1)
    let k = (parts - 1) as u128;
    let n = total as u128 + k;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// All anonymous profiles with exactly `n` voters.
pub fn all_profiles(
    candidates: &CandidateSet,
    n: u64,
) -> Result<impl Iterator<Item = AnonymousProfile>> {
    let m_fact = all_rankings(candidates.len())?.len();
    let candidates = candidates.clone();
    Ok(
        Compositions::new(n, m_fact).map(move |counts| AnonymousProfile {
            candidates: candidates.clone(),
            counts,
        }),
    )
}

// ---------------------------------------------------------------------------
// Text and JSON formats

/// Parses the profile text format: one ballot per line (`a>b>c`), an optional
/// `k: ` multiplicity prefix, `#` comments, and an optional
/// `candidates: a, b, c` line fixing the candidate order. Without that line the
/// candidates of the first ballot are used in sorted label order.
pub fn parse_profile(text: &str) -> Result<AnonymousProfile> {
    let profile = parse_profile_ballots(text)?;
    Ok(vote_number_map(&profile))
}

/// As [`parse_profile`], keeping the voter order.
pub fn parse_profile_ballots(text: &str) -> Result<Profile> {
    let mut candidates: Option<CandidateSet> = None;
    let mut ballots = Vec::new();
    for (line_no, raw) in text.lines().enumerate() {
        let line_no = line_no + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        let content = content.trim();
        if let Some(rest) = content.strip_prefix("candidates:") {
            if candidates.is_some() || !ballots.is_empty() {
                return Err(Error::parse(
                    line_no,
                    indent + 1,
                    "candidate line must precede all ballots and appear once",
                ));
            }
            let names: Vec<&str> = rest.split(',').map(str::trim).collect();
            candidates = Some(
                CandidateSet::new(names)
                    .map_err(|e| Error::parse(line_no, indent + 12, e.to_string()))?,
            );
            continue;
        }
        let (mult, ballot_text, ballot_col) = match content.split_once(':') {
            Some((k, rest)) => {
                let k: u64 = k.trim().parse().map_err(|_| {
                    Error::parse(
                        line_no,
                        indent + 1,
                        format!("bad multiplicity `{}`", k.trim()),
                    )
                })?;
                let offset = content.len() - rest.len();
                let lead = rest.len() - rest.trim_start().len();
                (k, rest.trim(), indent + offset + lead + 1)
            }
            None => (1, content, indent + 1),
        };
        if candidates.is_none() {
            let mut names: Vec<&str> = ballot_text.split('>').map(str::trim).collect();
            names.sort_unstable();
            candidates = Some(
                CandidateSet::new(names)
                    .map_err(|e| Error::parse(line_no, ballot_col, e.to_string()))?,
            );
        }
        let cs = candidates.as_ref().expect("set above");
        let ranking = cs.parse_ranking(ballot_text).map_err(|e| match e {
            Error::Parse {
                column, message, ..
            } => Error::parse(line_no, ballot_col + column - 1, message),
            other => Error::parse(line_no, ballot_col, other.to_string()),
        })?;
        for _ in 0..mult {
            ballots.push(ranking.clone());
        }
    }
    let candidates = candidates.ok_or_else(|| Error::parse(1, 1, "no ballots"))?;
    if ballots.is_empty() {
        return Err(Error::parse(1, 1, "no ballots"));
    }
    Profile::new(candidates, ballots)
}

/// Writes the profile text format with a candidate line and `k: ` prefixes.
pub fn format_profile(profile: &AnonymousProfile) -> String {
    let mut out = format!("candidates: {}\n", profile.candidates.names().join(", "));
    for (r, c) in profile.support() {
        out.push_str(&format!("{c}: {}\n", r.display(&profile.candidates)));
    }
    out
}

/// A JSON number or rational string.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum JsonRational {
    Text(String),
    Int(i64),
    Float(f64),
}

impl JsonRational {
    fn to_scalar<S: Scalar>(&self) -> Result<S> {
        match self {
            JsonRational::Text(t) => S::parse_ratio(t),
            JsonRational::Int(i) => Ok(S::from_int(*i)),
            JsonRational::Float(f) => S::parse_ratio(&f.to_string()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PointFile {
    #[serde(default)]
    candidates: Option<Vec<String>>,
    #[serde(default)]
    order: Option<String>,
    coords: Vec<JsonRational>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::parse(e.line(), e.column(), e.to_string())
}

fn parse_point_file<S: Scalar>(text: &str) -> Result<(Option<CandidateSet>, Vec<S>)> {
    let file: PointFile = serde_json::from_str(text).map_err(json_error)?;
    if let Some(order) = &file.order {
        if order != "lex" {
            return Err(Error::parse(
                1,
                1,
                format!("unsupported coordinate order `{order}`"),
            ));
        }
    }
    let candidates = file.candidates.map(CandidateSet::new).transpose()?;
    let coords = file
        .coords
        .iter()
        .map(JsonRational::to_scalar)
        .collect::<Result<Vec<S>>>()?;
    Ok((candidates, coords))
}

/// Parses `{"candidates": [...], "order": "lex", "coords": ["3/7", ...]}`.
pub fn parse_simplex_point<S: Scalar>(text: &str) -> Result<SimplexPoint<S>> {
    let (candidates, coords) = parse_point_file::<S>(text)?;
    let candidates =
        candidates.ok_or_else(|| Error::parse(1, 1, "simplex point needs `candidates`"))?;
    SimplexPoint::new(candidates, coords)
}

/// Parses a point file as a plain rational vector; `candidates` is optional.
pub fn parse_rational_vector<S: Scalar>(text: &str) -> Result<Vec<S>> {
    Ok(parse_point_file::<S>(text)?.1)
}

/// Serializes a simplex point in the JSON point format.
pub fn simplex_point_json<S: Scalar>(x: &SimplexPoint<S>) -> serde_json::Value {
    serde_json::json!({
        "candidates": x.candidates.names(),
        "order": "lex",
        "coords": x.coords.iter().map(Scalar::to_ratio_string).collect::<Vec<_>>(),
    })
}
