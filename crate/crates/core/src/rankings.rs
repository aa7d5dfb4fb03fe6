//! Candidates, rankings, s-rankings and ground distances on rankings.
//!
//! Rankings are stored as permutations of candidate indices, top first. The
//! canonical coordinate order of the vote simplex is the lexicographic order
//! of these index sequences, exposed by [`Ranking::lex_index`] and
//! [`enumerate_rankings`].

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default bound on the number of candidates (8! = 40320 simplex coordinates).
pub const MAX_CANDIDATES: usize = 8;

/// Largest candidate count for which the weighted swap distance is computed.
pub const MAX_WEIGHTED_KENDALL_CANDIDATES: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CandidateSet {
    names: Vec<String>,
}

impl CandidateSet {
    pub fn new<I, T>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::InvalidSpec("candidate set is empty".into()));
        }
        let mut seen = HashSet::new();
        for n in &names {
            if n.is_empty() || n.contains(['>', ',', ':', '#']) || n.trim() != n {
                return Err(Error::InvalidSpec(format!("invalid candidate label `{n}`")));
            }
            if !seen.insert(n.as_str()) {
                return Err(Error::InvalidSpec(format!("duplicate candidate `{n}`")));
            }
        }
        Ok(CandidateSet { names })
    }

    /// Candidates labelled `a`, `b`, `c`, ... (`c0`, `c1`, ... beyond 26).
    pub fn alphabetic(m: usize) -> Result<Self> {
        if m <= 26 {
            Self::new((0..m).map(|i| ((b'a' + i as u8) as char).to_string()))
        } else {
            Self::new((0..m).map(|i| format!("c{i}")))
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownCandidate(name.to_string()))
    }

    /// Parses `"a>b>c"` into a full ranking.
    pub fn parse_ranking(&self, text: &str) -> Result<Ranking> {
        let s = self.parse_s_ranking(text)?;
        if s.len() != self.len() {
            return Err(Error::parse(
                1,
                1,
                format!(
                    "ranking `{text}` lists {} of {} candidates",
                    s.len(),
                    self.len()
                ),
            ));
        }
        Ok(Ranking { order: s.order })
    }

    /// Parses `"a>b"` into an s-ranking; a single label is a 1-ranking.
    pub fn parse_s_ranking(&self, text: &str) -> Result<SRanking> {
        let mut order = Vec::new();
        let mut seen = vec![false; self.len()];
        let mut column = 1;
        for part in text.split('>') {
            let label = part.trim();
            let idx = self
                .index_of(label)
                .map_err(|_| Error::parse(1, column, format!("unknown candidate `{label}`")))?;
            if seen[idx] {
                return Err(Error::parse(
                    1,
                    column,
                    format!("candidate `{label}` appears twice"),
                ));
            }
            seen[idx] = true;
            order.push(idx);
            column += part.len() + 1;
        }
        Ok(SRanking { order })
    }
}

/// A strict linear order of all candidates, top first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ranking {
    order: Vec<usize>,
}

impl Ranking {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let m = order.len();
        let mut seen = vec![false; m];
        for &c in &order {
            if c >= m || seen[c] {
                return Err(Error::InvalidSpec(format!(
                    "{order:?} is not a permutation of 0..{m}"
                )));
            }
            seen[c] = true;
        }
        Ok(Ranking { order })
    }

    pub fn identity(m: usize) -> Self {
        Ranking {
            order: (0..m).collect(),
        }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Position array: `positions()[c]` is the 0-based rank of candidate `c`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, &c) in self.order.iter().enumerate() {
            pos[c] = i;
        }
        pos
    }

    /// 1-based rank of candidate `c`.
    pub fn rank_of(&self, c: usize) -> Result<usize> {
        self.order
            .iter()
            .position(|&x| x == c)
            .map(|p| p + 1)
            .ok_or_else(|| Error::UnknownCandidate(format!("#{c}")))
    }

    /// Whether `a` is ranked above `b`.
    pub fn prefers(&self, a: usize, b: usize) -> bool {
        for &c in &self.order {
            if c == a {
                return true;
            }
            if c == b {
                return false;
            }
        }
        false
    }

    pub fn top(&self) -> usize {
        self.order[0]
    }

    pub fn prefix(&self, s: usize) -> SRanking {
        SRanking {
            order: self.order[..s].to_vec(),
        }
    }

    /// Position of this ranking in the lexicographic enumeration of all m! rankings.
    pub fn lex_index(&self) -> usize {
        let m = self.order.len();
        let mut index = 0;
        for i in 0..m {
            let smaller = self.order[i + 1..]
                .iter()
                .filter(|&&x| x < self.order[i])
                .count();
            index = index * (m - i) + smaller;
        }
        index
    }

    /// Relabels candidates: candidate `c` becomes `relabel[c]`.
    pub fn relabel(&self, relabel: &[usize]) -> Ranking {
        Ranking {
            order: self.order.iter().map(|&c| relabel[c]).collect(),
        }
    }

    pub fn display(&self, candidates: &CandidateSet) -> String {
        join_labels(&self.order, candidates)
    }
}

impl fmt::Display for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.order.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(">"))
    }
}

/// A strict linear order of `s` distinct candidates (`1 <= s <= m`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SRanking {
    order: Vec<usize>,
}

impl SRanking {
    pub fn new(order: Vec<usize>, m: usize) -> Result<Self> {
        if order.is_empty() || order.len() > m {
            return Err(Error::InvalidSpec(format!(
                "s-ranking length {} outside 1..={m}",
                order.len()
            )));
        }
        let mut seen = vec![false; m];
        for &c in &order {
            if c >= m || seen[c] {
                return Err(Error::InvalidSpec(format!(
                    "{order:?} repeats or exceeds candidates"
                )));
            }
            seen[c] = true;
        }
        Ok(SRanking { order })
    }

    pub fn single(c: usize) -> Self {
        SRanking { order: vec![c] }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Whether `ranking` starts with this s-ranking.
    pub fn is_prefix_of(&self, ranking: &Ranking) -> bool {
        ranking.order().starts_with(&self.order)
    }

    pub fn relabel(&self, relabel: &[usize]) -> SRanking {
        SRanking {
            order: self.order.iter().map(|&c| relabel[c]).collect(),
        }
    }

    pub fn display(&self, candidates: &CandidateSet) -> String {
        join_labels(&self.order, candidates)
    }
}

impl From<Ranking> for SRanking {
    fn from(r: Ranking) -> Self {
        SRanking { order: r.order }
    }
}

fn join_labels(order: &[usize], candidates: &CandidateSet) -> String {
    order
        .iter()
        .map(|&c| candidates.name(c))
        .collect::<Vec<_>>()
        .join(">")
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Shared lexicographic table of all rankings of `m` candidates.
pub fn all_rankings(m: usize) -> Result<&'static [Ranking]> {
    static TABLES: [OnceLock<Vec<Ranking>>; MAX_CANDIDATES + 1] =
        [const { OnceLock::new() }; MAX_CANDIDATES + 1];
    if m > MAX_CANDIDATES {
        return Err(Error::Capacity(format!(
            "{m} candidates exceeds the configured maximum of {MAX_CANDIDATES}"
        )));
    }
    Ok(TABLES[m]
        .get_or_init(|| enumerate_rankings_bounded(m, MAX_CANDIDATES).expect("bounded above")))
}

pub(crate) fn factorial(m: usize) -> usize {
    (1..=m).product()
}

/// All m! rankings in lexicographic order (the canonical simplex coordinates).
pub fn enumerate_rankings(candidates: &CandidateSet) -> Result<Vec<Ranking>> {
    enumerate_rankings_bounded(candidates.len(), MAX_CANDIDATES)
}

pub(crate) fn enumerate_rankings_bounded(m: usize, max_m: usize) -> Result<Vec<Ranking>> {
    if m > max_m {
        return Err(Error::Capacity(format!(
            "{m} candidates exceeds the configured maximum of {max_m}"
        )));
    }
    let mut current: Vec<usize> = (0..m).collect();
    let mut out = Vec::with_capacity(factorial(m));
    loop {
        out.push(Ranking {
            order: current.clone(),
        });
        if !next_permutation(&mut current) {
            break;
        }
    }
    Ok(out)
}

/// All s-rankings in lexicographic order.
pub fn enumerate_s_rankings(m: usize, s: usize) -> Result<Vec<SRanking>> {
    if s == 0 || s > m {
        return Err(Error::InvalidSpec(format!(
            "output size {s} outside 1..={m}"
        )));
    }
    if m > MAX_CANDIDATES {
        return Err(Error::Capacity(format!(
            "{m} candidates exceeds the configured maximum of {MAX_CANDIDATES}"
        )));
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(s);
    let mut used = vec![false; m];
    fn rec(
        m: usize,
        s: usize,
        current: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<SRanking>,
    ) {
        if current.len() == s {
            out.push(SRanking {
                order: current.clone(),
            });
            return;
        }
        for c in 0..m {
            if !used[c] {
                used[c] = true;
                current.push(c);
                rec(m, s, current, used, out);
                current.pop();
                used[c] = false;
            }
        }
    }
    rec(m, s, &mut current, &mut used, &mut out);
    Ok(out)
}

/// Distance on full rankings.
#[derive(Debug, Clone, PartialEq)]
pub enum GroundMetric<S> {
    /// 0 on equal rankings, 1 otherwise.
    Discrete,
    /// Minimum number of adjacent swaps (inversion count).
    Kendall,
    /// Spearman's footrule: sum of absolute rank displacements.
    Footrule,
    /// `sum_c |w[rk(a,c)] - w[rk(b,c)]|` for a positional weight vector.
    WeightedFootrule(Vec<S>),
    /// Cheapest sequence of adjacent swaps where swapping positions `i, i+1`
    /// costs `|w[i] - w[i+1]|`. Experimental; limited to
    /// [`MAX_WEIGHTED_KENDALL_CANDIDATES`].
    WeightedKendall(Vec<S>),
}

impl<S: Scalar> GroundMetric<S> {
    /// Checks weight vectors: length `m`, nonincreasing, `w[0] > w[m-1]`.
    pub fn validate(&self, m: usize) -> Result<()> {
        match self {
            GroundMetric::WeightedFootrule(w) | GroundMetric::WeightedKendall(w) => {
                if w.len() != m {
                    return Err(Error::InvalidSpec(format!(
                        "weight vector has {} entries for {m} candidates",
                        w.len()
                    )));
                }
                if w.windows(2).any(|p| p[1] > p[0]) {
                    return Err(Error::InvalidSpec("weights must be nonincreasing".into()));
                }
                if m > 1 && w[0] <= w[m - 1] {
                    return Err(Error::InvalidSpec("weights must satisfy w1 > wm".into()));
                }
                if matches!(self, GroundMetric::WeightedKendall(_))
                    && m > MAX_WEIGHTED_KENDALL_CANDIDATES
                {
                    return Err(Error::Capacity(format!(
                        "weighted swap distance limited to {MAX_WEIGHTED_KENDALL_CANDIDATES} candidates"
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Borda weights `(m-1, m-2, ..., 0)`.
    pub fn borda_weights(m: usize) -> Vec<S> {
        (0..m).rev().map(|w| S::from_int(w as i64)).collect()
    }

    /// Whether the distance separates distinct rankings (weights pairwise distinct).
    pub fn is_metric(&self) -> bool {
        match self {
            GroundMetric::WeightedFootrule(w) | GroundMetric::WeightedKendall(w) => {
                w.windows(2).all(|p| p[0] > p[1])
            }
            _ => true,
        }
    }

    pub fn distance(&self, a: &Ranking, b: &Ranking) -> Result<S> {
        if a.len() != b.len() {
            return Err(Error::Mismatch(format!(
                "rankings over {} and {} candidates",
                a.len(),
                b.len()
            )));
        }
        Ok(match self {
            GroundMetric::Discrete => {
                if a == b {
                    S::zero()
                } else {
                    S::one()
                }
            }
            GroundMetric::Kendall => S::from_int(inversions(a, b) as i64),
            GroundMetric::Footrule => {
                let pa = a.positions();
                let pb = b.positions();
                let total: usize = pa.iter().zip(&pb).map(|(x, y)| x.abs_diff(*y)).sum();
                S::from_int(total as i64)
            }
            GroundMetric::WeightedFootrule(w) => {
                self.validate(a.len())?;
                let pa = a.positions();
                let pb = b.positions();
                pa.iter().zip(&pb).fold(S::zero(), |acc, (&x, &y)| {
                    acc + (w[x].clone() - w[y].clone()).abs()
                })
            }
            GroundMetric::WeightedKendall(w) => {
                self.validate(a.len())?;
                weighted_swap_distance(w, a, b)
            }
        })
    }
}

/// Number of candidate pairs ordered differently by `a` and `b`.
pub fn inversions(a: &Ranking, b: &Ranking) -> usize {
    let pb = b.positions();
    let seq: Vec<usize> = a.order().iter().map(|&c| pb[c]).collect();
    let mut count = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                count += 1;
            }
        }
    }
    count
}

fn weighted_swap_distance<S: Scalar>(w: &[S], a: &Ranking, b: &Ranking) -> S {
    let m = a.len();
    if a == b {
        return S::zero();
    }
    let nodes = enumerate_rankings_bounded(m, MAX_WEIGHTED_KENDALL_CANDIDATES)
        .expect("validated candidate count");
    let swap_cost: Vec<S> = (0..m.saturating_sub(1))
        .map(|i| (w[i].clone() - w[i + 1].clone()).abs())
        .collect();
    let mut dist: Vec<Option<S>> = vec![None; nodes.len()];
    let mut done = vec![false; nodes.len()];
    let start = a.lex_index();
    let target = b.lex_index();
    dist[start] = Some(S::zero());
    loop {
        let mut best: Option<usize> = None;
        for (i, d) in dist.iter().enumerate() {
            if done[i] {
                continue;
            }
            if let Some(d) = d {
                if best.is_none_or(|b| *d < dist[b].clone().unwrap()) {
                    best = Some(i);
                }
            }
        }
        let Some(u) = best else { break };
        if u == target {
            break;
        }
        done[u] = true;
        let du = dist[u].clone().unwrap();
        let mut order = nodes[u].order().to_vec();
        for (i, cost) in swap_cost.iter().enumerate() {
            order.swap(i, i + 1);
            let v = Ranking {
                order: order.clone(),
            }
            .lex_index();
            order.swap(i, i + 1);
            let candidate = du.clone() + cost.clone();
            if !done[v] && dist[v].as_ref().is_none_or(|d| candidate < *d) {
                dist[v] = Some(candidate);
            }
        }
    }
    dist[target]
        .clone()
        .expect("permutation graph is connected")
}

/// Row-major `M x M` table of ground distances in canonical ranking order.
pub fn distance_matrix<S: Scalar>(g: &GroundMetric<S>, m: usize) -> Result<Vec<S>> {
    g.validate(m)?;
    let rankings = all_rankings(m)?;
    let big_m = rankings.len();
    let mut out = vec![S::zero(); big_m * big_m];
    for i in 0..big_m {
        for j in i + 1..big_m {
            let d = g.distance(&rankings[i], &rankings[j])?;
            out[i * big_m + j] = d.clone();
            out[j * big_m + i] = d;
        }
    }
    Ok(out)
}
