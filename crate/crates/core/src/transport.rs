//! Wasserstein distances between vote distributions, the Kantorovich-Rubinstein
//! norm, and a bijection oracle for the quotient distance.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::elections::{realize, SimplexPoint};
use crate::error::{Error, Result};
use crate::flow::solve_transport;
use crate::metrics::Exponent;
use crate::rankings::{all_rankings, distance_matrix, GroundMetric};
use crate::scalar::{common_denominator, powi, sum, Scalar};

/// Default voter bound for [`quotient_bruteforce`] (n! pairings).
pub const DEFAULT_BIJECTION_VOTERS: u64 = 6;

/// Denominator used to discretize floating point inputs.
const FLOAT_GRID: i128 = 1 << 40;

/// Optimal coupling with its cost.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportResult<S> {
    /// `sum A[r][r'] d(r, r')^p`.
    pub cost_pth_power: S,
    pub p: u32,
    /// Nonzero coupling entries `(row, column, mass)`.
    pub coupling: Vec<(usize, usize, S)>,
    pub dim: usize,
}

impl<S: Scalar> TransportResult<S> {
    pub fn dense_coupling(&self) -> Vec<Vec<S>> {
        let mut out = vec![vec![S::zero(); self.dim]; self.dim];
        for (i, j, v) in &self.coupling {
            out[*i][*j] = v.clone();
        }
        out
    }

    pub fn row_sums(&self) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim];
        for (i, _, v) in &self.coupling {
            out[*i] = out[*i].clone() + v.clone();
        }
        out
    }

    pub fn column_sums(&self) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim];
        for (_, j, v) in &self.coupling {
            out[*j] = out[*j].clone() + v.clone();
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<String>> = self
            .dense_coupling()
            .iter()
            .map(|r| r.iter().map(Scalar::to_ratio_string).collect())
            .collect();
        serde_json::json!({
            "cost_pth_power": self.cost_pth_power.to_ratio_string(),
            "p": self.p,
            "coupling": rows,
        })
    }
}

fn to_i128(v: &BigInt) -> Result<i128> {
    v.to_i128()
        .ok_or_else(|| Error::Capacity("transport quantities exceed 128-bit integers".into()))
}

/// Integer masses with a shared denominator.
struct Masses {
    left: Vec<i128>,
    right: Vec<i128>,
    denom: BigInt,
}

fn exact_masses<S: Scalar>(x: &[S], y: &[S]) -> Result<Masses> {
    let xs: Vec<BigRational> = x.iter().map(exact).collect::<Result<_>>()?;
    let ys: Vec<BigRational> = y.iter().map(exact).collect::<Result<_>>()?;
    let denom = common_denominator(xs.iter().chain(&ys));
    let scale = |v: &BigRational| -> Result<i128> {
        let n = v * BigRational::from_integer(denom.clone());
        to_i128(&n.to_integer())
    };
    Ok(Masses {
        left: xs.iter().map(scale).collect::<Result<_>>()?,
        right: ys.iter().map(scale).collect::<Result<_>>()?,
        denom,
    })
}

/// Rounds to a fixed grid and repairs the totals so both sides carry the
/// same integer mass.
fn grid_masses<S: Scalar>(x: &[S], y: &[S]) -> Result<Masses> {
    let round = |v: &[S]| -> Result<Vec<i128>> {
        let total: f64 = v.iter().map(Scalar::to_f64).sum();
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::InvalidSpec(
                "masses must be finite with positive total".into(),
            ));
        }
        let mut out: Vec<i128> = v
            .iter()
            .map(|a| (a.to_f64() / total * FLOAT_GRID as f64).round() as i128)
            .collect();
        let drift = FLOAT_GRID - out.iter().sum::<i128>();
        let big = (0..out.len()).max_by_key(|&i| out[i]).unwrap_or(0);
        out[big] += drift;
        Ok(out)
    };
    Ok(Masses {
        left: round(x)?,
        right: round(y)?,
        denom: BigInt::from(FLOAT_GRID),
    })
}

fn exact<S: Scalar>(v: &S) -> Result<BigRational> {
    v.to_big_ratio()
        .ok_or_else(|| Error::InvalidSpec("non-finite transport input".into()))
}

/// Costs `d^p` as integers over a shared denominator.
fn integer_costs<S: Scalar>(table: &[S], p: u32) -> Result<(Vec<i128>, BigInt)> {
    let powered: Vec<BigRational> = table
        .iter()
        .map(|d| exact(&powi(d, p)))
        .collect::<Result<_>>()?;
    if powered.iter().any(|c| c < &BigRational::zero()) {
        return Err(Error::InvalidSpec("negative ground distance".into()));
    }
    let denom = common_denominator(&powered);
    let costs = powered
        .iter()
        .map(|c| to_i128(&(c * BigRational::from_integer(denom.clone())).to_integer()))
        .collect::<Result<_>>()?;
    Ok((costs, denom))
}

/// Min-cost transport of mass `x` onto mass `y` (equal totals) under the cost
/// table `d^p` (row-major `M x M`).
pub fn transport_with_costs<S: Scalar>(
    table: &[S],
    p: u32,
    x: &[S],
    y: &[S],
) -> Result<TransportResult<S>> {
    let dim = x.len();
    if y.len() != dim || table.len() != dim * dim {
        return Err(Error::Mismatch("transport dimensions differ".into()));
    }
    let masses = if S::EXACT {
        exact_masses(x, y)?
    } else {
        grid_masses(x, y)?
    };
    if masses.left.iter().sum::<i128>() != masses.right.iter().sum::<i128>() {
        return Err(Error::Mismatch(
            "the two distributions carry different total mass".into(),
        ));
    }
    let (costs, cost_denom) = integer_costs(table, p)?;
    let plan = solve_transport(&masses.left, &masses.right, &costs)?;

    let mass_scale: S = if S::EXACT {
        S::from_big_ratio(&BigRational::new(BigInt::one(), masses.denom.clone()))
    } else {
        let total: f64 = x.iter().map(Scalar::to_f64).sum();
        S::from_big_ratio(
            &BigRational::from_float(total / FLOAT_GRID as f64)
                .ok_or_else(|| Error::Internal("bad float scale".into()))?,
        )
    };
    let cost = BigRational::new(BigInt::from(plan.cost), cost_denom);
    let cost_s = S::from_big_ratio(&cost) * mass_scale.clone();
    let coupling = plan
        .flows
        .iter()
        .map(|&(i, j, f)| {
            let f = S::from_big_ratio(&BigRational::from_integer(BigInt::from(f)));
            (i, j, f * mass_scale.clone())
        })
        .collect();
    Ok(TransportResult {
        cost_pth_power: cost_s,
        p,
        coupling,
        dim,
    })
}

fn check_same_space<S: Scalar>(x: &SimplexPoint<S>, y: &SimplexPoint<S>) -> Result<()> {
    if x.candidates() != y.candidates() {
        return Err(Error::Mismatch(
            "points over different candidate sets".into(),
        ));
    }
    Ok(())
}

fn finite_p(p: Exponent) -> Result<u32> {
    match p {
        Exponent::Finite(p) => Ok(p),
        Exponent::Infinity => Err(Error::Unsupported(
            "Wasserstein distance is implemented for finite p only".into(),
        )),
    }
}

/// Largest candidate count accepted without `allow_large`.
pub const MAX_TRANSPORT_CANDIDATES: usize = 6;

fn check_size(m: usize, allow_large: bool) -> Result<()> {
    if m > MAX_TRANSPORT_CANDIDATES && !allow_large {
        return Err(Error::Capacity(format!(
            "transport over {m} candidates needs a dense {0} x {0} cost table; pass allow_large to proceed",
            (1..=m).product::<usize>()
        )));
    }
    Ok(())
}

/// `d_W^p(x, y)^p` with an optimal coupling, for at most
/// [`MAX_TRANSPORT_CANDIDATES`] candidates.
pub fn wasserstein<S: Scalar>(
    g: &GroundMetric<S>,
    p: Exponent,
    x: &SimplexPoint<S>,
    y: &SimplexPoint<S>,
) -> Result<TransportResult<S>> {
    wasserstein_with(g, p, x, y, false)
}

/// As [`wasserstein`]; `allow_large` admits 7 and 8 candidates, where the
/// cost table alone has 25 million and 1.6 billion entries.
pub fn wasserstein_with<S: Scalar>(
    g: &GroundMetric<S>,
    p: Exponent,
    x: &SimplexPoint<S>,
    y: &SimplexPoint<S>,
    allow_large: bool,
) -> Result<TransportResult<S>> {
    check_same_space(x, y)?;
    check_size(x.candidates().len(), allow_large)?;
    let p = finite_p(p)?;
    let table = distance_matrix(g, x.candidates().len())?;
    transport_with_costs(&table, p, x.coords(), y.coords())
}

/// `1/2 sum |x_i - y_i|`.
pub fn total_variation<S: Scalar>(x: &[S], y: &[S]) -> Result<S> {
    if x.len() != y.len() {
        return Err(Error::Mismatch("vectors of different length".into()));
    }
    let l1 = x
        .iter()
        .zip(y)
        .fold(S::zero(), |acc, (a, b)| acc + (a.clone() - b.clone()).abs());
    Ok(l1 / S::from_int(2))
}

/// Minimum over all ballot-to-ballot bijections between `realize(x, n)` and
/// `realize(y, n)` of `sum d(pi_i, sigma_i)^p`, divided by `n`.
pub fn quotient_bruteforce<S: Scalar>(
    g: &GroundMetric<S>,
    p: Exponent,
    x: &SimplexPoint<S>,
    y: &SimplexPoint<S>,
    n: u64,
    max_voters: u64,
) -> Result<S> {
    check_same_space(x, y)?;
    let p = finite_p(p)?;
    if n > max_voters {
        return Err(Error::Capacity(format!(
            "bijection oracle limited to {max_voters} voters"
        )));
    }
    let left = realize(x, n)?.to_profile();
    let right = realize(y, n)?.to_profile();
    let a = left.ballots();
    let b = right.ballots();
    let n_usize = n as usize;
    let mut cost = vec![S::zero(); n_usize * n_usize];
    for i in 0..n_usize {
        for j in 0..n_usize {
            cost[i * n_usize + j] = powi(&g.distance(&a[i], &b[j])?, p);
        }
    }
    let mut perm: Vec<usize> = (0..n_usize).collect();
    let mut best: Option<S> = None;
    loop {
        let total = sum(perm
            .iter()
            .enumerate()
            .map(|(i, &j)| &cost[i * n_usize + j]));
        if best.as_ref().is_none_or(|b| &total < b) {
            best = Some(total);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(best.unwrap_or_else(S::zero) / S::from_int(n as i64))
}

/// Advances to the next permutation in lexicographic order.
pub(crate) fn next_permutation(v: &mut [usize]) -> bool {
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

/// Kantorovich-Rubinstein norm of a zero-sum vector: the cheapest transport
/// of its positive part onto its negative part (p = 1).
pub fn kr_norm<S: Scalar>(g: &GroundMetric<S>, m: usize, v: &[S]) -> Result<S> {
    check_size(m, false)?;
    let dim = all_rankings(m)?.len();
    if v.len() != dim {
        return Err(Error::Mismatch(format!(
            "{} entries for {dim} rankings",
            v.len()
        )));
    }
    let total: S = sum(v);
    if !total.close_to(&S::zero()) {
        return Err(Error::InvalidSpec("vector must sum to zero".into()));
    }
    if v.iter().all(|a| a.close_to(&S::zero())) {
        return Ok(S::zero());
    }
    let pos: Vec<S> = v.iter().map(|a| S::max_of(a.clone(), S::zero())).collect();
    let neg: Vec<S> = v.iter().map(|a| S::max_of(-a.clone(), S::zero())).collect();
    let table = distance_matrix(g, m)?;
    Ok(transport_with_costs(&table, 1, &pos, &neg)?.cost_pth_power)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rankings::CandidateSet;

    type Q = BigRational;

    fn q(p: i64, d: i64) -> Q {
        Q::from_ratio(p, d)
    }

    fn point(coords: Vec<Q>) -> SimplexPoint<Q> {
        SimplexPoint::new(CandidateSet::alphabetic(3).unwrap(), coords).unwrap()
    }

    fn worked_pair() -> (SimplexPoint<Q>, SimplexPoint<Q>) {
        let z = Q::zero;
        let x = point(vec![q(2, 5), z(), q(3, 5), z(), z(), z()]);
        let y = point(vec![z(), z(), q(2, 5), z(), z(), q(3, 5)]);
        (x, y)
    }

    #[test]
    fn worked_example_discrete_and_kendall() {
        let (x, y) = worked_pair();
        let one = Exponent::Finite(1);
        let h = wasserstein(&GroundMetric::Discrete, one, &x, &y).unwrap();
        assert_eq!(h.cost_pth_power, q(3, 5));
        let k = wasserstein(&GroundMetric::Kendall, one, &x, &y).unwrap();
        assert_eq!(k.cost_pth_power, q(8, 5));
        assert_eq!(k.row_sums(), x.coords());
        assert_eq!(k.column_sums(), y.coords());
        assert_eq!(
            quotient_bruteforce(&GroundMetric::Kendall, one, &x, &y, 5, 6).unwrap(),
            q(8, 5)
        );
        assert_eq!(
            quotient_bruteforce(&GroundMetric::Discrete, one, &x, &y, 5, 6).unwrap(),
            q(3, 5)
        );
    }

    #[test]
    fn identical_points_cost_nothing() {
        let (x, _) = worked_pair();
        let r = wasserstein(&GroundMetric::Footrule, Exponent::Finite(2), &x, &x).unwrap();
        assert!(r.cost_pth_power.is_zero());
        assert!(r.coupling.iter().all(|(i, j, _)| i == j));
    }

    #[test]
    fn total_variation_examples() {
        let c = CandidateSet::alphabetic(3).unwrap();
        let rs = all_rankings(3).unwrap();
        let a = SimplexPoint::<Q>::corner(c.clone(), &rs[0]).unwrap();
        let b = SimplexPoint::<Q>::corner(c, &rs[2]).unwrap();
        assert_eq!(total_variation(a.coords(), b.coords()).unwrap(), q(1, 1));
        let (x, y) = worked_pair();
        assert_eq!(total_variation(x.coords(), x.coords()).unwrap(), q(0, 1));
        assert_eq!(total_variation(x.coords(), y.coords()).unwrap(), q(3, 5));
    }

    #[test]
    fn kr_norm_single_move() {
        let eps = q(1, 10);
        let mut v = vec![Q::zero(); 6];
        v[0] = eps.clone();
        v[2] = -eps.clone();
        assert_eq!(kr_norm(&GroundMetric::Kendall, 3, &v).unwrap(), eps);
        assert!(kr_norm(&GroundMetric::Kendall, 3, &vec![Q::zero(); 6])
            .unwrap()
            .is_zero());
        v[1] = q(1, 7);
        assert!(kr_norm(&GroundMetric::Kendall, 3, &v).is_err());
    }

    #[test]
    fn float_path_agrees_with_exact() {
        let x = SimplexPoint::<f64>::new(
            CandidateSet::alphabetic(3).unwrap(),
            vec![0.4, 0.0, 0.6, 0.0, 0.0, 0.0],
        )
        .unwrap();
        let y = SimplexPoint::<f64>::new(
            CandidateSet::alphabetic(3).unwrap(),
            vec![0.0, 0.0, 0.4, 0.0, 0.0, 0.6],
        )
        .unwrap();
        let k = wasserstein(&GroundMetric::Kendall, Exponent::Finite(1), &x, &y).unwrap();
        assert!((k.cost_pth_power - 1.6).abs() < 1e-9);
    }

    #[test]
    fn permutations_are_exhaustive() {
        let mut v = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut v) {
            count += 1;
        }
        assert_eq!(count, 24);
    }

    #[test]
    fn seven_candidates_need_opt_in() {
        let x = SimplexPoint::<Q>::center(CandidateSet::alphabetic(7).unwrap()).unwrap();
        let err = wasserstein(&GroundMetric::Discrete, Exponent::Finite(1), &x, &x).unwrap_err();
        assert!(matches!(err, Error::Capacity(_)));
    }
}
