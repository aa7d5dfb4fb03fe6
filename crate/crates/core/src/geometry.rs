//! Bisectors: equal-sum partitions, large l1 bisectors, hyperplane rules and
//! distances to segments.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::consensus::{delta_table, GuClasses, Segment};
use crate::error::{Error, Result};
use crate::metrics::Exponent;
use crate::rankings::{all_rankings, GroundMetric, Ranking, SRanking};
use crate::scalar::{powi, Scalar};

/// Largest half-sum the subset-sum tables are allowed to reach.
pub const MAX_SUBSET_SUM: u64 = 1 << 26;

/// Indices of items summing to `target`, if any.
fn subset_with_sum(items: &[u64], target: u64) -> Result<Option<Vec<usize>>> {
    if target > MAX_SUBSET_SUM {
        return Err(Error::Capacity(format!(
            "subset-sum target {target} exceeds {MAX_SUBSET_SUM}"
        )));
    }
    let target = target as usize;
    // parent[s] = item that first reached sum s; all earlier sums use lower items.
    let mut parent: Vec<Option<usize>> = vec![None; target + 1];
    let mut reached = vec![false; target + 1];
    reached[0] = true;
    for (i, &a) in items.iter().enumerate() {
        let a = a as usize;
        if a == 0 || a > target {
            continue;
        }
        for s in (a..=target).rev() {
            if !reached[s] && reached[s - a] {
                reached[s] = true;
                parent[s] = Some(i);
            }
        }
    }
    if !reached[target] {
        return Ok(None);
    }
    let mut out = Vec::new();
    let mut s = target;
    while s > 0 {
        let i = parent[s].expect("reached sums have a parent");
        out.push(i);
        s -= items[i] as usize;
    }
    out.sort_unstable();
    Ok(Some(out))
}

/// An equal-sum split of `z`, reported as the side containing index 0.
pub fn partition_solve(z: &[u64]) -> Result<Option<Vec<usize>>> {
    if z.is_empty() {
        return Err(Error::InvalidSpec("partition instance is empty".into()));
    }
    let total: u64 = z
        .iter()
        .try_fold(0u64, |acc, &v| acc.checked_add(v))
        .ok_or_else(|| Error::Capacity("partition total overflows".into()))?;
    if total % 2 == 1 {
        return Ok(None);
    }
    let Some(side) = subset_with_sum(z, total / 2)? else {
        return Ok(None);
    };
    if side.contains(&0) {
        return Ok(Some(side));
    }
    Ok(Some((0..z.len()).filter(|i| !side.contains(i)).collect()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BisectorKind {
    Large,
    /// The two points coincide.
    LargeDegenerate,
    Small,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BisectorVerdict {
    pub kind: BisectorKind,
    /// Coordinates `S'` with `sum_{S'} (x_i - y_i) = sum_{not S'} (x_i - y_i)`.
    pub subset: Option<Vec<usize>>,
    /// Center and radius of a Euclidean ball inside the bisector.
    pub center: Option<Vec<BigRational>>,
    pub radius: Option<BigRational>,
}

impl BisectorVerdict {
    pub fn large(&self) -> bool {
        self.kind != BisectorKind::Small
    }

    pub fn to_json(&self) -> Value {
        let strings =
            |v: &Vec<BigRational>| v.iter().map(|a| a.to_ratio_string()).collect::<Vec<_>>();
        json!({
            "large": self.large(),
            "kind": match self.kind {
                BisectorKind::Large => "large",
                BisectorKind::LargeDegenerate => "large-degenerate",
                BisectorKind::Small => "small",
            },
            "subset": self.subset,
            "center": self.center.as_ref().map(strings),
            "radius": self.radius.as_ref().map(|r| r.to_ratio_string()),
        })
    }
}

fn exact_vector<S: Scalar>(v: &[S]) -> Result<Vec<BigRational>> {
    v.iter()
        .map(|a| {
            a.to_big_ratio()
                .ok_or_else(|| Error::InvalidSpec(format!("coordinate {a} is not finite")))
        })
        .collect()
}

/// Differences `x_i - y_i` scaled to integers.
fn integer_differences(x: &[BigRational], y: &[BigRational]) -> Result<Vec<i64>> {
    let diffs: Vec<BigRational> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let lcm = diffs
        .iter()
        .fold(BigInt::one(), |acc, d| acc.lcm(d.denom()));
    diffs
        .iter()
        .map(|d| {
            (d * BigRational::from_integer(lcm.clone()))
                .to_integer()
                .to_i64()
                .ok_or_else(|| Error::Capacity("coordinate differences too large".into()))
        })
        .collect()
}

/// Signs `eps` on the coordinates with `sum eps_i d_i = 0`, if any exist.
fn balancing_signs(d: &[i64]) -> Result<Option<Vec<i8>>> {
    let mags: Vec<u64> = d.iter().map(|v| v.unsigned_abs()).collect();
    let total: u64 = mags.iter().sum();
    if total % 2 == 1 {
        return Ok(None);
    }
    let Some(plus) = subset_with_sum(&mags, total / 2)? else {
        return Ok(None);
    };
    Ok(Some(
        d.iter()
            .enumerate()
            .map(|(i, &v)| {
                let sigma: i8 = if plus.contains(&i) { 1 } else { -1 };
                if v < 0 {
                    -sigma
                } else {
                    sigma
                }
            })
            .collect(),
    ))
}

/// Decides whether `x` and `y` have a bisector with nonempty interior under l1.
pub fn large_bisector_l1<S: Scalar>(x: &[S], y: &[S]) -> Result<BisectorVerdict> {
    if x.len() != y.len() {
        return Err(Error::Mismatch(format!(
            "dimensions {} and {}",
            x.len(),
            y.len()
        )));
    }
    let (x, y) = (exact_vector(x)?, exact_vector(y)?);
    let d = integer_differences(&x, &y)?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if d.iter().all(|v| *v == 0) {
        return Ok(BisectorVerdict {
            kind: BisectorKind::LargeDegenerate,
            subset: Some((0..x.len()).collect()),
            center: Some(x.clone()),
            radius: Some(half),
        });
    }
    let Some(eps) = balancing_signs(&d)? else {
        return Ok(BisectorVerdict {
            kind: BisectorKind::Small,
            subset: None,
            center: None,
            radius: None,
        });
    };
    // eps = +1: z_i < min(x_i, y_i); eps = -1: z_i > max(x_i, y_i).
    let one = BigRational::one();
    let center = x
        .iter()
        .zip(&y)
        .zip(&eps)
        .map(|((a, b), &e)| {
            if e > 0 {
                a.clone().min(b.clone()) - &one
            } else {
                a.clone().max(b.clone()) + &one
            }
        })
        .collect();
    Ok(BisectorVerdict {
        kind: BisectorKind::Large,
        subset: Some((0..d.len()).filter(|&i| eps[i] > 0).collect()),
        center: Some(center),
        radius: Some(half),
    })
}

/// Most nonzero differences enumerated by [`large_bisector_in_simplex`].
pub const MAX_SIMPLEX_BISECTOR_TERMS: usize = 20;

/// Whether two points of the simplex have a bisector with nonempty interior
/// relative to the simplex, with an interior witness point.
///
/// Each balancing sign pattern yields the cell `z_i < min(x_i, y_i)` or
/// `z_i > max(x_i, y_i)`; a pattern works when that cell meets the relative
/// interior of the simplex in an open set.
pub fn large_bisector_in_simplex<S: Scalar>(x: &[S], y: &[S]) -> Result<Option<Vec<BigRational>>> {
    if x.len() != y.len() {
        return Err(Error::Mismatch(format!(
            "dimensions {} and {}",
            x.len(),
            y.len()
        )));
    }
    let (x, y) = (exact_vector(x)?, exact_vector(y)?);
    let d = integer_differences(&x, &y)?;
    let active: Vec<usize> = (0..d.len()).filter(|&i| d[i] != 0).collect();
    if active.len() > MAX_SIMPLEX_BISECTOR_TERMS {
        return Err(Error::Capacity(format!(
            "{} nonzero differences exceed {MAX_SIMPLEX_BISECTOR_TERMS}",
            active.len()
        )));
    }
    let zero = BigRational::zero();
    for mask in 0u32..(1u32 << active.len()) {
        let signed: i64 = active
            .iter()
            .enumerate()
            .map(|(k, &i)| if mask >> k & 1 == 1 { d[i] } else { -d[i] })
            .sum();
        if signed != 0 {
            continue;
        }
        // Strict bounds lo < z_i < hi (hi = None for unbounded).
        let mut lo = vec![zero.clone(); d.len()];
        let mut hi: Vec<Option<BigRational>> = vec![None; d.len()];
        let mut ok = true;
        for (k, &i) in active.iter().enumerate() {
            if mask >> k & 1 == 1 {
                let m = x[i].clone().min(y[i].clone());
                if m <= zero {
                    ok = false;
                    break;
                }
                hi[i] = Some(m);
            } else {
                lo[i] = x[i].clone().max(y[i].clone()).max(zero.clone());
            }
        }
        if !ok {
            continue;
        }
        if let Some(z) = interior_point(&lo, &hi) {
            return Ok(Some(z));
        }
    }
    Ok(None)
}

/// A point with `lo < z < hi` coordinatewise and `sum z = 1`, if one exists.
fn interior_point(lo: &[BigRational], hi: &[Option<BigRational>]) -> Option<Vec<BigRational>> {
    let one = BigRational::one();
    let slack = &one - lo.iter().sum::<BigRational>();
    if slack <= BigRational::zero() {
        return None;
    }
    let unbounded = hi.iter().filter(|h| h.is_none()).count();
    let room: BigRational = lo
        .iter()
        .zip(hi)
        .filter_map(|(l, h)| h.as_ref().map(|h| h - l))
        .sum();
    if unbounded == 0 {
        if room <= slack {
            return None;
        }
        let theta = &slack / &room;
        return Some(
            lo.iter()
                .zip(hi)
                .map(|(l, h)| l + (h.as_ref().expect("bounded") - l) * &theta)
                .collect(),
        );
    }
    // Bounded coordinates take a share strictly inside their interval, the
    // unbounded ones split the rest.
    let two = BigRational::from_integer(BigInt::from(2));
    let bounded_share = if room.is_zero() {
        BigRational::zero()
    } else {
        (&slack / &two).min(room.clone() / &two) / &room
    };
    let mut z: Vec<BigRational> = lo
        .iter()
        .zip(hi)
        .map(|(l, h)| match h {
            Some(h) => l + (h - l) * &bounded_share,
            None => l.clone(),
        })
        .collect();
    let used: BigRational = z.iter().sum();
    let rest = (&one - used) / BigRational::from_integer(BigInt::from(unbounded as u64));
    for (zi, h) in z.iter_mut().zip(hi) {
        if h.is_none() {
            *zi += &rest;
        }
    }
    Some(z)
}

/// The two points of the zero-sum hyperplane whose l1-votewise bisector
/// contains the cone `z_r <= 0`, `z_t >= 0` (t != r).
#[derive(Debug, Clone, PartialEq)]
pub struct LargeBisectorPair<S> {
    pub x: Vec<S>,
    pub y: Vec<S>,
    /// Index of `r` in canonical order.
    pub r: usize,
}

impl<S: Scalar> LargeBisectorPair<S> {
    pub fn in_region(&self, z: &[S]) -> bool {
        z.len() == self.x.len()
            && z.iter().enumerate().all(|(i, zi)| {
                if i == self.r {
                    *zi <= S::zero()
                } else {
                    *zi >= S::zero()
                }
            })
    }
}

/// `x = (eps/d1)(e_r - e_r1)` and `y = (eps/d2)(e_r - e_r2)` with
/// `d_i = d(r, r_i)`.
pub fn large_bisector_construction<S: Scalar>(
    g: &GroundMetric<S>,
    r: &Ranking,
    r1: &Ranking,
    r2: &Ranking,
    epsilon: S,
) -> Result<LargeBisectorPair<S>> {
    let m = r.len();
    g.validate(m)?;
    if r1 == r2 {
        return Err(Error::InvalidSpec("r1 and r2 must differ".into()));
    }
    if epsilon <= S::zero() {
        return Err(Error::InvalidSpec("epsilon must be positive".into()));
    }
    let d1 = g.distance(r, r1)?;
    let d2 = g.distance(r, r2)?;
    if d1.is_zero() || d2.is_zero() {
        return Err(Error::InvalidSpec(
            "ground distances to r must be positive".into(),
        ));
    }
    let dim = all_rankings(m)?.len();
    let mut x = vec![S::zero(); dim];
    let mut y = vec![S::zero(); dim];
    let (ir, i1, i2) = (r.lex_index(), r1.lex_index(), r2.lex_index());
    x[ir] = epsilon.clone() / d1.clone();
    x[i1] = -(epsilon.clone() / d1);
    y[ir] = epsilon.clone() / d2.clone();
    y[i2] = y[i2].clone() - epsilon / d2;
    Ok(LargeBisectorPair { x, y, r: ir })
}

/// The point set `{x : normal . x = offset}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane<S> {
    pub normal: Vec<S>,
    pub offset: S,
}

impl<S: Scalar> Hyperplane<S> {
    pub fn new(normal: Vec<S>, offset: S) -> Result<Self> {
        if normal.iter().all(|a| a.close_to(&S::zero())) {
            return Err(Error::InvalidSpec("hyperplane normal is zero".into()));
        }
        Ok(Hyperplane { normal, offset })
    }

    /// `normal . x - offset`.
    pub fn evaluate(&self, x: &[S]) -> S {
        self.normal
            .iter()
            .zip(x)
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            - self.offset.clone()
    }

    pub fn contains(&self, x: &[S]) -> bool {
        self.evaluate(x).close_to(&S::zero())
    }

    fn scaled(&self, k: &S) -> Self {
        Hyperplane {
            normal: self.normal.iter().map(|a| a.clone() * k.clone()).collect(),
            offset: self.offset.clone() * k.clone(),
        }
    }

    /// Same point set (normals and offsets proportional).
    pub fn same_set(&self, other: &Self) -> bool {
        let Some(k) = self.normal.iter().position(|a| !a.close_to(&S::zero())) else {
            return false;
        };
        if other.normal.len() != self.normal.len() || other.normal[k].close_to(&S::zero()) {
            return false;
        }
        let ratio = other.normal[k].clone() / self.normal[k].clone();
        let s = self.scaled(&ratio);
        s.normal
            .iter()
            .zip(&other.normal)
            .all(|(a, b)| a.close_to(b))
            && s.offset.close_to(&other.offset)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    L1,
    L2,
    LInf,
}

impl Norm {
    /// Dual norm of `a`; squared for l2 so that it stays rational.
    fn dual_measure<S: Scalar>(self, a: &[S]) -> S {
        match self {
            Norm::L1 => a.iter().map(|v| v.abs()).fold(S::zero(), S::max_of),
            Norm::L2 => a
                .iter()
                .fold(S::zero(), |acc, v| acc + v.clone() * v.clone()),
            Norm::LInf => a.iter().fold(S::zero(), |acc, v| acc + v.abs()),
        }
    }
}

/// Distance from `x` to `h` under `norm`; squared for l2.
pub fn hyperplane_distance<S: Scalar>(h: &Hyperplane<S>, x: &[S], norm: Norm) -> S {
    let gap = h.evaluate(x);
    match norm {
        Norm::L2 => gap.clone() * gap / norm.dual_measure(&h.normal),
        _ => gap.abs() / norm.dual_measure(&h.normal),
    }
}

/// Normal `(delta(t,r)^p - delta(t,r')^p)_t` of the tie locus between `r` and
/// `r'` under a generalized-unanimity rule, over simplex coordinates.
pub fn hyperplane_coefficients<S: Scalar>(
    gu: &GuClasses,
    g: &GroundMetric<S>,
    p: Exponent,
    r: &SRanking,
    r_prime: &SRanking,
) -> Result<Hyperplane<S>> {
    if r == r_prime {
        return Err(Error::InvalidSpec("outcomes must differ".into()));
    }
    let Exponent::Finite(p) = p else {
        return Err(Error::Unsupported(
            "tie loci are hyperplanes only for finite p".into(),
        ));
    };
    g.validate(gu.candidates())?;
    let missing = |o: &SRanking| Error::InvalidSpec(format!("outcome {o:?} has an empty class"));
    let a = delta_table(gu, g, r)?.ok_or_else(|| missing(r))?;
    let b = delta_table(gu, g, r_prime)?.ok_or_else(|| missing(r_prime))?;
    let normal: Vec<S> = a
        .iter()
        .zip(&b)
        .map(|(u, v)| powi(u, p) - powi(v, p))
        .collect();
    if normal.iter().all(|v| v.close_to(&S::zero())) {
        return Err(Error::Internal(format!(
            "zero normal between {r:?} and {r_prime:?}"
        )));
    }
    Hyperplane::new(normal, S::zero())
}

/// Bisector of two hyperplanes under `norm`: at most two hyperplanes.
pub fn bisector_of_hyperplanes<S: Scalar>(
    h: &Hyperplane<S>,
    h2: &Hyperplane<S>,
    norm: Norm,
) -> Result<Vec<Hyperplane<S>>> {
    if h.normal.len() != h2.normal.len() {
        return Err(Error::Mismatch(
            "hyperplanes live in different dimensions".into(),
        ));
    }
    if h.same_set(h2) {
        return Err(Error::InvalidSpec("hyperplanes coincide".into()));
    }
    let ratio = norm.dual_measure(&h.normal) / norm.dual_measure(&h2.normal);
    let k = match norm {
        Norm::L2 => ratio.sqrt_exact().ok_or_else(|| {
            Error::Unsupported("normals differ in length by an irrational factor".into())
        })?,
        _ => ratio,
    };
    let h2 = h2.scaled(&k);
    let diff = Hyperplane {
        normal: h
            .normal
            .iter()
            .zip(&h2.normal)
            .map(|(a, b)| a.clone() - b.clone())
            .collect(),
        offset: h.offset.clone() - h2.offset.clone(),
    };
    let sum = Hyperplane {
        normal: h
            .normal
            .iter()
            .zip(&h2.normal)
            .map(|(a, b)| a.clone() + b.clone())
            .collect(),
        offset: h.offset.clone() + h2.offset.clone(),
    };
    Ok([diff, sum]
        .into_iter()
        .filter(|c| c.normal.iter().any(|a| !a.close_to(&S::zero())))
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentDistance<S> {
    /// Squared l2 distance (an infimum when not attained).
    pub squared: S,
    pub attained: bool,
    /// The closest point of the closed segment.
    pub closest: Vec<S>,
}

/// Squared l2 distance from `x` to a segment whose endpoints may be excluded.
pub fn segment_distance<S: Scalar>(x: &[S], seg: &Segment<S>) -> Result<SegmentDistance<S>> {
    let n = x.len();
    if seg.start.len() != n || seg.end.len() != n {
        return Err(Error::Mismatch(
            "segment and point dimensions differ".into(),
        ));
    }
    let dir: Vec<S> = seg
        .end
        .iter()
        .zip(&seg.start)
        .map(|(e, s)| e.clone() - s.clone())
        .collect();
    let dot = |u: &[S], v: &[S]| {
        u.iter()
            .zip(v)
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    };
    let len2 = dot(&dir, &dir);
    let rel: Vec<S> = x
        .iter()
        .zip(&seg.start)
        .map(|(a, s)| a.clone() - s.clone())
        .collect();
    let (t, attained) = if len2.close_to(&S::zero()) {
        if seg.start_open || seg.end_open {
            return Err(Error::InvalidSpec("segment has no points".into()));
        }
        (S::zero(), true)
    } else {
        let t = dot(&rel, &dir) / len2;
        if t <= S::zero() {
            (S::zero(), !seg.start_open)
        } else if t >= S::one() {
            (S::one(), !seg.end_open)
        } else {
            (t, true)
        }
    };
    let closest: Vec<S> = seg
        .start
        .iter()
        .zip(&dir)
        .map(|(s, d)| s.clone() + t.clone() * d.clone())
        .collect();
    let gap: Vec<S> = x
        .iter()
        .zip(&closest)
        .map(|(a, c)| a.clone() - c.clone())
        .collect();
    Ok(SegmentDistance {
        squared: dot(&gap, &gap),
        attained,
        closest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rankings::CandidateSet;
    use crate::transport::kr_norm;
    use num_traits::Signed;

    type Q = BigRational;

    fn q(p: i64, d: i64) -> Q {
        Q::from_ratio(p, d)
    }

    fn brute_partition(z: &[u64]) -> bool {
        let total: u64 = z.iter().sum();
        (0u32..1 << z.len()).any(|mask| {
            2 * (0..z.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| z[i])
                .sum::<u64>()
                == total
        })
    }

    #[test]
    fn partition_examples() {
        assert_eq!(partition_solve(&[1, 2, 3]).unwrap(), Some(vec![0, 1]));
        assert_eq!(partition_solve(&[1, 2]).unwrap(), None);
        assert_eq!(partition_solve(&[5, 5]).unwrap(), Some(vec![0]));
        assert!(partition_solve(&[]).is_err());
        for z in [
            vec![3, 1, 1, 2, 2, 1],
            vec![7, 3, 2, 2],
            vec![0],
            vec![4, 9, 1, 6],
        ] {
            let got = partition_solve(&z).unwrap();
            assert_eq!(got.is_some(), brute_partition(&z), "{z:?}");
            if let Some(side) = got {
                let s: u64 = side.iter().map(|&i| z[i]).sum();
                assert_eq!(2 * s, z.iter().sum::<u64>());
            }
        }
    }

    #[test]
    fn bisector_verdicts() {
        let z: Vec<Q> = [1, 2, 3].iter().map(|&v| Q::from_int(v)).collect();
        let zero = vec![Q::zero(); 3];
        let v = large_bisector_l1(&z, &zero).unwrap();
        assert_eq!(v.kind, BisectorKind::Large);
        let subset = v.subset.unwrap();
        let (a, b): (Vec<usize>, Vec<usize>) = (0..3).partition(|i| subset.contains(i));
        let sum = |s: &[usize]| s.iter().map(|&i| z[i].clone()).sum::<Q>();
        assert_eq!(sum(&a), sum(&b));
        assert_eq!(
            large_bisector_l1(&z, &z).unwrap().kind,
            BisectorKind::LargeDegenerate
        );
        let odd: Vec<Q> = vec![Q::from_int(1), Q::from_int(2)];
        assert_eq!(
            large_bisector_l1(&odd, &zero[..2]).unwrap().kind,
            BisectorKind::Small
        );
    }

    #[test]
    fn ball_lies_in_bisector() {
        let x = vec![q(1, 2), q(3, 2), Q::from_int(2), Q::zero()];
        let y = vec![Q::zero(), Q::zero(), Q::zero(), q(1, 1)];
        let v = large_bisector_l1(&x, &y).unwrap();
        assert!(v.large());
        let c = v.center.unwrap();
        let l1 = |a: &[Q], b: &[Q]| a.iter().zip(b).map(|(u, w)| (u - w).abs()).sum::<Q>();
        for i in 0..4 {
            for delta in [q(-2, 5), q(2, 5)] {
                let mut z = c.clone();
                z[i] += &delta;
                assert_eq!(l1(&x, &z), l1(&y, &z));
            }
        }
    }

    #[test]
    fn corners_are_small_inside_simplex() {
        let e = |i: usize| {
            (0..6)
                .map(|k| Q::from_int(i64::from(k == i)))
                .collect::<Vec<_>>()
        };
        assert!(large_bisector_l1(&e(0), &e(3)).unwrap().large());
        assert_eq!(large_bisector_in_simplex(&e(0), &e(3)).unwrap(), None);
        // Equal-sum differences with interior room: x - y = (1/4, -1/4, ...).
        let x = vec![q(1, 2), q(1, 4), q(1, 4)];
        let y = vec![q(1, 4), q(1, 2), q(1, 4)];
        let z = large_bisector_in_simplex(&x, &y).unwrap().unwrap();
        assert_eq!(z.iter().sum::<Q>(), Q::one());
        let l1 = |a: &[Q], b: &[Q]| a.iter().zip(b).map(|(u, w)| (u - w).abs()).sum::<Q>();
        assert_eq!(l1(&x, &z), l1(&y, &z));
        assert!(z.iter().all(|v| v > &Q::zero()));
    }

    #[test]
    fn construction_matches_formulas() {
        let c = CandidateSet::alphabetic(3).unwrap();
        let r = c.parse_ranking("a>b>c").unwrap();
        let r1 = c.parse_ranking("b>a>c").unwrap();
        let r2 = c.parse_ranking("a>c>b").unwrap();
        let g = GroundMetric::<Q>::Kendall;
        let pair = large_bisector_construction(&g, &r, &r1, &r2, q(1, 10)).unwrap();
        // canonical order abc, acb, bac, bca, cab, cba
        assert_eq!(
            pair.x,
            vec![
                q(1, 10),
                Q::zero(),
                q(-1, 10),
                Q::zero(),
                Q::zero(),
                Q::zero()
            ]
        );
        assert_eq!(
            pair.y,
            vec![
                q(1, 10),
                q(-1, 10),
                Q::zero(),
                Q::zero(),
                Q::zero(),
                Q::zero()
            ]
        );
        let z = vec![
            q(-1, 10),
            Q::zero(),
            Q::zero(),
            Q::zero(),
            Q::zero(),
            q(1, 10),
        ];
        assert!(pair.in_region(&z));
        let diff = |a: &[Q]| a.iter().zip(&z).map(|(u, w)| u - w).collect::<Vec<_>>();
        assert_eq!(
            kr_norm(&g, 3, &diff(&pair.x)).unwrap(),
            kr_norm(&g, 3, &diff(&pair.y)).unwrap()
        );
        assert!(large_bisector_construction(&g, &r, &r, &r2, q(1, 10)).is_err());
    }

    #[test]
    fn weak_unanimity_kendall_normal() {
        let gu = GuClasses::prefix_classes(3, 1).unwrap();
        let h = hyperplane_coefficients(
            &gu,
            &GroundMetric::<Q>::Kendall,
            Exponent::Finite(1),
            &SRanking::single(0),
            &SRanking::single(1),
        )
        .unwrap();
        let want: Vec<Q> = [-1, -2, 1, 2, -1, 1]
            .iter()
            .map(|&v| Q::from_int(v))
            .collect();
        assert_eq!(h.normal, want);
        assert!(hyperplane_coefficients(
            &gu,
            &GroundMetric::<Q>::Kendall,
            Exponent::Finite(1),
            &SRanking::single(0),
            &SRanking::single(0)
        )
        .is_err());
    }

    #[test]
    fn hyperplane_bisectors() {
        let h = Hyperplane::new(vec![Q::zero(), Q::one()], Q::zero()).unwrap();
        let h2 = Hyperplane::new(vec![Q::one(), Q::zero()], Q::zero()).unwrap();
        let bis = bisector_of_hyperplanes(&h, &h2, Norm::L2).unwrap();
        assert_eq!(bis.len(), 2);
        assert_eq!(bis[0].normal, vec![-Q::one(), Q::one()]);
        assert_eq!(bis[1].normal, vec![Q::one(), Q::one()]);
        let par = Hyperplane::new(vec![Q::zero(), Q::one()], Q::from_int(4)).unwrap();
        let mid = bisector_of_hyperplanes(&h, &par, Norm::L1).unwrap();
        assert_eq!(mid.len(), 1);
        assert!(mid[0].contains(&[Q::from_int(7), Q::from_int(2)]));
        assert!(bisector_of_hyperplanes(&h, &h.scaled(&Q::from_int(3)), Norm::L1).is_err());
        for norm in [Norm::L1, Norm::L2, Norm::LInf] {
            let a = Hyperplane::new(vec![Q::from_int(1), Q::from_int(2)], Q::one()).unwrap();
            let b = Hyperplane::new(vec![Q::from_int(2), Q::from_int(-1)], Q::from_int(3)).unwrap();
            let Ok(bis) = bisector_of_hyperplanes(&a, &b, norm) else {
                continue;
            };
            for c in bis {
                // two points on each bisector
                let k = c.normal.iter().position(|v| !v.is_zero()).unwrap();
                for free in [Q::zero(), Q::from_int(5)] {
                    let mut p = vec![free.clone(), free.clone()];
                    let other = 1 - k;
                    p[k] =
                        (c.offset.clone() - c.normal[other].clone() * free) / c.normal[k].clone();
                    assert_eq!(
                        hyperplane_distance(&a, &p, norm),
                        hyperplane_distance(&b, &p, norm)
                    );
                }
            }
        }
    }

    #[test]
    fn segment_distances() {
        let seg = Segment {
            start: vec![Q::zero(), Q::zero()],
            end: vec![Q::one(), Q::zero()],
            start_open: true,
            end_open: false,
        };
        let on = segment_distance(&[q(1, 2), Q::zero()], &seg).unwrap();
        assert_eq!((on.squared, on.attained), (Q::zero(), true));
        let behind = segment_distance(&[Q::from_int(-1), Q::one()], &seg).unwrap();
        assert_eq!((behind.squared, behind.attained), (Q::from_int(2), false));
        let beyond = segment_distance(&[Q::from_int(2), Q::zero()], &seg).unwrap();
        assert_eq!((beyond.squared, beyond.attained), (Q::one(), true));
        let empty = Segment {
            start: vec![Q::zero()],
            end: vec![Q::zero()],
            start_open: true,
            end_open: true,
        };
        assert!(segment_distance(&[Q::one()], &empty).is_err());
    }
}
