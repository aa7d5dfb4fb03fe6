use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::elections::AnonymousProfile;
use crate::error::{Error, Result};
use crate::rankings::{all_rankings, CandidateSet};
use crate::scalar::Scalar;

use super::rule::Rule;

/// Trials per independently seeded chunk.
pub const BOUNDARY_CHUNK: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampler {
    /// Every ballot uniform over all rankings.
    ImpartialCulture,
    /// Counts uniform over all compositions of `n`.
    UniformSimplex,
}

/// Generator for chunk `chunk` of a run seeded with `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

pub fn sample_profile<R: Rng + ?Sized>(
    candidates: &CandidateSet,
    n: u64,
    sampler: Sampler,
    rng: &mut R,
) -> Result<AnonymousProfile> {
    if n == 0 {
        return Err(Error::InvalidSpec("voter count must be positive".into()));
    }
    let big_m = all_rankings(candidates.len())?.len();
    let mut counts = vec![0u64; big_m];
    match sampler {
        Sampler::ImpartialCulture => {
            for _ in 0..n {
                counts[rng.random_range(0..big_m)] += 1;
            }
        }
        Sampler::UniformSimplex => {
            // Stars and bars: M - 1 bar positions among n + M - 1 slots.
            let slots = n as usize + big_m - 1;
            let mut bars = sample(rng, slots, big_m - 1).into_vec();
            bars.sort_unstable();
            let mut prev = 0usize;
            for (i, &b) in bars.iter().enumerate() {
                counts[i] = (b - prev) as u64;
                prev = b + 1;
            }
            counts[big_m - 1] = (slots - prev) as u64;
        }
    }
    AnonymousProfile::new(candidates.clone(), counts)
}

/// Whether the rule returns at least two winners.
pub fn boundary_membership<S: Scalar>(rule: &Rule<S>, e: &AnonymousProfile) -> Result<bool> {
    Ok(rule.outcome(e)?.is_tied())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryEstimate {
    pub tied: u64,
    pub trials: u64,
    /// `tied / trials`, exact.
    pub fraction: BigRational,
    /// Half-width of the normal 95% interval.
    pub radius: f64,
}

impl BoundaryEstimate {
    pub fn fraction_f64(&self) -> f64 {
        self.tied as f64 / self.trials as f64
    }
}

/// Monte Carlo estimate of the tied fraction. Trials are split into chunks of
/// [`BOUNDARY_CHUNK`] with their own seeds, so the result does not depend on
/// the number of worker threads.
pub fn boundary_fraction<S: Scalar>(
    rule: &Rule<S>,
    m: usize,
    n: u64,
    sampler: Sampler,
    trials: u64,
    seed: u64,
) -> Result<BoundaryEstimate> {
    if trials == 0 {
        return Err(Error::InvalidSpec("trials must be positive".into()));
    }
    let candidates = CandidateSet::alphabetic(m)?;
    let chunks = trials.div_ceil(BOUNDARY_CHUNK);
    let tied = (0..chunks)
        .into_par_iter()
        .map(|chunk| -> Result<u64> {
            let mut rng = chunk_rng(seed, chunk);
            let size = BOUNDARY_CHUNK.min(trials - chunk * BOUNDARY_CHUNK);
            let mut tied = 0;
            for _ in 0..size {
                let e = sample_profile(&candidates, n, sampler, &mut rng)?;
                if boundary_membership(rule, &e)? {
                    tied += 1;
                }
            }
            Ok(tied)
        })
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .sum::<u64>();
    let p = tied as f64 / trials as f64;
    Ok(BoundaryEstimate {
        tied,
        trials,
        fraction: BigRational::new(BigInt::from(tied), BigInt::from(trials)),
        radius: 1.96 * (p * (1.0 - p) / trials as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dr_engine::oracles::OracleKind;
    use crate::elections::parse_profile;
    use num_rational::BigRational;

    #[test]
    fn samplers_produce_n_voters() {
        let c = CandidateSet::alphabetic(3).unwrap();
        let mut rng = chunk_rng(7, 0);
        for sampler in [Sampler::ImpartialCulture, Sampler::UniformSimplex] {
            for n in [1, 2, 9] {
                let e = sample_profile(&c, n, sampler, &mut rng).unwrap();
                assert_eq!(e.voters(), n);
            }
        }
    }

    #[test]
    fn uniform_simplex_hits_every_composition() {
        let c = CandidateSet::alphabetic(2).unwrap();
        let mut rng = chunk_rng(3, 0);
        let mut seen = [0u32; 3];
        for _ in 0..600 {
            let e = sample_profile(&c, 2, Sampler::UniformSimplex, &mut rng).unwrap();
            seen[e.counts()[0] as usize] += 1;
        }
        assert!(seen.iter().all(|&s| s > 150), "{seen:?}");
    }

    #[test]
    fn membership_examples() {
        let copeland = Rule::<BigRational>::Oracle(OracleKind::Copeland);
        let cycle = parse_profile("a>b>c\nb>c>a\nc>a>b").unwrap();
        assert!(boundary_membership(&copeland, &cycle).unwrap());
        let borda = Rule::<BigRational>::Oracle(OracleKind::Borda);
        assert!(!boundary_membership(&borda, &parse_profile("4: a>b>c").unwrap()).unwrap());
    }

    #[test]
    fn estimate_is_independent_of_thread_count() {
        let copeland = Rule::<BigRational>::Oracle(OracleKind::Copeland);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| boundary_fraction(&copeland, 3, 8, Sampler::ImpartialCulture, 2500, 9))
                .unwrap()
        };
        assert_eq!(run(1), run(4));
    }
}
