//! Monte Carlo oracles: empirical moments, outage, and semi-analytic ABEP.
//!
//! Estimates are a pure function of (system, [`SimConfig`]). Trials are
//! split over shards; shard i draws from an independent counter-based
//! stream derived from (seed, i), and shard partials are reduced in fixed
//! shard order, so results are bit-identical no matter how the caller
//! schedules the shards. The per-shard entry points are public exactly so
//! callers can run shards in parallel.
//!
//! ABEP is estimated semi-analytically: the exact conditional error
//! probability (0.5 e^-g for BDPSK, Q(sqrt(2 psi g)) for coherent binary)
//! is averaged over sampled end-to-end SNRs. That removes all bit-level
//! variance and estimates the same quantity as the analytic route.

use crate::error::{Error, Result};
use crate::metrics::ModulationScheme;
use crate::relay::{combine_snr, RelaySystem};
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // unused when std f64 methods shadow the trait
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

/// Trial budget, seed, and shard count of one Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub trials: u64,
    pub seed: u64,
    pub shards: u32,
}

impl SimConfig {
    pub fn new(trials: u64, seed: u64, shards: u32) -> Result<Self> {
        if trials < 1 {
            return Err(Error::Domain { param: "trials", value: trials as f64 });
        }
        if shards < 1 {
            return Err(Error::Domain { param: "shards", value: shards as f64 });
        }
        Ok(Self { trials, seed, shards })
    }
}

/// Point estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

/// Gaussian tail probability Q(x) = P(N(0,1) > x), via erfc.
pub fn gaussian_q(x: f64) -> f64 {
    0.5 * libm::erfc(x / core::f64::consts::SQRT_2)
}

fn shard_rng(seed: u64, shard: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard as u64 + 1);
    rng
}

fn shard_trials(cfg: &SimConfig, shard: u32) -> u64 {
    let base = cfg.trials / cfg.shards as u64;
    let extra = cfg.trials % cfg.shards as u64;
    base + if (shard as u64) < extra { 1 } else { 0 }
}

// cached per-shard samplers; Gamma validation runs once, not per draw
struct PairSampler {
    d1: Gamma<f64>,
    d2: Gamma<f64>,
    s1: f64,
    s2: f64,
    e1: f64,
    e2: f64,
    c: f64,
}

impl PairSampler {
    fn new(sys: &RelaySystem) -> Self {
        Self {
            d1: Gamma::new(sys.hop1().m(), 1.0).expect("validated hop"),
            d2: Gamma::new(sys.hop2().m(), 1.0).expect("validated hop"),
            s1: sys.hop1().scale(),
            s2: sys.hop2().scale(),
            e1: 2.0 / sys.hop1().beta(),
            e2: 2.0 / sys.hop2().beta(),
            c: sys.c(),
        }
    }

    #[inline]
    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        // beta = 2 hops skip the pow in the hot loop
        let x1 = self.d1.sample(rng);
        let x2 = self.d2.sample(rng);
        let g1 = self.s1 * if self.e1 == 1.0 { x1 } else { x1.powf(self.e1) };
        let g2 = self.s2 * if self.e2 == 1.0 { x2 } else { x2.powf(self.e2) };
        combine_snr(g1, g2, self.c)
    }
}

#[derive(Debug, Clone, Copy)]
struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    fn new() -> Self {
        Self { sum: 0.0, carry: 0.0 }
    }

    #[inline]
    fn add(&mut self, v: f64) {
        let y = v - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Partial sums of one shard: sum of gamma^n for n = 1..=2*n_max, plus the
/// trial count.
#[derive(Debug, Clone)]
pub struct MomentShard {
    power_sums: Vec<f64>,
    trials: u64,
}

/// Shard worker for [`mc_moments`].
pub fn mc_moments_shard(sys: &RelaySystem, cfg: &SimConfig, n_max: usize, shard: u32) -> MomentShard {
    let sampler = PairSampler::new(sys);
    let mut rng = shard_rng(cfg.seed, shard);
    let trials = shard_trials(cfg, shard);
    let mut sums = vec![Kahan::new(); 2 * n_max];
    for _ in 0..trials {
        let g = sampler.draw(&mut rng);
        let mut pw = 1.0;
        for s in sums.iter_mut() {
            pw *= g;
            s.add(pw);
        }
    }
    MomentShard {
        power_sums: sums.iter().map(|k| k.sum).collect(),
        trials,
    }
}

/// Sample mean and standard error of gamma_end^n for n = 1..=n_max.
pub fn mc_moments(sys: &RelaySystem, cfg: &SimConfig, n_max: usize) -> Result<Vec<Estimate>> {
    if n_max < 1 {
        return Err(Error::Domain { param: "n_max", value: n_max as f64 });
    }
    let shards: Vec<MomentShard> = (0..cfg.shards)
        .map(|i| mc_moments_shard(sys, cfg, n_max, i))
        .collect();
    Ok(reduce_moment_shards(&shards, n_max))
}

/// Fixed-order reduction of shard partials (order independent of how the
/// shards were computed).
pub fn reduce_moment_shards(shards: &[MomentShard], n_max: usize) -> Vec<Estimate> {
    let mut sums = vec![0.0f64; 2 * n_max];
    let mut trials = 0u64;
    for sh in shards {
        for (acc, &s) in sums.iter_mut().zip(&sh.power_sums) {
            *acc += s;
        }
        trials += sh.trials;
    }
    let t = trials as f64;
    (1..=n_max)
        .map(|n| {
            let mean = sums[n - 1] / t;
            let second = sums[2 * n - 1] / t;
            let var = (second - mean * mean).max(0.0);
            Estimate {
                value: mean,
                std_error: (var / t).sqrt(),
            }
        })
        .collect()
}

/// Partial outage counts of one shard.
#[derive(Debug, Clone, Copy)]
pub struct OutageShard {
    below: u64,
    trials: u64,
}

/// Shard worker for [`mc_outage`].
pub fn mc_outage_shard(sys: &RelaySystem, cfg: &SimConfig, gamma_th: f64, shard: u32) -> OutageShard {
    let sampler = PairSampler::new(sys);
    let mut rng = shard_rng(cfg.seed, shard);
    let trials = shard_trials(cfg, shard);
    let mut below = 0u64;
    for _ in 0..trials {
        if sampler.draw(&mut rng) <= gamma_th {
            below += 1;
        }
    }
    OutageShard { below, trials }
}

/// Empirical outage probability with its binomial standard error.
pub fn mc_outage(sys: &RelaySystem, cfg: &SimConfig, gamma_th: f64) -> Result<Estimate> {
    if !(gamma_th > 0.0) {
        return Err(Error::Domain { param: "gamma_th", value: gamma_th });
    }
    let shards: Vec<OutageShard> = (0..cfg.shards)
        .map(|i| mc_outage_shard(sys, cfg, gamma_th, i))
        .collect();
    Ok(reduce_outage_shards(&shards))
}

pub fn reduce_outage_shards(shards: &[OutageShard]) -> Estimate {
    let below: u64 = shards.iter().map(|s| s.below).sum();
    let trials: u64 = shards.iter().map(|s| s.trials).sum();
    let p = below as f64 / trials as f64;
    Estimate {
        value: p,
        std_error: (p * (1.0 - p) / trials as f64).sqrt(),
    }
}

/// Partial conditional-BEP sums of one shard.
#[derive(Debug, Clone, Copy)]
pub struct AbepShard {
    sum: f64,
    sum_sq: f64,
    trials: u64,
}

/// Shard worker for [`mc_abep`].
pub fn mc_abep_shard(
    sys: &RelaySystem,
    cfg: &SimConfig,
    scheme: &ModulationScheme,
    shard: u32,
) -> AbepShard {
    let sampler = PairSampler::new(sys);
    let mut rng = shard_rng(cfg.seed, shard);
    let trials = shard_trials(cfg, shard);
    let mut sum = Kahan::new();
    let mut sum_sq = Kahan::new();
    for _ in 0..trials {
        let g = sampler.draw(&mut rng);
        let bep = match scheme {
            ModulationScheme::Bdpsk => 0.5 * (-g).exp(),
            ModulationScheme::CoherentBinary { psi } => gaussian_q((2.0 * psi * g).sqrt()),
        };
        sum.add(bep);
        sum_sq.add(bep * bep);
    }
    AbepShard {
        sum: sum.sum,
        sum_sq: sum_sq.sum,
        trials,
    }
}

/// Semi-analytic ABEP estimate: sample mean of the conditional BEP.
pub fn mc_abep(sys: &RelaySystem, cfg: &SimConfig, scheme: &ModulationScheme) -> Result<Estimate> {
    if let ModulationScheme::CoherentBinary { psi } = scheme {
        if !(*psi > 0.0 && *psi <= 1.0) {
            return Err(Error::Domain { param: "psi", value: *psi });
        }
    }
    let shards: Vec<AbepShard> = (0..cfg.shards)
        .map(|i| mc_abep_shard(sys, cfg, scheme, i))
        .collect();
    Ok(reduce_abep_shards(&shards))
}

pub fn reduce_abep_shards(shards: &[AbepShard]) -> Estimate {
    let sum: f64 = shards.iter().map(|s| s.sum).sum();
    let sum_sq: f64 = shards.iter().map(|s| s.sum_sq).sum();
    let trials: u64 = shards.iter().map(|s| s.trials).sum();
    let t = trials as f64;
    let mean = sum / t;
    let var = (sum_sq / t - mean * mean).max(0.0);
    Estimate {
        value: mean,
        std_error: (var / t).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fading::GGHop;
    use crate::relay;
    use approx::assert_relative_eq;

    fn rayleigh_like_system() -> RelaySystem {
        // C -> 0 makes gamma_end = gamma1, an exponential with unit mean
        RelaySystem::with_fixed_gain(
            GGHop::new(1.0, 2.0, 1.0).unwrap(),
            GGHop::new(1.0, 2.0, 1.0).unwrap(),
            1e-9,
        )
        .unwrap()
    }

    #[test]
    fn deterministic_under_seed_and_shards() {
        let sys = rayleigh_like_system();
        let cfg = SimConfig::new(10_000, 99, 4).unwrap();
        let a = mc_moments(&sys, &cfg, 2).unwrap();
        let b = mc_moments(&sys, &cfg, 2).unwrap();
        assert_eq!(a, b);
        let oa = mc_outage(&sys, &cfg, 1.0).unwrap();
        let ob = mc_outage(&sys, &cfg, 1.0).unwrap();
        assert_eq!(oa, ob);
    }

    #[test]
    fn shard_split_preserves_trials() {
        let cfg = SimConfig::new(1_000_003, 1, 7).unwrap();
        let total: u64 = (0..7).map(|i| shard_trials(&cfg, i)).sum();
        assert_eq!(total, 1_000_003);
    }

    #[test]
    fn degenerate_moments_match_first_hop() {
        let sys = rayleigh_like_system();
        let cfg = SimConfig::new(2_000_000, 7, 2).unwrap();
        let est = mc_moments(&sys, &cfg, 2).unwrap();
        // exponential: mu_1 = 1, mu_2 = 2
        for (e, want) in est.iter().zip([1.0, 2.0]) {
            assert!(
                (e.value - want).abs() <= 3.0 * e.std_error,
                "estimate {} vs {} (se {})",
                e.value,
                want,
                e.std_error
            );
        }
    }

    #[test]
    fn moment_estimates_bracket_oracle() {
        let sys = RelaySystem::with_fixed_gain(
            GGHop::new(2.0, 3.0, 1.0).unwrap(),
            GGHop::new(2.0, 3.0, 1.0).unwrap(),
            1.5,
        )
        .unwrap();
        let cfg = SimConfig::new(4_000_000, 2024, 4).unwrap();
        let est = mc_moments(&sys, &cfg, 2).unwrap();
        for (n, e) in est.iter().enumerate() {
            let oracle = relay::end_to_end_moment_oracle(&sys, (n + 1) as f64).unwrap();
            assert!(
                (e.value - oracle).abs() <= 3.0 * e.std_error,
                "n={}: {} vs {} (se {})",
                n + 1,
                e.value,
                oracle,
                e.std_error
            );
        }
    }

    #[test]
    fn stderr_shrinks_with_trials() {
        let sys = rayleigh_like_system();
        let small = mc_moments(&sys, &SimConfig::new(100_000, 5, 2).unwrap(), 1).unwrap();
        let large = mc_moments(&sys, &SimConfig::new(200_000, 5, 2).unwrap(), 1).unwrap();
        let ratio = large[0].std_error / small[0].std_error;
        let want = 1.0 / 2.0f64.sqrt();
        assert!(
            (ratio - want).abs() / want < 0.2,
            "SE ratio {ratio} vs {want}"
        );
    }

    #[test]
    fn outage_known_cdf() {
        let sys = rayleigh_like_system();
        let cfg = SimConfig::new(1_000_000, 31, 4).unwrap();
        let est = mc_outage(&sys, &cfg, 1.0).unwrap();
        let want = 1.0 - (-1.0f64).exp();
        assert!((est.value - want).abs() <= 3.0 * est.std_error);
        // huge threshold -> certain outage
        let one = mc_outage(&sys, &SimConfig::new(10_000, 3, 1).unwrap(), 1e12).unwrap();
        assert_eq!(one.value, 1.0);
    }

    #[test]
    fn abep_known_closed_forms() {
        let sys = rayleigh_like_system();
        let cfg = SimConfig::new(2_000_000, 17, 4).unwrap();
        let bdpsk = mc_abep(&sys, &cfg, &ModulationScheme::Bdpsk).unwrap();
        assert!((bdpsk.value - 0.25).abs() <= 3.0 * bdpsk.std_error);
        let bpsk = mc_abep(&sys, &cfg, &ModulationScheme::bpsk()).unwrap();
        assert!((bpsk.value - 0.146446609406726).abs() <= 3.0 * bpsk.std_error);
    }

    #[test]
    fn gaussian_q_reference() {
        assert_relative_eq!(gaussian_q(0.0), 0.5, max_relative = 1e-14);
        // Q(1) and Q(3), textbook values
        assert_relative_eq!(gaussian_q(1.0), 0.158655253931457051, max_relative = 1e-12);
        assert_relative_eq!(gaussian_q(3.0), 1.34989803163009453e-3, max_relative = 1e-12);
        // symmetry
        assert_relative_eq!(
            gaussian_q(-1.2) + gaussian_q(1.2),
            1.0,
            max_relative = 1e-13
        );
    }
}
