//! Single-hop Generalized-Gamma SNR model.
//!
//! The SNR of a hop follows the three-parameter law with pdf
//!
//! ```text
//! f(g) = beta g^(m beta/2 - 1) / (2 Gamma(m) (tau gbar)^(m beta/2))
//!        * exp(-(g / (tau gbar))^(beta/2)),     tau = Gamma(m) / Gamma(m + 2/beta)
//! ```
//!
//! `beta = 2` recovers Nakagami-m (Gamma-distributed SNR), `m = 1` the
//! Weibull power law. The normalizer `tau` makes `mean_snr` the actual mean.
//! Everything is expressed in the SNR variable; envelope statistics are out
//! of scope.

use crate::error::{Error, Result};
use crate::special::gamma::{ln_gamma, reg_lower_incomplete_gamma};
use alloc::vec::Vec;
#[allow(unused_imports)] // unused when std f64 methods shadow the trait
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, Gamma};

/// One hop's fading description: severity shape `m > 1/2`, severity exponent
/// `beta > 0`, mean SNR (linear), and the derived normalizer `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GGHop {
    m: f64,
    beta: f64,
    mean_snr: f64,
    tau: f64,
}

impl GGHop {
    /// Construct a hop, rejecting out-of-range parameters.
    pub fn new(m: f64, beta: f64, mean_snr: f64) -> Result<Self> {
        if !(m > 0.5) || !m.is_finite() {
            return Err(Error::Domain { param: "m", value: m });
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::Domain { param: "beta", value: beta });
        }
        if !(mean_snr > 0.0) || !mean_snr.is_finite() {
            return Err(Error::Domain {
                param: "mean_snr",
                value: mean_snr,
            });
        }
        let tau = (ln_gamma(m) - ln_gamma(m + 2.0 / beta)).exp();
        Ok(Self {
            m,
            beta,
            mean_snr,
            tau,
        })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn mean_snr(&self) -> f64 {
        self.mean_snr
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Scale parameter tau * mean_snr, the natural SNR unit of the law.
    pub fn scale(&self) -> f64 {
        self.tau * self.mean_snr
    }

    /// Probability density of the hop SNR at `gamma`.
    pub fn pdf(&self, gamma: f64) -> f64 {
        if gamma < 0.0 {
            return 0.0;
        }
        let half_beta = 0.5 * self.beta;
        let shape_pow = self.m * half_beta; // m beta / 2
        if gamma == 0.0 {
            // limit depends on the sign of the leading exponent
            return if shape_pow > 1.0 {
                0.0
            } else if shape_pow == 1.0 {
                self.beta / (2.0 * ln_gamma(self.m).exp() * self.scale())
            } else {
                f64::INFINITY
            };
        }
        let s = self.scale();
        let ln_pdf = self.beta.ln() - core::f64::consts::LN_2 - ln_gamma(self.m)
            + (shape_pow - 1.0) * gamma.ln()
            - shape_pow * s.ln()
            - (gamma / s).powf(half_beta);
        ln_pdf.exp()
    }

    /// Distribution function `P(SNR <= gamma) = 1 - Q(m, (gamma/scale)^(beta/2))`,
    /// evaluated through the lower regularized form so deep-tail values stay
    /// accurate.
    pub fn cdf(&self, gamma: f64) -> f64 {
        if gamma <= 0.0 {
            return 0.0;
        }
        let arg = (gamma / self.scale()).powf(0.5 * self.beta);
        reg_lower_incomplete_gamma(self.m, arg).unwrap_or(1.0)
    }

    /// Raw moment `E[SNR^n] = scale^n Gamma(m + 2n/beta) / Gamma(m)`, for
    /// real order `n >= 0`.
    pub fn moment(&self, n: f64) -> Result<f64> {
        if !(n >= 0.0) {
            return Err(Error::Domain { param: "n", value: n });
        }
        let ln_m =
            n * self.scale().ln() + ln_gamma(self.m + 2.0 * n / self.beta) - ln_gamma(self.m);
        let v = ln_m.exp();
        if !v.is_finite() {
            return Err(Error::Overflow { what: "single-hop moment" });
        }
        Ok(v)
    }

    /// One draw of the hop SNR: `scale * X^(2/beta)` with X ~ Gamma(m, 1).
    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let x: f64 = Gamma::new(self.m, 1.0)
            .expect("m > 1/2 checked at construction")
            .sample(rng);
        self.scale() * x.powf(2.0 / self.beta)
    }

    /// `count` i.i.d. draws; deterministic for a fixed generator state.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Vec<f64> {
        let dist = Gamma::new(self.m, 1.0).expect("m > 1/2 checked at construction");
        let e = 2.0 / self.beta;
        let s = self.scale();
        (0..count)
            .map(|_| s * dist.sample(rng).powf(e))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tau_values() {
        // Gamma(1)/Gamma(2) = 1
        assert_relative_eq!(
            GGHop::new(1.0, 2.0, 1.0).unwrap().tau(),
            1.0,
            max_relative = 1e-13
        );
        // Gamma(2)/Gamma(3) = 1/2 (the 1/m Nakagami normalizer)
        assert_relative_eq!(
            GGHop::new(2.0, 2.0, 1.0).unwrap().tau(),
            0.5,
            max_relative = 1e-13
        );
        // Gamma(1)/Gamma(1.5)
        assert_relative_eq!(
            GGHop::new(1.0, 4.0, 1.0).unwrap().tau(),
            1.12837916709551257,
            max_relative = 1e-12
        );
    }

    #[test]
    fn constructor_rejects_bad_parameters() {
        assert!(matches!(
            GGHop::new(0.5, 2.0, 1.0),
            Err(Error::Domain { param: "m", .. })
        ));
        assert!(matches!(
            GGHop::new(1.0, 0.0, 1.0),
            Err(Error::Domain { param: "beta", .. })
        ));
        assert!(matches!(
            GGHop::new(1.0, 2.0, 0.0),
            Err(Error::Domain { param: "mean_snr", .. })
        ));
    }

    #[test]
    fn rayleigh_reduction() {
        // m=1, beta=2: exponential SNR
        let hop = GGHop::new(1.0, 2.0, 1.0).unwrap();
        assert_relative_eq!(hop.pdf(1.0), (-1.0f64).exp(), max_relative = 1e-12);
        assert_relative_eq!(hop.cdf(1.0), 1.0 - (-1.0f64).exp(), max_relative = 1e-12);
        assert_relative_eq!(hop.moment(2.0).unwrap(), 2.0, max_relative = 1e-12);
    }

    #[test]
    fn pdf_normalizes_and_matches_cdf() {
        let hop = GGHop::new(2.0, 3.0, 2.0).unwrap();
        let total = quad::integrate_0_inf(&|g| hop.pdf(g), 1e-12).unwrap();
        assert_relative_eq!(total, 1.0, max_relative = 1e-10);
        // cdf equals integral of pdf
        let part = quad::adaptive(&|g| hop.pdf(g), 0.0, 1.5, 1e-12).unwrap();
        assert_relative_eq!(part, hop.cdf(1.5), max_relative = 1e-8);
        // pdf equals d cdf / d gamma (central difference)
        let h = 1e-5;
        let numeric = (hop.cdf(1.0 + h) - hop.cdf(1.0 - h)) / (2.0 * h);
        assert!((hop.pdf(1.0) - numeric).abs() <= 1e-6);
    }

    #[test]
    fn moment_matches_quadrature_and_mean() {
        for (m, beta) in [(0.6, 1.0), (1.0, 4.0 / 3.0), (1.5, 2.0), (2.0, 2.5), (3.5, 3.0)] {
            let hop = GGHop::new(m, beta, 2.5).unwrap();
            assert_relative_eq!(hop.moment(1.0).unwrap(), 2.5, max_relative = 1e-10);
            let second = quad::integrate_0_inf(&|g| g * g * hop.pdf(g), 1e-12).unwrap();
            assert_relative_eq!(hop.moment(2.0).unwrap(), second, max_relative = 1e-8);
        }
    }

    #[test]
    fn weibull_reduction_at_m_one() {
        // m = 1: cdf(g) = 1 - exp(-(g/(tau gbar))^(beta/2))
        let hop = GGHop::new(1.0, 3.0, 2.0).unwrap();
        for g in [0.1, 0.5, 1.0, 5.0] {
            let want = 1.0 - (-((g / hop.scale()).powf(1.5))).exp();
            assert_relative_eq!(hop.cdf(g), want, max_relative = 1e-10);
        }
    }

    #[test]
    fn nakagami_reduction_at_beta_two() {
        // beta = 2: SNR ~ Gamma(m, gbar/m)
        let hop = GGHop::new(2.5, 2.0, 3.0).unwrap();
        let rate: f64 = 2.5 / 3.0;
        for g in [0.3, 1.0, 4.0] {
            let want = (2.5f64 * rate.ln() + 1.5 * g.ln() - rate * g
                - ln_gamma(2.5))
            .exp();
            assert_relative_eq!(hop.pdf(g), want, max_relative = 1e-10);
        }
    }

    #[test]
    fn sampling_is_deterministic_and_unbiased() {
        let hop = GGHop::new(2.0, 2.0, 1.0).unwrap();
        let mut rng1 = ChaCha8Rng::seed_from_u64(7);
        let mut rng2 = ChaCha8Rng::seed_from_u64(7);
        let a = hop.sample(&mut rng1, 1000);
        let b = hop.sample(&mut rng2, 1000);
        assert_eq!(a, b);

        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let n = 1_000_000usize;
        let draws = hop.sample(&mut rng, n);
        let mean: f64 = draws.iter().sum::<f64>() / n as f64;
        let var: f64 = draws.iter().map(|&x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
        let stderr = (var / n as f64).sqrt();
        assert!(
            (mean - 1.0).abs() < 3.0 * stderr,
            "mean {mean} off by more than 3 SE ({stderr})"
        );
    }

    #[test]
    fn kolmogorov_smirnov_gamma2() {
        // m=2, beta=2, gbar=1 draws against the analytic cdf
        let hop = GGHop::new(2.0, 2.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        let n = 100_000usize;
        let mut draws = hop.sample(&mut rng, n);
        draws.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut ks = 0.0f64;
        for (i, &x) in draws.iter().enumerate() {
            let f = hop.cdf(x);
            let lo = i as f64 / n as f64;
            let hi = (i + 1) as f64 / n as f64;
            ks = ks.max((f - lo).abs()).max((f - hi).abs());
        }
        // alpha ~ 0.001 critical value
        assert!(
            ks <= 1.95 / (n as f64).sqrt(),
            "KS statistic {ks} too large"
        );
    }
}
