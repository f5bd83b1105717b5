//! Numerical Meijer-G function for positive real argument.
//!
//! The primary path integrates the Mellin-Barnes contour
//!
//! ```text
//! G(z) = 1/(2 pi i) int chi(s) z^s ds,
//! chi(s) = prod_{j<=m} Gamma(b_j - s) prod_{j<=n} Gamma(1 - a_j + s)
//!        / [prod_{j>m} Gamma(1 - b_j + s) prod_{j>n} Gamma(a_j - s)]
//! ```
//!
//! along a vertical line through the saddle of |chi(s) z^s| on the real
//! axis. Picking the saddle rather than the mid-strip line is what keeps the
//! oscillatory cancellation bounded, so the f64 result stays near machine
//! accuracy even when the integrand peak and the answer differ by many
//! orders of magnitude. The contour works uniformly, including coincident
//! pole (logarithmic) parameter cases that defeat series expansions.
//!
//! A Slater-type expansion into generalized hypergeometric series is kept as
//! an independent cross-check for parameter sets with simple poles.

use crate::error::{Error, Result};
use crate::quad;
use crate::special::gamma::{ln_gamma, ln_gamma_complex};
use alloc::format;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)] // unused when std f64 methods shadow the trait
use num_traits::Float;

/// Parameter set of `G^{m,n}_{p,q}(z | a; b)` with `m = b_top.len()`,
/// `n = a_top.len()`, `p = n + a_rest.len()`, `q = m + b_rest.len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeijerGSpec {
    a_top: Vec<f64>,
    a_rest: Vec<f64>,
    b_top: Vec<f64>,
    b_rest: Vec<f64>,
    argument: f64,
}

impl MeijerGSpec {
    pub fn new(
        a_top: Vec<f64>,
        a_rest: Vec<f64>,
        b_top: Vec<f64>,
        b_rest: Vec<f64>,
        argument: f64,
    ) -> Result<Self> {
        if !(argument > 0.0) || !argument.is_finite() {
            return Err(Error::Domain {
                param: "argument",
                value: argument,
            });
        }
        let all = a_top
            .iter()
            .chain(&a_rest)
            .chain(&b_top)
            .chain(&b_rest);
        for &p in all {
            if !p.is_finite() {
                return Err(Error::Domain { param: "parameter", value: p });
            }
        }
        let spec = Self {
            a_top,
            a_rest,
            b_top,
            b_rest,
            argument,
        };
        spec.validate_class()?;
        Ok(spec)
    }

    pub fn argument(&self) -> f64 {
        self.argument
    }

    pub fn orders(&self) -> (usize, usize, usize, usize) {
        (
            self.b_top.len(),
            self.a_top.len(),
            self.a_top.len() + self.a_rest.len(),
            self.b_top.len() + self.b_rest.len(),
        )
    }

    /// Decay rate of |chi| along the contour, in units of pi per unit |t|.
    fn decay(&self) -> f64 {
        let (m, n, p, q) = self.orders();
        (m + n) as f64 - 0.5 * (p + q) as f64
    }

    /// Separation strip: poles of Gamma(1 - a_j + s) lie at s <= strip.0,
    /// poles of Gamma(b_j - s) at s >= strip.1.
    fn strip(&self) -> (f64, f64) {
        let left = self
            .a_top
            .iter()
            .fold(f64::NEG_INFINITY, |acc, &a| acc.max(a - 1.0));
        let right = self.b_top.iter().fold(f64::INFINITY, |acc, &b| acc.min(b));
        (left, right)
    }

    fn validate_class(&self) -> Result<()> {
        if self.b_top.is_empty() {
            return Err(Error::UnsupportedClass {
                detail: format!("m = 0 (no left-side poles): {self:?}"),
            });
        }
        if self.decay() <= 0.0 {
            // need exponential decay of the contour integrand
            return Err(Error::UnsupportedClass {
                detail: format!("m + n - (p+q)/2 = {} not positive", self.decay()),
            });
        }
        let (left, right) = self.strip();
        if !(left < right) {
            return Err(Error::UnsupportedClass {
                detail: format!(
                    "pole families overlap: max(a_top)-1 = {left} >= min(b_top) = {right}"
                ),
            });
        }
        Ok(())
    }

    /// log |chi(c) z^c| on the real axis inside the strip.
    fn log_mag(&self, c: f64) -> f64 {
        let mut v = c * self.argument.ln();
        for &b in &self.b_top {
            v += ln_gamma(b - c);
        }
        for &a in &self.a_top {
            v += ln_gamma(1.0 - a + c);
        }
        for &b in &self.b_rest {
            v -= ln_gamma(1.0 - b + c);
        }
        for &a in &self.a_rest {
            v -= ln_gamma(a - c);
        }
        v
    }

    fn log_chi(&self, s: Complex64) -> Complex64 {
        let mut v = s * self.argument.ln();
        for &b in &self.b_top {
            v += ln_gamma_complex(Complex64::new(b, 0.0) - s);
        }
        for &a in &self.a_top {
            v += ln_gamma_complex(Complex64::new(1.0 - a, 0.0) + s);
        }
        for &b in &self.b_rest {
            v -= ln_gamma_complex(Complex64::new(1.0 - b, 0.0) + s);
        }
        for &a in &self.a_rest {
            v -= ln_gamma_complex(Complex64::new(a, 0.0) - s);
        }
        v
    }
}

/// Contour abscissa through (or clamped near) the saddle of the integrand.
fn saddle_abscissa(spec: &MeijerGSpec) -> f64 {
    let (left, right) = spec.strip();
    let (mut lo, hi);
    if left.is_finite() {
        let width = right - left;
        let margin = (0.1 * width).min(0.05);
        lo = left + margin;
        hi = right - margin;
    } else {
        // no left pole family: expand leftward while the magnitude still
        // decreases in that direction
        hi = right - 0.05;
        let mut span = 1.0;
        lo = hi - span;
        while spec.log_mag(lo) < spec.log_mag(lo + 0.25 * span) && span < 1e6 {
            span *= 2.0;
            lo = hi - span;
        }
    }
    // coarse grid scan, then golden-section refinement
    let mut best_c = 0.5 * (lo + hi);
    let mut best_v = spec.log_mag(best_c);
    for i in 0..=64 {
        let c = lo + (hi - lo) * i as f64 / 64.0;
        let v = spec.log_mag(c);
        if v < best_v {
            best_v = v;
            best_c = c;
        }
    }
    let gr = 0.5 * (5.0f64.sqrt() - 1.0);
    let h = (hi - lo) / 64.0;
    let (mut a, mut b) = ((best_c - h).max(lo), (best_c + h).min(hi));
    let mut x1 = b - gr * (b - a);
    let mut x2 = a + gr * (b - a);
    let mut f1 = spec.log_mag(x1);
    let mut f2 = spec.log_mag(x2);
    for _ in 0..80 {
        if b - a < 1e-8 {
            break;
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = spec.log_mag(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = spec.log_mag(x2);
        }
    }
    0.5 * (a + b)
}

/// Meijer-G via saddle-contour Mellin-Barnes integration.
///
/// Relative accuracy is ~1e-13 over the supported classes; failures to
/// truncate or to meet the panel budget are reported with the attempted
/// contour parameters.
pub fn meijer_g(spec: &MeijerGSpec) -> Result<f64> {
    let c = saddle_abscissa(spec);
    let log_peak = spec.log_mag(c);
    // value and magnitude of the normalized integrand at height t
    let at = |t: f64| (spec.log_chi(Complex64::new(c, t)) - log_peak).exp();
    let mag_at = |t: f64| (spec.log_chi(Complex64::new(c, t)).re - log_peak).exp();

    // conjugate symmetry: G = (e^log_peak / pi) * int_0^T Re[...] dt
    let mut t_max = 4.0;
    while mag_at(t_max) > 1e-18 && t_max < 1e4 {
        t_max *= 1.4;
    }
    if mag_at(t_max) > 1e-18 {
        return Err(Error::NonConvergence {
            what: "Mellin-Barnes truncation",
            detail: format!("contour Re s = {c}, |integrand({t_max})| still large"),
        });
    }
    let integral = quad::adaptive(&|t: f64| at(t).re, 0.0, t_max, 1e-15 * t_max.min(30.0))?;
    // assemble in log space so a large peak with a small normalized integral
    // cannot overflow prematurely
    let ln_mag = integral.abs().max(1e-300).ln() + log_peak - core::f64::consts::PI.ln();
    if ln_mag > 705.0 {
        return Err(Error::Overflow { what: "Meijer-G value" });
    }
    Ok(ln_mag.exp() * integral.signum())
}

/// Slater expansion: sum over the poles of the Gamma(b_j - s) factors,
/// usable when those poles are simple (all pairwise b_top differences
/// non-integer). Serves as an independent cross-check of [`meijer_g`].
pub fn meijer_g_series(spec: &MeijerGSpec) -> Result<f64> {
    let (m, n, p, q) = spec.orders();
    let z = spec.argument;
    if p >= q && !(p == q && z < 1.0) {
        return Err(Error::UnsupportedClass {
            detail: format!("series route needs p < q, or p = q with z < 1; got p={p} q={q} z={z}"),
        });
    }
    for i in 0..m {
        for j in 0..m {
            if i != j {
                let d = spec.b_top[i] - spec.b_top[j];
                if (d - d.round()).abs() < 1e-9 {
                    return Err(Error::UnsupportedClass {
                        detail: format!(
                            "series route needs simple poles; b_top[{i}] - b_top[{j}] = {d} is integer"
                        ),
                    });
                }
            }
        }
    }
    let all_a: Vec<f64> = spec.a_top.iter().chain(&spec.a_rest).copied().collect();
    let all_b: Vec<f64> = spec.b_top.iter().chain(&spec.b_rest).copied().collect();
    let sign = if (p as i64 - m as i64 - n as i64) % 2 == 0 {
        1.0
    } else {
        -1.0
    };
    let mut total = 0.0;
    for h in 0..m {
        let bh = spec.b_top[h];
        // prefactor: gammas evaluated in log space with sign tracking
        let mut ln_pref = bh * z.ln();
        let mut pref_sign = 1.0f64;
        let mut add_gamma = |x: f64, numerator: bool| -> Result<()> {
            if x <= 0.0 && x == x.floor() {
                return Err(Error::GammaPole { x });
            }
            let lg = ln_gamma(x);
            // reflection sign for negative arguments
            let s = if x > 0.0 {
                1.0
            } else {
                let k = (-x).floor() as i64;
                if k % 2 == 0 { -1.0 } else { 1.0 }
            };
            if numerator {
                ln_pref += lg;
                pref_sign *= s;
            } else {
                ln_pref -= lg;
                pref_sign *= s;
            }
            Ok(())
        };
        for (j, &b) in spec.b_top.iter().enumerate() {
            if j != h {
                add_gamma(b - bh, true)?;
            }
        }
        for &a in &spec.a_top {
            add_gamma(1.0 + bh - a, true)?;
        }
        for &a in &spec.a_rest {
            add_gamma(a - bh, false)?;
        }
        for &b in &spec.b_rest {
            add_gamma(1.0 + bh - b, false)?;
        }
        // pFq-1 series at sign * z
        let x = sign * z;
        let mut term = 1.0f64;
        let mut sum = 1.0f64;
        let mut peak = 1.0f64;
        let mut converged = false;
        for kk in 0..5000 {
            let k = kk as f64;
            let mut num = 1.0;
            for &a in &all_a {
                num *= 1.0 + bh - a + k;
            }
            let mut den = 1.0;
            for (j, &b) in all_b.iter().enumerate() {
                if j != h {
                    den *= 1.0 + bh - b + k;
                }
            }
            term *= num / den * x / (k + 1.0);
            sum += term;
            peak = peak.max(sum.abs()).max(term.abs());
            if term.abs() < 1e-17 * sum.abs().max(1e-300) && kk > 3 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence {
                what: "Slater series",
                detail: format!("pole group {h}, z = {z}"),
            });
        }
        if peak > 1e8 * sum.abs().max(1e-300) {
            return Err(Error::NonConvergence {
                what: "Slater series",
                detail: format!("cancellation loss: peak/|sum| = {:.1e}", peak / sum.abs()),
            });
        }
        total += pref_sign * ln_pref.exp() * sum;
    }
    Ok(total)
}
