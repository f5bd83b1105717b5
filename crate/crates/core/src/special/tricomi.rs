//! Tricomi confluent hypergeometric function Psi(a, b, x) for a > 0, x > 0.
//!
//! Evaluated from the Laplace-type integral representation
//! `Psi(a,b,x) = 1/Gamma(a) int_0^inf e^(-x t) t^(a-1) (1+t)^(b-a-1) dt`,
//! which is valid on the whole supported domain and independent of the
//! Meijer-G machinery it is used to cross-check.

use crate::error::{Error, Result};
use crate::quad;
use crate::special::gamma::ln_gamma;
#[allow(unused_imports)] // unused when std f64 methods shadow the trait
use num_traits::Float;

pub fn tricomi_psi(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::Domain { param: "a", value: a });
    }
    if !(x > 0.0) {
        return Err(Error::Domain { param: "x", value: x });
    }
    let ln_ga = ln_gamma(a);
    let f = |t: f64| ((a - 1.0) * t.ln() + (b - a - 1.0) * t.ln_1p() - x * t - ln_ga).exp();
    quad::integrate_0_inf(&f, 1e-12)
}
