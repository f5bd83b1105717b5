//! Error type shared by all modules.

use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes of the numerical routines.
///
/// Every routine that can fail returns `Result`; nothing panics on bad input.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside its admissible range. Carries the parameter
    /// name and the offending value.
    Domain { param: &'static str, value: f64 },
    /// Gamma-function pole hit (non-positive integer argument).
    GammaPole { x: f64 },
    /// A result exceeded the representable range.
    Overflow { what: &'static str },
    /// An iteration failed to converge. `detail` records what was attempted
    /// (contour parameters, last deltas, orders).
    NonConvergence { what: &'static str, detail: String },
    /// The requested Meijer-G parameter class is not supported.
    UnsupportedClass { detail: String },
    /// The Hankel system of a Pade build is singular or too ill-conditioned.
    /// `condition` is the pivot-growth estimate.
    IllConditioned { condition: f64 },
    /// A Pade denominator root lies in the right half-plane.
    UnstablePole { re: f64, im: f64 },
    /// Two Pade poles are closer than the clustering tolerance.
    RepeatedPole { re: f64, im: f64 },
    /// Evaluation requested too close to a pole.
    NearPole { s: f64 },
    /// Two routes to the same quantity disagree beyond tolerance.
    Consistency {
        what: &'static str,
        primary: f64,
        reference: f64,
        rel_err: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { param, value } => {
                write!(f, "parameter `{param}` out of range: {value}")
            }
            Error::GammaPole { x } => write!(f, "gamma function pole at x = {x}"),
            Error::Overflow { what } => write!(f, "overflow computing {what}"),
            Error::NonConvergence { what, detail } => {
                write!(f, "{what} failed to converge: {detail}")
            }
            Error::UnsupportedClass { detail } => {
                write!(f, "unsupported Meijer-G class: {detail}")
            }
            Error::IllConditioned { condition } => {
                write!(f, "Hankel system ill-conditioned (pivot growth ~{condition:.3e})")
            }
            Error::UnstablePole { re, im } => {
                write!(f, "approximant pole {re}+{im}i in the right half-plane")
            }
            Error::RepeatedPole { re, im } => {
                write!(f, "repeated approximant pole near {re}+{im}i")
            }
            Error::NearPole { s } => write!(f, "evaluation at s = {s} too close to a pole"),
            Error::Consistency {
                what,
                primary,
                reference,
                rel_err,
            } => write!(
                f,
                "{what}: closed form {primary:.12e} vs oracle {reference:.12e} \
                 (relative error {rel_err:.3e})"
            ),
        }
    }
}

impl core::error::Error for Error {}
