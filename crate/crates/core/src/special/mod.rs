//! Special functions: gamma family, Meijer-G, Tricomi Psi, Gauss-Laguerre.

pub mod gamma;
pub mod laguerre;
pub mod meijer;
pub mod tricomi;

pub use gamma::{gamma_fn, ln_gamma, reg_upper_incomplete_gamma, upper_incomplete_gamma};
pub use laguerre::{gauss_laguerre, QuadratureRule};
pub use meijer::{meijer_g, meijer_g_series, MeijerGSpec};
pub use tricomi::tricomi_psi;
