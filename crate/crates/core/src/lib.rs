//! Performance analysis of dual-hop amplify-and-forward links with fixed-gain
//! relays over Generalized-Gamma fading.
//!
//! The crate computes end-to-end SNR statistics for the two-hop channel
//! `gamma_end = gamma1 * gamma2 / (C + gamma2)` where each hop SNR follows a
//! Generalized-Gamma law. Three routes to every quantity are provided and
//! cross-checked against each other:
//!
//! * closed forms built on Meijer-G functions ([`relay`], [`special`]),
//! * deterministic quadrature oracles ([`relay`], [`metrics`]),
//! * Monte Carlo estimation ([`simulate`]).
//!
//! Average bit error probability and outage probability are obtained from a
//! sub-diagonal Pade approximant to the MGF of the end-to-end SNR ([`pade`],
//! [`metrics`]).
//!
//! The crate is `no_std` (with `alloc`); all operations are pure functions of
//! their inputs and safe to call from any number of threads.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod fading;
pub mod metrics;
pub mod pade;
pub mod quad;
pub mod relay;
pub mod simulate;
pub mod special;

pub use error::{Error, Result};
pub use fading::GGHop;
pub use pade::{MomentSequence, PadeMGF};
pub use relay::RelaySystem;
