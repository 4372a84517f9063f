//! Simultaneous bidirectional antenna-link selection for full-duplex MIMO
//! point-to-point links.
//!
//! The crate covers the three selection policies (exhaustive Max-WSR,
//! exhaustive Min-WSER and the greedy Serial-Max), Monte Carlo estimators of
//! the weighted sum rate and SER, and closed-form analysis of the Serial-Max
//! policy together with an independent quadrature oracle.

pub mod analytic;
pub mod channel;
pub mod config;
pub mod error;
pub mod metrics;
pub mod selection;
pub mod special;
pub mod sum;
pub mod sweep;

pub use config::{ModulationParams, SystemConfig};
pub use error::{Error, Result};
