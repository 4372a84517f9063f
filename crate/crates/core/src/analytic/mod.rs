//! Closed-form analysis of the Serial-Max policy.
//!
//! Distributions and averages of the two selected links' SINRs, their
//! high-SNR ceilings and floors, the perfect-cancellation asymptotics, and an
//! independent quadrature oracle. The exhaustive policies have no closed
//! forms and are covered by simulation only.

pub mod closed_form;
pub mod expansion;
pub mod quadrature;

use serde::Serialize;

use crate::config::{ModulationParams, SystemConfig};
use crate::error::{Error, Result};
use crate::metrics::SelectedLink;
use crate::special::gamma_half_integer;

pub use closed_form::{
    rate_ceiling_of_link, rate_closed_form, ser_closed_form, ser_floor_of_link, ClosedFormCdf,
};
pub use expansion::{
    expansion, mixture_weights, mu_coefficient, order_statistic_cdf, Expansion, MixtureWeights,
    MuCoefficient, OrderMixture, MAX_CLOSED_FORM_LINKS,
};
pub use quadrature::{
    cdf_integral_form, integrate, integrate_semi_infinite, quadrature_avg_rate,
    quadrature_avg_ser, quadrature_rate_of_link, quadrature_ser_of_link, IntegralCdf,
    QuadOptions, QuadResult, DEFAULT_TOLERANCE,
};

/// Ratio of largest term to result above which a sum is considered unreliable.
pub const CANCELLATION_RATIO: f64 = 1e12;

/// Largest excursion outside `[0, 1]` of a closed-form CDF that is clamped.
pub const CDF_CLAMP: f64 = 1e-9;

/// A closed-form result with diagnostics of the alternating sum behind it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticValue {
    pub value: f64,
    pub max_term_magnitude: f64,
    /// Set when `max_term_magnitude / |value| > 1e12`.
    pub cancellation_flag: bool,
    pub terms: usize,
    /// Terms evaluated through the `c eta = 1` limit.
    pub singular_terms: usize,
    /// The value comes from the quadrature oracle instead of the sum.
    pub from_quadrature: bool,
}

impl AnalyticValue {
    pub fn new(value: f64, max_term_magnitude: f64, terms: usize, singular_terms: usize) -> Self {
        AnalyticValue {
            value,
            max_term_magnitude,
            cancellation_flag: max_term_magnitude > CANCELLATION_RATIO * value.abs(),
            terms,
            singular_terms,
            from_quadrature: false,
        }
    }

    /// `major * first + minor * second`.
    fn weighted(first: &AnalyticValue, second: &AnalyticValue, cfg: &SystemConfig) -> Self {
        let (wa, wb) = (cfg.major_weight(), cfg.minor_weight());
        AnalyticValue {
            value: wa * first.value + wb * second.value,
            max_term_magnitude: (wa * first.max_term_magnitude).max(wb * second.max_term_magnitude),
            cancellation_flag: first.cancellation_flag || second.cancellation_flag,
            terms: first.terms + second.terms,
            singular_terms: first.singular_terms + second.singular_terms,
            from_quadrature: first.from_quadrature || second.from_quadrature,
        }
    }
}

fn cdf_of(cfg: &SystemConfig, link: SelectedLink, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("cdf argument {x} < 0")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if cfg.eta == 0.0 {
        return IntegralCdf::new(cfg, link)?.eval(x);
    }
    let raw = ClosedFormCdf::new(cfg, link)?.eval_raw(x);
    if (-CDF_CLAMP..=1.0 + CDF_CLAMP).contains(&raw) {
        Ok(raw.clamp(0.0, 1.0))
    } else {
        cdf_integral_form(cfg, link, x)
    }
}

/// CDF of the first selected link's instantaneous SINR. Uses the
/// exponential-sum expansion; with `eta = 0` the CDF of the maximum of
/// `n_a n_b` exponentials. Falls back to the integral form if rounding
/// pushes the sum more than 1e-9 outside `[0, 1]`.
pub fn cdf_gamma_ab(x: f64, cfg: &SystemConfig) -> Result<f64> {
    cdf_of(cfg, SelectedLink::GammaAb, x)
}

/// CDF of the second selected link's instantaneous SINR.
pub fn cdf_gamma_ba(x: f64, cfg: &SystemConfig) -> Result<f64> {
    cdf_of(cfg, SelectedLink::GammaBa, x)
}

fn with_fallback<F>(raw: AnalyticValue, oracle: F) -> Result<AnalyticValue>
where
    F: FnOnce() -> Result<f64>,
{
    if !raw.cancellation_flag && raw.value.is_finite() {
        return Ok(raw);
    }
    Ok(AnalyticValue {
        value: oracle()?,
        from_quadrature: true,
        ..raw
    })
}

fn rate_of_link(cfg: &SystemConfig, link: SelectedLink) -> Result<AnalyticValue> {
    with_fallback(rate_closed_form(cfg, link)?, || {
        quadrature_rate_of_link(cfg, link, DEFAULT_TOLERANCE)
    })
}

fn ser_of_link(cfg: &SystemConfig, link: SelectedLink) -> Result<AnalyticValue> {
    with_fallback(ser_closed_form(cfg, link)?, || {
        quadrature_ser_of_link(cfg, link, DEFAULT_TOLERANCE)
    })
}

/// Average rate (bits) of the first Serial-Max link.
pub fn avg_rate_ab(cfg: &SystemConfig) -> Result<AnalyticValue> {
    rate_of_link(cfg, SelectedLink::GammaAb)
}

/// Average rate (bits) of the second Serial-Max link.
pub fn avg_rate_ba(cfg: &SystemConfig) -> Result<AnalyticValue> {
    rate_of_link(cfg, SelectedLink::GammaBa)
}

/// `max(w,1-w) R_ab + min(w,1-w) R_ba`.
pub fn avg_weighted_sum_rate(cfg: &SystemConfig) -> Result<AnalyticValue> {
    Ok(AnalyticValue::weighted(&avg_rate_ab(cfg)?, &avg_rate_ba(cfg)?, cfg))
}

/// Limit of [`avg_weighted_sum_rate`] as `lambda_s -> inf`; needs `eta > 0`.
pub fn rate_ceiling(cfg: &SystemConfig) -> Result<f64> {
    Ok(cfg.major_weight() * rate_ceiling_of_link(cfg, SelectedLink::GammaAb)?
        + cfg.minor_weight() * rate_ceiling_of_link(cfg, SelectedLink::GammaBa)?)
}

pub fn avg_ser_ab(cfg: &SystemConfig) -> Result<AnalyticValue> {
    ser_of_link(cfg, SelectedLink::GammaAb)
}

pub fn avg_ser_ba(cfg: &SystemConfig) -> Result<AnalyticValue> {
    ser_of_link(cfg, SelectedLink::GammaBa)
}

/// `max(w,1-w) SER_ab + min(w,1-w) SER_ba`.
pub fn avg_weighted_sum_ser(cfg: &SystemConfig) -> Result<AnalyticValue> {
    Ok(AnalyticValue::weighted(&avg_ser_ab(cfg)?, &avg_ser_ba(cfg)?, cfg))
}

/// Limit of [`avg_weighted_sum_ser`] as `lambda_s -> inf`; needs `eta > 0`.
pub fn ser_floor(cfg: &SystemConfig) -> Result<f64> {
    Ok(cfg.major_weight() * ser_floor_of_link(cfg, SelectedLink::GammaAb)?
        + cfg.minor_weight() * ser_floor_of_link(cfg, SelectedLink::GammaBa)?)
}

/// High-SNR SER of a link whose SINR CDF behaves like
/// `zeta (x/lambda)^(N+1) / (N+1)` near zero:
/// `2^N alpha zeta Gamma(N + 3/2) / (sqrt(pi) (N+1) (beta lambda)^(N+1))`.
pub fn asymptotic_ser_generic(
    n_order: u32,
    zeta: f64,
    lambda: f64,
    modulation: ModulationParams,
) -> f64 {
    let n = n_order as i32;
    2f64.powi(n) * modulation.alpha_mod * zeta * gamma_half_integer(n_order + 1)
        / (std::f64::consts::PI.sqrt()
            * (n + 1) as f64
            * (modulation.beta_mod * lambda).powi(n + 1))
}

/// Perfect-cancellation asymptotes of the Serial-Max SERs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerfectCancellationAsymptote {
    pub ser_ab: f64,
    pub ser_ba: f64,
    /// Dominant term of the weighted sum, `min(w,1-w) ser_ba`.
    pub weighted: f64,
    /// `n_a n_b`, slope of `ser_ab`.
    pub diversity_ab: u32,
    /// `(n_a-1)(n_b-1)`, slope of `ser_ba` and of the weighted sum.
    pub diversity_ba: u32,
}

/// `u1 / lambda^NN`, `u2 / lambda^D` with `D = (n_a-1)(n_b-1)`, and the
/// weighted sum's leading term. Requires `eta = 0`.
pub fn asymptotic_ser_perfect_cancellation(
    cfg: &SystemConfig,
    lambda_s: f64,
) -> Result<PerfectCancellationAsymptote> {
    if cfg.eta != 0.0 {
        return Err(Error::RequiresPerfectCancellation { eta: cfg.eta });
    }
    if !(lambda_s > 0.0) {
        return Err(Error::InvalidRange {
            name: "lambda_s",
            value: lambda_s,
            range: "(0, inf)",
        });
    }
    let (na, nb) = (cfg.n_a, cfg.n_b);
    let nn = na * nb;
    let d = (na - 1) * (nb - 1);
    let alpha = cfg.modulation.alpha_mod;
    let beta = cfg.modulation.beta_mod;
    let sqrt_pi = std::f64::consts::PI.sqrt();

    let u1 = 2f64.powi(nn as i32 - 1) * alpha * gamma_half_integer(nn as u32)
        / (beta.powi(nn as i32) * sqrt_pi);
    let c_nn_d = crate::special::binom(nn, d)? as f64;
    let c_den = crate::special::binom(nn - 1, na + nb - 2)? as f64;
    let u2 = 2f64.powi(d as i32 - 1) * alpha * gamma_half_integer(d as u32) * c_nn_d
        / (beta.powi(d as i32) * sqrt_pi * c_den);

    let ser_ab = u1 / lambda_s.powi(nn as i32);
    let ser_ba = u2 / lambda_s.powi(d as i32);
    Ok(PerfectCancellationAsymptote {
        ser_ab,
        ser_ba,
        weighted: cfg.minor_weight() * ser_ba,
        diversity_ab: nn as u32,
        diversity_ba: d as u32,
    })
}
