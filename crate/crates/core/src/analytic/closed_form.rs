//! Closed-form averages over the exponential-sum CDF expansion.
//!
//! Each term `A_c e^{-c x/lambda_s} / (c eta x + 1)` integrates in closed form
//! against both the rate kernel (scaled exponential integrals) and the SER
//! kernel (scaled complementary error function). Rate sums are accumulated
//! in compensated double precision; SER sums cancel far more strongly at
//! high SNR and are accumulated in double-double.

use std::f64::consts::LN_2;

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::metrics::SelectedLink;
use crate::special::dd::Dd;
use crate::special::{erfcx_dd, exp_e1_scaled};
use crate::sum::NeumaierSum;

use super::expansion::{expansion, Expansion};
use super::AnalyticValue;

/// `|1 - c eta|` below this is treated as the removable singularity.
pub const SINGULAR_THRESHOLD: f64 = 1e-9;

/// Raw evaluation of `sum_c A_c e^{-c x/lambda_s} / (c eta x + 1)`.
#[derive(Debug, Clone)]
pub struct ClosedFormCdf {
    exp: Expansion,
    coeffs: Vec<(f64, Dd)>,
    lambda_s: f64,
    eta: f64,
}

impl ClosedFormCdf {
    pub fn new(cfg: &SystemConfig, link: SelectedLink) -> Result<Self> {
        let exp = expansion(cfg.n_a, cfg.n_b, link)?;
        let coeffs = exp.support().map(|c| (c as f64, exp.coeff_dd(c))).collect();
        Ok(ClosedFormCdf {
            exp,
            coeffs,
            lambda_s: cfg.lambda_s,
            eta: cfg.eta,
        })
    }

    pub fn expansion(&self) -> &Expansion {
        &self.exp
    }

    /// Unclamped sum, accumulated in double-double so the alternating terms
    /// cancel cleanly; may still stray outside `[0, 1]` by rounding.
    pub fn eval_raw(&self, x: f64) -> f64 {
        let x_over_lam = Dd::new(x) / self.lambda_s;
        let eta_x = Dd::new(self.eta) * x;
        let mut acc = Dd::ZERO;
        for &(c, a) in &self.coeffs {
            let e = (-(x_over_lam * c)).exp();
            acc = acc + a * e / (eta_x * c + 1.0);
        }
        acc.to_f64()
    }
}

fn require_positive_eta(cfg: &SystemConfig, what: &str) -> Result<()> {
    if cfg.eta > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{what} exists only with residual interference (eta > 0)"
        )))
    }
}

/// Average rate of one selected link in bits:
/// `(1/ln 2) sum_{c>=1} A_c [e^b E1(b) - e^a E1(a)] / (1 - c eta)` with
/// `a = c/lambda_s`, `b = 1/(eta lambda_s)`. When `c eta = 1` the bracket and
/// the denominator vanish together; the term is replaced by its limit
/// `-(1 - a e^a E1(a))`. With `eta = 0` the term is `-e^a E1(a)`.
pub fn rate_closed_form(cfg: &SystemConfig, link: SelectedLink) -> Result<AnalyticValue> {
    let exp = expansion(cfg.n_a, cfg.n_b, link)?;
    let (lam, eta) = (cfg.lambda_s, cfg.eta);
    let eb = if eta > 0.0 {
        exp_e1_scaled(1.0 / (eta * lam))?
    } else {
        0.0
    };
    let mut sum = NeumaierSum::new();
    let mut max_term: f64 = 0.0;
    let mut terms = 0;
    let mut singular = 0;
    for c in exp.support().filter(|&c| c > 0) {
        let cf = c as f64;
        let a = cf / lam;
        let ea = exp_e1_scaled(a)?;
        let r = if eta == 0.0 {
            -ea
        } else {
            let d = 1.0 - cf * eta;
            if d.abs() < SINGULAR_THRESHOLD {
                singular += 1;
                -(1.0 - a * ea)
            } else {
                (eb - ea) / d
            }
        };
        let term = exp.coeff(c) * r / LN_2;
        max_term = max_term.max(term.abs());
        sum.add(term);
        terms += 1;
    }
    Ok(AnalyticValue::new(sum.value(), max_term, terms, singular))
}

/// High-SNR limit of [`rate_closed_form`]:
/// `(1/ln 2) sum_{c>=1} A_c ln(c eta) / (1 - c eta)`, the term being `-1/ln 2`
/// times `A_c` when `c eta = 1`.
pub fn rate_ceiling_of_link(cfg: &SystemConfig, link: SelectedLink) -> Result<f64> {
    require_positive_eta(cfg, "rate ceiling")?;
    let exp = expansion(cfg.n_a, cfg.n_b, link)?;
    let mut sum = NeumaierSum::new();
    for c in exp.support().filter(|&c| c > 0) {
        let y = c as f64 * cfg.eta;
        let g = if (1.0 - y).abs() < SINGULAR_THRESHOLD {
            -1.0
        } else {
            y.ln() / (1.0 - y)
        };
        sum.add(exp.coeff(c) * g);
    }
    Ok(sum.value() / LN_2)
}

/// Average SER of one selected link:
/// `(alpha/2) sum_c A_c s_c` with `s_0 = 1` and, for `c >= 1`,
/// `s_c = sqrt(pi u) erfcx(sqrt(u + v))`, `u = beta/(2 c eta)`,
/// `v = 1/(eta lambda_s)`; with `eta = 0`, `s_c = sqrt(beta/(beta + 2c/lambda_s))`.
/// `lambda_s = None` gives the high-SNR floor (`v = 0`).
fn ser_sum(cfg: &SystemConfig, link: SelectedLink, lambda_s: Option<f64>) -> Result<AnalyticValue> {
    let exp = expansion(cfg.n_a, cfg.n_b, link)?;
    let beta = Dd::new(cfg.modulation.beta_mod);
    let eta = cfg.eta;
    let v = match lambda_s {
        Some(lam) if eta > 0.0 => (Dd::new(eta) * lam).recip(),
        _ => Dd::ZERO,
    };
    let mut acc = Dd::ZERO;
    let mut max_term: f64 = 0.0;
    let mut terms = 0;
    for c in exp.support() {
        let s = if c == 0 {
            Dd::ONE
        } else if eta > 0.0 {
            let u = beta / (Dd::new(2.0 * c as f64) * eta);
            (Dd::PI * u).sqrt() * erfcx_dd((u + v).sqrt())
        } else {
            let lam = lambda_s.expect("eta = 0 has no floor");
            (beta / (beta + Dd::new(2.0 * c as f64) / lam)).sqrt()
        };
        let term = exp.coeff_dd(c) * s;
        max_term = max_term.max(term.to_f64().abs());
        acc = acc + term;
        terms += 1;
    }
    let half_alpha = 0.5 * cfg.modulation.alpha_mod;
    Ok(AnalyticValue::new(
        half_alpha * acc.to_f64(),
        half_alpha * max_term,
        terms,
        0,
    ))
}

pub fn ser_closed_form(cfg: &SystemConfig, link: SelectedLink) -> Result<AnalyticValue> {
    ser_sum(cfg, link, Some(cfg.lambda_s))
}

pub fn ser_floor_of_link(cfg: &SystemConfig, link: SelectedLink) -> Result<f64> {
    require_positive_eta(cfg, "error floor")?;
    Ok(ser_sum(cfg, link, None)?.value)
}
