//! System parameters and their validation.
//!
//! All computation works on the linear average SNR `lambda_s`; decibels only
//! appear at the edges (CLI flags, config files) through [`db_to_linear`] and
//! [`linear_to_db`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Modulation constants of the conditional SER map `alpha * Q(sqrt(beta * gamma))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulationParams {
    pub alpha_mod: f64,
    pub beta_mod: f64,
}

impl ModulationParams {
    pub const BPSK: ModulationParams = ModulationParams {
        alpha_mod: 1.0,
        beta_mod: 2.0,
    };

    pub fn new(alpha_mod: f64, beta_mod: f64) -> Result<Self> {
        let m = ModulationParams {
            alpha_mod,
            beta_mod,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha_mod > 0.0 && self.alpha_mod.is_finite()) {
            return Err(Error::InvalidRange {
                name: "alpha_mod",
                value: self.alpha_mod,
                range: "(0, inf)",
            });
        }
        if !(self.beta_mod > 0.0 && self.beta_mod.is_finite()) {
            return Err(Error::InvalidRange {
                name: "beta_mod",
                value: self.beta_mod,
                range: "(0, inf)",
            });
        }
        Ok(())
    }
}

impl Default for ModulationParams {
    fn default() -> Self {
        Self::BPSK
    }
}

/// Full-duplex point-to-point link configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    /// Antennas at node A.
    pub n_a: usize,
    /// Antennas at node B.
    pub n_b: usize,
    /// Linear average SNR of every link.
    pub lambda_s: f64,
    /// Self-interference cancellation coefficient, average INR is `eta * lambda_s`.
    pub eta: f64,
    /// Weight of the A->B direction.
    pub w: f64,
    pub modulation: ModulationParams,
}

/// Quantities derived from a validated [`SystemConfig`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    /// Average residual INR.
    pub lambda_i: f64,
    /// Obtainable-SINR scale `1 / (lambda_i + 1)`.
    pub scale: f64,
}

impl SystemConfig {
    /// Builds and validates a configuration.
    pub fn new(
        n_a: usize,
        n_b: usize,
        lambda_s: f64,
        eta: f64,
        w: f64,
        modulation: ModulationParams,
    ) -> Result<Self> {
        validate_config(SystemConfig {
            n_a,
            n_b,
            lambda_s,
            eta,
            w,
            modulation,
        })
    }

    /// Square `n x n` BPSK configuration, the common case in the experiments.
    pub fn square(n: usize, lambda_s: f64, eta: f64, w: f64) -> Result<Self> {
        Self::new(n, n, lambda_s, eta, w, ModulationParams::BPSK)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_a < 2 {
            return Err(Error::InvalidAntennaCount {
                which: "n_a",
                value: self.n_a,
            });
        }
        if self.n_b < 2 {
            return Err(Error::InvalidAntennaCount {
                which: "n_b",
                value: self.n_b,
            });
        }
        if !(self.lambda_s > 0.0 && self.lambda_s.is_finite()) {
            return Err(Error::InvalidRange {
                name: "lambda_s",
                value: self.lambda_s,
                range: "(0, inf)",
            });
        }
        if !(0.0..1.0).contains(&self.eta) {
            return Err(Error::InvalidRange {
                name: "eta",
                value: self.eta,
                range: "[0, 1)",
            });
        }
        if !(self.w > 0.0 && self.w < 1.0) {
            return Err(Error::InvalidRange {
                name: "w",
                value: self.w,
                range: "(0, 1)",
            });
        }
        self.modulation.validate()
    }

    /// Number of links `n_a * n_b`.
    pub fn link_count(&self) -> usize {
        self.n_a * self.n_b
    }

    pub fn derived(&self) -> DerivedParams {
        derived_params(self)
    }

    /// Weight carried by the stronger selected link, `max(w, 1 - w)`.
    pub fn major_weight(&self) -> f64 {
        self.w.max(1.0 - self.w)
    }

    /// Weight carried by the weaker selected link, `min(w, 1 - w)`.
    pub fn minor_weight(&self) -> f64 {
        self.w.min(1.0 - self.w)
    }

    pub fn with_lambda_s(mut self, lambda_s: f64) -> Result<Self> {
        self.lambda_s = lambda_s;
        validate_config(self)
    }

    pub fn with_eta(mut self, eta: f64) -> Result<Self> {
        self.eta = eta;
        validate_config(self)
    }

    pub fn with_w(mut self, w: f64) -> Result<Self> {
        self.w = w;
        validate_config(self)
    }

    /// Parses a flat `key = value` file. Blank lines and `#` comments are
    /// ignored. Recognised keys: `n_a`, `n_b`, `n` (both), `lambda_s` or
    /// `snr_db`, `eta`, `w`, `alpha_mod`, `beta_mod`. Modulation defaults to
    /// BPSK.
    pub fn from_kv_str(text: &str) -> Result<Self> {
        let mut n_a = None;
        let mut n_b = None;
        let mut lambda_s = None;
        let mut eta = None;
        let mut w = None;
        let mut modulation = ModulationParams::BPSK;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("expected 'key = value', got '{line}'"),
            })?;
            let key = key.trim();
            let value = value.trim();
            let as_f64 = || {
                value.parse::<f64>().map_err(|e| Error::Parse {
                    line: line_no,
                    message: format!("{key}: {e}"),
                })
            };
            let as_usize = || {
                value.parse::<usize>().map_err(|e| Error::Parse {
                    line: line_no,
                    message: format!("{key}: {e}"),
                })
            };
            match key {
                "n_a" => n_a = Some(as_usize()?),
                "n_b" => n_b = Some(as_usize()?),
                "n" => {
                    let n = as_usize()?;
                    n_a = Some(n);
                    n_b = Some(n);
                }
                "lambda_s" => lambda_s = Some(as_f64()?),
                "snr_db" => lambda_s = Some(db_to_linear(as_f64()?)),
                "eta" => eta = Some(as_f64()?),
                "w" => w = Some(as_f64()?),
                "alpha_mod" => modulation.alpha_mod = as_f64()?,
                "beta_mod" => modulation.beta_mod = as_f64()?,
                other => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("unknown key '{other}'"),
                    })
                }
            }
        }

        let missing = |name: &str| Error::Parse {
            line: 0,
            message: format!("missing key '{name}'"),
        };
        Self::new(
            n_a.ok_or_else(|| missing("n_a"))?,
            n_b.ok_or_else(|| missing("n_b"))?,
            lambda_s.ok_or_else(|| missing("lambda_s"))?,
            eta.ok_or_else(|| missing("eta"))?,
            w.ok_or_else(|| missing("w"))?,
            modulation,
        )
    }
}

/// Returns the configuration unchanged when every invariant holds.
pub fn validate_config(raw: SystemConfig) -> Result<SystemConfig> {
    raw.validate()?;
    Ok(raw)
}

pub fn derived_params(cfg: &SystemConfig) -> DerivedParams {
    let lambda_i = cfg.eta * cfg.lambda_s;
    DerivedParams {
        lambda_i,
        scale: 1.0 / (lambda_i + 1.0),
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}
