//! Instantaneous rate/SER maps and Monte Carlo estimators.
//!
//! Trials are grouped into fixed-size chunks; each chunk is summed with
//! compensated summation and chunk totals are folded in chunk order. The
//! result therefore does not depend on whether chunks ran on one thread or
//! many.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{draw_trial, instantaneous_sinr, to_obtainable_sinr, RngStream, TrialDraw};
use crate::config::{ModulationParams, SystemConfig};
use crate::error::{Error, Result};
use crate::selection::{
    exhaustive_max_wsr, selection_rate, serial_max, Policy, SelectionOutcome,
};
use crate::special::q_function;
use crate::sum::NeumaierSum;

const CHUNK: u64 = 1024;

/// `log2(1 + gamma)`.
#[inline]
pub fn rate_of(gamma: f64) -> f64 {
    gamma.ln_1p() / std::f64::consts::LN_2
}

/// Conditional SER `alpha Q(sqrt(beta gamma))`.
#[inline]
pub fn ser_of(gamma: f64, modulation: ModulationParams) -> f64 {
    modulation.alpha_mod * q_function((modulation.beta_mod * gamma).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricEstimate {
    pub value: f64,
    /// Sample standard deviation over `sqrt(trials)`.
    pub std_error: f64,
    pub trials: u64,
    pub master_seed: u64,
}

impl MetricEstimate {
    /// True when `x` lies within `k` standard errors of the estimate.
    pub fn within_sigmas(&self, x: f64, k: f64) -> bool {
        (self.value - x).abs() <= k * self.std_error
    }

    pub fn record<'a>(&self, metric: &'a str, policy: Option<Policy>, cfg: &'a SystemConfig) -> EstimateRecord<'a> {
        EstimateRecord {
            metric,
            policy,
            cfg,
            value: self.value,
            std_error: self.std_error,
            trials: self.trials,
            seed: self.master_seed,
        }
    }
}

/// JSON form of an estimate.
#[derive(Debug, Clone, Serialize)]
pub struct EstimateRecord<'a> {
    pub metric: &'a str,
    pub policy: Option<Policy>,
    pub cfg: &'a SystemConfig,
    pub value: f64,
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalCdf {
    pub grid: Vec<f64>,
    pub probabilities: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

/// Which selected link an SINR sample refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectedLink {
    /// The first Serial-Max pick (the link carrying the larger weight).
    GammaAb,
    /// The second Serial-Max pick.
    GammaBa,
}

impl SelectedLink {
    pub fn as_str(&self) -> &'static str {
        match self {
            SelectedLink::GammaAb => "gamma_ab",
            SelectedLink::GammaBa => "gamma_ba",
        }
    }
}

impl std::str::FromStr for SelectedLink {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gamma_ab" | "ab" => Ok(SelectedLink::GammaAb),
            "gamma_ba" | "ba" => Ok(SelectedLink::GammaBa),
            other => Err(Error::InvalidSweep(format!("unknown link '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    sum: NeumaierSum,
    sum_sq: NeumaierSum,
}

fn chunk_moments<F>(seed: u64, lo: u64, hi: u64, f: &F) -> Moments
where
    F: Fn(RngStream) -> f64,
{
    let mut m = Moments::default();
    for t in lo..hi {
        let x = f(RngStream::new(seed, t));
        m.sum.add(x);
        m.sum_sq.add(x * x);
    }
    m
}

/// Mean and standard error of `f` over trials `0..trials`, each with its own
/// substream of `seed`.
pub fn mc_estimate<F>(trials: u64, seed: u64, exec: Execution, f: F) -> Result<MetricEstimate>
where
    F: Fn(RngStream) -> f64 + Sync,
{
    if trials == 0 {
        return Err(Error::InvalidRange {
            name: "trials",
            value: 0.0,
            range: "[1, inf)",
        });
    }
    let n_chunks = trials.div_ceil(CHUNK);
    let chunk = |c: u64| chunk_moments(seed, c * CHUNK, ((c + 1) * CHUNK).min(trials), &f);
    let parts: Vec<Moments> = match exec {
        Execution::Serial => (0..n_chunks).map(chunk).collect(),
        Execution::Parallel => (0..n_chunks).into_par_iter().map(chunk).collect(),
    };
    let mut sum = NeumaierSum::new();
    let mut sum_sq = NeumaierSum::new();
    for p in &parts {
        sum.add(p.sum.value());
        sum_sq.add(p.sum_sq.value());
    }
    let n = trials as f64;
    let mean = sum.value() / n;
    let std_error = if trials > 1 {
        let var = ((sum_sq.value() - n * mean * mean) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    Ok(MetricEstimate {
        value: mean,
        std_error,
        trials,
        master_seed: seed,
    })
}

/// Draws one trial and runs `policy` on its obtainable-SINR matrix.
fn select_trial(
    cfg: &SystemConfig,
    policy: Policy,
    stream: RngStream,
) -> (TrialDraw, SelectionOutcome) {
    let draw = draw_trial(stream, cfg);
    let sinr = to_obtainable_sinr(&draw.snr, &cfg.derived());
    let outcome = policy
        .select(&sinr, cfg.w, cfg.modulation)
        .expect("validated config has at least 2x2 antennas");
    (draw, outcome)
}

/// Instantaneous SINRs `(gamma_ab, gamma_ba)` of the selected links.
fn instantaneous_pair(draw: &TrialDraw, outcome: &SelectionOutcome) -> (f64, f64) {
    let (ai, aj) = outcome.selection.ab_entry();
    let (bi, bj) = outcome.selection.ba_entry();
    (
        instantaneous_sinr(draw.snr.get(ai, aj), draw.inr_b),
        instantaneous_sinr(draw.snr.get(bi, bj), draw.inr_a),
    )
}

pub fn mc_weighted_sum_rate_with(
    cfg: &SystemConfig,
    policy: Policy,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<MetricEstimate> {
    let w = cfg.w;
    mc_estimate(trials, seed, exec, |s| {
        let (draw, outcome) = select_trial(cfg, policy, s);
        let (g_ab, g_ba) = instantaneous_pair(&draw, &outcome);
        w * rate_of(g_ab) + (1.0 - w) * rate_of(g_ba)
    })
}

/// Average weighted sum rate: selection on the obtainable SINR, metric on
/// the instantaneous SINR with the drawn residual interference.
pub fn mc_weighted_sum_rate(
    cfg: &SystemConfig,
    policy: Policy,
    trials: u64,
    seed: u64,
) -> Result<MetricEstimate> {
    mc_weighted_sum_rate_with(cfg, policy, trials, seed, Execution::Parallel)
}

pub fn mc_weighted_sum_ser_with(
    cfg: &SystemConfig,
    policy: Policy,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<MetricEstimate> {
    let w = cfg.w;
    let m = cfg.modulation;
    mc_estimate(trials, seed, exec, |s| {
        let (draw, outcome) = select_trial(cfg, policy, s);
        let (g_ab, g_ba) = instantaneous_pair(&draw, &outcome);
        w * ser_of(g_ab, m) + (1.0 - w) * ser_of(g_ba, m)
    })
}

/// Average weighted sum SER using the conditional SER map.
pub fn mc_weighted_sum_ser(
    cfg: &SystemConfig,
    policy: Policy,
    trials: u64,
    seed: u64,
) -> Result<MetricEstimate> {
    mc_weighted_sum_ser_with(cfg, policy, trials, seed, Execution::Parallel)
}

/// Instantaneous SINR samples of one Serial-Max pick, sorted ascending.
/// The first pick is paired with the residual INR at B, the second with
/// the one at A.
pub fn mc_sinr_samples(
    cfg: &SystemConfig,
    which: SelectedLink,
    trials: u64,
    seed: u64,
) -> Vec<f64> {
    let mut xs: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let draw = draw_trial(RngStream::new(seed, t), cfg);
            let sinr = to_obtainable_sinr(&draw.snr, &cfg.derived());
            let o = serial_max(&sinr, 1.0).expect("validated config");
            match which {
                SelectedLink::GammaAb => {
                    let (i, j) = o.selection.ab_entry();
                    instantaneous_sinr(draw.snr.get(i, j), draw.inr_b)
                }
                SelectedLink::GammaBa => {
                    let (i, j) = o.selection.ba_entry();
                    instantaneous_sinr(draw.snr.get(i, j), draw.inr_a)
                }
            }
        })
        .collect();
    xs.sort_by(f64::total_cmp);
    xs
}

/// Fraction of samples `<= x` at each grid point.
pub fn mc_empirical_cdf(
    cfg: &SystemConfig,
    which: SelectedLink,
    trials: u64,
    seed: u64,
    grid: &[f64],
) -> Result<EmpiricalCdf> {
    if grid.windows(2).any(|p| !(p[0] < p[1])) {
        return Err(Error::Domain("cdf grid must be strictly ascending".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidRange {
            name: "trials",
            value: 0.0,
            range: "[1, inf)",
        });
    }
    let xs = mc_sinr_samples(cfg, which, trials, seed);
    Ok(empirical_cdf_at(&xs, grid))
}

/// Empirical CDF of sorted samples on a grid.
pub fn empirical_cdf_at(sorted: &[f64], grid: &[f64]) -> EmpiricalCdf {
    let n = sorted.len() as f64;
    let probabilities = grid
        .iter()
        .map(|&x| sorted.partition_point(|&s| s <= x) as f64 / n)
        .collect();
    EmpiricalCdf {
        grid: grid.to_vec(),
        probabilities,
    }
}

/// Exact Kolmogorov–Smirnov distance between sorted samples and a CDF.
pub fn ks_distance<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

pub fn mc_p_not_with(cfg: &SystemConfig, trials: u64, seed: u64, exec: Execution) -> Result<MetricEstimate> {
    let w = cfg.w;
    mc_estimate(trials, seed, exec, |s| {
        let draw = draw_trial(s, cfg);
        let sinr = to_obtainable_sinr(&draw.snr, &cfg.derived());
        let ex = exhaustive_max_wsr(&sinr, w).expect("validated config");
        let sm = serial_max(&sinr, w).expect("validated config");
        let r_ex = selection_rate(&sinr, &ex.selection, w);
        let r_sm = selection_rate(&sinr, &sm.selection, w);
        if r_ex - r_sm > 1e-12 * r_ex.abs() {
            1.0
        } else {
            0.0
        }
    })
}

/// Frequency with which exhaustive Max-WSR strictly beats Serial-Max.
pub fn mc_p_not(cfg: &SystemConfig, trials: u64, seed: u64) -> Result<MetricEstimate> {
    mc_p_not_with(cfg, trials, seed, Execution::Parallel)
}

/// Counts of the rank (1 = largest) of the second Serial-Max pick within
/// the SNR matrix; entry `r - 1` holds the count for rank `r`.
pub fn second_rank_census(cfg: &SystemConfig, trials: u64, seed: u64) -> Vec<u64> {
    let nn = cfg.link_count();
    let ranks: Vec<usize> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let draw = draw_trial(RngStream::new(seed, t), cfg);
            let sinr = to_obtainable_sinr(&draw.snr, &cfg.derived());
            let o = serial_max(&sinr, cfg.w).expect("validated config");
            crate::selection::second_link_rank(&sinr, &o)
        })
        .collect();
    let mut counts = vec![0u64; nn];
    for r in ranks {
        counts[r - 1] += 1;
    }
    counts
}
