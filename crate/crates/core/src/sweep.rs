//! Parameter sweeps producing long-format result tables.
//!
//! A [`SweepSpec`] names a metric and the grids to cross. [`run_sweep`]
//! evaluates the grid points in parallel and returns one [`ResultRow`] per
//! point (per link and abscissa for CDF sweeps) in grid order, so output
//! files are identical across runs with the same seed.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{
    asymptotic_ser_perfect_cancellation, avg_weighted_sum_rate, avg_weighted_sum_ser,
    cdf_gamma_ab, cdf_gamma_ba, rate_ceiling, ser_floor, MAX_CLOSED_FORM_LINKS,
};
use crate::channel::{draw_snr_matrix, to_obtainable_sinr};
use crate::config::{db_to_linear, ModulationParams, SystemConfig};
use crate::error::{Error, Result};
use crate::metrics::{
    mc_empirical_cdf, mc_estimate, mc_p_not, mc_weighted_sum_rate, mc_weighted_sum_ser,
    Execution, SelectedLink,
};
use crate::selection::{comparison_count, p_not_upper_bound, Policy};

pub const TOOL_NAME: &str = "fdlink";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMetric {
    /// Average weighted sum rate.
    Wsr,
    /// Average weighted sum SER.
    Wser,
    /// Frequency with which Serial-Max misses the exhaustive optimum.
    PNot,
    /// Distribution of the selected links' SINR.
    Cdf,
    /// Comparison counts of the selection searches.
    Complexity,
}

impl SweepMetric {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepMetric::Wsr => "wsr",
            SweepMetric::Wser => "wser",
            SweepMetric::PNot => "p_not",
            SweepMetric::Cdf => "cdf",
            SweepMetric::Complexity => "complexity",
        }
    }
}

impl fmt::Display for SweepMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepMetric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wsr" => Ok(SweepMetric::Wsr),
            "wser" => Ok(SweepMetric::Wser),
            "p_not" | "pnot" => Ok(SweepMetric::PNot),
            "cdf" => Ok(SweepMetric::Cdf),
            "complexity" => Ok(SweepMetric::Complexity),
            other => Err(Error::InvalidSweep(format!("unknown metric '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::InvalidSweep(format!("unknown format '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    /// Preset the spec came from, if any.
    pub name: Option<String>,
    pub metric: SweepMetric,
    pub policies: Vec<Policy>,
    pub snr_db: Vec<f64>,
    pub etas: Vec<f64>,
    /// `(n_a, n_b)` pairs.
    pub sizes: Vec<(usize, usize)>,
    pub w: f64,
    /// Monte Carlo trials per point; 0 leaves the MC columns empty for the
    /// rate, SER and complexity metrics.
    pub trials: u64,
    pub seed: u64,
    /// Linear SINR abscissae of CDF sweeps.
    pub x_grid: Vec<f64>,
    pub modulation: ModulationParams,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl SweepSpec {
    /// An empty spec for `metric` with BPSK, `w = 0.7` and seed 1.
    pub fn new(metric: SweepMetric) -> Self {
        SweepSpec {
            name: None,
            metric,
            policies: Vec::new(),
            snr_db: Vec::new(),
            etas: Vec::new(),
            sizes: Vec::new(),
            w: 0.7,
            trials: DEFAULT_TRIALS,
            seed: 1,
            x_grid: Vec::new(),
            modulation: ModulationParams::BPSK,
            out: None,
            format: OutputFormat::Csv,
        }
    }

    fn needs_policies(&self) -> bool {
        matches!(
            self.metric,
            SweepMetric::Wsr | SweepMetric::Wser | SweepMetric::Complexity
        )
    }

    fn needs_channel_grid(&self) -> bool {
        self.metric != SweepMetric::Complexity
    }

    /// Checks every grid before any computation starts.
    pub fn validate(&self) -> Result<()> {
        let empty = |what: &str| Err(Error::InvalidSweep(format!("{what} grid is empty")));
        if self.sizes.is_empty() {
            return empty("antenna size");
        }
        if self.needs_policies() && self.policies.is_empty() {
            return empty("policy");
        }
        if self.needs_channel_grid() {
            if self.snr_db.is_empty() {
                return empty("snr");
            }
            if self.etas.is_empty() {
                return empty("eta");
            }
        }
        if matches!(self.metric, SweepMetric::PNot | SweepMetric::Cdf) && self.trials == 0 {
            return Err(Error::InvalidSweep(format!(
                "metric {} is simulated and needs trials >= 1",
                self.metric
            )));
        }
        if self.metric == SweepMetric::Cdf {
            if self.x_grid.is_empty() {
                return empty("x");
            }
            if self.x_grid.iter().any(|x| !(*x >= 0.0 && x.is_finite()))
                || self.x_grid.windows(2).any(|p| !(p[0] < p[1]))
            {
                return Err(Error::InvalidSweep(
                    "x grid must be finite, nonnegative and strictly ascending".into(),
                ));
            }
        }
        if let Some(db) = self.snr_db.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidSweep(format!("snr {db} dB is not finite")));
        }
        for cfg in self.configs()? {
            cfg.validate()?;
        }
        Ok(())
    }

    fn configs(&self) -> Result<Vec<SystemConfig>> {
        let snr: &[f64] = if self.needs_channel_grid() { &self.snr_db } else { &[10.0] };
        let etas: &[f64] = if self.needs_channel_grid() { &self.etas } else { &[0.0] };
        let mut out = Vec::new();
        for &(na, nb) in &self.sizes {
            for &eta in etas {
                for &db in snr {
                    out.push(SystemConfig::new(
                        na,
                        nb,
                        db_to_linear(db),
                        eta,
                        self.w,
                        self.modulation,
                    )?);
                }
            }
        }
        Ok(out)
    }
}

/// One output record. Columns without a value at a point are `None`, which
/// is an empty CSV field and `null` in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub metric: SweepMetric,
    pub policy: Option<Policy>,
    pub link: Option<SelectedLink>,
    pub n_a: usize,
    pub n_b: usize,
    pub snr_db: Option<f64>,
    pub eta: Option<f64>,
    pub w: f64,
    pub x: Option<f64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub mc_value: Option<f64>,
    pub mc_stderr: Option<f64>,
    pub analytic_value: Option<f64>,
    pub ceiling_or_floor: Option<f64>,
    pub asymptote: Option<f64>,
    pub comparisons: Option<u64>,
}

impl ResultRow {
    fn at(metric: SweepMetric, cfg: &SystemConfig, snr_db: Option<f64>) -> Self {
        ResultRow {
            metric,
            policy: None,
            link: None,
            n_a: cfg.n_a,
            n_b: cfg.n_b,
            snr_db,
            eta: snr_db.map(|_| cfg.eta),
            w: cfg.w,
            x: None,
            trials: None,
            seed: None,
            mc_value: None,
            mc_stderr: None,
            analytic_value: None,
            ceiling_or_floor: None,
            asymptote: None,
            comparisons: None,
        }
    }
}

pub const DEFAULT_TRIALS: u64 = 100_000;

pub const PRESETS: [&str; 7] = ["fig2", "fig3", "fig4", "fig5", "fig6", "table1", "pnot"];

/// `lo, lo+step, ..., hi` inclusive.
pub fn db_range(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(hi >= lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidSweep(format!(
            "bad range {lo}:{hi}:{step} (need lo <= hi, step > 0)"
        )));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| lo + k as f64 * step).collect())
}

fn square(ns: impl IntoIterator<Item = usize>) -> Vec<(usize, usize)> {
    ns.into_iter().map(|n| (n, n)).collect()
}

/// Sweep of a named experiment. The rate and SER sweeps cover 0 to 40 dB
/// in 2 dB steps with `w = 0.7` and BPSK.
///
/// * `fig2`: rate, N = 3, eta in {0.02, 0.05, 0.1}, Max-WSR and Serial-Max.
/// * `fig3`: rate, eta = 0.02, N in {3, 4, 5}, Max-WSR and Serial-Max.
/// * `fig4`: SER, N = 3, eta in {0, 0.05, 0.1, 0.5}, Serial-Max.
/// * `fig5`: SER, eta = 0.05, N in {3, 4, 5}, Min-WSER and Serial-Max.
/// * `fig6`: SER at 10 and 15 dB, eta in {0.1, 0.2}, N = 2..8, Min-WSER and
///   Serial-Max.
/// * `table1`: comparison counts for every 2 <= n_a, n_b <= 8.
/// * `pnot`: optimality-gap frequency for N = 2..5.
pub fn preset(name: &str) -> Result<SweepSpec> {
    let sweep = db_range(0.0, 40.0, 2.0)?;
    let both_rate = vec![Policy::MaxWsr, Policy::SerialMax];
    let both_ser = vec![Policy::MinWser, Policy::SerialMax];
    let mut s = match name {
        "fig2" => SweepSpec {
            policies: both_rate,
            snr_db: sweep,
            etas: vec![0.02, 0.05, 0.1],
            sizes: square([3]),
            ..SweepSpec::new(SweepMetric::Wsr)
        },
        "fig3" => SweepSpec {
            policies: both_rate,
            snr_db: sweep,
            etas: vec![0.02],
            sizes: square([3, 4, 5]),
            ..SweepSpec::new(SweepMetric::Wsr)
        },
        "fig4" => SweepSpec {
            policies: vec![Policy::SerialMax],
            snr_db: sweep,
            etas: vec![0.0, 0.05, 0.1, 0.5],
            sizes: square([3]),
            ..SweepSpec::new(SweepMetric::Wser)
        },
        "fig5" => SweepSpec {
            policies: both_ser,
            snr_db: sweep,
            etas: vec![0.05],
            sizes: square([3, 4, 5]),
            ..SweepSpec::new(SweepMetric::Wser)
        },
        "fig6" => SweepSpec {
            policies: both_ser,
            snr_db: vec![10.0, 15.0],
            etas: vec![0.1, 0.2],
            sizes: square(2..=8),
            ..SweepSpec::new(SweepMetric::Wser)
        },
        "table1" => SweepSpec {
            policies: vec![Policy::MaxWsr, Policy::SerialMax],
            sizes: (2..=8).flat_map(|a| (2..=8).map(move |b| (a, b))).collect(),
            trials: 16,
            ..SweepSpec::new(SweepMetric::Complexity)
        },
        "pnot" => SweepSpec {
            snr_db: vec![10.0],
            etas: vec![0.1],
            sizes: square(2..=5),
            ..SweepSpec::new(SweepMetric::PNot)
        },
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    s.name = Some(name.to_string());
    Ok(s)
}

fn closed_form_available(cfg: &SystemConfig) -> bool {
    cfg.link_count() <= MAX_CLOSED_FORM_LINKS
}

fn rate_or_ser_row(
    spec: &SweepSpec,
    cfg: &SystemConfig,
    snr_db: f64,
    policy: Policy,
) -> Result<ResultRow> {
    let mut row = ResultRow::at(spec.metric, cfg, Some(snr_db));
    row.policy = Some(policy);
    row.comparisons = Some(comparison_count(
        policy.comparison_method(),
        cfg.n_a,
        cfg.n_b,
    ));
    if spec.trials > 0 {
        let est = match spec.metric {
            SweepMetric::Wsr => mc_weighted_sum_rate(cfg, policy, spec.trials, spec.seed)?,
            _ => mc_weighted_sum_ser(cfg, policy, spec.trials, spec.seed)?,
        };
        row.trials = Some(est.trials);
        row.seed = Some(est.master_seed);
        row.mc_value = Some(est.value);
        row.mc_stderr = Some(est.std_error);
    }
    // Only Serial-Max has closed forms.
    if policy == Policy::SerialMax && closed_form_available(cfg) {
        if spec.metric == SweepMetric::Wsr {
            row.analytic_value = Some(avg_weighted_sum_rate(cfg)?.value);
            if cfg.eta > 0.0 {
                row.ceiling_or_floor = Some(rate_ceiling(cfg)?);
            }
        } else {
            row.analytic_value = Some(avg_weighted_sum_ser(cfg)?.value);
            if cfg.eta > 0.0 {
                row.ceiling_or_floor = Some(ser_floor(cfg)?);
            } else {
                row.asymptote =
                    Some(asymptotic_ser_perfect_cancellation(cfg, cfg.lambda_s)?.weighted);
            }
        }
    }
    Ok(row)
}

fn p_not_row(spec: &SweepSpec, cfg: &SystemConfig, snr_db: f64) -> Result<ResultRow> {
    let est = mc_p_not(cfg, spec.trials, spec.seed)?;
    let mut row = ResultRow::at(spec.metric, cfg, Some(snr_db));
    row.trials = Some(est.trials);
    row.seed = Some(est.master_seed);
    row.mc_value = Some(est.value);
    row.mc_stderr = Some(est.std_error);
    row.ceiling_or_floor = Some(p_not_upper_bound(cfg.n_a, cfg.n_b)?);
    Ok(row)
}

fn cdf_rows(spec: &SweepSpec, cfg: &SystemConfig, snr_db: f64) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    let n = spec.trials as f64;
    for link in [SelectedLink::GammaAb, SelectedLink::GammaBa] {
        let emp = mc_empirical_cdf(cfg, link, spec.trials, spec.seed, &spec.x_grid)?;
        for (&x, &p) in emp.grid.iter().zip(&emp.probabilities) {
            let mut row = ResultRow::at(spec.metric, cfg, Some(snr_db));
            row.policy = Some(Policy::SerialMax);
            row.link = Some(link);
            row.x = Some(x);
            row.trials = Some(spec.trials);
            row.seed = Some(spec.seed);
            row.mc_value = Some(p);
            row.mc_stderr = Some((p * (1.0 - p) / n).sqrt());
            if closed_form_available(cfg) {
                row.analytic_value = Some(match link {
                    SelectedLink::GammaAb => cdf_gamma_ab(x, cfg)?,
                    SelectedLink::GammaBa => cdf_gamma_ba(x, cfg)?,
                });
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Comparison count from the formula, and the tally the implementation
/// actually reports, averaged over `trials` random matrices.
fn complexity_row(spec: &SweepSpec, cfg: &SystemConfig, policy: Policy) -> Result<ResultRow> {
    let mut row = ResultRow::at(spec.metric, cfg, None);
    row.policy = Some(policy);
    let formula = comparison_count(policy.comparison_method(), cfg.n_a, cfg.n_b);
    row.comparisons = Some(formula);
    row.analytic_value = Some(formula as f64);
    if spec.trials > 0 {
        let derived = cfg.derived();
        let est = mc_estimate(spec.trials, spec.seed, Execution::Serial, |s| {
            let sinr = to_obtainable_sinr(&draw_snr_matrix(s, cfg), &derived);
            policy
                .select(&sinr, cfg.w, cfg.modulation)
                .map(|o| o.comparisons_used as f64)
                .unwrap_or(f64::NAN)
        })?;
        row.trials = Some(est.trials);
        row.seed = Some(est.master_seed);
        row.mc_value = Some(est.value);
        row.mc_stderr = Some(est.std_error);
    }
    Ok(row)
}

struct Point {
    cfg: SystemConfig,
    snr_db: f64,
    policy: Option<Policy>,
}

impl Point {
    fn describe(&self) -> String {
        let mut s = format!(
            "n_a={} n_b={} snr_db={} eta={}",
            self.cfg.n_a, self.cfg.n_b, self.snr_db, self.cfg.eta
        );
        if let Some(p) = self.policy {
            s.push_str(&format!(" policy={p}"));
        }
        s
    }
}

fn grid_points(spec: &SweepSpec) -> Result<Vec<Point>> {
    let mut points = Vec::new();
    let per_policy: Vec<Option<Policy>> = if spec.needs_policies() {
        spec.policies.iter().copied().map(Some).collect()
    } else {
        vec![None]
    };
    let snr: &[f64] = if spec.needs_channel_grid() { &spec.snr_db } else { &[10.0] };
    let etas: &[f64] = if spec.needs_channel_grid() { &spec.etas } else { &[0.0] };
    for &(na, nb) in &spec.sizes {
        for &eta in etas {
            for &db in snr {
                let cfg =
                    SystemConfig::new(na, nb, db_to_linear(db), eta, spec.w, spec.modulation)?;
                for &policy in &per_policy {
                    points.push(Point {
                        cfg,
                        snr_db: db,
                        policy,
                    });
                }
            }
        }
    }
    Ok(points)
}

fn eval_point(spec: &SweepSpec, p: &Point) -> Result<Vec<ResultRow>> {
    let cfg = &p.cfg;
    match spec.metric {
        SweepMetric::Wsr | SweepMetric::Wser => {
            Ok(vec![rate_or_ser_row(spec, cfg, p.snr_db, p.policy.expect("policy grid"))?])
        }
        SweepMetric::PNot => Ok(vec![p_not_row(spec, cfg, p.snr_db)?]),
        SweepMetric::Cdf => cdf_rows(spec, cfg, p.snr_db),
        SweepMetric::Complexity => {
            Ok(vec![complexity_row(spec, cfg, p.policy.expect("policy grid"))?])
        }
    }
}

/// Validates the spec, then evaluates every grid point. Rows come back in
/// grid order (sizes, then eta, then SNR, then policy) regardless of which
/// point finishes first. The first failing point aborts the sweep with its
/// coordinates attached.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    let points = grid_points(spec)?;
    let results: Vec<Result<Vec<ResultRow>>> = points
        .par_iter()
        .map(|p| {
            eval_point(spec, p).map_err(|e| Error::AtGridPoint {
                context: p.describe(),
                source: Box::new(e),
            })
        })
        .collect();
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(writer: W, rows: &[ResultRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonDocument<'a> {
    tool: &'static str,
    version: &'static str,
    spec: &'a SweepSpec,
    rows: &'a [ResultRow],
}

#[derive(Serialize)]
struct Sidecar<'a> {
    tool: &'static str,
    version: &'static str,
    spec: &'a SweepSpec,
    row_count: usize,
}

/// JSON document holding the tool version, the spec and all rows.
pub fn write_json<W: Write>(mut writer: W, spec: &SweepSpec, rows: &[ResultRow]) -> Result<()> {
    let doc = JsonDocument {
        tool: TOOL_NAME,
        version: TOOL_VERSION,
        spec,
        rows,
    };
    serde_json::to_writer_pretty(&mut writer, &doc)?;
    writeln!(writer)?;
    Ok(())
}

pub fn write_rows<W: Write>(
    writer: W,
    format: OutputFormat,
    spec: &SweepSpec,
    rows: &[ResultRow],
) -> Result<()> {
    match format {
        OutputFormat::Csv => write_csv(writer, rows),
        OutputFormat::Json => write_json(writer, spec, rows),
    }
}

/// Path of the JSON sidecar written next to a CSV result file.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// Writes the result file at `out`; CSV output also gets a sidecar with the
/// spec and tool version. Contents depend only on the spec.
pub fn write_outputs(out: &Path, spec: &SweepSpec, rows: &[ResultRow]) -> Result<()> {
    let f = BufWriter::new(File::create(out)?);
    write_rows(f, spec.format, spec, rows)?;
    if spec.format == OutputFormat::Csv {
        let mut side = BufWriter::new(File::create(sidecar_path(out))?);
        let meta = Sidecar {
            tool: TOOL_NAME,
            version: TOOL_VERSION,
            spec,
            row_count: rows.len(),
        };
        serde_json::to_writer_pretty(&mut side, &meta)?;
        writeln!(side)?;
        side.flush()?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for name in PRESETS {
            preset(name).unwrap().validate().unwrap();
        }
        assert!(matches!(preset("bogus"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn empty_grid_rejected() {
        let mut s = preset("fig2").unwrap();
        s.snr_db.clear();
        assert!(matches!(run_sweep(&s), Err(Error::InvalidSweep(_))));
        let mut s = preset("fig2").unwrap();
        s.policies.clear();
        assert!(matches!(run_sweep(&s), Err(Error::InvalidSweep(_))));
    }

    #[test]
    fn range_is_inclusive() {
        assert_eq!(db_range(0.0, 40.0, 2.0).unwrap().len(), 21);
        assert_eq!(db_range(0.0, 1.0, 0.1).unwrap().len(), 11);
        assert_eq!(db_range(5.0, 5.0, 1.0).unwrap(), vec![5.0]);
        assert!(db_range(1.0, 0.0, 1.0).is_err());
        assert!(db_range(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn complexity_rows_match_formula() {
        let rows = run_sweep(&preset("table1").unwrap()).unwrap();
        assert_eq!(rows.len(), 49 * 2);
        for r in rows {
            let c = r.comparisons.unwrap() as f64;
            assert_eq!(r.mc_value, Some(c));
            assert_eq!(r.mc_stderr, Some(0.0));
        }
    }

    #[test]
    fn bad_point_reports_coordinates() {
        let s = SweepSpec {
            policies: vec![Policy::SerialMax],
            snr_db: vec![10.0],
            etas: vec![1.5],
            sizes: vec![(2, 2)],
            trials: 10,
            ..SweepSpec::new(SweepMetric::Wsr)
        };
        let e = run_sweep(&s).unwrap_err();
        assert!(e.is_validation(), "{e}");
    }

    #[test]
    fn csv_leaves_missing_columns_empty() {
        let s = SweepSpec {
            policies: vec![Policy::MaxWsr],
            snr_db: vec![10.0],
            etas: vec![0.1],
            sizes: vec![(2, 2)],
            trials: 100,
            ..SweepSpec::new(SweepMetric::Wsr)
        };
        let rows = run_sweep(&s).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "metric,policy,link,n_a,n_b,snr_db,eta,w,x,trials,seed,mc_value,mc_stderr,\
             analytic_value,ceiling_or_floor,asymptote,comparisons"
        );
        let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(fields[0], "wsr");
        assert_eq!(fields[1], "max_wsr");
        assert_eq!(fields[2], "");
        assert_eq!(fields[13], "");
        assert_eq!(fields[16], "2");
    }
}
