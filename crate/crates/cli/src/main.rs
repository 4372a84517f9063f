use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::Parser;

use fdlink::channel::dump_draws_csv;
use fdlink::config::linear_to_db;
use fdlink::selection::Policy;
use fdlink::sweep::{
    db_range, preset, run_sweep, sidecar_path, write_outputs, write_rows, OutputFormat,
    SweepMetric, SweepSpec, PRESETS,
};
use fdlink::{Error, Result, SystemConfig};

const AFTER_HELP: &str = "\
Presets (flags given alongside a preset override its values):
  fig2    rate vs SNR, N=3, eta 0.02,0.05,0.1, max_wsr and serial_max
  fig3    rate vs SNR, eta=0.02, N=3,4,5
  fig4    SER vs SNR, N=3, eta 0,0.05,0.1,0.5, serial_max (asymptote column at eta=0)
  fig5    SER vs SNR, N=3,4,5, min_wser and serial_max. eta defaults to 0.05;
          pass --eta 0.1 for the alternative setting
  fig6    SER vs N=2..8 at 10 and 15 dB, eta 0.1,0.2, min_wser and serial_max
  table1  comparison counts for all 2 <= n_a, n_b <= 8
  pnot    frequency of Serial-Max missing the optimum, N=2..5

Exit status: 0 success, 2 invalid input, 3 numerical failure, 1 I/O error.";

#[derive(Debug, Parser)]
#[command(name = "fdlink", version, about = "Full-duplex bidirectional link selection experiments", after_help = AFTER_HELP)]
struct Args {
    /// Named experiment to start from.
    #[arg(long)]
    preset: Option<String>,

    /// wsr, wser, p_not, cdf or complexity.
    #[arg(long)]
    metric: Option<String>,

    /// Comma-separated policies: max_wsr, min_wser, serial_max.
    #[arg(long)]
    policy: Option<String>,

    /// SNR grid in dB, either `lo:hi:step` or a comma-separated list.
    #[arg(long = "snr-db", allow_hyphen_values = true)]
    snr_db: Option<String>,

    /// Comma-separated cancellation coefficients.
    #[arg(long)]
    eta: Option<String>,

    /// Square sizes, comma-separated (sets n_a = n_b).
    #[arg(long, conflicts_with_all = ["na", "nb"])]
    n: Option<String>,

    /// Antennas at A, comma-separated; crossed with --nb.
    #[arg(long)]
    na: Option<String>,

    /// Antennas at B, comma-separated; crossed with --na.
    #[arg(long)]
    nb: Option<String>,

    /// Weight of the A->B direction.
    #[arg(long)]
    w: Option<f64>,

    /// Monte Carlo trials per grid point (0 = analytic columns only).
    #[arg(long)]
    trials: Option<u64>,

    #[arg(long)]
    seed: Option<u64>,

    /// Linear SINR points for --metric cdf, comma-separated or `lo:hi:step`.
    #[arg(long = "x-grid")]
    x_grid: Option<String>,

    /// Key-value file with n_a, n_b, lambda_s or snr_db, eta, w and
    /// optionally alpha_mod, beta_mod. Sets a single grid point.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output file; stdout when absent. CSV files get a `.meta.json` sidecar.
    #[arg(long)]
    out: Option<PathBuf>,

    /// csv or json.
    #[arg(long)]
    format: Option<String>,

    /// Write this many raw channel draws for the first grid point as CSV
    /// instead of running the sweep.
    #[arg(long = "dump-draws")]
    dump_draws: Option<u64>,
}

fn parse_list<T: FromStr>(what: &str, s: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<T>()
                .map_err(|e| Error::InvalidSweep(format!("{what} '{t}': {e}")))
        })
        .collect()
}

/// `lo:hi:step` or a list.
fn parse_grid(what: &str, s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [lo, hi, step] => {
            let num = |t: &str| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::InvalidSweep(format!("{what} '{t}': {e}")))
            };
            db_range(num(lo)?, num(hi)?, num(step)?)
        }
        [_] => parse_list(what, s),
        _ => Err(Error::InvalidSweep(format!(
            "{what} '{s}': expected lo:hi:step or a comma-separated list"
        ))),
    }
}

fn build_spec(args: &Args) -> Result<SweepSpec> {
    let mut spec = match (&args.preset, &args.metric) {
        (Some(name), _) => preset(name)?,
        (None, Some(m)) => {
            let metric = SweepMetric::from_str(m)?;
            SweepSpec {
                policies: vec![Policy::SerialMax],
                snr_db: db_range(0.0, 40.0, 2.0)?,
                etas: vec![0.05],
                sizes: vec![(3, 3)],
                ..SweepSpec::new(metric)
            }
        }
        (None, None) => {
            return Err(Error::InvalidSweep(format!(
                "give --preset ({}) or --metric",
                PRESETS.join(", ")
            )))
        }
    };
    if let (Some(_), Some(m)) = (&args.preset, &args.metric) {
        spec.metric = SweepMetric::from_str(m)?;
    }
    if let Some(path) = &args.config {
        let cfg = SystemConfig::from_kv_str(&fs::read_to_string(path)?)?;
        spec.sizes = vec![(cfg.n_a, cfg.n_b)];
        spec.snr_db = vec![linear_to_db(cfg.lambda_s)];
        spec.etas = vec![cfg.eta];
        spec.w = cfg.w;
        spec.modulation = cfg.modulation;
    }
    if let Some(p) = &args.policy {
        spec.policies = parse_list("policy", p)?;
    }
    if let Some(s) = &args.snr_db {
        spec.snr_db = parse_grid("snr-db", s)?;
    }
    if let Some(e) = &args.eta {
        spec.etas = parse_list("eta", e)?;
    }
    if let Some(n) = &args.n {
        spec.sizes = parse_list::<usize>("n", n)?.into_iter().map(|n| (n, n)).collect();
    }
    if args.na.is_some() || args.nb.is_some() {
        let current_a: Vec<usize> = spec.sizes.iter().map(|s| s.0).collect();
        let current_b: Vec<usize> = spec.sizes.iter().map(|s| s.1).collect();
        let na = match &args.na {
            Some(s) => parse_list("na", s)?,
            None => dedup(current_a),
        };
        let nb = match &args.nb {
            Some(s) => parse_list("nb", s)?,
            None => dedup(current_b),
        };
        spec.sizes = na
            .iter()
            .flat_map(|&a| nb.iter().map(move |&b| (a, b)))
            .collect();
    }
    if let Some(w) = args.w {
        spec.w = w;
    }
    if let Some(t) = args.trials {
        spec.trials = t;
    }
    if let Some(s) = args.seed {
        spec.seed = s;
    }
    if let Some(x) = &args.x_grid {
        spec.x_grid = parse_grid("x-grid", x)?;
    }
    if let Some(f) = &args.format {
        spec.format = OutputFormat::from_str(f)?;
    }
    spec.out = args.out.clone();
    spec.validate()?;
    Ok(spec)
}

fn dedup(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

fn dump(spec: &SweepSpec, trials: u64) -> Result<()> {
    let (na, nb) = spec.sizes[0];
    let cfg = SystemConfig::new(
        na,
        nb,
        fdlink::config::db_to_linear(spec.snr_db[0]),
        spec.etas[0],
        spec.w,
        spec.modulation,
    )?;
    match &spec.out {
        Some(p) => dump_draws_csv(BufWriter::new(fs::File::create(p)?), &cfg, spec.seed, trials),
        None => dump_draws_csv(io::stdout().lock(), &cfg, spec.seed, trials),
    }
}

fn run(args: &Args) -> Result<()> {
    let spec = build_spec(args)?;
    if let Some(n) = args.dump_draws {
        return dump(&spec, n);
    }
    let rows = run_sweep(&spec)?;
    match &spec.out {
        Some(path) => {
            write_outputs(path, &spec, &rows)?;
            eprintln!("wrote {} rows to {}", rows.len(), path.display());
            if spec.format == OutputFormat::Csv {
                eprintln!("spec in {}", sidecar_path(path).display());
            }
        }
        None => {
            let mut out = io::stdout().lock();
            write_rows(&mut out, spec.format, &spec, &rows)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                ExitCode::from(2)
            } else if e.is_numerical() {
                ExitCode::from(3)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
