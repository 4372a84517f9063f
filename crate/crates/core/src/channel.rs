//! Random per-slot channel draws.
//!
//! Every trial owns a ChaCha8 substream keyed by `(master_seed, trial_index)`,
//! so trials can be generated in any order (or concurrently) and still
//! reproduce bit for bit. Within a trial the draw order is fixed: the
//! `n_a x n_b` SNR entries row-major, then the residual INR at A, then at B.

use std::io::Write;
use std::ops::Deref;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{DerivedParams, SystemConfig};
use crate::error::{Error, Result};

/// Dense `n_a x n_b` matrix indexed `[antenna at A][antenna at B]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkMatrix {
    n_a: usize,
    n_b: usize,
    data: Vec<f64>,
}

impl LinkMatrix {
    pub fn new(n_a: usize, n_b: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n_a * n_b {
            return Err(Error::Domain(format!(
                "matrix data has {} entries, expected {n_a}x{n_b}",
                data.len()
            )));
        }
        if data.iter().any(|v| !(*v >= 0.0)) {
            return Err(Error::Domain("link matrix entries must be >= 0".into()));
        }
        Ok(LinkMatrix { n_a, n_b, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n_a = rows.len();
        let n_b = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != n_b) {
            return Err(Error::Domain("ragged rows".into()));
        }
        let data = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        Self::new(n_a, n_b, data)
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n_b + j]
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    fn scaled_by(&self, c: f64) -> LinkMatrix {
        LinkMatrix {
            n_a: self.n_a,
            n_b: self.n_b,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }
}

/// Instantaneous per-link SNR matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrMatrix(LinkMatrix);

/// Obtainable-SINR matrix: the SNR matrix scaled by `1 / (lambda_i + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SinrMatrix(LinkMatrix);

impl SnrMatrix {
    pub fn new(m: LinkMatrix) -> Self {
        SnrMatrix(m)
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        LinkMatrix::from_rows(rows).map(SnrMatrix)
    }
}

impl SinrMatrix {
    pub fn new(m: LinkMatrix) -> Self {
        SinrMatrix(m)
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        LinkMatrix::from_rows(rows).map(SinrMatrix)
    }

    /// Entrywise `c * Gamma`.
    pub fn scaled(&self, c: f64) -> SinrMatrix {
        SinrMatrix(self.0.scaled_by(c))
    }
}

impl Deref for SnrMatrix {
    type Target = LinkMatrix;
    fn deref(&self) -> &LinkMatrix {
        &self.0
    }
}

impl Deref for SinrMatrix {
    type Target = LinkMatrix;
    fn deref(&self) -> &LinkMatrix {
        &self.0
    }
}

/// Identifies the random substream of one Monte Carlo trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub master_seed: u64,
    pub trial_index: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, trial_index: u64) -> Self {
        RngStream {
            master_seed,
            trial_index,
        }
    }

    /// Fresh generator positioned at the start of this trial's substream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.trial_index);
        rng
    }
}

/// One slot's worth of randomness.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialDraw {
    pub snr: SnrMatrix,
    /// Residual INR at node A (hurts the B->A link).
    pub inr_a: f64,
    /// Residual INR at node B (hurts the A->B link).
    pub inr_b: f64,
}

/// Exponential sample with the given mean by inversion, `U` in `(0, 1]`.
#[inline]
pub fn sample_exponential<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> f64 {
    let u = 1.0 - rng.gen::<f64>();
    -mean * u.ln()
}

pub fn draw_snr_matrix_with<R: Rng + ?Sized>(rng: &mut R, cfg: &SystemConfig) -> SnrMatrix {
    let data = (0..cfg.n_a * cfg.n_b)
        .map(|_| sample_exponential(rng, cfg.lambda_s))
        .collect();
    SnrMatrix(LinkMatrix {
        n_a: cfg.n_a,
        n_b: cfg.n_b,
        data,
    })
}

/// i.i.d. exponential(mean `lambda_s`) SNR matrix for the given trial.
pub fn draw_snr_matrix(stream: RngStream, cfg: &SystemConfig) -> SnrMatrix {
    draw_snr_matrix_with(&mut stream.rng(), cfg)
}

/// Residual INR draw. Always consumes one uniform so the stream layout does
/// not depend on `lambda_i`; returns exactly 0 when `lambda_i == 0`.
pub fn draw_residual_inr<R: Rng + ?Sized>(rng: &mut R, lambda_i: f64) -> f64 {
    let v = sample_exponential(rng, lambda_i);
    if lambda_i == 0.0 {
        0.0
    } else {
        v
    }
}

pub fn draw_trial(stream: RngStream, cfg: &SystemConfig) -> TrialDraw {
    let mut rng = stream.rng();
    let lambda_i = cfg.derived().lambda_i;
    let snr = draw_snr_matrix_with(&mut rng, cfg);
    let inr_a = draw_residual_inr(&mut rng, lambda_i);
    let inr_b = draw_residual_inr(&mut rng, lambda_i);
    TrialDraw { snr, inr_a, inr_b }
}

pub fn to_obtainable_sinr(snr: &SnrMatrix, derived: &DerivedParams) -> SinrMatrix {
    SinrMatrix(snr.0.scaled_by(derived.scale))
}

/// `gamma_s / (gamma_ri + 1)`.
#[inline]
pub fn instantaneous_sinr(gamma_s: f64, gamma_ri: f64) -> f64 {
    gamma_s / (gamma_ri + 1.0)
}

/// Writes `trials` raw draws as CSV: `trial_index, g_0_0 .. g_{na-1}_{nb-1}, inr_a, inr_b`.
pub fn dump_draws_csv<W: Write>(
    out: W,
    cfg: &SystemConfig,
    master_seed: u64,
    trials: u64,
) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    let mut header = vec!["trial_index".to_string()];
    for i in 0..cfg.n_a {
        for j in 0..cfg.n_b {
            header.push(format!("g_{i}_{j}"));
        }
    }
    header.push("inr_a".into());
    header.push("inr_b".into());
    wtr.write_record(&header)?;
    for t in 0..trials {
        let d = draw_trial(RngStream::new(master_seed, t), cfg);
        let mut rec = Vec::with_capacity(header.len());
        rec.push(t.to_string());
        rec.extend(d.snr.as_slice().iter().map(|v| format!("{v:e}")));
        rec.push(format!("{:e}", d.inr_a));
        rec.push(format!("{:e}", d.inr_b));
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}
