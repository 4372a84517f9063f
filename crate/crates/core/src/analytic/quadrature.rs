//! Adaptive 21-point Gauss–Kronrod quadrature and the integral-form oracles.
//!
//! The oracles integrate the defining expressions of the average rate and
//! SER directly. The CDFs they use are built from positive terms only (an
//! order-statistic mixture averaged over the residual interference), so they
//! share no code path and no cancellation behaviour with the closed forms.

use std::cell::RefCell;

use crate::config::{ModulationParams, SystemConfig};
use crate::error::{Error, Result};
use crate::metrics::SelectedLink;

use super::expansion::OrderMixture;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], ...
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Default relative tolerance of the oracles.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            rel_tol: DEFAULT_TOLERANCE,
            abs_tol: 0.0,
            max_subdivisions: 2000,
        }
    }
}

impl QuadOptions {
    pub fn rel(rel_tol: f64) -> Self {
        QuadOptions {
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// One GK21 panel: (integral, error estimate), QUADPACK-style error scaling.
fn qk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_g = 0.0;
    let mut res_k = WGK[10] * fc;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

/// Globally adaptive integration of `f` over the finite interval `[a, b]`:
/// the panel with the largest error estimate is bisected until the total
/// error meets `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult> {
    let (v, e) = qk21(&f, a, b);
    let mut segs = vec![Segment {
        a,
        b,
        value: v,
        error: e,
    }];
    let mut subdivisions = 0;
    loop {
        let total: f64 = segs.iter().map(|s| s.value).sum();
        let err: f64 = segs.iter().map(|s| s.error).sum();
        if !total.is_finite() || !err.is_finite() {
            return Err(Error::Domain(format!(
                "non-finite integrand on [{a}, {b}]"
            )));
        }
        if err <= opts.abs_tol.max(opts.rel_tol * total.abs()) {
            return Ok(QuadResult {
                value: total,
                abs_error: err,
                subdivisions,
            });
        }
        if subdivisions >= opts.max_subdivisions {
            return Err(Error::ConvergenceFailure {
                tolerance: opts.rel_tol,
                subdivisions,
                estimate: err,
            });
        }
        let (idx, _) = segs
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, s)| {
                if s.error > acc.1 {
                    (i, s.error)
                } else {
                    acc
                }
            });
        let s = segs.swap_remove(idx);
        let mid = 0.5 * (s.a + s.b);
        let (v1, e1) = qk21(&f, s.a, mid);
        let (v2, e2) = qk21(&f, mid, s.b);
        segs.push(Segment {
            a: s.a,
            b: mid,
            value: v1,
            error: e1,
        });
        segs.push(Segment {
            a: mid,
            b: s.b,
            value: v2,
            error: e2,
        });
        subdivisions += 1;
    }
}

/// `int_0^inf f(x) dx` through the map `x = t / (1 - t)`.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, opts: QuadOptions) -> Result<QuadResult> {
    integrate(
        |t| {
            let one_minus = 1.0 - t;
            let x = t / one_minus;
            let v = f(x);
            if v == 0.0 {
                0.0
            } else {
                v / (one_minus * one_minus)
            }
        },
        0.0,
        1.0,
        opts,
    )
}

/// Average rate in bits, `(1/ln 2) int_0^inf (1 - F(x)) / (1 + x) dx`.
pub fn quadrature_avg_rate<F: Fn(f64) -> f64>(cdf: F, tolerance: f64) -> Result<f64> {
    let r = integrate_semi_infinite(|x| (1.0 - cdf(x)) / (1.0 + x), QuadOptions::rel(tolerance))?;
    Ok(r.value / std::f64::consts::LN_2)
}

/// Average SER `alpha sqrt(beta) / (2 sqrt(2 pi)) int_0^inf F(x) e^{-beta x/2} / sqrt(x) dx`,
/// integrated in `u = sqrt(x)` so the endpoint singularity disappears.
pub fn quadrature_avg_ser<F: Fn(f64) -> f64>(
    cdf: F,
    modulation: ModulationParams,
    tolerance: f64,
) -> Result<f64> {
    let beta = modulation.beta_mod;
    let r = integrate_semi_infinite(
        |u| {
            let x = u * u;
            let e = (-0.5 * beta * x).exp();
            if e == 0.0 {
                0.0
            } else {
                2.0 * cdf(x) * e
            }
        },
        QuadOptions::rel(tolerance),
    )?;
    let c = modulation.alpha_mod * beta.sqrt() / (2.0 * (2.0 * std::f64::consts::PI).sqrt());
    Ok(c * r.value)
}

/// CDF of a selected link's SINR as an average over the residual
/// interference: `F(x) = int_0^inf G(x (1 + lambda_i s)) e^{-s} ds`, where
/// `G` is the CDF of the selected link's SNR.
#[derive(Debug, Clone)]
pub struct IntegralCdf {
    lambda_s: f64,
    lambda_i: f64,
    snr: SnrCdf,
}

#[derive(Debug, Clone)]
enum SnrCdf {
    /// Maximum of `NN` exponentials.
    Max(i32),
    Second(OrderMixture),
}

impl IntegralCdf {
    pub fn new(cfg: &SystemConfig, link: SelectedLink) -> Result<Self> {
        let snr = match link {
            SelectedLink::GammaAb => SnrCdf::Max(cfg.link_count() as i32),
            SelectedLink::GammaBa => SnrCdf::Second(OrderMixture::new(cfg.n_a, cfg.n_b)?),
        };
        Ok(IntegralCdf {
            lambda_s: cfg.lambda_s,
            lambda_i: cfg.derived().lambda_i,
            snr,
        })
    }

    /// CDF of the selected link's SNR (before interference).
    pub fn snr_cdf(&self, y: f64) -> f64 {
        match &self.snr {
            SnrCdf::Max(nn) => (-(-y / self.lambda_s).exp_m1()).powi(*nn),
            SnrCdf::Second(m) => m.eval(y, self.lambda_s),
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::Domain(format!("cdf argument {x} < 0")));
        }
        if self.lambda_i == 0.0 || x == 0.0 {
            return Ok(self.snr_cdf(x));
        }
        let r = integrate_semi_infinite(
            |s| {
                let e = (-s).exp();
                if e == 0.0 {
                    0.0
                } else {
                    self.snr_cdf(x * (1.0 + self.lambda_i * s)) * e
                }
            },
            QuadOptions::rel(1e-13),
        )?;
        Ok(r.value.min(1.0))
    }
}

pub fn cdf_integral_form(cfg: &SystemConfig, link: SelectedLink, x: f64) -> Result<f64> {
    IntegralCdf::new(cfg, link)?.eval(x)
}

/// Quadrature value of the average rate of one selected link.
pub fn quadrature_rate_of_link(cfg: &SystemConfig, link: SelectedLink, tolerance: f64) -> Result<f64> {
    let cdf = IntegralCdf::new(cfg, link)?;
    let failure = RefCell::new(None);
    let v = quadrature_avg_rate(|x| guarded(&cdf, x, &failure), tolerance);
    finish(v, failure)
}

/// Quadrature value of the average SER of one selected link.
pub fn quadrature_ser_of_link(cfg: &SystemConfig, link: SelectedLink, tolerance: f64) -> Result<f64> {
    let cdf = IntegralCdf::new(cfg, link)?;
    let failure = RefCell::new(None);
    let v = quadrature_avg_ser(|x| guarded(&cdf, x, &failure), cfg.modulation, tolerance);
    finish(v, failure)
}

/// Evaluates the integral-form CDF, parking the first inner failure so the
/// outer integral can report it instead of a generic non-finite error.
fn guarded(cdf: &IntegralCdf, x: f64, failure: &RefCell<Option<Error>>) -> f64 {
    match cdf.eval(x) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    }
}

fn finish(v: Result<f64>, inner: RefCell<Option<Error>>) -> Result<f64> {
    match inner.into_inner() {
        Some(e) => Err(e),
        None => v,
    }
}
