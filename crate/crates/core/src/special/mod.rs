//! Special functions and exact combinatorics behind the closed forms.
//!
//! * [`e1`] / [`exp_e1_scaled`]: exponential integral, power series for
//!   `x <= 1` and a Lentz continued fraction above. The scaled form never
//!   multiplies by `e^x` on the continued-fraction branch, so it stays finite
//!   for arguments far beyond the `exp` overflow point.
//! * [`q_function`] and [`erfcx`] (upper-tail-scaled erfc), the latter also in
//!   double-double via [`erfcx_dd`].
//! * [`binom`] and [`BinomialTable`]: exact `u64` binomials up to `n = 64`.

pub mod dd;

use crate::error::{Error, Result};
use dd::Dd;

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const E1_EPS: f64 = 1e-17;
const E1_MAX_ITER: usize = 500;

fn check_positive(x: f64, what: &str) -> Result<()> {
    if x > 0.0 && !x.is_nan() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} requires x > 0, got {x}")))
    }
}

/// Power series of `E1` for `0 < x <= 1`.
fn e1_series(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= -x / kf;
        let contrib = term / kf;
        sum += contrib;
        if contrib.abs() < E1_EPS * sum.abs() {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

/// Continued fraction for `e^x E1(x)`, valid for `x > 1`.
fn scaled_e1_cf(x: f64) -> f64 {
    let tiny = f64::MIN_POSITIVE / f64::EPSILON;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=E1_MAX_ITER {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < E1_EPS {
            break;
        }
    }
    h
}

/// Exponential integral `E1(x) = int_x^inf e^-t / t dt`.
pub fn e1(x: f64) -> Result<f64> {
    check_positive(x, "e1")?;
    if x <= 1.0 {
        Ok(e1_series(x))
    } else {
        Ok((-x).exp() * scaled_e1_cf(x))
    }
}

/// `e^x E1(x)`, computed without forming `e^x` for `x > 1`.
pub fn exp_e1_scaled(x: f64) -> Result<f64> {
    check_positive(x, "exp_e1_scaled")?;
    if x <= 1.0 {
        Ok(x.exp() * e1_series(x))
    } else {
        Ok(scaled_e1_cf(x))
    }
}

/// Gaussian tail probability `Q(x) = P(Z > x)` for standard normal `Z`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x * std::f64::consts::FRAC_1_SQRT_2)
}

/// Scaled complementary error function `e^{x^2} erfc(x)`.
pub fn erfcx(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x >= 0.0 {
        erfcx_dd(Dd::new(x)).to_f64()
    } else {
        // erfc(-x) = 2 - erfc(x)
        2.0 * (x * x).exp() - erfcx_dd(Dd::new(-x)).to_f64()
    }
}

const ERFCX_SERIES_LIMIT: f64 = 3.0;

/// `e^{z^2} erfc(z)` in double-double for `z >= 0`.
///
/// Below [`ERFCX_SERIES_LIMIT`] the power series
/// `sum_n (-z)^n / Gamma(n/2 + 1)` is used (at most ~5 digits of cancellation);
/// above it, the Laplace continued fraction.
pub fn erfcx_dd(z: Dd) -> Dd {
    debug_assert!(z.hi >= 0.0);
    if z.hi <= ERFCX_SERIES_LIMIT {
        erfcx_series(z)
    } else {
        erfcx_cf(z)
    }
}

fn erfcx_series(z: Dd) -> Dd {
    let z2 = z * z;
    // even part: z^{2m} / m!
    let mut even_term = Dd::ONE;
    let mut even = Dd::ONE;
    // odd part: z^{2m+1} / Gamma(m + 3/2), Gamma(3/2) = sqrt(pi)/2
    let mut odd_term = z * Dd::FRAC_1_SQRT_PI * 2.0;
    let mut odd = odd_term;
    for m in 0..400 {
        let mf = m as f64;
        even_term = even_term * z2 / (mf + 1.0);
        odd_term = odd_term * z2 / (mf + 1.5);
        even = even + even_term;
        odd = odd + odd_term;
        if even_term.hi < 1e-34 * even.hi && odd_term.hi < 1e-34 * odd.hi.max(1e-300) {
            break;
        }
    }
    even - odd
}

fn erfcx_cf(z: Dd) -> Dd {
    // V = z + (1/2)/(z + 1/(z + (3/2)/(z + ...))), erfcx = 1 / (sqrt(pi) V)
    let tiny = Dd::new(1e-300);
    let mut f = z;
    let mut c = z;
    let mut d = Dd::ZERO;
    for n in 1..20_000 {
        let a = n as f64 * 0.5;
        d = z + d * a;
        if d.hi.abs() < 1e-300 {
            d = tiny;
        }
        d = d.recip();
        c = z + Dd::new(a) / c;
        if c.hi.abs() < 1e-300 {
            c = tiny;
        }
        let delta = c * d;
        f = f * delta;
        if (delta - 1.0).abs().hi < 1e-32 {
            break;
        }
    }
    Dd::FRAC_1_SQRT_PI / f
}

/// `Gamma(n + 1/2)` for small non-negative integers `n`.
pub fn gamma_half_integer(n: u32) -> f64 {
    let mut g = std::f64::consts::PI.sqrt();
    for j in 0..n {
        g *= j as f64 + 0.5;
    }
    g
}

/// Largest `n` covered by exact `u64` binomials.
pub const BINOM_MAX_N: usize = 64;

/// Exact binomial coefficient `C(n, k)` for `0 <= k <= n <= 64`.
pub fn binom(n: usize, k: usize) -> Result<u64> {
    if n > BINOM_MAX_N || k > n {
        return Err(Error::Domain(format!(
            "binom({n}, {k}) outside 0 <= k <= n <= {BINOM_MAX_N}"
        )));
    }
    let k = k.min(n - k);
    // Running product stays integral: c_i = C(n - k + i, i).
    let mut c: u128 = 1;
    for i in 1..=k {
        c = c * (n - k + i) as u128 / i as u128;
    }
    Ok(c as u64)
}

/// Pascal triangle of exact coefficients.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    n_max: usize,
    rows: Vec<Vec<u64>>,
}

impl BinomialTable {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max > BINOM_MAX_N {
            return Err(Error::Domain(format!(
                "binomial table limited to n <= {BINOM_MAX_N}, got {n_max}"
            )));
        }
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let mut row = vec![1u64; n + 1];
            for k in 1..n {
                row[k] = rows[n - 1][k - 1] + rows[n - 1][k];
            }
            rows.push(row);
        }
        Ok(BinomialTable { n_max, rows })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `C(n, k)`, zero when `k > n`.
    pub fn get(&self, n: usize, k: usize) -> u64 {
        if k > n {
            0
        } else {
            self.rows[n][k]
        }
    }
}
