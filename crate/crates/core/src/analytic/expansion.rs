//! Exponential-sum expansions of the selected-link CDFs.
//!
//! Both selected-link SINR CDFs have the form
//! `F(x) = sum_c A_c e^{-c x / lambda_s} / (c eta x + 1)`, `c = 0..=NN`.
//! For the first pick `A_c = (-1)^c C(NN, c)`. For the second pick the triple
//! sum over `(k, l, m)` collapses onto `c = NN - l + m`; we accumulate the
//! numerators exactly over the common denominator `C(NN-1, n_a+n_b-2)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::SelectedLink;
use crate::special::dd::Dd;
use crate::special::{binom, BinomialTable};

/// Largest `n_a * n_b` handled by the closed forms.
pub const MAX_CLOSED_FORM_LINKS: usize = 36;

/// Probabilities `p_k`, `k = 1..=n_a+n_b-1`, that the second Serial-Max pick
/// is the `(k+1)`-th largest entry of the matrix. `p[0]` holds `p_1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixtureWeights {
    pub p: Vec<f64>,
}

impl MixtureWeights {
    /// `p_k`; zero outside `1..=n_a+n_b-1`.
    pub fn get(&self, k: usize) -> f64 {
        k.checked_sub(1)
            .and_then(|i| self.p.get(i))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn sum(&self) -> f64 {
        self.p.iter().sum()
    }
}

/// One term weight of the second-pick triple sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MuCoefficient {
    pub k: usize,
    pub l: usize,
    pub m: usize,
    pub value: f64,
}

/// `A_c = num[c] / den` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub link_count: usize,
    pub num: Vec<i128>,
    pub den: i128,
}

impl Expansion {
    pub fn coeff(&self, c: usize) -> f64 {
        self.coeff_dd(c).to_f64()
    }

    pub fn coeff_dd(&self, c: usize) -> Dd {
        Dd::from_i128(self.num[c]) / Dd::from_i128(self.den)
    }

    /// Indices with a nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.num
            .iter()
            .enumerate()
            .filter(|(_, &n)| n != 0)
            .map(|(c, _)| c)
    }
}

fn check_sizes(n_a: usize, n_b: usize) -> Result<()> {
    if n_a < 2 {
        return Err(Error::InvalidAntennaCount {
            which: "n_a",
            value: n_a,
        });
    }
    if n_b < 2 {
        return Err(Error::InvalidAntennaCount {
            which: "n_b",
            value: n_b,
        });
    }
    Ok(())
}

fn check_closed_form_size(n_a: usize, n_b: usize) -> Result<()> {
    check_sizes(n_a, n_b)?;
    let nn = n_a * n_b;
    if nn > MAX_CLOSED_FORM_LINKS {
        return Err(Error::DegenerateSize {
            product: nn,
            reason: "closed forms support n_a*n_b <= 36; use simulation",
        });
    }
    Ok(())
}

fn overflow() -> Error {
    Error::Domain("coefficient overflow in exact expansion".into())
}

/// Numerator of `p_k` over `C(NN-1, n_a+n_b-2)`.
fn mixture_numerator(t: &BinomialTable, n_a: usize, n_b: usize, k: usize) -> u64 {
    let nn = n_a * n_b;
    t.get(nn - k - 1, n_a + n_b - k - 1)
}

pub fn mixture_weights(n_a: usize, n_b: usize) -> Result<MixtureWeights> {
    check_sizes(n_a, n_b)?;
    let nn = n_a * n_b;
    if nn > crate::special::BINOM_MAX_N {
        return Err(Error::DegenerateSize {
            product: nn,
            reason: "exact binomials limited to n_a*n_b <= 64",
        });
    }
    let t = BinomialTable::new(nn)?;
    let den = t.get(nn - 1, n_a + n_b - 2) as f64;
    let p = (1..n_a + n_b)
        .map(|k| mixture_numerator(&t, n_a, n_b, k) as f64 / den)
        .collect();
    Ok(MixtureWeights { p })
}

/// `mu_{k,l,m} = C(NN-k-1, n_a+n_b-k-1) C(NN,l) C(l,m) / C(NN-1, n_a+n_b-2)`.
pub fn mu_coefficient(n_a: usize, n_b: usize, k: usize, l: usize, m: usize) -> Result<MuCoefficient> {
    check_sizes(n_a, n_b)?;
    let nn = n_a * n_b;
    if !(1..n_a + n_b).contains(&k) || l + k < nn || l > nn || m > l {
        return Err(Error::Domain(format!(
            "mu index (k={k}, l={l}, m={m}) out of range"
        )));
    }
    let num = binom(nn - k - 1, n_a + n_b - k - 1)? as f64
        * binom(nn, l)? as f64
        * binom(l, m)? as f64;
    let den = binom(nn - 1, n_a + n_b - 2)? as f64;
    Ok(MuCoefficient {
        k,
        l,
        m,
        value: num / den,
    })
}

/// Coefficients `A_c` of the selected link's CDF.
pub fn expansion(n_a: usize, n_b: usize, link: SelectedLink) -> Result<Expansion> {
    check_closed_form_size(n_a, n_b)?;
    let nn = n_a * n_b;
    let t = BinomialTable::new(nn)?;
    let sign = |m: usize| if m.is_multiple_of(2) { 1i128 } else { -1i128 };
    match link {
        SelectedLink::GammaAb => Ok(Expansion {
            link_count: nn,
            num: (0..=nn).map(|c| sign(c) * t.get(nn, c) as i128).collect(),
            den: 1,
        }),
        SelectedLink::GammaBa => {
            let mut num = vec![0i128; nn + 1];
            for k in 1..n_a + n_b {
                let pk = mixture_numerator(&t, n_a, n_b, k) as i128;
                for l in (nn - k)..=nn {
                    let outer = pk.checked_mul(t.get(nn, l) as i128).ok_or_else(overflow)?;
                    for m in 0..=l {
                        let term = outer
                            .checked_mul(t.get(l, m) as i128)
                            .ok_or_else(overflow)?;
                        let c = nn - l + m;
                        num[c] = num[c].checked_add(sign(m) * term).ok_or_else(overflow)?;
                    }
                }
            }
            Ok(Expansion {
                link_count: nn,
                num,
                den: t.get(nn - 1, n_a + n_b - 2) as i128,
            })
        }
    }
}

/// CDF of the `r`-th smallest of `n` i.i.d. exponentials with mean `lambda`
/// (`r = n` is the maximum): `sum_{i=r}^n C(n,i) F^i (1-F)^{n-i}`.
pub fn order_statistic_cdf(r: usize, n: usize, x: f64, lambda: f64) -> Result<f64> {
    if r < 1 || r > n || n > crate::special::BINOM_MAX_N {
        return Err(Error::Domain(format!(
            "order statistic index r={r}, n={n} out of range"
        )));
    }
    if !(x >= 0.0) || !(lambda > 0.0) {
        return Err(Error::Domain(format!(
            "order statistic needs x >= 0 and lambda > 0 (x={x}, lambda={lambda})"
        )));
    }
    let f = -(-x / lambda).exp_m1();
    let s = (-x / lambda).exp();
    let mut total = 0.0;
    for i in r..=n {
        total += binom(n, i)? as f64 * f.powi(i as i32) * s.powi((n - i) as i32);
    }
    Ok(total.min(1.0))
}

/// CDF of the second Serial-Max pick's SNR, `sum_k p_k F^{(NN-k)}(y)`,
/// regrouped by the number `i` of entries below `y` so every term is
/// positive. Weights are precomputed for repeated evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderMixture {
    link_count: usize,
    first: usize,
    /// `C(NN, i) * sum_{k >= NN - i} p_k` for `i = first..=NN`.
    weights: Vec<f64>,
}

impl OrderMixture {
    pub fn new(n_a: usize, n_b: usize) -> Result<Self> {
        let p = mixture_weights(n_a, n_b)?;
        let nn = n_a * n_b;
        let k_max = n_a + n_b - 1;
        let first = nn - k_max;
        let mut cum = 0.0;
        let weights = (first..=nn)
            .map(|i| {
                let k = nn - i;
                if (1..=k_max).contains(&k) {
                    cum += p.get(k);
                }
                Ok(cum * binom(nn, i)? as f64)
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(OrderMixture {
            link_count: nn,
            first,
            weights,
        })
    }

    pub fn eval(&self, y: f64, lambda: f64) -> f64 {
        let f = -(-y / lambda).exp_m1();
        let s = (-y / lambda).exp();
        let nn = self.link_count;
        let total: f64 = self
            .weights
            .iter()
            .enumerate()
            .map(|(j, w)| {
                let i = self.first + j;
                w * f.powi(i as i32) * s.powi((nn - i) as i32)
            })
            .sum();
        total.min(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_two_by_two() {
        let w = mixture_weights(2, 2).unwrap();
        assert_eq!(w.p, vec![1.0 / 3.0; 3]);
    }

    #[test]
    fn weights_sum_to_one() {
        for na in 2..=18 {
            for nb in 2..=18 {
                if na * nb > 36 {
                    continue;
                }
                let w = mixture_weights(na, nb).unwrap();
                assert_eq!(w.p.len(), na + nb - 1);
                assert!((w.sum() - 1.0).abs() < 1e-12, "{na}x{nb}");
                assert!(w.p.iter().all(|&p| (0.0..=1.0).contains(&p)));
            }
        }
    }

    #[test]
    fn second_pick_coefficients_three_by_three() {
        let e = expansion(3, 3, SelectedLink::GammaBa).unwrap();
        let expect = [1.0, 0.0, -18.0, 60.0, -99.0, 100.8, -67.2, 28.8, -7.2, 0.8];
        for (c, want) in expect.iter().enumerate() {
            assert!((e.coeff(c) - want).abs() < 1e-12, "c={c}: {}", e.coeff(c));
        }
        // F(0) = sum A_c = 0 exactly
        assert_eq!(e.num.iter().sum::<i128>(), 0);
    }

    #[test]
    fn first_pick_coefficients() {
        let e = expansion(2, 3, SelectedLink::GammaAb).unwrap();
        assert_eq!(e.num, vec![1, -6, 15, -20, 15, -6, 1]);
        assert_eq!(e.den, 1);
    }

    #[test]
    fn expansion_matches_mu_sum() {
        let (na, nb) = (2, 3);
        let nn = na * nb;
        let e = expansion(na, nb, SelectedLink::GammaBa).unwrap();
        let mut acc = vec![0.0; nn + 1];
        for k in 1..na + nb {
            for l in (nn - k)..=nn {
                for m in 0..=l {
                    let mu = mu_coefficient(na, nb, k, l, m).unwrap();
                    let s = if m % 2 == 0 { 1.0 } else { -1.0 };
                    acc[nn - l + m] += s * mu.value;
                }
            }
        }
        for c in 0..=nn {
            assert!((acc[c] - e.coeff(c)).abs() < 1e-9, "c={c}");
        }
        assert!(mu_coefficient(na, nb, 0, 6, 0).is_err());
    }

    #[test]
    fn largest_size_fits() {
        for (na, nb) in [(6, 6), (2, 18), (3, 12), (4, 9)] {
            let e = expansion(na, nb, SelectedLink::GammaBa).unwrap();
            assert_eq!(e.num.iter().sum::<i128>(), 0);
            assert_eq!(e.num[0], e.den);
        }
        assert!(matches!(
            expansion(7, 6, SelectedLink::GammaAb),
            Err(Error::DegenerateSize { product: 42, .. })
        ));
    }

    #[test]
    fn order_statistic_special_cases() {
        let lam = 2.0;
        for x in [0.0, 0.3, 1.0, 5.0] {
            let f = 1.0 - (-x / lam as f64).exp();
            assert!((order_statistic_cdf(1, 1, x, lam).unwrap() - f).abs() < 1e-15);
            assert!((order_statistic_cdf(4, 4, x, lam).unwrap() - f.powi(4)).abs() < 1e-15);
        }
        assert!(order_statistic_cdf(0, 3, 1.0, 1.0).is_err());
        assert!(order_statistic_cdf(4, 3, 1.0, 1.0).is_err());
    }

    #[test]
    fn mixture_matches_explicit_sum() {
        let (na, nb) = (3, 4);
        let nn = na * nb;
        let p = mixture_weights(na, nb).unwrap();
        for y in [0.0, 0.1, 1.0, 3.0, 20.0] {
            let direct: f64 = (1..na + nb)
                .map(|k| p.get(k) * order_statistic_cdf(nn - k, nn, y, 1.5).unwrap())
                .sum();
            let mixed = OrderMixture::new(na, nb).unwrap().eval(y, 1.5);
            assert!((direct - mixed).abs() < 1e-14, "{y}");
        }
    }
}
