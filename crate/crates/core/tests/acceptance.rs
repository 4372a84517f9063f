//! Acceptance suite. Runs every criterion at full size, prints one line per
//! criterion and exits nonzero if any of them fails.

use std::fs;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fdlink::analytic::{
    asymptotic_ser_perfect_cancellation, avg_rate_ab, avg_rate_ba, avg_ser_ab, avg_ser_ba,
    avg_weighted_sum_rate, avg_weighted_sum_ser, cdf_gamma_ab, cdf_gamma_ba, mixture_weights,
    quadrature_rate_of_link, quadrature_ser_of_link, rate_ceiling, ser_floor, DEFAULT_TOLERANCE,
    MAX_CLOSED_FORM_LINKS,
};
use fdlink::channel::{draw_snr_matrix, to_obtainable_sinr, RngStream};
use fdlink::metrics::{
    ks_distance, mc_p_not, mc_p_not_with, mc_sinr_samples, mc_weighted_sum_rate,
    mc_weighted_sum_rate_with, mc_weighted_sum_ser, mc_weighted_sum_ser_with,
    second_rank_census, Execution, SelectedLink,
};
use fdlink::selection::{
    comparison_count, exhaustive_max_wsr, exhaustive_min_wser, p_not_upper_bound,
    second_link_rank, selection_rate, selection_ser, serial_max, ComparisonMethod, Policy,
};
use fdlink::special::{e1, exp_e1_scaled, q_function};
use fdlink::sweep::{preset, run_sweep, sidecar_path, write_outputs, PRESETS};
use fdlink::{ModulationParams, Result, SystemConfig};

use SelectedLink::{GammaAb, GammaBa};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn cfg(n: usize, lambda_s: f64, eta: f64) -> SystemConfig {
    SystemConfig::square(n, lambda_s, eta, 0.7).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn criterion_01() -> Result<Outcome> {
    let start = Instant::now();
    let c = cfg(3, 10.0, 0.1);
    let bpsk = ModulationParams::BPSK;
    let (mut checked, mut worst) = (0u64, 0.0f64);
    let mut failures = 0u64;
    for t in 0..100_000u64 {
        let sinr = to_obtainable_sinr(&draw_snr_matrix(RngStream::new(11, t), &c), &c.derived());
        let sm = serial_max(&sinr, c.w)?;
        if !matches!(second_link_rank(&sinr, &sm), 2 | 3) {
            continue;
        }
        checked += 1;
        let ex_r = exhaustive_max_wsr(&sinr, c.w)?;
        let ex_s = exhaustive_min_wser(&sinr, c.w, bpsk)?;
        let dr = rel(
            selection_rate(&sinr, &sm.selection, c.w),
            selection_rate(&sinr, &ex_r.selection, c.w),
        );
        let ds = rel(
            selection_ser(&sinr, &sm.selection, c.w, bpsk),
            selection_ser(&sinr, &ex_s.selection, c.w, bpsk),
        );
        worst = worst.max(dr).max(ds);
        if dr > 1e-12 || ds > 1e-12 {
            failures += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures == 0 && checked > 0 && elapsed < Duration::from_secs(30),
        format!(
            "{checked} rank-2/3 trials, {failures} mismatches, worst rel {worst:.1e}, {:.1}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_02() -> Result<Outcome> {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    let mut prev = f64::INFINITY;
    for n in 2..=5 {
        let c = cfg(n, 10.0, 0.1);
        let est = mc_p_not(&c, 100_000, 2)?;
        let bound = p_not_upper_bound(n, n)?;
        pass &= est.value <= bound + 3.0 * est.std_error;
        pass &= est.value < prev;
        prev = est.value;
        parts.push(format!("N={n}: {:.4} <= {:.4}", est.value, bound));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(120);
    outcome(pass, format!("{}, {:.1}s", parts.join("; "), elapsed.as_secs_f64()))
}

fn criterion_03() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for (n, lam, eta) in [(3, 10.0, 0.1), (2, 100.0, 0.02)] {
        let c = cfg(n, lam, eta);
        for link in [GammaAb, GammaBa] {
            let xs = mc_sinr_samples(&c, link, 100_000, 3);
            let d = match link {
                GammaAb => ks_distance(&xs, |x| cdf_gamma_ab(x, &c).unwrap()),
                GammaBa => ks_distance(&xs, |x| cdf_gamma_ba(x, &c).unwrap()),
            };
            pass &= d <= 0.006;
            parts.push(format!("N={n} {}: {d:.4}", link.as_str()));
        }
    }
    outcome(pass, parts.join("; "))
}

fn criterion_04() -> Result<Outcome> {
    let p22 = mixture_weights(2, 2)?;
    let exact = (1..=3).all(|k| p22.get(k) == 1.0 / 3.0);

    let trials = 1_000_000u64;
    let census = second_rank_census(&cfg(3, 10.0, 0.1), trials, 4);
    let p33 = mixture_weights(3, 3)?;
    let n = trials as f64;
    let mut worst_z = 0.0f64;
    let mut freq_ok = census[0] == 0;
    for (idx, &count) in census.iter().enumerate().skip(1) {
        let k = idx; // rank k + 1
        let p = p33.get(k);
        let f = count as f64 / n;
        let sigma = (p * (1.0 - p) / n).sqrt();
        let z = if sigma > 0.0 { (f - p).abs() / sigma } else if f == 0.0 { 0.0 } else { f64::INFINITY };
        worst_z = worst_z.max(z);
        freq_ok &= z <= 3.0;
    }

    let mut worst_sum = 0.0f64;
    for na in 2..=18 {
        for nb in 2..=18 {
            if na * nb <= MAX_CLOSED_FORM_LINKS {
                worst_sum = worst_sum.max((mixture_weights(na, nb)?.sum() - 1.0).abs());
            }
        }
    }
    outcome(
        exact && freq_ok && worst_sum <= 1e-12,
        format!(
            "(2,2) exact: {exact}; (3,3) worst z {worst_z:.2}; max |sum p - 1| {worst_sum:.1e}"
        ),
    )
}

fn oracle_grid() -> Vec<SystemConfig> {
    let mut v = Vec::new();
    for n in [2, 3] {
        for eta in [0.02, 0.05, 0.1] {
            for lam in [1.0, 10.0, 100.0, 1000.0] {
                v.push(cfg(n, lam, eta));
            }
        }
    }
    v
}

fn criterion_05() -> Result<Outcome> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for c in oracle_grid() {
        for (link, closed) in [(GammaAb, avg_rate_ab(&c)?), (GammaBa, avg_rate_ba(&c)?)] {
            let q = quadrature_rate_of_link(&c, link, DEFAULT_TOLERANCE)?;
            worst = worst.max(rel(closed.value, q));
        }
    }
    let c = SystemConfig::square(3, 100.0, 0.05, 0.7)?;
    let analytic = avg_weighted_sum_rate(&c)?.value;
    let est = mc_weighted_sum_rate(&c, Policy::SerialMax, 1_000_000, 5)?;
    let z = (est.value - analytic).abs() / est.std_error;
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-8 && z <= 3.0 && elapsed < Duration::from_secs(180),
        format!(
            "worst rel vs quadrature {worst:.1e}; MC {:.5} vs {analytic:.5} ({z:.2} sigma), {:.1}s",
            est.value,
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_06() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    let mut ceilings = Vec::new();
    for eta in [0.02, 0.05, 0.1] {
        let ceil = rate_ceiling(&cfg(3, 10.0, eta))?;
        let at_1e8 = avg_weighted_sum_rate(&cfg(3, 1e8, eta))?.value;
        let r = rel(at_1e8, ceil);
        pass &= r <= 0.005;
        ceilings.push(ceil);
        parts.push(format!("eta={eta}: {r:.1e}"));
    }
    let dec_eta = ceilings.windows(2).all(|p| p[0] > p[1]);
    let by_n: Vec<f64> = [3, 4, 5]
        .iter()
        .map(|&n| rate_ceiling(&cfg(n, 10.0, 0.02)))
        .collect::<Result<_>>()?;
    let inc_n = by_n.windows(2).all(|p| p[0] < p[1]);
    outcome(
        pass && dec_eta && inc_n,
        format!(
            "gap to ceiling {}; decreasing in eta: {dec_eta}; increasing in N: {inc_n}",
            parts.join(", ")
        ),
    )
}

fn criterion_07() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for c in oracle_grid() {
        for (link, closed) in [(GammaAb, avg_ser_ab(&c)?), (GammaBa, avg_ser_ba(&c)?)] {
            let q = quadrature_ser_of_link(&c, link, DEFAULT_TOLERANCE)?;
            worst = worst.max(rel(closed.value, q));
        }
    }
    let c = SystemConfig::square(3, 10.0, 0.1, 0.7)?;
    let analytic = avg_weighted_sum_ser(&c)?.value;
    let est = mc_weighted_sum_ser(&c, Policy::SerialMax, 1_000_000, 7)?;
    let z = (est.value - analytic).abs() / est.std_error;
    outcome(
        worst <= 1e-8 && z <= 3.0,
        format!(
            "worst rel vs quadrature {worst:.1e}; MC {:.4e} vs {analytic:.4e} ({z:.2} sigma)",
            est.value
        ),
    )
}

fn criterion_08() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    let mut floors = Vec::new();
    for eta in [0.05, 0.1, 0.5] {
        let floor = ser_floor(&cfg(3, 10.0, eta))?;
        let at_1e8 = avg_weighted_sum_ser(&cfg(3, 1e8, eta))?.value;
        let r = rel(at_1e8, floor);
        pass &= r <= 0.005;
        floors.push(floor);
        parts.push(format!("eta={eta}: {r:.1e}"));
    }
    let inc_eta = floors.windows(2).all(|p| p[0] < p[1]);
    let by_n: Vec<f64> = [3, 4, 5]
        .iter()
        .map(|&n| ser_floor(&cfg(n, 10.0, 0.1)))
        .collect::<Result<_>>()?;
    let dec_n = by_n.windows(2).all(|p| p[0] > p[1]);
    outcome(
        pass && inc_eta && dec_n,
        format!(
            "gap to floor {}; increasing in eta: {inc_eta}; decreasing in N: {dec_n}",
            parts.join(", ")
        ),
    )
}

/// Least-squares slope of `log10 y` against `log10 x`.
fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) =
        points.iter().map(|&(x, y)| (x.log10(), y.log10())).unzip();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn criterion_09() -> Result<Outcome> {
    let base = cfg(3, 1.0, 0.0);
    let mut weighted = Vec::new();
    let mut ab = Vec::new();
    for i in 0..=5 {
        let lam = 10f64.powf(2.5 + 0.1 * i as f64);
        let c = base.with_lambda_s(lam)?;
        let q_ab = quadrature_ser_of_link(&c, GammaAb, DEFAULT_TOLERANCE)?;
        let q_ba = quadrature_ser_of_link(&c, GammaBa, DEFAULT_TOLERANCE)?;
        weighted.push((lam, c.major_weight() * q_ab + c.minor_weight() * q_ba));
        ab.push((lam, q_ab));
    }
    let s_w = loglog_slope(&weighted);
    let s_ab = loglog_slope(&ab);

    let c = base.with_lambda_s(1e3)?;
    let asym = asymptotic_ser_perfect_cancellation(&c, 1e3)?;
    let r_ab = quadrature_ser_of_link(&c, GammaAb, DEFAULT_TOLERANCE)? / asym.ser_ab;
    let r_ba = quadrature_ser_of_link(&c, GammaBa, DEFAULT_TOLERANCE)? / asym.ser_ba;
    let within = |r: f64| (0.9..=1.1).contains(&r);
    outcome(
        (s_w + 4.0).abs() <= 0.15 && (s_ab + 9.0).abs() <= 0.3 && within(r_ab) && within(r_ba),
        format!(
            "slopes weighted {s_w:.3}, A->B {s_ab:.3}; ratio to asymptote ab {r_ab:.4}, ba {r_ba:.4}"
        ),
    )
}

fn criterion_10() -> Result<Outcome> {
    let mut formula_ok = true;
    let mut tally_ok = true;
    let mut matrices = 0u64;
    for na in 2..=8u64 {
        for nb in 2..=8u64 {
            let (a, b) = (na as usize, nb as usize);
            formula_ok &= comparison_count(ComparisonMethod::Exhaustive, a, b)
                == na * nb * (na - 1) * (nb - 1) / 2;
            formula_ok &=
                comparison_count(ComparisonMethod::SerialMax, a, b) == 2 * na * nb - na - nb + 1;
            let c = SystemConfig::new(a, b, 10.0, 0.1, 0.7, ModulationParams::BPSK)?;
            for t in 0..200 {
                let sinr =
                    to_obtainable_sinr(&draw_snr_matrix(RngStream::new(10, t), &c), &c.derived());
                tally_ok &= serial_max(&sinr, c.w)?.comparisons_used
                    == comparison_count(ComparisonMethod::SerialMax, a, b);
                matrices += 1;
            }
        }
    }
    outcome(
        formula_ok && tally_ok,
        format!("formulas match: {formula_ok}; tally matches on {matrices} matrices: {tally_ok}"),
    )
}

/// `E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)`, 60 terms.
fn e1_series(x: f64) -> f64 {
    let euler = 0.577_215_664_901_532_9;
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..=60 {
        term *= -x / k as f64;
        sum += term / k as f64;
    }
    -euler - x.ln() - sum
}

fn criterion_11() -> Result<Outcome> {
    let v = e1(1.0)?;
    let series = e1_series(1.0);
    let e1_ok = (v - 0.219383934).abs() <= 1e-9 && (v - series).abs() <= 1e-9;

    let mut prev = f64::INFINITY;
    let mut mono_ok = true;
    let steps = 2000;
    for i in 0..=steps {
        let x = 10f64.powf(-6.0 + 14.0 * i as f64 / steps as f64);
        let y = exp_e1_scaled(x)?;
        mono_ok &= y.is_finite() && y < prev;
        prev = y;
    }
    let q = q_function(3.0);
    let q_ok = (q - 1.3499e-3).abs() <= 1e-7;
    outcome(
        e1_ok && mono_ok && q_ok,
        format!("e1(1) = {v:.12} (series {series:.12}); e^x E1(x) monotone: {mono_ok}; Q(3) = {q:.6e}"),
    )
}

fn criterion_12() -> Result<Outcome> {
    let dir = tempfile::tempdir()?;
    let mut identical = true;
    let mut rows = 0;
    for name in PRESETS {
        let spec = preset(name)?;
        let mut bytes = Vec::new();
        for run in 0..2 {
            let out = dir.path().join(format!("{name}-{run}.csv"));
            let r = run_sweep(&spec)?;
            rows += r.len();
            write_outputs(&out, &spec, &r)?;
            bytes.push((fs::read(&out)?, fs::read(sidecar_path(&out))?));
        }
        identical &= bytes[0] == bytes[1];
    }

    let c = SystemConfig::square(3, 100.0, 0.05, 0.7)?;
    let mut bitwise = true;
    for policy in Policy::ALL {
        let s = mc_weighted_sum_rate_with(&c, policy, 20_000, 9, Execution::Serial)?;
        let p = mc_weighted_sum_rate_with(&c, policy, 20_000, 9, Execution::Parallel)?;
        bitwise &= s.value.to_bits() == p.value.to_bits()
            && s.std_error.to_bits() == p.std_error.to_bits();
        let s = mc_weighted_sum_ser_with(&c, policy, 20_000, 9, Execution::Serial)?;
        let p = mc_weighted_sum_ser_with(&c, policy, 20_000, 9, Execution::Parallel)?;
        bitwise &= s.value.to_bits() == p.value.to_bits()
            && s.std_error.to_bits() == p.std_error.to_bits();
    }
    let s = mc_p_not_with(&c, 20_000, 9, Execution::Serial)?;
    let p = mc_p_not_with(&c, 20_000, 9, Execution::Parallel)?;
    bitwise &= s.value.to_bits() == p.value.to_bits();
    outcome(
        identical && bitwise,
        format!(
            "{} presets re-run byte-identical: {identical} ({rows} rows); parallel == serial bitwise: {bitwise}",
            PRESETS.len()
        ),
    )
}

fn main() -> ExitCode {
    // `cargo test` passes harness flags such as `--nocapture`; only a name
    // filter is honoured here.
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let criteria: [(&str, fn() -> Result<Outcome>); 12] = [
        ("second-link rank 2/3 equivalence", criterion_01),
        ("optimality-gap bound", criterion_02),
        ("selected-link SINR CDFs", criterion_03),
        ("order-statistic mixture weights", criterion_04),
        ("average rate vs oracles", criterion_05),
        ("rate ceiling", criterion_06),
        ("average SER vs oracles", criterion_07),
        ("error floor", criterion_08),
        ("diversity order", criterion_09),
        ("comparison counts", criterion_10),
        ("special functions", criterion_11),
        ("determinism", criterion_12),
    ];
    let mut failed = 0;
    let mut ran = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = format!("criterion {:02}", i + 1);
        if let Some(flt) = &filter {
            if !id.contains(flt.as_str()) && !name.contains(flt.as_str()) {
                continue;
            }
        }
        ran += 1;
        let start = Instant::now();
        let (pass, detail) = match f() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "{id} {} [{:>6.1}s] {name}: {detail}",
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {ran} criteria passed", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
