use swarmopt::sampling::{levy_tail_density, LevyParams};
use swarmopt::RngStream;

const SAMPLES: usize = 1_000_000;

fn magnitudes(seed: u64) -> Vec<f64> {
    let params = LevyParams::default();
    let mut rng = RngStream::new(seed);
    let mut out: Vec<f64> = (0..SAMPLES).map(|_| rng.levy_step(&params).abs()).collect();
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

/// Hill estimate of the density exponent `1 + λ` from the `k` largest values
/// of a descending sample.
fn hill_density_exponent(desc: &[f64], k: usize) -> f64 {
    let threshold = desc[k].ln();
    let mean_log_excess = desc[..k].iter().map(|x| x.ln() - threshold).sum::<f64>() / k as f64;
    1.0 + 1.0 / mean_log_excess
}

/// Empirical `P(|L| > s)` from a descending sample.
fn ccdf(desc: &[f64], s: f64) -> f64 {
    desc.partition_point(|&x| x > s) as f64 / desc.len() as f64
}

/// Least-squares slope of `log ccdf` against `log s` on a log grid over `[lo, hi]`.
fn ccdf_slope(desc: &[f64], lo: f64, hi: f64) -> f64 {
    let pts: Vec<(f64, f64)> =
        (0..=20).map(|i| lo * (hi / lo).powf(i as f64 / 20.0)).map(|s| (s.ln(), ccdf(desc, s).ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn hill_estimator_matches_power_law_exponent() {
    let desc = magnitudes(2024);
    let exponent = hill_density_exponent(&desc, SAMPLES / 100);
    assert!((exponent - 2.5).abs() <= 0.15, "Hill exponent {exponent}");
}

#[test]
fn ccdf_slope_matches_minus_lambda() {
    let desc = magnitudes(2025);
    let slope = ccdf_slope(&desc, 10.0, 100.0);
    assert!((slope + 1.5).abs() <= 0.15, "CCDF slope {slope}");
}

#[test]
fn doubling_the_step_divides_the_tail_by_two_to_the_lambda() {
    let desc = magnitudes(2026);
    let ratio = ccdf(&desc, 10.0) / ccdf(&desc, 20.0);
    let expected = 2f64.powf(1.5);
    assert!((ratio - expected).abs() <= 0.2 * expected, "ratio {ratio}");
}

#[test]
fn tail_density_matches_reference_formula() {
    // λ Γ(λ) sin(πλ/2) / π · s^{-1-λ} at λ = 1.5, s = 10
    let gamma_15 = 0.886_226_925_452_758_f64;
    let expected = 1.5 * gamma_15 * (0.75 * std::f64::consts::PI).sin() / std::f64::consts::PI * 10f64.powf(-2.5);
    let got = levy_tail_density(10.0, &LevyParams::default()).unwrap();
    assert!((got - expected).abs() < 1e-14, "{got} vs {expected}");
}
