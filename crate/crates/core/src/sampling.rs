//! Seedable random streams and the variates the optimizers consume:
//! uniforms, standard normals and heavy-tailed Lévy steps.
//!
//! Every stream is a ChaCha8 generator (`rand_chacha`), whose output is
//! specified independently of platform and word size, so a seed reproduces
//! the same variates everywhere.

use std::collections::VecDeque;
use std::f64::consts::PI;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Source of the random numbers used by the optimizers.
///
/// [`RngStream`] is the production implementation. Tests can supply scripted
/// values to check single update steps by hand.
pub trait RandomSource {
    /// Uniform variate in `[0, 1)`.
    fn uniform01(&mut self) -> f64;

    /// Standard normal variate.
    fn gaussian(&mut self) -> f64;

    /// Signed Lévy step for one coordinate.
    fn levy(&mut self, params: &LevyParams) -> f64 {
        mantegna_step(self, params)
    }

    /// Uniform index in `0..n`. One uniform draw.
    fn index_below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.uniform01() * n as f64) as usize).min(n - 1)
    }

    /// Uniformly random permutation of `0..n` (Fisher-Yates, `n - 1` draws).
    fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.index_below(i + 1);
            perm.swap(i, j);
        }
        perm
    }
}

/// Deterministic random stream identified by a 64-bit seed.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self { seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent stream derived from `(seed, index)`. Does not depend on how
    /// many values the parent has produced.
    pub fn child(&self, index: u64) -> RngStream {
        RngStream::new(derive_seed(self.seed, index))
    }

    /// Uniform variate in `[lo, hi)`; `lo == hi` returns `lo`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> Result<f64> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::invalid(format!("uniform interval [{lo}, {hi}) is empty")));
        }
        Ok(lo + (hi - lo) * self.uniform01())
    }

    pub fn levy_step(&mut self, params: &LevyParams) -> f64 {
        self.levy(params)
    }
}

impl RandomSource for RngStream {
    fn uniform01(&mut self) -> f64 {
        // top 53 bits -> [0, 1)
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn gaussian(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }
}

/// Replays fixed variates in order, for checking single update steps by hand.
///
/// Lévy draws are queued unscaled and multiplied by the requested scale.
/// Permutations come from their own queue and fall back to the identity.
/// Running out of a queued kind panics, which exposes a miscounted script.
#[derive(Debug, Clone, Default)]
pub struct ScriptedSource {
    pub uniforms: VecDeque<f64>,
    pub gaussians: VecDeque<f64>,
    pub levys: VecDeque<f64>,
    pub permutations: VecDeque<Vec<usize>>,
}

impl ScriptedSource {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn uniforms(values: &[f64]) -> Self {
        Self::new().with_uniforms(values)
    }

    pub fn with_uniforms(mut self, values: &[f64]) -> Self {
        self.uniforms.extend(values);
        self
    }

    pub fn with_gaussians(mut self, values: &[f64]) -> Self {
        self.gaussians.extend(values);
        self
    }

    pub fn with_levys(mut self, values: &[f64]) -> Self {
        self.levys.extend(values);
        self
    }

    pub fn with_permutation(mut self, perm: Vec<usize>) -> Self {
        self.permutations.push_back(perm);
        self
    }

    /// True once every queued uniform, normal and Lévy value was consumed.
    pub fn exhausted(&self) -> bool {
        self.uniforms.is_empty() && self.gaussians.is_empty() && self.levys.is_empty()
    }
}

impl RandomSource for ScriptedSource {
    fn uniform01(&mut self) -> f64 {
        self.uniforms.pop_front().expect("script ran out of uniforms")
    }

    fn gaussian(&mut self) -> f64 {
        self.gaussians.pop_front().expect("script ran out of normals")
    }

    fn levy(&mut self, params: &LevyParams) -> f64 {
        self.levys.pop_front().expect("script ran out of Lévy steps") * params.scale()
    }

    fn permutation(&mut self, n: usize) -> Vec<usize> {
        self.permutations.pop_front().unwrap_or_else(|| (0..n).collect())
    }
}

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of child `index` of a stream seeded with `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

/// Parameters of the Lévy step distribution: tail exponent `lambda` in
/// `(1, 3)` and a positive `scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevyParams {
    lambda: f64,
    scale: f64,
    sigma_u: f64,
}

impl LevyParams {
    pub fn new(lambda: f64, scale: f64) -> Result<Self> {
        if !(lambda > 1.0 && lambda < 3.0) {
            return Err(Error::invalid(format!("Lévy exponent must lie in (1, 3), got {lambda}")));
        }
        if !(scale >= 0.0 && scale.is_finite()) {
            return Err(Error::invalid(format!("Lévy scale must be non-negative, got {scale}")));
        }
        Ok(Self { lambda, scale, sigma_u: mantegna_sigma(lambda) })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn with_scale(self, scale: f64) -> Result<Self> {
        Self::new(self.lambda, scale)
    }
}

impl Default for LevyParams {
    fn default() -> Self {
        Self::new(1.5, 1.0).expect("default Lévy parameters are valid")
    }
}

/// Mantegna's numerator standard deviation
/// `[Γ(1+λ) sin(πλ/2) / (Γ((1+λ)/2) λ 2^((λ-1)/2))]^(1/λ)`.
///
/// For `λ > 2` the sine is negative; its magnitude is used, which keeps the
/// tail index (set by the `|v|^(1/λ)` denominator) unchanged. Near `λ = 2` the
/// scale collapses toward zero.
fn mantegna_sigma(lambda: f64) -> f64 {
    let num = libm::tgamma(1.0 + lambda) * (PI * lambda / 2.0).sin();
    let den = libm::tgamma((1.0 + lambda) / 2.0) * lambda * 2f64.powf((lambda - 1.0) / 2.0);
    (num / den).abs().powf(1.0 / lambda)
}

/// One Lévy step by Mantegna's ratio `u / |v|^(1/λ)`, `u ~ N(0, σ_u²)`,
/// `v ~ N(0, 1)`. Magnitude and sign are drawn independently: two normals
/// for the magnitude, then one uniform for a fair-coin sign.
pub fn mantegna_step<R: RandomSource + ?Sized>(rng: &mut R, params: &LevyParams) -> f64 {
    let u = rng.gaussian() * params.sigma_u;
    let v = rng.gaussian().abs().max(f64::MIN_POSITIVE);
    let magnitude = u.abs() / v.powf(1.0 / params.lambda);
    let sign = if rng.uniform01() < 0.5 { -1.0 } else { 1.0 };
    sign * magnitude * params.scale
}

/// Asymptotic Lévy density `λ Γ(λ) sin(πλ/2) / π · s^-(1+λ)` for `s > 0`.
pub fn levy_tail_density(s: f64, params: &LevyParams) -> Result<f64> {
    if s.is_nan() || s <= 0.0 {
        return Err(Error::invalid(format!("tail density needs s > 0, got {s}")));
    }
    let lambda = params.lambda;
    let norm = lambda * libm::tgamma(lambda) * (PI * lambda / 2.0).sin() / PI;
    Ok(norm * s.powf(-(1.0 + lambda)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moments(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        (mean, var)
    }

    #[test]
    fn degenerate_uniform_interval() {
        let mut rng = RngStream::new(1);
        assert_eq!(rng.uniform(2.5, 2.5).unwrap(), 2.5);
        assert!(rng.uniform(1.0, 0.0).is_err());
        assert!(rng.uniform(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn uniform_moments() {
        let mut rng = RngStream::new(11);
        let xs: Vec<f64> = (0..1_000_000).map(|_| rng.uniform(0.0, 1.0).unwrap()).collect();
        assert!(xs.iter().all(|x| (0.0..1.0).contains(x)));
        let (mean, var) = moments(&xs);
        assert!((mean - 0.5).abs() < 0.002, "mean {mean}");
        assert!((var - 1.0 / 12.0).abs() < 0.002, "var {var}");
    }

    #[test]
    fn streams_repeat_per_seed() {
        let mut a = RngStream::new(99);
        let mut b = RngStream::new(99);
        for _ in 0..100 {
            assert_eq!(a.uniform01().to_bits(), b.uniform01().to_bits());
            assert_eq!(a.gaussian().to_bits(), b.gaussian().to_bits());
        }
    }

    #[test]
    fn gaussian_moments_and_tail() {
        let mut rng = RngStream::new(5);
        let xs: Vec<f64> = (0..1_000_000).map(|_| rng.gaussian()).collect();
        let (mean, var) = moments(&xs);
        assert!(mean.abs() < 0.005, "mean {mean}");
        assert!((var - 1.0).abs() < 0.01, "var {var}");
        let tail = xs.iter().filter(|z| z.abs() > 1.96).count() as f64 / xs.len() as f64;
        assert!((tail - 0.05).abs() < 0.005, "tail {tail}");
    }

    #[test]
    fn children_are_deterministic_and_distinct() {
        let parent = RngStream::new(2024);
        let mut consumed = parent.clone();
        for _ in 0..17 {
            consumed.uniform01();
        }
        assert_eq!(parent.child(3).seed(), consumed.child(3).seed());
        assert_ne!(parent.child(3).seed(), parent.child(4).seed());
        assert_ne!(parent.child(0).seed(), parent.seed());
    }

    #[test]
    fn permutation_is_a_permutation() {
        let mut rng = RngStream::new(8);
        let mut p = rng.permutation(50);
        p.sort_unstable();
        assert_eq!(p, (0..50).collect::<Vec<_>>());
    }

    #[test]
    fn levy_params_validation() {
        assert!(LevyParams::new(1.0, 1.0).is_err());
        assert!(LevyParams::new(3.0, 1.0).is_err());
        assert!(LevyParams::new(1.5, -1.0).is_err());
        assert!(LevyParams::new(2.5, 1.0).is_ok());
    }

    #[test]
    fn mantegna_sigma_reference_value() {
        // λ = 1.5: Γ(2.5) = 3√π/4, Γ(1.25) from tables.
        let expected =
            ((0.75 * PI.sqrt()) * (0.75 * PI).sin() / (0.906_402_477_055_477 * 1.5 * 2f64.powf(0.25))).powf(1.0 / 1.5);
        assert!((mantegna_sigma(1.5) - expected).abs() < 1e-12);
        assert!((mantegna_sigma(1.5) - 0.696_574_502_557_696_7).abs() < 1e-12);
    }

    #[test]
    fn zero_scale_gives_zero_steps() {
        let mut rng = RngStream::new(4);
        let p = LevyParams::new(1.5, 0.0).unwrap();
        assert!((0..1000).all(|_| rng.levy_step(&p) == 0.0));
        let tiny = LevyParams::new(1.5, 1e-12).unwrap();
        assert!((0..1000).all(|_| rng.levy_step(&tiny).abs() < 1e-3));
    }

    #[test]
    fn levy_steps_are_symmetric() {
        let mut rng = RngStream::new(12);
        let p = LevyParams::default();
        let n = 200_000;
        let neg = (0..n).filter(|_| rng.levy_step(&p) < 0.0).count() as f64 / n as f64;
        assert!((neg - 0.5).abs() < 0.005, "negative fraction {neg}");
    }

    #[test]
    fn tail_density_examples() {
        let p = LevyParams::new(1.5, 1.0).unwrap();
        let hand = 1.5 * (PI.sqrt() / 2.0) * (0.75 * PI).sin() / PI * 10f64.powf(-2.5);
        assert!((levy_tail_density(10.0, &p).unwrap() - hand).abs() < 1e-15);
        for lambda in [1.1, 1.5, 1.9, 2.5] {
            let p = LevyParams::new(lambda, 1.0).unwrap();
            let r = levy_tail_density(3.0, &p).unwrap() / levy_tail_density(6.0, &p).unwrap();
            assert!((r - 2f64.powf(1.0 + lambda)).abs() < 1e-9 * r);
        }
        let two = LevyParams::new(2.0, 1.0).unwrap();
        assert!(levy_tail_density(1.0, &two).unwrap().abs() < 1e-15);
        assert!(levy_tail_density(0.0, &p).is_err());
        assert!(levy_tail_density(-1.0, &p).is_err());
    }
}
