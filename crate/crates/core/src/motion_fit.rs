//! Motion statistics of annotated tracks: displacement histograms,
//! Gaussian and Laplace fits, and their R² comparison.
//!
//! Parameters are maximum-likelihood estimates on the raw data; R² only
//! reports how well each fitted density matches the normalized histogram.
//! The Gaussian is fitted to signed displacements, the Laplace to absolute
//! displacements with the half-line density `λ · exp(-λ|Δ|)`.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::geometry::{BoundingBox, Displacement};
use crate::system_model::MotionFamily;

pub const DEFAULT_BINS: usize = 60;
pub const MIN_COMPARE_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitError {
    TooFewBoxes,
    TooFewSamples { needed: usize, got: usize },
    /// All values identical (or all zero for absolute fits).
    Degenerate,
    /// Histogram densities are all equal, so R² is undefined.
    UndefinedRSquared,
    InvalidBins,
}

impl fmt::Display for FitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitError::TooFewBoxes => f.write_str("need at least two boxes to form a displacement"),
            FitError::TooFewSamples { needed, got } => write!(f, "need at least {needed} samples, got {got}"),
            FitError::Degenerate => f.write_str("data has no spread to fit"),
            FitError::UndefinedRSquared => f.write_str("R² undefined: histogram densities have zero variance"),
            FitError::InvalidBins => f.write_str("histogram needs at least one bin and a non-empty range"),
        }
    }
}

impl core::error::Error for FitError {}

/// Density-normalized histogram: `Σ density · width = 1` over the values
/// that fall inside the edges.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    edges: Vec<f64>,
    densities: Vec<f64>,
}

impl Histogram {
    /// `bins` equal-width bins on `[lo, hi]`. Values outside are dropped and
    /// the density is normalized over the remaining ones.
    pub fn build(data: &[f64], bins: usize, lo: f64, hi: f64) -> Result<Self, FitError> {
        if bins == 0 || !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(FitError::InvalidBins);
        }
        let width = (hi - lo) / bins as f64;
        let edges: Vec<f64> = (0..=bins).map(|i| lo + i as f64 * width).collect();
        let mut counts = alloc::vec![0usize; bins];
        let mut kept = 0usize;
        for &v in data {
            if !(v >= lo && v <= hi) {
                continue;
            }
            let i = (((v - lo) / width) as usize).min(bins - 1);
            counts[i] += 1;
            kept += 1;
        }
        if kept == 0 {
            return Err(FitError::Degenerate);
        }
        let densities = counts.iter().map(|c| *c as f64 / (kept as f64 * width)).collect();
        Ok(Histogram { edges, densities })
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn densities(&self) -> &[f64] {
        &self.densities
    }

    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1]))
    }

    pub fn integral(&self) -> f64 {
        self.edges.windows(2).zip(&self.densities).map(|(w, d)| (w[1] - w[0]) * d).sum()
    }
}

/// Fitted parameters and histogram goodness of fit.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub family: MotionFamily,
    /// Mean for the Gaussian; 0 for the absolute-value Laplace fit.
    pub location: f64,
    /// Standard deviation (Gaussian) or `b = 1/λ` (Laplace).
    pub scale: f64,
    pub r_squared: f64,
    pub histogram: Histogram,
}

impl FitResult {
    /// `λ = 1/b` of a Laplace fit.
    pub fn lambda(&self) -> f64 {
        1.0 / self.scale
    }

    pub fn density(&self, x: f64) -> f64 {
        match self.family {
            MotionFamily::Gaussian => gaussian_pdf(self.location, self.scale, x),
            MotionFamily::Laplace => half_laplace_pdf(self.lambda(), x),
        }
    }
}

fn gaussian_pdf(mean: f64, std: f64, x: f64) -> f64 {
    let z = (x - mean) / std;
    libm::exp(-0.5 * z * z) / (std * libm::sqrt(2.0 * PI))
}

fn half_laplace_pdf(lambda: f64, x: f64) -> f64 {
    if x < 0.0 {
        0.0
    } else {
        lambda * libm::exp(-lambda * x)
    }
}

/// `R² = 1 - SS_res / SS_tot` of `model` evaluated at the bin centers.
pub fn r_squared(hist: &Histogram, model: impl Fn(f64) -> f64) -> Result<f64, FitError> {
    let d = hist.densities();
    let mean = d.iter().sum::<f64>() / d.len() as f64;
    let ss_tot: f64 = d.iter().map(|v| (v - mean) * (v - mean)).sum();
    if !(ss_tot > 0.0) {
        return Err(FitError::UndefinedRSquared);
    }
    let ss_res: f64 = hist.centers().zip(d).map(|(c, v)| (v - model(c)) * (v - model(c))).sum();
    Ok(1.0 - ss_res / ss_tot)
}

/// Consecutive displacements with the averaged-size normalization.
pub fn annotations_to_displacements(boxes: &[BoundingBox]) -> Result<Vec<Displacement>, FitError> {
    if boxes.len() < 2 {
        return Err(FitError::TooFewBoxes);
    }
    Ok(boxes.windows(2).map(|w| w[0].displacement_avg_norm(&w[1])).collect())
}

pub fn fit_gaussian(data: &[f64]) -> Result<FitResult, FitError> {
    fit_gaussian_binned(data, DEFAULT_BINS)
}

/// ML Gaussian (divisor `n`), R² on `bins` bins over `μ ± 4σ`.
pub fn fit_gaussian_binned(data: &[f64], bins: usize) -> Result<FitResult, FitError> {
    if data.len() < 2 {
        return Err(FitError::TooFewSamples { needed: 2, got: data.len() });
    }
    if data.iter().all(|v| *v == data[0]) {
        return Err(FitError::Degenerate);
    }
    let n = data.len() as f64;
    let mean = data.iter().sum::<f64>() / n;
    let var = data.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let std = libm::sqrt(var);
    if !(std > 0.0) {
        return Err(FitError::Degenerate);
    }
    let histogram = Histogram::build(data, bins, mean - 4.0 * std, mean + 4.0 * std)?;
    let r2 = r_squared(&histogram, |x| gaussian_pdf(mean, std, x))?;
    Ok(FitResult { family: MotionFamily::Gaussian, location: mean, scale: std, r_squared: r2, histogram })
}

pub fn fit_laplace_abs(data_abs: &[f64]) -> Result<FitResult, FitError> {
    fit_laplace_abs_binned(data_abs, DEFAULT_BINS)
}

/// ML half-line Laplace on `|Δ|`: `b = mean(|Δ|)`. R² on `bins` bins over
/// `[0, 4b]`.
pub fn fit_laplace_abs_binned(data_abs: &[f64], bins: usize) -> Result<FitResult, FitError> {
    if data_abs.len() < 2 {
        return Err(FitError::TooFewSamples { needed: 2, got: data_abs.len() });
    }
    let b = data_abs.iter().map(|v| libm::fabs(*v)).sum::<f64>() / data_abs.len() as f64;
    if !(b > 0.0) {
        return Err(FitError::Degenerate);
    }
    let abs: Vec<f64> = data_abs.iter().map(|v| libm::fabs(*v)).collect();
    let histogram = Histogram::build(&abs, bins, 0.0, 4.0 * b)?;
    let lambda = 1.0 / b;
    let r2 = r_squared(&histogram, |x| half_laplace_pdf(lambda, x))?;
    Ok(FitResult { family: MotionFamily::Laplace, location: 0.0, scale: b, r_squared: r2, histogram })
}

/// Both fits for one axis.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisFit {
    pub gaussian: FitResult,
    pub laplace: FitResult,
}

impl AxisFit {
    /// Family with the higher R²; Laplace wins exact ties.
    pub fn winner(&self) -> MotionFamily {
        if self.gaussian.r_squared > self.laplace.r_squared {
            MotionFamily::Gaussian
        } else {
            MotionFamily::Laplace
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub samples: usize,
    pub x: AxisFit,
    pub y: AxisFit,
}

fn fit_axis(values: &[f64], bins: usize) -> Result<AxisFit, FitError> {
    let gaussian = fit_gaussian_binned(values, bins)?;
    let abs: Vec<f64> = values.iter().map(|v| libm::fabs(*v)).collect();
    let laplace = fit_laplace_abs_binned(&abs, bins)?;
    Ok(AxisFit { gaussian, laplace })
}

pub fn compare_fits(displacements: &[Displacement], bins: usize) -> Result<FitReport, FitError> {
    if displacements.len() < MIN_COMPARE_SAMPLES {
        return Err(FitError::TooFewSamples { needed: MIN_COMPARE_SAMPLES, got: displacements.len() });
    }
    if bins < 2 {
        return Err(FitError::InvalidBins);
    }
    let xs: Vec<f64> = displacements.iter().map(|d| d.dx).collect();
    let ys: Vec<f64> = displacements.iter().map(|d| d.dy).collect();
    Ok(FitReport { samples: displacements.len(), x: fit_axis(&xs, bins)?, y: fit_axis(&ys, bins)? })
}

/// One-sample Kolmogorov–Smirnov statistic `D = sup |F_n(x) - F(x)|`.
pub fn ks_statistic(data: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted: Vec<f64> = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let f = cdf(*x);
            let lo = f - i as f64 / n;
            let hi = (i + 1) as f64 / n - f;
            lo.max(hi)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic p-value of the KS statistic `d` at sample size `n`, using
/// the Stephens small-sample correction.
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let sn = libm::sqrt(n as f64);
    let t = (sn + 0.12 + 0.11 / sn) * d;
    if t < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = libm::exp(-2.0 * kf * kf * t * t);
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Exp1, StandardNormal};

    fn bb(x: f64, y: f64, w: f64, h: f64) -> BoundingBox {
        BoundingBox::new(x, y, w, h).unwrap()
    }

    fn normals(n: usize, std: f64, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| std * Distribution::<f64>::sample(&StandardNormal, &mut rng)).collect::<Vec<f64>>()
    }

    fn exponentials(n: usize, scale: f64, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| scale * Distribution::<f64>::sample(&Exp1, &mut rng)).collect::<Vec<f64>>()
    }

    #[test]
    fn displacement_examples() {
        let constant = vec![bb(1.0, 2.0, 3.0, 4.0); 5];
        let d = annotations_to_displacements(&constant).unwrap();
        assert_eq!(d.len(), 4);
        assert!(d.iter().all(|x| *x == Displacement::ZERO));
        let d = annotations_to_displacements(&[bb(0.0, 0.0, 10.0, 10.0), bb(5.0, 0.0, 10.0, 10.0)]).unwrap();
        assert_eq!(d, vec![Displacement::new(0.5, 0.0)]);
        assert_eq!(annotations_to_displacements(&constant[..1]), Err(FitError::TooFewBoxes));
    }

    #[test]
    fn gaussian_fit_examples() {
        let data: Vec<f64> = (0..200).map(|i| if i % 2 == 0 { -1.0 } else { 1.0 }).collect();
        assert_eq!(fit_gaussian(&data).unwrap().location, 0.0);

        let data = normals(100_000, 0.1, 11);
        let fit = fit_gaussian(&data).unwrap();
        assert!(fit.location.abs() < 0.002);
        assert!((fit.scale - 0.1).abs() < 0.002);
        assert!(fit.r_squared > 0.95);

        assert_eq!(fit_gaussian(&[0.3; 10]), Err(FitError::Degenerate));
    }

    #[test]
    fn laplace_fit_examples() {
        let fit = fit_laplace_abs(&[0.5; 8]).unwrap();
        assert_eq!(fit.scale, 0.5);
        assert_eq!(fit.lambda(), 2.0);

        let data = exponentials(100_000, 0.05, 12);
        let fit = fit_laplace_abs(&data).unwrap();
        assert!((fit.lambda() - 20.0).abs() < 0.4, "λ = {}", fit.lambda());

        assert_eq!(fit_laplace_abs(&[]), Err(FitError::TooFewSamples { needed: 2, got: 0 }));
        assert_eq!(fit_laplace_abs(&[0.0; 5]), Err(FitError::Degenerate));
    }

    #[test]
    fn r_squared_examples() {
        let data: Vec<f64> = normals(5000, 1.0, 3);
        let h = Histogram::build(&data, 20, -3.0, 3.0).unwrap();
        let centers: Vec<f64> = h.centers().collect();
        let exact = |x: f64| {
            let i = centers.iter().position(|c| *c == x).unwrap();
            h.densities()[i]
        };
        assert_eq!(r_squared(&h, exact), Ok(1.0));
        let mean = h.densities().iter().sum::<f64>() / 20.0;
        assert!(r_squared(&h, |_| mean).unwrap().abs() < 1e-12);
        assert!(r_squared(&h, |_| 10.0).unwrap() < 0.0);

        let single = Histogram::build(&[0.5, 0.6], 1, 0.0, 1.0).unwrap();
        assert_eq!(r_squared(&single, |_| 1.0), Err(FitError::UndefinedRSquared));
    }

    #[test]
    fn compare_requires_samples() {
        let d = vec![Displacement::new(0.1, 0.2); 99];
        assert_eq!(compare_fits(&d, 60), Err(FitError::TooFewSamples { needed: 100, got: 99 }));
    }

    #[test]
    fn ks_accepts_matching_and_rejects_shifted() {
        let data = normals(10_000, 1.0, 5);
        let cdf = |x: f64| 0.5 * (1.0 + libm::erf(x / core::f64::consts::SQRT_2));
        let p = ks_p_value(ks_statistic(&data, cdf), data.len());
        assert!(p > 0.01, "p = {p}");
        let shifted: Vec<f64> = data.iter().map(|v| v + 0.1).collect();
        let p = ks_p_value(ks_statistic(&shifted, cdf), shifted.len());
        assert!(p < 1e-6, "p = {p}");
    }

    #[test]
    fn ks_p_value_reference_points() {
        // Kolmogorov distribution: P(K > 1.3581) ≈ 0.05, P(K > 1.6276) ≈ 0.01.
        let n = 1_000_000;
        let scale = libm::sqrt(n as f64) + 0.12 + 0.11 / libm::sqrt(n as f64);
        assert!((ks_p_value(1.3581 / scale, n) - 0.05).abs() < 1e-3);
        assert!((ks_p_value(1.6276 / scale, n) - 0.01).abs() < 1e-3);
    }

    proptest! {
        #[test]
        fn histogram_integrates_to_one(data in proptest::collection::vec(-5.0..5.0f64, 2..300), bins in 1usize..80) {
            let h = Histogram::build(&data, bins, -5.0, 5.0).unwrap();
            prop_assert!((h.integral() - 1.0).abs() < 1e-9);
        }

        #[test]
        fn gaussian_fit_sign_flip(data in proptest::collection::vec(-3.0..3.0f64, 10..200)) {
            prop_assume!(data.iter().any(|v| *v != data[0]));
            let a = fit_gaussian(&data).unwrap();
            let n = data.len() as f64;
            prop_assert_eq!(a.location, data.iter().sum::<f64>() / n);
            let flipped: Vec<f64> = data.iter().map(|v| -v).collect();
            let b = fit_gaussian(&flipped).unwrap();
            prop_assert!((a.location + b.location).abs() < 1e-12);
            prop_assert!((a.scale - b.scale).abs() < 1e-12);
        }

        #[test]
        fn laplace_scale_is_linear(data in proptest::collection::vec(0.0..3.0f64, 10..200), k in 0.01..100.0f64) {
            prop_assume!(data.iter().any(|v| *v > 0.0));
            let a = fit_laplace_abs(&data).unwrap();
            let scaled: Vec<f64> = data.iter().map(|v| v * k).collect();
            let b = fit_laplace_abs(&scaled).unwrap();
            prop_assert!((b.scale - k * a.scale).abs() <= 1e-9 * b.scale);
        }
    }
}
