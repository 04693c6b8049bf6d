//! Brownian-motion prior over center displacements.
//!
//! Increments of a 2D Brownian path are independent, so the transition
//! density `p(s_t | s_{t-1})` does not depend on the previous state and the
//! system model reduces to a fixed prior `p(s_t) = p_x(dx) * p_y(dy)`.
//!
//! Kernels, per axis, with conversion coefficient `λ`:
//!
//! * Gaussian (default form): `λ / √(2π) · exp(-(λ Δ)²)`
//! * Gaussian (`standard_gaussian`): `λ / √(2π) · exp(-(λ Δ)² / 2)`
//! * Laplace: `λ / 2 · exp(-λ |Δ|)`
//!
//! The default Gaussian form integrates to `√2 / 2` per axis rather than 1.
//! The filter renormalizes every posterior, so this only rescales the prior.

use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::geometry::Displacement;

/// Kernel family of the motion prior.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MotionFamily {
    #[default]
    Gaussian,
    Laplace,
}

impl MotionFamily {
    pub fn name(&self) -> &'static str {
        match self {
            MotionFamily::Gaussian => "gaussian",
            MotionFamily::Laplace => "laplace",
        }
    }
}

impl core::str::FromStr for MotionFamily {
    type Err = SystemModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gaussian" | "normal" => Ok(MotionFamily::Gaussian),
            "laplace" => Ok(MotionFamily::Laplace),
            _ => Err(SystemModelError::UnknownFamily),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemModelError {
    /// `λ` was not a positive finite number.
    InvalidLambda,
    /// Zero candidates were requested.
    EmptyRequest,
    UnknownFamily,
}

impl fmt::Display for SystemModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemModelError::InvalidLambda => f.write_str("lambda must be positive and finite"),
            SystemModelError::EmptyRequest => f.write_str("at least one candidate must be requested"),
            SystemModelError::UnknownFamily => f.write_str("unknown motion family (expected gaussian or laplace)"),
        }
    }
}

impl core::error::Error for SystemModelError {}

/// Parameters of the motion prior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemModelParams {
    family: MotionFamily,
    lambda_x: f64,
    lambda_y: f64,
    standard_gaussian: bool,
}

pub const DEFAULT_LAMBDA: f64 = 2.0;

impl Default for SystemModelParams {
    fn default() -> Self {
        SystemModelParams {
            family: MotionFamily::Gaussian,
            lambda_x: DEFAULT_LAMBDA,
            lambda_y: DEFAULT_LAMBDA,
            standard_gaussian: false,
        }
    }
}

impl SystemModelParams {
    pub fn new(family: MotionFamily, lambda_x: f64, lambda_y: f64) -> Result<Self, SystemModelError> {
        let valid = |l: f64| l.is_finite() && l > 0.0;
        if !valid(lambda_x) || !valid(lambda_y) {
            return Err(SystemModelError::InvalidLambda);
        }
        Ok(SystemModelParams {
            family,
            lambda_x,
            lambda_y,
            standard_gaussian: false,
        })
    }

    pub fn gaussian(lambda: f64) -> Result<Self, SystemModelError> {
        Self::new(MotionFamily::Gaussian, lambda, lambda)
    }

    pub fn laplace(lambda: f64) -> Result<Self, SystemModelError> {
        Self::new(MotionFamily::Laplace, lambda, lambda)
    }

    /// Switch the Gaussian kernel to `exp(-(λΔ)²/2)`. No effect on Laplace.
    pub fn with_standard_gaussian(mut self, on: bool) -> Self {
        self.standard_gaussian = on;
        self
    }

    pub fn family(&self) -> MotionFamily {
        self.family
    }

    pub fn lambda_x(&self) -> f64 {
        self.lambda_x
    }

    pub fn lambda_y(&self) -> f64 {
        self.lambda_y
    }

    pub fn standard_gaussian(&self) -> bool {
        self.standard_gaussian
    }

    /// One-axis kernel value.
    pub fn axis_density(&self, lambda: f64, delta: f64) -> f64 {
        match self.family {
            MotionFamily::Gaussian => {
                let z = lambda * delta;
                let exponent = if self.standard_gaussian { -0.5 * z * z } else { -z * z };
                lambda / libm::sqrt(2.0 * PI) * libm::exp(exponent)
            }
            MotionFamily::Laplace => lambda / 2.0 * libm::exp(-lambda * libm::fabs(delta)),
        }
    }

    /// Joint prior density `p_x(dx) * p_y(dy)`.
    pub fn prior_density(&self, d: Displacement) -> f64 {
        self.axis_density(self.lambda_x, d.dx) * self.axis_density(self.lambda_y, d.dy)
    }

    /// `p(cur | prev)`; equal to the prior for every `prev`.
    pub fn transition_density(&self, _prev: Displacement, cur: Displacement) -> f64 {
        self.prior_density(cur)
    }

    /// Standard deviation of the sampling distribution along an axis with
    /// coefficient `lambda`.
    pub fn axis_std(&self, lambda: f64) -> f64 {
        match self.family {
            MotionFamily::Gaussian if self.standard_gaussian => 1.0 / lambda,
            MotionFamily::Gaussian => 1.0 / (lambda * SQRT_2),
            MotionFamily::Laplace => SQRT_2 / lambda,
        }
    }

    /// Analytic per-axis variance `(var_x, var_y)` of the increments.
    pub fn variance(&self) -> (f64, f64) {
        let sx = self.axis_std(self.lambda_x);
        let sy = self.axis_std(self.lambda_y);
        (sx * sx, sy * sy)
    }

    /// One-axis CDF of the sampling distribution.
    pub fn axis_cdf(&self, lambda: f64, delta: f64) -> f64 {
        match self.family {
            MotionFamily::Gaussian => {
                let std = self.axis_std(lambda);
                0.5 * (1.0 + libm::erf(delta / (std * SQRT_2)))
            }
            MotionFamily::Laplace => {
                if delta < 0.0 {
                    0.5 * libm::exp(lambda * delta)
                } else {
                    1.0 - 0.5 * libm::exp(-lambda * delta)
                }
            }
        }
    }

    fn sample_axis<R: Rng + ?Sized>(&self, lambda: f64, rng: &mut R) -> f64 {
        match self.family {
            MotionFamily::Gaussian => {
                let z: f64 = StandardNormal.sample(rng);
                z * self.axis_std(lambda)
            }
            MotionFamily::Laplace => {
                let e: f64 = Exp1.sample(rng);
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                sign * e / lambda
            }
        }
    }

    /// Draws one Brownian increment.
    pub fn sample_increment<R: Rng + ?Sized>(&self, rng: &mut R) -> Displacement {
        let dx = self.sample_axis(self.lambda_x, rng);
        let dy = self.sample_axis(self.lambda_y, rng);
        Displacement::new(dx, dy)
    }
}

/// `n` i.i.d. draws from the prior, reproducible for a given seed.
pub fn sample_candidates(
    params: &SystemModelParams,
    n: usize,
    seed: u64,
) -> Result<Vec<Displacement>, SystemModelError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_candidates_with(params, n, &mut rng)
}

pub fn sample_candidates_with<R: Rng + ?Sized>(
    params: &SystemModelParams,
    n: usize,
    rng: &mut R,
) -> Result<Vec<Displacement>, SystemModelError> {
    if n == 0 {
        return Err(SystemModelError::EmptyRequest);
    }
    Ok((0..n).map(|_| params.sample_increment(rng)).collect())
}

/// Brownian path `B_0 = (0, 0), B_1, …, B_steps` built from cumulative
/// increments.
pub fn brownian_path(params: &SystemModelParams, steps: usize, seed: u64) -> Vec<Displacement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut path = Vec::with_capacity(steps + 1);
    let mut pos = Displacement::ZERO;
    path.push(pos);
    for _ in 0..steps {
        let inc = params.sample_increment(&mut rng);
        pos = Displacement::new(pos.dx + inc.dx, pos.dy + inc.dy);
        path.push(pos);
    }
    path
}
