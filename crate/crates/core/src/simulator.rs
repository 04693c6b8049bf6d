//! Seeded synthetic sequences with exact ground truth.
//!
//! A Gaussian-profile blob (peak 0.9 on a 0.1 background) follows a
//! Brownian path drawn from a [`SystemModelParams`]; optional identical
//! distractors follow their own paths. Paths are reflected at the frame
//! borders so every box stays inside the frame.

use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::geometry::BoundingBox;
use crate::observation::Frame;
use crate::system_model::SystemModelParams;

pub const BACKGROUND: f64 = 0.1;
pub const PEAK: f64 = 0.9;

// Independent generator streams per concern.
const STREAM_TARGET: u64 = 1;
const STREAM_DISTRACTORS: u64 = 2;
const STREAM_NOISE: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScenarioError {
    BlobTooLarge,
    ZeroFrames,
    /// A magnitude that must be finite and non-negative was not.
    InvalidParameter(&'static str),
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioError::BlobTooLarge => f.write_str("blob does not fit inside the frame"),
            ScenarioError::ZeroFrames => f.write_str("scenario needs at least one frame"),
            ScenarioError::InvalidParameter(p) => write!(f, "invalid scenario parameter: {p}"),
        }
    }
}

impl core::error::Error for ScenarioError {}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub frame_width: usize,
    pub frame_height: usize,
    pub n_frames: usize,
    pub blob_width: f64,
    pub blob_height: f64,
    /// Motion of target and distractors, in units of blob size.
    pub motion: SystemModelParams,
    pub distractors: usize,
    /// Per-frame change of the target's peak intensity (negative fades it
    /// toward the background).
    pub intensity_drift: f64,
    /// Gaussian blur sigma in pixels; 0 disables.
    pub blur_radius: f64,
    pub noise_std: f64,
    pub seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            frame_width: 128,
            frame_height: 128,
            n_frames: 100,
            blob_width: 20.0,
            blob_height: 20.0,
            motion: SystemModelParams::gaussian(8.0).expect("valid lambda"),
            distractors: 0,
            intensity_drift: 0.0,
            blur_radius: 0.0,
            noise_std: 0.0,
            seed: 0,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.n_frames == 0 {
            return Err(ScenarioError::ZeroFrames);
        }
        if !(self.blob_width > 0.0 && self.blob_height > 0.0)
            || !self.blob_width.is_finite()
            || !self.blob_height.is_finite()
        {
            return Err(ScenarioError::InvalidParameter("blob size"));
        }
        if self.blob_width > self.frame_width as f64 || self.blob_height > self.frame_height as f64 {
            return Err(ScenarioError::BlobTooLarge);
        }
        if !self.intensity_drift.is_finite() {
            return Err(ScenarioError::InvalidParameter("intensity_drift"));
        }
        if !(self.blur_radius >= 0.0 && self.blur_radius.is_finite()) {
            return Err(ScenarioError::InvalidParameter("blur_radius"));
        }
        if !(self.noise_std >= 0.0 && self.noise_std.is_finite()) {
            return Err(ScenarioError::InvalidParameter("noise_std"));
        }
        Ok(())
    }

    fn centered_box(&self) -> BoundingBox {
        BoundingBox::from_center(
            self.frame_width as f64 / 2.0,
            self.frame_height as f64 / 2.0,
            self.blob_width,
            self.blob_height,
        )
        .expect("validated blob size")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSequence {
    pub frames: Vec<Frame>,
    pub truth: Vec<BoundingBox>,
    /// Distractor boxes per frame.
    pub distractors: Vec<Vec<BoundingBox>>,
}

/// Mirrors `c` into `[lo, hi]`.
fn reflect(c: f64, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return lo;
    }
    let mut c = c;
    // A single huge step can overshoot more than once.
    for _ in 0..8 {
        if c < lo {
            c = 2.0 * lo - c;
        } else if c > hi {
            c = 2.0 * hi - c;
        } else {
            return c;
        }
    }
    c.clamp(lo, hi)
}

fn brownian_step<R: Rng + ?Sized>(
    prev: &BoundingBox,
    motion: &SystemModelParams,
    width: f64,
    height: f64,
    rng: &mut R,
) -> BoundingBox {
    let moved = prev.apply_displacement(motion.sample_increment(rng));
    let c = moved.center();
    let (hw, hh) = (prev.w() / 2.0, prev.h() / 2.0);
    let cx = reflect(c.cx, hw, width - hw);
    let cy = reflect(c.cy, hh, height - hh);
    if cx == c.cx && cy == c.cy {
        moved
    } else {
        BoundingBox::from_center(cx, cy, prev.w(), prev.h()).expect("size unchanged")
    }
}

fn path(start: BoundingBox, cfg: &ScenarioConfig, rng: &mut ChaCha8Rng) -> Vec<BoundingBox> {
    let (w, h) = (cfg.frame_width as f64, cfg.frame_height as f64);
    let mut out = Vec::with_capacity(cfg.n_frames);
    out.push(start);
    for t in 1..cfg.n_frames {
        let next = brownian_step(&out[t - 1], &cfg.motion, w, h, rng);
        out.push(next);
    }
    out
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Ground-truth target trajectory only, without rendering.
pub fn simulate_truth(cfg: &ScenarioConfig) -> Result<Vec<BoundingBox>, ScenarioError> {
    cfg.validate()?;
    let mut rng = rng_for(cfg.seed, STREAM_TARGET);
    Ok(path(cfg.centered_box(), cfg, &mut rng))
}

fn distractor_start(cfg: &ScenarioConfig, target: &BoundingBox, rng: &mut ChaCha8Rng) -> BoundingBox {
    let (fw, fh) = (cfg.frame_width as f64, cfg.frame_height as f64);
    let (bw, bh) = (cfg.blob_width, cfg.blob_height);
    let tc = target.center();
    let min_dist = 2.0 * bw.max(bh);
    let mut candidate = (bw / 2.0, bh / 2.0);
    let mut best = -1.0;
    for _ in 0..1000 {
        let cx = bw / 2.0 + rng.random::<f64>() * (fw - bw);
        let cy = bh / 2.0 + rng.random::<f64>() * (fh - bh);
        let dist = libm::hypot(cx - tc.cx, cy - tc.cy);
        if dist >= min_dist {
            candidate = (cx, cy);
            break;
        }
        // Frame too small for the separation: keep the farthest try.
        if dist > best {
            best = dist;
            candidate = (cx, cy);
        }
    }
    BoundingBox::from_center(candidate.0, candidate.1, bw, bh).expect("validated blob size")
}

fn render_blob(pixels: &mut [f64], width: usize, b: &BoundingBox, peak: f64) {
    let height = pixels.len() / width;
    let c = b.center();
    let (sx, sy) = (b.w() / 4.0, b.h() / 4.0);
    let x0 = libm::floor(c.cx - 3.0 * b.w()).max(0.0) as usize;
    let x1 = (libm::ceil(c.cx + 3.0 * b.w()).max(0.0) as usize).min(width);
    let y0 = libm::floor(c.cy - 3.0 * b.h()).max(0.0) as usize;
    let y1 = (libm::ceil(c.cy + 3.0 * b.h()).max(0.0) as usize).min(height);
    for y in y0..y1 {
        let dy = (y as f64 + 0.5 - c.cy) / sy;
        for x in x0..x1 {
            let dx = (x as f64 + 0.5 - c.cx) / sx;
            let v = BACKGROUND + (peak - BACKGROUND) * libm::exp(-0.5 * (dx * dx + dy * dy));
            let p = &mut pixels[y * width + x];
            if v > *p {
                *p = v;
            }
        }
    }
}

fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = libm::ceil(3.0 * sigma) as i64;
    let mut k: Vec<f64> = (-radius..=radius)
        .map(|i| libm::exp(-0.5 * (i as f64 / sigma) * (i as f64 / sigma)))
        .collect();
    let s: f64 = k.iter().sum();
    for v in &mut k {
        *v /= s;
    }
    k
}

fn blur(pixels: &[f64], width: usize, height: usize, sigma: f64) -> Vec<f64> {
    let k = gaussian_kernel(sigma);
    let r = (k.len() / 2) as i64;
    let clampi = |v: i64, n: usize| v.clamp(0, n as i64 - 1) as usize;
    let mut tmp = alloc::vec![0.0; pixels.len()];
    for y in 0..height {
        for x in 0..width {
            tmp[y * width + x] = k
                .iter()
                .enumerate()
                .map(|(i, w)| w * pixels[y * width + clampi(x as i64 + i as i64 - r, width)])
                .sum();
        }
    }
    let mut out = alloc::vec![0.0; pixels.len()];
    for y in 0..height {
        for x in 0..width {
            out[y * width + x] = k
                .iter()
                .enumerate()
                .map(|(i, w)| w * tmp[clampi(y as i64 + i as i64 - r, height) * width + x])
                .sum();
        }
    }
    out
}

/// Renders the full sequence. Bit-deterministic for a fixed config.
pub fn generate(cfg: &ScenarioConfig) -> Result<SyntheticSequence, ScenarioError> {
    let truth = simulate_truth(cfg)?;

    let mut drng = rng_for(cfg.seed, STREAM_DISTRACTORS);
    let distractor_paths: Vec<Vec<BoundingBox>> = (0..cfg.distractors)
        .map(|_| {
            let start = distractor_start(cfg, &truth[0], &mut drng);
            path(start, cfg, &mut drng)
        })
        .collect();

    let mut nrng = rng_for(cfg.seed, STREAM_NOISE);
    let (w, h) = (cfg.frame_width, cfg.frame_height);
    let mut frames = Vec::with_capacity(cfg.n_frames);
    let mut distractors = Vec::with_capacity(cfg.n_frames);
    for (t, target) in truth.iter().enumerate() {
        let mut pixels = alloc::vec![BACKGROUND; w * h];
        let ds: Vec<BoundingBox> = distractor_paths.iter().map(|p| p[t]).collect();
        for d in &ds {
            render_blob(&mut pixels, w, d, PEAK);
        }
        let peak = (PEAK + cfg.intensity_drift * t as f64).clamp(BACKGROUND, 1.0);
        render_blob(&mut pixels, w, target, peak);
        if cfg.blur_radius > 0.0 {
            pixels = blur(&pixels, w, h, cfg.blur_radius);
        }
        if cfg.noise_std > 0.0 {
            for p in &mut pixels {
                let z: f64 = StandardNormal.sample(&mut nrng);
                *p += cfg.noise_std * z;
            }
        }
        for p in &mut pixels {
            *p = p.clamp(0.0, 1.0);
        }
        frames.push(Frame::new(w, h, pixels).expect("pixels clamped to [0, 1]"));
        distractors.push(ds);
    }
    Ok(SyntheticSequence { frames, truth, distractors })
}
