//! Observation model: candidate scoring and the weighted softmax likelihood.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::geometry::{BoundingBox, Displacement};
use crate::metrics::overlap_ratio;

#[derive(Debug, Clone, PartialEq)]
pub enum ObservationError {
    /// Pixel buffer does not match `width * height`, or a dimension is zero.
    BadDimensions { width: usize, height: usize, len: usize },
    /// Pixel outside `[0, 1]` or not finite.
    IntensityOutOfRange { index: usize },
    /// The box does not overlap the frame.
    OutOfBounds,
    EmptyCandidates,
    LengthMismatch { scores: usize, weights: usize },
    InvalidSigma,
    /// Template has zero variance.
    ConstantTemplate,
}

impl fmt::Display for ObservationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObservationError::BadDimensions { width, height, len } => {
                write!(f, "frame {width}x{height} cannot hold {len} pixels")
            }
            ObservationError::IntensityOutOfRange { index } => {
                write!(f, "pixel {index} is outside [0, 1]")
            }
            ObservationError::OutOfBounds => f.write_str("box lies entirely outside the frame"),
            ObservationError::EmptyCandidates => f.write_str("candidate list is empty"),
            ObservationError::LengthMismatch { scores, weights } => {
                write!(f, "{scores} scores but {weights} penalty weights")
            }
            ObservationError::InvalidSigma => f.write_str("sigma_alpha must be positive"),
            ObservationError::ConstantTemplate => f.write_str("template has zero variance"),
        }
    }
}

impl core::error::Error for ObservationError {}

/// Grayscale image with intensities in `[0, 1]`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl Frame {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self, ObservationError> {
        if width == 0 || height == 0 || pixels.len() != width * height {
            return Err(ObservationError::BadDimensions { width, height, len: pixels.len() });
        }
        if let Some(index) = pixels.iter().position(|p| !(0.0..=1.0).contains(p)) {
            return Err(ObservationError::IntensityOutOfRange { index });
        }
        Ok(Frame { width, height, pixels })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self, ObservationError> {
        Frame::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.pixels[y * self.width + x]
    }

    /// Bilinear sample at continuous pixel coordinates, where pixel `(i, j)`
    /// has its center at `(i + 0.5, j + 0.5)`. Coordinates outside the frame
    /// are clamped to the border.
    pub fn sample_bilinear(&self, x: f64, y: f64) -> f64 {
        let fx = (x - 0.5).clamp(0.0, (self.width - 1) as f64);
        let fy = (y - 0.5).clamp(0.0, (self.height - 1) as f64);
        let x0 = fx as usize;
        let y0 = fy as usize;
        let x1 = (x0 + 1).min(self.width - 1);
        let y1 = (y0 + 1).min(self.height - 1);
        let tx = fx - x0 as f64;
        let ty = fy - y0 as f64;
        let top = self.get(x0, y0) * (1.0 - tx) + self.get(x1, y0) * tx;
        let bottom = self.get(x0, y1) * (1.0 - tx) + self.get(x1, y1) * tx;
        top * (1.0 - ty) + bottom * ty
    }

    fn overlaps(&self, b: &BoundingBox) -> bool {
        b.x() < self.width as f64 && b.y() < self.height as f64 && b.x() + b.w() > 0.0 && b.y() + b.h() > 0.0
    }

    /// Crops `b` and resamples it bilinearly to `out_w × out_h`.
    pub fn crop_resampled(&self, b: &BoundingBox, out_w: usize, out_h: usize) -> Result<Frame, ObservationError> {
        if !self.overlaps(b) {
            return Err(ObservationError::OutOfBounds);
        }
        if out_w == 0 || out_h == 0 {
            return Err(ObservationError::BadDimensions { width: out_w, height: out_h, len: 0 });
        }
        // Same arithmetic as `sample_bilinear`, with the per-column taps
        // hoisted out of the row loop.
        let taps = |origin: f64, step: f64, n: usize, limit: usize| -> Vec<(usize, usize, f64)> {
            (0..n)
                .map(|i| {
                    let f = (origin + (i as f64 + 0.5) * step - 0.5).clamp(0.0, (limit - 1) as f64);
                    let i0 = f as usize;
                    (i0, (i0 + 1).min(limit - 1), f - i0 as f64)
                })
                .collect()
        };
        let cols = taps(b.x(), b.w() / out_w as f64, out_w, self.width);
        let rows = taps(b.y(), b.h() / out_h as f64, out_h, self.height);
        let mut pixels = Vec::with_capacity(out_w * out_h);
        for &(y0, y1, ty) in &rows {
            let r0 = &self.pixels[y0 * self.width..(y0 + 1) * self.width];
            let r1 = &self.pixels[y1 * self.width..(y1 + 1) * self.width];
            for &(x0, x1, tx) in &cols {
                let top = r0[x0] * (1.0 - tx) + r0[x1] * tx;
                let bottom = r1[x0] * (1.0 - tx) + r1[x1] * tx;
                pixels.push(top * (1.0 - ty) + bottom * ty);
            }
        }
        Ok(Frame { width: out_w, height: out_h, pixels })
    }
}

/// Classifier output `(v1, v2)` with `v1 + v2 = 1`; `v1` is the response.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseScore {
    v1: f64,
    v2: f64,
}

impl ResponseScore {
    /// Builds a score from the foreground probability, clamped to `[0, 1]`.
    pub fn from_foreground(v1: f64) -> Self {
        let v1 = if v1.is_nan() { 0.0 } else { v1.clamp(0.0, 1.0) };
        ResponseScore { v1, v2: 1.0 - v1 }
    }

    pub fn v1(&self) -> f64 {
        self.v1
    }

    pub fn v2(&self) -> f64 {
        self.v2
    }
}

/// Candidate scorer standing in for a learned foreground/background
/// classifier.
///
/// Implementations must be deterministic in `(frame, candidate, template
/// state)`. `score` is never called concurrently with `update_template`.
pub trait Scorer {
    /// Called once per frame before any candidate is scored. `frame_index`
    /// is 1-based.
    fn prepare(&mut self, _frame_index: usize, _frame: &Frame) {}

    fn score(&self, frame: &Frame, candidate: &BoundingBox) -> Result<ResponseScore, ObservationError>;

    /// Blends the appearance at `estimate` into the template with weight
    /// `blend`.
    fn update_template(&mut self, frame: &Frame, estimate: &BoundingBox, blend: f64) -> Result<(), ObservationError>;
}

impl<S: Scorer + ?Sized> Scorer for &mut S {
    fn prepare(&mut self, frame_index: usize, frame: &Frame) {
        (**self).prepare(frame_index, frame)
    }

    fn score(&self, frame: &Frame, candidate: &BoundingBox) -> Result<ResponseScore, ObservationError> {
        (**self).score(frame, candidate)
    }

    fn update_template(&mut self, frame: &Frame, estimate: &BoundingBox, blend: f64) -> Result<(), ObservationError> {
        (**self).update_template(frame, estimate, blend)
    }
}

/// Penalty weights `α_i`, one per candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct PenaltyWeights(pub Vec<f64>);

impl PenaltyWeights {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub const DEFAULT_SIGMA_ALPHA: f64 = 0.5;

/// `α_i = exp(-|d_i|² / (2 σ_α²))`: 1 at the previous center, decaying
/// with distance.
pub fn penalty_weights(candidates: &[Displacement], sigma_alpha: f64) -> Result<PenaltyWeights, ObservationError> {
    if candidates.is_empty() {
        return Err(ObservationError::EmptyCandidates);
    }
    if !(sigma_alpha > 0.0 && sigma_alpha.is_finite()) {
        return Err(ObservationError::InvalidSigma);
    }
    let denom = 2.0 * sigma_alpha * sigma_alpha;
    Ok(PenaltyWeights(
        candidates
            .iter()
            .map(|d| libm::exp(-(d.dx * d.dx + d.dy * d.dy) / denom))
            .collect(),
    ))
}

/// `p_i = exp(α_i v_i) / Σ_j exp(α_j v_j)`.
pub fn weighted_softmax(scores: &[f64], alpha: &PenaltyWeights) -> Result<Vec<f64>, ObservationError> {
    if scores.len() != alpha.len() {
        return Err(ObservationError::LengthMismatch { scores: scores.len(), weights: alpha.len() });
    }
    if scores.is_empty() {
        return Err(ObservationError::EmptyCandidates);
    }
    let logits: Vec<f64> = scores.iter().zip(alpha.as_slice()).map(|(v, a)| a * v).collect();
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out: Vec<f64> = logits.iter().map(|l| libm::exp(l - max)).collect();
    let total: f64 = out.iter().sum();
    for p in &mut out {
        *p /= total;
    }
    Ok(out)
}

/// Zero-normalized cross-correlation outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NccScore {
    pub response: ResponseScore,
    /// The crop had zero variance; `response.v1()` is 0.5.
    pub degenerate: bool,
}

fn mean_and_norm(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>();
    (mean, libm::sqrt(ss))
}

const VARIANCE_FLOOR: f64 = 1e-12;

/// ZNCC of `patch` against `template` (same dimensions), mapped to
/// `v1 = (ρ + 1) / 2`.
pub fn zncc_response(template: &Frame, patch: &Frame) -> NccScore {
    debug_assert_eq!(template.pixels.len(), patch.pixels.len());
    let (mt, nt) = mean_and_norm(&template.pixels);
    let (mp, np) = mean_and_norm(&patch.pixels);
    if np <= VARIANCE_FLOOR || nt <= VARIANCE_FLOOR {
        return NccScore { response: ResponseScore::from_foreground(0.5), degenerate: true };
    }
    let cross: f64 = template
        .pixels
        .iter()
        .zip(&patch.pixels)
        .map(|(t, p)| (t - mt) * (p - mp))
        .sum();
    let rho = (cross / (nt * np)).clamp(-1.0, 1.0);
    NccScore { response: ResponseScore::from_foreground((rho + 1.0) / 2.0), degenerate: false }
}

/// Crops `b` from `frame` at the template's resolution and scores it.
pub fn ncc_score(template: &Frame, frame: &Frame, b: &BoundingBox) -> Result<NccScore, ObservationError> {
    let patch = frame.crop_resampled(b, template.width, template.height)?;
    Ok(zncc_response(template, &patch))
}

pub const DEFAULT_TEMPLATE_SIZE: usize = 32;

/// Template-matching scorer.
#[derive(Debug, Clone)]
pub struct NccScorer {
    template: Frame,
}

impl NccScorer {
    pub fn new(template: Frame) -> Result<Self, ObservationError> {
        let (_, norm) = mean_and_norm(&template.pixels);
        if norm <= VARIANCE_FLOOR {
            return Err(ObservationError::ConstantTemplate);
        }
        Ok(NccScorer { template })
    }

    /// Template cropped from `frame` at `b`, resampled to `size × size`.
    pub fn from_frame(frame: &Frame, b: &BoundingBox, size: usize) -> Result<Self, ObservationError> {
        NccScorer::new(frame.crop_resampled(b, size, size)?)
    }

    pub fn template(&self) -> &Frame {
        &self.template
    }
}

impl Scorer for NccScorer {
    fn score(&self, frame: &Frame, candidate: &BoundingBox) -> Result<ResponseScore, ObservationError> {
        Ok(ncc_score(&self.template, frame, candidate)?.response)
    }

    fn update_template(&mut self, frame: &Frame, estimate: &BoundingBox, blend: f64) -> Result<(), ObservationError> {
        let crop = frame.crop_resampled(estimate, self.template.width, self.template.height)?;
        let eta = blend.clamp(0.0, 1.0);
        let blended: Vec<f64> = self
            .template
            .pixels
            .iter()
            .zip(&crop.pixels)
            .map(|(old, new)| (1.0 - eta) * old + eta * new)
            .collect();
        let (_, norm) = mean_and_norm(&blended);
        // Keep the old template rather than adopt a flat one.
        if norm > VARIANCE_FLOOR {
            self.template.pixels = blended;
        }
        Ok(())
    }
}

/// `v1 = IoU(truth, candidate)`.
pub fn oracle_score(truth: &BoundingBox, candidate: &BoundingBox) -> ResponseScore {
    ResponseScore::from_foreground(overlap_ratio(candidate, truth))
}

/// Perfect classifier backed by ground truth, one box per frame.
#[derive(Debug, Clone)]
pub struct OracleScorer {
    truth: Vec<BoundingBox>,
    current: usize,
}

impl OracleScorer {
    pub fn new(truth: Vec<BoundingBox>) -> Self {
        OracleScorer { truth, current: 0 }
    }
}

impl Scorer for OracleScorer {
    fn prepare(&mut self, frame_index: usize, _frame: &Frame) {
        self.current = frame_index.saturating_sub(1).min(self.truth.len().saturating_sub(1));
    }

    fn score(&self, _frame: &Frame, candidate: &BoundingBox) -> Result<ResponseScore, ObservationError> {
        match self.truth.get(self.current) {
            Some(t) => Ok(oracle_score(t, candidate)),
            None => Ok(ResponseScore::from_foreground(0.0)),
        }
    }

    fn update_template(&mut self, _frame: &Frame, _estimate: &BoundingBox, _blend: f64) -> Result<(), ObservationError> {
        Ok(())
    }
}

/// When and how strongly to refresh the scorer's template.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpdatePolicy {
    /// Cadence `K`: update only on frames with `index % K == 0`.
    pub interval: usize,
    /// Confidence gate `τ`.
    pub min_confidence: f64,
    /// Blend rate `η`.
    pub blend: f64,
}

impl Default for UpdatePolicy {
    fn default() -> Self {
        UpdatePolicy { interval: 20, min_confidence: 0.6, blend: 0.25 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemplateUpdate {
    Updated,
    SkippedCadence,
    SkippedConfidence,
}

impl TemplateUpdate {
    pub fn updated(&self) -> bool {
        matches!(self, TemplateUpdate::Updated)
    }
}

pub fn maybe_update_template<S: Scorer + ?Sized>(
    scorer: &mut S,
    frame: &Frame,
    estimate: &BoundingBox,
    confidence: f64,
    frame_index: usize,
    policy: &UpdatePolicy,
) -> Result<TemplateUpdate, ObservationError> {
    if policy.interval == 0 || !frame_index.is_multiple_of(policy.interval) {
        return Ok(TemplateUpdate::SkippedCadence);
    }
    if !(confidence >= policy.min_confidence) {
        return Ok(TemplateUpdate::SkippedConfidence);
    }
    scorer.update_template(frame, estimate, policy.blend)?;
    Ok(TemplateUpdate::Updated)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bb(x: f64, y: f64, w: f64, h: f64) -> BoundingBox {
        BoundingBox::new(x, y, w, h).unwrap()
    }

    fn gradient_frame(w: usize, h: usize) -> Frame {
        let pixels = (0..w * h)
            .map(|i| {
                let (x, y) = ((i % w) as f64, (i / w) as f64);
                0.5 + 0.4 * libm::sin(0.7 * x) * libm::cos(0.45 * y)
            })
            .collect();
        Frame::new(w, h, pixels).unwrap()
    }

    #[test]
    fn frame_validation() {
        assert!(matches!(Frame::new(2, 2, vec![0.0; 3]), Err(ObservationError::BadDimensions { .. })));
        assert!(matches!(Frame::new(0, 2, vec![]), Err(ObservationError::BadDimensions { .. })));
        assert_eq!(Frame::new(1, 2, vec![0.0, 1.5]), Err(ObservationError::IntensityOutOfRange { index: 1 }));
    }

    #[test]
    fn crop_at_native_resolution_is_identity() {
        let f = gradient_frame(12, 9);
        let c = f.crop_resampled(&bb(0.0, 0.0, 12.0, 9.0), 12, 9).unwrap();
        for (a, b) in c.pixels().iter().zip(f.pixels()) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(f.crop_resampled(&bb(20.0, 0.0, 4.0, 4.0), 4, 4), Err(ObservationError::OutOfBounds));
    }

    #[test]
    fn penalty_examples() {
        assert_eq!(penalty_weights(&[Displacement::ZERO], 0.3).unwrap().0, vec![1.0]);
        let s = 0.5;
        let w = penalty_weights(&[Displacement::ZERO, Displacement::new(s, 0.0)], s).unwrap();
        assert_eq!(w.0[0], 1.0);
        assert!((w.0[1] - libm::exp(-0.5)).abs() < 1e-15);
        assert!((w.0[1] - 0.60653).abs() < 1e-5);
        let w = penalty_weights(&[Displacement::new(1.0, 0.0), Displacement::new(-1.0, 0.0)], 0.8).unwrap();
        assert_eq!(w.0[0], w.0[1]);
        assert_eq!(penalty_weights(&[], 0.5), Err(ObservationError::EmptyCandidates));
        assert_eq!(penalty_weights(&[Displacement::ZERO], 0.0), Err(ObservationError::InvalidSigma));
    }

    #[test]
    fn softmax_examples() {
        let e = core::f64::consts::E;
        let p = weighted_softmax(&[0.5, 0.5], &PenaltyWeights(vec![1.0, 1.0])).unwrap();
        assert_eq!(p, vec![0.5, 0.5]);
        let p = weighted_softmax(&[1.0, 0.0], &PenaltyWeights(vec![1.0, 1.0])).unwrap();
        assert!((p[0] - e / (e + 1.0)).abs() < 1e-15);
        assert!((p[1] - 1.0 / (e + 1.0)).abs() < 1e-15);
        assert!((p[0] - 0.73106).abs() < 1e-5 && (p[1] - 0.26894).abs() < 1e-5);
        let p = weighted_softmax(&[0.5, 0.5], &PenaltyWeights(vec![2.0, 1.0])).unwrap();
        let expect = e / (e + libm::exp(0.5));
        assert!((p[0] - expect).abs() < 1e-15);
        assert!((p[0] - 0.62246).abs() < 1e-5 && (p[1] - 0.37754).abs() < 1e-5);
        assert_eq!(
            weighted_softmax(&[0.5], &PenaltyWeights(vec![1.0, 1.0])),
            Err(ObservationError::LengthMismatch { scores: 1, weights: 2 })
        );
    }

    #[test]
    fn ncc_examples() {
        let t = gradient_frame(16, 16);
        let whole = bb(0.0, 0.0, 16.0, 16.0);
        let same = ncc_score(&t, &t, &whole).unwrap();
        assert!((same.response.v1() - 1.0).abs() < 1e-12 && !same.degenerate);

        let inverted = Frame::new(16, 16, t.pixels().iter().map(|p| 1.0 - p).collect()).unwrap();
        let inv = ncc_score(&t, &inverted, &whole).unwrap();
        assert!(inv.response.v1().abs() < 1e-12);

        let affine = Frame::new(16, 16, t.pixels().iter().map(|p| 0.5 * p + 0.2).collect()).unwrap();
        let aff = ncc_score(&t, &affine, &whole).unwrap();
        assert!((aff.response.v1() - 1.0).abs() < 1e-12);

        let flat = Frame::filled(16, 16, 0.3).unwrap();
        let deg = ncc_score(&t, &flat, &whole).unwrap();
        assert!(deg.degenerate);
        assert_eq!(deg.response.v1(), 0.5);

        assert_eq!(ncc_score(&t, &t, &bb(-40.0, 0.0, 10.0, 10.0)), Err(ObservationError::OutOfBounds));
        assert!(matches!(NccScorer::new(flat), Err(ObservationError::ConstantTemplate)));
    }

    #[test]
    fn oracle_examples() {
        let t = bb(0.0, 0.0, 2.0, 2.0);
        assert_eq!(oracle_score(&t, &t).v1(), 1.0);
        assert_eq!(oracle_score(&t, &bb(5.0, 5.0, 2.0, 2.0)).v1(), 0.0);
        let s = oracle_score(&t, &bb(1.0, 0.0, 2.0, 2.0));
        assert!((s.v1() - 1.0 / 3.0).abs() < 1e-15);
        assert!((s.v1() + s.v2() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn oracle_scorer_tracks_frame_index() {
        let truth = vec![bb(0.0, 0.0, 4.0, 4.0), bb(10.0, 0.0, 4.0, 4.0)];
        let mut o = OracleScorer::new(truth.clone());
        let f = Frame::filled(2, 2, 0.0).unwrap();
        o.prepare(2, &f);
        assert_eq!(o.score(&f, &truth[1]).unwrap().v1(), 1.0);
        assert_eq!(o.score(&f, &truth[0]).unwrap().v1(), 0.0);
    }

    #[test]
    fn update_policy_gates() {
        let f = gradient_frame(32, 32);
        let b = bb(4.0, 4.0, 16.0, 16.0);
        let policy = UpdatePolicy { interval: 20, min_confidence: 0.6, blend: 0.25 };
        let mut s = NccScorer::from_frame(&f, &bb(0.0, 0.0, 16.0, 16.0), 8).unwrap();
        let before = s.template().clone();
        assert_eq!(maybe_update_template(&mut s, &f, &b, 0.9, 19, &policy).unwrap(), TemplateUpdate::SkippedCadence);
        assert_eq!(maybe_update_template(&mut s, &f, &b, 0.3, 20, &policy).unwrap(), TemplateUpdate::SkippedConfidence);
        assert_eq!(s.template(), &before);
        assert_eq!(maybe_update_template(&mut s, &f, &b, 0.9, 20, &policy).unwrap(), TemplateUpdate::Updated);
        let crop = f.crop_resampled(&b, 8, 8).unwrap();
        for ((new, old), c) in s.template().pixels().iter().zip(before.pixels()).zip(crop.pixels()) {
            assert!((new - (0.75 * old + 0.25 * c)).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn softmax_is_probability_vector(v in proptest::collection::vec((0.0..1.0f64, 0.001..1.0f64), 1..64)) {
            let (scores, alpha): (Vec<f64>, Vec<f64>) = v.into_iter().unzip();
            let p = weighted_softmax(&scores, &PenaltyWeights(alpha)).unwrap();
            prop_assert!(p.iter().all(|x| *x > 0.0));
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn softmax_preserves_order_at_equal_alpha(v in proptest::collection::vec(0.0..1.0f64, 2..32), a in 0.01..1.0f64) {
            let p = weighted_softmax(&v, &PenaltyWeights(vec![a; v.len()])).unwrap();
            for i in 0..v.len() {
                for j in 0..v.len() {
                    if v[i] > v[j] {
                        prop_assert!(p[i] > p[j]);
                    }
                }
            }
        }

        #[test]
        fn ncc_affine_invariance(a in 0.05..1.0f64, b in 0.0..0.4f64, ox in 0.0..8.0f64, oy in 0.0..8.0f64) {
            let frame = gradient_frame(24, 24);
            let template = gradient_frame(10, 10);
            let bx = bb(ox, oy, 12.0, 12.0);
            let mapped = Frame::new(24, 24, frame.pixels().iter().map(|p| (a * p + b).min(1.0)).collect()).unwrap();
            // Keep the map affine on the whole frame.
            prop_assume!(frame.pixels().iter().all(|p| a * p + b <= 1.0));
            let r0 = ncc_score(&template, &frame, &bx).unwrap().response.v1();
            let r1 = ncc_score(&template, &mapped, &bx).unwrap().response.v1();
            prop_assert!((r0 - r1).abs() < 1e-9);
        }

        #[test]
        fn oracle_self_score_is_one(x in -100.0..100.0f64, y in -100.0..100.0f64, w in 0.5..50.0f64, h in 0.5..50.0f64) {
            let t = bb(x, y, w, h);
            prop_assert_eq!(oracle_score(&t, &t).v1(), 1.0);
        }

        #[test]
        fn penalty_depends_only_on_radius(r in 0.0..3.0f64, theta in 0.0..core::f64::consts::TAU, sigma in 0.1..2.0f64) {
            let a = penalty_weights(&[Displacement::new(r, 0.0)], sigma).unwrap().0[0];
            let b = penalty_weights(&[Displacement::new(r * libm::cos(theta), r * libm::sin(theta))], sigma).unwrap().0[0];
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}
