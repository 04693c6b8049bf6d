//! Single-object tracking benchmark measures: center location error
//! precision, overlap success and normalized precision.
//!
//! All threshold comparisons are strict. Grids are fixed: 21 overlap
//! thresholds `{0, 0.05, …, 1}`, 101 normalized-error thresholds
//! `{0, 0.005, …, 0.5}`, precision reported at 20 px.

use alloc::vec::Vec;
use core::fmt;

use crate::geometry::BoundingBox;

pub const PRECISION_THRESHOLD_PX: f64 = 20.0;
pub const SUCCESS_STEPS: usize = 20;
pub const NORM_PRECISION_STEPS: usize = 100;
pub const NORM_PRECISION_MAX: f64 = 0.5;
/// Pixel thresholds of the precision curve: `0, 1, …, 50`.
pub const PRECISION_CURVE_MAX_PX: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricsError {
    Empty,
    LengthMismatch { predictions: usize, truths: usize },
}

impl fmt::Display for MetricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricsError::Empty => f.write_str("no frames to evaluate"),
            MetricsError::LengthMismatch { predictions, truths } => {
                write!(f, "{predictions} predictions but {truths} ground-truth boxes")
            }
        }
    }
}

impl core::error::Error for MetricsError {}

/// Threshold sweep: `values[i]` is the measure at `thresholds[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalCurve {
    pub thresholds: Vec<f64>,
    pub values: Vec<f64>,
}

impl EvalCurve {
    /// Mean of the curve values (area under the curve on a uniform grid).
    pub fn auc(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Value at the first threshold equal to `t`, if on the grid.
    pub fn value_at(&self, t: f64) -> Option<f64> {
        self.thresholds.iter().position(|x| *x == t).map(|i| self.values[i])
    }
}

/// Which box size normalizes the center error in normalized precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormReference {
    #[default]
    GroundTruth,
    Predicted,
}

/// Center location error in pixels.
pub fn cle(pred: &BoundingBox, truth: &BoundingBox) -> f64 {
    let (p, t) = (pred.center(), truth.center());
    libm::hypot(p.cx - t.cx, p.cy - t.cy)
}

/// Intersection over union.
pub fn overlap_ratio(pred: &BoundingBox, truth: &BoundingBox) -> f64 {
    if pred == truth {
        return 1.0;
    }
    let inter = pred.intersection_area(truth);
    let union = pred.area() + truth.area() - inter;
    (inter / union).clamp(0.0, 1.0)
}

fn fraction(values: &[f64], pred: impl Fn(f64) -> bool) -> f64 {
    values.iter().filter(|v| pred(**v)).count() as f64 / values.len() as f64
}

/// Fraction of errors strictly below `threshold`.
pub fn precision_at(cles: &[f64], threshold: f64) -> Result<f64, MetricsError> {
    if cles.is_empty() {
        return Err(MetricsError::Empty);
    }
    Ok(fraction(cles, |c| c < threshold))
}

pub fn precision_curve(cles: &[f64]) -> Result<EvalCurve, MetricsError> {
    if cles.is_empty() {
        return Err(MetricsError::Empty);
    }
    let thresholds: Vec<f64> = (0..=PRECISION_CURVE_MAX_PX).map(|t| t as f64).collect();
    let values = thresholds.iter().map(|t| fraction(cles, |c| c < *t)).collect();
    Ok(EvalCurve { thresholds, values })
}

pub fn success_curve(ors: &[f64]) -> Result<EvalCurve, MetricsError> {
    if ors.is_empty() {
        return Err(MetricsError::Empty);
    }
    let thresholds: Vec<f64> = (0..=SUCCESS_STEPS).map(|k| k as f64 / SUCCESS_STEPS as f64).collect();
    let values = thresholds.iter().map(|t| fraction(ors, |o| o > *t)).collect();
    Ok(EvalCurve { thresholds, values })
}

/// Mean over the 21-point overlap grid of the fraction of overlaps strictly
/// above each threshold.
pub fn success_auc(ors: &[f64]) -> Result<f64, MetricsError> {
    success_curve(ors).map(|c| c.auc())
}

fn normalized_errors(
    preds: &[BoundingBox],
    truths: &[BoundingBox],
    reference: NormReference,
) -> Result<Vec<f64>, MetricsError> {
    if preds.len() != truths.len() {
        return Err(MetricsError::LengthMismatch { predictions: preds.len(), truths: truths.len() });
    }
    if preds.is_empty() {
        return Err(MetricsError::Empty);
    }
    Ok(preds
        .iter()
        .zip(truths)
        .map(|(p, t)| {
            let (pc, tc) = (p.center(), t.center());
            let norm = match reference {
                NormReference::GroundTruth => t,
                NormReference::Predicted => p,
            };
            libm::hypot((pc.cx - tc.cx) / norm.w(), (pc.cy - tc.cy) / norm.h())
        })
        .collect())
}

pub fn norm_precision_curve(
    preds: &[BoundingBox],
    truths: &[BoundingBox],
    reference: NormReference,
) -> Result<EvalCurve, MetricsError> {
    let errors = normalized_errors(preds, truths, reference)?;
    let thresholds: Vec<f64> = (0..=NORM_PRECISION_STEPS)
        .map(|k| k as f64 * NORM_PRECISION_MAX / NORM_PRECISION_STEPS as f64)
        .collect();
    let values = thresholds.iter().map(|t| fraction(&errors, |e| e < *t)).collect();
    Ok(EvalCurve { thresholds, values })
}

/// Area under the normalized-precision curve on `[0, 0.5]`, normalizing
/// by the ground-truth box size.
pub fn norm_precision_auc(preds: &[BoundingBox], truths: &[BoundingBox]) -> Result<f64, MetricsError> {
    norm_precision_curve(preds, truths, NormReference::GroundTruth).map(|c| c.auc())
}

/// Headline numbers for one sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequenceMetrics {
    pub precision_20: f64,
    pub success_auc: f64,
    pub norm_precision_auc: f64,
}

impl SequenceMetrics {
    /// Equal-weight mean.
    pub fn mean<'a>(items: impl IntoIterator<Item = &'a SequenceMetrics>) -> Option<SequenceMetrics> {
        let mut n = 0usize;
        let mut acc = SequenceMetrics { precision_20: 0.0, success_auc: 0.0, norm_precision_auc: 0.0 };
        for m in items {
            n += 1;
            acc.precision_20 += m.precision_20;
            acc.success_auc += m.success_auc;
            acc.norm_precision_auc += m.norm_precision_auc;
        }
        (n > 0).then(|| SequenceMetrics {
            precision_20: acc.precision_20 / n as f64,
            success_auc: acc.success_auc / n as f64,
            norm_precision_auc: acc.norm_precision_auc / n as f64,
        })
    }
}

/// All curves for one sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceReport {
    pub summary: SequenceMetrics,
    pub precision: EvalCurve,
    pub success: EvalCurve,
    pub norm_precision: EvalCurve,
}

pub fn evaluate(
    preds: &[BoundingBox],
    truths: &[BoundingBox],
    reference: NormReference,
) -> Result<SequenceReport, MetricsError> {
    if preds.len() != truths.len() {
        return Err(MetricsError::LengthMismatch { predictions: preds.len(), truths: truths.len() });
    }
    let cles: Vec<f64> = preds.iter().zip(truths).map(|(p, t)| cle(p, t)).collect();
    let ors: Vec<f64> = preds.iter().zip(truths).map(|(p, t)| overlap_ratio(p, t)).collect();
    let precision = precision_curve(&cles)?;
    let success = success_curve(&ors)?;
    let norm_precision = norm_precision_curve(preds, truths, reference)?;
    Ok(SequenceReport {
        summary: SequenceMetrics {
            precision_20: precision_at(&cles, PRECISION_THRESHOLD_PX)?,
            success_auc: success.auc(),
            norm_precision_auc: norm_precision.auc(),
        },
        precision,
        success,
        norm_precision,
    })
}
