//! Discrete Bayes recursion and the tracking step built on it.
//!
//! [`predict`] and [`update`] implement the generic recursion over an
//! explicit finite state set:
//!
//! ```text
//! p(s_t | z_1:t) = 1/Z_t · p(z_t | s_t) · Σ_{s_t-1} p(s_t | s_t-1) p(s_t-1 | z_1:t-1)
//! ```
//!
//! [`dbf_step`] specializes it to tracking. Candidates are Monte-Carlo draws
//! from the motion prior, and because Brownian increments are independent
//! the prediction is the prior itself.

use alloc::vec::Vec;
use core::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{BoundingBox, Displacement};
use crate::observation::{
    maybe_update_template, penalty_weights, weighted_softmax, Frame, ObservationError, PenaltyWeights, Scorer,
    TemplateUpdate, UpdatePolicy, DEFAULT_SIGMA_ALPHA,
};
use crate::system_model::{sample_candidates_with, SystemModelError, SystemModelParams};

#[derive(Debug, Clone, PartialEq)]
pub enum FilterError {
    EmptyBelief,
    LengthMismatch { expected: usize, got: usize },
    /// Negative, NaN or infinite weight or likelihood.
    InvalidWeight { index: usize },
    /// Prediction put zero mass everywhere.
    DegenerateBelief,
    /// `Z_t = 0`: likelihood and prediction have disjoint support.
    TotalConflict,
    EmptySequence,
    InvalidConfig(&'static str),
    Observation(ObservationError),
    SystemModel(SystemModelError),
}

impl fmt::Display for FilterError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterError::EmptyBelief => f.write_str("belief has no states"),
            FilterError::LengthMismatch { expected, got } => write!(f, "expected {expected} values, got {got}"),
            FilterError::InvalidWeight { index } => write!(f, "weight {index} is negative or not finite"),
            FilterError::DegenerateBelief => f.write_str("predicted belief has zero total mass"),
            FilterError::TotalConflict => f.write_str("normalizer is zero (likelihood conflicts with prediction)"),
            FilterError::EmptySequence => f.write_str("sequence has no frames"),
            FilterError::InvalidConfig(what) => write!(f, "invalid filter configuration: {what}"),
            FilterError::Observation(e) => write!(f, "observation: {e}"),
            FilterError::SystemModel(e) => write!(f, "system model: {e}"),
        }
    }
}

impl core::error::Error for FilterError {}

impl From<ObservationError> for FilterError {
    fn from(e: ObservationError) -> Self {
        FilterError::Observation(e)
    }
}

impl From<SystemModelError> for FilterError {
    fn from(e: SystemModelError) -> Self {
        FilterError::SystemModel(e)
    }
}

/// Size used to break exact MAP ties: smaller wins.
pub trait StateMagnitude {
    fn magnitude(&self) -> f64;
}

impl StateMagnitude for Displacement {
    fn magnitude(&self) -> f64 {
        Displacement::magnitude(self)
    }
}

/// Abstract state ids carry no geometry; ties fall through to the index.
impl StateMagnitude for usize {
    fn magnitude(&self) -> f64 {
        0.0
    }
}

/// Normalized weights over a finite state set.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteBelief<S> {
    states: Vec<S>,
    weights: Vec<f64>,
}

fn normalize(mut weights: Vec<f64>) -> Result<Vec<f64>, FilterError> {
    if let Some(index) = weights.iter().position(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(FilterError::InvalidWeight { index });
    }
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return Err(FilterError::DegenerateBelief);
    }
    for w in &mut weights {
        *w /= total;
    }
    Ok(weights)
}

impl<S> DiscreteBelief<S> {
    /// Builds a belief, normalizing `weights` to sum to one.
    pub fn new(states: Vec<S>, weights: Vec<f64>) -> Result<Self, FilterError> {
        if states.is_empty() {
            return Err(FilterError::EmptyBelief);
        }
        if states.len() != weights.len() {
            return Err(FilterError::LengthMismatch { expected: states.len(), got: weights.len() });
        }
        Ok(DiscreteBelief { states, weights: normalize(weights)? })
    }

    /// Restores a belief from previously exported weights without
    /// renormalizing, so a resumed run is bit-identical. The weights must
    /// already sum to one within `1e-12`.
    pub fn from_normalized(states: Vec<S>, weights: Vec<f64>) -> Result<Self, FilterError> {
        if states.is_empty() {
            return Err(FilterError::EmptyBelief);
        }
        if states.len() != weights.len() {
            return Err(FilterError::LengthMismatch { expected: states.len(), got: weights.len() });
        }
        if let Some(index) = weights.iter().position(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(FilterError::InvalidWeight { index });
        }
        if libm::fabs(weights.iter().sum::<f64>() - 1.0) > 1e-12 {
            return Err(FilterError::DegenerateBelief);
        }
        Ok(DiscreteBelief { states, weights })
    }

    pub fn uniform(states: Vec<S>) -> Result<Self, FilterError> {
        let n = states.len();
        DiscreteBelief::new(states, alloc::vec![1.0; n])
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// Chapman–Kolmogorov prediction over the belief's own state set:
/// `out[j] ∝ Σ_i transition(state_i, state_j) · w_i`.
pub fn predict<S, F>(belief: &DiscreteBelief<S>, transition: F) -> Result<DiscreteBelief<S>, FilterError>
where
    S: Clone,
    F: Fn(&S, &S) -> f64,
{
    let weights: Vec<f64> = belief
        .states
        .iter()
        .map(|to| {
            belief
                .states
                .iter()
                .zip(&belief.weights)
                .map(|(from, w)| transition(from, to) * w)
                .sum()
        })
        .collect();
    DiscreteBelief::new(belief.states.clone(), weights)
}

/// Bayes correction: `out[i] = likelihood[i] · predicted[i] / Z_t`.
pub fn update<S: Clone>(predicted: &DiscreteBelief<S>, likelihood: &[f64]) -> Result<DiscreteBelief<S>, FilterError> {
    if likelihood.len() != predicted.len() {
        return Err(FilterError::LengthMismatch { expected: predicted.len(), got: likelihood.len() });
    }
    if let Some(index) = likelihood.iter().position(|l| !(l.is_finite() && *l >= 0.0)) {
        return Err(FilterError::InvalidWeight { index });
    }
    let joint: Vec<f64> = likelihood.iter().zip(&predicted.weights).map(|(l, p)| l * p).collect();
    let z: f64 = joint.iter().sum();
    if !(z > 0.0) {
        return Err(FilterError::TotalConflict);
    }
    Ok(DiscreteBelief {
        states: predicted.states.clone(),
        weights: joint.into_iter().map(|j| j / z).collect(),
    })
}

/// Index of the maximum a-posteriori weight. Exact ties go to the smaller
/// state magnitude, then the lower index.
fn argmax_with_ties<S: StateMagnitude>(states: &[S], weights: &[f64]) -> usize {
    let mut best = 0;
    for i in 1..weights.len() {
        let (w, wb) = (weights[i], weights[best]);
        if w > wb || (w == wb && states[i].magnitude() < states[best].magnitude()) {
            best = i;
        }
    }
    best
}

/// MAP state as `(index, state, weight)`.
pub fn map_estimate<S: StateMagnitude>(belief: &DiscreteBelief<S>) -> (usize, &S, f64) {
    let i = argmax_with_ties(&belief.states, &belief.weights);
    (i, &belief.states[i], belief.weights[i])
}

/// Which displacement encoding maps candidates to pixel boxes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DisplacementEncoding {
    /// Normalized by the previous box size.
    #[default]
    PrevNorm,
    /// Normalized by the mean of previous and candidate box sizes.
    AvgNorm,
}

/// How the posterior is formed from prior and likelihood.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fusion {
    /// `posterior ∝ prior · likelihood`.
    #[default]
    Bayes,
    /// `posterior = likelihood`; the observation-only baseline.
    LikelihoodOnly,
}

pub const DEFAULT_CANDIDATES: usize = 257;

#[derive(Debug, Clone, PartialEq)]
pub struct FilterConfig {
    /// Displacement hypotheses per frame, including the forced zero
    /// displacement.
    pub n_candidates: usize,
    /// Size multipliers applied to every displacement hypothesis.
    pub scales: Vec<f64>,
    pub sigma_alpha: f64,
    pub encoding: DisplacementEncoding,
    pub fusion: Fusion,
    pub update: UpdatePolicy,
    pub seed: u64,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            n_candidates: DEFAULT_CANDIDATES,
            scales: alloc::vec![0.97, 1.0, 1.03],
            sigma_alpha: DEFAULT_SIGMA_ALPHA,
            encoding: DisplacementEncoding::PrevNorm,
            fusion: Fusion::Bayes,
            update: UpdatePolicy::default(),
            seed: 0,
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<(), FilterError> {
        if self.n_candidates == 0 {
            return Err(FilterError::InvalidConfig("n_candidates must be at least 1"));
        }
        if self.scales.is_empty() || self.scales.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(FilterError::InvalidConfig("scales must be a non-empty list of positive numbers"));
        }
        if !(self.sigma_alpha.is_finite() && self.sigma_alpha > 0.0) {
            return Err(FilterError::InvalidConfig("sigma_alpha must be positive"));
        }
        Ok(())
    }

    /// Scales ordered by closeness to 1, so that exact ties keep the size.
    fn ordered_scales(&self) -> Vec<f64> {
        let mut s = self.scales.clone();
        s.sort_by(|a, b| libm::fabs(libm::log(*a)).total_cmp(&libm::fabs(libm::log(*b))));
        s
    }
}

/// Pixel box for displacement `d` and size multiplier `scale` relative to
/// `prev`.
pub fn realize_candidate(
    prev: &BoundingBox,
    d: Displacement,
    scale: f64,
    encoding: DisplacementEncoding,
) -> BoundingBox {
    match encoding {
        DisplacementEncoding::PrevNorm => prev.apply_displacement(d).scaled_about_center(scale),
        DisplacementEncoding::AvgNorm => {
            let c = prev.center();
            let (w, h) = (prev.w() * scale, prev.h() * scale);
            let cx = c.cx + d.dx * 0.5 * (prev.w() + w);
            let cy = c.cy + d.dy * 0.5 * (prev.h() + h);
            // w, h > 0 and finite because prev is valid and scale > 0.
            BoundingBox::from_center(cx, cy, w, h).expect("scaled box stays valid")
        }
    }
}

/// Everything computed for one frame's hypotheses, index-aligned.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    pub displacements: Vec<Displacement>,
    pub scales: Vec<f64>,
    pub boxes: Vec<BoundingBox>,
    pub prior: Vec<f64>,
    pub response: Vec<f64>,
    pub alpha: PenaltyWeights,
    pub likelihood: Vec<f64>,
    pub posterior: Vec<f64>,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.displacements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.displacements.is_empty()
    }
}

/// One entry of the per-frame track log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackRecord {
    pub frame_index: usize,
    pub bbox: BoundingBox,
    pub map_weight: f64,
    pub fallback: bool,
}

/// Running track: the current box plus the full history, 1-based frames.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackState {
    frame_index: usize,
    current_box: BoundingBox,
    history: Vec<TrackRecord>,
}

impl TrackState {
    /// Track initialized on frame 1 with the given box.
    pub fn new(init_box: BoundingBox) -> Self {
        TrackState {
            frame_index: 1,
            current_box: init_box,
            history: alloc::vec![TrackRecord { frame_index: 1, bbox: init_box, map_weight: 1.0, fallback: false }],
        }
    }

    pub fn frame_index(&self) -> usize {
        self.frame_index
    }

    pub fn current_box(&self) -> &BoundingBox {
        &self.current_box
    }

    pub fn history(&self) -> &[TrackRecord] {
        &self.history
    }

    pub fn boxes(&self) -> Vec<BoundingBox> {
        self.history.iter().map(|r| r.bbox).collect()
    }

    fn push(&mut self, bbox: BoundingBox, map_weight: f64, fallback: bool) {
        self.frame_index += 1;
        self.current_box = bbox;
        self.history.push(TrackRecord { frame_index: self.frame_index, bbox, map_weight, fallback });
    }
}

/// Result of one [`dbf_step`].
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub candidates: CandidateSet,
    pub map_index: usize,
    /// `Z_t` was zero; the previous box was kept.
    pub fallback: bool,
    pub template: TemplateUpdate,
}

fn step_rng(seed: u64, frame_index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(frame_index as u64);
    rng
}

/// Advances `track` by one frame.
///
/// Candidates are the zero displacement plus `n_candidates - 1` prior
/// draws, each expanded over the scale set. Candidates that fall off the
/// frame score zero. The MAP candidate becomes the new box; on total
/// conflict the previous box is kept and the outcome is flagged.
pub fn dbf_step<S: Scorer + ?Sized>(
    track: &mut TrackState,
    frame: &Frame,
    scorer: &mut S,
    sys: &SystemModelParams,
    cfg: &FilterConfig,
) -> Result<StepOutcome, FilterError> {
    cfg.validate()?;
    let frame_index = track.frame_index + 1;
    let prev = track.current_box;

    let mut draws = alloc::vec![Displacement::ZERO];
    if cfg.n_candidates > 1 {
        let mut rng = step_rng(cfg.seed, frame_index);
        draws.extend(sample_candidates_with(sys, cfg.n_candidates - 1, &mut rng)?);
    }
    let scales = cfg.ordered_scales();
    let total = draws.len() * scales.len();
    let mut displacements = Vec::with_capacity(total);
    let mut cand_scales = Vec::with_capacity(total);
    let mut boxes = Vec::with_capacity(total);
    for d in &draws {
        for s in &scales {
            displacements.push(*d);
            cand_scales.push(*s);
            boxes.push(realize_candidate(&prev, *d, *s, cfg.encoding));
        }
    }

    scorer.prepare(frame_index, frame);
    let response = boxes
        .iter()
        .map(|b| match scorer.score(frame, b) {
            Ok(r) => Ok(r.v1()),
            Err(ObservationError::OutOfBounds) => Ok(0.0),
            Err(e) => Err(FilterError::from(e)),
        })
        .collect::<Result<Vec<f64>, _>>()?;

    let prior: Vec<f64> = displacements.iter().map(|d| sys.prior_density(*d)).collect();
    let alpha = penalty_weights(&displacements, cfg.sigma_alpha)?;
    let likelihood = weighted_softmax(&response, &alpha)?;

    let fused = match cfg.fusion {
        Fusion::Bayes => DiscreteBelief::new(displacements.clone(), prior.clone())
            .and_then(|predicted| update(&predicted, &likelihood)),
        Fusion::LikelihoodOnly => DiscreteBelief::new(displacements.clone(), likelihood.clone()),
    };

    let (posterior, map_index, fallback) = match fused {
        Ok(belief) => {
            let (i, _, _) = map_estimate(&belief);
            (belief.weights, i, false)
        }
        Err(FilterError::TotalConflict) | Err(FilterError::DegenerateBelief) => {
            let posterior = normalize(prior.clone()).unwrap_or_else(|_| {
                let n = prior.len() as f64;
                alloc::vec![1.0 / n; prior.len()]
            });
            (posterior, 0, true)
        }
        Err(e) => return Err(e),
    };

    let template = if fallback {
        track.push(prev, 0.0, true);
        TemplateUpdate::SkippedConfidence
    } else {
        let estimate = boxes[map_index];
        track.push(estimate, posterior[map_index], false);
        match maybe_update_template(scorer, frame, &estimate, response[map_index], frame_index, &cfg.update) {
            Ok(t) => t,
            Err(ObservationError::OutOfBounds) => TemplateUpdate::SkippedConfidence,
            Err(e) => return Err(e.into()),
        }
    };

    Ok(StepOutcome {
        candidates: CandidateSet {
            displacements,
            scales: cand_scales,
            boxes,
            prior,
            response,
            alpha,
            likelihood,
            posterior,
        },
        map_index,
        fallback,
        template,
    })
}

/// Runs the tracker over `frames`, starting from `init_box` on the first
/// frame, and returns the full track log.
pub fn run_tracker<S: Scorer + ?Sized>(
    frames: &[Frame],
    init_box: BoundingBox,
    scorer: &mut S,
    sys: &SystemModelParams,
    cfg: &FilterConfig,
) -> Result<TrackState, FilterError> {
    let (first, rest) = frames.split_first().ok_or(FilterError::EmptySequence)?;
    cfg.validate()?;
    scorer.prepare(1, first);
    let mut track = TrackState::new(init_box);
    for frame in rest {
        dbf_step(&mut track, frame, scorer, sys, cfg)?;
    }
    Ok(track)
}

/// One box per frame; the first is `init_box`.
pub fn track_sequence<S: Scorer + ?Sized>(
    frames: &[Frame],
    init_box: BoundingBox,
    scorer: &mut S,
    sys: &SystemModelParams,
    cfg: &FilterConfig,
) -> Result<Vec<BoundingBox>, FilterError> {
    run_tracker(frames, init_box, scorer, sys, cfg).map(|t| t.boxes())
}
