use std::path::Path;

use dbf_core::simulator::{generate, ScenarioConfig, SyntheticSequence};
use rayon::prelude::*;

use crate::annotation::write_groundtruth;
use crate::error::{Error, Result};
use crate::fsutil::write_atomic;
use crate::manifest::{ATTRIBUTES_FILE, FRAMES_DIR, GROUNDTRUTH_FILE};
use crate::pgm::write_pgm;

/// Attribute tags implied by a scenario: `BC` for distractors, `TC` for
/// intensity drift, `MB` for blur.
pub fn scenario_attributes(cfg: &ScenarioConfig) -> Vec<&'static str> {
    let mut tags = Vec::new();
    if cfg.distractors > 0 {
        tags.push("BC");
    }
    if cfg.intensity_drift != 0.0 {
        tags.push("TC");
    }
    if cfg.blur_radius > 0.0 {
        tags.push("MB");
    }
    tags
}

/// Generates a sequence and writes it as a sequence directory.
pub fn run_simulate(cfg: &ScenarioConfig, dir: &Path) -> Result<SyntheticSequence> {
    let seq = generate(cfg)?;
    let frames_dir = dir.join(FRAMES_DIR);
    std::fs::create_dir_all(&frames_dir).map_err(|e| Error::io(&frames_dir, e))?;
    seq.frames
        .par_iter()
        .enumerate()
        .map(|(i, f)| write_pgm(&frames_dir.join(format!("{:05}.pgm", i + 1)), f))
        .collect::<Result<()>>()?;
    write_groundtruth(&dir.join(GROUNDTRUTH_FILE), &seq.truth)?;
    let mut tags = scenario_attributes(cfg).join(",");
    tags.push('\n');
    write_atomic(&dir.join(ATTRIBUTES_FILE), tags.as_bytes())?;
    Ok(seq)
}
