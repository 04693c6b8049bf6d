use std::path::Path;

use dbf_core::filter::run_tracker;
use dbf_core::geometry::BoundingBox;
use dbf_core::observation::{Frame, NccScorer, OracleScorer};
use rayon::prelude::*;

use crate::annotation::parse_groundtruth;
use crate::config::{ScorerKind, Settings};
use crate::error::{Error, Result};
use crate::manifest::SequenceManifest;
use crate::pgm::read_pgm;
use crate::results::{write_results, ResultRecord};

pub fn load_frames(manifest: &SequenceManifest) -> Result<Vec<Frame>> {
    manifest.frame_paths.iter().map(|p| read_pgm(p)).collect()
}

/// Tracks one sequence from its first ground-truth box.
pub fn track_manifest(manifest: &SequenceManifest, settings: &Settings) -> Result<Vec<ResultRecord>> {
    let truth = parse_groundtruth(&manifest.groundtruth_path)?;
    let frames = load_frames(manifest)?;
    track_frames(&frames, &truth, settings)
}

pub fn track_frames(frames: &[Frame], truth: &[BoundingBox], settings: &Settings) -> Result<Vec<ResultRecord>> {
    let init = *truth.first().ok_or_else(|| Error::Data("ground truth is empty".into()))?;
    let first = frames.first().ok_or_else(|| Error::Data("sequence has no frames".into()))?;
    let sys = settings.system_model()?;
    let cfg = settings.filter_config();
    let track = match settings.scorer {
        ScorerKind::Ncc => {
            let mut scorer = NccScorer::from_frame(first, &init, settings.template_size)
                .map_err(|e| Error::Data(format!("initial box: {e}")))?;
            run_tracker(frames, init, &mut scorer, &sys, &cfg)?
        }
        ScorerKind::Oracle => {
            if truth.len() != frames.len() {
                return Err(Error::Data(format!(
                    "oracle scorer needs one ground-truth box per frame ({} boxes, {} frames)",
                    truth.len(),
                    frames.len()
                )));
            }
            let mut scorer = OracleScorer::new(truth.to_vec());
            run_tracker(frames, init, &mut scorer, &sys, &cfg)?
        }
    };
    Ok(track.history().iter().map(ResultRecord::from).collect())
}

pub fn run_track(manifest: &SequenceManifest, settings: &Settings, out: &Path) -> Result<Vec<ResultRecord>> {
    let records = track_manifest(manifest, settings)?;
    write_results(out, &records)?;
    Ok(records)
}

/// Tracks every sequence in parallel, writing `out_dir/<name>.csv`. The
/// first failure is returned after all workers finish.
pub fn run_track_dataset(seqs: &[SequenceManifest], settings: &Settings, out_dir: &Path) -> Result<()> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let outcomes: Vec<Result<()>> = seqs
        .par_iter()
        .map(|m| run_track(m, settings, &out_dir.join(format!("{}.csv", m.name))).map(|_| ()))
        .collect();
    outcomes.into_iter().collect()
}
