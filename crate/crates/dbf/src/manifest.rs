//! Sequence layout on disk.
//!
//! A sequence directory holds `frames/*.pgm` (lexicographic order),
//! `groundtruth.txt`, and optionally `attributes.txt` with tags such as
//! `BC` or `MB` separated by commas or whitespace. A dataset directory
//! holds one sequence directory per entry.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

pub const FRAMES_DIR: &str = "frames";
pub const GROUNDTRUTH_FILE: &str = "groundtruth.txt";
pub const ATTRIBUTES_FILE: &str = "attributes.txt";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceManifest {
    pub name: String,
    pub frame_paths: Vec<PathBuf>,
    pub groundtruth_path: PathBuf,
    pub attributes: Vec<String>,
}

fn read_dir_sorted(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        out.push(entry.map_err(|e| Error::io(dir, e))?.path());
    }
    out.sort();
    Ok(out)
}

pub fn parse_attributes(text: &str) -> Vec<String> {
    text.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).map(str::to_owned).collect()
}

impl SequenceManifest {
    pub fn from_dir(dir: &Path) -> Result<Self> {
        let frames_dir = dir.join(FRAMES_DIR);
        let frame_paths: Vec<PathBuf> = read_dir_sorted(&frames_dir)?
            .into_iter()
            .filter(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("pgm")))
            .collect();
        if frame_paths.is_empty() {
            return Err(Error::Data(format!("{}: no .pgm frames", frames_dir.display())));
        }
        let groundtruth_path = dir.join(GROUNDTRUTH_FILE);
        if !groundtruth_path.is_file() {
            return Err(Error::Data(format!("{}: missing ground truth", groundtruth_path.display())));
        }
        let attr_path = dir.join(ATTRIBUTES_FILE);
        let attributes = if attr_path.is_file() {
            parse_attributes(&std::fs::read_to_string(&attr_path).map_err(|e| Error::io(&attr_path, e))?)
        } else {
            Vec::new()
        };
        let name = dir
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| dir.display().to_string());
        Ok(SequenceManifest { name, frame_paths, groundtruth_path, attributes })
    }
}

/// Every sequence directory directly under `root`, by name.
pub fn discover_dataset(root: &Path) -> Result<Vec<SequenceManifest>> {
    let mut seqs = Vec::new();
    for p in read_dir_sorted(root)? {
        if p.is_dir() && p.join(GROUNDTRUTH_FILE).is_file() {
            seqs.push(SequenceManifest::from_dir(&p)?);
        }
    }
    if seqs.is_empty() {
        return Err(Error::Data(format!("{}: no sequences found", root.display())));
    }
    Ok(seqs)
}
