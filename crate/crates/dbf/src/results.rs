//! Per-frame tracking results as CSV: `frame,x,y,w,h,map_weight,fallback`.

use std::path::Path;

use dbf_core::filter::TrackRecord;
use dbf_core::geometry::BoundingBox;

use crate::error::{Error, Result};
use crate::fsutil::write_atomic;

pub const HEADER: [&str; 7] = ["frame", "x", "y", "w", "h", "map_weight", "fallback"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResultRecord {
    pub frame_index: usize,
    pub bbox: BoundingBox,
    pub map_weight: f64,
    pub fallback: bool,
}

impl From<&TrackRecord> for ResultRecord {
    fn from(r: &TrackRecord) -> Self {
        ResultRecord { frame_index: r.frame_index, bbox: r.bbox, map_weight: r.map_weight, fallback: r.fallback }
    }
}

/// Serializes records. Floats use the shortest round-trip representation,
/// so reading the output back is lossless.
pub fn to_csv(records: &[ResultRecord]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER).expect("writing to memory");
    for r in records {
        let b = &r.bbox;
        w.write_record([
            r.frame_index.to_string(),
            b.x().to_string(),
            b.y().to_string(),
            b.w().to_string(),
            b.h().to_string(),
            r.map_weight.to_string(),
            u8::from(r.fallback).to_string(),
        ])
        .expect("writing to memory");
    }
    w.into_inner().expect("writing to memory")
}

pub fn write_results(path: &Path, records: &[ResultRecord]) -> Result<()> {
    write_atomic(path, &to_csv(records))
}

pub fn read_results(path: &Path) -> Result<Vec<ResultRecord>> {
    let text = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_results(&text).map_err(|(line, msg)| Error::Parse { path: path.to_path_buf(), line, msg })
}

/// Parses results CSV. Errors carry the 1-based line number.
pub fn parse_results(bytes: &[u8]) -> std::result::Result<Vec<ResultRecord>, (usize, String)> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(bytes);
    let header = rdr.headers().map_err(|e| (1, e.to_string()))?;
    if header.iter().ne(HEADER) {
        return Err((1, format!("expected header {}", HEADER.join(","))));
    }
    let mut out: Vec<ResultRecord> = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| (e.position().map_or(0, |p| p.line() as usize), e.to_string()))?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let num = |i: usize| -> std::result::Result<f64, (usize, String)> {
            row[i].trim().parse::<f64>().map_err(|_| (line, format!("{}: not a number: {:?}", HEADER[i], &row[i])))
        };
        let frame_index: usize =
            row[0].trim().parse().map_err(|_| (line, format!("frame: not an integer: {:?}", &row[0])))?;
        if frame_index == 0 || out.last().is_some_and(|p| p.frame_index >= frame_index) {
            return Err((line, "frame indices must start at 1 and increase".into()));
        }
        let bbox = BoundingBox::new(num(1)?, num(2)?, num(3)?, num(4)?).map_err(|e| (line, e.to_string()))?;
        let map_weight = num(5)?;
        if !(0.0..=1.0).contains(&map_weight) {
            return Err((line, "map_weight must lie in [0, 1]".into()));
        }
        let fallback = match row[6].trim() {
            "0" => false,
            "1" => true,
            other => return Err((line, format!("fallback: expected 0 or 1, found {other:?}"))),
        };
        out.push(ResultRecord { frame_index, bbox, map_weight, fallback });
    }
    Ok(out)
}
