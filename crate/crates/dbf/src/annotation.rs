//! Ground-truth files: one `x,y,w,h` box per line, comma or tab separated.

use std::fmt::Write as _;
use std::path::Path;

use dbf_core::geometry::BoundingBox;

use crate::error::{Error, Result};
use crate::fsutil::write_atomic;

pub fn parse_groundtruth(path: &Path) -> Result<Vec<BoundingBox>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_groundtruth_str(&text).map_err(|(line, msg)| Error::Parse { path: path.to_path_buf(), line, msg })
}

/// Parses annotation text. Errors carry the 1-based line number.
pub fn parse_groundtruth_str(text: &str) -> std::result::Result<Vec<BoundingBox>, (usize, String)> {
    let mut boxes = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let lineno = i + 1;
        let fields: Vec<&str> = line.split([',', '\t']).map(str::trim).collect();
        if fields.len() != 4 {
            return Err((lineno, format!("expected 4 fields x,y,w,h, found {}", fields.len())));
        }
        let mut v = [0.0; 4];
        for (slot, field) in v.iter_mut().zip(&fields) {
            *slot = field.parse::<f64>().map_err(|_| (lineno, format!("not a number: {field:?}")))?;
        }
        let b = BoundingBox::new(v[0], v[1], v[2], v[3]).map_err(|e| (lineno, e.to_string()))?;
        boxes.push(b);
    }
    Ok(boxes)
}

pub fn format_groundtruth(boxes: &[BoundingBox]) -> String {
    let mut s = String::new();
    for b in boxes {
        let _ = writeln!(s, "{b}");
    }
    s
}

pub fn write_groundtruth(path: &Path, boxes: &[BoundingBox]) -> Result<()> {
    write_atomic(path, format_groundtruth(boxes).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tab_and_comma() {
        let b = parse_groundtruth_str("1,2,3,4\n\n5\t6\t7\t8\n").unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b[1], BoundingBox::new(5.0, 6.0, 7.0, 8.0).unwrap());
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(parse_groundtruth_str("1,2,3,4\n1,2,3\n").unwrap_err().0, 2);
        assert_eq!(parse_groundtruth_str("\n\nx,2,3,4").unwrap_err().0, 3);
        assert_eq!(parse_groundtruth_str("10,20,0,40").unwrap_err().0, 1);
    }

    #[test]
    fn format_round_trips() {
        let boxes = vec![BoundingBox::new(0.1, 1.0 / 3.0, 20.0, 7.25).unwrap()];
        assert_eq!(parse_groundtruth_str(&format_groundtruth(&boxes)).unwrap(), boxes);
    }
}
