//! Binary portable graymap (P5, maxval 255) frames.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use dbf_core::observation::Frame;
use image::codecs::pnm::{PnmDecoder, PnmEncoder, PnmSubtype, SampleEncoding};
use image::{ExtendedColorType, ImageDecoder, ImageEncoder};

use crate::error::{Error, Result};

/// Reads a P5 graymap into `[0, 1]` intensities (`value / 255`).
pub fn read_pgm(path: &Path) -> Result<Frame> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let fmt = |msg: String| Error::Format { path: path.to_path_buf(), msg };
    let decoder = PnmDecoder::new(BufReader::new(file)).map_err(|e| fmt(e.to_string()))?;
    if decoder.subtype() != PnmSubtype::Graymap(SampleEncoding::Binary) {
        return Err(fmt("expected a binary graymap (P5)".into()));
    }
    if decoder.color_type() != image::ColorType::L8 {
        return Err(fmt("expected 8-bit samples (maxval 255)".into()));
    }
    let (w, h) = decoder.dimensions();
    let mut buf = vec![0u8; decoder.total_bytes() as usize];
    decoder.read_image(&mut buf).map_err(|e| fmt(e.to_string()))?;
    let pixels = buf.iter().map(|&b| f64::from(b) / 255.0).collect();
    Frame::new(w as usize, h as usize, pixels).map_err(|e| fmt(e.to_string()))
}

/// Quantizes to 8 bits (round to nearest) and writes a P5 graymap.
pub fn write_pgm(path: &Path, frame: &Frame) -> Result<()> {
    let bytes = quantize(frame);
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    PnmEncoder::new(&mut out)
        .with_subtype(PnmSubtype::Graymap(SampleEncoding::Binary))
        .write_image(&bytes, frame.width() as u32, frame.height() as u32, ExtendedColorType::L8)
        .map_err(|e| Error::Format { path: path.to_path_buf(), msg: e.to_string() })?;
    out.flush().map_err(|e| Error::io(path, e))
}

fn quantize(frame: &Frame) -> Vec<u8> {
    frame.pixels().iter().map(|v| (v.clamp(0.0, 1.0) * 255.0).round() as u8).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantize_rounds_to_nearest() {
        let f = Frame::new(3, 1, vec![0.0, 0.5, 1.0]).unwrap();
        assert_eq!(quantize(&f), vec![0, 128, 255]);
    }
}
