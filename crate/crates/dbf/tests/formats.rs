use dbf::annotation::{parse_groundtruth, parse_groundtruth_str, write_groundtruth};
use dbf::config::Settings;
use dbf::manifest::SequenceManifest;
use dbf::pgm::{read_pgm, write_pgm};
use dbf::results::read_results;
use dbf::simulate::run_simulate;
use dbf::track::run_track;
use dbf_core::geometry::BoundingBox;
use dbf_core::observation::Frame;
use dbf_core::simulator::ScenarioConfig;

#[test]
fn pgm_round_trip_is_exact_on_the_255_grid() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("f.pgm");
    let pixels: Vec<f64> = (0..12).map(|i| f64::from(i * 23 % 256) / 255.0).collect();
    let f = Frame::new(4, 3, pixels).unwrap();
    write_pgm(&path, &f).unwrap();
    let bytes = std::fs::read(&path).unwrap();
    assert!(bytes.starts_with(b"P5"));
    let expected: Vec<u8> = (0..12).map(|i| (i * 23 % 256) as u8).collect();
    assert_eq!(&bytes[bytes.len() - 12..], &expected[..]);
    assert_eq!(read_pgm(&path).unwrap(), f);
}

#[test]
fn pgm_rejects_other_formats() {
    let tmp = tempfile::tempdir().unwrap();
    let ascii = tmp.path().join("a.pgm");
    std::fs::write(&ascii, "P2\n2 1\n255\n0 255\n").unwrap();
    assert!(read_pgm(&ascii).is_err());
    let wide = tmp.path().join("w.pgm");
    let mut data = b"P5\n1 1\n65535\n".to_vec();
    data.extend_from_slice(&[0xff, 0xff]);
    std::fs::write(&wide, data).unwrap();
    assert!(read_pgm(&wide).is_err());
}

#[test]
fn annotation_examples() {
    assert_eq!(parse_groundtruth_str("10,20,30,40").unwrap(), [BoundingBox::new(10.0, 20.0, 30.0, 40.0).unwrap()]);
    assert!(parse_groundtruth_str("10,20,0,40").is_err());
    let text: String = (0..17).map(|i| format!("{i},{},5,6\n", 2 * i)).collect();
    let boxes = parse_groundtruth_str(&text).unwrap();
    assert_eq!(boxes.len(), 17);
    assert_eq!(boxes[16].x(), 16.0);
    assert_eq!(boxes[16].y(), 32.0);
}

#[test]
fn annotation_file_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("gt.txt");
    let boxes = vec![BoundingBox::new(0.25, -3.5, 20.0, 1e-3).unwrap(), BoundingBox::new(1.0, 2.0, 3.0, 4.0).unwrap()];
    write_groundtruth(&path, &boxes).unwrap();
    assert_eq!(parse_groundtruth(&path).unwrap(), boxes);
    std::fs::write(&path, "1,2,3,4\n1,2,-3,4\n").unwrap();
    let err = parse_groundtruth(&path).unwrap_err().to_string();
    assert!(err.contains("gt.txt:2:"), "{err}");
}

#[test]
fn track_output_reads_back_field_for_field() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("s");
    run_simulate(&ScenarioConfig { n_frames: 20, noise_std: 0.05, seed: 8, ..Default::default() }, &dir).unwrap();
    let out = tmp.path().join("r.csv");
    let written = run_track(&SequenceManifest::from_dir(&dir).unwrap(), &Settings::default(), &out).unwrap();
    assert_eq!(read_results(&out).unwrap(), written);
    assert!(written.iter().all(|r| (0.0..=1.0).contains(&r.map_weight)));
}
