use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use dbf_core::geometry::BoundingBox;
use dbf_core::metrics::{evaluate, EvalCurve, NormReference, SequenceMetrics, SequenceReport};
use rayon::prelude::*;

use crate::annotation::parse_groundtruth;
use crate::error::{Error, Result};
use crate::fsutil::write_atomic;
use crate::manifest::SequenceManifest;
use crate::results::read_results;

pub fn evaluate_boxes(preds: &[BoundingBox], truth: &[BoundingBox], reference: NormReference) -> Result<SequenceReport> {
    if preds.len() != truth.len() {
        return Err(Error::Data(format!("{} results but {} ground-truth boxes", preds.len(), truth.len())));
    }
    Ok(evaluate(preds, truth, reference)?)
}

pub fn evaluate_files(results: &Path, gt: &Path, reference: NormReference) -> Result<SequenceReport> {
    let preds: Vec<BoundingBox> = read_results(results)?.iter().map(|r| r.bbox).collect();
    let truth = parse_groundtruth(gt)?;
    evaluate_boxes(&preds, &truth, reference)
}

fn curve_csv(c: &EvalCurve) -> String {
    let mut s = String::from("threshold,value\n");
    for (t, v) in c.thresholds.iter().zip(&c.values) {
        let _ = writeln!(s, "{t},{v}");
    }
    s
}

/// Writes `<prefix>precision.csv`, `<prefix>success.csv` and
/// `<prefix>norm_precision.csv` into `dir`.
pub fn write_curves(dir: &Path, prefix: &str, report: &SequenceReport) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (name, curve) in [
        ("precision", &report.precision),
        ("success", &report.success),
        ("norm_precision", &report.norm_precision),
    ] {
        write_atomic(&dir.join(format!("{prefix}{name}.csv")), curve_csv(curve).as_bytes())?;
    }
    Ok(())
}

pub fn format_metrics(label: &str, m: &SequenceMetrics) -> String {
    format!(
        "{label}\tprecision@20={}\tsuccess_auc={}\tnorm_precision_auc={}\n",
        m.precision_20, m.success_auc, m.norm_precision_auc
    )
}

/// Per-sequence metrics, their equal-weight mean, and one mean per
/// attribute tag.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetReport {
    pub sequences: Vec<(String, SequenceReport)>,
    pub mean: SequenceMetrics,
    pub by_attribute: BTreeMap<String, SequenceMetrics>,
}

impl DatasetReport {
    pub fn render(&self) -> String {
        let mut s = String::new();
        for (name, r) in &self.sequences {
            s.push_str(&format_metrics(name, &r.summary));
        }
        s.push_str(&format_metrics("mean", &self.mean));
        for (tag, m) in &self.by_attribute {
            s.push_str(&format_metrics(&format!("attr:{tag}"), m));
        }
        s
    }
}

pub fn aggregate(seqs: &[SequenceManifest], reports: Vec<SequenceReport>) -> DatasetReport {
    let mean = SequenceMetrics::mean(reports.iter().map(|r| &r.summary)).expect("at least one sequence");
    let mut buckets: BTreeMap<String, Vec<SequenceMetrics>> = BTreeMap::new();
    for (m, r) in seqs.iter().zip(&reports) {
        for tag in &m.attributes {
            buckets.entry(tag.clone()).or_default().push(r.summary);
        }
    }
    let by_attribute = buckets
        .into_iter()
        .map(|(k, v)| (k, SequenceMetrics::mean(&v).expect("non-empty bucket")))
        .collect();
    let sequences = seqs.iter().map(|m| m.name.clone()).zip(reports).collect();
    DatasetReport { sequences, mean, by_attribute }
}

/// Evaluates `results_dir/<name>.csv` for every sequence.
pub fn run_eval_dataset(
    seqs: &[SequenceManifest],
    results_dir: &Path,
    reference: NormReference,
) -> Result<DatasetReport> {
    let reports = seqs
        .par_iter()
        .map(|m| evaluate_files(&results_dir.join(format!("{}.csv", m.name)), &m.groundtruth_path, reference))
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(seqs, reports))
}
