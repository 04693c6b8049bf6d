//! Tracker settings from a plain-text `key=value` file plus flag overrides.

use std::path::Path;
use std::str::FromStr;

use dbf_core::filter::{DisplacementEncoding, FilterConfig, Fusion};
use dbf_core::metrics::NormReference;
use dbf_core::motion_fit::DEFAULT_BINS;
use dbf_core::observation::{UpdatePolicy, DEFAULT_TEMPLATE_SIZE};
use dbf_core::system_model::{MotionFamily, SystemModelParams, DEFAULT_LAMBDA};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScorerKind {
    Ncc,
    /// Scores by IoU against the ground truth; for testing the filter.
    Oracle,
}

/// Every tunable, with defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub family: MotionFamily,
    pub lambda_x: f64,
    pub lambda_y: f64,
    pub standard_gaussian: bool,
    pub candidates: usize,
    pub scales: Vec<f64>,
    pub sigma_alpha: f64,
    pub update: UpdatePolicy,
    pub template_size: usize,
    pub scorer: ScorerKind,
    pub encoding: DisplacementEncoding,
    pub fusion: Fusion,
    pub seed: u64,
    pub bins: usize,
    pub norm_reference: NormReference,
}

impl Default for Settings {
    fn default() -> Self {
        let f = FilterConfig::default();
        Settings {
            family: MotionFamily::Gaussian,
            lambda_x: DEFAULT_LAMBDA,
            lambda_y: DEFAULT_LAMBDA,
            standard_gaussian: false,
            candidates: f.n_candidates,
            scales: f.scales,
            sigma_alpha: f.sigma_alpha,
            update: f.update,
            template_size: DEFAULT_TEMPLATE_SIZE,
            scorer: ScorerKind::Ncc,
            encoding: f.encoding,
            fusion: f.fusion,
            seed: f.seed,
            bins: DEFAULT_BINS,
            norm_reference: NormReference::GroundTruth,
        }
    }
}

pub const KEYS: &[&str] = &[
    "family",
    "lambda",
    "lambda_x",
    "lambda_y",
    "standard_gaussian",
    "candidates",
    "scales",
    "sigma_alpha",
    "update_interval",
    "update_confidence",
    "update_blend",
    "template_size",
    "scorer",
    "encoding",
    "fusion",
    "seed",
    "bins",
    "norm_reference",
];

fn num<T: FromStr>(v: &str) -> std::result::Result<T, String> {
    v.parse().map_err(|_| format!("invalid number {v:?}"))
}

fn positive(v: &str) -> std::result::Result<f64, String> {
    let x: f64 = num(v)?;
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(format!("expected a positive number, found {v:?}"))
    }
}

fn boolean(v: &str) -> std::result::Result<bool, String> {
    match v {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        _ => Err(format!("expected true or false, found {v:?}")),
    }
}

impl Settings {
    /// Sets one key. The error message names the problem but not the key.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        let v = value.trim();
        match key {
            "family" => self.family = v.parse().map_err(|_| format!("unknown family {v:?}"))?,
            "lambda" => {
                self.lambda_x = positive(v)?;
                self.lambda_y = self.lambda_x;
            }
            "lambda_x" => self.lambda_x = positive(v)?,
            "lambda_y" => self.lambda_y = positive(v)?,
            "standard_gaussian" => self.standard_gaussian = boolean(v)?,
            "candidates" => {
                self.candidates = num(v)?;
                if self.candidates == 0 {
                    return Err("need at least one candidate".into());
                }
            }
            "scales" => {
                self.scales = v.split(',').map(|s| positive(s.trim())).collect::<std::result::Result<_, _>>()?;
            }
            "sigma_alpha" => self.sigma_alpha = positive(v)?,
            "update_interval" => self.update.interval = num(v)?,
            "update_confidence" => self.update.min_confidence = num(v)?,
            "update_blend" => {
                let b: f64 = num(v)?;
                if !(0.0..=1.0).contains(&b) {
                    return Err("blend must lie in [0, 1]".into());
                }
                self.update.blend = b;
            }
            "template_size" => {
                self.template_size = num(v)?;
                if self.template_size < 2 {
                    return Err("template size must be at least 2".into());
                }
            }
            "scorer" => {
                self.scorer = match v {
                    "ncc" => ScorerKind::Ncc,
                    "oracle" => ScorerKind::Oracle,
                    _ => return Err(format!("unknown scorer {v:?} (ncc, oracle)")),
                }
            }
            "encoding" => {
                self.encoding = match v {
                    "prev" => DisplacementEncoding::PrevNorm,
                    "avg" => DisplacementEncoding::AvgNorm,
                    _ => return Err(format!("unknown encoding {v:?} (prev, avg)")),
                }
            }
            "fusion" => {
                self.fusion = match v {
                    "bayes" => Fusion::Bayes,
                    "likelihood" => Fusion::LikelihoodOnly,
                    _ => return Err(format!("unknown fusion {v:?} (bayes, likelihood)")),
                }
            }
            "seed" => self.seed = num(v)?,
            "bins" => {
                self.bins = num(v)?;
                if self.bins < 2 {
                    return Err("need at least two bins".into());
                }
            }
            "norm_reference" => {
                self.norm_reference = match v {
                    "gt" => NormReference::GroundTruth,
                    "pred" => NormReference::Predicted,
                    _ => return Err(format!("unknown norm reference {v:?} (gt, pred)")),
                }
            }
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    /// Applies a `key=value` document. Blank lines and `#` comments are
    /// skipped.
    pub fn apply_str(&mut self, text: &str) -> std::result::Result<(), (usize, String)> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or((i + 1, format!("expected key=value, found {line:?}")))?;
            let k = k.trim();
            self.set(k, v).map_err(|m| (i + 1, format!("{k}: {m}")))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.apply_str(&text).map_err(|(line, msg)| Error::Parse { path: path.to_path_buf(), line, msg })
    }

    pub fn system_model(&self) -> Result<SystemModelParams> {
        SystemModelParams::new(self.family, self.lambda_x, self.lambda_y)
            .map(|p| p.with_standard_gaussian(self.standard_gaussian))
            .map_err(|e| Error::Usage(e.to_string()))
    }

    pub fn filter_config(&self) -> FilterConfig {
        FilterConfig {
            n_candidates: self.candidates,
            scales: self.scales.clone(),
            sigma_alpha: self.sigma_alpha,
            encoding: self.encoding,
            fusion: self.fusion,
            update: self.update,
            seed: self.seed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_key_is_accepted() {
        let doc = "family = laplace\nlambda=3\nlambda_x=2.5 # trailing\nlambda_y=4\nstandard_gaussian=true\n\
                   candidates=65\nscales=1.0,0.9\nsigma_alpha=0.7\nupdate_interval=10\nupdate_confidence=0.5\n\
                   update_blend=0.1\ntemplate_size=16\nscorer=oracle\nencoding=avg\nfusion=likelihood\n\
                   seed=9\nbins=30\nnorm_reference=pred\n";
        let mut s = Settings::default();
        s.apply_str(doc).unwrap();
        assert_eq!(s.family, MotionFamily::Laplace);
        assert_eq!((s.lambda_x, s.lambda_y), (2.5, 4.0));
        assert_eq!(s.scales, vec![1.0, 0.9]);
        assert_eq!(s.update, UpdatePolicy { interval: 10, min_confidence: 0.5, blend: 0.1 });
        assert_eq!(s.scorer, ScorerKind::Oracle);
        assert_eq!(s.fusion, Fusion::LikelihoodOnly);
        assert_eq!(s.norm_reference, NormReference::Predicted);
        assert_eq!((s.seed, s.bins, s.candidates, s.template_size), (9, 30, 65, 16));
        for k in KEYS {
            assert!(doc.contains(&format!("{k}=")) || doc.contains(&format!("{k} =")), "{k}");
        }
    }

    #[test]
    fn errors_name_the_line() {
        let mut s = Settings::default();
        assert_eq!(s.apply_str("seed=1\n\nlambda_x=-1\n").unwrap_err().0, 3);
        assert_eq!(s.apply_str("nonsense\n").unwrap_err().0, 1);
        assert_eq!(s.apply_str("colour=red\n").unwrap_err().0, 1);
    }
}
