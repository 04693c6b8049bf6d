use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};
use dbf_core::simulator::ScenarioConfig;
use dbf_core::system_model::{MotionFamily, SystemModelParams};

use crate::config::Settings;
use crate::error::{Error, Result};
use crate::eval::{evaluate_files, format_metrics, run_eval_dataset, write_curves};
use crate::fit::{render_fit, run_fit};
use crate::manifest::{discover_dataset, SequenceManifest};
use crate::simulate::run_simulate;
use crate::track::{run_track, run_track_dataset};

#[derive(Debug, Parser)]
#[command(name = "dbf", version, about = "Bayesian-filter single-object tracker for graymap sequences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic sequence directory.
    Simulate(SimulateArgs),
    /// Track a sequence (or every sequence of a dataset) from its first ground-truth box.
    Track(TrackArgs),
    /// Score results against ground truth.
    Eval(EvalArgs),
    /// Fit Gaussian and Laplace models to annotation displacements.
    Fit(FitArgs),
}

/// Tracker tunables. Each flag overrides the same key in `--config`.
#[derive(Debug, Args, Default)]
pub struct Tunables {
    /// key=value settings file; see README for keys.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Motion prior family: gaussian or laplace.
    #[arg(long)]
    pub family: Option<String>,
    /// Sets both conversion coefficients.
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(long)]
    pub lambda_x: Option<String>,
    #[arg(long)]
    pub lambda_y: Option<String>,
    /// Use exp(-(λΔ)²/2) instead of exp(-(λΔ)²) for the Gaussian kernel.
    #[arg(long, value_name = "BOOL")]
    pub standard_gaussian: Option<String>,
    /// Displacement hypotheses per frame, including zero.
    #[arg(long, value_name = "N")]
    pub candidates: Option<String>,
    /// Comma-separated size multipliers, e.g. 0.97,1,1.03.
    #[arg(long)]
    pub scales: Option<String>,
    #[arg(long)]
    pub sigma_alpha: Option<String>,
    /// Template update cadence K in frames.
    #[arg(long, value_name = "K")]
    pub update_interval: Option<String>,
    /// Template update confidence gate.
    #[arg(long, value_name = "TAU")]
    pub update_confidence: Option<String>,
    /// Template blend rate.
    #[arg(long, value_name = "ETA")]
    pub update_blend: Option<String>,
    /// Template side length in pixels.
    #[arg(long, value_name = "PX")]
    pub template_size: Option<String>,
    /// ncc or oracle.
    #[arg(long)]
    pub scorer: Option<String>,
    /// prev or avg.
    #[arg(long)]
    pub encoding: Option<String>,
    /// bayes or likelihood.
    #[arg(long)]
    pub fusion: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Histogram bins for fit.
    #[arg(long)]
    pub bins: Option<String>,
    /// Box size that normalizes center error: gt or pred.
    #[arg(long)]
    pub norm_reference: Option<String>,
}

impl Tunables {
    fn overrides(&self) -> [(&'static str, &Option<String>); 18] {
        [
            ("family", &self.family),
            ("lambda", &self.lambda),
            ("lambda_x", &self.lambda_x),
            ("lambda_y", &self.lambda_y),
            ("standard_gaussian", &self.standard_gaussian),
            ("candidates", &self.candidates),
            ("scales", &self.scales),
            ("sigma_alpha", &self.sigma_alpha),
            ("update_interval", &self.update_interval),
            ("update_confidence", &self.update_confidence),
            ("update_blend", &self.update_blend),
            ("template_size", &self.template_size),
            ("scorer", &self.scorer),
            ("encoding", &self.encoding),
            ("fusion", &self.fusion),
            ("seed", &self.seed),
            ("bins", &self.bins),
            ("norm_reference", &self.norm_reference),
        ]
    }

    /// Defaults, then the config file, then flags.
    pub fn settings(&self) -> Result<Settings> {
        let mut s = Settings::default();
        if let Some(path) = &self.config {
            s.apply_file(path)?;
        }
        for (key, value) in self.overrides() {
            if let Some(v) = value {
                s.set(key, v).map_err(|m| Error::Usage(format!("--{}: {m}", key.replace('_', "-"))))?;
            }
        }
        Ok(s)
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SimulateArgs {
    /// Output sequence directory.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub frames: usize,
    #[arg(long, default_value_t = 128)]
    pub width: usize,
    #[arg(long, default_value_t = 128)]
    pub height: usize,
    #[arg(long, default_value_t = 20.0)]
    pub blob_width: f64,
    #[arg(long, default_value_t = 20.0)]
    pub blob_height: f64,
    /// Family of the target's per-frame motion.
    #[arg(long, default_value = "gaussian")]
    pub motion_family: String,
    /// Conversion coefficient of the target's motion; larger is slower.
    #[arg(long, default_value_t = 8.0)]
    pub motion_lambda: f64,
    #[arg(long, default_value_t = 0)]
    pub distractors: usize,
    /// Per-frame change of target peak intensity.
    #[arg(long, default_value_t = 0.0)]
    pub drift: f64,
    /// Gaussian blur sigma in pixels.
    #[arg(long, default_value_t = 0.0)]
    pub blur: f64,
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl SimulateArgs {
    pub fn scenario(&self) -> Result<ScenarioConfig> {
        let family: MotionFamily =
            self.motion_family.parse().map_err(|_| Error::Usage(format!("unknown family {:?}", self.motion_family)))?;
        let motion = SystemModelParams::new(family, self.motion_lambda, self.motion_lambda)
            .map_err(|e| Error::Usage(format!("--motion-lambda: {e}")))?;
        Ok(ScenarioConfig {
            frame_width: self.width,
            frame_height: self.height,
            n_frames: self.frames,
            blob_width: self.blob_width,
            blob_height: self.blob_height,
            motion,
            distractors: self.distractors,
            intensity_drift: self.drift,
            blur_radius: self.blur,
            noise_std: self.noise,
            seed: self.seed,
        })
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true, group(ArgGroup::new("input").required(true).args(["seq", "dataset"])))]
pub struct TrackArgs {
    /// Sequence directory (frames/, groundtruth.txt).
    #[arg(long, value_name = "DIR", requires = "out")]
    pub seq: Option<PathBuf>,
    /// Results CSV for --seq.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Directory of sequence directories, tracked in parallel.
    #[arg(long, value_name = "DIR", requires = "out_dir", conflicts_with = "seq")]
    pub dataset: Option<PathBuf>,
    /// Receives one <name>.csv per sequence with --dataset.
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    #[command(flatten)]
    pub tunables: Tunables,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true, group(ArgGroup::new("input").required(true).args(["results", "dataset"])))]
pub struct EvalArgs {
    /// Results CSV from `track`.
    #[arg(long, value_name = "FILE", requires = "gt")]
    pub results: Option<PathBuf>,
    /// Ground-truth annotation file.
    #[arg(long, value_name = "FILE")]
    pub gt: Option<PathBuf>,
    /// Dataset directory; pairs each sequence with <results-dir>/<name>.csv.
    #[arg(long, value_name = "DIR", requires = "results_dir", conflicts_with = "results")]
    pub dataset: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    pub results_dir: Option<PathBuf>,
    /// Write precision, success and normalized-precision curve CSVs here.
    #[arg(long, value_name = "DIR")]
    pub curves: Option<PathBuf>,
    #[command(flatten)]
    pub tunables: Tunables,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct FitArgs {
    /// Annotation files; displacements are pooled.
    #[arg(long, value_name = "FILE", required = true, num_args = 1..)]
    pub gt: Vec<PathBuf>,
    #[command(flatten)]
    pub tunables: Tunables,
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let w = |out: &mut dyn Write, s: &str| out.write_all(s.as_bytes()).map_err(|e| Error::io("<stdout>", e));
    match &cli.command {
        Command::Simulate(a) => {
            run_simulate(&a.scenario()?, &a.out)?;
        }
        Command::Track(a) => {
            let settings = a.tunables.settings()?;
            match (&a.seq, &a.dataset) {
                (Some(dir), _) => {
                    let manifest = SequenceManifest::from_dir(dir)?;
                    run_track(&manifest, &settings, a.out.as_ref().expect("clap enforces --out"))?;
                }
                (None, Some(root)) => {
                    let seqs = discover_dataset(root)?;
                    run_track_dataset(&seqs, &settings, a.out_dir.as_ref().expect("clap enforces --out-dir"))?;
                }
                (None, None) => unreachable!("clap enforces an input"),
            }
        }
        Command::Eval(a) => {
            let settings = a.tunables.settings()?;
            match (&a.results, &a.dataset) {
                (Some(results), _) => {
                    let gt = a.gt.as_ref().expect("clap enforces --gt");
                    let report = evaluate_files(results, gt, settings.norm_reference)?;
                    if let Some(dir) = &a.curves {
                        write_curves(dir, "", &report)?;
                    }
                    w(out, &format_metrics("sequence", &report.summary))?;
                }
                (None, Some(root)) => {
                    let seqs = discover_dataset(root)?;
                    let results_dir = a.results_dir.as_ref().expect("clap enforces --results-dir");
                    let report = run_eval_dataset(&seqs, results_dir, settings.norm_reference)?;
                    if let Some(dir) = &a.curves {
                        for (name, r) in &report.sequences {
                            write_curves(dir, &format!("{name}_"), r)?;
                        }
                    }
                    w(out, &report.render())?;
                }
                (None, None) => unreachable!("clap enforces an input"),
            }
        }
        Command::Fit(a) => {
            let settings = a.tunables.settings()?;
            let report = run_fit(&a.gt, settings.bins)?;
            w(out, &render_fit(&report))?;
        }
    }
    Ok(())
}

/// Parses `args`, runs the command and returns the process exit status:
/// 0 success or help, 1 usage error, 2 data error, 3 tracking error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    match execute(&cli, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("dbf: {e}");
            e.exit_code()
        }
    }
}
