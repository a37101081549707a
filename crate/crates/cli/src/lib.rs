//! `citeq` command-line front end.
//!
//! Every subcommand writes its artifacts under `--out` and prints the
//! written paths, one per line, on stdout. Failures print a single
//! `citeq: error[<kind>]: <message>` line on stderr and exit with
//! 1 (input), 2 (computation) or 3 (partial batch failure).

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use citeq_core::report::{
    self, cohort_to_csv, cohort_to_json, cohort_to_markdown, fit_to_json, inset_panel_csv,
    series_to_csv, summary_to_csv, summary_to_json, summary_to_markdown, time_panel_csv,
    CohortRow,
};
use citeq_core::{
    analyze_profile, cohort_stats, fit_k_vs_g, load_manifest, load_profile, save_profile,
    synth_profile, ErrorKind, RunConfig, SocConfig, SynthModel, SynthSpec, WindowConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
    Markdown,
}

impl OutputFormat {
    fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
            OutputFormat::Markdown => "md",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "citeq", version, about = "Citation inequality indices over career windows")]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Window width in years
    #[arg(long, global = true, default_value_t = 5)]
    pub window_width: u32,
    /// Years between successive window starts
    #[arg(long, global = true, default_value_t = 1)]
    pub stride: u32,
    /// Inclusive last data year
    #[arg(long, global = true, default_value_t = 2022)]
    pub end_year: i32,
    /// Minimum publications for a window to be evaluated
    #[arg(long, global = true, default_value_t = 2)]
    pub min_pubs: usize,
    #[arg(long, global = true, default_value_t = 0.82)]
    pub soc_mark: f64,
    #[arg(long, global = true, default_value_t = 0.02)]
    pub soc_band: f64,
    /// Largest k - g still counted as a marginal crossing
    #[arg(long, global = true, default_value_t = 0.01)]
    pub marginal_tol: f64,
    #[arg(long, global = true, default_value_t = 40.0)]
    pub r_threshold: f64,
    /// Format of summary and cohort tables
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Output directory
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Seed for `synth`
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

impl GlobalOpts {
    pub fn run_config(&self) -> RunConfig {
        RunConfig {
            window: WindowConfig {
                width_years: self.window_width,
                stride_years: self.stride,
                end_year: self.end_year,
                min_pubs: self.min_pubs,
            },
            soc: SocConfig {
                soc_mark: self.soc_mark,
                soc_band: self.soc_band,
                marginal_tolerance: self.marginal_tol,
                r_threshold: self.r_threshold,
            },
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Window one profile: series CSV plus career summary
    Analyze { profile: PathBuf },
    /// Fit k = 1/2 + c g to a series file
    Fit { series: PathBuf },
    /// Analyze every profile of a manifest into cohort tables
    Batch { manifest: PathBuf },
    /// Emit time-panel and k-vs-g inset data for plotting
    Plotdata { series: PathBuf },
    /// Write a synthetic JSON profile
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[arg(long, default_value = "powerlaw")]
    pub model: SynthModel,
    #[arg(long, default_value_t = 100)]
    pub n_papers: usize,
    /// Power-law exponent of the count density
    #[arg(long, default_value_t = 2.5)]
    pub exponent: f64,
    /// Equal: the count; uniform: upper bound; powerlaw: minimum
    #[arg(long, default_value_t = 10)]
    pub scale: u64,
    #[arg(long, default_value_t = 2000)]
    pub first_year: i32,
    #[arg(long, default_value_t = 2022)]
    pub last_year: i32,
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    Input,
    Computation,
    PartialBatch,
}

impl FailureKind {
    pub fn exit_code(self) -> i32 {
        match self {
            FailureKind::Input => 1,
            FailureKind::Computation => 2,
            FailureKind::PartialBatch => 3,
        }
    }

    fn label(self) -> &'static str {
        match self {
            FailureKind::Input => "input",
            FailureKind::Computation => "compute",
            FailureKind::PartialBatch => "partial",
        }
    }
}

#[derive(Debug, Error)]
#[error("{message}")]
pub struct CliError {
    pub kind: FailureKind,
    pub message: String,
    /// Files written before the failure (partial batches).
    pub written: Vec<PathBuf>,
}

impl CliError {
    fn new(kind: FailureKind, message: impl Into<String>) -> Self {
        Self {
            kind,
            message: message.into(),
            written: Vec::new(),
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Self::new(FailureKind::Input, format!("{}: {e}", path.display()))
    }

    /// One-line diagnostic, `citeq: error[<kind>]: <message>`.
    pub fn diagnostic(&self) -> String {
        let msg = self.message.replace(['\n', '\r'], " ");
        format!("citeq: error[{}]: {msg}", self.kind.label())
    }
}

impl From<citeq_core::Error> for CliError {
    fn from(e: citeq_core::Error) -> Self {
        let kind = match e.kind() {
            ErrorKind::Input => FailureKind::Input,
            ErrorKind::Computation => FailureKind::Computation,
        };
        Self::new(kind, e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn write_file(path: &Path, contents: &str) -> CliResult<PathBuf> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))?;
    Ok(path.to_path_buf())
}

/// File stem with any `.series` suffix removed.
fn artifact_stem(path: &Path) -> String {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "series".into());
    stem.strip_suffix(".series").map(str::to_string).unwrap_or(stem)
}

pub fn run(cli: &Cli) -> CliResult<Vec<PathBuf>> {
    let opts = &cli.opts;
    let config = opts.run_config();
    config.validate()?;
    match &cli.command {
        Command::Analyze { profile } => cmd_analyze(profile, &config, opts),
        Command::Fit { series } => cmd_fit(series, opts),
        Command::Batch { manifest } => cmd_batch(manifest, &config, opts),
        Command::Plotdata { series } => cmd_plotdata(series, opts),
        Command::Synth(args) => cmd_synth(args, opts),
    }
}

fn summary_text(summary: &citeq_core::CareerSummary, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => summary_to_json(summary),
        OutputFormat::Csv => summary_to_csv(summary),
        OutputFormat::Markdown => summary_to_markdown(summary),
    }
}

pub fn cmd_analyze(profile_path: &Path, config: &RunConfig, opts: &GlobalOpts) -> CliResult<Vec<PathBuf>> {
    let profile = load_profile(profile_path)?;
    let analysis = analyze_profile(&profile, config)?;
    let stem = report::slug(&profile.name);
    let series_path = opts.out.join(format!("{stem}.series.csv"));
    let summary_path = opts
        .out
        .join(format!("{stem}.summary.{}", opts.format.extension()));
    Ok(vec![
        write_file(&series_path, &series_to_csv(&analysis.series))?,
        write_file(&summary_path, &summary_text(&analysis.summary, opts.format))?,
    ])
}

pub fn cmd_fit(series_path: &Path, opts: &GlobalOpts) -> CliResult<Vec<PathBuf>> {
    let series = report::load_series(series_path)?;
    let fit = fit_k_vs_g(&series.points())?;
    let path = opts.out.join(format!("{}.fit.json", artifact_stem(series_path)));
    Ok(vec![write_file(&path, &fit_to_json(&fit))?])
}

pub fn cmd_plotdata(series_path: &Path, opts: &GlobalOpts) -> CliResult<Vec<PathBuf>> {
    let series = report::load_series(series_path)?;
    let fit = fit_k_vs_g(&series.points())?;
    let stem = artifact_stem(series_path);
    Ok(vec![
        write_file(
            &opts.out.join(format!("{stem}.time.csv")),
            &time_panel_csv(&series, opts.soc_mark),
        )?,
        write_file(
            &opts.out.join(format!("{stem}.inset.csv")),
            &inset_panel_csv(&series, &fit),
        )?,
    ])
}

pub fn cmd_synth(args: &SynthArgs, opts: &GlobalOpts) -> CliResult<Vec<PathBuf>> {
    let spec = SynthSpec {
        name: args.name.clone(),
        model: args.model,
        n_papers: args.n_papers,
        exponent: args.exponent,
        scale: args.scale,
        first_year: args.first_year,
        last_year: args.last_year,
        seed: opts.seed,
    };
    let profile = synth_profile(&spec)?;
    let path = opts.out.join(format!("{}.json", report::slug(&profile.name)));
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    save_profile(&path, &profile)?;
    Ok(vec![path])
}

#[derive(Debug, Serialize)]
struct BatchFailure<'a> {
    name: &'a str,
    error: &'a str,
}

/// Distinct slugs in manifest order; repeats get `-2`, `-3`, ...
fn unique_slugs<'a>(names: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut seen = std::collections::HashMap::<String, usize>::new();
    names
        .map(|n| {
            let base = report::slug(n);
            let count = seen.entry(base.clone()).or_insert(0);
            *count += 1;
            if *count == 1 {
                base
            } else {
                format!("{base}-{count}")
            }
        })
        .collect()
}

pub fn cmd_batch(manifest_path: &Path, config: &RunConfig, opts: &GlobalOpts) -> CliResult<Vec<PathBuf>> {
    let manifest = load_manifest(manifest_path)?;
    if manifest.entries.is_empty() {
        return Err(CliError::new(
            FailureKind::Input,
            format!("{}: manifest lists no profiles", manifest_path.display()),
        ));
    }
    let slugs = unique_slugs(manifest.entries.iter().map(|e| e.name.as_str()));
    let series_dir = opts.out.join("series");

    // one task per researcher; each owns its series file
    let results: Vec<(CohortRow, Option<PathBuf>)> = manifest
        .entries
        .par_iter()
        .zip(slugs.par_iter())
        .map(|(entry, slug)| {
            let outcome = manifest
                .load_entry(entry)
                .map_err(CliError::from)
                .and_then(|p| analyze_profile(&p, config).map_err(CliError::from))
                .and_then(|a| {
                    let path = series_dir.join(format!("{slug}.series.csv"));
                    write_file(&path, &series_to_csv(&a.series)).map(|p| (a.summary, p))
                });
            match outcome {
                Ok((summary, path)) => (
                    CohortRow {
                        name: entry.name.clone(),
                        outcome: Ok(summary),
                    },
                    Some(path),
                ),
                Err(e) => (
                    CohortRow {
                        name: entry.name.clone(),
                        outcome: Err(e.message),
                    },
                    None,
                ),
            }
        })
        .collect();

    let (rows, series_paths): (Vec<CohortRow>, Vec<Option<PathBuf>>) = results.into_iter().unzip();
    let failures: Vec<BatchFailure> = rows
        .iter()
        .filter_map(|r| r.outcome.as_ref().err().map(|e| BatchFailure { name: &r.name, error: e }))
        .collect();
    if failures.len() == rows.len() {
        let first = failures[0].error;
        return Err(CliError::new(
            FailureKind::Input,
            format!("all {} profiles failed; first: {first}", rows.len()),
        ));
    }

    let flags: Vec<_> = rows
        .iter()
        .filter_map(|r| r.outcome.as_ref().ok())
        .map(|s| (s.crossing, s.soc_flag_r))
        .collect();
    let stats = cohort_stats(&flags);
    let table = match opts.format {
        OutputFormat::Csv => cohort_to_csv(&rows),
        OutputFormat::Json => cohort_to_json(&rows, stats.as_ref()),
        OutputFormat::Markdown => cohort_to_markdown(&rows, stats.as_ref()),
    };

    let mut written: Vec<PathBuf> = series_paths.into_iter().flatten().collect();
    written.push(write_file(
        &opts.out.join(format!("cohort.{}", opts.format.extension())),
        &table,
    )?);
    let mut agg = serde_json::to_string_pretty(&serde_json::json!({
        "aggregates": stats,
        "failures": failures,
    }))
    .expect("aggregates serialize");
    agg.push('\n');
    written.push(write_file(&opts.out.join("cohort_aggregates.json"), &agg)?);

    if !failures.is_empty() {
        let mut err = CliError::new(
            FailureKind::PartialBatch,
            format!(
                "{} of {} profiles failed; first: {}",
                failures.len(),
                rows.len(),
                failures[0].error
            ),
        );
        err.written = written;
        return Err(err);
    }
    Ok(written)
}
