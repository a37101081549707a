//! Single-profile analysis pipeline and the text artifacts built from it:
//! series CSV, summaries, fits, plot panels and cohort tables.
//!
//! CSV and JSON carry full precision (shortest round-trip decimal form);
//! Markdown tables round to two decimals. Output depends only on the
//! inputs, so repeated runs are byte-identical.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ineq::IndexPair;
use crate::landau::FitResult;
use crate::soc::{career_summary, hirsch_sqrt_diagnostic, CareerSummary, CohortStats, SocConfig};
use crate::windows::{
    window_series, IndexSeries, ResearcherProfile, SkipReason, WindowConfig, WindowEntry,
    WindowOutcome,
};

pub const SERIES_HEADER: &str = "central_year,g,k,n_pubs,n_cites,skipped";

/// Number of samples of the fitted line in the inset panel.
pub const FIT_LINE_SAMPLES: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RunConfig {
    pub window: WindowConfig,
    pub soc: SocConfig,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.window.validate()?;
        self.soc.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub series: IndexSeries,
    pub summary: CareerSummary,
}

/// Windows a profile and summarizes the career.
pub fn analyze_profile(profile: &ResearcherProfile, config: &RunConfig) -> Result<Analysis> {
    config.validate()?;
    let series = window_series(profile, &config.window)?;
    let summary = career_summary(profile, &series, &config.soc)?;
    Ok(Analysis { series, summary })
}

fn opt_f64(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn series_to_csv(series: &IndexSeries) -> String {
    let mut out = String::with_capacity(32 * (series.len() + 1));
    out.push_str(SERIES_HEADER);
    out.push('\n');
    for e in &series.entries {
        let idx = e.indices();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            e.central_year,
            opt_f64(idx.map(|p| p.g)),
            opt_f64(idx.map(|p| p.k)),
            e.n_pubs,
            e.n_cites,
            e.skip_reason().map(|r| r.as_str()).unwrap_or("")
        );
    }
    out
}

/// Parses a series file written by [`series_to_csv`].
pub fn parse_series_csv(text: &str, path: &Path) -> Result<IndexSeries> {
    let parse_err = |line: u64, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim_end_matches('\r') == SERIES_HEADER => {}
        Some((_, h)) => {
            return Err(parse_err(
                1,
                format!("expected header `{SERIES_HEADER}`, found `{h}`"),
            ))
        }
        None => return Err(parse_err(1, "empty series file".into())),
    }
    let mut entries = Vec::new();
    for (i, raw) in lines {
        let line_no = i as u64 + 1;
        let raw = raw.trim_end_matches('\r');
        if raw.is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split(',').collect();
        if fields.len() != 6 {
            return Err(parse_err(
                line_no,
                format!("expected 6 fields, found {}", fields.len()),
            ));
        }
        let int = |s: &str, what: &str| -> Result<i64> {
            s.parse()
                .map_err(|_| parse_err(line_no, format!("{what} {s:?} is not an integer")))
        };
        let float = |s: &str, what: &str| -> Result<f64> {
            s.parse()
                .map_err(|_| parse_err(line_no, format!("{what} {s:?} is not a number")))
        };
        let central_year = int(fields[0], "central_year")? as i32;
        let n_pubs = int(fields[3], "n_pubs")? as usize;
        let n_cites = int(fields[4], "n_cites")? as u64;
        let outcome = if fields[5].is_empty() {
            WindowOutcome::Indices(IndexPair::new(
                float(fields[1], "g")?,
                float(fields[2], "k")?,
            ))
        } else {
            let reason: SkipReason = fields[5].parse().map_err(|m| parse_err(line_no, m))?;
            if !fields[1].is_empty() || !fields[2].is_empty() {
                return Err(parse_err(line_no, "skipped row carries g/k values".into()));
            }
            WindowOutcome::Skipped(reason)
        };
        entries.push(WindowEntry {
            central_year,
            n_pubs,
            n_cites,
            outcome,
        });
    }
    Ok(IndexSeries::new(entries))
}

pub fn load_series(path: impl AsRef<Path>) -> Result<IndexSeries> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_series_csv(&text, path)
}

/// Summary plus the informational `h / sqrt(N_c)` ratio, as serialized.
#[derive(Debug, Clone, Serialize)]
struct SummaryDocument<'a> {
    #[serde(flatten)]
    summary: &'a CareerSummary,
    h_over_sqrt_nc: Option<f64>,
}

pub fn summary_to_json(summary: &CareerSummary) -> String {
    let doc = SummaryDocument {
        summary,
        h_over_sqrt_nc: hirsch_sqrt_diagnostic(summary).ok(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("summary serializes");
    s.push('\n');
    s
}

pub fn fit_to_json(fit: &FitResult) -> String {
    let mut s = serde_json::to_string_pretty(fit).expect("fit serializes");
    s.push('\n');
    s
}

pub fn parse_fit_json(text: &str, path: &Path) -> Result<FitResult> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line() as u64,
        message: e.to_string(),
    })
}

/// Cohort table row: a researcher's summary or the reason it failed.
#[derive(Debug, Clone, PartialEq)]
pub struct CohortRow {
    pub name: String,
    pub outcome: std::result::Result<CareerSummary, String>,
}

const COHORT_CSV_HEADER: &str = "name,tags,n_p,n_c,h,g_overall,k_overall,g_yearly_mean,g_yearly_sd,\
k_yearly_mean,k_yearly_sd,crossing,n_c_max,dunbar,r,soc_flag_r,error";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn summary_csv_cells(s: &CareerSummary) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        s.n_p,
        s.n_c,
        s.h,
        s.g_overall,
        s.k_overall,
        s.yearly_avg.g.mean,
        s.yearly_avg.g.sd,
        s.yearly_avg.k.mean,
        s.yearly_avg.k.sd,
        s.crossing,
        s.n_c_max,
        s.dunbar,
        s.r,
        s.soc_flag_r
    )
}

pub fn summary_to_csv(summary: &CareerSummary) -> String {
    cohort_to_csv(&[CohortRow {
        name: summary.name.clone(),
        outcome: Ok(summary.clone()),
    }])
}

pub fn cohort_to_csv(rows: &[CohortRow]) -> String {
    let mut out = String::new();
    out.push_str(COHORT_CSV_HEADER);
    out.push('\n');
    for row in rows {
        match &row.outcome {
            Ok(s) => {
                let _ = writeln!(
                    out,
                    "{},{},{},",
                    csv_field(&row.name),
                    csv_field(&s.tags.join(";")),
                    summary_csv_cells(s)
                );
            }
            Err(msg) => {
                // name, 15 empty cells, error
                let _ = writeln!(
                    out,
                    "{}{}{}",
                    csv_field(&row.name),
                    ",".repeat(16),
                    csv_field(msg)
                );
            }
        }
    }
    out
}

#[derive(Debug, Serialize)]
struct CohortDocument<'a> {
    researchers: Vec<CohortJsonRow<'a>>,
    aggregates: Option<&'a CohortStats>,
}

#[derive(Debug, Serialize)]
struct CohortJsonRow<'a> {
    name: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    summary: Option<SummaryDocument<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
}

pub fn cohort_to_json(rows: &[CohortRow], stats: Option<&CohortStats>) -> String {
    let doc = CohortDocument {
        researchers: rows
            .iter()
            .map(|r| match &r.outcome {
                Ok(s) => CohortJsonRow {
                    name: &r.name,
                    summary: Some(SummaryDocument {
                        summary: s,
                        h_over_sqrt_nc: hirsch_sqrt_diagnostic(s).ok(),
                    }),
                    error: None,
                },
                Err(e) => CohortJsonRow {
                    name: &r.name,
                    summary: None,
                    error: Some(e),
                },
            })
            .collect(),
        aggregates: stats,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("cohort serializes");
    s.push('\n');
    s
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|")
}

/// Table-1 and Table-2 shaped Markdown, two decimals.
pub fn cohort_to_markdown(rows: &[CohortRow], stats: Option<&CohortStats>) -> String {
    let mut out = String::new();
    out.push_str("## Inequality indices\n\n");
    out.push_str(
        "| Researcher | Tags | N_p | N_c | h | g (overall) | k (overall) \
         | g (yearly av.) | k (yearly av.) | g=k crossed |\n",
    );
    out.push_str("|---|---|---:|---:|---:|---:|---:|---:|---:|---|\n");
    for row in rows {
        match &row.outcome {
            Ok(s) => {
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} | {:.2} | {:.2} | {:.2} | {:.2} | {} |",
                    md_cell(&row.name),
                    md_cell(&s.tags.join(", ")),
                    s.n_p,
                    s.n_c,
                    s.h,
                    s.g_overall,
                    s.k_overall,
                    s.yearly_avg.g,
                    s.yearly_avg.k,
                    s.crossing
                );
            }
            Err(e) => {
                let _ = writeln!(
                    out,
                    "| {} | | | | | | | | | error: {} |",
                    md_cell(&row.name),
                    md_cell(e)
                );
            }
        }
    }

    out.push_str("\n## Quick indicator R = n_c_max / D\n\n");
    out.push_str(
        "| Researcher | N_p | N_c | n_c_max | h | D = N_c/N_p | R = n_c_max/D | R flag | g=k crossed |\n",
    );
    out.push_str("|---|---:|---:|---:|---:|---:|---:|---|---|\n");
    for row in rows {
        if let Ok(s) = &row.outcome {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {:.2} | {:.2} | {} | {} |",
                md_cell(&row.name),
                s.n_p,
                s.n_c,
                s.n_c_max,
                s.h,
                s.dunbar,
                s.r,
                if s.soc_flag_r { "yes" } else { "no" },
                s.crossing
            );
        }
    }

    if let Some(st) = stats {
        out.push_str("\n## Cohort\n\n");
        let _ = writeln!(out, "- researchers analyzed: {}", st.n_researchers);
        let _ = writeln!(out, "- crossing = Yes: {:.2}", st.yes_fraction);
        let _ = writeln!(out, "- R flag agrees with crossing: {:.2}", st.agreement_rate);
        match st.flagged_success_rate {
            Some(rate) => {
                let _ = writeln!(
                    out,
                    "- crossing = Yes among {} R-flagged: {:.2}",
                    st.n_flagged, rate
                );
            }
            None => out.push_str("- no researcher is R-flagged\n"),
        }
    }
    out
}

pub fn summary_to_markdown(summary: &CareerSummary) -> String {
    cohort_to_markdown(
        &[CohortRow {
            name: summary.name.clone(),
            outcome: Ok(summary.clone()),
        }],
        None,
    )
}

/// Time panel: one row per window, empty `g`/`k` for skipped windows.
pub fn time_panel_csv(series: &IndexSeries, soc_mark: f64) -> String {
    let mut out = String::from("year,g,k,soc_mark\n");
    for e in &series.entries {
        let idx = e.indices();
        let _ = writeln!(
            out,
            "{},{},{},{}",
            e.central_year,
            opt_f64(idx.map(|p| p.g)),
            opt_f64(idx.map(|p| p.k)),
            soc_mark
        );
    }
    out
}

/// Inset panel: the `(g, k)` points followed by samples of the fitted line
/// at evenly spaced `g` in `[0, 1]`, endpoints included.
pub fn inset_panel_csv(series: &IndexSeries, fit: &FitResult) -> String {
    let mut out = String::from("kind,g,k\n");
    for (_, p) in series.usable() {
        let _ = writeln!(out, "point,{},{}", p.g, p.k);
    }
    for i in 0..FIT_LINE_SAMPLES {
        let g = i as f64 / (FIT_LINE_SAMPLES - 1) as f64;
        let _ = writeln!(out, "fit,{},{}", g, fit.predict(g));
    }
    out
}

/// Filesystem-safe stem derived from a display name.
pub fn slug(name: &str) -> String {
    let mut s: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() {
                c.to_ascii_lowercase()
            } else {
                '_'
            }
        })
        .collect();
    while s.contains("__") {
        s = s.replace("__", "_");
    }
    let s = s.trim_matches('_').to_string();
    if s.is_empty() {
        "profile".into()
    } else {
        s
    }
}
