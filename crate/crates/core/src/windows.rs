//! Researcher profiles and the sliding publication-year window series.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ineq::{build_lorenz, CitationVector, IndexPair};

pub const MIN_YEAR: i32 = 1800;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Publication {
    pub id: String,
    pub year: i32,
    /// Present-day citation count.
    pub citations: u64,
}

impl Publication {
    pub fn new(id: impl Into<String>, year: i32, citations: u64) -> Self {
        Self {
            id: id.into(),
            year,
            citations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResearcherProfile {
    pub name: String,
    pub tags: Vec<String>,
    pub publications: Vec<Publication>,
}

impl ResearcherProfile {
    pub fn new(name: impl Into<String>, tags: Vec<String>, publications: Vec<Publication>) -> Self {
        Self {
            name: name.into(),
            tags,
            publications,
        }
    }

    /// Checks the profile invariants, returning a description of the first
    /// violation.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.publications.is_empty() {
            return Err("profile has no publications".into());
        }
        let max_year = current_year();
        let mut seen = HashSet::with_capacity(self.publications.len());
        for p in &self.publications {
            if !(MIN_YEAR..=max_year).contains(&p.year) {
                return Err(format!(
                    "publication {:?}: year {} outside [{MIN_YEAR}, {max_year}]",
                    p.id, p.year
                ));
            }
            if !seen.insert(p.id.as_str()) {
                return Err(format!("duplicate pub_id {:?}", p.id));
            }
        }
        Ok(())
    }

    pub fn citation_counts(&self) -> Vec<u64> {
        self.publications.iter().map(|p| p.citations).collect()
    }

    pub fn first_year(&self) -> Option<i32> {
        self.publications.iter().map(|p| p.year).min()
    }

    /// Sorts publications by `(year, id)`.
    pub fn sort(&mut self) {
        self.publications
            .sort_by(|a, b| a.year.cmp(&b.year).then_with(|| a.id.cmp(&b.id)));
    }
}

/// Calendar year of the system clock (UTC).
pub fn current_year() -> i32 {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs() as i64)
        .unwrap_or(0);
    year_from_days(secs.div_euclid(86_400))
}

// days since 1970-01-01 to proleptic Gregorian year
fn year_from_days(days: i64) -> i32 {
    let z = days + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z - era * 146_097;
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let month = if mp < 10 { mp + 3 } else { mp - 9 };
    let year = yoe + era * 400 + i64::from(month <= 2);
    year as i32
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowConfig {
    pub width_years: u32,
    pub stride_years: u32,
    /// Inclusive last data year.
    pub end_year: i32,
    pub min_pubs: usize,
}

impl Default for WindowConfig {
    fn default() -> Self {
        Self {
            width_years: 5,
            stride_years: 1,
            end_year: 2022,
            min_pubs: 2,
        }
    }
}

impl WindowConfig {
    pub fn validate(&self) -> Result<()> {
        if self.width_years == 0 {
            return Err(Error::Config("window width must be at least 1".into()));
        }
        if self.stride_years == 0 {
            return Err(Error::Config("stride must be at least 1".into()));
        }
        if self.min_pubs == 0 {
            return Err(Error::Config("min_pubs must be at least 1".into()));
        }
        Ok(())
    }

    pub fn central_offset(&self) -> i32 {
        (self.width_years / 2) as i32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    TooFewPubs,
    ZeroCitations,
}

impl SkipReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            SkipReason::TooFewPubs => "too_few_pubs",
            SkipReason::ZeroCitations => "zero_citations",
        }
    }
}

impl fmt::Display for SkipReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SkipReason {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "too_few_pubs" => Ok(SkipReason::TooFewPubs),
            "zero_citations" => Ok(SkipReason::ZeroCitations),
            other => Err(format!("unknown skip reason {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowOutcome {
    Indices(IndexPair),
    Skipped(SkipReason),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowEntry {
    pub central_year: i32,
    pub n_pubs: usize,
    pub n_cites: u64,
    pub outcome: WindowOutcome,
}

impl WindowEntry {
    pub fn indices(&self) -> Option<IndexPair> {
        match self.outcome {
            WindowOutcome::Indices(p) => Some(p),
            WindowOutcome::Skipped(_) => None,
        }
    }

    pub fn skip_reason(&self) -> Option<SkipReason> {
        match self.outcome {
            WindowOutcome::Indices(_) => None,
            WindowOutcome::Skipped(r) => Some(r),
        }
    }
}

/// Per-central-year indices, skipped windows included so the time axis
/// stays continuous.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct IndexSeries {
    pub entries: Vec<WindowEntry>,
}

impl IndexSeries {
    pub fn new(entries: Vec<WindowEntry>) -> Self {
        Self { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Non-skipped `(central_year, indices)` pairs in year order.
    pub fn usable(&self) -> impl Iterator<Item = (i32, IndexPair)> + '_ {
        self.entries
            .iter()
            .filter_map(|e| e.indices().map(|p| (e.central_year, p)))
    }

    pub fn points(&self) -> Vec<IndexPair> {
        self.usable().map(|(_, p)| p).collect()
    }
}

/// Slides a fixed-width window over publication years.
///
/// Windows start at the first publication year and advance by the stride
/// while the window end stays within `end_year`. Each window's population
/// is every publication dated inside it.
pub fn window_series(profile: &ResearcherProfile, config: &WindowConfig) -> Result<IndexSeries> {
    config.validate()?;
    let first_year = profile.first_year().ok_or(Error::EmptyProfile)?;
    let width = config.width_years as i32;
    let stride = config.stride_years as i32;
    if first_year + width - 1 > config.end_year {
        return Err(Error::NoWindows {
            first_year,
            width: config.width_years,
            end_year: config.end_year,
        });
    }

    let mut by_year: Vec<(i32, u64)> = profile
        .publications
        .iter()
        .filter(|p| p.year <= config.end_year)
        .map(|p| (p.year, p.citations))
        .collect();
    by_year.sort_unstable();

    let mut entries = Vec::new();
    let mut start = first_year;
    while start + width - 1 <= config.end_year {
        let end = start + width - 1;
        let lo = by_year.partition_point(|&(y, _)| y < start);
        let hi = by_year.partition_point(|&(y, _)| y <= end);
        let counts: Vec<u64> = by_year[lo..hi].iter().map(|&(_, c)| c).collect();
        let total: u128 = counts.iter().map(|&c| u128::from(c)).sum();

        let outcome = if counts.len() < config.min_pubs {
            WindowOutcome::Skipped(SkipReason::TooFewPubs)
        } else if total == 0 {
            WindowOutcome::Skipped(SkipReason::ZeroCitations)
        } else {
            let curve = build_lorenz(&CitationVector::new(counts.clone())?)?;
            WindowOutcome::Indices(curve.indices())
        };
        entries.push(WindowEntry {
            central_year: start + config.central_offset(),
            n_pubs: counts.len(),
            n_cites: u64::try_from(total).unwrap_or(u64::MAX),
            outcome,
        });
        start += stride;
    }
    Ok(IndexSeries { entries })
}

/// Number of windows [`window_series`] produces, or zero.
pub fn window_count(first_year: i32, config: &WindowConfig) -> usize {
    let span = config.end_year - first_year - config.width_years as i32 + 1;
    if span < 0 {
        0
    } else {
        (span / config.stride_years as i32) as usize + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanSd {
    pub mean: f64,
    /// Population standard deviation.
    pub sd: f64,
}

impl MeanSd {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        Some(Self {
            mean,
            sd: var.sqrt(),
        })
    }
}

impl fmt::Display for MeanSd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = f.precision().unwrap_or(2);
        write!(f, "{:.prec$}±{:.prec$}", self.mean, self.sd)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YearlyAverage {
    pub g: MeanSd,
    pub k: MeanSd,
    pub n_windows: usize,
}

/// Mean and population spread of `g` and `k` over non-skipped windows.
pub fn yearly_average(series: &IndexSeries) -> Result<YearlyAverage> {
    let (gs, ks): (Vec<f64>, Vec<f64>) = series.usable().map(|(_, p)| (p.g, p.k)).unzip();
    match (MeanSd::of(&gs), MeanSd::of(&ks)) {
        (Some(g), Some(k)) => Ok(YearlyAverage {
            g,
            k,
            n_windows: gs.len(),
        }),
        _ => Err(Error::AllSkipped),
    }
}
