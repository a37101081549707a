//! Precursor classification of a career's `g`/`k` series, career summary
//! statistics and the `R = n_c_max / D` quick indicator.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ineq::{build_lorenz, hirsch_index, CitationVector, IndexPair};
use crate::windows::{yearly_average, IndexSeries, ResearcherProfile, YearlyAverage};

/// Level of the `g = k` mark for cumulative (whole-career) statistics.
pub const CUMULATIVE_SOC_MARK: f64 = 0.86;

/// Statistical value of `h / sqrt(N_c)`.
pub const HIRSCH_SQRT_COEFFICIENT: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SocConfig {
    pub soc_mark: f64,
    pub soc_band: f64,
    /// Largest `min(k - g)` still classed as a marginal crossing.
    pub marginal_tolerance: f64,
    pub r_threshold: f64,
}

impl Default for SocConfig {
    fn default() -> Self {
        Self {
            soc_mark: 0.82,
            soc_band: 0.02,
            marginal_tolerance: 0.01,
            r_threshold: 40.0,
        }
    }
}

impl SocConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("soc_mark", self.soc_mark),
            ("soc_band", self.soc_band),
            ("marginal_tolerance", self.marginal_tolerance),
            ("r_threshold", self.r_threshold),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.soc_mark > 0.5 && self.soc_mark < 1.0) {
            return Err(Error::Config(format!(
                "soc_mark must lie in (0.5, 1), got {}",
                self.soc_mark
            )));
        }
        Ok(())
    }

    pub fn in_band(&self, level: f64) -> bool {
        (level - self.soc_mark).abs() <= self.soc_band
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Crossing {
    No,
    Marginally,
    Yes,
}

impl Crossing {
    pub fn as_str(&self) -> &'static str {
        match self {
            Crossing::Yes => "Yes",
            Crossing::Marginally => "Marginally",
            Crossing::No => "No",
        }
    }
}

impl fmt::Display for Crossing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Crossing {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "Yes" => Ok(Crossing::Yes),
            "Marginally" => Ok(Crossing::Marginally),
            "No" => Ok(Crossing::No),
            other => Err(format!("unknown crossing class {other:?}")),
        }
    }
}

/// A window where Gini reached or passed Kolkata.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingPoint {
    pub central_year: i32,
    pub g: f64,
    pub k: f64,
    /// `(g + k) / 2`, for comparison against the SOC mark.
    pub level: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingReport {
    pub class: Crossing,
    pub crossings: Vec<CrossingPoint>,
    /// Smallest `k - g` over non-skipped windows.
    pub min_gap: f64,
}

/// `Yes` if some window has `g >= k`, `Marginally` if the closest approach
/// is within the tolerance, `No` otherwise. Skipped windows are ignored.
pub fn classify_crossing(series: &IndexSeries, config: &SocConfig) -> Result<CrossingReport> {
    let mut min_gap = f64::INFINITY;
    let mut crossings = Vec::new();
    let mut any = false;
    for (year, p) in series.usable() {
        any = true;
        min_gap = min_gap.min(p.gap());
        if p.g >= p.k {
            crossings.push(CrossingPoint {
                central_year: year,
                g: p.g,
                k: p.k,
                level: 0.5 * (p.g + p.k),
            });
        }
    }
    if !any {
        return Err(Error::AllSkipped);
    }
    let class = if !crossings.is_empty() {
        Crossing::Yes
    } else if min_gap <= config.marginal_tolerance {
        Crossing::Marginally
    } else {
        Crossing::No
    };
    Ok(CrossingReport {
        class,
        crossings,
        min_gap,
    })
}

/// Effective Dunbar number `D = N_c / N_p` and `R = n_c_max / D`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DunbarRatio {
    pub dunbar: f64,
    pub r: f64,
}

impl DunbarRatio {
    pub fn from_totals(n_p: u64, n_c: u64, n_c_max: u64) -> Result<Self> {
        if n_p == 0 {
            return Err(Error::EmptyInput);
        }
        if n_c == 0 {
            return Err(Error::ZeroCitations);
        }
        Ok(Self {
            dunbar: n_c as f64 / n_p as f64,
            r: n_c_max as f64 * n_p as f64 / n_c as f64,
        })
    }

    pub fn flagged(&self, config: &SocConfig) -> bool {
        self.r >= config.r_threshold
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CareerSummary {
    pub name: String,
    pub tags: Vec<String>,
    pub n_p: u64,
    pub n_c: u64,
    pub h: u32,
    pub g_overall: f64,
    pub k_overall: f64,
    pub yearly_avg: YearlyAverage,
    pub n_c_max: u64,
    pub dunbar: f64,
    pub r: f64,
    pub crossing: Crossing,
    pub crossing_points: Vec<CrossingPoint>,
    pub min_gap: f64,
    pub soc_flag_r: bool,
}

impl CareerSummary {
    pub fn overall(&self) -> IndexPair {
        IndexPair::new(self.g_overall, self.k_overall)
    }
}

/// Assembles the whole-career statistics. Overall indices pool every
/// publication regardless of year.
pub fn career_summary(
    profile: &ResearcherProfile,
    series: &IndexSeries,
    config: &SocConfig,
) -> Result<CareerSummary> {
    config.validate()?;
    let counts = CitationVector::new(profile.citation_counts()).map_err(|_| Error::EmptyProfile)?;
    let n_c = u64::try_from(counts.total()).unwrap_or(u64::MAX);
    let overall = build_lorenz(&counts)?.indices();
    let yearly_avg: YearlyAverage = yearly_average(series)?;
    let crossing = classify_crossing(series, config)?;
    let n_p = counts.len() as u64;
    let n_c_max = counts.max();
    let ratio = DunbarRatio::from_totals(n_p, n_c, n_c_max)?;

    Ok(CareerSummary {
        name: profile.name.clone(),
        tags: profile.tags.clone(),
        n_p,
        n_c,
        h: hirsch_index(counts.as_slice()),
        g_overall: overall.g,
        k_overall: overall.k,
        yearly_avg,
        n_c_max,
        dunbar: ratio.dunbar,
        r: ratio.r,
        crossing: crossing.class,
        crossing_points: crossing.crossings,
        min_gap: crossing.min_gap,
        soc_flag_r: ratio.flagged(config),
    })
}

pub fn hirsch_sqrt_ratio(h: u32, n_c: u64) -> Result<f64> {
    if n_c == 0 {
        return Err(Error::ZeroCitations);
    }
    Ok(f64::from(h) / (n_c as f64).sqrt())
}

/// `h / sqrt(N_c)`, to compare with [`HIRSCH_SQRT_COEFFICIENT`].
pub fn hirsch_sqrt_diagnostic(summary: &CareerSummary) -> Result<f64> {
    hirsch_sqrt_ratio(summary.h, summary.n_c)
}

/// Cohort-level rates over `(crossing class, R flag)` rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CohortStats {
    pub n_researchers: usize,
    pub yes_fraction: f64,
    /// Fraction of rows where the R flag equals `crossing == Yes`.
    pub agreement_rate: f64,
    pub n_flagged: usize,
    /// Fraction of R-flagged rows whose crossing is `Yes`.
    pub flagged_success_rate: Option<f64>,
}

pub fn cohort_stats(rows: &[(Crossing, bool)]) -> Option<CohortStats> {
    if rows.is_empty() {
        return None;
    }
    let n = rows.len();
    let yes = rows.iter().filter(|(c, _)| *c == Crossing::Yes).count();
    let agree = rows
        .iter()
        .filter(|(c, flag)| (*c == Crossing::Yes) == *flag)
        .count();
    let flagged: Vec<_> = rows.iter().filter(|(_, flag)| *flag).collect();
    let flagged_yes = flagged.iter().filter(|(c, _)| *c == Crossing::Yes).count();
    Some(CohortStats {
        n_researchers: n,
        yes_fraction: yes as f64 / n as f64,
        agreement_rate: agree as f64 / n as f64,
        n_flagged: flagged.len(),
        flagged_success_rate: (!flagged.is_empty())
            .then(|| flagged_yes as f64 / flagged.len() as f64),
    })
}
