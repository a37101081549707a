//! Citation inequality toolkit.
//!
//! Builds Lorenz curves from per-publication citation counts and derives
//! the Gini (`g`), Kolkata (`k`) and Hirsch (`h`) indices; slides
//! fixed-width publication-year windows over a career; relates `k` to `g`
//! through the quadratic Lorenz expansion and the fitted line
//! `k = 1/2 + c g`; and flags careers whose windowed Gini reaches Kolkata
//! near the `g = k ~ 0.82` mark.
//!
//! ```
//! use citeq_core::{build_lorenz, CitationVector};
//!
//! let curve = build_lorenz(&CitationVector::new(vec![0, 0, 0, 10])?)?;
//! assert!((curve.gini() - 0.75).abs() < 1e-12);
//! assert!((curve.kolkata() - 0.8).abs() < 1e-12);
//! # Ok::<(), citeq_core::Error>(())
//! ```

pub mod error;
pub mod ineq;
pub mod ingest;
pub mod landau;
pub mod report;
pub mod soc;
pub mod windows;

pub use error::{Error, ErrorKind, Result};
pub use ineq::{build_lorenz, gini, hirsch, hirsch_index, kolkata, CitationVector, IndexPair, LorenzCurve};
pub use ingest::{
    load_manifest, load_profile, save_profile, synth_profile, write_profile, Manifest,
    ManifestEntry, SynthModel, SynthSpec,
};
pub use landau::{
    fit_k_vs_g, landau_k_approx, landau_k_exact, FitResult, LandauCoefficients,
};
pub use report::{analyze_profile, Analysis, RunConfig};
pub use soc::{
    career_summary, classify_crossing, cohort_stats, hirsch_sqrt_diagnostic, CareerSummary,
    CohortStats, Crossing, CrossingReport, DunbarRatio, SocConfig,
};
pub use windows::{
    window_series, yearly_average, IndexSeries, Publication, ResearcherProfile, WindowConfig,
    WindowEntry, WindowOutcome, YearlyAverage,
};
