//! Quadratic Lorenz expansion linking Kolkata to Gini, and the
//! fixed-intercept line fit `k = 1/2 + c g` over a career's points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ineq::IndexPair;

/// Slope of the small-g linear relation, `3/8`.
pub const ANALYTIC_SLOPE: f64 = 0.375;

/// Slope fitted empirically over career windows.
pub const EMPIRICAL_SLOPE: f64 = 0.39;

/// Pinned intercept of every `k` vs `g` line.
pub const INTERCEPT: f64 = 0.5;

fn check_gini(g: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&g) {
        return Err(Error::OutOfRange {
            what: "g",
            value: g,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(())
}

/// Coefficients of `L(p) = A p + B p^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandauCoefficients {
    pub a: f64,
    pub b: f64,
}

impl LandauCoefficients {
    pub fn from_gini(g: f64) -> Result<Self> {
        check_gini(g)?;
        Ok(Self {
            a: 1.0 - 3.0 * g,
            b: 3.0 * g,
        })
    }

    /// Whether the expansion's `A > 0` assumption holds (`g < 1/3`).
    pub fn is_valid(&self) -> bool {
        self.a > 0.0
    }

    pub fn lorenz(&self, p: f64) -> f64 {
        self.a * p + self.b * p * p
    }
}

/// Root in `[1/2, 1]` of `3g k^2 + (2 - 3g) k - 1 = 0`.
///
/// Uses the rationalized form `2 / ((2 - 3g) + sqrt((2 - 3g)^2 + 12 g))`,
/// which stays finite at `g = 0` and avoids cancellation for small `g`.
pub fn landau_k_exact(g: f64) -> Result<f64> {
    check_gini(g)?;
    let lin = 2.0 - 3.0 * g;
    Ok(2.0 / (lin + (lin * lin + 12.0 * g).sqrt()))
}

/// `1/2 + (3/8) g`.
pub fn landau_k_approx(g: f64) -> Result<f64> {
    check_gini(g)?;
    Ok(INTERCEPT + ANALYTIC_SLOPE * g)
}

/// Residual of the quadratic at `(g, k)`.
pub fn landau_residual(g: f64, k: f64) -> f64 {
    3.0 * g * k * k + (2.0 - 3.0 * g) * k - 1.0
}

/// Where the line `k = 1/2 + c g` meets `g = k`; `None` when `c >= 1`.
pub fn crossing_point(slope: f64) -> Option<f64> {
    (slope < 1.0).then(|| INTERCEPT / (1.0 - slope))
}

/// Ordinary least squares with a free intercept, reported as a diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeFit {
    pub intercept: f64,
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub c: f64,
    pub intercept_fixed: f64,
    pub residual_rms: f64,
    /// Extrapolated `g = k` crossing; absent when `c >= 1`.
    pub g_star: Option<f64>,
    pub n_points: usize,
    pub free_fit: Option<FreeFit>,
}

impl FitResult {
    pub fn predict(&self, g: f64) -> f64 {
        self.intercept_fixed + self.c * g
    }
}

/// Fits `k = 1/2 + c g` by least squares over an unordered point set.
pub fn fit_k_vs_g(points: &[IndexPair]) -> Result<FitResult> {
    if points.len() < 2 {
        return Err(Error::DegenerateFit(format!(
            "need at least 2 points, got {}",
            points.len()
        )));
    }
    let sgg: f64 = points.iter().map(|p| p.g * p.g).sum();
    if sgg == 0.0 {
        return Err(Error::DegenerateFit("all g values are zero".into()));
    }
    let sgk: f64 = points.iter().map(|p| p.g * (p.k - INTERCEPT)).sum();
    let c = sgk / sgg;

    let n = points.len() as f64;
    let sse: f64 = points
        .iter()
        .map(|p| {
            let r = p.k - INTERCEPT - c * p.g;
            r * r
        })
        .sum();

    Ok(FitResult {
        c,
        intercept_fixed: INTERCEPT,
        residual_rms: (sse / n).sqrt(),
        g_star: crossing_point(c),
        n_points: points.len(),
        free_fit: free_fit(points),
    })
}

fn free_fit(points: &[IndexPair]) -> Option<FreeFit> {
    let n = points.len() as f64;
    let mean_g = points.iter().map(|p| p.g).sum::<f64>() / n;
    let mean_k = points.iter().map(|p| p.k).sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for p in points {
        let dx = p.g - mean_g;
        sxx += dx * dx;
        sxy += dx * (p.k - mean_k);
    }
    if sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some(FreeFit {
        intercept: mean_k - slope * mean_g,
        slope,
    })
}
