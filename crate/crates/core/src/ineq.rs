//! Discrete Lorenz curves and the Gini, Kolkata and Hirsch indices.
//!
//! Every publication is a member of the population, including uncited
//! ones. Counts are sorted ascending and accumulated as exact integers;
//! floating point only enters at the final division, so the indices are
//! independent of tie order and of any common scale factor.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Non-empty list of per-publication citation counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CitationVector(Vec<u64>);

impl CitationVector {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(Self(counts))
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u128 {
        self.0.iter().map(|&c| u128::from(c)).sum()
    }

    pub fn max(&self) -> u64 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn into_inner(self) -> Vec<u64> {
        self.0
    }
}

impl TryFrom<Vec<u64>> for CitationVector {
    type Error = Error;

    fn try_from(counts: Vec<u64>) -> Result<Self> {
        Self::new(counts)
    }
}

impl TryFrom<&[u64]> for CitationVector {
    type Error = Error;

    fn try_from(counts: &[u64]) -> Result<Self> {
        Self::new(counts.to_vec())
    }
}

/// Piecewise-linear Lorenz curve through the vertices `(i/n, C_i/C_n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LorenzCurve {
    sorted: Vec<u64>,
    // cumulative[i] = sum of the i smallest counts; len n + 1
    cumulative: Vec<u128>,
}

impl LorenzCurve {
    pub fn n(&self) -> usize {
        self.sorted.len()
    }

    pub fn total(&self) -> u128 {
        self.cumulative[self.n()]
    }

    /// Counts in ascending order.
    pub fn sorted_counts(&self) -> &[u64] {
        &self.sorted
    }

    /// Vertices `(p, L)` from `(0, 0)` to `(1, 1)`.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let n = self.n() as f64;
        let total = self.total() as f64;
        self.cumulative
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as f64 / n, c as f64 / total))
            .collect()
    }

    /// Evaluates `L(p)` by linear interpolation between vertices.
    pub fn eval(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return 0.0;
        }
        if p >= 1.0 {
            return 1.0;
        }
        let n = self.n();
        let total = self.total() as f64;
        let scaled = p * n as f64;
        let i = (scaled.floor() as usize).min(n - 1);
        let frac = scaled - i as f64;
        (self.cumulative[i] as f64 + frac * self.sorted[i] as f64) / total
    }

    /// Gini index: one minus twice the trapezoidal area under the polyline.
    pub fn gini(&self) -> f64 {
        let n = self.n() as u128;
        let total = self.total();
        // 2n * area * total = sum of (C_i + C_{i+1})
        let twice_area: u128 = self.cumulative.windows(2).map(|w| w[0] + w[1]).sum();
        let denom = n * total;
        (denom - twice_area) as f64 / denom as f64
    }

    /// Kolkata index: the fixed point `1 - L(k) = k`.
    ///
    /// The segment holding the sign change of `1 - L(p) - p` is located
    /// with integer arithmetic and the crossing on that segment is solved
    /// in closed form.
    pub fn kolkata(&self) -> f64 {
        let n = self.n();
        let total = self.total() as i128;
        let n_i = n as i128;
        // n * total * f(i/n), exact
        let scaled_f = |i: usize| n_i * (total - self.cumulative[i] as i128) - i as i128 * total;

        // f(0) > 0 and f(1) < 0 with f strictly decreasing: binary search
        // for the last vertex with f >= 0.
        let (mut lo, mut hi) = (0usize, n);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if scaled_f(mid) >= 0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if scaled_f(lo) == 0 {
            return lo as f64 / n as f64;
        }
        let slope = self.sorted[lo] as i128;
        let num = total - self.cumulative[lo] as i128 + slope * lo as i128;
        let den = total + n_i * slope;
        num as f64 / den as f64
    }

    /// `|1 - L(k) - k|` evaluated on the polyline.
    pub fn fixed_point_residual(&self, k: f64) -> f64 {
        (1.0 - self.eval(k) - k).abs()
    }

    pub fn indices(&self) -> IndexPair {
        IndexPair {
            g: self.gini(),
            k: self.kolkata(),
        }
    }
}

/// Builds the Lorenz curve of a citation vector.
pub fn build_lorenz(counts: &CitationVector) -> Result<LorenzCurve> {
    let mut sorted = counts.as_slice().to_vec();
    sorted.sort_unstable();
    let mut cumulative = Vec::with_capacity(sorted.len() + 1);
    let mut running = 0u128;
    cumulative.push(0);
    for &c in &sorted {
        running += u128::from(c);
        cumulative.push(running);
    }
    if running == 0 {
        return Err(Error::ZeroTotal);
    }
    Ok(LorenzCurve { sorted, cumulative })
}

pub fn gini(curve: &LorenzCurve) -> f64 {
    curve.gini()
}

pub fn kolkata(curve: &LorenzCurve) -> f64 {
    curve.kolkata()
}

/// Largest `h` such that `h` publications have at least `h` citations each.
pub fn hirsch(counts: &CitationVector) -> u32 {
    hirsch_index(counts.as_slice())
}

pub fn hirsch_index(counts: &[u64]) -> u32 {
    let mut desc = counts.to_vec();
    desc.sort_unstable_by(|a, b| b.cmp(a));
    desc.iter()
        .enumerate()
        .take_while(|&(i, &c)| c > i as u64)
        .count() as u32
}

/// Gini and Kolkata values of one population.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexPair {
    pub g: f64,
    pub k: f64,
}

impl IndexPair {
    pub fn new(g: f64, k: f64) -> Self {
        Self { g, k }
    }

    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let v = CitationVector::new(counts.to_vec())?;
        Ok(build_lorenz(&v)?.indices())
    }

    /// `k - g`; negative once Gini has overtaken Kolkata.
    pub fn gap(&self) -> f64 {
        self.k - self.g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(xs: &[u64]) -> LorenzCurve {
        build_lorenz(&CitationVector::new(xs.to_vec()).unwrap()).unwrap()
    }

    fn assert_points(c: &LorenzCurve, expected: &[(f64, f64)]) {
        let pts = c.points();
        assert_eq!(pts.len(), expected.len());
        for (a, b) in pts.iter().zip(expected) {
            assert!((a.0 - b.0).abs() < 1e-15 && (a.1 - b.1).abs() < 1e-15, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn lorenz_vertices() {
        assert_points(
            &curve(&[5, 5, 5, 5]),
            &[(0.0, 0.0), (0.25, 0.25), (0.5, 0.5), (0.75, 0.75), (1.0, 1.0)],
        );
        assert_points(
            &curve(&[0, 0, 0, 10]),
            &[(0.0, 0.0), (0.25, 0.0), (0.5, 0.0), (0.75, 0.0), (1.0, 1.0)],
        );
        assert_points(
            &curve(&[4, 2, 1, 3]),
            &[(0.0, 0.0), (0.25, 0.1), (0.5, 0.3), (0.75, 0.6), (1.0, 1.0)],
        );
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(CitationVector::new(vec![]), Err(Error::EmptyInput)));
        let zeros = CitationVector::new(vec![0, 0, 0]).unwrap();
        assert!(matches!(build_lorenz(&zeros), Err(Error::ZeroTotal)));
    }

    #[test]
    fn gini_hand_cases() {
        assert_eq!(curve(&[5, 5, 5, 5]).gini(), 0.0);
        assert!((curve(&[0, 0, 0, 10]).gini() - 0.75).abs() < 1e-15);
        assert!((curve(&[1, 2, 3, 4]).gini() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn kolkata_hand_cases() {
        assert_eq!(curve(&[5, 5, 5, 5]).kolkata(), 0.5);
        assert!((curve(&[0, 0, 0, 10]).kolkata() - 0.8).abs() < 1e-15);
        assert!((curve(&[1, 2, 3, 4]).kolkata() - 13.0 / 22.0).abs() < 1e-15);
    }

    #[test]
    fn kolkata_on_vertex() {
        // 1 - L(1/2) = 1/2 exactly; the fixed point sits on a vertex
        assert_eq!(curve(&[1, 1]).kolkata(), 0.5);
        // [0, 1, 3]: 1 - L(2/3) = 3/4 > 2/3, crossing inside the last segment
        let c = curve(&[0, 1, 3]);
        let k = c.kolkata();
        assert!(c.fixed_point_residual(k) < 1e-15);
        assert!(k > 2.0 / 3.0 && k < 1.0);
    }

    #[test]
    fn single_publication_is_equality() {
        let c = curve(&[42]);
        assert_eq!(c.gini(), 0.0);
        assert_eq!(c.kolkata(), 0.5);
    }

    #[test]
    fn eval_interpolates() {
        let c = curve(&[1, 2, 3, 4]);
        assert!((c.eval(0.625) - 0.45).abs() < 1e-15);
        assert_eq!(c.eval(-1.0), 0.0);
        assert_eq!(c.eval(2.0), 1.0);
    }

    #[test]
    fn hirsch_hand_cases() {
        assert_eq!(hirsch_index(&[0, 0, 0]), 0);
        assert_eq!(hirsch_index(&[10, 8, 5, 4, 3]), 4);
        assert_eq!(hirsch_index(&[5, 4, 3, 2, 1]), 3);
        assert_eq!(hirsch_index(&[100]), 1);
    }
}
