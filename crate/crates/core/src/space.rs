//! Finite metric spaces: labelled points with a validated distance matrix.
//!
//! Loaded spaces are rescaled so the diameter equals 1 (the standing
//! assumption for all entropy computations); internal subspaces keep the
//! inherited metric untouched.

use crate::error::{Error, Result};

const METRIC_TOL: f64 = 1e-12;

/// A finite metric space with ordered labels and a symmetric distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricPointSet {
    labels: Vec<String>,
    /// row-major, len * len
    dist: Vec<f64>,
    len: usize,
    /// the diameter of the input before rescaling (1.0 when none was needed)
    original_diameter: f64,
}

impl MetricPointSet {
    /// Build a space from a full distance matrix, validate the metric axioms,
    /// and rescale so the diameter is 1 (skipped for single-point spaces).
    pub fn new(labels: Vec<String>, matrix: Vec<Vec<f64>>) -> Result<Self> {
        Self::build(labels, matrix, true)
    }

    /// Build a space without rescaling. Used for subspaces that must keep the
    /// ambient metric.
    pub fn new_unnormalized(labels: Vec<String>, matrix: Vec<Vec<f64>>) -> Result<Self> {
        Self::build(labels, matrix, false)
    }

    fn build(labels: Vec<String>, matrix: Vec<Vec<f64>>, normalize: bool) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptySet);
        }
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMetric(format!(
                "distance matrix must be {n}x{n}"
            )));
        }
        {
            let mut seen = std::collections::HashSet::new();
            for l in &labels {
                if !seen.insert(l) {
                    return Err(Error::InvalidMetric(format!("duplicate label `{l}`")));
                }
            }
        }
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let d = matrix[i][j];
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::InvalidMetric(format!(
                        "d({},{}) = {} is not a non-negative real",
                        labels[i], labels[j], d
                    )));
                }
                dist[i * n + j] = d;
            }
        }
        for i in 0..n {
            if dist[i * n + i] != 0.0 {
                return Err(Error::InvalidMetric(format!(
                    "d({0},{0}) must be 0",
                    labels[i]
                )));
            }
            for j in (i + 1)..n {
                if (dist[i * n + j] - dist[j * n + i]).abs() > METRIC_TOL {
                    return Err(Error::InvalidMetric(format!(
                        "d({},{}) is not symmetric",
                        labels[i], labels[j]
                    )));
                }
                if dist[i * n + j] <= METRIC_TOL {
                    return Err(Error::InvalidMetric(format!(
                        "distinct points {} and {} are at distance 0",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if dist[i * n + j] > dist[i * n + k] + dist[k * n + j] + METRIC_TOL {
                        return Err(Error::InvalidMetric(format!(
                            "triangle inequality fails at ({}, {}, {})",
                            labels[i], labels[j], labels[k]
                        )));
                    }
                }
            }
        }
        let mut diameter: f64 = 0.0;
        for &d in &dist {
            diameter = diameter.max(d);
        }
        let mut space = MetricPointSet {
            labels,
            dist,
            len: n,
            original_diameter: if diameter > 0.0 { diameter } else { 1.0 },
        };
        if normalize && n > 1 {
            if diameter <= 0.0 {
                return Err(Error::InvalidMetric("diameter is zero".into()));
            }
            if (diameter - 1.0).abs() > METRIC_TOL {
                for d in &mut space.dist {
                    *d /= diameter;
                }
            } else {
                space.original_diameter = 1.0;
            }
        } else {
            space.original_diameter = 1.0;
        }
        Ok(space)
    }

    /// Space from points on the real line; distances are absolute differences.
    pub fn from_coords(labels: Vec<String>, coords: &[f64]) -> Result<Self> {
        if labels.len() != coords.len() {
            return Err(Error::InvalidMetric(
                "labels and coordinates differ in length".into(),
            ));
        }
        let n = coords.len();
        let matrix: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| (coords[i] - coords[j]).abs()).collect())
            .collect();
        Self::new(labels, matrix)
    }

    /// The uniform grid {0, 1/(n-1), ..., 1} with rational labels `i/(n-1)`.
    pub fn unit_grid(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::GridTooSmall(n, 2));
        }
        let h = 1.0 / (n - 1) as f64;
        let labels = (0..n).map(|i| grid_label(i, n)).collect();
        let coords: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
        Self::from_coords(labels, &coords)
    }

    /// Restriction to a subset of point indices; the inherited metric is kept
    /// as-is (no rescaling).
    pub fn subspace(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptySet);
        }
        let labels = keep.iter().map(|&i| self.labels[i].clone()).collect();
        let matrix: Vec<Vec<f64>> = keep
            .iter()
            .map(|&i| keep.iter().map(|&j| self.dist(i, j)).collect())
            .collect();
        Self::new_unnormalized(labels, matrix)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.len + j]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for &x in &self.dist {
            d = d.max(x);
        }
        d
    }

    /// Diameter of the data before load-time rescaling.
    pub fn original_diameter(&self) -> f64 {
        self.original_diameter
    }

    /// Smallest distance between two distinct points; the fast-path threshold
    /// for separation counts. Returns +inf for a single point.
    pub fn min_positive_distance(&self) -> f64 {
        let mut m = f64::INFINITY;
        for i in 0..self.len {
            for j in (i + 1)..self.len {
                m = m.min(self.dist(i, j));
            }
        }
        m
    }

    /// Directed then symmetrized Hausdorff distance between two non-empty
    /// subsets given by point indices.
    pub fn hausdorff_distance(&self, a: &[usize], b: &[usize]) -> Result<f64> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptySet);
        }
        let directed = |from: &[usize], to: &[usize]| -> f64 {
            from.iter()
                .map(|&x| {
                    to.iter()
                        .map(|&y| self.dist(x, y))
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max)
        };
        Ok(directed(a, b).max(directed(b, a)))
    }
}

/// Canonical label for grid point `i/(n-1)`, in lowest terms.
pub fn grid_label(i: usize, n: usize) -> String {
    let denom = n - 1;
    if i == 0 {
        return "0".to_string();
    }
    if i == denom {
        return "1".to_string();
    }
    let g = gcd(i, denom);
    format!("{}/{}", i / g, denom / g)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_diameter_to_one() {
        let s = MetricPointSet::from_coords(
            vec!["a".into(), "b".into(), "c".into()],
            &[0.0, 0.2, 0.4],
        )
        .unwrap();
        assert!((s.diameter() - 1.0).abs() < 1e-12);
        assert!((s.original_diameter() - 0.4).abs() < 1e-12);
        assert!((s.dist(0, 1) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_broken_metrics() {
        // asymmetric
        let m = vec![vec![0.0, 1.0], vec![0.5, 0.0]];
        assert!(MetricPointSet::new(vec!["a".into(), "b".into()], m).is_err());
        // distinct points at distance zero
        let m = vec![vec![0.0, 0.0], vec![0.0, 0.0]];
        assert!(MetricPointSet::new(vec!["a".into(), "b".into()], m).is_err());
        // triangle violation
        let m = vec![
            vec![0.0, 1.0, 3.0],
            vec![1.0, 0.0, 1.0],
            vec![3.0, 1.0, 0.0],
        ];
        assert!(MetricPointSet::new(vec!["a".into(), "b".into(), "c".into()], m).is_err());
    }

    #[test]
    fn unit_grid_labels_and_spacing() {
        let g = MetricPointSet::unit_grid(5).unwrap();
        assert_eq!(g.labels(), &["0", "1/4", "1/2", "3/4", "1"]);
        assert!((g.min_positive_distance() - 0.25).abs() < 1e-15);
        assert!((g.diameter() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hausdorff_examples() {
        let g = MetricPointSet::unit_grid(2).unwrap();
        // H({0},{1}) = 1
        assert_eq!(g.hausdorff_distance(&[0], &[1]).unwrap(), 1.0);
        // H({0,1},{0}) = 1, driven by the directed distance from 1 to {0}
        assert_eq!(g.hausdorff_distance(&[0, 1], &[0]).unwrap(), 1.0);
        // H(A,A) = 0
        assert_eq!(g.hausdorff_distance(&[0, 1], &[1, 0]).unwrap(), 0.0);
        assert!(g.hausdorff_distance(&[], &[0]).is_err());
    }

    #[test]
    fn subspace_keeps_ambient_metric() {
        let g = MetricPointSet::unit_grid(5).unwrap();
        let s = g.subspace(&[0, 1]).unwrap();
        assert!((s.dist(0, 1) - 0.25).abs() < 1e-15);
        assert_eq!(s.labels(), &["0", "1/4"]);
    }
}
