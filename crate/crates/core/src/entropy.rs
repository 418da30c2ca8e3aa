//! The entropy pipeline: an exact oracle for finite relations (log of the
//! adjacency spectral radius, which the separation fast path identifies with
//! the orbit-growth limit), the (eps, n) estimation grid, and report
//! assembly.

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;

use crate::detect::{run_all, Certificate};
use crate::error::{Error, Result};
use crate::interval::IntervalSvf;
use crate::num::big_ln;
use crate::orbit::{count_orbits, enumerate_orbits, OrbitBlock};
use crate::relation::FiniteRelation;
use crate::separation::{
    certified_lower_bound, max_separated_by, ComputeCaps, Method, Mode, SEP_TOL,
};

/// Natural log of the spectral radius of a non-negative 0/1 matrix, computed
/// by repeated squaring with rescaling: the entry sum of A^m is the number of
/// (m+1)-orbits, and (1/m) log of it converges to log rho as m doubles.
/// Accurate to ~1e-13.
pub fn log_spectral_radius(adj: &[Vec<bool>]) -> f64 {
    let d = adj.len();
    if d == 0 {
        return 0.0;
    }
    let mut b: Vec<f64> = Vec::with_capacity(d * d);
    for row in adj {
        for &x in row {
            b.push(if x { 1.0 } else { 0.0 });
        }
    }
    let mut shift = 0.0f64; // ln of the running scale factor
    let mut m = 1.0f64; // b ~ A^m / exp(shift)
    let mut prev = f64::INFINITY;
    for iter in 0..80 {
        let total: f64 = b.iter().sum();
        let r = (shift + total.ln()) / m;
        if iter > 3 && (r - prev).abs() < 5e-14 {
            return r.max(0.0);
        }
        prev = r;
        // square with rescaling by the max entry
        let mut c = vec![0.0f64; d * d];
        for i in 0..d {
            for k in 0..d {
                let bik = b[i * d + k];
                if bik != 0.0 {
                    let row_k = &b[k * d..(k + 1) * d];
                    let out = &mut c[i * d..(i + 1) * d];
                    for (o, &v) in out.iter_mut().zip(row_k) {
                        *o += bik * v;
                    }
                }
            }
        }
        let mx = c.iter().cloned().fold(0.0f64, f64::max);
        debug_assert!(mx > 0.0, "rows stay non-empty, powers cannot vanish");
        for v in &mut c {
            *v /= mx;
        }
        shift = 2.0 * shift + mx.ln();
        m *= 2.0;
        b = c;
    }
    prev.max(0.0)
}

/// Exact topological entropy of a finite relation: for every eps below the
/// smallest positive distance, s_{n,eps} equals the orbit count, so the
/// entropy is the growth rate of path counts, i.e. the log spectral radius
/// of the adjacency matrix.
pub fn sft_entropy(relation: &FiniteRelation) -> f64 {
    log_spectral_radius(relation.adjacency())
}

/// One (n, s) row of an entropy table.
#[derive(Debug, Clone)]
pub struct EntropyRow {
    pub n: usize,
    pub s_value: BigUint,
    pub exact: bool,
    pub method: Method,
    pub log_s_over_n: f64,
}

/// All rows computed at one epsilon, with the slope estimate h(F, eps).
#[derive(Debug, Clone)]
pub struct EpsBlock {
    pub epsilon: f64,
    pub rows: Vec<EntropyRow>,
    pub h_eps: f64,
}

#[derive(Debug, Clone)]
pub struct EntropyReport {
    pub blocks: Vec<EpsBlock>,
    /// h_eps at the smallest epsilon of the schedule
    pub h_estimate: f64,
    /// set when the system was discretized first (estimates are biased
    /// upward, never downward)
    pub bias_note: Option<String>,
    pub certificates: Vec<(String, Option<Certificate>)>,
    pub partial: bool,
}

impl EntropyReport {
    /// CSV with columns eps,n,s_value,exact,log_s_over_n,h_eps and one
    /// trailing summary row. Byte-stable across runs and thread counts.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("eps,n,s_value,exact,log_s_over_n,h_eps\n");
        for block in &self.blocks {
            for row in &block.rows {
                out.push_str(&format!(
                    "{},{},{},{},{:.12},{:.12}\n",
                    block.epsilon, row.n, row.s_value, row.exact, row.log_s_over_n, block.h_eps
                ));
            }
        }
        out.push_str(&format!("h_estimate,,,,,{:.12}\n", self.h_estimate));
        out
    }
}

/// Parameters of the estimation pipeline.
#[derive(Debug, Clone)]
pub struct EstimateParams {
    /// strictly decreasing positive epsilons
    pub eps_schedule: Vec<f64>,
    pub n_max: usize,
    pub mode: Mode,
    pub caps: ComputeCaps,
    /// orbit-count ceiling for attempting an exact row
    pub exact_row_cap: usize,
    /// cycle length bound handed to the detectors
    pub detector_cycle_len: usize,
}

impl EstimateParams {
    pub fn new(eps_schedule: Vec<f64>, n_max: usize) -> Self {
        EstimateParams {
            eps_schedule,
            n_max,
            mode: Mode::Exact,
            caps: ComputeCaps::default(),
            exact_row_cap: 2000,
            detector_cycle_len: 12,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_max < 4 {
            return Err(Error::BadSpec("n_max must be at least 4".into()));
        }
        if self.eps_schedule.is_empty() {
            return Err(Error::ScheduleNotDecreasing);
        }
        let mut prev = f64::INFINITY;
        for &e in &self.eps_schedule {
            if !(e > 0.0) || e >= prev {
                return Err(Error::ScheduleNotDecreasing);
            }
            prev = e;
        }
        Ok(())
    }
}

/// Least-squares slope of y against x.
fn ls_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for &(x, y) in points {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// limsup-style slope estimate: the max, over trailing windows of width 4
/// ending in the top half of the n range, of the least-squares slope of
/// log s against n. Robust to additive constants in log s. Clamped at 0.
fn h_eps_estimate(rows: &[EntropyRow]) -> f64 {
    if rows.len() < 2 {
        return 0.0;
    }
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.n as f64, r.log_s_over_n * r.n as f64))
        .collect();
    let w = 4usize.min(pts.len());
    let first_end = (pts.len() / 2).max(w - 1);
    let mut best = f64::NEG_INFINITY;
    for end in first_end..pts.len() {
        let lo = end + 1 - w;
        best = best.max(ls_slope(&pts[lo..=end]));
    }
    best.max(0.0)
}

fn make_row(n: usize, value: BigUint, exact: bool, method: Method) -> EntropyRow {
    let log_s = big_ln(&value);
    EntropyRow {
        n,
        s_value: value,
        exact,
        method,
        log_s_over_n: log_s / n as f64,
    }
}

/// s_{n,eps} for the estimate grid: exact where feasible, otherwise the
/// certified transfer-matrix lower bound over the separated-image
/// subrelation.
fn grid_s_value(
    relation: &FiniteRelation,
    n: usize,
    eps: f64,
    start: Option<&[usize]>,
    params: &EstimateParams,
    minpos: f64,
) -> EntropyRow {
    if eps <= minpos + SEP_TOL {
        let value = count_orbits(relation, n, start).expect("n >= 1");
        return make_row(n, value, true, Method::TotalCount);
    }
    let total = count_orbits(relation, n, start).expect("n >= 1");
    if params.mode == Mode::Exact && total <= BigUint::from(params.exact_row_cap) {
        let block = enumerate_orbits(relation, n, start, params.caps.enum_cap)
            .expect("count fits under the cap");
        let orbits = match &block {
            OrbitBlock::Explicit { orbits, .. } => orbits,
            OrbitBlock::Counted { .. } => unreachable!(),
        };
        let space = relation.space();
        let set = max_separated_by(
            orbits.len(),
            |a, b| {
                orbits[a]
                    .iter()
                    .zip(&orbits[b])
                    .map(|(&x, &y)| space.dist(x, y))
                    .fold(0.0, f64::max)
            },
            eps,
            Mode::Exact,
            &params.caps,
        );
        if let Ok(set) = set {
            // budget-exhausted searches degrade to their incumbent, still a
            // certified lower bound
            let lower = certified_lower_bound(relation, n, eps, start);
            let better = BigUint::from(set.value).max(lower);
            let exact = set.exact && better == BigUint::from(set.value);
            let method = if exact {
                Method::BranchAndBound
            } else {
                Method::GreedyLower
            };
            return make_row(n, better, exact, method);
        }
    }
    let lower = certified_lower_bound(relation, n, eps, start);
    make_row(n, lower, false, Method::GreedyLower)
}

fn estimate_entropy_impl(
    relation: &FiniteRelation,
    start: Option<&[usize]>,
    params: &EstimateParams,
    bias_note: Option<String>,
) -> Result<EntropyReport> {
    params.validate()?;
    if let Some(z) = start {
        if z.is_empty() {
            return Err(Error::EmptySet);
        }
        for &i in z {
            if i >= relation.len() {
                return Err(Error::IndexOutOfRange(i, relation.len()));
            }
        }
    }
    let minpos = relation.space().min_positive_distance();
    let blocks: Vec<EpsBlock> = params
        .eps_schedule
        .par_iter()
        .map(|&eps| {
            let rows: Vec<EntropyRow> = (2..=params.n_max)
                .map(|n| grid_s_value(relation, n, eps, start, params, minpos))
                .collect();
            let h_eps = h_eps_estimate(&rows);
            EpsBlock {
                epsilon: eps,
                rows,
                h_eps,
            }
        })
        .collect();
    let h_estimate = blocks.last().map(|b| b.h_eps).unwrap_or(0.0);
    let certificates = run_all(relation, params.detector_cycle_len);
    Ok(EntropyReport {
        blocks,
        h_estimate,
        bias_note,
        certificates,
        partial: false,
    })
}

/// Entropy estimate of a finite relation over an epsilon schedule.
pub fn estimate_entropy(relation: &FiniteRelation, params: &EstimateParams) -> Result<EntropyReport> {
    estimate_entropy_impl(relation, None, params, None)
}

/// Same pipeline with orbits restricted to start in Z (point indices).
pub fn estimate_entropy_restricted(
    relation: &FiniteRelation,
    start: &[usize],
    params: &EstimateParams,
) -> Result<EntropyReport> {
    estimate_entropy_impl(relation, Some(start), params, None)
}

/// Discretize an interval system on an N-point grid, then estimate. The
/// discretization over-approximates the graph, so the estimate is biased
/// upward, never downward; the report says so.
pub fn estimate_entropy_interval(
    svf: &IntervalSvf,
    grid: usize,
    params: &EstimateParams,
) -> Result<EntropyReport> {
    let relation = svf.discretize(grid)?;
    estimate_entropy_impl(
        &relation,
        None,
        params,
        Some(format!(
            "discretized on a {grid}-point grid; outer cell intersection biases the estimate upward"
        )),
    )
}

/// Restricted-start estimate for a discretized interval system; `start`
/// holds grid indices (restriction applies post-discretization).
pub fn estimate_entropy_interval_restricted(
    svf: &IntervalSvf,
    grid: usize,
    start: &[usize],
    params: &EstimateParams,
) -> Result<EntropyReport> {
    let relation = svf.discretize(grid)?;
    estimate_entropy_impl(
        &relation,
        Some(start),
        params,
        Some(format!(
            "discretized on a {grid}-point grid; outer cell intersection biases the estimate upward"
        )),
    )
}

/// Windowed slope of log orbit counts around a target n; the oracle the
/// sft value is checked against in tests.
pub fn count_growth_slope(relation: &FiniteRelation, n_target: usize, window: usize) -> f64 {
    let lo = n_target.saturating_sub(window).max(1);
    let pts: Vec<(f64, f64)> = (lo..=n_target)
        .map(|n| {
            let c = count_orbits(relation, n, None).expect("n >= 1");
            (n as f64, big_ln(&c))
        })
        .collect();
    ls_slope(&pts)
}

/// Convenience: number of n-orbits as f64 log for quick checks.
pub fn log_count(relation: &FiniteRelation, n: usize) -> f64 {
    big_ln(&count_orbits(relation, n, None).unwrap_or_else(|_| BigUint::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::fixtures::{fibonacci, full_two, period_three};
    use crate::space::MetricPointSet;
    use std::sync::Arc;

    const LOG_PHI: f64 = 0.48121182505960347; // ln((1+sqrt(5))/2)

    #[test]
    fn sft_entropy_anchors() {
        // Fibonacci adjacency [[0,1],[1,1]] -> log phi
        let f = fibonacci();
        assert!((sft_entropy(&f) - LOG_PHI).abs() < 1e-9);
        // full [[1,1],[1,1]] -> log 2
        let g = full_two();
        assert!((sft_entropy(&g) - std::f64::consts::LN_2).abs() < 1e-12);
        // identity -> 0
        let id = FiniteRelation::identity(g.space().clone());
        assert!(sft_entropy(&id).abs() < 1e-12);
        // polynomial growth (Example 6.8 encoding): 0
        assert!(sft_entropy(&period_three()).abs() < 1e-9);
    }

    #[test]
    fn sft_matches_count_growth_slope() {
        // primitive exemplars where the count ratios converge
        for rel in [fibonacci(), full_two()] {
            let slope = count_growth_slope(&rel, 1000, 4);
            assert!(
                (sft_entropy(&rel) - slope).abs() < 1e-8,
                "slope {slope} vs sft {}",
                sft_entropy(&rel)
            );
        }
        let id = FiniteRelation::identity(full_two().space().clone());
        assert!((sft_entropy(&id) - count_growth_slope(&id, 1000, 4)).abs() < 1e-8);
    }

    #[test]
    fn estimate_matches_oracle_on_fast_path() {
        // every eps < 1 is fast-path on the two-point space
        let f = fibonacci();
        let params = EstimateParams::new(vec![0.9, 0.5, 0.2], 30);
        let report = estimate_entropy(&f, &params).unwrap();
        for block in &report.blocks {
            assert!(
                (block.h_eps - sft_entropy(&f)).abs() < 1e-6,
                "h_eps {} vs oracle {}",
                block.h_eps,
                sft_entropy(&f)
            );
            assert!(block.rows.iter().all(|r| r.exact));
        }
        assert!((report.h_estimate - LOG_PHI).abs() < 1e-6);
    }

    #[test]
    fn h_eps_monotone_under_eps_refinement_on_exemplars() {
        let caps_grid = MetricPointSet::unit_grid(9).unwrap();
        let rel = FiniteRelation::full(Arc::new(caps_grid));
        let params = EstimateParams::new(vec![0.6, 0.3, 0.1], 8);
        let report = estimate_entropy(&rel, &params).unwrap();
        for pair in report.blocks.windows(2) {
            assert!(
                pair[1].h_eps >= pair[0].h_eps - 1e-9,
                "h_eps must not drop as eps decreases on this exemplar"
            );
        }
    }

    #[test]
    fn restricted_estimate_equals_full_on_whole_space() {
        let f = fibonacci();
        let params = EstimateParams::new(vec![0.5, 0.25], 12);
        let full = estimate_entropy(&f, &params).unwrap();
        let restricted = estimate_entropy_restricted(&f, &[0, 1], &params).unwrap();
        assert_eq!(full.h_estimate, restricted.h_estimate);
        assert!(estimate_entropy_restricted(&f, &[], &params).is_err());
    }

    #[test]
    fn schedule_validation() {
        let f = fibonacci();
        for schedule in [vec![], vec![0.5, 0.5], vec![0.2, 0.5], vec![0.5, -0.1]] {
            let params = EstimateParams::new(schedule, 10);
            assert!(matches!(
                estimate_entropy(&f, &params),
                Err(Error::ScheduleNotDecreasing)
            ));
        }
    }

    #[test]
    fn report_certificates_and_csv() {
        let g = full_two();
        let params = EstimateParams::new(vec![0.5], 8);
        let report = estimate_entropy(&g, &params).unwrap();
        assert_eq!(report.certificates.len(), 3);
        assert!(report.certificates[0].1.is_some()); // box fires on the full relation
        let csv = report.to_csv();
        assert!(csv.starts_with("eps,n,s_value,exact,log_s_over_n,h_eps\n"));
        assert!(csv.trim_end().ends_with(&format!("{:.12}", report.h_estimate)));
        assert!(report.h_estimate >= 0.0);
    }
}
