//! Instance-level evidence for the theorem inequalities: each check computes
//! both sides on a concrete system and records the quantities with a
//! verdict. Checks are pure and deterministic; re-running an instance
//! reproduces the result.

use num_bigint::BigUint;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use crate::entropy::sft_entropy;
use crate::error::{Error, Result};
use crate::orbit::{enumerate_orbits, OrbitBlock};
use crate::relation::FiniteRelation;
use crate::separation::{
    max_separated_by, r_n_eps, s_n_eps, ComputeCaps, Mode, SEP_TOL,
};
use crate::space::MetricPointSet;

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Pass,
    Fail,
    Skipped(String),
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

#[derive(Debug, Clone)]
pub struct TheoremCheckResult {
    pub theorem: String,
    pub instance: String,
    pub quantities: Vec<(String, String)>,
    pub verdict: Verdict,
    pub tolerance: f64,
}

impl TheoremCheckResult {
    fn new(theorem: &str, instance: &str, tolerance: f64) -> Self {
        TheoremCheckResult {
            theorem: theorem.to_string(),
            instance: instance.to_string(),
            quantities: Vec::new(),
            verdict: Verdict::Pass,
            tolerance,
        }
    }

    fn record(&mut self, key: &str, value: impl ToString) {
        self.quantities.push((key.to_string(), value.to_string()));
    }
}

/// h(F) <= h(F^k) <= k h(F), tolerance 1e-9.
pub fn verify_iterate_bounds(relation: &FiniteRelation, k: usize, instance: &str) -> TheoremCheckResult {
    let mut out = TheoremCheckResult::new("iterate-bounds", instance, 1e-9);
    if k == 0 {
        out.verdict = Verdict::Skipped("k must be at least 1".into());
        return out;
    }
    let h = sft_entropy(relation);
    let hk = sft_entropy(&relation.iterate(k));
    out.record("h(F)", format!("{h:.12}"));
    out.record(&format!("h(F^{k})"), format!("{hk:.12}"));
    out.record("k*h(F)", format!("{:.12}", k as f64 * h));
    let ok = h <= hk + out.tolerance && hk <= k as f64 * h + out.tolerance;
    out.verdict = if ok { Verdict::Pass } else { Verdict::Fail };
    out
}

/// s_{n,eps}(F) <= [s_{m,eps/2}(F^k)]^k with (m-1)k < n <= mk; needs exact
/// values on both sides, otherwise the verdict is skipped.
pub fn verify_lemma_iterate_counts(
    relation: &FiniteRelation,
    k: usize,
    n: usize,
    eps: f64,
    caps: &ComputeCaps,
    instance: &str,
) -> TheoremCheckResult {
    let mut out = TheoremCheckResult::new("lemma-iterate-counts", instance, 0.0);
    if k == 0 || n == 0 {
        out.verdict = Verdict::Skipped("k and n must be at least 1".into());
        return out;
    }
    let m = n.div_ceil(k);
    let lhs = match s_n_eps(relation, n, eps, Mode::Exact, caps) {
        Ok(r) if r.exact => r.value,
        Ok(_) | Err(_) => {
            out.verdict = Verdict::Skipped("left side not exactly computable".into());
            return out;
        }
    };
    let fk = relation.iterate(k);
    let rhs_base = match s_n_eps(&fk, m, eps / 2.0, Mode::Exact, caps) {
        Ok(r) if r.exact => r.value,
        Ok(_) | Err(_) => {
            out.verdict = Verdict::Skipped("right side not exactly computable".into());
            return out;
        }
    };
    let rhs = rhs_base.pow(k as u32);
    out.record("m", m);
    out.record(&format!("s_{{{n},{eps}}}(F)"), &lhs);
    out.record(&format!("s_{{{m},{}}}(F^{k})^{k}", eps / 2.0), &rhs);
    out.verdict = if lhs <= rhs { Verdict::Pass } else { Verdict::Fail };
    out
}

/// A bijection of point indices.
#[derive(Debug, Clone)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn validate(&self, len: usize) -> Result<()> {
        if self.0.len() != len {
            return Err(Error::BadHomeomorphism("permutation length mismatch".into()));
        }
        let mut seen = vec![false; len];
        for &i in &self.0 {
            if i >= len || seen[i] {
                return Err(Error::BadHomeomorphism("not a permutation".into()));
            }
            seen[i] = true;
        }
        Ok(())
    }
}

/// Push a relation through a permutation: the conjugated system
/// G(phi(x)) = phi(F(x)) on the permuted metric.
pub fn permute_relation(relation: &FiniteRelation, phi: &Permutation) -> Result<FiniteRelation> {
    let d = relation.len();
    phi.validate(d)?;
    let p = &phi.0;
    let space = relation.space();
    let mut inv = vec![0usize; d];
    for (i, &pi) in p.iter().enumerate() {
        inv[pi] = i;
    }
    let labels: Vec<String> = (0..d).map(|a| space.label(inv[a]).to_string()).collect();
    let matrix: Vec<Vec<f64>> = (0..d)
        .map(|a| (0..d).map(|b| space.dist(inv[a], inv[b])).collect())
        .collect();
    let new_space = Arc::new(MetricPointSet::new_unnormalized(labels, matrix)?);
    let mut adj = vec![vec![false; d]; d];
    for i in 0..d {
        for j in 0..d {
            adj[p[i]][p[j]] = relation.contains(i, j);
        }
    }
    FiniteRelation::new(new_space, adj)
}

/// Conjugacy invariance: the full s_{n,eps} table of F and of the permuted
/// system agree exactly, and the oracle entropies agree to 1e-12.
pub fn verify_conjugacy(
    relation: &FiniteRelation,
    phi: &Permutation,
    caps: &ComputeCaps,
    instance: &str,
) -> TheoremCheckResult {
    let mut out = TheoremCheckResult::new("conjugacy", instance, 1e-12);
    let g = match permute_relation(relation, phi) {
        Ok(g) => g,
        Err(e) => {
            out.verdict = Verdict::Skipped(format!("bad permutation: {e}"));
            return out;
        }
    };
    let h_f = sft_entropy(relation);
    let h_g = sft_entropy(&g);
    out.record("h(F)", format!("{h_f:.12}"));
    out.record("h(G)", format!("{h_g:.12}"));
    let mut tables_equal = true;
    for n in 1..=4 {
        for eps in [0.25, 0.5, 0.75] {
            let a = s_n_eps(relation, n, eps, Mode::Exact, caps);
            let b = s_n_eps(&g, n, eps, Mode::Exact, caps);
            match (a, b) {
                (Ok(a), Ok(b)) => {
                    if a.value != b.value {
                        tables_equal = false;
                        out.record(
                            &format!("mismatch at (n={n}, eps={eps})"),
                            format!("{} vs {}", a.value, b.value),
                        );
                    }
                }
                _ => {
                    out.verdict = Verdict::Skipped("table entry not computable".into());
                    return out;
                }
            }
        }
    }
    let ok = tables_equal && (h_f - h_g).abs() <= out.tolerance;
    out.verdict = if ok { Verdict::Pass } else { Verdict::Fail };
    out
}

/// Semi-conjugacy comparison: phi maps F's points onto G's points. The
/// hypothesis G(phi(x)) = phi(F(x))-subset is checked pointwise; instances
/// violating it are rejected (skipped), not failed.
pub fn verify_semiconjugacy(
    relation: &FiniteRelation,
    phi: &[usize],
    g: &FiniteRelation,
    instance: &str,
) -> TheoremCheckResult {
    let mut out = TheoremCheckResult::new("semi-conjugacy", instance, 1e-9);
    if phi.len() != relation.len() || phi.iter().any(|&y| y >= g.len()) {
        out.verdict = Verdict::Skipped("phi is not a map into G's space".into());
        return out;
    }
    let mut onto = vec![false; g.len()];
    for &y in phi {
        onto[y] = true;
    }
    if !onto.iter().all(|&b| b) {
        out.verdict = Verdict::Skipped("phi is not surjective".into());
        return out;
    }
    // hypothesis: G(phi(x)) included in phi(F(x)) for all x
    for x in 0..relation.len() {
        let image_phi_fx: Vec<usize> = {
            let mut v: Vec<usize> = relation.successors(x).iter().map(|&y| phi[y]).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        for z in g.successors(phi[x]) {
            if image_phi_fx.binary_search(&z).is_err() {
                out.verdict = Verdict::Skipped(format!(
                    "hypothesis fails at {}: G(phi(x)) is not inside phi(F(x))",
                    relation.space().label(x)
                ));
                return out;
            }
        }
    }
    let h_f = sft_entropy(relation);
    let h_g = sft_entropy(g);
    out.record("h(G)", format!("{h_g:.12}"));
    out.record("h(F)", format!("{h_f:.12}"));
    out.verdict = if h_g <= h_f + out.tolerance {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    out
}

/// h(F) = h(F^{-1}) for surjective F (the adjacency transpose has the same
/// spectral radius), tolerance 1e-12.
pub fn verify_inverse_entropy(relation: &FiniteRelation, instance: &str) -> TheoremCheckResult {
    let mut out = TheoremCheckResult::new("inverse-entropy", instance, 1e-12);
    let inv = match relation.inverse() {
        Ok(inv) => inv,
        Err(e) => {
            out.verdict = Verdict::Skipped(format!("{e}"));
            return out;
        }
    };
    let h = sft_entropy(relation);
    let h_inv = sft_entropy(&inv);
    out.record("h(F)", format!("{h:.12}"));
    out.record("h(F^-1)", format!("{h_inv:.12}"));
    out.verdict = if (h - h_inv).abs() <= out.tolerance {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    out
}

/// h(F) = h(F restricted to the surjective core), tolerance 1e-9.
pub fn verify_core_consistency(relation: &FiniteRelation, instance: &str) -> TheoremCheckResult {
    let mut out = TheoremCheckResult::new("surjective-core", instance, 1e-9);
    let (restricted, core) = relation.surjective_core();
    let h = sft_entropy(relation);
    let h_core = sft_entropy(&restricted);
    out.record("h(F)", format!("{h:.12}"));
    out.record("h(F|C)", format!("{h_core:.12}"));
    out.record("|C|", core.len());
    out.verdict = if (h - h_core).abs() <= out.tolerance {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    out
}

/// The shift-map sandwich s_{n,eps}(F) <= s_{n,eps}(sigma) <= s_{n+k,eps}(F)
/// with k the smallest integer satisfying 1/k < eps.
///
/// s_{n,eps}(sigma) is computed over truncated forward orbits of depth
/// ceil(1/eps): deeper coordinates contribute less than eps to rho, so the
/// separation decision on truncations is exact.
pub fn verify_shift_inequalities(
    relation: &FiniteRelation,
    n: usize,
    eps: f64,
    caps: &ComputeCaps,
    instance: &str,
) -> TheoremCheckResult {
    let mut out = TheoremCheckResult::new("shift-sandwich", instance, 0.0);
    if n == 0 || !(eps > 0.0) {
        out.verdict = Verdict::Skipped("need n >= 1 and eps > 0".into());
        return out;
    }
    let mut k = (1.0 / eps).floor() as usize;
    while 1.0 / (k.max(1) as f64) >= eps {
        k += 1;
    }
    let k = k.max(1);
    let mut i_max = (1.0 / eps).ceil() as usize;
    while 1.0 / ((i_max + 1) as f64) >= eps - SEP_TOL {
        i_max += 1;
    }
    let lower = match s_n_eps(relation, n, eps, Mode::Exact, caps) {
        Ok(r) if r.exact => r.value,
        _ => {
            out.verdict = Verdict::Skipped("s_{n,eps}(F) not exactly computable".into());
            return out;
        }
    };
    let upper = match s_n_eps(relation, n + k, eps, Mode::Exact, caps) {
        Ok(r) if r.exact => r.value,
        _ => {
            out.verdict = Verdict::Skipped("s_{n+k,eps}(F) not exactly computable".into());
            return out;
        }
    };
    // sigma-separated subsets of depth-(n + i_max - 1) truncations
    let len = n + i_max;
    let block = match enumerate_orbits(relation, len, None, caps.enum_cap) {
        Ok(b) => b,
        Err(_) => {
            out.verdict = Verdict::Skipped("orbit enumeration infeasible".into());
            return out;
        }
    };
    let orbits = match &block {
        OrbitBlock::Explicit { orbits, .. } => orbits,
        OrbitBlock::Counted { .. } => unreachable!(),
    };
    let space = relation.space();
    let sigma_dist = |a: usize, b: usize| -> f64 {
        let u = &orbits[a];
        let v = &orbits[b];
        let mut best = 0.0f64;
        for j in 0..n {
            for i in 0..=i_max {
                let d = space.dist(u[j + i], v[j + i]) / (i as f64 + 1.0);
                if d > best {
                    best = d;
                }
            }
        }
        best
    };
    let sigma = match max_separated_by(orbits.len(), sigma_dist, eps, Mode::Exact, caps) {
        Ok(r) if r.exact => BigUint::from(r.value),
        _ => {
            out.verdict = Verdict::Skipped("s_{n,eps}(sigma) not exactly computable".into());
            return out;
        }
    };
    out.record("k", k);
    out.record("depth", i_max);
    out.record(&format!("s_{{{n},{eps}}}(F)"), &lower);
    out.record("s(sigma)", &sigma);
    out.record(&format!("s_{{{},{eps}}}(F)", n + k), &upper);
    out.verdict = if lower <= sigma && sigma <= upper {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    out
}

/// The sandwich r_{n,eps} <= s_{n,eps} <= r_{n,eps/2} on exact values.
pub fn verify_span_separate_sandwich(
    relation: &FiniteRelation,
    n: usize,
    eps: f64,
    caps: &ComputeCaps,
    instance: &str,
) -> TheoremCheckResult {
    let mut out = TheoremCheckResult::new("span-separate-sandwich", instance, 0.0);
    let r = r_n_eps(relation, n, eps, Mode::Exact, caps);
    let s = s_n_eps(relation, n, eps, Mode::Exact, caps);
    let r_half = r_n_eps(relation, n, eps / 2.0, Mode::Exact, caps);
    match (r, s, r_half) {
        (Ok(r), Ok(s), Ok(rh)) if r.exact && s.exact && rh.exact => {
            out.record("r", &r.value);
            out.record("s", &s.value);
            out.record("r_eps/2", &rh.value);
            out.verdict = if r.value <= s.value && s.value <= rh.value {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
        }
        _ => {
            out.verdict = Verdict::Skipped("needs all three values exact".into());
        }
    }
    out
}

// ---------------------------------------------------------------------------
// randomized campaign

/// Deterministic random relation: 3..=6 points at spread-out positions in
/// [0,1], edge density in [0.3, 0.8], rows patched to stay non-empty.
pub fn random_relation(rng: &mut ChaCha8Rng) -> FiniteRelation {
    let m = rng.gen_range(3..=6usize);
    let coords = loop {
        let mut c: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..1.0)).collect();
        c.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if c.windows(2).all(|w| w[1] - w[0] > 0.05) {
            break c;
        }
    };
    let labels = (0..m).map(|i| format!("p{i}")).collect();
    let space = Arc::new(MetricPointSet::from_coords(labels, &coords).unwrap());
    let density = rng.gen_range(0.3..0.8);
    let mut adj = vec![vec![false; m]; m];
    for row in adj.iter_mut() {
        for cell in row.iter_mut() {
            *cell = rng.gen_bool(density);
        }
        if !row.iter().any(|&b| b) {
            let j = rng.gen_range(0..m);
            row[j] = true;
        }
    }
    FiniteRelation::new(space, adj).unwrap()
}

#[derive(Debug, Clone, Default)]
pub struct CampaignSummary {
    pub results: Vec<TheoremCheckResult>,
}

impl CampaignSummary {
    pub fn passed(&self) -> usize {
        self.results.iter().filter(|r| r.verdict.passed()).count()
    }

    pub fn failed(&self) -> usize {
        self.results
            .iter()
            .filter(|r| r.verdict == Verdict::Fail)
            .count()
    }

    pub fn skipped(&self) -> usize {
        self.results
            .iter()
            .filter(|r| matches!(r.verdict, Verdict::Skipped(_)))
            .count()
    }
}

/// Property campaign over seeded random relations: iterate bounds for
/// k in {2,3}, inverse entropy after passing to the surjective core, core
/// consistency, the r/s sandwich, the Lemma iterate-count inequality, and
/// small shift sandwiches.
pub fn run_campaign(seed: u64, instances: usize, caps: &ComputeCaps) -> CampaignSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = CampaignSummary::default();
    // exact search on orbit spaces stays small; oversized instances skip
    let small = ComputeCaps {
        bb_vertex_cap: caps.bb_vertex_cap.min(700),
        bb_work_budget: caps.bb_work_budget.min(20_000_000),
        ..caps.clone()
    };
    for idx in 0..instances {
        let rel = random_relation(&mut rng);
        let name = format!("random[{idx}] ({} points)", rel.len());
        for k in [2, 3] {
            summary.results.push(verify_iterate_bounds(&rel, k, &name));
        }
        let (core_rel, _) = rel.surjective_core();
        summary
            .results
            .push(verify_inverse_entropy(&core_rel, &format!("{name} core")));
        summary.results.push(verify_core_consistency(&rel, &name));
        if rel.len() <= 5 {
            for eps in [0.3, 0.6] {
                for n in [3, 5] {
                    summary.results.push(verify_span_separate_sandwich(
                        &rel, n, eps, &small, &name,
                    ));
                }
            }
        }
        summary.results.push(verify_lemma_iterate_counts(
            &rel, 2, 4, 0.5, &small, &name,
        ));
        summary
            .results
            .push(verify_shift_inequalities(&rel, 3, 0.6, &small, &name));
    }
    summary
}
