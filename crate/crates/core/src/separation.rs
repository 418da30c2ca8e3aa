//! Largest epsilon-separated subsets (s) and smallest epsilon-spanning
//! subsets (r) of orbit spaces, exact via branch-and-bound where feasible and
//! with certified greedy bounds otherwise.
//!
//! Strictness follows the definitions: separated means d >= eps, spanning
//! means d < eps. Boundary ties within 1e-12 resolve in favour of
//! "separated", for both predicates, so the two stay exact complements.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::orbit::{count_orbits, enumerate_orbits, OrbitBlock};
use crate::relation::FiniteRelation;
use crate::space::MetricPointSet;

/// Float slack for boundary ties; pairs within this of epsilon count as
/// separated.
pub const SEP_TOL: f64 = 1e-12;

/// Two points conflict (are not separated) iff d < eps - SEP_TOL.
#[inline]
pub fn conflicts(d: f64, eps: f64) -> bool {
    d < eps - SEP_TOL
}

/// A point is within an eps-ball iff d < eps - SEP_TOL (same threshold, so
/// "covered" and "separated" partition the boundary consistently).
#[inline]
pub fn within(d: f64, eps: f64) -> bool {
    d < eps - SEP_TOL
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    TotalCount,
    BranchAndBound,
    GreedyLower,
    GreedyUpper,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::TotalCount => "total-count",
            Method::BranchAndBound => "branch-and-bound",
            Method::GreedyLower => "greedy-lower",
            Method::GreedyUpper => "greedy-upper",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Greedy,
}

/// Resource limits for exact computations.
#[derive(Debug, Clone)]
pub struct ComputeCaps {
    /// refuse explicit enumeration above this many orbits
    pub enum_cap: u64,
    /// refuse exact branch-and-bound above this many vertices
    pub bb_vertex_cap: usize,
    /// deterministic work budget (scan and bound operations, not wall time);
    /// exhausted searches fall back to their incumbent as a certified bound
    pub bb_work_budget: u64,
    /// greedy restarts for separated sets
    pub greedy_seeds: usize,
}

impl Default for ComputeCaps {
    fn default() -> Self {
        ComputeCaps {
            enum_cap: crate::orbit::DEFAULT_ENUM_CAP,
            bb_vertex_cap: 5000,
            bb_work_budget: 50_000_000,
            greedy_seeds: 8,
        }
    }
}

/// Result of a separated/spanning computation over n-orbits.
#[derive(Debug, Clone)]
pub struct SeparationResult {
    pub n: usize,
    pub epsilon: f64,
    pub value: BigUint,
    pub exact: bool,
    pub method: Method,
    pub witness: Option<Vec<Vec<usize>>>,
}

/// Result of the generic point-set operations (witness holds point indices).
#[derive(Debug, Clone)]
pub struct SetResult {
    pub value: usize,
    pub exact: bool,
    pub method: Method,
    pub witness: Vec<usize>,
}

// ---------------------------------------------------------------------------
// bitset rows

#[derive(Clone, Debug)]
struct Bits {
    w: Vec<u64>,
}

impl Bits {
    fn new(n: usize) -> Self {
        Bits {
            w: vec![0; n.div_ceil(64)],
        }
    }

    fn full(n: usize) -> Self {
        let mut b = Bits::new(n);
        for i in 0..n {
            b.set(i);
        }
        b
    }

    #[inline]
    fn set(&mut self, i: usize) {
        self.w[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    fn clear(&mut self, i: usize) {
        self.w[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    fn get(&self, i: usize) -> bool {
        self.w[i / 64] >> (i % 64) & 1 == 1
    }

    fn count(&self) -> usize {
        self.w.iter().map(|x| x.count_ones() as usize).sum()
    }

    fn is_empty_set(&self) -> bool {
        self.w.iter().all(|&x| x == 0)
    }

    fn or_assign(&mut self, other: &Bits) {
        for (a, b) in self.w.iter_mut().zip(&other.w) {
            *a |= b;
        }
    }

    fn and_not_assign(&mut self, other: &Bits) {
        for (a, b) in self.w.iter_mut().zip(&other.w) {
            *a &= !b;
        }
    }

    /// self ⊆ other
    fn subset_of(&self, other: &Bits) -> bool {
        self.w.iter().zip(&other.w).all(|(a, b)| a & !b == 0)
    }

    fn intersection_count(&self, other: &Bits) -> usize {
        self.w
            .iter()
            .zip(&other.w)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn first_one(&self) -> Option<usize> {
        for (k, &word) in self.w.iter().enumerate() {
            if word != 0 {
                return Some(k * 64 + word.trailing_zeros() as usize);
            }
        }
        None
    }

    fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.w.iter().enumerate().flat_map(|(k, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let t = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(k * 64 + t)
                }
            })
        })
    }
}

/// Conflict rows: row i holds the set of j != i with d(i,j) < eps - tol.
fn conflict_graph(count: usize, dist: &(impl Fn(usize, usize) -> f64 + Sync), eps: f64) -> Vec<Bits> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut row = Bits::new(count);
            for j in 0..count {
                if j != i && conflicts(dist(i, j), eps) {
                    row.set(j);
                }
            }
            row
        })
        .collect()
}

// ---------------------------------------------------------------------------
// maximum separated set = maximum independent set in the conflict graph
//
// Conflict graphs of metric instances split into small connected components
// (clusters of mutually close points); both exact solvers decompose along
// components and apply standard reductions before branching.

fn connected_components(adj: &[Bits]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for u in adj[v].iter_ones() {
                if !seen[u] {
                    seen[u] = true;
                    comp.push(u);
                    stack.push(u);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

fn restrict_rows(adj: &[Bits], comp: &[usize]) -> Vec<Bits> {
    let m = comp.len();
    let mut local = vec![Bits::new(m); m];
    for (a, &i) in comp.iter().enumerate() {
        for (b, &j) in comp.iter().enumerate() {
            if a != b && adj[i].get(j) {
                local[a].set(b);
            }
        }
    }
    local
}

struct MisSearch<'a> {
    adj: &'a [Bits],
    best: Vec<usize>,
    work: u64,
    budget: u64,
    completed: bool,
}

impl<'a> MisSearch<'a> {
    /// Clique cover of the candidate set: each clique meets an independent
    /// set at most once, so the cover size bounds it from above. Charges its
    /// cost against the work budget.
    fn upper_bound(&mut self, p: &Bits) -> usize {
        let mut cliques: Vec<Bits> = Vec::new();
        let mut cost = 0u64;
        for v in p.iter_ones() {
            let mut placed = false;
            for c in cliques.iter_mut() {
                cost += 1;
                if c.subset_of(&self.adj[v]) {
                    c.set(v);
                    placed = true;
                    break;
                }
            }
            if !placed {
                let mut c = Bits::new(self.adj.len());
                c.set(v);
                cliques.push(c);
            }
        }
        self.work += cost;
        cliques.len()
    }

    fn run(&mut self, mut p: Bits, chosen: &mut Vec<usize>) {
        self.work += 1 + p.count() as u64;
        if self.work > self.budget {
            self.completed = false;
            return;
        }
        let mark = chosen.len();
        // take isolated vertices outright; a pendant vertex always enters
        // some maximum independent set, so take it and drop its neighbour
        loop {
            let mut acted = false;
            let candidates: Vec<usize> = p.iter_ones().collect();
            for v in candidates {
                if !p.get(v) {
                    continue;
                }
                let deg = self.adj[v].intersection_count(&p);
                if deg == 0 {
                    chosen.push(v);
                    p.clear(v);
                    acted = true;
                } else if deg == 1 {
                    chosen.push(v);
                    p.clear(v);
                    p.and_not_assign(&self.adj[v]);
                    acted = true;
                }
            }
            if !acted {
                break;
            }
        }
        if p.is_empty_set() {
            if chosen.len() > self.best.len() {
                self.best = chosen.clone();
            }
            chosen.truncate(mark);
            return;
        }
        if chosen.len() + self.upper_bound(&p) <= self.best.len() {
            chosen.truncate(mark);
            return;
        }
        // branch on the candidate with the most conflicts inside p
        let v = p
            .iter_ones()
            .max_by_key(|&v| (self.adj[v].intersection_count(&p), usize::MAX - v))
            .unwrap();
        // include v
        let mut p_in = p.clone();
        p_in.clear(v);
        p_in.and_not_assign(&self.adj[v]);
        chosen.push(v);
        self.run(p_in, chosen);
        chosen.pop();
        if self.completed {
            // exclude v
            let mut p_out = p;
            p_out.clear(v);
            self.run(p_out, chosen);
        }
        chosen.truncate(mark);
    }
}

/// Exact maximum independent set by component decomposition; the returned
/// flag reports whether every component search completed within the shared
/// node budget (otherwise the result is the best certified set found).
fn exact_independent_set(adj: &[Bits], budget: u64, seeds: usize) -> (Vec<usize>, bool) {
    let mut remaining = budget;
    let mut all = Vec::new();
    let mut complete = true;
    for comp in connected_components(adj) {
        if comp.len() == 1 {
            all.push(comp[0]);
            continue;
        }
        let local = restrict_rows(adj, &comp);
        let mut search = MisSearch {
            adj: &local,
            best: greedy_independent(&local, seeds),
            work: 0,
            budget: remaining,
            completed: true,
        };
        search.run(Bits::full(comp.len()), &mut Vec::new());
        remaining = remaining.saturating_sub(search.work);
        complete &= search.completed;
        all.extend(search.best.into_iter().map(|a| comp[a]));
    }
    all.sort_unstable();
    (all, complete)
}

/// Maximum independent set of a boolean adjacency matrix; returns the set
/// (sorted) and whether the search completed within the node budget.
pub(crate) fn max_independent_set_bool(adj: &[Vec<bool>], budget: u64) -> (Vec<usize>, bool) {
    let n = adj.len();
    if n == 0 {
        return (Vec::new(), true);
    }
    let rows: Vec<Bits> = (0..n)
        .map(|i| {
            let mut b = Bits::new(n);
            for j in 0..n {
                if j != i && adj[i][j] {
                    b.set(j);
                }
            }
            b
        })
        .collect();
    exact_independent_set(&rows, budget, 4)
}

fn greedy_independent(adj: &[Bits], seeds: usize) -> Vec<usize> {
    let n = adj.len();
    let seeds = seeds.max(1);
    let mut best: Vec<usize> = Vec::new();
    for k in 0..seeds {
        let start = k * n / seeds;
        let mut blocked = Bits::new(n);
        let mut chosen = Vec::new();
        for t in 0..n {
            let i = (start + t) % n;
            if !blocked.get(i) {
                chosen.push(i);
                blocked.set(i);
                blocked.or_assign(&adj[i]);
            }
        }
        if chosen.len() > best.len() {
            chosen.sort_unstable();
            best = chosen;
        }
    }
    best
}

/// Largest eps-separated subset of an indexed point set. Exact mode refuses
/// inputs above the vertex cap; greedy mode returns a maximal set, a
/// certified lower bound.
pub fn max_separated_by(
    count: usize,
    dist: impl Fn(usize, usize) -> f64 + Sync,
    eps: f64,
    mode: Mode,
    caps: &ComputeCaps,
) -> Result<SetResult> {
    if count == 0 {
        return Err(Error::EmptySet);
    }
    if !(eps > 0.0) {
        return Err(Error::BadSpec("epsilon must be positive".into()));
    }
    if mode == Mode::Exact && count > caps.bb_vertex_cap {
        return Err(Error::VertexCapExceeded {
            size: count,
            cap: caps.bb_vertex_cap,
        });
    }
    let adj = conflict_graph(count, &dist, eps);
    if mode == Mode::Greedy {
        let greedy = greedy_independent(&adj, caps.greedy_seeds);
        return Ok(SetResult {
            value: greedy.len(),
            exact: false,
            method: Method::GreedyLower,
            witness: greedy,
        });
    }
    let (witness, exact) = exact_independent_set(&adj, caps.bb_work_budget, caps.greedy_seeds);
    Ok(SetResult {
        value: witness.len(),
        exact,
        method: if exact {
            Method::BranchAndBound
        } else {
            Method::GreedyLower
        },
        witness,
    })
}

// ---------------------------------------------------------------------------
// minimum spanning set = minimum set cover by open eps-balls

struct CoverSearch<'a> {
    balls: &'a [Bits],
    /// coverers[e] = centers whose ball contains e
    coverers: &'a [Vec<usize>],
    best: Vec<usize>,
    work: u64,
    budget: u64,
    completed: bool,
}

impl<'a> CoverSearch<'a> {
    fn lower_bound(&mut self, uncovered: &Bits) -> usize {
        let remaining = uncovered.count();
        if remaining == 0 {
            return 0;
        }
        let max_ball = self
            .balls
            .iter()
            .map(|b| b.intersection_count(uncovered))
            .max()
            .unwrap_or(1)
            .max(1);
        let lb1 = remaining.div_ceil(max_ball);
        // elements pairwise not co-coverable each demand their own center
        let mut rem = uncovered.clone();
        let mut lb2 = 0;
        let mut cost = self.balls.len() as u64;
        while let Some(e) = rem.first_one() {
            lb2 += 1;
            cost += self.coverers[e].len() as u64;
            for &c in &self.coverers[e] {
                rem.and_not_assign(&self.balls[c]);
            }
            rem.clear(e);
        }
        self.work += cost;
        lb1.max(lb2)
    }

    fn run(&mut self, mut uncovered: Bits, chosen: &mut Vec<usize>) {
        self.work += 1 + uncovered.count() as u64;
        if self.work > self.budget {
            self.completed = false;
            return;
        }
        let mark = chosen.len();
        // an uncovered element with a single candidate ball forces it
        loop {
            let mut forced = None;
            for e in uncovered.iter_ones() {
                if self.coverers[e].len() == 1 {
                    forced = Some(self.coverers[e][0]);
                    break;
                }
            }
            match forced {
                Some(c) => {
                    chosen.push(c);
                    uncovered.and_not_assign(&self.balls[c]);
                }
                None => break,
            }
        }
        if uncovered.is_empty_set() {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            chosen.truncate(mark);
            return;
        }
        if chosen.len() + self.lower_bound(&uncovered) >= self.best.len() {
            chosen.truncate(mark);
            return;
        }
        // branch on the uncovered element with the fewest coverers
        let e = uncovered
            .iter_ones()
            .min_by_key(|&e| (self.coverers[e].len(), e))
            .unwrap();
        for c in self.coverers[e].clone() {
            let mut next = uncovered.clone();
            next.and_not_assign(&self.balls[c]);
            chosen.push(c);
            self.run(next, chosen);
            chosen.pop();
            if !self.completed {
                break;
            }
        }
        chosen.truncate(mark);
    }
}

fn greedy_cover_of(balls: &[Bits], universe: &Bits) -> Vec<usize> {
    let mut uncovered = universe.clone();
    let mut chosen = Vec::new();
    while !uncovered.is_empty_set() {
        let mut best_i = usize::MAX;
        let mut best_c = 0usize;
        for (i, b) in balls.iter().enumerate() {
            let c = b.intersection_count(&uncovered);
            if c > best_c {
                best_c = c;
                best_i = i;
            }
        }
        chosen.push(best_i);
        uncovered.and_not_assign(&balls[best_i]);
    }
    chosen.sort_unstable();
    chosen
}

/// Smallest subset whose open eps-balls cover the whole point set. Greedy
/// mode returns a certified upper bound.
pub fn min_spanning_by(
    count: usize,
    dist: impl Fn(usize, usize) -> f64 + Sync,
    eps: f64,
    mode: Mode,
    caps: &ComputeCaps,
) -> Result<SetResult> {
    if count == 0 {
        return Err(Error::EmptySet);
    }
    if !(eps > 0.0) {
        return Err(Error::BadSpec("epsilon must be positive".into()));
    }
    if mode == Mode::Exact && count > caps.bb_vertex_cap {
        return Err(Error::VertexCapExceeded {
            size: count,
            cap: caps.bb_vertex_cap,
        });
    }
    let balls: Vec<Bits> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut row = Bits::new(count);
            for j in 0..count {
                if within(dist(i, j), eps) {
                    row.set(j);
                }
            }
            row.set(i);
            row
        })
        .collect();
    if mode == Mode::Greedy {
        let greedy = greedy_cover_of(&balls, &Bits::full(count));
        return Ok(SetResult {
            value: greedy.len(),
            exact: false,
            method: Method::GreedyUpper,
            witness: greedy,
        });
    }
    // covering decomposes along components of the within-eps graph
    let mut remaining = caps.bb_work_budget;
    let mut witness: Vec<usize> = Vec::new();
    let mut exact = true;
    for comp in connected_components(&balls) {
        if comp.len() == 1 {
            witness.push(comp[0]);
            continue;
        }
        let local_balls = {
            let mut rows = restrict_rows(&balls, &comp);
            for (a, row) in rows.iter_mut().enumerate() {
                row.set(a);
            }
            rows
        };
        let m = comp.len();
        let mut coverers = vec![Vec::new(); m];
        for (c, b) in local_balls.iter().enumerate() {
            for e in b.iter_ones() {
                coverers[e].push(c);
            }
        }
        let mut search = CoverSearch {
            balls: &local_balls,
            coverers: &coverers,
            best: greedy_cover_of(&local_balls, &Bits::full(m)),
            work: 0,
            budget: remaining,
            completed: true,
        };
        search.run(Bits::full(m), &mut Vec::new());
        remaining = remaining.saturating_sub(search.work);
        exact &= search.completed;
        witness.extend(search.best.into_iter().map(|a| comp[a]));
    }
    witness.sort_unstable();
    Ok(SetResult {
        value: witness.len(),
        exact,
        method: if exact {
            Method::BranchAndBound
        } else {
            Method::GreedyUpper
        },
        witness,
    })
}

// ---------------------------------------------------------------------------
// orbit-level wrappers

fn explicit_orbits(block: &OrbitBlock) -> &[Vec<usize>] {
    match block {
        OrbitBlock::Explicit { orbits, .. } => orbits,
        OrbitBlock::Counted { .. } => unreachable!("enumerate_orbits returns explicit blocks"),
    }
}

fn orbit_dist<'a>(
    space: &'a MetricPointSet,
    orbits: &'a [Vec<usize>],
) -> impl Fn(usize, usize) -> f64 + Sync + 'a {
    move |a, b| {
        orbits[a]
            .iter()
            .zip(&orbits[b])
            .map(|(&x, &y)| space.dist(x, y))
            .fold(0.0, f64::max)
    }
}

pub(crate) fn s_n_eps_from(
    relation: &FiniteRelation,
    n: usize,
    eps: f64,
    mode: Mode,
    caps: &ComputeCaps,
    start: Option<&[usize]>,
) -> Result<SeparationResult> {
    if n == 0 {
        return Err(Error::BadSpec("n must be at least 1".into()));
    }
    if !(eps > 0.0) {
        return Err(Error::BadSpec("epsilon must be positive".into()));
    }
    let minpos = relation.space().min_positive_distance();
    // fast path: distinct orbits are automatically separated
    if eps <= minpos + SEP_TOL {
        let value = count_orbits(relation, n, start)?;
        return Ok(SeparationResult {
            n,
            epsilon: eps,
            value,
            exact: true,
            method: Method::TotalCount,
            witness: None,
        });
    }
    let block = match enumerate_orbits(relation, n, start, caps.enum_cap) {
        Ok(b) => b,
        Err(Error::CapExceeded { .. }) => {
            let lower = certified_lower_bound(relation, n, eps, start);
            return Err(Error::ExactInfeasible {
                reason: format!("more than {} orbits at n = {n}", caps.enum_cap),
                bound: lower,
            });
        }
        Err(e) => return Err(e),
    };
    let orbits = explicit_orbits(&block);
    let set = max_separated_by(
        orbits.len(),
        orbit_dist(relation.space(), orbits),
        eps,
        mode,
        caps,
    )?;
    Ok(SeparationResult {
        n,
        epsilon: eps,
        value: BigUint::from(set.value),
        exact: set.exact,
        method: set.method,
        witness: Some(set.witness.iter().map(|&i| orbits[i].clone()).collect()),
    })
}

/// s_{n,eps}: the largest cardinality of an eps-separated subset of
/// Orb_n(X, F) under the metric D.
pub fn s_n_eps(
    relation: &FiniteRelation,
    n: usize,
    eps: f64,
    mode: Mode,
    caps: &ComputeCaps,
) -> Result<SeparationResult> {
    s_n_eps_from(relation, n, eps, mode, caps, None)
}

/// r_{n,eps}: the smallest cardinality of an eps-spanning subset of
/// Orb_n(X, F) under the metric D.
pub fn r_n_eps(
    relation: &FiniteRelation,
    n: usize,
    eps: f64,
    mode: Mode,
    caps: &ComputeCaps,
) -> Result<SeparationResult> {
    if n == 0 {
        return Err(Error::BadSpec("n must be at least 1".into()));
    }
    if !(eps > 0.0) {
        return Err(Error::BadSpec("epsilon must be positive".into()));
    }
    let minpos = relation.space().min_positive_distance();
    // fast path: each orbit's ball contains only itself
    if eps <= minpos + SEP_TOL {
        let value = count_orbits(relation, n, None)?;
        return Ok(SeparationResult {
            n,
            epsilon: eps,
            value,
            exact: true,
            method: Method::TotalCount,
            witness: None,
        });
    }
    let block = match enumerate_orbits(relation, n, None, caps.enum_cap) {
        Ok(b) => b,
        Err(Error::CapExceeded { count, .. }) => {
            return Err(Error::ExactInfeasible {
                reason: format!("more than {} orbits at n = {n}", caps.enum_cap),
                bound: count,
            });
        }
        Err(e) => return Err(e),
    };
    let orbits = explicit_orbits(&block);
    let set = min_spanning_by(
        orbits.len(),
        orbit_dist(relation.space(), orbits),
        eps,
        mode,
        caps,
    )?;
    Ok(SeparationResult {
        n,
        epsilon: eps,
        value: BigUint::from(set.value),
        exact: set.exact,
        method: set.method,
        witness: Some(set.witness.iter().map(|&i| orbits[i].clone()).collect()),
    })
}

// ---------------------------------------------------------------------------
// certified transfer-matrix lower bound

/// Greedy lexicographic thinning of a candidate list to a pairwise
/// eps-separated sublist.
pub fn thin_separated(space: &MetricPointSet, candidates: &[usize], eps: f64) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    for &c in candidates {
        if kept.iter().all(|&k| !conflicts(space.dist(c, k), eps)) {
            kept.push(c);
        }
    }
    kept
}

/// Successor lists thinned so that each image set is pairwise eps-separated.
/// Orbits of the thinned relation that share a start are separated at their
/// first divergence, so counting them certifies a lower bound for s_{n,eps}.
pub fn separated_image_successors(relation: &FiniteRelation, eps: f64) -> Vec<Vec<usize>> {
    let space = relation.space();
    (0..relation.len())
        .map(|i| thin_separated(space, &relation.successors(i), eps))
        .collect()
}

/// Certified lower bound for s_{n,eps} (restricted to `start` when given),
/// computed by a transfer-matrix count over the thinned subrelation with a
/// pairwise-separated start set.
pub fn certified_lower_bound(
    relation: &FiniteRelation,
    n: usize,
    eps: f64,
    start: Option<&[usize]>,
) -> BigUint {
    let succ = separated_image_successors(relation, eps);
    let space = relation.space();
    let all: Vec<usize> = (0..relation.len()).collect();
    let starts = thin_separated(space, start.unwrap_or(&all), eps);
    // v[i] = number of length-(t+1) thinned orbits from i
    let d = relation.len();
    let mut v = vec![BigUint::from(1u8); d];
    for _ in 1..n {
        let mut next = vec![BigUint::from(0u8); d];
        for i in 0..d {
            let mut acc = BigUint::from(0u8);
            for &j in &succ[i] {
                acc += &v[j];
            }
            next[i] = acc;
        }
        v = next;
    }
    starts.iter().map(|&i| &v[i]).sum()
}

/// Re-check a separated witness against the definition.
pub fn validate_separated_witness(
    space: &MetricPointSet,
    witness: &[Vec<usize>],
    eps: f64,
) -> bool {
    for (a, u) in witness.iter().enumerate() {
        for v in witness.iter().skip(a + 1) {
            let d = u
                .iter()
                .zip(v)
                .map(|(&x, &y)| space.dist(x, y))
                .fold(0.0, f64::max);
            if conflicts(d, eps) {
                return false;
            }
        }
    }
    true
}

/// Re-check a spanning witness: every orbit of the block must lie within eps
/// of some witness orbit.
pub fn validate_spanning_witness(
    space: &MetricPointSet,
    orbits: &[Vec<usize>],
    witness: &[Vec<usize>],
    eps: f64,
) -> bool {
    orbits.iter().all(|o| {
        witness.iter().any(|w| {
            let d = o
                .iter()
                .zip(w)
                .map(|(&x, &y)| space.dist(x, y))
                .fold(0.0, f64::max);
            within(d, eps)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::fixtures::{fibonacci, full_two};
    use std::sync::Arc;

    fn grid_11() -> MetricPointSet {
        MetricPointSet::unit_grid(11).unwrap()
    }

    /// Brute-force oracle: largest separated subset by subset enumeration.
    fn brute_max_separated(space: &MetricPointSet, eps: f64) -> usize {
        let n = space.len();
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let pts: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let ok = pts.iter().enumerate().all(|(a, &i)| {
                pts.iter()
                    .skip(a + 1)
                    .all(|&j| !conflicts(space.dist(i, j), eps))
            });
            if ok {
                best = best.max(pts.len());
            }
        }
        best
    }

    /// Brute-force oracle: smallest spanning subset by subset enumeration.
    fn brute_min_spanning(space: &MetricPointSet, eps: f64) -> usize {
        let n = space.len();
        let mut best = n;
        for mask in 1u32..(1 << n) {
            let pts: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let covers = (0..n).all(|j| pts.iter().any(|&i| within(space.dist(i, j), eps)));
            if covers {
                best = best.min(pts.len());
            }
        }
        best
    }

    #[test]
    fn max_separated_examples() {
        let caps = ComputeCaps::default();
        // two points at distance 1, eps 0.5 -> 2
        let two = MetricPointSet::unit_grid(2).unwrap();
        let r = max_separated_by(2, |i, j| two.dist(i, j), 0.5, Mode::Exact, &caps).unwrap();
        assert_eq!(r.value, 2);
        // grid {0, 0.1, ..., 1.0}, eps 0.25: frozen from the brute-force
        // oracle (gaps on this grid are multiples of 0.1, so five points
        // pairwise >= 0.25 apart cannot fit in [0,1]; the optimum is 4)
        let g = grid_11();
        let oracle = brute_max_separated(&g, 0.25);
        assert_eq!(oracle, 4);
        let r = max_separated_by(11, |i, j| g.dist(i, j), 0.25, Mode::Exact, &caps).unwrap();
        assert_eq!(r.value, oracle);
        assert!(r.exact);
        // eps larger than the diameter -> 1
        let r = max_separated_by(11, |i, j| g.dist(i, j), 1.5, Mode::Exact, &caps).unwrap();
        assert_eq!(r.value, 1);
    }

    #[test]
    fn min_spanning_examples() {
        let caps = ComputeCaps::default();
        // a single point, any eps -> 1
        let one = MetricPointSet::new_unnormalized(vec!["p".into()], vec![vec![0.0]]).unwrap();
        let r = min_spanning_by(1, |i, j| one.dist(i, j), 0.1, Mode::Exact, &caps).unwrap();
        assert_eq!(r.value, 1);
        // grid step 0.1, eps 0.25 -> 3 (brute-force confirmed)
        let g = grid_11();
        assert_eq!(brute_min_spanning(&g, 0.25), 3);
        let r = min_spanning_by(11, |i, j| g.dist(i, j), 0.25, Mode::Exact, &caps).unwrap();
        assert_eq!(r.value, 3);
        assert!(r.exact);
        // two points at distance 1, eps 2 -> 1
        let two = MetricPointSet::unit_grid(2).unwrap();
        let r = min_spanning_by(2, |i, j| two.dist(i, j), 2.0, Mode::Exact, &caps).unwrap();
        assert_eq!(r.value, 1);
    }

    #[test]
    fn exact_mode_respects_vertex_cap() {
        let g = grid_11();
        let caps = ComputeCaps {
            bb_vertex_cap: 5,
            ..Default::default()
        };
        let err = max_separated_by(11, |i, j| g.dist(i, j), 0.25, Mode::Exact, &caps).unwrap_err();
        assert!(matches!(
            err,
            Error::VertexCapExceeded { size: 11, cap: 5 }
        ));
    }

    #[test]
    fn greedy_is_certified_lower_bound() {
        let g = grid_11();
        let caps = ComputeCaps::default();
        let exact = max_separated_by(11, |i, j| g.dist(i, j), 0.25, Mode::Exact, &caps).unwrap();
        let greedy = max_separated_by(11, |i, j| g.dist(i, j), 0.25, Mode::Greedy, &caps).unwrap();
        assert!(greedy.value <= exact.value);
        assert!(greedy.value >= 1);
        assert_eq!(greedy.method, Method::GreedyLower);
        // witness re-check
        let w: Vec<Vec<usize>> = greedy.witness.iter().map(|&i| vec![i]).collect();
        assert!(validate_separated_witness(&g, &w, 0.25));
    }

    #[test]
    fn fibonacci_s_values() {
        let f = fibonacci();
        let caps = ComputeCaps::default();
        for (n, expect) in [(1usize, 2u32), (2, 3), (3, 5)] {
            let r = s_n_eps(&f, n, 0.5, Mode::Exact, &caps).unwrap();
            assert_eq!(r.value, BigUint::from(expect));
            assert!(r.exact);
            assert_eq!(r.method, Method::TotalCount);
        }
    }

    #[test]
    fn full_relation_s_and_r() {
        let g = full_two();
        let caps = ComputeCaps::default();
        let s = s_n_eps(&g, 4, 0.5, Mode::Exact, &caps).unwrap();
        assert_eq!(s.value, BigUint::from(16u8));
        let r = r_n_eps(&g, 4, 0.5, Mode::Exact, &caps).unwrap();
        assert_eq!(r.value, BigUint::from(16u8));
        // singleton space: 1 for all n, eps
        let one = Arc::new(
            MetricPointSet::new_unnormalized(vec!["p".into()], vec![vec![0.0]]).unwrap(),
        );
        let id = FiniteRelation::identity(one);
        for n in 1..=4 {
            assert_eq!(
                s_n_eps(&id, n, 0.3, Mode::Exact, &caps).unwrap().value,
                BigUint::from(1u8)
            );
            assert_eq!(
                r_n_eps(&id, n, 0.3, Mode::Exact, &caps).unwrap().value,
                BigUint::from(1u8)
            );
        }
    }

    #[test]
    fn fibonacci_r_2_above_fast_path() {
        // eps = 1.5 exceeds every distance, so all three 2-orbits are mutually
        // within eps and a single orbit spans: r = 1. At eps = 0.5 the fast
        // path gives r = 3.
        let f = fibonacci();
        let caps = ComputeCaps::default();
        let r = r_n_eps(&f, 2, 0.5, Mode::Exact, &caps).unwrap();
        assert_eq!(r.value, BigUint::from(3u8));
        let r = r_n_eps(&f, 2, 1.5, Mode::Exact, &caps).unwrap();
        assert_eq!(r.value, BigUint::from(1u8));
        let w = r.witness.unwrap();
        let block = enumerate_orbits(&f, 2, None, 1000).unwrap();
        let orbits = match &block {
            OrbitBlock::Explicit { orbits, .. } => orbits.clone(),
            _ => unreachable!(),
        };
        assert!(validate_spanning_witness(f.space(), &orbits, &w, 1.5));
    }

    #[test]
    fn thinned_lower_bound_is_sound_and_positive() {
        let f = fibonacci();
        let caps = ComputeCaps::default();
        for n in 1..=5 {
            for eps in [0.3, 0.6, 1.2] {
                let lb = certified_lower_bound(&f, n, eps, None);
                match s_n_eps(&f, n, eps, Mode::Exact, &caps) {
                    Ok(exact) => assert!(lb <= exact.value, "lb {lb} > s {}", exact.value),
                    Err(_) => {}
                }
                assert!(lb >= BigUint::from(1u8));
            }
        }
    }
}
