//! Certificate detectors: structural witnesses that force a lower bound on
//! the topological entropy.
//!
//! * box: points a != b with {a,b} contained in both F(a) and F(b) force
//!   h >= log 2;
//! * double-periodic: a point on two distinct periodic orbits of periods m, k
//!   forces h >= (log 2) / lcm(m, k);
//! * complete subset: a set A with A contained in F(a) for every a in A
//!   forces h >= log |A| (growing such subsets across refinements is how
//!   infinite entropy shows up at desk scale).

use num_integer::Integer;
use std::collections::BTreeSet;

use crate::relation::FiniteRelation;
use crate::separation::max_independent_set_bool;
use crate::space::MetricPointSet;

const LN_2: f64 = std::f64::consts::LN_2;

#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    Box {
        a: usize,
        b: usize,
        bound: f64,
    },
    DoublePeriodic {
        point: usize,
        periods: (usize, usize),
        lcm: usize,
        orbit_a: Vec<usize>,
        orbit_b: Vec<usize>,
        bound: f64,
    },
    CompleteSubset {
        subset: Vec<usize>,
        bound: f64,
    },
}

impl Certificate {
    pub fn bound(&self) -> f64 {
        match self {
            Certificate::Box { bound, .. }
            | Certificate::DoublePeriodic { bound, .. }
            | Certificate::CompleteSubset { bound, .. } => *bound,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Box { .. } => "box",
            Certificate::DoublePeriodic { .. } => "double-periodic",
            Certificate::CompleteSubset { .. } => "complete-subset",
        }
    }

    pub fn describe(&self, space: &MetricPointSet) -> String {
        let name = |i: usize| space.label(i).to_string();
        match self {
            Certificate::Box { a, b, bound } => format!(
                "box witness ({}, {}): h >= {:.6}",
                name(*a),
                name(*b),
                bound
            ),
            Certificate::DoublePeriodic {
                point,
                periods,
                lcm,
                orbit_a,
                orbit_b,
                bound,
            } => {
                let seq = |o: &[usize]| {
                    o.iter()
                        .map(|&i| name(i))
                        .collect::<Vec<_>>()
                        .join(",")
                };
                format!(
                    "double-periodic witness at {}: periods ({}, {}), lcm {}, orbits ({}) and ({}): h >= {:.6}",
                    name(*point),
                    periods.0,
                    periods.1,
                    lcm,
                    seq(orbit_a),
                    seq(orbit_b),
                    bound
                )
            }
            Certificate::CompleteSubset { subset, bound } => format!(
                "complete subset {{{}}} of size {}: h >= {:.6}",
                subset
                    .iter()
                    .map(|&i| name(i))
                    .collect::<Vec<_>>()
                    .join(","),
                subset.len(),
                bound
            ),
        }
    }
}

/// Search for a != b with {a,b} in F(a) and F(b); the first such pair in
/// lexicographic order.
pub fn detect_box(relation: &FiniteRelation) -> Option<Certificate> {
    let d = relation.len();
    for a in 0..d {
        if !relation.contains(a, a) {
            continue;
        }
        for b in (a + 1)..d {
            if relation.contains(b, b) && relation.contains(a, b) && relation.contains(b, a) {
                return Some(Certificate::Box { a, b, bound: LN_2 });
            }
        }
    }
    None
}

/// Boolean reachability tables: `powers[m]` holds A^(m+1), so `reach(len, i, j)`
/// answers "is there a walk of exactly `len` steps from i to j".
struct Reach {
    powers: Vec<Vec<Vec<bool>>>,
}

impl Reach {
    fn new(relation: &FiniteRelation, max_len: usize) -> Self {
        let d = relation.len();
        let adj = relation.adjacency();
        let mut powers: Vec<Vec<Vec<bool>>> = Vec::with_capacity(max_len);
        powers.push(adj.to_vec());
        for m in 1..max_len {
            let prev = &powers[m - 1];
            let mut next = vec![vec![false; d]; d];
            for i in 0..d {
                for k in 0..d {
                    if prev[i][k] {
                        for (j, cell) in next[i].iter_mut().enumerate() {
                            *cell |= adj[k][j];
                        }
                    }
                }
            }
            powers.push(next);
        }
        Reach { powers }
    }

    /// Is there a walk of exactly `len >= 1` steps from i to j?
    fn reach(&self, len: usize, i: usize, j: usize) -> bool {
        self.powers[len - 1][i][j]
    }
}

/// Least period of the periodic sequence obtained by repeating a closed walk.
fn least_period(walk: &[usize]) -> usize {
    let m = walk.len();
    'outer: for q in 1..m {
        if m % q != 0 {
            continue;
        }
        for i in 0..m {
            if walk[i] != walk[(i + q) % m] {
                continue 'outer;
            }
        }
        return q;
    }
    m
}

/// Enumerate closed walks of length `m` from `p` in lexicographic order,
/// keeping only those whose least period is exactly `m`, stopping after
/// `want` hits or when the expansion budget runs out. Returns (walks, budget
/// was exhausted).
fn closed_walks_least_period(
    relation: &FiniteRelation,
    reach: &Reach,
    p: usize,
    m: usize,
    want: usize,
    budget: &mut u64,
) -> (Vec<Vec<usize>>, bool) {
    let mut out = Vec::new();
    if m == 1 {
        if relation.contains(p, p) {
            out.push(vec![p]);
        }
        return (out, false);
    }
    let succ = relation.successor_lists();
    let mut walk = vec![p];
    let mut iters = vec![succ[p].clone().into_iter()];
    let mut truncated = false;
    while let Some(it) = iters.last_mut() {
        if out.len() >= want {
            break;
        }
        match it.next() {
            None => {
                iters.pop();
                walk.pop();
            }
            Some(y) => {
                if *budget == 0 {
                    truncated = true;
                    break;
                }
                *budget -= 1;
                // placing y at position t = walk.len() leaves exactly
                // m - t steps from y back to p (the closing edge included)
                let rem = m - walk.len();
                if !reach.reach(rem, y, p) {
                    continue;
                }
                walk.push(y);
                if walk.len() == m {
                    if least_period(&walk) == m {
                        out.push(walk.clone());
                    }
                    walk.pop();
                } else {
                    iters.push(succ[y].clone().into_iter());
                }
            }
        }
    }
    (out, truncated)
}

/// Search for a point lying on two distinct periodic orbits (distinct as
/// periodic sequences) with cycle lengths up to `max_len`; among all
/// witnesses the one minimizing l = lcm of the two least periods wins.
pub fn detect_double_periodic(relation: &FiniteRelation, max_len: usize) -> Option<Certificate> {
    let max_len = max_len.max(1);
    let reach = Reach::new(relation, max_len);
    let d = relation.len();
    let mut best: Option<Certificate> = None;
    let mut best_l = usize::MAX;
    for p in 0..d {
        // walks[m] = up to two lex-first closed walks of least period m at p
        let mut walks: Vec<(usize, Vec<Vec<usize>>)> = Vec::new();
        for m in 1..=max_len {
            if !reach.reach(m, p, p) {
                continue;
            }
            let mut budget = 200_000u64;
            let (found, _truncated) =
                closed_walks_least_period(relation, &reach, p, m, 2, &mut budget);
            if !found.is_empty() {
                walks.push((m, found));
            }
        }
        // two distinct orbits at the same least period
        for (m, found) in &walks {
            if found.len() >= 2 && *m < best_l {
                best_l = *m;
                best = Some(Certificate::DoublePeriodic {
                    point: p,
                    periods: (*m, *m),
                    lcm: *m,
                    orbit_a: found[0].clone(),
                    orbit_b: found[1].clone(),
                    bound: LN_2 / *m as f64,
                });
            }
        }
        // orbits with different least periods
        for (ia, (m1, f1)) in walks.iter().enumerate() {
            for (m2, f2) in walks.iter().skip(ia + 1) {
                let l = m1.lcm(m2);
                if l < best_l {
                    best_l = l;
                    best = Some(Certificate::DoublePeriodic {
                        point: p,
                        periods: (*m1, *m2),
                        lcm: l,
                        orbit_a: f1[0].clone(),
                        orbit_b: f2[0].clone(),
                        bound: LN_2 / l as f64,
                    });
                }
            }
        }
    }
    best
}

/// Largest subset A with A contained in F(a) for every a in A: a maximum
/// clique (loops required) in the mutual-edge graph.
pub fn detect_complete_subset(relation: &FiniteRelation) -> Option<Certificate> {
    let d = relation.len();
    let candidates: Vec<usize> = (0..d).filter(|&v| relation.contains(v, v)).collect();
    if candidates.is_empty() {
        return None;
    }
    let m = candidates.len();
    // clique in the mutual graph = independent set in its complement
    let mut comp = vec![vec![false; m]; m];
    for a in 0..m {
        for b in 0..m {
            if a != b {
                let (u, v) = (candidates[a], candidates[b]);
                let mutual = relation.contains(u, v) && relation.contains(v, u);
                comp[a][b] = !mutual;
            }
        }
    }
    let (mis, _complete) = max_independent_set_bool(&comp, 5_000_000);
    let mut subset: Vec<usize> = mis.into_iter().map(|i| candidates[i]).collect();
    subset.sort_unstable();
    let bound = (subset.len() as f64).ln();
    Some(Certificate::CompleteSubset { subset, bound })
}

/// One detector pass in fixed order (cheapest first).
pub fn run_all(relation: &FiniteRelation, max_cycle_len: usize) -> Vec<(String, Option<Certificate>)> {
    vec![
        ("box".to_string(), detect_box(relation)),
        (
            "double-periodic".to_string(),
            detect_double_periodic(relation, max_cycle_len),
        ),
        (
            "complete-subset".to_string(),
            detect_complete_subset(relation),
        ),
    ]
}

/// A rotation class of periodic orbits: `representative` is the
/// lexicographically least rotation; the class contains `len` distinct
/// periodic sequences (one per phase).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CycleClass {
    pub len: usize,
    pub representative: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct CycleCensus {
    pub classes: Vec<CycleClass>,
    pub truncated: bool,
}

fn canonical_rotation(walk: &[usize]) -> Vec<usize> {
    let m = walk.len();
    (0..m)
        .map(|s| {
            let mut r = Vec::with_capacity(m);
            for i in 0..m {
                r.push(walk[(s + i) % m]);
            }
            r
        })
        .min()
        .unwrap()
}

/// Enumerate all periodic orbits of least period at most `max_len`, grouped
/// into rotation classes. `budget` bounds total DFS expansions; when it runs
/// out the census is flagged truncated.
pub fn cycle_census(relation: &FiniteRelation, max_len: usize, budget: u64) -> CycleCensus {
    let max_len = max_len.max(1);
    let reach = Reach::new(relation, max_len);
    let succ = relation.successor_lists();
    let d = relation.len();
    let mut classes: BTreeSet<CycleClass> = BTreeSet::new();
    let mut remaining = budget;
    let mut truncated = false;

    // iterative DFS over closed walks from each start
    for m in 1..=max_len {
        for p in 0..d {
            if !reach.reach(m, p, p) {
                continue;
            }
            if m == 1 {
                classes.insert(CycleClass {
                    len: 1,
                    representative: vec![p],
                });
                continue;
            }
            let mut walk = vec![p];
            let mut iters: Vec<std::vec::IntoIter<usize>> = vec![succ[p].clone().into_iter()];
            while let Some(it) = iters.last_mut() {
                match it.next() {
                    None => {
                        iters.pop();
                        walk.pop();
                    }
                    Some(y) => {
                        if remaining == 0 {
                            truncated = true;
                            break;
                        }
                        remaining -= 1;
                        let rem = m - walk.len();
                        if !reach.reach(rem, y, p) {
                            continue;
                        }
                        walk.push(y);
                        if walk.len() == m {
                            if least_period(&walk) == m {
                                classes.insert(CycleClass {
                                    len: m,
                                    representative: canonical_rotation(&walk),
                                });
                            }
                            walk.pop();
                        } else {
                            iters.push(succ[y].clone().into_iter());
                        }
                    }
                }
            }
            if truncated {
                break;
            }
        }
        if truncated {
            break;
        }
    }
    let mut classes: Vec<CycleClass> = classes.into_iter().collect();
    classes.sort();
    CycleCensus { classes, truncated }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::fixtures::{fibonacci, full_two, period_three};
    use crate::relation::FiniteRelation;

    #[test]
    fn box_detector_examples() {
        // full relation on {0,1}: witness (0,1), bound log 2
        let g = full_two();
        match detect_box(&g) {
            Some(Certificate::Box { a, b, bound }) => {
                assert_eq!((a, b), (0, 1));
                assert!((bound - LN_2).abs() < 1e-15);
            }
            other => panic!("expected box, got {other:?}"),
        }
        // identity: none
        let id = FiniteRelation::identity(g.space().clone());
        assert!(detect_box(&id).is_none());
        // fibonacci: 0 has no loop -> none
        assert!(detect_box(&fibonacci()).is_none());
    }

    #[test]
    fn double_periodic_on_fibonacci() {
        let f = fibonacci();
        match detect_double_periodic(&f, 12) {
            Some(Certificate::DoublePeriodic {
                point,
                periods,
                lcm,
                bound,
                ..
            }) => {
                assert_eq!(point, 1);
                assert_eq!(periods, (1, 2));
                assert_eq!(lcm, 2);
                assert!((bound - LN_2 / 2.0).abs() < 1e-15);
            }
            other => panic!("expected double-periodic, got {other:?}"),
        }
    }

    #[test]
    fn double_periodic_absent_on_period_three_and_identity() {
        // Example 6.8 encoding: the fixed point at 0 and the 3-cycle share no
        // point, so no point carries two distinct periodic orbits.
        assert!(detect_double_periodic(&period_three(), 12).is_none());
        let id = FiniteRelation::identity(full_two().space().clone());
        assert!(detect_double_periodic(&id, 12).is_none());
    }

    #[test]
    fn census_of_period_three_example() {
        let f = period_three();
        let census = cycle_census(&f, 12, 1_000_000);
        assert!(!census.truncated);
        assert_eq!(census.classes.len(), 2);
        assert_eq!(census.classes[0], CycleClass { len: 1, representative: vec![0] });
        assert_eq!(
            census.classes[1],
            CycleClass {
                len: 3,
                representative: vec![1, 2, 3]
            }
        );
    }

    #[test]
    fn complete_subset_examples() {
        // full relation on m points: the whole space, bound log m
        let g = full_two();
        match detect_complete_subset(&g) {
            Some(Certificate::CompleteSubset { subset, bound }) => {
                assert_eq!(subset, vec![0, 1]);
                assert!((bound - LN_2).abs() < 1e-15);
            }
            other => panic!("expected complete subset, got {other:?}"),
        }
        // fibonacci: {0,1} is not inside F(0), so A = {1}, bound 0
        match detect_complete_subset(&fibonacci()) {
            Some(Certificate::CompleteSubset { subset, bound }) => {
                assert_eq!(subset, vec![1]);
                assert_eq!(bound, 0.0);
            }
            other => panic!("expected complete subset, got {other:?}"),
        }
        // identity: any singleton, bound 0
        let id = FiniteRelation::identity(g.space().clone());
        match detect_complete_subset(&id) {
            Some(Certificate::CompleteSubset { subset, bound }) => {
                assert_eq!(subset.len(), 1);
                assert_eq!(bound, 0.0);
            }
            other => panic!("expected complete subset, got {other:?}"),
        }
    }
}
