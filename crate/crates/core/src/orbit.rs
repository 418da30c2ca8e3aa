//! Construction and counting of n-orbit spaces, the product metrics D and
//! rho, and coordinate projections.
//!
//! An n-orbit is a sequence (x_0, ..., x_{n-1}) with x_{i+1} in F(x_i).
//! Enumeration is explicit and lexicographic up to a configurable cap;
//! counting always works through big-integer transfer-matrix powers.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::relation::FiniteRelation;
use crate::space::MetricPointSet;

/// Default cap on explicitly stored orbits.
pub const DEFAULT_ENUM_CAP: u64 = 10_000_000;

/// The set of n-orbits of a relation, either stored explicitly or summarized
/// by its transfer-matrix count.
#[derive(Debug, Clone, PartialEq)]
pub enum OrbitBlock {
    Explicit { n: usize, orbits: Vec<Vec<usize>> },
    Counted { n: usize, total: BigUint },
}

impl OrbitBlock {
    pub fn n(&self) -> usize {
        match self {
            OrbitBlock::Explicit { n, .. } | OrbitBlock::Counted { n, .. } => *n,
        }
    }

    pub fn count(&self) -> BigUint {
        match self {
            OrbitBlock::Explicit { orbits, .. } => BigUint::from(orbits.len()),
            OrbitBlock::Counted { total, .. } => total.clone(),
        }
    }
}

/// A finite truncation of an infinite forward orbit; `entries` has length
/// depth + 1.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedForwardOrbit {
    entries: Vec<usize>,
}

impl TruncatedForwardOrbit {
    pub fn new(relation: &FiniteRelation, entries: Vec<usize>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptySet);
        }
        for w in entries.windows(2) {
            if !relation.contains(w[0], w[1]) {
                return Err(Error::BadSpec(format!(
                    "step {} -> {} is not in the relation",
                    relation.space().label(w[0]),
                    relation.space().label(w[1])
                )));
            }
        }
        Ok(TruncatedForwardOrbit { entries })
    }

    pub fn depth(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }
}

/// Exact number of n-orbits with x_0 in `start` (all points when `None`),
/// via v <- A v on big integers.
pub fn count_orbits(
    relation: &FiniteRelation,
    n: usize,
    start: Option<&[usize]>,
) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::BadSpec("orbit length must be at least 1".into()));
    }
    let succ = relation.successor_lists();
    let d = relation.len();
    // v[i] = number of (remaining+1)-orbits starting at i
    let mut v = vec![BigUint::one(); d];
    for _ in 1..n {
        let mut next = vec![BigUint::zero(); d];
        for i in 0..d {
            let mut acc = BigUint::zero();
            for &j in &succ[i] {
                acc += &v[j];
            }
            next[i] = acc;
        }
        v = next;
    }
    let total = match start {
        None => v.iter().sum(),
        Some(set) => {
            for &i in set {
                if i >= d {
                    return Err(Error::IndexOutOfRange(i, d));
                }
            }
            set.iter().map(|&i| &v[i]).sum()
        }
    };
    Ok(total)
}

/// Per-point orbit counts: entry i is the number of n-orbits starting at i.
pub fn count_orbits_per_start(relation: &FiniteRelation, n: usize) -> Vec<BigUint> {
    let succ = relation.successor_lists();
    let d = relation.len();
    let mut v = vec![BigUint::one(); d];
    for _ in 1..n {
        let mut next = vec![BigUint::zero(); d];
        for i in 0..d {
            let mut acc = BigUint::zero();
            for &j in &succ[i] {
                acc += &v[j];
            }
            next[i] = acc;
        }
        v = next;
    }
    v
}

/// All n-orbits with x_0 in `start`, in lexicographic order by point index.
/// Refuses (with the exact count attached) when more than `cap` orbits exist.
pub fn enumerate_orbits(
    relation: &FiniteRelation,
    n: usize,
    start: Option<&[usize]>,
    cap: u64,
) -> Result<OrbitBlock> {
    let total = count_orbits(relation, n, start)?;
    if total > BigUint::from(cap) {
        return Err(Error::CapExceeded { cap, count: total });
    }
    let succ = relation.successor_lists();
    let starts: Vec<usize> = match start {
        None => (0..relation.len()).collect(),
        Some(set) => {
            let mut s = set.to_vec();
            s.sort_unstable();
            s.dedup();
            s
        }
    };
    let expected = total.to_usize().expect("count fits after cap check");
    let mut orbits = Vec::with_capacity(expected);
    let mut stack: Vec<usize> = Vec::with_capacity(n);
    for &s in &starts {
        stack.push(s);
        extend(&succ, n, &mut stack, &mut orbits);
        stack.pop();
    }
    debug_assert_eq!(orbits.len(), expected);
    Ok(OrbitBlock::Explicit { n, orbits })
}

fn extend(succ: &[Vec<usize>], n: usize, stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if stack.len() == n {
        out.push(stack.clone());
        return;
    }
    let last = *stack.last().unwrap();
    for &j in &succ[last] {
        stack.push(j);
        extend(succ, n, stack, out);
        stack.pop();
    }
}

/// D(x, y) = max over coordinates of d(x_i, y_i).
pub fn orbit_distance_d(space: &MetricPointSet, u: &[usize], v: &[usize]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch(u.len(), v.len()));
    }
    Ok(u.iter()
        .zip(v)
        .map(|(&a, &b)| space.dist(a, b))
        .fold(0.0, f64::max))
}

/// rho distance between equal-depth truncations, with the truncation error
/// bound 1/(depth + 2) attached: the true sup over infinite extensions is
/// within that bound of the reported value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoDistance {
    pub value: f64,
    pub truncation_error: f64,
}

/// rho(x, y) = sup over i of d(x_i, y_i) / (i + 1), evaluated on the stored
/// depth.
pub fn orbit_distance_rho(
    space: &MetricPointSet,
    u: &TruncatedForwardOrbit,
    v: &TruncatedForwardOrbit,
) -> Result<RhoDistance> {
    if u.depth() != v.depth() {
        return Err(Error::DepthMismatch(u.depth(), v.depth()));
    }
    let value = u
        .entries()
        .iter()
        .zip(v.entries())
        .enumerate()
        .map(|(i, (&a, &b))| space.dist(a, b) / (i as f64 + 1.0))
        .fold(0.0, f64::max);
    Ok(RhoDistance {
        value,
        truncation_error: 1.0 / (u.depth() as f64 + 2.0),
    })
}

/// Coordinatewise projection of an explicit block onto `indices`; duplicates
/// are preserved unless `dedup` is set.
pub fn project(block: &OrbitBlock, indices: &[usize], dedup: bool) -> Result<Vec<Vec<usize>>> {
    if indices.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    let (n, orbits) = match block {
        OrbitBlock::Explicit { n, orbits } => (*n, orbits),
        OrbitBlock::Counted { .. } => {
            return Err(Error::BadSpec(
                "cannot project a counted orbit block".into(),
            ))
        }
    };
    for &i in indices {
        if i >= n {
            return Err(Error::IndexOutOfRange(i, n));
        }
    }
    let mut out: Vec<Vec<usize>> = orbits
        .iter()
        .map(|o| indices.iter().map(|&i| o[i]).collect())
        .collect();
    if dedup {
        out.sort();
        out.dedup();
    }
    Ok(out)
}
