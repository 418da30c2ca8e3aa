//! Set-valued functions on a finite metric space, stored as a boolean
//! adjacency matrix over the space's points. The graph of such a relation is
//! finite, hence closed, so upper semi-continuity holds by construction.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::space::MetricPointSet;

/// A set-valued function F on a finite metric space: `adj[i][j]` iff point j
/// is in F(point i). Every row is non-empty (images are non-empty compact
/// sets). Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteRelation {
    space: Arc<MetricPointSet>,
    adj: Vec<Vec<bool>>,
}

impl FiniteRelation {
    pub fn new(space: Arc<MetricPointSet>, adj: Vec<Vec<bool>>) -> Result<Self> {
        let n = space.len();
        if adj.len() != n || adj.iter().any(|r| r.len() != n) {
            return Err(Error::BadSpec(format!("adjacency must be {n}x{n}")));
        }
        for (i, row) in adj.iter().enumerate() {
            if !row.iter().any(|&b| b) {
                return Err(Error::EmptyImage(space.label(i).to_string()));
            }
        }
        Ok(FiniteRelation { space, adj })
    }

    /// Build from successor lists indexed by point.
    pub fn from_successors(space: Arc<MetricPointSet>, succ: &[Vec<usize>]) -> Result<Self> {
        let n = space.len();
        let mut adj = vec![vec![false; n]; n];
        for (i, row) in succ.iter().enumerate() {
            for &j in row {
                if j >= n {
                    return Err(Error::IndexOutOfRange(j, n));
                }
                adj[i][j] = true;
            }
        }
        Self::new(space, adj)
    }

    /// The identity relation F(x) = {x}.
    pub fn identity(space: Arc<MetricPointSet>) -> Self {
        let n = space.len();
        let mut adj = vec![vec![false; n]; n];
        for (i, row) in adj.iter_mut().enumerate() {
            row[i] = true;
        }
        FiniteRelation { space, adj }
    }

    /// The full relation F(x) = X.
    pub fn full(space: Arc<MetricPointSet>) -> Self {
        let n = space.len();
        FiniteRelation {
            space,
            adj: vec![vec![true; n]; n],
        }
    }

    pub fn space(&self) -> &Arc<MetricPointSet> {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    #[inline]
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.adj[i][j]
    }

    pub fn adjacency(&self) -> &[Vec<bool>] {
        &self.adj
    }

    /// Successor indices of point i, ascending.
    pub fn successors(&self, i: usize) -> Vec<usize> {
        self.adj[i]
            .iter()
            .enumerate()
            .filter_map(|(j, &b)| b.then_some(j))
            .collect()
    }

    /// All successor lists at once (ascending within each row).
    pub fn successor_lists(&self) -> Vec<Vec<usize>> {
        (0..self.len()).map(|i| self.successors(i)).collect()
    }

    /// F(x) for a labelled point: the vertical slice of the graph at x.
    pub fn evaluate(&self, label: &str) -> Result<Vec<String>> {
        let i = self.space.index_of(label)?;
        Ok(self
            .successors(i)
            .into_iter()
            .map(|j| self.space.label(j).to_string())
            .collect())
    }

    fn check_same_space(&self, other: &FiniteRelation) -> Result<()> {
        if Arc::ptr_eq(&self.space, &other.space) || self.space == other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(
                "relations live on different spaces".into(),
            ))
        }
    }

    /// G∘F where `self` is G: (G∘F)(x) = union of G(y) over y in F(x).
    pub fn compose(&self, f: &FiniteRelation) -> Result<FiniteRelation> {
        self.check_same_space(f)?;
        let n = self.len();
        let mut adj = vec![vec![false; n]; n];
        for i in 0..n {
            for y in 0..n {
                if f.adj[i][y] {
                    for (j, cell) in adj[i].iter_mut().enumerate() {
                        *cell |= self.adj[y][j];
                    }
                }
            }
        }
        Ok(FiniteRelation {
            space: self.space.clone(),
            adj,
        })
    }

    /// F^k, with F^0 the identity.
    pub fn iterate(&self, k: usize) -> FiniteRelation {
        let mut acc = FiniteRelation::identity(self.space.clone());
        for _ in 0..k {
            acc = self.compose(&acc).expect("same space by construction");
        }
        acc
    }

    /// Returns whether every point has a preimage.
    pub fn is_surjective(&self) -> bool {
        (0..self.len()).all(|j| (0..self.len()).any(|i| self.adj[i][j]))
    }

    /// F^{-1}: x in F^{-1}(y) iff y in F(x). Requires surjectivity so rows of
    /// the transpose stay non-empty.
    pub fn inverse(&self) -> Result<FiniteRelation> {
        let n = self.len();
        for j in 0..n {
            if !(0..n).any(|i| self.adj[i][j]) {
                return Err(Error::NotSurjective(self.space.label(j).to_string()));
            }
        }
        let mut adj = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                adj[j][i] = self.adj[i][j];
            }
        }
        Ok(FiniteRelation {
            space: self.space.clone(),
            adj,
        })
    }

    /// Image of a point set under F.
    pub fn image(&self, set: &[usize]) -> Vec<usize> {
        let n = self.len();
        let mut out = vec![false; n];
        for &i in set {
            for (j, cell) in out.iter_mut().enumerate() {
                *cell |= self.adj[i][j];
            }
        }
        (0..n).filter(|&j| out[j]).collect()
    }

    /// The surjective core C = intersection of F^n(X) over n, computed as the
    /// fixpoint of the boolean image map, together with F restricted to C.
    /// The restriction is surjective onto C and satisfies F(C) = C.
    pub fn surjective_core(&self) -> (FiniteRelation, Vec<usize>) {
        let mut current: Vec<usize> = (0..self.len()).collect();
        loop {
            let next = self.image(&current);
            if next == current {
                break;
            }
            current = next;
        }
        let core = current;
        let sub_space = Arc::new(
            self.space
                .subspace(&core)
                .expect("core is non-empty for non-empty X"),
        );
        let m = core.len();
        let mut adj = vec![vec![false; m]; m];
        for (a, &i) in core.iter().enumerate() {
            for (b, &j) in core.iter().enumerate() {
                adj[a][b] = self.adj[i][j];
            }
        }
        (
            FiniteRelation {
                space: sub_space,
                adj,
            },
            core,
        )
    }

    /// Graph inclusion: every edge of `self` is an edge of `other`.
    pub fn subgraph_of(&self, other: &FiniteRelation) -> bool {
        self.adj
            .iter()
            .zip(&other.adj)
            .all(|(a, b)| a.iter().zip(b).all(|(&x, &y)| !x || y))
    }
}
