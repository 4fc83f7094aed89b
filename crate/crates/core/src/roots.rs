//! Positive roots of a Dynkin quiver and their admissible ordering.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::quiver::{tits_form, DimVector, Quiver};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("precedence constraints between roots contain a cycle")]
    CyclicConstraints,
    #[error("NoUnitCoordinate: root {0} has no coordinate equal to 1")]
    NoUnitCoordinate(DimVector),
    #[error("hom/ext tables are {found}x{found}, expected {expected}x{expected}")]
    TableShape { expected: usize, found: usize },
}

/// A positive root `beta = sum_i d^i alpha_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PositiveRoot {
    pub dim: DimVector,
    /// Position in the admissible order (0-based).
    pub index: usize,
}

/// Positive roots listed in an admissible order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootOrder {
    roots: Vec<PositiveRoot>,
}

impl RootOrder {
    pub fn new(dims: Vec<DimVector>) -> Self {
        RootOrder {
            roots: dims
                .into_iter()
                .enumerate()
                .map(|(index, dim)| PositiveRoot { dim, index })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn get(&self, u: usize) -> &PositiveRoot {
        &self.roots[u]
    }

    pub fn iter(&self) -> impl Iterator<Item = &PositiveRoot> {
        self.roots.iter()
    }

    pub fn dims(&self) -> Vec<DimVector> {
        self.roots.iter().map(|r| r.dim.clone()).collect()
    }
}

/// All `d != 0` with `chi(d, d) = 1`, sorted lexicographically.
///
/// Searches the box `[0, max_mark]^n`, which contains every positive root.
pub fn positive_roots(q: &Quiver) -> Vec<DimVector> {
    let n = q.vertex_count();
    let bound = q.dynkin_type().max_mark();
    let mut out = Vec::new();
    let mut d = vec![0u32; n];
    loop {
        // odometer increment, last coordinate fastest
        let mut k = n;
        loop {
            if k == 0 {
                out.sort();
                return out;
            }
            k -= 1;
            if d[k] < bound {
                d[k] += 1;
                break;
            }
            d[k] = 0;
        }
        let v = DimVector(d.clone());
        if tits_form(q, &v) == 1 {
            out.push(v);
        }
    }
}

/// Orders `roots` so that `u < v` implies `hom[u][v] == 0` and
/// `ext[v][u] == 0`. Among valid orders the one with lexicographically
/// smallest sequence of dimension vectors is returned, as a permutation of
/// indices into `roots`.
pub fn admissible_root_order(
    roots: &[DimVector],
    hom: &[Vec<u32>],
    ext: &[Vec<u32>],
) -> Result<Vec<usize>, RootError> {
    let n = roots.len();
    for t in [hom, ext] {
        if t.len() != n || t.iter().any(|r| r.len() != n) {
            return Err(RootError::TableShape {
                expected: n,
                found: t.len(),
            });
        }
    }
    // before[x] lists the roots that must precede x
    let mut indegree = vec![0usize; n];
    let mut succ = vec![Vec::new(); n];
    for x in 0..n {
        for y in 0..n {
            if x != y && (hom[x][y] != 0 || ext[y][x] != 0) {
                // x may not precede y
                succ[y].push(x);
                indegree[x] += 1;
            }
        }
    }
    let mut ready: BinaryHeap<Reverse<(&DimVector, usize)>> = (0..n)
        .filter(|&x| indegree[x] == 0)
        .map(|x| Reverse((&roots[x], x)))
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse((_, x))) = ready.pop() {
        order.push(x);
        for &y in &succ[x] {
            indegree[y] -= 1;
            if indegree[y] == 0 {
                ready.push(Reverse((&roots[y], y)));
            }
        }
    }
    if order.len() != n {
        return Err(RootError::CyclicConstraints);
    }
    Ok(order)
}

/// Smallest vertex `i` with `d^i = 1`.
pub fn choose_i(beta: &DimVector) -> Result<usize, RootError> {
    beta.entries()
        .iter()
        .position(|&x| x == 1)
        .ok_or_else(|| RootError::NoUnitCoordinate(beta.clone()))
}
