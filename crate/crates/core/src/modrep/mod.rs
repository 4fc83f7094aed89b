//! Quiver representations: indecomposables, Hom and Ext dimensions, orbits.

mod context;
mod reflection;

pub use context::QuiverContext;
pub use reflection::indecomposable;

use std::fmt;

use num_rational::BigRational;
use thiserror::Error;

use crate::linalg::{Matrix, SystemBuilder};
use crate::quiver::{euler_form, DimVector, Quiver, QuiverError};
use crate::roots::RootError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("could not construct an indecomposable for {0}: {1}")]
    ConstructionFailed(DimVector, String),
    #[error("representations live on different quivers or have malformed maps")]
    ShapeMismatch,
    #[error("negative Ext dimension {0} (internal inconsistency)")]
    NegativeExt(i64),
    #[error("{0} is not a positive root")]
    NotARoot(DimVector),
    #[error("module type has {found} entries, expected {expected}")]
    ModuleTypeLength { expected: usize, found: usize },
    #[error("codimension formulas disagree: via Ext {via_ext}, via Euler form {via_chi}")]
    CodimMismatch { via_ext: i64, via_chi: i64 },
}

/// Vector spaces `C^{dims(i)}` with one matrix `dims(h) x dims(t)` per arrow,
/// arrows indexed as in [`Quiver::edges`].
#[derive(Clone, PartialEq, Eq)]
pub struct Representation {
    pub dims: DimVector,
    pub maps: Vec<Matrix>,
}

impl Representation {
    pub fn zero(q: &Quiver) -> Self {
        Representation {
            dims: DimVector::zero(q.vertex_count()),
            maps: q.edges().iter().map(|_| Matrix::zeros(0, 0)).collect(),
        }
    }

    pub fn simple(q: &Quiver, i: usize) -> Self {
        Representation {
            dims: DimVector::unit(q.vertex_count(), i),
            maps: q
                .edges()
                .iter()
                .map(|&(t, h)| Matrix::zeros((h == i) as usize, (t == i) as usize))
                .collect(),
        }
    }

    pub fn check_shape(&self, q: &Quiver) -> Result<(), RepError> {
        if self.dims.len() != q.vertex_count() || self.maps.len() != q.edges().len() {
            return Err(RepError::ShapeMismatch);
        }
        for (m, &(t, h)) in self.maps.iter().zip(q.edges()) {
            if m.rows() != self.dims[h] as usize || m.cols() != self.dims[t] as usize {
                return Err(RepError::ShapeMismatch);
            }
        }
        Ok(())
    }

    /// Block-diagonal direct sum, blocks in argument order.
    pub fn direct_sum(q: &Quiver, parts: &[&Representation]) -> Representation {
        let n = q.vertex_count();
        let mut dims = vec![0u32; n];
        for p in parts {
            for (i, d) in dims.iter_mut().enumerate() {
                *d += p.dims[i];
            }
        }
        let mut maps: Vec<Matrix> = q
            .edges()
            .iter()
            .map(|&(t, h)| Matrix::zeros(dims[h] as usize, dims[t] as usize))
            .collect();
        let mut offset = vec![0usize; n];
        for p in parts {
            for (a, &(t, h)) in q.edges().iter().enumerate() {
                maps[a].set_block(offset[h], offset[t], &p.maps[a]);
            }
            for (i, o) in offset.iter_mut().enumerate() {
                *o += p.dims[i] as usize;
            }
        }
        Representation {
            dims: DimVector(dims),
            maps,
        }
    }
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rep{} {:?}", self.dims, self.maps)
    }
}

/// Multiplicities `m_u` over the admissibly ordered positive roots.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub struct ModuleType(pub Vec<u32>);

impl ModuleType {
    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn square_sum(&self) -> u64 {
        self.0.iter().map(|&x| x as u64 * x as u64).sum()
    }

    pub fn parse(s: &str) -> Result<ModuleType, String> {
        DimVector::parse(s).map(|d| ModuleType(d.0))
    }
}

impl fmt::Display for ModuleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        DimVector(self.0.clone()).fmt(f)
    }
}

/// Unknowns `phi_i` (a `dims_n(i) x dims_m(i)` matrix per vertex) laid out
/// consecutively; returns the offsets.
fn vertex_offsets(m: &DimVector, n: &DimVector) -> (Vec<usize>, usize) {
    let mut offsets = Vec::with_capacity(m.len());
    let mut total = 0;
    for i in 0..m.len() {
        offsets.push(total);
        total += m[i] as usize * n[i] as usize;
    }
    (offsets, total)
}

/// The map `delta: (phi_i)_i -> (phi_h M_a - N_a phi_t)_a` whose kernel is
/// `Hom(M, N)` and whose cokernel is `Ext(M, N)`.
fn intertwiner_system(q: &Quiver, m: &Representation, n: &Representation) -> Matrix {
    let (off, unknowns) = vertex_offsets(&m.dims, &n.dims);
    let var = |i: usize, r: usize, c: usize| off[i] + r * m.dims[i] as usize + c;
    let mut sys = SystemBuilder::new(unknowns);
    for (a, &(t, h)) in q.edges().iter().enumerate() {
        let (ma, na) = (&m.maps[a], &n.maps[a]);
        for r in 0..n.dims[h] as usize {
            for c in 0..m.dims[t] as usize {
                let mut row: Vec<(usize, BigRational)> = Vec::new();
                for k in 0..m.dims[h] as usize {
                    row.push((var(h, r, k), ma[(k, c)].clone()));
                }
                for k in 0..n.dims[t] as usize {
                    row.push((var(t, k, c), -na[(r, k)].clone()));
                }
                sys.push(row);
            }
        }
    }
    sys.into_matrix()
}

/// `dim Hom(M, N)`: nullity of the intertwiner equations.
pub fn hom_dim(q: &Quiver, m: &Representation, n: &Representation) -> Result<u32, RepError> {
    m.check_shape(q)?;
    n.check_shape(q)?;
    let sys = intertwiner_system(q, m, n);
    Ok((sys.cols() - sys.rank()) as u32)
}

/// `dim Ext(M, N) = dim Hom(M, N) - chi(M, N)`.
pub fn ext_dim(q: &Quiver, m: &Representation, n: &Representation) -> Result<u32, RepError> {
    let hom = hom_dim(q, m, n)? as i64;
    let chi = euler_form(q, &m.dims, &n.dims)?;
    let ext = hom - chi;
    if ext < 0 {
        return Err(RepError::NegativeExt(ext));
    }
    Ok(ext as u32)
}

/// `dim Ext(M, N)` as the cokernel dimension of the intertwiner map,
/// without reference to the Euler form.
pub fn ext_dim_direct(q: &Quiver, m: &Representation, n: &Representation) -> Result<u32, RepError> {
    m.check_shape(q)?;
    n.check_shape(q)?;
    let sys = intertwiner_system(q, m, n);
    let target: u64 = q
        .edges()
        .iter()
        .map(|&(t, h)| m.dims[t] as u64 * n.dims[h] as u64)
        .sum();
    Ok((target - sys.rank() as u64) as u32)
}

/// All `m` with `sum_u m_u beta_u = gamma`, in lexicographic order.
pub fn orbits_for(roots: &[DimVector], gamma: &DimVector) -> Vec<ModuleType> {
    fn go(
        roots: &[DimVector],
        u: usize,
        rest: &DimVector,
        cur: &mut Vec<u32>,
        out: &mut Vec<ModuleType>,
    ) {
        if u == roots.len() {
            if rest.is_zero() {
                out.push(ModuleType(cur.clone()));
            }
            return;
        }
        let mut rest = rest.clone();
        let mut k = 0;
        loop {
            cur.push(k);
            go(roots, u + 1, &rest, cur, out);
            cur.pop();
            match rest.checked_sub(&roots[u]) {
                Some(r) => rest = r,
                None => break,
            }
            k += 1;
        }
    }
    let mut out = Vec::new();
    go(roots, 0, gamma, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{validate_dynkin, RawQuiver};

    fn a2() -> Quiver {
        validate_dynkin(&RawQuiver {
            vertices: 2,
            edges: vec![[2, 1]],
        })
        .unwrap()
    }

    fn rep_i(q: &Quiver) -> Representation {
        let r = Representation {
            dims: DimVector(vec![1, 1]),
            maps: vec![Matrix::from_i64(1, 1, &[1])],
        };
        r.check_shape(q).unwrap();
        r
    }

    #[test]
    fn a2_hom_values() {
        let q = a2();
        let (s1, s2, i) = (Representation::simple(&q, 0), Representation::simple(&q, 1), rep_i(&q));
        assert_eq!(hom_dim(&q, &s1, &i).unwrap(), 1);
        assert_eq!(hom_dim(&q, &i, &s1).unwrap(), 0);
        assert_eq!(hom_dim(&q, &i, &s2).unwrap(), 1);
        assert_eq!(hom_dim(&q, &i, &i).unwrap(), 1);
        assert_eq!(ext_dim(&q, &s2, &s1).unwrap(), 1);
        assert_eq!(ext_dim(&q, &s1, &s2).unwrap(), 0);
        assert_eq!(ext_dim(&q, &i, &i).unwrap(), 0);
        assert_eq!(ext_dim_direct(&q, &s2, &s1).unwrap(), 1);
    }

    #[test]
    fn ext_of_sum_is_bilinear() {
        let q = a2();
        let (s1, s2, i) = (Representation::simple(&q, 0), Representation::simple(&q, 1), rep_i(&q));
        let parts = [&s1, &s2, &i, &s2];
        let sum = Representation::direct_sum(&q, &parts);
        let mut expect = 0;
        for a in parts {
            for b in parts {
                expect += ext_dim(&q, a, b).unwrap();
            }
        }
        assert_eq!(ext_dim(&q, &sum, &sum).unwrap(), expect);
        assert_eq!(ext_dim_direct(&q, &sum, &sum).unwrap(), expect);
    }

    #[test]
    fn shape_errors() {
        let q = a2();
        let bad = Representation {
            dims: DimVector(vec![1, 1]),
            maps: vec![Matrix::zeros(2, 1)],
        };
        assert_eq!(
            hom_dim(&q, &bad, &Representation::simple(&q, 0)),
            Err(RepError::ShapeMismatch)
        );
    }

    #[test]
    fn a2_orbits() {
        let roots = vec![
            DimVector(vec![0, 1]),
            DimVector(vec![1, 1]),
            DimVector(vec![1, 0]),
        ];
        let o = orbits_for(&roots, &DimVector(vec![1, 1]));
        assert_eq!(o, vec![ModuleType(vec![0, 1, 0]), ModuleType(vec![1, 0, 1])]);
        let o = orbits_for(&roots, &DimVector(vec![0, 0]));
        assert_eq!(o, vec![ModuleType(vec![0, 0, 0])]);
        let o = orbits_for(&roots, &DimVector(vec![2, 1]));
        assert_eq!(o, vec![ModuleType(vec![0, 1, 1]), ModuleType(vec![1, 0, 2])]);
    }
}
