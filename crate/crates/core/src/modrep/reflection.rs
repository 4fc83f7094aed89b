//! Indecomposables via reflection functors.
//!
//! Starting from `beta`, reflect at the sinks `1, 2, ..., n, 1, ...` (a sink
//! sequence for an admissibly numbered quiver) until the dimension vector is
//! simple, then undo the reflections on representations with the source
//! reflection functor.

use crate::linalg::Matrix;
use crate::quiver::{tits_form, DimVector, Quiver};

use super::{ext_dim, hom_dim, RepError, Representation};

/// Representation on an arbitrary orientation of the underlying tree; edge
/// indices match the quiver it came from.
struct OrientedRep {
    edges: Vec<(usize, usize)>,
    dims: Vec<usize>,
    maps: Vec<Matrix>,
}

impl OrientedRep {
    fn simple(edges: &[(usize, usize)], n: usize, i: usize) -> Self {
        let mut dims = vec![0; n];
        dims[i] = 1;
        OrientedRep {
            edges: edges.to_vec(),
            maps: edges
                .iter()
                .map(|&(t, h)| Matrix::zeros(dims[h], dims[t]))
                .collect(),
            dims,
        }
    }

    /// Reflection at a source `k`: replace `V_k` by the cokernel of
    /// `V_k -> (+)_{k -> j} V_j` and reverse the arrows at `k`.
    fn reflect_at_source(self, k: usize) -> Result<Self, String> {
        let out: Vec<usize> = (0..self.edges.len())
            .filter(|&a| self.edges[a].0 == k)
            .collect();
        if self.edges.iter().any(|&(_, h)| h == k) {
            return Err(format!("vertex {} is not a source", k + 1));
        }
        let total: usize = out.iter().map(|&a| self.dims[self.edges[a].1]).sum();
        let mut psi = Matrix::zeros(total, self.dims[k]);
        let mut offsets = Vec::with_capacity(out.len());
        let mut r = 0;
        for &a in &out {
            offsets.push(r);
            psi.set_block(r, 0, &self.maps[a]);
            r += self.dims[self.edges[a].1];
        }
        let coker = psi.left_nullspace();
        let OrientedRep {
            mut edges,
            mut dims,
            mut maps,
        } = self;
        let new_dim = coker.rows();
        for (&a, &o) in out.iter().zip(&offsets) {
            let j = edges[a].1;
            maps[a] = coker.block(0..new_dim, o..o + dims[j]);
            edges[a] = (j, k);
        }
        dims[k] = new_dim;
        Ok(OrientedRep { edges, dims, maps })
    }
}

/// Builds the indecomposable representation with dimension vector `beta` and
/// verifies `End = C`, `Ext^1 = 0` before returning it.
pub fn indecomposable(q: &Quiver, beta: &DimVector) -> Result<Representation, RepError> {
    let n = q.vertex_count();
    if beta.len() != n || beta.is_zero() || tits_form(q, beta) != 1 {
        return Err(RepError::NotARoot(beta.clone()));
    }
    let fail = |msg: String| RepError::ConstructionFailed(beta.clone(), msg);

    let mut edges = q.edges().to_vec();
    let mut dim: Vec<i64> = beta.entries().iter().map(|&x| x as i64).collect();
    let mut steps = Vec::new();
    let limit = 4 * n * q.dynkin_type().root_count() + 4;
    let simple_at = loop {
        if let Some(j) = unit_position(&dim) {
            break j;
        }
        if steps.len() > limit {
            return Err(fail("reflection sequence did not terminate".into()));
        }
        let k = steps.len() % n;
        if edges.iter().any(|&(t, _)| t == k) {
            return Err(fail(format!("vertex {} is not a sink", k + 1)));
        }
        let pairing: i64 = (0..n).map(|j| q.cartan(k, j) * dim[j]).sum();
        dim[k] -= pairing;
        if dim[k] < 0 {
            return Err(fail("reflection produced a negative root".into()));
        }
        edges = Quiver::reflected_edges(&edges, k);
        steps.push(k);
    };

    let mut rep = OrientedRep::simple(&edges, n, simple_at);
    for &k in steps.iter().rev() {
        rep = rep.reflect_at_source(k).map_err(fail)?;
    }
    if rep.edges != q.edges() {
        return Err(fail("orientation did not return to the original".into()));
    }
    let out = Representation {
        dims: DimVector(rep.dims.iter().map(|&d| d as u32).collect()),
        maps: rep.maps,
    };
    if &out.dims != beta {
        return Err(fail(format!("built dimension vector {}", out.dims)));
    }
    out.check_shape(q).map_err(|e| fail(e.to_string()))?;
    let end = hom_dim(q, &out, &out)?;
    let ext = ext_dim(q, &out, &out)?;
    if end != 1 || ext != 0 {
        return Err(fail(format!("dim End = {end}, dim Ext = {ext}")));
    }
    Ok(out)
}

fn unit_position(dim: &[i64]) -> Option<usize> {
    let mut pos = None;
    for (i, &x) in dim.iter().enumerate() {
        match x {
            0 => {}
            1 if pos.is_none() => pos = Some(i),
            _ => return None,
        }
    }
    pos
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modrep::ext_dim_direct;
    use crate::quiver::{validate_dynkin, RawQuiver};
    use crate::roots::positive_roots;

    fn quiver(n: usize, edges: &[[usize; 2]]) -> Quiver {
        validate_dynkin(&RawQuiver {
            vertices: n,
            edges: edges.to_vec(),
        })
        .unwrap()
    }

    #[test]
    fn a2_indecomposables() {
        let q = quiver(2, &[[2, 1]]);
        let i = indecomposable(&q, &DimVector(vec![1, 1])).unwrap();
        assert_eq!(i.maps, vec![Matrix::from_i64(1, 1, &[1])]);
        let s1 = indecomposable(&q, &DimVector(vec![1, 0])).unwrap();
        assert_eq!(s1.maps[0].rows(), 1);
        assert_eq!(s1.maps[0].cols(), 0);
        assert!(matches!(
            indecomposable(&q, &DimVector(vec![2, 1])),
            Err(RepError::NotARoot(_))
        ));
    }

    #[test]
    fn all_roots_of_small_quivers_are_bricks() {
        for q in [
            quiver(3, &[[1, 2], [3, 2]]),
            quiver(4, &[[1, 2], [2, 3], [4, 3]]),
            quiver(4, &[[2, 1], [1, 3], [4, 1]]),
            quiver(4, &[[1, 2], [1, 3], [1, 4]]),
        ] {
            for beta in positive_roots(&q) {
                let m = indecomposable(&q, &beta).unwrap();
                assert_eq!(hom_dim(&q, &m, &m).unwrap(), 1);
                assert_eq!(ext_dim_direct(&q, &m, &m).unwrap(), 0);
            }
        }
    }

    #[test]
    fn e6_highest_root() {
        let q = quiver(6, &[[1, 2], [2, 3], [4, 3], [4, 5], [6, 3]]);
        let top = positive_roots(&q)
            .into_iter()
            .max_by_key(|d| d.total())
            .unwrap();
        assert_eq!(top.total(), 11);
        let m = indecomposable(&q, &top).unwrap();
        assert_eq!(hom_dim(&q, &m, &m).unwrap(), 1);
        assert_eq!(ext_dim_direct(&q, &m, &m).unwrap(), 0);
    }
}
