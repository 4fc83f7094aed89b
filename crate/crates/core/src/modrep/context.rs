use rayon::prelude::*;

use crate::quiver::{euler_form, DimVector, Quiver};
use crate::roots::{admissible_root_order, positive_roots, RootOrder};

use super::{
    hom_dim, indecomposable, orbits_for, ModuleType, RepError, Representation,
};

/// A quiver together with its admissibly ordered roots, their
/// indecomposables and the pairwise Hom/Ext tables.
#[derive(Clone, Debug)]
pub struct QuiverContext {
    quiver: Quiver,
    order: RootOrder,
    indecomposables: Vec<Representation>,
    hom: Vec<Vec<u32>>,
    ext: Vec<Vec<u32>>,
}

impl QuiverContext {
    pub fn new(quiver: Quiver) -> Result<Self, RepError> {
        let roots = positive_roots(&quiver);
        let reps = roots
            .par_iter()
            .map(|b| indecomposable(&quiver, b))
            .collect::<Result<Vec<_>, _>>()?;
        let n = roots.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect();
        let hom_flat = pairs
            .par_iter()
            .map(|&(x, y)| hom_dim(&quiver, &reps[x], &reps[y]))
            .collect::<Result<Vec<_>, _>>()?;
        let mut hom = vec![vec![0u32; n]; n];
        let mut ext = vec![vec![0u32; n]; n];
        for (&(x, y), h) in pairs.iter().zip(hom_flat) {
            hom[x][y] = h;
            let e = h as i64 - euler_form(&quiver, &roots[x], &roots[y])?;
            if e < 0 {
                return Err(RepError::NegativeExt(e));
            }
            ext[x][y] = e as u32;
        }
        let perm = admissible_root_order(&roots, &hom, &ext)?;
        let permute = |t: &Vec<Vec<u32>>| -> Vec<Vec<u32>> {
            perm.iter()
                .map(|&x| perm.iter().map(|&y| t[x][y]).collect())
                .collect()
        };
        Ok(QuiverContext {
            order: RootOrder::new(perm.iter().map(|&x| roots[x].clone()).collect()),
            indecomposables: perm.iter().map(|&x| reps[x].clone()).collect(),
            hom: permute(&hom),
            ext: permute(&ext),
            quiver,
        })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn order(&self) -> &RootOrder {
        &self.order
    }

    pub fn root_count(&self) -> usize {
        self.order.len()
    }

    pub fn root(&self, u: usize) -> &DimVector {
        &self.order.get(u).dim
    }

    pub fn root_dims(&self) -> Vec<DimVector> {
        self.order.dims()
    }

    pub fn indecomposable(&self, u: usize) -> &Representation {
        &self.indecomposables[u]
    }

    /// `dim Hom(A_u, A_v)` in the admissible order.
    pub fn hom(&self, u: usize, v: usize) -> u32 {
        self.hom[u][v]
    }

    pub fn ext(&self, u: usize, v: usize) -> u32 {
        self.ext[u][v]
    }

    pub fn hom_table(&self) -> &[Vec<u32>] {
        &self.hom
    }

    pub fn ext_table(&self) -> &[Vec<u32>] {
        &self.ext
    }

    pub fn check_module_type(&self, m: &ModuleType) -> Result<(), RepError> {
        if m.0.len() != self.root_count() {
            return Err(RepError::ModuleTypeLength {
                expected: self.root_count(),
                found: m.0.len(),
            });
        }
        Ok(())
    }

    /// `gamma = sum_u m_u beta_u`.
    pub fn dimension_of(&self, m: &ModuleType) -> DimVector {
        let n = self.quiver.vertex_count();
        let mut g = vec![0u32; n];
        for (u, &mu) in m.0.iter().enumerate() {
            for (i, gi) in g.iter_mut().enumerate() {
                *gi += mu * self.root(u)[i];
            }
        }
        DimVector(g)
    }

    pub fn orbits_for(&self, gamma: &DimVector) -> Result<Vec<ModuleType>, RepError> {
        if gamma.len() != self.quiver.vertex_count() {
            return Err(crate::quiver::QuiverError::LengthMismatch {
                expected: self.quiver.vertex_count(),
                found: gamma.len(),
            }
            .into());
        }
        Ok(orbits_for(&self.root_dims(), gamma))
    }

    /// Complex codimension of the orbit `eta_m`, computed both from the Ext
    /// table and from the Euler form; the two must agree.
    pub fn codim(&self, m: &ModuleType) -> Result<u64, RepError> {
        self.check_module_type(m)?;
        let (mut via_ext, mut via_chi) = (0i64, 0i64);
        let big_n = self.root_count();
        for u in 0..big_n {
            for v in u + 1..big_n {
                let w = m.0[u] as i64 * m.0[v] as i64;
                if w == 0 {
                    continue;
                }
                via_ext += w * self.ext[u][v] as i64;
                via_chi -= w * euler_form(&self.quiver, self.root(u), self.root(v))?;
            }
        }
        if via_ext != via_chi {
            return Err(RepError::CodimMismatch { via_ext, via_chi });
        }
        Ok(via_ext as u64)
    }

    /// Nonzero multiplicities with their root index: the factors `U(m_u)`
    /// of the stabilizer up to homotopy.
    pub fn stabilizer_dims(&self, m: &ModuleType) -> Vec<(usize, u32)> {
        m.0.iter()
            .enumerate()
            .filter(|&(_, &x)| x > 0)
            .map(|(u, &x)| (u, x))
            .collect()
    }

    /// Basis positions (0-based, within vertex `i`) of the copy `(u, v)` of
    /// `A_{beta_u}`: consecutive blocks in the order `(1,1), (1,2), ...,
    /// (N, m_N)`.
    pub fn block_layout(&self, m: &ModuleType) -> Vec<Vec<(usize, usize, std::ops::Range<usize>)>> {
        let n = self.quiver.vertex_count();
        let mut out = vec![Vec::new(); n];
        let mut offset = vec![0usize; n];
        for (u, &mu) in m.0.iter().enumerate() {
            for v in 0..mu as usize {
                for i in 0..n {
                    let d = self.root(u)[i] as usize;
                    if d > 0 {
                        out[i].push((u, v, offset[i]..offset[i] + d));
                    }
                    offset[i] += d;
                }
            }
        }
        out
    }

    /// The point `Phi = (+)_u (+)_v A_{u,v}` of `V_gamma` laid out in
    /// consecutive blocks.
    pub fn generic_point(&self, m: &ModuleType) -> Result<Representation, RepError> {
        self.check_module_type(m)?;
        let parts: Vec<&Representation> = m
            .0
            .iter()
            .enumerate()
            .flat_map(|(u, &mu)| std::iter::repeat_n(&self.indecomposables[u], mu as usize))
            .collect();
        Ok(Representation::direct_sum(&self.quiver, &parts))
    }

    /// `dim End(M_m) = sum_{u,v} m_u m_v hom(A_u, A_v)`.
    pub fn end_dim(&self, m: &ModuleType) -> u64 {
        let mut s = 0u64;
        for (u, &a) in m.0.iter().enumerate() {
            for (v, &b) in m.0.iter().enumerate() {
                s += a as u64 * b as u64 * self.hom[u][v] as u64;
            }
        }
        s
    }

    /// `dim G_gamma - dim End(M)`.
    pub fn orbit_dim(&self, m: &ModuleType) -> u64 {
        self.dimension_of(m).square_sum() - self.end_dim(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modrep::{ext_dim_direct, hom_dim};
    use crate::quiver::{validate_dynkin, RawQuiver};

    fn ctx(n: usize, edges: &[[usize; 2]]) -> QuiverContext {
        QuiverContext::new(
            validate_dynkin(&RawQuiver {
                vertices: n,
                edges: edges.to_vec(),
            })
            .unwrap(),
        )
        .unwrap()
    }

    fn mt(v: &[u32]) -> ModuleType {
        ModuleType(v.to_vec())
    }

    #[test]
    fn a2_order_matches_convention() {
        let c = ctx(2, &[[2, 1]]);
        assert_eq!(
            c.root_dims(),
            vec![DimVector(vec![0, 1]), DimVector(vec![1, 1]), DimVector(vec![1, 0])]
        );
        // the reversed orientation is renumbered into the same quiver
        let c2 = ctx(2, &[[1, 2]]);
        assert_eq!(c.root_dims(), c2.root_dims());
    }

    #[test]
    fn admissible_order_holds_pairwise() {
        for c in [
            ctx(3, &[[2, 1], [3, 2]]),
            ctx(3, &[[1, 2], [3, 2]]),
            ctx(4, &[[2, 1], [1, 3], [4, 1]]),
        ] {
            let q = c.quiver();
            let n = c.root_count();
            for u in 0..n {
                for v in u + 1..n {
                    let (a, b) = (c.indecomposable(u), c.indecomposable(v));
                    assert_eq!(hom_dim(q, a, b).unwrap(), 0, "Hom(A_{u}, A_{v})");
                    assert_eq!(ext_dim_direct(q, b, a).unwrap(), 0, "Ext(A_{v}, A_{u})");
                }
                assert_eq!(c.ext(u, u), 0);
            }
        }
    }

    #[test]
    fn a2_codims_and_stabilizers() {
        let c = ctx(2, &[[2, 1]]);
        assert_eq!(c.codim(&mt(&[0, 1, 0])).unwrap(), 0);
        assert_eq!(c.codim(&mt(&[1, 0, 1])).unwrap(), 1);
        assert_eq!(c.codim(&mt(&[0, 0, 3])).unwrap(), 0);
        assert_eq!(c.stabilizer_dims(&mt(&[1, 0, 1])), vec![(0, 1), (2, 1)]);
        assert_eq!(c.stabilizer_dims(&mt(&[0, 0, 0])), vec![]);
        assert_eq!(c.stabilizer_dims(&mt(&[2, 1, 0])), vec![(0, 2), (1, 1)]);
        assert!(c.codim(&mt(&[1, 0])).is_err());
    }

    #[test]
    fn generic_point_of_222() {
        let c = ctx(2, &[[2, 1]]);
        let phi = c.generic_point(&mt(&[2, 2, 2])).unwrap();
        assert_eq!(phi.dims, DimVector(vec![4, 4]));
        let a = &phi.maps[0];
        assert_eq!(a.rank(), 2);
        // kernel spanned by the first two basis vectors at vertex 2
        let k = a.nullspace();
        assert_eq!(k.cols(), 2);
        for col in 0..2 {
            for row in 2..4 {
                assert!(num_traits::Zero::is_zero(&k[(row, col)]));
            }
        }
        // e_{2,3} -> e_{1,1}, e_{2,4} -> e_{1,2}
        assert!(!num_traits::Zero::is_zero(&a[(0, 2)]));
        assert!(!num_traits::Zero::is_zero(&a[(1, 3)]));
    }

    #[test]
    fn orbit_dimension_identity() {
        for c in [ctx(2, &[[2, 1]]), ctx(3, &[[2, 1], [2, 3]]), ctx(3, &[[2, 1], [3, 2]])] {
            let q = c.quiver().clone();
            let n = q.vertex_count();
            for total in 0..=6u32 {
                for gamma in DimVector::all_with_total(n, total) {
                    for m in c.orbits_for(&gamma).unwrap() {
                        let phi = c.generic_point(&m).unwrap();
                        let end = hom_dim(&q, &phi, &phi).unwrap() as u64;
                        assert_eq!(end, c.end_dim(&m));
                        assert_eq!(c.codim(&m).unwrap() + c.orbit_dim(&m), q.rep_space_dim(&gamma));
                        assert_eq!(c.codim(&m).unwrap(), ext_dim_direct(&q, &phi, &phi).unwrap() as u64);
                    }
                }
            }
        }
    }
}
