//! Orbit classes: quiver polynomials, restriction to the stabilizer of the
//! normal form `Phi`, and the Euler class of the normal space.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::linalg::Matrix;
use crate::modrep::{ModuleType, QuiverContext};
use crate::poly::{symmetrize_check, MPoly, Var, VarKind};
use crate::roots::choose_i;

use super::{at_vertex, mismatch, multi_mul, CohaElement, CohaError};

/// `[closure of eta_m] = (1 in H_{m_1 beta_1}) * ... * (1 in H_{m_N beta_N})`,
/// checked to be homogeneous of degree `codim(m)` with integer coefficients.
pub fn quiver_polynomial(ctx: &QuiverContext, m: &ModuleType) -> Result<CohaElement, CohaError> {
    let codim = ctx.codim(m)? as i64;
    let factors: Vec<CohaElement> = m
        .entries()
        .iter()
        .enumerate()
        .filter(|&(_, &mu)| mu > 0)
        .map(|(u, &mu)| CohaElement::one(ctx.root(u).scaled(mu)))
        .collect();
    let p = multi_mul(ctx.quiver(), &factors)?;
    let p = if factors.is_empty() {
        CohaElement::one(ctx.dimension_of(m))
    } else {
        p
    };
    if p.homogeneous_degree() != Some(codim) {
        return Err(mismatch("quiver polynomial degree", codim, &p));
    }
    if !p.poly().is_integral() {
        return Err(mismatch("quiver polynomial coefficients", "integers", &p));
    }
    Ok(p)
}

/// Slot `j` of vertex `i` (both 0-based) belongs to copy `(u, v)`.
fn slot_labels(ctx: &QuiverContext, m: &ModuleType) -> Vec<Vec<(usize, usize)>> {
    ctx.block_layout(m)
        .into_iter()
        .map(|blocks| {
            let mut labels = Vec::new();
            for (u, v, range) in blocks {
                for _ in range {
                    labels.push((u, v));
                }
            }
            labels
        })
        .collect()
}

fn mu(u: usize, v: usize) -> MPoly {
    MPoly::var(Var::u(u as u32 + 1, v as u32 + 1))
}

/// `iota_m^*`: `w[i,j] -> u[u,v]` when slot `j` of vertex `i` lies in the
/// block of the copy `A_{u,v}`.
pub fn restriction(ctx: &QuiverContext, m: &ModuleType, f: &CohaElement) -> Result<MPoly, CohaError> {
    ctx.check_module_type(m)?;
    let gamma = ctx.dimension_of(m);
    if f.gamma() != &gamma {
        return Err(mismatch("dimension vector of restricted class", &gamma, f.gamma()));
    }
    let labels = slot_labels(ctx, m);
    let out = f.poly().rename(|v| {
        let (u, c) = labels[v.i as usize - 1][v.j as usize - 1];
        Var::u(u as u32 + 1, c as u32 + 1)
    });
    // symmetric in each group mu_{u,1..m_u}
    let groups: Vec<u32> = m.entries().to_vec();
    let as_w = out.rename(|v| Var::w(v.i, v.j));
    if !symmetrize_check(&as_w, &groups) {
        return Err(mismatch("restriction symmetry", "symmetric in each mu group", &out));
    }
    Ok(out)
}

/// `E_m` as the restriction of the quiver polynomial.
pub fn euler_class(ctx: &QuiverContext, m: &ModuleType) -> Result<MPoly, CohaError> {
    restriction(ctx, m, &quiver_polynomial(ctx, m)?)
}

/// Torus weights `mu_A - mu_B` of the normal space `V_gamma / T(eta_m)` at
/// `Phi`, with multiplicities, as `((A, B), multiplicity)` over copy labels.
#[allow(clippy::type_complexity)]
pub fn normal_weights(
    ctx: &QuiverContext,
    m: &ModuleType,
) -> Result<Vec<(((usize, usize), (usize, usize)), u32)>, CohaError> {
    let q = ctx.quiver();
    let phi = ctx.generic_point(m)?;
    let labels = slot_labels(ctx, m);
    let dims: Vec<usize> = phi.dims.entries().iter().map(|&d| d as usize).collect();
    let n = q.vertex_count();

    // coordinates of V (per arrow, row at head, column at tail) and of the Lie
    // algebra g (per vertex), grouped by their label pair
    let mut v_coords: BTreeMap<((usize, usize), (usize, usize)), Vec<(usize, usize, usize)>> = BTreeMap::new();
    for (a, &(t, h)) in q.edges().iter().enumerate() {
        for r in 0..dims[h] {
            for c in 0..dims[t] {
                v_coords.entry((labels[h][r], labels[t][c])).or_default().push((a, r, c));
            }
        }
    }
    let mut g_coords: BTreeMap<((usize, usize), (usize, usize)), Vec<(usize, usize, usize)>> = BTreeMap::new();
    for i in 0..n {
        for r in 0..dims[i] {
            for c in 0..dims[i] {
                g_coords.entry((labels[i][r], labels[i][c])).or_default().push((i, r, c));
            }
        }
    }

    let mut out = Vec::new();
    let mut total = 0u64;
    for (pair, rows) in &v_coords {
        let row_index: BTreeMap<(usize, usize, usize), usize> =
            rows.iter().enumerate().map(|(k, &x)| (x, k)).collect();
        let cols = g_coords.get(pair).cloned().unwrap_or_default();
        let mut mat = Matrix::zeros(rows.len(), cols.len());
        for (col, &(i, r0, k0)) in cols.iter().enumerate() {
            // X = E_{r0,k0} at vertex i maps to (X_h Phi_a - Phi_a X_t)_a
            for (a, &(t, h)) in q.edges().iter().enumerate() {
                let pa = &phi.maps[a];
                if h == i {
                    for c in 0..dims[t] {
                        if let Some(&row) = row_index.get(&(a, r0, c)) {
                            let x = &mat[(row, col)] + &pa[(k0, c)];
                            mat[(row, col)] = x;
                        }
                    }
                }
                if t == i {
                    for r in 0..dims[h] {
                        if let Some(&row) = row_index.get(&(a, r, k0)) {
                            let x = &mat[(row, col)] - &pa[(r, r0)];
                            mat[(row, col)] = x;
                        }
                    }
                }
            }
        }
        let mult = (rows.len() - mat.rank()) as u32;
        if mult == 0 {
            continue;
        }
        if pair.0 == pair.1 {
            return Err(mismatch("zero weight in the normal space", 0, mult));
        }
        total += mult as u64;
        out.push((*pair, mult));
    }
    let codim = ctx.codim(m)?;
    if total != codim {
        return Err(mismatch("normal space dimension", codim, total));
    }
    Ok(out)
}

/// `E_m = prod (mu_A - mu_B)^{mult}` from the normal-space weights.
pub fn euler_class_from_weights(ctx: &QuiverContext, m: &ModuleType) -> Result<MPoly, CohaError> {
    let mut e = MPoly::one();
    for ((a, b), mult) in normal_weights(ctx, m)? {
        e = &e * &(&mu(a.0, a.1) - &mu(b.0, b.1)).pow(mult);
    }
    Ok(e)
}

/// The restriction of `f_1 * ... * f_N`, where `f_u` is a symmetric
/// polynomial in `w[1,1..m_u]` placed at vertex `i(u)` of `H_{m_u beta_u}`.
/// Returns the image after checking it equals `prod_u f_u(mu_{u,.}) E_m`.
pub fn structure_factor_image(ctx: &QuiverContext, m: &ModuleType, fs: &[MPoly]) -> Result<MPoly, CohaError> {
    ctx.check_module_type(m)?;
    if fs.len() != m.entries().len() {
        return Err(mismatch("number of factors", m.entries().len(), fs.len()));
    }
    let mut elements = Vec::new();
    let mut expected = euler_class_from_weights(ctx, m)?;
    for (u, (&mu_count, f)) in m.entries().iter().zip(fs).enumerate() {
        if mu_count == 0 {
            if f.variables().is_empty() {
                expected = &expected * f;
                continue;
            }
            return Err(mismatch("factor for an absent root", "a constant", f));
        }
        for v in f.variables() {
            if v.kind != VarKind::W || v.i != 1 || v.j > mu_count {
                return Err(CohaError::VariableOutOfRange {
                    var: v,
                    gamma: crate::quiver::DimVector(vec![mu_count]),
                });
            }
        }
        let i = choose_i(ctx.root(u))?;
        elements.push(CohaElement::new(ctx.root(u).scaled(mu_count), at_vertex(f, i))?);
        expected = &expected * &f.rename(|v| Var::u(u as u32 + 1, v.j));
    }
    let lhs = if elements.is_empty() {
        MPoly::one()
    } else {
        restriction(ctx, m, &multi_mul(ctx.quiver(), &elements)?)?
    };
    let scale = fs
        .iter()
        .zip(m.entries())
        .filter(|(_, &c)| c == 0)
        .fold(BigRational::from_integer(1.into()), |acc, (f, _)| acc * f.constant_term());
    let lhs = if scale.is_zero() { MPoly::zero() } else { lhs.scale(&scale) };
    if lhs != expected {
        return Err(mismatch("restricted product", &expected, &lhs));
    }
    Ok(lhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::quiver::{validate_dynkin, DimVector, RawQuiver};

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
    fn a2_quiver_polynomials() {
        let c = ctx(2, &[[2, 1]]);
        assert_eq!(quiver_polynomial(&c, &mt(&[1, 0, 1])).unwrap().to_string(), "w[1,1] - w[2,1]");
        assert_eq!(quiver_polynomial(&c, &mt(&[0, 1, 0])).unwrap().to_string(), "1");
        let p = quiver_polynomial(&c, &mt(&[1, 1, 1])).unwrap();
        assert_eq!(p.gamma(), &DimVector(vec![2, 2]));
        assert_eq!(p.homogeneous_degree(), Some(1));
        assert_eq!(quiver_polynomial(&c, &mt(&[0, 0, 0])).unwrap().to_string(), "1");
    }

    #[test]
    fn restriction_table_of_222() {
        let c = ctx(2, &[[2, 1]]);
        let m = mt(&[2, 2, 2]);
        let f = CohaElement::new(
            DimVector(vec![4, 4]),
            parse_poly("w[1,1]+w[1,2]+w[1,3]+w[1,4] + 2*(w[2,1]+w[2,2]+w[2,3]+w[2,4])").unwrap(),
        )
        .unwrap();
        let r = restriction(&c, &m, &f).unwrap();
        assert_eq!(
            r,
            parse_poly("2*u[1,1]+2*u[1,2] + 3*u[2,1]+3*u[2,2] + u[3,1]+u[3,2]").unwrap()
        );
        assert_eq!(restriction(&c, &m, &CohaElement::one(DimVector(vec![4, 4]))).unwrap(), MPoly::one());
    }

    #[test]
    fn euler_class_of_222_closed_form() {
        let c = ctx(2, &[[2, 1]]);
        let m = mt(&[2, 2, 2]);
        let mut expected = MPoly::one();
        for v in 0..2 {
            for v2 in 0..2 {
                expected = &expected * &(&mu(2, v) - &mu(0, v2));
            }
        }
        assert_eq!(euler_class(&c, &m).unwrap(), expected);
        assert_eq!(euler_class_from_weights(&c, &m).unwrap(), expected);
        assert_eq!(
            euler_class_from_weights(&c, &mt(&[1, 0, 1])).unwrap().to_string(),
            "-u[1,1] + u[3,1]"
        );
        assert_eq!(euler_class(&c, &mt(&[0, 1, 0])).unwrap(), MPoly::one());
    }

    #[test]
    fn euler_classes_agree_on_a3() {
        let c = ctx(3, &[[1, 2], [3, 2]]);
        for total in 0..=4 {
            for g in DimVector::all_with_total(3, total) {
                for m in c.orbits_for(&g).unwrap() {
                    assert_eq!(euler_class(&c, &m).unwrap(), euler_class_from_weights(&c, &m).unwrap(), "{m}");
                }
            }
        }
    }

    #[test]
    fn factor_image_matches_product_form() {
        let c = ctx(2, &[[2, 1]]);
        let m = mt(&[2, 2, 2]);
        let fs = vec![
            parse_poly("w[1,1]*w[1,2]").unwrap(),
            parse_poly("w[1,1]+w[1,2]").unwrap(),
            parse_poly("w[1,1]^2+w[1,2]^2 - 1").unwrap(),
        ];
        structure_factor_image(&c, &m, &fs).unwrap();
        let ones = vec![MPoly::one(); 3];
        assert_eq!(structure_factor_image(&c, &m, &ones).unwrap(), euler_class(&c, &m).unwrap());
        let m2 = mt(&[1, 0, 1]);
        let fs2 = vec![parse_poly("w[1,1]^2 - 3").unwrap(), MPoly::integer(2), parse_poly("w[1,1]").unwrap()];
        structure_factor_image(&c, &m2, &fs2).unwrap();
    }
}
