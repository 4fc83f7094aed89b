//! The COHA of a Dynkin quiver: `H_gamma` is the ring of polynomials in the
//! Chern roots `w[i,j]` (`1 <= j <= gamma(i)`) symmetric within each vertex
//! block, and the product is the shuffle (localization) formula.

mod orbit;
mod structure;

pub use orbit::{
    euler_class, euler_class_from_weights, normal_weights, quiver_polynomial, restriction,
    structure_factor_image,
};
pub use structure::{
    block_symmetric_count, monomial_symmetric, simple_structure_rank_check, structure_rank_check, DegreeRow,
    StructureReport,
};

use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use thiserror::Error;

use crate::modrep::RepError;
use crate::poly::{exact_div_linear, symmetrize_check, MPoly, PolyError, Var, VarKind};
use crate::quiver::{euler_form, DimVector, Quiver, QuiverError};
use crate::roots::RootError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohaError {
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("variable {var} does not belong to H_{gamma}")]
    VariableOutOfRange { var: Var, gamma: DimVector },
    #[error("polynomial is not symmetric within the blocks of {0}")]
    NotBlockSymmetric(DimVector),
    #[error("dimension vector has {found} entries, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("{what}: expected {expected}, found {found}")]
    Mismatch {
        what: &'static str,
        expected: String,
        found: String,
    },
}

fn mismatch(what: &'static str, expected: impl fmt::Display, found: impl fmt::Display) -> CohaError {
    CohaError::Mismatch {
        what,
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

/// An element of `H_gamma`.
#[derive(Clone, PartialEq, Eq)]
pub struct CohaElement {
    gamma: DimVector,
    poly: MPoly,
}

impl CohaElement {
    /// Checks that `poly` only uses the variables of `H_gamma` and is
    /// block-symmetric.
    pub fn new(gamma: DimVector, poly: MPoly) -> Result<Self, CohaError> {
        for v in poly.variables() {
            let ok = v.kind == VarKind::W
                && (v.i as usize) <= gamma.len()
                && v.j <= gamma[v.i as usize - 1];
            if !ok {
                return Err(CohaError::VariableOutOfRange { var: v, gamma });
            }
        }
        if !poly.is_polynomial() {
            return Err(PolyError::NegativeExponent(poly.variables()[0]).into());
        }
        if !symmetrize_check(&poly, gamma.entries()) {
            return Err(CohaError::NotBlockSymmetric(gamma));
        }
        Ok(CohaElement { gamma, poly })
    }

    /// `1 in H_gamma`.
    pub fn one(gamma: DimVector) -> Self {
        CohaElement {
            gamma,
            poly: MPoly::one(),
        }
    }

    pub fn gamma(&self) -> &DimVector {
        &self.gamma
    }

    pub fn poly(&self) -> &MPoly {
        &self.poly
    }

    pub fn into_poly(self) -> MPoly {
        self.poly
    }

    /// Polynomial degree (half the cohomological degree) when homogeneous.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        if self.poly.is_zero() || !self.poly.is_homogeneous() {
            return None;
        }
        self.poly.degree()
    }
}

impl fmt::Display for CohaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

impl fmt::Debug for CohaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H_{}[{}]", self.gamma, self.poly)
    }
}

fn check_len(q: &Quiver, g: &DimVector) -> Result<(), CohaError> {
    if g.len() != q.vertex_count() {
        return Err(CohaError::LengthMismatch {
            expected: q.vertex_count(),
            found: g.len(),
        });
    }
    Ok(())
}

fn w(i: usize, j: usize) -> MPoly {
    MPoly::var(Var::w(i as u32 + 1, j as u32 + 1))
}

/// `prod_{x in xs, y in ys} (w[hx, x] - w[ty, y])` over 0-based slots.
fn difference_product(hv: usize, xs: &[usize], tv: usize, ys: &[usize]) -> MPoly {
    let mut p = MPoly::one();
    for &x in xs {
        for &y in ys {
            p = &p * &(&w(hv, x) - &w(tv, y));
        }
    }
    p
}

fn vandermonde(i: usize, slots: &[usize]) -> MPoly {
    let mut p = MPoly::one();
    for (a, &x) in slots.iter().enumerate() {
        for &y in &slots[a + 1..] {
            p = &p * &(&w(i, x) - &w(i, y));
        }
    }
    p
}

/// Moves slot `k` of vertex `i` to `slots[i][k]`.
fn place(p: &MPoly, slots: &[Vec<usize>]) -> MPoly {
    p.rename(|v| Var::w(v.i, slots[v.i as usize - 1][v.j as usize - 1] as u32 + 1))
}

/// The shuffle product `f1 * f2`.
///
/// Every term of the localization sum is multiplied by the full per-vertex
/// Vandermonde, which turns it into a polynomial, and the total is then
/// divided by the Vandermonde one linear factor at a time.
pub fn shuffle_mul(q: &Quiver, f1: &CohaElement, f2: &CohaElement) -> Result<CohaElement, CohaError> {
    check_len(q, &f1.gamma)?;
    check_len(q, &f2.gamma)?;
    let n = q.vertex_count();
    let gamma = &f1.gamma + &f2.gamma;
    let subsets: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|i| (0..gamma[i] as usize).combinations(f1.gamma[i] as usize).collect())
        .collect();
    let tuples: Vec<Vec<usize>> = subsets
        .iter()
        .map(|s| 0..s.len())
        .multi_cartesian_product()
        .collect();

    let terms: Vec<MPoly> = tuples
        .par_iter()
        .map(|pick| {
            let s: Vec<Vec<usize>> = (0..n).map(|i| subsets[i][pick[i]].clone()).collect();
            let sbar: Vec<Vec<usize>> = (0..n)
                .map(|i| (0..gamma[i] as usize).filter(|x| !s[i].contains(x)).collect())
                .collect();
            let mut t = &place(&f1.poly, &s) * &place(&f2.poly, &sbar);
            for &(tv, hv) in q.edges() {
                t = &t * &difference_product(hv, &sbar[hv], tv, &s[tv]);
            }
            let mut flips = 0usize;
            for i in 0..n {
                t = &t * &(&vandermonde(i, &s[i]) * &vandermonde(i, &sbar[i]));
                flips += s[i]
                    .iter()
                    .map(|&j| sbar[i].iter().filter(|&&k| j < k).count())
                    .sum::<usize>();
            }
            if flips % 2 == 1 {
                t = -&t;
            }
            t
        })
        .collect();
    let mut total = MPoly::zero();
    for t in &terms {
        total.add_assign(t);
    }
    for i in 0..n {
        for j in 0..gamma[i] {
            for k in j + 1..gamma[i] {
                total = exact_div_linear(&total, Var::w(i as u32 + 1, j + 1), Var::w(i as u32 + 1, k + 1))?;
            }
        }
    }
    if !symmetrize_check(&total, gamma.entries()) {
        return Err(CohaError::NotBlockSymmetric(gamma));
    }
    if let (Some(d1), Some(d2)) = (f1.homogeneous_degree(), f2.homogeneous_degree()) {
        let expected = d1 + d2 - euler_form(q, &f1.gamma, &f2.gamma)?;
        if !total.is_zero() && (!total.is_homogeneous() || total.degree() != Some(expected)) {
            return Err(mismatch("degree of product", expected, &total));
        }
    }
    Ok(CohaElement { gamma, poly: total })
}

/// Left-to-right product; the empty product is `1 in H_0`.
pub fn multi_mul(q: &Quiver, factors: &[CohaElement]) -> Result<CohaElement, CohaError> {
    let mut acc = CohaElement::one(DimVector::zero(q.vertex_count()));
    for f in factors {
        acc = shuffle_mul(q, &acc, f)?;
    }
    Ok(acc)
}

/// Substitutes `w[1,j] -> w[i+1,j]`, turning a one-block polynomial into an
/// element that only depends on the Chern roots at vertex `i` (0-based).
pub fn at_vertex(f: &MPoly, i: usize) -> MPoly {
    f.rename(|v| Var::new(v.kind, i as u32 + 1, v.j))
}
