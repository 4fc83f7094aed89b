//! Graded dimension comparison for the factorization of `H` into the pieces
//! `P_{beta_u}` (one-block symmetric polynomials at the vertex `i(u)`).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::Matrix;
use crate::modrep::{ModuleType, QuiverContext};
use crate::poly::{MPoly, Monomial, Var};
use crate::quiver::DimVector;
use crate::roots::choose_i;

use super::{check_len, euler_class_from_weights, multi_mul, CohaElement, CohaError};

/// Monomial symmetric polynomial `m_parts(w[i+1,1], ..., w[i+1,nvars])`.
/// Zero when `parts` has more than `nvars` nonzero entries.
pub fn monomial_symmetric(vertex: usize, nvars: u32, parts: &[u32]) -> MPoly {
    let mut exps: Vec<u32> = parts.iter().copied().filter(|&p| p > 0).collect();
    if exps.len() > nvars as usize {
        return MPoly::zero();
    }
    exps.resize(nvars as usize, 0);
    exps.sort_unstable();
    let mut out = MPoly::zero();
    let one = BigRational::from_integer(BigInt::from(1));
    loop {
        let mono: Monomial = exps
            .iter()
            .enumerate()
            .filter(|&(_, &e)| e > 0)
            .map(|(j, &e)| (Var::w(vertex as u32 + 1, j as u32 + 1), e as i32))
            .collect();
        out.add_term(mono, one.clone());
        if !next_permutation(&mut exps) {
            return out;
        }
    }
}

fn next_permutation(v: &mut [u32]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Partitions of `n` into at most `max_parts` parts, weakly decreasing.
fn partitions(n: u32, max_parts: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, largest: u32, slots: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        if slots == 0 {
            return;
        }
        for p in (1..=largest.min(n)).rev() {
            cur.push(p);
            go(n - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, max_parts, &mut Vec::new(), &mut out);
    out
}

/// Number of block-symmetric monomials of degree `k` in `H_gamma`: the
/// coefficient of `t^k` in `prod_i prod_{j <= gamma(i)} 1/(1 - t^j)`.
pub fn block_symmetric_count(gamma: &DimVector, k: u32) -> u64 {
    let k = k as usize;
    let mut c = vec![0u64; k + 1];
    c[0] = 1;
    for &g in gamma.entries() {
        for j in 1..=g as usize {
            for d in j..=k {
                c[d] += c[d - j];
            }
        }
    }
    c[k]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeRow {
    /// Polynomial degree (cohomological degree `2k`).
    pub k: u32,
    pub h_dim: u64,
    pub span_rank: u64,
    pub generators: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub gamma: DimVector,
    pub cap: u32,
    pub rows: Vec<DegreeRow>,
    /// Per orbit: do the restricted images `prod f_u(mu) E_m` of the capped
    /// basis stay independent.
    pub orbit_injective: Vec<(ModuleType, bool)>,
}

impl StructureReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.h_dim == r.span_rank && r.generators == r.h_dim)
            && self.orbit_injective.iter().all(|(_, ok)| *ok)
    }
}

/// Factors `(beta, multiplicity, vertex carrying the variables)` of one
/// summand, and its degree shift.
struct Layout {
    factors: Vec<(DimVector, u32, usize)>,
    shift: u32,
}

/// One basis tensor of a layout.
struct Generator {
    layout: usize,
    k: u32,
    parts: Vec<Vec<u32>>,
}

fn tuples(mults: &[u32], budget: u32) -> Vec<Vec<Vec<u32>>> {
    let mut out = vec![(Vec::new(), 0u32)];
    for &mu in mults {
        let mut next = Vec::new();
        for (prefix, used) in &out {
            let choices: Vec<Vec<u32>> = if mu == 0 {
                vec![Vec::new()]
            } else {
                (0..=budget - used).flat_map(|d| partitions(d, mu)).collect()
            };
            for p in choices {
                let mut t: Vec<Vec<u32>> = prefix.clone();
                let d: u32 = p.iter().sum();
                t.push(p);
                next.push((t, used + d));
            }
        }
        out = next;
    }
    out.into_iter().map(|(t, _)| t).collect()
}

fn rank_of(polys: &[&MPoly]) -> usize {
    let mut index: BTreeMap<&Monomial, usize> = BTreeMap::new();
    for p in polys {
        for (mono, _) in p.terms() {
            let n = index.len();
            index.entry(mono).or_insert(n);
        }
    }
    let mut mat = Matrix::zeros(polys.len(), index.len());
    for (r, p) in polys.iter().enumerate() {
        for (mono, c) in p.terms() {
            mat[(r, index[mono])] = c.clone();
        }
    }
    mat.rank()
}

/// Graded ranks of the span of all layout products up to degree `cap`.
fn graded_span(
    ctx: &QuiverContext,
    gamma: &DimVector,
    cap: u32,
    layouts: &[Layout],
) -> Result<(Vec<DegreeRow>, Vec<Generator>), CohaError> {
    let mut gens = Vec::new();
    for (l, layout) in layouts.iter().enumerate() {
        if layout.shift > cap {
            continue;
        }
        let mults: Vec<u32> = layout.factors.iter().map(|f| f.1).collect();
        for parts in tuples(&mults, cap - layout.shift) {
            let d: u32 = parts.iter().flatten().sum();
            gens.push(Generator {
                layout: l,
                k: layout.shift + d,
                parts,
            });
        }
    }

    let images: Vec<MPoly> = gens
        .par_iter()
        .map(|g| {
            let factors = layouts[g.layout]
                .factors
                .iter()
                .zip(&g.parts)
                .filter(|((_, mu, _), _)| *mu > 0)
                .map(|((beta, mu, i), p)| CohaElement::new(beta.scaled(*mu), monomial_symmetric(*i, *mu, p)))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(multi_mul(ctx.quiver(), &factors)?.into_poly())
        })
        .collect::<Result<_, CohaError>>()?;

    let rows = (0..=cap)
        .into_par_iter()
        .map(|k| {
            let polys: Vec<&MPoly> = gens
                .iter()
                .zip(&images)
                .filter(|(g, _)| g.k == k)
                .map(|(_, p)| p)
                .collect();
            DegreeRow {
                k,
                h_dim: block_symmetric_count(gamma, k),
                span_rank: rank_of(&polys) as u64,
                generators: polys.len() as u64,
            }
        })
        .collect();
    Ok((rows, gens))
}

/// Compares, for each polynomial degree `k <= cap`, the span of all products
/// `f_1 * ... * f_N` over the positive roots (monomial symmetric `f_u` at
/// vertex `i(u)`, summed over the orbits of `gamma`) with the dimension of
/// the degree `k` piece of `H_gamma`.
pub fn structure_rank_check(ctx: &QuiverContext, gamma: &DimVector, cap: u32) -> Result<StructureReport, CohaError> {
    check_len(ctx.quiver(), gamma)?;
    let vertices: Vec<usize> = ctx
        .root_dims()
        .iter()
        .map(choose_i)
        .collect::<Result<_, _>>()?;
    let orbits = ctx.orbits_for(gamma)?;
    let layouts = orbits
        .iter()
        .map(|m| {
            Ok(Layout {
                factors: m
                    .entries()
                    .iter()
                    .enumerate()
                    .map(|(u, &mu)| (ctx.root(u).clone(), mu, vertices[u]))
                    .collect(),
                shift: ctx.codim(m)? as u32,
            })
        })
        .collect::<Result<Vec<_>, CohaError>>()?;
    let (rows, gens) = graded_span(ctx, gamma, cap, &layouts)?;

    let orbit_injective = orbits
        .par_iter()
        .enumerate()
        .map(|(o, m)| {
            let e = euler_class_from_weights(ctx, m)?;
            let imgs: Vec<MPoly> = gens
                .iter()
                .filter(|g| g.layout == o)
                .map(|g| {
                    let mut p = e.clone();
                    for (u, (&mu, parts)) in m.entries().iter().zip(&g.parts).enumerate() {
                        if mu > 0 {
                            let f = monomial_symmetric(0, mu, parts);
                            p = &p * &f.rename(|v| Var::u(u as u32 + 1, v.j));
                        }
                    }
                    p
                })
                .collect();
            let refs: Vec<&MPoly> = imgs.iter().collect();
            Ok((m.clone(), !e.is_zero() && rank_of(&refs) == imgs.len()))
        })
        .collect::<Result<_, CohaError>>()?;

    Ok(StructureReport {
        gamma: gamma.clone(),
        cap,
        rows,
        orbit_injective,
    })
}

/// The same comparison for the factorization over the simple roots taken in
/// vertex order, `f_1(w[1,.]) * ... * f_n(w[n,.])`. Available for every type.
pub fn simple_structure_rank_check(ctx: &QuiverContext, gamma: &DimVector, cap: u32) -> Result<StructureReport, CohaError> {
    let q = ctx.quiver();
    check_len(q, gamma)?;
    let n = q.vertex_count();
    let layout = Layout {
        factors: (0..n).map(|i| (DimVector::unit(n, i), gamma[i], i)).collect(),
        shift: 0,
    };
    let (rows, _) = graded_span(ctx, gamma, cap, &[layout])?;
    Ok(StructureReport {
        gamma: gamma.clone(),
        cap,
        rows,
        orbit_injective: Vec::new(),
    })
}
