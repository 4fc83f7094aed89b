//! Iterated-residue (Jacobi-Trudi transform) form of the COHA product.
//!
//! Laurent polynomials in `a[i,s]`, `b[i,s]` are plain [`MPoly`] values; the
//! transform evaluates each monomial as a product of determinants
//! `Delta^(i)_lambda = det(c_{i, lambda_u + v - u})`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::coha::{shuffle_mul, CohaElement, CohaError};
use crate::poly::{MPoly, PolyError, Var, VarKind};
use crate::quiver::{DimVector, Quiver, QuiverError};

/// Laurent polynomial in the residue variables `a[i,s]`, `b[i,s]`.
pub type LaurentPoly = MPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResidueError {
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Coha(#[from] CohaError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("variable {0} is not one of the transform variables")]
    UnknownVariable(Var),
    #[error("expansion truncated at order {order} still contributes; raise the truncation order")]
    TruncationTooLow { order: u32 },
    #[error("residue product {residue} differs from shuffle product {shuffle}")]
    Mismatch { residue: String, shuffle: String },
}

fn w(i: usize, j: usize) -> MPoly {
    MPoly::var(Var::w(i as u32 + 1, j as u32 + 1))
}

/// `c_{i,0..=max_order}` in `H_gamma` (vertex `i` 0-based).
pub fn c_series(q: &Quiver, gamma: &DimVector, i: usize, max_order: usize) -> Vec<MPoly> {
    let mut series = vec![MPoly::zero(); max_order + 1];
    series[0] = MPoly::one();
    for j in q.tails_into(i) {
        for u in 0..gamma[j] as usize {
            // multiply by (1 - w_{j,u} xi)
            for k in (1..=max_order).rev() {
                let t = &series[k - 1] * &w(j, u);
                series[k] = &series[k] - &t;
            }
        }
    }
    for u in 0..gamma[i] as usize {
        // divide by (1 - w_{i,u} xi)
        for k in 1..=max_order {
            let t = &series[k - 1] * &w(i, u);
            series[k] = &series[k] + &t;
        }
    }
    series
}

/// Rewrites `Delta_lambda` as `sign * Delta_mu` with `mu` a partition;
/// `None` when it vanishes.
fn straighten(lambda: &[i32]) -> Option<(i8, Vec<u32>)> {
    let r = lambda.len() as i32;
    let mut v: Vec<i32> = lambda.iter().enumerate().map(|(u, &l)| l + r - 1 - u as i32).collect();
    if v.iter().any(|&x| x < 0) {
        return None;
    }
    // sort descending, counting transpositions
    let mut sign = 1i8;
    for a in 0..v.len() {
        for b in 0..v.len() - 1 - a {
            if v[b] < v[b + 1] {
                v.swap(b, b + 1);
                sign = -sign;
            } else if v[b] == v[b + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    let mu = v.iter().enumerate().map(|(u, &x)| (x - (r - 1 - u as i32)) as u32).collect();
    Some((sign, mu))
}

fn det(m: &[Vec<MPoly>]) -> MPoly {
    let r = m.len();
    if r == 0 {
        return MPoly::one();
    }
    let mut out = MPoly::zero();
    for perm in (0..r).permutations(r) {
        let mut inversions = 0;
        for a in 0..r {
            for b in a + 1..r {
                if perm[a] > perm[b] {
                    inversions += 1;
                }
            }
        }
        let mut t = MPoly::one();
        for (u, &v) in perm.iter().enumerate() {
            if m[u][v].is_zero() {
                t = MPoly::zero();
                break;
            }
            t = &t * &m[u][v];
        }
        out = if inversions % 2 == 0 { &out + &t } else { &out - &t };
    }
    out
}

/// `Delta^(i)_lambda` in `H_gamma`.
pub fn delta_schur(q: &Quiver, gamma: &DimVector, i: usize, lambda: &[i32]) -> MPoly {
    match straighten(lambda) {
        None => MPoly::zero(),
        Some((sign, mu)) => {
            let p = partition_delta(q, gamma, i, &mu);
            if sign < 0 {
                -&p
            } else {
                p
            }
        }
    }
}

fn partition_delta(q: &Quiver, gamma: &DimVector, i: usize, mu: &[u32]) -> MPoly {
    let r = mu.len();
    let top = mu.first().copied().unwrap_or(0) as usize + r;
    let c = c_series(q, gamma, i, top);
    let m: Vec<Vec<MPoly>> = (0..r)
        .map(|u| {
            (0..r)
                .map(|v| {
                    let k = mu[u] as i64 + v as i64 - u as i64;
                    if k < 0 {
                        MPoly::zero()
                    } else {
                        c[k as usize].clone()
                    }
                })
                .collect()
        })
        .collect();
    det(&m)
}

/// Memoized `Delta^(i)_mu` for partitions `mu`, over a fixed `gamma`.
struct DeltaCache<'a> {
    q: &'a Quiver,
    gamma: &'a DimVector,
    memo: Mutex<HashMap<(usize, Vec<u32>), MPoly>>,
}

impl<'a> DeltaCache<'a> {
    fn new(q: &'a Quiver, gamma: &'a DimVector) -> Self {
        DeltaCache {
            q,
            gamma,
            memo: Mutex::new(HashMap::new()),
        }
    }

    fn get(&self, i: usize, mu: &[u32]) -> MPoly {
        let key = (i, mu.to_vec());
        if let Some(p) = self.memo.lock().unwrap().get(&key) {
            return p.clone();
        }
        let p = partition_delta(self.q, self.gamma, i, mu);
        self.memo.lock().unwrap().insert(key, p.clone());
        p
    }
}

/// Ordered transform variables: `slots[i]` lists the variables of vertex `i`.
#[derive(Clone, Debug)]
struct Slots {
    vars: Vec<Vec<Var>>,
    index: BTreeMap<Var, (usize, usize)>,
}

impl Slots {
    fn new(vars: Vec<Vec<Var>>) -> Self {
        let mut index = BTreeMap::new();
        for (i, vs) in vars.iter().enumerate() {
            for (s, v) in vs.iter().enumerate() {
                index.insert(*v, (i, s));
            }
        }
        Slots { vars, index }
    }

    fn exponents(&self, mono: &[(Var, i32)]) -> Result<Vec<Vec<i32>>, ResidueError> {
        let mut e: Vec<Vec<i32>> = self.vars.iter().map(|v| vec![0; v.len()]).collect();
        for &(v, k) in mono {
            let &(i, s) = self.index.get(&v).ok_or(ResidueError::UnknownVariable(v))?;
            e[i][s] += k;
        }
        Ok(e)
    }
}

type Key = Vec<Vec<u32>>;

/// Straightened key of a monomial, or `None` when its value is zero.
fn key_of(e: &[Vec<i32>]) -> Option<(i8, Key)> {
    let mut sign = 1;
    let mut key = Vec::with_capacity(e.len());
    for lam in e {
        let (s, mu) = straighten(lam)?;
        sign *= s;
        key.push(mu);
    }
    Some((sign, key))
}

fn evaluate(cache: &DeltaCache, acc: &BTreeMap<Key, BigRational>) -> MPoly {
    let parts: Vec<MPoly> = acc
        .par_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(key, c)| {
            let mut p = MPoly::constant(c.clone());
            for (i, mu) in key.iter().enumerate() {
                if !mu.is_empty() {
                    p = &p * &cache.get(i, mu);
                }
            }
            p
        })
        .collect();
    parts.iter().fold(MPoly::zero(), |a, b| &a + b)
}

fn transform(
    q: &Quiver,
    gamma: &DimVector,
    slots: &Slots,
    p: &MPoly,
) -> Result<CohaElement, ResidueError> {
    let mut acc: BTreeMap<Key, BigRational> = BTreeMap::new();
    for (mono, c) in p.terms() {
        if let Some((sign, key)) = key_of(&slots.exponents(mono)?) {
            let e = acc.entry(key).or_insert_with(BigRational::zero);
            if sign > 0 {
                *e += c;
            } else {
                *e -= c;
            }
        }
    }
    let cache = DeltaCache::new(q, gamma);
    Ok(CohaElement::new(gamma.clone(), evaluate(&cache, &acc))?)
}

/// `DDelta_{A_1, ..., A_n}(p)` with `A_i = (a[i,1], ..., a[i,gamma(i)])`.
pub fn ddelta_transform(q: &Quiver, gamma: &DimVector, p: &LaurentPoly) -> Result<CohaElement, ResidueError> {
    let slots = Slots::new(
        (0..q.vertex_count())
            .map(|i| (1..=gamma[i]).map(|s| Var::a(i as u32 + 1, s)).collect())
            .collect(),
    );
    transform(q, gamma, &slots, p)
}

/// One geometric factor `1/(1 - num/den)` as a pair of slot positions.
type Pair = ((usize, usize), (usize, usize));

/// Expands `base * prod 1/(1 - num/den)` up to total order `order`, applies
/// the transform, and reports the accumulated key-space sums of all terms and
/// of the order-`order` terms.
fn expand(
    base: &[(Vec<Vec<i32>>, BigRational)],
    pairs: &[Pair],
    order: u32,
) -> (BTreeMap<Key, BigRational>, BTreeMap<Key, BigRational>) {
    // terms indexed by (order used, exponents)
    let mut terms: BTreeMap<(u32, Vec<Vec<i32>>), BigRational> = BTreeMap::new();
    for (e, c) in base {
        *terms.entry((0, e.clone())).or_insert_with(BigRational::zero) += c;
    }
    for &((ni, ns), (di, ds)) in pairs {
        let mut next: BTreeMap<(u32, Vec<Vec<i32>>), BigRational> = BTreeMap::new();
        for ((o, e), c) in &terms {
            let mut e = e.clone();
            for n in 0..=order - o {
                *next.entry((o + n, e.clone())).or_insert_with(BigRational::zero) += c;
                e[ni][ns] += 1;
                e[di][ds] -= 1;
            }
        }
        terms = next;
    }
    let mut all: BTreeMap<Key, BigRational> = BTreeMap::new();
    let mut boundary: BTreeMap<Key, BigRational> = BTreeMap::new();
    for ((o, e), c) in &terms {
        if let Some((sign, key)) = key_of(e) {
            let c = if sign > 0 { c.clone() } else { -c.clone() };
            if *o == order {
                *boundary.entry(key.clone()).or_insert_with(BigRational::zero) += &c;
            }
            *all.entry(key).or_insert_with(BigRational::zero) += c;
        }
    }
    all.retain(|_, c| !c.is_zero());
    boundary.retain(|_, c| !c.is_zero());
    (all, boundary)
}

/// Truncation order used by [`residue_mul`] for the given inputs.
pub fn truncation_order(q: &Quiver, g: &LaurentPoly, f2: &CohaElement, gamma1: &DimVector) -> u32 {
    let gamma2 = f2.gamma();
    let deg_g = g
        .terms()
        .map(|(m, _)| m.iter().map(|&(_, k)| k.max(0) as i64).sum::<i64>())
        .max()
        .unwrap_or(0);
    let deg_f2 = f2.poly().degree().unwrap_or(0).max(0);
    let shift: i64 = (0..q.vertex_count())
        .map(|i| k_shift(q, gamma1, i).abs() * gamma2[i] as i64)
        .sum();
    let squares: i64 = (0..q.vertex_count())
        .map(|i| {
            let g = (gamma1[i] + gamma2[i]) as i64;
            g * g
        })
        .sum();
    (deg_g + deg_f2 + shift + squares) as u32
}

fn k_shift(q: &Quiver, gamma1: &DimVector, i: usize) -> i64 {
    q.tails_into(i).iter().map(|&j| gamma1[j] as i64).sum::<i64>() - gamma1[i] as i64
}

/// `f_1 * f_2` with `f_1 = DDelta_{A}(g)` in `H_{gamma1}`, computed by the
/// residue formula with ordered sets `B_i A_i`. The expansion is
/// recomputed two orders higher and must agree.
pub fn residue_mul(
    q: &Quiver,
    g: &LaurentPoly,
    gamma1: &DimVector,
    f2: &CohaElement,
) -> Result<CohaElement, ResidueError> {
    residue_mul_at(q, g, gamma1, f2, truncation_order(q, g, f2, gamma1))
}

/// [`residue_mul`] with an explicit truncation order.
pub fn residue_mul_at(
    q: &Quiver,
    g: &LaurentPoly,
    gamma1: &DimVector,
    f2: &CohaElement,
    order: u32,
) -> Result<CohaElement, ResidueError> {
    let n = q.vertex_count();
    let gamma2 = f2.gamma();
    for d in [gamma1, gamma2] {
        if d.len() != n {
            return Err(CohaError::LengthMismatch {
                expected: n,
                found: d.len(),
            }
            .into());
        }
    }
    let gamma = DimVector((0..n).map(|i| gamma1[i] + gamma2[i]).collect());
    let slots = Slots::new(
        (0..n)
            .map(|i| {
                (1..=gamma2[i])
                    .map(|s| Var::b(i as u32 + 1, s))
                    .chain((1..=gamma1[i]).map(|s| Var::a(i as u32 + 1, s)))
                    .collect()
            })
            .collect(),
    );
    for v in g.variables() {
        if v.kind != VarKind::A || v.j > gamma1[v.i as usize - 1] {
            return Err(ResidueError::UnknownVariable(v));
        }
    }

    // g * prod_i B_i^{k_i} * f2(B)
    let f2b = f2.poly().rename(|v| Var::b(v.i, v.j));
    let mut shift = MPoly::one();
    for i in 0..n {
        let k = k_shift(q, gamma1, i) as i32;
        for s in 1..=gamma2[i] {
            shift = &shift * &MPoly::term(BigRational::one(), vec![(Var::b(i as u32 + 1, s), k)]);
        }
    }
    let numerator = &(g * &shift) * &f2b;
    let base: Vec<(Vec<Vec<i32>>, BigRational)> = numerator
        .terms()
        .map(|(m, c)| Ok((slots.exponents(m)?, c.clone())))
        .collect::<Result<_, ResidueError>>()?;

    // position of a variable inside the ordered set of its vertex
    let b_slot = |i: usize, s: u32| (i, s as usize - 1);
    let a_slot = |i: usize, s: u32| (i, gamma2[i] as usize + s as usize - 1);
    let mut pairs: Vec<Pair> = Vec::new();
    for &(t, h) in q.edges() {
        for bt in 1..=gamma2[t] {
            for ah in 1..=gamma1[h] {
                pairs.push((b_slot(t, bt), a_slot(h, ah)));
            }
            for bh in 1..=gamma2[h] {
                pairs.push((b_slot(t, bt), b_slot(h, bh)));
            }
        }
    }

    let (low, boundary) = expand(&base, &pairs, order);
    if !boundary.is_empty() && !pairs.is_empty() {
        return Err(ResidueError::TruncationTooLow { order });
    }
    if !pairs.is_empty() {
        let (high, _) = expand(&base, &pairs, order + 2);
        if high != low {
            return Err(ResidueError::TruncationTooLow { order });
        }
    }
    let cache = DeltaCache::new(q, &gamma);
    Ok(CohaElement::new(gamma.clone(), evaluate(&cache, &low))?)
}

/// Computes both products and reports whether they agree.
pub fn residue_vs_shuffle(
    q: &Quiver,
    g: &LaurentPoly,
    gamma1: &DimVector,
    f2: &CohaElement,
) -> Result<(CohaElement, CohaElement), ResidueError> {
    let f1 = ddelta_transform(q, gamma1, g)?;
    let residue = residue_mul(q, g, gamma1, f2)?;
    let shuffle = shuffle_mul(q, &f1, f2)?;
    Ok((residue, shuffle))
}

/// Like [`residue_vs_shuffle`] but fails on disagreement.
pub fn checked_residue_mul(
    q: &Quiver,
    g: &LaurentPoly,
    gamma1: &DimVector,
    f2: &CohaElement,
) -> Result<CohaElement, ResidueError> {
    let (residue, shuffle) = residue_vs_shuffle(q, g, gamma1, f2)?;
    if residue != shuffle {
        return Err(ResidueError::Mismatch {
            residue: residue.to_string(),
            shuffle: shuffle.to_string(),
        });
    }
    Ok(residue)
}
