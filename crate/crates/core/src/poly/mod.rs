//! Sparse multivariate Laurent polynomials over the rationals.
//!
//! Variables are `w[i,j]` (Chern root `omega_{i,j}`), `u[k,v]` (`mu_{k,v}`),
//! and the residue variables `a[i,s]`, `b[i,s]`. Negative exponents are
//! allowed so the same type serves the residue calculus; the COHA side only
//! ever produces genuine polynomials.

mod parse;

pub use parse::parse_poly;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomial is not divisible by {a} - {b}")]
    NotDivisible { a: Var, b: Var },
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("negative exponent of {0} where a polynomial is required")]
    NegativeExponent(Var),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKind {
    /// `omega_{i,j}`, printed `w[i,j]`.
    W,
    /// `mu_{u,v}`, printed `u[u,v]`.
    U,
    A,
    B,
}

/// A variable with two 1-based indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub kind: VarKind,
    pub i: u32,
    pub j: u32,
}

impl Var {
    pub fn new(kind: VarKind, i: u32, j: u32) -> Self {
        assert!(i >= 1 && j >= 1, "variable indices are 1-based");
        Var { kind, i, j }
    }

    pub fn w(i: u32, j: u32) -> Self {
        Var::new(VarKind::W, i, j)
    }

    pub fn u(u: u32, v: u32) -> Self {
        Var::new(VarKind::U, u, v)
    }

    pub fn a(i: u32, s: u32) -> Self {
        Var::new(VarKind::A, i, s)
    }

    pub fn b(i: u32, s: u32) -> Self {
        Var::new(VarKind::B, i, s)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            VarKind::W => 'w',
            VarKind::U => 'u',
            VarKind::A => 'a',
            VarKind::B => 'b',
        };
        write!(f, "{c}[{},{}]", self.i, self.j)
    }
}

/// Sorted by variable, no zero exponents.
pub type Monomial = Vec<(Var, i32)>;

fn mono_mul(a: &[(Var, i32)], b: &[(Var, i32)]) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                let e = a[i].1 + b[j].1;
                if e != 0 {
                    out.push((a[i].0, e));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn mono_degree(m: &[(Var, i32)]) -> i64 {
    m.iter().map(|&(_, e)| e as i64).sum()
}

/// Graded order: higher total degree first, then the monomial with the
/// larger exponent at the first differing variable.
fn grlex_desc(a: &[(Var, i32)], b: &[(Var, i32)]) -> Ordering {
    match mono_degree(b).cmp(&mono_degree(a)) {
        Ordering::Equal => {}
        o => return o,
    }
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(&(_, ea)), None) => return if ea > 0 { Ordering::Less } else { Ordering::Greater },
            (None, Some(&(_, eb))) => return if eb > 0 { Ordering::Greater } else { Ordering::Less },
            (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                Ordering::Equal => {
                    if ea != eb {
                        return eb.cmp(&ea);
                    }
                    i += 1;
                    j += 1;
                }
                Ordering::Less => return if ea > 0 { Ordering::Less } else { Ordering::Greater },
                Ordering::Greater => return if eb > 0 { Ordering::Greater } else { Ordering::Less },
            },
        }
    }
}

/// Sparse map from monomials to nonzero rational coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct MPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        MPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        MPoly::term(c, Vec::new())
    }

    pub fn integer(c: i64) -> Self {
        MPoly::constant(BigRational::from_integer(c.into()))
    }

    pub fn var(v: Var) -> Self {
        MPoly::term(BigRational::one(), vec![(v, 1)])
    }

    /// `c * prod v^e`; the monomial need not be sorted.
    pub fn term(c: BigRational, mut mono: Monomial) -> Self {
        let mut p = MPoly::zero();
        if c.is_zero() {
            return p;
        }
        mono.sort_by_key(|&(v, _)| v);
        let mut merged: Monomial = Vec::with_capacity(mono.len());
        for (v, e) in mono {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => merged.push((v, e)),
            }
        }
        merged.retain(|&(_, e)| e != 0);
        p.terms.insert(merged, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Monomial) -> BigRational {
        self.terms.get(mono).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Constant term.
    pub fn constant_term(&self) -> BigRational {
        self.coeff(&Vec::new())
    }

    pub fn add_term(&mut self, mono: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &MPoly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn scale(&self, c: &BigRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut out = MPoly::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Total degree of the highest-degree term; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().map(|m| mono_degree(m)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|m| mono_degree(m));
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// The homogeneous component of degree `d`.
    pub fn homogeneous_part(&self, d: i64) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| mono_degree(m) == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&(_, e)| e > 0))
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.keys().flat_map(|m| m.iter().map(|&(v, _)| v)).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// Applies a variable renaming to every monomial.
    pub fn rename(&self, f: impl Fn(Var) -> Var) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let renamed = MPoly::term(c.clone(), m.iter().map(|&(v, e)| (f(v), e)).collect());
            out.add_assign(&renamed);
        }
        out
    }

    /// Replaces variables by polynomials; variables without an image are
    /// kept. Negative powers may only be substituted by monomials.
    pub fn substitute(&self, map: &BTreeMap<Var, MPoly>) -> Result<MPoly, PolyError> {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(c.clone());
            let mut kept = Vec::new();
            for &(v, e) in m {
                match map.get(&v) {
                    None => kept.push((v, e)),
                    Some(img) if e >= 0 => t = &t * &img.pow(e as u32),
                    Some(img) => {
                        let inv = img.monomial_inverse().ok_or(PolyError::NegativeExponent(v))?;
                        t = &t * &inv.pow((-e) as u32);
                    }
                }
            }
            out.add_assign(&(&t * &MPoly::term(BigRational::one(), kept)));
        }
        Ok(out)
    }

    fn monomial_inverse(&self) -> Option<MPoly> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        Some(MPoly::term(c.recip(), m.iter().map(|&(v, e)| (v, -e)).collect()))
    }

    /// `p(a := b)`.
    pub fn specialize(&self, a: Var, b: Var) -> MPoly {
        self.rename(|v| if v == a { b } else { v })
    }

    /// Swaps two variables.
    pub fn swap(&self, x: Var, y: Var) -> MPoly {
        self.rename(|v| {
            if v == x {
                y
            } else if v == y {
                x
            } else {
                v
            }
        })
    }

    /// Exponent of `v` in `mono`.
    fn exponent(mono: &[(Var, i32)], v: Var) -> i32 {
        mono.iter().find(|&&(w, _)| w == v).map_or(0, |&(_, e)| e)
    }

    /// Splits `p = sum_k p_k v^k` with `p_k` free of `v`.
    fn coefficients_in(&self, v: Var) -> BTreeMap<i32, MPoly> {
        let mut out: BTreeMap<i32, MPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = MPoly::exponent(m, v);
            let rest: Monomial = m.iter().copied().filter(|&(w, _)| w != v).collect();
            out.entry(e).or_default().add_term(rest, c.clone());
        }
        out
    }

    /// Multiplies by `v^k`.
    fn times_var(&self, v: Var, k: i32) -> MPoly {
        if k == 0 {
            return self.clone();
        }
        let vk = [(v, k)];
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (mono_mul(m, &vk), c.clone()))
                .collect(),
        }
    }

    pub fn to_integer_coeffs(&self) -> Option<BTreeMap<Monomial, BigInt>> {
        self.terms
            .iter()
            .map(|(m, c)| c.is_integer().then(|| (m.clone(), c.to_integer())))
            .collect()
    }
}

/// The quotient `p / (a - b)`, which must be exact.
pub fn exact_div_linear(p: &MPoly, a: Var, b: Var) -> Result<MPoly, PolyError> {
    if a == b || !p.specialize(a, b).is_zero() {
        return Err(PolyError::NotDivisible { a, b });
    }
    let parts = p.coefficients_in(a);
    if parts.keys().next().is_some_and(|&k| k < 0) {
        return Err(PolyError::NegativeExponent(a));
    }
    let Some(&top) = parts.keys().next_back() else {
        return Ok(MPoly::zero());
    };
    // p_k = q_{k-1} - b q_k, from the top down
    let bvar = MPoly::var(b);
    let mut quotient = MPoly::zero();
    let mut q_k = MPoly::zero();
    for k in (1..=top).rev() {
        let p_k = parts.get(&k).cloned().unwrap_or_default();
        let q_prev = &p_k + &(&bvar * &q_k);
        quotient.add_assign(&q_prev.times_var(a, k - 1));
        q_k = q_prev;
    }
    let p0 = parts.get(&0).cloned().unwrap_or_default();
    if !(&p0 + &(&bvar * &q_k)).is_zero() {
        return Err(PolyError::NotDivisible { a, b });
    }
    Ok(quotient)
}

/// True iff `p` is fixed by every adjacent transposition `w[i,j] <-> w[i,j+1]`
/// within the blocks of sizes `signature`.
pub fn symmetrize_check(p: &MPoly, signature: &[u32]) -> bool {
    for (i, &g) in signature.iter().enumerate() {
        for j in 1..g {
            let x = Var::w(i as u32 + 1, j);
            let y = Var::w(i as u32 + 1, j + 1);
            if &p.swap(x, y) != p {
                return false;
            }
        }
    }
    true
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let (mut big, small) = if self.len() >= rhs.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        big.add_assign(small);
        big
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        out
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Monomial, &BigRational)> = self.terms.iter().collect();
        terms.sort_by(|x, y| grlex_desc(x.0, y.0));
        for (idx, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let a = c.abs();
            let mut parts: Vec<String> = Vec::new();
            if !a.is_one() || m.is_empty() {
                parts.push(a.to_string());
            }
            for &(v, e) in m {
                parts.push(if e == 1 { v.to_string() } else { format!("{v}^{e}") });
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}
