//! Exact arithmetic in `s = q^{1/2}`: polynomials, rational functions and
//! truncated Laurent series, plus the Betti-number identities built on
//! `f_n = 1 / prod_{j<=n} (1 - q^j)`.

mod domain;
mod qrat;
mod trunc;
mod upoly;

pub use domain::{Exact, QDomain, Truncated};
pub use qrat::QRat;
pub use trunc::QTruncSeries;
pub use upoly::UPoly;

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};
use rayon::prelude::*;
use thiserror::Error;

use crate::modrep::{QuiverContext, RepError};
use crate::quiver::DimVector;

/// Precision used when the caller does not choose one.
pub const DEFAULT_PRECISION: u32 = 30;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QSeriesError {
    #[error("f_{{n-1}} is undefined for n = 0")]
    DegenerateIndex,
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// `q^{k/2}` rendered with integer or half-integer exponent.
pub(crate) fn q_power(k: i64) -> String {
    match k {
        0 => "1".into(),
        2 => "q".into(),
        k if k % 2 == 0 => format!("q^{}", k / 2),
        k => format!("q^({}/2)", k),
    }
}

/// Writes `c0 + c1 q + ...` for `(exponent of s, coefficient)` terms.
pub(crate) fn write_q_terms(f: &mut fmt::Formatter<'_>, terms: &[(i64, BigRational)]) -> fmt::Result {
    for (idx, (k, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if idx == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        if *k == 0 {
            write!(f, "{a}")?;
        } else if a.is_one() {
            write!(f, "{}", q_power(*k))?;
        } else {
            write!(f, "{a} {}", q_power(*k))?;
        }
    }
    Ok(())
}

/// `f_n` to order `q^k`.
pub fn f_series(n: u32, k: u32) -> QTruncSeries {
    QTruncSeries::f(n, k)
}

/// Checks `f_{n-1} + q^n f_n = f_n` to order `q^k`.
pub fn gl_betti_identity_check(n: u32, k: u32) -> Result<bool, QSeriesError> {
    if n == 0 {
        return Err(QSeriesError::DegenerateIndex);
    }
    let fn_ = f_series(n, k);
    let qn = QTruncSeries::s_pow(BigRational::one(), 2 * n as i64, 2 * k as i64);
    let lhs = &f_series(n - 1, k) + &(&qn * &fn_);
    Ok(lhs.truncate(2 * k as i64).agrees_with(&fn_))
}

/// Both sides of `sum_m q^{codim eta_m} prod_u f_{m_u} = prod_i f_{gamma(i)}`
/// in the given coefficient domain.
pub fn kazarian_sides<D: QDomain>(
    ctx: &QuiverContext,
    gamma: &DimVector,
    dom: &D,
) -> Result<(D::Elem, D::Elem), QSeriesError> {
    let orbits = ctx.orbits_for(gamma)?;
    let terms = orbits
        .par_iter()
        .map(|m| {
            let codim = ctx.codim(m)?;
            let mut t = dom.s_pow(BigRational::one(), 2 * codim as i64);
            for &mu in m.entries() {
                if mu > 0 {
                    t = dom.mul(&t, &dom.f(mu));
                }
            }
            Ok(t)
        })
        .collect::<Result<Vec<_>, RepError>>()?;
    let lhs = terms.iter().fold(dom.zero(), |acc, t| dom.add(&acc, t));
    let rhs = gamma
        .entries()
        .iter()
        .fold(dom.one(), |acc, &g| dom.mul(&acc, &dom.f(g)));
    Ok((lhs, rhs))
}

/// The Betti identity for `gamma` checked to order `q^k` with truncated series.
pub fn kazarian_betti_check(ctx: &QuiverContext, gamma: &DimVector, k: u32) -> Result<bool, QSeriesError> {
    let dom = Truncated::new(k);
    let (l, r) = kazarian_sides(ctx, gamma, &dom)?;
    Ok(dom.eq(&l, &r))
}

/// The Betti identity for `gamma` as an equality of rational functions.
pub fn kazarian_betti_check_exact(ctx: &QuiverContext, gamma: &DimVector) -> Result<bool, QSeriesError> {
    let (l, r) = kazarian_sides(ctx, gamma, &Exact)?;
    Ok(l == r)
}

#[cfg(test)]
mod tests {
    use super::*;
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

    #[test]
    fn gl_identity() {
        assert!(gl_betti_identity_check(1, 10).unwrap());
        for n in 2..=6 {
            assert!(gl_betti_identity_check(n, 20).unwrap(), "n = {n}");
        }
        assert_eq!(gl_betti_identity_check(0, 5), Err(QSeriesError::DegenerateIndex));
    }

    #[test]
    fn printing() {
        let x = QRat::f(1).to_series(6);
        assert_eq!(x.to_string(), "1 + q + q^2 + q^3 + O(q^(7/2))");
        let y = &QRat::s_pow(BigRational::from_integer((-2).into()), 1) + &QRat::one();
        assert_eq!(y.to_string(), "1 - 2 q^(1/2)");
    }

    #[test]
    fn a2_betti_both_paths() {
        let c = ctx(2, &[[2, 1]]);
        let g = DimVector(vec![1, 1]);
        assert!(kazarian_betti_check(&c, &g, 20).unwrap());
        assert!(kazarian_betti_check_exact(&c, &g).unwrap());
        let (l, _) = kazarian_sides(&c, &g, &Exact).unwrap();
        let q = QRat::s_pow(BigRational::one(), 2);
        assert_eq!(l, &QRat::f(1) + &(&q * &(&QRat::f(1) * &QRat::f(1))));
        assert!(kazarian_betti_check(&c, &DimVector(vec![0, 1]), 10).unwrap());
    }

    #[test]
    fn a3_betti() {
        let c = ctx(3, &[[2, 1], [3, 2]]);
        assert!(kazarian_betti_check(&c, &DimVector(vec![1, 1, 1]), 25).unwrap());
        assert!(kazarian_betti_check_exact(&c, &DimVector(vec![2, 1, 1])).unwrap());
    }
}
