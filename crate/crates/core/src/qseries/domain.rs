use num_rational::BigRational;

use super::{QRat, QTruncSeries};

/// A coefficient ring for q-series identities: either exact rational
/// functions or series truncated at a fixed precision.
pub trait QDomain: Sync {
    type Elem: Clone + Send + Sync + std::fmt::Display;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    /// `c * s^k`.
    fn s_pow(&self, c: BigRational, k: i64) -> Self::Elem;
    /// `f_n = 1 / prod_{j<=n} (1 - q^j)`.
    fn f(&self, n: u32) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.is_zero(&self.add(a, &self.neg(b)))
    }
}

/// Exact rational functions in `q^{1/2}`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Exact;

impl QDomain for Exact {
    type Elem = QRat;

    fn zero(&self) -> QRat {
        QRat::zero()
    }
    fn one(&self) -> QRat {
        QRat::one()
    }
    fn s_pow(&self, c: BigRational, k: i64) -> QRat {
        QRat::s_pow(c, k)
    }
    fn f(&self, n: u32) -> QRat {
        QRat::f(n)
    }
    fn add(&self, a: &QRat, b: &QRat) -> QRat {
        a + b
    }
    fn mul(&self, a: &QRat, b: &QRat) -> QRat {
        a * b
    }
    fn neg(&self, a: &QRat) -> QRat {
        -a
    }
    fn is_zero(&self, a: &QRat) -> bool {
        a.is_zero()
    }
}

/// Series known to order `q^k`, i.e. up to `s^{2k}`.
#[derive(Clone, Copy, Debug)]
pub struct Truncated {
    k: u32,
}

impl Truncated {
    pub fn new(k: u32) -> Self {
        Truncated { k }
    }

    pub fn precision(&self) -> u32 {
        self.k
    }

    fn prec(&self) -> i64 {
        2 * self.k as i64
    }
}

impl QDomain for Truncated {
    type Elem = QTruncSeries;

    fn zero(&self) -> QTruncSeries {
        QTruncSeries::zero(self.prec())
    }
    fn one(&self) -> QTruncSeries {
        QTruncSeries::one(self.prec())
    }
    fn s_pow(&self, c: BigRational, k: i64) -> QTruncSeries {
        QTruncSeries::s_pow(c, k, self.prec())
    }
    fn f(&self, n: u32) -> QTruncSeries {
        QTruncSeries::f(n, self.k)
    }
    // products are cut back to the working precision so that negative
    // powers of s do not erode it
    fn add(&self, a: &QTruncSeries, b: &QTruncSeries) -> QTruncSeries {
        (a + b).truncate(self.prec())
    }
    fn mul(&self, a: &QTruncSeries, b: &QTruncSeries) -> QTruncSeries {
        (a * b).truncate(self.prec())
    }
    fn neg(&self, a: &QTruncSeries) -> QTruncSeries {
        -a
    }
    fn is_zero(&self, a: &QTruncSeries) -> bool {
        a.is_zero()
    }
}
