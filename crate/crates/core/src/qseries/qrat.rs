use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{QTruncSeries, UPoly};

/// Rational function in `s = q^{1/2}`, kept reduced with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QRat {
    num: UPoly,
    den: UPoly,
}

impl QRat {
    /// Reduces `num / den`. Panics if `den` is zero.
    pub fn new(num: UPoly, den: UPoly) -> Self {
        assert!(!den.is_zero(), "QRat with zero denominator");
        if num.is_zero() {
            return QRat::zero();
        }
        let g = UPoly::gcd(&num, &den);
        let (mut n, _) = num.div_rem(&g);
        let (mut d, _) = den.div_rem(&g);
        let lead = d.leading().unwrap().recip();
        n = n.scale(&lead);
        d = d.scale(&lead);
        QRat { num: n, den: d }
    }

    pub fn zero() -> Self {
        QRat {
            num: UPoly::zero(),
            den: UPoly::one(),
        }
    }

    pub fn one() -> Self {
        QRat::from_poly(UPoly::one())
    }

    pub fn from_poly(p: UPoly) -> Self {
        QRat {
            num: p,
            den: UPoly::one(),
        }
    }

    pub fn from_integer(c: i64) -> Self {
        QRat::from_poly(UPoly::constant(BigRational::from_integer(c.into())))
    }

    /// `c * s^k`, `k` of either sign.
    pub fn s_pow(c: BigRational, k: i64) -> Self {
        if k >= 0 {
            QRat::from_poly(UPoly::monomial(c, k as usize))
        } else {
            QRat::new(UPoly::constant(c), UPoly::monomial(BigRational::one(), (-k) as usize))
        }
    }

    /// `1 / prod_{j=1}^n (1 - q^j)`.
    pub fn f(n: u32) -> Self {
        let mut den = UPoly::one();
        for j in 1..=n as usize {
            let factor = &UPoly::one() - &UPoly::monomial(BigRational::one(), 2 * j);
            den = &den * &factor;
        }
        QRat::new(UPoly::one(), den)
    }

    pub fn numer(&self) -> &UPoly {
        &self.num
    }

    pub fn denom(&self) -> &UPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        QRat::new(self.den.clone(), self.num.clone())
    }

    /// Laurent expansion in `s` up to and including `s^prec`.
    pub fn to_series(&self, prec: i64) -> QTruncSeries {
        let v = self.den.valuation().unwrap();
        let d: Vec<BigRational> = self.den.coeffs()[v..].to_vec();
        let n = &self.num;
        // num / d as a power series in s, then shift by -v
        let count = (prec + v as i64 + 1).max(0) as usize;
        let inv0 = d[0].recip();
        let mut out: Vec<BigRational> = Vec::with_capacity(count);
        for k in 0..count {
            let mut acc = n.coeff(k);
            for j in 1..d.len().min(k + 1) {
                acc -= &d[j] * &out[k - j];
            }
            out.push(acc * &inv0);
        }
        QTruncSeries::from_coeffs(-(v as i64), out, prec)
    }
}

impl Add for &QRat {
    type Output = QRat;
    fn add(self, rhs: &QRat) -> QRat {
        if self.den == rhs.den {
            return QRat::new(&self.num + &rhs.num, self.den.clone());
        }
        QRat::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &QRat {
    type Output = QRat;
    fn sub(self, rhs: &QRat) -> QRat {
        self + &(-rhs)
    }
}

impl Neg for &QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        QRat {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &QRat {
    type Output = QRat;
    fn mul(self, rhs: &QRat) -> QRat {
        if self.is_zero() || rhs.is_zero() {
            return QRat::zero();
        }
        QRat::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for &QRat {
    type Output = QRat;
    fn div(self, rhs: &QRat) -> QRat {
        self * &rhs.recip()
    }
}

impl Default for QRat {
    fn default() -> Self {
        QRat::zero()
    }
}

impl fmt::Debug for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == UPoly::one() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl Zero for QRat {
    fn zero() -> Self {
        QRat::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl Add for QRat {
    type Output = QRat;
    fn add(self, rhs: QRat) -> QRat {
        &self + &rhs
    }
}

impl One for QRat {
    fn one() -> Self {
        QRat::one()
    }
}

impl Mul for QRat {
    type Output = QRat;
    fn mul(self, rhs: QRat) -> QRat {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    fn poly(c: &[i64]) -> UPoly {
        UPoly::from_coeffs(c.iter().map(|&x| r(x)).collect())
    }

    #[test]
    fn reduces_to_canonical_form() {
        // (s^2 - 1) / (2s - 2) = (s + 1)/2
        let x = QRat::new(poly(&[-1, 0, 1]), poly(&[-2, 2]));
        assert_eq!(x.denom(), &UPoly::one());
        assert_eq!(x.numer(), &poly(&[1, 1]).scale(&BigRational::new(1.into(), 2.into())));
        assert_eq!(&QRat::s_pow(r(1), -1) * &QRat::s_pow(r(1), 1), QRat::one());
    }

    #[test]
    fn geometric_identity_exact() {
        // 1/(1-q) + q/(1-q)^2 = 1/(1-q)^2
        let f1 = QRat::f(1);
        let q = QRat::s_pow(r(1), 2);
        assert_eq!(&f1 + &(&q * &(&f1 * &f1)), &f1 * &f1);
    }

    #[test]
    fn series_of_negative_powers() {
        let x = &QRat::s_pow(r(3), -2) + &QRat::f(1);
        let s = x.to_series(6);
        assert_eq!(s.coeff(-2), r(3));
        assert_eq!(s.coeff(-1), r(0));
        assert_eq!(s.coeff(0), r(1));
        assert_eq!(s.coeff(1), r(0));
        assert_eq!(s.coeff(6), r(1));
    }

    fn small_poly() -> impl Strategy<Value = UPoly> {
        proptest::collection::vec(-3i64..=3, 0..4).prop_map(|c| poly(&c))
    }

    proptest! {
        #[test]
        fn mul_div_roundtrip(a in small_poly(), b in small_poly(), c in small_poly(), d in small_poly()) {
            prop_assume!(!b.is_zero() && !c.is_zero() && !d.is_zero());
            let x = QRat::new(a, b);
            let y = QRat::new(c, d);
            prop_assert_eq!(&(&x * &y) / &y, x.clone());
            prop_assert_eq!(&(&x + &y) - &y, x);
        }
    }
}
