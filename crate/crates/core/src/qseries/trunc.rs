use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Laurent series in `s = q^{1/2}` known exactly up to and including
/// `s^prec`. Coefficients above `prec` are never stored or consulted.
#[derive(Clone)]
pub struct QTruncSeries {
    lo: i64,
    coeffs: Vec<BigRational>,
    prec: i64,
}

impl QTruncSeries {
    /// Coefficient of `s^(lo + k)` is `coeffs[k]`; entries past `prec` are
    /// dropped.
    pub fn from_coeffs(lo: i64, mut coeffs: Vec<BigRational>, prec: i64) -> Self {
        let keep = (prec - lo + 1).max(0) as usize;
        coeffs.truncate(keep);
        let mut s = QTruncSeries { lo, coeffs, prec };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                self.coeffs.clear();
                self.lo = 0;
            }
            Some(k) if k > 0 => {
                self.coeffs.drain(..k);
                self.lo += k as i64;
            }
            _ => {}
        }
    }

    pub fn zero(prec: i64) -> Self {
        QTruncSeries {
            lo: 0,
            coeffs: Vec::new(),
            prec,
        }
    }

    pub fn one(prec: i64) -> Self {
        QTruncSeries::s_pow(BigRational::one(), 0, prec)
    }

    /// `c * s^k` known to precision `prec`.
    pub fn s_pow(c: BigRational, k: i64, prec: i64) -> Self {
        QTruncSeries::from_coeffs(k, vec![c], prec)
    }

    /// `f_n = 1 / prod_{j=1}^n (1 - q^j)` to order `q^k`.
    pub fn f(n: u32, k: u32) -> Self {
        let prec = 2 * k as usize;
        let mut c = vec![BigRational::zero(); prec + 1];
        c[0] = BigRational::one();
        for j in 1..=n as usize {
            // multiply by 1/(1 - s^{2j})
            for e in 2 * j..=prec {
                let v = c[e - 2 * j].clone();
                c[e] += v;
            }
        }
        QTruncSeries::from_coeffs(0, c, prec as i64)
    }

    /// Highest exponent of `s` that is known.
    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.lo)
    }

    pub fn coeff(&self, k: i64) -> BigRational {
        assert!(k <= self.prec, "coefficient s^{k} beyond precision {}", self.prec);
        if k < self.lo {
            return BigRational::zero();
        }
        self.coeffs
            .get((k - self.lo) as usize)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Nonzero terms `(exponent of s, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (self.lo + k as i64, c))
    }

    pub fn truncate(&self, prec: i64) -> Self {
        let prec = prec.min(self.prec);
        QTruncSeries::from_coeffs(self.lo, self.coeffs.clone(), prec)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        QTruncSeries::from_coeffs(self.lo, self.coeffs.iter().map(|x| x * c).collect(), self.prec)
    }

    /// Equality of all coefficients up to the smaller of the two precisions.
    pub fn agrees_with(&self, other: &QTruncSeries) -> bool {
        (self - other).is_zero()
    }
}

impl PartialEq for QTruncSeries {
    fn eq(&self, other: &Self) -> bool {
        self.prec == other.prec && self.lo == other.lo && self.coeffs == other.coeffs
    }
}

impl Eq for QTruncSeries {}

impl Add for &QTruncSeries {
    type Output = QTruncSeries;
    fn add(self, rhs: &QTruncSeries) -> QTruncSeries {
        let prec = self.prec.min(rhs.prec);
        if self.is_zero() {
            return rhs.truncate(prec);
        }
        if rhs.is_zero() {
            return self.truncate(prec);
        }
        let lo = self.lo.min(rhs.lo);
        if prec < lo {
            return QTruncSeries::zero(prec);
        }
        let mut c = vec![BigRational::zero(); (prec - lo + 1) as usize];
        for s in [self, rhs] {
            for (k, x) in s.coeffs.iter().enumerate() {
                let e = s.lo + k as i64;
                if e > prec {
                    break;
                }
                c[(e - lo) as usize] += x;
            }
        }
        QTruncSeries::from_coeffs(lo, c, prec)
    }
}

impl Neg for &QTruncSeries {
    type Output = QTruncSeries;
    fn neg(self) -> QTruncSeries {
        QTruncSeries {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            prec: self.prec,
        }
    }
}

impl Sub for &QTruncSeries {
    type Output = QTruncSeries;
    fn sub(self, rhs: &QTruncSeries) -> QTruncSeries {
        self + &(-rhs)
    }
}

impl Mul for &QTruncSeries {
    type Output = QTruncSeries;
    fn mul(self, rhs: &QTruncSeries) -> QTruncSeries {
        // an unknown coefficient of one factor first matters at its precision
        // plus the valuation of the other
        let prec = match (self.valuation(), rhs.valuation()) {
            (Some(va), Some(vb)) => (self.prec + vb).min(rhs.prec + va),
            (None, Some(vb)) => self.prec + vb,
            (Some(va), None) => rhs.prec + va,
            (None, None) => self.prec.min(rhs.prec),
        };
        if self.is_zero() || rhs.is_zero() {
            return QTruncSeries::zero(prec);
        }
        let lo = self.lo + rhs.lo;
        if prec < lo {
            return QTruncSeries::zero(prec);
        }
        let len = (prec - lo + 1) as usize;
        let mut c = vec![BigRational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        QTruncSeries::from_coeffs(lo, c, prec)
    }
}

impl fmt::Debug for QTruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for QTruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(i64, BigRational)> = self.terms().map(|(k, c)| (k, c.clone())).collect();
        if terms.is_empty() {
            write!(f, "0")?;
        } else {
            super::write_q_terms(f, &terms)?;
        }
        write!(f, " + O({})", super::q_power(self.prec + 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    /// Partitions of `m` into parts of size at most `n`.
    fn partitions(m: usize, n: usize) -> i64 {
        if m == 0 {
            return 1;
        }
        if n == 0 {
            return 0;
        }
        (1..=n.min(m)).map(|p| partitions(m - p, p)).sum()
    }

    #[test]
    fn f_series_counts_partitions() {
        assert_eq!(QTruncSeries::f(0, 10), QTruncSeries::one(20));
        let f1 = QTruncSeries::f(1, 10);
        for k in 0..10 {
            assert_eq!(f1.coeff(2 * k), r(1));
            assert_eq!(f1.coeff(2 * k + 1), r(0));
        }
        assert_eq!(QTruncSeries::f(2, 10).coeff(8), r(3));
        for n in 0..5 {
            let f = QTruncSeries::f(n, 15);
            for m in 0..=15 {
                assert_eq!(f.coeff(2 * m as i64), r(partitions(m, n as usize)));
            }
        }
    }

    #[test]
    fn precision_of_products() {
        let a = QTruncSeries::s_pow(r(1), -3, 10);
        let b = QTruncSeries::f(1, 5);
        let p = &a * &b;
        assert_eq!(p.prec(), 7);
        assert_eq!(p.coeff(-3), r(1));
        // s^4 is only known to s^10
        let c = &QTruncSeries::s_pow(r(1), 4, 10) * &b;
        assert_eq!(c.prec(), 10);
        let d = &QTruncSeries::s_pow(r(1), 4, 30) * &b;
        assert_eq!(d.prec(), 14);
    }

    #[test]
    fn truncation_is_a_homomorphism() {
        let x = &QTruncSeries::f(3, 12) + &QTruncSeries::s_pow(r(-2), -1, 24);
        let y = &QTruncSeries::f(2, 12) - &QTruncSeries::s_pow(r(5), 3, 24);
        let part = &x.truncate(14) * &y.truncate(14);
        // the s^-1 term of x costs one order
        assert_eq!(part.prec(), 13);
        assert_eq!((&x * &y).truncate(part.prec()), part);
    }
}
