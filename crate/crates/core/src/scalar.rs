//! Exact scalar arithmetic in the rational function field Q(q).
//!
//! [`QPoly`] is a dense univariate polynomial in the deformation parameter
//! `q` with rational coefficients; [`QRat`] is a quotient of two such
//! polynomials kept in lowest terms with a monic denominator. All arithmetic
//! is exact and equality is decidable.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A polynomial in `q` over the rationals, stored dense in ascending degree
/// with no trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::constant(big(1))
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = QPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    /// The monomial `q^k`, `k >= 0`.
    pub fn q_pow(k: u32) -> Self {
        let mut coeffs = vec![BigRational::zero(); k as usize + 1];
        coeffs[k as usize] = BigRational::one();
        QPoly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = QPoly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Coefficient of `q^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// True when the polynomial is `c * q^k` for a single `k`.
    pub fn as_monomial(&self) -> Option<(BigRational, usize)> {
        let nonzero: Vec<usize> = (0..self.coeffs.len())
            .filter(|&i| !self.coeffs[i].is_zero())
            .collect();
        match nonzero.as_slice() {
            [k] => Some((self.coeffs[*k].clone(), *k)),
            _ => None,
        }
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + other.coeff(i));
        }
        QPoly::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(coeffs)
    }

    pub fn scale(&self, s: &BigRational) -> QPoly {
        QPoly::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Euclidean division: returns `(quot, rem)` with `self = quot*div + rem`.
    pub fn div_rem(&self, div: &QPoly) -> (QPoly, QPoly) {
        assert!(!div.is_zero(), "division of QPoly by zero");
        let dd = div.degree().unwrap();
        let lead = div.leading().unwrap().clone();
        let mut rem = self.clone();
        let mut quot = vec![BigRational::zero(); self.coeffs.len()];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let factor = rem.leading().unwrap() / &lead;
            let shift = rd - dd;
            quot[shift] = factor.clone();
            let mut sub = vec![BigRational::zero(); shift];
            sub.extend(div.coeffs.iter().map(|c| c * &factor));
            rem = rem.sub(&QPoly::from_coeffs(sub));
        }
        (QPoly::from_coeffs(quot), rem)
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.make_monic()
        }
    }

    fn make_monic(&self) -> QPoly {
        match self.leading() {
            None => QPoly::zero(),
            Some(l) => self.scale(&(BigRational::one() / l)),
        }
    }

    /// Evaluate at a floating point `q` by Horner's rule.
    pub fn eval_f64(&self, q: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * q + rational_to_f64(c);
        }
        acc
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, q: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * q + c;
        }
        acc
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    let n = r.numer();
    let d = r.denom();
    // BigInt -> f64 keeps 52 bits; all coefficients in this crate stay tiny.
    let nf = n.to_string().parse::<f64>().unwrap_or(f64::NAN);
    let df = d.to_string().parse::<f64>().unwrap_or(f64::NAN);
    nf / df
}

fn rational_str(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QPoly {
    /// Ascending-degree form without spaces, e.g. `1-q^2+3q^4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let coeff_part = if mag.is_one() && k > 0 {
                String::new()
            } else {
                rational_str(&mag)
            };
            let q_part = match k {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{}", k),
            };
            write!(f, "{}{}", coeff_part, q_part)?;
        }
        Ok(())
    }
}

/// An exact element of Q(q): `num/den` in lowest terms, `den` monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QRat {
    num: QPoly,
    den: QPoly,
}

impl QRat {
    pub fn zero() -> Self {
        QRat {
            num: QPoly::zero(),
            den: QPoly::one(),
        }
    }

    pub fn one() -> Self {
        QRat::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        QRat {
            num: QPoly::constant(big(n)),
            den: QPoly::one(),
        }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        QRat {
            num: QPoly::constant(big(n) / big(d)),
            den: QPoly::one(),
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        QRat {
            num: QPoly::constant(r),
            den: QPoly::one(),
        }
    }

    /// The Laurent monomial `q^k` for any integer `k`.
    pub fn q_pow(k: i64) -> Self {
        if k >= 0 {
            QRat {
                num: QPoly::q_pow(k as u32),
                den: QPoly::one(),
            }
        } else {
            QRat {
                num: QPoly::one(),
                den: QPoly::q_pow((-k) as u32),
            }
        }
    }

    pub fn from_parts(num: QPoly, den: QPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator in QRat");
        let mut r = QRat { num, den };
        r.reduce();
        r
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = QPoly::one();
            return;
        }
        let g = self.num.gcd(&self.den);
        if g.degree() != Some(0) {
            self.num = self.num.div_rem(&g).0;
            self.den = self.den.div_rem(&g).0;
        }
        // force the denominator monic
        let lead = self.den.leading().unwrap().clone();
        if !lead.is_one() {
            let inv = BigRational::one() / lead;
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    pub fn numerator(&self) -> &QPoly {
        &self.num
    }

    pub fn denominator(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self == &QRat::one()
    }

    /// Multiplicative inverse; panics on zero (callers check first).
    pub fn inv(&self) -> QRat {
        assert!(!self.is_zero(), "inverse of zero in Q(q)");
        QRat::from_parts(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, k: i64) -> QRat {
        if k < 0 {
            return self.inv().pow(-k);
        }
        let mut acc = QRat::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Numeric value at `q`; the denominator never vanishes on (0,1) for the
    /// scalars produced here, callers pick q in that range.
    pub fn eval_f64(&self, q: f64) -> f64 {
        self.num.eval_f64(q) / self.den.eval_f64(q)
    }

    pub fn eval_rational(&self, q: &BigRational) -> Option<BigRational> {
        let d = self.den.eval_rational(q);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval_rational(q) / d)
        }
    }

    /// True when the printed form starts with a minus sign; used by the
    /// canonical polynomial printer to fold `+ -x` into `- x`.
    pub fn display_is_negative(&self) -> bool {
        self.to_string().starts_with('-')
    }

    /// Canonical text with the leading minus stripped.
    pub fn display_magnitude(&self) -> String {
        let s = self.to_string();
        match s.strip_prefix('-') {
            Some(rest) => rest.to_string(),
            None => s,
        }
    }
}

impl fmt::Display for QRat {
    /// Canonical scalar text: Laurent monomials print bare (`q^-1`, `2q^3`,
    /// `-1/2`, `(3/2)q`), everything else as `(num)/(den)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if let (Some((cn, kn)), Some((cd, kd))) = (self.num.as_monomial(), self.den.as_monomial()) {
            // cd is 1 because the denominator is monic
            debug_assert!(cd.is_one());
            let k = kn as i64 - kd as i64;
            let c = cn;
            let neg = c.is_negative();
            let mag = c.abs();
            let q_part = match k {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{}", k),
            };
            let coeff_part = if mag.is_one() && k != 0 {
                String::new()
            } else if mag.denom().is_one() || k == 0 {
                rational_str(&mag)
            } else {
                format!("({})", rational_str(&mag))
            };
            write!(f, "{}{}{}", if neg { "-" } else { "" }, coeff_part, q_part)
        } else if self.den.degree() == Some(0) {
            debug_assert!(self.den.leading().unwrap().is_one());
            write!(f, "({})", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Add for &QRat {
    type Output = QRat;
    fn add(self, rhs: &QRat) -> QRat {
        QRat::from_parts(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl Sub for &QRat {
    type Output = QRat;
    fn sub(self, rhs: &QRat) -> QRat {
        self + &(-rhs)
    }
}

impl Mul for &QRat {
    type Output = QRat;
    fn mul(self, rhs: &QRat) -> QRat {
        QRat::from_parts(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl Div for &QRat {
    type Output = QRat;
    fn div(self, rhs: &QRat) -> QRat {
        self * &rhs.inv()
    }
}

impl Neg for &QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        QRat {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> QRat {
        QRat::q_pow(1)
    }

    #[test]
    fn field_arithmetic_is_exact() {
        // (1 - q^2)/(1 + q) reduces to 1 - q
        let num = QPoly::from_coeffs(vec![big(1), big(0), big(-1)]);
        let den = QPoly::from_coeffs(vec![big(1), big(1)]);
        let r = QRat::from_parts(num, den);
        let expect = &QRat::one() - &q();
        assert_eq!(r, expect);
    }

    #[test]
    fn inverse_round_trip() {
        let r = &(&QRat::one() - &q().pow(2)) * &QRat::q_pow(-3);
        assert_eq!(&r * &r.inv(), QRat::one());
    }

    #[test]
    fn add_mul_distribute() {
        let a = QRat::from_parts(
            QPoly::from_coeffs(vec![big(1), big(2)]),
            QPoly::from_coeffs(vec![big(1), big(0), big(3)]),
        );
        let b = QRat::q_pow(-2);
        let c = &QRat::from_int(5) - &q();
        let lhs = &a * &(&b + &c);
        let rhs = &(&a * &b) + &(&a * &c);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn canonical_text() {
        assert_eq!(QRat::q_pow(-1).to_string(), "q^-1");
        assert_eq!(QRat::q_pow(1).to_string(), "q");
        assert_eq!(QRat::from_int(-2).to_string(), "-2");
        assert_eq!((&QRat::from_int(2) * &QRat::q_pow(3)).to_string(), "2q^3");
        assert_eq!(
            (&QRat::from_ratio(3, 2) * &QRat::q_pow(1)).to_string(),
            "(3/2)q"
        );
        let r = &QRat::one() - &q().pow(2);
        assert_eq!(r.to_string(), "(1-q^2)");
        // (1-q^2)/(1+q^3) reduces by the common factor 1+q
        let s = &r / &(&QRat::one() + &q().pow(3));
        assert_eq!(s.to_string(), "(1-q)/(1-q+q^2)");
    }

    #[test]
    fn eval_matches_exact() {
        let r = &(&QRat::one() - &q().pow(2)) * &QRat::q_pow(-1);
        let v = r.eval_f64(0.5);
        assert!((v - (1.0 - 0.25) / 0.5).abs() < 1e-15);
        let ex = r
            .eval_rational(&BigRational::new(BigInt::from(1), BigInt::from(2)))
            .unwrap();
        assert_eq!(ex, BigRational::new(BigInt::from(3), BigInt::from(2)));
    }

    #[test]
    fn denominator_stays_monic_and_reduced() {
        // (2q + 2)/(4q) -> num (1/2)(1+q) ... den q, gcd 1
        let r = QRat::from_parts(
            QPoly::from_coeffs(vec![big(2), big(2)]),
            QPoly::from_coeffs(vec![big(0), big(4)]),
        );
        assert!(r.denominator().leading().unwrap().is_one());
        assert_eq!(r.denominator(), &QPoly::q_pow(1));
        let g = r.numerator().gcd(r.denominator());
        assert_eq!(g.degree(), Some(0));
    }
}
