//! Exact Gaussian-rational scalars and rational root helpers.
//!
//! All symbolic coefficients in this crate are complex numbers whose real and
//! imaginary parts are arbitrary-precision rationals. Floating point enters
//! only at evaluation time and in the numeric kernels downstream.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Complex number with exact rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ComplexScalar {
    pub re: BigRational,
    pub im: BigRational,
}

impl ComplexScalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ComplexScalar { re, im }
    }

    pub fn zero() -> Self {
        ComplexScalar {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        ComplexScalar {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    pub fn i() -> Self {
        ComplexScalar {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn from_rational(re: BigRational) -> Self {
        ComplexScalar {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// Exact rational `p/q`.
    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        ComplexScalar {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// Squared modulus, exact.
    pub fn abs2(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Modulus in binary64.
    pub fn abs_f64(&self) -> f64 {
        rational_to_f64(&self.abs2()).sqrt()
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Self {
        let n = self.abs2();
        assert!(!n.is_zero(), "division by zero ComplexScalar");
        ComplexScalar {
            re: &self.re / &n,
            im: -&self.im / &n,
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        ComplexScalar {
            re: &self.re * r,
            im: &self.im * r,
        }
    }
}

impl Add for &ComplexScalar {
    type Output = ComplexScalar;
    fn add(self, rhs: &ComplexScalar) -> ComplexScalar {
        ComplexScalar {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &ComplexScalar {
    type Output = ComplexScalar;
    fn sub(self, rhs: &ComplexScalar) -> ComplexScalar {
        ComplexScalar {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &ComplexScalar {
    type Output = ComplexScalar;
    fn mul(self, rhs: &ComplexScalar) -> ComplexScalar {
        ComplexScalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for &ComplexScalar {
    type Output = ComplexScalar;
    fn div(self, rhs: &ComplexScalar) -> ComplexScalar {
        self * &rhs.recip()
    }
}

impl Neg for &ComplexScalar {
    type Output = ComplexScalar;
    fn neg(self) -> ComplexScalar {
        ComplexScalar {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

impl AddAssign<&ComplexScalar> for ComplexScalar {
    fn add_assign(&mut self, rhs: &ComplexScalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&ComplexScalar> for ComplexScalar {
    fn sub_assign(&mut self, rhs: &ComplexScalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&ComplexScalar> for ComplexScalar {
    fn mul_assign(&mut self, rhs: &ComplexScalar) {
        *self = &*self * rhs;
    }
}

impl fmt::Debug for ComplexScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}+{}i)", self.re, self.im)
    }
}

/// Renders a scalar in the expression grammar: `re`, `im*i` or `(re+im*i)`.
impl fmt::Display for ComplexScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            if self.im.is_one() {
                write!(f, "i")
            } else {
                write!(f, "{}*i", self.im)
            }
        } else if self.im.is_negative() {
            write!(f, "({}-{}*i)", self.re, -self.im.clone())
        } else {
            write!(f, "({}+{}*i)", self.re, self.im)
        }
    }
}

/// Binary64 value of a big rational, computed through a quotient of
/// arbitrary-precision integers so huge numerators stay finite.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // fall back to scaling both sides down by a power of two
    let bits = r.numer().bits().max(r.denom().bits()) as i64;
    let shift = (bits - 900).max(0) as u64;
    let n = r.numer() >> shift;
    let d = r.denom() >> shift;
    let nf = n.to_f64().unwrap_or(f64::NAN);
    let df = d.to_f64().unwrap_or(f64::NAN);
    nf / df
}

/// Exact rational from a binary64 value (every finite f64 is rational).
pub fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// Exact k-th root of a nonnegative rational, when it exists.
pub fn rational_nth_root(r: &BigRational, k: u32) -> Option<BigRational> {
    if r.is_negative() || k == 0 {
        return None;
    }
    if r.is_zero() {
        return Some(BigRational::zero());
    }
    let n = r.numer().nth_root(k);
    let d = r.denom().nth_root(k);
    let exact = num_traits::pow::pow(n.clone(), k as usize) == *r.numer()
        && num_traits::pow::pow(d.clone(), k as usize) == *r.denom();
    if exact {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Exact square root of a nonnegative rational, when it exists.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    rational_nth_root(r, 2)
}

/// Rational power with integer exponent (negative allowed for nonzero base).
pub fn rational_pow(r: &BigRational, e: i64) -> BigRational {
    if e == 0 {
        return BigRational::one();
    }
    let p = num_traits::pow::pow(r.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

/// A positive real of the form `radicand^(1/degree)` with exact comparisons.
///
/// Scale candidates in the anisotropic dilation are roots of exact rationals;
/// keeping the radicand lets the minimum be taken exactly and lets coefficient
/// bounds be verified by clearing the root with an integer power.
#[derive(Clone, Debug)]
pub struct RationalRoot {
    pub radicand: BigRational,
    pub degree: u32,
}

impl RationalRoot {
    pub fn new(radicand: BigRational, degree: u32) -> Self {
        assert!(degree >= 1);
        assert!(!radicand.is_negative());
        RationalRoot { radicand, degree }
    }

    pub fn from_rational(r: BigRational) -> Self {
        RationalRoot::new(r, 1)
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.radicand).powf(1.0 / f64::from(self.degree))
    }

    /// Exact rational value when the root closes in ℚ.
    pub fn exact_rational(&self) -> Option<BigRational> {
        rational_nth_root(&self.radicand, self.degree)
    }

    /// Exact value of `self^e` when it is rational.
    pub fn pow_exact(&self, e: u32) -> Option<BigRational> {
        let raised = rational_pow(&self.radicand, i64::from(e));
        rational_nth_root(&raised, self.degree)
    }

    /// `self^e` in binary64, routing through the exact value when available.
    pub fn pow_f64(&self, e: u32) -> f64 {
        match self.pow_exact(e) {
            Some(r) => rational_to_f64(&r),
            None => rational_to_f64(&self.radicand).powf(f64::from(e) / f64::from(self.degree)),
        }
    }

    /// Exact comparison via cross-powering to a common root degree.
    pub fn cmp_exact(&self, other: &RationalRoot) -> std::cmp::Ordering {
        let l = num_integer::lcm(self.degree, other.degree);
        let a = rational_pow(&self.radicand, i64::from(l / self.degree));
        let b = rational_pow(&other.radicand, i64::from(l / other.degree));
        a.cmp(&b)
    }

    pub fn mul(&self, other: &RationalRoot) -> RationalRoot {
        let l = num_integer::lcm(self.degree, other.degree);
        let r = rational_pow(&self.radicand, i64::from(l / self.degree))
            * rational_pow(&other.radicand, i64::from(l / other.degree));
        RationalRoot::new(r, l)
    }

    /// `self^e` as a root value (degree unchanged).
    pub fn powi(&self, e: u32) -> RationalRoot {
        RationalRoot::new(rational_pow(&self.radicand, i64::from(e)), self.degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn arithmetic_and_conjugation() {
        let a = ComplexScalar::new(rat(1, 2), rat(3, 4));
        let b = ComplexScalar::new(rat(-1, 3), rat(2, 1));
        let prod = &a * &b;
        // (1/2 + 3/4 i)(-1/3 + 2i) = -1/6 - 3/2 + (1 - 1/4) i
        assert_eq!(prod.re, rat(-5, 3));
        assert_eq!(prod.im, rat(3, 4));
        let back = &prod / &b;
        assert_eq!(back, a);
        assert_eq!(a.conj().conj(), a);
        assert_eq!((&a * &a.conj()).re, a.abs2());
    }

    #[test]
    fn roots() {
        assert_eq!(rational_sqrt(&rat(1, 4)), Some(rat(1, 2)));
        assert_eq!(rational_sqrt(&rat(2, 1)), None);
        assert_eq!(rational_nth_root(&rat(1, 625), 4), Some(rat(1, 5)));
        assert_eq!(rational_nth_root(&rat(8, 27), 3), Some(rat(2, 3)));
        assert_eq!(rational_nth_root(&rat(1, 250), 3), None);
    }

    #[test]
    fn root_comparisons() {
        // (1/100)^(1/2) = 1/10 < (1/250)^(1/3) < (1/625)^(1/4) = 1/5
        let a = RationalRoot::new(rat(1, 100), 2);
        let b = RationalRoot::new(rat(1, 250), 3);
        let c = RationalRoot::new(rat(1, 625), 4);
        assert_eq!(a.cmp_exact(&b), std::cmp::Ordering::Less);
        assert_eq!(b.cmp_exact(&c), std::cmp::Ordering::Less);
        assert_eq!(a.exact_rational(), Some(rat(1, 10)));
        assert_eq!(b.exact_rational(), None);
        assert!((b.to_f64() - (1.0f64 / 250.0).cbrt()).abs() < 1e-15);
    }

    #[test]
    fn display_forms() {
        assert_eq!(ComplexScalar::from_ratio(-3, 4).to_string(), "-3/4");
        assert_eq!(ComplexScalar::i().to_string(), "i");
        let z = ComplexScalar::new(rat(1, 2), rat(-3, 4));
        assert_eq!(z.to_string(), "(1/2-3/4*i)");
    }
}
