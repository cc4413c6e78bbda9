//! Exact arithmetic in the real quadratic field `Q(√2)` and its complex
//! extension `Q(√2, i)`. All coefficients are arbitrary-precision rationals;
//! no floating point enters these types.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// An element `a + b√2` with rational `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q2Scalar {
    rat: BigRational,
    irr: BigRational,
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl Q2Scalar {
    pub fn new(rat: BigRational, irr: BigRational) -> Self {
        Q2Scalar { rat, irr }
    }

    pub fn zero() -> Self {
        Q2Scalar::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Q2Scalar::new(BigRational::one(), BigRational::zero())
    }

    pub fn sqrt2() -> Self {
        Q2Scalar::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(v: i64) -> Self {
        Q2Scalar::new(ratio(v, 1), BigRational::zero())
    }

    /// `num/den`, rational part only.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Q2Scalar::new(ratio(num, den), BigRational::zero())
    }

    /// `(num/den)·√2`.
    pub fn sqrt2_times(num: i64, den: i64) -> Self {
        Q2Scalar::new(BigRational::zero(), ratio(num, den))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Q2Scalar::new(r, BigRational::zero())
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.irr
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    /// The field automorphism `√2 ↦ -√2`.
    pub fn conj_sqrt2(&self) -> Self {
        Q2Scalar::new(self.rat.clone(), -self.irr.clone())
    }

    /// `(a + b√2)⁻¹ = (a - b√2) / (a² - 2b²)`; defined iff `a² ≠ 2b²`, which
    /// for rational `a, b` means the element is nonzero.
    pub fn inverse(&self) -> Option<Self> {
        let norm = &self.rat * &self.rat - ratio(2, 1) * &self.irr * &self.irr;
        if norm.is_zero() {
            return None;
        }
        Some(Q2Scalar::new(&self.rat / &norm, -&self.irr / &norm))
    }

    pub fn to_f64(&self) -> f64 {
        self.rat.to_f64().unwrap_or(f64::NAN)
            + std::f64::consts::SQRT_2 * self.irr.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Q2Scalar {
    /// `a/b+c/d*sqrt2`, dropping zero components.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        if !self.rat.is_zero() {
            write!(f, "{}", self.rat)?;
            first = false;
        }
        if !self.irr.is_zero() {
            if !first && self.irr >= BigRational::zero() {
                write!(f, "+")?;
            }
            write!(f, "{}*sqrt2", self.irr)?;
        }
        Ok(())
    }
}

impl Add for Q2Scalar {
    type Output = Q2Scalar;
    fn add(self, rhs: Q2Scalar) -> Q2Scalar {
        Q2Scalar::new(self.rat + rhs.rat, self.irr + rhs.irr)
    }
}

impl<'a> Add<&'a Q2Scalar> for Q2Scalar {
    type Output = Q2Scalar;
    fn add(self, rhs: &'a Q2Scalar) -> Q2Scalar {
        Q2Scalar::new(self.rat + &rhs.rat, self.irr + &rhs.irr)
    }
}

impl AddAssign<&Q2Scalar> for Q2Scalar {
    fn add_assign(&mut self, rhs: &Q2Scalar) {
        self.rat += &rhs.rat;
        self.irr += &rhs.irr;
    }
}

impl Sub for Q2Scalar {
    type Output = Q2Scalar;
    fn sub(self, rhs: Q2Scalar) -> Q2Scalar {
        Q2Scalar::new(self.rat - rhs.rat, self.irr - rhs.irr)
    }
}

impl<'a> Sub<&'a Q2Scalar> for Q2Scalar {
    type Output = Q2Scalar;
    fn sub(self, rhs: &'a Q2Scalar) -> Q2Scalar {
        Q2Scalar::new(self.rat - &rhs.rat, self.irr - &rhs.irr)
    }
}

impl SubAssign<&Q2Scalar> for Q2Scalar {
    fn sub_assign(&mut self, rhs: &Q2Scalar) {
        self.rat -= &rhs.rat;
        self.irr -= &rhs.irr;
    }
}

impl Mul for Q2Scalar {
    type Output = Q2Scalar;
    fn mul(self, rhs: Q2Scalar) -> Q2Scalar {
        &self * &rhs
    }
}

impl Mul<&Q2Scalar> for &Q2Scalar {
    type Output = Q2Scalar;
    fn mul(self, rhs: &Q2Scalar) -> Q2Scalar {
        // (a + b√2)(c + d√2) = (ac + 2bd) + (ad + bc)√2
        Q2Scalar::new(
            &self.rat * &rhs.rat + ratio(2, 1) * &self.irr * &rhs.irr,
            &self.rat * &rhs.irr + &self.irr * &rhs.rat,
        )
    }
}

impl MulAssign<&Q2Scalar> for Q2Scalar {
    fn mul_assign(&mut self, rhs: &Q2Scalar) {
        *self = &*self * rhs;
    }
}

impl Neg for Q2Scalar {
    type Output = Q2Scalar;
    fn neg(self) -> Q2Scalar {
        Q2Scalar::new(-self.rat, -self.irr)
    }
}

impl Div for Q2Scalar {
    type Output = Q2Scalar;
    // Field division is multiplication by the inverse.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Q2Scalar) -> Q2Scalar {
        &self * &rhs.inverse().expect("division by zero in Q(√2)")
    }
}

/// An element `p + q i` with `p, q ∈ Q(√2)`; the field `Q(√2, i)` hosts the
/// exact scattering amplitudes at `-π/4` and `-3π/4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q2Complex {
    pub re: Q2Scalar,
    pub im: Q2Scalar,
}

impl Q2Complex {
    pub fn new(re: Q2Scalar, im: Q2Scalar) -> Self {
        Q2Complex { re, im }
    }

    pub fn zero() -> Self {
        Q2Complex::new(Q2Scalar::zero(), Q2Scalar::zero())
    }

    pub fn one() -> Self {
        Q2Complex::new(Q2Scalar::one(), Q2Scalar::zero())
    }

    pub fn i() -> Self {
        Q2Complex::new(Q2Scalar::zero(), Q2Scalar::one())
    }

    pub fn from_real(re: Q2Scalar) -> Self {
        Q2Complex::new(re, Q2Scalar::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        Q2Complex::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|² = p² + q² ∈ Q(√2)`.
    pub fn norm_sqr(&self) -> Q2Scalar {
        &self.re * &self.re + &(&self.im * &self.im)
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm_sqr().inverse()?;
        Some(Q2Complex::new(&self.re * &n, -(&self.im * &n)))
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for Q2Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})*i", self.re, self.im)
    }
}

impl Add for Q2Complex {
    type Output = Q2Complex;
    fn add(self, rhs: Q2Complex) -> Q2Complex {
        Q2Complex::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl AddAssign<&Q2Complex> for Q2Complex {
    fn add_assign(&mut self, rhs: &Q2Complex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sub for Q2Complex {
    type Output = Q2Complex;
    fn sub(self, rhs: Q2Complex) -> Q2Complex {
        Q2Complex::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for Q2Complex {
    type Output = Q2Complex;
    fn mul(self, rhs: Q2Complex) -> Q2Complex {
        &self * &rhs
    }
}

impl Mul<&Q2Complex> for &Q2Complex {
    type Output = Q2Complex;
    fn mul(self, rhs: &Q2Complex) -> Q2Complex {
        Q2Complex::new(
            &self.re * &rhs.re - &(&self.im * &rhs.im),
            &self.re * &rhs.im + &(&self.im * &rhs.re),
        )
    }
}

impl Neg for Q2Complex {
    type Output = Q2Complex;
    fn neg(self) -> Q2Complex {
        Q2Complex::new(-self.re, -self.im)
    }
}

impl Div for Q2Complex {
    type Output = Q2Complex;
    // Field division is multiplication by the inverse.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Q2Complex) -> Q2Complex {
        &self * &rhs.inverse().expect("division by zero in Q(√2, i)")
    }
}
