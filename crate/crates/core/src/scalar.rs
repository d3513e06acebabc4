//! Numeric scalars: exact Gaussian rationals and IEEE double complex numbers.
//!
//! Exact arithmetic is closed under `+`, `-`, `*` and division by a nonzero
//! value. Any operation touching a float promotes the result to float.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{QismError, Result};

/// Complex number with arbitrary-precision rational parts.
pub type GaussQ = Complex<BigRational>;

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn gq(re: i64, im: i64) -> GaussQ {
    Complex::new(rat(re, 1), rat(im, 1))
}

pub fn gq_rat(re: BigRational, im: BigRational) -> GaussQ {
    Complex::new(re, im)
}

pub fn gq_to_c64(z: &GaussQ) -> Complex64 {
    Complex64::new(z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN))
}

/// Inverse of a nonzero Gaussian rational.
pub fn gq_inv(z: &GaussQ) -> Result<GaussQ> {
    let n = &z.re * &z.re + &z.im * &z.im;
    if n.is_zero() {
        return Err(QismError::DivisionByZero);
    }
    Ok(Complex::new(&z.re / &n, -&z.im / &n))
}

pub fn gq_pow(z: &GaussQ, exp: i32) -> Result<GaussQ> {
    let base = if exp < 0 { gq_inv(z)? } else { z.clone() };
    let mut acc = GaussQ::one();
    for _ in 0..exp.unsigned_abs() {
        acc = acc * &base;
    }
    Ok(acc)
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Text form of a Gaussian rational: `3/2`, `-2*i`, `(1/2+3*i)`.
pub fn fmt_gauss(z: &GaussQ) -> String {
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => fmt_rational(&z.re),
        (true, false) => {
            if z.im.is_one() {
                "i".to_string()
            } else if (-&z.im).is_one() {
                "-i".to_string()
            } else {
                format!("{}*i", fmt_rational(&z.im))
            }
        }
        (false, false) => {
            let sign = if z.im.is_negative() { "-" } else { "+" };
            let mag = z.im.abs();
            let im = if mag.is_one() { "i".to_string() } else { format!("{}*i", fmt_rational(&mag)) };
            format!("({}{}{})", fmt_rational(&z.re), sign, im)
        }
    }
}

/// A scalar value that is either exact or floating point.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(GaussQ),
    Float(Complex64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(GaussQ::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(GaussQ::one())
    }

    pub fn int(re: i64) -> Self {
        Scalar::Exact(gq(re, 0))
    }

    pub fn gauss(re: i64, im: i64) -> Self {
        Scalar::Exact(gq(re, im))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(Complex::new(rat(num, den), BigRational::zero()))
    }

    pub fn float(re: f64, im: f64) -> Self {
        Scalar::Float(Complex64::new(re, im))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(z) => z.is_zero(),
            Scalar::Float(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Exact(z) => z.is_one(),
            Scalar::Float(z) => z.re == 1.0 && z.im == 0.0,
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        match self {
            Scalar::Exact(z) => gq_to_c64(z),
            Scalar::Float(z) => *z,
        }
    }

    pub fn as_exact(&self) -> Option<&GaussQ> {
        match self {
            Scalar::Exact(z) => Some(z),
            Scalar::Float(_) => None,
        }
    }

    pub fn to_float(&self) -> Scalar {
        Scalar::Float(self.to_c64())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.to_c64().norm_sqr()
    }

    pub fn inv(&self) -> Result<Scalar> {
        match self {
            Scalar::Exact(z) => gq_inv(z).map(Scalar::Exact),
            Scalar::Float(z) => {
                if z.norm_sqr() == 0.0 {
                    Err(QismError::DivisionByZero)
                } else {
                    Ok(Scalar::Float(z.inv()))
                }
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, exp: i32) -> Result<Scalar> {
        match self {
            Scalar::Exact(z) => gq_pow(z, exp).map(Scalar::Exact),
            Scalar::Float(z) => {
                if exp < 0 && z.norm_sqr() == 0.0 {
                    Err(QismError::DivisionByZero)
                } else {
                    Ok(Scalar::Float(z.powi(exp)))
                }
            }
        }
    }

    fn binary(
        &self,
        other: &Scalar,
        exact: impl FnOnce(&GaussQ, &GaussQ) -> GaussQ,
        float: impl FnOnce(Complex64, Complex64) -> Complex64,
    ) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(exact(a, b)),
            _ => Scalar::Float(float(self.to_c64(), other.to_c64())),
        }
    }

    fn float_key(z: &Complex64) -> (u64, u64) {
        // fold -0.0 onto 0.0 so equal values hash equally
        let norm = |x: f64| if x == 0.0 { 0.0f64.to_bits() } else { x.to_bits() };
        (norm(z.re), norm(z.im))
    }
}

impl From<GaussQ> for Scalar {
    fn from(z: GaussQ) -> Self {
        Scalar::Exact(z)
    }
}

impl From<Complex64> for Scalar {
    fn from(z: Complex64) -> Self {
        Scalar::Float(z)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(z) => write!(f, "{}", fmt_gauss(z)),
            Scalar::Float(z) => write!(f, "{}", z),
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Scalar {}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Structural total order (exact before float); used for canonical term maps.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.re.cmp(&b.re).then_with(|| a.im.cmp(&b.im)),
            (Scalar::Exact(_), Scalar::Float(_)) => Ordering::Less,
            (Scalar::Float(_), Scalar::Exact(_)) => Ordering::Greater,
            (Scalar::Float(a), Scalar::Float(b)) => {
                let (ka, kb) = (Self::float_key(a), Self::float_key(b));
                if ka == kb {
                    Ordering::Equal
                } else {
                    a.re.total_cmp(&b.re).then_with(|| a.im.total_cmp(&b.im))
                }
            }
        }
    }
}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Scalar::Exact(z) => {
                0u8.hash(state);
                z.re.hash(state);
                z.im.hash(state);
            }
            Scalar::Float(z) => {
                1u8.hash(state);
                Self::float_key(z).hash(state);
            }
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.binary(rhs, |a, b| a + b, |a, b| a + b)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.binary(rhs, |a, b| a - b, |a, b| a - b)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if let (Scalar::Exact(a), Scalar::Exact(b)) = (self, rhs) {
            if a.im.is_zero() && b.im.is_zero() {
                return Scalar::Exact(GaussQ::new(&a.re * &b.re, a.im.clone()));
            }
        }
        self.binary(rhs, |a, b| a * b, |a, b| a * b)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(z) => Scalar::Exact(-z.clone()),
            Scalar::Float(z) => Scalar::Float(-z),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Element type of a dense matrix: either [`GaussQ`] or [`Complex64`].
pub trait Field:
    Clone + PartialEq + fmt::Debug + Send + Sync + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn from_scalar(s: &Scalar) -> Option<Self>;
    fn to_c64(&self) -> Complex64;
    fn to_scalar(&self) -> Scalar;
    fn norm_sqr_f64(&self) -> f64 {
        self.to_c64().norm_sqr()
    }
}

impl Field for GaussQ {
    fn from_scalar(s: &Scalar) -> Option<Self> {
        s.as_exact().cloned()
    }
    fn to_c64(&self) -> Complex64 {
        gq_to_c64(self)
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::Exact(self.clone())
    }
}

impl Field for Complex64 {
    fn from_scalar(s: &Scalar) -> Option<Self> {
        Some(s.to_c64())
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::Float(*self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_stays_exact() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::gauss(0, 1);
        let p = &a * &b;
        assert!(p.is_exact());
        assert_eq!(&p * &Scalar::int(3), Scalar::gauss(0, 1));
        assert_eq!(&(&a + &a) + &a, Scalar::one());
    }

    #[test]
    fn mixing_promotes_to_float() {
        let s = &Scalar::int(2) + &Scalar::float(0.5, 0.0);
        assert!(!s.is_exact());
        assert_eq!(s.to_c64(), Complex64::new(2.5, 0.0));
    }

    #[test]
    fn inverse_and_powers() {
        let z = Scalar::gauss(1, 1);
        let zi = z.inv().unwrap();
        assert_eq!(&z * &zi, Scalar::one());
        assert_eq!(z.pow(-2).unwrap(), Scalar::Exact(Complex::new(rat(0, 1), rat(-1, 2))));
        assert_eq!(Scalar::zero().inv(), Err(QismError::DivisionByZero));
    }

    #[test]
    fn gauss_formatting() {
        assert_eq!(fmt_gauss(&gq(3, 0)), "3");
        assert_eq!(fmt_gauss(&gq(0, -1)), "-i");
        assert_eq!(fmt_gauss(&gq(1, -2)), "(1-2*i)");
        assert_eq!(fmt_gauss(&Complex::new(rat(1, 2), rat(0, 1))), "1/2");
    }
}
