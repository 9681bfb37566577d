use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::Rational;
use crate::error::{Error, Result};

/// An element `re + im·i` of the Gaussian rationals ℚ(i).
///
/// Both components are kept in lowest terms, so `==` is exact field equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self {
            re,
            im: Rational::zero(),
        }
    }

    pub fn from_i64(re: i64) -> Self {
        Self::real(Rational::from_integer(re.into()))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self {
            re: Rational::zero(),
            im: Rational::one(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// `re² + im²`, i.e. `a†a`.
    pub fn norm_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn in_disk(&self) -> bool {
        self.norm_sq() <= Rational::one()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm_sq();
        if n.is_zero() {
            return Err(Error::NotInvertible);
        }
        Ok(Self {
            re: &self.re / &n,
            im: -&self.im / &n,
        })
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self {
            re: &self.re * q,
            im: &self.im * q,
        }
    }

    /// `|re| + |im|`, a rational upper bound on the modulus.
    pub fn abs_bound(&self) -> Rational {
        self.re.abs() + self.im.abs()
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// The four-integer wire form `[re_num, re_den, im_num, im_den]`.
    pub fn to_quad(&self) -> [String; 4] {
        [
            self.re.numer().to_string(),
            self.re.denom().to_string(),
            self.im.numer().to_string(),
            self.im.denom().to_string(),
        ]
    }

    pub fn from_quad(q: &[String; 4]) -> Result<Self> {
        let p = |s: &String| -> Result<num_bigint::BigInt> {
            s.trim()
                .parse()
                .map_err(|_| Error::InvalidElement(format!("not an integer: {s:?}")))
        };
        let (rn, rd, im_n, im_d) = (p(&q[0])?, p(&q[1])?, p(&q[2])?, p(&q[3])?);
        if rd.is_zero() || im_d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self {
            re: Rational::new(rn, rd),
            im: Rational::new(im_n, im_d),
        })
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_quad().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let q = <[String; 4]>::deserialize(d)?;
        Self::from_quad(&q).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{} - {}i", self.re, -&self.im)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::real(Rational::one())
    }
}

impl From<Rational> for GaussianRational {
    fn from(q: Rational) -> Self {
        Self::real(q)
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

/// Panics on division by zero; use [`GaussianRational::inv`] for a checked inverse.
#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for &GaussianRational {
    type Output = GaussianRational;
    fn div(self, o: &GaussianRational) -> GaussianRational {
        self * &o.inv().expect("division by zero in ℚ(i)")
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, o: GaussianRational) -> GaussianRational { (&self).$m(&o) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rational::rat;

    fn g(a: i64, b: i64, c: i64, d: i64) -> GaussianRational {
        GaussianRational::new(rat(a, b), rat(c, d))
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(g(1, 1, 1, 1).conj(), g(1, 1, -1, 1));
        let u = g(3, 5, 4, 5);
        assert_eq!(&u.conj() * &u, GaussianRational::one());
    }

    #[test]
    fn norm_examples() {
        assert_eq!(GaussianRational::zero().norm_sq(), rat(0, 1));
        assert_eq!(g(3, 5, 4, 5).norm_sq(), rat(1, 1));
        assert_eq!(g(1, 2, 0, 1).norm_sq(), rat(1, 4));
    }

    #[test]
    fn disk_examples() {
        assert!(g(1, 2, 0, 1).in_disk());
        assert!(!g(1, 1, 1, 1).in_disk());
        assert!(g(3, 5, 4, 5).in_disk());
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(GaussianRational::zero().inv(), Err(Error::NotInvertible));
    }

    #[test]
    fn quad_roundtrip() {
        let a = g(-7, 3, 2, 9);
        assert_eq!(GaussianRational::from_quad(&a.to_quad()).unwrap(), a);
        let bad = ["1".into(), "0".into(), "0".into(), "1".into()];
        assert_eq!(GaussianRational::from_quad(&bad), Err(Error::ZeroDenominator));
    }
}
