use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::{BigReal, GaussianRational, Rational};
use crate::error::Result;

/// A complex number with [`BigReal`] parts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexReal {
    pub re: BigReal,
    pub im: BigReal,
}

impl ComplexReal {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        Self { re, im }
    }

    pub fn zero(precision: u32) -> Self {
        Self {
            re: BigReal::zero(precision),
            im: BigReal::zero(precision),
        }
    }

    pub fn one(precision: u32) -> Self {
        Self {
            re: BigReal::one(precision),
            im: BigReal::zero(precision),
        }
    }

    pub fn from_gaussian(g: &GaussianRational, precision: u32) -> Self {
        Self {
            re: BigReal::from_rational(&g.re, precision),
            im: BigReal::from_rational(&g.im, precision),
        }
    }

    pub fn from_real(re: BigReal) -> Self {
        let p = re.precision();
        Self {
            re,
            im: BigReal::zero(p),
        }
    }

    pub fn precision(&self) -> u32 {
        self.re.precision().min(self.im.precision())
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn norm_sq(&self) -> BigReal {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn abs(&self) -> BigReal {
        self.norm_sq().sqrt().expect("norms are non-negative")
    }

    pub fn scale(&self, r: &BigReal) -> Self {
        Self {
            re: &self.re * r,
            im: &self.im * r,
        }
    }

    pub fn div_real(&self, r: &BigReal) -> Result<Self> {
        Ok(Self {
            re: self.re.div(r)?,
            im: self.im.div(r)?,
        })
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm_sq();
        Ok(Self {
            re: self.re.div(&n)?,
            im: (-&self.im).div(&n)?,
        })
    }

    /// `max(|re|, |im|)` as an exact rational.
    pub fn max_abs_component(&self) -> Rational {
        let a = self.re.abs().to_rational();
        let b = self.im.abs().to_rational();
        if a > b {
            a
        } else {
            b
        }
    }
}

impl Add for &ComplexReal {
    type Output = ComplexReal;
    fn add(self, o: &ComplexReal) -> ComplexReal {
        ComplexReal {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
}

impl Sub for &ComplexReal {
    type Output = ComplexReal;
    fn sub(self, o: &ComplexReal) -> ComplexReal {
        ComplexReal {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
}

impl Mul for &ComplexReal {
    type Output = ComplexReal;
    fn mul(self, o: &ComplexReal) -> ComplexReal {
        ComplexReal {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }
}

impl Neg for &ComplexReal {
    type Output = ComplexReal;
    fn neg(self) -> ComplexReal {
        ComplexReal {
            re: -&self.re,
            im: -&self.im,
        }
    }
}
