//! Binary fixed-precision reals.
//!
//! A [`BigReal`] is the dyadic rational `mantissa · 2^exponent`, tagged with a
//! working precision `p`. Every arithmetic operation computes the exact
//! result and then truncates it towards −∞ onto the grid `2^-p ℤ`, so each
//! single operation has absolute error `< 2^-p`. Values that already lie on
//! the grid (integers, dyadics with few bits) are carried exactly.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct BigReal {
    mantissa: BigInt,
    exponent: i64,
    precision: u32,
}

impl BigReal {
    pub fn zero(precision: u32) -> Self {
        Self {
            mantissa: BigInt::zero(),
            exponent: 0,
            precision,
        }
    }

    pub fn one(precision: u32) -> Self {
        Self::from_int(1, precision)
    }

    pub fn from_int(n: i64, precision: u32) -> Self {
        Self {
            mantissa: BigInt::from(n),
            exponent: 0,
            precision,
        }
    }

    /// `mantissa · 2^exponent`, rounded onto the precision grid.
    pub fn from_parts(mantissa: BigInt, exponent: i64, precision: u32) -> Self {
        Self {
            mantissa,
            exponent,
            precision,
        }
        .rounded()
    }

    /// `⌊q · 2^p⌋ · 2^-p`; error `< 2^-p`, exact when `q` is on the grid.
    pub fn from_rational(q: &Rational, precision: u32) -> Self {
        let scaled = q.numer() << precision as usize;
        let m = scaled.div_floor(q.denom());
        Self {
            mantissa: m,
            exponent: -(precision as i64),
            precision,
        }
        .normalised()
    }

    pub fn from_f64(x: f64, precision: u32) -> Self {
        let q = Rational::from_float(x).unwrap_or_else(Rational::zero);
        Self::from_rational(&q, precision)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn with_precision(&self, precision: u32) -> Self {
        Self {
            precision,
            ..self.clone()
        }
        .rounded()
    }

    /// `2^-precision`, the per-operation error bound.
    pub fn ulp(&self) -> BigReal {
        Self {
            mantissa: BigInt::one(),
            exponent: -(self.precision as i64),
            precision: self.precision,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn abs(&self) -> Self {
        Self {
            mantissa: self.mantissa.abs(),
            ..self.clone()
        }
    }

    /// The exact dyadic value.
    pub fn to_rational(&self) -> Rational {
        if self.exponent >= 0 {
            Rational::from_integer(&self.mantissa << self.exponent as usize)
        } else {
            Rational::new(self.mantissa.clone(), BigInt::one() << (-self.exponent) as usize)
        }
    }

    pub fn to_f64(&self) -> f64 {
        let m = self.mantissa.to_f64().unwrap_or(f64::NAN);
        if m.is_finite() {
            return m * 2f64.powi(self.exponent.clamp(i32::MIN as i64, i32::MAX as i64) as i32);
        }
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    fn normalised(mut self) -> Self {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return self;
        }
        let tz = self.mantissa.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mantissa >>= tz as usize;
            self.exponent += tz as i64;
        }
        self
    }

    fn rounded(mut self) -> Self {
        let floor_exp = -(self.precision as i64);
        if self.exponent < floor_exp {
            let shift = (floor_exp - self.exponent) as usize;
            // BigInt >> rounds towards −∞.
            self.mantissa >>= shift;
            self.exponent = floor_exp;
        }
        self.normalised()
    }

    fn aligned(a: &Self, b: &Self) -> (BigInt, BigInt, i64) {
        let e = a.exponent.min(b.exponent);
        let ma = &a.mantissa << (a.exponent - e) as usize;
        let mb = &b.mantissa << (b.exponent - e) as usize;
        (ma, mb, e)
    }

    fn joint_precision(&self, o: &Self) -> u32 {
        self.precision.min(o.precision)
    }

    /// Quotient with error `< 2^-p`.
    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::NotInvertible);
        }
        let p = self.joint_precision(o);
        let shift = self.exponent - o.exponent + p as i64;
        let (num, den) = if shift >= 0 {
            (&self.mantissa << shift as usize, o.mantissa.clone())
        } else {
            (self.mantissa.clone(), &o.mantissa << (-shift) as usize)
        };
        let m = num.div_floor(&den);
        Ok(Self {
            mantissa: m,
            exponent: -(p as i64),
            precision: p,
        }
        .normalised())
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one(self.precision).div(self)
    }

    /// `⌊√x · 2^p⌋ · 2^-p`; error `< 2^-p`.
    pub fn sqrt(&self) -> Result<Self> {
        if self.is_negative() {
            return Err(Error::NegativeInput);
        }
        let p = self.precision as i64;
        // value · 2^{2p} = mantissa · 2^{exponent + 2p}
        let shift = self.exponent + 2 * p;
        let scaled = if shift >= 0 {
            &self.mantissa << shift as usize
        } else {
            &self.mantissa >> (-shift) as usize
        };
        let root = scaled.sqrt();
        Ok(Self {
            mantissa: root,
            exponent: -p,
            precision: self.precision,
        }
        .normalised())
    }

    pub fn mul_rational(&self, q: &Rational) -> Self {
        let num = Self {
            mantissa: &self.mantissa * q.numer(),
            ..self.clone()
        };
        let den = Self::from_parts(q.denom().clone(), 0, self.precision);
        num.div(&den).expect("rational denominators are nonzero")
    }

    /// Decimal rendering with `digits` fractional digits (truncated).
    pub fn to_decimal(&self, digits: usize) -> String {
        let q = self.to_rational();
        let neg = q.is_negative();
        let q = q.abs();
        let scale = num_traits::pow(BigInt::from(10), digits);
        let scaled = (q.numer() * &scale).div_floor(q.denom());
        let (int_part, frac) = scaled.div_rem(&scale);
        let mut s = String::new();
        if neg {
            s.push('-');
        }
        s.push_str(&int_part.to_string());
        if digits > 0 {
            let f = frac.to_string();
            s.push('.');
            s.push_str(&"0".repeat(digits - f.len()));
            s.push_str(&f);
        }
        s
    }

    /// `|self − o| ≤ tol`.
    pub fn close_to(&self, o: &Self, tol: &Rational) -> bool {
        (self.to_rational() - o.to_rational()).abs() <= *tol
    }
}

/// Square root of a non-negative rational with `|r̂² − r| ≤ 2^-p · max(1, r)`.
///
/// Computes `⌊√r · 2^(p+2)⌋ · 2^-(p+2)`; the root error `δ < 2^-(p+2)` gives
/// `|r̂² − r| ≤ 2√r·δ + δ² ≤ 2^-p · max(1, r)`.
pub fn sqrt_pos(r: &Rational, precision: u32) -> Result<BigReal> {
    if r.is_negative() {
        return Err(Error::NegativeInput);
    }
    let wp = precision + 2;
    let scaled = (r.numer() << (2 * wp as usize)).div_floor(r.denom());
    let root = scaled.sqrt();
    Ok(BigReal {
        mantissa: root,
        exponent: -(wp as i64),
        precision: wp,
    }
    .normalised())
}

impl PartialEq for BigReal {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for BigReal {}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for BigReal {
    fn cmp(&self, o: &Self) -> Ordering {
        let (a, b, _) = Self::aligned(self, o);
        a.cmp(&b)
    }
}

impl Add for &BigReal {
    type Output = BigReal;
    fn add(self, o: &BigReal) -> BigReal {
        let (a, b, e) = BigReal::aligned(self, o);
        BigReal {
            mantissa: a + b,
            exponent: e,
            precision: self.joint_precision(o),
        }
        .rounded()
    }
}

impl Sub for &BigReal {
    type Output = BigReal;
    fn sub(self, o: &BigReal) -> BigReal {
        let (a, b, e) = BigReal::aligned(self, o);
        BigReal {
            mantissa: a - b,
            exponent: e,
            precision: self.joint_precision(o),
        }
        .rounded()
    }
}

impl Mul for &BigReal {
    type Output = BigReal;
    fn mul(self, o: &BigReal) -> BigReal {
        BigReal {
            mantissa: &self.mantissa * &o.mantissa,
            exponent: self.exponent + o.exponent,
            precision: self.joint_precision(o),
        }
        .rounded()
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal {
            mantissa: -&self.mantissa,
            ..self.clone()
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for BigReal {
            type Output = BigReal;
            fn $m(self, o: BigReal) -> BigReal { (&self).$m(&o) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        -&self
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.precision as f64) * std::f64::consts::LOG10_2).ceil() as usize;
        write!(f, "{}", self.to_decimal(digits.max(1)))
    }
}

#[derive(Serialize, Deserialize)]
struct BigRealWire {
    mantissa: String,
    #[serde(with = "crate::json::signed")]
    exponent: i64,
    #[serde(with = "crate::json::int")]
    precision: u32,
    decimal: String,
}

impl Serialize for BigReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BigRealWire {
            mantissa: self.mantissa.to_string(),
            exponent: self.exponent,
            precision: self.precision,
            decimal: self.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BigReal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = BigRealWire::deserialize(d)?;
        let m: BigInt = w.mantissa.parse().map_err(serde::de::Error::custom)?;
        Ok(BigReal {
            mantissa: m,
            exponent: w.exponent,
            precision: w.precision,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rational::{int, pow2_neg, rat};

    #[test]
    fn sqrt_pos_examples() {
        assert!(sqrt_pos(&int(0), 30).unwrap().is_zero());
        assert_eq!(sqrt_pos(&int(4), 30).unwrap(), BigReal::from_int(2, 30));
        assert_eq!(sqrt_pos(&int(-1), 30), Err(Error::NegativeInput));
    }

    #[test]
    fn sqrt_two_against_newton() {
        // Newton on rationals, independent of the integer square root path.
        let two = int(2);
        let mut x = int(3) / int(2);
        for _ in 0..7 {
            x = (&x + &two / &x) / int(2);
        }
        let s = sqrt_pos(&two, 40).unwrap().to_rational();
        assert!((&s - &x).abs() <= pow2_neg(40));
        assert!((&s * &s - &two).abs() <= pow2_neg(40) * int(2));
        assert!(sqrt_pos(&two, 40).unwrap().to_decimal(10).starts_with("1.4142135623"));
    }

    #[test]
    fn rounding_error_below_ulp() {
        let third = BigReal::from_rational(&rat(1, 3), 50);
        assert!((third.to_rational() - rat(1, 3)).abs() < pow2_neg(50));
        let q = BigReal::from_int(1, 50).div(&BigReal::from_int(3, 50)).unwrap();
        assert_eq!(q, third);
    }

    #[test]
    fn arithmetic_is_exact_on_grid() {
        let a = BigReal::from_rational(&rat(3, 4), 10);
        let b = BigReal::from_rational(&rat(1, 8), 10);
        assert_eq!((&a + &b).to_rational(), rat(7, 8));
        assert_eq!((&a * &b).to_rational(), rat(3, 32));
        assert_eq!((&a - &b).to_rational(), rat(5, 8));
        assert!(a > b);
    }

    #[test]
    fn decimal_rendering() {
        let x = BigReal::from_rational(&rat(-5, 4), 20);
        assert_eq!(x.to_decimal(3), "-1.250");
        assert_eq!(BigReal::from_int(3, 8).to_decimal(0), "3");
    }

    #[test]
    fn serde_roundtrip() {
        let x = sqrt_pos(&int(2), 64).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        let y: BigReal = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
    }
}
