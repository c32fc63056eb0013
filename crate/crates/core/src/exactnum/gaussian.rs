//! Exact Gaussian rationals, the field `Q(i)`.
//!
//! Every boundary coordinate and every period value lives in the
//! multiplicative group of this field. The textual form is
//! `a/b`, `a/b+c/d*i` or `a/b-c/d*i`; denominators equal to one may be
//! omitted and the real part is always written.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    /// `num/den` as a real Gaussian rational. Panics on a zero denominator.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::new(BigRational::new(num.into(), den.into()), BigRational::zero())
    }

    pub fn from_parts(re: (i64, i64), im: (i64, i64)) -> Self {
        Self::new(
            BigRational::new(re.0.into(), re.1.into()),
            BigRational::new(im.0.into(), im.1.into()),
        )
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn minus_one() -> Self {
        Self::from_integer(-1)
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// Field norm `re^2 + im^2`.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroValue("inverse of 0".into()));
        }
        let n = self.norm();
        Ok(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// Integer power; negative exponents require a unit.
    pub fn pow(&self, exp: i64) -> Result<Self> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    pub fn pow_big(&self, exp: &BigInt) -> Result<Self> {
        let e = exp.to_i64().ok_or(Error::Overflow("exponent"))?;
        self.pow(e)
    }

    /// Some `d`-th root in `Q(i)`, if one exists and can be certified.
    pub fn nth_root(&self, d: u32) -> RootResult {
        root::nth_root(self, d)
    }

    /// Write `self = g / n` with `g` a Gaussian integer and `n > 0`.
    pub(crate) fn as_gaussian_integer_over(&self) -> ((BigInt, BigInt), BigInt) {
        let n = self.re.denom().lcm(self.im.denom());
        let a = self.re.numer() * (&n / self.re.denom());
        let b = self.im.numer() * (&n / self.im.denom());
        ((a, b), n)
    }
}

/// Outcome of extracting a root inside `Q(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootResult {
    Found(GaussianRational),
    /// No root exists in `Q(i)` (one always exists in `C*`).
    NotInField,
    /// The magnitude exceeds the range where the search is a certificate.
    Undetermined,
}

mod root {
    use super::*;

    // Beyond this norm of the integral candidate, rounding from f64 is no
    // longer a proof of absence.
    const EXHAUSTIVE_NORM_LIMIT: u64 = 1 << 40;

    pub(super) fn nth_root(x: &GaussianRational, d: u32) -> RootResult {
        if d == 0 {
            return RootResult::NotInField;
        }
        if d == 1 || x.is_zero() {
            return RootResult::Found(x.clone());
        }
        // x = g / n = (g n^(d-1)) / n^d, so a root is root(g n^(d-1)) / n and
        // roots of Gaussian integers in Q(i) are Gaussian integers.
        let ((a, b), n) = x.as_gaussian_integer_over();
        let scale = num_traits::pow(n.clone(), (d - 1) as usize);
        let g = (a * &scale, b * &scale);
        match integer_root(&g, d) {
            IntRoot::Found(w) => {
                let nr = BigRational::from_integer(n);
                RootResult::Found(GaussianRational::new(
                    BigRational::from_integer(w.0) / &nr,
                    BigRational::from_integer(w.1) / &nr,
                ))
            }
            IntRoot::None => RootResult::NotInField,
            IntRoot::Unknown => RootResult::Undetermined,
        }
    }

    enum IntRoot {
        Found((BigInt, BigInt)),
        None,
        Unknown,
    }

    fn gi_pow(w: &(BigInt, BigInt), d: u32) -> (BigInt, BigInt) {
        let mut acc = (BigInt::one(), BigInt::zero());
        for _ in 0..d {
            acc = (
                &acc.0 * &w.0 - &acc.1 * &w.1,
                &acc.0 * &w.1 + &acc.1 * &w.0,
            );
        }
        acc
    }

    fn integer_root(g: &(BigInt, BigInt), d: u32) -> IntRoot {
        let norm = &g.0 * &g.0 + &g.1 * &g.1;
        // N(w) = N(g)^(1/d) must be an integer.
        let nw = norm.nth_root(d);
        if num_traits::pow(nw.clone(), d as usize) != norm {
            return IntRoot::None;
        }
        // Float-guided candidates, verified exactly.
        if let (Some(re), Some(im)) = (g.0.to_f64(), g.1.to_f64()) {
            let r = (re * re + im * im).sqrt().powf(1.0 / d as f64);
            let arg = im.atan2(re);
            for k in 0..d {
                let theta = (arg + 2.0 * std::f64::consts::PI * k as f64) / d as f64;
                let (cx, cy) = ((r * theta.cos()).round(), (r * theta.sin()).round());
                for dx in -1..=1 {
                    for dy in -1..=1 {
                        let w = (
                            BigInt::from((cx as i64).saturating_add(dx)),
                            BigInt::from((cy as i64).saturating_add(dy)),
                        );
                        if &gi_pow(&w, d) == g {
                            return IntRoot::Found(w);
                        }
                    }
                }
            }
        }
        // Exhaustive search over a^2 + b^2 = N(w) when that is small.
        match nw.to_u64() {
            Some(limit) if limit <= EXHAUSTIVE_NORM_LIMIT => {
                let nwb = BigInt::from(limit);
                let top = nwb.sqrt();
                let mut a = -top.clone();
                while a <= top {
                    let rest = &nwb - &a * &a;
                    let b = rest.sqrt();
                    if &b * &b == rest {
                        for w in [(a.clone(), b.clone()), (a.clone(), -b.clone())] {
                            if &gi_pow(&w, d) == g {
                                return IntRoot::Found(w);
                            }
                        }
                    }
                    a += 1;
                }
                IntRoot::None
            }
            _ => IntRoot::Unknown,
        }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: GaussianRational) -> GaussianRational {
        &self * &rhs
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_rational(&self.re))?;
        if !self.im.is_zero() {
            let sign = if self.im.is_negative() { '-' } else { '+' };
            write!(f, "{}{}*i", sign, fmt_rational(&self.im.abs()))?;
        }
        Ok(())
    }
}

fn parse_integer(s: &str, whole: &str) -> Result<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("bad integer {s:?} in {whole:?}")));
    }
    BigInt::from_str(s).map_err(|e| Error::Parse(format!("{e} in {whole:?}")))
}

fn parse_rational(s: &str, whole: &str) -> Result<BigRational> {
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_integer(s, whole)?)),
        Some((n, d)) => {
            if d.starts_with(['+', '-']) {
                return Err(Error::Parse(format!("signed denominator in {whole:?}")));
            }
            let n = parse_integer(n, whole)?;
            let d = parse_integer(d, whole)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {whole:?}")));
            }
            Ok(BigRational::new(n, d))
        }
    }
}

impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty coordinate".into()));
        }
        let split = s
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        let imag = |t: &str| -> Result<BigRational> {
            let body = t
                .strip_suffix("*i")
                .ok_or_else(|| Error::Parse(format!("imaginary part must end in *i: {input:?}")))?;
            parse_rational(body, input)
        };
        match split {
            Some(i) => {
                let (re, im) = s.split_at(i);
                Ok(Self::new(parse_rational(re, input)?, imag(im)?))
            }
            None if s.ends_with("*i") => Ok(Self::new(BigRational::zero(), imag(&s)?)),
            None => Ok(Self::new(parse_rational(&s, input)?, BigRational::zero())),
        }
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|e: Error| match e {
            Error::Parse(m) => serde::de::Error::custom(m),
            other => serde::de::Error::custom(other),
        })
    }
}
