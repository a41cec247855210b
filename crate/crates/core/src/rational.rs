//! Exact rational numbers in lowest terms.
//!
//! The default backend stores numerator and denominator as `i128` and checks
//! every intermediate product. The `bigint` feature swaps in arbitrary
//! precision integers. Operator overloads (`+`, `-`, `*`, `/`) panic with
//! `"rational arithmetic overflow"` when a result does not fit; the
//! `checked_*` methods return [`Error::Overflow`] instead.

#![allow(clippy::clone_on_copy)]

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use crate::error::{Error, Result};

pub use backend::Int;

#[cfg(not(feature = "bigint"))]
mod backend {
    pub type Int = i128;

    pub fn zero() -> Int {
        0
    }
    pub fn one() -> Int {
        1
    }
    pub fn from_i64(v: i64) -> Int {
        v as i128
    }
    pub fn from_i128(v: i128) -> Int {
        v
    }
    pub fn to_i128(a: &Int) -> Option<i128> {
        Some(*a)
    }
    pub fn add(a: &Int, b: &Int) -> Option<Int> {
        a.checked_add(*b)
    }
    pub fn mul(a: &Int, b: &Int) -> Option<Int> {
        a.checked_mul(*b)
    }
    pub fn neg(a: &Int) -> Option<Int> {
        a.checked_neg()
    }
    /// Exact division, `b` divides `a`.
    pub fn div_exact(a: &Int, b: &Int) -> Int {
        a / b
    }
    /// Floor division for `b > 0`.
    pub fn div_floor(a: &Int, b: &Int) -> Int {
        a.div_euclid(*b)
    }
    /// Remainder in `[0, b)` for `b > 0`.
    pub fn rem_floor(a: &Int, b: &Int) -> Int {
        a.rem_euclid(*b)
    }
    pub fn gcd(a: &Int, b: &Int) -> Option<Int> {
        let (mut x, mut y) = (a.unsigned_abs(), b.unsigned_abs());
        while y != 0 {
            let r = x % y;
            x = y;
            y = r;
        }
        i128::try_from(x).ok()
    }
    pub fn is_zero(a: &Int) -> bool {
        *a == 0
    }
    pub fn is_negative(a: &Int) -> bool {
        *a < 0
    }
    pub fn is_positive(a: &Int) -> bool {
        *a > 0
    }
    pub fn to_f64(a: &Int) -> f64 {
        *a as f64
    }
    pub fn parse(s: &str) -> Option<Int> {
        s.parse().ok()
    }
}

#[cfg(feature = "bigint")]
mod backend {
    use num_integer::Integer;
    use num_traits::{One, Signed, ToPrimitive, Zero};

    pub type Int = num_bigint::BigInt;

    pub fn zero() -> Int {
        Int::zero()
    }
    pub fn one() -> Int {
        Int::one()
    }
    pub fn from_i64(v: i64) -> Int {
        Int::from(v)
    }
    pub fn from_i128(v: i128) -> Int {
        Int::from(v)
    }
    pub fn to_i128(a: &Int) -> Option<i128> {
        a.to_i128()
    }
    pub fn add(a: &Int, b: &Int) -> Option<Int> {
        Some(a + b)
    }
    pub fn mul(a: &Int, b: &Int) -> Option<Int> {
        Some(a * b)
    }
    pub fn neg(a: &Int) -> Option<Int> {
        Some(-a)
    }
    pub fn div_exact(a: &Int, b: &Int) -> Int {
        a / b
    }
    pub fn div_floor(a: &Int, b: &Int) -> Int {
        a.div_floor(b)
    }
    pub fn rem_floor(a: &Int, b: &Int) -> Int {
        a.mod_floor(b)
    }
    pub fn gcd(a: &Int, b: &Int) -> Option<Int> {
        Some(a.gcd(b))
    }
    pub fn is_zero(a: &Int) -> bool {
        a.is_zero()
    }
    pub fn is_negative(a: &Int) -> bool {
        a.is_negative()
    }
    pub fn is_positive(a: &Int) -> bool {
        a.is_positive()
    }
    pub fn to_f64(a: &Int) -> f64 {
        a.to_f64().unwrap_or(f64::NAN)
    }
    pub fn parse(s: &str) -> Option<Int> {
        s.parse().ok()
    }
}

const OVERFLOW: &str = "rational arithmetic overflow";

/// An exact rational number `numer / denom` with `denom > 0` and
/// `gcd(|numer|, denom) = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational {
    numer: Int,
    denom: Int,
}

impl Rational {
    /// Builds `numer / denom` from machine integers. Panics if `denom == 0`.
    pub fn new(numer: i64, denom: i64) -> Self {
        Self::try_new(backend::from_i64(numer), backend::from_i64(denom)).expect("invalid rational")
    }

    pub fn try_new(numer: Int, denom: Int) -> Result<Self> {
        if backend::is_zero(&denom) {
            return Err(Error::DivisionByZero);
        }
        let (numer, denom) = if backend::is_negative(&denom) {
            (
                backend::neg(&numer).ok_or(Error::Overflow)?,
                backend::neg(&denom).ok_or(Error::Overflow)?,
            )
        } else {
            (numer, denom)
        };
        let g = backend::gcd(&numer, &denom).ok_or(Error::Overflow)?;
        if backend::is_zero(&numer) {
            return Ok(Self::zero());
        }
        Ok(Self {
            numer: backend::div_exact(&numer, &g),
            denom: backend::div_exact(&denom, &g),
        })
    }

    pub fn from_integer(v: i64) -> Self {
        Self {
            numer: backend::from_i64(v),
            denom: backend::one(),
        }
    }

    pub fn from_int(v: Int) -> Self {
        Self {
            numer: v,
            denom: backend::one(),
        }
    }

    pub fn from_i128(v: i128) -> Self {
        Self::from_int(backend::from_i128(v))
    }

    pub fn zero() -> Self {
        Self {
            numer: backend::zero(),
            denom: backend::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn numer(&self) -> &Int {
        &self.numer
    }

    pub fn denom(&self) -> &Int {
        &self.denom
    }

    pub fn is_zero(&self) -> bool {
        backend::is_zero(&self.numer)
    }

    pub fn is_positive(&self) -> bool {
        backend::is_positive(&self.numer)
    }

    pub fn is_negative(&self) -> bool {
        backend::is_negative(&self.numer)
    }

    pub fn is_integer(&self) -> bool {
        self.denom == backend::one()
    }

    /// The numerator as an `i128` when the value is an integer that fits.
    pub fn to_integer_i128(&self) -> Option<i128> {
        if self.is_integer() {
            backend::to_i128(&self.numer)
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        backend::to_f64(&self.numer) / backend::to_f64(&self.denom)
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn floor(&self) -> Self {
        Self::from_int(backend::div_floor(&self.numer, &self.denom))
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        if self.denom == rhs.denom {
            let n = backend::add(&self.numer, &rhs.numer).ok_or(Error::Overflow)?;
            return Self::try_new(n, self.denom.clone());
        }
        let g = backend::gcd(&self.denom, &rhs.denom).ok_or(Error::Overflow)?;
        let bl = backend::div_exact(&self.denom, &g);
        let br = backend::div_exact(&rhs.denom, &g);
        let left = backend::mul(&self.numer, &br).ok_or(Error::Overflow)?;
        let right = backend::mul(&rhs.numer, &bl).ok_or(Error::Overflow)?;
        let n = backend::add(&left, &right).ok_or(Error::Overflow)?;
        let d = backend::mul(&bl, &rhs.denom).ok_or(Error::Overflow)?;
        Self::try_new(n, d)
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        let negated = Self {
            numer: backend::neg(&rhs.numer).ok_or(Error::Overflow)?,
            denom: rhs.denom.clone(),
        };
        self.checked_add(&negated)
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.is_zero() || rhs.is_zero() {
            return Ok(Self::zero());
        }
        let g1 = backend::gcd(&self.numer, &rhs.denom).ok_or(Error::Overflow)?;
        let g2 = backend::gcd(&rhs.numer, &self.denom).ok_or(Error::Overflow)?;
        let n = backend::mul(
            &backend::div_exact(&self.numer, &g1),
            &backend::div_exact(&rhs.numer, &g2),
        )
        .ok_or(Error::Overflow)?;
        let d = backend::mul(
            &backend::div_exact(&self.denom, &g2),
            &backend::div_exact(&rhs.denom, &g1),
        )
        .ok_or(Error::Overflow)?;
        Ok(Self { numer: n, denom: d })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        self.checked_mul(&rhs.checked_recip()?)
    }

    pub fn checked_recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::try_new(self.denom.clone(), self.numer.clone())
    }

    pub fn recip(&self) -> Self {
        self.checked_recip().expect("reciprocal of zero")
    }

    /// `(self + other) / 2`
    pub fn midpoint(&self, other: &Self) -> Self {
        (self + other) / Rational::from_integer(2)
    }

    pub fn half(&self) -> Self {
        self / Rational::from_integer(2)
    }
}

/// Compares `a/b` with `c/d` for positive `b`, `d` without forming
/// cross products, by walking the continued-fraction expansions.
fn cmp_fractions(a: &Int, b: &Int, c: &Int, d: &Int) -> Ordering {
    let (mut a, mut b, mut c, mut d) = (a.clone(), b.clone(), c.clone(), d.clone());
    loop {
        let q1 = backend::div_floor(&a, &b);
        let q2 = backend::div_floor(&c, &d);
        if q1 != q2 {
            return q1.cmp(&q2);
        }
        let r1 = backend::rem_floor(&a, &b);
        let r2 = backend::rem_floor(&c, &d);
        match (backend::is_zero(&r1), backend::is_zero(&r2)) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            // r1/b vs r2/d has the same order as d/r2 vs b/r1
            (false, false) => {
                let (na, nb, nc, nd) = (d, r2, b, r1);
                a = na;
                b = nb;
                c = nc;
                d = nd;
            }
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.denom == other.denom {
            return self.numer.cmp(&other.numer);
        }
        if let (Some(l), Some(r)) = (
            backend::mul(&self.numer, &other.denom),
            backend::mul(&other.numer, &self.denom),
        ) {
            return l.cmp(&r);
        }
        cmp_fractions(&self.numer, &self.denom, &other.numer, &other.denom)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Default for Rational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Self::from_integer(v)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "{}/{}", self.numer, self.denom)
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `p/q` or a decimal literal such as `-0.25`, `3`, `1.5e-2`.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidLiteral(s.to_string());
        let s = s.trim();
        if s.is_empty() {
            return Err(bad());
        }
        if let Some((p, q)) = s.split_once('/') {
            if !is_signed_digits(p) || !is_signed_digits(q) {
                return Err(bad());
            }
            let p = backend::parse(p).ok_or_else(bad)?;
            let q = backend::parse(q).ok_or_else(bad)?;
            return Self::try_new(p, q).map_err(|e| match e {
                Error::DivisionByZero => bad(),
                other => other,
            });
        }
        parse_decimal(s).ok_or_else(bad)?
    }
}

fn is_signed_digits(s: &str) -> bool {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

fn parse_decimal(s: &str) -> Option<Result<Rational>> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], Some(&s[i + 1..])),
        None => (s, None),
    };
    let (negative, body) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let exp: i32 = match exponent {
        Some(e) if is_signed_digits(e) => e.parse().ok()?,
        Some(_) => return None,
        None => 0,
    };
    let digits = format!("{int_part}{frac_part}");
    let digits = digits.trim_start_matches('0');
    let numer = if digits.is_empty() {
        backend::zero()
    } else {
        backend::parse(digits)?
    };
    let scale = exp - frac_part.len() as i32;
    let ten = Rational::from_integer(10);
    let mut value = Rational::from_int(numer);
    let factor = match pow(&ten, scale.unsigned_abs()) {
        Ok(f) => f,
        Err(e) => return Some(Err(e)),
    };
    value = match if scale >= 0 {
        value.checked_mul(&factor)
    } else {
        value.checked_div(&factor)
    } {
        Ok(v) => v,
        Err(e) => return Some(Err(e)),
    };
    if negative {
        value = -value;
    }
    Some(Ok(value))
}

fn pow(base: &Rational, exp: u32) -> Result<Rational> {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Ok(acc)
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                self.$checked(rhs).expect(OVERFLOW)
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$checked(&rhs).expect(OVERFLOW)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                (&self).$checked(rhs).expect(OVERFLOW)
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$checked(&rhs).expect(OVERFLOW)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        match self.checked_div(rhs) {
            Ok(v) => v,
            Err(Error::DivisionByZero) => panic!("rational division by zero"),
            Err(_) => panic!("{}", OVERFLOW),
        }
    }
}
impl Div<Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        &self / &rhs
    }
}
impl Div<&Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        &self / rhs
    }
}
impl Div<Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        self / &rhs
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational {
            numer: backend::neg(&self.numer).expect(OVERFLOW),
            denom: self.denom.clone(),
        }
    }
}
impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        *self = &*self + rhs;
    }
}
impl AddAssign<Rational> for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        *self = &*self + &rhs;
    }
}
impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        *self = &*self - rhs;
    }
}
impl SubAssign<Rational> for Rational {
    fn sub_assign(&mut self, rhs: Rational) {
        *self = &*self - &rhs;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// Least common multiple of two positive integers.
pub fn lcm(a: &Int, b: &Int) -> Result<Int> {
    let g = backend::gcd(a, b).ok_or(Error::Overflow)?;
    backend::mul(&backend::div_exact(a, &g), b).ok_or(Error::Overflow)
}

/// Shorthand used throughout the crate and its tests.
pub fn q(numer: i64, denom: i64) -> Rational {
    Rational::new(numer, denom)
}
