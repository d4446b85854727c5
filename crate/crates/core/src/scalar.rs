//! Exact scalars in the Gaussian rationals `Q(i)` and the small coefficient
//! trait shared by exact and floating Fourier-Taylor data.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An element `re + im*i` of `Q(i)` with arbitrary-precision parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QI {
    pub re: BigRational,
    pub im: BigRational,
}

impl QI {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        QI { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        QI { re, im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        QI::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        QI::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn i() -> Self {
        QI { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn zero() -> Self {
        QI::default()
    }

    pub fn one() -> Self {
        QI::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        QI { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `|z|^2`, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(QI::real(self.re.recip()));
        }
        let n = self.norm_sqr();
        Some(QI { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        QI { re: &self.re * r, im: &self.im * r }
    }
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back through the integer parts when the ratio is huge.
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

impl fmt::Display for QI {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let im_abs = self.im.abs();
        let im_str = if im_abs.is_one() { String::new() } else { im_abs.to_string() };
        if self.re.is_zero() {
            let sign = if self.im.is_negative() { "-" } else { "" };
            return write!(f, "{sign}{im_str}i");
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}i", self.re, sign, im_str)
    }
}

impl fmt::Debug for QI {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses an exact rational: `p`, `p/q`, or a finite decimal such as `-0.125`
/// or `1.5e-3`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact rational: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all = format!("{int_part}{frac_part}");
    let mut num = BigInt::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| bad())?;
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    })
}

impl FromStr for QI {
    type Err = Error;

    /// Accepts `a`, `bi`, `a+bi`, `a-bi` with exact rational or decimal parts,
    /// e.g. `1/2-3/4i` or `i`.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let Some(body) = t.strip_suffix('i') else {
            return Ok(QI::real(parse_rational(&t)?));
        };
        // Split at the last sign that is not the leading one and not part of an exponent.
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let c = bytes[idx] as char;
            if (c == '+' || c == '-') && !matches!(bytes[idx - 1] as char, 'e' | 'E') {
                split = Some(idx);
                break;
            }
        }
        let coeff = |p: &str| -> Result<BigRational> {
            match p {
                "" | "+" => Ok(BigRational::one()),
                "-" => Ok(-BigRational::one()),
                _ => parse_rational(p),
            }
        };
        match split {
            Some(idx) => Ok(QI { re: parse_rational(&body[..idx])?, im: coeff(&body[idx..])? }),
            None => Ok(QI { re: BigRational::zero(), im: coeff(body)? }),
        }
    }
}

impl serde::Serialize for QI {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for QI {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for QI {
    fn from(n: i64) -> Self {
        QI::from_int(n)
    }
}

impl From<BigRational> for QI {
    fn from(r: BigRational) -> Self {
        QI::real(r)
    }
}

impl<'a, 'b> Add<&'b QI> for &'a QI {
    type Output = QI;
    fn add(self, o: &QI) -> QI {
        QI { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a, 'b> Sub<&'b QI> for &'a QI {
    type Output = QI;
    fn sub(self, o: &QI) -> QI {
        QI { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a, 'b> Mul<&'b QI> for &'a QI {
    type Output = QI;
    fn mul(self, o: &QI) -> QI {
        if self.is_zero() || o.is_zero() {
            return QI::zero();
        }
        match (self.im.is_zero(), o.im.is_zero()) {
            (true, true) => QI::real(&self.re * &o.re),
            (true, false) => QI { re: &self.re * &o.re, im: &self.re * &o.im },
            (false, true) => QI { re: &self.re * &o.re, im: &self.im * &o.re },
            (false, false) => QI {
                re: &self.re * &o.re - &self.im * &o.im,
                im: &self.re * &o.im + &self.im * &o.re,
            },
        }
    }
}

impl<'a, 'b> Div<&'b QI> for &'a QI {
    type Output = QI;
    fn div(self, o: &QI) -> QI {
        let inv = o.inv().expect("division by zero in Q(i)");
        self * &inv
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<QI> for QI {
            type Output = QI;
            fn $m(self, o: QI) -> QI { <&QI as $tr<&QI>>::$m(&self, &o) }
        }
        impl<'a> $tr<&'a QI> for QI {
            type Output = QI;
            fn $m(self, o: &QI) -> QI { <&QI as $tr<&QI>>::$m(&self, o) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for QI {
    type Output = QI;
    fn neg(self) -> QI {
        QI { re: -self.re, im: -self.im }
    }
}

impl Neg for &QI {
    type Output = QI;
    fn neg(self) -> QI {
        QI { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl AddAssign<&QI> for QI {
    fn add_assign(&mut self, o: &QI) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&QI> for QI {
    fn sub_assign(&mut self, o: &QI) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

/// Coefficient arithmetic needed by Fourier-Taylor series. Implemented for the
/// exact field `Q(i)` and for `Complex64`.
pub trait Coefficient: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// Division by a nonzero integer.
    fn div_int(&self, n: i64) -> Self;
    fn to_c64(&self) -> Complex64;
    fn parse_text(s: &str) -> Result<Self>;
    fn render(&self) -> String;
}

impl Coefficient for QI {
    fn zero() -> Self {
        QI::zero()
    }
    fn from_i64(n: i64) -> Self {
        QI::from_int(n)
    }
    fn is_zero(&self) -> bool {
        QI::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div_int(&self, n: i64) -> Self {
        assert!(n != 0, "division by zero");
        let d = BigRational::from_integer(BigInt::from(n));
        QI { re: &self.re / &d, im: &self.im / &d }
    }
    fn to_c64(&self) -> Complex64 {
        QI::to_c64(self)
    }
    fn parse_text(s: &str) -> Result<Self> {
        s.parse()
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Coefficient for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div_int(&self, n: i64) -> Self {
        self / n as f64
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn parse_text(s: &str) -> Result<Self> {
        Ok(s.parse::<QI>()?.to_c64())
    }
    fn render(&self) -> String {
        match (self.re == 0.0, self.im == 0.0) {
            (_, true) => format!("{}", self.re),
            (true, false) => format!("{}i", self.im),
            (false, false) if self.im < 0.0 => format!("{}-{}i", self.re, -self.im),
            (false, false) => format!("{}+{}i", self.re, self.im),
        }
    }
}
