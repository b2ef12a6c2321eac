//! Scalar fields.
//!
//! Everything in the crate is generic over [`Field`]. Exact work happens over
//! [`Rational`], [`QSqrt2`] and their Gaussian extensions [`Cx`]; `f64` and
//! `Cx<f64>` exist for the float paths and compare against zero with an
//! explicit tolerance.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num::BigRational;
pub type Gauss = Cx<Rational>;
pub type Cyc8 = Cx<QSqrt2>;
pub type C64 = Cx<f64>;

/// Absolute threshold below which a float is treated as zero by `is_zero`.
pub const FLOAT_ZERO: f64 = 1e-12;

pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(n: i64) -> Self;
    fn from_rational(q: &Rational) -> Self;
    fn inv(&self) -> Option<Self>;
    /// A size measure used for pivoting and reporting (never for exact decisions).
    fn magnitude(&self) -> f64;

    fn is_negligible(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= tol
        }
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * i)
    }

    fn ratio(n: i64, d: i64) -> Self {
        Self::from_rational(&Rational::new(BigInt::from(n), BigInt::from(d)))
    }
}

/// Ordered real fields.
pub trait RealField: Field {
    fn to_f64(&self) -> f64;
    /// −1, 0 or +1, decided exactly for exact fields.
    fn signum(&self) -> i32;
    /// Square root if it lies in the field.
    fn sqrt_exact(&self) -> Option<Self>;
    fn from_f64(x: f64) -> Option<Self>;
}

// ---------------------------------------------------------------- rationals

impl Field for Rational {
    const EXACT: bool = true;
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn magnitude(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::INFINITY).abs()
    }
}

impl RealField for Rational {
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn signum(&self) -> i32 {
        if Zero::is_zero(self) {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }
    fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = isqrt(self.numer())?;
        let d = isqrt(self.denom())?;
        Some(Rational::new(n, d))
    }
    fn from_f64(x: f64) -> Option<Self> {
        Rational::from_float(x)
    }
}

fn isqrt(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Formats a rational as `num/den` in lowest terms.
pub fn fmt_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if Zero::is_zero(&d) {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

// ---------------------------------------------------------------- floats

impl Field for f64 {
    const EXACT: bool = false;
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        self.abs() <= FLOAT_ZERO
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_rational(q: &Rational) -> Self {
        RealField::to_f64(q)
    }
    fn inv(&self) -> Option<Self> {
        (*self != 0.0).then(|| 1.0 / self)
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl RealField for f64 {
    fn to_f64(&self) -> f64 {
        *self
    }
    fn signum(&self) -> i32 {
        if Field::is_zero(self) {
            0
        } else if *self > 0.0 {
            1
        } else {
            -1
        }
    }
    fn sqrt_exact(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }
    fn from_f64(x: f64) -> Option<Self> {
        Some(x)
    }
}

// ---------------------------------------------------------------- Q(√2)

/// `a + b√2` with rational `a`, `b`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QSqrt2 {
    pub a: Rational,
    pub b: Rational,
}

impl QSqrt2 {
    pub fn new(a: Rational, b: Rational) -> Self {
        QSqrt2 { a, b }
    }
    pub fn sqrt2() -> Self {
        QSqrt2::new(int(0), int(1))
    }
    /// The Galois conjugate `a − b√2`.
    pub fn galois(&self) -> Self {
        QSqrt2::new(self.a.clone(), -self.b.clone())
    }
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - int(2) * &self.b * &self.b
    }
}

impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}*sqrt2", fmt_rational(&self.a), fmt_rational(&self.b))
    }
}

impl Add for QSqrt2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        QSqrt2::new(self.a + o.a, self.b + o.b)
    }
}
impl Sub for QSqrt2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        QSqrt2::new(self.a - o.a, self.b - o.b)
    }
}
impl Mul for QSqrt2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let a = &self.a * &o.a + int(2) * &self.b * &o.b;
        let b = &self.a * &o.b + &self.b * &o.a;
        QSqrt2::new(a, b)
    }
}
impl Neg for QSqrt2 {
    type Output = Self;
    fn neg(self) -> Self {
        QSqrt2::new(-self.a, -self.b)
    }
}

impl Field for QSqrt2 {
    const EXACT: bool = true;
    fn zero() -> Self {
        QSqrt2::new(int(0), int(0))
    }
    fn one() -> Self {
        QSqrt2::new(int(1), int(0))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
    fn from_i64(n: i64) -> Self {
        QSqrt2::new(int(n), int(0))
    }
    fn from_rational(q: &Rational) -> Self {
        QSqrt2::new(q.clone(), int(0))
    }
    fn inv(&self) -> Option<Self> {
        // a² − 2b² vanishes only at zero since √2 is irrational.
        let n = self.norm();
        if Zero::is_zero(&n) {
            return None;
        }
        let g = self.galois();
        Some(QSqrt2::new(g.a / &n, g.b / &n))
    }
    fn magnitude(&self) -> f64 {
        RealField::to_f64(self).abs()
    }
}

impl RealField for QSqrt2 {
    fn to_f64(&self) -> f64 {
        RealField::to_f64(&self.a) + RealField::to_f64(&self.b) * std::f64::consts::SQRT_2
    }
    fn signum(&self) -> i32 {
        let sa = RealField::signum(&self.a);
        let sb = RealField::signum(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a² with 2b²
        let a2 = &self.a * &self.a;
        let b2 = int(2) * &self.b * &self.b;
        if a2 > b2 {
            sa
        } else {
            sb
        }
    }
    fn sqrt_exact(&self) -> Option<Self> {
        if !Zero::is_zero(&self.b) {
            return None;
        }
        if let Some(r) = self.a.sqrt_exact() {
            return Some(QSqrt2::new(r, int(0)));
        }
        (&self.a / int(2))
            .sqrt_exact()
            .map(|r| QSqrt2::new(int(0), r))
    }
    fn from_f64(x: f64) -> Option<Self> {
        Rational::from_float(x).map(|q| QSqrt2::new(q, int(0)))
    }
}

// ---------------------------------------------------------------- Gaussian extension

/// `re + im·i` over a real field.
#[derive(Clone, Copy, PartialEq, Debug, Default)]
pub struct Cx<R> {
    pub re: R,
    pub im: R,
}

impl<R: RealField> Cx<R> {
    pub fn new(re: R, im: R) -> Self {
        Cx { re, im }
    }
    pub fn real(re: R) -> Self {
        Cx { re, im: R::zero() }
    }
    pub fn i() -> Self {
        Cx::new(R::zero(), R::one())
    }
    pub fn conj(&self) -> Self {
        Cx::new(self.re.clone(), -self.im.clone())
    }
    pub fn norm_sqr(&self) -> R {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }
    pub fn scale(&self, r: &R) -> Self {
        Cx::new(self.re.clone() * r.clone(), self.im.clone() * r.clone())
    }
    pub fn to_c64(&self) -> C64 {
        Cx::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl C64 {
    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }
    pub fn to_num(self) -> num::complex::Complex64 {
        num::complex::Complex64::new(self.re, self.im)
    }
    pub fn from_num(z: num::complex::Complex64) -> Self {
        Cx::new(z.re, z.im)
    }
}

impl<R: RealField> fmt::Display for Cx<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}*i", self.re, self.im)
    }
}

impl<R: RealField> Add for Cx<R> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Cx::new(self.re + o.re, self.im + o.im)
    }
}
impl<R: RealField> Sub for Cx<R> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Cx::new(self.re - o.re, self.im - o.im)
    }
}
impl<R: RealField> Mul for Cx<R> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let re = self.re.clone() * o.re.clone() - self.im.clone() * o.im.clone();
        let im = self.re * o.im + self.im * o.re;
        Cx::new(re, im)
    }
}
impl<R: RealField> Neg for Cx<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Cx::new(-self.re, -self.im)
    }
}

impl<R: RealField> Field for Cx<R> {
    const EXACT: bool = R::EXACT;
    fn zero() -> Self {
        Cx::new(R::zero(), R::zero())
    }
    fn one() -> Self {
        Cx::new(R::one(), R::zero())
    }
    fn is_zero(&self) -> bool {
        if R::EXACT {
            self.re.is_zero() && self.im.is_zero()
        } else {
            self.magnitude() <= FLOAT_ZERO
        }
    }
    fn from_i64(n: i64) -> Self {
        Cx::real(R::from_i64(n))
    }
    fn from_rational(q: &Rational) -> Self {
        Cx::real(R::from_rational(q))
    }
    fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr().inv()?;
        Some(self.conj().scale(&n))
    }
    fn magnitude(&self) -> f64 {
        self.re.magnitude().hypot(self.im.magnitude())
    }
}

// ---------------------------------------------------------------- text forms

/// Scalars with a stable textual form for the JSON files.
pub trait ScalarText: Field {
    const COMPLEX: bool;
    fn to_text(&self) -> String;
    fn parse_text(s: &str) -> Result<Self>;
}

impl ScalarText for Rational {
    const COMPLEX: bool = false;
    fn to_text(&self) -> String {
        fmt_rational(self)
    }
    fn parse_text(s: &str) -> Result<Self> {
        parse_rational(s)
    }
}

impl ScalarText for QSqrt2 {
    const COMPLEX: bool = false;
    fn to_text(&self) -> String {
        if Zero::is_zero(&self.b) {
            fmt_rational(&self.a)
        } else {
            self.to_string()
        }
    }
    fn parse_text(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.strip_suffix("*sqrt2") {
            None => Ok(QSqrt2::from_rational(&parse_rational(s)?)),
            Some(body) => {
                let (a, b) = split_sum(body)
                    .ok_or_else(|| Error::Parse(format!("not an element of Q(sqrt2): {s:?}")))?;
                Ok(QSqrt2::new(parse_rational(a)?, parse_rational(b)?))
            }
        }
    }
}

impl ScalarText for f64 {
    const COMPLEX: bool = false;
    fn to_text(&self) -> String {
        format!("{self:e}")
    }
    fn parse_text(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(x) = s.parse::<f64>() {
            return Ok(x);
        }
        Ok(RealField::to_f64(&parse_rational(s)?))
    }
}

impl<R: RealField + ScalarText> ScalarText for Cx<R> {
    const COMPLEX: bool = true;
    fn to_text(&self) -> String {
        format!("{}+{}*i", self.re.to_text(), self.im.to_text())
    }
    fn parse_text(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.strip_suffix("*i") {
            None => Ok(Cx::real(R::parse_text(s)?)),
            Some(body) => {
                let (a, b) = split_sum(body)
                    .ok_or_else(|| Error::Parse(format!("not a complex scalar: {s:?}")))?;
                Ok(Cx::new(R::parse_text(a)?, R::parse_text(b)?))
            }
        }
    }
}

/// Splits `a+b` / `a-b` at the top-level sign that separates the two parts.
/// Signs directly after `e`/`E` (float exponents) or `/` are skipped.
fn split_sum(s: &str) -> Option<(&str, &str)> {
    let bytes = s.as_bytes();
    for idx in (1..bytes.len()).rev() {
        let c = bytes[idx];
        if c != b'+' && c != b'-' {
            continue;
        }
        let prev = bytes[idx - 1];
        if prev == b'e' || prev == b'E' || prev == b'/' || prev == b'+' || prev == b'-' {
            continue;
        }
        let (a, b) = s.split_at(idx);
        let b = if c == b'+' { &b[1..] } else { b };
        return Some((a, b));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qsqrt2_inverse_and_sign() {
        let x = QSqrt2::new(int(1), int(-1)); // 1 − √2 < 0
        assert_eq!(x.signum(), -1);
        assert_eq!(x.clone() * x.inv().unwrap(), QSqrt2::one());
        assert_eq!(QSqrt2::new(int(-3), int(2)).signum(), -1);
        assert_eq!(QSqrt2::new(int(-2), int(2)).signum(), 1);
        assert_eq!(QSqrt2::sqrt2() * QSqrt2::sqrt2(), QSqrt2::from_i64(2));
    }

    #[test]
    fn sqrt_exact_cases() {
        assert_eq!(rat(9, 4).sqrt_exact(), Some(rat(3, 2)));
        assert_eq!(int(2).sqrt_exact(), None);
        assert_eq!(QSqrt2::from_i64(2).sqrt_exact(), Some(QSqrt2::sqrt2()));
        assert_eq!(QSqrt2::from_i64(4).sqrt_exact(), Some(QSqrt2::from_i64(2)));
    }

    #[test]
    fn gaussian_inverse() {
        let z = Gauss::new(rat(1, 2), int(-3));
        assert_eq!(z.clone() * z.inv().unwrap(), Gauss::one());
        assert!(Gauss::zero().inv().is_none());
    }

    #[test]
    fn text_round_trips() {
        for s in ["3/4", "-1/1", "0/1"] {
            assert_eq!(Rational::parse_text(s).unwrap().to_text(), s);
        }
        let g = Gauss::new(rat(-1, 3), rat(5, 2));
        assert_eq!(g.to_text(), "-1/3+5/2*i");
        assert_eq!(Gauss::parse_text(&g.to_text()).unwrap(), g);
        let h = Gauss::new(rat(1, 2), rat(-7, 1));
        assert_eq!(Gauss::parse_text(&h.to_text()).unwrap(), h);
        let q = QSqrt2::new(rat(1, 2), rat(-3, 1));
        assert_eq!(QSqrt2::parse_text(&q.to_text()).unwrap(), q);
        let c = Cx::new(-1.5e-3, 2.0e10);
        assert_eq!(C64::parse_text(&c.to_text()).unwrap(), c);
        assert!(Rational::parse_text("1/0").is_err());
        assert!(Gauss::parse_text("x+y*i").is_err());
    }
}
