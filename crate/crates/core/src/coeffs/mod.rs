//! The coefficient field ℂ in two modes.
//!
//! [`Coefficient::Exact`] holds a Gaussian rational and never loses
//! information. [`Coefficient::Float`] holds a [`Ball`]: a dyadic midpoint
//! rounded to a working precision plus a rigorous absolute error radius that
//! every operation keeps valid.

mod cpoly;
mod roots;

pub use cpoly::CPoly;
pub use roots::{croots, RootConfig};
pub(crate) use cpoly::coefficient_term;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exponents::Rational;

/// Default working precision of float mode, in bits.
pub const DEFAULT_PRECISION: u32 = 128;
/// Default cap for precision escalation, in bits.
pub const DEFAULT_MAX_PRECISION: u32 = 1024;
/// Mantissa length radii are rounded up to.
const RADIUS_BITS: u32 = 32;

/// Arithmetic mode of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

/// `re + im·i` with exact rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Gaussian {
    pub re: Rational,
    pub im: Rational,
}

impl Gaussian {
    pub fn new(re: Rational, im: Rational) -> Self {
        Gaussian { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Gaussian {
            re,
            im: Rational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        Gaussian::new(self.re.clone(), -&self.im)
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Gaussian::new(&self.re / &n, -&self.im / &n))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Gaussian::new(&self.re * q, &self.im * q)
    }

    /// Max of the absolute real and imaginary parts, a lower bound for the
    /// modulus that is within a factor √2 of it.
    pub(crate) fn linf(&self) -> Rational {
        let (a, b) = (self.re.abs(), self.im.abs());
        if a > b {
            a
        } else {
            b
        }
    }

    pub(crate) fn l1(&self) -> Rational {
        self.re.abs() + self.im.abs()
    }

    /// Nearest Gaussian integer, parts rounded half away from zero.
    pub(crate) fn round(&self) -> Self {
        Gaussian::new(self.re.round(), self.im.round())
    }

    pub(crate) fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    pub(crate) fn round_to(&self, prec: u32) -> (Self, Rational) {
        let (re, e1) = round_to_bits(&self.re, prec);
        let (im, e2) = round_to_bits(&self.im, prec);
        (Gaussian::new(re, im), e1 + e2)
    }
}

impl<'a> Add<&'a Gaussian> for &'a Gaussian {
    type Output = Gaussian;
    fn add(self, o: &'a Gaussian) -> Gaussian {
        Gaussian::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a Gaussian> for &'a Gaussian {
    type Output = Gaussian;
    fn sub(self, o: &'a Gaussian) -> Gaussian {
        Gaussian::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a Gaussian> for &'a Gaussian {
    type Output = Gaussian;
    fn mul(self, o: &'a Gaussian) -> Gaussian {
        Gaussian::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &Gaussian {
    type Output = Gaussian;
    fn neg(self) -> Gaussian {
        Gaussian::new(-&self.re, -&self.im)
    }
}

/// Approximate `log2 |q|`; `-inf` for zero.
pub(crate) fn log2_abs(q: &Rational) -> f64 {
    if q.is_zero() {
        return f64::NEG_INFINITY;
    }
    fn top(n: &BigInt) -> (f64, i64) {
        let bits = n.bits() as i64;
        let shift = (bits - 60).max(0);
        let head = (n.abs() >> shift as usize).to_f64().unwrap();
        (head, shift)
    }
    let (a, sa) = top(q.numer());
    let (b, sb) = top(q.denom());
    (a / b).log2() + (sa - sb) as f64
}

fn pow2(k: i64) -> Rational {
    if k >= 0 {
        Rational::from_integer(BigInt::one() << k as usize)
    } else {
        Rational::new(BigInt::one(), BigInt::one() << (-k) as usize)
    }
}

/// Rounds `x` to `prec` significant bits. Returns the dyadic result and a
/// bound on the absolute rounding error.
pub(crate) fn round_to_bits(x: &Rational, prec: u32) -> (Rational, Rational) {
    if x.is_zero() {
        return (Rational::zero(), Rational::zero());
    }
    let mag = x.numer().bits() as i64 - x.denom().bits() as i64;
    let shift = prec as i64 - mag;
    let scaled = x * pow2(shift);
    if scaled.is_integer() {
        return (x.clone(), Rational::zero());
    }
    let rounded = scaled.round();
    (rounded * pow2(-shift), pow2(-shift - 1))
}

/// Rounds a nonnegative radius up to a short mantissa.
pub(crate) fn round_up(r: &Rational) -> Rational {
    if r.is_zero() {
        return Rational::zero();
    }
    let mag = r.numer().bits() as i64 - r.denom().bits() as i64;
    let shift = RADIUS_BITS as i64 - mag;
    (r * pow2(shift)).ceil() * pow2(-shift)
}

/// A complex disc: dyadic midpoint at `prec` bits and an absolute radius.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ball {
    mid: Gaussian,
    rad: Rational,
    prec: u32,
}

impl Ball {
    /// Rounds `mid` to `prec` bits and widens `rad` by the rounding error.
    pub fn new(mid: Gaussian, rad: Rational, prec: u32) -> Self {
        let (mid, err) = mid.round_to(prec);
        Ball {
            mid,
            rad: round_up(&(rad.abs() + err)),
            prec,
        }
    }

    pub fn exact(mid: &Gaussian, prec: u32) -> Self {
        Ball::new(mid.clone(), Rational::zero(), prec)
    }

    pub fn mid(&self) -> &Gaussian {
        &self.mid
    }

    pub fn rad(&self) -> &Rational {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// True iff the disc contains zero.
    pub fn contains_zero(&self) -> bool {
        self.mid.norm_sqr() <= &self.rad * &self.rad
    }

    pub fn add(&self, o: &Ball) -> Ball {
        Ball::new(
            &self.mid + &o.mid,
            &self.rad + &o.rad,
            self.prec.max(o.prec),
        )
    }

    pub fn sub(&self, o: &Ball) -> Ball {
        Ball::new(
            &self.mid - &o.mid,
            &self.rad + &o.rad,
            self.prec.max(o.prec),
        )
    }

    pub fn mul(&self, o: &Ball) -> Ball {
        let rad = self.mid.l1() * &o.rad + o.mid.l1() * &self.rad + &self.rad * &o.rad;
        Ball::new(&self.mid * &o.mid, rad, self.prec.max(o.prec))
    }

    pub fn neg(&self) -> Ball {
        Ball {
            mid: -&self.mid,
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }

    pub fn scale(&self, q: &Rational) -> Ball {
        Ball::new(self.mid.scale(q), &self.rad * q.abs(), self.prec)
    }

    pub fn inv(&self) -> Result<Ball> {
        let m = self.mid.linf();
        if m <= self.rad {
            return Err(Error::NumericallyZeroDivisor);
        }
        let inv = self.mid.inv().ok_or(Error::NumericallyZeroDivisor)?;
        let rad = &self.rad / (&m * (&m - &self.rad));
        Ok(Ball::new(inv, rad, self.prec))
    }
}

/// A complex number in exact or float mode.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coefficient {
    Exact(Gaussian),
    Float(Ball),
}

impl Default for Coefficient {
    fn default() -> Self {
        Coefficient::zero()
    }
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient::Exact(Gaussian::default())
    }

    pub fn one() -> Self {
        Coefficient::from_int(1)
    }

    pub fn i() -> Self {
        Coefficient::Exact(Gaussian::new(Rational::zero(), Rational::one()))
    }

    pub fn from_int(n: i64) -> Self {
        Coefficient::from_rational(Rational::from_integer(n.into()))
    }

    pub fn from_rational(q: Rational) -> Self {
        Coefficient::Exact(Gaussian::real(q))
    }

    pub fn exact(re: Rational, im: Rational) -> Self {
        Coefficient::Exact(Gaussian::new(re, im))
    }

    /// The disc `mid ± rad` at precision `prec`.
    pub fn float(mid: Gaussian, rad: Rational, prec: u32) -> Self {
        Coefficient::Float(Ball::new(mid, rad, prec))
    }

    /// An f64 complex value, exact as a dyadic, in float mode.
    pub fn from_c64(z: Complex64, prec: u32) -> Self {
        let re = Rational::from_float(z.re).unwrap_or_else(Rational::zero);
        let im = Rational::from_float(z.im).unwrap_or_else(Rational::zero);
        Coefficient::float(Gaussian::new(re, im), Rational::zero(), prec)
    }

    pub fn mode(&self) -> Mode {
        match self {
            Coefficient::Exact(_) => Mode::Exact,
            Coefficient::Float(_) => Mode::Float,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coefficient::Exact(_))
    }

    /// Exactly zero in exact mode; numerically zero in float mode.
    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Exact(g) => g.is_zero(),
            Coefficient::Float(b) => b.contains_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Coefficient::Exact(g) if g.re.is_one() && g.im.is_zero())
    }

    pub fn as_exact(&self) -> Option<&Gaussian> {
        match self {
            Coefficient::Exact(g) => Some(g),
            Coefficient::Float(_) => None,
        }
    }

    /// Midpoint; the value itself in exact mode.
    pub fn mid(&self) -> &Gaussian {
        match self {
            Coefficient::Exact(g) => g,
            Coefficient::Float(b) => &b.mid,
        }
    }

    /// Error radius; zero in exact mode.
    pub fn radius(&self) -> Rational {
        match self {
            Coefficient::Exact(_) => Rational::zero(),
            Coefficient::Float(b) => b.rad.clone(),
        }
    }

    pub fn precision(&self) -> Option<u32> {
        match self {
            Coefficient::Exact(_) => None,
            Coefficient::Float(b) => Some(b.prec),
        }
    }

    pub fn to_float(&self, prec: u32) -> Coefficient {
        match self {
            Coefficient::Exact(g) => Coefficient::Float(Ball::exact(g, prec)),
            Coefficient::Float(b) if b.prec >= prec => self.clone(),
            Coefficient::Float(b) => Coefficient::Float(Ball::new(b.mid.clone(), b.rad.clone(), prec)),
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        self.mid().to_c64()
    }

    /// Upper bound on the modulus as an f64.
    pub fn abs_upper(&self) -> f64 {
        let (m, r) = (self.mid().l1(), self.radius());
        (m + r).to_f64().unwrap_or(f64::INFINITY)
    }

    fn binary(
        &self,
        o: &Coefficient,
        exact: impl Fn(&Gaussian, &Gaussian) -> Gaussian,
        float: impl Fn(&Ball, &Ball) -> Ball,
    ) -> Coefficient {
        match (self, o) {
            (Coefficient::Exact(a), Coefficient::Exact(b)) => Coefficient::Exact(exact(a, b)),
            (Coefficient::Float(a), Coefficient::Float(b)) => Coefficient::Float(float(a, b)),
            (Coefficient::Exact(a), Coefficient::Float(b)) => {
                Coefficient::Float(float(&Ball::exact(a, b.prec), b))
            }
            (Coefficient::Float(a), Coefficient::Exact(b)) => {
                Coefficient::Float(float(a, &Ball::exact(b, a.prec)))
            }
        }
    }

    pub fn scale(&self, q: &Rational) -> Coefficient {
        match self {
            Coefficient::Exact(g) => Coefficient::Exact(g.scale(q)),
            Coefficient::Float(b) => Coefficient::Float(b.scale(q)),
        }
    }

    pub fn inv(&self) -> Result<Coefficient> {
        match self {
            Coefficient::Exact(g) => g.inv().map(Coefficient::Exact).ok_or(Error::DivisionByZero),
            Coefficient::Float(b) => b.inv().map(Coefficient::Float),
        }
    }

    pub fn div(&self, o: &Coefficient) -> Result<Coefficient> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, k: u32) -> Coefficient {
        let mut acc = Coefficient::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Canonical ordering by real part, then imaginary part, of the midpoint.
    pub fn canonical_cmp(&self, o: &Coefficient) -> Ordering {
        let (a, b) = (self.mid(), o.mid());
        a.re.cmp(&b.re).then_with(|| a.im.cmp(&b.im))
    }
}

impl<'a> Add<&'a Coefficient> for &'a Coefficient {
    type Output = Coefficient;
    fn add(self, o: &'a Coefficient) -> Coefficient {
        self.binary(o, |a, b| a + b, Ball::add)
    }
}

impl<'a> Sub<&'a Coefficient> for &'a Coefficient {
    type Output = Coefficient;
    fn sub(self, o: &'a Coefficient) -> Coefficient {
        self.binary(o, |a, b| a - b, Ball::sub)
    }
}

impl<'a> Mul<&'a Coefficient> for &'a Coefficient {
    type Output = Coefficient;
    fn mul(self, o: &'a Coefficient) -> Coefficient {
        self.binary(o, |a, b| a * b, Ball::mul)
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        match self {
            Coefficient::Exact(g) => Coefficient::Exact(-g),
            Coefficient::Float(b) => Coefficient::Float(b.neg()),
        }
    }
}

impl From<i64> for Coefficient {
    fn from(n: i64) -> Self {
        Coefficient::from_int(n)
    }
}

impl From<Rational> for Coefficient {
    fn from(q: Rational) -> Self {
        Coefficient::from_rational(q)
    }
}

impl From<Gaussian> for Coefficient {
    fn from(g: Gaussian) -> Self {
        Coefficient::Exact(g)
    }
}

/// Decimal rendering of a rational with `digits` significant digits;
/// scientific notation outside `[1e-6, 1e21)`.
pub(crate) fn decimal(q: &Rational, digits: usize) -> String {
    if q.is_zero() {
        return "0".into();
    }
    let sign = if q.is_negative() { "-" } else { "" };
    let a = q.abs();
    let mut e10 = (log2_abs(&a) * std::f64::consts::LOG10_2).floor() as i64;
    let ten = Rational::from_integer(10.into());
    let pow10 = |k: i64| -> Rational {
        if k >= 0 {
            num_traits::pow(ten.clone(), k as usize)
        } else {
            num_traits::pow(ten.clone(), (-k) as usize).recip()
        }
    };
    // fix the estimate so that 10^e10 <= a < 10^(e10+1)
    while pow10(e10) > a {
        e10 -= 1;
    }
    while pow10(e10 + 1) <= a {
        e10 += 1;
    }
    let mut s = (&a * pow10(digits as i64 - 1 - e10)).round().to_integer().to_string();
    if s.len() > digits {
        e10 += 1;
        s.truncate(digits);
    }
    let s = s.trim_end_matches('0');
    let s = if s.is_empty() { "0" } else { s };
    let body = if (-6..21).contains(&e10) {
        if e10 >= 0 {
            let int_len = e10 as usize + 1;
            if s.len() <= int_len {
                format!("{s}{}", "0".repeat(int_len - s.len()))
            } else {
                format!("{}.{}", &s[..int_len], &s[int_len..])
            }
        } else {
            format!("0.{}{s}", "0".repeat((-e10 - 1) as usize))
        }
    } else {
        let mantissa = if s.len() > 1 {
            format!("{}.{}", &s[..1], &s[1..])
        } else {
            s.to_string()
        };
        format!("{mantissa}e{e10}")
    };
    format!("{sign}{body}")
}

fn fmt_parts(re: String, im: String, re_zero: bool, im_zero: bool) -> String {
    let imag = |im: &str| match im {
        "1" => "i".to_string(),
        "-1" => "-i".to_string(),
        _ => format!("{im}*i"),
    };
    match (re_zero, im_zero) {
        (_, true) => re,
        (true, false) => imag(&im),
        (false, false) => {
            let i = imag(&im);
            if i.starts_with('-') {
                format!("{re}{i}")
            } else {
                format!("{re}+{i}")
            }
        }
    }
}

/// Exact values print as `a+b*i` with rationals; floats print their midpoint
/// in decimal.
impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Exact(g) => f.write_str(&fmt_parts(
                g.re.to_string(),
                g.im.to_string(),
                g.re.is_zero(),
                g.im.is_zero(),
            )),
            Coefficient::Float(b) => {
                let digits = ((b.prec as f64 * std::f64::consts::LOG10_2) as usize).clamp(6, 40);
                f.write_str(&fmt_parts(
                    decimal(&b.mid.re, digits),
                    decimal(&b.mid.im, digits),
                    b.mid.re.is_zero(),
                    b.mid.im.is_zero(),
                ))
            }
        }
    }
}

/// `n choose k` as a rational.
pub(crate) fn binomial(n: usize, k: usize) -> Rational {
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    Rational::from_integer(acc)
}
