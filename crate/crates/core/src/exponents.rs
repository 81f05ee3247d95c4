//! Exact real exponents.
//!
//! An [`Exponent`] is a ℚ-linear combination of named real constants held in
//! the process-wide [`RealBasis`]. The constant `1` always sits at index 0, so
//! rational exponents are vectors of length at most one. Equality is decided
//! on the coefficient vectors; ordering is decided by refining interval
//! enclosures of the difference until it excludes zero, which terminates as
//! long as the registered constants are linearly independent over ℚ together
//! with `1`. That independence is assumed and never checked.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Produces, for `bits = k`, a closed rational interval of width at most
/// `2^-k` containing the constant.
pub type Evaluator = Arc<dyn Fn(u32) -> (Rational, Rational) + Send + Sync>;

/// Width of the first enclosure tried when comparing, as `2^-START_BITS`.
const START_BITS: u32 = 4;
/// Refinement gives up past this width; reaching it means the registered
/// constants are not independent.
const MAX_BITS: u32 = 8192;

struct Constant {
    name: String,
    eval: Evaluator,
    approx: f64,
    cache: Mutex<HashMap<u32, (Rational, Rational)>>,
}

impl Constant {
    fn new(name: &str, eval: Evaluator) -> Self {
        let (lo, hi) = eval(64);
        let approx = ((lo + hi) / Rational::from_integer(2.into())).to_f64().unwrap_or(f64::NAN);
        Constant {
            name: name.to_string(),
            eval,
            approx,
            cache: Mutex::new(HashMap::new()),
        }
    }

    fn enclose(&self, bits: u32) -> (Rational, Rational) {
        if let Some(hit) = self.cache.lock().unwrap().get(&bits) {
            return hit.clone();
        }
        let iv = (self.eval)(bits);
        debug_assert!(iv.0 <= iv.1);
        self.cache.lock().unwrap().insert(bits, iv.clone());
        iv
    }
}

/// The ordered list of real constants exponents are expressed over.
pub struct RealBasis {
    constants: RwLock<Vec<Arc<Constant>>>,
}

static BASIS: OnceLock<RealBasis> = OnceLock::new();

impl RealBasis {
    /// The shared basis. Index 0 is `1`, followed by `e` and `pi`; square
    /// roots and user constants are appended on first use.
    pub fn global() -> &'static RealBasis {
        BASIS.get_or_init(|| {
            let basis = RealBasis {
                constants: RwLock::new(Vec::new()),
            };
            basis.push("1", Arc::new(|_| (Rational::one(), Rational::one())));
            basis.push("e", Arc::new(e_interval));
            basis.push("pi", Arc::new(pi_interval));
            basis
        })
    }

    fn push(&self, name: &str, eval: Evaluator) -> usize {
        let mut constants = self.constants.write().unwrap();
        constants.push(Arc::new(Constant::new(name, eval)));
        constants.len() - 1
    }

    /// Register a named constant, or return the index it already has.
    pub fn register(&self, name: &str, eval: Evaluator) -> usize {
        if let Some(index) = self.index_of(name) {
            return index;
        }
        let mut constants = self.constants.write().unwrap();
        // re-check under the write lock
        if let Some(index) = constants.iter().position(|c| c.name == name) {
            return index;
        }
        constants.push(Arc::new(Constant::new(name, eval)));
        constants.len() - 1
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.constants
            .read()
            .unwrap()
            .iter()
            .position(|c| c.name == name)
    }

    pub fn name(&self, index: usize) -> String {
        self.constants.read().unwrap()[index].name.clone()
    }

    pub fn len(&self) -> usize {
        self.constants.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// A double close to constant `index`, within a few ulps.
    fn approx(&self, index: usize) -> f64 {
        self.constants.read().unwrap()[index].approx
    }

    /// Enclosure of constant `index` of width at most `2^-bits`.
    pub fn enclose(&self, index: usize, bits: u32) -> (Rational, Rational) {
        let constant = self.constants.read().unwrap()[index].clone();
        constant.enclose(bits)
    }
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

fn e_interval(bits: u32) -> (Rational, Rational) {
    // sum of 1/j! for j <= n; the tail is below 2/(n+1)!
    let target = pow2(bits + 1);
    let mut sum = Rational::one();
    let mut fact = BigInt::one();
    let mut n = 0u64;
    loop {
        n += 1;
        fact *= n;
        sum += Rational::new(BigInt::one(), fact.clone());
        let next_fact = &fact * (n + 1);
        if next_fact >= target {
            let tail = Rational::new(BigInt::from(2), next_fact);
            return (sum.clone(), sum + tail);
        }
    }
}

/// atan(1/x) bracketed by two consecutive partial sums of the alternating
/// series.
fn atan_inv(x: u64, bits: u32) -> (Rational, Rational) {
    let limit = Rational::new(BigInt::one(), pow2(bits));
    let x2 = BigInt::from(x) * x;
    let mut power = BigInt::from(x);
    let mut sum = Rational::zero();
    let mut j = 0u64;
    loop {
        let term = Rational::new(BigInt::one(), &power * (2 * j + 1));
        let prev = sum.clone();
        if j % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        if term < limit && j > 0 {
            return if prev < sum { (prev, sum) } else { (sum, prev) };
        }
        power *= &x2;
        j += 1;
    }
}

fn pi_interval(bits: u32) -> (Rational, Rational) {
    let (a_lo, a_hi) = atan_inv(5, bits + 6);
    let (b_lo, b_hi) = atan_inv(239, bits + 6);
    let sixteen = Rational::from_integer(16.into());
    let four = Rational::from_integer(4.into());
    (
        &sixteen * a_lo - &four * b_hi,
        &sixteen * a_hi - &four * b_lo,
    )
}

fn sqrt_interval(m: BigUint) -> Evaluator {
    Arc::new(move |bits| {
        let scaled = &m << (2 * bits as usize);
        let s = BigInt::from(scaled.sqrt());
        let den = pow2(bits);
        (
            Rational::new(s.clone(), den.clone()),
            Rational::new(s + 1, den),
        )
    })
}

/// Splits `n` into `k^2 * m`, trial-dividing by squares of small integers.
fn square_part(mut n: BigUint) -> (BigUint, BigUint) {
    let mut k = BigUint::one();
    let mut d = 2u64;
    while d < (1 << 20) && BigUint::from(d * d) <= n {
        let sq = BigUint::from(d * d);
        while (&n % &sq).is_zero() {
            n /= &sq;
            k *= d;
        }
        d += 1;
    }
    (k, n)
}

/// A real number `Σ cᵢ·bᵢ` over the global [`RealBasis`], with exact
/// rational coefficients `cᵢ`. Trailing zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Exponent {
    coeffs: Vec<Rational>,
}

impl Exponent {
    pub fn zero() -> Self {
        Exponent { coeffs: Vec::new() }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::from_coefficients(vec![q])
    }

    /// The rational `num/den`. Panics if `den` is zero.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(Rational::new(num.into(), den.into()))
    }

    /// Builds an exponent from raw coefficients indexed by basis position.
    pub fn from_coefficients(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Exponent { coeffs }
    }

    fn basis_element(index: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); index + 1];
        coeffs[index] = Rational::one();
        Exponent { coeffs }
    }

    pub fn e() -> Self {
        Self::basis_element(RealBasis::global().index_of("e").unwrap())
    }

    pub fn pi() -> Self {
        Self::basis_element(RealBasis::global().index_of("pi").unwrap())
    }

    /// A previously registered constant by name.
    pub fn named(name: &str) -> Option<Self> {
        RealBasis::global().index_of(name).map(Self::basis_element)
    }

    /// Register a user constant with its evaluator and return it as an
    /// exponent.
    pub fn register_constant(name: &str, eval: Evaluator) -> Self {
        Self::basis_element(RealBasis::global().register(name, eval))
    }

    /// `√q` for a non-negative rational, normalised to `(k/b)·√m` with `m`
    /// square-free so equal radicals share one basis constant.
    pub fn sqrt(q: &Rational) -> Result<Self> {
        if q.is_negative() {
            return Err(Error::Semantic(format!("sqrt of negative number {q}")));
        }
        if q.is_zero() {
            return Ok(Self::zero());
        }
        let a = q.numer().magnitude().clone();
        let b = q.denom().magnitude().clone();
        let (k, m) = square_part(&a * &b);
        let factor = Rational::new(BigInt::from(k), BigInt::from(b));
        if m.is_one() {
            return Ok(Self::from_rational(factor));
        }
        let name = format!("sqrt({m})");
        let index = RealBasis::global().register(&name, sqrt_interval(m));
        Ok(Self::basis_element(index).scale(&factor))
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// Integer value, if this exponent is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|q| q.is_integer())
            .map(|q| q.to_integer())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::from_coefficients(self.coeffs.iter().map(|c| c * q).collect())
    }

    pub fn mul_int(&self, k: i64) -> Self {
        self.scale(&Rational::from_integer(k.into()))
    }

    /// Exact division by a nonzero integer.
    pub fn div_int(&self, k: i64) -> Self {
        assert!(k != 0, "division of an exponent by zero");
        self.scale(&Rational::new(1.into(), k.into()))
    }

    /// Interval of width at most `2^-bits` containing this real number.
    pub fn enclose(&self, bits: u32) -> (Rational, Rational) {
        let mut lo = self.coeffs.first().cloned().unwrap_or_else(Rational::zero);
        let mut hi = lo.clone();
        let irrational: Vec<(usize, &Rational)> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_zero())
            .collect();
        if irrational.is_empty() {
            return (lo, hi);
        }
        let spread = (irrational.len() as u32).next_power_of_two().trailing_zeros();
        let basis = RealBasis::global();
        for (index, c) in irrational {
            let magnitude = c.abs().ceil().to_integer().bits() as u32;
            let (a, b) = basis.enclose(index, bits + spread + magnitude);
            if c.is_positive() {
                lo += c * a;
                hi += c * b;
            } else {
                lo += c * b;
                hi += c * a;
            }
        }
        (lo, hi)
    }

    /// Sign of the denoted real number.
    pub fn signum(&self) -> Ordering {
        if self.is_rational() {
            return self
                .coeffs
                .first()
                .map_or(Ordering::Equal, |c| c.cmp(&Rational::zero()));
        }
        if let Some(sign) = self.float_signum() {
            return sign;
        }
        let zero = Rational::zero();
        let mut bits = START_BITS;
        loop {
            let (lo, hi) = self.enclose(bits);
            if lo > zero {
                return Ordering::Greater;
            }
            if hi < zero {
                return Ordering::Less;
            }
            bits *= 2;
            assert!(
                bits <= MAX_BITS,
                "cannot separate {self} from zero; registered constants look linearly dependent"
            );
        }
    }

    /// The sign from a double-precision sum, when it clears the rounding
    /// error by a wide margin.
    fn float_signum(&self) -> Option<Ordering> {
        let basis = RealBasis::global();
        let mut sum = 0.0;
        let mut scale = 0.0;
        for (index, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let b = if index == 0 { 1.0 } else { basis.approx(index) };
            let term = c.to_f64()? * b;
            if !term.is_finite() {
                return None;
            }
            sum += term;
            scale += term.abs();
        }
        if scale > 1e-200 && sum.abs() > scale * 1e-12 {
            Some(if sum > 0.0 { Ordering::Greater } else { Ordering::Less })
        } else {
            None
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    /// Smallest integer not below this number.
    pub fn ceil(&self) -> BigInt {
        if let Some(q) = self.as_rational() {
            return q.ceil().to_integer();
        }
        let mut bits = START_BITS;
        loop {
            let (lo, hi) = self.enclose(bits);
            let (a, b) = (lo.ceil().to_integer(), hi.ceil().to_integer());
            if a == b {
                return a;
            }
            bits += 1;
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.enclose(64);
        ((lo + hi) / Rational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        if self.is_rational() && other.is_rational() {
            let zero = Rational::zero();
            let a = self.coeffs.first().unwrap_or(&zero);
            let b = other.coeffs.first().unwrap_or(&zero);
            return a.cmp(b);
        }
        (self - other).signum()
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Exponent> for &'a Exponent {
    type Output = Exponent;

    fn add(self, rhs: &'a Exponent) -> Exponent {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rational::zero();
        Exponent::from_coefficients(
            (0..len)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl<'a> Sub<&'a Exponent> for &'a Exponent {
    type Output = Exponent;

    fn sub(self, rhs: &'a Exponent) -> Exponent {
        self + &(-rhs)
    }
}

impl Neg for &Exponent {
    type Output = Exponent;

    fn neg(self) -> Exponent {
        Exponent {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Add for Exponent {
    type Output = Exponent;
    fn add(self, rhs: Exponent) -> Exponent {
        &self + &rhs
    }
}

impl Sub for Exponent {
    type Output = Exponent;
    fn sub(self, rhs: Exponent) -> Exponent {
        &self - &rhs
    }
}

impl Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        -&self
    }
}

impl From<i64> for Exponent {
    fn from(n: i64) -> Self {
        Exponent::from_integer(n)
    }
}

impl From<Rational> for Exponent {
    fn from(q: Rational) -> Self {
        Exponent::from_rational(q)
    }
}

/// Prints in the textual exponent syntax, e.g. `pi-4/5*e` or `3/2`.
impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let basis = RealBasis::global();
        let mut out = String::new();
        for (index, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let piece = if index == 0 {
                c.to_string()
            } else {
                let name = basis.name(index);
                if c.is_one() {
                    name
                } else if *c == -Rational::one() {
                    format!("-{name}")
                } else {
                    format!("{c}*{name}")
                }
            };
            if !out.is_empty() && !piece.starts_with('-') {
                out.push('+');
            }
            out.push_str(&piece);
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Exponent({self})")
    }
}

/// Reduces `a/b` to lowest terms; handy for tests and callers building
/// rationals from machine integers.
pub fn rational(num: i64, den: i64) -> Rational {
    let g = num.gcd(&den);
    Rational::new((num / g).into(), (den / g).into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Exponent {
        Exponent::ratio(n, d)
    }

    #[test]
    fn add_examples() {
        assert_eq!(&q(3, 4) + &Exponent::zero(), q(3, 4));
        assert_eq!(&q(1, 1) + &q(3, 2), q(5, 2));
        let four_fifths_e = Exponent::e().scale(&rational(4, 5));
        let rest = &Exponent::pi() - &four_fifths_e;
        assert_eq!(&four_fifths_e + &rest, Exponent::pi());
    }

    #[test]
    fn cmp_examples() {
        let e08 = Exponent::e().scale(&rational(4, 5));
        assert_eq!(e08.cmp(&q(1, 1)), Ordering::Greater);
        assert_eq!(Exponent::pi().cmp(&Exponent::pi()), Ordering::Equal);
        assert_eq!(q(5, 2).cmp(&Exponent::pi()), Ordering::Less);
    }

    #[test]
    fn scale_and_neg_examples() {
        assert_eq!(q(5, 2).scale(&rational(2, 5)), q(1, 1));
        assert_eq!(-q(3, 4), q(-3, 4));
        let third = Exponent::pi().scale(&rational(1, 3));
        assert_eq!(third.coefficients()[2], rational(1, 3));
        assert!(third.coefficients()[0].is_zero());
    }

    #[test]
    fn constant_enclosures_are_tight_and_correct() {
        for bits in [4, 20, 80, 200] {
            for (name, approx) in [("e", std::f64::consts::E), ("pi", std::f64::consts::PI)] {
                let x = Exponent::named(name).unwrap();
                let (lo, hi) = x.enclose(bits);
                assert!(&hi - &lo <= Rational::new(1.into(), pow2(bits)));
                assert!(lo.to_f64().unwrap() <= approx + 1e-15);
                assert!(hi.to_f64().unwrap() >= approx - 1e-15);
            }
        }
    }

    #[test]
    fn sqrt_normalises_radicals() {
        let a = Exponent::sqrt(&rational(8, 1)).unwrap();
        let b = Exponent::sqrt(&rational(2, 1)).unwrap().mul_int(2);
        assert_eq!(a, b);
        assert_eq!(Exponent::sqrt(&rational(9, 4)).unwrap(), q(3, 2));
        assert!(Exponent::sqrt(&rational(-1, 1)).is_err());
        let s = Exponent::sqrt(&rational(1, 2)).unwrap();
        assert!((s.to_f64() - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn close_irrationals_are_separated() {
        // 355/113 agrees with pi to about 2.7e-7
        let diff = &Exponent::pi() - &q(355, 113);
        assert_eq!(diff.signum(), Ordering::Less);
        let s2 = Exponent::sqrt(&rational(2, 1)).unwrap();
        assert_eq!(s2.cmp(&q(1_414_213_562, 1_000_000_000)), Ordering::Greater);
    }

    #[test]
    fn display_is_parseable_text() {
        let x = &Exponent::pi() - &Exponent::e().scale(&rational(4, 5));
        assert_eq!(x.to_string(), "-4/5*e+pi");
        assert_eq!(q(-3, 4).to_string(), "-3/4");
        assert_eq!(Exponent::zero().to_string(), "0");
    }

    #[test]
    fn ceil_of_irrational() {
        assert_eq!(Exponent::pi().ceil(), BigInt::from(4));
        assert_eq!(q(-5, 2).ceil(), BigInt::from(-2));
    }
}
