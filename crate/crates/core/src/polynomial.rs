//! Polynomials over the series field: t-support, Newton polygon, ω-order,
//! t-initial forms and the substitutions used by the root expansion.

use std::fmt;

use crate::coeffs::{binomial, CPoly, Coefficient};
use crate::error::{Error, Result};
use crate::exponents::Exponent;
use crate::series::{Series, Valuation};

/// Default search cap for coefficient valuations.
pub const DEFAULT_VAL_CAP: i64 = 64;

/// A support point `(i, val f_i)`.
pub type Point = (usize, Exponent);

/// `F = Σ f_i·yⁱ` with series coefficients, lowest degree first.
#[derive(Clone)]
pub struct PolyOverK {
    coeffs: Vec<Series>,
    val_cap: Exponent,
}

fn visibly_zero(s: &Series) -> bool {
    s.is_known_zero() || (s.is_finished() && s.known_terms().is_empty())
}

impl PolyOverK {
    /// Builds `Σ coeffs[i]·yⁱ`, dropping leading coefficients that are
    /// visibly zero.
    pub fn new(mut coeffs: Vec<Series>) -> Self {
        while coeffs.last().is_some_and(visibly_zero) {
            coeffs.pop();
        }
        PolyOverK {
            coeffs,
            val_cap: Exponent::from_integer(DEFAULT_VAL_CAP),
        }
    }

    /// The same polynomial with a different valuation search cap.
    pub fn with_val_cap(mut self, cap: Exponent) -> Self {
        self.val_cap = cap;
        self
    }

    pub fn val_cap(&self) -> &Exponent {
        &self.val_cap
    }

    fn like(&self, coeffs: Vec<Series>) -> Self {
        PolyOverK::new(coeffs).with_val_cap(self.val_cap.clone())
    }

    /// Polynomial with constant coefficients.
    pub fn from_constants(coeffs: &[Coefficient]) -> Self {
        PolyOverK::new(coeffs.iter().cloned().map(Series::constant).collect())
    }

    /// `Π (y − rᵢ)`.
    pub fn from_roots(roots: &[Series]) -> Self {
        let mut p = PolyOverK::new(vec![Series::one()]);
        for r in roots {
            p = p.mul(&PolyOverK::new(vec![r.neg(), Series::one()]));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Series] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Series {
        self.coeffs.get(i).cloned().unwrap_or_else(Series::zero)
    }

    /// Valuation of coefficient `i`, with the index named in errors.
    pub fn coeff_valuation(&self, i: usize) -> Result<Valuation> {
        self.coeff(i)
            .valuation(&self.val_cap)
            .map_err(|e| e.with_context(format!("coefficient of y^{i}")))
    }

    fn coeff_lc(&self, i: usize) -> Result<Coefficient> {
        self.coeff(i)
            .lc(&self.val_cap)
            .map_err(|e| e.with_context(format!("coefficient of y^{i}")))
    }

    /// `{(i, val f_i) | f_i ≠ 0}`, in increasing `i`.
    pub fn t_support(&self) -> Result<Vec<Point>> {
        let mut out = Vec::new();
        for i in 0..self.coeffs.len() {
            if let Valuation::Finite(v) = self.coeff_valuation(i)? {
                out.push((i, v));
            }
        }
        Ok(out)
    }

    pub fn newton_polygon(&self) -> Result<NewtonPolygon> {
        Ok(NewtonPolygon::from_points(self.t_support()?))
    }

    fn nonnegative_support(&self) -> Result<Vec<Point>> {
        let support = self.t_support()?;
        if support.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        if let Some((index, value)) = support.iter().find(|p| p.1.is_negative()) {
            return Err(Error::NegativeValuation {
                index: *index,
                value: value.clone(),
            });
        }
        Ok(support)
    }

    /// `min{val f_i + ω·i}`; all coefficient valuations must be nonnegative.
    pub fn ord_omega(&self, omega: &Exponent) -> Result<Exponent> {
        let support = self.nonnegative_support()?;
        Ok(support
            .iter()
            .map(|(i, v)| v + &omega.mul_int(*i as i64))
            .min()
            .unwrap())
    }

    /// `Σ lc(f_i)·yⁱ` over the indices attaining `ord_ω`.
    pub fn t_initial_form(&self, omega: &Exponent) -> Result<CPoly> {
        let support = self.nonnegative_support()?;
        initial_form_of(self, &support, omega)
    }

    /// Divides by `t^m` with `m` the least coefficient valuation; returns the
    /// result and the applied shift `−m`.
    pub fn normalize_min_val(&self) -> Result<(PolyOverK, Exponent)> {
        let support = self.t_support()?;
        let m = support.iter().map(|p| p.1.clone()).min().ok_or(Error::ZeroPolynomial)?;
        let shift = -&m;
        Ok((self.like(self.coeffs.iter().map(|c| c.shift(&shift)).collect()), shift))
    }

    /// `yⁿ·F(1/y)`; needs a nonzero constant coefficient.
    pub fn reverse(&self) -> Result<PolyOverK> {
        if self.is_zero() || self.coeff_valuation(0)?.is_infinite() {
            return Err(Error::Precondition(
                "reversal needs a nonzero constant coefficient".into(),
            ));
        }
        Ok(self.like(self.coeffs.iter().rev().cloned().collect()))
    }

    /// `F(y + c)`.
    pub fn shift_root(&self, c: &Coefficient) -> PolyOverK {
        self.rescale_substitute(&Exponent::zero(), c, &Exponent::zero())
    }

    /// `t^{−α}·F(t^ω·(y + c))`, coefficient `i` being
    /// `Σ_{j≥i} f_j·t^{jω−α}·C(j,i)·c^{j−i}`.
    pub fn rescale_substitute(&self, omega: &Exponent, c: &Coefficient, alpha: &Exponent) -> PolyOverK {
        let n = self.coeffs.len();
        let powers: Vec<Coefficient> = (0..n).map(|k| c.pow(k as u32)).collect();
        let shifted: Vec<Series> = (0..n)
            .map(|j| self.coeffs[j].shift(&(&omega.mul_int(j as i64) - alpha)))
            .collect();
        let coeffs = (0..n)
            .map(|i| {
                Series::sum((i..n).filter_map(|j| {
                    if j > i && c.is_zero() && c.is_exact() {
                        return None;
                    }
                    let k = powers[j - i].scale(&binomial(j, i));
                    Some(shifted[j].scale(&k))
                }))
            })
            .collect();
        self.like(coeffs)
    }

    /// Removes the largest power `y^m` dividing `F`; returns `(F/y^m, m)`.
    pub fn strip_y_factor(&self) -> Result<(PolyOverK, usize)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut m = 0;
        while self.coeff_valuation(m)?.is_infinite() {
            m += 1;
        }
        Ok((self.like(self.coeffs[m..].to_vec()), m))
    }

    /// `F(y)` by Horner's rule.
    pub fn eval(&self, y: &Series) -> Series {
        let mut acc = Series::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(y).add(c);
        }
        acc
    }

    /// Divides by the leading coefficient.
    pub fn make_monic(&self) -> Result<PolyOverK> {
        let lead = self.coeffs.last().ok_or(Error::ZeroPolynomial)?;
        let inv = lead
            .inverse(&self.val_cap)
            .map_err(|e| e.with_context("leading coefficient"))?;
        let n = self.coeffs.len() - 1;
        let mut coeffs: Vec<Series> = self.coeffs[..n].iter().map(|c| c.mul(&inv)).collect();
        coeffs.push(Series::one());
        Ok(self.like(coeffs))
    }

    pub fn add(&self, o: &PolyOverK) -> PolyOverK {
        let n = self.coeffs.len().max(o.coeffs.len());
        self.like((0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &PolyOverK) -> PolyOverK {
        let n = self.coeffs.len().max(o.coeffs.len());
        self.like((0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect())
    }

    pub fn mul(&self, o: &PolyOverK) -> PolyOverK {
        if self.is_zero() || o.is_zero() {
            return self.like(Vec::new());
        }
        let n = self.coeffs.len() + o.coeffs.len() - 1;
        let coeffs = (0..n)
            .map(|k| {
                Series::sum((0..=k).filter_map(|i| {
                    let j = k - i;
                    (i < self.coeffs.len() && j < o.coeffs.len())
                        .then(|| self.coeffs[i].mul(&o.coeffs[j]))
                }))
            })
            .collect();
        self.like(coeffs)
    }

    /// Multiplies every coefficient by the series `s`.
    pub fn scale(&self, s: &Series) -> PolyOverK {
        self.like(self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    /// Coefficients converted to float balls at `prec` bits.
    pub fn to_float(&self, prec: u32) -> PolyOverK {
        self.like(self.coeffs.iter().map(|c| c.to_float(prec)).collect())
    }

    /// Formal derivative in `y`.
    pub fn deriv(&self) -> PolyOverK {
        self.like(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(&Coefficient::from_int(i as i64)))
                .collect(),
        )
    }
}

pub(crate) fn initial_form_of(f: &PolyOverK, support: &[Point], omega: &Exponent) -> Result<CPoly> {
    let orders: Vec<Exponent> = support
        .iter()
        .map(|(i, v)| v + &omega.mul_int(*i as i64))
        .collect();
    let ord = orders.iter().min().unwrap().clone();
    let n = support.last().unwrap().0;
    let mut coeffs = vec![Coefficient::zero(); n + 1];
    for ((i, _), o) in support.iter().zip(&orders) {
        if *o == ord {
            coeffs[*i] = f.coeff_lc(*i)?;
        }
    }
    Ok(CPoly::new(coeffs))
}

impl fmt::Debug for PolyOverK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

/// One edge of the lower hull.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub from: Point,
    pub to: Point,
    pub slope: Exponent,
    /// Horizontal length `to.0 − from.0`.
    pub length: usize,
    /// Support points strictly inside the edge.
    pub interior: Vec<Point>,
}

/// Lower convex hull of a t-support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub support: Vec<Point>,
    pub vertices: Vec<Point>,
    pub faces: Vec<Face>,
}

/// Sign of the turn `o → a → b`; positive for counter-clockwise.
fn cross(o: &Point, a: &Point, b: &Point) -> std::cmp::Ordering {
    let dxa = a.0 as i64 - o.0 as i64;
    let dxb = b.0 as i64 - o.0 as i64;
    let lhs = (&b.1 - &o.1).mul_int(dxa);
    let rhs = (&a.1 - &o.1).mul_int(dxb);
    (&lhs - &rhs).signum()
}

impl NewtonPolygon {
    /// Lower hull of points with distinct abscissas, by a monotone chain.
    pub fn from_points(mut support: Vec<Point>) -> Self {
        support.sort_by_key(|p| p.0);
        let mut hull: Vec<Point> = Vec::new();
        for p in &support {
            while hull.len() >= 2
                && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) != std::cmp::Ordering::Greater
            {
                hull.pop();
            }
            hull.push(p.clone());
        }
        let faces = hull
            .windows(2)
            .map(|w| {
                let (a, b) = (&w[0], &w[1]);
                let length = b.0 - a.0;
                let slope = (&b.1 - &a.1).div_int(length as i64);
                let interior = support
                    .iter()
                    .filter(|p| p.0 > a.0 && p.0 < b.0)
                    .filter(|p| p.1 == &a.1 + &slope.mul_int((p.0 - a.0) as i64))
                    .cloned()
                    .collect();
                Face {
                    from: a.clone(),
                    to: b.clone(),
                    slope,
                    length,
                    interior,
                }
            })
            .collect();
        NewtonPolygon {
            support,
            vertices: hull,
            faces,
        }
    }

    /// Horizontal extent of the lower hull.
    pub fn width(&self) -> usize {
        match (self.vertices.first(), self.vertices.last()) {
            (Some(a), Some(b)) => b.0 - a.0,
            _ => 0,
        }
    }
}
