//! Weierstraß preparation over the series field by t-order lifting.
//!
//! Write `F = Σ_γ F_γ(y)·t^γ` with `F_γ ∈ ℂ[y]`. If `r` is the least index
//! with `val f_r = 0` then `F_0 = y^r·ū` with `ū(0) ≠ 0`. We look for
//! `U = Σ U_γ t^γ` and `P = y^r + Σ_{γ>0} P_γ t^γ` with `deg P_γ < r` and
//! `U_0 = ū`. Comparing t-orders gives, at each level `γ > 0`,
//!
//! ```text
//! E_γ := F_γ − Σ_{a,b>0, a+b=γ} U_a·P_b = U_γ·y^r + ū·P_γ
//! ```
//!
//! so `P_γ = E_γ·ū⁻¹ mod y^r` and `U_γ = (E_γ − ū·P_γ)/y^r`. The levels that
//! can carry nonzero data are the positive exponents of `F` and sums of
//! existing `U` and `P` levels; they are discovered on the fly, in increasing
//! order, as far as the requested bound.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use crate::coeffs::{CPoly, Coefficient};
use crate::error::{Error, Result};
use crate::exponents::Exponent;
use crate::polynomial::PolyOverK;
use crate::series::{Fetch, Pull, Series, Source};

/// `F = U·P`, truncated to a t-order bound.
#[derive(Clone, Debug)]
pub struct WPrepResult {
    /// Monic of degree `r`; lower coefficients have positive valuation.
    pub p: PolyOverK,
    /// The unit factor, of degree `n − r` in `y`.
    pub u: PolyOverK,
    pub r: usize,
    /// All coefficients are exact up to this t-order and carry no terms
    /// beyond it.
    pub bound: Exponent,
}

/// Lazily lifted factors `F = U·P`; coefficients extend on demand.
#[derive(Clone, Debug)]
pub struct LazyPreparation {
    pub p: PolyOverK,
    pub u: PolyOverK,
    pub r: usize,
}

/// `min{i | val f_i = 0}`. Coefficient valuations must be nonnegative.
pub fn regularity_order(f: &PolyOverK) -> Result<usize> {
    let zero = Exponent::zero();
    for (i, c) in f.coeffs().iter().enumerate() {
        let low = c.terms_below(&zero)?;
        if let Some((e, _)) = low.iter().find(|t| t.0.is_negative()) {
            return Err(Error::NegativeValuation {
                index: i,
                value: e.clone(),
            });
        }
        if !low.is_empty() {
            return Ok(i);
        }
    }
    Err(Error::Precondition(
        "no coefficient has valuation zero".into(),
    ))
}

/// Lazy preparation of `F`. Needs nonnegative valuations and `r ≥ 1`.
pub fn weierstrass_factor(f: &PolyOverK) -> Result<LazyPreparation> {
    prepare_with_levels(f, &[])
}

/// `U` and `P` with `F − U·P` free of terms up to `bound`.
pub fn weierstrass_prepare(f: &PolyOverK, bound: &Exponent) -> Result<WPrepResult> {
    truncated(prepare_with_levels(f, &[])?, bound)
}

/// As [`weierstrass_prepare`], with extra candidate levels seeded into the
/// lifting grid. Spurious levels carry no data, so the result is the same.
pub fn weierstrass_prepare_refined(
    f: &PolyOverK,
    bound: &Exponent,
    extra_levels: &[Exponent],
) -> Result<WPrepResult> {
    truncated(prepare_with_levels(f, extra_levels)?, bound)
}

fn truncated(lazy: LazyPreparation, bound: &Exponent) -> Result<WPrepResult> {
    let cut = |p: &PolyOverK| -> Result<PolyOverK> {
        let coeffs = p
            .coeffs()
            .iter()
            .map(|c| c.terms_below(bound).map(Series::from_terms))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyOverK::new(coeffs).with_val_cap(p.val_cap().clone()))
    };
    Ok(WPrepResult {
        p: cut(&lazy.p)?,
        u: cut(&lazy.u)?,
        r: lazy.r,
        bound: bound.clone(),
    })
}

fn prepare_with_levels(f: &PolyOverK, extra: &[Exponent]) -> Result<LazyPreparation> {
    let n = f.degree().ok_or(Error::ZeroPolynomial)?;
    let r = regularity_order(f)?;
    if r == 0 {
        return Err(Error::Precondition(
            "the constant coefficient has valuation zero; F is already a unit".into(),
        ));
    }
    let zero = Exponent::zero();
    let mut ubar = Vec::with_capacity(n - r + 1);
    for c in &f.coeffs()[r..] {
        let low = c.terms_below(&zero)?;
        ubar.push(low.first().map(|t| t.1.clone()).unwrap_or_default());
    }
    let ubar_inv = series_inverse(&ubar, r)?;
    let lifting = Lifting {
        coeffs: f.coeffs().to_vec(),
        seen: vec![0; n + 1],
        r,
        n,
        ubar: CPoly::new(ubar.clone()),
        ubar_inv: CPoly::new(ubar_inv),
        candidates: extra.iter().filter(|e| e.is_positive()).cloned().collect(),
        u_levels: Vec::new(),
        p_levels: Vec::new(),
        p_index: HashMap::new(),
        failed: None,
    };
    let shared = Arc::new(Mutex::new(lifting));
    let series = |which: Which, i: usize| {
        Series::from_source(Exponent::zero(), LevelSource {
            lift: shared.clone(),
            which,
            i,
            pos: 0,
        })
    };
    let mut p: Vec<Series> = (0..r).map(|i| series(Which::P, i)).collect();
    p.push(Series::one());
    let u: Vec<Series> = (0..=n - r).map(|i| series(Which::U, i)).collect();
    let cap = f.val_cap().clone();
    Ok(LazyPreparation {
        p: PolyOverK::new(p).with_val_cap(cap.clone()),
        u: PolyOverK::new(u).with_val_cap(cap),
        r,
    })
}

/// First `len` coefficients of `1/a(y)` as a power series; `a(0) ≠ 0`.
fn series_inverse(a: &[Coefficient], len: usize) -> Result<Vec<Coefficient>> {
    let a0_inv = a[0].inv()?;
    let mut out: Vec<Coefficient> = vec![a0_inv.clone()];
    for k in 1..len {
        let mut acc = Coefficient::zero();
        for j in 1..=k.min(a.len() - 1) {
            acc = &acc + &(&a[j] * &out[k - j]);
        }
        out.push(-&(&acc * &a0_inv));
    }
    Ok(out)
}

struct Lifting {
    coeffs: Vec<Series>,
    /// Number of terms of each coefficient of `F` already used.
    seen: Vec<usize>,
    r: usize,
    n: usize,
    ubar: CPoly,
    ubar_inv: CPoly,
    candidates: BTreeSet<Exponent>,
    /// Positive levels with nonzero data, increasing; `U` levels are dense
    /// of length `n − r + 1`, `P` levels of length `r`.
    u_levels: Vec<(Exponent, Vec<Coefficient>)>,
    p_levels: Vec<(Exponent, Vec<Coefficient>)>,
    p_index: HashMap<Exponent, usize>,
    failed: Option<Error>,
}

fn dense(p: &CPoly, len: usize) -> Vec<Coefficient> {
    (0..len).map(|i| p.coeff(i)).collect()
}

fn truncate(p: &CPoly, len: usize) -> CPoly {
    CPoly::new(p.coeffs().iter().take(len).cloned().collect())
}

impl Lifting {
    /// The next unread term of `F` beyond the constant terms, over all
    /// coefficients, if one lies at or below `bound`.
    fn next_f(&mut self, bound: &Exponent) -> Result<Option<Exponent>> {
        let mut best: Option<Exponent> = None;
        for i in 0..=self.n {
            while let Fetch::Term(e, _) = self.coeffs[i].fetch(self.seen[i], bound)? {
                if e.is_negative() {
                    return Err(Error::NegativeValuation { index: i, value: e });
                }
                if e.is_zero() {
                    self.seen[i] += 1;
                    continue;
                }
                if best.as_ref().is_none_or(|b| e < *b) {
                    best = Some(e);
                }
                break;
            }
        }
        Ok(best)
    }

    /// Processes the next level at or below `bound`; false if there is none.
    fn step(&mut self, bound: &Exponent) -> Result<bool> {
        if let Some(e) = &self.failed {
            return Err(e.clone());
        }
        match self.step_inner(bound) {
            Ok(done) => Ok(done),
            Err(e) => {
                self.failed = Some(e.clone());
                Err(e)
            }
        }
    }

    fn step_inner(&mut self, bound: &Exponent) -> Result<bool> {
        let gamma = match (self.next_f(bound)?, self.candidates.first()) {
            (Some(a), Some(b)) => a.min(b.clone()),
            (Some(a), None) => a,
            (None, Some(b)) => b.clone(),
            (None, None) => return Ok(false),
        };
        if gamma > *bound {
            return Ok(false);
        }
        let mut f_terms = Vec::new();
        for i in 0..=self.n {
            if let Fetch::Term(e, c) = self.coeffs[i].fetch(self.seen[i], bound)? {
                if e == gamma {
                    f_terms.push((i, c));
                    self.seen[i] += 1;
                }
            }
        }
        self.candidates.remove(&gamma);
        self.level(gamma, f_terms);
        Ok(true)
    }

    fn complete(&self, bound: &Exponent) -> Result<bool> {
        if !self.candidates.is_empty() {
            return Ok(false);
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if !matches!(c.fetch(self.seen[i], bound)?, Fetch::End) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn level(&mut self, gamma: Exponent, f_terms: Vec<(usize, Coefficient)>) {
        let (n, r) = (self.n, self.r);
        let mut e = vec![Coefficient::zero(); n + 1];
        for (i, c) in f_terms {
            e[i] = c;
        }
        for (a, ua) in &self.u_levels {
            let b = &gamma - a;
            if let Some(&k) = self.p_index.get(&b) {
                let pb = &self.p_levels[k].1;
                for (i, x) in ua.iter().enumerate() {
                    for (j, z) in pb.iter().enumerate() {
                        e[i + j] = &e[i + j] - &(x * z);
                    }
                }
            }
        }
        let e = CPoly::new(e);
        if e.is_zero() {
            return;
        }
        let p_gamma = truncate(&truncate(&e, r).mul(&self.ubar_inv), r);
        let rest = e.sub(&self.ubar.mul(&p_gamma));
        let u_gamma = rest.shift_down(r);
        if !p_gamma.is_zero() {
            for (a, _) in &self.u_levels {
                self.candidates.insert(&gamma + a);
            }
            self.p_index.insert(gamma.clone(), self.p_levels.len());
            self.p_levels.push((gamma.clone(), dense(&p_gamma, r)));
        }
        if !u_gamma.is_zero() {
            for (b, _) in &self.p_levels {
                self.candidates.insert(&gamma + b);
            }
            self.u_levels.push((gamma, dense(&u_gamma, n - r + 1)));
        }
    }
}

#[derive(Clone, Copy)]
enum Which {
    U,
    P,
}

struct LevelSource {
    lift: Arc<Mutex<Lifting>>,
    which: Which,
    i: usize,
    pos: usize,
}

impl Source for LevelSource {
    fn pull(&mut self, bound: &Exponent) -> Result<Pull> {
        let mut lift = self.lift.lock().unwrap();
        loop {
            let term = match self.which {
                Which::U if self.pos == 0 => Some((Exponent::zero(), lift.ubar.coeff(self.i))),
                Which::U => lift.u_levels.get(self.pos - 1).map(|(g, c)| (g.clone(), c[self.i].clone())),
                Which::P => lift.p_levels.get(self.pos).map(|(g, c)| (g.clone(), c[self.i].clone())),
            };
            if let Some((g, c)) = term {
                self.pos += 1;
                return Ok(Pull::Term(g, c));
            }
            if !lift.step(bound)? {
                return Ok(if lift.complete(bound)? { Pull::Finished } else { Pull::Exhausted });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Term;

    fn q(n: i64, d: i64) -> Exponent {
        Exponent::ratio(n, d)
    }

    fn c(n: i64) -> Coefficient {
        Coefficient::from_int(n)
    }

    fn ts(terms: &[(i64, i64)]) -> Vec<Term> {
        terms.iter().map(|&(e, k)| (q(e, 1), c(k))).collect()
    }

    fn residual_clean(f: &PolyOverK, w: &WPrepResult) -> bool {
        let prod = w.u.mul(&w.p);
        let n = f.coeffs().len().max(prod.coeffs().len());
        (0..n).all(|i| f.coeff(i).equal_up_to(&prod.coeff(i), &w.bound).unwrap())
    }

    #[test]
    fn regularity_examples() {
        let t = Series::monomial(c(1), q(1, 1));
        assert_eq!(regularity_order(&PolyOverK::new(vec![t.neg(), Series::one()])).unwrap(), 1);
        let f = PolyOverK::new(vec![t.clone(), Series::from_int(-1), Series::one()]);
        assert_eq!(regularity_order(&f).unwrap(), 1);
        let g = PolyOverK::new(vec![t.clone(), t]);
        assert!(regularity_order(&g).is_err());
    }

    #[test]
    fn catalan() {
        let t = Series::monomial(c(1), q(1, 1));
        let f = PolyOverK::new(vec![t, Series::from_int(-1), Series::one()]);
        let w = weierstrass_prepare(&f, &q(5, 1)).unwrap();
        assert_eq!(w.r, 1);
        let catalan = ts(&[(1, 1), (2, 1), (3, 2), (4, 5), (5, 14)]);
        let neg: Vec<Term> = catalan.iter().map(|(e, k)| (e.clone(), -k)).collect();
        assert_eq!(w.p.coeff(0).terms_below(&q(5, 1)).unwrap(), neg);
        assert_eq!(w.p.coeff(1).terms_below(&q(5, 1)).unwrap(), ts(&[(0, 1)]));
        let mut u0 = ts(&[(0, -1)]);
        u0.extend(catalan);
        assert_eq!(w.u.coeff(0).terms_below(&q(5, 1)).unwrap(), u0);
        assert_eq!(w.u.coeff(1).terms_below(&q(5, 1)).unwrap(), ts(&[(0, 1)]));
        assert!(residual_clean(&f, &w));
    }

    #[test]
    fn already_prepared() {
        let f = PolyOverK::new(vec![
            Series::monomial(c(3), q(1, 2)),
            Series::monomial(c(1), Exponent::pi()),
            Series::one(),
        ]);
        let w = weierstrass_prepare(&f, &q(6, 1)).unwrap();
        assert_eq!(w.r, 2);
        for i in 0..3 {
            assert!(w.p.coeff(i).equal_up_to(&f.coeff(i), &q(6, 1)).unwrap());
        }
        assert_eq!(w.u.coeffs().len(), 1);
        assert_eq!(w.u.coeff(0).terms_below(&q(6, 1)).unwrap(), ts(&[(0, 1)]));
    }

    #[test]
    fn factored_input() {
        let t = Series::monomial(c(1), q(1, 1));
        let f = PolyOverK::from_roots(&[t.clone(), Series::one()]);
        let w = weierstrass_prepare(&f, &q(3, 1)).unwrap();
        assert_eq!(w.p.coeff(0).terms_below(&q(3, 1)).unwrap(), ts(&[(1, -1)]));
        assert_eq!(w.u.coeff(0).terms_below(&q(3, 1)).unwrap(), ts(&[(0, -1)]));
        assert_eq!(w.u.coeff(1).terms_below(&q(3, 1)).unwrap(), ts(&[(0, 1)]));
    }

    #[test]
    fn refined_grid_agrees() {
        let f = PolyOverK::new(vec![
            Series::monomial(c(1), q(1, 3)).add(&Series::monomial(c(2), Exponent::e())),
            Series::from_int(-1).add(&Series::monomial(c(1), q(1, 2))),
            Series::monomial(c(5), q(2, 1)),
            Series::one(),
        ]);
        let bound = q(4, 1);
        let a = weierstrass_prepare(&f, &bound).unwrap();
        let extra: Vec<Exponent> = (1..40).map(|k| q(k, 10)).chain([Exponent::pi()]).collect();
        let b = weierstrass_prepare_refined(&f, &bound, &extra).unwrap();
        for i in 0..=a.r {
            assert!(a.p.coeff(i).equal_up_to(&b.p.coeff(i), &bound).unwrap());
        }
        assert!(residual_clean(&f, &a));
        assert_eq!(a.u.coeffs().len(), 3);
    }
}
