//! Valuations of points, tropical roots of univariate polynomials and
//! t-initial forms of multivariate Laurent polynomials.
//!
//! The min convention is used throughout: `val(t) = 1`.

use std::collections::BTreeMap;
use std::fmt;

use crate::coeffs::{coefficient_term, Coefficient};
use crate::error::{Error, Result};
use crate::exponents::Exponent;
use crate::polynomial::{PolyOverK, DEFAULT_VAL_CAP};
use crate::series::{Series, Valuation};

/// Componentwise valuation of a point with nonzero coordinates.
pub fn val_point(p: &[Series], cap: &Exponent) -> Result<Vec<Exponent>> {
    p.iter()
        .enumerate()
        .map(|(i, s)| match s.valuation(cap).map_err(|e| e.with_context(format!("component {i}")))? {
            Valuation::Finite(v) => Ok(v),
            Valuation::Infinite => Err(Error::Semantic(format!("component {i} is zero"))),
        })
        .collect()
}

/// A tropical root `ω` with the horizontal length of its face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalRoot {
    pub omega: Exponent,
    pub multiplicity: usize,
}

/// `ω = −slope` for every lower face of the Newton polygon, in order of
/// increasing abscissa (so decreasing `ω`).
pub fn tropical_roots(f: &PolyOverK) -> Result<Vec<TropicalRoot>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(f.newton_polygon()?
        .faces
        .into_iter()
        .map(|face| TropicalRoot {
            omega: -&face.slope,
            multiplicity: face.length,
        })
        .collect())
}

/// Integer exponent vector of a Laurent monomial.
pub type Monomial = Vec<i64>;

/// `Σ f_a·x^a` over `a ∈ ℤⁿ` with series coefficients.
#[derive(Clone)]
pub struct LaurentPolyK {
    nvars: usize,
    terms: BTreeMap<Monomial, Series>,
    val_cap: Exponent,
}

impl LaurentPolyK {
    pub fn zero(nvars: usize) -> Self {
        LaurentPolyK {
            nvars,
            terms: BTreeMap::new(),
            val_cap: Exponent::from_integer(DEFAULT_VAL_CAP),
        }
    }

    /// Collects terms, adding coefficients of repeated monomials. Panics if
    /// a monomial has the wrong length.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Series)>) -> Self {
        let mut p = LaurentPolyK::zero(nvars);
        for (a, c) in terms {
            p.add_term(a, c);
        }
        p
    }

    pub fn with_val_cap(mut self, cap: Exponent) -> Self {
        self.val_cap = cap;
        self
    }

    pub fn val_cap(&self) -> &Exponent {
        &self.val_cap
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Series> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, a: Monomial, c: Series) {
        assert_eq!(a.len(), self.nvars, "monomial has the wrong number of variables");
        if c.is_known_zero() {
            return;
        }
        let sum = match self.terms.remove(&a) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !sum.is_known_zero() {
            self.terms.insert(a, sum);
        }
    }

    pub fn add(&self, o: &LaurentPolyK) -> LaurentPolyK {
        let mut out = self.clone();
        for (a, c) in &o.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, o: &LaurentPolyK) -> LaurentPolyK {
        let mut out = LaurentPolyK::zero(self.nvars).with_val_cap(self.val_cap.clone());
        for (a, f) in &self.terms {
            for (b, g) in &o.terms {
                let ab = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(ab, f.mul(g));
            }
        }
        out
    }
}

impl fmt::Debug for LaurentPolyK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// A Laurent polynomial over ℂ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CLaurent {
    nvars: usize,
    terms: BTreeMap<Monomial, Coefficient>,
}

impl CLaurent {
    pub fn new(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Coefficient)>) -> Self {
        let mut out = CLaurent {
            nvars,
            terms: BTreeMap::new(),
        };
        for (a, c) in terms {
            let sum = match out.terms.remove(&a) {
                Some(old) => &old + &c,
                None => c,
            };
            if !sum.is_zero() {
                out.terms.insert(a, sum);
            }
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Coefficient> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mul(&self, o: &CLaurent) -> CLaurent {
        let mut products = Vec::new();
        for (a, f) in &self.terms {
            for (b, g) in &o.terms {
                products.push((a.iter().zip(b).map(|(x, y)| x + y).collect(), f * g));
            }
        }
        CLaurent::new(self.nvars, products)
    }

    /// Text with the given variable names, highest monomial first.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (a, c) in self.terms.iter().rev() {
            let mono: Vec<String> = a
                .iter()
                .zip(names)
                .filter(|(k, _)| **k != 0)
                .map(|(k, x)| match k {
                    1 => x.clone(),
                    k if *k < 0 => format!("{x}^({k})"),
                    k => format!("{x}^{k}"),
                })
                .collect();
            let mono = mono.join("*");
            let (negative, body) = coefficient_term(c);
            let term = match (body.as_str(), mono.is_empty()) {
                (b, true) => b.to_string(),
                ("1", false) => mono,
                (b, false) => format!("{b}*{mono}"),
            };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        out
    }
}

/// Variable names `x1, …, xn`.
pub fn default_names(nvars: usize) -> Vec<String> {
    (1..=nvars).map(|i| format!("x{i}")).collect()
}

impl fmt::Display for CLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&default_names(self.nvars)))
    }
}

/// `Σ lc(f_a)·x^a` over the monomials minimising `val f_a + ⟨ω, a⟩`.
pub fn tin_multivariate(f: &LaurentPolyK, omega: &[Exponent]) -> Result<CLaurent> {
    if omega.len() != f.nvars {
        return Err(Error::Semantic(format!(
            "weight vector has {} entries for {} variables",
            omega.len(),
            f.nvars
        )));
    }
    let mut scored = Vec::new();
    for (a, c) in &f.terms {
        let context = || format!("coefficient of monomial {a:?}");
        let Valuation::Finite(v) = c.valuation(&f.val_cap).map_err(|e| e.with_context(context()))? else {
            continue;
        };
        let mut order = v;
        for (k, w) in a.iter().zip(omega) {
            order = &order + &w.mul_int(*k);
        }
        let lc = c.lc(&f.val_cap)?;
        scored.push((order, a.clone(), lc));
    }
    let Some(min) = scored.iter().map(|s| s.0.clone()).min() else {
        return Err(Error::ZeroPolynomial);
    };
    Ok(CLaurent::new(
        f.nvars,
        scored.into_iter().filter(|s| s.0 == min).map(|s| (s.1, s.2)),
    ))
}

/// True iff `g` has at least two terms.
pub fn is_monomial_free(g: &CLaurent) -> bool {
    g.len() >= 2
}
