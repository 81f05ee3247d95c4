//! Generalised Puiseux series as lazily produced, memoized term streams.
//!
//! A [`Series`] hands out its terms in strictly increasing exponent order and
//! never computes a window twice. Every observation takes an exponent bound,
//! because equality and valuation of lazily defined series are only
//! semi-decidable: `f·f⁻¹ − 1` never produces a term, yet no finite amount of
//! work proves it zero. Structurally known zeros (the zero constructor,
//! products with it) are flagged and report valuation ∞.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

use crate::coeffs::Coefficient;
use crate::error::{Error, Result};
use crate::exponents::Exponent;

/// One term `c·t^e` of a series.
pub type Term = (Exponent, Coefficient);

/// The valuation of a series: its least exponent, or ∞ for zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(Exponent),
    Infinite,
}

impl Valuation {
    pub fn finite(&self) -> Option<&Exponent> {
        match self {
            Valuation::Finite(e) => Some(e),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(e) => write!(f, "{e}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// The non-archimedean norm `exp(−val f)`, kept symbolically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Norm {
    Zero,
    /// `exp(−v)`.
    ExpNeg(Exponent),
}

impl Norm {
    pub fn to_f64(&self) -> f64 {
        match self {
            Norm::Zero => 0.0,
            Norm::ExpNeg(v) => (-v.to_f64()).exp(),
        }
    }
}

impl Ord for Norm {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Norm::Zero, Norm::Zero) => Ordering::Equal,
            (Norm::Zero, _) => Ordering::Less,
            (_, Norm::Zero) => Ordering::Greater,
            (Norm::ExpNeg(a), Norm::ExpNeg(b)) => b.cmp(a),
        }
    }
}

impl PartialOrd for Norm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Result of asking a series for its `i`-th term within a bound.
pub(crate) enum Fetch {
    /// The term exists (its exponent may exceed the bound).
    Term(Exponent, Coefficient),
    /// There is no `i`-th term at or below the bound; beyond it is unknown.
    NoneUpTo,
    /// The series has fewer than `i + 1` terms.
    End,
}

/// Result of one step of a term generator.
pub(crate) enum Pull {
    /// The next term in order, which may lie beyond the requested bound.
    /// A zero coefficient is allowed and is dropped by the memo.
    Term(Exponent, Coefficient),
    /// No further term at or below the requested bound.
    Exhausted,
    /// No further terms at all.
    Finished,
}

pub(crate) trait Source: Send {
    fn pull(&mut self, bound: &Exponent) -> Result<Pull>;
}

enum Horizon {
    Nothing,
    Upto(Exponent),
    All,
}

struct Memo {
    terms: Vec<Term>,
    horizon: Horizon,
    last: Option<Exponent>,
    source: Option<Box<dyn Source>>,
    failed: Option<Error>,
    numeric_drops: usize,
}

impl Memo {
    fn covers(&self, bound: &Exponent) -> bool {
        match &self.horizon {
            Horizon::All => true,
            Horizon::Upto(h) => h >= bound,
            Horizon::Nothing => false,
        }
    }

    fn fail(&mut self, e: Error) -> Error {
        self.failed = Some(e.clone());
        self.source = None;
        e
    }

    fn step(&mut self, bound: &Exponent) -> Result<()> {
        if let Some(e) = &self.failed {
            return Err(e.clone());
        }
        let Some(source) = self.source.as_mut() else {
            self.horizon = Horizon::All;
            return Ok(());
        };
        match source.pull(bound) {
            Err(e) => Err(self.fail(e)),
            Ok(Pull::Term(e, c)) => {
                if self.last.as_ref().is_some_and(|last| e <= *last) {
                    return Err(self.fail(Error::NonMonotoneStream(e)));
                }
                self.last = Some(e.clone());
                self.horizon = Horizon::Upto(e.clone());
                if c.is_zero() {
                    if !c.is_exact() {
                        self.numeric_drops += 1;
                    }
                } else {
                    self.terms.push((e, c));
                }
                Ok(())
            }
            Ok(Pull::Exhausted) => {
                if !self.covers(bound) {
                    self.horizon = Horizon::Upto(bound.clone());
                }
                Ok(())
            }
            Ok(Pull::Finished) => {
                self.source = None;
                self.horizon = Horizon::All;
                Ok(())
            }
        }
    }

    fn ensure(&mut self, bound: &Exponent) -> Result<()> {
        while !self.covers(bound) {
            self.step(bound)?;
        }
        Ok(())
    }

    fn ensure_index(&mut self, i: usize, bound: &Exponent) -> Result<()> {
        while self.terms.len() <= i && !self.covers(bound) {
            self.step(bound)?;
        }
        Ok(())
    }
}

enum Floor {
    /// Structurally the zero series.
    Zero,
    /// Every exponent of the series is at least this.
    At(Exponent),
}

struct Inner {
    floor: Floor,
    memo: Mutex<Memo>,
}

/// A generalised Puiseux series `Σ a_α t^α` with finite or strictly
/// increasing unbounded support.
///
/// Cloning is cheap and shares the memo, so terms computed through one handle
/// are visible through all of them.
#[derive(Clone)]
pub struct Series(Arc<Inner>);

impl Series {
    pub(crate) fn from_source(floor: Exponent, source: impl Source + 'static) -> Series {
        Series(Arc::new(Inner {
            floor: Floor::At(floor),
            memo: Mutex::new(Memo {
                terms: Vec::new(),
                horizon: Horizon::Nothing,
                last: None,
                source: Some(Box::new(source)),
                failed: None,
                numeric_drops: 0,
            }),
        }))
    }

    fn finished(floor: Floor, terms: Vec<Term>) -> Series {
        Series(Arc::new(Inner {
            floor,
            memo: Mutex::new(Memo {
                terms,
                horizon: Horizon::All,
                last: None,
                source: None,
                failed: None,
                numeric_drops: 0,
            }),
        }))
    }

    /// The zero series.
    pub fn zero() -> Series {
        Series::finished(Floor::Zero, Vec::new())
    }

    pub fn one() -> Series {
        Series::constant(Coefficient::one())
    }

    pub fn constant(c: Coefficient) -> Series {
        Series::monomial(c, Exponent::zero())
    }

    pub fn from_int(n: i64) -> Series {
        Series::constant(Coefficient::from_int(n))
    }

    /// `c·t^e`.
    pub fn monomial(c: Coefficient, e: Exponent) -> Series {
        Series::from_terms([(e, c)])
    }

    /// A finite series. Terms may come in any order; equal exponents are
    /// summed and zero coefficients dropped.
    pub fn from_terms(terms: impl IntoIterator<Item = Term>) -> Series {
        let mut terms: Vec<Term> = terms.into_iter().collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match merged.last_mut() {
                Some(last) if last.0 == e => last.1 = &last.1 + &c,
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|t| !t.1.is_zero());
        match merged.first() {
            None => Series::zero(),
            Some(first) => {
                let floor = Floor::At(first.0.clone());
                Series::finished(floor, merged)
            }
        }
    }

    /// A series whose `k`-th term is `f(k)`, ending at the first `None`.
    /// Exponents must be strictly increasing and at least `lower`; a
    /// violation surfaces as an error when the offending term is reached.
    pub fn from_fn(
        lower: Exponent,
        f: impl FnMut(usize) -> Option<Term> + Send + 'static,
    ) -> Series {
        Series::from_source(
            lower.clone(),
            FnSource {
                f: Box::new(f),
                k: 0,
                lower,
            },
        )
    }

    /// `1/(1 − t^step) = Σ t^{k·step}`, for `step > 0`.
    pub fn geometric(step: &Exponent) -> Result<Series> {
        if !step.is_positive() {
            return Err(Error::Semantic(format!(
                "geometric series needs a positive step, got {step}"
            )));
        }
        let step = step.clone();
        Ok(Series::from_fn(Exponent::zero(), move |k| {
            Some((step.mul_int(k as i64), Coefficient::one()))
        }))
    }

    /// True if the series is structurally zero.
    pub fn is_known_zero(&self) -> bool {
        matches!(self.0.floor, Floor::Zero)
    }

    /// A lower bound on all exponents; `None` for the known zero series.
    pub fn lower_bound(&self) -> Option<&Exponent> {
        match &self.0.floor {
            Floor::Zero => None,
            Floor::At(e) => Some(e),
        }
    }

    /// True once the generator has reported its last term.
    pub fn is_finished(&self) -> bool {
        matches!(self.0.memo.lock().unwrap().horizon, Horizon::All)
    }

    /// Number of float terms dropped as numerically zero so far.
    pub fn numeric_drops(&self) -> usize {
        self.0.memo.lock().unwrap().numeric_drops
    }

    pub(crate) fn fetch(&self, i: usize, bound: &Exponent) -> Result<Fetch> {
        let mut memo = self.0.memo.lock().unwrap();
        memo.ensure_index(i, bound)?;
        if let Some((e, c)) = memo.terms.get(i) {
            return Ok(Fetch::Term(e.clone(), c.clone()));
        }
        Ok(match memo.horizon {
            Horizon::All => Fetch::End,
            _ => Fetch::NoneUpTo,
        })
    }

    /// All terms with exponent at most `bound`, in increasing order.
    pub fn terms_below(&self, bound: &Exponent) -> Result<Vec<Term>> {
        let mut memo = self.0.memo.lock().unwrap();
        memo.ensure(bound)?;
        Ok(memo
            .terms
            .iter()
            .take_while(|t| t.0 <= *bound)
            .cloned()
            .collect())
    }

    /// Terms computed so far, without forcing any work.
    pub fn known_terms(&self) -> Vec<Term> {
        self.0.memo.lock().unwrap().terms.clone()
    }

    /// The first term, if one exists at or below `cap` or is already known.
    pub fn first_term(&self, cap: &Exponent) -> Result<Option<Term>> {
        match self.fetch(0, cap)? {
            Fetch::Term(e, c) => Ok(Some((e, c))),
            Fetch::End => Ok(None),
            Fetch::NoneUpTo => Err(Error::undetermined(cap)),
        }
    }

    /// The valuation, searching for a first term up to `cap`.
    pub fn valuation(&self, cap: &Exponent) -> Result<Valuation> {
        if self.is_known_zero() {
            return Ok(Valuation::Infinite);
        }
        Ok(match self.first_term(cap)? {
            Some((e, _)) => Valuation::Finite(e),
            None => Valuation::Infinite,
        })
    }

    /// The coefficient at the valuation.
    pub fn lc(&self, cap: &Exponent) -> Result<Coefficient> {
        match self.first_term(cap)? {
            Some((_, c)) => Ok(c),
            None => Err(Error::Precondition(
                "the zero series has no leading coefficient".into(),
            )),
        }
    }

    /// `exp(−val f)` with `exp(−∞) = 0`.
    pub fn norm(&self, cap: &Exponent) -> Result<Norm> {
        Ok(match self.valuation(cap)? {
            Valuation::Finite(v) => Norm::ExpNeg(v),
            Valuation::Infinite => Norm::Zero,
        })
    }

    fn map(&self, start: usize, factor: Option<Coefficient>, shift: Exponent, float: Option<u32>) -> Series {
        match self.lower_bound() {
            None => Series::zero(),
            Some(lb) => Series::from_source(
                lb + &shift,
                MapSource {
                    inner: self.clone(),
                    idx: start,
                    factor,
                    shift,
                    float,
                },
            ),
        }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &Coefficient) -> Series {
        if c.is_exact() && c.is_zero() {
            return Series::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        self.map(0, Some(c.clone()), Exponent::zero(), None)
    }

    /// `t^e·f`: every exponent moves by `e`.
    pub fn shift(&self, e: &Exponent) -> Series {
        if e.is_zero() {
            return self.clone();
        }
        self.map(0, None, e.clone(), None)
    }

    /// Every coefficient converted to a float ball at `prec` bits.
    pub fn to_float(&self, prec: u32) -> Series {
        self.map(0, None, Exponent::zero(), Some(prec))
    }

    /// The terms at or below `bound` only.
    pub fn truncate(&self, bound: &Exponent) -> Series {
        match self.lower_bound() {
            None => Series::zero(),
            Some(lb) => Series::from_source(
                lb.clone(),
                TruncateSource {
                    inner: self.clone(),
                    idx: 0,
                    limit: bound.clone(),
                },
            ),
        }
    }

    /// Sum of many series in one merge.
    pub fn sum(parts: impl IntoIterator<Item = Series>) -> Series {
        let parts: Vec<Series> = parts.into_iter().filter(|s| !s.is_known_zero()).collect();
        match parts.len() {
            0 => Series::zero(),
            1 => parts.into_iter().next().unwrap(),
            _ => {
                let floor = parts
                    .iter()
                    .map(|p| p.lower_bound().unwrap().clone())
                    .min()
                    .unwrap();
                Series::from_source(
                    floor,
                    SumSource {
                        parts: parts.into_iter().map(|p| (p, 0)).collect(),
                    },
                )
            }
        }
    }

    pub fn add(&self, o: &Series) -> Series {
        Series::sum([self.clone(), o.clone()])
    }

    pub fn neg(&self) -> Series {
        self.scale(&Coefficient::from_int(-1))
    }

    pub fn sub(&self, o: &Series) -> Series {
        self.add(&o.neg())
    }

    /// The Cauchy product, produced by a best-first walk over index pairs.
    pub fn mul(&self, o: &Series) -> Series {
        let (Some(lf), Some(lg)) = (self.lower_bound(), o.lower_bound()) else {
            return Series::zero();
        };
        Series::from_source(
            lf + lg,
            ProductSource {
                f: self.clone(),
                g: o.clone(),
                lf: lf.clone(),
                lg: lg.clone(),
                heap: BinaryHeap::new(),
                products: HashMap::new(),
                pending: vec![(0, 0)],
            },
        )
    }

    pub fn pow(&self, k: u32) -> Series {
        let mut acc = Series::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `1/f`, written as `a⁻¹·t^{−v}·Σ(−h)^k` where `f = a·t^v·(1 + h)` and
    /// `val h > 0`. The valuation of `f` must show up at or below `cap`.
    pub fn inverse(&self, cap: &Exponent) -> Result<Series> {
        if self.is_known_zero() {
            return Err(Error::DivisionByZero);
        }
        let (v, a) = match self.fetch(0, cap)? {
            Fetch::Term(e, c) => (e, c),
            Fetch::End => return Err(Error::DivisionByZero),
            Fetch::NoneUpTo => return Err(Error::undetermined(cap)),
        };
        let a_inv = a.inv()?;
        // a positive lower bound for val h
        let mut probe = cap.clone();
        let lb_h = loop {
            match self.fetch(1, &probe)? {
                Fetch::Term(e, _) => break Some(&e - &v),
                Fetch::End => break None,
                Fetch::NoneUpTo => {
                    let gap = &probe - &v;
                    if gap.is_positive() {
                        break Some(gap);
                    }
                    probe = &v + &Exponent::from_integer(1);
                }
            }
        };
        let lead = Series::monomial(a_inv.clone(), -&v);
        let Some(lb_h) = lb_h else {
            return Ok(lead);
        };
        let neg_h = Series::from_source(
            lb_h.clone(),
            MapSource {
                inner: self.clone(),
                idx: 1,
                factor: Some(-&a_inv),
                shift: -&v,
                float: None,
            },
        );
        let geometric = Series::from_source(
            Exponent::zero(),
            InverseSource {
                neg_h,
                terms: Vec::new(),
                heap: BinaryHeap::new(),
                products: HashMap::new(),
                pending: Vec::new(),
            },
        );
        Ok(geometric.scale(&a_inv).shift(&-&v))
    }

    /// True iff `f − g` has no terms at or below `bound`.
    pub fn equal_up_to(&self, o: &Series, bound: &Exponent) -> Result<bool> {
        Ok(self.sub(o).terms_below(bound)?.is_empty())
    }

    /// Composes a truncated power series `G(z₀,…,z_k)`, given as
    /// `(multi-exponent, coefficient)` pairs, with arguments of positive
    /// valuation. The result is exact in all terms at or below `bound` and
    /// has no terms above it.
    pub fn substitute(
        g: &[(Vec<u32>, Coefficient)],
        args: &[Series],
        bound: &Exponent,
    ) -> Result<Series> {
        let mut vals = Vec::with_capacity(args.len());
        for (index, arg) in args.iter().enumerate() {
            match arg.valuation(bound).map_err(|e| e.with_context(format!("argument {index}")))? {
                Valuation::Infinite => vals.push(None),
                Valuation::Finite(v) if v.is_positive() => vals.push(Some(v)),
                Valuation::Finite(_) => return Err(Error::NonPositiveSubstitution { index }),
            }
        }
        let mut parts = Vec::new();
        'terms: for (exps, c) in g {
            let mut order = Exponent::zero();
            let mut product = Series::constant(c.clone());
            for (i, &k) in exps.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let arg = args.get(i).ok_or_else(|| {
                    Error::Precondition(format!("monomial uses variable {i} without an argument"))
                })?;
                match &vals[i] {
                    None => continue 'terms,
                    Some(v) => order = &order + &v.mul_int(k as i64),
                }
                product = product.mul(&arg.pow(k));
            }
            if order <= *bound {
                parts.push(product.truncate(bound));
            }
        }
        Ok(Series::sum(parts).truncate(bound))
    }

    /// The limit of a Cauchy sequence. `seq(M)` returns an index `N(M)` and
    /// the series `f_{N(M)}`, with the promise that all later members agree
    /// with it on every exponent up to `M` and that `N` is non-decreasing.
    /// Terms up to `M` of the limit are read off `f_{N(M)}`; a broken promise
    /// that becomes visible is reported as [`Error::NotCauchy`].
    pub fn cauchy_limit(
        mut seq: impl FnMut(i64) -> (usize, Series) + Send + 'static,
    ) -> Result<Series> {
        let (n, first) = seq(1);
        let one = Exponent::from_integer(1);
        let floor = match first.lower_bound() {
            Some(lb) if *lb < one => lb.clone(),
            _ => one,
        };
        Ok(Series::from_source(
            floor,
            CauchySource {
                seq: Box::new(seq),
                m: 1,
                n,
                current: first,
                idx: 0,
            },
        ))
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let memo = self.0.memo.lock().unwrap();
        let terms: Vec<String> = memo.terms.iter().map(|(e, c)| format!("({c})*t^({e})")).collect();
        let tail = if matches!(memo.horizon, Horizon::All) { "" } else { " + ..." };
        write!(f, "Series[{}{}]", terms.join(" + "), tail)
    }
}

impl<'a> Add<&'a Series> for &'a Series {
    type Output = Series;
    fn add(self, o: &'a Series) -> Series {
        Series::add(self, o)
    }
}

impl<'a> Sub<&'a Series> for &'a Series {
    type Output = Series;
    fn sub(self, o: &'a Series) -> Series {
        Series::sub(self, o)
    }
}

impl<'a> Mul<&'a Series> for &'a Series {
    type Output = Series;
    fn mul(self, o: &'a Series) -> Series {
        Series::mul(self, o)
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series::neg(self)
    }
}

struct FnSource {
    f: Box<dyn FnMut(usize) -> Option<Term> + Send>,
    k: usize,
    lower: Exponent,
}

impl Source for FnSource {
    fn pull(&mut self, _bound: &Exponent) -> Result<Pull> {
        match (self.f)(self.k) {
            None => Ok(Pull::Finished),
            Some((e, c)) => {
                if self.k == 0 && e < self.lower {
                    return Err(Error::NonMonotoneStream(e));
                }
                self.k += 1;
                Ok(Pull::Term(e, c))
            }
        }
    }
}

struct MapSource {
    inner: Series,
    idx: usize,
    factor: Option<Coefficient>,
    shift: Exponent,
    float: Option<u32>,
}

impl Source for MapSource {
    fn pull(&mut self, bound: &Exponent) -> Result<Pull> {
        let inner_bound = bound - &self.shift;
        Ok(match self.inner.fetch(self.idx, &inner_bound)? {
            Fetch::Term(e, c) => {
                self.idx += 1;
                let mut c = match &self.factor {
                    Some(k) => &c * k,
                    None => c,
                };
                if let Some(prec) = self.float {
                    c = c.to_float(prec);
                }
                Pull::Term(&e + &self.shift, c)
            }
            Fetch::NoneUpTo => Pull::Exhausted,
            Fetch::End => Pull::Finished,
        })
    }
}

struct TruncateSource {
    inner: Series,
    idx: usize,
    limit: Exponent,
}

impl Source for TruncateSource {
    fn pull(&mut self, bound: &Exponent) -> Result<Pull> {
        let b = if *bound < self.limit { bound } else { &self.limit };
        Ok(match self.inner.fetch(self.idx, b)? {
            Fetch::Term(e, c) if e <= self.limit => {
                self.idx += 1;
                Pull::Term(e, c)
            }
            Fetch::Term(..) | Fetch::End => Pull::Finished,
            Fetch::NoneUpTo if *b == self.limit => Pull::Finished,
            Fetch::NoneUpTo => Pull::Exhausted,
        })
    }
}

struct SumSource {
    parts: Vec<(Series, usize)>,
}

impl Source for SumSource {
    fn pull(&mut self, bound: &Exponent) -> Result<Pull> {
        let mut best: Option<Exponent> = None;
        let mut blocked = false;
        for (part, idx) in &self.parts {
            match part.fetch(*idx, bound)? {
                Fetch::Term(e, _) => {
                    if best.as_ref().is_none_or(|b| e < *b) {
                        best = Some(e);
                    }
                }
                Fetch::NoneUpTo => blocked = true,
                Fetch::End => {}
            }
        }
        let Some(m) = best else {
            return Ok(if blocked {
                Pull::Exhausted
            } else {
                Pull::Finished
            });
        };
        if blocked && m > *bound {
            return Ok(Pull::Exhausted);
        }
        let mut total = Coefficient::zero();
        for (part, idx) in &mut self.parts {
            if let Fetch::Term(e, c) = part.fetch(*idx, bound)? {
                if e == m {
                    total = &total + &c;
                    *idx += 1;
                }
            }
        }
        Ok(Pull::Term(m, total))
    }
}

/// `u = 1/(1 + h)` from `u = 1 − h·u`: the term of `u` at `e` collects
/// `(−h)_i·u_j` over pairs with exponents summing to `e`, all of which involve
/// earlier terms of `u` because `val h > 0`.
struct InverseSource {
    neg_h: Series,
    terms: Vec<Term>,
    heap: BinaryHeap<Reverse<(Exponent, usize, usize)>>,
    products: HashMap<(usize, usize), Coefficient>,
    pending: Vec<(usize, usize)>,
}

impl Source for InverseSource {
    fn pull(&mut self, bound: &Exponent) -> Result<Pull> {
        if self.terms.is_empty() {
            self.terms.push((Exponent::zero(), Coefficient::one()));
            self.pending.push((0, 0));
            return Ok(Pull::Term(Exponent::zero(), Coefficient::one()));
        }
        loop {
            let mut waiting = Vec::new();
            for (i, j) in std::mem::take(&mut self.pending) {
                let (eu, cu) = &self.terms[j];
                match self.neg_h.fetch(i, &(bound - eu))? {
                    Fetch::Term(eh, ch) => {
                        self.heap.push(Reverse((&eh + eu, i, j)));
                        self.products.insert((i, j), &ch * cu);
                    }
                    Fetch::NoneUpTo => waiting.push((i, j)),
                    Fetch::End => {}
                }
            }
            self.pending = waiting;
            let Some(Reverse((min, _, _))) = self.heap.peek().cloned() else {
                return Ok(if self.pending.is_empty() {
                    Pull::Finished
                } else {
                    Pull::Exhausted
                });
            };
            if !self.pending.is_empty() && min > *bound {
                return Ok(Pull::Exhausted);
            }
            let mut total = Coefficient::zero();
            while let Some(Reverse((e, i, j))) = self.heap.peek() {
                if *e != min {
                    break;
                }
                let (i, j) = (*i, *j);
                self.heap.pop();
                let c = self.products.remove(&(i, j)).expect("product of a frontier pair");
                total = &total + &c;
                self.pending.push((i + 1, j));
            }
            if total.is_zero() && total.is_exact() {
                continue;
            }
            if !total.is_zero() {
                self.pending.push((0, self.terms.len()));
                self.terms.push((min.clone(), total.clone()));
            }
            return Ok(Pull::Term(min, total));
        }
    }
}

struct ProductSource {
    f: Series,
    g: Series,
    lf: Exponent,
    lg: Exponent,
    heap: BinaryHeap<Reverse<(Exponent, usize, usize)>>,
    products: HashMap<(usize, usize), Coefficient>,
    /// Frontier pairs whose factors are not yet known within the bound.
    pending: Vec<(usize, usize)>,
}

impl Source for ProductSource {
    fn pull(&mut self, bound: &Exponent) -> Result<Pull> {
        let fb = bound - &self.lg;
        let gb = bound - &self.lf;
        let mut waiting = Vec::new();
        for (i, j) in std::mem::take(&mut self.pending) {
            let (ea, ca) = match self.f.fetch(i, &fb)? {
                Fetch::Term(e, c) => (e, c),
                Fetch::NoneUpTo => {
                    waiting.push((i, j));
                    continue;
                }
                Fetch::End => continue,
            };
            match self.g.fetch(j, &gb)? {
                Fetch::Term(eb, cb) => {
                    self.heap.push(Reverse((&ea + &eb, i, j)));
                    self.products.insert((i, j), &ca * &cb);
                }
                Fetch::NoneUpTo => waiting.push((i, j)),
                Fetch::End => {}
            }
        }
        self.pending = waiting;
        let Some(Reverse((min, _, _))) = self.heap.peek().cloned() else {
            return Ok(if self.pending.is_empty() {
                Pull::Finished
            } else {
                Pull::Exhausted
            });
        };
        if !self.pending.is_empty() && min > *bound {
            return Ok(Pull::Exhausted);
        }
        let mut total = Coefficient::zero();
        while let Some(Reverse((e, i, j))) = self.heap.peek() {
            if *e != min {
                break;
            }
            let (i, j) = (*i, *j);
            self.heap.pop();
            let c = self.products.remove(&(i, j)).expect("product of a frontier pair");
            total = &total + &c;
            self.pending.push((i + 1, j));
            if i == 0 {
                self.pending.push((0, j + 1));
            }
        }
        Ok(Pull::Term(min, total))
    }
}

type CauchySeq = Box<dyn FnMut(i64) -> (usize, Series) + Send>;

struct CauchySource {
    seq: CauchySeq,
    m: i64,
    n: usize,
    current: Series,
    idx: usize,
}

impl CauchySource {
    fn refresh(&mut self, m: i64) -> Result<()> {
        let (n, next) = (self.seq)(m);
        if n < self.n {
            return Err(Error::NotCauchy(format!(
                "index N({m}) = {n} is below N({}) = {}",
                self.m, self.n
            )));
        }
        let old_m = Exponent::from_integer(self.m);
        let before = self.current.terms_below(&old_m)?;
        let after = next.terms_below(&old_m)?;
        if before != after {
            return Err(Error::NotCauchy(format!(
                "members {} and {n} differ at or below exponent {}",
                self.n, self.m
            )));
        }
        self.m = m;
        self.n = n;
        self.current = next;
        Ok(())
    }
}

impl Source for CauchySource {
    fn pull(&mut self, bound: &Exponent) -> Result<Pull> {
        let needed = i64::try_from(bound.ceil()).unwrap_or(i64::MAX).max(1);
        if needed > self.m {
            self.refresh(needed)?;
        }
        let m = Exponent::from_integer(self.m);
        Ok(match self.current.fetch(self.idx, bound)? {
            Fetch::Term(e, c) if e <= m => {
                self.idx += 1;
                Pull::Term(e, c)
            }
            _ => Pull::Exhausted,
        })
    }
}
