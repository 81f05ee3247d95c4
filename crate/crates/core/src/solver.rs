//! Newton–Puiseux expansion of the roots of `F ∈ 𝕂[y]`.
//!
//! A root is built one term at a time. At a node with polynomial `G` whose
//! roots of positive valuation number `r`, each lower face of the Newton
//! polygon left of `(r, 0)` has slope `−ω`, and each nonzero root `c` of
//! multiplicity `r′` of the face's initial form gives a child
//! `t^{−α}·G(t^ω·(c + y))` with `r′` roots of positive valuation. A child
//! that did not split (`r′ = r`) and still has other roots is replaced by its
//! Weierstraß polynomial, after which degree and root count agree and the
//! closed form `ȳ = −g_{n−1}/(n·g_n)` is tried.
//!
//! The closed form is only taken when it is checked: for `n = 1` it is the
//! root, otherwise `G − g_n·(y − ȳ)ⁿ` must vanish on all t-orders up to the
//! valuation cap. A cluster that fails the check separates further down, so
//! the iteration continues there.
//!
//! Only characteristic zero is in scope; the closed form and the count of
//! branches both fail in positive characteristic (Artin–Schreier
//! polynomials have no Puiseux roots).

use crate::coeffs::{croots, Coefficient, Mode, RootConfig, DEFAULT_MAX_PRECISION, DEFAULT_PRECISION};
use crate::error::{Error, Result};
use crate::exponents::Exponent;
use crate::polynomial::{initial_form_of, NewtonPolygon, Point, PolyOverK};
use crate::series::{Fetch, Series, Term, Valuation};
use crate::tropical::tropical_roots;
use crate::weierstrass::weierstrass_factor;

/// Solver settings.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub mode: Mode,
    /// Working precision in bits for float coefficients and for initial-form
    /// roots that are not in ℚ(i).
    pub precision: u32,
    /// Retries double the precision up to this.
    pub max_precision: u32,
    /// Overrides the polynomial's own valuation cap.
    pub val_cap: Option<Exponent>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            mode: Mode::Exact,
            precision: DEFAULT_PRECISION,
            max_precision: DEFAULT_MAX_PRECISION,
            val_cap: None,
        }
    }
}

/// One step `ȳ = … + t^{e}·(c + y′)` with `e` the previous exponent plus `ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    /// `ord_ω` of the polynomial at this step.
    pub alpha: Exponent,
    pub omega: Exponent,
    pub c: Coefficient,
    /// Multiplicity of `c` in the initial form.
    pub r_prime: usize,
    /// The step ran on a Weierstraß polynomial prepared at this node.
    pub weierstrass: bool,
}

/// How the expansion of a root ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Termination {
    /// The root is the finite sum of its steps.
    Finite,
    /// The remaining polynomial was linear: `ȳ = −g₀/g₁`.
    Linear,
    /// The remaining polynomial was checked to equal `g_n·(y − ȳ)ⁿ` on all
    /// t-orders up to `verified_to`, and `ȳ = −g_{n−1}/(n·g_n)`.
    Cluster { verified_to: Exponent },
    /// The remaining constant coefficient has no term up to `cap`, so the
    /// root was taken to end after its steps.
    Truncated { cap: Exponent },
}

/// A root of `F` as a lazy series with its construction history.
#[derive(Clone, Debug)]
pub struct RootExpansion {
    pub series: Series,
    pub multiplicity: usize,
    /// `Infinite` for the zero root.
    pub valuation: Valuation,
    pub trace: Vec<StepRecord>,
    pub termination: Termination,
}

impl RootExpansion {
    /// True when the expansion closed in finitely many terms or by the
    /// closed form.
    pub fn terminated_exactly(&self) -> bool {
        !matches!(self.termination, Termination::Truncated { .. })
    }

    /// The sum of the first `k` terms of the root. Terms are searched up to
    /// `cap`; fewer are returned if the root has fewer.
    pub fn partial_sum(&self, k: usize, cap: &Exponent) -> Result<Series> {
        let mut terms = Vec::new();
        for i in 0..k {
            match self.series.fetch(i, cap)? {
                Fetch::Term(e, c) => terms.push((e, c)),
                _ => break,
            }
        }
        Ok(Series::from_terms(terms))
    }

    /// Exponents `e₀ < e₁ < …` of the root's first `k` terms up to `cap`.
    pub fn exponents(&self, k: usize, cap: &Exponent) -> Result<Vec<Exponent>> {
        let mut out = Vec::new();
        for i in 0..k {
            match self.series.fetch(i, cap)? {
                Fetch::Term(e, _) => out.push(e),
                _ => break,
            }
        }
        Ok(out)
    }
}

/// Outcome of evaluating `F` at an approximate root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Residual {
    /// `val F(y)` is exactly this.
    Exact(Exponent),
    /// `F(y)` has no terms up to the cap.
    AtLeast(Exponent),
}

impl Residual {
    /// The exponent, as a lower bound in the `AtLeast` case.
    pub fn bound(&self) -> &Exponent {
        match self {
            Residual::Exact(e) | Residual::AtLeast(e) => e,
        }
    }
}

/// `val F(y)`, or the knowledge that it exceeds `cap`.
pub fn residual_valuation(f: &PolyOverK, y: &Series, cap: &Exponent) -> Result<Residual> {
    match f.eval(y).valuation(cap) {
        Ok(Valuation::Finite(v)) if v <= *cap => Ok(Residual::Exact(v)),
        Ok(_) | Err(Error::UndeterminedValuation { .. }) => Ok(Residual::AtLeast(cap.clone())),
        Err(e) => Err(e),
    }
}

/// All roots of `F` with multiplicities summing to its degree. Zero roots
/// come first, then faces by increasing abscissa, roots of each initial form
/// in canonical order. Terms up to `order_budget` are computed before
/// returning, so precision problems surface here; later terms are lazy.
pub fn all_roots(f: &PolyOverK, order_budget: &Exponent, cfg: &SolverConfig) -> Result<Vec<RootExpansion>> {
    with_retries(f, order_budget, cfg, |g, ctx| {
        let mut out = Vec::new();
        let (g, zeros) = strip_absent(g, &ctx.cap)?;
        if zeros.count > 0 {
            out.push(RootExpansion {
                series: Series::zero(),
                multiplicity: zeros.count,
                valuation: Valuation::Infinite,
                trace: Vec::new(),
                termination: zeros.termination(&ctx.cap),
            });
        }
        let support = lenient_support(&g, &ctx.cap)?;
        let Some(n) = support.last().map(|p| p.0) else {
            return Ok(out);
        };
        if n == 0 {
            return Ok(out);
        }
        let g = PolyOverK::new(g.coeffs()[..=n].to_vec()).with_val_cap(ctx.cap.clone());
        let min = support.iter().map(|p| p.1.clone()).min().unwrap();
        let g = PolyOverK::new(g.coeffs().iter().map(|c| c.shift(&-&min)).collect()).with_val_cap(ctx.cap.clone());
        ctx.node(g, n, n, Path::default(), &mut out)?;
        Ok(out)
    })
}

/// One root of positive valuation, following the first face and the first
/// initial-form root at every step. Needs `f₀ ≠ 0`, all coefficient
/// valuations `≥ 0` and a coefficient of valuation `0`.
pub fn find_root_positive_val(f: &PolyOverK, order_budget: &Exponent, cfg: &SolverConfig) -> Result<RootExpansion> {
    let roots = with_retries(f, order_budget, cfg, |g, ctx| {
        if g.coeff_valuation(0)?.is_infinite() {
            return Err(Error::Precondition("the constant coefficient is zero".into()));
        }
        let support = g.t_support()?;
        if let Some((index, value)) = support.iter().find(|p| p.1.is_negative()) {
            return Err(Error::NegativeValuation {
                index: *index,
                value: value.clone(),
            });
        }
        let Some(r) = support.iter().find(|p| p.1.is_zero()).map(|p| p.0) else {
            return Err(Error::Precondition("no coefficient has valuation zero".into()));
        };
        if r == 0 {
            return Err(Error::Precondition(
                "the constant coefficient has valuation zero, so no root has positive valuation".into(),
            ));
        }
        let n = support.last().unwrap().0;
        let g = PolyOverK::new(g.coeffs()[..=n].to_vec()).with_val_cap(ctx.cap.clone());
        let mut out = Vec::new();
        let single = Solve { single: true, ..ctx.clone() };
        single.node(g, r, usize::MAX, Path::default(), &mut out)?;
        Ok(out)
    })?;
    roots
        .into_iter()
        .next()
        .ok_or_else(|| Error::Precondition("no root of positive valuation found".into()))
}

/// Comparison of root valuations with the tropical roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftingReport {
    /// Finite root valuations with multiplicities, merged and sorted.
    pub root_valuations: Vec<(Exponent, usize)>,
    /// `(ω, multiplicity)` from the Newton polygon, sorted.
    pub tropical: Vec<(Exponent, usize)>,
    pub mismatches: Vec<String>,
}

impl LiftingReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Checks that the finite root valuations are the tropical roots, with
/// multiplicities.
pub fn verify_lifting_univariate(f: &PolyOverK, cfg: &SolverConfig) -> Result<LiftingReport> {
    let roots = all_roots(f, &Exponent::zero(), cfg)?;
    let mut vals: Vec<(Exponent, usize)> = Vec::new();
    for root in &roots {
        if let Valuation::Finite(v) = &root.valuation {
            match vals.iter_mut().find(|p| p.0 == *v) {
                Some(p) => p.1 += root.multiplicity,
                None => vals.push((v.clone(), root.multiplicity)),
            }
        }
    }
    vals.sort();
    let mut tropical: Vec<(Exponent, usize)> = tropical_roots(f)?
        .into_iter()
        .map(|t| (t.omega, t.multiplicity))
        .collect();
    tropical.sort();
    let mut mismatches = Vec::new();
    for (v, m) in &vals {
        match tropical.iter().find(|t| t.0 == *v) {
            Some((_, k)) if k == m => {}
            Some((_, k)) => mismatches.push(format!("valuation {v}: {m} roots, tropical multiplicity {k}")),
            None => mismatches.push(format!("valuation {v}: {m} roots, not a tropical root")),
        }
    }
    for (w, k) in &tropical {
        if !vals.iter().any(|p| p.0 == *w) {
            mismatches.push(format!("tropical root {w} of multiplicity {k} has no root"));
        }
    }
    Ok(LiftingReport {
        root_valuations: vals,
        tropical,
        mismatches,
    })
}

fn with_retries(
    f: &PolyOverK,
    order_budget: &Exponent,
    cfg: &SolverConfig,
    run: impl Fn(&PolyOverK, &Solve) -> Result<Vec<RootExpansion>>,
) -> Result<Vec<RootExpansion>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let cap = cfg.val_cap.clone().unwrap_or_else(|| f.val_cap().clone());
    let mut precision = cfg.precision;
    loop {
        let g = match cfg.mode {
            Mode::Exact => f.clone(),
            Mode::Float => f.to_float(precision),
        }
        .with_val_cap(cap.clone());
        let ctx = Solve {
            roots: RootConfig {
                precision,
                max_precision: cfg.max_precision.max(precision),
            },
            cap: cap.clone(),
            single: false,
        };
        let attempt = run(&g, &ctx).and_then(|roots| {
            for root in &roots {
                root.series.terms_below(order_budget)?;
            }
            Ok(roots)
        });
        match attempt {
            Err(Error::PrecisionExhausted { .. } | Error::NumericallyZeroDivisor) if precision * 2 <= cfg.max_precision => {
                precision *= 2;
            }
            other => return other,
        }
    }
}

#[derive(Clone)]
struct Solve {
    roots: RootConfig,
    cap: Exponent,
    single: bool,
}

#[derive(Clone, Default)]
struct Path {
    prefix: Vec<Term>,
    base: Exponent,
    trace: Vec<StepRecord>,
}

impl Path {
    fn root(&self, tail: Option<Series>, multiplicity: usize, termination: Termination, cap: &Exponent) -> Result<RootExpansion> {
        let mut series = Series::from_terms(self.prefix.clone());
        if let Some(tail) = tail {
            series = series.add(&tail.shift(&self.base));
        }
        let valuation = match self.prefix.first() {
            Some((e, _)) => Valuation::Finite(e.clone()),
            None => series.valuation(cap)?,
        };
        Ok(RootExpansion {
            series,
            multiplicity,
            valuation,
            trace: self.trace.clone(),
            termination,
        })
    }
}

enum Presence {
    Zero,
    Absent,
    Val(Exponent),
}

fn presence(s: &Series, cap: &Exponent) -> Result<Presence> {
    match s.valuation(cap) {
        Ok(Valuation::Finite(v)) => Ok(Presence::Val(v)),
        Ok(Valuation::Infinite) => Ok(Presence::Zero),
        Err(Error::UndeterminedValuation { .. }) => Ok(Presence::Absent),
        Err(e) => Err(e),
    }
}

/// Support with coefficients that show no term up to `cap` left out.
fn lenient_support(g: &PolyOverK, cap: &Exponent) -> Result<Vec<Point>> {
    let mut out = Vec::new();
    for (i, c) in g.coeffs().iter().enumerate() {
        if let Presence::Val(v) = presence(c, cap)? {
            out.push((i, v));
        }
    }
    Ok(out)
}

struct Stripped {
    count: usize,
    all_zero: bool,
}

impl Stripped {
    fn termination(&self, cap: &Exponent) -> Termination {
        if self.all_zero {
            Termination::Finite
        } else {
            Termination::Truncated { cap: cap.clone() }
        }
    }
}

/// Removes the low coefficients that are zero or show no term up to `cap`.
fn strip_absent(g: &PolyOverK, cap: &Exponent) -> Result<(PolyOverK, Stripped)> {
    let mut s = Stripped { count: 0, all_zero: true };
    for c in g.coeffs() {
        match presence(c, cap)? {
            Presence::Val(_) => break,
            Presence::Zero => s.count += 1,
            Presence::Absent => {
                s.count += 1;
                s.all_zero = false;
            }
        }
    }
    let rest = PolyOverK::new(g.coeffs()[s.count.min(g.coeffs().len())..].to_vec()).with_val_cap(cap.clone());
    Ok((rest, s))
}

impl Solve {
    /// Finds the `r` roots of positive valuation of `g` (all roots at the
    /// top, where `r` is the degree), appending them to `out`.
    fn node(&self, g: PolyOverK, r: usize, parent_r: usize, path: Path, out: &mut Vec<RootExpansion>) -> Result<()> {
        let cap = &self.cap;
        let (mut g, zeros) = strip_absent(&g, cap)?;
        if zeros.count > 0 {
            out.push(path.root(None, zeros.count, zeros.termination(cap), cap)?);
            if self.single {
                return Ok(());
            }
        }
        let r = r - zeros.count.min(r);
        if r == 0 {
            return Ok(());
        }
        let mut support = lenient_support(&g, cap)?;
        let mut n = support.last().map(|p| p.0).unwrap_or(0);
        g = PolyOverK::new(g.coeffs()[..=n].to_vec()).with_val_cap(cap.clone());
        let mut weierstrass = false;
        if r == parent_r && r < n {
            g = weierstrass_factor(&g)?.p.with_val_cap(cap.clone());
            support = lenient_support(&g, cap)?;
            n = r;
            weierstrass = true;
        }
        if r == n {
            if let Some((tail, termination)) = self.closed_form(&g, n)? {
                out.push(path.root(Some(tail), n, termination, cap)?);
                return Ok(());
            }
        }
        if let Some((first, _)) = path.prefix.first() {
            if path.base > first + cap {
                return Err(Error::undetermined(cap).with_context("a root cluster did not separate"));
            }
        }
        let hull: Vec<Point> = support.iter().filter(|p| p.0 <= r).cloned().collect();
        let polygon = NewtonPolygon::from_points(hull);
        for face in &polygon.faces {
            let omega = -&face.slope;
            let alpha = &face.from.1 + &omega.mul_int(face.from.0 as i64);
            let tin = initial_form_of(&g, &support, &omega)?.shift_down(face.from.0);
            for (c, m) in croots(&tin, &self.roots)? {
                let child = g.rescale_substitute(&omega, &c, &alpha);
                self.check_regularity(&child, m, c.is_exact() && tin.is_exact())?;
                let mut next = path.clone();
                next.base = &path.base + &omega;
                next.prefix.push((next.base.clone(), c.clone()));
                next.trace.push(StepRecord {
                    alpha: alpha.clone(),
                    omega: omega.clone(),
                    c,
                    r_prime: m,
                    weierstrass,
                });
                self.node(child, m, r, next, out)?;
                if self.single {
                    return Ok(());
                }
            }
        }
        Ok(())
    }

    /// The root of `g` when `g` has a single root of multiplicity `n`.
    fn closed_form(&self, g: &PolyOverK, n: usize) -> Result<Option<(Series, Termination)>> {
        let lead_inv = g.coeff(n).inverse(&self.cap).map_err(|e| e.with_context("leading coefficient"))?;
        let ybar = g.coeff(n - 1).mul(&lead_inv).scale(&Coefficient::from_rational(
            crate::exponents::rational(-1, n as i64),
        ));
        if n == 1 {
            return Ok(Some((ybar, Termination::Linear)));
        }
        let model = PolyOverK::from_roots(&vec![ybar.clone(); n]).scale(&g.coeff(n));
        for i in (0..n - 1).rev() {
            match g.coeff(i).sub(&model.coeff(i)).first_term(&self.cap) {
                Ok(Some((e, _))) if e <= self.cap => return Ok(None),
                Ok(_) | Err(Error::UndeterminedValuation { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(Some((
            ybar,
            Termination::Cluster {
                verified_to: self.cap.clone(),
            },
        )))
    }

    /// A child built from a root of multiplicity `m` must have its first
    /// valuation-zero coefficient at index `m`; with float coefficients a
    /// failed cancellation shows up here.
    fn check_regularity(&self, child: &PolyOverK, m: usize, exact: bool) -> Result<()> {
        let zero = Exponent::zero();
        for i in 0..=m {
            let has_constant = child.coeff(i).terms_below(&zero)?.iter().any(|t| t.0.is_zero());
            if has_constant != (i == m) {
                if exact {
                    return Err(Error::Precondition(format!(
                        "initial-form root of multiplicity {m} left a constant term at y^{i}"
                    )));
                }
                return Err(Error::PrecisionExhausted {
                    precision: self.roots.precision,
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Exponent {
        Exponent::ratio(n, d)
    }

    fn t(e: Exponent) -> Series {
        Series::monomial(Coefficient::one(), e)
    }

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn square_root_of_t() {
        let f = PolyOverK::new(vec![t(q(1, 1)).neg(), Series::zero(), Series::one()]);
        let roots = all_roots(&f, &q(3, 1), &cfg()).unwrap();
        assert_eq!(roots.len(), 2);
        let mut got: Vec<Vec<Term>> = roots.iter().map(|r| r.series.terms_below(&q(3, 1)).unwrap()).collect();
        got.sort_by(|a, b| a[0].1.canonical_cmp(&b[0].1));
        assert_eq!(got[0], vec![(q(1, 2), Coefficient::from_int(-1))]);
        assert_eq!(got[1], vec![(q(1, 2), Coefficient::from_int(1))]);
        for r in &roots {
            assert_eq!(r.multiplicity, 1);
            assert_eq!(r.valuation, Valuation::Finite(q(1, 2)));
            assert!(r.terminated_exactly());
            let res = residual_valuation(&f, &r.series, &q(50, 1)).unwrap();
            assert_eq!(res, Residual::AtLeast(q(50, 1)));
        }
    }

    #[test]
    fn perfect_square_uses_closed_form() {
        let f = PolyOverK::from_roots(&[t(q(1, 1)), t(q(1, 1))]);
        let roots = all_roots(&f, &q(3, 1), &cfg()).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].multiplicity, 2);
        assert!(matches!(roots[0].termination, Termination::Cluster { .. }));
        assert_eq!(roots[0].series.terms_below(&q(5, 1)).unwrap(), vec![(q(1, 1), Coefficient::one())]);
    }

    #[test]
    fn near_double_root_is_not_merged() {
        let a = t(q(1, 1));
        let b = t(q(1, 1)).add(&t(q(2, 1)));
        let f = PolyOverK::from_roots(&[a, b]);
        let roots = all_roots(&f, &q(3, 1), &cfg()).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().all(|r| r.multiplicity == 1));
    }

    #[test]
    fn series_root_of_quadratic() {
        // y² + t·y − t
        let f = PolyOverK::new(vec![t(q(1, 1)).neg(), t(q(1, 1)), Series::one()]);
        let root = find_root_positive_val(&f, &q(2, 1), &cfg()).unwrap();
        let roots = all_roots(&f, &q(2, 1), &cfg()).unwrap();
        assert_eq!(roots.len(), 2);
        let plus = roots.iter().find(|r| r.trace[0].c == Coefficient::one()).unwrap();
        let terms = plus.series.terms_below(&q(2, 1)).unwrap();
        assert_eq!(terms[0], (q(1, 2), Coefficient::one()));
        assert_eq!(terms[1], (q(1, 1), Coefficient::from_rational(crate::exponents::rational(-1, 2))));
        assert_eq!(root.valuation, Valuation::Finite(q(1, 2)));
        let mut last = None;
        for k in 1..6 {
            let y = plus.partial_sum(k, &q(10, 1)).unwrap();
            let res = residual_valuation(&f, &y, &q(10, 1)).unwrap();
            if let (Some(prev), Residual::Exact(v)) = (&last, &res) {
                assert!(v > prev);
            }
            last = Some(res.bound().clone());
        }
    }

    #[test]
    fn factored_cubic() {
        let f = PolyOverK::from_roots(&[Series::zero(), Series::one(), t(q(1, 1))]);
        let roots = all_roots(&f, &q(3, 1), &cfg()).unwrap();
        let vals: Vec<Valuation> = roots.iter().map(|r| r.valuation.clone()).collect();
        assert_eq!(
            vals,
            vec![Valuation::Infinite, Valuation::Finite(q(1, 1)), Valuation::Finite(q(0, 1))]
        );
        assert_eq!(roots[1].series.terms_below(&q(5, 1)).unwrap(), vec![(q(1, 1), Coefficient::one())]);
        assert_eq!(roots[2].series.terms_below(&q(5, 1)).unwrap(), vec![(q(0, 1), Coefficient::one())]);
    }

    #[test]
    fn negative_valuation_roots() {
        // (t·y − 1)(y − 2) has roots t^{-1} and 2
        let f = PolyOverK::new(vec![Series::from_int(2), Series::from_int(-1).sub(&t(q(1, 1)).scale(&Coefficient::from_int(2))), t(q(1, 1))]);
        let roots = all_roots(&f, &q(1, 1), &cfg()).unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].valuation, Valuation::Finite(q(0, 1)));
        assert_eq!(roots[1].valuation, Valuation::Finite(q(-1, 1)));
        assert_eq!(roots[1].series.terms_below(&q(3, 1)).unwrap(), vec![(q(-1, 1), Coefficient::one())]);
    }

    #[test]
    fn lifting_report_matches() {
        let f = PolyOverK::from_roots(&[t(q(1, 3)), t(q(1, 3)).neg(), Series::from_int(5), t(q(-2, 1))]);
        let report = verify_lifting_univariate(&f, &cfg()).unwrap();
        assert!(report.ok(), "{:?}", report.mismatches);
        assert_eq!(report.root_valuations.len(), 3);
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(all_roots(&PolyOverK::new(vec![]), &q(1, 1), &cfg()).unwrap_err(), Error::ZeroPolynomial);
        assert!(all_roots(&PolyOverK::new(vec![Series::one()]), &q(1, 1), &cfg()).unwrap().is_empty());
    }

    #[test]
    fn float_mode_roots() {
        let f = PolyOverK::new(vec![t(q(1, 1)).neg(), t(q(1, 1)), Series::one()]);
        let cfg = SolverConfig { mode: Mode::Float, ..cfg() };
        let roots = all_roots(&f, &q(2, 1), &cfg).unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            let res = residual_valuation(&f.to_float(128), &r.partial_sum(4, &q(10, 1)).unwrap(), &q(10, 1)).unwrap();
            assert!(res.bound() > &q(2, 1));
        }
    }
}
