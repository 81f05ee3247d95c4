//! Roots of dense complex polynomials with multiplicities.
//!
//! Exact inputs go through a square-free decomposition over ℚ(i), which fixes
//! every multiplicity exactly. Roots of each square-free factor are found
//! numerically and snapped: a root `u/v` in lowest terms over ℤ[i] has `v`
//! dividing the leading coefficient `a` of an integral multiple, so
//! `round(a·z)/a` is the only candidate and is checked by exact evaluation.
//! Roots that do not snap are returned as float balls with certified
//! inclusion radii.
//!
//! Float inputs are solved with Aberth's iteration at the working precision,
//! then nearby approximations are merged into clusters whose size gives the
//! multiplicity. A cluster layout that is not clearly separated, or that
//! fails the derivative test, is reported as precision exhaustion.

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::{log2_abs, Ball, CPoly, Coefficient, Gaussian, DEFAULT_MAX_PRECISION, DEFAULT_PRECISION};
use crate::error::{Error, Result};
use crate::exponents::Rational;

/// Precision settings for root finding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootConfig {
    /// Working precision in bits.
    pub precision: u32,
    /// Escalation stops once the precision would exceed this.
    pub max_precision: u32,
}

impl Default for RootConfig {
    fn default() -> Self {
        RootConfig {
            precision: DEFAULT_PRECISION,
            max_precision: DEFAULT_MAX_PRECISION,
        }
    }
}

/// All roots of `p` with multiplicities summing to its degree, sorted by
/// real then imaginary part. Constants have no roots.
pub fn croots(p: &CPoly, cfg: &RootConfig) -> Result<Vec<(Coefficient, usize)>> {
    let n = p.degree().ok_or(Error::ZeroPolynomial)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut roots = if p.is_exact() {
        exact_roots(p, cfg)?
    } else {
        float_roots(p, cfg)?
    };
    roots.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    debug_assert_eq!(roots.iter().map(|r| r.1).sum::<usize>(), n);
    Ok(roots)
}

fn exact_roots(p: &CPoly, cfg: &RootConfig) -> Result<Vec<(Coefficient, usize)>> {
    let mut out = Vec::new();
    for (g, m) in p.squarefree() {
        for z in squarefree_roots(g, cfg)? {
            out.push((z, m));
        }
    }
    Ok(out)
}

fn mids(p: &CPoly) -> Vec<Gaussian> {
    p.coeffs().iter().map(|c| c.mid().clone()).collect()
}

fn lcm(a: &num_bigint::BigInt, b: &num_bigint::BigInt) -> num_bigint::BigInt {
    use num_integer::Integer;
    a.lcm(b)
}

/// Roots of a monic square-free exact polynomial.
fn squarefree_roots(mut g: CPoly, cfg: &RootConfig) -> Result<Vec<Coefficient>> {
    let mut roots = Vec::new();
    loop {
        match g.degree() {
            Some(0) | None => return Ok(roots),
            Some(1) => {
                roots.push((-&g.coeff(0)).div(&g.coeff(1))?);
                return Ok(roots);
            }
            _ => {}
        }
        let coeffs = mids(&g);
        let mut den = num_bigint::BigInt::one();
        for c in &coeffs {
            den = lcm(&lcm(&den, c.re.denom()), c.im.denom());
        }
        let lead = coeffs.last().unwrap().scale(&Rational::from_integer(den));
        let lead_inv = lead.inv().unwrap();
        let size = log2_abs(&lead.linf()).max(0.0) + root_bound_log2(&coeffs).max(0.0);
        let prec = cfg.precision + size.ceil() as u32 + 16;
        let found = aberth(&coeffs, prec).into_iter().find_map(|z| {
            let candidate = &(&lead * &z).round() * &lead_inv;
            let c = Coefficient::Exact(candidate);
            g.eval(&c).is_zero().then_some(c)
        });
        match found {
            Some(c) => {
                g = g.divrem(&CPoly::new(vec![-&c, Coefficient::one()])).0;
                roots.push(c);
            }
            None => break,
        }
    }
    roots.extend(isolate_simple(&g, cfg)?);
    Ok(roots)
}

/// Certified discs around the roots of a square-free exact polynomial.
fn isolate_simple(g: &CPoly, cfg: &RootConfig) -> Result<Vec<Coefficient>> {
    let n = g.degree().unwrap();
    let mut prec = cfg.precision;
    loop {
        let zs = aberth(&mids(g), prec + 8);
        let fp = g.to_float(prec + 8);
        let dfp = fp.deriv(1);
        let mut discs = Vec::with_capacity(n);
        for z in &zs {
            let at = Coefficient::Float(Ball::exact(z, prec + 8));
            let (v, d) = (fp.eval(&at), dfp.eval(&at));
            let upper = v.mid().l1() + v.radius();
            let lower = d.mid().linf() - d.radius();
            if !lower.is_positive() {
                discs.clear();
                break;
            }
            let rad = upper / lower * Rational::from_integer(n.into());
            discs.push(Ball::new(z.clone(), rad, prec));
        }
        let separated = discs.len() == n
            && (0..n).all(|i| {
                (i + 1..n).all(|j| {
                    let gap = (discs[i].mid() - discs[j].mid()).norm_sqr();
                    let reach = discs[i].rad() + discs[j].rad();
                    gap > &reach * &reach
                })
            });
        if separated {
            return Ok(discs.into_iter().map(Coefficient::Float).collect());
        }
        if prec * 2 > cfg.max_precision {
            return Err(Error::PrecisionExhausted { precision: prec });
        }
        prec *= 2;
    }
}

fn float_roots(p: &CPoly, cfg: &RootConfig) -> Result<Vec<(Coefficient, usize)>> {
    let coeff_prec = p.coeffs().iter().filter_map(Coefficient::precision).max().unwrap_or(0);
    let mut prec = cfg.precision.max(coeff_prec);
    loop {
        match clustered_roots(p, prec) {
            Ok(roots) => return Ok(roots),
            Err(Error::PrecisionExhausted { .. }) if prec * 2 <= cfg.max_precision => prec *= 2,
            Err(e) => return Err(e),
        }
    }
}

fn log2_mag(z: &Gaussian) -> f64 {
    log2_abs(&z.linf())
}

fn clustered_roots(p: &CPoly, prec: u32) -> Result<Vec<(Coefficient, usize)>> {
    let n = p.degree().unwrap();
    let fp = p.to_float(prec);
    let coeffs = mids(&fp);
    let top = coeffs.iter().map(log2_mag).fold(f64::NEG_INFINITY, f64::max);
    let worst_rad = fp
        .coeffs()
        .iter()
        .map(|c| log2_abs(&c.radius()))
        .fold(f64::NEG_INFINITY, f64::max);
    let delta = (worst_rad - top).max(-(prec as f64));
    let base_tol = (-(prec as f64) / 2.0).max(2.0 + delta / n as f64);
    let tol = |z: &Gaussian| base_tol + log2_mag(z).max(0.0);

    let zs = aberth(&coeffs, prec);
    let dist = |a: &Gaussian, b: &Gaussian| log2_mag(&(a - b));

    // union-find over "closer than the tolerance"
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if dist(&zs[i], &zs[j]) < tol(&zs[i]).max(tol(&zs[j])) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut label = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if label[r] == usize::MAX {
            label[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[label[r]].push(i);
    }
    // distinct clusters must be well apart
    for a in 0..groups.len() {
        for b in a + 1..groups.len() {
            for &i in &groups[a] {
                for &j in &groups[b] {
                    if dist(&zs[i], &zs[j]) < tol(&zs[i]).max(tol(&zs[j])) + 4.0 {
                        return Err(Error::PrecisionExhausted { precision: prec });
                    }
                }
            }
        }
    }

    let mut out = Vec::new();
    for members in groups {
        let m = members.len();
        let inv_m = Rational::new(1.into(), (m as i64).into());
        let mut sum = Gaussian::default();
        for &i in &members {
            sum = &sum + &zs[i];
        }
        let mut c = sum.scale(&inv_m).round_to(prec).0;
        let spread = members
            .iter()
            .map(|&i| dist(&zs[i], &c))
            .fold(f64::NEG_INFINITY, f64::max);
        let root = if m == 1 {
            let at = Coefficient::Float(Ball::exact(&c, prec));
            let (v, d) = (fp.eval(&at), fp.deriv(1).eval(&at));
            let lower = d.mid().linf() - d.radius();
            if !lower.is_positive() {
                return Err(Error::PrecisionExhausted { precision: prec });
            }
            let rad = (v.mid().l1() + v.radius()) / lower * Rational::from_integer(n.into());
            Ball::new(c, rad, prec)
        } else {
            // the (m-1)-th derivative has a simple root at the cluster
            let q = mids(&fp.deriv(m - 1));
            let dq = mids(&fp.deriv(m));
            let mut moved = f64::NEG_INFINITY;
            for _ in 0..6 {
                let (qv, dv) = (horner(&q, &c, prec), horner(&dq, &c, prec));
                let Some(inv) = dv.inv() else { break };
                let step = (&qv * &inv).round_to(prec).0;
                let next = &c - &step;
                if dist(&next, &c) > spread.max(tol(&c)) {
                    break;
                }
                moved = moved.max(log2_mag(&step));
                c = next.round_to(prec).0;
                if step.is_zero() {
                    break;
                }
            }
            let rad_log = spread.max(moved) + 1.0;
            let rad = pow2_f(rad_log) + pow2_f(log2_mag(&c).max(0.0) - prec as f64);
            Ball::new(c, rad, prec)
        };
        // derivative test: p^(j) vanishes on the cluster disc for j < m only
        let probe_rad = pow2_f(spread.max(tol(root.mid())) + 1.0);
        let probe = Coefficient::Float(Ball::new(root.mid().clone(), probe_rad, prec));
        for j in 0..=m {
            let vanishes = fp.deriv(j).eval(&probe).is_zero();
            if vanishes != (j < m) {
                return Err(Error::PrecisionExhausted { precision: prec });
            }
        }
        out.push((Coefficient::Float(root), m));
    }
    Ok(out)
}

/// `2^x` as a dyadic rational, rounded up.
fn pow2_f(x: f64) -> Rational {
    if x == f64::NEG_INFINITY {
        return Rational::zero();
    }
    let k = x.ceil() as i64;
    if k >= 0 {
        Rational::from_integer(num_bigint::BigInt::one() << k as usize)
    } else {
        Rational::new(1.into(), num_bigint::BigInt::one() << (-k) as usize)
    }
}

fn horner(coeffs: &[Gaussian], z: &Gaussian, prec: u32) -> Gaussian {
    let mut acc = Gaussian::default();
    for c in coeffs.iter().rev() {
        acc = (&(&acc * z) + c).round_to(prec).0;
    }
    acc
}

fn horner_with_deriv(coeffs: &[Gaussian], z: &Gaussian, prec: u32) -> (Gaussian, Gaussian) {
    let mut p = Gaussian::default();
    let mut d = Gaussian::default();
    for c in coeffs.iter().rev() {
        d = (&(&d * z) + &p).round_to(prec).0;
        p = (&(&p * z) + c).round_to(prec).0;
    }
    (p, d)
}

/// log2 of the Fujiwara bound on root moduli.
fn root_bound_log2(coeffs: &[Gaussian]) -> f64 {
    let n = coeffs.len() - 1;
    let lead = log2_mag(&coeffs[n]);
    (1..=n)
        .map(|k| (log2_mag(&coeffs[n - k]) - lead) / k as f64)
        .fold(f64::NEG_INFINITY, f64::max)
        + 1.0
}

fn aberth_f64(coeffs: &[Complex64], radius: f64) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let mut zs: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();
    if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return zs;
    }
    for _ in 0..500 {
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let z = zs[k];
            let (mut p, mut d) = (Complex64::zero(), Complex64::zero());
            for c in coeffs.iter().rev() {
                d = d * z + p;
                p = p * z + c;
            }
            if p == Complex64::zero() {
                continue;
            }
            let w = p / d;
            let s: Complex64 = (0..n).filter(|&j| j != k).map(|j| (z - zs[j]).inv()).sum();
            let corr = w / (Complex64::one() - w * s);
            if !corr.re.is_finite() || !corr.im.is_finite() {
                continue;
            }
            zs[k] = z - corr;
            worst = worst.max(corr.norm() / z.norm().max(1.0));
        }
        if worst < 1e-14 {
            break;
        }
    }
    zs
}

/// Simultaneous approximations of all roots, polished at `prec` bits.
fn aberth(coeffs: &[Gaussian], prec: u32) -> Vec<Gaussian> {
    let n = coeffs.len() - 1;
    let scale = root_bound_log2(coeffs);
    let radius = if scale.is_finite() && scale.abs() < 1000.0 {
        scale.exp2()
    } else {
        1.0
    };
    let c64: Vec<Complex64> = coeffs.iter().map(Gaussian::to_c64).collect();
    let to_g = |z: Complex64| {
        Gaussian::new(
            Rational::from_float(z.re).unwrap_or_else(Rational::zero),
            Rational::from_float(z.im).unwrap_or_else(Rational::zero),
        )
    };
    let mut zs: Vec<Gaussian> = aberth_f64(&c64, radius).into_iter().map(to_g).collect();
    // f64 may have merged roots; nudge duplicates apart
    for k in 1..n {
        while (0..k).any(|j| zs[j] == zs[k]) {
            let nudge = Rational::new(1.into(), (1i64 << 20).into()) * Rational::from_integer((k as i64).into());
            zs[k] = Gaussian::new(&zs[k].re + &nudge, &zs[k].im - &nudge);
        }
    }
    let target = -(prec as f64) + 4.0;
    let mut best = f64::INFINITY;
    let mut stale = 0;
    for _ in 0..(50 + 2 * prec) {
        let mut worst = f64::NEG_INFINITY;
        for k in 0..n {
            let (p, d) = horner_with_deriv(coeffs, &zs[k], prec);
            if p.is_zero() {
                continue;
            }
            let Some(dinv) = d.inv() else {
                continue;
            };
            let w = (&p * &dinv).round_to(prec).0;
            let mut s = Gaussian::default();
            let mut coincident = false;
            for j in 0..n {
                if j == k {
                    continue;
                }
                match (&zs[k] - &zs[j]).inv() {
                    Some(inv) => s = (&s + &inv.round_to(prec).0).round_to(prec).0,
                    None => coincident = true,
                }
            }
            if coincident {
                continue;
            }
            let denom = &Gaussian::real(Rational::one()) - &(&w * &s);
            let corr = match denom.inv() {
                Some(inv) => (&w * &inv).round_to(prec).0,
                None => w,
            };
            worst = worst.max(log2_mag(&corr) - log2_mag(&zs[k]).max(0.0));
            zs[k] = (&zs[k] - &corr).round_to(prec).0;
        }
        if worst < target {
            break;
        }
        if worst < best - 0.5 {
            best = worst;
            stale = 0;
        } else {
            stale += 1;
            if stale > 12 {
                break;
            }
        }
    }
    zs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::rational;

    fn tiny() -> Rational {
        Rational::new(1.into(), num_bigint::BigInt::one() << 100usize)
    }

    fn cfg() -> RootConfig {
        RootConfig::default()
    }

    fn residual_ok(p: &CPoly, z: &Coefficient) -> bool {
        let v = p.eval(&z.to_float(128));
        v.abs_upper() < 1e-20
    }

    #[test]
    fn imaginary_pair() {
        let p = CPoly::from_ints(&[3, 0, 1]);
        let roots = croots(&p, &cfg()).unwrap();
        assert_eq!(roots.len(), 2);
        for (z, m) in &roots {
            assert_eq!(*m, 1);
            assert!(!z.is_exact());
            assert!(z.mid().re.abs() < tiny());
            let im = num_traits::ToPrimitive::to_f64(&z.mid().im).unwrap();
            assert!((im.abs() - 3f64.sqrt()).abs() < 1e-15);
            assert!(residual_ok(&p, z));
        }
        assert!(roots[0].0.mid().im.is_negative());
    }

    #[test]
    fn perfect_square_is_exact() {
        let roots = croots(&CPoly::from_ints(&[1, -2, 1]), &cfg()).unwrap();
        assert_eq!(roots, vec![(Coefficient::one(), 2)]);
    }

    #[test]
    fn roots_of_unity() {
        let p = CPoly::from_ints(&[-1, 0, 0, 1]);
        let roots = croots(&p, &cfg()).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(roots.iter().all(|r| r.1 == 1));
        assert!(roots.iter().any(|r| r.0 == Coefficient::one()));
        for (z, _) in &roots {
            assert!(residual_ok(&p, z));
        }
        let half = rational(-1, 2);
        assert_eq!(roots.iter().filter(|r| (&r.0.mid().re - &half).abs() < tiny()).count(), 2);
    }

    #[test]
    fn gaussian_rational_roots_snap() {
        // (2y - 1 - i)(3y + 2)^2
        let a = CPoly::new(vec![Coefficient::exact(rational(-1, 1), rational(-1, 1)), Coefficient::from_int(2)]);
        let b = CPoly::from_ints(&[2, 3]);
        let p = a.mul(&b).mul(&b);
        let roots = croots(&p, &cfg()).unwrap();
        assert_eq!(
            roots,
            vec![
                (Coefficient::from_rational(rational(-2, 3)), 2),
                (Coefficient::exact(rational(1, 2), rational(1, 2)), 1),
            ]
        );
    }

    #[test]
    fn float_double_root_clusters() {
        let p = CPoly::from_ints(&[2, -3, 1]).mul(&CPoly::from_ints(&[-1, 1])).to_float(128);
        let roots = croots(&p, &cfg()).unwrap();
        assert_eq!(roots.iter().map(|r| r.1).collect::<Vec<_>>(), vec![2, 1]);
        let one = Coefficient::one();
        assert!((&roots[0].0 - &one).is_zero());
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(matches!(croots(&CPoly::zero(), &cfg()), Err(Error::ZeroPolynomial)));
        assert!(croots(&CPoly::from_ints(&[5]), &cfg()).unwrap().is_empty());
    }

    #[test]
    fn multiplicities_always_sum_to_degree() {
        use rand::{rngs::StdRng, Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..60 {
            let deg = rng.gen_range(1..=5);
            let mut p = CPoly::from_ints(&[1]);
            for _ in 0..deg {
                let r = rng.gen_range(-3..=3);
                p = p.mul(&CPoly::from_ints(&[r, 1]));
            }
            let noise: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-2..=2)).collect();
            let q = if rng.gen_bool(0.5) { p.add(&CPoly::from_ints(&noise)) } else { p };
            if q.degree() != Some(deg) {
                continue;
            }
            let roots = croots(&q, &cfg()).unwrap();
            assert_eq!(roots.iter().map(|r| r.1).sum::<usize>(), deg, "{q}");
            for (z, m) in &roots {
                for j in 0..*m {
                    assert!(q.deriv(j).eval(&z.to_float(128)).is_zero());
                }
            }
        }
    }
}
