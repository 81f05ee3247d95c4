//! Random inputs and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use puiseux::coeffs::Coefficient;
use puiseux::exponents::{rational, Exponent};
use puiseux::polynomial::{Face, PolyOverK, Point};
use puiseux::series::{Series, Term};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Exponent {
    Exponent::ratio(n, d)
}

/// A rational in `[lo, hi]` with denominator at most `den`.
pub fn rational_exponent(rng: &mut StdRng, lo: i64, hi: i64, den: i64) -> Exponent {
    let d = rng.gen_range(1..=den);
    q(rng.gen_range(lo * d..=hi * d), d)
}

/// Mostly rational, sometimes shifted by a small multiple of π or e.
pub fn real_exponent(rng: &mut StdRng, lo: i64, hi: i64) -> Exponent {
    let base = rational_exponent(rng, lo, hi, 4);
    match rng.gen_range(0..10) {
        0 => base + Exponent::pi().scale(&rational(rng.gen_range(-1..=1), 2)),
        1 => base + Exponent::e().scale(&rational(rng.gen_range(-1..=1), 3)),
        _ => base,
    }
}

/// A nonzero Gaussian rational with small numerators.
pub fn gaussian(rng: &mut StdRng) -> Coefficient {
    loop {
        let re = rational(rng.gen_range(-5..=5), rng.gen_range(1..=3));
        let im = if rng.gen_bool(0.3) {
            rational(rng.gen_range(-3..=3), rng.gen_range(1..=2))
        } else {
            rational(0, 1)
        };
        let c = Coefficient::exact(re, im);
        if !c.is_zero() {
            return c;
        }
    }
}

pub fn finite_series(rng: &mut StdRng, max_terms: usize, exponent: impl Fn(&mut StdRng) -> Exponent) -> Series {
    let k = rng.gen_range(1..=max_terms);
    let terms: Vec<Term> = (0..k).map(|_| (exponent(rng), gaussian(rng))).collect();
    let s = Series::from_terms(terms);
    if s.is_known_zero() {
        Series::monomial(gaussian(rng), exponent(rng))
    } else {
        s
    }
}

/// A nonzero series, finite or with a geometric tail. Later exponents sit at
/// least 1/2 above the first and use one irrational constant at most, which
/// keeps inverses to moderate orders small.
pub fn random_series(rng: &mut StdRng) -> Series {
    let lead = real_exponent(rng, -2, 3);
    let constant = if rng.gen_bool(0.5) { Exponent::pi() } else { Exponent::e() };
    let mut terms = vec![(lead.clone(), gaussian(rng))];
    for _ in 0..rng.gen_range(0..=3) {
        let d = if rng.gen_bool(0.7) {
            rational_exponent(rng, 1, 8, 1).div_int(2)
        } else {
            constant.scale(&rational(rng.gen_range(1..=2), 2)) + rational_exponent(rng, 0, 2, 2)
        };
        terms.push((&lead + &d, gaussian(rng)));
    }
    let head = Series::from_terms(terms);
    if rng.gen_bool(0.3) {
        let step = [q(1, 2), q(1, 1)][rng.gen_range(0..2)].clone();
        let start = lead + rational_exponent(rng, 2, 8, 1).div_int(2);
        head.add(&Series::geometric(&step).unwrap().shift(&start).scale(&gaussian(rng)))
    } else {
        head
    }
}

/// A random root: a short Puiseux polynomial with rational exponents.
pub fn random_root(rng: &mut StdRng) -> Series {
    if rng.gen_bool(0.08) {
        return Series::zero();
    }
    finite_series(rng, 3, |r| rational_exponent(r, -1, 2, 3))
}

/// A monic polynomial of degree `1..=max_deg` with known roots, some
/// repeated. Returns the polynomial and the roots with multiplicities.
pub fn monic_from_roots(rng: &mut StdRng, max_deg: usize) -> (PolyOverK, Vec<(Series, usize)>) {
    let n = rng.gen_range(1..=max_deg);
    let mut roots: Vec<(Series, usize)> = Vec::new();
    let mut left = n;
    while left > 0 {
        let m = if left > 1 && rng.gen_bool(0.2) { rng.gen_range(2..=left) } else { 1 };
        let r = random_root(rng);
        let horizon = q(20, 1);
        match roots
            .iter_mut()
            .find(|(s, _)| s.equal_up_to(&r, &horizon).unwrap())
        {
            Some(entry) => entry.1 += m,
            None => roots.push((r, m)),
        }
        left -= m;
    }
    let mut list = Vec::new();
    for (r, m) in &roots {
        for _ in 0..*m {
            list.push(r.clone());
        }
    }
    (PolyOverK::from_roots(&list), roots)
}

/// `Σ a_i b_j t^{α_i + β_j}` restricted to exponents at most `bound`.
pub fn naive_product(a: &[Term], b: &[Term], bound: &Exponent) -> Vec<Term> {
    let mut acc: BTreeMap<Exponent, Coefficient> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = ea + eb;
            if e <= *bound {
                let entry = acc.entry(e).or_insert_with(Coefficient::zero);
                *entry = &*entry + &(ca * cb);
            }
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn above_or_on(p: &Point, a: &Point, b: &Point) -> std::cmp::Ordering {
    // sign of (p − a) × (b − a) turned so that "above" is positive
    let dx = b.0 as i64 - a.0 as i64;
    let lhs = (&p.1 - &a.1).mul_int(dx);
    let rhs = (&b.1 - &a.1).mul_int(p.0 as i64 - a.0 as i64);
    (&lhs - &rhs).signum()
}

/// Lower hull by checking every pair of points against every other point.
pub fn hull_oracle(points: &[Point]) -> (Vec<Point>, Vec<Face>) {
    let mut faces = Vec::new();
    for a in points {
        for b in points {
            if a.0 >= b.0 {
                continue;
            }
            let supporting = points
                .iter()
                .all(|p| above_or_on(p, a, b) != std::cmp::Ordering::Less);
            if !supporting {
                continue;
            }
            let on_line: Vec<&Point> = points
                .iter()
                .filter(|p| above_or_on(p, a, b) == std::cmp::Ordering::Equal)
                .collect();
            let maximal = on_line.iter().all(|p| p.0 >= a.0 && p.0 <= b.0);
            if !maximal {
                continue;
            }
            let length = b.0 - a.0;
            let mut interior: Vec<Point> = on_line
                .into_iter()
                .filter(|p| p.0 > a.0 && p.0 < b.0)
                .cloned()
                .collect();
            interior.sort_by_key(|p| p.0);
            faces.push(Face {
                from: a.clone(),
                to: b.clone(),
                slope: (&b.1 - &a.1).div_int(length as i64),
                length,
                interior,
            });
        }
    }
    faces.sort_by_key(|f| f.from.0);
    let mut vertices: Vec<Point> = faces.iter().map(|f| f.from.clone()).collect();
    match faces.last() {
        Some(f) => vertices.push(f.to.clone()),
        None => vertices.extend(points.iter().cloned()),
    }
    (vertices, faces)
}

/// Random points with distinct abscissas in `0..16`.
pub fn random_support(rng: &mut StdRng, max_len: usize) -> Vec<Point> {
    let k = rng.gen_range(1..=max_len);
    let mut xs: Vec<usize> = (0..16).collect();
    for i in 0..xs.len() {
        let j = rng.gen_range(i..xs.len());
        xs.swap(i, j);
    }
    let mut pts: Vec<Point> = xs[..k]
        .iter()
        .map(|&x| {
            let v = if rng.gen_bool(0.5) {
                // collinear-friendly values
                q(rng.gen_range(-4..=8), 1)
            } else {
                real_exponent(rng, -3, 6)
            };
            (x, v)
        })
        .collect();
    pts.sort_by_key(|p| p.0);
    pts
}
