mod common;

use common::*;
use proptest::prelude::*;
use puiseux::coeffs::Coefficient;
use puiseux::exponents::{rational, Exponent};
use puiseux::polynomial::{NewtonPolygon, PolyOverK, Point};
use puiseux::series::{Series, Valuation};
use puiseux::syntax::{parse_poly, poly_to_string};
use puiseux::tropical::tropical_roots;
use puiseux::weierstrass::{regularity_order, weierstrass_prepare};
use rand::Rng;

fn exponent() -> impl Strategy<Value = Exponent> {
    (-24i64..24, 1i64..7, -3i64..=3, -3i64..=3, 1i64..4).prop_map(|(a, b, p, e, d)| {
        Exponent::ratio(a, b)
            + Exponent::pi().scale(&rational(p, d))
            + Exponent::e().scale(&rational(e, d))
    })
}

fn small_exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![
        4 => (-8i64..16, 1i64..4).prop_map(|(a, b)| Exponent::ratio(a, b)),
        1 => (-2i64..3, 1i64..3).prop_map(|(a, b)| Exponent::ratio(a, b) + Exponent::pi().scale(&rational(1, 2))),
    ]
}

fn nonnegative_exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![
        4 => (0i64..16, 1i64..4).prop_map(|(a, b)| Exponent::ratio(a, b)),
        1 => (0i64..3, 1i64..3).prop_map(|(a, b)| Exponent::ratio(a, b) + Exponent::pi().scale(&rational(1, 2))),
    ]
}

fn coefficient() -> impl Strategy<Value = Coefficient> {
    (-6i64..=6, 1i64..4, -2i64..=2)
        .prop_filter("nonzero", |(a, _, c)| *a != 0 || *c != 0)
        .prop_map(|(a, b, c)| Coefficient::exact(rational(a, b), rational(c, 1)))
}

fn series_strategy() -> impl Strategy<Value = Series> {
    prop::collection::vec((small_exponent(), coefficient()), 1..5)
        .prop_map(Series::from_terms)
        .prop_filter("nonzero", |s| !s.is_known_zero())
}

/// Polynomials whose coefficients have nonnegative valuation.
fn poly() -> impl Strategy<Value = PolyOverK> {
    let coefficient_series = prop::collection::vec((nonnegative_exponent(), coefficient()), 1..4)
        .prop_map(Series::from_terms)
        .prop_filter("nonzero", |s| !s.is_known_zero());
    prop::collection::vec(prop::option::weighted(0.8, coefficient_series), 1..5).prop_map(|cs| {
        let mut coeffs: Vec<Series> = cs.into_iter().map(|c| c.unwrap_or_else(Series::zero)).collect();
        if coeffs.iter().all(|c| c.is_known_zero()) {
            coeffs[0] = Series::one();
        }
        PolyOverK::new(coeffs)
    })
}

fn support() -> impl Strategy<Value = Vec<Point>> {
    prop::collection::btree_map(0usize..14, small_exponent(), 1..12).prop_map(|m| m.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exponent_order_matches_reals(a in exponent(), b in exponent(), c in exponent()) {
        let (x, y) = (a.to_f64(), b.to_f64());
        if (x - y).abs() > 1e-9 {
            prop_assert_eq!(a < b, x < y);
        }
        prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
        prop_assert_eq!((&a + &c).cmp(&(&b + &c)), a.cmp(&b));
        prop_assert_eq!(&(&a + &b) - &b, a);
    }

    #[test]
    fn valuation_is_ultrametric_and_multiplicative(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let f = random_series(&mut rng);
        let g = random_series(&mut rng);
        let cap = q(30, 1);
        let vf = f.valuation(&cap).unwrap();
        let vg = g.valuation(&cap).unwrap();
        let (Valuation::Finite(a), Valuation::Finite(b)) = (&vf, &vg) else { unreachable!() };
        prop_assert_eq!(f.mul(&g).valuation(&cap).unwrap(), Valuation::Finite(a + b));
        match f.add(&g).valuation(&cap) {
            Ok(v) => {
                prop_assert!(v >= Valuation::Finite(a.min(b).clone()));
                if a != b {
                    prop_assert_eq!(v, Valuation::Finite(a.min(b).clone()));
                }
            }
            Err(e) => prop_assert!(a == b, "{e}"),
        }
        prop_assert_eq!(f.mul(&g).lc(&cap).unwrap(), &f.lc(&cap).unwrap() * &g.lc(&cap).unwrap());
        let norm = f.norm(&cap).unwrap().to_f64();
        prop_assert!((norm - (-a.to_f64()).exp()).abs() <= 1e-9 * norm.max(1.0));
    }

    #[test]
    fn product_is_a_convolution(f in series_strategy(), g in series_strategy()) {
        let bound = q(100, 1);
        let a = f.terms_below(&bound).unwrap();
        let b = g.terms_below(&bound).unwrap();
        prop_assert_eq!(f.mul(&g).terms_below(&bound).unwrap(), naive_product(&a, &b, &bound));
    }

    #[test]
    fn inverse_is_an_inverse(f in series_strategy()) {
        let inv = f.inverse(&q(40, 1)).unwrap();
        prop_assert!(f.mul(&inv).equal_up_to(&Series::one(), &q(6, 1)).unwrap());
    }

    #[test]
    fn hull_matches_brute_force(points in support()) {
        let polygon = NewtonPolygon::from_points(points.clone());
        let (vertices, faces) = hull_oracle(&points);
        prop_assert_eq!(&polygon.vertices, &vertices);
        prop_assert_eq!(&polygon.faces, &faces);
        for w in polygon.faces.windows(2) {
            prop_assert!(w[0].slope < w[1].slope);
        }
    }

    #[test]
    fn initial_form_is_multiplicative(f in poly(), g in poly(), w in small_exponent()) {
        let fg = f.mul(&g);
        let lhs = fg.t_initial_form(&w).unwrap();
        let rhs = f.t_initial_form(&w).unwrap().mul(&g.t_initial_form(&w).unwrap());
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(fg.ord_omega(&w).unwrap(), f.ord_omega(&w).unwrap() + g.ord_omega(&w).unwrap());
    }

    #[test]
    fn initial_form_is_monomial_off_tropical_roots(f in poly(), w in small_exponent()) {
        let roots = tropical_roots(&f).unwrap();
        for root in &roots {
            prop_assert!(f.t_initial_form(&root.omega).unwrap().term_count() >= 2);
        }
        let tropical = roots.iter().any(|r| r.omega == w);
        prop_assert_eq!(f.t_initial_form(&w).unwrap().term_count() >= 2, tropical);
    }

    #[test]
    fn printing_round_trips(f in poly()) {
        let bound = q(50, 1);
        let text = poly_to_string(&f, &bound).unwrap();
        let back = parse_poly(&text).unwrap();
        prop_assert_eq!(back.degree(), f.degree(), "{}", text);
        for i in 0..=f.degree().unwrap() {
            prop_assert!(back.coeff(i).equal_up_to(&f.coeff(i), &bound).unwrap(), "{}", text);
        }
    }

    #[test]
    fn preparation_leaves_no_low_residual(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let n = rng.gen_range(1..=4usize);
        let r = rng.gen_range(1..=n);
        let positive = |rng: &mut rand::rngs::StdRng| rational_exponent(rng, 1, 3, 3);
        let mut coeffs = Vec::new();
        for i in 0..=n {
            let mut c = finite_series(&mut rng, 3, |g| if i < r { positive(g) } else { rational_exponent(g, 0, 3, 3) });
            if i == r {
                c = c.add(&Series::constant(gaussian(&mut rng)));
                if c.terms_below(&q(0, 1)).unwrap().is_empty() {
                    c = c.add(&Series::one());
                }
            }
            coeffs.push(c);
        }
        let f = PolyOverK::new(coeffs);
        prop_assume!(regularity_order(&f).unwrap() == r);
        let bound = q(3, 1);
        let w = weierstrass_prepare(&f, &bound).unwrap();
        prop_assert_eq!(w.p.degree(), Some(r));
        for i in 0..r {
            prop_assert!(w.p.coeff(i).terms_below(&q(0, 1)).unwrap().is_empty());
        }
        let residual = f.sub(&w.u.mul(&w.p));
        for c in residual.coeffs() {
            prop_assert!(c.terms_below(&bound).unwrap().is_empty());
        }
    }
}
