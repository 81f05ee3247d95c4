use puiseux::coeffs::{CPoly, Coefficient};
use puiseux::exponents::{rational, Exponent};
use puiseux::polynomial::PolyOverK;
use puiseux::series::Valuation;
use puiseux::solver::{all_roots, residual_valuation, verify_lifting_univariate, SolverConfig};
use puiseux::syntax::parse_poly;
use puiseux::tropical::{tropical_roots, TropicalRoot};
use puiseux::weierstrass::{regularity_order, weierstrass_prepare};

const EXAMPLE: &str = "(2*t + t^(4/3))*y^6 + y^5 + (1/(1 - t^(1/2)))*y^4 - t^pi*y^3 + t*y^2 + (t^(4*e/5) - t^4)*y + 3*t^(5/2)";

fn example() -> PolyOverK {
    parse_poly(EXAMPLE).unwrap()
}

fn q(n: i64, d: i64) -> Exponent {
    Exponent::ratio(n, d)
}

#[test]
fn polygon_of_the_example() {
    let f = example();
    let polygon = f.newton_polygon().unwrap();
    let slopes: Vec<Exponent> = polygon.faces.iter().map(|face| face.slope.clone()).collect();
    assert_eq!(slopes, vec![q(-3, 4), q(-1, 2), q(0, 1), q(1, 1)]);
    let vertices: Vec<usize> = polygon.vertices.iter().map(|v| v.0).collect();
    assert_eq!(vertices, vec![0, 2, 4, 5, 6]);
}

#[test]
fn initial_form_at_three_quarters() {
    let f = example();
    assert_eq!(f.ord_omega(&q(3, 4)).unwrap(), q(5, 2));
    let tin = f.t_initial_form(&q(3, 4)).unwrap();
    assert_eq!(tin, CPoly::from_ints(&[3, 0, 1]));
    assert_eq!(tin.to_string(), "y^2 + 3");
    // between faces the initial form is a monomial
    assert_eq!(f.t_initial_form(&q(2, 3)).unwrap().term_count(), 1);
}

#[test]
fn tropical_roots_of_the_example() {
    let roots = tropical_roots(&example()).unwrap();
    let expected = [(q(3, 4), 2), (q(1, 2), 2), (q(0, 1), 1), (q(-1, 1), 1)];
    assert_eq!(
        roots,
        expected.map(|(omega, multiplicity)| TropicalRoot { omega, multiplicity })
    );
}

#[test]
fn regularity_of_the_example() {
    assert_eq!(regularity_order(&example()).unwrap(), 4);
}

#[test]
fn roots_of_the_example() {
    let f = example();
    let roots = all_roots(&f, &q(3, 1), &SolverConfig::default()).unwrap();
    let mut vals: Vec<Exponent> = Vec::new();
    for root in &roots {
        for _ in 0..root.multiplicity {
            match &root.valuation {
                Valuation::Finite(v) => vals.push(v.clone()),
                Valuation::Infinite => panic!("no zero root expected"),
            }
        }
    }
    vals.sort();
    assert_eq!(vals, vec![q(-1, 1), q(0, 1), q(1, 2), q(1, 2), q(3, 4), q(3, 4)]);
    // the two roots on the first face start with ±i·√3·t^{3/4}
    for root in roots.iter().filter(|r| r.valuation == Valuation::Finite(q(3, 4))) {
        let c = root.trace[0].c.to_c64();
        assert!(c.re.abs() < 1e-30 && (c.im.abs() - 3f64.sqrt()).abs() < 1e-12);
    }
    let report = verify_lifting_univariate(&f, &SolverConfig::default()).unwrap();
    assert!(report.ok(), "{:?}", report.mismatches);
}

#[test]
fn example_roots_have_growing_residuals() {
    let f = example();
    let cap = q(8, 1);
    for root in all_roots(&f, &q(2, 1), &SolverConfig::default()).unwrap() {
        let one = residual_valuation(&f, &root.partial_sum(1, &cap).unwrap(), &cap).unwrap();
        let three = residual_valuation(&f, &root.partial_sum(3, &cap).unwrap(), &cap).unwrap();
        assert!(three.bound() > one.bound(), "{one:?} {three:?}");
    }
}

#[test]
fn catalan_preparation() {
    let f = parse_poly("y^2 - y + t").unwrap();
    let w = weierstrass_prepare(&f, &q(5, 1)).unwrap();
    let catalan = parse_poly("-(t + t^2 + 2*t^3 + 5*t^4 + 14*t^5)").unwrap().coeff(0);
    assert!(w.p.coeff(0).equal_up_to(&catalan, &q(5, 1)).unwrap());
    assert!(w.p.coeff(1).equal_up_to(&puiseux::series::Series::one(), &q(5, 1)).unwrap());
    let residual = f.sub(&w.u.mul(&w.p));
    for c in residual.coeffs() {
        assert!(c.terms_below(&q(5, 1)).unwrap().is_empty());
    }
    // oracle: (1 − √(1 − 4t))/2 has Catalan numbers as coefficients
    let catalan_numbers: [i64; 5] = [1, 1, 2, 5, 14];
    for (k, n) in catalan_numbers.iter().enumerate() {
        let e = Exponent::from_integer(k as i64 + 1);
        let got = w.p.coeff(0).terms_below(&e).unwrap();
        assert_eq!(got.last().unwrap(), &(e, Coefficient::from_rational(rational(-n, 1))));
    }
}
