use std::fmt;

use num_traits::Zero;

use super::{binomial, Coefficient, Gaussian};
use crate::exponents::Rational;

/// Dense univariate polynomial over ℂ, coefficients stored low degree first.
///
/// Leading coefficients that are zero (numerically zero for floats) are
/// trimmed on construction, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CPoly {
    coeffs: Vec<Coefficient>,
}

impl CPoly {
    pub fn new(mut coeffs: Vec<Coefficient>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        CPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        CPoly::new(coeffs.iter().map(|&c| Coefficient::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        CPoly { coeffs: Vec::new() }
    }

    /// `c·y^k`.
    pub fn monomial(c: Coefficient, k: usize) -> Self {
        let mut coeffs = vec![Coefficient::zero(); k];
        coeffs.push(c);
        CPoly::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Coefficient] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Coefficient {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&Coefficient> {
        self.coeffs.last()
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(Coefficient::is_exact)
    }

    /// Number of nonzero terms.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Smallest index with a nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn to_float(&self, prec: u32) -> CPoly {
        CPoly::new(self.coeffs.iter().map(|c| c.to_float(prec)).collect())
    }

    /// Horner evaluation.
    pub fn eval(&self, z: &Coefficient) -> Coefficient {
        let mut acc = Coefficient::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    /// The `k`-th formal derivative.
    pub fn deriv(&self, k: usize) -> CPoly {
        if k == 0 {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(k)
            .map(|(i, c)| {
                let falling: i64 = ((i - k + 1)..=i).map(|j| j as i64).product();
                c.scale(&Rational::from_integer(falling.into()))
            })
            .collect();
        CPoly::new(coeffs)
    }

    pub fn add(&self, o: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        CPoly::new((0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        CPoly::new((0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &CPoly) -> CPoly {
        if self.is_zero() || o.is_zero() {
            return CPoly::zero();
        }
        let mut out = vec![Coefficient::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        CPoly::new(out)
    }

    pub fn scale(&self, c: &Coefficient) -> CPoly {
        CPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides by `y^k`, dropping the low coefficients.
    pub fn shift_down(&self, k: usize) -> CPoly {
        CPoly::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    /// `p(y + c)` by binomial re-expansion.
    pub fn taylor_shift(&self, c: &Coefficient) -> CPoly {
        let n = self.coeffs.len();
        let powers: Vec<Coefficient> = (0..n).map(|k| c.pow(k as u32)).collect();
        CPoly::new(
            (0..n)
                .map(|i| {
                    let mut acc = Coefficient::zero();
                    for j in i..n {
                        let term = &self.coeffs[j] * &powers[j - i];
                        acc = &acc + &term.scale(&binomial(j, i));
                    }
                    acc
                })
                .collect(),
        )
    }

    /// Scaled to leading coefficient one. Panics on the zero polynomial or a
    /// non-invertible leading coefficient.
    pub fn monic(&self) -> CPoly {
        let inv = self
            .leading()
            .expect("monic of the zero polynomial")
            .inv()
            .expect("leading coefficient must be invertible");
        self.scale(&inv)
    }

    /// Quotient and remainder. Exact mode only: panics on a zero divisor.
    pub fn divrem(&self, d: &CPoly) -> (CPoly, CPoly) {
        let dn = d.degree().expect("division by the zero polynomial");
        let inv = d.coeffs[dn].inv().expect("leading coefficient must be invertible");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dn {
            return (CPoly::zero(), self.clone());
        }
        let mut quot = vec![Coefficient::zero(); rem.len() - dn];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + dn] * &inv;
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&q * dc);
            }
            rem[k + dn] = Coefficient::zero();
            quot[k] = q;
        }
        rem.truncate(dn);
        (CPoly::new(quot), CPoly::new(rem))
    }

    /// Monic greatest common divisor over ℚ(i). Exact inputs only.
    pub fn gcd(&self, o: &CPoly) -> CPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Square-free decomposition: pairs `(g, m)` with `g` monic square-free,
    /// pairwise coprime, and `self = lc·Π g^m`. Exact inputs only.
    pub fn squarefree(&self) -> Vec<(CPoly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.deriv(1);
        let a0 = f.gcd(&df);
        let mut b = f.divrem(&a0).0;
        let c = df.divrem(&a0).0;
        let mut d = c.sub(&b.deriv(1));
        let mut m = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            let nb = b.divrem(&a).0;
            let c = d.divrem(&a).0;
            d = c.sub(&nb.deriv(1));
            if a.degree().unwrap_or(0) > 0 {
                out.push((a, m));
            }
            b = nb;
            m += 1;
        }
        out
    }

    /// Text with variable `var`, highest degree first, e.g. `y^2 + 3`.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && c.is_exact() {
                continue;
            }
            let (negative, body) = coefficient_term(c);
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
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

/// Splits a coefficient into a sign and a body fit for `body*y^k`.
pub(crate) fn coefficient_term(c: &Coefficient) -> (bool, String) {
    let g: &Gaussian = c.mid();
    if g.im.is_zero() {
        let text = c.to_string();
        return match text.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, text),
        };
    }
    if g.re.is_zero() {
        let text = c.to_string();
        if let Some(rest) = text.strip_prefix('-') {
            return (true, rest.to_string());
        }
        return (false, text);
    }
    (false, format!("({c})"))
}

impl fmt::Display for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("y"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::rational;

    #[test]
    fn eval_and_deriv() {
        let p = CPoly::from_ints(&[3, 0, 1]);
        assert_eq!(p.eval(&Coefficient::zero()), Coefficient::from_int(3));
        assert_eq!(p.deriv(1), CPoly::from_ints(&[0, 2]));
        let sq = CPoly::from_ints(&[1, -2, 1]);
        assert!(sq.deriv(1).eval(&Coefficient::one()).is_zero());
        assert_eq!(CPoly::from_ints(&[1, 1, 1, 1]).deriv(3), CPoly::from_ints(&[6]));
    }

    #[test]
    fn printing() {
        assert_eq!(CPoly::from_ints(&[3, 0, 1]).to_string(), "y^2 + 3");
        assert_eq!(CPoly::from_ints(&[0, 0, 0, 0, 0, 1, 2]).to_string(), "2*y^6 + y^5");
        assert_eq!(CPoly::from_ints(&[-1]).to_string(), "-1");
        assert_eq!(CPoly::from_ints(&[0, -1, -2]).to_string(), "-2*y^2 - y");
        let p = CPoly::new(vec![Coefficient::exact(rational(1, 2), rational(-1, 1)), Coefficient::i()]);
        assert_eq!(p.to_string(), "i*y + (1/2-i)");
    }

    #[test]
    fn division_and_gcd() {
        let a = CPoly::from_ints(&[-1, 0, 1]);
        let b = CPoly::from_ints(&[-1, 1]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q, CPoly::from_ints(&[1, 1]));
        assert!(r.is_zero());
        let c = CPoly::from_ints(&[1, 2, 1]);
        assert_eq!(a.gcd(&c), CPoly::from_ints(&[1, 1]));
    }

    #[test]
    fn squarefree_parts() {
        // (y-1)^3 (y+2) (y^2+1)
        let l1 = CPoly::from_ints(&[-1, 1]);
        let l2 = CPoly::from_ints(&[2, 1]);
        let q = CPoly::from_ints(&[1, 0, 1]);
        let p = l1.mul(&l1).mul(&l1).mul(&l2).mul(&q).scale(&Coefficient::from_int(5));
        let parts = p.squarefree();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], (l2.mul(&q), 1));
        assert_eq!(parts[1], (l1, 3));
    }

    #[test]
    fn taylor_shift_matches_evaluation() {
        let p = CPoly::from_ints(&[5, -3, 0, 2]);
        let c = Coefficient::exact(rational(1, 3), rational(2, 1));
        let s = p.taylor_shift(&c);
        assert_eq!(s.coeff(0), p.eval(&c));
        assert_eq!(CPoly::from_ints(&[-1, 0, 1]).taylor_shift(&Coefficient::one()), CPoly::from_ints(&[0, 2, 1]));
    }
}
