//! Text syntax for exponents, series and polynomials.
//!
//! ```text
//! expr   = term { ("+" | "-") term } ;
//! term   = unary { ("*" | "/") unary } ;
//! unary  = ("-" | "+") unary | power ;
//! power  = atom [ "^" [ "-" ] atom ] ;
//! atom   = number | "i" | "pi" | "e" | "t" | "y" | "x" digits
//!        | ("sqrt" | "geom") "(" expr ")" | "(" expr ")" ;
//! number = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ] ;
//! ```
//!
//! `^` binds tighter than unary minus, so `-t^2` is `-(t^2)`. There is no
//! implicit multiplication. Only `t` may be raised to a non-integer power;
//! the exponent is then any real constant expression built from rationals,
//! `pi`, `e` and `sqrt(q)`. `geom(a)` is `1/(1 − t^a)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::coeffs::{coefficient_term, Coefficient};
use crate::error::{Error, Result};
use crate::exponents::{Exponent, Rational};
use crate::polynomial::{PolyOverK, DEFAULT_VAL_CAP};
use crate::series::Series;
use crate::tropical::LaurentPolyK;

/// Position of a token, both 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Geom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Number(Rational),
    Imaginary,
    Pi,
    E,
    T,
    Y,
    /// `x1`, `x2`, …, stored 1-based.
    X(usize),
    Neg(Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

/// A syntax tree node with the position of its first token.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub expr: Expr,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(q) => write!(f, "number {q}"),
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Op(c) => write!(f, "'{c}'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn err(pos: Pos, message: impl Into<String>) -> Error {
    Error::Parse {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        let start = i;
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let mut digits = String::new();
            let mut scale = 0i64;
            while i < chars.len() && chars[i].is_ascii_digit() {
                digits.push(chars[i]);
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    digits.push(chars[i]);
                    scale -= 1;
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                let mut sign = 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    sign = if chars[j] == '-' { -1 } else { 1 };
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    let mut k = 0i64;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        k = k.saturating_mul(10).saturating_add(chars[j] as i64 - '0' as i64);
                        j += 1;
                    }
                    if k > 100_000 {
                        return Err(err(pos, "decimal exponent is too large"));
                    }
                    scale += sign * k;
                    i = j;
                }
            }
            let mantissa: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().unwrap() };
            let ten = BigInt::from(10);
            let value = if scale >= 0 {
                Rational::from_integer(mantissa * num_traits::pow(ten, scale as usize))
            } else {
                Rational::new(mantissa, num_traits::pow(ten, (-scale) as usize))
            };
            out.push((Tok::Num(value), pos));
        } else if c.is_ascii_alphabetic() {
            let mut name = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                name.push(chars[i]);
                i += 1;
            }
            out.push((Tok::Ident(name), pos));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), pos));
            i += 1;
        } else {
            return Err(err(pos, format!("unexpected character '{c}'")));
        }
        col += i - start;
    }
    out.push((Tok::End, Pos { line, column: col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    k: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.k].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.k].1
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Op(c) {
            self.k += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(err(self.pos(), format!("expected '{c}', found {}", self.peek())))
        }
    }

    fn binary(op: BinOp, a: Node, b: Node) -> Node {
        let pos = a.pos;
        Node {
            expr: Expr::Binary(op, Box::new(a), Box::new(b)),
            pos,
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut acc = self.term()?;
        loop {
            let op = if self.eat('+') {
                BinOp::Add
            } else if self.eat('-') {
                BinOp::Sub
            } else {
                return Ok(acc);
            };
            let rhs = self.term()?;
            acc = Parser::binary(op, acc, rhs);
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut acc = self.unary()?;
        loop {
            let op = if self.eat('*') {
                BinOp::Mul
            } else if self.eat('/') {
                BinOp::Div
            } else {
                return Ok(acc);
            };
            let rhs = self.unary()?;
            acc = Parser::binary(op, acc, rhs);
        }
    }

    fn unary(&mut self) -> Result<Node> {
        let pos = self.pos();
        if self.eat('-') {
            let inner = self.unary()?;
            return Ok(Node {
                expr: Expr::Neg(Box::new(inner)),
                pos,
            });
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let pos = self.pos();
        let exponent = if self.eat('-') {
            let inner = self.atom()?;
            Node {
                expr: Expr::Neg(Box::new(inner)),
                pos,
            }
        } else {
            self.atom()?
        };
        if *self.peek() == Tok::Op('^') {
            return Err(err(self.pos(), "chained powers need parentheses"));
        }
        Ok(Parser::binary(BinOp::Pow, base, exponent))
    }

    fn atom(&mut self) -> Result<Node> {
        let pos = self.pos();
        let tok = self.peek().clone();
        let expr = match tok {
            Tok::Num(q) => {
                self.k += 1;
                Expr::Number(q)
            }
            Tok::Op('(') => {
                self.k += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                return Ok(inner);
            }
            Tok::Ident(name) => {
                self.k += 1;
                match name.as_str() {
                    "i" => Expr::Imaginary,
                    "pi" => Expr::Pi,
                    "e" => Expr::E,
                    "t" => Expr::T,
                    "y" => Expr::Y,
                    "sqrt" | "geom" => {
                        let func = if name == "sqrt" { Func::Sqrt } else { Func::Geom };
                        self.expect('(')?;
                        let arg = self.expr()?;
                        self.expect(')')?;
                        Expr::Call(func, Box::new(arg))
                    }
                    other => match other.strip_prefix('x').and_then(|d| d.parse::<usize>().ok()) {
                        Some(k) if k >= 1 && !other[1..].starts_with('0') => Expr::X(k),
                        _ => return Err(err(pos, format!("unknown name '{other}'"))),
                    },
                }
            }
            other => return Err(err(pos, format!("expected an expression, found {other}"))),
        };
        if let Tok::Num(_) | Tok::Ident(_) = self.peek() {
            return Err(err(
                self.pos(),
                format!("expected an operator, found {}; multiplication needs an explicit '*'", self.peek()),
            ));
        }
        if *self.peek() == Tok::Op('(') {
            return Err(err(self.pos(), "expected an operator, found '('; multiplication needs an explicit '*'"));
        }
        Ok(Node { expr, pos })
    }
}

/// Parses an expression. Errors carry the line and column of the
/// offending token.
pub fn parse(text: &str) -> Result<Node> {
    let mut p = Parser { toks: lex(text)?, k: 0 };
    let node = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(err(p.pos(), format!("unexpected {}", p.peek())));
    }
    Ok(node)
}

fn semantic(pos: Pos, message: impl fmt::Display) -> Error {
    Error::Semantic(format!("{}:{}: {message}", pos.line, pos.column))
}

/// The value of a real constant expression.
pub fn exponent_of(node: &Node) -> Result<Exponent> {
    let pos = node.pos;
    let rational = |n: &Node| -> Result<Rational> {
        exponent_of(n)?
            .as_rational()
            .ok_or_else(|| semantic(n.pos, "expected a rational number here"))
    };
    Ok(match &node.expr {
        Expr::Number(q) => Exponent::from_rational(q.clone()),
        Expr::Pi => Exponent::pi(),
        Expr::E => Exponent::e(),
        Expr::Neg(a) => -exponent_of(a)?,
        Expr::Call(Func::Sqrt, a) => Exponent::sqrt(&rational(a)?).map_err(|e| semantic(pos, e))?,
        Expr::Binary(op, a, b) => match op {
            BinOp::Add => exponent_of(a)? + exponent_of(b)?,
            BinOp::Sub => exponent_of(a)? - exponent_of(b)?,
            BinOp::Mul => {
                let (x, y) = (exponent_of(a)?, exponent_of(b)?);
                match (x.as_rational(), y.as_rational()) {
                    (Some(q), _) => y.scale(&q),
                    (_, Some(q)) => x.scale(&q),
                    _ => return Err(semantic(pos, "a product of two irrational constants is not supported")),
                }
            }
            BinOp::Div => {
                let q = rational(b)?;
                if q.is_zero() {
                    return Err(semantic(b.pos, "division by zero"));
                }
                exponent_of(a)?.scale(&q.recip())
            }
            BinOp::Pow => {
                let base = rational(a)?;
                let k = rational(b)?;
                if !k.is_integer() || k.abs() > Rational::from_integer(4096.into()) {
                    return Err(semantic(b.pos, "only small integer powers of rationals are allowed here"));
                }
                let k = k.to_integer();
                let k32: i32 = (&k).try_into().unwrap();
                if base.is_zero() && k32 < 0 {
                    return Err(semantic(pos, "division by zero"));
                }
                Exponent::from_rational(num_traits::pow::Pow::pow(&base, k32))
            }
        },
        _ => return Err(semantic(pos, "expected a real constant (rationals, pi, e, sqrt)")),
    })
}

/// Parses a real constant such as `3/4`, `4*e/5` or `pi - 1`.
pub fn parse_exponent(text: &str) -> Result<Exponent> {
    exponent_of(&parse(text)?)
}

/// Parses comma-separated real constants.
pub fn parse_exponent_list(text: &str) -> Result<Vec<Exponent>> {
    text.split(',').map(|part| parse_exponent(part.trim())).collect()
}

/// An elaborated input.
#[derive(Clone, Debug)]
pub enum Elaborated {
    Univariate(PolyOverK),
    Multivariate(LaurentPolyK),
}

fn max_x(node: &Node) -> (usize, bool) {
    match &node.expr {
        Expr::X(k) => (*k, false),
        Expr::Y => (0, true),
        Expr::Neg(a) | Expr::Call(_, a) => max_x(a),
        Expr::Binary(_, a, b) => {
            let (ka, ya) = max_x(a);
            let (kb, yb) = max_x(b);
            (ka.max(kb), ya || yb)
        }
        _ => (0, false),
    }
}

struct Elab {
    nvars: usize,
    /// Index of `y` in the monomial vector; `None` in multivariate input.
    y: Option<usize>,
    cap: Exponent,
}

impl Elab {
    fn constant(&self, s: Series) -> LaurentPolyK {
        LaurentPolyK::from_terms(self.nvars, [(vec![0; self.nvars], s)]).with_val_cap(self.cap.clone())
    }

    fn variable(&self, k: usize) -> LaurentPolyK {
        let mut a = vec![0; self.nvars];
        a[k] = 1;
        LaurentPolyK::from_terms(self.nvars, [(a, Series::one())]).with_val_cap(self.cap.clone())
    }

    fn inverse(&self, p: &LaurentPolyK, pos: Pos) -> Result<LaurentPolyK> {
        if p.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if p.terms().len() > 1 {
            return Err(semantic(pos, "division by a sum involving variables is not a polynomial"));
        }
        let (a, c) = p.terms().iter().next().unwrap();
        let inv = c.inverse(&self.cap).map_err(|e| e.with_context(format!("divisor at {}:{}", pos.line, pos.column)))?;
        let neg: Vec<i64> = a.iter().map(|k| -k).collect();
        Ok(LaurentPolyK::from_terms(self.nvars, [(neg, inv)]).with_val_cap(self.cap.clone()))
    }

    fn value(&self, node: &Node) -> Result<LaurentPolyK> {
        let pos = node.pos;
        Ok(match &node.expr {
            Expr::Number(q) => self.constant(Series::constant(Coefficient::from_rational(q.clone()))),
            Expr::Imaginary => self.constant(Series::constant(Coefficient::i())),
            Expr::Pi | Expr::E => {
                return Err(semantic(pos, "named constants may only appear in exponents of t"))
            }
            Expr::T => self.constant(Series::monomial(Coefficient::one(), Exponent::from_integer(1))),
            Expr::Y => self.variable(self.y.ok_or_else(|| semantic(pos, "'y' cannot be mixed with x1..xn"))?),
            Expr::X(k) => {
                if self.y.is_some() {
                    return Err(semantic(pos, "'y' cannot be mixed with x1..xn"));
                }
                self.variable(k - 1)
            }
            Expr::Neg(a) => {
                let v = self.value(a)?;
                LaurentPolyK::from_terms(self.nvars, v.terms().iter().map(|(m, c)| (m.clone(), c.neg())))
                    .with_val_cap(self.cap.clone())
            }
            Expr::Call(Func::Geom, a) => {
                let step = exponent_of(a)?;
                self.constant(Series::geometric(&step).map_err(|e| semantic(pos, e))?)
            }
            Expr::Call(Func::Sqrt, a) => {
                let e = exponent_of(&Node {
                    expr: Expr::Call(Func::Sqrt, a.clone()),
                    pos,
                })?;
                let q = e
                    .as_rational()
                    .ok_or_else(|| semantic(pos, "only square roots of rational squares may appear as coefficients"))?;
                self.constant(Series::constant(Coefficient::from_rational(q)))
            }
            Expr::Binary(op, a, b) => match op {
                BinOp::Add => self.value(a)?.add(&self.value(b)?),
                BinOp::Sub => self.value(a)?.add(&self.value(&Node {
                    expr: Expr::Neg(b.clone()),
                    pos: b.pos,
                })?),
                BinOp::Mul => self.value(a)?.mul(&self.value(b)?),
                BinOp::Div => self.value(a)?.mul(&self.inverse(&self.value(b)?, b.pos)?),
                BinOp::Pow => {
                    if a.expr == Expr::T {
                        let e = exponent_of(b)?;
                        return Ok(self.constant(Series::monomial(Coefficient::one(), e)));
                    }
                    let k = exponent_of(b)?
                        .as_integer()
                        .ok_or_else(|| semantic(b.pos, "only t may be raised to a non-integer power"))?;
                    let k: i64 = (&k).try_into().map_err(|_| semantic(b.pos, "power is too large"))?;
                    if k.abs() > 1024 {
                        return Err(semantic(b.pos, "power is too large"));
                    }
                    let mut base = self.value(a)?;
                    if k < 0 {
                        base = self.inverse(&base, a.pos)?;
                    }
                    let mut acc = self.constant(Series::one());
                    for _ in 0..k.abs() {
                        acc = acc.mul(&base);
                    }
                    acc
                }
            },
        })
    }
}

/// Builds a polynomial from a tree: in `y` if it uses `y` or no variable,
/// otherwise a Laurent polynomial in `x1..xn`.
pub fn elaborate(node: &Node) -> Result<Elaborated> {
    elaborate_with_cap(node, &Exponent::from_integer(DEFAULT_VAL_CAP))
}

/// As [`elaborate`], with the valuation cap used for quotients and for the
/// result.
pub fn elaborate_with_cap(node: &Node, cap: &Exponent) -> Result<Elaborated> {
    let (nx, _) = max_x(node);
    if nx == 0 {
        let elab = Elab {
            nvars: 1,
            y: Some(0),
            cap: cap.clone(),
        };
        let v = elab.value(node)?;
        let mut coeffs: Vec<Series> = Vec::new();
        for (a, c) in v.terms() {
            let k = a[0];
            if k < 0 {
                return Err(Error::Semantic(format!("negative power y^{k}: not a polynomial in y")));
            }
            let k = k as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Series::zero());
            }
            coeffs[k] = c.clone();
        }
        Ok(Elaborated::Univariate(PolyOverK::new(coeffs).with_val_cap(cap.clone())))
    } else {
        let elab = Elab {
            nvars: nx,
            y: None,
            cap: cap.clone(),
        };
        Ok(Elaborated::Multivariate(elab.value(node)?))
    }
}

/// Parses and elaborates a polynomial in `y`.
pub fn parse_poly(text: &str) -> Result<PolyOverK> {
    parse_poly_with_cap(text, &Exponent::from_integer(DEFAULT_VAL_CAP))
}

pub fn parse_poly_with_cap(text: &str, cap: &Exponent) -> Result<PolyOverK> {
    match elaborate_with_cap(&parse(text)?, cap)? {
        Elaborated::Univariate(p) => Ok(p),
        Elaborated::Multivariate(_) => Err(Error::Semantic("expected a polynomial in y".into())),
    }
}

/// Parses a series: an expression without `y` or `x` variables.
pub fn parse_series(text: &str) -> Result<Series> {
    let p = parse_poly(text)?;
    match p.degree() {
        None => Ok(Series::zero()),
        Some(0) => Ok(p.coeff(0)),
        Some(_) => Err(Error::Semantic("expected a series, found a polynomial in y".into())),
    }
}

fn monomial_text(e: &Exponent) -> String {
    if e.is_zero() {
        String::new()
    } else if *e == Exponent::from_integer(1) {
        "t".into()
    } else if let Some(k) = e.as_integer().filter(|k| k.is_positive()) {
        format!("t^{k}")
    } else {
        format!("t^({e})")
    }
}

/// Writes `c·t^e` terms as a sum, e.g. `t^(1/2) - 1/2*t`.
pub fn terms_to_string(terms: &[(Exponent, Coefficient)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (e, c) in terms {
        let (negative, body) = coefficient_term(c);
        let mono = monomial_text(e);
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

/// The terms of `s` up to `bound`, as text that parses back to them.
pub fn series_to_string(s: &Series, bound: &Exponent) -> Result<String> {
    Ok(terms_to_string(&s.terms_below(bound)?))
}

/// `F` truncated at t-order `bound` in every coefficient, as parseable text,
/// highest power of `y` first.
pub fn poly_to_string(f: &PolyOverK, bound: &Exponent) -> Result<String> {
    let mut parts: Vec<String> = Vec::new();
    for (i, c) in f.coeffs().iter().enumerate().rev() {
        let terms = c.terms_below(bound)?;
        if terms.is_empty() {
            continue;
        }
        let body = terms_to_string(&terms);
        let y = match i {
            0 => String::new(),
            1 => "y".into(),
            _ => format!("y^{i}"),
        };
        parts.push(match (terms.len() == 1 && terms[0].1.is_one(), y.is_empty()) {
            (_, true) => format!("({body})"),
            (true, false) if terms[0].0.is_zero() => y,
            _ => format!("({body})*{y}"),
        });
    }
    Ok(if parts.is_empty() { "0".into() } else { parts.join(" + ") })
}
