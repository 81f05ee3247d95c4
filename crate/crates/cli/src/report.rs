//! Text and JSON renderings of each command's result.

use std::fmt::Write;

use num_traits::ToPrimitive;
use puiseux::coeffs::Coefficient;
use puiseux::error::Result;
use puiseux::exponents::Exponent;
use puiseux::polynomial::{PolyOverK, Point};
use puiseux::series::{Series, Term, Valuation};
use puiseux::solver::{all_roots, residual_valuation, Residual, Termination};
use puiseux::syntax::{poly_to_string, terms_to_string};
use puiseux::tropical::{tin_multivariate, tropical_roots, LaurentPolyK};
use puiseux::weierstrass::weierstrass_prepare;
use serde_json::{json, Map, Value};

use crate::Context;

pub struct Report {
    pub text: String,
    pub json: Value,
}

fn header(command: &str, ctx: &Context) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("convention".into(), json!(if ctx.max_convention { "max" } else { "min" }));
    m
}

fn coefficient(c: &Coefficient) -> Value {
    let mut m = Map::new();
    m.insert("value".into(), json!(c.to_string()));
    if !c.is_exact() {
        m.insert("radius".into(), json!(c.radius().to_f64().unwrap_or(f64::INFINITY)));
    }
    Value::Object(m)
}

fn term(t: &Term) -> Value {
    json!({ "exponent": t.0.to_string(), "coefficient": coefficient(&t.1) })
}

fn point(p: &Point, ctx: &Context) -> Value {
    json!({ "i": p.0, "val": ctx.val(&p.1) })
}

fn point_text(p: &Point, ctx: &Context) -> String {
    format!("({}, {})", p.0, ctx.val(&p.1))
}

pub fn polygon(f: &PolyOverK, ctx: &Context) -> Result<Report> {
    let polygon = f.newton_polygon()?;
    let mut text = String::new();
    let support: Vec<String> = polygon.support.iter().map(|p| point_text(p, ctx)).collect();
    writeln!(text, "support: {}", support.join(" ")).unwrap();
    let vertices: Vec<String> = polygon.vertices.iter().map(|p| point_text(p, ctx)).collect();
    writeln!(text, "vertices: {}", vertices.join(" ")).unwrap();
    writeln!(text, "faces:").unwrap();
    let mut faces = Vec::new();
    for face in &polygon.faces {
        let omega = -&face.slope;
        writeln!(
            text,
            "  {} -- {}  slope {}  length {}",
            point_text(&face.from, ctx),
            point_text(&face.to, ctx),
            ctx.val(&face.slope),
            face.length
        )
        .unwrap();
        faces.push(json!({
            "from": point(&face.from, ctx),
            "to": point(&face.to, ctx),
            "slope": ctx.val(&face.slope),
            "omega": ctx.val(&omega),
            "length": face.length,
            "interior": face.interior.iter().map(|p| point(p, ctx)).collect::<Vec<_>>(),
        }));
    }
    let mut m = header("polygon", ctx);
    m.insert("support".into(), polygon.support.iter().map(|p| point(p, ctx)).collect());
    m.insert("vertices".into(), polygon.vertices.iter().map(|p| point(p, ctx)).collect());
    m.insert("faces".into(), Value::Array(faces));
    Ok(Report { text, json: Value::Object(m) })
}

pub fn initial_form(f: &PolyOverK, omega: &Exponent, ctx: &Context) -> Result<Report> {
    let tin = f.t_initial_form(omega)?;
    let ord = f.ord_omega(omega)?;
    let coefficients: Vec<Value> = tin
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| json!({ "degree": i, "coefficient": coefficient(c) }))
        .collect();
    let mut m = header("initial-form", ctx);
    m.insert("omega".into(), json!(omega.to_string()));
    m.insert("ord".into(), json!(ctx.val(&ord)));
    m.insert("initial_form".into(), json!(tin.to_string()));
    m.insert("coefficients".into(), Value::Array(coefficients));
    m.insert("monomial".into(), json!(tin.term_count() < 2));
    Ok(Report {
        text: format!("{tin}\n"),
        json: Value::Object(m),
    })
}

pub fn ord(f: &PolyOverK, omega: &Exponent, ctx: &Context) -> Result<Report> {
    let ord = f.ord_omega(omega)?;
    let mut m = header("ord", ctx);
    m.insert("omega".into(), json!(omega.to_string()));
    m.insert("ord".into(), json!(ctx.val(&ord)));
    Ok(Report {
        text: format!("{}\n", ctx.val(&ord)),
        json: Value::Object(m),
    })
}

fn termination(t: &Termination) -> Value {
    match t {
        Termination::Finite => json!({ "kind": "finite" }),
        Termination::Linear => json!({ "kind": "linear" }),
        Termination::Cluster { verified_to } => json!({ "kind": "cluster", "bound": verified_to.to_string() }),
        Termination::Truncated { cap } => json!({ "kind": "truncated", "bound": cap.to_string() }),
    }
}

pub fn solve(f: &PolyOverK, order: &Exponent, ctx: &Context) -> Result<Report> {
    let roots = all_roots(f, order, &ctx.solver_config())?;
    let mut text = String::new();
    let mut out = Vec::new();
    for root in &roots {
        let terms = root.series.terms_below(order)?;
        // one more term past the order tells whether the shown sum is the whole root
        let more = root.exponents(terms.len() + 1, &ctx.cap)?.len() > terms.len();
        let mut shown = terms_to_string(&terms);
        if more {
            shown.push_str(" + ...");
        }
        let valuation = match &root.valuation {
            Valuation::Finite(v) => json!(ctx.val(v)),
            Valuation::Infinite => Value::Null,
        };
        writeln!(
            text,
            "y = {shown}    multiplicity {}, valuation {}",
            root.multiplicity,
            match &root.valuation {
                Valuation::Finite(v) => ctx.val(v),
                Valuation::Infinite => if ctx.max_convention { "-inf" } else { "inf" }.into(),
            }
        )
        .unwrap();
        let trace: Vec<Value> = root
            .trace
            .iter()
            .map(|s| {
                json!({
                    "alpha": s.alpha.to_string(),
                    "omega": s.omega.to_string(),
                    "c": coefficient(&s.c),
                    "r_prime": s.r_prime,
                    "weierstrass": s.weierstrass,
                })
            })
            .collect();
        out.push(json!({
            "text": shown,
            "terms": terms.iter().map(term).collect::<Vec<_>>(),
            "more_terms": more,
            "multiplicity": root.multiplicity,
            "valuation": valuation,
            "termination": termination(&root.termination),
            "trace": trace,
        }));
    }
    let mut m = header("solve", ctx);
    m.insert("order".into(), json!(order.to_string()));
    m.insert("degree".into(), json!(f.degree().unwrap_or(0)));
    m.insert("roots".into(), Value::Array(out));
    Ok(Report { text, json: Value::Object(m) })
}

fn coefficient_list(p: &PolyOverK, bound: &Exponent) -> Result<Vec<Value>> {
    p.coeffs()
        .iter()
        .map(|c| {
            let terms = c.terms_below(bound)?;
            Ok(json!({
                "text": terms_to_string(&terms),
                "terms": terms.iter().map(term).collect::<Vec<_>>(),
            }))
        })
        .collect()
}

pub fn prepare(f: &PolyOverK, order: &Exponent, ctx: &Context) -> Result<Report> {
    let w = weierstrass_prepare(f, order)?;
    let p_text = poly_to_string(&w.p, order)?;
    let u_text = poly_to_string(&w.u, order)?;
    let mut m = header("prepare", ctx);
    m.insert("order".into(), json!(order.to_string()));
    m.insert("r".into(), json!(w.r));
    m.insert("p".into(), json!({ "text": p_text, "coefficients": coefficient_list(&w.p, order)? }));
    m.insert("u".into(), json!({ "text": u_text, "coefficients": coefficient_list(&w.u, order)? }));
    Ok(Report {
        text: format!("r = {}\nP = {p_text}\nU = {u_text}\n", w.r),
        json: Value::Object(m),
    })
}

pub fn tropical_univariate(f: &PolyOverK, ctx: &Context) -> Result<Report> {
    let roots = tropical_roots(f)?;
    let mut text = String::new();
    for r in &roots {
        writeln!(text, "{}  multiplicity {}", ctx.val(&r.omega), r.multiplicity).unwrap();
    }
    let mut m = header("tropicalize", ctx);
    m.insert(
        "roots".into(),
        roots
            .iter()
            .map(|r| json!({ "omega": ctx.val(&r.omega), "multiplicity": r.multiplicity }))
            .collect(),
    );
    Ok(Report { text, json: Value::Object(m) })
}

pub fn tropical_multivariate(f: &LaurentPolyK, omega: &[Exponent], ctx: &Context) -> Result<Report> {
    let f = f.clone().with_val_cap(ctx.cap.clone());
    let tin = tin_multivariate(&f, omega)?;
    let free = tin.len() >= 2;
    let mut m = header("tropicalize", ctx);
    m.insert("omega".into(), omega.iter().map(|w| json!(w.to_string())).collect());
    m.insert("initial_form".into(), json!(tin.to_string()));
    m.insert(
        "terms".into(),
        tin.terms()
            .iter()
            .rev()
            .map(|(a, c)| json!({ "monomial": a, "coefficient": coefficient(c) }))
            .collect(),
    );
    m.insert("monomial_free".into(), json!(free));
    Ok(Report {
        text: format!("{tin}\n{}\n", if free { "not a monomial" } else { "monomial" }),
        json: Value::Object(m),
    })
}

pub fn eval(f: &PolyOverK, y: &Series, order: &Exponent, ctx: &Context) -> Result<Report> {
    let value = f.eval(y);
    let terms = value.terms_below(order)?;
    let residual = residual_valuation(f, y, order)?;
    let (exact, v) = match &residual {
        Residual::Exact(v) => (true, v),
        Residual::AtLeast(v) => (false, v),
    };
    let shown = terms_to_string(&terms);
    let mut m = header("eval", ctx);
    m.insert("order".into(), json!(order.to_string()));
    m.insert("text".into(), json!(shown));
    m.insert("terms".into(), terms.iter().map(term).collect());
    m.insert("valuation".into(), json!({ "exact": exact, "value": ctx.val(v) }));
    let note = if exact {
        format!("valuation {}", ctx.val(v))
    } else {
        format!("no terms up to {order}")
    };
    Ok(Report {
        text: format!("{shown}\n{note}\n"),
        json: Value::Object(m),
    })
}
