//! Canonical text rendering and a structural view of expressions.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::poly::{Mono, Poly};
use super::Expr;

/// Structural view of an expression's normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprView {
    Rational(BigRational),
    Var(String),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Pow(Expr, i64),
    Sin(Expr),
    Cos(Expr),
}

fn mono_text(m: &Mono) -> String {
    let mut out = String::new();
    for (k, (a, e)) in m.factors().iter().enumerate() {
        if k > 0 {
            out.push('*');
        }
        if *e == 1 {
            out.push_str(&a.to_string());
        } else {
            out.push_str(&format!("{a}^{e}"));
        }
    }
    out
}

fn rational_text(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Writes `p` with its leading term first.
fn poly_text(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if m.is_one() {
            out.push_str(&rational_text(&a));
        } else if a.is_one() {
            out.push_str(&mono_text(m));
        } else {
            out.push_str(&rational_text(&a));
            out.push('*');
            out.push_str(&mono_text(m));
        }
    }
    out
}

fn is_bare(p: &Poly) -> bool {
    p.is_monomial() && {
        let (m, c) = p.lead().expect("nonzero");
        c.is_one() && m.factors().len() == 1 && m.factors()[0].1 == 1
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.num_poly();
        let den = self.den_poly();
        if den.is_one() {
            return f.write_str(&poly_text(num));
        }
        let n = poly_text(num);
        if num.len() > 1 {
            write!(f, "({n})")?;
        } else {
            f.write_str(&n)?;
        }
        let d = poly_text(den);
        if is_bare(den) {
            write!(f, "/{d}")
        } else {
            write!(f, "/({d})")
        }
    }
}

fn term_expr(m: &Mono, c: &BigRational) -> Expr {
    Expr::from_poly(Poly::term(m.clone(), c.clone()))
}

pub(super) fn view(e: &Expr) -> ExprView {
    let num = e.num_poly();
    let den = e.den_poly();
    if !den.is_one() {
        if num.is_one() {
            return ExprView::Pow(e.denominator(), -1);
        }
        return ExprView::Product(vec![e.numerator(), &Expr::one() / &e.denominator()]);
    }
    if num.len() > 1 {
        return ExprView::Sum(num.terms().rev().map(|(m, c)| term_expr(m, c)).collect());
    }
    let Some((m, c)) = num.lead() else {
        return ExprView::Rational(BigRational::from_integer(0.into()));
    };
    if m.is_one() {
        return ExprView::Rational(c.clone());
    }
    let factors = m.factors();
    if c.is_one() && factors.len() == 1 {
        let (a, p) = &factors[0];
        if *p > 1 {
            return ExprView::Pow(Expr::from_poly(Poly::atom(a.clone())), *p as i64);
        }
        return match a.argument() {
            None => ExprView::Var(a.key().to_string()),
            Some(arg) if a.is_sin() => ExprView::Sin(arg.clone()),
            Some(arg) => ExprView::Cos(arg.clone()),
        };
    }
    let mut parts = Vec::new();
    if !c.is_one() {
        parts.push(Expr::rational(c.clone()));
    }
    for (a, p) in factors {
        parts.push(Expr::from_poly(Poly::term(Mono::atom(a.clone(), *p), BigRational::one())));
    }
    ExprView::Product(parts)
}
