//! Exact evaluation at rational points.
//!
//! Trig atoms are bound by angle: each argument text maps to an exact point
//! `(cos, sin)` on the unit circle, so evaluation respects the Pythagorean
//! relation and is a ring homomorphism on normal forms.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::atom::Atom;
use super::poly::Poly;
use super::Expr;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("no value bound for `{0}`")]
    Unbound(String),
    #[error("denominator of `{0}` vanishes")]
    ZeroDenominator(String),
}

/// A rational point: values for variables and circle points for angles.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bindings {
    pub vars: HashMap<String, BigRational>,
    /// Keyed by the canonical text of the trig argument; value is `(cos, sin)`.
    pub angles: HashMap<String, (BigRational, BigRational)>,
}

impl Bindings {
    pub fn new() -> Bindings {
        Bindings::default()
    }

    pub fn set_var(&mut self, name: &str, value: BigRational) {
        self.vars.insert(name.to_string(), value);
    }

    /// Binds the angle with parameter `t` to the rational circle point
    /// `((1 - t^2) / (1 + t^2), 2t / (1 + t^2))`.
    pub fn set_angle_param(&mut self, key: &str, t: &BigRational) {
        self.angles.insert(key.to_string(), circle_point(t));
    }
}

pub fn circle_point(t: &BigRational) -> (BigRational, BigRational) {
    let t2 = t * t;
    let d = BigRational::one() + &t2;
    let c = (BigRational::one() - &t2) / &d;
    let s = (t + t) / &d;
    (c, s)
}

fn atom_value(a: &Atom, b: &Bindings) -> Result<BigRational, EvalError> {
    match a.argument() {
        None => b
            .vars
            .get(a.key())
            .cloned()
            .ok_or_else(|| EvalError::Unbound(a.key().to_string())),
        Some(_) => {
            let (c, s) = b
                .angles
                .get(a.key())
                .ok_or_else(|| EvalError::Unbound(a.to_string()))?;
            Ok(if a.is_sin() { s.clone() } else { c.clone() })
        }
    }
}

pub(crate) fn eval_poly(p: &Poly, b: &Bindings) -> Result<BigRational, EvalError> {
    let mut cache: HashMap<Atom, BigRational> = HashMap::new();
    let mut acc = BigRational::zero();
    for (m, c) in p.terms() {
        let mut t = c.clone();
        for (a, e) in m.factors() {
            let v = match cache.get(a) {
                Some(v) => v.clone(),
                None => {
                    let v = atom_value(a, b)?;
                    cache.insert(a.clone(), v.clone());
                    v
                }
            };
            t *= num_traits::pow(v, *e as usize);
        }
        acc += t;
    }
    Ok(acc)
}

impl Expr {
    /// Exact value at a rational point.
    pub fn evaluate_exact(&self, b: &Bindings) -> Result<BigRational, EvalError> {
        let n = eval_poly(self.num_poly(), b)?;
        if self.den_poly().is_one() {
            return Ok(n);
        }
        let d = eval_poly(self.den_poly(), b)?;
        if d.is_zero() {
            return Err(EvalError::ZeroDenominator(self.to_string()));
        }
        Ok(n / d)
    }

    /// Value of the numerator only; its vanishing decides zero-ness at a point.
    pub(crate) fn evaluate_numerator(&self, b: &Bindings) -> Result<BigRational, EvalError> {
        eval_poly(self.num_poly(), b)
    }

    /// Floating-point value with trig atoms computed from their arguments.
    pub fn evaluate_f64(&self, vars: &HashMap<String, f64>) -> Result<f64, EvalError> {
        let n = eval_poly_f64(self.num_poly(), vars)?;
        if self.den_poly().is_one() {
            return Ok(n);
        }
        let d = eval_poly_f64(self.den_poly(), vars)?;
        if d == 0.0 {
            return Err(EvalError::ZeroDenominator(self.to_string()));
        }
        Ok(n / d)
    }
}

fn eval_poly_f64(p: &Poly, vars: &HashMap<String, f64>) -> Result<f64, EvalError> {
    let mut acc = 0.0;
    for (m, c) in p.terms() {
        let mut t = rational_to_f64(c);
        for (a, e) in m.factors() {
            let v = match a.argument() {
                None => *vars
                    .get(a.key())
                    .ok_or_else(|| EvalError::Unbound(a.key().to_string()))?,
                Some(arg) => {
                    let u = arg.evaluate_f64(vars)?;
                    if a.is_sin() {
                        u.sin()
                    } else {
                        u.cos()
                    }
                }
            };
            t *= v.powi(*e as i32);
        }
        acc += t;
    }
    Ok(acc)
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Scale down huge operands before dividing.
            let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
            let n = (q.numer().abs() >> shift).to_f64().unwrap_or(f64::MAX);
            let d = (q.denom() >> shift).to_f64().unwrap_or(f64::MAX);
            let v = n / d;
            if q.is_negative() {
                -v
            } else {
                v
            }
        }
    }
}
