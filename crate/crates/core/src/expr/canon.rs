//! Canonical quotients of polynomials modulo the Pythagorean relation.
//!
//! A canonical pair `(num, den)` satisfies:
//! - `num` has degree at most one in every `sin(u)` atom;
//! - `den` contains no `sin(u)` atom at all (denominators are rationalized
//!   with the conjugate `a - b*sin(u)`);
//! - `gcd(num, den) = 1` in the free ring;
//! - either `den = 1`, or both sides have coprime integer coefficients and
//!   `den` has a positive leading coefficient.
//!
//! Under these rules two quotients are equal as functions on the circle
//! bundle exactly when their canonical pairs coincide.

use num_rational::BigRational;
use num_traits::Zero;

use super::atom::Atom;
use super::gcd::{div_exact, gcd};
use super::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct RatFunc {
    pub num: Poly,
    pub den: Poly,
}

impl RatFunc {
    pub fn poly(p: Poly) -> RatFunc {
        RatFunc {
            num: p.reduce_trig(),
            den: Poly::one(),
        }
    }

    /// Builds the canonical form of `num / den`. Panics if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> RatFunc {
        assert!(!den.is_zero(), "zero denominator in rational function");
        let num = num.reduce_trig();
        let den = den.reduce_trig();
        if num.is_zero() {
            return RatFunc::poly(Poly::zero());
        }
        if let Some(c) = den.constant_value() {
            return RatFunc {
                num: num.scale(&c.recip()),
                den: Poly::one(),
            };
        }
        if let Some(q) = div_exact(&num, &den) {
            return RatFunc {
                num: q,
                den: Poly::one(),
            };
        }
        let (num, den) = rationalize(num, den);
        if let Some(c) = den.constant_value() {
            return RatFunc {
                num: num.scale(&c.recip()),
                den: Poly::one(),
            };
        }
        if let Some(q) = div_exact(&num, &den) {
            return RatFunc {
                num: q,
                den: Poly::one(),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (
                div_exact(&num, &g).expect("gcd divides numerator"),
                div_exact(&den, &g).expect("gcd divides denominator"),
            )
        };
        if let Some(c) = den.constant_value() {
            return RatFunc {
                num: num.scale(&c.recip()),
                den: Poly::one(),
            };
        }
        normalize_units(num, den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.den.is_one() && other.den.is_one() {
            return RatFunc {
                num: &self.num + &other.num,
                den: Poly::one(),
            };
        }
        if self.den == other.den {
            return RatFunc::new(&self.num + &other.num, self.den.clone());
        }
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        RatFunc::new(num, &self.den * &other.den)
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::poly(Poly::zero());
        }
        let num = (&self.num * &other.num).reduce_trig();
        if self.den.is_one() && other.den.is_one() {
            return RatFunc {
                num,
                den: Poly::one(),
            };
        }
        RatFunc::new(num, &self.den * &other.den)
    }

    /// `self / other`; `None` when `other` is zero.
    pub fn div(&self, other: &RatFunc) -> Option<RatFunc> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(RatFunc::poly(Poly::zero()));
        }
        Some(RatFunc::new(
            &self.num * &other.den,
            &self.den * &other.num,
        ))
    }
}

/// Multiplies numerator and denominator by sine conjugates until the
/// denominator is free of every `sin(u)`.
fn rationalize(mut num: Poly, mut den: Poly) -> (Poly, Poly) {
    loop {
        let sin = den.atoms().into_iter().find(Atom::is_sin);
        let Some(s) = sin else {
            return (num, den);
        };
        let coeffs = den.coeffs_in(&s);
        debug_assert!(coeffs.len() <= 2, "denominator not trig-reduced");
        let d0 = coeffs[0].clone();
        let d1 = coeffs.get(1).cloned().unwrap_or_default();
        let conj = &d0 - &(&d1 * &Poly::atom(s.clone()));
        num = (&num * &conj).reduce_trig();
        den = (&den * &conj).reduce_trig();
    }
}

fn normalize_units(num: Poly, den: Poly) -> RatFunc {
    let (dl_n, g_n) = num.integer_content();
    let (dl_d, g_d) = den.integer_content();
    let lcm = num_integer::Integer::lcm(&dl_n, &dl_d);
    // After scaling by lcm, the integer gcds scale by lcm/dl.
    let gn = g_n * (&lcm / &dl_n);
    let gd = g_d * (&lcm / &dl_d);
    let g = num_integer::Integer::gcd(&gn, &gd);
    let mut factor = BigRational::new(lcm, g);
    if den.leading_is_negative() {
        factor = -factor;
    }
    debug_assert!(!factor.is_zero());
    RatFunc {
        num: num.scale(&factor),
        den: den.scale(&factor),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;

    fn v(name: &str) -> Poly {
        Poly::atom(Atom::var(name))
    }

    fn c(n: i64) -> Poly {
        Poly::from_i64(n)
    }

    #[test]
    fn cancels_common_factor() {
        let k = v("k");
        let r = RatFunc::new(&k * &v("x"), (&k * &k).scale(&BigRational::from_integer(4.into())));
        assert_eq!(r.num, v("x"));
        assert_eq!(r.den, k.scale(&BigRational::from_integer(4.into())));
    }

    #[test]
    fn unit_normalization_is_unique() {
        let a = RatFunc::new(c(1), &v("k") * &c(-4));
        let b = RatFunc::new(c(-3), &v("k") * &c(12));
        assert_eq!(a, b);
        assert_eq!(a.num, c(-1));
    }

    #[test]
    fn sine_denominator_is_rationalized() {
        let t = Expr::var("t");
        let s = Poly::atom(Atom::sin(&t));
        let co = Poly::atom(Atom::cos(&t));
        // (1 - cos^2) / sin = sin
        let r = RatFunc::new(&c(1) - &(&co * &co), s.clone());
        assert_eq!(r, RatFunc::poly(s.clone()));
        // sin / (1 + cos) = (1 - cos) / sin, canonically written with an s-free denominator
        let r1 = RatFunc::new(s.clone(), &c(1) + &co);
        let r2 = RatFunc::new(&c(1) - &co, s.clone());
        assert_eq!(r1, r2);
        assert!(!r1.den.has_sin());
    }
}
