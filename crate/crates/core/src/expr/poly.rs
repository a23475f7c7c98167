//! Sparse multivariate polynomials over Q in interned atoms.
//!
//! Arithmetic here is in the free polynomial ring; the Pythagorean relation
//! is applied only through [`Poly::reduce_trig`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::atom::Atom;

/// A monomial: atoms in ascending order with positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Mono(Vec<(Atom, u32)>);

impl Mono {
    pub fn one() -> Mono {
        Mono(Vec::new())
    }

    pub fn atom(a: Atom, e: u32) -> Mono {
        if e == 0 {
            Mono::one()
        } else {
            Mono(vec![(a, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Atom, u32)] {
        &self.0
    }

    pub fn degree_in(&self, a: &Atom) -> u32 {
        self.0
            .iter()
            .find(|(b, _)| b == a)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Mono(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Mono) -> Option<Mono> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (a, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < *a {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == *a {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => continue,
                    Ordering::Greater => out.push((a.clone(), e - f)),
                }
            } else {
                out.push((a.clone(), *e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Mono(out))
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Mono) -> Mono {
        let mut out = Vec::new();
        for (a, e) in &self.0 {
            let f = other.degree_in(a);
            if f > 0 {
                out.push((a.clone(), (*e).min(f)));
            }
        }
        Mono(out)
    }

    /// The monomial with atom `a` removed.
    pub fn without(&self, a: &Atom) -> Mono {
        Mono(self.0.iter().filter(|(b, _)| b != a).cloned().collect())
    }

    /// The monomial with the exponent of `a` replaced by `e`.
    pub fn with_degree(&self, a: &Atom, e: u32) -> Mono {
        let mut out: Vec<(Atom, u32)> = self.0.iter().filter(|(b, _)| b != a).cloned().collect();
        if e > 0 {
            let pos = out.partition_point(|(b, _)| b < a);
            out.insert(pos, (a.clone(), e));
        }
        Mono(out)
    }
}

impl Ord for Mono {
    /// Lexicographic order with the smallest atom most significant.
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let mut i = 0;
        loop {
            match (a.get(i), b.get(i)) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((x, e)), Some((y, f))) => match x.cmp(y) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match e.cmp(f) {
                        Ordering::Equal => i += 1,
                        ord => return ord,
                    },
                },
            }
        }
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, (a, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{a}")?;
            } else {
                write!(f, "{a}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Polynomial with rational coefficients. Terms are kept in lex order; the
/// last entry is the leading term.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, BigRational>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Poly {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Mono::one(), c);
        }
        p
    }

    pub fn from_i64(n: i64) -> Poly {
        Poly::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn atom(a: Atom) -> Poly {
        Poly::term(Mono::atom(a, 1), BigRational::one())
    }

    pub fn term(m: Mono, c: BigRational) -> Poly {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&Mono::one()))
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Leading term under the lex order.
    pub fn lead(&self) -> Option<(&Mono, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for (a, _) in m.factors() {
                out.insert(a.clone());
            }
        }
        out
    }

    pub fn contains_atom(&self, a: &Atom) -> bool {
        self.terms.keys().any(|m| m.degree_in(a) > 0)
    }

    pub fn has_sin(&self) -> bool {
        self.terms
            .keys()
            .any(|m| m.factors().iter().any(|(a, _)| a.is_sin()))
    }

    pub fn degree_in(&self, a: &Atom) -> u32 {
        self.terms.keys().map(|m| m.degree_in(a)).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn mul_term(&self, m: &Mono, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(n, k)| (n.mul(m), k * c))
                .collect(),
        }
    }

    fn add_term(&mut self, m: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &Poly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub_assign_ref(&mut self, other: &Poly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Coefficients with respect to `a`, indexed by degree. The coefficients
    /// do not contain `a`.
    pub fn coeffs_in(&self, a: &Atom) -> Vec<Poly> {
        let d = self.degree_in(a) as usize;
        let mut out = vec![Poly::zero(); d + 1];
        for (m, c) in &self.terms {
            let e = m.degree_in(a) as usize;
            out[e].add_term(m.without(a), c.clone());
        }
        out
    }

    pub fn from_coeffs(a: &Atom, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            for (m, k) in &c.terms {
                out.add_term(m.with_degree(a, e as u32), k.clone());
            }
        }
        out
    }

    /// Formal partial derivative with respect to the indeterminate `a`.
    pub fn partial(&self, a: &Atom) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.degree_in(a);
            if e > 0 {
                out.add_term(
                    m.with_degree(a, e - 1),
                    c * BigRational::from_integer(BigInt::from(e)),
                );
            }
        }
        out
    }

    /// Rewrites every `sin(u)^e` with `e >= 2` using `sin(u)^2 = 1 - cos(u)^2`,
    /// leaving each sine with degree at most one.
    pub fn reduce_trig(self) -> Poly {
        let needs = self
            .terms
            .keys()
            .any(|m| m.factors().iter().any(|(a, e)| a.is_sin() && *e >= 2));
        if !needs {
            return self;
        }
        let mut out = Poly::zero();
        for (m, c) in self.terms {
            let mut rest = Vec::new();
            let mut factor = Poly::one();
            for (a, e) in m.factors() {
                if a.is_sin() && *e >= 2 {
                    let cos = a.cos_partner().expect("sine atom has a cosine partner");
                    let mut one_minus_cos2 = Poly::one();
                    one_minus_cos2.add_term(Mono::atom(cos, 2), -BigRational::one());
                    factor = &factor * &one_minus_cos2.pow(e / 2);
                    if e % 2 == 1 {
                        rest.push((a.clone(), 1));
                    }
                } else {
                    rest.push((a.clone(), *e));
                }
            }
            // `rest` stays sorted since we only dropped or lowered entries.
            let rest = Mono(rest);
            out.add_assign_ref(&factor.mul_term(&rest, &c));
        }
        out
    }

    /// Multiplies through so all coefficients are coprime integers with a
    /// positive leading coefficient. Returns the factor applied.
    pub fn primitive_normalize(&self) -> (Poly, BigRational) {
        if self.is_zero() {
            return (Poly::zero(), BigRational::one());
        }
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            let n = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&n);
        }
        let mut factor = BigRational::new(den_lcm, num_gcd);
        if self.lead().expect("nonzero").1.is_negative() {
            factor = -factor;
        }
        (self.scale(&factor), factor)
    }

    /// Integer content lcm/gcd data: (lcm of denominators, gcd of scaled numerators).
    pub(crate) fn integer_content(&self) -> (BigInt, BigInt) {
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(&(c.numer() * (&den_lcm / c.denom())));
        }
        (den_lcm, num_gcd)
    }

    pub(crate) fn leading_is_negative(&self) -> bool {
        self.lead().is_some_and(|(_, c)| c.is_negative())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (big, small) = if self.len() >= rhs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        out.add_assign_ref(small);
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.sub_assign_ref(rhs);
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})*{m:?}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(name: &str) -> Poly {
        Poly::atom(Atom::var(name))
    }

    #[test]
    fn lex_leading_term_prefers_smallest_atom() {
        let p = &(&v("b") * &v("b")) + &v("a");
        let (m, _) = p.lead().unwrap();
        assert_eq!(m, &Mono::atom(Atom::var("a"), 1));
    }

    #[test]
    fn mono_division() {
        let a = Atom::var("a");
        let b = Atom::var("b");
        let ab2 = Mono::atom(a.clone(), 1).mul(&Mono::atom(b.clone(), 2));
        assert_eq!(ab2.div(&Mono::atom(b.clone(), 1)), Some(Mono::atom(a.clone(), 1).mul(&Mono::atom(b.clone(), 1))));
        assert_eq!(ab2.div(&Mono::atom(a.clone(), 2)), None);
        assert_eq!(Mono::atom(a, 1).div(&Mono::atom(b, 1)), None);
    }

    #[test]
    fn coeff_roundtrip() {
        let x = Atom::var("x");
        let p = &(&v("x") * &v("y")) + &(&v("x").pow(3) - &Poly::from_i64(2));
        let cs = p.coeffs_in(&x);
        assert_eq!(cs.len(), 4);
        assert_eq!(Poly::from_coeffs(&x, &cs), p);
    }

    #[test]
    fn primitive_normalize_makes_integer_content_one() {
        let p = &v("x").scale(&BigRational::new((-3).into(), 4.into())) + &Poly::constant(BigRational::new(3.into(), 2.into()));
        let (q, _) = p.primitive_normalize();
        assert_eq!(q, &v("x") - &Poly::from_i64(2));
    }
}
