//! GCD, exact division and square-free decomposition in the free polynomial
//! ring Q[atoms].
//!
//! The GCD first tries the heuristic evaluation method: substitute a large
//! integer for one atom at a time, take the integer GCD at the bottom, and
//! rebuild candidates by symmetric ξ-adic expansion, keeping a candidate only
//! if it divides both inputs. When that gives up, it falls back to a
//! recursive primitive pseudo-remainder sequence.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::atom::Atom;
use super::poly::{Mono, Poly};

/// Exact quotient `a / b`, or `None` when `b` does not divide `a`.
pub fn div_exact(a: &Poly, b: &Poly) -> Option<Poly> {
    if b.is_zero() {
        return None;
    }
    if a.is_zero() {
        return Some(Poly::zero());
    }
    if let Some(c) = b.constant_value() {
        return Some(a.scale(&c.recip()));
    }
    for atom in b.atoms() {
        if a.degree_in(&atom) < b.degree_in(&atom) {
            return None;
        }
    }
    let (lm_b, lc_b) = {
        let (m, c) = b.lead().expect("nonzero");
        (m.clone(), c.clone())
    };
    let mut rem = a.clone();
    let mut quot = Poly::zero();
    while let Some((m, c)) = rem.lead() {
        let qm = m.div(&lm_b)?;
        let qc = c / &lc_b;
        let t = Poly::term(qm.clone(), qc.clone());
        quot.add_assign_ref(&t);
        rem.sub_assign_ref(&b.mul_term(&qm, &qc));
    }
    Some(quot)
}

/// Normalized GCD: integer coefficients, content one, positive leading
/// coefficient. `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.primitive_normalize().0;
    }
    if b.is_zero() {
        return a.primitive_normalize().0;
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.is_monomial() || b.is_monomial() {
        let (m, other) = if a.is_monomial() { (a, b) } else { (b, a) };
        let mut g = m.lead().expect("nonzero").0.clone();
        for (n, _) in other.terms() {
            g = g.gcd(n);
            if g.is_one() {
                break;
            }
        }
        return Poly::term(g, BigRational::one());
    }
    if a == b {
        return a.primitive_normalize().0;
    }
    let (pa, _) = a.primitive_normalize();
    let (pb, _) = b.primitive_normalize();
    if let Some(g) = heuristic_gcd(&pa, &pb) {
        return g.primitive_normalize().0;
    }
    prs_gcd(a, b)
}

fn prs_gcd(a: &Poly, b: &Poly) -> Poly {
    let atoms_a = a.atoms();
    let atoms_b = b.atoms();
    // Common atoms only: an atom absent from one side cannot occur in the gcd.
    let main = atoms_a.intersection(&atoms_b).next().cloned();
    let Some(x) = main else {
        return Poly::one();
    };
    // Atoms present on one side only get eliminated through contents.
    if let Some(y) = atoms_a.difference(&atoms_b).next() {
        return gcd(&content_in(a, y), b);
    }
    if let Some(y) = atoms_b.difference(&atoms_a).next() {
        return gcd(a, &content_in(b, y));
    }
    let ca = a.coeffs_in(&x);
    let cb = b.coeffs_in(&x);
    let cont_a = content_of(&ca);
    let cont_b = content_of(&cb);
    let cont = gcd(&cont_a, &cont_b);
    let pa: Vec<Poly> = ca
        .iter()
        .map(|c| div_exact(c, &cont_a).expect("content divides"))
        .collect();
    let pb: Vec<Poly> = cb
        .iter()
        .map(|c| div_exact(c, &cont_b).expect("content divides"))
        .collect();
    let g = primitive_prs(pa, pb);
    let g = Poly::from_coeffs(&x, &g);
    (&g * &cont).primitive_normalize().0
}

/// GCD of the coefficients of `p` viewed as a polynomial in `x`.
pub fn content_in(p: &Poly, x: &Atom) -> Poly {
    content_of(&p.coeffs_in(x))
}

fn content_of(coeffs: &[Poly]) -> Poly {
    let mut g = Poly::zero();
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn trim(v: &mut Vec<Poly>) {
    while v.len() > 1 && v.last().is_some_and(Poly::is_zero) {
        v.pop();
    }
    if v.len() == 1 && v[0].is_zero() {
        v.clear();
    }
}

fn deg(v: &[Poly]) -> usize {
    v.len().saturating_sub(1)
}

/// Pseudo-remainder of `a` by `b` as dense coefficient vectors.
fn prem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut r: Vec<Poly> = a.to_vec();
    trim(&mut r);
    let db = deg(b);
    let lb = b.last().expect("nonzero divisor").clone();
    while !r.is_empty() && deg(&r) >= db {
        let lr = r.last().expect("nonempty").clone();
        let shift = deg(&r) - db;
        for c in r.iter_mut() {
            *c = &*c * &lb;
        }
        for (i, bc) in b.iter().enumerate() {
            let t = &lr * bc;
            r[i + shift].sub_assign_ref(&t);
        }
        trim(&mut r);
    }
    r
}

fn primitive_part(v: Vec<Poly>) -> Vec<Poly> {
    let c = content_of(&v);
    if c.is_one() || c.is_zero() {
        return v;
    }
    v.iter()
        .map(|p| div_exact(p, &c).expect("content divides"))
        .collect()
}

/// Give up once evaluation points exceed this many bits.
const HEURISTIC_BITS: u64 = 60_000;

fn max_norm(p: &Poly) -> BigInt {
    p.terms().map(|(_, c)| c.numer().abs()).max().unwrap_or_default()
}

fn integer_gcd_of(p: &Poly) -> BigInt {
    p.terms().fold(BigInt::zero(), |g, (_, c)| g.gcd(c.numer()))
}

fn eval_at(p: &Poly, x: &Atom, xi: &BigRational) -> Poly {
    let mut acc = Poly::zero();
    for c in p.coeffs_in(x).iter().rev() {
        acc = &acc.scale(xi) + c;
    }
    acc
}

fn symmetric_mod(c: &BigInt, xi: &BigInt) -> BigInt {
    let r = c.mod_floor(xi);
    if &r + &r > *xi {
        r - xi
    } else {
        r
    }
}

/// Rebuilds a polynomial in `x` from its image at `x = xi`, or `None` if
/// the expansion runs past `max_degree`.
fn interpolate(image: &Poly, x: &Atom, xi: &BigInt, max_degree: usize) -> Option<Poly> {
    let mut e = image.clone();
    let mut coeffs = Vec::new();
    let inv = BigRational::new(BigInt::one(), xi.clone());
    while !e.is_zero() {
        if coeffs.len() > max_degree {
            return None;
        }
        let mut g = Poly::zero();
        for (m, c) in e.terms() {
            let r = symmetric_mod(c.numer(), xi);
            if !r.is_zero() {
                g.add_assign_ref(&Poly::term(m.clone(), BigRational::from_integer(r)));
            }
        }
        e = (&e - &g).scale(&inv);
        coeffs.push(g);
    }
    Some(Poly::from_coeffs(x, &coeffs))
}

/// GCD over the integers of two integer polynomials, content included.
fn heuristic_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    if a.is_zero() || b.is_zero() {
        let p = if a.is_zero() { b } else { a };
        return Some(if p.leading_is_negative() { -p } else { p.clone() });
    }
    let ca = integer_gcd_of(a);
    let cb = integer_gcd_of(b);
    let content = ca.gcd(&cb);
    if a.is_constant() || b.is_constant() {
        return Some(Poly::constant(BigRational::from_integer(content)));
    }
    let a = a.scale(&BigRational::new(BigInt::one(), ca));
    let b = b.scale(&BigRational::new(BigInt::one(), cb));
    let x = a.atoms().intersection(&b.atoms()).next().cloned();
    let Some(x) = x else {
        return Some(Poly::constant(BigRational::from_integer(content)));
    };
    let max_degree = a.degree_in(&x).min(b.degree_in(&x)) as usize;
    let mut xi: BigInt = max_norm(&a).min(max_norm(&b)) * 2 + 29;
    for _ in 0..6 {
        if xi.bits() > HEURISTIC_BITS {
            return None;
        }
        let q = BigRational::from_integer(xi.clone());
        let gamma = heuristic_gcd(&eval_at(&a, &x, &q), &eval_at(&b, &x, &q))?;
        if let Some(g) = interpolate(&gamma, &x, &xi, max_degree) {
            if !g.is_zero() {
                let g = g.scale(&BigRational::new(BigInt::one(), integer_gcd_of(&g)));
                let g = if g.leading_is_negative() { -&g } else { g };
                if div_exact(&a, &g).is_some() && div_exact(&b, &g).is_some() {
                    return Some(g.scale(&BigRational::from_integer(content)));
                }
            }
        }
        xi = xi * 73794 / 27011;
    }
    None
}

fn primitive_prs(a: Vec<Poly>, b: Vec<Poly>) -> Vec<Poly> {
    let (mut a, mut b) = if deg(&a) >= deg(&b) { (a, b) } else { (b, a) };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        if deg(&b) == 0 {
            return vec![Poly::one()];
        }
        let r = prem(&a, &b);
        a = b;
        b = primitive_part(r);
    }
    primitive_part(a)
}

/// A square-free factor with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareFreeFactor {
    pub factor: Poly,
    pub multiplicity: u32,
}

/// Yun's square-free decomposition of `p` with respect to the atom `x`.
///
/// Returns the cofactor free of `x` (content times a rational unit) and the
/// square-free factors in `x`, so that `cofactor * prod(f^m) = p` exactly.
pub fn square_free_in(p: &Poly, x: &Atom) -> (Poly, Vec<SquareFreeFactor>) {
    let mut out = Vec::new();
    if p.degree_in(x) == 0 {
        return (p.clone(), out);
    }
    let cont = content_in(p, x);
    let pp = div_exact(p, &cont).expect("content divides").primitive_normalize().0;
    let dp = pp.partial(x);
    let a = gcd(&pp, &dp);
    let mut b = div_exact(&pp, &a).expect("gcd divides");
    let mut c = div_exact(&dp, &a).expect("gcd divides");
    let mut d = &c - &b.partial(x);
    let mut i = 1;
    loop {
        let g = gcd(&b, &d);
        if g.degree_in(x) > 0 {
            out.push(SquareFreeFactor {
                factor: g.clone(),
                multiplicity: i,
            });
        }
        b = div_exact(&b, &g).expect("gcd divides");
        if b.degree_in(x) == 0 {
            break;
        }
        c = div_exact(&d, &g).expect("gcd divides");
        d = &c - &b.partial(x);
        i += 1;
    }
    let mut prod = Poly::one();
    for f in &out {
        prod = &prod * &f.factor.pow(f.multiplicity);
    }
    let cofactor = div_exact(p, &prod).expect("square-free factors divide");
    (cofactor, out)
}

/// Largest monomial dividing every term of `p`.
pub fn monomial_content(p: &Poly) -> Mono {
    let mut it = p.terms();
    let Some((first, _)) = it.next() else {
        return Mono::one();
    };
    let mut g = first.clone();
    for (m, _) in it {
        g = g.gcd(m);
        if g.is_one() {
            break;
        }
    }
    g
}
