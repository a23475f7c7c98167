//! Exact symbolic expressions.
//!
//! An [`Expr`] is a hash-consed canonical quotient of polynomials over Q in
//! variables and opaque `sin(u)` / `cos(u)` atoms, normalized modulo
//! `sin(u)^2 + cos(u)^2 = 1`. Equal expressions share one allocation, so
//! equality is a pointer comparison.

mod atom;
mod canon;
mod eval;
pub mod gcd;
mod parse;
pub mod poly;
mod print;
mod vars;
mod zero;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::hash::{BuildHasher, Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, LazyLock, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use atom::Atom;
use canon::RatFunc;
pub use eval::{Bindings, EvalError};
pub use parse::{parse, parse_with, ParseError};
use poly::Poly;
pub use print::ExprView;
pub use vars::{Role, VarTable, VarTableError};
pub use eval::{circle_point, rational_to_f64};
pub use zero::{random_rational, sample_keys, ZeroClass, ZeroTester};

struct ExprInner {
    value: RatFunc,
    hash: u64,
}

impl PartialEq for ExprInner {
    fn eq(&self, other: &Self) -> bool {
        self.hash == other.hash && self.value == other.value
    }
}

impl Eq for ExprInner {}

impl Hash for ExprInner {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.hash);
    }
}

/// Stable, seed-independent hasher so expression hashes are reproducible
/// across runs (they seed the zero-test sampler).
fn stable_hash<T: Hash>(value: &T) -> u64 {
    let state = std::hash::BuildHasherDefault::<std::collections::hash_map::DefaultHasher>::default();
    state.hash_one(value)
}

static INTERNER: LazyLock<Mutex<HashSet<Arc<ExprInner>>>> =
    LazyLock::new(|| Mutex::new(HashSet::new()));

/// An immutable, interned symbolic expression in normal form.
#[derive(Clone)]
pub struct Expr(Arc<ExprInner>);

impl Expr {
    fn intern(value: RatFunc) -> Expr {
        let hash = stable_hash(&value);
        let candidate = ExprInner { value, hash };
        let mut set = INTERNER.lock().expect("expression interner poisoned");
        if let Some(found) = set.get(&candidate) {
            return Expr(found.clone());
        }
        let arc = Arc::new(candidate);
        set.insert(arc.clone());
        Expr(arc)
    }

    pub(crate) fn from_poly(p: Poly) -> Expr {
        Expr::intern(RatFunc::poly(p))
    }

    pub(crate) fn from_parts(num: Poly, den: Poly) -> Expr {
        Expr::intern(RatFunc::new(num, den))
    }

    pub(crate) fn num_poly(&self) -> &Poly {
        &self.0.value.num
    }

    pub(crate) fn den_poly(&self) -> &Poly {
        &self.0.value.den
    }

    pub fn zero() -> Expr {
        Expr::from_poly(Poly::zero())
    }

    pub fn one() -> Expr {
        Expr::from_poly(Poly::one())
    }

    pub fn int(n: i64) -> Expr {
        Expr::from_poly(Poly::from_i64(n))
    }

    pub fn rational(q: BigRational) -> Expr {
        Expr::from_poly(Poly::constant(q))
    }

    pub fn frac(n: i64, d: i64) -> Expr {
        Expr::rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn var(name: &str) -> Expr {
        Expr::from_poly(Poly::atom(Atom::var(name)))
    }

    pub fn sin(arg: &Expr) -> Expr {
        if arg.is_zero() {
            return Expr::zero();
        }
        Expr::from_poly(Poly::atom(Atom::sin(arg)))
    }

    pub fn cos(arg: &Expr) -> Expr {
        if arg.is_zero() {
            return Expr::one();
        }
        Expr::from_poly(Poly::atom(Atom::cos(arg)))
    }

    /// Structural hash of the normal form; stable across runs.
    pub fn stable_hash(&self) -> u64 {
        self.0.hash
    }

    /// True when the normal form is the literal 0.
    pub fn is_zero(&self) -> bool {
        self.0.value.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.value.den.is_one() && self.0.value.num.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.0.value.num.is_constant() && self.0.value.den.is_one()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.0.value.den.is_one() {
            self.0.value.num.constant_value()
        } else {
            None
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.value.den.is_one()
    }

    pub fn numerator(&self) -> Expr {
        Expr::from_poly(self.0.value.num.clone())
    }

    pub fn denominator(&self) -> Expr {
        Expr::from_poly(self.0.value.den.clone())
    }

    /// Number of terms in numerator and denominator; the pivot-size measure.
    pub fn size(&self) -> usize {
        self.0.value.num.len() + self.0.value.den.len()
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = self.0.value.num.atoms();
        out.extend(self.0.value.den.atoms());
        out
    }

    /// Names of all variables, including those inside trig arguments.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for a in self.atoms() {
            match a.argument() {
                None => {
                    out.insert(a.key().to_string());
                }
                Some(arg) => out.extend(arg.free_vars()),
            }
        }
        out
    }

    /// Canonical texts of every trig argument (the angle keys for circle bindings).
    pub fn angles(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for a in self.atoms() {
            if let Some(arg) = a.argument() {
                out.insert(a.key().to_string());
                out.extend(arg.angles());
            }
        }
        out
    }

    /// Variables occurring as polynomial indeterminates (outside trig arguments).
    pub fn plain_vars(&self) -> BTreeSet<String> {
        self.atoms()
            .into_iter()
            .filter(Atom::is_var)
            .map(|a| a.key().to_string())
            .collect()
    }

    pub fn depends_on(&self, name: &str) -> bool {
        self.atoms().iter().any(|a| match a.argument() {
            None => a.key() == name,
            Some(arg) => arg.depends_on(name),
        })
    }

    pub fn checked_div(&self, rhs: &Expr) -> Option<Expr> {
        self.0.value.div(&rhs.0.value).map(Expr::intern)
    }

    /// Integer power; negative exponents invert. `None` for `0^-n`.
    pub fn pow(&self, e: i64) -> Option<Expr> {
        let base = if e < 0 {
            Expr::one().checked_div(self)?
        } else {
            self.clone()
        };
        let n = e.unsigned_abs() as u32;
        let v = &base.0.value;
        let num = v.num.pow(n);
        let den = v.den.pow(n);
        Some(Expr::from_parts(num, den))
    }

    /// Partial derivative with respect to the variable `name`.
    pub fn diff(&self, name: &str) -> Expr {
        let v = &self.0.value;
        let dn = poly_derivative(&v.num, name);
        if v.den.is_one() {
            return dn;
        }
        let dd = poly_derivative(&v.den, name);
        let n = Expr::from_poly(v.num.clone());
        let d = Expr::from_poly(v.den.clone());
        // (n' d - n d') / d^2
        let top = &(&dn * &d) - &(&n * &dd);
        top.checked_div(&(&d * &d)).expect("nonzero denominator")
    }

    /// Simultaneous substitution of variables by expressions. Fails when a
    /// denominator vanishes after substitution.
    pub fn subs(&self, map: &HashMap<String, Expr>) -> Result<Expr, EvalError> {
        if map.is_empty() {
            return Ok(self.clone());
        }
        let num = subs_poly(&self.0.value.num, map)?;
        if self.0.value.den.is_one() {
            return Ok(num);
        }
        let den = subs_poly(&self.0.value.den, map)?;
        num.checked_div(&den)
            .ok_or_else(|| EvalError::ZeroDenominator(self.to_string()))
    }

    /// Structural view of the normal form.
    pub fn view(&self) -> ExprView {
        print::view(self)
    }
}

fn atom_derivative(a: &Atom, name: &str) -> Expr {
    match a.argument() {
        None => {
            if a.key() == name {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Some(arg) => {
            let du = arg.diff(name);
            if du.is_zero() {
                return Expr::zero();
            }
            if a.is_sin() {
                &Expr::cos(arg) * &du
            } else {
                -&(&Expr::sin(arg) * &du)
            }
        }
    }
}

fn poly_derivative(p: &Poly, name: &str) -> Expr {
    let mut acc = Expr::zero();
    for a in p.atoms() {
        let da = atom_derivative(&a, name);
        if da.is_zero() {
            continue;
        }
        let part = Expr::from_poly(p.partial(&a));
        acc = &acc + &(&part * &da);
    }
    acc
}

fn subs_atom(a: &Atom, map: &HashMap<String, Expr>) -> Result<Expr, EvalError> {
    match a.argument() {
        None => Ok(map
            .get(a.key())
            .cloned()
            .unwrap_or_else(|| Expr::from_poly(Poly::atom(a.clone())))),
        Some(arg) => {
            let new_arg = arg.subs(map)?;
            Ok(if a.is_sin() {
                Expr::sin(&new_arg)
            } else {
                Expr::cos(&new_arg)
            })
        }
    }
}

fn subs_poly(p: &Poly, map: &HashMap<String, Expr>) -> Result<Expr, EvalError> {
    let mut cache: HashMap<Atom, Expr> = HashMap::new();
    let mut acc = Expr::zero();
    for (m, c) in p.terms() {
        let mut term = Expr::rational(c.clone());
        for (a, e) in m.factors() {
            let img = match cache.get(a) {
                Some(x) => x.clone(),
                None => {
                    let x = subs_atom(a, map)?;
                    cache.insert(a.clone(), x.clone());
                    x
                }
            };
            term = &term * &img.pow(*e as i64).expect("nonnegative power");
        }
        acc = &acc + &term;
    }
    Ok(acc)
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for Expr {}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl std::fmt::Debug for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Expr({self})")
    }
}

impl Default for Expr {
    fn default() -> Self {
        Expr::zero()
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl From<BigRational> for Expr {
    fn from(q: BigRational) -> Self {
        Expr::rational(q)
    }
}

impl Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        Expr::intern(self.0.value.add(&rhs.0.value))
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        if rhs.is_zero() {
            return self.clone();
        }
        if self == rhs {
            return Expr::zero();
        }
        Expr::intern(self.0.value.sub(&rhs.0.value))
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        if self.is_zero() || rhs.is_zero() {
            return Expr::zero();
        }
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        Expr::intern(self.0.value.mul(&rhs.0.value))
    }
}

impl Div for &Expr {
    type Output = Expr;
    /// Panics on division by the zero expression; use [`Expr::checked_div`]
    /// when the divisor may vanish.
    fn div(self, rhs: &Expr) -> Expr {
        self.checked_div(rhs).expect("division by zero expression")
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        if self.is_zero() {
            return self.clone();
        }
        Expr::intern(self.0.value.neg())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                (&self).$m(rhs)
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        iter.fold(Expr::zero(), |a, b| &a + &b)
    }
}

impl Zero for Expr {
    fn zero() -> Self {
        Expr::zero()
    }
    fn is_zero(&self) -> bool {
        Expr::is_zero(self)
    }
}

impl One for Expr {
    fn one() -> Self {
        Expr::one()
    }
}
