//! Zero testing by exact evaluation at random rational points.
//!
//! Normal forms already decide zero-ness; sampling confirms a nonzero
//! verdict and guards the pivot search against expressions whose numerator
//! happens to vanish on every sample.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::eval::Bindings;
use super::Expr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroClass {
    Zero,
    NonZero,
    Unknown,
}

/// Sampling budget and seed for zero tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZeroTester {
    pub samples: usize,
    pub widened: usize,
    pub magnitude: i64,
    pub seed: u64,
}

impl Default for ZeroTester {
    fn default() -> Self {
        ZeroTester {
            samples: 16,
            widened: 64,
            magnitude: 1_000_000,
            seed: 0x5eed_b0de,
        }
    }
}

/// A random nonzero rational `n/d` with `|n| <= magnitude`, `1 <= d <= magnitude`.
pub fn random_rational<R: Rng>(rng: &mut R, magnitude: i64) -> BigRational {
    let m = magnitude.max(2);
    loop {
        let n: i64 = rng.gen_range(-m..=m);
        if n == 0 {
            continue;
        }
        let d: i64 = rng.gen_range(1..=m);
        return BigRational::new(BigInt::from(n), BigInt::from(d));
    }
}

/// Variable names and angle keys that must be bound to evaluate `exprs`.
pub fn sample_keys<'a>(exprs: impl IntoIterator<Item = &'a Expr>) -> (BTreeSet<String>, BTreeSet<String>) {
    let mut vars = BTreeSet::new();
    let mut angles = BTreeSet::new();
    for e in exprs {
        vars.extend(e.plain_vars());
        angles.extend(e.angles());
    }
    (vars, angles)
}

impl ZeroTester {
    pub fn with_seed(seed: u64) -> ZeroTester {
        ZeroTester {
            seed,
            ..ZeroTester::default()
        }
    }

    pub fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt)
    }

    /// A random rational point binding every listed variable and angle.
    pub fn random_point<R: Rng>(
        &self,
        rng: &mut R,
        vars: &BTreeSet<String>,
        angles: &BTreeSet<String>,
    ) -> Bindings {
        let mut b = Bindings::new();
        for v in vars {
            b.set_var(v, random_rational(rng, self.magnitude));
        }
        for a in angles {
            b.set_angle_param(a, &random_rational(rng, self.magnitude));
        }
        b
    }

    pub fn classify(&self, e: &Expr) -> ZeroClass {
        if e.is_zero() {
            return ZeroClass::Zero;
        }
        if e.is_constant() {
            return ZeroClass::NonZero;
        }
        self.sample(e, self.samples)
    }

    /// Like [`ZeroTester::classify`] with the widened budget.
    pub fn classify_widened(&self, e: &Expr) -> ZeroClass {
        match self.classify(e) {
            ZeroClass::Unknown => self.sample(e, self.widened),
            c => c,
        }
    }

    fn sample(&self, e: &Expr, n: usize) -> ZeroClass {
        let (vars, angles) = sample_keys([e]);
        let mut rng = self.rng(e.stable_hash().wrapping_add(n as u64));
        for _ in 0..n {
            let b = self.random_point(&mut rng, &vars, &angles);
            match e.evaluate_numerator(&b) {
                Ok(v) if !v.is_zero() => return ZeroClass::NonZero,
                _ => {}
            }
        }
        ZeroClass::Unknown
    }
}
