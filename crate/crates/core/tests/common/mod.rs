//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use borderfj::expr::{Bindings, Expr, ZeroTester};
use borderfj::linalg::SymMatrix;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

/// Determinant by Laplace expansion along the first row.
pub fn cofactor_det(m: &[Vec<Expr>]) -> Expr {
    let n = m.len();
    if n == 0 {
        return Expr::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Expr::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Expr>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, e)| e.clone()).collect())
            .collect();
        let term = &m[0][j] * &cofactor_det(&minor);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Row reduction over the rationals: (determinant, rank, reduced rows).
fn gauss(m: &[Vec<Q>]) -> (Q, usize, Vec<Vec<Q>>) {
    let mut a = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut det = Q::one();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            det = Q::zero();
            continue;
        };
        if p != r {
            a.swap(p, r);
            det = -det;
        }
        let piv = a[r][c].clone();
        det *= &piv;
        for x in a[r].iter_mut() {
            *x /= &piv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in 0..cols {
                    let t = &f * &a[r][k];
                    a[i][k] -= t;
                }
            }
        }
        r += 1;
    }
    if r < rows {
        det = Q::zero();
    }
    (det, r, a)
}

pub fn rat_det(m: &[Vec<Q>]) -> Q {
    gauss(m).0
}

pub fn rat_rank(m: &[Vec<Q>]) -> usize {
    gauss(m).1
}

pub fn rat_inverse(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let aug: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let (_, _, red) = gauss(&aug);
    for (i, row) in red.iter().enumerate() {
        for (j, x) in row[..n].iter().enumerate() {
            if (i == j) != x.is_one() || (i != j && !x.is_zero()) {
                return None;
            }
        }
    }
    Some(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn rat_mul_vec(m: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    m.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// Evaluates every entry; `None` if a denominator vanishes.
pub fn eval_rows(rows: &[Vec<Expr>], b: &Bindings) -> Option<Vec<Vec<Q>>> {
    rows.iter()
        .map(|r| r.iter().map(|e| e.evaluate_exact(b).ok()).collect())
        .collect()
}

pub fn eval_matrix(m: &SymMatrix, b: &Bindings) -> Option<Vec<Vec<Q>>> {
    eval_rows(&m.to_rows(), b)
}

/// Random exact points covering every symbol of `exprs`.
pub fn points<'a>(exprs: impl IntoIterator<Item = &'a Expr>, count: usize, seed: u64) -> Vec<Bindings> {
    let exprs: Vec<&Expr> = exprs.into_iter().collect();
    let mut vars = BTreeSet::new();
    let mut angles = BTreeSet::new();
    for e in &exprs {
        vars.extend(e.plain_vars());
        angles.extend(e.angles());
    }
    let zt = ZeroTester::with_seed(seed);
    let mut rng = zt.rng(0);
    (0..count).map(|_| zt.random_point(&mut rng, &vars, &angles)).collect()
}

fn monomial(rng: &mut ChaCha8Rng, vars: &[String], max_degree: u32) -> String {
    let coeff = loop {
        let c: i64 = rng.gen_range(-3..=3);
        if c != 0 {
            break c;
        }
    };
    let degree = rng.gen_range(0..=max_degree);
    let mut parts = vec![coeff.to_string()];
    for _ in 0..degree {
        parts.push(vars[rng.gen_range(0..vars.len())].clone());
    }
    parts.join("*")
}

fn polynomial(rng: &mut ChaCha8Rng, vars: &[String], max_degree: u32, max_terms: usize) -> String {
    let terms = rng.gen_range(1..=max_terms);
    let t: Vec<String> = (0..terms).map(|_| monomial(rng, vars, max_degree)).collect();
    format!("({})", t.join(" + "))
}

/// A random mechanical system: up to three coordinates, up to two
/// multipliers entering linearly, and a polynomial potential of degree at
/// most three.
pub fn fuzz_system(seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=3);
    let m = rng.gen_range(0..=2);
    let vars: Vec<String> = (1..=n).map(|i| format!("q{i}")).collect();
    let mults: Vec<String> = (1..=m).map(|i| format!("l{i}")).collect();

    let mut kinetic = Vec::new();
    for v in &vars {
        match rng.gen_range(0..3) {
            0 => {}
            1 => kinetic.push(format!("{}*d{v}^2", rng.gen_range(1..=3))),
            _ => {
                let w = &vars[rng.gen_range(0..n)];
                kinetic.push(format!("(d{v} + d{w})^2"));
            }
        }
    }
    if kinetic.is_empty() {
        kinetic.push(format!("d{}^2", vars[0]));
    }

    let mut potential = vec![polynomial(&mut rng, &vars, 3, 4)];
    for l in &mults {
        potential.push(format!("{l}*{}", polynomial(&mut rng, &vars, 2, 2)));
    }

    let mut s = format!("[system]\nname = fuzz {seed}\nmode = mechanical\n[variables]\n{}\n", vars.join(", "));
    if !mults.is_empty() {
        s += &format!("[multipliers]\n{}\n", mults.join(", "));
    }
    s += &format!("[kinetic]\n1/2*({})\n[potential]\n{}\n", kinetic.join(" + "), potential.join(" + "));
    s
}

use borderfj::fj::{MatrixStatus, ReductionReport};
use borderfj::linalg::{determinant, inverse, kernel, pfaffian};

/// Structural checks over every iterate of a reduction.
pub fn check_invariants(r: &ReductionReport) -> Result<(), String> {
    for (k, st) in r.iterates.iter().enumerate() {
        let f = &st.matrix;
        let n = f.rows();
        f.check_antisymmetric().map_err(|e| format!("iterate {k}: {e}"))?;
        if n != st.names.len() {
            return Err(format!("iterate {k}: {n} rows for {} names", st.names.len()));
        }
        // Unflagged copy, so odd dimensions go through elimination.
        let det = determinant(&SymMatrix::from_rows(f.to_rows()).unwrap()).map_err(|e| e.to_string())?;
        if n % 2 == 1 && !det.is_zero() {
            return Err(format!("iterate {k}: odd dimension with det {det}"));
        }
        if n % 2 == 0 && n <= 10 {
            let pf = pfaffian(f).map_err(|e| e.to_string())?;
            if &pf * &pf != det {
                return Err(format!("iterate {k}: pf^2 = {} but det = {det}", &pf * &pf));
            }
        }
        if det.is_zero() {
            for v in kernel(f).map_err(|e| e.to_string())? {
                if !f.mul_vec(&v).unwrap().iter().all(Expr::is_zero) {
                    return Err(format!("iterate {k}: kernel vector does not annihilate"));
                }
            }
        }
        if k > 0 {
            let prev = &r.iterates[k - 1];
            let m = prev.dimension();
            let idx: Vec<usize> = (0..m).collect();
            if f.select(&idx, &idx).to_rows() != prev.matrix.to_rows() {
                return Err(format!("iterate {k}: leading block changed"));
            }
            for a in m..n {
                for b in m..n {
                    if !f.get(a, b).is_zero() {
                        return Err(format!("iterate {k}: nonzero multiplier block"));
                    }
                }
                let c = r
                    .constraints
                    .iter()
                    .find(|c| c.multiplier == st.names[a])
                    .ok_or_else(|| format!("iterate {k}: no constraint for {}", st.names[a]))?;
                for i in 0..m {
                    if f.get(i, a) != &c.expr.diff(&st.names[i]) {
                        return Err(format!("iterate {k}: border entry ({i}, {a}) is not a gradient"));
                    }
                }
            }
        }
    }
    let f = &r.final_state().matrix;
    match r.status {
        MatrixStatus::Regular => {
            let inv = r.inverse_extended_matrix.as_ref().ok_or("regular without inverse")?;
            if !f.mul(inv).unwrap().is_identity() {
                return Err("f · f⁻¹ is not the identity".into());
            }
        }
        MatrixStatus::Singular => {
            let gauge = r.gauge_generators.as_ref().ok_or("singular without gauge generators")?;
            if gauge.is_empty() {
                return Err("empty gauge basis".into());
            }
            for v in gauge {
                if !f.mul_vec(v).unwrap().iter().all(Expr::is_zero) {
                    return Err("gauge generator does not annihilate".into());
                }
            }
        }
    }
    Ok(())
}

/// Compute-then-evaluate against evaluate-then-compute for determinant,
/// kernel and inverse at `count` exact points.
pub fn check_oracle(m: &SymMatrix, count: usize, seed: u64) -> Result<usize, String> {
    let n = m.rows();
    let det = determinant(m).map_err(|e| e.to_string())?;
    let inv = if det.is_zero() { None } else { Some(inverse(m).map_err(|e| e.to_string())?) };
    let ker = if det.is_zero() { kernel(m).map_err(|e| e.to_string())? } else { Vec::new() };
    let mut exprs: Vec<Expr> = m.entries().cloned().collect();
    exprs.push(det.clone());
    if let Some(inv) = &inv {
        exprs.extend(inv.entries().cloned());
    }
    exprs.extend(ker.iter().flatten().cloned());
    let mut checked = 0;
    let mut attempt = 0;
    while checked < count {
        attempt += 1;
        if attempt > 4 * count {
            return Err(format!("only {checked} usable points"));
        }
        let b = points(&exprs, 1, seed.wrapping_add(attempt as u64)).remove(0);
        let Some(mv) = eval_matrix(m, &b) else { continue };
        let Ok(dv) = det.evaluate_exact(&b) else { continue };
        if dv != rat_det(&mv) {
            return Err(format!("det mismatch: {dv} vs {}", rat_det(&mv)));
        }
        if let Some(inv) = &inv {
            let Some(iv) = eval_matrix(inv, &b) else { continue };
            if Some(iv) != rat_inverse(&mv) {
                return Err("inverse mismatch".into());
            }
        } else {
            let Some(kv) = eval_rows(&ker, &b) else { continue };
            for v in &kv {
                if rat_mul_vec(&mv, v).iter().any(|x| !x.is_zero()) {
                    return Err("kernel vector does not annihilate".into());
                }
            }
            if rat_rank(&mv) + ker.len() != n {
                return Err(format!("rank {} with kernel {} in dimension {n}", rat_rank(&mv), ker.len()));
            }
        }
        checked += 1;
    }
    Ok(checked)
}
