//! Fraction-free elimination and the operations built on it.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::expr::gcd::{div_exact, gcd};
use crate::expr::poly::Poly;
use crate::expr::{sample_keys, Expr, ZeroClass, ZeroTester};

use super::{LinalgError, SymMatrix};

/// Row echelon form produced by Bareiss elimination.
#[derive(Debug, Clone)]
pub struct Echelon {
    /// The reduced rows (row-permuted); entries below each pivot are zero.
    pub rows: Vec<Vec<Expr>>,
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
    /// Original index of each reduced row.
    pub row_order: Vec<usize>,
    /// Odd number of row swaps.
    pub negate: bool,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn choose_pivot(
    a: &[Vec<Expr>],
    from: usize,
    col: usize,
    zt: &ZeroTester,
) -> Result<Option<usize>, LinalgError> {
    let mut candidates: Vec<(usize, usize)> = (from..a.len())
        .filter(|&i| !a[i][col].is_zero())
        .map(|i| (a[i][col].size(), i))
        .collect();
    candidates.sort();
    let mut unknown = Vec::new();
    for &(_, i) in &candidates {
        match zt.classify(&a[i][col]) {
            ZeroClass::NonZero => return Ok(Some(i)),
            ZeroClass::Unknown => unknown.push(i),
            ZeroClass::Zero => {}
        }
    }
    for &i in &unknown {
        if zt.classify_widened(&a[i][col]) == ZeroClass::NonZero {
            return Ok(Some(i));
        }
    }
    match unknown.first() {
        Some(&i) => Err(LinalgError::DegenerateStratum {
            pivot: a[i][col].to_string(),
        }),
        None => Ok(None),
    }
}

/// Bareiss elimination choosing pivots among the first `pivot_cols` columns.
pub fn echelon_with(m: &SymMatrix, pivot_cols: usize, zt: &ZeroTester) -> Result<Echelon, LinalgError> {
    let nrows = m.rows();
    let ncols = m.cols();
    let mut a = m.to_rows();
    let mut order: Vec<usize> = (0..nrows).collect();
    let mut pivots = Vec::new();
    let mut negate = false;
    let mut prev = Expr::one();
    let mut r = 0;
    for c in 0..pivot_cols.min(ncols) {
        if r == nrows {
            break;
        }
        let Some(p) = choose_pivot(&a, r, c, zt)? else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            order.swap(p, r);
            negate = !negate;
        }
        let piv = a[r][c].clone();
        for i in r + 1..nrows {
            let lead = a[i][c].clone();
            for j in c + 1..ncols {
                let t = if lead.is_zero() || a[r][j].is_zero() {
                    &piv * &a[i][j]
                } else {
                    &(&piv * &a[i][j]) - &(&lead * &a[r][j])
                };
                a[i][j] = if prev.is_one() || t.is_zero() {
                    t
                } else {
                    &t / &prev
                };
            }
            a[i][c] = Expr::zero();
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    Ok(Echelon {
        rows: a,
        pivots,
        row_order: order,
        negate,
    })
}

pub fn echelon(m: &SymMatrix, zt: &ZeroTester) -> Result<Echelon, LinalgError> {
    echelon_with(m, m.cols(), zt)
}

fn require_square(m: &SymMatrix) -> Result<(), LinalgError> {
    if m.is_square() {
        Ok(())
    } else {
        Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        })
    }
}

pub fn determinant_with(m: &SymMatrix, zt: &ZeroTester) -> Result<Expr, LinalgError> {
    require_square(m)?;
    let n = m.rows();
    if n == 0 {
        return Ok(Expr::one());
    }
    if n % 2 == 1 && m.is_flagged_antisymmetric() {
        return Ok(Expr::zero());
    }
    let e = echelon(m, zt)?;
    if e.rank() < n {
        return Ok(Expr::zero());
    }
    let d = e.rows[n - 1][n - 1].clone();
    Ok(if e.negate { -d } else { d })
}

pub fn determinant(m: &SymMatrix) -> Result<Expr, LinalgError> {
    determinant_with(m, &ZeroTester::default())
}

pub fn rank_with(m: &SymMatrix, zt: &ZeroTester) -> Result<usize, LinalgError> {
    Ok(echelon(m, zt)?.rank())
}

/// Solves the upper-triangular system given by the pivot rows for the
/// unknowns in pivot columns, with the other unknowns fixed by `free`.
fn back_substitute(e: &Echelon, ncols: usize, rhs: &[Expr], free: &[Expr]) -> Vec<Expr> {
    let mut x = free.to_vec();
    x.resize(ncols, Expr::zero());
    for (i, &c) in e.pivots.iter().enumerate().rev() {
        let row = &e.rows[i];
        let mut acc = rhs[i].clone();
        for j in c + 1..ncols {
            if !row[j].is_zero() && !x[j].is_zero() {
                acc = &acc - &(&row[j] * &x[j]);
            }
        }
        x[c] = if acc.is_zero() { acc } else { &acc / &row[c] };
    }
    x
}

fn poly_lcm(a: &Poly, b: &Poly) -> Poly {
    let g = gcd(a, b);
    let q = div_exact(a, &g).expect("gcd divides");
    &q * b
}

/// Clears denominators and content, then fixes the sign so the first
/// nonzero entry has a positive leading coefficient.
pub fn primitive_vector(v: &[Expr]) -> Vec<Expr> {
    if v.iter().all(Expr::is_zero) {
        return v.to_vec();
    }
    let mut l = Poly::one();
    for e in v {
        if !e.is_polynomial() {
            l = poly_lcm(&l, e.den_poly());
        }
    }
    let le = Expr::from_poly(l);
    let w: Vec<Expr> = v.iter().map(|e| e * &le).collect();
    let mut g = Poly::zero();
    for e in &w {
        if !e.is_zero() {
            g = gcd(&g, e.num_poly());
        }
    }
    let mut polys: Vec<Poly> = w
        .iter()
        .map(|e| div_exact(e.num_poly(), &g).expect("gcd divides entry"))
        .collect();
    // Integer normalization across the whole vector.
    let mut den_lcm = num_bigint::BigInt::one();
    let mut num_gcd = num_bigint::BigInt::zero();
    for p in &polys {
        let (d, _) = p.integer_content();
        den_lcm = num_integer::Integer::lcm(&den_lcm, &d);
    }
    for p in &polys {
        let scaled = p.scale(&BigRational::from_integer(den_lcm.clone()));
        let (_, n) = scaled.integer_content();
        num_gcd = num_integer::Integer::gcd(&num_gcd, &n);
    }
    let mut factor = BigRational::new(den_lcm, num_gcd);
    let first = polys.iter().find(|p| !p.is_zero()).expect("nonzero vector");
    if first.lead().expect("nonzero").1.is_negative() {
        factor = -factor;
    }
    for p in polys.iter_mut() {
        *p = p.scale(&factor);
    }
    polys.into_iter().map(Expr::from_poly).collect()
}

/// Right null space basis, one primitive vector per free column, in
/// increasing order of the free column.
pub fn kernel_with(m: &SymMatrix, zt: &ZeroTester) -> Result<Vec<Vec<Expr>>, LinalgError> {
    let n = m.cols();
    let e = echelon(m, zt)?;
    let zeros = vec![Expr::zero(); e.rank()];
    let mut basis = Vec::new();
    for f in 0..n {
        if e.pivots.contains(&f) {
            continue;
        }
        let mut free = vec![Expr::zero(); n];
        free[f] = Expr::one();
        let x = back_substitute(&e, n, &zeros, &free);
        basis.push(primitive_vector(&x));
    }
    Ok(basis)
}

pub fn kernel(m: &SymMatrix) -> Result<Vec<Vec<Expr>>, LinalgError> {
    kernel_with(m, &ZeroTester::default())
}

/// Fraction-free Gauss-Jordan on `[M | I]`. Returns `(d, A)` with
/// `M · A = d · I`, where `d` is the final pivot (the determinant up to sign).
pub fn adjugate_with(m: &SymMatrix, zt: &ZeroTester) -> Result<(Expr, SymMatrix), LinalgError> {
    require_square(m)?;
    let n = m.rows();
    let mut a: Vec<Vec<Expr>> = (0..n)
        .map(|i| {
            let mut row = m.row(i).to_vec();
            row.extend((0..n).map(|j| if i == j { Expr::one() } else { Expr::zero() }));
            row
        })
        .collect();
    let mut prev = Expr::one();
    for k in 0..n {
        let Some(p) = choose_pivot(&a, k, k, zt)? else {
            return Err(LinalgError::Singular);
        };
        a.swap(p, k);
        let piv = a[k][k].clone();
        for i in 0..n {
            if i == k {
                continue;
            }
            let lead = a[i][k].clone();
            for j in 0..2 * n {
                if j == k {
                    continue;
                }
                let t = if lead.is_zero() || a[k][j].is_zero() {
                    &piv * &a[i][j]
                } else {
                    &(&piv * &a[i][j]) - &(&lead * &a[k][j])
                };
                a[i][j] = if prev.is_one() || t.is_zero() { t } else { &t / &prev };
            }
            a[i][k] = Expr::zero();
        }
        prev = piv;
    }
    let adj = SymMatrix::from_fn(n, n, |i, j| a[i][n + j].clone());
    Ok((prev, adj))
}

/// Exact inverse via the fraction-free adjugate.
pub fn inverse_with(m: &SymMatrix, zt: &ZeroTester) -> Result<SymMatrix, LinalgError> {
    let (d, adj) = adjugate_with(m, zt)?;
    let inv = adj.map(|e| e / &d);
    if m.is_flagged_antisymmetric() || m.is_antisymmetric() {
        return inv
            .into_antisymmetric()
            .map_err(|_| LinalgError::Internal("inverse of antisymmetric matrix is not antisymmetric".into()));
    }
    Ok(inv)
}

pub fn inverse(m: &SymMatrix) -> Result<SymMatrix, LinalgError> {
    inverse_with(m, &ZeroTester::default())
}

/// Rank at random exact points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenericRank {
    pub rank: usize,
    /// The two confirming samples disagreed; `rank` is the largest seen.
    pub stratified: bool,
}

fn matrix_salt(m: &SymMatrix) -> u64 {
    m.entries()
        .fold(0x9e37_79b9_7f4a_7c15u64, |h, e| h.rotate_left(5) ^ e.stable_hash())
}

pub fn generic_rank_with(m: &SymMatrix, zt: &ZeroTester) -> Result<GenericRank, LinalgError> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(GenericRank {
            rank: 0,
            stratified: false,
        });
    }
    let (vars, angles) = sample_keys(m.entries());
    let mut rng = zt.rng(matrix_salt(m));
    let mut ranks = Vec::new();
    let mut attempts = 0;
    while ranks.len() < 2 {
        attempts += 1;
        if attempts > zt.widened.max(8) {
            return Err(LinalgError::SamplingExhausted);
        }
        let b = zt.random_point(&mut rng, &vars, &angles);
        if let Ok(r) = m.evaluate(&b) {
            ranks.push(r.rank());
        }
    }
    if ranks[0] == ranks[1] {
        return Ok(GenericRank {
            rank: ranks[0],
            stratified: false,
        });
    }
    let mut extra = 0;
    while extra < 4 && attempts < zt.widened.max(8) * 2 {
        attempts += 1;
        let b = zt.random_point(&mut rng, &vars, &angles);
        if let Ok(r) = m.evaluate(&b) {
            ranks.push(r.rank());
            extra += 1;
        }
    }
    Ok(GenericRank {
        rank: ranks.into_iter().max().unwrap_or(0),
        stratified: true,
    })
}

pub fn generic_rank(m: &SymMatrix) -> Result<GenericRank, LinalgError> {
    generic_rank_with(m, &ZeroTester::default())
}

pub const PFAFFIAN_LIMIT: usize = 10;

pub fn pfaffian(m: &SymMatrix) -> Result<Expr, LinalgError> {
    pfaffian_with_limit(m, PFAFFIAN_LIMIT)
}

/// Pfaffian by expansion along the first row.
pub fn pfaffian_with_limit(m: &SymMatrix, limit: usize) -> Result<Expr, LinalgError> {
    m.check_antisymmetric()?;
    let n = m.rows();
    if n % 2 == 1 {
        return Err(LinalgError::OddDimension(n));
    }
    if n > limit {
        return Err(LinalgError::TooLarge { n, limit });
    }
    let idx: Vec<usize> = (0..n).collect();
    Ok(pf(m, &idx))
}

fn pf(m: &SymMatrix, idx: &[usize]) -> Expr {
    if idx.is_empty() {
        return Expr::one();
    }
    let i = idx[0];
    let mut acc = Expr::zero();
    for k in 1..idx.len() {
        let a = &m[(i, idx[k])];
        if a.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..]
            .iter()
            .enumerate()
            .filter(|&(p, _)| p + 1 != k)
            .map(|(_, &v)| v)
            .collect();
        let sub = pf(m, &rest);
        if sub.is_zero() {
            continue;
        }
        let term = a * &sub;
        acc = if k % 2 == 1 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// `D - C A^-1 B` for the split `[[A, B], [C, D]]` at index `r`.
pub fn schur_complement_with(m: &SymMatrix, r: usize, zt: &ZeroTester) -> Result<SymMatrix, LinalgError> {
    require_square(m)?;
    let n = m.rows();
    if r > n {
        return Err(LinalgError::DimensionMismatch(format!("split {r} beyond dimension {n}")));
    }
    let lead: Vec<usize> = (0..r).collect();
    let tail: Vec<usize> = (r..n).collect();
    let a = m.select(&lead, &lead);
    let b = m.select(&lead, &tail);
    let c = m.select(&tail, &lead);
    let d = m.select(&tail, &tail);
    let ainv = inverse_with(&a, zt).map_err(|e| match e {
        LinalgError::Singular => LinalgError::SingularBlock,
        other => other,
    })?;
    let s = d.sub(&c.mul(&ainv)?.mul(&b)?)?;
    if m.is_flagged_antisymmetric() {
        return s.into_antisymmetric();
    }
    Ok(s)
}

pub fn schur_complement(m: &SymMatrix, r: usize) -> Result<SymMatrix, LinalgError> {
    schur_complement_with(m, r, &ZeroTester::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn m(rows: &[&[&str]]) -> SymMatrix {
        let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
        SymMatrix::parse_rows(&rows).unwrap()
    }

    #[test]
    fn symbolic_determinant() {
        let a = m(&[&["a", "b"], &["c", "d"]]);
        assert_eq!(determinant(&a).unwrap(), parse("a*d - b*c").unwrap());
        assert_eq!(determinant(&SymMatrix::zeros(0, 0)).unwrap(), Expr::one());
    }

    #[test]
    fn pythagorean_determinant() {
        let r = m(&[&["cos(t)", "-sin(t)"], &["sin(t)", "cos(t)"]]);
        assert!(determinant(&r).unwrap().is_one());
    }

    #[test]
    fn odd_antisymmetric_is_singular() {
        let a = m(&[&["0", "x", "y"], &["-x", "0", "z"], &["-y", "-z", "0"]])
            .into_antisymmetric()
            .unwrap();
        assert!(determinant(&a).unwrap().is_zero());
        assert!(matches!(pfaffian(&a), Err(LinalgError::OddDimension(_))));
    }

    #[test]
    fn pfaffian_squares_to_determinant() {
        let a = m(&[
            &["0", "a", "b", "c"],
            &["-a", "0", "d", "e"],
            &["-b", "-d", "0", "f"],
            &["-c", "-e", "-f", "0"],
        ])
        .into_antisymmetric()
        .unwrap();
        let pf = pfaffian(&a).unwrap();
        assert_eq!(pf, parse("a*f - b*e + c*d").unwrap());
        assert_eq!(&pf * &pf, determinant(&a).unwrap());
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&["k", "1"], &["x", "2"]]);
        let inv = inverse(&a).unwrap();
        assert!(a.mul(&inv).unwrap().is_identity());
        assert_eq!(inv.get(0, 0), &parse("2/(2*k - x)").unwrap());
        assert!(matches!(inverse(&m(&[&["x", "x"], &["1", "1"]])), Err(LinalgError::Singular)));
    }

    #[test]
    fn kernel_annihilates() {
        let a = m(&[&["1", "x", "k"], &["2", "2*x", "2*k"]]);
        let ker = kernel(&a).unwrap();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(a.mul_vec(v).unwrap().iter().all(Expr::is_zero));
        }
        assert_eq!(rank_with(&a, &ZeroTester::default()).unwrap(), 1);
    }

    #[test]
    fn schur_block() {
        let a = m(&[&["2", "0", "1"], &["0", "4", "1"], &["1", "1", "k"]]);
        let s = schur_complement(&a, 2).unwrap();
        assert_eq!(s.get(0, 0), &parse("k - 3/4").unwrap());
    }

    #[test]
    fn generic_rank_of_parametric() {
        let a = m(&[&["k", "1"], &["k^2", "k"]]);
        assert_eq!(generic_rank(&a).unwrap().rank, 1);
    }
}
