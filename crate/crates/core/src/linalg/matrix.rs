use std::fmt;
use std::ops::{Index, IndexMut};

use crate::expr::{Bindings, EvalError, Expr};

use super::rational::RatMatrix;
use super::LinalgError;

/// Dense matrix of symbolic entries, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Expr>,
    antisymmetric: bool,
}

impl SymMatrix {
    pub fn zeros(rows: usize, cols: usize) -> SymMatrix {
        SymMatrix {
            rows,
            cols,
            data: vec![Expr::zero(); rows * cols],
            antisymmetric: false,
        }
    }

    pub fn identity(n: usize) -> SymMatrix {
        let mut m = SymMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Expr::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Expr>>) -> Result<SymMatrix, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        Ok(SymMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
            antisymmetric: false,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Expr) -> SymMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        SymMatrix {
            rows,
            cols,
            data,
            antisymmetric: false,
        }
    }

    /// Parses every entry with the plain expression grammar.
    pub fn parse_rows(rows: &[Vec<String>]) -> Result<SymMatrix, crate::expr::ParseError> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| crate::expr::parse(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SymMatrix::from_rows(parsed).expect("rectangular input"))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_flagged_antisymmetric(&self) -> bool {
        self.antisymmetric
    }

    /// Marks the matrix antisymmetric after checking it.
    pub fn into_antisymmetric(mut self) -> Result<SymMatrix, LinalgError> {
        self.check_antisymmetric()?;
        self.antisymmetric = true;
        Ok(self)
    }

    /// Verifies `m[i][j] + m[j][i] = 0` and a zero diagonal.
    pub fn check_antisymmetric(&self) -> Result<(), LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        for i in 0..self.rows {
            for j in i..self.cols {
                if !(&self[(i, j)] + &self[(j, i)]).is_zero() {
                    return Err(LinalgError::NotAntisymmetric { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.check_antisymmetric().is_ok()
    }

    pub fn get(&self, i: usize, j: usize) -> &Expr {
        &self[(i, j)]
    }

    pub fn row(&self, i: usize) -> &[Expr] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Expr> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &Expr> {
        self.data.iter()
    }

    pub fn to_rows(&self) -> Vec<Vec<Expr>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(Expr::to_string).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Expr::is_zero)
    }

    pub fn transpose(&self) -> SymMatrix {
        let mut t = SymMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone());
        t.antisymmetric = self.antisymmetric;
        t
    }

    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> SymMatrix {
        SymMatrix::from_fn(self.rows, self.cols, |i, j| f(&self[(i, j)]))
    }

    pub fn scale(&self, c: &Expr) -> SymMatrix {
        let mut m = self.map(|e| e * c);
        m.antisymmetric = self.antisymmetric;
        m
    }

    pub fn add(&self, other: &SymMatrix) -> Result<SymMatrix, LinalgError> {
        self.same_shape(other)?;
        Ok(SymMatrix::from_fn(self.rows, self.cols, |i, j| {
            &self[(i, j)] + &other[(i, j)]
        }))
    }

    pub fn sub(&self, other: &SymMatrix) -> Result<SymMatrix, LinalgError> {
        self.same_shape(other)?;
        Ok(SymMatrix::from_fn(self.rows, self.cols, |i, j| {
            &self[(i, j)] - &other[(i, j)]
        }))
    }

    pub fn mul(&self, other: &SymMatrix) -> Result<SymMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(SymMatrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols)
                .filter(|&k| !self[(i, k)].is_zero() && !other[(k, j)].is_zero())
                .map(|k| &self[(i, k)] * &other[(k, j)])
                .sum()
        }))
    }

    pub fn mul_vec(&self, v: &[Expr]) -> Result<Vec<Expr>, LinalgError> {
        if self.cols != v.len() {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = &self[(i, j)];
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> SymMatrix {
        SymMatrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Simultaneous row/column permutation: entry `(i, j)` of the result is
    /// `self[(perm[i], perm[j])]`.
    pub fn permute(&self, perm: &[usize]) -> SymMatrix {
        let mut m = self.select(perm, perm);
        m.antisymmetric = self.antisymmetric;
        m
    }

    /// Bordered block matrix `[[self, b], [-b^T, 0]]`.
    pub fn border(&self, b: &SymMatrix) -> Result<SymMatrix, LinalgError> {
        if !self.is_square() || b.rows != self.rows {
            return Err(LinalgError::DimensionMismatch("border shape".into()));
        }
        let n = self.rows;
        let m = b.cols;
        let mut out = SymMatrix::from_fn(n + m, n + m, |i, j| match (i < n, j < n) {
            (true, true) => self[(i, j)].clone(),
            (true, false) => b[(i, j - n)].clone(),
            (false, true) => -&b[(j, i - n)],
            (false, false) => Expr::zero(),
        });
        out.antisymmetric = self.antisymmetric;
        Ok(out)
    }

    /// Exact evaluation of every entry at a rational point.
    pub fn evaluate(&self, b: &Bindings) -> Result<RatMatrix, EvalError> {
        let mut rows = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            rows.push(
                self.row(i)
                    .iter()
                    .map(|e| e.evaluate_exact(b))
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        Ok(RatMatrix::from_rows(rows))
    }

    fn same_shape(&self, other: &SymMatrix) -> Result<(), LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for SymMatrix {
    type Output = Expr;
    fn index(&self, (i, j): (usize, usize)) -> &Expr {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for SymMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Expr {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        self.antisymmetric = false;
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SymMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(Expr::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn e(s: &str) -> Expr {
        parse(s).unwrap()
    }

    #[test]
    fn border_shape() {
        let f = SymMatrix::from_rows(vec![vec![e("0"), e("x")], vec![e("-x"), e("0")]])
            .unwrap()
            .into_antisymmetric()
            .unwrap();
        let b = SymMatrix::from_rows(vec![vec![e("1")], vec![e("y")]]).unwrap();
        let g = f.border(&b).unwrap();
        assert_eq!((g.rows(), g.cols()), (3, 3));
        assert!(g.is_antisymmetric());
        assert_eq!(g.get(2, 1), &e("-y"));
        assert!(g.get(2, 2).is_zero());
    }

    #[test]
    fn rejects_asymmetric() {
        let m = SymMatrix::from_rows(vec![vec![e("0"), e("x")], vec![e("x"), e("0")]]).unwrap();
        assert!(matches!(m.into_antisymmetric(), Err(LinalgError::NotAntisymmetric { .. })));
    }

    #[test]
    fn permute_and_transpose() {
        let m = SymMatrix::from_fn(2, 2, |i, j| Expr::int((10 * i + j) as i64));
        let p = m.permute(&[1, 0]);
        assert_eq!(p.get(0, 0), &Expr::int(11));
        assert_eq!(m.transpose().get(0, 1), &Expr::int(10));
    }
}
