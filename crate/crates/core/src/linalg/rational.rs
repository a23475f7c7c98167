use num_rational::BigRational;
use num_traits::{One, Zero};

/// Dense matrix over Q, the target of exact evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigRational>>,
}

impl RatMatrix {
    pub fn from_rows(data: Vec<Vec<BigRational>>) -> RatMatrix {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        RatMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i][j]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigRational>> {
        self.data.clone()
    }

    /// Row echelon form by Gaussian elimination; returns the pivot columns
    /// and the sign of the row permutation.
    fn echelon(&self) -> (Vec<Vec<BigRational>>, Vec<usize>, bool) {
        let mut a = self.data.clone();
        let mut pivots = Vec::new();
        let mut negate = false;
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            if p != r {
                a.swap(p, r);
                negate = !negate;
            }
            for i in r + 1..self.rows {
                if a[i][c].is_zero() {
                    continue;
                }
                let f = &a[i][c] / &a[r][c];
                for j in c..self.cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots, negate)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    pub fn determinant(&self) -> BigRational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let (a, pivots, negate) = self.echelon();
        if pivots.len() < self.rows {
            return BigRational::zero();
        }
        let mut d = BigRational::one();
        for (i, row) in a.iter().enumerate() {
            d *= &row[i];
        }
        if negate {
            -d
        } else {
            d
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().flatten().all(Zero::is_zero)
    }
}
