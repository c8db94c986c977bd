//! Small exact linear algebra over `BigRational`: rank-revealing row
//! reduction and solving (possibly singular) consistent systems.

use num::{BigRational, One, Signed, Zero};

pub type Matrix = Vec<Vec<BigRational>>;

/// Row reduction `E · A = R` of a square or rectangular matrix, kept so that
/// many right-hand sides can be solved against the same `A`.
///
/// Pivots are chosen as the first nonzero entry scanning columns left to
/// right, rows top to bottom, so the factorization is deterministic.
#[derive(Clone, Debug)]
pub struct RowReduction {
    rows: usize,
    cols: usize,
    /// `pivots[i]` is the pivot column of row `i` of `R`, for `i < rank`.
    pivots: Vec<usize>,
    /// The accumulated row operations `E`, `rows × rows`.
    transform: Matrix,
}

impl RowReduction {
    pub fn new(a: &Matrix) -> Self {
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        let mut r: Matrix = a.clone();
        let mut e: Matrix = (0..rows)
            .map(|i| {
                (0..rows)
                    .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                    .collect()
            })
            .collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..cols {
            if row == rows {
                break;
            }
            let Some(p) = (row..rows).find(|&i| !r[i][col].is_zero()) else {
                continue;
            };
            r.swap(row, p);
            e.swap(row, p);
            let inv = BigRational::one() / &r[row][col];
            scale_row(&mut r[row], &inv);
            scale_row(&mut e[row], &inv);
            let (pr, pe) = (r[row].clone(), e[row].clone());
            for i in 0..rows {
                if i == row || r[i][col].is_zero() {
                    continue;
                }
                let factor = r[i][col].clone();
                axpy_row(&mut r[i], &factor, &pr);
                axpy_row(&mut e[i], &factor, &pe);
            }
            pivots.push(col);
            row += 1;
        }
        Self {
            rows,
            cols,
            pivots,
            transform: e,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Solves `A x = b`, returning the basic solution with every free
    /// variable set to zero, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(b.len(), self.rows);
        let eb: Vec<BigRational> = self
            .transform
            .iter()
            .map(|row| dot(row, b))
            .collect();
        if eb[self.rank()..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut x = vec![BigRational::zero(); self.cols];
        for (i, &col) in self.pivots.iter().enumerate() {
            x[col] = eb[i].clone();
        }
        Some(x)
    }
}

fn scale_row(row: &mut [BigRational], factor: &BigRational) {
    for v in row.iter_mut() {
        if !v.is_zero() {
            *v = &*v * factor;
        }
    }
}

/// `target -= factor * source`.
fn axpy_row(target: &mut [BigRational], factor: &BigRational, source: &[BigRational]) {
    for (t, s) in target.iter_mut().zip(source) {
        if !s.is_zero() {
            *t = &*t - factor * s;
        }
    }
}

pub fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn mat_vec(a: &Matrix, x: &[BigRational]) -> Vec<BigRational> {
    a.iter().map(|row| dot(row, x)).collect()
}

/// Exact positive semidefiniteness test by symmetric Gaussian elimination
/// (an `LDLᵀ` sweep that allows zero pivots only with zero columns).
pub fn is_positive_semidefinite(a: &Matrix) -> bool {
    let n = a.len();
    let mut m = a.clone();
    for k in 0..n {
        let pivot = m[k][k].clone();
        if pivot.is_negative() {
            return false;
        }
        if pivot.is_zero() {
            if (k + 1..n).any(|j| !m[k][j].is_zero() || !m[j][k].is_zero()) {
                return false;
            }
            continue;
        }
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let factor = &m[i][k] / &pivot;
            let pivot_row = m[k].clone();
            axpy_row(&mut m[i], &factor, &pivot_row);
        }
    }
    true
}
