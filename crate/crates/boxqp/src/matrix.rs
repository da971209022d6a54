//! Dense matrices and Gaussian elimination over a generic [`Scalar`].
//!
//! Row-major storage. Elimination picks the first nonzero pivot in exact
//! mode (deterministic) and the largest magnitude in float mode, with a
//! relative rank threshold supplied by the caller.

use crate::scalar::Scalar;
use num::Zero;


#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(
            rows.iter().all(|r| r.len() == ncols),
            "ragged rows in matrix literal"
        );
        Matrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Matrix from integer literals, mostly for tests and examples.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| S::from_int(v)).collect())
                .collect(),
        )
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

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [S] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix<S> {
        Matrix::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn transpose(&self) -> Matrix<S> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn matmul(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = S::zero();
            for k in 0..self.cols {
                acc += self[(i, k)].clone() * &other[(k, j)];
            }
            acc
        })
    }

    pub fn matvec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "matvec shape mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// `self + other`.
    pub fn add(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() + &other[(i, j)]
        })
    }

    pub fn scale(&self, factor: &S) -> Matrix<S> {
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() * factor
        })
    }

    /// Stack `top` over `bottom`.
    pub fn vstack(top: &Matrix<S>, bottom: &Matrix<S>) -> Matrix<S> {
        assert_eq!(top.cols, bottom.cols, "vstack width mismatch");
        let mut data = Vec::with_capacity((top.rows + bottom.rows) * top.cols);
        data.extend_from_slice(&top.data);
        data.extend_from_slice(&bottom.data);
        Matrix {
            rows: top.rows + bottom.rows,
            cols: top.cols,
            data,
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn max_abs_f64(&self) -> f64 {
        self.data
            .iter()
            .map(|v| v.to_f64_lossy().abs())
            .fold(0.0, f64::max)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[to] -= factor * row[from]`.
    pub fn sub_scaled_row(&mut self, to: usize, from: usize, factor: &S) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let delta = factor.clone() * &self[(from, j)];
            self[(to, j)] -= delta;
        }
    }

    /// `col[to] -= factor * col[from]`.
    pub fn sub_scaled_col(&mut self, to: usize, from: usize, factor: &S) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let delta = factor.clone() * &self[(i, from)];
            self[(i, to)] -= delta;
        }
    }
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &S {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    assert_eq!(a.len(), b.len(), "dot length mismatch");
    let mut acc = S::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x.clone() * y;
    }
    acc
}

/// Result of reduction to reduced row echelon form.
pub struct Rref<S> {
    pub reduced: Matrix<S>,
    /// Pivot column per pivot row, in row order.
    pub pivot_cols: Vec<usize>,
}

impl<S> Rref<S> {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }
}

/// Relative zero threshold for float-mode elimination.
pub const RANK_TOL: f64 = 1e-9;

fn pick_pivot<S: Scalar>(m: &Matrix<S>, col: usize, from_row: usize, threshold: f64) -> Option<usize> {
    if S::EXACT {
        (from_row..m.rows()).find(|&i| !m[(i, col)].is_zero())
    } else {
        let (mut best, mut best_abs) = (None, threshold);
        for i in from_row..m.rows() {
            let a = m[(i, col)].to_f64_lossy().abs();
            if a > best_abs {
                best = Some(i);
                best_abs = a;
            }
        }
        best
    }
}

/// Reduced row echelon form, columns processed left to right.
pub fn rref<S: Scalar>(m: &Matrix<S>) -> Rref<S> {
    let mut a = m.clone();
    let threshold = if S::EXACT { 0.0 } else { RANK_TOL * a.max_abs_f64() };
    let mut pivot_cols = Vec::new();
    let mut next_row = 0;
    for col in 0..a.cols() {
        if next_row == a.rows() {
            break;
        }
        let Some(p) = pick_pivot(&a, col, next_row, threshold) else {
            continue;
        };
        a.swap_rows(next_row, p);
        let inv = S::one() / a[(next_row, col)].clone();
        for j in 0..a.cols() {
            let v = a[(next_row, j)].clone() * &inv;
            a[(next_row, j)] = v;
        }
        a[(next_row, col)] = S::one();
        for i in 0..a.rows() {
            if i != next_row {
                let f = a[(i, col)].clone();
                a.sub_scaled_row(i, next_row, &f);
                a[(i, col)] = S::zero();
            }
        }
        pivot_cols.push(col);
        next_row += 1;
    }
    Rref {
        reduced: a,
        pivot_cols,
    }
}

pub fn rank<S: Scalar>(m: &Matrix<S>) -> usize {
    rref(m).rank()
}

/// Basis of `{x : M x = 0}`, one vector per free column of the RREF.
pub fn null_space<S: Scalar>(m: &Matrix<S>) -> Vec<Vec<S>> {
    let n = m.cols();
    if m.rows() == 0 {
        return (0..n)
            .map(|j| {
                let mut e = vec![S::zero(); n];
                e[j] = S::one();
                e
            })
            .collect();
    }
    let r = rref(m);
    let mut is_pivot = vec![None; n];
    for (row, &col) in r.pivot_cols.iter().enumerate() {
        is_pivot[col] = Some(row);
    }
    let mut basis = Vec::new();
    for free in 0..n {
        if is_pivot[free].is_some() {
            continue;
        }
        let mut v = vec![S::zero(); n];
        v[free] = S::one();
        for (col, pivot_row) in is_pivot.iter().enumerate() {
            if let Some(row) = pivot_row {
                v[col] = -r.reduced[(*row, free)].clone();
            }
        }
        basis.push(v);
    }
    basis
}

/// General solve of `M x = b`: a particular solution plus a null-space
/// basis, or `None` when inconsistent. Free variables are set to zero.
pub fn solve_affine<S: Scalar>(m: &Matrix<S>, b: &[S]) -> Option<(Vec<S>, Vec<Vec<S>>)> {
    assert_eq!(m.rows(), b.len(), "solve shape mismatch");
    let n = m.cols();
    let mut aug = Matrix::from_fn(m.rows(), n + 1, |i, j| {
        if j < n {
            m[(i, j)].clone()
        } else {
            b[i].clone()
        }
    });
    let threshold = if S::EXACT { 0.0 } else { RANK_TOL * aug.max_abs_f64() };
    let mut pivot_of_col = vec![None; n];
    let mut next_row = 0;
    for col in 0..n {
        if next_row == aug.rows() {
            break;
        }
        let Some(p) = pick_pivot(&aug, col, next_row, threshold) else {
            continue;
        };
        aug.swap_rows(next_row, p);
        let inv = S::one() / aug[(next_row, col)].clone();
        for j in 0..aug.cols() {
            let v = aug[(next_row, j)].clone() * &inv;
            aug[(next_row, j)] = v;
        }
        for i in 0..aug.rows() {
            if i != next_row {
                let f = aug[(i, col)].clone();
                aug.sub_scaled_row(i, next_row, &f);
            }
        }
        pivot_of_col[col] = Some(next_row);
        next_row += 1;
    }
    // Inconsistent iff a zero row has nonzero rhs.
    for i in next_row..aug.rows() {
        if !aug[(i, n)].treat_as_zero(threshold) {
            return None;
        }
    }
    let mut particular = vec![S::zero(); n];
    for (col, row) in pivot_of_col.iter().enumerate() {
        if let Some(r) = row {
            particular[col] = aug[(*r, n)].clone();
        }
    }
    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![S::zero(); n];
        v[free] = S::one();
        for (col, row) in pivot_of_col.iter().enumerate() {
            if let Some(r) = row {
                v[col] = -aug[(*r, free)].clone();
            }
        }
        basis.push(v);
    }
    Some((particular, basis))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type M = Matrix<Rational>;

    #[test]
    fn rref_rank() {
        let m = M::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(rank(&m), 1);
        let m = M::from_int_rows(&[&[1, 0], &[0, 1]]);
        assert_eq!(rank(&m), 2);
        assert_eq!(rank(&M::zeros(3, 3)), 0);
    }

    #[test]
    fn null_space_orthogonal_to_rows() {
        let m = M::from_int_rows(&[&[1, 2, 3], &[0, 1, 1]]);
        let basis = null_space(&m);
        assert_eq!(basis.len(), 1);
        for row in 0..m.rows() {
            assert!(dot(m.row(row), &basis[0]).is_zero());
        }
    }

    #[test]
    fn null_space_with_no_rows_is_full() {
        let m = M::zeros(0, 3);
        assert_eq!(null_space(&m).len(), 3);
    }

    #[test]
    fn solve_affine_cases() {
        // unique
        let m = M::from_int_rows(&[&[2, 0], &[0, 4]]);
        let b = vec![Rational::from_int(2), Rational::from_int(8)];
        let (x, basis) = solve_affine(&m, &b).unwrap();
        assert_eq!(x, vec![Rational::from_int(1), Rational::from_int(2)]);
        assert!(basis.is_empty());
        // inconsistent
        let m = M::from_int_rows(&[&[1, 1], &[1, 1]]);
        let b = vec![Rational::from_int(0), Rational::from_int(1)];
        assert!(solve_affine(&m, &b).is_none());
        // underdetermined
        let m = M::from_int_rows(&[&[1, 1]]);
        let b = vec![Rational::from_int(3)];
        let (x, basis) = solve_affine(&m, &b).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(dot(m.row(0), &x), Rational::from_int(3));
    }

    #[test]
    fn matmul_identity() {
        let m = M::from_int_rows(&[&[1, 2], &[3, 4]]);
        assert_eq!(m.matmul(&M::identity(2)), m);
    }
}
