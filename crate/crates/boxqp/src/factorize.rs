//! Rank factorization `Q = U' V`, the reduced quadratic form it induces,
//! and minimal-rank representations of a quadratic form.
//!
//! The reduced form: with `G` = `U` stacked over `V` (a `2r x n` map) and
//! `W` the half-swap coupling matrix, `x' Q x = (Gx)' W (Gx)` identically.
//! All solver geometry happens in the `2r`-dimensional image of `G`.


use crate::matrix::{rank, rref, Matrix, RANK_TOL};
use crate::scalar::{Rational, Scalar};

/// Rank factorization of a square matrix.
#[derive(Debug, Clone)]
pub struct Factorization<S> {
    rank: usize,
    left: Matrix<S>,
    right: Matrix<S>,
}

/// The data of the reduced problem: `map` is `2r x n`, `coupling` is
/// `2r x 2r` with `y' coupling y = u' v` for `y = (u; v)`.
#[derive(Debug, Clone)]
pub struct Reduction<S> {
    pub map: Matrix<S>,
    pub coupling: Matrix<S>,
}

impl<S: Scalar> Factorization<S> {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `U`, with `Q = U' V`. `rank x n`.
    pub fn left(&self) -> &Matrix<S> {
        &self.left
    }

    /// `V`, with `Q = U' V`. `rank x n`.
    pub fn right(&self) -> &Matrix<S> {
        &self.right
    }

    /// Builds `(G, W)`. `None` for the zero matrix, which has no reduced
    /// form; callers must short-circuit that case.
    pub fn reduction(&self) -> Option<Reduction<S>> {
        if self.rank == 0 {
            return None;
        }
        let map = Matrix::vstack(&self.left, &self.right);
        let r = self.rank;
        let half = S::from_fraction(1, 2);
        let coupling = Matrix::from_fn(2 * r, 2 * r, |i, j| {
            if i + r == j || j + r == i {
                half.clone()
            } else {
                S::zero()
            }
        });
        Some(Reduction { map, coupling })
    }
}

/// Factorizes `Q = U' V` with `U, V` of `rank(Q)` rows each.
///
/// `U'` is the pivot columns of `Q`; `V` the nonzero rows of the reduced
/// echelon form. Exact mode pivots on the first nonzero entry, float mode
/// on the largest magnitude with a relative rank threshold.
pub fn rank_factorize<S: Scalar>(q: &Matrix<S>) -> Factorization<S> {
    assert!(q.is_square(), "rank factorization expects a square matrix");
    let n = q.cols();
    let reduced = rref(q);
    let r = reduced.rank();
    let left = q.select_columns(&reduced.pivot_cols).transpose();
    let right = Matrix::from_fn(r, n, |i, j| reduced.reduced[(i, j)].clone());
    Factorization {
        rank: r,
        left,
        right,
    }
}

/// Inertia of the symmetric part of a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub fn n(&self) -> usize {
        self.positive + self.negative + self.zero
    }

    /// The smallest rank any matrix representing the form can have.
    pub fn min_form_rank(&self) -> usize {
        self.positive.max(self.negative)
    }
}

/// `(Q + Q') / 2`.
pub fn symmetric_part<S: Scalar>(q: &Matrix<S>) -> Matrix<S> {
    q.add(&q.transpose()).scale(&S::from_fraction(1, 2))
}

/// Congruence diagonalization `S = T D T'` of a symmetric matrix.
///
/// Returns `(T, diag(D))`. Uses symmetric Gaussian elimination; an
/// all-zero diagonal block is broken by adding one row/column pair into
/// another, which keeps everything rational.
fn congruence_diagonalize<S: Scalar>(sym: &Matrix<S>) -> (Matrix<S>, Vec<S>) {
    let n = sym.rows();
    let mut a = sym.clone();
    let mut t = Matrix::identity(n);
    let threshold = if S::EXACT { 0.0 } else { RANK_TOL * a.max_abs_f64() };

    let mut k = 0;
    while k < n {
        let diag_pivot = if S::EXACT {
            (k..n).find(|&i| !a[(i, i)].is_zero())
        } else {
            (k..n)
                .filter(|&i| !a[(i, i)].treat_as_zero(threshold))
                .max_by(|&x, &y| {
                    a[(x, x)]
                        .to_f64_lossy()
                        .abs()
                        .total_cmp(&a[(y, y)].to_f64_lossy().abs())
                })
        };
        if let Some(i) = diag_pivot {
            // symmetric swap i <-> k; T picks up the inverse column swap
            a.swap_rows(i, k);
            a.swap_cols(i, k);
            t.swap_cols(i, k);
            for j in k + 1..n {
                let f = a[(j, k)].clone() / a[(k, k)].clone();
                if f.is_zero() {
                    continue;
                }
                a.sub_scaled_row(j, k, &f);
                a.sub_scaled_col(j, k, &f);
                // E' = R E  =>  T = E'^-1 = T R^-1, a column update
                for row in 0..n {
                    let delta = f.clone() * &t[(row, j)];
                    t[(row, k)] += delta;
                }
            }
            k += 1;
            continue;
        }
        // all active diagonal entries vanish; look for an off-diagonal one
        let mut off = None;
        'search: for i in k..n {
            for j in i + 1..n {
                if !a[(i, j)].treat_as_zero(threshold) {
                    off = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((i, j)) = off else {
            break; // remaining block is zero
        };
        a.swap_rows(i, k);
        a.swap_cols(i, k);
        t.swap_cols(i, k);
        a.swap_rows(j, k + 1);
        a.swap_cols(j, k + 1);
        t.swap_cols(j, k + 1);
        // rows k, k+1 have zero diagonal and a nonzero coupling; merging
        // row/col k+1 into k makes a[(k,k)] = 2 a[(k,k+1)] != 0
        for col in 0..n {
            let v = a[(k + 1, col)].clone();
            a[(k, col)] += v;
        }
        for row in 0..n {
            let v = a[(row, k + 1)].clone();
            a[(row, k)] += v;
        }
        for row in 0..n {
            let v = t[(row, k)].clone();
            t[(row, k + 1)] -= v;
        }
    }
    let diag = (0..n).map(|i| a[(i, i)].clone()).collect();
    (t, diag)
}

fn jacobi_eigenvalues(sym: &Matrix<f64>) -> Vec<f64> {
    let n = sym.rows();
    let mut a = sym.clone();
    for _sweep in 0..200 {
        let mut largest = 0.0f64;
        let (mut p, mut q) = (0, 0);
        for i in 0..n {
            for j in i + 1..n {
                if a[(i, j)].abs() > largest {
                    largest = a[(i, j)].abs();
                    p = i;
                    q = j;
                }
            }
        }
        if largest <= 1e-14 * (1.0 + a.max_abs_f64()) {
            break;
        }
        let theta = 0.5 * (2.0 * a[(p, q)]).atan2(a[(p, p)] - a[(q, q)]);
        let (s, c) = theta.sin_cos();
        for k in 0..n {
            let akp = a[(k, p)];
            let akq = a[(k, q)];
            a[(k, p)] = c * akp + s * akq;
            a[(k, q)] = -s * akp + c * akq;
        }
        for k in 0..n {
            let apk = a[(p, k)];
            let aqk = a[(q, k)];
            a[(p, k)] = c * apk + s * aqk;
            a[(q, k)] = -s * apk + c * aqk;
        }
    }
    (0..n).map(|i| a[(i, i)]).collect()
}

/// Sylvester inertia of the symmetric part of `q`.
///
/// Exact mode diagonalizes by congruence, which stays rational. Float mode
/// counts eigenvalue signs with a relative threshold.
pub fn signature<S: Scalar>(q: &Matrix<S>) -> Signature {
    let sym = symmetric_part(q);
    let (positive, negative, zero) = if S::EXACT {
        let (_, diag) = congruence_diagonalize(&sym);
        let p = diag.iter().filter(|d| d.is_positive()).count();
        let m = diag.iter().filter(|d| d.is_negative()).count();
        (p, m, diag.len() - p - m)
    } else {
        let eigs = jacobi_eigenvalues(&sym.map(|v| v.to_f64_lossy()));
        let threshold = RANK_TOL * sym.max_abs_f64();
        let p = eigs.iter().filter(|&&e| e > threshold).count();
        let m = eigs.iter().filter(|&&e| e < -threshold).count();
        (p, m, eigs.len() - p - m)
    };
    Signature {
        positive,
        negative,
        zero,
    }
}

/// Square root if the value is a perfect square (exact mode) or any
/// nonnegative value (float mode).
fn scalar_sqrt<S: Scalar>(v: &S) -> Option<S> {
    if v.is_negative() {
        return None;
    }
    if !S::EXACT {
        return Some(S::from_rational(
            &Rational::from_float(v.to_f64_lossy().sqrt())?,
        ));
    }
    let r = v.to_rational();
    let (num, den) = (r.numer(), r.denom());
    let sn = num.sqrt();
    let sd = den.sqrt();
    if &(&sn * &sn) == num && &(&sd * &sd) == den {
        Some(S::from_rational(&Rational::new(sn, sd)))
    } else {
        None
    }
}

/// A matrix inducing the same quadratic form as `q` with rank as close to
/// `max(p, q)` of the signature as the arithmetic allows.
///
/// Diagonalize the symmetric part by congruence, then replace each
/// pairable (positive, negative) diagonal pair `(a, -b)` by the rank-one
/// block `[[a, t], [-t, -b]]` with `t^2 = a b`. In exact arithmetic such a
/// `t` exists only when `a b` is a rational square, so opposite-sign pairs
/// are matched greedily among those; in float mode every pair matches.
pub fn minimal_rank_matrix<S: Scalar>(q: &Matrix<S>) -> Matrix<S> {
    let sym = symmetric_part(q);
    let n = sym.rows();
    let (t, diag) = congruence_diagonalize(&sym);
    let threshold = if S::EXACT { 0.0 } else { RANK_TOL * sym.max_abs_f64() };
    let pos: Vec<usize> = (0..n)
        .filter(|&i| !diag[i].treat_as_zero(threshold) && diag[i].is_positive())
        .collect();
    let neg: Vec<usize> = (0..n)
        .filter(|&i| !diag[i].treat_as_zero(threshold) && diag[i].is_negative())
        .collect();

    let mut in_diag_basis = Matrix::zeros(n, n);
    let mut neg_used = vec![false; neg.len()];
    let mut pos_used = vec![false; pos.len()];
    for (pi, &i) in pos.iter().enumerate() {
        for (nj, &j) in neg.iter().enumerate() {
            if neg_used[nj] {
                continue;
            }
            let product = diag[i].clone() * -diag[j].clone();
            if let Some(root) = scalar_sqrt(&product) {
                in_diag_basis[(i, i)] = diag[i].clone();
                in_diag_basis[(j, j)] = diag[j].clone();
                in_diag_basis[(i, j)] = root.clone();
                in_diag_basis[(j, i)] = -root;
                pos_used[pi] = true;
                neg_used[nj] = true;
                break;
            }
        }
    }
    for (pi, &i) in pos.iter().enumerate() {
        if !pos_used[pi] {
            in_diag_basis[(i, i)] = diag[i].clone();
        }
    }
    for (nj, &j) in neg.iter().enumerate() {
        if !neg_used[nj] {
            in_diag_basis[(j, j)] = diag[j].clone();
        }
    }
    t.matmul(&in_diag_basis).matmul(&t.transpose())
}

/// Convenience wrapper: rank of the matrix `minimal_rank_matrix` returns.
pub fn achieved_min_rank<S: Scalar>(q: &Matrix<S>) -> usize {
    rank(&minimal_rank_matrix(q))
}
