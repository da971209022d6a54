//! Problem instances: maximize `x' Q x + q' x` over a box `lower <= x <= upper`.
//!
//! `Q` is stored exactly as given. The objective only depends on the
//! symmetric part of `Q`, but symmetrizing can increase the rank and the
//! rank drives the solver's cost, so no normalization is applied here.

use thiserror::Error;

use crate::matrix::{dot, Matrix};
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("dimension mismatch: {what} has {got} entries, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("bound violation at index {index}: lower exceeds upper")]
    BoundViolation { index: usize },
    #[error("non-finite entry in {what} at index {index}")]
    NonFinite { what: &'static str, index: usize },
    #[error("point length {got} does not match instance size {expected}")]
    PointLength { expected: usize, got: usize },
}

/// Validated immutable problem data.
#[derive(Debug, Clone, PartialEq)]
pub struct QpInstance<S> {
    n: usize,
    quadratic: Matrix<S>,
    linear: Vec<S>,
    lower: Vec<S>,
    upper: Vec<S>,
}

impl<S: Scalar> QpInstance<S> {
    /// Builds and validates an instance. `n` is taken from the bound vectors.
    pub fn new(
        quadratic: Matrix<S>,
        linear: Vec<S>,
        lower: Vec<S>,
        upper: Vec<S>,
    ) -> Result<Self, ModelError> {
        let n = lower.len();
        if upper.len() != n {
            return Err(ModelError::DimensionMismatch {
                what: "upper",
                expected: n,
                got: upper.len(),
            });
        }
        if linear.len() != n {
            return Err(ModelError::DimensionMismatch {
                what: "q",
                expected: n,
                got: linear.len(),
            });
        }
        if quadratic.rows() != n {
            return Err(ModelError::DimensionMismatch {
                what: "Q rows",
                expected: n,
                got: quadratic.rows(),
            });
        }
        if quadratic.cols() != n {
            return Err(ModelError::DimensionMismatch {
                what: "Q columns",
                expected: n,
                got: quadratic.cols(),
            });
        }
        for (what, vs) in [("q", &linear), ("lower", &lower), ("upper", &upper)] {
            if let Some(index) = vs.iter().position(|v| !v.is_finite_value()) {
                return Err(ModelError::NonFinite { what, index });
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !quadratic[(i, j)].is_finite_value() {
                    return Err(ModelError::NonFinite { what: "Q", index: i * n + j });
                }
            }
        }
        for i in 0..n {
            if lower[i] > upper[i] {
                return Err(ModelError::BoundViolation { index: i });
            }
        }
        Ok(QpInstance {
            n,
            quadratic,
            linear,
            lower,
            upper,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn quadratic(&self) -> &Matrix<S> {
        &self.quadratic
    }

    pub fn linear(&self) -> &[S] {
        &self.linear
    }

    pub fn lower(&self) -> &[S] {
        &self.lower
    }

    pub fn upper(&self) -> &[S] {
        &self.upper
    }

    pub fn has_linear_term(&self) -> bool {
        self.linear.iter().any(|v| !v.is_zero())
    }

    /// `Q + Q'`, the matrix of the objective's gradient `(Q + Q') x + q`.
    pub fn gradient_matrix(&self) -> Matrix<S> {
        self.quadratic.add(&self.quadratic.transpose())
    }

    /// Objective value `x' Q x + q' x`.
    pub fn evaluate(&self, x: &[S]) -> Result<S, ModelError> {
        if x.len() != self.n {
            return Err(ModelError::PointLength {
                expected: self.n,
                got: x.len(),
            });
        }
        let qx = self.quadratic.matvec(x);
        Ok(dot(x, &qx) + dot(&self.linear, x))
    }

    pub fn contains(&self, x: &[S]) -> bool {
        x.len() == self.n
            && (0..self.n).all(|i| self.lower[i] <= x[i] && x[i] <= self.upper[i])
    }

    /// Same instance with a different quadratic matrix (revalidated).
    pub fn with_quadratic(&self, quadratic: Matrix<S>) -> Result<Self, ModelError> {
        Self::new(
            quadratic,
            self.linear.clone(),
            self.lower.clone(),
            self.upper.clone(),
        )
    }
}

impl QpInstance<crate::scalar::Rational> {
    /// Float-mode copy of an exact instance.
    pub fn to_float(&self) -> QpInstance<f64> {
        QpInstance {
            n: self.n,
            quadratic: self.quadratic.map(|v| v.to_f64_lossy()),
            linear: self.linear.iter().map(|v| v.to_f64_lossy()).collect(),
            lower: self.lower.iter().map(|v| v.to_f64_lossy()).collect(),
            upper: self.upper.iter().map(|v| v.to_f64_lossy()).collect(),
        }
    }
}
