//! Linear-term elimination.
//!
//! A nonzero linear term is folded into the quadratic form by appending one
//! auxiliary variable pinned to 1 by its own box interval. The enlarged
//! matrix is `[[Q, q/2], [q'/2, 0]]`, so the rank grows by at most 2 and
//! objective values are preserved at `(x, 1)`.

use thiserror::Error;

use crate::matrix::Matrix;
use crate::model::QpInstance;
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq)]
pub enum HomogenizeError {
    #[error("auxiliary coordinate is {got}, expected 1: solver produced an invalid point")]
    AuxiliaryNotOne { got: String },
    #[error("point length {got} does not match homogenized size {expected}")]
    PointLength { expected: usize, got: usize },
}

/// An instance with zero linear term, plus what it took to get there.
#[derive(Debug, Clone)]
pub struct HomogenizedInstance<S> {
    inner: QpInstance<S>,
    original_n: usize,
    was_homogenized: bool,
}

impl<S: Scalar> HomogenizedInstance<S> {
    pub fn inner(&self) -> &QpInstance<S> {
        &self.inner
    }

    pub fn original_n(&self) -> usize {
        self.original_n
    }

    pub fn was_homogenized(&self) -> bool {
        self.was_homogenized
    }

    /// Strips the auxiliary coordinate off a feasible point of `inner`.
    pub fn project_solution(&self, x: &[S]) -> Result<Vec<S>, HomogenizeError> {
        if x.len() != self.inner.n() {
            return Err(HomogenizeError::PointLength {
                expected: self.inner.n(),
                got: x.len(),
            });
        }
        if !self.was_homogenized {
            return Ok(x.to_vec());
        }
        let aux = &x[self.original_n];
        let deviation = aux.clone() - S::one();
        // The auxiliary box is [1, 1]; anything else is an internal bug.
        if !deviation.treat_as_zero(1e-9) {
            return Err(HomogenizeError::AuxiliaryNotOne {
                got: aux.to_string(),
            });
        }
        Ok(x[..self.original_n].to_vec())
    }
}

/// Returns an equivalent instance whose linear term is zero.
pub fn hide_linear_term<S: Scalar>(inst: &QpInstance<S>) -> HomogenizedInstance<S> {
    let n = inst.n();
    if !inst.has_linear_term() {
        return HomogenizedInstance {
            inner: inst.clone(),
            original_n: n,
            was_homogenized: false,
        };
    }
    let half = S::from_fraction(1, 2);
    let q = inst.quadratic();
    let lin = inst.linear();
    let enlarged = Matrix::from_fn(n + 1, n + 1, |i, j| match (i == n, j == n) {
        (false, false) => q[(i, j)].clone(),
        (false, true) => half.clone() * &lin[i],
        (true, false) => half.clone() * &lin[j],
        (true, true) => S::zero(),
    });
    let mut lower = inst.lower().to_vec();
    let mut upper = inst.upper().to_vec();
    lower.push(S::one());
    upper.push(S::one());
    let inner = QpInstance::new(enlarged, vec![S::zero(); n + 1], lower, upper)
        .expect("homogenized instance is valid by construction");
    HomogenizedInstance {
        inner,
        original_n: n,
        was_homogenized: true,
    }
}
