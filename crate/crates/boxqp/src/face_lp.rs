//! Per-face stationarity: given one sign vector, build the affine hull of
//! the corresponding zonotope face and solve the feasibility LP whose
//! solutions are the stationary points of the reduced objective on it.
//!
//! A sign of `+1` fixes that coordinate at its upper bound, `-1` at its
//! lower bound, `0` leaves it free. With `G_A` the free columns of `G` and
//! `A` a basis of the orthogonal complement of their span, the face's
//! affine hull is `{y : Ay = Ab}` with `b` the image of the fixed part,
//! and the stationarity system is
//!
//! ```text
//!     A' lambda - 2 W G_A x_A = 2 W b,    lower_A <= x_A <= upper_A.
//! ```
//!
//! Any feasible point does the job: stationary points of a quadratic on an
//! affine subspace all share one objective value.

use thiserror::Error;

use crate::arrangement::{Sign, SignVector};
use crate::matrix::{null_space, Matrix};
use crate::model::QpInstance;
use crate::scalar::Scalar;
use crate::simplex::{feasible_point, Bound, FeasibilityProblem, PivotRule};

#[derive(Debug, Error, PartialEq)]
pub enum FaceLpError {
    #[error("assembled point violates bounds at index {index}: LP tolerance breach")]
    BoundViolation { index: usize },
}

/// The affine-hull data of one face.
#[derive(Debug, Clone)]
pub struct FaceSystem<S> {
    /// Indices with a zero sign, ascending. The face's free coordinates.
    pub free_idx: Vec<usize>,
    /// Values pinned onto the non-free coordinates, in index order.
    pub fixed_part: Vec<S>,
    /// Free columns of `G`, `2r x k`.
    pub free_map: Matrix<S>,
    /// Rows span the orthogonal complement of `free_map`'s column space.
    pub hull_basis: Matrix<S>,
    /// `G_b x_b`: image of the pinned part.
    pub offset: Vec<S>,
    /// Bounds restricted to the free coordinates.
    pub lower_free: Vec<S>,
    pub upper_free: Vec<S>,
    /// The sign vector this system was built from.
    pub sigma: SignVector,
}

/// Builds the face system for a realizable sign vector.
pub fn build_face_system<S: Scalar>(
    map: &Matrix<S>,
    lower: &[S],
    upper: &[S],
    sigma: &SignVector,
) -> FaceSystem<S> {
    let n = map.cols();
    assert_eq!(sigma.len(), n, "sign vector length mismatch");
    assert_eq!(lower.len(), n);
    assert_eq!(upper.len(), n);
    let dim = map.rows();

    let mut free_idx = Vec::new();
    let mut fixed_idx = Vec::new();
    let mut fixed_part = Vec::new();
    for (i, s) in sigma.signs().iter().enumerate() {
        match s {
            Sign::Zero => free_idx.push(i),
            Sign::Plus => {
                fixed_idx.push(i);
                fixed_part.push(upper[i].clone());
            }
            Sign::Minus => {
                fixed_idx.push(i);
                fixed_part.push(lower[i].clone());
            }
        }
    }
    let free_map = map.select_columns(&free_idx);
    let pinned_map = map.select_columns(&fixed_idx);
    let offset = pinned_map.matvec(&fixed_part);

    // rows of `hull_basis` span the orthogonal complement of the column
    // space of `free_map`: the null space of its transpose
    let complement = null_space(&free_map.transpose());
    let hull_basis = if complement.is_empty() {
        Matrix::zeros(0, dim)
    } else {
        Matrix::from_rows(complement)
    };

    FaceSystem {
        lower_free: free_idx.iter().map(|&i| lower[i].clone()).collect(),
        upper_free: free_idx.iter().map(|&i| upper[i].clone()).collect(),
        free_idx,
        fixed_part,
        free_map,
        hull_basis,
        offset,
        sigma: sigma.clone(),
    }
}

/// Solves the stationarity LP for one face. Returns the free coordinates
/// of some stationary point, or `None` when the face has none.
pub fn stationary_point<S: Scalar>(fs: &FaceSystem<S>, coupling: &Matrix<S>) -> Option<Vec<S>> {
    stationary_point_with_rule(fs, coupling, PivotRule::Bland)
}

/// Same LP under a caller-chosen pivot rule. Different rules may return
/// different points, never different objective values.
pub fn stationary_point_with_rule<S: Scalar>(
    fs: &FaceSystem<S>,
    coupling: &Matrix<S>,
    rule: PivotRule,
) -> Option<Vec<S>> {
    let dim = coupling.rows();
    let k = fs.free_idx.len();
    let l = fs.hull_basis.rows();

    let two = S::from_int(2);
    let double_coupling = coupling.scale(&two);
    let coupled_free = double_coupling.matmul(&fs.free_map); // 2W G_A, dim x k
    let rhs = double_coupling.matvec(&fs.offset); // 2W b

    // variables: lambda (free, l of them) then x_A (boxed, k of them)
    let eq_lhs = Matrix::from_fn(dim, l + k, |i, j| {
        if j < l {
            fs.hull_basis[(j, i)].clone() // A', transposed on the fly
        } else {
            -coupled_free[(i, j - l)].clone()
        }
    });
    let mut lower: Vec<Bound<S>> = vec![None; l];
    let mut upper: Vec<Bound<S>> = vec![None; l];
    lower.extend(fs.lower_free.iter().cloned().map(Some));
    upper.extend(fs.upper_free.iter().cloned().map(Some));

    let problem = FeasibilityProblem {
        eq_lhs,
        eq_rhs: rhs,
        lower,
        upper,
    };
    feasible_point(&problem, rule).map(|point| point[l..].to_vec())
}

/// A stationary point in the original coordinates, with its value.
#[derive(Debug, Clone)]
pub struct StationaryCandidate<S> {
    pub point: Vec<S>,
    pub value: S,
    pub sigma: SignVector,
}

/// Weaves free coordinates back among the pinned ones and evaluates.
pub fn assemble_candidate<S: Scalar>(
    fs: &FaceSystem<S>,
    free_values: &[S],
    inst: &QpInstance<S>,
) -> Result<StationaryCandidate<S>, FaceLpError> {
    assert_eq!(free_values.len(), fs.free_idx.len(), "free part length mismatch");
    let n = inst.n();
    let mut point = vec![S::zero(); n];
    let mut fixed_iter = fs.fixed_part.iter();
    let mut free_pos = 0;
    for (i, slot) in point.iter_mut().enumerate() {
        if free_pos < fs.free_idx.len() && fs.free_idx[free_pos] == i {
            *slot = free_values[free_pos].clone();
            free_pos += 1;
        } else {
            *slot = fixed_iter.next().expect("fixed part exhausted").clone();
        }
    }
    // float-mode LPs can overshoot a bound by a hair; clamp within the
    // feasibility tolerance, reject anything worse
    let slack = if S::EXACT { 0.0 } else { crate::simplex::LP_FEAS_TOL };
    for (i, v) in point.iter_mut().enumerate() {
        if *v < inst.lower()[i] {
            let gap = inst.lower()[i].clone() - v.clone();
            if gap.treat_as_zero(slack * (1.0 + inst.lower()[i].to_f64_lossy().abs())) {
                *v = inst.lower()[i].clone();
            } else {
                return Err(FaceLpError::BoundViolation { index: i });
            }
        } else if *v > inst.upper()[i] {
            let gap = v.clone() - inst.upper()[i].clone();
            if gap.treat_as_zero(slack * (1.0 + inst.upper()[i].to_f64_lossy().abs())) {
                *v = inst.upper()[i].clone();
            } else {
                return Err(FaceLpError::BoundViolation { index: i });
            }
        }
    }
    let value = inst.evaluate(&point).expect("assembled point has instance length");
    Ok(StationaryCandidate {
        point,
        value,
        sigma: fs.sigma.clone(),
    })
}

/// Generic feasibility solve: a point satisfying `eq_lhs x = eq_rhs` and
/// `lower <= x <= upper` (entries of `None` are unbounded), or `None`.
pub fn lp_feasible<S: Scalar>(
    eq_lhs: Matrix<S>,
    eq_rhs: Vec<S>,
    lower: Vec<Bound<S>>,
    upper: Vec<Bound<S>>,
) -> Option<Vec<S>> {
    feasible_point(
        &FeasibilityProblem {
            eq_lhs,
            eq_rhs,
            lower,
            upper,
        },
        PivotRule::Bland,
    )
}
