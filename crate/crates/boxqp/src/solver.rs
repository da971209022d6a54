//! End-to-end solve: eliminate the linear term, factorize, enumerate the
//! faces of the reduced feasible region, test each face's stationarity LP,
//! keep the best candidate.
//!
//! The face loop is a deterministic map-reduce: candidates are compared by
//! value with ties broken toward the earliest face in enumeration order,
//! so the parallel path returns exactly the sequential result.

use std::time::Duration;

use rayon::prelude::*;

use crate::arrangement::{enumerate_covectors, Cell};
use crate::face_lp::{assemble_candidate, build_face_system, stationary_point_with_rule};
use crate::factorize::{minimal_rank_matrix, rank_factorize};
use crate::matrix::rank;
use crate::model::QpInstance;
use crate::homogenize::hide_linear_term;
use crate::scalar::Scalar;
use crate::simplex::PivotRule;

/// Solver knobs. Tolerances only matter in float mode.
#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Replace `Q` by a lower-rank matrix of the same quadratic form
    /// before factorizing. Only applies when the linear term is zero.
    pub use_minimal_rank: bool,
    /// Solve the per-face LPs on a thread pool.
    pub parallel_faces: bool,
    /// Float-mode LP feasibility tolerance.
    pub lp_feas_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            use_minimal_rank: false,
            parallel_faces: false,
            lp_feas_tol: crate::simplex::LP_FEAS_TOL,
        }
    }
}

/// Work counters for one solve. Wall time is informational and excluded
/// from equality so that determinism can be asserted on whole solutions.
#[derive(Debug, Clone, Default)]
pub struct SolveStats {
    pub faces_enumerated: u64,
    pub lps_solved: u64,
    pub lps_feasible: u64,
    pub rank_used: usize,
    pub wall: Duration,
}

impl PartialEq for SolveStats {
    fn eq(&self, other: &Self) -> bool {
        self.faces_enumerated == other.faces_enumerated
            && self.lps_solved == other.lps_solved
            && self.lps_feasible == other.lps_feasible
            && self.rank_used == other.rank_used
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution<S> {
    /// The maximum objective value.
    pub objective: S,
    /// A point attaining it.
    pub maximizer: Vec<S>,
    pub stats: SolveStats,
}

/// Constant objective: the quadratic part and the linear term both vanish.
/// Any feasible point is optimal; the lower corner is the convention.
pub fn handle_rank_zero<S: Scalar>(inst: &QpInstance<S>) -> Solution<S> {
    let point = inst.lower().to_vec();
    let objective = inst.evaluate(&point).expect("corner has instance length");
    Solution {
        objective,
        maximizer: point,
        stats: SolveStats::default(),
    }
}

struct FaceOutcome<S> {
    value: S,
    index: usize,
    point: Vec<S>,
    feasible: bool,
}

fn better<S: Scalar>(a: Option<FaceOutcome<S>>, b: Option<FaceOutcome<S>>) -> Option<FaceOutcome<S>> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => {
            // strictly-greater update in index order: the survivor is the
            // max value with the smallest face index
            if y.value > x.value || (y.value == x.value && y.index < x.index) {
                Some(y)
            } else {
                Some(x)
            }
        }
    }
}

/// Global maximum of `x' Q x + q' x` over the box.
pub fn solve<S: Scalar>(inst: &QpInstance<S>, opts: &SolverOptions) -> Solution<S> {
    assert!(opts.lp_feas_tol > 0.0, "tolerances must be positive");
    let started = std::time::Instant::now();

    // optional lower-rank representation of the same quadratic form
    let mut working = inst.clone();
    if opts.use_minimal_rank && !inst.has_linear_term() {
        let candidate = minimal_rank_matrix(inst.quadratic());
        if rank(&candidate) < rank(inst.quadratic()) {
            working = inst
                .with_quadratic(candidate)
                .expect("same-form replacement keeps the instance valid");
        }
    }

    let lifted = hide_linear_term(&working);
    let inner = lifted.inner();
    let factorization = rank_factorize(inner.quadratic());
    let Some(reduction) = factorization.reduction() else {
        let mut sol = handle_rank_zero(inst);
        sol.stats.wall = started.elapsed();
        return sol;
    };

    let cells = enumerate_covectors(&reduction.map);
    let faces_enumerated = cells.len() as u64;

    let evaluate_face = |(index, cell): (usize, &Cell<S>)| -> Option<FaceOutcome<S>> {
        let fs = build_face_system(&reduction.map, inner.lower(), inner.upper(), &cell.sigma);
        let free = stationary_point_with_rule(&fs, &reduction.coupling, PivotRule::Bland)?;
        match assemble_candidate(&fs, &free, inner) {
            Ok(candidate) => Some(FaceOutcome {
                value: candidate.value,
                index,
                point: candidate.point,
                feasible: true,
            }),
            Err(_) => {
                // float-mode tolerance breach; the face contributes nothing
                debug_assert!(!S::EXACT, "exact LP left its box");
                None
            }
        }
    };

    let (best, lps_feasible) = if opts.parallel_faces {
        cells
            .par_iter()
            .enumerate()
            .map(|item| {
                let outcome = evaluate_face(item);
                let feasible = outcome.is_some() as u64;
                (outcome, feasible)
            })
            .reduce(
                || (None, 0),
                |(a, ca), (b, cb)| (better(a, b), ca + cb),
            )
    } else {
        let mut best = None;
        let mut feasible = 0u64;
        for item in cells.iter().enumerate() {
            let outcome = evaluate_face(item);
            feasible += outcome.is_some() as u64;
            best = better(best, outcome);
        }
        (best, feasible)
    };

    let best = best.expect("the maximizer's face always has a feasible stationarity LP");
    debug_assert!(best.feasible);
    let maximizer = lifted
        .project_solution(&best.point)
        .expect("auxiliary coordinate is pinned to 1 by its bounds");
    let objective = inst
        .evaluate(&maximizer)
        .expect("projected point has instance length");

    Solution {
        objective,
        maximizer,
        stats: SolveStats {
            faces_enumerated,
            lps_solved: faces_enumerated,
            lps_feasible,
            rank_used: factorization.rank(),
            wall: started.elapsed(),
        },
    }
}
