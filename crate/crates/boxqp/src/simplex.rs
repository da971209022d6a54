//! Phase-1 simplex: find a point satisfying equality constraints and
//! variable bounds, or report that none exists.
//!
//! Variables may be bounded on neither, one, or both sides. Internally
//! everything is shifted to `0 <= z <= width`; free variables are split
//! into two nonnegative halves. One artificial variable per row is driven
//! to zero. Exact mode uses Bland's rule end to end, so termination is
//! guaranteed; the largest-coefficient rule falls back to Bland after an
//! iteration cap.

use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// One-sided bound; `None` means unbounded on that side.
pub type Bound<S> = Option<S>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotRule {
    /// Smallest eligible index, entering and leaving.
    Bland,
    /// Most improving reduced cost; anti-cycling via Bland fallback.
    LargestCoefficient,
}

/// Equality system `eq_lhs x = eq_rhs` with `lower <= x <= upper`.
#[derive(Debug, Clone)]
pub struct FeasibilityProblem<S> {
    pub eq_lhs: Matrix<S>,
    pub eq_rhs: Vec<S>,
    pub lower: Vec<Bound<S>>,
    pub upper: Vec<Bound<S>>,
}

/// Float-mode feasibility tolerance on the residual objective.
pub const LP_FEAS_TOL: f64 = 1e-8;

const REDUCED_COST_EPS: f64 = 1e-9;
const PIVOT_EPS: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum VarState {
    Basic(usize),
    AtLower,
    AtUpper,
}

/// Internal column: original variable index, orientation, shift.
struct ColMap<S> {
    var: usize,
    negated: bool,
    offset: S,
}

struct Tableau<S> {
    t: Matrix<S>,
    rhs: Vec<S>,
    width: Vec<Option<S>>,
    state: Vec<VarState>,
    basis: Vec<usize>,
    n_struct: usize,
}

impl<S: Scalar> Tableau<S> {
    fn basic_values(&self) -> Vec<S> {
        let m = self.rhs.len();
        let mut v = self.rhs.clone();
        for (j, st) in self.state.iter().enumerate() {
            if *st == VarState::AtUpper {
                let w = self.width[j].clone().expect("upper state implies width");
                for i in 0..m {
                    let delta = self.t[(i, j)].clone() * &w;
                    v[i] -= delta;
                }
            }
        }
        v
    }

    fn artificial_objective(&self, values: &[S]) -> S {
        let mut obj = S::zero();
        for (row, &var) in self.basis.iter().enumerate() {
            if var >= self.n_struct {
                obj += values[row].clone();
            }
        }
        obj
    }

    fn reduced_cost(&self, j: usize) -> S {
        // c_j - c_B' T[:, j], with costs 1 exactly on artificials
        let mut z = if j >= self.n_struct { S::one() } else { S::zero() };
        for (row, &var) in self.basis.iter().enumerate() {
            if var >= self.n_struct {
                z -= self.t[(row, j)].clone();
            }
        }
        z
    }

    fn value_of(&self, j: usize, basic: &[S]) -> S {
        match self.state[j] {
            VarState::Basic(row) => basic[row].clone(),
            VarState::AtLower => S::zero(),
            VarState::AtUpper => self.width[j].clone().expect("upper needs width"),
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let m = self.rhs.len();
        let cols = self.t.cols();
        let inv = S::one() / self.t[(row, col)].clone();
        for j in 0..cols {
            let v = self.t[(row, j)].clone() * &inv;
            self.t[(row, j)] = v;
        }
        let v = self.rhs[row].clone() * &inv;
        self.rhs[row] = v;
        self.t[(row, col)] = S::one();
        for i in 0..m {
            if i == row {
                continue;
            }
            let factor = self.t[(i, col)].clone();
            if factor.is_zero() {
                continue;
            }
            for j in 0..cols {
                let delta = factor.clone() * &self.t[(row, j)];
                self.t[(i, j)] -= delta;
            }
            let delta = factor.clone() * &self.rhs[row];
            self.rhs[i] -= delta;
            self.t[(i, col)] = S::zero();
        }
    }
}

/// Finds any point satisfying the system, or `None` when infeasible.
pub fn feasible_point<S: Scalar>(
    problem: &FeasibilityProblem<S>,
    rule: PivotRule,
) -> Option<Vec<S>> {
    feasible_point_with_tol(problem, rule, LP_FEAS_TOL)
}

pub fn feasible_point_with_tol<S: Scalar>(
    problem: &FeasibilityProblem<S>,
    rule: PivotRule,
    feas_tol: f64,
) -> Option<Vec<S>> {
    let m = problem.eq_lhs.rows();
    let d = problem.eq_lhs.cols();
    assert_eq!(problem.eq_rhs.len(), m, "rhs length mismatch");
    assert_eq!(problem.lower.len(), d, "lower bounds length mismatch");
    assert_eq!(problem.upper.len(), d, "upper bounds length mismatch");

    // Shift every variable to start at zero; split free variables.
    let mut cols: Vec<ColMap<S>> = Vec::new();
    let mut width: Vec<Option<S>> = Vec::new();
    for j in 0..d {
        match (&problem.lower[j], &problem.upper[j]) {
            (Some(l), Some(u)) => {
                if l > u {
                    return None;
                }
                cols.push(ColMap { var: j, negated: false, offset: l.clone() });
                width.push(Some(u.clone() - l));
            }
            (Some(l), None) => {
                cols.push(ColMap { var: j, negated: false, offset: l.clone() });
                width.push(None);
            }
            (None, Some(u)) => {
                cols.push(ColMap { var: j, negated: true, offset: u.clone() });
                width.push(None);
            }
            (None, None) => {
                cols.push(ColMap { var: j, negated: false, offset: S::zero() });
                width.push(None);
                cols.push(ColMap { var: j, negated: true, offset: S::zero() });
                width.push(None);
            }
        }
    }
    let n_struct = cols.len();
    let n_total = n_struct + m;

    // Residuals at the all-zero starting point; each column's shift moves
    // into the right-hand side. Split pairs carry zero offsets.
    let mut residual: Vec<S> = (0..m)
        .map(|i| {
            let mut r = problem.eq_rhs[i].clone();
            for c in &cols {
                if !c.offset.is_zero() {
                    r -= problem.eq_lhs[(i, c.var)].clone() * &c.offset;
                }
            }
            r
        })
        .collect();

    let mut sign_flip = vec![false; m];
    for (i, r) in residual.iter_mut().enumerate() {
        if r.is_negative() {
            sign_flip[i] = true;
            *r = -r.clone();
        }
    }

    let t = Matrix::from_fn(m, n_total, |i, j| {
        let v = if j < n_struct {
            let c = &cols[j];
            let a = problem.eq_lhs[(i, c.var)].clone();
            if c.negated {
                -a
            } else {
                a
            }
        } else if j - n_struct == i {
            S::one()
        } else {
            S::zero()
        };
        if sign_flip[i] && j < n_struct {
            -v
        } else {
            v
        }
    });

    let mut width = width;
    width.extend(std::iter::repeat(None).take(m));
    let mut state = vec![VarState::AtLower; n_total];
    let mut basis = Vec::with_capacity(m);
    for i in 0..m {
        state[n_struct + i] = VarState::Basic(i);
        basis.push(n_struct + i);
    }
    let mut tab = Tableau {
        t,
        rhs: residual,
        width,
        state,
        basis,
        n_struct,
    };

    let cost_eps = if S::EXACT { 0.0 } else { REDUCED_COST_EPS };
    let pivot_eps = if S::EXACT { 0.0 } else { PIVOT_EPS };
    let bland_cap = 200 + 40 * (m + n_total);
    let hard_cap = 20 * bland_cap + 20_000;

    let mut iterations = 0usize;
    loop {
        iterations += 1;
        if iterations > hard_cap {
            assert!(!S::EXACT, "phase-1 simplex failed to terminate under Bland's rule");
            return None;
        }
        let values = tab.basic_values();

        // entering variable
        let use_bland = rule == PivotRule::Bland || iterations > bland_cap;
        let mut entering: Option<(usize, bool, S)> = None; // (col, from_lower, |z|)
        for j in 0..n_total {
            if tab.width[j].as_ref().is_some_and(|w| w.is_zero()) {
                continue; // pinned variable, can never move
            }
            let eligible = match tab.state[j] {
                VarState::Basic(_) => None,
                VarState::AtLower => {
                    let z = tab.reduced_cost(j);
                    let improving = if S::EXACT {
                        z.is_negative()
                    } else {
                        z.to_f64_lossy() < -cost_eps
                    };
                    improving.then(|| (true, -z))
                }
                VarState::AtUpper => {
                    let z = tab.reduced_cost(j);
                    let improving = if S::EXACT {
                        z.is_positive()
                    } else {
                        z.to_f64_lossy() > cost_eps
                    };
                    improving.then_some((false, z))
                }
            };
            if let Some((from_lower, mag)) = eligible {
                if use_bland {
                    entering = Some((j, from_lower, mag));
                    break;
                }
                match &entering {
                    Some((_, _, best)) if *best >= mag => {}
                    _ => entering = Some((j, from_lower, mag)),
                }
            }
        }

        let Some((e, from_lower, _)) = entering else {
            // optimal for the artificial objective
            let obj = tab.artificial_objective(&values);
            let scale = 1.0
                + problem
                    .eq_rhs
                    .iter()
                    .map(|v| v.to_f64_lossy().abs())
                    .fold(0.0, f64::max);
            let feasible = if S::EXACT {
                obj.is_zero()
            } else {
                obj.to_f64_lossy().abs() <= feas_tol * scale
            };
            if !feasible {
                return None;
            }
            let mut x = vec![S::zero(); d];
            for (j, c) in cols.iter().enumerate() {
                let z = tab.value_of(j, &values);
                x[c.var] += if c.negated { -z } else { z } + &c.offset;
            }
            return Some(x);
        };

        // ratio test: entering moves by t >= 0 away from its current bound
        let dir_from_lower = from_lower;
        let mut best_t: Option<S> = tab.width[e].clone(); // entering's own range
        let mut blocker: Option<(usize, bool)> = None; // (row, leaves_at_upper)
        for row in 0..tab.rhs.len() {
            let coeff = tab.t[(row, e)].clone();
            if coeff.treat_as_zero(pivot_eps) {
                continue;
            }
            // basic value moves at rate -dir * coeff
            let rate = if dir_from_lower { -coeff.clone() } else { coeff.clone() };
            let bvar = tab.basis[row];
            let v = values[row].clone();
            let limit = if rate.is_negative() {
                // decreasing toward 0
                Some((v / -rate, false))
            } else {
                // increasing toward its width, if any
                tab.width[bvar]
                    .as_ref()
                    .map(|w| ((w.clone() - v) / rate, true))
            };
            let Some((limit, at_upper)) = limit else {
                continue;
            };
            // float roundoff can push a degenerate ratio slightly negative
            let limit = if limit.is_negative() { S::zero() } else { limit };
            let replace = match &best_t {
                None => true,
                Some(bt) => {
                    limit < *bt
                        || (limit == *bt
                            && blocker.is_some_and(|(r, _)| tab.basis[row] < tab.basis[r]))
                }
            };
            if replace {
                best_t = Some(limit);
                blocker = Some((row, at_upper));
            }
        }

        if best_t.is_none() {
            // a strictly improving unbounded ray contradicts the objective
            // being bounded below by zero
            assert!(!S::EXACT, "phase-1 simplex found an unbounded improving ray");
            return None;
        }

        match blocker {
            None => {
                // entering traverses its whole range: bound flip
                tab.state[e] = if dir_from_lower {
                    VarState::AtUpper
                } else {
                    VarState::AtLower
                };
            }
            Some((row, leaves_at_upper)) => {
                let leaving = tab.basis[row];
                tab.state[leaving] = if leaves_at_upper {
                    VarState::AtUpper
                } else {
                    VarState::AtLower
                };
                tab.basis[row] = e;
                tab.state[e] = VarState::Basic(row);
                tab.pivot(row, e);
            }
        }
    }
}
