//! Reference solver and instance generator.
//!
//! The brute force walks all `3^n` faces of the box directly in the
//! original coordinates: fix each coordinate at a bound or leave it free,
//! solve the restricted stationarity system `((Q + Q')x + q)_Z = 0` by
//! Gaussian elimination, and probe the solution set against the face's
//! bounds with a feasibility LP. Every local maximum is stationary with
//! respect to the minimal face containing it, so the best value found is
//! the global maximum. Deliberately shares nothing with the geometric
//! pipeline except `lp_feasible`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::face_lp::lp_feasible;
use crate::matrix::Matrix;
use crate::model::QpInstance;
use crate::scalar::{Rational, Scalar};
use crate::solver::{SolveStats, Solution};
use num::Zero;

/// Largest `n` the brute force will accept; `3^n` faces beyond this point
/// stop being a reference and start being a stress test.
pub const DEFAULT_ORACLE_CAP: usize = 10;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("instance has {n} variables, brute force is capped at {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("point is not feasible for the instance")]
    InfeasiblePoint,
    #[error("cannot generate a rank-{rank} matrix of size {n}")]
    ImpossibleRank { rank: usize, n: usize },
}

/// Private forward/back substitution: a particular solution of `M x = b`
/// plus a null-space basis, or `None` when inconsistent. Kept local so the
/// oracle stays independent of the main pipeline's elimination code.
fn solve_linear_system<S: Scalar>(m: &Matrix<S>, b: &[S]) -> Option<(Vec<S>, Vec<Vec<S>>)> {
    let rows = m.rows();
    let n = m.cols();
    let mut aug = Matrix::from_fn(rows, n + 1, |i, j| {
        if j < n {
            m[(i, j)].clone()
        } else {
            b[i].clone()
        }
    });
    let threshold = if S::EXACT {
        0.0
    } else {
        crate::matrix::RANK_TOL * aug.max_abs_f64()
    };
    let mut pivot_row_of_col = vec![None; n];
    let mut next = 0;
    for col in 0..n {
        if next == rows {
            break;
        }
        let pivot = (next..rows).find(|&i| !aug[(i, col)].treat_as_zero(threshold));
        let Some(p) = pivot else { continue };
        aug.swap_rows(next, p);
        let inv = S::one() / aug[(next, col)].clone();
        for j in 0..=n {
            let v = aug[(next, j)].clone() * &inv;
            aug[(next, j)] = v;
        }
        for i in 0..rows {
            if i != next {
                let f = aug[(i, col)].clone();
                aug.sub_scaled_row(i, next, &f);
            }
        }
        pivot_row_of_col[col] = Some(next);
        next += 1;
    }
    for i in next..rows {
        if !aug[(i, n)].treat_as_zero(threshold) {
            return None;
        }
    }
    let mut particular = vec![S::zero(); n];
    for (col, row) in pivot_row_of_col.iter().enumerate() {
        if let Some(r) = row {
            particular[col] = aug[(*r, n)].clone();
        }
    }
    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_row_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![S::zero(); n];
        v[free] = S::one();
        for (col, row) in pivot_row_of_col.iter().enumerate() {
            if let Some(r) = row {
                v[col] = -aug[(*r, free)].clone();
            }
        }
        basis.push(v);
    }
    Some((particular, basis))
}

/// Ternary face codes: 0 free, 1 at upper, 2 at lower.
fn face_codes(n: usize) -> impl Iterator<Item = Vec<u8>> {
    let total = 3usize.pow(n as u32);
    (0..total).map(move |mut code| {
        (0..n)
            .map(|_| {
                let digit = (code % 3) as u8;
                code /= 3;
                digit
            })
            .collect()
    })
}

/// Exhaustive reference solve over all `3^n` box faces.
pub fn brute_force_solve<S: Scalar>(inst: &QpInstance<S>) -> Result<Solution<S>, OracleError> {
    brute_force_solve_capped(inst, DEFAULT_ORACLE_CAP)
}

pub fn brute_force_solve_capped<S: Scalar>(
    inst: &QpInstance<S>,
    cap: usize,
) -> Result<Solution<S>, OracleError> {
    let n = inst.n();
    if n > cap {
        return Err(OracleError::TooLarge { n, cap });
    }
    let started = std::time::Instant::now();
    let gradient = inst.gradient_matrix(); // Q + Q'
    let mut best: Option<(S, Vec<S>)> = None;
    let mut faces = 0u64;
    let mut lps = 0u64;
    let mut lps_feasible = 0u64;

    for code in face_codes(n) {
        faces += 1;
        let mut free = Vec::new();
        let mut x = vec![S::zero(); n];
        for i in 0..n {
            match code[i] {
                0 => free.push(i),
                1 => x[i] = inst.upper()[i].clone(),
                _ => x[i] = inst.lower()[i].clone(),
            }
        }
        let k = free.len();
        let candidate = if k == 0 {
            Some(x.clone())
        } else {
            // stationarity on the free set: for i in Z,
            //   sum_{j in Z} (Q+Q')_ij x_j = -q_i - sum_{j not in Z} (Q+Q')_ij x_j
            let sub = Matrix::from_fn(k, k, |a, b| gradient[(free[a], free[b])].clone());
            let rhs: Vec<S> = (0..k)
                .map(|a| {
                    let i = free[a];
                    let mut acc = -inst.linear()[i].clone();
                    for j in 0..n {
                        if code[j] != 0 {
                            acc -= gradient[(i, j)].clone() * &x[j];
                        }
                    }
                    acc
                })
                .collect();
            match solve_linear_system(&sub, &rhs) {
                None => None,
                Some((particular, null_basis)) => {
                    // point of the solution set inside the face's bounds:
                    // x_Z = particular + N t with lower_Z <= x_Z <= upper_Z
                    let t_dim = null_basis.len();
                    lps += 1;
                    let eq_lhs = Matrix::from_fn(k, k + t_dim, |a, b| {
                        if b < k {
                            if a == b {
                                S::one()
                            } else {
                                S::zero()
                            }
                        } else {
                            -null_basis[b - k][a].clone()
                        }
                    });
                    let mut lower: Vec<Option<S>> =
                        free.iter().map(|&i| Some(inst.lower()[i].clone())).collect();
                    let mut upper: Vec<Option<S>> =
                        free.iter().map(|&i| Some(inst.upper()[i].clone())).collect();
                    lower.extend(std::iter::repeat(None).take(t_dim));
                    upper.extend(std::iter::repeat(None).take(t_dim));
                    lp_feasible(eq_lhs, particular, lower, upper).map(|point| {
                        lps_feasible += 1;
                        let mut full = x.clone();
                        for (a, &i) in free.iter().enumerate() {
                            full[i] = point[a].clone();
                        }
                        full
                    })
                }
            }
        };
        if let Some(point) = candidate {
            let value = inst.evaluate(&point).expect("face point has instance length");
            let improves = best.as_ref().map_or(true, |(bv, _)| value > *bv);
            if improves {
                best = Some((value, point));
            }
        }
    }
    let (value, point) = best.expect("vertices always produce a candidate");
    Ok(Solution {
        objective: value,
        maximizer: point,
        stats: SolveStats {
            faces_enumerated: faces,
            lps_solved: lps,
            lps_feasible,
            rank_used: 0,
            wall: started.elapsed(),
        },
    })
}

/// True iff the gradient vanishes along the minimal face of the box
/// containing `x` (free directions are the strictly interior ones).
pub fn stationarity_check<S: Scalar>(
    inst: &QpInstance<S>,
    x: &[S],
) -> Result<bool, OracleError> {
    if !inst.contains(x) {
        return Err(OracleError::InfeasiblePoint);
    }
    let gradient = inst.gradient_matrix().matvec(x);
    for i in 0..inst.n() {
        let interior = inst.lower()[i] < x[i] && x[i] < inst.upper()[i];
        if interior {
            let g = gradient[i].clone() + &inst.linear()[i];
            if !g.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Knobs for the random instance generator.
#[derive(Debug, Clone)]
pub struct GeneratorConfig {
    pub n: usize,
    pub rank: usize,
    pub seed: u64,
    /// Inclusive range for the integer entries of the rank factors and of
    /// the linear term.
    pub coeff_range: (i64, i64),
    /// Inclusive range the two box endpoints are drawn from.
    pub bound_range: (i64, i64),
    pub with_linear_term: bool,
    /// Number of coordinates forced to a single-point interval.
    pub degenerate_coords: usize,
}

impl GeneratorConfig {
    pub fn new(n: usize, rank: usize, seed: u64) -> Self {
        GeneratorConfig {
            n,
            rank,
            seed,
            coeff_range: (-5, 5),
            bound_range: (-5, 5),
            with_linear_term: false,
            degenerate_coords: 0,
        }
    }
}

/// Random integer instance with `rank(Q)` exactly as requested,
/// reproducible from the seed.
pub fn generate_instance(cfg: &GeneratorConfig) -> Result<QpInstance<Rational>, OracleError> {
    let n = cfg.n;
    if cfg.rank > n {
        return Err(OracleError::ImpossibleRank { rank: cfg.rank, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (clo, chi) = cfg.coeff_range;
    let quadratic = if cfg.rank == 0 {
        Matrix::zeros(n, n)
    } else {
        loop {
            let u = Matrix::from_fn(cfg.rank, n, |_, _| {
                Rational::from_int(rng.gen_range(clo..=chi))
            });
            let v = Matrix::from_fn(cfg.rank, n, |_, _| {
                Rational::from_int(rng.gen_range(clo..=chi))
            });
            let q = u.transpose().matmul(&v);
            if crate::matrix::rank(&q) == cfg.rank {
                break q;
            }
        }
    };
    let linear: Vec<Rational> = if cfg.with_linear_term {
        loop {
            let candidate: Vec<Rational> = (0..n)
                .map(|_| Rational::from_int(rng.gen_range(clo..=chi)))
                .collect();
            if candidate.iter().any(|v| !v.is_zero()) {
                break candidate;
            }
        }
    } else {
        vec![Rational::zero(); n]
    };
    let (blo, bhi) = cfg.bound_range;
    let mut lower = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    for _ in 0..n {
        let a = rng.gen_range(blo..=bhi);
        let b = rng.gen_range(blo..=bhi);
        lower.push(Rational::from_int(a.min(b)));
        upper.push(Rational::from_int(a.max(b)));
    }
    for k in 0..cfg.degenerate_coords.min(n) {
        let i = rng.gen_range(0..n);
        let _ = k;
        upper[i] = lower[i].clone();
    }
    Ok(QpInstance::new(quadratic, linear, lower, upper).expect("generated instance is valid"))
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = Matrix<Rational>;

    fn rat(v: i64) -> Rational {
        Rational::from_int(v)
    }

    fn unit_box_inst(q: M, lin: Vec<Rational>) -> QpInstance<Rational> {
        let n = q.rows();
        QpInstance::new(q, lin, vec![rat(-1); n], vec![rat(1); n]).unwrap()
    }

    #[test]
    fn bilinear_objective_peaks_at_corners() {
        let inst = unit_box_inst(M::from_int_rows(&[&[0, 1], &[0, 0]]), vec![rat(0); 2]);
        let sol = brute_force_solve(&inst).unwrap();
        assert_eq!(sol.objective, rat(1));
        assert_eq!(sol.stats.faces_enumerated, 9);
    }

    #[test]
    fn concave_parabola_peaks_inside() {
        let inst = unit_box_inst(M::from_int_rows(&[&[-1]]), vec![rat(0)]);
        let sol = brute_force_solve(&inst).unwrap();
        assert_eq!(sol.objective, rat(0));
        assert_eq!(sol.maximizer, vec![rat(0)]);
    }

    #[test]
    fn convex_parabola_peaks_at_a_vertex() {
        let inst = unit_box_inst(M::from_int_rows(&[&[1]]), vec![rat(0)]);
        let sol = brute_force_solve(&inst).unwrap();
        assert_eq!(sol.objective, rat(1));
        assert!(sol.maximizer == vec![rat(1)] || sol.maximizer == vec![rat(-1)]);
    }

    #[test]
    fn objective_dominates_every_vertex() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(107);
        for _ in 0..20 {
            let n = rng.gen_range(1..=4);
            let q = M::from_fn(n, n, |_, _| rat(rng.gen_range(-4..=4)));
            let lin: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(-4..=4))).collect();
            let inst = unit_box_inst(q, lin);
            let sol = brute_force_solve(&inst).unwrap();
            for corner in 0..(1u32 << n) {
                let v: Vec<Rational> = (0..n)
                    .map(|i| {
                        if corner >> i & 1 == 1 {
                            inst.upper()[i].clone()
                        } else {
                            inst.lower()[i].clone()
                        }
                    })
                    .collect();
                assert!(sol.objective >= inst.evaluate(&v).unwrap());
            }
            assert!(inst.contains(&sol.maximizer));
            assert_eq!(inst.evaluate(&sol.maximizer).unwrap(), sol.objective);
            assert!(stationarity_check(&inst, &sol.maximizer).unwrap());
        }
    }

    #[test]
    fn cap_is_enforced() {
        let inst = unit_box_inst(M::zeros(3, 3), vec![rat(0); 3]);
        assert!(matches!(
            brute_force_solve_capped(&inst, 2),
            Err(OracleError::TooLarge { n: 3, cap: 2 })
        ));
    }

    #[test]
    fn stationarity_check_examples() {
        let inst = unit_box_inst(M::from_int_rows(&[&[0, 1], &[0, 0]]), vec![rat(0); 2]);
        assert!(stationarity_check(&inst, &[rat(0), rat(0)]).unwrap());
        assert!(stationarity_check(&inst, &[rat(1), rat(1)]).unwrap());
        assert!(!stationarity_check(&inst, &[rat(0), rat(1)]).unwrap());
        assert!(stationarity_check(&inst, &[rat(2), rat(0)]).is_err());
    }

    #[test]
    fn generator_is_reproducible_and_hits_the_rank() {
        for rank in 0..=3usize {
            let cfg = GeneratorConfig::new(4, rank, 7 + rank as u64);
            let a = generate_instance(&cfg).unwrap();
            let b = generate_instance(&cfg).unwrap();
            assert_eq!(a, b);
            assert_eq!(crate::matrix::rank(a.quadratic()), rank);
        }
    }

    #[test]
    fn generator_rejects_impossible_rank() {
        assert!(matches!(
            generate_instance(&GeneratorConfig::new(4, 5, 1)),
            Err(OracleError::ImpossibleRank { rank: 5, n: 4 })
        ));
    }

    #[test]
    fn generator_produces_degenerate_coordinates_on_request() {
        let mut cfg = GeneratorConfig::new(5, 1, 11);
        cfg.degenerate_coords = 2;
        let inst = generate_instance(&cfg).unwrap();
        let pinched = (0..5)
            .filter(|&i| inst.lower()[i] == inst.upper()[i])
            .count();
        assert!(pinched >= 1);
    }

    #[test]
    fn degenerate_box_is_handled() {
        // x fixed to 1/2 in the first coordinate
        let inst = QpInstance::new(
            M::from_int_rows(&[&[2, 1], &[0, -1]]),
            vec![rat(1), rat(0)],
            vec![Rational::from_fraction(1, 2), rat(-1)],
            vec![Rational::from_fraction(1, 2), rat(1)],
        )
        .unwrap();
        let sol = brute_force_solve(&inst).unwrap();
        assert_eq!(sol.maximizer[0], Rational::from_fraction(1, 2));
        assert!(inst.contains(&sol.maximizer));
    }
}
