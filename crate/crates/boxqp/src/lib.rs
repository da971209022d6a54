//! Global maximization of `x' Q x + q' x` over a box.
//!
//! The problem is NP-hard in general but tractable when `rank(Q)` is small:
//! a rank factorization turns the quadratic form into a bilinear coupling
//! on the image of the box under a `2 rank(Q) x n` linear map — a zonotope.
//! Every local maximizer is stationary on some face of the box, faces of
//! the zonotope correspond to sign vectors of a central hyperplane
//! arrangement, and each face contributes one small feasibility LP. The
//! solver enumerates those sign vectors, solves the per-face LPs, and keeps
//! the best stationary value, which is the global maximum.
//!
//! A brute-force reference solver over all `3^n` box faces provides ground
//! truth for testing, and everything runs in exact rational arithmetic by
//! default (floats are an opt-in fast path).

pub mod arrangement;
pub mod cli;
pub mod face_lp;
pub mod factorize;
pub mod homogenize;
pub mod io;
pub mod matrix;
pub mod model;
pub mod oracle;
pub mod scalar;
pub mod simplex;
pub mod solver;

pub use matrix::Matrix;
pub use model::{ModelError, QpInstance};
pub use scalar::{Rational, Scalar};
pub use solver::{solve, Solution, SolverOptions};
