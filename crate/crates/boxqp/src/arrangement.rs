//! Enumeration of the sign vectors (covectors) of a central hyperplane
//! arrangement: one hyperplane `g_i' y = 0` per column of `G`.
//!
//! Realizable sign vectors name the cells of the arrangement and, dually,
//! the faces of the zonotope `{Gx : x in the box}`. Output is exact: every
//! cell carries a witness point whose signs reproduce it, and cells are
//! emitted in lexicographic order with `+ < 0 < -` per coordinate.
//!
//! Two engines sit behind [`enumerate_covectors`]: a planar one for
//! two-dimensional arrangements (sort rays by angle, sample each stratum),
//! and a recursive search that extends realizable prefixes one hyperplane
//! at a time. The search certifies each doubtful extension with a phase-1
//! LP, but most extensions are decided for free: a witness with a strict
//! sign settles that side, a witness on the new hyperplane yields both
//! sides by an exact interior step, and the zero side exists iff both
//! strict sides do (the cell is convex), with a witness by interpolation.

use std::cmp::Ordering;
use std::fmt;

use crate::matrix::{dot, null_space, Matrix};
use crate::scalar::Scalar;
use crate::simplex::{feasible_point, FeasibilityProblem, PivotRule};
use num::Zero;

/// Relative tolerance classifying a float dot product as zero.
pub const SIGN_TOL: f64 = 1e-9;

/// Position relative to one hyperplane. The derived order `+ < 0 < -` is
/// the enumeration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Zero,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Zero => Sign::Zero,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Zero => 0,
            Sign::Minus => -1,
        }
    }

    fn from_ordering(o: Ordering) -> Sign {
        match o {
            Ordering::Greater => Sign::Plus,
            Ordering::Equal => Sign::Zero,
            Ordering::Less => Sign::Minus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Zero => "0",
            Sign::Minus => "-",
        })
    }
}

/// Element of `{-1, 0, +1}^n` naming one cell of the arrangement.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignVector(Vec<Sign>);

impl SignVector {
    pub fn new(signs: Vec<Sign>) -> Self {
        SignVector(signs)
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Indices carrying a zero sign.
    pub fn zero_set(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.0[i] == Sign::Zero).collect()
    }

    pub fn is_all_zero(&self) -> bool {
        self.0.iter().all(|&s| s == Sign::Zero)
    }

    pub fn has_zero(&self) -> bool {
        self.0.iter().any(|&s| s == Sign::Zero)
    }

    /// The centrally symmetric partner `-sigma`.
    pub fn mirror(&self) -> SignVector {
        SignVector(self.0.iter().map(|s| s.flip()).collect())
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

/// Negation, exposed as a free function to mirror the other operations.
pub fn mirror(sigma: &SignVector) -> SignVector {
    sigma.mirror()
}

/// A realizable sign vector together with a point realizing it.
#[derive(Debug, Clone)]
pub struct Cell<S> {
    pub sigma: SignVector,
    pub witness: Vec<S>,
}

fn norm_f64<S: Scalar>(v: &[S]) -> f64 {
    v.iter()
        .map(|x| {
            let f = x.to_f64_lossy();
            f * f
        })
        .sum::<f64>()
        .sqrt()
}

/// Sign of `col . y`, with the float-mode relative tolerance.
pub fn sign_of_dot<S: Scalar>(col: &[S], y: &[S]) -> Sign {
    let v = dot(col, y);
    if S::EXACT {
        return Sign::from_ordering(
            v.partial_cmp(&S::zero()).expect("rationals are totally ordered"),
        );
    }
    let threshold = SIGN_TOL * norm_f64(col) * norm_f64(y);
    if v.treat_as_zero(threshold) {
        Sign::Zero
    } else if v.is_positive() {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Sign vector of a point.
pub fn sign_vector_at<S: Scalar>(g: &Matrix<S>, y: &[S]) -> SignVector {
    SignVector((0..g.cols()).map(|j| sign_of_dot(&g.column(j), y)).collect())
}

/// Witness for a (prefix of a) sign vector, or `None` if unrealizable.
///
/// Strictness is normalized to `>= 1` / `<= -1`; the arrangement is a cone,
/// so any strictly separated point can be scaled to satisfy that.
fn realizability_witness<S: Scalar>(cols: &[Vec<S>], sigma: &[Sign]) -> Option<Vec<S>> {
    assert!(sigma.len() <= cols.len());
    let dim = cols.first().map_or(0, Vec::len);
    // a zero column can only carry a zero sign, and adds no constraint
    let mut rows: Vec<(usize, Sign)> = Vec::new();
    for (j, s) in sigma.iter().enumerate() {
        if cols[j].iter().all(Zero::is_zero) {
            if *s != Sign::Zero {
                return None;
            }
        } else {
            rows.push((j, *s));
        }
    }
    let m = rows.len();
    let mut slack_of_row = vec![None; m];
    let mut n_slack = 0;
    for (i, (_, s)) in rows.iter().enumerate() {
        if *s != Sign::Zero {
            slack_of_row[i] = Some(n_slack);
            n_slack += 1;
        }
    }
    let eq_lhs = Matrix::from_fn(m, dim + n_slack, |i, k| {
        let (j, s) = rows[i];
        if k < dim {
            cols[j][k].clone()
        } else if slack_of_row[i] == Some(k - dim) {
            match s {
                Sign::Plus => -S::one(),
                Sign::Minus => S::one(),
                Sign::Zero => unreachable!("zero rows take no slack"),
            }
        } else {
            S::zero()
        }
    });
    let eq_rhs = rows
        .iter()
        .map(|(_, s)| match s {
            Sign::Plus => S::one(),
            Sign::Minus => -S::one(),
            Sign::Zero => S::zero(),
        })
        .collect();
    let mut lower: Vec<Option<S>> = vec![None; dim];
    let mut upper: Vec<Option<S>> = vec![None; dim];
    lower.extend((0..n_slack).map(|_| Some(S::zero())));
    upper.extend((0..n_slack).map(|_| None));
    let problem = FeasibilityProblem {
        eq_lhs,
        eq_rhs,
        lower,
        upper,
    };
    feasible_point(&problem, PivotRule::Bland).map(|x| x[..dim].to_vec())
}

/// Finds a point `y` with `g_i' y = 0` where `sigma_i = 0`, `>= 1` where
/// `+1` and `<= -1` where `-1`, or reports the sign vector unrealizable.
pub fn realizable<S: Scalar>(g: &Matrix<S>, sigma: &SignVector) -> Option<Vec<S>> {
    assert_eq!(sigma.len(), g.cols(), "sign vector length mismatch");
    let cols: Vec<Vec<S>> = (0..g.cols()).map(|j| g.column(j)).collect();
    realizability_witness(&cols, sigma.signs())
}

struct Enumerator<S> {
    cols: Vec<Vec<S>>,
    dim: usize,
    n: usize,
}

impl<S: Scalar> Enumerator<S> {
    /// Coordinates of column `j` in the subspace spanned by `basis`.
    fn restrict(&self, j: usize, basis: &[Vec<S>]) -> Vec<S> {
        basis.iter().map(|b| dot(&self.cols[j], b)).collect()
    }

    fn component_is_zero(&self, j: usize, c: &[S]) -> bool {
        if S::EXACT {
            c.iter().all(Zero::is_zero)
        } else {
            let scale = 1.0 + SIGN_TOL * norm_f64(&self.cols[j]);
            c.iter().all(|v| v.treat_as_zero(SIGN_TOL * scale))
        }
    }

    /// A vector of the subspace whose dot with column `j` is positive,
    /// given the column's subspace coordinates `c != 0`.
    fn inward_direction(&self, c: &[S], basis: &[Vec<S>]) -> Vec<S> {
        let mut d = vec![S::zero(); self.dim];
        for (ci, b) in c.iter().zip(basis) {
            for (dk, bk) in d.iter_mut().zip(b) {
                *dk += ci.clone() * bk;
            }
        }
        d
    }

    /// Shrinks the subspace basis by the hyperplane of column `j`, given
    /// the column's coordinates `c` in that basis.
    fn intersect_basis(&self, basis: &[Vec<S>], c: &[S]) -> Vec<Vec<S>> {
        let kernel = null_space(&Matrix::from_rows(vec![c.to_vec()]));
        kernel
            .into_iter()
            .map(|k| {
                let mut v = vec![S::zero(); self.dim];
                for (ki, b) in k.iter().zip(basis) {
                    for (vk, bk) in v.iter_mut().zip(b) {
                        *vk += ki.clone() * bk;
                    }
                }
                v
            })
            .collect()
    }

    /// Step size keeping every strict sign of `prefix` intact when moving
    /// from `witness` along `dir`.
    fn safe_step(&self, prefix: &[Sign], witness: &[S], dir: &[S]) -> S {
        let half = S::from_fraction(1, 2);
        let mut best: Option<S> = None;
        for (j, s) in prefix.iter().enumerate() {
            if *s == Sign::Zero {
                continue;
            }
            let rate = dot(&self.cols[j], dir);
            if rate.is_zero() {
                continue;
            }
            let margin = dot(&self.cols[j], witness).abs();
            let limit = half.clone() * margin / rate.abs();
            if best.as_ref().is_none_or(|b| limit < *b) {
                best = Some(limit);
            }
        }
        best.unwrap_or_else(S::one)
    }

    fn emit(&self, prefix: &[Sign], witness: Vec<S>) -> Cell<S> {
        Cell {
            sigma: SignVector::new(prefix.to_vec()),
            witness,
        }
    }

    fn mirrored_block(&self, block: &[Cell<S>]) -> Vec<Cell<S>> {
        block
            .iter()
            .rev()
            .map(|cell| Cell {
                sigma: cell.sigma.mirror(),
                witness: cell.witness.iter().map(|v| -v.clone()).collect(),
            })
            .collect()
    }

    /// Prefixes that are all zeros so far: the witness is the origin and
    /// central symmetry halves the work, the minus subtree being the
    /// reversed mirror of the plus subtree.
    fn zero_spine(&self, depth: usize, prefix: &mut Vec<Sign>, basis: Vec<Vec<S>>) -> Vec<Cell<S>> {
        if depth == self.n {
            return vec![self.emit(prefix, vec![S::zero(); self.dim])];
        }
        let c = self.restrict(depth, &basis);
        if self.component_is_zero(depth, &c) {
            prefix.push(Sign::Zero);
            let out = self.zero_spine(depth + 1, prefix, basis);
            prefix.pop();
            return out;
        }
        // the origin lies on the new hyperplane and the column is live in
        // the current subspace, so both strict sides are realizable
        let d = self.inward_direction(&c, &basis);
        prefix.push(Sign::Plus);
        let plus = self.descend(depth + 1, prefix, &d, basis.clone());
        prefix.pop();
        prefix.push(Sign::Zero);
        let zero = self.zero_spine(depth + 1, prefix, self.intersect_basis(&basis, &c));
        prefix.pop();
        let minus = self.mirrored_block(&plus);
        let mut out = plus;
        out.extend(zero);
        out.extend(minus);
        out
    }

    /// Prefixes whose first nonzero sign is `+`: plain depth-first
    /// extension, at most one LP per node.
    fn descend(
        &self,
        depth: usize,
        prefix: &mut Vec<Sign>,
        witness: &[S],
        basis: Vec<Vec<S>>,
    ) -> Vec<Cell<S>> {
        if depth == self.n {
            return vec![self.emit(prefix, witness.to_vec())];
        }
        let c = self.restrict(depth, &basis);
        if self.component_is_zero(depth, &c) {
            // hyperplane contains the whole current subspace
            prefix.push(Sign::Zero);
            let out = self.descend(depth + 1, prefix, witness, basis);
            prefix.pop();
            return out;
        }
        let t_sign = sign_of_dot(&self.cols[depth], witness);
        if t_sign == Sign::Zero {
            // witness sits on the hyperplane: an interior step to either
            // side keeps all strict margins, no LP needed
            let d = self.inward_direction(&c, &basis);
            let step = self.safe_step(prefix, witness, &d);
            let mut plus_w = Vec::with_capacity(self.dim);
            let mut minus_w = Vec::with_capacity(self.dim);
            for (w, dk) in witness.iter().zip(&d) {
                let delta = step.clone() * dk;
                plus_w.push(w.clone() + &delta);
                minus_w.push(w.clone() - delta);
            }
            prefix.push(Sign::Plus);
            let mut out = self.descend(depth + 1, prefix, &plus_w, basis.clone());
            prefix.pop();
            prefix.push(Sign::Zero);
            out.extend(self.descend(depth + 1, prefix, witness, self.intersect_basis(&basis, &c)));
            prefix.pop();
            prefix.push(Sign::Minus);
            out.extend(self.descend(depth + 1, prefix, &minus_w, basis));
            prefix.pop();
            return out;
        }

        // the witness has a strict sign; the opposite side needs one LP
        // certificate, and the zero side exists iff the opposite side does
        // (the cell is convex), with a witness on the crossing segment
        let free_sign = t_sign;
        let opposite = free_sign.flip();
        prefix.push(opposite);
        let opposite_witness = realizability_witness(&self.cols, prefix);
        prefix.pop();

        let crossing = opposite_witness.as_ref().map(|u| {
            let t = dot(&self.cols[depth], witness);
            let tu = dot(&self.cols[depth], u);
            // theta in (0,1) solves g.(w + theta (u - w)) = 0
            let theta = t.clone() / (t - tu);
            witness
                .iter()
                .zip(u)
                .map(|(w, uk)| w.clone() + theta.clone() * &(uk.clone() - w))
                .collect::<Vec<S>>()
        });

        let mut out = Vec::new();
        for sign in [Sign::Plus, Sign::Zero, Sign::Minus] {
            if sign == free_sign {
                prefix.push(sign);
                out.extend(self.descend(depth + 1, prefix, witness, basis.clone()));
                prefix.pop();
            } else if sign == Sign::Zero {
                if let Some(y) = &crossing {
                    prefix.push(Sign::Zero);
                    out.extend(self.descend(
                        depth + 1,
                        prefix,
                        y,
                        self.intersect_basis(&basis, &c),
                    ));
                    prefix.pop();
                }
            } else if let Some(u) = &opposite_witness {
                prefix.push(sign);
                out.extend(self.descend(depth + 1, prefix, u, basis.clone()));
                prefix.pop();
            }
        }
        out
    }
}

/// Angular order of planar rays, counterclockwise from the positive x-axis.
fn ray_cmp<S: Scalar>(a: &[S], b: &[S]) -> Ordering {
    let half = |v: &[S]| -> u8 {
        if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| {
        let cross = a[0].clone() * &b[1] - a[1].clone() * &b[0];
        if cross.is_positive() {
            Ordering::Less
        } else if cross.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

/// Planar engine: the strata of a central line arrangement are the common
/// zero stratum, two rays per distinct line, and the open sectors between
/// consecutive rays. Sampling one point per stratum is exhaustive.
fn enumerate_planar<S: Scalar>(g: &Matrix<S>) -> Vec<Cell<S>> {
    let n = g.cols();
    let mut rays: Vec<Vec<S>> = Vec::new();
    for j in 0..n {
        let col = g.column(j);
        if col.iter().all(Zero::is_zero) {
            continue;
        }
        // direction of the line g_j . y = 0
        let d = vec![-col[1].clone(), col[0].clone()];
        for cand in [d.clone(), vec![-d[0].clone(), -d[1].clone()]] {
            if !rays.iter().any(|r| ray_cmp(r, &cand) == Ordering::Equal) {
                rays.push(cand);
            }
        }
    }
    rays.sort_by(|a, b| ray_cmp(a, b));

    let mut samples: Vec<Vec<S>> = vec![vec![S::zero(); 2]];
    samples.extend(rays.iter().cloned());
    let k = rays.len();
    for i in 0..k {
        let a = &rays[i];
        let b = &rays[(i + 1) % k];
        let mid = vec![a[0].clone() + &b[0], a[1].clone() + &b[1]];
        if mid.iter().all(Zero::is_zero) {
            // opposite rays bound a half-plane; turn left into it
            samples.push(vec![-a[1].clone(), a[0].clone()]);
        } else {
            samples.push(mid);
        }
    }

    let mut cells: Vec<Cell<S>> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for y in samples {
        let sigma = sign_vector_at(g, &y);
        if seen.insert(sigma.clone()) {
            cells.push(Cell { sigma, witness: y });
        }
    }
    cells.sort_by(|a, b| a.sigma.cmp(&b.sigma));
    cells
}

/// All realizable sign vectors of the arrangement of `G`'s columns, in
/// lexicographic order with `+ < 0 < -`, each with a witness.
pub fn enumerate_covectors<S: Scalar>(g: &Matrix<S>) -> Vec<Cell<S>> {
    assert!(g.rows() >= 1, "arrangement needs an ambient dimension");
    if g.rows() == 2 {
        return enumerate_planar(g);
    }
    let dim = g.rows();
    let e = Enumerator {
        cols: (0..g.cols()).map(|j| g.column(j)).collect(),
        dim,
        n: g.cols(),
    };
    let identity: Vec<Vec<S>> = (0..dim)
        .map(|i| {
            let mut v = vec![S::zero(); dim];
            v[i] = S::one();
            v
        })
        .collect();
    e.zero_spine(0, &mut Vec::new(), identity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use rand::{Rng, SeedableRng};
    use std::collections::BTreeSet;

    type M = Matrix<Rational>;

    fn rat(v: i64) -> Rational {
        Rational::from_int(v)
    }

    fn sv(text: &str) -> SignVector {
        SignVector::new(
            text.chars()
                .map(|c| match c {
                    '+' => Sign::Plus,
                    '0' => Sign::Zero,
                    '-' => Sign::Minus,
                    other => panic!("bad sign char {other}"),
                })
                .collect(),
        )
    }

    /// Force the general engine even in the planar case.
    fn enumerate_general(g: &M) -> Vec<Cell<Rational>> {
        let dim = g.rows();
        let e = Enumerator {
            cols: (0..g.cols()).map(|j| g.column(j)).collect(),
            dim,
            n: g.cols(),
        };
        let identity: Vec<Vec<Rational>> = (0..dim)
            .map(|i| {
                let mut v = vec![rat(0); dim];
                v[i] = rat(1);
                v
            })
            .collect();
        e.zero_spine(0, &mut Vec::new(), identity)
    }

    fn check_cells(g: &M, cells: &[Cell<Rational>]) {
        let sigmas: BTreeSet<_> = cells.iter().map(|c| c.sigma.clone()).collect();
        assert_eq!(sigmas.len(), cells.len(), "duplicate cells");
        for cell in cells {
            assert_eq!(
                sign_vector_at(g, &cell.witness),
                cell.sigma,
                "witness does not certify {}",
                cell.sigma
            );
        }
        for cell in cells {
            assert!(sigmas.contains(&cell.sigma.mirror()), "not centrally symmetric");
        }
        for pair in cells.windows(2) {
            assert!(pair[0].sigma < pair[1].sigma, "order violated");
        }
        assert!(sigmas.contains(&SignVector::new(vec![Sign::Zero; g.cols()])));
    }

    #[test]
    fn identity_columns_give_all_nine() {
        let g = M::identity(2);
        let cells = enumerate_covectors(&g);
        assert_eq!(cells.len(), 9);
        check_cells(&g, &cells);
        let order: Vec<_> = cells.iter().map(|c| c.sigma.clone()).collect();
        assert_eq!(
            order,
            ["++", "+0", "+-", "0+", "00", "0-", "-+", "-0", "--"]
                .iter()
                .map(|s| sv(s))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn coincident_hyperplanes_collapse() {
        let g = M::from_int_rows(&[&[1, 2], &[0, 0]]);
        let cells = enumerate_covectors(&g);
        check_cells(&g, &cells);
        let sigmas: Vec<_> = cells.iter().map(|c| c.sigma.clone()).collect();
        assert_eq!(sigmas, vec![sv("++"), sv("00"), sv("--")]);
    }

    #[test]
    fn three_generic_lines_make_thirteen_cells() {
        let g = M::from_int_rows(&[&[1, 0, 1], &[0, 1, 1]]);
        let cells = enumerate_covectors(&g);
        assert_eq!(cells.len(), 13);
        check_cells(&g, &cells);
    }

    #[test]
    fn distinct_lines_count_is_linear() {
        for n in [2usize, 5, 10, 25, 50] {
            let g = M::from_fn(2, n, |i, j| {
                if i == 0 {
                    rat(1)
                } else {
                    rat(j as i64 + 1)
                }
            });
            let cells = enumerate_covectors(&g);
            assert_eq!(cells.len(), 4 * n + 1);
            check_cells(&g, &cells);
        }
    }

    #[test]
    fn zero_columns_are_pinned_to_zero() {
        let g = M::from_int_rows(&[&[1, 0, 0], &[0, 0, 1]]);
        let cells = enumerate_covectors(&g);
        check_cells(&g, &cells);
        assert_eq!(cells.len(), 9);
        for cell in &cells {
            assert_eq!(cell.sigma.signs()[1], Sign::Zero);
        }
    }

    #[test]
    fn mirror_examples() {
        assert_eq!(sv("+0-").mirror(), sv("-0+"));
        assert_eq!(sv("00").mirror(), sv("00"));
        assert_eq!(mirror(&sv("++")), sv("--"));
    }

    #[test]
    fn realizable_examples() {
        let g = M::identity(2);
        let w = realizable(&g, &sv("+-")).unwrap();
        assert_eq!(sign_vector_at(&g, &w), sv("+-"));

        let coincident = M::from_int_rows(&[&[1, 2], &[0, 0]]);
        assert!(realizable(&coincident, &sv("+-")).is_none());

        let w = realizable(&g, &sv("00")).unwrap();
        assert_eq!(w, vec![rat(0), rat(0)]);
    }

    #[test]
    fn zero_column_rejects_strict_signs() {
        let g = M::from_int_rows(&[&[1, 0], &[0, 0]]);
        assert!(realizable(&g, &sv("0+")).is_none());
        assert!(realizable(&g, &sv("00")).is_some());
    }

    #[test]
    fn general_engine_matches_planar_engine() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(71);
        for _ in 0..40 {
            let n = rng.gen_range(1..=6);
            let g = M::from_fn(2, n, |_, _| rat(rng.gen_range(-3..=3)));
            let planar = enumerate_covectors(&g);
            let general = enumerate_general(&g);
            check_cells(&g, &planar);
            check_cells(&g, &general);
            let a: Vec<_> = planar.iter().map(|c| c.sigma.clone()).collect();
            let b: Vec<_> = general.iter().map(|c| c.sigma.clone()).collect();
            assert_eq!(a, b, "engines disagree on {g:?}");
        }
    }

    /// Brute-force covector sampling: for every small set of hyperplanes,
    /// sample a coefficient grid over a basis of their intersection, plus
    /// dense random points. Independent of the LP machinery.
    fn sampled_covectors(g: &M, rng: &mut impl Rng) -> BTreeSet<SignVector> {
        let dim = g.rows();
        let n = g.cols();
        let mut out = BTreeSet::new();
        out.insert(sign_vector_at(g, &vec![rat(0); dim]));

        let mut subsets: Vec<Vec<usize>> = vec![vec![]];
        for j in 0..n {
            let mut extended = Vec::new();
            for s in &subsets {
                if s.len() < dim {
                    let mut t = s.clone();
                    t.push(j);
                    extended.push(t);
                }
            }
            subsets.extend(extended);
        }
        for subset in &subsets {
            let basis = if subset.is_empty() {
                (0..dim)
                    .map(|i| {
                        let mut v = vec![rat(0); dim];
                        v[i] = rat(1);
                        v
                    })
                    .collect()
            } else {
                let rows: Vec<Vec<Rational>> = subset.iter().map(|&j| g.column(j)).collect();
                null_space(&M::from_rows(rows))
            };
            if basis.is_empty() {
                continue;
            }
            let combos = 7usize.pow(basis.len() as u32);
            for mut code in 0..combos {
                let mut y = vec![rat(0); dim];
                for b in &basis {
                    let c = (code % 7) as i64 - 3;
                    code /= 7;
                    for (yk, bk) in y.iter_mut().zip(b) {
                        *yk += Rational::from_int(c) * bk;
                    }
                }
                out.insert(sign_vector_at(g, &y));
            }
            // narrow chambers need skewed coordinates, so spread magnitudes
            for _ in 0..400 {
                let mut y = vec![rat(0); dim];
                for b in &basis {
                    let mag = 1i64 << rng.gen_range(0..8);
                    let c = Rational::from_fraction(
                        rng.gen_range(-3 * mag..=3 * mag),
                        rng.gen_range(1..=7),
                    );
                    for (yk, bk) in y.iter_mut().zip(b) {
                        *yk += c.clone() * bk;
                    }
                }
                out.insert(sign_vector_at(g, &y));
            }
        }
        for _ in 0..1000 {
            let y: Vec<Rational> = (0..dim)
                .map(|_| {
                    let mag = 1i64 << rng.gen_range(0..8);
                    Rational::from_fraction(rng.gen_range(-3 * mag..=3 * mag), rng.gen_range(1..=7))
                })
                .collect();
            out.insert(sign_vector_at(g, &y));
        }
        out
    }

    #[test]
    fn every_sampled_point_lands_in_an_enumerated_cell() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(73);
        for case in 0..12 {
            let dim = if case % 2 == 0 { 2 } else { 4 };
            let n = rng.gen_range(1..=6);
            let g = M::from_fn(dim, n, |_, _| rat(rng.gen_range(-2..=2)));
            let cells = enumerate_covectors(&g);
            check_cells(&g, &cells);
            let enumerated: BTreeSet<_> = cells.iter().map(|c| c.sigma.clone()).collect();
            let sampled = sampled_covectors(&g, &mut rng);
            for s in &sampled {
                assert!(enumerated.contains(s), "missing sampled cell {s} for {g:?}");
            }
        }
    }

    /// All 3^n candidate sign vectors in lexicographic order.
    fn all_sign_vectors(n: usize) -> Vec<SignVector> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::with_capacity(out.len() * 3);
            for prefix in &out {
                for s in [Sign::Plus, Sign::Zero, Sign::Minus] {
                    let mut v = prefix.clone();
                    v.push(s);
                    next.push(v);
                }
            }
            out = next;
        }
        out.into_iter().map(SignVector::new).collect()
    }

    #[test]
    fn enumeration_matches_exhaustive_sign_search() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(83);
        for case in 0..15 {
            let dim = 2 + case % 4;
            let n = rng.gen_range(1..=6);
            let g = M::from_fn(dim, n, |_, _| rat(rng.gen_range(-3..=3)));
            let cells = enumerate_covectors(&g);
            check_cells(&g, &cells);
            let enumerated: Vec<_> = cells.iter().map(|c| c.sigma.clone()).collect();
            let exhaustive: Vec<_> = all_sign_vectors(n)
                .into_iter()
                .filter(|sigma| realizable(&g, sigma).is_some())
                .collect();
            assert_eq!(enumerated, exhaustive, "covector set mismatch for {g:?}");
        }
    }

    #[test]
    fn few_hyperplanes_in_high_dimension_realize_everything() {
        // with fewer generic hyperplanes than dimensions every sign vector
        // is realizable: 3^n cells
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(79);
        let g = M::from_fn(6, 3, |_, _| rat(rng.gen_range(-5..=5)));
        let cells = enumerate_covectors(&g);
        assert_eq!(cells.len(), 27);
        check_cells(&g, &cells);
    }

    #[test]
    fn float_mode_enumerates_simple_arrangements() {
        let g = Matrix::<f64>::from_rows(vec![vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 1.0]]);
        let cells = enumerate_covectors(&g);
        assert_eq!(cells.len(), 13);
    }
}
