//! Acceptance suite: one test per shipping criterion. Each test prints a
//! single `criterion N: PASS/FAIL` line (visible with `--nocapture`) and
//! asserts the criterion at its stated tolerance.

use std::time::{Duration, Instant};

use boxqp::arrangement::enumerate_covectors;
use boxqp::face_lp::{assemble_candidate, build_face_system, stationary_point_with_rule};
use boxqp::factorize::{minimal_rank_matrix, rank_factorize, signature, symmetric_part};
use boxqp::homogenize::hide_linear_term;
use boxqp::matrix::{rank, Matrix};
use boxqp::model::QpInstance;
use boxqp::oracle::{brute_force_solve, generate_instance, GeneratorConfig};
use boxqp::scalar::{Rational, Scalar};
use boxqp::simplex::PivotRule;
use boxqp::solver::{solve, SolverOptions};

fn rat(v: i64) -> Rational {
    Rational::from_int(v)
}

/// 300 seeded instances spanning n in 1..=6, rank 0..=min(3, n), with and
/// without linear terms, 30 of them with a pinched box coordinate.
fn corpus() -> Vec<QpInstance<Rational>> {
    (0..300u64)
        .map(|s| {
            let n = 1 + (s as usize) % 6;
            let mut cfg = GeneratorConfig::new(n, ((s / 6) as usize) % (n.min(3) + 1), s);
            cfg.with_linear_term = s % 2 == 1;
            cfg.coeff_range = (-5, 5);
            cfg.bound_range = (-5, 5);
            if s % 10 == 9 {
                cfg.degenerate_coords = 1;
            }
            generate_instance(&cfg).expect("corpus instance generates")
        })
        .collect()
}

#[test]
fn criterion_1_oracle_equivalence() {
    let started = Instant::now();
    let instances = corpus();
    let degenerate = instances
        .iter()
        .filter(|inst| (0..inst.n()).any(|i| inst.lower()[i] == inst.upper()[i]))
        .count();
    assert!(degenerate >= 30, "corpus must pinch at least 30 boxes");
    let mut checked = 0;
    for (k, inst) in instances.iter().enumerate() {
        let fast = solve(inst, &SolverOptions::default());
        let slow = brute_force_solve(inst).expect("within oracle cap");
        if fast.objective != slow.objective {
            println!(
                "criterion 1 (oracle equivalence): FAIL at instance {k}: solver {} vs oracle {}",
                fast.objective, slow.objective
            );
            panic!("criterion 1 failed");
        }
        assert!(inst.contains(&fast.maximizer));
        assert_eq!(inst.evaluate(&fast.maximizer).unwrap(), fast.objective);
        checked += 1;
    }
    println!(
        "criterion 1 (oracle equivalence): PASS — {checked}/300 exact agreements \
         ({degenerate} degenerate boxes) in {:?}",
        started.elapsed()
    );
}

#[test]
fn criterion_2_linear_term_rank_bound() {
    let mut equality_witnessed = false;
    for s in 0..100u64 {
        let n = 1 + (s as usize) % 6;
        let mut cfg = GeneratorConfig::new(n, ((s / 4) as usize) % (n.min(3) + 1), 7000 + s);
        cfg.with_linear_term = true;
        let inst = generate_instance(&cfg).expect("generates");
        assert!(inst.has_linear_term());
        let lifted = hide_linear_term(&inst);
        let before = rank(inst.quadratic());
        let after = rank(lifted.inner().quadratic());
        if after > before + 2 {
            println!(
                "criterion 2 (rank bound): FAIL at seed {s}: rank went {before} -> {after}"
            );
            panic!("criterion 2 failed");
        }
        equality_witnessed |= after == before + 2;
    }
    assert!(equality_witnessed, "no instance attained rank + 2");
    println!("criterion 2 (rank bound): PASS — 100/100 within bound, equality witnessed");
}

/// 2 x n map whose columns are pairwise non-parallel.
fn generic_planar_map(n: usize) -> Matrix<Rational> {
    Matrix::from_fn(2, n, |i, j| if i == 0 { rat(1) } else { rat(j as i64 + 1) })
}

#[test]
fn criterion_3_planar_face_count() {
    let started = Instant::now();
    for n in [2usize, 5, 10, 25, 50] {
        let cells = enumerate_covectors(&generic_planar_map(n));
        if cells.len() != 4 * n + 1 {
            println!(
                "criterion 3 (planar face count): FAIL at n={n}: {} cells, expected {}",
                cells.len(),
                4 * n + 1
            );
            panic!("criterion 3 failed");
        }
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed < Duration::from_secs(30),
        "planar enumeration took {elapsed:?}"
    );
    println!(
        "criterion 3 (planar face count): PASS — 4n+1 cells for n in {{2,5,10,25,50}} in {elapsed:?}"
    );
}

/// Rank-one instance whose reduced map has pairwise non-parallel columns.
fn rank_one_instance(n: usize) -> QpInstance<Rational> {
    let quadratic = Matrix::from_fn(n, n, |_, j| rat(j as i64 + 1));
    QpInstance::new(quadratic, vec![rat(0); n], vec![rat(-1); n], vec![rat(1); n]).unwrap()
}

#[test]
fn criterion_4_polynomial_scaling() {
    let time_one = |n: usize| -> (Duration, u64) {
        let inst = rank_one_instance(n);
        let mut best = Duration::MAX;
        let mut faces = 0;
        for _ in 0..3 {
            let started = Instant::now();
            let sol = solve(&inst, &SolverOptions::default());
            best = best.min(started.elapsed());
            faces = sol.stats.faces_enumerated;
        }
        (best, faces)
    };
    let sizes = [10usize, 20, 40, 80];
    let mut timings = Vec::new();
    for &n in &sizes {
        let (elapsed, faces) = time_one(n);
        if faces != (4 * n + 1) as u64 {
            println!(
                "criterion 4 (scaling): FAIL at n={n}: {faces} faces, expected {}",
                4 * n + 1
            );
            panic!("criterion 4 failed");
        }
        timings.push(elapsed);
    }
    // growth check between doublings; floor the clock to keep microsecond
    // noise out of the ratios
    let floor = Duration::from_millis(10);
    for w in timings.windows(2) {
        let ratio = w[1].max(floor).as_secs_f64() / w[0].max(floor).as_secs_f64();
        if ratio > 10.0 {
            println!(
                "criterion 4 (scaling): FAIL — doubling ratio {ratio:.1} exceeds 10 ({timings:?})"
            );
            panic!("criterion 4 failed");
        }
    }
    println!(
        "criterion 4 (scaling): PASS — faces exact and doubling ratios within 10: {timings:?}"
    );
}

#[test]
fn criterion_5_minimal_rank() {
    // the three worked examples
    let skew = Matrix::<Rational>::from_int_rows(&[&[0, 1], &[-1, 0]]);
    let m = minimal_rank_matrix(&skew);
    assert!(m.is_zero(), "skew form must vanish entirely");

    let saddle = Matrix::<Rational>::from_int_rows(&[&[1, 0], &[0, -1]]);
    let m = minimal_rank_matrix(&saddle);
    assert_eq!(symmetric_part(&m), symmetric_part(&saddle));
    assert_eq!(rank(&m), 1);

    let tri = Matrix::<Rational>::from_int_rows(&[&[1, 2, 2], &[0, 1, 2], &[0, 0, 1]]);
    let m = minimal_rank_matrix(&tri);
    assert_eq!(symmetric_part(&m), symmetric_part(&tri));
    assert_eq!(rank(&m), 1);

    // 100 random integer matrices
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5000);
    let mut rank_misses = Vec::new();
    for case in 0..100 {
        let n = 1 + case % 8;
        let q = Matrix::<Rational>::from_fn(n, n, |_, _| rat(rng.gen_range(-5..=5)));
        let m = minimal_rank_matrix(&q);
        assert_eq!(
            symmetric_part(&m),
            symmetric_part(&q),
            "form changed at case {case}"
        );
        let sig = signature(&q);
        let achieved = rank(&m);
        assert!(achieved >= sig.min_form_rank());
        if achieved != sig.min_form_rank() {
            rank_misses.push((case, achieved, sig.min_form_rank()));
        }
    }
    if rank_misses.is_empty() {
        println!("criterion 5 (minimal rank): PASS — 100/100 reached max(p, q)");
    } else {
        println!(
            "criterion 5 (minimal rank): FAIL — {}/100 random matrices reached max(p, q); \
             the form-preserving rank-one pairing block needs the square root of the paired \
             diagonal product, which is irrational for {} members (first miss: case {} achieved \
             {} vs target {}); no exact-rational matrix attains the target there",
            100 - rank_misses.len(),
            rank_misses.len(),
            rank_misses[0].0,
            rank_misses[0].1,
            rank_misses[0].2,
        );
        panic!(
            "criterion 5: rank target unattainable over exact rationals for {} corpus members",
            rank_misses.len()
        );
    }
}

#[test]
fn criterion_6_stationary_value_constancy() {
    let mut feasible_faces = 0;
    'outer: for s in 0..20u64 {
        let n = 2 + (s as usize) % 4;
        let mut cfg = GeneratorConfig::new(n, 1 + (s as usize) % 2, 9000 + s);
        cfg.with_linear_term = s % 2 == 0;
        let inst = generate_instance(&cfg).expect("generates");
        let lifted = hide_linear_term(&inst);
        let inner = lifted.inner();
        let factorization = rank_factorize(inner.quadratic());
        let Some(reduction) = factorization.reduction() else {
            continue;
        };
        for cell in enumerate_covectors(&reduction.map) {
            let fs = build_face_system(&reduction.map, inner.lower(), inner.upper(), &cell.sigma);
            let bland = stationary_point_with_rule(&fs, &reduction.coupling, PivotRule::Bland);
            let dantzig =
                stationary_point_with_rule(&fs, &reduction.coupling, PivotRule::LargestCoefficient);
            assert_eq!(bland.is_some(), dantzig.is_some(), "rules disagree on feasibility");
            let (Some(a), Some(b)) = (bland, dantzig) else {
                continue;
            };
            let va = assemble_candidate(&fs, &a, inner).unwrap().value;
            let vb = assemble_candidate(&fs, &b, inner).unwrap().value;
            if va != vb {
                println!(
                    "criterion 6 (value constancy): FAIL on face {}: {va} vs {vb}",
                    cell.sigma
                );
                panic!("criterion 6 failed");
            }
            feasible_faces += 1;
            if feasible_faces >= 50 {
                break 'outer;
            }
        }
    }
    assert!(feasible_faces >= 50, "only {feasible_faces} feasible faces found");
    println!(
        "criterion 6 (value constancy): PASS — {feasible_faces} faces, two pivot rules, equal values"
    );
}

#[test]
fn criterion_7_vertex_stationarity() {
    let mut vertices = 0;
    for s in 0..20u64 {
        let n = 1 + (s as usize) % 5;
        let mut cfg = GeneratorConfig::new(n, 1 + (s as usize) % n.min(3).max(1), 11_000 + s);
        cfg.with_linear_term = s % 3 == 0;
        let inst = generate_instance(&cfg).expect("generates");
        let lifted = hide_linear_term(&inst);
        let inner = lifted.inner();
        let factorization = rank_factorize(inner.quadratic());
        let Some(reduction) = factorization.reduction() else {
            continue;
        };
        for cell in enumerate_covectors(&reduction.map) {
            if cell.sigma.has_zero() {
                continue;
            }
            let fs = build_face_system(&reduction.map, inner.lower(), inner.upper(), &cell.sigma);
            if stationary_point_with_rule(&fs, &reduction.coupling, PivotRule::Bland).is_none() {
                println!(
                    "criterion 7 (vertex stationarity): FAIL — vertex face {} infeasible",
                    cell.sigma
                );
                panic!("criterion 7 failed");
            }
            vertices += 1;
        }
    }
    assert!(vertices > 0, "corpus produced no vertex faces");
    println!("criterion 7 (vertex stationarity): PASS — {vertices} vertex faces all feasible");
}

#[test]
fn criterion_8_parallel_determinism() {
    let sequential = SolverOptions::default();
    let parallel = SolverOptions {
        parallel_faces: true,
        ..SolverOptions::default()
    };
    for (k, inst) in corpus().iter().enumerate() {
        let a = solve(inst, &sequential);
        let b = solve(inst, &parallel);
        if a != b {
            println!("criterion 8 (determinism): FAIL at instance {k}");
            panic!("criterion 8 failed");
        }
    }
    println!("criterion 8 (determinism): PASS — 300/300 sequential == parallel");
}
