//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its runtime (visible under `cargo test --test acceptance --
//! --nocapture`). Criterion 12 (CLI determinism) lives in the CLI
//! crate's own acceptance target.

use std::sync::Arc;
use std::time::Instant;

use ndarray::{Array1, Array2};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use qdsim_core::graphham::{Hamiltonian, RepGraph, adjacency_hamiltonian};
use qdsim_core::hilbert::{Ket, WeightedSpace};
use qdsim_core::kronstruct::{
    self, KronHamiltonian, build_kron_propagator, build_kron_with_tau, dense_kron_step,
    evolve_kron,
};
use qdsim_core::ladder::{LadderSet, decompose, reconstruct};
use qdsim_core::linalg;
use qdsim_core::observables::{
    expected_number, expected_number_via_lowering, expected_product, expected_trajectory,
};
use qdsim_core::propagator::{
    build_propagator, build_with_tau, error_bound_multi, error_bound_single, exact_matrix,
};
use qdsim_core::{C64, CMat};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn pass(criterion: usize, started: Instant, what: &str) {
    println!(
        "ACCEPTANCE {criterion:>2} PASS ({:>7.3}s) {what}",
        started.elapsed().as_secs_f64()
    );
}

fn random_hermitian(n: usize, rng: &mut ChaCha20Rng) -> CMat {
    let mut a: CMat = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            a[[i, j]] = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
    }
    linalg::hermitian_part(&a)
}

fn random_euclidean_hamiltonian(n: usize, rng: &mut ChaCha20Rng) -> Hamiltonian {
    Hamiltonian::new(WeightedSpace::euclidean_shared(n), random_hermitian(n, rng)).unwrap()
}

fn random_ket(n: usize, rng: &mut ChaCha20Rng) -> Ket {
    Ket::from_coords(Array1::from_iter((0..n).map(|_| {
        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })))
}

fn double_slit_hamiltonian() -> Hamiltonian {
    adjacency_hamiltonian(&RepGraph::double_slit(), WeightedSpace::euclidean_shared(5)).unwrap()
}

#[test]
fn criterion_01_double_slit_spectrum() {
    let t0 = Instant::now();
    let h = double_slit_hamiltonian();
    let spec = h.spectrum();
    let sqrt6 = 6.0f64.sqrt();
    let expected = [sqrt6, 0.0, 0.0, 0.0, -sqrt6];
    for (k, (got, want)) in spec.eigenvalues.iter().zip(expected.iter()).enumerate() {
        assert!(
            (got - want).abs() <= 1e-12,
            "eigenvalue {k}: {got} vs {want}"
        );
    }
    assert!(t0.elapsed().as_secs_f64() < 1.0, "runtime budget exceeded");
    pass(1, t0, "double-slit eigenvalues are {±sqrt6, 0, 0, 0} within 1e-12");
}

#[test]
fn criterion_02_cayley_regression() {
    let t0 = Instant::now();
    let h = double_slit_hamiltonian();
    for &tau in &[0.05f64, 0.1, 0.2] {
        let prop = build_with_tau(&h, tau, 1).unwrap();
        let u = prop.approximant();
        let den = 3.0 * tau * tau + 2.0;
        let diag_outer = c((tau * tau + 2.0) / den, 0.0);
        let diag_inner = c(2.0 / den, 0.0);
        let edge = c(0.0, -2.0 * tau / den);
        let far_outer = c(-2.0 * tau * tau / den, 0.0);
        let inner_pair = c(-3.0 * tau * tau / den, 0.0);
        // The displayed matrix, reconstructed from its closed forms:
        // vertices {1,4,5} are the outer part, {2,3} the slits.
        let outer = [0usize, 3, 4];
        let inner = [1usize, 2];
        let mut expected: CMat = Array2::zeros((5, 5));
        for &i in &outer {
            expected[[i, i]] = diag_outer;
        }
        for &i in &inner {
            expected[[i, i]] = diag_inner;
        }
        for &i in &outer {
            for &j in &inner {
                expected[[i, j]] = edge;
                expected[[j, i]] = edge;
            }
        }
        for &i in &outer {
            for &j in &outer {
                if i != j {
                    expected[[i, j]] = far_outer;
                }
            }
        }
        expected[[1, 2]] = inner_pair;
        expected[[2, 1]] = inner_pair;
        for ((i, j), want) in expected.indexed_iter() {
            let got = u[[i, j]];
            assert!(
                (got - want).norm() <= 1e-12,
                "tau={tau} entry ({i},{j}): {got} vs {want}"
            );
        }
    }
    assert!(t0.elapsed().as_secs_f64() < 1.0, "runtime budget exceeded");
    pass(2, t0, "p=1 approximant matches the closed-form matrix at tau in {0.05, 0.1, 0.2}");
}

#[test]
fn criterion_03_ladder_fixture() {
    let t0 = Instant::now();
    let l = LadderSet::new(5).unwrap();
    let s2 = 2.0f64.sqrt();
    let s3 = 3.0f64.sqrt();
    let s5 = 5.0f64.sqrt();
    // The three printed matrices, exactly.
    let raise_rows = [
        [0.0, 0.0, 0.0, 0.0, 1.0],
        [s2, 0.0, 0.0, 0.0, 0.0],
        [0.0, s3, 0.0, 0.0, 0.0],
        [0.0, 0.0, 2.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, s5, 0.0],
    ];
    let lower_rows = [
        [0.0, s2, 0.0, 0.0, 0.0],
        [0.0, 0.0, s3, 0.0, 0.0],
        [0.0, 0.0, 0.0, 2.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, s5],
        [1.0, 0.0, 0.0, 0.0, 0.0],
    ];
    for i in 0..5 {
        for j in 0..5 {
            assert_eq!(l.raise()[[i, j]], c(raise_rows[i][j], 0.0));
            assert_eq!(l.lower()[[i, j]], c(lower_rows[i][j], 0.0));
            let want = if i == j { (i + 1) as f64 } else { 0.0 };
            assert_eq!(l.number()[[i, j]], c(want, 0.0));
        }
    }
    let prod = l.raise().dot(l.lower());
    let defect = linalg::max_abs(&(&prod - l.number()));
    assert!(defect <= 1e-14, "raise*lower defect {defect:.3e}");
    pass(3, t0, "ladder matrices match the printed fixtures, raise*lower = diag(1..5) to 1e-14");
}

#[test]
fn criterion_04_lemma1_empirical() {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(41);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.random_range(2..=16);
        let h = random_euclidean_hamiltonian(n, &mut rng);
        for &p in &[1usize, 2, 3] {
            for &ht in &[0.1, 0.5, 0.9] {
                let prop = build_propagator(&h, ht, p).unwrap();
                let exact = exact_matrix(&h, prop.tau());
                let err = linalg::spectral_norm(&(&exact - prop.approximant()));
                let bound = error_bound_single(p, ht);
                worst = worst.max(err / bound);
                assert!(
                    err <= bound * (1.0 + 1e-9),
                    "n={n} p={p} h={ht}: {err:.3e} > {bound:.3e}"
                );
            }
        }
    }
    assert!(t0.elapsed().as_secs_f64() < 30.0, "runtime budget exceeded");
    pass(
        4,
        t0,
        &format!("single-step bound holds on 200 instances (worst ratio {worst:.3})"),
    );
}

#[test]
fn criterion_05_lemma2_empirical_and_order() {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(51);
    let checkpoints = [1usize, 2, 5, 10, 25, 50, 100];
    for _ in 0..200 {
        let n = rng.random_range(2..=16);
        let h = random_euclidean_hamiltonian(n, &mut rng);
        for &p in &[1usize, 2, 3] {
            for &ht in &[0.1, 0.5, 0.9] {
                let prop = build_propagator(&h, ht, p).unwrap();
                let mut power = linalg::identity(n);
                let mut at = 0usize;
                for &m in &checkpoints {
                    while at < m {
                        power = power.dot(prop.approximant());
                        at += 1;
                    }
                    let exact = exact_matrix(&h, m as f64 * prop.tau());
                    let err = linalg::spectral_norm(&(&exact - &power));
                    let bound = error_bound_multi(p, m, ht);
                    assert!(
                        err <= bound * (1.0 + 1e-9),
                        "n={n} p={p} h={ht} m={m}: {err:.3e} > {bound:.3e}"
                    );
                }
            }
        }
    }

    // Convergence order under h-halving: slope of log(error) against
    // log(h) must reach 2p+1 - 0.2.
    let hs = [0.4f64, 0.2, 0.1];
    for &p in &[1usize, 2, 3] {
        for _ in 0..5 {
            let n = rng.random_range(2..=12);
            let h = random_euclidean_hamiltonian(n, &mut rng);
            let errors: Vec<f64> = hs
                .iter()
                .map(|&ht| {
                    let prop = build_propagator(&h, ht, p).unwrap();
                    let exact = exact_matrix(&h, prop.tau());
                    linalg::spectral_norm(&(&exact - prop.approximant()))
                })
                .collect();
            // Least-squares slope over the three points.
            let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
            let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
            let xm = xs.iter().sum::<f64>() / xs.len() as f64;
            let ym = ys.iter().sum::<f64>() / ys.len() as f64;
            let slope = xs
                .iter()
                .zip(ys.iter())
                .map(|(x, y)| (x - xm) * (y - ym))
                .sum::<f64>()
                / xs.iter().map(|x| (x - xm).powi(2)).sum::<f64>();
            let target = (2 * p + 1) as f64 - 0.2;
            assert!(
                slope >= target,
                "p={p}: observed order {slope:.3} < {target}"
            );
        }
    }
    assert!(t0.elapsed().as_secs_f64() < 60.0, "runtime budget exceeded");
    pass(5, t0, "m-step bound holds to m=100; observed order >= 2p+1-0.2");
}

#[test]
fn criterion_06_theorem1_empirical() {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(61);
    let steps = [1usize, 3, 10, 30];
    for &m_factors in &[2usize, 3] {
        for _ in 0..12 {
            let factors: Vec<Hamiltonian> = (0..m_factors)
                .map(|_| {
                    let n = rng.random_range(2..=4);
                    random_euclidean_hamiltonian(n, &mut rng)
                })
                .collect();
            let kh = KronHamiltonian::new(factors, c(0.0, 0.0)).unwrap();
            for &p in &[1usize, 2] {
                for &ht in &[0.1, 0.5, 0.9] {
                    let prop = build_kron_propagator(&kh, ht, p).unwrap();
                    let dense_h = Hamiltonian::new(
                        WeightedSpace::euclidean_shared(kh.total_dim()),
                        kh.dense().unwrap(),
                    )
                    .unwrap();
                    let step = dense_kron_step(&prop).unwrap();
                    let mut power = linalg::identity(kh.total_dim());
                    let mut at = 0usize;
                    for &m in &steps {
                        while at < m {
                            power = power.dot(&step);
                            at += 1;
                        }
                        let exact = exact_matrix(&dense_h, m as f64 * prop.tau());
                        let err = linalg::spectral_norm(&(&exact - &power));
                        let bound = kronstruct::error_bound_kron(p, m, m_factors, prop.h_sup());
                        assert!(
                            err <= bound * (1.0 + 1e-9),
                            "M={m_factors} p={p} h={ht} m={m}: {err:.3e} > {bound:.3e}"
                        );
                    }
                }
            }
        }
    }
    assert!(t0.elapsed().as_secs_f64() < 60.0, "runtime budget exceeded");
    pass(6, t0, "tensor bound holds for M in {2,3} up to m=30");
}

#[test]
fn criterion_07_unitarity_and_norm_drift() {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(71);
    for _ in 0..10 {
        let n = rng.random_range(2..=8);
        // Random SPD metric.
        let mut b: CMat = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                b[[i, j]] = c(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
            }
        }
        let metric = linalg::dagger(&b).dot(&b) + linalg::identity(n);
        let space = Arc::new(WeightedSpace::from_metric(metric).unwrap());
        let k = random_hermitian(n, &mut rng);
        let hmat = space.root_inverse().dot(&k).dot(space.root());
        let h = Hamiltonian::new(space.clone(), hmat).unwrap();
        let prop = build_propagator(&h, 0.5, 2).unwrap();

        let u = prop.approximant();
        let defect = linalg::spectral_norm(&(linalg::dagger(u).dot(u) - linalg::identity(n)));
        assert!(defect <= 1e-12 * n as f64, "unitarity defect {defect:.3e}");

        let psi0 = random_ket(n, &mut rng);
        let reference = space.norm(&psi0).unwrap();
        let traj = prop.evolve(&psi0, 1000).unwrap();
        for (step, state) in traj.states().iter().enumerate() {
            let drift = (space.norm(state).unwrap() - reference).abs() / reference;
            assert!(drift <= 1e-12, "step {step}: drift {drift:.3e}");
        }
    }
    pass(7, t0, "unitarity within 1e-12 N; norm drift within 1e-12 over 1000 steps");
}

#[test]
fn criterion_08_time_reversal() {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(81);
    for _ in 0..20 {
        let n = rng.random_range(2..=8);
        let h = random_euclidean_hamiltonian(n, &mut rng);
        let prop = build_propagator(&h, 0.6, 1).unwrap();
        let psi0 = random_ket(n, &mut rng);
        let fwd = prop.evolve(&psi0, 25).unwrap();
        let back = prop.evolve_reverse(fwd.last(), 25).unwrap();
        let diff = Ket::from_coords(back.last().coords() - psi0.coords());
        let rel = h.space().norm(&diff).unwrap() / h.space().norm(&psi0).unwrap();
        assert!(rel <= 1e-10, "round-trip error {rel:.3e}");
    }
    pass(8, t0, "evolve then evolve_reverse over 25 steps returns psi0 within 1e-10");
}

#[test]
fn criterion_09_kron_matrix_free_oracle() {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(91);
    let h = double_slit_hamiltonian();
    let kh = KronHamiltonian::new(vec![h.clone(), h.clone(), h.clone()], c(0.7, 0.0)).unwrap();
    let prop = build_kron_with_tau(&kh, 0.05, 2).unwrap();
    assert_eq!(prop.total_dim(), 125);
    let dense = dense_kron_step(&prop).unwrap();
    for trial in 0..10 {
        let psi = random_ket(125, &mut rng);
        let fast = kronstruct::apply_kron(&prop, &psi).unwrap();
        let slow = psi.apply(&dense);
        let num: f64 = fast
            .coords()
            .iter()
            .zip(slow.coords().iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let den: f64 = slow.coords().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(num <= 1e-12 * den, "trial {trial}: relative defect {:.3e}", num / den);
    }
    assert!(t0.elapsed().as_secs_f64() < 5.0, "runtime budget exceeded");
    pass(9, t0, "matrix-free apply equals dense tensor apply at 125 dims, 10 states");
}

#[test]
fn criterion_10_particular_rep_round_trip() {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(101);
    for trial in 0..50 {
        let n = rng.random_range(2..=8);
        let h = random_euclidean_hamiltonian(n, &mut rng);
        let l = LadderSet::new(n).unwrap();
        let basis = linalg::identity(n);
        let rep = decompose(&h, &l, &basis).unwrap();
        let back = reconstruct(&rep, &l, h.space(), &basis).unwrap();
        let defect = linalg::max_abs(&(&back - h.matrix()));
        let scale = h.op_norm().max(1.0);
        assert!(
            defect <= 1e-10 * scale,
            "trial {trial}: round-trip defect {defect:.3e}"
        );
    }
    pass(10, t0, "reconstruct(decompose(H)) = H for 50 random Hermitian H");
}

#[test]
fn criterion_11_observable_identity_and_factorization() {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(111);

    // Identity of the two evaluation routes on 200 random states.
    for trial in 0..200 {
        let n = rng.random_range(2..=8);
        let space = WeightedSpace::euclidean_shared(n);
        let ladder = LadderSet::new(n).unwrap();
        let psi = random_ket(n, &mut rng).normalized(&space).unwrap();
        let via_number = expected_number(&ladder, &space, &psi).unwrap();
        let via_lowering = expected_number_via_lowering(&ladder, &space, &psi).unwrap();
        assert!(
            (via_number - via_lowering).abs() <= 1e-10 * via_number.max(1.0),
            "trial {trial}: {via_number} vs {via_lowering}"
        );
        assert!(
            (1.0 - 1e-10..=n as f64 + 1e-10).contains(&via_number),
            "trial {trial}: value {via_number} outside [1, {n}]"
        );
    }

    // Example-2 shape with zero shift factorizes into three independent
    // single-particle expectation series.
    let g = RepGraph::double_slit();
    let space = WeightedSpace::euclidean_shared(5);
    let ladder = LadderSet::new(5).unwrap();
    let h = double_slit_hamiltonian();
    let kh = KronHamiltonian::new(vec![h.clone(), h.clone(), h.clone()], c(0.0, 0.0)).unwrap();
    let prop = build_kron_propagator(&kh, 0.2, 1).unwrap();
    let starts = [1usize, 3, 5];
    let psi0 = Ket::product(&[
        Ket::basis_state(5, starts[0]).unwrap(),
        Ket::basis_state(5, starts[1]).unwrap(),
        Ket::basis_state(5, starts[2]).unwrap(),
    ]);
    let m = 10;
    let traj = evolve_kron(&prop, &psi0, m).unwrap();
    let joint = expected_product(
        &[ladder.clone(), ladder.clone(), ladder.clone()],
        &[space.clone(), space.clone(), space.clone()],
        &traj,
        &[g.clone(), g.clone(), g.clone()],
    )
    .unwrap();
    let single = build_with_tau(&h, prop.tau(), 1).unwrap();
    for (alpha, &start) in starts.iter().enumerate() {
        let t = single.evolve(&Ket::basis_state(5, start).unwrap(), m).unwrap();
        let series = expected_trajectory(&ladder, &t, &g).unwrap();
        for k in 0..=m {
            let d = (joint[k].per_factor[alpha].raw - series[k].raw).abs();
            assert!(d <= 1e-10, "factor {alpha} step {k}: deviation {d:.3e}");
        }
    }
    pass(11, t0, "expectation routes agree within 1e-10; zero-shift product factorizes");
}
