//! Self-verification suite: seeded empirical checks of the structural
//! invariants and the convergence bounds, reusable from tests and from
//! the command line.
//!
//! Every property draws its instances from its own deterministically
//! seeded stream, so one report is reproducible from `(dims, trials,
//! seed)` alone and a failure message can name the instance that broke.

use std::sync::Arc;

use ndarray::{Array1, Array2};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::graphham::Hamiltonian;
use crate::hilbert::{Ket, WeightedSpace};
use crate::kronstruct;
use crate::ladder::{self, LadderSet};
use crate::linalg;
use crate::propagator::{self, exact_matrix};
use crate::{C64, CMat};

/// Which deliberate defect, if any, to inject (negative control).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Scale one Padé numerator coefficient; unitarity must fail.
    PadeCoefficient,
}

/// Suite parameters.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Largest matrix dimension drawn for random instances.
    pub max_dim: usize,
    /// Random instances per property; zero yields a vacuous pass.
    pub trials: usize,
    /// RNG seed; identical seeds reproduce identical reports.
    pub seed: u64,
    pub fault: Fault,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            max_dim: 8,
            trials: 20,
            seed: 7,
            fault: Fault::None,
        }
    }
}

/// Outcome of one property check.
#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn sub_rng(seed: u64, salt: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed ^ (salt.wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
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
    Hamiltonian::new(WeightedSpace::euclidean_shared(n), random_hermitian(n, rng))
        .expect("hermitian by construction")
}

fn random_weighted_space(n: usize, rng: &mut ChaCha20Rng) -> Arc<WeightedSpace> {
    let mut b: CMat = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            b[[i, j]] = c(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
        }
    }
    let metric = linalg::dagger(&b).dot(&b) + linalg::identity(n);
    Arc::new(WeightedSpace::from_metric(metric).expect("positive definite by construction"))
}

fn random_weighted_hamiltonian(n: usize, rng: &mut ChaCha20Rng) -> Hamiltonian {
    let space = random_weighted_space(n, rng);
    let k = random_hermitian(n, rng);
    let m = space.root_inverse().dot(&k).dot(space.root());
    Hamiltonian::new(space, m).expect("self-adjoint by construction")
}

fn random_ket(n: usize, rng: &mut ChaCha20Rng) -> Ket {
    Ket::from_coords(Array1::from_iter((0..n).map(|_| {
        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })))
}

fn vacuous(name: &'static str) -> PropertyReport {
    PropertyReport {
        name,
        passed: true,
        detail: "warning: zero trials requested, vacuous pass".into(),
    }
}

fn check_unitarity(cfg: &VerifyConfig) -> PropertyReport {
    let name = "unitarity";
    if cfg.trials == 0 {
        return vacuous(name);
    }
    let mut rng = sub_rng(cfg.seed, 1);
    let mut worst = 0.0f64;
    for trial in 0..cfg.trials {
        let n = rng.random_range(2..=cfg.max_dim.max(2));
        let h = random_euclidean_hamiltonian(n, &mut rng);
        for &p in &[1usize, 2, 3] {
            for &ht in &[0.1, 0.5, 0.9] {
                let prop = match cfg.fault {
                    Fault::None => propagator::build_propagator(&h, ht, p),
                    Fault::PadeCoefficient => {
                        propagator::build_with_coefficient_fault(&h, ht, p, 1e-3)
                    }
                };
                let prop = match prop {
                    Ok(p) => p,
                    Err(e) => {
                        return PropertyReport {
                            name,
                            passed: false,
                            detail: format!("trial {trial} (seed {}): {e}", cfg.seed),
                        };
                    }
                };
                let u = prop.approximant();
                let defect = linalg::spectral_norm(
                    &(linalg::dagger(u).dot(u) - linalg::identity(n)),
                );
                worst = worst.max(defect / n as f64);
                if defect > 1e-12 * n as f64 {
                    return PropertyReport {
                        name,
                        passed: false,
                        detail: format!(
                            "trial {trial} (seed {}): n={n} p={p} h={ht} defect {defect:.3e} > {:.3e}",
                            cfg.seed,
                            1e-12 * n as f64
                        ),
                    };
                }
            }
        }
    }
    PropertyReport {
        name,
        passed: true,
        detail: format!("worst scaled defect {worst:.3e} over {} trials", cfg.trials),
    }
}

fn check_norm_preservation(cfg: &VerifyConfig) -> PropertyReport {
    let name = "norm_preservation";
    if cfg.trials == 0 {
        return vacuous(name);
    }
    let mut rng = sub_rng(cfg.seed, 2);
    let steps = 200;
    let mut worst = 0.0f64;
    for trial in 0..cfg.trials {
        let n = rng.random_range(2..=cfg.max_dim.max(2));
        let h = random_weighted_hamiltonian(n, &mut rng);
        let prop = propagator::build_propagator(&h, 0.5, 2).expect("valid parameters");
        let psi0 = random_ket(n, &mut rng);
        let reference = h.space().norm(&psi0).expect("dims match");
        let traj = prop.evolve(&psi0, steps).expect("dims match");
        for (k, state) in traj.states().iter().enumerate() {
            let drift =
                (h.space().norm(state).expect("dims match") - reference).abs() / reference;
            worst = worst.max(drift);
            if drift > 1e-12 {
                return PropertyReport {
                    name,
                    passed: false,
                    detail: format!(
                        "trial {trial} (seed {}): n={n} step {k} drift {drift:.3e}",
                        cfg.seed
                    ),
                };
            }
        }
    }
    PropertyReport {
        name,
        passed: true,
        detail: format!(
            "worst relative drift {worst:.3e} over {steps}-step trajectories"
        ),
    }
}

fn check_ladder_identity(cfg: &VerifyConfig) -> PropertyReport {
    let name = "ladder_identity";
    if cfg.trials == 0 {
        return vacuous(name);
    }
    for n in 2..=cfg.max_dim.max(3).min(ladder::MAX_FACTORIAL_DIM) {
        let l = LadderSet::new(n).expect("n >= 2");
        let prod = l.raise().dot(l.lower());
        let defect = linalg::max_abs(&(&prod - l.number()));
        if defect > 1e-14 {
            return PropertyReport {
                name,
                passed: false,
                detail: format!("n={n}: raise*lower defect {defect:.3e}"),
            };
        }
    }
    PropertyReport {
        name,
        passed: true,
        detail: format!("raise*lower = diag(1..n) for n=2..={}", cfg.max_dim.max(3)),
    }
}

fn check_particular_round_trip(cfg: &VerifyConfig) -> PropertyReport {
    let name = "particular_rep_round_trip";
    if cfg.trials == 0 {
        return vacuous(name);
    }
    let mut rng = sub_rng(cfg.seed, 3);
    for trial in 0..cfg.trials {
        let n = rng.random_range(2..=cfg.max_dim.max(2));
        let h = random_euclidean_hamiltonian(n, &mut rng);
        let l = LadderSet::new(n).expect("n >= 2");
        let basis = linalg::identity(n);
        let rep = match ladder::decompose(&h, &l, &basis) {
            Ok(r) => r,
            Err(e) => {
                return PropertyReport {
                    name,
                    passed: false,
                    detail: format!("trial {trial} (seed {}): {e}", cfg.seed),
                };
            }
        };
        let back = match ladder::reconstruct(&rep, &l, h.space(), &basis) {
            Ok(b) => b,
            Err(e) => {
                return PropertyReport {
                    name,
                    passed: false,
                    detail: format!("trial {trial} (seed {}): {e}", cfg.seed),
                };
            }
        };
        let scale = h.op_norm().max(1.0);
        let defect = linalg::max_abs(&(&back - h.matrix()));
        if defect > 1e-10 * scale {
            return PropertyReport {
                name,
                passed: false,
                detail: format!(
                    "trial {trial} (seed {}): n={n} defect {defect:.3e}",
                    cfg.seed
                ),
            };
        }
    }
    PropertyReport {
        name,
        passed: true,
        detail: format!("{} random round trips within 1e-10", cfg.trials),
    }
}

fn check_time_reversal(cfg: &VerifyConfig) -> PropertyReport {
    let name = "time_reversal";
    if cfg.trials == 0 {
        return vacuous(name);
    }
    let mut rng = sub_rng(cfg.seed, 4);
    for trial in 0..cfg.trials {
        let n = rng.random_range(2..=cfg.max_dim.max(2));
        let h = random_weighted_hamiltonian(n, &mut rng);
        let prop = propagator::build_propagator(&h, 0.4, 1).expect("valid parameters");
        let psi0 = random_ket(n, &mut rng);
        let fwd = prop.evolve(&psi0, 25).expect("dims match");
        let back = prop.evolve_reverse(fwd.last(), 25).expect("dims match");
        let diff = Ket::from_coords(back.last().coords() - psi0.coords());
        let err = h.space().norm(&diff).expect("dims match")
            / h.space().norm(&psi0).expect("dims match");
        if err > 1e-10 {
            return PropertyReport {
                name,
                passed: false,
                detail: format!(
                    "trial {trial} (seed {}): n={n} round-trip error {err:.3e}",
                    cfg.seed
                ),
            };
        }
    }
    PropertyReport {
        name,
        passed: true,
        detail: format!("{} round trips of 25 steps within 1e-10", cfg.trials),
    }
}

fn check_lemma1(cfg: &VerifyConfig) -> PropertyReport {
    let name = "lemma1_single_step_bound";
    if cfg.trials == 0 {
        return vacuous(name);
    }
    let mut rng = sub_rng(cfg.seed, 5);
    let mut worst_ratio = 0.0f64;
    for trial in 0..cfg.trials {
        let n = rng.random_range(2..=cfg.max_dim.max(2));
        let h = random_euclidean_hamiltonian(n, &mut rng);
        for &p in &[1usize, 2, 3] {
            for &ht in &[0.1, 0.5, 0.9] {
                let prop = propagator::build_propagator(&h, ht, p).expect("valid parameters");
                let exact = exact_matrix(&h, prop.tau());
                let err = linalg::spectral_norm(&(&exact - prop.approximant()));
                let bound = propagator::error_bound_single(p, ht);
                worst_ratio = worst_ratio.max(err / bound);
                if err > bound * (1.0 + 1e-9) {
                    return PropertyReport {
                        name,
                        passed: false,
                        detail: format!(
                            "trial {trial} (seed {}): n={n} p={p} h={ht} error {err:.3e} > bound {bound:.3e}",
                            cfg.seed
                        ),
                    };
                }
            }
        }
    }
    PropertyReport {
        name,
        passed: true,
        detail: format!("worst error/bound ratio {worst_ratio:.3}"),
    }
}

fn check_lemma2(cfg: &VerifyConfig) -> PropertyReport {
    let name = "lemma2_multi_step_bound";
    if cfg.trials == 0 {
        return vacuous(name);
    }
    let mut rng = sub_rng(cfg.seed, 6);
    let checkpoints = [1usize, 5, 25, 100];
    for trial in 0..cfg.trials {
        let n = rng.random_range(2..=cfg.max_dim.max(2));
        let h = random_euclidean_hamiltonian(n, &mut rng);
        for &p in &[1usize, 2] {
            for &ht in &[0.1, 0.5] {
                let prop = propagator::build_propagator(&h, ht, p).expect("valid parameters");
                let mut power = linalg::identity(n);
                let mut step = 0usize;
                for &m in &checkpoints {
                    while step < m {
                        power = power.dot(prop.approximant());
                        step += 1;
                    }
                    let exact = exact_matrix(&h, m as f64 * prop.tau());
                    let err = linalg::spectral_norm(&(&exact - &power));
                    let bound = propagator::error_bound_multi(p, m, ht);
                    if err > bound * (1.0 + 1e-9) {
                        return PropertyReport {
                            name,
                            passed: false,
                            detail: format!(
                                "trial {trial} (seed {}): n={n} p={p} h={ht} m={m} error {err:.3e} > bound {bound:.3e}",
                                cfg.seed
                            ),
                        };
                    }
                }
            }
        }
    }
    PropertyReport {
        name,
        passed: true,
        detail: format!(
            "bounds hold at m in {checkpoints:?} over {} trials",
            cfg.trials
        ),
    }
}

fn check_theorem1(cfg: &VerifyConfig) -> PropertyReport {
    let name = "theorem1_tensor_bound";
    if cfg.trials == 0 {
        return vacuous(name);
    }
    let mut rng = sub_rng(cfg.seed, 7);
    let trials = cfg.trials.min(10);
    for trial in 0..trials {
        for &m_factors in &[2usize, 3] {
            let factors: Vec<Hamiltonian> = (0..m_factors)
                .map(|_| {
                    let n = rng.random_range(2..=4);
                    random_euclidean_hamiltonian(n, &mut rng)
                })
                .collect();
            let kh = kronstruct::KronHamiltonian::new(factors, c(0.0, 0.0))
                .expect("nonempty factors");
            let prop = kronstruct::build_kron_propagator(&kh, 0.5, 1)
                .expect("valid parameters");
            let dense_h = Hamiltonian::new(
                WeightedSpace::euclidean_shared(kh.total_dim()),
                kh.dense().expect("within dense guard"),
            )
            .expect("kron sum of hermitian factors is hermitian");
            let step = kronstruct::dense_kron_step(&prop).expect("within dense guard");
            let mut power = linalg::identity(kh.total_dim());
            let mut at = 0usize;
            for &m in &[1usize, 5, 15, 30] {
                while at < m {
                    power = power.dot(&step);
                    at += 1;
                }
                let exact = exact_matrix(&dense_h, m as f64 * prop.tau());
                let err = linalg::spectral_norm(&(&exact - &power));
                let bound = kronstruct::error_bound_kron(1, m, m_factors, prop.h_sup());
                if err > bound * (1.0 + 1e-9) {
                    return PropertyReport {
                        name,
                        passed: false,
                        detail: format!(
                            "trial {trial} (seed {}): M={m_factors} m={m} error {err:.3e} > bound {bound:.3e}",
                            cfg.seed
                        ),
                    };
                }
            }
        }
    }
    PropertyReport {
        name,
        passed: true,
        detail: format!("tensor bound holds for M in {{2,3}} over {trials} trials"),
    }
}

/// Run every property and collect the reports.
pub fn run_all(cfg: &VerifyConfig) -> Vec<PropertyReport> {
    vec![
        check_unitarity(cfg),
        check_norm_preservation(cfg),
        check_ladder_identity(cfg),
        check_particular_round_trip(cfg),
        check_time_reversal(cfg),
        check_lemma1(cfg),
        check_lemma2(cfg),
        check_theorem1(cfg),
    ]
}
