//! Property tests over randomized inputs: structural identities of the
//! oscillator/covariance machinery, agreement between the three
//! entropy routes, discrete-state inequalities, and metric-tensor
//! invariances.

use gaussinfo::classical::{
    bohr_sommerfeld, classical_covariance, classical_entropy, classical_purity, ActionAssignment,
};
use gaussinfo::discrete::{
    partial_trace, purity_discrete, von_neumann_discrete, DensityMatrix, Subsystem,
};
use gaussinfo::gaussian::{
    linear_entropy_gaussian, purity, symplectic_eigenvalues, von_neumann_entropy_gaussian,
    CovarianceMatrix, SymplecticForm,
};
use gaussinfo::oscillator::{
    build_chain, ground_state_covariance, normal_modes, CouplingMatrix, GroundStateSpec,
};
use gaussinfo::qgt::{phase_space_qmt, qgt_perturbative, ParametrizedHamiltonian};
use gaussinfo::reduction::{
    block_entropy, block_purity, eigenvalue_ladder, mode_couplings, reduce_covariance,
    verify_det_identity, BlockDecomposition,
};
use nalgebra::DMatrix;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Cross-route tolerances: two floating-point pipelines that share no
// intermediate values agree to roughly the eigen-solver's backward
// error times the conditioning of the spectrum, budgeted here with an
// order of magnitude to spare.
const EXACT_TOL: f64 = 1e-12;
const EIGEN_TOL: f64 = 1e-10;
const CROSS_ROUTE_TOL: f64 = 1e-9;

fn random_pd_coupling(rng: &mut ChaCha8Rng, n: usize) -> CouplingMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let k = a.transpose() * &a + DMatrix::<f64>::identity(n, n) * 0.5;
    CouplingMatrix::from_matrix(k).expect("A^T A + I/2 is positive definite")
}

fn ground_sigma(k: &CouplingMatrix<f64>, hbar: f64) -> CovarianceMatrix<f64> {
    let spec = GroundStateSpec::new(normal_modes(k).unwrap(), hbar).unwrap();
    ground_state_covariance(&spec)
}

fn pp_block(sigma: &CovarianceMatrix<f64>) -> DMatrix<f64> {
    let n = sigma.modes();
    sigma.matrix().view((n, n), (n, n)).into_owned()
}

/// Random symplectic matrix from single-mode rotations, squeezes,
/// shears, and an orthogonal two-block mixing, all of which preserve Ω.
fn random_symplectic(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let dim = 2 * n;
    let mut s = DMatrix::<f64>::identity(dim, dim);
    for i in 0..n {
        let angle: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let (sin, cos) = angle.sin_cos();
        let mut rot = DMatrix::<f64>::identity(dim, dim);
        rot[(i, i)] = cos;
        rot[(i, n + i)] = sin;
        rot[(n + i, i)] = -sin;
        rot[(n + i, n + i)] = cos;
        s = rot * s;

        let r: f64 = rng.gen_range(-0.5..0.5);
        let mut squeeze = DMatrix::<f64>::identity(dim, dim);
        squeeze[(i, i)] = r.exp();
        squeeze[(n + i, n + i)] = (-r).exp();
        s = squeeze * s;

        let lam: f64 = rng.gen_range(-0.7..0.7);
        let mut shear = DMatrix::<f64>::identity(dim, dim);
        shear[(n + i, i)] = lam;
        s = shear * s;
    }
    // orthogonal mixing applied identically to the q and p blocks
    let raw = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let o = raw.qr().q();
    let mut mix = DMatrix::<f64>::zeros(dim, dim);
    mix.view_mut((0, 0), (n, n)).copy_from(&o);
    mix.view_mut((n, n), (n, n)).copy_from(&o);
    mix * s
}

/// Direct sum of two covariance matrices in (q…,p…) ordering.
fn direct_sum(a: &CovarianceMatrix<f64>, b: &CovarianceMatrix<f64>) -> CovarianceMatrix<f64> {
    let (na, nb) = (a.modes(), b.modes());
    let n = na + nb;
    let mut m = DMatrix::<f64>::zeros(2 * n, 2 * n);
    let place = |m: &mut DMatrix<f64>, src: &DMatrix<f64>, modes: usize, offset: usize| {
        for i in 0..2 * modes {
            for j in 0..2 * modes {
                let ii = offset + i % modes + (i / modes) * n;
                let jj = offset + j % modes + (j / modes) * n;
                m[(ii, jj)] = src[(i, j)];
            }
        }
    };
    place(&mut m, a.matrix(), na, 0);
    place(&mut m, b.matrix(), nb, na);
    CovarianceMatrix::from_matrix(m).unwrap()
}

#[test]
fn normal_modes_reconstruct_random_couplings() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [2usize, 3, 5, 8, 16] {
        let k = random_pd_coupling(&mut rng, n);
        let modes = normal_modes(&k).unwrap();
        let uut = modes.u() * modes.u().transpose();
        assert!((uut - DMatrix::<f64>::identity(n, n)).amax() < EIGEN_TOL);
        let w2u = DMatrix::from_diagonal(&modes.w().map(|w| w * w)) * modes.u();
        let rebuilt = modes.u().transpose() * w2u;
        let rel = (rebuilt - k.entries()).amax() / k.entries().amax();
        assert!(rel < EIGEN_TOL, "reconstruction residual {rel} at n={n}");
    }
}

#[test]
fn ground_state_product_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for &hbar in &[1.0, 0.3, 2.0] {
        let k = random_pd_coupling(&mut rng, 6);
        let sigma = ground_sigma(&k, hbar);
        let m = sigma.matrix();
        let qq = m.view((0, 0), (6, 6)).into_owned();
        let pp = m.view((6, 6), (6, 6)).into_owned();
        let expected = DMatrix::<f64>::identity(6, 6) * (hbar / 2.0) * (hbar / 2.0);
        assert!((pp * qq - expected).amax() < EIGEN_TOL);
    }
}

#[test]
fn symplectic_transformations_preserve_spectrum_and_measures() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let hbar = 1.0;
    for n in [1usize, 2, 4] {
        let k = random_pd_coupling(&mut rng, n);
        let sigma = ground_sigma(&k, hbar);
        // make it mixed by dropping one oscillator from a larger chain
        let sigma = if n > 1 {
            reduce_covariance(&sigma, &(0..n - 1).collect::<Vec<_>>()).unwrap()
        } else {
            sigma
        };
        let s = random_symplectic(&mut rng, sigma.modes());
        let omega = SymplecticForm::new(sigma.modes()).matrix::<f64>();
        assert!((&s * &omega * s.transpose() - &omega).amax() < 1e-10);

        let transformed =
            CovarianceMatrix::from_matrix(&s * sigma.matrix() * s.transpose()).unwrap();
        let nus0 = symplectic_eigenvalues(&sigma).unwrap();
        let nus1 = symplectic_eigenvalues(&transformed).unwrap();
        for i in 0..sigma.modes() {
            assert!((nus0[i] - nus1[i]).abs() < CROSS_ROUTE_TOL);
        }
        let mu0 = purity(&sigma, hbar).unwrap();
        let mu1 = purity(&transformed, hbar).unwrap();
        assert!((mu0 - mu1).abs() < CROSS_ROUTE_TOL);
        let s0 = von_neumann_entropy_gaussian(&sigma, hbar).unwrap();
        let s1 = von_neumann_entropy_gaussian(&transformed, hbar).unwrap();
        assert!((s0 - s1).abs() < CROSS_ROUTE_TOL);
    }
}

#[test]
fn purity_multiplicative_entropy_additive() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let hbar = 1.0;
    for _ in 0..5 {
        let ka = random_pd_coupling(&mut rng, 3);
        let kb = random_pd_coupling(&mut rng, 2);
        let sa = reduce_covariance(&ground_sigma(&ka, hbar), &[0, 1]).unwrap();
        let sb = reduce_covariance(&ground_sigma(&kb, hbar), &[0]).unwrap();
        let joint = direct_sum(&sa, &sb);
        let mu_joint = purity(&joint, hbar).unwrap();
        let mu_prod = purity(&sa, hbar).unwrap() * purity(&sb, hbar).unwrap();
        assert!((mu_joint - mu_prod).abs() < EXACT_TOL);
        let s_joint = von_neumann_entropy_gaussian(&joint, hbar).unwrap();
        let s_sum = von_neumann_entropy_gaussian(&sa, hbar).unwrap()
            + von_neumann_entropy_gaussian(&sb, hbar).unwrap();
        assert!((s_joint - s_sum).abs() < EIGEN_TOL);
        // linear entropy is consistent with purity by definition
        let sl = linear_entropy_gaussian(&joint, hbar).unwrap();
        assert!((sl - (1.0 - mu_joint)).abs() < 1e-15);
    }
}

#[test]
fn determinant_factors_into_symplectic_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for &hbar in &[1.0, 0.5] {
        for n in [1usize, 2, 4] {
            let k = random_pd_coupling(&mut rng, n + 1);
            let sigma = ground_sigma(&k, hbar);
            let reduced = reduce_covariance(&sigma, &(0..n).collect::<Vec<_>>()).unwrap();
            let nus = symplectic_eigenvalues(&reduced.scaled(1.0 / hbar)).unwrap();
            let det = reduced.matrix().clone().determinant();
            let prod: f64 = nus.iter().map(|&nu| nu * nu).product();
            let expected = hbar.powi(2 * n as i32) * prod;
            assert!(
                ((det - expected) / expected).abs() < CROSS_ROUTE_TOL,
                "det factorization failed at n={n}, hbar={hbar}"
            );
            // purity equals the product of (2 nu)^-1
            let mu = purity(&reduced, hbar).unwrap();
            let mu_nu: f64 = nus.iter().map(|&nu| 1.0 / (2.0 * nu)).product();
            assert!((mu - mu_nu).abs() < CROSS_ROUTE_TOL);
        }
    }
}

#[test]
fn one_mode_spectrum_is_sqrt_det() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..20 {
        let a: f64 = rng.gen_range(0.2..3.0);
        let c: f64 = rng.gen_range(0.2..3.0);
        let b: f64 = rng.gen_range(-0.9..0.9) * (a * c).sqrt();
        let sigma =
            CovarianceMatrix::from_matrix(DMatrix::from_row_slice(2, 2, &[a, b, b, c])).unwrap();
        let nu = symplectic_eigenvalues(&sigma).unwrap()[0];
        assert!((nu - (a * c - b * b).sqrt()).abs() < EXACT_TOL);
    }
}

#[test]
fn spectral_and_symplectic_routes_agree_on_random_chains() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let hbar = 1.0;
    for _ in 0..8 {
        let n_total = rng.gen_range(3..9);
        let keep = rng.gen_range(1..n_total);
        let k = random_pd_coupling(&mut rng, n_total);
        let sigma = ground_sigma(&k, hbar);
        let s_xi = block_entropy(&pp_block(&sigma), keep, hbar).unwrap();
        let reduced = reduce_covariance(&sigma, &(0..keep).collect::<Vec<_>>()).unwrap();
        let s_nu = von_neumann_entropy_gaussian(&reduced, hbar).unwrap();
        assert!(
            (s_xi - s_nu).abs() < CROSS_ROUTE_TOL,
            "entropy routes disagree: {s_xi} vs {s_nu}"
        );
        let spectrum = mode_couplings(&pp_block(&sigma), keep, hbar).unwrap();
        let mut nus_spec: Vec<f64> = spectrum.nu().iter().copied().collect();
        nus_spec.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let nus_cov = symplectic_eigenvalues(&reduced.scaled(1.0 / hbar)).unwrap();
        for i in 0..keep {
            assert!((nus_spec[i] - nus_cov[i]).abs() < EIGEN_TOL);
        }
    }
}

#[test]
fn complement_blocks_have_equal_entropy() {
    let hbar = 1.0;
    let k = build_chain(12, 1.0, 1.0, false).unwrap();
    let sigma = ground_sigma(&k, hbar);
    for n in 1..12usize {
        let front = block_entropy(&pp_block(&sigma), n, hbar).unwrap();
        let back_indices: Vec<usize> = (n..12).collect();
        let back_sigma = reduce_covariance(&sigma, &back_indices).unwrap();
        let back = von_neumann_entropy_gaussian(&back_sigma, hbar).unwrap();
        assert!(
            (front - back).abs() < 1e-8,
            "complementarity broken at n={n}: {front} vs {back}"
        );
    }
}

#[test]
fn ladder_normalization_and_purity_resummation() {
    let hbar = 1.0;
    let k = build_chain(4, 1.0, 2.5, false).unwrap();
    let sigma = ground_sigma(&k, hbar);
    let spectrum = mode_couplings(&pp_block(&sigma), 2, hbar).unwrap();
    let xi_max = spectrum.xi()[0];
    let cutoff = 60u32;
    let mut prob_sum = 0.0;
    let mut purity_sum = 0.0;
    for m0 in 0..=cutoff {
        for m1 in 0..=cutoff {
            let p = eigenvalue_ladder(&spectrum, &[m0, m1]).unwrap();
            prob_sum += p;
            purity_sum += p * p;
        }
    }
    assert!(prob_sum <= 1.0 + 1e-12);
    // truncated normalization is exactly Π (1 − ξᵢ^{c+1})
    let truncated: f64 = spectrum
        .xi()
        .iter()
        .map(|&xi| 1.0 - xi.powi(cutoff as i32 + 1))
        .product();
    assert!((prob_sum - truncated).abs() < 1e-10);
    assert!(truncated >= 1.0 - 2.0 * xi_max.powi(cutoff as i32 + 1));
    let mu_closed: f64 = spectrum
        .xi()
        .iter()
        .map(|&xi| (1.0 - xi) / (1.0 + xi))
        .product();
    assert!((purity_sum - mu_closed).abs() < 1e-10);
    let decomp = BlockDecomposition::new(&sigma, 2).unwrap();
    assert!((block_purity(&decomp, hbar).unwrap() - mu_closed).abs() < EXACT_TOL);
}

#[test]
fn det_identity_on_random_chains() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for _ in 0..30 {
        let n_total = rng.gen_range(3..13);
        let keep = rng.gen_range(1..n_total);
        let k = random_pd_coupling(&mut rng, n_total);
        let sigma = ground_sigma(&k, 1.0);
        let residual = verify_det_identity(&pp_block(&sigma), keep).unwrap();
        assert!(residual < 1e-8, "det identity residual {residual}");
    }
}

#[test]
fn classical_route_reproduces_quantum_measures() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for &hbar in &[1.0, 0.4] {
        for _ in 0..4 {
            let n_total = rng.gen_range(2..7);
            let keep = rng.gen_range(1..=n_total);
            let k = random_pd_coupling(&mut rng, n_total);
            let modes = normal_modes(&k).unwrap();
            let bs =
                bohr_sommerfeld(&ActionAssignment::uniform(n_total, 1.0).unwrap(), hbar).unwrap();
            let sigma_cl = classical_covariance(&modes, &bs).unwrap();
            let block: Vec<usize> = (0..keep).collect();
            let reduced = reduce_covariance(&sigma_cl, &block).unwrap();
            let kept_actions = ActionAssignment::uniform(keep, hbar / 2.0).unwrap();
            let mu_cl = classical_purity(&reduced, &kept_actions).unwrap();
            let mu_q = purity(&reduced, hbar).unwrap();
            assert!((mu_cl - mu_q).abs() < EXACT_TOL);
            let s_cl = classical_entropy(&reduced, &kept_actions).unwrap();
            let s_q = von_neumann_entropy_gaussian(&reduced, hbar).unwrap();
            assert!((s_cl - s_q).abs() < EIGEN_TOL);
        }
    }
}

#[test]
fn uniform_actions_cancel_in_classical_measures() {
    let k = build_chain(4, 1.0, 1.3, false).unwrap();
    let modes = normal_modes(&k).unwrap();
    let mut first: Option<(f64, f64)> = None;
    for &alpha in &[0.25, 0.5, 1.0, 4.0] {
        let actions = ActionAssignment::uniform(4, alpha).unwrap();
        let sigma = classical_covariance(&modes, &actions).unwrap();
        let block = reduce_covariance(&sigma, &[0, 1]).unwrap();
        let kept = ActionAssignment::uniform(2, alpha).unwrap();
        let mu = classical_purity(&block, &kept).unwrap();
        let s = classical_entropy(&block, &kept).unwrap();
        match first {
            None => first = Some((mu, s)),
            Some((mu0, s0)) => {
                assert!((mu - mu0).abs() < EXACT_TOL);
                assert!((s - s0).abs() < EXACT_TOL);
            }
        }
    }
}

fn random_mixed_two_qubit(rng: &mut ChaCha8Rng) -> DensityMatrix<f64> {
    let a = DMatrix::from_fn(4, 4, |_, _| {
        Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let w = &a * a.adjoint();
    let trace = w.trace().re;
    DensityMatrix::from_matrix(w / Complex::new(trace, 0.0)).unwrap()
}

#[test]
fn subadditivity_and_araki_lieb() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..100 {
        let rho = random_mixed_two_qubit(&mut rng);
        let s_ab = von_neumann_discrete(&rho);
        let s_a = von_neumann_discrete(&partial_trace(&rho, (2, 2), Subsystem::A).unwrap());
        let s_b = von_neumann_discrete(&partial_trace(&rho, (2, 2), Subsystem::B).unwrap());
        assert!(s_ab <= s_a + s_b + EIGEN_TOL, "subadditivity violated");
        assert!(
            s_ab >= (s_a - s_b).abs() - EIGEN_TOL,
            "Araki-Lieb violated: {s_ab} < |{s_a} - {s_b}|"
        );
    }
}

#[test]
fn discrete_measures_invariant_under_random_unitaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..20 {
        let rho = random_mixed_two_qubit(&mut rng);
        let raw = DMatrix::from_fn(4, 4, |_, _| {
            Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let u = raw.qr().q();
        let rotated = DensityMatrix::from_matrix(&u * rho.entries() * u.adjoint()).unwrap();
        assert!((purity_discrete(&rotated) - purity_discrete(&rho)).abs() < EIGEN_TOL);
        assert!((von_neumann_discrete(&rotated) - von_neumann_discrete(&rho)).abs() < EIGEN_TOL);
    }
}

#[test]
fn metric_tensor_is_psd_and_curvature_free_for_real_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..10 {
        let (x, y): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let ph = ParametrizedHamiltonian::new(3, vec![x, y], |p: &[f64]| {
            let (a, b) = (p[0], p[1]);
            DMatrix::from_row_slice(
                3,
                3,
                &[
                    Complex::new(a, 0.0),
                    Complex::new(b, 0.0),
                    Complex::new(0.3, 0.0),
                    Complex::new(b, 0.0),
                    Complex::new(-a, 0.0),
                    Complex::new(b * a, 0.0),
                    Complex::new(0.3, 0.0),
                    Complex::new(b * a, 0.0),
                    Complex::new(2.0 + a, 0.0),
                ],
            )
        })
        .unwrap();
        let tensor = match qgt_perturbative(&ph, 0) {
            Ok(t) => t,
            // random parameters occasionally produce near-degenerate levels
            Err(gaussinfo::Error::DegenerateLevel { .. }) => continue,
            Err(e) => panic!("unexpected error {e:?}"),
        };
        let eigs = tensor.g.clone().symmetric_eigenvalues();
        assert!(eigs.iter().all(|&l| l > -1e-10), "metric not PSD");
        assert!(
            tensor.f.amax() < 1e-12,
            "real family must be curvature-free"
        );
    }
}

#[test]
fn phase_space_metric_matches_covariance_blocks() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let hbar = 0.8;
    let k = random_pd_coupling(&mut rng, 3);
    let sigma = ground_sigma(&k, hbar);
    let g = phase_space_qmt(&sigma, hbar).unwrap();
    let m = sigma.matrix();
    for a in 0..3 {
        for b in 0..3 {
            assert!((g[(a, b)] - m[(3 + a, 3 + b)] / (hbar * hbar)).abs() < 1e-14);
            assert!((g[(3 + a, 3 + b)] - m[(a, b)] / (hbar * hbar)).abs() < 1e-14);
        }
    }
    assert!(
        g.cholesky().is_some(),
        "vacuum phase-space metric must be PD"
    );
}

#[test]
fn f32_routes_agree_at_reduced_precision() {
    let k = build_chain::<f32>(2, 1.0, 4.0, false).unwrap();
    let spec = GroundStateSpec::new(normal_modes(&k).unwrap(), 1.0f32).unwrap();
    let sigma = ground_state_covariance(&spec);
    let reduced = reduce_covariance(&sigma, &[0]).unwrap();
    let mu = purity(&reduced, 1.0f32).unwrap();
    assert!((mu - 3.0f32.sqrt() / 2.0).abs() < 1e-5);
    let s_nu = von_neumann_entropy_gaussian(&reduced, 1.0f32).unwrap();
    let n = sigma.modes();
    let pp = sigma.matrix().view((n, n), (n, n)).into_owned();
    let s_xi = block_entropy(&pp, 1, 1.0f32).unwrap();
    assert!((s_nu - s_xi).abs() < 1e-4);
    assert!((s_nu - 0.2782387f32).abs() < 1e-4);
}
