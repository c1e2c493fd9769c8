//! Subsystem reduction of Gaussian states and the density-matrix
//! spectral route for block entropy: the reduced state of n oscillators
//! out of N factorizes into per-mode geometric eigenvalue ladders
//! p_k = (1−ξᵢ)ξᵢᵏ, from which entropy and purity follow in closed
//! form.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::gaussian::CovarianceMatrix;
use crate::scalar::{as_f64, real, Real};

/// Couplings φ this far outside [0, 1) are treated as round-off and
/// clamped; anything worse means the block computation lost accuracy.
const PHI_TOL: f64 = 1e-9;

/// Blocks of a covariance matrix split after the first `n` oscillators:
/// `a`, `b`, `c` tile the p-p covariance, `e`, `f`, `g` the q-q one.
#[derive(Debug, Clone)]
pub struct BlockDecomposition<T: Real> {
    n: usize,
    a: DMatrix<T>,
    b: DMatrix<T>,
    c: DMatrix<T>,
    e: DMatrix<T>,
    f: DMatrix<T>,
    g: DMatrix<T>,
}

impl<T: Real> BlockDecomposition<T> {
    /// Splits σ after the first `n` of its N oscillators (1 ≤ n ≤ N).
    pub fn new(sigma: &CovarianceMatrix<T>, n: usize) -> Result<Self> {
        let total = sigma.modes();
        if n == 0 || n > total {
            return Err(Error::InvalidSubsystem(format!(
                "block size {n} out of range 1..={total}"
            )));
        }
        let m = sigma.matrix();
        let rest = total - n;
        Ok(Self {
            n,
            a: m.view((total, total), (n, n)).into_owned(),
            b: m.view((total, total + n), (n, rest)).into_owned(),
            c: m.view((total + n, total + n), (rest, rest)).into_owned(),
            e: m.view((0, 0), (n, n)).into_owned(),
            f: m.view((0, n), (n, rest)).into_owned(),
            g: m.view((n, n), (rest, rest)).into_owned(),
        })
    }

    /// Kept block size n.
    pub fn kept(&self) -> usize {
        self.n
    }

    /// Kept p-p block.
    pub fn a(&self) -> &DMatrix<T> {
        &self.a
    }

    /// Kept-environment p-p coupling block.
    pub fn b(&self) -> &DMatrix<T> {
        &self.b
    }

    /// Environment p-p block.
    pub fn c(&self) -> &DMatrix<T> {
        &self.c
    }

    /// Kept q-q block.
    pub fn e(&self) -> &DMatrix<T> {
        &self.e
    }

    /// Kept-environment q-q coupling block.
    pub fn f(&self) -> &DMatrix<T> {
        &self.f
    }

    /// Environment q-q block.
    pub fn g(&self) -> &DMatrix<T> {
        &self.g
    }
}

/// Per-mode spectral data of a reduced Gaussian state: coupling φᵢ,
/// ladder ratio ξᵢ, and symplectic eigenvalue νᵢ, sorted by ξ
/// descending.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpectrum<T: Real> {
    phi: DVector<T>,
    xi: DVector<T>,
    nu: DVector<T>,
}

impl<T: Real> ModeSpectrum<T> {
    /// Validating constructor for externally computed spectra; enforces
    /// ξᵢ = φᵢ/(1+√(1−φᵢ²)) within 1e-12 and νᵢ = ½(1+ξᵢ)/(1−ξᵢ)
    /// within 1e-10.
    pub fn new(phi: DVector<T>, xi: DVector<T>, nu: DVector<T>) -> Result<Self> {
        if phi.len() != xi.len() || xi.len() != nu.len() {
            return Err(Error::InvalidArgument(
                "phi, xi, nu must have equal lengths".into(),
            ));
        }
        let one = T::one();
        for i in 0..phi.len() {
            let (p, x, v) = (phi[i], xi[i], nu[i]);
            if p < T::zero() || p >= one || x < T::zero() || x >= one {
                return Err(Error::InvalidArgument(format!(
                    "mode {i}: phi and xi must lie in [0,1), got phi={}, xi={}",
                    as_f64(p),
                    as_f64(x)
                )));
            }
            let x_ref = xi_from_phi(p);
            if (x - x_ref).abs() > real::<T>(1e-12) {
                return Err(Error::InvalidArgument(format!(
                    "mode {i}: xi={} inconsistent with phi={}",
                    as_f64(x),
                    as_f64(p)
                )));
            }
            let v_ref = nu_from_xi(x);
            if (v - v_ref).abs() > real::<T>(1e-10) {
                return Err(Error::InvalidArgument(format!(
                    "mode {i}: nu={} inconsistent with xi={}",
                    as_f64(v),
                    as_f64(x)
                )));
            }
        }
        Ok(Self { phi, xi, nu })
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.len() == 0
    }

    pub fn phi(&self) -> &DVector<T> {
        &self.phi
    }

    pub fn xi(&self) -> &DVector<T> {
        &self.xi
    }

    pub fn nu(&self) -> &DVector<T> {
        &self.nu
    }
}

fn xi_from_phi<T: Real>(phi: T) -> T {
    phi / (T::one() + (T::one() - phi * phi).sqrt())
}

fn nu_from_xi<T: Real>(xi: T) -> T {
    real::<T>(0.5) * (T::one() + xi) / (T::one() - xi)
}

/// Gaussian partial trace at covariance level: the principal submatrix
/// over the kept oscillators' q and p rows, in the order given.
pub fn reduce_covariance<T: Real>(
    sigma: &CovarianceMatrix<T>,
    keep: &[usize],
) -> Result<CovarianceMatrix<T>> {
    let total = sigma.modes();
    if keep.is_empty() {
        return Err(Error::InvalidSubsystem("kept index set is empty".into()));
    }
    for (pos, &i) in keep.iter().enumerate() {
        if i >= total {
            return Err(Error::InvalidSubsystem(format!(
                "oscillator index {i} out of range 0..{total}"
            )));
        }
        if keep[..pos].contains(&i) {
            return Err(Error::InvalidSubsystem(format!(
                "oscillator index {i} repeated"
            )));
        }
    }
    let idx: Vec<usize> = keep
        .iter()
        .copied()
        .chain(keep.iter().map(|&i| i + total))
        .collect();
    let m = sigma.matrix();
    let sub = DMatrix::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])]);
    Ok(CovarianceMatrix::from_blocks_unchecked(sub))
}

/// A, M = BC⁻¹Bᵀ, and V = Θ^{−1/2}λMλᵀΘ^{−1/2}/2 from the diagonalization
/// A − M/2 = λᵀΘλ; shared by the spectrum and the determinant identity.
fn srednicki_chain<T: Real>(
    s: &DMatrix<T>,
    n: usize,
) -> Result<(DMatrix<T>, DMatrix<T>, DMatrix<T>)> {
    let total = s.nrows();
    let rest = total - n;
    let a = s.view((0, 0), (n, n)).into_owned();
    let b = s.view((0, n), (n, rest)).into_owned();
    let c = s.view((n, n), (rest, rest)).into_owned();
    let chol_c = c.cholesky().ok_or(Error::SingularEnvironmentBlock)?;
    let m = &b * chol_c.solve(&b.transpose());
    let m = (&m + m.transpose()) * real::<T>(0.5);
    let centered = &a - &m * real::<T>(0.5);
    let eig = centered.symmetric_eigen();
    let mut inv_sqrt_theta = DVector::<T>::zeros(n);
    for i in 0..n {
        let theta = eig.eigenvalues[i];
        if theta <= T::zero() {
            return Err(Error::NumericalBreakdown(format!(
                "A - M/2 has nonpositive eigenvalue {}",
                as_f64(theta)
            )));
        }
        inv_sqrt_theta[i] = T::one() / theta.sqrt();
    }
    // rows of λ are the eigenvectors, so λMλᵀ = Qᵀ M Q with Q = eigvec columns
    let lm = eig.eigenvectors.transpose() * &m * &eig.eigenvectors;
    let mut v = DMatrix::<T>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            v[(i, j)] = inv_sqrt_theta[i] * lm[(i, j)] * inv_sqrt_theta[j] * real::<T>(0.5);
        }
    }
    let v = (&v + v.transpose()) * real::<T>(0.5);
    Ok((a, m, v))
}

/// Mode couplings φᵢ of the first `n` oscillators from the p-p
/// covariance block, with ξᵢ and νᵢ attached; ħ cancels in φ, so the
/// chain runs on σ_pp/ħ only to keep intermediates near unit scale.
pub fn mode_couplings<T: Real>(
    sigma_pp: &DMatrix<T>,
    n: usize,
    hbar: T,
) -> Result<ModeSpectrum<T>> {
    let total = sigma_pp.nrows();
    if sigma_pp.ncols() != total || total == 0 {
        return Err(Error::InvalidArgument(format!(
            "p-p covariance must be square, got {}x{}",
            sigma_pp.nrows(),
            sigma_pp.ncols()
        )));
    }
    if n == 0 || n >= total {
        return Err(Error::InvalidSubsystem(format!(
            "kept count {n} must lie in 1..{total}"
        )));
    }
    if hbar <= T::zero() {
        return Err(Error::InvalidArgument(format!(
            "hbar must be positive, got {}",
            as_f64(hbar)
        )));
    }
    let s = sigma_pp / hbar;
    let (_, _, v) = srednicki_chain(&s, n)?;
    let eig = v.symmetric_eigen();
    let tol = real::<T>(PHI_TOL);
    let mut phi = Vec::with_capacity(n);
    for i in 0..n {
        let p = eig.eigenvalues[i];
        if p < -tol || p >= T::one() {
            return Err(Error::NumericalBreakdown(format!(
                "mode coupling {} outside [0,1)",
                as_f64(p)
            )));
        }
        phi.push(if p < T::zero() { T::zero() } else { p });
    }
    let mut order: Vec<usize> = (0..n).collect();
    // descending xi (equivalently phi), ties by original index
    order.sort_by(|&i, &j| {
        phi[j]
            .partial_cmp(&phi[i])
            .expect("couplings are finite")
            .then(i.cmp(&j))
    });
    let phi = DVector::from_iterator(n, order.iter().map(|&i| phi[i]));
    let xi = phi.map(xi_from_phi);
    let nu = xi.map(nu_from_xi);
    Ok(ModeSpectrum { phi, xi, nu })
}

/// Entropy of one geometric eigenvalue ladder:
/// S(ξ) = −ln(1−ξ) − (ξ/(1−ξ)) ln ξ, continuous at ξ = 0.
pub fn entropy_from_xi<T: Real>(xi: T) -> Result<T> {
    if xi < T::zero() || xi >= T::one() {
        return Err(Error::InvalidArgument(format!(
            "xi must lie in [0,1), got {}",
            as_f64(xi)
        )));
    }
    if xi == T::zero() {
        return Ok(T::zero());
    }
    let one = T::one();
    Ok(-(one - xi).ln() - xi / (one - xi) * xi.ln())
}

/// Block entropy S_n = Σᵢ S(ξᵢ) over the kept modes' ladders.
pub fn block_entropy<T: Real>(sigma_pp: &DMatrix<T>, n: usize, hbar: T) -> Result<T> {
    let spectrum = mode_couplings(sigma_pp, n, hbar)?;
    let mut s = T::zero();
    for &xi in spectrum.xi().iter() {
        s += entropy_from_xi(xi)?;
    }
    Ok(s)
}

/// One eigenvalue of the reduced density matrix: p_μ = Π (1−ξᵢ)ξᵢ^{μᵢ}
/// for the occupation vector μ.
pub fn eigenvalue_ladder<T: Real>(spectrum: &ModeSpectrum<T>, occupation: &[u32]) -> Result<T> {
    if occupation.len() != spectrum.len() {
        return Err(Error::InvalidArgument(format!(
            "occupation length {} does not match mode count {}",
            occupation.len(),
            spectrum.len()
        )));
    }
    let mut p = T::one();
    for (i, &occ) in occupation.iter().enumerate() {
        let xi = spectrum.xi()[i];
        p *= T::one() - xi;
        if occ > 0 {
            p *= xi.powi(occ as i32);
        }
    }
    Ok(p)
}

/// Block purity from the q-q and p-p kept blocks,
/// μ = (ħ/2)ⁿ/√(det A det E); equals the covariance-route purity of the
/// reduced state because the ground state carries no q-p correlations.
pub fn block_purity<T: Real>(decomp: &BlockDecomposition<T>, hbar: T) -> Result<T> {
    if hbar <= T::zero() {
        return Err(Error::InvalidArgument(format!(
            "hbar must be positive, got {}",
            as_f64(hbar)
        )));
    }
    let chol_a = decomp.a().clone().cholesky().ok_or_else(|| {
        Error::NotPositiveDefinite("kept p-p block is singular or indefinite".into())
    })?;
    let chol_e = decomp.e().clone().cholesky().ok_or_else(|| {
        Error::NotPositiveDefinite("kept q-q block is singular or indefinite".into())
    })?;
    let half_hbar = hbar * real::<T>(0.5);
    let mut mu = T::one();
    for i in 0..decomp.kept() {
        mu *= half_hbar / (chol_a.l_dirty()[(i, i)] * chol_e.l_dirty()[(i, i)]);
    }
    Ok(mu)
}

/// Closed-form reduced-state quantities for two coupled oscillators
/// with on-site stiffness k0 and coupling k1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoOscillatorClosedForms<T: Real> {
    pub omega_plus: T,
    pub omega_minus: T,
    /// Off-diagonal coefficient of the reduced kernel.
    pub beta: T,
    /// Diagonal coefficient of the reduced kernel.
    pub gamma: T,
    /// α = √(ω₊ω₋)/ħ = √(γ²−β²).
    pub alpha: T,
    pub xi: T,
    pub purity: T,
    pub entropy: T,
}

/// Evaluates the analytic one-oscillator reduction of the two-oscillator
/// ground state: β, γ, α, ξ = β/(γ+α), μ = (1−ξ)/(1+ξ), S(ξ).
pub fn two_oscillator_closed_forms<T: Real>(
    k0: T,
    k1: T,
    hbar: T,
) -> Result<TwoOscillatorClosedForms<T>> {
    if k0 <= T::zero() || k1 < T::zero() || hbar <= T::zero() {
        return Err(Error::InvalidArgument(format!(
            "need k0 > 0, k1 >= 0, hbar > 0; got k0={}, k1={}, hbar={}",
            as_f64(k0),
            as_f64(k1),
            as_f64(hbar)
        )));
    }
    let two = real::<T>(2.0);
    let omega_plus = k0.sqrt();
    let omega_minus = (k0 + two * k1).sqrt();
    let sum = omega_plus + omega_minus;
    let diff = omega_plus - omega_minus;
    let beta = diff * diff / (real::<T>(4.0) * hbar * sum);
    let gamma = two * omega_plus * omega_minus / (hbar * sum) + beta;
    let alpha = (gamma * gamma - beta * beta).sqrt();
    let xi = beta / (gamma + alpha);
    let purity = (T::one() - xi) / (T::one() + xi);
    let entropy = entropy_from_xi(xi)?;
    Ok(TwoOscillatorClosedForms {
        omega_plus,
        omega_minus,
        beta,
        gamma,
        alpha,
        xi,
        purity,
        entropy,
    })
}

/// Residual |det(A−M)/(det(A−M/2)·det(1−V)) − 1| of the determinant
/// identity satisfied by the block decomposition; near zero for
/// well-conditioned inputs.
pub fn verify_det_identity<T: Real>(sigma_pp: &DMatrix<T>, n: usize) -> Result<T> {
    let total = sigma_pp.nrows();
    if sigma_pp.ncols() != total || n == 0 || n >= total {
        return Err(Error::InvalidSubsystem(format!(
            "kept count {n} must lie in 1..{total} for a square block"
        )));
    }
    let (a, m, v) = srednicki_chain(sigma_pp, n)?;
    let num = (&a - &m).determinant();
    let den_left = (&a - &m * real::<T>(0.5)).determinant();
    let den_right = (DMatrix::<T>::identity(n, n) - &v).determinant();
    let den = den_left * den_right;
    if den == T::zero() {
        return Err(Error::NumericalBreakdown(
            "determinant identity denominator vanished".into(),
        ));
    }
    Ok((num / den - T::one()).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{purity, symplectic_eigenvalues, von_neumann_entropy_gaussian};
    use crate::oscillator::{build_chain, ground_state_covariance, normal_modes, GroundStateSpec};
    use approx::assert_abs_diff_eq;

    fn ground_sigma(n: usize, k0: f64, k1: f64, hbar: f64) -> CovarianceMatrix<f64> {
        let k = build_chain(n, k0, k1, false).unwrap();
        let spec = GroundStateSpec::new(normal_modes(&k).unwrap(), hbar).unwrap();
        ground_state_covariance(&spec)
    }

    fn pp_block(sigma: &CovarianceMatrix<f64>) -> DMatrix<f64> {
        let n = sigma.modes();
        sigma.matrix().view((n, n), (n, n)).into_owned()
    }

    #[test]
    fn closed_forms_reference_point() {
        let cf = two_oscillator_closed_forms(1.0, 4.0, 1.0).unwrap();
        assert_abs_diff_eq!(cf.omega_plus, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(cf.omega_minus, 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(cf.xi, 7.0 - 4.0 * 3.0_f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(cf.xi, 0.07179676972449123, epsilon = 1e-13);
        assert_abs_diff_eq!(cf.purity, 3.0_f64.sqrt() / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(cf.entropy, 0.2782386677078925, epsilon = 1e-13);
    }

    #[test]
    fn closed_forms_alpha_and_purity_identities() {
        let hbar = 0.7;
        for &(k0, k1) in &[(1.0f64, 0.5f64), (2.0, 3.0), (0.3, 8.0), (5.0, 0.0)] {
            let cf = two_oscillator_closed_forms(k0, k1, hbar).unwrap();
            let wp = cf.omega_plus;
            let wm = cf.omega_minus;
            assert_abs_diff_eq!(cf.alpha, (wp * wm).sqrt() / hbar, epsilon = 1e-12);
            assert_abs_diff_eq!(
                cf.purity,
                2.0 * (wp * wm).sqrt() / (wp + wm),
                epsilon = 1e-13
            );
        }
    }

    #[test]
    fn closed_forms_decoupled_limit() {
        let cf = two_oscillator_closed_forms(1.7, 0.0, 1.0).unwrap();
        assert_eq!(cf.beta, 0.0);
        assert_eq!(cf.xi, 0.0);
        assert_eq!(cf.purity, 1.0);
        assert_eq!(cf.entropy, 0.0);
    }

    #[test]
    fn mode_couplings_two_oscillators() {
        let hbar = 1.0;
        let sigma = ground_sigma(2, 1.0, 4.0, hbar);
        let spectrum = mode_couplings(&pp_block(&sigma), 1, hbar).unwrap();
        assert_eq!(spectrum.len(), 1);
        // ξ = (√ω₋ − √ω₊)²/(√ω₊ + √ω₋)² with ω₊=1, ω₋=3
        let (wp, wm): (f64, f64) = (1.0, 3.0);
        let xi_expected = (wm.sqrt() - wp.sqrt()).powi(2) / (wp.sqrt() + wm.sqrt()).powi(2);
        assert_abs_diff_eq!(spectrum.xi()[0], xi_expected, epsilon = 1e-12);
        assert_abs_diff_eq!(
            spectrum.xi()[0],
            7.0 - 4.0 * 3.0_f64.sqrt(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(spectrum.nu()[0], 1.0 / 3.0_f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn mode_couplings_decoupled_chain() {
        let hbar = 1.0;
        let sigma = ground_sigma(3, 2.0, 0.0, hbar);
        let spectrum = mode_couplings(&pp_block(&sigma), 1, hbar).unwrap();
        assert_abs_diff_eq!(spectrum.xi()[0], 0.0, epsilon = 1e-14);
        let spectrum2 = mode_couplings(&pp_block(&sigma), 2, hbar).unwrap();
        for &xi in spectrum2.xi().iter() {
            assert_abs_diff_eq!(xi, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn mode_couplings_hbar_invariant() {
        let sigma1 = ground_sigma(4, 1.0, 1.0, 1.0);
        let sigma2 = ground_sigma(4, 1.0, 1.0, 2.7);
        let s1 = mode_couplings(&pp_block(&sigma1), 2, 1.0).unwrap();
        let s2 = mode_couplings(&pp_block(&sigma2), 2, 2.7).unwrap();
        for i in 0..2 {
            assert_abs_diff_eq!(s1.phi()[i], s2.phi()[i], epsilon = 1e-12);
        }
    }

    #[test]
    fn mode_couplings_rejects_bad_partitions() {
        let sigma = ground_sigma(3, 1.0, 1.0, 1.0);
        let pp = pp_block(&sigma);
        assert!(matches!(
            mode_couplings(&pp, 0, 1.0),
            Err(Error::InvalidSubsystem(_))
        ));
        assert!(matches!(
            mode_couplings(&pp, 3, 1.0),
            Err(Error::InvalidSubsystem(_))
        ));
    }

    #[test]
    fn singular_environment_is_reported() {
        let mut pp = DMatrix::<f64>::identity(3, 3);
        pp[(2, 2)] = 0.0;
        assert!(matches!(
            mode_couplings(&pp, 1, 1.0),
            Err(Error::SingularEnvironmentBlock)
        ));
    }

    #[test]
    fn reduce_covariance_two_oscillators() {
        let hbar = 1.3;
        let sigma = ground_sigma(2, 1.0, 4.0, hbar);
        let reduced = reduce_covariance(&sigma, &[1]).unwrap();
        let (wp, wm) = (1.0, 3.0);
        assert_abs_diff_eq!(
            reduced.matrix()[(0, 0)],
            hbar / 4.0 * (1.0 / wp + 1.0 / wm),
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            reduced.matrix()[(1, 1)],
            hbar / 4.0 * (wp + wm),
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(reduced.matrix()[(0, 1)], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn reduce_covariance_keep_all_is_identity_map() {
        let sigma = ground_sigma(3, 1.0, 2.0, 1.0);
        let reduced = reduce_covariance(&sigma, &[0, 1, 2]).unwrap();
        assert!((reduced.matrix() - sigma.matrix()).amax() < 1e-15);
    }

    #[test]
    fn reduce_covariance_rejects_bad_index_sets() {
        let sigma = ground_sigma(3, 1.0, 2.0, 1.0);
        assert!(matches!(
            reduce_covariance(&sigma, &[]),
            Err(Error::InvalidSubsystem(_))
        ));
        assert!(matches!(
            reduce_covariance(&sigma, &[0, 0]),
            Err(Error::InvalidSubsystem(_))
        ));
        assert!(matches!(
            reduce_covariance(&sigma, &[3]),
            Err(Error::InvalidSubsystem(_))
        ));
    }

    #[test]
    fn spectral_route_matches_symplectic_route() {
        let hbar = 1.0;
        for &(n_total, keep) in &[(2usize, 1usize), (4, 2), (6, 3), (5, 2)] {
            let sigma = ground_sigma(n_total, 1.0, 1.0, hbar);
            let s_xi = block_entropy(&pp_block(&sigma), keep, hbar).unwrap();
            let reduced = reduce_covariance(&sigma, &(0..keep).collect::<Vec<_>>()).unwrap();
            let s_nu = von_neumann_entropy_gaussian(&reduced, hbar).unwrap();
            assert_abs_diff_eq!(s_xi, s_nu, epsilon = 1e-10);
            // per-mode nu agreement, both sorted consistently
            let spectrum = mode_couplings(&pp_block(&sigma), keep, hbar).unwrap();
            let mut nus_spec: Vec<f64> = spectrum.nu().iter().copied().collect();
            nus_spec.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let nus_cov = symplectic_eigenvalues(&reduced.scaled(1.0 / hbar)).unwrap();
            for i in 0..keep {
                assert_abs_diff_eq!(nus_spec[i], nus_cov[i], epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn ladder_eigenvalues() {
        let hbar = 1.0;
        let sigma = ground_sigma(2, 1.0, 4.0, hbar);
        let spectrum = mode_couplings(&pp_block(&sigma), 1, hbar).unwrap();
        let xi = spectrum.xi()[0];
        assert_abs_diff_eq!(
            eigenvalue_ladder(&spectrum, &[0]).unwrap(),
            1.0 - xi,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            eigenvalue_ladder(&spectrum, &[5]).unwrap(),
            (1.0 - xi) * xi.powi(5),
            epsilon = 1e-15
        );
        // truncated geometric ladder sums to 1 − ξ^(cutoff+1)
        let cutoff = 200u32;
        let total: f64 = (0..=cutoff)
            .map(|k| eigenvalue_ladder(&spectrum, &[k]).unwrap())
            .sum();
        assert_abs_diff_eq!(total, 1.0 - xi.powi(cutoff as i32 + 1), epsilon = 1e-13);
        assert!(matches!(
            eigenvalue_ladder(&spectrum, &[0, 0]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn block_purity_matches_covariance_route() {
        let hbar = 1.0;
        let sigma = ground_sigma(6, 1.0, 1.0, hbar);
        for keep in 1..=6usize {
            let decomp = BlockDecomposition::new(&sigma, keep).unwrap();
            let mu_blocks = block_purity(&decomp, hbar).unwrap();
            let reduced = reduce_covariance(&sigma, &(0..keep).collect::<Vec<_>>()).unwrap();
            let mu_cov = purity(&reduced, hbar).unwrap();
            assert_abs_diff_eq!(mu_blocks, mu_cov, epsilon = 1e-12);
        }
        let full = BlockDecomposition::new(&sigma, 6).unwrap();
        assert_abs_diff_eq!(block_purity(&full, hbar).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn block_purity_two_oscillator_closed_form() {
        let hbar = 1.0;
        let sigma = ground_sigma(2, 1.0, 4.0, hbar);
        let decomp = BlockDecomposition::new(&sigma, 1).unwrap();
        let (wp, wm): (f64, f64) = (1.0, 3.0);
        assert_abs_diff_eq!(
            block_purity(&decomp, hbar).unwrap(),
            2.0 * (wp * wm).sqrt() / (wp + wm),
            epsilon = 1e-13
        );
    }

    #[test]
    fn det_identity_holds() {
        let hbar = 1.0;
        let two = ground_sigma(2, 1.0, 4.0, hbar);
        assert!(verify_det_identity(&pp_block(&two), 1).unwrap() < 1e-12);
        let decoupled = ground_sigma(4, 2.0, 0.0, hbar);
        assert!(verify_det_identity(&pp_block(&decoupled), 2).unwrap() < 1e-12);
        let chain = ground_sigma(8, 1.0, 3.0, hbar);
        for n in 1..8 {
            assert!(verify_det_identity(&pp_block(&chain), n).unwrap() < 1e-9);
        }
    }

    #[test]
    fn entropy_from_xi_domain() {
        assert_eq!(entropy_from_xi(0.0).unwrap(), 0.0);
        assert!(matches!(
            entropy_from_xi(1.0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            entropy_from_xi(-0.1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn spectrum_validating_constructor() {
        let phi = DVector::from_vec(vec![0.3]);
        let xi = phi.map(|p: f64| p / (1.0 + (1.0 - p * p).sqrt()));
        let nu = xi.map(|x| 0.5 * (1.0 + x) / (1.0 - x));
        assert!(ModeSpectrum::new(phi.clone(), xi.clone(), nu.clone()).is_ok());
        let bad_xi = DVector::from_vec(vec![0.31]);
        assert!(ModeSpectrum::new(phi.clone(), bad_xi, nu.clone()).is_err());
        let bad_nu = DVector::from_vec(vec![0.9]);
        assert!(ModeSpectrum::new(phi, xi, bad_nu).is_err());
    }

    #[test]
    fn xi_monotone_in_coupling() {
        let mut last = -1.0;
        for &k1 in &[0.0, 0.5, 1.0, 2.0, 4.0, 8.0] {
            let xi = two_oscillator_closed_forms(1.0, k1, 1.0).unwrap().xi;
            assert!(xi > last, "xi must increase with k1");
            last = xi;
        }
    }
}
