//! Coupled-oscillator networks: coupling matrices, normal modes, and
//! ground-state covariance matrices.
//!
//! Conventions: unit masses throughout, K = Uᵀ W² U with the rows of U
//! holding the orthonormal eigenvectors of K and W = diag(ω₁ ≤ … ≤ ω_N).

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::gaussian::CovarianceMatrix;
use crate::scalar::{as_f64, real, Real};

/// Relative eigenvalue floor below which a coupling matrix counts as
/// singular (zero modes have no normalizable ground state).
const PD_RTOL: f64 = 1e-12;

/// Symmetric positive-definite matrix of spring couplings, units of
/// frequency squared.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix<T: Real> {
    entries: DMatrix<T>,
}

impl<T: Real> CouplingMatrix<T> {
    /// Validates symmetry (1e-12 relative) and strict positive
    /// definiteness, then wraps the matrix.
    pub fn from_matrix(entries: DMatrix<T>) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(Error::InvalidArgument(format!(
                "coupling matrix must be square and nonempty, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let scale = entries.amax();
        let sym_tol = real::<T>(PD_RTOL) * (T::one() + scale);
        for i in 0..entries.nrows() {
            for j in (i + 1)..entries.ncols() {
                if (entries[(i, j)] - entries[(j, i)]).abs() > sym_tol {
                    return Err(Error::InvalidArgument(format!(
                        "coupling matrix not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        let eigs = entries.clone().symmetric_eigenvalues();
        let max_eig = eigs.amax();
        let floor = real::<T>(PD_RTOL) * max_eig;
        if let Some(bad) = eigs.iter().find(|&&e| e <= floor) {
            return Err(Error::NotPositiveDefinite(format!(
                "coupling eigenvalue {} below floor {}",
                as_f64(*bad),
                as_f64(floor)
            )));
        }
        Ok(Self { entries })
    }

    /// Number of oscillators.
    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<T> {
        &self.entries
    }
}

/// Builds the coupling matrix of a nearest-neighbor chain with on-site
/// stiffness `k0` and spring constant `k1`:
/// V = ½ Σ k0 qᵢ² + ½ Σ k1 (qᵢ − qᵢ₊₁)².
///
/// `periodic` closes the chain into a ring; duplicate neighbor pairs
/// collapse, so rings with n ≤ 2 coincide with the open chain.
pub fn build_chain<T: Real>(n: usize, k0: T, k1: T, periodic: bool) -> Result<CouplingMatrix<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument("chain needs n >= 1".into()));
    }
    if k0 <= T::zero() {
        return Err(Error::InvalidArgument(format!(
            "on-site stiffness k0 must be positive, got {}",
            as_f64(k0)
        )));
    }
    if k1 < T::zero() {
        return Err(Error::InvalidArgument(format!(
            "coupling k1 must be nonnegative, got {}",
            as_f64(k1)
        )));
    }
    let mut k = DMatrix::<T>::zeros(n, n);
    for i in 0..n {
        k[(i, i)] = k0;
    }
    for i in 0..n {
        let mut neighbors = Vec::with_capacity(2);
        if i > 0 {
            neighbors.push(i - 1);
        }
        if i + 1 < n {
            neighbors.push(i + 1);
        }
        if periodic && n > 2 {
            if i == 0 {
                neighbors.push(n - 1);
            }
            if i == n - 1 {
                neighbors.push(0);
            }
        }
        for &j in &neighbors {
            k[(i, i)] += k1;
            k[(i, j)] -= k1;
        }
    }
    CouplingMatrix::from_matrix(k)
}

/// Orthogonal normal-mode decomposition K = Uᵀ W² U.
#[derive(Debug, Clone)]
pub struct NormalModes<T: Real> {
    u: DMatrix<T>,
    w: DVector<T>,
}

impl<T: Real> NormalModes<T> {
    /// Mode matrix; row `a` is the eigenvector of K for frequency `w[a]`.
    pub fn u(&self) -> &DMatrix<T> {
        &self.u
    }

    /// Mode frequencies, sorted ascending, all positive.
    pub fn w(&self) -> &DVector<T> {
        &self.w
    }

    pub fn n(&self) -> usize {
        self.w.len()
    }

    /// Uᵀ · diag(d(a, w_a)) · U for a per-mode diagonal function.
    pub(crate) fn congruence_indexed(&self, diag: impl Fn(usize, T) -> T) -> DMatrix<T> {
        let d = DVector::from_iterator(
            self.w.len(),
            self.w.iter().enumerate().map(|(a, &x)| diag(a, x)),
        );
        let du = DMatrix::from_diagonal(&d) * &self.u;
        let m = self.u.transpose() * du;
        // symmetrize: the product is symmetric up to round-off
        let half = real::<T>(0.5);
        let mt = m.transpose();
        (m + mt) * half
    }

    /// Uᵀ · diag(d(w)) · U for a per-mode diagonal function.
    pub(crate) fn congruence(&self, diag: impl Fn(T) -> T) -> DMatrix<T> {
        self.congruence_indexed(|_, w| diag(w))
    }
}

/// Diagonalizes a coupling matrix into normal modes, frequencies sorted
/// ascending.
pub fn normal_modes<T: Real>(k: &CouplingMatrix<T>) -> Result<NormalModes<T>> {
    let eig = k.entries().clone().symmetric_eigen();
    let n = k.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .expect("eigenvalues are finite")
    });
    let max_eig = eig.eigenvalues.amax();
    let floor = real::<T>(PD_RTOL) * max_eig;
    let mut u = DMatrix::<T>::zeros(n, n);
    let mut w = DVector::<T>::zeros(n);
    for (row, &idx) in order.iter().enumerate() {
        let lambda = eig.eigenvalues[idx];
        if lambda <= floor {
            return Err(Error::NotPositiveDefinite(format!(
                "mode eigenvalue {} below floor {}",
                as_f64(lambda),
                as_f64(floor)
            )));
        }
        w[row] = lambda.sqrt();
        u.row_mut(row)
            .copy_from(&eig.eigenvectors.column(idx).transpose());
    }
    Ok(NormalModes { u, w })
}

/// Normal modes plus the action scale needed to build the ground state.
#[derive(Debug, Clone)]
pub struct GroundStateSpec<T: Real> {
    modes: NormalModes<T>,
    hbar: T,
}

impl<T: Real> GroundStateSpec<T> {
    pub fn new(modes: NormalModes<T>, hbar: T) -> Result<Self> {
        if hbar <= T::zero() {
            return Err(Error::InvalidArgument(format!(
                "hbar must be positive, got {}",
                as_f64(hbar)
            )));
        }
        Ok(Self { modes, hbar })
    }

    pub fn modes(&self) -> &NormalModes<T> {
        &self.modes
    }

    pub fn hbar(&self) -> T {
        self.hbar
    }
}

/// Ground-state covariance matrix in (q₁…q_N, p₁…p_N) ordering:
/// σ_qq = (ħ/2) Uᵀ W⁻¹ U, σ_pp = (ħ/2) Uᵀ W U, σ_qp = 0.
pub fn ground_state_covariance<T: Real>(spec: &GroundStateSpec<T>) -> CovarianceMatrix<T> {
    let half_hbar = spec.hbar * real::<T>(0.5);
    let sqq = spec.modes.congruence(|w| half_hbar / w);
    let spp = spec.modes.congruence(|w| half_hbar * w);
    let n = spec.modes.n();
    let mut m = DMatrix::<T>::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(&sqq);
    m.view_mut((n, n), (n, n)).copy_from(&spp);
    CovarianceMatrix::from_blocks_unchecked(m)
}
