//! Gaussian states at covariance-matrix level: symplectic eigenvalues
//! via the Williamson construction, purity, linear and von Neumann
//! entropy, physicality checks, and Wigner-function evaluation.
//!
//! Phase-space ordering is (q₁…q_N, p₁…p_N) with symplectic form
//! Ω = [[0, I], [−I, 0]]. Covariance entries carry whatever scale the
//! caller uses; operations that need the dimensionless symplectic
//! spectrum (ν = 1/2 for pure states) divide by ħ first.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::{as_f64, real, Real};

/// Absolute-plus-relative symmetry tolerance for covariance input.
const SYM_TOL: f64 = 1e-12;
/// Eigenvalue floor for the positive-semidefinite check at construction.
const PSD_TOL: f64 = -1e-10;
/// Symplectic eigenvalues of σ/ħ this far below ½ are clamped up to ½;
/// anything lower is an unphysical state.
const NU_CLAMP: f64 = 1e-9;

/// Second moments of a Gaussian state, 2N×2N, ordering (q…, p…).
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix<T: Real> {
    n: usize,
    entries: DMatrix<T>,
}

impl<T: Real> CovarianceMatrix<T> {
    /// Validates shape (square, even), symmetry, and positive
    /// semidefiniteness (eigenvalues ≥ −1e-10 scaled) before wrapping.
    pub fn from_matrix(entries: DMatrix<T>) -> Result<Self> {
        let dim = entries.nrows();
        if dim != entries.ncols() || dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "covariance matrix must be square with even dimension, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let scale = T::one() + entries.amax();
        let sym_tol = real::<T>(SYM_TOL) * scale;
        for i in 0..dim {
            for j in (i + 1)..dim {
                if (entries[(i, j)] - entries[(j, i)]).abs() > sym_tol {
                    return Err(Error::InvalidArgument(format!(
                        "covariance matrix not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        let min_eig = entries
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(T::max_value().unwrap_or_else(T::one), |a, b| a.min(b));
        if min_eig < real::<T>(PSD_TOL) * scale {
            return Err(Error::NotPositiveDefinite(format!(
                "covariance eigenvalue {} below tolerance",
                as_f64(min_eig)
            )));
        }
        Ok(Self {
            n: dim / 2,
            entries,
        })
    }

    /// Construction path for matrices that are symmetric PSD by
    /// assembly (ground states, classical averages); skips validation.
    pub(crate) fn from_blocks_unchecked(entries: DMatrix<T>) -> Self {
        debug_assert_eq!(entries.nrows(), entries.ncols());
        debug_assert_eq!(entries.nrows() % 2, 0);
        Self {
            n: entries.nrows() / 2,
            entries,
        }
    }

    /// Mode count N.
    pub fn modes(&self) -> usize {
        self.n
    }

    /// Full phase-space dimension 2N.
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.entries
    }

    /// Entrywise rescale, e.g. `scaled(1/ħ)` for the dimensionless σ/ħ.
    pub fn scaled(&self, factor: T) -> Self {
        Self {
            n: self.n,
            entries: &self.entries * factor,
        }
    }
}

/// Symplectic form Ω = [[0, I], [−I, 0]] for N modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticForm {
    n: usize,
}

impl SymplecticForm {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn matrix<T: Real>(&self) -> DMatrix<T> {
        let n = self.n;
        let mut m = DMatrix::<T>::zeros(2 * n, 2 * n);
        for i in 0..n {
            m[(i, n + i)] = T::one();
            m[(n + i, i)] = -T::one();
        }
        m
    }

    /// Ω·M without forming Ω: swaps the q and p row blocks with a sign.
    pub fn mul_left<T: Real>(&self, m: &DMatrix<T>) -> Result<DMatrix<T>> {
        let n = self.n;
        if m.nrows() != 2 * n {
            return Err(Error::InvalidArgument(format!(
                "symplectic form for {} modes cannot multiply a {}-row matrix",
                n,
                m.nrows()
            )));
        }
        let mut out = DMatrix::<T>::zeros(m.nrows(), m.ncols());
        for j in 0..m.ncols() {
            for i in 0..n {
                out[(i, j)] = m[(n + i, j)];
                out[(n + i, j)] = -m[(i, j)];
            }
        }
        Ok(out)
    }
}

/// First moments of a Gaussian state, length 2N, ordering (q…, p…).
#[derive(Debug, Clone, PartialEq)]
pub struct MeanVector<T: Real> {
    d: DVector<T>,
}

impl<T: Real> MeanVector<T> {
    pub fn new(d: DVector<T>) -> Result<Self> {
        if d.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(
                "mean vector entries must be finite".into(),
            ));
        }
        Ok(Self { d })
    }

    pub fn zeros(n_modes: usize) -> Self {
        Self {
            d: DVector::zeros(2 * n_modes),
        }
    }

    pub fn vector(&self) -> &DVector<T> {
        &self.d
    }
}

/// Symplectic eigenvalues ν₁ ≤ … ≤ ν_N of a positive-definite
/// covariance matrix, on the same scale as σ.
///
/// Computed as the moduli of the imaginary parts of the eigenvalues of
/// Ωσ, which come in conjugate pairs ±iν_k; equivalent by similarity to
/// the Williamson construction on σ^{−1/2}Ωσ^{−1/2}.
pub fn symplectic_eigenvalues<T: Real>(sigma: &CovarianceMatrix<T>) -> Result<DVector<T>> {
    if sigma.matrix().clone().cholesky().is_none() {
        return Err(Error::NotPositiveDefinite(
            "covariance matrix is singular or indefinite".into(),
        ));
    }
    let omega = SymplecticForm::new(sigma.modes());
    let a = omega.mul_left(sigma.matrix())?;
    let scale = T::one() + a.amax();
    // Schur-form eigenvalues put O(sqrt(eps)) noise on nearly defective
    // pairs; anything beyond that means the input was not a valid case
    let tol = T::default_epsilon().sqrt() * scale;
    let eigs = a.complex_eigenvalues();
    let mut ims: Vec<T> = Vec::with_capacity(eigs.len());
    for e in eigs.iter() {
        if e.re.abs() > tol {
            return Err(Error::NumericalBreakdown(format!(
                "eigenvalue of Omega*sigma has real part {}",
                as_f64(e.re)
            )));
        }
        ims.push(e.im.abs());
    }
    ims.sort_by(|a, b| b.partial_cmp(a).expect("eigenvalues are finite"));
    let n = sigma.modes();
    let mut nus = Vec::with_capacity(n);
    for k in 0..n {
        let (hi, lo) = (ims[2 * k], ims[2 * k + 1]);
        if hi - lo > tol {
            return Err(Error::NumericalBreakdown(format!(
                "conjugate pair mismatch {} vs {}",
                as_f64(hi),
                as_f64(lo)
            )));
        }
        nus.push((hi + lo) * real::<T>(0.5));
    }
    nus.reverse();
    Ok(DVector::from_vec(nus))
}

/// Gaussian purity μ = (ħ/2)ᴺ / √det σ.
pub fn purity<T: Real>(sigma: &CovarianceMatrix<T>, hbar: T) -> Result<T> {
    require_positive_hbar(hbar)?;
    let chol = sigma.matrix().clone().cholesky().ok_or_else(|| {
        Error::NotPositiveDefinite("covariance matrix is singular or indefinite".into())
    })?;
    // √det σ is the product of the Cholesky diagonal
    let half_hbar = hbar * real::<T>(0.5);
    let mut mu = T::one();
    for i in 0..sigma.dim() {
        if i % 2 == 0 {
            mu *= half_hbar;
        }
        mu /= chol.l_dirty()[(i, i)];
    }
    Ok(mu)
}

/// Linear entropy of a Gaussian state, S_L = 1 − μ (continuum-limit
/// normalization; the discrete module keeps the N/(N−1) factor).
pub fn linear_entropy_gaussian<T: Real>(sigma: &CovarianceMatrix<T>, hbar: T) -> Result<T> {
    Ok(T::one() - purity(sigma, hbar)?)
}

/// Von Neumann entropy in nats from the symplectic spectrum of σ/ħ:
/// S = Σ_k [(ν_k+½)ln(ν_k+½) − (ν_k−½)ln(ν_k−½)].
pub fn von_neumann_entropy_gaussian<T: Real>(sigma: &CovarianceMatrix<T>, hbar: T) -> Result<T> {
    require_positive_hbar(hbar)?;
    let nus = symplectic_eigenvalues(&sigma.scaled(T::one() / hbar))?;
    entropy_from_nus(nus.as_slice())
}

/// Shared ν-route entropy kernel with the clamp policy: ν within 1e-9
/// below ½ counts as ½ (pure-mode branch point), lower errors out.
pub(crate) fn entropy_from_nus<T: Real>(nus: &[T]) -> Result<T> {
    let half = real::<T>(0.5);
    let clamp = real::<T>(NU_CLAMP);
    if let Some(&bad) = nus.iter().find(|&&nu| nu < half - clamp) {
        return Err(Error::UnphysicalState {
            min_nu: as_f64(bad),
        });
    }
    let mut s = T::zero();
    for &nu in nus {
        let nu = if nu < half { half } else { nu };
        s += (nu + half) * (nu + half).ln();
        let minus = nu - half;
        if minus > T::zero() {
            s -= minus * minus.ln();
        }
    }
    Ok(s)
}

/// Physicality diagnostic for a covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalityReport<T: Real> {
    /// Smallest symplectic eigenvalue of σ/ħ; NaN when σ is not PD.
    pub min_nu: T,
    /// True iff σ is PD and min_nu ≥ ½ − 1e-9.
    pub is_physical: bool,
}

/// Checks the Heisenberg bound ν_k(σ/ħ) ≥ ½ without erroring: an
/// unphysical or indefinite matrix yields a negative report.
pub fn check_physical<T: Real>(
    sigma: &CovarianceMatrix<T>,
    hbar: T,
) -> Result<PhysicalityReport<T>> {
    require_positive_hbar(hbar)?;
    match symplectic_eigenvalues(&sigma.scaled(T::one() / hbar)) {
        Ok(nus) => {
            let min_nu = nus[0];
            let is_physical = min_nu >= real::<T>(0.5) - real::<T>(NU_CLAMP);
            Ok(PhysicalityReport {
                min_nu,
                is_physical,
            })
        }
        Err(Error::NotPositiveDefinite(_)) => Ok(PhysicalityReport {
            min_nu: real::<T>(f64::NAN),
            is_physical: false,
        }),
        Err(e) => Err(e),
    }
}

/// Gaussian Wigner function at a phase-space point, written in the
/// ħ-explicit form W(r) = [(2πħ)ᴺ √det(σ/ħ)]⁻¹ exp[−(r−d)ᵀ(σ/ħ)⁻¹(r−d)/(2ħ)].
///
/// The ħ powers cancel: this is the normal density with covariance σ,
/// so ∫W dr = 1 and the marginals are Gaussian with the block
/// covariances.
pub fn wigner_density<T: Real>(
    sigma: &CovarianceMatrix<T>,
    d: &MeanVector<T>,
    hbar: T,
    r: &DVector<T>,
) -> Result<T> {
    require_positive_hbar(hbar)?;
    let dim = sigma.dim();
    if d.vector().len() != dim || r.len() != dim {
        return Err(Error::InvalidArgument(format!(
            "phase-space point and mean must have length {dim}"
        )));
    }
    let scaled = sigma.scaled(T::one() / hbar);
    let chol = scaled.matrix().clone().cholesky().ok_or_else(|| {
        Error::NotPositiveDefinite("covariance matrix is singular or indefinite".into())
    })?;
    let delta = r - d.vector();
    let solved = chol.solve(&delta);
    let quad = delta.dot(&solved) / hbar;
    let mut norm = T::one();
    let two_pi_hbar = real::<T>(2.0) * T::PI() * hbar;
    for i in 0..dim {
        if i % 2 == 0 {
            norm *= two_pi_hbar;
        }
        norm *= chol.l_dirty()[(i, i)];
    }
    Ok((-quad * real::<T>(0.5)).exp() / norm)
}

fn require_positive_hbar<T: Real>(hbar: T) -> Result<()> {
    if hbar <= T::zero() {
        return Err(Error::InvalidArgument(format!(
            "hbar must be positive, got {}",
            as_f64(hbar)
        )));
    }
    Ok(())
}
