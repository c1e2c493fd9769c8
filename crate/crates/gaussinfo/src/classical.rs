//! Classical action-angle analogs: angle-averaged covariance matrices
//! of oscillator networks and the classical counterparts of purity and
//! entropy. With the Bohr-Sommerfeld substitution I_k = ħ/2 these
//! reproduce the quantum Gaussian results.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::gaussian::{entropy_from_nus, symplectic_eigenvalues, CovarianceMatrix};
use crate::oscillator::NormalModes;
use crate::scalar::{as_f64, real, Real};

/// One positive action variable per normal mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionAssignment<T: Real> {
    actions: DVector<T>,
}

impl<T: Real> ActionAssignment<T> {
    pub fn new(actions: DVector<T>) -> Result<Self> {
        if actions.is_empty() {
            return Err(Error::InvalidArgument("need at least one action".into()));
        }
        if let Some(bad) = actions.iter().find(|&&i| i <= T::zero()) {
            return Err(Error::InvalidArgument(format!(
                "actions must be positive, got {}",
                as_f64(*bad)
            )));
        }
        Ok(Self { actions })
    }

    /// Uniform assignment of the same action to `n` modes.
    pub fn uniform(n: usize, value: T) -> Result<Self> {
        Self::new(DVector::from_element(n, value))
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn actions(&self) -> &DVector<T> {
        &self.actions
    }
}

/// Angle-averaged covariance of a classical oscillator network with
/// mode actions I: σ_qq = Uᵀ W⁻¹ I U, σ_pp = Uᵀ W I U, σ_qp = 0 (the
/// cross terms are odd in the angles and vanish).
pub fn classical_covariance<T: Real>(
    modes: &NormalModes<T>,
    actions: &ActionAssignment<T>,
) -> Result<CovarianceMatrix<T>> {
    let n = modes.n();
    if actions.len() != n {
        return Err(Error::InvalidArgument(format!(
            "{} actions for {} modes",
            actions.len(),
            n
        )));
    }
    let i = actions.actions();
    let sqq = modes.congruence_indexed(|a, w| i[a] / w);
    let spp = modes.congruence_indexed(|a, w| i[a] * w);
    let mut m = nalgebra::DMatrix::<T>::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(&sqq);
    m.view_mut((n, n), (n, n)).copy_from(&spp);
    Ok(CovarianceMatrix::from_blocks_unchecked(m))
}

/// Classical purity analog μ^cl = Π I_k / √det σ^cl over a kept block;
/// `actions` lists the actions paired with the kept modes.
pub fn classical_purity<T: Real>(
    sigma_cl: &CovarianceMatrix<T>,
    actions: &ActionAssignment<T>,
) -> Result<T> {
    if actions.len() != sigma_cl.modes() {
        return Err(Error::InvalidArgument(format!(
            "{} actions for a {}-mode covariance block",
            actions.len(),
            sigma_cl.modes()
        )));
    }
    let chol = sigma_cl.matrix().clone().cholesky().ok_or_else(|| {
        Error::NotPositiveDefinite("classical covariance is singular or indefinite".into())
    })?;
    let mut mu = T::one();
    for k in 0..sigma_cl.modes() {
        mu *= actions.actions()[k];
    }
    for i in 0..sigma_cl.dim() {
        mu /= chol.l_dirty()[(i, i)];
    }
    Ok(mu)
}

/// Classical entropy analog: the symplectic eigenvalues of σ^cl
/// (ascending) are rescaled to ν_k = ν_k^cl/(2 I_k) and pushed through
/// the Gaussian entropy function. With non-uniform actions, order the
/// assignment to match the ascending eigenvalues.
pub fn classical_entropy<T: Real>(
    sigma_cl: &CovarianceMatrix<T>,
    actions: &ActionAssignment<T>,
) -> Result<T> {
    if actions.len() != sigma_cl.modes() {
        return Err(Error::InvalidArgument(format!(
            "{} actions for a {}-mode covariance block",
            actions.len(),
            sigma_cl.modes()
        )));
    }
    let nus_cl = symplectic_eigenvalues(sigma_cl)?;
    let half = real::<T>(0.5);
    let nus: Vec<T> = nus_cl
        .iter()
        .zip(actions.actions().iter())
        .map(|(&nu_cl, &i)| nu_cl * half / i)
        .collect();
    entropy_from_nus(&nus)
}

/// The Bohr-Sommerfeld substitution: every action set to ħ/2, which
/// maps the classical analogs onto the quantum ground-state results.
pub fn bohr_sommerfeld<T: Real>(
    template: &ActionAssignment<T>,
    hbar: T,
) -> Result<ActionAssignment<T>> {
    if hbar <= T::zero() {
        return Err(Error::InvalidArgument(format!(
            "hbar must be positive, got {}",
            as_f64(hbar)
        )));
    }
    ActionAssignment::uniform(template.len(), hbar * real::<T>(0.5))
}
