//! Quantum Geometric Tensor of parametrized finite-dimensional
//! Hamiltonians via the perturbative sum over states, the fidelity
//! susceptibility, the phase-space metric read off covariance matrices,
//! and quadratic fidelity estimates.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::discrete::cmod;
use crate::error::{Error, Result};
use crate::gaussian::CovarianceMatrix;
use crate::scalar::{as_f64, real, Real};

const HERM_TOL: f64 = 1e-12;
/// Levels closer than this are treated as degenerate: the perturbative
/// sum has a vanishing denominator there.
const GAP_TOL: f64 = 1e-10;
const DEFAULT_FD_STEP: f64 = 1e-6;

type MatrixFn<T> = dyn Fn(&[T]) -> DMatrix<Complex<T>> + Send + Sync;
type GradFn<T> = dyn Fn(&[T]) -> Vec<DMatrix<Complex<T>>> + Send + Sync;

/// A Hermitian matrix family H(λ) with an evaluation point, optional
/// analytic parameter derivatives, and a finite-difference fallback.
pub struct ParametrizedHamiltonian<T: Real> {
    dim: usize,
    params: Vec<T>,
    h: Box<MatrixFn<T>>,
    dh: Option<Box<GradFn<T>>>,
    fd_step_rel: T,
}

impl<T: Real> std::fmt::Debug for ParametrizedHamiltonian<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ParametrizedHamiltonian")
            .field("dim", &self.dim)
            .field(
                "params",
                &self.params.iter().map(|&p| as_f64(p)).collect::<Vec<_>>(),
            )
            .field("analytic_derivatives", &self.dh.is_some())
            .field("fd_step_rel", &as_f64(self.fd_step_rel))
            .finish()
    }
}

impl<T: Real> ParametrizedHamiltonian<T> {
    /// Wraps a matrix family evaluated at `params`; derivatives default
    /// to central finite differences with relative step 1e-6.
    pub fn new(
        dim: usize,
        params: Vec<T>,
        h: impl Fn(&[T]) -> DMatrix<Complex<T>> + Send + Sync + 'static,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        if params.is_empty() {
            return Err(Error::InvalidArgument("need at least one parameter".into()));
        }
        Ok(Self {
            dim,
            params,
            h: Box::new(h),
            dh: None,
            fd_step_rel: real::<T>(DEFAULT_FD_STEP),
        })
    }

    /// Attaches analytic derivative matrices ∂ᵢH(λ), one per parameter.
    pub fn with_derivatives(
        mut self,
        dh: impl Fn(&[T]) -> Vec<DMatrix<Complex<T>>> + Send + Sync + 'static,
    ) -> Self {
        self.dh = Some(Box::new(dh));
        self
    }

    /// Overrides the relative finite-difference step.
    pub fn with_fd_step(mut self, step: T) -> Result<Self> {
        if step <= T::zero() {
            return Err(Error::InvalidArgument(format!(
                "finite-difference step must be positive, got {}",
                as_f64(step)
            )));
        }
        self.fd_step_rel = step;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> &[T] {
        &self.params
    }

    fn hamiltonian_at(&self, params: &[T]) -> Result<DMatrix<Complex<T>>> {
        let m = (self.h)(params);
        if m.nrows() != self.dim || m.ncols() != self.dim {
            return Err(Error::InvalidArgument(format!(
                "Hamiltonian map returned {}x{}, expected {}x{}",
                m.nrows(),
                m.ncols(),
                self.dim,
                self.dim
            )));
        }
        Ok(m)
    }

    /// ∂ᵢH at the evaluation point, analytic when available.
    fn derivatives(&self) -> Result<Vec<DMatrix<Complex<T>>>> {
        if let Some(dh) = &self.dh {
            let grads = dh(&self.params);
            if grads.len() != self.params.len() {
                return Err(Error::InvalidArgument(format!(
                    "derivative map returned {} matrices for {} parameters",
                    grads.len(),
                    self.params.len()
                )));
            }
            for (i, g) in grads.iter().enumerate() {
                if g.nrows() != self.dim || g.ncols() != self.dim {
                    return Err(Error::InvalidArgument(format!(
                        "derivative {i} has shape {}x{}, expected {}x{}",
                        g.nrows(),
                        g.ncols(),
                        self.dim,
                        self.dim
                    )));
                }
            }
            return Ok(grads);
        }
        let mut grads = Vec::with_capacity(self.params.len());
        for i in 0..self.params.len() {
            let step = self.fd_step_rel * T::one().max(self.params[i].abs());
            let mut up = self.params.clone();
            let mut down = self.params.clone();
            up[i] += step;
            down[i] -= step;
            let hp = self.hamiltonian_at(&up)?;
            let hm = self.hamiltonian_at(&down)?;
            let scale = Complex::new(real::<T>(0.5) / step, T::zero());
            grads.push((hp - hm) * scale);
        }
        Ok(grads)
    }
}

/// The QGT split into its real symmetric part (quantum metric) and
/// twice its imaginary part (Berry curvature).
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricTensor<T: Real> {
    /// Quantum metric tensor g = Re G, symmetric PSD.
    pub g: DMatrix<T>,
    /// Berry curvature F = 2 Im G, antisymmetric.
    pub f: DMatrix<T>,
}

fn check_hermitian<T: Real>(m: &DMatrix<Complex<T>>, what: &str) -> Result<()> {
    let scale = m.iter().map(|&z| cmod(z)).fold(T::zero(), T::max);
    let tol = real::<T>(HERM_TOL) * (T::one() + scale);
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            let delta = m[(i, j)] - m[(j, i)].conj();
            if cmod(delta) > tol {
                return Err(Error::InvalidArgument(format!(
                    "{what} is not Hermitian at ({i},{j})"
                )));
            }
        }
    }
    Ok(())
}

/// Quantum Geometric Tensor of eigenstate `level` by the perturbative
/// sum G_ij = Σ_{m≠n} ⟨n|∂ᵢH|m⟩⟨m|∂ⱼH|n⟩ / (E_m − E_n)².
pub fn qgt_perturbative<T: Real>(
    ph: &ParametrizedHamiltonian<T>,
    level: usize,
) -> Result<GeometricTensor<T>> {
    if level >= ph.dim() {
        return Err(Error::InvalidArgument(format!(
            "level {level} out of range for dimension {}",
            ph.dim()
        )));
    }
    let h = ph.hamiltonian_at(ph.params())?;
    check_hermitian(&h, "Hamiltonian")?;
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..ph.dim()).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .expect("eigenvalues are finite")
    });
    let n_idx = order[level];
    let e_n = eig.eigenvalues[n_idx];
    let gap_tol = real::<T>(GAP_TOL);
    for (pos, &m_idx) in order.iter().enumerate() {
        if pos == level {
            continue;
        }
        let gap = (eig.eigenvalues[m_idx] - e_n).abs();
        if gap <= gap_tol {
            return Err(Error::DegenerateLevel {
                level,
                gap: as_f64(gap),
            });
        }
    }
    let grads = ph.derivatives()?;
    for (i, g) in grads.iter().enumerate() {
        check_hermitian(g, &format!("derivative {i}"))?;
    }
    let u_n = eig.eigenvectors.column(n_idx).into_owned();
    // amp[i][m] = ⟨m|∂ᵢH|n⟩; its conjugate is ⟨n|∂ᵢH|m⟩
    let n_params = grads.len();
    let mut amps: Vec<DVector<Complex<T>>> = Vec::with_capacity(n_params);
    for g in &grads {
        let w = g * &u_n;
        let mut a = DVector::from_element(ph.dim(), Complex::new(T::zero(), T::zero()));
        for m in 0..ph.dim() {
            if m == n_idx {
                continue;
            }
            a[m] = eig.eigenvectors.column(m).dotc(&w);
        }
        amps.push(a);
    }
    let mut g_re = DMatrix::<T>::zeros(n_params, n_params);
    let mut f_im = DMatrix::<T>::zeros(n_params, n_params);
    for i in 0..n_params {
        for j in 0..n_params {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (m, (ai, aj)) in amps[i].iter().zip(amps[j].iter()).enumerate() {
                if m == n_idx {
                    continue;
                }
                let gap = eig.eigenvalues[m] - e_n;
                acc += ai.conj() * aj / Complex::new(gap * gap, T::zero());
            }
            g_re[(i, j)] = acc.re;
            f_im[(i, j)] = acc.im * real::<T>(2.0);
        }
    }
    let g = (&g_re + g_re.transpose()) * real::<T>(0.5);
    let f = (&f_im - f_im.transpose()) * real::<T>(0.5);
    Ok(GeometricTensor { g, f })
}

/// Fidelity susceptibility of a single-parameter family,
/// χ_F = Σ_{m≠n} |⟨m|∂H|n⟩|²/(E_n − E_m)²; equals the metric entry g₀₀.
pub fn fidelity_susceptibility<T: Real>(
    ph: &ParametrizedHamiltonian<T>,
    level: usize,
) -> Result<T> {
    if ph.params().len() != 1 {
        return Err(Error::InvalidArgument(format!(
            "fidelity susceptibility is defined along one parameter, got {}",
            ph.params().len()
        )));
    }
    Ok(qgt_perturbative(ph, level)?.g[(0, 0)])
}

/// Quantum metric of phase-space displacements read off the covariance
/// matrix: g_qq = σ_pp/ħ², g_qp = −σ_pq/ħ², g_pp = σ_qq/ħ².
pub fn phase_space_qmt<T: Real>(sigma: &CovarianceMatrix<T>, hbar: T) -> Result<DMatrix<T>> {
    if hbar <= T::zero() {
        return Err(Error::InvalidArgument(format!(
            "hbar must be positive, got {}",
            as_f64(hbar)
        )));
    }
    let n = sigma.modes();
    let m = sigma.matrix();
    let inv_h2 = T::one() / (hbar * hbar);
    let mut g = DMatrix::<T>::zeros(2 * n, 2 * n);
    for a in 0..n {
        for b in 0..n {
            g[(a, b)] = m[(n + a, n + b)] * inv_h2;
            g[(a, n + b)] = -m[(n + a, b)] * inv_h2;
            g[(n + a, b)] = -m[(a, n + b)] * inv_h2;
            g[(n + a, n + b)] = m[(a, b)] * inv_h2;
        }
    }
    Ok(g)
}

/// Quadratic fidelity estimate 1 − ½ δλᵀ g δλ, floored at 0.
pub fn fidelity_quadratic<T: Real>(g: &DMatrix<T>, dlambda: &DVector<T>) -> Result<T> {
    if g.nrows() != g.ncols() || g.nrows() != dlambda.len() {
        return Err(Error::InvalidArgument(format!(
            "metric is {}x{} but displacement has length {}",
            g.nrows(),
            g.ncols(),
            dlambda.len()
        )));
    }
    let drop = dlambda.dot(&(g * dlambda)) * real::<T>(0.5);
    Ok((T::one() - drop).max(T::zero()))
}

/// Harmonic-oscillator Hamiltonian family H(ω) = p²/2 + ω²q²/2 in the
/// Fock basis of the unit-frequency oscillator, truncated to `dim`
/// levels. The standard example for metric scans: g_ωω = 1/(8ω²).
pub fn oscillator_family<T: Real>(
    dim: usize,
    omega: T,
    hbar: T,
) -> Result<ParametrizedHamiltonian<T>> {
    if dim < 2 {
        return Err(Error::InvalidArgument(
            "oscillator family needs at least two Fock levels".into(),
        ));
    }
    if omega <= T::zero() || hbar <= T::zero() {
        return Err(Error::InvalidArgument(format!(
            "need omega > 0 and hbar > 0, got omega={}, hbar={}",
            as_f64(omega),
            as_f64(hbar)
        )));
    }
    let q2 = fock_q_squared::<T>(dim, hbar);
    let p2 = fock_p_squared::<T>(dim, hbar);
    let q2_h = q2.clone();
    let p2_h = p2.clone();
    ParametrizedHamiltonian::new(dim, vec![omega], move |params: &[T]| {
        let w = params[0];
        let half = real::<T>(0.5);
        &p2_h * Complex::new(half, T::zero()) + &q2_h * Complex::new(half * w * w, T::zero())
    })
    .map(|ph| {
        ph.with_derivatives(move |params: &[T]| {
            let w = params[0];
            vec![&q2 * Complex::new(w, T::zero())]
        })
    })
}

/// q² in the unit-frequency Fock basis: q = √(ħ/2)(a+a†) termwise.
fn fock_q_squared<T: Real>(dim: usize, hbar: T) -> DMatrix<Complex<T>> {
    let mut q = DMatrix::<T>::zeros(dim, dim);
    let scale = (hbar * real::<T>(0.5)).sqrt();
    for k in 1..dim {
        let amp = scale * real::<T>(k as f64).sqrt();
        q[(k - 1, k)] = amp;
        q[(k, k - 1)] = amp;
    }
    let q2 = &q * &q;
    q2.map(|x| Complex::new(x, T::zero()))
}

/// p² in the unit-frequency Fock basis: p = i√(ħ/2)(a†−a), so p² is the
/// real matrix −(antisymmetric part)².
fn fock_p_squared<T: Real>(dim: usize, hbar: T) -> DMatrix<Complex<T>> {
    let mut m = DMatrix::<T>::zeros(dim, dim);
    let scale = (hbar * real::<T>(0.5)).sqrt();
    for k in 1..dim {
        let amp = scale * real::<T>(k as f64).sqrt();
        m[(k - 1, k)] = -amp;
        m[(k, k - 1)] = amp;
    }
    let p2 = -(&m * &m);
    p2.map(|x| Complex::new(x, T::zero()))
}
