//! Finite-dimensional density matrices: construction from pure states,
//! partial trace, purity, linear and von Neumann entropy, and
//! expectation values. Covers spin-½ and few-qubit systems.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{as_f64, real, Real};

/// |z| via field operations only; keeps the scalar bounds minimal.
#[inline]
pub(crate) fn cmod<T: Real>(z: Complex<T>) -> T {
    (z.re * z.re + z.im * z.im).sqrt()
}

const HERM_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues this far below zero are round-off and get clamped;
/// anything lower is genuinely indefinite.
const PSD_REPAIR_TOL: f64 = 1e-10;
/// Eigenvalues below this are dropped from entropy sums (0·ln 0 = 0).
const EIG_DROP: f64 = 1e-12;

/// Normalized pure state |ψ⟩ = Σ cᵢ|i⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Real> {
    amplitudes: DVector<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// Wraps an already-normalized amplitude vector (unit norm within
    /// 1e-12).
    pub fn new(amplitudes: DVector<Complex<T>>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidArgument("state vector is empty".into()));
        }
        let norm = amplitudes.norm();
        if (norm - T::one()).abs() > real::<T>(HERM_TOL) {
            return Err(Error::InvalidArgument(format!(
                "state vector norm {} is not 1",
                as_f64(norm)
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes the amplitudes first; rejects the zero vector.
    pub fn normalized(amplitudes: DVector<Complex<T>>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidArgument("state vector is empty".into()));
        }
        let norm = amplitudes.norm();
        if norm <= T::zero() {
            return Err(Error::InvalidArgument(
                "cannot normalize the zero vector".into(),
            ));
        }
        Ok(Self {
            amplitudes: amplitudes / Complex::new(norm, T::zero()),
        })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex<T>> {
        &self.amplitudes
    }
}

/// Hermitian, unit-trace, positive-semidefinite matrix ρ.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    entries: DMatrix<Complex<T>>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity and unit trace, then checks the spectrum:
    /// eigenvalues in (−1e-10, 0) are clamped to zero and the matrix is
    /// renormalized; more negative values are rejected.
    pub fn from_matrix(entries: DMatrix<Complex<T>>) -> Result<Self> {
        let dim = entries.nrows();
        if dim != entries.ncols() || dim == 0 {
            return Err(Error::InvalidArgument(format!(
                "density matrix must be square and nonempty, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let herm_tol = real::<T>(HERM_TOL);
        for i in 0..dim {
            for j in i..dim {
                let delta = entries[(i, j)] - entries[(j, i)].conj();
                if cmod(delta) > herm_tol {
                    return Err(Error::InvalidArgument(format!(
                        "density matrix not Hermitian at ({i},{j})"
                    )));
                }
            }
        }
        let trace = entries.trace();
        if (trace.re - T::one()).abs() > real::<T>(TRACE_TOL)
            || trace.im.abs() > real::<T>(TRACE_TOL)
        {
            return Err(Error::InvalidArgument(format!(
                "density matrix trace {} + {}i is not 1",
                as_f64(trace.re),
                as_f64(trace.im)
            )));
        }
        let eig = entries.clone().symmetric_eigen();
        let min_eig = eig.eigenvalues.iter().copied().fold(T::one(), T::min);
        if min_eig >= T::zero() {
            return Ok(Self { entries });
        }
        if min_eig <= -real::<T>(PSD_REPAIR_TOL) {
            return Err(Error::NotPositiveDefinite(format!(
                "density matrix eigenvalue {} below repair tolerance",
                as_f64(min_eig)
            )));
        }
        // round-off repair: clamp the offending eigenvalues, renormalize
        let clamped: Vec<T> = eig
            .eigenvalues
            .iter()
            .map(|&l| if l < T::zero() { T::zero() } else { l })
            .collect();
        let total: T = clamped.iter().copied().fold(T::zero(), |a, b| a + b);
        let q = &eig.eigenvectors;
        let mut repaired = DMatrix::<Complex<T>>::zeros(dim, dim);
        for (k, &l) in clamped.iter().enumerate() {
            let col = q.column(k);
            let weight = Complex::new(l / total, T::zero());
            for i in 0..dim {
                for j in 0..dim {
                    repaired[(i, j)] += weight * col[i] * col[j].conj();
                }
            }
        }
        Ok(Self { entries: repaired })
    }

    /// ρ = |ψ⟩⟨ψ| for a normalized pure state.
    pub fn from_pure(psi: &StateVector<T>) -> Self {
        let v = psi.amplitudes();
        let entries = v * v.adjoint();
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex<T>> {
        &self.entries
    }

    /// Real eigenvalues of ρ, ascending.
    pub fn eigenvalues(&self) -> DVector<T> {
        let mut eigs: Vec<T> = self
            .entries
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        eigs.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
        DVector::from_vec(eigs)
    }
}

/// Purity μ = Tr ρ², in [1/dim, 1].
pub fn purity_discrete<T: Real>(rho: &DensityMatrix<T>) -> T {
    // Tr ρ² = Σᵢⱼ |ρᵢⱼ|² for Hermitian ρ
    rho.entries()
        .iter()
        .map(|z| z.re * z.re + z.im * z.im)
        .fold(T::zero(), |a, b| a + b)
}

/// Which tensor factor a partial trace keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Partial trace of a bipartite state on H_A ⊗ H_B with row-major basis
/// ordering |i⟩_A ⊗ |k⟩_B ↦ index i·dB + k.
pub fn partial_trace<T: Real>(
    rho: &DensityMatrix<T>,
    dims: (usize, usize),
    keep: Subsystem,
) -> Result<DensityMatrix<T>> {
    let (da, db) = dims;
    if da == 0 || db == 0 || da * db != rho.dim() {
        return Err(Error::InvalidArgument(format!(
            "subsystem dimensions {da}x{db} do not factor the total dimension {}",
            rho.dim()
        )));
    }
    let m = rho.entries();
    let out = match keep {
        Subsystem::A => DMatrix::from_fn(da, da, |i, j| {
            (0..db)
                .map(|k| m[(i * db + k, j * db + k)])
                .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
        }),
        Subsystem::B => DMatrix::from_fn(db, db, |k, l| {
            (0..da)
                .map(|i| m[(i * db + k, i * db + l)])
                .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
        }),
    };
    DensityMatrix::from_matrix(out)
}

/// Von Neumann entropy −Σ λ ln λ in nats; eigenvalues below 1e-12 are
/// dropped.
pub fn von_neumann_discrete<T: Real>(rho: &DensityMatrix<T>) -> T {
    let drop = real::<T>(EIG_DROP);
    let mut s = T::zero();
    for &l in rho.eigenvalues().iter() {
        if l >= drop {
            s -= l * l.ln();
        }
    }
    s
}

/// Linear entropy with the dimension factor, S_L = d/(d−1)·(1−μ);
/// defined as 0 for a one-dimensional space.
pub fn linear_entropy_discrete<T: Real>(rho: &DensityMatrix<T>) -> T {
    let d = rho.dim();
    if d == 1 {
        return T::zero();
    }
    let factor = real::<T>(d as f64) / real::<T>((d - 1) as f64);
    let s = factor * (T::one() - purity_discrete(rho));
    s.max(T::zero())
}

/// Expectation value Tr(obs·ρ) of a Hermitian observable; the
/// sub-tolerance imaginary residue is discarded.
pub fn expectation<T: Real>(rho: &DensityMatrix<T>, obs: &DMatrix<Complex<T>>) -> Result<T> {
    let dim = rho.dim();
    if obs.nrows() != dim || obs.ncols() != dim {
        return Err(Error::InvalidArgument(format!(
            "observable must be {dim}x{dim}, got {}x{}",
            obs.nrows(),
            obs.ncols()
        )));
    }
    let scale = obs.iter().map(|&z| cmod(z)).fold(T::zero(), T::max);
    let herm_tol = real::<T>(HERM_TOL) * (T::one() + scale);
    for i in 0..dim {
        for j in i..dim {
            let delta = obs[(i, j)] - obs[(j, i)].conj();
            if cmod(delta) > herm_tol {
                return Err(Error::InvalidArgument(format!(
                    "observable not Hermitian at ({i},{j})"
                )));
            }
        }
    }
    let mut tr = Complex::new(T::zero(), T::zero());
    for i in 0..dim {
        for j in 0..dim {
            tr += obs[(i, j)] * rho.entries()[(j, i)];
        }
    }
    Ok(tr.re)
}

/// The spin-½ operators s_x, s_y, s_z as (ħ/2)·Pauli matrices in the
/// S_z eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperators<T: Real> {
    pub sx: DMatrix<Complex<T>>,
    pub sy: DMatrix<Complex<T>>,
    pub sz: DMatrix<Complex<T>>,
}

pub fn spin_half<T: Real>(hbar: T) -> SpinOperators<T> {
    let h = hbar * real::<T>(0.5);
    let zero = T::zero();
    let c = Complex::new;
    SpinOperators {
        sx: DMatrix::from_row_slice(
            2,
            2,
            &[c(zero, zero), c(h, zero), c(h, zero), c(zero, zero)],
        ),
        sy: DMatrix::from_row_slice(
            2,
            2,
            &[c(zero, zero), c(zero, -h), c(zero, h), c(zero, zero)],
        ),
        sz: DMatrix::from_row_slice(
            2,
            2,
            &[c(h, zero), c(zero, zero), c(zero, zero), c(-h, zero)],
        ),
    }
}
