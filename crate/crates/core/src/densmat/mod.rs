//! Dense complex matrices, density-matrix validation, maximally entangled
//! projectors, operator-sum channels and projector fidelity.
//!
//! Composite basis states `|a⟩|b⟩` of a qudit pair are stored at 0-based
//! index `a·d + b`. The "doubled" states `|j⟩|j⟩` therefore sit at
//! `j·(d + 1)`; in 1-based ket notation this is row `(j−1)d + j`.

mod channel;
mod eigen;
mod matrix;

pub use channel::{apply_channel, apply_channel_conventional, KrausSet};
pub use eigen::hermitian_eigenvalues;
pub use matrix::ComplexMatrix;

use num_complex::Complex;

use crate::error::{Error, Invariant, Result, Violation};
use crate::scalar::Real;

/// Numerical tolerances for physicality checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    pub herm: T,
    pub trace: T,
    pub psd: T,
    pub kraus: T,
}

impl<T: Real> Tolerances<T> {
    /// Sets every tolerance to `tol` (the PSD tolerance to `10·tol`).
    pub fn uniform(tol: T) -> Self {
        Self {
            herm: tol,
            trace: tol,
            psd: tol * T::lit(10.0),
            kraus: tol,
        }
    }
}

impl<T: Real> Default for Tolerances<T> {
    /// `1e-10` (PSD: `1e-9`), floored at `1000 ε` of the scalar type so that
    /// single precision stays usable.
    fn default() -> Self {
        let floor = T::epsilon() * T::lit(1e3);
        Self {
            herm: T::lit(1e-10).max(floor),
            trace: T::lit(1e-10).max(floor),
            psd: T::lit(1e-9).max(floor),
            kraus: T::lit(1e-10).max(floor),
        }
    }
}

/// A square complex matrix that is Hermitian, unit-trace and positive
/// semidefinite within tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Wraps a matrix the caller has constructed to be physical.
    pub(crate) fn from_trusted(matrix: ComplexMatrix<T>) -> Self {
        debug_assert!(matrix.is_square());
        Self { matrix }
    }

    /// `I / n`.
    pub fn maximally_mixed(n: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(n).scale(T::one() / T::count(n)),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    pub fn get(&self, r: usize, c: usize) -> Option<Complex<T>> {
        self.matrix.get(r, c)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.matrix.max_abs_diff(&other.matrix)
    }
}

/// Measured residuals of the three density-matrix invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalityReport<T> {
    pub hermiticity: T,
    pub trace: T,
    pub min_eigenvalue: T,
}

/// Measures Hermiticity, trace and smallest-eigenvalue residuals of `m`.
pub fn physicality<T: Real>(m: &ComplexMatrix<T>) -> Result<PhysicalityReport<T>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let ev = hermitian_eigenvalues(m)?;
    Ok(PhysicalityReport {
        hermiticity: m.hermiticity_residual(),
        trace: (m.trace() - Complex::new(T::one(), T::zero())).norm(),
        min_eigenvalue: ev.first().copied().unwrap_or(T::zero()),
    })
}

/// Checks that `m` is a density matrix; lists every violated invariant otherwise.
pub fn validate_density<T: Real>(
    m: ComplexMatrix<T>,
    tol: &Tolerances<T>,
) -> Result<DensityMatrix<T>> {
    let report = physicality(&m)?;
    let mut violations = Vec::new();
    if report.hermiticity > tol.herm {
        violations.push(Violation {
            invariant: Invariant::Hermiticity,
            residual: report.hermiticity.as_f64(),
            tolerance: tol.herm.as_f64(),
        });
    }
    if report.trace > tol.trace {
        violations.push(Violation {
            invariant: Invariant::UnitTrace,
            residual: report.trace.as_f64(),
            tolerance: tol.trace.as_f64(),
        });
    }
    if report.min_eigenvalue < -tol.psd {
        violations.push(Violation {
            invariant: Invariant::PositiveSemidefinite,
            residual: (-report.min_eigenvalue).as_f64(),
            tolerance: tol.psd.as_f64(),
        });
    }
    if violations.is_empty() {
        Ok(DensityMatrix { matrix: m })
    } else {
        Err(Error::Unphysical(violations))
    }
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue<T: Real>(m: &ComplexMatrix<T>, tol: &Tolerances<T>) -> Result<T> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let residual = m.hermiticity_residual();
    if residual > tol.herm {
        return Err(Error::NotHermitian {
            residual: residual.as_f64(),
        });
    }
    Ok(hermitian_eigenvalues(m)?
        .first()
        .copied()
        .unwrap_or(T::zero()))
}

/// The maximally entangled state `(1/√d) Σ_j |j⟩|j⟩` and its projector.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxEntangled<T> {
    d: usize,
    vector: Vec<Complex<T>>,
    projector: ComplexMatrix<T>,
}

impl<T: Real> MaxEntangled<T> {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::UnsupportedDimension { d, min: 2 });
        }
        let amp = Complex::new(T::one() / T::count(d).sqrt(), T::zero());
        let mut vector = vec![Complex::new(T::zero(), T::zero()); d * d];
        for j in 0..d {
            vector[doubled_index(d, j)] = amp;
        }
        let projector = ComplexMatrix::outer(&vector);
        Ok(Self {
            d,
            vector,
            projector,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn vector(&self) -> &[Complex<T>] {
        &self.vector
    }

    pub fn projector(&self) -> &ComplexMatrix<T> {
        &self.projector
    }

    /// The projector viewed as a (pure) density matrix.
    pub fn density(&self) -> DensityMatrix<T> {
        DensityMatrix::from_trusted(self.projector.clone())
    }
}

pub fn max_entangled<T: Real>(d: usize) -> Result<MaxEntangled<T>> {
    MaxEntangled::new(d)
}

/// 0-based composite index of `|j⟩|j⟩`.
#[inline]
pub fn doubled_index(d: usize, j: usize) -> usize {
    j * (d + 1)
}

/// `tr(ρ P)` for the maximally entangled projector `P`.
pub fn fidelity_with_projector<T: Real>(
    rho: &DensityMatrix<T>,
    p: &MaxEntangled<T>,
    tol: &Tolerances<T>,
) -> Result<T> {
    let n = p.d * p.d;
    if rho.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            rows: rho.dim(),
            cols: rho.dim(),
        });
    }
    let (m, proj) = (rho.matrix(), p.projector());
    let mut tr = Complex::new(T::zero(), T::zero());
    for r in 0..n {
        for c in 0..n {
            let pc = proj[(c, r)];
            if pc.re != T::zero() || pc.im != T::zero() {
                tr += m[(r, c)] * pc;
            }
        }
    }
    if tr.im.abs() > tol.herm {
        return Err(Error::ComplexTrace(tr.im.as_f64()));
    }
    let f = tr.re;
    if f < -tol.trace || f > T::one() + tol.trace {
        return Err(Error::FidelityOutOfBounds { value: f.as_f64() });
    }
    Ok(f.max(T::zero()).min(T::one()))
}
