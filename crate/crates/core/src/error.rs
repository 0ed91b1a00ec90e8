use std::fmt;

use thiserror::Error;

/// One physicality invariant of a density matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invariant {
    Hermiticity,
    UnitTrace,
    PositiveSemidefinite,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Invariant::Hermiticity => "hermiticity",
            Invariant::UnitTrace => "unit trace",
            Invariant::PositiveSemidefinite => "positive semidefiniteness",
        })
    }
}

/// A violated invariant together with its measured residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub invariant: Invariant,
    pub residual: f64,
    pub tolerance: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} violated: residual {:e} exceeds tolerance {:e}",
            self.invariant, self.residual, self.tolerance
        )
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("entry count {len} does not match shape {rows}x{cols}")]
    BadShape {
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("dimension mismatch: expected {expected}x{expected}, got {rows}x{cols}")]
    DimensionMismatch {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("local dimension d = {d} unsupported, need d >= {min}")]
    UnsupportedDimension { d: usize, min: usize },
    #[error("fidelity {0} outside [0, 1]")]
    FidelityOutOfRange(f64),
    #[error("decay factor {0} outside [0, 1]")]
    DecayOutOfRange(f64),
    #[error("time must be finite and nonnegative, got {0}")]
    InvalidTime(f64),
    #[error("rate must be finite and nonnegative, got {0}")]
    InvalidRate(f64),
    #[error("effective rate must be positive, got {0}")]
    NonPositiveRate(f64),
    #[error("not a density matrix: {}", join_violations(.0))]
    Unphysical(Vec<Violation>),
    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("Kraus set is empty")]
    EmptyKrausSet,
    #[error("Kraus operators violate completeness (residual {residual:e})")]
    Incomplete { residual: f64 },
    #[error("fidelity {value} outside [-tol, 1 + tol]")]
    FidelityOutOfBounds { value: f64 },
    #[error("trace has imaginary residual {0:e}")]
    ComplexTrace(f64),
    #[error("eigenvalue iteration did not converge after {sweeps} sweeps")]
    EigenNoConvergence { sweeps: usize },
    #[error("root bracket [{lo}, {hi}] did not converge after {iterations} iterations")]
    NonConvergence { lo: f64, hi: f64, iterations: usize },
    #[error("singular configuration at d = {d}: F0 = 1/(d-1) needs d >= 3")]
    SingularConfiguration { d: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
