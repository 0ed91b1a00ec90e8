//! Isotropic qudit pairs under local dephasing.
//!
//! Builds the isotropic family `ε I + ζ P(|Ψ⟩)`, evolves it under two local
//! dephasing models (ground-referenced Kraus channels and an all-pairs
//! Schur-product map), and computes projector fidelity, entanglement of
//! formation and entanglement-sudden-death times, both in closed form and by
//! brute-force matrix evolution.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the `*64` aliases
//! below fix the scalar to `f64`, which is what the tolerances are tuned for.

pub mod densmat;
pub mod dephasing;
pub mod error;
pub mod esd;
pub mod isotropic;
pub mod roots;
mod scalar;

pub use densmat::{
    apply_channel, fidelity_with_projector, max_entangled, min_eigenvalue, validate_density,
    ComplexMatrix, DensityMatrix, KrausSet, MaxEntangled, Tolerances,
};
pub use dephasing::{
    apply_full_dephasing, decay_factors, evolve, evolved_closed_form, full_channel_kraus,
    kraus_simple, DephasingFactors, NoiseModel, NoiseParams, NoiseScenario, Side,
};
pub use error::{Error, Result};
pub use esd::{
    esd_threshold, esd_time_analytic, esd_time_numeric, fidelity_full, fidelity_simple, gap,
    CrossingKind, EsdResult, EsdStatus, FidelityBreakdown, SolverOptions,
};
pub use isotropic::{
    critical_fidelity, eof_isotropic, is_separable, isotropic_fidelity, make_isotropic, EofBranch,
    EofTerms, IsotropicState,
};
pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;
pub type ComplexMatrix64 = ComplexMatrix<f64>;
pub type DensityMatrix64 = DensityMatrix<f64>;
pub type KrausSet64 = KrausSet<f64>;
pub type MaxEntangled64 = MaxEntangled<f64>;
pub type IsotropicState64 = IsotropicState<f64>;
pub type NoiseParams64 = NoiseParams<f64>;
pub type DephasingFactors64 = DephasingFactors<f64>;
pub type EsdResult64 = EsdResult<f64>;
pub type EofTerms64 = EofTerms<f64>;
pub type Tolerances64 = Tolerances<f64>;

pub type DensityMatrix32 = DensityMatrix<f32>;
pub type IsotropicState32 = IsotropicState<f32>;
