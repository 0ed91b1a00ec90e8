//! Local dephasing of a qudit pair.
//!
//! Two noise models are provided. The simple model dephases each excited
//! level `k ≥ 1` relative to the ground level only, via the two-element Kraus
//! sets `{diag(1, γ, …, γ), diag(0, ω, …, ω)}` on either side. The full model
//! dephases every pair of local levels and is applied as a Schur product with
//! a positive-semidefinite damping matrix. It does not keep isotropic states
//! isotropic: the evolved state is `εI + (1−γ̃)(ζ/d)Σ|jj⟩⟨jj| + γ̃ζP`.

use num_complex::Complex;

use crate::densmat::{
    apply_channel, doubled_index, hermitian_eigenvalues, ComplexMatrix, DensityMatrix, KrausSet,
    Tolerances,
};
use crate::error::{Error, Result};
use crate::isotropic::IsotropicState;
use crate::scalar::Real;

/// Dephasing rates `Γ_A`, `Γ_B` of the two subsystems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams<T> {
    rate_a: T,
    rate_b: T,
}

impl<T: Real> NoiseParams<T> {
    pub fn new(rate_a: T, rate_b: T) -> Result<Self> {
        for r in [rate_a, rate_b] {
            if !(r.is_finite() && r >= T::zero()) {
                return Err(Error::InvalidRate(r.as_f64()));
            }
        }
        Ok(Self { rate_a, rate_b })
    }

    /// `Γ_A = Γ_B = rate`.
    pub fn equal(rate: T) -> Result<Self> {
        Self::new(rate, rate)
    }

    pub fn rate_a(&self) -> T {
        self.rate_a
    }

    pub fn rate_b(&self) -> T {
        self.rate_b
    }

    /// `Γ̃` such that `γ̃(t) = exp(−Γ̃ t / 2)`.
    pub fn effective_rate(&self, scenario: NoiseScenario) -> T {
        match scenario {
            NoiseScenario::AOnly => self.rate_a,
            NoiseScenario::BOnly => self.rate_b,
            NoiseScenario::Both => self.rate_a + self.rate_b,
        }
    }
}

/// Which subsystems the noise acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseScenario {
    AOnly,
    BOnly,
    Both,
}

impl NoiseScenario {
    pub const ALL: [NoiseScenario; 3] = [
        NoiseScenario::AOnly,
        NoiseScenario::BOnly,
        NoiseScenario::Both,
    ];

    pub fn acts_on_a(self) -> bool {
        matches!(self, NoiseScenario::AOnly | NoiseScenario::Both)
    }

    pub fn acts_on_b(self) -> bool {
        matches!(self, NoiseScenario::BOnly | NoiseScenario::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseModel {
    /// Dephasing of each excited level against the ground level only.
    SimpleGroundDephasing,
    /// Dephasing between all pairs of local levels.
    FullIsotropicDephasing,
}

impl NoiseModel {
    pub const ALL: [NoiseModel; 2] = [
        NoiseModel::SimpleGroundDephasing,
        NoiseModel::FullIsotropicDephasing,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// Decay scalars at one instant.
///
/// `gamma_*` are the coherence factors `exp(−Γ t/2)`, `omega_*` the
/// complementary amplitudes `√(1 − γ²)`. `gamma_tilde` is the factor felt by
/// an isotropic coherence under `scenario` and `effective_rate` its rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasingFactors<T> {
    pub t: T,
    pub scenario: NoiseScenario,
    pub gamma_a: T,
    pub gamma_b: T,
    pub omega_a: T,
    pub omega_b: T,
    pub gamma_tilde: T,
    pub effective_rate: T,
}

impl<T: Real> DephasingFactors<T> {
    fn side(&self, side: Side) -> (T, T) {
        match side {
            Side::A => (self.gamma_a, self.omega_a),
            Side::B => (self.gamma_b, self.omega_b),
        }
    }

    /// Coherence factors actually applied to each side under `scenario`.
    fn active(&self) -> (T, T) {
        let ga = if self.scenario.acts_on_a() {
            self.gamma_a
        } else {
            T::one()
        };
        let gb = if self.scenario.acts_on_b() {
            self.gamma_b
        } else {
            T::one()
        };
        (ga, gb)
    }
}

fn omega<T: Real>(gamma: T) -> T {
    (T::one() - gamma * gamma).max(T::zero()).sqrt()
}

pub fn decay_factors<T: Real>(
    t: T,
    params: &NoiseParams<T>,
    scenario: NoiseScenario,
) -> Result<DephasingFactors<T>> {
    if !(t.is_finite() && t >= T::zero()) {
        return Err(Error::InvalidTime(t.as_f64()));
    }
    let half = T::lit(0.5);
    let gamma_a = (-params.rate_a * t * half).exp();
    let gamma_b = (-params.rate_b * t * half).exp();
    let gamma_tilde = match scenario {
        NoiseScenario::AOnly => gamma_a,
        NoiseScenario::BOnly => gamma_b,
        NoiseScenario::Both => gamma_a * gamma_b,
    };
    Ok(DephasingFactors {
        t,
        scenario,
        gamma_a,
        gamma_b,
        omega_a: omega(gamma_a),
        omega_b: omega(gamma_b),
        gamma_tilde,
        effective_rate: params.effective_rate(scenario),
    })
}

/// The two-operator simple-model Kraus set acting on one side of a `d × d` pair.
pub fn kraus_simple<T: Real>(
    d: usize,
    side: Side,
    factors: &DephasingFactors<T>,
) -> Result<KrausSet<T>> {
    let ops = kraus_simple_operators(d, side, factors)?;
    KrausSet::new(ops, &Tolerances::default())
}

/// The same operators without the completeness check.
pub fn kraus_simple_operators<T: Real>(
    d: usize,
    side: Side,
    factors: &DephasingFactors<T>,
) -> Result<Vec<ComplexMatrix<T>>> {
    if d < 2 {
        return Err(Error::UnsupportedDimension { d, min: 2 });
    }
    let (gamma, omega) = factors.side(side);
    let mut keep = vec![gamma; d];
    keep[0] = T::one();
    let mut flip = vec![omega; d];
    flip[0] = T::zero();
    let id = ComplexMatrix::identity(d);
    let local = |diag: &[T]| {
        let m = ComplexMatrix::from_real_diagonal(diag);
        match side {
            Side::A => m.kron(&id),
            Side::B => id.kron(&m),
        }
    };
    Ok(vec![local(&keep), local(&flip)])
}

/// Simple-model channel for the scenario, with products `D_j E_i` when both sides are noisy.
pub fn simple_channel<T: Real>(d: usize, factors: &DephasingFactors<T>) -> Result<KrausSet<T>> {
    match factors.scenario {
        NoiseScenario::AOnly => kraus_simple(d, Side::A, factors),
        NoiseScenario::BOnly => kraus_simple(d, Side::B, factors),
        NoiseScenario::Both => {
            kraus_simple(d, Side::A, factors)?.then(&kraus_simple(d, Side::B, factors)?)
        }
    }
}

/// Kraus set `{|k⟩⟨k| ⊗ |l⟩⟨l|}` of complete local dephasing on both sides,
/// the `γ = 0` limit of the full model.
pub fn complete_dephasing_kraus<T: Real>(d: usize) -> Result<KrausSet<T>> {
    if d < 2 {
        return Err(Error::UnsupportedDimension { d, min: 2 });
    }
    let mut ops = Vec::with_capacity(d * d);
    for k in 0..d {
        for l in 0..d {
            let mut m = ComplexMatrix::zeros(d * d, d * d);
            m[(k * d + l, k * d + l)] = Complex::new(T::one(), T::zero());
            ops.push(m);
        }
    }
    KrausSet::new(ops, &Tolerances::default())
}

/// Kraus form of the full model. Each side's damping matrix is
/// `γJ + (1−γ)I`, i.e. the mixture `γ·id + (1−γ)·(complete dephasing)`,
/// giving operators `√γ I` and `√(1−γ) |k⟩⟨k|`. Zero-weight operators are dropped.
pub fn full_channel_kraus<T: Real>(d: usize, factors: &DephasingFactors<T>) -> Result<KrausSet<T>> {
    if d < 2 {
        return Err(Error::UnsupportedDimension { d, min: 2 });
    }
    let id = ComplexMatrix::<T>::identity(d);
    let local = |gamma: T, side: Side| -> Result<KrausSet<T>> {
        let lift = |m: ComplexMatrix<T>| match side {
            Side::A => m.kron(&id),
            Side::B => id.kron(&m),
        };
        let mut ops = Vec::with_capacity(d + 1);
        if gamma > T::zero() {
            ops.push(lift(id.scale(gamma.sqrt())));
        }
        let rest = (T::one() - gamma).max(T::zero()).sqrt();
        if rest > T::zero() {
            for k in 0..d {
                let mut p = ComplexMatrix::zeros(d, d);
                p[(k, k)] = Complex::new(rest, T::zero());
                ops.push(lift(p));
            }
        }
        KrausSet::new(ops, &Tolerances::default())
    };
    let (ga, gb) = factors.active();
    local(ga, Side::A)?.then(&local(gb, Side::B)?)
}

/// `d × d` single-side damping matrix: 1 on the diagonal, `γ` elsewhere.
pub fn local_damping_matrix<T: Real>(d: usize, gamma: T) -> ComplexMatrix<T> {
    let mut m = ComplexMatrix::zeros(d, d);
    for r in 0..d {
        for c in 0..d {
            m[(r, c)] = Complex::new(if r == c { T::one() } else { gamma }, T::zero());
        }
    }
    m
}

/// Composite damping matrix: entry `((a,b),(a',b'))` is `γ_A^[a≠a'] γ_B^[b≠b']`
/// restricted to the active sides.
pub fn full_damping_matrix<T: Real>(d: usize, factors: &DephasingFactors<T>) -> ComplexMatrix<T> {
    let (ga, gb) = factors.active();
    local_damping_matrix(d, ga).kron(&local_damping_matrix(d, gb))
}

/// Smallest eigenvalue over both single-side damping matrices; nonnegative
/// values certify complete positivity of the Schur-product map.
pub fn damping_certificate<T: Real>(d: usize, factors: &DephasingFactors<T>) -> Result<T> {
    let (ga, gb) = factors.active();
    let a = hermitian_eigenvalues(&local_damping_matrix(d, ga))?;
    let b = hermitian_eigenvalues(&local_damping_matrix(d, gb))?;
    Ok(a[0].min(b[0]))
}

/// Full-model dephasing as an elementwise product with [`full_damping_matrix`].
pub fn apply_full_dephasing<T: Real>(
    rho: &DensityMatrix<T>,
    d: usize,
    factors: &DephasingFactors<T>,
) -> Result<DensityMatrix<T>> {
    if d < 2 {
        return Err(Error::UnsupportedDimension { d, min: 2 });
    }
    if rho.dim() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            rows: rho.dim(),
            cols: rho.dim(),
        });
    }
    let cert = damping_certificate(d, factors)?;
    debug_assert!(
        cert >= -T::lit(1e-12).max(T::epsilon() * T::lit(1e3)),
        "damping matrix not PSD: {cert}"
    );
    let damped = rho.matrix().hadamard(&full_damping_matrix(d, factors))?;
    Ok(DensityMatrix::from_trusted(damped))
}

/// Evolves `rho0` to time `t` under the given model, scenario and rates.
pub fn evolve<T: Real>(
    rho0: &DensityMatrix<T>,
    d: usize,
    model: NoiseModel,
    scenario: NoiseScenario,
    params: &NoiseParams<T>,
    t: T,
) -> Result<DensityMatrix<T>> {
    let factors = decay_factors(t, params, scenario)?;
    evolve_with(rho0, d, model, &factors)
}

/// [`evolve`] with precomputed decay factors.
pub fn evolve_with<T: Real>(
    rho0: &DensityMatrix<T>,
    d: usize,
    model: NoiseModel,
    factors: &DephasingFactors<T>,
) -> Result<DensityMatrix<T>> {
    match model {
        NoiseModel::SimpleGroundDephasing => apply_channel(rho0, &simple_channel(d, factors)?),
        NoiseModel::FullIsotropicDephasing => apply_full_dephasing(rho0, d, factors),
    }
}

/// The evolved isotropic state written down directly from the damping pattern.
///
/// Simple model: only the coherences between `|0⟩|0⟩` and `|j⟩|j⟩` (first
/// row and column) pick up `γ̃`. Full model: every coherence does.
pub fn evolved_closed_form<T: Real>(
    d: usize,
    f0: T,
    model: NoiseModel,
    factors: &DephasingFactors<T>,
) -> Result<DensityMatrix<T>> {
    let g = factors.gamma_tilde;
    if !(g >= T::zero() && g <= T::one()) {
        return Err(Error::DecayOutOfRange(g.as_f64()));
    }
    let mut m = IsotropicState::new(d, f0)?.to_matrix();
    for j in 0..d {
        for k in 0..d {
            if j == k {
                continue;
            }
            let damped = match model {
                NoiseModel::SimpleGroundDephasing => j == 0 || k == 0,
                NoiseModel::FullIsotropicDephasing => true,
            };
            if damped {
                let idx = (doubled_index(d, j), doubled_index(d, k));
                m[idx] *= g;
            }
        }
    }
    Ok(DensityMatrix::from_trusted(m))
}
