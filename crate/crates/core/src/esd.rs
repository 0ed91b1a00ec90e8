//! Time-dependent projector fidelity of dephased isotropic states, the
//! separability gap `G = F − 1/d`, and entanglement-sudden-death times.
//!
//! Both models damp the `ζ/d` coherences of the initial isotropic state by
//! `γ̃(t) = exp(−Γ̃ t/2)`, so the fidelity is affine in `γ̃`:
//!
//! * simple model: `F = 2[(d²F₀ − 1)γ̃ + d²(d−1)F₀/2 + 1] / (d³ + d²)`
//! * full model:   `F = ε + ζ/d + ζ γ̃ (d−1)/d`
//!
//! For the full model the evolved state is separable exactly when `F ≤ 1/d`
//! (it splits into `γ̃ζ(d+1)·ρ_iso(1/d)` plus a nonnegative diagonal, and is
//! NPT otherwise), so its gap crossing is an entanglement statement. For the
//! simple model the crossing is reported as a fidelity-threshold crossing.

use crate::dephasing::{NoiseModel, NoiseParams, NoiseScenario};
use crate::error::{Error, Result};
use crate::isotropic::{check_fidelity, critical_fidelity, IsotropicState};
use crate::roots::{bisect, expand_until_negative};
use crate::scalar::Real;

/// Per-class contributions to `tr(ρ(t) P)`.
///
/// Class 1 is the single `(0,0)` entry of `ρ(t)P` (0-based), class 2 the
/// remaining `d − 1` doubled-index diagonal entries, class 3 everything else
/// in the `d⁴`-entry product, none of which lies on the trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityBreakdown<T> {
    pub c1: T,
    pub c2: T,
    pub c3: T,
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    pub total: T,
}

fn check_args<T: Real>(d: usize, f0: T, gamma_tilde: T) -> Result<IsotropicState<T>> {
    if !(gamma_tilde >= T::zero() && gamma_tilde <= T::one()) {
        return Err(Error::DecayOutOfRange(gamma_tilde.as_f64()));
    }
    IsotropicState::new(d, f0)
}

/// Term-by-term fidelity for either model.
pub fn fidelity_breakdown<T: Real>(
    d: usize,
    f0: T,
    model: NoiseModel,
    gamma_tilde: T,
) -> Result<FidelityBreakdown<T>> {
    let s = check_args(d, f0, gamma_tilde)?;
    let (eps, zeta) = (s.epsilon(), s.zeta());
    let dd = T::count(d);
    let inv_d = T::one() / dd;
    let coh = zeta / dd;
    let diag = eps + coh;
    let c1 = diag * inv_d + coh * gamma_tilde * inv_d * T::count(d - 1);
    let undamped = match model {
        NoiseModel::SimpleGroundDephasing => T::one(),
        NoiseModel::FullIsotropicDephasing => gamma_tilde,
    };
    let c2 = coh * gamma_tilde * inv_d + diag * inv_d + coh * undamped * inv_d * T::count(d - 2);
    let (n1, n2) = (1, d - 1);
    let n3 = d.pow(4) - n1 - n2;
    let c3 = T::zero();
    let total = c1 * T::count(n1) + c2 * T::count(n2) + c3 * T::count(n3);
    Ok(FidelityBreakdown {
        c1,
        c2,
        c3,
        n1,
        n2,
        n3,
        total,
    })
}

pub fn fidelity_simple<T: Real>(d: usize, f0: T, gamma_tilde: T) -> Result<FidelityBreakdown<T>> {
    fidelity_breakdown(d, f0, NoiseModel::SimpleGroundDephasing, gamma_tilde)
}

/// Simple-model fidelity in its collected form `2[(d²F₀−1)γ̃ + d²(d−1)F₀/2 + 1]/(d³+d²)`.
pub fn fidelity_simple_collected<T: Real>(d: usize, f0: T, gamma_tilde: T) -> Result<T> {
    check_args(d, f0, gamma_tilde)?;
    let dd = T::count(d);
    let d2 = dd * dd;
    let two = T::lit(2.0);
    Ok(
        two * ((d2 * f0 - T::one()) * gamma_tilde + d2 * (dd - T::one()) * f0 / two + T::one())
            / (d2 * dd + d2),
    )
}

/// Full-model fidelity `ε + ζ/d + ζ γ̃ (d−1)/d`.
pub fn fidelity_full<T: Real>(d: usize, f0: T, gamma_tilde: T) -> Result<T> {
    let s = check_args(d, f0, gamma_tilde)?;
    let dd = T::count(d);
    Ok(s.epsilon() + s.zeta() / dd + s.zeta() * gamma_tilde * T::count(d - 1) / dd)
}

pub fn fidelity<T: Real>(d: usize, f0: T, model: NoiseModel, gamma_tilde: T) -> Result<T> {
    match model {
        NoiseModel::SimpleGroundDephasing => Ok(fidelity_simple(d, f0, gamma_tilde)?.total),
        NoiseModel::FullIsotropicDephasing => fidelity_full(d, f0, gamma_tilde),
    }
}

/// `G = F − 1/d`.
pub fn gap<T: Real>(d: usize, f0: T, model: NoiseModel, gamma_tilde: T) -> Result<T> {
    Ok(fidelity(d, f0, model, gamma_tilde)? - critical_fidelity(d)?)
}

/// Long-time fidelity (`γ̃ → 0`).
pub fn f_infinity<T: Real>(d: usize, f0: T, model: NoiseModel) -> Result<T> {
    fidelity(d, f0, model, T::zero())
}

/// Closed-form death time for `F₀ = 1/(d−1)`, in units of `1/Γ̃`.
///
/// Simple model: `(2/Γ̃) ln[2(d²−d+1)/((d−1)(d−2))]`.
/// Full model: `(2/Γ̃) ln[(d²−d+1)/(d(d−2))]`.
pub fn esd_time_analytic<T: Real>(d: usize, model: NoiseModel, effective_rate: T) -> Result<T> {
    if d <= 2 {
        return Err(Error::SingularConfiguration { d });
    }
    if !(effective_rate > T::zero() && effective_rate.is_finite()) {
        return Err(Error::NonPositiveRate(effective_rate.as_f64()));
    }
    let dd = T::count(d);
    let one = T::one();
    let two = T::lit(2.0);
    let num = dd * dd - dd + one;
    let ratio = match model {
        NoiseModel::SimpleGroundDephasing => two * num / ((dd - one) * (dd - two)),
        NoiseModel::FullIsotropicDephasing => num / (dd * (dd - two)),
    };
    Ok(two / effective_rate * ratio.ln())
}

/// The decay factor at which the gap closes for `F₀ = 1/(d−1)`.
pub fn critical_gamma_tilde<T: Real>(d: usize, model: NoiseModel) -> Result<T> {
    if d <= 2 {
        return Err(Error::SingularConfiguration { d });
    }
    let dd = T::count(d);
    let one = T::one();
    let two = T::lit(2.0);
    let num = dd * dd - dd + one;
    Ok(match model {
        NoiseModel::SimpleGroundDephasing => (dd - one) * (dd - two) / (two * num),
        NoiseModel::FullIsotropicDephasing => dd * (dd - two) / num,
    })
}

/// Largest `F₀` for which the gap closes in finite time.
///
/// Simple model: solving `F∞(F₀) = 1/d` gives `(d+2)/d²`. Full model:
/// `F∞ = ε + ζ/d < 1/d` for every `F₀ < 1`, so the threshold is 1 (exclusive).
pub fn esd_threshold<T: Real>(d: usize, model: NoiseModel) -> Result<T> {
    if d < 3 {
        return Err(Error::UnsupportedDimension { d, min: 3 });
    }
    Ok(match model {
        NoiseModel::SimpleGroundDephasing => T::count(d + 2) / T::count(d * d),
        NoiseModel::FullIsotropicDephasing => T::one(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EsdStatus {
    AlreadySeparable,
    FiniteDeath,
    AsymptoticOnly,
    NeverSeparates,
}

/// What a gap crossing means physically for the model at hand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossingKind {
    /// Full model, `d ≥ 3`: `F ≤ 1/d` is equivalent to separability of the evolved state.
    EntanglementSuddenDeath,
    /// The fidelity reaches `1/d`, but no entanglement claim is attached.
    FidelityThresholdCrossing,
}

impl CrossingKind {
    pub fn for_model(d: usize, model: NoiseModel) -> Self {
        match model {
            NoiseModel::FullIsotropicDephasing if d >= 3 => CrossingKind::EntanglementSuddenDeath,
            _ => CrossingKind::FidelityThresholdCrossing,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EsdResult<T> {
    pub status: EsdStatus,
    pub kind: CrossingKind,
    /// Present iff `status == FiniteDeath`.
    pub death_time: Option<T>,
    pub gamma_tilde_star: Option<T>,
    pub f_infinity: T,
    pub gap_at_zero: T,
    pub effective_rate: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions<T> {
    pub rel_tol: T,
    pub max_iter: usize,
    pub asymptotic_tol: T,
}

impl<T: Real> Default for SolverOptions<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-10),
            max_iter: 200,
            asymptotic_tol: T::lit(1e-12),
        }
    }
}

/// Classifies the long-time behaviour of the gap and, when it closes in
/// finite time, locates the death time by bisection on `t`.
pub fn esd_time_numeric<T: Real>(
    d: usize,
    f0: T,
    model: NoiseModel,
    scenario: NoiseScenario,
    params: &NoiseParams<T>,
    opts: &SolverOptions<T>,
) -> Result<EsdResult<T>> {
    check_fidelity(f0)?;
    let fc = critical_fidelity::<T>(d)?;
    let rate = params.effective_rate(scenario);
    let kind = CrossingKind::for_model(d, model);
    let gap_at_zero = gap(d, f0, model, T::one())?;
    let f_infinity = if rate > T::zero() {
        f_infinity(d, f0, model)?
    } else {
        fidelity(d, f0, model, T::one())?
    };
    let result = |status, death_time: Option<T>| EsdResult {
        status,
        kind,
        death_time,
        gamma_tilde_star: death_time.map(|t| (-rate * t * T::lit(0.5)).exp()),
        f_infinity,
        gap_at_zero,
        effective_rate: rate,
    };

    if f0 <= fc {
        return Ok(result(EsdStatus::AlreadySeparable, None));
    }
    if (f_infinity - fc).abs() <= opts.asymptotic_tol {
        return Ok(result(EsdStatus::AsymptoticOnly, None));
    }
    if f_infinity > fc {
        return Ok(result(EsdStatus::NeverSeparates, None));
    }

    let half = T::lit(0.5);
    let g = |t: T| {
        let gt = (-rate * t * half).exp();
        fidelity(d, f0, model, gt)
            .map(|f| f - fc)
            .unwrap_or(T::nan())
    };
    let (lo, hi) = expand_until_negative(g, T::lit(2.0) / rate, 1100)?;
    let t = bisect(g, lo, hi, opts.rel_tol, opts.max_iter)?;
    Ok(result(EsdStatus::FiniteDeath, Some(t)))
}
