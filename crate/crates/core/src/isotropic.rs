//! Isotropic qudit-pair states `ε I + ζ P(|Ψ⟩)` and their entanglement of formation.
//!
//! All entropies are in bits: every logarithm in the entanglement-of-formation
//! formula is taken base 2, which is the only choice that makes its middle and
//! linear branches meet at `F = 4(d−1)/d²`.

use num_complex::Complex;

use crate::densmat::{
    doubled_index, fidelity_with_projector, ComplexMatrix, DensityMatrix, MaxEntangled, Tolerances,
};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// The `(d, F)` parametrization of an isotropic state with its mixing weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsotropicState<T> {
    d: usize,
    fidelity: T,
    epsilon: T,
    zeta: T,
}

impl<T: Real> IsotropicState<T> {
    pub fn new(d: usize, fidelity: T) -> Result<Self> {
        if d < 2 {
            return Err(Error::UnsupportedDimension { d, min: 2 });
        }
        check_fidelity(fidelity)?;
        let d2 = T::count(d * d);
        let epsilon = (T::one() - fidelity) / (d2 - T::one());
        let zeta = (fidelity * d2 - T::one()) / (d2 - T::one());
        Ok(Self {
            d,
            fidelity,
            epsilon,
            zeta,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn fidelity(&self) -> T {
        self.fidelity
    }

    /// Weight of the identity; every diagonal entry receives `ε`.
    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    /// Weight of the maximally entangled projector. Negative for `F < 1/d²`.
    pub fn zeta(&self) -> T {
        self.zeta
    }

    /// Dense `d² × d²` matrix: `ε` on the diagonal plus `ζ/d` on every
    /// `(j(d+1), k(d+1))` entry.
    pub fn to_matrix(&self) -> ComplexMatrix<T> {
        let d = self.d;
        let n = d * d;
        let mut m = ComplexMatrix::identity(n).scale(self.epsilon);
        let coh = Complex::new(self.zeta / T::count(d), T::zero());
        for j in 0..d {
            for k in 0..d {
                m[(doubled_index(d, j), doubled_index(d, k))] += coh;
            }
        }
        m
    }

    pub fn to_density(&self) -> DensityMatrix<T> {
        DensityMatrix::from_trusted(self.to_matrix())
    }
}

pub(crate) fn check_fidelity<T: Real>(f: T) -> Result<()> {
    if !(f >= T::zero() && f <= T::one()) {
        return Err(Error::FidelityOutOfRange(f.as_f64()));
    }
    Ok(())
}

/// The isotropic density matrix of local dimension `d` and fidelity `f`.
pub fn make_isotropic<T: Real>(d: usize, f: T) -> Result<DensityMatrix<T>> {
    Ok(IsotropicState::new(d, f)?.to_density())
}

/// Projector fidelity of a state together with its distance from the isotropic family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsotropicFit<T> {
    pub fidelity: T,
    /// `max |ρ − make_isotropic(d, F)|` elementwise.
    pub residual: T,
}

pub fn isotropic_fidelity<T: Real>(rho: &DensityMatrix<T>, d: usize) -> Result<IsotropicFit<T>> {
    let p = MaxEntangled::new(d)?;
    let fidelity = fidelity_with_projector(rho, &p, &Tolerances::default())?;
    let residual = rho.max_abs_diff(&make_isotropic(d, fidelity)?);
    Ok(IsotropicFit { fidelity, residual })
}

/// Separability threshold `1/d`.
pub fn critical_fidelity<T: Real>(d: usize) -> Result<T> {
    if d < 2 {
        return Err(Error::UnsupportedDimension { d, min: 2 });
    }
    Ok(T::one() / T::count(d))
}

/// An isotropic state is separable iff `F ≤ 1/d`.
pub fn is_separable<T: Real>(d: usize, f: T) -> Result<bool> {
    check_fidelity(f)?;
    Ok(f <= critical_fidelity(d)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EofBranch {
    Separable,
    MiddleBranch,
    LinearBranch,
}

/// Entanglement of formation with its intermediate quantities (bits).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EofTerms<T> {
    pub xi: T,
    pub h2: T,
    pub r: T,
    pub branch: EofBranch,
    pub eof: T,
}

fn xlog2x<T: Real>(x: T) -> T {
    if x <= T::zero() {
        T::zero()
    } else {
        x * x.log2()
    }
}

/// Binary entropy in bits.
pub fn binary_entropy<T: Real>(x: T) -> T {
    -xlog2x(x) - xlog2x(T::one() - x)
}

/// `ξ(F) = [√F + √((d−1)(1−F))]² / d`, clamped to `[0, 1]`.
pub fn xi<T: Real>(d: usize, f: T) -> T {
    let dm1 = T::count(d - 1);
    let s = f.sqrt() + (dm1 * (T::one() - f)).sqrt();
    (s * s / T::count(d)).max(T::zero()).min(T::one())
}

/// `R_{1,d−1}(F) = H₂(ξ) + (1 − ξ) log₂(d − 1)`.
pub fn eof_middle_branch<T: Real>(d: usize, f: T) -> T {
    let x = xi(d, f);
    binary_entropy(x) + (T::one() - x) * T::count(d - 1).log2()
}

/// `d log₂(d−1)/(d−2) · (F − 1) + log₂ d`.
pub fn eof_linear_branch<T: Real>(d: usize, f: T) -> T {
    let dd = T::count(d);
    dd * T::count(d - 1).log2() / T::count(d - 2) * (f - T::one()) + dd.log2()
}

/// Lower edge `4(d−1)/d²` of the linear branch.
pub fn linear_branch_start<T: Real>(d: usize) -> T {
    T::lit(4.0) * T::count(d - 1) / T::count(d * d)
}

/// Entanglement of formation of the isotropic state `(d, F)`, `d ≥ 3`.
pub fn eof_isotropic<T: Real>(d: usize, f: T) -> Result<EofTerms<T>> {
    if d < 3 {
        return Err(Error::UnsupportedDimension { d, min: 3 });
    }
    check_fidelity(f)?;
    let x = xi(d, f);
    let h2 = binary_entropy(x);
    let r = h2 + (T::one() - x) * T::count(d - 1).log2();
    let (branch, eof) = if f <= critical_fidelity(d)? {
        (EofBranch::Separable, T::zero())
    } else if f <= linear_branch_start(d) {
        (EofBranch::MiddleBranch, r)
    } else {
        (EofBranch::LinearBranch, eof_linear_branch(d, f))
    };
    Ok(EofTerms {
        xi: x,
        h2,
        r,
        branch,
        eof: eof.max(T::zero()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn qutrit_half_fidelity_entries() {
        let s = IsotropicState::<f64>::new(3, 0.5).unwrap();
        assert_abs_diff_eq!(s.epsilon(), 0.0625, epsilon = 1e-16);
        assert_abs_diff_eq!(s.zeta(), 7.0 / 16.0, epsilon = 1e-16);
        let m = s.to_matrix();
        for i in 0..9 {
            let want = if [0, 4, 8].contains(&i) {
                0.0625 + 7.0 / 48.0
            } else {
                0.0625
            };
            assert_abs_diff_eq!(m[(i, i)].re, want, epsilon = 1e-16);
        }
        assert_abs_diff_eq!(m[(0, 4)].re, 0.208333333333333 - 0.0625, epsilon = 1e-14);
        assert_abs_diff_eq!(m[(8, 4)].re, 7.0 / 48.0, epsilon = 1e-16);
        assert_eq!(m[(0, 1)].re, 0.0);
        assert_eq!(m[(1, 3)].re, 0.0);
        assert!(crate::densmat::validate_density(m, &Tolerances::default()).is_ok());
    }

    #[test]
    fn family_endpoints() {
        for d in 2..=5 {
            let mixed = make_isotropic::<f64>(d, 1.0 / (d * d) as f64).unwrap();
            assert!(mixed.max_abs_diff(&DensityMatrix::maximally_mixed(d * d)) < 1e-16);
        }
        let pure = make_isotropic::<f64>(3, 1.0).unwrap();
        assert!(pure.max_abs_diff(&MaxEntangled::new(3).unwrap().density()) < 1e-15);
    }

    #[test]
    fn equals_mixture_of_identity_and_projector() {
        let s = IsotropicState::<f64>::new(4, 0.37).unwrap();
        let p = MaxEntangled::<f64>::new(4).unwrap();
        let mix = ComplexMatrix::identity(16)
            .scale(s.epsilon())
            .add(&p.projector().scale(s.zeta()))
            .unwrap();
        assert!(s.to_matrix().max_abs_diff(&mix) < 1e-15);
    }

    #[test]
    fn low_fidelity_state_is_still_physical() {
        // ζ < 0 below F = 1/d²
        let s = IsotropicState::<f64>::new(3, 0.02).unwrap();
        assert!(s.zeta() < 0.0);
        assert!(crate::densmat::validate_density(s.to_matrix(), &Tolerances::default()).is_ok());
    }

    #[test]
    fn min_eigenvalue_is_epsilon() {
        let m = make_isotropic::<f64>(3, 0.5).unwrap();
        let ev = crate::densmat::min_eigenvalue(m.matrix(), &Tolerances::default()).unwrap();
        assert_abs_diff_eq!(ev, 0.0625, epsilon = 1e-14);
    }

    #[test]
    fn construction_errors() {
        assert!(make_isotropic::<f64>(1, 0.5).is_err());
        assert!(make_isotropic::<f64>(3, 1.01).is_err());
        assert!(make_isotropic::<f64>(3, -0.01).is_err());
        assert!(make_isotropic::<f64>(3, f64::NAN).is_err());
    }

    #[test]
    fn fidelity_round_trip() {
        let fit = isotropic_fidelity(&make_isotropic::<f64>(4, 0.3).unwrap(), 4).unwrap();
        assert_abs_diff_eq!(fit.fidelity, 0.3, epsilon = 1e-14);
        assert!(fit.residual <= 1e-14);
        assert!(isotropic_fidelity(&make_isotropic::<f64>(4, 0.3).unwrap(), 3).is_err());
    }

    #[test]
    fn critical_fidelity_values() {
        assert_abs_diff_eq!(critical_fidelity::<f64>(3).unwrap(), 1.0 / 3.0);
        assert_eq!(critical_fidelity::<f64>(4).unwrap(), 0.25);
        assert_abs_diff_eq!(critical_fidelity::<f64>(10).unwrap(), 0.1);
        assert!(critical_fidelity::<f64>(1).is_err());
    }

    #[test]
    fn separability_examples() {
        assert!(is_separable(3, 1.0 / 3.0).unwrap());
        assert!(!is_separable(3, 0.34).unwrap());
        assert!(is_separable(5, 0.19).unwrap());
    }

    #[test]
    fn eof_examples() {
        assert_eq!(eof_isotropic(3, 1.0 / 3.0).unwrap().eof, 0.0);
        assert_eq!(
            eof_isotropic(3, 1.0 / 3.0).unwrap().branch,
            EofBranch::Separable
        );

        let b = eof_isotropic(3, 8.0 / 9.0).unwrap();
        assert_abs_diff_eq!(b.xi, 2.0 / 3.0, epsilon = 1e-15);
        // H2(2/3) + 1/3
        let hand =
            -(2.0 / 3.0) * (2.0f64 / 3.0).log2() - (1.0 / 3.0) * (1.0f64 / 3.0).log2() + 1.0 / 3.0;
        assert_abs_diff_eq!(b.eof, hand, epsilon = 1e-14);
        assert_abs_diff_eq!(b.eof, 1.251629, epsilon = 1e-6);
        assert_abs_diff_eq!(eof_linear_branch(3, 8.0 / 9.0), hand, epsilon = 1e-14);

        let top = eof_isotropic(3, 1.0).unwrap();
        assert_eq!(top.branch, EofBranch::LinearBranch);
        assert_abs_diff_eq!(top.eof, 3f64.log2(), epsilon = 1e-15);
        assert_abs_diff_eq!(top.eof, 1.584963, epsilon = 1e-6);

        assert_eq!(eof_isotropic(4, 0.2).unwrap().eof, 0.0);
    }

    #[test]
    fn eof_rejects_qubits_and_bad_fidelity() {
        assert!(matches!(
            eof_isotropic(2, 0.9),
            Err(Error::UnsupportedDimension { d: 2, min: 3 })
        ));
        assert!(eof_isotropic(3, 1.5).is_err());
    }

    #[test]
    fn branches_meet_at_boundaries() {
        for d in 3..=10 {
            let fc = 1.0 / d as f64;
            assert!(eof_middle_branch(d, fc).abs() <= 1e-12, "d={d}");
            let fb = linear_branch_start::<f64>(d);
            assert!(
                (eof_middle_branch(d, fb) - eof_linear_branch(d, fb)).abs() <= 1e-12,
                "d={d}"
            );
        }
    }

    proptest! {
        #[test]
        fn eof_range_and_separability(d in 3usize..=10, f in 0.0f64..=1.0) {
            let e = eof_isotropic(d, f).unwrap().eof;
            prop_assert!(e >= 0.0);
            prop_assert!(e <= (d as f64).log2() + 1e-12);
            prop_assert_eq!(e == 0.0, is_separable(d, f).unwrap());
        }

        #[test]
        fn weights_reconstruct(d in 2usize..=10, f in 0.0f64..=1.0) {
            let s = IsotropicState::new(d, f).unwrap();
            prop_assert!((s.epsilon() + s.zeta() - f).abs() <= 1e-14);
            prop_assert!(((d * d) as f64 * s.epsilon() + s.zeta() - 1.0).abs() <= 1e-14);
            prop_assert!(s.epsilon() >= 0.0);
        }
    }
}
