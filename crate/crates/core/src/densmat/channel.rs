use super::matrix::ComplexMatrix;
use super::{DensityMatrix, Tolerances};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Operators `{K_μ}` of one operator-sum channel.
///
/// Channels here act as `ρ ↦ Σ K† ρ K`. Construction enforces
/// `Σ K†K = I`; `Σ K K† = I` (unitality) is measured separately. For the
/// real diagonal dephasing sets both sums coincide, as do `K† ρ K` and
/// `K ρ K†`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet<T> {
    dim: usize,
    operators: Vec<ComplexMatrix<T>>,
}

impl<T: Real> KrausSet<T> {
    pub fn new(operators: Vec<ComplexMatrix<T>>, tol: &Tolerances<T>) -> Result<Self> {
        let set = Self::unchecked(operators)?;
        let residual = set.completeness_residual();
        if residual > tol.kraus {
            return Err(Error::Incomplete {
                residual: residual.as_f64(),
            });
        }
        Ok(set)
    }

    /// Builds the set checking only shapes. Used to study deliberately broken channels.
    pub fn unchecked(operators: Vec<ComplexMatrix<T>>) -> Result<Self> {
        let first = operators.first().ok_or(Error::EmptyKrausSet)?;
        let dim = first.rows();
        for k in &operators {
            if k.rows() != dim || k.cols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    rows: k.rows(),
                    cols: k.cols(),
                });
            }
        }
        Ok(Self { dim, operators })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            operators: vec![ComplexMatrix::identity(dim)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[ComplexMatrix<T>] {
        &self.operators
    }

    /// `‖Σ K†K − I‖_max`.
    pub fn completeness_residual(&self) -> T {
        self.sum_residual(|k| k.adjoint().matmul(k))
    }

    /// `‖Σ K K† − I‖_max`.
    pub fn unitality_residual(&self) -> T {
        self.sum_residual(|k| k.matmul(&k.adjoint()))
    }

    fn sum_residual(&self, term: impl Fn(&ComplexMatrix<T>) -> Result<ComplexMatrix<T>>) -> T {
        let mut acc = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.operators {
            match term(k).and_then(|t| acc.add(&t)) {
                Ok(sum) => acc = sum,
                Err(_) => return T::infinity(),
            }
        }
        acc.max_abs_diff(&ComplexMatrix::identity(self.dim))
    }

    pub fn is_real_diagonal(&self) -> bool {
        self.operators.iter().all(ComplexMatrix::is_real_diagonal)
    }

    /// The product channel with operators `K'_ν · K_μ` (apply `self` first).
    pub fn then(&self, next: &Self) -> Result<Self> {
        if self.dim != next.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                rows: next.dim,
                cols: next.dim,
            });
        }
        let mut ops = Vec::with_capacity(self.operators.len() * next.operators.len());
        for k in &self.operators {
            for l in &next.operators {
                ops.push(k.matmul(l)?);
            }
        }
        Ok(Self {
            dim: self.dim,
            operators: ops,
        })
    }
}

fn check_dims<T: Real>(rho: &DensityMatrix<T>, ks: &KrausSet<T>) -> Result<()> {
    if rho.dim() != ks.dim {
        return Err(Error::DimensionMismatch {
            expected: ks.dim,
            rows: rho.dim(),
            cols: rho.dim(),
        });
    }
    Ok(())
}

/// `Σ_μ K_μ† ρ K_μ`.
pub fn apply_channel<T: Real>(
    rho: &DensityMatrix<T>,
    ks: &KrausSet<T>,
) -> Result<DensityMatrix<T>> {
    check_dims(rho, ks)?;
    let mut out = ComplexMatrix::zeros(ks.dim, ks.dim);
    for k in &ks.operators {
        out = out.add(&k.adjoint().matmul(rho.matrix())?.matmul(k)?)?;
    }
    Ok(DensityMatrix::from_trusted(out))
}

/// `Σ_μ K_μ ρ K_μ†`.
pub fn apply_channel_conventional<T: Real>(
    rho: &DensityMatrix<T>,
    ks: &KrausSet<T>,
) -> Result<DensityMatrix<T>> {
    check_dims(rho, ks)?;
    let mut out = ComplexMatrix::zeros(ks.dim, ks.dim);
    for k in &ks.operators {
        out = out.add(&k.matmul(rho.matrix())?.matmul(&k.adjoint())?)?;
    }
    Ok(DensityMatrix::from_trusted(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densmat::MaxEntangled;
    use num_complex::Complex;

    #[test]
    fn identity_channel_leaves_state_unchanged() {
        let p = MaxEntangled::<f64>::new(3).unwrap().density();
        let out = apply_channel(&p, &KrausSet::identity(9)).unwrap();
        assert_eq!(out, p);
    }

    #[test]
    fn incomplete_set_rejected() {
        let half = ComplexMatrix::<f64>::identity(2).scale(0.5);
        assert!(matches!(
            KrausSet::new(vec![half], &Tolerances::default()),
            Err(Error::Incomplete { .. })
        ));
        assert!(matches!(
            KrausSet::<f64>::new(vec![], &Tolerances::default()),
            Err(Error::EmptyKrausSet)
        ));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let rho = DensityMatrix::<f64>::maximally_mixed(4);
        assert!(apply_channel(&rho, &KrausSet::identity(9)).is_err());
        let mixed = vec![
            ComplexMatrix::<f64>::identity(2),
            ComplexMatrix::identity(3),
        ];
        assert!(KrausSet::unchecked(mixed).is_err());
    }

    #[test]
    fn conventions_differ_for_non_diagonal_operators() {
        // amplitude-damping-like pair: the two orderings disagree, so the
        // equality checked for the dephasing sets is not vacuous
        let g: f64 = 0.6;
        let k0 = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, (1.0 - g).sqrt()]).unwrap();
        let k1 = ComplexMatrix::from_real(2, 2, &[0.0, g.sqrt(), 0.0, 0.0]).unwrap();
        let ks = KrausSet::new(vec![k0, k1], &Tolerances::default()).unwrap();
        assert!(!ks.is_real_diagonal());
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(1, 1)] = Complex::new(1.0, 0.0);
        let rho = DensityMatrix::from_trusted(m);
        let a = apply_channel(&rho, &ks).unwrap();
        let b = apply_channel_conventional(&rho, &ks).unwrap();
        assert!(a.max_abs_diff(&b) > 0.1);
    }
}
