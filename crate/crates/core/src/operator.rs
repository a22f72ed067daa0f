//! Dense complex matrices and the superoperator primitives built on them.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance;

/// Dense square complex matrix. Every operator in the crate uses this type.
pub type ComplexMatrix = DMatrix<Complex64>;

pub(crate) const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub(crate) const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub(crate) const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `|i⟩⟨j|` on a `dim`-level space (zero-based indices).
pub fn dyad(dim: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    m[(i, j)] = ONE;
    m
}

pub fn identity(dim: usize) -> ComplexMatrix {
    ComplexMatrix::identity(dim, dim)
}

/// Largest entry modulus.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn is_zero(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re == 0.0 && z.im == 0.0)
}

pub(crate) fn check_square(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() == 0 {
        return Err(Error::InvalidModel("zero-dimensional matrix".into()));
    }
    Ok(m.nrows())
}

pub(crate) fn check_finite(m: &ComplexMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

fn check_same_dim(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<usize> {
    let n = check_square(a)?;
    let m = check_square(b)?;
    if n != m {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m,
        });
    }
    Ok(n)
}

/// `AB − BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_same_dim(a, b)?;
    Ok(a * b - b * a)
}

/// `𝒟_{A,B} ρ = AρB − ½(BAρ + ρBA)`.
///
/// With `B = A†` this is the usual Lindblad dissipator. The result is
/// traceless for any inputs.
pub fn dissipator_apply(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    rho: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    check_same_dim(a, b)?;
    check_same_dim(a, rho)?;
    let ba = b * a;
    Ok(a * rho * b - (&ba * rho + rho * &ba) * Complex64::new(0.5, 0.0))
}

/// `Tr(Oρ)`.
pub fn expectation(op: &ComplexMatrix, rho: &DensityMatrix) -> Result<Complex64> {
    check_same_dim(op, rho.matrix())?;
    Ok(trace_of_product(op, rho.matrix()))
}

/// `Tr(AB)` without forming the product.
pub fn trace_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// `‖M − M†‖_max`.
pub fn hermiticity_defect(m: &ComplexMatrix) -> f64 {
    let n = m.nrows().min(m.ncols());
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `|Tr ρ − 1|`.
pub fn trace_defect(rho: &ComplexMatrix) -> f64 {
    (rho.trace() - ONE).norm()
}

/// `(M + M†)/2`.
pub fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Smallest eigenvalue of the hermitized matrix.
///
/// Refuses inputs whose Hermiticity defect exceeds
/// [`tolerance::EIGEN_INPUT_HERMITIAN`], since their spectrum is not real.
pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    check_square(m)?;
    check_finite(m)?;
    let defect = hermiticity_defect(m);
    if defect > tolerance::EIGEN_INPUT_HERMITIAN {
        return Err(Error::NotHermitian { defect });
    }
    let eig = hermitize(m).symmetric_eigenvalues();
    Ok(eig.iter().cloned().fold(f64::INFINITY, f64::min))
}

/// A Hermitian, unit-trace, positive semidefinite matrix.
///
/// The invariants are checked once at construction; the wrapped matrix is
/// immutable afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        check_square(&matrix)?;
        check_finite(&matrix)?;
        let defect = hermiticity_defect(&matrix);
        if defect > tolerance::HERMITIAN {
            return Err(Error::NotHermitian { defect });
        }
        let defect = trace_defect(&matrix);
        if defect > tolerance::UNIT_TRACE {
            return Err(Error::NotUnitTrace { defect });
        }
        let min_eigenvalue = min_eigenvalue(&matrix)?;
        if min_eigenvalue < -tolerance::POSITIVITY {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self { matrix })
    }

    /// `|ψ⟩⟨ψ|` for the normalized version of `amplitudes`.
    pub fn from_amplitudes(amplitudes: &[Complex64]) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if amplitudes.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidModel(
                "state amplitudes must be finite and not all zero".into(),
            ));
        }
        let n = amplitudes.len();
        let psi: Vec<Complex64> = amplitudes.iter().map(|a| a / norm).collect();
        let m = ComplexMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj());
        Self::new(m)
    }

    /// The basis state `|index⟩⟨index|`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        Self::new(dyad(dim, index, index))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_inner(self) -> ComplexMatrix {
        self.matrix
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0), c(-1.0)]))
    }

    #[test]
    fn commutator_of_identity_and_self() {
        let id = identity(3);
        assert!(is_zero(&commutator(&id, &id).unwrap()));
        assert!(max_abs(&commutator(&sigma_z(), &sigma_z()).unwrap()) == 0.0);
    }

    #[test]
    fn commutator_two_level_decay_matrix() {
        // K = (γ/2)|3⟩⟨3| with γ = 0.1; levels |1⟩,|3⟩ at indices 0,1.
        let k = dyad(2, 1, 1) * c(0.05);
        let s = dyad(2, 0, 1);
        let out = commutator(&k, &s).unwrap();
        let expected = dyad(2, 0, 1) * c(-0.05);
        assert!(max_abs(&(out - expected)) < 1e-15);
    }

    #[test]
    fn commutator_rejects_mismatch() {
        let err = commutator(&identity(2), &identity(3)).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                expected: 2,
                found: 3
            }
        );
    }

    #[test]
    fn dissipator_identity_is_zero() {
        let rho = DensityMatrix::from_amplitudes(&[c(1.0), c(2.0)]).unwrap();
        let out = dissipator_apply(&identity(2), &identity(2), rho.matrix()).unwrap();
        assert!(max_abs(&out) < 1e-15);
    }

    #[test]
    fn dissipator_lowering_on_excited_state() {
        let lower = dyad(2, 0, 1);
        let raise = dyad(2, 1, 0);
        let out = dissipator_apply(&lower, &raise, &dyad(2, 1, 1)).unwrap();
        let expected = dyad(2, 0, 0) - dyad(2, 1, 1);
        assert!(max_abs(&(out - expected)) < 1e-15);
    }

    #[test]
    fn dissipator_rejects_mismatch() {
        assert!(dissipator_apply(&identity(2), &identity(2), &identity(3)).is_err());
    }

    #[test]
    fn expectation_values() {
        let rho = DensityMatrix::basis(2, 0).unwrap();
        assert_eq!(expectation(&identity(2), &rho).unwrap(), c(1.0));
        assert_eq!(expectation(&dyad(2, 0, 0), &rho).unwrap(), c(1.0));

        let plus = DensityMatrix::from_amplitudes(&[c(1.0), c(1.0)]).unwrap();
        let coherence = expectation(&dyad(2, 0, 1), &plus).unwrap();
        assert!((coherence - c(0.5)).norm() < 1e-15);
        assert!(expectation(&identity(3), &plus).is_err());
    }

    #[test]
    fn diagnostics() {
        let half = identity(2) * c(0.5);
        assert_eq!(hermiticity_defect(&half), 0.0);
        assert_eq!(trace_defect(&half), 0.0);
        assert!((min_eigenvalue(&half).unwrap() - 0.5).abs() < 1e-15);

        let nilpotent = dyad(2, 0, 1);
        assert_eq!(hermiticity_defect(&nilpotent), 1.0);
        assert!(matches!(
            min_eigenvalue(&nilpotent),
            Err(Error::NotHermitian { .. })
        ));

        let indefinite = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(1.5),
            c(-0.5),
        ]));
        assert!((min_eigenvalue(&indefinite).unwrap() + 0.5).abs() < 1e-15);
        assert!(matches!(
            DensityMatrix::new(indefinite),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn density_matrix_validation() {
        assert!(matches!(
            DensityMatrix::new(identity(2)),
            Err(Error::NotUnitTrace { .. })
        ));
        assert!(matches!(
            DensityMatrix::new(dyad(2, 0, 1) + identity(2) * c(0.5)),
            Err(Error::NotHermitian { .. })
        ));
        let mut nan = identity(2) * c(0.5);
        nan[(0, 0)] = c(f64::NAN);
        assert_eq!(DensityMatrix::new(nan), Err(Error::NonFinite));
        assert!(DensityMatrix::from_amplitudes(&[c(0.0), c(0.0)]).is_err());
        assert!(DensityMatrix::basis(2, 2).is_err());
    }
}
