use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::{EIGEN_TOL, EXACT_TOL};
use crate::error::{invalid, Result};

/// A validated density operator: Hermitian, unit trace and positive
/// semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Validates `matrix` against the density-operator invariants.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(invalid("density operator must be square"));
        }
        if matrix.rows() < 2 {
            return Err(invalid("density operator dimension must be at least 2"));
        }
        if !matrix.is_hermitian(EXACT_TOL) {
            return Err(invalid("density operator is not Hermitian"));
        }
        let tr = matrix.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > EXACT_TOL {
            return Err(invalid(format!("density operator trace is {tr}, expected 1")));
        }
        let min = matrix.min_eigenvalue();
        if min < -EIGEN_TOL {
            return Err(invalid(format!(
                "density operator has negative eigenvalue {min:e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// Pure computational basis state `|i><i|`.
    pub fn basis(dim: usize, i: usize) -> Result<Self> {
        if i >= dim {
            return Err(invalid(format!("basis index {i} out of range for dim {dim}")));
        }
        Self::new(ComplexMatrix::basis_projector(dim, i))
    }

    /// Pure state from a ket; the ket is normalised first.
    pub fn pure(ket: &[Complex64]) -> Result<Self> {
        let norm: f64 = ket.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(invalid("zero ket"));
        }
        let normalised: Vec<Complex64> = ket.iter().map(|c| c / norm).collect();
        Self::new(ComplexMatrix::outer(&normalised))
    }

    /// `|+> = (|0> + |1>)/√2`.
    pub fn plus() -> Self {
        let a = Complex64::new(1.0, 0.0);
        Self::pure(&[a, a]).expect("valid ket")
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(ComplexMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_valid_states() {
        assert_eq!(DensityOperator::basis(2, 1).unwrap().dim(), 2);
        assert!(DensityOperator::maximally_mixed(3).is_ok());
        let plus = DensityOperator::plus();
        assert!((plus.matrix().get(0, 1).re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid_states() {
        // trace 2
        let m = ComplexMatrix::identity(2);
        assert!(DensityOperator::new(m).is_err());
        // negative eigenvalue
        let m = ComplexMatrix::from_real(2, 2, &[1.2, 0.0, 0.0, -0.2]).unwrap();
        assert!(DensityOperator::new(m).is_err());
        // not Hermitian
        let m = ComplexMatrix::from_real(2, 2, &[0.5, 0.3, 0.0, 0.5]).unwrap();
        assert!(DensityOperator::new(m).is_err());
        // not square
        let m = ComplexMatrix::from_real(2, 3, &[0.0; 6]).unwrap();
        assert!(DensityOperator::new(m).is_err());
        assert!(DensityOperator::basis(2, 2).is_err());
    }
}
