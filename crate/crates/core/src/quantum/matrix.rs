use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Dense complex matrix stored row-major at construction time.
///
/// This is a thin wrapper over `nalgebra::DMatrix<Complex64>`; the dimensions
/// involved here never exceed a system-times-environment register of a few
/// levels, so no sparse or structured representation is needed.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(invalid("matrix dimensions must be positive"));
        }
        if entries.len() != rows * cols {
            return Err(invalid(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, &entries)))
    }

    /// Row-major real entries, imaginary parts zero.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    /// `|i><i|` in dimension `dim`.
    pub fn basis_projector(dim: usize, i: usize) -> Self {
        let mut m = DMatrix::zeros(dim, dim);
        m[(i, i)] = Complex64::new(1.0, 0.0);
        Self(m)
    }

    /// `|psi><psi|` for an (unnormalised) ket.
    pub fn outer(ket: &[Complex64]) -> Self {
        let v = nalgebra::DVector::from_column_slice(ket);
        Self(&v * v.adjoint())
    }

    pub fn from_inner(m: DMatrix<Complex64>) -> Self {
        Self(m)
    }

    pub fn inner(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                out.push(self.0[(r, c)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols() != rhs.rows() {
            return Err(invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols(),
                rhs.rows(),
                rhs.cols()
            )));
        }
        Ok(Self(&self.0 * &rhs.0))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.rows() != rhs.rows() || self.cols() != rhs.cols() {
            return Err(invalid("cannot add matrices of different shapes"));
        }
        Ok(Self(&self.0 + &rhs.0))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self(&self.0 * Complex64::new(factor, 0.0))
    }

    /// Tensor product `self ⊗ rhs`, with `self` as the most significant factor.
    pub fn kron(&self, rhs: &Self) -> Self {
        Self(self.0.kronecker(&rhs.0))
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// Traces out the second (least significant) factor of a square matrix on
    /// `C^keep ⊗ C^discard`.
    pub fn partial_trace_second(&self, keep: usize, discard: usize) -> Result<Self> {
        if !self.is_square() || self.rows() != keep * discard {
            return Err(invalid(format!(
                "partial trace expects a {0}x{0} matrix, got {1}x{2}",
                keep * discard,
                self.rows(),
                self.cols()
            )));
        }
        let out = DMatrix::from_fn(keep, keep, |i, j| {
            (0..discard)
                .map(|e| self.0[(i * discard + e, j * discard + e)])
                .sum()
        });
        Ok(Self(out))
    }

    /// Largest entrywise modulus of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        assert_eq!(self.0.shape(), rhs.0.shape(), "shape mismatch");
        self.0
            .iter()
            .zip(rhs.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Eigenvalues of the Hermitian part `(M + M†)/2`, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let sym = (&self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0);
        let mut values: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(f64::total_cmp);
        values
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.hermitian_eigenvalues()[0]
    }

    /// `‖M†M − I‖_max`; zero for unitaries and isometries.
    pub fn isometry_defect(&self) -> f64 {
        let gram = self.adjoint().0 * &self.0;
        Self(gram).max_abs_diff(&Self::identity(self.cols()))
    }
}

/// Pauli X.
pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).expect("2x2")
}

/// Pauli Y.
pub fn pauli_y() -> ComplexMatrix {
    let i = Complex64::i();
    let z = Complex64::new(0.0, 0.0);
    ComplexMatrix::new(2, 2, vec![z, -i, i, z]).expect("2x2")
}

/// Pauli Z.
pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).expect("2x2")
}
