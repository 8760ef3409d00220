use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::state::DensityOperator;
use super::{EIGEN_TOL, EXACT_TOL};
use crate::error::{invalid, Result};

/// A positive operator-valued measure with labelled outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
    labels: Vec<String>,
}

impl Povm {
    pub fn new(elements: Vec<ComplexMatrix>, labels: Vec<String>) -> Result<Self> {
        if elements.is_empty() {
            return Err(invalid("POVM needs at least one element"));
        }
        if elements.len() != labels.len() {
            return Err(invalid("POVM needs one label per element"));
        }
        let dim = elements[0].rows();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for (k, e) in elements.iter().enumerate() {
            if !e.is_square() || e.rows() != dim {
                return Err(invalid(format!("POVM element {k} is not {dim}x{dim}")));
            }
            if !e.is_hermitian(EXACT_TOL) || e.min_eigenvalue() < -EIGEN_TOL {
                return Err(invalid(format!("POVM element {k} is not positive semidefinite")));
            }
            sum = sum.add(e)?;
        }
        if sum.max_abs_diff(&ComplexMatrix::identity(dim)) > EXACT_TOL {
            return Err(invalid("POVM elements do not sum to the identity"));
        }
        Ok(Self { elements, labels })
    }

    /// Projective measurement in the computational basis, outcomes labelled
    /// `"0"`, `"1"`, ...
    pub fn computational(dim: usize) -> Self {
        let elements = (0..dim)
            .map(|i| ComplexMatrix::basis_projector(dim, i))
            .collect();
        let labels = (0..dim).map(|i| i.to_string()).collect();
        Self::new(elements, labels).expect("computational basis is a POVM")
    }

    /// Projective measurement in the `|±>` basis, labelled `"+"` and `"-"`.
    pub fn hadamard_basis() -> Self {
        let h = 1.0 / 2.0_f64.sqrt();
        let a = Complex64::new(h, 0.0);
        let plus = ComplexMatrix::outer(&[a, a]);
        let minus = ComplexMatrix::outer(&[a, -a]);
        Self::new(vec![plus, minus], vec!["+".into(), "-".into()]).expect("valid basis")
    }

    pub fn dim(&self) -> usize {
        self.elements[0].rows()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, index: usize) -> Option<&ComplexMatrix> {
        self.elements.get(index)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// Born-rule probability `Tr[Π_i ρ]`, clamped to `[0, 1]`.
pub fn measure_probability(povm: &Povm, outcome_index: usize, rho: &DensityOperator) -> Result<f64> {
    let element = povm.element(outcome_index).ok_or_else(|| {
        invalid(format!(
            "outcome index {outcome_index} out of range for a {}-outcome POVM",
            povm.len()
        ))
    })?;
    if povm.dim() != rho.dim() {
        return Err(invalid(format!(
            "POVM acts on dimension {}, state has dimension {}",
            povm.dim(),
            rho.dim()
        )));
    }
    let p = element.matmul(rho.matrix())?.trace().re;
    Ok(p.clamp(0.0, 1.0))
}
