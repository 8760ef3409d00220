use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::matrix::{pauli_x, pauli_y, pauli_z, ComplexMatrix};
use super::povm::{measure_probability, Povm};
use super::state::DensityOperator;
use super::EXACT_TOL;
use crate::error::{invalid, Result};

/// Environment dimension used when a caller does not ask for a specific one.
pub const DEFAULT_ENV_DIM: usize = 3;

/// A completely positive trace-preserving map, either in operator-sum form
/// or as a unitary interaction with an environment that is traced out.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumChannel {
    Kraus {
        operators: Vec<ComplexMatrix>,
    },
    Dilation {
        /// Acts on `system ⊗ environment`, environment least significant.
        unitary: ComplexMatrix,
        env_dim: usize,
        env_state: DensityOperator,
    },
}

/// Concrete noise models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StandardChannel {
    Identity,
    /// `ρ ↦ (1 − f)ρ + f XρX`.
    BitFlip(f64),
    /// `ρ ↦ (1 − λ)ρ + λ I/2`.
    Depolarizing(f64),
}

impl StandardChannel {
    fn kraus_operators(self) -> Result<Vec<ComplexMatrix>> {
        match self {
            StandardChannel::Identity => Ok(vec![ComplexMatrix::identity(2)]),
            StandardChannel::BitFlip(f) => {
                check_unit_interval("bit-flip probability", f)?;
                Ok(vec![
                    ComplexMatrix::identity(2).scale((1.0 - f).sqrt()),
                    pauli_x().scale(f.sqrt()),
                ])
            }
            StandardChannel::Depolarizing(lambda) => {
                check_unit_interval("depolarizing strength", lambda)?;
                let pauli_weight = (lambda / 4.0).sqrt();
                Ok(vec![
                    ComplexMatrix::identity(2).scale((1.0 - 0.75 * lambda).sqrt()),
                    pauli_x().scale(pauli_weight),
                    pauli_y().scale(pauli_weight),
                    pauli_z().scale(pauli_weight),
                ])
            }
        }
    }
}

fn check_unit_interval(what: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(invalid(format!("{what} must lie in [0, 1], got {x}")))
    }
}

/// Operator-sum form of a standard noise model.
pub fn make_standard_channel(kind: StandardChannel) -> Result<QuantumChannel> {
    QuantumChannel::kraus(kind.kraus_operators()?)
}

/// Environment-dilation form of a standard noise model with the environment
/// prepared in `|0><0|`.
///
/// `env_dim = None` picks the smallest environment that holds every Kraus
/// operator: 1 level is padded to 2 for the identity, 2 for bit flip, 4 for
/// depolarizing.
pub fn make_standard_dilation(
    kind: StandardChannel,
    env_dim: Option<usize>,
) -> Result<QuantumChannel> {
    let ops = kind.kraus_operators()?;
    let env_dim = env_dim.unwrap_or(ops.len().max(2));
    QuantumChannel::dilate_kraus(&ops, env_dim)
}

impl QuantumChannel {
    /// Validates completeness `Σ K†K = I`.
    pub fn kraus(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let first = operators
            .first()
            .ok_or_else(|| invalid("a Kraus channel needs at least one operator"))?;
        let (dout, din) = (first.rows(), first.cols());
        let mut completeness = ComplexMatrix::zeros(din, din);
        for (k, op) in operators.iter().enumerate() {
            if op.rows() != dout || op.cols() != din {
                return Err(invalid(format!(
                    "Kraus operator {k} is {}x{}, expected {dout}x{din}",
                    op.rows(),
                    op.cols()
                )));
            }
            completeness = completeness.add(&op.adjoint().matmul(op)?)?;
        }
        let defect = completeness.max_abs_diff(&ComplexMatrix::identity(din));
        if defect > EXACT_TOL {
            return Err(invalid(format!(
                "Kraus operators are not trace preserving (defect {defect:e})"
            )));
        }
        Ok(QuantumChannel::Kraus { operators })
    }

    /// Validates `U†U = I` and the register dimensions.
    pub fn dilation(unitary: ComplexMatrix, env_dim: usize, env_state: DensityOperator) -> Result<Self> {
        if env_dim < 2 {
            return Err(invalid("environment dimension must be at least 2"));
        }
        if env_state.dim() != env_dim {
            return Err(invalid(format!(
                "environment state has dimension {}, expected {env_dim}",
                env_state.dim()
            )));
        }
        if !unitary.is_square() || !unitary.rows().is_multiple_of(env_dim) || unitary.rows() / env_dim < 2 {
            return Err(invalid(format!(
                "a {}x{} unitary does not act on system ⊗ C^{env_dim}",
                unitary.rows(),
                unitary.cols()
            )));
        }
        let defect = unitary.isometry_defect();
        if defect > EXACT_TOL {
            return Err(invalid(format!("dilation is not unitary (defect {defect:e})")));
        }
        Ok(QuantumChannel::Dilation {
            unitary,
            env_dim,
            env_state,
        })
    }

    /// Stinespring dilation of a square Kraus set with the environment in
    /// `|0><0|`: the columns for inputs `|i>⊗|0>` are `Σ_k K_k|i>⊗|k>`, and
    /// the remaining columns complete an orthonormal basis.
    pub fn dilate_kraus(operators: &[ComplexMatrix], env_dim: usize) -> Result<Self> {
        // validates completeness and shapes
        let QuantumChannel::Kraus { operators } = Self::kraus(operators.to_vec())? else {
            unreachable!()
        };
        let dim = operators[0].cols();
        if operators[0].rows() != dim {
            return Err(invalid("dilation needs square Kraus operators"));
        }
        if env_dim < operators.len() {
            return Err(invalid(format!(
                "{} Kraus operators do not fit in a {env_dim}-level environment",
                operators.len()
            )));
        }
        let total = dim * env_dim;
        let mut columns: Vec<Option<DVector<Complex64>>> = vec![None; total];
        let mut basis: Vec<DVector<Complex64>> = Vec::with_capacity(total);
        for i in 0..dim {
            let mut col = DVector::zeros(total);
            for (k, op) in operators.iter().enumerate() {
                for s in 0..dim {
                    col[s * env_dim + k] = op.get(s, i);
                }
            }
            basis.push(col.clone());
            columns[i * env_dim] = Some(col);
        }
        // complete with Gram-Schmidt over the standard basis
        let free_slots: Vec<usize> = (0..total).filter(|c| columns[*c].is_none()).collect();
        let mut free = free_slots.into_iter();
        for candidate in 0..total {
            if basis.len() == total {
                break;
            }
            let mut v = DVector::<Complex64>::zeros(total);
            v[candidate] = Complex64::new(1.0, 0.0);
            for _ in 0..2 {
                for b in &basis {
                    let overlap = b.dotc(&v);
                    v -= b * overlap;
                }
            }
            let norm = v.norm();
            if norm > 1e-6 {
                v /= Complex64::new(norm, 0.0);
                basis.push(v.clone());
                let slot = free.next().expect("free column available");
                columns[slot] = Some(v);
            }
        }
        let cols: Vec<DVector<Complex64>> = columns
            .into_iter()
            .map(|c| c.expect("every column filled"))
            .collect();
        let unitary = ComplexMatrix::from_inner(DMatrix::from_columns(&cols));
        Self::dilation(unitary, env_dim, DensityOperator::basis(env_dim, 0)?)
    }

    pub fn input_dim(&self) -> usize {
        match self {
            QuantumChannel::Kraus { operators } => operators[0].cols(),
            QuantumChannel::Dilation {
                unitary, env_dim, ..
            } => unitary.rows() / env_dim,
        }
    }

    pub fn output_dim(&self) -> usize {
        match self {
            QuantumChannel::Kraus { operators } => operators[0].rows(),
            QuantumChannel::Dilation { .. } => self.input_dim(),
        }
    }

    /// Applies the channel to an arbitrary square operator of the input
    /// dimension (no density-operator validation on input or output).
    pub fn apply_operator(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        if !m.is_square() || m.rows() != self.input_dim() {
            return Err(invalid(format!(
                "channel expects a {0}x{0} input, got {1}x{2}",
                self.input_dim(),
                m.rows(),
                m.cols()
            )));
        }
        match self {
            QuantumChannel::Kraus { operators } => {
                let mut out = ComplexMatrix::zeros(self.output_dim(), self.output_dim());
                for k in operators {
                    out = out.add(&k.matmul(m)?.matmul(&k.adjoint())?)?;
                }
                Ok(out)
            }
            QuantumChannel::Dilation {
                unitary,
                env_dim,
                env_state,
            } => {
                let joint = m.kron(env_state.matrix());
                let evolved = unitary.matmul(&joint)?.matmul(&unitary.adjoint())?;
                evolved.partial_trace_second(self.input_dim(), *env_dim)
            }
        }
    }
}

/// `ε(ρ)`; for the dilation form this is `Tr_env[U (ρ ⊗ ρ_env) U†]`.
pub fn apply_channel(channel: &QuantumChannel, rho: &DensityOperator) -> Result<DensityOperator> {
    DensityOperator::new(channel.apply_operator(rho.matrix())?)
}

/// Probability that a prepared state is registered as the wrong outcome
/// after passing through the channel: `Tr[Π_wrong ε(ρ_x)]`.
pub fn error_rate(
    channel: &QuantumChannel,
    rho_x: &DensityOperator,
    povm: &Povm,
    wrong_outcome_index: usize,
) -> Result<f64> {
    if wrong_outcome_index >= povm.len() {
        return Err(invalid(format!(
            "outcome index {wrong_outcome_index} out of range for a {}-outcome POVM",
            povm.len()
        )));
    }
    if channel.output_dim() != povm.dim() {
        return Err(invalid("channel output and POVM dimensions differ"));
    }
    let out = apply_channel(channel, rho_x)?;
    measure_probability(povm, wrong_outcome_index, &out)
}
