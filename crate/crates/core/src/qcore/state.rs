use super::linalg::{self, hermitian_eigenvalues, unitarity_residual};
use super::{Register, TOL_ALGEBRA};
use crate::{CMatrix, CVector, Error, Result, C64};

/// Normalized pure state on a register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: CVector,
    register: Register,
}

impl StateVector {
    pub fn new(amplitudes: CVector, register: Register) -> Result<Self> {
        check_len(amplitudes.len(), &register)?;
        let dev = (amplitudes.norm() - 1.0).abs();
        if dev > TOL_ALGEBRA {
            return Err(Error::NotNormalized(dev));
        }
        Ok(Self { amplitudes, register })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: CVector, register: Register) -> Result<Self> {
        check_len(amplitudes.len(), &register)?;
        let norm = amplitudes.norm();
        if norm < 1e-300 {
            return Err(Error::NotNormalized(1.0));
        }
        Ok(Self { amplitudes: amplitudes / C64::new(norm, 0.0), register })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(register: Register, index: usize) -> Result<Self> {
        let dim = register.total_dim();
        if index >= dim {
            return Err(Error::DimensionMismatch { expected: dim, found: index });
        }
        Ok(Self { amplitudes: super::gates::ket(dim, index), register })
    }

    pub(crate) fn from_raw(amplitudes: CVector, register: Register) -> Self {
        Self { amplitudes, register }
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn register(&self) -> &Register {
        &self.register
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn projector(&self) -> CMatrix {
        &self.amplitudes * self.amplitudes.adjoint()
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_raw(self.projector(), self.register.clone())
    }
}

/// Mixed state on a register.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    register: Register,
}

impl DensityMatrix {
    /// Validates hermiticity, positivity and unit trace to `1e-10`.
    pub fn new(matrix: CMatrix, register: Register) -> Result<Self> {
        let rho = Self::from_raw(matrix, register);
        rho.check()?;
        Ok(rho)
    }

    pub(crate) fn from_raw(matrix: CMatrix, register: Register) -> Self {
        debug_assert_eq!(matrix.nrows(), register.total_dim());
        Self { matrix, register }
    }

    pub fn maximally_mixed(register: Register) -> Self {
        let d = register.total_dim();
        Self::from_raw(CMatrix::identity(d, d).scale(1.0 / d as f64), register)
    }

    /// Convex combination of states on one register.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidProbabilities("empty mixture".into()))?;
        let register = first.1.register.clone();
        let d = register.total_dim();
        let mut m = CMatrix::zeros(d, d);
        for (p, rho) in parts {
            if rho.register != register {
                return Err(Error::RegisterMismatch(format!(
                    "{} vs {}",
                    rho.register, register
                )));
            }
            m += rho.matrix.scale(*p);
        }
        Self::new(m, register)
    }

    pub fn check(&self) -> Result<()> {
        check_len(self.matrix.nrows(), &self.register)?;
        if !self.matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.matrix.nrows(),
                found: self.matrix.ncols(),
            });
        }
        let herm = (&self.matrix - self.matrix.adjoint()).norm();
        if herm > TOL_ALGEBRA {
            return Err(Error::NotHermitian(herm));
        }
        let tr_dev = (self.trace() - 1.0).abs();
        if tr_dev > TOL_ALGEBRA {
            return Err(Error::NotNormalized(tr_dev));
        }
        let min = hermitian_eigenvalues(&self.matrix)[0];
        if min < -TOL_ALGEBRA {
            return Err(Error::NotPositive(min));
        }
        Ok(())
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn register(&self) -> &Register {
        &self.register
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.matrix).re
    }

    /// `Tr(O ρ)`, real part.
    pub fn expectation(&self, observable: &CMatrix) -> f64 {
        linalg::trace(&(observable * &self.matrix)).re
    }

    /// `⟨ψ|ρ|ψ⟩`. The register of `psi` must match up to factor order being
    /// identical; no reordering is attempted.
    pub fn fidelity_pure(&self, psi: &StateVector) -> f64 {
        debug_assert_eq!(psi.register().total_dim(), self.dim());
        psi.amplitudes()
            .dotc(&(&self.matrix * psi.amplitudes()))
            .re
    }

    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        linalg::trace_distance(&self.matrix, &other.matrix)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn into_parts(self) -> (CMatrix, Register) {
        (self.matrix, self.register)
    }
}

/// Unitary acting on a subset of register labels.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOp {
    matrix: CMatrix,
    register: Register,
}

impl UnitaryOp {
    pub fn new(matrix: CMatrix, register: Register) -> Result<Self> {
        check_len(matrix.nrows(), &register)?;
        let res = unitarity_residual(&matrix);
        if res > TOL_ALGEBRA {
            return Err(Error::NotUnitary(res));
        }
        Ok(Self { matrix, register })
    }

    /// Single-qubit unitary on `label`.
    pub fn on(label: &str, matrix: CMatrix) -> Result<Self> {
        Self::new(matrix, Register::qubits(&[label])?)
    }

    pub fn identity(register: Register) -> Self {
        let d = register.total_dim();
        Self { matrix: CMatrix::identity(d, d), register }
    }

    pub(crate) fn from_raw(matrix: CMatrix, register: Register) -> Self {
        Self { matrix, register }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Labels (and dimensions) the operator acts on.
    pub fn register(&self) -> &Register {
        &self.register
    }

    pub fn adjoint(&self) -> UnitaryOp {
        Self { matrix: self.matrix.adjoint(), register: self.register.clone() }
    }
}

/// Probability-weighted family of states on one shared register.
#[derive(Debug, Clone)]
pub struct Ensemble {
    entries: Vec<(f64, DensityMatrix)>,
}

impl Ensemble {
    pub fn new(entries: Vec<(f64, DensityMatrix)>) -> Result<Self> {
        let Some((_, first)) = entries.first() else {
            return Err(Error::InvalidProbabilities("empty ensemble".into()));
        };
        let register = first.register().clone();
        let mut total = 0.0;
        for (p, rho) in &entries {
            if !(0.0..=1.0 + TOL_ALGEBRA).contains(p) {
                return Err(Error::InvalidProbabilities(format!("weight {p} outside [0, 1]")));
            }
            if *rho.register() != register {
                return Err(Error::RegisterMismatch(format!(
                    "ensemble member on {} differs from {}",
                    rho.register(),
                    register
                )));
            }
            total += p;
        }
        if (total - 1.0).abs() > TOL_ALGEBRA {
            return Err(Error::InvalidProbabilities(format!("weights sum to {total}")));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(f64, DensityMatrix)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn register(&self) -> &Register {
        self.entries[0].1.register()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.entries.iter().map(|(p, _)| *p).collect()
    }

    /// `Σᵢ pᵢ ρᵢ`.
    pub fn average(&self) -> DensityMatrix {
        let d = self.register().total_dim();
        let mut m = CMatrix::zeros(d, d);
        for (p, rho) in &self.entries {
            m += rho.matrix().scale(*p);
        }
        DensityMatrix::from_raw(m, self.register().clone())
    }
}

fn check_len(len: usize, register: &Register) -> Result<()> {
    let expected = register.total_dim();
    if len != expected {
        return Err(Error::DimensionMismatch { expected, found: len });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::gates;

    #[test]
    fn rejects_unnormalized_and_nonpositive() {
        let reg = Register::qubits(&["A"]).unwrap();
        let v = CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]);
        assert!(matches!(
            StateVector::new(v.clone(), reg.clone()),
            Err(Error::NotNormalized(_))
        ));
        assert!(StateVector::normalized(v, reg.clone()).is_ok());

        let bad = CMatrix::from_diagonal(&CVector::from_vec(vec![
            C64::new(1.5, 0.0),
            C64::new(-0.5, 0.0),
        ]));
        assert!(matches!(DensityMatrix::new(bad, reg), Err(Error::NotPositive(_))));
    }

    #[test]
    fn unitary_check() {
        let reg = Register::qubits(&["A"]).unwrap();
        assert!(UnitaryOp::new(gates::hadamard(), reg.clone()).is_ok());
        let not_unitary = gates::pauli_x() + gates::pauli_z();
        assert!(matches!(UnitaryOp::new(not_unitary, reg), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn ensemble_requires_unit_weight() {
        let reg = Register::qubits(&["A"]).unwrap();
        let rho = DensityMatrix::maximally_mixed(reg);
        assert!(Ensemble::new(vec![(0.5, rho.clone()), (0.4, rho.clone())]).is_err());
        let ens = Ensemble::new(vec![(0.5, rho.clone()), (0.5, rho)]).unwrap();
        assert!((ens.average().trace() - 1.0).abs() < 1e-15);
    }
}
