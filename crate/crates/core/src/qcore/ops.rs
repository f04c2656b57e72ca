use super::linalg::{
    apply_local_vector, conjugate_local, hermitian_eigen, kron, kron_vec, permute_matrix,
    permute_vector, unitarity_residual,
};
use super::{DensityMatrix, Register, StateVector, UnitaryOp};
use crate::{CMatrix, CVector, Error, Result, C64};

/// Kronecker product with concatenated registers.
pub trait Tensor: Sized {
    fn tensor(&self, other: &Self) -> Result<Self>;
}

impl Tensor for StateVector {
    fn tensor(&self, other: &Self) -> Result<Self> {
        let register = self.register().concat(other.register())?;
        Ok(StateVector::from_raw(
            kron_vec(self.amplitudes(), other.amplitudes()),
            register,
        ))
    }
}

impl Tensor for DensityMatrix {
    fn tensor(&self, other: &Self) -> Result<Self> {
        let register = self.register().concat(other.register())?;
        Ok(DensityMatrix::from_raw(
            kron(self.matrix(), other.matrix()),
            register,
        ))
    }
}

impl Tensor for UnitaryOp {
    fn tensor(&self, other: &Self) -> Result<Self> {
        let register = self.register().concat(other.register())?;
        Ok(UnitaryOp::from_raw(kron(self.matrix(), other.matrix()), register))
    }
}

/// States that a [`UnitaryOp`] can act on.
pub trait Evolve: Sized {
    fn evolve(&self, op: &UnitaryOp) -> Result<Self>;
}

impl Evolve for StateVector {
    fn evolve(&self, op: &UnitaryOp) -> Result<Self> {
        let (moved, order) = move_slice_last_vec(self.amplitudes(), self.register(), op.register())?;
        let outer = moved.len() / op.register().total_dim();
        let out = apply_local_vector(&moved, outer, op.matrix());
        let perm = self.register().permutation_to(&order)?;
        Ok(StateVector::from_raw(
            unpermute_vector(&out, &perm),
            self.register().clone(),
        ))
    }
}

impl Evolve for DensityMatrix {
    fn evolve(&self, op: &UnitaryOp) -> Result<Self> {
        let (moved, order) = move_slice_last(self.matrix(), self.register(), op.register())?;
        let outer = moved.nrows() / op.register().total_dim();
        let out = conjugate_local(&moved, outer, op.matrix());
        Ok(DensityMatrix::from_raw(
            reorder_matrix(&out, &order, self.register())?,
            self.register().clone(),
        ))
    }
}

impl StateVector {
    /// Same state with its factors listed in `order`.
    pub fn reorder<S: AsRef<str>>(&self, order: &[S]) -> Result<StateVector> {
        let target = self.register().select(order)?;
        let v = reorder_vector(self.amplitudes(), self.register(), &target)?;
        Ok(StateVector::from_raw(v, target))
    }
}

/// Applies `op` (identity on every other factor) to `target`.
pub fn apply<T: Evolve>(op: &UnitaryOp, target: &T) -> Result<T> {
    target.evolve(op)
}

/// Reduced state on `keep`, with factors in the order listed.
pub fn partial_trace<S: AsRef<str>>(rho: &DensityMatrix, keep: &[S]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::InvalidPartition("nothing to keep".into()));
    }
    let (m, kept) = partial_trace_matrix(rho.matrix(), rho.register(), keep)?;
    Ok(DensityMatrix::from_raw(m, kept))
}

/// Partial trace on a bare matrix (no trace or positivity requirement).
pub fn partial_trace_matrix<S: AsRef<str>>(
    m: &CMatrix,
    register: &Register,
    keep: &[S],
) -> Result<(CMatrix, Register)> {
    let kept = register.select(keep)?;
    let traced = register.without(keep);
    let order = kept.concat(&traced)?;
    let moved = reorder_matrix(m, register, &order)?;
    let k = kept.total_dim();
    let t = traced.total_dim();
    let out = CMatrix::from_fn(k, k, |i, j| {
        (0..t).map(|s| moved[(i * t + s, j * t + s)]).sum::<C64>()
    });
    Ok((out, kept))
}

/// Same state with its factors listed in `order`.
pub fn reorder<S: AsRef<str>>(rho: &DensityMatrix, order: &[S]) -> Result<DensityMatrix> {
    let target = rho.register().select(order)?;
    let m = reorder_matrix(rho.matrix(), rho.register(), &target)?;
    Ok(DensityMatrix::from_raw(m, target))
}

pub(crate) fn reorder_matrix(m: &CMatrix, from: &Register, to: &Register) -> Result<CMatrix> {
    if from == to {
        return Ok(m.clone());
    }
    let perm = from.permutation_to(to)?;
    Ok(permute_matrix(m, &perm))
}

pub(crate) fn reorder_vector(v: &CVector, from: &Register, to: &Register) -> Result<CVector> {
    if from == to {
        return Ok(v.clone());
    }
    let perm = from.permutation_to(to)?;
    Ok(permute_vector(v, &perm))
}

fn unpermute_vector(v: &CVector, perm: &[usize]) -> CVector {
    let mut out = CVector::zeros(v.len());
    for (i, &p) in perm.iter().enumerate() {
        out[p] = v[i];
    }
    out
}

/// Reorders so that the factors of `slice` come last, in slice order.
pub(crate) fn move_slice_last(
    m: &CMatrix,
    register: &Register,
    slice: &Register,
) -> Result<(CMatrix, Register)> {
    let order = slice_last_order(register, slice)?;
    Ok((reorder_matrix(m, register, &order)?, order))
}

fn move_slice_last_vec(
    v: &CVector,
    register: &Register,
    slice: &Register,
) -> Result<(CVector, Register)> {
    let order = slice_last_order(register, slice)?;
    Ok((reorder_vector(v, register, &order)?, order))
}

fn slice_last_order(register: &Register, slice: &Register) -> Result<Register> {
    for (label, dim) in slice.factors() {
        match register.dim_of(label) {
            None => return Err(Error::UnknownLabel(label.clone())),
            Some(d) if d != *dim => {
                return Err(Error::DimensionMismatch { expected: d, found: *dim })
            }
            _ => {}
        }
    }
    let labels: Vec<&str> = slice.labels().collect();
    register.without(&labels).concat(slice)
}

/// Full-register matrix of `op` acting on `slice`, identity elsewhere.
pub fn embed(op: &CMatrix, slice: &Register, full: &Register) -> Result<CMatrix> {
    if op.nrows() != slice.total_dim() || op.ncols() != slice.total_dim() {
        return Err(Error::DimensionMismatch {
            expected: slice.total_dim(),
            found: op.nrows(),
        });
    }
    let order = slice_last_order(full, slice)?;
    let rest = order.total_dim() / slice.total_dim();
    let local = kron(&CMatrix::identity(rest, rest), op);
    reorder_matrix(&local, &order, full)
}

/// Purification on `register ⊗ env_label`, with the environment dimension
/// equal to the dimension of `rho`.
///
/// Eigenvectors are taken in order of decreasing eigenvalue, so a pure input
/// `|ψ⟩⟨ψ|` becomes `|ψ⟩ ⊗ |0⟩_E` up to a global phase.
pub fn purify(rho: &DensityMatrix, env_label: &str) -> Result<StateVector> {
    let d = rho.dim();
    let env = Register::new([(env_label, d)])?;
    let register = rho.register().concat(&env)?;
    let (values, vectors) = hermitian_eigen(rho.matrix());
    let mut amps = CVector::zeros(d * d);
    for (k, &lambda) in values.iter().enumerate() {
        let weight = lambda.max(0.0).sqrt();
        if weight == 0.0 {
            continue;
        }
        for i in 0..d {
            amps[i * d + k] += vectors[(i, k)] * weight;
        }
    }
    StateVector::normalized(amps, register)
}

/// For a two-qubit `|ψ⟩`, the matrix `M` with `|ψ⟩ = (M ⊗ I)|Ψ⁺⟩`.
///
/// `M` is `√2` times the amplitudes folded row-major into a 2×2 matrix. The
/// state is maximally entangled exactly when `M` is unitary (to `1e-9`).
pub fn max_entangled_factor(psi: &StateVector) -> Result<CMatrix> {
    if psi.register().dims() != [2, 2] {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: psi.register().total_dim(),
        });
    }
    let m = max_entangled_factor_raw(psi.amplitudes());
    let residual = unitarity_residual(&m);
    if residual > 1e-9 {
        return Err(Error::NotMaxEntangled { residual });
    }
    Ok(m)
}

pub(crate) fn max_entangled_factor_raw(amps: &CVector) -> CMatrix {
    let s = C64::new(std::f64::consts::SQRT_2, 0.0);
    CMatrix::from_fn(2, 2, |i, k| amps[2 * i + k] * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{gates, random_density, vn_entropy};

    fn psi_plus(a: &str, b: &str) -> StateVector {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        StateVector::new(
            CVector::from_vec(vec![
                C64::new(s, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(s, 0.0),
            ]),
            Register::qubits(&[a, b]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn tensor_of_basis_states() {
        let a = StateVector::basis(Register::qubits(&["A"]).unwrap(), 0).unwrap();
        let b = StateVector::basis(Register::qubits(&["B"]).unwrap(), 0).unwrap();
        let ab = a.tensor(&b).unwrap();
        assert_eq!(ab.amplitudes()[0], C64::new(1.0, 0.0));
        assert_eq!(ab.register().labels().collect::<Vec<_>>(), ["A", "B"]);
        assert!(matches!(a.tensor(&a), Err(Error::LabelCollision(_))));
    }

    #[test]
    fn tensor_of_mixed_states() {
        let a = DensityMatrix::maximally_mixed(Register::qubits(&["A"]).unwrap());
        let b = DensityMatrix::maximally_mixed(Register::qubits(&["B"]).unwrap());
        let ab = a.tensor(&b).unwrap();
        assert!((ab.matrix() - CMatrix::identity(4, 4).scale(0.25)).norm() < 1e-15);
    }

    #[test]
    fn canonical_input_is_sixteen_dim_unit_vector() {
        let input = psi_plus("A", "C1").tensor(&psi_plus("B", "C2")).unwrap();
        assert_eq!(input.amplitudes().len(), 16);
        assert!((input.amplitudes().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn partial_trace_examples() {
        let rho = psi_plus("A", "B").to_density();
        let a = partial_trace(&rho, &["A"]).unwrap();
        assert!((a.matrix() - CMatrix::identity(2, 2).scale(0.5)).norm() < 1e-15);
        assert!(matches!(partial_trace(&rho, &["Q"]), Err(Error::UnknownLabel(_))));

        let ra = random_density(&Register::qubits(&["A"]).unwrap(), 2, 3);
        let rb = random_density(&Register::qubits(&["B"]).unwrap(), 2, 4);
        let prod = ra.tensor(&rb).unwrap();
        let back = partial_trace(&prod, &["B"]).unwrap();
        assert!(back.trace_distance(&rb) < 1e-14);
    }

    #[test]
    fn partial_trace_respects_keep_order() {
        let reg = Register::qubits(&["A", "B", "C"]).unwrap();
        let rho = random_density(&reg, 8, 11);
        let cb = partial_trace(&rho, &["C", "B"]).unwrap();
        let bc = partial_trace(&rho, &["B", "C"]).unwrap();
        let bc_reordered = reorder(&cb, &["B", "C"]).unwrap();
        assert!(bc.trace_distance(&bc_reordered) < 1e-14);
    }

    #[test]
    fn apply_phase_flip_and_bit_flip() {
        let z = UnitaryOp::on("C1", gates::pauli_z()).unwrap();
        let out = apply(&z, &psi_plus("A", "C1")).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((out.amplitudes()[0] - C64::new(s, 0.0)).norm() < 1e-15);
        assert!((out.amplitudes()[3] - C64::new(-s, 0.0)).norm() < 1e-15);

        let x = UnitaryOp::on("C2", gates::pauli_x()).unwrap();
        let out = apply(&x, &psi_plus("A'", "C2")).unwrap();
        assert!((out.amplitudes()[1] - C64::new(s, 0.0)).norm() < 1e-15);
        assert!((out.amplitudes()[2] - C64::new(s, 0.0)).norm() < 1e-15);

        let y = UnitaryOp::on("Q", gates::pauli_x()).unwrap();
        assert!(matches!(apply(&y, &out), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn apply_matches_embedded_matrix() {
        let reg = Register::qubits(&["A", "B", "C"]).unwrap();
        let rho = random_density(&reg, 8, 5);
        let op = UnitaryOp::new(
            kron(&gates::hadamard(), &gates::pauli_y()),
            Register::qubits(&["C", "A"]).unwrap(),
        )
        .unwrap();
        let full = embed(op.matrix(), op.register(), &reg).unwrap();
        let expect = &full * rho.matrix() * full.adjoint();
        let got = apply(&op, &rho).unwrap();
        assert!((got.matrix() - expect).norm() < 1e-13);
    }

    #[test]
    fn purify_pure_and_maximally_mixed() {
        let psi = psi_plus("A", "B");
        let phi = purify(&psi.to_density(), "E").unwrap();
        let expect = psi.tensor(&StateVector::basis(Register::new([("E", 4)]).unwrap(), 0).unwrap()).unwrap();
        assert!((phi.fidelity(&expect) - 1.0).abs() < 1e-12);

        let mixed = DensityMatrix::maximally_mixed(Register::qubits(&["A"]).unwrap());
        let phi = purify(&mixed, "E").unwrap();
        assert_eq!(phi.register().total_dim(), 4);
        let a = partial_trace(&phi.to_density(), &["A"]).unwrap();
        assert!((vn_entropy(&a) - 1.0).abs() < 1e-12);
        assert!(max_entangled_factor(&phi).is_ok());
    }

    #[test]
    fn max_entangled_factor_examples() {
        let m = max_entangled_factor(&psi_plus("A", "B")).unwrap();
        assert!((m - gates::identity(2)).norm() < 1e-14);

        let z = UnitaryOp::on("A", gates::pauli_z()).unwrap();
        let m = max_entangled_factor(&apply(&z, &psi_plus("A", "B")).unwrap()).unwrap();
        assert!((m - gates::pauli_z()).norm() < 1e-14);

        let prod = StateVector::basis(Register::qubits(&["A", "B"]).unwrap(), 0).unwrap();
        assert!(matches!(
            max_entangled_factor(&prod),
            Err(Error::NotMaxEntangled { .. })
        ));
    }
}
