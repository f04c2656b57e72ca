use super::{ALICE, BOB, C1, C2, CHARLIE};
use crate::qcore::{gates, Register, StateVector, Tensor};
use crate::{CMatrix, CVector, C64};

/// `(I ⊗ σ)|Ψ⁺⟩` on `[a, b]` for `σ = {I, Z, X, XZ}[which]`.
pub fn bell_state_on(which: usize, a: &str, b: &str) -> StateVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let phi = CVector::from_vec(vec![
        C64::new(s, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(s, 0.0),
    ]);
    let rot = crate::qcore::kron(&gates::identity(2), &gates::bell_pauli(which));
    let register = Register::qubits(&[a, b]).expect("distinct labels");
    StateVector::from_raw(rot * phi, register)
}

/// Bell state on `[A, B]`; `bell_state(0)` is `|Ψ⁺⟩ = (|00⟩ + |11⟩)/√2`.
pub fn bell_state(which: usize) -> StateVector {
    bell_state_on(which, ALICE, BOB)
}

/// `|Ψ⁺⟩⟨Ψ⁺|` as a 4×4 matrix.
pub fn psi_plus_projector() -> CMatrix {
    bell_state(0).projector()
}

/// `(|000⟩ + |111⟩)/√2` on `[A, B, C]`.
pub fn ghz_state() -> StateVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = CVector::zeros(8);
    v[0] = C64::new(s, 0.0);
    v[7] = C64::new(s, 0.0);
    StateVector::from_raw(v, Register::qubits(&[ALICE, BOB, CHARLIE]).unwrap())
}

/// `|Ψ⁺⟩_{A C1} |Ψ⁺⟩_{B C2}`, laid out on `[A, B, C1, C2]`.
pub fn canonical_input() -> StateVector {
    let product = bell_state_on(0, ALICE, C1)
        .tensor(&bell_state_on(0, BOB, C2))
        .unwrap();
    product.reorder(&[ALICE, BOB, C1, C2]).unwrap()
}
