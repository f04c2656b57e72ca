//! The two intermediate steps of entanglement swapping: two EPR pairs to a
//! GHZ state, and a GHZ state to one EPR pair.

use super::apply::{BranchAction, LoccBox};
use super::states::{canonical_input, ghz_state};
use super::{C1, C2, CHARLIE};
use crate::qcore::{gates, Register, StateVector};
use crate::{CMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubKind {
    /// `|Ψ⁺⟩_{A C1}|Ψ⁺⟩_{B C2}` to `GHZ_{A B C1}`.
    GhzFromTwoEpr,
    /// `GHZ_{A B C}` to `|Ψ⁺⟩_{AB}`.
    BellFromGhz,
}

/// Branch of a sub-primitive box. `kraus` maps Charlie's input qubits to
/// his output qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct SubBranch {
    pub kraus: CMatrix,
    pub u_a: CMatrix,
    pub u_b: CMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubPrimitiveBox {
    kind: SubKind,
    branches: Vec<SubBranch>,
}

impl SubPrimitiveBox {
    pub fn new(kind: SubKind, branches: Vec<SubBranch>) -> Self {
        Self { kind, branches }
    }

    pub fn kind(&self) -> SubKind {
        self.kind
    }

    pub fn branches(&self) -> &[SubBranch] {
        &self.branches
    }
}

impl LoccBox for SubPrimitiveBox {
    fn branch_actions(&self) -> Vec<BranchAction<'_>> {
        self.branches
            .iter()
            .map(|b| BranchAction { charlie: &b.kraus, u_a: &b.u_a, u_b: &b.u_b })
            .collect()
    }

    fn charlie_input(&self) -> Register {
        match self.kind {
            SubKind::GhzFromTwoEpr => Register::qubits(&[C1, C2]).unwrap(),
            SubKind::BellFromGhz => Register::qubits(&[CHARLIE]).unwrap(),
        }
    }

    fn charlie_output(&self) -> Register {
        match self.kind {
            SubKind::GhzFromTwoEpr => Register::qubits(&[C1]).unwrap(),
            SubKind::BellFromGhz => Register::empty(),
        }
    }

    fn discards_charlie(&self) -> bool {
        false
    }

    fn post_twirl(&self) -> bool {
        false
    }

    fn canonical_input(&self) -> StateVector {
        match self.kind {
            SubKind::GhzFromTwoEpr => canonical_input(),
            SubKind::BellFromGhz => ghz_state(),
        }
    }
}

/// CNOT from `C1` to `C2`, measurement of `C2` in the computational basis,
/// and `X` at Bob on outcome 1. One broadcast bit.
pub fn ghz_box() -> SubPrimitiveBox {
    let branches = (0..2)
        .map(|m| {
            // (I_{C1} ⊗ ⟨m|_{C2}) · CNOT_{C1→C2}
            let project = gates::identity(2).kronecker(&gates::ket(2, m).adjoint());
            SubBranch {
                kraus: project * gates::cnot(),
                u_a: gates::identity(2),
                u_b: if m == 0 { gates::identity(2) } else { gates::pauli_x() },
            }
        })
        .collect();
    SubPrimitiveBox::new(SubKind::GhzFromTwoEpr, branches)
}

/// Measurement of Charlie's GHZ qubit in the `|±⟩` basis and `Z` at Alice
/// on outcome `−`. One broadcast bit.
pub fn bell_from_ghz_box() -> SubPrimitiveBox {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let branches = [1.0, -1.0]
        .iter()
        .map(|&sign| SubBranch {
            kraus: CMatrix::from_row_slice(1, 2, &[C64::new(s, 0.0), C64::new(sign * s, 0.0)]),
            u_a: if sign > 0.0 { gates::identity(2) } else { gates::pauli_z() },
            u_b: gates::identity(2),
        })
        .collect();
    SubPrimitiveBox::new(SubKind::BellFromGhz, branches)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::{apply_box, bell_state, ALICE, BOB};
    use crate::qcore::{partial_trace, DensityMatrix};

    #[test]
    fn ghz_box_produces_ghz_on_a_b_c1() {
        let bx = ghz_box();
        assert!(bx.completeness_residual() < 1e-15);
        let out = apply_box(&bx, &canonical_input().to_density()).unwrap();
        assert_eq!(out.output.register().labels().collect::<Vec<_>>(), [ALICE, BOB, C1]);
        let ghz = ghz_state();
        assert!((out.output.fidelity_pure(&ghz) - 1.0).abs() < 1e-10);
        assert_eq!(out.transcript.broadcast_bits, 1);
        assert!((out.transcript.outcome_entropy_bits - 1.0).abs() < 1e-12);
        let ab = partial_trace(&out.output, &[ALICE, BOB]).unwrap();
        assert!((ab.matrix()[(0, 0)].re - 0.5).abs() < 1e-12);
        assert!((ab.matrix()[(3, 3)].re - 0.5).abs() < 1e-12);
        assert!((ab.matrix()[(0, 3)]).norm() < 1e-12);
    }

    #[test]
    fn ghz_box_keeps_maximally_mixed_marginal() {
        let reg = Register::qubits(&[ALICE, BOB, C1, C2]).unwrap();
        let out = apply_box(&ghz_box(), &DensityMatrix::maximally_mixed(reg)).unwrap();
        let ab = partial_trace(&out.output, &[ALICE, BOB]).unwrap();
        assert!((ab.matrix() - CMatrix::identity(4, 4).scale(0.25)).norm() < 1e-14);
    }

    #[test]
    fn bell_from_ghz_in_both_branches() {
        let bx = bell_from_ghz_box();
        let out = apply_box(&bx, &ghz_state().to_density()).unwrap();
        assert!((out.output.fidelity_pure(&bell_state(0)) - 1.0).abs() < 1e-12);
        for b in &out.branches {
            assert!((b.probability - 0.5).abs() < 1e-12);
            let f = bell_state(0).amplitudes().dotc(&(&b.after_correction * bell_state(0).amplitudes())).re;
            assert!((f / b.probability - 1.0).abs() < 1e-12);
        }
        assert!((out.transcript.outcome_entropy_bits - 1.0).abs() < 1e-12);
    }
}
