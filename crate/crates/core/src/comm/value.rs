use crate::boxes::{
    apply_box, bell_from_ghz_box, bell_state, bell_state_on, canonical_input, ghz_box, ghz_state,
    psi_plus_projector, CharlieOp, ESBox, SubKind, SubPrimitiveBox, ALICE, BOB, C1, C2, CHARLIE,
};
use crate::qcore::{
    classical_mutual_information, gates, holevo, partial_trace, random_pure_state_with,
    seeded_rng, DensityMatrix, Register, StateVector, Tensor, UnitaryOp,
};
use crate::{CMatrix, Error, Result};

/// Alice's ancilla in the dense-coding protocol.
pub const ANCILLA: &str = "A'";

/// Outcome of a signaling protocol with a fixed decoding measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalingProtocol {
    /// Holevo quantity of the received states (uniform prior).
    pub holevo: f64,
    /// Mutual information achieved by the fixed measurement.
    pub accessible: f64,
    /// `⟨Ψ⁺|ρ¹|Ψ⁺⟩`: weight of the second signal on the first one's support.
    pub orthogonality_residual: f64,
    /// `confusion[x][y] = P(y | x)`.
    pub confusion: Vec<Vec<f64>>,
}

/// Mutual information of the classical channel induced by measuring the
/// POVM `effects` on `states`, uniform prior. Returns the information and
/// the confusion matrix.
pub fn accessible_information(states: &[&DensityMatrix], effects: &[CMatrix]) -> (f64, Vec<Vec<f64>>) {
    let confusion: Vec<Vec<f64>> = states
        .iter()
        .map(|rho| effects.iter().map(|e| rho.expectation(e).max(0.0)).collect())
        .collect();
    let prior = vec![1.0 / states.len() as f64; states.len()];
    (classical_mutual_information(&prior, &confusion), confusion)
}

fn singlet_test() -> Vec<CMatrix> {
    let p = psi_plus_projector();
    vec![p.clone(), CMatrix::identity(4, 4) - p]
}

/// Charlie encodes one bit as `I` or `Z_{C1}` on the canonical input; Alice
/// and Bob jointly test for `|Ψ⁺⟩`. Works for every ES-box.
pub fn theorem3_protocol(bx: &ESBox) -> Result<SignalingProtocol> {
    let input = canonical_input().to_density();
    let z = CharlieOp::Unitary(UnitaryOp::on(C1, gates::pauli_z())?);
    let rho0 = apply_box(bx, &input)?.output;
    let rho1 = apply_box(bx, &z.apply(&input)?)?.output;
    let (accessible, confusion) = accessible_information(&[&rho0, &rho1], &singlet_test());
    Ok(SignalingProtocol {
        holevo: holevo(&[(0.5, &rho0), (0.5, &rho1)])?,
        accessible,
        orthogonality_residual: rho1.fidelity_pure(&bell_state(0)).max(0.0),
        confusion,
    })
}

/// Largest `1 − F` between the ideal teleportation output `|φ⟩_A|ψ⟩_B` and
/// the box output on `|Ψ⁺⟩_{A C1}|ψ⟩_B|φ⟩_{C2}`, over `trials` random
/// `φ, ψ`. The twirl flag is ignored: the contract concerns the branches.
pub fn teleportation_contract_gap(bx: &ESBox, trials: usize, seed: u64) -> Result<f64> {
    let inner = bx.with_twirl(false);
    let mut rng = seeded_rng(seed);
    let reg_a = Register::qubits(&[ALICE])?;
    let reg_b = Register::qubits(&[BOB])?;
    let reg_c2 = Register::qubits(&[C2])?;
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let phi = random_pure_state_with(&mut rng, &reg_c2);
        let psi = random_pure_state_with(&mut rng, &reg_b);
        let input = bell_state_on(0, ALICE, C1).tensor(&psi)?.tensor(&phi)?;
        let out = apply_box(&inner, &input.to_density())?.output;
        let phi_a = StateVector::new(phi.amplitudes().clone(), reg_a.clone())?;
        let expect = phi_a.tensor(&psi)?;
        worst = worst.max(1.0 - out.fidelity_pure(&expect));
    }
    Ok(worst)
}

/// Dense coding through the box: result of [`dense_coding_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct DenseCoding {
    pub bits: f64,
    pub encodings: Vec<usize>,
    pub confusion: Vec<Vec<f64>>,
}

/// Dense coding with all four Pauli encodings `{I, Z, X, XZ}`.
pub fn dense_coding_cv(bx: &ESBox) -> Result<DenseCoding> {
    dense_coding_with(bx, &[0, 1, 2, 3])
}

/// Charlie applies `σ_k` (`k` indexing `{I, Z, X, XZ}`) to `C2`, which is
/// maximally entangled with Alice's ancilla `A'`. The box teleports `C2`
/// onto `A` and Alice Bell-measures `A' A`. Only boxes whose branches
/// implement teleportation from `C2` to `A` qualify.
pub fn dense_coding_with(bx: &ESBox, encodings: &[usize]) -> Result<DenseCoding> {
    if encodings.iter().any(|&k| k > 3) || encodings.is_empty() {
        return Err(Error::InvalidPartition("encodings must index {I, Z, X, XZ}".into()));
    }
    let gap = teleportation_contract_gap(bx, 16, 0x7e1e)?;
    if gap > 1e-9 {
        return Err(Error::ProtocolInapplicable(format!(
            "box does not teleport C2 to A (fidelity gap {gap:e})"
        )));
    }
    let bob = StateVector::basis(Register::qubits(&[BOB])?, 0)?;
    let input = bell_state_on(0, ALICE, C1)
        .tensor(&bob)?
        .tensor(&bell_state_on(0, ANCILLA, C2))?
        .reorder(&[ALICE, BOB, C1, C2, ANCILLA])?
        .to_density();
    let mut received = Vec::with_capacity(encodings.len());
    for &k in encodings {
        let encode = UnitaryOp::on(C2, gates::bell_pauli(k))?;
        let out = apply_box(bx, &CharlieOp::Unitary(encode).apply(&input)?)?.output;
        received.push(partial_trace(&out, &[ANCILLA, ALICE])?);
    }
    let effects: Vec<CMatrix> = (0..4).map(|j| bell_state_on(j, ANCILLA, ALICE).projector()).collect();
    let refs: Vec<&DensityMatrix> = received.iter().collect();
    let (bits, confusion) = accessible_information(&refs, &effects);
    Ok(DenseCoding { bits, encodings: encodings.to_vec(), confusion })
}

/// The GHZ box's AB output on the canonical input versus on the input after
/// Charlie randomizes everything to `I/16`.
#[derive(Debug, Clone, PartialEq)]
pub struct GhzSignal {
    pub holevo: f64,
    pub rho0: DensityMatrix,
    pub rho1: DensityMatrix,
}

pub fn ghz_randomization_signal() -> Result<GhzSignal> {
    ghz_randomization_signal_with(&ghz_box())
}

/// [`ghz_randomization_signal`] for any box of the GHZ-from-two-EPR kind.
pub fn ghz_randomization_signal_with(bx: &SubPrimitiveBox) -> Result<GhzSignal> {
    require_kind(bx, SubKind::GhzFromTwoEpr)?;
    let reg = Register::qubits(&[ALICE, BOB, C1, C2])?;
    let out0 = apply_box(bx, &canonical_input().to_density())?.output;
    let out1 = apply_box(bx, &DensityMatrix::maximally_mixed(reg))?.output;
    let rho0 = partial_trace(&out0, &[ALICE, BOB])?;
    let rho1 = partial_trace(&out1, &[ALICE, BOB])?;
    Ok(GhzSignal { holevo: holevo(&[(0.5, &rho0), (0.5, &rho1)])?, rho0, rho1 })
}

/// Charlie encodes a bit as `I` or `Z` on his GHZ qubit before the
/// Bell-from-GHZ box; Alice and Bob test for `|Ψ⁺⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct BellFromGhzCv {
    pub bits: f64,
    /// `⟨Ψ⁺|ρ|Ψ⁺⟩` of each normalized branch output, per encoding.
    pub branch_fidelities: Vec<Vec<f64>>,
}

pub fn bell_from_ghz_cv() -> Result<BellFromGhzCv> {
    bell_from_ghz_cv_with(&bell_from_ghz_box())
}

/// [`bell_from_ghz_cv`] for any box of the Bell-from-GHZ kind.
pub fn bell_from_ghz_cv_with(bx: &SubPrimitiveBox) -> Result<BellFromGhzCv> {
    require_kind(bx, SubKind::BellFromGhz)?;
    let input = ghz_state().to_density();
    let encodings = [
        CharlieOp::Identity,
        CharlieOp::Unitary(UnitaryOp::on(CHARLIE, gates::pauli_z())?),
    ];
    let psi = bell_state(0);
    let mut outputs = Vec::new();
    let mut branch_fidelities = Vec::new();
    for enc in &encodings {
        let out = apply_box(bx, &enc.apply(&input)?)?;
        branch_fidelities.push(
            out.branches
                .iter()
                .map(|b| {
                    psi.amplitudes()
                        .dotc(&(&b.after_correction * psi.amplitudes()))
                        .re
                        / b.probability
                })
                .collect(),
        );
        outputs.push(out.output);
    }
    let refs: Vec<&DensityMatrix> = outputs.iter().collect();
    let (bits, _) = accessible_information(&refs, &singlet_test());
    Ok(BellFromGhzCv { bits, branch_fidelities })
}

fn require_kind(bx: &SubPrimitiveBox, kind: SubKind) -> Result<()> {
    if bx.kind() == kind {
        Ok(())
    } else {
        Err(Error::ProtocolInapplicable(format!("expected a {kind:?} box, found {:?}", bx.kind())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::{random_es_box, teleportation_box};

    #[test]
    fn teleportation_signals_two_orthogonal_pure_states() {
        let t = theorem3_protocol(&teleportation_box()).unwrap();
        assert!((t.accessible - 1.0).abs() < 1e-12);
        assert!((t.holevo - 1.0).abs() < 1e-9);
        assert!(t.orthogonality_residual < 1e-12);
    }

    #[test]
    fn twirled_teleportation_signals_one_bit() {
        let t = theorem3_protocol(&teleportation_box().with_twirl(true)).unwrap();
        assert!((t.accessible - 1.0).abs() < 1e-12);
        // eigenvalues {1/2, 1/6, 1/6, 1/6} of the average, minus ½ log₂ 3
        let oracle = (1.0 + 0.5 * 3f64.log2()) - 0.5 * 3f64.log2();
        assert!((t.holevo - oracle).abs() < 1e-9);
    }

    #[test]
    fn dense_coding_through_teleportation() {
        let dc = dense_coding_cv(&teleportation_box()).unwrap();
        assert!((dc.bits - 2.0).abs() < 1e-12);
        for (x, row) in dc.confusion.iter().enumerate() {
            for (y, p) in row.iter().enumerate() {
                assert!((p - if x == y { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
        let two = dense_coding_with(&teleportation_box(), &[0, 1]).unwrap();
        assert!((two.bits - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dense_coding_through_twirled_box_is_degraded() {
        let dc = dense_coding_cv(&teleportation_box().with_twirl(true)).unwrap();
        assert!(dc.bits < 2.0 - 1e-3, "{}", dc.bits);
    }

    #[test]
    fn dense_coding_needs_teleportation() {
        let err = dense_coding_cv(&random_es_box(4, 1).unwrap()).unwrap_err();
        assert!(matches!(err, Error::ProtocolInapplicable(_)));
    }

    #[test]
    fn ghz_randomization_holevo() {
        let sig = ghz_randomization_signal().unwrap();
        let quarter = CMatrix::identity(4, 4).scale(0.25);
        assert!((sig.rho1.matrix() - quarter).norm() < 1e-12);
        // S({3/8, 3/8, 1/8, 1/8}) − ½·1 − ½·2
        let oracle = -0.75 * 0.375f64.log2() - 0.25 * 0.125f64.log2() - 1.5;
        assert!((sig.holevo - oracle).abs() < 1e-12);
        assert!((sig.holevo - 0.311278).abs() < 1e-6);
    }

    #[test]
    fn bell_from_ghz_signals_one_bit() {
        let cv = bell_from_ghz_cv().unwrap();
        assert!((cv.bits - 1.0).abs() < 1e-12);
        assert!(cv.branch_fidelities[0].iter().all(|f| (f - 1.0).abs() < 1e-12));
        assert!(cv.branch_fidelities[1].iter().all(|f| f.abs() < 1e-12));
    }
}
