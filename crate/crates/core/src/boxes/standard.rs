use super::apply::{BranchAction, LoccBox};
use super::states::{bell_state_on, canonical_input};
use super::validate::validate_es_box;
use super::{C1, C2};
use crate::qcore::ops::max_entangled_factor_raw;
use crate::qcore::{fix_global_phase, gates, haar_unitary_with, kron, seeded_rng, Register, StateVector};
use crate::{CMatrix, CVector, Error, Result, C64};

/// One outcome of an ES-box: Charlie's operator `e_c = |u⟩⟨ψ₊|` on `C1 C2`
/// and the corrections applied by Alice and Bob.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub e_c: CMatrix,
    pub u_a: CMatrix,
    pub u_b: CMatrix,
}

impl Branch {
    /// Branch measuring `|ψ⟩` (maximally entangled on `C1 C2`) with
    /// post-measurement vector `u`, and corrections that restore `|Ψ⁺⟩_{AB}`.
    ///
    /// `bob` is Bob's share of the correction; Alice's share is derived so
    /// that the canonical action holds. Corrections are phase-fixed.
    pub fn swapping(u: &CVector, psi: &CVector, bob: &CMatrix) -> Result<Branch> {
        // After ⟨ψ| on C1C2 the AB state is ½|ψ*⟩ = ½(M* ⊗ I)|Ψ⁺⟩.
        let m = max_entangled_factor_raw(psi);
        let residual = crate::qcore::unitarity_residual(&m);
        if residual > 1e-9 {
            return Err(Error::NotMaxEntangled { residual });
        }
        // (U_A ⊗ V)(M* ⊗ I)|Ψ⁺⟩ = (U_A M* Vᵀ ⊗ I)|Ψ⁺⟩, so U_A = V̄ Mᵀ.
        let u_a = bob.conjugate() * m.transpose();
        Ok(Branch {
            e_c: u * psi.adjoint(),
            u_a: fix_global_phase(&u_a),
            u_b: fix_global_phase(bob),
        })
    }
}

/// Box in standard form, optionally followed by the `U ⊗ U*` twirl on AB.
#[derive(Debug, Clone, PartialEq)]
pub struct ESBox {
    branches: Vec<Branch>,
    post_twirl: bool,
}

impl ESBox {
    /// Checks shapes only; use [`validate_es_box`] for the structural checks.
    pub fn new(branches: Vec<Branch>, post_twirl: bool) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::InvalidBox("a box needs at least one branch".into()));
        }
        for (i, b) in branches.iter().enumerate() {
            for (name, m, d) in [("e_c", &b.e_c, 4), ("u_a", &b.u_a, 2), ("u_b", &b.u_b, 2)] {
                if m.shape() != (d, d) {
                    return Err(Error::InvalidBox(format!(
                        "branch {i}: {name} has shape {:?}, expected ({d}, {d})",
                        m.shape()
                    )));
                }
            }
        }
        Ok(Self { branches, post_twirl })
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn is_twirled(&self) -> bool {
        self.post_twirl
    }

    /// The same branches with the twirl flag replaced.
    pub fn with_twirl(&self, post_twirl: bool) -> ESBox {
        ESBox { branches: self.branches.clone(), post_twirl }
    }
}

impl LoccBox for ESBox {
    fn branch_actions(&self) -> Vec<BranchAction<'_>> {
        self.branches
            .iter()
            .map(|b| BranchAction { charlie: &b.e_c, u_a: &b.u_a, u_b: &b.u_b })
            .collect()
    }

    fn charlie_input(&self) -> Register {
        Register::qubits(&[C1, C2]).unwrap()
    }

    fn charlie_output(&self) -> Register {
        self.charlie_input()
    }

    fn discards_charlie(&self) -> bool {
        true
    }

    fn post_twirl(&self) -> bool {
        self.post_twirl
    }

    fn canonical_input(&self) -> StateVector {
        canonical_input()
    }
}

/// Bell measurement on `C1 C2` followed by a Pauli correction at Alice:
/// teleportation of `C2` onto `A` through the pair `A C1`.
pub fn teleportation_box() -> ESBox {
    let branches = (0..4)
        .map(|i| {
            let psi = bell_state_on(i, C1, C2);
            Branch::swapping(&gates::ket(4, i), psi.amplitudes(), &gates::identity(2))
                .expect("Bell states are maximally entangled")
        })
        .collect();
    ESBox::new(branches, false).unwrap()
}

/// The box followed by the twirl. Rejects boxes that fail validation.
pub fn twirled_box(inner: &ESBox) -> Result<ESBox> {
    let report = validate_es_box(inner);
    if !report.all_passed() {
        return Err(Error::InvalidBox(format!(
            "inner box fails {}",
            report.failures().join(", ")
        )));
    }
    Ok(inner.with_twirl(true))
}

/// Random box from the standard-form family.
///
/// With 4 outcomes Charlie measures a Bell basis rotated by Haar-random
/// local unitaries `W₁ ⊗ W₂`; with 8 outcomes he picks one of two such
/// bases with probability ½ each. Bob's correction is Haar-random per
/// branch and Alice's is derived from it, so these boxes are generally not
/// teleportation protocols.
pub fn random_es_box(n_outcomes: usize, seed: u64) -> Result<ESBox> {
    let n_bases = match n_outcomes {
        4 => 1,
        8 => 2,
        n => {
            return Err(Error::InvalidBox(format!(
                "random boxes have 4 or 8 outcomes, not {n}"
            )))
        }
    };
    let mut rng = seeded_rng(seed);
    let weight = C64::new((1.0 / n_bases as f64).sqrt(), 0.0);
    let mut branches = Vec::with_capacity(n_outcomes);
    for _ in 0..n_bases {
        let w = kron(&haar_unitary_with(&mut rng, 2), &haar_unitary_with(&mut rng, 2));
        for i in 0..4 {
            let psi = &w * bell_state_on(i, C1, C2).amplitudes();
            let bob = haar_unitary_with(&mut rng, 2);
            let u = gates::ket(4, i) * weight;
            branches.push(Branch::swapping(&u, &psi, &bob)?);
        }
    }
    ESBox::new(branches, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::{apply_box, bell_state};
    use crate::qcore::{random_pure_state_with, Tensor};

    #[test]
    fn teleportation_box_swaps_entanglement() {
        let out = apply_box(&teleportation_box(), &canonical_input().to_density()).unwrap();
        assert!((out.output.fidelity_pure(&bell_state(0)) - 1.0).abs() < 1e-12);
        for p in &out.outcome_distribution {
            assert!((p - 0.25).abs() < 1e-14);
        }
        assert_eq!(out.transcript.broadcast_bits, 2);
        assert!((out.transcript.outcome_entropy_bits - 2.0).abs() < 1e-12);
    }

    #[test]
    fn teleportation_contract() {
        let tele = teleportation_box();
        let mut rng = seeded_rng(5);
        let psi_b = StateVector::basis(Register::qubits(&["B"]).unwrap(), 0).unwrap();
        for _ in 0..100 {
            let phi = random_pure_state_with(&mut rng, &Register::qubits(&[C2]).unwrap());
            let input = bell_state_on(0, "A", C1)
                .tensor(&psi_b)
                .unwrap()
                .tensor(&phi)
                .unwrap();
            let out = apply_box(&tele, &input.to_density()).unwrap();
            let phi_a = StateVector::new(phi.amplitudes().clone(), Register::qubits(&["A"]).unwrap()).unwrap();
            let expect = phi_a.tensor(&psi_b).unwrap();
            assert!(out.output.fidelity_pure(&expect) > 1.0 - 1e-10);
        }
    }

    #[test]
    fn basis_state_is_teleported() {
        let psi_b = StateVector::basis(Register::qubits(&["B"]).unwrap(), 1).unwrap();
        let zero = StateVector::basis(Register::qubits(&[C2]).unwrap(), 0).unwrap();
        let input = bell_state_on(0, "A", C1).tensor(&psi_b).unwrap().tensor(&zero).unwrap();
        let out = apply_box(&teleportation_box(), &input.to_density()).unwrap();
        // |0⟩_A |1⟩_B
        assert!((out.output.matrix()[(1, 1)].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_boxes_distributions() {
        for seed in 0..20 {
            let four = random_es_box(4, seed).unwrap();
            let out = apply_box(&four, &canonical_input().to_density()).unwrap();
            assert!(out.outcome_distribution.iter().all(|p| (p - 0.25).abs() < 1e-12));
            let eight = random_es_box(8, seed).unwrap();
            let out = apply_box(&eight, &canonical_input().to_density()).unwrap();
            assert!((out.transcript.outcome_entropy_bits - 3.0).abs() < 1e-12);
            assert_eq!(out.transcript.broadcast_bits, 3);
        }
        assert!(random_es_box(5, 0).is_err());
    }

    #[test]
    fn shape_checks() {
        let bad = Branch { e_c: gates::identity(2), u_a: gates::identity(2), u_b: gates::identity(2) };
        assert!(ESBox::new(vec![bad], false).is_err());
        assert!(ESBox::new(vec![], false).is_err());
    }
}
