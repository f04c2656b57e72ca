//! The `U ⊗ U*` twirl in closed form.
//!
//! Averaging `(U ⊗ U*) σ (U ⊗ U*)†` over Haar-random `U` projects a
//! two-qubit state onto the isotropic family
//! `F·P₊ + (1 − F)(I − P₊)/3` with `F = ⟨Ψ⁺|σ|Ψ⁺⟩`. Nothing here samples.

use super::states::psi_plus_projector;
use crate::qcore::ops::reorder_matrix;
use crate::qcore::{DensityMatrix, Register};
use crate::{CMatrix, Error, Result, C64};

/// Isotropic state with singlet fraction `f` on a two-qubit register.
pub fn isotropic_state(f: f64, register: Register) -> Result<DensityMatrix> {
    if register.dims() != [2, 2] {
        return Err(Error::DimensionMismatch { expected: 4, found: register.total_dim() });
    }
    DensityMatrix::new(isotropic_matrix(f), register)
}

fn isotropic_matrix(f: f64) -> CMatrix {
    let p = psi_plus_projector();
    let q = CMatrix::identity(4, 4) - &p;
    p.scale(f) + q.scale((1.0 - f) / 3.0)
}

/// Exact twirl of a two-qubit state.
pub fn twirl(sigma: &DensityMatrix) -> Result<DensityMatrix> {
    if sigma.register().dims() != [2, 2] {
        return Err(Error::DimensionMismatch { expected: 4, found: sigma.dim() });
    }
    let f = sigma.expectation(&psi_plus_projector());
    Ok(DensityMatrix::from_raw(
        isotropic_matrix(f).scale(sigma.trace()),
        sigma.register().clone(),
    ))
}

/// Twirl on qubits `a`, `b` of a larger operator, identity on the rest:
/// `P₊ ⊗ Tr_ab[(P₊ ⊗ I) Y] + (I − P₊)/3 ⊗ Tr_ab[((I − P₊) ⊗ I) Y]`.
pub(crate) fn twirl_matrix_on(
    y: &CMatrix,
    register: &Register,
    a: &str,
    b: &str,
) -> Result<CMatrix> {
    let pair = register.select(&[a, b])?;
    if pair.dims() != [2, 2] {
        return Err(Error::DimensionMismatch { expected: 4, found: pair.total_dim() });
    }
    let rest = register.without(&[a, b]);
    let order = pair.concat(&rest)?;
    let moved = reorder_matrix(y, register, &order)?;
    let r = rest.total_dim();
    let p = psi_plus_projector();

    // x0 = Tr_ab[(P₊ ⊗ I) Y], xt = Tr_ab[Y]
    let mut x0 = CMatrix::zeros(r, r);
    let mut xt = CMatrix::zeros(r, r);
    for s in 0..r {
        for t in 0..r {
            let mut acc = C64::new(0.0, 0.0);
            let mut tr = C64::new(0.0, 0.0);
            for x in 0..4 {
                tr += moved[(x * r + s, x * r + t)];
                for z in 0..4 {
                    let pzx = p[(z, x)];
                    if pzx != C64::new(0.0, 0.0) {
                        acc += pzx * moved[(x * r + s, z * r + t)];
                    }
                }
            }
            x0[(s, t)] = acc;
            xt[(s, t)] = tr;
        }
    }
    let x1 = &xt - &x0;
    let q3 = (CMatrix::identity(4, 4) - &p).scale(1.0 / 3.0);
    let out = p.kronecker(&x0) + q3.kronecker(&x1);
    reorder_matrix(&out, &order, register)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::{bell_state, ALICE, BOB};
    use crate::qcore::{
        apply, gates, haar_unitary, kron, random_density, trace_distance, Tensor, UnitaryOp,
    };

    fn ab() -> Register {
        Register::qubits(&[ALICE, BOB]).unwrap()
    }

    #[test]
    fn fixed_points() {
        let p = bell_state(0).to_density();
        assert!(twirl(&p).unwrap().trace_distance(&p) < 1e-15);
        let mixed = DensityMatrix::maximally_mixed(ab());
        assert!(twirl(&mixed).unwrap().trace_distance(&mixed) < 1e-15);
    }

    #[test]
    fn phase_flipped_singlet_goes_to_orthogonal_complement() {
        let z = UnitaryOp::on(ALICE, gates::pauli_z()).unwrap();
        let flipped = apply(&z, &bell_state(0).to_density()).unwrap();
        let out = twirl(&flipped).unwrap();
        let expect = (CMatrix::identity(4, 4) - psi_plus_projector()).scale(1.0 / 3.0);
        assert!(trace_distance(out.matrix(), &expect) < 1e-15);
    }

    #[test]
    fn idempotent() {
        for seed in 0..50 {
            let rho = random_density(&ab(), 4, seed);
            let once = twirl(&rho).unwrap();
            let twice = twirl(&once).unwrap();
            assert!((once.matrix() - twice.matrix()).norm() < 1e-12);
        }
    }

    #[test]
    fn invariant_under_fixed_local_rotation() {
        // twirl ∘ (U ⊗ U*) = twirl: a shared random U suffices
        for seed in 0..20 {
            let rho = random_density(&ab(), 4, 100 + seed);
            let u = haar_unitary(2, seed);
            let uu = UnitaryOp::new(kron(&u, &u.conjugate()), ab()).unwrap();
            let rotated = apply(&uu, &rho).unwrap();
            let lhs = twirl(&rotated).unwrap();
            let rhs = twirl(&rho).unwrap();
            assert!(lhs.trace_distance(&rhs) < 1e-12);
        }
    }

    #[test]
    fn monte_carlo_average_approaches_exact_twirl() {
        let rho = random_density(&ab(), 4, 7);
        let n = 10_000;
        let mut avg = CMatrix::zeros(4, 4);
        for seed in 0..n {
            let u = haar_unitary(2, 10_000 + seed);
            let w = kron(&u, &u.conjugate());
            avg += &w * rho.matrix() * w.adjoint();
        }
        avg.unscale_mut(n as f64);
        let exact = twirl(&rho).unwrap();
        assert!(trace_distance(&avg, exact.matrix()) < 1e-2);
    }

    #[test]
    fn extended_twirl_matches_two_qubit_twirl_on_products() {
        let rho = random_density(&ab(), 4, 3);
        let anc = random_density(&Register::qubits(&["R"]).unwrap(), 2, 4);
        let joint = anc.tensor(&rho).unwrap(); // [R, A, B]
        let out = twirl_matrix_on(joint.matrix(), joint.register(), ALICE, BOB).unwrap();
        let expect = kron(anc.matrix(), twirl(&rho).unwrap().matrix());
        assert!((out - expect).norm() < 1e-14);
    }
}
