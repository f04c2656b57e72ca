use crate::boxes::{apply_box, CharlieOp, LoccBox};
use crate::qcore::{
    gates, haar_unitary_with, partial_trace, random_density_with, seeded_rng, DensityMatrix,
    UnitaryOp,
};
use crate::Result;

use super::report::Direction;

/// Result of a signaling test in one direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Signaling {
    pub is_signaling: bool,
    /// Largest trace distance between the target marginal with and without
    /// Charlie's operation.
    pub max_residual: f64,
}

/// Residuals above this count as signaling.
pub const SIGNALING_THRESHOLD: f64 = 1e-8;

/// Compares the target-side marginal of `box(Γ(ρ))` with that of `box(ρ)`
/// for every input and every operation.
pub fn nonsignaling_check_with<B: LoccBox + ?Sized>(
    bx: &B,
    direction: Direction,
    inputs: &[DensityMatrix],
    ops: &[CharlieOp],
) -> Result<Signaling> {
    let target = direction.target_labels();
    let mut max_residual = 0.0f64;
    for rho in inputs {
        let reference = partial_trace(&apply_box(bx, rho)?.output, target)?;
        for op in ops {
            let moved = partial_trace(&apply_box(bx, &op.apply(rho)?)?.output, target)?;
            max_residual = max_residual.max(reference.trace_distance(&moved));
        }
    }
    Ok(Signaling { is_signaling: max_residual > SIGNALING_THRESHOLD, max_residual })
}

/// Randomized signaling test.
///
/// Trial 0 uses the box's canonical input, later trials full-rank random
/// states. Each trial draws one Charlie operation, cycling through `Z` on
/// his first qubit, a Haar unitary on all his qubits, a computational-basis
/// measurement of all his qubits and a Haar unitary on his last qubit.
pub fn nonsignaling_check<B: LoccBox + ?Sized>(
    bx: &B,
    direction: Direction,
    trials: usize,
    seed: u64,
) -> Result<Signaling> {
    let mut rng = seeded_rng(seed);
    let canonical = bx.canonical_input();
    let register = canonical.register().clone();
    let charlie = bx.charlie_input();
    let labels: Vec<String> = charlie.labels().map(str::to_string).collect();
    let first = labels.first().cloned().unwrap_or_default();
    let last = labels.last().cloned().unwrap_or_default();

    let mut worst = Signaling { is_signaling: false, max_residual: 0.0 };
    for trial in 0..trials {
        let rho = if trial == 0 {
            canonical.to_density()
        } else {
            random_density_with(&mut rng, &register, register.total_dim())
        };
        let op = match trial % 4 {
            0 => CharlieOp::Unitary(UnitaryOp::on(&first, gates::pauli_z())?),
            1 => CharlieOp::Unitary(UnitaryOp::new(
                haar_unitary_with(&mut rng, charlie.total_dim()),
                charlie.clone(),
            )?),
            2 => CharlieOp::ComputationalMeasurement(labels.clone()),
            _ => CharlieOp::Unitary(UnitaryOp::on(&last, haar_unitary_with(&mut rng, 2))?),
        };
        let s = nonsignaling_check_with(bx, direction, &[rho], &[op])?;
        if s.max_residual > worst.max_residual {
            worst = s;
        }
    }
    Ok(worst)
}
