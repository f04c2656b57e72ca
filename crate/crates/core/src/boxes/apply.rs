use super::twirl::twirl_matrix_on;
use super::{ALICE, BOB};
use crate::qcore::{
    self, partial_trace_matrix, shannon_entropy, DensityMatrix, Evolve, Register, StateVector,
    UnitaryOp,
};
use crate::qcore::linalg::{conjugate_local, trace};
use crate::qcore::ops::{move_slice_last, reorder_matrix};
use crate::{CMatrix, Error, Result};

/// One branch as seen by the application engine: Charlie's operator (from
/// his input qubits to his output qubits) and the corrections at A and B.
#[derive(Debug, Clone, Copy)]
pub struct BranchAction<'a> {
    pub charlie: &'a CMatrix,
    pub u_a: &'a CMatrix,
    pub u_b: &'a CMatrix,
}

/// Anything that acts as a tripartite measure-and-correct map.
pub trait LoccBox {
    fn branch_actions(&self) -> Vec<BranchAction<'_>>;
    /// Charlie's qubits the measurement acts on.
    fn charlie_input(&self) -> Register;
    /// Charlie's qubits after the measurement.
    fn charlie_output(&self) -> Register;
    /// Whether Charlie's output qubits are discarded after the box.
    fn discards_charlie(&self) -> bool;
    fn post_twirl(&self) -> bool;
    /// The input on which the box defines its task.
    fn canonical_input(&self) -> StateVector;

    fn n_outcomes(&self) -> usize {
        self.branch_actions().len()
    }

    /// Bits Charlie broadcasts per use: `⌈log₂ n⌉`.
    fn broadcast_bits(&self) -> u32 {
        let n = self.n_outcomes().max(1);
        usize::BITS - (n - 1).leading_zeros()
    }

    /// Frobenius norm of `Σ K†K − I` over Charlie's operators.
    fn completeness_residual(&self) -> f64 {
        let d = self.charlie_input().total_dim();
        let mut sum = CMatrix::zeros(d, d);
        for b in self.branch_actions() {
            sum += b.charlie.adjoint() * b.charlie;
        }
        (sum - CMatrix::identity(d, d)).norm()
    }
}

/// Communication record of one use of a box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transcript {
    pub broadcast_bits: u32,
    pub outcome_entropy_bits: f64,
}

/// Branch state after Charlie's operation, before and after the
/// corrections. Both are unnormalized: their trace is the branch probability.
#[derive(Debug, Clone)]
pub struct BranchState {
    pub probability: f64,
    pub before_correction: CMatrix,
    pub after_correction: CMatrix,
}

#[derive(Debug, Clone)]
pub struct BoxOutput {
    pub output: DensityMatrix,
    pub outcome_distribution: Vec<f64>,
    pub transcript: Transcript,
    pub branches: Vec<BranchState>,
}

/// Runs `bx` on `rho`.
///
/// The output lives on the input register with Charlie's measured qubits
/// replaced by his output qubits (dropped entirely when the box discards
/// them). Any other factors (ancillas such as `A'` or a purifying `E`) pass
/// through untouched. The box must be complete.
pub fn apply_box<B: LoccBox + ?Sized>(bx: &B, rho: &DensityMatrix) -> Result<BoxOutput> {
    let residual = bx.completeness_residual();
    if residual > 1e-8 {
        return Err(Error::InvalidBox(format!(
            "measurement is incomplete (residual {residual:e})"
        )));
    }
    let raw = apply_unchecked(bx, rho.matrix(), rho.register())?;
    let transcript = Transcript {
        broadcast_bits: bx.broadcast_bits(),
        outcome_entropy_bits: shannon_entropy(&normalize_clip(&raw.distribution))?,
    };
    Ok(BoxOutput {
        output: DensityMatrix::from_raw(raw.output, raw.register),
        outcome_distribution: raw.distribution,
        transcript,
        branches: raw.branches,
    })
}

fn normalize_clip(p: &[f64]) -> Vec<f64> {
    let clipped: Vec<f64> = p.iter().map(|x| x.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    clipped.iter().map(|x| x / total).collect()
}

pub(crate) struct RawOutput {
    pub output: CMatrix,
    pub register: Register,
    pub distribution: Vec<f64>,
    pub branches: Vec<BranchState>,
}

/// Application without any validity requirement on the box. Used by the
/// validator, which must see what a broken box actually does.
pub(crate) fn apply_unchecked<B: LoccBox + ?Sized>(
    bx: &B,
    rho: &CMatrix,
    register: &Register,
) -> Result<RawOutput> {
    for label in [ALICE, BOB] {
        if register.dim_of(label) != Some(2) {
            return Err(Error::RegisterMismatch(format!(
                "input {register} lacks qubit `{label}`"
            )));
        }
    }
    let c_in = bx.charlie_input();
    let c_out = bx.charlie_output();
    let (moved, order) = move_slice_last(rho, register, &c_in)
        .map_err(|e| Error::RegisterMismatch(format!("input {register}: {e}")))?;
    let c_in_labels: Vec<&str> = c_in.labels().collect();
    let others = order.without(&c_in_labels);
    let outer = others.total_dim();
    let after_charlie = others.concat(&c_out)?;
    let keep: Vec<&str> = if bx.discards_charlie() {
        others.labels().collect()
    } else {
        after_charlie.labels().collect()
    };
    let out_register = after_charlie.select(&keep)?;
    let corrections_on = Register::qubits(&[ALICE, BOB])?;

    let d_out = out_register.total_dim();
    let mut output = CMatrix::zeros(d_out, d_out);
    let mut distribution = Vec::new();
    let mut branches = Vec::new();
    for action in bx.branch_actions() {
        if action.charlie.ncols() != c_in.total_dim() || action.charlie.nrows() != c_out.total_dim() {
            return Err(Error::InvalidBox(format!(
                "Charlie operator has shape {:?}, expected ({}, {})",
                action.charlie.shape(),
                c_out.total_dim(),
                c_in.total_dim()
            )));
        }
        let conditioned = conjugate_local(&moved, outer, action.charlie);
        let p = trace(&conditioned).re;
        distribution.push(p);
        let (before, _) = partial_trace_matrix(&conditioned, &after_charlie, &keep)?;
        if p.abs() < 1e-15 {
            branches.push(BranchState {
                probability: p,
                after_correction: before.clone(),
                before_correction: before,
            });
            continue;
        }
        let correction = UnitaryOp::from_raw(
            qcore::kron(action.u_a, action.u_b),
            corrections_on.clone(),
        );
        let after = DensityMatrix::from_raw(before.clone(), out_register.clone())
            .evolve(&correction)?
            .into_parts()
            .0;
        output += &after;
        branches.push(BranchState {
            probability: p,
            before_correction: before,
            after_correction: after,
        });
    }
    if bx.post_twirl() {
        output = twirl_matrix_on(&output, &out_register, ALICE, BOB)?;
    }
    Ok(RawOutput { output, register: out_register, distribution, branches })
}

/// Operation Charlie may perform on his qubits before the box acts.
#[derive(Debug, Clone)]
pub enum CharlieOp {
    Identity,
    Unitary(UnitaryOp),
    /// Projective measurement of the listed qubits in the computational
    /// basis, outcome forgotten.
    ComputationalMeasurement(Vec<String>),
}

impl CharlieOp {
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        match self {
            CharlieOp::Identity => Ok(rho.clone()),
            CharlieOp::Unitary(u) => rho.evolve(u),
            CharlieOp::ComputationalMeasurement(labels) => {
                let slice = rho.register().select(labels)?;
                let (moved, order) = move_slice_last(rho.matrix(), rho.register(), &slice)?;
                let local = slice.total_dim();
                let dephased = CMatrix::from_fn(moved.nrows(), moved.ncols(), |i, j| {
                    if i % local == j % local {
                        moved[(i, j)]
                    } else {
                        num_zero()
                    }
                });
                let back = reorder_matrix(&dephased, &order, rho.register())?;
                Ok(DensityMatrix::from_raw(back, rho.register().clone()))
            }
        }
    }
}

fn num_zero() -> crate::C64 {
    crate::C64::new(0.0, 0.0)
}
