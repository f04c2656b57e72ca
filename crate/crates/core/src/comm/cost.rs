use crate::boxes::{apply_box, validate_es_box, AnyBox, ESBox, LoccBox, ALICE, BOB};
use crate::qcore::{partial_trace, DensityMatrix, Ensemble, Register, TOL_INEQUALITY};
use crate::{CMatrix, Error, Result};

use super::lemma::lemma1_gap;

/// The entropic chain `H({pᵢ}) ≥ ΔS ≥ ΔI = 2` evaluated on the ensemble
/// Alice and Bob hold after Charlie's measurement and before corrections.
#[derive(Debug, Clone, PartialEq)]
pub struct CcChain {
    pub outcome_entropy: f64,
    /// Present for ES-boxes only.
    pub delta_s: Option<f64>,
    pub delta_i: Option<f64>,
    /// Largest violation among the links `H ≥ ΔS`, `ΔS ≥ ΔI`, `ΔI = 2`.
    pub max_link_violation: f64,
    /// Largest deviation of a member's one-party marginals from `I/2`.
    pub marginal_deviation: f64,
    /// Deviation of the ensemble average from `I/4`.
    pub average_deviation: f64,
}

impl CcChain {
    pub fn intact(&self, tol: f64) -> bool {
        self.max_link_violation <= tol
    }

    /// The cost lower bound: the entropy of the broadcast outcomes.
    pub fn bound(&self) -> f64 {
        self.outcome_entropy
    }
}

/// Cost chain of an ES-box on the canonical input.
pub fn cc_chain(bx: &ESBox) -> Result<CcChain> {
    let report = validate_es_box(bx);
    if !report.all_passed() {
        return Err(Error::InvalidBox(format!("fails {}", report.failures().join(", "))));
    }
    let out = apply_box(bx, &bx.canonical_input().to_density())?;
    let ab = Register::qubits(&[ALICE, BOB])?;
    let mut members = Vec::new();
    let mut marginal_deviation = 0.0f64;
    let half = CMatrix::identity(2, 2).scale(0.5);
    for b in out.branches.iter().filter(|b| b.probability > 1e-15) {
        let rho = DensityMatrix::from_raw(b.before_correction.unscale(b.probability), ab.clone());
        for side in [ALICE, BOB] {
            let m = partial_trace(&rho, &[side])?;
            marginal_deviation = marginal_deviation.max((m.matrix() - &half).norm());
        }
        members.push((b.probability, rho));
    }
    let total: f64 = members.iter().map(|(p, _)| p).sum();
    for m in members.iter_mut() {
        m.0 /= total;
    }
    let ensemble = Ensemble::new(members)?;
    let average_deviation =
        (ensemble.average().matrix() - CMatrix::identity(4, 4).scale(0.25)).norm();
    let gap = lemma1_gap(&ensemble, &[ALICE], &[BOB])?;
    let h = out.transcript.outcome_entropy_bits;
    let max_link_violation = (gap.delta_s - h)
        .max(gap.delta_i - gap.delta_s)
        .max((gap.delta_i - 2.0).abs())
        .max(0.0);
    Ok(CcChain {
        outcome_entropy: h,
        delta_s: Some(gap.delta_s),
        delta_i: Some(gap.delta_i),
        max_link_violation,
        marginal_deviation,
        average_deviation,
    })
}

/// Lower bound on the classical bits Charlie must broadcast per use.
///
/// For ES-boxes the full chain is verified (each link within `1e-9`) and its
/// left end returned; for sub-primitive boxes the outcome entropy on their
/// canonical input is returned.
pub fn cc_lower_bound(bx: &AnyBox) -> Result<CcChain> {
    match bx {
        AnyBox::Es(es) => {
            let chain = cc_chain(es)?;
            if !chain.intact(TOL_INEQUALITY) {
                return Err(Error::InvalidBox(format!(
                    "entropic chain broken by {:e}",
                    chain.max_link_violation
                )));
            }
            Ok(chain)
        }
        AnyBox::Sub(sub) => {
            let out = apply_box(sub, &sub.canonical_input().to_density())?;
            Ok(CcChain {
                outcome_entropy: out.transcript.outcome_entropy_bits,
                delta_s: None,
                delta_i: None,
                max_link_violation: 0.0,
                marginal_deviation: 0.0,
                average_deviation: 0.0,
            })
        }
    }
}
