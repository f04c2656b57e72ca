//! Communication analysis of boxes.
//!
//! Cost is bounded from below by the entropy of Charlie's broadcast
//! outcomes. Value is bracketed by explicit signaling protocols (lower
//! bounds) and by the entanglement-assisted capacity of the box viewed as a
//! channel from all of `A B C1 C2` to `A B` (upper bound).

mod capacity;
mod cost;
mod lemma;
mod report;
mod signaling;
mod value;

pub use capacity::{eaccqc_maximize, eaccqc_objective, CapacityResult, ExchangeObjective, OptimizerConfig};
pub use cost::{cc_chain, cc_lower_bound, CcChain};
pub use lemma::{
    flagged_extension, lemma1_gap, lemma1_suite, random_ensemble, Lemma1Gap, Lemma1Suite, FLAG,
};
pub use report::{CommReport, Direction, Verdict};
pub use signaling::{nonsignaling_check, nonsignaling_check_with, Signaling, SIGNALING_THRESHOLD};
pub use value::{
    accessible_information, bell_from_ghz_cv, bell_from_ghz_cv_with, dense_coding_cv, dense_coding_with,
    ghz_randomization_signal, ghz_randomization_signal_with, teleportation_contract_gap, theorem3_protocol, BellFromGhzCv,
    DenseCoding, GhzSignal, SignalingProtocol, ANCILLA,
};
