//! Entanglement-swapping boxes in standard form.
//!
//! A box is a list of branches. In branch `i` Charlie applies a measurement
//! operator on his qubits and broadcasts the outcome; Alice and Bob then
//! apply correction unitaries. Boxes that perform entanglement swapping use
//! rank-one operators `|u⟩⟨ψ₊|` with `ψ₊` maximally entangled on `C1 C2`.

mod apply;
mod file;
mod standard;
mod states;
mod sub;
mod twirl;
mod validate;

pub use apply::{apply_box, BoxOutput, BranchAction, BranchState, CharlieOp, LoccBox, Transcript};
pub use file::AnyBox;
pub use standard::{random_es_box, teleportation_box, twirled_box, Branch, ESBox};
pub use states::{bell_state, bell_state_on, canonical_input, ghz_state, psi_plus_projector};
pub use sub::{bell_from_ghz_box, ghz_box, SubBranch, SubKind, SubPrimitiveBox};
pub use twirl::{isotropic_state, twirl};
pub use validate::{validate_es_box, Check, CheckKind, ValidationReport};

pub const ALICE: &str = "A";
pub const BOB: &str = "B";
pub const C1: &str = "C1";
pub const C2: &str = "C2";
/// Charlie's qubit of the GHZ state consumed by the Bell-from-GHZ box.
pub const CHARLIE: &str = "C";
