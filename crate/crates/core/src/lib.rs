//! Exact simulation and verification of entanglement-swapping boxes.
//!
//! An entanglement-swapping box is a tripartite LOCC map that turns two
//! maximally entangled pairs `|Ψ⁺⟩_{A C1} |Ψ⁺⟩_{B C2}` into one pair
//! `|Ψ⁺⟩_{AB}`. Every such box can be written as a rank-one measurement by
//! Charlie on `C1 C2` onto maximally entangled states followed by local
//! unitary corrections at Alice and Bob. This crate builds boxes in that
//! form and measures how much classical communication they cost and how
//! much they can carry.
//!
//! The crate is organised in three layers:
//!
//! * [`qcore`]: dense complex linear algebra over labeled qubit registers
//!   (states, partial traces, entropies, purifications, Haar sampling).
//! * [`boxes`]: box construction, application, validation, the exact
//!   `U ⊗ U*` twirl and the two intermediate (GHZ) boxes.
//! * [`comm`]: communication analysis (entropic gaps, cost lower bounds,
//!   signaling protocols, the entanglement-assisted capacity objective and
//!   its optimizer).
//!
//! ```
//! use esbox::boxes::{apply_box, canonical_input, teleportation_box};
//! use esbox::boxes::bell_state;
//!
//! let tele = teleportation_box();
//! let out = apply_box(&tele, &canonical_input().to_density()).unwrap();
//! let fidelity = out.output.fidelity_pure(&bell_state(0));
//! assert!((fidelity - 1.0).abs() < 1e-12);
//! assert_eq!(out.outcome_distribution.len(), 4);
//! ```

pub mod boxes;
pub mod comm;
mod error;
pub mod qcore;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = nalgebra::Complex<f64>;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;

// The guide in `book/` is compiled here so that every snippet in it runs as
// a doc-test and stays in sync with the library.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/registers-and-states.md")]
    mod registers_and_states {}
    #[doc = include_str!("../../../book/src/entropies.md")]
    mod entropies {}
    #[doc = include_str!("../../../book/src/standard-form.md")]
    mod standard_form {}
    #[doc = include_str!("../../../book/src/twirling.md")]
    mod twirling {}
    #[doc = include_str!("../../../book/src/communication-cost.md")]
    mod communication_cost {}
    #[doc = include_str!("../../../book/src/communication-value.md")]
    mod communication_value {}
    #[doc = include_str!("../../../book/src/capacity.md")]
    mod capacity {}
    #[doc = include_str!("../../../book/src/sub-primitives.md")]
    mod sub_primitives {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
