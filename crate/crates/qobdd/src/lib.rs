//! Quantum read-once branching programs (quantum OBDDs) driven by linear
//! polynomial fingerprints over Z_m.
//!
//! The crate covers the full pipeline:
//!
//! - [`zmod`] — exact polynomial arithmetic over Z_m: characteristic
//!   polynomials and characteristic sets, plus the sum-of-products
//!   construction that yields one for any Boolean function.
//! - [`goodset`] — search and verification of "good" rotation parameter
//!   sets, the ingredient that bounds false-accept probability.
//! - [`qbp`] — the branching-program model itself: exact state-vector
//!   execution, acceptance probabilities, complexity measures, and
//!   whole-truth-table error classification.
//! - [`fingerprint`] — synthesis of fingerprinting programs from a linear
//!   polynomial (single target qubit) or a set of them (one target qubit per
//!   polynomial), with closed-form acceptance probabilities used to
//!   cross-check the simulator.
//! - [`zoo`] — a catalogue of functions with known linear characteristic
//!   polynomials (modular weight, weighted sums, equality, palindromes,
//!   permutation matrices).
//! - [`projection`] — variable substitutions that map one function family
//!   onto another while keeping polynomials linear.
//! - [`bounds`] — lower-bound calculators relating quantum width to
//!   deterministic OBDD width obtained by subfunction counting.

mod arith;
mod error;

pub mod bounds;
pub mod fingerprint;
pub mod goodset;
pub mod projection;
pub mod qbp;
pub mod zmod;
pub mod zoo;

pub use error::{Error, Result};

pub use fingerprint::{
    build_general, build_single, closed_form_general, closed_form_single,
    fingerprint_state_general, fingerprint_state_single, width_qubits_report, FingerprintSpec,
    WidthReport,
};
pub use goodset::{
    exhaustive_smallest_good_set, recommended_size, sample_good_set, sample_good_set_with_image,
    GoodSet, VerifiedScope,
};
pub use projection::{
    apply_to_poly, apply_to_truth, check_linearity_transfer, ProjEntry, Projection,
};
pub use qbp::{ErrorClass, Instruction, Measures, QbpProgram, SimulationReport, Unitary};
pub use zmod::{
    conjoin_characteristics, dnf_to_char_poly, is_characteristic, try_as_linear,
    verify_characteristic_set, Characteristic, DnfFormula, LinearPoly, Literal, Modulus,
    MultilinearPoly, Poly,
};
pub use zoo::ZooEntry;
