//! Constant-depth quantum oracle synthesis for ESOP boolean functions.
//!
//! Any boolean function written as an XOR of conjunctions compiles to an
//! oracle `|x⟩|y⟩ ↦ |x⟩|y ⊕ f(x)⟩` of macro depth 5 over multi-controlled
//! NOTs, fanouts and parity gates. Multi-controlled gates then lower to
//! the primitive set (H, Z-rotations, CNOT, fanout, parity) through the
//! parity-ancilla decomposition, whose rotation angles are exact dyadic
//! fractions of π. Because every phase is dyadic, the whole pipeline is
//! verified exactly: an integer phase simulator sweeps the diagonal
//! fragment at any width, a classical simulator sweeps the reversible
//! fragment, and a dense state-vector simulator cross-checks the small
//! Hadamard sandwiches.
//!
//! The pipeline, end to end:
//!
//! ```
//! use qesop_core::{lower, synth_oracle, verify_oracle, BooleanFunction, CostModel};
//!
//! let f = BooleanFunction::parse_esop("vars 3\nterm 1 2\nterm 3\n").unwrap();
//! let oracle = synth_oracle(&f).unwrap();
//! assert_eq!(oracle.depth(CostModel::Macro).unwrap(), 5);
//!
//! let lowered = lower(&oracle).unwrap();
//! assert!(verify_oracle(&lowered, &f).unwrap().passed());
//! ```

pub mod boolean;
pub mod corpus;
mod error;
pub mod ir;
pub mod phase;
pub mod sim;
pub mod synth;
pub mod verify;

pub use boolean::{
    alternating_binomial_sum, and_xor_expansion, binomial, check_and_xor_identity,
    BooleanFunction, SignedParityTerm,
};
pub use error::{Error, Result};
pub use ir::{size_estimate, Circuit, CostModel, Gate, GateCounts, SizeEstimate, WireRange, WireRole};
pub use phase::DyadicPhase;
pub use sim::{basis_index, macro_sim, phase_sim, statevector_sim, BasisState, Scalar};
pub use synth::{lower, synth_disjunction, synth_mcx, synth_mcz, synth_oracle, MczPlan};
pub use verify::{verify_mcz, verify_mcz_circuit, verify_oracle, Failure, VerificationReport, Verdict};

/// Default float scalar for dense simulation.
pub type Real = f64;

/// Default amplitude type for dense simulation.
pub type Amplitude = num_complex::Complex<Real>;
