//! Corpus input and output.
//!
//! Two experiment domains feed the encoder: token sequences rendered as
//! left-leaning binary chains, and first-order CNF clauses read from a
//! TPTP-style syntax. This module also houses synthetic corpus generators
//! and the text format that persists a constraint system with its bindings.

pub mod clause;
pub mod sentence;
pub mod store;
pub mod synth;
