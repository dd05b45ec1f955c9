//! Reversible count-vector encoding of rooted DAGs.
//!
//! A [`Signature`](signature::Signature) declares a finite symbol universe.
//! From it, [`build_system`](constraints::build_system) derives `t` parallel
//! families of randomized constraints, fixed a priori by a seed. Encoding a
//! graph tallies its symbols and the constraints its nodes match into a
//! fixed-length count vector; decoding compiles the vector back into a SAT
//! problem whose models are exactly the graphs consistent with those tallies.
//!
//! The crate is organized along the pipeline:
//!
//! * [`signature`]: symbols, masks, placeholder pools, text serialization
//! * [`graph`]: the rooted-DAG value type, validation, canonical rendering
//! * [`constraints`]: cell partitioning and constraint generation
//! * [`encode`]: graph to count vector
//! * [`decode`]: count vector to SAT formula to graph
//! * [`similarity`]: row-wise vector similarity and nearest-neighbor labels
//! * [`formats`]: sentence and first-order clause corpora

pub mod binding;
pub mod constraints;
pub mod decode;
pub mod encode;
pub mod error;
pub mod formats;
pub mod graph;
pub mod matching;
pub mod rng;
pub mod signature;
pub mod similarity;
pub mod symbol;
pub mod vector;

pub use error::Error;
pub use graph::Graph;
pub use signature::Signature;
pub use symbol::{ArgOrder, Mask, Symbol, SymbolKind};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
