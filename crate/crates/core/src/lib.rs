//! Exact normalization and canonicalization of single-qubit Clifford+T
//! circuits, a trace-indexed catalog of canonical circuits with
//! ε-approximation search, and a Solovay-Kitaev compiler built on top.

pub mod catalog;
pub mod clifford;
pub mod error;
pub mod oracle;
pub mod psu2;
pub mod rewrite;
pub mod scalar;
pub mod search;
pub mod sk;

pub use catalog::{build as build_catalog, enumerate_canonical, Catalog, CatalogEntry, TraceLevelBucket};
pub use clifford::{classify, Clifford, CliffordElement, CommKind, CommutationRule};
pub use error::{Error, Result};
pub use psu2::{abs_trace_sq, bloch_axis, dist, gate_matrix, psu2_equal, ExactUnitary, GateSymbol, Real2, ZOmega};
pub use rewrite::{
    canonicalize, compose_reduce, invert_normalized, normalize, CanonicalCircuit, CosetForm, GateWord, NormalForm,
    NormalizedCircuit,
};
pub use scalar::{Real, RingInt};
pub use search::{approximate, ApproxQuery, ApproxResult};
pub use sk::{gc_decompose, sk_approximate, SkConfig, SkResult};

use num_bigint::BigInt;

/// Arbitrary-precision exact unitary.
pub type Unitary = ExactUnitary<BigInt>;
/// Exact unitary over `i64`, adequate up to a few dozen T gates.
pub type FastUnitary = ExactUnitary<i64>;
pub type Rotation = psu2::Quat<f64>;
pub type Rotation32 = psu2::Quat<f32>;
pub type Axis = psu2::BlochAxis<f64>;
pub type PauliVector = psu2::PauliVector<BigInt>;
