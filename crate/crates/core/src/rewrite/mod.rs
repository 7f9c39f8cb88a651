//! Circuit data model and the normalization, canonicalization, inversion and
//! composition rewrites.

mod canonical;
mod circuit;
mod compose;
mod normalize;
pub mod squeeze;
mod word;

pub use canonical::{
    canonicalize, canonicalize_form, canonicalize_traced, invert_normalized, invert_normalized_counted,
    lemma1_rewrite, CanonStats,
};
pub use circuit::{CanonicalCircuit, CosetForm, NormalForm, NormalizedCircuit};
pub use compose::{compose_reduce, compose_reduce_traced, CompositionCase, CompositionStats};
pub use normalize::{normalize, normalize_counted, Spine};
pub use word::GateWord;
