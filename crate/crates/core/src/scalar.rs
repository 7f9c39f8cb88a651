//! Scalar traits the rest of the crate is generic over.
//!
//! Exact arithmetic is parameterised by an integer type ([`RingInt`]):
//! `BigInt` for unbounded words, `i64`/`i128` for the hot paths where the
//! coefficient growth is known to be bounded (catalog entries, oracles).
//! Floating-point geometry is parameterised by [`Real`] (`f32` or `f64`).

use std::fmt::Debug;
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{Float, FloatConst, FromPrimitive, Signed, ToPrimitive};

/// Integer coefficients of exact ring elements.
pub trait RingInt:
    Clone + Debug + Eq + Ord + Hash + Integer + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn from_small(v: i64) -> Self {
        Self::from_i64(v).expect("small integer fits every RingInt")
    }

    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> RingInt for T where
    T: Clone
        + Debug
        + Eq
        + Ord
        + Hash
        + Integer
        + Signed
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

/// Floating-point scalar used for distances, traces and sphere geometry.
pub trait Real: Float + FloatConst + Debug + Default + Send + Sync + 'static {
    fn lit(v: f64) -> Self {
        Self::from(v).expect("f64 literal representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}
