//! Exact and floating-point arithmetic for single-qubit unitaries modulo phase.

mod adjoint;
mod quat;
mod ring;
mod unitary;

pub use adjoint::{adjoint_z, PauliVector};
pub use quat::{cross3, dot3, haar_random, norm3, normalize3, BlochAxis, Quat};
pub use ring::{Real2, RingScalar, ZOmega};
pub use unitary::{abs_trace_sq, dist, gate_matrix, psu2_equal, ExactUnitary, GateSymbol};

use crate::error::Error;
use crate::scalar::RingInt;

/// Axis-angle of the SO(3) image of `u`, decided exactly at the half turn.
pub fn bloch_axis<I: RingInt>(u: &ExactUnitary<I>) -> Result<BlochAxis<f64>, Error> {
    if u.psu2_eq(&ExactUnitary::identity()) {
        return Err(Error::NoAxis);
    }
    BlochAxis::from_quat_exact(&u.to_quat(), u.abs_trace_sq().is_zero())
}
