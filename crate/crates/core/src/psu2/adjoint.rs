//! Exact adjoint action of normalized circuits on the Pauli basis.

use crate::psu2::ring::Real2;
use crate::rewrite::NormalizedCircuit;
use crate::scalar::RingInt;

/// `(x·X + y·Y + z·Z)` with every coefficient `(c0 + c1√2)/√2^l` over a
/// shared, deliberately unreduced `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliVector<I: RingInt> {
    pub x: Real2<I>,
    pub y: Real2<I>,
    pub z: Real2<I>,
}

impl<I: RingInt> PauliVector<I> {
    pub fn z_axis() -> Self {
        Self {
            x: Real2::raw(I::zero(), I::zero(), 0),
            y: Real2::raw(I::zero(), I::zero(), 0),
            z: Real2::raw(I::one(), I::zero(), 0),
        }
    }

    pub fn level(&self) -> u32 {
        self.x.l
    }

    fn sum(a: &Real2<I>, b: &Real2<I>, l: u32) -> Real2<I> {
        Real2::raw(a.p.clone() + b.p.clone(), a.q.clone() + b.q.clone(), l)
    }

    fn diff(a: &Real2<I>, b: &Real2<I>, l: u32) -> Real2<I> {
        Real2::raw(a.p.clone() - b.p.clone(), a.q.clone() - b.q.clone(), l)
    }

    // √2·(x0 + x1√2) = 2x1 + x0√2
    fn times_sqrt2(a: &Real2<I>, l: u32) -> Real2<I> {
        Real2::raw(a.q.clone() + a.q.clone(), a.p.clone(), l)
    }

    /// `ad_{TH}`: X ↦ Z, Y ↦ (X−Y)/√2, Z ↦ (X+Y)/√2.
    pub fn apply_th(&self) -> Self {
        let l = self.level() + 1;
        Self {
            x: Self::sum(&self.y, &self.z, l),
            y: Self::diff(&self.z, &self.y, l),
            z: Self::times_sqrt2(&self.x, l),
        }
    }

    /// `ad_{SHTH}`: X ↦ Y, Y ↦ (−X+Z)/√2, Z ↦ (X+Z)/√2.
    pub fn apply_shth(&self) -> Self {
        let l = self.level() + 1;
        Self {
            x: Self::diff(&self.z, &self.y, l),
            y: Self::times_sqrt2(&self.x, l),
            z: Self::sum(&self.y, &self.z, l),
        }
    }

    /// `x0` odd and `y0`, `z0` of opposite parity.
    pub fn parity_holds(&self) -> bool {
        self.x.p.is_odd() && (self.y.p.clone() + self.z.p.clone()).is_odd()
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [self.x.to_f64(), self.y.to_f64(), self.z.to_f64()]
    }
}

/// `ad_c(Z) = c·Z·c†`, built block by block from the right.
pub fn adjoint_z<I: RingInt>(c: &NormalizedCircuit) -> PauliVector<I> {
    c.blocks().iter().rev().fold(PauliVector::z_axis(), |acc, &sh| {
        if sh {
            acc.apply_shth()
        } else {
            acc.apply_th()
        }
    })
}
