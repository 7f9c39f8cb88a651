//! Exact 2×2 unitaries over Z[ω, 1/√2].

use std::fmt;

use crate::error::Error;
use crate::psu2::quat::Quat;
use crate::psu2::ring::{Real2, ZOmega};
use crate::scalar::RingInt;

/// Gate symbols accepted by [`gate_matrix`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateSymbol {
    H,
    T,
    S,
}

impl GateSymbol {
    pub fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'H' => Some(Self::H),
            'T' => Some(Self::T),
            'S' => Some(Self::S),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Self::H => 'H',
            Self::T => 'T',
            Self::S => 'S',
        }
    }
}

/// A U(2) matrix `M / √2^k` with `M` over Z[ω], standing for its PSU(2) class.
///
/// Entries are row-major `[u00, u01, u10, u11]`. The shared exponent is kept
/// reduced: `k = 0` or some entry is not divisible by √2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactUnitary<I> {
    m: [ZOmega<I>; 4],
    k: u32,
}

impl<I: RingInt> ExactUnitary<I> {
    pub fn from_parts(m: [ZOmega<I>; 4], k: u32) -> Self {
        let mut u = Self { m, k };
        u.reduce();
        u
    }

    pub fn identity() -> Self {
        Self { m: [ZOmega::one(), ZOmega::zero(), ZOmega::zero(), ZOmega::one()], k: 0 }
    }

    /// Phase-adjusted representatives: `T = diag(1, ω)`, `S = diag(1, ω²)`,
    /// `H = ω²·[[1, 1], [1, −1]]/√2`.
    pub fn gate(g: GateSymbol) -> Self {
        match g {
            GateSymbol::T => Self {
                m: [ZOmega::one(), ZOmega::zero(), ZOmega::zero(), ZOmega::omega_pow(1)],
                k: 0,
            },
            GateSymbol::S => Self {
                m: [ZOmega::one(), ZOmega::zero(), ZOmega::zero(), ZOmega::omega_pow(2)],
                k: 0,
            },
            GateSymbol::H => {
                let i = ZOmega::omega_pow(2);
                Self { m: [i.clone(), i.clone(), i.clone(), -i], k: 1 }
            }
        }
    }

    /// Ordered product of gate symbols (leftmost symbol is the leftmost factor).
    pub fn from_gates<It: IntoIterator<Item = GateSymbol>>(gates: It) -> Self {
        gates.into_iter().fold(Self::identity(), |acc, g| acc.mul(&Self::gate(g)))
    }

    pub fn entries(&self) -> &[ZOmega<I>; 4] {
        &self.m
    }

    pub fn denom_exp(&self) -> u32 {
        self.k
    }

    fn reduce(&mut self) {
        if self.m.iter().all(|z| z.is_zero()) {
            self.k = 0;
            return;
        }
        while self.k > 0 && self.m.iter().all(|z| z.divisible_by_sqrt2()) {
            for z in self.m.iter_mut() {
                *z = z.div_sqrt2();
            }
            self.k -= 1;
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.k == 0 || !self.m.iter().all(|z| z.divisible_by_sqrt2())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let [a, b, c, d] = &self.m;
        let [e, f, g, h] = &o.m;
        Self::from_parts([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h], self.k + o.k)
    }

    pub fn adjoint(&self) -> Self {
        let [a, b, c, d] = &self.m;
        Self { m: [a.conj(), c.conj(), b.conj(), d.conj()], k: self.k }
    }

    /// Multiply by the global phase ω^j.
    pub fn phase(&self, j: i32) -> Self {
        Self { m: self.m.clone().map(|z| z.mul_omega_pow(j)), k: self.k }
    }

    /// Trace numerator; `tr(U) = trace_num / √2^k`.
    pub fn trace_num(&self) -> ZOmega<I> {
        self.m[0].clone() + self.m[3].clone()
    }

    pub fn det_num(&self) -> ZOmega<I> {
        &self.m[0] * &self.m[3] - &self.m[1] * &self.m[2]
    }

    /// `U·U† = I` exactly.
    pub fn is_unitary(&self) -> bool {
        self.mul(&self.adjoint()) == Self::identity()
    }

    /// `det(U)` is a power of ω.
    pub fn det_is_omega_power(&self) -> bool {
        let det = self.det_num();
        // det(U) = det_num / 2^k
        let mut scaled = ZOmega::omega_pow(0);
        for _ in 0..self.k {
            scaled = scaled.mul_sqrt2().mul_sqrt2();
        }
        (0..8).any(|j| scaled.mul_omega_pow(j) == det)
    }

    /// Exact `|tr(U)|²`.
    pub fn abs_trace_sq(&self) -> Real2<I> {
        let t = self.trace_num();
        let (p, q) = t.norm_sq();
        Real2::new(p, q, 2 * self.k)
    }

    /// `|tr(U)|` as a double.
    pub fn abs_trace(&self) -> f64 {
        self.abs_trace_sq().to_f64().max(0.0).sqrt()
    }

    /// `tr(U·V†)` without forming the product.
    fn trace_with_adjoint(&self, v: &Self) -> (ZOmega<I>, u32) {
        let mut acc = ZOmega::zero();
        for (x, y) in self.m.iter().zip(v.m.iter()) {
            acc = acc + x * &y.conj();
        }
        (acc, self.k + v.k)
    }

    /// Equality in PSU(2): `|tr(U·V†)|² = 4`, decided in Z[√2].
    pub fn psu2_eq(&self, v: &Self) -> bool {
        let (t, k) = self.trace_with_adjoint(v);
        let (p, q) = t.norm_sq();
        Real2::new(p, q, 2 * k) == Real2::from_int(4)
    }

    /// Phase-independent hash key: the lexicographically least of the eight
    /// ω-multiples. Two unitaries over this ring are equal in PSU(2) iff
    /// they differ by a power of ω, so this key decides PSU(2) equality.
    pub fn psu2_key(&self) -> Self {
        (0..8).map(|j| self.phase(j)).min_by(|a, b| a.m.cmp(&b.m)).expect("eight candidates")
    }

    /// Entries as doubles, row-major `(re, im)`.
    pub fn to_complex(&self) -> [(f64, f64); 4] {
        let s = 2f64.powf(-(self.k as f64) / 2.0);
        self.m.clone().map(|z| {
            let (re, im) = z.to_complex();
            (re * s, im * s)
        })
    }

    pub fn to_quat(&self) -> Quat<f64> {
        Quat::from_u2(self.to_complex())
    }

    pub fn cast<J: RingInt>(&self) -> Option<ExactUnitary<J>> {
        let [a, b, c, d] = &self.m;
        Some(ExactUnitary { m: [a.cast()?, b.cast()?, c.cast()?, d.cast()?], k: self.k })
    }
}

impl<I: RingInt + fmt::Display> fmt::Display for ExactUnitary<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.m;
        write!(f, "[[{a}, {b}], [{c}, {d}]] / √2^{}", self.k)
    }
}

/// Look up a gate by name (`"H"`, `"T"`, `"S"`, case-insensitive).
pub fn gate_matrix<I: RingInt>(name: &str) -> Result<ExactUnitary<I>, Error> {
    let mut chars = name.trim().chars();
    match (chars.next().and_then(GateSymbol::from_char), chars.next()) {
        (Some(g), None) => Ok(ExactUnitary::gate(g)),
        _ => Err(Error::UnknownGate(name.to_string())),
    }
}

pub fn psu2_equal<I: RingInt>(u: &ExactUnitary<I>, v: &ExactUnitary<I>) -> bool {
    u.psu2_eq(v)
}

pub fn abs_trace_sq<I: RingInt>(u: &ExactUnitary<I>) -> Real2<I> {
    u.abs_trace_sq()
}

/// `√((2 − |tr(U·V†)|)/2)`, computed from quaternion chords for accuracy near 0.
pub fn dist<I: RingInt>(u: &ExactUnitary<I>, v: &ExactUnitary<I>) -> f64 {
    u.to_quat().dist(&v.to_quat())
}
