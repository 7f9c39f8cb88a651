//! Floating-point PSU(2) elements as unit quaternions, plus axis-angle geometry.

use crate::error::Error;
use crate::scalar::Real;

/// Unit quaternion `(w, x, y, z)` standing for `w·I − i(x·X + y·Y + z·Z)`.
///
/// `q` and `−q` are the same PSU(2) element.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Quat<F> {
    pub w: F,
    pub x: F,
    pub y: F,
    pub z: F,
}

impl<F: Real> Quat<F> {
    pub fn new(w: F, x: F, y: F, z: F) -> Self {
        Self { w, x, y, z }
    }

    pub fn identity() -> Self {
        Self::new(F::one(), F::zero(), F::zero(), F::zero())
    }

    /// Rotation by `angle` about the (normalised) `axis`.
    pub fn from_axis_angle(axis: [F; 3], angle: F) -> Self {
        let n = norm3(axis);
        let half = angle / F::lit(2.0);
        let s = half.sin() / n;
        Self::new(half.cos(), axis[0] * s, axis[1] * s, axis[2] * s)
    }

    /// Project a U(2) matrix `[(re, im); 4]` (row-major) to SU(2) up to sign.
    pub fn from_u2(m: [(F, F); 4]) -> Self {
        let [(ar, ai), (br, bi), (cr, ci), (dr, di)] = m;
        // det = a·d − b·c
        let det_r = ar * dr - ai * di - (br * cr - bi * ci);
        let det_i = ar * di + ai * dr - (br * ci + bi * cr);
        // principal square root of det, then divide it out
        let r = (det_r * det_r + det_i * det_i).sqrt().sqrt();
        let phi = det_i.atan2(det_r) / F::lit(2.0);
        let (sr, si) = (r * phi.cos(), r * phi.sin());
        let den = sr * sr + si * si;
        let div = |(xr, xi): (F, F)| ((xr * sr + xi * si) / den, (xi * sr - xr * si) / den);
        let (ar, ai) = div((ar, ai));
        let (br, bi) = div((br, bi));
        let (cr, ci) = div((cr, ci));
        let (dr, di) = div((dr, di));
        let two = F::lit(2.0);
        // V = [[w − iz, −y − ix], [y − ix, w + iz]]
        let w = (ar + dr) / two;
        let z = (di - ai) / two;
        let x = -(bi + ci) / two;
        let y = (cr - br) / two;
        Self::new(w, x, y, z).normalized()
    }

    /// Row-major complex entries of the SU(2) representative.
    pub fn to_matrix(&self) -> [(F, F); 4] {
        [(self.w, -self.z), (-self.y, -self.x), (self.y, -self.x), (self.w, self.z)]
    }

    pub fn norm(&self) -> F {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self::new(self.w / n, self.x / n, self.y / n, self.z / n)
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }

    /// Representative with `w ≥ 0`.
    pub fn canonical_sign(&self) -> Self {
        if self.w < F::zero() {
            self.neg()
        } else {
            *self
        }
    }

    pub fn conj(&self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    /// Matrix product `self · o`.
    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = (self, o);
        Self::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + b.w * a.x + a.y * b.z - a.z * b.y,
            a.w * b.y + b.w * a.y + a.z * b.x - a.x * b.z,
            a.w * b.z + b.w * a.z + a.x * b.y - a.y * b.x,
        )
    }

    pub fn dot(&self, o: &Self) -> F {
        self.w * o.w + self.x * o.x + self.y * o.y + self.z * o.z
    }

    /// `|tr(U)|`.
    pub fn abs_trace(&self) -> F {
        F::lit(2.0) * self.w.abs()
    }

    /// `√((2 − |tr(U·V†)|)/2)`, evaluated as `min(|q−p|, |q+p|)/√2`.
    pub fn dist(&self, o: &Self) -> F {
        let d = |s: F| {
            let (w, x, y, z) = (self.w - s * o.w, self.x - s * o.x, self.y - s * o.y, self.z - s * o.z);
            (w * w + x * x + y * y + z * z).sqrt()
        };
        d(F::one()).min(d(-F::one())) / F::SQRT_2()
    }

    /// Image of `v` under the adjoint action `σ·v ↦ U (σ·v) U†`.
    pub fn rotate(&self, v: [F; 3]) -> [F; 3] {
        let p = Self::new(F::zero(), v[0], v[1], v[2]);
        let r = self.mul(&p).mul(&self.conj());
        [r.x, r.y, r.z]
    }

    pub fn cast<G: Real>(&self) -> Quat<G> {
        let c = |v: F| G::from(v).expect("float cast");
        Quat::new(c(self.w), c(self.x), c(self.y), c(self.z))
    }
}

/// Haar-random element of SU(2): a uniform point of the 3-sphere.
pub fn haar_random<R: rand::Rng + ?Sized>(rng: &mut R) -> Quat<f64> {
    loop {
        let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n2: f64 = v.iter().map(|c| c * c).sum();
        if n2 > 1e-6 && n2 <= 1.0 {
            let n = n2.sqrt();
            return Quat::new(v[0] / n, v[1] / n, v[2] / n, v[3] / n);
        }
    }
}

pub fn norm3<F: Real>(v: [F; 3]) -> F {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

pub fn dot3<F: Real>(a: [F; 3], b: [F; 3]) -> F {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross3<F: Real>(a: [F; 3], b: [F; 3]) -> [F; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn normalize3<F: Real>(v: [F; 3]) -> [F; 3] {
    let n = norm3(v);
    [v[0] / n, v[1] / n, v[2] / n]
}

/// Rotation axis and angle of the SO(3) image of a PSU(2) element.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochAxis<F> {
    pub n: [F; 3],
    /// Rotation angle in (0, π].
    pub theta: F,
}

impl<F: Real> BlochAxis<F> {
    /// Axis of `q`; at `θ = π` (when `half_turn` is set) the sign is fixed by
    /// making the first nonzero coordinate positive.
    pub fn from_quat_exact(q: &Quat<F>, half_turn: bool) -> Result<Self, Error> {
        let q = q.canonical_sign();
        let v = [q.x, q.y, q.z];
        let s = norm3(v);
        if s <= F::epsilon() * F::lit(16.0) {
            return Err(Error::NoAxis);
        }
        let mut n = [v[0] / s, v[1] / s, v[2] / s];
        let theta = if half_turn {
            let tol = F::lit(1e-12).max(F::epsilon() * F::lit(64.0));
            if let Some(first) = n.iter().copied().find(|c| c.abs() > tol) {
                if first < F::zero() {
                    n = [-n[0], -n[1], -n[2]];
                }
            }
            F::PI()
        } else {
            F::lit(2.0) * s.atan2(q.w)
        };
        Ok(Self { n, theta })
    }

    /// As [`Self::from_quat_exact`], treating `|w|` below a few ulps as a half turn.
    pub fn from_quat(q: &Quat<F>) -> Result<Self, Error> {
        let half = q.w.abs() <= F::epsilon() * F::lit(4.0);
        Self::from_quat_exact(q, half)
    }

    pub fn to_quat(&self) -> Quat<F> {
        Quat::from_axis_angle(self.n, self.theta)
    }

    /// `2|cos(θ/2)|`.
    pub fn abs_trace(&self) -> F {
        F::lit(2.0) * (self.theta / F::lit(2.0)).cos().abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn q(w: f64, x: f64, y: f64, z: f64) -> Quat<f64> {
        Quat::new(w, x, y, z).normalized()
    }

    #[test]
    fn matrix_round_trip() {
        let a = q(0.3, -0.2, 0.7, 0.1);
        let b = Quat::from_u2(a.to_matrix());
        assert!(a.dist(&b) < 1e-14);
        // global phase is ignored
        let phased = a.to_matrix().map(|(re, im)| {
            let (c, s) = (0.7f64.cos(), 0.7f64.sin());
            (re * c - im * s, re * s + im * c)
        });
        assert!(a.dist(&Quat::from_u2(phased)) < 1e-14);
    }

    #[test]
    fn product_matches_matrix_product() {
        let a = q(0.3, -0.2, 0.7, 0.1);
        let b = q(-0.5, 0.4, 0.1, 0.9);
        let (ma, mb) = (a.to_matrix(), b.to_matrix());
        let mul = |x: (f64, f64), y: (f64, f64)| (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0);
        let add = |x: (f64, f64), y: (f64, f64)| (x.0 + y.0, x.1 + y.1);
        let prod = [
            add(mul(ma[0], mb[0]), mul(ma[1], mb[2])),
            add(mul(ma[0], mb[1]), mul(ma[1], mb[3])),
            add(mul(ma[2], mb[0]), mul(ma[3], mb[2])),
            add(mul(ma[2], mb[1]), mul(ma[3], mb[3])),
        ];
        assert!(a.mul(&b).dist(&Quat::from_u2(prod)) < 1e-14);
    }

    #[test]
    fn dist_is_phase_blind_and_bounded() {
        let a = q(0.3, -0.2, 0.7, 0.1);
        assert_eq!(a.dist(&a.neg()), 0.0);
        let id = Quat::<f64>::identity();
        let x = q(0.0, 1.0, 0.0, 0.0);
        assert!((id.dist(&x) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn axis_of_z_rotation() {
        let t = Quat::from_axis_angle([0.0, 0.0, 1.0], PI / 4.0);
        let ax = BlochAxis::from_quat(&t).unwrap();
        assert!((ax.theta - PI / 4.0).abs() < 1e-14);
        assert!((ax.n[2] - 1.0).abs() < 1e-14);
        assert!(BlochAxis::from_quat(&Quat::<f64>::identity()).is_err());
    }

    #[test]
    fn half_turn_tie_break() {
        let h = Quat::new(0.0, -FRAC_1_SQRT_2, 0.0, -FRAC_1_SQRT_2);
        let ax = BlochAxis::from_quat(&h).unwrap();
        assert_eq!(ax.theta, PI);
        assert!((ax.n[0] - FRAC_1_SQRT_2).abs() < 1e-15 && (ax.n[2] - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn rotation_is_right_handed() {
        let r = Quat::from_axis_angle([0.0, 0.0, 1.0], PI / 2.0);
        let v = r.rotate([1.0, 0.0, 0.0]);
        assert!((v[1] - 1.0).abs() < 1e-15 && v[0].abs() < 1e-15);
    }

    #[test]
    fn works_in_single_precision() {
        let a = Quat::<f32>::from_axis_angle([1.0, 2.0, 2.0], 0.5);
        let b = a.mul(&a);
        let ax = BlochAxis::from_quat(&b).unwrap();
        assert!((ax.theta - 1.0).abs() < 1e-5);
        assert!((ax.abs_trace() - b.abs_trace()).abs() < 1e-5);
    }
}
