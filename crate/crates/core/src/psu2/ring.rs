//! Elements of Z[ω], ω = e^{iπ/4}, and their dyadic extensions by powers of √2.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::RingInt;

/// `a + bω + cω² + dω³` with integer coefficients; ω⁴ = −1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZOmega<I> {
    pub a: I,
    pub b: I,
    pub c: I,
    pub d: I,
}

impl<I: RingInt> ZOmega<I> {
    pub fn new(a: I, b: I, c: I, d: I) -> Self {
        Self { a, b, c, d }
    }

    pub fn from_small(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(I::from_small(a), I::from_small(b), I::from_small(c), I::from_small(d))
    }

    pub fn zero() -> Self {
        Self::from_small(0, 0, 0, 0)
    }

    pub fn one() -> Self {
        Self::from_small(1, 0, 0, 0)
    }

    /// ω^j for any integer j.
    pub fn omega_pow(j: i32) -> Self {
        let j = j.rem_euclid(8);
        let sign = if j >= 4 { -1 } else { 1 };
        let mut coeffs = [0i64; 4];
        coeffs[(j % 4) as usize] = sign;
        Self::from_small(coeffs[0], coeffs[1], coeffs[2], coeffs[3])
    }

    /// √2 = ω − ω³.
    pub fn sqrt2() -> Self {
        Self::from_small(0, 1, 0, -1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// Complex conjugate: ω̄ = −ω³.
    pub fn conj(&self) -> Self {
        Self::new(self.a.clone(), -self.d.clone(), -self.c.clone(), -self.b.clone())
    }

    /// Multiply by ω (a cyclic shift with sign).
    pub fn mul_omega(&self) -> Self {
        Self::new(-self.d.clone(), self.a.clone(), self.b.clone(), self.c.clone())
    }

    pub fn mul_omega_pow(&self, j: i32) -> Self {
        let mut out = self.clone();
        for _ in 0..j.rem_euclid(8) {
            out = out.mul_omega();
        }
        out
    }

    pub fn mul_sqrt2(&self) -> Self {
        Self::new(
            self.b.clone() - self.d.clone(),
            self.a.clone() + self.c.clone(),
            self.b.clone() + self.d.clone(),
            self.c.clone() - self.a.clone(),
        )
    }

    /// True iff `self / √2` stays in Z[ω].
    pub fn divisible_by_sqrt2(&self) -> bool {
        (self.a.clone() - self.c.clone()).is_even() && (self.b.clone() - self.d.clone()).is_even()
    }

    /// Exact division by √2; caller checks [`Self::divisible_by_sqrt2`].
    pub fn div_sqrt2(&self) -> Self {
        let two = I::from_small(2);
        Self::new(
            (self.b.clone() - self.d.clone()) / two.clone(),
            (self.a.clone() + self.c.clone()) / two.clone(),
            (self.b.clone() + self.d.clone()) / two.clone(),
            (self.c.clone() - self.a.clone()) / two,
        )
    }

    /// Real elements have the shape `p + q√2`, i.e. `c = 0` and `d = −b`.
    pub fn real_parts(&self) -> Option<(I, I)> {
        if self.c.is_zero() && self.d == -self.b.clone() {
            Some((self.a.clone(), self.b.clone()))
        } else {
            None
        }
    }

    /// `(re, im)` as doubles.
    pub fn to_complex(&self) -> (f64, f64) {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (a, b, c, d) = (self.a.as_f64(), self.b.as_f64(), self.c.as_f64(), self.d.as_f64());
        (a + (b - d) * h, c + (b + d) * h)
    }

    pub fn cast<J: RingInt>(&self) -> Option<ZOmega<J>> {
        let conv = |x: &I| J::from_i128(x.to_i128()?);
        Some(ZOmega::new(conv(&self.a)?, conv(&self.b)?, conv(&self.c)?, conv(&self.d)?))
    }

    /// Squared modulus, a real element of Z[√2].
    pub fn norm_sq(&self) -> (I, I) {
        (self.clone() * self.conj())
            .real_parts()
            .expect("z·z̄ is real")
    }
}

impl<I: RingInt> Add for ZOmega<I> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl<I: RingInt> Sub for ZOmega<I> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl<I: RingInt> Neg for ZOmega<I> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b, -self.c, -self.d)
    }
}

impl<I: RingInt> Mul for ZOmega<I> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        &self * &o
    }
}

impl<'x, I: RingInt> Mul<&'x ZOmega<I>> for &'x ZOmega<I> {
    type Output = ZOmega<I>;
    fn mul(self, o: &ZOmega<I>) -> ZOmega<I> {
        let x = [&self.a, &self.b, &self.c, &self.d];
        let y = [&o.a, &o.b, &o.c, &o.d];
        let mut acc: [I; 4] = [I::zero(), I::zero(), I::zero(), I::zero()];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                let p = (*xi).clone() * (*yj).clone();
                let k = i + j;
                if k < 4 {
                    acc[k] = acc[k].clone() + p;
                } else {
                    acc[k - 4] = acc[k - 4].clone() - p;
                }
            }
        }
        let [a, b, c, d] = acc;
        ZOmega::new(a, b, c, d)
    }
}

impl<I: RingInt + fmt::Display> fmt::Display for ZOmega<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}ω + {}ω² + {}ω³)", self.a, self.b, self.c, self.d)
    }
}

/// `z / √2^k` with `z ∈ Z[ω]`, kept reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingScalar<I> {
    pub num: ZOmega<I>,
    pub k: u32,
}

impl<I: RingInt> RingScalar<I> {
    pub fn new(num: ZOmega<I>, k: u32) -> Self {
        let mut s = Self { num, k };
        s.reduce();
        s
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.k = 0;
            return;
        }
        while self.k > 0 && self.num.divisible_by_sqrt2() {
            self.num = self.num.div_sqrt2();
            self.k -= 1;
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.k == 0 || !self.num.divisible_by_sqrt2()
    }

    fn aligned(&self, k: u32) -> ZOmega<I> {
        let mut z = self.num.clone();
        for _ in self.k..k {
            z = z.mul_sqrt2();
        }
        z
    }

    pub fn add(&self, o: &Self) -> Self {
        let k = self.k.max(o.k);
        Self::new(self.aligned(k) + o.aligned(k), k)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.num * &o.num, self.k + o.k)
    }

    pub fn conj(&self) -> Self {
        Self { num: self.num.conj(), k: self.k }
    }

    pub fn to_complex(&self) -> (f64, f64) {
        let (re, im) = self.num.to_complex();
        let s = 2f64.powf(-(self.k as f64) / 2.0);
        (re * s, im * s)
    }
}

/// `(p + q√2) / √2^l`, an element of Z[√2, 1/√2].
///
/// Components are stored as given so that representation-level quantities
/// (parities of the adjoint-action coefficients) stay observable. Equality and
/// hashing go through [`Real2::reduced`], so they compare values.
#[derive(Clone, Debug)]
pub struct Real2<I> {
    pub p: I,
    pub q: I,
    pub l: u32,
}

impl<I: RingInt> Real2<I> {
    pub fn raw(p: I, q: I, l: u32) -> Self {
        Self { p, q, l }
    }

    pub fn new(p: I, q: I, l: u32) -> Self {
        Self::raw(p, q, l).reduced()
    }

    pub fn from_int(v: i64) -> Self {
        Self::new(I::from_small(v), I::zero(), 0)
    }

    /// Canonical form: `l = 0` or `p` odd (zero maps to `l = 0`).
    pub fn reduced(&self) -> Self {
        let (mut p, mut q, mut l) = (self.p.clone(), self.q.clone(), self.l);
        if p.is_zero() && q.is_zero() {
            return Self::raw(p, q, 0);
        }
        let two = I::from_small(2);
        while l > 0 && p.is_even() {
            let np = q;
            q = p / two.clone();
            p = np;
            l -= 1;
        }
        Self::raw(p, q, l)
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        (self.p.as_f64() + self.q.as_f64() * std::f64::consts::SQRT_2) * 2f64.powf(-(self.l as f64) / 2.0)
    }
}

impl<I: RingInt> PartialEq for Real2<I> {
    fn eq(&self, other: &Self) -> bool {
        let (x, y) = (self.reduced(), other.reduced());
        x.p == y.p && x.q == y.q && x.l == y.l
    }
}

impl<I: RingInt> Eq for Real2<I> {}

impl<I: RingInt> std::hash::Hash for Real2<I> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        let r = self.reduced();
        r.p.hash(state);
        r.q.hash(state);
        r.l.hash(state);
    }
}
