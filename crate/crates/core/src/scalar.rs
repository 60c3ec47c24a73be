//! Scalar abstraction used to build every geometric object generically.
//!
//! The same construction code (Clifford structure tensor, Christoffel
//! symbols, extended connection, Lagrangian densities) runs over plain
//! `f64`, over [`Grad4`] to get coordinate derivatives, and over
//! [`Dual`] to get partial derivatives with respect to seeded inputs
//! such as individual metric components. Nesting `Dual<Grad4>` yields
//! mixed partials like the coordinate divergence of a metric-variation
//! momentum.

use core::ops::{Add, Div, Mul, Neg, Sub};

pub trait Scalar:
    Copy
    + core::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(v: f64) -> Self;
    /// Underlying point value, stripping all derivative data.
    fn value(&self) -> f64;
    fn sqrt(self) -> Self;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn value(&self) -> f64 {
        *self
    }
    fn sqrt(self) -> Self {
        libm::sqrt(self)
    }
}

/// One-directional dual number over any scalar: `v + e·ε` with `ε² = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<T> {
    pub v: T,
    pub e: T,
}

impl<T: Scalar> Dual<T> {
    pub fn new(v: T, e: T) -> Self {
        Dual { v, e }
    }
    pub fn constant(v: T) -> Self {
        Dual { v, e: T::zero() }
    }
    /// The seeded variable itself: value `v`, unit perturbation.
    pub fn seeded(v: T) -> Self {
        Dual { v, e: T::one() }
    }
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        Dual::new(self.v + r.v, self.e + r.e)
    }
}
impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        Dual::new(self.v - r.v, self.e - r.e)
    }
}
impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        Dual::new(self.v * r.v, self.v * r.e + self.e * r.v)
    }
}
impl<T: Scalar> Div for Dual<T> {
    type Output = Self;
    fn div(self, r: Self) -> Self {
        let inv = T::one() / r.v;
        Dual::new(self.v * inv, (self.e - self.v * inv * r.e) * inv)
    }
}
impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual::new(-self.v, -self.e)
    }
}

impl<T: Scalar> Scalar for Dual<T> {
    fn zero() -> Self {
        Dual::constant(T::zero())
    }
    fn one() -> Self {
        Dual::constant(T::one())
    }
    fn from_f64(v: f64) -> Self {
        Dual::constant(T::from_f64(v))
    }
    fn value(&self) -> f64 {
        self.v.value()
    }
    fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        let half = T::from_f64(0.5);
        Dual::new(s, self.e * half / s)
    }
}

/// Forward-mode scalar carrying a value and its four coordinate
/// derivatives ∂/∂x^α. Generic over the component scalar so it nests:
/// `Grad4<Grad4>` carries two derivative levels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grad4<T = f64> {
    pub v: T,
    pub d: [T; 4],
}

impl<T: Scalar> Grad4<T> {
    pub fn new(v: T, d: [T; 4]) -> Self {
        Grad4 { v, d }
    }
    pub fn constant(v: T) -> Self {
        Grad4 { v, d: [T::zero(); 4] }
    }
}

impl<T: Scalar> Add for Grad4<T> {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        Grad4::new(
            self.v + r.v,
            core::array::from_fn(|a| self.d[a] + r.d[a]),
        )
    }
}
impl<T: Scalar> Sub for Grad4<T> {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        Grad4::new(
            self.v - r.v,
            core::array::from_fn(|a| self.d[a] - r.d[a]),
        )
    }
}
impl<T: Scalar> Mul for Grad4<T> {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        Grad4::new(
            self.v * r.v,
            core::array::from_fn(|a| self.d[a] * r.v + self.v * r.d[a]),
        )
    }
}
impl<T: Scalar> Div for Grad4<T> {
    type Output = Self;
    fn div(self, r: Self) -> Self {
        let inv = T::one() / r.v;
        let v = self.v * inv;
        Grad4::new(v, core::array::from_fn(|a| (self.d[a] - v * r.d[a]) * inv))
    }
}
impl<T: Scalar> Neg for Grad4<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Grad4::new(-self.v, core::array::from_fn(|a| -self.d[a]))
    }
}

impl<T: Scalar> Scalar for Grad4<T> {
    fn zero() -> Self {
        Grad4::constant(T::zero())
    }
    fn one() -> Self {
        Grad4::constant(T::one())
    }
    fn from_f64(v: f64) -> Self {
        Grad4::constant(T::from_f64(v))
    }
    fn value(&self) -> f64 {
        self.v.value()
    }
    fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        let c = T::from_f64(0.5) / s;
        Grad4::new(s, core::array::from_fn(|a| c * self.d[a]))
    }
}

/// Truncated second-order Taylor jet in the four coordinates: value,
/// gradient, and symmetric Hessian. This is the carrier for metric
/// component expressions, so that g, ∂g and ∂²g come out of a single
/// evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet2 {
    pub v: f64,
    pub d: [f64; 4],
    pub h: [[f64; 4]; 4],
}

impl Jet2 {
    pub fn constant(v: f64) -> Self {
        Jet2 {
            v,
            d: [0.0; 4],
            h: [[0.0; 4]; 4],
        }
    }

    /// The coordinate x^k at value `v`.
    pub fn variable(k: usize, v: f64) -> Self {
        let mut d = [0.0; 4];
        d[k] = 1.0;
        Jet2 {
            v,
            d,
            h: [[0.0; 4]; 4],
        }
    }

    /// Chain rule for a univariate function with derivatives (f, f', f'')
    /// at the jet's value.
    pub fn compose(self, f: f64, df: f64, ddf: f64) -> Self {
        let mut h = [[0.0; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                h[a][b] = ddf * self.d[a] * self.d[b] + df * self.h[a][b];
            }
        }
        let mut d = [0.0; 4];
        for a in 0..4 {
            d[a] = df * self.d[a];
        }
        Jet2 { v: f, d, h }
    }

    pub fn recip(self) -> Self {
        let inv = 1.0 / self.v;
        self.compose(inv, -inv * inv, 2.0 * inv * inv * inv)
    }

    pub fn powi(self, n: i64) -> Self {
        // integer powers keep negative bases meaningful
        if n == 0 {
            return Jet2::constant(1.0);
        }
        let u = self.v;
        let nn = n as f64;
        let f = powi_f64(u, n);
        let df = nn * powi_f64(u, n - 1);
        let ddf = nn * (nn - 1.0) * powi_f64(u, n - 2);
        self.compose(f, df, ddf)
    }
}

fn powi_f64(base: f64, n: i64) -> f64 {
    if n < 0 {
        1.0 / powi_f64(base, -n)
    } else {
        let mut acc = 1.0;
        for _ in 0..n {
            acc *= base;
        }
        acc
    }
}

impl Add for Jet2 {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        let mut out = self;
        out.v += r.v;
        for a in 0..4 {
            out.d[a] += r.d[a];
            for b in 0..4 {
                out.h[a][b] += r.h[a][b];
            }
        }
        out
    }
}
impl Sub for Jet2 {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        let mut out = self;
        out.v -= r.v;
        for a in 0..4 {
            out.d[a] -= r.d[a];
            for b in 0..4 {
                out.h[a][b] -= r.h[a][b];
            }
        }
        out
    }
}
impl Mul for Jet2 {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        let mut h = [[0.0; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                h[a][b] = self.h[a][b] * r.v
                    + self.d[a] * r.d[b]
                    + self.d[b] * r.d[a]
                    + self.v * r.h[a][b];
            }
        }
        let mut d = [0.0; 4];
        for a in 0..4 {
            d[a] = self.d[a] * r.v + self.v * r.d[a];
        }
        Jet2 {
            v: self.v * r.v,
            d,
            h,
        }
    }
}
impl Div for Jet2 {
    type Output = Self;
    fn div(self, r: Self) -> Self {
        self * r.recip()
    }
}
impl Neg for Jet2 {
    type Output = Self;
    fn neg(self) -> Self {
        self.compose(-self.v, -1.0, 0.0)
    }
}

impl Scalar for Jet2 {
    fn zero() -> Self {
        Jet2::constant(0.0)
    }
    fn one() -> Self {
        Jet2::constant(1.0)
    }
    fn from_f64(v: f64) -> Self {
        Jet2::constant(v)
    }
    fn value(&self) -> f64 {
        self.v
    }
    fn sqrt(self) -> Self {
        let s = libm::sqrt(self.v);
        self.compose(s, 0.5 / s, -0.25 / (s * self.v))
    }
}
