//! `SL2(C)` acting on the upper half-space model of hyperbolic 3-space.
//!
//! Points are written `z + r j` with `z ∈ ℂ` and height `r > 0`.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

#[allow(unused_imports)]
use num_traits::Float;

use crate::rational::GaussianRational;

pub type C64 = Complex64;

/// Tolerance for `|det − 1|` when building a group element from floats.
pub const DET_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mat2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T> Mat2<T>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>,
{
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Self { a, b, c, d }
    }

    pub fn det(&self) -> T {
        self.a * self.d - self.b * self.c
    }

    /// Inverse of a determinant-one matrix.
    pub fn adjugate(&self) -> Self {
        Self::new(self.d, -self.b, -self.c, self.a)
    }
}

impl<T> Mul for Mat2<T>
where
    T: Copy + Add<Output = T> + Mul<Output = T>,
{
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

pub type ExactMatrix = Mat2<GaussianRational>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GeometryError {
    Determinant { det: C64 },
    NonPositiveHeight(f64),
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Determinant { det } => {
                write!(f, "determinant {det} is not within {DET_TOLERANCE:e} of 1")
            }
            Self::NonPositiveHeight(r) => write!(f, "height {r} is not positive"),
        }
    }
}

/// An element of `SL2(C)` in floating point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupElement(Mat2<C64>);

impl GroupElement {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self, GeometryError> {
        let m = Mat2::new(a, b, c, d);
        let det = m.det();
        if (det - 1.0).norm() < DET_TOLERANCE {
            Ok(Self(m))
        } else {
            Err(GeometryError::Determinant { det })
        }
    }

    pub fn identity() -> Self {
        Self(Mat2::new(
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
        ))
    }

    /// `n_z = [[1, z], [0, 1]]`.
    pub fn n(z: C64) -> Self {
        Self(Mat2::new(
            C64::new(1.0, 0.0),
            z,
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
        ))
    }

    /// `a_t = diag(e^{t/2}, e^{-t/2})`.
    pub fn a(t: f64) -> Self {
        let h = (0.5 * t).exp();
        Self(Mat2::new(
            C64::new(h, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(1.0 / h, 0.0),
        ))
    }

    /// The `SU(2)` element `[[u, v], [-v̄, ū]]`; `(u, v)` is normalized first.
    pub fn su2(u: C64, v: C64) -> Self {
        let s = (u.norm_sqr() + v.norm_sqr()).sqrt();
        let (u, v) = (u / s, v / s);
        Self(Mat2::new(u, v, -v.conj(), u.conj()))
    }

    /// `[[0, -1], [1, 0]]`.
    pub fn inversion() -> Self {
        let o = C64::new(0.0, 0.0);
        Self(Mat2::new(o, C64::new(-1.0, 0.0), C64::new(1.0, 0.0), o))
    }

    pub fn from_exact(m: &ExactMatrix) -> Result<Self, GeometryError> {
        Self::new(
            m.a.to_complex(),
            m.b.to_complex(),
            m.c.to_complex(),
            m.d.to_complex(),
        )
    }

    pub fn matrix(&self) -> &Mat2<C64> {
        &self.0
    }

    pub fn det(&self) -> C64 {
        self.0.det()
    }

    /// `|det − 1|`, which grows slowly over long products.
    pub fn det_drift(&self) -> f64 {
        (self.det() - 1.0).norm()
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.adjugate())
    }

    pub fn act(&self, p: &Point) -> Point {
        act_matrix(&self.0, p)
    }

    /// `g · j`.
    pub fn orbit_point(&self) -> Point {
        self.act(&Point::J)
    }

    /// Decomposes `g = n_z a_t k` with `k ∈ SU(2)`.
    pub fn iwasawa(&self) -> Iwasawa {
        let p = self.orbit_point();
        let t = p.r.ln();
        let k = (GroupElement::a(-t) * GroupElement::n(-p.z) * *self).0;
        let k = GroupElement::su2(k.a, k.b);
        Iwasawa { z: p.z, t, k }
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        let (x, y) = (&self.0, &o.0);
        [x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d]
            .iter()
            .map(|e| e.norm())
            .fold(0.0, f64::max)
    }
}

impl Mul for GroupElement {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self(self.0 * o.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Iwasawa {
    pub z: C64,
    pub t: f64,
    pub k: GroupElement,
}

impl Iwasawa {
    pub fn compose(&self) -> GroupElement {
        GroupElement::n(self.z) * GroupElement::a(self.t) * self.k
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub z: C64,
    pub r: f64,
}

impl Point {
    pub const J: Point = Point {
        z: C64 { re: 0.0, im: 0.0 },
        r: 1.0,
    };

    pub fn new(z: C64, r: f64) -> Result<Self, GeometryError> {
        if r > 0.0 && r.is_finite() {
            Ok(Self { z, r })
        } else {
            Err(GeometryError::NonPositiveHeight(r))
        }
    }

    /// Hyperbolic distance, evaluated through `sinh(d/2)` to stay accurate for
    /// nearby points.
    pub fn dist(&self, q: &Point) -> f64 {
        let dz = (self.z - q.z).norm_sqr();
        let dr = self.r - q.r;
        let s = ((dz + dr * dr) / (4.0 * self.r * q.r)).sqrt();
        2.0 * s.asinh()
    }
}

pub(crate) fn act_matrix(m: &Mat2<C64>, p: &Point) -> Point {
    let r2 = p.r * p.r;
    let czd = m.c * p.z + m.d;
    let denom = czd.norm_sqr() + m.c.norm_sqr() * r2;
    let num = (m.a * p.z + m.b) * czd.conj() + m.a * m.c.conj() * r2;
    Point {
        z: num / denom,
        r: p.r / denom,
    }
}

/// Density of Haar measure in the `(z, t)` coordinates of `n_z a_t k`.
pub fn haar_weight(t: f64) -> f64 {
    (-2.0 * t).exp()
}
