//! Boundary curves of horosphere pieces and line integrals of `𝒴` along
//! their translates.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::group::{GroupElement, Point, C64};
use crate::lattice::Lattice;
use crate::quadrature::{integrate, AdaptiveOptions, GaussLegendre, NotConverged};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundaryError {
    Degenerate,
    NegativeTime(f64),
    ExponentOutOfRange(f64),
    NotConverged(NotConverged),
}

impl fmt::Display for BoundaryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Degenerate => f.write_str("region has zero measure"),
            Self::NegativeTime(s) => write!(f, "s = {s} must be non-negative"),
            Self::ExponentOutOfRange(a) => write!(f, "α = {a} is outside [0, 1]"),
            Self::NotConverged(e) => {
                write!(f, "{e}; the curve likely passes under a tall horoball")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Shape {
    /// `[x0, x0 + w] × [y0, y0 + h]` with `corner = x0 + i y0`.
    Rectangle {
        w: f64,
        h: f64,
        corner: C64,
    },
    Disk {
        radius: f64,
        center: C64,
    },
}

/// Boundary of a compact region `B′ ⊂ ℂ`, traversed counterclockwise at
/// constant speed `L` over `t ∈ [0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryCurve {
    pub shape: Shape,
    pub length: f64,
    pub diameter: f64,
    /// Largest `c` with `|γ(t₁) − γ(t₂)| ≥ c |t₁ − t₂|` on the circle.
    pub chord: f64,
}

fn positive(x: f64) -> bool {
    x > 0.0 && x.is_finite()
}

impl BoundaryCurve {
    pub fn rectangle(w: f64, h: f64) -> Result<Self, BoundaryError> {
        Self::from_shape(Shape::Rectangle {
            w,
            h,
            corner: C64::new(0.0, 0.0),
        })
    }

    pub fn disk(radius: f64) -> Result<Self, BoundaryError> {
        Self::from_shape(Shape::Disk {
            radius,
            center: C64::new(0.0, 0.0),
        })
    }

    pub fn square(side: f64) -> Result<Self, BoundaryError> {
        Self::rectangle(side, side)
    }

    pub fn from_shape(shape: Shape) -> Result<Self, BoundaryError> {
        let (length, diameter) = match shape {
            Shape::Rectangle { w, h, .. } if positive(w) && positive(h) => {
                (2.0 * (w + h), w.hypot(h))
            }
            Shape::Disk { radius, .. } if positive(radius) => (2.0 * PI * radius, 2.0 * radius),
            _ => return Err(BoundaryError::Degenerate),
        };
        let mut curve = Self {
            shape,
            length,
            diameter,
            chord: 0.0,
        };
        curve.chord = curve.minimize_chord_ratio();
        Ok(curve)
    }

    /// The same curve moved by `offset`.
    pub fn translated(&self, offset: C64) -> Self {
        let shape = match self.shape {
            Shape::Rectangle { w, h, corner } => Shape::Rectangle {
                w,
                h,
                corner: corner + offset,
            },
            Shape::Disk { radius, center } => Shape::Disk {
                radius,
                center: center + offset,
            },
        };
        Self { shape, ..*self }
    }

    /// The image of the curve under `z ↦ factor · z`.
    pub fn scaled(&self, factor: f64) -> Result<Self, BoundaryError> {
        let shape = match self.shape {
            Shape::Rectangle { w, h, corner } => Shape::Rectangle {
                w: w * factor,
                h: h * factor,
                corner: corner * factor,
            },
            Shape::Disk { radius, center } => Shape::Disk {
                radius: radius * factor,
                center: center * factor,
            },
        };
        Self::from_shape(shape)
    }

    /// `γ(t)`, periodic with period 1.
    pub fn point(&self, t: f64) -> C64 {
        let t = t - t.floor();
        match self.shape {
            Shape::Rectangle { w, h, corner } => {
                let mut s = t * self.length;
                let legs = [
                    (w, C64::new(1.0, 0.0)),
                    (h, C64::new(0.0, 1.0)),
                    (w, C64::new(-1.0, 0.0)),
                ];
                let mut p = corner;
                for (len, dir) in legs {
                    if s <= len {
                        return p + dir * s;
                    }
                    p += dir * len;
                    s -= len;
                }
                p - C64::new(0.0, s)
            }
            Shape::Disk { radius, center } => {
                let (sin, cos) = (2.0 * PI * t).sin_cos();
                center + C64::new(cos, sin) * radius
            }
        }
    }

    /// `γ′(t)` away from corners.
    pub fn velocity(&self, t: f64) -> C64 {
        let t = t - t.floor();
        match self.shape {
            Shape::Rectangle { w, h, .. } => {
                let s = t * self.length;
                let dir = if s < w {
                    C64::new(1.0, 0.0)
                } else if s < w + h {
                    C64::new(0.0, 1.0)
                } else if s < 2.0 * w + h {
                    C64::new(-1.0, 0.0)
                } else {
                    C64::new(0.0, -1.0)
                };
                dir * self.length
            }
            Shape::Disk { .. } => {
                let (sin, cos) = (2.0 * PI * t).sin_cos();
                C64::new(-sin, cos) * self.length
            }
        }
    }

    /// Parameters of the corners, with `0` and `1`.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self.shape {
            Shape::Rectangle { w, h, .. } => {
                let l = self.length;
                vec![0.0, w / l, (w + h) / l, (2.0 * w + h) / l, 1.0]
            }
            Shape::Disk { .. } => vec![0.0, 1.0],
        }
    }

    pub fn area(&self) -> f64 {
        match self.shape {
            Shape::Rectangle { w, h, .. } => w * h,
            Shape::Disk { radius, .. } => PI * radius * radius,
        }
    }

    pub fn contains(&self, z: C64) -> bool {
        match self.shape {
            Shape::Rectangle { w, h, corner } => {
                let q = z - corner;
                (0.0..=w).contains(&q.re) && (0.0..=h).contains(&q.im)
            }
            Shape::Disk { radius, center } => (z - center).norm() <= radius,
        }
    }

    /// The point of `B′` closest to `0`.
    pub fn z0(&self) -> C64 {
        match self.shape {
            Shape::Rectangle { w, h, corner } => C64::new(
                0f64.clamp(corner.re, corner.re + w),
                0f64.clamp(corner.im, corner.im + h),
            ),
            Shape::Disk { radius, center } => {
                let n = center.norm();
                if n <= radius {
                    C64::new(0.0, 0.0)
                } else {
                    center * (1.0 - radius / n)
                }
            }
        }
    }

    fn chord_ratio(&self, t: f64, u: f64) -> f64 {
        (self.point(t + u) - self.point(t)).norm() / u
    }

    /// Grid scan of `|γ(t + u) − γ(t)| / u` over `t ∈ [0, 1)`,
    /// `u ∈ (0, 1/2]`, then compass search from the best few cells.
    fn minimize_chord_ratio(&self) -> f64 {
        const GRID: usize = 192;
        let step = 1.0 / GRID as f64;
        let mut cells = Vec::with_capacity(GRID * GRID / 2);
        for i in 0..GRID {
            for j in 1..=GRID / 2 {
                let (t, u) = (i as f64 * step, j as f64 * step);
                cells.push((self.chord_ratio(t, u), t, u));
            }
        }
        cells.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut best = self.length;
        for &(v, t, u) in cells.iter().take(8) {
            best = best.min(v).min(self.compass_search(t, u, step));
        }
        best
    }

    fn compass_search(&self, mut t: f64, mut u: f64, mut step: f64) -> f64 {
        let mut value = self.chord_ratio(t, u);
        while step > 1e-13 {
            let mut moved = false;
            for (dt, du) in [
                (step, 0.0),
                (-step, 0.0),
                (0.0, step),
                (0.0, -step),
                (step, -step),
                (-step, step),
            ] {
                let (t1, u1) = (t + dt, (u + du).min(0.5));
                if u1 <= 0.0 {
                    continue;
                }
                let v = self.chord_ratio(t1, u1);
                if v < value {
                    (t, u, value, moved) = (t1, u1, v, true);
                    break;
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        value
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryIntegral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    /// Largest `𝒴` met at a quadrature node, `0` if none was evaluated.
    pub max_height: f64,
    /// Diameter of the level-2 horoball of the cusp dominating the highest
    /// node, `None` when that cusp is `∞` or the lattice is cocompact.
    pub delta_max: Option<f64>,
}

/// Integrand of the boundary integral: the point `g (γ(t) + e^{-s} j)`.
fn lifted(g: &GroupElement, curve: &BoundaryCurve, s: f64, t: f64) -> Point {
    g.act(&Point {
        z: curve.point(t),
        r: (-s).exp(),
    })
}

fn check_args(s: f64, alpha: f64) -> Result<(), BoundaryError> {
    if !(s >= 0.0) {
        return Err(BoundaryError::NegativeTime(s));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(BoundaryError::ExponentOutOfRange(alpha));
    }
    Ok(())
}

/// `∫_{∂B′} 𝒴(g n_z a_{-s})^α |dz|`, adaptively refined to relative
/// accuracy `opts.rel_tol`.
pub fn boundary_height_integral(
    lattice: &Lattice,
    g: &GroupElement,
    curve: &BoundaryCurve,
    s: f64,
    alpha: f64,
    opts: &AdaptiveOptions,
) -> Result<BoundaryIntegral, BoundaryError> {
    check_args(s, alpha)?;
    if alpha == 0.0 {
        return Ok(BoundaryIntegral {
            value: curve.length,
            error: 0.0,
            evaluations: 0,
            max_height: 0.0,
            delta_max: None,
        });
    }
    let mut peak: (f64, f64) = (f64::NEG_INFINITY, 0.0);
    let integral = integrate(
        |t| {
            let y = lattice.height_at(&lifted(g, curve, s, t));
            if y > peak.0 {
                peak = (y, t);
            }
            y.powf(alpha)
        },
        &curve.breakpoints(),
        opts,
    )
    .map_err(BoundaryError::NotConverged)?;
    let delta_max = match lattice {
        Lattice::Bianchi(ctx) => {
            let p = lifted(g, curve, s, peak.1);
            let h = ctx.height_at(&p);
            ctx.level_diameter(&h, g, 2.0)
        }
        Lattice::Cocompact => None,
    };
    Ok(BoundaryIntegral {
        value: curve.length * integral.value,
        error: curve.length * integral.error,
        evaluations: integral.evaluations,
        max_height: peak.0,
        delta_max,
    })
}

/// Both sides of `∫𝒴^α ≤ L (∫𝒴 / L)^α`, computed on one composite
/// Gauss–Legendre rule so the discrete inequality is exact up to rounding.
pub fn jensen_sides(
    lattice: &Lattice,
    g: &GroupElement,
    curve: &BoundaryCurve,
    s: f64,
    alpha: f64,
    panels: usize,
) -> Result<(f64, f64), BoundaryError> {
    check_args(s, alpha)?;
    let rule = GaussLegendre::new(16);
    let (mut lhs, mut mean) = (0.0, 0.0);
    for w in curve.breakpoints().windows(2) {
        for (t, wt) in rule.composite(w[0], w[1], panels) {
            let y = lattice.height_at(&lifted(g, curve, s, t));
            lhs += wt * y.powf(alpha);
            mean += wt * y;
        }
    }
    let l = curve.length;
    Ok((l * lhs, l * mean.powf(alpha)))
}

/// `L(1+R²)(1+Y) + (L²/c)(1 + log((1+R)(1+Y)) + s)` with implied constant 1.
pub fn height_integral_bound(l: f64, c: f64, r: f64, y: f64, s: f64) -> f64 {
    l * (1.0 + r * r) * (1.0 + y) + l * l / c * (1.0 + ((1.0 + r) * (1.0 + y)).ln() + s)
}

/// `(L²(1+R²)/c)(s + Y^α)` with implied constant 1.
pub fn power_integral_bound(l: f64, c: f64, r: f64, y: f64, s: f64, alpha: f64) -> f64 {
    l * l * (1.0 + r * r) / c * (s + y.powf(alpha))
}
