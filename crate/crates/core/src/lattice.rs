//! Bianchi groups `SL2(O_d)` of class number one and their invariant height
//! function `𝒴`.
//!
//! For a point `P = z + r j`,
//! `𝒴(P) = κ · max r / (|cz + d|² + |c|² r²)` over coprime pairs `(c, d)` in
//! `O_d`, where `κ = covol(O_d)^{-1/2}` normalizes the cusp at `∞`.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

#[allow(unused_imports)]
use num_traits::Float;

use crate::group::{GroupElement, Point, C64};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LatticeError {
    UnsupportedDiscriminant(u32),
    WindowTooLarge { balls: usize, cap: usize },
    BelowDisjointnessThreshold(f64),
    InvalidWindow,
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UnsupportedDiscriminant(d) => {
                write!(
                    f,
                    "d = {d} is not one of the class-number-one fields 1, 2, 3, 7, 11"
                )
            }
            Self::WindowTooLarge { balls, cap } => {
                write!(
                    f,
                    "window meets more than {cap} horoballs (at least {balls})"
                )
            }
            Self::BelowDisjointnessThreshold(c) => {
                write!(f, "threshold {c} is below C0 = {C0}")
            }
            Self::InvalidWindow => f.write_str("window must have positive size and minimum height"),
        }
    }
}

/// Threshold above which the superlevel sets of `𝒴` are disjoint horoballs.
pub const C0: f64 = 1.074_569_931_823_542;

/// `x + y ω` in `O_d = ℤ[ω]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QuadInt {
    pub x: i64,
    pub y: i64,
}

impl QuadInt {
    pub const ZERO: QuadInt = QuadInt { x: 0, y: 0 };
    pub const ONE: QuadInt = QuadInt { x: 1, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }
}

impl Add for QuadInt {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for QuadInt {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for QuadInt {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// The ring of integers of `ℚ(√-d)`, with `ω² = tω − n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ring {
    d: u32,
    trace: i64,
    norm: i64,
    omega: C64,
    units: Vec<QuadInt>,
}

impl Ring {
    pub fn new(d: u32) -> Result<Self, LatticeError> {
        let root = (d as f64).sqrt();
        let (trace, norm, omega) = match d {
            1 | 2 => (0, d as i64, C64::new(0.0, root)),
            3 | 7 | 11 => (1, (1 + d as i64) / 4, C64::new(0.5, 0.5 * root)),
            _ => return Err(LatticeError::UnsupportedDiscriminant(d)),
        };
        let mut ring = Self {
            d,
            trace,
            norm,
            omega,
            units: Vec::new(),
        };
        let mut units = Vec::new();
        ring.for_each_in_disk(C64::new(0.0, 0.0), 1.0 + 1e-9, |q| {
            if ring.norm(q) == 1 {
                units.push(q);
            }
        });
        units.sort();
        ring.units = units;
        Ok(ring)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn omega(&self) -> C64 {
        self.omega
    }

    /// Area of `ℂ / O_d`.
    pub fn covolume(&self) -> f64 {
        self.omega.im
    }

    pub fn units(&self) -> &[QuadInt] {
        &self.units
    }

    pub fn to_complex(&self, q: QuadInt) -> C64 {
        C64::new(
            q.x as f64 + q.y as f64 * self.omega.re,
            q.y as f64 * self.omega.im,
        )
    }

    pub fn norm(&self, q: QuadInt) -> i64 {
        q.x * q.x + self.trace * q.x * q.y + self.norm * q.y * q.y
    }

    pub fn mul(&self, a: QuadInt, b: QuadInt) -> QuadInt {
        let yy = a.y * b.y;
        QuadInt::new(
            a.x * b.x - self.norm * yy,
            a.x * b.y + a.y * b.x + self.trace * yy,
        )
    }

    pub fn conj(&self, a: QuadInt) -> QuadInt {
        QuadInt::new(a.x + self.trace * a.y, -a.y)
    }

    pub fn is_unit(&self, a: QuadInt) -> bool {
        self.norm(a) == 1
    }

    /// A ring element closest to `z`.
    pub fn nearest(&self, z: C64) -> QuadInt {
        let v = z.im / self.omega.im;
        if self.trace == 0 {
            return QuadInt::new(round(z.re) as i64, round(v) as i64);
        }
        // rows of the lattice are Im ω apart; the nearest point lies in one
        // of the three rows around z
        let v0 = round(v) as i64;
        let mut best = QuadInt::ZERO;
        let mut best_d = f64::INFINITY;
        for row in v0 - 1..=v0 + 1 {
            let shift = row as f64 * self.omega.re;
            let u = round(z.re - shift);
            let dx = z.re - shift - u;
            let dy = z.im - row as f64 * self.omega.im;
            let dist = dx * dx + dy * dy;
            if dist < best_d {
                best = QuadInt::new(u as i64, row);
                best_d = dist;
            }
        }
        best
    }

    /// Euclidean division: `a = q b + r` with `N(r) < N(b)`.
    pub fn div_rem(&self, a: QuadInt, b: QuadInt) -> (QuadInt, QuadInt) {
        let q = self.nearest(self.to_complex(a) / self.to_complex(b));
        (q, a - self.mul(q, b))
    }

    /// `(g, s, t)` with `s a + t b = g = gcd(a, b)`.
    pub fn ext_gcd(&self, a: QuadInt, b: QuadInt) -> (QuadInt, QuadInt, QuadInt) {
        let (mut r0, mut r1) = (a, b);
        let (mut s0, mut s1) = (QuadInt::ONE, QuadInt::ZERO);
        let (mut t0, mut t1) = (QuadInt::ZERO, QuadInt::ONE);
        while !r1.is_zero() {
            let (q, r) = self.div_rem(r0, r1);
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s0 - self.mul(q, s1));
            (t0, t1) = (t1, t0 - self.mul(q, t1));
        }
        (r0, s0, t0)
    }

    pub fn coprime(&self, a: QuadInt, b: QuadInt) -> bool {
        self.is_unit(self.ext_gcd(a, b).0)
    }

    /// A matrix in `SL2(O_d)` with bottom row `(c, d)`, if the pair is coprime.
    pub fn complete(&self, c: QuadInt, d: QuadInt) -> Option<IntMatrix> {
        let (g, s, t) = self.ext_gcd(c, d);
        if !self.is_unit(g) {
            return None;
        }
        let inv = self.conj(g);
        Some(IntMatrix {
            a: self.mul(t, inv),
            b: -self.mul(s, inv),
            c,
            d,
        })
    }

    /// Calls `f` on every ring element within `radius` of `center`.
    pub fn for_each_in_disk(&self, center: C64, radius: f64, mut f: impl FnMut(QuadInt)) {
        let w = self.omega;
        let v_lo = ((center.im - radius) / w.im).ceil() as i64;
        let v_hi = ((center.im + radius) / w.im).floor() as i64;
        for v in v_lo..=v_hi {
            let dy = v as f64 * w.im - center.im;
            let half = radius * radius - dy * dy;
            if half < 0.0 {
                continue;
            }
            let half = half.sqrt();
            let shift = v as f64 * w.re;
            let u_lo = (center.re - half - shift).ceil() as i64;
            let u_hi = (center.re + half - shift).floor() as i64;
            for u in u_lo..=u_hi {
                f(QuadInt::new(u, v));
            }
        }
    }

    /// The representative of `a` modulo units that is smallest in `(x, y)` order.
    pub fn unit_canonical(&self, a: QuadInt) -> QuadInt {
        self.units
            .iter()
            .map(|&u| self.mul(u, a))
            .min()
            .unwrap_or(a)
    }

    pub fn matrix_mul(&self, p: &IntMatrix, q: &IntMatrix) -> IntMatrix {
        IntMatrix {
            a: self.mul(p.a, q.a) + self.mul(p.b, q.c),
            b: self.mul(p.a, q.b) + self.mul(p.b, q.d),
            c: self.mul(p.c, q.a) + self.mul(p.d, q.c),
            d: self.mul(p.c, q.b) + self.mul(p.d, q.d),
        }
    }

    pub fn det(&self, m: &IntMatrix) -> QuadInt {
        self.mul(m.a, m.d) - self.mul(m.b, m.c)
    }

    pub fn to_group(&self, m: &IntMatrix) -> GroupElement {
        let f = |q| self.to_complex(q);
        GroupElement::new(f(m.a), f(m.b), f(m.c), f(m.d))
            .expect("integral matrix has determinant one")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub a: QuadInt,
    pub b: QuadInt,
    pub c: QuadInt,
    pub d: QuadInt,
}

impl IntMatrix {
    pub const IDENTITY: IntMatrix = IntMatrix {
        a: QuadInt::ONE,
        b: QuadInt::ZERO,
        c: QuadInt::ZERO,
        d: QuadInt::ONE,
    };
}

/// Value of `𝒴` together with a maximizing bottom row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Height {
    pub value: f64,
    pub c: QuadInt,
    pub d: QuadInt,
}

/// Search window for [`BianchiContext::height_bruteforce`]: all `c` with
/// `|c| ≤ c_radius` and all `d` with `|cz + d| ≤ offset_radius`, measured in
/// the context's own coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchWindow {
    pub c_radius: f64,
    pub offset_radius: f64,
}

impl SearchWindow {
    pub fn uniform(radius: f64) -> Self {
        Self {
            c_radius: radius,
            offset_radius: radius,
        }
    }

    /// A window that certifies the maximum whenever `𝒴(P) ≥ lower` (with `κ`
    /// the normalization of the context).
    pub fn certifying(r: f64, kappa: f64, lower: f64) -> Self {
        let c_radius = (1.5 * kappa / (r * lower)).sqrt() + 1.0;
        let offset_radius = (1.5 * kappa * r / lower).sqrt() + 1.0;
        Self {
            c_radius,
            offset_radius,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BruteForce {
    pub height: Height,
    /// Every pair outside the window has value below this.
    pub outside_bound: f64,
}

impl BruteForce {
    /// False when a pair outside the window could still beat the maximum.
    pub fn certified(&self) -> bool {
        self.height.value > self.outside_bound
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cusp {
    Infinity,
    Finite(C64),
}

/// `H(η, δ)`: the open Euclidean ball of diameter `δ` tangent to the boundary
/// at `η`, or `{ht > δ}` for `η = ∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Horoball {
    pub base: Cusp,
    pub diameter: f64,
}

impl Horoball {
    pub fn contains(&self, p: &Point) -> bool {
        match self.base {
            Cusp::Infinity => p.r > self.diameter,
            Cusp::Finite(eta) => {
                let h = 0.5 * self.diameter;
                (p.z - eta).norm_sqr() + (p.r - h) * (p.r - h) < h * h
            }
        }
    }

    /// Whether the open balls are disjoint, allowing tangency up to `rel_tol`.
    pub fn disjoint(&self, o: &Horoball, rel_tol: f64) -> bool {
        match (self.base, o.base) {
            (Cusp::Infinity, Cusp::Infinity) => false,
            (Cusp::Infinity, Cusp::Finite(_)) => o.diameter <= self.diameter * (1.0 + rel_tol),
            (Cusp::Finite(_), Cusp::Infinity) => self.diameter <= o.diameter * (1.0 + rel_tol),
            (Cusp::Finite(a), Cusp::Finite(b)) => {
                (a - b).norm_sqr() >= self.diameter * o.diameter * (1.0 - rel_tol)
            }
        }
    }
}

/// A box `[x0, x1] × [y0, y1] × [r_min, r_max]` in upper half-space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HoroWindow {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub r: (f64, f64),
}

/// Most horoballs [`BianchiContext::horoballs`] will return.
pub const HOROBALL_CAP: usize = 1_000_000;

/// Cusp data of a class-number-one Bianchi group, possibly conjugated by
/// `g0 = n_w a_s`.
#[derive(Clone, Debug, PartialEq)]
pub struct BianchiContext {
    ring: Ring,
    kappa: f64,
    shift: C64,
    scale: f64,
    small_c: Vec<QuadInt>,
}

impl BianchiContext {
    pub fn new(d: u32) -> Result<Self, LatticeError> {
        let ring = Ring::new(d)?;
        let kappa = 1.0 / ring.covolume().sqrt();
        let mut small_c = Vec::new();
        ring.for_each_in_disk(
            C64::new(0.0, 0.0),
            (SMALL_C_NORM as f64).sqrt() + 1e-9,
            |q| {
                let n = ring.norm(q);
                if n > 1 && n <= SMALL_C_NORM && ring.unit_canonical(q) == q {
                    small_c.push(q);
                }
            },
        );
        small_c.sort_by_key(|&q| (ring.norm(q), q));
        Ok(Self {
            ring,
            kappa,
            shift: C64::new(0.0, 0.0),
            scale: 1.0,
            small_c,
        })
    }

    pub fn picard() -> Self {
        Self::new(1).expect("d = 1 is supported")
    }

    /// The context of `g0⁻¹ Γ g0` for `g0 = n_w a_s`, so that
    /// `𝒴_Γ(g0 g) = 𝒴_{g0⁻¹Γg0}(g)`.
    pub fn conjugated(&self, w: C64, s: f64) -> Self {
        let e = s.exp();
        Self {
            shift: self.shift + w * self.scale,
            scale: self.scale * e,
            ..self.clone()
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Cusp normalization of this context, `κ e^s` after conjugation.
    pub fn kappa(&self) -> f64 {
        self.kappa * self.scale
    }

    fn to_base(&self, p: &Point) -> Point {
        Point {
            z: self.shift + p.z * self.scale,
            r: p.r * self.scale,
        }
    }

    /// Normalized height of `P` seen from the cusp with bottom row `(c, d)`.
    pub fn pair_value(&self, c: QuadInt, d: QuadInt, p: &Point) -> f64 {
        let q = self.to_base(p);
        let (cc, dc) = (self.ring.to_complex(c), self.ring.to_complex(d));
        self.kappa * q.r / ((cc * q.z + dc).norm_sqr() + cc.norm_sqr() * q.r * q.r)
    }

    pub fn invariant_height(&self, g: &GroupElement) -> Height {
        self.height_at(&g.orbit_point())
    }

    /// `𝒴(P)` by reduction into the Ford domain.
    pub fn height_at(&self, p: &Point) -> Height {
        let p0 = self.to_base(p);
        let ring = &self.ring;
        let mut q = p0;
        let (mut c, mut d) = (QuadInt::ZERO, QuadInt::ONE);
        let (mut a, mut b) = (QuadInt::ONE, QuadInt::ZERO);
        for _ in 0..MAX_REDUCTION_STEPS {
            let lambda = ring.nearest(q.z);
            q.z -= ring.to_complex(lambda);
            a = a - ring.mul(lambda, c);
            b = b - ring.mul(lambda, d);
            let n = q.z.norm_sqr() + q.r * q.r;
            if n < 1.0 - IMPROVEMENT {
                q = Point {
                    z: -q.z.conj() / n,
                    r: q.r / n,
                };
                (a, b, c, d) = (-c, -d, a, b);
                continue;
            }
            match self.improving_pair(&q) {
                Some(gamma) => {
                    let m = ring.matrix_mul(&gamma, &IntMatrix { a, b, c, d });
                    q = ring.to_group(&gamma).act(&q);
                    (a, b, c, d) = (m.a, m.b, m.c, m.d);
                }
                None => break,
            }
        }
        let (cc, dc) = (ring.to_complex(c), ring.to_complex(d));
        let value = self.kappa * p0.r / ((cc * p0.z + dc).norm_sqr() + cc.norm_sqr() * p0.r * p0.r);
        Height { value, c, d }
    }

    /// `𝒴(P)` alone, read off the height of the reduced point without
    /// tracking the reducing matrix.
    pub fn height_value(&self, p: &Point) -> f64 {
        let ring = &self.ring;
        let mut q = self.to_base(p);
        for _ in 0..MAX_REDUCTION_STEPS {
            q.z -= ring.to_complex(ring.nearest(q.z));
            let n = q.z.norm_sqr() + q.r * q.r;
            if n < 1.0 - IMPROVEMENT {
                q = Point {
                    z: -q.z.conj() / n,
                    r: q.r / n,
                };
                continue;
            }
            match self.improving_pair(&q) {
                Some(gamma) => q = ring.to_group(&gamma).act(&q),
                None => break,
            }
        }
        self.kappa * q.r
    }

    /// A group element raising the height of `q`, using a non-unit `c`.
    fn improving_pair(&self, q: &Point) -> Option<IntMatrix> {
        let r2 = q.r * q.r;
        debug_assert!(
            r2 * SMALL_C_NORM as f64 >= 1.0,
            "reduction left the unit-sphere region"
        );
        for &c in &self.small_c {
            let nc = self.ring.norm(c) as f64;
            if nc * r2 >= 1.0 {
                break;
            }
            let cz = self.ring.to_complex(c) * q.z;
            let d = -self.ring.nearest(cz);
            if (cz + self.ring.to_complex(d)).norm_sqr() + nc * r2 < 1.0 - IMPROVEMENT {
                if let Some(m) = self.ring.complete(c, d) {
                    return Some(m);
                }
            }
        }
        None
    }

    /// Diameter of the horoball `{𝒴 > level}` of the cusp with bottom row
    /// `(h.c, h.d)`, pulled back through `g`; `None` for the cusp `∞`.
    pub fn level_diameter(&self, h: &Height, g: &GroupElement, level: f64) -> Option<f64> {
        let root = self.scale.sqrt();
        let c = self.ring.to_complex(h.c);
        let d = self.ring.to_complex(h.d);
        let (c0, d0) = (c * root, (c * self.shift + d) / root);
        let m = g.matrix();
        let c1 = c0 * m.a + d0 * m.c;
        let n = c1.norm_sqr();
        (n > 1e-300).then(|| self.kappa / (level * n))
    }

    /// Maximum over every pair `(c, d)` in `window`, coprime or not.
    pub fn height_bruteforce(&self, p: &Point, window: SearchWindow) -> BruteForce {
        let ring = &self.ring;
        let kappa = self.kappa();
        let mut best = Height {
            value: kappa * p.r,
            c: QuadInt::ZERO,
            d: QuadInt::ONE,
        };
        let c_max = window.c_radius / self.scale;
        ring.for_each_in_disk(C64::new(0.0, 0.0), c_max, |c| {
            if c.is_zero() {
                return;
            }
            let cc = ring.to_complex(c);
            let c_scaled = cc * self.scale;
            let centre = -(c_scaled * p.z + cc * self.shift);
            ring.for_each_in_disk(centre, window.offset_radius, |d| {
                let value = self.pair_value(c, d, p);
                if value > best.value {
                    best = Height { value, c, d };
                }
            });
        });
        let outside_bound = kappa
            * f64::max(
                1.0 / (window.c_radius * window.c_radius * p.r),
                p.r / (window.offset_radius * window.offset_radius),
            );
        BruteForce {
            height: best,
            outside_bound,
        }
    }

    /// All horoballs of `{𝒴 > threshold}` meeting `window`.
    pub fn horoballs(
        &self,
        threshold: f64,
        window: &HoroWindow,
    ) -> Result<Vec<Horoball>, LatticeError> {
        if threshold < C0 {
            return Err(LatticeError::BelowDisjointnessThreshold(threshold));
        }
        let (r_min, r_max) = window.r;
        if !(r_min > 0.0 && r_max >= r_min && window.x.1 >= window.x.0 && window.y.1 >= window.y.0)
        {
            return Err(LatticeError::InvalidWindow);
        }
        let ring = &self.ring;
        let kappa = self.kappa();
        let mut out = Vec::new();
        let top = threshold / kappa;
        if r_max > top {
            out.push(Horoball {
                base: Cusp::Infinity,
                diameter: top,
            });
        }
        let c_max = (kappa / (threshold * r_min)).sqrt() / self.scale;
        let centre = C64::new(
            0.5 * (window.x.0 + window.x.1),
            0.5 * (window.y.0 + window.y.1),
        );
        let half_diag = 0.5 * (window.x.1 - window.x.0).hypot(window.y.1 - window.y.0);
        let mut overflow = false;
        ring.for_each_in_disk(C64::new(0.0, 0.0), c_max, |c| {
            if overflow || c.is_zero() || ring.unit_canonical(c) != c {
                return;
            }
            let cc = ring.to_complex(c) * self.scale;
            let diameter = kappa / (threshold * cc.norm_sqr());
            if diameter < r_min {
                return;
            }
            // bases η = -d'/c' near the window: |c'η| ≤ |c'| (|centre| + reach)
            let reach = half_diag + 0.5 * diameter;
            let shift = ring.to_complex(c) * self.shift;
            ring.for_each_in_disk(-(cc * centre + shift), cc.norm() * reach, |d| {
                if overflow {
                    return;
                }
                let eta = -(ring.to_complex(d) + shift) / cc;
                let ball = Horoball {
                    base: Cusp::Finite(eta),
                    diameter,
                };
                if meets(&ball, window) && ring.coprime(c, d) {
                    out.push(ball);
                    overflow = out.len() > HOROBALL_CAP;
                }
            });
        });
        if overflow {
            return Err(LatticeError::WindowTooLarge {
                balls: out.len(),
                cap: HOROBALL_CAP,
            });
        }
        Ok(out)
    }

    /// Checks `𝒴(g a_s) ≤ max(e^s, e^{-s}) 𝒴(g)` and
    /// `𝒴(g n_z) ≤ (1 + |z|²) 𝒴(g)`, up to relative rounding `rel_tol`.
    pub fn translate_bounds_hold(
        &self,
        g: &GroupElement,
        s: f64,
        z: C64,
        rel_tol: f64,
    ) -> (bool, bool) {
        let y = self.invariant_height(g).value;
        let ya = self.invariant_height(&(*g * GroupElement::a(s))).value;
        let yn = self.invariant_height(&(*g * GroupElement::n(z))).value;
        let fa = s.abs().exp();
        let fn_ = 1.0 + z.norm_sqr();
        (
            ya <= fa * y * (1.0 + rel_tol),
            yn <= fn_ * y * (1.0 + rel_tol),
        )
    }
}

/// Reduction steps before giving up; heights grow geometrically, so this is
/// never reached for points representable in `f64`.
const MAX_REDUCTION_STEPS: usize = 10_000;
const IMPROVEMENT: f64 = 1e-13;
/// Non-unit `c` tried after the unit-sphere step; exceeds `1 / (1 − ρ²)` for
/// the covering radius `ρ` of every supported `O_d`.
const SMALL_C_NORM: i64 = 8;

fn meets(ball: &Horoball, w: &HoroWindow) -> bool {
    let Cusp::Finite(eta) = ball.base else {
        return w.r.1 > ball.diameter;
    };
    let dx = (w.x.0 - eta.re).max(0.0).max(eta.re - w.x.1);
    let dy = (w.y.0 - eta.im).max(0.0).max(eta.im - w.y.1);
    let dist2 = dx * dx + dy * dy;
    let hi = w.r.1.min(ball.diameter);
    if hi <= w.r.0 {
        return false;
    }
    let r = (0.5 * ball.diameter).clamp(w.r.0, hi);
    dist2 < r * (ball.diameter - r)
}

/// Round to nearest (ties to even) for `|x| < 2^51`, without a libm call.
fn round(x: f64) -> f64 {
    const MAGIC: f64 = 6_755_399_441_055_744.0;
    (x + MAGIC) - MAGIC
}

/// `e^{dist(n_z j, j)}`, the largest factor by which right translation by
/// `n_z` can raise a height.
pub fn translate_height_factor(z: C64) -> f64 {
    let m = z.norm_sqr();
    1.0 + 0.5 * m + (m * (1.0 + 0.25 * m)).sqrt()
}

/// `|c² z₁ z₂| ≥ 1`, the discreteness constraint on a pair of parabolics.
pub fn shimizu_check(c: C64, z1: C64, z2: C64) -> bool {
    (c * c * z1 * z2).norm() >= 1.0
}

/// A lattice in `SL2(C)` as seen by the height function.
#[derive(Clone, Debug, PartialEq)]
pub enum Lattice {
    Bianchi(BianchiContext),
    /// Cocompact lattices have `𝒴 ≡ 1`.
    Cocompact,
}

impl Lattice {
    pub fn height_at(&self, p: &Point) -> f64 {
        match self {
            Self::Bianchi(ctx) => ctx.height_value(p),
            Self::Cocompact => 1.0,
        }
    }

    pub fn height(&self, g: &GroupElement) -> f64 {
        self.height_at(&g.orbit_point())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units() {
        assert_eq!(Ring::new(1).unwrap().units().len(), 4);
        assert_eq!(Ring::new(3).unwrap().units().len(), 6);
        for d in [2, 7, 11] {
            assert_eq!(Ring::new(d).unwrap().units().len(), 2);
        }
        assert!(Ring::new(5).is_err());
    }

    #[test]
    fn c0_constant() {
        assert!((C0 - (2.0 / 3f64.sqrt()).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn euclidean_division_shrinks_norm() {
        for d in [1, 2, 3, 7, 11] {
            let ring = Ring::new(d).unwrap();
            for (ax, ay, bx, by) in [
                (17, 5, 3, 2),
                (-40, 13, 7, -3),
                (5, 5, 1, 1),
                (101, -33, 4, 9),
            ] {
                let (a, b) = (QuadInt::new(ax, ay), QuadInt::new(bx, by));
                let (q, r) = ring.div_rem(a, b);
                assert_eq!(ring.mul(q, b) + r, a);
                assert!(ring.norm(r) < ring.norm(b), "d={d}");
            }
        }
    }

    #[test]
    fn completion_has_determinant_one() {
        for d in [1, 2, 3, 7, 11] {
            let ring = Ring::new(d).unwrap();
            let (c, dd) = (QuadInt::new(5, 3), QuadInt::new(-2, 7));
            if let Some(m) = ring.complete(c, dd) {
                assert_eq!(ring.det(&m), QuadInt::ONE);
                assert_eq!((m.c, m.d), (c, dd));
            } else {
                assert!(!ring.is_unit(ring.ext_gcd(c, dd).0));
            }
        }
    }
}
