//! Averages of height test functions over expanding horosphere pieces,
//! their Haar limits, and fitted decay rates of the discrepancy.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::boundary::{BoundaryCurve, BoundaryError, Shape};
use crate::exec::{ordered_sum, Executor};
use crate::group::{GroupElement, Point, C64};
use crate::lattice::{BianchiContext, Lattice, LatticeError};
use crate::quadrature::{integrate, AdaptiveOptions, GaussLegendre, NotConverged};

/// Nodes per panel of every composite rule in this module.
const PANEL_ORDER: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub enum ExperimentError {
    InvalidConfig(String),
    Lattice(LatticeError),
    /// Haar integrals are implemented for the Picard group only.
    UnsupportedField(u32),
    /// Doubling the nodes up to `nodes` per axis never met the tolerance.
    NotConverged {
        nodes: usize,
        change: f64,
    },
    Quadrature(NotConverged),
    Boundary(BoundaryError),
    /// Every error sits below ten times its quadrature noise.
    Unresolvable,
    HypothesisViolated {
        delta1: f64,
        delta2: f64,
        big_t: f64,
    },
    DecompositionMismatch {
        direct: f64,
        decomposed: f64,
    },
}

impl fmt::Display for ExperimentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidConfig(m) => write!(f, "invalid configuration: {m}"),
            Self::Lattice(e) => write!(f, "{e}"),
            Self::UnsupportedField(d) => write!(f, "Haar integrals need d = 1, got d = {d}"),
            Self::NotConverged { nodes, change } => {
                write!(
                    f,
                    "average still moved by {change:e} at {nodes} nodes per axis"
                )
            }
            Self::Quadrature(e) => write!(f, "{e}"),
            Self::Boundary(e) => write!(f, "{e}"),
            Self::Unresolvable => f.write_str("rate unresolvable, increase precision"),
            Self::HypothesisViolated {
                delta1,
                delta2,
                big_t,
            } => {
                write!(
                    f,
                    "need e^-T ≤ δ1 ≤ δ2, got δ1 = {delta1}, δ2 = {delta2}, T = {big_t}"
                )
            }
            Self::DecompositionMismatch { direct, decomposed } => {
                write!(
                    f,
                    "decomposed average {decomposed} differs from direct {direct}"
                )
            }
        }
    }
}

impl From<BoundaryError> for ExperimentError {
    fn from(e: BoundaryError) -> Self {
        Self::Boundary(e)
    }
}

/// `C^∞` step from 0 at `x ≤ 0` to 1 at `x ≥ 1`.
fn smoothstep(x: f64) -> f64 {
    let psi = |x: f64| if x > 0.0 { (-1.0 / x).exp() } else { 0.0 };
    let (a, b) = (psi(x), psi(1.0 - x));
    a / (a + b)
}

/// `f = φ(𝒴)` for a profile `φ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TestFunction {
    /// `exp(1 − 1/(1 − u²))` with `u` the position in `(lo, hi)` rescaled
    /// to `(−1, 1)`; peak value 1 at the midpoint.
    HeightBump {
        lo: f64,
        hi: f64,
    },
    /// 0 below `from`, 1 above `from + width`.
    SmoothedIndicator {
        from: f64,
        width: f64,
    },
    Constant(f64),
}

impl TestFunction {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let ok = match *self {
            Self::HeightBump { lo, hi } => lo.is_finite() && hi.is_finite() && lo < hi,
            Self::SmoothedIndicator { from, width } => {
                from.is_finite() && width > 0.0 && width.is_finite()
            }
            Self::Constant(c) => c.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(ExperimentError::InvalidConfig(format!(
                "bad profile {self:?}"
            )))
        }
    }

    pub fn profile(&self, y: f64) -> f64 {
        match *self {
            Self::HeightBump { lo, hi } => {
                let u = (2.0 * y - lo - hi) / (hi - lo);
                if u.abs() < 1.0 {
                    (1.0 - 1.0 / (1.0 - u * u)).exp()
                } else {
                    0.0
                }
            }
            Self::SmoothedIndicator { from, width } => smoothstep((y - from) / width),
            Self::Constant(c) => c,
        }
    }

    /// Heights where the profile stops being smooth or constant.
    fn knots(&self) -> Vec<f64> {
        match *self {
            Self::HeightBump { lo, hi } => alloc::vec![lo, hi],
            Self::SmoothedIndicator { from, width } => alloc::vec![from, from + width],
            Self::Constant(_) => Vec::new(),
        }
    }

    /// Value of the profile above the last knot.
    fn tail_value(&self) -> f64 {
        match *self {
            Self::HeightBump { .. } => 0.0,
            Self::SmoothedIndicator { .. } => 1.0,
            Self::Constant(c) => c,
        }
    }

    pub fn description(&self) -> String {
        match *self {
            Self::HeightBump { lo, hi } => format!("height bump on ({lo}, {hi})"),
            Self::SmoothedIndicator { from, width } => {
                format!("smoothed indicator of Y > {from}, ramp width {width}")
            }
            Self::Constant(c) => format!("constant {c}"),
        }
    }

    /// `∫_h^∞ φ(y) y^{−3} dy`.
    fn cusp_moment(&self, h: f64, opts: &AdaptiveOptions) -> Result<f64, ExperimentError> {
        let mut breaks = alloc::vec![h];
        breaks.extend(self.knots().into_iter().filter(|&k| k > h));
        let top = *breaks.last().expect("non-empty");
        let body = if breaks.len() > 1 {
            integrate(|y| self.profile(y) / (y * y * y), &breaks, opts)
                .map_err(ExperimentError::Quadrature)?
                .value
        } else {
            0.0
        };
        Ok(body + self.tail_value() / (2.0 * top * top))
    }
}

/// Node counts for tensor quadrature over a horosphere piece at depth
/// `e^{−T}`: `resolution` nodes per unit of `e^T`-scaled length, never fewer
/// than `min_nodes` per axis; doubled until the average moves by at most
/// `rel_tol · |average| + abs_tol`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AverageOptions {
    pub min_nodes: usize,
    pub resolution: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_nodes: usize,
}

impl Default for AverageOptions {
    fn default() -> Self {
        Self {
            min_nodes: 64,
            resolution: 4.0,
            rel_tol: 1e-4,
            abs_tol: 1e-14,
            max_nodes: 1 << 15,
        }
    }
}

impl AverageOptions {
    fn validate(&self) -> Result<(), ExperimentError> {
        if self.min_nodes < PANEL_ORDER
            || !(self.resolution > 0.0)
            || self.max_nodes < self.min_nodes
        {
            return Err(ExperimentError::InvalidConfig(format!(
                "bad quadrature options {self:?}"
            )));
        }
        Ok(())
    }

    /// Nodes along an axis of length `extent` seen at depth `depth`,
    /// rounded up to an even number of panels.
    fn nodes(&self, extent: f64, depth: f64) -> usize {
        let want = (self.resolution * extent / depth)
            .ceil()
            .min(self.max_nodes as f64) as usize;
        want.max(self.min_nodes).next_multiple_of(2 * PANEL_ORDER)
    }
}

/// An accepted average with `noise = |A(N) − A(N/2)|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AverageEstimate {
    pub value: f64,
    pub noise: f64,
    /// Nodes per axis of the last rule evaluated.
    pub nodes: (usize, usize),
    /// Whether `noise` met the tolerance before the node cap.
    pub converged: bool,
}

impl AverageEstimate {
    fn accepted(self) -> Result<Self, ExperimentError> {
        if self.converged {
            Ok(self)
        } else {
            Err(ExperimentError::NotConverged {
                nodes: self.nodes.0.max(self.nodes.1),
                change: self.noise,
            })
        }
    }
}

fn composite(a: f64, b: f64, nodes: usize) -> Vec<(f64, f64)> {
    GaussLegendre::new(PANEL_ORDER).composite(a, b, nodes / PANEL_ORDER)
}

/// Tensor rule over the unit square `[0,1]²` applied to
/// `(x, y) ↦ φ(𝒴(p (o + x u + y v + depth·j)))`.
fn parallelogram_sum(
    lattice: &Lattice,
    f: &TestFunction,
    p: &GroupElement,
    frame: [C64; 3],
    depth: f64,
    nodes: (usize, usize),
    exec: &dyn Executor,
) -> f64 {
    let [origin, u, v] = frame;
    let xs = composite(0.0, 1.0, nodes.0);
    let ys = composite(0.0, 1.0, nodes.1);
    ordered_sum(exec, xs.len(), &|i| {
        let (x, wx) = xs[i];
        let row: f64 = ys
            .iter()
            .map(|&(y, wy)| {
                let q = p.act(&Point {
                    z: origin + u * x + v * y,
                    r: depth,
                });
                wy * f.profile(lattice.height_at(&q))
            })
            .sum();
        wx * row
    })
}

/// Polar rule over a disk, normalized by its area.
fn disk_sum(
    lattice: &Lattice,
    f: &TestFunction,
    p: &GroupElement,
    (radius, center): (f64, C64),
    depth: f64,
    nodes: (usize, usize),
    exec: &dyn Executor,
) -> f64 {
    let rs = composite(0.0, radius, nodes.0);
    let angles = nodes.1;
    let total = ordered_sum(exec, rs.len(), &|i| {
        let (rho, w) = rs[i];
        let ring: f64 = (0..angles)
            .map(|k| {
                let theta = 2.0 * PI * (k as f64 + 0.5) / angles as f64;
                let z = center + C64::from_polar(rho, theta);
                f.profile(lattice.height_at(&p.act(&Point { z, r: depth })))
            })
            .sum();
        w * rho * ring
    });
    total * 2.0 / (angles as f64 * radius * radius)
}

/// Doubles the node counts until two successive rules agree or the next
/// rule would exceed the cap.
fn refine(
    opts: &AverageOptions,
    start: (usize, usize),
    eval: impl Fn((usize, usize)) -> f64,
) -> Result<AverageEstimate, ExperimentError> {
    opts.validate()?;
    let mut nodes = start;
    let mut coarse = eval((nodes.0 / 2, nodes.1 / 2));
    loop {
        let fine = eval(nodes);
        let noise = (fine - coarse).abs();
        let converged = noise <= opts.rel_tol * fine.abs() + opts.abs_tol;
        if converged || nodes.0.max(nodes.1) * 2 > opts.max_nodes {
            return Ok(AverageEstimate {
                value: fine,
                noise,
                nodes,
                converged,
            });
        }
        coarse = fine;
        nodes = (nodes.0 * 2, nodes.1 * 2);
    }
}

/// Node counts the first refinement step of [`horospherical_average`] uses.
pub fn initial_nodes(piece: &BoundaryCurve, big_t: f64, opts: &AverageOptions) -> (usize, usize) {
    let depth = (-big_t).exp();
    match piece.shape {
        Shape::Rectangle { w, h, .. } => (opts.nodes(w, depth), opts.nodes(h, depth)),
        Shape::Disk { radius, .. } => (
            opts.nodes(radius, depth),
            opts.nodes(2.0 * PI * radius, depth),
        ),
    }
}

/// `m(B′)⁻¹ ∫_{B′} f(p n_z a_{−T}) dz` on fixed node counts.
pub fn horospherical_average_on(
    lattice: &Lattice,
    f: &TestFunction,
    p: &GroupElement,
    piece: &BoundaryCurve,
    big_t: f64,
    nodes: (usize, usize),
    exec: &dyn Executor,
) -> f64 {
    let depth = (-big_t).exp();
    match piece.shape {
        Shape::Rectangle { w, h, corner } => {
            let frame = [corner, C64::new(w, 0.0), C64::new(0.0, h)];
            parallelogram_sum(lattice, f, p, frame, depth, nodes, exec)
        }
        Shape::Disk { radius, center } => {
            disk_sum(lattice, f, p, (radius, center), depth, nodes, exec)
        }
    }
}

/// `m(B′)⁻¹ ∫_{B′} f(p n_z a_{−T}) dz`, refined by doubling; fails when
/// the node cap is reached first.
pub fn horospherical_average(
    lattice: &Lattice,
    f: &TestFunction,
    p: &GroupElement,
    piece: &BoundaryCurve,
    big_t: f64,
    opts: &AverageOptions,
    exec: &dyn Executor,
) -> Result<AverageEstimate, ExperimentError> {
    horospherical_estimate(lattice, f, p, piece, big_t, opts, exec)?.accepted()
}

/// Like [`horospherical_average`], but returns the last estimate with its
/// noise when the node cap is reached.
pub fn horospherical_estimate(
    lattice: &Lattice,
    f: &TestFunction,
    p: &GroupElement,
    piece: &BoundaryCurve,
    big_t: f64,
    opts: &AverageOptions,
    exec: &dyn Executor,
) -> Result<AverageEstimate, ExperimentError> {
    if !(big_t.is_finite()) {
        return Err(ExperimentError::InvalidConfig(format!("T = {big_t}")));
    }
    f.validate()?;
    refine(opts, initial_nodes(piece, big_t, opts), |n| {
        horospherical_average_on(lattice, f, p, piece, big_t, n, exec)
    })
}

/// `∫ f dμ` and the domain volume it was normalized by.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HaarIntegral {
    pub value: f64,
    pub volume: f64,
    /// Change against the rule with half the nodes.
    pub noise: f64,
}

/// Tensor Gauss–Legendre rule with `nodes` per axis over the Ford domain
/// `|Re z| ≤ 1/2, 0 ≤ Im z ≤ 1/2, |z|² + r² ≥ 1` of the Picard group, where
/// `𝒴 = κ r`. Returns `(∫ f r⁻³, ∫ r⁻³)`.
fn ford_domain_moments(
    ctx: &BianchiContext,
    f: &TestFunction,
    nodes: usize,
    opts: &AdaptiveOptions,
) -> Result<(f64, f64), ExperimentError> {
    let kappa = ctx.kappa();
    let rule = GaussLegendre::new(nodes);
    let xs: Vec<_> = rule.on(-0.5, 0.5).collect();
    let ys: Vec<_> = rule.on(0.0, 0.5).collect();
    let (mut mass, mut volume) = (0.0, 0.0);
    for &(x, wx) in &xs {
        for &(y, wy) in &ys {
            let floor = (1.0 - x * x - y * y).sqrt();
            // ∫_floor^∞ φ(κr) r⁻³ dr = κ² ∫_{κ floor}^∞ φ(s) s⁻³ ds
            mass += wx * wy * kappa * kappa * f.cusp_moment(kappa * floor, opts)?;
            volume += wx * wy / (2.0 * floor * floor);
        }
    }
    Ok((mass, volume))
}

/// `∫_{Γ\G} φ(𝒴) dμ` for the Picard group, normalized by the numerically
/// computed volume so that constants integrate to themselves.
pub fn haar_integral(
    ctx: &BianchiContext,
    f: &TestFunction,
    nodes: usize,
) -> Result<HaarIntegral, ExperimentError> {
    f.validate()?;
    let d = ctx.ring().d();
    if d != 1 {
        return Err(ExperimentError::UnsupportedField(d));
    }
    if nodes < 2 {
        return Err(ExperimentError::InvalidConfig(format!(
            "{nodes} Haar nodes"
        )));
    }
    let opts = AdaptiveOptions {
        rel_tol: 1e-12,
        abs_tol: 1e-16,
        max_evals: 200_000,
        initial_panels: 2,
    };
    let (mass, volume) = ford_domain_moments(ctx, f, nodes, &opts)?;
    let (half_mass, half_volume) = ford_domain_moments(ctx, f, nodes / 2, &opts)?;
    let value = mass / volume;
    Ok(HaarIntegral {
        value,
        volume,
        noise: (value - half_mass / half_volume).abs(),
    })
}

/// `(e^{−T}Y)^{2−s₁} + e^{−T}T⁴ + e^{−T}(1 + T³)Y`.
pub fn bound_expression(y: f64, big_t: f64, s1: f64) -> f64 {
    let e = (-big_t).exp();
    (e * y).powf(2.0 - s1) + e * big_t.powi(4) + e * (1.0 + big_t.powi(3)) * y
}

/// `C · bound_expression(𝒴(p), T, s₁)`.
pub fn theorem_bound(
    lattice: &Lattice,
    p: &GroupElement,
    big_t: f64,
    s1: f64,
    constant: f64,
) -> f64 {
    constant * bound_expression(lattice.height(p), big_t, s1)
}

/// `L²(1 + R²)(1 + |z₀|²)(1 + c⁻¹) / m(B′)`.
pub fn shape_constant(piece: &BoundaryCurve) -> f64 {
    let l = piece.length;
    let r = piece.diameter;
    l * l * (1.0 + r * r) * (1.0 + piece.z0().norm_sqr()) * (1.0 + 1.0 / piece.chord) / piece.area()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub d: u32,
    pub point: GroupElement,
    pub piece: BoundaryCurve,
    pub t_grid: Vec<f64>,
    pub test_function: TestFunction,
    pub average: AverageOptions,
    /// Gauss–Legendre nodes per axis for the Haar integral.
    pub haar_nodes: usize,
    pub s1: f64,
}

impl ExperimentConfig {
    /// Picard group, identity, unit square, bump on heights `(2, 4)`,
    /// `T = 0, 1, …, 8`.
    pub fn picard_default() -> Self {
        Self {
            d: 1,
            point: GroupElement::identity(),
            piece: BoundaryCurve::square(1.0).expect("unit square"),
            t_grid: (0..=8).map(f64::from).collect(),
            test_function: TestFunction::HeightBump { lo: 2.0, hi: 4.0 },
            average: AverageOptions::default(),
            haar_nodes: 32,
            s1: 1.0,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: &str| Err(ExperimentError::InvalidConfig(String::from(m)));
        if self.t_grid.is_empty() {
            return bad("empty T grid");
        }
        if self.t_grid.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return bad("T grid must be non-negative");
        }
        if self.t_grid.windows(2).any(|w| w[0] >= w[1]) {
            return bad("T grid must be increasing");
        }
        if !(1.0..=2.0).contains(&self.s1) {
            return bad("s1 must lie in [1, 2]");
        }
        if self.haar_nodes < PANEL_ORDER {
            return bad("Haar quadrature needs at least 8 nodes per axis");
        }
        self.average.validate()?;
        self.test_function.validate()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorRow {
    pub big_t: f64,
    pub average: f64,
    pub haar: f64,
    pub error: f64,
    /// Quadrature noise of the average plus that of the Haar integral.
    pub noise: f64,
    /// `bound_expression` at this `T`, without the fitted constant.
    pub bound: f64,
    pub nodes: (usize, usize),
    /// Whether the average met the refinement tolerance.
    pub converged: bool,
}

impl ErrorRow {
    pub fn resolved(&self) -> bool {
        self.error > 10.0 * self.noise
    }
}

/// Least-squares line `log e(T) ≈ a − bT`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayFit {
    pub exponent: f64,
    pub intercept: f64,
    /// Root-mean-square residual of `log e`.
    pub residual: f64,
    /// Indices of the first and last row used.
    pub window: (usize, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentResult {
    pub rows: Vec<ErrorRow>,
    pub haar: HaarIntegral,
    /// `max e(T) / bound(T)`, the smallest constant making the bound hold.
    pub fitted_constant: f64,
    pub fit: Result<DecayFit, ExperimentError>,
}

impl ExperimentResult {
    /// Largest noise over all rows.
    pub fn noise_floor(&self) -> f64 {
        self.rows.iter().map(|r| r.noise).fold(0.0, f64::max)
    }
}

/// Averages, errors and bounds along the `T` grid.
pub fn error_curve(
    config: &ExperimentConfig,
    exec: &dyn Executor,
) -> Result<ExperimentResult, ExperimentError> {
    config.validate()?;
    let ctx = BianchiContext::new(config.d).map_err(ExperimentError::Lattice)?;
    let haar = haar_integral(&ctx, &config.test_function, config.haar_nodes)?;
    let lattice = Lattice::Bianchi(ctx);
    let y = lattice.height(&config.point);
    let mut rows = Vec::with_capacity(config.t_grid.len());
    for &big_t in &config.t_grid {
        let avg = horospherical_estimate(
            &lattice,
            &config.test_function,
            &config.point,
            &config.piece,
            big_t,
            &config.average,
            exec,
        )?;
        rows.push(ErrorRow {
            big_t,
            average: avg.value,
            haar: haar.value,
            error: (avg.value - haar.value).abs(),
            noise: avg.noise + haar.noise,
            bound: bound_expression(y, big_t, config.s1),
            nodes: avg.nodes,
            converged: avg.converged,
        });
    }
    let fitted_constant = fitted_constant(&rows);
    let fit = fit_decay_exponent(&rows);
    Ok(ExperimentResult {
        rows,
        haar,
        fitted_constant,
        fit,
    })
}

pub fn fitted_constant(rows: &[ErrorRow]) -> f64 {
    rows.iter().map(|r| r.error / r.bound).fold(0.0, f64::max)
}

/// Fits `log e(T) = a − bT` over the longest run of consecutive rows whose
/// error exceeds ten times its noise (the earliest run on ties).
pub fn fit_decay_exponent(rows: &[ErrorRow]) -> Result<DecayFit, ExperimentError> {
    let mut best: Option<(usize, usize)> = None;
    let mut start = None;
    for i in 0..=rows.len() {
        match (i < rows.len() && rows[i].resolved(), start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                if best.is_none_or(|(a, b)| i - 1 - s > b - a) {
                    best = Some((s, i - 1));
                }
                start = None;
            }
            _ => {}
        }
    }
    let (lo, hi) = match best {
        Some((lo, hi)) if hi > lo => (lo, hi),
        _ => return Err(ExperimentError::Unresolvable),
    };
    let pts: Vec<(f64, f64)> = rows[lo..=hi]
        .iter()
        .map(|r| (r.big_t, r.error.ln()))
        .collect();
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let me = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mt) * (p.0 - mt)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - me)).sum();
    let slope = sxy / sxx;
    let intercept = me - slope * mt;
    let ss: f64 = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    Ok(DecayFit {
        exponent: -slope,
        intercept,
        residual: (ss / n).sqrt(),
        window: (lo, hi),
    })
}

/// Every error is at most twice the smallest error seen at earlier times.
pub fn monotone_trend(rows: &[ErrorRow]) -> bool {
    let mut least = f64::INFINITY;
    rows.iter().all(|r| {
        let ok = r.error <= 2.0 * least;
        least = least.min(r.error);
        ok
    })
}

/// Both sides of the rectangle decomposition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RectDecomposition {
    pub direct: AverageEstimate,
    pub decomposed: f64,
    /// Summed weighted noise of the pieces.
    pub decomposed_noise: f64,
    /// Number of pieces, `q + 1`.
    pub pieces: usize,
}

/// Average of `f(p n_z a_{−T})` over `z = x ω₁ + y ω₂`, `x ∈ [0, δ₁]`,
/// `y ∈ [0, δ₂]`, in the coordinates `(x, y)`.
pub fn rect_average(
    lattice: &Lattice,
    f: &TestFunction,
    p: &GroupElement,
    omega: (C64, C64),
    delta: (f64, f64),
    big_t: f64,
    opts: &AverageOptions,
    exec: &dyn Executor,
) -> Result<AverageEstimate, ExperimentError> {
    f.validate()?;
    let depth = (-big_t).exp();
    let (u, v) = (omega.0 * delta.0, omega.1 * delta.1);
    let start = (opts.nodes(u.norm(), depth), opts.nodes(v.norm(), depth));
    let origin = C64::new(0.0, 0.0);
    refine(opts, start, |n| {
        parallelogram_sum(lattice, f, p, [origin, u, v], depth, n, exec)
    })?
    .accepted()
}

/// The rectangle average computed directly and as the weighted sum of
/// `q + 1` pieces, `q = ⌊δ₂/δ₁⌋ − 1`: `q` squares based at
/// `p n_{jδ₁ω₂}` and a last strip of width `δ₂ − qδ₁ ∈ [δ₁, 2δ₁)`. Each
/// square is averaged as a unit square at `p n_{jδ₁ω₂} a_{log δ₁}` and
/// depth `T + log δ₁`.
pub fn rect_decomposition_average(
    lattice: &Lattice,
    f: &TestFunction,
    p: &GroupElement,
    omega: (C64, C64),
    delta: (f64, f64),
    big_t: f64,
    opts: &AverageOptions,
    exec: &dyn Executor,
) -> Result<RectDecomposition, ExperimentError> {
    let (d1, d2) = delta;
    if !((-big_t).exp() <= d1 && d1 <= d2 && d2.is_finite()) {
        return Err(ExperimentError::HypothesisViolated {
            delta1: d1,
            delta2: d2,
            big_t,
        });
    }
    let (w1, w2) = omega;
    if !((w1.conj() * w2).im.abs() > 0.0) {
        return Err(ExperimentError::InvalidConfig(format!(
            "{w1} and {w2} are not a basis"
        )));
    }
    let direct = rect_average(lattice, f, p, omega, delta, big_t, opts, exec)?;
    let q = (d2 / d1).floor() as usize - 1;
    let (mut decomposed, mut noise) = (0.0, 0.0);
    for j in 0..q {
        let base = *p * GroupElement::n(w2 * (j as f64 * d1)) * GroupElement::a(d1.ln());
        let a = rect_average(
            lattice,
            f,
            &base,
            omega,
            (1.0, 1.0),
            big_t + d1.ln(),
            opts,
            exec,
        )?;
        decomposed += d1 / d2 * a.value;
        noise += d1 / d2 * a.noise;
    }
    let rest = d2 - q as f64 * d1;
    let base = *p * GroupElement::n(w2 * (q as f64 * d1));
    let last = rect_average(lattice, f, &base, omega, (d1, rest), big_t, opts, exec)?;
    decomposed += rest / d2 * last.value;
    noise += rest / d2 * last.noise;
    let tolerance =
        10.0 * (direct.noise + noise) + opts.rel_tol * direct.value.abs() + opts.abs_tol;
    if (decomposed - direct.value).abs() > tolerance {
        return Err(ExperimentError::DecompositionMismatch {
            direct: direct.value,
            decomposed,
        });
    }
    Ok(RectDecomposition {
        direct,
        decomposed,
        decomposed_noise: noise,
        pieces: q + 1,
    })
}
