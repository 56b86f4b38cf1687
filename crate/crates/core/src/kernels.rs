//! Kernels of the integral representation of `f_v(-T)` for the irreducible
//! unitary representations `𝒫^{(n,ν)}`.
//!
//! With `α = (1 − n/2, 1 − ν/2, 1 + ν/2, 1 + n/2)` the function `f_v`
//! solves `∏ (d/dt − α_i) f = I` (four factors for `n > 0`, the first three
//! for `n = 0`). Every kernel is a combination of iterated integrals
//!
//! `J(a, b; β₁, …, β_k) = ∫_{a<u₁<…<u_k<b} e^{β₁u₁ + … + β_k u_k} du`,
//!
//! which equal `h^k e^{aB} · exp[x₀, …, x_k]` with `h = b − a`,
//! `x_j = h(β_{j+1} + … + β_k)` and `B = Σβ`. The divided difference is read
//! off the exponential of a bidiagonal matrix, so coincident exponents need
//! no special casing.

use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::group::C64;
use crate::quadrature::{integrate, AdaptiveOptions, NotConverged};

/// Largest `|Re ν|` still treated as purely imaginary.
const IMAGINARY_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KernelError {
    InvalidParams { n: u32, nu: C64 },
    InvalidRange { big_t: f64, t: f64 },
    StepUnderflow(f64),
    TailTruncation { estimate: f64, tolerance: f64 },
    Quadrature(NotConverged),
}

impl fmt::Display for KernelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidParams { n, nu } => {
                write!(
                    f,
                    "(n, ν) = ({n}, {nu}) is not a nontrivial unitary parameter"
                )
            }
            Self::InvalidRange { big_t, t } => {
                write!(f, "kernels need T ≥ 0 and t ≤ 0, got T = {big_t}, t = {t}")
            }
            Self::StepUnderflow(h) => write!(f, "step size {h:e} is too small"),
            Self::TailTruncation {
                estimate,
                tolerance,
            } => {
                write!(
                    f,
                    "tail beyond the truncation point is ~{estimate:e} > {tolerance:e}"
                )
            }
            Self::Quadrature(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepClass {
    /// `n > 0`, `ν ∈ iℝ`.
    Principal,
    /// `n = 0`, `ν ∈ iℝ≥0`.
    PrincipalSpherical,
    /// `n = 0`, `ν ∈ (0, 2)`.
    Complementary,
}

impl RepClass {
    pub fn label(self) -> &'static str {
        match self {
            Self::Principal => "i",
            Self::PrincipalSpherical => "ii",
            Self::Complementary => "iii",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RepParams {
    n: u32,
    nu: C64,
    class: RepClass,
}

impl RepParams {
    pub fn new(n: u32, nu: C64) -> Result<Self, KernelError> {
        let imaginary = nu.re.abs() <= IMAGINARY_TOLERANCE && nu.im.is_finite();
        let class = if n > 0 && imaginary {
            RepClass::Principal
        } else if n == 0 && imaginary && nu.im >= 0.0 {
            RepClass::PrincipalSpherical
        } else if n == 0 && nu.im == 0.0 && nu.re > 0.0 && nu.re < 2.0 {
            RepClass::Complementary
        } else {
            return Err(KernelError::InvalidParams { n, nu });
        };
        let nu = if imaginary { C64::new(0.0, nu.im) } else { nu };
        Ok(Self { n, nu, class })
    }

    /// `𝒫^{(n, iy)}`.
    pub fn principal(n: u32, y: f64) -> Result<Self, KernelError> {
        Self::new(n, C64::new(0.0, y))
    }

    /// `𝒫^{(0, ν)}` with `0 < ν < 2`.
    pub fn complementary(nu: f64) -> Result<Self, KernelError> {
        Self::new(0, C64::new(nu, 0.0))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn nu(&self) -> C64 {
        self.nu
    }

    pub fn class(&self) -> RepClass {
        self.class
    }

    /// `(α₁, α₂, α₃, α₄)`.
    pub fn alphas(&self) -> [C64; 4] {
        let h = 0.5 * self.n as f64;
        let v = 0.5 * self.nu;
        [
            C64::new(1.0 - h, 0.0),
            1.0 - v,
            1.0 + v,
            C64::new(1.0 + h, 0.0),
        ]
    }

    /// Roots of the characteristic polynomial of the ODE for `f_v`.
    pub fn roots(&self) -> Vec<C64> {
        let a = self.alphas();
        match self.class {
            RepClass::Principal => a.to_vec(),
            _ => a[..3].to_vec(),
        }
    }
}

/// Scalars `(λ₁, λ₂)` by which the Casimir elements act.
pub fn casimir_eigenvalues(p: &RepParams) -> (C64, C64) {
    let n = p.n as f64;
    let lambda1 = (n * n + p.nu * p.nu) / 4.0 - 1.0;
    let lambda2 = C64::new(0.0, 0.5 * n) * p.nu;
    (lambda1, lambda2)
}

type Mat4 = [[C64; 4]; 4];

fn mat_mul(a: &Mat4, b: &Mat4, k: usize) -> Mat4 {
    let mut out = [[C64::new(0.0, 0.0); 4]; 4];
    for i in 0..k {
        for j in i..k {
            out[i][j] = (i..=j).map(|l| a[i][l] * b[l][j]).sum();
        }
    }
    out
}

/// `exp[x₀, …, x_k]` for up to four nodes, as the corner entry of the
/// exponential of the bidiagonal matrix with diagonal `x` and unit
/// superdiagonal.
pub fn exp_divided_difference(x: &[C64]) -> C64 {
    let k = x.len();
    assert!((1..=4).contains(&k), "divided differences on 1 to 4 nodes");
    let mu = x.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let spread = x.iter().map(|z| (z - mu).norm()).fold(0.0, f64::max) + 1.0;
    let squarings = if spread > 0.25 {
        (spread / 0.25).log2().ceil() as i32
    } else {
        0
    };
    let scale = 0.5f64.powi(squarings);
    let mut a = [[C64::new(0.0, 0.0); 4]; 4];
    for i in 0..k {
        a[i][i] = (x[i] - mu) * scale;
        if i + 1 < k {
            a[i][i + 1] = C64::new(scale, 0.0);
        }
    }
    let mut e = [[C64::new(0.0, 0.0); 4]; 4];
    let mut term = e;
    for i in 0..k {
        e[i][i] = C64::new(1.0, 0.0);
        term[i][i] = C64::new(1.0, 0.0);
    }
    for j in 1..=18 {
        term = mat_mul(&term, &a, k);
        for row in term.iter_mut() {
            for v in row.iter_mut() {
                *v /= j as f64;
            }
        }
        for i in 0..k {
            for l in i..k {
                e[i][l] += term[i][l];
            }
        }
    }
    for _ in 0..squarings {
        e = mat_mul(&e, &e, k);
    }
    e[0][k - 1] * mu.exp()
}

/// `J(a, b; β₁, …, β_k)`; zero when `b ≤ a` and `k > 0`.
pub fn iterated_exp_integral(a: f64, b: f64, betas: &[C64]) -> C64 {
    let k = betas.len();
    if k == 0 {
        return C64::new(1.0, 0.0);
    }
    let h = b - a;
    if h <= 0.0 {
        return C64::new(0.0, 0.0);
    }
    let mut x = [C64::new(0.0, 0.0); 4];
    for j in (0..k).rev() {
        x[j] = x[j + 1] + betas[j] * h;
    }
    let total: C64 = betas.iter().sum();
    (total * a).exp() * h.powi(k as i32) * exp_divided_difference(&x[..=k])
}

/// Closed-form kernels `F(T, t)` and `F₀, F₁, F₂` for one representation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelSet {
    params: RepParams,
    alpha: [C64; 4],
    /// `β_j = α_j − α_{j+1}`.
    beta: [C64; 3],
}

fn check_range(big_t: f64, t: f64) -> Result<(), KernelError> {
    if big_t >= 0.0 && t <= 0.0 && big_t.is_finite() && t.is_finite() {
        Ok(())
    } else {
        Err(KernelError::InvalidRange { big_t, t })
    }
}

impl KernelSet {
    pub fn new(params: RepParams) -> Self {
        let alpha = params.alphas();
        let beta = [
            alpha[0] - alpha[1],
            alpha[1] - alpha[2],
            alpha[2] - alpha[3],
        ];
        Self {
            params,
            alpha,
            beta,
        }
    }

    pub fn params(&self) -> &RepParams {
        &self.params
    }

    /// `F(T, t)` for `T ≥ 0`, `t ≤ 0`.
    pub fn f(&self, big_t: f64, t: f64) -> Result<C64, KernelError> {
        check_range(big_t, t)?;
        let [a1, _, a3, a4] = self.alpha;
        let [b1, b2, b3] = self.beta;
        let j = iterated_exp_integral;
        Ok(match self.params.class {
            RepClass::Principal => {
                let m = t.max(-big_t);
                let inner = j(m, 0.0, &[b3, b2, b1])
                    + j(-big_t, m, &[b3]) * j(m, 0.0, &[b2, b1])
                    + j(-big_t, m, &[b3, b2]) * j(m, 0.0, &[b1]);
                -(-a1 * t - a4 * big_t).exp() * inner
            }
            _ if t <= -big_t => C64::new(0.0, 0.0),
            _ => -(-a1 * t - a3 * big_t).exp() * j(-big_t, t, &[b2, b1]),
        })
    }

    /// `F_i(T)` for `i ∈ {0, 1, 2}`.
    pub fn fi(&self, big_t: f64, i: usize) -> Result<C64, KernelError> {
        check_range(big_t, 0.0)?;
        assert!(i < 3, "F_i exists for i = 0, 1, 2");
        let [_, a2, a3, a4] = self.alpha;
        let [b1, b2, b3] = self.beta;
        let j = iterated_exp_integral;
        // f(−T) = e^{−top·T} (g(0) − g'(0)·J₁ + g''(0)·J₂) in the shifted data
        let (top, mid, j1, j2) = match self.params.class {
            RepClass::Principal => (a4, a3, j(-big_t, 0.0, &[b3]), j(-big_t, 0.0, &[b3, b2])),
            _ => (a3, a2, j(-big_t, 0.0, &[b2]), j(-big_t, 0.0, &[b2, b1])),
        };
        let e = (-top * big_t).exp();
        Ok(e * match i {
            0 => 1.0 + top * j1 + mid * top * j2,
            1 => -j1 - (mid + top) * j2,
            _ => j2,
        })
    }
}

/// Which kernel an envelope bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KernelArg {
    F(f64),
    Fi(usize),
}

/// The bound stated for each class, with implied constant 1.
pub fn kernel_bound_envelope(p: &RepParams, big_t: f64, arg: KernelArg) -> f64 {
    let n = p.n as f64;
    let nu = p.nu.norm();
    match (p.class, arg) {
        (RepClass::Principal, KernelArg::F(t)) => {
            let u = big_t + t;
            if u <= 0.0 {
                ((0.5 * n - 1.0) * u).exp() / (n * n)
            } else {
                (1.0 + u) * (-u).exp() / (n * n)
            }
        }
        (RepClass::Principal, KernelArg::Fi(2)) => (1.0 + big_t) * (-big_t).exp() / n,
        (RepClass::Principal, KernelArg::Fi(_)) => (1.0 + nu) * (1.0 + big_t) * (-big_t).exp(),
        (RepClass::PrincipalSpherical, KernelArg::F(t)) => {
            let u = (big_t + t).max(0.0);
            u * u * (-u).exp()
        }
        (RepClass::PrincipalSpherical, KernelArg::Fi(0)) => {
            (1.0 + nu * nu) * (1.0 + big_t * big_t) * (-big_t).exp()
        }
        (RepClass::PrincipalSpherical, KernelArg::Fi(_)) => (1.0 + big_t * big_t) * (-big_t).exp(),
        (RepClass::Complementary, KernelArg::F(t)) => {
            let u = big_t + t;
            if u <= 0.0 {
                0.0
            } else {
                ((0.5 * nu - 1.0) * u).exp() / (nu * nu)
            }
        }
        (RepClass::Complementary, KernelArg::Fi(_)) => ((0.5 * nu - 1.0) * big_t).exp() / (nu * nu),
    }
}

/// The envelope with the `min{T + t, ν⁻¹}²` refinement for the
/// complementary series; the stated envelope otherwise.
pub fn sharpened_envelope(p: &RepParams, big_t: f64, arg: KernelArg) -> f64 {
    if p.class != RepClass::Complementary {
        return kernel_bound_envelope(p, big_t, arg);
    }
    let nu = p.nu.re;
    match arg {
        KernelArg::F(t) => {
            let u = big_t + t;
            if u <= 0.0 {
                0.0
            } else {
                let m = u.min(1.0 / nu);
                m * m * ((0.5 * nu - 1.0) * u).exp()
            }
        }
        KernelArg::Fi(_) => {
            (1.0 + big_t * big_t).min(1.0 / (nu * nu)) * ((0.5 * nu - 1.0) * big_t).exp()
        }
    }
}

/// Suprema of `|kernel| / envelope` over a grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupRatios {
    pub f: f64,
    pub fi: [f64; 3],
}

fn ratio(value: f64, envelope: f64) -> f64 {
    if envelope > 0.0 {
        value / envelope
    } else if value <= 1e-300 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// `sup |F| / envelope` over the `points × points` grid of
/// `[0, t_max] × [−t_span, 0]`, and `sup |F_i| / envelope` over the `T` axis.
pub fn envelope_sup_ratios(
    kernels: &KernelSet,
    envelope: fn(&RepParams, f64, KernelArg) -> f64,
    t_max: f64,
    t_span: f64,
    points: usize,
) -> SupRatios {
    let p = kernels.params;
    let axis = |i: usize, len: f64| len * i as f64 / (points - 1) as f64;
    let mut out = SupRatios {
        f: 0.0,
        fi: [0.0; 3],
    };
    for i in 0..points {
        let big_t = axis(i, t_max);
        for (m, slot) in out.fi.iter_mut().enumerate() {
            let v = kernels.fi(big_t, m).expect("grid is in range").norm();
            *slot = slot.max(ratio(v, envelope(&p, big_t, KernelArg::Fi(m))));
        }
        for j in 0..points {
            let t = -axis(j, t_span);
            let v = kernels.f(big_t, t).expect("grid is in range").norm();
            out.f = out.f.max(ratio(v, envelope(&p, big_t, KernelArg::F(t))));
        }
    }
    out
}

/// Tolerances shared by the representation formula and the ODE oracle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleOptions {
    pub step: f64,
    pub quadrature: AdaptiveOptions,
    /// Largest accepted tail estimate, relative to `1 + |tail integral|`.
    pub tail_tol: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            step: 1e-4,
            quadrature: AdaptiveOptions {
                rel_tol: 1e-11,
                abs_tol: 1e-15,
                max_evals: 2_000_000,
                initial_panels: 4,
            },
            tail_tol: 1e-8,
        }
    }
}

fn integrate_complex(
    f: &dyn Fn(f64) -> C64,
    breaks: &[f64],
    opts: &AdaptiveOptions,
) -> Result<C64, KernelError> {
    let re = integrate(|t| f(t).re, breaks, opts).map_err(KernelError::Quadrature)?;
    let im = integrate(|t| f(t).im, breaks, opts).map_err(KernelError::Quadrature)?;
    Ok(C64::new(re.value, im.value))
}

/// Lower cut-off replacing `−∞` in principal-series integrals.
pub fn tail_cutoff(p: &RepParams, big_t: f64) -> f64 {
    -big_t - 40.0 / (0.5 * p.n as f64).max(1.0)
}

/// `e^{(n/2)t_c} |e^{(1−n/2)t_c} I(t_c)| · 2/n`, the size of the discarded
/// tail when the forcing decays like `e^t`.
fn tail_estimate(p: &RepParams, forcing: &dyn Fn(f64) -> C64, cut: f64) -> f64 {
    let n = p.n as f64;
    let a1 = 1.0 - 0.5 * n;
    (-a1 * cut).exp() * forcing(cut).norm() * 2.0 / n
}

fn check_tail(
    p: &RepParams,
    forcing: &dyn Fn(f64) -> C64,
    cut: f64,
    value: C64,
    tol: f64,
) -> Result<(), KernelError> {
    let estimate = tail_estimate(p, forcing, cut);
    let tolerance = tol * (1.0 + value.norm());
    if estimate > tolerance {
        return Err(KernelError::TailTruncation {
            estimate,
            tolerance,
        });
    }
    Ok(())
}

/// `∫_{−∞}^0 F(T, t) I(t) dt + Σ F_m(T) f^{(m)}(0)`.
pub fn representation_formula(
    kernels: &KernelSet,
    forcing: &dyn Fn(f64) -> C64,
    initial: [C64; 3],
    big_t: f64,
    opts: &OracleOptions,
) -> Result<C64, KernelError> {
    check_range(big_t, 0.0)?;
    let p = kernels.params;
    let integrand = |t: f64| kernels.f(big_t, t).expect("t ≤ 0") * forcing(t);
    let integral = match p.class {
        RepClass::Principal => {
            let cut = tail_cutoff(&p, big_t);
            let v = integrate_complex(&integrand, &[cut, -big_t, 0.0], &opts.quadrature)?;
            check_tail(&p, forcing, cut, v, opts.tail_tol)?;
            v
        }
        _ if big_t == 0.0 => C64::new(0.0, 0.0),
        _ => integrate_complex(&integrand, &[-big_t, 0.0], &opts.quadrature)?,
    };
    let mut total = integral;
    for (m, f0) in initial.iter().enumerate() {
        total += kernels.fi(big_t, m)? * f0;
    }
    Ok(total)
}

/// Coefficients `c` of `∏ (x − r) = x^k + c_{k−1} x^{k−1} + … + c₀`.
fn monic_coefficients(roots: &[C64]) -> Vec<C64> {
    let mut c = alloc::vec![C64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = alloc::vec![C64::new(0.0, 0.0); c.len() + 1];
        for (i, &ci) in c.iter().enumerate() {
            next[i + 1] += ci;
            next[i] -= ci * r;
        }
        c = next;
    }
    c.pop();
    c
}

/// `f(−T)` by classical Runge–Kutta integration of the ODE backwards from
/// `t = 0`. For `n > 0` the missing datum `f'''(0)` comes from
/// `g₁(0) = ∫_{−∞}^0 e^{(n/2−1)s} I(s) ds`.
pub fn ode_oracle(
    p: &RepParams,
    forcing: &dyn Fn(f64) -> C64,
    initial: [C64; 3],
    big_t: f64,
    opts: &OracleOptions,
) -> Result<C64, KernelError> {
    check_range(big_t, 0.0)?;
    let roots = p.roots();
    let coeffs = monic_coefficients(&roots);
    let order = roots.len();
    let mut y: Vec<C64> = initial.to_vec();
    if p.class == RepClass::Principal {
        let a1 = roots[0];
        let cut = tail_cutoff(p, big_t);
        let g1 = integrate_complex(
            &|s| (-a1 * s).exp() * forcing(s),
            &[cut, 0.0],
            &opts.quadrature,
        )?;
        check_tail(p, forcing, cut, g1, opts.tail_tol)?;
        // g₁ = (D − α₂)(D − α₃)(D − α₄) f at 0
        let rest = monic_coefficients(&roots[1..]);
        let lower: C64 = rest.iter().zip(&y).map(|(c, f)| c * f).sum();
        y.push(g1 - lower);
    }
    if big_t == 0.0 {
        return Ok(y[0]);
    }
    if !(opts.step > 1e-12) {
        return Err(KernelError::StepUnderflow(opts.step));
    }
    let steps = (big_t / opts.step).ceil();
    if steps > 1e9 {
        return Err(KernelError::StepUnderflow(big_t / steps));
    }
    let steps = steps as usize;
    let h = -big_t / steps as f64;
    let rhs = |t: f64, y: &[C64], out: &mut [C64]| {
        out[..order - 1].copy_from_slice(&y[1..order]);
        let lower: C64 = coeffs.iter().zip(y).map(|(c, f)| c * f).sum();
        out[order - 1] = forcing(t) - lower;
    };
    let zero = [C64::new(0.0, 0.0); 4];
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (zero, zero, zero, zero, zero);
    for i in 0..steps {
        let t = h * i as f64;
        rhs(t, &y, &mut k1[..order]);
        for j in 0..order {
            tmp[j] = y[j] + 0.5 * h * k1[j];
        }
        rhs(t + 0.5 * h, &tmp[..order], &mut k2[..order]);
        for j in 0..order {
            tmp[j] = y[j] + 0.5 * h * k2[j];
        }
        rhs(t + 0.5 * h, &tmp[..order], &mut k3[..order]);
        for j in 0..order {
            tmp[j] = y[j] + h * k3[j];
        }
        rhs(t + h, &tmp[..order], &mut k4[..order]);
        for j in 0..order {
            y[j] += (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]) * (h / 6.0);
        }
    }
    Ok(y[0])
}
