//! The subcommands, each returning a [`Report`].

use horolab_core::boundary::{
    boundary_height_integral, height_integral_bound, power_integral_bound, BoundaryCurve,
};
use horolab_core::experiment::{error_curve, monotone_trend, ExperimentConfig};
use horolab_core::kernels::{
    casimir_eigenvalues, envelope_sup_ratios, kernel_bound_envelope, ode_oracle,
    representation_formula, sharpened_envelope, KernelArg, KernelSet, OracleOptions, RepParams,
    SupRatios,
};
use horolab_core::lattice::{BianchiContext, Lattice, QuadInt};
use horolab_core::quadrature::AdaptiveOptions;
use horolab_core::uea::{
    casimir_1, casimir_2, commutators_with_basis, verify_identity_cubic, verify_identity_quartic,
};
use horolab_core::C64;
use log::info;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::config::{BoundaryFile, KernelFile};
use crate::exec::PoolExecutor;
use crate::grammar::parse_piece;
use crate::output::{num, Report, Table};
use crate::ConfigError;

/// Failure of a subcommand: bad input (exit 2) or a failed run (exit 1).
#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Run(String),
}

fn context(d: u32) -> Result<BianchiContext, ConfigError> {
    BianchiContext::new(d).map_err(|e| ConfigError::Invalid(e.to_string()))
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn verify_uea() -> Report {
    let quartic = verify_identity_quartic();
    let cubic = verify_identity_cubic();
    let mut central = true;
    let mut table = Table::new(&["identity", "holds", "residual_terms"]);
    table.push(vec![
        "quartic".into(),
        quartic.holds.to_string(),
        quartic.residual.terms().count().to_string(),
    ]);
    table.push(vec![
        "cubic".into(),
        cubic.holds.to_string(),
        cubic.residual.terms().count().to_string(),
    ]);
    for (name, omega) in [("omega1", casimir_1()), ("omega2", casimir_2())] {
        for (x, c) in commutators_with_basis(&omega) {
            central &= c.is_zero();
            table.push(vec![
                format!("[{name},{}]", x.name()),
                c.is_zero().to_string(),
                c.terms().count().to_string(),
            ]);
        }
    }
    let line = format!(
        "{} quartic, {} cubic, {} centrality",
        pass(quartic.holds),
        pass(cubic.holds),
        pass(central)
    );
    Report {
        lines: vec![line],
        table,
        summary: json!({ "quartic": quartic.holds, "cubic": cubic.holds, "centrality": central }),
        passed: quartic.holds && cubic.holds && central,
    }
}

fn quad_int(ctx: &BianchiContext, q: QuadInt) -> String {
    let z = ctx.ring().to_complex(q);
    format!("{}{:+}i", num(z.re), z.im)
}

/// `count` points `x + iy + rj` with `|x|, |y| ≤ 1/2` and `ln r` uniform in
/// `[−6, 6]`.
pub fn random_points(count: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let (x, y): (f64, f64) = (rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
            let r = rng.random_range(-6.0f64..6.0).exp();
            format!("point {x:?} {y:?} {r:?}")
        })
        .collect()
}

pub fn height(d: u32, points: &[String]) -> Result<Report, CommandError> {
    if points.is_empty() {
        return Err(ConfigError::Invalid("no points given".into()).into());
    }
    let ctx = context(d)?;
    let parsed = crate::config::parse_points(points)?;
    let mut table = Table::new(&["point", "x", "y", "r", "height", "c", "d"]);
    let mut lines = Vec::new();
    for (text, g) in points.iter().zip(&parsed) {
        let p = g.orbit_point();
        let h = ctx.height_at(&p);
        lines.push(num(h.value));
        table.push(vec![
            text.clone(),
            num(p.z.re),
            num(p.z.im),
            num(p.r),
            num(h.value),
            quad_int(&ctx, h.c),
            quad_int(&ctx, h.d),
        ]);
    }
    Ok(Report {
        lines,
        table,
        summary: json!({ "d": d, "points": points.len() }),
        passed: true,
    })
}

struct BoundaryRow {
    point: usize,
    piece: usize,
    s: f64,
    value: f64,
    error: f64,
    max_height: f64,
    delta_max: Option<f64>,
    bound: f64,
    power_bound: f64,
}

pub fn boundary_integral(
    file: &BoundaryFile,
    tolerance_scale: f64,
    pool: &PoolExecutor,
) -> Result<Report, CommandError> {
    let ctx = context(file.d.unwrap_or(1))?;
    let lattice = Lattice::Bianchi(ctx);
    let points = crate::config::parse_points(&file.points)?;
    let pieces: Vec<BoundaryCurve> = file
        .pieces
        .iter()
        .map(|p| parse_piece(p))
        .collect::<Result<_, _>>()?;
    if points.is_empty() || pieces.is_empty() || file.s.is_empty() {
        return Err(ConfigError::Invalid("points, pieces and s must be non-empty".into()).into());
    }
    let alpha = file.alpha.unwrap_or(1.0);
    let opts = AdaptiveOptions {
        rel_tol: file.rel_tol.unwrap_or(1e-4) * tolerance_scale,
        abs_tol: 0.0,
        max_evals: file.max_evals.unwrap_or(20_000_000),
        initial_panels: 4,
    };
    let mut jobs = Vec::new();
    for i in 0..points.len() {
        for j in 0..pieces.len() {
            for &s in &file.s {
                jobs.push((i, j, s));
            }
        }
    }
    let results: Vec<Result<BoundaryRow, String>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(i, j, s)| {
                let (g, c) = (&points[i], &pieces[j]);
                let y = lattice.height(g);
                let r = boundary_height_integral(&lattice, g, c, s, alpha, &opts).map_err(|e| {
                    format!("{} / {} / s = {s}: {e}", file.points[i], file.pieces[j])
                })?;
                Ok(BoundaryRow {
                    point: i,
                    piece: j,
                    s,
                    value: r.value,
                    error: r.error,
                    max_height: r.max_height,
                    delta_max: r.delta_max,
                    bound: height_integral_bound(c.length, c.chord, c.diameter, y, s),
                    power_bound: power_integral_bound(c.length, c.chord, c.diameter, y, s, alpha),
                })
            })
            .collect()
    });
    let mut table = Table::new(&[
        "point",
        "piece",
        "s",
        "alpha",
        "integral",
        "error",
        "max_height",
        "delta_max",
        "bound",
        "ratio",
        "power_bound",
    ]);
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(r) => {
                worst = worst.max(r.value / r.bound);
                table.push(vec![
                    file.points[r.point].clone(),
                    file.pieces[r.piece].clone(),
                    num(r.s),
                    num(alpha),
                    num(r.value),
                    num(r.error),
                    num(r.max_height),
                    r.delta_max.map(num).unwrap_or_default(),
                    num(r.bound),
                    num(r.value / r.bound),
                    num(r.power_bound),
                ]);
            }
            Err(e) => failures.push(e),
        }
    }
    let mut lines = vec![format!(
        "{} integrals, max integral/bound = {worst:.6e}",
        table.rows.len()
    )];
    lines.extend(failures.iter().map(|e| format!("FAIL {e}")));
    Ok(Report {
        lines,
        table,
        summary: json!({ "integrals": jobs.len(), "failures": failures, "max_ratio": worst }),
        passed: failures.is_empty(),
    })
}

/// Forcing used to check the representation formula: decays like `e^t`.
pub fn check_forcing(t: f64) -> C64 {
    t.exp() * C64::new((2.0 * t).cos(), 0.5 * t.sin())
}

pub const CHECK_INITIAL: [C64; 3] = [C64::new(1.0, 0.0), C64::new(-0.5, 0.25), C64::new(0.3, 0.0)];

fn ratios_json(r: &SupRatios) -> serde_json::Value {
    json!({ "F": r.f, "F0": r.fi[0], "F1": r.fi[1], "F2": r.fi[2] })
}

fn ratio_change(a: &SupRatios, b: &SupRatios) -> f64 {
    let rel = |x: f64, y: f64| {
        if x == y {
            0.0
        } else {
            (x - y).abs() / x.abs().max(y.abs())
        }
    };
    (0..3)
        .map(|i| rel(a.fi[i], b.fi[i]))
        .fold(rel(a.f, b.f), f64::max)
}

pub fn kernels(file: &KernelFile, tolerance_scale: f64) -> Result<Report, CommandError> {
    let params =
        RepParams::new(file.n, file.nu()).map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let ks = KernelSet::new(params);
    let (t_max, t_span) = (file.t_max.unwrap_or(8.0), file.t_span.unwrap_or(16.0));
    let grid = file.grid.unwrap_or(200);
    if grid < 2 || !(t_max > 0.0) || !(t_span > 0.0) {
        return Err(ConfigError::Invalid(
            "grid needs at least 2 points and positive extents".into(),
        )
        .into());
    }
    let stated = envelope_sup_ratios(&ks, kernel_bound_envelope, t_max, t_span, grid);
    let stated2 = envelope_sup_ratios(&ks, kernel_bound_envelope, t_max, t_span, 2 * grid);
    let sharp = envelope_sup_ratios(&ks, sharpened_envelope, t_max, t_span, grid);
    let change = ratio_change(&stated, &stated2);

    let opts = OracleOptions::default();
    let tol = 1e-6 * tolerance_scale;
    let mut table = Table::new(&[
        "T",
        "formula_re",
        "formula_im",
        "ode_re",
        "ode_im",
        "rel_diff",
    ]);
    let mut ok = stated.f.is_finite() && stated.fi.iter().all(|v| v.is_finite());
    let mut lines = Vec::new();
    for &big_t in file.t_check.as_deref().unwrap_or(&[0.5, 1.0, 2.0, 4.0]) {
        let formula = representation_formula(&ks, &check_forcing, CHECK_INITIAL, big_t, &opts)
            .map_err(|e| CommandError::Run(format!("T = {big_t}: {e}")))?;
        let ode = ode_oracle(&params, &check_forcing, CHECK_INITIAL, big_t, &opts)
            .map_err(|e| CommandError::Run(format!("T = {big_t}: {e}")))?;
        let rel = (formula - ode).norm() / ode.norm().max(1e-300);
        ok &= rel <= tol;
        lines.push(format!(
            "{} T = {big_t}: formula vs ODE relative difference {rel:.3e}",
            pass(rel <= tol)
        ));
        table.push(vec![
            num(big_t),
            num(formula.re),
            num(formula.im),
            num(ode.re),
            num(ode.im),
            num(rel),
        ]);
    }
    lines.push(format!(
        "sup |F|/envelope = {:.4e}, sup |F_i|/envelope = {:.4e} {:.4e} {:.4e}, change under doubling {change:.2e}",
        stated.f, stated.fi[0], stated.fi[1], stated.fi[2]
    ));
    let (l1, l2) = casimir_eigenvalues(&params);
    let summary = json!({
        "class": params.class().label(),
        "n": params.n(),
        "nu": [params.nu().re, params.nu().im],
        "lambda1": [l1.re, l1.im],
        "lambda2": [l2.re, l2.im],
        "grid": grid,
        "sup_ratios": ratios_json(&stated),
        "sup_ratios_doubled": ratios_json(&stated2),
        "sup_ratios_sharpened": ratios_json(&sharp),
        "doubling_change": change,
        "sample_envelope_F0_T1": kernel_bound_envelope(&params, 1.0, KernelArg::Fi(0)),
    });
    Ok(Report {
        lines,
        table,
        summary,
        passed: ok,
    })
}

pub fn equidist(config: &ExperimentConfig, pool: &PoolExecutor) -> Result<Report, CommandError> {
    info!(
        "equidist on {} threads, T grid {:?}",
        pool.threads(),
        config.t_grid
    );
    let result = error_curve(config, pool).map_err(|e| CommandError::Run(e.to_string()))?;
    let c = result.fitted_constant;
    let mut table = Table::new(&[
        "T",
        "average",
        "haar",
        "error",
        "noise",
        "bound",
        "ratio",
        "nodes",
        "converged",
    ]);
    let mut lines = Vec::new();
    for r in &result.rows {
        info!(
            "T = {}: average {} with noise {:e} on {:?} nodes",
            r.big_t, r.average, r.noise, r.nodes
        );
        lines.push(format!(
            "T = {:>5}: e(T) = {:.6e} (noise {:.1e})",
            r.big_t, r.error, r.noise
        ));
        table.push(vec![
            num(r.big_t),
            num(r.average),
            num(r.haar),
            num(r.error),
            num(r.noise),
            num(r.bound),
            num(r.error / r.bound),
            format!("{}x{}", r.nodes.0, r.nodes.1),
            r.converged.to_string(),
        ]);
    }
    let (fit_json, passed) = match &result.fit {
        Ok(fit) => {
            lines.push(format!(
                "fitted exponent b = {:.4} (residual {:.3e})",
                fit.exponent, fit.residual
            ));
            let window = [
                result.rows[fit.window.0].big_t,
                result.rows[fit.window.1].big_t,
            ];
            (
                json!({ "exponent": fit.exponent, "intercept": fit.intercept, "residual": fit.residual, "window": window }),
                true,
            )
        }
        Err(e) => {
            lines.push(format!("FAIL {e}"));
            (json!({ "error": e.to_string() }), false)
        }
    };
    lines.push(format!("fitted constant C = {c:.6e}"));
    let summary = json!({
        "test_function": config.test_function.description(),
        "d": config.d,
        "s1": config.s1,
        "fit": fit_json,
        "noise_floor": result.noise_floor(),
        "fitted_constant": c,
        "monotone_trend": monotone_trend(&result.rows),
        "haar": result.haar.value,
        "domain_volume": result.haar.volume,
    });
    Ok(Report {
        lines,
        table,
        summary,
        passed,
    })
}
