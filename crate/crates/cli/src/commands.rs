use std::path::Path;
use std::time::Instant;

use covariant_lab::heisenberg::{annihilation_residual, fsb_transform, weighted_dbar_residual};
use covariant_lab::numerics::DEFAULT_DECAY_THRESHOLD;
use covariant_lab::su11::{self, hardy_transform, holomorphy_residual, weighted_disk_image, DerivedGenerator, RESIDUAL_RHO};
use covariant_lab::uncertainty::{observable_d, observable_m, uncertainty_report, UncertaintyReport};
use covariant_lab::{DiskField, HilbertVector, PlaneField, C64};
use serde_json::{json, Value};

use crate::config::{Format, RunConfig, WEIGHTED_RADIUS};
use crate::envelope::{Check, ReportEnvelope};
use crate::error::{CliError, CliResult};
use crate::io::{circle_signal, csv_table, line_signal, parse_signal, read_text, write_atomic, Abscissa};
use crate::suites::{self, Suite};

/// Observable pair for `uncertainty`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Pair {
    #[value(name = "MD")]
    Md,
    #[value(name = "su11AB")]
    Su11Ab,
}

/// Note attached when the f₊ dispersion constant appears.
pub const QUARTER_NOTE: &str =
    "dispersion product 1/4 with equal bound; the constant 1/2 often quoted for this state is not reproduced (equality holds)";

fn finish(mut env: ReportEnvelope, start: Instant) -> ReportEnvelope {
    env.wall_time_ms = start.elapsed().as_millis() as u64;
    env
}

/// Writes `--output` when given: the data table for `csv`, the envelope for `json`.
pub fn write_output(config: &RunConfig, env: &ReportEnvelope, table: Option<String>) -> CliResult<()> {
    let Some(path) = &config.output_path else { return Ok(()) };
    let contents = match config.format {
        Format::Json => env.to_json(),
        Format::Csv => table.unwrap_or_else(|| checks_table(&env.checks)),
    };
    write_atomic(Path::new(path), &contents)
}

fn checks_table(checks: &[Check]) -> String {
    let mut out = String::from("name,value,tolerance,pass\n");
    for c in checks {
        let value = c.value.map(crate::io::fmt_float).unwrap_or_else(|| "nan".into());
        out.push_str(&format!("{},{},{},{}\n", c.name, value, crate::io::fmt_float(c.tolerance), c.pass));
    }
    out
}

fn plane_table(field: &PlaneField) -> String {
    let ny = field.ygrid().len();
    csv_table(
        &["x", "y", "re", "im"],
        field.values().iter().enumerate().map(|(k, v)| {
            vec![field.xgrid().point(k / ny), field.ygrid().point(k % ny), v.re, v.im]
        }),
    )
}

fn disk_table(field: &DiskField) -> String {
    let g = field.geometry();
    let nt = g.n_theta();
    csv_table(
        &["rho", "theta", "re", "im"],
        field.values().iter().enumerate().map(|(k, v)| vec![g.radii()[k / nt], g.theta(k % nt), v.re, v.im]),
    )
}

pub fn cmd_fsb(input: &Path, config: &RunConfig) -> CliResult<ReportEnvelope> {
    let start = Instant::now();
    let v = line_signal(&parse_signal(&read_text(input)?, Abscissa::Q)?)?;
    if !v.decays(DEFAULT_DECAY_THRESHOLD) {
        let peak = v.max_abs();
        let edge = v.values()[0].norm().max(v.values()[v.values().len() - 1].norm());
        return Err(CliError::Precondition(format!(
            "signal does not decay: edge/peak ratio {:e} exceeds {DEFAULT_DECAY_THRESHOLD:e}",
            if peak > 0.0 { edge / peak } else { f64::INFINITY }
        )));
    }
    let p = config.params()?;
    let grid = config.plane_grid()?;
    let field = fsb_transform(&v, &p, &grid, &grid)?;
    let residual = annihilation_residual(&field, &p)?;
    let mut checks = vec![Check::below("annihilation_residual", residual, config.tolerance("annihilation"))];
    let mut notes = Vec::new();
    let mut cr = Value::Null;
    if config.is_standard_scaling() {
        let r = weighted_dbar_residual(&field, WEIGHTED_RADIUS)?;
        checks.push(Check::below("cauchy_riemann_residual", r, config.tolerance("cauchy_riemann")));
        cr = json!(r);
    } else {
        notes.push("weighted-image Cauchy-Riemann check needs hbar = 1, c = 2 pi; skipped".into());
    }
    let results = json!({
        "annihilation_residual": residual,
        "cauchy_riemann_residual": cr,
        "cauchy_riemann_radius": WEIGHTED_RADIUS,
        "max_abs": field.max_abs(),
        "plane_points": grid.len(),
    });
    let env = finish(ReportEnvelope::new("fsb", config, results, checks, notes), start);
    write_output(config, &env, Some(plane_table(&field)))?;
    Ok(env)
}

fn report_json(r: &UncertaintyReport) -> Value {
    json!({
        "disp_a": r.disp_a,
        "disp_b": r.disp_b,
        "product": r.product,
        "bound": r.bound,
        "gap": r.gap,
        "r_star": r.r_star,
        "residual_at_r_star": r.residual_at_r_star,
    })
}

pub fn cmd_uncertainty(input: &Path, pair: Pair, config: &RunConfig) -> CliResult<ReportEnvelope> {
    let start = Instant::now();
    let text = read_text(input)?;
    let mut notes = Vec::new();
    let report = match pair {
        Pair::Md => {
            let phi = line_signal(&parse_signal(&text, Abscissa::Q)?)?;
            if !phi.decays(DEFAULT_DECAY_THRESHOLD) {
                return Err(CliError::Precondition("signal does not decay at the grid ends".into()));
            }
            uncertainty_report(&observable_m(), &observable_d(config.params()?), &phi)?
        }
        Pair::Su11Ab => {
            let f = circle_signal(&parse_signal(&text, Abscissa::Theta)?)?;
            f.check_band_limited()?;
            let r = uncertainty_report(&su11::observable(DerivedGenerator::A), &su11::observable(DerivedGenerator::B), &f)?;
            if (r.product - 0.25).abs() < 1e-8 && r.gap.abs() < config.tolerance("gap") {
                notes.push(QUARTER_NOTE.into());
            }
            r
        }
    };
    let equality = report.gap < config.tolerance("gap");
    let checks = vec![Check::above("inequality_gap", report.gap, -config.tolerance("inequality"))];
    let mut results = report_json(&report);
    results["equality"] = json!(equality);
    results["pair"] = json!(match pair {
        Pair::Md => "MD",
        Pair::Su11Ab => "su11AB",
    });
    let env = finish(ReportEnvelope::new("uncertainty", config, results, checks, notes), start);
    write_output(config, &env, None)?;
    Ok(env)
}

pub fn cmd_hardy(input: &Path, config: &RunConfig) -> CliResult<ReportEnvelope> {
    let start = Instant::now();
    let f = circle_signal(&parse_signal(&read_text(input)?, Abscissa::Theta)?)?;
    let geometry = config.disk_geometry()?;
    let image = hardy_transform(&f, &geometry)?;
    let weighted = weighted_disk_image(&image)?;
    let mut notes = Vec::new();
    let max_abs = image.max_abs();
    let residual = if max_abs < config.tolerance("negative_modes") * f.norm()?.max(1.0) {
        notes.push("transform vanishes: input has no modes n >= 0".into());
        0.0
    } else {
        holomorphy_residual(&image, RESIDUAL_RHO)?
    };
    let centre = weighted.interpolate(C64::new(0.0, 0.0)).unwrap_or_default();
    let checks = vec![Check::below("holomorphy_residual", residual, config.tolerance("holomorphy"))];
    let results = json!({
        "holomorphy_residual": residual,
        "residual_rho": RESIDUAL_RHO,
        "max_abs": max_abs,
        "weighted_deviation_from_constant": weighted.max_deviation_from(RESIDUAL_RHO, |_| centre),
        "samples": f.len(),
    });
    let env = finish(ReportEnvelope::new("hardy", config, results, checks, notes), start);
    write_output(config, &env, Some(disk_table(&image)))?;
    Ok(env)
}

pub fn cmd_verify(suite: Suite, config: &RunConfig) -> CliResult<ReportEnvelope> {
    let start = Instant::now();
    let outcome = suites::run(suite, config)?;
    let results = json!({ "suite": suite.name() });
    let env = finish(ReportEnvelope::new("verify", config, results, outcome.checks, outcome.notes), start);
    write_output(config, &env, None)?;
    Ok(env)
}

/// Per-check table for terminals.
pub fn render_checks(env: &ReportEnvelope) -> String {
    let width = env.checks.iter().map(|c| c.name.len()).max().unwrap_or(4).max(5);
    let mut out = format!("{:<width$}  {:>12}  {:>3} {:>10}  verdict\n", "check", "measured", "", "tolerance");
    for c in &env.checks {
        let value = c.value.map(|v| format!("{v:.3e}")).unwrap_or_else(|| "nan".into());
        let rel = match c.relation {
            crate::envelope::Relation::Below => "<",
            crate::envelope::Relation::Above => ">",
        };
        out.push_str(&format!(
            "{:<width$}  {:>12}  {:>3} {:>10.3e}  {}\n",
            c.name,
            value,
            rel,
            c.tolerance,
            if c.pass { "pass" } else { "FAIL" }
        ));
    }
    out
}
