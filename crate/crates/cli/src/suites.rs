//! Seeded verification suites behind `verify`.

use std::f64::consts::PI;

use covariant_lab::covariant::{left_intertwining, right_covariance, Kernel};
use covariant_lab::heisenberg::{
    annihilation_residual, fsb_transform, fsb_transform_with_window, h_inv, h_mul, hermite1_vacuum, op_d, op_m,
    schrodinger_apply, vacuum,
};
use covariant_lab::su11::{
    derived_rep_apply, f_plus_dispersion_report, generator_matrix, hardy_transform, holomorphy_residual,
    mock_rep_apply, su11_commutators_check, su11_mul, DerivedGenerator, Generator, Mat2,
    RESIDUAL_RHO,
};
use covariant_lab::uncertainty::{equivalence_report, EquivalenceTolerances};
use covariant_lab::{
    CircleFunction, GridFunction1D, HeisenbergElement, HeisenbergRep, HilbertVector, RealGrid, SU11Element, Su11Rep,
    C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::envelope::Check;
use crate::error::CliResult;

/// Seed shared by every suite; runs are reproducible.
pub const SUITE_SEED: u64 = 20_240_917;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Heisenberg,
    Su11,
    Equivalence,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Heisenberg => "heisenberg",
            Suite::Su11 => "su11",
            Suite::Equivalence => "equivalence",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Default)]
pub struct SuiteOutcome {
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

pub fn run(suite: Suite, config: &RunConfig) -> CliResult<SuiteOutcome> {
    let mut out = SuiteOutcome::default();
    if matches!(suite, Suite::Heisenberg | Suite::All) {
        heisenberg(config, &mut out)?;
    }
    if matches!(suite, Suite::Su11 | Suite::All) {
        su11(config, &mut out)?;
    }
    if matches!(suite, Suite::Equivalence | Suite::All) {
        equivalence(config, &mut out)?;
    }
    Ok(out)
}

/// Sum of two wave packets centred near the origin.
fn packet_state(rng: &mut ChaCha8Rng) -> GridFunction1D {
    let packets: Vec<(f64, f64, f64, f64)> = (0..2)
        .map(|_| (rng.gen_range(0.3..1.2), rng.gen_range(-0.5..0.5), rng.gen_range(0.8..3.0), rng.gen_range(-3.0..3.0)))
        .collect();
    GridFunction1D::from_fn(RealGrid::state_default(), |q| {
        packets.iter().map(|&(a, q0, c, k)| C64::from_polar(a * (-c * (q - q0) * (q - q0)).exp(), k * q)).sum()
    })
    .expect("default grid accepts packet samples")
}

fn small_h(rng: &mut ChaCha8Rng, scale: f64) -> HeisenbergElement {
    HeisenbergElement::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

fn small_su11(rng: &mut ChaCha8Rng) -> SU11Element {
    let a = SU11Element::exp(Generator::A, rng.gen_range(-0.3..0.3));
    let b = SU11Element::exp(Generator::B, rng.gen_range(-0.3..0.3));
    let z = SU11Element::exp(Generator::Z, rng.gen_range(-PI..PI));
    su11_mul(&su11_mul(&a, &b), &z)
}

fn random_circle(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> CliResult<CircleFunction> {
    let modes: Vec<(i64, C64)> = (lo..=hi).map(|m| (m, C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))).collect();
    Ok(CircleFunction::from_modes(256, &modes)?)
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn heisenberg(config: &RunConfig, out: &mut SuiteOutcome) -> CliResult<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    let p = config.params()?;
    let grid = config.plane_grid()?;

    let mut assoc: f64 = 0.0;
    for _ in 0..200 {
        let (a, b, c) = (small_h(&mut rng, 5.0), small_h(&mut rng, 5.0), small_h(&mut rng, 5.0));
        let (l, r) = (h_mul(&h_mul(&a, &b), &c), h_mul(&a, &h_mul(&b, &c)));
        let e = h_mul(&a, &h_inv(&a));
        assoc = assoc.max((l.s - r.s).abs()).max((l.x - r.x).abs()).max((l.y - r.y).abs()).max(e.s.abs());
    }
    out.checks.push(Check::below("heisenberg.group_law", assoc, 1e-12));

    let states: Vec<GridFunction1D> = (0..5).map(|_| packet_state(&mut rng)).collect();
    let mut comm: f64 = 0.0;
    for f in &states {
        let md = op_m(&op_d(f, &p)?)?;
        let dm = op_d(&op_m(f)?, &p)?;
        let lhs = md.combine(one(), &dm, -one())?;
        let rhs = f.scaled(C64::new(0.0, p.hbar()));
        comm = comm.max(lhs.combine(one(), &rhs, -one())?.norm()? / rhs.norm()?);
    }
    out.checks.push(Check::below("heisenberg.commutator", comm, config.tolerance("commutator")));

    let (mut unit, mut repr): (f64, f64) = (0.0, 0.0);
    for k in 0..20 {
        let (g1, g2) = (small_h(&mut rng, 1.0), small_h(&mut rng, 1.0));
        let f = &states[k % states.len()];
        unit = unit.max((schrodinger_apply(&g1, f, &p)?.norm()? - f.norm()?).abs());
        let lhs = schrodinger_apply(&g1, &schrodinger_apply(&g2, f, &p)?, &p)?;
        repr = repr.max(lhs.max_abs_diff(&schrodinger_apply(&h_mul(&g1, &g2), f, &p)?)?);
    }
    out.checks.push(Check::below("heisenberg.unitarity", unit, config.tolerance("unitarity")));
    out.checks.push(Check::below("heisenberg.representation", repr, config.tolerance("representation")));

    let vac = vacuum(RealGrid::state_default(), &p)?;
    let c = p.c();
    let (mut annih, mut control): (f64, f64) = (0.0, f64::INFINITY);
    for f in std::iter::once(&vac).chain(states.iter().take(3)) {
        annih = annih.max(annihilation_residual(&fsb_transform(f, &p, &grid, &grid)?, &p)?);
        let h = fsb_transform_with_window(f, &p, &grid, &grid, |t| t * (-c * t * t / 2.0).exp())?;
        control = control.min(annihilation_residual(&h, &p)?);
    }
    out.checks.push(Check::below("heisenberg.fsb_annihilation", annih, config.tolerance("annihilation")));
    out.checks.push(Check::above("heisenberg.hermite_window_control", control, config.tolerance("control")));

    let rep = HeisenbergRep::new(p, grid, grid);
    let points: Vec<(f64, f64)> = (0..3).flat_map(|i| (0..3).map(move |j| (-1.0 + i as f64, -1.0 + j as f64))).collect();
    let (mut left, mut right): (f64, f64) = (0.0, 0.0);
    for f in states.iter().take(3) {
        let g = small_h(&mut rng, 0.5);
        left = left.max(left_intertwining(f, &vac, &g, &rep, &points)?.deviation);
        right = right.max(right_covariance(f, &vac, &g, &rep, &points)?.deviation);
    }
    out.checks.push(Check::below("heisenberg.left_intertwining", left, config.tolerance("covariance")));
    out.checks.push(Check::below("heisenberg.right_covariance", right, config.tolerance("covariance")));
    Ok(())
}

fn taylor_exp(m: &Mat2) -> Mat2 {
    let mut term = Mat2::IDENTITY;
    let mut sum = Mat2::IDENTITY;
    for k in 1..60 {
        term = (term * *m).scale(C64::new(1.0 / k as f64, 0.0));
        sum = sum + term;
    }
    sum
}

fn su11(config: &RunConfig, out: &mut SuiteOutcome) -> CliResult<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED + 1);
    out.checks.push(Check::flag("su11.matrix_commutators_exact", su11_commutators_check().all_exact));

    let mut subgroup: f64 = 0.0;
    for x in [Generator::A, Generator::B, Generator::Z] {
        for t in [-1.3, -0.4, 0.25, 0.9, 2.0] {
            let series = taylor_exp(&generator_matrix(x).scale(C64::new(t, 0.0)));
            subgroup = subgroup.max(SU11Element::exp(x, t).matrix().max_abs_diff(&series));
        }
    }
    out.checks.push(Check::below("su11.subgroup_closed_forms", subgroup, 1e-12));

    let mut closure: f64 = 0.0;
    for _ in 0..5 {
        let f = random_circle(&mut rng, -8, 8)?;
        use DerivedGenerator::{A, B, Z};
        for (x, y, w, k) in [(A, B, Z, -0.5), (Z, A, B, 2.0), (Z, B, A, -2.0)] {
            let xy = derived_rep_apply(x, &derived_rep_apply(y, &f)?)?;
            let yx = derived_rep_apply(y, &derived_rep_apply(x, &f)?)?;
            let rhs = derived_rep_apply(w, &f)?.scaled(C64::new(k, 0.0));
            closure = closure.max(xy.combine(one(), &yx, -one())?.max_abs_diff(&rhs)?);
        }
    }
    out.checks.push(Check::below("su11.derived_closure", closure, config.tolerance("closure")));

    let (mut unit, mut repr): (f64, f64) = (0.0, 0.0);
    for _ in 0..10 {
        let (g1, g2) = (small_su11(&mut rng), small_su11(&mut rng));
        let f = random_circle(&mut rng, -6, 6)?;
        unit = unit.max((mock_rep_apply(&g1, &f)?.norm()? - f.norm()?).abs());
        let lhs = mock_rep_apply(&g1, &mock_rep_apply(&g2, &f)?)?;
        repr = repr.max(lhs.max_abs_diff(&mock_rep_apply(&su11_mul(&g1, &g2), &f)?)?);
    }
    out.checks.push(Check::below("su11.unitarity", unit, config.tolerance("unitarity")));
    out.checks.push(Check::below("su11.representation", repr, config.tolerance("representation")));

    let report = f_plus_dispersion_report()?;
    out.checks.push(Check::below("su11.f_plus_gap", report.report.gap.abs(), 1e-10));
    out.checks.push(Check::flag("su11.f_plus_minimal", report.f_plus_minimal && report.minimizer == 0));
    out.notes.push(crate::commands::QUARTER_NOTE.into());

    let geometry = config.disk_geometry()?;
    let (mut modes, mut holo, mut negative): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for n in 0..=8 {
        let image = hardy_transform(&CircleFunction::monomial(256, n)?, &geometry)?;
        modes = modes.max(image.max_deviation_from(RESIDUAL_RHO, |w| w.powi(n as i32) / (1.0 - w.norm_sqr()).sqrt()));
        holo = holo.max(holomorphy_residual(&image, RESIDUAL_RHO)?);
    }
    for n in -8..0 {
        negative = negative.max(hardy_transform(&CircleFunction::monomial(256, n)?, &geometry)?.max_abs());
    }
    out.checks.push(Check::below("su11.hardy_mode_map", modes, config.tolerance("mode_map")));
    out.checks.push(Check::below("su11.hardy_negative_modes", negative, config.tolerance("negative_modes")));
    out.checks.push(Check::below("su11.hardy_holomorphy", holo, config.tolerance("holomorphy")));

    let rep = Su11Rep::new(geometry, 1);
    let fp = CircleFunction::f_plus(256)?;
    let points: Vec<C64> = (1..=3).flat_map(|k| (0..4).map(move |j| C64::from_polar(0.2 * k as f64, 1.5 * j as f64 + 0.1))).collect();
    let (mut left, mut right): (f64, f64) = (0.0, 0.0);
    for _ in 0..5 {
        let g = small_su11(&mut rng);
        let v = random_circle(&mut rng, -4, 6)?;
        left = left.max(left_intertwining(&v, &fp, &g, &rep, &points)?.deviation);
        right = right.max(right_covariance(&v, &fp, &g, &rep, &points)?.deviation);
    }
    out.checks.push(Check::below("su11.left_intertwining", left, config.tolerance("covariance")));
    out.checks.push(Check::below("su11.right_covariance", right, config.tolerance("covariance")));
    Ok(())
}

fn equivalence(config: &RunConfig, out: &mut SuiteOutcome) -> CliResult<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED + 2);
    let p = config.params()?;
    let grid = config.plane_grid()?;
    let rep = HeisenbergRep::new(p, grid, grid);
    let tol = EquivalenceTolerances { gap: config.tolerance("gap"), residual: config.tolerance("residual") };
    let probes: Vec<GridFunction1D> = (0..2).map(|_| packet_state(&mut rng)).collect();
    let (kx, ky) = (Kernel::DeltaDerivativeX, Kernel::DeltaDerivativeY);

    let pos = equivalence_report(&kx, &ky, &vacuum(RealGrid::state_default(), &p)?, &probes, &rep, tol)?;
    out.checks.push(Check::below("equivalence.gaussian.gap", pos.report.gap, tol.gap));
    out.checks.push(Check::below("equivalence.gaussian.transform_residual", pos.transform_residual, tol.residual));
    let neg = equivalence_report(&kx, &ky, &hermite1_vacuum(RealGrid::state_default(), &p)?, &probes, &rep, tol)?;
    out.checks.push(Check::above("equivalence.hermite1.gap", neg.report.gap, tol.gap));
    out.checks.push(Check::above("equivalence.hermite1.transform_residual", neg.transform_residual, tol.residual));
    out.checks.push(Check::flag("equivalence.heisenberg_verdicts_agree", pos.agree && neg.agree));

    let su = Su11Rep::new(config.disk_geometry()?, 1);
    let circle_probes = vec![random_circle(&mut rng, -3, 5)?];
    let fp = equivalence_report(&kx, &ky, &CircleFunction::f_plus(256)?, &circle_probes, &su, tol)?;
    let z_rep = Su11Rep::new(su.geometry.clone(), 3);
    let z1 = equivalence_report(&kx, &ky, &CircleFunction::monomial(256, 1)?, &circle_probes, &z_rep, tol)?;
    out.checks.push(Check::below("equivalence.f_plus.gap", fp.report.gap, tol.gap));
    out.checks.push(Check::below("equivalence.f_plus.transform_residual", fp.transform_residual, tol.residual));
    out.checks.push(Check::flag("equivalence.su11_verdicts_agree", fp.agree && z1.agree && !z1.gap_verdict));
    out.notes.push(format!(
        "r used: gaussian {:.6}, hermite-1 {:.6}, f+ {:.6}",
        pos.r_used, neg.r_used, fp.r_used
    ));
    Ok(())
}
