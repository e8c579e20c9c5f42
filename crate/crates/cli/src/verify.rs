//! Verification suites: each returns a list of checks, printed as
//! `check=<name> value=<v> expected=<e> tol=<t> status=<PASS|FAIL>`.
//!
//! An absolute check passes when |value − expected| ≤ tol, a relative one
//! when |value − expected| ≤ tol·|expected|.

use std::f64::consts::PI;

use anyhow::Result;
use squeeze_core::analysis::closure_defect;
use squeeze_core::observables::coherent_limit_check;
use squeeze_core::operators::eigen_residual;
use squeeze_core::state::DOMAIN_WARN_RATIO;
use squeeze_core::symmetry::{
    magnetic_translate, rotation_generator_guiding_center, rotation_generator_translation_form,
    rotation_generator_with, sigma_t,
};
use squeeze_core::{
    expectation, field_on_grid, frame_spectrum, guiding_center_moments_with, overlap_analytic, overlap_numeric,
    state_eval, zeros, ClosureSpec, Complex64, DiscreteOperator, GaugeField, Grid2D, GridGeometry, LatticeSpec,
    OperatorContext, SqueezeAngle, StateSpec, Units,
};

use crate::fmt::{g17, shortest};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub expected: f64,
    pub tol: f64,
    pub relative: bool,
}

impl Check {
    pub fn abs(name: impl Into<String>, value: f64, expected: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            value,
            expected,
            tol,
            relative: false,
        }
    }

    pub fn rel(name: impl Into<String>, value: f64, expected: f64, tol: f64) -> Self {
        Check {
            relative: true,
            ..Check::abs(name, value, expected, tol)
        }
    }

    pub fn passed(&self) -> bool {
        let bound = if self.relative {
            self.tol * self.expected.abs()
        } else {
            self.tol
        };
        (self.value - self.expected).abs() <= bound
    }

    pub fn line(&self) -> String {
        format!(
            "check={} value={} expected={} tol={} status={}",
            self.name,
            g17(self.value),
            shortest(self.expected),
            shortest(self.tol),
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    State,
    Uncertainty,
    Ladder,
    Operators,
    Symmetry,
    Overlap,
    Closure,
    Frame,
}

/// Settings shared by all suites.
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub state: StateSpec,
    /// Stencil order for differential operators.
    pub order: usize,
    /// Grid spacing in units of l.
    pub h: f64,
    /// Replaces every check tolerance when set.
    pub tol: Option<f64>,
    /// Lattice cell areas in units of 2πl² (frame suite).
    pub cell_areas: Vec<f64>,
}

impl VerifyOptions {
    pub fn new(state: StateSpec) -> Self {
        VerifyOptions {
            state,
            order: 6,
            h: 1.0 / 16.0,
            tol: None,
            cell_areas: vec![2.0, 1.0, 0.5],
        }
    }

    fn spacing(&self) -> f64 {
        self.h * self.state.units.l()
    }

    fn context(&self) -> Result<OperatorContext> {
        Ok(OperatorContext::symmetric(self.state.units).with_order(self.order)?)
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut checks = match suite {
        Suite::State => state(opts)?,
        Suite::Uncertainty => uncertainty(opts)?,
        Suite::Ladder => ladder(opts)?,
        Suite::Operators => operators(opts)?,
        Suite::Symmetry => symmetry(opts)?,
        Suite::Overlap => overlap(opts)?,
        Suite::Closure => closure(opts)?,
        Suite::Frame => frame(opts)?,
    };
    if let Some(t) = opts.tol {
        for c in &mut checks {
            c.tol = t;
        }
    }
    Ok(checks)
}

fn sampled(spec: &StateSpec, h: f64) -> Result<Grid2D> {
    Ok(field_on_grid(spec, &spec.covering_geometry(h)?))
}

/// Normalization, domain decay and zeros of the state.
pub fn state(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let s = &opts.state;
    let f = sampled(s, opts.spacing())?;
    let peak = f.max_abs();
    let z = zeros(s)?;
    let worst_zero = z.iter().map(|&r| state_eval(s, r).norm() / peak).fold(0.0, f64::max);
    Ok(vec![
        Check::rel("norm", f.norm_sqr(), 1.0, 1e-8),
        Check::abs("boundary_ratio", f.boundary_ratio(2), 0.0, DOMAIN_WARN_RATIO),
        Check::abs("zero_count", z.len() as f64, s.n as f64, 0.0),
        Check::abs("zero_modulus", worst_zero, 0.0, 1e-10),
    ])
}

/// Guiding-center moments against the minimum-uncertainty values.
pub fn uncertainty(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let s = &opts.state;
    let (l, l2) = (s.units.l(), s.units.l2());
    let f = sampled(s, opts.spacing())?;
    let m = guiding_center_moments_with(&opts.context()?, &f, &s.phi)?;
    let (vx, vy) = s.principal_variances();
    Ok(vec![
        Check::abs("mean_x", m.mean_x, s.center.0, 1e-6 * l),
        Check::abs("mean_y", m.mean_y, s.center.1, 1e-6 * l),
        Check::rel("var_xp", m.var_xp, vx, 1e-6),
        Check::rel("var_yp", m.var_yp, vy, 1e-6),
        Check::rel("var_product", m.product, 0.25 * l2 * l2, 1e-6),
        Check::abs("sym_cov", m.sym_cov, 0.0, 1e-6 * l2),
        Check::abs(
            "variance_identity",
            m.variance_identity_residual(&s.phi, s.units),
            0.0,
            1e-6,
        ),
        Check::rel("elongation", m.elongation(), 1.0 / s.phi.tanh_abs(), 0.02),
    ])
}

fn relative_distance(a: &Grid2D, b: &Grid2D, scale: f64) -> f64 {
    (a - b).norm() / scale
}

/// Ladder action between levels N ≤ 4 and their neighbors, and the level
/// energy.
pub fn ladder(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let s = opts.state;
    let ctx = opts.context()?;
    let (c, cd) = ctx.ladder();
    let top = 5;
    let geom = s.with_level(top).covering_geometry(opts.spacing())?;
    let levels: Vec<Grid2D> = (0..=top).map(|n| field_on_grid(&s.with_level(n), &geom)).collect();
    let mut out = vec![Check::abs(
        "annihilate_ground",
        c.apply(&levels[0]).norm() / levels[0].norm(),
        0.0,
        1e-6,
    )];
    for n in 0..top {
        let k = ((n + 1) as f64).sqrt();
        let up = cd.apply(&levels[n]);
        out.push(Check::abs(
            format!("raise_N{n}"),
            relative_distance(&up, &levels[n + 1].scaled(Complex64::new(k, 0.0)), levels[n].norm()),
            0.0,
            1e-6,
        ));
        if n + 1 == top {
            continue;
        }
        let down = c.apply(&levels[n + 1]);
        out.push(Check::abs(
            format!("lower_N{}", n + 1),
            relative_distance(&down, &levels[n].scaled(Complex64::new(k, 0.0)), levels[n + 1].norm()),
            0.0,
            1e-6,
        ));
    }
    let h = ctx.hamiltonian();
    let own = &levels[s.n.min(top)];
    let f = if s.n <= top {
        own.clone()
    } else {
        sampled(&s, opts.spacing())?
    };
    out.push(Check::rel(
        format!("energy_N{}", s.n),
        expectation(&f, &h).re / f.norm_sqr(),
        s.units.landau_energy(s.n),
        1e-6,
    ));
    Ok(out)
}

fn commutator_residual(a: &DiscreteOperator, b: &DiscreteOperator, value: Complex64, f: &Grid2D) -> f64 {
    a.commutator(b).shift(value).apply(f).norm() / f.norm()
}

/// Eigenvalue equations and canonical commutators.
pub fn operators(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let s = &opts.state;
    let ctx = opts.context()?;
    let f = sampled(s, opts.spacing())?;
    let l2 = s.units.l2();
    let zero = Complex64::new(0.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let (gx, gy) = ctx.guiding_center();
    let (px, py) = ctx.translation_generator();
    Ok(vec![
        Check::abs(
            "h_residual",
            eigen_residual(&f, &ctx.hamiltonian(), Complex64::new(s.units.landau_energy(s.n), 0.0)),
            0.0,
            1e-6,
        ),
        Check::abs(
            "x_phi_residual",
            eigen_residual(&f, &ctx.x_phi(&s.phi), s.x_phi()),
            0.0,
            1e-6,
        ),
        Check::abs(
            "x_phi_coordinate_residual",
            eigen_residual(&f, &ctx.x_phi_coordinate(&s.phi, s.center), s.x_phi()),
            0.0,
            1e-6,
        ),
        Check::abs("comm_X_Y", commutator_residual(&gx, &gy, -i * l2, &f), 0.0, 1e-6),
        Check::abs("comm_Px_Py", commutator_residual(&px, &py, -i / l2, &f), 0.0, 1e-6),
        Check::abs("comm_X_Px", commutator_residual(&gx, &px, i, &f), 0.0, 1e-6),
        Check::abs("comm_Y_Py", commutator_residual(&gy, &py, i, &f), 0.0, 1e-6),
        Check::abs("comm_X_Py", commutator_residual(&gx, &py, zero, &f), 0.0, 1e-6),
        Check::abs("comm_Y_Px", commutator_residual(&gy, &px, zero, &f), 0.0, 1e-6),
    ])
}

fn max_density_gap(a: &Grid2D, b: &Grid2D) -> f64 {
    let peak = b.values().iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
    a.values()
        .iter()
        .zip(b.values())
        .map(|(u, v)| (u.norm_sqr() - v.norm_sqr()).abs())
        .fold(0.0, f64::max)
        / peak
}

/// Magnetic translations, angular-momentum identities and σ_T.
pub fn symmetry(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let s = opts.state;
    let units = s.units;
    let h = opts.spacing();
    let ctx = opts.context()?;
    let gauge = GaugeField::symmetric(units);
    let f = sampled(&s, h)?;
    let g = *f.geometry();

    let a = (8.0 * h, -4.0 * h);
    let t = magnetic_translate(&f, a, &gauge)?;
    let shifted = Grid2D::from_fn(g, |x, y| state_eval(&s, (x + a.0, y + a.1)));
    let ham = ctx.hamiltonian();
    let h_f = ham.apply(&f);
    let comm = (&ham.apply(&t) - &magnetic_translate(&h_f, a, &gauge)?).norm() / h_f.norm();

    let b = (-4.0 * h, 12.0 * h);
    let ab = magnetic_translate(&magnetic_translate(&f, b, &gauge)?, a, &gauge)?;
    let ba = magnetic_translate(&magnetic_translate(&f, a, &gauge)?, b, &gauge)?;
    let swap = ba.inner(&ab)?.arg();
    let flux = (a.0 * b.1 - a.1 * b.0) / units.l2();

    let nrm = f.norm_sqr();
    let origin = (0.0, 0.0);
    let lz = expectation(&f, &rotation_generator_with(&ctx, origin)).re / nrm;
    let lz_gc = expectation(&f, &rotation_generator_guiding_center(&ctx, origin)).re / nrm;
    let lz_tr = expectation(&f, &rotation_generator_translation_form(&ctx)).re / nrm;

    // σ_T maps |R, N⟩ with Φ₁ = 0 and R on the y-axis to itself up to a phase.
    let upright = StateSpec::new(s.n, (0.0, s.center.1), SqueezeAngle::new(0.0, s.phi.phi2())?).with_units(units);
    let fu = sampled(&upright, h)?;

    Ok(vec![
        Check::abs("translate_density", max_density_gap(&t, &shifted), 0.0, 1e-10),
        Check::abs("translate_commutes_h", comm, 0.0, 1e-5),
        Check::abs("translate_flux_phase", (swap - flux).sin().abs(), 0.0, 1e-10),
        Check::abs("lz_guiding_center_form", lz - lz_gc, 0.0, 1e-6),
        Check::abs("lz_translation_form", lz - lz_tr, 0.0, 1e-6),
        Check::abs("sigma_t_density", max_density_gap(&sigma_t(&fu)?, &fu), 0.0, 1e-10),
    ])
}

/// Fixed 20-pair overlap matrix: levels 0–2, varied centers and angles.
pub fn overlap_cases(units: Units) -> Vec<(StateSpec, StateSpec)> {
    let l = units.l();
    let mut out = Vec::with_capacity(20);
    for k in 0..20 {
        let t = k as f64;
        let n = k % 3;
        let c1 = (l * 0.6 * (0.7 * t).sin(), l * 0.5 * (1.3 * t).cos());
        let c2 = (c1.0 + l * 1.2 * (0.9 * t + 0.4).cos(), c1.1 + l * 1.1 * (0.5 * t).sin());
        let p1 = SqueezeAngle::new(0.37 * t - 2.0, -0.3 - 0.05 * (k % 7) as f64).expect("negative Φ₂");
        let p2 = SqueezeAngle::new(1.1 - 0.23 * t, -1.2 + 0.07 * (k % 5) as f64).expect("negative Φ₂");
        out.push((
            StateSpec::new(n, c1, p1).with_units(units),
            StateSpec::new(n, c2, p2).with_units(units),
        ));
    }
    out
}

/// Square grid at spacing `h` covering both states.
pub fn joint_geometry(a: &StateSpec, b: &StateSpec, h: f64) -> Result<GridGeometry> {
    let ga = a.covering_geometry(h)?;
    let gb = b.covering_geometry(h)?;
    let half = |g: &GridGeometry| 0.5 * (g.x1() - g.x0);
    let mid = (0.5 * (a.center.0 + b.center.0), 0.5 * (a.center.1 + b.center.1));
    let d = 0.5 * (a.center.0 - b.center.0).hypot(a.center.1 - b.center.1);
    let mid = ((mid.0 / h).round() * h, (mid.1 / h).round() * h);
    Ok(GridGeometry::centered(mid, half(&ga).max(half(&gb)) + d + h, h)?)
}

/// Closed-form overlaps against quadrature; level orthogonality and level
/// independence.
pub fn overlap(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let units = opts.state.units;
    let h = opts.spacing();
    let mut out = Vec::new();
    let cases = overlap_cases(units);
    for (k, (a, b)) in cases.iter().enumerate() {
        let g = joint_geometry(a, b, h)?;
        let gap = (overlap_analytic(a, b)? - overlap_numeric(a, b, &g)?).norm();
        out.push(Check::abs(format!("overlap_case{k:02}"), gap, 0.0, 1e-6));
    }
    let (a, b) = cases[0];
    let g = joint_geometry(&a.with_level(2), &b.with_level(2), h)?;
    let mut analytic_orth = 0.0f64;
    let mut numeric_orth = 0.0f64;
    let mut level_spread = 0.0f64;
    let base = overlap_numeric(&a.with_level(0), &b.with_level(0), &g)?;
    for n in 0..=2 {
        for m in 0..=2 {
            if n != m {
                analytic_orth = analytic_orth.max(overlap_analytic(&a.with_level(n), &b.with_level(m))?.norm());
                numeric_orth = numeric_orth.max(overlap_numeric(&a.with_level(n), &b.with_level(m), &g)?.norm());
            }
        }
        level_spread = level_spread.max((overlap_numeric(&a.with_level(n), &b.with_level(n), &g)? - base).norm());
    }
    out.push(Check::abs("orthogonality_analytic", analytic_orth, 0.0, 0.0));
    out.push(Check::abs("orthogonality_numeric", numeric_orth, 0.0, 1e-6));
    out.push(Check::abs("level_independence", level_spread, 0.0, 1e-6));
    Ok(out)
}

/// Closure spacing for the reconstruction grid, in units of l.
pub const CLOSURE_GRID_H: f64 = 0.2;

/// Reconstruction of the level-0 state from the guiding-center integral over
/// a disk of radius 8l, at center steps l/4 and l/8.
pub fn closure(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let s = opts.state.with_level(0);
    let l = s.units.l();
    let h = CLOSURE_GRID_H * l;
    let c = ((s.center.0 / h).round() * h, (s.center.1 / h).round() * h);
    let g = GridGeometry::centered(c, 16.0 * l, h)?;
    let f = field_on_grid(&s, &g);
    let defect = |step: f64| {
        closure_defect(
            &f,
            &ClosureSpec {
                n_max: 0,
                step,
                center: s.center,
                radius: 8.0 * l,
                phi: s.phi,
                units: s.units,
            },
        )
    };
    let coarse = defect(0.25 * l)?;
    let fine = defect(0.125 * l)?;
    Ok(vec![
        Check::abs("closure_defect_step_0.25", coarse, 0.0, 1e-3),
        Check::abs("closure_defect_step_0.125", fine, 0.0, 1e-3),
        Check::abs("closure_refinement_ratio", fine / coarse, 0.0, 1.0),
    ])
}

/// Smallest Gram eigenvalue of an 8×8 square lattice patch at each cell area.
pub fn frame_minima(opts: &VerifyOptions) -> Result<Vec<(f64, f64)>> {
    let s = &opts.state;
    opts.cell_areas
        .iter()
        .map(|&a| {
            let lattice = LatticeSpec::square(a * 2.0 * PI * s.units.l2(), 8, 8)?;
            Ok((a, frame_spectrum(&lattice, &s.phi, s.n, s.units)?.lambda_min))
        })
        .collect()
}

/// λ_min must fall as the lattice densifies, and collapse below critical
/// density.
pub fn frame(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut minima = frame_minima(opts)?;
    minima.sort_by(|a, b| b.0.total_cmp(&a.0));
    for (a, lam) in &minima {
        log::info!("cell area {a}·2πl²: lambda_min = {lam:e}");
    }
    let mut out = Vec::new();
    for w in minima.windows(2) {
        let ((sparse, ls), (dense, ld)) = (w[0], w[1]);
        out.push(Check::abs(
            format!("lambda_min_ratio[{}/{}]", shortest(dense), shortest(sparse)),
            ld / ls,
            0.0,
            1.0,
        ));
    }
    let find = |a: f64| minima.iter().find(|m| m.0 == a).map(|m| m.1);
    if let (Some(dense), Some(sparse)) = (find(0.5), find(2.0)) {
        out.push(Check::abs(
            "lambda_min_ratio_critical[0.5/2]",
            dense / sparse,
            0.0,
            1e-6,
        ));
    }
    Ok(out)
}

/// ⟨L_z⟩ = −N and a rotationally invariant density in the coherent limit.
pub fn coherent(n: usize, units: Units) -> Result<Vec<Check>> {
    let s = StateSpec::new(n, (0.0, 0.0), SqueezeAngle::new(0.0, -10.0)?).with_units(units);
    let r = coherent_limit_check(&s)?;
    Ok(vec![
        Check::abs(format!("coherent_azimuthal_N{n}"), r.azimuthal_variation, 0.0, 1e-4),
        Check::abs(format!("coherent_lz_N{n}"), r.lz, -(n as f64), 1e-4),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_semantics() {
        assert!(Check::abs("a", 1.0 + 1e-7, 1.0, 1e-6).passed());
        assert!(!Check::abs("a", 1.1, 1.0, 1e-6).passed());
        assert!(Check::rel("r", 200.0 + 1e-4, 200.0, 1e-6).passed());
        assert!(!Check::abs("nan", f64::NAN, 0.0, 1.0).passed());
        assert_eq!(
            Check::rel("var_product", 0.25, 0.25, 1e-6).line(),
            "check=var_product value=0.25 expected=0.25 tol=1e-06 status=PASS"
        );
    }

    #[test]
    fn overlap_cases_are_deterministic_and_mixed() {
        let a = overlap_cases(Units::default());
        assert_eq!(a, overlap_cases(Units::default()));
        assert_eq!(a.len(), 20);
        assert!((0..3).all(|n| a.iter().any(|(s, _)| s.n == n)));
    }
}
