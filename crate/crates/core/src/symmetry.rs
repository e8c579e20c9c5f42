//! Symmetry operators of the Hamiltonian in an arbitrary gauge.
//!
//! A bare geometric transformation O maps solutions in gauge A to solutions
//! in the transformed gauge A^(O). Multiplying by e^{iχ^(O)} with
//! χ^(O) = ∫₀^r (A − A^(O))·dr brings the result back to gauge A, so the
//! compensated operator commutes with Ĥ_A. Finite transformations are limited
//! to grid-commensurate shifts and quarter turns so that no interpolation
//! enters.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gauge::{gauge_phase, GaugeField};
use crate::grid::{Grid2D, GridGeometry};
use crate::operators::{DiscreteOperator, OperatorContext};
use crate::stencil::Stencil;

fn commensurate(a: f64, h: f64) -> Option<isize> {
    let k = a / h;
    let r = k.round();
    if (k - r).abs() <= 1e-9 * r.abs().max(1.0) {
        Some(r as isize)
    } else {
        None
    }
}

fn grid_steps(geom: &GridGeometry, a: (f64, f64)) -> Result<(isize, isize)> {
    match (commensurate(a.0, geom.dx), commensurate(a.1, geom.dy)) {
        (Some(i), Some(j)) => Ok((i, j)),
        _ => Err(Error::OffGridShift { ax: a.0, ay: a.1 }),
    }
}

/// Magnetic translation T_a in gauge `gauge`:
/// (T_a ψ)(r) = exp(i∫_{r+a}^{r} (a_A − a^(a))·dr′) ψ(r + a), where a^(a) is
/// the Landau gauge invariant along the shift. Samples shifted in from outside
/// the grid are zero.
pub fn magnetic_translate(field: &Grid2D, a: (f64, f64), gauge: &GaugeField) -> Result<Grid2D> {
    let g = *field.geometry();
    let (si, sj) = grid_steps(&g, a)?;
    if si == 0 && sj == 0 {
        return Ok(field.clone());
    }
    let landau = GaugeField::landau(gauge.units(), a)?;
    Ok(Grid2D::from_index_fn(g, |i, j| {
        let v = field.get_or_zero(i as isize + si, j as isize + sj);
        if v == Complex64::new(0.0, 0.0) {
            return v;
        }
        let r = (g.x(i), g.y(j));
        let q = (r.0 + a.0, r.1 + a.1);
        let phase = landau.segment_integral(r, q) - gauge.segment_integral(r, q);
        v * Complex64::from_polar(1.0, phase)
    }))
}

/// The same operator with the phase applied before the shift: T_a = S_a e^{iλ(r−a)}.
pub fn magnetic_translate_phase_first(field: &Grid2D, a: (f64, f64), gauge: &GaugeField) -> Result<Grid2D> {
    let g = *field.geometry();
    let (si, sj) = grid_steps(&g, a)?;
    if si == 0 && sj == 0 {
        return Ok(field.clone());
    }
    let landau = GaugeField::landau(gauge.units(), a)?;
    // λ(s − a) with s the source point: integral over the segment s − a → s.
    let phased = field.map_with_position(|x, y, v| {
        let p = (x - a.0, y - a.1);
        let phase = landau.segment_integral(p, (x, y)) - gauge.segment_integral(p, (x, y));
        v * Complex64::from_polar(1.0, phase)
    });
    Ok(Grid2D::from_index_fn(g, |i, j| {
        phased.get_or_zero(i as isize + si, j as isize + sj)
    }))
}

/// Phase θ in T_a T_b = e^{iθ} T_{a+b}: the flux through the parallelogram
/// spanned by a and b divided by two, (a×b)_z / 2l².
pub fn translation_composition_phase(a: (f64, f64), b: (f64, f64), gauge: &GaugeField) -> f64 {
    (a.0 * b.1 - a.1 * b.0) / (2.0 * gauge.units().l2())
}

/// Angular momentum about `center` with fourth-order stencils.
///
/// About the origin this is L̂_z = (r × v̂)_z + r²/2l², which reduces to the
/// canonical (r × p̂)_z in the symmetric gauge. About any other point it is
/// (R̂ − R₀)²/2l² − l²Ĥ.
pub fn rotation_generator(gauge: &GaugeField, center: (f64, f64)) -> DiscreteOperator {
    rotation_generator_with(&OperatorContext::new(gauge.clone(), Stencil::fourth()), center)
}

/// [`rotation_generator`] with the gauge and stencil of `ctx`.
pub fn rotation_generator_with(ctx: &OperatorContext, center: (f64, f64)) -> DiscreteOperator {
    if center == (0.0, 0.0) {
        let (vx, vy) = ctx.velocity();
        let b = 0.5 / ctx.gauge().units().l2();
        let x = DiscreteOperator::multiply("x", |x, _| Complex64::new(x, 0.0));
        let y = DiscreteOperator::multiply("y", |_, y| Complex64::new(y, 0.0));
        let r2 = DiscreteOperator::multiply("r²/2l²", move |x, y| Complex64::new(b * (x * x + y * y), 0.0));
        x.compose(&vy).sub(&y.compose(&vx)).add(&r2).renamed("L_z")
    } else {
        rotation_generator_guiding_center(ctx, center)
    }
}

/// (R̂ − R₀)²/2l² − l²Ĥ.
pub fn rotation_generator_guiding_center(ctx: &OperatorContext, center: (f64, f64)) -> DiscreteOperator {
    let l2 = ctx.gauge().units().l2();
    let (x, y) = ctx.guiding_center();
    let x = x.shift(Complex64::new(center.0, 0.0));
    let y = y.shift(Complex64::new(center.1, 0.0));
    x.compose(&x)
        .add(&y.compose(&y))
        .scale(Complex64::new(0.5 / l2, 0.0))
        .sub(&ctx.hamiltonian().scale(Complex64::new(l2, 0.0)))
        .renamed("L_z(R₀)")
}

/// (l²/2)P̂² − l²Ĥ, the angular momentum about the origin written with the
/// translation generator.
pub fn rotation_generator_translation_form(ctx: &OperatorContext) -> DiscreteOperator {
    let l2 = ctx.gauge().units().l2();
    let (px, py) = ctx.translation_generator();
    px.compose(&px)
        .add(&py.compose(&py))
        .scale(Complex64::new(0.5 * l2, 0.0))
        .sub(&ctx.hamiltonian().scale(Complex64::new(l2, 0.0)))
        .renamed("L_z(P)")
}

fn check_square_about(g: &GridGeometry, center: (f64, f64)) -> Result<()> {
    let tol = 1e-9 * g.dx;
    let mid = |o: f64, h: f64, n: usize| o + 0.5 * (n - 1) as f64 * h;
    if g.nx != g.ny
        || (g.dx - g.dy).abs() > 1e-12 * g.dx
        || (mid(g.x0, g.dx, g.nx) - center.0).abs() > tol
        || (mid(g.y0, g.dy, g.ny) - center.1).abs() > tol
    {
        return Err(Error::AsymmetricGrid(format!(
            "quarter turns need a square grid centered on ({}, {})",
            center.0, center.1
        )));
    }
    Ok(())
}

/// Multiply by e^{iχ} with χ = ∫₀^r (a_to − a_from)·dr.
fn compensate(field: &Grid2D, from: &GaugeField, to: &GaugeField) -> Result<Grid2D> {
    let chi = gauge_phase(from, to)?;
    Ok(field.map_with_position(|x, y, v| v * Complex64::from_polar(1.0, chi.chi(x, y))))
}

fn rotate_vec(v: (f64, f64), turns: i64) -> (f64, f64) {
    match turns.rem_euclid(4) {
        0 => v,
        1 => (-v.1, v.0),
        2 => (-v.0, -v.1),
        _ => (v.1, -v.0),
    }
}

/// Counter-clockwise rotation by `turns` quarter turns about `center`,
/// gauge-compensated so that it commutes with Ĥ in `gauge`.
pub fn rotate_quarter(field: &Grid2D, turns: i64, center: (f64, f64), gauge: &GaugeField) -> Result<Grid2D> {
    let g = *field.geometry();
    check_square_about(&g, center)?;
    let n = g.nx;
    let t = turns.rem_euclid(4);
    // (Oψ)(r) = ψ(c + Q⁻¹(r − c)).
    let bare = Grid2D::from_index_fn(g, |i, j| {
        let (ii, jj) = match t {
            0 => (i, j),
            1 => (j, n - 1 - i),
            2 => (n - 1 - i, n - 1 - j),
            _ => (n - 1 - j, i),
        };
        field.get(ii, jj)
    });
    if t == 0 {
        return Ok(bare);
    }
    let a = gauge.clone();
    // A^(O)(r) = Q A(c + Q⁻¹(r − c)).
    let transformed = GaugeField::custom(gauge.units(), move |x, y| {
        let d = rotate_vec((x - center.0, y - center.1), -t);
        rotate_vec(a.potential(center.0 + d.0, center.1 + d.1), t)
    });
    compensate(&bare, &transformed, gauge)
}

/// Finite rotation by `angle` radians; only multiples of π/2 are supported.
pub fn rotate(field: &Grid2D, angle: f64, center: (f64, f64), gauge: &GaugeField) -> Result<Grid2D> {
    let k = angle / FRAC_PI_2;
    if (k - k.round()).abs() > 1e-12 * k.abs().max(1.0) {
        return Err(Error::UnsupportedAngle { angle });
    }
    rotate_quarter(field, k.round() as i64, center, gauge)
}

/// Bare σ_T: (σ_T ψ)(x, y) = ψ*(−x, y). Requires a grid symmetric about x = 0.
pub fn sigma_t(field: &Grid2D) -> Result<Grid2D> {
    let g = *field.geometry();
    if (g.x0 + g.x1()).abs() > 1e-9 * g.dx {
        return Err(Error::AsymmetricGrid(format!(
            "σ_T needs x-range symmetric about 0, got [{}, {}]",
            g.x0,
            g.x1()
        )));
    }
    Ok(Grid2D::from_index_fn(g, |i, j| field.get(g.nx - 1 - i, j).conj()))
}

/// σ_T compensated for an arbitrary gauge; identical to [`sigma_t`] in the
/// symmetric gauge.
pub fn sigma_t_in_gauge(field: &Grid2D, gauge: &GaugeField) -> Result<Grid2D> {
    let bare = sigma_t(field)?;
    if gauge.is_symmetric() {
        return Ok(bare);
    }
    let a = gauge.clone();
    let transformed = GaugeField::custom(gauge.units(), move |x, y| {
        let (ax, ay) = a.potential(-x, y);
        (ax, -ay)
    });
    compensate(&bare, &transformed, gauge)
}

/// Which symmetry operator a commutation report exercises.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SymmetryKind {
    Translation((f64, f64)),
    /// Finite rotation by a multiple of π/2 about a center.
    Rotation {
        angle: f64,
        center: (f64, f64),
    },
    /// The angular-momentum generator about a center.
    RotationGenerator {
        center: (f64, f64),
    },
    SigmaT,
}

/// ‖(Ĥ Ô − Ô Ĥ)ψ‖ / ‖Ĥψ‖ for each test state.
pub fn symmetry_commutation_report(kind: SymmetryKind, gauge: &GaugeField, states: &[Grid2D]) -> Result<Vec<f64>> {
    let h = OperatorContext::new(gauge.clone(), Stencil::fourth()).hamiltonian();
    let gen = match kind {
        SymmetryKind::RotationGenerator { center } => Some(rotation_generator(gauge, center)),
        _ => None,
    };
    let apply = |f: &Grid2D| -> Result<Grid2D> {
        match kind {
            SymmetryKind::Translation(a) => magnetic_translate(f, a, gauge),
            SymmetryKind::Rotation { angle, center } => rotate(f, angle, center, gauge),
            SymmetryKind::RotationGenerator { .. } => Ok(gen.as_ref().expect("built above").apply(f)),
            SymmetryKind::SigmaT => sigma_t_in_gauge(f, gauge),
        }
    };
    states
        .iter()
        .map(|psi| {
            let h_psi = h.apply(psi);
            let a = h.apply(&apply(psi)?);
            let b = apply(&h_psi)?;
            Ok((&a - &b).norm() / h_psi.norm())
        })
        .collect()
}
