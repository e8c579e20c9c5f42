//! Densities, currents, guiding-center moments, zeros and coherent-limit
//! diagnostics.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gauge::GaugeField;
use crate::grid::Grid2D;
use crate::hermite::hermite_roots;
use crate::operators::{expectation, OperatorContext};
use crate::squeeze::SqueezeAngle;
use crate::state::{field_on_grid, StateSpec, WaveFunction, DOMAIN_WARN_RATIO};
use crate::stencil::{derivative, Axis, Connection, Stencil};
use crate::symmetry::rotation_generator_with;
use crate::units::Units;

/// |ψ|² as a real grid.
pub fn density(field: &Grid2D) -> Grid2D {
    field.map(|v| Complex64::new(v.norm_sqr(), 0.0))
}

/// Probability current j = Re[ψ* v̂ ψ] (ħ = m = 1).
#[derive(Debug, Clone)]
pub struct CurrentField {
    pub jx: Grid2D,
    pub jy: Grid2D,
}

impl CurrentField {
    /// ∇·j with fourth-order central differences.
    pub fn divergence(&self) -> Grid2D {
        let st = Stencil::fourth();
        let a = derivative(&self.jx, Connection::Flat, Axis::X, &st);
        let b = derivative(&self.jy, Connection::Flat, Axis::Y, &st);
        a.zip_with(&b, |p, q| Complex64::new(p.re + q.re, 0.0))
            .expect("components share a geometry")
    }

    /// Largest |j| on the grid.
    pub fn max_magnitude(&self) -> f64 {
        self.jx
            .values()
            .iter()
            .zip(self.jy.values())
            .map(|(a, b)| a.re.hypot(b.re))
            .fold(0.0, f64::max)
    }
}

/// Gauge-covariant probability current of a gridded wave function.
pub fn current(field: &Grid2D, gauge: &GaugeField) -> CurrentField {
    let (vx, vy) = OperatorContext::new(gauge.clone(), Stencil::fourth()).velocity();
    let j = |v: Grid2D| {
        field
            .zip_with(&v, |p, q| Complex64::new((p.conj() * q).re, 0.0))
            .expect("operator preserves geometry")
    };
    CurrentField {
        jx: j(vx.apply(field)),
        jy: j(vy.apply(field)),
    }
}

/// Guiding-center statistics in the principal frame rotated by Φ₁.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentReport {
    pub mean_x: f64,
    pub mean_y: f64,
    pub var_xp: f64,
    pub var_yp: f64,
    /// ⟨ΔX'ΔY' + ΔY'ΔX'⟩.
    pub sym_cov: f64,
    pub product: f64,
}

impl MomentReport {
    /// Relative residual of (ΔX')² + tanh²Φ₂ (ΔY')² = −l² tanh Φ₂.
    pub fn variance_identity_residual(&self, phi: &SqueezeAngle, units: Units) -> f64 {
        let t = phi.phi2().tanh();
        let rhs = -units.l2() * t;
        (self.var_xp + t * t * self.var_yp - rhs).abs() / rhs.abs()
    }

    /// Ratio of principal standard deviations, ΔY'/ΔX'.
    pub fn elongation(&self) -> f64 {
        (self.var_yp / self.var_xp).sqrt()
    }
}

/// Guiding-center means, principal variances and symmetrized covariance,
/// measured by applying the discrete operators X̂', Ŷ' (symmetric gauge,
/// fourth order) rotated by Φ₁.
pub fn guiding_center_moments(field: &Grid2D, phi: &SqueezeAngle, units: Units) -> Result<MomentReport> {
    guiding_center_moments_with(&OperatorContext::symmetric(units), field, phi)
}

/// [`guiding_center_moments`] with the operators of `ctx`.
pub fn guiding_center_moments_with(ctx: &OperatorContext, field: &Grid2D, phi: &SqueezeAngle) -> Result<MomentReport> {
    let ratio = field.boundary_ratio(2);
    if ratio > DOMAIN_WARN_RATIO {
        return Err(Error::GridNotConverged {
            ratio,
            limit: DOMAIN_WARN_RATIO,
        });
    }
    let (xo, yo) = ctx.guiding_center_rotated(phi.phi1());
    let (xo, yo) = (xo.apply(field), yo.apply(field));
    let nrm = field.norm_sqr();
    let mean_xp = field.inner(&xo).expect("same grid").re / nrm;
    let mean_yp = field.inner(&yo).expect("same grid").re / nrm;
    let dx = field.zip_with(&xo, |f, g| g - mean_xp * f).expect("same grid");
    let dy = field.zip_with(&yo, |f, g| g - mean_yp * f).expect("same grid");
    let var_xp = dx.norm_sqr() / nrm;
    let var_yp = dy.norm_sqr() / nrm;
    let sym_cov = 2.0 * dx.inner(&dy).expect("same grid").re / nrm;
    let (c, s) = (phi.phi1().cos(), phi.phi1().sin());
    Ok(MomentReport {
        mean_x: c * mean_xp - s * mean_yp,
        mean_y: s * mean_xp + c * mean_yp,
        var_xp,
        var_yp,
        sym_cov,
        product: var_xp * var_yp,
    })
}

/// The N isolated zeros of Ψ(r|N,R): points where x̃_Φ = ξ_k l is real, with
/// ξ_k the roots of H_N.
pub fn zeros(spec: &StateSpec) -> Result<Vec<(f64, f64)>> {
    let (c, s) = (spec.phi.cos(), spec.phi.sin());
    // Re x̃ = ξ l, Im x̃ = 0 for the displacement (u, w) = r − R.
    let det = c.re * s.im - s.re * c.im;
    let scale = c.norm() * s.norm();
    if !(det.abs() > 1e-300 && det.abs() > 1e-15 * scale) {
        return Err(Error::DegenerateFrame);
    }
    let l = spec.units.l();
    Ok(hermite_roots(spec.n)
        .into_iter()
        .map(|xi| {
            let b = xi * l;
            let u = b * s.im / det;
            let w = -b * c.im / det;
            (spec.center.0 + u, spec.center.1 + w)
        })
        .collect())
}

/// Rotational-invariance and angular-momentum diagnostics of a state about
/// its guiding center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentReport {
    /// max over circles about R of (max − min of |ψ|² on the circle) / peak |ψ|².
    pub azimuthal_variation: f64,
    /// ⟨L̂_z⟩ about the origin (symmetric gauge), in units of ħ.
    pub lz: f64,
}

/// Diagnostics for the coherent limit Φ₂ → −∞, where the density is
/// rotationally symmetric and a state centered at the origin has L_z = −ħN.
/// ⟨L̂_z⟩ uses sixth-order stencils at h = l/16.
pub fn coherent_limit_check(spec: &StateSpec) -> Result<CoherentReport> {
    let l = spec.units.l();
    let wf = WaveFunction::new(*spec);
    let (var_short, var_long) = spec.principal_variances();
    let spread = (var_long.max(var_short) + l * l * (spec.n as f64 + 0.5)).sqrt();
    let n_angles = 96;
    let n_radii = 80;
    let mut peak = 0.0f64;
    let mut rings = Vec::with_capacity(n_radii);
    for k in 0..=n_radii {
        let r = 4.0 * spread * k as f64 / n_radii as f64;
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for a in 0..n_angles {
            let t = 2.0 * PI * a as f64 / n_angles as f64;
            let d = wf
                .eval(spec.center.0 + r * t.cos(), spec.center.1 + r * t.sin())
                .norm_sqr();
            lo = lo.min(d);
            hi = hi.max(d);
        }
        peak = peak.max(hi);
        rings.push(hi - lo);
    }
    let azimuthal_variation = rings.into_iter().fold(0.0, f64::max) / peak;

    let geom = spec.covering_geometry(l / 16.0)?;
    let field = field_on_grid(spec, &geom);
    let ctx = OperatorContext::new(GaugeField::symmetric(spec.units), Stencil::of_order(6)?);
    let lz_op = rotation_generator_with(&ctx, (0.0, 0.0));
    let lz = expectation(&field, &lz_op).re / field.norm_sqr();
    Ok(CoherentReport {
        azimuthal_variation,
        lz,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::state_eval;

    fn spec(n: usize, center: (f64, f64), phi1: f64, t: f64) -> StateSpec {
        StateSpec::new(n, center, SqueezeAngle::from_tanh(phi1, t).unwrap())
    }

    #[test]
    fn density_is_nonnegative_and_normalized() {
        let s = spec(2, (0.0, 0.0), 0.0, 0.5);
        let f = field_on_grid(&s, &s.covering_geometry(0.125).unwrap());
        let d = density(&f);
        assert!(d.values().iter().all(|v| v.re >= 0.0 && v.im == 0.0));
        assert!((d.integral_real() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn real_field_without_potential_has_no_current() {
        let g = crate::grid::GridGeometry::centered((0.0, 0.0), 6.0, 0.1).unwrap();
        let f = Grid2D::from_fn(g, |x, y| Complex64::new((-(x * x + y * y)).exp(), 0.0));
        let flat = GaugeField::custom(Units::default(), |_, _| (0.0, 0.0));
        assert_eq!(current(&f, &flat).max_magnitude(), 0.0);
    }

    #[test]
    fn moments_match_closed_form() {
        let s = spec(1, (0.5, -0.25), 0.7, 0.5);
        let f = field_on_grid(&s, &s.covering_geometry(1.0 / 16.0).unwrap());
        let m = guiding_center_moments(&f, &s.phi, s.units).unwrap();
        let (vx, vy) = s.principal_variances();
        assert!((m.mean_x - 0.5).abs() < 1e-8 && (m.mean_y + 0.25).abs() < 1e-8);
        assert!((m.var_xp / vx - 1.0).abs() < 1e-6, "{m:?}");
        assert!((m.var_yp / vy - 1.0).abs() < 1e-6, "{m:?}");
        assert!(m.sym_cov.abs() < 1e-8);
        assert!(m.variance_identity_residual(&s.phi, s.units) < 1e-6);
    }

    #[test]
    fn truncated_grid_is_flagged() {
        let s = spec(0, (0.0, 0.0), 0.0, 0.5);
        let g = crate::grid::GridGeometry::centered((0.0, 0.0), 3.0, 0.125).unwrap();
        let f = field_on_grid(&s, &g);
        assert!(matches!(
            guiding_center_moments(&f, &s.phi, s.units),
            Err(Error::GridNotConverged { .. })
        ));
    }

    #[test]
    fn zeros_lie_on_nodes() {
        assert!(zeros(&spec(0, (0.0, 0.0), 0.0, 0.1)).unwrap().is_empty());
        let z = zeros(&spec(1, (0.0, 0.0), 0.9, 0.3)).unwrap();
        assert_eq!(z.len(), 1);
        assert!(z[0].0.abs() < 1e-15 && z[0].1.abs() < 1e-15);
        for n in 1..=10 {
            let s = spec(n, (0.4, -1.1), 0.6, 0.3);
            let z = zeros(&s).unwrap();
            assert_eq!(z.len(), n);
            let peak = (0..400)
                .map(|k| {
                    let t = k as f64 * 0.05 - 10.0;
                    state_eval(&s, (0.4 + t * 0.6f64.cos(), -1.1 + t * 0.6f64.sin())).norm()
                })
                .fold(0.0, f64::max);
            for p in z {
                assert!(state_eval(&s, p).norm() < 1e-10 * peak);
            }
        }
    }

    #[test]
    fn coherent_ground_state_is_round_with_zero_lz() {
        let s = StateSpec::new(0, (0.0, 0.0), SqueezeAngle::new(0.0, -10.0).unwrap());
        let r = coherent_limit_check(&s).unwrap();
        assert!(r.azimuthal_variation < 1e-6);
        assert!(r.lz.abs() < 1e-6);
    }

    #[test]
    fn elongated_state_is_not_round() {
        let s = StateSpec::new(2, (0.0, 0.0), SqueezeAngle::new(0.0, -0.1).unwrap());
        let r = coherent_limit_check(&s).unwrap();
        assert!(r.azimuthal_variation > 0.1);
    }
}
