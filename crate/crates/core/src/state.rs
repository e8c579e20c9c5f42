//! Squeezed-state wave functions in the symmetric gauge.
//!
//! The level-N state centered at R reads
//!
//! ```text
//! Ψ(r|N,R) = C_Φ (i e^{−iΦ})^N / √(2^N N!)
//!            · exp( i(Xy − Yx)/2l² − x̃_Φ(x̃_Φ + iỹ_Φ)/2l² ) · H_N(x̃_Φ/l)
//! ```
//!
//! with C_Φ real positive. The prefactor is kept exactly as written even though
//! |e^{−iΦ}| ≠ 1: the norm works out because the state equals
//! (c†)^N Ψ(r|0,R)/√N!.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::coords::{project, rotated_chiral, rotated_coords};
use crate::error::{Error, Result};
use crate::grid::{Grid2D, GridGeometry};
use crate::hermite::hermite_scaled_phased;
use crate::squeeze::SqueezeAngle;
use crate::units::Units;

/// Boundary-to-peak modulus ratio above which a sampled field is flagged.
pub const DOMAIN_WARN_RATIO: f64 = 1e-9;

/// Largest node count per side produced by [`StateSpec::covering_geometry`].
pub const MAX_GRID_SIDE: usize = 16385;

/// Full label of a squeezed state |R, N⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateSpec {
    pub n: usize,
    pub center: (f64, f64),
    pub phi: SqueezeAngle,
    pub units: Units,
}

impl StateSpec {
    pub fn new(n: usize, center: (f64, f64), phi: SqueezeAngle) -> Self {
        StateSpec {
            n,
            center,
            phi,
            units: Units::default(),
        }
    }

    pub fn with_units(mut self, units: Units) -> Self {
        self.units = units;
        self
    }

    pub fn with_level(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn with_center(mut self, center: (f64, f64)) -> Self {
        self.center = center;
        self
    }

    /// ħω_c(N + 1/2).
    pub fn energy(&self) -> f64 {
        self.units.landau_energy(self.n)
    }

    /// Eigenvalue X cos Φ + Y sin Φ of X̂_Φ.
    pub fn x_phi(&self) -> Complex64 {
        project(self.center, self.phi.complex())
    }

    /// Y_Φ = −X sin Φ + Y cos Φ.
    pub fn y_phi(&self) -> Complex64 {
        let p = self.phi.complex();
        -self.center.0 * p.sin() + self.center.1 * p.cos()
    }

    /// Guiding-center variances ((ΔX')², (ΔY')²) in the principal axes.
    pub fn principal_variances(&self) -> (f64, f64) {
        let l2 = self.units.l2();
        let t = self.phi.tanh_abs();
        (0.5 * l2 * t, 0.5 * l2 / t)
    }

    /// Square grid of spacing `h` on which the sampled state has decayed
    /// below roughly 1e−12 of its peak modulus at the boundary.
    pub fn covering_geometry(&self, h: f64) -> Result<GridGeometry> {
        let l = self.units.l();
        let (_, var_long) = self.principal_variances();
        let spread = (var_long + l * l * (self.n as f64 + 0.5)).sqrt();
        let half = 11.0 * spread + 2.0 * l;
        if half / h > MAX_GRID_SIDE as f64 / 2.0 {
            return Err(Error::InvalidGrid(format!(
                "covering grid would need more than {MAX_GRID_SIDE} nodes per side (half width {half:.3e}, spacing {h})"
            )));
        }
        let c = ((self.center.0 / h).round() * h, (self.center.1 / h).round() * h);
        GridGeometry::centered(c, half, h)
    }
}

/// |C_Φ| with |C_Φ|² = √(1 − e^{4Φ₂}) / (2πl²).
pub fn normalization_constant(phi: &SqueezeAngle, l: f64) -> f64 {
    (phi.one_minus_exp4().sqrt() / (2.0 * PI * l * l)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Form {
    /// Level-N expression, valid for every N.
    Level,
    /// The N = 0 closed form written with X_Φ and Y_Φ.
    Ground,
}

/// Evaluator for a single squeezed state.
#[derive(Debug, Clone, Copy)]
pub struct WaveFunction {
    spec: StateSpec,
    form: Form,
    c_phi: f64,
    cos: Complex64,
    sin: Complex64,
    exp_neg_i: Complex64,
    i_pow_n: Complex64,
    x_phi: Complex64,
    y_phi: Complex64,
}

impl WaveFunction {
    fn build(spec: StateSpec, form: Form) -> Self {
        let phi = spec.phi;
        let i_pow_n = match spec.n % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        WaveFunction {
            spec,
            form,
            c_phi: normalization_constant(&phi, spec.units.l()),
            cos: phi.cos(),
            sin: phi.sin(),
            exp_neg_i: phi.exp_neg_i(),
            i_pow_n,
            x_phi: spec.x_phi(),
            y_phi: spec.y_phi(),
        }
    }

    pub fn new(spec: StateSpec) -> Self {
        Self::build(spec, Form::Level)
    }

    pub fn spec(&self) -> &StateSpec {
        &self.spec
    }

    pub fn normalization(&self) -> f64 {
        self.c_phi
    }

    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        let l2 = self.spec.units.l2();
        let (cx, cy) = self.spec.center;
        let (u, w) = (x - cx, y - cy);
        let xt = u * self.cos + w * self.sin;
        match self.form {
            Form::Level => {
                let chiral = rotated_chiral((x, y), self.spec.center, self.exp_neg_i);
                let phase = (cx * y - cy * x) / (2.0 * l2);
                let exponent = Complex64::new(0.0, phase) - xt * chiral / (2.0 * l2);
                let poly = hermite_scaled_phased(self.spec.n, xt / self.spec.units.l(), self.exp_neg_i);
                self.c_phi * self.i_pow_n * poly * exponent.exp()
            }
            Form::Ground => {
                let yt = -u * self.sin + w * self.cos;
                let i = Complex64::i();
                let q = xt * xt + i * xt * yt + i * xt * self.y_phi - i * yt * self.x_phi;
                self.c_phi * (-q / (2.0 * l2)).exp()
            }
        }
    }
}

/// The Landau-level-0 state in its closed ground-state form.
pub fn ground_state(spec: &StateSpec) -> Result<WaveFunction> {
    if spec.n != 0 {
        return Err(Error::WrongLevel { n: spec.n });
    }
    Ok(WaveFunction::build(*spec, Form::Ground))
}

/// Ψ(r|N,R) at a single point.
pub fn state_eval(spec: &StateSpec, r: (f64, f64)) -> Complex64 {
    WaveFunction::new(*spec).eval(r.0, r.1)
}

/// Sample the state on a grid.
pub fn field_on_grid(spec: &StateSpec, geom: &GridGeometry) -> Grid2D {
    let wf = WaveFunction::new(*spec);
    Grid2D::from_fn(*geom, |x, y| wf.eval(x, y))
}

/// Like [`field_on_grid`] but rejects grids whose boundary samples exceed
/// 1e−9 of the peak modulus.
pub fn field_on_grid_checked(spec: &StateSpec, geom: &GridGeometry) -> Result<Grid2D> {
    let f = field_on_grid(spec, geom);
    let ratio = f.boundary_ratio(1);
    if ratio > DOMAIN_WARN_RATIO {
        return Err(Error::DomainTooSmall {
            ratio,
            limit: DOMAIN_WARN_RATIO,
        });
    }
    Ok(f)
}

/// Rotated coordinates of a point for this state (re-export convenience).
pub fn state_coords(spec: &StateSpec, r: (f64, f64)) -> (Complex64, Complex64) {
    rotated_coords(r, spec.center, spec.phi.complex())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize, center: (f64, f64), phi1: f64, phi2: f64) -> StateSpec {
        StateSpec::new(n, center, SqueezeAngle::new(phi1, phi2).unwrap())
    }

    #[test]
    fn normalization_constant_values() {
        let phi = SqueezeAngle::from_tanh(0.0, 0.1).unwrap();
        // 40-digit evaluation: √(1 − (0.9/1.1)²)/(2π)
        let c2 = normalization_constant(&phi, 1.0).powi(2);
        assert!((c2 - 0.091_507_658_371_794_61).abs() < 1e-15);
        let coherent = SqueezeAngle::new(0.0, -30.0).unwrap();
        assert!((normalization_constant(&coherent, 1.0).powi(2) - 1.0 / (2.0 * PI)).abs() < 1e-16);
        let strip = SqueezeAngle::new(0.0, -1e-14).unwrap();
        assert!(normalization_constant(&strip, 1.0).powi(2) < 1e-7);
        // scales as 1/l
        let a = normalization_constant(&phi, 2.0);
        assert!((a * 2.0 - normalization_constant(&phi, 1.0)).abs() < 1e-16);
    }

    #[test]
    fn ground_form_matches_level_form() {
        for &(c, p1, p2) in &[
            ((0.0, 0.0), 0.0, -0.1),
            ((0.7, -1.2), 0.4, -0.6),
            ((-2.0, 1.0), -2.0, -1.5),
        ] {
            let s = spec(0, c, p1, p2);
            let g = ground_state(&s).unwrap();
            for &(x, y) in &[(0.3, 0.2), (-1.0, 2.0), (2.5, -0.4), (c.0, c.1)] {
                let a = g.eval(x, y);
                let b = state_eval(&s, (x, y));
                assert!((a - b).norm() < 1e-14, "{a} vs {b}");
            }
        }
        assert!(matches!(
            ground_state(&spec(1, (0.0, 0.0), 0.0, -1.0)),
            Err(Error::WrongLevel { n: 1 })
        ));
    }

    #[test]
    fn center_modulus_is_normalization() {
        let s = spec(0, (1.5, -0.5), 0.0, -0.3);
        let v = state_eval(&s, s.center);
        assert!((v.norm() - normalization_constant(&s.phi, 1.0)).abs() < 1e-15);
    }

    #[test]
    fn ground_density_reference_point() {
        // Φ = −0.1i, R = 0, r = (1, 0); 40-digit evaluation of |Ψ|².
        let s = spec(0, (0.0, 0.0), 0.0, -0.1);
        let d = state_eval(&s, (1.0, 0.0)).norm_sqr();
        assert!((d - 0.036_807_306_447_604_3).abs() < 1e-15);
    }

    #[test]
    fn level_one_vanishes_at_center() {
        for &(p1, p2) in &[(0.0, -0.1), (1.0, -2.0), (-0.5, -0.01)] {
            let s = spec(1, (0.4, 0.9), p1, p2);
            assert!(state_eval(&s, s.center).norm() < 1e-16);
        }
    }

    #[test]
    fn n2_zero_on_x_axis() {
        let s = StateSpec::new(2, (0.0, 0.0), SqueezeAngle::from_tanh(0.0, 0.1).unwrap());
        let x0 = 0.703_562_363_973_514_4;
        let peak = field_on_grid(&s, &s.covering_geometry(0.1).unwrap()).max_abs();
        assert!(state_eval(&s, (x0, 0.0)).norm() < 1e-14 * peak);
        assert!(state_eval(&s, (-x0, 0.0)).norm() < 1e-14 * peak);
    }

    #[test]
    fn coherent_limit_is_finite_and_round() {
        let s = spec(3, (0.0, 0.0), 0.0, -10.0);
        let a = state_eval(&s, (1.2, 0.0)).norm();
        let b = state_eval(&s, (0.0, 1.2)).norm();
        let c = state_eval(&s, (1.2 / 2f64.sqrt(), -1.2 / 2f64.sqrt())).norm();
        assert!(a.is_finite() && a > 0.0);
        // Residual anisotropy is of order e^{2Φ₂} ≈ 2e−9.
        assert!((a - b).abs() < 1e-7 * a && (a - c).abs() < 1e-7 * a);
    }

    #[test]
    fn grid_norm_and_domain_check() {
        let s = spec(0, (0.0, 0.0), 0.0, -10.0);
        let g = GridGeometry::from_bounds(-6.0, 6.0, -6.0, 6.0, 256, 256).unwrap();
        let f = field_on_grid(&s, &g);
        let ((i, j), _) = f.argmax_abs();
        assert!((g.x(i)).abs() < 0.05 && (g.y(j)).abs() < 0.05);
        let small = GridGeometry::from_bounds(-2.0, 2.0, -2.0, 2.0, 64, 64).unwrap();
        assert!(matches!(
            field_on_grid_checked(&s, &small),
            Err(Error::DomainTooSmall { .. })
        ));
        let cover = s.covering_geometry(0.25).unwrap();
        assert!(field_on_grid_checked(&s, &cover).is_ok());
        assert!((field_on_grid(&s, &cover).norm_sqr() - 1.0).abs() < 1e-12);
    }
}
