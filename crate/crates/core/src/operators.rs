//! Discrete operators acting on gridded wave functions.
//!
//! Every factory works in a chosen gauge through the covariant stencils of
//! [`crate::stencil`]; with the symmetric gauge they reproduce the textbook
//! coordinate forms, e.g. X̂ = x/2 − i l²∂_y and Ŷ = y/2 + i l²∂_x.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::Result;
use crate::gauge::GaugeField;
use crate::grid::Grid2D;
use crate::squeeze::SqueezeAngle;
use crate::stencil::{derivative, second_derivative, Axis, Connection, Stencil};

type ApplyFn = dyn Fn(&Grid2D) -> Grid2D + Send + Sync;

/// A named linear map on gridded fields.
#[derive(Clone)]
pub struct DiscreteOperator {
    name: String,
    order: usize,
    apply: Arc<ApplyFn>,
}

impl fmt::Debug for DiscreteOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiscreteOperator")
            .field("name", &self.name)
            .field("order", &self.order)
            .finish()
    }
}

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

impl DiscreteOperator {
    pub fn new<F>(name: impl Into<String>, order: usize, apply: F) -> Self
    where
        F: Fn(&Grid2D) -> Grid2D + Send + Sync + 'static,
    {
        DiscreteOperator {
            name: name.into(),
            order,
            apply: Arc::new(apply),
        }
    }

    pub fn identity() -> Self {
        // Exact operators report order 0; composites take the max.
        Self::new("1", 0, |f| f.clone())
    }

    /// Multiplication by a position-dependent function.
    pub fn multiply<F>(name: impl Into<String>, w: F) -> Self
    where
        F: Fn(f64, f64) -> Complex64 + Send + Sync + 'static,
    {
        Self::new(name, 0, move |f| f.map_with_position(|x, y, v| w(x, y) * v))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn stencil_order(&self) -> usize {
        self.order
    }

    pub fn apply(&self, f: &Grid2D) -> Grid2D {
        (self.apply)(f)
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// self ∘ other: applies `other` first.
    pub fn compose(&self, other: &DiscreteOperator) -> Self {
        let (a, b) = (self.apply.clone(), other.apply.clone());
        Self::new(
            format!("{}·{}", self.name, other.name),
            self.order.max(other.order),
            move |f| a(&b(f)),
        )
    }

    pub fn add(&self, other: &DiscreteOperator) -> Self {
        let (a, b) = (self.apply.clone(), other.apply.clone());
        Self::new(
            format!("({} + {})", self.name, other.name),
            self.order.max(other.order),
            move |f| &a(f) + &b(f),
        )
    }

    pub fn sub(&self, other: &DiscreteOperator) -> Self {
        let (a, b) = (self.apply.clone(), other.apply.clone());
        Self::new(
            format!("({} − {})", self.name, other.name),
            self.order.max(other.order),
            move |f| &a(f) - &b(f),
        )
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let a = self.apply.clone();
        Self::new(format!("{c}·{}", self.name), self.order, move |f| a(f).scaled(c))
    }

    /// self − c·1.
    pub fn shift(&self, c: Complex64) -> Self {
        let a = self.apply.clone();
        Self::new(format!("({} − {c})", self.name), self.order, move |f| {
            let mut out = a(f);
            for (o, v) in out.values_mut().iter_mut().zip(f.values()) {
                *o -= c * v;
            }
            out
        })
    }

    /// [self, other] = self·other − other·self.
    pub fn commutator(&self, other: &DiscreteOperator) -> Self {
        self.compose(other)
            .sub(&other.compose(self))
            .renamed(format!("[{}, {}]", self.name, other.name))
    }
}

/// Gauge and stencil shared by the operator factories.
#[derive(Debug, Clone)]
pub struct OperatorContext {
    gauge: GaugeField,
    stencil: Stencil,
}

impl OperatorContext {
    /// Symmetric gauge, fourth-order stencils.
    pub fn symmetric(units: crate::units::Units) -> Self {
        Self::new(GaugeField::symmetric(units), Stencil::fourth())
    }

    pub fn new(gauge: GaugeField, stencil: Stencil) -> Self {
        OperatorContext { gauge, stencil }
    }

    pub fn with_order(self, order: usize) -> Result<Self> {
        Ok(OperatorContext {
            stencil: Stencil::of_order(order)?,
            ..self
        })
    }

    pub fn gauge(&self) -> &GaugeField {
        &self.gauge
    }

    pub fn order(&self) -> usize {
        self.stencil.order
    }

    fn l2(&self) -> f64 {
        self.gauge.units().l2()
    }

    /// Covariant derivative ∂ − i a along `axis`.
    pub fn covariant(&self, axis: Axis) -> DiscreteOperator {
        let (g, st) = (self.gauge.clone(), self.stencil);
        let name = match axis {
            Axis::X => "D_x",
            Axis::Y => "D_y",
        };
        DiscreteOperator::new(name, st.order, move |f| derivative(f, Connection::Gauge(&g), axis, &st))
    }

    /// Canonical derivative ∂ along `axis`, ignoring the vector potential.
    pub fn canonical(&self, axis: Axis) -> DiscreteOperator {
        let st = self.stencil;
        let name = match axis {
            Axis::X => "∂_x",
            Axis::Y => "∂_y",
        };
        DiscreteOperator::new(name, st.order, move |f| derivative(f, Connection::Flat, axis, &st))
    }

    /// Kinetic velocity v̂ = −i∇ − a (ħ = m = 1).
    pub fn velocity(&self) -> (DiscreteOperator, DiscreteOperator) {
        let mi = Complex64::new(0.0, -1.0);
        (
            self.covariant(Axis::X).scale(mi).renamed("v_x"),
            self.covariant(Axis::Y).scale(mi).renamed("v_y"),
        )
    }

    /// Ladder operators c = (l/√2)(v_x + i v_y), c† = (l/√2)(v_x − i v_y),
    /// with [c, c†] = 1.
    pub fn ladder(&self) -> (DiscreteOperator, DiscreteOperator) {
        let (vx, vy) = self.velocity();
        let k = Complex64::new(self.gauge.units().l() / std::f64::consts::SQRT_2, 0.0);
        let c = vx.add(&vy.scale(I)).scale(k).renamed("c");
        let cd = vx.sub(&vy.scale(I)).scale(k).renamed("c†");
        (c, cd)
    }

    /// Ĥ = ½ (v_x² + v_y²) with the covariant second-derivative stencil.
    pub fn hamiltonian(&self) -> DiscreteOperator {
        let (g, st) = (self.gauge.clone(), self.stencil);
        DiscreteOperator::new("H", st.order, move |f| {
            let dxx = second_derivative(f, Connection::Gauge(&g), Axis::X, &st);
            let dyy = second_derivative(f, Connection::Gauge(&g), Axis::Y, &st);
            &(&dxx + &dyy) * -0.5
        })
    }

    /// Guiding center X̂ = x + l² v̂_y, Ŷ = y − l² v̂_x.
    pub fn guiding_center(&self) -> (DiscreteOperator, DiscreteOperator) {
        let l2 = Complex64::new(self.l2(), 0.0);
        let (vx, vy) = self.velocity();
        let x = DiscreteOperator::multiply("x", |x, _| Complex64::new(x, 0.0));
        let y = DiscreteOperator::multiply("y", |_, y| Complex64::new(y, 0.0));
        (x.add(&vy.scale(l2)).renamed("X"), y.sub(&vx.scale(l2)).renamed("Y"))
    }

    /// Guiding-center components along axes rotated by the real angle `theta`:
    /// X̂' = X̂ cos θ + Ŷ sin θ, Ŷ' = −X̂ sin θ + Ŷ cos θ.
    pub fn guiding_center_rotated(&self, theta: f64) -> (DiscreteOperator, DiscreteOperator) {
        let (x, y) = self.guiding_center();
        let (c, s) = (Complex64::new(theta.cos(), 0.0), Complex64::new(theta.sin(), 0.0));
        (
            x.scale(c).add(&y.scale(s)).renamed("X'"),
            y.scale(c).sub(&x.scale(s)).renamed("Y'"),
        )
    }

    /// X̂_Φ = X̂ cos Φ + Ŷ sin Φ.
    pub fn x_phi(&self, phi: &SqueezeAngle) -> DiscreteOperator {
        let (x, y) = self.guiding_center();
        x.scale(phi.cos()).add(&y.scale(phi.sin())).renamed("X_Φ")
    }

    /// X̂_Φ in the coordinate form x̃_Φ + X_Φ − i l² D_ỹ about `center`, where
    /// D_ỹ = −sin Φ D_x + cos Φ D_y is the covariant derivative along the
    /// complex-rotated ỹ axis. The center enters only through x̃_Φ + X_Φ and
    /// drops out of the sum.
    pub fn x_phi_coordinate(&self, phi: &SqueezeAngle, center: (f64, f64)) -> DiscreteOperator {
        let (c, s) = (phi.cos(), phi.sin());
        let x_phi = center.0 * c + center.1 * s;
        let position = DiscreteOperator::multiply("x̃_Φ + X_Φ", move |x, y| {
            (x - center.0) * c + (y - center.1) * s + x_phi
        });
        let d_yt = self.covariant(Axis::X).scale(-s).add(&self.covariant(Axis::Y).scale(c));
        position
            .add(&d_yt.scale(Complex64::new(0.0, -self.l2())))
            .renamed("X_Φ (coordinate form)")
    }

    /// Translation generator P̂ = v̂ + ẑ×r/l², equal to ẑ×R̂/l².
    pub fn translation_generator(&self) -> (DiscreteOperator, DiscreteOperator) {
        let b = 1.0 / self.l2();
        let (vx, vy) = self.velocity();
        (
            vx.add(&DiscreteOperator::multiply("−y/l²", move |_, y| {
                Complex64::new(-b * y, 0.0)
            }))
            .renamed("P_x"),
            vy.add(&DiscreteOperator::multiply("x/l²", move |x, _| {
                Complex64::new(b * x, 0.0)
            }))
            .renamed("P_y"),
        )
    }
}

/// Ladder operators in the symmetric gauge with fourth-order stencils.
pub fn make_ladder(units: crate::units::Units) -> (DiscreteOperator, DiscreteOperator) {
    OperatorContext::symmetric(units).ladder()
}

/// Hamiltonian in the symmetric gauge with fourth-order stencils.
pub fn make_hamiltonian(units: crate::units::Units) -> DiscreteOperator {
    OperatorContext::symmetric(units).hamiltonian()
}

/// X̂_Φ in the symmetric gauge, coordinate form about `center`.
pub fn make_x_phi(units: crate::units::Units, phi: &SqueezeAngle, center: (f64, f64)) -> DiscreteOperator {
    OperatorContext::symmetric(units).x_phi_coordinate(phi, center)
}

/// (P̂_x, P̂_y) in the given gauge.
pub fn make_p(gauge: &GaugeField) -> (DiscreteOperator, DiscreteOperator) {
    OperatorContext::new(gauge.clone(), Stencil::fourth()).translation_generator()
}

/// ⟨ψ|Ô|ψ⟩ by quadrature. The field is assumed normalized.
pub fn expectation(field: &Grid2D, op: &DiscreteOperator) -> Complex64 {
    field.inner(&op.apply(field)).expect("operator preserves geometry")
}

/// ‖(Ô − λ)ψ‖ / ‖ψ‖.
pub fn eigen_residual(field: &Grid2D, op: &DiscreteOperator, lambda: Complex64) -> f64 {
    op.shift(lambda).apply(field).norm() / field.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridGeometry;
    use crate::state::{field_on_grid, StateSpec};
    use crate::units::Units;

    fn state(n: usize, center: (f64, f64), phi1: f64, t: f64) -> StateSpec {
        StateSpec::new(n, center, SqueezeAngle::from_tanh(phi1, t).unwrap())
    }

    fn grid_for(spec: &StateSpec, h: f64) -> (GridGeometry, Grid2D) {
        let g = spec.covering_geometry(h).unwrap();
        let f = field_on_grid(spec, &g);
        (g, f)
    }

    #[test]
    fn linearity() {
        let ctx = OperatorContext::symmetric(Units::default());
        let (_, f) = grid_for(&state(1, (0.3, 0.0), 0.2, 0.5), 0.125);
        let (_, g) = grid_for(&state(1, (0.3, 0.0), 0.2, 0.5), 0.125);
        let g = g.map_with_position(|x, y, v| v * Complex64::new(x.cos(), y.sin()));
        let a = Complex64::new(0.7, -1.3);
        let b = Complex64::new(-0.2, 0.4);
        for op in [
            ctx.hamiltonian(),
            ctx.ladder().0,
            ctx.x_phi(&SqueezeAngle::new(0.1, -0.3).unwrap()),
        ] {
            let lhs = op.apply(&(&f.scaled(a) + &g.scaled(b)));
            let rhs = &op.apply(&f).scaled(a) + &op.apply(&g).scaled(b);
            assert!(
                (&lhs - &rhs).max_abs() < 1e-12 * lhs.max_abs().max(1.0),
                "{}",
                op.name()
            );
        }
    }

    #[test]
    fn both_x_phi_constructions_agree() {
        let ctx = OperatorContext::symmetric(Units::default());
        let s = state(2, (0.5, -0.25), 0.4, 0.3);
        let (_, f) = grid_for(&s, 0.125);
        let a = ctx.x_phi(&s.phi).apply(&f);
        let b = ctx.x_phi_coordinate(&s.phi, s.center).apply(&f);
        assert!((&a - &b).max_abs() < 1e-12 * a.max_abs());
    }

    #[test]
    fn hamiltonian_eigen_residual_converges_at_fourth_order() {
        let ctx = OperatorContext::symmetric(Units::default());
        let s = state(1, (0.25, 0.5), 0.3, 0.5);
        let r: Vec<f64> = [0.25, 0.125]
            .iter()
            .map(|&h| {
                let (_, f) = grid_for(&s, h);
                eigen_residual(&f, &ctx.hamiltonian(), Complex64::new(s.energy(), 0.0))
            })
            .collect();
        let rate = (r[0] / r[1]).log2();
        assert!((rate - 4.0).abs() < 0.3, "rate {rate}, residuals {r:?}");
    }

    #[test]
    fn ladder_adjointness() {
        let ctx = OperatorContext::symmetric(Units::default());
        let (c, cd) = ctx.ladder();
        let g = GridGeometry::centered((0.0, 0.0), 9.0, 0.1).unwrap();
        let chi = Grid2D::from_fn(g, |x, y| Complex64::new(x, 1.0 + y) * (-(x * x + y * y) / 3.0).exp());
        let psi = Grid2D::from_fn(g, |x, y| {
            Complex64::new(1.0, x * y) * (-((x - 1.0).powi(2) + y * y) / 2.0).exp()
        });
        let lhs = chi.inner(&c.apply(&psi)).unwrap();
        let rhs = cd.apply(&chi).inner(&psi).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn energy_expectation() {
        let ctx = OperatorContext::symmetric(Units::default()).with_order(6).unwrap();
        let s = state(3, (0.0, 0.0), 0.0, 0.5);
        let (_, f) = grid_for(&s, 1.0 / 16.0);
        let e = expectation(&f, &ctx.hamiltonian());
        assert!((e.re - 3.5).abs() < 1e-6 && e.im.abs() < 1e-10, "{e}");
    }

    #[test]
    fn p_equals_rotated_guiding_center() {
        let ctx = OperatorContext::symmetric(Units::default());
        let (x, y) = ctx.guiding_center();
        let (px, py) = ctx.translation_generator();
        let (_, f) = grid_for(&state(0, (1.0, 0.5), 0.0, 0.5), 0.125);
        let a = px.apply(&f);
        let b = y.apply(&f).scaled(Complex64::new(-1.0, 0.0));
        assert!((&a - &b).max_abs() < 1e-10 * a.max_abs());
        let a = py.apply(&f);
        let b = x.apply(&f);
        assert!((&a - &b).max_abs() < 1e-10 * a.max_abs());
    }
}
