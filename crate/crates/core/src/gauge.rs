//! Vector potentials of a homogeneous field and their line integrals.
//!
//! Potentials are stored in reduced form a = (e/ħc)A, so the field strength
//! is curl a = 1/l² and the phase picked up along a path is ∫a·dr.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quad::integrate;
use crate::units::Units;

type PotentialFn = dyn Fn(f64, f64) -> (f64, f64) + Send + Sync;

#[derive(Clone)]
pub enum GaugeKind {
    /// a = (1/2l²)(−y, x).
    Symmetric,
    /// a = n ((ẑ×r)·n)/l², invariant under translations along the unit vector n.
    LandauDirection { nx: f64, ny: f64 },
    /// User potential returning (a_x, a_y) in reduced units.
    Custom(Arc<PotentialFn>),
}

impl fmt::Debug for GaugeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaugeKind::Symmetric => write!(f, "Symmetric"),
            GaugeKind::LandauDirection { nx, ny } => write!(f, "LandauDirection({nx}, {ny})"),
            GaugeKind::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// A vector potential for the homogeneous field of strength 1/l².
#[derive(Debug, Clone)]
pub struct GaugeField {
    kind: GaugeKind,
    units: Units,
}

const GL8_X: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_2,
];
const GL8_W: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

impl GaugeField {
    pub fn symmetric(units: Units) -> Self {
        GaugeField {
            kind: GaugeKind::Symmetric,
            units,
        }
    }

    /// Landau gauge invariant under translations along `direction`.
    pub fn landau(units: Units, direction: (f64, f64)) -> Result<Self> {
        let norm = direction.0.hypot(direction.1);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidGrid(format!("zero Landau direction {direction:?}")));
        }
        Ok(GaugeField {
            kind: GaugeKind::LandauDirection {
                nx: direction.0 / norm,
                ny: direction.1 / norm,
            },
            units,
        })
    }

    pub fn custom<F>(units: Units, potential: F) -> Self
    where
        F: Fn(f64, f64) -> (f64, f64) + Send + Sync + 'static,
    {
        GaugeField {
            kind: GaugeKind::Custom(Arc::new(potential)),
            units,
        }
    }

    pub fn kind(&self) -> &GaugeKind {
        &self.kind
    }

    pub fn units(&self) -> Units {
        self.units
    }

    /// Built-in potentials are linear in (x, y).
    pub fn is_linear(&self) -> bool {
        !matches!(self.kind, GaugeKind::Custom(_))
    }

    pub fn is_symmetric(&self) -> bool {
        matches!(self.kind, GaugeKind::Symmetric)
    }

    /// Reduced potential (a_x, a_y) at (x, y).
    pub fn potential(&self, x: f64, y: f64) -> (f64, f64) {
        let b = self.units.field();
        match &self.kind {
            GaugeKind::Symmetric => (-0.5 * b * y, 0.5 * b * x),
            GaugeKind::LandauDirection { nx, ny } => {
                let s = b * (x * ny - y * nx);
                (nx * s, ny * s)
            }
            GaugeKind::Custom(f) => f(x, y),
        }
    }

    /// ∫ a·dr along the straight segment from `p` to `q`.
    ///
    /// Built-in potentials are linear, so the midpoint rule is exact; custom
    /// potentials use 8-point Gauss–Legendre, exact for polynomials of degree
    /// up to 15.
    pub fn segment_integral(&self, p: (f64, f64), q: (f64, f64)) -> f64 {
        let d = (q.0 - p.0, q.1 - p.1);
        match &self.kind {
            GaugeKind::Custom(f) => {
                let mid = (0.5 * (p.0 + q.0), 0.5 * (p.1 + q.1));
                let mut acc = 0.0;
                for k in 0..4 {
                    for sgn in [-1.0, 1.0] {
                        let t = 0.5 * sgn * GL8_X[k];
                        let (ax, ay) = f(mid.0 + t * d.0, mid.1 + t * d.1);
                        acc += GL8_W[k] * (ax * d.0 + ay * d.1);
                    }
                }
                0.5 * acc
            }
            _ => {
                let (ax, ay) = self.potential(0.5 * (p.0 + q.0), 0.5 * (p.1 + q.1));
                ax * d.0 + ay * d.1
            }
        }
    }

    /// Field strength ∂_x a_y − ∂_y a_x at a point (4th-order differences for
    /// custom potentials).
    pub fn curl(&self, x: f64, y: f64) -> f64 {
        match &self.kind {
            GaugeKind::Custom(f) => {
                let h = 1e-3 * self.units.l();
                let d = |g: &dyn Fn(f64) -> f64| (g(-2.0) - 8.0 * g(-1.0) + 8.0 * g(1.0) - g(2.0)) / (12.0 * h);
                let day_dx = d(&|k| f(x + k * h, y).1);
                let dax_dy = d(&|k| f(x, y + k * h).0);
                day_dx - dax_dy
            }
            _ => self.units.field(),
        }
    }

    /// Largest deviation of the curl from 1/l² over `points`.
    pub fn curl_defect(&self, points: &[(f64, f64)]) -> f64 {
        let b = self.units.field();
        points
            .iter()
            .map(|&(x, y)| (self.curl(x, y) - b).abs())
            .fold(0.0, f64::max)
    }

    /// Error unless `other` describes the same field at a handful of probe points.
    pub fn check_same_field(&self, other: &GaugeField) -> Result<()> {
        let l = self.units.l().max(other.units.l());
        let probes = [
            (0.0, 0.0),
            (1.3 * l, -0.7 * l),
            (-2.1 * l, 0.4 * l),
            (0.5 * l, 3.2 * l),
            (-4.0 * l, -4.0 * l),
        ];
        for &(x, y) in &probes {
            let (a, b) = (self.curl(x, y), other.curl(x, y));
            if (a - b).abs() > 1e-6 * a.abs().max(b.abs()).max(1.0) {
                return Err(Error::CurlMismatch { left: a, right: b });
            }
        }
        Ok(())
    }
}

/// A gauge-transformation phase χ(r) = ∫₀^r (a_to − a_from)·dr, taken along
/// the straight segment from the origin.
///
/// Multiplying a wave function written in gauge `from` by e^{iχ} expresses it
/// in gauge `to`.
#[derive(Debug, Clone)]
pub struct GaugePhase {
    from: GaugeField,
    to: GaugeField,
    tol: f64,
}

impl GaugePhase {
    /// χ at (x, y), by adaptive quadrature along the segment 0 → r.
    pub fn chi(&self, x: f64, y: f64) -> f64 {
        self.chi_between((0.0, 0.0), (x, y))
    }

    /// ∫_p^q (a_to − a_from)·dr along the straight segment p → q.
    pub fn chi_between(&self, p: (f64, f64), q: (f64, f64)) -> f64 {
        let d = (q.0 - p.0, q.1 - p.1);
        if d.0 == 0.0 && d.1 == 0.0 {
            return 0.0;
        }
        let integrand = |t: f64| {
            let (x, y) = (p.0 + t * d.0, p.1 + t * d.1);
            let (ax, ay) = self.to.potential(x, y);
            let (bx, by) = self.from.potential(x, y);
            (ax - bx) * d.0 + (ay - by) * d.1
        };
        integrate(integrand, 0.0, 1.0, self.tol)
    }

    /// χ along the two-leg path 0 → (x, 0) → (x, y).
    pub fn chi_l_path(&self, x: f64, y: f64) -> f64 {
        self.chi_between((0.0, 0.0), (x, 0.0)) + self.chi_between((x, 0.0), (x, y))
    }

    pub fn from_gauge(&self) -> &GaugeField {
        &self.from
    }

    pub fn to_gauge(&self) -> &GaugeField {
        &self.to
    }
}

/// Phase that carries wave functions from gauge `from` to gauge `to`.
pub fn gauge_phase(from: &GaugeField, to: &GaugeField) -> Result<GaugePhase> {
    from.check_same_field(to)?;
    Ok(GaugePhase {
        from: from.clone(),
        to: to.clone(),
        tol: 1e-10,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn units() -> Units {
        Units::default()
    }

    #[test]
    fn curls_equal_field() {
        let pts = [(0.0, 0.0), (1.0, 2.0), (-3.0, 0.5), (7.0, -4.0)];
        let u = Units::new(1.7).unwrap();
        assert!(GaugeField::symmetric(u).curl_defect(&pts) < 1e-14);
        assert!(GaugeField::landau(u, (0.6, -0.8)).unwrap().curl_defect(&pts) < 1e-14);
        let custom = GaugeField::custom(u, move |x, y| (-y / (1.7 * 1.7) + x * x, y.sin()));
        assert!(custom.curl_defect(&pts) < 1e-8);
    }

    #[test]
    fn identical_gauges_give_zero_phase() {
        let g = GaugeField::symmetric(units());
        let p = gauge_phase(&g, &g).unwrap();
        assert_eq!(p.chi(3.0, -2.0), 0.0);
    }

    #[test]
    fn symmetric_to_landau_x_phase() {
        let p = gauge_phase(
            &GaugeField::symmetric(units()),
            &GaugeField::landau(units(), (1.0, 0.0)).unwrap(),
        )
        .unwrap();
        for &(x, y) in &[(1.0, 1.0), (2.5, -0.4), (-3.0, 1.7)] {
            assert!((p.chi(x, y) + x * y / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn straight_and_l_paths_agree() {
        let custom = GaugeField::custom(units(), |x, y| (-y + 0.3 * x * x, 0.2 * y.cos()));
        let p = gauge_phase(&GaugeField::symmetric(units()), &custom).unwrap();
        for &(x, y) in &[(1.0, 2.0), (-2.0, 0.7), (3.3, -1.1)] {
            assert!((p.chi(x, y) - p.chi_l_path(x, y)).abs() < 1e-8);
        }
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let strong = GaugeField::symmetric(Units::new(0.5).unwrap());
        let weak = GaugeField::symmetric(units());
        assert!(matches!(gauge_phase(&strong, &weak), Err(Error::CurlMismatch { .. })));
    }

    #[test]
    fn segment_integral_matches_quadrature() {
        let custom = GaugeField::custom(units(), |x, y| (-y + x * x * y, x + y * y * y));
        let (p, q) = ((0.3, -1.2), (1.1, 0.4));
        let d = (q.0 - p.0, q.1 - p.1);
        let reference = integrate(
            |t| {
                let (ax, ay) = custom.potential(p.0 + t * d.0, p.1 + t * d.1);
                ax * d.0 + ay * d.1
            },
            0.0,
            1.0,
            1e-13,
        );
        assert!((custom.segment_integral(p, q) - reference).abs() < 1e-12);
    }
}
