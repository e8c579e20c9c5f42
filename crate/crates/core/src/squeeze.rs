//! The complex squeeze angle Φ = Φ₁ + iΦ₂.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A validated squeeze angle. `phi2 < 0` always holds and `phi1` lies in (−π, π].
///
/// Φ₁ orients the principal axes of the guiding-center fluctuations and Φ₂
/// sets their anisotropy, (ΔX')²/(ΔY')² = tanh²Φ₂.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeAngle {
    phi1: f64,
    phi2: f64,
}

/// Reduce an angle to (−π, π].
pub(crate) fn canonical_angle(a: f64) -> f64 {
    let mut r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    r
}

/// Sole gate for squeeze angles: accepts Φ iff Im Φ < 0.
pub fn validate_squeeze(phi: Complex64) -> Result<SqueezeAngle> {
    if !phi.re.is_finite() || phi.im.is_nan() {
        return Err(Error::NonFiniteAngle);
    }
    if !(phi.im < 0.0) {
        return Err(Error::NonNormalizable { phi2: phi.im });
    }
    Ok(SqueezeAngle {
        phi1: canonical_angle(phi.re),
        phi2: phi.im,
    })
}

impl SqueezeAngle {
    pub fn new(phi1: f64, phi2: f64) -> Result<Self> {
        validate_squeeze(Complex64::new(phi1, phi2))
    }

    /// Angle with principal-axis orientation `phi1` and anisotropy
    /// |tanh Φ₂| = `tanh_abs`, which must lie in (0, 1).
    pub fn from_tanh(phi1: f64, tanh_abs: f64) -> Result<Self> {
        if !(tanh_abs > 0.0 && tanh_abs < 1.0) {
            return Err(Error::NonNormalizable {
                phi2: -tanh_abs.atanh(),
            });
        }
        Self::new(phi1, -tanh_abs.atanh())
    }

    #[inline]
    pub fn phi1(&self) -> f64 {
        self.phi1
    }

    #[inline]
    pub fn phi2(&self) -> f64 {
        self.phi2
    }

    #[inline]
    pub fn complex(&self) -> Complex64 {
        Complex64::new(self.phi1, self.phi2)
    }

    #[inline]
    pub fn cos(&self) -> Complex64 {
        self.complex().cos()
    }

    #[inline]
    pub fn sin(&self) -> Complex64 {
        self.complex().sin()
    }

    /// e^{−iΦ}, whose modulus e^{Φ₂} is below one.
    #[inline]
    pub fn exp_neg_i(&self) -> Complex64 {
        Complex64::from_polar(self.phi2.exp(), -self.phi1)
    }

    /// |tanh Φ₂|, the ratio ΔX'/ΔY' of principal guiding-center spreads.
    pub fn tanh_abs(&self) -> f64 {
        (-self.phi2).tanh()
    }

    /// 1 − e^{4Φ₂}, evaluated without cancellation for Φ₂ ≪ 0.
    pub fn one_minus_exp4(&self) -> f64 {
        -(4.0 * self.phi2).exp_m1()
    }

    /// Angle seen from a frame rotated by `angle`: Φ₁ → Φ₁ − angle.
    pub fn rotated_frame(&self, angle: f64) -> SqueezeAngle {
        SqueezeAngle {
            phi1: canonical_angle(self.phi1 - angle),
            phi2: self.phi2,
        }
    }
}

/// Squeeze parameter r with tanh r = e^{2Φ₂}.
pub fn squeeze_strength(phi: &SqueezeAngle) -> f64 {
    (2.0 * phi.phi2).exp().atanh()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_only_negative_imaginary_part() {
        assert!(validate_squeeze(Complex64::new(0.3, -0.1)).is_ok());
        assert!(matches!(
            validate_squeeze(Complex64::new(0.3, 0.1)),
            Err(Error::NonNormalizable { .. })
        ));
        assert!(matches!(
            validate_squeeze(Complex64::new(0.3, 0.0)),
            Err(Error::NonNormalizable { .. })
        ));
        assert!(validate_squeeze(Complex64::new(f64::NAN, -1.0)).is_err());
        assert!(validate_squeeze(Complex64::new(0.0, f64::NAN)).is_err());
    }

    #[test]
    fn phi1_is_canonicalized() {
        let a = SqueezeAngle::new(3.0 * PI, -0.2).unwrap();
        assert!((a.phi1() - PI).abs() < 1e-12);
        let b = SqueezeAngle::new(-PI, -0.2).unwrap();
        assert!((b.phi1() - PI).abs() < 1e-12);
        let c = SqueezeAngle::new(-2.5, -0.2).unwrap();
        assert!((c.phi1() + 2.5).abs() < 1e-15);
    }

    #[test]
    fn rotation_shifts_phi1_only() {
        let a = SqueezeAngle::new(0.4, -0.7).unwrap();
        let b = a.rotated_frame(0.1);
        assert!((b.phi1() - 0.3).abs() < 1e-15);
        assert_eq!(b.phi2(), a.phi2());
    }

    #[test]
    fn strength_limits() {
        let half = SqueezeAngle::new(0.0, -(2.0f64).ln() / 2.0).unwrap();
        // atanh(1/2) from a 40-digit evaluation
        assert!((squeeze_strength(&half) - 0.549_306_144_334_054_8).abs() < 1e-14);
        let coherent = SqueezeAngle::new(0.0, -20.0).unwrap();
        assert!(squeeze_strength(&coherent) < 1e-17);
        let strip = SqueezeAngle::new(0.0, -1e-9).unwrap();
        assert!(squeeze_strength(&strip) > 10.0);
    }

    #[test]
    fn one_minus_exp4_does_not_cancel() {
        let a = SqueezeAngle::new(0.0, -1e-12).unwrap();
        assert!((a.one_minus_exp4() - 4e-12).abs() < 1e-22);
        let b = SqueezeAngle::new(0.0, -10.0).unwrap();
        assert_eq!(b.one_minus_exp4(), 1.0 - (-40.0f64).exp());
    }

    #[test]
    fn exp_neg_i_matches_complex_exponential() {
        let a = SqueezeAngle::new(0.7, -0.45).unwrap();
        let direct = (-Complex64::i() * a.complex()).exp();
        assert!((a.exp_neg_i() - direct).norm() < 1e-15);
    }
}
