//! Complex-angle rotated coordinates about a guiding center.

use num_complex::Complex64;

/// (x̃_Φ, ỹ_Φ) for the point `r` relative to `center`:
/// x̃ = (x−X)cos Φ + (y−Y)sin Φ, ỹ = −(x−X)sin Φ + (y−Y)cos Φ.
///
/// Φ may be any complex angle; ỹ_Φ = x̃_{Φ+π/2}.
pub fn rotated_coords(r: (f64, f64), center: (f64, f64), phi: Complex64) -> (Complex64, Complex64) {
    let (u, w) = (r.0 - center.0, r.1 - center.1);
    let (c, s) = (phi.cos(), phi.sin());
    (u * c + w * s, -u * s + w * c)
}

/// x̃_Φ + iỹ_Φ = ((x−X) + i(y−Y)) e^{−iΦ}.
///
/// Computing the combination directly avoids the cancellation between two
/// large terms when Im Φ ≪ 0.
pub fn rotated_chiral(r: (f64, f64), center: (f64, f64), exp_neg_i_phi: Complex64) -> Complex64 {
    Complex64::new(r.0 - center.0, r.1 - center.1) * exp_neg_i_phi
}

/// Φ-projection X cos Φ + Y sin Φ of a real point.
pub fn project(p: (f64, f64), phi: Complex64) -> Complex64 {
    p.0 * phi.cos() + p.1 * phi.sin()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn identity_and_quarter_turn() {
        let (a, b) = rotated_coords((1.0, 2.0), (0.0, 0.0), Complex64::new(0.0, 0.0));
        assert!(close(a, Complex64::new(1.0, 0.0), 1e-15));
        assert!(close(b, Complex64::new(2.0, 0.0), 1e-15));
        let (a, b) = rotated_coords((1.0, 2.0), (0.0, 0.0), Complex64::new(FRAC_PI_2, 0.0));
        assert!(close(a, Complex64::new(2.0, 0.0), 1e-15));
        assert!(close(b, Complex64::new(-1.0, 0.0), 1e-15));
    }

    #[test]
    fn imaginary_angle() {
        // cos(−0.5i) = cosh 0.5; −sin(−0.5i) = i sinh 0.5 (40-digit values)
        let (a, b) = rotated_coords((1.0, 0.0), (0.0, 0.0), Complex64::new(0.0, -0.5));
        assert!(close(a, Complex64::new(1.127_625_965_206_380_8, 0.0), 1e-15));
        assert!(close(b, Complex64::new(0.0, 0.521_095_305_493_747_4), 1e-15));
    }

    #[test]
    fn y_tilde_is_shifted_x_tilde() {
        let phi = Complex64::new(0.3, -0.8);
        let (_, yt) = rotated_coords((0.4, -1.3), (0.2, 0.1), phi);
        let (xt2, _) = rotated_coords((0.4, -1.3), (0.2, 0.1), phi + FRAC_PI_2);
        assert!(close(yt, xt2, 1e-14));
    }

    #[test]
    fn chiral_combination_matches() {
        let phi = Complex64::new(-1.1, -0.6);
        let (xt, yt) = rotated_coords((0.9, 0.4), (-0.3, 0.5), phi);
        let z = rotated_chiral((0.9, 0.4), (-0.3, 0.5), (-Complex64::i() * phi).exp());
        assert!(close(xt + Complex64::i() * yt, z, 1e-14));
    }
}
