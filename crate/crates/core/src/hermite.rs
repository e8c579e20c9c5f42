//! Physicists' Hermite polynomials at complex argument.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

/// H_n(ξ) by the forward recurrence H_{k+1} = 2ξH_k − 2kH_{k−1}.
pub fn hermite(n: usize, xi: Complex64) -> Complex64 {
    let mut prev = Complex64::new(1.0, 0.0);
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * xi;
    for k in 1..n {
        let next = 2.0 * xi * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// H_n(ξ)/√(2ⁿ n!), the polynomial factor of a normalized oscillator state.
///
/// Stays finite for degrees where H_n itself overflows.
pub fn hermite_scaled(n: usize, xi: Complex64) -> Complex64 {
    hermite_scaled_phased(n, xi, Complex64::new(1.0, 0.0))
}

/// wⁿ H_n(ξ)/√(2ⁿ n!).
///
/// Folding the weight into the recurrence keeps the result representable when
/// |ξ| is huge and |w| tiny with |ξw| of order one, as happens for squeeze
/// angles deep in the coherent limit.
pub fn hermite_scaled_phased(n: usize, xi: Complex64, w: Complex64) -> Complex64 {
    let mut prev = Complex64::new(1.0, 0.0);
    if n == 0 {
        return prev;
    }
    let xw = xi * w;
    let w2 = w * w;
    let mut cur = std::f64::consts::SQRT_2 * xw;
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * xw * cur - (kf / (kf + 1.0)).sqrt() * w2 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// The n real roots of H_n in ascending order.
///
/// Eigenvalues of the Jacobi matrix give starting points; a few Newton steps
/// on the scaled polynomial polish them to full precision.
pub fn hermite_roots(n: usize) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = (k as f64 / 2.0).sqrt();
        jacobi[(k - 1, k)] = b;
        jacobi[(k, k - 1)] = b;
    }
    let mut roots: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    for r in roots.iter_mut() {
        for _ in 0..4 {
            // Ĥ_n' = √(2n) Ĥ_{n−1}
            let p = hermite_scaled(n, Complex64::new(*r, 0.0)).re;
            let dp = (2.0 * n as f64).sqrt() * hermite_scaled(n - 1, Complex64::new(*r, 0.0)).re;
            if dp == 0.0 {
                break;
            }
            let step = p / dp;
            *r -= step;
            if step.abs() < 1e-16 * r.abs().max(1.0) {
                break;
            }
        }
    }
    roots.sort_by(|a, b| a.total_cmp(b));
    // exact symmetry of the root set
    for i in 0..n / 2 {
        let m = 0.5 * (roots[n - 1 - i] - roots[i]);
        roots[i] = -m;
        roots[n - 1 - i] = m;
    }
    if n % 2 == 1 {
        roots[n / 2] = 0.0;
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Explicit-coefficient oracle:
    /// H_n(ξ) = n! Σ_m (−1)^m (2ξ)^{n−2m} / (m! (n−2m)!).
    fn hermite_explicit(n: usize, xi: Complex64) -> Complex64 {
        let fact = |k: usize| (1..=k).map(|v| v as f64).product::<f64>();
        let mut sum = Complex64::new(0.0, 0.0);
        for m in 0..=n / 2 {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * (2.0 * xi).powu((n - 2 * m) as u32) / (fact(m) * fact(n - 2 * m));
        }
        sum * fact(n)
    }

    #[test]
    fn low_order_values() {
        assert_eq!(hermite(0, c(3.7, -1.2)), c(1.0, 0.0));
        assert_eq!(hermite(2, c(0.0, 0.0)), c(-2.0, 0.0));
        // 8ξ³ − 12ξ at 1 + i
        let h3 = hermite(3, c(1.0, 1.0));
        assert!((h3 - c(-28.0, 4.0)).norm() < 1e-13);
    }

    #[test]
    fn matches_explicit_coefficients() {
        for n in 0..16 {
            for &xi in &[c(0.3, -0.2), c(-1.7, 0.9), c(2.5, 0.0), c(0.0, 1.3)] {
                let a = hermite(n, xi);
                let b = hermite_explicit(n, xi);
                assert!((a - b).norm() <= 1e-11 * b.norm().max(1.0), "n={n} xi={xi}");
            }
        }
    }

    #[test]
    fn scaled_matches_plain() {
        let fact = |k: usize| (1..=k).map(|v| v as f64).product::<f64>();
        for n in 0..20 {
            let xi = c(1.1, -0.4);
            let plain = hermite(n, xi) / (2f64.powi(n as i32) * fact(n)).sqrt();
            let scaled = hermite_scaled(n, xi);
            assert!((plain - scaled).norm() <= 1e-12 * plain.norm().max(1.0));
        }
    }

    #[test]
    fn phased_equals_power_times_scaled() {
        let w = c(0.3, -0.5);
        for n in 0..12 {
            let xi = c(-0.8, 1.4);
            let expect = w.powu(n as u32) * hermite_scaled(n, xi);
            let got = hermite_scaled_phased(n, xi, w);
            assert!((got - expect).norm() <= 1e-13 * expect.norm().max(1e-300) + 1e-300);
        }
    }

    #[test]
    fn phased_survives_coherent_limit_magnitudes() {
        // |ξ| ~ 1e17 with |w| ~ 1e-17: the product stays O(1).
        let w = Complex64::from_polar(1e-17, 0.4);
        let xi = c(2e17, -1e17);
        let v = hermite_scaled_phased(40, xi, w);
        assert!(v.is_finite() && v.norm() > 0.0);
    }

    #[test]
    fn roots_are_zeros() {
        for n in 1..=30 {
            let roots = hermite_roots(n);
            assert_eq!(roots.len(), n);
            for &r in &roots {
                // Newton step size: residual over the derivative √(2n)·h_{n−1}.
                let v = hermite_scaled(n, c(r, 0.0)).norm();
                let slope = (2.0 * n as f64).sqrt() * hermite_scaled(n - 1, c(r, 0.0)).norm();
                assert!(
                    v / slope < 1e-14 * r.abs().max(1.0),
                    "n={n} root {r} step {}",
                    v / slope
                );
            }
            for w in roots.windows(2) {
                assert!(w[1] > w[0]);
            }
        }
        let r2 = hermite_roots(2);
        assert!((r2[1] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn recurrence_holds_to_degree_thirty() {
        for n in 1..30 {
            for &xi in &[c(9.0, 3.0), c(-4.0, -8.0), c(0.5, 0.5), c(7.07, -7.07)] {
                let lhs = hermite(n + 1, xi) - 2.0 * xi * hermite(n, xi) + 2.0 * n as f64 * hermite(n - 1, xi);
                let scale = hermite(n + 1, xi).norm() + (2.0 * xi * hermite(n, xi)).norm();
                assert!(lhs.norm() <= 1e-10 * scale);
            }
        }
    }
}
