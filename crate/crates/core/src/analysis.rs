//! Overlaps, Gram/frame analysis of lattice families and the closure relation.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::coords::project;
use crate::error::{Error, Result};
use crate::grid::{Grid2D, GridGeometry};
use crate::squeeze::SqueezeAngle;
use crate::state::{field_on_grid, StateSpec, WaveFunction};
use crate::units::Units;

/// Square root on the branch with non-negative real part.
pub fn sqrt_positive_re(z: Complex64) -> Complex64 {
    let r = z.sqrt();
    if r.re < 0.0 {
        -r
    } else {
        r
    }
}

fn same_units(a: &StateSpec, b: &StateSpec) -> Result<()> {
    let (la, lb) = (a.units.l(), b.units.l());
    if (la - lb).abs() > 1e-14 * la.max(lb) {
        return Err(Error::UnitsMismatch { left: la, right: lb });
    }
    Ok(())
}

/// Closed-form overlap ⟨s1|s2⟩.
///
/// With primes on the ket (R′, Φ′),
///
/// ```text
/// ⟨R,N|R′,N′⟩ = δ_{NN′} (1−e^{4Φ₂})^{1/4} (1−e^{4Φ′₂})^{1/4} / √(1 − e^{2i(Φ*−Φ′)})
///     · exp( (i/2l²)(X′Y − Y′X)
///          + (i/2l²)(X′_{Φ′} − X_{Φ′})(X′_{Φ*} − X_{Φ*}) / sin(Φ′ − Φ*) )
/// ```
///
/// where X_Θ = X cos Θ + Y sin Θ. The square root in the denominator is taken
/// with positive real part; the overlap does not depend on N.
pub fn overlap_analytic(s1: &StateSpec, s2: &StateSpec) -> Result<Complex64> {
    same_units(s1, s2)?;
    if s1.n != s2.n {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let l2 = s1.units.l2();
    let (p, q) = (s1.phi.complex(), s2.phi.complex());
    let i = Complex64::i();
    let quartic = (s1.phi.one_minus_exp4().sqrt() * s2.phi.one_minus_exp4().sqrt()).sqrt();
    let denom = sqrt_positive_re(Complex64::new(1.0, 0.0) - (2.0 * i * (p.conj() - q)).exp());
    let (r, rp) = (s1.center, s2.center);
    let flux = (rp.0 * r.1 - rp.1 * r.0) / (2.0 * l2);
    let d_q = project(rp, q) - project(r, q);
    let d_pc = project(rp, p.conj()) - project(r, p.conj());
    let num = d_q * d_pc;
    let gauss = if num == Complex64::new(0.0, 0.0) {
        Complex64::new(0.0, 0.0)
    } else {
        i / (2.0 * l2) * num / (q - p.conj()).sin()
    };
    Ok(quartic / denom * (i * flux + gauss).exp())
}

/// ⟨s1|s2⟩ by quadrature on `geom`.
pub fn overlap_numeric(s1: &StateSpec, s2: &StateSpec, geom: &GridGeometry) -> Result<Complex64> {
    same_units(s1, s2)?;
    field_on_grid(s1, geom).inner(&field_on_grid(s2, geom))
}

/// Gram matrix G_jk = ⟨s_j|s_k⟩ from the closed-form overlap.
pub fn gram_matrix(states: &[StateSpec]) -> Result<DMatrix<Complex64>> {
    let n = states.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (j..n).map(move |k| (j, k))).collect();
    let vals: Vec<Complex64> = pairs
        .par_iter()
        .map(|&(j, k)| {
            if j == k {
                same_units(&states[j], &states[k]).map(|_| Complex64::new(1.0, 0.0))
            } else {
                overlap_analytic(&states[j], &states[k])
            }
        })
        .collect::<Result<_>>()?;
    let mut g = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for (&(j, k), &v) in pairs.iter().zip(&vals) {
        g[(j, k)] = v;
        g[(k, j)] = v.conj();
    }
    Ok(g)
}

/// A rows × cols patch of a rectangular lattice with spacings a, b; site
/// (m, n) sits at (m·a, n·b).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    pub a: f64,
    pub b: f64,
    pub rows: usize,
    pub cols: usize,
}

impl LatticeSpec {
    pub fn new(a: f64, b: f64, rows: usize, cols: usize) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) || rows == 0 || cols == 0 {
            return Err(Error::InvalidLattice(format!("a={a}, b={b}, {rows}x{cols}")));
        }
        Ok(LatticeSpec { a, b, rows, cols })
    }

    /// Square lattice whose unit cell has area `cell_area`.
    pub fn square(cell_area: f64, rows: usize, cols: usize) -> Result<Self> {
        let a = cell_area.sqrt();
        Self::new(a, a, rows, cols)
    }

    /// s₀ = a·b.
    pub fn cell_area(&self) -> f64 {
        self.a * self.b
    }

    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sites(&self) -> Vec<(f64, f64)> {
        (0..self.rows)
            .flat_map(|n| (0..self.cols).map(move |m| (m as f64 * self.a, n as f64 * self.b)))
            .collect()
    }
}

/// Largest lattice patch accepted by [`frame_spectrum`].
pub const FRAME_SIZE_CAP: usize = 400;

/// Eigenvalue summary of a Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GramReport {
    pub size: usize,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// λ_max / λ_min (infinite if λ_min ≤ 0).
    pub condition: f64,
}

impl GramReport {
    pub fn from_matrix(g: DMatrix<Complex64>) -> Self {
        let size = g.nrows();
        let mut eigenvalues: Vec<f64> = SymmetricEigen::new(g).eigenvalues.iter().copied().collect();
        eigenvalues.sort_by(f64::total_cmp);
        let lambda_min = eigenvalues[0];
        let lambda_max = eigenvalues[size - 1];
        let condition = if lambda_min > 0.0 {
            lambda_max / lambda_min
        } else {
            f64::INFINITY
        };
        GramReport {
            size,
            eigenvalues,
            lambda_min,
            lambda_max,
            condition,
        }
    }
}

/// Spectrum of the Gram matrix of level-`n` states with angle `phi` centered
/// on the lattice sites. Small λ_min signals near linear dependence, expected
/// once s₀ drops below 2πl².
pub fn frame_spectrum(lattice: &LatticeSpec, phi: &SqueezeAngle, n: usize, units: Units) -> Result<GramReport> {
    let size = lattice.len();
    if size > FRAME_SIZE_CAP {
        return Err(Error::TooLarge {
            size,
            cap: FRAME_SIZE_CAP,
        });
    }
    let states: Vec<StateSpec> = lattice
        .sites()
        .into_iter()
        .map(|c| StateSpec::new(n, c, *phi).with_units(units))
        .collect();
    Ok(GramReport::from_matrix(gram_matrix(&states)?))
}

/// Parameters of the guiding-center integral in the closure relation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosureSpec {
    /// Highest Landau level included.
    pub n_max: usize,
    /// Centers R are taken on a square lattice of this step inside the disk.
    pub step: f64,
    pub center: (f64, f64),
    pub radius: f64,
    pub phi: SqueezeAngle,
    pub units: Units,
}

impl ClosureSpec {
    /// Lattice points of the guiding-center disk, in a fixed order.
    pub fn centers(&self) -> Vec<(f64, f64)> {
        let m = (self.radius / self.step).floor() as i64;
        let mut out = Vec::new();
        for j in -m..=m {
            for i in -m..=m {
                let (u, w) = (i as f64 * self.step, j as f64 * self.step);
                if u * u + w * w <= self.radius * self.radius {
                    out.push((self.center.0 + u, self.center.1 + w));
                }
            }
        }
        out
    }
}

/// Fraction of ‖f‖² within `margin` of the disk edge or outside it above
/// which the truncated closure is considered unreliable.
pub const CLOSURE_EDGE_LIMIT: f64 = 1e-6;

const CLOSURE_CHUNK: usize = 64;

/// Σ_{N≤n_max} Σ_R (step²/2πl²) |R,N⟩⟨R,N|f⟩: a Riemann-sum truncation of the
/// closure relation ∫ d²R/2πl² Σ_N |R,N⟩⟨R,N| = 1.
pub fn closure_apply(f: &Grid2D, spec: &ClosureSpec) -> Result<Grid2D> {
    let l = spec.units.l();
    let edge = spec.radius - l;
    let total = f.norm_sqr();
    let outside = f.reduce_real(|i, j, v| {
        let g = f.geometry();
        let (u, w) = (g.x(i) - spec.center.0, g.y(j) - spec.center.1);
        if u * u + w * w >= edge * edge {
            v.norm_sqr()
        } else {
            0.0
        }
    }) * f.geometry().cell_area();
    let ratio = if total > 0.0 { outside / total } else { 0.0 };
    if ratio > CLOSURE_EDGE_LIMIT {
        return Err(Error::DomainTooSmall {
            ratio,
            limit: CLOSURE_EDGE_LIMIT,
        });
    }

    let geom = *f.geometry();
    let weight = spec.step * spec.step / (2.0 * PI * spec.units.l2());
    let centers = spec.centers();
    // Each state is sampled only inside its own support window.
    let window = |s: &StateSpec| {
        let (_, var_long) = s.principal_variances();
        11.0 * (var_long + l * l * (s.n as f64 + 0.5)).sqrt() + 2.0 * l
    };
    let index_range = |c: f64, half: f64, o: f64, h: f64, n: usize| {
        let lo = (((c - half - o) / h).floor().max(0.0) as usize).min(n);
        let hi = (((c + half - o) / h).ceil().max(0.0) as usize + 1).min(n);
        (lo, hi)
    };
    let partials: Vec<Vec<Complex64>> = centers
        .par_chunks(CLOSURE_CHUNK)
        .map(|chunk| {
            let mut acc = vec![Complex64::new(0.0, 0.0); geom.len()];
            let mut buf = Vec::new();
            for &c in chunk {
                for n in 0..=spec.n_max {
                    let s = StateSpec::new(n, c, spec.phi).with_units(spec.units);
                    let wf = WaveFunction::new(s);
                    let half = window(&s);
                    let (i0, i1) = index_range(c.0, half, geom.x0, geom.dx, geom.nx);
                    let (j0, j1) = index_range(c.1, half, geom.y0, geom.dy, geom.ny);
                    if i0 >= i1 || j0 >= j1 {
                        continue;
                    }
                    buf.clear();
                    let mut proj = Complex64::new(0.0, 0.0);
                    for j in j0..j1 {
                        let mut row = Complex64::new(0.0, 0.0);
                        for i in i0..i1 {
                            let v = wf.eval(geom.x(i), geom.y(j));
                            row += v.conj() * f.get(i, j);
                            buf.push(v);
                        }
                        proj += row;
                    }
                    let coef = proj * geom.cell_area() * weight;
                    let mut k = 0;
                    for j in j0..j1 {
                        for i in i0..i1 {
                            acc[geom.index(i, j)] += coef * buf[k];
                            k += 1;
                        }
                    }
                }
            }
            acc
        })
        .collect();
    Grid2D::from_values(geom, combine_pairwise(partials))
}

fn combine_pairwise(mut parts: Vec<Vec<Complex64>>) -> Vec<Complex64> {
    if parts.is_empty() {
        return Vec::new();
    }
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(mut a) = it.next() {
            if let Some(b) = it.next() {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
            }
            next.push(a);
        }
        parts = next;
    }
    parts.pop().expect("non-empty")
}

/// ‖closure_apply(f) − f‖ / ‖f‖.
pub fn closure_defect(f: &Grid2D, spec: &ClosureSpec) -> Result<f64> {
    let rec = closure_apply(f, spec)?;
    Ok((&rec - f).norm() / f.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(n: usize, c: (f64, f64), phi1: f64, phi2: f64) -> StateSpec {
        StateSpec::new(n, c, SqueezeAngle::new(phi1, phi2).unwrap())
    }

    #[test]
    fn branch_helper() {
        let z = sqrt_positive_re(Complex64::new(-1.0, -1e-30));
        assert!(z.re >= 0.0 && (z * z - Complex64::new(-1.0, -1e-30)).norm() < 1e-15);
        let z = sqrt_positive_re(Complex64::new(0.3, -2.0));
        assert!(z.re > 0.0);
    }

    #[test]
    fn self_overlap_is_one_and_levels_are_orthogonal() {
        let s = st(2, (0.4, -1.0), 0.3, -0.2);
        assert!((overlap_analytic(&s, &s).unwrap() - 1.0).norm() < 1e-14);
        assert_eq!(
            overlap_analytic(&s, &s.with_level(1)).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn analytic_matches_quadrature() {
        let a = st(0, (0.3, -0.2), 0.4, -0.3);
        let b = st(0, (-0.5, 0.7), -0.9, -0.6);
        let g = GridGeometry::centered((0.0, 0.0), 20.0, 0.1).unwrap();
        let num = overlap_numeric(&a, &b, &g).unwrap();
        let ana = overlap_analytic(&a, &b).unwrap();
        assert!((num - ana).norm() < 1e-10, "{num} vs {ana}");
        let ana2 = overlap_analytic(&a.with_level(2), &b.with_level(2)).unwrap();
        assert!((ana - ana2).norm() < 1e-15);
    }

    #[test]
    fn hermitian_and_bounded() {
        let a = st(1, (1.0, 2.0), 0.1, -0.05);
        let b = st(1, (-0.5, 0.5), 2.0, -1.5);
        let ab = overlap_analytic(&a, &b).unwrap();
        let ba = overlap_analytic(&b, &a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-14);
        assert!(ab.norm() <= 1.0 + 1e-10);
    }

    #[test]
    fn distant_states_decouple() {
        let a = st(0, (0.0, 0.0), 0.0, -2.0);
        let b = st(0, (12.0, 0.0), 0.0, -2.0);
        assert!(overlap_analytic(&a, &b).unwrap().norm() < 1e-15);
        let g = gram_matrix(&[a, b]).unwrap();
        assert!((g[(0, 0)] - 1.0).norm() < 1e-15 && g[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn units_must_match() {
        let a = st(0, (0.0, 0.0), 0.0, -1.0);
        let b = a.with_units(Units::new(2.0).unwrap());
        assert!(matches!(overlap_analytic(&a, &b), Err(Error::UnitsMismatch { .. })));
    }

    #[test]
    fn frame_basics() {
        let phi = SqueezeAngle::new(0.0, -0.5).unwrap();
        let one = frame_spectrum(&LatticeSpec::new(1.0, 1.0, 1, 1).unwrap(), &phi, 0, Units::default()).unwrap();
        assert_eq!(one.size, 1);
        assert!((one.lambda_min - 1.0).abs() < 1e-15);
        let big = LatticeSpec::new(1.0, 1.0, 21, 20).unwrap();
        assert!(matches!(
            frame_spectrum(&big, &phi, 0, Units::default()),
            Err(Error::TooLarge { size: 420, cap: 400 })
        ));
    }

    #[test]
    fn closure_kills_higher_levels() {
        let phi = SqueezeAngle::from_tanh(0.0, 0.5).unwrap();
        let s = StateSpec::new(1, (0.0, 0.0), phi);
        let g = GridGeometry::centered((0.0, 0.0), 14.0, 0.25).unwrap();
        let f = field_on_grid(&s, &g);
        let spec = ClosureSpec {
            n_max: 0,
            step: 0.5,
            center: (0.0, 0.0),
            radius: 9.0,
            phi,
            units: Units::default(),
        };
        let rec = closure_apply(&f, &spec).unwrap();
        assert!(rec.norm() < 1e-6);
    }
}
