//! Uniform rectangular sampling of complex fields.
//!
//! Samples are stored row-major with y outer: index `j * nx + i` holds the
//! value at (x0 + i·dx, y0 + j·dy). Real fields use zero imaginary parts.
//!
//! Reductions are computed per row in parallel, then combined with pairwise
//! summation in a fixed order, so results do not depend on the thread count.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridGeometry {
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridGeometry {
    pub fn new(x0: f64, y0: f64, dx: f64, dy: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(dx > 0.0 && dy > 0.0 && dx.is_finite() && dy.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "spacing must be positive (dx={dx}, dy={dy})"
            )));
        }
        if !(x0.is_finite() && y0.is_finite()) {
            return Err(Error::InvalidGrid("origin must be finite".into()));
        }
        if nx < 1 || ny < 1 {
            return Err(Error::InvalidGrid(format!("empty grid {nx}x{ny}")));
        }
        Ok(GridGeometry { x0, y0, dx, dy, nx, ny })
    }

    /// Grid with `nx` × `ny` nodes spanning [x0, x1] × [y0, y1] inclusive.
    pub fn from_bounds(x0: f64, x1: f64, y0: f64, y1: f64, nx: usize, ny: usize) -> Result<Self> {
        if nx < 2 || ny < 2 || !(x1 > x0) || !(y1 > y0) {
            return Err(Error::InvalidGrid(format!(
                "bounds [{x0},{x1}]x[{y0},{y1}] with {nx}x{ny} nodes"
            )));
        }
        Self::new(x0, y0, (x1 - x0) / (nx - 1) as f64, (y1 - y0) / (ny - 1) as f64, nx, ny)
    }

    /// Square grid with spacing `h` centered on `center`, odd node count, and
    /// at least `half_width` of coverage on each side. Symmetric under x → −x,
    /// y → −y and quarter turns about the center.
    pub fn centered(center: (f64, f64), half_width: f64, h: f64) -> Result<Self> {
        if !(half_width > 0.0 && h > 0.0) {
            return Err(Error::InvalidGrid(format!("half width {half_width}, spacing {h}")));
        }
        let m = (half_width / h - 1e-9).ceil() as usize;
        let n = 2 * m + 1;
        Self::new(center.0 - m as f64 * h, center.1 - m as f64 * h, h, h, n, n)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    #[inline]
    pub fn y(&self, j: usize) -> f64 {
        self.y0 + j as f64 * self.dy
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Area element dx·dy used by every quadrature.
    #[inline]
    pub fn cell_area(&self) -> f64 {
        self.dx * self.dy
    }

    pub fn x1(&self) -> f64 {
        self.x(self.nx - 1)
    }

    pub fn y1(&self) -> f64 {
        self.y(self.ny - 1)
    }

    /// Same geometry up to floating-point noise in origin and spacing.
    pub fn matches(&self, other: &GridGeometry) -> bool {
        let close = |a: f64, b: f64, scale: f64| (a - b).abs() <= 1e-12 * scale.max(1.0);
        self.nx == other.nx
            && self.ny == other.ny
            && close(self.dx, other.dx, self.dx)
            && close(self.dy, other.dy, self.dy)
            && close(self.x0, other.x0, self.x0.abs())
            && close(self.y0, other.y0, self.y0.abs())
    }

    /// Refined grid over the same rectangle with the spacing halved.
    pub fn refined(&self) -> GridGeometry {
        GridGeometry {
            x0: self.x0,
            y0: self.y0,
            dx: self.dx / 2.0,
            dy: self.dy / 2.0,
            nx: 2 * self.nx - 1,
            ny: 2 * self.ny - 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid2D {
    geom: GridGeometry,
    values: Vec<Complex64>,
}

/// Pairwise (cascade) summation with a fixed split pattern.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if v.len() <= BLOCK {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

pub fn pairwise_sum_complex(v: &[Complex64]) -> Complex64 {
    const BLOCK: usize = 32;
    if v.len() <= BLOCK {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum_complex(&v[..mid]) + pairwise_sum_complex(&v[mid..])
}

impl Grid2D {
    pub fn zeros(geom: GridGeometry) -> Self {
        Grid2D {
            geom,
            values: vec![Complex64::new(0.0, 0.0); geom.len()],
        }
    }

    pub fn from_values(geom: GridGeometry, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != geom.len() {
            return Err(Error::InvalidGrid(format!(
                "{} samples for a {}x{} grid",
                values.len(),
                geom.nx,
                geom.ny
            )));
        }
        Ok(Grid2D { geom, values })
    }

    pub fn from_real(geom: GridGeometry, values: &[f64]) -> Result<Self> {
        Self::from_values(geom, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Sample `f(x, y)` on every node, parallel over rows.
    pub fn from_fn<F>(geom: GridGeometry, f: F) -> Self
    where
        F: Fn(f64, f64) -> Complex64 + Sync,
    {
        let mut values = vec![Complex64::new(0.0, 0.0); geom.len()];
        values.par_chunks_mut(geom.nx).enumerate().for_each(|(j, row)| {
            let y = geom.y(j);
            for (i, v) in row.iter_mut().enumerate() {
                *v = f(geom.x(i), y);
            }
        });
        Grid2D { geom, values }
    }

    /// Build a grid whose node (i, j) is `f(i, j)`, parallel over rows.
    pub fn from_index_fn<F>(geom: GridGeometry, f: F) -> Self
    where
        F: Fn(usize, usize) -> Complex64 + Sync,
    {
        let mut values = vec![Complex64::new(0.0, 0.0); geom.len()];
        values.par_chunks_mut(geom.nx).enumerate().for_each(|(j, row)| {
            for (i, v) in row.iter_mut().enumerate() {
                *v = f(i, j);
            }
        });
        Grid2D { geom, values }
    }

    #[inline]
    pub fn geometry(&self) -> &GridGeometry {
        &self.geom
    }

    #[inline]
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[self.geom.index(i, j)]
    }

    /// Sample at (i, j), or zero outside the grid.
    #[inline]
    pub fn get_or_zero(&self, i: isize, j: isize) -> Complex64 {
        if i < 0 || j < 0 || i as usize >= self.geom.nx || j as usize >= self.geom.ny {
            Complex64::new(0.0, 0.0)
        } else {
            self.values[self.geom.index(i as usize, j as usize)]
        }
    }

    pub fn map<F>(&self, f: F) -> Grid2D
    where
        F: Fn(Complex64) -> Complex64 + Sync,
    {
        Grid2D {
            geom: self.geom,
            values: self.values.par_iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise map with access to the node position.
    pub fn map_with_position<F>(&self, f: F) -> Grid2D
    where
        F: Fn(f64, f64, Complex64) -> Complex64 + Sync,
    {
        let g = self.geom;
        Grid2D::from_index_fn(g, |i, j| f(g.x(i), g.y(j), self.get(i, j)))
    }

    pub fn zip_with<F>(&self, other: &Grid2D, f: F) -> Result<Grid2D>
    where
        F: Fn(Complex64, Complex64) -> Complex64 + Sync,
    {
        if !self.geom.matches(&other.geom) {
            return Err(Error::GridMismatch);
        }
        Ok(Grid2D {
            geom: self.geom,
            values: self
                .values
                .par_iter()
                .zip(other.values.par_iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn scaled(&self, c: Complex64) -> Grid2D {
        self.map(|v| v * c)
    }

    pub fn conj(&self) -> Grid2D {
        self.map(|v| v.conj())
    }

    /// Deterministic sum of `f(i, j, value)` over all nodes.
    pub fn reduce<F>(&self, f: F) -> Complex64
    where
        F: Fn(usize, usize, Complex64) -> Complex64 + Sync,
    {
        let nx = self.geom.nx;
        let rows: Vec<Complex64> = self
            .values
            .par_chunks(nx)
            .enumerate()
            .map(|(j, row)| {
                let terms: Vec<Complex64> = row.iter().enumerate().map(|(i, &v)| f(i, j, v)).collect();
                pairwise_sum_complex(&terms)
            })
            .collect();
        pairwise_sum_complex(&rows)
    }

    /// Deterministic real sum of `f(i, j, value)`.
    pub fn reduce_real<F>(&self, f: F) -> f64
    where
        F: Fn(usize, usize, Complex64) -> f64 + Sync,
    {
        let nx = self.geom.nx;
        let rows: Vec<f64> = self
            .values
            .par_chunks(nx)
            .enumerate()
            .map(|(j, row)| {
                let terms: Vec<f64> = row.iter().enumerate().map(|(i, &v)| f(i, j, v)).collect();
                pairwise_sum(&terms)
            })
            .collect();
        pairwise_sum(&rows)
    }

    /// ∫ conj(self)·other d²r by the trapezoid rule (the field is assumed to
    /// vanish at the boundary, so edge weights are irrelevant).
    pub fn inner(&self, other: &Grid2D) -> Result<Complex64> {
        if !self.geom.matches(&other.geom) {
            return Err(Error::GridMismatch);
        }
        let nx = self.geom.nx;
        let rows: Vec<Complex64> = self
            .values
            .par_chunks(nx)
            .zip(other.values.par_chunks(nx))
            .map(|(a, b)| {
                let terms: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x.conj() * y).collect();
                pairwise_sum_complex(&terms)
            })
            .collect();
        Ok(pairwise_sum_complex(&rows) * self.geom.cell_area())
    }

    /// ∫|f|² d²r.
    pub fn norm_sqr(&self) -> f64 {
        self.reduce_real(|_, _, v| v.norm_sqr()) * self.geom.cell_area()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// ∫ Re f d²r, for real-valued fields such as densities.
    pub fn integral_real(&self) -> f64 {
        self.reduce_real(|_, _, v| v.re) * self.geom.cell_area()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// Index and modulus of the largest-modulus sample.
    pub fn argmax_abs(&self) -> ((usize, usize), f64) {
        let mut best = (0usize, 0.0f64);
        for (k, v) in self.values.iter().enumerate() {
            let a = v.norm();
            if a > best.1 {
                best = (k, a);
            }
        }
        ((best.0 % self.geom.nx, best.0 / self.geom.nx), best.1)
    }

    /// Largest modulus on the outer frame of width `width` nodes divided by
    /// the overall peak modulus; zero for an identically vanishing field.
    pub fn boundary_ratio(&self, width: usize) -> f64 {
        let g = self.geom;
        let peak = self.max_abs();
        if peak == 0.0 {
            return 0.0;
        }
        let mut edge = 0.0f64;
        for j in 0..g.ny {
            for i in 0..g.nx {
                let on_edge = i < width || j < width || i + width >= g.nx || j + width >= g.ny;
                if on_edge {
                    edge = edge.max(self.get(i, j).norm());
                }
            }
        }
        edge / peak
    }

    /// Real parts as a plain vector in storage order.
    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }
}

impl Add for &Grid2D {
    type Output = Grid2D;

    /// Panics if the geometries differ.
    fn add(self, rhs: &Grid2D) -> Grid2D {
        self.zip_with(rhs, |a, b| a + b).expect("grid geometry mismatch")
    }
}

impl Sub for &Grid2D {
    type Output = Grid2D;

    /// Panics if the geometries differ.
    fn sub(self, rhs: &Grid2D) -> Grid2D {
        self.zip_with(rhs, |a, b| a - b).expect("grid geometry mismatch")
    }
}

impl Mul<Complex64> for &Grid2D {
    type Output = Grid2D;

    fn mul(self, rhs: Complex64) -> Grid2D {
        self.scaled(rhs)
    }
}

impl Mul<f64> for &Grid2D {
    type Output = Grid2D;

    fn mul(self, rhs: f64) -> Grid2D {
        self.map(|v| v * rhs)
    }
}
