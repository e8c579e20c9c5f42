//! SVG heatmaps and PGM images of real fields.

use std::io::{self, Write};

use squeeze_core::Grid2D;

use crate::fmt::g17;

/// Eight-stop ramp, monotone in lightness (dark blue to pale yellow).
const RAMP: [(u8, u8, u8); 8] = [
    (13, 8, 135),
    (84, 2, 163),
    (139, 10, 165),
    (185, 50, 137),
    (219, 92, 104),
    (244, 136, 73),
    (254, 188, 43),
    (240, 249, 33),
];

fn color(t: f64) -> (u8, u8, u8) {
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let s = t * (RAMP.len() - 1) as f64;
    let k = (s.floor() as usize).min(RAMP.len() - 2);
    let w = s - k as f64;
    let mix = |a: u8, b: u8| (a as f64 + w * (b as f64 - a as f64)).round() as u8;
    let (a, b) = (RAMP[k], RAMP[k + 1]);
    (mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

fn range(values: &[f64]) -> (f64, f64) {
    values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    })
}

fn normalized(v: f64, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        (v - lo) / (hi - lo)
    } else {
        0.0
    }
}

/// One rectangle per sample, +y pointing up, value range in `<metadata>`.
pub fn write_svg<W: Write + ?Sized>(out: &mut W, field: &Grid2D, title: &str) -> io::Result<()> {
    let g = *field.geometry();
    let values = field.real_parts();
    let (lo, hi) = range(&values);
    let cell = 4;
    let (w, h) = (g.nx * cell, g.ny * cell);
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" shape-rendering="crispEdges">"#
    )?;
    writeln!(out, "<title>{title}</title>")?;
    writeln!(
        out,
        r#"<metadata>min={} max={} nx={} ny={} x0={} y0={} dx={} dy={}</metadata>"#,
        g17(lo),
        g17(hi),
        g.nx,
        g.ny,
        g17(g.x0),
        g17(g.y0),
        g17(g.dx),
        g17(g.dy)
    )?;
    for j in 0..g.ny {
        let row = g.ny - 1 - j;
        for i in 0..g.nx {
            let (r, gg, b) = color(normalized(values[g.index(i, j)], lo, hi));
            writeln!(
                out,
                r##"<rect x="{}" y="{}" width="{cell}" height="{cell}" fill="#{r:02x}{gg:02x}{b:02x}"/>"##,
                i * cell,
                row * cell
            )?;
        }
    }
    writeln!(out, "</svg>")
}

/// Binary 8-bit greyscale (P5), +y pointing up; `comment` and the value range
/// go into header comments.
pub fn write_pgm<W: Write + ?Sized>(out: &mut W, field: &Grid2D, comment: &str) -> io::Result<()> {
    let g = *field.geometry();
    let values = field.real_parts();
    let (lo, hi) = range(&values);
    writeln!(out, "P5")?;
    if !comment.is_empty() {
        writeln!(out, "# {comment}")?;
    }
    write!(out, "# min={} max={}\n{} {}\n255\n", g17(lo), g17(hi), g.nx, g.ny)?;
    let mut bytes = Vec::with_capacity(g.len());
    for j in (0..g.ny).rev() {
        for i in 0..g.nx {
            bytes.push((normalized(values[g.index(i, j)], lo, hi) * 255.0).round() as u8);
        }
    }
    out.write_all(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use squeeze_core::{Complex64, GridGeometry};

    #[test]
    fn ramp_is_monotone_in_luminance() {
        let lum = |(r, g, b): (u8, u8, u8)| 0.2126 * r as f64 + 0.7152 * g as f64 + 0.0722 * b as f64;
        for k in 1..=100 {
            assert!(lum(color(k as f64 / 100.0)) >= lum(color((k - 1) as f64 / 100.0)));
        }
    }

    #[test]
    fn svg_and_pgm_shapes() {
        let g = GridGeometry::new(0.0, 0.0, 1.0, 1.0, 3, 2).unwrap();
        let f = Grid2D::from_fn(g, |x, y| Complex64::new(x + 10.0 * y, 0.0));
        let mut svg = Vec::new();
        write_svg(&mut svg, &f, "t").unwrap();
        let s = String::from_utf8(svg).unwrap();
        assert_eq!(s.matches("<rect").count(), 6);
        assert!(s.contains("min=0 max=12"));
        let mut pgm = Vec::new();
        write_pgm(&mut pgm, &f, "").unwrap();
        let header = b"P5\n# min=0 max=12\n3 2\n255\n";
        assert_eq!(&pgm[..header.len()], header);
        // Top row is the largest y.
        assert_eq!(&pgm[header.len()..], &[213, 234, 255, 0, 21, 43]);
    }
}
