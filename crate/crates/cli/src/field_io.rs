//! The `squeezed-field v1` text format.
//!
//! ```text
//! # squeezed-field v1
//! # nx=<int> ny=<int> x0=<g17> y0=<g17> dx=<g17> dy=<g17>
//! # columns: x y re im            (or: x y value)
//! # params: <flag>=<value> ...     (optional)
//! <x> <y> <re> <im>
//! ```
//!
//! Rows are row-major with y outer; every float is printed with `%.17g`.

use std::io::{self, BufRead, Write};

use anyhow::{bail, Context, Result};
use squeeze_core::{Complex64, Grid2D, GridGeometry};

use crate::fmt::g17;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Columns {
    Complex,
    Real,
}

pub fn write_field<W: Write + ?Sized>(
    out: &mut W,
    field: &Grid2D,
    columns: Columns,
    params: &[(String, String)],
) -> io::Result<()> {
    let g = field.geometry();
    writeln!(out, "# squeezed-field v1")?;
    writeln!(
        out,
        "# nx={} ny={} x0={} y0={} dx={} dy={}",
        g.nx,
        g.ny,
        g17(g.x0),
        g17(g.y0),
        g17(g.dx),
        g17(g.dy)
    )?;
    match columns {
        Columns::Complex => writeln!(out, "# columns: x y re im")?,
        Columns::Real => writeln!(out, "# columns: x y value")?,
    }
    if !params.is_empty() {
        let p: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(out, "# params: {}", p.join(" "))?;
    }
    for j in 0..g.ny {
        let y = g17(g.y(j));
        for i in 0..g.nx {
            let v = field.get(i, j);
            match columns {
                Columns::Complex => writeln!(out, "{} {} {} {}", g17(g.x(i)), y, g17(v.re), g17(v.im))?,
                Columns::Real => writeln!(out, "{} {} {}", g17(g.x(i)), y, g17(v.re))?,
            }
        }
    }
    Ok(())
}

/// A parsed field file.
#[derive(Debug, Clone)]
pub struct FieldFile {
    pub field: Grid2D,
    pub columns: Columns,
    pub params: Vec<(String, String)>,
}

fn header_value<'a>(line: &'a str, key: &str) -> Result<&'a str> {
    line.split_whitespace()
        .find_map(|t| t.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .with_context(|| format!("missing {key} in geometry header"))
}

pub fn read_field<R: BufRead>(input: R) -> Result<FieldFile> {
    let mut lines = input.lines();
    let mut next = || -> Result<String> { Ok(lines.next().context("unexpected end of file")??) };
    if next()?.trim() != "# squeezed-field v1" {
        bail!("not a squeezed-field v1 file");
    }
    let geo = next()?;
    let num = |k: &str| -> Result<f64> { Ok(header_value(&geo, k)?.parse()?) };
    let count = |k: &str| -> Result<usize> { Ok(header_value(&geo, k)?.parse()?) };
    let geom = GridGeometry::new(
        num("x0")?,
        num("y0")?,
        num("dx")?,
        num("dy")?,
        count("nx")?,
        count("ny")?,
    )?;
    let columns = match next()?.trim() {
        "# columns: x y re im" => Columns::Complex,
        "# columns: x y value" => Columns::Real,
        other => bail!("unknown column header {other:?}"),
    };
    let mut params = Vec::new();
    let mut values = Vec::with_capacity(geom.len());
    let mut line = next()?;
    if let Some(rest) = line.strip_prefix("# params:") {
        for tok in rest.split_whitespace() {
            let (k, v) = tok.split_once('=').context("malformed params entry")?;
            params.push((k.to_string(), v.to_string()));
        }
        line = next()?;
    }
    loop {
        let t: Vec<f64> = line
            .split_whitespace()
            .map(|s| s.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .with_context(|| format!("bad row {line:?}"))?;
        match (columns, t.len()) {
            (Columns::Complex, 4) => values.push(Complex64::new(t[2], t[3])),
            (Columns::Real, 3) => values.push(Complex64::new(t[2], 0.0)),
            _ => bail!("row has {} columns", t.len()),
        }
        if values.len() == geom.len() {
            break;
        }
        line = next()?;
    }
    Ok(FieldFile {
        field: Grid2D::from_values(geom, values)?,
        columns,
        params,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_lossless() {
        let g = GridGeometry::new(-1.25, 0.1, 0.1, 1.0 / 3.0, 5, 3).unwrap();
        let f = Grid2D::from_fn(g, |x, y| Complex64::new(x.sin() / 7.0, y.exp() * 1e-200));
        let mut buf = Vec::new();
        let params = vec![("n".to_string(), "2".to_string())];
        write_field(&mut buf, &f, Columns::Complex, &params).unwrap();
        let back = read_field(buf.as_slice()).unwrap();
        assert_eq!(back.field, f);
        assert_eq!(back.params, params);
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[1],
            "# nx=5 ny=3 x0=-1.25 y0=0.10000000000000001 dx=0.10000000000000001 dy=0.33333333333333331"
        );
        assert_eq!(lines.len(), 4 + 15);
    }

    #[test]
    fn real_columns() {
        let g = GridGeometry::new(0.0, 0.0, 1.0, 1.0, 2, 2).unwrap();
        let f = Grid2D::from_fn(g, |x, y| Complex64::new(x + 2.0 * y, 0.0));
        let mut buf = Vec::new();
        write_field(&mut buf, &f, Columns::Real, &[]).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.contains("# columns: x y value\n0 0 0\n1 0 1\n0 1 2\n1 1 3\n"));
        assert_eq!(read_field(buf.as_slice()).unwrap().field, f);
    }
}
