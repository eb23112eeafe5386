//! Text format: a `CGRID x0 y0 h nx ny` header followed by `nx·ny` lines of
//! `re im`, row-major with `i` fastest.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use super::{ComplexGrid, GridFunction};
use crate::error::{Error, Result};

pub fn write_grid_function<W: Write>(f: &GridFunction, mut out: W) -> Result<()> {
    let g = f.grid();
    writeln!(out, "CGRID {:.16e} {:.16e} {:.16e} {} {}", g.x0(), g.y0(), g.h(), g.nx(), g.ny())?;
    for v in f.values() {
        writeln!(out, "{:.16e} {:.16e}", v.re, v.im)?;
    }
    Ok(())
}

pub fn read_grid_function<R: BufRead>(input: R) -> Result<GridFunction> {
    let mut lines = input.lines().enumerate().filter_map(|(n, l)| match l {
        Ok(s) if s.trim().is_empty() => None,
        other => Some((n + 1, other)),
    });
    let (line_no, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
    let header = header?;
    let mut tok = header.split_whitespace();
    if tok.next() != Some("CGRID") {
        return Err(Error::Parse { line: line_no, msg: "expected `CGRID` header".into() });
    }
    let x0 = parse_f64(tok.next(), line_no)?;
    let y0 = parse_f64(tok.next(), line_no)?;
    let h = parse_f64(tok.next(), line_no)?;
    let nx = parse_usize(tok.next(), line_no)?;
    let ny = parse_usize(tok.next(), line_no)?;
    let grid = ComplexGrid::new(x0, y0, h, nx, ny)?;

    let mut values = Vec::with_capacity(grid.len());
    for (line_no, line) in lines {
        let line = line?;
        let mut tok = line.split_whitespace();
        let re = parse_f64(tok.next(), line_no)?;
        let im = parse_f64(tok.next(), line_no)?;
        values.push(Complex64::new(re, im));
    }
    if values.len() != grid.len() {
        return Err(Error::Parse {
            line: 0,
            msg: format!("expected {} value lines, found {}", grid.len(), values.len()),
        });
    }
    GridFunction::new(grid, values)
}

fn parse_f64(tok: Option<&str>, line: usize) -> Result<f64> {
    let tok = tok.ok_or(Error::Parse { line, msg: "missing number".into() })?;
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("bad number `{tok}`") })
}

fn parse_usize(tok: Option<&str>, line: usize) -> Result<usize> {
    let tok = tok.ok_or(Error::Parse { line, msg: "missing count".into() })?;
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("bad count `{tok}`") })
}
