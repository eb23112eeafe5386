//! Browser bindings for the demo page in `www/`: operator fields,
//! Calderón–Zygmund cube overlays and one-third covers.

use wasm_bindgen::prelude::*;

use cauchy_comm::dyadic::{cover_cube, cz_decompose, DyadicShift};
use cauchy_comm::grid::shapes::disk_fraction;
use cauchy_comm::grid::{ComplexGrid, Cube, GridFunction};
use cauchy_comm::lab::HomogeneousSymbol;
use cauchy_comm::operators::{apply, OperatorSpec, SelfCell};
use cauchy_comm::{Complex64, Error};

fn js(e: Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Demo grid: `n × n` cells over `[-1, 1)²`.
fn demo_grid(n: usize) -> Result<ComplexGrid, JsValue> {
    if !(4..=96).contains(&n) {
        return Err(JsValue::from_str("grid size must be between 4 and 96"));
    }
    ComplexGrid::square(-1.0, 1.0, n).map_err(js)
}

/// `|T f|` on the demo grid, row-major from the bottom row, where `f` is the
/// indicator of the disk of radius `0.45` at `0.15 + 0.1i`.
///
/// `op` is one of `cauchy`, `commutator`, `riesz`, `maxfn`; `symbol` uses
/// the descriptor syntax (`re`, `z`, `abspow:0.5`, `logabs`, ...) and is
/// read by the commutator only; `alpha` is the Riesz / maximal order.
#[wasm_bindgen]
pub fn operator_field(op: &str, symbol: &str, n: usize, alpha: f64) -> Result<Vec<f64>, JsValue> {
    let grid = demo_grid(n)?;
    let f = disk_fraction(&grid, Complex64::new(0.15, 0.1), 0.45).map_err(js)?;
    let spec = match op {
        "cauchy" => OperatorSpec::Cauchy,
        "commutator" => OperatorSpec::Commutator(SelfCell::Gradient),
        "riesz" => OperatorSpec::Riesz { alpha },
        "maxfn" => OperatorSpec::FractionalMaximal { alpha },
        other => return Err(JsValue::from_str(&format!("unknown operator `{other}`"))),
    };
    let b = match op {
        "commutator" => Some(symbol.parse::<HomogeneousSymbol>().map_err(js)?.sample(&grid).map_err(js)?),
        _ => None,
    };
    let out = apply(&spec, &f, b.as_ref()).map_err(js)?;
    Ok(out.output.values().iter().map(|v| v.norm()).collect())
}

/// Density `min(|z − c|^{-1}, 40)` with `c = 0.3 − 0.2i`, shared by the CZ panel.
fn cz_density(grid: ComplexGrid) -> Result<GridFunction, JsValue> {
    let c = Complex64::new(0.3, -0.2);
    GridFunction::from_real_fn(grid, |z| (z - c).norm().recip().min(40.0)).map_err(js)
}

/// Cells of the CZ density, row-major from the bottom row.
#[wasm_bindgen]
pub fn cz_density_values(n: usize) -> Result<Vec<f64>, JsValue> {
    Ok(cz_density(demo_grid(n)?)?.values().iter().map(|v| v.re).collect())
}

/// Stopping cubes at `height` for shift index `shift` (0..=3), flattened as
/// `[x, y, side, average, ...]`. The root level is raised until admissible.
#[wasm_bindgen]
pub fn cz_cubes(n: usize, height: f64, shift: usize) -> Result<Vec<f64>, JsValue> {
    let t = *DyadicShift::ALL.get(shift).ok_or_else(|| JsValue::from_str("shift index must be 0..=3"))?;
    let f = cz_density(demo_grid(n)?)?;
    let mut level = 1;
    let d = loop {
        match cz_decompose(&f, height, t, level) {
            Err(Error::RootTooSmall { needed, .. }) if needed > level => level = needed,
            other => break other.map_err(js)?,
        }
    };
    Ok(d.cubes
        .iter()
        .flat_map(|c| {
            let z = c.cube.corner();
            [z.re, z.im, c.cube.side(), c.average]
        })
        .collect())
}

/// Covering cube of `[x, x+side) × [y, y+side)` from the one-third trick, as
/// `[shift_x, shift_y, corner_x, corner_y, side]`.
#[wasm_bindgen]
pub fn one_third_cover(x: f64, y: f64, side: f64) -> Result<Vec<f64>, JsValue> {
    let q = Cube::new(Complex64::new(x, y), side).map_err(js)?;
    let (t, d) = cover_cube(&q);
    let (sx, sy) = t.components();
    let z = d.corner();
    Ok(vec![sx, sy, z.re, z.im, d.side()])
}
