//! Text artifacts: CSV with `#` metadata headers, binary PGM rasters and
//! SHA-256 checksums. Floats are written with 17 significant digits.

use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::chirp::AliasingMask;
use crate::imaging::ComplexField;
use crate::{Error, EvalGrid, Result};

/// Scientific notation with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Metadata lines common to grid products.
pub fn grid_header(out: &mut String, grid: &EvalGrid, lambda: f64) {
    let c = |v: crate::Vec3| {
        (0..grid.dims())
            .map(|i| fmt_f64(v[i] / lambda))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let _ = writeln!(out, "# grid_min_lambda: {}", c(grid.min()));
    let _ = writeln!(out, "# grid_max_lambda: {}", c(grid.max()));
    let _ = writeln!(
        out,
        "# resolution: {}",
        grid.resolution()
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    );
    let _ = writeln!(out, "# order: row-major, x fastest; coordinates are cell centers");
}

fn coords(grid: &EvalGrid, i: usize, lambda: f64) -> String {
    let p = grid.cell_center(i);
    format!(
        "{},{},{}",
        fmt_f64(p.x / lambda),
        fmt_f64(p.y / lambda),
        fmt_f64(p.z / lambda)
    )
}

pub fn complex_field_csv(field: &ComplexField, db: &[f64], header: &[String], lambda: f64) -> String {
    let mut out = String::new();
    for h in header {
        let _ = writeln!(out, "# {h}");
    }
    let _ = writeln!(out, "# product: {}", field.label);
    grid_header(&mut out, &field.grid, lambda);
    out.push_str("index,x_lambda,y_lambda,z_lambda,re,im,magnitude_db,excluded\n");
    for i in 0..field.len() {
        let v = field.values[i];
        let _ = writeln!(
            out,
            "{i},{},{},{},{},{}",
            coords(&field.grid, i, lambda),
            fmt_f64(v.re),
            fmt_f64(v.im),
            fmt_f64(db[i]),
            u8::from(field.excluded[i])
        );
    }
    out
}

pub fn mask_csv(mask: &AliasingMask, header: &[String], lambda: f64) -> String {
    let mut out = String::new();
    for h in header {
        let _ = writeln!(out, "# {h}");
    }
    let _ = writeln!(out, "# product: mask");
    grid_header(&mut out, &mask.grid, lambda);
    out.push_str("index,x_lambda,y_lambda,z_lambda,combined,excluded");
    for l in &mask.layers {
        let _ = write!(out, ",{}_axis{}", l.role.tag(), l.axis);
    }
    out.push('\n');
    for i in 0..mask.combined.len() {
        let _ = write!(
            out,
            "{i},{},{},{}",
            coords(&mask.grid, i, lambda),
            u8::from(mask.combined[i]),
            u8::from(mask.excluded[i])
        );
        for l in &mask.layers {
            let _ = write!(out, ",{}", u8::from(l.values[i]));
        }
        out.push('\n');
    }
    out
}

/// 8-bit binary PGM of a 2D grid; the top row is the largest y.
/// Returns `None` for grids that are not two-dimensional.
pub fn pgm(grid: &EvalGrid, pixel: impl Fn(usize) -> u8) -> Option<Vec<u8>> {
    if grid.dims() != 2 {
        return None;
    }
    let (w, h) = (grid.resolution()[0], grid.resolution()[1]);
    let mut out = format!("P5\n{w} {h}\n255\n").into_bytes();
    out.reserve(w * h);
    for row in (0..h).rev() {
        for col in 0..w {
            out.push(pixel(grid.flat_index(&[col, row])));
        }
    }
    Some(out)
}

/// Maps `[floor_db, 0]` linearly onto `[0, 255]`.
pub fn db_to_gray(db: f64, floor_db: f64) -> u8 {
    let t = ((db - floor_db) / -floor_db).clamp(0.0, 1.0);
    (t * 255.0).round() as u8
}

/// Cells of the combined mask that touch a non-mask cell or the grid edge.
pub fn mask_boundary(mask: &AliasingMask) -> Vec<bool> {
    let g = &mask.grid;
    let full = 3usize.pow(g.dims() as u32) - 1;
    (0..g.len())
        .map(|i| {
            if !mask.combined[i] {
                return false;
            }
            let n = g.neighbours(i);
            n.len() < full || n.iter().any(|&j| !mask.combined[j])
        })
        .collect()
}
