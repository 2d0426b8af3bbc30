//! Built-in scenarios: one bistatic reconstruction and four parameter sweeps.
//!
//! Geometry for all presets: a linear transmit array along x centered under the
//! target on the x axis, a linear receive array along y centered beside it on
//! the y axis, and the scatterer on the diagonal. Figure grids use an odd cell
//! count so the scatterer lies on a cell center, and keep a small margin from
//! the array lines where the `1/r` amplitude of single elements dominates.

use crate::config::{
    ArrayDoc, ConfigDoc, GridDoc, Product, SceneDoc, SweepDoc, ThresholdsDoc, WaveDoc,
};
use crate::sweep::SweepParam;
use crate::{Error, Result};

pub const PRESET_NAMES: [&str; 5] = ["fig1", "fig2a", "fig2b", "fig2c", "range"];

/// Cells per axis for figure grids.
pub const FIGURE_RESOLUTION: usize = 257;

fn linear(center: [f64; 2], axis: [f64; 2], count: usize, spacing: f64) -> ArrayDoc {
    ArrayDoc {
        origin: None,
        center: Some(center.to_vec()),
        axes: vec![axis.to_vec()],
        counts: vec![count],
        spacings_lambda: vec![spacing],
    }
}

/// Linear arrays of `count` elements spanning `length` centered at `(r, 0)` and `(0, r)`.
fn symmetric_pair(r: f64, count: usize, length: f64) -> (ArrayDoc, ArrayDoc) {
    let d = length / (count - 1) as f64;
    (
        linear([r, 0.0], [1.0, 0.0], count, d),
        linear([0.0, r], [0.0, 1.0], count, d),
    )
}

fn square_grid(lo: f64, hi: f64) -> GridDoc {
    GridDoc {
        min: vec![lo, lo],
        max: vec![hi, hi],
        resolution: vec![FIGURE_RESOLUTION, FIGURE_RESOLUTION],
    }
}

fn base(target: f64, tx: ArrayDoc, rx: ArrayDoc, grid: GridDoc, outputs: Vec<Product>) -> ConfigDoc {
    ConfigDoc {
        wave: WaveDoc { lambda: 1.0 },
        tx,
        rx,
        scene: SceneDoc {
            scatterer: vec![target, target],
            reflectivity_re: 1.0,
            reflectivity_im: 0.0,
        },
        grid,
        outputs,
        thresholds: ThresholdsDoc::default(),
        spectrum: None,
        sweep: None,
    }
}

/// 64-element, 500λ arrays; scatterer at (1000λ, 1000λ); grid [20, 1980]λ².
pub fn fig1() -> ConfigDoc {
    let (tx, rx) = symmetric_pair(1000.0, 64, 500.0);
    base(
        1000.0,
        tx,
        rx,
        square_grid(20.0, 1980.0),
        vec![
            Product::PartialTx,
            Product::PartialRx,
            Product::Image,
            Product::Mask,
        ],
    )
}

fn fig2_base(count: usize, length: f64, sweep: SweepDoc) -> ConfigDoc {
    let (tx, rx) = symmetric_pair(500.0, count, length);
    let mut doc = base(500.0, tx, rx, square_grid(10.0, 990.0), vec![Product::Sweep]);
    doc.sweep = Some(sweep);
    doc
}

/// Antenna spacing at fixed 500λ aperture: N = 16 versus N = 64.
pub fn fig2a() -> ConfigDoc {
    fig2_base(
        64,
        500.0,
        SweepDoc {
            param: SweepParam::Spacing,
            values: vec![16.0, 64.0],
        },
    )
}

/// Aperture at fixed spacing: N = 32 (≈250λ) versus N = 128 (≈1000λ).
pub fn fig2b() -> ConfigDoc {
    fig2_base(
        32,
        250.0,
        SweepDoc {
            param: SweepParam::Length,
            values: vec![32.0, 128.0],
        },
    )
}

/// Linear 64-element arrays versus 64×64 planar arrays in the image plane.
pub fn fig2c() -> ConfigDoc {
    fig2_base(
        64,
        500.0,
        SweepDoc {
            param: SweepParam::Dimensionality,
            values: vec![1.0, 2.0],
        },
    )
}

/// `fig1` arrays with the scatterer at (500λ, 500λ) and (1000λ, 1000λ).
pub fn range() -> ConfigDoc {
    let mut doc = fig1();
    doc.outputs = vec![Product::Sweep];
    doc.sweep = Some(SweepDoc {
        param: SweepParam::Range,
        values: vec![500.0, 1000.0],
    });
    doc
}

pub fn preset(name: &str) -> Result<ConfigDoc> {
    match name {
        "fig1" => Ok(fig1()),
        "fig2a" => Ok(fig2a()),
        "fig2b" => Ok(fig2b()),
        "fig2c" => Ok(fig2c()),
        "range" => Ok(range()),
        _ => Err(Error::Config {
            field: "preset".into(),
            message: format!("unknown preset `{name}` (known: {})", PRESET_NAMES.join(", ")),
        }),
    }
}
