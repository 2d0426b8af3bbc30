//! Parameter sweeps over array geometry and scatterer range.

use serde::{Deserialize, Serialize};

use crate::chirp::{aliasing_mask, AliasingMask};
use crate::config::RunConfig;
use crate::imaging::{bistatic_image, partial_image, ComplexField};
use crate::{ArrayGeometry, Error, Exec, Result, Role, Scene, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    /// Elements per sampled axis at fixed aperture.
    Spacing,
    /// Elements per sampled axis at fixed spacing.
    Length,
    /// Scatterer moved along its own direction; value is its largest coordinate in λ.
    Range,
    /// Number of lattice axes (1 to 3) with the base count and spacing on each.
    Dimensionality,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Spacing => "spacing",
            SweepParam::Length => "length",
            SweepParam::Range => "range",
            SweepParam::Dimensionality => "dimensionality",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "spacing" => Ok(SweepParam::Spacing),
            "length" => Ok(SweepParam::Length),
            "range" => Ok(SweepParam::Range),
            "dimensionality" => Ok(SweepParam::Dimensionality),
            _ => Err(Error::Config {
                field: "param".into(),
                message: format!(
                    "unknown sweep parameter `{s}` (expected spacing, length, range or dimensionality)"
                ),
            }),
        }
    }
}

fn count_value(param: SweepParam, value: f64, min: usize) -> Result<usize> {
    if value.fract() != 0.0 || value < min as f64 || value > 1e6 {
        return Err(Error::Config {
            field: "sweep.values".into(),
            message: format!(
                "{} sweep expects integers >= {min}, got {value}",
                param.name()
            ),
        });
    }
    Ok(value as usize)
}

fn rebuild_counts(a: &ArrayGeometry, n: usize, keep_aperture: bool) -> Result<ArrayGeometry> {
    let mut counts = a.counts().to_vec();
    let mut spacings = a.spacings().to_vec();
    for j in a.sampled_axes() {
        if keep_aperture {
            spacings[j] = a.aperture(j) / (n - 1) as f64;
        }
        counts[j] = n;
    }
    ArrayGeometry::centered(a.center(), a.axes().to_vec(), counts, spacings, a.role())
}

fn with_dimensionality(a: &ArrayGeometry, d: usize) -> Result<ArrayGeometry> {
    let a0 = a.axes()[0];
    let helper = if a0.z.abs() < 0.9 { Vec3::Z } else { Vec3::X };
    // in-plane perpendicular: helper × a0, normalised
    let c = Vec3::new(
        helper.y * a0.z - helper.z * a0.y,
        helper.z * a0.x - helper.x * a0.z,
        helper.x * a0.y - helper.y * a0.x,
    );
    let a1 = c * (1.0 / c.norm());
    let a2 = Vec3::new(
        a0.y * a1.z - a0.z * a1.y,
        a0.z * a1.x - a0.x * a1.z,
        a0.x * a1.y - a0.y * a1.x,
    );
    let axes = [a0, a1, a2][..d].to_vec();
    let n = a.counts()[0];
    let s = a.spacings()[0];
    ArrayGeometry::centered(a.center(), axes, vec![n; d], vec![s; d], a.role())
}

/// Geometry and scene of one sweep point.
pub fn variant(
    config: &RunConfig,
    param: SweepParam,
    value: f64,
) -> Result<(ArrayGeometry, ArrayGeometry, Scene)> {
    let (tx, rx, mut scene) = (&config.tx, &config.rx, config.scene);
    let (tx, rx) = match param {
        SweepParam::Spacing | SweepParam::Length => {
            let n = count_value(param, value, 2)?;
            let keep = param == SweepParam::Spacing;
            (rebuild_counts(tx, n, keep)?, rebuild_counts(rx, n, keep)?)
        }
        SweepParam::Range => {
            let s = scene.scatterer;
            let m = s.x.abs().max(s.y.abs()).max(s.z.abs());
            if !(value.is_finite() && value > 0.0) || m == 0.0 {
                return Err(Error::Config {
                    field: "sweep.values".into(),
                    message: format!("range sweep needs a positive value and a non-origin scatterer, got {value}"),
                });
            }
            scene.scatterer = s * (value * config.wave.wavelength() / m);
            for a in [tx, rx] {
                scene.check_clearance(a, config.epsilon())?;
            }
            (tx.clone(), rx.clone())
        }
        SweepParam::Dimensionality => {
            let d = count_value(param, value, 1)?;
            if d > 3 {
                return Err(Error::Config {
                    field: "sweep.values".into(),
                    message: format!("dimensionality must be 1, 2 or 3, got {d}"),
                });
            }
            (with_dimensionality(tx, d)?, with_dimensionality(rx, d)?)
        }
    };
    Ok((tx, rx, scene))
}

/// Summary of one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub param: SweepParam,
    pub value: f64,
    pub tx_elements: usize,
    pub rx_elements: usize,
    pub mask_area: usize,
    pub tx_area: usize,
    pub rx_area: usize,
    pub peak: Vec3,
    pub peak_in_mask: bool,
    /// Largest `|I|` outside the mask relative to the image maximum, in dB.
    pub artifact_db: f64,
}

pub struct SweepPoint {
    pub row: SweepRow,
    pub mask: AliasingMask,
    pub image: ComplexField,
}

/// Runs one sweep point: both partial images, the bistatic image and the mask.
pub fn evaluate(config: &RunConfig, param: SweepParam, value: f64, exec: Exec) -> Result<SweepPoint> {
    let (tx, rx, scene) = variant(config, param, value)?;
    let opts = config.eval_options(exec);
    let st = partial_image(&tx, &scene, &config.wave, &config.grid, &opts)?;
    let sr = partial_image(&rx, &scene, &config.wave, &config.grid, &opts)?;
    let image = bistatic_image(&st, &sr, scene.reflectivity)?;
    let mask = aliasing_mask(&tx, &rx, &scene, &config.wave, &config.grid, &opts)?;

    let peak_idx = image.argmax_abs().ok_or(Error::FullyExcluded)?;
    let peak_val = image.values[peak_idx].norm();
    let outside = image
        .values
        .iter()
        .enumerate()
        .filter(|&(i, _)| !image.excluded[i] && !mask.combined[i])
        .map(|(_, v)| v.norm())
        .fold(0.0f64, f64::max);
    let count = |v: Vec<bool>| v.into_iter().filter(|&b| b).count();
    let row = SweepRow {
        param,
        value,
        tx_elements: tx.len(),
        rx_elements: rx.len(),
        mask_area: mask.area(),
        tx_area: count(mask.array_layer(Role::Transmit)),
        rx_area: count(mask.array_layer(Role::Receive)),
        peak: config.grid.cell_center(peak_idx),
        peak_in_mask: mask.combined[peak_idx],
        artifact_db: 20.0 * (outside / peak_val).log10(),
    };
    Ok(SweepPoint { row, mask, image })
}

pub fn sweep(config: &RunConfig, param: SweepParam, values: &[f64], exec: Exec) -> Result<Vec<SweepPoint>> {
    values
        .iter()
        .map(|&v| evaluate(config, param, v, exec))
        .collect()
}
