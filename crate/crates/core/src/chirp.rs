//! Local wavenumber of the spatial chirp, per-axis maximum spatial frequency
//! over an array, and the resulting aliasing-free predicate and masks.
//!
//! A lattice axis `j` with spacing `Δⱼ` replicates the spectrum of the chirp
//! with period `2π/Δⱼ`. A tentative point is aliasing-free for that axis when
//! the largest projected local wavenumber over the elements, `Kⱼ`, satisfies
//! `Kⱼ ≤ 2π/Δⱼ`. Axes with a single element do not sample and are always
//! aliasing-free. The bistatic verdict is the conjunction over both arrays.

use std::f64::consts::PI;

use crate::imaging::exclusion_flags;
use crate::{ArrayGeometry, Error, EvalGrid, EvalOptions, Result, Role, Scene, Vec3, WaveParams};

#[inline]
fn local_wavenumber_raw(probe: Vec3, tentative: Vec3, scatterer: Vec3, k: f64, eps: f64) -> Result<Vec3> {
    let to_t = probe - tentative;
    let to_s = probe - scatterer;
    let dt = to_t.norm();
    let ds = to_s.norm();
    for d in [dt, ds] {
        if d <= eps {
            return Err(Error::Singularity {
                distance: d,
                epsilon: eps,
            });
        }
    }
    Ok((to_t * (1.0 / dt) - to_s * (1.0 / ds)) * k)
}

/// Gradient of the chirp phase with respect to the probe position:
/// `k ((x - x̃)/|x - x̃| - (x - x_s)/|x - x_s|)`.
pub fn local_wavenumber(
    probe: Vec3,
    tentative: Vec3,
    scatterer: Vec3,
    wave: &WaveParams,
    epsilon: f64,
) -> Result<Vec3> {
    local_wavenumber_raw(probe, tentative, scatterer, wave.wavenumber(), epsilon)
}

/// `K_j` for every lattice axis of `array` (degenerate axes included).
pub fn max_spatial_frequencies(
    array: &ArrayGeometry,
    tentative: Vec3,
    scatterer: Vec3,
    wave: &WaveParams,
    epsilon: f64,
) -> Result<Vec<f64>> {
    let k = wave.wavenumber();
    let axes = array.axes();
    let mut kmax = vec![0.0f64; axes.len()];
    for &x in array.element_positions() {
        let lw = local_wavenumber_raw(x, tentative, scatterer, k, epsilon)?;
        for (m, a) in kmax.iter_mut().zip(axes) {
            *m = m.max(lw.dot(*a).abs());
        }
    }
    Ok(kmax)
}

/// Largest `|k · axis|` over the elements for lattice axis `axis_index`.
pub fn max_spatial_frequency(
    array: &ArrayGeometry,
    tentative: Vec3,
    scatterer: Vec3,
    wave: &WaveParams,
    axis_index: usize,
    epsilon: f64,
) -> Result<f64> {
    if axis_index >= array.dimensions() {
        return Err(Error::Geometry(format!(
            "axis {axis_index} out of range for a {}-axis array",
            array.dimensions()
        )));
    }
    Ok(max_spatial_frequencies(array, tentative, scatterer, wave, epsilon)?[axis_index])
}

/// Replica period `2π/Δ` of lattice axis `j`, or `None` for a single-element axis.
pub fn replica_period(array: &ArrayGeometry, j: usize) -> Option<f64> {
    (array.counts()[j] >= 2).then(|| 2.0 * PI / array.spacings()[j])
}

/// Per-axis verdicts for one array at one tentative point.
#[derive(Debug, Clone, PartialEq)]
pub struct AliasingVerdict {
    /// `K_j` per lattice axis.
    pub max_frequency: Vec<f64>,
    /// Condition per lattice axis; `true` for single-element axes.
    pub per_axis: Vec<bool>,
}

impl AliasingVerdict {
    pub fn is_free(&self) -> bool {
        self.per_axis.iter().all(|&b| b)
    }
}

fn verdict_from(array: &ArrayGeometry, kmax: Vec<f64>) -> AliasingVerdict {
    let per_axis = (0..kmax.len())
        .map(|j| replica_period(array, j).is_none_or(|p| kmax[j] <= p))
        .collect();
    AliasingVerdict {
        max_frequency: kmax,
        per_axis,
    }
}

pub fn aliasing_free(
    array: &ArrayGeometry,
    tentative: Vec3,
    scatterer: Vec3,
    wave: &WaveParams,
    epsilon: f64,
) -> Result<AliasingVerdict> {
    let kmax = max_spatial_frequencies(array, tentative, scatterer, wave, epsilon)?;
    Ok(verdict_from(array, kmax))
}

/// One boolean layer of an [`AliasingMask`]: a single array and lattice axis.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskLayer {
    pub role: Role,
    pub axis: usize,
    pub values: Vec<bool>,
}

/// Aliasing-free predicate over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AliasingMask {
    pub grid: EvalGrid,
    pub layers: Vec<MaskLayer>,
    pub combined: Vec<bool>,
    pub excluded: Vec<bool>,
}

impl AliasingMask {
    /// Number of aliasing-free (combined) cells.
    pub fn area(&self) -> usize {
        self.combined.iter().filter(|&&b| b).count()
    }

    /// Conjunction of the layers belonging to one array.
    pub fn array_layer(&self, role: Role) -> Vec<bool> {
        let mut out: Vec<bool> = self.excluded.iter().map(|&x| !x).collect();
        for layer in self.layers.iter().filter(|l| l.role == role) {
            for (o, &v) in out.iter_mut().zip(&layer.values) {
                *o &= v;
            }
        }
        out
    }
}

/// Evaluates the aliasing-free condition on every grid cell for both arrays.
///
/// Produces one layer per array and lattice axis (all axes, single-element
/// axes yield all-true layers). Excluded cells are false everywhere.
pub fn aliasing_mask(
    tx: &ArrayGeometry,
    rx: &ArrayGeometry,
    scene: &Scene,
    wave: &WaveParams,
    grid: &EvalGrid,
    opts: &EvalOptions,
) -> Result<AliasingMask> {
    scene.check_clearance(tx, opts.epsilon)?;
    scene.check_clearance(rx, opts.epsilon)?;
    let excluded = exclusion_flags(&[tx, rx], grid, opts);
    if excluded.iter().all(|&x| x) {
        return Err(Error::FullyExcluded);
    }
    let arrays = [tx, rx];
    let per_cell = opts.exec.try_map(grid.len(), |c| -> Result<Vec<bool>> {
        if excluded[c] {
            return Ok(vec![false; tx.dimensions() + rx.dimensions()]);
        }
        let p = grid.cell_center(c);
        let mut flags = Vec::with_capacity(tx.dimensions() + rx.dimensions());
        for a in arrays {
            flags.extend(aliasing_free(a, p, scene.scatterer, wave, opts.epsilon)?.per_axis);
        }
        Ok(flags)
    })?;

    let mut layers = Vec::new();
    let mut offset = 0;
    for a in arrays {
        for j in 0..a.dimensions() {
            layers.push(MaskLayer {
                role: a.role(),
                axis: j,
                values: per_cell.iter().map(|f| f[offset + j]).collect(),
            });
        }
        offset += a.dimensions();
    }
    let combined = per_cell.iter().map(|f| f.iter().all(|&b| b)).collect();
    Ok(AliasingMask {
        grid: grid.clone(),
        layers,
        combined,
        excluded,
    })
}
