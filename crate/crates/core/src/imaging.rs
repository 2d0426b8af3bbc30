//! Matched-filter reconstruction: monostatic partial images, their bistatic
//! product, and the direct double sum used to cross-check separability.

use num_complex::Complex64;

use crate::wavefield::chirp_from_distances;
use crate::{ArrayGeometry, Error, EvalGrid, EvalOptions, Result, Scene, WaveParams};

/// Complex value per grid cell. Excluded cells hold zero and are flagged.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    pub grid: EvalGrid,
    pub values: Vec<Complex64>,
    pub excluded: Vec<bool>,
    pub label: String,
}

impl ComplexField {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Cell with the largest magnitude among non-excluded cells.
    pub fn argmax_abs(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, v) in self.values.iter().enumerate() {
            if self.excluded[i] {
                continue;
            }
            let m = v.norm();
            if best.is_none_or(|(_, b)| m > b) {
                best = Some((i, m));
            }
        }
        best.map(|(i, _)| i)
    }

    pub fn max_abs(&self) -> f64 {
        self.argmax_abs().map_or(0.0, |i| self.values[i].norm())
    }
}

/// Marks every cell within `epsilon` of any element of any array.
pub fn exclusion_flags(arrays: &[&ArrayGeometry], grid: &EvalGrid, opts: &EvalOptions) -> Vec<bool> {
    opts.exec.map(grid.len(), |c| {
        let p = grid.cell_center(c);
        arrays
            .iter()
            .any(|a| a.element_positions().iter().any(|e| e.distance(p) <= opts.epsilon))
    })
}

fn check_any_valid(excluded: &[bool]) -> Result<()> {
    if excluded.iter().all(|&e| e) {
        return Err(Error::FullyExcluded);
    }
    Ok(())
}

/// Monostatic partial image `S(x̃) = Σ_elements conj(z(x̃, x)) · z(x_s, x)`.
pub fn partial_image(
    array: &ArrayGeometry,
    scene: &Scene,
    wave: &WaveParams,
    grid: &EvalGrid,
    opts: &EvalOptions,
) -> Result<ComplexField> {
    if array.is_empty() {
        return Err(Error::EmptyArray);
    }
    scene.check_clearance(array, opts.epsilon)?;
    let elements = array.element_positions();
    let to_scatterer: Vec<f64> = elements.iter().map(|e| e.distance(scene.scatterer)).collect();
    let k = wave.wavenumber();
    let eps = opts.epsilon;

    let cells = opts.exec.map(grid.len(), |c| {
        let p = grid.cell_center(c);
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, &ds) in elements.iter().zip(&to_scatterer) {
            let dt = e.distance(p);
            if dt <= eps {
                return None;
            }
            acc += chirp_from_distances(dt, ds, k);
        }
        Some(acc)
    });

    let excluded: Vec<bool> = cells.iter().map(Option::is_none).collect();
    check_any_valid(&excluded)?;
    Ok(ComplexField {
        grid: grid.clone(),
        values: cells.into_iter().map(Option::unwrap_or_default).collect(),
        excluded,
        label: format!("partial_{}", array.role().tag()),
    })
}

/// Bistatic image `ζ · S_t · S_r`, cell by cell.
pub fn bistatic_image(
    tx_field: &ComplexField,
    rx_field: &ComplexField,
    reflectivity: Complex64,
) -> Result<ComplexField> {
    if tx_field.grid != rx_field.grid {
        return Err(Error::GridMismatch(
            "transmit and receive partial images use different grids".into(),
        ));
    }
    let excluded: Vec<bool> = tx_field
        .excluded
        .iter()
        .zip(&rx_field.excluded)
        .map(|(a, b)| *a || *b)
        .collect();
    let values = tx_field
        .values
        .iter()
        .zip(&rx_field.values)
        .zip(&excluded)
        .map(|((t, r), &x)| {
            if x {
                Complex64::default()
            } else {
                reflectivity * t * r
            }
        })
        .collect();
    Ok(ComplexField {
        grid: tx_field.grid.clone(),
        values,
        excluded,
        label: "image".into(),
    })
}

/// Direct matched filter
/// `Σ_t Σ_r u(x_r, x_t) · conj(z(x̃, x_r)) · conj(z(x̃, x_t))`.
///
/// Quadratic in the element count; meant as the oracle for [`bistatic_image`].
pub fn direct_image(
    tx: &ArrayGeometry,
    rx: &ArrayGeometry,
    scene: &Scene,
    wave: &WaveParams,
    grid: &EvalGrid,
    opts: &EvalOptions,
) -> Result<ComplexField> {
    if tx.is_empty() || rx.is_empty() {
        return Err(Error::EmptyArray);
    }
    let eps = opts.epsilon;
    let k = wave.wavenumber();
    let txp = tx.element_positions();
    let rxp = rx.element_positions();
    scene.check_clearance(tx, eps)?;
    scene.check_clearance(rx, eps)?;
    let ds_t: Vec<f64> = txp.iter().map(|x| x.distance(scene.scatterer)).collect();
    let ds_r: Vec<f64> = rxp.iter().map(|x| x.distance(scene.scatterer)).collect();

    let excluded = exclusion_flags(&[tx, rx], grid, opts);
    check_any_valid(&excluded)?;

    // u · conj(z(p, x_r)) · conj(z(p, x_t)) is evaluated as ζ times one
    // polar value so the phase is a sum of distance differences
    let values = opts.exec.map(grid.len(), |c| {
        if excluded[c] {
            return Complex64::default();
        }
        let p = grid.cell_center(c);
        let dp_t: Vec<f64> = txp.iter().map(|x| x.distance(p)).collect();
        let dp_r: Vec<f64> = rxp.iter().map(|x| x.distance(p)).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for t in 0..txp.len() {
            for r in 0..rxp.len() {
                let amp = 1.0 / (ds_r[r] * ds_t[t] * dp_r[r] * dp_t[t]);
                let phase = k * ((dp_r[r] - ds_r[r]) + (dp_t[t] - ds_t[t]));
                acc += scene.reflectivity * Complex64::from_polar(amp, phase);
            }
        }
        acc
    });
    Ok(ComplexField {
        grid: grid.clone(),
        values,
        excluded,
        label: "direct_image".into(),
    })
}

/// Peak-normalised magnitude in dB, clamped below at `floor_db`.
/// Excluded cells read `floor_db`.
pub fn magnitude_db(field: &ComplexField, floor_db: f64) -> Result<Vec<f64>> {
    check_any_valid(&field.excluded)?;
    let peak = field.max_abs();
    if peak == 0.0 {
        return Err(Error::AllZero);
    }
    Ok(field
        .values
        .iter()
        .zip(&field.excluded)
        .map(|(v, &x)| {
            if x {
                floor_db
            } else {
                (20.0 * (v.norm() / peak).log10()).max(floor_db)
            }
        })
        .collect())
}
