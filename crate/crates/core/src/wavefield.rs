//! Spherical-wave Green's factor, bistatic received signal and the spatial chirp.

use num_complex::Complex64;

use crate::{Error, Result, Scene, Vec3, WaveParams};

fn checked_distance(a: Vec3, b: Vec3, epsilon: f64) -> Result<f64> {
    let d = a.distance(b);
    if d <= epsilon {
        return Err(Error::Singularity {
            distance: d,
            epsilon,
        });
    }
    Ok(d)
}

/// `exp(-j k r) / r` with `r = |source - probe|`.
pub fn green(source: Vec3, probe: Vec3, wave: &WaveParams, epsilon: f64) -> Result<Complex64> {
    let r = checked_distance(source, probe, epsilon)?;
    Ok(Complex64::from_polar(1.0 / r, -wave.wavenumber() * r))
}

/// Noise-free sample `ζ · z(x_s, x_r) · z(x_s, x_t)` for one transmit/receive pair.
pub fn received_signal(
    rx: Vec3,
    tx: Vec3,
    scene: &Scene,
    wave: &WaveParams,
    epsilon: f64,
) -> Result<Complex64> {
    let zr = green(scene.scatterer, rx, wave, epsilon)?;
    let zt = green(scene.scatterer, tx, wave, epsilon)?;
    Ok(scene.reflectivity * zr * zt)
}

/// Chirp sample `conj(z(tentative, probe)) · z(scatterer, probe)`.
pub fn chirp_value(
    probe: Vec3,
    tentative: Vec3,
    scatterer: Vec3,
    wave: &WaveParams,
    epsilon: f64,
) -> Result<Complex64> {
    let dt = checked_distance(probe, tentative, epsilon)?;
    let ds = checked_distance(probe, scatterer, epsilon)?;
    Ok(chirp_from_distances(dt, ds, wave.wavenumber()))
}

/// Chirp sample from the probe–tentative and probe–scatterer distances.
#[inline]
pub(crate) fn chirp_from_distances(dt: f64, ds: f64, wavenumber: f64) -> Complex64 {
    Complex64::from_polar(1.0 / (dt * ds), wavenumber * (dt - ds))
}

/// Unwrapped chirp phase `k (|probe - tentative| - |probe - scatterer|)`.
pub fn chirp_phase(
    probe: Vec3,
    tentative: Vec3,
    scatterer: Vec3,
    wave: &WaveParams,
    epsilon: f64,
) -> Result<f64> {
    let dt = checked_distance(probe, tentative, epsilon)?;
    let ds = checked_distance(probe, scatterer, epsilon)?;
    Ok(wave.wavenumber() * (dt - ds))
}
