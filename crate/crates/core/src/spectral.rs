//! Independent check of the chirp analysis through the actual spatial
//! spectrum of the chirp and through a densely sampled reference sum.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::wavefield::chirp_value;
use crate::{ArrayGeometry, Error, Result, Vec3, WaveParams};

/// Default support threshold relative to the spectral peak.
pub const DEFAULT_SUPPORT_DB: f64 = -20.0;
/// Default relative discrepancy above which the oracle reports aliasing.
pub const DEFAULT_ORACLE_RATIO: f64 = 0.5;
/// Reference spacing of the oracle, in wavelengths.
pub const ORACLE_REFERENCE_SPACING_LAMBDA: f64 = 0.25;

/// Chirp samples along one lattice axis.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisSamples {
    pub axis: usize,
    /// Sample spacing along the axis (length units).
    pub spacing: f64,
    pub values: Vec<Complex64>,
}

/// Samples `g` on a lattice refined by `oversample` along `axis_index`,
/// spanning the same aperture. Other lattice indices are held at the
/// middle element `(count - 1) / 2`.
pub fn sample_chirp_along_axis(
    array: &ArrayGeometry,
    tentative: Vec3,
    scatterer: Vec3,
    wave: &WaveParams,
    axis_index: usize,
    oversample: usize,
    epsilon: f64,
) -> Result<AxisSamples> {
    if axis_index >= array.dimensions() {
        return Err(Error::Spectral(format!("axis {axis_index} out of range")));
    }
    let n = array.counts()[axis_index];
    if n < 2 {
        return Err(Error::Spectral(format!(
            "axis {axis_index} has a single element and is not sampled"
        )));
    }
    if oversample == 0 {
        return Err(Error::Spectral("oversample must be >= 1".into()));
    }
    let mut idx: Vec<f64> = array.counts().iter().map(|&c| ((c - 1) / 2) as f64).collect();
    let total = (n - 1) * oversample + 1;
    let values = (0..total)
        .map(|m| {
            idx[axis_index] = m as f64 / oversample as f64;
            chirp_value(array.position_at_f(&idx), tentative, scatterer, wave, epsilon)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AxisSamples {
        axis: axis_index,
        spacing: array.spacings()[axis_index] / oversample as f64,
        values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    Rectangular,
    Hann,
}

impl Window {
    fn weights(self, n: usize) -> Vec<f64> {
        match self {
            Window::Rectangular => vec![1.0; n],
            Window::Hann => (0..n)
                .map(|i| 0.5 * (1.0 - (2.0 * PI * i as f64 / (n - 1) as f64).cos()))
                .collect(),
        }
    }
}

/// Sampled spatial spectrum along one axis, ordered by increasing wavenumber.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSupport {
    pub axis: usize,
    /// Bin wavenumbers (rad/length), from −π/spacing upward.
    pub frequencies: Vec<f64>,
    pub magnitude: Vec<f64>,
    /// Largest `|k|` whose magnitude reaches `threshold · peak`; 0 if only DC does.
    pub support_max: f64,
    /// Width of one bin (rad/length).
    pub bin_width: f64,
}

impl SpectralSupport {
    /// Half the sampling rate of the analysed sequence, `π/spacing`.
    pub fn nyquist(&self) -> f64 {
        self.bin_width * self.frequencies.len() as f64 / 2.0
    }

    pub fn magnitude_db(&self) -> Vec<f64> {
        let peak = self.magnitude.iter().cloned().fold(0.0, f64::max);
        self.magnitude
            .iter()
            .map(|m| 20.0 * (m / peak).log10())
            .collect()
    }
}

/// Windowed, zero-padded DFT of `samples`.
///
/// `pad_to` is rounded up to a power of two no shorter than the sample count.
/// The sign convention follows `G(k) = Σ g(x) exp(-j k x)`.
pub fn spectrum(
    samples: &AxisSamples,
    window: Window,
    pad_to: usize,
    threshold_db: f64,
) -> Result<SpectralSupport> {
    let n = samples.values.len();
    if n < 8 {
        return Err(Error::Spectral(format!("need at least 8 samples, got {n}")));
    }
    if !(threshold_db < 0.0) {
        return Err(Error::Spectral(format!(
            "threshold must be negative dB, got {threshold_db}"
        )));
    }
    let m = pad_to.max(n).next_power_of_two();
    let w = window.weights(n);
    let mut buf = vec![Complex64::default(); m];
    for (b, (v, w)) in buf.iter_mut().zip(samples.values.iter().zip(&w)) {
        *b = v * w;
    }
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);

    let bin_width = 2.0 * PI / (m as f64 * samples.spacing);
    let half = m / 2;
    let mut frequencies = Vec::with_capacity(m);
    let mut magnitude = Vec::with_capacity(m);
    for i in 0..m {
        let bin = (i + half) % m;
        let signed = bin as isize - if bin >= half { m as isize } else { 0 };
        frequencies.push(signed as f64 * bin_width);
        magnitude.push(buf[bin].norm());
    }
    let peak = magnitude.iter().cloned().fold(0.0, f64::max);
    let level = peak * 10f64.powf(threshold_db / 20.0);
    let support_max = frequencies
        .iter()
        .zip(&magnitude)
        .filter(|(_, &a)| a >= level)
        .map(|(f, _)| f.abs())
        .fold(0.0, f64::max);
    Ok(SpectralSupport {
        axis: samples.axis,
        frequencies,
        magnitude,
        support_max,
        bin_width,
    })
}

/// Hann-windowed support estimate with 8× zero padding.
pub fn spectral_support(samples: &AxisSamples, threshold_db: f64) -> Result<SpectralSupport> {
    spectrum(samples, Window::Hann, 8 * samples.values.len(), threshold_db)
}

/// Rectangular, unpadded DFT bin at zero wavenumber.
pub fn zero_bin(samples: &AxisSamples) -> Result<Complex64> {
    let n = samples.values.len();
    if n < 8 {
        return Err(Error::Spectral(format!("need at least 8 samples, got {n}")));
    }
    let mut buf = samples.values.clone();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    Ok(buf[0])
}

/// Outcome of the dense-reference comparison at one tentative point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleVerdict {
    /// Element-count-normalised partial image on the actual lattice.
    pub actual: Complex64,
    /// Element-count-normalised partial image on the dense reference lattice.
    pub reference: Complex64,
    /// `1 − min(|actual|, |reference|) / max(|actual|, |reference|)`, in `[0, 1]`.
    pub discrepancy: f64,
    pub aliased: bool,
}

/// Dense reference lattice for `array`: each sampled axis is subdivided by
/// `q = ceil(Δ / (λ/4))`, placing `q` samples at the sub-cell centers of every
/// element's cell. With `q = 1` this is the array itself.
pub fn reference_lattice(array: &ArrayGeometry, wave: &WaveParams) -> Vec<Vec3> {
    let h = ORACLE_REFERENCE_SPACING_LAMBDA * wave.wavelength();
    let per_axis: Vec<Vec<f64>> = array
        .counts()
        .iter()
        .zip(array.spacings())
        .map(|(&n, &d)| {
            if n < 2 {
                return vec![0.0];
            }
            let q = (d / h).ceil().max(1.0) as usize;
            (0..n * q)
                .map(|m| (m as f64 + 0.5) / q as f64 - 0.5)
                .collect()
        })
        .collect();
    let total: usize = per_axis.iter().map(Vec::len).product();
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; per_axis.len()];
    for _ in 0..total {
        let coords: Vec<f64> = idx.iter().zip(&per_axis).map(|(&i, ax)| ax[i]).collect();
        out.push(array.position_at_f(&coords));
        for j in (0..idx.len()).rev() {
            idx[j] += 1;
            if idx[j] < per_axis[j].len() {
                break;
            }
            idx[j] = 0;
        }
    }
    out
}

fn normalised_sum(
    points: &[Vec3],
    tentative: Vec3,
    scatterer: Vec3,
    wave: &WaveParams,
    epsilon: f64,
) -> Result<Complex64> {
    let mut acc = Complex64::default();
    for &p in points {
        acc += chirp_value(p, tentative, scatterer, wave, epsilon)?;
    }
    Ok(acc / points.len() as f64)
}

/// Flags aliasing at `tentative` by comparing the element-normalised partial
/// image of `array` with that of its dense reference lattice (see
/// [`reference_lattice`]). The point is aliased when the two magnitudes differ
/// by more than `ratio` relative to the larger one; `0.5` is a 6 dB mismatch.
pub fn aliasing_oracle(
    array: &ArrayGeometry,
    reference: &[Vec3],
    tentative: Vec3,
    scatterer: Vec3,
    wave: &WaveParams,
    ratio: f64,
    epsilon: f64,
) -> Result<OracleVerdict> {
    let actual = normalised_sum(array.element_positions(), tentative, scatterer, wave, epsilon)?;
    let reference = normalised_sum(reference, tentative, scatterer, wave, epsilon)?;
    let (a, r) = (actual.norm(), reference.norm());
    let discrepancy = if a.max(r) == 0.0 { 0.0 } else { 1.0 - a.min(r) / a.max(r) };
    Ok(OracleVerdict {
        actual,
        reference,
        discrepancy,
        aliased: !(discrepancy <= ratio),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::partial_image;
    use crate::{EvalGrid, EvalOptions, Role, Scene};

    const EPS: f64 = 0.1;

    fn fig1_tx() -> ArrayGeometry {
        ArrayGeometry::linear_with_length(Vec3::new(1000.0, 0.0, 0.0), Vec3::X, 64, 500.0, Role::Transmit)
            .unwrap()
    }

    fn naive_dft(x: &[Complex64], m: usize) -> Vec<Complex64> {
        (0..m)
            .map(|f| {
                x.iter()
                    .enumerate()
                    .map(|(n, v)| v * Complex64::from_polar(1.0, -2.0 * PI * (f * n) as f64 / m as f64))
                    .sum()
            })
            .collect()
    }

    #[test]
    fn oversample_one_gives_element_values() {
        let w = WaveParams::unit();
        let a = fig1_tx();
        let t = Vec3::new(700.0, 1300.0, 0.0);
        let s = Vec3::new(1000.0, 1000.0, 0.0);
        let samples = sample_chirp_along_axis(&a, t, s, &w, 0, 1, EPS).unwrap();
        let direct: Vec<Complex64> = a
            .element_positions()
            .iter()
            .map(|&p| chirp_value(p, t, s, &w, EPS).unwrap())
            .collect();
        assert_eq!(samples.values, direct);
        assert_eq!(samples.spacing, a.spacings()[0]);
    }

    #[test]
    fn oversampled_count_and_values() {
        let w = WaveParams::unit();
        let a = fig1_tx();
        let t = Vec3::new(700.0, 1300.0, 0.0);
        let s = Vec3::new(1000.0, 1000.0, 0.0);
        let samples = sample_chirp_along_axis(&a, t, s, &w, 0, 8, EPS).unwrap();
        assert_eq!(samples.values.len(), 505);
        for m in [0usize, 3, 77, 504] {
            let p = a.origin() + Vec3::X * (m as f64 * a.spacings()[0] / 8.0);
            let expect = chirp_value(p, t, s, &w, EPS).unwrap();
            assert!((samples.values[m] - expect).norm() <= 1e-9 * expect.norm());
        }
    }

    #[test]
    fn matched_samples_are_real_positive() {
        let w = WaveParams::unit();
        let s = Vec3::new(1000.0, 1000.0, 0.0);
        let samples = sample_chirp_along_axis(&fig1_tx(), s, s, &w, 0, 4, EPS).unwrap();
        assert!(samples.values.iter().all(|v| v.im == 0.0 && v.re > 0.0));
        let sup = spectral_support(&samples, DEFAULT_SUPPORT_DB).unwrap();
        let coarse = 2.0 * PI / (samples.values.len() as f64 * samples.spacing);
        assert!(sup.support_max <= 2.0 * coarse);
    }

    #[test]
    fn degenerate_axis_and_short_input_rejected() {
        let w = WaveParams::unit();
        let a = ArrayGeometry::uniform(Vec3::ZERO, vec![Vec3::X, Vec3::Y], vec![8, 1], vec![1.0, 1.0], Role::Receive)
            .unwrap();
        assert!(sample_chirp_along_axis(&a, Vec3::new(5.0, 50.0, 0.0), Vec3::new(0.0, 60.0, 0.0), &w, 1, 4, EPS).is_err());
        let short = AxisSamples { axis: 0, spacing: 1.0, values: vec![Complex64::new(1.0, 0.0); 7] };
        assert!(spectral_support(&short, -20.0).is_err());
        assert!(zero_bin(&short).is_err());
        let ok = AxisSamples { axis: 0, spacing: 1.0, values: vec![Complex64::new(1.0, 0.0); 8] };
        assert!(spectral_support(&ok, 0.0).is_err());
    }

    #[test]
    fn pure_tone_support() {
        let h = 0.1;
        let k0 = 7.3;
        let values: Vec<Complex64> = (0..400).map(|n| Complex64::from_polar(1.0, k0 * n as f64 * h)).collect();
        let samples = AxisSamples { axis: 0, spacing: h, values };
        let sup = spectral_support(&samples, -20.0).unwrap();
        let coarse = 2.0 * PI / (400.0 * h);
        assert!(sup.support_max >= k0 && sup.support_max - k0 <= 2.0 * coarse, "{} vs {k0}", sup.support_max);
        // peak bin sits at +k0, so the convention is exp(-jkx)
        let peak = sup
            .magnitude
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        assert!((sup.frequencies[peak] - k0).abs() <= sup.bin_width);
    }

    #[test]
    fn fft_matches_naive_dft() {
        let values: Vec<Complex64> = (0..16).map(|n| Complex64::new((n as f64).sin(), (n as f64 * 0.3).cos())).collect();
        let samples = AxisSamples { axis: 0, spacing: 0.5, values: values.clone() };
        let s = spectrum(&samples, Window::Rectangular, 16, -10.0).unwrap();
        let naive = naive_dft(&values, 16);
        for (i, f) in s.frequencies.iter().enumerate() {
            let bin = ((f / s.bin_width).round() as isize).rem_euclid(16) as usize;
            assert!((s.magnitude[i] - naive[bin].norm()).abs() < 1e-12);
        }
        assert!((zero_bin(&samples).unwrap() - values.iter().sum::<Complex64>()).norm() < 1e-12);
    }

    #[test]
    fn zero_bin_equals_partial_image() {
        let w = WaveParams::unit();
        let o = EvalOptions::for_wave(&w);
        let a = fig1_tx();
        let scene = Scene::new(Vec3::new(1000.0, 1000.0, 0.0));
        let g = EvalGrid::new(Vec3::new(600.0, 1200.0, 0.0), Vec3::new(610.0, 1210.0, 0.0), vec![2, 2]).unwrap();
        let f = partial_image(&a, &scene, &w, &g, &o).unwrap();
        for c in 0..g.len() {
            let s = sample_chirp_along_axis(&a, g.cell_center(c), scene.scatterer, &w, 0, 1, EPS).unwrap();
            let z = zero_bin(&s).unwrap();
            assert!((z - f.values[c]).norm() <= 1e-10 * f.values[c].norm());
        }
    }

    #[test]
    fn reference_lattice_refines_each_cell() {
        let w = WaveParams::unit();
        let a = ArrayGeometry::uniform(Vec3::ZERO, vec![Vec3::X], vec![3], vec![1.0], Role::Transmit).unwrap();
        let r = reference_lattice(&a, &w);
        assert_eq!(r.len(), 12);
        assert!((r[0].x + 0.375).abs() < 1e-15 && (r[11].x - 2.375).abs() < 1e-15);
        let fine = ArrayGeometry::uniform(Vec3::ZERO, vec![Vec3::X], vec![5], vec![0.25], Role::Transmit).unwrap();
        let r = reference_lattice(&fine, &w);
        for (p, q) in r.iter().zip(fine.element_positions()) {
            assert!((*p - *q).norm() < 1e-15);
        }
    }

    #[test]
    fn oracle_half_wavelength_and_matched() {
        let w = WaveParams::unit();
        let a = ArrayGeometry::centered(Vec3::new(50.0, 0.0, 0.0), vec![Vec3::X], vec![81], vec![0.5], Role::Transmit)
            .unwrap();
        let r = reference_lattice(&a, &w);
        let s = Vec3::new(50.0, 40.0, 0.0);
        let v = aliasing_oracle(&a, &r, s, s, &w, DEFAULT_ORACLE_RATIO, EPS).unwrap();
        assert!(!v.aliased);
        assert!(v.actual.im.abs() < 1e-15 && v.actual.re > 0.0);
    }
}
