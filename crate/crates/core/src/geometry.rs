//! Wave parameters, regular antenna lattices, scenes and evaluation grids.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, Vec3};

/// Tolerance for unit norm and pairwise orthogonality of lattice axes.
pub const AXIS_TOLERANCE: f64 = 1e-12;

/// Default exclusion radius around antenna elements, in wavelengths.
pub const DEFAULT_EPSILON_LAMBDA: f64 = 0.1;

/// Narrowband carrier description. The wavenumber is always derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveParams {
    wavelength: f64,
}

impl WaveParams {
    pub fn new(wavelength: f64) -> Result<Self> {
        if !(wavelength.is_finite() && wavelength > 0.0) {
            return Err(Error::Geometry(format!(
                "wavelength must be positive and finite, got {wavelength}"
            )));
        }
        Ok(WaveParams { wavelength })
    }

    /// Wavelength-normalised units (λ = 1).
    pub fn unit() -> Self {
        WaveParams { wavelength: 1.0 }
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// Default exclusion radius (0.1 λ).
    pub fn default_epsilon(&self) -> f64 {
        DEFAULT_EPSILON_LAMBDA * self.wavelength
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    #[serde(alias = "tx")]
    Transmit,
    #[serde(alias = "rx")]
    Receive,
}

impl Role {
    pub fn tag(self) -> &'static str {
        match self {
            Role::Transmit => "tx",
            Role::Receive => "rx",
        }
    }
}

/// Regular lattice of antenna elements:
/// `origin + Σⱼ nⱼ·spacingⱼ·axisⱼ` with `nⱼ ∈ 0..countⱼ`.
///
/// Elements are enumerated in lattice-index order with the last axis
/// varying fastest. Positions are computed once at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayGeometry {
    origin: Vec3,
    axes: Vec<Vec3>,
    counts: Vec<usize>,
    spacings: Vec<f64>,
    role: Role,
    positions: Vec<Vec3>,
}

impl ArrayGeometry {
    pub fn uniform(
        origin: Vec3,
        axes: Vec<Vec3>,
        counts: Vec<usize>,
        spacings: Vec<f64>,
        role: Role,
    ) -> Result<Self> {
        if axes.is_empty() || axes.len() > 3 {
            return Err(Error::Geometry(format!(
                "expected 1 to 3 lattice axes, got {}",
                axes.len()
            )));
        }
        if counts.len() != axes.len() || spacings.len() != axes.len() {
            return Err(Error::Geometry(format!(
                "axes ({}), counts ({}) and spacings ({}) must have equal length",
                axes.len(),
                counts.len(),
                spacings.len()
            )));
        }
        if !origin.is_finite() {
            return Err(Error::Geometry("origin must be finite".into()));
        }
        for (j, a) in axes.iter().enumerate() {
            if !a.is_finite() || (a.norm() - 1.0).abs() > AXIS_TOLERANCE {
                return Err(Error::Geometry(format!(
                    "axis {j} is not unit-norm (|a| = {})",
                    a.norm()
                )));
            }
            for (l, b) in axes.iter().enumerate().skip(j + 1) {
                if a.dot(*b).abs() > AXIS_TOLERANCE {
                    return Err(Error::Geometry(format!(
                        "axes {j} and {l} are not orthogonal (dot = {:e})",
                        a.dot(*b)
                    )));
                }
            }
        }
        if let Some(j) = counts.iter().position(|&c| c == 0) {
            return Err(Error::Geometry(format!("count on axis {j} must be >= 1")));
        }
        if let Some(j) = spacings.iter().position(|&s| !(s.is_finite() && s > 0.0)) {
            return Err(Error::Geometry(format!(
                "spacing on axis {j} must be positive, got {}",
                spacings[j]
            )));
        }

        let mut geometry = ArrayGeometry {
            origin,
            axes,
            counts,
            spacings,
            role,
            positions: Vec::new(),
        };
        let total = geometry.len();
        geometry.positions = (0..total)
            .map(|flat| geometry.position_at(&geometry.lattice_index(flat)))
            .collect();
        Ok(geometry)
    }

    /// Builds a lattice whose geometric center (not first element) is `center`.
    pub fn centered(
        center: Vec3,
        axes: Vec<Vec3>,
        counts: Vec<usize>,
        spacings: Vec<f64>,
        role: Role,
    ) -> Result<Self> {
        let mut origin = center;
        for ((a, &n), &d) in axes.iter().zip(&counts).zip(&spacings) {
            origin += *a * (-(n.saturating_sub(1) as f64) / 2.0 * d);
        }
        Self::uniform(origin, axes, counts, spacings, role)
    }

    /// A linear array of `count` elements spanning `length` (spacing `length / (count - 1)`).
    pub fn linear_with_length(
        center: Vec3,
        axis: Vec3,
        count: usize,
        length: f64,
        role: Role,
    ) -> Result<Self> {
        if count < 2 {
            return Err(Error::Geometry(
                "an aperture length needs at least two elements".into(),
            ));
        }
        Self::centered(
            center,
            vec![axis],
            vec![count],
            vec![length / (count - 1) as f64],
            role,
        )
    }

    pub fn origin(&self) -> Vec3 {
        self.origin
    }

    pub fn axes(&self) -> &[Vec3] {
        &self.axes
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn spacings(&self) -> &[f64] {
        &self.spacings
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dimensions(&self) -> usize {
        self.axes.len()
    }

    /// Lattice axes that actually sample space (two or more elements).
    pub fn sampled_axes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.axes.len()).filter(|&j| self.counts[j] >= 2)
    }

    pub fn center(&self) -> Vec3 {
        let mut c = self.origin;
        for j in 0..self.axes.len() {
            c += self.axes[j] * ((self.counts[j] - 1) as f64 / 2.0 * self.spacings[j]);
        }
        c
    }

    /// Extent `(count - 1)·spacing` along lattice axis `j`.
    pub fn aperture(&self, j: usize) -> f64 {
        (self.counts[j] - 1) as f64 * self.spacings[j]
    }

    /// Element positions in lattice-index order.
    pub fn element_positions(&self) -> &[Vec3] {
        &self.positions
    }

    /// Splits a flat element index into per-axis lattice indices.
    pub fn lattice_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.counts.len()];
        for j in (0..self.counts.len()).rev() {
            idx[j] = flat % self.counts[j];
            flat /= self.counts[j];
        }
        idx
    }

    /// Position of the element with lattice indices `n` (indices may be fractional via
    /// [`ArrayGeometry::position_at_f`]).
    pub fn position_at(&self, n: &[usize]) -> Vec3 {
        let mut p = self.origin;
        for j in 0..self.axes.len() {
            p += self.axes[j] * (n[j] as f64 * self.spacings[j]);
        }
        p
    }

    /// Lattice point at real-valued coordinates (in units of each axis spacing).
    pub fn position_at_f(&self, n: &[f64]) -> Vec3 {
        let mut p = self.origin;
        for j in 0..self.axes.len() {
            p += self.axes[j] * (n[j] * self.spacings[j]);
        }
        p
    }

    /// Copy with different spacings and counts on the same axes and origin.
    pub fn with_lattice(&self, counts: Vec<usize>, spacings: Vec<f64>) -> Result<Self> {
        Self::uniform(self.origin, self.axes.clone(), counts, spacings, self.role)
    }

    /// Smallest distance from `p` to any element.
    pub fn min_distance_to(&self, p: Vec3) -> f64 {
        self.positions
            .iter()
            .map(|e| e.distance(p))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Point scatterer with complex reflectivity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scene {
    pub scatterer: Vec3,
    pub reflectivity: Complex64,
}

impl Scene {
    /// Scatterer with unit reflectivity.
    pub fn new(scatterer: Vec3) -> Self {
        Scene {
            scatterer,
            reflectivity: Complex64::new(1.0, 0.0),
        }
    }

    pub fn with_reflectivity(mut self, reflectivity: Complex64) -> Self {
        self.reflectivity = reflectivity;
        self
    }

    /// Checks the scatterer keeps more than `epsilon` from every element.
    pub fn check_clearance(&self, array: &ArrayGeometry, epsilon: f64) -> Result<()> {
        let d = array.min_distance_to(self.scatterer);
        if d <= epsilon {
            return Err(Error::Singularity {
                distance: d,
                epsilon,
            });
        }
        Ok(())
    }
}

/// Rectangular grid of tentative scatterer locations.
///
/// `resolution` holds the number of cells along the leading 1–3 Cartesian
/// axes; remaining coordinates are fixed at `min`. Cell values are taken
/// at cell centers. Flat indices run row-major with x varying fastest,
/// so a 2D grid is stored as rows of constant y.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalGrid {
    min: Vec3,
    max: Vec3,
    resolution: Vec<usize>,
}

impl EvalGrid {
    pub fn new(min: Vec3, max: Vec3, resolution: Vec<usize>) -> Result<Self> {
        if resolution.is_empty() || resolution.len() > 3 {
            return Err(Error::Geometry(format!(
                "grid needs 1 to 3 resolved axes, got {}",
                resolution.len()
            )));
        }
        if !(min.is_finite() && max.is_finite()) {
            return Err(Error::Geometry("grid corners must be finite".into()));
        }
        for (i, &r) in resolution.iter().enumerate() {
            if r < 2 {
                return Err(Error::Geometry(format!(
                    "grid resolution on axis {i} must be >= 2, got {r}"
                )));
            }
            if !(min[i] < max[i]) {
                return Err(Error::Geometry(format!(
                    "grid corner_min must be below corner_max on axis {i}"
                )));
            }
        }
        Ok(EvalGrid {
            min,
            max,
            resolution,
        })
    }

    /// Square 2D grid in the z = 0 plane.
    pub fn square(lo: f64, hi: f64, cells: usize) -> Result<Self> {
        Self::new(
            Vec3::new(lo, lo, 0.0),
            Vec3::new(hi, hi, 0.0),
            vec![cells, cells],
        )
    }

    pub fn min(&self) -> Vec3 {
        self.min
    }

    pub fn max(&self) -> Vec3 {
        self.max
    }

    pub fn resolution(&self) -> &[usize] {
        &self.resolution
    }

    pub fn dims(&self) -> usize {
        self.resolution.len()
    }

    pub fn len(&self) -> usize {
        self.resolution.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_size(&self, axis: usize) -> f64 {
        (self.max[axis] - self.min[axis]) / self.resolution[axis] as f64
    }

    /// Per-axis cell indices of a flat index (x first).
    pub fn coords(&self, mut flat: usize) -> Vec<usize> {
        self.resolution
            .iter()
            .map(|&r| {
                let c = flat % r;
                flat /= r;
                c
            })
            .collect()
    }

    pub fn flat_index(&self, coords: &[usize]) -> usize {
        let mut flat = 0;
        for i in (0..self.resolution.len()).rev() {
            flat = flat * self.resolution[i] + coords[i];
        }
        flat
    }

    pub fn cell_center(&self, flat: usize) -> Vec3 {
        let coords = self.coords(flat);
        let mut c = [self.min.x, self.min.y, self.min.z];
        for (i, &n) in coords.iter().enumerate() {
            c[i] = self.min[i] + (n as f64 + 0.5) * self.cell_size(i);
        }
        Vec3::from(c)
    }

    /// Flat index of the cell whose extent contains `p` on the resolved axes.
    pub fn cell_containing(&self, p: Vec3) -> Option<usize> {
        let mut coords = Vec::with_capacity(self.resolution.len());
        for (i, &r) in self.resolution.iter().enumerate() {
            let t = ((p[i] - self.min[i]) / self.cell_size(i)).floor();
            if !(t >= 0.0 && t < r as f64) {
                return None;
            }
            coords.push(t as usize);
        }
        Some(self.flat_index(&coords))
    }

    /// Flat indices of the 4- or 6-connected neighbours plus diagonals (full
    /// 3^d − 1 neighbourhood) of a cell.
    pub fn neighbours(&self, flat: usize) -> Vec<usize> {
        let coords = self.coords(flat);
        let d = coords.len();
        let mut out = Vec::new();
        for code in 0..3usize.pow(d as u32) {
            let mut c = code;
            let mut n = coords.clone();
            let mut ok = true;
            let mut moved = false;
            for i in 0..d {
                let step = (c % 3) as isize - 1;
                c /= 3;
                if step != 0 {
                    moved = true;
                }
                let v = coords[i] as isize + step;
                if v < 0 || v >= self.resolution[i] as isize {
                    ok = false;
                    break;
                }
                n[i] = v as usize;
            }
            if ok && moved {
                out.push(self.flat_index(&n));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(n: usize, d: f64) -> ArrayGeometry {
        ArrayGeometry::uniform(Vec3::ZERO, vec![Vec3::X], vec![n], vec![d], Role::Transmit).unwrap()
    }

    #[test]
    fn wavenumber_is_derived() {
        let w = WaveParams::new(0.37).unwrap();
        assert!((w.wavenumber() * w.wavelength() - 2.0 * PI).abs() < 1e-15);
        assert!(WaveParams::new(0.0).is_err());
        assert!(WaveParams::new(-1.0).is_err());
    }

    #[test]
    fn two_element_lattice() {
        let a = lin(2, 0.5);
        assert_eq!(
            a.element_positions(),
            &[Vec3::ZERO, Vec3::new(0.5, 0.0, 0.0)]
        );
    }

    #[test]
    fn single_element_sits_at_origin() {
        let o = Vec3::new(3.0, -2.0, 1.0);
        let a = ArrayGeometry::uniform(o, vec![Vec3::Y], vec![1], vec![1.0], Role::Receive).unwrap();
        assert_eq!(a.element_positions(), &[o]);
        assert_eq!(a.sampled_axes().count(), 0);
        assert_eq!(a.center(), o);
    }

    #[test]
    fn fig1_style_linear_array() {
        let a = ArrayGeometry::linear_with_length(
            Vec3::new(500.0, 0.0, 0.0),
            Vec3::X,
            64,
            500.0,
            Role::Transmit,
        )
        .unwrap();
        assert_eq!(a.len(), 64);
        let p = a.element_positions();
        assert!((p[0].x - 250.0).abs() < 1e-12);
        assert!((p[63].x - 750.0).abs() < 1e-9);
        assert!((a.spacings()[0] - 500.0 / 63.0).abs() < 1e-15);
        assert!((a.center().x - 500.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_axes_and_spacing() {
        let tilted = Vec3::new(1.0, 1e-5, 0.0);
        assert!(matches!(
            ArrayGeometry::uniform(Vec3::ZERO, vec![tilted], vec![2], vec![1.0], Role::Transmit),
            Err(Error::Geometry(_))
        ));
        let skew = Vec3::new(0.6, 0.8, 0.0);
        assert!(ArrayGeometry::uniform(
            Vec3::ZERO,
            vec![Vec3::X, skew],
            vec![2, 2],
            vec![1.0, 1.0],
            Role::Transmit
        )
        .is_err());
        assert!(ArrayGeometry::uniform(Vec3::ZERO, vec![Vec3::X], vec![2], vec![0.0], Role::Transmit)
            .is_err());
        assert!(ArrayGeometry::uniform(Vec3::ZERO, vec![Vec3::X], vec![0], vec![1.0], Role::Transmit)
            .is_err());
    }

    #[test]
    fn planar_lattice_matches_double_loop() {
        let dx = 0.5;
        let dz = 0.75;
        let o = Vec3::new(1.0, 2.0, 3.0);
        let a = ArrayGeometry::uniform(
            o,
            vec![Vec3::X, Vec3::Z],
            vec![64, 64],
            vec![dx, dz],
            Role::Transmit,
        )
        .unwrap();
        assert_eq!(a.len(), 4096);
        let mut expected = Vec::new();
        for i in 0..64 {
            for k in 0..64 {
                expected.push(Vec3::new(1.0 + i as f64 * dx, 2.0, 3.0 + k as f64 * dz));
            }
        }
        assert_eq!(a.element_positions(), expected.as_slice());
    }

    #[test]
    fn grid_indexing_round_trips() {
        let g = EvalGrid::new(Vec3::ZERO, Vec3::new(4.0, 3.0, 0.0), vec![4, 3]).unwrap();
        assert_eq!(g.len(), 12);
        for f in 0..g.len() {
            assert_eq!(g.flat_index(&g.coords(f)), f);
            assert_eq!(g.cell_containing(g.cell_center(f)), Some(f));
        }
        assert_eq!(g.cell_center(1), Vec3::new(1.5, 0.5, 0.0));
        assert_eq!(g.cell_center(4), Vec3::new(0.5, 1.5, 0.0));
        assert_eq!(g.neighbours(0).len(), 3);
        assert_eq!(g.neighbours(5).len(), 8);
        assert!(EvalGrid::new(Vec3::ZERO, Vec3::X, vec![1]).is_err());
        assert!(EvalGrid::new(Vec3::X, Vec3::ZERO, vec![4]).is_err());
    }

    #[test]
    fn odd_grid_puts_center_on_cell_center() {
        let g = EvalGrid::square(0.0, 2000.0, 257).unwrap();
        let c = g.cell_containing(Vec3::new(1000.0, 1000.0, 0.0)).unwrap();
        let p = g.cell_center(c);
        assert!((p.x - 1000.0).abs() < 1e-9 && (p.y - 1000.0).abs() < 1e-9);
    }
}
