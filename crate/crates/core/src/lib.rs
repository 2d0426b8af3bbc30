//! Near-field bistatic imaging of a point scatterer with regular antenna
//! arrays, and prediction of the aliasing-free part of the reconstructed
//! image from the maximum local wavenumber of the spatial chirp.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: wave parameters, regular array lattices, evaluation grids.
//! * [`wavefield`]: spherical-wave Green's factor, received signal, chirp `g`.
//! * [`imaging`]: monostatic partial images, bistatic image, direct oracle.
//! * [`chirp`]: local wavenumbers, maximum spatial frequency, aliasing masks.
//! * [`spectral`]: DFT-based spectral support and an independent aliasing check.
//! * [`config`], [`run`], [`sweep`], [`output`]: scenario files, presets and
//!   deterministic artifact writing used by the `nf-aliaser` binary.
//!
//! Grid evaluation is data-parallel over cells through [`exec::Exec`]. With the
//! `parallel` feature (on by default) cells are distributed with rayon;
//! without it every evaluation runs sequentially. Both paths give
//! bit-identical results because each cell is summed in a fixed order.

pub mod chirp;
pub mod config;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod imaging;
pub mod output;
pub mod presets;
pub mod run;
pub mod spectral;
pub mod sweep;
pub mod vec3;
pub mod wavefield;

pub use error::{Error, Result};
pub use exec::{EvalOptions, Exec};
pub use geometry::{ArrayGeometry, EvalGrid, Role, Scene, WaveParams};
pub use vec3::Vec3;

pub use num_complex::Complex64;

/// Crate version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
