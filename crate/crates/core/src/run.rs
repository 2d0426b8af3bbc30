//! Executes a configuration and writes its artifacts plus a manifest.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::chirp::{aliasing_mask, max_spatial_frequency, AliasingMask};
use crate::config::{ConfigDoc, Product, RunConfig};
use crate::imaging::{bistatic_image, magnitude_db, partial_image, ComplexField};
use crate::output::{
    complex_field_csv, db_to_gray, fmt_f64, mask_boundary, mask_csv, pgm, sha256_hex, write_file,
};
use crate::spectral::{sample_chirp_along_axis, spectral_support};
use crate::sweep::sweep;
use crate::{Error, Exec, Result, Role, Vec3, VERSION};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FileEntry {
    pub product: String,
    pub file: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    /// Fully resolved configuration, every default included.
    pub config: ConfigDoc,
    pub files: Vec<FileEntry>,
}

impl Manifest {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serialises");
        s.push('\n');
        s
    }
}

struct Writer<'a> {
    dir: &'a Path,
    files: Vec<FileEntry>,
}

impl Writer<'_> {
    fn put(&mut self, product: &str, file: &str, bytes: &[u8]) -> Result<()> {
        write_file(&self.dir.join(file), bytes)?;
        self.files.push(FileEntry {
            product: product.into(),
            file: file.into(),
            bytes: bytes.len(),
            sha256: sha256_hex(bytes),
        });
        Ok(())
    }
}

fn header(config: &RunConfig) -> Vec<String> {
    vec![
        format!("nf-aliaser {VERSION}"),
        format!("lambda: {}", fmt_f64(config.wave.wavelength())),
        format!("epsilon_lambda: {}", fmt_f64(config.thresholds.epsilon_lambda)),
        format!("floor_db: {}", fmt_f64(config.thresholds.floor_db)),
    ]
}

/// Lazily computed shared intermediates.
struct Products<'a> {
    config: &'a RunConfig,
    exec: Exec,
    tx: Option<ComplexField>,
    rx: Option<ComplexField>,
    image: Option<ComplexField>,
    mask: Option<AliasingMask>,
}

impl<'a> Products<'a> {
    fn partial(&mut self, role: Role) -> Result<&ComplexField> {
        let c = self.config;
        let opts = c.eval_options(self.exec);
        let slot = match role {
            Role::Transmit => &mut self.tx,
            Role::Receive => &mut self.rx,
        };
        if slot.is_none() {
            let array = match role {
                Role::Transmit => &c.tx,
                Role::Receive => &c.rx,
            };
            *slot = Some(partial_image(array, &c.scene, &c.wave, &c.grid, &opts)?);
        }
        Ok(slot.as_ref().unwrap())
    }

    fn image(&mut self) -> Result<&ComplexField> {
        if self.image.is_none() {
            let zeta = self.config.scene.reflectivity;
            let t = self.partial(Role::Transmit)?.clone();
            let r = self.partial(Role::Receive)?;
            self.image = Some(bistatic_image(&t, r, zeta)?);
        }
        Ok(self.image.as_ref().unwrap())
    }

    fn mask(&mut self) -> Result<&AliasingMask> {
        if self.mask.is_none() {
            let c = self.config;
            self.mask = Some(aliasing_mask(
                &c.tx,
                &c.rx,
                &c.scene,
                &c.wave,
                &c.grid,
                &c.eval_options(self.exec),
            )?);
        }
        Ok(self.mask.as_ref().unwrap())
    }
}

fn field_files(w: &mut Writer, config: &RunConfig, name: &str, field: &ComplexField) -> Result<()> {
    let floor = config.thresholds.floor_db;
    let db = magnitude_db(field, floor)?;
    let csv = complex_field_csv(field, &db, &header(config), config.wave.wavelength());
    w.put(name, &format!("{name}.csv"), csv.as_bytes())?;
    if let Some(img) = pgm(&field.grid, |i| db_to_gray(db[i], floor)) {
        w.put(name, &format!("{name}.pgm"), &img)?;
    }
    Ok(())
}

fn mask_files(w: &mut Writer, config: &RunConfig, stem: &str, mask: &AliasingMask) -> Result<()> {
    let csv = mask_csv(mask, &header(config), config.wave.wavelength());
    w.put("mask", &format!("{stem}.csv"), csv.as_bytes())?;
    if let Some(img) = pgm(&mask.grid, |i| if mask.combined[i] { 255 } else { 0 }) {
        w.put("mask", &format!("{stem}.pgm"), &img)?;
    }
    Ok(())
}

fn spectrum_csv(config: &RunConfig) -> Result<String> {
    let lambda = config.wave.wavelength();
    let s = &config.spectrum;
    let array = match s.array {
        Role::Transmit => &config.tx,
        Role::Receive => &config.rx,
    };
    let tentative = match &s.tentative {
        Some(p) => Vec3::from_slice(p).expect("validated") * lambda,
        None => {
            let g = &config.grid;
            (g.min() + g.max()) * 0.5
        }
    };
    let eps = config.epsilon();
    let samples = sample_chirp_along_axis(
        array,
        tentative,
        config.scene.scatterer,
        &config.wave,
        s.axis,
        config.thresholds.oversample,
        eps,
    )?;
    let support = spectral_support(&samples, config.thresholds.support_db)?;
    let k_chirp = max_spatial_frequency(array, tentative, config.scene.scatterer, &config.wave, s.axis, eps)?;
    let db = support.magnitude_db();

    let mut out = String::new();
    for h in header(config) {
        let _ = writeln!(out, "# {h}");
    }
    let _ = writeln!(out, "# product: spectrum");
    let _ = writeln!(out, "# array: {} axis: {}", array.role().tag(), s.axis);
    let _ = writeln!(
        out,
        "# tentative_lambda: {} {} {}",
        fmt_f64(tentative.x / lambda),
        fmt_f64(tentative.y / lambda),
        fmt_f64(tentative.z / lambda)
    );
    let _ = writeln!(out, "# window: hann, oversample: {}", config.thresholds.oversample);
    let _ = writeln!(out, "# support_db: {}", fmt_f64(config.thresholds.support_db));
    let _ = writeln!(out, "# support_max_rad_per_lambda: {}", fmt_f64(support.support_max * lambda));
    let _ = writeln!(out, "# chirp_max_frequency_rad_per_lambda: {}", fmt_f64(k_chirp * lambda));
    let _ = writeln!(
        out,
        "# replica_period_rad_per_lambda: {}",
        fmt_f64(2.0 * std::f64::consts::PI / array.spacings()[s.axis] * lambda)
    );
    out.push_str("wavenumber_rad_per_lambda,magnitude_db\n");
    for (k, m) in support.frequencies.iter().zip(&db) {
        let _ = writeln!(out, "{},{}", fmt_f64(k * lambda), fmt_f64(*m));
    }
    Ok(out)
}

fn sweep_files(w: &mut Writer, config: &RunConfig, exec: Exec) -> Result<()> {
    let doc = config
        .sweep
        .as_ref()
        .ok_or_else(|| Error::config("sweep", "missing sweep section"))?;
    let lambda = config.wave.wavelength();
    let points = sweep(config, doc.param, &doc.values, exec)?;
    let mut csv = String::new();
    for h in header(config) {
        let _ = writeln!(csv, "# {h}");
    }
    let _ = writeln!(csv, "# product: sweep");
    let _ = writeln!(csv, "# param: {}", doc.param.name());
    csv.push_str("param,value,tx_elements,rx_elements,mask_area,tx_area,rx_area,peak_x_lambda,peak_y_lambda,peak_z_lambda,peak_in_mask,artifact_db\n");
    for (i, p) in points.iter().enumerate() {
        let r = &p.row;
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.param.name(),
            fmt_f64(r.value),
            r.tx_elements,
            r.rx_elements,
            r.mask_area,
            r.tx_area,
            r.rx_area,
            fmt_f64(r.peak.x / lambda),
            fmt_f64(r.peak.y / lambda),
            fmt_f64(r.peak.z / lambda),
            u8::from(r.peak_in_mask),
            fmt_f64(r.artifact_db)
        );
        mask_files(w, config, &format!("mask_{}_{i}", doc.param.name()), &p.mask)?;
    }
    w.put("sweep", "sweep.csv", csv.as_bytes())
}

/// Computes every requested product, writes it under `out_dir` and returns
/// the manifest (also written as `manifest.json`). Output bytes do not depend
/// on `exec`.
pub fn run(config: &RunConfig, out_dir: &Path, exec: Exec) -> Result<Manifest> {
    std::fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.display().to_string(),
        source,
    })?;
    let mut w = Writer {
        dir: out_dir,
        files: Vec::new(),
    };
    let mut p = Products {
        config,
        exec,
        tx: None,
        rx: None,
        image: None,
        mask: None,
    };
    for &product in &config.outputs {
        match product {
            Product::PartialTx => {
                let f = p.partial(Role::Transmit)?.clone();
                field_files(&mut w, config, "partial_tx", &f)?;
            }
            Product::PartialRx => {
                let f = p.partial(Role::Receive)?.clone();
                field_files(&mut w, config, "partial_rx", &f)?;
            }
            Product::Image => {
                let f = p.image()?.clone();
                field_files(&mut w, config, "image", &f)?;
            }
            Product::Mask => {
                let mask = p.mask()?.clone();
                mask_files(&mut w, config, "mask", &mask)?;
                // image with the aliasing-free outline drawn in white
                let image = p.image()?;
                let floor = config.thresholds.floor_db;
                let db = magnitude_db(image, floor)?;
                let edge = mask_boundary(&mask);
                if let Some(img) = pgm(&mask.grid, |i| if edge[i] { 255 } else { db_to_gray(db[i], floor) / 2 }) {
                    w.put("mask", "mask_overlay.pgm", &img)?;
                }
            }
            Product::Spectrum => {
                let csv = spectrum_csv(config)?;
                w.put("spectrum", "spectrum.csv", csv.as_bytes())?;
            }
            Product::Sweep => sweep_files(&mut w, config, exec)?,
        }
    }
    let manifest = Manifest {
        tool: "nf-aliaser".into(),
        version: VERSION.into(),
        config: config.doc.clone(),
        files: w.files,
    };
    write_file(&out_dir.join("manifest.json"), manifest.to_json().as_bytes())?;
    Ok(manifest)
}
