//! JSON run configuration. All lengths are expressed in wavelengths.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geometry::DEFAULT_EPSILON_LAMBDA;
use crate::spectral::{DEFAULT_ORACLE_RATIO, DEFAULT_SUPPORT_DB};
use crate::sweep::SweepParam;
use crate::{ArrayGeometry, Error, EvalGrid, Result, Role, Scene, Vec3, WaveParams};

pub const DEFAULT_FLOOR_DB: f64 = -40.0;
pub const DEFAULT_OVERSAMPLE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Product {
    Image,
    PartialTx,
    PartialRx,
    Mask,
    Spectrum,
    Sweep,
}

impl Product {
    pub fn name(self) -> &'static str {
        match self {
            Product::Image => "image",
            Product::PartialTx => "partial_tx",
            Product::PartialRx => "partial_rx",
            Product::Mask => "mask",
            Product::Spectrum => "spectrum",
            Product::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveDoc {
    pub lambda: f64,
}

/// Array lattice; exactly one of `origin` (first element) or `center` is given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
    pub axes: Vec<Vec<f64>>,
    pub counts: Vec<usize>,
    pub spacings_lambda: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneDoc {
    pub scatterer: Vec<f64>,
    #[serde(default = "one")]
    pub reflectivity_re: f64,
    #[serde(default)]
    pub reflectivity_im: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDoc {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
    pub resolution: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdsDoc {
    #[serde(default = "default_epsilon")]
    pub epsilon_lambda: f64,
    #[serde(default = "default_floor")]
    pub floor_db: f64,
    #[serde(default = "default_support")]
    pub support_db: f64,
    #[serde(default = "default_ratio")]
    pub oracle_ratio: f64,
    #[serde(default = "default_oversample")]
    pub oversample: usize,
}

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON_LAMBDA
}
fn default_floor() -> f64 {
    DEFAULT_FLOOR_DB
}
fn default_support() -> f64 {
    DEFAULT_SUPPORT_DB
}
fn default_ratio() -> f64 {
    DEFAULT_ORACLE_RATIO
}
fn default_oversample() -> usize {
    DEFAULT_OVERSAMPLE
}

impl Default for ThresholdsDoc {
    fn default() -> Self {
        ThresholdsDoc {
            epsilon_lambda: default_epsilon(),
            floor_db: default_floor(),
            support_db: default_support(),
            oracle_ratio: default_ratio(),
            oversample: default_oversample(),
        }
    }
}

/// Which chirp spectrum the `spectrum` product analyses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumDoc {
    #[serde(default = "default_spectrum_array")]
    pub array: Role,
    #[serde(default)]
    pub axis: usize,
    /// Tentative point in wavelengths; defaults to the grid center.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tentative: Option<Vec<f64>>,
}

fn default_spectrum_array() -> Role {
    Role::Transmit
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepDoc {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

/// Configuration document as written on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    pub wave: WaveDoc,
    pub tx: ArrayDoc,
    pub rx: ArrayDoc,
    pub scene: SceneDoc,
    pub grid: GridDoc,
    pub outputs: Vec<Product>,
    #[serde(default)]
    pub thresholds: ThresholdsDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepDoc>,
}

/// Validated configuration with geometry built in physical units.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Normalised document: defaults filled in, arrays given by `origin`.
    pub doc: ConfigDoc,
    pub wave: WaveParams,
    pub tx: ArrayGeometry,
    pub rx: ArrayGeometry,
    pub scene: Scene,
    pub grid: EvalGrid,
    pub outputs: Vec<Product>,
    pub thresholds: ThresholdsDoc,
    pub spectrum: SpectrumDoc,
    pub sweep: Option<SweepDoc>,
}

impl RunConfig {
    /// Exclusion radius in length units.
    pub fn epsilon(&self) -> f64 {
        self.thresholds.epsilon_lambda * self.wave.wavelength()
    }

    pub fn eval_options(&self, exec: crate::Exec) -> crate::EvalOptions {
        crate::EvalOptions {
            epsilon: self.epsilon(),
            exec,
        }
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let doc: ConfigDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    resolve(doc)
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text)
}

fn vec3(field: &str, v: &[f64], scale: f64) -> Result<Vec3> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::config(field, "components must be finite"));
    }
    Vec3::from_slice(v)
        .map(|p| p * scale)
        .ok_or_else(|| Error::config(field, format!("expected 1 to 3 components, got {}", v.len())))
}

fn build_array(field: &str, doc: &ArrayDoc, lambda: f64, role: Role) -> Result<ArrayGeometry> {
    let axes = doc
        .axes
        .iter()
        .enumerate()
        .map(|(j, a)| vec3(&format!("{field}.axes[{j}]"), a, 1.0))
        .collect::<Result<Vec<_>>>()?;
    let spacings: Vec<f64> = doc.spacings_lambda.iter().map(|s| s * lambda).collect();
    let built = match (&doc.origin, &doc.center) {
        (Some(o), None) => ArrayGeometry::uniform(
            vec3(&format!("{field}.origin"), o, lambda)?,
            axes,
            doc.counts.clone(),
            spacings,
            role,
        ),
        (None, Some(c)) => ArrayGeometry::centered(
            vec3(&format!("{field}.center"), c, lambda)?,
            axes,
            doc.counts.clone(),
            spacings,
            role,
        ),
        _ => {
            return Err(Error::config(
                field,
                "exactly one of `origin` or `center` is required",
            ))
        }
    };
    built.map_err(|e| Error::config(field, e.to_string()))
}

/// Normalised array description (origin form) in wavelengths.
pub fn array_doc(a: &ArrayGeometry, lambda: f64) -> ArrayDoc {
    ArrayDoc {
        origin: Some((a.origin() * (1.0 / lambda)).to_array().to_vec()),
        center: None,
        axes: a.axes().iter().map(|v| v.to_array().to_vec()).collect(),
        counts: a.counts().to_vec(),
        spacings_lambda: a.spacings().iter().map(|s| s / lambda).collect(),
    }
}

/// Validates a document and builds geometry.
pub fn resolve(mut doc: ConfigDoc) -> Result<RunConfig> {
    let wave = WaveParams::new(doc.wave.lambda).map_err(|e| Error::config("wave.lambda", e.to_string()))?;
    let lambda = wave.wavelength();
    let t = &doc.thresholds;
    if !(t.epsilon_lambda.is_finite() && t.epsilon_lambda > 0.0) {
        return Err(Error::config("thresholds.epsilon_lambda", "must be positive"));
    }
    if !(t.floor_db.is_finite() && t.floor_db < 0.0) {
        return Err(Error::config("thresholds.floor_db", "must be negative"));
    }
    if !(t.support_db.is_finite() && t.support_db < 0.0) {
        return Err(Error::config("thresholds.support_db", "must be negative"));
    }
    if !(t.oracle_ratio > 0.0 && t.oracle_ratio < 1.0) {
        return Err(Error::config("thresholds.oracle_ratio", "must lie in (0, 1)"));
    }
    if t.oversample < 1 {
        return Err(Error::config("thresholds.oversample", "must be >= 1"));
    }
    if doc.outputs.is_empty() {
        return Err(Error::config("outputs", "at least one product is required"));
    }

    let tx = build_array("tx", &doc.tx, lambda, Role::Transmit)?;
    let rx = build_array("rx", &doc.rx, lambda, Role::Receive)?;
    let scene = Scene::new(vec3("scene.scatterer", &doc.scene.scatterer, lambda)?).with_reflectivity(
        Complex64::new(doc.scene.reflectivity_re, doc.scene.reflectivity_im),
    );
    if !(scene.reflectivity.re.is_finite() && scene.reflectivity.im.is_finite()) {
        return Err(Error::config("scene.reflectivity", "must be finite"));
    }
    let eps = t.epsilon_lambda * lambda;
    for (field, a) in [("tx", &tx), ("rx", &rx)] {
        scene
            .check_clearance(a, eps)
            .map_err(|e| Error::config(format!("scene.scatterer/{field}"), e.to_string()))?;
    }

    let g = &doc.grid;
    if g.min.len() != g.resolution.len() || g.max.len() != g.resolution.len() {
        return Err(Error::config(
            "grid",
            "min, max and resolution must have the same number of components",
        ));
    }
    let grid = EvalGrid::new(
        vec3("grid.min", &g.min, lambda)?,
        vec3("grid.max", &g.max, lambda)?,
        g.resolution.clone(),
    )
    .map_err(|e| Error::config("grid", e.to_string()))?;

    let spectrum = doc.spectrum.clone().unwrap_or(SpectrumDoc {
        array: Role::Transmit,
        axis: 0,
        tentative: None,
    });
    if let Some(p) = &spectrum.tentative {
        vec3("spectrum.tentative", p, lambda)?;
    }
    let dims = match spectrum.array {
        Role::Transmit => tx.dimensions(),
        Role::Receive => rx.dimensions(),
    };
    if spectrum.axis >= dims {
        return Err(Error::config("spectrum.axis", "no such lattice axis"));
    }

    if doc.outputs.contains(&Product::Sweep) {
        match &doc.sweep {
            None => return Err(Error::config("sweep", "the sweep product needs a `sweep` section")),
            Some(s) if s.values.is_empty() => {
                return Err(Error::config("sweep.values", "at least one value is required"))
            }
            Some(_) => {}
        }
    }

    doc.tx = array_doc(&tx, lambda);
    doc.rx = array_doc(&rx, lambda);
    Ok(RunConfig {
        outputs: doc.outputs.clone(),
        thresholds: doc.thresholds.clone(),
        sweep: doc.sweep.clone(),
        doc,
        wave,
        tx,
        rx,
        scene,
        grid,
        spectrum,
    })
}
