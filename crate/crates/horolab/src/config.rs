//! TOML run files.
//!
//! ```toml
//! d = 1
//! point = "identity"
//! piece = "square 1"
//! T_grid = [0, 1, 2, 3, 4, 5, 6, 7, 8]
//! s1 = 1.0
//!
//! [profile]
//! kind = "height_bump"
//! lo = 2.0
//! hi = 4.0
//!
//! [orders]
//! min_nodes = 64
//! resolution = 4.0
//! max_nodes = 32768
//! rel_tol = 1e-4
//! haar_nodes = 32
//! ```

use std::path::Path;

use horolab_core::experiment::{ExperimentConfig, TestFunction};
use horolab_core::{GroupElement, C64};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::grammar::{parse_piece, parse_point};
use crate::ConfigError;

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::Io(path.display().to_string(), e))?;
    toml::from_str(&text).map_err(|e| ConfigError::Parse(path.display().to_string(), e.to_string()))
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Profile {
    HeightBump { lo: f64, hi: f64 },
    HeightIndicatorSmoothed { from: f64, width: f64 },
    Constant { value: f64 },
}

impl From<&Profile> for TestFunction {
    fn from(p: &Profile) -> Self {
        match *p {
            Profile::HeightBump { lo, hi } => TestFunction::HeightBump { lo, hi },
            Profile::HeightIndicatorSmoothed { from, width } => {
                TestFunction::SmoothedIndicator { from, width }
            }
            Profile::Constant { value } => TestFunction::Constant(value),
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Orders {
    pub min_nodes: Option<usize>,
    pub resolution: Option<f64>,
    pub max_nodes: Option<usize>,
    pub rel_tol: Option<f64>,
    pub haar_nodes: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EquidistFile {
    pub d: Option<u32>,
    pub point: Option<String>,
    pub piece: Option<String>,
    #[serde(rename = "T_grid")]
    pub t_grid: Option<Vec<f64>>,
    pub s1: Option<f64>,
    pub profile: Option<Profile>,
    #[serde(default)]
    pub orders: Orders,
}

impl EquidistFile {
    /// Fills unset keys from the Picard default and scales the refinement
    /// tolerance.
    pub fn resolve(&self, tolerance_scale: f64) -> Result<ExperimentConfig, ConfigError> {
        let mut c = ExperimentConfig::picard_default();
        if let Some(d) = self.d {
            c.d = d;
        }
        if let Some(p) = &self.point {
            c.point = parse_point(p)?;
        }
        if let Some(p) = &self.piece {
            c.piece = parse_piece(p)?;
        }
        if let Some(t) = &self.t_grid {
            c.t_grid = t.clone();
        }
        if let Some(s1) = self.s1 {
            c.s1 = s1;
        }
        if let Some(p) = &self.profile {
            c.test_function = p.into();
        }
        let o = &self.orders;
        c.average.min_nodes = o.min_nodes.unwrap_or(c.average.min_nodes);
        c.average.resolution = o.resolution.unwrap_or(c.average.resolution);
        c.average.max_nodes = o.max_nodes.unwrap_or(c.average.max_nodes);
        c.average.rel_tol = o.rel_tol.unwrap_or(c.average.rel_tol) * tolerance_scale;
        c.haar_nodes = o.haar_nodes.unwrap_or(c.haar_nodes);
        c.validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(c)
    }
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct HeightFile {
    pub d: Option<u32>,
    #[serde(default)]
    pub points: Vec<String>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BoundaryFile {
    pub d: Option<u32>,
    #[serde(default)]
    pub points: Vec<String>,
    #[serde(default)]
    pub pieces: Vec<String>,
    #[serde(default)]
    pub s: Vec<f64>,
    pub alpha: Option<f64>,
    pub rel_tol: Option<f64>,
    pub max_evals: Option<usize>,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct KernelFile {
    pub n: u32,
    pub nu_re: Option<f64>,
    pub nu_im: Option<f64>,
    pub t_max: Option<f64>,
    pub t_span: Option<f64>,
    pub grid: Option<usize>,
    #[serde(rename = "T_check")]
    pub t_check: Option<Vec<f64>>,
}

impl KernelFile {
    pub fn nu(&self) -> C64 {
        C64::new(self.nu_re.unwrap_or(0.0), self.nu_im.unwrap_or(0.0))
    }
}

pub fn parse_points(texts: &[String]) -> Result<Vec<GroupElement>, ConfigError> {
    texts.iter().map(|t| parse_point(t)).collect()
}
