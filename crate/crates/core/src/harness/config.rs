use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::correlator::{check_causality, equilateral, DetectorSpec, FieldSpec, DEFAULT_LADDER_FRACTIONS};
use crate::error::{Error, Result};
use crate::labels::DetectorId;
use crate::windows::{superosc_window, WindowSpec, DEFAULT_SIGMA_FRACTION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum WindowKind {
    #[default]
    Gaussian,
    RaisedCosine,
    Superoscillatory,
    Tabulated,
}

/// Window description with optional family parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    #[serde(default)]
    pub family: WindowKind,
    #[serde(default = "one")]
    pub amplitude: f64,
    #[serde(default = "one")]
    pub duration: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boost: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<Vec<f64>>,
}

fn one() -> f64 {
    1.0
}

impl Default for WindowConfig {
    fn default() -> Self {
        WindowConfig {
            family: WindowKind::Gaussian,
            amplitude: 1.0,
            duration: 1.0,
            sigma: None,
            band: None,
            boost: None,
            values: None,
            quadrature: None,
        }
    }
}

impl WindowConfig {
    pub fn build(&self) -> Result<WindowSpec> {
        let (a, t) = (self.amplitude, self.duration);
        match self.family {
            WindowKind::Gaussian => WindowSpec::gaussian(a, t, self.sigma.unwrap_or(t * DEFAULT_SIGMA_FRACTION)),
            WindowKind::RaisedCosine => WindowSpec::raised_cosine(a, t),
            WindowKind::Superoscillatory => {
                let band = self.band.ok_or_else(|| Error::config("superoscillatory window needs `band`"))?;
                let boost = self.boost.ok_or_else(|| Error::config("superoscillatory window needs `boost`"))?;
                superosc_window(band, boost, a, t)
            }
            WindowKind::Tabulated => {
                let values = self.values.clone().ok_or_else(|| Error::config("tabulated window needs `values`"))?;
                WindowSpec::tabulated(a, t, values, self.quadrature.clone())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    #[serde(default)]
    pub mass: f64,
    /// Regulator ladder in units of the window duration.
    #[serde(default = "default_ladder")]
    pub ladder: Vec<f64>,
    #[serde(default = "default_quadrature_tol")]
    pub quadrature_tol: f64,
}

fn default_ladder() -> Vec<f64> {
    DEFAULT_LADDER_FRACTIONS.to_vec()
}

fn default_quadrature_tol() -> f64 {
    1e-10
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig {
            mass: 0.0,
            ladder: default_ladder(),
            quadrature_tol: default_quadrature_tol(),
        }
    }
}

/// Settings shared by all three detectors unless overridden.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorsConfig {
    #[serde(default = "default_gap")]
    pub gap: f64,
    #[serde(default)]
    pub window: WindowConfig,
}

fn default_gap() -> f64 {
    4.0
}

impl Default for DetectorsConfig {
    fn default() -> Self {
        DetectorsConfig {
            gap: default_gap(),
            window: WindowConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct DetectorOverride {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct FilterConfig {
    /// Fixed attenuation; when absent η² = √(d_BC^{++} d_CA^{++}).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    /// Replace the computed amplitudes by the exchange-dominated limit with
    /// this scale.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dominance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    #[serde(default = "yes")]
    pub negativity: bool,
    #[serde(default = "yes")]
    pub svetlichny: bool,
    #[serde(default = "default_starts")]
    pub starts: usize,
    #[serde(default = "yes")]
    pub lp_test: bool,
    /// Clip negative eigenvalues before measuring correlations.
    #[serde(default)]
    pub project_psd: bool,
}

fn yes() -> bool {
    true
}

fn default_starts() -> usize {
    64
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            negativity: true,
            svetlichny: true,
            starts: default_starts(),
            lp_test: true,
            project_psd: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Separation grid in units of the window duration.
    #[serde(default = "default_separations")]
    pub separations: Vec<f64>,
    /// Coupling factors multiplying every window amplitude.
    #[serde(default = "default_couplings")]
    pub couplings: Vec<f64>,
    /// Filter grid; when absent the filter section decides.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub etas: Option<Vec<f64>>,
}

fn default_separations() -> Vec<f64> {
    vec![2.0, 3.0, 4.0]
}

fn default_couplings() -> Vec<f64> {
    vec![1.0]
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            separations: default_separations(),
            couplings: default_couplings(),
            etas: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub field: FieldConfig,
    #[serde(default)]
    pub detectors: DetectorsConfig,
    /// Per-detector overrides, e.g. `detector.C.gap = 5.0`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub detector: BTreeMap<DetectorId, DetectorOverride>,
    #[serde(default)]
    pub filter: FilterConfig,
    #[serde(default)]
    pub analysis: AnalysisConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn finite_grid(name: &str, grid: &[f64], positive: bool) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::config(format!("sweep grid `{name}` is empty")));
    }
    if grid.iter().any(|v| !v.is_finite() || (positive && *v <= 0.0)) {
        return Err(Error::config(format!("sweep grid `{name}` has invalid values")));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            context: format!("reading {}", path.display()),
            source,
        })?;
        Self::from_toml(&text)
    }

    /// Longest window duration; the unit of separations and regulators.
    pub fn duration(&self) -> f64 {
        let mut t = self.detectors.window.duration;
        for o in self.detector.values() {
            if let Some(w) = &o.window {
                t = t.max(w.duration);
            }
        }
        t
    }

    pub fn field_spec(&self) -> FieldSpec {
        let t = self.duration();
        let ladder: Vec<f64> = self.field.ladder.iter().map(|f| f * t).collect();
        FieldSpec {
            mass: self.field.mass,
            regulator: ladder.last().copied().unwrap_or(0.0),
            ladder,
            quadrature_tol: self.field.quadrature_tol,
        }
    }

    /// Detectors on an equilateral triangle with side `l_over_t`·T.
    pub fn detector_specs(&self, l_over_t: f64) -> Result<[DetectorSpec; 3]> {
        let base = self.detectors.window.build()?;
        let mut dets = equilateral(l_over_t * self.duration(), self.detectors.gap, &base);
        for d in &mut dets {
            if let Some(o) = self.detector.get(&d.id) {
                if let Some(g) = o.gap {
                    d.gap = g;
                }
                if let Some(w) = &o.window {
                    d.window = w.build()?;
                }
            }
        }
        Ok(dets)
    }

    pub fn validate(&self) -> Result<()> {
        finite_grid("separations", &self.sweep.separations, true)?;
        finite_grid("couplings", &self.sweep.couplings, false)?;
        if let Some(etas) = &self.sweep.etas {
            finite_grid("etas", etas, true)?;
            if etas.iter().any(|e| *e > 1.0) {
                return Err(Error::config("filter values must lie in (0, 1]"));
            }
        }
        if let Some(e) = self.filter.eta {
            if !(e > 0.0 && e <= 1.0) {
                return Err(Error::config("filter.eta must lie in (0, 1]"));
            }
        }
        if let Some(s) = self.filter.dominance {
            if !(s > 0.0 && s <= 1.0) {
                return Err(Error::config("filter.dominance must lie in (0, 1]"));
            }
        }
        if self.analysis.starts == 0 {
            return Err(Error::config("analysis.starts must be positive"));
        }
        self.field_spec().validate()?;
        for &l in &self.sweep.separations {
            let dets = self.detector_specs(l)?;
            for d in &dets {
                d.validate()?;
            }
            check_causality(&dets)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dotted_keys() {
        let cfg = ExperimentConfig::from_toml(
            r#"
seed = 3
detectors.gap = 4.0
detectors.window.family = "gaussian"
detectors.window.duration = 2.0
detector.C.gap = 5.0
sweep.separations = [2.5]
filter.eta = 0.5
"#,
        )
        .unwrap();
        assert_eq!(cfg.seed, 3);
        assert_eq!(cfg.detector[&DetectorId::C].gap, Some(5.0));
        let dets = cfg.detector_specs(2.5).unwrap();
        assert_eq!(dets[2].gap, 5.0);
        assert_eq!(dets[0].gap, 4.0);
        assert!((dets[0].distance(&dets[1]) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn round_trip() {
        let mut cfg = ExperimentConfig::default();
        cfg.filter.dominance = Some(0.1);
        cfg.detector.insert(
            DetectorId::C,
            DetectorOverride {
                gap: Some(3.0),
                window: Some(WindowConfig {
                    family: WindowKind::Superoscillatory,
                    band: Some(3),
                    boost: Some(2.0),
                    ..Default::default()
                }),
            },
        );
        let text = cfg.to_toml().unwrap();
        assert_eq!(ExperimentConfig::from_toml(&text).unwrap(), cfg);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(ExperimentConfig::from_toml("sweep.separations = []").is_err());
        assert!(ExperimentConfig::from_toml("filter.eta = 1.5").is_err());
        assert!(ExperimentConfig::from_toml("bogus = 1").is_err());
        assert!(ExperimentConfig::from_toml("sweep.separations = [0.5]").is_err());
    }
}
