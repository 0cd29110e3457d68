//! Experiment configuration, read from TOML.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ambient::{AmbientSpace, BundleSystem, Powers};
use crate::error::{Error, Result};
use crate::kostlan::{SearchParams, MIN_RESOLUTION};
use crate::lowdeg::EllMode;
use crate::topology::DEFAULT_BUDGET;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Invariants,
    Rarefaction,
    LowdegMatch,
    Tube,
    Residual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

fn default_factors() -> Vec<usize> {
    vec![1]
}
fn default_trials() -> u64 {
    1000
}
fn default_k() -> usize {
    2
}
fn default_resolution() -> usize {
    SearchParams::default().resolution
}
fn default_polish() -> usize {
    SearchParams::default().polish_steps
}
fn default_starts() -> usize {
    SearchParams::default().polish_starts
}
fn default_budget() -> usize {
    DEFAULT_BUDGET
}
fn default_jobs() -> usize {
    1
}

/// Everything needed to reproduce a run. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    /// Dimensions of the projective factors.
    #[serde(default = "default_factors")]
    pub factors: Vec<usize>,
    /// One row per bundle; defaults to one bundle of degree 1 on every factor.
    #[serde(default)]
    pub multidegrees: Vec<Vec<usize>>,
    /// Powers to run; every bundle gets the same power. Empty means symbolic (invariants only).
    #[serde(default)]
    pub degrees: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    /// Fixed subspace index for low-degree runs.
    #[serde(default)]
    pub ell: Option<usize>,
    /// Proportional subspace index `floor(t d)`; exclusive with `ell`.
    #[serde(default)]
    pub t: Option<f64>,
    /// Rarefaction threshold parameter in `[0, 1]`.
    #[serde(default)]
    pub epsilon: Option<f64>,
    /// Tube radius fractions.
    #[serde(default)]
    pub radii: Vec<f64>,
    #[serde(default = "default_k")]
    pub sigma_power: usize,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    #[serde(default = "default_polish")]
    pub polish_steps: usize,
    #[serde(default = "default_starts")]
    pub polish_starts: usize,
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[serde(default = "default_jobs")]
    pub jobs: usize,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default)]
    pub out: Option<String>,
}

impl ExperimentSpec {
    pub fn new(kind: ExperimentKind) -> Self {
        toml::from_str(&format!("kind = \"{}\"", kind.name())).expect("defaults parse")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("spec serializes")
    }

    pub fn ambient(&self) -> Result<AmbientSpace> {
        AmbientSpace::new(self.factors.clone()).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    fn rows(&self) -> Vec<Vec<usize>> {
        if self.multidegrees.is_empty() {
            vec![vec![1; self.factors.len()]]
        } else {
            self.multidegrees.clone()
        }
    }

    /// Bundles at power `d`.
    pub fn bundles(&self, d: usize) -> Result<BundleSystem> {
        let rows = self.rows();
        let m = rows.len();
        BundleSystem::new(&self.ambient()?, rows, Powers::Numeric(vec![d; m]))
            .map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn symbolic_bundles(&self) -> Result<BundleSystem> {
        BundleSystem::new(&self.ambient()?, self.rows(), Powers::Symbolic)
            .map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn search(&self) -> Result<SearchParams> {
        let mut p =
            SearchParams::new(self.resolution, self.polish_steps).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        p.polish_starts = self.polish_starts;
        Ok(p)
    }

    pub fn ell_mode(&self) -> Result<EllMode> {
        match (self.ell, self.t) {
            (Some(l), None) => Ok(EllMode::Fixed(l)),
            (None, Some(t)) if t > 0.0 && t.is_finite() => Ok(EllMode::Proportional(t)),
            (None, Some(t)) => Err(Error::InvalidConfig(format!("t must be positive, got {t}"))),
            (None, None) => Ok(EllMode::Fixed(1)),
            (Some(_), Some(_)) => Err(Error::InvalidConfig("set either ell or t, not both".into())),
        }
    }

    /// Checks everything the chosen experiment needs before any work starts.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        let x = self.ambient()?;
        self.symbolic_bundles()?;
        if self.jobs == 0 {
            return bad("jobs must be at least 1".into());
        }
        if self.resolution < MIN_RESOLUTION {
            return bad(format!("resolution must be at least {MIN_RESOLUTION}"));
        }
        if self.polish_starts == 0 {
            return bad("polish_starts must be at least 1".into());
        }
        let m = self.rows().len();
        let needs_degrees = self.kind != ExperimentKind::Invariants;
        if needs_degrees && self.degrees.is_empty() {
            return bad("degrees must be non-empty".into());
        }
        if needs_degrees && self.trials == 0 {
            return bad("trials must be positive".into());
        }
        if self.degrees.contains(&0) && needs_degrees {
            return bad("degrees must be positive".into());
        }
        match self.kind {
            ExperimentKind::Invariants => {}
            ExperimentKind::Rarefaction | ExperimentKind::LowdegMatch => {
                let ok = x.num_factors() == 1 && matches!((x.dim(), m), (1, 1) | (2, 1) | (2, 2));
                if !ok {
                    return bad("topology is measured only on P^1 (m = 1) and P^2 (m = 1 or 2)".into());
                }
                if self.kind == ExperimentKind::Rarefaction {
                    match self.epsilon {
                        Some(e) if (0.0..=1.0).contains(&e) => {}
                        Some(e) => return bad(format!("epsilon must lie in [0, 1], got {e}")),
                        None => return bad("rarefaction needs epsilon".into()),
                    }
                } else {
                    self.check_ell()?;
                }
            }
            ExperimentKind::Tube => {
                if m > x.dim() {
                    return bad(format!("{m} bundles on a {}-dimensional space", x.dim()));
                }
                if self.trials < 100 {
                    return bad("tube estimates need at least 100 trials".into());
                }
                if self.radii.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
                    return bad("radii must be finite and non-negative".into());
                }
            }
            ExperimentKind::Residual => self.check_ell()?,
        }
        if self.sigma_power == 0 || self.sigma_power % 2 == 1 {
            return bad("sigma_power must be even and positive".into());
        }
        Ok(())
    }

    /// Checks for commands that only sample or read sections, whatever the experiment kind.
    pub fn validate_sections(&self) -> Result<()> {
        self.ambient()?;
        self.symbolic_bundles()?;
        if self.degrees.is_empty() || self.degrees.contains(&0) {
            return Err(Error::InvalidConfig("degrees must be non-empty and positive".into()));
        }
        if self.jobs == 0 || self.resolution < MIN_RESOLUTION || self.polish_starts == 0 {
            return Err(Error::InvalidConfig("jobs, resolution or polish_starts out of range".into()));
        }
        Ok(())
    }

    fn check_ell(&self) -> Result<()> {
        let mode = self.ell_mode()?;
        for &d in &self.degrees {
            let need = self.sigma_power * mode.ell(d);
            if need > d {
                return Err(Error::InvalidConfig(format!("degree {d} is below sigma_power * ell = {need}")));
            }
        }
        Ok(())
    }
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Invariants => "invariants",
            ExperimentKind::Rarefaction => "rarefaction",
            ExperimentKind::LowdegMatch => "lowdeg-match",
            ExperimentKind::Tube => "tube",
            ExperimentKind::Residual => "residual",
        }
    }
}
