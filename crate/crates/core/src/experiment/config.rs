use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ProbabilityVector;
use crate::phase::{AlphaSchedule, ExponentVector, DEFAULT_BOUNDARY_TOLERANCE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    MeasureOracle,
    FaceNumbers,
    BettiDomination,
    Degrees,
    Garland,
    Connectivity,
    CycleHunt,
    PhaseDiagram,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::MeasureOracle => "measure-oracle",
            ExperimentKind::FaceNumbers => "face-numbers",
            ExperimentKind::BettiDomination => "betti-domination",
            ExperimentKind::Degrees => "degrees",
            ExperimentKind::Garland => "garland",
            ExperimentKind::Connectivity => "connectivity",
            ExperimentKind::CycleHunt => "cycle-hunt",
            ExperimentKind::PhaseDiagram => "phase-diagram",
        }
    }

    /// One-line statement of what the experiment checks.
    pub fn header(self) -> &'static str {
        match self {
            ExperimentKind::MeasureOracle => {
                "P(Y) = prod p_i^{f_i} q_i^{e_i} sums to 1 over all complexes and matches sampler frequencies"
            }
            ExperimentKind::FaceNumbers => {
                "f_d vanishes when tau_d < 0 and lies within (1 +- t) n^{tau_d}/(d+1)! when tau_d > 0"
            }
            ExperimentKind::BettiDomination => {
                "b_k ~ n^{tau_k}/(k+1)! at the critical dimension k and dominates every other Betti number"
            }
            ExperimentKind::Degrees => {
                "degrees of d-faces below the critical dimension concentrate at n^{1-psi_{d+1}}; above it most faces are isolated and Y^(k) is pure"
            }
            ExperimentKind::Garland => {
                "spectral gaps of all l-links above 1 - 1/(l+2) force the vanishing of H_{l+1}(Y; Q)"
            }
            ExperimentKind::Connectivity => {
                "emptiness in D_-1, forests with many components in D_0, connectivity in D_k for k >= 1"
            }
            ExperimentKind::CycleHunt => {
                "minimal k-cycles above the critical dimension have at most (k+1)[1 + (1-phi_k)/(psi_k-1)] vertices"
            }
            ExperimentKind::PhaseDiagram => "critical-dimension domains on a planar slice of exponent space",
        }
    }

    pub fn samples(self) -> bool {
        self != ExperimentKind::PhaseDiagram
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub kind: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default = "one")]
    pub trials: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_high: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    /// Half-width of the `OnBoundary` band in classification.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    /// Required success fraction, overriding the per-kind default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free: Option<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fixed: Vec<(usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleRow {
    pub n: u64,
    pub alpha: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_grid: Option<Vec<u32>>,
    pub r: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<ProbabilityVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_schedule: Option<Vec<ScheduleRow>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prefix: Option<String>,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: default_dir(),
            prefix: None,
        }
    }
}

fn default_dir() -> PathBuf {
    PathBuf::from(".")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentSection,
    pub model: ModelSection,
    #[serde(default)]
    pub output: OutputSection,
}

/// How the model parameters were given.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelParams {
    Exponents(AlphaSchedule),
    Probabilities(ProbabilityVector),
    /// Only `r` is known; valid for the phase diagram.
    Unspecified,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Canonical TOML rendering; the input hash is taken over this text.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn tolerance(&self) -> f64 {
        self.experiment.tolerance.unwrap_or(DEFAULT_BOUNDARY_TOLERANCE)
    }

    pub fn prefix(&self) -> String {
        self.output
            .prefix
            .clone()
            .unwrap_or_else(|| self.experiment.kind.name().to_string())
    }

    /// `[n]` or the grid.
    pub fn grid(&self) -> Vec<u32> {
        match (&self.model.n, &self.model.n_grid) {
            (Some(n), _) => vec![*n],
            (None, Some(g)) => g.clone(),
            (None, None) => Vec::new(),
        }
    }

    pub fn params(&self) -> Result<ModelParams> {
        let m = &self.model;
        let given = [m.alpha.is_some(), m.p.is_some(), m.alpha_schedule.is_some()]
            .iter()
            .filter(|&&b| b)
            .count();
        if given > 1 {
            return Err(Error::Config("give only one of alpha, p and alpha_schedule".into()));
        }
        let params = if let Some(a) = &m.alpha {
            ModelParams::Exponents(AlphaSchedule::Constant(config_alpha(a)?))
        } else if let Some(rows) = &m.alpha_schedule {
            let rows = rows
                .iter()
                .map(|row| Ok((row.n, config_alpha(&row.alpha)?)))
                .collect::<Result<Vec<_>>>()?;
            let s = AlphaSchedule::Tabulated(rows);
            s.validate().map_err(|e| Error::Config(e.to_string()))?;
            ModelParams::Exponents(s)
        } else if let Some(p) = &m.p {
            ModelParams::Probabilities(p.clone())
        } else {
            ModelParams::Unspecified
        };
        let r = match &params {
            ModelParams::Exponents(s) => Some(s.r()),
            ModelParams::Probabilities(p) => Some(p.r()),
            ModelParams::Unspecified => None,
        };
        if let Some(r) = r.filter(|&r| r != m.r) {
            return Err(Error::Config(format!(
                "model parameters have length {} but r = {}",
                r + 1,
                m.r
            )));
        }
        Ok(params)
    }

    /// Checks everything that does not need a sample.
    pub fn validate(&self) -> Result<()> {
        let e = &self.experiment;
        let kind = e.kind;
        if e.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if e.threads == Some(0) {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        if self.model.n.is_some() && self.model.n_grid.is_some() {
            return Err(Error::Config("give n or n_grid, not both".into()));
        }
        if let Some(g) = &self.model.n_grid {
            if g.is_empty() {
                return Err(Error::Config("n_grid is empty".into()));
            }
            if g.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Config("n_grid must be strictly increasing".into()));
            }
        }
        if kind.samples() {
            let grid = self.grid();
            if grid.is_empty() {
                return Err(Error::Config("model needs n or n_grid".into()));
            }
            if grid.contains(&0) {
                return Err(Error::Config("n must be positive".into()));
            }
            if e.seed.is_none() {
                return Err(Error::Config("no seed given".into()));
            }
        }
        if let Some(t) = e.tolerance {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::Config(format!("tolerance = {t} must be finite and >= 0")));
            }
        }
        if let Some(x) = e.threshold {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::Config(format!("threshold = {x} must lie in [0, 1]")));
            }
        }
        let params = self.params()?;
        let r = self.model.r;
        match kind {
            ExperimentKind::MeasureOracle => {
                if !matches!(params, ModelParams::Probabilities(_)) {
                    return Err(Error::Config("measure-oracle needs an exact p vector".into()));
                }
                if self.grid().len() != 1 {
                    return Err(Error::Config("measure-oracle takes a single n".into()));
                }
            }
            ExperimentKind::PhaseDiagram => {
                let free = e.free.ok_or_else(|| Error::Config("phase-diagram needs free".into()))?;
                if free.0 == free.1 || free.0 > r || free.1 > r {
                    return Err(Error::Config(format!(
                        "free coordinates {free:?} must be distinct and <= r = {r}"
                    )));
                }
                if e.steps.is_none_or(|s| s == 0) || e.max.is_none_or(|m| !(m > 0.0)) {
                    return Err(Error::Config("phase-diagram needs steps >= 1 and max > 0".into()));
                }
            }
            _ => {
                let ModelParams::Exponents(schedule) = &params else {
                    return Err(Error::Config(format!("{} needs alpha or alpha_schedule", kind.name())));
                };
                self.validate_exponent_kind(schedule)?;
            }
        }
        Ok(())
    }

    fn validate_exponent_kind(&self, schedule: &AlphaSchedule) -> Result<()> {
        let e = &self.experiment;
        let r = self.model.r;
        let crit = crate::phase::classify(schedule.terminal(), self.tolerance()).critical_dimension();
        let need = |name: &str, v: Option<usize>| {
            v.ok_or_else(|| Error::Config(format!("{} needs {name}", e.kind.name())))
        };
        match e.kind {
            ExperimentKind::FaceNumbers => {
                if need("d", e.d)? > r {
                    return Err(Error::Config(format!("d must be <= r = {r}")));
                }
                if let Some(t) = e.t {
                    if !(t > 0.0 && t < 1.0) {
                        return Err(Error::Config(format!("t = {t} must lie in (0, 1)")));
                    }
                }
            }
            ExperimentKind::BettiDomination => {
                let k = match e.k {
                    Some(k) => k as i32,
                    None => crit.ok_or_else(|| Error::Config("alpha lies on a domain boundary".into()))?,
                };
                if k < 0 || k as usize > r {
                    return Err(Error::Config(format!("betti-domination needs 0 <= k <= r, got {k}")));
                }
            }
            ExperimentKind::Degrees => {
                if e.d.is_none() && e.d_high.is_none() && e.k.is_none() {
                    return Err(Error::Config("degrees needs at least one of d, d_high and k".into()));
                }
                if let Some(d) = e.d {
                    match crit {
                        Some(c) if (d as i32) < c => {}
                        _ => {
                            return Err(Error::Config(format!(
                                "degree concentration needs d = {d} below the critical dimension"
                            )))
                        }
                    }
                    let delta = e.delta.unwrap_or(DEFAULT_DELTA);
                    if !(delta > 0.0 && delta < 1.0) {
                        return Err(Error::Config(format!("delta = {delta} must lie in (0, 1)")));
                    }
                }
                if let Some(d) = e.d_high {
                    if d >= r {
                        return Err(Error::Config(format!("d_high must be < r = {r}")));
                    }
                }
                if let Some(k) = e.k {
                    if k > r {
                        return Err(Error::Config(format!("k must be <= r = {r}")));
                    }
                }
            }
            ExperimentKind::Connectivity => {
                if crit.is_none() {
                    return Err(Error::Config("alpha lies on a domain boundary".into()));
                }
            }
            ExperimentKind::CycleHunt => {
                if !schedule.is_constant() {
                    return Err(Error::Config("cycle-hunt needs a constant alpha".into()));
                }
                let k = need("k", e.k)?;
                if k == 0 || k > r {
                    return Err(Error::Config(format!("cycle dimension k = {k} must lie in 1..={r}")));
                }
                crate::cycles::cycle_size_bound(k, schedule.terminal())
                    .map_err(|err| Error::Config(err.to_string()))?;
            }
            ExperimentKind::Garland | ExperimentKind::MeasureOracle | ExperimentKind::PhaseDiagram => {}
        }
        Ok(())
    }
}

pub(crate) const DEFAULT_DELTA: f64 = 0.3;

fn config_alpha(a: &[f64]) -> Result<ExponentVector> {
    ExponentVector::new(a.to_vec()).map_err(|e| Error::Config(e.to_string()))
}
