//! The JSON experiment description.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::diagnostics::DEFAULT_TOL_DISC;
use crate::error::{Error, Result};
use crate::grid::{Grid, TimeGrid};
use crate::linalg::DEFAULT_CG_TOL;
use crate::parabolic::ProblemSpec;
use crate::potential::PotentialSpec;
use crate::source::Source;
use crate::stationary::StationarySpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Solve,
    Limit,
    Stationary,
    Sweep,
    Decay,
    Check,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Solve => "solve",
            Mode::Limit => "limit",
            Mode::Stationary => "stationary",
            Mode::Sweep => "sweep",
            Mode::Decay => "decay",
            Mode::Check => "check",
        }
    }

    fn parabolic(self) -> bool {
        self != Mode::Stationary
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub extents: Vec<f64>,
    pub counts: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub horizon: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_cg_tol")]
    pub cg_tol: f64,
    #[serde(default = "default_tol_disc")]
    pub tol_disc: f64,
}

fn default_cg_tol() -> f64 {
    DEFAULT_CG_TOL
}

fn default_tol_disc() -> f64 {
    DEFAULT_TOL_DISC
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            cg_tol: DEFAULT_CG_TOL,
            tol_disc: DEFAULT_TOL_DISC,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Optional; when present it must match the subcommand.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    pub grid: GridConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<TimeConfig>,
    pub potential: PotentialSpec,
    #[serde(default)]
    pub forcing: Source,
    #[serde(default)]
    pub initial: Source,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Output path prefix; `--out` takes precedence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// `check`: also evaluate the time-derivative bound.
    #[serde(default)]
    pub derbound: bool,
    /// `check` and `stationary`: use the limit solver instead of the penalized one.
    #[serde(default)]
    pub limit: bool,
    /// `stationary`: time at which the potential is frozen.
    #[serde(default)]
    pub at_time: f64,
}

/// What a validated configuration asks for.
#[derive(Debug, Clone)]
pub enum Experiment {
    Solve(ProblemSpec),
    Limit(ProblemSpec),
    Check {
        problem: ProblemSpec,
        limit: bool,
        derbound: bool,
        tol_disc: f64,
    },
    Sweep {
        problem: ProblemSpec,
        lambdas: Vec<f64>,
    },
    Decay {
        problem: ProblemSpec,
        lambdas: Vec<f64>,
        epsilon: f64,
    },
    Stationary {
        spec: StationarySpec,
        limit: bool,
    },
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::config(format!("invalid experiment configuration: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::config(format!("cannot read configuration {}: {e}", path.display()))
        })?;
        Self::from_json(&text)
    }

    fn need_lambda(&self, mode: Mode) -> Result<f64> {
        self.lambda
            .ok_or_else(|| Error::config(format!("mode {} needs \"lambda\"", mode.name())))
    }

    fn need_lambdas(&self, mode: Mode) -> Result<Vec<f64>> {
        self.lambdas
            .clone()
            .ok_or_else(|| Error::config(format!("mode {} needs \"lambdas\"", mode.name())))
    }

    /// Checks the configuration against `mode`, including the hypotheses of
    /// the estimate that mode verifies, and builds the experiment.
    pub fn experiment(&self, mode: Mode) -> Result<Experiment> {
        if let Some(declared) = self.mode {
            if declared != mode {
                return Err(Error::config(format!(
                    "configuration declares mode {} but was run as {}",
                    declared.name(),
                    mode.name()
                )));
            }
        }
        let grid = Arc::new(Grid::new(&self.grid.extents, &self.grid.counts)?);
        let tol = self.tolerances;
        if !(tol.tol_disc >= 0.0) || !tol.tol_disc.is_finite() {
            return Err(Error::config("tol_disc must be finite and non-negative"));
        }
        if !mode.parabolic() {
            let spec = StationarySpec {
                grid,
                potential: self.potential.clone(),
                at_time: self.at_time,
                forcing: self.forcing.clone(),
                lambda: if self.limit {
                    self.lambda.unwrap_or(0.0)
                } else {
                    self.need_lambda(mode)?
                },
                cg_tol: tol.cg_tol,
            };
            spec.validate()?;
            return Ok(Experiment::Stationary {
                spec,
                limit: self.limit,
            });
        }
        let time = self
            .time
            .ok_or_else(|| Error::config(format!("mode {} needs \"time\"", mode.name())))?;
        let time = TimeGrid::new(time.horizon, time.steps)?;
        let mut problem = ProblemSpec::new(grid, time, self.potential.clone())
            .with_forcing(self.forcing.clone())
            .with_initial(self.initial.clone())
            .with_cg_tol(tol.cg_tol);
        let experiment = match mode {
            Mode::Solve => {
                problem.lambda = self.need_lambda(mode)?;
                Experiment::Solve(problem)
            }
            Mode::Limit => Experiment::Limit(problem),
            Mode::Check => {
                if !self.limit {
                    problem.lambda = self.need_lambda(mode)?;
                }
                if self.derbound && !self.potential.monotone() {
                    return Err(Error::contract(
                        "Assumption (A) required for derbound: the potential must be non-increasing in time",
                    ));
                }
                if self.derbound && self.limit {
                    return Err(Error::config(
                        "derbound applies to penalized runs; drop \"limit\"",
                    ));
                }
                Experiment::Check {
                    problem,
                    limit: self.limit,
                    derbound: self.derbound,
                    tol_disc: tol.tol_disc,
                }
            }
            Mode::Sweep => {
                let lambdas = self.need_lambdas(mode)?;
                problem.validate()?;
                problem.check_convergence_hypotheses()?;
                Experiment::Sweep { problem, lambdas }
            }
            Mode::Decay => {
                let lambdas = self.need_lambdas(mode)?;
                let epsilon = self
                    .epsilon
                    .ok_or_else(|| Error::config("mode decay needs \"epsilon\""))?;
                problem.validate()?;
                problem.check_decay_hypotheses()?;
                Experiment::Decay {
                    problem,
                    lambdas,
                    epsilon,
                }
            }
            Mode::Stationary => unreachable!("handled above"),
        };
        match &experiment {
            Experiment::Solve(p) | Experiment::Limit(p) | Experiment::Check { problem: p, .. } => {
                p.validate()?
            }
            _ => {}
        }
        Ok(experiment)
    }
}
