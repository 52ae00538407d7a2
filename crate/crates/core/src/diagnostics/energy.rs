//! A-priori energy inequalities evaluated on discrete trajectories.
//!
//! Suprema in time run over the layers `k = 1..m`, the discrete stand-in for
//! `t ∈ (0, T)`; time integrals use the rectangle rule over the same layers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Trajectory;
use crate::parabolic::ProblemSpec;

pub const DEFAULT_TOL_DISC: f64 = 0.05;

/// One inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub satisfied: bool,
}

impl BoundRecord {
    pub fn new(name: &str, lhs: f64, rhs: f64, tol_disc: f64) -> Self {
        let ratio = if rhs > 0.0 {
            lhs / rhs
        } else if lhs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            ratio,
            satisfied: lhs <= rhs * (1.0 + tol_disc),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EnergyReport {
    pub records: Vec<BoundRecord>,
}

impl EnergyReport {
    pub fn get(&self, name: &str) -> Option<&BoundRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    pub fn all_satisfied(&self) -> bool {
        self.records.iter().all(|r| r.satisfied)
    }
}

/// Which solver produced the trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectoryKind {
    Penalized,
    Limit,
}

#[derive(Debug, Clone, Copy)]
pub struct EnergyOptions {
    pub kind: TrajectoryKind,
    pub tol_disc: f64,
    /// Also evaluate the time-derivative bound, which needs Assumption (A).
    pub derbound: bool,
}

impl Default for EnergyOptions {
    fn default() -> Self {
        Self {
            kind: TrajectoryKind::Penalized,
            tol_disc: DEFAULT_TOL_DISC,
            derbound: false,
        }
    }
}

/// Data norms entering the right-hand sides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DataNorms {
    /// `‖g‖²_{L²}`.
    pub g_l2_sq: f64,
    /// `|g|²_{H¹}`.
    pub g_h1_sq: f64,
    /// `Σ_k dt ‖f(t_k)‖²_{L²}`.
    pub f_l2l2_sq: f64,
    /// `λ h^N Σ a(x_i, 0) g_i²`.
    pub initial_penalty: f64,
}

pub fn data_norms(p: &ProblemSpec) -> DataNorms {
    let grid = &p.grid;
    let g = p.initial_values();
    let dt = p.time.dt();
    let f_l2l2_sq = (1..=p.time.steps()).fold(0.0, |acc, k| {
        acc + dt * grid.l2_norm_sq(&p.forcing_values(k))
    });
    DataNorms {
        g_l2_sq: grid.l2_norm_sq(&g),
        g_h1_sq: grid.h1_seminorm_sq(&g),
        f_l2l2_sq,
        initial_penalty: p.initial_penalty(),
    }
}

/// `λ Σ_k dt h^N Σ_i a(x_i, t_k) (u_i^k)²`.
pub fn penalization_mass(traj: &Trajectory, p: &ProblemSpec) -> f64 {
    let grid = &p.grid;
    let h = grid.cell_volume();
    let time = traj.time_grid();
    p.lambda
        * traj.time_integral(|k, u| {
            let a = p.potential.sample(grid, time.time(k));
            h * a
                .iter()
                .zip(u.values())
                .fold(0.0, |acc, (ai, ui)| acc + ai * ui * ui)
        })
}

fn check_compatible(traj: &Trajectory, p: &ProblemSpec) -> Result<()> {
    crate::grid::same_grid(traj.grid(), &p.grid)?;
    if *traj.time_grid() != p.time {
        return Err(Error::usage(
            "trajectory and problem use different time grids",
        ));
    }
    Ok(())
}

/// Evaluates the energy inequalities that apply to `traj`.
///
/// Penalized runs report `bound2`, optionally `derbound`, and the standalone
/// `penalization_mass` against the `bound2` right-hand side. Limit runs report
/// `energy_inf`.
pub fn check_energy_bounds(
    traj: &Trajectory,
    p: &ProblemSpec,
    opts: &EnergyOptions,
) -> Result<EnergyReport> {
    check_compatible(traj, p)?;
    if opts.derbound && !p.potential.monotone() {
        return Err(Error::contract(
            "Assumption (A) required for derbound: the potential must be non-increasing in time",
        ));
    }
    if opts.derbound && opts.kind == TrajectoryKind::Limit {
        return Err(Error::usage("derbound applies to penalized trajectories"));
    }
    let grid = &p.grid;
    let data = data_norms(p);
    let horizon = p.time.horizon();
    let layers = &traj.layers()[1..];
    let sup_l2 = layers
        .iter()
        .map(|u| grid.l2_norm_sq(u.values()))
        .fold(0.0, f64::max);
    let grad_l2l2 = traj.time_integral(|_, u| grid.h1_seminorm_sq(u.values()));

    let mut records = Vec::new();
    match opts.kind {
        TrajectoryKind::Penalized => {
            let mass = penalization_mass(traj, p);
            let rhs = data.g_l2_sq + horizon * data.f_l2l2_sq;
            records.push(BoundRecord::new(
                "bound2",
                0.25 * sup_l2 + grad_l2l2 + mass,
                rhs,
                opts.tol_disc,
            ));
            if opts.derbound {
                let dt = p.time.dt();
                let deriv = traj.layers().windows(2).fold(0.0, |acc, w| {
                    let du: Vec<f64> = w[1]
                        .values()
                        .iter()
                        .zip(w[0].values())
                        .map(|(a, b)| (a - b) / dt)
                        .collect();
                    acc + dt * grid.l2_norm_sq(&du)
                });
                let sup_grad = layers
                    .iter()
                    .map(|u| grid.h1_seminorm_sq(u.values()))
                    .fold(0.0, f64::max);
                let rhs = data.f_l2l2_sq + data.g_h1_sq + data.initial_penalty;
                records.push(BoundRecord::new(
                    "derbound",
                    deriv + sup_grad,
                    rhs,
                    opts.tol_disc,
                ));
            }
            records.push(BoundRecord::new(
                "penalization_mass",
                mass,
                rhs,
                opts.tol_disc,
            ));
        }
        TrajectoryKind::Limit => {
            let rhs = 0.5 * data.g_l2_sq + horizon * data.f_l2l2_sq;
            records.push(BoundRecord::new(
                "energy_inf",
                0.25 * sup_l2 + grad_l2l2,
                rhs,
                opts.tol_disc,
            ));
        }
    }
    Ok(EnergyReport { records })
}
