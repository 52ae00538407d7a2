//! Exponential smallness of `u_λ` away from the vanishing set.

use serde::{Deserialize, Serialize};

use super::{map_lambdas, sorted_lambdas};
use crate::error::{Error, Result};
use crate::grid::{same_grid, Field, Trajectory};
use crate::parabolic::{solve_penalized, ProblemSpec};
use crate::potential::{build_decay_geometry, DecayGeometry, StationaryGeometry};
use crate::stationary::StationarySpec;

/// `Σ_{k≥1} dt Σ_i h^N e^{2√λ ρ} η² u (λδ/4 · u − f)`.
pub fn weighted_decay_integral(
    traj: &Trajectory,
    geom: &DecayGeometry,
    p: &ProblemSpec,
) -> Result<f64> {
    same_grid(traj.grid(), geom.grid())?;
    same_grid(traj.grid(), &p.grid)?;
    if traj.time_grid() != geom.time_grid() || *traj.time_grid() != p.time {
        return Err(Error::usage(
            "trajectory, geometry and problem use different time grids",
        ));
    }
    let h = p.grid.cell_volume();
    let root = p.lambda.sqrt();
    let c = 0.25 * p.lambda * geom.delta();
    Ok(traj.time_integral(|k, u| {
        let f = p.forcing_values(k);
        u.values()
            .iter()
            .zip(&f)
            .enumerate()
            .fold(0.0, |acc, (i, (ui, fi))| {
                let eta = geom.eta(k, i);
                if eta == 0.0 {
                    return acc;
                }
                acc + h * (2.0 * root * geom.rho(k, i)).exp() * eta * eta * ui * (c * ui - fi)
            })
    }))
}

/// `Σ_i h^N e^{2√λ ρ} η² u (λδ/2 · u − f)` for a stationary solution.
pub fn weighted_decay_integral_stationary(
    u: &Field,
    geom: &StationaryGeometry,
    s: &StationarySpec,
) -> Result<f64> {
    same_grid(u.grid(), geom.grid())?;
    same_grid(u.grid(), &s.grid)?;
    let h = s.grid.cell_volume();
    let root = s.lambda.sqrt();
    let c = 0.5 * s.lambda * geom.delta();
    let f = s.forcing_values();
    Ok(u.values()
        .iter()
        .zip(&f)
        .enumerate()
        .fold(0.0, |acc, (i, (ui, fi))| {
            let eta = geom.eta(i);
            if eta == 0.0 {
                return acc;
            }
            acc + h * (2.0 * root * geom.rho(i)).exp() * eta * eta * ui * (c * ui - fi)
        }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub lambda: f64,
    /// `∫∫_{A_ε} u_λ²`.
    pub i_eps: f64,
    /// The weighted integral `W(λ)`.
    pub w: f64,
    /// `λ e^{c_ε √λ} I_ε(λ)`.
    pub scaled: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DecayReport {
    pub rows: Vec<DecayRow>,
    /// Least-squares slope of `ln I_{3ε}` against `√λ`.
    pub slope: f64,
    /// Root-mean-square residual of that fit.
    pub residual: f64,
}

impl DecayReport {
    /// `max W / min W` across the sweep.
    pub fn w_spread(&self) -> f64 {
        let (lo, hi) = self
            .rows
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
                (lo.min(r.w), hi.max(r.w))
            });
        hi / lo
    }

    /// `I_ε` at the smallest λ over `I_ε` at the largest.
    pub fn i_eps_drop(&self) -> f64 {
        match (self.rows.first(), self.rows.last()) {
            (Some(a), Some(b)) => a.i_eps / b.i_eps,
            _ => f64::NAN,
        }
    }

    /// Largest scaled value relative to the one at the smallest λ.
    pub fn scaled_growth(&self) -> f64 {
        let first = self.rows.first().map_or(f64::NAN, |r| r.scaled);
        self.rows
            .iter()
            .map(|r| r.scaled)
            .fold(f64::NEG_INFINITY, f64::max)
            / first
    }
}

/// A decay sweep with the quantities that do not go to the CSV report.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayOutcome {
    pub report: DecayReport,
    pub epsilon: f64,
    pub delta: f64,
    pub c_eps: f64,
    /// `∫∫_{A_{3ε}} u_λ²`, row order.
    pub i_3eps: Vec<f64>,
    /// `λ e^{4ε√(λδ/2)} ∫∫_{A_{2ε}} u_λ²`, row order.
    pub corollary: Vec<f64>,
    pub intercept: f64,
}

impl DecayOutcome {
    /// The rate `2ε√(δ/2)` implied for `I_{3ε}`.
    pub fn predicted_rate(&self) -> f64 {
        2.0 * self.epsilon * (0.5 * self.delta).sqrt()
    }
}

fn region_mass(traj: &Trajectory, geom: &DecayGeometry, multiple: f64) -> f64 {
    let g = traj.grid();
    traj.time_integral(|k, u| {
        let sum = u
            .values()
            .iter()
            .enumerate()
            .filter(|(i, _)| geom.in_region(multiple, k, *i))
            .fold(0.0, |acc, (_, v)| acc + v * v);
        g.cell_volume() * sum
    })
}

/// Least-squares line `y = a + b x`; returns `(b, a, rms residual)`.
pub(crate) fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    (slope, intercept, (rss / n).sqrt())
}

/// Solves every `λ` of the list and evaluates the decay quantities.
pub fn decay_sweep(p: &ProblemSpec, lambdas: &[f64], epsilon: f64) -> Result<DecayOutcome> {
    if lambdas.len() < 3 {
        return Err(Error::Fit(format!(
            "fitting a decay rate needs at least 3 lambda values, got {}",
            lambdas.len()
        )));
    }
    let lambdas = sorted_lambdas(lambdas)?;
    if lambdas[0] < 4.0 {
        return Err(Error::config(format!(
            "the weighted decay estimate needs lambda >= 4, got {}",
            lambdas[0]
        )));
    }
    p.validate()?;
    p.check_decay_hypotheses()?;
    let geom = build_decay_geometry(&p.potential, &p.grid, &p.time, epsilon)?;
    if !geom.mask(3.0).iter().any(|&b| b) {
        return Err(Error::geometry(format!(
            "A_3ε is empty for ε = {epsilon}; the decay fit has no support"
        )));
    }
    let half_rate = (0.5 * geom.delta()).sqrt();
    let results = map_lambdas(&lambdas, |lambda| {
        let q = p.clone().with_lambda(lambda);
        let u = solve_penalized(&q)?;
        let i_eps = region_mass(&u, &geom, 1.0);
        let row = DecayRow {
            lambda,
            i_eps,
            w: weighted_decay_integral(&u, &geom, &q)?,
            scaled: lambda * (geom.c_eps() * lambda.sqrt()).exp() * i_eps,
        };
        let i_2eps = region_mass(&u, &geom, 2.0);
        let corollary = lambda * (4.0 * epsilon * lambda.sqrt() * half_rate).exp() * i_2eps;
        Ok((row, region_mass(&u, &geom, 3.0), corollary))
    })?;
    let mut rows = Vec::with_capacity(results.len());
    let mut i_3eps = Vec::with_capacity(results.len());
    let mut corollary = Vec::with_capacity(results.len());
    for (r, i3, c) in results {
        rows.push(r);
        i_3eps.push(i3);
        corollary.push(c);
    }
    if let Some(j) = i_3eps.iter().position(|v| !(*v > 0.0)) {
        return Err(Error::Fit(format!(
            "I_3ε vanishes at lambda = {}; its logarithm cannot be fitted",
            rows[j].lambda
        )));
    }
    let x: Vec<f64> = lambdas.iter().map(|l| l.sqrt()).collect();
    let y: Vec<f64> = i_3eps.iter().map(|v| v.ln()).collect();
    let (slope, intercept, residual) = fit_line(&x, &y);
    Ok(DecayOutcome {
        report: DecayReport {
            rows,
            slope,
            residual,
        },
        epsilon,
        delta: geom.delta(),
        c_eps: geom.c_eps(),
        i_3eps,
        corollary,
        intercept,
    })
}
