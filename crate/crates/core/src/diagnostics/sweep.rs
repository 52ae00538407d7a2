//! Penalized solutions against the masked limit across a λ list.

use serde::{Deserialize, Serialize};

use super::energy::{check_energy_bounds, penalization_mass, EnergyOptions};
use super::{map_lambdas, sorted_lambdas};
use crate::error::{Error, Result};
use crate::grid::{NormKind, Normed};
use crate::parabolic::{solve_limit, solve_penalized, ProblemSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub lambda: f64,
    /// `(Σ_k dt |u_λ^k − u_∞^k|²_{H¹})^{1/2}`.
    pub err_l2h1: f64,
    /// `max_k ‖u_λ^k − u_∞^k‖_{L²}`.
    pub err_supl2: f64,
    /// `λ Σ_k dt ∫ a u_λ²`.
    pub pen_mass: f64,
}

/// Rows sorted by λ ascending.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    /// Indices `j` with `err_l2h1[j+1] ≥ err_l2h1[j]`.
    pub fn increases(&self) -> Vec<usize> {
        self.rows
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[1].err_l2h1 >= w[0].err_l2h1)
            .map(|(j, _)| j)
            .collect()
    }

    /// Strictly decreasing errors, except for at most `allowed` increases
    /// each smaller than `rel` relative to the preceding value.
    pub fn decreasing_with(&self, allowed: usize, rel: f64) -> bool {
        let bad = self.increases();
        bad.len() <= allowed
            && bad
                .iter()
                .all(|&j| self.rows[j + 1].err_l2h1 <= self.rows[j].err_l2h1 * (1.0 + rel))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub report: SweepReport,
    /// `bound2` LHS/RHS of each penalized run, in row order.
    pub bound2_ratios: Vec<f64>,
}

/// Solves the limit problem once and each penalized problem of the list.
pub fn convergence_sweep(p: &ProblemSpec, lambdas: &[f64]) -> Result<SweepOutcome> {
    if lambdas.len() < 3 {
        return Err(Error::config(format!(
            "a convergence sweep needs at least 3 lambda values, got {}",
            lambdas.len()
        )));
    }
    if lambdas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::config(
            "the lambda list of a convergence sweep must be strictly ascending",
        ));
    }
    let lambdas = sorted_lambdas(lambdas)?;
    p.validate()?;
    p.check_convergence_hypotheses()?;
    let limit = solve_limit(p)?;
    let results = map_lambdas(&lambdas, |lambda| {
        let q = p.clone().with_lambda(lambda);
        let u = solve_penalized(&q)?;
        let diff = u.sub(&limit)?;
        let bound2 = check_energy_bounds(&u, &q, &EnergyOptions::default())?
            .get("bound2")
            .map(|r| r.ratio)
            .unwrap_or(f64::NAN);
        let row = SweepRow {
            lambda,
            err_l2h1: diff.norm(NormKind::L2H1Semi)?,
            err_supl2: diff.norm(NormKind::SupL2)?,
            pen_mass: penalization_mass(&u, &q),
        };
        Ok((row, bound2))
    })?;
    let (rows, bound2_ratios) = results.into_iter().unzip();
    Ok(SweepOutcome {
        report: SweepReport { rows },
        bound2_ratios,
    })
}
