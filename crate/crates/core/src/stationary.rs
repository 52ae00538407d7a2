//! Elliptic problems `−Δu + λ a u = f` in `H¹₀(Ω)` and their limit
//! `−Δu = f` in `H¹₀(K_a)`, with the potential frozen at one time.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{same_grid, Field, Grid};
use crate::linalg::{
    cg_solve, LinalgError, SparseOperator, DEFAULT_CG_TOL, DEFAULT_MAXITER_FACTOR,
};
use crate::potential::{active_mask, PotentialSpec};
use crate::source::Source;

#[derive(Debug, Clone)]
pub struct StationarySpec {
    pub grid: Arc<Grid>,
    pub potential: PotentialSpec,
    /// Time at which a time-dependent family is frozen.
    pub at_time: f64,
    pub forcing: Source,
    pub lambda: f64,
    pub cg_tol: f64,
}

impl StationarySpec {
    pub fn new(grid: Arc<Grid>, potential: PotentialSpec) -> Self {
        Self {
            grid,
            potential,
            at_time: 0.0,
            forcing: Source::zero(),
            lambda: 0.0,
            cg_tol: DEFAULT_CG_TOL,
        }
    }

    pub fn with_forcing(mut self, f: Source) -> Self {
        self.forcing = f;
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_cg_tol(mut self, tol: f64) -> Self {
        self.cg_tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.potential.validate(&self.grid)?;
        self.forcing.validate(&self.grid)?;
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return Err(Error::config(format!(
                "lambda {} must be finite and non-negative",
                self.lambda
            )));
        }
        if !(self.cg_tol > 0.0 && self.cg_tol < 1.0) {
            return Err(Error::config(format!(
                "cg_tol {} outside (0,1)",
                self.cg_tol
            )));
        }
        if !(self.at_time >= 0.0) || !self.at_time.is_finite() {
            return Err(Error::config("at_time must be a finite non-negative time"));
        }
        Ok(())
    }

    /// Nodes of the interior of `K_a`.
    pub fn mask(&self) -> Vec<bool> {
        active_mask(&self.potential, &self.grid, self.at_time)
    }

    pub fn potential_values(&self) -> Vec<f64> {
        self.potential.sample(&self.grid, self.at_time)
    }

    pub fn forcing_values(&self) -> Vec<f64> {
        let mask = self.forcing.inside_active.then(|| self.mask());
        self.forcing.sample(&self.grid, mask.as_deref())
    }

    fn operator(&self) -> Result<SparseOperator> {
        let shift: Vec<f64> = self
            .potential_values()
            .iter()
            .map(|a| self.lambda * a)
            .collect();
        self.grid
            .dirichlet_laplacian()
            .add_diagonal(&shift)
            .map_err(|e| Error::usage(e.to_string()))
    }
}

fn solve(op: &SparseOperator, rhs: &[f64], tol: f64) -> Result<Vec<f64>> {
    match cg_solve(op, rhs, tol, DEFAULT_MAXITER_FACTOR * op.dim().max(1)) {
        Ok((x, _)) => Ok(x),
        Err(LinalgError::NotConverged(source)) => Err(Error::Solver { step: 0, source }),
        Err(LinalgError::Invalid(msg)) => Err(Error::usage(msg)),
    }
}

/// Solves `(A + λ diag a) u = f`.
pub fn solve_stationary_penalized(s: &StationarySpec) -> Result<Field> {
    s.validate()?;
    let u = solve(&s.operator()?, &s.forcing_values(), s.cg_tol)?;
    Field::new(s.grid.clone(), u)
}

/// Solves `A u = f` on the interior nodes of `K_a`, `u = 0` elsewhere.
pub fn solve_stationary_limit(s: &StationarySpec) -> Result<Field> {
    s.validate()?;
    let mask = s.mask();
    if !mask.iter().any(|&on| on) {
        return Err(Error::geometry("the interior of K_a contains no grid node"));
    }
    let (op, kept) = s.grid.dirichlet_laplacian().restrict(&mask);
    let f = s.forcing_values();
    let rhs: Vec<f64> = kept.iter().map(|&i| f[i]).collect();
    let local = solve(&op, &rhs, s.cg_tol)?;
    let mut u = vec![0.0; s.grid.len()];
    for (&i, v) in kept.iter().zip(local) {
        u[i] = v;
    }
    Field::new(s.grid.clone(), u)
}

/// `E_λ(u) = |u|²_{H¹} + λ h^N Σ aᵢ uᵢ²` and the objective `E_λ(u) − 2 h^N Σ fᵢ uᵢ`.
pub fn stationary_energy(s: &StationarySpec, u: &Field) -> Result<(f64, f64)> {
    same_grid(&s.grid, u.grid())?;
    let g = &s.grid;
    let v = u.values();
    let a = s.potential_values();
    let penalty = g.cell_volume() * a.iter().zip(v).map(|(ai, ui)| ai * ui * ui).sum::<f64>();
    let energy = g.h1_seminorm_sq(v) + s.lambda * penalty;
    let objective = energy - 2.0 * g.inner(&s.forcing_values(), v);
    Ok((energy, objective))
}

/// `α(λ)`: the objective at the discrete minimizer.
pub fn alpha(s: &StationarySpec) -> Result<f64> {
    let u = solve_stationary_penalized(s)?;
    Ok(stationary_energy(s, &u)?.1)
}

/// `λ h^N Σ aᵢ uᵢ²`.
pub fn stationary_penalization_mass(s: &StationarySpec, u: &Field) -> Result<f64> {
    same_grid(&s.grid, u.grid())?;
    let a = s.potential_values();
    Ok(s.lambda
        * s.grid.cell_volume()
        * a.iter()
            .zip(u.values())
            .map(|(ai, ui)| ai * ui * ui)
            .sum::<f64>())
}
