//! Backward Euler for the penalized problem
//! `∂_t u − Δu + λ a(x,t) u = f`, `u = 0` on `∂Ω`, `u(0) = g`,
//! and for its masked limit, the heat equation posed on the moving set `O_a`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{Field, Grid, TimeGrid, Trajectory};
use crate::linalg::{
    cg_solve_from, LinalgError, SparseOperator, DEFAULT_CG_TOL, DEFAULT_MAXITER_FACTOR,
};
use crate::potential::{active_mask, PotentialSpec};
use crate::source::Source;

/// One evolution problem: data, potential and penalization strength.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub grid: Arc<Grid>,
    pub time: TimeGrid,
    pub potential: PotentialSpec,
    pub forcing: Source,
    pub initial: Source,
    pub lambda: f64,
    /// Relative residual tolerance of each implicit solve.
    pub cg_tol: f64,
}

impl ProblemSpec {
    pub fn new(grid: Arc<Grid>, time: TimeGrid, potential: PotentialSpec) -> Self {
        Self {
            grid,
            time,
            potential,
            forcing: Source::zero(),
            initial: Source::zero(),
            lambda: 0.0,
            cg_tol: DEFAULT_CG_TOL,
        }
    }

    pub fn with_forcing(mut self, f: Source) -> Self {
        self.forcing = f;
        self
    }

    pub fn with_initial(mut self, g: Source) -> Self {
        self.initial = g;
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
        self.initial.validate(&self.grid)?;
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
        Ok(())
    }

    /// Nodal `g`, restricted to `Ω_a(0)` if requested.
    pub fn initial_values(&self) -> Vec<f64> {
        let mask = self
            .initial
            .inside_active
            .then(|| active_mask(&self.potential, &self.grid, 0.0));
        self.initial.sample(&self.grid, mask.as_deref())
    }

    /// Nodal `f(·, t_k)`, restricted to `Ω_a(t_k)` if requested.
    pub fn forcing_values(&self, k: usize) -> Vec<f64> {
        let mask = self
            .forcing
            .inside_active
            .then(|| active_mask(&self.potential, &self.grid, self.time.time(k)));
        self.forcing.sample(&self.grid, mask.as_deref())
    }

    /// `λ · h^N Σ a(x_i, 0) g_i²`.
    pub fn initial_penalty(&self) -> f64 {
        let a0 = self.potential.sample(&self.grid, 0.0);
        let g = self.initial_values();
        self.lambda
            * self.grid.cell_volume()
            * a0.iter().zip(&g).map(|(a, v)| a * v * v).sum::<f64>()
    }

    /// Hypotheses of the strong convergence theorem: Assumption (A) and
    /// initial data vanishing where `a(·,0) > 0`, which makes
    /// `sup_λ λ ∫ a(0) g²` exactly zero.
    pub fn check_convergence_hypotheses(&self) -> Result<()> {
        if !self.potential.monotone() {
            return Err(Error::contract(
                "Assumption (A) required: the potential must be non-increasing in time",
            ));
        }
        let a0 = self.potential.sample(&self.grid, 0.0);
        if a0
            .iter()
            .zip(self.initial_values())
            .any(|(a, g)| *a > 0.0 && g != 0.0)
        {
            return Err(Error::contract(
                "the initial datum must vanish where a(., 0) > 0 so that lambda * int a(0) g^2 stays bounded",
            ));
        }
        Ok(())
    }

    /// Hypotheses of the exponential decay theorem: `f = 0` off `O_a` and
    /// `g` supported in the closure of `O_a` at `t = 0`.
    pub fn check_decay_hypotheses(&self) -> Result<()> {
        for k in 0..=self.time.steps() {
            let active = active_mask(&self.potential, &self.grid, self.time.time(k));
            if self
                .forcing_values(k)
                .iter()
                .zip(&active)
                .any(|(f, on)| !on && *f != 0.0)
            {
                return Err(Error::contract(format!(
                    "the forcing must vanish outside O_a; it does not at t = {}",
                    self.time.time(k)
                )));
            }
        }
        let a0 = self.potential.sample(&self.grid, 0.0);
        if a0
            .iter()
            .zip(self.initial_values())
            .any(|(a, g)| *a > 0.0 && g != 0.0)
        {
            return Err(Error::contract(
                "the initial datum must be supported in the closure of O_a at t = 0",
            ));
        }
        Ok(())
    }
}

fn step_solve(
    op: &SparseOperator,
    rhs: &[f64],
    guess: &[f64],
    tol: f64,
    step: usize,
) -> Result<Vec<f64>> {
    let max_iter = DEFAULT_MAXITER_FACTOR * op.dim().max(1);
    match cg_solve_from(op, rhs, Some(guess), tol, max_iter) {
        Ok((x, _)) => Ok(x),
        Err(LinalgError::NotConverged(source)) => Err(Error::Solver { step, source }),
        Err(LinalgError::Invalid(msg)) => Err(Error::usage(msg)),
    }
}

/// Backward Euler: for `k = 1..m` solve
/// `(I/dt + A + λ diag a(·, t_k)) u^k = f(·, t_k) + u^{k−1}/dt`.
pub fn solve_penalized(p: &ProblemSpec) -> Result<Trajectory> {
    p.validate()?;
    let grid = &p.grid;
    let lap = grid.dirichlet_laplacian();
    let inv_dt = 1.0 / p.time.dt();
    let mut layers = Vec::with_capacity(p.time.steps() + 1);
    let mut prev = p.initial_values();
    layers.push(Field::new(grid.clone(), prev.clone())?);
    for k in 1..=p.time.steps() {
        let a = p.potential.sample(grid, p.time.time(k));
        let diag: Vec<f64> = a.iter().map(|ai| inv_dt + p.lambda * ai).collect();
        let op = lap
            .add_diagonal(&diag)
            .map_err(|e| Error::usage(e.to_string()))?;
        let rhs: Vec<f64> = p
            .forcing_values(k)
            .iter()
            .zip(&prev)
            .map(|(f, u)| f + u * inv_dt)
            .collect();
        let next = step_solve(&op, &rhs, &prev, p.cg_tol, k)?;
        layers.push(Field::new(grid.clone(), next.clone())?);
        prev = next;
    }
    Trajectory::new(grid.clone(), p.time, layers)
}

/// Masked scheme for the limit problem: at step `k` the heat step is solved
/// on the nodes of `Ω_a(t_k)` with `u = 0` elsewhere. `λ` is ignored.
pub fn solve_limit(p: &ProblemSpec) -> Result<Trajectory> {
    p.validate()?;
    let grid = &p.grid;
    let n = grid.len();
    let inv_dt = 1.0 / p.time.dt();
    let heat = grid
        .dirichlet_laplacian()
        .add_diagonal(&vec![inv_dt; n])
        .map_err(|e| Error::usage(e.to_string()))?;

    let mut active = active_mask(&p.potential, grid, 0.0);
    let g = p.initial_values();
    if g.iter().zip(&active).any(|(v, on)| !on && *v != 0.0) {
        return Err(Error::contract(
            "the initial datum of the limit problem must vanish outside Omega_a(0)",
        ));
    }
    let mut layers = Vec::with_capacity(p.time.steps() + 1);
    let mut prev = g;
    layers.push(Field::new(grid.clone(), prev.clone())?);
    for k in 1..=p.time.steps() {
        let next_active = active_mask(&p.potential, grid, p.time.time(k));
        if active.iter().zip(&next_active).any(|(was, is)| *was && !is) {
            return Err(Error::contract(format!(
                "Omega_a(t) shrinks between steps {} and {k}; the masked scheme needs a nondecreasing O_a",
                k - 1
            )));
        }
        active = next_active;
        let f = p.forcing_values(k);
        let mut next = vec![0.0; n];
        if active.iter().any(|&on| on) {
            let (op, kept) = heat.restrict(&active);
            let rhs: Vec<f64> = kept.iter().map(|&i| f[i] + prev[i] * inv_dt).collect();
            let guess: Vec<f64> = kept.iter().map(|&i| prev[i]).collect();
            let local = step_solve(&op, &rhs, &guess, p.cg_tol, k)?;
            for (&i, v) in kept.iter().zip(local) {
                next[i] = v;
            }
        }
        layers.push(Field::new(grid.clone(), next.clone())?);
        prev = next;
    }
    Trajectory::new(grid.clone(), p.time, layers)
}
