//! Uniform tensor grids on `Ω = (0,L₁)[×(0,L₂)]` with homogeneous Dirichlet
//! boundary, the discrete Dirichlet Laplacian, and the discrete norms used by
//! every estimate.
//!
//! Only interior nodes carry unknowns; boundary values are zero by exclusion.
//! The mass matrix is lumped (`h^N · I`) and the gradient quadrature uses
//! forward differences over every cell including the two one-sided cells at
//! each Dirichlet face, so that `h^N ⟨A u, u⟩ = |u|²_{H¹}` holds identically.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::SparseOperator;

/// Coordinates of a point in at most two space dimensions; unused trailing
/// coordinates are zero.
pub type Point = [f64; 2];

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    extents: Vec<f64>,
    counts: Vec<usize>,
    spacings: Vec<f64>,
}

impl Grid {
    /// Grid with `counts[j]` interior nodes along an axis of length
    /// `extents[j]`, spacing `h_j = L_j / (n_j + 1)`.
    pub fn new(extents: &[f64], counts: &[usize]) -> Result<Self> {
        if extents.is_empty() || extents.len() > 2 {
            return Err(Error::config(format!(
                "grid dimension must be 1 or 2, got {}",
                extents.len()
            )));
        }
        if extents.len() != counts.len() {
            return Err(Error::config(format!(
                "{} extents but {} interior counts",
                extents.len(),
                counts.len()
            )));
        }
        if let Some(l) = extents.iter().find(|l| !(**l > 0.0) || !l.is_finite()) {
            return Err(Error::config(format!(
                "grid extent {l} is not a positive length"
            )));
        }
        if counts.contains(&0) {
            return Err(Error::config("every axis needs at least one interior node"));
        }
        let spacings = extents
            .iter()
            .zip(counts)
            .map(|(l, &n)| l / (n as f64 + 1.0))
            .collect();
        Ok(Self {
            extents: extents.to_vec(),
            counts: counts.to_vec(),
            spacings,
        })
    }

    pub fn dim(&self) -> usize {
        self.extents.len()
    }

    pub fn extents(&self) -> &[f64] {
        &self.extents
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn spacings(&self) -> &[f64] {
        &self.spacings
    }

    /// Total number of interior nodes.
    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Lumped mass weight `h₁⋯h_N`.
    pub fn cell_volume(&self) -> f64 {
        self.spacings.iter().product()
    }

    /// Per-axis indices of node `i`; the first axis varies fastest.
    pub fn multi_index(&self, i: usize) -> [usize; 2] {
        let n0 = self.counts[0];
        [i % n0, i / n0]
    }

    pub fn flat_index(&self, idx: [usize; 2]) -> usize {
        idx[0] + self.counts[0] * idx[1]
    }

    pub fn node(&self, i: usize) -> Point {
        let idx = self.multi_index(i);
        let mut p = [0.0; 2];
        for (j, pj) in p.iter_mut().enumerate().take(self.dim()) {
            *pj = (idx[j] as f64 + 1.0) * self.spacings[j];
        }
        p
    }

    pub fn nodes(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.len()).map(|i| self.node(i))
    }

    /// True when `p` lies in the closed domain.
    pub fn contains(&self, p: &Point) -> bool {
        (0..self.dim()).all(|j| p[j] >= 0.0 && p[j] <= self.extents[j])
    }

    /// Interior neighbours of node `i` (boundary neighbours are excluded).
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let idx = self.multi_index(i);
        (0..self.dim()).flat_map(move |axis| {
            let mut out = [None, None];
            if idx[axis] > 0 {
                let mut m = idx;
                m[axis] -= 1;
                out[0] = Some(self.flat_index(m));
            }
            if idx[axis] + 1 < self.counts[axis] {
                let mut m = idx;
                m[axis] += 1;
                out[1] = Some(self.flat_index(m));
            }
            out.into_iter().flatten()
        })
    }

    /// Discrete `−Δ` with homogeneous Dirichlet data: `2/h²` on the
    /// diagonal per axis, `−1/h²` to each interior neighbour.
    pub fn dirichlet_laplacian(&self) -> SparseOperator {
        let mut triplets = Vec::with_capacity(self.len() * (1 + 2 * self.dim()));
        let inv_h2: Vec<f64> = self.spacings.iter().map(|h| 1.0 / (h * h)).collect();
        let diag: f64 = inv_h2.iter().map(|c| 2.0 * c).sum();
        for i in 0..self.len() {
            let idx = self.multi_index(i);
            for axis in 0..self.dim() {
                if idx[axis] > 0 {
                    let mut m = idx;
                    m[axis] -= 1;
                    triplets.push((i, self.flat_index(m), -inv_h2[axis]));
                }
            }
            triplets.push((i, i, diag));
            for axis in (0..self.dim()).rev() {
                if idx[axis] + 1 < self.counts[axis] {
                    let mut m = idx;
                    m[axis] += 1;
                    triplets.push((i, self.flat_index(m), -inv_h2[axis]));
                }
            }
        }
        SparseOperator::from_triplets(self.len(), &triplets)
            .expect("stencil indices are in range by construction")
    }

    /// `h^N Σ uᵢ vᵢ`.
    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        self.cell_volume() * u.iter().zip(v).fold(0.0, |acc, (a, b)| acc + a * b)
    }

    /// Forward-difference quadrature of `∫ ∇u · ∇v`, zero extension at the
    /// Dirichlet faces.
    pub fn grad_inner(&self, u: &[f64], v: &[f64]) -> f64 {
        let vol = self.cell_volume();
        let n0 = self.counts[0];
        let n1 = if self.dim() == 2 { self.counts[1] } else { 1 };
        let at = |w: &[f64], i0: isize, i1: isize| -> f64 {
            if i0 < 0 || i1 < 0 || i0 as usize >= n0 || i1 as usize >= n1 {
                0.0
            } else {
                w[i0 as usize + n0 * i1 as usize]
            }
        };
        let mut acc = 0.0;
        let h0 = self.spacings[0];
        for i1 in 0..n1 as isize {
            for i0 in 0..=n0 as isize {
                let du = at(u, i0, i1) - at(u, i0 - 1, i1);
                let dv = at(v, i0, i1) - at(v, i0 - 1, i1);
                acc += du * dv / (h0 * h0);
            }
        }
        if self.dim() == 2 {
            let h1 = self.spacings[1];
            for i0 in 0..n0 as isize {
                for i1 in 0..=n1 as isize {
                    let du = at(u, i0, i1) - at(u, i0, i1 - 1);
                    let dv = at(v, i0, i1) - at(v, i0, i1 - 1);
                    acc += du * dv / (h1 * h1);
                }
            }
        }
        vol * acc
    }

    pub fn l2_norm_sq(&self, u: &[f64]) -> f64 {
        self.inner(u, u)
    }

    pub fn h1_seminorm_sq(&self, u: &[f64]) -> f64 {
        self.grad_inner(u, u)
    }

    /// Linear (1D) or bilinear (2D) interpolation of nodal values at `p`,
    /// with zero boundary values.
    pub fn interpolate(&self, u: &[f64], p: &Point) -> f64 {
        let n0 = self.counts[0];
        let n1 = if self.dim() == 2 { self.counts[1] } else { 1 };
        let at = |i0: isize, i1: isize| -> f64 {
            if i0 < 0 || i0 as usize >= n0 {
                return 0.0;
            }
            if self.dim() == 2 && (i1 < 0 || i1 as usize >= n1) {
                return 0.0;
            }
            u[i0 as usize + n0 * i1.max(0) as usize]
        };
        let locate = |axis: usize| -> (isize, f64) {
            let s = p[axis] / self.spacings[axis] - 1.0;
            let k = s.floor();
            (k as isize, s - k)
        };
        let (k0, w0) = locate(0);
        if self.dim() == 1 {
            return (1.0 - w0) * at(k0, 0) + w0 * at(k0 + 1, 0);
        }
        let (k1, w1) = locate(1);
        (1.0 - w0) * (1.0 - w1) * at(k0, k1)
            + w0 * (1.0 - w1) * at(k0 + 1, k1)
            + (1.0 - w0) * w1 * at(k0, k1 + 1)
            + w0 * w1 * at(k0 + 1, k1 + 1)
    }
}

/// Uniform time levels `t_k = k · T/m`, `k = 0..=m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    horizon: f64,
    steps: usize,
}

impl TimeGrid {
    pub fn new(horizon: f64, steps: usize) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::config(format!(
                "time horizon {horizon} is not positive"
            )));
        }
        if steps == 0 {
            return Err(Error::config("time grid needs at least one step"));
        }
        Ok(Self { horizon, steps })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.steps as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        if k == self.steps {
            self.horizon
        } else {
            k as f64 * self.dt()
        }
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.steps).map(|k| self.time(k))
    }
}

/// Nodal values on the interior of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Arc<Grid>,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Arc<Grid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::usage(format!(
                "field has {} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::usage("field values must be finite"));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Arc<Grid>) -> Self {
        let values = vec![0.0; grid.len()];
        Self { grid, values }
    }

    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(&Point) -> f64) -> Result<Self> {
        let values = grid.nodes().map(|p| f(&p)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| alpha * v).collect(),
        }
    }

    pub fn sub(&self, other: &Field) -> Result<Self> {
        same_grid(&self.grid, &other.grid)?;
        Ok(Self {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Space-time field: one [`Field`] per time level, layer 0 being the
/// initial datum.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    grid: Arc<Grid>,
    time: TimeGrid,
    layers: Vec<Field>,
}

impl Trajectory {
    pub fn new(grid: Arc<Grid>, time: TimeGrid, layers: Vec<Field>) -> Result<Self> {
        if layers.len() != time.steps() + 1 {
            return Err(Error::usage(format!(
                "trajectory has {} layers for {} time steps",
                layers.len(),
                time.steps()
            )));
        }
        for layer in &layers {
            same_grid(&grid, layer.grid())?;
        }
        Ok(Self { grid, time, layers })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn time_grid(&self) -> &TimeGrid {
        &self.time
    }

    pub fn layers(&self) -> &[Field] {
        &self.layers
    }

    pub fn layer(&self, k: usize) -> &Field {
        &self.layers[k]
    }

    pub fn last(&self) -> &Field {
        self.layers
            .last()
            .expect("trajectory has at least one layer")
    }

    pub fn sub(&self, other: &Trajectory) -> Result<Self> {
        same_grid(&self.grid, &other.grid)?;
        if self.time != other.time {
            return Err(Error::usage("trajectories live on different time grids"));
        }
        let layers = self
            .layers
            .iter()
            .zip(&other.layers)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<_>>()?;
        Ok(Self {
            grid: self.grid.clone(),
            time: self.time,
            layers,
        })
    }

    /// Rectangle-rule time integral `Σ_{k=1..m} dt · q(layer k)`.
    pub fn time_integral(&self, mut q: impl FnMut(usize, &Field) -> f64) -> f64 {
        let dt = self.time.dt();
        self.layers
            .iter()
            .enumerate()
            .skip(1)
            .fold(0.0, |acc, (k, layer)| acc + dt * q(k, layer))
    }
}

pub(crate) fn same_grid(a: &Arc<Grid>, b: &Arc<Grid>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::usage("fields live on different grids"))
    }
}

/// Which discrete norm to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    /// `‖u‖_{L²(Ω)}` of a snapshot.
    L2,
    /// `‖∇u‖_{L²(Ω)}` of a snapshot.
    H1Semi,
    /// `‖u‖_{L²(0,T;L²)}`.
    L2L2,
    /// `‖∇u‖_{L²(0,T;L²)}`.
    L2H1Semi,
    /// `max_k ‖u(t_k)‖_{L²}`, initial layer included.
    SupL2,
}

/// Anything a [`NormKind`] can be evaluated on.
pub trait Normed {
    fn norm(&self, kind: NormKind) -> Result<f64>;
}

impl Normed for Field {
    fn norm(&self, kind: NormKind) -> Result<f64> {
        match kind {
            NormKind::L2 => Ok(self.grid.l2_norm_sq(&self.values).sqrt()),
            NormKind::H1Semi => Ok(self.grid.h1_seminorm_sq(&self.values).sqrt()),
            other => Err(Error::usage(format!(
                "{other:?} is a space-time norm and needs a trajectory"
            ))),
        }
    }
}

impl Normed for Trajectory {
    fn norm(&self, kind: NormKind) -> Result<f64> {
        let g = &self.grid;
        match kind {
            NormKind::L2L2 => Ok(self.time_integral(|_, u| g.l2_norm_sq(u.values())).sqrt()),
            NormKind::L2H1Semi => Ok(self
                .time_integral(|_, u| g.h1_seminorm_sq(u.values()))
                .sqrt()),
            NormKind::SupL2 => Ok(self
                .layers
                .iter()
                .map(|u| g.l2_norm_sq(u.values()))
                .fold(0.0, f64::max)
                .sqrt()),
            other => Err(Error::usage(format!(
                "{other:?} is a spatial norm; pick a layer of the trajectory"
            ))),
        }
    }
}

/// Evaluates `kind` on a field or trajectory.
pub fn discrete_norm(subject: &impl Normed, kind: NormKind) -> Result<f64> {
    subject.norm(kind)
}

/// Shorthand for [`Grid::new`].
pub fn build_grid(extents: &[f64], interior_counts: &[usize]) -> Result<Grid> {
    Grid::new(extents, interior_counts)
}

/// Shorthand for [`Grid::dirichlet_laplacian`].
pub fn assemble_dirichlet_laplacian(g: &Grid) -> SparseOperator {
    g.dirichlet_laplacian()
}
