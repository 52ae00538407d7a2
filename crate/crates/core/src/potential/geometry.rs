//! Distances to the vanishing set and the ε-regions of the decay estimates.
//!
//! Distances are Euclidean in `ℝ^N × ℝ` with time as an ordinary coordinate.
//! Slab families reduce to a convex polygon in the `(x₁, t)` plane and the
//! disk to a polygon in the meridian plane `(|x − c|, t)`; anything else
//! falls back to the nearest vanishing sample of the space-time grid.

use std::sync::Arc;

use super::{active_mask, PotentialSpec};
use crate::error::{Error, Result};
use crate::grid::{Grid, Point, TimeGrid};

type Vertex = (f64, f64);

/// Sutherland–Hodgman clip of a convex polygon by `a·p ≤ b`.
fn clip(poly: &[Vertex], a: Vertex, b: f64) -> Vec<Vertex> {
    let inside = |p: &Vertex| a.0 * p.0 + a.1 * p.1 <= b;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for (k, cur) in poly.iter().enumerate() {
        let prev = &poly[(k + poly.len() - 1) % poly.len()];
        let (ci, pi) = (inside(cur), inside(prev));
        if ci != pi {
            let fp = a.0 * prev.0 + a.1 * prev.1 - b;
            let fc = a.0 * cur.0 + a.1 * cur.1 - b;
            let s = fp / (fp - fc);
            out.push((prev.0 + s * (cur.0 - prev.0), prev.1 + s * (cur.1 - prev.1)));
        }
        if ci {
            out.push(*cur);
        }
    }
    out
}

fn clip_to_box(poly: Vec<Vertex>, x_max: f64, t_max: f64) -> Vec<Vertex> {
    let p = clip(&poly, (-1.0, 0.0), 0.0);
    let p = clip(&p, (1.0, 0.0), x_max);
    let p = clip(&p, (0.0, -1.0), 0.0);
    clip(&p, (0.0, 1.0), t_max)
}

fn area(poly: &[Vertex]) -> f64 {
    let n = poly.len();
    0.5 * (0..n)
        .map(|k| {
            let (p, q) = (poly[k], poly[(k + 1) % n]);
            p.0 * q.1 - q.0 * p.1
        })
        .sum::<f64>()
}

fn segment_distance(p: Vertex, a: Vertex, b: Vertex) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let s = if len2 > 0.0 {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p.0 - a.0 - s * dx).hypot(p.1 - a.1 - s * dy)
}

/// Distance from `p` to a closed counter-clockwise convex polygon.
fn polygon_distance(poly: &[Vertex], p: Vertex) -> f64 {
    let n = poly.len();
    let inside = (0..n).all(|k| {
        let (a, b) = (poly[k], poly[(k + 1) % n]);
        (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0) >= 0.0
    });
    if inside {
        return 0.0;
    }
    (0..n)
        .map(|k| segment_distance(p, poly[k], poly[(k + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

/// How the distance to `O_a` is evaluated for a given potential.
enum DistanceModel {
    Everywhere,
    /// Slab polygon in the `(x₁, t)` plane.
    Slab(Vec<Vertex>),
    /// Disk polygon in the `(|x − c|, t)` plane.
    Disk([f64; 2], Vec<Vertex>),
    NearestSample,
}

impl DistanceModel {
    fn new(spec: &PotentialSpec, grid: &Grid, time: &TimeGrid) -> Result<Self> {
        let horizon = time.horizon();
        let slab = |c: f64, r0: f64, rate: f64| -> Result<Self> {
            let r1 = r0 + rate * horizon;
            let poly = clip_to_box(
                vec![
                    (c - r0, 0.0),
                    (c + r0, 0.0),
                    (c + r1, horizon),
                    (c - r1, horizon),
                ],
                grid.extents()[0],
                horizon,
            );
            if poly.len() < 3 || area(&poly) <= 0.0 {
                return Err(Error::geometry("the vanishing set O_a is empty"));
            }
            Ok(DistanceModel::Slab(poly))
        };
        match spec {
            PotentialSpec::Zero {} => Ok(DistanceModel::Everywhere),
            PotentialSpec::CylindricalSlab {
                center, half_width, ..
            } => slab(*center, *half_width, 0.0),
            PotentialSpec::ExpandingSlab {
                center, r0, rate, ..
            }
            | PotentialSpec::DistanceToSet {
                center, r0, rate, ..
            } => slab(*center, *r0, *rate),
            PotentialSpec::ExpandingDisk {
                center, r0, rate, ..
            } => {
                let r1 = r0 + rate * horizon;
                if r1 <= 0.0 {
                    return Err(Error::geometry("the vanishing set O_a is empty"));
                }
                let ext = grid.extents();
                let inside = (0..2).all(|j| center[j] - r1 >= 0.0 && center[j] + r1 <= ext[j]);
                if inside {
                    let poly = vec![(0.0, 0.0), (*r0, 0.0), (r1, horizon), (0.0, horizon)];
                    Ok(DistanceModel::Disk(*center, poly))
                } else {
                    Ok(DistanceModel::NearestSample)
                }
            }
            PotentialSpec::GridSampled(_) => Ok(DistanceModel::NearestSample),
        }
    }
}

/// Space-time distance from every `(x_i, t_k)` to `O_a`, layer-major.
pub(crate) fn distance_samples(
    spec: &PotentialSpec,
    grid: &Grid,
    time: &TimeGrid,
) -> Result<Vec<f64>> {
    let n = grid.len();
    let model = DistanceModel::new(spec, grid, time)?;
    let point = |i: usize| -> Point { grid.node(i) };
    let out = match model {
        DistanceModel::Everywhere => vec![0.0; n * (time.steps() + 1)],
        DistanceModel::Slab(poly) => time
            .times()
            .flat_map(|t| {
                let poly = &poly;
                (0..n).map(move |i| polygon_distance(poly, (point(i)[0], t)))
            })
            .collect(),
        DistanceModel::Disk(c, poly) => time
            .times()
            .flat_map(|t| {
                let poly = &poly;
                (0..n).map(move |i| {
                    let p = point(i);
                    polygon_distance(poly, ((p[0] - c[0]).hypot(p[1] - c[1]), t))
                })
            })
            .collect(),
        DistanceModel::NearestSample => nearest_sample_distances(spec, grid, time)?,
    };
    Ok(out)
}

fn nearest_sample_distances(
    spec: &PotentialSpec,
    grid: &Grid,
    time: &TimeGrid,
) -> Result<Vec<f64>> {
    let n = grid.len();
    let levels: Vec<(f64, Vec<Point>)> = time
        .times()
        .map(|t| {
            let mask = active_mask(spec, grid, t);
            let pts = (0..n).filter(|&i| mask[i]).map(|i| grid.node(i)).collect();
            (t, pts)
        })
        .collect();
    if levels.iter().all(|(_, pts)| pts.is_empty()) {
        return Err(Error::geometry("the vanishing set O_a has no grid samples"));
    }
    let mut out = Vec::with_capacity(n * levels.len());
    for (t, _) in &levels {
        // visit levels by increasing time separation so the search can stop early
        let mut order: Vec<usize> = (0..levels.len()).collect();
        order.sort_by(|&a, &b| (levels[a].0 - t).abs().total_cmp(&(levels[b].0 - t).abs()));
        for i in 0..n {
            let p = grid.node(i);
            let mut best = f64::INFINITY;
            for &kk in &order {
                let dt = (levels[kk].0 - t).abs();
                if dt >= best {
                    break;
                }
                for q in &levels[kk].1 {
                    let dx = (p[0] - q[0]).hypot(p[1] - q[1]);
                    best = best.min(dx.hypot(dt));
                }
            }
            out.push(best);
        }
    }
    Ok(out)
}

/// The ε-dependent objects of the decay estimates, sampled on the
/// space-time grid `(x_i, t_k)`, `k = 0..=m`.
///
/// `A_{κε}` is the set of samples at distance strictly greater than `κ ε`
/// from `O_a`. The cutoff is `η = clamp((d − ε)/ε, 0, 1)` and the weight is
/// `ρ = √(δ/2) · (d − 2ε)₊`, `d` being the distance to `O_a`.
#[derive(Debug, Clone)]
pub struct DecayGeometry {
    epsilon: f64,
    grid: Arc<Grid>,
    time: TimeGrid,
    distance: Vec<f64>,
    delta: f64,
    c_eps: f64,
}

/// Builds the decay geometry of `spec` at scale `epsilon`.
pub fn build_decay_geometry(
    spec: &PotentialSpec,
    grid: &Arc<Grid>,
    time: &TimeGrid,
    epsilon: f64,
) -> Result<DecayGeometry> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::config(format!("epsilon {epsilon} must be positive")));
    }
    let distance = distance_samples(spec, grid, time)?;
    if !distance.iter().any(|&d| d > 2.0 * epsilon) {
        return Err(Error::geometry(format!(
            "A_2ε is empty for ε = {epsilon}; use a smaller ε or a finer grid"
        )));
    }
    let n = grid.len();
    let min_a_beyond = |threshold: f64| -> f64 {
        time.times()
            .enumerate()
            .flat_map(|(k, t)| {
                let distance = &distance;
                (0..n)
                    .filter(move |&i| distance[k * n + i] > threshold)
                    .map(move |i| spec.value(&grid.node(i), t))
            })
            .fold(f64::INFINITY, f64::min)
    };
    let delta = min_a_beyond(epsilon);
    if !(delta > 0.0) {
        return Err(Error::geometry(format!(
            "the potential vanishes inside A_ε (δ = {delta}); O_a misses part of the zero set"
        )));
    }
    let c_eps = epsilon * min_a_beyond(0.5 * epsilon);
    Ok(DecayGeometry {
        epsilon,
        grid: grid.clone(),
        time: *time,
        distance,
        delta,
        c_eps,
    })
}

impl DecayGeometry {
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn time_grid(&self) -> &TimeGrid {
        &self.time
    }

    /// `δ = min a` over the samples of `A_ε`.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `c_ε = ε · min a` over the samples of `A_{ε/2}`.
    pub fn c_eps(&self) -> f64 {
        self.c_eps
    }

    fn at(&self, k: usize, i: usize) -> usize {
        k * self.grid.len() + i
    }

    /// Distance from `(x_i, t_k)` to `O_a`.
    pub fn distance(&self, k: usize, i: usize) -> f64 {
        self.distance[self.at(k, i)]
    }

    /// Whether `(x_i, t_k)` lies in `A_{κε}` for `κ = multiple`.
    pub fn in_region(&self, multiple: f64, k: usize, i: usize) -> bool {
        self.distance(k, i) > multiple * self.epsilon
    }

    /// Layer-major mask of `A_{κε}`.
    pub fn mask(&self, multiple: f64) -> Vec<bool> {
        self.distance
            .iter()
            .map(|&d| d > multiple * self.epsilon)
            .collect()
    }

    pub fn eta(&self, k: usize, i: usize) -> f64 {
        cutoff(self.distance(k, i), self.epsilon)
    }

    pub fn rho(&self, k: usize, i: usize) -> f64 {
        (0.5 * self.delta).sqrt() * (self.distance(k, i) - 2.0 * self.epsilon).max(0.0)
    }

    /// Largest sampled `|∇η| + |∂_t η|` over forward difference quotients.
    pub fn eta_slope_max(&self) -> f64 {
        self.slope_max(
            |g, k, i| g.eta(k, i),
            |grad_sq, dt_abs| grad_sq.sqrt() + dt_abs,
        )
    }

    /// Largest sampled `|∂_t ρ| + |∇ρ|²` over forward difference quotients.
    pub fn rho_slope_max(&self) -> f64 {
        self.slope_max(|g, k, i| g.rho(k, i), |grad_sq, dt_abs| grad_sq + dt_abs)
    }

    fn slope_max(
        &self,
        value: impl Fn(&Self, usize, usize) -> f64,
        combine: impl Fn(f64, f64) -> f64,
    ) -> f64 {
        let g = &self.grid;
        let dt = self.time.dt();
        let mut worst: f64 = 0.0;
        for k in 0..=self.time.steps() {
            for i in 0..g.len() {
                let v = value(self, k, i);
                let idx = g.multi_index(i);
                let mut grad_sq = 0.0;
                for axis in 0..g.dim() {
                    if idx[axis] + 1 < g.counts()[axis] {
                        let mut m = idx;
                        m[axis] += 1;
                        let q = (value(self, k, g.flat_index(m)) - v) / g.spacings()[axis];
                        grad_sq += q * q;
                    }
                }
                let dt_abs = if k < self.time.steps() {
                    ((value(self, k + 1, i) - v) / dt).abs()
                } else {
                    0.0
                };
                worst = worst.max(combine(grad_sq, dt_abs));
            }
        }
        worst
    }
}

/// The stationary analogue of [`DecayGeometry`]: spatial distance to the
/// open slice `Ω_a(at_time)`, `Ω_ε = {d > ε}`, `δ = min a` over `Ω_ε`.
#[derive(Debug, Clone)]
pub struct StationaryGeometry {
    epsilon: f64,
    grid: Arc<Grid>,
    distance: Vec<f64>,
    delta: f64,
}

pub fn build_stationary_geometry(
    spec: &PotentialSpec,
    grid: &Arc<Grid>,
    at_time: f64,
    epsilon: f64,
) -> Result<StationaryGeometry> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::config(format!("epsilon {epsilon} must be positive")));
    }
    let mask = active_mask(spec, grid, at_time);
    let closed_form = match spec {
        PotentialSpec::ExpandingDisk {
            center, r0, rate, ..
        } => {
            let r = r0 + rate * at_time;
            let ext = grid.extents();
            (0..2).all(|j| center[j] - r >= 0.0 && center[j] + r <= ext[j])
        }
        PotentialSpec::GridSampled(_) => false,
        _ => true,
    };
    let distance: Vec<f64> = match spec {
        PotentialSpec::Zero {} => vec![0.0; grid.len()],
        _ if closed_form => {
            if !mask.iter().any(|&on| on) {
                return Err(Error::geometry(
                    "the vanishing set has no interior grid node",
                ));
            }
            grid.nodes()
                .map(|p| spec.margin(&p, at_time).expect("analytic family").max(0.0))
                .collect()
        }
        _ => {
            let active: Vec<Point> = (0..grid.len())
                .filter(|&i| mask[i])
                .map(|i| grid.node(i))
                .collect();
            if active.is_empty() {
                return Err(Error::geometry(
                    "the vanishing set has no interior grid node",
                ));
            }
            grid.nodes()
                .map(|p| {
                    active
                        .iter()
                        .map(|q| (p[0] - q[0]).hypot(p[1] - q[1]))
                        .fold(f64::INFINITY, f64::min)
                })
                .collect()
        }
    };
    if !distance.iter().any(|&d| d > 2.0 * epsilon) {
        return Err(Error::geometry(format!(
            "Ω_2ε is empty for ε = {epsilon}; use a smaller ε or a finer grid"
        )));
    }
    let delta = grid
        .nodes()
        .zip(&distance)
        .filter(|(_, &d)| d > epsilon)
        .map(|(p, _)| spec.value(&p, at_time))
        .fold(f64::INFINITY, f64::min);
    if !(delta > 0.0) {
        return Err(Error::geometry(format!(
            "the potential vanishes inside Ω_ε (δ = {delta})"
        )));
    }
    Ok(StationaryGeometry {
        epsilon,
        grid: grid.clone(),
        distance,
        delta,
    })
}

impl StationaryGeometry {
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn distance(&self, i: usize) -> f64 {
        self.distance[i]
    }

    pub fn mask(&self, multiple: f64) -> Vec<bool> {
        self.distance
            .iter()
            .map(|&d| d > multiple * self.epsilon)
            .collect()
    }

    pub fn eta(&self, i: usize) -> f64 {
        cutoff(self.distance[i], self.epsilon)
    }

    pub fn rho(&self, i: usize) -> f64 {
        (0.5 * self.delta).sqrt() * (self.distance[i] - 2.0 * self.epsilon).max(0.0)
    }
}

fn cutoff(d: f64, e: f64) -> f64 {
    if d > 2.0 * e {
        1.0
    } else if d <= e {
        0.0
    } else {
        ((d - e) / e).clamp(0.0, 1.0)
    }
}
