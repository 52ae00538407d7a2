use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Point;

/// A potential given by samples on a tensor lattice in space and time,
/// evaluated by multilinear interpolation (constant extension beyond the
/// lattice).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampledPotential {
    /// Strictly increasing sample coordinates, one list per space axis.
    pub axes: Vec<Vec<f64>>,
    /// Strictly increasing sample times; a single entry means the potential
    /// does not depend on time.
    pub times: Vec<f64>,
    /// Sample values, first space axis fastest, time slowest.
    pub values: Vec<f64>,
    /// Declared `∂_t a ≤ 0`; verified against the samples.
    #[serde(default)]
    pub monotone: bool,
}

impl SampledPotential {
    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::config(
                "sampled potential needs one or two space axes",
            ));
        }
        for axis in self.axes.iter().chain(std::iter::once(&self.times)) {
            if axis.is_empty() || axis.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(Error::config(
                    "sampled potential coordinates must be non-empty and strictly increasing",
                ));
            }
        }
        let expected: usize = self.axes.iter().map(Vec::len).product::<usize>() * self.times.len();
        if self.values.len() != expected {
            return Err(Error::config(format!(
                "sampled potential has {} values, lattice needs {expected}",
                self.values.len()
            )));
        }
        if self.values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::config(
                "sampled potential values must be finite and non-negative",
            ));
        }
        if self.monotone && !self.samples_monotone() {
            return Err(Error::config(
                "sampled potential is declared monotone but increases in time somewhere",
            ));
        }
        Ok(())
    }

    fn space_len(&self) -> usize {
        self.axes.iter().map(Vec::len).product()
    }

    fn samples_monotone(&self) -> bool {
        let s = self.space_len();
        (1..self.times.len())
            .all(|k| (0..s).all(|i| self.values[k * s + i] <= self.values[(k - 1) * s + i]))
    }

    /// Lipschitz bound of the interpolant in the space-time Euclidean metric.
    pub fn lipschitz(&self) -> f64 {
        let mut dims: Vec<&Vec<f64>> = self.axes.iter().collect();
        dims.push(&self.times);
        let shape: Vec<usize> = dims.iter().map(|a| a.len()).collect();
        let strides: Vec<usize> = shape
            .iter()
            .scan(1, |acc, &len| {
                let s = *acc;
                *acc *= len;
                Some(s)
            })
            .collect();
        let mut sum_sq = 0.0;
        for (d, coords) in dims.iter().enumerate() {
            let mut max_slope: f64 = 0.0;
            for flat in 0..self.values.len() {
                let idx = (flat / strides[d]) % shape[d];
                if idx + 1 < shape[d] {
                    let dv = self.values[flat + strides[d]] - self.values[flat];
                    max_slope = max_slope.max(dv.abs() / (coords[idx + 1] - coords[idx]));
                }
            }
            sum_sq += max_slope * max_slope;
        }
        sum_sq.sqrt()
    }

    pub fn value(&self, x: &Point, t: f64) -> f64 {
        let mut coords: Vec<(usize, f64)> = Vec::with_capacity(3);
        for (j, axis) in self.axes.iter().enumerate() {
            coords.push(locate(axis, x[j]));
        }
        coords.push(locate(&self.times, t));
        let mut dims: Vec<usize> = self.axes.iter().map(Vec::len).collect();
        dims.push(self.times.len());

        let corners = 1usize << coords.len();
        let mut acc = 0.0;
        for corner in 0..corners {
            let mut weight = 1.0;
            let mut flat = 0;
            let mut stride = 1;
            for (d, &(k, w)) in coords.iter().enumerate() {
                let upper = (corner >> d) & 1 == 1;
                let idx = if upper { (k + 1).min(dims[d] - 1) } else { k };
                weight *= if upper { w } else { 1.0 - w };
                flat += idx * stride;
                stride *= dims[d];
            }
            if weight != 0.0 {
                acc += weight * self.values[flat];
            }
        }
        acc
    }
}

/// Cell index and local weight of `s` in a sorted coordinate list, clamped.
fn locate(axis: &[f64], s: f64) -> (usize, f64) {
    if axis.len() == 1 || s <= axis[0] {
        return (0, 0.0);
    }
    let last = axis.len() - 1;
    if s >= axis[last] {
        return (last, 0.0);
    }
    let k = axis.partition_point(|&c| c <= s) - 1;
    (k, (s - axis[k]) / (axis[k + 1] - axis[k]))
}
