//! Potential families `a(x,t) ≥ 0`, their vanishing sets, and the
//! ε-geometry of the exponential decay estimates.
//!
//! The analytic families all vanish on an open space-time set `O_a` known in
//! closed form:
//!
//! * `cylindrical_slab`: `O_a = {|x₁ − c| < r} × (0,T)`;
//! * `expanding_slab`: `O_a = {|x₁ − c| < r₀ + ṙ t}`;
//! * `expanding_disk` (2D only): `O_a = {|x − c| < r₀ + ṙ t}`;
//! * `distance_to_set`: `a = A · dist((x,t), cl W)` for the expanding slab
//!   wedge `W = {|x₁ − c| < r₀ + ṙ t, t > 0}`.
//!
//! For the slab and disk families `a = A · φ(s)` with the signed margin
//! `s = |x − c| − r(t)` and either `φ(s) = max(s, 0)` (ramp, Lipschitz) or
//! `φ(s) = 1_{s>0}` (step). `grid_sampled` interpolates lattice samples.

mod geometry;
mod sampled;

use serde::{Deserialize, Serialize};

pub use geometry::{
    build_decay_geometry, build_stationary_geometry, DecayGeometry, StationaryGeometry,
};
pub use sampled::SampledPotential;

use crate::error::{Error, Result};
use crate::grid::{Grid, Point, TimeGrid};

/// Threshold below which a sampled potential counts as vanishing.
pub const SAMPLED_ZERO: f64 = 1e-14;

/// Shape of an analytic potential outside its vanishing set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// Grows linearly with the distance margin.
    #[default]
    Ramp,
    /// Jumps to the amplitude at the edge of the vanishing set.
    Step,
}

fn unit() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    /// `a ≡ 0`.
    Zero {},
    CylindricalSlab {
        center: f64,
        half_width: f64,
        #[serde(default = "unit")]
        amplitude: f64,
        #[serde(default)]
        profile: Profile,
    },
    ExpandingSlab {
        center: f64,
        r0: f64,
        rate: f64,
        #[serde(default = "unit")]
        amplitude: f64,
        #[serde(default)]
        profile: Profile,
    },
    ExpandingDisk {
        center: [f64; 2],
        r0: f64,
        rate: f64,
        #[serde(default = "unit")]
        amplitude: f64,
        #[serde(default)]
        profile: Profile,
    },
    DistanceToSet {
        center: f64,
        r0: f64,
        rate: f64,
        #[serde(default = "unit")]
        amplitude: f64,
    },
    GridSampled(SampledPotential),
}

impl PotentialSpec {
    /// Checks parameter ranges and, for the disk, the dimension of `grid`.
    pub fn validate(&self, grid: &Grid) -> Result<()> {
        let non_negative = |name: &str, v: f64| {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::config(format!(
                    "potential parameter {name} = {v} must be non-negative"
                )))
            }
        };
        match self {
            PotentialSpec::Zero {} => Ok(()),
            PotentialSpec::CylindricalSlab {
                half_width,
                amplitude,
                center,
                ..
            } => {
                non_negative("half_width", *half_width)?;
                non_negative("amplitude", *amplitude)?;
                finite("center", *center)
            }
            PotentialSpec::ExpandingSlab {
                r0,
                rate,
                amplitude,
                center,
                ..
            }
            | PotentialSpec::DistanceToSet {
                r0,
                rate,
                amplitude,
                center,
            } => {
                non_negative("r0", *r0)?;
                non_negative("rate", *rate)?;
                non_negative("amplitude", *amplitude)?;
                finite("center", *center)
            }
            PotentialSpec::ExpandingDisk {
                r0,
                rate,
                amplitude,
                center,
                ..
            } => {
                if grid.dim() != 2 {
                    return Err(Error::config("expanding_disk needs a two-dimensional grid"));
                }
                non_negative("r0", *r0)?;
                non_negative("rate", *rate)?;
                non_negative("amplitude", *amplitude)?;
                finite("center", center[0])?;
                finite("center", center[1])
            }
            PotentialSpec::GridSampled(s) => {
                s.validate()?;
                if s.axes.len() != grid.dim() {
                    return Err(Error::config(
                        "sampled potential dimension does not match the grid",
                    ));
                }
                Ok(())
            }
        }
    }

    /// Whether `∂_t a ≤ 0` holds. Analytic families only expand their
    /// vanishing set; sampled potentials carry a verified declaration.
    pub fn monotone(&self) -> bool {
        match self {
            PotentialSpec::GridSampled(s) => s.monotone,
            _ => true,
        }
    }

    /// Lipschitz constant in the space-time Euclidean metric
    /// (`f64::INFINITY` for step profiles).
    pub fn lipschitz(&self) -> f64 {
        match self {
            PotentialSpec::Zero {} => 0.0,
            PotentialSpec::CylindricalSlab {
                amplitude, profile, ..
            } => profile_lipschitz(*profile, *amplitude, 1.0),
            PotentialSpec::ExpandingSlab {
                rate,
                amplitude,
                profile,
                ..
            }
            | PotentialSpec::ExpandingDisk {
                rate,
                amplitude,
                profile,
                ..
            } => profile_lipschitz(*profile, *amplitude, (1.0 + rate * rate).sqrt()),
            PotentialSpec::DistanceToSet { amplitude, .. } => *amplitude,
            PotentialSpec::GridSampled(s) => s.lipschitz(),
        }
    }

    /// Signed margin `|x − c| − r(t)` of the analytic families; negative
    /// exactly inside the open vanishing set.
    fn margin(&self, x: &Point, t: f64) -> Option<f64> {
        match self {
            PotentialSpec::CylindricalSlab {
                center, half_width, ..
            } => Some((x[0] - center).abs() - half_width),
            PotentialSpec::ExpandingSlab {
                center, r0, rate, ..
            }
            | PotentialSpec::DistanceToSet {
                center, r0, rate, ..
            } => Some((x[0] - center).abs() - (r0 + rate * t)),
            PotentialSpec::ExpandingDisk {
                center, r0, rate, ..
            } => Some((x[0] - center[0]).hypot(x[1] - center[1]) - (r0 + rate * t)),
            PotentialSpec::Zero {} | PotentialSpec::GridSampled(_) => None,
        }
    }

    /// `a(x,t)` without domain checks.
    pub fn value(&self, x: &Point, t: f64) -> f64 {
        match self {
            PotentialSpec::Zero {} => 0.0,
            PotentialSpec::CylindricalSlab {
                amplitude, profile, ..
            }
            | PotentialSpec::ExpandingSlab {
                amplitude, profile, ..
            }
            | PotentialSpec::ExpandingDisk {
                amplitude, profile, ..
            } => {
                let s = self.margin(x, t).expect("analytic family");
                amplitude
                    * match profile {
                        Profile::Ramp => s.max(0.0),
                        Profile::Step => {
                            if s > 0.0 {
                                1.0
                            } else {
                                0.0
                            }
                        }
                    }
            }
            PotentialSpec::DistanceToSet {
                center,
                r0,
                rate,
                amplitude,
            } => {
                // the wedge is not clipped at t = T or at the domain faces
                let s = (x[0] - center).abs() - (r0 + rate * t);
                if s <= 0.0 {
                    0.0
                } else {
                    amplitude * slab_wedge_distance(s, *rate)
                }
            }
            PotentialSpec::GridSampled(s) => s.value(x, t),
        }
    }

    /// Potential sampled at every node of `grid` at time `t`.
    pub fn sample(&self, grid: &Grid, t: f64) -> Vec<f64> {
        grid.nodes().map(|p| self.value(&p, t)).collect()
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, PotentialSpec::Zero {})
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::config(format!(
            "potential parameter {name} must be finite"
        )))
    }
}

fn profile_lipschitz(profile: Profile, amplitude: f64, slope: f64) -> f64 {
    match profile {
        Profile::Ramp => amplitude * slope,
        Profile::Step if amplitude == 0.0 => 0.0,
        Profile::Step => f64::INFINITY,
    }
}

/// Space-time distance from a point at margin `s > 0` to the half-wedge
/// `{|x − c| ≤ r₀ + ṙ τ, τ ≥ 0}`, which is the distance to its slanted edge.
fn slab_wedge_distance(s: f64, rate: f64) -> f64 {
    s / (1.0 + rate * rate).sqrt()
}

/// `a(x,t)` with the point checked against `cl Ω × [0,T]`.
pub fn eval_potential(
    spec: &PotentialSpec,
    grid: &Grid,
    time: &TimeGrid,
    x: &Point,
    t: f64,
) -> Result<f64> {
    if !grid.contains(x) {
        return Err(Error::usage(format!(
            "point {:?} lies outside the closed domain",
            &x[..grid.dim()]
        )));
    }
    if !(t >= 0.0 && t <= time.horizon()) {
        return Err(Error::usage(format!(
            "time {t} lies outside [0, {}]",
            time.horizon()
        )));
    }
    Ok(spec.value(x, t))
}

/// Nodes of `grid` inside the open vanishing slice `Ω_a(t)`.
pub fn active_mask(spec: &PotentialSpec, grid: &Grid, t: f64) -> Vec<bool> {
    match spec {
        PotentialSpec::Zero {} => vec![true; grid.len()],
        PotentialSpec::GridSampled(s) => {
            let values: Vec<f64> = grid.nodes().map(|p| s.value(&p, t)).collect();
            (0..grid.len())
                .map(|i| {
                    values[i] < SAMPLED_ZERO && grid.neighbors(i).all(|j| values[j] < SAMPLED_ZERO)
                })
                .collect()
        }
        _ => grid
            .nodes()
            .map(|p| spec.margin(&p, t).expect("analytic family") < 0.0)
            .collect(),
    }
}
