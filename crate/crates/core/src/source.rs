//! Analytic families for the forcing `f` and the initial datum `g`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, Point};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Shape {
    Zero {},
    /// `amplitude · Π_j sin(k_j π x_j / L_j)`.
    Mode {
        k: Vec<u32>,
        amplitude: f64,
    },
    /// Smooth compactly supported bump `amplitude · exp(1 − 1/(1 − r²))`,
    /// `r = |x − center| / width`; its peak value is `amplitude`.
    Bump {
        center: Vec<f64>,
        width: f64,
        amplitude: f64,
    },
    Constant {
        value: f64,
    },
}

impl Default for Shape {
    fn default() -> Self {
        Shape::Zero {}
    }
}

/// A source term or initial datum.
///
/// With `inside_active` set the shape is multiplied by the indicator of the
/// active nodes: `Ω_a(t)` for a forcing at time `t`, `Ω_a(0)` for `g`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Source {
    #[serde(default)]
    pub shape: Shape,
    #[serde(default)]
    pub inside_active: bool,
}

impl Source {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(shape: Shape) -> Self {
        Self {
            shape,
            inside_active: false,
        }
    }

    pub fn restricted(shape: Shape) -> Self {
        Self {
            shape,
            inside_active: true,
        }
    }

    pub fn mode(k: &[u32], amplitude: f64) -> Self {
        Self::new(Shape::Mode {
            k: k.to_vec(),
            amplitude,
        })
    }

    pub fn bump(center: &[f64], width: f64, amplitude: f64) -> Self {
        Self::new(Shape::Bump {
            center: center.to_vec(),
            width,
            amplitude,
        })
    }

    pub fn constant(value: f64) -> Self {
        Self::new(Shape::Constant { value })
    }

    pub fn validate(&self, grid: &Grid) -> Result<()> {
        let dim = grid.dim();
        match &self.shape {
            Shape::Zero {} => Ok(()),
            Shape::Mode { k, amplitude } => {
                if k.len() != dim {
                    return Err(Error::config(format!(
                        "mode has {} wave numbers on a {dim}-dimensional grid",
                        k.len()
                    )));
                }
                if k.contains(&0) || !amplitude.is_finite() {
                    return Err(Error::config(
                        "mode wave numbers must be positive, amplitude finite",
                    ));
                }
                Ok(())
            }
            Shape::Bump {
                center,
                width,
                amplitude,
            } => {
                if center.len() != dim {
                    return Err(Error::config(format!(
                        "bump center has {} coordinates on a {dim}-dimensional grid",
                        center.len()
                    )));
                }
                if !(*width > 0.0) || !width.is_finite() || !amplitude.is_finite() {
                    return Err(Error::config(
                        "bump width must be positive, amplitude finite",
                    ));
                }
                if center.iter().any(|c| !c.is_finite()) {
                    return Err(Error::config("bump center must be finite"));
                }
                Ok(())
            }
            Shape::Constant { value } => {
                if value.is_finite() {
                    Ok(())
                } else {
                    Err(Error::config("constant source must be finite"))
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.shape {
            Shape::Zero {} => true,
            Shape::Mode { amplitude, .. } | Shape::Bump { amplitude, .. } => *amplitude == 0.0,
            Shape::Constant { value } => *value == 0.0,
        }
    }

    /// The unrestricted shape at `x`.
    pub fn value(&self, grid: &Grid, x: &Point) -> f64 {
        match &self.shape {
            Shape::Zero {} => 0.0,
            Shape::Mode { k, amplitude } => {
                let ext = grid.extents();
                k.iter().enumerate().fold(*amplitude, |acc, (j, &kj)| {
                    acc * (kj as f64 * std::f64::consts::PI * x[j] / ext[j]).sin()
                })
            }
            Shape::Bump {
                center,
                width,
                amplitude,
            } => {
                let r2 = center
                    .iter()
                    .enumerate()
                    .map(|(j, c)| (x[j] - c).powi(2))
                    .sum::<f64>()
                    / (width * width);
                if r2 < 1.0 {
                    amplitude * (1.0 - 1.0 / (1.0 - r2)).exp()
                } else {
                    0.0
                }
            }
            Shape::Constant { value } => *value,
        }
    }

    /// Nodal values, zeroed off `active` when the source is restricted.
    pub fn sample(&self, grid: &Grid, active: Option<&[bool]>) -> Vec<f64> {
        grid.nodes()
            .enumerate()
            .map(|(i, p)| match active {
                Some(mask) if self.inside_active && !mask[i] => 0.0,
                _ => self.value(grid, &p),
            })
            .collect()
    }
}
