//! Finite-difference solvers and diagnostics for the heat equation with a
//! large degenerate absorption term `λ a(x, t) u`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod grid;
pub mod linalg;
pub mod parabolic;
pub mod potential;
pub mod source;
pub mod stationary;

pub use error::{Error, Result};
pub use grid::{
    assemble_dirichlet_laplacian, build_grid, discrete_norm, Field, Grid, NormKind, Normed,
    TimeGrid, Trajectory,
};
pub use parabolic::{solve_limit, solve_penalized, ProblemSpec};
pub use potential::{PotentialSpec, Profile};
pub use source::{Shape, Source};
pub use stationary::{
    solve_stationary_limit, solve_stationary_penalized, stationary_energy, StationarySpec,
};
