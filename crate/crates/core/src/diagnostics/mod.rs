//! Verification of the energy, convergence and decay estimates on computed
//! solutions, plus CSV serialization of the resulting reports.

mod decay;
mod energy;
mod pairing;
pub mod report;
mod sweep;

pub use decay::{
    decay_sweep, weighted_decay_integral, weighted_decay_integral_stationary, DecayOutcome,
    DecayReport, DecayRow,
};
pub use energy::{
    check_energy_bounds, data_norms, penalization_mass, BoundRecord, DataNorms, EnergyOptions,
    EnergyReport, TrajectoryKind, DEFAULT_TOL_DISC,
};
pub use pairing::{distributional_pairing, distributional_pairing_parabolic, Pairing};
pub use sweep::{convergence_sweep, SweepOutcome, SweepReport, SweepRow};

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Environment variable capping the worker count of λ sweeps.
pub const THREADS_ENV: &str = "DEGENHEAT_THREADS";

/// Worker count requested through [`THREADS_ENV`], if any.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::config(format!(
                "{THREADS_ENV}={raw:?} is not a positive integer"
            ))),
        },
    }
}

/// Maps `f` over `lambdas` in parallel, keeping input order.
pub(crate) fn map_lambdas<T: Send>(
    lambdas: &[f64],
    f: impl Fn(f64) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    let run = || {
        lambdas
            .par_iter()
            .map(|&l| f(l))
            .collect::<Result<Vec<T>>>()
    };
    match thread_cap()? {
        None => run(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::config(format!("cannot start {n} worker threads: {e}")))?
            .install(run),
    }
}

/// Sorted copy of a λ list; rejects negative, non-finite and repeated values.
pub(crate) fn sorted_lambdas(lambdas: &[f64]) -> Result<Vec<f64>> {
    if let Some(l) = lambdas.iter().find(|l| !(**l >= 0.0) || !l.is_finite()) {
        return Err(Error::config(format!(
            "lambda {l} must be finite and non-negative"
        )));
    }
    let mut sorted = lambdas.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::config("lambda list contains a repeated value"));
    }
    Ok(sorted)
}
