//! Strong convergence of u_λ to the limit over a decade sweep, in parallel.
//! Set DEGENHEAT_THREADS to cap the worker pool.

use std::sync::Arc;

use degenheat::diagnostics::convergence_sweep;
use degenheat::{Grid, PotentialSpec, ProblemSpec, Source, TimeGrid};

fn main() -> degenheat::Result<()> {
    let grid = Arc::new(Grid::new(&[1.0], &[199])?);
    let a = PotentialSpec::ExpandingSlab {
        center: 0.5,
        r0: 0.2,
        rate: 0.1,
        amplitude: 1000.0,
        profile: Default::default(),
    };
    let bump = Source::bump(&[0.5], 0.2, 1.0);
    let p = ProblemSpec::new(grid, TimeGrid::new(1.0, 400)?, a)
        .with_initial(bump.clone())
        .with_forcing(bump);
    let out = convergence_sweep(&p, &[1e2, 1e3, 1e4, 1e5, 1e6])?;
    println!(
        "{:>8} {:>12} {:>12} {:>12}",
        "lambda", "err_l2h1", "err_supl2", "pen_mass"
    );
    for r in &out.report.rows {
        println!(
            "{:>8.0e} {:>12.4e} {:>12.4e} {:>12.4e}",
            r.lambda, r.err_l2h1, r.err_supl2, r.pen_mass
        );
    }
    println!(
        "monotone up to one 1% inversion: {}",
        out.report.decreasing_with(1, 0.01)
    );
    Ok(())
}
