//! Both a priori energy inequalities of a penalized run, and the one of the limit.

use std::sync::Arc;

use degenheat::diagnostics::{check_energy_bounds, EnergyOptions, TrajectoryKind};
use degenheat::{solve_limit, solve_penalized, Grid, PotentialSpec, ProblemSpec, Source, TimeGrid};

fn main() -> degenheat::Result<()> {
    let grid = Arc::new(Grid::new(&[1.0], &[199])?);
    let a = PotentialSpec::ExpandingSlab {
        center: 0.5,
        r0: 0.2,
        rate: 0.1,
        amplitude: 1.0,
        profile: Default::default(),
    };
    let bump = Source::bump(&[0.5], 0.2, 1.0);
    let p = ProblemSpec::new(grid, TimeGrid::new(1.0, 400)?, a)
        .with_initial(bump.clone())
        .with_forcing(bump);
    let opts = EnergyOptions {
        derbound: true,
        ..Default::default()
    };
    for lambda in [1e2, 1e4, 1e6] {
        let q = p.clone().with_lambda(lambda);
        let report = check_energy_bounds(&solve_penalized(&q)?, &q, &opts)?;
        for r in &report.records {
            println!(
                "lambda = {lambda:.0e} {:<18} {:.4e} <= {:.4e} (ratio {:.3})",
                r.name, r.lhs, r.rhs, r.ratio
            );
        }
    }
    let limit = check_energy_bounds(
        &solve_limit(&p)?,
        &p,
        &EnergyOptions {
            kind: TrajectoryKind::Limit,
            ..Default::default()
        },
    )?;
    let r = &limit.records[0];
    println!(
        "limit {:<18} {:.4e} <= {:.4e} (ratio {:.3})",
        r.name, r.lhs, r.rhs, r.ratio
    );
    Ok(())
}
