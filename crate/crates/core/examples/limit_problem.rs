//! The masked limit problem on an expanding slab, compared with large-λ runs.

use std::sync::Arc;

use degenheat::{
    discrete_norm, solve_limit, solve_penalized, Grid, NormKind, PotentialSpec, ProblemSpec,
    Source, TimeGrid,
};

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
    let p = ProblemSpec::new(grid, TimeGrid::new(1.0, 200)?, a)
        .with_initial(bump.clone())
        .with_forcing(bump);
    let limit = solve_limit(&p)?;
    println!(
        "limit: sup L2 = {:.4e}",
        discrete_norm(&limit, NormKind::SupL2)?
    );
    for lambda in [1e2, 1e4, 1e6] {
        let u = solve_penalized(&p.clone().with_lambda(lambda))?;
        let gap = discrete_norm(&u.sub(&limit)?, NormKind::L2H1Semi)?;
        println!("lambda = {lambda:.0e}: L2(H1) distance to the limit {gap:.4e}");
    }
    Ok(())
}
