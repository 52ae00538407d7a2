//! Plain heat flow (a ≡ 0) against the exact decaying sine mode.

use std::sync::Arc;

use degenheat::{
    discrete_norm, solve_penalized, Field, Grid, NormKind, PotentialSpec, ProblemSpec, Source,
    TimeGrid,
};

fn main() -> degenheat::Result<()> {
    let t = 0.1;
    for (n, m) in [(49, 100), (99, 200), (199, 400)] {
        let grid = Arc::new(Grid::new(&[1.0], &[n])?);
        let p = ProblemSpec::new(grid.clone(), TimeGrid::new(t, m)?, PotentialSpec::Zero {})
            .with_initial(Source::mode(&[1], 1.0));
        let u = solve_penalized(&p)?;
        let decay = (-std::f64::consts::PI.powi(2) * t).exp();
        let exact = Field::from_fn(grid, |x| decay * (std::f64::consts::PI * x[0]).sin())?;
        let err = discrete_norm(&u.last().sub(&exact)?, NormKind::L2)?;
        println!("n = {n:>3}, m = {m:>3}: final L2 error {err:.3e}");
    }
    Ok(())
}
