//! Stationary penalization: u_λ approaches the Dirichlet solution on K_a = (0.3, 0.7).

use std::sync::Arc;

use degenheat::stationary::{alpha, stationary_penalization_mass};
use degenheat::{
    discrete_norm, solve_stationary_limit, solve_stationary_penalized, stationary_energy, Grid,
    NormKind, PotentialSpec, Profile, Source, StationarySpec,
};

fn main() -> degenheat::Result<()> {
    let grid = Arc::new(Grid::new(&[1.0], &[99])?);
    let a = PotentialSpec::CylindricalSlab {
        center: 0.5,
        half_width: 0.2,
        amplitude: 1.0,
        profile: Profile::Step,
    };
    let s = StationarySpec::new(grid.clone(), a).with_forcing(Source::constant(1.0));
    let limit = solve_stationary_limit(&s)?;
    let mid = grid.interpolate(limit.values(), &[0.5, 0.0]);
    println!("limit u(0.5) = {mid:.6} (exact 0.02)");
    for lambda in [1.0, 10.0, 100.0, 1e3, 1e6] {
        let q = s.clone().with_lambda(lambda);
        let u = solve_stationary_penalized(&q)?;
        let err = discrete_norm(&u.sub(&limit)?, NormKind::H1Semi)?;
        let (energy, _) = stationary_energy(&q, &u)?;
        println!(
            "lambda = {lambda:>7.0e}: alpha {:.6e}, energy {energy:.6e}, |u - u_inf|_H1 {err:.3e}, mass {:.3e}",
            alpha(&q)?,
            stationary_penalization_mass(&q, &u)?
        );
    }
    Ok(())
}
