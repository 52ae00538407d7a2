//! The penalization term λ a u_λ tested against smooth functions.

use std::sync::Arc;

use degenheat::diagnostics::distributional_pairing;
use degenheat::{
    solve_stationary_penalized, Field, Grid, PotentialSpec, Profile, Source, StationarySpec,
};

fn main() -> degenheat::Result<()> {
    let grid = Arc::new(Grid::new(&[1.0], &[199])?);
    let a = PotentialSpec::CylindricalSlab {
        center: 0.5,
        half_width: 0.2,
        amplitude: 1.0,
        profile: Profile::Ramp,
    };
    let s = StationarySpec::new(grid.clone(), a).with_forcing(Source::constant(1.0));
    let smooth = Field::from_fn(grid.clone(), |x| (std::f64::consts::PI * x[0]).sin())?;
    let outside = Field::from_fn(grid, |x| {
        let r = (x[0] - 0.15) / 0.1;
        if r.abs() < 1.0 {
            (1.0 - 1.0 / (1.0 - r * r)).exp()
        } else {
            0.0
        }
    })?;
    for lambda in [1e2, 1e4, 1e6] {
        let q = s.clone().with_lambda(lambda);
        let u = solve_stationary_penalized(&q)?;
        let p = distributional_pairing(&u, &q, &smooth)?;
        let o = distributional_pairing(&u, &q, &outside)?;
        println!(
            "lambda = {lambda:.0e}: <lambda a u, sin> = {:.6e} (gap {:.1e}), against exterior bump {:.3e}",
            p.pairing,
            p.relative_gap(),
            o.pairing
        );
    }
    Ok(())
}
