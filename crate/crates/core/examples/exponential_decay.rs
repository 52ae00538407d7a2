//! Exponential smallness of u_λ on A_3ε as λ grows, with the weighted integral.

use std::sync::Arc;

use degenheat::diagnostics::decay_sweep;
use degenheat::{Grid, PotentialSpec, ProblemSpec, Profile, Shape, Source, TimeGrid};

fn main() -> degenheat::Result<()> {
    let grid = Arc::new(Grid::new(&[1.0], &[399])?);
    let a = PotentialSpec::CylindricalSlab {
        center: 0.5,
        half_width: 0.1,
        amplitude: 1.0,
        profile: Profile::Ramp,
    };
    let g = Source::restricted(Shape::Bump {
        center: vec![0.5],
        width: 0.1,
        amplitude: 1.0,
    });
    let p = ProblemSpec::new(grid, TimeGrid::new(1.0, 400)?, a)
        .with_initial(g)
        .with_cg_tol(1e-12);
    let lambdas: Vec<f64> = (1..=8).map(|j| 4f64.powi(j)).collect();
    let out = decay_sweep(&p, &lambdas, 0.1)?;
    println!("delta = {:.4}, c_eps = {:.4e}", out.delta, out.c_eps);
    for (r, i3) in out.report.rows.iter().zip(&out.i_3eps) {
        println!(
            "lambda = {:>6}: I_eps {:.3e}, I_3eps {:.3e}, W {:.3e}",
            r.lambda, r.i_eps, i3, r.w
        );
    }
    println!(
        "slope of ln I_3eps against sqrt(lambda): {:.4} (rate from the weight: {:.4})",
        out.report.slope,
        -out.predicted_rate()
    );
    Ok(())
}
