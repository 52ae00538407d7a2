//! Assembling the Dirichlet Laplacian and solving with preconditioned CG.

use degenheat::linalg::{cg_solve, DEFAULT_CG_TOL};
use degenheat::{assemble_dirichlet_laplacian, build_grid};

fn main() -> degenheat::Result<()> {
    let g = build_grid(&[1.0, 1.0], &[63, 63])?;
    let a = assemble_dirichlet_laplacian(&g);
    println!(
        "{} unknowns, {} nonzeros, symmetric: {}",
        a.dim(),
        a.nnz(),
        a.is_symmetric()
    );
    let pi = std::f64::consts::PI;
    let b: Vec<f64> = g
        .nodes()
        .map(|p| 2.0 * pi * pi * (pi * p[0]).sin() * (pi * p[1]).sin())
        .collect();
    let (u, stats) = cg_solve(&a, &b, DEFAULT_CG_TOL, 10 * a.dim()).expect("converges");
    let err = g
        .nodes()
        .zip(&u)
        .map(|(p, v)| (v - (pi * p[0]).sin() * (pi * p[1]).sin()).abs())
        .fold(0.0, f64::max);
    println!(
        "{} iterations, residual {:.1e}, max error against sin(pi x) sin(pi y): {err:.3e}",
        stats.iterations, stats.relative_residual
    );
    Ok(())
}
