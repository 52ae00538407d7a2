//! Shared reference problems and a dense oracle of the time stepping scheme.
#![allow(dead_code)]

use std::sync::Arc;

use degenheat::{Grid, PotentialSpec, ProblemSpec, Profile, Shape, Source, TimeGrid};

/// Expanding slab `(0.5 − 0.2 − 0.1t, 0.5 + 0.2 + 0.1t)` on `(0, 1)`, `T = 1`,
/// with `g = f` a bump centered in the slab.
pub fn expanding_reference(n: usize, m: usize, amplitude: f64) -> ProblemSpec {
    let grid = Arc::new(Grid::new(&[1.0], &[n]).unwrap());
    let a = PotentialSpec::ExpandingSlab {
        center: 0.5,
        r0: 0.2,
        rate: 0.1,
        amplitude,
        profile: Profile::Ramp,
    };
    let bump = Source::bump(&[0.5], 0.2, 1.0);
    ProblemSpec::new(grid, TimeGrid::new(1.0, m).unwrap(), a)
        .with_initial(bump.clone())
        .with_forcing(bump)
}

/// Static slab `(0.4, 0.6)`, ramp profile, `f = 0`, `g` a bump inside the slab.
pub fn decay_reference(n: usize, m: usize) -> ProblemSpec {
    let grid = Arc::new(Grid::new(&[1.0], &[n]).unwrap());
    let a = PotentialSpec::CylindricalSlab {
        center: 0.5,
        half_width: 0.1,
        amplitude: 1.0,
        profile: Profile::Ramp,
    };
    ProblemSpec::new(grid, TimeGrid::new(1.0, m).unwrap(), a)
        .with_initial(Source::restricted(Shape::Bump {
            center: vec![0.5],
            width: 0.1,
            amplitude: 1.0,
        }))
        .with_cg_tol(1e-12)
}

/// Gaussian elimination with partial pivoting; `a` is row-major `n × n`.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            let pivot_row = a[col].clone();
            for (x, p) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= factor * p;
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|c| a[row][c] * x[c]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// Dense `−Δ_h` built from node coordinates: neighbors are the nodes at
/// distance exactly one spacing along an axis.
pub fn dense_laplacian(grid: &Grid) -> Vec<Vec<f64>> {
    let n = grid.len();
    let h = grid.spacings().to_vec();
    let nodes: Vec<_> = grid.nodes().collect();
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n {
        for (d, hd) in h.iter().enumerate() {
            a[i][i] += 2.0 / (hd * hd);
            for j in 0..n {
                let same_other = (0..grid.dim())
                    .all(|e| e == d || (nodes[i][e] - nodes[j][e]).abs() < 1e-9 * hd);
                if same_other && ((nodes[i][d] - nodes[j][d]).abs() - hd).abs() < 1e-9 * hd {
                    a[i][j] -= 1.0 / (hd * hd);
                }
            }
        }
    }
    a
}

/// Backward Euler for the penalized problem with dense direct solves.
pub fn dense_penalized(p: &ProblemSpec) -> Vec<Vec<f64>> {
    let grid = &p.grid;
    let lap = dense_laplacian(grid);
    let dt = p.time.dt();
    let mut layers = vec![p.initial_values()];
    for k in 1..=p.time.steps() {
        let t = p.time.time(k);
        let mut m = lap.clone();
        let mut rhs = Vec::with_capacity(grid.len());
        let f = p.forcing_values(k);
        for (i, x) in grid.nodes().enumerate() {
            m[i][i] += 1.0 / dt + p.lambda * p.potential.value(&x, t);
            rhs.push(f[i] + layers[k - 1][i] / dt);
        }
        layers.push(dense_solve(m, rhs));
    }
    layers
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
