mod common;

use std::sync::Arc;

use degenheat::{
    solve_limit, solve_penalized, Grid, PotentialSpec, ProblemSpec, Profile, Source, TimeGrid,
};

#[test]
fn penalized_1d_matches_dense_elimination() {
    for lambda in [0.0, 1e3, 1e6] {
        let p = common::expanding_reference(15, 10, 1.0).with_lambda(lambda);
        let u = solve_penalized(&p).unwrap();
        let dense = common::dense_penalized(&p);
        for (k, layer) in dense.iter().enumerate() {
            let err = common::max_abs_diff(u.layer(k).values(), layer);
            assert!(err < 1e-10, "lambda {lambda}, layer {k}: {err:e}");
        }
    }
}

#[test]
fn penalized_2d_matches_dense_elimination() {
    let grid = Arc::new(Grid::new(&[1.0, 0.8], &[7, 5]).unwrap());
    let a = PotentialSpec::ExpandingDisk {
        center: [0.5, 0.4],
        r0: 0.2,
        rate: 0.2,
        amplitude: 2.0,
        profile: Profile::Step,
    };
    let p = ProblemSpec::new(grid, TimeGrid::new(0.5, 6).unwrap(), a)
        .with_initial(Source::bump(&[0.5, 0.4], 0.25, 1.0))
        .with_forcing(Source::mode(&[1, 2], 3.0))
        .with_lambda(500.0);
    let u = solve_penalized(&p).unwrap();
    for (k, layer) in common::dense_penalized(&p).iter().enumerate() {
        assert!(common::max_abs_diff(u.layer(k).values(), layer) < 1e-10);
    }
}

#[test]
fn limit_matches_dense_elimination_on_the_active_nodes() {
    let p = common::expanding_reference(21, 8, 1.0);
    let u = solve_limit(&p).unwrap();
    let grid = &p.grid;
    let dense_lap = common::dense_laplacian(grid);
    let dt = p.time.dt();
    let mut prev = p.initial_values();
    for k in 1..=p.time.steps() {
        let t = p.time.time(k);
        let active: Vec<usize> = grid
            .nodes()
            .enumerate()
            .filter(|(_, x)| p.potential.value(x, t) == 0.0)
            .map(|(i, _)| i)
            .collect();
        let f = p.forcing_values(k);
        let m: Vec<Vec<f64>> = active
            .iter()
            .map(|&i| {
                active
                    .iter()
                    .map(|&j| dense_lap[i][j] + if i == j { 1.0 / dt } else { 0.0 })
                    .collect()
            })
            .collect();
        let rhs: Vec<f64> = active.iter().map(|&i| f[i] + prev[i] / dt).collect();
        let sol = common::dense_solve(m, rhs);
        let mut next = vec![0.0; grid.len()];
        for (v, &i) in sol.iter().zip(&active) {
            next[i] = *v;
        }
        assert!(
            common::max_abs_diff(u.layer(k).values(), &next) < 1e-10,
            "layer {k}"
        );
        prev = next;
    }
}
