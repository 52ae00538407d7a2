mod common;

use std::sync::Arc;

use degenheat::diagnostics::{check_energy_bounds, EnergyOptions};
use degenheat::potential::build_decay_geometry;
use degenheat::{
    assemble_dirichlet_laplacian, build_grid, discrete_norm, solve_penalized, Field, Grid,
    NormKind, PotentialSpec, Profile, Source, TimeGrid,
};
use proptest::prelude::*;

fn field(grid: &Arc<Grid>, values: Vec<f64>) -> Field {
    Field::new(grid.clone(), values).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn laplacian_is_symmetric_and_positive(n in 1usize..12, m in 1usize..12, seed in prop::collection::vec(-1.0f64..1.0, 144)) {
        let g = build_grid(&[1.0, 0.7], &[n, m]).unwrap();
        let a = assemble_dirichlet_laplacian(&g);
        for i in 0..a.dim() {
            for (j, v) in a.row(i) {
                prop_assert_eq!(v.to_bits(), a.get(j, i).to_bits());
            }
        }
        let x = &seed[..g.len()];
        let norm: f64 = x.iter().map(|v| v * v).sum();
        prop_assume!(norm > 0.0);
        let ax = a.matvec(x);
        let q: f64 = x.iter().zip(&ax).map(|(u, v)| u * v).sum();
        prop_assert!(q > 0.0);
    }

    #[test]
    fn add_diagonal_shifts_the_product(n in 1usize..40, xs in prop::collection::vec(-1.0f64..1.0, 40), ds in prop::collection::vec(0.0f64..1e3, 40)) {
        let g = build_grid(&[2.0], &[n]).unwrap();
        let a = assemble_dirichlet_laplacian(&g);
        let (x, d) = (&xs[..n], &ds[..n]);
        let lhs = a.add_diagonal(d).unwrap().matvec(x);
        let ax = a.matvec(x);
        for i in 0..n {
            let expected = ax[i] + d[i] * x[i];
            prop_assert!((lhs[i] - expected).abs() <= 1e-12 * (1.0 + expected.abs()));
        }
    }

    #[test]
    fn l2_norm_is_homogeneous(values in prop::collection::vec(-10.0f64..10.0, 25), alpha in -100.0f64..100.0) {
        let grid = Arc::new(Grid::new(&[1.0, 1.0], &[5, 5]).unwrap());
        let u = field(&grid, values);
        let lhs = discrete_norm(&u.scaled(alpha), NormKind::L2).unwrap();
        let rhs = alpha.abs() * discrete_norm(&u, NormKind::L2).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-13 * rhs.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn triangle_inequality(a in prop::collection::vec(-5.0f64..5.0, 30), b in prop::collection::vec(-5.0f64..5.0, 30)) {
        let grid = Arc::new(Grid::new(&[1.0], &[10]).unwrap());
        let time = TimeGrid::new(1.0, 2).unwrap();
        let fa: Vec<Field> = a.chunks(10).map(|c| field(&grid, c.to_vec())).collect();
        let fb: Vec<Field> = b.chunks(10).map(|c| field(&grid, c.to_vec())).collect();
        let sum: Vec<Field> = fa.iter().zip(&fb).map(|(x, y)| x.sub(&y.scaled(-1.0)).unwrap()).collect();
        let n2 = |f: &Field| discrete_norm(f, NormKind::L2).unwrap();
        prop_assert!(n2(&sum[0]) <= n2(&fa[0]) + n2(&fb[0]) + 1e-12);
        let traj = |layers: Vec<Field>| degenheat::Trajectory::new(grid.clone(), time, layers).unwrap();
        let l2l2 = |t: &degenheat::Trajectory| discrete_norm(t, NormKind::L2L2).unwrap();
        let (ta, tb, ts) = (traj(fa), traj(fb), traj(sum));
        prop_assert!(l2l2(&ts) <= l2l2(&ta) + l2l2(&tb) + 1e-12);
    }

    #[test]
    fn solution_is_linear_in_the_data(ag in -2.0f64..2.0, cf in -2.0f64..2.0, lambda in 0.0f64..1e4) {
        let base = common::expanding_reference(15, 8, 1.0).with_lambda(lambda).with_cg_tol(1e-13);
        let only_g = base.clone().with_forcing(Source::zero());
        let only_f = base.clone().with_initial(Source::zero()).with_forcing(Source::constant(1.0));
        let both = base
            .clone()
            .with_initial(Source::bump(&[0.5], 0.2, ag))
            .with_forcing(Source::constant(cf));
        let (ug, uf, u) = (solve_penalized(&only_g).unwrap(), solve_penalized(&only_f).unwrap(), solve_penalized(&both).unwrap());
        for k in 0..=8 {
            let combo: Vec<f64> = ug.layer(k).values().iter().zip(uf.layer(k).values()).map(|(x, y)| ag * x + cf * y).collect();
            prop_assert!(common::max_abs_diff(u.layer(k).values(), &combo) < 1e-9);
        }
    }

    #[test]
    fn maximum_principle(lambda in 0.0f64..1e5, amp in 0.1f64..3.0, center in 0.2f64..0.8) {
        let p = common::expanding_reference(31, 10, 1.0)
            .with_lambda(lambda)
            .with_forcing(Source::zero())
            .with_initial(Source::bump(&[center], 0.15, amp))
            .with_cg_tol(1e-13);
        let u = solve_penalized(&p).unwrap();
        let top = p.initial_values().iter().cloned().fold(0.0, f64::max);
        for layer in u.layers() {
            for v in layer.values() {
                prop_assert!(*v >= -1e-10 && *v <= top + 1e-10);
            }
        }
    }

    #[test]
    fn first_energy_bound_holds_for_any_lambda(exp in 0.0f64..6.0, amp in 0.1f64..100.0) {
        let p = common::expanding_reference(31, 20, amp).with_lambda(10f64.powf(exp));
        let u = solve_penalized(&p).unwrap();
        let r = check_energy_bounds(&u, &p, &EnergyOptions::default()).unwrap();
        let b = r.get("bound2").unwrap();
        prop_assert!(b.lhs <= b.rhs, "{:?}", b);
    }

    #[test]
    fn cutoffs_respect_the_regions(eps in 0.02f64..0.1, rate in 0.0f64..0.3) {
        let grid = Arc::new(Grid::new(&[1.0], &[60]).unwrap());
        let time = TimeGrid::new(0.5, 10).unwrap();
        let a = PotentialSpec::ExpandingSlab { center: 0.5, r0: 0.1, rate, amplitude: 1.0, profile: Profile::Ramp };
        let geom = build_decay_geometry(&a, &grid, &time, eps).unwrap();
        let (m1, m2, m3) = (geom.mask(1.0), geom.mask(2.0), geom.mask(3.0));
        for k in 0..=10 {
            for i in 0..grid.len() {
                let j = k * grid.len() + i;
                prop_assert!(m1[j] >= m2[j] && m2[j] >= m3[j]);
                let (eta, rho) = (geom.eta(k, i), geom.rho(k, i));
                prop_assert!((0.0..=1.0).contains(&eta) && rho >= 0.0);
                if !m1[j] { prop_assert_eq!(eta, 0.0); }
                if !m2[j] { prop_assert_eq!(rho, 0.0); } else { prop_assert_eq!(eta, 1.0); }
            }
        }
        let wider = build_decay_geometry(&a, &grid, &time, 1.3 * eps).unwrap();
        for (small, large) in m1.iter().zip(wider.mask(1.0)) {
            prop_assert!(*small >= large);
        }
    }
}

#[test]
fn smallest_eigenvalue_of_the_1d_laplacian() {
    let g = build_grid(&[1.0], &[63]).unwrap();
    let h = g.spacings()[0];
    let a = assemble_dirichlet_laplacian(&g);
    let v: Vec<f64> = g
        .nodes()
        .map(|p| (std::f64::consts::PI * p[0]).sin())
        .collect();
    let av = a.matvec(&v);
    let mu = (2.0 - 2.0 * (std::f64::consts::PI * h).cos()) / (h * h);
    for (x, y) in av.iter().zip(&v) {
        assert!((x - mu * y).abs() < 1e-10 * mu);
    }
}
