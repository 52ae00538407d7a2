//! Pairings of the penalization term `λ a u_λ` with fixed test functions.

use crate::error::{Error, Result};
use crate::grid::{same_grid, Field, Trajectory};
use crate::parabolic::ProblemSpec;
use crate::stationary::StationarySpec;

/// `⟨λ a u, φ⟩` and the value the discrete equation assigns to it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pairing {
    /// `⟨λ a u, φ⟩` by quadrature.
    pub pairing: f64,
    /// `⟨f, φ⟩ − ⟨∇u, ∇φ⟩ [− ⟨u', φ⟩]`.
    pub identity: f64,
    /// Sum of the magnitudes of the terms making up `identity`.
    pub scale: f64,
}

impl Pairing {
    /// `|pairing − identity| / scale`, zero when everything vanishes.
    pub fn relative_gap(&self) -> f64 {
        let gap = (self.pairing - self.identity).abs();
        if gap == 0.0 {
            0.0
        } else {
            gap / self.scale
        }
    }
}

/// Stationary pairing. Boundary values of `φ` are zero by construction.
pub fn distributional_pairing(u: &Field, s: &StationarySpec, phi: &Field) -> Result<Pairing> {
    same_grid(u.grid(), &s.grid)?;
    same_grid(phi.grid(), &s.grid)?;
    let g = &s.grid;
    let a = s.potential_values();
    let h = g.cell_volume();
    let pairing = s.lambda
        * h
        * a.iter()
            .zip(u.values())
            .zip(phi.values())
            .fold(0.0, |acc, ((ai, ui), pi)| acc + ai * ui * pi);
    let f_phi = g.inner(&s.forcing_values(), phi.values());
    let grad = g.grad_inner(u.values(), phi.values());
    Ok(Pairing {
        pairing,
        identity: f_phi - grad,
        scale: f_phi.abs() + grad.abs(),
    })
}

/// Space-time pairing over the layers `k = 1..m`; `φ` must vanish on the
/// first and last layers.
pub fn distributional_pairing_parabolic(
    u: &Trajectory,
    p: &ProblemSpec,
    phi: &Trajectory,
) -> Result<Pairing> {
    same_grid(u.grid(), &p.grid)?;
    same_grid(phi.grid(), &p.grid)?;
    if *u.time_grid() != p.time || *phi.time_grid() != p.time {
        return Err(Error::usage("pairing inputs use different time grids"));
    }
    let m = p.time.steps();
    if phi.layer(0).max_abs() != 0.0 || phi.layer(m).max_abs() != 0.0 {
        return Err(Error::usage(
            "the test function must vanish at t = 0 and t = T",
        ));
    }
    let g = &p.grid;
    let h = g.cell_volume();
    let dt = p.time.dt();
    let (mut pairing, mut f_phi, mut grad, mut deriv) = (0.0, 0.0, 0.0, 0.0);
    for k in 1..=m {
        let a = p.potential.sample(g, p.time.time(k));
        let (uk, prev, pk) = (
            u.layer(k).values(),
            u.layer(k - 1).values(),
            phi.layer(k).values(),
        );
        pairing += dt
            * p.lambda
            * h
            * a.iter()
                .zip(uk)
                .zip(pk)
                .fold(0.0, |acc, ((ai, ui), pi)| acc + ai * ui * pi);
        f_phi += dt * g.inner(&p.forcing_values(k), pk);
        grad += dt * g.grad_inner(uk, pk);
        let du: Vec<f64> = uk.iter().zip(prev).map(|(a, b)| (a - b) / dt).collect();
        deriv += dt * g.inner(&du, pk);
    }
    Ok(Pairing {
        pairing,
        identity: f_phi - grad - deriv,
        scale: f_phi.abs() + grad.abs() + deriv.abs(),
    })
}
