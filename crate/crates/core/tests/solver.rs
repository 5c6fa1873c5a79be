use proptest::prelude::*;

use stochcol::experiments::BurgersRiemannOracle;
use stochcol::fv::{reconstruct, solve, solve_observed, ssp_rk3_step, Boundary, SolverSettings};
use stochcol::mesh::{Grid1D, StateField};
use stochcol::models::{BurgersModel, ModelSpec};
use stochcol::quadrature::{gauss_legendre, integrate};

fn burgers_run(spec: &ModelSpec, n: usize, settings: &SolverSettings) -> (Grid1D, Vec<f64>) {
    let grid = Grid1D::new(-1.0, 1.0, n).unwrap();
    let r = spec.realize(&grid, 0.0).unwrap();
    let out = solve(settings, r.model.as_ref(), r.initial).unwrap();
    (grid, out.component(0))
}

/// Pointwise solution of `u_t + u u_x = 0` with `u0 = 0.5 + 0.25 sin(pi x)`, by Newton on
/// the characteristic equation `u = u0(x - u t)`.
fn smooth_exact(x: f64, t: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let u0 = |s: f64| 0.5 + 0.25 * (pi * s).sin();
    let du0 = |s: f64| 0.25 * pi * (pi * s).cos();
    let mut u = u0(x);
    for _ in 0..100 {
        let s = x - u * t;
        let f = u - u0(s);
        let df = 1.0 + t * du0(s);
        let next = u - f / df;
        if (next - u).abs() < 1e-15 {
            return next;
        }
        u = next;
    }
    u
}

fn smooth_cell_averages(grid: &Grid1D, t: f64) -> Vec<f64> {
    let rule = gauss_legendre(8).unwrap();
    (0..grid.n_cells() as isize)
        .map(|j| {
            let (a, b) = (grid.interface(j), grid.interface(j + 1));
            integrate(&rule, a, b, |x| smooth_exact(x, t)) / (b - a)
        })
        .collect()
}

fn l1(dx: f64, a: &[f64], b: &[f64]) -> f64 {
    dx * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

#[test]
fn constant_burgers_state_is_steady() {
    let spec = ModelSpec::BurgersRiemann {
        u_left: 1.0,
        u_right: 1.0,
        jump_at: 0.0,
        jump_slope: 0.1,
    };
    for t in [0.01, 0.5, 1.3] {
        let (_, u) = burgers_run(&spec, 64, &SolverSettings::new(t));
        assert!(u.iter().all(|&v| v == 1.0));
    }
}

#[test]
fn smooth_burgers_converges_at_second_order() {
    let spec = ModelSpec::BurgersSine {
        mean: 0.5,
        amplitude: 0.25,
        phase_slope: 0.0,
    };
    let mut settings = SolverSettings::new(0.5);
    settings.boundary = Boundary::Periodic;
    let errors: Vec<f64> = [100, 200]
        .iter()
        .map(|&n| {
            let (grid, u) = burgers_run(&spec, n, &settings);
            l1(grid.dx(), &u, &smooth_cell_averages(&grid, 0.5))
        })
        .collect();
    let order = (errors[0] / errors[1]).log2();
    assert!(order >= 1.8, "errors {errors:?}, order {order}");
}

#[test]
fn riemann_solutions_converge_to_entropy_solution() {
    for (u_left, u_right) in [(2.0, 1.0), (1.0, 2.0), (-0.5, 1.0)] {
        let spec = ModelSpec::BurgersRiemann {
            u_left,
            u_right,
            jump_at: 0.0,
            jump_slope: 0.1,
        };
        let oracle = BurgersRiemannOracle {
            u_left,
            u_right,
            jump_at: 0.0,
            jump_slope: 0.1,
        };
        let settings = SolverSettings::new(0.3);
        let errors: Vec<f64> = [100, 200, 400]
            .iter()
            .map(|&n| {
                let (grid, u) = burgers_run(&spec, n, &settings);
                let rule = gauss_legendre(4).unwrap();
                let exact: Vec<f64> = (0..n as isize)
                    .map(|j| {
                        let (a, b) = (grid.interface(j), grid.interface(j + 1));
                        integrate(&rule, a, b, |x| oracle.eval(x, 0.3, 0.0)) / (b - a)
                    })
                    .collect();
                l1(grid.dx(), &u, &exact)
            })
            .collect();
        assert!(errors[2] < 0.6 * errors[0], "({u_left}, {u_right}): {errors:?}");
        assert!(errors[2] < 0.01, "({u_left}, {u_right}): {errors:?}");
    }
}

#[test]
fn every_step_respects_cfl() {
    let grid = Grid1D::new(-1.0, 1.0, 200).unwrap();
    let r = ModelSpec::BurgersSine {
        mean: 0.2,
        amplitude: 1.0,
        phase_slope: 0.0,
    }
    .realize(&grid, 0.0)
    .unwrap();
    let settings = SolverSettings::new(1.0);
    let mut steps = 0;
    let mut last_time = 0.0;
    solve_observed(&settings, r.model.as_ref(), r.initial, |info, _| {
        assert!(info.dt * info.max_speed / grid.dx() <= 0.45 + 1e-12);
        steps += 1;
        last_time = info.time;
    })
    .unwrap();
    assert!(steps > 0);
    assert_eq!(last_time, 1.0);
}

#[test]
fn periodic_burgers_conserves_mass_every_step() {
    let grid = Grid1D::new(-1.0, 1.0, 128).unwrap();
    let r = ModelSpec::BurgersSine {
        mean: 0.3,
        amplitude: 0.8,
        phase_slope: 0.0,
    }
    .realize(&grid, 0.0)
    .unwrap();
    let mut settings = SolverSettings::new(1.5);
    settings.boundary = Boundary::Periodic;
    let mut mass = r.initial.total(0);
    solve_observed(&settings, r.model.as_ref(), r.initial, |_, u| {
        let m = u.total(0);
        assert!((m - mass).abs() <= 1e-12, "mass drift {}", m - mass);
        mass = m;
    })
    .unwrap();
}

#[test]
fn free_boundaries_change_mass_only_through_boundary_fluxes() {
    let grid = Grid1D::new(-1.0, 1.0, 100).unwrap();
    let spec = ModelSpec::BurgersRiemann {
        u_left: 2.0,
        u_right: 1.0,
        jump_at: 0.0,
        jump_slope: 0.1,
    };
    let r = spec.realize(&grid, 0.0).unwrap();
    let t = 0.2;
    let m0 = r.initial.total(0);
    let out = solve(&SolverSettings::new(t), r.model.as_ref(), r.initial).unwrap();
    let m1 = out.total(0);
    // constant states 2 and 1 sit at the boundaries: inflow 2 t, outflow 0.5 t
    let drift = m1 - m0 - (2.0 - 0.5) * t;
    assert!(drift.abs() < 1e-12, "drift {drift}");
}

#[test]
fn rk3_integrates_linear_ode_to_fourth_order_per_step() {
    let grid = Grid1D::new(0.0, 1.0, 4).unwrap();
    let lambda = -1.7;
    let step_error = |dt: f64| {
        let u0 = StateField::from_fn(grid, 1, |_| vec![1.0]);
        let u1 = ssp_rk3_step(&u0, dt, |u| Ok(u.component(0).iter().map(|v| lambda * v).collect())).unwrap();
        (u1.get(0, 0) - (lambda * dt).exp()).abs()
    };
    let (e1, e2) = (step_error(0.1), step_error(0.05));
    let ratio = e1 / e2;
    assert!((14.0..18.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn rk3_constant_rhs_and_zero_rhs() {
    let grid = Grid1D::new(0.0, 1.0, 4).unwrap();
    let u0 = StateField::from_fn(grid, 2, |j| vec![j as f64, -0.5]);
    let same = ssp_rk3_step(&u0, 0.3, |_| Ok(vec![0.0; 8])).unwrap();
    assert_eq!(same.interior(), u0.interior());
    let moved = ssp_rk3_step(&u0, 0.25, |_| Ok(vec![2.0; 8])).unwrap();
    for (a, b) in moved.interior().iter().zip(u0.interior()) {
        assert!((a - (b + 0.5)).abs() < 1e-15);
    }
}

#[test]
fn burgers_model_has_no_source() {
    let grid = Grid1D::new(-1.0, 1.0, 16).unwrap();
    let mut f = StateField::from_fn(grid, 1, |_| vec![0.7]);
    f.fill_ghosts_outflow();
    let (rhs, _) = stochcol::fv::spatial_operator(&BurgersModel, &f, 1.3).unwrap();
    assert!(rhs.iter().all(|&r| r == 0.0));
}

proptest! {
    #[test]
    fn reconstruction_creates_no_new_extrema(
        values in proptest::collection::vec(-10.0..10.0f64, 8..40),
        theta in 1.0..=2.0f64,
    ) {
        let n = values.len();
        let grid = Grid1D::new(0.0, 1.0, n).unwrap();
        let mut f = StateField::from_fn(grid, 1, |j| vec![values[j]]);
        f.fill_ghosts_outflow();
        let rec = reconstruct(&f, theta).unwrap();
        for j in 0..n as isize {
            let stencil = [f.get(j - 1, 0), f.get(j, 0), f.get(j + 1, 0)];
            let lo = stencil.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = stencil.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let left = rec.plus(j as usize)[0];
            let right = rec.minus(j as usize + 1)[0];
            for v in [left, right] {
                prop_assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
            }
        }
    }
}
