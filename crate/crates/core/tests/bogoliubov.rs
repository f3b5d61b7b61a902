use std::f64::consts::PI;

use bdl_core::bogoliubov::{
    self, evaluate_functional, BogoliubovState, GridSpec, InteractionMode, MomentumGrid, SolverSpec,
};
use bdl_core::RadialPotential;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn angles(state: &BogoliubovState) -> Vec<f64> {
    state.gamma.iter().map(|g| g.sqrt().asinh()).collect()
}

fn check_minimum(rho: f64, mode: &InteractionMode) {
    let min = bogoliubov::minimize(rho, mode, &GridSpec::default(), &SolverSpec::default()).unwrap();
    let grid = min.state.grid.clone();
    let beta = angles(&min.state);
    let total = min.energy.total;

    let condensate = BogoliubovState::from_angles(grid.clone(), &vec![0.0; beta.len()], rho).unwrap();
    assert!(total < evaluate_functional(&condensate, mode).unwrap().total);

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..8 {
        let trial: Vec<f64> = beta.iter().map(|b| b * (1.0 + 0.05 * rng.gen_range(-1.0..1.0))).collect();
        let state = BogoliubovState::from_angles(grid.clone(), &trial, rho).unwrap();
        let e = evaluate_functional(&state, mode).unwrap().total;
        assert!(e >= total - 1e-12 * total.abs(), "{e} < {total}");
    }
}

#[test]
fn minimizer_is_a_variational_minimum_scattering_constant() {
    check_minimum(1e-6, &InteractionMode::ScatteringConstant { a: 1.0 });
}

#[test]
fn minimizer_is_a_variational_minimum_full_potential() {
    let v = RadialPotential::soft_sphere(10.0, 1.0).unwrap();
    check_minimum(1e-6, &InteractionMode::FullPotential(v));
}

#[test]
fn scattering_constant_minimizer_matches_closed_form_angles() {
    // Without the exchange term the optimum is tanh 2β = gρ/(p² + gρ). The
    // exchange term shifts p² by g·ρ₊, a relative change of order ρ₊/ρ, and
    // the infrared nodes carry almost no weight; compare above p = √(gρ).
    let rho = 1e-6;
    let mode = InteractionMode::ScatteringConstant { a: 1.0 };
    let min = bogoliubov::minimize(rho, &mode, &GridSpec::default(), &SolverSpec::default()).unwrap();
    let m = 8.0 * PI * rho;
    let grid: &MomentumGrid = &min.state.grid;
    for (&p, beta) in grid.nodes().iter().zip(angles(&min.state)) {
        if p * p < m {
            continue;
        }
        let want = 0.5 * (m / (p * p + m)).atanh();
        assert!((beta - want).abs() <= 1e-2 * want, "p = {p}: {beta} vs {want}");
    }
}

#[test]
fn grid_refinement_changes_energy_by_less_than_a_tenth_of_a_percent() {
    let mode = InteractionMode::ScatteringConstant { a: 1.0 };
    let rho_a3 = 1e-6;
    let spec = GridSpec::default();
    let solver = SolverSpec::default();
    let coarse = bogoliubov::sweep_point(rho_a3, &mode, 1.0, &spec, &solver).unwrap();
    let fine = bogoliubov::sweep_point(rho_a3, &mode, 1.0, &spec.refined(rho_a3, 1.0), &solver).unwrap();
    let correction = |e: f64| e - 1.0;
    let change = (correction(fine.e_over_4pi_rho2_a) / correction(coarse.e_over_4pi_rho2_a) - 1.0).abs();
    assert!(change < 1e-3, "{change}");
}

#[test]
fn sweep_rejects_non_positive_density() {
    let mode = InteractionMode::ScatteringConstant { a: 1.0 };
    let err = bogoliubov::sweep(&[1e-6, 0.0], &mode, &GridSpec::default(), &SolverSpec::default()).unwrap_err();
    assert!(err.is_input_error());
}

#[test]
fn depletion_is_between_zero_and_density() {
    let mode = InteractionMode::ScatteringConstant { a: 1.0 };
    for rho in [1e-8, 1e-5] {
        let min = bogoliubov::minimize(rho, &mode, &GridSpec::default(), &SolverSpec::default()).unwrap();
        let d = bogoliubov::depletion(&min.state);
        assert!(d.fraction > 0.0 && d.fraction < 1.0);
        assert!((d.rho_plus + min.state.rho0 - rho).abs() < 1e-12 * rho);
    }
}
