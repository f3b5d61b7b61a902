use std::f64::consts::PI;

use bdl_core::asymptotics::{self, DiluteInputs, Formula, HigherOrderConstants};
use bdl_core::bogoliubov::exchange_kernel;
use bdl_core::liebliniger::{self, QuadSpec};
use bdl_core::scattering::{self, ScatterSpec};
use bdl_core::{Dim, RadialPotential};
use proptest::prelude::*;

fn quick() -> ScatterSpec {
    ScatterSpec {
        steps: 4000,
        richardson: false,
        ..ScatterSpec::default()
    }
}

fn scattering_length(v: &RadialPotential) -> f64 {
    scattering::solve(v, Dim::Three, &quick()).unwrap().a
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scattering_length_bounded_by_range_and_born(height in 1e-3f64..1e3, radius in 0.1f64..5.0) {
        let v = RadialPotential::soft_sphere(height, radius).unwrap();
        let a = scattering_length(&v);
        prop_assert!(a > 0.0 && a <= radius * (1.0 + 1e-9));
        let born = v.integral(Dim::Three).unwrap();
        prop_assert!(8.0 * PI * a <= born * (1.0 + 1e-9), "{} > {}", 8.0 * PI * a, born);
    }

    #[test]
    fn scattering_length_scales_with_range(height in 0.1f64..100.0, s in 0.2f64..5.0) {
        // −Δu + ½vu = 0 is invariant under r → sr, v → v/s².
        let a1 = scattering_length(&RadialPotential::soft_sphere(height, 1.0).unwrap());
        let a2 = scattering_length(&RadialPotential::soft_sphere(height / (s * s), s).unwrap());
        prop_assert!((a2 / (s * a1) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn scattering_length_grows_with_height(h in 0.1f64..100.0, factor in 1.01f64..10.0) {
        let a1 = scattering_length(&RadialPotential::gaussian(h, 0.5).unwrap());
        let a2 = scattering_length(&RadialPotential::gaussian(h * factor, 0.5).unwrap());
        prop_assert!(a2 > a1);
    }

    #[test]
    fn exchange_kernel_is_symmetric(width in 0.2f64..2.0, n in 2usize..24) {
        let v = RadialPotential::gaussian(1.0, width).unwrap();
        let p: Vec<f64> = (1..=n).map(|k| 0.3 * k as f64).collect();
        let k = exchange_kernel(&v, &p);
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(k[(i, j)], k[(j, i)]);
            }
        }
    }

    #[test]
    fn asymptotic_formulas_are_scale_covariant(
        log_rho in -12.0f64..-3.0,
        s in 0.1f64..10.0,
        which in 0usize..Formula::ALL.len(),
    ) {
        let formula = Formula::ALL[which];
        let dim = formula.dim();
        let d = dim.as_i32();
        let a = 1.0;
        let rho = 10f64.powf(log_rho);
        let consts = HigherOrderConstants::hard_core(a);
        let base = formula.evaluate(&DiluteInputs::new(rho, a, dim).unwrap(), &consts);
        let scaled = formula.evaluate(
            &DiluteInputs::new(rho * s.powi(-d), a * s, dim).unwrap(),
            &consts.rescaled(s),
        );
        if let (Ok(e), Ok(es)) = (base, scaled) {
            // energy density carries dimension length^(−d−2)
            prop_assert!((es * s.powi(d + 2) / e - 1.0).abs() < 1e-10, "{formula}: {e} {es}");
        }
    }

    #[test]
    fn lieb_liniger_energy_increases_below_tonks(log_gamma in -1.0f64..4.0, step in 1.05f64..3.0) {
        let spec = QuadSpec::default();
        let g1 = 10f64.powf(log_gamma);
        let e1 = liebliniger::solve(g1, &spec).unwrap().e_tilde;
        let e2 = liebliniger::solve(g1 * step, &spec).unwrap().e_tilde;
        prop_assert!(e1 < e2);
        prop_assert!(e2 < liebliniger::tonks_e_tilde());
    }

    #[test]
    fn hard_rod_energy_is_convex_in_density(a in 0.01f64..1.0, frac in 0.01f64..0.8) {
        let rho = frac / a;
        let h = 1e-3 * rho;
        let e = |r: f64| asymptotics::e1d_hardcore_exact(r, a).unwrap();
        prop_assert!(e(rho + h) + e(rho - h) - 2.0 * e(rho) > 0.0);
    }
}

#[test]
fn lieb_liniger_energy_is_convex_in_density() {
    let spec = QuadSpec::default();
    let c = 1.0;
    let e = |rho: f64| liebliniger::energy_density(rho, c, &spec).unwrap();
    for rho in [0.01, 0.1, 1.0, 10.0] {
        let h = 0.05 * rho;
        assert!(e(rho + h) + e(rho - h) - 2.0 * e(rho) > 0.0, "rho = {rho}");
    }
}

#[test]
fn two_dimensional_scattering_length_bounded_by_range() {
    for height in [0.1, 1.0, 10.0, 100.0] {
        let v = RadialPotential::soft_sphere(height, 1.0).unwrap();
        let a = scattering::solve(&v, Dim::Two, &ScatterSpec::default()).unwrap().a;
        assert!(a > 0.0 && a < 1.0, "height {height}: {a}");
    }
}
