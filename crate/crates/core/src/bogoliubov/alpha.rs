use std::f64::consts::PI;

use serde::Serialize;

use crate::potentials::RadialPotential;
use crate::scattering::{self, ScatterSpec};
use crate::{require_positive, Dim, Error, Result};

/// Solution of −Δα̌ + ½vα̌ + ½ρv = 0 in three dimensions.
#[derive(Debug, Clone, Serialize)]
pub struct AlphaSolution {
    pub grid: Vec<f64>,
    /// α̌ sampled on `grid`.
    pub alpha_check: Vec<f64>,
    /// ½ρ∫vα̌ + ½v̂(0)ρ².
    pub energy: f64,
    /// ∫|∇α̌|² + ρ∫vα̌ + ½∫vα̌² + ½v̂(0)ρ², evaluated directly.
    pub functional_energy: f64,
    /// max |α̌ + ρω| / ρ over the grid.
    pub max_deviation: f64,
    pub scattering_length: f64,
}

/// Solve the α̌ equation with f = rα̌ integrated outward as f_p + λw, where
/// f_p is the particular solution with f_p(0) = f_p'(0) = 0 and w the
/// regular homogeneous one; λ makes f' vanish at the range so that α̌ decays
/// as −C/r outside.
pub fn solve_alpha_equation(potential: &RadialPotential, rho: f64, spec: &ScatterSpec) -> Result<AlphaSolution> {
    require_positive("density", rho)?;
    potential.check_dim(Dim::Three)?;
    if potential.is_hard_core() {
        return Err(Error::NoFourierTransform(potential.kind_name()));
    }
    let scattering = scattering::solve(potential, Dim::Three, spec)?;
    let range = potential.range();
    let grid: Vec<f64> = scattering.grid.iter().cloned().filter(|&r| r <= range).collect();
    let (fp, dfp, w, dw) = integrate(potential, rho, &grid);
    let edge = grid.len() - 1;
    let lambda = -dfp[edge] / dw[edge];
    let f: Vec<f64> = fp.iter().zip(&w).map(|(p, w)| p + lambda * w).collect();
    let df: Vec<f64> = dfp.iter().zip(&dw).map(|(p, w)| p + lambda * w).collect();
    let alpha_check: Vec<f64> = grid
        .iter()
        .zip(f.iter().zip(&df))
        .map(|(&r, (&f, &df))| if r == 0.0 { df } else { f / r })
        .collect();
    let omega = scattering.omega.as_ref().expect("three-dimensional solution");
    let max_deviation = alpha_check
        .iter()
        .zip(omega)
        .map(|(al, om)| (al + rho * om).abs() / rho)
        .fold(0.0, f64::max);

    let vhat0 = potential.integral(Dim::Three)?;
    let v = |r: f64, right_end: bool| if right_end { potential.value_from_left(r) } else { potential.value(r) };
    // 4π∫r²vα̌ = 4π∫r v f
    let v_alpha = 4.0 * PI * simpson(&grid, &f, &df, |r, f, _, end| r * v(r, end) * f);
    let v_alpha2 = 4.0 * PI * simpson(&grid, &f, &df, |r, f, _, end| v(r, end) * f * f);
    // r²|∇α̌|² = (f' − f/r)²; outside, α̌ = f(R)/r adds f(R)²/R
    let slope = |r: f64, f: f64, df: f64, _| if r == 0.0 { 0.0 } else { (df - f / r).powi(2) };
    let gradient = 4.0 * PI * (simpson(&grid, &f, &df, slope) + f[edge].powi(2) / range);
    let energy = 0.5 * rho * v_alpha + 0.5 * vhat0 * rho * rho;
    let functional_energy = gradient + rho * v_alpha + 0.5 * v_alpha2 + 0.5 * vhat0 * rho * rho;
    Ok(AlphaSolution {
        grid,
        alpha_check,
        energy,
        functional_energy,
        max_deviation,
        scattering_length: scattering.a,
    })
}

type Profiles = (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>);

/// RK4 for f'' = ½v f + ½ρ v r (particular) and w'' = ½v w (homogeneous).
fn integrate(v: &RadialPotential, rho: f64, grid: &[f64]) -> Profiles {
    let rhs = |r: f64, y: [f64; 4], vr: f64| [y[1], 0.5 * vr * y[0] + 0.5 * rho * vr * r, y[3], 0.5 * vr * y[2]];
    let mut y = [0.0, 0.0, 0.0, 1.0];
    let mut out = (vec![0.0], vec![0.0], vec![0.0], vec![1.0]);
    for s in grid.windows(2) {
        let (r0, r1) = (s[0], s[1]);
        let h = r1 - r0;
        let rm = r0 + 0.5 * h;
        let (v0, vm, v1) = (v.value(r0), v.value(rm), v.value_from_left(r1));
        let add = |y: [f64; 4], k: [f64; 4], t: f64| [y[0] + t * k[0], y[1] + t * k[1], y[2] + t * k[2], y[3] + t * k[3]];
        let k1 = rhs(r0, y, v0);
        let k2 = rhs(rm, add(y, k1, 0.5 * h), vm);
        let k3 = rhs(rm, add(y, k2, 0.5 * h), vm);
        let k4 = rhs(r1, add(y, k3, h), v1);
        for i in 0..4 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        out.0.push(y[0]);
        out.1.push(y[1]);
        out.2.push(y[2]);
        out.3.push(y[3]);
    }
    out
}

/// Simpson's rule per step. The integrand receives (r, f, f', right_end),
/// with f and f' at the midpoint taken from the cubic Hermite interpolant;
/// `right_end` asks for one-sided values at the step end.
fn simpson(grid: &[f64], f: &[f64], df: &[f64], g: impl Fn(f64, f64, f64, bool) -> f64) -> f64 {
    let mut sum = 0.0;
    for k in 0..grid.len() - 1 {
        let (r0, r1) = (grid[k], grid[k + 1]);
        let h = r1 - r0;
        let rm = r0 + 0.5 * h;
        let fm = 0.5 * (f[k] + f[k + 1]) + h * (df[k] - df[k + 1]) / 8.0;
        let dfm = 1.5 * (f[k + 1] - f[k]) / h - 0.25 * (df[k] + df[k + 1]);
        sum += h / 6.0 * (g(r0, f[k], df[k], false) + 4.0 * g(rm, fm, dfm, false) + g(r1, f[k + 1], df[k + 1], true));
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn soft_sphere_reproduces_leading_energy() {
        let v = RadialPotential::soft_sphere(10.0, 1.0).unwrap();
        let rho = 1e-3;
        let s = solve_alpha_equation(&v, rho, &ScatterSpec::default()).unwrap();
        let leading = 4.0 * PI * rho * rho * s.scattering_length;
        assert!((s.energy / leading - 1.0).abs() < 1e-6, "{}", s.energy / leading);
        assert!((s.functional_energy / leading - 1.0).abs() < 1e-6, "{}", s.functional_energy / leading);
        assert!(s.max_deviation < 1e-6);
    }

    #[test]
    fn zero_potential_gives_zero() {
        let v = RadialPotential::zero(1.0).unwrap();
        let s = solve_alpha_equation(&v, 0.1, &ScatterSpec::default()).unwrap();
        assert!(s.alpha_check.iter().all(|&a| a == 0.0));
        assert_eq!(s.energy, 0.0);
    }

    #[test]
    fn hard_core_is_rejected() {
        let v = RadialPotential::hard_core(1.0).unwrap();
        assert!(solve_alpha_equation(&v, 0.1, &ScatterSpec::default()).is_err());
    }
}
