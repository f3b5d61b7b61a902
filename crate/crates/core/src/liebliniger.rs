//! Ground state of the Lieb–Liniger gas, v = 2cδ(x).
//!
//! The density of quasi-momenta g on [−1, 1] solves
//!
//! g(x) = 1/(2π) + (λ/π) ∫ g(y) / (λ² + (x − y)²) dy,
//!
//! the coupling is γ = c/ρ = λ/∫g, and e(ρ) = ρ³ẽ(γ) with
//! ẽ = (γ/λ)³ ∫ x² g(x) dx. The equation is discretized by Nyström's method
//! on Gauss–Legendre nodes and λ is matched to γ by a bracketed root find.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::quadrature::gauss_legendre;
use crate::{require_positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadSpec {
    pub nodes: usize,
    /// Largest accepted integral-equation defect.
    pub residual_tolerance: f64,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            nodes: 128,
            residual_tolerance: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiebLinigerSolution {
    pub gamma: f64,
    pub lambda: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// g on `nodes`.
    pub g: Vec<f64>,
    pub e_tilde: f64,
    /// Sup-norm defect of the Nyström interpolant on a rule with twice the
    /// nodes.
    pub residual: f64,
}

const LAMBDA_BRACKET: (f64, f64) = (1e-6, 1e6);
const MATCH_TOLERANCE: f64 = 1e-14;
const MAX_MATCH_ITERATIONS: usize = 200;

/// Tonks–Girardeau value π²/3.
pub fn tonks_e_tilde() -> f64 {
    PI * PI / 3.0
}

fn kernel(lambda: f64, x: f64, y: f64) -> f64 {
    lambda / (PI * (lambda * lambda + (x - y) * (x - y)))
}

struct Rule {
    x: Vec<f64>,
    w: Vec<f64>,
}

impl Rule {
    fn new(n: usize) -> Self {
        let (x, w) = gauss_legendre(n);
        Self { x, w }
    }

    /// g on the nodes for a given λ.
    fn density(&self, lambda: f64) -> Result<Vec<f64>> {
        let n = self.x.len();
        let a = DMatrix::from_fn(n, n, |i, j| {
            let delta = if i == j { 1.0 } else { 0.0 };
            delta - self.w[j] * kernel(lambda, self.x[i], self.x[j])
        });
        let rhs = DVector::from_element(n, 1.0 / (2.0 * PI));
        let g = a
            .lu()
            .solve(&rhs)
            .ok_or(Error::NoConvergence {
                what: "Lieb-Liniger linear solve",
                iterations: 0,
                residual: f64::INFINITY,
            })?;
        Ok(g.iter().copied().collect())
    }

    fn coupling(&self, lambda: f64) -> Result<(f64, Vec<f64>)> {
        let g = self.density(lambda)?;
        let norm: f64 = self.w.iter().zip(&g).map(|(w, g)| w * g).sum();
        Ok((lambda / norm, g))
    }

    /// Defect of the Nyström interpolant measured on a finer rule.
    fn residual(&self, lambda: f64, g: &[f64]) -> f64 {
        let fine = Rule::new(2 * self.x.len());
        let interp = |x: f64| {
            1.0 / (2.0 * PI)
                + self
                    .x
                    .iter()
                    .zip(&self.w)
                    .zip(g)
                    .map(|((&y, w), g)| w * g * kernel(lambda, x, y))
                    .sum::<f64>()
        };
        let gf: Vec<f64> = fine.x.iter().map(|&x| interp(x)).collect();
        fine.x
            .iter()
            .zip(&gf)
            .map(|(&x, &gx)| {
                let integral: f64 = fine
                    .x
                    .iter()
                    .zip(&fine.w)
                    .zip(&gf)
                    .map(|((&y, w), g)| w * g * kernel(lambda, x, y))
                    .sum();
                (gx - 1.0 / (2.0 * PI) - integral).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Solve for the coupling `gamma` = c/ρ.
pub fn solve(gamma: f64, spec: &QuadSpec) -> Result<LiebLinigerSolution> {
    require_positive("coupling", gamma)?;
    if spec.nodes < 2 {
        return Err(Error::InvalidInput("Lieb-Liniger rule needs at least 2 nodes".into()));
    }
    let rule = Rule::new(spec.nodes);
    let lambda = match_lambda(&rule, gamma)?;
    let (gamma_at, g) = rule.coupling(lambda)?;
    let second_moment: f64 = rule.x.iter().zip(&rule.w).zip(&g).map(|((x, w), g)| w * x * x * g).sum();
    let e_tilde = (gamma_at / lambda).powi(3) * second_moment;
    let residual = rule.residual(lambda, &g);
    if !(residual <= spec.residual_tolerance) {
        return Err(Error::QuadratureTooCoarse {
            residual,
            tolerance: spec.residual_tolerance,
        });
    }
    Ok(LiebLinigerSolution {
        gamma,
        lambda,
        nodes: rule.x,
        weights: rule.w,
        g,
        e_tilde,
        residual,
    })
}

/// Bracket by stepping down from the top of [10⁻⁶, 10⁶] one decade at a
/// time, then bisect in log λ and finish with secant steps. Below the scale
/// the rule resolves, the discrete density stops being positive; a target
/// below the last usable decade is reported as unresolved.
fn match_lambda(rule: &Rule, target: f64) -> Result<f64> {
    let f = |log_lambda: f64| -> Result<Option<f64>> {
        let (gamma, g) = rule.coupling(log_lambda.exp())?;
        Ok((gamma > 0.0 && g.iter().all(|&g| g > 0.0)).then(|| (gamma / target).ln()))
    };
    let fail = |iterations, residual: f64| Error::NoConvergence {
        what: "Lieb-Liniger lambda matching",
        iterations,
        residual: residual.abs(),
    };
    let bottom = LAMBDA_BRACKET.0.ln();
    let mut hi = LAMBDA_BRACKET.1.ln();
    let mut f_hi = f(hi)?.ok_or_else(|| fail(0, f64::NAN))?;
    if f_hi <= 0.0 {
        return Err(fail(0, f_hi));
    }
    let (mut lo, mut f_lo) = loop {
        let next = (hi - 10f64.ln()).max(bottom);
        match f(next)? {
            Some(v) if v > f_hi => return Err(fail(0, v)),
            Some(v) if v < 0.0 => break (next, v),
            Some(v) => {
                hi = next;
                f_hi = v;
            }
            None => {
                return Err(Error::CouplingUnresolved {
                    gamma: target,
                    smallest: target * f_hi.exp(),
                    nodes: rule.x.len(),
                });
            }
        }
        if next <= bottom {
            return Err(fail(0, f_hi));
        }
    };
    for iteration in 0..MAX_MATCH_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?.ok_or_else(|| fail(iteration, f64::NAN))?;
        // γ(λ) must be increasing
        if !(f_mid >= f_lo && f_mid <= f_hi) {
            return Err(fail(iteration, f_mid));
        }
        if f_mid < 0.0 {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
        if hi - lo < 1e-3 {
            break;
        }
    }
    let (mut x0, mut x1, mut f0, mut f1) = (lo, hi, f_lo, f_hi);
    for iteration in 0..MAX_MATCH_ITERATIONS {
        if f1.abs() <= MATCH_TOLERANCE {
            return Ok(x1.exp());
        }
        if f0.abs() <= MATCH_TOLERANCE {
            return Ok(x0.exp());
        }
        let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if !x2.is_finite() || x2 == x1 {
            return if f1.abs() < 1e-12 { Ok(x1.exp()) } else { Err(fail(iteration, f1)) };
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f(x1)?.ok_or_else(|| fail(iteration, f64::NAN))?;
    }
    Err(fail(MAX_MATCH_ITERATIONS, f1))
}

/// ρ³ẽ(c/ρ).
pub fn energy_density(rho: f64, c: f64, spec: &QuadSpec) -> Result<f64> {
    require_positive("density", rho)?;
    require_positive("coupling strength c", c)?;
    Ok(rho.powi(3) * solve(c / rho, spec)?.e_tilde)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiluteComparison {
    pub exact: f64,
    /// (π²/3)ρ³(1 + 2ρa) with a = −2/c.
    pub theorem1: f64,
    /// |exact − theorem1| / ((π²/3)ρ³).
    pub gap: f64,
}

pub fn dilute_comparison(rho: f64, c: f64, spec: &QuadSpec) -> Result<DiluteComparison> {
    require_positive("density", rho)?;
    require_positive("coupling strength c", c)?;
    if rho / c > 0.1 {
        return Err(Error::NotDilute(format!("rho/c = {} > 0.1", rho / c)));
    }
    let exact = energy_density(rho, c, spec)?;
    let tonks = tonks_e_tilde() * rho.powi(3);
    let a = -2.0 / c;
    let theorem1 = tonks * (1.0 + 2.0 * rho * a);
    Ok(DiluteComparison {
        exact,
        theorem1,
        gap: (exact - theorem1).abs() / tonks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Strong-coupling expansion of ẽ/(π²/3) through γ⁻⁴.
    fn series_ratio(gamma: f64) -> f64 {
        1.0 - 4.0 / gamma + 12.0 / gamma.powi(2) + 32.0 / gamma.powi(3) * (PI * PI / 15.0 - 1.0)
            - 80.0 / gamma.powi(4) * (4.0 * PI * PI / 15.0 - 1.0)
    }

    fn series(gamma: f64) -> f64 {
        tonks_e_tilde() * series_ratio(gamma)
    }

    #[test]
    fn strong_coupling_matches_series() {
        for gamma in [100.0, 1000.0, 1e5] {
            let s = solve(gamma, &QuadSpec::default()).unwrap();
            let rel = (s.e_tilde - series(gamma)).abs() / series(gamma);
            assert!(rel < 2e3 / gamma.powi(5) + 1e-13, "{gamma}: {rel}");
        }
    }

    #[test]
    fn density_is_positive_and_even() {
        let s = solve(10.0, &QuadSpec::default()).unwrap();
        assert!(s.g.iter().all(|&g| g > 0.0));
        let n = s.g.len();
        for i in 0..n / 2 {
            assert!((s.g[i] - s.g[n - 1 - i]).abs() < 1e-12);
        }
        assert!(s.residual <= 1e-9);
        let gamma = s.lambda / s.weights.iter().zip(&s.g).map(|(w, g)| w * g).sum::<f64>();
        assert!((gamma / 10.0 - 1.0).abs() < 1e-13);
    }

    #[test]
    fn finer_rule_agrees() {
        let base = solve(10.0, &QuadSpec::default()).unwrap().e_tilde;
        let fine = solve(
            10.0,
            &QuadSpec {
                nodes: 512,
                ..QuadSpec::default()
            },
        )
        .unwrap()
        .e_tilde;
        assert!((base - fine).abs() <= 1e-10 * fine);
    }

    #[test]
    fn coarse_rule_is_reported() {
        let spec = QuadSpec {
            nodes: 4,
            ..QuadSpec::default()
        };
        let r = solve(10.0, &spec);
        assert!(matches!(r, Err(Error::QuadratureTooCoarse { .. })), "{r:?}");
    }

    #[test]
    fn weak_coupling_beyond_the_rule_is_reported() {
        match solve(1e-4, &QuadSpec::default()) {
            Err(e @ Error::CouplingUnresolved { smallest, .. }) => {
                assert!(smallest > 1e-4);
                assert!(e.is_convergence_failure());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn energy_scales_with_density() {
        let spec = QuadSpec::default();
        let base = energy_density(1.0, 20.0, &spec).unwrap();
        for s in [0.5, 3.0] {
            let scaled = energy_density(s, 20.0 * s, &spec).unwrap();
            assert!((scaled - s.powi(3) * base).abs() < 1e-12 * scaled);
        }
        let tonks = energy_density(1.0, 1e6, &spec).unwrap();
        assert!((tonks / tonks_e_tilde() - 1.0).abs() < 1e-4);
    }

    #[test]
    fn dilute_gap_follows_series() {
        let spec = QuadSpec::default();
        let d = dilute_comparison(1.0, 100.0, &spec).unwrap();
        let want = series_ratio(100.0) - (1.0 - 4.0 / 100.0);
        // the first omitted term is O(γ⁻⁵)
        assert!((d.gap - want).abs() < 2e3 / 100f64.powi(5), "{} {}", d.gap, want);
        let finer = dilute_comparison(1.0, 1000.0, &spec).unwrap();
        assert!(finer.gap * 10.0 < d.gap);
        assert!(matches!(dilute_comparison(1.0, 5.0, &spec), Err(Error::NotDilute(_))));
    }
}
