//! The acceptance checks, each returning measured values next to targets.
//!
//! [`run_all`] drives the `reproduce` report; the integration tests call
//! the same functions one by one.

use std::f64::consts::PI;
use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::asymptotics::{self, DiluteInputs, Formula, HigherOrderConstants};
use crate::bogoliubov::{self, GridSpec, InteractionMode, SolverSpec};
use crate::liebliniger::{self, QuadSpec};
use crate::potentials::RadialPotential;
use crate::scattering::{self, ScatterSpec};
use crate::{Dim, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// |measured − target| ≤ tolerance
    AbsWithin,
    /// |measured/target − 1| ≤ tolerance
    RelWithin,
    /// |measured/target − 1| > tolerance
    RelOutside,
    /// measured ≤ target
    AtMost,
    /// measured < target
    Below,
    /// measured ≥ target
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub measured: f64,
    pub target: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub passed: bool,
}

impl Check {
    fn new(label: impl Into<String>, measured: f64, target: f64, tolerance: f64, comparison: Comparison) -> Self {
        let rel = || (measured / target - 1.0).abs();
        let passed = match comparison {
            Comparison::AbsWithin => (measured - target).abs() <= tolerance,
            Comparison::RelWithin => rel() <= tolerance,
            Comparison::RelOutside => rel() > tolerance,
            Comparison::AtMost => measured <= target,
            Comparison::Below => measured < target,
            Comparison::AtLeast => measured >= target,
        };
        Self {
            label: label.into(),
            measured,
            target,
            tolerance,
            comparison,
            passed,
        }
    }

    pub fn abs_within(label: impl Into<String>, measured: f64, target: f64, tolerance: f64) -> Self {
        Self::new(label, measured, target, tolerance, Comparison::AbsWithin)
    }

    pub fn rel_within(label: impl Into<String>, measured: f64, target: f64, tolerance: f64) -> Self {
        Self::new(label, measured, target, tolerance, Comparison::RelWithin)
    }

    pub fn rel_outside(label: impl Into<String>, measured: f64, target: f64, tolerance: f64) -> Self {
        Self::new(label, measured, target, tolerance, Comparison::RelOutside)
    }

    pub fn at_most(label: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::new(label, measured, bound, 0.0, Comparison::AtMost)
    }

    pub fn below(label: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::new(label, measured, bound, 0.0, Comparison::Below)
    }

    pub fn at_least(label: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::new(label, measured, bound, 0.0, Comparison::AtLeast)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "ok " } else { "BAD" };
        let rule = match self.comparison {
            Comparison::AbsWithin => format!("= {:.10e} +- {:.1e}", self.target, self.tolerance),
            Comparison::RelWithin => format!("= {:.10e} within {:.1e} rel", self.target, self.tolerance),
            Comparison::RelOutside => format!("!= {:.10e} by more than {:.1e} rel", self.target, self.tolerance),
            Comparison::AtMost => format!("<= {:.4e}", self.target),
            Comparison::Below => format!("< {:.4e}", self.target),
            Comparison::AtLeast => format!(">= {:.4e}", self.target),
        };
        write!(f, "[{mark}] {}: {:.10e} {rule}", self.label, self.measured)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: &'static str,
    pub description: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub elapsed_seconds: f64,
    /// Caveats about the threshold or the comparison.
    pub note: Option<&'static str>,
    /// Set when a computation failed outright.
    pub error: Option<String>,
}

impl CriterionReport {
    /// One-line summary.
    pub fn summary_line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let first_failure = self.checks.iter().find(|c| !c.passed).map(|c| format!(" ({c})"));
        let error = self.error.as_ref().map(|e| format!(" (error: {e})"));
        format!(
            "{status} {}: {} [{:.2}s]{}",
            self.id,
            self.description,
            self.elapsed_seconds,
            error.or(first_failure).unwrap_or_default()
        )
    }
}

fn criterion(
    id: &'static str,
    description: &'static str,
    note: Option<&'static str>,
    body: impl FnOnce() -> Result<Vec<Check>>,
) -> CriterionReport {
    let start = Instant::now();
    let outcome = body();
    let elapsed_seconds = start.elapsed().as_secs_f64();
    let (checks, error) = match outcome {
        Ok(checks) => (checks, None),
        Err(e) => (Vec::new(), Some(e.to_string())),
    };
    CriterionReport {
        id,
        description,
        passed: error.is_none() && !checks.is_empty() && checks.iter().all(|c| c.passed),
        checks,
        elapsed_seconds,
        note,
        error,
    }
}

pub const LHY_SLOPE_TOLERANCE: f64 = 0.02;
pub const NEGATIVE_RESULT_THRESHOLD: f64 = 0.05;

/// Hard-core a = R and soft-sphere a against its closed form.
pub fn scattering_oracles() -> CriterionReport {
    criterion(
        "scattering-oracles",
        "hard-core a = R; soft-sphere ODE vs closed form",
        None,
        || {
            let start = Instant::now();
            let spec = ScatterSpec::default();
            let mut checks = Vec::new();
            for radius in [1.0, 0.37] {
                let a = scattering::solve(&RadialPotential::hard_core(radius)?, Dim::Three, &spec)?.a;
                checks.push(Check::abs_within(format!("hard core R = {radius}"), a, radius, 1e-12));
            }
            for (v0, r) in [(1.0, 1.0), (10.0, 1.0), (100.0, 0.5)] {
                let a = scattering::solve(&RadialPotential::soft_sphere(v0, r)?, Dim::Three, &spec)?.a;
                let kr = (v0 / 2.0f64).sqrt() * r;
                let exact = r * (1.0 - kr.tanh() / kr);
                checks.push(Check::rel_within(format!("soft sphere ({v0}, {r})"), a, exact, 1e-8));
            }
            checks.push(Check::below("runtime [s]", start.elapsed().as_secs_f64(), 1.0));
            Ok(checks)
        },
    )
}

/// Potentials for the 8πa = ∫v u identity.
pub fn identity_potentials() -> Result<Vec<(&'static str, RadialPotential)>> {
    Ok(vec![
        ("soft sphere (10, 1)", RadialPotential::soft_sphere(10.0, 1.0)?),
        ("gaussian (5, 0.5)", RadialPotential::gaussian(5.0, 0.5)?),
        (
            "tabulated ramp",
            RadialPotential::tabulated(vec![0.0, 0.25, 0.5, 0.75, 1.0], vec![4.0, 3.0, 2.0, 1.0, 0.0])?,
        ),
    ])
}

/// Seeded random soft potentials: soft spheres, Gaussians and tabulated
/// profiles.
pub fn random_soft_potentials(count: usize, seed: u64) -> Result<Vec<RadialPotential>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| match k % 3 {
            0 => RadialPotential::soft_sphere(10f64.powf(rng.gen_range(-1.0..2.0)), rng.gen_range(0.2..3.0)),
            1 => RadialPotential::gaussian(10f64.powf(rng.gen_range(-1.0..2.0)), rng.gen_range(0.1..1.0)),
            _ => {
                let nodes = rng.gen_range(3..8);
                let step = rng.gen_range(0.1..0.5);
                let r = (0..nodes).map(|i| i as f64 * step).collect();
                let v = (0..nodes).map(|_| rng.gen_range(0.0..20.0)).collect();
                RadialPotential::tabulated(r, v)
            }
        })
        .collect()
}

pub const RANDOM_POTENTIAL_SEED: u64 = 0x5eed_0001;

/// 8πa = 4π∫r²v u and 8πa ≤ ∫v.
pub fn identity() -> CriterionReport {
    criterion(
        "identity-8pi-a",
        "8 pi a = 4 pi int r^2 v u; 8 pi a <= int v on random potentials",
        None,
        || {
            let spec = ScatterSpec::default();
            let mut checks = Vec::new();
            for (name, v) in identity_potentials()? {
                let sol = scattering::solve(&v, Dim::Three, &spec)?;
                let id = scattering::check_identity_8pia(&sol, &v)?;
                checks.push(Check::rel_within(format!("{name}: 4 pi int r^2 v u"), id.rhs, id.lhs, 1e-6));
            }
            for (k, v) in random_soft_potentials(20, RANDOM_POTENTIAL_SEED)?.iter().enumerate() {
                let a = scattering::solve(v, Dim::Three, &spec)?.a;
                checks.push(Check::at_most(
                    format!("random #{k} ({}): 8 pi a vs int v", v.kind_name()),
                    8.0 * PI * a,
                    v.integral(Dim::Three)?,
                ));
            }
            Ok(checks)
        },
    )
}

/// Soft sphere whose v̂(0) exceeds 2·8πa.
pub fn negative_result_potential() -> Result<RadialPotential> {
    RadialPotential::soft_sphere(10.0, 1.0)
}

/// Slope of the scattering-constant sweep.
pub fn lhy_coefficient() -> CriterionReport {
    criterion(
        "lhy-coefficient",
        "scattering-constant Bogoliubov slope vs 128/(15 sqrt pi)",
        None,
        || {
            let start = Instant::now();
            let mode = InteractionMode::ScatteringConstant { a: 1.0 };
            let points = bogoliubov::sweep(
                &bogoliubov::default_sweep_densities(),
                &mode,
                &GridSpec::default(),
                &SolverSpec::default(),
            )?;
            let fit = bogoliubov::lhy_slope(&points)?;
            Ok(vec![
                Check::rel_within(
                    "fitted slope",
                    fit.slope,
                    asymptotics::lhy_coefficient(),
                    LHY_SLOPE_TOLERANCE,
                ),
                Check::below("runtime [s]", start.elapsed().as_secs_f64(), 300.0),
            ])
        },
    )
}

/// The full-potential functional misses the LHY coefficient.
pub fn bogoliubov_negative() -> CriterionReport {
    criterion(
        "bogoliubov-negative",
        "full-potential Bogoliubov slope differs from 128/(15 sqrt pi)",
        Some("the 5% threshold is a chosen margin, not a derived bound"),
        || {
            let v = negative_result_potential()?;
            let a = scattering::solve(&v, Dim::Three, &ScatterSpec::default())?.a;
            let vhat0 = v.integral(Dim::Three)?;
            let mode = InteractionMode::FullPotential(v);
            let points = bogoliubov::sweep(
                &bogoliubov::default_sweep_densities(),
                &mode,
                &GridSpec::default(),
                &SolverSpec::default(),
            )?;
            let fit = bogoliubov::lhy_slope(&points)?;
            Ok(vec![
                Check::at_least("v_hat(0) / (8 pi a)", vhat0 / (8.0 * PI * a), 2.0),
                Check::rel_outside(
                    "fitted slope",
                    fit.slope,
                    asymptotics::lhy_coefficient(),
                    NEGATIVE_RESULT_THRESHOLD,
                ),
            ])
        },
    )
}

/// The α̌ equation reproduces 4πρ²a and α̌ = −ρω.
pub fn alpha_identity() -> CriterionReport {
    criterion(
        "alpha-identity",
        "alpha equation energy = 4 pi rho^2 a and alpha = -rho omega",
        None,
        || {
            let rho = 1e-3;
            let s = bogoliubov::solve_alpha_equation(
                &RadialPotential::soft_sphere(10.0, 1.0)?,
                rho,
                &ScatterSpec::default(),
            )?;
            Ok(vec![
                Check::rel_within(
                    "energy / (4 pi rho^2 a)",
                    s.energy / (4.0 * PI * rho * rho * s.scattering_length),
                    1.0,
                    1e-6,
                ),
                Check::at_most("max |alpha + rho omega| / rho", s.max_deviation, 1e-6),
            ])
        },
    )
}

/// ẽ(γ) against (π²/3)(1 + 2/γ)⁻² and node-doubling stability.
pub fn lieb_liniger() -> CriterionReport {
    criterion(
        "lieb-liniger",
        "Lieb-Liniger energy vs (pi^2/3)(1 + 2/gamma)^-2; node doubling",
        Some("gap table: |e - (pi^2/3)(1 + 2 rho a)| / (pi^2/3 rho^3) with a = -2/c, listed as extra checks"),
        || {
            let spec = QuadSpec::default();
            let doubled = QuadSpec {
                nodes: 2 * spec.nodes,
                ..spec
            };
            let tonks = liebliniger::tonks_e_tilde();
            let mut checks = Vec::new();
            for (gamma, tol) in [(100.0, 1e-3), (1000.0, 1e-5)] {
                let e = liebliniger::solve(gamma, &spec)?.e_tilde;
                let e2 = liebliniger::solve(gamma, &doubled)?.e_tilde;
                let gap = (e - tonks * (1.0 + 2.0 / gamma).powi(-2)).abs() / tonks;
                checks.push(Check::at_most(format!("gamma = {gamma}: scaled gap"), gap, tol));
                checks.push(Check::at_most(
                    format!("gamma = {gamma}: node doubling change"),
                    (e2 - e).abs() / e,
                    1e-8,
                ));
            }
            let mut previous = f64::INFINITY;
            for rho_over_c in [1e-1, 1e-2, 1e-3] {
                let d = liebliniger::dilute_comparison(rho_over_c, 1.0, &spec)?;
                checks.push(Check::below(format!("rho/c = {rho_over_c}: gap decays"), d.gap, previous));
                previous = d.gap;
            }
            Ok(checks)
        },
    )
}

/// Exact hard rods against the first-order expansion.
pub fn hardcore_1d() -> CriterionReport {
    criterion(
        "hardcore-1d",
        "1D hard-core exact vs (pi^2/3) rho^3 (1 + 2 rho a) at rho a = 1e-3",
        None,
        || {
            let (rho, a) = (1.0, 1e-3);
            let exact = asymptotics::e1d_hardcore_exact(rho, a)?;
            let expansion = asymptotics::e1d(&DiluteInputs::new(rho, a, Dim::One)?)?;
            let tonks = PI * PI / 3.0 * rho.powi(3);
            Ok(vec![Check::at_most(
                "scaled gap",
                (exact - expansion).abs() / tonks,
                10.0 * (rho * a).powi(2),
            )])
        },
    )
}

/// π·ρ·a·R² for a = 5×10⁻³ μm, ρ = 2 μm⁻³, R = 35 μm.
pub fn mode_count() -> CriterionReport {
    criterion(
        "mode-count",
        "pi rho a R^2 for a = 5e-3, rho = 2, R = 35 (quoted as about 38)",
        None,
        || {
            let e = asymptotics::physical_estimates(2.0, 5e-3, 35.0, 70.0)?;
            Ok(vec![
                Check::at_least("mode count lower", e.mode_count, 38.0),
                Check::at_most("mode count upper", e.mode_count, 39.0),
                Check::abs_within("rounded mode count", e.mode_count_rounded, 38.0, 0.0),
            ])
        },
    )
}

/// Depletion grows with density and matches (8/(3√π))√(ρa³).
pub fn depletion() -> CriterionReport {
    criterion(
        "depletion",
        "Bogoliubov depletion monotone in density; matches (8/(3 sqrt pi)) sqrt(rho a^3)",
        None,
        || {
            let mode = InteractionMode::ScatteringConstant { a: 1.0 };
            let (grid, solver) = (GridSpec::default(), SolverSpec::default());
            let fraction = |x: f64| -> Result<f64> {
                Ok(bogoliubov::sweep_point(x, &mode, 1.0, &grid, &solver)?.depletion_fraction)
            };
            let low = fraction(1e-8)?;
            let high = fraction(1e-5)?;
            let mid = fraction(1e-6)?;
            Ok(vec![
                Check::below("fraction at 1e-8 vs 1e-5", low, high),
                Check::rel_within("fraction at 1e-6", mid, depletion_oracle(1e-6), 0.1),
            ])
        },
    )
}

/// (8/(3√π))√(ρa³).
pub fn depletion_oracle(rho_a3: f64) -> f64 {
    8.0 / (3.0 * PI.sqrt()) * rho_a3.sqrt()
}

/// Base points for the covariance check, one per formula.
fn scaling_cases() -> Vec<(Formula, f64, f64)> {
    vec![
        (Formula::Lhy, 1e-4, 0.3),
        (Formula::Wu, 1e-4, 0.3),
        (Formula::E2d, 1e-3, 0.7),
        (Formula::MoraCastin, 1e-3, 0.7),
        (Formula::E1d, 2.0, 0.01),
        (Formula::E1d, 2.0, -0.02),
        (Formula::Hardcore1d, 2.0, 0.1),
    ]
}

/// e(s⁻ᵈρ, sa) = s^{−(d+2)} e(ρ, a), with D and r_s scaled along.
pub fn scaling() -> CriterionReport {
    criterion(
        "dimensional-scaling",
        "(rho, a) -> (s^-d rho, s a) covariance of every asymptotic formula",
        None,
        || {
            let consts = HigherOrderConstants {
                hypervolume: 0.8,
                r_s: 0.2,
                c: 1.5,
                i: 0.4,
            };
            let mut checks = Vec::new();
            for (formula, rho, a) in scaling_cases() {
                let d = formula.dim().as_i32();
                let base = formula.evaluate(&DiluteInputs::new(rho, a, formula.dim())?, &consts)?;
                for s in [0.1f64, 2.0, 7.0] {
                    let scaled_inputs = DiluteInputs::new(rho * s.powi(-d), a * s, formula.dim())?;
                    let scaled = formula.evaluate(&scaled_inputs, &consts.rescaled(s))?;
                    checks.push(Check::rel_within(
                        format!("{formula} (a = {a}), s = {s}"),
                        scaled * s.powi(d + 2),
                        base,
                        1e-12,
                    ));
                }
            }
            Ok(checks)
        },
    )
}

/// Every criterion in report order.
pub fn run_all() -> Vec<CriterionReport> {
    vec![
        scattering_oracles(),
        identity(),
        lhy_coefficient(),
        bogoliubov_negative(),
        alpha_identity(),
        lieb_liniger(),
        hardcore_1d(),
        mode_count(),
        depletion(),
        scaling(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparisons() {
        assert!(Check::rel_within("x", 1.01, 1.0, 0.02).passed);
        assert!(!Check::rel_within("x", 1.03, 1.0, 0.02).passed);
        assert!(Check::rel_outside("x", 1.06, 1.0, 0.05).passed);
        assert!(!Check::rel_outside("x", 1.04, 1.0, 0.05).passed);
        assert!(Check::below("x", 1.0, 2.0).passed && !Check::below("x", 2.0, 2.0).passed);
        assert!(Check::at_most("x", 2.0, 2.0).passed);
    }

    #[test]
    fn failing_body_marks_criterion_failed() {
        let r = criterion("x", "y", None, || Err(crate::Error::FreeGas1D));
        assert!(!r.passed && r.error.is_some());
        assert!(r.summary_line().starts_with("FAIL x"));
    }

    #[test]
    fn random_potentials_are_reproducible() {
        let a = random_soft_potentials(6, 7).unwrap();
        let b = random_soft_potentials(6, 7).unwrap();
        assert_eq!(a, b);
    }
}
