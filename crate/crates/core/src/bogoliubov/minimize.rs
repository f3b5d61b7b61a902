use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::functional::{dot, BogoliubovState, Coupling, EnergyBreakdown, InteractionMode, Scheme};
use super::grid::{GridSpec, MomentumGrid};
use crate::fit::{fit_line, log_space, LineFit};
use crate::scattering::{self, ScatterSpec};
use crate::{require_positive, Dim, Error, Result};

/// Stopping rules for [`minimize`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSpec {
    pub max_iterations: usize,
    /// Gradient sup-norm target in units of 4πρ²a.
    pub relative_tolerance: f64,
    /// Per-node floor, in units of machine epsilon times the magnitude of
    /// the terms summed into that gradient component.
    pub roundoff_factor: f64,
}

impl Default for SolverSpec {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            relative_tolerance: 1e-10,
            roundoff_factor: 1e3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diagnostics {
    pub iterations: usize,
    pub max_gradient: f64,
    /// 10⁻¹⁰·4πρ²a (or the requested multiple).
    pub gradient_tolerance: f64,
    /// Nodes whose stationarity was decided by the roundoff floor.
    pub roundoff_limited_nodes: usize,
    pub feasibility_projections: usize,
    /// Scattering length used for normalization and grid scales.
    pub scattering_length: f64,
    pub grid_nodes: usize,
    pub cutoff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Minimized {
    pub state: BogoliubovState,
    pub energy: EnergyBreakdown,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Depletion {
    pub rho_plus: f64,
    pub fraction: f64,
}

pub fn depletion(state: &BogoliubovState) -> Depletion {
    let rho_plus = state.depleted_density();
    let rho = state.density();
    Depletion {
        rho_plus,
        fraction: if rho > 0.0 { rho_plus / rho } else { 0.0 },
    }
}

/// Scattering length of the mode's interaction.
pub fn mode_scattering_length(mode: &InteractionMode) -> Result<f64> {
    mode.validate()?;
    match mode {
        InteractionMode::ScatteringConstant { a } => Ok(*a),
        InteractionMode::FullPotential(v) => Ok(scattering::solve(v, Dim::Three, &ScatterSpec::default())?.a),
    }
}

/// Minimize the functional at fixed total density over γ = sinh²β,
/// α = −sinhβ coshβ.
pub fn minimize(rho: f64, mode: &InteractionMode, grid_spec: &GridSpec, solver: &SolverSpec) -> Result<Minimized> {
    require_positive("density", rho)?;
    let a = mode_scattering_length(mode)?;
    minimize_with_length(rho, mode, a, grid_spec, solver)
}

fn feature_length(mode: &InteractionMode) -> Option<f64> {
    match mode {
        InteractionMode::FullPotential(v) => Some(v.feature_length()),
        InteractionMode::ScatteringConstant { .. } => None,
    }
}

fn minimize_with_length(
    rho: f64,
    mode: &InteractionMode,
    a: f64,
    grid_spec: &GridSpec,
    solver: &SolverSpec,
) -> Result<Minimized> {
    require_positive("scattering length", a)?;
    let grid = MomentumGrid::build(grid_spec, rho, a, feature_length(mode))?;
    let coupling = Coupling::new(mode, &grid)?;
    let tol = solver.relative_tolerance * 4.0 * PI * rho * rho * a;
    let problem = Problem {
        grid: &grid,
        coupling: &coupling,
        rho,
    };
    let (beta, stats) = problem.newton(tol, solver)?;
    let state = BogoliubovState::from_angles(grid.clone(), &beta, rho)?;
    let energy = coupling.energy(&state);
    Ok(Minimized {
        state,
        energy,
        diagnostics: Diagnostics {
            iterations: stats.iterations,
            max_gradient: stats.max_gradient,
            gradient_tolerance: tol,
            roundoff_limited_nodes: stats.roundoff_limited,
            feasibility_projections: stats.projections,
            scattering_length: a,
            grid_nodes: grid.len(),
            cutoff: grid.cutoff(),
        },
    })
}

struct Problem<'a> {
    grid: &'a MomentumGrid,
    coupling: &'a Coupling,
    rho: f64,
}

struct Stats {
    iterations: usize,
    max_gradient: f64,
    roundoff_limited: usize,
    projections: usize,
}

struct Local {
    /// Energy minus its β-independent part.
    merit: f64,
    grad: DVector<f64>,
    /// Magnitude of the terms summed into each gradient component.
    scale: Vec<f64>,
}

const PROJECTION_SHRINK: f64 = 1e-6;
const MAX_CONSECUTIVE_PROJECTIONS: usize = 5;

impl Problem<'_> {
    fn initial_angles(&self) -> Vec<f64> {
        let p = self.grid.nodes();
        (0..p.len())
            .map(|j| {
                let b = self.rho * self.coupling.vhat[j];
                let a = p[j] * p[j] + b;
                0.5 * (b / a).clamp(-0.999, 0.999).atanh()
            })
            .collect()
    }

    fn fields(beta: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let gamma = beta.iter().map(|b| b.sinh().powi(2)).collect();
        let alpha = beta.iter().map(|b| -0.5 * (2.0 * b).sinh()).collect();
        (gamma, alpha)
    }

    /// Shrink γ when the depletion would exceed ρ. Returns whether it acted.
    fn project(&self, beta: &mut [f64]) -> bool {
        let (gamma, _) = Self::fields(beta);
        let depleted = dot(self.grid.weights(), &gamma);
        if depleted < self.rho {
            return false;
        }
        let factor = self.rho / depleted * (1.0 - PROJECTION_SHRINK);
        for (b, g) in beta.iter_mut().zip(&gamma) {
            *b = b.signum() * (g * factor).sqrt().asinh();
        }
        true
    }

    fn merit(&self, beta: &[f64]) -> f64 {
        let (gamma, alpha) = Self::fields(beta);
        let (p, w) = (self.grid.nodes(), self.grid.weights());
        let c = self.coupling;
        let depleted = dot(w, &gamma);
        let pair_rho = c.pairing_density(self.rho - depleted, self.rho);
        let kinetic: f64 = (0..p.len()).map(|j| w[j] * p[j] * p[j] * gamma[j]).sum();
        let pair: f64 = (0..p.len()).map(|j| w[j] * c.vhat[j] * (gamma[j] + alpha[j])).sum();
        let kg = c.apply_kernel(w, &gamma);
        let mut exchange = 0.5 * (0..p.len()).map(|j| w[j] * gamma[j] * kg[j]).sum::<f64>();
        if c.scheme == Scheme::Bare {
            let ka = c.apply_kernel(w, &alpha);
            exchange += 0.5 * (0..p.len()).map(|j| w[j] * alpha[j] * ka[j]).sum::<f64>();
        }
        kinetic + pair_rho * pair + exchange
    }

    /// Partial derivatives in (γ, α) and their magnitudes.
    fn first_order(&self, gamma: &[f64], alpha: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
        let (p, w) = (self.grid.nodes(), self.grid.weights());
        let c = self.coupling;
        let n = p.len();
        let rho0 = self.rho - dot(w, gamma);
        let pair_rho = c.pairing_density(rho0, self.rho);
        let kg = c.apply_kernel(w, gamma);
        let abs_gamma_kernel = self.abs_kernel_apply(gamma);
        let mut e_gamma = vec![0.0; n];
        let mut e_alpha = vec![0.0; n];
        let mut mag_gamma = vec![0.0; n];
        let mut mag_alpha = vec![0.0; n];
        let s: f64 = (0..n).map(|j| w[j] * c.vhat[j] * (gamma[j] + alpha[j])).sum();
        let s_abs: f64 = (0..n).map(|j| w[j] * c.vhat[j].abs() * (gamma[j] + alpha[j].abs())).sum();
        let (ka, abs_alpha_kernel) = match c.scheme {
            Scheme::Bare => (c.apply_kernel(w, alpha), self.abs_kernel_apply(alpha)),
            Scheme::Renormalized => (vec![0.0; n], vec![0.0; n]),
        };
        for j in 0..n {
            let pairing = pair_rho * w[j] * c.vhat[j];
            e_gamma[j] = w[j] * p[j] * p[j] + pairing + w[j] * kg[j];
            mag_gamma[j] = w[j] * p[j] * p[j] + pairing.abs() + w[j] * abs_gamma_kernel[j];
            e_alpha[j] = pairing + w[j] * ka[j];
            mag_alpha[j] = pairing.abs() + w[j] * abs_alpha_kernel[j];
            if c.scheme == Scheme::Bare {
                e_gamma[j] -= w[j] * s;
                mag_gamma[j] += w[j] * s_abs;
            }
        }
        (e_gamma, e_alpha, mag_gamma, mag_alpha)
    }

    fn abs_kernel_apply(&self, x: &[f64]) -> Vec<f64> {
        let w = self.grid.weights();
        let n = w.len();
        (0..n)
            .map(|j| (0..n).map(|k| (self.coupling.kernel_entry(j, k) * w[k] * x[k]).abs()).sum())
            .collect()
    }

    fn local(&self, beta: &[f64]) -> Local {
        let (gamma, alpha) = Self::fields(beta);
        let (e_gamma, e_alpha, mag_gamma, mag_alpha) = self.first_order(&gamma, &alpha);
        let n = beta.len();
        let mut grad = DVector::zeros(n);
        let mut scale = vec![0.0; n];
        for j in 0..n {
            let (s2, c2) = ((2.0 * beta[j]).sinh(), (2.0 * beta[j]).cosh());
            grad[j] = e_gamma[j] * s2 - e_alpha[j] * c2;
            scale[j] = mag_gamma[j] * s2.abs() + mag_alpha[j] * c2;
        }
        Local {
            merit: self.merit(beta),
            grad,
            scale,
        }
    }

    fn hessian(&self, beta: &[f64]) -> DMatrix<f64> {
        let (gamma, alpha) = Self::fields(beta);
        let (e_gamma, e_alpha, _, _) = self.first_order(&gamma, &alpha);
        let w = self.grid.weights();
        let c = self.coupling;
        let n = beta.len();
        let dg: Vec<f64> = beta.iter().map(|b| (2.0 * b).sinh()).collect();
        let da: Vec<f64> = beta.iter().map(|b| -(2.0 * b).cosh()).collect();
        let wv: Vec<f64> = (0..n).map(|k| w[k] * c.vhat[k]).collect();
        DMatrix::from_fn(n, n, |j, k| {
            let m = w[j] * c.kernel_entry(j, k) * w[k];
            let (gg, ga, ag, aa) = match c.scheme {
                Scheme::Bare => (m - w[j] * wv[k] - wv[j] * w[k], -w[j] * wv[k], -wv[j] * w[k], m),
                Scheme::Renormalized => (m, 0.0, 0.0, 0.0),
            };
            let mut h = dg[j] * gg * dg[k] + dg[j] * ga * da[k] + da[j] * ag * dg[k] + da[j] * aa * da[k];
            if j == k {
                let (s2, c2) = ((2.0 * beta[j]).sinh(), (2.0 * beta[j]).cosh());
                h += e_gamma[j] * 2.0 * c2 - e_alpha[j] * 2.0 * s2;
            }
            h
        })
    }

    /// Thresholds per node: the absolute target or the roundoff floor.
    fn converged(&self, local: &Local, tol: f64, solver: &SolverSpec) -> (bool, f64, usize) {
        let mut ok = true;
        let mut floor_hits = 0;
        let mut worst = 0.0f64;
        for (g, s) in local.grad.iter().zip(&local.scale) {
            let floor = solver.roundoff_factor * f64::EPSILON * s;
            worst = worst.max(g.abs());
            if g.abs() > tol.max(floor) {
                ok = false;
            } else if g.abs() > tol {
                floor_hits += 1;
            }
        }
        (ok, worst, floor_hits)
    }

    /// Damped Newton iteration with Jacobi-scaled Levenberg–Marquardt
    /// regularization and a backtracking line search.
    fn newton(&self, tol: f64, solver: &SolverSpec) -> Result<(Vec<f64>, Stats)> {
        let mut beta = self.initial_angles();
        let mut projections = 0;
        let mut consecutive = 0;
        if self.project(&mut beta) {
            projections += 1;
        }
        let mut local = self.local(&beta);
        let mut damping = 1e-8;
        for iteration in 0..=solver.max_iterations {
            let (done, worst, floor_hits) = self.converged(&local, tol, solver);
            if done {
                return Ok((
                    beta,
                    Stats {
                        iterations: iteration,
                        max_gradient: worst,
                        roundoff_limited: floor_hits,
                        projections,
                    },
                ));
            }
            if iteration == solver.max_iterations {
                return Err(Error::NoConvergence {
                    what: "Bogoliubov minimization",
                    iterations: iteration,
                    residual: worst,
                });
            }
            let hessian = self.hessian(&beta);
            let diag: Vec<f64> = (0..beta.len()).map(|j| hessian[(j, j)].abs().max(f64::MIN_POSITIVE)).collect();
            let step = loop {
                let mut shifted = hessian.clone();
                for (j, d) in diag.iter().enumerate() {
                    shifted[(j, j)] += damping * d;
                }
                match shifted.cholesky() {
                    Some(ch) => break ch.solve(&(-&local.grad)),
                    None => {
                        damping = (damping * 10.0).max(1e-6);
                        if damping > 1e12 {
                            return Err(Error::NoConvergence {
                                what: "Bogoliubov minimization (regularization)",
                                iterations: iteration,
                                residual: worst,
                            });
                        }
                    }
                }
            };
            let slope = local.grad.dot(&step);
            let noise = 1e-13 * local.merit.abs().max(local.scale.iter().sum::<f64>() * 1e-3);
            let mut t = 1.0;
            let accepted = loop {
                let mut trial: Vec<f64> = beta.iter().zip(step.iter()).map(|(b, s)| b + t * s).collect();
                let projected = self.project(&mut trial);
                let trial_local = self.local(&trial);
                let decrease = trial_local.merit - local.merit;
                let sufficient = decrease <= 1e-4 * t * slope;
                let within_noise = decrease.abs() <= noise && trial_local.grad.amax() < local.grad.amax();
                if trial_local.merit.is_finite() && (sufficient || within_noise) {
                    break Some((trial, trial_local, projected));
                }
                t *= 0.5;
                if t < 1e-12 {
                    break None;
                }
            };
            match accepted {
                Some((trial, trial_local, projected)) => {
                    beta = trial;
                    local = trial_local;
                    if projected {
                        projections += 1;
                        consecutive += 1;
                        if consecutive >= MAX_CONSECUTIVE_PROJECTIONS {
                            let (gamma, _) = Self::fields(&beta);
                            return Err(Error::DepletionExceedsDensity {
                                depletion: dot(self.grid.weights(), &gamma),
                                rho: self.rho,
                            });
                        }
                    } else {
                        consecutive = 0;
                    }
                    damping = if t == 1.0 { (damping / 10.0).max(1e-12) } else { damping * 10.0 };
                }
                None => damping = (damping * 100.0).max(1e-6),
            }
        }
        unreachable!("loop returns on the final iteration")
    }
}

/// One row of a density sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub rho_a3: f64,
    pub rho: f64,
    pub e_over_4pi_rho2_a: f64,
    pub depletion_fraction: f64,
    pub iterations: usize,
}

/// Minimize at ρ = x/a³.
pub fn sweep_point(
    rho_a3: f64,
    mode: &InteractionMode,
    a: f64,
    grid_spec: &GridSpec,
    solver: &SolverSpec,
) -> Result<SweepPoint> {
    require_positive("rho a^3", rho_a3)?;
    let rho = rho_a3 / a.powi(3);
    let m = minimize_with_length(rho, mode, a, grid_spec, solver)?;
    Ok(SweepPoint {
        rho_a3,
        rho,
        e_over_4pi_rho2_a: m.energy.total / (4.0 * PI * rho * rho * a),
        depletion_fraction: depletion(&m.state).fraction,
        iterations: m.diagnostics.iterations,
    })
}

/// Sequential sweep over the given ρa³ values.
pub fn sweep(rho_a3: &[f64], mode: &InteractionMode, grid_spec: &GridSpec, solver: &SolverSpec) -> Result<Vec<SweepPoint>> {
    let a = mode_scattering_length(mode)?;
    rho_a3.iter().map(|&x| sweep_point(x, mode, a, grid_spec, solver)).collect()
}

/// Default densities for slope extraction: six log-spaced ρa³ in [10⁻⁸, 10⁻⁵].
pub fn default_sweep_densities() -> Vec<f64> {
    log_space(1e-8, 1e-5, 6)
}

/// Least-squares fit of e/(4πρ²a) − 1 against √(ρa³).
pub fn lhy_slope(points: &[SweepPoint]) -> Result<LineFit> {
    let x: Vec<f64> = points.iter().map(|p| p.rho_a3.sqrt()).collect();
    let y: Vec<f64> = points.iter().map(|p| p.e_over_4pi_rho2_a - 1.0).collect();
    fit_line(&x, &y)
}
