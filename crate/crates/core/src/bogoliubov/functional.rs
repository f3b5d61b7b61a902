use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::Serialize;

use super::grid::MomentumGrid;
use crate::potentials::{sinc, RadialPotential};
use crate::quadrature::gauss_legendre;
use crate::{require_positive, Dim, Error, Result};

/// Which interaction enters the functional.
#[derive(Debug, Clone, PartialEq)]
pub enum InteractionMode {
    /// The Fourier transform of the potential itself.
    FullPotential(RadialPotential),
    /// v̂ ≡ 8πa everywhere, with the second-order Born counterterm that
    /// keeps the functional finite as Λ → ∞.
    ScatteringConstant { a: f64 },
}

impl InteractionMode {
    pub fn name(&self) -> &'static str {
        match self {
            InteractionMode::FullPotential(_) => "full",
            InteractionMode::ScatteringConstant { .. } => "scattering-constant",
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match self {
            InteractionMode::FullPotential(v) => {
                v.check_dim(Dim::Three)?;
                if v.is_hard_core() {
                    return Err(Error::NoFourierTransform(v.kind_name()));
                }
                Ok(())
            }
            InteractionMode::ScatteringConstant { a } => require_positive("scattering length", *a),
        }
    }
}

/// Quasi-free state on a radial momentum grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BogoliubovState {
    pub grid: MomentumGrid,
    pub gamma: Vec<f64>,
    pub alpha: Vec<f64>,
    pub rho0: f64,
}

impl BogoliubovState {
    pub fn new(grid: MomentumGrid, gamma: Vec<f64>, alpha: Vec<f64>, rho0: f64) -> Result<Self> {
        if gamma.len() != grid.len() || alpha.len() != grid.len() {
            return Err(Error::NotAState("field lengths differ from the grid".into()));
        }
        if !(rho0 >= 0.0) || !rho0.is_finite() {
            return Err(Error::NotAState(format!("condensate density {rho0} is negative")));
        }
        for (j, (&g, &a)) in gamma.iter().zip(&alpha).enumerate() {
            if !(g >= 0.0) || !g.is_finite() || !a.is_finite() {
                return Err(Error::NotAState(format!("gamma[{j}] = {g} is not a finite occupation")));
            }
            let bound = g * (1.0 + g);
            if a * a > bound * (1.0 + 1e-12) + f64::MIN_POSITIVE {
                return Err(Error::NotAState(format!(
                    "alpha[{j}]^2 = {} exceeds gamma(1 + gamma) = {bound}",
                    a * a
                )));
            }
        }
        Ok(Self { grid, gamma, alpha, rho0 })
    }

    /// γ = sinh²β, α = −sinhβ coshβ, ρ₀ = ρ − Σwγ.
    pub fn from_angles(grid: MomentumGrid, beta: &[f64], rho: f64) -> Result<Self> {
        let gamma: Vec<f64> = beta.iter().map(|b| b.sinh().powi(2)).collect();
        let alpha: Vec<f64> = beta.iter().map(|b| -0.5 * (2.0 * b).sinh()).collect();
        let rho0 = rho - dot(grid.weights(), &gamma);
        if rho0 < 0.0 {
            return Err(Error::DepletionExceedsDensity { depletion: rho - rho0, rho });
        }
        Ok(Self { grid, gamma, alpha, rho0 })
    }

    /// ρ₊ = Σwγ.
    pub fn depleted_density(&self) -> f64 {
        dot(self.grid.weights(), &self.gamma)
    }

    /// ρ = ρ₀ + ρ₊.
    pub fn density(&self) -> f64 {
        self.rho0 + self.depleted_density()
    }
}

/// Terms of the functional. `renormalization` is the constant counterterm
/// of the scattering-constant mode and zero otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    pub kinetic: f64,
    pub hartree: f64,
    pub pairing: f64,
    pub exchange: f64,
    pub renormalization: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Kernel {
    Dense(DMatrix<f64>),
    Constant(f64),
}

/// The scattering-constant functional pairs with the total density, keeps
/// only the γγ exchange and adds a Born counterterm; the full functional is
/// used verbatim.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Scheme {
    Bare,
    Renormalized,
}

/// Interaction data sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Coupling {
    pub vhat0: f64,
    pub vhat: Vec<f64>,
    pub kernel: Kernel,
    pub scheme: Scheme,
}

impl Coupling {
    pub fn new(mode: &InteractionMode, grid: &MomentumGrid) -> Result<Self> {
        mode.validate()?;
        match mode {
            InteractionMode::ScatteringConstant { a } => {
                let g = 8.0 * PI * a;
                Ok(Self {
                    vhat0: g,
                    vhat: vec![g; grid.len()],
                    kernel: Kernel::Constant(g),
                    scheme: Scheme::Renormalized,
                })
            }
            InteractionMode::FullPotential(v) => {
                let vhat = grid.nodes().iter().map(|&p| v.fourier_3d(p)).collect::<Result<Vec<_>>>()?;
                Ok(Self {
                    vhat0: v.integral(Dim::Three)?,
                    vhat,
                    kernel: Kernel::Dense(exchange_kernel(v, grid.nodes())),
                    scheme: Scheme::Bare,
                })
            }
        }
    }

    /// The same coupling with a constant kernel written out as a matrix.
    #[cfg(test)]
    pub fn densified(&self) -> Self {
        let kernel = match &self.kernel {
            Kernel::Constant(g) => Kernel::Dense(DMatrix::from_element(self.vhat.len(), self.vhat.len(), *g)),
            dense => dense.clone(),
        };
        Self { kernel, ..self.clone() }
    }

    /// (K W x)ⱼ = Σₖ K(pⱼ, pₖ) wₖ xₖ.
    pub fn apply_kernel(&self, w: &[f64], x: &[f64]) -> Vec<f64> {
        match &self.kernel {
            Kernel::Constant(g) => vec![g * dot(w, x); w.len()],
            Kernel::Dense(k) => {
                let wx: Vec<f64> = w.iter().zip(x).map(|(w, x)| w * x).collect();
                (0..w.len()).map(|j| k.row(j).iter().zip(&wx).map(|(k, y)| k * y).sum()).collect()
            }
        }
    }

    pub fn kernel_entry(&self, j: usize, k: usize) -> f64 {
        match &self.kernel {
            Kernel::Constant(g) => *g,
            Kernel::Dense(m) => m[(j, k)],
        }
    }

    /// Density multiplying the pairing term.
    pub fn pairing_density(&self, rho0: f64, rho: f64) -> f64 {
        match self.scheme {
            Scheme::Bare => rho0,
            Scheme::Renormalized => rho,
        }
    }

    pub fn energy(&self, state: &BogoliubovState) -> EnergyBreakdown {
        let grid = &state.grid;
        let (p, w) = (grid.nodes(), grid.weights());
        let rho = state.density();
        let kinetic: f64 = (0..p.len()).map(|j| w[j] * p[j] * p[j] * state.gamma[j]).sum();
        let hartree = 0.5 * self.vhat0 * rho * rho;
        let pair_sum: f64 = (0..p.len())
            .map(|j| w[j] * self.vhat[j] * (state.gamma[j] + state.alpha[j]))
            .sum();
        let pairing = self.pairing_density(state.rho0, rho) * pair_sum;
        let kg = self.apply_kernel(w, &state.gamma);
        let mut exchange = 0.5 * weighted_dot(w, &state.gamma, &kg);
        let mut renormalization = 0.0;
        match self.scheme {
            Scheme::Bare => {
                let ka = self.apply_kernel(w, &state.alpha);
                exchange += 0.5 * weighted_dot(w, &state.alpha, &ka);
            }
            Scheme::Renormalized => {
                renormalization = (0..p.len())
                    .map(|j| w[j] * (rho * self.vhat[j]).powi(2) / (4.0 * p[j] * p[j]))
                    .sum();
            }
        }
        EnergyBreakdown {
            kinetic,
            hartree,
            pairing,
            exchange,
            renormalization,
            total: kinetic + hartree + pairing + exchange + renormalization,
        }
    }
}

/// Evaluate the functional for a given state.
pub fn evaluate_functional(state: &BogoliubovState, mode: &InteractionMode) -> Result<EnergyBreakdown> {
    Ok(Coupling::new(mode, &state.grid)?.energy(state))
}

/// K(p, q) = 4π∫r²v(r) j₀(pr) j₀(qr) dr, the average of v̂(p − q) over the
/// relative orientation of p and q.
pub fn exchange_kernel(v: &RadialPotential, p: &[f64]) -> DMatrix<f64> {
    let p_max = p.iter().cloned().fold(0.0, f64::max);
    let (x, wx) = gauss_legendre(8);
    let mut r = Vec::new();
    let mut c = Vec::new();
    for b in v.breakpoints().windows(2) {
        let width = b[1] - b[0];
        let pieces = ((p_max * width / 1.5).ceil() as usize).max(1);
        let h = width / pieces as f64;
        for k in 0..pieces {
            let mid = b[0] + (k as f64 + 0.5) * h;
            for (xi, wi) in x.iter().zip(&wx) {
                let ri = mid + 0.5 * h * xi;
                r.push(ri);
                c.push(4.0 * PI * 0.5 * h * wi * ri * ri * v.value(ri));
            }
        }
    }
    let n = p.len();
    let basis = DMatrix::from_fn(n, r.len(), |j, i| sinc(p[j] * r[i]));
    let scaled = DMatrix::from_fn(n, r.len(), |j, i| basis[(j, i)] * c[i]);
    let mut k = &scaled * basis.transpose();
    for j in 0..n {
        for i in j + 1..n {
            k[(i, j)] = k[(j, i)];
        }
    }
    k
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(a, b)| a * b).sum()
}

fn weighted_dot(w: &[f64], a: &[f64], b: &[f64]) -> f64 {
    w.iter().zip(a.iter().zip(b)).map(|(w, (a, b))| w * a * b).sum()
}
