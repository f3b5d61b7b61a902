//! Zero-energy scattering: −Δu + ½vu = 0 in d = 1, 2, 3.
//!
//! The radial equation is integrated outward with classical RK4 on a grid
//! whose nodes include every breakpoint of v, then matched at the range R
//! to the exterior form
//!
//! | d | exterior u(r)  |
//! |---|----------------|
//! | 1 | r − a          |
//! | 2 | ln(r/a)        |
//! | 3 | 1 − a/r        |
//!
//! Integration continues through (R, R_out] with v = 0 so that the exterior
//! form can be checked on a nontrivial interval.

use std::f64::consts::PI;

use serde::Serialize;

use crate::potentials::RadialPotential;
use crate::{Dim, Error, Result};

/// Discretization of the radial ODE.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatterSpec {
    /// RK4 steps across [0, R].
    pub steps: usize,
    /// R_out / R.
    pub outer_factor: f64,
    /// Repeat the solve with half the steps to estimate the step error.
    pub richardson: bool,
}

impl Default for ScatterSpec {
    fn default() -> Self {
        Self {
            steps: 10_000,
            outer_factor: 2.0,
            richardson: true,
        }
    }
}

/// Ratio r₀/R at which the d = 2 integration starts.
pub const ORIGIN_OFFSET_2D: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct ScatteringSolution {
    pub dim: Dim,
    /// Scattering length.
    pub a: f64,
    /// Range R of the potential.
    pub range: f64,
    pub grid: Vec<f64>,
    /// Normalized scattering function on `grid`.
    pub u: Vec<f64>,
    /// du/dr on `grid`.
    pub du: Vec<f64>,
    /// ω = 1 − u, three dimensions only.
    pub omega: Option<Vec<f64>>,
    /// Largest relative deviation of the numerical u from the exterior form
    /// on (R, R_out].
    pub exterior_residual: f64,
    /// |a(h) − a(2h)|/15, when requested.
    pub richardson_error: Option<f64>,
}

impl ScatteringSolution {
    /// Cubic Hermite interpolation of u; zero-extended beyond the grid is not
    /// meaningful, so callers stay inside `[grid[0], grid[last]]`.
    pub fn u_at(&self, r: f64) -> f64 {
        hermite(&self.grid, &self.u, &self.du, r)
    }

    /// Exterior closed form at r ≥ R.
    pub fn exterior(&self, r: f64) -> f64 {
        exterior_form(self.dim, self.a, r)
    }

    pub fn outer_radius(&self) -> f64 {
        *self.grid.last().unwrap()
    }
}

fn exterior_form(dim: Dim, a: f64, r: f64) -> f64 {
    match dim {
        Dim::One => r - a,
        Dim::Two => (r / a).ln(),
        Dim::Three => 1.0 - a / r,
    }
}

fn hermite(x: &[f64], y: &[f64], dy: &[f64], t: f64) -> f64 {
    let k = x.partition_point(|&xi| xi <= t).clamp(1, x.len() - 1) - 1;
    let h = x[k + 1] - x[k];
    let s = (t - x[k]) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * y[k]
        + (s3 - 2.0 * s2 + s) * h * dy[k]
        + (-2.0 * s3 + 3.0 * s2) * y[k + 1]
        + (s3 - s2) * h * dy[k + 1]
}

/// Solve the zero-energy scattering equation for `potential` in `dim`.
pub fn solve(potential: &RadialPotential, dim: Dim, spec: &ScatterSpec) -> Result<ScatteringSolution> {
    potential.check_dim(dim)?;
    if spec.steps < 2 {
        return Err(Error::InvalidInput("scattering solve needs at least 2 steps".into()));
    }
    if !(spec.outer_factor > 1.0) {
        return Err(Error::InvalidInput("outer radius factor must exceed 1".into()));
    }
    match potential {
        RadialPotential::HardCore { radius } => Ok(hard_core(*radius, dim, spec)),
        RadialPotential::Delta1D { c } => Ok(delta(*c, spec)),
        _ => {
            let fine = integrate(potential, dim, spec.steps, spec.outer_factor)?;
            let mut sol = normalize(potential, dim, fine)?;
            if spec.richardson {
                let coarse = integrate(potential, dim, spec.steps / 2, spec.outer_factor)?;
                let coarse = normalize(potential, dim, coarse)?;
                sol.richardson_error = Some((sol.a - coarse.a).abs() / 15.0);
            }
            Ok(sol)
        }
    }
}

struct Trajectory {
    r: Vec<f64>,
    y: Vec<f64>,
    dy: Vec<f64>,
    /// Index of the node at r = R.
    edge: usize,
}

fn node_list(potential: &RadialPotential, dim: Dim, steps: usize, outer_factor: f64) -> (Vec<f64>, usize) {
    let range = potential.range();
    let mut breaks = potential.breakpoints();
    if dim == Dim::Two {
        breaks[0] = ORIGIN_OFFSET_2D * range;
    }
    let mut nodes = vec![breaks[0]];
    for w in breaks.windows(2) {
        let n = ((steps as f64 * (w[1] - w[0]) / range).ceil() as usize).max(2);
        let h = (w[1] - w[0]) / n as f64;
        nodes.extend((1..n).map(|i| w[0] + i as f64 * h));
        nodes.push(w[1]);
    }
    let edge = nodes.len() - 1;
    let outer = outer_factor * range;
    let n = ((steps as f64 * (outer_factor - 1.0)).ceil() as usize).max(2);
    let h = (outer - range) / n as f64;
    nodes.extend((1..n).map(|i| range + i as f64 * h));
    nodes.push(outer);
    (nodes, edge)
}

fn integrate(potential: &RadialPotential, dim: Dim, steps: usize, outer_factor: f64) -> Result<Trajectory> {
    let (r, edge) = node_list(potential, dim, steps, outer_factor);
    let rhs = |x: f64, y: [f64; 2], v: f64| -> [f64; 2] {
        let curvature = 0.5 * v * y[0];
        match dim {
            Dim::Two => [y[1], curvature - y[1] / x],
            Dim::One | Dim::Three => [y[1], curvature],
        }
    };
    // d = 3 integrates w = r·u from w(0) = 0, w'(0) = 1; d = 1, 2 integrate u
    // from u = 1, u' = 0.
    let mut state = match dim {
        Dim::Three => [0.0, 1.0],
        Dim::One | Dim::Two => [1.0, 0.0],
    };
    let mut y = Vec::with_capacity(r.len());
    let mut dy = Vec::with_capacity(r.len());
    y.push(state[0]);
    dy.push(state[1]);
    for w in r.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let h = x1 - x0;
        let xm = x0 + 0.5 * h;
        // Steps never straddle a breakpoint, so one-sided values at the ends
        // keep RK4 at full order across discontinuities of v.
        let v0 = potential.value(x0);
        let vm = potential.value(xm);
        let v1 = potential.value_from_left(x1);
        let k1 = rhs(x0, state, v0);
        let k2 = rhs(xm, [state[0] + 0.5 * h * k1[0], state[1] + 0.5 * h * k1[1]], vm);
        let k3 = rhs(xm, [state[0] + 0.5 * h * k2[0], state[1] + 0.5 * h * k2[1]], vm);
        let k4 = rhs(x1, [state[0] + h * k3[0], state[1] + h * k3[1]], v1);
        state[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        state[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        if !(state[0] > 0.0) || !state[0].is_finite() {
            return Err(Error::SignChange { r: x1 });
        }
        y.push(state[0]);
        dy.push(state[1]);
    }
    Ok(Trajectory { r, y, dy, edge })
}

fn normalize(potential: &RadialPotential, dim: Dim, t: Trajectory) -> Result<ScatteringSolution> {
    let range = potential.range();
    let (y_edge, dy_edge) = (t.y[t.edge], t.dy[t.edge]);
    let exterior = &t.r[t.edge + 1..];
    let (a, u, du) = match dim {
        Dim::Three => {
            // exterior w = c (r − a)
            let c = dy_edge;
            let a = range - y_edge / c;
            let u: Vec<f64> = t
                .r
                .iter()
                .zip(&t.y)
                .map(|(&r, &w)| if r == 0.0 { 1.0 / c } else { w / (c * r) })
                .collect();
            let du: Vec<f64> = t
                .r
                .iter()
                .zip(t.y.iter().zip(&t.dy))
                .map(|(&r, (&w, &dw))| if r == 0.0 { 0.0 } else { (dw * r - w) / (c * r * r) })
                .collect();
            (a, u, du)
        }
        Dim::One => {
            if potential.is_zero() || !(dy_edge > 0.0) {
                return Err(Error::FreeGas1D);
            }
            let c = dy_edge;
            let a = range - y_edge / c;
            (a, t.y.iter().map(|y| y / c).collect(), t.dy.iter().map(|d| d / c).collect())
        }
        Dim::Two => {
            // exterior u = C ln(r/a) with C = R u'(R)
            let c = range * dy_edge;
            if !(c > 0.0) {
                let residual = t.y[t.edge..].iter().map(|y| (y - 1.0).abs()).fold(0.0, f64::max);
                return Ok(ScatteringSolution {
                    dim,
                    a: 0.0,
                    range,
                    grid: t.r,
                    u: t.y,
                    du: t.dy,
                    omega: None,
                    exterior_residual: residual,
                    richardson_error: None,
                });
            }
            let a = range * (-y_edge / c).exp();
            (a, t.y.iter().map(|y| y / c).collect(), t.dy.iter().map(|d| d / c).collect())
        }
    };
    let exterior_residual = exterior
        .iter()
        .zip(&u[t.edge + 1..])
        .map(|(&r, &ui)| {
            let want = exterior_form(dim, a, r);
            (ui - want).abs() / want.abs().max(1.0)
        })
        .fold(0.0, f64::max);
    let omega = (dim == Dim::Three).then(|| u.iter().map(|u| 1.0 - u).collect());
    Ok(ScatteringSolution {
        dim,
        a,
        range,
        grid: t.r,
        u,
        du,
        omega,
        exterior_residual,
        richardson_error: None,
    })
}

fn hard_core(radius: f64, dim: Dim, spec: &ScatterSpec) -> ScatteringSolution {
    let n = spec.steps.max(2);
    let outer = spec.outer_factor * radius;
    let inner = match dim {
        Dim::Two => ORIGIN_OFFSET_2D * radius,
        _ => 0.0,
    };
    let mut grid: Vec<f64> = (0..n).map(|i| inner + (radius - inner) * i as f64 / n as f64).collect();
    let m = ((n as f64 * (spec.outer_factor - 1.0)).ceil() as usize).max(2);
    grid.extend((0..=m).map(|i| radius + (outer - radius) * i as f64 / m as f64));
    let (u, du): (Vec<f64>, Vec<f64>) = grid
        .iter()
        .map(|&r| {
            if r < radius {
                (0.0, 0.0)
            } else {
                let d = match dim {
                    Dim::One => 1.0,
                    Dim::Two => 1.0 / r,
                    Dim::Three => radius / (r * r),
                };
                (exterior_form(dim, radius, r), d)
            }
        })
        .unzip();
    let omega = (dim == Dim::Three).then(|| u.iter().map(|u| 1.0 - u).collect());
    ScatteringSolution {
        dim,
        a: radius,
        range: radius,
        grid,
        u,
        du,
        omega,
        exterior_residual: 0.0,
        richardson_error: None,
    }
}

/// 2cδ(x): u'(0⁺) = (c/2)u(0) gives u ∝ |x| + 2/c, so a = −2/c.
fn delta(c: f64, spec: &ScatterSpec) -> ScatteringSolution {
    let a = -2.0 / c;
    let outer = spec.outer_factor * 2.0 * a.abs();
    let n = spec.steps.max(2);
    let grid: Vec<f64> = (0..=n).map(|i| outer * i as f64 / n as f64).collect();
    let u = grid.iter().map(|r| r - a).collect();
    ScatteringSolution {
        dim: Dim::One,
        a,
        range: 0.0,
        du: vec![1.0; grid.len()],
        grid,
        u,
        omega: None,
        exterior_residual: 0.0,
        richardson_error: None,
    }
}

/// Both sides of 8πa = ∫v u and their relative gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub relative_gap: f64,
}

/// Compare 8πa with 4π∫r²v(r)u(r)dr evaluated on the solution grid.
pub fn check_identity_8pia(solution: &ScatteringSolution, potential: &RadialPotential) -> Result<IdentityCheck> {
    if solution.dim != Dim::Three {
        return Err(Error::InvalidInput("the 8*pi*a identity is three-dimensional".into()));
    }
    potential.check_dim(Dim::Three)?;
    if potential.is_hard_core() {
        return Err(Error::IdentityNotEvaluable(potential.kind_name()));
    }
    let lhs = 8.0 * PI * solution.a;
    let range = potential.range();
    let g = &solution.grid;
    let mut sum = 0.0;
    for k in 0..g.len() - 1 {
        let (r0, r1) = (g[k], g[k + 1]);
        if r0 >= range {
            break;
        }
        let h = r1 - r0;
        let rm = r0 + 0.5 * h;
        let um = 0.5 * (solution.u[k] + solution.u[k + 1]) + h * (solution.du[k] - solution.du[k + 1]) / 8.0;
        let f0 = r0 * r0 * potential.value(r0) * solution.u[k];
        let fm = rm * rm * potential.value(rm) * um;
        let f1 = r1 * r1 * potential.value_from_left(r1) * solution.u[k + 1];
        sum += h / 6.0 * (f0 + 4.0 * fm + f1);
    }
    let rhs = 4.0 * PI * sum;
    let scale = lhs.abs().max(rhs.abs());
    let relative_gap = if scale == 0.0 { 0.0 } else { (lhs - rhs).abs() / scale };
    Ok(IdentityCheck { lhs, rhs, relative_gap })
}
