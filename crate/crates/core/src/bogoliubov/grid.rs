use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::quadrature::gauss_legendre;
use crate::{require_positive, Error, Result};

/// How to lay out the radial momentum grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    /// Target node count before oscillation refinement.
    pub nodes: usize,
    /// Gauss–Legendre nodes per panel.
    pub order: usize,
    /// Lower end of the logarithmic region; defaults to 10⁻²·√(ρa).
    pub p_min: Option<f64>,
    /// Largest momentum Λ; defaults to 50/a.
    pub cutoff: Option<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            nodes: 400,
            order: 8,
            p_min: None,
            cutoff: None,
        }
    }
}

impl GridSpec {
    /// Twice the nodes and twice the cutoff, for refinement checks.
    pub fn refined(&self, rho: f64, a: f64) -> Self {
        Self {
            nodes: 2 * self.nodes,
            cutoff: Some(2.0 * self.cutoff.unwrap_or(DEFAULT_CUTOFF_TIMES_A / a)),
            p_min: Some(self.p_min.unwrap_or(DEFAULT_P_MIN_FACTOR * (rho * a).sqrt())),
            ..*self
        }
    }
}

const DEFAULT_P_MIN_FACTOR: f64 = 1e-2;
const DEFAULT_CUTOFF_TIMES_A: f64 = 50.0;

/// Radial nodes with weights for (2π)⁻³∫d³p f(|p|) ≈ Σ wⱼ f(pⱼ).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentumGrid {
    p: Vec<f64>,
    w: Vec<f64>,
}

impl MomentumGrid {
    /// Build a grid for density `rho` and length scale `a`. One panel covers
    /// [0, p_min]; geometric panels cover [p_min, Λ]. When `feature_length` is
    /// given, panels are split so none is wider than π/feature_length, which
    /// keeps oscillating transforms resolved.
    pub fn build(spec: &GridSpec, rho: f64, a: f64, feature_length: Option<f64>) -> Result<Self> {
        require_positive("density", rho)?;
        require_positive("length scale", a)?;
        if spec.order < 1 || spec.nodes < 2 * spec.order {
            return Err(Error::InvalidInput(format!(
                "grid needs at least two panels of {} nodes, got {} nodes",
                spec.order, spec.nodes
            )));
        }
        let p_min = spec.p_min.unwrap_or(DEFAULT_P_MIN_FACTOR * (rho * a).sqrt());
        let cutoff = spec.cutoff.unwrap_or(DEFAULT_CUTOFF_TIMES_A / a);
        require_positive("p_min", p_min)?;
        require_positive("cutoff", cutoff)?;
        if p_min >= cutoff {
            return Err(Error::InvalidInput(format!("p_min {p_min} must be below the cutoff {cutoff}")));
        }
        let panels = spec.nodes / spec.order - 1;
        let ratio = (cutoff / p_min).powf(1.0 / panels as f64);
        let mut breaks = vec![0.0, p_min];
        let max_width = feature_length.map(|l| PI / l);
        for k in 1..=panels {
            let lo = *breaks.last().unwrap();
            let hi = if k == panels { cutoff } else { p_min * ratio.powi(k as i32) };
            let pieces = match max_width {
                Some(m) => ((hi - lo) / m).ceil().max(1.0) as usize,
                None => 1,
            };
            breaks.extend((1..pieces).map(|i| lo + (hi - lo) * i as f64 / pieces as f64));
            breaks.push(hi);
        }
        let (x, wx) = gauss_legendre(spec.order);
        let mut p = Vec::with_capacity((breaks.len() - 1) * spec.order);
        let mut w = Vec::with_capacity(p.capacity());
        for b in breaks.windows(2) {
            let (mid, half) = (0.5 * (b[0] + b[1]), 0.5 * (b[1] - b[0]));
            for (xi, wi) in x.iter().zip(&wx) {
                let pj = mid + half * xi;
                p.push(pj);
                w.push(half * wi * pj * pj / (2.0 * PI * PI));
            }
        }
        Self::from_nodes(p, w)
    }

    /// A grid from explicit nodes and (2π)⁻³-normalized weights.
    pub fn from_nodes(p: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        if p.is_empty() || p.len() != w.len() {
            return Err(Error::InvalidInput("grid needs equally many nodes and weights".into()));
        }
        if !(p[0] > 0.0) || p.windows(2).any(|q| !(q[1] > q[0])) || !p.last().unwrap().is_finite() {
            return Err(Error::InvalidInput("grid nodes must be positive and strictly increasing".into()));
        }
        if w.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidInput("grid weights must be positive".into()));
        }
        Ok(Self { p, w })
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.p
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    /// Λ, the largest node.
    pub fn cutoff(&self) -> f64 {
        *self.p.last().unwrap()
    }

    /// Σ wⱼ f(pⱼ).
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.p.iter().zip(&self.w).map(|(&p, w)| w * f(p)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_gaussian_in_three_dimensions() {
        let grid = MomentumGrid::build(&GridSpec::default(), 1e-6, 1.0, None).unwrap();
        // (2π)⁻³∫e^{−p²}d³p = π^{3/2}/(8π³)
        let got = grid.integrate(|p| (-p * p).exp());
        let want = PI.powf(1.5) / (8.0 * PI.powi(3));
        assert!((got - want).abs() < 1e-12 * want, "{got} {want}");
    }

    #[test]
    fn nodes_increase_and_weights_positive() {
        let grid = MomentumGrid::build(&GridSpec::default(), 1e-5, 0.5, Some(1.0)).unwrap();
        assert!(grid.nodes().windows(2).all(|w| w[1] > w[0]));
        assert!(grid.weights().iter().all(|&w| w > 0.0));
        assert!(grid.cutoff() < 100.0 && grid.cutoff() > 99.0);
        assert!(grid.len() > 400);
    }

    #[test]
    fn refinement_leaves_smooth_integrals_unchanged() {
        let spec = GridSpec::default();
        let f = |p: f64| (-0.1 * p * p).exp();
        let coarse = MomentumGrid::build(&spec, 1e-6, 1.0, None).unwrap().integrate(f);
        let fine = MomentumGrid::build(&spec.refined(1e-6, 1.0), 1e-6, 1.0, None)
            .unwrap()
            .integrate(f);
        assert!((coarse - fine).abs() < 1e-12 * fine);
    }

    #[test]
    fn rejects_bad_layouts() {
        let spec = GridSpec {
            p_min: Some(10.0),
            cutoff: Some(1.0),
            ..GridSpec::default()
        };
        assert!(MomentumGrid::build(&spec, 1.0, 1.0, None).is_err());
        assert!(MomentumGrid::from_nodes(vec![1.0, 1.0], vec![1.0, 1.0]).is_err());
        assert!(MomentumGrid::from_nodes(vec![1.0, 2.0], vec![1.0, 0.0]).is_err());
    }
}
