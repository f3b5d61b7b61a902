//! Non-negative, spherically symmetric, compactly supported two-body
//! potentials.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::quadrature::{self, Tolerance};
use crate::{Dim, Error, Result};

/// Default Gaussian truncation radius in units of the width σ.
pub const GAUSSIAN_CUTOFF_WIDTHS: f64 = 8.0;

/// Pointwise value of a potential. A hard core is `Infinite`, never a large
/// float.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PotentialValue {
    Finite(f64),
    Infinite,
}

impl PotentialValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            PotentialValue::Finite(v) => Some(v),
            PotentialValue::Infinite => None,
        }
    }
}

/// A radial grid with non-negative samples, linearly interpolated.
///
/// Below the first node the first value is held constant; beyond the last
/// node the potential vanishes.
#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated {
    r: Vec<f64>,
    v: Vec<f64>,
}

impl Tabulated {
    pub fn new(r: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if r.len() != v.len() {
            return Err(Error::InvalidPotential(format!(
                "tabulated grid has {} radii but {} values",
                r.len(),
                v.len()
            )));
        }
        if r.len() < 2 {
            return Err(Error::InvalidPotential("tabulated potential needs at least two nodes".into()));
        }
        if !r.iter().all(|x| x.is_finite()) || r[0] < 0.0 {
            return Err(Error::InvalidPotential("tabulated radii must be finite and >= 0".into()));
        }
        if r.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidPotential("tabulated radii must be strictly increasing".into()));
        }
        if v.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidPotential("tabulated values must be finite and >= 0".into()));
        }
        Ok(Self { r, v })
    }

    pub fn radii(&self) -> &[f64] {
        &self.r
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    fn range(&self) -> f64 {
        *self.r.last().unwrap()
    }

    /// Value on the closed segment `[r_k, r_{k+1}]` containing `r`, choosing
    /// the segment to the left at nodes when `from_left` is set.
    fn interpolate(&self, r: f64, from_left: bool) -> f64 {
        let last = self.r.len() - 1;
        if r < self.r[0] || (r == self.r[0] && from_left) {
            return self.v[0];
        }
        if r > self.r[last] || (r == self.r[last] && !from_left) {
            return 0.0;
        }
        let k = if from_left {
            self.r.partition_point(|&x| x < r).saturating_sub(1)
        } else {
            self.r.partition_point(|&x| x <= r).saturating_sub(1)
        }
        .min(last - 1);
        let t = (r - self.r[k]) / (self.r[k + 1] - self.r[k]);
        self.v[k] + t * (self.v[k + 1] - self.v[k])
    }
}

/// A two-body potential v(|x|) ≥ 0 vanishing beyond [`RadialPotential::range`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PotentialSpec", into = "PotentialSpec")]
pub enum RadialPotential {
    /// +∞ for r < radius, 0 outside.
    HardCore { radius: f64 },
    /// `height` for r < radius, 0 outside.
    SoftSphere { height: f64, radius: f64 },
    /// height·exp(−r²/width²), truncated at `cutoff`.
    Gaussian { height: f64, width: f64, cutoff: f64 },
    Tabulated(Tabulated),
    /// 2c·δ(x), one dimension only.
    Delta1D { c: f64 },
}

impl RadialPotential {
    pub fn hard_core(radius: f64) -> Result<Self> {
        positive(radius, "hard-core radius")?;
        Ok(Self::HardCore { radius })
    }

    pub fn soft_sphere(height: f64, radius: f64) -> Result<Self> {
        non_negative(height, "soft-sphere height")?;
        positive(radius, "soft-sphere radius")?;
        Ok(Self::SoftSphere { height, radius })
    }

    /// The zero potential, represented with a nominal range.
    pub fn zero(range: f64) -> Result<Self> {
        Self::soft_sphere(0.0, range)
    }

    pub fn gaussian(height: f64, width: f64) -> Result<Self> {
        Self::gaussian_with_cutoff(height, width, GAUSSIAN_CUTOFF_WIDTHS * width)
    }

    pub fn gaussian_with_cutoff(height: f64, width: f64, cutoff: f64) -> Result<Self> {
        non_negative(height, "Gaussian height")?;
        positive(width, "Gaussian width")?;
        positive(cutoff, "Gaussian cutoff")?;
        Ok(Self::Gaussian { height, width, cutoff })
    }

    pub fn tabulated(r: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        Ok(Self::Tabulated(Tabulated::new(r, v)?))
    }

    pub fn delta_1d(c: f64) -> Result<Self> {
        positive(c, "delta strength c")?;
        Ok(Self::Delta1D { c })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::HardCore { .. } => "hard-core",
            Self::SoftSphere { .. } => "soft-sphere",
            Self::Gaussian { .. } => "Gaussian",
            Self::Tabulated(_) => "tabulated",
            Self::Delta1D { .. } => "delta",
        }
    }

    /// Radius beyond which v vanishes (0 for the delta interaction).
    pub fn range(&self) -> f64 {
        match self {
            Self::HardCore { radius } | Self::SoftSphere { radius, .. } => *radius,
            Self::Gaussian { cutoff, .. } => *cutoff,
            Self::Tabulated(t) => t.range(),
            Self::Delta1D { .. } => 0.0,
        }
    }

    /// Length over which v varies; sets momentum resolution elsewhere.
    pub fn feature_length(&self) -> f64 {
        match self {
            Self::Gaussian { width, .. } => *width,
            other => other.range(),
        }
    }

    pub fn is_hard_core(&self) -> bool {
        matches!(self, Self::HardCore { .. })
    }

    pub fn has_finite_integral(&self) -> bool {
        !self.is_hard_core()
    }

    /// Whether v vanishes identically.
    pub fn is_zero(&self) -> bool {
        match self {
            Self::SoftSphere { height, .. } | Self::Gaussian { height, .. } => *height == 0.0,
            Self::Tabulated(t) => t.v.iter().all(|&v| v == 0.0),
            Self::HardCore { .. } | Self::Delta1D { .. } => false,
        }
    }

    pub fn check_dim(&self, dim: Dim) -> Result<()> {
        match (self, dim) {
            (Self::Delta1D { .. }, Dim::Two | Dim::Three) => Err(Error::IncompatibleDimension {
                kind: self.kind_name(),
                dim,
            }),
            _ => Ok(()),
        }
    }

    pub fn evaluate(&self, r: f64) -> Result<PotentialValue> {
        if !(r >= 0.0) {
            return Err(Error::InvalidInput(format!("radius must be >= 0, got {r}")));
        }
        match self {
            Self::HardCore { radius } => Ok(if r < *radius {
                PotentialValue::Infinite
            } else {
                PotentialValue::Finite(0.0)
            }),
            Self::Delta1D { .. } => Err(Error::NoPointwiseEvaluation(self.kind_name())),
            _ => Ok(PotentialValue::Finite(self.value(r))),
        }
    }

    /// v(r) for finite potentials; right-continuous at discontinuities.
    pub(crate) fn value(&self, r: f64) -> f64 {
        self.one_sided(r, false)
    }

    /// Left limit v(r⁻).
    pub(crate) fn value_from_left(&self, r: f64) -> f64 {
        self.one_sided(r, true)
    }

    fn one_sided(&self, r: f64, from_left: bool) -> f64 {
        let inside = |edge: f64| if from_left { r <= edge } else { r < edge };
        match self {
            Self::SoftSphere { height, radius } => {
                if inside(*radius) {
                    *height
                } else {
                    0.0
                }
            }
            Self::Gaussian { height, width, cutoff } => {
                if inside(*cutoff) {
                    height * (-(r / width).powi(2)).exp()
                } else {
                    0.0
                }
            }
            Self::Tabulated(t) => t.interpolate(r, from_left),
            Self::HardCore { .. } | Self::Delta1D { .. } => 0.0,
        }
    }

    /// Points in [0, range] where v or its derivative may jump, including
    /// both ends.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Self::Tabulated(t) => {
                let mut b = Vec::with_capacity(t.r.len() + 1);
                if t.r[0] > 0.0 {
                    b.push(0.0);
                }
                b.extend_from_slice(&t.r);
                b
            }
            Self::Delta1D { .. } => vec![0.0],
            other => vec![0.0, other.range()],
        }
    }

    /// ∫_{ℝᵈ} v(x) dx.
    pub fn integral(&self, dim: Dim) -> Result<f64> {
        self.check_dim(dim)?;
        match self {
            Self::HardCore { .. } => Err(Error::IntegralDiverges(self.kind_name())),
            Self::Delta1D { c } => Ok(2.0 * c),
            _ => {
                let breaks = self.breakpoints();
                let tol = Tolerance::default();
                Ok(match dim {
                    Dim::One => 2.0 * quadrature::adaptive_with_breaks(|r| self.value(r), &breaks, tol),
                    Dim::Two => 2.0 * PI * quadrature::adaptive_with_breaks(|r| r * self.value(r), &breaks, tol),
                    Dim::Three => {
                        4.0 * PI * quadrature::adaptive_with_breaks(|r| r * r * self.value(r), &breaks, tol)
                    }
                })
            }
        }
    }

    /// v̂(p) = ∫ v(x) e^{−ipx} dx in three dimensions.
    pub fn fourier_3d(&self, p: f64) -> Result<f64> {
        if !(p >= 0.0) {
            return Err(Error::InvalidInput(format!("momentum must be >= 0, got {p}")));
        }
        self.check_dim(Dim::Three)?;
        if self.is_hard_core() {
            return Err(Error::NoFourierTransform(self.kind_name()));
        }
        let breaks = self.breakpoints();
        let integrand = |r: f64| r * r * self.value(r) * sinc(p * r);
        Ok(4.0 * PI * quadrature::adaptive_with_breaks(integrand, &breaks, Tolerance::default()))
    }
}

/// sin(x)/x, the spherical Bessel function j₀.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        x.sin() / x
    }
}

fn positive(x: f64, what: &str) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidPotential(format!("{what} must be positive and finite, got {x}")))
    }
}

fn non_negative(x: f64, what: &str) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidPotential(format!("{what} must be finite and >= 0, got {x}")))
    }
}

/// JSON shape of a potential: `{"kind": "...", parameters...}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
enum PotentialSpec {
    #[serde(rename = "hardcore", alias = "hard_core")]
    HardCore {
        #[serde(rename = "R")]
        radius: f64,
    },
    #[serde(rename = "soft_sphere", alias = "softsphere")]
    SoftSphere {
        v0: f64,
        #[serde(rename = "R")]
        radius: f64,
    },
    #[serde(rename = "gaussian")]
    Gaussian {
        v0: f64,
        sigma: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cutoff: Option<f64>,
    },
    #[serde(rename = "tabulated")]
    Tabulated { r: Vec<f64>, v: Vec<f64> },
    #[serde(rename = "delta1d", alias = "delta_1d")]
    Delta1D { c: f64 },
}

impl TryFrom<PotentialSpec> for RadialPotential {
    type Error = Error;

    fn try_from(spec: PotentialSpec) -> Result<Self> {
        match spec {
            PotentialSpec::HardCore { radius } => Self::hard_core(radius),
            PotentialSpec::SoftSphere { v0, radius } => Self::soft_sphere(v0, radius),
            PotentialSpec::Gaussian { v0, sigma, cutoff } => match cutoff {
                Some(c) => Self::gaussian_with_cutoff(v0, sigma, c),
                None => Self::gaussian(v0, sigma),
            },
            PotentialSpec::Tabulated { r, v } => Self::tabulated(r, v),
            PotentialSpec::Delta1D { c } => Self::delta_1d(c),
        }
    }
}

impl From<RadialPotential> for PotentialSpec {
    fn from(p: RadialPotential) -> Self {
        match p {
            RadialPotential::HardCore { radius } => Self::HardCore { radius },
            RadialPotential::SoftSphere { height, radius } => Self::SoftSphere { v0: height, radius },
            RadialPotential::Gaussian { height, width, cutoff } => Self::Gaussian {
                v0: height,
                sigma: width,
                cutoff: Some(cutoff),
            },
            RadialPotential::Tabulated(t) => Self::Tabulated { r: t.r, v: t.v },
            RadialPotential::Delta1D { c } => Self::Delta1D { c },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn soft_sphere_transform(v0: f64, r: f64, p: f64) -> f64 {
        4.0 * PI * v0 * ((p * r).sin() - p * r * (p * r).cos()) / p.powi(3)
    }

    #[test]
    fn pointwise_values() {
        let s = RadialPotential::soft_sphere(2.0, 1.0).unwrap();
        assert_eq!(s.evaluate(0.5).unwrap(), PotentialValue::Finite(2.0));
        assert_eq!(s.evaluate(1.5).unwrap(), PotentialValue::Finite(0.0));
        let h = RadialPotential::hard_core(1.0).unwrap();
        assert_eq!(h.evaluate(0.5).unwrap(), PotentialValue::Infinite);
        assert_eq!(h.evaluate(1.5).unwrap(), PotentialValue::Finite(0.0));
        let d = RadialPotential::delta_1d(3.0).unwrap();
        assert!(matches!(d.evaluate(0.0), Err(Error::NoPointwiseEvaluation(_))));
        assert!(s.evaluate(-1.0).is_err());
    }

    #[test]
    fn one_sided_limits_at_discontinuity() {
        let s = RadialPotential::soft_sphere(2.0, 1.0).unwrap();
        assert_eq!(s.value(1.0), 0.0);
        assert_eq!(s.value_from_left(1.0), 2.0);
        let t = RadialPotential::tabulated(vec![0.0, 1.0, 2.0], vec![3.0, 1.0, 1.0]).unwrap();
        assert_eq!(t.value(0.5), 2.0);
        assert_eq!(t.value(2.0), 0.0);
        assert_eq!(t.value_from_left(2.0), 1.0);
        assert_eq!(t.value(2.5), 0.0);
    }

    #[test]
    fn integrals_match_closed_forms() {
        let s = RadialPotential::soft_sphere(2.0, 1.0).unwrap();
        let i3 = s.integral(Dim::Three).unwrap();
        assert!((i3 - 8.0 * PI / 3.0).abs() < 1e-12, "{i3}");
        assert!((s.integral(Dim::Two).unwrap() - 2.0 * PI).abs() < 1e-12);
        assert!((s.integral(Dim::One).unwrap() - 4.0).abs() < 1e-12);

        let d = RadialPotential::delta_1d(3.0).unwrap();
        assert_eq!(d.integral(Dim::One).unwrap(), 6.0);
        assert!(d.integral(Dim::Three).is_err());

        let block = RadialPotential::tabulated(vec![0.0, 1.0], vec![1.0, 1.0]).unwrap();
        assert!((block.integral(Dim::Three).unwrap() - 4.0 * PI / 3.0).abs() < 1e-12);

        let h = RadialPotential::hard_core(1.0).unwrap();
        assert!(matches!(h.integral(Dim::Three), Err(Error::IntegralDiverges(_))));
    }

    #[test]
    fn fourier_transform_of_soft_sphere_at_ten_momenta() {
        let (v0, r) = (3.0, 0.7);
        let s = RadialPotential::soft_sphere(v0, r).unwrap();
        for k in 1..=10 {
            let p = 0.37 * k as f64 * k as f64;
            let got = s.fourier_3d(p).unwrap();
            let want = soft_sphere_transform(v0, r, p);
            assert!((got - want).abs() < 1e-10 * want.abs().max(1.0), "p = {p}: {got} vs {want}");
        }
    }

    #[test]
    fn gaussian_transform_at_origin() {
        let g = RadialPotential::gaussian(1.0, 1.0).unwrap();
        let v0 = g.fourier_3d(0.0).unwrap();
        assert!((v0 - PI.powf(1.5)).abs() < 1e-10);
        assert_eq!(v0, g.integral(Dim::Three).unwrap());
        // exact transform π^{3/2} σ³ exp(−p²σ²/4)
        let p = 2.5;
        assert!((g.fourier_3d(p).unwrap() - PI.powf(1.5) * (-p * p / 4.0).exp()).abs() < 1e-11);
    }

    #[test]
    fn hard_core_has_no_transform() {
        let h = RadialPotential::hard_core(1.0).unwrap();
        assert!(matches!(h.fourier_3d(1.0), Err(Error::NoFourierTransform(_))));
        let d = RadialPotential::delta_1d(1.0).unwrap();
        assert!(matches!(d.fourier_3d(1.0), Err(Error::IncompatibleDimension { .. })));
    }

    #[test]
    fn construction_rejects_invalid_parameters() {
        assert!(RadialPotential::soft_sphere(-1.0, 1.0).is_err());
        assert!(RadialPotential::soft_sphere(1.0, 0.0).is_err());
        assert!(RadialPotential::tabulated(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(RadialPotential::tabulated(vec![0.0, 1.0], vec![1.0, -1.0]).is_err());
        assert!(RadialPotential::tabulated(vec![0.0, 1.0], vec![1.0, f64::NAN]).is_err());
        assert!(RadialPotential::delta_1d(0.0).is_err());
    }

    #[test]
    fn json_shape() {
        let h: RadialPotential = serde_json::from_str(r#"{"kind":"hardcore","R":1}"#).unwrap();
        assert_eq!(h, RadialPotential::HardCore { radius: 1.0 });
        let g: RadialPotential = serde_json::from_str(r#"{"kind":"gaussian","v0":5,"sigma":0.5}"#).unwrap();
        assert_eq!(g.range(), 4.0);
        let bad = serde_json::from_str::<RadialPotential>(r#"{"kind":"soft_sphere","v0":-1,"R":1}"#);
        assert!(bad.is_err());
        let round: RadialPotential = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(round, g);
    }
}
