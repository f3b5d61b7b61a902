//! Closed-form dilute-limit energy densities and order-of-magnitude
//! estimates for condensates in boxes.
//!
//! Every evaluator returns the printed truncation exactly; `log` is the
//! natural logarithm throughout.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{require_positive, Dim, Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_533;

/// 128/(15√π), the coefficient of √(ρa³) in the three-dimensional expansion.
pub fn lhy_coefficient() -> f64 {
    128.0 / (15.0 * PI.sqrt())
}

/// 8(4π/3 − √3), the coefficient of ρa³ ln(ρa³).
pub fn wu_log_coefficient() -> f64 {
    8.0 * (4.0 * PI / 3.0 - 3f64.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiluteInputs {
    pub rho: f64,
    pub a: f64,
    pub dim: Dim,
}

impl DiluteInputs {
    pub fn new(rho: f64, a: f64, dim: Dim) -> Result<Self> {
        require_positive("density", rho)?;
        if !a.is_finite() {
            return Err(Error::InvalidInput(format!("scattering length must be finite, got {a}")));
        }
        if dim != Dim::One && a < 0.0 {
            return Err(Error::InvalidInput(format!(
                "scattering length must be >= 0 in dimension {dim}, got {a}"
            )));
        }
        Ok(Self { rho, a, dim })
    }

    /// ρ|a|ᵈ.
    pub fn diluteness(&self) -> f64 {
        self.rho * self.a.abs().powi(self.dim.as_i32())
    }

    /// Y = |log(ρa²)|⁻¹, zero for a = 0.
    pub fn y(&self) -> f64 {
        let x = self.rho * self.a * self.a;
        if x == 0.0 {
            0.0
        } else {
            1.0 / x.ln().abs()
        }
    }

    fn expect(&self, dim: Dim, formula: Formula) -> Result<()> {
        if self.dim == dim {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "formula {formula} is for dimension {dim}, inputs are in dimension {}",
                self.dim
            )))
        }
    }

    fn require_2d_dilute(&self) -> Result<()> {
        let x = self.rho * self.a * self.a;
        if x >= 1.0 {
            Err(Error::NotDilute(format!("rho a^2 = {x} >= 1")))
        } else {
            Ok(())
        }
    }
}

/// Constants entering the beyond-leading corrections. Only the
/// Euler–Mascheroni constant is fixed; the others are user input and default
/// to zero.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HigherOrderConstants {
    /// Three-body scattering hypervolume D (length⁴).
    #[serde(rename = "D")]
    pub hypervolume: f64,
    /// Effective range r_s.
    pub r_s: f64,
    /// Universal three-dimensional constant C.
    #[serde(rename = "C")]
    pub c: f64,
    /// Universal two-dimensional constant I.
    #[serde(rename = "I")]
    pub i: f64,
}

impl HigherOrderConstants {
    /// Hard-core effective range r_s = 2a/3.
    pub fn hard_core(a: f64) -> Self {
        Self {
            r_s: 2.0 * a / 3.0,
            ..Self::default()
        }
    }

    /// ℰ = D/(12πa⁴) + π r_s/a + C.
    pub fn wu_constant(&self, a: f64) -> f64 {
        self.hypervolume / (12.0 * PI * a.powi(4)) + PI * self.r_s / a + self.c
    }

    /// Constants of a system with all lengths multiplied by `s`.
    pub fn rescaled(&self, s: f64) -> Self {
        Self {
            hypervolume: self.hypervolume * s.powi(4),
            r_s: self.r_s * s,
            ..*self
        }
    }

    /// Metadata note: D, r_s, C and I are never derived here.
    pub fn provenance_note(&self) -> &'static str {
        "D, r_s, C and I are user-supplied (default 0); Euler-Mascheroni fixed at 0.577215664901533"
    }
}

/// 4πρ²a(1 + 128/(15√π)·(ρa³)^{1/2}).
pub fn e3d_lhy(inputs: &DiluteInputs) -> Result<f64> {
    inputs.expect(Dim::Three, Formula::Lhy)?;
    let DiluteInputs { rho, a, .. } = *inputs;
    Ok(4.0 * PI * rho * rho * a * (1.0 + lhy_coefficient() * (rho * a.powi(3)).sqrt()))
}

/// 4πρ²Y(1 + Y log(Yπ) + (2Γ + ½)Y).
pub fn e2d(inputs: &DiluteInputs) -> Result<f64> {
    inputs.expect(Dim::Two, Formula::E2d)?;
    inputs.require_2d_dilute()?;
    let y = inputs.y();
    if y == 0.0 {
        return Ok(0.0);
    }
    let rho = inputs.rho;
    Ok(4.0 * PI * rho * rho * y * (1.0 + y * (y * PI).ln() + (2.0 * EULER_GAMMA + 0.5) * y))
}

/// Second-order two-dimensional expansion including the universal constant I.
pub fn mora_castin(inputs: &DiluteInputs, consts: &HigherOrderConstants) -> Result<f64> {
    inputs.expect(Dim::Two, Formula::MoraCastin)?;
    inputs.require_2d_dilute()?;
    let y = inputs.y();
    if y == 0.0 {
        return Ok(0.0);
    }
    let rho = inputs.rho;
    let l = (y * PI).ln();
    let bracket = 1.0 + y * (l + 2.0 * EULER_GAMMA + 0.5) + y * y * (l + 2.0 * EULER_GAMMA + 1.0).powi(2)
        - 8.0 * consts.i / PI * y * y;
    Ok(4.0 * PI * rho * rho * y * bracket)
}

/// (π²/3)ρ³(1 + 2ρa).
pub fn e1d(inputs: &DiluteInputs) -> Result<f64> {
    inputs.expect(Dim::One, Formula::E1d)?;
    let DiluteInputs { rho, a, .. } = *inputs;
    Ok(PI * PI / 3.0 * rho.powi(3) * (1.0 + 2.0 * rho * a))
}

/// Exact hard-rod energy density (π²/3)ρ³(1 − ρa)⁻².
pub fn e1d_hardcore_exact(rho: f64, a: f64) -> Result<f64> {
    require_positive("density", rho)?;
    if !(a >= 0.0) || !a.is_finite() {
        return Err(Error::InvalidInput(format!("hard-rod length must be >= 0, got {a}")));
    }
    if rho * a >= 1.0 {
        return Err(Error::Jammed { rho, limit: 1.0 / a });
    }
    Ok(PI * PI / 3.0 * rho.powi(3) / (1.0 - rho * a).powi(2))
}

/// Three-dimensional expansion through order ρa³.
pub fn wu_expansion(inputs: &DiluteInputs, consts: &HigherOrderConstants) -> Result<f64> {
    inputs.expect(Dim::Three, Formula::Wu)?;
    let DiluteInputs { rho, a, .. } = *inputs;
    if !(a > 0.0) {
        return Err(Error::InvalidInput("the ρa³ ln(ρa³) expansion needs a > 0".into()));
    }
    let x = rho * a.powi(3);
    if x >= 1.0 {
        return Err(Error::NotDilute(format!("rho a^3 = {x} >= 1")));
    }
    let bracket = 1.0 + lhy_coefficient() * x.sqrt() + wu_log_coefficient() * x * x.ln() + consts.wu_constant(a) * x;
    Ok(4.0 * PI * rho * rho * a * bracket)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formula {
    Lhy,
    E2d,
    MoraCastin,
    E1d,
    Hardcore1d,
    Wu,
}

impl Formula {
    pub const ALL: [Formula; 6] = [
        Formula::Lhy,
        Formula::E2d,
        Formula::MoraCastin,
        Formula::E1d,
        Formula::Hardcore1d,
        Formula::Wu,
    ];

    pub fn dim(self) -> Dim {
        match self {
            Formula::Lhy | Formula::Wu => Dim::Three,
            Formula::E2d | Formula::MoraCastin => Dim::Two,
            Formula::E1d | Formula::Hardcore1d => Dim::One,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Formula::Lhy => "lhy",
            Formula::E2d => "e2d",
            Formula::MoraCastin => "mora-castin",
            Formula::E1d => "e1d",
            Formula::Hardcore1d => "hardcore1d",
            Formula::Wu => "wu",
        }
    }

    pub fn evaluate(self, inputs: &DiluteInputs, consts: &HigherOrderConstants) -> Result<f64> {
        match self {
            Formula::Lhy => e3d_lhy(inputs),
            Formula::E2d => e2d(inputs),
            Formula::MoraCastin => mora_castin(inputs, consts),
            Formula::E1d => e1d(inputs),
            Formula::Hardcore1d => {
                inputs.expect(Dim::One, self)?;
                e1d_hardcore_exact(inputs.rho, inputs.a)
            }
            Formula::Wu => wu_expansion(inputs, consts),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Formula::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown formula '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalEstimates {
    /// (ρa)^{−1/2}.
    pub healing_length: f64,
    /// Transverse modes below 4πρa in a disk of radius R: πρaR².
    pub mode_count: f64,
    pub mode_count_rounded: f64,
    /// (L√(ρa))²√(ρa³), the scale that bounds ρ₊/ρ in a box of side L.
    pub depletion_bound: f64,
}

pub fn physical_estimates(rho: f64, a: f64, r_trap: f64, l_box: f64) -> Result<PhysicalEstimates> {
    require_positive("density", rho)?;
    require_positive("scattering length", a)?;
    require_positive("trap radius", r_trap)?;
    require_positive("box length", l_box)?;
    let rho_a = rho * a;
    let mode_count = PI * rho_a * r_trap * r_trap;
    Ok(PhysicalEstimates {
        healing_length: rho_a.powf(-0.5),
        mode_count,
        mode_count_rounded: mode_count.round(),
        depletion_bound: l_box * l_box * rho_a * (rho * a.powi(3)).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn lhy_values() {
        let free = DiluteInputs::new(1.0, 0.0, Dim::Three).unwrap();
        assert_eq!(e3d_lhy(&free).unwrap(), 0.0);
        let unit = DiluteInputs::new(1.0, 1.0, Dim::Three).unwrap();
                let v = e3d_lhy(&unit).unwrap();
        assert!(close(v, 73.066_128_725_267_46, 1e-13), "{v}");
        assert!(close(lhy_coefficient(), 4.814_417_779_607_521, 1e-14));

        let corr = |rho: f64| e3d_lhy(&DiluteInputs::new(rho, 1.0, Dim::Three).unwrap()).unwrap() / (4.0 * PI * rho * rho) - 1.0;
        assert!(close(corr(0.25e-6), 0.5 * corr(1e-6), 1e-12));
    }

    #[test]
    fn two_dimensional_values() {
        let inputs = DiluteInputs::new(1e-10, 1.0, Dim::Two).unwrap();
        let y = inputs.y();
        assert!(close(y, 1.0 / (10.0 * 10f64.ln()), 1e-15));
        assert!(close(y, 0.043_429_448_19, 1e-9));
        let want = 4.0 * PI * 1e-20 * y * (1.0 + y * (y * PI).ln() + (2.0 * 0.577_215_7 + 0.5) * y);
        assert!(close(e2d(&inputs).unwrap(), want, 1e-7));
        assert_eq!(e2d(&DiluteInputs::new(1.0, 0.0, Dim::Two).unwrap()).unwrap(), 0.0);
        assert!(matches!(
            e2d(&DiluteInputs::new(2.0, 1.0, Dim::Two).unwrap()),
            Err(Error::NotDilute(_))
        ));
    }

    #[test]
    fn e2d_increasing_in_density() {
        let values: Vec<f64> = (0..200)
            .map(|k| 10f64.powf(-12.0 + 8.0 * k as f64 / 199.0))
            .map(|rho| e2d(&DiluteInputs::new(rho, 1.0, Dim::Two).unwrap()).unwrap())
            .collect();
        assert!(values.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn mora_castin_hand_value() {
        let inputs = DiluteInputs::new(1e-10, 1.0, Dim::Two).unwrap();
        let consts = HigherOrderConstants { i: 1.0, ..Default::default() };
        let y = 0.043_429_448_190_325_18_f64;
        let l = (y * PI).ln();
        let g = 0.577_215_664_901_533;
        let want = 4.0 * PI * 1e-20 * y
            * (1.0 + y * (l + 2.0 * g + 0.5) + y * y * (l + 2.0 * g + 1.0).powi(2) - 8.0 / PI * y * y);
        assert!(close(mora_castin(&inputs, &consts).unwrap(), want, 1e-14));
        // the shared first-order prefix
        let diff = mora_castin(&inputs, &HigherOrderConstants::default()).unwrap() - e2d(&inputs).unwrap();
        assert!(diff.abs() <= 4.0 * PI * 1e-20 * y.powi(3) * 10.0);
    }

    #[test]
    fn mora_castin_approaches_e2d() {
        // the relative gap is Y²(log(Yπ) + 2Γ + 1)² to leading order
        for x in [1e-10, 1e-40, 1e-150] {
            let i = DiluteInputs::new(x, 1.0, Dim::Two).unwrap();
            let y = i.y();
            let bound = 2.0 * (y * ((y * PI).ln() + 2.0 * EULER_GAMMA + 1.0)).powi(2);
            let ratio = mora_castin(&i, &HigherOrderConstants::default()).unwrap() / e2d(&i).unwrap();
            assert!((ratio - 1.0).abs() <= bound, "{x}: {ratio}");
        }
    }

    #[test]
    fn one_dimensional_values() {
        let tonks = DiluteInputs::new(2.0, 0.0, Dim::One).unwrap();
        assert!(close(e1d(&tonks).unwrap(), PI * PI / 3.0 * 8.0, 1e-15));
        let c = 50.0;
        let ll = DiluteInputs::new(1.0, -2.0 / c, Dim::One).unwrap();
        assert!(close(e1d(&ll).unwrap(), PI * PI / 3.0 * (1.0 - 4.0 / c), 1e-15));
        let rod = DiluteInputs::new(1.0, 0.1, Dim::One).unwrap();
        assert!(close(e1d(&rod).unwrap(), 3.947_841_76, 1e-8));
    }

    #[test]
    fn hard_rods() {
        assert!(close(e1d_hardcore_exact(3.0, 0.0).unwrap(), 9.0 * PI * PI, 1e-15));
        assert!(close(e1d_hardcore_exact(1.0, 0.5).unwrap(), PI * PI / 3.0 * 4.0, 1e-15));
        assert!(matches!(e1d_hardcore_exact(2.0, 0.5), Err(Error::Jammed { .. })));
        let (rho, a) = (1.0, 1e-3);
        let exact = e1d_hardcore_exact(rho, a).unwrap();
        let expansion = e1d(&DiluteInputs::new(rho, a, Dim::One).unwrap()).unwrap();
        assert!((exact - expansion) / (PI * PI / 3.0) <= 10.0 * (rho * a).powi(2));
    }

    #[test]
    fn hard_rods_convex_in_density() {
        let a = 1.0;
        let h = 0.9 / a / 400.0;
        let e: Vec<f64> = (0..=400).map(|k| e1d_hardcore_exact(k.max(1) as f64 * h, a).unwrap()).collect();
        assert!(e.windows(3).skip(1).all(|w| w[0] - 2.0 * w[1] + w[2] >= 0.0));
    }

    #[test]
    fn wu_values() {
        let consts = HigherOrderConstants::default();
        let lhy_ratio = |x: f64| {
            let i = DiluteInputs::new(x, 1.0, Dim::Three).unwrap();
            wu_expansion(&i, &consts).unwrap() / e3d_lhy(&i).unwrap()
        };
        assert!((lhy_ratio(1e-14) - 1.0).abs() < (lhy_ratio(1e-8) - 1.0).abs());

        let hc = HigherOrderConstants::hard_core(1.0);
        assert!(close(hc.wu_constant(1.0), 2.0 * PI / 3.0, 1e-15));

        let x = 1e-6;
        let want = 4.0 * PI * x * x * (1.0 + 4.814_417_779_607_521 * 1e-3 + 8.0 * (4.0 * PI / 3.0 - 3f64.sqrt()) * x * x.ln());
        let got = wu_expansion(&DiluteInputs::new(x, 1.0, Dim::Three).unwrap(), &consts).unwrap();
        assert!(close(got, want, 1e-9));
    }

    #[test]
    fn physical_estimate_values() {
        let e = physical_estimates(2.0, 5e-3, 35.0, 70.0).unwrap();
        assert!((e.mode_count - 38.484_510).abs() < 1e-5);
        assert_eq!(e.mode_count_rounded, 38.0);
        assert_eq!(physical_estimates(1.0, 1.0, 1.0, 1.0).unwrap().healing_length, 1.0);
        let b1 = physical_estimates(1e-3, 1.0, 1.0, 3.0).unwrap().depletion_bound;
        let b2 = physical_estimates(1e-3, 1.0, 1.0, 6.0).unwrap().depletion_bound;
        assert!(close(b2, 4.0 * b1, 1e-15));
    }

    #[test]
    fn formula_names_round_trip() {
        for f in Formula::ALL {
            assert_eq!(f.name().parse::<Formula>().unwrap(), f);
        }
        assert!("nope".parse::<Formula>().is_err());
    }
}
