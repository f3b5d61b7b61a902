//! Straight-line least squares.

use serde::Serialize;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub intercept: f64,
    pub slope: f64,
    /// Root-mean-square residual.
    pub rms_residual: f64,
}

/// Fit y = intercept + slope·x.
pub fn fit_line(x: &[f64], y: &[f64]) -> Result<LineFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::InvalidInput("line fit needs at least two (x, y) pairs".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidInput("line fit needs distinct abscissae".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms_residual = (x
        .iter()
        .zip(y)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(LineFit {
        intercept,
        slope,
        rms_residual,
    })
}

/// `count` points spaced evenly in log between `lo` and `hi`.
pub fn log_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count <= 1 {
        return vec![lo; count];
    }
    let (l0, l1) = (lo.ln(), hi.ln());
    let mut xs: Vec<f64> = (0..count)
        .map(|k| (l0 + (l1 - l0) * k as f64 / (count - 1) as f64).exp())
        .collect();
    // endpoints exactly as given
    xs[0] = lo;
    xs[count - 1] = hi;
    xs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_line() {
        let x = [1.0, 2.0, 4.0, 8.0];
        let y: Vec<f64> = x.iter().map(|x| 0.5 - 3.0 * x).collect();
        let f = fit_line(&x, &y).unwrap();
        assert!((f.slope + 3.0).abs() < 1e-14 && (f.intercept - 0.5).abs() < 1e-14);
        assert!(f.rms_residual < 1e-14);
    }

    #[test]
    fn log_space_endpoints() {
        let v = log_space(1e-8, 1e-5, 6);
        assert_eq!(v.len(), 6);
        assert!((v[0] - 1e-8).abs() < 1e-22 && (v[5] - 1e-5).abs() < 1e-19);
        assert!((v[1] / v[0] - 10f64.powf(0.6)).abs() < 1e-12);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(fit_line(&[1.0], &[1.0]).is_err());
        assert!(fit_line(&[1.0, 1.0], &[1.0, 2.0]).is_err());
    }
}
