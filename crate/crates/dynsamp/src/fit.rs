//! Least-squares power-law fits.

use serde::Serialize;

use crate::error::{CliError, Result};

/// Fit of `log y = intercept + slope·log x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogLogFit {
    /// Fitted exponent.
    pub slope: f64,
    /// Fitted `log` prefactor.
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual_rms: f64,
}

/// Least-squares line through `(ln x, ln y)`; needs two distinct positive
/// abscissae and positive ordinates.
pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> Result<LogLogFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(CliError::Config(
            "slope fit needs at least two points".into(),
        ));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(CliError::Config(
            "slope fit needs positive finite data".into(),
        ));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(CliError::Config(
            "slope fit needs distinct abscissae".into(),
        ));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    Ok(LogLogFit {
        slope,
        intercept,
        residual_rms: (ss / n).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let xs = [2.0, 4.0, 8.0, 16.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-1.0)).collect();
        let f = loglog_fit(&xs, &ys).unwrap();
        assert!((f.slope + 1.0).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-12);
        assert!(f.residual_rms < 1e-12);
    }

    #[test]
    fn residual_reports_scatter() {
        let f = loglog_fit(&[1.0, 2.0, 4.0], &[1.0, 4.0, 4.0]).unwrap();
        assert!(f.residual_rms > 0.1);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(loglog_fit(&[1.0], &[1.0]).is_err());
        assert!(loglog_fit(&[1.0, 1.0], &[1.0, 2.0]).is_err());
        assert!(loglog_fit(&[1.0, 2.0], &[0.0, 2.0]).is_err());
    }
}
