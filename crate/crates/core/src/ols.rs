//! Simple (one-regressor) ordinary least squares.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub intercept: f64,
    pub slope: f64,
    /// `None` when there are no residual degrees of freedom (n = 2).
    pub intercept_se: Option<f64>,
    pub slope_se: Option<f64>,
    pub residual_sd: Option<f64>,
    pub n: usize,
}

/// Fits `y = intercept + slope * x` by least squares, using centred sums.
pub fn fit_line(x: &[f64], y: &[f64]) -> Result<LineFit> {
    if x.len() != y.len() {
        return Err(Error::InsufficientData(
            "regressor and response lengths differ",
        ));
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::InsufficientData("need at least two observations"));
    }
    let nf = n as f64;
    let x_mean = x.iter().sum::<f64>() / nf;
    let y_mean = y.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (&xi, &yi) in x.iter().zip(y) {
        let dx = xi - x_mean;
        sxx += dx * dx;
        sxy += dx * (yi - y_mean);
    }
    let spread = x
        .iter()
        .fold(0.0f64, |m, &xi| m.max(libm::fabs(xi - x_mean)));
    if !(spread > 1e-12 * (1.0 + libm::fabs(x_mean))) || sxx == 0.0 {
        return Err(Error::SingularDesign);
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;

    if n == 2 {
        return Ok(LineFit {
            intercept,
            slope,
            intercept_se: None,
            slope_se: None,
            residual_sd: None,
            n,
        });
    }
    let rss: f64 = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| {
            let r = yi - intercept - slope * xi;
            r * r
        })
        .sum();
    let s2 = rss / (nf - 2.0);
    Ok(LineFit {
        intercept,
        slope,
        intercept_se: Some(libm::sqrt(s2 * (1.0 / nf + x_mean * x_mean / sxx))),
        slope_se: Some(libm::sqrt(s2 / sxx)),
        residual_sd: Some(libm::sqrt(s2)),
        n,
    })
}
