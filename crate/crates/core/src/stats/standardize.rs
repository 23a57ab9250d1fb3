use serde::Serialize;

use super::design::DesignMatrix;
use crate::error::{Error, Result};

/// Column means and sample standard deviations (n−1 divisor) used to
/// z-score predictors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scaling {
    pub names: Vec<String>,
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
}

impl Scaling {
    /// Maps coefficients fitted on standardized predictors (intercept
    /// first) back to the raw predictor scale.
    pub fn unscale_coefficients(&self, beta: &[f64]) -> Vec<f64> {
        let slopes: Vec<f64> = beta[1..]
            .iter()
            .zip(&self.sds)
            .map(|(b, s)| b / s)
            .collect();
        let intercept = beta[0]
            - slopes
                .iter()
                .zip(&self.means)
                .map(|(b, m)| b * m)
                .sum::<f64>();
        std::iter::once(intercept).chain(slopes).collect()
    }
}

pub fn standardize(d: &DesignMatrix) -> Result<(DesignMatrix, Scaling)> {
    let n = d.n() as f64;
    let mut means = Vec::with_capacity(d.k());
    let mut sds = Vec::with_capacity(d.k());
    let mut columns = Vec::with_capacity(d.k());
    for (name, col) in d.names().iter().zip(d.columns()) {
        let mean = col.iter().sum::<f64>() / n;
        let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let sd = var.sqrt();
        if !(sd > 0.0) {
            return Err(Error::ZeroVariance {
                column: name.clone(),
            });
        }
        columns.push(col.iter().map(|v| (v - mean) / sd).collect());
        means.push(mean);
        sds.push(sd);
    }
    let scaled = DesignMatrix::from_parts_unchecked(d.names().to_vec(), columns, d.y().to_vec());
    Ok((
        scaled,
        Scaling {
            names: d.names().to_vec(),
            means,
            sds,
        },
    ))
}
