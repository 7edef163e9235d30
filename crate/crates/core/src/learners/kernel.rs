use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// `k_σ(x, x') = exp(−‖x − x'‖² / σ²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianKernel {
    pub sigma: f64,
}

impl GaussianKernel {
    pub fn new(sigma: f64) -> Result<Self> {
        let k = Self { sigma };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return domain(format!("kernel width {} must be positive", self.sigma));
        }
        Ok(())
    }

    pub fn eval(&self, x: &[f64], z: &[f64]) -> f64 {
        let d2: f64 = x.iter().zip(z).map(|(a, b)| (a - b) * (a - b)).sum();
        (-d2 / (self.sigma * self.sigma)).exp()
    }
}

pub fn kernel_matrix(kernel: &GaussianKernel, points: &[Vec<f64>]) -> Result<Mat<f64>> {
    kernel.validate()?;
    if points.is_empty() {
        return domain("kernel matrix of an empty point set");
    }
    let n = points.len();
    let mut k = Mat::<f64>::zeros(n, n);
    for j in 0..n {
        k[(j, j)] = 1.0;
        for i in j + 1..n {
            let v = kernel.eval(&points[i], &points[j]);
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    Ok(k)
}

/// `K[i][j] = k(rows[i], cols[j])`.
pub fn cross_kernel(kernel: &GaussianKernel, rows: &[Vec<f64>], cols: &[Vec<f64>]) -> Mat<f64> {
    Mat::from_fn(rows.len(), cols.len(), |i, j| {
        kernel.eval(&rows[i], &cols[j])
    })
}
