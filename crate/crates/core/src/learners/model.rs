use serde::{Deserialize, Serialize};

use super::kernel::GaussianKernel;
use crate::error::{domain, Error, Result};
use crate::losses::{clip, LossKind};

/// Identifies serialized models.
pub const MODEL_FORMAT: &str = "cmixlab-kernel-model";
pub const MODEL_VERSION: u32 = 1;

/// `f = Σ_i α_i k_σ(x_i, ·)`, with the clipping level and regularization it
/// was trained with.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelModel {
    support_points: Vec<Vec<f64>>,
    coefficients: Vec<f64>,
    kernel: GaussianKernel,
    clip_level: f64,
    lambda: f64,
    loss: LossKind,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDocument {
    format: String,
    version: u32,
    loss: LossKind,
    sigma: f64,
    lambda: f64,
    clip_level: f64,
    support_points: Vec<Vec<f64>>,
    coefficients: Vec<f64>,
}

impl KernelModel {
    pub fn new(
        support_points: Vec<Vec<f64>>,
        coefficients: Vec<f64>,
        kernel: GaussianKernel,
        clip_level: f64,
        lambda: f64,
        loss: LossKind,
    ) -> Result<Self> {
        kernel.validate()?;
        loss.validate()?;
        if support_points.is_empty() {
            return domain("model needs at least one support point");
        }
        if support_points.len() != coefficients.len() {
            return domain(format!(
                "{} support points but {} coefficients",
                support_points.len(),
                coefficients.len()
            ));
        }
        let d = support_points[0].len();
        if d == 0 || support_points.iter().any(|x| x.len() != d) {
            return domain("support points must share a positive dimension");
        }
        if support_points
            .iter()
            .flatten()
            .chain(&coefficients)
            .any(|v| !v.is_finite())
        {
            return domain("model contains non-finite values");
        }
        if !(clip_level > 0.0 && clip_level.is_finite()) {
            return domain(format!("clip level {clip_level} must be positive"));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return domain(format!("lambda {lambda} must be positive"));
        }
        Ok(Self {
            support_points,
            coefficients,
            kernel,
            clip_level,
            lambda,
            loss,
        })
    }

    pub fn support_points(&self) -> &[Vec<f64>] {
        &self.support_points
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn kernel(&self) -> GaussianKernel {
        self.kernel
    }

    pub fn clip_level(&self) -> f64 {
        self.clip_level
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn loss(&self) -> LossKind {
        self.loss
    }

    pub fn dim(&self) -> usize {
        self.support_points[0].len()
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.support_points
            .iter()
            .zip(&self.coefficients)
            .map(|(s, a)| a * self.kernel.eval(s, x))
            .sum()
    }

    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return domain(format!(
                "model expects dimension {}, got {}",
                self.dim(),
                x.len()
            ));
        }
        Ok(self.eval(x))
    }

    pub fn predict_clipped(&self, x: &[f64]) -> Result<f64> {
        Ok(clip(self.predict(x)?, self.clip_level))
    }

    /// `‖f‖²_H = αᵀ K α`.
    pub fn rkhs_norm_sq(&self) -> f64 {
        let n = self.coefficients.len();
        let mut total = 0.0;
        for i in 0..n {
            let mut row = 0.0;
            for j in 0..n {
                row += self.coefficients[j]
                    * self
                        .kernel
                        .eval(&self.support_points[i], &self.support_points[j]);
            }
            total += self.coefficients[i] * row;
        }
        total
    }

    /// `λ ‖f‖²_H`.
    pub fn regularizer(&self) -> f64 {
        self.lambda * self.rkhs_norm_sq()
    }

    pub fn to_json(&self) -> String {
        let doc = ModelDocument {
            format: MODEL_FORMAT.into(),
            version: MODEL_VERSION,
            loss: self.loss,
            sigma: self.kernel.sigma,
            lambda: self.lambda,
            clip_level: self.clip_level,
            support_points: self.support_points.clone(),
            coefficients: self.coefficients.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.format != MODEL_FORMAT {
            return Err(Error::Parse(format!(
                "unknown model format `{}`",
                doc.format
            )));
        }
        if doc.version != MODEL_VERSION {
            return Err(Error::Parse(format!(
                "unsupported model version {}",
                doc.version
            )));
        }
        Self::new(
            doc.support_points,
            doc.coefficients,
            GaussianKernel { sigma: doc.sigma },
            doc.clip_level,
            doc.lambda,
            doc.loss,
        )
        .map_err(|e| Error::Parse(e.to_string()))
    }
}
