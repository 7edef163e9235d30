use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Labelled samples `(x_i, y_i)` with `x_i ∈ R^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    inputs: Vec<Vec<f64>>,
    targets: Vec<f64>,
}

impl Dataset {
    pub fn new(inputs: Vec<Vec<f64>>, targets: Vec<f64>) -> Result<Self> {
        if inputs.is_empty() {
            return domain("dataset is empty");
        }
        if inputs.len() != targets.len() {
            return domain(format!(
                "{} inputs but {} targets",
                inputs.len(),
                targets.len()
            ));
        }
        let d = inputs[0].len();
        if d == 0 || inputs.iter().any(|x| x.len() != d) {
            return domain("inputs must share a positive dimension");
        }
        if inputs
            .iter()
            .flatten()
            .chain(&targets)
            .any(|v| !v.is_finite())
        {
            return domain("dataset contains non-finite values");
        }
        Ok(Self { inputs, targets })
    }

    pub fn inputs(&self) -> &[Vec<f64>] {
        &self.inputs
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.inputs[0].len()
    }

    /// First `m` samples and the remainder. Both parts must be nonempty.
    pub fn split_at(&self, m: usize) -> Result<(Dataset, Dataset)> {
        if m == 0 || m >= self.len() {
            return domain(format!("cannot split {} samples at {m}", self.len()));
        }
        let head = Dataset {
            inputs: self.inputs[..m].to_vec(),
            targets: self.targets[..m].to_vec(),
        };
        let tail = Dataset {
            inputs: self.inputs[m..].to_vec(),
            targets: self.targets[m..].to_vec(),
        };
        Ok((head, tail))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Dataset::new(vec![], vec![]).is_err());
        assert!(Dataset::new(vec![vec![1.0]], vec![1.0, 2.0]).is_err());
        assert!(Dataset::new(vec![vec![1.0], vec![1.0, 2.0]], vec![1.0, 2.0]).is_err());
        assert!(Dataset::new(vec![vec![f64::NAN]], vec![1.0]).is_err());
        let d = Dataset::new(vec![vec![1.0], vec![2.0], vec![3.0]], vec![1.0, 2.0, 3.0]).unwrap();
        let (a, b) = d.split_at(2).unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(b.targets(), &[3.0]);
        assert!(d.split_at(3).is_err());
    }
}
