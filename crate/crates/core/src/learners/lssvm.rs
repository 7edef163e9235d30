use super::kernel::{kernel_matrix, GaussianKernel};
use super::model::KernelModel;
use super::solve::spd_solve;
use crate::data::Dataset;
use crate::error::{domain, Result};
use crate::losses::LossKind;

/// Least-squares SVM: minimizes `λ‖f‖²_H + (1/n) Σ (y_i − f(x_i))²` by
/// solving `(K + nλI) α = y` with a Cholesky factorization.
pub fn fit_lssvm(
    data: &Dataset,
    lambda: f64,
    kernel: &GaussianKernel,
    clip_level: f64,
) -> Result<KernelModel> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return domain(format!("lambda {lambda} must be positive"));
    }
    let n = data.len();
    let mut a = kernel_matrix(kernel, data.inputs())?;
    let shift = n as f64 * lambda;
    for i in 0..n {
        a[(i, i)] += shift;
    }
    let alpha = spd_solve(&a, data.targets())?;
    KernelModel::new(
        data.inputs().to_vec(),
        alpha,
        *kernel,
        clip_level,
        lambda,
        LossKind::LeastSquares,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_point() {
        let d = Dataset::new(vec![vec![0.4]], vec![1.0]).unwrap();
        let m = fit_lssvm(&d, 1.0, &GaussianKernel { sigma: 1.0 }, 1.0).unwrap();
        assert_eq!(m.coefficients(), &[0.5]);
        assert_eq!(m.predict(&[0.4]).unwrap(), 0.5);
    }

    #[test]
    fn strong_regularization_shrinks_to_zero() {
        let d = Dataset::new(vec![vec![0.1], vec![0.5], vec![0.9]], vec![1.0, -1.0, 0.5]).unwrap();
        let m = fit_lssvm(&d, 1e8, &GaussianKernel { sigma: 0.5 }, 1.0).unwrap();
        for x in [0.0, 0.3, 0.9] {
            assert!(m.predict(&[x]).unwrap().abs() < 1e-7);
        }
    }

    #[test]
    fn objective_not_worse_than_zero_function() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let xs: Vec<Vec<f64>> = (0..50).map(|_| vec![rng.random::<f64>()]).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|x| (6.0 * x[0]).sin() + 0.1 * rng.random::<f64>())
            .collect();
        let d = Dataset::new(xs.clone(), ys.clone()).unwrap();
        let lambda = 1e-3;
        let m = fit_lssvm(&d, lambda, &GaussianKernel { sigma: 0.3 }, 2.0).unwrap();
        let risk: f64 = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (y - m.predict(x).unwrap()).powi(2))
            .sum::<f64>()
            / 50.0;
        let zero = ys.iter().map(|y| y * y).sum::<f64>() / 50.0;
        assert!(m.regularizer() + risk <= zero);
    }

    #[test]
    fn rejects_nonpositive_lambda() {
        let d = Dataset::new(vec![vec![0.4]], vec![1.0]).unwrap();
        assert!(fit_lssvm(&d, 0.0, &GaussianKernel { sigma: 1.0 }, 1.0).is_err());
    }
}
