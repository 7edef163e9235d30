use faer::linalg::solvers::Solve;
use faer::{Mat, Side};

use crate::error::{Error, Result};

pub(crate) fn column(v: &[f64]) -> Mat<f64> {
    Mat::from_fn(v.len(), 1, |i, _| v[i])
}

pub(crate) fn to_vec(m: &Mat<f64>) -> Vec<f64> {
    (0..m.nrows()).map(|i| m[(i, 0)]).collect()
}

/// `λ_max / λ_min` of a symmetric matrix, infinite if it is not positive
/// definite, `None` if the eigenvalue iteration fails.
pub(crate) fn condition_estimate(a: &Mat<f64>) -> Option<f64> {
    let eig = a.self_adjoint_eigenvalues(Side::Lower).ok()?;
    let (lo, hi) = (eig[0], eig[eig.len() - 1]);
    Some(if lo > 0.0 { hi / lo } else { f64::INFINITY })
}

/// Solves the SPD system `a x = b` by Cholesky with one step of iterative
/// refinement.
pub(crate) fn spd_solve(a: &Mat<f64>, b: &[f64]) -> Result<Vec<f64>> {
    let llt = a.llt(Side::Lower).map_err(|e| Error::Numerical {
        message: format!("Cholesky factorization failed: {e}"),
        condition_estimate: condition_estimate(a),
    })?;
    let rhs = column(b);
    let mut x = llt.solve(&rhs);
    let residual = &rhs - a * &x;
    x += llt.solve(&residual);
    let x = to_vec(&x);
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical {
            message: "linear solve produced non-finite values".into(),
            condition_estimate: condition_estimate(a),
        });
    }
    Ok(x)
}

/// Eigendecomposition `K = U S Uᵀ` of a kernel matrix restricted to the
/// numerically positive part of the spectrum. Solving in this basis stays
/// accurate when `K` is singular (repeated inputs) and lets one
/// factorization serve every regularization level.
pub(crate) struct Spectral {
    /// `n × r` eigenvectors.
    u: Mat<f64>,
    /// The `r` retained eigenvalues.
    s: Vec<f64>,
}

impl Spectral {
    pub(crate) fn new(k: &Mat<f64>) -> Result<Self> {
        let evd = k
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Numerical {
                message: format!("eigendecomposition failed: {e:?}"),
                condition_estimate: None,
            })?;
        let n = k.nrows();
        let vals = evd.S().column_vector();
        let top = vals[n - 1].max(0.0);
        let cut = top * n as f64 * f64::EPSILON;
        let keep: Vec<usize> = (0..n).filter(|&j| vals[j] > cut).collect();
        if keep.is_empty() {
            return Err(Error::Numerical {
                message: "kernel matrix has no positive eigenvalue".into(),
                condition_estimate: None,
            });
        }
        let full = evd.U();
        let u = Mat::from_fn(n, keep.len(), |i, c| full[(i, keep[c])]);
        let s = keep.iter().map(|&j| vals[j]).collect();
        Ok(Self { u, s })
    }

    pub(crate) fn rank(&self) -> usize {
        self.s.len()
    }

    /// Coefficients and fitted values of the kernel ridge solution
    /// `(K + shift·I) α = y`, with `α` restricted to the range of `K`.
    pub(crate) fn ridge(&self, y: &[f64], shift: f64) -> (Vec<f64>, Vec<f64>) {
        let uty = self.u.transpose() * column(y);
        let a = Mat::from_fn(self.rank(), 1, |j, _| uty[(j, 0)] / (self.s[j] + shift));
        let f = Mat::from_fn(self.rank(), 1, |j, _| a[(j, 0)] * self.s[j]);
        (to_vec(&(&self.u * a)), to_vec(&(&self.u * f)))
    }

    /// Minimizer of `zᵀz + Σ_i (y_i − f_i)² / d_i` over `f = L z` with
    /// `L = U S^{1/2}`. Returns `(α, f, zᵀz)` where `α = U S^{-1/2} z`
    /// represents `f` and `zᵀz = αᵀ K α`.
    pub(crate) fn weighted_ridge(&self, y: &[f64], d: &[f64]) -> Result<(Vec<f64>, Vec<f64>, f64)> {
        let (n, r) = (self.u.nrows(), self.rank());
        let root: Vec<f64> = self.s.iter().map(|v| v.sqrt()).collect();
        let l = Mat::from_fn(n, r, |i, j| self.u[(i, j)] * root[j]);
        let l_scaled = Mat::from_fn(n, r, |i, j| l[(i, j)] / d[i]);
        let mut m = l.transpose() * &l_scaled;
        for j in 0..r {
            m[(j, j)] += 1.0;
        }
        let v = l_scaled.transpose() * column(y);
        let z = spd_solve(&m, &to_vec(&v))?;
        let zc = column(&z);
        let f = to_vec(&(&l * &zc));
        let alpha_basis = Mat::from_fn(r, 1, |j, _| z[j] / root[j]);
        let alpha = to_vec(&(&self.u * alpha_basis));
        let norm = z.iter().map(|v| v * v).sum();
        Ok((alpha, f, norm))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spd_solve_matches_direct_inverse() {
        let a = Mat::from_fn(2, 2, |i, j| [[4.0, 1.0], [1.0, 3.0]][i][j]);
        let x = spd_solve(&a, &[1.0, 2.0]).unwrap();
        assert!((x[0] - 1.0 / 11.0).abs() < 1e-15);
        assert!((x[1] - 7.0 / 11.0).abs() < 1e-15);
    }

    #[test]
    fn spd_solve_reports_indefinite_matrices() {
        let a = Mat::from_fn(2, 2, |i, j| [[1.0, 2.0], [2.0, 1.0]][i][j]);
        match spd_solve(&a, &[1.0, 1.0]) {
            Err(Error::Numerical {
                condition_estimate, ..
            }) => assert_eq!(condition_estimate, Some(f64::INFINITY)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn spectral_ridge_on_rank_one_matrix() {
        let k = Mat::from_fn(3, 3, |_, _| 1.0);
        let sp = Spectral::new(&k).unwrap();
        assert_eq!(sp.rank(), 1);
        let (alpha, f) = sp.ridge(&[1.0, 2.0, 3.0], 1.0);
        // f = 3c/(3+1)·... with c the mean: f_i = 3/(3+1)·2
        for v in &f {
            assert!((v - 1.5).abs() < 1e-12);
        }
        assert!((alpha.iter().sum::<f64>() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn weighted_ridge_is_a_weighted_mean_for_repeated_inputs() {
        let k = Mat::from_fn(3, 3, |_, _| 1.0);
        let sp = Spectral::new(&k).unwrap();
        let d = [1e-14, 2e-14, 4e-14];
        let (alpha, f, _) = sp.weighted_ridge(&[1.0, 2.0, 4.0], &d).unwrap();
        let w: Vec<f64> = d.iter().map(|v| 1.0 / v).collect();
        let mean = (w[0] + 2.0 * w[1] + 4.0 * w[2]) / (w[0] + w[1] + w[2]);
        assert!((f[0] - mean).abs() < 1e-9, "{f:?} {mean}");
        assert!((alpha.iter().sum::<f64>() - f[0]).abs() < 1e-9);
    }
}
