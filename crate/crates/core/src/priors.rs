//! Noise schedule and analytic score models.
//!
//! Each prior exposes the exact score of its sigma-perturbed density
//! (the prior convolved with N(0, sigma^2 I)), so sampler behavior can be
//! checked against closed-form posteriors instead of a trained network.

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::types::dot;

/// Strictly decreasing geometric sequence of noise levels.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSchedule {
    sigmas: Vec<f64>,
}

/// Geometric schedule from `sigma_max` down to `sigma_min` in `l` levels.
/// Both endpoints are assigned exactly; interior points interpolate
/// geometrically.
pub fn make_schedule(l: usize, sigma_min: f64, sigma_max: f64) -> Result<NoiseSchedule> {
    if l < 2 {
        return Err(Error::config(format!("schedule needs at least 2 levels, got {l}")));
    }
    if !(sigma_min > 0.0 && sigma_min.is_finite() && sigma_max.is_finite() && sigma_min < sigma_max)
    {
        return Err(Error::config(format!(
            "need 0 < sigma_min < sigma_max, got {sigma_min} and {sigma_max}"
        )));
    }
    let mut sigmas = Vec::with_capacity(l);
    sigmas.push(sigma_max);
    let ratio = sigma_min / sigma_max;
    for i in 1..l - 1 {
        sigmas.push(sigma_max * ratio.powf(i as f64 / (l as f64 - 1.0)));
    }
    sigmas.push(sigma_min);
    Ok(NoiseSchedule { sigmas })
}

impl NoiseSchedule {
    /// The schedule used throughout the experiments: 500 levels from 100 down
    /// to 0.01.
    pub fn standard() -> Self {
        make_schedule(500, 0.01, 100.0).expect("constants are valid")
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    pub fn len(&self) -> usize {
        self.sigmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigmas.is_empty()
    }

    pub fn sigma_min(&self) -> f64 {
        *self.sigmas.last().unwrap()
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigmas[0]
    }
}

/// Score of a sigma-perturbed density: `score(x, sigma)` returns
/// `grad_x log p_sigma(x)` where `p_sigma = p * N(0, sigma^2 I)`.
/// `log_density` is defined up to an x-independent constant.
pub trait ScoreModel {
    fn dim(&self) -> usize;
    fn score(&self, x: &[f64], sigma: f64) -> Result<Vec<f64>>;
    fn log_density(&self, x: &[f64], sigma: f64) -> Result<f64>;
}

fn check_input(dim: usize, x: &[f64], sigma: f64) -> Result<()> {
    if x.len() != dim {
        return Err(Error::shape("score input", dim, x.len()));
    }
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::config(format!("sigma must be >= 0, got {sigma}")));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub enum Covariance {
    Isotropic(f64),
    Diagonal(Vec<f64>),
    Dense(DMatrix<f64>),
}

/// Gaussian prior N(mean, covariance); its sigma-perturbation is
/// N(mean, covariance + sigma^2 I).
#[derive(Debug, Clone)]
pub struct GaussianPrior {
    mean: Vec<f64>,
    cov: Covariance,
}

impl GaussianPrior {
    pub fn new(mean: Vec<f64>, cov: Covariance) -> Result<Self> {
        if mean.is_empty() || mean.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("mean must be non-empty and finite".to_string()));
        }
        match &cov {
            Covariance::Isotropic(v) => {
                if !(*v > 0.0 && v.is_finite()) {
                    return Err(Error::config(format!("variance must be positive, got {v}")));
                }
            }
            Covariance::Diagonal(d) => {
                if d.len() != mean.len() {
                    return Err(Error::shape("diagonal covariance", mean.len(), d.len()));
                }
                if d.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
                    return Err(Error::config("diagonal variances must be positive".to_string()));
                }
            }
            Covariance::Dense(m) => {
                if m.nrows() != mean.len() || m.ncols() != mean.len() {
                    return Err(Error::shape("dense covariance", mean.len(), m.nrows()));
                }
                let sym_err = (m - m.transpose()).abs().max();
                if sym_err > 1e-12 * m.abs().max().max(1.0) {
                    return Err(Error::config("dense covariance must be symmetric".to_string()));
                }
                if Cholesky::new(m.clone()).is_none() {
                    return Err(Error::config(
                        "dense covariance must be positive-definite".to_string(),
                    ));
                }
            }
        }
        Ok(Self { mean, cov })
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn covariance(&self) -> &Covariance {
        &self.cov
    }

    fn perturbed(&self, sigma: f64) -> Covariance {
        let s2 = sigma * sigma;
        match &self.cov {
            Covariance::Isotropic(v) => Covariance::Isotropic(v + s2),
            Covariance::Diagonal(d) => Covariance::Diagonal(d.iter().map(|v| v + s2).collect()),
            Covariance::Dense(m) => {
                let mut m = m.clone();
                for i in 0..m.nrows() {
                    m[(i, i)] += s2;
                }
                Covariance::Dense(m)
            }
        }
    }
}

impl ScoreModel for GaussianPrior {
    fn dim(&self) -> usize {
        self.mean.len()
    }

    fn score(&self, x: &[f64], sigma: f64) -> Result<Vec<f64>> {
        check_input(self.dim(), x, sigma)?;
        let diff: Vec<f64> = x.iter().zip(&self.mean).map(|(a, b)| a - b).collect();
        Ok(match self.perturbed(sigma) {
            Covariance::Isotropic(v) => diff.iter().map(|d| -d / v).collect(),
            Covariance::Diagonal(d) => diff.iter().zip(&d).map(|(a, v)| -a / v).collect(),
            Covariance::Dense(m) => {
                let chol = Cholesky::new(m).ok_or_else(|| {
                    Error::numerical("perturbed covariance lost positive-definiteness")
                })?;
                let s = chol.solve(&DVector::from_column_slice(&diff));
                s.iter().map(|v| -v).collect()
            }
        })
    }

    fn log_density(&self, x: &[f64], sigma: f64) -> Result<f64> {
        check_input(self.dim(), x, sigma)?;
        let n = self.dim() as f64;
        let diff: Vec<f64> = x.iter().zip(&self.mean).map(|(a, b)| a - b).collect();
        let (quad, log_det) = match self.perturbed(sigma) {
            Covariance::Isotropic(v) => (dot(&diff, &diff) / v, n * v.ln()),
            Covariance::Diagonal(d) => (
                diff.iter().zip(&d).map(|(a, v)| a * a / v).sum(),
                d.iter().map(|v| v.ln()).sum(),
            ),
            Covariance::Dense(m) => {
                let chol = Cholesky::new(m).ok_or_else(|| {
                    Error::numerical("perturbed covariance lost positive-definiteness")
                })?;
                let s = chol.solve(&DVector::from_column_slice(&diff));
                let log_det = 2.0 * chol.l().diagonal().iter().map(|v| v.ln()).sum::<f64>();
                (dot(&diff, s.as_slice()), log_det)
            }
        };
        Ok(-0.5 * (quad + log_det + n * (2.0 * std::f64::consts::PI).ln()))
    }
}

/// Mixture of isotropic Gaussians with fixed weights.
#[derive(Debug, Clone)]
pub struct GmmPrior {
    weights: Vec<f64>,
    means: Vec<Vec<f64>>,
    variances: Vec<f64>,
}

impl GmmPrior {
    pub fn new(weights: Vec<f64>, means: Vec<Vec<f64>>, variances: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.len() != means.len() || weights.len() != variances.len() {
            return Err(Error::shape("mixture components", weights.len(), means.len()));
        }
        if weights.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(Error::config("weights must be positive".to_string()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::config(format!("weights must sum to 1, got {total}")));
        }
        let n = means[0].len();
        if n == 0 || means.iter().any(|m| m.len() != n) {
            return Err(Error::shape("component means", n, 0));
        }
        if variances.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::config("variances must be positive".to_string()));
        }
        Ok(Self {
            weights,
            means,
            variances,
        })
    }

    /// Per-component joint log densities log(w_k N(x; mu_k, (v_k+s^2) I)).
    fn component_logs(&self, x: &[f64], sigma: f64) -> Vec<f64> {
        let n = x.len() as f64;
        let s2 = sigma * sigma;
        self.weights
            .iter()
            .zip(&self.means)
            .zip(&self.variances)
            .map(|((w, mu), v)| {
                let var = v + s2;
                let sq: f64 = x.iter().zip(mu).map(|(a, b)| (a - b) * (a - b)).sum();
                w.ln() - 0.5 * (sq / var + n * (2.0 * std::f64::consts::PI * var).ln())
            })
            .collect()
    }
}

fn log_sum_exp(logs: &[f64]) -> f64 {
    let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + logs.iter().map(|l| (l - m).exp()).sum::<f64>().ln()
}

impl ScoreModel for GmmPrior {
    fn dim(&self) -> usize {
        self.means[0].len()
    }

    fn score(&self, x: &[f64], sigma: f64) -> Result<Vec<f64>> {
        check_input(self.dim(), x, sigma)?;
        let logs = self.component_logs(x, sigma);
        let lse = log_sum_exp(&logs);
        let s2 = sigma * sigma;
        let mut out = vec![0.0; x.len()];
        for ((lk, mu), v) in logs.iter().zip(&self.means).zip(&self.variances) {
            let resp = (lk - lse).exp();
            let var = v + s2;
            for (o, (a, b)) in out.iter_mut().zip(x.iter().zip(mu)) {
                *o -= resp * (a - b) / var;
            }
        }
        Ok(out)
    }

    fn log_density(&self, x: &[f64], sigma: f64) -> Result<f64> {
        check_input(self.dim(), x, sigma)?;
        Ok(log_sum_exp(&self.component_logs(x, sigma)))
    }
}

/// Zero-mean Gaussian Markov random field on a square grid: precision
/// Q = beta * L + tau * I with L the 4-neighbor graph Laplacian.
#[derive(Debug, Clone)]
pub struct GmrfPrior {
    side: usize,
    beta: f64,
    tau: f64,
}

impl GmrfPrior {
    pub fn new(side: usize, beta: f64, tau: f64) -> Result<Self> {
        if side < 2 {
            return Err(Error::config(format!("grid side must be >= 2, got {side}")));
        }
        if !(beta > 0.0 && beta.is_finite()) || !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::config(format!(
                "beta and tau must be positive, got {beta} and {tau}"
            )));
        }
        Ok(Self { side, beta, tau })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    /// Applies the precision matrix: Q x = beta * (L x) + tau * x.
    pub fn apply_precision(&self, x: &[f64]) -> Vec<f64> {
        let s = self.side;
        let mut out = vec![0.0; x.len()];
        for i in 0..s {
            for j in 0..s {
                let p = i * s + j;
                let mut acc = 0.0;
                let mut deg = 0.0;
                if i > 0 {
                    acc += x[p - s];
                    deg += 1.0;
                }
                if i + 1 < s {
                    acc += x[p + s];
                    deg += 1.0;
                }
                if j > 0 {
                    acc += x[p - 1];
                    deg += 1.0;
                }
                if j + 1 < s {
                    acc += x[p + 1];
                    deg += 1.0;
                }
                out[p] = self.beta * (deg * x[p] - acc) + self.tau * x[p];
            }
        }
        out
    }

    /// Solves (I + sigma^2 Q) s = b by conjugate gradients to relative
    /// residual 1e-10, at most 10 n iterations.
    fn solve_shifted(&self, b: &[f64], s2: f64) -> Result<Vec<f64>> {
        let apply = |v: &[f64]| -> Vec<f64> {
            let mut q = self.apply_precision(v);
            for (qi, vi) in q.iter_mut().zip(v) {
                *qi = vi + s2 * *qi;
            }
            q
        };
        conjugate_gradient(apply, b, 1e-10, 10 * b.len())
    }
}

/// Unpreconditioned CG for a symmetric positive-definite operator.
/// Terminates when ||r|| <= tol_rel * ||b||.
fn conjugate_gradient(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    b: &[f64],
    tol_rel: f64,
    max_iter: usize,
) -> Result<Vec<f64>> {
    let b_norm = crate::types::l2_norm(b);
    if b_norm == 0.0 {
        return Ok(vec![0.0; b.len()]);
    }
    let mut x = vec![0.0; b.len()];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rs = dot(&r, &r);
    let tol = tol_rel * b_norm;
    for _ in 0..max_iter {
        if rs.sqrt() <= tol {
            return Ok(x);
        }
        let ap = apply(&p);
        let alpha = rs / dot(&p, &ap);
        if !alpha.is_finite() {
            return Err(Error::numerical("conjugate gradient broke down"));
        }
        for ((xi, pi), (ri, api)) in x.iter_mut().zip(&p).zip(r.iter_mut().zip(&ap)) {
            *xi += alpha * pi;
            *ri -= alpha * api;
        }
        let rs_new = dot(&r, &r);
        let beta = rs_new / rs;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
        rs = rs_new;
    }
    if rs.sqrt() <= tol {
        Ok(x)
    } else {
        Err(Error::numerical(format!(
            "conjugate gradient did not reach tolerance within {max_iter} iterations"
        )))
    }
}

impl ScoreModel for GmrfPrior {
    fn dim(&self) -> usize {
        self.side * self.side
    }

    /// Score of N(0, Q^{-1} + sigma^2 I): equals -(I + sigma^2 Q)^{-1} Q x,
    /// which reduces to -Q x at sigma = 0.
    fn score(&self, x: &[f64], sigma: f64) -> Result<Vec<f64>> {
        check_input(self.dim(), x, sigma)?;
        let qx = self.apply_precision(x);
        if sigma == 0.0 {
            return Ok(qx.into_iter().map(|v| -v).collect());
        }
        let s = self.solve_shifted(&qx, sigma * sigma)?;
        Ok(s.into_iter().map(|v| -v).collect())
    }

    /// -(1/2) x^T (Q^{-1} + sigma^2 I)^{-1} x, up to a constant; equals
    /// (1/2) <x, score(x)>.
    fn log_density(&self, x: &[f64], sigma: f64) -> Result<f64> {
        let s = self.score(x, sigma)?;
        Ok(0.5 * dot(x, &s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::RngSeed;
    use rand::Rng;

    /// Central-difference directional derivative of the log density.
    fn fd_directional(model: &dyn ScoreModel, x: &[f64], dir: &[f64], sigma: f64) -> f64 {
        let h = 1e-5;
        let plus: Vec<f64> = x.iter().zip(dir).map(|(a, d)| a + h * d).collect();
        let minus: Vec<f64> = x.iter().zip(dir).map(|(a, d)| a - h * d).collect();
        (model.log_density(&plus, sigma).unwrap() - model.log_density(&minus, sigma).unwrap())
            / (2.0 * h)
    }

    fn assert_fd_consistent(model: &dyn ScoreModel, sigma: f64, seed: u64, tol: f64) {
        let mut rng = RngSeed(seed).rng();
        let n = model.dim();
        let x: Vec<f64> = (0..n).map(|_| 2.0 * rng.random::<f64>() - 1.0).collect();
        let score = model.score(&x, sigma).unwrap();
        for _ in 0..10 {
            let dir: Vec<f64> = (0..n).map(|_| 2.0 * rng.random::<f64>() - 1.0).collect();
            let analytic = dot(&score, &dir);
            let fd = fd_directional(model, &x, &dir, sigma);
            let scale = analytic.abs().max(fd.abs()).max(1e-8);
            assert!(
                (analytic - fd).abs() / scale <= tol,
                "sigma {sigma}: analytic {analytic} vs fd {fd}"
            );
        }
    }

    #[test]
    fn schedule_endpoints_are_exact() {
        let s = NoiseSchedule::standard();
        assert_eq!(s.len(), 500);
        assert_eq!(s.sigma_max(), 100.0);
        assert_eq!(s.sigma_min(), 0.01);
    }

    #[test]
    fn schedule_small_cases() {
        let s = make_schedule(3, 1.0, 100.0).unwrap();
        assert_eq!(s.sigmas()[0], 100.0);
        assert!((s.sigmas()[1] - 10.0).abs() < 1e-12);
        assert_eq!(s.sigmas()[2], 1.0);
        let s = make_schedule(2, 0.5, 7.0).unwrap();
        assert_eq!(s.sigmas(), &[7.0, 0.5]);
    }

    #[test]
    fn schedule_is_geometric_and_decreasing() {
        let s = make_schedule(500, 0.01, 100.0).unwrap();
        let sig = s.sigmas();
        let ratio = sig[1] / sig[0];
        for w in sig.windows(2) {
            assert!(w[1] < w[0]);
            assert!((w[1] / w[0] - ratio).abs() <= 1e-12);
        }
    }

    #[test]
    fn schedule_rejects_bad_bounds() {
        assert!(make_schedule(1, 0.01, 100.0).is_err());
        assert!(make_schedule(10, 0.0, 100.0).is_err());
        assert!(make_schedule(10, 2.0, 1.0).is_err());
        assert!(make_schedule(10, 1.0, 1.0).is_err());
    }

    #[test]
    fn gaussian_score_closed_forms() {
        let g = GaussianPrior::new(vec![0.0], Covariance::Isotropic(1.0)).unwrap();
        // x = 2, v = 1, sigma = 1 -> -2 / (1 + 1) = -1
        let s = g.score(&[2.0], 1.0).unwrap();
        assert!((s[0] + 1.0).abs() < 1e-15);
        // score at the mean is zero
        let g2 = GaussianPrior::new(vec![1.0, -2.0], Covariance::Diagonal(vec![0.5, 3.0])).unwrap();
        let s = g2.score(&[1.0, -2.0], 0.7).unwrap();
        assert!(s.iter().all(|v| v.abs() <= 1e-12));
    }

    #[test]
    fn gaussian_dense_matches_finite_difference() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, 0.3, 0.1, 0.3, 1.5, 0.2, 0.1, 0.2, 1.0]);
        let g = GaussianPrior::new(vec![0.1, -0.2, 0.4], Covariance::Dense(m)).unwrap();
        for sigma in [0.0, 0.5, 10.0] {
            assert_fd_consistent(&g, sigma, 31, 1e-5);
        }
    }

    #[test]
    fn gaussian_rejects_bad_covariance() {
        assert!(GaussianPrior::new(vec![0.0], Covariance::Isotropic(0.0)).is_err());
        assert!(GaussianPrior::new(vec![0.0, 0.0], Covariance::Diagonal(vec![1.0])).is_err());
        let not_pd = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(GaussianPrior::new(vec![0.0, 0.0], Covariance::Dense(not_pd)).is_err());
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(GaussianPrior::new(vec![0.0, 0.0], Covariance::Dense(asym)).is_err());
    }

    #[test]
    fn gmm_single_component_reduces_to_gaussian() {
        let mu = vec![0.3, -0.7];
        let gmm = GmmPrior::new(vec![1.0], vec![mu.clone()], vec![0.8]).unwrap();
        let g = GaussianPrior::new(mu, Covariance::Isotropic(0.8)).unwrap();
        let x = [0.9, 0.4];
        for sigma in [0.0, 0.5, 10.0] {
            let a = gmm.score(&x, sigma).unwrap();
            let b = g.score(&x, sigma).unwrap();
            for (u, v) in a.iter().zip(&b) {
                assert!((u - v).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn gmm_symmetric_mixture_scores_zero_at_origin() {
        let gmm = GmmPrior::new(
            vec![0.5, 0.5],
            vec![vec![1.0, 2.0], vec![-1.0, -2.0]],
            vec![0.7, 0.7],
        )
        .unwrap();
        let s = gmm.score(&[0.0, 0.0], 0.3).unwrap();
        assert!(s.iter().all(|v| v.abs() <= 1e-12));
    }

    #[test]
    fn gmm_matches_finite_difference() {
        let gmm = GmmPrior::new(
            vec![0.3, 0.7],
            vec![vec![-1.0], vec![2.0]],
            vec![0.5, 1.5],
        )
        .unwrap();
        for sigma in [0.0, 0.5, 10.0] {
            assert_fd_consistent(&gmm, sigma, 47, 1e-5);
        }
    }

    #[test]
    fn gmm_weights_must_normalize() {
        assert!(GmmPrior::new(vec![0.5, 0.4], vec![vec![0.0], vec![1.0]], vec![1.0, 1.0]).is_err());
        assert!(GmmPrior::new(vec![0.5, 0.5], vec![vec![0.0], vec![1.0, 2.0]], vec![1.0, 1.0])
            .is_err());
    }

    #[test]
    fn gmrf_zero_input_and_constant_input() {
        let g = GmrfPrior::new(4, 2.0, 0.3).unwrap();
        let s = g.score(&vec![0.0; 16], 0.5).unwrap();
        assert!(s.iter().all(|&v| v == 0.0));
        // Laplacian annihilates constants, so at sigma = 0 only tau acts.
        let s = g.score(&vec![3.0; 16], 0.0).unwrap();
        for v in s {
            assert_eq!(v, -0.3 * 3.0);
        }
    }

    #[test]
    fn gmrf_matches_dense_oracle() {
        let side = 4;
        let g = GmrfPrior::new(side, 1.3, 0.2).unwrap();
        let n = side * side;
        // dense Q assembled independently from the neighbor rule
        let mut q = DMatrix::zeros(n, n);
        for i in 0..side {
            for j in 0..side {
                let p = i * side + j;
                let mut neighbors = Vec::new();
                if i > 0 {
                    neighbors.push(p - side);
                }
                if i + 1 < side {
                    neighbors.push(p + side);
                }
                if j > 0 {
                    neighbors.push(p - 1);
                }
                if j + 1 < side {
                    neighbors.push(p + 1);
                }
                q[(p, p)] = 1.3 * neighbors.len() as f64 + 0.2;
                for nb in neighbors {
                    q[(p, nb)] = -1.3;
                }
            }
        }
        let sigma = 0.5f64;
        let mut rng = RngSeed(99).rng();
        let x: Vec<f64> = (0..n).map(|_| 2.0 * rng.random::<f64>() - 1.0).collect();
        // oracle: -(Q^{-1} + sigma^2 I)^{-1} x by direct dense solve
        let q_inv = q.clone().try_inverse().unwrap();
        let m = &q_inv + DMatrix::identity(n, n) * sigma.powi(2);
        let oracle = -(m.try_inverse().unwrap() * DVector::from_column_slice(&x));
        let s = g.score(&x, sigma).unwrap();
        for (a, b) in s.iter().zip(oracle.iter()) {
            assert!((a - b).abs() <= 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn gmrf_matches_finite_difference() {
        let g = GmrfPrior::new(4, 1.0, 0.5).unwrap();
        for sigma in [0.0, 0.5, 10.0] {
            assert_fd_consistent(&g, sigma, 63, 1e-5);
        }
    }

    #[test]
    fn score_inputs_are_validated() {
        let g = GaussianPrior::new(vec![0.0, 0.0], Covariance::Isotropic(1.0)).unwrap();
        assert!(matches!(g.score(&[1.0], 0.5), Err(Error::Shape { .. })));
        assert!(matches!(g.score(&[1.0, 2.0], -1.0), Err(Error::Config(_))));
    }
}
