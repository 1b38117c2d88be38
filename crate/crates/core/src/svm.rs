//! One-vs-rest linear SVMs with per-sample penalties.
//!
//! Each binary problem is solved in the dual
//! `min ½ αᵀQα − Σα  s.t.  0 ≤ α_i ≤ c_i,  Σ y_i α_i = 0`
//! with `Q_ij = y_i y_j x_iᵀx_j`, using SMO with second-order working set
//! selection. The equality constraint gives an exact bias (no feature
//! augmentation), and the decision function is `θᵀx + b`.

use serde::{Deserialize, Serialize};

use crate::domain::binarize_labels;
use crate::error::{Error, Result};
use crate::numerics::{axpy, dot, DenseMatrix};

const TAU: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmOptions {
    /// Stopping threshold on the maximal KKT violation `m(α) − M(α)`.
    pub tol: f64,
    /// Iteration cap in units of `n` pair updates.
    pub max_sweeps: usize,
}

impl Default for SvmOptions {
    fn default() -> Self {
        SvmOptions {
            tol: 1e-3,
            max_sweeps: 10_000,
        }
    }
}

/// Rows of `thetas` are the hyperplane normals `θ_k`; class `k` uses row `k - 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub thetas: DenseMatrix,
    pub biases: Vec<f64>,
}

impl SvmModel {
    pub fn new(thetas: DenseMatrix, biases: Vec<f64>) -> Result<Self> {
        if thetas.rows() < 2 {
            return Err(Error::invalid("a one-vs-rest model needs at least two classes"));
        }
        if thetas.rows() != biases.len() {
            return Err(Error::invalid("one bias per class is required"));
        }
        if biases.iter().any(|b| !b.is_finite()) {
            return Err(Error::invalid("non-finite bias"));
        }
        Ok(SvmModel { thetas, biases })
    }

    pub fn n_classes(&self) -> usize {
        self.biases.len()
    }

    pub fn dim(&self) -> usize {
        self.thetas.cols()
    }

    pub fn theta(&self, k: usize) -> &[f64] {
        self.thetas.row(k - 1)
    }

    pub fn bias(&self, k: usize) -> f64 {
        self.biases[k - 1]
    }

    /// `θ_kᵀx + b_k` for every class.
    pub fn decision_values(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::invalid(format!(
                "feature has dimension {}, model expects {}",
                x.len(),
                self.dim()
            )));
        }
        Ok(self
            .thetas
            .row_iter()
            .zip(&self.biases)
            .map(|(t, b)| dot(t, x) + b)
            .collect())
    }

    /// Argmax class id; exact ties go to the smallest class id.
    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        Ok(argmax(&self.decision_values(x)?) + 1)
    }

    pub fn predict_all(&self, features: &DenseMatrix) -> Result<Vec<usize>> {
        features.row_iter().map(|x| self.predict(x)).collect()
    }

    /// Fraction of rows whose prediction equals the label.
    pub fn accuracy(&self, features: &DenseMatrix, labels: &[usize]) -> Result<f64> {
        if labels.is_empty() {
            return Err(Error::invalid("accuracy of an empty set"));
        }
        let predicted = self.predict_all(features)?;
        let correct = predicted.iter().zip(labels).filter(|(p, l)| p == l).count();
        Ok(correct as f64 / labels.len() as f64)
    }
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (k, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = k;
        }
    }
    best
}

/// Primal objective of one binary problem: `½‖θ‖² + Σ c_i max(0, 1 − y_i(θᵀx_i + b))`.
pub fn hinge_objective(features: &DenseMatrix, y: &[f64], c: &[f64], theta: &[f64], bias: f64) -> f64 {
    let hinge: f64 = features
        .row_iter()
        .zip(y.iter().zip(c))
        .map(|(x, (&yi, &ci))| ci * (1.0 - yi * (dot(theta, x) + bias)).max(0.0))
        .sum();
    0.5 * dot(theta, theta) + hinge
}

#[derive(Debug, Clone)]
pub struct BinarySvm {
    pub theta: Vec<f64>,
    pub bias: f64,
    pub alpha: Vec<f64>,
    /// Final `m(α) − M(α)`.
    pub kkt_gap: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Trains one binary problem given a precomputed Gram matrix `x_iᵀx_j`.
pub fn train_binary_with_gram(
    features: &DenseMatrix,
    gram: &DenseMatrix,
    y: &[f64],
    c: &[f64],
    opts: &SvmOptions,
) -> BinarySvm {
    let n = y.len();
    let dim = features.cols();
    let has_pos = y.iter().any(|&v| v > 0.0);
    let has_neg = y.iter().any(|&v| v < 0.0);
    if !(has_pos && has_neg) {
        // The equality constraint pins α = 0; the optimum is θ = 0 with the bias on the margin.
        return BinarySvm {
            theta: vec![0.0; dim],
            bias: if has_pos { 1.0 } else { -1.0 },
            alpha: vec![0.0; n],
            kkt_gap: 0.0,
            iterations: 0,
            converged: true,
        };
    }

    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let diag: Vec<f64> = (0..n).map(|i| gram[(i, i)]).collect();
    let max_iter = opts.max_sweeps.saturating_mul(n.max(1));
    let at_upper = |a: f64, ci: f64| a >= ci;
    let at_lower = |a: f64| a <= 0.0;
    let in_up = |i: usize, a: &[f64]| {
        if y[i] > 0.0 {
            !at_upper(a[i], c[i])
        } else {
            !at_lower(a[i])
        }
    };
    let in_low = |i: usize, a: &[f64]| {
        if y[i] > 0.0 {
            !at_lower(a[i])
        } else {
            !at_upper(a[i], c[i])
        }
    };

    let mut iterations = 0;
    let mut gap;
    loop {
        // working set selection (second order)
        let mut g_max = f64::NEG_INFINITY;
        let mut i_sel = usize::MAX;
        for t in 0..n {
            if in_up(t, &alpha) {
                let v = -y[t] * grad[t];
                if v >= g_max {
                    g_max = v;
                    i_sel = t;
                }
            }
        }
        let mut g_min = f64::INFINITY;
        let mut j_sel = usize::MAX;
        let mut best_obj = f64::INFINITY;
        for t in 0..n {
            if in_low(t, &alpha) {
                let v = -y[t] * grad[t];
                if v < g_min {
                    g_min = v;
                }
                if i_sel != usize::MAX {
                    let b = g_max - v;
                    if b > 0.0 {
                        let mut a = diag[i_sel] + diag[t] - 2.0 * gram[(i_sel, t)];
                        if a <= 0.0 {
                            a = TAU;
                        }
                        let obj = -(b * b) / a;
                        if obj <= best_obj {
                            best_obj = obj;
                            j_sel = t;
                        }
                    }
                }
            }
        }
        gap = g_max - g_min;
        if gap < opts.tol || j_sel == usize::MAX || iterations >= max_iter {
            break;
        }
        iterations += 1;

        let (i, j) = (i_sel, j_sel);
        let (ci, cj) = (c[i], c[j]);
        let kij = gram[(i, j)];
        let (old_i, old_j) = (alpha[i], alpha[j]);
        if y[i] != y[j] {
            let mut quad = diag[i] + diag[j] - 2.0 * kij;
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > ci - cj {
                if alpha[i] > ci {
                    alpha[i] = ci;
                    alpha[j] = ci - diff;
                }
            } else if alpha[j] > cj {
                alpha[j] = cj;
                alpha[i] = cj + diff;
            }
        } else {
            let mut quad = diag[i] + diag[j] - 2.0 * kij;
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > ci {
                if alpha[i] > ci {
                    alpha[i] = ci;
                    alpha[j] = sum - ci;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > cj {
                if alpha[j] > cj {
                    alpha[j] = cj;
                    alpha[i] = sum - cj;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        let di = alpha[i] - old_i;
        let dj = alpha[j] - old_j;
        let (gi, gj) = (gram.row(i), gram.row(j));
        for t in 0..n {
            grad[t] += y[t] * (y[i] * gi[t] * di + y[j] * gj[t] * dj);
        }
    }

    // bias from free variables, midpoint of the feasible interval otherwise
    let (mut ub, mut lb, mut sum, mut free) = (f64::INFINITY, f64::NEG_INFINITY, 0.0, 0usize);
    for t in 0..n {
        let yg = y[t] * grad[t];
        if at_upper(alpha[t], c[t]) {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if at_lower(alpha[t]) {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            sum += yg;
            free += 1;
        }
    }
    let rho = if free > 0 { sum / free as f64 } else { (ub + lb) / 2.0 };

    let mut theta = vec![0.0; dim];
    for (t, x) in features.row_iter().enumerate() {
        if alpha[t] != 0.0 {
            axpy(alpha[t] * y[t], x, &mut theta);
        }
    }
    BinarySvm {
        theta,
        bias: -rho,
        alpha,
        kkt_gap: gap.max(0.0),
        iterations,
        converged: gap < opts.tol,
    }
}

/// Trains one binary problem with ±1 labels.
pub fn train_binary(features: &DenseMatrix, y: &[f64], c: &[f64], opts: &SvmOptions) -> BinarySvm {
    let gram = features.matmul_transposed(features);
    train_binary_with_gram(features, &gram, y, c, opts)
}

pub fn train_ovr(
    features: &DenseMatrix,
    labels: &[usize],
    n_classes: usize,
    per_sample_c: &[f64],
) -> Result<SvmModel> {
    train_ovr_with(features, labels, n_classes, per_sample_c, &SvmOptions::default())
}

/// One binary SVM per class on `features` (rows), sharing one Gram matrix.
pub fn train_ovr_with(
    features: &DenseMatrix,
    labels: &[usize],
    n_classes: usize,
    per_sample_c: &[f64],
    opts: &SvmOptions,
) -> Result<SvmModel> {
    let n = labels.len();
    if features.rows() != n || per_sample_c.len() != n {
        return Err(Error::invalid(format!(
            "{} rows, {} labels, {} penalties",
            features.rows(),
            n,
            per_sample_c.len()
        )));
    }
    if features.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("non-finite feature value"));
    }
    if per_sample_c.iter().any(|&c| !(c > 0.0) || !c.is_finite()) {
        return Err(Error::invalid("penalties must be positive and finite"));
    }
    if n_classes < 2 {
        return Err(Error::invalid("need at least two classes"));
    }
    let first = labels.first().copied();
    if n < 2 || labels.iter().all(|&l| Some(l) == first) {
        return Err(Error::Degenerate("training data contains a single class".into()));
    }

    let gram = features.matmul_transposed(features);
    let mut thetas = DenseMatrix::zeros(n_classes, features.cols());
    let mut biases: Vec<f64> = Vec::with_capacity(n_classes);
    for k in 1..=n_classes {
        if n_classes == 2 && k == 2 && labels.iter().all(|&l| l <= 2) {
            // class 2 versus rest is class 1 versus rest with the signs flipped
            let mirrored: Vec<f64> = thetas.row(0).iter().map(|v| -v).collect();
            thetas.row_mut(1).copy_from_slice(&mirrored);
            biases.push(-biases[0]);
            break;
        }
        let y = binarize_labels(labels, k, n_classes)?;
        let fit = train_binary_with_gram(features, &gram, &y, per_sample_c, opts);
        thetas.row_mut(k - 1).copy_from_slice(&fit.theta);
        biases.push(fit.bias);
    }
    SvmModel::new(thetas, biases)
}
