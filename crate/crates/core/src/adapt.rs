//! Transform estimation (`W`-steps) and the alternating driver.
//!
//! With the classifiers fixed, the `W`-step solves
//!
//! ```text
//! min  ½‖W‖²_F + C_T Σ_ik ξ_ik + ½ D Σ_ij y_ij ‖W x_i − x_j^s‖²
//! s.t. y_ik (θ_kᵀ W x_i + b_k) ≥ 1 − ξ_ik,   ξ_ik ≥ 0
//! ```
//!
//! over target samples `i`, classes `k` and source samples `j`. With
//! `B = I + D Σ_i c_i x_i x_iᵀ`, `c_i = Σ_j y_ij` and `P = Σ_ij y_ij x_j^s x_iᵀ`
//! its dual is a box QP in one multiplier `a_ik ∈ [0, C_T]` per hinge
//! constraint:
//!
//! ```text
//! Q_(ik),(jl) = y_ik y_jl (θ_kᵀθ_l)(x_iᵀ B⁻¹ x_j)
//! maximize   −½ aᵀQa + Σ_ik a_ik (1 − y_ik b_k − D y_ik θ_kᵀ P B⁻¹ x_i)
//! W = (Σ_ik a_ik y_ik θ_k x_iᵀ + D P) B⁻¹
//! ```
//!
//! Plain max-margin transfer is the `D = 0` case, where `B = I`.

use std::borrow::Cow;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::domain::{binarize_labels, compute_pair_weights, Dataset, HyperParams, PairWeightMode, PairWeights};
use crate::error::{Error, Result};
use crate::numerics::{axpy, build_v, compute_v_block, dot, spd_factorize, DenseMatrix, SpdFactorization};
use crate::qp::{default_max_sweeps, solve_box_qp, solve_inequality_qp, BoxQp, BoxQpSolution, InequalityQp, InequalitySolution};
use crate::svm::{train_ovr_with, SvmModel, SvmOptions};

/// Largest primal variable count (`M_S·M_T + n_T·K`) the dense primal path accepts.
pub const PRIMAL_VARIABLE_LIMIT: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Mmdt,
    Mmdtl2,
}

/// Linear map from target features into the source space. When `augmented`,
/// the last column multiplies an implicit constant 1 appended to the input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformMatrix {
    w: DenseMatrix,
    augmented: bool,
}

impl TransformMatrix {
    pub fn new(w: DenseMatrix, augmented: bool) -> Result<Self> {
        if augmented && w.cols() < 2 {
            return Err(Error::invalid("augmented transform needs at least two columns"));
        }
        Ok(TransformMatrix { w, augmented })
    }

    pub fn zeros(source_dim: usize, target_dim: usize, augmented: bool) -> Self {
        TransformMatrix {
            w: DenseMatrix::zeros(source_dim, target_dim + usize::from(augmented)),
            augmented,
        }
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.w
    }

    pub fn augmented(&self) -> bool {
        self.augmented
    }

    pub fn source_dim(&self) -> usize {
        self.w.rows()
    }

    /// Target dimension, excluding the augmentation column.
    pub fn target_dim(&self) -> usize {
        self.w.cols() - usize::from(self.augmented)
    }

    /// `W x`, or `W (x; 1)` when augmented.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.target_dim() {
            return Err(Error::invalid(format!(
                "target feature has dimension {}, transform expects {}",
                x.len(),
                self.target_dim()
            )));
        }
        Ok(self
            .w
            .row_iter()
            .map(|r| {
                let mut v = dot(&r[..x.len()], x);
                if self.augmented {
                    v += r[x.len()];
                }
                v
            })
            .collect())
    }

    /// Transforms every row of `features`.
    pub fn apply_all(&self, features: &DenseMatrix) -> Result<DenseMatrix> {
        if features.cols() != self.target_dim() {
            return Err(Error::invalid(format!(
                "target features have dimension {}, transform expects {}",
                features.cols(),
                self.target_dim()
            )));
        }
        let effective = if self.augmented {
            Cow::Owned(features.append_constant_column(1.0))
        } else {
            Cow::Borrowed(features)
        };
        Ok(effective.matmul_transposed(&self.w))
    }
}

/// Everything one `W`-step depends on.
#[derive(Debug, Clone, Copy)]
pub struct WStep<'a> {
    pub source: &'a Dataset,
    pub target: &'a Dataset,
    pub model: &'a SvmModel,
    /// Required whenever the distance weight is positive.
    pub pair_weights: Option<&'a PairWeights>,
    pub hp: &'a HyperParams,
    /// Append a constant 1 to target features (`W` gets an extra column).
    pub augmented: bool,
}

impl<'a> WStep<'a> {
    pub fn validate(&self, d_weight: f64) -> Result<()> {
        let m_s = self.source.dim();
        if self.model.dim() != m_s {
            return Err(Error::invalid(format!(
                "model dimension {} differs from source dimension {m_s}",
                self.model.dim()
            )));
        }
        if self.target.n_classes() > self.model.n_classes() {
            return Err(Error::invalid("target has more classes than the model"));
        }
        if d_weight > 0.0 {
            let pw = self
                .pair_weights
                .ok_or_else(|| Error::invalid("pair weights are required when d_weight > 0"))?;
            if pw.n_target() != self.target.len() || pw.n_source() != self.source.len() {
                return Err(Error::invalid(format!(
                    "pair weights are {}x{}, expected {}x{}",
                    pw.n_target(),
                    pw.n_source(),
                    self.target.len(),
                    self.source.len()
                )));
            }
        }
        if !(self.hp.c_target > 0.0) {
            return Err(Error::invalid("c_target must be positive"));
        }
        Ok(())
    }

    /// Target rows as seen by `W`: `x_i` or `(x_i; 1)`.
    pub fn target_features(&self) -> Cow<'a, DenseMatrix> {
        if self.augmented {
            Cow::Owned(self.target.features().append_constant_column(1.0))
        } else {
            Cow::Borrowed(self.target.features())
        }
    }

    pub fn n_classes(&self) -> usize {
        self.model.n_classes()
    }

    /// `n_T × K` matrix of ±1 labels `y_ik`.
    pub fn signs(&self) -> DenseMatrix {
        let k = self.n_classes();
        let mut s = DenseMatrix::zeros(self.target.len(), k);
        for c in 1..=k {
            // class ids were range-checked against the model in validate()
            let y = binarize_labels(self.target.labels(), c, k).expect("class in range");
            for (i, v) in y.into_iter().enumerate() {
                s[(i, c - 1)] = v;
            }
        }
        s
    }

    pub fn zero_transform(&self) -> TransformMatrix {
        TransformMatrix::zeros(self.source.dim(), self.target.dim(), self.augmented)
    }

    /// Dual/primal variable index of hinge constraint `(i, k)` (0-based class).
    pub fn hinge_index(&self, i: usize, k: usize) -> usize {
        i * self.n_classes() + k
    }
}

/// `P = Σ_ij y_ij x_j^s x_iᵀ` (`M_S × M_T`), formed as `(Y X_S)ᵀ X_T`.
pub fn pair_moment(source: &DenseMatrix, targets: &DenseMatrix, pw: &PairWeights) -> DenseMatrix {
    // row i of Y X_S is the weighted source mean attached to target i
    let pulled = pw.weights().matmul(source);
    pulled.transpose().matmul(targets)
}

/// Coefficients of the dual `W`-step problem.
#[derive(Debug, Clone)]
pub struct DualSystem {
    /// `x_iᵀ B⁻¹ x_j`.
    pub gram_x: DenseMatrix,
    /// `θ_kᵀ θ_l`.
    pub gram_theta: DenseMatrix,
    /// `θ_kᵀ P B⁻¹ x_i`, indexed `(i, k)`.
    pub linear_base: DenseMatrix,
    pub b_factor: SpdFactorization,
    pub p_matrix: DenseMatrix,
    /// Rows `B⁻¹ x_i`.
    pub b_inv_targets: DenseMatrix,
    /// `y_ik`.
    pub signs: DenseMatrix,
    pub d_weight: f64,
    /// Primal optimum equals `−(box QP minimum) + constant`.
    pub constant: f64,
}

impl DualSystem {
    /// Value of the dual (maximization) objective including constant terms.
    pub fn dual_objective(&self, qp: &BoxQp, a: &[f64]) -> f64 {
        self.constant - qp.objective(a)
    }
}

pub fn mmdtl2_build_dual(step: &WStep) -> Result<(DualSystem, BoxQp)> {
    build_dual(step, step.hp.d_weight)
}

/// Builds the box-constrained dual for distance weight `d_weight`.
pub fn build_dual(step: &WStep, d_weight: f64) -> Result<(DualSystem, BoxQp)> {
    step.validate(d_weight)?;
    let targets = step.target_features();
    let n_t = targets.rows();
    let k = step.n_classes();
    let m_t = targets.cols();
    let m_s = step.source.dim();

    let (b, p_matrix, source_energy) = match step.pair_weights.filter(|_| d_weight > 0.0) {
        Some(pw) => {
            let b = compute_v_block(&targets, pw, d_weight)?;
            let p = pair_moment(step.source.features(), &targets, pw);
            let sq: Vec<f64> = step.source.features().row_iter().map(|x| dot(x, x)).collect();
            let energy: f64 = pw.weights().row_iter().map(|r| dot(r, &sq)).sum();
            (b, p, energy)
        }
        None => (DenseMatrix::identity(m_t), DenseMatrix::zeros(m_s, m_t), 0.0),
    };
    let b_factor = spd_factorize(&b)?;
    let b_inv_targets = b_factor.solve_rows(&targets);
    let gram_x = targets.matmul_transposed(&b_inv_targets);
    let thetas = &step.model.thetas;
    let gram_theta = thetas.matmul_transposed(thetas);
    // θ_kᵀ P B⁻¹ x_i = (Θ P)_k · (B⁻¹ x_i)
    let theta_p = thetas.matmul(&p_matrix);
    let linear_base = b_inv_targets.matmul_transposed(&theta_p);
    let signs = step.signs();

    let nv = n_t * k;
    let mut hessian = DenseMatrix::zeros(nv, nv);
    for i in 0..n_t {
        for ki in 0..k {
            let row = hessian.row_mut(i * k + ki);
            let yi = signs[(i, ki)];
            for j in 0..n_t {
                let gx = yi * gram_x[(i, j)];
                for kj in 0..k {
                    row[j * k + kj] = gx * signs[(j, kj)] * gram_theta[(ki, kj)];
                }
            }
        }
    }
    let mut linear = vec![0.0; nv];
    for i in 0..n_t {
        for kk in 0..k {
            let y = signs[(i, kk)];
            let coef = 1.0 - y * step.model.biases[kk] - d_weight * y * linear_base[(i, kk)];
            linear[i * k + kk] = -coef;
        }
    }
    // ½ D Σ y_ij ‖x_j‖² − ½ D² ⟨P, P B⁻¹⟩
    let p_binv = b_factor.solve_rows(&p_matrix);
    let constant = 0.5 * d_weight * source_energy
        - 0.5 * d_weight * d_weight * dot(p_matrix.as_slice(), p_binv.as_slice());

    let qp = BoxQp::new(hessian, linear, vec![0.0; nv], vec![step.hp.c_target; nv])?;
    let ds = DualSystem {
        gram_x,
        gram_theta,
        linear_base,
        b_factor,
        p_matrix,
        b_inv_targets,
        signs,
        d_weight,
        constant,
    };
    Ok((ds, qp))
}

/// `W = (Σ_ik a_ik y_ik θ_k x_iᵀ + D P) B⁻¹`.
pub fn mmdtl2_recover_w(ds: &DualSystem, a: &[f64], step: &WStep) -> Result<TransformMatrix> {
    let n_t = ds.b_inv_targets.rows();
    let k = ds.gram_theta.rows();
    if a.len() != n_t * k {
        return Err(Error::invalid(format!(
            "dual solution has {} entries, expected {}",
            a.len(),
            n_t * k
        )));
    }
    if step.model.n_classes() != k || step.model.dim() != ds.p_matrix.rows() {
        return Err(Error::invalid("model does not match the dual system"));
    }
    // C[k, i] = a_ik y_ik; W = Θᵀ (C B⁻¹X) + D P B⁻¹
    let mut coef = DenseMatrix::zeros(k, n_t);
    for i in 0..n_t {
        for kk in 0..k {
            coef[(kk, i)] = a[i * k + kk] * ds.signs[(i, kk)];
        }
    }
    let mixed = coef.matmul(&ds.b_inv_targets);
    let mut w = step.model.thetas.transpose().matmul(&mixed);
    if ds.d_weight > 0.0 {
        let p_binv = ds.b_factor.solve_rows(&ds.p_matrix);
        w.add_scaled(ds.d_weight, &p_binv);
    }
    TransformMatrix::new(w, step.augmented)
}

#[derive(Debug, Clone)]
pub struct WStepOutcome {
    pub transform: TransformMatrix,
    pub dual: DualSystem,
    pub qp: BoxQp,
    pub solution: BoxQpSolution,
}

/// Full dual `W`-step: build, solve, recover.
pub fn solve_dual_w_step(step: &WStep, d_weight: f64, tol: f64) -> Result<WStepOutcome> {
    let (dual, qp) = build_dual(step, d_weight)?;
    let solution = solve_box_qp(&qp, tol, default_max_sweeps(qp.dim()))?;
    let transform = mmdtl2_recover_w(&dual, &solution.a, step)?;
    Ok(WStepOutcome {
        transform,
        dual,
        qp,
        solution,
    })
}

/// Plain max-margin transfer `W`-step (no distance term).
pub fn mmdt_w_step(step: &WStep) -> Result<TransformMatrix> {
    Ok(solve_dual_w_step(step, 0.0, DEFAULT_W_STEP_TOL)?.transform)
}

/// Dual-path `W`-step with the distance term weighted by `hp.d_weight`.
pub fn mmdtl2_w_step(step: &WStep) -> Result<TransformMatrix> {
    Ok(solve_dual_w_step(step, step.hp.d_weight, DEFAULT_W_STEP_TOL)?.transform)
}

pub const DEFAULT_W_STEP_TOL: f64 = 1e-8;

/// Standard-form primal of the `W`-step over `z = (vec W, ξ)`.
#[derive(Debug, Clone)]
pub struct PrimalProblem {
    pub qp: InequalityQp,
    /// `½ D Σ y_ij ‖x_j^s‖²`, omitted from the QP objective.
    pub constant: f64,
    pub source_dim: usize,
    /// Columns of `W` (including the augmentation column).
    pub transform_cols: usize,
}

impl PrimalProblem {
    pub fn transform(&self, z: &[f64], augmented: bool) -> Result<TransformMatrix> {
        let nw = self.source_dim * self.transform_cols;
        TransformMatrix::new(
            DenseMatrix::from_vec(self.source_dim, self.transform_cols, z[..nw].to_vec())?,
            augmented,
        )
    }

    pub fn objective_with_constant(&self, z: &[f64]) -> f64 {
        self.qp.objective(z) + self.constant
    }
}

pub fn mmdtl2_build_primal(step: &WStep) -> Result<PrimalProblem> {
    build_primal(step, step.hp.d_weight)
}

/// Materializes the primal QP: Hessian `V = I + D Σ_ij y_ij U(x_i)` on `w`, zero on `ξ`.
pub fn build_primal(step: &WStep, d_weight: f64) -> Result<PrimalProblem> {
    step.validate(d_weight)?;
    let targets = step.target_features();
    let (n_t, m_t) = (targets.rows(), targets.cols());
    let m_s = step.source.dim();
    let k = step.n_classes();
    let nw = m_s * m_t;
    let nv = nw + n_t * k;
    if nv > PRIMAL_VARIABLE_LIMIT {
        return Err(Error::Capacity(format!(
            "primal problem has {nv} variables (limit {PRIMAL_VARIABLE_LIMIT}); use the dual path"
        )));
    }

    let mut hessian = DenseMatrix::zeros(nv, nv);
    for v in 0..nw {
        hessian[(v, v)] = 1.0;
    }
    let mut linear = vec![0.0; nv];
    let mut constant = 0.0;
    if let Some(pw) = step.pair_weights.filter(|_| d_weight > 0.0) {
        let sources = step.source.features();
        for i in 0..n_t {
            let x = targets.row(i);
            let c = pw.row_sums()[i];
            if c != 0.0 {
                // blocks of U(x_i) added in place
                for blk in 0..m_s {
                    for r in 0..m_t {
                        let row = &mut hessian.row_mut(blk * m_t + r)[blk * m_t..(blk + 1) * m_t];
                        axpy(d_weight * c * x[r], x, row);
                    }
                }
            }
            for (j, xs) in sources.row_iter().enumerate() {
                let y = pw.weight(i, j);
                if y != 0.0 {
                    axpy(-d_weight * y, &build_v(xs, x), &mut linear[..nw]);
                    constant += 0.5 * d_weight * y * dot(xs, xs);
                }
            }
        }
    }
    linear[nw..].iter_mut().for_each(|v| *v = step.hp.c_target);

    let signs = step.signs();
    let mut constraints = DenseMatrix::zeros(n_t * k, nv);
    let mut rhs = vec![0.0; n_t * k];
    for i in 0..n_t {
        for kk in 0..k {
            let idx = step.hinge_index(i, kk);
            let y = signs[(i, kk)];
            let phi = build_v(step.model.theta(kk + 1), targets.row(i));
            let row = constraints.row_mut(idx);
            axpy(y, &phi, &mut row[..nw]);
            row[nw + idx] = 1.0;
            rhs[idx] = 1.0 - y * step.model.biases[kk];
        }
    }
    let nonneg = (0..nv).map(|v| v >= nw).collect();
    let qp = InequalityQp::new(hessian, linear, constraints, rhs, Some(nonneg))?;
    Ok(PrimalProblem {
        qp,
        constant,
        source_dim: m_s,
        transform_cols: m_t,
    })
}

/// Solves the materialized primal with the interior point method.
pub fn solve_primal_w_step(step: &WStep, d_weight: f64, tol: f64) -> Result<(TransformMatrix, PrimalProblem, InequalitySolution)> {
    let primal = build_primal(step, d_weight)?;
    let sol = solve_inequality_qp(&primal.qp, tol)?;
    let w = primal.transform(&sol.z, step.augmented)?;
    Ok((w, primal, sol))
}

/// `Σ_ij y_ij ‖W x_i − x_j^s‖²`, evaluated pair by pair.
pub fn distance_term(step: &WStep, w: &TransformMatrix, pw: &PairWeights) -> Result<f64> {
    let mapped = w.apply_all(step.target.features())?;
    let sources = step.source.features();
    let mut total = 0.0;
    for (i, u) in mapped.row_iter().enumerate() {
        for (j, xs) in sources.row_iter().enumerate() {
            let y = pw.weight(i, j);
            if y != 0.0 {
                total += y * u.iter().zip(xs).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
            }
        }
    }
    Ok(total)
}

/// Optimal slacks `max(0, 1 − y_ik(θ_kᵀ W x_i + b_k))`, indexed like the dual variables.
pub fn target_slacks(step: &WStep, w: &TransformMatrix) -> Result<Vec<f64>> {
    let mapped = w.apply_all(step.target.features())?;
    let signs = step.signs();
    let k = step.n_classes();
    let mut out = Vec::with_capacity(mapped.rows() * k);
    for (i, u) in mapped.row_iter().enumerate() {
        let values = step.model.decision_values(u)?;
        for kk in 0..k {
            out.push((1.0 - signs[(i, kk)] * values[kk]).max(0.0));
        }
    }
    Ok(out)
}

/// `W`-step objective with optimal slacks for distance weight `d_weight`.
pub fn w_step_objective(step: &WStep, w: &TransformMatrix, d_weight: f64) -> Result<f64> {
    let norm = w.matrix().frobenius_norm();
    let hinge: f64 = target_slacks(step, w)?.iter().sum();
    let mut value = 0.5 * norm * norm + step.hp.c_target * hinge;
    if d_weight > 0.0 {
        let pw = step
            .pair_weights
            .ok_or_else(|| Error::invalid("pair weights are required when d_weight > 0"))?;
        value += 0.5 * d_weight * distance_term(step, w, pw)?;
    }
    Ok(value)
}

/// Smooth part `½‖W‖² + ½ D Σ y_ij ‖W x_i − x_j‖²` of the `W`-step objective.
pub fn smooth_objective(step: &WStep, w: &TransformMatrix, d_weight: f64) -> Result<f64> {
    let norm = w.matrix().frobenius_norm();
    let mut value = 0.5 * norm * norm;
    if d_weight > 0.0 {
        let pw = step
            .pair_weights
            .ok_or_else(|| Error::invalid("pair weights are required when d_weight > 0"))?;
        value += 0.5 * d_weight * distance_term(step, w, pw)?;
    }
    Ok(value)
}

/// Gradient of [`smooth_objective`]: `W B − D P`.
pub fn smooth_gradient(step: &WStep, w: &TransformMatrix, d_weight: f64) -> Result<DenseMatrix> {
    let targets = step.target_features();
    if w.matrix().rows() != step.source.dim() || w.matrix().cols() != targets.cols() {
        return Err(Error::invalid("transform shape does not match the step"));
    }
    match step.pair_weights.filter(|_| d_weight > 0.0) {
        Some(pw) => {
            let b = compute_v_block(&targets, pw, d_weight)?;
            let mut g = w.matrix().matmul(&b);
            g.add_scaled(-d_weight, &pair_moment(step.source.features(), &targets, pw));
            Ok(g)
        }
        None => Ok(w.matrix().clone()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptOptions {
    pub method: Method,
    /// `None` picks the method default: augmented for `Mmdt`, plain for `Mmdtl2`.
    pub augmented: Option<bool>,
    pub pair_weighting: PairWeightMode,
    pub qp_tol: f64,
    pub svm: SvmOptions,
}

impl AdaptOptions {
    pub fn new(method: Method) -> Self {
        AdaptOptions {
            method,
            augmented: None,
            pair_weighting: PairWeightMode::default(),
            qp_tol: DEFAULT_W_STEP_TOL,
            svm: SvmOptions::default(),
        }
    }

    pub fn augmented(&self) -> bool {
        self.augmented.unwrap_or(self.method == Method::Mmdt)
    }

    /// Distance weight actually used by the method.
    pub fn d_weight(&self, hp: &HyperParams) -> f64 {
        match self.method {
            Method::Mmdt => 0.0,
            Method::Mmdtl2 => hp.d_weight,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AdaptOutcome {
    pub transform: TransformMatrix,
    /// Classifier from the last θ-step.
    pub model: SvmModel,
    /// Joint objective after each outer iteration.
    pub trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// θ-step: SVMs on source rows (penalty `C_S`) and transformed target rows (penalty `C_T`).
pub fn theta_step(
    source: &Dataset,
    target: &Dataset,
    w: &TransformMatrix,
    hp: &HyperParams,
    svm: &SvmOptions,
) -> Result<SvmModel> {
    let mapped = w.apply_all(target.features())?;
    let features = source.features().vstack(&mapped);
    let labels: Vec<usize> = source.labels().iter().chain(target.labels()).copied().collect();
    let c: Vec<f64> = std::iter::repeat(hp.c_source)
        .take(source.len())
        .chain(std::iter::repeat(hp.c_target).take(target.len()))
        .collect();
    let k = source.n_classes().max(target.n_classes());
    train_ovr_with(&features, &labels, k, &c, svm)
}

/// Joint objective: `½‖W‖² + Σ_k {½‖θ_k‖² + C_S Σ ξ^s + C_T Σ ξ^t} (+ ½ D Σ y_ij ‖W x_i − x_j‖²)`.
pub fn joint_objective(
    source: &Dataset,
    target: &Dataset,
    w: &TransformMatrix,
    model: &SvmModel,
    hp: &HyperParams,
    pw: Option<&PairWeights>,
    d_weight: f64,
) -> Result<f64> {
    let step = WStep {
        source,
        target,
        model,
        pair_weights: pw,
        hp,
        augmented: w.augmented(),
    };
    let theta_norms: f64 = model.thetas.row_iter().map(|t| 0.5 * dot(t, t)).sum();
    let mut source_hinge = 0.0;
    for (x, &l) in source.features().row_iter().zip(source.labels()) {
        for (kk, v) in model.decision_values(x)?.into_iter().enumerate() {
            let y = if l == kk + 1 { 1.0 } else { -1.0 };
            source_hinge += (1.0 - y * v).max(0.0);
        }
    }
    Ok(w_step_objective(&step, w, d_weight)? + theta_norms + hp.c_source * source_hinge)
}

/// Alternates θ-steps and `W`-steps from `W = 0`.
pub fn alternate(source: &Dataset, target: &Dataset, hp: &HyperParams, opts: &AdaptOptions) -> Result<AdaptOutcome> {
    hp.validate()?;
    let k = source.n_classes().max(target.n_classes());
    let d_weight = opts.d_weight(hp);
    let pair_weights = if d_weight > 0.0 {
        Some(compute_pair_weights(source.labels(), target.labels(), opts.pair_weighting)?)
    } else {
        None
    };
    let mut w = TransformMatrix::zeros(source.dim(), target.dim(), opts.augmented());
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let mut model;
    loop {
        model = theta_step(source, target, &w, hp, &opts.svm)?;
        if model.n_classes() < k {
            return Err(Error::invalid("class count mismatch between domains"));
        }
        let step = WStep {
            source,
            target,
            model: &model,
            pair_weights: pair_weights.as_ref(),
            hp,
            augmented: opts.augmented(),
        };
        let next = solve_dual_w_step(&step, d_weight, opts.qp_tol)?.transform;
        iterations += 1;
        let change = next.matrix().frobenius_distance(w.matrix());
        let scale = w.matrix().frobenius_norm().max(1.0);
        w = next;
        trace.push(joint_objective(source, target, &w, &model, hp, pair_weights.as_ref(), d_weight)?);
        if change <= hp.w_tol * scale {
            converged = true;
            break;
        }
        if iterations >= hp.max_outer_iters {
            break;
        }
    }
    Ok(AdaptOutcome {
        transform: w,
        model,
        trace,
        iterations,
        converged,
    })
}

/// Serialized form of a trained adaptation: transform plus classifiers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelBundle {
    pub method: Method,
    pub source_dim: usize,
    pub target_dim: usize,
    pub n_classes: usize,
    pub transform: TransformMatrix,
    pub svm: SvmModel,
}

impl ModelBundle {
    pub fn new(method: Method, transform: TransformMatrix, svm: SvmModel) -> Result<Self> {
        if transform.source_dim() != svm.dim() {
            return Err(Error::invalid("transform rows must match the classifier dimension"));
        }
        Ok(ModelBundle {
            method,
            source_dim: svm.dim(),
            target_dim: transform.target_dim(),
            n_classes: svm.n_classes(),
            transform,
            svm,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let bundle: ModelBundle = serde_json::from_str(text)?;
        let check = ModelBundle::new(bundle.method, bundle.transform.clone(), bundle.svm.clone())?;
        if check != bundle {
            return Err(Error::invalid("declared dimensions disagree with the arrays"));
        }
        Ok(bundle)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Classifies a target-domain feature.
    pub fn predict_target(&self, x: &[f64]) -> Result<usize> {
        self.svm.predict(&self.transform.apply(x)?)
    }
}
