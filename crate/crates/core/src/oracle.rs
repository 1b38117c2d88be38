//! Brute-force references for small instances.
//!
//! Everything here materializes the full `M_S·M_T`-dimensional quantities
//! (`V`, `φ_k(x)`, `v_ij`) literally and is guarded against production sizes.
//! The production path in [`crate::adapt`] never calls into this module.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::adapt::{build_dual, solve_dual_w_step, solve_primal_w_step, w_step_objective, TransformMatrix, WStep};
use crate::domain::{compute_pair_weights, Dataset, Domain, HyperParams, PairWeightMode, PairWeights};
use crate::error::{Error, Result};
use crate::numerics::{axpy, build_u, build_v, dot, spd_factorize, DenseMatrix};
use crate::svm::SvmModel;

/// Largest `M_S·M_T` for which `V` may be materialized.
pub const FULL_V_LIMIT: usize = 400;

fn guard(m_s: usize, m_t: usize) -> Result<()> {
    if m_s * m_t > FULL_V_LIMIT {
        return Err(Error::Capacity(format!(
            "oracle refuses M_S·M_T = {} > {FULL_V_LIMIT}",
            m_s * m_t
        )));
    }
    Ok(())
}

/// `V = I + D Σ_i Σ_j y_ij U(x_i)`, summed term by term.
pub fn materialize_full_v(targets: &DenseMatrix, pw: &PairWeights, d_weight: f64, m_s: usize) -> Result<DenseMatrix> {
    let m_t = targets.cols();
    guard(m_s, m_t)?;
    if targets.rows() != pw.n_target() {
        return Err(Error::invalid("pair weights do not match the target rows"));
    }
    let mut v = DenseMatrix::identity(m_s * m_t);
    for i in 0..targets.rows() {
        let u = build_u(targets.row(i), m_s);
        for j in 0..pw.n_source() {
            let y = pw.weight(i, j);
            if y != 0.0 {
                v.add_scaled(d_weight * y, &u);
            }
        }
    }
    Ok(v)
}

/// `Σ_ij y_ij v_ij` as a flat vector.
fn literal_pair_sum(step: &WStep, targets: &DenseMatrix, pw: &PairWeights) -> Vec<f64> {
    let mut r = vec![0.0; step.source.dim() * targets.cols()];
    for i in 0..targets.rows() {
        for (j, xs) in step.source.features().row_iter().enumerate() {
            let y = pw.weight(i, j);
            if y != 0.0 {
                axpy(y, &build_v(xs, targets.row(i)), &mut r);
            }
        }
    }
    r
}

/// Dual Hessian and (minimization-form) linear term computed as `φᵀ V⁻¹ φ` with `V` materialized.
pub fn direct_dual_coefficients(step: &WStep, d_weight: f64) -> Result<(DenseMatrix, Vec<f64>)> {
    let targets = step.target_features();
    let (n_t, m_t, m_s, k) = (targets.rows(), targets.cols(), step.source.dim(), step.n_classes());
    guard(m_s, m_t)?;
    let (v, r) = match step.pair_weights.filter(|_| d_weight > 0.0) {
        Some(pw) => (materialize_full_v(&targets, pw, d_weight, m_s)?, literal_pair_sum(step, &targets, pw)),
        None => (DenseMatrix::identity(m_s * m_t), vec![0.0; m_s * m_t]),
    };
    let f = spd_factorize(&v)?;
    let signs = step.signs();
    let phis: Vec<Vec<f64>> = (0..n_t)
        .flat_map(|i| (0..k).map(move |kk| (i, kk)))
        .map(|(i, kk)| build_v(step.model.theta(kk + 1), targets.row(i)))
        .collect();
    let v_inv_phis: Vec<Vec<f64>> = phis.iter().map(|p| f.solve(p)).collect();
    let v_inv_r = f.solve(&r);
    let nv = n_t * k;
    let mut hessian = DenseMatrix::zeros(nv, nv);
    let mut linear = vec![0.0; nv];
    for a in 0..nv {
        let ya = signs[(a / k, a % k)];
        for b in 0..nv {
            let yb = signs[(b / k, b % k)];
            hessian[(a, b)] = ya * yb * dot(&phis[a], &v_inv_phis[b]);
        }
        let bias = step.model.biases[a % k];
        linear[a] = -(1.0 - ya * bias - d_weight * ya * dot(&phis[a], &v_inv_r));
    }
    Ok((hessian, linear))
}

/// `w = V⁻¹ (Σ_ik a_ik y_ik φ_k(x_i) + D Σ_ij y_ij v_ij)` with `V` materialized.
pub fn direct_recover_w(step: &WStep, d_weight: f64, a: &[f64]) -> Result<TransformMatrix> {
    let targets = step.target_features();
    let (n_t, m_t, m_s, k) = (targets.rows(), targets.cols(), step.source.dim(), step.n_classes());
    guard(m_s, m_t)?;
    if a.len() != n_t * k {
        return Err(Error::invalid("dual vector length mismatch"));
    }
    let (v, mut g) = match step.pair_weights.filter(|_| d_weight > 0.0) {
        Some(pw) => {
            let mut r = literal_pair_sum(step, &targets, pw);
            r.iter_mut().for_each(|x| *x *= d_weight);
            (materialize_full_v(&targets, pw, d_weight, m_s)?, r)
        }
        None => (DenseMatrix::identity(m_s * m_t), vec![0.0; m_s * m_t]),
    };
    let signs = step.signs();
    for i in 0..n_t {
        for kk in 0..k {
            let coef = a[i * k + kk] * signs[(i, kk)];
            if coef != 0.0 {
                axpy(coef, &build_v(step.model.theta(kk + 1), targets.row(i)), &mut g);
            }
        }
    }
    let w = spd_factorize(&v)?.solve(&g);
    TransformMatrix::new(DenseMatrix::from_vec(m_s, m_t, w)?, step.augmented)
}

/// Ground-truth `W` from the materialized primal QP.
pub fn primal_reference(step: &WStep) -> Result<TransformMatrix> {
    Ok(solve_primal_w_step(step, step.hp.d_weight, 1e-10)?.0)
}

/// Minimizer of `Σ_ij y_ij ‖W x_i − x_j‖²` from the normal equations, solved by
/// Gauss-Jordan elimination.
pub fn weighted_least_squares(step: &WStep) -> Result<TransformMatrix> {
    let pw = step
        .pair_weights
        .ok_or_else(|| Error::invalid("least squares needs pair weights"))?;
    let targets = step.target_features();
    let m_t = targets.cols();
    // W S = P with S = Σ_ij y_ij x_i x_iᵀ, P = Σ_ij y_ij x_j x_iᵀ
    let mut s = DenseMatrix::zeros(m_t, m_t);
    let mut p = DenseMatrix::zeros(step.source.dim(), m_t);
    for i in 0..targets.rows() {
        for (j, xs) in step.source.features().row_iter().enumerate() {
            let y = pw.weight(i, j);
            if y != 0.0 {
                s.add_outer(y, targets.row(i), targets.row(i));
                p.add_outer(y, xs, targets.row(i));
            }
        }
    }
    let s_inv = gauss_jordan_inverse(&s)?;
    TransformMatrix::new(p.matmul(&s_inv), step.augmented)
}

fn gauss_jordan_inverse(m: &DenseMatrix) -> Result<DenseMatrix> {
    let n = m.rows();
    let mut a = m.clone();
    let mut inv = DenseMatrix::identity(n);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[(x, col)].abs().total_cmp(&a[(y, col)].abs()))
            .unwrap_or(col);
        if a[(pivot, col)].abs() < 1e-14 {
            return Err(Error::Degenerate("singular normal equations".into()));
        }
        for c in 0..n {
            let t = a[(col, c)];
            a[(col, c)] = a[(pivot, c)];
            a[(pivot, c)] = t;
            let t = inv[(col, c)];
            inv[(col, c)] = inv[(pivot, c)];
            inv[(pivot, c)] = t;
        }
        let d = a[(col, col)];
        for c in 0..n {
            a[(col, c)] /= d;
            inv[(col, c)] /= d;
        }
        for r in 0..n {
            if r != col {
                let f = a[(r, col)];
                if f != 0.0 {
                    for c in 0..n {
                        a[(r, c)] -= f * a[(col, c)];
                        inv[(r, c)] -= f * inv[(col, c)];
                    }
                }
            }
        }
    }
    Ok(inv)
}

/// Central finite-difference gradient of `f` at `w`.
pub fn finite_difference_gradient(w: &DenseMatrix, step: f64, mut f: impl FnMut(&DenseMatrix) -> f64) -> DenseMatrix {
    let mut grad = DenseMatrix::zeros(w.rows(), w.cols());
    let mut probe = w.clone();
    for idx in 0..w.as_slice().len() {
        let orig = probe.as_slice()[idx];
        probe.as_mut_slice()[idx] = orig + step;
        let plus = f(&probe);
        probe.as_mut_slice()[idx] = orig - step;
        let minus = f(&probe);
        probe.as_mut_slice()[idx] = orig;
        grad.as_mut_slice()[idx] = (plus - minus) / (2.0 * step);
    }
    grad
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub max_abs_error: f64,
    pub kkt_residual: f64,
    pub duality_gap: f64,
    pub passed: bool,
    pub details: Vec<CheckResult>,
}

impl AuditReport {
    fn from_checks(max_abs_error: f64, kkt_residual: f64, duality_gap: f64, details: Vec<CheckResult>) -> Self {
        AuditReport {
            passed: details.iter().all(|c| c.passed),
            max_abs_error,
            kkt_residual,
            duality_gap,
            details,
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.details.iter().find(|c| c.name == name)
    }
}

fn check(name: &str, value: f64, tolerance: f64) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        value,
        tolerance,
        passed: value <= tolerance,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditTolerances {
    pub stationarity: f64,
    pub box_feasibility: f64,
    pub complementarity: f64,
    pub duality_gap: f64,
}

impl Default for AuditTolerances {
    fn default() -> Self {
        AuditTolerances {
            stationarity: 1e-6,
            box_feasibility: 0.0,
            complementarity: 1e-6,
            duality_gap: 1e-5,
        }
    }
}

pub fn audit_solution(step: &WStep, d_weight: f64, w: &TransformMatrix, a: &[f64]) -> Result<AuditReport> {
    audit_solution_with(step, d_weight, w, a, &AuditTolerances::default())
}

/// KKT audit of a `W`-step solution `(W, a)`:
/// stationarity `W + D(Σ_i c_i W x_i x_iᵀ − P) − Σ a_ik y_ik θ_k x_iᵀ = 0` (relative to `1 + ‖W‖`),
/// `0 ≤ a ≤ C_T`, complementary slackness on both the hinge rows and the slack signs,
/// and the relative primal-dual gap.
pub fn audit_solution_with(
    step: &WStep,
    d_weight: f64,
    w: &TransformMatrix,
    a: &[f64],
    tol: &AuditTolerances,
) -> Result<AuditReport> {
    let targets = step.target_features();
    let (n_t, k) = (targets.rows(), step.n_classes());
    if a.len() != n_t * k {
        return Err(Error::invalid("dual vector length mismatch"));
    }
    let wm = w.matrix();
    if wm.rows() != step.source.dim() || wm.cols() != targets.cols() {
        return Err(Error::invalid("transform shape does not match the step"));
    }
    let signs = step.signs();
    let c_t = step.hp.c_target;

    let mut residual = wm.clone();
    for i in 0..n_t {
        let x = targets.row(i);
        for kk in 0..k {
            let coef = a[i * k + kk] * signs[(i, kk)];
            if coef != 0.0 {
                residual.add_outer(-coef, step.model.theta(kk + 1), x);
            }
        }
    }
    if let Some(pw) = step.pair_weights.filter(|_| d_weight > 0.0) {
        for i in 0..n_t {
            let x = targets.row(i);
            let wx = wm.matvec(x);
            residual.add_outer(d_weight * pw.row_sums()[i], &wx, x);
            for (j, xs) in step.source.features().row_iter().enumerate() {
                let y = pw.weight(i, j);
                if y != 0.0 {
                    residual.add_outer(-d_weight * y, xs, x);
                }
            }
        }
    }
    let max_abs_error = residual.max_abs();
    let stationarity = residual.frobenius_norm() / (1.0 + wm.frobenius_norm());

    let box_violation = a
        .iter()
        .map(|&v| (-v).max(v - c_t).max(0.0))
        .fold(0.0, f64::max);

    let mapped = targets.matmul_transposed(wm);
    let mut complementarity = 0.0f64;
    for i in 0..n_t {
        for kk in 0..k {
            let margin = signs[(i, kk)] * (dot(step.model.theta(kk + 1), mapped.row(i)) + step.model.biases[kk]);
            let ai = a[i * k + kk];
            complementarity = complementarity
                .max((ai * (margin - 1.0).max(0.0)).abs())
                .max(((c_t - ai) * (1.0 - margin).max(0.0)).abs());
        }
    }

    let primal = w_step_objective(step, w, d_weight)?;
    let (dual_sys, qp) = build_dual(step, d_weight)?;
    let dual = dual_sys.dual_objective(&qp, a);
    let gap = (primal - dual).abs() / primal.abs().max(1.0);

    let details = vec![
        check("stationarity", stationarity, tol.stationarity),
        check("box_feasibility", box_violation, tol.box_feasibility),
        check("complementarity", complementarity, tol.complementarity),
        check("duality_gap", gap, tol.duality_gap),
    ];
    Ok(AuditReport::from_checks(
        max_abs_error,
        stationarity.max(complementarity).max(box_violation),
        gap,
        details,
    ))
}

/// A self-contained random `W`-step instance.
#[derive(Debug, Clone)]
pub struct RandomInstance {
    pub source: Dataset,
    pub target: Dataset,
    pub model: SvmModel,
    pub pair_weights: PairWeights,
    pub hp: HyperParams,
    pub augmented: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct InstanceLimits {
    pub max_source_dim: usize,
    pub max_target_dim: usize,
    pub max_target: usize,
    pub max_source: usize,
    pub max_classes: usize,
}

impl Default for InstanceLimits {
    fn default() -> Self {
        InstanceLimits {
            max_source_dim: 6,
            max_target_dim: 6,
            max_target: 12,
            max_source: 20,
            max_classes: 3,
        }
    }
}

impl RandomInstance {
    /// Gaussian features, random labels and classifiers; `d_weight` as given.
    pub fn generate(rng: &mut ChaCha8Rng, limits: &InstanceLimits, d_weight: f64) -> Result<Self> {
        let k = rng.gen_range(2..=limits.max_classes.max(2));
        let m_s = rng.gen_range(1..=limits.max_source_dim);
        let m_t = rng.gen_range(1..=limits.max_target_dim);
        let n_t = rng.gen_range(1..=limits.max_target);
        let n_s = rng.gen_range(2..=limits.max_source.max(2));
        let mut gauss = |n: usize| -> Vec<f64> { (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect() };
        let source_f = DenseMatrix::from_vec(n_s, m_s, gauss(n_s * m_s))?;
        let target_f = DenseMatrix::from_vec(n_t, m_t, gauss(n_t * m_t))?;
        let thetas = DenseMatrix::from_vec(k, m_s, gauss(k * m_s))?;
        let biases: Vec<f64> = gauss(k).into_iter().map(|b| 0.3 * b).collect();
        let source_l: Vec<usize> = (0..n_s).map(|j| if j < k { j + 1 } else { rng.gen_range(1..=k) }).collect();
        let target_l: Vec<usize> = (0..n_t).map(|_| rng.gen_range(1..=k)).collect();
        let source = Dataset::new(source_f, source_l, k, Domain::Source)?;
        let target = Dataset::new(target_f, target_l, k, Domain::Target)?;
        let pair_weights = compute_pair_weights(source.labels(), target.labels(), PairWeightMode::ClassNormalized)?;
        let hp = HyperParams {
            c_target: rng.gen_range(0.2..2.0),
            d_weight,
            ..Default::default()
        };
        Ok(RandomInstance {
            source,
            target,
            model: SvmModel::new(thetas, biases)?,
            pair_weights,
            hp,
            augmented: false,
        })
    }

    pub fn step(&self) -> WStep<'_> {
        WStep {
            source: &self.source,
            target: &self.target,
            model: &self.model,
            pair_weights: Some(&self.pair_weights),
            hp: &self.hp,
            augmented: self.augmented,
        }
    }
}

/// One oracle comparison on a random instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceAudit {
    pub index: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub n_target: usize,
    pub n_source: usize,
    pub n_classes: usize,
    pub d_weight: f64,
    /// `‖W_dual − W_primal‖_F / (1 + ‖W_primal‖_F)`.
    pub w_agreement: f64,
    /// Max entry difference of `blockdiag(B)` vs the materialized `V`.
    pub v_block_error: f64,
    /// Max entry difference of the factorized dual Hessian vs `φᵀV⁻¹φ`.
    pub hessian_error: f64,
    pub audit: AuditReport,
    pub passed: bool,
}

/// Runs every oracle comparison on `count` random instances.
pub fn run_audit_suite(seed: u64, count: usize) -> Result<Vec<InstanceAudit>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = [0.0, 0.1, 1.0, 10.0];
    let mut out = Vec::with_capacity(count);
    for index in 0..count {
        let d = weights[index % weights.len()];
        let inst = RandomInstance::generate(&mut rng, &InstanceLimits::default(), d)?;
        let step = inst.step();
        let dual = solve_dual_w_step(&step, d, 1e-10)?;
        let primal = primal_reference(&step)?;
        let w_agreement = dual.transform.matrix().frobenius_distance(primal.matrix())
            / (1.0 + primal.matrix().frobenius_norm());
        let targets = step.target_features();
        let full_v = materialize_full_v(&targets, &inst.pair_weights, d, inst.source.dim())?;
        let block = crate::numerics::compute_v_block(&targets, &inst.pair_weights, d)?;
        let v_block_error = DenseMatrix::block_diagonal(&block, inst.source.dim()).max_abs_diff(&full_v);
        let (direct_h, _) = direct_dual_coefficients(&step, d)?;
        let hessian_error = direct_h.max_abs_diff(dual.qp.hessian());
        let audit = audit_solution(&step, d, &dual.transform, &dual.solution.a)?;
        let passed = audit.passed && w_agreement <= 1e-4 && v_block_error <= 1e-12 && hessian_error <= 1e-10;
        out.push(InstanceAudit {
            index,
            source_dim: inst.source.dim(),
            target_dim: inst.target.dim(),
            n_target: inst.target.len(),
            n_source: inst.source.len(),
            n_classes: inst.model.n_classes(),
            d_weight: d,
            w_agreement,
            v_block_error,
            hessian_error,
            audit,
            passed,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adapt::{mmdtl2_build_dual, mmdtl2_recover_w};
    use crate::numerics::{compute_v_block, vec_row_major};

    fn instance(seed: u64, d: f64) -> RandomInstance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        RandomInstance::generate(&mut rng, &InstanceLimits::default(), d).unwrap()
    }

    #[test]
    fn full_v_special_cases() {
        let inst = instance(1, 0.0);
        let targets = inst.target.features();
        let v = materialize_full_v(targets, &inst.pair_weights, 0.0, inst.source.dim()).unwrap();
        assert_eq!(v, DenseMatrix::identity(inst.source.dim() * inst.target.dim()));

        let v1 = materialize_full_v(targets, &inst.pair_weights, 2.5, 1).unwrap();
        assert!(v1.max_abs_diff(&compute_v_block(targets, &inst.pair_weights, 2.5).unwrap()) <= 1e-12);
    }

    #[test]
    fn full_v_guard() {
        let targets = DenseMatrix::zeros(1, 21);
        let pw = compute_pair_weights(&[1], &[1], PairWeightMode::Indicator).unwrap();
        assert!(matches!(materialize_full_v(&targets, &pw, 1.0, 20), Err(Error::Capacity(_))));
    }

    #[test]
    fn production_dual_matches_materialized() {
        for seed in 0..10 {
            let inst = instance(100 + seed, [0.0, 0.5, 3.0][seed as usize % 3]);
            let step = inst.step();
            let (ds, qp) = mmdtl2_build_dual(&step).unwrap();
            let (h, g) = direct_dual_coefficients(&step, inst.hp.d_weight).unwrap();
            assert!(h.max_abs_diff(qp.hessian()) <= 1e-10);
            for (a, b) in g.iter().zip(qp.linear()) {
                assert!((a - b).abs() <= 1e-10);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a: Vec<f64> = (0..qp.dim()).map(|_| rng.gen_range(0.0..inst.hp.c_target)).collect();
            let fast = mmdtl2_recover_w(&ds, &a, &step).unwrap();
            let slow = direct_recover_w(&step, inst.hp.d_weight, &a).unwrap();
            let diff = vec_row_major(fast.matrix())
                .iter()
                .zip(vec_row_major(slow.matrix()))
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            assert!(diff <= 1e-10, "{diff}");
        }
    }

    #[test]
    fn zero_everything_audit_is_exact() {
        // every target in class 1 and biases (1, −1) put each margin exactly at 1
        let source = Dataset::new(DenseMatrix::from_rows(&[[1.0, 0.0], [0.0, 1.0]]).unwrap(), vec![1, 2], 2, Domain::Source).unwrap();
        let target = Dataset::new(DenseMatrix::from_rows(&[[0.3, 0.2], [-1.0, 0.5]]).unwrap(), vec![1, 1], 2, Domain::Target).unwrap();
        let model = SvmModel::new(DenseMatrix::from_rows(&[[1.0, 0.0], [0.0, 1.0]]).unwrap(), vec![1.0, -1.0]).unwrap();
        let hp = HyperParams { d_weight: 0.0, ..Default::default() };
        let step = WStep { source: &source, target: &target, model: &model, pair_weights: None, hp: &hp, augmented: false };
        let w = TransformMatrix::zeros(2, 2, false);
        let report = audit_solution(&step, 0.0, &w, &[0.0; 4]).unwrap();
        assert!(report.passed);
        assert_eq!(report.max_abs_error, 0.0);
        assert_eq!(report.kkt_residual, 0.0);
        assert_eq!(report.duality_gap, 0.0);
    }

    #[test]
    fn perturbed_transform_fails_stationarity() {
        let inst = instance(7, 1.0);
        let step = inst.step();
        let sol = solve_dual_w_step(&step, 1.0, 1e-10).unwrap();
        let good = audit_solution(&step, 1.0, &sol.transform, &sol.solution.a).unwrap();
        assert!(good.passed, "{good:?}");
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut noisy = sol.transform.matrix().clone();
        noisy.as_mut_slice().iter_mut().for_each(|v| *v += 1e-2 * rng.gen_range(-1.0..1.0));
        let bad = audit_solution(&step, 1.0, &TransformMatrix::new(noisy, false).unwrap(), &sol.solution.a).unwrap();
        assert!(!bad.passed);
        assert!(!bad.check("stationarity").unwrap().passed);
    }

    #[test]
    fn audit_passed_is_monotone_in_tolerance() {
        for seed in 0..8 {
            let inst = instance(300 + seed, 1.0);
            let step = inst.step();
            let sol = solve_dual_w_step(&step, 1.0, 1e-6).unwrap();
            let mut tol = AuditTolerances {
                stationarity: 1e-12,
                box_feasibility: 0.0,
                complementarity: 1e-12,
                duality_gap: 1e-12,
            };
            let mut was_passing = false;
            for _ in 0..12 {
                let r = audit_solution_with(&step, 1.0, &sol.transform, &sol.solution.a, &tol).unwrap();
                assert!(!(was_passing && !r.passed));
                was_passing = r.passed;
                tol.stationarity *= 10.0;
                tol.complementarity *= 10.0;
                tol.duality_gap *= 10.0;
            }
        }
    }

    #[test]
    fn primal_reference_with_zero_weights_and_slack_margins() {
        let source = Dataset::new(DenseMatrix::from_rows(&[[1.0], [-1.0]]).unwrap(), vec![1, 2], 2, Domain::Source).unwrap();
        let target = Dataset::new(DenseMatrix::from_rows(&[[0.4], [2.0]]).unwrap(), vec![1, 1], 2, Domain::Target).unwrap();
        let model = SvmModel::new(DenseMatrix::from_rows(&[[1.0], [-1.0]]).unwrap(), vec![2.0, -2.0]).unwrap();
        let hp = HyperParams { d_weight: 0.0, ..Default::default() };
        let step = WStep { source: &source, target: &target, model: &model, pair_weights: None, hp: &hp, augmented: false };
        let w = primal_reference(&step).unwrap();
        assert!(w.matrix().max_abs() < 1e-8);
    }

    #[test]
    fn least_squares_limit_of_single_pair() {
        let source = Dataset::new(DenseMatrix::from_rows(&[[2.0, -1.0]]).unwrap(), vec![1], 2, Domain::Source).unwrap();
        let target = Dataset::new(DenseMatrix::from_rows(&[[0.5, 0.0]]).unwrap(), vec![1], 2, Domain::Target).unwrap();
        let pw = compute_pair_weights(source.labels(), target.labels(), PairWeightMode::Indicator).unwrap();
        let model = SvmModel::new(DenseMatrix::from_rows(&[[1.0, 0.0], [-1.0, 0.0]]).unwrap(), vec![0.0, 0.0]).unwrap();
        let hp = HyperParams { d_weight: 1e6, c_target: 1e-6, ..Default::default() };
        let step = WStep { source: &source, target: &target, model: &model, pair_weights: Some(&pw), hp: &hp, augmented: false };
        let w = primal_reference(&step).unwrap();
        // W xᵗ ≈ xˢ along the only observed direction: W[:,0]·0.5 ≈ (2, −1)
        let mapped = w.apply(&[0.5, 0.0]).unwrap();
        assert!((mapped[0] - 2.0).abs() < 1e-4 && (mapped[1] + 1.0).abs() < 1e-4, "{mapped:?}");
    }
}
