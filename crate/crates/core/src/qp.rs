//! Quadratic-program solvers.
//!
//! [`solve_box_qp`] minimizes `½ aᵀQa + gᵀa` over a box with cyclic exact
//! coordinate descent; it is the production path for the transform dual.
//! [`solve_inequality_qp`] is a dense Mehrotra predictor-corrector interior
//! point method for `min ½ zᵀHz + fᵀz  s.t.  A z ≥ b, z_j ≥ 0 (masked)`,
//! used for the primal transform problem and as a reference solver.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{axpy, dot, DenseMatrix, SpdFactorization};

pub const DEFAULT_TOL: f64 = 1e-6;

/// Default sweep cap: `10·n`, at least 1000.
pub fn default_max_sweeps(n: usize) -> usize {
    (10 * n).max(1000)
}

/// `min ½ aᵀ Q a + gᵀ a  s.t.  lower ≤ a ≤ upper`.
#[derive(Debug, Clone)]
pub struct BoxQp {
    hessian: DenseMatrix,
    linear: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxQp {
    pub fn new(hessian: DenseMatrix, linear: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let n = linear.len();
        if hessian.rows() != n || hessian.cols() != n || lower.len() != n || upper.len() != n {
            return Err(Error::invalid(format!(
                "box QP shape mismatch: hessian {}x{}, linear {n}, bounds {}/{}",
                hessian.rows(),
                hessian.cols(),
                lower.len(),
                upper.len()
            )));
        }
        if !hessian.is_symmetric(1e-10) {
            return Err(Error::invalid("box QP hessian is not symmetric"));
        }
        if let Some(i) = (0..n).find(|&i| !(lower[i] <= upper[i])) {
            return Err(Error::invalid(format!("empty box at coordinate {i}")));
        }
        if linear.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite linear term"));
        }
        Ok(BoxQp {
            hessian,
            linear,
            lower,
            upper,
        })
    }

    pub fn hessian(&self) -> &DenseMatrix {
        &self.hessian
    }

    pub fn linear(&self) -> &[f64] {
        &self.linear
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn dim(&self) -> usize {
        self.linear.len()
    }

    pub fn objective(&self, a: &[f64]) -> f64 {
        let qa = self.hessian.matvec(a);
        0.5 * dot(a, &qa) + dot(&self.linear, a)
    }

    pub fn gradient(&self, a: &[f64]) -> Vec<f64> {
        let mut g = self.hessian.matvec(a);
        axpy(1.0, &self.linear, &mut g);
        g
    }

    /// `max_i |clip(a_i − ∇_i) − a_i|`.
    pub fn kkt_residual(&self, a: &[f64]) -> f64 {
        projected_residual(a, &self.gradient(a), &self.lower, &self.upper)
    }
}

fn projected_residual(a: &[f64], grad: &[f64], lower: &[f64], upper: &[f64]) -> f64 {
    (0..a.len())
        .map(|i| ((a[i] - grad[i]).max(lower[i]).min(upper[i]) - a[i]).abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoxQpSolution {
    pub a: Vec<f64>,
    pub objective: f64,
    pub kkt_residual: f64,
    pub sweeps: usize,
    pub converged: bool,
    /// Objective after each sweep.
    pub history: Vec<f64>,
}

pub fn solve_box_qp(p: &BoxQp, tol: f64, max_sweeps: usize) -> Result<BoxQpSolution> {
    solve_box_qp_from(p, None, tol, max_sweeps)
}

/// Cyclic coordinate descent, optionally started from `initial` (clipped into the box).
pub fn solve_box_qp_from(
    p: &BoxQp,
    initial: Option<&[f64]>,
    tol: f64,
    max_sweeps: usize,
) -> Result<BoxQpSolution> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let n = p.dim();
    let mut a: Vec<f64> = match initial {
        Some(init) if init.len() == n => (0..n).map(|i| init[i].max(p.lower[i]).min(p.upper[i])).collect(),
        Some(init) => {
            return Err(Error::invalid(format!(
                "initial point has length {}, expected {n}",
                init.len()
            )))
        }
        None => (0..n).map(|i| 0.0f64.max(p.lower[i]).min(p.upper[i])).collect(),
    };
    let mut grad = p.gradient(&a);
    let objective_of = |a: &[f64], grad: &[f64]| -> f64 {
        // ½ aᵀQa + gᵀa = ½ aᵀ(∇ + g)
        0.5 * a.iter().zip(grad).zip(&p.linear).map(|((a, d), g)| a * (d + g)).sum::<f64>()
    };

    let mut history = Vec::new();
    let mut residual = projected_residual(&a, &grad, &p.lower, &p.upper);
    let mut sweeps = 0;
    while residual > tol && sweeps < max_sweeps {
        for i in 0..n {
            let qii = p.hessian[(i, i)];
            let target = if qii > 0.0 {
                a[i] - grad[i] / qii
            } else if grad[i] > 0.0 {
                f64::NEG_INFINITY
            } else if grad[i] < 0.0 {
                f64::INFINITY
            } else {
                a[i]
            };
            let new = target.max(p.lower[i]).min(p.upper[i]);
            let delta = new - a[i];
            if delta != 0.0 {
                if !new.is_finite() {
                    return Err(Error::invalid(format!(
                        "objective unbounded along coordinate {i}"
                    )));
                }
                a[i] = new;
                axpy(delta, p.hessian.row(i), &mut grad);
            }
        }
        sweeps += 1;
        history.push(objective_of(&a, &grad));
        residual = projected_residual(&a, &grad, &p.lower, &p.upper);
        // Refresh the gradient now and then so rounding drift cannot stall convergence.
        if sweeps % 200 == 0 {
            grad = p.gradient(&a);
            residual = projected_residual(&a, &grad, &p.lower, &p.upper);
        }
    }
    let objective = p.objective(&a);
    Ok(BoxQpSolution {
        converged: residual <= tol,
        kkt_residual: residual,
        objective,
        sweeps,
        a,
        history,
    })
}

/// `min ½ zᵀHz + fᵀz  s.t.  A z ≥ b` and `z_j ≥ 0` wherever `nonneg[j]`.
#[derive(Debug, Clone)]
pub struct InequalityQp {
    hessian: DenseMatrix,
    linear: Vec<f64>,
    constraints: DenseMatrix,
    rhs: Vec<f64>,
    nonneg: Vec<bool>,
}

impl InequalityQp {
    pub fn new(
        hessian: DenseMatrix,
        linear: Vec<f64>,
        constraints: DenseMatrix,
        rhs: Vec<f64>,
        nonneg: Option<Vec<bool>>,
    ) -> Result<Self> {
        let n = linear.len();
        if hessian.rows() != n || hessian.cols() != n {
            return Err(Error::invalid("hessian does not match variable count"));
        }
        if constraints.cols() != n && constraints.rows() > 0 {
            return Err(Error::invalid(format!(
                "constraint matrix has {} columns, expected {n}",
                constraints.cols()
            )));
        }
        if constraints.rows() != rhs.len() {
            return Err(Error::invalid("constraint rows and right-hand side differ in length"));
        }
        if !hessian.is_symmetric(1e-10) {
            return Err(Error::invalid("hessian is not symmetric"));
        }
        let nonneg = nonneg.unwrap_or_else(|| vec![false; n]);
        if nonneg.len() != n {
            return Err(Error::invalid("non-negativity mask length mismatch"));
        }
        let constraints = if constraints.rows() == 0 {
            DenseMatrix::zeros(0, n)
        } else {
            constraints
        };
        Ok(InequalityQp {
            hessian,
            linear,
            constraints,
            rhs,
            nonneg,
        })
    }

    pub fn hessian(&self) -> &DenseMatrix {
        &self.hessian
    }

    pub fn linear(&self) -> &[f64] {
        &self.linear
    }

    pub fn constraints(&self) -> &DenseMatrix {
        &self.constraints
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn nonneg(&self) -> &[bool] {
        &self.nonneg
    }

    pub fn dim(&self) -> usize {
        self.linear.len()
    }

    pub fn objective(&self, z: &[f64]) -> f64 {
        0.5 * dot(z, &self.hessian.matvec(z)) + dot(&self.linear, z)
    }

    /// Largest violation of `A z ≥ b` and of the sign constraints.
    pub fn max_violation(&self, z: &[f64]) -> f64 {
        let rows = self
            .constraints
            .row_iter()
            .zip(&self.rhs)
            .map(|(r, b)| (b - dot(r, z)).max(0.0));
        let signs = z
            .iter()
            .zip(&self.nonneg)
            .filter(|(_, &m)| m)
            .map(|(v, _)| (-v).max(0.0));
        rows.chain(signs).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct InequalitySolution {
    pub z: Vec<f64>,
    pub objective: f64,
    /// Multipliers of the `A z ≥ b` rows.
    pub multipliers: Vec<f64>,
    /// Multipliers of the sign constraints, zero for unmasked variables.
    pub bound_multipliers: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub stationarity: f64,
    pub feasibility: f64,
    pub complementarity: f64,
}

const IPM_MAX_ITERS: usize = 200;

/// Dense primal-dual interior point solve.
pub fn solve_inequality_qp(p: &InequalityQp, tol: f64) -> Result<InequalitySolution> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let n = p.dim();
    let m = p.constraints.rows();
    let bounded: Vec<usize> = (0..n).filter(|&j| p.nonneg[j]).collect();
    let total = m + bounded.len();

    // residual of each constraint row: A z − b for general rows, z_j for sign rows
    let row_values = |z: &[f64]| -> Vec<f64> {
        let mut v: Vec<f64> = p
            .constraints
            .row_iter()
            .zip(&p.rhs)
            .map(|(r, b)| dot(r, z) - b)
            .collect();
        v.extend(bounded.iter().map(|&j| z[j]));
        v
    };
    // Aᵀ y over both row groups
    let apply_transposed = |y: &[f64]| -> Vec<f64> {
        let mut out = p.constraints.matvec_transposed(&y[..m]);
        for (k, &j) in bounded.iter().enumerate() {
            out[j] += y[m + k];
        }
        out
    };
    let apply = |dz: &[f64]| -> Vec<f64> {
        let mut v = p.constraints.matvec(dz);
        v.extend(bounded.iter().map(|&j| dz[j]));
        v
    };

    let mut z = vec![0.0; n];
    let init = row_values(&z);
    let mut s: Vec<f64> = init.iter().map(|v| v.max(1.0)).collect();
    let mut lambda = vec![1.0; total];

    let f_scale = 1.0 + p.linear.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let b_scale = 1.0 + p.rhs.iter().fold(0.0f64, |a, v| a.max(v.abs()));

    let mut iterations = 0;
    let mut converged = false;
    let (mut stat, mut feas, mut mu);
    loop {
        let hz = p.hessian.matvec(&z);
        let at_lambda = apply_transposed(&lambda);
        let r_d: Vec<f64> = (0..n).map(|j| hz[j] + p.linear[j] - at_lambda[j]).collect();
        let values = row_values(&z);
        let r_p: Vec<f64> = (0..total).map(|i| values[i] - s[i]).collect();
        mu = if total > 0 {
            dot(&s, &lambda) / total as f64
        } else {
            0.0
        };
        stat = r_d.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        feas = r_p.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let obj_scale = 1.0 + p.objective(&z).abs();
        if stat <= tol * f_scale && feas <= tol * b_scale && mu <= tol * obj_scale / (total.max(1) as f64) {
            converged = true;
            break;
        }
        let lambda_max = lambda.iter().fold(0.0f64, |a, v| a.max(*v));
        if iterations >= IPM_MAX_ITERS || !(stat + feas + mu).is_finite() || lambda_max > 1e14 {
            break;
        }
        iterations += 1;

        let ratio: Vec<f64> = (0..total).map(|i| lambda[i] / s[i]).collect();
        let factor = normal_matrix_factor(p, &bounded, &ratio)?;

        let solve_direction = |rc: &[f64]| -> (Vec<f64>, Vec<f64>, Vec<f64>) {
            // (H + Aᵀ Λ S⁻¹ A) Δz = −r_d + Aᵀ S⁻¹ (rc − Λ r_p)
            let weighted: Vec<f64> = (0..total).map(|i| (rc[i] - lambda[i] * r_p[i]) / s[i]).collect();
            let mut rhs = apply_transposed(&weighted);
            for j in 0..n {
                rhs[j] -= r_d[j];
            }
            factor.solve_in_place(&mut rhs);
            let dz = rhs;
            let a_dz = apply(&dz);
            let ds: Vec<f64> = (0..total).map(|i| a_dz[i] + r_p[i]).collect();
            let dl: Vec<f64> = (0..total).map(|i| (rc[i] - lambda[i] * ds[i]) / s[i]).collect();
            (dz, ds, dl)
        };

        // predictor
        let rc_aff: Vec<f64> = (0..total).map(|i| -s[i] * lambda[i]).collect();
        let (_, ds_aff, dl_aff) = solve_direction(&rc_aff);
        let alpha_aff = max_step(&s, &ds_aff).min(max_step(&lambda, &dl_aff)).min(1.0);
        let sigma = if total > 0 {
            let mu_aff = (0..total)
                .map(|i| (s[i] + alpha_aff * ds_aff[i]) * (lambda[i] + alpha_aff * dl_aff[i]))
                .sum::<f64>()
                / total as f64;
            (mu_aff / mu).powi(3).min(1.0)
        } else {
            0.0
        };

        // corrector
        let rc: Vec<f64> = (0..total)
            .map(|i| sigma * mu - s[i] * lambda[i] - ds_aff[i] * dl_aff[i])
            .collect();
        let (dz, ds, dl) = solve_direction(&rc);
        let alpha = (0.995 * max_step(&s, &ds).min(max_step(&lambda, &dl))).min(1.0);
        axpy(alpha, &dz, &mut z);
        axpy(alpha, &ds, &mut s);
        axpy(alpha, &dl, &mut lambda);
        for v in s.iter_mut().chain(lambda.iter_mut()) {
            *v = v.max(1e-300);
        }
    }

    if !converged && !(feas <= 1e-6 * b_scale && z.iter().all(|v| v.is_finite())) {
        return Err(Error::Infeasible(format!(
            "primal residual {feas:e} after {iterations} interior point iterations"
        )));
    }

    let mut bound_multipliers = vec![0.0; n];
    for (k, &j) in bounded.iter().enumerate() {
        bound_multipliers[j] = lambda[m + k];
    }
    let complementarity = (0..total)
        .map(|i| (s[i] * lambda[i]).abs())
        .fold(0.0, f64::max);
    Ok(InequalitySolution {
        objective: p.objective(&z),
        multipliers: lambda[..m].to_vec(),
        bound_multipliers,
        iterations,
        converged,
        stationarity: stat,
        feasibility: feas,
        complementarity,
        z,
    })
}

/// Cholesky factor of `H + Aᵀ diag(ratio) A`, regularized if `H` is singular.
fn normal_matrix_factor(p: &InequalityQp, bounded: &[usize], ratio: &[f64]) -> Result<SpdFactorization> {
    let n = p.dim();
    let m = p.constraints.rows();
    let build = |shift: f64| -> DenseMatrix {
        let mut nm = DenseMatrix::zeros(n, n);
        for i in 0..n {
            nm.row_mut(i)[..=i].copy_from_slice(&p.hessian.row(i)[..=i]);
            nm[(i, i)] += shift;
        }
        for (r, &w) in p.constraints.row_iter().zip(&ratio[..m]) {
            nm.add_outer_lower(w, r);
        }
        for (k, &j) in bounded.iter().enumerate() {
            nm[(j, j)] += ratio[m + k];
        }
        nm
    };
    let unshifted = build(0.0);
    let diag_scale = (0..n).map(|i| unshifted[(i, i)].abs()).fold(1.0, f64::max);
    let mut shift = 0.0;
    let mut nm = unshifted;
    loop {
        match SpdFactorization::from_lower(nm) {
            Ok(f) => return Ok(f),
            Err(Error::NotPositiveDefinite { .. }) if shift < 1e-4 * diag_scale => {
                shift = if shift == 0.0 { 1e-14 * diag_scale } else { shift * 100.0 };
                nm = build(shift);
            }
            Err(e) => return Err(e),
        }
    }
}

/// Largest `α ≤ ∞` with `x + α dx ≥ 0`.
fn max_step(x: &[f64], dx: &[f64]) -> f64 {
    x.iter()
        .zip(dx)
        .filter(|(_, &d)| d < 0.0)
        .map(|(&v, &d)| -v / d)
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn scalar_box(lower: f64, upper: f64) -> BoxQp {
        BoxQp::new(
            DenseMatrix::from_rows(&[[1.0]]).unwrap(),
            vec![-1.0],
            vec![lower],
            vec![upper],
        )
        .unwrap()
    }

    fn random_psd(rng: &mut ChaCha8Rng, n: usize, rank: usize) -> DenseMatrix {
        let g = DenseMatrix::from_vec(n, rank, (0..n * rank).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .unwrap();
        g.matmul_transposed(&g)
    }

    #[test]
    fn box_interior_optimum() {
        let s = solve_box_qp(&scalar_box(0.0, 10.0), 1e-10, 1000).unwrap();
        assert!((s.a[0] - 1.0).abs() < 1e-12);
        assert!((s.objective + 0.5).abs() < 1e-12);
        assert!(s.converged);
    }

    #[test]
    fn box_clipped_optimum() {
        let s = solve_box_qp(&scalar_box(0.0, 0.5), 1e-10, 1000).unwrap();
        assert_eq!(s.a[0], 0.5);
        assert!(s.kkt_residual <= 1e-10);
    }

    #[test]
    fn box_rejects_asymmetric() {
        let q = DenseMatrix::from_rows(&[[1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert!(BoxQp::new(q, vec![0.0; 2], vec![0.0; 2], vec![1.0; 2]).is_err());
    }

    #[test]
    fn box_singular_coordinate_moves_to_bound() {
        let q = DenseMatrix::zeros(3, 3);
        let p = BoxQp::new(q, vec![1.0, -1.0, 0.0], vec![-2.0; 3], vec![3.0; 3]).unwrap();
        let s = solve_box_qp_from(&p, Some(&[0.5, 0.5, 0.5]), 1e-9, 10).unwrap();
        assert_eq!(s.a, vec![-2.0, 3.0, 0.5]);
    }

    #[test]
    fn box_sweep_cap_returns_flagged_iterate() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let q = random_psd(&mut rng, 30, 3);
        let g: Vec<f64> = (0..30).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let p = BoxQp::new(q, g, vec![0.0; 30], vec![100.0; 30]).unwrap();
        let s = solve_box_qp(&p, 1e-14, 1).unwrap();
        assert_eq!(s.sweeps, 1);
        assert!(!s.converged);
        assert!(s.a.iter().all(|v| (0.0..=100.0).contains(v)));
    }

    #[test]
    fn box_objective_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let q = random_psd(&mut rng, 12, 4);
            let g: Vec<f64> = (0..12).map(|_| rng.gen_range(-2.0..1.0)).collect();
            let p = BoxQp::new(q, g, vec![0.0; 12], vec![1.0; 12]).unwrap();
            let s = solve_box_qp(&p, 1e-9, 10_000).unwrap();
            assert!(s.converged);
            for w in s.history.windows(2) {
                assert!(w[1] <= w[0] + 1e-12);
            }
        }
    }

    #[test]
    fn box_matches_interior_point_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let n = 5;
            let q = random_psd(&mut rng, n, 3);
            let g: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let lower = vec![0.0; n];
            let upper: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..2.0)).collect();
            let bq = BoxQp::new(q.clone(), g.clone(), lower.clone(), upper.clone()).unwrap();
            let cd = solve_box_qp(&bq, 1e-10, 100_000).unwrap();

            // box as general rows: a ≥ 0 via mask, −a ≥ −upper via A
            let mut a = DenseMatrix::zeros(n, n);
            for i in 0..n {
                a[(i, i)] = -1.0;
            }
            let rhs: Vec<f64> = upper.iter().map(|u| -u).collect();
            let iq = InequalityQp::new(q, g, a, rhs, Some(vec![true; n])).unwrap();
            let ip = solve_inequality_qp(&iq, 1e-10).unwrap();
            assert!(ip.converged);
            assert!((cd.objective - ip.objective).abs() <= 1e-6, "{} vs {}", cd.objective, ip.objective);
        }
    }

    #[test]
    fn inequality_active_constraint() {
        let p = InequalityQp::new(
            DenseMatrix::identity(1),
            vec![0.0],
            DenseMatrix::from_rows(&[[1.0]]).unwrap(),
            vec![3.0],
            None,
        )
        .unwrap();
        let s = solve_inequality_qp(&p, 1e-10).unwrap();
        assert!((s.z[0] - 3.0).abs() < 1e-8);
        assert!((s.multipliers[0] - 3.0).abs() < 1e-6);
    }

    #[test]
    fn inequality_unconstrained() {
        let p = InequalityQp::new(DenseMatrix::identity(3), vec![0.0; 3], DenseMatrix::zeros(0, 3), vec![], None)
            .unwrap();
        let s = solve_inequality_qp(&p, 1e-10).unwrap();
        assert!(s.z.iter().all(|v| v.abs() < 1e-12));
        assert!(s.converged);
    }

    #[test]
    fn inequality_detects_infeasible() {
        let p = InequalityQp::new(
            DenseMatrix::identity(1),
            vec![0.0],
            DenseMatrix::from_rows(&[[1.0], [-1.0]]).unwrap(),
            vec![3.0, -1.0],
            None,
        )
        .unwrap();
        let r = solve_inequality_qp(&p, 1e-8);
        assert!(matches!(r, Err(Error::Infeasible(_))), "{:?}", r.map(|s| (s.z, s.feasibility, s.iterations)));
    }

    #[test]
    fn inequality_kkt_on_random_problems() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let n = 6;
            let m = 8;
            let h = random_psd(&mut rng, n, 6);
            let f: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let a = DenseMatrix::from_vec(m, n, (0..m * n).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
            // b chosen so z = 0 is strictly feasible
            let b: Vec<f64> = (0..m).map(|_| rng.gen_range(-2.0..-0.1)).collect();
            let p = InequalityQp::new(h.clone(), f.clone(), a.clone(), b.clone(), None).unwrap();
            let s = solve_inequality_qp(&p, 1e-10).unwrap();
            assert!(s.converged);
            assert!(p.max_violation(&s.z) <= 1e-8);
            let mut grad = h.matvec(&s.z);
            axpy(1.0, &f, &mut grad);
            let at_l = a.matvec_transposed(&s.multipliers);
            for j in 0..n {
                assert!((grad[j] - at_l[j]).abs() <= 1e-8);
            }
            for (row, (&bi, &li)) in a.row_iter().zip(b.iter().zip(&s.multipliers)) {
                assert!(li >= 0.0);
                assert!((li * (dot(row, &s.z) - bi)).abs() <= 1e-8);
            }
        }
    }
}
