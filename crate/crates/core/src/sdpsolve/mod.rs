//! Dense primal-dual interior-point solver for semidefinite programs with
//! hermitian PSD blocks, affine equality constraints, and free scalar
//! variables.
//!
//! A program is
//!
//! ```text
//! min / max   Σ_b ⟨C_b, X_b⟩ + c_f' u
//! subject to  Σ_b ⟨A_{i,b}, X_b⟩ + (B u)_i = b_i     i = 1..m
//!             X_b ⪰ 0 hermitian,  u ∈ ℝ^p free
//! ```
//!
//! with `⟨A, X⟩ = tr(AX)` (real for hermitian arguments). Feasibility-sense
//! programs minimize the total trace so a determinate point is returned.
//!
//! Complex inputs are always realified through `Φ(M) = [[Re M, −Im M],
//! [Im M, Re M]]` and solved by a Nesterov-Todd predictor-corrector method;
//! there is no complex-arithmetic inner solver. Infeasibility is classified
//! by slack maximization (phase 1: max t with X − tI ⪰ 0) and every
//! `Infeasible` status carries a Farkas ray that is re-verified outside the
//! iteration before being reported. Unboundedness is certified by an
//! improving ray found through a trace-capped homogeneous program.
//!
//! Free scalar variables are an extension of the plain block form; they are
//! what keeps LMI lowerings small (one free variable per affine parameter
//! instead of a difference of PSD scalars).

mod builder;
mod dump;
mod ipm;
mod presolve;
mod realify;

pub use builder::{BlockId, FreeId, Lowered, ProgramBuilder};
pub use dump::dump_program;
pub use realify::realify;

use nalgebra::DVector;


use crate::config::ToolConfig;
use crate::error::{Error, Result};
use crate::la::{self, CMat};

use ipm::{IpmOutcome, RealForm};

/// Optimization sense of a [`ConicProgram`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
    /// Find any feasible point; internally minimizes the total trace.
    Feasibility,
}

/// One affine equality row `Σ_b ⟨mats_b, X_b⟩ + free_coeffs·u = rhs`.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub mats: Vec<CMat>,
    pub free_coeffs: Vec<f64>,
    pub rhs: f64,
}

/// A block-diagonal semidefinite program over hermitian PSD blocks and free
/// real scalars.
#[derive(Debug, Clone)]
pub struct ConicProgram {
    /// Hermitian block sizes (complex dimension).
    pub blocks: Vec<usize>,
    /// Per-block objective matrices, hermitian, same sizes as `blocks`.
    pub objective: Vec<CMat>,
    /// Objective coefficients of the free variables.
    pub free_objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub sense: Sense,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    NumericalFailure,
}

/// Certificates attached to non-optimal conclusive statuses. Both refer to
/// the minimization normalization of the program (max-sense objectives are
/// negated internally).
#[derive(Debug, Clone)]
pub enum Certificate {
    /// Farkas ray: `λ_max(Σ_i y_i A_{i,b}) ≤ ε` for every block, `B'y ≈ 0`,
    /// and `b'y = 1`. No `X ⪰ 0` can satisfy the constraints.
    InfeasibilityRay { y: Vec<f64> },
    /// Improving ray: `D ⪰ 0`, `𝒜D + Bv = 0`, and the (minimization)
    /// objective of `(D, v)` is negative.
    UnboundedRay { blocks: Vec<CMat>, free: Vec<f64> },
}

/// Solver output. Residuals and the gap are relative; `dual` and
/// `dual_blocks` always satisfy the dual of the minimization normalization,
/// i.e. `Z_b = C_b − Σ_i y_i A_{i,b} ⪰ 0` with `C` negated for max-sense
/// input. Dropped (redundant) constraint rows carry dual value 0.
#[derive(Debug, Clone)]
pub struct ConicSolution {
    pub status: SolveStatus,
    pub primal: Vec<CMat>,
    pub free_values: Vec<f64>,
    pub dual: Vec<f64>,
    pub dual_blocks: Vec<CMat>,
    /// Objective in the user's sense; total trace for feasibility sense.
    pub objective: f64,
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub certificate: Option<Certificate>,
    pub iterations: usize,
    pub message: String,
}

impl ConicProgram {
    pub fn new(sense: Sense, blocks: Vec<usize>) -> Self {
        let objective = blocks.iter().map(|&d| la::cmat_zero(d, d)).collect();
        ConicProgram {
            blocks,
            objective,
            free_objective: Vec::new(),
            constraints: Vec::new(),
            sense,
        }
    }

    pub fn num_free(&self) -> usize {
        self.free_objective.len()
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.iter().sum()
    }

    /// Structural validation: sizes, hermitianness, caps, finiteness.
    pub fn validate(&self, cfg: &ToolConfig) -> Result<()> {
        if self.objective.len() != self.blocks.len() {
            return Err(Error::dim("objective count does not match block count"));
        }
        for (b, (&d, c)) in self.blocks.iter().zip(&self.objective).enumerate() {
            if c.shape() != (d, d) {
                return Err(Error::dim(format!("objective block {b} has wrong size")));
            }
            if !la::is_hermitian(c, cfg.tol_herm) {
                return Err(Error::NotHermitian(format!("objective block {b}")));
            }
        }
        let p = self.num_free();
        for (i, row) in self.constraints.iter().enumerate() {
            if row.mats.len() != self.blocks.len() {
                return Err(Error::dim(format!("constraint {i} block count")));
            }
            if row.free_coeffs.len() != p {
                return Err(Error::dim(format!("constraint {i} free coefficient count")));
            }
            if !row.rhs.is_finite() {
                return Err(Error::invalid(format!("constraint {i} has non-finite rhs")));
            }
            for (b, (&d, a)) in self.blocks.iter().zip(&row.mats).enumerate() {
                if a.shape() != (d, d) {
                    return Err(Error::dim(format!("constraint {i} block {b} size")));
                }
                if !la::is_hermitian(a, cfg.tol_herm) {
                    return Err(Error::NotHermitian(format!("constraint {i} block {b}")));
                }
            }
        }
        if self.total_dim() > cfg.solver.max_total_dim {
            return Err(Error::invalid(format!(
                "total block dimension {} exceeds the cap {}",
                self.total_dim(),
                cfg.solver.max_total_dim
            )));
        }
        if self.constraints.len() > cfg.solver.max_constraints {
            return Err(Error::invalid(format!(
                "{} constraints exceed the cap {}",
                self.constraints.len(),
                cfg.solver.max_constraints
            )));
        }
        Ok(())
    }

    /// The program with sense normalized to `Min` (objective negated for
    /// max, replaced by the total trace for feasibility).
    fn min_normalized(&self) -> ConicProgram {
        let mut q = self.clone();
        match self.sense {
            Sense::Min => {}
            Sense::Max => {
                for c in &mut q.objective {
                    *c = -c.clone();
                }
                for c in &mut q.free_objective {
                    *c = -*c;
                }
            }
            Sense::Feasibility => {
                q.objective = self.blocks.iter().map(|&d| la::cmat_eye(d)).collect();
                q.free_objective = vec![0.0; self.num_free()];
            }
        }
        q.sense = Sense::Min;
        q
    }
}

/// Violation measures of a claimed Farkas ray, all of which must be small
/// for the certificate to stand. Checked directly on the complex program,
/// independent of the iteration that produced the ray.
#[derive(Debug, Clone, Copy)]
pub struct RayCheck {
    /// `max_b λ_max(Σ_i y_i A_{i,b})`, clamped below at 0.
    pub cone_violation: f64,
    /// `‖B'y‖_∞`.
    pub free_violation: f64,
    /// `b'y` (should be ≈ 1 after normalization).
    pub objective: f64,
}

/// Evaluates an infeasibility ray against the minimization normalization of
/// `p`. The ray certifies infeasibility when `cone_violation` and
/// `free_violation` are tiny and `objective` is positive (1 when normalized).
pub fn check_infeasibility_ray(p: &ConicProgram, y: &[f64]) -> Result<RayCheck> {
    let q = p.min_normalized();
    if y.len() != q.constraints.len() {
        return Err(Error::dim("ray length does not match constraint count"));
    }
    let mut cone = 0.0_f64;
    for (b, &d) in q.blocks.iter().enumerate() {
        let mut s = la::cmat_zero(d, d);
        for (i, row) in q.constraints.iter().enumerate() {
            if y[i] != 0.0 {
                s += row.mats[b].scale(y[i]);
            }
        }
        if d > 0 {
            cone = cone.max(la::max_eig_herm(&la::herm_part(&s)));
        }
    }
    let mut free_v = 0.0_f64;
    for j in 0..q.num_free() {
        let mut acc = 0.0;
        for (i, row) in q.constraints.iter().enumerate() {
            acc += y[i] * row.free_coeffs[j];
        }
        free_v = free_v.max(acc.abs());
    }
    let by: f64 = q
        .constraints
        .iter()
        .zip(y)
        .map(|(row, &yi)| row.rhs * yi)
        .sum();
    Ok(RayCheck {
        cone_violation: cone.max(0.0),
        free_violation: free_v,
        objective: by,
    })
}

/// Violation measures of a claimed improving (unboundedness) ray.
#[derive(Debug, Clone, Copy)]
pub struct ImprovingRayCheck {
    /// `max_b max(0, −λ_min(D_b))`.
    pub cone_violation: f64,
    /// `max_i |Σ_b ⟨A_{i,b}, D_b⟩ + B_i v|`.
    pub homogeneity_violation: f64,
    /// Minimization-form objective along the ray; must be negative.
    pub direction: f64,
}

/// Evaluates an unboundedness ray against the minimization normalization.
pub fn check_unbounded_ray(
    p: &ConicProgram,
    blocks: &[CMat],
    free: &[f64],
) -> Result<ImprovingRayCheck> {
    let q = p.min_normalized();
    if blocks.len() != q.blocks.len() || free.len() != q.num_free() {
        return Err(Error::dim("ray shape does not match program"));
    }
    let mut cone = 0.0_f64;
    for (d, m) in q.blocks.iter().zip(blocks) {
        if m.shape() != (*d, *d) {
            return Err(Error::dim("ray block size"));
        }
        if *d > 0 {
            cone = cone.max(-la::min_eig_herm(&la::herm_part(m)));
        }
    }
    let mut homog = 0.0_f64;
    for row in &q.constraints {
        let mut acc = 0.0;
        for (a, m) in row.mats.iter().zip(blocks) {
            acc += (a * m).trace().re;
        }
        for (c, v) in row.free_coeffs.iter().zip(free) {
            acc += c * v;
        }
        homog = homog.max(acc.abs());
    }
    let mut dir = 0.0;
    for (c, m) in q.objective.iter().zip(blocks) {
        dir += (c * m).trace().re;
    }
    for (c, v) in q.free_objective.iter().zip(free) {
        dir += c * v;
    }
    Ok(ImprovingRayCheck {
        cone_violation: cone.max(0.0),
        homogeneity_violation: homog,
        direction: dir,
    })
}

/// Solves the program. Statuses are conclusive only with evidence: an
/// `Infeasible` or `Unbounded` result always carries a certificate that has
/// been re-verified against the input; everything inconclusive is reported
/// as `NumericalFailure` with a message, never mislabeled.
pub fn solve(p: &ConicProgram, cfg: &ToolConfig) -> Result<ConicSolution> {
    p.validate(cfg)?;
    let q = p.min_normalized();
    let m_all = q.constraints.len();

    // Row reduction: detect dependent rows, catch algebraically inconsistent
    // systems before any iteration.
    let pre = presolve::reduce(&q);
    if let Some(y) = pre.certificate {
        let chk = check_infeasibility_ray(p, &y)?;
        if chk.cone_violation <= cfg.tol_cert
            && chk.free_violation <= cfg.tol_cert
            && chk.objective > 0.5
        {
            return Ok(infeasible_solution(p, y, "inconsistent equality rows"));
        }
        // fall through: treat as untrusted and let the iteration decide
    }
    let kept = pre.kept;
    let mut qr = q.clone();
    qr.constraints = kept.iter().map(|&i| q.constraints[i].clone()).collect();

    let form = realify::to_real_form(&qr);
    let opts = &cfg.solver;

    if form.blocks.is_empty() && form.b.len() == 0 {
        // No cone blocks and no constraints: value is 0 at u = 0 unless the
        // free objective is nonzero, in which case the program is unbounded.
        return solve_pure_free(p, &qr, m_all);
    }
    if form.b.len() == 0 {
        return solve_unconstrained(p, &qr, m_all, cfg);
    }

    let run = ipm::run(&form, opts);
    match run.outcome {
        IpmOutcome::Converged | IpmOutcome::Loose => {
            let mut sol = finish_solution(p, &qr, &run, m_all, &kept)?;
            if matches!(run.outcome, IpmOutcome::Loose) {
                sol.message = format!(
                    "accepted at loose tolerance after {} iterations",
                    run.iterations
                );
            }
            return Ok(sol);
        }
        IpmOutcome::Stalled(_) => {}
    }

    // Classification: is the program feasible at all?
    let phase = phase_one(&form, opts);
    match phase {
        PhaseOutcome::StrictlyFeasible { t, x } => {
            if p.sense == Sense::Feasibility {
                // The phase-1 point is itself the answer; pair it with the
                // trivially dual-feasible (y, Z) = (0, C) so the reported
                // residuals are honest, and zero out the meaningless gap.
                let shifted: Vec<_> = x
                    .iter()
                    .zip(&form.blocks)
                    .map(|(xb, &d)| xb.clone() + nalgebra::DMatrix::identity(d, d) * t)
                    .collect();
                let fake = ipm::IpmResult::from_primal_only(&form, shifted);
                let mut sol = finish_solution(p, &qr, &fake, m_all, &kept)?;
                sol.gap = 0.0;
                sol.message = format!("feasible point from slack maximization (t = {t:.3e})");
                return Ok(sol);
            }
            // Feasible but the main run failed: look for an improving ray.
            if let Some(ray) = ray_search(&form, cfg) {
                let chk = check_unbounded_ray(p, &ray.0, &ray.1)?;
                if chk.cone_violation <= cfg.tol_cert
                    && chk.homogeneity_violation <= cfg.tol_cert
                    && chk.direction < -cfg.tol_cert
                {
                    return Ok(unbounded_solution(p, ray, m_all));
                }
            }
            Ok(failure_solution(
                p,
                m_all,
                format!(
                    "iteration stalled on a feasible program (phase-1 slack {t:.3e}); \
                     no verified improving ray"
                ),
            ))
        }
        PhaseOutcome::Infeasible { y } => {
            // y refers to the reduced rows; expand and verify on the input.
            let mut y_full = vec![0.0; m_all];
            for (yi, &orig) in y.iter().zip(&kept) {
                y_full[orig] = *yi;
            }
            let chk = check_infeasibility_ray(p, &y_full)?;
            if chk.cone_violation <= cfg.tol_cert
                && chk.free_violation <= cfg.tol_cert
                && chk.objective > 0.5
            {
                Ok(infeasible_solution(p, y_full, "slack maximization"))
            } else {
                Ok(failure_solution(
                    p,
                    m_all,
                    format!(
                        "phase-1 reports infeasible but the Farkas ray did not verify \
                         (cone {:.2e}, free {:.2e}, b'y {:.2e})",
                        chk.cone_violation, chk.free_violation, chk.objective
                    ),
                ))
            }
        }
        PhaseOutcome::Marginal { t } => Ok(failure_solution(
            p,
            m_all,
            format!("marginally feasible (phase-1 slack {t:.3e}); no interior point"),
        )),
        PhaseOutcome::Failed(msg) => Ok(failure_solution(
            p,
            m_all,
            format!("main iteration stalled and phase-1 failed: {msg}"),
        )),
    }
}

fn infeasible_solution(p: &ConicProgram, y: Vec<f64>, how: &str) -> ConicSolution {
    ConicSolution {
        status: SolveStatus::Infeasible,
        primal: p.blocks.iter().map(|&d| la::cmat_zero(d, d)).collect(),
        free_values: vec![0.0; p.num_free()],
        dual: vec![0.0; p.constraints.len()],
        dual_blocks: p.blocks.iter().map(|&d| la::cmat_zero(d, d)).collect(),
        objective: f64::NAN,
        gap: f64::NAN,
        primal_residual: f64::NAN,
        dual_residual: f64::NAN,
        certificate: Some(Certificate::InfeasibilityRay { y }),
        iterations: 0,
        message: format!("infeasible ({how}); Farkas ray verified"),
    }
}

fn unbounded_solution(
    p: &ConicProgram,
    ray: (Vec<CMat>, Vec<f64>),
    m_all: usize,
) -> ConicSolution {
    ConicSolution {
        status: SolveStatus::Unbounded,
        primal: p.blocks.iter().map(|&d| la::cmat_zero(d, d)).collect(),
        free_values: vec![0.0; p.num_free()],
        dual: vec![0.0; m_all],
        dual_blocks: p.blocks.iter().map(|&d| la::cmat_zero(d, d)).collect(),
        objective: match p.sense {
            Sense::Max => f64::INFINITY,
            _ => f64::NEG_INFINITY,
        },
        gap: f64::NAN,
        primal_residual: f64::NAN,
        dual_residual: f64::NAN,
        certificate: Some(Certificate::UnboundedRay {
            blocks: ray.0,
            free: ray.1,
        }),
        iterations: 0,
        message: "unbounded; improving ray verified".to_string(),
    }
}

fn failure_solution(p: &ConicProgram, m_all: usize, msg: String) -> ConicSolution {
    ConicSolution {
        status: SolveStatus::NumericalFailure,
        primal: p.blocks.iter().map(|&d| la::cmat_zero(d, d)).collect(),
        free_values: vec![0.0; p.num_free()],
        dual: vec![0.0; m_all],
        dual_blocks: p.blocks.iter().map(|&d| la::cmat_zero(d, d)).collect(),
        objective: f64::NAN,
        gap: f64::NAN,
        primal_residual: f64::NAN,
        dual_residual: f64::NAN,
        certificate: None,
        iterations: 0,
        message: msg,
    }
}

/// Assembles a `ConicSolution` from a finished real iteration: restores the
/// complex blocks, recomputes residuals against the complex input, fills
/// dropped dual rows with zero, and applies the sense correction.
fn finish_solution(
    p: &ConicProgram,
    qr: &ConicProgram,
    run: &ipm::IpmResult,
    m_all: usize,
    kept: &[usize],
) -> Result<ConicSolution> {
    let primal: Vec<CMat> = run
        .x
        .iter()
        .map(|s| la::complex_restore(s))
        .collect();
    // Under the ½Φ embedding the restored slack is half the complex one.
    let dual_blocks: Vec<CMat> = run
        .z
        .iter()
        .map(|s| la::complex_restore(s).scale(2.0))
        .collect();
    let free_values: Vec<f64> = run.u.iter().cloned().collect();
    let mut dual = vec![0.0; m_all];
    for (v, &orig) in run.y.iter().zip(kept) {
        dual[orig] = *v;
    }

    // Residuals on the complex (reduced) program.
    let mut rp = 0.0_f64;
    let mut b_norm = 0.0_f64;
    for row in &qr.constraints {
        let mut lhs = 0.0;
        for (a, x) in row.mats.iter().zip(&primal) {
            lhs += (a * x).trace().re;
        }
        for (c, u) in row.free_coeffs.iter().zip(&free_values) {
            lhs += c * u;
        }
        rp += (lhs - row.rhs) * (lhs - row.rhs);
        b_norm += row.rhs * row.rhs;
    }
    let rel_p = rp.sqrt() / (1.0 + b_norm.sqrt());

    let mut rd = 0.0_f64;
    let mut c_norm = 0.0_f64;
    for (b, c) in qr.objective.iter().enumerate() {
        let mut acc = c.clone() - &dual_blocks[b];
        for (row, &yi) in qr.constraints.iter().zip(run.y.iter()) {
            if yi != 0.0 {
                acc -= row.mats[b].scale(yi);
            }
        }
        rd += la::fro(&acc).powi(2);
        c_norm += la::fro(c).powi(2);
    }
    let mut rf = 0.0_f64;
    for j in 0..qr.num_free() {
        let mut acc = -qr.free_objective[j];
        for (row, &yi) in qr.constraints.iter().zip(run.y.iter()) {
            acc += row.free_coeffs[j] * yi;
        }
        rf += acc * acc;
        c_norm += qr.free_objective[j] * qr.free_objective[j];
    }
    let rel_d = (rd + rf).sqrt() / (1.0 + c_norm.sqrt());

    let mut pobj = 0.0;
    for (c, x) in qr.objective.iter().zip(&primal) {
        pobj += (c * x).trace().re;
    }
    for (c, u) in qr.free_objective.iter().zip(&free_values) {
        pobj += c * u;
    }
    let dobj: f64 = qr
        .constraints
        .iter()
        .zip(run.y.iter())
        .map(|(row, &yi)| row.rhs * yi)
        .sum();
    let gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());

    let objective = match p.sense {
        Sense::Min => pobj,
        Sense::Max => -pobj,
        Sense::Feasibility => primal.iter().map(|x| x.trace().re).sum(),
    };

    Ok(ConicSolution {
        status: SolveStatus::Optimal,
        primal,
        free_values,
        dual,
        dual_blocks,
        objective,
        gap,
        primal_residual: rel_p,
        dual_residual: rel_d,
        certificate: None,
        iterations: run.iterations,
        message: String::new(),
    })
}

/// Degenerate shell: no PSD blocks and no constraints.
fn solve_pure_free(
    p: &ConicProgram,
    qr: &ConicProgram,
    m_all: usize,
) -> Result<ConicSolution> {
    let cf = &qr.free_objective;
    if cf.iter().any(|&c| c != 0.0) {
        let v: Vec<f64> = cf.iter().map(|&c| -c).collect();
        return Ok(unbounded_solution(p, (Vec::new(), v), m_all));
    }
    Ok(ConicSolution {
        status: SolveStatus::Optimal,
        primal: Vec::new(),
        free_values: vec![0.0; qr.num_free()],
        dual: vec![0.0; m_all],
        dual_blocks: Vec::new(),
        objective: 0.0,
        gap: 0.0,
        primal_residual: 0.0,
        dual_residual: 0.0,
        certificate: None,
        iterations: 0,
        message: "trivial program".to_string(),
    })
}

/// Degenerate shell: PSD blocks present but zero constraints. The optimum is
/// X = 0 when every objective block is PSD, otherwise the program is
/// unbounded along a negative eigenvector.
fn solve_unconstrained(
    p: &ConicProgram,
    qr: &ConicProgram,
    m_all: usize,
    cfg: &ToolConfig,
) -> Result<ConicSolution> {
    if qr.free_objective.iter().any(|&c| c != 0.0) {
        let v: Vec<f64> = qr.free_objective.iter().map(|&c| -c).collect();
        let blocks: Vec<CMat> = qr.blocks.iter().map(|&d| la::cmat_zero(d, d)).collect();
        return Ok(unbounded_solution(p, (blocks, v), m_all));
    }
    for (b, c) in qr.objective.iter().enumerate() {
        if qr.blocks[b] == 0 {
            continue;
        }
        let (vals, vecs) = la::herm_eigen(&la::herm_part(c));
        if vals[0] < -cfg.tol_psd {
            let mut blocks: Vec<CMat> =
                qr.blocks.iter().map(|&d| la::cmat_zero(d, d)).collect();
            let v = vecs.column(0).into_owned();
            blocks[b] = &v * v.adjoint();
            let free = vec![0.0; qr.num_free()];
            return Ok(unbounded_solution(p, (blocks, free), m_all));
        }
    }
    let primal: Vec<CMat> = qr.blocks.iter().map(|&d| la::cmat_zero(d, d)).collect();
    Ok(ConicSolution {
        status: SolveStatus::Optimal,
        primal,
        free_values: vec![0.0; qr.num_free()],
        dual: vec![0.0; m_all],
        dual_blocks: qr.objective.clone(),
        objective: match p.sense {
            Sense::Feasibility => 0.0,
            _ => 0.0,
        },
        gap: 0.0,
        primal_residual: 0.0,
        dual_residual: 0.0,
        certificate: None,
        iterations: 0,
        message: "no constraints".to_string(),
    })
}

enum PhaseOutcome {
    StrictlyFeasible { t: f64, x: Vec<nalgebra::DMatrix<f64>> },
    Infeasible { y: Vec<f64> },
    Marginal { t: f64 },
    Failed(String),
}

/// Slack maximization: max t subject to 𝒜(X) + t·𝒜(I) = b with X ⪰ 0 and a
/// cap row t + s = 1. The original constraints admit a PSD point iff the
/// optimum t* is ≥ 0, and the dual of a negative optimum is a Farkas ray.
fn phase_one(form: &RealForm, opts: &crate::config::SolverOptions) -> PhaseOutcome {
    let m = form.b.len();
    let nb = form.blocks.len();
    let mut blocks = form.blocks.clone();
    blocks.push(1); // cap slack s
    let c: Vec<nalgebra::DMatrix<f64>> = blocks
        .iter()
        .map(|&d| nalgebra::DMatrix::zeros(d, d))
        .collect();
    let cf = DVector::from_element(1, -1.0); // min −t
    let mut a: Vec<Vec<nalgebra::DMatrix<f64>>> = Vec::with_capacity(m + 1);
    let mut bmat = nalgebra::DMatrix::zeros(m + 1, 1);
    let mut rhs = DVector::zeros(m + 1);
    for i in 0..m {
        let mut row: Vec<nalgebra::DMatrix<f64>> = form.a[i].clone();
        row.push(nalgebra::DMatrix::zeros(1, 1));
        // coefficient of t in row i: ⟨A_i, I⟩
        let a0: f64 = form.a[i].iter().map(|m| m.trace()).sum();
        bmat[(i, 0)] = a0;
        a.push(row);
        rhs[i] = form.b[i];
    }
    // cap row: t + s = 1
    let mut cap: Vec<nalgebra::DMatrix<f64>> = form
        .blocks
        .iter()
        .map(|&d| nalgebra::DMatrix::zeros(d, d))
        .collect();
    cap.push(nalgebra::DMatrix::identity(1, 1));
    a.push(cap);
    bmat[(m, 0)] = 1.0;
    rhs[m] = 1.0;
    // Free variables of the original program remain free here.
    let p_orig = form.bf.ncols();
    let mut bf = nalgebra::DMatrix::zeros(m + 1, p_orig + 1);
    for i in 0..m {
        for j in 0..p_orig {
            bf[(i, j)] = form.bf[(i, j)];
        }
    }
    for i in 0..=m {
        bf[(i, p_orig)] = bmat[(i, 0)];
    }
    let mut cf_full = DVector::zeros(p_orig + 1);
    cf_full[p_orig] = cf[0];

    let phase_form = RealForm {
        blocks,
        c,
        cf: cf_full,
        a,
        bf,
        b: rhs,
    };
    let mut phase_opts = opts.clone();
    phase_opts.max_iter = opts.max_iter.max(100);
    let run = ipm::run(&phase_form, &phase_opts);
    match run.outcome {
        IpmOutcome::Converged | IpmOutcome::Loose => {
            let t = run.u[p_orig];
            let strict = 1e-7;
            if t > strict {
                let x = run.x[..nb].to_vec();
                PhaseOutcome::StrictlyFeasible { t, x }
            } else if t < -strict {
                // Farkas ray from the first m dual multipliers.
                let mut y: Vec<f64> = (0..m).map(|i| run.y[i]).collect();
                let by: f64 = (0..m).map(|i| y[i] * form.b[i]).sum();
                if by.abs() < 1e-300 {
                    return PhaseOutcome::Failed("degenerate phase-1 dual".into());
                }
                for v in &mut y {
                    *v /= by;
                }
                PhaseOutcome::Infeasible { y }
            } else {
                PhaseOutcome::Marginal { t }
            }
        }
        IpmOutcome::Stalled(msg) => PhaseOutcome::Failed(msg),
    }
}

/// Searches for an improving ray of the minimization program: minimize the
/// objective over the homogeneous constraints with total trace capped at 1.
/// A strictly negative optimum is an unboundedness certificate.
fn ray_search(form: &RealForm, cfg: &ToolConfig) -> Option<(Vec<CMat>, Vec<f64>)> {
    let m = form.b.len();
    let mut a = form.a.clone();
    let mut bf = form.bf.clone();
    let mut rhs = DVector::zeros(m + 1);
    // trace cap row
    let cap: Vec<nalgebra::DMatrix<f64>> = form
        .blocks
        .iter()
        .map(|&d| nalgebra::DMatrix::identity(d, d))
        .collect();
    a.push(cap);
    rhs[m] = 1.0;
    bf = bf.insert_rows(m, 1, 0.0);
    let ray_form = RealForm {
        blocks: form.blocks.clone(),
        c: form.c.clone(),
        cf: form.cf.clone(),
        a,
        bf,
        b: rhs,
    };
    let run = ipm::run(&ray_form, &cfg.solver);
    if !matches!(run.outcome, IpmOutcome::Converged | IpmOutcome::Loose) {
        return None;
    }
    let val = run.pobj;
    if val >= -1e-7 {
        return None;
    }
    let blocks: Vec<CMat> = run.x.iter().map(|s| la::complex_restore(s)).collect();
    // Clamp numerical dust below the PSD cone.
    let blocks: Vec<CMat> = blocks
        .iter()
        .map(|mth| {
            la::herm_map(&la::herm_part(mth), |l| l.max(0.0))
        })
        .collect();
    let free: Vec<f64> = run.u.iter().cloned().collect();
    Some((blocks, free))
}

/// Convenience: evaluate `Σ_b ⟨A_b, X_b⟩ + coeffs·u` for one constraint row.
pub fn row_value(row: &Constraint, blocks: &[CMat], free: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (a, x) in row.mats.iter().zip(blocks) {
        acc += (a * x).trace().re;
    }
    for (c, u) in row.free_coeffs.iter().zip(free) {
        acc += c * u;
    }
    acc
}

/// Hermitian rank-one helper `v v*` used in tests and certificates.
pub fn outer(v: &la::CVec) -> CMat {
    v * v.adjoint()
}
