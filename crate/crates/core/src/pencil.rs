//! Monic linear pencils and their free spectrahedra.
//!
//! A pencil `L = A_0 + A_1 x_1 + … + A_n x_n` with hermitian d×d
//! coefficients defines at every level k the set of hermitian tuples X
//! with `L(X) = A_0 ⊗ I + Σ A_j ⊗ X_j ⪰ 0`. This module provides the
//! standard examples (free cube and free ball), membership testing,
//! normalization to a monic pencil, and the scalar (level-1) questions
//! that already decide emptiness, cube containment, and affine vanishing
//! for the whole free set.

use num_complex::Complex64;

use crate::config::ToolConfig;
use crate::error::{Error, Result};
use crate::freealg::HermTuple;
use crate::la::{self, CMat};
use crate::sdpsolve::{
    solve, Certificate, ConicProgram, Constraint, ProgramBuilder, Sense, SolveStatus,
};

/// Linear matrix pencil `A_0 + A_1 x_1 + … + A_n x_n`.
#[derive(Debug, Clone)]
pub struct Pencil {
    n: usize,
    d: usize,
    coeffs: Vec<CMat>,
    monic: bool,
    hermitian: bool,
}

impl Pencil {
    /// Builds a pencil from the coefficient list `A_0, …, A_n` and records
    /// the monic / hermitian flags within the given relative tolerance.
    pub fn new(coeffs: Vec<CMat>, tol: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("a pencil needs a constant term"));
        }
        let d = coeffs[0].nrows();
        if d == 0 {
            return Err(Error::dim("pencil coefficients must be at least 1x1"));
        }
        for (j, a) in coeffs.iter().enumerate() {
            if a.nrows() != d || a.ncols() != d {
                return Err(Error::dim(format!(
                    "coefficient {} is {}x{}, expected {}x{}",
                    j,
                    a.nrows(),
                    a.ncols(),
                    d,
                    d
                )));
            }
        }
        let hermitian = coeffs.iter().all(|a| la::is_hermitian(a, tol));
        let eye = la::cmat_eye(d);
        let monic = la::fro(&(&coeffs[0] - &eye)) <= tol * (1.0 + la::fro(&coeffs[0]));
        Ok(Pencil {
            n: coeffs.len() - 1,
            d,
            coeffs,
            monic,
            hermitian,
        })
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.d
    }

    /// Coefficient `A_j` for `0 ≤ j ≤ n`.
    pub fn coeff(&self, j: usize) -> &CMat {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[CMat] {
        &self.coeffs
    }

    pub fn is_monic(&self) -> bool {
        self.monic
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Evaluates `L(X) = A_0 ⊗ I_k + Σ_j A_j ⊗ X_j`.
    pub fn evaluate(&self, x: &HermTuple) -> Result<CMat> {
        if x.nvars() != self.n {
            return Err(Error::Variables(format!(
                "pencil has {} variables, tuple has {}",
                self.n,
                x.nvars()
            )));
        }
        let k = x.level();
        let mut acc = la::kron(&self.coeffs[0], &la::cmat_eye(k));
        for j in 1..=self.n {
            acc += la::kron(&self.coeffs[j], x.entry(j));
        }
        Ok(acc)
    }

    /// Level-1 evaluation `A_0 + Σ_j x_j A_j` at a real scalar point.
    pub fn affine_value(&self, xs: &[f64]) -> Result<CMat> {
        if xs.len() != self.n {
            return Err(Error::Variables(format!(
                "pencil has {} variables, point has {}",
                self.n,
                xs.len()
            )));
        }
        let mut acc = self.coeffs[0].clone();
        for (j, &v) in xs.iter().enumerate() {
            acc += self.coeffs[j + 1].scale(v);
        }
        Ok(acc)
    }
}

/// Outcome of a membership query at some level.
#[derive(Debug, Clone, Copy)]
pub struct MembershipReport {
    pub member: bool,
    pub min_eigenvalue: f64,
    pub level: usize,
}

/// Real affine form `α_0 + α_1 x_1 + … + α_n x_n` on level-1 points.
#[derive(Debug, Clone)]
pub struct AffineForm {
    alpha: Vec<f64>,
}

impl AffineForm {
    /// `alpha` lists `α_0, …, α_n`.
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::invalid("an affine form needs a constant term"));
        }
        if alpha.iter().any(|a| !a.is_finite()) {
            return Err(Error::invalid("affine form coefficients must be finite"));
        }
        Ok(AffineForm { alpha })
    }

    pub fn nvars(&self) -> usize {
        self.alpha.len() - 1
    }

    pub fn constant(&self) -> f64 {
        self.alpha[0]
    }

    /// Coefficient `α_j` for `1 ≤ j ≤ n`.
    pub fn coeff(&self, j: usize) -> f64 {
        self.alpha[j]
    }

    pub fn value(&self, xs: &[f64]) -> f64 {
        self.alpha[0]
            + self.alpha[1..]
                .iter()
                .zip(xs)
                .map(|(a, x)| a * x)
                .sum::<f64>()
    }
}

/// The free cube of radius `r`: blocks `[[r, x_j], [x_j, r]]`, one per
/// variable. Membership at any level is `‖X_j‖ ≤ r` for every j.
pub fn make_cube(n: usize, r: f64) -> Result<Pencil> {
    if n == 0 {
        return Err(Error::invalid("the cube needs at least one variable"));
    }
    if !(r > 0.0) {
        return Err(Error::invalid("cube radius must be positive"));
    }
    let d = 2 * n;
    let mut coeffs = vec![la::cmat_eye(d).scale(r)];
    for j in 0..n {
        let mut a = la::cmat_zero(d, d);
        a[(2 * j, 2 * j + 1)] = Complex64::new(1.0, 0.0);
        a[(2 * j + 1, 2 * j)] = Complex64::new(1.0, 0.0);
        coeffs.push(a);
    }
    Pencil::new(coeffs, 1e-12)
}

/// The free ball of radius `r`: size n+1 with `A_0 = diag(1, …, 1, r²)`
/// and `A_j` carrying `x_j` in the border row and column. By the Schur
/// complement, membership is `X_1² + … + X_n² ⪯ r² I`.
pub fn make_ball(n: usize, r: f64) -> Result<Pencil> {
    if n == 0 {
        return Err(Error::invalid("the ball needs at least one variable"));
    }
    if !(r > 0.0) {
        return Err(Error::invalid("ball radius must be positive"));
    }
    let d = n + 1;
    let mut a0 = la::cmat_eye(d);
    a0[(n, n)] = Complex64::new(r * r, 0.0);
    let mut coeffs = vec![a0];
    for j in 0..n {
        let mut a = la::cmat_zero(d, d);
        a[(j, n)] = Complex64::new(1.0, 0.0);
        a[(n, j)] = Complex64::new(1.0, 0.0);
        coeffs.push(a);
    }
    Pencil::new(coeffs, 1e-12)
}

/// Membership of the tuple in the free spectrahedron of `l`. The slack is
/// relative: member ⟺ `λ_min(L(X)) ≥ −tol·(1 + ‖L(X)‖_F)`.
pub fn is_member(l: &Pencil, x: &HermTuple, tol: f64) -> Result<MembershipReport> {
    if !l.is_hermitian() {
        return Err(Error::NotHermitian("membership needs a hermitian pencil".into()));
    }
    let lx = l.evaluate(x)?;
    let lam = la::min_eig_herm(&lx);
    Ok(MembershipReport {
        member: lam >= -tol * (1.0 + la::fro(&lx)),
        min_eigenvalue: lam,
        level: x.level(),
    })
}

/// Conjugates a hermitian pencil with positive definite constant term to the
/// monic pencil `A_0^{−1/2} L A_0^{−1/2}`, which has the same positivity
/// domains at every level. Returns the pencil and the conjugator
/// `S = A_0^{−1/2}`.
pub fn make_monic(l: &Pencil, tol: f64) -> Result<(Pencil, CMat)> {
    if !l.is_hermitian() {
        return Err(Error::NotHermitian("monic normalization needs a hermitian pencil".into()));
    }
    let lam = la::min_eig_herm(l.coeff(0));
    if lam <= tol {
        return Err(Error::SingularConstantTerm(format!(
            "smallest eigenvalue of the constant term is {lam:.3e}, need an interior point at 0"
        )));
    }
    let s = la::herm_inv_sqrt(l.coeff(0), tol)?;
    let mut coeffs = vec![la::cmat_eye(l.size())];
    for j in 1..=l.nvars() {
        coeffs.push(la::herm_part(&(&s * l.coeff(j) * &s)));
    }
    let p = Pencil::new(coeffs, 1e-10)?;
    Ok((p, s))
}

/// Level-1 feasibility answer. The margin is the recomputed smallest
/// eigenvalue of `L(x)` at the returned point, not the solver's claim.
#[derive(Debug, Clone)]
pub enum Level1Outcome {
    Interior { x: Vec<f64>, margin: f64 },
    Boundary { x: Vec<f64>, margin: f64 },
    /// `certificate` is a state Ω ⪰ 0, tr Ω = 1, orthogonal to every A_j,
    /// with `⟨A_0, Ω⟩ = value < 0`; no scalar point can be feasible.
    Infeasible { certificate: CMat, value: f64 },
}

/// Decides whether the level-1 set `{x ∈ ℝⁿ : L(x) ⪰ 0}` is nonempty, and
/// if so produces a point maximizing the smallest eigenvalue of `L(x)`.
///
/// Internally this solves `min ⟨A_0, Ω⟩` over states Ω orthogonal to the
/// A_j, whose optimum equals `max_x λ_min(L(x))`. The state program has a
/// compact feasible set, so the solver never has to chase an unbounded
/// objective even when the spectrahedron itself is unbounded; when the
/// state program is infeasible, its Farkas ray is exactly a direction
/// along which `L` grows positive definite, and a strictly interior point
/// is reconstructed from it.
pub fn level1_feasible(l: &Pencil, cfg: &ToolConfig) -> Result<Level1Outcome> {
    if !l.is_hermitian() {
        return Err(Error::NotHermitian("level-1 feasibility needs a hermitian pencil".into()));
    }
    let n = l.nvars();
    let d = l.size();
    let mut p = ConicProgram::new(Sense::Min, vec![d]);
    p.objective[0] = l.coeff(0).clone();
    for j in 1..=n {
        p.constraints.push(Constraint {
            mats: vec![l.coeff(j).clone()],
            free_coeffs: vec![],
            rhs: 0.0,
        });
    }
    p.constraints.push(Constraint {
        mats: vec![la::cmat_eye(d)],
        free_coeffs: vec![],
        rhs: 1.0,
    });
    let sol = solve(&p, cfg)?;
    match sol.status {
        SolveStatus::Optimal => {
            // Dual feasibility reads A_0 − Σ y_j A_j − y_{n+1} I ⪰ 0, so
            // x_j = −y_j is the level-1 point and y_{n+1} its margin.
            let x: Vec<f64> = (0..n).map(|j| -sol.dual[j]).collect();
            let margin = la::min_eig_herm(&l.affine_value(&x)?);
            let tol = cfg.tol_obj * (1.0 + la::fro(l.coeff(0)));
            if margin > tol {
                return Ok(Level1Outcome::Interior { x, margin });
            }
            if margin >= -tol {
                return Ok(Level1Outcome::Boundary { x, margin });
            }
            // The claimed optimum is negative: the set is empty and the
            // state itself is the certificate. Verify it independently.
            let omega = la::herm_part(&sol.primal[0]);
            verify_emptiness_state(l, &omega, cfg)?;
            Ok(Level1Outcome::Infeasible {
                value: (l.coeff(0) * &omega).trace().re,
                certificate: omega,
            })
        }
        SolveStatus::Infeasible => {
            let Some(Certificate::InfeasibilityRay { y }) = &sol.certificate else {
                return Err(Error::Solver("infeasible state program without a ray".into()));
            };
            interior_from_ray(l, y, cfg)
        }
        SolveStatus::Unbounded => Err(Error::Solver(
            "state program reported unbounded, which contradicts its compact domain".into(),
        )),
        SolveStatus::NumericalFailure => Err(Error::Solver(format!(
            "level-1 feasibility did not converge: {}",
            sol.message
        ))),
    }
}

fn verify_emptiness_state(l: &Pencil, omega: &CMat, cfg: &ToolConfig) -> Result<()> {
    let scale = 1.0 + la::fro(omega);
    if la::min_eig_herm(omega) < -cfg.tol_cert * scale {
        return Err(Error::Solver("emptiness certificate is not positive semidefinite".into()));
    }
    if (omega.trace().re - 1.0).abs() > cfg.tol_cert * scale {
        return Err(Error::Solver("emptiness certificate is not trace-normalized".into()));
    }
    for j in 1..=l.nvars() {
        let v = (l.coeff(j) * omega).trace().re;
        if v.abs() > cfg.tol_cert * scale * (1.0 + la::fro(l.coeff(j))) {
            return Err(Error::Solver(format!(
                "emptiness certificate is not orthogonal to coefficient {j} (pairing {v:.3e})"
            )));
        }
    }
    let v0 = (l.coeff(0) * omega).trace().re;
    if v0 >= 0.0 {
        return Err(Error::Solver(format!(
            "emptiness certificate pairs nonnegatively with the constant term ({v0:.3e})"
        )));
    }
    Ok(())
}

/// Farkas ray of the state program: `Σ y_j A_j + y_{n+1} I ⪯ 0` with
/// `y_{n+1} > 0`, so moving from 0 along `x_j = −y_j / y_{n+1}` makes
/// `L` grow by at least the identity per unit step.
fn interior_from_ray(l: &Pencil, y: &[f64], cfg: &ToolConfig) -> Result<Level1Outcome> {
    let n = l.nvars();
    if y.len() != n + 1 || y[n] <= 0.0 {
        return Err(Error::Solver("malformed ray for the state program".into()));
    }
    let dir: Vec<f64> = (0..n).map(|j| -y[j] / y[n]).collect();
    let lam0 = la::min_eig_herm(l.coeff(0));
    let step = 1.0 + (1.0 - lam0).max(0.0);
    let x: Vec<f64> = dir.iter().map(|v| v * step).collect();
    let margin = la::min_eig_herm(&l.affine_value(&x)?);
    let tol = cfg.tol_obj * (1.0 + la::fro(l.coeff(0)));
    if margin <= tol {
        return Err(Error::Solver(format!(
            "ray-derived interior point failed verification (margin {margin:.3e})"
        )));
    }
    Ok(Level1Outcome::Interior { x, margin })
}

/// Report of the level-1 cube containment test.
#[derive(Debug, Clone)]
pub struct Containment {
    pub contained: bool,
    /// Per-coordinate extent `max(max x_j, max −x_j)` over the level-1 set;
    /// infinite for coordinates unbounded on the set.
    pub extents: Vec<f64>,
    /// A level-1 point with some `|x_j| > r` when not contained.
    pub witness: Option<Vec<f64>>,
}

/// Decides `𝒟_L ⊆ cube(r)` through the level-1 test: the free set sits in
/// the free cube exactly when every scalar coordinate obeys `|x_j| ≤ r` on
/// the scalar section, which takes 2n small SDPs.
pub fn cube_containment(l: &Pencil, r: f64, cfg: &ToolConfig) -> Result<Containment> {
    if !(r > 0.0) {
        return Err(Error::invalid("cube radius must be positive"));
    }
    let base = match level1_feasible(l, cfg)? {
        Level1Outcome::Interior { x, .. } | Level1Outcome::Boundary { x, .. } => x,
        Level1Outcome::Infeasible { .. } => {
            return Err(Error::invalid(
                "containment is undefined for an empty level-1 set",
            ));
        }
    };
    let n = l.nvars();
    let tol = cfg.tol_obj * (1.0 + r);
    let mut extents = vec![0.0_f64; n];
    let mut witness = None;
    for j in 0..n {
        for sign in [1.0, -1.0] {
            let (value, point) = level1_extreme(l, j, sign, &base, cfg)?;
            extents[j] = extents[j].max(value);
            if value > r + tol && witness.is_none() {
                if let Some(x) = point {
                    let lam = la::min_eig_herm(&l.affine_value(&x)?);
                    if lam >= -cfg.tol_psd * (1.0 + la::fro(l.coeff(0))) {
                        witness = Some(x);
                    }
                }
            }
        }
    }
    let contained = extents.iter().all(|&e| e <= r + tol);
    if !contained && witness.is_none() {
        return Err(Error::Solver(
            "containment violated but no witness survived verification".into(),
        ));
    }
    Ok(Containment {
        contained,
        extents,
        witness: if contained { None } else { witness },
    })
}

/// Maximizes `sign·x_j` over the level-1 set. Returns the optimum (∞ when
/// the direction is unbounded) and a witness point attaining it.
fn level1_extreme(
    l: &Pencil,
    j: usize,
    sign: f64,
    base: &[f64],
    cfg: &ToolConfig,
) -> Result<(f64, Option<Vec<f64>>)> {
    let n = l.nvars();
    let mut b = ProgramBuilder::new(Sense::Max);
    let xs: Vec<_> = (1..=n)
        .map(|k| b.free_var(&format!("x{k}")))
        .collect();
    b.set_free_objective(xs[j], sign);
    b.add_lmi(l.coeffs(), &xs);
    let sol = solve(&b.finish().program, cfg)?;
    match sol.status {
        SolveStatus::Optimal => {
            let x: Vec<f64> = sol.free_values[..n].to_vec();
            Ok((sign * x[j], Some(x)))
        }
        SolveStatus::Unbounded => {
            let Some(Certificate::UnboundedRay { free, .. }) = &sol.certificate else {
                return Err(Error::Solver("unbounded level-1 objective without a ray".into()));
            };
            let v: Vec<f64> = free[..n].to_vec();
            if sign * v[j] <= 0.0 {
                return Err(Error::Solver("improving ray does not move the objective".into()));
            }
            // Walk far enough along the ray that the coordinate dwarfs any
            // radius a caller could reasonably compare against.
            let scale = (1.0 + base[j].abs() + cfg.solver.box_bound) / (sign * v[j]);
            let x: Vec<f64> = base
                .iter()
                .zip(&v)
                .map(|(b, v)| b + scale * v)
                .collect();
            Ok((f64::INFINITY, Some(x)))
        }
        SolveStatus::Infeasible => Err(Error::Solver(
            "level-1 set became infeasible while maximizing a coordinate".into(),
        )),
        SolveStatus::NumericalFailure => Err(Error::Solver(format!(
            "coordinate extreme {} did not converge: {}",
            j + 1,
            sol.message
        ))),
    }
}

/// Decides whether the affine form vanishes identically on the level-1 set
/// by maximizing and minimizing it there; both extrema must be 0 within
/// `tol_obj`. Vanishing at level 1 lifts to every level of the free set.
pub fn affine_vanishes_on_level1(l: &Pencil, form: &AffineForm, cfg: &ToolConfig) -> Result<bool> {
    if form.nvars() != l.nvars() {
        return Err(Error::Variables(format!(
            "pencil has {} variables, form has {}",
            l.nvars(),
            form.nvars()
        )));
    }
    if matches!(level1_feasible(l, cfg)?, Level1Outcome::Infeasible { .. }) {
        return Err(Error::invalid(
            "vanishing is undefined for an empty level-1 set",
        ));
    }
    let n = l.nvars();
    let scale = 1.0 + form.alpha.iter().map(|a| a.abs()).fold(0.0, f64::max);
    for sense in [Sense::Max, Sense::Min] {
        let mut b = ProgramBuilder::new(sense);
        let xs: Vec<_> = (1..=n)
            .map(|k| b.free_var(&format!("x{k}")))
            .collect();
        for (k, &id) in xs.iter().enumerate() {
            b.set_free_objective(id, form.coeff(k + 1));
        }
        b.add_lmi(l.coeffs(), &xs);
        let sol = solve(&b.finish().program, cfg)?;
        match sol.status {
            SolveStatus::Optimal => {
                if (sol.objective + form.constant()).abs() > cfg.tol_obj * scale {
                    return Ok(false);
                }
            }
            SolveStatus::Unbounded => return Ok(false),
            SolveStatus::Infeasible => {
                return Err(Error::Solver(
                    "level-1 set became infeasible while bounding the form".into(),
                ));
            }
            SolveStatus::NumericalFailure => {
                return Err(Error::Solver(format!(
                    "affine bound did not converge: {}",
                    sol.message
                )));
            }
        }
    }
    Ok(true)
}
