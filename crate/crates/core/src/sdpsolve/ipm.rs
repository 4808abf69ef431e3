//! Nesterov-Todd predictor-corrector iteration on the realified block form.
//!
//! Everything here is real symmetric arithmetic. The search direction at
//! scaling W (W Z W = X) comes from the linearization
//!
//! ```text
//! ΔX + W ΔZ W = σμ Z⁻¹ − X
//! ΔZ_b        = Rd_b − Σ_i Δy_i A_{i,b}
//! 𝒜ΔX + BΔu  = rp,   B'Δy = rf
//! ```
//!
//! which reduces to the bordered Schur system
//! `[M B; B' 0][Δy; Δu] = [h; rf]` with `M_ij = Σ_b ⟨A_{i,b}, W_b A_{j,b} W_b⟩`.
//! The centering weight σ is set adaptively from the affine step,
//! σ = (μ_aff/μ)³; steps use fraction-to-boundary 0.98-(iterates start at
//! identity blocks and stay strictly inside the cone).

use nalgebra::{DMatrix, DVector};

use crate::config::SolverOptions;

pub(crate) type Rm = DMatrix<f64>;
pub(crate) type Rv = DVector<f64>;

/// Realified minimization program: blocks are real symmetric.
pub(crate) struct RealForm {
    pub blocks: Vec<usize>,
    /// Per-block objective.
    pub c: Vec<Rm>,
    /// Free-variable objective (length p).
    pub cf: Rv,
    /// Constraint coefficient matrices, `a[i][b]`.
    pub a: Vec<Vec<Rm>>,
    /// Free-variable coefficients, m×p.
    pub bf: Rm,
    /// Right-hand sides (length m).
    pub b: Rv,
}

pub(crate) enum IpmOutcome {
    Converged,
    /// Iteration cap reached but residuals within the loose acceptance band.
    Loose,
    Stalled(String),
}

pub(crate) struct IpmResult {
    pub x: Vec<Rm>,
    pub u: Rv,
    pub y: Rv,
    pub z: Vec<Rm>,
    pub iterations: usize,
    pub pobj: f64,
    pub outcome: IpmOutcome,
}

impl IpmResult {
    /// Wraps a bare primal point (used when a phase-1 point is returned as
    /// the answer to a feasibility-sense program). Pairs it with the
    /// trivially dual-feasible (y, Z) = (0, C).
    pub fn from_primal_only(form: &RealForm, x: Vec<Rm>) -> IpmResult {
        let m = form.b.len();
        let p = form.cf.len();
        let z = form.c.clone();
        IpmResult {
            x,
            u: Rv::zeros(p),
            y: Rv::zeros(m),
            z,
            iterations: 0,
            pobj: 0.0,
            outcome: IpmOutcome::Converged,
        }
    }
}

fn sym(m: &Rm) -> Rm {
    (m + m.transpose()) * 0.5
}

fn inner(a: &Rm, b: &Rm) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Spectral `f(M)` for real symmetric `M`.
fn sym_map(m: &Rm, f: impl Fn(f64) -> f64) -> Rm {
    let eig = nalgebra::SymmetricEigen::new(sym(m));
    let q = &eig.eigenvectors;
    let d = Rm::from_diagonal(&eig.eigenvalues.map(f));
    q * d * q.transpose()
}

fn min_eig(m: &Rm) -> f64 {
    nalgebra::SymmetricEigen::new(sym(m))
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

/// Largest α ≤ cap with S + α ΔS ⪰ 0 (S ≻ 0).
fn step_to_boundary(s: &Rm, ds: &Rm, cap: f64) -> f64 {
    if s.nrows() == 0 {
        return cap;
    }
    let t = match nalgebra::Cholesky::new(s.clone()) {
        Some(ch) => {
            let l = ch.l();
            let t1 = l
                .solve_lower_triangular(ds)
                .unwrap_or_else(|| ds.clone());
            l.solve_lower_triangular(&t1.transpose())
                .unwrap_or_else(|| t1.transpose())
        }
        None => {
            // S numerically lost definiteness; fall back to the spectral map.
            let s_inv_half = sym_map(s, |l| 1.0 / l.max(1e-300).sqrt());
            &s_inv_half * ds * &s_inv_half
        }
    };
    let lmin = min_eig(&t);
    if lmin >= -1e-14 {
        cap
    } else {
        cap.min(-1.0 / lmin)
    }
}

struct Scaling {
    w: Vec<Rm>,
    zinv: Vec<Rm>,
}

/// NT scaling per block: with X = LL' and G = L'ZL, W = L G^{−1/2} L'
/// satisfies W Z W = X and is symmetric positive definite.
fn nt_scaling(x: &[Rm], z: &[Rm]) -> Option<Scaling> {
    let mut w = Vec::with_capacity(x.len());
    let mut zinv = Vec::with_capacity(x.len());
    for (xb, zb) in x.iter().zip(z) {
        if xb.nrows() == 0 {
            w.push(Rm::zeros(0, 0));
            zinv.push(Rm::zeros(0, 0));
            continue;
        }
        let chx = nalgebra::Cholesky::new(xb.clone())?;
        let chz = nalgebra::Cholesky::new(zb.clone())?;
        let l = chx.l();
        let g = sym(&(l.transpose() * zb * &l));
        let g_inv_half = sym_map(&g, |lam| 1.0 / lam.max(1e-300).sqrt());
        w.push(sym(&(&l * g_inv_half * l.transpose())));
        zinv.push(chz.inverse());
    }
    Some(Scaling { w, zinv })
}

struct Residuals {
    rp: Rv,
    rd: Vec<Rm>,
    rf: Rv,
    rel_p: f64,
    rel_d: f64,
    rel_gap: f64,
    pobj: f64,
    mu: f64,
}

fn residuals(form: &RealForm, x: &[Rm], u: &Rv, y: &Rv, z: &[Rm], ntot: usize) -> Residuals {
    let m = form.b.len();
    let mut rp = Rv::zeros(m);
    for i in 0..m {
        let mut lhs = 0.0;
        for (a, xb) in form.a[i].iter().zip(x) {
            lhs += inner(a, xb);
        }
        lhs += form.bf.row(i).transpose().dot(u);
        rp[i] = form.b[i] - lhs;
    }
    let mut rd = Vec::with_capacity(form.blocks.len());
    let mut rd_norm2 = 0.0;
    let mut c_norm2 = 0.0;
    for b in 0..form.blocks.len() {
        let mut acc = form.c[b].clone() - &z[b];
        for i in 0..m {
            if y[i] != 0.0 {
                acc -= form.a[i][b].scale(y[i]);
            }
        }
        rd_norm2 += acc.norm_squared();
        c_norm2 += form.c[b].norm_squared();
        rd.push(acc);
    }
    let rf = &form.cf - form.bf.transpose() * y;
    c_norm2 += form.cf.norm_squared();

    let mut pobj = form.cf.dot(u);
    for (cb, xb) in form.c.iter().zip(x) {
        pobj += inner(cb, xb);
    }
    let dobj = form.b.dot(y);
    let mu = if ntot == 0 {
        0.0
    } else {
        x.iter().zip(z).map(|(xb, zb)| inner(xb, zb)).sum::<f64>() / ntot as f64
    };
    Residuals {
        rel_p: rp.norm() / (1.0 + form.b.norm()),
        rel_d: (rd_norm2 + rf.norm_squared()).sqrt() / (1.0 + c_norm2.sqrt()),
        rel_gap: (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs()),
        rp,
        rd,
        rf,
        pobj,
        mu,
    }
}

/// One linear solve of the bordered Schur system for a given centering
/// right-hand side. Returns (Δx, Δu, Δy, Δz).
#[allow(clippy::too_many_arguments)]
fn direction(
    form: &RealForm,
    scal: &Scaling,
    kkt: &nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    wrdw: &[Rm],
    res: &Residuals,
    rc: &[Rm],
) -> Option<(Vec<Rm>, Rv, Rv, Vec<Rm>)> {
    let m = form.b.len();
    let p = form.cf.len();
    let nb = form.blocks.len();
    let mut rhs = Rv::zeros(m + p);
    for i in 0..m {
        let mut h = res.rp[i];
        for b in 0..nb {
            h -= inner(&form.a[i][b], &(rc[b].clone() - &wrdw[b]));
        }
        rhs[i] = h;
    }
    for j in 0..p {
        rhs[m + j] = res.rf[j];
    }
    let sol = kkt.solve(&rhs)?;
    let dy = sol.rows(0, m).into_owned();
    let du = sol.rows(m, p).into_owned();
    let mut dz = Vec::with_capacity(nb);
    let mut dx = Vec::with_capacity(nb);
    for b in 0..nb {
        let mut z = res.rd[b].clone();
        for i in 0..m {
            if dy[i] != 0.0 {
                z -= form.a[i][b].scale(dy[i]);
            }
        }
        let xb = rc[b].clone() - sym(&(&scal.w[b] * &z * &scal.w[b]));
        dz.push(z);
        dx.push(xb);
    }
    Some((dx, du, dy, dz))
}

pub(crate) fn run(form: &RealForm, opts: &SolverOptions) -> IpmResult {
    let m = form.b.len();
    let p = form.cf.len();
    let nb = form.blocks.len();
    let ntot: usize = form.blocks.iter().sum();

    let mut x: Vec<Rm> = form.blocks.iter().map(|&d| Rm::identity(d, d)).collect();
    let mut z: Vec<Rm> = form.blocks.iter().map(|&d| Rm::identity(d, d)).collect();
    let mut y = Rv::zeros(m);
    let mut u = Rv::zeros(p);

    let mut best: Option<(f64, Vec<Rm>, Rv, Rv, Vec<Rm>)> = None;
    let gamma = 0.98;

    let trace = std::env::var_os("FREESPEC_IPM_TRACE").is_some();

    for it in 0..opts.max_iter {
        let res = residuals(form, &x, &u, &y, &z, ntot);
        if trace {
            eprintln!(
                "ipm it {it:3} pobj {:+.6e} mu {:.3e} rel_p {:.3e} rel_d {:.3e} rel_gap {:.3e}",
                res.pobj, res.mu, res.rel_p, res.rel_d, res.rel_gap
            );
        }
        let score = res.rel_p + res.rel_d + res.rel_gap;
        if best.as_ref().map_or(true, |(s, ..)| score < *s) {
            best = Some((score, x.clone(), u.clone(), y.clone(), z.clone()));
        }
        if res.rel_p <= opts.tol_feas && res.rel_d <= opts.tol_feas && res.rel_gap <= opts.tol_gap
        {
            return IpmResult {
                x,
                u,
                y,
                z,
                iterations: it,
                pobj: res.pobj,
                outcome: IpmOutcome::Converged,
            };
        }
        if res.pobj.abs() > 1e13 || x.iter().any(|xb| xb.norm() > 1e13) {
            return stalled(form, opts, best, it,"iterates diverged (likely unbounded)");
        }

        let scal = match nt_scaling(&x, &z) {
            Some(s) => s,
            None => return stalled(form, opts, best, it,"iterate left the cone"),
        };

        // Schur complement and bordered factorization.
        let mut kkt_mat = Rm::zeros(m + p, m + p);
        let mut wa: Vec<Vec<Rm>> = Vec::with_capacity(m);
        for i in 0..m {
            let row: Vec<Rm> = (0..nb)
                .map(|b| sym(&(&scal.w[b] * &form.a[i][b] * &scal.w[b])))
                .collect();
            wa.push(row);
        }
        for i in 0..m {
            for j in i..m {
                let mut v = 0.0;
                for b in 0..nb {
                    v += inner(&form.a[i][b], &wa[j][b]);
                }
                kkt_mat[(i, j)] = v;
                kkt_mat[(j, i)] = v;
            }
        }
        for i in 0..m {
            for j in 0..p {
                kkt_mat[(i, m + j)] = form.bf[(i, j)];
                kkt_mat[(m + j, i)] = form.bf[(i, j)];
            }
        }
        // Tiny symmetric regularization keeps the factorization alive on
        // nearly dependent rows without visibly perturbing the solution.
        let reg = 1e-12 * (1.0 + kkt_mat.norm() / (m + p).max(1) as f64);
        for i in 0..m {
            kkt_mat[(i, i)] += reg;
        }
        for j in 0..p {
            kkt_mat[(m + j, m + j)] -= reg;
        }
        let kkt = kkt_mat.lu();

        let wrdw: Vec<Rm> = (0..nb)
            .map(|b| sym(&(&scal.w[b] * &res.rd[b] * &scal.w[b])))
            .collect();

        // Predictor: pure Newton step toward μ = 0.
        let rc_aff: Vec<Rm> = x.iter().map(|xb| -xb.clone()).collect();
        let aff = match direction(form, &scal, &kkt, &wrdw, &res, &rc_aff) {
            Some(d) => d,
            None => return stalled(form, opts, best, it,"singular Schur system"),
        };
        let (adx, _adu, _ady, adz) = &aff;
        let mut a_aff = 1.0_f64;
        for b in 0..nb {
            a_aff = a_aff.min(step_to_boundary(&x[b], &adx[b], 1.0));
            a_aff = a_aff.min(step_to_boundary(&z[b], &adz[b], 1.0));
        }
        let mut mu_aff = 0.0;
        for b in 0..nb {
            let xa = &x[b] + adx[b].scale(a_aff);
            let za = &z[b] + adz[b].scale(a_aff);
            mu_aff += inner(&xa, &za);
        }
        mu_aff = (mu_aff / ntot.max(1) as f64).max(0.0);
        let sigma = if res.mu > 0.0 {
            ((mu_aff / res.mu).powi(3)).clamp(1e-8, 0.999)
        } else {
            0.1
        };

        // Corrector with adaptive centering.
        let rc: Vec<Rm> = (0..nb)
            .map(|b| scal.zinv[b].scale(sigma * res.mu) - &x[b])
            .collect();
        let (dx, du, dy, dz) = match direction(form, &scal, &kkt, &wrdw, &res, &rc) {
            Some(d) => d,
            None => return stalled(form, opts, best, it,"singular Schur system"),
        };
        let mut ap = 1.0_f64 / gamma;
        let mut ad = 1.0_f64 / gamma;
        for b in 0..nb {
            ap = ap.min(step_to_boundary(&x[b], &dx[b], 1.0 / gamma));
            ad = ad.min(step_to_boundary(&z[b], &dz[b], 1.0 / gamma));
        }
        let mut ap = (gamma * ap).min(1.0);
        let mut ad = (gamma * ad).min(1.0);
        // While either side is still infeasible the two step lengths are
        // coupled. A Newton step shrinks each residual by exactly (1 − α),
        // so equal steps keep complementarity from outrunning feasibility;
        // letting them differ is safe only once both residuals are
        // negligible, where it buys the usual asymmetric speedup.
        if res.rel_p > opts.tol_feas || res.rel_d > opts.tol_feas {
            let a = ap.min(ad);
            ap = a;
            ad = a;
        }
        if ap < 1e-10 && ad < 1e-10 {
            return stalled(form, opts, best, it,"step lengths collapsed");
        }
        for b in 0..nb {
            x[b] = sym(&(&x[b] + dx[b].scale(ap)));
            z[b] = sym(&(&z[b] + dz[b].scale(ad)));
        }
        u += du.scale(ap);
        y += dy.scale(ad);
    }

    stalled(form, opts, best, opts.max_iter, "iteration cap reached")
}

/// Exit path for a run that cannot reach the strict tolerances. The best
/// iterate seen so far is still accepted (as `Loose`) when it meets the
/// relaxed tolerances, which covers the common case of a run that gets
/// within a digit of the target and then hits the floating-point floor.
fn stalled(
    form: &RealForm,
    opts: &SolverOptions,
    best: Option<(f64, Vec<Rm>, Rv, Rv, Vec<Rm>)>,
    it: usize,
    why: &str,
) -> IpmResult {
    let ntot: usize = form.blocks.iter().sum();
    let (x, u, y, z) = match best {
        Some((_, x, u, y, z)) => (x, u, y, z),
        None => (
            form.blocks.iter().map(|&d| Rm::identity(d, d)).collect(),
            Rv::zeros(form.cf.len()),
            Rv::zeros(form.b.len()),
            form.blocks.iter().map(|&d| Rm::identity(d, d)).collect(),
        ),
    };
    let res = residuals(form, &x, &u, &y, &z, ntot);
    let loose = opts.accept_feas;
    let outcome =
        if res.rel_p <= loose && res.rel_d <= loose && res.rel_gap <= loose.sqrt().min(1e-3) {
            IpmOutcome::Loose
        } else {
            IpmOutcome::Stalled(why.to_string())
        };
    IpmResult {
        x,
        u,
        y,
        z,
        iterations: it,
        pobj: res.pobj,
        outcome,
    }
}
