//! Regression suite for the conic solver: twenty small programs with
//! analytically known answers, covering optimal, infeasible, and unbounded
//! outcomes, complex data, multiple blocks, free variables, and redundant
//! or inconsistent rows.

mod common;

use common::{problems, Expect, Problem, KKT_TOL, VALUE_TOL};
use freespec::la;
use freespec::sdpsolve::{
    check_infeasibility_ray, check_unbounded_ray, solve, Certificate, SolveStatus,
};
use freespec::ToolConfig;

fn run_one(p: &Problem, cfg: &ToolConfig, failures: &mut Vec<String>) {
    let sol = match solve(&p.program, cfg) {
        Ok(s) => s,
        Err(e) => {
            failures.push(format!("{}: solver error: {e}", p.name));
            return;
        }
    };
    match p.expect {
        Expect::Value(v) => {
            if sol.status != SolveStatus::Optimal {
                failures.push(format!(
                    "{}: status {:?} ({}), expected Optimal",
                    p.name, sol.status, sol.message
                ));
                return;
            }
            if (sol.objective - v).abs() > VALUE_TOL {
                failures.push(format!(
                    "{}: objective {} differs from {v}",
                    p.name, sol.objective
                ));
            }
            if sol.primal_residual > KKT_TOL || sol.dual_residual > KKT_TOL {
                failures.push(format!(
                    "{}: KKT residuals {:.2e} / {:.2e} exceed {KKT_TOL:.0e}",
                    p.name, sol.primal_residual, sol.dual_residual
                ));
            }
            if sol.gap > VALUE_TOL {
                failures.push(format!("{}: gap {:.2e}", p.name, sol.gap));
            }
            for (b, x) in sol.primal.iter().enumerate() {
                let lam = la::min_eig_herm(x);
                if lam < -KKT_TOL {
                    failures.push(format!(
                        "{}: primal block {b} has eigenvalue {lam:.2e}",
                        p.name
                    ));
                }
            }
            for (b, z) in sol.dual_blocks.iter().enumerate() {
                let lam = la::min_eig_herm(z);
                if lam < -KKT_TOL {
                    failures.push(format!(
                        "{}: dual block {b} has eigenvalue {lam:.2e}",
                        p.name
                    ));
                }
            }
        }
        Expect::Infeasible => {
            if sol.status != SolveStatus::Infeasible {
                failures.push(format!(
                    "{}: status {:?} ({}), expected Infeasible",
                    p.name, sol.status, sol.message
                ));
                return;
            }
            let Some(Certificate::InfeasibilityRay { y }) = &sol.certificate else {
                failures.push(format!("{}: missing infeasibility certificate", p.name));
                return;
            };
            match check_infeasibility_ray(&p.program, y) {
                Ok(chk) => {
                    if chk.cone_violation > KKT_TOL
                        || chk.free_violation > KKT_TOL
                        || chk.objective < 0.5
                    {
                        failures.push(format!(
                            "{}: certificate check cone {:.2e} free {:.2e} b'y {}",
                            p.name, chk.cone_violation, chk.free_violation, chk.objective
                        ));
                    }
                }
                Err(e) => failures.push(format!("{}: certificate rejected: {e}", p.name)),
            }
        }
        Expect::Unbounded => {
            if sol.status != SolveStatus::Unbounded {
                failures.push(format!(
                    "{}: status {:?} ({}), expected Unbounded",
                    p.name, sol.status, sol.message
                ));
                return;
            }
            let Some(Certificate::UnboundedRay { blocks, free }) = &sol.certificate else {
                failures.push(format!("{}: missing unboundedness certificate", p.name));
                return;
            };
            match check_unbounded_ray(&p.program, blocks, free) {
                Ok(chk) => {
                    if chk.cone_violation > KKT_TOL
                        || chk.homogeneity_violation > KKT_TOL
                        || chk.direction > -KKT_TOL
                    {
                        failures.push(format!(
                            "{}: ray check cone {:.2e} homog {:.2e} direction {}",
                            p.name, chk.cone_violation, chk.homogeneity_violation, chk.direction
                        ));
                    }
                }
                Err(e) => failures.push(format!("{}: ray rejected: {e}", p.name)),
            }
        }
    }
}

#[test]
fn twenty_problem_suite() {
    let cfg = ToolConfig::default();
    let mut failures = Vec::new();
    for p in problems() {
        run_one(&p, &cfg, &mut failures);
    }
    assert!(
        failures.is_empty(),
        "{} of 20 regression problems failed:\n{}",
        failures.len(),
        failures.join("\n")
    );
}

#[test]
fn duality_holds_on_minimization() {
    // For the diagonal-pin problem the dual optimum b'y must meet the
    // primal value 3 from below.
    let cfg = ToolConfig::default();
    let p = problems().into_iter().nth(3).unwrap();
    let sol = solve(&p.program, &cfg).unwrap();
    let by: f64 = p
        .program
        .constraints
        .iter()
        .zip(&sol.dual)
        .map(|(row, &yi)| row.rhs * yi)
        .sum();
    assert!((by - 3.0).abs() <= 1e-6, "dual value {by}");
    assert!(by <= sol.objective + 1e-6);
}

#[test]
fn duplicated_row_gets_zero_dual() {
    let cfg = ToolConfig::default();
    let p = problems().into_iter().nth(17).unwrap();
    let sol = solve(&p.program, &cfg).unwrap();
    assert_eq!(sol.status, SolveStatus::Optimal);
    assert_eq!(sol.dual.len(), 3);
    // One of the two copies of the X11 pin carries the whole multiplier and
    // the other is reported 0; their sum is the effective dual.
    let eff = sol.dual[0] + sol.dual[1];
    assert!((eff - 1.0).abs() <= 1e-5, "effective dual {eff}");
    assert!(sol.dual[0] == 0.0 || sol.dual[1] == 0.0);
}

#[test]
fn theta_c5_solution_structure() {
    // The optimizer of the theta SDP is circulant with X_ii = 1/5 and the
    // non-edge entries equal to (sqrt 5 − 1)/10, which puts the smallest
    // eigenvalue exactly at zero.
    let cfg = ToolConfig::default();
    let p = problems().into_iter().nth(8).unwrap();
    let sol = solve(&p.program, &cfg).unwrap();
    assert_eq!(sol.status, SolveStatus::Optimal);
    let x = &sol.primal[0];
    for i in 0..5 {
        assert!((x[(i, i)].re - 0.2).abs() <= 1e-5);
    }
    let offdiag = (5.0_f64.sqrt() - 1.0) / 10.0;
    for i in 0..5usize {
        let j = (i + 2) % 5;
        assert!((x[(i, j)].re - offdiag).abs() <= 1e-5);
        assert!(x[(i, j)].im.abs() <= 1e-6);
    }
}
