//! Shared fixtures: twenty small conic programs with analytically known
//! outcomes. Both the regression suite and the acceptance run use them.

use freespec::la::{self, CMat};
use freespec::sdpsolve::{ConicProgram, Constraint, ProgramBuilder, Sense};
use num_complex::Complex64;

pub const VALUE_TOL: f64 = 1e-6;
pub const KKT_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug)]
pub enum Expect {
    Value(f64),
    Infeasible,
    Unbounded,
}

pub struct Problem {
    pub name: &'static str,
    pub program: ConicProgram,
    pub expect: Expect,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Hermitian matrix from upper-triangle entries `(i, j, re, im)`.
fn herm(d: usize, entries: &[(usize, usize, f64, f64)]) -> CMat {
    let mut m = la::cmat_zero(d, d);
    for &(i, j, re, im) in entries {
        m[(i, j)] = c(re, im);
        if i != j {
            m[(j, i)] = c(re, -im);
        }
    }
    m
}

fn row1(mat: CMat, rhs: f64) -> Constraint {
    Constraint {
        mats: vec![mat],
        free_coeffs: vec![],
        rhs,
    }
}

/// min tr X over X ⪰ 0 scalar with X = 2.
fn p01() -> Problem {
    let mut p = ConicProgram::new(Sense::Min, vec![1]);
    p.objective[0] = la::cmat_eye(1);
    p.constraints.push(row1(la::cmat_eye(1), 2.0));
    Problem {
        name: "scalar pin",
        program: p,
        expect: Expect::Value(2.0),
    }
}

/// Feasibility with tr X = −1 on a scalar PSD variable: infeasible.
fn p02() -> Problem {
    let mut p = ConicProgram::new(Sense::Feasibility, vec![1]);
    p.constraints.push(row1(la::cmat_eye(1), -1.0));
    Problem {
        name: "negative trace",
        program: p,
        expect: Expect::Infeasible,
    }
}

/// max t with [[1, t], [t, 1]] ⪰ 0: the correlation bound t* = 1.
fn p03() -> Problem {
    let mut b = ProgramBuilder::new(Sense::Max);
    let t = b.free_var("t");
    b.set_free_objective(t, 1.0);
    b.add_lmi(
        &[la::cmat_eye(2), herm(2, &[(0, 1, 1.0, 0.0)])],
        &[t],
    );
    Problem {
        name: "correlation bound",
        program: b.finish().program,
        expect: Expect::Value(1.0),
    }
}

/// min tr X with X11 = 1, X22 = 2.
fn p04() -> Problem {
    let mut p = ConicProgram::new(Sense::Min, vec![2]);
    p.objective[0] = la::cmat_eye(2);
    p.constraints.push(row1(herm(2, &[(0, 0, 1.0, 0.0)]), 1.0));
    p.constraints.push(row1(herm(2, &[(1, 1, 1.0, 0.0)]), 2.0));
    Problem {
        name: "diagonal pins",
        program: p,
        expect: Expect::Value(3.0),
    }
}

/// max X12 + X21 with unit diagonal: 2 at the all-ones matrix.
fn p05() -> Problem {
    let mut p = ConicProgram::new(Sense::Max, vec![2]);
    p.objective[0] = herm(2, &[(0, 1, 1.0, 0.0)]);
    p.constraints.push(row1(herm(2, &[(0, 0, 1.0, 0.0)]), 1.0));
    p.constraints.push(row1(herm(2, &[(1, 1, 1.0, 0.0)]), 1.0));
    Problem {
        name: "real offdiagonal",
        program: p,
        expect: Expect::Value(2.0),
    }
}

/// Same with the antisymmetric hermitian objective [[0, −i], [i, 0]]:
/// optimum 2 forces a genuinely complex X.
fn p06() -> Problem {
    let mut p = ConicProgram::new(Sense::Max, vec![2]);
    p.objective[0] = herm(2, &[(0, 1, 0.0, -1.0)]);
    p.constraints.push(row1(herm(2, &[(0, 0, 1.0, 0.0)]), 1.0));
    p.constraints.push(row1(herm(2, &[(1, 1, 1.0, 0.0)]), 1.0));
    Problem {
        name: "complex offdiagonal",
        program: p,
        expect: Expect::Value(2.0),
    }
}

/// Ground-state energy: min ⟨diag(1,2), X⟩ over density matrices.
fn p07() -> Problem {
    let mut p = ConicProgram::new(Sense::Min, vec![2]);
    p.objective[0] = herm(2, &[(0, 0, 1.0, 0.0), (1, 1, 2.0, 0.0)]);
    p.constraints.push(row1(la::cmat_eye(2), 1.0));
    Problem {
        name: "ground state",
        program: p,
        expect: Expect::Value(1.0),
    }
}

/// min u with [[0,1],[1,0]] + u I ⪰ 0: u* = 1 is the spectral norm.
fn p08() -> Problem {
    let mut b = ProgramBuilder::new(Sense::Min);
    let u = b.free_var("u");
    b.set_free_objective(u, 1.0);
    b.add_lmi(
        &[herm(2, &[(0, 1, 1.0, 0.0)]), la::cmat_eye(2)],
        &[u],
    );
    Problem {
        name: "lmi shift",
        program: b.finish().program,
        expect: Expect::Value(1.0),
    }
}

/// Lovász theta of the 5-cycle: max ⟨J, X⟩ with tr X = 1 and X vanishing
/// on edges. The optimum is √5.
fn p09() -> Problem {
    let mut p = ConicProgram::new(Sense::Max, vec![5]);
    let mut j = la::cmat_zero(5, 5);
    j.fill(c(1.0, 0.0));
    p.objective[0] = j;
    p.constraints.push(row1(la::cmat_eye(5), 1.0));
    for e in 0..5usize {
        let (a, b) = (e, (e + 1) % 5);
        let (lo, hi) = (a.min(b), a.max(b));
        p.constraints
            .push(row1(herm(5, &[(lo, hi, 1.0, 0.0)]), 0.0));
        p.constraints
            .push(row1(herm(5, &[(lo, hi, 0.0, 1.0)]), 0.0));
    }
    Problem {
        name: "lovasz theta C5",
        program: p,
        expect: Expect::Value(5.0_f64.sqrt()),
    }
}

/// max tr X with only X22 pinned: unbounded along E11.
fn p10() -> Problem {
    let mut p = ConicProgram::new(Sense::Max, vec![2]);
    p.objective[0] = la::cmat_eye(2);
    p.constraints.push(row1(herm(2, &[(1, 1, 1.0, 0.0)]), 1.0));
    Problem {
        name: "unbounded diagonal",
        program: p,
        expect: Expect::Unbounded,
    }
}

/// Smallest eigenvalue of [[2,1],[1,2]] as max t with A − tI ⪰ 0.
fn p11() -> Problem {
    let a = herm(2, &[(0, 0, 2.0, 0.0), (0, 1, 1.0, 0.0), (1, 1, 2.0, 0.0)]);
    let mut b = ProgramBuilder::new(Sense::Max);
    let t = b.free_var("t");
    b.set_free_objective(t, 1.0);
    b.add_lmi(&[a, -la::cmat_eye(2)], &[t]);
    Problem {
        name: "smallest eigenvalue",
        program: b.finish().program,
        expect: Expect::Value(1.0),
    }
}

/// Largest eigenvalue of the same A as min t with tI − A ⪰ 0.
fn p12() -> Problem {
    let a = herm(2, &[(0, 0, 2.0, 0.0), (0, 1, 1.0, 0.0), (1, 1, 2.0, 0.0)]);
    let mut b = ProgramBuilder::new(Sense::Min);
    let t = b.free_var("t");
    b.set_free_objective(t, 1.0);
    b.add_lmi(&[-a, la::cmat_eye(2)], &[t]);
    Problem {
        name: "largest eigenvalue",
        program: b.finish().program,
        expect: Expect::Value(3.0),
    }
}

/// Two scalar blocks, min 3x + 2y with x + y = 1.
fn p13() -> Problem {
    let mut p = ConicProgram::new(Sense::Min, vec![1, 1]);
    p.objective[0] = la::cmat_eye(1).scale(3.0);
    p.objective[1] = la::cmat_eye(1).scale(2.0);
    p.constraints.push(Constraint {
        mats: vec![la::cmat_eye(1), la::cmat_eye(1)],
        free_coeffs: vec![],
        rhs: 1.0,
    });
    Problem {
        name: "two scalar blocks",
        program: p,
        expect: Expect::Value(2.0),
    }
}

/// Completion: max x with [[1, x], [x, 4]] ⪰ 0 gives x* = 2.
fn p14() -> Problem {
    let mut b = ProgramBuilder::new(Sense::Max);
    let x = b.free_var("x");
    b.set_free_objective(x, 1.0);
    b.add_lmi(
        &[
            herm(2, &[(0, 0, 1.0, 0.0), (1, 1, 4.0, 0.0)]),
            herm(2, &[(0, 1, 1.0, 0.0)]),
        ],
        &[x],
    );
    Problem {
        name: "psd completion",
        program: b.finish().program,
        expect: Expect::Value(2.0),
    }
}

/// min tr X with ⟨[[0,−i],[i,0]], X⟩ = 2: forces Im X12 = −1, optimum 2.
fn p15() -> Problem {
    let mut p = ConicProgram::new(Sense::Min, vec![2]);
    p.objective[0] = la::cmat_eye(2);
    p.constraints
        .push(row1(herm(2, &[(0, 1, 0.0, -1.0)]), 2.0));
    Problem {
        name: "complex coupling",
        program: p,
        expect: Expect::Value(2.0),
    }
}

/// min tr X with X11 = 1 and X12 + X21 = 1: optimum 1.25 at rank one.
fn p16() -> Problem {
    let mut p = ConicProgram::new(Sense::Min, vec![2]);
    p.objective[0] = la::cmat_eye(2);
    p.constraints.push(row1(herm(2, &[(0, 0, 1.0, 0.0)]), 1.0));
    p.constraints.push(row1(herm(2, &[(0, 1, 1.0, 0.0)]), 1.0));
    Problem {
        name: "pinned corner",
        program: p,
        expect: Expect::Value(1.25),
    }
}

/// 3×3: min tr X with X12 + X21 = 2. The third row and column stay zero.
fn p17() -> Problem {
    let mut p = ConicProgram::new(Sense::Min, vec![3]);
    p.objective[0] = la::cmat_eye(3);
    p.constraints.push(row1(herm(3, &[(0, 1, 1.0, 0.0)]), 2.0));
    Problem {
        name: "spread trace",
        program: p,
        expect: Expect::Value(2.0),
    }
}

/// Diagonal pins with the first row duplicated; presolve must drop one.
fn p18() -> Problem {
    let mut p = p04().program;
    p.constraints.insert(1, p.constraints[0].clone());
    Problem {
        name: "duplicated row",
        program: p,
        expect: Expect::Value(3.0),
    }
}

/// X11 = 1 and X11 = 2 simultaneously: algebraically infeasible.
fn p19() -> Problem {
    let mut p = ConicProgram::new(Sense::Min, vec![2]);
    p.objective[0] = la::cmat_eye(2);
    p.constraints.push(row1(herm(2, &[(0, 0, 1.0, 0.0)]), 1.0));
    p.constraints.push(row1(herm(2, &[(0, 0, 1.0, 0.0)]), 2.0));
    Problem {
        name: "inconsistent pins",
        program: p,
        expect: Expect::Infeasible,
    }
}

/// Schur floor: min t with [[t, 1], [1, 1]] ⪰ 0 gives t* = 1.
fn p20() -> Problem {
    let mut b = ProgramBuilder::new(Sense::Min);
    let t = b.free_var("t");
    b.set_free_objective(t, 1.0);
    b.add_lmi(
        &[
            herm(2, &[(0, 1, 1.0, 0.0), (1, 1, 1.0, 0.0)]),
            herm(2, &[(0, 0, 1.0, 0.0)]),
        ],
        &[t],
    );
    Problem {
        name: "schur floor",
        program: b.finish().program,
        expect: Expect::Value(1.0),
    }
}

pub fn problems() -> Vec<Problem> {
    vec![
        p01(),
        p02(),
        p03(),
        p04(),
        p05(),
        p06(),
        p07(),
        p08(),
        p09(),
        p10(),
        p11(),
        p12(),
        p13(),
        p14(),
        p15(),
        p16(),
        p17(),
        p18(),
        p19(),
        p20(),
    ]
}
