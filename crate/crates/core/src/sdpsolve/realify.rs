//! Real embedding of complex hermitian programs.
//!
//! A hermitian k×k block maps to a real symmetric 2k×2k block through
//! `Φ(M) = [[Re M, −Im M], [Im M, Re M]]`. Since `⟨Φ(A), Φ(X)⟩ = 2⟨A, X⟩`,
//! right-hand sides, free coefficients, and the free objective are doubled
//! so that the same dual multipliers are valid on both sides; objective
//! values map back with a factor-½ trace correction and primal blocks are
//! restored by averaging the two copies.

use nalgebra::DVector;

use crate::la::{self, CMat};

use super::ipm::{RealForm, Rm};
use super::{ConicProgram, Constraint};

fn phi(m: &CMat) -> CMat {
    let re = la::real_embed(m);
    CMat::from_fn(re.nrows(), re.ncols(), |i, j| {
        num_complex::Complex64::new(re[(i, j)], 0.0)
    })
}

/// Maps each hermitian k×k block to a real symmetric 2k×2k block via `Φ`,
/// doubling right-hand sides and free-variable data so dual multipliers are
/// preserved. Solutions map back with a factor-½ trace correction; a
/// hermitian X with nonzero imaginary part round-trips to itself through
/// `Φ` followed by the averaging restore.
pub fn realify(p: &ConicProgram) -> ConicProgram {
    let blocks: Vec<usize> = p.blocks.iter().map(|&d| 2 * d).collect();
    let objective: Vec<CMat> = p.objective.iter().map(phi).collect();
    let free_objective: Vec<f64> = p.free_objective.iter().map(|c| 2.0 * c).collect();
    let constraints: Vec<Constraint> = p
        .constraints
        .iter()
        .map(|row| Constraint {
            mats: row.mats.iter().map(phi).collect(),
            free_coeffs: row.free_coeffs.iter().map(|c| 2.0 * c).collect(),
            rhs: 2.0 * row.rhs,
        })
        .collect();
    ConicProgram {
        blocks,
        objective,
        free_objective,
        constraints,
        sense: p.sense,
    }
}

fn real_part(m: &CMat) -> Rm {
    Rm::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].re)
}

/// Realifies and extracts the plain real form the iteration works on: every
/// matrix maps through `½Φ` while right-hand sides, free coefficients, and
/// the free objective keep their values. With that scaling the objective
/// value, the constraint rows, and the dual multipliers all transfer
/// unchanged between the complex and real programs; the only readback
/// correction left is doubling the restored dual slack blocks
/// (`Z = 2·restore(Z_real)`).
pub(crate) fn to_real_form(p: &ConicProgram) -> RealForm {
    let blocks: Vec<usize> = p.blocks.iter().map(|&d| 2 * d).collect();
    let c: Vec<Rm> = p
        .objective
        .iter()
        .map(|m| real_part(&phi(m)) * 0.5)
        .collect();
    let cf = DVector::from_iterator(p.free_objective.len(), p.free_objective.iter().cloned());
    let m = p.constraints.len();
    let pfree = p.num_free();
    let mut a = Vec::with_capacity(m);
    let mut bf = Rm::zeros(m, pfree);
    let mut b = DVector::zeros(m);
    for (i, row) in p.constraints.iter().enumerate() {
        a.push(
            row.mats
                .iter()
                .map(|mm| real_part(&phi(mm)) * 0.5)
                .collect::<Vec<_>>(),
        );
        for (j, cc) in row.free_coeffs.iter().enumerate() {
            bf[(i, j)] = *cc;
        }
        b[i] = row.rhs;
    }
    RealForm {
        blocks,
        c,
        cf,
        a,
        bf,
        b,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ToolConfig;
    use crate::sdpsolve::Sense;
    use num_complex::Complex64;

    #[test]
    fn real_program_stays_structurally_real() {
        let mut p = ConicProgram::new(Sense::Min, vec![2]);
        p.objective[0] = CMat::from_fn(2, 2, |i, j| {
            Complex64::new(if i == j { 1.0 } else { 0.25 }, 0.0)
        });
        p.constraints.push(Constraint {
            mats: vec![la::cmat_eye(2)],
            free_coeffs: vec![],
            rhs: 1.0,
        });
        let r = realify(&p);
        assert_eq!(r.blocks, vec![4]);
        for v in r.objective[0].iter() {
            assert_eq!(v.im, 0.0);
        }
        // the two diagonal copies of the original appear unchanged
        assert_eq!(r.objective[0][(0, 0)].re, 1.0);
        assert_eq!(r.objective[0][(2, 2)].re, 1.0);
        assert_eq!(r.constraints[0].rhs, 2.0);
    }

    #[test]
    fn one_by_one_block_duplicates_diagonal() {
        let mut p = ConicProgram::new(Sense::Min, vec![1]);
        p.objective[0] = la::cmat_scalar(Complex64::new(3.0, 0.0));
        let r = realify(&p);
        assert_eq!(r.blocks, vec![2]);
        assert_eq!(r.objective[0][(0, 0)].re, 3.0);
        assert_eq!(r.objective[0][(1, 1)].re, 3.0);
        assert_eq!(r.objective[0][(0, 1)].re, 0.0);
    }

    #[test]
    fn hermitian_block_roundtrips() {
        let x = CMat::from_fn(2, 2, |i, j| {
            if i == j {
                Complex64::new(1.0 + i as f64, 0.0)
            } else if i < j {
                Complex64::new(0.5, -0.75)
            } else {
                Complex64::new(0.5, 0.75)
            }
        });
        let cfg = ToolConfig::default();
        assert!(la::is_hermitian(&x, cfg.tol_herm));
        let embedded = la::real_embed(&x);
        let back = la::complex_restore(&embedded);
        assert!(la::fro(&(back - x)) < 1e-14);
    }
}
