//! Structured construction of conic programs.
//!
//! Higher layers express problems with named PSD matrix variables, free
//! scalar variables, complex-linear equality rows, and affine LMIs
//! `A₀ + Σ x_j A_j ⪰ 0`. The builder lowers all of that to the flat
//! [`ConicProgram`] form: an LMI becomes a PSD slack block tied entrywise
//! to the affine expression (d² real rows for a d×d pencil), and a complex
//! equality becomes a pair of real rows with hermitian coefficient
//! matrices.

use num_complex::Complex64;

use crate::la::{self, CMat};

use super::{ConicProgram, Constraint, Sense};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockId(pub(crate) usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeId(pub(crate) usize);

#[derive(Debug, Clone)]
struct SparseRow {
    blocks: Vec<(usize, CMat)>,
    frees: Vec<(usize, f64)>,
    rhs: f64,
}

/// Finished lowering: the flat program plus the name table needed to pull
/// named pieces back out of a solution.
pub struct Lowered {
    pub program: ConicProgram,
    block_names: Vec<String>,
    free_names: Vec<String>,
}

impl Lowered {
    pub fn block_solution(&self, sol: &super::ConicSolution, id: BlockId) -> CMat {
        sol.primal[id.0].clone()
    }

    pub fn free_value(&self, sol: &super::ConicSolution, id: FreeId) -> f64 {
        sol.free_values[id.0]
    }

    pub fn block_name(&self, id: BlockId) -> &str {
        &self.block_names[id.0]
    }

    pub fn free_name(&self, id: FreeId) -> &str {
        &self.free_names[id.0]
    }
}

pub struct ProgramBuilder {
    sense: Sense,
    block_dims: Vec<usize>,
    block_names: Vec<String>,
    free_names: Vec<String>,
    obj_blocks: Vec<CMat>,
    obj_free: Vec<f64>,
    rows: Vec<SparseRow>,
    lmi_count: usize,
}

impl ProgramBuilder {
    pub fn new(sense: Sense) -> Self {
        ProgramBuilder {
            sense,
            block_dims: Vec::new(),
            block_names: Vec::new(),
            free_names: Vec::new(),
            obj_blocks: Vec::new(),
            obj_free: Vec::new(),
            rows: Vec::new(),
            lmi_count: 0,
        }
    }

    /// Declares a PSD matrix variable of hermitian size d×d.
    pub fn psd_block(&mut self, name: &str, d: usize) -> BlockId {
        self.block_dims.push(d);
        self.block_names.push(name.to_string());
        self.obj_blocks.push(la::cmat_zero(d, d));
        BlockId(self.block_dims.len() - 1)
    }

    /// Declares a free real scalar variable.
    pub fn free_var(&mut self, name: &str) -> FreeId {
        self.free_names.push(name.to_string());
        self.obj_free.push(0.0);
        FreeId(self.free_names.len() - 1)
    }

    /// Objective contribution `⟨C, X_id⟩` (C hermitian).
    pub fn set_block_objective(&mut self, id: BlockId, c: CMat) {
        self.obj_blocks[id.0] = c;
    }

    pub fn set_free_objective(&mut self, id: FreeId, c: f64) {
        self.obj_free[id.0] = c;
    }

    /// Adds one real equality row `Σ ⟨mat, X⟩ + Σ c·u = rhs`. Coefficient
    /// matrices must be hermitian.
    pub fn add_row(
        &mut self,
        blocks: Vec<(BlockId, CMat)>,
        frees: Vec<(FreeId, f64)>,
        rhs: f64,
    ) {
        self.rows.push(SparseRow {
            blocks: blocks.into_iter().map(|(b, m)| (b.0, m)).collect(),
            frees: frees.into_iter().map(|(f, c)| (f.0, c)).collect(),
            rhs,
        });
    }

    /// Adds the complex equality `Σ tr(N·X) + Σ c·u = rhs` as two real rows
    /// (real and imaginary part). `N` and `c` may be arbitrary complex; the
    /// hermitian coefficient matrices of the two rows are `(N + N*)/2` and
    /// `(N − N*)/(2i)`.
    pub fn add_complex_row(
        &mut self,
        blocks: Vec<(BlockId, CMat)>,
        frees: Vec<(FreeId, Complex64)>,
        rhs: Complex64,
    ) {
        let re_blocks: Vec<(usize, CMat)> = blocks
            .iter()
            .map(|(b, n)| (b.0, (n + n.adjoint()).scale(0.5)))
            .collect();
        let im_blocks: Vec<(usize, CMat)> = blocks
            .iter()
            .map(|(b, n)| {
                let diff = n - n.adjoint();
                (b.0, diff * Complex64::new(0.0, -0.5))
            })
            .collect();
        let re_frees: Vec<(usize, f64)> =
            frees.iter().map(|(f, c)| (f.0, c.re)).collect();
        let im_frees: Vec<(usize, f64)> =
            frees.iter().map(|(f, c)| (f.0, c.im)).collect();
        self.rows.push(SparseRow {
            blocks: re_blocks,
            frees: re_frees,
            rhs: rhs.re,
        });
        self.rows.push(SparseRow {
            blocks: im_blocks,
            frees: im_frees,
            rhs: rhs.im,
        });
    }

    /// Lowers the LMI `mats[0] + Σ_j x_{vars[j]} mats[j+1] ⪰ 0` by a PSD
    /// slack block S tied entrywise to the affine expression (one real row
    /// per diagonal entry, two per off-diagonal pair: d² rows in total).
    /// Returns the slack block id.
    pub fn add_lmi(&mut self, mats: &[CMat], vars: &[FreeId]) -> BlockId {
        assert_eq!(mats.len(), vars.len() + 1, "one matrix per variable plus A0");
        let d = mats[0].nrows();
        self.lmi_count += 1;
        let slack = self.psd_block(&format!("lmi{}", self.lmi_count), d);
        for p in 0..d {
            for q in p..d {
                if p == q {
                    // ⟨E_pp, S⟩ − Σ_j (A_j)_pp x_j = (A0)_pp
                    let mut e = la::cmat_zero(d, d);
                    e[(p, p)] = la::ONE_C;
                    let frees: Vec<(FreeId, f64)> = vars
                        .iter()
                        .enumerate()
                        .map(|(j, &v)| (v, -mats[j + 1][(p, p)].re))
                        .collect();
                    self.add_row(vec![(slack, e)], frees, mats[0][(p, p)].re);
                } else {
                    // Re: ⟨(E_qp + E_pq)/2, S⟩ = Re S_pq
                    let mut h = la::cmat_zero(d, d);
                    h[(q, p)] = Complex64::new(0.5, 0.0);
                    h[(p, q)] = Complex64::new(0.5, 0.0);
                    let frees: Vec<(FreeId, f64)> = vars
                        .iter()
                        .enumerate()
                        .map(|(j, &v)| (v, -mats[j + 1][(p, q)].re))
                        .collect();
                    self.add_row(vec![(slack, h)], frees, mats[0][(p, q)].re);
                    // Im: ⟨(−iE_qp + iE_pq)/2, S⟩ = Im S_pq
                    let mut g = la::cmat_zero(d, d);
                    g[(q, p)] = Complex64::new(0.0, -0.5);
                    g[(p, q)] = Complex64::new(0.0, 0.5);
                    let frees: Vec<(FreeId, f64)> = vars
                        .iter()
                        .enumerate()
                        .map(|(j, &v)| (v, -mats[j + 1][(p, q)].im))
                        .collect();
                    self.add_row(vec![(slack, g)], frees, mats[0][(p, q)].im);
                }
            }
        }
        slack
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn finish(self) -> Lowered {
        let nfree = self.free_names.len();
        let constraints: Vec<Constraint> = self
            .rows
            .into_iter()
            .map(|r| {
                let mut mats: Vec<CMat> = self
                    .block_dims
                    .iter()
                    .map(|&d| la::cmat_zero(d, d))
                    .collect();
                for (b, m) in r.blocks {
                    mats[b] += m;
                }
                let mut free_coeffs = vec![0.0; nfree];
                for (f, c) in r.frees {
                    free_coeffs[f] += c;
                }
                Constraint {
                    mats,
                    free_coeffs,
                    rhs: r.rhs,
                }
            })
            .collect();
        let program = ConicProgram {
            blocks: self.block_dims,
            objective: self.obj_blocks,
            free_objective: self.obj_free,
            constraints,
            sense: self.sense,
        };
        Lowered {
            program,
            block_names: self.block_names,
            free_names: self.free_names,
        }
    }
}
