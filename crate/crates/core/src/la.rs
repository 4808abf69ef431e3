//! Dense complex linear algebra helpers shared across the crate: hermitian
//! eigenwork, rank decisions, the real embedding used by the solver, and
//! seeded random matrix generation.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;
pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;

pub const ZC: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE_C: Complex64 = Complex64 { re: 1.0, im: 0.0 };

pub fn cmat_zero(r: usize, c: usize) -> CMat {
    CMat::zeros(r, c)
}

pub fn cmat_eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn cmat_scalar(z: Complex64) -> CMat {
    CMat::from_element(1, 1, z)
}

pub fn fro(m: &CMat) -> f64 {
    m.norm()
}

pub fn herm_defect(m: &CMat) -> f64 {
    (m - m.adjoint()).norm()
}

/// Relative hermitian check: `‖M − M*‖_F ≤ tol·(1 + ‖M‖_F)`.
pub fn is_hermitian(m: &CMat, tol: f64) -> bool {
    m.is_square() && herm_defect(m) <= tol * (1.0 + m.norm())
}

pub fn herm_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// Eigendecomposition of a hermitian matrix, eigenvalues ascending.
/// Returns `(eigenvalues, eigenvectors)` with eigenvectors as columns.
pub fn herm_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), cmat_zero(0, 0));
    }
    let se = herm_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vecs = cmat_zero(n, n);
    for (k, &i) in order.iter().enumerate() {
        vecs.set_column(k, &se.eigenvectors.column(i));
    }
    (vals, vecs)
}

pub fn min_eig_herm(m: &CMat) -> f64 {
    let (vals, _) = herm_eigen(m);
    vals.first().copied().unwrap_or(0.0)
}

pub fn max_eig_herm(m: &CMat) -> f64 {
    let (vals, _) = herm_eigen(m);
    vals.last().copied().unwrap_or(0.0)
}

/// Applies a real function to the spectrum of a hermitian matrix.
pub fn herm_map(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (vals, vecs) = herm_eigen(m);
    let n = m.nrows();
    let mut diag = cmat_zero(n, n);
    for i in 0..n {
        diag[(i, i)] = Complex64::new(f(vals[i]), 0.0);
    }
    &vecs * diag * vecs.adjoint()
}

/// Hermitian square root; requires `M ⪰ 0` up to `tol` (small negative
/// eigenvalues are clamped to zero).
pub fn herm_sqrt(m: &CMat, tol: f64) -> Result<CMat> {
    let lo = min_eig_herm(m);
    if lo < -tol * (1.0 + m.norm()) {
        return Err(Error::invalid(format!(
            "matrix square root of an indefinite matrix (min eigenvalue {lo:.3e})"
        )));
    }
    Ok(herm_map(m, |x| x.max(0.0).sqrt()))
}

/// Hermitian inverse square root; requires `M ≻ 0` with margin `tol`.
pub fn herm_inv_sqrt(m: &CMat, tol: f64) -> Result<CMat> {
    let lo = min_eig_herm(m);
    if lo <= tol * (1.0 + m.norm()) {
        return Err(Error::SingularConstantTerm(format!(
            "min eigenvalue {lo:.3e} not positive"
        )));
    }
    Ok(herm_map(m, |x| 1.0 / x.sqrt()))
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn det(m: &CMat) -> Complex64 {
    if m.nrows() == 0 {
        return ONE_C;
    }
    m.clone().determinant()
}

/// Singular values, descending.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    let svd = m.clone().svd(false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

pub fn sigma_min(m: &CMat) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

/// Numerical rank with the crate-wide relative cutoff `tol·σ_max`.
pub fn rank(m: &CMat, tol: f64) -> usize {
    let s = singular_values(m);
    let cut = tol * s.first().copied().unwrap_or(0.0);
    s.iter().filter(|&&x| x > cut && x > 0.0).count()
}

/// Rank factorization `M = U·V` with `U: r×k`, `V: k×c`, `k = rank(M)`.
pub fn rank_factor(m: &CMat, tol: f64) -> (CMat, CMat) {
    let svd = m.clone().svd(true, true);
    let u_full = svd.u.expect("svd with u");
    let vt_full = svd.v_t.expect("svd with v_t");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].partial_cmp(&svd.singular_values[a]).unwrap());
    let smax = idx.first().map(|&i| svd.singular_values[i]).unwrap_or(0.0);
    let cut = tol * smax;
    let keep: Vec<usize> = idx
        .into_iter()
        .filter(|&i| svd.singular_values[i] > cut && svd.singular_values[i] > 0.0)
        .collect();
    let k = keep.len();
    let mut u = cmat_zero(m.nrows(), k);
    let mut v = cmat_zero(k, m.ncols());
    for (j, &i) in keep.iter().enumerate() {
        let s = Complex64::new(svd.singular_values[i], 0.0);
        u.set_column(j, &(u_full.column(i) * s));
        v.set_row(j, &vt_full.row(i));
    }
    (u, v)
}

/// Orthonormal basis of the column span of `M` (columns).
pub fn range_basis(m: &CMat, tol: f64) -> CMat {
    let svd = m.clone().svd(true, false);
    let u_full = svd.u.expect("svd with u");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].partial_cmp(&svd.singular_values[a]).unwrap());
    let smax = idx.first().map(|&i| svd.singular_values[i]).unwrap_or(0.0);
    let cut = tol * smax;
    let keep: Vec<usize> = idx
        .into_iter()
        .filter(|&i| svd.singular_values[i] > cut && svd.singular_values[i] > 0.0)
        .collect();
    let mut b = cmat_zero(m.nrows(), keep.len());
    for (j, &i) in keep.iter().enumerate() {
        b.set_column(j, &u_full.column(i));
    }
    b
}

/// Orthonormal basis of the (right) null space of `M` (columns).
pub fn null_basis(m: &CMat, tol: f64) -> CMat {
    let n = m.ncols();
    if m.nrows() == 0 {
        return cmat_eye(n);
    }
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("svd with v_t");
    // v_t has min(r,c) rows; directions absent from it are null directions.
    let smax = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    let cut = tol * smax;
    let mut cols: Vec<CVec> = Vec::new();
    for i in 0..vt.nrows() {
        if svd.singular_values[i] <= cut || svd.singular_values[i] == 0.0 {
            cols.push(vt.row(i).adjoint());
        }
    }
    if vt.nrows() < n {
        // Complete the row space of v_t to a basis to recover the remainder.
        let mut proj = cmat_eye(n);
        for i in 0..vt.nrows() {
            let v: CVec = vt.row(i).adjoint();
            proj -= &v * v.adjoint();
        }
        let extra = range_basis(&proj, 0.5);
        for j in 0..extra.ncols() {
            cols.push(extra.column(j).into_owned());
        }
    }
    let mut out = cmat_zero(n, cols.len());
    for (j, c) in cols.iter().enumerate() {
        out.set_column(j, c);
    }
    out
}

/// Completes orthonormal columns `W` (d×w) to a full unitary `[W | W⊥]`.
pub fn complete_unitary(w: &CMat) -> CMat {
    let d = w.nrows();
    let k = w.ncols();
    let mut u = cmat_zero(d, d);
    for j in 0..k {
        u.set_column(j, &w.column(j));
    }
    if k < d {
        let proj = cmat_eye(d) - w * w.adjoint();
        let comp = range_basis(&proj, 0.5);
        assert_eq!(comp.ncols(), d - k, "orthogonal complement dimension");
        for j in 0..(d - k) {
            u.set_column(k + j, &comp.column(j));
        }
    }
    u
}

/// Real embedding `Φ(M) = [[Re M, −Im M], [Im M, Re M]]` of a complex matrix.
pub fn real_embed(m: &CMat) -> RMat {
    let (r, c) = m.shape();
    let mut out = RMat::zeros(2 * r, 2 * c);
    for i in 0..r {
        for j in 0..c {
            let z = m[(i, j)];
            out[(i, j)] = z.re;
            out[(i, j + c)] = -z.im;
            out[(i + r, j)] = z.im;
            out[(i + r, j + c)] = z.re;
        }
    }
    out
}

/// Maps a real symmetric matrix of even size back to the hermitian matrix it
/// represents: the adjoint of `real_embed` up to the factor handled by the
/// solver (`proj(Φ(M)) = M` exactly).
pub fn complex_restore(y: &RMat) -> CMat {
    let n = y.nrows() / 2;
    let mut out = cmat_zero(n, n);
    for i in 0..n {
        for j in 0..n {
            let re = 0.5 * (y[(i, j)] + y[(i + n, j + n)]);
            let im = 0.5 * (y[(i + n, j)] - y[(i, j + n)]);
            out[(i, j)] = Complex64::new(re, im);
        }
    }
    out
}

pub fn rand_complex(rng: &mut impl Rng, scale: f64) -> Complex64 {
    Complex64::new(
        rng.gen_range(-1.0..1.0) * scale,
        rng.gen_range(-1.0..1.0) * scale,
    )
}

/// Random hermitian matrix with entries of magnitude about `scale`.
pub fn rand_herm(rng: &mut impl Rng, n: usize, scale: f64) -> CMat {
    let mut g = cmat_zero(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = rand_complex(rng, scale);
        }
    }
    herm_part(&g)
}

/// Random matrix with independent complex entries.
pub fn rand_cmat(rng: &mut impl Rng, r: usize, c: usize, scale: f64) -> CMat {
    let mut g = cmat_zero(r, c);
    for i in 0..r {
        for j in 0..c {
            g[(i, j)] = rand_complex(rng, scale);
        }
    }
    g
}

/// Random unitary via QR of a complex Gaussian-like matrix.
pub fn rand_unitary(rng: &mut impl Rng, n: usize) -> CMat {
    let g = rand_cmat(rng, n, n, 1.0);
    let qr = g.qr();
    qr.q()
}

/// Random isometry with `rows ≥ cols`, `V*V = I`.
pub fn rand_isometry(rng: &mut impl Rng, rows: usize, cols: usize) -> CMat {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let u = rand_unitary(rng, rows);
    let mut v = cmat_zero(rows, cols);
    for j in 0..cols {
        v.set_column(j, &u.column(j));
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hermitian_eigen_sorted_and_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = rand_herm(&mut rng, 5, 1.0);
        let (vals, vecs) = herm_eigen(&m);
        for w in vals.windows(2) {
            assert!(w[0] <= w[1] + 1e-12);
        }
        let mut diag = cmat_zero(5, 5);
        for i in 0..5 {
            diag[(i, i)] = Complex64::new(vals[i], 0.0);
        }
        let back = &vecs * diag * vecs.adjoint();
        assert!((back - m).norm() < 1e-10);
    }

    #[test]
    fn sqrt_and_inv_sqrt() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = rand_cmat(&mut rng, 4, 4, 1.0);
        let m = &g * g.adjoint() + cmat_eye(4);
        let s = herm_sqrt(&m, 1e-12).unwrap();
        assert!((&s * &s - &m).norm() < 1e-9);
        let si = herm_inv_sqrt(&m, 1e-12).unwrap();
        assert!((&si * &m * &si - cmat_eye(4)).norm() < 1e-9);
    }

    #[test]
    fn real_embed_restores() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = rand_herm(&mut rng, 3, 1.0);
        let y = real_embed(&m);
        assert!((y.transpose() - &y).norm() < 1e-14);
        let back = complex_restore(&y);
        assert!((back - &m).norm() < 1e-14);
    }

    #[test]
    fn rank_factor_multiplies_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let a = rand_cmat(&mut rng, 4, 2, 1.0);
        let b = rand_cmat(&mut rng, 2, 4, 1.0);
        let m = &a * &b;
        let (u, v) = rank_factor(&m, 1e-9);
        assert_eq!(u.ncols(), 2);
        assert!((&u * &v - &m).norm() < 1e-10);
    }

    #[test]
    fn complete_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let w = rand_isometry(&mut rng, 5, 2);
        let u = complete_unitary(&w);
        assert!((u.adjoint() * &u - cmat_eye(5)).norm() < 1e-10);
    }

    #[test]
    fn null_basis_spans_kernel() {
        let mut m = cmat_zero(2, 3);
        m[(0, 0)] = ONE_C;
        m[(1, 1)] = ONE_C;
        let n = null_basis(&m, 1e-9);
        assert_eq!(n.ncols(), 1);
        assert!((&m * &n).norm() < 1e-12);
    }
}
