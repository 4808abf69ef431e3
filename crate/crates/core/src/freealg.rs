//! Free *-algebra over complex matrix coefficients: words in noncommuting
//! variables, matrix-valued polynomials, and evaluation on tuples of
//! hermitian matrices.
//!
//! Conventions, fixed once for the whole crate:
//! * variable indices are 1-based; the empty word is the unit;
//! * word order is graded-lexicographic (length first, then letters);
//! * evaluation uses the Kronecker order coefficient ⊗ word value;
//! * the zero polynomial has degree −1.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::la::{self, CMat};

/// A word in the free monoid on variables `x1..xn`; letters are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn letter(j: usize) -> Self {
        assert!(j >= 1, "letters are 1-based");
        Word(vec![j])
    }

    pub fn from_letters(letters: Vec<usize>) -> Result<Self> {
        if letters.iter().any(|&l| l == 0) {
            return Err(Error::invalid("word letters are 1-based; got 0"));
        }
        Ok(Word(letters))
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_letter(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// The involution on words: reversal.
    pub fn reversed(&self) -> Word {
        let mut v = self.0.clone();
        v.reverse();
        Word(v)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Splits into (first `k` letters, rest).
    pub fn split_at(&self, k: usize) -> (Word, Word) {
        let (a, b) = self.0.split_at(k);
        (Word(a.to_vec()), Word(b.to_vec()))
    }

    pub fn is_palindrome(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    /// Graded-lexicographic order: compare by length, then letterwise.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == l {
                run += 1;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if run == 1 {
                write!(f, "x{l}")?;
            } else {
                write!(f, "x{l}^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

/// Tuple of hermitian matrices of a common size `k` (the level).
#[derive(Debug, Clone)]
pub struct HermTuple {
    n: usize,
    k: usize,
    entries: Vec<CMat>,
}

impl HermTuple {
    /// Validates sizes and hermitianness within `tol` (relative).
    pub fn new(entries: Vec<CMat>, tol: f64) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("a tuple needs at least one entry"));
        }
        let k = entries[0].nrows();
        for (j, m) in entries.iter().enumerate() {
            if m.nrows() != k || m.ncols() != k {
                return Err(Error::dim(format!(
                    "tuple entry {} is {}x{}, expected {}x{}",
                    j + 1,
                    m.nrows(),
                    m.ncols(),
                    k,
                    k
                )));
            }
            if !la::is_hermitian(m, tol) {
                return Err(Error::NotHermitian(format!(
                    "tuple entry {} deviates by {:.3e}",
                    j + 1,
                    la::herm_defect(m)
                )));
            }
        }
        Ok(HermTuple {
            n: entries.len(),
            k,
            entries,
        })
    }

    /// Zero tuple of `n` variables at level `k`.
    pub fn zero(n: usize, k: usize) -> Self {
        HermTuple {
            n,
            k,
            entries: vec![la::cmat_zero(k, k); n],
        }
    }

    /// Level-1 tuple from real scalars.
    pub fn from_reals(xs: &[f64]) -> Self {
        let entries = xs
            .iter()
            .map(|&x| la::cmat_scalar(Complex64::new(x, 0.0)))
            .collect();
        HermTuple {
            n: xs.len(),
            k: 1,
            entries,
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> usize {
        self.k
    }

    /// Entry for the 1-based variable index `j`.
    pub fn entry(&self, j: usize) -> &CMat {
        &self.entries[j - 1]
    }

    pub fn entries(&self) -> &[CMat] {
        &self.entries
    }

    /// Evaluates a word: the product `X_{i1}···X_{im}` (identity for the unit).
    pub fn word_value(&self, w: &Word) -> Result<CMat> {
        let mut acc = la::cmat_eye(self.k);
        for &l in w.letters() {
            if l > self.n {
                return Err(Error::Variables(format!(
                    "word uses x{} but the tuple has {} entries",
                    l, self.n
                )));
            }
            acc = acc * &self.entries[l - 1];
        }
        Ok(acc)
    }

    /// Scales every entry by a real factor.
    pub fn scaled(&self, t: f64) -> Self {
        HermTuple {
            n: self.n,
            k: self.k,
            entries: self.entries.iter().map(|m| m.scale(t)).collect(),
        }
    }
}

/// Matrix-valued noncommutative polynomial: a finite sum of words with
/// complex matrix coefficients of a common shape. Square in every public
/// pipeline role; rectangular shapes appear inside certificates.
#[derive(Debug, Clone, PartialEq)]
pub struct MatPoly {
    nvars: usize,
    nrows: usize,
    ncols: usize,
    terms: BTreeMap<Word, CMat>,
}

impl MatPoly {
    pub fn zero(nvars: usize, d: usize) -> Self {
        Self::zero_rect(nvars, d, d)
    }

    pub fn zero_rect(nvars: usize, nrows: usize, ncols: usize) -> Self {
        MatPoly {
            nvars,
            nrows,
            ncols,
            terms: BTreeMap::new(),
        }
    }

    /// The unit polynomial: identity coefficient on the empty word.
    pub fn one(nvars: usize, d: usize) -> Self {
        let mut p = Self::zero(nvars, d);
        p.add_term(Word::unit(), la::cmat_eye(d));
        p
    }

    pub fn scalar(nvars: usize, z: Complex64) -> Self {
        let mut p = Self::zero(nvars, 1);
        p.add_term(Word::unit(), la::cmat_scalar(z));
        p
    }

    /// The scalar variable `x_j` as a 1×1 polynomial.
    pub fn variable(nvars: usize, j: usize) -> Result<Self> {
        if j == 0 || j > nvars {
            return Err(Error::Variables(format!(
                "variable index {j} outside 1..{nvars}"
            )));
        }
        let mut p = Self::zero(nvars, 1);
        p.add_term(Word::letter(j), la::cmat_scalar(la::ONE_C));
        Ok(p)
    }

    pub fn constant(nvars: usize, m: CMat) -> Self {
        let (r, c) = m.shape();
        let mut p = Self::zero_rect(nvars, r, c);
        p.add_term(Word::unit(), m);
        p
    }

    /// Single term `coeff·word`.
    pub fn term(nvars: usize, w: Word, coeff: CMat) -> Result<Self> {
        if w.max_letter() > nvars {
            return Err(Error::Variables(format!(
                "word uses x{} but nvars = {}",
                w.max_letter(),
                nvars
            )));
        }
        let (r, c) = coeff.shape();
        let mut p = Self::zero_rect(nvars, r, c);
        p.add_term(w, coeff);
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Coefficient size for a square polynomial.
    pub fn size(&self) -> Result<usize> {
        if self.nrows != self.ncols {
            return Err(Error::dim(format!(
                "polynomial is {}x{}, expected square",
                self.nrows, self.ncols
            )));
        }
        Ok(self.nrows)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &CMat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Option<&CMat> {
        self.terms.get(w)
    }

    /// Coefficient of `w`, or the zero matrix.
    pub fn coeff_or_zero(&self, w: &Word) -> CMat {
        self.terms
            .get(w)
            .cloned()
            .unwrap_or_else(|| la::cmat_zero(self.nrows, self.ncols))
    }

    fn add_term(&mut self, w: Word, coeff: CMat) {
        assert_eq!(coeff.shape(), (self.nrows, self.ncols), "coefficient shape");
        let entry = self
            .terms
            .entry(w.clone())
            .or_insert_with(|| la::cmat_zero(self.nrows, self.ncols));
        *entry += coeff;
        // Keep the support exact: drop coefficients that cancelled to zero.
        if entry.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
            self.terms.remove(&w);
        }
    }

    /// Largest word length in the support; −1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|w| w.len() as i64)
            .max()
            .unwrap_or(-1)
    }

    fn check_same_shape(&self, other: &MatPoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::Variables(format!(
                "{} vs {}",
                self.nvars, other.nvars
            )));
        }
        if (self.nrows, self.ncols) != (other.nrows, other.ncols) {
            return Err(Error::dim(format!(
                "{}x{} vs {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &MatPoly) -> Result<MatPoly> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MatPoly) -> Result<MatPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MatPoly {
        let mut out = MatPoly::zero_rect(self.nvars, self.nrows, self.ncols);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, z: Complex64) -> MatPoly {
        let mut out = MatPoly::zero_rect(self.nvars, self.nrows, self.ncols);
        if z == la::ZC {
            return out;
        }
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c * z);
        }
        out
    }

    /// Product: coefficients multiply as matrices, words concatenate.
    pub fn mul(&self, other: &MatPoly) -> Result<MatPoly> {
        if self.nvars != other.nvars {
            return Err(Error::Variables(format!(
                "{} vs {}",
                self.nvars, other.nvars
            )));
        }
        if self.ncols != other.nrows {
            return Err(Error::dim(format!(
                "inner dimensions {}x{} · {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut out = MatPoly::zero_rect(self.nvars, self.nrows, other.ncols);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        Ok(out)
    }

    /// Left multiplication by a constant matrix.
    pub fn lmul_mat(&self, m: &CMat) -> Result<MatPoly> {
        if m.ncols() != self.nrows {
            return Err(Error::dim(format!(
                "{}x{} · {}x{}",
                m.nrows(),
                m.ncols(),
                self.nrows,
                self.ncols
            )));
        }
        let mut out = MatPoly::zero_rect(self.nvars, m.nrows(), self.ncols);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), m * c);
        }
        Ok(out)
    }

    /// The involution: words reverse, coefficients conjugate-transpose.
    pub fn adjoint(&self) -> MatPoly {
        let mut out = MatPoly::zero_rect(self.nvars, self.ncols, self.nrows);
        for (w, c) in &self.terms {
            out.add_term(w.reversed(), c.adjoint());
        }
        out
    }

    /// Hermitian as a matrix polynomial: `p == p*` within `tol` per
    /// coefficient (relative to the largest coefficient norm).
    pub fn is_hermitian(&self, tol: f64) -> bool {
        if self.nrows != self.ncols {
            return false;
        }
        let scale = 1.0
            + self
                .terms
                .values()
                .map(la::fro)
                .fold(0.0_f64, f64::max);
        let diff = match self.sub(&self.adjoint()) {
            Ok(d) => d,
            Err(_) => return false,
        };
        diff.terms.values().all(|c| la::fro(c) <= tol * scale)
    }

    /// Evaluation at a hermitian tuple: `Σ_w coeff(w) ⊗ X_w`, a matrix of
    /// size `nrows·k × ncols·k`.
    pub fn evaluate(&self, x: &HermTuple) -> Result<CMat> {
        if x.nvars() < self.nvars {
            return Err(Error::Variables(format!(
                "polynomial in {} variables, tuple has {}",
                self.nvars,
                x.nvars()
            )));
        }
        let k = x.level();
        let mut acc = la::cmat_zero(self.nrows * k, self.ncols * k);
        for (w, c) in &self.terms {
            let xv = x.word_value(w)?;
            acc += la::kron(c, &xv);
        }
        Ok(acc)
    }

    /// Direct sum: block-diagonal coefficients, union of supports.
    pub fn direct_sum(&self, other: &MatPoly) -> Result<MatPoly> {
        if self.nvars != other.nvars {
            return Err(Error::Variables(format!(
                "{} vs {}",
                self.nvars, other.nvars
            )));
        }
        let (r1, c1) = (self.nrows, self.ncols);
        let (r2, c2) = (other.nrows, other.ncols);
        let mut out = MatPoly::zero_rect(self.nvars, r1 + r2, c1 + c2);
        for (w, c) in &self.terms {
            let mut big = la::cmat_zero(r1 + r2, c1 + c2);
            big.view_mut((0, 0), (r1, c1)).copy_from(c);
            out.add_term(w.clone(), big);
        }
        for (w, c) in &other.terms {
            let mut big = la::cmat_zero(r1 + r2, c1 + c2);
            big.view_mut((r1, c1), (r2, c2)).copy_from(c);
            out.add_term(w.clone(), big);
        }
        Ok(out)
    }

    /// Drops terms whose coefficient Frobenius norm is at most `eps`.
    pub fn prune(&self, eps: f64) -> MatPoly {
        let mut out = MatPoly::zero_rect(self.nvars, self.nrows, self.ncols);
        for (w, c) in &self.terms {
            if la::fro(c) > eps {
                out.add_term(w.clone(), c.clone());
            }
        }
        out
    }

    /// Re-declares the variable count (lifting only; words are unchanged).
    pub fn with_nvars(&self, nvars: usize) -> Result<MatPoly> {
        let used = self
            .terms
            .keys()
            .map(|w| w.max_letter())
            .max()
            .unwrap_or(0);
        if nvars < used {
            return Err(Error::Variables(format!(
                "cannot shrink to {nvars} variables, x{used} is used"
            )));
        }
        let mut out = self.clone();
        out.nvars = nvars;
        Ok(out)
    }

    /// Builds a matrix polynomial from a grid of scalar (1×1) polynomials.
    pub fn from_entry_grid(grid: &[Vec<MatPoly>]) -> Result<MatPoly> {
        let nrows = grid.len();
        if nrows == 0 {
            return Err(Error::invalid("empty polynomial grid"));
        }
        let ncols = grid[0].len();
        if ncols == 0 || grid.iter().any(|r| r.len() != ncols) {
            return Err(Error::invalid("ragged polynomial grid"));
        }
        let nvars = grid
            .iter()
            .flatten()
            .map(|p| p.nvars)
            .max()
            .unwrap_or(0);
        let mut out = MatPoly::zero_rect(nvars, nrows, ncols);
        for (i, row) in grid.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                if p.nrows != 1 || p.ncols != 1 {
                    return Err(Error::dim(format!(
                        "grid entry ({i},{j}) is {}x{}, expected scalar",
                        p.nrows, p.ncols
                    )));
                }
                for (w, c) in &p.terms {
                    let mut big = la::cmat_zero(nrows, ncols);
                    big[(i, j)] = c[(0, 0)];
                    out.add_term(w.clone(), big);
                }
            }
        }
        Ok(out)
    }

    /// Splits into a grid of scalar polynomials (inverse of `from_entry_grid`).
    pub fn to_entry_grid(&self) -> Vec<Vec<MatPoly>> {
        let mut grid =
            vec![vec![MatPoly::zero(self.nvars, 1); self.ncols]; self.nrows];
        for (w, c) in &self.terms {
            for i in 0..self.nrows {
                for j in 0..self.ncols {
                    let z = c[(i, j)];
                    if z != la::ZC {
                        grid[i][j].add_term(w.clone(), la::cmat_scalar(z));
                    }
                }
            }
        }
        grid
    }

    /// Largest coefficient Frobenius norm.
    pub fn coeff_norm(&self) -> f64 {
        self.terms.values().map(la::fro).fold(0.0_f64, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn var(n: usize, j: usize) -> MatPoly {
        MatPoly::variable(n, j).unwrap()
    }

    #[test]
    fn word_order_is_graded_lex() {
        let u = Word::unit();
        let x1 = Word::letter(1);
        let x2 = Word::letter(2);
        let x1x2 = x1.concat(&x2);
        let x2x1 = x2.concat(&x1);
        let mut v = vec![x2x1.clone(), x1x2.clone(), x2.clone(), u.clone(), x1.clone()];
        v.sort();
        assert_eq!(v, vec![u, x1, x2, x1x2, x2x1]);
    }

    #[test]
    fn mul_concatenates_words() {
        // x1 · x2 = x1x2 with coefficient 1.
        let p = var(2, 1).mul(&var(2, 2)).unwrap();
        assert_eq!(p.num_terms(), 1);
        let w = Word::from_letters(vec![1, 2]).unwrap();
        assert_eq!(p.coeff(&w).unwrap()[(0, 0)], c(1.0));
    }

    #[test]
    fn mul_difference_of_squares_stays_noncommutative() {
        // (1 + x1)(1 − x1) = 1 − x1², and x1x2 ≠ x2x1 keeps separate.
        let one = MatPoly::one(1, 1);
        let x1 = var(1, 1);
        let p = one.add(&x1).unwrap().mul(&one.sub(&x1).unwrap()).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coeff(&Word::unit()).unwrap()[(0, 0)], c(1.0));
        let sq = Word::from_letters(vec![1, 1]).unwrap();
        assert_eq!(p.coeff(&sq).unwrap()[(0, 0)], c(-1.0));

        let q = var(2, 1).mul(&var(2, 2)).unwrap();
        let r = var(2, 2).mul(&var(2, 1)).unwrap();
        assert!(q.sub(&r).unwrap().num_terms() == 2);
    }

    #[test]
    fn mul_by_unit_is_identity() {
        let p = var(2, 1)
            .mul(&var(2, 2))
            .unwrap()
            .add(&MatPoly::scalar(2, c(3.0)))
            .unwrap();
        let one = MatPoly::one(2, 1);
        assert_eq!(p.mul(&one).unwrap(), p);
        assert_eq!(one.mul(&p).unwrap(), p);
    }

    #[test]
    fn adjoint_reverses_words_and_conjugates() {
        // (2i·x1x2)* = −2i·x2x1
        let w = Word::from_letters(vec![1, 2]).unwrap();
        let p = MatPoly::term(2, w, la::cmat_scalar(Complex64::new(0.0, 2.0))).unwrap();
        let q = p.adjoint();
        let rw = Word::from_letters(vec![2, 1]).unwrap();
        assert_eq!(q.coeff(&rw).unwrap()[(0, 0)], Complex64::new(0.0, -2.0));
        // involution
        assert_eq!(q.adjoint(), p);
    }

    #[test]
    fn adjoint_is_conjugate_linear_and_antimultiplicative() {
        let z = Complex64::new(1.5, -0.5);
        let p = var(2, 1).scale(z);
        assert_eq!(p.adjoint(), var(2, 1).scale(z.conj()));
        let a = var(2, 1);
        let b = var(2, 2);
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.adjoint(), b.adjoint().mul(&a.adjoint()).unwrap());
    }

    #[test]
    fn hermitian_pencil_is_adjoint_fixed() {
        // 1 + x1 with hermitian coefficients is a fixed point.
        let p = MatPoly::one(1, 1).add(&var(1, 1)).unwrap();
        assert_eq!(p.adjoint(), p);
        assert!(p.is_hermitian(1e-12));
    }

    #[test]
    fn degree_examples() {
        let x1 = var(2, 1);
        let x2 = var(2, 2);
        let p = x1.mul(&x2).unwrap().mul(&x1).unwrap(); // x1x2x1
        assert_eq!(p.degree(), 3);
        assert_eq!(MatPoly::scalar(2, c(4.0)).degree(), 0);
        assert_eq!(MatPoly::zero(2, 1).degree(), -1);
        // degree of a product adds
        let q = x2.mul(&x2).unwrap();
        assert_eq!(p.mul(&q).unwrap().degree(), 5);
    }

    #[test]
    fn evaluate_on_anticommuting_pair_kills_anticommutator() {
        // f = x1x2 + x2x1 vanishes on X1 = [[0,1],[1,0]], X2 = [[1,0],[0,−1]].
        let f = var(2, 1)
            .mul(&var(2, 2))
            .unwrap()
            .add(&var(2, 2).mul(&var(2, 1)).unwrap())
            .unwrap();
        let x1 = CMat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        let x2 = CMat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]);
        let x = HermTuple::new(vec![x1, x2], 1e-12).unwrap();
        let v = f.evaluate(&x).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn evaluate_at_zero_tuple_gives_constant_block() {
        let f = MatPoly::one(2, 2)
            .add(
                &MatPoly::term(
                    2,
                    Word::letter(1),
                    CMat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]),
                )
                .unwrap(),
            )
            .unwrap();
        let x = HermTuple::zero(2, 3);
        let v = f.evaluate(&x).unwrap();
        let expect = la::kron(&f.coeff_or_zero(&Word::unit()), &la::cmat_eye(3));
        assert!((v - expect).norm() < 1e-14);
    }

    #[test]
    fn evaluate_squares_diagonal() {
        // f = x1² at diag(a, b) gives diag(a², b²).
        let f = var(1, 1).mul(&var(1, 1)).unwrap();
        let x1 = CMat::from_row_slice(2, 2, &[c(2.0), c(0.0), c(0.0), c(-3.0)]);
        let x = HermTuple::new(vec![x1], 1e-12).unwrap();
        let v = f.evaluate(&x).unwrap();
        assert!((v[(0, 0)] - c(4.0)).norm() < 1e-14);
        assert!((v[(1, 1)] - c(9.0)).norm() < 1e-14);
    }

    #[test]
    fn evaluation_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10 {
            let p = random_poly(&mut rng, 2, 2, 1, 1);
            let q = random_poly(&mut rng, 2, 2, 1, 1);
            let x = HermTuple::new(
                vec![la::rand_herm(&mut rng, 2, 1.0), la::rand_herm(&mut rng, 2, 1.0)],
                1e-10,
            )
            .unwrap();
            let lhs = p.mul(&q).unwrap().evaluate(&x).unwrap();
            let rhs = p.evaluate(&x).unwrap() * q.evaluate(&x).unwrap();
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn evaluation_respects_adjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..10 {
            let p = random_poly(&mut rng, 2, 3, 2, 2);
            let x = HermTuple::new(
                vec![la::rand_herm(&mut rng, 2, 1.0), la::rand_herm(&mut rng, 2, 1.0)],
                1e-10,
            )
            .unwrap();
            let lhs = p.adjoint().evaluate(&x).unwrap();
            let rhs = p.evaluate(&x).unwrap().adjoint();
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn direct_sum_blocks() {
        // (1+x1) ⊕ (1−x1) has 2×2 coefficients diag(1,1), diag(1,−1).
        let p = MatPoly::one(1, 1).add(&var(1, 1)).unwrap();
        let q = MatPoly::one(1, 1).sub(&var(1, 1)).unwrap();
        let s = p.direct_sum(&q).unwrap();
        assert_eq!(s.nrows(), 2);
        let a0 = s.coeff_or_zero(&Word::unit());
        let a1 = s.coeff_or_zero(&Word::letter(1));
        assert!((a0 - la::cmat_eye(2)).norm() < 1e-14);
        assert_eq!(a1[(0, 0)], c(1.0));
        assert_eq!(a1[(1, 1)], c(-1.0));
        // evaluation of a direct sum is similar to the block diagonal of the
        // evaluations (equal after the canonical shuffle permutation); the
        // spectra agree, which is what the domain intersection uses.
        let x = HermTuple::new(vec![la::cmat_scalar(c(0.25))], 1e-12).unwrap();
        let v = s.evaluate(&x).unwrap();
        let vp = p.evaluate(&x).unwrap();
        let vq = q.evaluate(&x).unwrap();
        let mut both: Vec<f64> = la::herm_eigen(&v).0;
        let mut parts: Vec<f64> = la::herm_eigen(&vp)
            .0
            .into_iter()
            .chain(la::herm_eigen(&vq).0)
            .collect();
        both.sort_by(|a, b| a.partial_cmp(b).unwrap());
        parts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in both.iter().zip(parts.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn prune_drops_small_terms() {
        let p = MatPoly::scalar(1, c(1.0))
            .add(&var(1, 1).scale(c(1e-14)))
            .unwrap();
        let q = p.prune(1e-12);
        assert_eq!(q.num_terms(), 1);
    }

    #[test]
    fn degree_bound_under_ops() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for _ in 0..20 {
            let p = random_poly(&mut rng, 2, 3, 1, 1);
            let q = random_poly(&mut rng, 2, 3, 1, 1);
            let dp = p.degree();
            let dq = q.degree();
            let sum = p.add(&q).unwrap();
            assert!(sum.degree() <= dp.max(dq));
            let prod = p.mul(&q).unwrap();
            if !p.is_zero() && !q.is_zero() {
                assert!(prod.degree() <= dp + dq);
            } else {
                assert_eq!(prod.degree(), -1);
            }
        }
    }

}

#[cfg(test)]
pub(crate) fn random_poly(
    rng: &mut rand_chacha::ChaCha8Rng,
    nvars: usize,
    maxdeg: usize,
    d: usize,
    nterms_scale: usize,
) -> MatPoly {
    use rand::Rng;
    let mut p = MatPoly::zero(nvars, d);
    let nterms = 1 + rng.gen_range(0..=(2 * nterms_scale + 2));
    for _ in 0..nterms {
        let len = rng.gen_range(0..=maxdeg);
        let letters: Vec<usize> = (0..len).map(|_| rng.gen_range(1..=nvars)).collect();
        let w = Word::from_letters(letters).unwrap();
        let cmat = la::rand_cmat(rng, d, d, 0.5);
        p = p.add(&MatPoly::term(nvars, w, cmat).unwrap()).unwrap();
    }
    p
}
