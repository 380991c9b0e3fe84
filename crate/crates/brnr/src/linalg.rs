//! Exact dense linear algebra over F_p: matrices, reduced row echelon
//! form, kernels, spans, and annihilators under a bilinear pairing.
//!
//! Subspaces are always stored in canonical RREF form, so two values
//! represent the same subspace exactly when they compare equal. Every
//! space in the obstruction pipeline (K2, K3, S2, S3, their decomposable
//! spans and maximal duals) is carried by [`Subspace`].

use crate::error::{Error, Result};
use crate::field::PrimeField;

/// Dense row-major matrix over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from signed-integer rows, reducing entries mod p.
    /// All rows must share one length.
    pub fn from_rows(field: PrimeField, cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let mut m = Self::zeros(field, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::validation(format!(
                    "row {} has length {}, expected {}",
                    r,
                    row.len(),
                    cols
                )));
            }
            for (c, &x) in row.iter().enumerate() {
                m.set(r, c, field.reduce(x));
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(v < self.field.p());
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::validation(format!(
                "matrix product shape mismatch: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let p = f.p() as u64;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k) as u64;
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow.iter()) {
                    *d = ((*d as u64 + a * b as u64) % p) as u32;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::validation(format!(
                "vector length {} does not match {} columns",
                v.len(),
                self.cols
            )));
        }
        let p = self.field.p() as u64;
        let mut out = vec![0u32; self.rows];
        for r in 0..self.rows {
            let mut acc = 0u64;
            for (a, &b) in self.row(r).iter().zip(v.iter()) {
                acc = (acc + *a as u64 * b as u64) % p;
            }
            out[r] = acc as u32;
        }
        Ok(out)
    }

    /// Row-vector times matrix: the linear combination of rows with the
    /// given coefficients.
    pub fn left_apply(&self, coeffs: &[u32]) -> Result<Vec<u32>> {
        if coeffs.len() != self.rows {
            return Err(Error::validation(format!(
                "coefficient length {} does not match {} rows",
                coeffs.len(),
                self.rows
            )));
        }
        let p = self.field.p() as u64;
        let mut out = vec![0u32; self.cols];
        for (r, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(self.row(r).iter()) {
                *o = ((*o as u64 + c as u64 * b as u64) % p) as u32;
            }
        }
        Ok(out)
    }

    /// Stacks `other` below `self`.
    pub fn stack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::validation("cannot stack matrices with different column counts"));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// In-place Gauss-Jordan reduction to the unique RREF.
    /// Returns (rank, pivot columns).
    pub fn rref_in_place(&mut self) -> (usize, Vec<usize>) {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut pr = 0usize; // next pivot row
        for pc in 0..self.cols {
            let Some(sel) = (pr..self.rows).find(|&r| self.get(r, pc) != 0) else {
                continue;
            };
            self.data.swap_rows(self.cols, pr, sel);
            let inv = f.inv(self.get(pr, pc)).expect("pivot is nonzero");
            if inv != 1 {
                for c in pc..self.cols {
                    let v = f.mul(self.get(pr, c), inv);
                    self.set(pr, c, v);
                }
            }
            for r in 0..self.rows {
                if r == pr {
                    continue;
                }
                let factor = self.get(r, pc);
                if factor == 0 {
                    continue;
                }
                for c in pc..self.cols {
                    let v = f.sub(self.get(r, c), f.mul(factor, self.get(pr, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(pc);
            pr += 1;
            if pr == self.rows {
                break;
            }
        }
        (pr, pivots)
    }

    /// Reduced row echelon form with rank and pivot columns; span preserved.
    pub fn rref(&self) -> (Matrix, usize, Vec<usize>) {
        let mut m = self.clone();
        let (rank, pivots) = m.rref_in_place();
        (m, rank, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// The kernel {x : self * x = 0} as a canonical subspace of F_p^cols.
    pub fn kernel(&self) -> Subspace {
        let f = self.field;
        let (r, rank, pivots) = self.rref();
        let mut rows: Vec<Vec<u32>> = Vec::with_capacity(self.cols - rank);
        let mut is_pivot = vec![false; self.cols];
        for &pc in &pivots {
            is_pivot[pc] = true;
        }
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(i, free));
            }
            rows.push(v);
        }
        Subspace::from_row_data(f, self.cols, rows)
    }
}

trait SwapRows {
    fn swap_rows(&mut self, cols: usize, a: usize, b: usize);
}

impl SwapRows for Vec<u32> {
    fn swap_rows(&mut self, cols: usize, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (a, b) = (a.min(b), a.max(b));
        let (head, tail) = self.split_at_mut(b * cols);
        head[a * cols..(a + 1) * cols].swap_with_slice(&mut tail[..cols]);
    }
}

/// A subspace of F_p^N held as its unique RREF basis (no zero rows,
/// strictly increasing pivot columns, unit pivots, zeros above and below
/// each pivot). Equality of values is equality of subspaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    field: PrimeField,
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: PrimeField, ambient: usize) -> Self {
        Subspace { field, ambient, basis: Matrix::zeros(field, 0, ambient), pivots: Vec::new() }
    }

    pub fn full(field: PrimeField, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Canonical subspace spanned by the given vectors.
    pub fn span(field: PrimeField, ambient: usize, vectors: &[Vec<u32>]) -> Result<Self> {
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != ambient {
                return Err(Error::validation(format!(
                    "vector {} has length {}, expected ambient dimension {}",
                    i,
                    v.len(),
                    ambient
                )));
            }
        }
        Ok(Self::from_row_data(field, ambient, vectors.to_vec()))
    }

    /// Canonicalizes a matrix of spanning rows.
    pub fn from_matrix(m: &Matrix) -> Self {
        let (r, rank, pivots) = m.rref();
        let mut data = r.data;
        data.truncate(rank * m.cols());
        let basis = Matrix { field: m.field(), rows: rank, cols: m.cols(), data };
        Subspace { field: m.field(), ambient: m.cols(), basis, pivots }
    }

    fn from_row_data(field: PrimeField, ambient: usize, rows: Vec<Vec<u32>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * ambient);
        for r in rows {
            data.extend_from_slice(&r);
        }
        Self::from_matrix(&Matrix { field, rows: n, cols: ambient, data })
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// The canonical RREF basis, one row per basis vector.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> impl Iterator<Item = &[u32]> {
        (0..self.dim()).map(|r| self.basis.row(r))
    }

    /// Reduces `v` modulo the subspace; the residual is zero iff `v` lies in it.
    pub fn reduce(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.ambient {
            return Err(Error::validation(format!(
                "vector length {} does not match ambient dimension {}",
                v.len(),
                self.ambient
            )));
        }
        let f = self.field;
        let mut out = v.to_vec();
        for (i, &pc) in self.pivots.iter().enumerate() {
            let c = out[pc];
            if c == 0 {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(self.basis.row(i).iter()) {
                *o = f.sub(*o, f.mul(c, b));
            }
        }
        Ok(out)
    }

    pub fn contains(&self, v: &[u32]) -> Result<bool> {
        Ok(self.reduce(v)?.iter().all(|&x| x == 0))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool> {
        if other.ambient != self.ambient {
            return Err(Error::validation("ambient dimension mismatch"));
        }
        for row in other.basis_rows() {
            if !self.contains(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Inserts a vector into the span, keeping the basis in RREF.
    /// Returns true if the dimension grew.
    pub fn insert(&mut self, v: &[u32]) -> Result<bool> {
        let f = self.field;
        let mut res = self.reduce(v)?;
        let Some(lead) = res.iter().position(|&x| x != 0) else {
            return Ok(false);
        };
        let inv = f.inv(res[lead]).expect("leading entry nonzero");
        if inv != 1 {
            for x in res.iter_mut() {
                *x = f.mul(*x, inv);
            }
        }
        // eliminate the new pivot column from existing rows
        for r in 0..self.basis.rows() {
            let c = self.basis.get(r, lead);
            if c == 0 {
                continue;
            }
            for col in 0..self.ambient {
                let v = f.sub(self.basis.get(r, col), f.mul(c, res[col]));
                self.basis.set(r, col, v);
            }
        }
        let at = self.pivots.partition_point(|&pc| pc < lead);
        self.pivots.insert(at, lead);
        let mut data = self.basis.data.clone();
        let idx = at * self.ambient;
        data.splice(idx..idx, res);
        self.basis =
            Matrix { field: f, rows: self.basis.rows() + 1, cols: self.ambient, data };
        Ok(true)
    }

    /// Smallest subspace containing both operands.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient != other.ambient {
            return Err(Error::validation("ambient dimension mismatch in subspace sum"));
        }
        let stacked = self.basis.stack(&other.basis)?;
        Ok(Subspace::from_matrix(&stacked))
    }

    /// Intersection, via the double-annihilator identity under the
    /// standard dot-product pairing.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient != other.ambient {
            return Err(Error::validation("ambient dimension mismatch in intersection"));
        }
        let ann_sum = self.basis.kernel().sum(&other.basis.kernel())?;
        Ok(ann_sum.basis.kernel())
    }
}

/// The annihilator {w : pair(w, f) = 0 for all f in s}, where
/// pair(w, f) = w^T . gram . f and gram\[i\]\[j\] is the pairing of the i-th
/// result-side basis vector with the j-th s-side basis vector. The pairing
/// must be nondegenerate: a singular gram is rejected.
pub fn annihilator(s: &Subspace, gram: &Matrix) -> Result<Subspace> {
    let n = s.ambient_dim();
    if gram.rows() != n || gram.cols() != n {
        return Err(Error::validation(format!(
            "gram matrix is {}x{}, expected {}x{}",
            gram.rows(),
            gram.cols(),
            n,
            n
        )));
    }
    if gram.rank() != n {
        return Err(Error::validation("gram matrix is singular; the pairing must be nondegenerate"));
    }
    // Constraint rows are f^T gram^T for each basis vector f of s.
    let constraints = s.basis().mul(&gram.transpose())?;
    Ok(constraints.kernel())
}

/// Annihilator under the identity gram (the standard coordinate pairing):
/// simply the kernel of the basis matrix.
pub fn annihilator_std(s: &Subspace) -> Subspace {
    s.basis().kernel()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rref_identity_fixed() {
        let id = Matrix::identity(f(5), 3);
        let (r, rank, pivots) = id.rref();
        assert_eq!(r, id);
        assert_eq!(rank, 3);
        assert_eq!(pivots, vec![0, 1, 2]);
    }

    #[test]
    fn rref_dependent_rows_mod_three() {
        // row2 = 2 * row1 mod 3
        let m = Matrix::from_rows(f(3), 2, &[vec![1, 2], vec![2, 1]]).unwrap();
        let (r, rank, _) = m.rref();
        assert_eq!(rank, 1);
        assert_eq!(r.row(0), &[1, 2]);
        assert_eq!(r.row(1), &[0, 0]);
    }

    #[test]
    fn rref_zero_matrix() {
        let m = Matrix::zeros(f(7), 2, 4);
        let (r, rank, pivots) = m.rref();
        assert!(r.is_zero());
        assert_eq!(rank, 0);
        assert!(pivots.is_empty());
    }

    #[test]
    fn rref_idempotent() {
        let m = Matrix::from_rows(f(5), 4, &[vec![2, 3, 1, 0], vec![4, 1, 1, 2], vec![1, 4, 2, 2]])
            .unwrap();
        let (r1, _, _) = m.rref();
        let (r2, _, _) = r1.rref();
        assert_eq!(r1, r2);
    }

    #[test]
    fn kernel_identity_and_zero() {
        let id = Matrix::identity(f(5), 4);
        assert_eq!(id.kernel().dim(), 0);
        let z = Matrix::zeros(f(5), 1, 4);
        assert_eq!(z.kernel(), Subspace::full(f(5), 4));
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let m = Matrix::from_rows(f(7), 5, &[vec![1, 2, 3, 4, 5], vec![2, 0, 1, 0, 6]]).unwrap();
        let k = m.kernel();
        assert_eq!(m.rank() + k.dim(), 5);
        for row in k.basis_rows() {
            assert!(m.apply(row).unwrap().iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn kernel_of_empty_matrix_is_full() {
        let m = Matrix::zeros(f(3), 0, 4);
        assert_eq!(m.kernel(), Subspace::full(f(3), 4));
    }

    #[test]
    fn span_canonicalizes() {
        let field = f(5);
        let a = Subspace::span(field, 3, &[vec![1, 0, 0], vec![1, 1, 0]]).unwrap();
        let b = Subspace::span(field, 3, &[vec![0, 1, 0], vec![1, 0, 0]]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
        let empty = Subspace::span(field, 6, &[]).unwrap();
        assert_eq!(empty, Subspace::zero(field, 6));
    }

    #[test]
    fn span_ragged_is_error() {
        assert!(Subspace::span(f(5), 3, &[vec![1, 0, 0], vec![1, 1]]).is_err());
    }

    #[test]
    fn sum_and_contains() {
        let field = f(3);
        let e12 = Subspace::span(field, 3, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        let z = Subspace::zero(field, 3);
        assert_eq!(e12.sum(&z).unwrap(), e12);
        assert!(e12.contains(&[1, 1, 0]).unwrap());
        assert!(!e12.contains(&[0, 0, 1]).unwrap());
        let other = Subspace::span(field, 4, &[vec![1, 0, 0, 0]]).unwrap();
        assert!(e12.sum(&other).is_err());
    }

    #[test]
    fn insert_tracks_span() {
        let field = f(7);
        let mut s = Subspace::zero(field, 4);
        assert!(s.insert(&[0, 2, 0, 1]).unwrap());
        assert!(s.insert(&[1, 1, 0, 0]).unwrap());
        assert!(!s.insert(&[2, 2, 0, 0]).unwrap());
        assert!(s.insert(&[0, 0, 5, 0]).unwrap());
        assert_eq!(s.dim(), 3);
        let direct =
            Subspace::span(field, 4, &[vec![0, 2, 0, 1], vec![1, 1, 0, 0], vec![0, 0, 5, 0]])
                .unwrap();
        assert_eq!(s, direct);
    }

    #[test]
    fn annihilator_extremes() {
        let field = f(5);
        let gram = Matrix::identity(field, 4);
        let zero = Subspace::zero(field, 4);
        let full = Subspace::full(field, 4);
        assert_eq!(annihilator(&zero, &gram).unwrap(), full);
        assert_eq!(annihilator(&full, &gram).unwrap(), zero);
    }

    #[test]
    fn annihilator_rejects_singular_gram() {
        let field = f(5);
        let s = Subspace::span(field, 2, &[vec![1, 0]]).unwrap();
        let gram = Matrix::from_rows(field, 2, &[vec![1, 1], vec![2, 2]]).unwrap();
        assert!(annihilator(&s, &gram).is_err());
    }

    #[test]
    fn double_annihilator_with_transposed_gram() {
        let field = f(7);
        let s = Subspace::span(field, 4, &[vec![1, 2, 3, 4], vec![0, 1, 0, 5]]).unwrap();
        // a nonsingular non-symmetric gram
        let gram = Matrix::from_rows(
            field,
            4,
            &[vec![1, 1, 0, 0], vec![0, 1, 0, 3], vec![2, 0, 1, 0], vec![0, 0, 0, 1]],
        )
        .unwrap();
        let a = annihilator(&s, &gram).unwrap();
        assert_eq!(a.dim(), 2);
        let back = annihilator(&a, &gram.transpose()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn intersect_basic() {
        let field = f(3);
        let a = Subspace::span(field, 3, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        let b = Subspace::span(field, 3, &[vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let c = a.intersect(&b).unwrap();
        assert_eq!(c, Subspace::span(field, 3, &[vec![0, 1, 0]]).unwrap());
    }
}
