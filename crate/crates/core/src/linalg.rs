//! Dense exact linear algebra over `Q(i)`: matrices, reduced row echelon
//! form, kernels, and canonical subspaces.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::QI;

pub type Vector = Vec<QI>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<QI>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![QI::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = QI::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<QI>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::input("ragged matrix rows"));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| QI::from_int(x)).collect()).collect())
            .expect("rectangular literal")
    }

    /// Permutation matrix sending basis vector `e_i` to `e_{perm[i]}`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Matrix::zeros(n, n);
        for (i, &j) in perm.iter().enumerate() {
            m[(j, i)] = QI::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[QI] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<QI>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[QI] {
        &self.data
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch in matrix product");
        let mut out = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        let t = a * b;
                        out[(i, j)] += &t;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[QI]) -> Vector {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut acc = QI::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: &QI) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    /// `self - I`.
    pub fn minus_identity(&self) -> Matrix {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] = &m[(i, i)] - &QI::one();
        }
        m
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn conj_transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].conj();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(QI::is_zero)
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = QI::one();
        }
        let (r, pivots) = rref(&aug);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    /// Basis of `{x : self * x = 0}` in canonical (reduced echelon) form.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = rref(self);
        let n = self.cols;
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..n).filter(|&j| !is_pivot[j]) {
            let mut v = vec![QI::zero(); n];
            v[free] = QI::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -&r[(row, free)];
            }
            basis.push(v);
        }
        Subspace::from_span(n, basis)
    }

    /// Stack matrices with equal column count on top of each other.
    pub fn vstack(blocks: &[Matrix]) -> Matrix {
        let cols = blocks.first().map_or(0, |b| b.cols);
        assert!(blocks.iter().all(|b| b.cols == cols));
        Matrix { rows: blocks.iter().map(|b| b.rows).sum(), cols, data: blocks.iter().flat_map(|b| b.data.iter().cloned()).collect() }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = QI;
    fn index(&self, (i, j): (usize, usize)) -> &QI {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut QI {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

/// Reduced row echelon form; returns the reduced matrix (zero rows dropped)
/// and the pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else { continue };
        if p != r {
            for j in 0..cols {
                a.data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = a[(r, c)].inv().expect("nonzero pivot");
        for j in c..cols {
            if !a[(r, j)].is_zero() {
                a[(r, j)] = &a[(r, j)] * &inv;
            }
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..cols {
                if !a[(r, j)].is_zero() {
                    let t = &f * &a[(r, j)];
                    a[(i, j)] -= &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.data.truncate(r * cols);
    a.rows = r;
    (a, pivots)
}

/// A subspace of `Q(i)^dim` stored by its reduced echelon basis, so two equal
/// subspaces have identical representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    dim: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(dim: usize) -> Self {
        Subspace { dim, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(dim: usize) -> Self {
        Self::from_span(dim, (0..dim).map(|i| unit(dim, i)).collect())
    }

    pub fn from_span(dim: usize, vectors: Vec<Vector>) -> Self {
        if vectors.is_empty() {
            return Subspace::zero(dim);
        }
        let m = Matrix::from_rows(vectors).expect("equal-length vectors");
        assert_eq!(m.cols, dim);
        let (r, pivots) = rref(&m);
        Subspace { dim, basis: r.to_rows(), pivots }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.dim
    }

    /// Reduce `v` against the echelon basis; the remainder is zero iff `v`
    /// lies in the subspace.
    pub fn reduce(&self, v: &[QI]) -> Vector {
        let mut w = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if w[p].is_zero() {
                continue;
            }
            let f = w[p].clone();
            for (wj, rj) in w.iter_mut().zip(row) {
                if !rj.is_zero() {
                    *wj -= &(&f * rj);
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[QI]) -> bool {
        assert_eq!(v.len(), self.dim);
        self.reduce(v).iter().all(QI::is_zero)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::from_span(self.dim, self.basis.iter().chain(&other.basis).cloned().collect())
    }

    /// Constraint matrix `C` with `self = ker C` (bilinear annihilator).
    pub fn constraints(&self) -> Matrix {
        if self.basis.is_empty() {
            return Matrix::identity(self.dim);
        }
        let b = Matrix::from_rows(self.basis.clone()).expect("rectangular");
        let ann = b.kernel();
        if ann.basis.is_empty() {
            return Matrix::zeros(0, self.dim);
        }
        Matrix::from_rows(ann.basis).expect("rectangular")
    }

    /// `{v : a v ∈ self}`.
    pub fn preimage(&self, a: &Matrix) -> Subspace {
        let c = self.constraints();
        if c.rows() == 0 {
            return Subspace::full(a.cols());
        }
        c.mul(a).kernel()
    }

    /// Orthogonal complement of `self` within `outer` for the Hermitian
    /// product `<x, y> = sum x_i conj(y_i)`.
    pub fn orthogonal_complement_in(&self, outer: &Subspace) -> Subspace {
        if self.basis.is_empty() {
            return outer.clone();
        }
        if outer.basis.is_empty() {
            return outer.clone();
        }
        // x = sum c_j o_j with <x, s_i> = 0 for all i.
        let rows: Vec<Vector> = self
            .basis
            .iter()
            .map(|s| outer.basis.iter().map(|o| hermitian(o, s)).collect())
            .collect();
        let coeffs = Matrix::from_rows(rows).expect("rectangular").kernel();
        let vecs = coeffs
            .basis
            .iter()
            .map(|c| {
                let mut x = vec![QI::zero(); self.dim];
                for (cj, oj) in c.iter().zip(&outer.basis) {
                    if cj.is_zero() {
                        continue;
                    }
                    for (xi, oi) in x.iter_mut().zip(oj) {
                        *xi += &(cj * oi);
                    }
                }
                x
            })
            .collect();
        Subspace::from_span(self.dim, vecs)
    }

    /// Exact orthogonal projection onto this subspace.
    pub fn project(&self, v: &[QI]) -> Vector {
        if self.basis.is_empty() {
            return vec![QI::zero(); self.dim];
        }
        let k = self.basis.len();
        // Gram system G c = b with G_ij = <e_j, e_i>, b_i = <v, e_i>.
        let mut aug = Matrix::zeros(k, k + 1);
        for i in 0..k {
            for j in 0..k {
                aug[(i, j)] = hermitian(&self.basis[j], &self.basis[i]);
            }
            aug[(i, k)] = hermitian(v, &self.basis[i]);
        }
        let (r, _) = rref(&aug);
        let mut out = vec![QI::zero(); self.dim];
        for j in 0..k {
            let c = &r[(j, k)];
            for (o, e) in out.iter_mut().zip(&self.basis[j]) {
                *o += &(c * e);
            }
        }
        out
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}) ", self.basis.len(), self.dim)?;
        f.debug_list().entries(&self.basis).finish()
    }
}

/// JSON form: an array of basis vectors with `Q(i)` string entries.
impl Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self.basis.iter().map(|v| v.iter().map(QI::to_string).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        let dim = rows.first().map_or(0, Vec::len);
        let vecs = rows
            .iter()
            .map(|r| r.iter().map(|s| s.parse::<QI>()).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        if vecs.iter().any(|v| v.len() != dim) {
            return Err(serde::de::Error::custom("ragged subspace basis"));
        }
        Ok(Subspace::from_span(dim, vecs))
    }
}

pub fn unit(dim: usize, i: usize) -> Vector {
    let mut v = vec![QI::zero(); dim];
    v[i] = QI::one();
    v
}

/// `sum x_i conj(y_i)`.
pub fn hermitian(x: &[QI], y: &[QI]) -> QI {
    let mut acc = QI::zero();
    for (a, b) in x.iter().zip(y) {
        if !a.is_zero() && !b.is_zero() {
            acc += &(a * &b.conj());
        }
    }
    acc
}

pub fn vec_sub(a: &[QI], b: &[QI]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_add(a: &[QI], b: &[QI]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_scale(a: &[QI], c: &QI) -> Vector {
    a.iter().map(|x| x * c).collect()
}

/// Incrementally maintained echelon basis (pivot entries normalised to one,
/// not fully reduced). Used to grow spans one vector at a time.
#[derive(Clone, Debug, Default)]
pub struct EchelonBuilder {
    rows: Vec<(usize, Vector)>,
}

impl EchelonBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns true when `v` enlarged the span.
    pub fn insert(&mut self, mut v: Vector) -> bool {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (vj, rj) in v.iter_mut().zip(row) {
                if !rj.is_zero() {
                    *vj -= &(&f * rj);
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else { return false };
        let inv = v[p].inv().expect("nonzero");
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let at = self.rows.partition_point(|(q, _)| *q < p);
        self.rows.insert(at, (p, v));
        true
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn vectors(&self) -> impl Iterator<Item = &Vector> {
        self.rows.iter().map(|(_, v)| v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> QI {
        QI::from_int(n)
    }

    #[test]
    fn kernel_of_unipotent_minus_identity() {
        let m = Matrix::from_i64(&[&[1, 1], &[0, 1]]).minus_identity();
        let k = m.kernel();
        assert_eq!(k.basis(), &[vec![q(1), q(0)]]);
    }

    #[test]
    fn canonical_form_is_basis_independent() {
        let a = Subspace::from_span(3, vec![vec![q(1), q(2), q(3)], vec![q(0), q(1), q(1)]]);
        let b = Subspace::from_span(3, vec![vec![q(1), q(3), q(4)], vec![q(2), q(5), q(7)]]);
        assert_eq!(a, b);
    }

    #[test]
    fn inverse_and_singular() {
        let m = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        assert!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn preimage_and_constraints() {
        let w = Subspace::from_span(2, vec![vec![q(1), q(0)]]);
        let a = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
        assert!(w.preimage(&a).is_full());
        assert_eq!(Subspace::zero(2).preimage(&a), Subspace::from_span(2, vec![vec![q(1), q(0)]]));
    }

    #[test]
    fn complement_and_projection() {
        let outer = Subspace::full(3);
        let s = Subspace::from_span(3, vec![vec![q(1), q(1), q(0)]]);
        let c = s.orthogonal_complement_in(&outer);
        assert_eq!(c.dim(), 2);
        for v in c.basis() {
            assert!(hermitian(v, &s.basis()[0]).is_zero());
        }
        let p = s.project(&[q(2), q(0), q(5)]);
        assert_eq!(p, vec![q(1), q(1), q(0)]);
    }

    #[test]
    fn echelon_builder_tracks_rank() {
        let mut b = EchelonBuilder::new();
        assert!(b.insert(vec![q(1), q(2)]));
        assert!(!b.insert(vec![q(2), q(4)]));
        assert!(b.insert(vec![q(0), q(1)]));
        assert!(!b.insert(vec![q(5), q(-7)]));
        assert_eq!(b.len(), 2);
    }
}
