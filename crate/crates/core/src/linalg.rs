//! Dense matrices over a [`Scalar`] field plus the subspace machinery used by
//! the classifier: fixed-subspace projectors, canonical range bases,
//! containment tests and orthogonal projectors onto arbitrary subspaces.

use std::ops::{Index, IndexMut};

use crate::error::{GsnnError, Result};
use crate::scalar::{Scalar, Tolerances};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(GsnnError::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: nrows,
            cols,
            data,
        })
    }

    /// Permutation matrix with `m[image[j]][j] = 1`.
    pub fn from_permutation(image: &[usize]) -> Self {
        let n = image.len();
        let mut m = Self::zeros(n, n);
        for (j, &i) in image.iter().enumerate() {
            m[(i, j)] = S::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.clone() * other[(k, j)].clone();
                    out[(i, j)] = out[(i, j)].clone() + prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.clone() * s.clone()).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn approx_eq(&self, other: &Self, eps: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a.approx_eq(b, eps))
    }

    pub fn is_zero(&self, eps: f64) -> bool {
        self.data.iter().all(|x| x.negligible(eps))
    }

    /// `MᵀM = I` up to `eps`.
    pub fn is_orthogonal(&self, eps: f64) -> bool {
        self.rows == self.cols
            && self
                .transpose()
                .mul(self)
                .approx_eq(&Self::identity(self.rows), eps)
    }

    /// Image array when this is a permutation matrix.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        if self.rows != self.cols {
            return None;
        }
        let mut image = Vec::with_capacity(self.cols);
        for j in 0..self.cols {
            let mut hit = None;
            for i in 0..self.rows {
                let x = &self[(i, j)];
                if x.is_one() {
                    if hit.is_some() {
                        return None;
                    }
                    hit = Some(i);
                } else if !x.is_zero() {
                    return None;
                }
            }
            image.push(hit?);
        }
        let mut seen = vec![false; image.len()];
        for &i in &image {
            if std::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(image)
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(Scalar::to_f64).collect(),
        }
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

/// Skips zero factors, which dominate permutation matrices and sparse weights.
pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Reduced row echelon form in place; returns the pivot columns.
///
/// Pivots are chosen by largest magnitude, which is harmless in exact mode
/// (the reduced form is unique) and keeps the float path stable. Entries below
/// `eps` are treated as zero.
pub fn rref<S: Scalar>(m: &mut Matrix<S>, eps: f64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let best = (r..m.rows)
            .filter(|&i| !m[(i, c)].negligible(eps))
            .max_by(|&a, &b| {
                m[(a, c)]
                    .abs()
                    .partial_cmp(&m[(b, c)].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
        let Some(p) = best else {
            for i in r..m.rows {
                m[(i, c)] = S::zero();
            }
            continue;
        };
        if p != r {
            for j in 0..m.cols {
                m.data.swap(p * m.cols + j, r * m.cols + j);
            }
        }
        let inv = S::one() / m[(r, c)].clone();
        for j in 0..m.cols {
            m[(r, j)] = m[(r, j)].clone() * inv.clone();
        }
        m[(r, c)] = S::one();
        for i in 0..m.rows {
            if i == r {
                continue;
            }
            let f = m[(i, c)].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..m.cols {
                let v = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                m[(i, j)] = v;
            }
            m[(i, c)] = S::zero();
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<S: Scalar>(m: &Matrix<S>, eps: f64) -> usize {
    rref(&mut m.clone(), eps).len()
}

/// Linearly independent spanning vectors of a subspace of `S^ambient_dim`.
///
/// Vectors are stored as the nonzero rows of a reduced row echelon form, so
/// in exact mode two bases of the same subspace compare equal.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceBasis<S> {
    pub ambient_dim: usize,
    pub vectors: Vec<Vec<S>>,
}

impl<S: Scalar> SubspaceBasis<S> {
    pub fn zero(ambient_dim: usize) -> Self {
        SubspaceBasis {
            ambient_dim,
            vectors: Vec::new(),
        }
    }

    /// Echelon basis of the span of `vectors`.
    pub fn span(ambient_dim: usize, vectors: &[Vec<S>], eps: f64) -> Result<Self> {
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(GsnnError::DimensionMismatch {
                    expected: ambient_dim,
                    found: v.len(),
                });
            }
        }
        if vectors.is_empty() {
            return Ok(Self::zero(ambient_dim));
        }
        let mut m = Matrix::from_rows(vectors.to_vec())?;
        let r = rref(&mut m, eps).len();
        Ok(SubspaceBasis {
            ambient_dim,
            vectors: (0..r).map(|i| m.row(i).to_vec()).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_zero(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn contains(&self, v: &[S], eps: f64) -> Result<bool> {
        if v.len() != self.ambient_dim {
            return Err(GsnnError::DimensionMismatch {
                expected: self.ambient_dim,
                found: v.len(),
            });
        }
        if v.iter().all(|x| x.negligible(eps)) {
            return Ok(true);
        }
        let mut rows = self.vectors.clone();
        rows.push(v.to_vec());
        let m = Matrix::from_rows(rows)?;
        Ok(rank(&m, eps) == self.dim())
    }

    /// Linear combination `Σ coeffs[k]·vectors[k]`.
    pub fn combine(&self, coeffs: &[S]) -> Result<Vec<S>> {
        if coeffs.len() != self.dim() {
            return Err(GsnnError::DimensionMismatch {
                expected: self.dim(),
                found: coeffs.len(),
            });
        }
        let mut out = vec![S::zero(); self.ambient_dim];
        for (c, v) in coeffs.iter().zip(&self.vectors) {
            for (o, x) in out.iter_mut().zip(v) {
                *o = o.clone() + c.clone() * x.clone();
            }
        }
        Ok(out)
    }
}

/// Averages the given orthogonal matrices: `P_A = (1/|A|) Σ a`.
pub fn average<'a, S: Scalar>(dim: usize, mats: impl IntoIterator<Item = &'a Matrix<S>>) -> Matrix<S> {
    let mut sum = Matrix::zeros(dim, dim);
    let mut count = 0i64;
    for m in mats {
        sum = sum.add(m);
        count += 1;
    }
    assert!(count > 0, "averaging over an empty set");
    sum.scale(&(S::one() / S::from_i64(count)))
}

/// Basis of the column space of `p`.
pub fn range_basis<S: Scalar>(p: &Matrix<S>, tol: &Tolerances) -> SubspaceBasis<S> {
    let t = p.transpose();
    SubspaceBasis::span(p.rows(), &t.row_vecs(), tol.rank_pivot).expect("consistent dimensions")
}

/// Basis of `{v : m·v = 0}`.
pub fn null_space<S: Scalar>(m: &Matrix<S>, tol: &Tolerances) -> SubspaceBasis<S> {
    let mut r = m.clone();
    let pivots = rref(&mut r, tol.rank_pivot);
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    let vectors: Vec<Vec<S>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![S::zero(); m.cols()];
            v[f] = S::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[(row, f)].clone();
            }
            v
        })
        .collect();
    SubspaceBasis::span(m.cols(), &vectors, tol.rank_pivot).expect("consistent dimensions")
}

/// `span(a) ⊆ span(b)`.
pub fn subspace_leq<S: Scalar>(
    a: &SubspaceBasis<S>,
    b: &SubspaceBasis<S>,
    tol: &Tolerances,
) -> Result<bool> {
    if a.ambient_dim != b.ambient_dim {
        return Err(GsnnError::DimensionMismatch {
            expected: b.ambient_dim,
            found: a.ambient_dim,
        });
    }
    for v in &a.vectors {
        if !b.contains(v, tol.rank_pivot)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Inverse of a square matrix by Gauss-Jordan elimination.
pub fn inverse<S: Scalar>(m: &Matrix<S>, eps: f64) -> Option<Matrix<S>> {
    let n = m.rows();
    if n != m.cols() {
        return None;
    }
    let mut aug = Matrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, n + i)] = S::one();
    }
    let pivots = rref(&mut aug, eps);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let mut inv = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            inv[(i, j)] = aug[(i, n + j)].clone();
        }
    }
    Some(inv)
}

/// Orthogonal projector `B(BᵀB)⁻¹Bᵀ` onto `span(v)`, with `B` the basis as columns.
pub fn projector_onto<S: Scalar>(v: &SubspaceBasis<S>, tol: &Tolerances) -> Matrix<S> {
    let m = v.ambient_dim;
    if v.is_zero() {
        return Matrix::zeros(m, m);
    }
    let bt = Matrix::from_rows(v.vectors.clone()).expect("basis rows share a dimension");
    let b = bt.transpose();
    let gram = bt.mul(&b);
    let gram_inv = inverse(&gram, tol.rank_pivot).expect("basis vectors are independent");
    b.mul(&gram_inv).mul(&bt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    fn qm(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect()).unwrap()
    }

    fn shift(n: usize, k: usize) -> Matrix<Q> {
        Matrix::from_permutation(&(0..n).map(|j| (j + k) % n).collect::<Vec<_>>())
    }

    #[test]
    fn permutation_matrix_convention() {
        // image [1, 2, 0]: e0 -> e1, e1 -> e2, e2 -> e0
        let m: Matrix<Q> = Matrix::from_permutation(&[1, 2, 0]);
        assert_eq!(m.mul_vec(&[q(1, 1), q(0, 1), q(0, 1)]), vec![q(0, 1), q(1, 1), q(0, 1)]);
        assert_eq!(m.as_permutation(), Some(vec![1, 2, 0]));
        assert!(m.is_orthogonal(0.0));
        assert_eq!(qm(&[&[1, 1], &[0, 0]]).as_permutation(), None);
    }

    #[test]
    fn range_of_zero_and_identity() {
        let tol = Tolerances::default();
        assert!(range_basis(&Matrix::<Q>::zeros(3, 3), &tol).is_zero());
        let full = range_basis(&Matrix::<Q>::identity(3), &tol);
        assert_eq!(full.vectors, Matrix::<Q>::identity(3).row_vecs());
    }

    #[test]
    fn average_of_cyclic_shifts_is_all_ones_over_six() {
        let shifts: Vec<_> = (0..6).map(|k| shift(6, k)).collect();
        let p = average(6, &shifts);
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(p[(i, j)], q(1, 6));
            }
        }
    }

    #[test]
    fn average_over_half_turn() {
        let p = average(6, &[shift(6, 0), shift(6, 3)]);
        for i in 0..6 {
            for j in 0..6 {
                let expect = if j == i || j == (i + 3) % 6 { q(1, 2) } else { q(0, 1) };
                assert_eq!(p[(i, j)], expect);
            }
        }
    }

    #[test]
    fn rank_of_difference_of_projectors() {
        // P_<r^3> - P_C6 on the 6-cycle. Oracle: the range is the set of
        // vectors with v_i = v_{i+3} and zero sum, i.e. dimension 3 - 1 = 2.
        let tol = Tolerances::default();
        let half = average(6, &[shift(6, 0), shift(6, 3)]);
        let all: Vec<_> = (0..6).map(|k| shift(6, k)).collect();
        let d = half.sub(&average(6, &all));
        assert_eq!(range_basis(&d, &tol).dim(), 2);
    }

    #[test]
    fn containment() {
        let tol = Tolerances::default();
        let e1 = SubspaceBasis::span(2, &[vec![q(1, 1), q(0, 1)]], 0.0).unwrap();
        let diag = SubspaceBasis::span(2, &[vec![q(1, 1), q(1, 1)]], 0.0).unwrap();
        assert!(subspace_leq(&SubspaceBasis::zero(2), &diag, &tol).unwrap());
        assert!(!subspace_leq(&e1, &diag, &tol).unwrap());
        let full = range_basis(&Matrix::<Q>::identity(2), &tol);
        assert!(subspace_leq(&diag, &full, &tol).unwrap());
        assert!(subspace_leq(&e1, &SubspaceBasis::zero(3), &tol).is_err());
    }

    #[test]
    fn projector_onto_swap_antisymmetric_line() {
        // P_{e} - P_{C2} = I - (I + s)/2 = (1/2)[[1,-1],[-1,1]]
        let tol = Tolerances::default();
        let s = shift(2, 1);
        let id = Matrix::<Q>::identity(2);
        let diff = id.sub(&average(2, &[id.clone(), s]));
        let p = projector_onto(&range_basis(&diff, &tol), &tol);
        let expect = Matrix::from_rows(vec![vec![q(1, 2), q(-1, 2)], vec![q(-1, 2), q(1, 2)]]).unwrap();
        assert_eq!(p, expect);
        assert_eq!(projector_onto(&SubspaceBasis::<Q>::zero(2), &tol), Matrix::zeros(2, 2));
        assert_eq!(projector_onto(&range_basis(&id, &tol), &tol), id);
    }

    #[test]
    fn null_space_of_rank_one() {
        let tol = Tolerances::default();
        let n = null_space(&qm(&[&[1, 1, 1]]), &tol);
        assert_eq!(n.dim(), 2);
        for v in &n.vectors {
            assert_eq!(dot(v, &[q(1, 1), q(1, 1), q(1, 1)]), q(0, 1));
        }
    }

    #[test]
    fn float_rank_respects_pivot_threshold() {
        let m = Matrix::from_rows(vec![vec![1.0, 1.0], vec![1.0, 1.0 + 1e-12]]).unwrap();
        assert_eq!(rank(&m, 1e-9), 1);
        assert_eq!(rank(&m, 1e-14), 2);
    }

    #[test]
    fn inverse_round_trip() {
        let m = qm(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&m, 0.0).unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        assert!(inverse(&qm(&[&[1, 2], &[2, 4]]), 0.0).is_none());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn int_matrix() -> impl Strategy<Value = Matrix<Q>> {
            (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
                proptest::collection::vec(proptest::collection::vec(-3i64..=3, c), r)
                    .prop_map(|rows| Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(|x| q(x, 1)).collect()).collect()).unwrap())
            })
        }

        proptest! {
            #[test]
            fn rank_plus_nullity(m in int_matrix()) {
                let tol = Tolerances::default();
                let ns = null_space(&m, &tol);
                prop_assert_eq!(rank(&m, 0.0) + ns.dim(), m.cols());
                for v in &ns.vectors {
                    prop_assert!(m.mul_vec(v).iter().all(|x| *x == q(0, 1)));
                }
            }

            #[test]
            fn projector_is_symmetric_idempotent(m in int_matrix()) {
                let tol = Tolerances::default();
                let v = range_basis(&m.transpose(), &tol);
                let p = projector_onto(&v, &tol);
                prop_assert_eq!(p.mul(&p), p.clone());
                prop_assert_eq!(p.transpose(), p.clone());
                for w in &v.vectors {
                    prop_assert_eq!(&p.mul_vec(w), w);
                }
            }
        }
    }
}
