//! Dense matrices over the base field F_q.
//!
//! Matrices do not carry their field; every arithmetic method takes the
//! [`BaseField`] explicitly. The vectorization of an m x n matrix is its
//! row-major entry list, so the trace form `<A, B> = trace(A B^T)` is the
//! ordinary dot product of vectorizations.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{BaseField, Fq};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatFq {
    rows: usize,
    cols: usize,
    data: Vec<Fq>,
}

impl fmt::Debug for MatFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.code().to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl MatFq {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatFq { rows, cols, data: vec![Fq::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Fq::ONE)
    }

    pub fn scalar(n: usize, c: Fq) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c);
        }
        m
    }

    /// Matrix unit with a one at (i, j).
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m.set(i, j, Fq::ONE);
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Fq) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        MatFq { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Fq>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(MatFq { rows, cols, data })
    }

    /// Builds a matrix from integer entries, reducing each into F_p.
    pub fn from_ints(f: &BaseField, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_fn(r, c, |i, j| f.from_int(rows[i][j]))
    }

    /// Builds a matrix from canonical element codes.
    pub fn from_codes(f: &BaseField, rows: &[Vec<u32>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            for &x in row {
                data.push(f.elem(x)?);
            }
        }
        Ok(MatFq { rows: r, cols: c, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fq {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fq) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fq] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Row-major vectorization.
    pub fn as_slice(&self) -> &[Fq] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Fq> {
        self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> MatFq {
        MatFq::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// `Some(c)` if the matrix is `c * I`.
    pub fn as_scalar(&self) -> Option<Fq> {
        if !self.is_square() {
            return None;
        }
        let c = if self.rows == 0 { Fq::ONE } else { self.get(0, 0) };
        let ok = (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == if i == j { c } else { Fq::ZERO }));
        ok.then_some(c)
    }

    pub fn checked_mul(&self, f: &BaseField, other: &MatFq) -> Result<MatFq> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = MatFq::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Matrix product. Panics on incompatible shapes; see [`MatFq::checked_mul`].
    pub fn mul(&self, f: &BaseField, other: &MatFq) -> MatFq {
        self.checked_mul(f, other).expect("matrix product shape")
    }

    pub fn add(&self, f: &BaseField, other: &MatFq) -> MatFq {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        MatFq { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, f: &BaseField, other: &MatFq) -> MatFq {
        assert_eq!(self.shape(), other.shape(), "matrix difference shape");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        MatFq { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, f: &BaseField, c: Fq) -> MatFq {
        let data = self.data.iter().map(|&a| f.mul(c, a)).collect();
        MatFq { rows: self.rows, cols: self.cols, data }
    }

    pub fn pow(&self, f: &BaseField, mut e: u64) -> MatFq {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut result = MatFq::identity(self.rows);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(f, &b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(f, &b);
            }
        }
        result
    }

    pub fn trace(&self, f: &BaseField) -> Fq {
        (0..self.rows.min(self.cols)).fold(Fq::ZERO, |acc, i| f.add(acc, self.get(i, i)))
    }

    /// The trace form `trace(A B^T) = sum_ij A_ij B_ij`.
    pub fn inner(&self, f: &BaseField, other: &MatFq) -> Result<Fq> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!(
                "inner product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(dot(f, &self.data, &other.data))
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, f: &BaseField) -> (MatFq, Vec<usize>) {
        let mut m = self.clone();
        let pivots = rref_in_place(f, &mut m.data, m.rows, m.cols);
        (m, pivots)
    }

    pub fn rank(&self, f: &BaseField) -> usize {
        let mut scratch = self.data.clone();
        rank_in_place(f, &mut scratch, self.rows, self.cols)
    }

    pub fn det(&self, f: &BaseField) -> Result<Fq> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(format!("determinant of {}x{}", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = Fq::ONE;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return Ok(Fq::ZERO);
            };
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                }
                det = f.neg(det);
            }
            let p = a[col * n + col];
            det = f.mul(det, p);
            let pinv = f.inv(p).expect("nonzero pivot");
            for r in col + 1..n {
                let factor = f.mul(a[r * n + col], pinv);
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    a[r * n + j] = f.sub(a[r * n + j], f.mul(factor, a[col * n + j]));
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self, f: &BaseField) -> Result<MatFq> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(format!("inverse of {}x{}", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut aug = MatFq::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, Fq::ONE);
        }
        let (r, pivots) = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(MatFq::from_fn(n, n, |i, j| r.get(i, n + j)))
    }

    /// Basis of the right null space `{v : M v = 0}`, one vector per free
    /// column of the RREF, in increasing free-column order.
    pub fn kernel(&self, f: &BaseField) -> Vec<Vec<Fq>> {
        let (r, pivots) = self.rref(f);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![Fq::ZERO; self.cols];
                v[free] = Fq::ONE;
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = f.neg(r.get(row, free));
                }
                v
            })
            .collect()
    }

    pub fn mul_vec(&self, f: &BaseField, v: &[Fq]) -> Vec<Fq> {
        assert_eq!(v.len(), self.cols, "matrix-vector shape");
        (0..self.rows).map(|i| dot(f, self.row(i), v)).collect()
    }

    /// Whether `det` is a nonzero square in F_q.
    pub fn is_square_det(&self, f: &BaseField) -> Result<bool> {
        if !f.is_odd() {
            return Err(Error::CharTwo);
        }
        let d = self.det(f)?;
        if d.is_zero() {
            return Err(Error::Singular);
        }
        Ok(f.is_square(d))
    }

    /// Uniformly random entries.
    pub fn random(f: &BaseField, rows: usize, cols: usize, rng: &mut impl Rng) -> MatFq {
        MatFq::from_fn(rows, cols, |_, _| Fq(rng.gen_range(0..f.q())))
    }

    /// Uniformly random element of `GL_n(q)`, by rejection.
    pub fn random_invertible(f: &BaseField, n: usize, rng: &mut impl Rng) -> MatFq {
        loop {
            let x = MatFq::random(f, n, n, rng);
            if x.rank(f) == n {
                return x;
            }
        }
    }

    /// All invertible n x n matrices, in lexicographic order of their
    /// row-major entry codes. Fails when `q^{n^2}` exceeds `cap`.
    pub fn general_linear(f: &BaseField, n: usize, cap: u64) -> Result<Vec<MatFq>> {
        let q = f.q() as u128;
        let total = q
            .checked_pow((n * n) as u32)
            .filter(|&t| t <= cap as u128)
            .ok_or(Error::TooLarge { count: q.saturating_pow((n * n) as u32), cap })? as u64;
        let cells = n * n;
        let mut out = Vec::new();
        let mut data = vec![Fq::ZERO; cells];
        for idx in 0..total {
            let mut rest = idx;
            for c in (0..cells).rev() {
                data[c] = Fq((rest % q as u64) as u32);
                rest /= q as u64;
            }
            let mut scratch = data.clone();
            if rank_in_place(f, &mut scratch, n, n) == n {
                out.push(MatFq { rows: n, cols: n, data: data.clone() });
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> MatJson {
        MatJson {
            m: self.rows,
            n: self.cols,
            entries: (0..self.rows).map(|i| self.row(i).iter().map(|x| x.code()).collect()).collect(),
        }
    }

    pub fn from_json(f: &BaseField, j: &MatJson) -> Result<MatFq> {
        if j.entries.len() != j.m || j.entries.iter().any(|r| r.len() != j.n) {
            return Err(Error::ShapeMismatch(format!("matrix JSON does not match declared {}x{}", j.m, j.n)));
        }
        let mut m = MatFq::from_codes(f, &j.entries)?;
        m.rows = j.m;
        m.cols = j.n;
        Ok(m)
    }
}

/// Matrix wire format: entries are canonical element codes, row by row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatJson {
    pub m: usize,
    pub n: usize,
    pub entries: Vec<Vec<u32>>,
}

#[inline]
pub(crate) fn dot(f: &BaseField, a: &[Fq], b: &[Fq]) -> Fq {
    a.iter().zip(b).fold(Fq::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// Row-reduces a row-major `rows x cols` buffer in place; returns pivot columns.
pub(crate) fn rref_in_place(f: &BaseField, a: &mut [Fq], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !a[i * cols + c].is_zero()) else {
            continue;
        };
        if piv != r {
            for j in 0..cols {
                a.swap(piv * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(a[r * cols + c]).expect("nonzero pivot");
        for j in c..cols {
            a[r * cols + j] = f.mul(inv, a[r * cols + j]);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = a[i * cols + c];
            if factor.is_zero() {
                continue;
            }
            for j in c..cols {
                a[i * cols + j] = f.sub(a[i * cols + j], f.mul(factor, a[r * cols + j]));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Row echelon rank of a row-major buffer, destroying it.
pub(crate) fn rank_in_place(f: &BaseField, a: &mut [Fq], rows: usize, cols: usize) -> usize {
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !a[i * cols + c].is_zero()) else {
            continue;
        };
        if piv != r {
            for j in c..cols {
                a.swap(piv * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(a[r * cols + c]).expect("nonzero pivot");
        for i in r + 1..rows {
            let factor = f.mul(a[i * cols + c], inv);
            if factor.is_zero() {
                continue;
            }
            for j in c..cols {
                a[i * cols + j] = f.sub(a[i * cols + j], f.mul(factor, a[r * cols + j]));
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f3() -> BaseField {
        BaseField::new(3, 1, None, 1 << 20).unwrap()
    }

    fn shift(n: usize) -> MatFq {
        MatFq::from_fn(n, n, |i, j| if i == (j + 1) % n { Fq::ONE } else { Fq::ZERO })
    }

    #[test]
    fn rank_examples() {
        let f = f3();
        let j = MatFq::from_fn(3, 2, |_, _| Fq::ONE);
        assert_eq!(j.rank(&f), 1);
        assert_eq!(MatFq::zeros(3, 4).rank(&f), 0);
        assert_eq!(MatFq::identity(4).rank(&f), 4);
    }

    #[test]
    fn inner_of_matrix_units() {
        let f = f3();
        for (i, j, l, h) in [(0, 0, 0, 0), (0, 1, 0, 1), (0, 1, 1, 0), (1, 1, 0, 0)] {
            let a = MatFq::unit(2, 2, i, j);
            let b = MatFq::unit(2, 2, l, h);
            let expected = if i == l && j == h { Fq::ONE } else { Fq::ZERO };
            assert_eq!(a.inner(&f, &b).unwrap(), expected);
        }
        assert!(matches!(MatFq::zeros(2, 2).inner(&f, &MatFq::zeros(2, 3)), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn shift_matrix_has_det_minus_one_for_even_n() {
        let f = BaseField::new(7, 1, None, 1 << 20).unwrap();
        for n in [2, 4, 6] {
            assert_eq!(shift(n).det(&f).unwrap(), f.from_int(-1));
        }
        assert_eq!(shift(3).det(&f).unwrap(), Fq::ONE);
    }

    #[test]
    fn kernel_of_zero_map_is_standard_basis() {
        let f = f3();
        let k = MatFq::zeros(2, 3).kernel(&f);
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            assert_eq!(v.iter().filter(|x| !x.is_zero()).count(), 1);
            assert_eq!(v[i], Fq::ONE);
        }
    }

    #[test]
    fn square_det_examples() {
        let f = f3();
        assert!(MatFq::identity(3).is_square_det(&f).unwrap());
        assert!(!MatFq::from_ints(&f, &[&[2, 0], &[0, 1]]).is_square_det(&f).unwrap());
        assert!(MatFq::from_ints(&f, &[&[2, 0], &[0, 2]]).is_square_det(&f).unwrap());
        assert_eq!(MatFq::zeros(2, 2).is_square_det(&f), Err(Error::Singular));
        let f2 = BaseField::new(2, 1, None, 1 << 20).unwrap();
        assert_eq!(MatFq::identity(2).is_square_det(&f2), Err(Error::CharTwo));
    }

    #[test]
    fn general_linear_orders() {
        // |GL_n(q)| = prod_{i<n} (q^n - q^i)
        for (p, n, order) in [(2u64, 2usize, 6usize), (3, 2, 48), (2, 3, 168), (5, 2, 480)] {
            let f = BaseField::new(p, 1, None, 1 << 20).unwrap();
            let gl = MatFq::general_linear(&f, n, 1 << 24).unwrap();
            assert_eq!(gl.len(), order);
            assert!(gl.windows(2).all(|w| w[0] < w[1]));
        }
        let f = f3();
        assert!(matches!(MatFq::general_linear(&f, 4, 1 << 20), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn singular_inverse() {
        let f = f3();
        assert_eq!(MatFq::from_ints(&f, &[&[1, 2], &[2, 1]]).inverse(&f), Err(Error::Singular));
    }

    fn arb_mat(rows: usize, cols: usize) -> impl Strategy<Value = MatFq> {
        proptest::collection::vec(0u32..3, rows * cols)
            .prop_map(move |v| MatFq::from_vec(rows, cols, v.into_iter().map(Fq).collect()).unwrap())
    }

    fn arb_invertible(n: usize) -> impl Strategy<Value = MatFq> {
        arb_mat(n, n).prop_filter("invertible", |m| m.rank(&f3()) == m.rows())
    }

    proptest! {
        #[test]
        fn inner_is_symmetric_and_adjoint(a in arb_mat(2, 3), b in arb_mat(2, 3), x in arb_mat(2, 2), y in arb_mat(3, 3)) {
            let f = f3();
            prop_assert_eq!(a.inner(&f, &b).unwrap(), b.inner(&f, &a).unwrap());
            let lhs = x.mul(&f, &a).mul(&f, &y).inner(&f, &b).unwrap();
            let rhs = a.inner(&f, &x.transpose().mul(&f, &b).mul(&f, &y.transpose())).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn rank_invariant_under_invertible_multiplication(m in arb_mat(3, 3), x in arb_invertible(3), y in arb_invertible(3)) {
            let f = f3();
            prop_assert_eq!(x.mul(&f, &m).mul(&f, &y).rank(&f), m.rank(&f));
        }

        #[test]
        fn trace_invariant_under_conjugation(m in arb_mat(3, 3), p in arb_invertible(3)) {
            let f = f3();
            let conj = p.mul(&f, &m).mul(&f, &p.inverse(&f).unwrap());
            prop_assert_eq!(conj.trace(&f), m.trace(&f));
        }

        #[test]
        fn rref_and_kernel_contracts(m in arb_mat(3, 5)) {
            let f = f3();
            let (r, piv) = m.rref(&f);
            prop_assert_eq!(r.rref(&f), (r.clone(), piv.clone()));
            let k = m.kernel(&f);
            prop_assert_eq!(k.len(), 5 - m.rank(&f));
            for v in &k {
                prop_assert!(m.mul_vec(&f, v).iter().all(|x| x.is_zero()));
            }
        }

        #[test]
        fn det_is_multiplicative(a in arb_mat(3, 3), b in arb_mat(3, 3)) {
            let f = f3();
            let lhs = a.mul(&f, &b).det(&f).unwrap();
            prop_assert_eq!(lhs, f.mul(a.det(&f).unwrap(), b.det(&f).unwrap()));
            prop_assert_eq!(a.det(&f).unwrap().is_zero(), a.rank(&f) < 3);
        }
    }
}
