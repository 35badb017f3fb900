use crate::error::{Error, Result};
use crate::ffield::{BaseField, Fq};
use crate::matfq::MatFq;

/// Simultaneous row and column operations on a symmetric matrix, tracking the
/// accumulated row transform: `w = l · m · l^T` throughout.
struct Congruence<'a> {
    f: &'a BaseField,
    n: usize,
    w: Vec<Fq>,
    l: Vec<Fq>,
}

impl Congruence<'_> {
    fn at(&self, i: usize, j: usize) -> Fq {
        self.w[i * self.n + j]
    }

    fn swap(&mut self, a: usize, b: usize) {
        let n = self.n;
        for c in 0..n {
            self.w.swap(a * n + c, b * n + c);
            self.l.swap(a * n + c, b * n + c);
        }
        for r in 0..n {
            self.w.swap(r * n + a, r * n + b);
        }
    }

    /// row_dst += c·row_src, col_dst += c·col_src
    fn add_multiple(&mut self, dst: usize, src: usize, c: Fq) {
        let (f, n) = (self.f, self.n);
        for k in 0..n {
            self.w[dst * n + k] = f.add(self.w[dst * n + k], f.mul(c, self.w[src * n + k]));
            self.l[dst * n + k] = f.add(self.l[dst * n + k], f.mul(c, self.l[src * n + k]));
        }
        for r in 0..n {
            self.w[r * n + dst] = f.add(self.w[r * n + dst], f.mul(c, self.w[r * n + src]));
        }
    }
}

/// `(x, y)` with `x^2 + y^2 = d`, first `x` in scan order.
fn two_squares(f: &BaseField, d: Fq) -> (Fq, Fq) {
    f.elements()
        .find_map(|x| {
            let rest = f.sub(d, f.mul(x, x));
            f.is_square(rest).then(|| (x, f.sqrt(rest).expect("checked square")))
        })
        .expect("every element of a finite field is a sum of two squares")
}

/// Some invertible `X` with `X X^T = m`.
///
/// `m` is brought to diagonal form by symmetric elimination. Square diagonal
/// entries take their square root; the nonsquare ones pair up because the
/// determinant is a square, and each pair `(d, d t^2)` is realized by
/// `[[x, -y], [t y, t x]]` with `x^2 + y^2 = d`.
pub fn factor_symmetric(f: &BaseField, m: &MatFq) -> Result<MatFq> {
    if !f.is_odd() {
        return Err(Error::CharTwo);
    }
    if !m.is_square() {
        return Err(Error::ShapeMismatch(format!("{}x{} matrix is not square", m.rows(), m.cols())));
    }
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if !m.is_square_det(f)? {
        return Err(Error::NonSquareDet);
    }
    let n = m.rows();
    let mut c = Congruence { f, n, w: m.as_slice().to_vec(), l: MatFq::identity(n).into_vec() };
    for k in 0..n {
        if c.at(k, k).is_zero() {
            if let Some(t) = (k + 1..n).find(|&t| !c.at(t, t).is_zero()) {
                c.swap(k, t);
            } else {
                // only off-diagonal entries left; adding row t makes the pivot 2·w_kt
                let t = (k + 1..n).find(|&t| !c.at(k, t).is_zero()).ok_or(Error::Singular)?;
                c.add_multiple(k, t, Fq::ONE);
            }
        }
        let pivot_inv = f.inv(c.at(k, k)).expect("nonzero pivot");
        for r in k + 1..n {
            let x = c.at(r, k);
            if !x.is_zero() {
                c.add_multiple(r, k, f.neg(f.mul(x, pivot_inv)));
            }
        }
    }
    let diag: Vec<Fq> = (0..n).map(|i| c.at(i, i)).collect();

    // root · root^T = diag
    let mut root = MatFq::zeros(n, n);
    let mut pending: Option<usize> = None;
    for (i, &d) in diag.iter().enumerate() {
        if f.is_square(d) {
            root.set(i, i, f.sqrt(d)?);
            continue;
        }
        let Some(u) = pending.take() else {
            pending = Some(i);
            continue;
        };
        let du = diag[u];
        let t = f.sqrt(f.mul(d, f.inv(du).expect("nonzero")))?;
        let (x, y) = two_squares(f, du);
        root.set(u, u, x);
        root.set(u, i, f.neg(y));
        root.set(i, u, f.mul(t, y));
        root.set(i, i, f.mul(t, x));
    }
    if pending.is_some() {
        return Err(Error::Invariant("odd number of nonsquare pivots under a square determinant".into()));
    }
    let l = MatFq::from_vec(n, n, c.l)?;
    let x = l.inverse(f)?.mul(f, &root);
    assert_eq!(x.mul(f, &x.transpose()), *m, "factor_symmetric: X X^T = M");
    Ok(x)
}
