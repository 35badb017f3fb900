//! Machine checks of the structural identities around `GabidulinCtx`.
//!
//! Every check returns a plain boolean (or a list of counterexamples); callers
//! decide how to report. Checks quantifying over powers of `S` take an
//! [`Exponents`] set, exhaustive when `q^n - 1` is under the caller's cap.

use std::collections::BTreeSet;

use super::{epsilon, mult_matrix, GabidulinCtx};
use crate::error::Result;
use crate::ffield::{Basis, ExtElem, FieldCtx};
use crate::matfq::MatFq;

const SAMPLE: u64 = 64;

/// Exponents `m` at which a statement about `S^m` is checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exponents {
    pub values: Vec<u64>,
    pub exhaustive: bool,
}

impl Exponents {
    /// All of `0..order` when `order <= cap`, else an evenly spread sample.
    pub fn for_order(order: u64, cap: u64) -> Self {
        if order <= cap {
            return Exponents { values: (0..order).collect(), exhaustive: true };
        }
        let step = (order / SAMPLE).max(1);
        let mut values: Vec<u64> = (0..SAMPLE).map(|k| (k * step + k) % order).collect();
        values.sort_unstable();
        values.dedup();
        Exponents { values, exhaustive: false }
    }
}

/// One failing cell of the symmetry truth table: `T A^j S^i` (and its mirror
/// `S^i A^j T^{-1}`) disagreed with the closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryRow {
    pub j: usize,
    pub i: u64,
    pub expected: bool,
}

/// `ε_B(αB)^T = ε_{B*}(αB*) = T_B ε_B(αB) T_B^{-1}` for a given basis.
pub fn basechange_holds(ctx: &FieldCtx, basis: &Basis, alpha: &ExtElem) -> bool {
    let f = ctx.base();
    let dual = basis.dual(ctx);
    let m = mult_matrix(ctx, basis, alpha);
    let m_dual = mult_matrix(ctx, &dual, alpha);
    let gram = basis.gram(ctx);
    if epsilon(ctx, &dual, basis.elements()) != gram {
        return false;
    }
    let Ok(gram_inv) = gram.inverse(f) else { return false };
    m.transpose() == m_dual && m_dual == gram.mul(f, &m).mul(f, &gram_inv)
}

impl GabidulinCtx {
    pub fn exponents(&self, cap: u64) -> Exponents {
        Exponents::for_order(self.ctx.qn() - 1, cap)
    }

    fn singer_powers<'a>(&'a self, exps: &'a Exponents) -> impl Iterator<Item = MatFq> + 'a {
        exps.values.iter().map(|&m| self.singer_pow(m))
    }

    /// Base change identity for `α = σ^m`.
    pub fn check_basechange(&self, exps: &Exponents) -> bool {
        exps.values.iter().all(|&m| {
            let alpha = self.ctx.pow(&self.sigma, m);
            basechange_holds(&self.ctx, &self.gamma, &alpha)
        })
    }

    /// `𝒦` is an n-dimensional commutative subalgebra containing `I`, and
    /// `α ↦ ε_Γ(αΓ)` is a ring homomorphism on the sampled elements.
    pub fn check_field_algebra(&self, exps: &Exponents) -> Result<bool> {
        let f = self.field();
        let n = self.n();
        let k = self.code(1)?;
        if k.dim() != n || !k.contains(&MatFq::identity(n)) {
            return Ok(false);
        }
        for a in &self.field_basis {
            for b in &self.field_basis {
                let ab = a.mul(f, b);
                if ab != b.mul(f, a) || !k.contains(&ab) {
                    return Ok(false);
                }
            }
        }
        let ok = exps.values.iter().all(|&m| {
            let alpha = self.ctx.pow(&self.sigma, m);
            let beta = self.ctx.add(&alpha, &self.gamma.elements()[0]);
            let ea = self.embed(&alpha);
            let eb = self.embed(&beta);
            self.embed(&self.ctx.mul(&alpha, &beta)) == ea.mul(f, &eb) && ea == self.singer_pow(m) && k.contains(&eb)
        });
        Ok(ok)
    }

    /// `A B A^{-1} = B^q` (equivalently `AB = B^q A`) for `B = S^m`.
    pub fn check_frobenius_conjugation(&self, exps: &Exponents) -> bool {
        let f = self.field();
        let q = self.q();
        self.singer_powers(exps).all(|b| self.shift.mul(f, &b).mul(f, &self.shift_inv) == b.pow(f, q))
    }

    /// The normalizer of `𝒦^×` in `GL_n(q)` is `⟨A⟩𝒦^×`, by enumerating
    /// `GL_n(q)`. `X` normalizes the cyclic group `⟨S⟩` iff `X S X^{-1}` lies in it.
    pub fn check_normalizer(&self, cap: u64) -> Result<bool> {
        let f = self.field();
        let n = self.n();
        let qn1 = self.ctx.qn() - 1;
        let mut group = BTreeSet::new();
        let mut s = MatFq::identity(n);
        for _ in 0..qn1 {
            group.insert(s.clone());
            s = s.mul(f, &self.singer);
        }
        let mut expected = BTreeSet::new();
        let mut a = MatFq::identity(n);
        for _ in 0..n {
            for b in &group {
                expected.insert(a.mul(f, b).into_vec());
            }
            a = a.mul(f, &self.shift);
        }
        let gl = MatFq::general_linear(f, n, cap)?;
        let found: BTreeSet<Vec<_>> = gl
            .into_iter()
            .filter(|x| {
                let xi = x.inverse(f).expect("general_linear yields invertible matrices");
                group.contains(&x.mul(f, &self.singer).mul(f, &xi))
            })
            .map(MatFq::into_vec)
            .collect();
        Ok(found == expected && expected.len() as u64 == n as u64 * qn1)
    }

    /// `trace(B A^i) = 0` for `B = S^m` and `1 <= i < n`.
    pub fn check_trace_vanishing(&self, exps: &Exponents) -> bool {
        let f = self.field();
        let shifts: Vec<MatFq> = (1..self.n()).map(|i| self.shift_pow(i as i64)).collect();
        self.singer_powers(exps).all(|b| shifts.iter().all(|a| b.mul(f, a).trace(f).is_zero()))
    }

    /// `k^{n x n} = 𝒦 ⊕ 𝒦A ⊕ ... ⊕ 𝒦A^{n-1}`.
    pub fn check_direct_sum(&self) -> Result<bool> {
        let n = self.n();
        let full = self.code_by_cyclic_algebra(n)?;
        Ok(full.dim() == n * n)
    }

    /// The two descriptions of `G_ℓ` agree for every `1 <= ℓ <= n`.
    pub fn check_code_descriptions(&self) -> Result<bool> {
        for ell in 1..=self.n() {
            if self.code_by_frobenius(ell)? != self.code_by_cyclic_algebra(ell)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `det(A) = -1` and `A^T = A^{-1}` (n even).
    pub fn check_shift_det(&self) -> Result<bool> {
        let f = self.field();
        let id = MatFq::identity(self.n());
        Ok(self.shift.det(f)? == f.from_int(-1) && self.shift.mul(f, &self.shift.transpose()) == id)
    }

    /// `A T = T A` and `(T A^j)^T = A^{-j} T` for all `j`.
    pub fn check_gram_shift(&self) -> bool {
        let f = self.field();
        if self.shift.mul(f, &self.gram) != self.gram.mul(f, &self.shift) {
            return false;
        }
        (0..self.n() as i64)
            .all(|j| self.gram.mul(f, &self.shift_pow(j)).transpose() == self.shift_pow(-j).mul(f, &self.gram))
    }

    /// `det(S)` generates `F_q^×`; rederived from the norm of `σ`.
    pub fn check_singer_det(&self) -> bool {
        let f = self.field();
        let q = self.q();
        // det(ε(σΓ)) = N(σ) = σ^{(q^n - 1)/(q - 1)}
        let norm = self.ctx.pow(&self.sigma, (self.ctx.qn() - 1) / (q - 1));
        if self.ctx.to_base(&norm) != Some(self.singer_det) {
            return false;
        }
        f.elements().filter(|x| !x.is_zero()).all(|x| (0..q - 1).any(|k| f.pow(self.singer_det, k) == x))
    }

    /// `det(T)` is a nonsquare (q odd, n even).
    pub fn check_gram_nonsquare(&self) -> Result<bool> {
        Ok(!self.gram.is_square_det(self.field())?)
    }

    /// `T S^m` symmetric.
    pub fn check_gram_singer_symmetric(&self, exps: &Exponents) -> bool {
        let f = self.field();
        self.singer_powers(exps).all(|s| self.gram.mul(f, &s).is_symmetric())
    }

    /// `S^m T^{-1}` symmetric.
    pub fn check_singer_gram_inv_symmetric(&self, exps: &Exponents) -> bool {
        let f = self.field();
        self.singer_powers(exps).all(|s| s.mul(f, &self.gram_inv).is_symmetric())
    }

    /// Closed form for the symmetry of `T A^j S^i`.
    pub fn symmetric_closed_form(&self, j: usize, i: u64) -> bool {
        let n = self.n();
        let j = j % n;
        if j == 0 {
            return true;
        }
        n.is_multiple_of(2) && 2 * j == n && i.is_multiple_of(self.q().pow(n as u32 / 2) + 1)
    }

    /// Full truth table of `T A^j S^i` and `S^i A^j T^{-1}` symmetry over
    /// `0 <= j < n`, `0 <= i < q^n - 1`, compared with the closed form.
    pub fn symmetry_table_mismatches(&self) -> Vec<SymmetryRow> {
        let f = self.field();
        let n = self.n();
        let shifts: Vec<MatFq> = (0..n).map(|j| self.shift_pow(j as i64)).collect();
        let left: Vec<MatFq> = shifts.iter().map(|a| self.gram.mul(f, a)).collect();
        let right: Vec<MatFq> = shifts.iter().map(|a| a.mul(f, &self.gram_inv)).collect();
        let mut out = Vec::new();
        let mut s = MatFq::identity(n);
        for i in 0..self.ctx.qn() - 1 {
            for j in 0..n {
                let expected = self.symmetric_closed_form(j, i);
                let a = left[j].mul(f, &s).is_symmetric();
                let b = s.mul(f, &right[j]).is_symmetric();
                if a != expected || b != expected {
                    out.push(SymmetryRow { j, i, expected });
                }
            }
            s = s.mul(f, &self.singer);
        }
        out
    }

    /// `G_{n/2}^⊥ = T A^{n/2} G_{n/2} T^{-1}` (n even).
    pub fn check_dual_twist(&self) -> Result<bool> {
        let f = self.field();
        let half = self.n() / 2;
        let g = self.code(half)?;
        let x = self.gram.mul(f, &self.shift_pow(half as i64));
        Ok(g.dual() == g.sandwich(&x, &self.gram_inv)?)
    }
}
