//! Full-length Gabidulin codes in k^{n x n}.
//!
//! Everything is expressed through a normal basis `Γ = (γ, γ^[1], ..., γ^[n-1])`
//! of K = F_{q^n} over k = F_q, where `α^[i] = α^{q^i}`. Indices are 0-based:
//! row/column `j` of `ε_Γ(·)` corresponds to `γ^[j]`.
//!
//! Structure matrices:
//!
//! - `T`, the Gram matrix `(Trace(γ^[i] γ^[j]))_{ij}` of the trace form;
//! - `A = ε_Γ(Γ^[1])`, the cyclic shift with `A_{ij} = 1` iff `i = j + 1 (mod n)`;
//! - `S = ε_Γ(σΓ)` for a primitive `σ`, a Singer cycle generating `𝒦^×`,
//!   where `𝒦 = {ε_Γ(αΓ) : α ∈ K}` is the image of K in k^{n x n};
//! - `δ = det(S)`.
//!
//! The code `G_ℓ` is spanned by `ε_Γ(γ^[i] Γ^[j])` for `0 <= i < n`, `0 <= j < ℓ`,
//! which equals `𝒦 ⊕ 𝒦A ⊕ ... ⊕ 𝒦A^{ℓ-1}`.

mod checks;

use std::sync::Arc;

pub use checks::{Exponents, SymmetryRow};

use crate::error::{Error, Result};
use crate::ffield::{prime_factors, BaseField, Basis, ExtElem, FieldCtx, Fq};
use crate::matfq::MatFq;
use crate::rankcode::{EquivMap, MapKind, RankMetricCode};

/// `ε_B(v)`: column `j` holds the `B`-coordinates of `v_j`.
pub fn epsilon(ctx: &FieldCtx, basis: &Basis, v: &[ExtElem]) -> MatFq {
    let n = basis.len();
    assert_eq!(v.len(), n, "epsilon takes one element per basis vector");
    let cols: Vec<Vec<Fq>> = v.iter().map(|a| basis.coordinates(ctx, a)).collect();
    MatFq::from_fn(n, n, |i, j| cols[j][i])
}

/// `ε_B(αB)`, the matrix of multiplication by `α` in the basis `B`.
pub fn mult_matrix(ctx: &FieldCtx, basis: &Basis, alpha: &ExtElem) -> MatFq {
    let v: Vec<ExtElem> = basis.elements().iter().map(|b| ctx.mul(alpha, b)).collect();
    epsilon(ctx, basis, &v)
}

/// The cyclic shift `A` with `A_{ij} = δ_{i, j+1 mod n}`.
pub fn shift_matrix(n: usize) -> MatFq {
    MatFq::from_fn(n, n, |i, j| if i == (j + 1) % n { Fq::ONE } else { Fq::ZERO })
}

#[derive(Clone, Debug)]
pub struct GabidulinCtx {
    ctx: Arc<FieldCtx>,
    gamma: Basis,
    gram: MatFq,
    gram_inv: MatFq,
    shift: MatFq,
    shift_inv: MatFq,
    sigma: ExtElem,
    singer: MatFq,
    singer_det: Fq,
    /// `ε_Γ(γ^[i] Γ)`, a basis of `𝒦`.
    field_basis: Vec<MatFq>,
}

fn invariant(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Invariant(what.to_string()))
    }
}

impl GabidulinCtx {
    pub fn new(ctx: Arc<FieldCtx>) -> Result<Self> {
        let gamma = ctx.find_normal_basis()?;
        let sigma = ctx.primitive_element()?;
        Self::with_choices(ctx, gamma, sigma)
    }

    /// Builds the context from a given normal basis and primitive element,
    /// checking the structural identities.
    pub fn with_choices(ctx: Arc<FieldCtx>, gamma: Basis, sigma: ExtElem) -> Result<Self> {
        let n = ctx.n();
        let f = ctx.base();
        let q = ctx.q() as u64;
        let qn1 = ctx.qn() - 1;
        for i in 0..n {
            invariant(gamma.elements()[i] == ctx.frobenius(&gamma.elements()[0], i), "basis is a Frobenius orbit")?;
        }
        invariant(ctx.order(&sigma) == qn1, "sigma is primitive")?;

        let gram = gamma.gram(&ctx);
        let gram_inv = gram.inverse(f).map_err(|_| Error::Invariant("T is invertible".into()))?;
        invariant(gram.is_symmetric(), "T is symmetric")?;
        invariant(epsilon(&ctx, &gamma.dual(&ctx), gamma.elements()) == gram, "T = ε_{Γ*}(Γ)")?;

        let shifted: Vec<ExtElem> = gamma.elements().iter().map(|g| ctx.frobenius(g, 1)).collect();
        let shift = epsilon(&ctx, &gamma, &shifted);
        invariant(shift == shift_matrix(n), "ε_Γ(Γ^[1]) is the cyclic shift")?;
        invariant(shift.pow(f, n as u64) == MatFq::identity(n), "A^n = I")?;
        let shift_inv = shift.transpose();
        invariant(shift.mul(f, &gram) == gram.mul(f, &shift), "A T = T A")?;

        let singer = mult_matrix(&ctx, &gamma, &sigma);
        invariant(shift.mul(f, &singer).mul(f, &shift_inv) == singer.pow(f, q), "A S A^{-1} = S^q")?;
        let id = MatFq::identity(n);
        invariant(singer.pow(f, qn1) == id, "S^{q^n-1} = I")?;
        for r in prime_factors(qn1) {
            invariant(singer.pow(f, qn1 / r) != id, "S has order q^n - 1")?;
        }
        let singer_det = singer.det(f)?;
        invariant(f.pow(singer_det, q - 1) == Fq::ONE, "det(S)^{q-1} = 1")?;
        for r in prime_factors(q - 1) {
            invariant(f.pow(singer_det, (q - 1) / r) != Fq::ONE, "det(S) is primitive in F_q")?;
        }

        let field_basis = gamma.elements().iter().map(|g| mult_matrix(&ctx, &gamma, g)).collect();
        Ok(GabidulinCtx { ctx, gamma, gram, gram_inv, shift, shift_inv, sigma, singer, singer_det, field_basis })
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn field(&self) -> &BaseField {
        self.ctx.base()
    }

    pub fn n(&self) -> usize {
        self.ctx.n()
    }

    pub fn q(&self) -> u64 {
        self.ctx.q() as u64
    }

    pub fn normal_basis(&self) -> &Basis {
        &self.gamma
    }

    /// Trace Gram matrix `T`.
    pub fn gram(&self) -> &MatFq {
        &self.gram
    }

    pub fn gram_inv(&self) -> &MatFq {
        &self.gram_inv
    }

    /// Cyclic shift `A`.
    pub fn shift(&self) -> &MatFq {
        &self.shift
    }

    pub fn shift_inv(&self) -> &MatFq {
        &self.shift_inv
    }

    /// `A^j` for any integer `j`.
    pub fn shift_pow(&self, j: i64) -> MatFq {
        let n = self.n() as i64;
        self.shift.pow(self.field(), j.rem_euclid(n) as u64)
    }

    pub fn sigma(&self) -> &ExtElem {
        &self.sigma
    }

    /// Singer cycle `S`.
    pub fn singer(&self) -> &MatFq {
        &self.singer
    }

    /// `δ = det(S)`.
    pub fn singer_det(&self) -> Fq {
        self.singer_det
    }

    /// `S^i`, exponent reduced mod `q^n - 1`.
    pub fn singer_pow(&self, i: u64) -> MatFq {
        self.singer.pow(self.field(), i % (self.ctx.qn() - 1))
    }

    /// Basis `ε_Γ(γ^[i] Γ)` of the field algebra `𝒦`.
    pub fn field_basis(&self) -> &[MatFq] {
        &self.field_basis
    }

    /// `ε_Γ(αΓ)`.
    pub fn embed(&self, alpha: &ExtElem) -> MatFq {
        mult_matrix(&self.ctx, &self.gamma, alpha)
    }

    /// `G_ℓ` for `1 <= ℓ <= n`. Both generating descriptions are built and
    /// compared.
    pub fn code(&self, ell: usize) -> Result<RankMetricCode> {
        let n = self.n();
        if ell == 0 || ell > n {
            return Err(Error::BadEll { ell, n });
        }
        let by_frobenius = self.code_by_frobenius(ell)?;
        let by_cyclic = self.code_by_cyclic_algebra(ell)?;
        invariant(by_frobenius == by_cyclic, "G_ℓ = 𝒦 ⊕ 𝒦A ⊕ ... ⊕ 𝒦A^{ℓ-1}")?;
        invariant(by_frobenius.dim() == ell * n, "dim G_ℓ = ℓ n")?;
        Ok(by_frobenius)
    }

    /// Span of `ε_Γ(γ^[i] Γ^[j])`.
    pub fn code_by_frobenius(&self, ell: usize) -> Result<RankMetricCode> {
        let ctx = &self.ctx;
        let n = self.n();
        let mut gens = Vec::with_capacity(ell * n);
        for j in 0..ell {
            let frob: Vec<ExtElem> = self.gamma.elements().iter().map(|g| ctx.frobenius(g, j)).collect();
            for gi in self.gamma.elements() {
                let v: Vec<ExtElem> = frob.iter().map(|b| ctx.mul(gi, b)).collect();
                gens.push(epsilon(ctx, &self.gamma, &v));
            }
        }
        RankMetricCode::new(ctx.clone(), n, n, gens)
    }

    /// Span of `B A^j` for `B` in the basis of `𝒦`.
    pub fn code_by_cyclic_algebra(&self, ell: usize) -> Result<RankMetricCode> {
        let f = self.field();
        let n = self.n();
        let mut gens = Vec::with_capacity(ell * n);
        let mut a_pow = MatFq::identity(n);
        for _ in 0..ell {
            gens.extend(self.field_basis.iter().map(|b| b.mul(f, &a_pow)));
            a_pow = a_pow.mul(f, &self.shift);
        }
        RankMetricCode::new(self.ctx.clone(), n, n, gens)
    }

    /// `κ_{S,I}`, `κ_{I,S}`, `κ_{A,A^{-1}}` and `τ_{T^{-1}, T A^{ℓ-1}}`, each
    /// checked to fix `G_ℓ`.
    pub fn aut_generators(&self, ell: usize) -> Result<Vec<EquivMap>> {
        let n = self.n();
        if ell == 0 || ell >= n {
            return Err(Error::BadEll { ell, n });
        }
        let f = self.field();
        let id = MatFq::identity(n);
        let gens = vec![
            EquivMap::proper(f, self.singer.clone(), id.clone())?,
            EquivMap::proper(f, id, self.singer.clone())?,
            EquivMap::proper(f, self.shift.clone(), self.shift_inv.clone())?,
            EquivMap::new(
                f,
                MapKind::Improper,
                self.gram_inv.clone(),
                self.gram.mul(f, &self.shift_pow(ell as i64 - 1)),
            )?,
        ];
        let code = self.code(ell)?;
        for g in &gens {
            invariant(code.apply(g)? == code, "generator fixes G_ℓ")?;
        }
        Ok(gens)
    }

    /// `|Aut(G_ℓ)| = 2n (q^n - 1)^2 / (q - 1)` for `0 < ℓ < n`.
    pub fn aut_order(&self, ell: usize) -> Result<u128> {
        let n = self.n();
        if ell == 0 || ell >= n {
            return Err(Error::BadEll { ell, n });
        }
        Ok(aut_order_formula(self.q(), n))
    }
}

pub fn aut_order_formula(q: u64, n: usize) -> u128 {
    let qn1 = (q as u128).pow(n as u32) - 1;
    2 * n as u128 * qn1 * qn1 / (q as u128 - 1)
}
