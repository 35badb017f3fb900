//! Self-dual rank-metric codes: the characteristic 2 obstruction, the 2x2
//! classification, factoring symmetric forms, and self-dualizing Gabidulin codes.

mod factor;
mod gabisd;

use std::sync::Arc;

use rand::Rng;

pub use factor::factor_symmetric;
pub use gabisd::{
    certify, det_square_xy, gabisd_selfdualize, selfdualize_q_n, triple_scan, x_matrix, y_matrix, Impossibility,
    SelfDualCertificate, Selfdualization, TripleParams, TripleScan,
};

use crate::error::{Error, Result};
use crate::ffield::{FieldCtx, Fq};
use crate::matfq::{dot, MatFq};
use crate::rankcode::{Limits, RankMetricCode};

/// Evidence that a self-orthogonal code over a field of characteristic 2 has
/// a rank-one matrix in its dual, so `C^⊥` has minimum distance 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Char2Witness {
    pub all_ones: MatFq,
    pub rank: usize,
}

/// In characteristic 2, `<A, J> ^ 2 = <A, A>`, so the all-ones matrix `J` is
/// orthogonal to every self-orthogonal code.
pub fn char2_obstruction(c: &RankMetricCode) -> Result<Char2Witness> {
    let f = c.field();
    if f.is_odd() {
        return Err(Error::NotApplicable("characteristic is odd".into()));
    }
    if !c.is_self_orthogonal() {
        return Err(Error::NotApplicable("code is not self-orthogonal".into()));
    }
    let (m, n) = c.shape();
    let j = MatFq::from_fn(m, n, |_, _| Fq::ONE);
    for g in c.gens() {
        assert!(g.inner(f, &j)?.is_zero(), "J is orthogonal to every generator");
    }
    assert!(c.dual().contains(&j));
    let rank = j.rank(f);
    assert_eq!(rank, 1);
    Ok(Char2Witness { all_ones: j, rank })
}

/// A random self-orthogonal code of dimension at most `target` in `k^{m x n}`,
/// grown by adding random isotropic vectors of the current dual.
pub fn random_self_orthogonal(
    ctx: &Arc<FieldCtx>,
    m: usize,
    n: usize,
    target: usize,
    rng: &mut impl Rng,
) -> Result<RankMetricCode> {
    let f = ctx.base();
    let mut code = RankMetricCode::zero(ctx.clone(), m, n)?;
    let mut tries = 0;
    while code.dim() < target && tries < 64 * (target + 1) {
        tries += 1;
        let dual = code.dual();
        let mut v = MatFq::zeros(m, n);
        for g in dual.gens() {
            let c = f.elem(rng.gen_range(0..f.q()))?;
            v = v.add(f, &g.scale(f, c));
        }
        if v.is_zero() || !dot(f, v.as_slice(), v.as_slice()).is_zero() || code.contains(&v) {
            continue;
        }
        let mut gens = code.gens().to_vec();
        gens.push(v);
        code = RankMetricCode::new(ctx.clone(), m, n, gens)?;
    }
    assert!(code.is_self_orthogonal());
    Ok(code)
}

/// All `(a, b)` with `a^2 + b^2 = -1`, in lexicographic order.
pub fn sum_of_squares_minus_one(ctx: &FieldCtx) -> Vec<(Fq, Fq)> {
    let f = ctx.base();
    let minus_one = f.from_int(-1);
    let mut out: Vec<(Fq, Fq)> = f
        .elements()
        .flat_map(|a| f.elements().map(move |b| (a, b)))
        .filter(|&(a, b)| f.add(f.mul(a, a), f.mul(b, b)) == minus_one)
        .collect();
    out.sort_by_key(|&(a, b)| (f.lex_rank(a), f.lex_rank(b)));
    out
}

/// Self-dual MRD codes in `k^{2x2}`: each has a unique basis
/// `[[1,0],[a,b]], [[0,1],[c,d]]` with `a^2 + b^2 = -1` and
/// `(c, d) ∈ {(-b, a), (b, -a)}`. Ordered by `(a, b)` then by that choice.
pub fn classify_2x2(ctx: &Arc<FieldCtx>) -> Result<Vec<RankMetricCode>> {
    let f = ctx.base();
    if !f.is_odd() {
        return Err(Error::CharTwo);
    }
    let limits = Limits::default();
    let mut out = Vec::new();
    for (a, b) in sum_of_squares_minus_one(ctx) {
        for (c, d) in [(f.neg(b), a), (b, f.neg(a))] {
            let ga = MatFq::from_vec(2, 2, vec![Fq::ONE, Fq::ZERO, a, b])?;
            let gb = MatFq::from_vec(2, 2, vec![Fq::ZERO, Fq::ONE, c, d])?;
            let code = RankMetricCode::new(ctx.clone(), 2, 2, vec![ga, gb])?;
            assert_eq!(code.dim(), 2);
            assert!(code.is_self_dual(), "basis form gives a self-dual code");
            if code.is_mrd(&limits)? {
                out.push(code);
            }
        }
    }
    let expect_nonempty = f.q() % 4 == 3;
    assert_eq!(!out.is_empty(), expect_nonempty, "self-dual MRD 2x2 codes exist iff q = 3 mod 4");
    if expect_nonempty {
        assert_eq!(out.len(), 2 * sum_of_squares_minus_one(ctx).len(), "every candidate is MRD");
    }
    Ok(out)
}

/// `C^⊥ = A C B` with `A`, `B` symmetric of square determinant.
pub fn eqsd_check(c: &RankMetricCode, a: &MatFq, b: &MatFq) -> Result<bool> {
    let f = c.field();
    if !f.is_odd() {
        return Err(Error::CharTwo);
    }
    let (m, n) = c.shape();
    if a.shape() != (m, m) || b.shape() != (n, n) {
        return Err(Error::ShapeMismatch("A must be m x m and B n x n".into()));
    }
    if !a.is_symmetric() || !b.is_symmetric() {
        return Ok(false);
    }
    for s in [a, b] {
        match s.is_square_det(f) {
            Ok(true) => {}
            Ok(false) | Err(Error::Singular) => return Ok(false),
            Err(e) => return Err(e),
        }
    }
    Ok(c.dual() == c.sandwich(a, b)?)
}
