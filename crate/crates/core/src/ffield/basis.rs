use super::{ExtElem, FieldCtx, Fq};
use crate::error::{Error, Result};
use crate::matfq::MatFq;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisKind {
    Arbitrary,
    Normal,
    /// Trace-dual of another basis.
    Dual,
}

/// An F_q-basis `(b_1, ..., b_n)` of K.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis {
    elements: Vec<ExtElem>,
    kind: BasisKind,
    /// Column i holds the power-basis coordinates of `b_i`.
    coords: MatFq,
    coords_inv: MatFq,
}

impl Basis {
    pub fn new(ctx: &FieldCtx, elements: Vec<ExtElem>, kind: BasisKind) -> Result<Self> {
        let n = ctx.n();
        if elements.len() != n {
            return Err(Error::ShapeMismatch(format!("{} elements for a degree-{n} basis", elements.len())));
        }
        let coords = MatFq::from_fn(n, n, |i, j| elements[j].coords()[i]);
        let coords_inv = coords.inverse(ctx.base())?;
        Ok(Basis { elements, kind, coords, coords_inv })
    }

    pub fn elements(&self) -> &[ExtElem] {
        &self.elements
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Coordinate matrix over the power basis (column i is `b_i`).
    pub fn coord_matrix(&self) -> &MatFq {
        &self.coords
    }

    /// Coordinates of `a` with respect to this basis.
    pub fn coordinates(&self, ctx: &FieldCtx, a: &ExtElem) -> Vec<Fq> {
        self.coords_inv.mul_vec(ctx.base(), a.coords())
    }

    /// Gram matrix of the trace form, `(Trace(b_i b_j))_{ij}`.
    pub fn gram(&self, ctx: &FieldCtx) -> MatFq {
        let n = self.len();
        MatFq::from_fn(n, n, |i, j| ctx.rel_trace(&ctx.mul(&self.elements[i], &self.elements[j])))
    }

    /// The trace-dual basis `b*` with `Trace(b_i b*_j) = δ_ij`.
    pub fn dual(&self, ctx: &FieldCtx) -> Basis {
        let f = ctx.base();
        let n = self.len();
        let gram_inv = self.gram(ctx).inverse(f).expect("trace form is nondegenerate");
        // b*_j = sum_i (T^{-1})_{ij} b_i
        let dual: Vec<ExtElem> = (0..n)
            .map(|j| (0..n).fold(ctx.zero(), |acc, i| ctx.add(&acc, &ctx.scale(gram_inv.get(i, j), &self.elements[i]))))
            .collect();
        for i in 0..n {
            for (j, d) in dual.iter().enumerate() {
                let t = ctx.rel_trace(&ctx.mul(&self.elements[i], d));
                assert_eq!(t, if i == j { Fq::ONE } else { Fq::ZERO }, "dual basis equation ({i},{j})");
            }
        }
        let kind = if self.kind == BasisKind::Dual { BasisKind::Arbitrary } else { BasisKind::Dual };
        Basis::new(ctx, dual, kind).expect("dual basis is a basis")
    }

    pub fn is_self_dual(&self, ctx: &FieldCtx) -> bool {
        self.gram(ctx).as_scalar() == Some(Fq::ONE)
    }
}
