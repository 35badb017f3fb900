//! Finite field tower F_p ⊆ k = F_q ⊆ K = F_{q^n}.
//!
//! `K` is represented as `F_q[x]/(g(x))` with each element stored as its
//! coordinate vector over F_q in the power basis `1, x, ..., x^{n-1}`.
//! Scans over K (normal basis, primitive element) run in lexicographic order
//! of that coordinate vector with the constant coordinate most significant.

mod base;
mod basis;
pub(crate) mod poly;

use serde::{Deserialize, Serialize};

pub use base::{BaseField, Fq, SQRT_SCAN_LIMIT};
pub use basis::{Basis, BasisKind};

use crate::error::{Error, Result};

/// Iteration bound for exhaustive scans over field elements and polynomials.
pub const SCAN_CAP: u64 = 1 << 24;

/// An element of K as coordinates over F_q.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtElem(Vec<Fq>);

impl ExtElem {
    pub fn coords(&self) -> &[Fq] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }
}

/// Arithmetic context for F_q and its degree-n extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldCtx {
    base: BaseField,
    n: usize,
    /// Monic, constant term first, length n + 1.
    ext_poly: Vec<Fq>,
    qn: u64,
}

impl FieldCtx {
    /// Builds the tower. Omitted polynomials are replaced by the
    /// lexicographically smallest monic irreducible of the right degree.
    pub fn new(p: u64, e: usize, n: usize, base_poly: Option<Vec<u32>>, ext_poly: Option<Vec<u32>>) -> Result<Self> {
        let base = BaseField::new(p, e, base_poly, SCAN_CAP)?;
        if n == 0 {
            return Err(Error::BadPoly("extension degree n must be at least 1".into()));
        }
        let qn = (base.q() as u128)
            .checked_pow(n as u32)
            .filter(|&v| v <= 1u128 << 63)
            .ok_or_else(|| Error::Overflow(format!("q^n = {}^{n} exceeds 2^63", base.q())))? as u64;
        let ext_poly = match ext_poly {
            Some(codes) => {
                if codes.len() != n + 1 || codes[n] != 1 {
                    return Err(Error::BadPoly(format!(
                        "extension polynomial must be monic of degree {n}, got {codes:?}"
                    )));
                }
                let c = codes.iter().map(|&x| base.elem(x)).collect::<Result<Vec<_>>>()?;
                if !poly::is_irreducible(&base, &c) {
                    return Err(Error::Reducible(codes));
                }
                c
            }
            None => poly::smallest_irreducible(&base, n, SCAN_CAP).ok_or_else(|| {
                Error::Overflow(format!("no irreducible of degree {n} over F_{} within scan cap", base.q()))
            })?,
        };
        Ok(FieldCtx { base, n, ext_poly, qn })
    }

    /// Context for F_q itself (n = 1), for codes that need no extension.
    pub fn base_only(p: u64, e: usize) -> Result<Self> {
        Self::new(p, e, 1, None, None)
    }

    /// Parses a prime power `q` into `(p, e)`.
    pub fn split_prime_power(q: u64) -> Result<(u64, usize)> {
        if q < 2 {
            return Err(Error::NotPrime(q));
        }
        let p = (2..=q).find(|d| q.is_multiple_of(*d)).expect("q >= 2 has a divisor");
        let mut rest = q;
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(Error::NotPrime(q));
        }
        Ok((p, e))
    }

    /// Context for F_q with extension degree n, `q` a prime power.
    pub fn for_q(q: u64, n: usize) -> Result<Self> {
        let (p, e) = Self::split_prime_power(q)?;
        Self::new(p, e, n, None, None)
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn p(&self) -> u32 {
        self.base.p()
    }

    pub fn q(&self) -> u32 {
        self.base.q()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// |K| = q^n.
    pub fn qn(&self) -> u64 {
        self.qn
    }

    pub fn ext_poly(&self) -> &[Fq] {
        &self.ext_poly
    }

    pub fn zero(&self) -> ExtElem {
        ExtElem(vec![Fq::ZERO; self.n])
    }

    pub fn one(&self) -> ExtElem {
        self.embed(Fq::ONE)
    }

    pub fn embed(&self, a: Fq) -> ExtElem {
        let mut c = vec![Fq::ZERO; self.n];
        c[0] = a;
        ExtElem(c)
    }

    /// The class of x in F_q[x]/(g).
    pub fn generator(&self) -> ExtElem {
        if self.n == 1 {
            // x = -g_0 when g has degree 1
            return self.embed(self.base.neg(self.ext_poly[0]));
        }
        let mut c = vec![Fq::ZERO; self.n];
        c[1] = Fq::ONE;
        ExtElem(c)
    }

    pub fn from_coords(&self, coords: Vec<Fq>) -> Result<ExtElem> {
        if coords.len() != self.n {
            return Err(Error::ShapeMismatch(format!("{} coordinates for degree {}", coords.len(), self.n)));
        }
        if coords.iter().any(|c| c.code() >= self.q()) {
            return Err(Error::Parse("coordinate out of range".into()));
        }
        Ok(ExtElem(coords))
    }

    /// Coerces an element of K lying in F_q.
    pub fn to_base(&self, a: &ExtElem) -> Option<Fq> {
        a.0[1..].iter().all(|c| c.is_zero()).then_some(a.0[0])
    }

    pub fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem(a.0.iter().zip(&b.0).map(|(&x, &y)| self.base.add(x, y)).collect())
    }

    pub fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem(a.0.iter().zip(&b.0).map(|(&x, &y)| self.base.sub(x, y)).collect())
    }

    pub fn neg(&self, a: &ExtElem) -> ExtElem {
        ExtElem(a.0.iter().map(|&x| self.base.neg(x)).collect())
    }

    pub fn scale(&self, c: Fq, a: &ExtElem) -> ExtElem {
        ExtElem(a.0.iter().map(|&x| self.base.mul(c, x)).collect())
    }

    pub fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let f = &self.base;
        let n = self.n;
        let mut prod = vec![Fq::ZERO; 2 * n - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] = f.add(prod[i + j], f.mul(x, y));
            }
        }
        for top in (n..prod.len()).rev() {
            let c = prod[top];
            if c.is_zero() {
                continue;
            }
            for i in 0..n {
                prod[top - n + i] = f.sub(prod[top - n + i], f.mul(c, self.ext_poly[i]));
            }
            prod[top] = Fq::ZERO;
        }
        prod.truncate(n);
        ExtElem(prod)
    }

    pub fn pow(&self, a: &ExtElem, mut e: u64) -> ExtElem {
        let mut result = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        result
    }

    pub fn inv(&self, a: &ExtElem) -> Option<ExtElem> {
        if a.is_zero() {
            return None;
        }
        Some(self.pow(a, self.qn - 2))
    }

    /// `a^{q^i}`, with `i` reduced mod n.
    pub fn frobenius(&self, a: &ExtElem, i: usize) -> ExtElem {
        let mut r = a.clone();
        for _ in 0..i % self.n {
            r = self.pow(&r, self.q() as u64);
        }
        r
    }

    /// Relative trace `K -> F_q`: the sum of the n Frobenius conjugates.
    pub fn rel_trace(&self, a: &ExtElem) -> Fq {
        let mut acc = self.zero();
        let mut conj = a.clone();
        for _ in 0..self.n {
            acc = self.add(&acc, &conj);
            conj = self.pow(&conj, self.q() as u64);
        }
        self.to_base(&acc).expect("trace lies in the base field")
    }

    /// Position in lexicographic scan order.
    pub fn lex_index(&self, a: &ExtElem) -> u64 {
        let q = self.q() as u64;
        a.0.iter().fold(0u64, |acc, &c| acc * q + self.base.lex_rank(c) as u64)
    }

    pub fn from_lex_index(&self, idx: u64) -> ExtElem {
        let q = self.q() as u64;
        let mut c = vec![Fq::ZERO; self.n];
        let mut rest = idx;
        for i in (0..self.n).rev() {
            c[i] = self.base.from_lex_rank((rest % q) as u32);
            rest /= q;
        }
        ExtElem(c)
    }

    /// Elements of K in lexicographic order, bounded by the scan cap.
    pub fn scan(&self) -> Result<impl Iterator<Item = ExtElem> + '_> {
        if self.qn > SCAN_CAP {
            return Err(Error::TooLarge { count: self.qn as u128, cap: SCAN_CAP });
        }
        Ok((0..self.qn).map(|i| self.from_lex_index(i)))
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: &ExtElem) -> u64 {
        let group = self.qn - 1;
        let mut ord = group;
        for r in prime_factors(group) {
            while ord.is_multiple_of(r) && self.pow(a, ord / r) == self.one() {
                ord /= r;
            }
        }
        ord
    }

    /// First element in scan order generating K^x.
    pub fn primitive_element(&self) -> Result<ExtElem> {
        let group = self.qn - 1;
        let factors = prime_factors(group);
        let one = self.one();
        self.scan()?
            .filter(|a| !a.is_zero())
            .find(|a| factors.iter().all(|&r| self.pow(a, group / r) != one))
            .ok_or_else(|| Error::Invariant("no primitive element found".into()))
    }

    /// First `gamma` in scan order whose conjugates form a basis of K over F_q.
    pub fn find_normal_basis(&self) -> Result<Basis> {
        for gamma in self.scan()? {
            if gamma.is_zero() {
                continue;
            }
            let conj: Vec<ExtElem> = (0..self.n).map(|i| self.frobenius(&gamma, i)).collect();
            if let Ok(b) = Basis::new(self, conj, BasisKind::Normal) {
                return Ok(b);
            }
        }
        Err(Error::Invariant("no normal basis found".into()))
    }

    pub fn to_json(&self) -> CtxJson {
        CtxJson {
            p: self.p() as u64,
            e: self.base.e(),
            n: self.n,
            base_poly: self.base.poly().to_vec(),
            ext_poly: self.ext_poly.iter().map(|c| c.code()).collect(),
        }
    }

    pub fn from_json(j: &CtxJson) -> Result<Self> {
        Self::new(j.p, j.e, j.n, Some(j.base_poly.clone()), Some(j.ext_poly.clone()))
    }

    /// Element of K as nested coefficient arrays: one F_p digit list per coordinate.
    pub fn elem_to_json(&self, a: &ExtElem) -> Vec<Vec<u32>> {
        a.0.iter().map(|&c| self.base.digits(c)).collect()
    }

    pub fn elem_from_json(&self, v: &[Vec<u32>]) -> Result<ExtElem> {
        if v.iter().any(|d| d.len() != self.base.e() || d.iter().any(|&x| x >= self.p())) {
            return Err(Error::Parse("malformed element coefficients".into()));
        }
        self.from_coords(v.iter().map(|d| self.base.from_digits(d)).collect())
    }
}

/// Context wire format. `ext_poly` coefficients are canonical F_q codes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CtxJson {
    pub p: u64,
    pub e: usize,
    pub n: usize,
    pub base_poly: Vec<u32>,
    pub ext_poly: Vec<u32>,
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(p: u64, e: usize, n: usize) -> FieldCtx {
        FieldCtx::new(p, e, n, None, None).unwrap()
    }

    fn el(c: &FieldCtx, v: &[u32]) -> ExtElem {
        c.from_coords(v.iter().map(|&x| c.base().elem(x).unwrap()).collect()).unwrap()
    }

    #[test]
    fn auto_polynomial_over_f3() {
        let c = ctx(3, 1, 2);
        assert_eq!(c.q(), 3);
        assert_eq!(c.qn(), 9);
        let codes: Vec<u32> = c.ext_poly().iter().map(|x| x.code()).collect();
        assert_eq!(codes, vec![1, 0, 1]);
    }

    #[test]
    fn oracle_smallest_quadratic_over_f3() {
        // enumerate monic quadratics x^2 + c1 x + c0 in (c0, c1) lex order, keep rootless ones
        let first = (0..3u64)
            .flat_map(|c0| (0..3u64).map(move |c1| (c0, c1)))
            .find(|&(c0, c1)| (0..3u64).all(|x| (x * x + c1 * x + c0) % 3 != 0))
            .unwrap();
        assert_eq!(first, (1, 0));
    }

    #[test]
    fn degenerate_extension() {
        let c = ctx(2, 1, 1);
        assert_eq!(c.q(), 2);
        assert_eq!(c.qn(), 2);
        assert_eq!(c.primitive_element().unwrap(), c.one());
        let b = c.find_normal_basis().unwrap();
        assert_eq!(b.elements(), &[c.one()]);
    }

    #[test]
    fn not_prime() {
        assert_eq!(FieldCtx::new(4, 1, 2, None, None), Err(Error::NotPrime(4)));
    }

    #[test]
    fn overflow_rejected() {
        assert!(matches!(FieldCtx::new(2, 1, 64, None, None), Err(Error::Overflow(_))));
    }

    #[test]
    fn reducible_ext_poly_rejected() {
        // x^2 + 2 = (x+1)(x+2) over F_3
        assert_eq!(FieldCtx::new(3, 1, 2, None, Some(vec![2, 0, 1])), Err(Error::Reducible(vec![2, 0, 1])));
    }

    #[test]
    fn frobenius_examples() {
        let c = ctx(3, 1, 2);
        let x = c.generator();
        assert_eq!(c.frobenius(&x, 0), x);
        assert_eq!(c.frobenius(&x, 2), x);
        assert_eq!(c.frobenius(&x, 1), el(&c, &[0, 2]));
    }

    #[test]
    fn trace_examples() {
        let c = ctx(3, 1, 2);
        assert_eq!(c.rel_trace(&c.one()), Fq(2));
        assert_eq!(c.rel_trace(&c.zero()), Fq(0));
        assert_eq!(c.rel_trace(&c.generator()), Fq(0));
        let c5 = ctx(5, 1, 3);
        assert_eq!(c5.rel_trace(&c5.one()), Fq(3));
    }

    #[test]
    fn normal_basis_q3_n2() {
        let c = ctx(3, 1, 2);
        let b = c.find_normal_basis().unwrap();
        assert_eq!(b.elements(), &[el(&c, &[1, 1]), el(&c, &[1, 2])]);
        assert_eq!(b.kind(), BasisKind::Normal);
    }

    #[test]
    fn normal_basis_n1() {
        let c = ctx(3, 1, 1);
        assert_eq!(c.find_normal_basis().unwrap().elements(), &[c.one()]);
    }

    #[test]
    fn primitive_element_q9() {
        let c = ctx(3, 1, 2);
        let s = c.primitive_element().unwrap();
        assert_eq!(s, el(&c, &[1, 1]));
        // oracle: explicit powers
        let mut pw = c.one();
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..8 {
            pw = c.mul(&pw, &s);
            seen.insert(pw.clone());
        }
        assert_eq!(seen.len(), 8);
        assert_eq!(c.order(&s), 8);
    }

    #[test]
    fn primitive_element_criterion() {
        for (p, e, n) in [(2, 1, 4), (3, 1, 3), (5, 1, 2), (2, 2, 2), (7, 1, 2)] {
            let c = ctx(p, e, n);
            let s = c.primitive_element().unwrap();
            let g = c.qn() - 1;
            for r in prime_factors(g) {
                assert_ne!(c.pow(&s, g / r), c.one());
            }
            assert_eq!(c.pow(&s, g), c.one());
        }
    }

    #[test]
    fn trace_is_surjective() {
        for (p, e, n) in [(3, 1, 2), (2, 1, 3), (2, 2, 2), (5, 1, 2)] {
            let c = ctx(p, e, n);
            let image: std::collections::BTreeSet<Fq> = c.scan().unwrap().map(|a| c.rel_trace(&a)).collect();
            assert_eq!(image.len(), c.q() as usize);
        }
    }

    #[test]
    fn json_round_trip() {
        let c = ctx(2, 2, 3);
        let j = serde_json::to_string(&c.to_json()).unwrap();
        let back = FieldCtx::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, c);
        let a = c.from_lex_index(37);
        assert_eq!(c.elem_from_json(&c.elem_to_json(&a)).unwrap(), a);
    }

    #[test]
    fn split_prime_powers() {
        assert_eq!(FieldCtx::split_prime_power(9), Ok((3, 2)));
        assert_eq!(FieldCtx::split_prime_power(7), Ok((7, 1)));
        assert_eq!(FieldCtx::split_prime_power(6), Err(Error::NotPrime(6)));
    }

    fn arb_elem(c: &'static FieldCtx) -> impl Strategy<Value = ExtElem> {
        (0..c.qn()).prop_map(move |i| c.from_lex_index(i))
    }

    static F9_3: std::sync::LazyLock<FieldCtx> = std::sync::LazyLock::new(|| ctx(3, 2, 3));

    proptest! {
        #[test]
        fn field_axioms(a in arb_elem(&F9_3), b in arb_elem(&F9_3), d in arb_elem(&F9_3)) {
            let c = &*F9_3;
            prop_assert_eq!(c.mul(&c.mul(&a, &b), &d), c.mul(&a, &c.mul(&b, &d)));
            prop_assert_eq!(c.mul(&a, &c.add(&b, &d)), c.add(&c.mul(&a, &b), &c.mul(&a, &d)));
            if !a.is_zero() {
                prop_assert_eq!(c.mul(&a, &c.inv(&a).unwrap()), c.one());
            }
        }

        #[test]
        fn frobenius_is_automorphism_fixing_base(a in arb_elem(&F9_3), b in arb_elem(&F9_3), k in 0u32..9) {
            let c = &*F9_3;
            let fr = |x: &ExtElem| c.frobenius(x, 1);
            prop_assert_eq!(fr(&c.add(&a, &b)), c.add(&fr(&a), &fr(&b)));
            prop_assert_eq!(fr(&c.mul(&a, &b)), c.mul(&fr(&a), &fr(&b)));
            let base = c.embed(Fq(k));
            prop_assert_eq!(fr(&base), base);
        }

        #[test]
        fn trace_is_linear(a in arb_elem(&F9_3), b in arb_elem(&F9_3), k in 0u32..9) {
            let c = &*F9_3;
            let f = c.base();
            let lhs = c.rel_trace(&c.add(&c.scale(Fq(k), &a), &b));
            prop_assert_eq!(lhs, f.add(f.mul(Fq(k), c.rel_trace(&a)), c.rel_trace(&b)));
        }
    }
}
