//! The prime field F_p and the base field k = F_q = F_p[y]/(f(y)).
//!
//! An element of F_q is identified with its canonical integer code: the
//! coefficients of its reduced representative packed little-endian in base p.

use serde::{Deserialize, Serialize};

use super::poly::{self, Arith};
use crate::error::{Error, Result};

/// Exhaustive square-root scans are used below this field size.
pub const SQRT_SCAN_LIMIT: u32 = 1 << 16;

/// Field tables are precomputed up to this field size.
const TABLE_LIMIT: u32 = 256;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fq(pub(crate) u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    /// Canonical integer code.
    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct PrimeField {
    pub p: u32,
}

impl Arith for PrimeField {
    type El = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }
    fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        (a as u64 * b as u64 % self.p as u64) as u32
    }
    fn inv(&self, a: u32) -> u32 {
        // Fermat
        let p = self.p as u64;
        let mut result = 1u64;
        let mut b = a as u64 % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        result as u32
    }
    fn order(&self) -> u64 {
        self.p as u64
    }
    fn elem_at_lex(&self, i: u64) -> u32 {
        i as u32
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Debug)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

/// The finite field F_q with q = p^e.
#[derive(Clone, Debug)]
pub struct BaseField {
    prime: PrimeField,
    e: usize,
    q: u32,
    /// Monic defining polynomial over F_p, constant term first, length e + 1.
    poly: Vec<u32>,
    tables: Option<Tables>,
}

impl PartialEq for BaseField {
    fn eq(&self, other: &Self) -> bool {
        self.prime == other.prime && self.poly == other.poly
    }
}

impl Eq for BaseField {}

impl BaseField {
    /// Builds F_{p^e}. With `poly = None` the lexicographically smallest monic
    /// irreducible of degree `e` over F_p is used.
    pub fn new(p: u64, e: usize, poly: Option<Vec<u32>>, scan_cap: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::BadPoly("base degree e must be at least 1".into()));
        }
        let q = (p as u128)
            .checked_pow(e as u32)
            .filter(|&q| q <= u32::MAX as u128)
            .ok_or_else(|| Error::Overflow(format!("q = {p}^{e} does not fit in 32 bits")))? as u32;
        let prime = PrimeField { p: p as u32 };
        let poly = match poly {
            Some(c) => {
                if c.len() != e + 1 || c[e] != 1 || c.iter().any(|&x| x as u64 >= p) {
                    return Err(Error::BadPoly(format!(
                        "base polynomial must be monic of degree {e} with coefficients below {p}, got {c:?}"
                    )));
                }
                if !poly::is_irreducible(&prime, &c) {
                    return Err(Error::Reducible(c));
                }
                c
            }
            None => poly::smallest_irreducible(&prime, e, scan_cap)
                .ok_or_else(|| Error::Overflow(format!("no irreducible of degree {e} over F_{p} within scan cap")))?,
        };
        let mut field = BaseField { prime, e, q, poly, tables: None };
        if e > 1 && q <= TABLE_LIMIT {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.prime.p
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn poly(&self) -> &[u32] {
        &self.poly
    }

    pub fn is_odd(&self) -> bool {
        self.prime.p != 2
    }

    /// Element with the given canonical code.
    pub fn elem(&self, code: u32) -> Result<Fq> {
        if code >= self.q {
            return Err(Error::Parse(format!("element code {code} out of range for F_{}", self.q)));
        }
        Ok(Fq(code))
    }

    /// Image of an integer under Z -> F_p -> F_q.
    pub fn from_int(&self, v: i64) -> Fq {
        Fq(v.rem_euclid(self.prime.p as i64) as u32)
    }

    pub fn digits(&self, a: Fq) -> Vec<u32> {
        let p = self.prime.p;
        let mut x = a.0;
        (0..self.e)
            .map(|_| {
                let d = x % p;
                x /= p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, d: &[u32]) -> Fq {
        let p = self.prime.p;
        Fq(d.iter().rev().fold(0u32, |acc, &c| acc * p + c))
    }

    /// Position of `a` in lexicographic order of its coordinate vector
    /// (constant coefficient most significant).
    pub fn lex_rank(&self, a: Fq) -> u32 {
        if self.e == 1 {
            return a.0;
        }
        let p = self.prime.p;
        self.digits(a).iter().fold(0u32, |acc, &c| acc * p + c)
    }

    pub fn from_lex_rank(&self, r: u32) -> Fq {
        if self.e == 1 {
            return Fq(r);
        }
        let p = self.prime.p;
        let mut d = vec![0u32; self.e];
        let mut x = r;
        for i in (0..self.e).rev() {
            d[i] = x % p;
            x /= p;
        }
        self.from_digits(&d)
    }

    /// All elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.q).map(Fq)
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as usize;
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        let mut neg = vec![0; q];
        let mut inv = vec![0; q];
        for a in 0..q {
            neg[a] = self.neg_slow(Fq(a as u32)).0;
            for b in 0..q {
                add[a * q + b] = self.add_slow(Fq(a as u32), Fq(b as u32)).0;
                let m = self.mul_slow(Fq(a as u32), Fq(b as u32)).0;
                mul[a * q + b] = m;
                if m == 1 {
                    inv[a] = b as u32;
                }
            }
        }
        Tables { add, mul, neg, inv }
    }

    fn add_slow(&self, a: Fq, b: Fq) -> Fq {
        let pf = self.prime;
        let d: Vec<u32> = self.digits(a).iter().zip(self.digits(b)).map(|(&x, y)| pf.add(x, y)).collect();
        self.from_digits(&d)
    }

    fn neg_slow(&self, a: Fq) -> Fq {
        let pf = self.prime;
        let d: Vec<u32> = self.digits(a).iter().map(|&x| pf.sub(0, x)).collect();
        self.from_digits(&d)
    }

    fn mul_slow(&self, a: Fq, b: Fq) -> Fq {
        let pf = self.prime;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u32; 2 * self.e - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = pf.add(prod[i + j], pf.mul(x, y));
            }
        }
        // reduce by the monic base polynomial
        for top in (self.e..prod.len()).rev() {
            let c = prod[top];
            if c != 0 {
                for i in 0..self.e {
                    prod[top - self.e + i] = pf.sub(prod[top - self.e + i], pf.mul(c, self.poly[i]));
                }
                prod[top] = 0;
            }
        }
        self.from_digits(&prod[..self.e])
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if self.e == 1 {
            let s = a.0 as u64 + b.0 as u64;
            let p = self.prime.p as u64;
            return Fq(if s >= p { s - p } else { s } as u32);
        }
        match &self.tables {
            Some(t) => Fq(t.add[a.0 as usize * self.q as usize + b.0 as usize]),
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        if self.e == 1 {
            return Fq(if a.0 == 0 { 0 } else { self.prime.p - a.0 });
        }
        match &self.tables {
            Some(t) => Fq(t.neg[a.0 as usize]),
            None => self.neg_slow(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if self.e == 1 {
            return Fq((a.0 as u64 * b.0 as u64 % self.prime.p as u64) as u32);
        }
        match &self.tables {
            Some(t) => Fq(t.mul[a.0 as usize * self.q as usize + b.0 as usize]),
            None => self.mul_slow(a, b),
        }
    }

    pub fn pow(&self, a: Fq, mut e: u64) -> Fq {
        let mut result = Fq::ONE;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        result
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a.is_zero() {
            return None;
        }
        if let Some(t) = &self.tables {
            return Some(Fq(t.inv[a.0 as usize]));
        }
        Some(self.pow(a, self.q as u64 - 2))
    }

    /// Euler's criterion; zero counts as a square. Always true in characteristic 2.
    pub fn is_square(&self, a: Fq) -> bool {
        if a.is_zero() || !self.is_odd() {
            return true;
        }
        self.pow(a, (self.q as u64 - 1) / 2) == Fq::ONE
    }

    /// Square root in odd characteristic. Of the two roots the one with the
    /// lexicographically smaller coordinate vector is returned.
    pub fn sqrt(&self, a: Fq) -> Result<Fq> {
        if !self.is_odd() {
            return Err(Error::CharTwo);
        }
        if a.is_zero() {
            return Ok(Fq::ZERO);
        }
        if !self.is_square(a) {
            return Err(Error::NonSquare);
        }
        let root = if self.q < SQRT_SCAN_LIMIT {
            (0..self.q).map(|r| self.from_lex_rank(r)).find(|&s| self.mul(s, s) == a).ok_or(Error::NonSquare)?
        } else {
            self.tonelli_shanks(a)
        };
        let other = self.neg(root);
        Ok(if self.lex_rank(other) < self.lex_rank(root) { other } else { root })
    }

    /// Tonelli-Shanks in the cyclic group F_q^x; `a` must be a nonzero square.
    fn tonelli_shanks(&self, a: Fq) -> Fq {
        let mut odd = self.q as u64 - 1;
        let mut s = 0u32;
        while odd.is_multiple_of(2) {
            odd /= 2;
            s += 1;
        }
        let z = (2..self.q).map(Fq).find(|&z| !self.is_square(z)).expect("odd field has a nonsquare");
        let mut m = s;
        let mut c = self.pow(z, odd);
        let mut t = self.pow(a, odd);
        let mut r = self.pow(a, odd.div_ceil(2));
        while t != Fq::ONE {
            let mut i = 0;
            let mut t2 = t;
            while t2 != Fq::ONE {
                t2 = self.mul(t2, t2);
                i += 1;
            }
            let b = self.pow(c, 1u64 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        r
    }
}

impl Arith for BaseField {
    type El = Fq;

    fn zero(&self) -> Fq {
        Fq::ZERO
    }
    fn one(&self) -> Fq {
        Fq::ONE
    }
    fn add(&self, a: Fq, b: Fq) -> Fq {
        BaseField::add(self, a, b)
    }
    fn sub(&self, a: Fq, b: Fq) -> Fq {
        BaseField::sub(self, a, b)
    }
    fn mul(&self, a: Fq, b: Fq) -> Fq {
        BaseField::mul(self, a, b)
    }
    fn inv(&self, a: Fq) -> Fq {
        BaseField::inv(self, a).expect("inverse of zero")
    }
    fn order(&self) -> u64 {
        self.q as u64
    }
    fn elem_at_lex(&self, i: u64) -> Fq {
        self.from_lex_rank(i as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64, e: usize) -> BaseField {
        BaseField::new(p, e, None, 1 << 24).unwrap()
    }

    #[test]
    fn rejects_composite_modulus() {
        assert_eq!(BaseField::new(4, 1, None, 1 << 24), Err(Error::NotPrime(4)));
    }

    #[test]
    fn rejects_reducible_base_poly() {
        // y^2 + 1 = (y+1)^2 over F_2
        assert_eq!(BaseField::new(2, 2, Some(vec![1, 0, 1]), 1 << 24), Err(Error::Reducible(vec![1, 0, 1])));
    }

    #[test]
    fn f4_tables_match_slow_path() {
        let k = f(2, 2);
        assert_eq!(k.poly(), &[1, 1, 1]);
        for a in k.elements() {
            for b in k.elements() {
                assert_eq!(k.mul(a, b), k.mul_slow(a, b));
                assert_eq!(k.add(a, b), k.add_slow(a, b));
            }
            if !a.is_zero() {
                assert_eq!(k.mul(a, k.inv(a).unwrap()), Fq::ONE);
            }
        }
    }

    #[test]
    fn sqrt_examples() {
        let k = f(7, 1);
        assert_eq!(k.sqrt(Fq(0)), Ok(Fq(0)));
        assert_eq!(k.sqrt(Fq(1)), Ok(Fq(1)));
        assert_eq!(k.sqrt(Fq(2)), Ok(Fq(3)));
        assert_eq!(f(3, 1).sqrt(Fq(2)), Err(Error::NonSquare));
        assert_eq!(f(2, 3).sqrt(Fq(1)), Err(Error::CharTwo));
    }

    #[test]
    fn sqrt_exhaustive_small_fields() {
        for (p, e) in [(3, 1), (5, 1), (11, 1), (3, 2), (5, 2)] {
            let k = f(p, e);
            let squares: std::collections::BTreeSet<Fq> = k.elements().map(|x| k.mul(x, x)).collect();
            for a in k.elements() {
                match k.sqrt(a) {
                    Ok(s) => {
                        assert_eq!(k.mul(s, s), a);
                        assert!(squares.contains(&a));
                    }
                    Err(Error::NonSquare) => assert!(!squares.contains(&a)),
                    Err(other) => panic!("{other}"),
                }
            }
        }
    }

    #[test]
    fn tonelli_shanks_agrees_with_scan() {
        for p in [7u64, 13, 17, 41, 97, 65537] {
            let k = f(p, 1);
            for a in (1..p.min(500)).map(|a| Fq(a as u32)) {
                if k.is_square(a) {
                    let r = k.tonelli_shanks(a);
                    assert_eq!(k.mul(r, r), a);
                }
            }
        }
        // above the scan limit the tie-break still picks the smaller root
        let k = f(65537, 1);
        let s = k.sqrt(Fq(4)).unwrap();
        assert_eq!(s, Fq(2));
    }
}
