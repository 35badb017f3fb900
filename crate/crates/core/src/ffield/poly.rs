//! Dense univariate polynomials over a finite field, stored constant term first.
//!
//! Only what field construction needs: reduction, gcd, and Rabin's
//! irreducibility test.

pub(crate) trait Arith {
    type El: Copy + Eq + std::fmt::Debug;

    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn add(&self, a: Self::El, b: Self::El) -> Self::El;
    fn sub(&self, a: Self::El, b: Self::El) -> Self::El;
    fn mul(&self, a: Self::El, b: Self::El) -> Self::El;
    /// Inverse of a nonzero element.
    fn inv(&self, a: Self::El) -> Self::El;
    /// Number of elements.
    fn order(&self) -> u64;
    /// The `i`-th element in lexicographic scan order, `0 <= i < order()`.
    fn elem_at_lex(&self, i: u64) -> Self::El;
}

fn trim<F: Arith>(f: &F, a: &mut Vec<F::El>) {
    while a.last().is_some_and(|&c| c == f.zero()) {
        a.pop();
    }
}

fn rem<F: Arith>(f: &F, a: &[F::El], m: &[F::El]) -> Vec<F::El> {
    let mut r = a.to_vec();
    trim(f, &mut r);
    let dm = m.len() - 1;
    let lead_inv = f.inv(m[dm]);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = f.mul(r[top], lead_inv);
        let shift = top - dm;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, mi));
        }
        trim(f, &mut r);
    }
    r
}

fn mul_mod<F: Arith>(f: &F, a: &[F::El], b: &[F::El], m: &[F::El]) -> Vec<F::El> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![f.zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = f.add(prod[i + j], f.mul(x, y));
        }
    }
    rem(f, &prod, m)
}

fn pow_mod<F: Arith>(f: &F, base: &[F::El], mut e: u64, m: &[F::El]) -> Vec<F::El> {
    let mut result = vec![f.one()];
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(f, &result, &b, m);
        }
        b = mul_mod(f, &b, &b, m);
        e >>= 1;
    }
    result
}

fn gcd<F: Arith>(f: &F, a: &[F::El], b: &[F::El]) -> Vec<F::El> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(f, &mut a);
    trim(f, &mut b);
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    a
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
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

/// Rabin's test. `m` must be monic of degree at least 1.
pub(crate) fn is_irreducible<F: Arith>(f: &F, m: &[F::El]) -> bool {
    let d = m.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let q = f.order();
    let x = vec![f.zero(), f.one()];
    // frob[k] = x^(q^k) mod m
    let mut frob = Vec::with_capacity(d + 1);
    frob.push(rem(f, &x, m));
    for k in 1..=d {
        let next = pow_mod(f, &frob[k - 1], q, m);
        frob.push(next);
    }
    if frob[d] != frob[0] {
        return false;
    }
    for r in prime_divisors(d as u64) {
        let k = d / r as usize;
        let mut h = frob[k].clone();
        if h.len() < 2 {
            h.resize(2, f.zero());
        }
        h[1] = f.sub(h[1], f.one());
        trim(f, &mut h);
        let g = gcd(f, &h, m);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Smallest monic irreducible of degree `d` in lexicographic order of the
/// coefficient list written constant term first.
pub(crate) fn smallest_irreducible<F: Arith>(f: &F, d: usize, scan_cap: u64) -> Option<Vec<F::El>> {
    let q = f.order();
    let total = (q as u128).checked_pow(d as u32)?;
    let limit = total.min(scan_cap as u128) as u64;
    for t in 0..limit {
        let mut coeffs = vec![f.zero(); d + 1];
        let mut rest = t;
        // c_0 is the most significant digit
        for i in (0..d).rev() {
            coeffs[i] = f.elem_at_lex(rest % q);
            rest /= q;
        }
        coeffs[d] = f.one();
        if is_irreducible(f, &coeffs) {
            return Some(coeffs);
        }
    }
    None
}
