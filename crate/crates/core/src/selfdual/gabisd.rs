//! Self-dualizing `G_{n/2}` for even `n`.
//!
//! Every proper isometry taking `G_{n/2}` to its dual has the form
//! `C ↦ X_{i,j} C Y_{h,j}` with
//!
//! ```text
//! X_{i,j} = T A^{n/2} A^j S^i,    Y_{h,j} = S^h A^{-j} T^{-1}.
//! ```
//!
//! If both are symmetric with square determinant, writing `X = P^T P` and
//! `Y = Q Q^T` makes `P G_{n/2} Q` self-dual. Such a triple exists exactly
//! when `n = 2 (mod 4)` and `q = 3 (mod 4)`; the canonical one is
//! `(i, h, j) = (q^{n/2} + 1, 1, 0)`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{eqsd_check, factor_symmetric};
use crate::error::{Error, Result};
use crate::ffield::FieldCtx;
use crate::gabidulin::GabidulinCtx;
use crate::matfq::{MatFq, MatJson};
use crate::rankcode::{CodeJson, Limits, RankMetricCode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleParams {
    pub i: u64,
    pub h: u64,
    pub j: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfDualCertificate {
    pub params: TripleParams,
    pub a_sym: MatFq,
    pub b_sym: MatFq,
    pub p: MatFq,
    pub q: MatFq,
    pub code: RankMetricCode,
}

#[derive(Serialize, Deserialize)]
struct CertJson {
    params: TripleParams,
    #[serde(rename = "A_sym")]
    a_sym: MatJson,
    #[serde(rename = "B_sym")]
    b_sym: MatJson,
    #[serde(rename = "P")]
    p: MatJson,
    #[serde(rename = "Q")]
    q: MatJson,
    code: CodeJson,
}

/// Outcome of the exhaustive search for a valid `(i, h, j)`.
///
/// Validity of `X_{i,j}` and of `Y_{h,j}` is independent, so the `n (q^n-1)^2`
/// triples are counted from `2 n (q^n - 1)` matrix tests.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleScan {
    pub triples: u128,
    pub valid_triples: u128,
    /// Per `j`: the number of `i` with `X_{i,j}` symmetric of square determinant.
    pub valid_x: Vec<u64>,
    /// Per `j`: the number of `h` with `Y_{h,j}` symmetric of square determinant.
    pub valid_y: Vec<u64>,
    /// Per `j`: the number of `i` with `X_{i,j}` symmetric (any determinant).
    pub symmetric_x: Vec<u64>,
    pub symmetric_y: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Impossibility {
    pub reason: String,
    pub scan: Option<TripleScan>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selfdualization {
    Certificate(Box<SelfDualCertificate>),
    Impossible(Impossibility),
}

fn even_n(g: &GabidulinCtx) -> Result<usize> {
    let n = g.n();
    if n % 2 == 1 {
        return Err(Error::OddN(n));
    }
    Ok(n)
}

pub fn x_matrix(g: &GabidulinCtx, i: u64, j: usize) -> MatFq {
    let f = g.field();
    let half = g.n() / 2;
    g.gram().mul(f, &g.shift_pow((half + j) as i64)).mul(f, &g.singer_pow(i))
}

pub fn y_matrix(g: &GabidulinCtx, h: u64, j: usize) -> MatFq {
    let f = g.field();
    g.singer_pow(h).mul(f, &g.shift_pow(-(j as i64))).mul(f, g.gram_inv())
}

/// Whether `det X_{i,j}` and `det Y_{h,j}` are squares. The closed form
/// (`det T` is a nonsquare and `det A = -1`) is checked against the
/// determinants themselves.
pub fn det_square_xy(g: &GabidulinCtx, i: u64, h: u64, j: usize) -> Result<(bool, bool)> {
    let n = even_n(g)?;
    let f = g.field();
    if !f.is_odd() {
        return Err(Error::CharTwo);
    }
    let signed = |e: usize, k: u64| {
        let d = f.pow(g.singer_det(), k);
        if e % 2 == 1 {
            f.neg(d)
        } else {
            d
        }
    };
    let x_closed = !f.is_square(signed(n / 2 + j, i));
    let y_closed = !f.is_square(signed(j, h));
    let x_direct = x_matrix(g, i, j).is_square_det(f)?;
    let y_direct = y_matrix(g, h, j).is_square_det(f)?;
    assert_eq!(x_closed, x_direct, "det X_{{{i},{j}}} square test");
    assert_eq!(y_closed, y_direct, "det Y_{{{h},{j}}} square test");
    Ok((x_direct, y_direct))
}

/// Exhaustive search for triples with both matrices symmetric of square
/// determinant. Fails with `TooLarge` when `2 n (q^n - 1)` exceeds the cap.
pub fn triple_scan(g: &GabidulinCtx, limits: &Limits) -> Result<TripleScan> {
    let n = even_n(g)?;
    let f = g.field();
    if !f.is_odd() {
        return Err(Error::CharTwo);
    }
    let order = g.ctx().qn() - 1;
    let work = 2 * n as u128 * order as u128;
    if work > limits.codewords as u128 {
        return Err(Error::TooLarge { count: work, cap: limits.codewords });
    }
    let mut powers = Vec::with_capacity(order as usize);
    let mut s = MatFq::identity(n);
    for _ in 0..order {
        powers.push(s.clone());
        s = s.mul(f, g.singer());
    }
    let half = n / 2;
    // (symmetric, square det) counts for one side
    let count = |mats: Vec<MatFq>| -> (u64, u64) {
        mats.par_iter()
            .map(|m| if m.is_symmetric() { (1, m.is_square_det(f).expect("invertible") as u64) } else { (0, 0) })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    };
    let mut scan = TripleScan {
        triples: n as u128 * order as u128 * order as u128,
        valid_triples: 0,
        valid_x: Vec::with_capacity(n),
        valid_y: Vec::with_capacity(n),
        symmetric_x: Vec::with_capacity(n),
        symmetric_y: Vec::with_capacity(n),
    };
    for j in 0..n {
        let left = g.gram().mul(f, &g.shift_pow((half + j) as i64));
        let right = g.shift_pow(-(j as i64)).mul(f, g.gram_inv());
        let (sx, vx) = count(powers.iter().map(|s| left.mul(f, s)).collect());
        let (sy, vy) = count(powers.iter().map(|s| s.mul(f, &right)).collect());
        scan.symmetric_x.push(sx);
        scan.valid_x.push(vx);
        scan.symmetric_y.push(sy);
        scan.valid_y.push(vy);
        scan.valid_triples += vx as u128 * vy as u128;
    }
    Ok(scan)
}

fn congruence_reason(q: u64, n: usize) -> Option<String> {
    match (n % 4 == 2, q % 4 == 3) {
        (true, true) => None,
        (false, true) => Some(format!("n = {n} is divisible by 4")),
        (true, false) => Some(format!("q = {q} is 1 mod 4")),
        (false, false) => Some(format!("q = {q} is 1 mod 4 and n = {n} is divisible by 4")),
    }
}

/// Builds a self-dual code isometric to `G_{n/2}`, or explains why none is
/// reachable this way. The exhaustive triple scan is attached to an
/// impossibility when it fits under `limits`.
pub fn gabisd_selfdualize(g: &GabidulinCtx, limits: &Limits) -> Result<Selfdualization> {
    let n = even_n(g)?;
    let q = g.q();
    if !g.field().is_odd() {
        return Ok(Selfdualization::Impossible(Impossibility {
            reason: "characteristic 2: the all-ones matrix lies in the dual of every self-orthogonal code, \
                     so no self-dual MRD code exists"
                .into(),
            scan: None,
        }));
    }
    if let Some(reason) = congruence_reason(q, n) {
        let scan = match triple_scan(g, limits) {
            Ok(s) => Some(s),
            Err(Error::TooLarge { .. }) => None,
            Err(e) => return Err(e),
        };
        if let Some(s) = &scan {
            if s.valid_triples != 0 {
                return Err(Error::Invariant(format!("{} valid triples despite {reason}", s.valid_triples)));
            }
        }
        return Ok(Selfdualization::Impossible(Impossibility { reason, scan }));
    }
    let params = TripleParams { i: q.pow(n as u32 / 2) + 1, h: 1, j: 0 };
    Ok(Selfdualization::Certificate(Box::new(certify(g, params)?)))
}

/// Certificate for a given triple; fails unless the triple is valid.
pub fn certify(g: &GabidulinCtx, params: TripleParams) -> Result<SelfDualCertificate> {
    let f = g.field();
    let TripleParams { i, h, j } = params;
    let a_sym = x_matrix(g, i, j);
    let b_sym = y_matrix(g, h, j);
    if !a_sym.is_symmetric() || !b_sym.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if det_square_xy(g, i, h, j)? != (true, true) {
        return Err(Error::NonSquareDet);
    }
    let gab = g.code(g.n() / 2)?;
    if !eqsd_check(&gab, &a_sym, &b_sym)? {
        return Err(Error::Invariant("dual(G) = X G Y".into()));
    }
    let p = factor_symmetric(f, &a_sym)?.transpose();
    let q = factor_symmetric(f, &b_sym)?;
    let code = gab.sandwich(&p, &q)?;
    let cert = SelfDualCertificate { params, a_sym, b_sym, p, q, code };
    cert.verify()?;
    Ok(cert)
}

impl SelfDualCertificate {
    /// Named checks, each recomputed from the certificate data alone.
    pub fn checks(&self) -> Result<Vec<(&'static str, bool)>> {
        let f = self.code.field();
        let (m, n) = self.code.shape();
        let mut out = vec![
            ("A_sym = P^T P", self.p.transpose().mul(f, &self.p) == self.a_sym),
            ("B_sym = Q Q^T", self.q.mul(f, &self.q.transpose()) == self.b_sym),
            ("A_sym, B_sym symmetric", self.a_sym.is_symmetric() && self.b_sym.is_symmetric()),
            (
                "det A_sym, det B_sym nonzero squares",
                matches!(self.a_sym.is_square_det(f), Ok(true)) && matches!(self.b_sym.is_square_det(f), Ok(true)),
            ),
            ("code is self-dual", self.code.is_self_dual()),
        ];
        if m != n || n % 2 == 1 {
            out.push(("code is n x n with n even", false));
            return Ok(out);
        }
        let g = GabidulinCtx::new(self.code.ctx().clone())?;
        let TripleParams { i, h, j } = self.params;
        out.push(("A_sym = T A^{n/2+j} S^i", x_matrix(&g, i, j) == self.a_sym));
        out.push(("B_sym = S^h A^{-j} T^{-1}", y_matrix(&g, h, j) == self.b_sym));
        let gab = g.code(n / 2)?;
        out.push(("dual(G) = A_sym G B_sym", gab.dual() == gab.sandwich(&self.a_sym, &self.b_sym)?));
        out.push(("code = P G Q", gab.sandwich(&self.p, &self.q)? == self.code));
        Ok(out)
    }

    pub fn verify(&self) -> Result<()> {
        match self.checks()?.into_iter().find(|(_, ok)| !ok) {
            Some((what, _)) => Err(Error::Invariant(format!("certificate: {what}"))),
            None => Ok(()),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let j = CertJson {
            params: self.params,
            a_sym: self.a_sym.to_json(),
            b_sym: self.b_sym.to_json(),
            p: self.p.to_json(),
            q: self.q.to_json(),
            code: self.code.to_json(),
        };
        serde_json::to_value(j).expect("certificate serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let j: CertJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let code = RankMetricCode::from_json(&j.code)?;
        let f = code.field();
        Ok(SelfDualCertificate {
            params: j.params,
            a_sym: MatFq::from_json(f, &j.a_sym)?,
            b_sym: MatFq::from_json(f, &j.b_sym)?,
            p: MatFq::from_json(f, &j.p)?,
            q: MatFq::from_json(f, &j.q)?,
            code,
        })
    }
}

/// Convenience: context for `(q, n)` and the corresponding selfdualization.
pub fn selfdualize_q_n(q: u64, n: usize, limits: &Limits) -> Result<Selfdualization> {
    let g = GabidulinCtx::new(Arc::new(FieldCtx::for_q(q, n)?))?;
    gabisd_selfdualize(&g, limits)
}
