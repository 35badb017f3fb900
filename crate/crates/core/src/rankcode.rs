//! Linear rank-metric codes in k^{m x n} (m >= n) and their linear isometries.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{BaseField, CtxJson, FieldCtx, Fq};
use crate::matfq::{dot, rank_in_place, rref_in_place, MatFq, MatJson};

/// Enumeration budgets. Operations exceeding them fail with [`Error::TooLarge`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Projective codewords ranked by a distance computation.
    pub codewords: u64,
    /// Group elements tested by an exhaustive equivalence search.
    pub group_pairs: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { codewords: 1 << 24, group_pairs: 1 << 22 }
    }
}

impl Limits {
    pub fn uniform(max_work: u64) -> Self {
        Limits { codewords: max_work, group_pairs: max_work }
    }
}

/// A k-linear subspace of k^{m x n}, stored with a basis and the RREF of the
/// vectorized basis.
#[derive(Clone, Debug)]
pub struct RankMetricCode {
    ctx: Arc<FieldCtx>,
    m: usize,
    n: usize,
    gens: Vec<MatFq>,
    canon: MatFq,
}

impl PartialEq for RankMetricCode {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.n == other.n && self.canon == other.canon && self.ctx == other.ctx
    }
}

impl Eq for RankMetricCode {}

impl RankMetricCode {
    /// Span of `matrices`; a maximal independent subset (in input order) is kept as the basis.
    pub fn new(ctx: Arc<FieldCtx>, m: usize, n: usize, matrices: Vec<MatFq>) -> Result<Self> {
        if m < n {
            return Err(Error::WrongOrientation { m, n });
        }
        if let Some(bad) = matrices.iter().find(|a| a.shape() != (m, n)) {
            return Err(Error::ShapeMismatch(format!(
                "generator of shape {}x{} in a {m}x{n} code",
                bad.rows(),
                bad.cols()
            )));
        }
        let f = ctx.base();
        let mn = m * n;
        let mut gens = Vec::new();
        let mut acc: Vec<Fq> = Vec::new();
        for a in matrices {
            let mut trial = acc.clone();
            trial.extend_from_slice(a.as_slice());
            let rows = gens.len() + 1;
            if rank_in_place(f, &mut trial, rows, mn) == rows {
                acc.extend_from_slice(a.as_slice());
                gens.push(a);
            }
        }
        let l = gens.len();
        let mut canon = acc;
        rref_in_place(f, &mut canon, l, mn);
        let canon = MatFq::from_vec(l, mn, canon)?;
        Ok(RankMetricCode { ctx, m, n, gens, canon })
    }

    pub fn zero(ctx: Arc<FieldCtx>, m: usize, n: usize) -> Result<Self> {
        Self::new(ctx, m, n, Vec::new())
    }

    pub fn full(ctx: Arc<FieldCtx>, m: usize, n: usize) -> Result<Self> {
        let units = (0..m).flat_map(|i| (0..n).map(move |j| MatFq::unit(m, n, i, j))).collect();
        Self::new(ctx, m, n, units)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn field(&self) -> &BaseField {
        self.ctx.base()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn dim(&self) -> usize {
        self.gens.len()
    }

    pub fn gens(&self) -> &[MatFq] {
        &self.gens
    }

    /// Reduced row echelon form of the vectorized generator matrix.
    pub fn canon(&self) -> &MatFq {
        &self.canon
    }

    pub fn contains(&self, a: &MatFq) -> bool {
        if a.shape() != (self.m, self.n) {
            return false;
        }
        let f = self.field();
        let mn = self.m * self.n;
        let mut v = a.as_slice().to_vec();
        for r in 0..self.canon.rows() {
            let row = self.canon.row(r);
            let piv = row.iter().position(|x| !x.is_zero()).expect("canonical rows are nonzero");
            let c = v[piv];
            if !c.is_zero() {
                for j in piv..mn {
                    v[j] = f.sub(v[j], f.mul(c, row[j]));
                }
            }
        }
        v.iter().all(|x| x.is_zero())
    }

    fn to_matrix(&self, v: Vec<Fq>) -> MatFq {
        MatFq::from_vec(self.m, self.n, v).expect("vectorized shape")
    }

    /// Orthogonal complement under `<A, B> = trace(A B^T)`.
    pub fn dual(&self) -> RankMetricCode {
        let kernel = self.canon.kernel(self.field());
        let gens: Vec<MatFq> = kernel.into_iter().map(|v| self.to_matrix(v)).collect();
        let d = RankMetricCode::new(self.ctx.clone(), self.m, self.n, gens).expect("kernel shape");
        assert_eq!(self.dim() + d.dim(), self.m * self.n, "dim C + dim C^perp = mn");
        d
    }

    /// Minimum rank of a nonzero codeword, over one representative per scalar class.
    pub fn min_distance(&self, limits: &Limits) -> Result<usize> {
        let l = self.dim();
        if l == 0 {
            return Err(Error::EmptyCode);
        }
        let f = self.field();
        let q = f.q() as u64;
        let count = ((q as u128).pow(l as u32) - 1) / (q as u128 - 1);
        if count > limits.codewords as u128 {
            return Err(Error::TooLarge { count, cap: limits.codewords });
        }
        let (m, n) = (self.m, self.n);
        let mn = m * n;
        // scaled[s][c] = c * gens[s]
        let scaled: Vec<Vec<Vec<Fq>>> =
            self.gens.iter().map(|g| f.elements().map(|c| g.scale(f, c).into_vec()).collect()).collect();

        const CHUNK: u64 = 1 << 12;
        let mut tasks = Vec::new();
        for lead in 0..l {
            let total = q.pow((l - 1 - lead) as u32);
            let mut start = 0;
            while start < total {
                tasks.push((lead, start, CHUNK.min(total - start)));
                start += CHUNK;
            }
        }
        let best = AtomicUsize::new(n);
        tasks.par_iter().for_each(|&(lead, start, len)| {
            if best.load(Ordering::Relaxed) == 1 {
                return;
            }
            let free = l - 1 - lead;
            let mut digits = vec![0usize; free];
            let mut rest = start;
            for d in digits.iter_mut() {
                *d = (rest % q) as usize;
                rest /= q;
            }
            let mut word = self.gens[lead].as_slice().to_vec();
            for (k, &d) in digits.iter().enumerate() {
                for (w, &s) in word.iter_mut().zip(&scaled[lead + 1 + k][d]) {
                    *w = f.add(*w, s);
                }
            }
            let mut scratch = vec![Fq::ZERO; mn];
            let mut local = n;
            for step in 0..len {
                if step > 0 {
                    let mut k = 0;
                    loop {
                        let old = digits[k];
                        let new = if old as u64 + 1 == q { 0 } else { old + 1 };
                        let g = &scaled[lead + 1 + k];
                        for ((w, &a), &b) in word.iter_mut().zip(&g[new]).zip(&g[old]) {
                            *w = f.add(*w, f.sub(a, b));
                        }
                        digits[k] = new;
                        if new != 0 {
                            break;
                        }
                        k += 1;
                    }
                }
                scratch.copy_from_slice(&word);
                local = local.min(rank_in_place(f, &mut scratch, m, n));
                if local == 1 {
                    break;
                }
            }
            best.fetch_min(local, Ordering::Relaxed);
        });
        Ok(best.into_inner())
    }

    /// Whether the code meets the Delsarte bound `l = m (n - d + 1)`.
    pub fn is_mrd(&self, limits: &Limits) -> Result<bool> {
        let d = self.min_distance(limits)?;
        Ok(self.dim() == self.m * (self.n - d + 1))
    }

    pub fn is_self_orthogonal(&self) -> bool {
        let f = self.field();
        (0..self.dim())
            .all(|i| (i..self.dim()).all(|j| dot(f, self.gens[i].as_slice(), self.gens[j].as_slice()).is_zero()))
    }

    pub fn is_self_dual(&self) -> bool {
        2 * self.dim() == self.m * self.n && self.is_self_orthogonal()
    }

    pub fn apply(&self, map: &EquivMap) -> Result<RankMetricCode> {
        let f = self.field();
        let (xm, yn) = (map.x.rows(), map.y.rows());
        let ok = match map.kind {
            MapKind::Proper => xm == self.m && yn == self.n,
            MapKind::Improper => self.m == self.n && xm == self.m && yn == self.n,
        };
        if !ok {
            return Err(Error::ShapeMismatch(format!(
                "{:?} map with {xm}x{xm}, {yn}x{yn} factors on a {}x{} code",
                map.kind, self.m, self.n
            )));
        }
        let gens = self.gens.iter().map(|g| map.apply_matrix(f, g)).collect();
        RankMetricCode::new(self.ctx.clone(), self.m, self.n, gens)
    }

    /// Image `X C Y` of the code under arbitrary (not necessarily invertible) factors.
    pub fn sandwich(&self, x: &MatFq, y: &MatFq) -> Result<RankMetricCode> {
        let f = self.field();
        let mut gens = Vec::with_capacity(self.dim());
        for g in &self.gens {
            gens.push(x.checked_mul(f, g)?.checked_mul(f, y)?);
        }
        RankMetricCode::new(self.ctx.clone(), self.m, self.n, gens)
    }

    /// Rows of the reduced echelon form, reshaped to m x n.
    pub fn canonical_gens(&self) -> Vec<MatFq> {
        (0..self.dim())
            .map(|r| MatFq::from_vec(self.m, self.n, self.canon.row(r).to_vec()).expect("row has m n entries"))
            .collect()
    }

    /// Serializes the canonical basis, so equal codes give equal files.
    pub fn to_json(&self) -> CodeJson {
        CodeJson {
            ctx: self.ctx.to_json(),
            m: self.m,
            n: self.n,
            generators: self.canonical_gens().iter().map(MatFq::to_json).collect(),
        }
    }

    pub fn from_json(j: &CodeJson) -> Result<Self> {
        let ctx = Arc::new(FieldCtx::from_json(&j.ctx)?);
        let gens = j.generators.iter().map(|g| MatFq::from_json(ctx.base(), g)).collect::<Result<Vec<_>>>()?;
        RankMetricCode::new(ctx, j.m, j.n, gens)
    }
}

/// Code file format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeJson {
    pub ctx: CtxJson,
    pub m: usize,
    pub n: usize,
    pub generators: Vec<MatJson>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    /// `A -> X A Y`
    Proper,
    /// `A -> X A^T Y` (square matrices only)
    Improper,
}

/// A linear rank isometry `A -> X A Y` or `A -> X A^T Y`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EquivMap {
    pub kind: MapKind,
    pub x: MatFq,
    pub y: MatFq,
}

impl EquivMap {
    pub fn new(f: &BaseField, kind: MapKind, x: MatFq, y: MatFq) -> Result<Self> {
        if !x.is_square() || !y.is_square() {
            return Err(Error::ShapeMismatch("isometry factors must be square".into()));
        }
        if kind == MapKind::Improper && x.rows() != y.rows() {
            return Err(Error::ShapeMismatch("improper isometries need m = n".into()));
        }
        if x.rank(f) < x.rows() || y.rank(f) < y.rows() {
            return Err(Error::Singular);
        }
        Ok(EquivMap { kind, x, y })
    }

    pub fn proper(f: &BaseField, x: MatFq, y: MatFq) -> Result<Self> {
        Self::new(f, MapKind::Proper, x, y)
    }

    pub fn improper(f: &BaseField, x: MatFq, y: MatFq) -> Result<Self> {
        Self::new(f, MapKind::Improper, x, y)
    }

    pub fn identity(m: usize, n: usize) -> Self {
        EquivMap { kind: MapKind::Proper, x: MatFq::identity(m), y: MatFq::identity(n) }
    }

    /// The representative of `(cX, c^{-1}Y)` whose `X` has leading entry 1.
    /// Two maps agree on every matrix iff their normalizations are equal.
    pub fn normalized(&self, f: &BaseField) -> EquivMap {
        let lead = leading_entry(&self.x).expect("X is invertible");
        let c = f.inv(lead).expect("nonzero");
        EquivMap { kind: self.kind, x: self.x.scale(f, c), y: self.y.scale(f, lead) }
    }

    pub fn apply_matrix(&self, f: &BaseField, a: &MatFq) -> MatFq {
        match self.kind {
            MapKind::Proper => self.x.mul(f, a).mul(f, &self.y),
            MapKind::Improper => self.x.mul(f, &a.transpose()).mul(f, &self.y),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, f: &BaseField, other: &EquivMap) -> EquivMap {
        let (x1, y1, x2, y2) = (&self.x, &self.y, &other.x, &other.y);
        match (self.kind, other.kind) {
            (MapKind::Proper, k) => EquivMap { kind: k, x: x1.mul(f, x2), y: y2.mul(f, y1) },
            (MapKind::Improper, k) => EquivMap {
                kind: if k == MapKind::Proper { MapKind::Improper } else { MapKind::Proper },
                x: x1.mul(f, &y2.transpose()),
                y: x2.transpose().mul(f, y1),
            },
        }
    }

    /// `X^T X = a I_m` and `Y Y^T = a^{-1} I_n` for some nonzero `a`.
    pub fn is_inner_preserving(&self, f: &BaseField) -> bool {
        let Some(a) = self.x.transpose().mul(f, &self.x).as_scalar().filter(|a| !a.is_zero()) else {
            return false;
        };
        let a_inv = f.inv(a).expect("nonzero");
        self.y.mul(f, &self.y.transpose()).as_scalar() == Some(a_inv)
    }

    /// Whether `<φ(A), φ(B)> = <A, B>` on all pairs of unit matrices, by
    /// direct computation.
    pub fn preserves_inner_directly(&self, f: &BaseField) -> bool {
        let (m, n) = (self.x.rows(), self.y.rows());
        let images: Vec<MatFq> = (0..m)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| self.apply_matrix(f, &MatFq::unit(m, n, i, j)))
            .collect();
        images.iter().enumerate().all(|(a, ea)| {
            images.iter().enumerate().all(|(b, eb)| {
                let expect = if a == b { Fq::ONE } else { Fq::ZERO };
                dot(f, ea.as_slice(), eb.as_slice()) == expect
            })
        })
    }

    /// `(X^{-T}, Y^{-T})` of the same kind: `φ(C)^⊥ = φ'(C^⊥)`.
    pub fn dual_map(&self, f: &BaseField) -> EquivMap {
        let inv_t = |m: &MatFq| m.inverse(f).expect("isometry factors are invertible").transpose();
        EquivMap { kind: self.kind, x: inv_t(&self.x), y: inv_t(&self.y) }
    }

    /// `X^T X = a I_m` and `Y Y^T = b I_n` for some nonzero `a, b`.
    pub fn is_similarity(&self, f: &BaseField) -> bool {
        let nonzero_scalar = |m: MatFq| m.as_scalar().is_some_and(|c| !c.is_zero());
        nonzero_scalar(self.x.transpose().mul(f, &self.x)) && nonzero_scalar(self.y.mul(f, &self.y.transpose()))
    }
}

fn leading_entry(x: &MatFq) -> Option<Fq> {
    x.as_slice().iter().copied().find(|c| !c.is_zero())
}

/// `GL_m(q)` restricted to leading entry 1, and all of `GL_n(q)`: one pair per map.
fn gl_pair(f: &BaseField, m: usize, n: usize, limits: &Limits, improper: bool) -> Result<(Vec<MatFq>, Vec<MatFq>)> {
    let gl_n = MatFq::general_linear(f, n, limits.group_pairs)?;
    let gl_m = if m == n { gl_n.clone() } else { MatFq::general_linear(f, m, limits.group_pairs)? };
    let gl_m: Vec<MatFq> = gl_m.into_iter().filter(|x| leading_entry(x) == Some(Fq::ONE)).collect();
    let kinds = if improper { 2 } else { 1 };
    let work = gl_m.len() as u128 * gl_n.len() as u128 * kinds;
    if work > limits.group_pairs as u128 {
        return Err(Error::TooLarge { count: work, cap: limits.group_pairs });
    }
    Ok((gl_m, gl_n))
}

/// Test of `X G Y` (or `X G^T Y`) against the parity checks of the target code.
struct Matcher<'a> {
    f: &'a BaseField,
    source: Vec<MatFq>,
    checks: Vec<Vec<Fq>>,
}

impl Matcher<'_> {
    fn maps_into(&self, kind: MapKind, x: &MatFq, y: &MatFq) -> bool {
        self.source.iter().all(|g| {
            let img = match kind {
                MapKind::Proper => x.mul(self.f, g).mul(self.f, y),
                MapKind::Improper => x.mul(self.f, &g.transpose()).mul(self.f, y),
            };
            self.checks.iter().all(|h| dot(self.f, img.as_slice(), h).is_zero())
        })
    }
}

fn matcher<'a>(c: &'a RankMetricCode, d: &'a RankMetricCode) -> Result<Option<Matcher<'a>>> {
    if c.shape() != d.shape() || c.ctx != d.ctx {
        return Err(Error::ShapeMismatch("codes live in different ambient spaces".into()));
    }
    if c.dim() != d.dim() {
        return Ok(None);
    }
    Ok(Some(Matcher { f: c.field(), source: c.gens.clone(), checks: d.canon.kernel(c.field()) }))
}

fn kinds(c: &RankMetricCode, improper_too: bool) -> Vec<MapKind> {
    if improper_too && c.m == c.n {
        vec![MapKind::Proper, MapKind::Improper]
    } else {
        vec![MapKind::Proper]
    }
}

/// Every linear isometry mapping `c` onto `d`, by exhaustive search over
/// `GL_m(q) x GL_n(q)`. Each map is listed once, in normalized form.
/// Proper maps come first, each kind ordered by `X` then `Y`.
pub fn brute_equivalences(
    c: &RankMetricCode,
    d: &RankMetricCode,
    improper_too: bool,
    limits: &Limits,
) -> Result<Vec<EquivMap>> {
    let kinds = kinds(c, improper_too);
    let (gl_m, gl_n) = gl_pair(c.field(), c.m, c.n, limits, kinds.len() == 2)?;
    let Some(mt) = matcher(c, d)? else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for kind in kinds {
        let found: Vec<EquivMap> = gl_m
            .par_iter()
            .flat_map_iter(|x| {
                let mt = &mt;
                gl_n.iter().filter(move |y| mt.maps_into(kind, x, y)).map(move |y| EquivMap {
                    kind,
                    x: x.clone(),
                    y: y.clone(),
                })
            })
            .collect();
        out.extend(found);
    }
    Ok(out)
}

/// Some isometry mapping `c` onto `d`, if one exists (exhaustive search).
pub fn find_equivalence(
    c: &RankMetricCode,
    d: &RankMetricCode,
    improper_too: bool,
    limits: &Limits,
) -> Result<Option<EquivMap>> {
    let kinds = kinds(c, improper_too);
    let (gl_m, gl_n) = gl_pair(c.field(), c.m, c.n, limits, kinds.len() == 2)?;
    let Some(mt) = matcher(c, d)? else {
        return Ok(None);
    };
    for kind in kinds {
        let hit = gl_m.par_iter().find_map_first(|x| {
            gl_n.iter().find(|y| mt.maps_into(kind, x, y)).map(|y| EquivMap { kind, x: x.clone(), y: y.clone() })
        });
        if hit.is_some() {
            return Ok(hit);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(p: u64, n: usize) -> Arc<FieldCtx> {
        Arc::new(FieldCtx::new(p, 1, n, None, None).unwrap())
    }

    fn random_mat(f: &BaseField, rng: &mut impl Rng, r: usize, c: usize) -> MatFq {
        MatFq::random(f, r, c, rng)
    }

    fn random_code(ctx: &Arc<FieldCtx>, rng: &mut impl Rng, m: usize, n: usize, l: usize) -> RankMetricCode {
        let gens = (0..l).map(|_| random_mat(ctx.base(), rng, m, n)).collect();
        RankMetricCode::new(ctx.clone(), m, n, gens).unwrap()
    }

    fn random_invertible(f: &BaseField, rng: &mut impl Rng, n: usize) -> MatFq {
        MatFq::random_invertible(f, n, rng)
    }

    #[test]
    fn construction_examples() {
        let c = ctx(3, 2);
        let f = c.base();
        assert_eq!(RankMetricCode::new(c.clone(), 2, 2, vec![MatFq::zeros(2, 2)]).unwrap().dim(), 0);
        let m = MatFq::from_ints(f, &[&[1, 2], &[0, 1]]);
        let dep = RankMetricCode::new(c.clone(), 2, 2, vec![m.clone(), m.scale(f, Fq(2))]).unwrap();
        assert_eq!(dep.dim(), 1);
        assert_eq!(RankMetricCode::new(c.clone(), 2, 3, vec![]), Err(Error::WrongOrientation { m: 2, n: 3 }));
        assert!(matches!(RankMetricCode::new(c, 3, 2, vec![MatFq::zeros(2, 2)]), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn dual_examples() {
        let c = ctx(3, 1);
        let z = RankMetricCode::zero(c.clone(), 3, 2).unwrap();
        assert_eq!(z.dual(), RankMetricCode::full(c.clone(), 3, 2).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for l in 0..=6 {
            let code = random_code(&c, &mut rng, 3, 2, l);
            assert_eq!(code.dual().dual(), code);
            assert_eq!(code.dim() + code.dual().dim(), 6);
        }
    }

    #[test]
    fn distance_examples() {
        let c = ctx(3, 1);
        let f = c.base();
        let lim = Limits::default();
        let id = RankMetricCode::new(c.clone(), 3, 3, vec![MatFq::identity(3)]).unwrap();
        assert_eq!(id.min_distance(&lim), Ok(3));
        assert_eq!(id.is_mrd(&lim), Ok(false));
        let j = MatFq::from_fn(3, 2, |_, _| Fq::ONE);
        assert_eq!(RankMetricCode::new(c.clone(), 3, 2, vec![j]).unwrap().min_distance(&lim), Ok(1));
        assert_eq!(RankMetricCode::zero(c.clone(), 2, 2).unwrap().min_distance(&lim), Err(Error::EmptyCode));
        let full = RankMetricCode::full(c.clone(), 3, 3).unwrap();
        assert!(matches!(full.min_distance(&Limits::uniform(100)), Err(Error::TooLarge { .. })));
        assert_eq!(full.min_distance(&lim), Ok(1));
        assert_eq!(full.is_mrd(&lim), Ok(true));
        let _ = f;
    }

    // Brute-force oracle: every nonzero codeword, from all q^l coefficient vectors.
    fn oracle_distance(code: &RankMetricCode) -> usize {
        let f = code.field();
        let q = f.q() as u64;
        let l = code.dim();
        (1..q.pow(l as u32))
            .map(|idx| {
                let mut rest = idx;
                let mut word = MatFq::zeros(code.m, code.n);
                for g in code.gens() {
                    word = word.add(f, &g.scale(f, Fq((rest % q) as u32)));
                    rest /= q;
                }
                word.rank(f)
            })
            .min()
            .unwrap()
    }

    #[test]
    fn distance_matches_full_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [2u64, 3, 5] {
            let c = ctx(p, 1);
            for l in 1..=4 {
                let code = random_code(&c, &mut rng, 3, 3, l);
                assert_eq!(code.min_distance(&Limits::default()).unwrap(), oracle_distance(&code));
            }
        }
        let f4 = Arc::new(FieldCtx::new(2, 2, 1, None, None).unwrap());
        for l in 1..=3 {
            let code = random_code(&f4, &mut rng, 3, 2, l);
            assert_eq!(code.min_distance(&Limits::default()).unwrap(), oracle_distance(&code));
        }
    }

    #[test]
    fn self_orthogonality_examples() {
        let c = ctx(3, 1);
        let z = RankMetricCode::zero(c.clone(), 2, 2).unwrap();
        assert!(z.is_self_orthogonal());
        assert!(!z.is_self_dual());
        assert!(!RankMetricCode::full(c, 2, 2).unwrap().is_self_orthogonal());
    }

    #[test]
    fn apply_examples() {
        let c = ctx(3, 1);
        let f = c.base();
        let e12 = RankMetricCode::new(c.clone(), 2, 2, vec![MatFq::unit(2, 2, 0, 1)]).unwrap();
        assert_eq!(e12.apply(&EquivMap::identity(2, 2)).unwrap(), e12);
        let t = EquivMap::improper(f, MatFq::identity(2), MatFq::identity(2)).unwrap();
        let e21 = RankMetricCode::new(c.clone(), 2, 2, vec![MatFq::unit(2, 2, 1, 0)]).unwrap();
        assert_eq!(e12.apply(&t).unwrap(), e21);
        let rect = RankMetricCode::zero(c.clone(), 3, 2).unwrap();
        let t3 = EquivMap::improper(f, MatFq::identity(3), MatFq::identity(3)).unwrap();
        assert!(matches!(rect.apply(&t3), Err(Error::ShapeMismatch(_))));
        assert_eq!(EquivMap::proper(f, MatFq::zeros(2, 2), MatFq::identity(2)), Err(Error::Singular));
    }

    #[test]
    fn dual_commutes_with_isometries() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (m, n) in [(2, 2), (3, 3), (3, 2)] {
            let c = ctx(3, 1);
            let f = c.base();
            for _ in 0..20 {
                let l = rng.gen_range(0..=m * n);
                let code = random_code(&c, &mut rng, m, n, l);
                let x = random_invertible(f, &mut rng, m);
                let y = random_invertible(f, &mut rng, n);
                let lhs = code.apply(&EquivMap::proper(f, x.clone(), y.clone()).unwrap()).unwrap().dual();
                let xi = x.inverse(f).unwrap().transpose();
                let yi = y.inverse(f).unwrap().transpose();
                let rhs = code.dual().apply(&EquivMap::proper(f, xi, yi).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn isometries_preserve_dimension_and_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let c = ctx(3, 1);
        let f = c.base();
        for _ in 0..20 {
            let l = rng.gen_range(1..=4);
            let code = random_code(&c, &mut rng, 3, 3, l);
            let kind = if rng.gen_bool(0.5) { MapKind::Proper } else { MapKind::Improper };
            let map =
                EquivMap::new(f, kind, random_invertible(f, &mut rng, 3), random_invertible(f, &mut rng, 3)).unwrap();
            let img = code.apply(&map).unwrap();
            let lim = Limits::default();
            assert_eq!(img.dim(), code.dim());
            assert_eq!(img.min_distance(&lim), code.min_distance(&lim));
            // Delsarte bound
            let d = code.min_distance(&lim).unwrap();
            assert!(code.dim() <= 3 * (3 - d + 1));
        }
    }

    #[test]
    fn compose_matches_sequential_application() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = ctx(5, 1);
        let f = c.base();
        for k1 in [MapKind::Proper, MapKind::Improper] {
            for k2 in [MapKind::Proper, MapKind::Improper] {
                let a =
                    EquivMap::new(f, k1, random_invertible(f, &mut rng, 3), random_invertible(f, &mut rng, 3)).unwrap();
                let b =
                    EquivMap::new(f, k2, random_invertible(f, &mut rng, 3), random_invertible(f, &mut rng, 3)).unwrap();
                let m = random_mat(f, &mut rng, 3, 3);
                assert_eq!(a.compose(f, &b).apply_matrix(f, &m), a.apply_matrix(f, &b.apply_matrix(f, &m)));
            }
        }
    }

    #[test]
    fn predicates_on_scalar_maps() {
        let c = ctx(7, 1);
        let f = c.base();
        let id = EquivMap::identity(3, 2);
        assert!(id.is_inner_preserving(f));
        assert!(id.is_similarity(f));
        let k = Fq(3);
        let ki = f.inv(k).unwrap();
        let scaled = EquivMap::proper(f, MatFq::scalar(3, k), MatFq::scalar(2, ki)).unwrap();
        assert!(scaled.is_inner_preserving(f));
        let sim = EquivMap::proper(f, MatFq::scalar(3, k), MatFq::identity(2)).unwrap();
        assert!(sim.is_similarity(f));
        assert!(!sim.is_inner_preserving(f));
    }

    #[test]
    fn inner_preservation_criterion_q3() {
        let c = ctx(3, 1);
        let f = c.base();
        let gl = MatFq::general_linear(f, 2, 1 << 10).unwrap();
        let mut hits = 0;
        for x in &gl {
            for y in &gl {
                let map = EquivMap::proper(f, x.clone(), y.clone()).unwrap();
                assert_eq!(map.is_inner_preserving(f), map.preserves_inner_directly(f));
                hits += map.is_inner_preserving(f) as usize;
            }
        }
        // X orthogonal up to a, Y = a^{-1}-orthogonal: 8 * 8 pairs with a = 1, 8 * 8 with a = 2
        assert_eq!(hits, 128);
    }

    #[test]
    fn dual_map_for_both_kinds() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let c = ctx(5, 1);
        let f = c.base();
        for kind in [MapKind::Proper, MapKind::Improper] {
            for _ in 0..10 {
                let l = rng.gen_range(0..=9);
                let code = random_code(&c, &mut rng, 3, 3, l);
                let map = EquivMap::new(f, kind, random_invertible(f, &mut rng, 3), random_invertible(f, &mut rng, 3))
                    .unwrap();
                assert_eq!(code.apply(&map).unwrap().dual(), code.dual().apply(&map.dual_map(f)).unwrap());
            }
        }
    }

    #[test]
    fn brute_search_contains_known_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let c = ctx(3, 1);
        let f = c.base();
        let code = random_code(&c, &mut rng, 2, 2, 2);
        let map = EquivMap::proper(f, random_invertible(f, &mut rng, 2), random_invertible(f, &mut rng, 2)).unwrap();
        let img = code.apply(&map).unwrap();
        let all = brute_equivalences(&code, &img, true, &Limits::default()).unwrap();
        assert!(all.contains(&map.normalized(f)));
        assert!(all.iter().all(|g| code.apply(g).unwrap() == img));
        assert!(find_equivalence(&code, &img, false, &Limits::default()).unwrap().is_some());
        let other = random_code(&c, &mut rng, 2, 2, 1);
        assert!(brute_equivalences(&code, &other, true, &Limits::default()).unwrap().is_empty());
        assert!(matches!(brute_equivalences(&code, &img, true, &Limits::uniform(1000)), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn code_json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let c = Arc::new(FieldCtx::new(3, 2, 2, None, None).unwrap());
        let code = random_code(&c, &mut rng, 3, 2, 3);
        let text = serde_json::to_string(&code.to_json()).unwrap();
        let back = RankMetricCode::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, code);
    }
}
