use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::{Report, Status};
use crate::error::{Error, Result};
use crate::ffield::FieldCtx;
use crate::gabidulin::GabidulinCtx;
use crate::matfq::MatFq;
use crate::rankcode::{brute_equivalences, find_equivalence, EquivMap, Limits, MapKind, RankMetricCode};
use crate::selfdual::{self, Selfdualization};

const SEED: u64 = 0x6d72_646b;

fn status(r: Result<bool>, why_not: &str) -> Status {
    match r {
        Ok(true) => Status::Pass,
        Ok(false) => Status::Fail(why_not.into()),
        Err(e @ Error::TooLarge { .. }) => Status::Skipped(e.to_string()),
        Err(e) => Status::Fail(e.to_string()),
    }
}

fn exhaustive_note(exhaustive: bool) -> Option<String> {
    Some(if exhaustive { "all powers of S".into() } else { "sampled powers of S".into() })
}

/// Appends one entry per check, in a fixed order. Checks whose hypotheses do
/// not hold for `(q, n)` are recorded as skipped.
pub fn verify_all(r: &mut Report, ctx: Arc<FieldCtx>, ell: Option<usize>, limits: &Limits) {
    let q = ctx.q() as u64;
    let n = ctx.n();
    let odd = ctx.base().is_odd();
    let even_n = n.is_multiple_of(2);
    let ell = ell.unwrap_or((n / 2).max(1));

    let mut built = None;
    r.check(
        "structure",
        "Γ normal, T symmetric invertible, A = ε_Γ(Γ^[1]) the shift, S of order q^n-1, det S primitive",
        || match GabidulinCtx::new(ctx.clone()) {
            Ok(g) => {
                built = Some(g);
                (Status::Pass, None)
            }
            Err(e) => (Status::Fail(e.to_string()), None),
        },
    );
    let Some(g) = built else { return };
    let exps = g.exponents(limits.codewords);
    let skip_odd_n = || (Status::Skipped("n is odd".into()), None);

    r.check("basechange", "ε_Γ(αΓ)^T = ε_{Γ*}(αΓ*) = T ε_Γ(αΓ) T^{-1}", || {
        (status(Ok(g.check_basechange(&exps)), "identity fails for some α"), exhaustive_note(exps.exhaustive))
    });
    r.check("field-algebra", "𝒦 = ε_Γ(KΓ) is an n-dimensional subalgebra isomorphic to K", || {
        (status(g.check_field_algebra(&exps), "not a field image"), exhaustive_note(exps.exhaustive))
    });
    r.check("frobenius-conjugation", "A B A^{-1} = B^q for B in 𝒦", || {
        (
            status(Ok(g.check_frobenius_conjugation(&exps)), "conjugation is not Frobenius"),
            exhaustive_note(exps.exhaustive),
        )
    });
    r.check("normalizer", "the normalizer of 𝒦^× in GL_n(q) is ⟨A⟩𝒦^×", || {
        (status(g.check_normalizer(limits.group_pairs), "normalizer differs"), Some("exhaustive over GL_n(q)".into()))
    });
    r.check("trace-vanishing", "trace(B A^i) = 0 for B in 𝒦, 0 < i < n", || {
        (status(Ok(g.check_trace_vanishing(&exps)), "nonzero trace"), exhaustive_note(exps.exhaustive))
    });
    r.check("cyclic-algebra", "k^{nxn} = 𝒦 ⊕ 𝒦A ⊕ ... ⊕ 𝒦A^{n-1}", || {
        (status(g.check_direct_sum(), "sum is not direct"), None)
    });
    r.check(
        "gabidulin-descriptions",
        "span ε_Γ(γ^[i] Γ^[j]), j < ℓ, equals 𝒦 ⊕ ... ⊕ 𝒦A^{ℓ-1}",
        || (status(g.check_code_descriptions(), "descriptions differ"), None),
    );

    let aut_ok = ell > 0 && ell < n;
    r.check("aut-generators", "κ_{S,I}, κ_{I,S}, κ_{A,A^{-1}}, τ_{T^{-1},TA^{ℓ-1}} fix G_ℓ", || {
        if !aut_ok {
            return (Status::Skipped(format!("needs 0 < ℓ < n, ℓ = {ell}")), None);
        }
        (status(g.aut_generators(ell).map(|v| v.len() == 4), "generator moves G_ℓ"), None)
    });
    r.check("aut-order", "|Aut(G_ℓ)| = 2n(q^n-1)^2/(q-1)", || {
        if !aut_ok {
            return (Status::Skipped(format!("needs 0 < ℓ < n, ℓ = {ell}")), None);
        }
        let (Ok(order), Ok(code), Ok(gens)) = (g.aut_order(ell), g.code(ell), g.aut_generators(ell)) else {
            return (Status::Fail("could not build G_ℓ".into()), None);
        };
        match brute_equivalences(&code, &code, true, limits) {
            Ok(all) => {
                let f = g.field();
                let ok = all.len() as u128 == order && gens.iter().all(|m| all.contains(&m.normalized(f)));
                (
                    status(Ok(ok), "exhaustive count differs"),
                    Some(format!("exhaustive count {} = formula {order}", all.len())),
                )
            }
            Err(e @ Error::TooLarge { .. }) => (Status::Skipped(e.to_string()), Some(format!("formula {order}"))),
            Err(e) => (Status::Fail(e.to_string()), None),
        }
    });
    r.check("mrd", "d(G_ℓ) = n-ℓ+1 and d(G_ℓ^⊥) = ℓ+1", || {
        let res = g.code(ell).and_then(|c| {
            let d = c.min_distance(limits)?;
            let dual_ok = if ell < n { c.dual().min_distance(limits)? == ell + 1 } else { true };
            Ok(d == n - ell + 1 && dual_ok)
        });
        (status(res, "distance below the bound"), None)
    });

    let even = |name: &str, statement: &str, r: &mut Report, check: &dyn Fn() -> (Status, Option<String>)| {
        r.check(name, statement, || if even_n { check() } else { skip_odd_n() });
    };
    even("shift-det", "det A = -1 and A^T = A^{-1}", r, &|| (status(g.check_shift_det(), "det A ≠ -1"), None));
    even("singer-conjugation", "A S A^{-1} = S^q", r, &|| {
        let f = g.field();
        let ok = g.shift().mul(f, g.singer()).mul(f, g.shift_inv()) == g.singer().pow(f, q);
        (status(Ok(ok), "conjugate differs"), None)
    });
    even("gram-shift", "A T = T A and (T A^j)^T = A^{-j} T", r, &|| (status(Ok(g.check_gram_shift()), "fails"), None));
    even("singer-det", "det S is a primitive element of F_q", r, &|| {
        (status(Ok(g.check_singer_det()), "not primitive"), None)
    });
    even("gram-nonsquare", "det T is a nonsquare in F_q", r, &|| {
        if !odd {
            return (Status::Skipped("characteristic 2".into()), None);
        }
        (status(g.check_gram_nonsquare(), "det T is a square"), None)
    });
    even("gram-singer-symmetric", "T S^j is symmetric", r, &|| {
        (status(Ok(g.check_gram_singer_symmetric(&exps)), "asymmetric"), exhaustive_note(exps.exhaustive))
    });
    even("singer-gram-symmetric", "S^j T^{-1} is symmetric", r, &|| {
        (status(Ok(g.check_singer_gram_inv_symmetric(&exps)), "asymmetric"), exhaustive_note(exps.exhaustive))
    });
    even("symmetry-table", "T A^j S^i symmetric iff j = 0, or j = n/2 and (q^{n/2}+1) | i", r, &|| {
        let work = n as u128 * (g.ctx().qn() - 1) as u128;
        if work > limits.codewords as u128 {
            return (Status::Skipped(format!("{work} cells over cap {}", limits.codewords)), None);
        }
        let bad = g.symmetry_table_mismatches();
        let witness =
            bad.first().map(|b| format!("first mismatch j={} i={}", b.j, b.i)).unwrap_or(format!("{work} cells"));
        (status(Ok(bad.is_empty()), "table differs from closed form"), Some(witness))
    });
    even("dual-twist", "G_{n/2}^⊥ = T A^{n/2} G_{n/2} T^{-1}", r, &|| {
        (status(g.check_dual_twist(), "canonical forms differ"), None)
    });

    let mut cert = None;
    r.check("selfdualize", "G_{n/2} is isometric to a self-dual code iff n = 2 mod 4 and q = 3 mod 4", || {
        if !even_n {
            return skip_odd_n();
        }
        if !odd {
            return (Status::Skipped("characteristic 2, see char2".into()), None);
        }
        let expect = n % 4 == 2 && q % 4 == 3;
        match selfdual::gabisd_selfdualize(&g, limits) {
            Ok(Selfdualization::Certificate(c)) => {
                let ok = expect && c.verify().is_ok();
                let w = format!("certificate (i,h,j) = ({},{},{})", c.params.i, c.params.h, c.params.j);
                cert = Some(c);
                (status(Ok(ok), "unexpected certificate"), Some(w))
            }
            Ok(Selfdualization::Impossible(imp)) => {
                let w = match &imp.scan {
                    Some(s) => format!("{}; scanned {} triples, {} valid", imp.reason, s.triples, s.valid_triples),
                    None => format!("{}; scan over cap", imp.reason),
                };
                (status(Ok(!expect), "no certificate found"), Some(w))
            }
            Err(e) => (Status::Fail(e.to_string()), None),
        }
    });
    r.check(
        "eqsd",
        "C^⊥ = A C B with A = P^T P, B = Q Q^T symmetric of square determinant makes P C Q self-dual",
        || {
            let Some(c) = &cert else {
                return (Status::Skipped("no certificate for (q, n)".into()), None);
            };
            let res = g.code(n / 2).and_then(|gab| {
                Ok(selfdual::eqsd_check(&gab, &c.a_sym, &c.b_sym)? && gab.sandwich(&c.p, &c.q)?.is_self_dual())
            });
            (status(res, "round trip fails"), None)
        },
    );

    r.check("dual-functoriality", "κ_{X,Y}(C)^⊥ = κ_{X^{-T},Y^{-T}}(C^⊥), likewise for τ", || {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let f = ctx.base();
        let res = (0..20).try_fold(true, |acc, _| -> Result<bool> {
            let l = rng.gen_range(0..=n * n);
            let gens = (0..l).map(|_| MatFq::random(f, n, n, &mut rng)).collect();
            let c = RankMetricCode::new(ctx.clone(), n, n, gens)?;
            let kind = if rng.gen_bool(0.5) { MapKind::Proper } else { MapKind::Improper };
            let map = EquivMap::new(
                f,
                kind,
                MatFq::random_invertible(f, n, &mut rng),
                MatFq::random_invertible(f, n, &mut rng),
            )?;
            Ok(acc && c.apply(&map)?.dual() == c.dual().apply(&map.dual_map(f))?)
        });
        (status(res, "identity fails"), Some("20 random instances".into()))
    });
    r.check("isometry-criterion", "κ_{X,Y} preserves <,> iff X^T X = aI and Y Y^T = a^{-1} I", || {
        let f = ctx.base();
        let gl = match MatFq::general_linear(f, n, limits.group_pairs) {
            Ok(gl) if (gl.len() as u128).pow(2) <= limits.group_pairs as u128 => gl,
            Ok(gl) => {
                let e = Error::TooLarge { count: (gl.len() as u128).pow(2), cap: limits.group_pairs };
                return (Status::Skipped(e.to_string()), None);
            }
            Err(e) => return (status(Err(e), ""), None),
        };
        let ok = gl.iter().all(|x| {
            gl.iter().all(|y| {
                let m = EquivMap { kind: MapKind::Proper, x: x.clone(), y: y.clone() };
                m.is_inner_preserving(f) == m.preserves_inner_directly(f)
            })
        });
        (status(Ok(ok), "criterion disagrees"), Some(format!("{} proper pairs", gl.len() * gl.len())))
    });

    let base = FieldCtx::for_q(q, 1).map(Arc::new);
    r.check("dim2", "self-dual MRD codes in k^{2x2} exist iff q = 3 mod 4, all equivalent", || {
        if !odd {
            return (Status::Skipped("characteristic 2".into()), None);
        }
        let res = base.clone().and_then(|b| {
            let codes = selfdual::classify_2x2(&b)?;
            let sols = selfdual::sum_of_squares_minus_one(&b).len();
            let count_ok = if q % 4 == 3 { codes.len() == 2 * sols } else { codes.is_empty() };
            let mut equiv = true;
            for c in codes.iter().skip(1) {
                equiv &= find_equivalence(&codes[0], c, true, limits)?.is_some();
            }
            Ok((count_ok && equiv, codes.len()))
        });
        match res {
            Ok((ok, k)) => (status(Ok(ok), "classification differs"), Some(format!("{k} codes"))),
            Err(e) => (status(Err(e), ""), None),
        }
    });
    r.check("char2", "in characteristic 2, J lies in the dual of every self-orthogonal code", || {
        if odd {
            return (Status::Skipped("odd characteristic".into()), None);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let res = base.clone().and_then(|b| {
            for _ in 0..20 {
                let target = rng.gen_range(0..=n * n / 2);
                let c = selfdual::random_self_orthogonal(&b, n, n, target, &mut rng)?;
                selfdual::char2_obstruction(&c)?;
            }
            Ok(true)
        });
        (status(res, ""), Some("20 random self-orthogonal codes".into()))
    });
}
