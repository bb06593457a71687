//! Acceptance suite: prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

mod common;

use std::error::Error as StdError;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use localeig::dense::{in_span, Mat};
use localeig::pencilroots::{nilpotent_structure, pencil_maximal_set};
use localeig::poleremoval::{
    assign_poles, choose_lambda, coalescent_maximal_set, coprime_factor_polynomial, coprime_maximal_set,
    feedback_state_space, feedback_system, k_factor, k_inverse, recover_exact, recover_truncated, Recovery,
};
use localeig::ratfun::{Point, RatFun, Valuation};
use localeig::ratmat::{smith_mcmillan_local, RatMat};
use localeig::realization::{is_minimal, lift_set, project_root_vector, project_set, realize, StateSpace};
use localeig::rootvec::{at_infinity, maximal_set, root_vector_order, verify_maximal, RootCheck, RootVector};
use localeig::scalar::{cast, Context, Exact, Float, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, Box<dyn StdError>>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+).into());
        }
    };
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn zero() -> Exact {
    ex(0)
}

fn to_float(r: &RatMat<Exact>) -> RatMat<Float> {
    r.map(|v| cast::<Float>(v))
}

fn ss_float(ss: &StateSpace<Exact>) -> StateSpace<Float> {
    ss.map(|v| cast::<Float>(v))
}

fn scaled<S: Scalar>(y: &RootVector<S>) -> RootVector<S> {
    let v = y.value();
    let lead = v.iter().find(|x| x.modulus() > 1e-9).cloned().unwrap_or_else(S::one);
    let inv = RatFun::constant(S::one() / lead);
    RootVector {
        vec: y.vec.iter().map(|e| e * &inv).collect(),
        ..y.clone()
    }
}

fn coeff_gap(a: &[Float], b: &[Exact]) -> f64 {
    (0..a.len().max(b.len()))
        .map(|i| {
            let x = a.get(i).copied().unwrap_or_default();
            let y = b.get(i).map(cast::<Float>).unwrap_or_default();
            (x - y).norm()
        })
        .fold(0.0, f64::max)
}

/// Largest coefficient gap between a float and an exact rational vector,
/// numerators and (monic) denominators compared separately.
fn vector_gap(a: &[RatFun<Float>], b: &[RatFun<Exact>]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| coeff_gap(x.num().coeffs(), y.num().coeffs()).max(coeff_gap(x.den().coeffs(), y.den().coeffs())))
        .fold(0.0, f64::max)
}

fn coalescent_example() -> Outcome {
    let ctx = Context::default();
    let r = rm::<Exact>("1, 0; 1/l, 1");
    let run = coalescent_maximal_set(&r, &zero(), Recovery::Truncated, &ctx)?;
    ensure!(run.set.orders() == vec![1], "pipeline orders {:?}", run.set.orders());

    let psm = realize(&r, &ctx)?.to_psm();
    let cf = coprime_factor_polynomial(&psm, &[zero()], &ctx)?;
    let k = cf.k.to_ratmat();
    let y = cf.y.to_ratmat();
    ensure!(!k.det()?.is_zero(), "K is singular");
    ensure!(r.mul(&k)? == y, "Y differs from R K");
    ensure!(is_minimal(&cf.q(), &ctx)?, "[[-K, I], [Y, 0]] is not minimal");
    ensure!(y.is_polynomial(), "Y has poles");
    let zy = smith_mcmillan_local(&y, &zero(), &ctx)?.positive();
    let zr = smith_mcmillan_local(&r, &zero(), &ctx)?.positive();
    ensure!(zy == zr, "zero structure of Y {zy:?} and R {zr:?}");
    // the reference Y up to a unimodular column transformation
    let w = rm::<Exact>("0, l; 1, 1").inverse()?.mul(&y)?;
    let det = w.det()?;
    ensure!(w.is_polynomial() && det.is_constant() && !det.is_zero(), "Y is not [[0, λ], [1, 1]] W: {y}");

    let check = root_vector_order(&r, &rv("l, -1"), &Point::Finite(zero()), &ctx)?;
    ensure!(check == RootCheck::Order(1), "[λ, -1]: {check:?}");
    let (_, set) = coprime_maximal_set(&psm, &zero(), &ctx)?;
    ensure!(set.orders() == vec![1], "coprime route orders {:?}", set.orders());
    let flat = |m: &RatMat<Exact>| m.to_string().replace('\n', " ");
    Ok(format!("Y = {}, K = {}", flat(&y), flat(&k)))
}

fn feedback_example() -> Outcome {
    let ctx = Context::default();
    let r = rm::<Exact>("1, 0; 1/l, 1");
    let ss = realize(&r, &ctx)?;
    let lambda = choose_lambda(&ss, &zero(), &ctx)?;
    ensure!(lambda == vec![ex(-1)], "assigned {lambda:?}");
    let fd = assign_poles(&ss, &lambda, &ctx)?;
    let sy = feedback_system(&ss, &fd);
    ensure!(
        sy.to_polymat().to_ratmat() == rm("-l-1, 1, 0; -1, 1, 0; 0, 0, 1"),
        "feedback system matrix {}",
        sy.to_polymat().to_ratmat()
    );
    ensure!(is_minimal(&k_factor(&ss, &fd).to_psm(), &ctx)?, "K realization not minimal");
    ensure!(is_minimal(&k_inverse(&ss, &fd).to_psm(), &ctx)?, "K^-1 realization not minimal");
    let yset = pencil_maximal_set(&sy.at(&zero()), &ctx)?;
    ensure!(yset.orders() == vec![1], "pencil orders {:?}", yset.orders());
    let value = Mat::column_vector(&yset.vectors[0].value());
    ensure!(value.hstack(&mat(&[&[1], &[1], &[0]])).rank(&ctx) == 1, "pencil value not parallel to [1, 1, 0]");
    let b = project_root_vector(&feedback_state_space(&ss, &fd).to_psm(), &yset.vectors[0], &ctx)?;
    let trunc = recover_truncated(&ss, &fd, &b, &ctx)?;
    let exact = recover_exact(&ss, &fd, &b, &ctx)?;
    ensure!(trunc.vec == rv("l, l-1"), "truncated recovery {:?}", trunc.vec);
    ensure!(exact.vec == rv("l/(l+1), -1/(l+1)"), "exact recovery {:?}", exact.vec);

    let ssf = ss_float(&ss);
    let lambda = choose_lambda(&ssf, &Float::default(), &ctx)?;
    let fd = assign_poles(&ssf, &lambda, &ctx)?;
    let yset = pencil_maximal_set(&feedback_system(&ssf, &fd).at(&Float::default()), &ctx)?;
    ensure!(yset.orders() == vec![1], "float pencil orders {:?}", yset.orders());
    let y = scaled(&yset.vectors[0]);
    let b = project_root_vector(&feedback_state_space(&ssf, &fd).to_psm(), &y, &ctx)?;
    let gt = vector_gap(&recover_truncated(&ssf, &fd, &b, &ctx)?.vec, &trunc.vec);
    let ge = vector_gap(&recover_exact(&ssf, &fd, &b, &ctx)?.vec, &exact.vec);
    ensure!(gt <= 1e-8 && ge <= 1e-8, "float gaps {gt:e}, {ge:e}");
    Ok(format!("float coefficient gaps {gt:.1e} (truncated), {ge:.1e} (exact)"))
}

fn infinity_example() -> Outcome {
    let ctx = Context::default();
    let p = rm::<Exact>("1, l; 0, 1");
    let set = at_infinity(&p, &ctx)?;
    ensure!(set.orders() == vec![1], "orders at infinity {:?}", set.orders());
    let sub: Vec<RatFun<Exact>> = set.vectors[0].vec.iter().map(|e| e.substitute_reciprocal()).collect();
    let check = root_vector_order(&p.substitute_reciprocal(), &sub, &Point::Finite(zero()), &ctx)?;
    ensure!(check == RootCheck::Order(1), "substituted vector: {check:?}");
    let reference = rv::<Exact>("-1, 1/l");
    let check = root_vector_order(&p, &reference, &Point::Infinity, &ctx)?;
    ensure!(check == RootCheck::Order(1), "λ^-1 [-λ, 1] at infinity: {check:?}");
    let plain = root_vector_order(&p, &rv::<Exact>("-l, 1"), &Point::Infinity, &ctx)?;
    ensure!(plain.order().is_none(), "[-λ, 1] accepted at infinity");
    Ok(format!("vector {:?}", set.vectors[0].vec.iter().map(|e| e.to_string()).collect::<Vec<_>>()))
}

const STRUCTURE_SEED: u64 = 4;
const STRUCTURE_CASES: usize = 200;

fn structure_inputs() -> Vec<Known> {
    let mut g = rng(STRUCTURE_SEED);
    (0..STRUCTURE_CASES)
        .map(|_| known_structure(&mut g, 5, 6, (-3, 3), &zero()))
        .collect()
}

fn maximality_suite() -> Outcome {
    let ctx = Context::default();
    let mut failures = Vec::new();
    let mut poles = 0;
    for (i, k) in structure_inputs().iter().enumerate() {
        let want = k.positive();
        poles += usize::from(k.sigmas.last().is_some_and(|&s| s < 0));
        let direct = maximal_set(&k.r, &zero(), &ctx).map(|s| (s.orders(), s.sigmas));
        let pipeline = coalescent_maximal_set(&k.r, &zero(), Recovery::Truncated, &ctx).map(|s| s.set.orders());
        match (direct, pipeline) {
            (Ok((d, s)), Ok(p)) if d == want && p == want && s == k.sigmas => {}
            (d, p) => failures.push(format!("case {i} (sigmas {:?}): {d:?} / {p:?}", k.sigmas)),
        }
    }
    ensure!(failures.is_empty(), "{} failures, first: {}", failures.len(), failures[0]);
    Ok(format!("{STRUCTURE_CASES} matrices, {poles} with a pole at the point"))
}

fn check_item(failures: &mut Vec<String>, item: &str, ok: bool, what: impl FnOnce() -> String) {
    if !ok && failures.len() < 5 {
        failures.push(format!("item {item}: {}", what()));
    }
}

fn valuation_suite() -> Outcome {
    let ctx = Context::default();
    let mut g = rng(5);
    let points = [ex(0), ex(1), ex(-2), q(1, 2)];
    let mut failures = Vec::new();
    const N: usize = 1000;
    let kappa = |a: &RatMat<Exact>, at: &Exact| a.valuation_at(at, &ctx);
    for t in 0..N {
        let at = &points[t % points.len()];
        // scalar instances of the three defining properties
        let (a, ka) = valued(&mut g, at, 0.1);
        let (b, kb) = valued(&mut g, at, 0.1);
        let known = |k: Option<i64>| k.map_or(Valuation::Infinite, Valuation::Finite);
        check_item(&mut failures, "generated valuation", a.valuation_at(at) == known(ka) && b.valuation_at(at) == known(kb), || format!("{a}, {b}"));
        check_item(&mut failures, "1 (scalar)", (&a * &b).valuation_at(at) == a.valuation_at(at) + b.valuation_at(at), || format!("{a}, {b}"));
        check_item(&mut failures, "2 (scalar)", (&a + &b).valuation_at(at) >= a.valuation_at(at).min(b.valuation_at(at)), || format!("{a}, {b}"));
        check_item(&mut failures, "3 (scalar)", a.valuation_at(at).is_infinite() == a.is_zero(), || format!("{a}"));

        let (m, n, p) = (g.gen_range(1..=3), g.gen_range(1..=3), g.gen_range(1..=3));
        let chance = if g.gen_bool(0.05) { 1.0 } else { 0.3 };
        let am = random_ratmat(&mut g, m, n, at, chance);
        let bm = random_ratmat(&mut g, n, p, at, 0.3);
        let cm = random_ratmat(&mut g, m, n, at, 0.3);
        check_item(&mut failures, "1", kappa(&am.mul(&bm)?, at) >= kappa(&am, at) + kappa(&bm, at), || format!("{am} {bm}"));
        check_item(&mut failures, "2", kappa(&am.add(&cm)?, at) >= kappa(&am, at).min(kappa(&cm, at)), || format!("{am} {cm}"));
        check_item(&mut failures, "3", kappa(&am, at).is_infinite() == am.is_zero(), || format!("{am}"));

        let u = local_unit(&mut g, n, at);
        let fin = Valuation::Finite(0);
        let det = u.det()?;
        let inv = u.inverse()?;
        check_item(&mut failures, "4 (hypothesis)", kappa(&u, at) == fin && det.valuation_at(at) == fin, || format!("{u}"));
        check_item(&mut failures, "4", kappa(&inv, at) == fin && inv.det()?.valuation_at(at) == fin, || format!("{u}"));
        let left = random_ratmat(&mut g, n, p, at, 0.3);
        let right = random_ratmat(&mut g, m, n, at, 0.3);
        check_item(&mut failures, "5a", kappa(&u.mul(&left)?, at) == kappa(&left, at), || format!("{u} {left}"));
        check_item(&mut failures, "5b", kappa(&right.mul(&u)?, at) == kappa(&right, at), || format!("{right} {u}"));

        let local = smith_mcmillan_local(&am, at, &ctx)?;
        let diag_min = local.sigmas.iter().copied().min().map_or(Valuation::Infinite, Valuation::Finite);
        let (lu, lv) = (local.u.clone().ok_or("no witness")?, local.v.clone().ok_or("no witness")?);
        let form = lu.mul(&am)?.mul(&lv)?;
        check_item(&mut failures, "6", kappa(&am, at) == diag_min && kappa(&form, at) == diag_min, || format!("{am}"));

        let (rows_split, cols_split) = (g.gen_range(0..=m), g.gen_range(0..=n));
        let top = am.submatrix(0, rows_split, 0, n);
        let bottom = am.submatrix(rows_split, m, 0, n);
        let lhs = am.submatrix(0, m, 0, cols_split);
        let rhs = am.submatrix(0, m, cols_split, n);
        check_item(&mut failures, "7", kappa(&am, at) == kappa(&top, at).min(kappa(&bottom, at)), || format!("{am}"));
        check_item(&mut failures, "7", kappa(&am, at) == kappa(&lhs, at).min(kappa(&rhs, at)), || format!("{am}"));
    }
    ensure!(failures.is_empty(), "{}", failures.join("; "));
    Ok(format!("{N} scalar and {N} matrix instances per item at 4 points"))
}

fn lift_project_suite() -> Outcome {
    let ctx = Context::default();
    let mut g = rng(6);
    let mut done = 0;
    let mut tries = 0;
    while done < 100 {
        tries += 1;
        ensure!(tries < 1000, "only {done} usable systems");
        let k = known_structure(&mut g, 4, 4, (0, 3), &zero());
        if k.positive().is_empty() {
            continue;
        }
        let ss = realize(&k.r, &ctx)?;
        let psm = ss.to_psm();
        ensure!(is_minimal(&psm, &ctx)?, "realization of case {done} is not minimal");
        let set = maximal_set(&k.r, &zero(), &ctx)?;
        let lifted = lift_set(&psm, &set, &ctx)?;
        verify_maximal(&psm.to_ratmat(), &lifted, &ctx)?;
        let back = project_set(&psm, &lifted, &ctx)?;
        for (x, y) in set.vectors.iter().zip(&back.vectors) {
            let diff: Vec<Exact> = x.value().iter().zip(y.value()).map(|(a, b)| a - b).collect();
            ensure!(
                in_span(&set.kernel, &Mat::column_vector(&diff), &ctx),
                "case {done}: projected value differs outside the local kernel"
            );
        }
        done += 1;
    }
    Ok(format!("{done} systems"))
}

struct Congruence {
    cases: usize,
    vectors: usize,
    float_gap: f64,
}

fn congruence_cases<S: Scalar>(ss: &StateSpace<S>, ctx: &Context) -> Result<Vec<(Vec<Vec<S>>, Vec<Vec<S>>)>, Box<dyn StdError>> {
    let at = S::zero();
    let m = nilpotent_structure(&ss.a, &ss.e, &at, ctx)?.largest();
    let lambda = choose_lambda(ss, &at, ctx)?;
    let fd = assign_poles(ss, &lambda, ctx)?;
    let yset = pencil_maximal_set(&feedback_system(ss, &fd).at(&at), ctx)?;
    let closed = feedback_state_space(ss, &fd).to_psm();
    let mut out = Vec::new();
    for y in &yset.vectors {
        let b = project_root_vector(&closed, &scaled(y), ctx)?;
        let len = b.order + m;
        let exact = recover_exact(ss, &fd, &b, ctx)?;
        let trunc = recover_truncated(ss, &fd, &b, ctx)?;
        let taylor = exact
            .vec
            .iter()
            .map(|e| e.laurent_with(&at, 0, len as i64 - 1, ctx))
            .collect::<Result<Vec<_>, _>>()?;
        let coeffs = trunc
            .vec
            .iter()
            .map(|e| (0..len).map(|i| e.num().coeff(i)).collect())
            .collect();
        out.push((taylor, coeffs));
    }
    Ok(out)
}

fn coalescent_systems(count: usize) -> Vec<StateSpace<Exact>> {
    let ctx = Context::default();
    let mut g = rng(7);
    let mut out = Vec::new();
    while out.len() < count {
        let Some(ss) = coalescent_system(&mut g, &ctx) else { continue };
        let r = ss.transfer_function(&ctx).unwrap();
        let s = smith_mcmillan_local(&r, &zero(), &ctx).unwrap().sigmas;
        if s.iter().any(|&x| x > 0) && s.iter().any(|&x| x < 0) {
            out.push(ss);
        }
    }
    out
}

fn congruence_suite() -> Outcome {
    let ctx = Context::default();
    let mut c = Congruence { cases: 0, vectors: 0, float_gap: 0.0 };
    for (i, ss) in coalescent_systems(50).iter().enumerate() {
        for (taylor, coeffs) in congruence_cases(ss, &ctx)? {
            ensure!(taylor == coeffs, "case {i}: truncated {coeffs:?}, exact Taylor {taylor:?}");
            c.vectors += 1;
        }
        for (taylor, coeffs) in congruence_cases(&ss_float(ss), &ctx)? {
            for (t, k) in taylor.iter().zip(&coeffs) {
                for (a, b) in t.iter().zip(k) {
                    c.float_gap = c.float_gap.max((a - b).norm());
                }
            }
        }
        c.cases += 1;
    }
    ensure!(c.float_gap <= 1e-8, "float congruence gap {:e}", c.float_gap);
    Ok(format!("{} systems, {} vectors, float gap {:.1e}", c.cases, c.vectors, c.float_gap))
}

fn float_agreement() -> Outcome {
    let ctx = Context::default();
    let mut failures = Vec::new();
    let mut compared = 0;
    let fzero = Float::default();
    for (i, k) in structure_inputs().iter().enumerate() {
        let rf = to_float(&k.r);
        let exact = maximal_set(&k.r, &zero(), &ctx)?;
        let direct = maximal_set(&rf, &fzero, &ctx).and_then(|s| verify_maximal(&rf, &s, &ctx).map(|_| s));
        let pipeline = coalescent_maximal_set(&rf, &fzero, Recovery::Truncated, &ctx);
        match (direct, pipeline) {
            (Ok(d), Ok(p)) if d.orders() == exact.orders() && d.sigmas == exact.sigmas && p.set.orders() == exact.orders() => {}
            (d, p) => failures.push(format!(
                "matrix {i} (sigmas {:?}): {:?} / {:?}",
                k.sigmas,
                d.map(|s| (s.orders(), s.sigmas)),
                p.map(|s| s.set.orders())
            )),
        }
        compared += 1;
    }
    for (i, ss) in coalescent_systems(50).iter().enumerate() {
        let r = ss.transfer_function(&ctx)?;
        let rf = ss_float(ss).transfer_function(&ctx)?;
        let exact = coalescent_maximal_set(&r, &zero(), Recovery::Truncated, &ctx)?;
        match coalescent_maximal_set(&rf, &fzero, Recovery::Truncated, &ctx) {
            Ok(p) if p.set.orders() == exact.set.orders() && p.set.sigmas == exact.set.sigmas => {}
            other => failures.push(format!("system {i}: {:?}", other.map(|p| (p.set.orders(), p.set.sigmas)))),
        }
        compared += 1;
    }
    ensure!(failures.is_empty(), "{} of {compared} disagree: {}", failures.len(), failures.join("; "));
    Ok(format!("{compared} inputs"))
}

fn report(label: &str, budget: Option<Duration>, f: fn() -> Outcome) -> bool {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f));
    let elapsed = start.elapsed();
    let (mut ok, detail) = match result {
        Ok(Ok(d)) => (true, d),
        Ok(Err(e)) => (false, e.to_string()),
        Err(p) => (
            false,
            p.downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()),
        ),
    };
    let mut timing = format!("{:.2}s", elapsed.as_secs_f64());
    if let Some(b) = budget {
        if elapsed > b {
            ok = false;
            timing += &format!(" over the {:.0}s budget", b.as_secs_f64());
        }
    }
    println!("{} {label}: {detail} [{timing}]", if ok { "PASS" } else { "FAIL" });
    ok
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let results = [
        report("criterion 1, coalescent example through the coprime route", secs(1), coalescent_example),
        report("criterion 2, coalescent example through feedback", secs(1), feedback_example),
        report("criterion 3, root vectors at infinity", None, infinity_example),
        report("criterion 4, maximal set orders equal positive multiplicities", secs(60), maximality_suite),
        report("criterion 5, valuation properties", None, valuation_suite),
        report("criterion 6, lift and project round trip", None, lift_project_suite),
        report("criterion 7, truncated recovery congruence", None, congruence_suite),
        report("criterion 8, float and exact agreement", None, float_agreement),
    ];
    let failed = results.iter().filter(|&&ok| !ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
