//! Root vectors at points that are both poles and zeros. A state feedback F
//! moves every pole of R to a set Λ; Y = R K with K = I + F(λE - A - BF)^-1 B
//! then has no pole at λ0 and the same zero structure there, its root
//! vectors come from the system matrix S_Y, and K maps them back to R.

use rand::Rng;

use crate::dense::Mat;
use crate::error::{Error, Result};
use crate::format::scalar_to_string;
use crate::pencilroots::{nilpotent_structure, poly_maximal_set};
use crate::poly::Poly;
use crate::ratfun::{Point, RatFun};
use crate::ratmat::{smith_mcmillan_local, PolyMat, RatMat};
use crate::realization::{is_minimal, minimize, realize_strictly_proper, split_proper, PolySystemMatrix, StateSpace, SystemMatrix};
use crate::roots::roots;
use crate::rootvec::{local_data, maximal_set, root_vector_order, verify_set, MaximalSet, RootCheck, RootVector};
use crate::scalar::{Context, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct FeedbackData<S> {
    /// n x q.
    pub f: Mat<S>,
    pub lambda: Vec<S>,
    /// A + B F.
    pub closed: Mat<S>,
}

impl<S: Scalar> FeedbackData<S> {
    /// F = 0.
    pub fn none(ss: &StateSpace<S>) -> Self {
        FeedbackData {
            f: Mat::zeros(ss.inputs(), ss.order()),
            lambda: Vec::new(),
            closed: ss.a.clone(),
        }
    }
}

fn poly_from_roots<S: Scalar>(rs: &[S]) -> Poly<S> {
    rs.iter().fold(Poly::one(), |p, r| &p * &Poly::new(vec![-r.clone(), S::one()]))
}

fn eval_matrix_poly<S: Scalar>(p: &Poly<S>, a: &Mat<S>) -> Mat<S> {
    let n = a.nrows();
    let mut acc = Mat::zeros(n, n);
    for c in p.coeffs().iter().rev() {
        acc = &(&acc * a) + &Mat::identity(n).scale(c);
    }
    acc
}

/// Ackermann's formula for the single input b = B g after a preliminary
/// feedback F0: F = F0 - g e_q^T Ctrb^-1 p(A + B F0).
fn ackermann<S: Scalar>(
    a: &Mat<S>,
    b: &Mat<S>,
    f0: &Mat<S>,
    g: &Mat<S>,
    target: &Poly<S>,
    ctx: &Context,
) -> Option<Mat<S>> {
    let q = a.nrows();
    let a0 = a + &(b * f0);
    let bg = b * g;
    let mut cols = Vec::with_capacity(q);
    let mut v = bg;
    for _ in 0..q {
        cols.push(v.col(0));
        v = &a0 * &v;
    }
    let ctrb = Mat::from_columns(q, &cols);
    let mut eq = Mat::zeros(q, 1);
    eq[(q - 1, 0)] = S::one();
    let z = ctrb.transpose().solve(&eq, ctx)?;
    let k = &z.transpose() * &eval_matrix_poly(target, &a0);
    Some(f0 - &(g * &k))
}

fn charpoly_matches<S: Scalar>(m: &Mat<S>, target: &Poly<S>) -> bool {
    let cp = m.charpoly();
    if S::EXACT {
        return cp == *target;
    }
    let scale = target.max_abs().max(1.0);
    let n = cp.coeffs().len().max(target.coeffs().len());
    (0..n).all(|k| (cp.coeff(k) - target.coeff(k)).modulus() <= 1e-6 * scale)
}

fn reachable_dim<S: Scalar>(a: &Mat<S>, b: &Mat<S>, ctx: &Context) -> usize {
    let mut v = b.range(ctx);
    loop {
        let next = v.hstack(&(a * &v)).range(ctx);
        if next.ncols() == v.ncols() {
            return v.ncols();
        }
        v = next;
    }
}

/// Feedback F with spectrum(A + BF, E) = Λ, computed on (E^-1 A, E^-1 B).
/// Λ is checked against the poles and zeros of the transfer function.
pub fn assign_poles<S: Scalar>(ss: &StateSpace<S>, lambda: &[S], ctx: &Context) -> Result<FeedbackData<S>> {
    let q = ss.order();
    if lambda.len() != q {
        return Err(Error::Precondition(format!(
            "{} eigenvalues requested for {q} states",
            lambda.len()
        )));
    }
    if q == 0 {
        return Ok(FeedbackData::none(ss));
    }
    if let Some(bad) = lambda.iter().find(|l| collides(ss, &system_polymat(ss), l, ctx)) {
        return Err(Error::Collision(scalar_to_string(bad)));
    }
    place(ss, lambda, ctx)
}

fn place<S: Scalar>(ss: &StateSpace<S>, lambda: &[S], ctx: &Context) -> Result<FeedbackData<S>> {
    place_among(ss, lambda, 1, ctx)
}

/// Ackermann placement through rank-one reductions B G; the first `keep`
/// successful reductions are compared and the smallest gain wins.
fn place_among<S: Scalar>(ss: &StateSpace<S>, lambda: &[S], keep: usize, ctx: &Context) -> Result<FeedbackData<S>> {
    let (q, n) = (ss.order(), ss.inputs());
    let ei = ss
        .e
        .inverse(ctx)
        .ok_or_else(|| Error::Precondition("pole assignment needs an invertible E".into()))?;
    let ah = &ei * &ss.a;
    let bh = &ei * &ss.b;
    if reachable_dim(&ah, &bh, ctx) < q {
        return Err(Error::Uncontrollable);
    }
    let target = poly_from_roots(lambda);
    let mut rng = ctx.rng(0xacce);
    let mut best: Option<FeedbackData<S>> = None;
    let mut kept = 0;
    for attempt in 0..40 {
        let (f0, g) = if attempt == 0 {
            (Mat::zeros(n, q), Mat::from_fn(n, 1, |_, _| S::one()))
        } else {
            (
                Mat::from_fn(n, q, |_, _| S::from_i64(rng.gen_range(-3..=3))),
                Mat::from_fn(n, 1, |_, _| S::from_i64(rng.gen_range(-5..=5))),
            )
        };
        let Some(f) = ackermann(&ah, &bh, &f0, &g, &target, ctx) else {
            continue;
        };
        if charpoly_matches(&(&ah + &(&bh * &f)), &target) {
            if best.as_ref().map_or(true, |b| gain_size(&f) < gain_size(&b.f)) {
                let closed = &ss.a + &(&ss.b * &f);
                best = Some(FeedbackData {
                    f,
                    lambda: lambda.to_vec(),
                    closed,
                });
            }
            kept += 1;
            if kept == keep {
                break;
            }
        }
    }
    best.ok_or_else(|| Error::Verification("pole assignment did not reach the requested spectrum".into()))
}

fn system_polymat<S: Scalar>(ss: &StateSpace<S>) -> PolyMat<S> {
    ss.system_matrix().to_polymat()
}

/// x is within relative distance 0.1 of a pole, or the system matrix loses
/// rank there (a zero).
fn collides<S: Scalar>(ss: &StateSpace<S>, sys: &PolyMat<S>, x: &S, ctx: &Context) -> bool {
    let near = |p: num_complex::Complex64| (x.to_c64() - p).norm() < 0.1 * p.norm().max(1.0);
    let pencil_rank_drop = (&ss.e.scale(x) - &ss.a).rank(ctx) < ss.order();
    if pencil_rank_drop {
        return true;
    }
    if ss.order() > 0 {
        if let Some(ei) = ss.e.inverse(ctx) {
            let cp = (&ei * &ss.a).charpoly().map(|v| v.to_c64());
            if roots(&cp).into_iter().any(near) {
                return true;
            }
        }
    }
    let full = sys.to_ratmat().normal_rank(ctx);
    sys.eval(x).rank(ctx) < full
}

/// Λ = {-1, ..., -q} first, then random rescalings, until no value collides
/// with a pole, a zero or λ0.
pub fn choose_lambda<S: Scalar>(ss: &StateSpace<S>, at: &S, ctx: &Context) -> Result<Vec<S>> {
    choose_for(ss, &system_polymat(ss), ss.order(), at, ctx)
}

fn choose_for<S: Scalar>(
    ss: &StateSpace<S>,
    sys: &PolyMat<S>,
    count: usize,
    at: &S,
    ctx: &Context,
) -> Result<Vec<S>> {
    admissible_sets(ss, sys, count, at, 1, ctx)
        .pop()
        .ok_or_else(|| Error::Collision("no admissible eigenvalue set found".into()))
}

/// The first `limit` candidate sets of the draw sequence that avoid poles,
/// zeros and λ0.
fn admissible_sets<S: Scalar>(
    ss: &StateSpace<S>,
    sys: &PolyMat<S>,
    count: usize,
    at: &S,
    limit: usize,
    ctx: &Context,
) -> Vec<Vec<S>> {
    let mut rng = ctx.rng(0x1a3b);
    let a0 = at.to_c64();
    let mut found = Vec::new();
    for attempt in 0..64 {
        if found.len() == limit {
            break;
        }
        let scale = if attempt == 0 {
            S::one()
        } else {
            S::from_i64(rng.gen_range(1..=48)) / S::from_i64(8)
        };
        let cand: Vec<S> = (1..=count as i64)
            .map(|j| S::from_i64(-j) * scale.clone())
            .collect();
        let ok = cand.iter().all(|l| {
            let z = l.to_c64();
            (z - a0).norm() >= 0.1 * a0.norm().max(1.0) && !collides(ss, sys, l, ctx)
        });
        if ok {
            found.push(cand);
        }
    }
    found
}

fn gain_size<S: Scalar>(f: &Mat<S>) -> f64 {
    (0..f.nrows())
        .flat_map(|i| f.row(i))
        .map(|x| x.to_c64().norm())
        .fold(0.0, f64::max)
}

/// Which admissible eigenvalue set a pipeline run assigns.
#[derive(Clone, Copy, Debug)]
enum Choice {
    First,
    /// k-th smallest feedback gain among the first few admissible sets.
    SmallGain(usize),
}

fn assign_for<S: Scalar>(
    ss: &StateSpace<S>,
    sys: &PolyMat<S>,
    at: &S,
    choice: Choice,
    ctx: &Context,
) -> Result<FeedbackData<S>> {
    let q = ss.order();
    match choice {
        Choice::First => place(ss, &choose_for(ss, sys, q, at, ctx)?, ctx),
        Choice::SmallGain(k) => {
            let mut placed: Vec<FeedbackData<S>> = admissible_sets(ss, sys, q, at, 8, ctx)
                .iter()
                .filter_map(|l| place_among(ss, l, 12, ctx).ok())
                .collect();
            placed.sort_by(|a, b| gain_size(&a.f).total_cmp(&gain_size(&b.f)));
            placed
                .into_iter()
                .nth(k)
                .ok_or_else(|| Error::Collision("no admissible eigenvalue set found".into()))
        }
    }
}

/// S_Y = [[A + BF - λE, B], [C + DF, D]].
pub fn feedback_state_space<S: Scalar>(ss: &StateSpace<S>, fd: &FeedbackData<S>) -> StateSpace<S> {
    StateSpace {
        a: fd.closed.clone(),
        e: ss.e.clone(),
        b: ss.b.clone(),
        c: &ss.c + &(&ss.d * &fd.f),
        d: ss.d.clone(),
    }
}

pub fn feedback_system<S: Scalar>(ss: &StateSpace<S>, fd: &FeedbackData<S>) -> SystemMatrix<S> {
    feedback_state_space(ss, fd).system_matrix()
}

/// K = I + F(λE - A - BF)^-1 B as a state space.
pub fn k_factor<S: Scalar>(ss: &StateSpace<S>, fd: &FeedbackData<S>) -> StateSpace<S> {
    let n = ss.inputs();
    StateSpace {
        a: fd.closed.clone(),
        e: ss.e.clone(),
        b: ss.b.clone(),
        c: fd.f.clone(),
        d: Mat::identity(n),
    }
}

/// K^-1 = I - F(λE - A)^-1 B.
pub fn k_inverse<S: Scalar>(ss: &StateSpace<S>, fd: &FeedbackData<S>) -> StateSpace<S> {
    StateSpace {
        a: ss.a.clone(),
        e: ss.e.clone(),
        b: ss.b.clone(),
        c: -&fd.f,
        d: Mat::identity(ss.inputs()),
    }
}

fn apply_k_exact<S: Scalar>(k: &StateSpace<S>, b: &[RatFun<S>], ctx: &Context) -> Result<Vec<RatFun<S>>> {
    k.transfer_function(ctx)?.mul_vec(b)
}

/// Coefficients 0..=k+m-1 in μ = λ - λ0 of K(λ) b(λ), from
/// (μE - M')^-1 = -Σ μ^j (M'^-1 E)^j M'^-1 with M' = A + BF - λ0 E.
fn apply_k_truncated<S: Scalar>(
    ss: &StateSpace<S>,
    fd: &FeedbackData<S>,
    b: &[RatFun<S>],
    at: &S,
    len: usize,
    ctx: &Context,
) -> Result<Vec<RatFun<S>>> {
    let n = ss.inputs();
    let shifted = &fd.closed - &ss.e.scale(at);
    let mi = shifted.inverse(ctx).ok_or(Error::Singular)?;
    let step = &mi * &ss.e;
    let beta: Vec<Vec<S>> = b
        .iter()
        .map(|x| x.laurent_with(at, 0, len as i64 - 1, ctx))
        .collect::<Result<_>>()?;
    let beta_t = |t: usize| -> Vec<S> { beta.iter().map(|c| c[t].clone()).collect() };
    let mut g = &fd.f * &(&mi * &ss.b);
    let mut coeffs: Vec<Vec<S>> = (0..len).map(beta_t).collect();
    for j in 0..len {
        for t in 0..len - j {
            let gb = g.mul_vec(&beta_t(t));
            for (c, v) in coeffs[j + t].iter_mut().zip(gb) {
                *c = c.clone() - v;
            }
        }
        g = &(&fd.f * &step.pow(j + 1)) * &(&mi * &ss.b);
    }
    let neg = -at.clone();
    Ok((0..n)
        .map(|i| {
            let p = Poly::new(coeffs.iter().map(|c| c[i].clone()).collect());
            RatFun::from_poly(p.shift(&neg))
        })
        .collect())
}

fn expect_order<S: Scalar>(
    r: &RatMat<S>,
    vec: Vec<RatFun<S>>,
    b: &RootVector<S>,
    polynomialized: bool,
    ctx: &Context,
) -> Result<RootVector<S>> {
    match root_vector_order(r, &vec, &b.point, ctx)? {
        RootCheck::Order(k) if k == b.order => Ok(RootVector {
            point: b.point.clone(),
            vec,
            order: k,
            polynomialized,
        }),
        other => Err(Error::Verification(format!(
            "recovered vector: {other:?}, expected order {}",
            b.order
        ))),
    }
}

fn finite<S: Scalar>(p: &Point<S>) -> Result<S> {
    p.finite()
        .cloned()
        .ok_or_else(|| Error::Precondition("pole removal works at finite points".into()))
}

/// K b computed from the rational K, verified for R with the order of b.
pub fn recover_exact<S: Scalar>(
    ss: &StateSpace<S>,
    fd: &FeedbackData<S>,
    b: &RootVector<S>,
    ctx: &Context,
) -> Result<RootVector<S>> {
    let r = ss.transfer_function(ctx)?;
    let v = apply_k_exact(&k_factor(ss, fd), &b.vec, ctx)?;
    expect_order(&r, v, b, false, ctx)
}

/// K b truncated after the μ^(k+m-1) term, with m the largest Jordan block
/// of λE - A at λ0; verified for R as a root polynomial of order k.
pub fn recover_truncated<S: Scalar>(
    ss: &StateSpace<S>,
    fd: &FeedbackData<S>,
    b: &RootVector<S>,
    ctx: &Context,
) -> Result<RootVector<S>> {
    let at = finite(&b.point)?;
    let m = nilpotent_structure(&ss.a, &ss.e, &at, ctx)?.largest();
    let r = ss.transfer_function(ctx)?;
    let v = apply_k_truncated(ss, fd, &b.vec, &at, b.order + m, ctx)?;
    expect_order(&r, v, b, true, ctx)
}

/// Y = R K and K from [-A B] U = [I 0] with U unimodular.
#[derive(Clone, Debug)]
pub struct CoprimeFactors<S> {
    pub y: PolyMat<S>,
    pub k: PolyMat<S>,
    pub u: PolyMat<S>,
}

impl<S: Scalar> CoprimeFactors<S> {
    /// [[-K, I], [Y, 0]].
    pub fn q(&self) -> PolySystemMatrix<S> {
        let n = self.k.nrows();
        PolySystemMatrix {
            a: self.k.clone(),
            b: PolyMat::identity(n),
            c: self.y.clone(),
            d: PolyMat::zeros(self.y.nrows(), n),
        }
    }
}

/// Column reduction of [-A B] to [I 0] by unimodular column operations:
/// per row, Euclid on the trailing entries, then a unit lower triangular
/// cleanup. Every operation is mirrored on U.
fn unimodular_completion<S: Scalar>(g: &PolyMat<S>) -> Result<PolyMat<S>> {
    let (q, w) = (g.nrows(), g.ncols());
    let mut g = g.clone();
    let mut u = PolyMat::identity(w);
    for i in 0..q {
        loop {
            let piv = (i..w)
                .filter(|&j| !g.get(i, j).is_zero())
                .min_by_key(|&j| g.get(i, j).degree());
            let Some(p) = piv else {
                return Err(Error::NotMinimal);
            };
            g.swap_cols(i, p);
            u.swap_cols(i, p);
            let mut done = true;
            for j in (i + 1)..w {
                if g.get(i, j).is_zero() {
                    continue;
                }
                let (quo, _) = g.get(i, j).divmod(g.get(i, i))?;
                g.col_axpy(j, &quo, i);
                u.col_axpy(j, &quo, i);
                done &= g.get(i, j).is_zero();
            }
            if done {
                break;
            }
        }
        if !g.get(i, i).is_constant() {
            return Err(Error::NotMinimal);
        }
        let inv = S::one() / g.get(i, i).coeff(0);
        g.scale_col(i, &inv);
        u.scale_col(i, &inv);
    }
    for i in 0..q {
        for r in (i + 1)..q {
            let f = g.get(r, i).clone();
            if !f.is_zero() {
                g.col_axpy(i, &f, r);
                u.col_axpy(i, &f, r);
            }
        }
    }
    Ok(u)
}

/// Polynomial coprime factorization R = Y K^-1 of a minimal polynomial
/// system matrix (exact backend). All defining properties are checked, the
/// zero structure of Y and R at each of `points`.
pub fn coprime_factor_polynomial<S: Scalar>(
    psm: &PolySystemMatrix<S>,
    points: &[S],
    ctx: &Context,
) -> Result<CoprimeFactors<S>> {
    if !S::EXACT {
        return Err(Error::ExactOnly("coprime_factor_polynomial"));
    }
    let (q, n) = (psm.states(), psm.inputs());
    let u = unimodular_completion(&psm.input_compound())?;
    let tail = u.submatrix(0, q + n, q, q + n);
    let k = u.submatrix(q, q + n, q, q + n);
    let y = psm.c.hstack(&psm.d).mul(&tail);
    let out = CoprimeFactors { y, k, u };
    if out.k.det()?.is_zero() {
        return Err(Error::Verification("K is singular".into()));
    }
    let r = psm.transfer_function(ctx)?;
    if r.mul(&out.k.to_ratmat())? != out.y.to_ratmat() {
        return Err(Error::Verification("Y differs from R K".into()));
    }
    let yr = out.y.to_ratmat();
    for at in points {
        let zy: Vec<i64> = smith_mcmillan_local(&yr, at, ctx)?.positive();
        let zr: Vec<i64> = smith_mcmillan_local(&r, at, ctx)?.positive();
        if zy != zr {
            return Err(Error::Verification(format!(
                "zero structure at {}: Y {zy:?}, R {zr:?}",
                scalar_to_string(at)
            )));
        }
    }
    if !is_minimal(&out.q(), ctx)? {
        return Err(Error::Verification("[[-K, I], [Y, 0]] is not minimal".into()));
    }
    Ok(out)
}

/// A maximal set of R at λ0 as K times a maximal set of Y.
pub fn coprime_maximal_set<S: Scalar>(
    psm: &PolySystemMatrix<S>,
    at: &S,
    ctx: &Context,
) -> Result<(CoprimeFactors<S>, MaximalSet<S>)> {
    let cf = coprime_factor_polynomial(psm, std::slice::from_ref(at), ctx)?;
    let r = psm.transfer_function(ctx)?;
    let k = cf.k.to_ratmat();
    let yset = maximal_set(&cf.y.to_ratmat(), at, ctx)?;
    let vectors = yset
        .vectors
        .iter()
        .map(|b| expect_order(&r, k.mul_vec(&b.vec)?, b, b.is_polynomial(), ctx))
        .collect::<Result<Vec<_>>>()?;
    let set = finish(&r, at, vectors, ctx)?;
    Ok((cf, set))
}

fn finish<S: Scalar>(r: &RatMat<S>, at: &S, vectors: Vec<RootVector<S>>, ctx: &Context) -> Result<MaximalSet<S>> {
    let data = local_data(r, at, ctx)?;
    let set = MaximalSet {
        point: Point::Finite(at.clone()),
        vectors,
        kernel: data.kernel,
        sigmas: data.sigmas,
    };
    verify_set(r, &set, at, ctx)?;
    Ok(set)
}

/// Realization in coordinates [x0; x1] where A0 carries exactly the
/// eigenvalue λ0, with feedback acting on the x0 block only.
#[derive(Clone, Debug)]
pub struct LocalSplit<S> {
    /// Block diagonal, E = I.
    pub ss: StateSpace<S>,
    /// Size of the λ0 block.
    pub d0: usize,
    pub fd: FeedbackData<S>,
}

pub fn local_pole_split<S: Scalar>(ss: &StateSpace<S>, at: &S, ctx: &Context) -> Result<LocalSplit<S>> {
    let q = ss.order();
    let ei = ss
        .e
        .inverse(ctx)
        .ok_or_else(|| Error::Precondition("the local split needs an invertible E".into()))?;
    let ah = &ei * &ss.a;
    let p = (&ah - &Mat::identity(q).scale(at)).pow(q);
    let v0 = p.nullspace(ctx);
    let v1 = p.range(ctx);
    let d0 = v0.ncols();
    if d0 + v1.ncols() != q {
        return Err(Error::Verification("generalized eigenspaces do not span the state space".into()));
    }
    let t = v0.hstack(&v1);
    let ti = t.inverse(ctx).ok_or(Error::Singular)?;
    let mut a = &(&ti * &ah) * &t;
    for i in 0..d0 {
        for j in d0..q {
            a[(i, j)] = S::zero();
            a[(j, i)] = S::zero();
        }
    }
    let split = StateSpace::new(a, Mat::identity(q), &(&ti * &ei) * &ss.b, &ss.c * &t, ss.d.clone())?;
    if d0 == 0 {
        return Ok(LocalSplit {
            fd: FeedbackData::none(&split),
            ss: split,
            d0,
        });
    }
    let n = ss.inputs();
    let sub = StateSpace::new(
        split.a.submatrix(0, d0, 0, d0),
        Mat::identity(d0),
        split.b.submatrix(0, d0, 0, n),
        split.c.submatrix(0, split.c.nrows(), 0, d0),
        ss.d.clone(),
    )?;
    let lambda = choose_for(&split, &system_polymat(&split), d0, at, ctx)?;
    let fd0 = place(&sub, &lambda, ctx)?;
    let f = fd0.f.hstack(&Mat::zeros(n, q - d0));
    let closed = &split.a + &(&split.b * &f);
    Ok(LocalSplit {
        ss: split,
        d0,
        fd: FeedbackData { f, lambda, closed },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Recovery {
    /// K b from truncated series, purely numerical.
    Truncated,
    /// K b with K as a rational matrix.
    Exact,
}

#[derive(Clone, Debug)]
pub struct CoalescentReport<S> {
    pub set: MaximalSet<S>,
    pub lambda: Vec<S>,
    /// States of the finite realization.
    pub d: usize,
    /// Largest Jordan block at λ0.
    pub m: usize,
    pub recovery: Recovery,
    pub log: Vec<String>,
}

/// Maximal set of R at λ0 through the feedback pipeline: minimal proper
/// realization of the strictly proper part, pole assignment away from λ0,
/// root polynomials of S_Y, bottom blocks, recovery through K. The
/// polynomial part of R stays in the feedthrough term D(λ), so the
/// realization never has infinite eigenvalues.
///
/// In floating point a failed verification is retried with other rank
/// thresholds and other admissible eigenvalue sets before giving up.
pub fn coalescent_maximal_set<S: Scalar>(
    r: &RatMat<S>,
    at: &S,
    recovery: Recovery,
    ctx: &Context,
) -> Result<CoalescentReport<S>> {
    if S::EXACT {
        return coalescent_attempt(r, at, recovery, Choice::First, ctx);
    }
    let first = coalescent_attempt(r, at, recovery, Choice::First, ctx);
    let Err(first_err @ (Error::Verification(_) | Error::Collision(_))) = first else {
        return first;
    };
    for tol in FLOAT_RANK_LADDER.iter().map(|f| f * ctx.rank_tol) {
        for k in 0..FLOAT_DRAWS {
            let c = Context { rank_tol: tol, ..ctx.clone() };
            match coalescent_attempt(r, at, recovery, Choice::SmallGain(k), &c) {
                Ok(mut run) => {
                    run.log.insert(0, format!("retried: rank threshold {tol:e}, feedback gain rank {k}"));
                    return Ok(run);
                }
                Err(Error::Verification(_) | Error::Collision(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Err(first_err)
}

const FLOAT_RANK_LADDER: [f64; 5] = [1.0, 100.0, 0.01, 10.0, 1000.0];
const FLOAT_DRAWS: usize = 3;

fn coalescent_attempt<S: Scalar>(
    r: &RatMat<S>,
    at: &S,
    recovery: Recovery,
    choice: Choice,
    ctx: &Context,
) -> Result<CoalescentReport<S>> {
    let mut log = Vec::new();
    let (sp, pp) = split_proper(r, ctx)?;
    let ss = minimize(&realize_strictly_proper(&sp, ctx)?, ctx)?;
    let q = ss.order();
    log.push(format!("realization: {q} states"));
    let m = nilpotent_structure(&ss.a, &ss.e, at, ctx)?.largest();
    log.push(format!("largest Jordan block at the point: {m}"));
    let psm = |a: &Mat<S>, c: &Mat<S>| PolySystemMatrix {
        a: PolyMat::pencil(&-a, &Mat::identity(q)),
        b: PolyMat::from_constant(&ss.b),
        c: PolyMat::from_constant(c),
        d: pp.clone(),
    };
    let fd = if m == 0 {
        FeedbackData::none(&ss)
    } else {
        let sys = psm(&ss.a, &ss.c).to_polymat();
        let fd = assign_for(&ss, &sys, at, choice, ctx)?;
        log.push(format!(
            "assigned eigenvalues: [{}]",
            fd.lambda.iter().map(scalar_to_string).collect::<Vec<_>>().join(", ")
        ));
        fd
    };
    // C(λ) = C + D(λ) F
    let sy = PolySystemMatrix {
        c: PolyMat::from_constant(&ss.c).add(&pp.mul(&PolyMat::from_constant(&fd.f))),
        ..psm(&fd.closed, &ss.c)
    };
    let yset = poly_maximal_set(&sy.to_polymat(), at, ctx)?;
    log.push(format!("system matrix orders: {:?}", yset.orders()));
    let mut vectors = Vec::with_capacity(yset.len());
    for y in &yset.vectors {
        let b = RootVector {
            vec: y.vec[q..].to_vec(),
            ..y.clone()
        };
        let v = if m == 0 {
            b.vec.clone()
        } else {
            match recovery {
                Recovery::Truncated => apply_k_truncated(&ss, &fd, &b.vec, at, b.order + m, ctx)?,
                Recovery::Exact => apply_k_exact(&k_factor(&ss, &fd), &b.vec, ctx)?,
            }
        };
        vectors.push(expect_order(r, v, &b, recovery == Recovery::Truncated || m == 0, ctx)?);
    }
    let set = finish(r, at, vectors, ctx)?;
    log.push("maximal set verified".into());
    Ok(CoalescentReport {
        set,
        lambda: fd.lambda,
        d: q,
        m,
        recovery,
        log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_matrix_rows;
    use crate::pencilroots::pencil_maximal_set;
    use crate::realization::{project_root_vector, realize};
    use crate::scalar::{Exact, Float};

    fn e(v: i64) -> Exact {
        Exact::from_i64(v)
    }

    fn m(rows: &[&[i64]]) -> Mat<Exact> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&v| e(v)).collect()).collect())
    }

    fn rm<S: Scalar>(src: &str) -> RatMat<S> {
        RatMat::new(parse_matrix_rows(src).unwrap()).unwrap()
    }

    fn rv(src: &str) -> Vec<RatFun<Exact>> {
        parse_matrix_rows(src).unwrap().remove(0)
    }

    fn example() -> StateSpace<Exact> {
        StateSpace::new(m(&[&[0]]), m(&[&[1]]), m(&[&[1, 0]]), m(&[&[0], &[1]]), Mat::identity(2)).unwrap()
    }

    fn root(vec: Vec<RatFun<Exact>>, order: usize) -> RootVector<Exact> {
        RootVector {
            point: Point::Finite(e(0)),
            vec,
            order,
            polynomialized: true,
        }
    }

    #[test]
    fn worked_feedback_example() {
        let ctx = Context::default();
        let ss = example();
        let lambda = choose_lambda(&ss, &e(0), &ctx).unwrap();
        assert_eq!(lambda, vec![e(-1)]);
        let fd = assign_poles(&ss, &lambda, &ctx).unwrap();
        assert_eq!(fd.f, m(&[&[-1], &[-1]]));
        let sy = feedback_system(&ss, &fd);
        assert_eq!(sy.to_polymat().to_ratmat(), rm("-l-1, 1, 0; -1, 1, 0; 0, 0, 1"));
        let yset = pencil_maximal_set(&sy.at(&e(0)), &ctx).unwrap();
        assert_eq!(yset.vectors[0].value(), vec![e(1), e(1), e(0)]);
        let b = project_root_vector(&feedback_state_space(&ss, &fd).to_psm(), &yset.vectors[0], &ctx).unwrap();
        assert_eq!(b.vec, rv("1, 0"));
        assert_eq!(recover_truncated(&ss, &fd, &b, &ctx).unwrap().vec, rv("l, l-1"));
        assert_eq!(recover_exact(&ss, &fd, &b, &ctx).unwrap().vec, rv("l/(l+1), -1/(l+1)"));
        let k = k_factor(&ss, &fd).transfer_function(&ctx).unwrap();
        let ki = k_inverse(&ss, &fd).transfer_function(&ctx).unwrap();
        assert_eq!(k.mul(&ki).unwrap(), RatMat::identity(2));
    }

    #[test]
    fn pole_assignment() {
        let ctx = Context::default();
        let ss = StateSpace::new(m(&[&[0, 0], &[0, 0]]), Mat::identity(2), Mat::identity(2), Mat::identity(2), Mat::zeros(2, 2))
            .unwrap();
        let fd = assign_poles(&ss, &[e(-1), e(-2)], &ctx).unwrap();
        assert_eq!(fd.closed.charpoly(), poly_from_roots(&[e(-1), e(-2)]));
        let gain = StateSpace::gain(Mat::<Exact>::identity(2));
        assert_eq!(assign_poles(&gain, &[], &ctx).unwrap().f.ncols(), 0);
        assert!(matches!(assign_poles(&example(), &[e(0)], &ctx), Err(Error::Collision(_))));
        let unreachable = StateSpace::new(m(&[&[1, 0], &[0, 2]]), Mat::identity(2), m(&[&[1], &[0]]), m(&[&[1, 1]]), m(&[&[0]]))
            .unwrap();
        assert!(matches!(assign_poles(&unreachable, &[e(-1), e(-2)], &ctx), Err(Error::Uncontrollable)));
    }

    #[test]
    fn zero_feedback_is_identity() {
        let ctx = Context::default();
        let ss = example();
        let fd = FeedbackData::none(&ss);
        assert_eq!(feedback_system(&ss, &fd), ss.system_matrix());
        let r = rm::<Exact>("l, 0; 0, 1");
        let plain = realize(&r, &ctx).unwrap();
        let fd = FeedbackData::none(&plain);
        let b = root(rv("1, 0"), 1);
        assert_eq!(recover_exact(&plain, &fd, &b, &ctx).unwrap().vec, b.vec);
    }

    #[test]
    fn polynomial_coprime_factors() {
        let ctx = Context::default();
        let psm = example().to_psm();
        let cf = coprime_factor_polynomial(&psm, &[e(0)], &ctx).unwrap();
        // K differs from [[0, λ], [1, 0]] by a column swap
        let swapped_k = rm::<Exact>("0, l; 1, 0");
        let w = cf.k.to_ratmat().inverse().unwrap().mul(&swapped_k).unwrap();
        assert!(w.is_polynomial() && w.det().unwrap().is_constant());
        assert_eq!(cf.y.to_ratmat().mul(&w).unwrap(), rm("0, l; 1, 1"));
        let b = root(rv("-1, 1"), 1);
        let r = psm.transfer_function(&ctx).unwrap();
        let x = swapped_k.mul_vec(&b.vec).unwrap();
        assert_eq!(x, rv("l, -1"));
        assert_eq!(root_vector_order(&r, &x, &b.point, &ctx).unwrap(), RootCheck::Order(1));
        let (_, set) = coprime_maximal_set(&psm, &e(0), &ctx).unwrap();
        assert_eq!(set.orders(), vec![1]);

        let poly = realize(&rm::<Exact>("l^2, 1; 0, l"), &ctx).unwrap().to_psm();
        let cf = coprime_factor_polynomial(&poly, &[e(0), e(1)], &ctx).unwrap();
        assert!(cf.k.det().unwrap().is_constant());

        let x = PolyMat::<Exact>::from_fn(1, 1, |_, _| Poly::x());
        let bad = PolySystemMatrix::new(x.clone(), x.clone(), x, PolyMat::zeros(1, 1)).unwrap();
        assert!(matches!(coprime_factor_polynomial(&bad, &[], &ctx), Err(Error::NotMinimal)));
        assert!(coprime_factor_polynomial(&example().map(|v| crate::scalar::cast::<Float>(v)).to_psm(), &[], &ctx).is_err());
    }

    #[test]
    fn local_split() {
        let ctx = Context::default();
        let ls = local_pole_split(&example(), &e(0), &ctx).unwrap();
        assert_eq!(ls.d0, 1);
        assert_eq!(ls.fd.closed.charpoly(), poly_from_roots(&[e(-1)]));

        let r = rm::<Exact>("1/l, 0; 0, 1/(l-1)");
        let ss = realize(&r, &ctx).unwrap();
        let ls = local_pole_split(&ss, &e(0), &ctx).unwrap();
        assert_eq!(ls.d0, 1);
        let y = feedback_state_space(&ls.ss, &ls.fd).transfer_function(&ctx).unwrap();
        assert!(y.valuation_at(&e(0), &ctx) >= 0);
        assert!(y.valuation_at(&e(1), &ctx) < 0);

        let ls = local_pole_split(&ss, &e(5), &ctx).unwrap();
        assert_eq!(ls.d0, 0);
        assert!(ls.fd.f.is_zero());
    }

    #[test]
    fn coalescent_routes() {
        let ctx = Context::default();
        let r = rm::<Exact>("1, 0; 1/l, 1");
        let rep = coalescent_maximal_set(&r, &e(0), Recovery::Truncated, &ctx).unwrap();
        assert_eq!((rep.d, rep.m), (1, 1));
        assert_eq!(rep.set.vectors[0].vec, rv("l, l-1"));
        let rep = coalescent_maximal_set(&r, &e(0), Recovery::Exact, &ctx).unwrap();
        assert_eq!(rep.set.vectors[0].vec, rv("l/(l+1), -1/(l+1)"));

        // zero without a pole: no feedback
        let r = rm::<Exact>("l^2, l; 0, l + 1");
        let rep = coalescent_maximal_set(&r, &e(0), Recovery::Truncated, &ctx).unwrap();
        assert_eq!(rep.m, 0);
        assert_eq!(rep.set.orders(), vec![2]);

        for src in ["(l-1)/l^2, 0, l; 1, 1, 0", "l^2/(l+1), l; 1, 1/l^2", "1/l, 1; 0, l"] {
            let r = rm::<Exact>(src);
            let want = maximal_set(&r, &e(0), &ctx).unwrap().orders();
            for route in [Recovery::Truncated, Recovery::Exact] {
                let rep = coalescent_maximal_set(&r, &e(0), route, &ctx).unwrap();
                assert_eq!(rep.set.orders(), want, "{src}");
            }
        }
    }

    #[test]
    fn float_pipeline() {
        let ctx = Context::default();
        let r = rm::<Float>("1, 0; 1/l, 1");
        let z = Float::new(0.0, 0.0);
        let rep = coalescent_maximal_set(&r, &z, Recovery::Truncated, &ctx).unwrap();
        let v = &rep.set.vectors[0].vec;
        let c0 = v[0].num().coeffs().to_vec();
        let c1 = v[1].num().coeffs().to_vec();
        let s = c0[1];
        assert!((c0[0]).norm() < 1e-8);
        assert!((c1[0] + s).norm() < 1e-8 && (c1[1] - s).norm() < 1e-8);
    }
}
