//! Root vectors of rational matrices at a point, defined through the local
//! valuation: x is a root vector of order k at λ0 for R when κ[x] = 0,
//! x(λ0) is outside the evaluated kernel ker_λ0 R, and κ[R x] = k > 0.

use crate::dense::{in_span, Mat};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ratfun::{Point, RatFun, Valuation};
use crate::ratmat::toeplitz_cap;
use crate::ratmat::{smith_mcmillan_local, RatMat};
use crate::scalar::{Context, Scalar};
use crate::toeplitz::{blocks_to_polys, LocalAnalysis, RatSeries};

#[derive(Clone, Debug, PartialEq)]
pub struct RootVector<S> {
    pub point: Point<S>,
    pub vec: Vec<RatFun<S>>,
    pub order: usize,
    pub polynomialized: bool,
}

impl<S: Scalar> RootVector<S> {
    /// x(λ0); at infinity the value of x(1/μ) at μ = 0.
    pub fn value(&self) -> Vec<S> {
        match &self.point {
            Point::Finite(a) => eval_vec(&self.vec, a).expect("root vectors have no pole at their point"),
            Point::Infinity => {
                let sub: Vec<RatFun<S>> = self.vec.iter().map(|e| e.substitute_reciprocal()).collect();
                eval_vec(&sub, &S::zero()).expect("root vectors are proper at infinity")
            }
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.vec.iter().all(|e| e.is_polynomial())
    }

    pub fn degree(&self) -> Option<usize> {
        if !self.is_polynomial() {
            return None;
        }
        self.vec.iter().filter_map(|e| e.num().degree()).max()
    }

    pub fn len(&self) -> usize {
        self.vec.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vec.is_empty()
    }
}

/// Which condition of the definition a candidate vector fails.
#[derive(Clone, Debug, PartialEq)]
pub enum Rejection {
    /// κ[x] ≠ 0.
    Valuation(Valuation),
    /// x(λ0) ∈ ker_λ0 R.
    InLocalKernel,
    /// κ[R x] ≤ 0.
    NoZero(Valuation),
}

impl std::fmt::Display for Rejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rejection::Valuation(v) => write!(f, "valuation of the vector is {v}, not 0"),
            Rejection::InLocalKernel => write!(f, "value at the point lies in the local kernel"),
            Rejection::NoZero(v) => write!(f, "valuation of R x is {v}, not positive"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RootCheck {
    Order(usize),
    Rejected(Rejection),
}

impl RootCheck {
    pub fn order(&self) -> Option<usize> {
        match self {
            RootCheck::Order(k) => Some(*k),
            RootCheck::Rejected(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MaximalSet<S> {
    pub point: Point<S>,
    /// Ordered by non-increasing order.
    pub vectors: Vec<RootVector<S>>,
    /// Basis of ker_λ0 R evaluated at the point, one column per vector.
    pub kernel: Mat<S>,
    /// Partial multiplicities at the point, non-increasing.
    pub sigmas: Vec<i64>,
}

impl<S: Scalar> MaximalSet<S> {
    /// False when the point is not an eigenvalue (the set is empty).
    pub fn is_eigenvalue(&self) -> bool {
        !self.vectors.is_empty()
    }

    pub fn orders(&self) -> Vec<usize> {
        self.vectors.iter().map(|v| v.order).collect()
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// [N(λ0) | x_1(λ0) ... x_s(λ0)].
    pub fn evaluations(&self) -> Mat<S> {
        let n = self.kernel.nrows();
        let vals: Vec<Vec<S>> = self.vectors.iter().map(|v| v.value()).collect();
        self.kernel.hstack(&Mat::from_columns(n, &vals))
    }
}

/// A class in ker R(λ0) / ker_λ0 R.
#[derive(Clone, Debug)]
pub struct Eigenvector<S> {
    pub representative: Vec<S>,
    pub kernel_basis: Mat<S>,
}

pub(crate) fn eval_vec<S: Scalar>(x: &[RatFun<S>], at: &S) -> Option<Vec<S>> {
    x.iter().map(|e| e.eval(at)).collect()
}

pub(crate) fn vec_valuation<S: Scalar>(x: &[RatFun<S>], at: &S, ctx: &Context) -> Valuation {
    x.iter()
        .map(|e| e.valuation_at_with(at, ctx))
        .min()
        .unwrap_or(Valuation::Infinite)
}

/// Local quantities at a finite point: sigmas, the evaluated local kernel and
/// one maximal set as (order, vector) pairs.
pub(crate) struct LocalData<S> {
    pub sigmas: Vec<i64>,
    pub kernel: Mat<S>,
    pub roots: Vec<(usize, Vec<RatFun<S>>)>,
}

pub(crate) fn local_data<S: Scalar>(r: &RatMat<S>, at: &S, ctx: &Context) -> Result<LocalData<S>> {
    let n = r.ncols();
    if S::EXACT {
        let ls = smith_mcmillan_local(r, at, ctx)?;
        let v = ls.v.as_ref().expect("exact reduction returns witnesses");
        let rank = ls.sigmas.len();
        let exps = ls.diagonal_exponents();
        let kcols: Vec<Vec<S>> = (rank..n)
            .map(|j| eval_vec(&v.col(j), at).expect("V has no pole at the point"))
            .collect();
        let kernel = Mat::from_columns(n, &kcols);
        let mut roots: Vec<(usize, Vec<RatFun<S>>)> = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(j, &e)| (e as usize, v.col(j)))
            .collect();
        roots.reverse();
        return Ok(LocalData {
            sigmas: ls.sigmas,
            kernel,
            roots,
        });
    }
    let (an, m) = float_analysis(r, at, ctx)?;
    let sigmas = an.taus().into_iter().map(|t| t as i64 - m as i64).collect();
    let roots = an
        .chains(m + 1, ctx)
        .into_iter()
        .map(|(level, blocks)| {
            let polys = blocks_to_polys(&blocks);
            let neg = -at.clone();
            let vec = polys
                .into_iter()
                .map(|p| RatFun::from_poly(p.shift(&neg)))
                .collect();
            (level - m, vec)
        })
        .collect();
    Ok(LocalData {
        sigmas,
        kernel: an.kernel,
        roots,
    })
}

fn float_analysis<S: Scalar>(r: &RatMat<S>, at: &S, ctx: &Context) -> Result<(LocalAnalysis<S>, usize)> {
    let rank = r.normal_rank(ctx);
    let m = r.pole_order(at, ctx);
    let cap = toeplitz_cap(r, m, rank, ctx);
    let mut series = RatSeries::new(r, at, m, ctx);
    Ok((LocalAnalysis::run(&mut series, rank, cap, ctx)?, m))
}

/// Basis of ker_λ0 R(λ), evaluated at λ0.
pub fn local_kernel<S: Scalar>(r: &RatMat<S>, at: &S, ctx: &Context) -> Result<Mat<S>> {
    Ok(local_data(r, at, ctx)?.kernel)
}

/// κ[R x]. Exact: symbolic product. Float: convolution of Laurent
/// coefficients, with vanishing measured against ‖R‖‖x‖ in the window.
pub(crate) fn product_valuation<S: Scalar>(
    r: &RatMat<S>,
    x: &[RatFun<S>],
    at: &S,
    ctx: &Context,
) -> Result<Valuation> {
    if S::EXACT {
        let y = r.mul_vec(x)?;
        return Ok(vec_valuation(&y, at, ctx));
    }
    let m = r.pole_order(at, ctx) as i64;
    let len = 48usize;
    let rc = r.laurent_coeffs(at, -m, -m + len as i64 - 1, ctx)?;
    let xc: Vec<Vec<S>> = x
        .iter()
        .map(|e| e.laurent_with(at, 0, len as i64 - 1, ctx))
        .collect::<Result<_>>()?;
    let rscale = rc.iter().map(|c| c.max_abs()).fold(0.0, f64::max);
    let xscale = xc
        .iter()
        .flat_map(|c| c.iter().map(|v| v.modulus()))
        .fold(0.0, f64::max);
    let scale = rscale * xscale;
    if scale == 0.0 {
        return Ok(Valuation::Infinite);
    }
    for j in 0..len {
        let mut acc = vec![S::zero(); r.nrows()];
        for i in 0..=j {
            let xi: Vec<S> = xc.iter().map(|c| c[i].clone()).collect();
            for (a, v) in acc.iter_mut().zip(rc[j - i].mul_vec(&xi)) {
                *a = a.clone() + v;
            }
        }
        if acc.iter().any(|v| !v.negligible(scale, ctx.verify_tol)) {
            return Ok(Valuation::Finite(j as i64 - m));
        }
    }
    Ok(Valuation::Infinite)
}

fn in_local_kernel<S: Scalar>(kernel: &Mat<S>, x0: &[S], ctx: &Context) -> bool {
    let scale = x0.iter().map(|v| v.modulus()).fold(0.0, f64::max);
    if scale == 0.0 {
        return true;
    }
    let v: Vec<S> = if S::EXACT {
        x0.to_vec()
    } else {
        let s = S::from_f64(1.0 / scale);
        x0.iter().map(|e| e.clone() * s.clone()).collect()
    };
    in_span(kernel, &Mat::column_vector(&v), ctx)
}

/// Checks the three defining conditions against a precomputed local kernel.
pub(crate) fn check_with_kernel<S: Scalar>(
    r: &RatMat<S>,
    x: &[RatFun<S>],
    at: &S,
    kernel: &Mat<S>,
    ctx: &Context,
) -> Result<RootCheck> {
    let v = vec_valuation(x, at, ctx);
    if v != Valuation::Finite(0) {
        return Ok(RootCheck::Rejected(Rejection::Valuation(v)));
    }
    let x0 = eval_vec(x, at).expect("valuation 0 means no pole");
    if in_local_kernel(kernel, &x0, ctx) {
        return Ok(RootCheck::Rejected(Rejection::InLocalKernel));
    }
    match product_valuation(r, x, at, ctx)? {
        Valuation::Finite(k) if k > 0 => Ok(RootCheck::Order(k as usize)),
        other => Ok(RootCheck::Rejected(Rejection::NoZero(other))),
    }
}

/// R, x and the point moved to a finite point (infinity goes to 0 via 1/λ).
fn finite_view<S: Scalar>(
    r: &RatMat<S>,
    x: &[RatFun<S>],
    at: &Point<S>,
) -> (RatMat<S>, Vec<RatFun<S>>, S) {
    match at {
        Point::Finite(a) => (r.clone(), x.to_vec(), a.clone()),
        Point::Infinity => (
            r.substitute_reciprocal(),
            x.iter().map(|e| e.substitute_reciprocal()).collect(),
            S::zero(),
        ),
    }
}

pub fn root_vector_order<S: Scalar>(
    r: &RatMat<S>,
    x: &[RatFun<S>],
    at: &Point<S>,
    ctx: &Context,
) -> Result<RootCheck> {
    if x.len() != r.ncols() {
        return Err(Error::Dimension(format!(
            "vector of length {} for a matrix with {} columns",
            x.len(),
            r.ncols()
        )));
    }
    let (r, x, a) = finite_view(r, x, at);
    let kernel = local_kernel(&r, &a, ctx)?;
    check_with_kernel(&r, &x, &a, &kernel, ctx)
}

/// Scales so the value at the point has first nonzero entry 1 (exact only).
pub(crate) fn normalize<S: Scalar>(x: Vec<RatFun<S>>, at: &S) -> Vec<RatFun<S>> {
    if !S::EXACT {
        return x;
    }
    let x0 = eval_vec(&x, at).expect("no pole at the point");
    match x0.iter().find(|v| !v.is_zero()) {
        Some(p) => {
            let inv = S::one() / p.clone();
            x.iter().map(|e| e.scale(&inv)).collect()
        }
        None => x,
    }
}

/// Basis of ker R(λ0): the local kernel followed by the values of a maximal set.
pub fn ker_at<S: Scalar>(r: &RatMat<S>, at: &S, ctx: &Context) -> Result<Mat<S>> {
    Ok(maximal_set(r, at, ctx)?.evaluations())
}

/// A maximal set at a finite point, built from the local Smith-McMillan
/// witness V on the exact backend and from Toeplitz chains on the float
/// backend. Verified before it is returned. Empty when λ0 is not an eigenvalue.
pub fn maximal_set<S: Scalar>(r: &RatMat<S>, at: &S, ctx: &Context) -> Result<MaximalSet<S>> {
    let data = local_data(r, at, ctx)?;
    let vectors = data
        .roots
        .into_iter()
        .map(|(order, vec)| RootVector {
            point: Point::Finite(at.clone()),
            vec: normalize(vec, at),
            order,
            polynomialized: false,
        })
        .collect();
    let set = MaximalSet {
        point: Point::Finite(at.clone()),
        vectors,
        kernel: data.kernel,
        sigmas: data.sigmas,
    };
    verify_set(r, &set, at, ctx)?;
    Ok(set)
}

/// Order, independence and cardinality checks for a set at a finite point.
pub(crate) fn verify_set<S: Scalar>(r: &RatMat<S>, set: &MaximalSet<S>, at: &S, ctx: &Context) -> Result<()> {
    for (i, v) in set.vectors.iter().enumerate() {
        match check_with_kernel(r, &v.vec, at, &set.kernel, ctx)? {
            RootCheck::Order(k) if k == v.order => {}
            RootCheck::Order(k) => {
                return Err(Error::Verification(format!(
                    "vector {i} has order {k}, expected {}",
                    v.order
                )))
            }
            RootCheck::Rejected(why) => {
                return Err(Error::Verification(format!("vector {i} rejected: {why}")))
            }
        }
    }
    if !independent(&set.evaluations(), ctx) {
        return Err(Error::Verification("values at the point are not independent".into()));
    }
    let positive: Vec<usize> = set
        .sigmas
        .iter()
        .filter(|&&s| s > 0)
        .map(|&s| s as usize)
        .collect();
    if positive != set.orders() {
        return Err(Error::Verification(format!(
            "orders {:?} differ from the positive partial multiplicities {:?}",
            set.orders(),
            positive
        )));
    }
    Ok(())
}

/// Full column rank after scaling each column to unit size.
pub(crate) fn independent<S: Scalar>(m: &Mat<S>, ctx: &Context) -> bool {
    if m.ncols() == 0 {
        return true;
    }
    if S::EXACT {
        return m.rank(ctx) == m.ncols();
    }
    let cols: Vec<Vec<S>> = (0..m.ncols())
        .map(|j| {
            let c = m.col(j);
            let s = c.iter().map(|v| v.modulus()).fold(0.0, f64::max);
            if s == 0.0 {
                return c;
            }
            let inv = S::from_f64(1.0 / s);
            c.into_iter().map(|v| v * inv.clone()).collect()
        })
        .collect();
    Mat::from_columns(m.nrows(), &cols).rank(ctx) == m.ncols()
}

/// Checks that `set` is a maximal set for `r` at its point: every vector has
/// its stated order, the values are independent modulo the local kernel, and
/// the orders are the positive partial multiplicities.
pub fn verify_maximal<S: Scalar>(r: &RatMat<S>, set: &MaximalSet<S>, ctx: &Context) -> Result<()> {
    let vecs: Vec<Vec<RatFun<S>>> = set.vectors.iter().map(|v| v.vec.clone()).collect();
    let (rr, a) = match &set.point {
        Point::Finite(a) => (r.clone(), a.clone()),
        Point::Infinity => (r.substitute_reciprocal(), S::zero()),
    };
    let data = local_data(&rr, &a, ctx)?;
    let vectors = vecs
        .into_iter()
        .zip(&set.vectors)
        .map(|(v, orig)| RootVector {
            point: Point::Finite(a.clone()),
            vec: finite_view(r, &v, &set.point).1,
            order: orig.order,
            polynomialized: orig.polynomialized,
        })
        .collect();
    let local = MaximalSet {
        point: Point::Finite(a.clone()),
        vectors,
        kernel: data.kernel,
        sigmas: data.sigmas,
    };
    verify_set(&rr, &local, &a, ctx)
}

/// True iff the values of `vectors` together with the local kernel form a
/// basis of ker R(λ0).
pub fn is_complete<S: Scalar>(
    r: &RatMat<S>,
    vectors: &[RootVector<S>],
    at: &S,
    ctx: &Context,
) -> Result<bool> {
    let reference = maximal_set(r, at, ctx)?;
    let n = r.ncols();
    let vals: Vec<Vec<S>> = vectors.iter().map(|v| v.value()).collect();
    let m = reference.kernel.hstack(&Mat::from_columns(n, &vals));
    Ok(vectors.len() == reference.len() && independent(&m, ctx))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// x ↦ B x.
    Push,
    /// x ↦ B⁻¹ x.
    Pull,
}

/// Maps a set through a matrix that is unimodular over the local ring at
/// the set's point, then re-verifies it against `target`. If Q = A R B with
/// A, B locally unimodular, pushing a set of Q through B gives a set of R
/// and pulling a set of R through B gives a set of Q.
pub fn transform_set<S: Scalar>(
    target: &RatMat<S>,
    b: &RatMat<S>,
    set: &MaximalSet<S>,
    direction: Direction,
    ctx: &Context,
) -> Result<MaximalSet<S>> {
    let Point::Finite(at) = &set.point else {
        return Err(Error::Precondition("transform_set works at finite points".into()));
    };
    if !crate::ratmat::is_local_unimodular(b, at, ctx)? {
        return Err(Error::NotLocallyUnimodular(format!("{at}")));
    }
    let map = match direction {
        Direction::Push => b.clone(),
        Direction::Pull => b.inverse()?,
    };
    let vectors = set
        .vectors
        .iter()
        .map(|v| {
            Ok(RootVector {
                point: v.point.clone(),
                vec: map.mul_vec(&v.vec)?,
                order: v.order,
                polynomialized: false,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let data = local_data(target, at, ctx)?;
    let out = MaximalSet {
        point: set.point.clone(),
        vectors,
        kernel: data.kernel,
        sigmas: data.sigmas,
    };
    verify_set(target, &out, at, ctx)?;
    Ok(out)
}

/// Representatives of the eigenvector classes at λ0. With `orthogonalize`
/// (float only) each representative is projected onto the orthogonal
/// complement of the local kernel.
pub fn eigenvectors<S: Scalar>(
    r: &RatMat<S>,
    at: &S,
    orthogonalize: bool,
    ctx: &Context,
) -> Result<Vec<Eigenvector<S>>> {
    let set = maximal_set(r, at, ctx)?;
    Ok(eigenvectors_of(&set, orthogonalize, ctx))
}

pub fn eigenvectors_of<S: Scalar>(set: &MaximalSet<S>, orthogonalize: bool, ctx: &Context) -> Vec<Eigenvector<S>> {
    let q = if orthogonalize && !S::EXACT && set.kernel.ncols() > 0 {
        Some(set.kernel.range(ctx))
    } else {
        None
    };
    set.vectors
        .iter()
        .map(|v| {
            let mut rep = v.value();
            if let Some(q) = &q {
                let c = q.conj_transpose().mul_vec(&rep);
                let p = q.mul_vec(&c);
                rep = rep.into_iter().zip(p).map(|(a, b)| a - b).collect();
            }
            Eigenvector {
                representative: rep,
                kernel_basis: set.kernel.clone(),
            }
        })
        .collect()
}

/// Maximal set at infinity: x(λ) is a root vector of order k at ∞ for R
/// exactly when x(1/μ) is one at 0 for R(1/μ).
pub fn at_infinity<S: Scalar>(r: &RatMat<S>, ctx: &Context) -> Result<MaximalSet<S>> {
    let rr = r.substitute_reciprocal();
    let set = maximal_set(&rr, &S::zero(), ctx)?;
    Ok(MaximalSet {
        point: Point::Infinity,
        vectors: set
            .vectors
            .into_iter()
            .map(|v| RootVector {
                point: Point::Infinity,
                vec: v.vec.iter().map(|e| e.substitute_reciprocal()).collect(),
                order: v.order,
                polynomialized: false,
            })
            .collect(),
        kernel: set.kernel,
        sigmas: set.sigmas,
    })
}

/// Clears denominators with their (unit) lcm, normalized to keep the value
/// at λ0, then keeps the Taylor terms about λ0 of degree < k + m, where -m is
/// the smallest partial multiplicity (m = 0 without a pole).
pub fn polynomialize<S: Scalar>(x: &RootVector<S>, r: &RatMat<S>, ctx: &Context) -> Result<RootVector<S>> {
    let Point::Finite(at) = &x.point else {
        return Err(Error::Precondition("polynomialize works at finite points".into()));
    };
    let mut lcd = Poly::one();
    for e in &x.vec {
        lcd = crate::ratmat::poly_lcm(&lcd, e.den(), ctx);
    }
    let c = lcd.eval(at);
    if c.is_zero() {
        return Err(Error::Precondition("vector has a pole at its point".into()));
    }
    let lcd = lcd.scale(&(S::one() / c));
    let m = r.pole_order(at, ctx);
    let keep = x.order + m;
    let neg = -at.clone();
    let vec: Vec<RatFun<S>> = x
        .vec
        .iter()
        .map(|e| {
            let p = e.num() * &lcd.div_exact(e.den()).expect("lcm is a multiple");
            RatFun::from_poly(p.shift(at).truncate(keep).shift(&neg))
        })
        .collect();
    let out = RootVector {
        point: x.point.clone(),
        vec,
        order: x.order,
        polynomialized: true,
    };
    match root_vector_order(r, &out.vec, &out.point, ctx)? {
        RootCheck::Order(k) if k == x.order => Ok(out),
        other => Err(Error::Verification(format!(
            "polynomialized vector no longer has order {}: {other:?}",
            x.order
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_matrix_rows, parse_ratfun};
    use crate::scalar::{Exact, Float};
    use num_traits::Zero;

    fn rm<S: Scalar>(src: &str) -> RatMat<S> {
        RatMat::new(parse_matrix_rows(src).unwrap()).unwrap()
    }

    fn v<S: Scalar>(items: &[&str]) -> Vec<RatFun<S>> {
        items.iter().map(|s| parse_ratfun(s).unwrap()).collect()
    }

    fn zero() -> Point<Exact> {
        Point::Finite(Exact::from_i64(0))
    }

    #[test]
    fn orders_and_rejections() {
        let ctx = Context::default();
        let y = rm::<Exact>("0, l; 1, 1");
        assert_eq!(root_vector_order(&y, &v(&["-1", "1"]), &zero(), &ctx).unwrap(), RootCheck::Order(1));
        let r = rm::<Exact>("1, 0; 1/l, 1");
        assert_eq!(root_vector_order(&r, &v(&["l", "-1"]), &zero(), &ctx).unwrap(), RootCheck::Order(1));
        assert_eq!(
            root_vector_order(&r, &v(&["0", "1"]), &zero(), &ctx).unwrap(),
            RootCheck::Rejected(Rejection::NoZero(Valuation::Finite(0)))
        );
        assert_eq!(
            root_vector_order(&r, &v(&["l", "l"]), &zero(), &ctx).unwrap(),
            RootCheck::Rejected(Rejection::Valuation(Valuation::Finite(1)))
        );
        let k = rm::<Exact>("l, l^2");
        assert_eq!(
            root_vector_order(&k, &v(&["-l", "1"]), &zero(), &ctx).unwrap(),
            RootCheck::Rejected(Rejection::InLocalKernel)
        );
        assert!(root_vector_order(&k, &v(&["1"]), &zero(), &ctx).is_err());
    }

    #[test]
    fn maximal_sets() {
        let ctx = Context::default();
        let z = Exact::from_i64(0);
        let r = rm::<Exact>("1, 0; 1/l, 1");
        let set = maximal_set(&r, &z, &ctx).unwrap();
        assert_eq!(set.orders(), vec![1]);
        assert_eq!(set.kernel.ncols(), 0);
        let val = set.vectors[0].value();
        assert!(val[0].is_zero() && !val[1].is_zero());

        let d = rm::<Exact>("l^2, 0, 0; 0, l, 0; 0, 0, 1");
        let set = maximal_set(&d, &z, &ctx).unwrap();
        assert_eq!(set.orders(), vec![2, 1]);
        assert!(is_complete(&d, &set.vectors, &z, &ctx).unwrap());
        assert!(!is_complete(&d, &set.vectors[..1], &z, &ctx).unwrap());

        let y = rm::<Exact>("0, l; 1, 1");
        let set = maximal_set(&y, &z, &ctx).unwrap();
        assert_eq!(set.orders(), vec![1]);
        let val = set.vectors[0].value();
        assert_eq!(val[0], -val[1].clone());

        let id = rm::<Exact>("1, 0; 0, 1");
        let set = maximal_set(&id, &z, &ctx).unwrap();
        assert!(!set.is_eigenvalue());
        assert_eq!(ker_at(&id, &z, &ctx).unwrap().ncols(), 0);
    }

    #[test]
    fn singular_kernel_and_eigenvectors() {
        let ctx = Context::default();
        let z = Exact::from_i64(0);
        let k = rm::<Exact>("l, l^2");
        let ker = ker_at(&k, &z, &ctx).unwrap();
        assert_eq!(ker.rank(&ctx), 2);
        let ev = eigenvectors(&k, &z, false, &ctx).unwrap();
        assert_eq!(ev.len(), 1);
        assert_eq!(ev[0].kernel_basis.ncols(), 1);
        assert!(ev[0].kernel_basis[(0, 0)].is_zero());
        assert!(!ev[0].representative[0].is_zero());
        assert!(eigenvectors(&rm::<Exact>("1, 0; 0, 1"), &z, false, &ctx).unwrap().is_empty());
    }

    #[test]
    fn float_matches_exact() {
        let ctx = Context::default();
        for src in ["1, 0; 1/l, 1", "l^2, 0, 0; 0, l, 0; 0, 0, 1", "l, l^2", "(l-1)/l^2, 0, l; 1, 1, 0"] {
            let e = maximal_set(&rm::<Exact>(src), &Exact::from_i64(0), &ctx).unwrap();
            let f = maximal_set(&rm::<Float>(src), &Float::new(0.0, 0.0), &ctx).unwrap();
            assert_eq!(e.orders(), f.orders(), "{src}");
            assert_eq!(e.sigmas, f.sigmas, "{src}");
        }
    }

    #[test]
    fn infinity() {
        let ctx = Context::default();
        let p = rm::<Exact>("1, l; 0, 1");
        let set = at_infinity(&p, &ctx).unwrap();
        assert_eq!(set.orders(), vec![1]);
        verify_maximal(&p, &set, &ctx).unwrap();
        let x = v(&["-1", "1/l"]);
        assert_eq!(root_vector_order(&p, &x, &Point::Infinity, &ctx).unwrap(), RootCheck::Order(1));
        let d = rm::<Exact>("1/l, 0; 0, 1");
        let set = at_infinity(&d, &ctx).unwrap();
        assert_eq!(set.orders(), vec![1]);
        assert!(set.vectors[0].value()[1].is_zero());
        assert!(at_infinity(&rm::<Exact>("2, 1; 1, 1"), &ctx).unwrap().is_empty());
    }

    #[test]
    fn transforms() {
        let ctx = Context::default();
        let z = Exact::from_i64(0);
        let d = rm::<Exact>("l^2, 0; 0, l");
        let set = maximal_set(&d, &z, &ctx).unwrap();
        let same = transform_set(&d, &RatMat::identity(2), &set, Direction::Push, &ctx).unwrap();
        assert_eq!(same.vectors, set.vectors);
        // d = d * B * B^-1 with B = diag(2, 1): pulling a set of d through B gives one of d B.
        let b = rm::<Exact>("2, 0; 0, 1");
        let db = d.mul(&b).unwrap();
        let pulled = transform_set(&db, &b, &set, Direction::Pull, &ctx).unwrap();
        assert_eq!(pulled.orders(), set.orders());
        assert!(transform_set(&d, &rm("l, 0; 0, 1"), &set, Direction::Push, &ctx).is_err());
    }

    #[test]
    fn polynomialize_clears_and_truncates() {
        let ctx = Context::default();
        let r = rm::<Exact>("1, 0; 1/l, 1");
        let x = RootVector {
            point: zero(),
            vec: v(&["l/(l+1)", "-1/(l+1)"]),
            order: 1,
            polynomialized: false,
        };
        let p = polynomialize(&x, &r, &ctx).unwrap();
        assert!(p.is_polynomial());
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p.value(), x.value());

        let r = rm::<Exact>("l, 0; 0, l");
        let x = RootVector {
            point: zero(),
            vec: v(&["1/(l+1)", "1"]),
            order: 1,
            polynomialized: false,
        };
        let p = polynomialize(&x, &r, &ctx).unwrap();
        assert_eq!(p.vec, v(&["1", "1"]));
    }
}
