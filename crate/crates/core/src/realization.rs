//! Generalized state-space realizations R(λ) = C(λE - A)^-1 B + D and
//! polynomial system matrices P(λ) = [[-A(λ), B(λ)], [C(λ), D(λ)]] with
//! transfer function D + C A^-1 B.

use rand::Rng;

use crate::dense::Mat;
use crate::error::{Error, Result};
use crate::pencilroots::Pencil;
use crate::poly::Poly;
use crate::ratfun::{Point, RatFun};
use crate::ratmat::{Nodes, PolyMat, RatMat};
use crate::rootvec::{
    local_data, root_vector_order, verify_maximal, verify_set, MaximalSet, RootCheck, RootVector,
};
use crate::scalar::{Context, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct StateSpace<S> {
    pub a: Mat<S>,
    pub e: Mat<S>,
    pub b: Mat<S>,
    pub c: Mat<S>,
    pub d: Mat<S>,
}

impl<S: Scalar> StateSpace<S> {
    pub fn new(a: Mat<S>, e: Mat<S>, b: Mat<S>, c: Mat<S>, d: Mat<S>) -> Result<Self> {
        let q = a.nrows();
        let ok = a.ncols() == q
            && e.nrows() == q
            && e.ncols() == q
            && b.nrows() == q
            && c.ncols() == q
            && d.nrows() == c.nrows()
            && d.ncols() == b.ncols();
        if !ok {
            return Err(Error::Dimension(format!(
                "A {}x{}, E {}x{}, B {}x{}, C {}x{}, D {}x{}",
                a.nrows(),
                a.ncols(),
                e.nrows(),
                e.ncols(),
                b.nrows(),
                b.ncols(),
                c.nrows(),
                c.ncols(),
                d.nrows(),
                d.ncols()
            )));
        }
        Ok(StateSpace { a, e, b, c, d })
    }

    /// No states: R = D.
    pub fn gain(d: Mat<S>) -> Self {
        StateSpace {
            a: Mat::zeros(0, 0),
            e: Mat::zeros(0, 0),
            b: Mat::zeros(0, d.ncols()),
            c: Mat::zeros(d.nrows(), 0),
            d,
        }
    }

    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    pub fn outputs(&self) -> usize {
        self.d.nrows()
    }

    pub fn inputs(&self) -> usize {
        self.d.ncols()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> StateSpace<T> {
        StateSpace {
            a: self.a.map(&f),
            e: self.e.map(&f),
            b: self.b.map(&f),
            c: self.c.map(&f),
            d: self.d.map(&f),
        }
    }

    /// λE - A.
    pub fn pencil(&self) -> PolyMat<S> {
        PolyMat::pencil(&-&self.a, &self.e)
    }

    pub fn is_regular(&self, ctx: &Context) -> bool {
        self.order() == 0 || self.pencil().to_ratmat().normal_rank(ctx) == self.order()
    }

    pub fn system_matrix(&self) -> SystemMatrix<S> {
        let (q, m, n) = (self.order(), self.outputs(), self.inputs());
        let m0 = self.a.hstack(&self.b).vstack(&self.c.hstack(&self.d));
        let m1 = (-&self.e)
            .hstack(&Mat::zeros(q, n))
            .vstack(&Mat::zeros(m, q + n));
        SystemMatrix { m0, m1, q, m, n }
    }

    pub fn to_psm(&self) -> PolySystemMatrix<S> {
        PolySystemMatrix {
            a: self.pencil(),
            b: PolyMat::from_constant(&self.b),
            c: PolyMat::from_constant(&self.c),
            d: PolyMat::from_constant(&self.d),
        }
    }

    pub fn transfer_function(&self, ctx: &Context) -> Result<RatMat<S>> {
        self.to_psm().transfer_function(ctx)
    }

    /// R(x), or `None` when x is an eigenvalue of the pencil.
    pub fn eval(&self, x: &S, ctx: &Context) -> Option<Mat<S>> {
        if self.order() == 0 {
            return Some(self.d.clone());
        }
        let p = &self.e.scale(x) - &self.a;
        let sol = p.solve(&self.b, ctx)?;
        Some(&self.d + &(&self.c * &sol))
    }

    /// Parallel connection: the transfer functions add.
    pub fn parallel(&self, o: &Self) -> Result<Self> {
        Self::new(
            self.a.block_diag(&o.a),
            self.e.block_diag(&o.e),
            self.b.vstack(&o.b),
            self.c.hstack(&o.c),
            &self.d + &o.d,
        )
    }

    /// Applies x -> T x (new state = T^-1 old state) and premultiplies the
    /// state equation by `left`.
    pub fn transform(&self, left: &Mat<S>, t: &Mat<S>) -> Self {
        StateSpace {
            a: &(left * &self.a) * t,
            e: &(left * &self.e) * t,
            b: left * &self.b,
            c: &self.c * t,
            d: self.d.clone(),
        }
    }
}

/// The pencil [[A - λE, B], [C, D]] = M0 + λ M1.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemMatrix<S> {
    pub m0: Mat<S>,
    pub m1: Mat<S>,
    /// States, outputs, inputs.
    pub q: usize,
    pub m: usize,
    pub n: usize,
}

impl<S: Scalar> SystemMatrix<S> {
    pub fn to_polymat(&self) -> PolyMat<S> {
        PolyMat::pencil(&self.m0, &self.m1)
    }

    pub fn at(&self, at: &S) -> Pencil<S> {
        Pencil::at_point(&self.m0, &self.m1, at).expect("blocks have matching shapes")
    }
}

/// P(λ) = [[-A(λ), B(λ)], [C(λ), D(λ)]].
#[derive(Clone, Debug, PartialEq)]
pub struct PolySystemMatrix<S> {
    pub a: PolyMat<S>,
    pub b: PolyMat<S>,
    pub c: PolyMat<S>,
    pub d: PolyMat<S>,
}

impl<S: Scalar> PolySystemMatrix<S> {
    pub fn new(a: PolyMat<S>, b: PolyMat<S>, c: PolyMat<S>, d: PolyMat<S>) -> Result<Self> {
        let q = a.nrows();
        if a.ncols() != q
            || b.nrows() != q
            || c.ncols() != q
            || d.nrows() != c.nrows()
            || d.ncols() != b.ncols()
        {
            return Err(Error::Dimension("system matrix blocks do not fit together".into()));
        }
        Ok(PolySystemMatrix { a, b, c, d })
    }

    pub fn states(&self) -> usize {
        self.a.nrows()
    }

    pub fn outputs(&self) -> usize {
        self.d.nrows()
    }

    pub fn inputs(&self) -> usize {
        self.d.ncols()
    }

    pub fn to_polymat(&self) -> PolyMat<S> {
        self.a.neg().hstack(&self.b).vstack(&self.c.hstack(&self.d))
    }

    pub fn to_ratmat(&self) -> RatMat<S> {
        self.to_polymat().to_ratmat()
    }

    /// [-A B].
    pub fn input_compound(&self) -> PolyMat<S> {
        self.a.neg().hstack(&self.b)
    }

    /// [-A; C].
    pub fn output_compound(&self) -> PolyMat<S> {
        self.a.neg().vstack(&self.c)
    }

    pub fn transfer_function(&self, ctx: &Context) -> Result<RatMat<S>> {
        let (num, det) = schur_numerator(&self.a, &self.c, &self.b, ctx)?;
        let mut out = RatMat::zeros(self.outputs(), self.inputs());
        for i in 0..out.nrows() {
            for j in 0..out.ncols() {
                let top = num.get(i, j) + &(self.d.get(i, j) * &det);
                out.set(i, j, RatFun::new_with(top, det.clone(), ctx)?);
            }
        }
        Ok(out)
    }

    /// A(λ)^-1 B(λ).
    pub fn a_inv_b(&self, ctx: &Context) -> Result<RatMat<S>> {
        let q = self.states();
        let (num, det) = schur_numerator(&self.a, &PolyMat::identity(q), &self.b, ctx)?;
        Ok(RatMat::from_fn(q, self.inputs(), |i, j| {
            RatFun::new_with(num.get(i, j).clone(), det.clone(), ctx).expect("det is nonzero")
        }))
    }
}

/// (left adj(A) right, det A), both by evaluation at nodes where A is
/// invertible and interpolation.
pub fn schur_numerator<S: Scalar>(
    a: &PolyMat<S>,
    left: &PolyMat<S>,
    right: &PolyMat<S>,
    ctx: &Context,
) -> Result<(PolyMat<S>, Poly<S>)> {
    let q = a.nrows();
    if q == 0 {
        return Ok((left.mul(right), Poly::one()));
    }
    if a.to_ratmat().normal_rank(ctx) < q {
        return Err(Error::SingularPencil);
    }
    let da = a.degree().unwrap_or(0);
    let bound = left.degree().unwrap_or(0) + (q - 1) * da + right.degree().unwrap_or(0);
    let count = bound.max(q * da) + 1;
    let nodes = Nodes::new(count, 1.0, |x: &S| {
        let ax = a.eval(x);
        if S::EXACT {
            ax.det().is_zero()
        } else {
            ax.rank(ctx) < q
        }
    });
    let (m, n) = (left.nrows(), right.ncols());
    let mut vals: Vec<Vec<S>> = vec![Vec::with_capacity(count); m * n + 1];
    for x in &nodes.points {
        let ax = a.eval(x);
        let det = ax.det();
        let sol = ax
            .solve(&right.eval(x), ctx)
            .ok_or_else(|| Error::Verification("interpolation node hit a singular point".into()))?;
        let val = &left.eval(x) * &sol;
        for i in 0..m {
            for j in 0..n {
                vals[i * n + j].push(val[(i, j)].clone() * det.clone());
            }
        }
        vals[m * n].push(det);
    }
    let det = nodes.interpolate(&vals[m * n]);
    let num = PolyMat::from_fn(m, n, |i, j| nodes.interpolate(&vals[i * n + j]));
    Ok((num, det))
}

/// Entrywise split R = Rs + Rp into a strictly proper and a polynomial part.
pub fn split_proper<S: Scalar>(r: &RatMat<S>, ctx: &Context) -> Result<(RatMat<S>, PolyMat<S>)> {
    let (m, n) = (r.nrows(), r.ncols());
    let mut sp = RatMat::zeros(m, n);
    let mut pp = PolyMat::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            let f = r.get(i, j);
            let (quo, rem) = f.num().divmod(f.den())?;
            sp.set(i, j, RatFun::new_with(rem, f.den().clone(), ctx)?);
            pp.set(i, j, quo);
        }
    }
    Ok((sp, pp))
}

/// Controllable companion realization of a strictly proper R with E = I,
/// one block per column of size deg(column lcm).
pub fn realize_strictly_proper<S: Scalar>(r: &RatMat<S>, ctx: &Context) -> Result<StateSpace<S>> {
    let (m, n) = (r.nrows(), r.ncols());
    let lcms = r.column_lcms(ctx);
    let sizes: Vec<usize> = lcms.iter().map(|l| l.degree().unwrap_or(0)).collect();
    let q: usize = sizes.iter().sum();
    let mut a = Mat::zeros(q, q);
    let mut b = Mat::zeros(q, n);
    let mut c = Mat::zeros(m, q);
    let mut off = 0;
    for j in 0..n {
        let k = sizes[j];
        if k == 0 {
            continue;
        }
        let l = &lcms[j];
        for t in 0..k - 1 {
            a[(off + t, off + t + 1)] = S::one();
        }
        for t in 0..k {
            a[(off + k - 1, off + t)] = -l.coeff(t);
        }
        b[(off + k - 1, j)] = S::one();
        for i in 0..m {
            let f = r.get(i, j);
            if f.is_zero() {
                continue;
            }
            let numer = f.num() * &l.div_exact(f.den())?;
            for t in 0..k {
                c[(i, off + t)] = numer.coeff(t);
            }
        }
        off += k;
    }
    StateSpace::new(a, Mat::identity(q), b, c, Mat::zeros(m, n))
}

/// A = I, E nilpotent: one shift chain per column of size 1 + degree.
fn realize_polynomial<S: Scalar>(p: &PolyMat<S>) -> Result<StateSpace<S>> {
    let (m, n) = (p.nrows(), p.ncols());
    let degs: Vec<usize> = (0..n)
        .map(|j| (0..m).filter_map(|i| p.get(i, j).degree()).max().unwrap_or(0))
        .collect();
    let q: usize = degs.iter().filter(|&&d| d > 0).map(|d| d + 1).sum();
    let mut e = Mat::zeros(q, q);
    let mut b = Mat::zeros(q, n);
    let mut c = Mat::zeros(m, q);
    let mut off = 0;
    for j in 0..n {
        let dj = degs[j];
        if dj == 0 {
            continue;
        }
        for t in 0..dj {
            e[(off + t + 1, off + t)] = S::one();
        }
        b[(off, j)] = S::one();
        for i in 0..m {
            for t in 1..=dj {
                c[(i, off + t)] = -p.get(i, j).coeff(t);
            }
        }
        off += dj + 1;
    }
    StateSpace::new(Mat::identity(q), e, b, c, p.coeff(0))
}

/// A minimal realization: companion blocks for the strictly proper part,
/// nilpotent shift chains for the polynomial part, then [`minimize`].
pub fn realize<S: Scalar>(r: &RatMat<S>, ctx: &Context) -> Result<StateSpace<S>> {
    let (sp, pp) = split_proper(r, ctx)?;
    let full = realize_strictly_proper(&sp, ctx)?.parallel(&realize_polynomial(&pp)?)?;
    minimize(&full, ctx)
}

/// Removes uncontrollable and unobservable parts. The pencil is split into
/// its finite part (E = I) and infinite part (A = I, E nilpotent) and each
/// is reduced to its reachable, then observable, subspace.
pub fn minimize<S: Scalar>(ss: &StateSpace<S>, ctx: &Context) -> Result<StateSpace<S>> {
    if ss.order() == 0 {
        return Ok(ss.clone());
    }
    if !ss.is_regular(ctx) {
        return Err(Error::SingularPencil);
    }
    let q = ss.order();
    if ss.e == Mat::identity(q) {
        let (a, b, c) = kalman(&ss.a, &ss.b, &ss.c, ctx);
        let k = a.nrows();
        return StateSpace::new(a, Mat::identity(k), b, c, ss.d.clone());
    }
    let split = weierstrass(ss, ctx)?;
    let (af, bf, cf) = kalman(&split.finite.a, &split.finite.b, &split.finite.c, ctx);
    let (ni, bi, ci) = kalman(&split.infinite.e, &split.infinite.b, &split.infinite.c, ctx);
    let (kf, ki) = (af.nrows(), ni.nrows());
    StateSpace::new(
        af.block_diag(&Mat::identity(ki)),
        Mat::identity(kf).block_diag(&ni),
        bf.vstack(&bi),
        cf.hstack(&ci),
        ss.d.clone(),
    )
}

/// Finite part with E = I and infinite part with A = I, E nilpotent; the
/// transfer function is their parallel connection.
#[derive(Clone, Debug)]
pub struct Weierstrass<S> {
    pub finite: StateSpace<S>,
    pub infinite: StateSpace<S>,
}

/// With α such that A - αE is invertible, Â = (A - αE)^-1 E has the finite
/// eigenvalues as its nonzero spectrum (λ ↦ 1/(λ - α)) and the infinite ones
/// as its nilpotent part; range and kernel of Â^q separate them.
pub fn weierstrass<S: Scalar>(ss: &StateSpace<S>, ctx: &Context) -> Result<Weierstrass<S>> {
    let q = ss.order();
    let (m, n) = (ss.outputs(), ss.inputs());
    let alpha = (0..)
        .map(|k: i64| if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 })
        .take(4 * q + 4)
        .map(S::from_i64)
        .find(|al| (&ss.a - &ss.e.scale(al)).rank(ctx) == q)
        .ok_or(Error::SingularPencil)?;
    let shifted = &ss.a - &ss.e.scale(&alpha);
    let sinv = shifted.inverse(ctx).ok_or(Error::SingularPencil)?;
    let ahat = &sinv * &ss.e;
    let power = ahat.pow(q);
    let v1 = power.range(ctx);
    let v0 = power.nullspace(ctx);
    let r = v1.ncols();
    if r + v0.ncols() != q {
        return Err(Error::Verification(format!(
            "finite and infinite parts have dimensions {r} and {} in a pencil of size {q}",
            v0.ncols()
        )));
    }
    let t = v1.hstack(&v0);
    let ti = t.inverse(ctx).ok_or_else(|| Error::Verification("Weierstrass basis is singular".into()))?;
    let ah = &(&ti * &ahat) * &t;
    let bh = &(&ti * &sinv) * &ss.b;
    let ch = &ss.c * &t;
    let a1 = ah.submatrix(0, r, 0, r);
    let a0 = ah.submatrix(r, q, r, q);
    let a1i = a1.inverse(ctx).ok_or_else(|| Error::Verification("finite block is singular".into()))?;
    let finite = StateSpace::new(
        &Mat::identity(r).scale(&alpha) + &a1i,
        Mat::identity(r),
        &a1i * &bh.submatrix(0, r, 0, n),
        ch.submatrix(0, m, 0, r),
        Mat::zeros(m, n),
    )?;
    let g = &Mat::identity(q - r) + &a0.scale(&alpha);
    let gi = g.inverse(ctx).ok_or_else(|| Error::Verification("I + αN is singular".into()))?;
    let infinite = StateSpace::new(
        Mat::identity(q - r),
        &gi * &a0,
        &gi * &bh.submatrix(r, q, 0, n),
        ch.submatrix(0, m, r, q),
        ss.d.clone(),
    )?;
    Ok(Weierstrass { finite, infinite })
}

/// Basis of span[B, MB, M^2 B, ...].
fn krylov<S: Scalar>(m: &Mat<S>, b: &Mat<S>, ctx: &Context) -> Mat<S> {
    let mut v = b.range(ctx);
    loop {
        let next = v.hstack(&(m * &v)).range(ctx);
        if next.ncols() == v.ncols() {
            return v;
        }
        v = next;
    }
}

/// Restriction of (M, B, C) to the invariant subspace spanned by `v`.
fn restrict<S: Scalar>(m: &Mat<S>, b: &Mat<S>, c: &Mat<S>, v: &Mat<S>, ctx: &Context) -> (Mat<S>, Mat<S>, Mat<S>) {
    let (q, r) = (m.nrows(), v.ncols());
    if r == q {
        return (m.clone(), b.clone(), c.clone());
    }
    let t = v.hstack(&v.conj_transpose().nullspace(ctx));
    let ti = t.inverse(ctx).expect("a basis and its orthogonal complement are independent");
    let mt = &(&ti * m) * &t;
    (
        mt.submatrix(0, r, 0, r),
        (&ti * b).submatrix(0, r, 0, b.ncols()),
        (c * &t).submatrix(0, c.nrows(), 0, r),
    )
}

fn kalman<S: Scalar>(m: &Mat<S>, b: &Mat<S>, c: &Mat<S>, ctx: &Context) -> (Mat<S>, Mat<S>, Mat<S>) {
    let (m1, b1, c1) = restrict(m, b, c, &krylov(m, b, ctx), ctx);
    let (mt, bt) = (m1.transpose(), c1.transpose());
    let obs = krylov(&mt, &bt, ctx);
    let (m2, c2, b2) = restrict(&mt, &bt, &b1.transpose(), &obs, ctx);
    (m2.transpose(), b2.transpose(), c2.transpose())
}

/// Full row rank at every finite point: the gcd of det(G W) over a few random
/// constant W is constant.
fn full_rank_everywhere<S: Scalar>(g: &PolyMat<S>, salt: u64, ctx: &Context) -> Result<bool> {
    let (r, c) = (g.nrows(), g.ncols());
    if r == 0 {
        return Ok(true);
    }
    if r > c {
        return Ok(false);
    }
    let mut rng = ctx.rng(salt);
    let mut acc: Option<Poly<S>> = None;
    for _ in 0..3 {
        let w = Mat::from_fn(c, r, |_, _| S::from_i64(rng.gen_range(-9..=9)));
        let det = g.mul(&PolyMat::from_constant(&w)).det()?;
        if det.is_zero() {
            continue;
        }
        let next = match acc {
            None => det.monic(),
            Some(prev) => S::poly_gcd(&prev, &det, ctx),
        };
        if next.is_constant() {
            return Ok(true);
        }
        acc = Some(next);
    }
    Ok(false)
}

/// Both compounds [-A B] and [-A; C] have trivial Smith form.
pub fn is_minimal<S: Scalar>(psm: &PolySystemMatrix<S>, ctx: &Context) -> Result<bool> {
    Ok(full_rank_everywhere(&psm.input_compound(), 0x6d31, ctx)?
        && full_rank_everywhere(&psm.output_compound().transpose(), 0x6d32, ctx)?)
}

/// Both compounds have full rank at λ0.
pub fn is_minimal_at<S: Scalar>(psm: &PolySystemMatrix<S>, at: &S, ctx: &Context) -> bool {
    let q = psm.states();
    psm.input_compound().eval(at).rank(ctx) == q && psm.output_compound().eval(at).rank(ctx) == q
}

fn finite_point<S: Scalar>(p: &Point<S>) -> Result<S> {
    p.finite()
        .cloned()
        .ok_or_else(|| Error::Precondition("system matrix vectors live at finite points".into()))
}

/// y = [A^-1 B x; x], verified as a root vector of P of the same order.
pub fn lift_root_vector<S: Scalar>(
    psm: &PolySystemMatrix<S>,
    x: &RootVector<S>,
    ctx: &Context,
) -> Result<RootVector<S>> {
    let at = finite_point(&x.point)?;
    let u = if psm.states() == 0 {
        Vec::new()
    } else {
        psm.a_inv_b(ctx)?.mul_vec(&x.vec)?
    };
    if S::EXACT {
        let lhs = psm.a.to_ratmat().mul_vec(&u)?;
        let rhs = psm.b.to_ratmat().mul_vec(&x.vec)?;
        if lhs != rhs {
            return Err(Error::Verification("A(λ)u(λ) differs from B(λ)x(λ)".into()));
        }
    }
    let vec: Vec<RatFun<S>> = u.into_iter().chain(x.vec.iter().cloned()).collect();
    match root_vector_order(&psm.to_ratmat(), &vec, &Point::Finite(at), ctx)? {
        RootCheck::Order(k) if k == x.order => Ok(RootVector {
            point: x.point.clone(),
            vec,
            order: k,
            polynomialized: false,
        }),
        other => Err(Error::Verification(format!(
            "lifted vector: {other:?}, expected order {}",
            x.order
        ))),
    }
}

/// Lifts every vector of a maximal set of R and checks the result is a
/// maximal set of P.
pub fn lift_set<S: Scalar>(
    psm: &PolySystemMatrix<S>,
    set: &MaximalSet<S>,
    ctx: &Context,
) -> Result<MaximalSet<S>> {
    let at = finite_point(&set.point)?;
    let p = psm.to_ratmat();
    let data = local_data(&p, &at, ctx)?;
    let vectors = set
        .vectors
        .iter()
        .map(|x| lift_root_vector(psm, x, ctx))
        .collect::<Result<Vec<_>>>()?;
    let lifted = MaximalSet {
        point: set.point.clone(),
        vectors,
        kernel: data.kernel,
        sigmas: data.sigmas,
    };
    verify_set(&p, &lifted, &at, ctx)?;
    Ok(lifted)
}

/// Bottom block of y, a root vector of order at least that of y for R.
/// Refused when λ0 is a pole (A(λ0) singular).
pub fn project_root_vector<S: Scalar>(
    psm: &PolySystemMatrix<S>,
    y: &RootVector<S>,
    ctx: &Context,
) -> Result<RootVector<S>> {
    project_with(psm, &psm.transfer_function(ctx)?, y, ctx)
}

fn project_with<S: Scalar>(
    psm: &PolySystemMatrix<S>,
    r: &RatMat<S>,
    y: &RootVector<S>,
    ctx: &Context,
) -> Result<RootVector<S>> {
    let at = finite_point(&y.point)?;
    let q = psm.states();
    if psm.a.eval(&at).rank(ctx) < q {
        return Err(Error::PoleAtPoint(crate::format::scalar_to_string(&at)));
    }
    let x = y.vec[q..].to_vec();
    match root_vector_order(r, &x, &y.point, ctx)? {
        RootCheck::Order(k) if k >= y.order => Ok(RootVector {
            point: y.point.clone(),
            vec: x,
            order: k,
            polynomialized: y.polynomialized,
        }),
        other => Err(Error::Verification(format!(
            "projected vector: {other:?}, expected order at least {}",
            y.order
        ))),
    }
}

/// Projects a maximal set of P to one of R.
pub fn project_set<S: Scalar>(
    psm: &PolySystemMatrix<S>,
    set: &MaximalSet<S>,
    ctx: &Context,
) -> Result<MaximalSet<S>> {
    let at = finite_point(&set.point)?;
    let r = psm.transfer_function(ctx)?;
    let vectors = set
        .vectors
        .iter()
        .map(|y| project_with(psm, &r, y, ctx))
        .collect::<Result<Vec<_>>>()?;
    let data = local_data(&r, &at, ctx)?;
    let out = MaximalSet {
        point: set.point.clone(),
        vectors,
        kernel: data.kernel,
        sigmas: data.sigmas,
    };
    verify_maximal(&r, &out, ctx)?;
    Ok(out)
}
