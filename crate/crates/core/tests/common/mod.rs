//! Random inputs with known local structure, shared by the integration tests.
#![allow(dead_code)]

use localeig::dense::Mat;
use localeig::parse::parse_matrix_rows;
use localeig::poly::Poly;
use localeig::ratfun::RatFun;
use localeig::ratmat::RatMat;
use localeig::realization::{is_minimal, StateSpace};
use localeig::scalar::{Context, Exact, Scalar};
use rand::Rng;

pub fn ex(v: i64) -> Exact {
    Exact::from_i64(v)
}

pub fn q(n: i64, d: i64) -> Exact {
    Exact::new(n.into(), d.into())
}

pub fn rm<S: Scalar>(src: &str) -> RatMat<S> {
    RatMat::new(parse_matrix_rows(src).unwrap()).unwrap()
}

pub fn rv<S: Scalar>(src: &str) -> Vec<RatFun<S>> {
    parse_matrix_rows(src).unwrap().remove(0)
}

pub fn mat(rows: &[&[i64]]) -> Mat<Exact> {
    Mat::from_rows(rows.iter().map(|r| r.iter().map(|&v| ex(v)).collect()).collect())
}

/// (λ - at)^k.
pub fn power(at: &Exact, k: i64) -> RatFun<Exact> {
    RatFun::linear_power(at, k)
}

/// Polynomial of degree ≤ `deg` with small integer coefficients.
pub fn small_poly(rng: &mut impl Rng, deg: usize) -> Poly<Exact> {
    Poly::new((0..=deg).map(|_| ex(rng.gen_range(-3..=3))).collect())
}

/// Nonzero polynomial that does not vanish at `at`.
pub fn unit_poly(rng: &mut impl Rng, at: &Exact, deg: usize) -> Poly<Exact> {
    loop {
        let d = rng.gen_range(0..=deg);
        let p = small_poly(rng, d);
        if !p.eval(at).is_zero_value() {
            return p;
        }
    }
}

trait ZeroValue {
    fn is_zero_value(&self) -> bool;
}

impl ZeroValue for Exact {
    fn is_zero_value(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

/// A rational function together with its valuation at `at` (None for 0).
pub fn valued(rng: &mut impl Rng, at: &Exact, zero_chance: f64) -> (RatFun<Exact>, Option<i64>) {
    if rng.gen_bool(zero_chance) {
        return (RatFun::zero(), None);
    }
    let k = rng.gen_range(-2..=2);
    let f = RatFun::new(unit_poly(rng, at, 2), unit_poly(rng, at, 2)).unwrap();
    (&f * &power(at, k), Some(k))
}

pub fn random_ratmat(rng: &mut impl Rng, rows: usize, cols: usize, at: &Exact, zero_chance: f64) -> RatMat<Exact> {
    RatMat::from_fn(rows, cols, |_, _| valued(rng, at, zero_chance).0)
}

/// Entries with nonnegative valuation at `at` and an invertible value there.
pub fn local_unit(rng: &mut impl Rng, n: usize, at: &Exact) -> RatMat<Exact> {
    loop {
        let a = RatMat::from_fn(n, n, |_, _| {
            let k = rng.gen_range(0..=1);
            let f = RatFun::new(small_poly(rng, 1), unit_poly(rng, at, 1)).unwrap();
            &f * &power(at, k)
        });
        if let Some(v) = a.eval(at) {
            if !v.det().is_zero_value() {
                return a;
            }
        }
    }
}

/// Product of elementary row operations with polynomial multipliers.
pub fn unimodular(rng: &mut impl Rng, n: usize) -> RatMat<Exact> {
    let mut u = RatMat::identity(n);
    if n < 2 {
        return u;
    }
    for _ in 0..n.min(3) {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let p = RatFun::from_poly(small_poly(rng, 1));
        let mut e = RatMat::identity(n);
        e.set(i, j, p);
        u = e.mul(&u).unwrap();
    }
    u
}

/// U D V with D = diag((λ-at)^σ_i u_i, 0...), U and V unimodular and the
/// u_i units at `at` that may add poles and zeros elsewhere.
pub struct Known {
    pub r: RatMat<Exact>,
    /// Non-increasing.
    pub sigmas: Vec<i64>,
}

impl Known {
    pub fn positive(&self) -> Vec<usize> {
        self.sigmas.iter().filter(|&&s| s > 0).map(|&s| s as usize).collect()
    }
}

fn unit_factor(rng: &mut impl Rng, at: &Exact) -> RatFun<Exact> {
    let c = RatFun::constant(ex([1, -1, 2, 3][rng.gen_range(0..4)]));
    let shift = |d: i64| RatFun::from_poly(Poly::new(vec![-(at.clone() + ex(d)), ex(1)]));
    match rng.gen_range(0..3) {
        0 => c,
        1 => &c * &shift([1, -2, 3][rng.gen_range(0..3)]),
        _ => c.div(&shift([-1, 2][rng.gen_range(0..2)])).unwrap(),
    }
}

pub fn known_structure(
    rng: &mut impl Rng,
    max_rows: usize,
    max_cols: usize,
    sigma_range: (i64, i64),
    at: &Exact,
) -> Known {
    let m = rng.gen_range(1..=max_rows);
    let n = rng.gen_range(1..=max_cols);
    let rank = rng.gen_range(1..=m.min(n));
    let mut sigmas: Vec<i64> = (0..rank).map(|_| rng.gen_range(sigma_range.0..=sigma_range.1)).collect();
    let mut d = RatMat::zeros(m, n);
    for (i, &s) in sigmas.iter().enumerate() {
        d.set(i, i, &power(at, s) * &unit_factor(rng, at));
    }
    let r = unimodular(rng, m).mul(&d).unwrap().mul(&unimodular(rng, n)).unwrap();
    sigmas.sort_unstable_by(|a, b| b.cmp(a));
    Known { r, sigmas }
}

/// Minimal system with E = I, a pole at 0 from A and a zero at 0 forced by
/// choosing C so that A - B D^-1 C has a kernel vector.
pub fn coalescent_system(rng: &mut impl Rng, ctx: &Context) -> Option<StateSpace<Exact>> {
    let q = rng.gen_range(1..=3);
    let n = rng.gen_range(q..=q + 1);
    let small = |rng: &mut dyn FnMut() -> i64, r: usize, c: usize| {
        Mat::from_fn(r, c, |_, _| ex(rng()))
    };
    let mut draw = || rng.gen_range(-2..=2);
    let mut a = small(&mut draw, q, q);
    for i in 0..q {
        for j in 0..i {
            a[(i, j)] = ex(0);
        }
    }
    a[(0, 0)] = ex(0);
    let b = small(&mut draw, q, n);
    let d = small(&mut draw, n, n);
    let c0 = small(&mut draw, n, q);
    let v: Vec<Exact> = (0..q).map(|_| ex(draw())).collect();
    if b.rank(ctx) < q || d.rank(ctx) < n || v.iter().all(|x| x.is_zero_value()) {
        return None;
    }
    let bbt = &b * &b.transpose();
    let av = Mat::column_vector(&a.mul_vec(&v));
    let w = &b.transpose() * &bbt.solve(&av, ctx)?;
    let dw = &d * &w;
    let c0v = Mat::column_vector(&c0.mul_vec(&v));
    let vv: Exact = v.iter().map(|x| x * x).sum();
    let vt = Mat::from_rows(vec![v.clone()]).scale(&(ex(1) / vv));
    let c = &c0 + &(&(&dw - &c0v) * &vt);
    let ss = StateSpace::new(a, Mat::identity(q), b, c, d).ok()?;
    if !is_minimal(&ss.to_psm(), ctx).ok()? {
        return None;
    }
    Some(ss)
}
