//! The two scalar fields: exact rationals and double-precision complex numbers.
//!
//! Everything above this module is generic over [`Scalar`]. Tolerances are
//! never stored on values; they travel in a [`Context`].

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dense::{self, Mat};
use crate::poly::Poly;

pub type Exact = BigRational;
pub type Float = Complex64;

pub const DEFAULT_RANK_TOL: f64 = 1e-10;
pub const DEFAULT_CANCEL_TOL: f64 = 1e-9;
pub const DEFAULT_ZERO_TOL: f64 = 1e-12;
pub const DEFAULT_VERIFY_TOL: f64 = 1e-7;

/// Tolerances and the seed for randomized choices.
#[derive(Clone, Debug, PartialEq)]
pub struct Context {
    pub rank_tol: f64,
    pub cancel_tol: f64,
    pub zero_tol: f64,
    /// Relative size below which a float coefficient of `R x` counts as vanished
    /// when verifying a root vector.
    pub verify_tol: f64,
    pub seed: u64,
}

impl Default for Context {
    fn default() -> Self {
        Context {
            rank_tol: DEFAULT_RANK_TOL,
            cancel_tol: DEFAULT_CANCEL_TOL,
            zero_tol: DEFAULT_ZERO_TOL,
            verify_tol: DEFAULT_VERIFY_TOL,
            seed: 0x5eed,
        }
    }
}

impl Context {
    pub fn with_seed(seed: u64) -> Self {
        Context {
            seed,
            ..Context::default()
        }
    }

    /// Deterministic generator for one randomized decision; `salt` separates
    /// independent decisions made under the same seed.
    pub fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;
    const NAME: &'static str;

    fn from_i64(v: i64) -> Self;
    fn from_rational(q: &BigRational) -> Self;
    /// Nearest representable value; exact values take the binary expansion.
    fn from_f64(v: f64) -> Self;
    fn to_c64(&self) -> Complex64;
    fn modulus(&self) -> f64;
    fn conj(&self) -> Self;
    /// `None` on the exact (rational) backend.
    fn imaginary_unit() -> Option<Self>;

    /// Zero test relative to `scale`. Exact values ignore both arguments.
    fn negligible(&self, scale: f64, rel: f64) -> bool;

    /// A generic point for probing normal rank and similar generic properties.
    fn random_point<R: Rng>(rng: &mut R) -> Self;

    fn rank(m: &Mat<Self>, ctx: &Context) -> usize;
    /// Rank with the float threshold taken relative to `scale` instead of
    /// the largest singular value, so a matrix of pure roundoff has rank 0.
    fn rank_scaled(m: &Mat<Self>, _scale: f64, ctx: &Context) -> usize {
        Self::rank(m, ctx)
    }
    fn range_scaled(m: &Mat<Self>, _scale: f64, ctx: &Context) -> Mat<Self> {
        Self::range(m, ctx)
    }
    /// Basis of the right null space, one vector per column.
    fn nullspace(m: &Mat<Self>, ctx: &Context) -> Mat<Self>;
    /// Basis of the column space.
    fn range(m: &Mat<Self>, ctx: &Context) -> Mat<Self>;
    /// Coefficients `c` (cand.cols x count) such that the columns of `cand * c`
    /// are independent modulo span(base). Returns fewer columns when fewer exist.
    fn select_independent(base: &Mat<Self>, cand: &Mat<Self>, count: usize, ctx: &Context)
        -> Mat<Self>;
    /// Monic gcd; the float version tolerates perturbed common roots.
    fn poly_gcd(a: &Poly<Self>, b: &Poly<Self>, ctx: &Context) -> Poly<Self>;

    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    const NAME: &'static str = "exact";

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).unwrap_or_default()
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }

    fn modulus(&self) -> f64 {
        rational_to_f64(self).abs()
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn imaginary_unit() -> Option<Self> {
        None
    }

    fn negligible(&self, _scale: f64, _rel: f64) -> bool {
        self.is_zero()
    }

    fn random_point<R: Rng>(rng: &mut R) -> Self {
        let num: i64 = rng.gen_range(-997..=997);
        let den: i64 = rng.gen_range(1..=61);
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn rank(m: &Mat<Self>, _ctx: &Context) -> usize {
        dense::rref(m).1.len()
    }

    fn nullspace(m: &Mat<Self>, _ctx: &Context) -> Mat<Self> {
        dense::exact_nullspace(m)
    }

    fn range(m: &Mat<Self>, _ctx: &Context) -> Mat<Self> {
        let (_, pivots) = dense::rref(m);
        m.select_columns(&pivots)
    }

    fn select_independent(
        base: &Mat<Self>,
        cand: &Mat<Self>,
        count: usize,
        _ctx: &Context,
    ) -> Mat<Self> {
        let mut ech = dense::Echelon::new(base.nrows());
        for j in 0..base.ncols() {
            ech.insert(base.col(j));
        }
        let mut chosen = Vec::new();
        for j in 0..cand.ncols() {
            if chosen.len() == count {
                break;
            }
            if ech.insert(cand.col(j)) {
                chosen.push(j);
            }
        }
        let mut c = Mat::zeros(cand.ncols(), chosen.len());
        for (k, &j) in chosen.iter().enumerate() {
            c[(j, k)] = BigRational::one();
        }
        c
    }

    fn poly_gcd(a: &Poly<Self>, b: &Poly<Self>, _ctx: &Context) -> Poly<Self> {
        crate::poly::euclid_gcd(a, b)
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;
    const NAME: &'static str = "float";

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn from_rational(q: &BigRational) -> Self {
        Complex64::new(rational_to_f64(q), 0.0)
    }

    fn from_f64(v: f64) -> Self {
        Complex64::new(v, 0.0)
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn modulus(&self) -> f64 {
        self.norm()
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn imaginary_unit() -> Option<Self> {
        Some(Complex64::i())
    }

    fn negligible(&self, scale: f64, rel: f64) -> bool {
        self.norm() <= rel * scale
    }

    fn random_point<R: Rng>(rng: &mut R) -> Self {
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let r = 1.0 + rng.gen::<f64>();
        Complex64::from_polar(r, theta)
    }

    fn rank(m: &Mat<Self>, ctx: &Context) -> usize {
        if m.nrows() == 0 || m.ncols() == 0 {
            return 0;
        }
        let sv = to_na(m).singular_values();
        let tol = rank_threshold(m.nrows(), m.ncols(), sv.max(), ctx);
        sv.iter().filter(|&&s| s > tol).count()
    }

    fn rank_scaled(m: &Mat<Self>, scale: f64, ctx: &Context) -> usize {
        if m.nrows() == 0 || m.ncols() == 0 {
            return 0;
        }
        let sv = to_na(m).singular_values();
        let tol = rank_threshold(m.nrows(), m.ncols(), sv.max().max(scale), ctx);
        sv.iter().filter(|&&s| s > tol).count()
    }

    fn range_scaled(m: &Mat<Self>, scale: f64, ctx: &Context) -> Mat<Self> {
        float_range(m, Some(scale), ctx)
    }

    fn nullspace(m: &Mat<Self>, ctx: &Context) -> Mat<Self> {
        let (rows, cols) = (m.nrows(), m.ncols());
        if cols == 0 {
            return Mat::zeros(0, 0);
        }
        if rows == 0 {
            return Mat::identity(cols);
        }
        // Pad to at least `cols` rows so the thin SVD returns a full V.
        let mut a = to_na(m);
        if rows < cols {
            a = a.resize_vertically(cols, Complex64::zero());
        }
        let svd = a.svd(false, true);
        let vt = svd.v_t.expect("requested V^T");
        let smax = svd.singular_values.max();
        let tol = rank_threshold(rows, cols, smax, ctx);
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&i, &j| {
            svd.singular_values[j]
                .partial_cmp(&svd.singular_values[i])
                .unwrap()
        });
        let rank = order
            .iter()
            .filter(|&&i| svd.singular_values[i] > tol)
            .count();
        let null: Vec<usize> = order[rank..].to_vec();
        let mut out = Mat::zeros(cols, null.len());
        for (k, &i) in null.iter().enumerate() {
            for r in 0..cols {
                out[(r, k)] = vt[(i, r)].conj();
            }
        }
        out
    }

    fn range(m: &Mat<Self>, ctx: &Context) -> Mat<Self> {
        float_range(m, None, ctx)
    }

    fn select_independent(
        base: &Mat<Self>,
        cand: &Mat<Self>,
        count: usize,
        ctx: &Context,
    ) -> Mat<Self> {
        if count == 0 || cand.ncols() == 0 {
            return Mat::zeros(cand.ncols(), 0);
        }
        let scale = cand.max_abs().max(f64::MIN_POSITIVE);
        let q = Self::range(base, ctx);
        let proj = if q.ncols() > 0 {
            let coef = &q.conj_transpose() * cand;
            cand - &(&q * &coef)
        } else {
            cand.clone()
        };
        let svd = to_na(&proj).svd(false, true);
        let vt = svd.v_t.expect("requested V^T");
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&i, &j| {
            svd.singular_values[j]
                .partial_cmp(&svd.singular_values[i])
                .unwrap()
        });
        let tol = rank_threshold(cand.nrows(), cand.ncols(), scale, ctx);
        let keep: Vec<usize> = order
            .into_iter()
            .filter(|&i| svd.singular_values[i] > tol)
            .take(count)
            .collect();
        let mut out = Mat::zeros(cand.ncols(), keep.len());
        for (k, &i) in keep.iter().enumerate() {
            for r in 0..cand.ncols() {
                out[(r, k)] = vt[(i, r)].conj();
            }
        }
        out
    }

    fn poly_gcd(a: &Poly<Self>, b: &Poly<Self>, ctx: &Context) -> Poly<Self> {
        crate::roots::float_gcd(a, b, ctx)
    }

    fn is_exact_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}

fn float_range(m: &Mat<Float>, scale: Option<f64>, ctx: &Context) -> Mat<Float> {
    let (rows, cols) = (m.nrows(), m.ncols());
    if rows == 0 || cols == 0 {
        return Mat::zeros(rows, 0);
    }
    let svd = to_na(m).svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.max().max(scale.unwrap_or(0.0));
    let tol = rank_threshold(rows, cols, smax, ctx);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > tol)
        .collect();
    let mut out = Mat::zeros(rows, keep.len());
    for (k, &i) in keep.iter().enumerate() {
        for r in 0..rows {
            out[(r, k)] = u[(r, i)];
        }
    }
    out
}

pub fn rank_threshold(rows: usize, cols: usize, smax: f64, ctx: &Context) -> f64 {
    rows.max(cols) as f64 * smax * ctx.rank_tol
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Very large numerator and denominator: scale both down first.
    let n = q.numer();
    let d = q.denom();
    let shift = n.bits().max(d.bits()).saturating_sub(900);
    let ns = (n.abs() >> shift).to_f64().unwrap_or(f64::INFINITY);
    let ds = (d >> shift).to_f64().unwrap_or(f64::INFINITY);
    let v = ns / ds;
    if n.is_negative() {
        -v
    } else {
        v
    }
}

/// Converts an exact value into any scalar field.
pub fn cast<S: Scalar>(q: &BigRational) -> S {
    S::from_rational(q)
}

pub fn to_na(m: &Mat<Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

pub fn from_na(m: &DMatrix<Complex64>) -> Mat<Complex64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}
