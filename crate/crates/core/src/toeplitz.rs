//! Local analysis of an analytic matrix function H(t) = Σ C_j t^j at t = 0
//! through the kernels of its block Toeplitz truncations
//!
//! ```text
//! T_k = [C_0                ]
//!       [C_1  C_0           ]
//!       [ ...               ]
//!       [C_k-1 ...  C_1  C_0]
//! ```
//!
//! A vector x_0 + x_1 t + ... + x_{k-1} t^{k-1} with H x ≡ 0 mod t^k is a
//! kernel vector of T_k. The leading blocks of ker T_k span W_k, and
//! dim W_k = (n - r) + #{τ_i ≥ k} where τ_i are the partial multiplicities
//! of H at 0.

use crate::dense::Mat;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ratmat::{PolyMat, RatMat};
use crate::scalar::{Context, Scalar};

pub trait Series<S> {
    fn dims(&self) -> (usize, usize);
    fn coeff(&mut self, j: usize) -> Result<Mat<S>>;
}

/// M0 + t M1.
pub struct PencilSeries<S> {
    pub c0: Mat<S>,
    pub c1: Mat<S>,
}

impl<S: Scalar> Series<S> for PencilSeries<S> {
    fn dims(&self) -> (usize, usize) {
        (self.c0.nrows(), self.c0.ncols())
    }

    fn coeff(&mut self, j: usize) -> Result<Mat<S>> {
        Ok(match j {
            0 => self.c0.clone(),
            1 => self.c1.clone(),
            _ => Mat::zeros(self.c0.nrows(), self.c0.ncols()),
        })
    }
}

/// P(λ0 + t) for a polynomial matrix P.
pub struct PolySeries<S> {
    rows: usize,
    cols: usize,
    coeffs: Vec<Mat<S>>,
}

impl<S: Scalar> PolySeries<S> {
    pub fn new(p: &PolyMat<S>, at: &S) -> Self {
        let shifted = PolyMat::from_fn(p.nrows(), p.ncols(), |i, j| p.get(i, j).shift(at));
        let deg = shifted.degree().unwrap_or(0);
        PolySeries {
            rows: p.nrows(),
            cols: p.ncols(),
            coeffs: (0..=deg).map(|k| shifted.coeff(k)).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

impl<S: Scalar> Series<S> for PolySeries<S> {
    fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    fn coeff(&mut self, j: usize) -> Result<Mat<S>> {
        Ok(self
            .coeffs
            .get(j)
            .cloned()
            .unwrap_or_else(|| Mat::zeros(self.rows, self.cols)))
    }
}

/// (λ - λ0)^shift R(λ) expanded about λ0, with a lazily grown window.
pub struct RatSeries<'a, S> {
    r: &'a RatMat<S>,
    at: S,
    shift: usize,
    cache: Vec<Mat<S>>,
    ctx: Context,
}

impl<'a, S: Scalar> RatSeries<'a, S> {
    pub fn new(r: &'a RatMat<S>, at: &S, shift: usize, ctx: &Context) -> Self {
        RatSeries {
            r,
            at: at.clone(),
            shift,
            cache: Vec::new(),
            ctx: ctx.clone(),
        }
    }
}

impl<S: Scalar> Series<S> for RatSeries<'_, S> {
    fn dims(&self) -> (usize, usize) {
        (self.r.nrows(), self.r.ncols())
    }

    fn coeff(&mut self, j: usize) -> Result<Mat<S>> {
        if j >= self.cache.len() {
            let len = (2 * self.cache.len()).max(j + 1).max(8);
            let from = -(self.shift as i64);
            self.cache = self
                .r
                .laurent_coeffs(&self.at, from, from + len as i64 - 1, &self.ctx)?;
        }
        Ok(self.cache[j].clone())
    }
}

pub struct LocalAnalysis<S> {
    pub n: usize,
    pub rank: usize,
    /// counts[k-1] = #{τ_i ≥ k}; the last entry is 0.
    pub counts: Vec<usize>,
    /// Z_k for k = 1..=K, kernel bases of T_k (n k rows).
    levels: Vec<Mat<S>>,
    /// Basis of the leading blocks of the stable kernel (the evaluated local
    /// kernel of H), n x (n - r).
    pub kernel: Mat<S>,
}

/// Leading blocks of a kernel basis. On float the basis is orthonormal, so
/// ranks of the leads are measured against 1.
fn leads<S: Scalar>(z: &Mat<S>, n: usize) -> Mat<S> {
    z.submatrix(0, n, 0, z.ncols())
}

impl<S: Scalar> LocalAnalysis<S> {
    /// Grows the Toeplitz depth until dim W_k = n - rank, at most `cap` levels.
    pub fn run(src: &mut impl Series<S>, rank: usize, cap: usize, ctx: &Context) -> Result<Self> {
        let (_, n) = src.dims();
        let target = n - rank;
        let c0 = src.coeff(0)?;
        let mut coeffs = vec![c0.clone()];
        let mut z = normalize(c0.nullspace(ctx), ctx);
        let mut levels = Vec::new();
        let mut dims_w = Vec::new();
        loop {
            let w = leads(&z, n).rank_scaled(1.0, ctx);
            dims_w.push(w);
            levels.push(z.clone());
            let k = levels.len();
            if w <= target {
                if w < target {
                    return Err(Error::Verification(format!(
                        "local kernel dimension {w} below n - rank = {target}"
                    )));
                }
                break;
            }
            if k >= cap {
                return Err(Error::Verification(format!(
                    "Toeplitz depth cap {cap} reached before the kernel stabilized"
                )));
            }
            coeffs.push(src.coeff(k)?);
            // G = Σ_{j=1..k} C_j x_{k-j}
            let dim = z.ncols();
            let mut g = Mat::zeros(c0.nrows(), dim);
            for (j, cj) in coeffs.iter().enumerate().take(k + 1).skip(1) {
                if cj.is_zero() {
                    continue;
                }
                let blk = z.submatrix((k - j) * n, (k - j + 1) * n, 0, dim);
                g = &g + &(cj * &blk);
            }
            let ker = g.hstack(&c0).nullspace(ctx);
            let top = ker.submatrix(0, dim, 0, ker.ncols());
            let bottom = ker.submatrix(dim, dim + n, 0, ker.ncols());
            z = normalize((&z * &top).vstack(&bottom), ctx);
        }
        let counts = dims_w.iter().map(|&w| w - target).collect();
        let kernel = leads(levels.last().unwrap(), n).range_scaled(1.0, ctx);
        Ok(LocalAnalysis {
            n,
            rank,
            counts,
            levels,
            kernel,
        })
    }

    /// All partial multiplicities τ_1 ≥ ... ≥ τ_r (zeros included).
    pub fn taus(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.rank);
        let depth = self.counts.len();
        for k in (1..=depth).rev() {
            let here = self.counts[k - 1] - self.counts.get(k).copied().unwrap_or(0);
            out.extend(std::iter::repeat_n(k, here));
        }
        let positive = out.len();
        out.extend(std::iter::repeat_n(0, self.rank - positive));
        out
    }

    /// Greedy maximal set: for each level k ≥ `min_level`, from the highest
    /// down, kernel vectors of T_k whose leads complete W_{k+1} inside W_k.
    /// Each chain is returned with its level and its coefficient blocks as
    /// columns of an n x k matrix.
    pub fn chains(&self, min_level: usize, ctx: &Context) -> Vec<(usize, Mat<S>)> {
        let n = self.n;
        let depth = self.counts.len();
        let mut out = Vec::new();
        for k in (1..depth).rev() {
            if k < min_level {
                break;
            }
            let need = self.counts[k - 1] - self.counts[k];
            if need == 0 {
                continue;
            }
            let zk = &self.levels[k - 1];
            let base = leads(&self.levels[k], n).range_scaled(1.0, ctx);
            let coef = S::select_independent(&base, &leads(zk, n), need, ctx);
            let chosen = zk * &coef;
            for c in 0..chosen.ncols() {
                let blocks = Mat::from_fn(n, k, |i, t| chosen[(t * n + i, c)].clone());
                out.push((k, blocks));
            }
        }
        out
    }
}

fn normalize<S: Scalar>(z: Mat<S>, ctx: &Context) -> Mat<S> {
    if S::EXACT {
        z
    } else {
        z.range(ctx)
    }
}

/// Coefficient blocks (columns = powers of t) to polynomial entries in t.
pub fn blocks_to_polys<S: Scalar>(blocks: &Mat<S>) -> Vec<Poly<S>> {
    (0..blocks.nrows())
        .map(|i| Poly::new(blocks.row(i)))
        .collect()
}
