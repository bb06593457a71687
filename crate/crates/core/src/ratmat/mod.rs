//! Matrices of rational functions: valuations, normal rank, local
//! Smith–McMillan form and minimal polynomial bases.

mod minbasis;
mod polymat;
mod smith;

use std::sync::OnceLock;

use rand::Rng;

use crate::dense::Mat;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ratfun::{Point, RatFun, Valuation};
use crate::scalar::{Context, Scalar};

pub use minbasis::{left_minimal_indices, minimal_basis, MinimalBasis};
pub use polymat::{Nodes, PolyMat};
pub(crate) use smith::toeplitz_cap;
pub use smith::{is_local_unimodular, smith_mcmillan_at, smith_mcmillan_local, LocalStructure};

#[derive(Clone, Debug)]
pub struct RatMat<S> {
    rows: usize,
    cols: usize,
    entries: Vec<RatFun<S>>,
    rank: OnceLock<usize>,
}

impl<S: Scalar> PartialEq for RatMat<S> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.entries == other.entries
    }
}

impl<S: Scalar> RatMat<S> {
    pub fn new(rows: Vec<Vec<RatFun<S>>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("rows have different lengths".into()));
        }
        Ok(RatMat {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
            rank: OnceLock::new(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> RatFun<S>) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        RatMat {
            rows,
            cols,
            entries,
            rank: OnceLock::new(),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| RatFun::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { RatFun::one() } else { RatFun::zero() })
    }

    pub fn diag(d: &[RatFun<S>]) -> Self {
        Self::from_fn(d.len(), d.len(), |i, j| {
            if i == j {
                d[i].clone()
            } else {
                RatFun::zero()
            }
        })
    }

    pub fn from_mat(m: &Mat<S>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| RatFun::constant(m[(i, j)].clone()))
    }

    pub fn column(v: &[RatFun<S>]) -> Self {
        Self::from_fn(v.len(), 1, |i, _| v[i].clone())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFun<S> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RatFun<S>) {
        self.entries[i * self.cols + j] = v;
        self.rank = OnceLock::new();
    }

    pub fn entries(&self) -> &[RatFun<S>] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> Vec<RatFun<S>> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<RatFun<S>> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_polynomial(&self) -> bool {
        self.entries.iter().all(|e| e.is_polynomial())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map_entries(&self, f: impl Fn(&RatFun<S>) -> RatFun<S>) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| f(self.get(i, j)))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> RatMat<T> {
        RatMat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).map(&f))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::Dimension(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(Self::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = RatFun::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = o.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        }))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_shape(o)?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + o.get(i, j)))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.same_shape(o)?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - o.get(i, j)))
    }

    fn same_shape(&self, o: &Self) -> Result<()> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(Error::Dimension(format!(
                "{}x{} against {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(())
    }

    pub fn neg(&self) -> Self {
        self.map_entries(|e| -e)
    }

    pub fn scale(&self, c: &RatFun<S>) -> Self {
        self.map_entries(|e| e * c)
    }

    pub fn mul_vec(&self, x: &[RatFun<S>]) -> Result<Vec<RatFun<S>>> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} for a matrix with {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = RatFun::zero();
                for (j, xj) in x.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !xj.is_zero() {
                        acc = &acc + &(a * xj);
                    }
                }
                acc
            })
            .collect())
    }

    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows);
        Self::from_fn(self.rows, self.cols + o.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                o.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols);
        Self::from_fn(self.rows + o.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                o.get(i - self.rows, j).clone()
            }
        })
    }

    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Self::from_fn(r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    /// `None` when some entry has a pole at `x`.
    pub fn eval(&self, x: &S) -> Option<Mat<S>> {
        let mut vals = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            vals.push(e.eval(x)?);
        }
        Some(Mat::from_fn(self.rows, self.cols, |i, j| {
            vals[i * self.cols + j].clone()
        }))
    }

    pub fn valuation_at(&self, at: &S, ctx: &Context) -> Valuation {
        self.entries
            .iter()
            .map(|e| e.valuation_at_with(at, ctx))
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    pub fn valuation_at_infinity(&self) -> Valuation {
        self.entries
            .iter()
            .map(|e| e.valuation_at_infinity())
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    pub fn valuation(&self, at: &Point<S>, ctx: &Context) -> Valuation {
        match at {
            Point::Finite(a) => self.valuation_at(a, ctx),
            Point::Infinity => self.valuation_at_infinity(),
        }
    }

    /// Pole order at `at`: minus the valuation when negative, else 0.
    pub fn pole_order(&self, at: &S, ctx: &Context) -> usize {
        match self.valuation_at(at, ctx) {
            Valuation::Finite(k) if k < 0 => (-k) as usize,
            _ => 0,
        }
    }

    /// Rank over the rational-function field, cached.
    pub fn normal_rank(&self, ctx: &Context) -> usize {
        *self.rank.get_or_init(|| {
            if S::EXACT {
                let (p, _) = self.clear_row_denominators(ctx);
                bareiss_rank(&p)
            } else {
                self.sampled_rank(ctx, 3)
            }
        })
    }

    /// Majority vote (float) or maximum (exact) of ranks at random points.
    pub fn sampled_rank(&self, ctx: &Context, samples: usize) -> usize {
        let mut rng = ctx.rng(0x4e52);
        let mut ranks = Vec::with_capacity(samples);
        let mut attempts = 0;
        while ranks.len() < samples && attempts < 50 * samples {
            attempts += 1;
            let x = S::random_point(&mut rng);
            if let Some(m) = self.eval(&x) {
                ranks.push(m.rank(ctx));
            }
        }
        if S::EXACT {
            return ranks.into_iter().max().unwrap_or(0);
        }
        ranks.sort_unstable();
        // Median of three is the majority value whenever two agree.
        ranks.get(ranks.len() / 2).copied().unwrap_or(0)
    }

    /// Multiplies each row by the lcm of its denominators.
    pub fn clear_row_denominators(&self, ctx: &Context) -> (PolyMat<S>, Vec<Poly<S>>) {
        let mut lcms = Vec::with_capacity(self.rows);
        let p = PolyMat::from_fn(self.rows, self.cols, |_, _| Poly::zero());
        let mut p = p;
        for i in 0..self.rows {
            let mut l = Poly::one();
            for j in 0..self.cols {
                l = poly_lcm(&l, self.get(i, j).den(), ctx);
            }
            for j in 0..self.cols {
                let e = self.get(i, j);
                let q = l.div_exact(e.den()).expect("lcm is a multiple");
                p.set(i, j, e.num() * &q);
            }
            lcms.push(l);
        }
        (p, lcms)
    }

    /// Column-wise common denominators.
    pub fn column_lcms(&self, ctx: &Context) -> Vec<Poly<S>> {
        (0..self.cols)
            .map(|j| {
                let mut l = Poly::one();
                for i in 0..self.rows {
                    l = poly_lcm(&l, self.get(i, j).den(), ctx);
                }
                l
            })
            .collect()
    }

    pub fn to_polymat(&self) -> Result<PolyMat<S>> {
        PolyMat::from_ratmat(self)
    }

    pub fn det(&self) -> Result<RatFun<S>> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.entries.clone();
        let mut det = RatFun::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i * n + k].is_zero()) else {
                return Ok(RatFun::zero());
            };
            if p != k {
                for j in 0..n {
                    a.swap(p * n + j, k * n + j);
                }
                det = -&det;
            }
            let piv = a[k * n + k].clone();
            det = &det * &piv;
            let inv = piv.inv()?;
            for i in (k + 1)..n {
                if a[i * n + k].is_zero() {
                    continue;
                }
                let f = &a[i * n + k] * &inv;
                for j in k..n {
                    let t = &f * &a[k * n + j];
                    a[i * n + j] = &a[i * n + j] - &t;
                }
            }
        }
        Ok(det)
    }

    /// Gauss–Jordan inverse over the rational-function field.
    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.entries.clone();
        let mut b = Self::identity(n).entries;
        for k in 0..n {
            // Prefer the pivot of lowest total degree to limit growth.
            let p = (k..n)
                .filter(|&i| !a[i * n + k].is_zero())
                .min_by_key(|&i| {
                    let e = &a[i * n + k];
                    e.num().degree().unwrap_or(0) + e.den().degree().unwrap_or(0)
                })
                .ok_or(Error::Singular)?;
            if p != k {
                for j in 0..n {
                    a.swap(p * n + j, k * n + j);
                    b.swap(p * n + j, k * n + j);
                }
            }
            let inv = a[k * n + k].inv()?;
            for j in 0..n {
                a[k * n + j] = &a[k * n + j] * &inv;
                b[k * n + j] = &b[k * n + j] * &inv;
            }
            for i in 0..n {
                if i == k || a[i * n + k].is_zero() {
                    continue;
                }
                let f = a[i * n + k].clone();
                for j in 0..n {
                    if !a[k * n + j].is_zero() {
                        a[i * n + j] = &a[i * n + j] - &(&f * &a[k * n + j]);
                    }
                    if !b[k * n + j].is_zero() {
                        b[i * n + j] = &b[i * n + j] - &(&f * &b[k * n + j]);
                    }
                }
            }
        }
        Ok(RatMat {
            rows: n,
            cols: n,
            entries: b,
            rank: OnceLock::new(),
        })
    }

    /// R(1/λ).
    pub fn substitute_reciprocal(&self) -> Self {
        self.map_entries(|e| e.substitute_reciprocal())
    }

    /// R(λ + a).
    pub fn shift(&self, a: &S) -> Self {
        self.map_entries(|e| e.shift(a))
    }

    /// Laurent coefficient matrices of indices from..=to about `at`.
    pub fn laurent_coeffs(&self, at: &S, from: i64, to: i64, ctx: &Context) -> Result<Vec<Mat<S>>> {
        let per_entry: Vec<Vec<S>> = self
            .entries
            .iter()
            .map(|e| e.laurent_with(at, from, to, ctx))
            .collect::<Result<_>>()?;
        Ok((0..=(to - from) as usize)
            .map(|k| {
                Mat::from_fn(self.rows, self.cols, |i, j| {
                    per_entry[i * self.cols + j][k].clone()
                })
            })
            .collect())
    }
}

impl<S: Scalar> std::fmt::Display for RatMat<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            write!(f, "{}", row.join(", "))?;
            if i + 1 < self.rows {
                writeln!(f, ";")?;
            }
        }
        Ok(())
    }
}

pub fn poly_lcm<S: Scalar>(a: &Poly<S>, b: &Poly<S>, ctx: &Context) -> Poly<S> {
    if a.is_constant() {
        return b.monic();
    }
    if b.is_constant() {
        return a.monic();
    }
    let g = a.gcd(b, ctx);
    (&a.div_exact(&g).expect("gcd divides") * b).monic()
}

/// Fraction-free elimination rank of a polynomial matrix.
fn bareiss_rank<S: Scalar>(p: &PolyMat<S>) -> usize {
    let (m, n) = (p.nrows(), p.ncols());
    let mut a: Vec<Vec<Poly<S>>> = (0..m)
        .map(|i| (0..n).map(|j| p.get(i, j).clone()).collect())
        .collect();
    let mut prev = Poly::one();
    let mut rank = 0;
    let mut cols: Vec<usize> = (0..n).collect();
    for k in 0..m.min(n) {
        // Pivot of lowest degree anywhere in the trailing block.
        let mut best: Option<(usize, usize, usize)> = None;
        for i in k..m {
            for (jj, &j) in cols.iter().enumerate().skip(k) {
                if let Some(d) = a[i][j].degree() {
                    if best.is_none_or(|b| d < b.2) {
                        best = Some((i, jj, d));
                    }
                }
            }
        }
        let Some((pi, pj, _)) = best else {
            break;
        };
        a.swap(k, pi);
        cols.swap(k, pj);
        let ck = cols[k];
        for i in (k + 1)..m {
            for jj in (k + 1)..n {
                let j = cols[jj];
                let v = &(&a[k][ck] * &a[i][j]) - &(&a[i][ck] * &a[k][j]);
                a[i][j] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][ck] = Poly::zero();
        }
        prev = a[k][ck].clone();
        rank += 1;
    }
    rank
}

pub fn matrix_valuation<S: Scalar>(a: &RatMat<S>, at: &S, ctx: &Context) -> Valuation {
    a.valuation_at(at, ctx)
}

pub fn normal_rank<S: Scalar>(a: &RatMat<S>, ctx: &Context) -> usize {
    a.normal_rank(ctx)
}

/// A random point where `a` has no pole, for generic spot checks.
pub fn random_regular_point<S: Scalar, R: Rng>(a: &RatMat<S>, rng: &mut R) -> S {
    loop {
        let x = S::random_point(rng);
        if a.eval(&x).is_some() {
            return x;
        }
    }
}
