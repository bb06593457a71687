//! Dense matrices over a scalar field and the handful of direct methods the
//! rest of the crate needs.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::poly::Poly;
use crate::scalar::{Context, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Mat { rows: r, cols: c, data }
    }

    pub fn from_columns(rows: usize, cols: &[Vec<S>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for i in 0..rows {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    pub fn column_vector(v: &[S]) -> Self {
        Self::from_columns(v.len(), &[v.to_vec()])
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vec<S> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, c: &S) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        Self::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)].clone()
            } else {
                other[(i - self.rows, j)].clone()
            }
        })
    }

    pub fn block_diag(&self, other: &Self) -> Self {
        Self::from_fn(self.rows + other.rows, self.cols + other.cols, |i, j| {
            if i < self.rows && j < self.cols {
                self[(i, j)].clone()
            } else if i >= self.rows && j >= self.cols {
                other[(i - self.rows, j - self.cols)].clone()
            } else {
                S::zero()
            }
        })
    }

    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Self::from_fn(r1 - r0, c1 - c0, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_exact_zero())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.modulus()).fold(0.0, f64::max)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Mat<T> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_exact_zero() {
                        acc = acc + self[(i, j)].clone() * v[j].clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::identity(self.rows);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn rank(&self, ctx: &Context) -> usize {
        S::rank(self, ctx)
    }

    pub fn nullspace(&self, ctx: &Context) -> Self {
        S::nullspace(self, ctx)
    }

    pub fn range(&self, ctx: &Context) -> Self {
        S::range(self, ctx)
    }

    pub fn rank_scaled(&self, scale: f64, ctx: &Context) -> usize {
        S::rank_scaled(self, scale, ctx)
    }

    pub fn range_scaled(&self, scale: f64, ctx: &Context) -> Self {
        S::range_scaled(self, scale, ctx)
    }

    /// Solves `self * X = rhs` for square `self` by Gaussian elimination with
    /// partial pivoting. `None` when a pivot vanishes (exactly, or relative to
    /// the matrix scale on the float backend).
    pub fn solve(&self, rhs: &Self, ctx: &Context) -> Option<Self> {
        assert!(self.is_square());
        assert_eq!(self.rows, rhs.rows);
        let n = self.rows;
        let mut a = self.clone();
        let mut b = rhs.clone();
        let scale = a.max_abs();
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| {
                a[(i, k)]
                    .modulus()
                    .partial_cmp(&a[(j, k)].modulus())
                    .unwrap()
            })?;
            let piv = a[(p, k)].clone();
            if piv.is_exact_zero() || piv.negligible(scale, ctx.rank_tol * n as f64) {
                return None;
            }
            a.swap_rows(k, p);
            b.swap_rows(k, p);
            let inv = S::one() / piv;
            for i in (k + 1)..n {
                if a[(i, k)].is_exact_zero() {
                    continue;
                }
                let f = a[(i, k)].clone() * inv.clone();
                for j in k..n {
                    let t = a[(k, j)].clone();
                    if !t.is_exact_zero() {
                        a[(i, j)] = a[(i, j)].clone() - f.clone() * t;
                    }
                }
                for j in 0..b.cols {
                    let t = b[(k, j)].clone();
                    if !t.is_exact_zero() {
                        b[(i, j)] = b[(i, j)].clone() - f.clone() * t;
                    }
                }
            }
        }
        for k in (0..n).rev() {
            let inv = S::one() / a[(k, k)].clone();
            for j in 0..b.cols {
                let mut acc = b[(k, j)].clone();
                for l in (k + 1)..n {
                    if !a[(k, l)].is_exact_zero() {
                        acc = acc - a[(k, l)].clone() * b[(l, j)].clone();
                    }
                }
                b[(k, j)] = acc * inv.clone();
            }
        }
        Some(b)
    }

    pub fn inverse(&self, ctx: &Context) -> Option<Self> {
        self.solve(&Self::identity(self.rows), ctx)
    }

    pub fn det(&self) -> S {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = S::one();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| {
                    a[(i, k)]
                        .modulus()
                        .partial_cmp(&a[(j, k)].modulus())
                        .unwrap()
                })
                .unwrap();
            if a[(p, k)].is_exact_zero() {
                return S::zero();
            }
            if p != k {
                a.swap_rows(k, p);
                det = -det;
            }
            let piv = a[(k, k)].clone();
            det = det * piv.clone();
            for i in (k + 1)..n {
                if a[(i, k)].is_exact_zero() {
                    continue;
                }
                let f = a[(i, k)].clone() / piv.clone();
                for j in k..n {
                    let t = a[(k, j)].clone();
                    a[(i, j)] = a[(i, j)].clone() - f.clone() * t;
                }
            }
        }
        det
    }

    /// Characteristic polynomial det(xI - A) through a Hessenberg reduction.
    pub fn charpoly(&self) -> Poly<S> {
        assert!(self.is_square());
        let n = self.rows;
        let mut h = self.clone();
        for c in 0..n.saturating_sub(2) {
            let p = ((c + 1)..n)
                .max_by(|&i, &j| {
                    h[(i, c)]
                        .modulus()
                        .partial_cmp(&h[(j, c)].modulus())
                        .unwrap()
                })
                .unwrap();
            if h[(p, c)].is_exact_zero() {
                continue;
            }
            if p != c + 1 {
                h.swap_rows(p, c + 1);
                h.swap_cols(p, c + 1);
            }
            let piv = h[(c + 1, c)].clone();
            for i in (c + 2)..n {
                if h[(i, c)].is_exact_zero() {
                    continue;
                }
                let u = h[(i, c)].clone() / piv.clone();
                for j in 0..n {
                    let t = h[(c + 1, j)].clone();
                    h[(i, j)] = h[(i, j)].clone() - u.clone() * t;
                }
                for r in 0..n {
                    let t = h[(r, i)].clone();
                    h[(r, c + 1)] = h[(r, c + 1)].clone() + u.clone() * t;
                }
            }
        }
        // p_m = (x - h_mm) p_{m-1} - sum_{i<m} h_im (prod_{j=i+1..m} h_{j,j-1}) p_{i-1}
        let x = Poly::x();
        let mut p: Vec<Poly<S>> = vec![Poly::one()];
        for m in 0..n {
            let mut next = &(&x - &Poly::constant(h[(m, m)].clone())) * &p[m];
            let mut prod = S::one();
            for i in (0..m).rev() {
                prod = prod * h[(i + 1, i)].clone();
                let coef = h[(i, m)].clone() * prod.clone();
                if !coef.is_exact_zero() {
                    next = &next - &p[i].scale(&coef);
                }
            }
            p.push(next);
        }
        p.pop().unwrap()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl<S> Index<(usize, usize)> for Mat<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> Mul for &Mat<S> {
    type Output = Mat<S>;
    fn mul(self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        let mut out: Mat<S> = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_exact_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_exact_zero() {
                        out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }
}

impl<S: Scalar> Add for &Mat<S> {
    type Output = Mat<S>;
    fn add(self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<S: Scalar> Sub for &Mat<S> {
    type Output = Mat<S>;
    fn sub(self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<S: Scalar> Neg for &Mat<S> {
    type Output = Mat<S>;
    fn neg(self) -> Mat<S> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a.clone()).collect(),
        }
    }
}

/// Reduced row echelon form with exact zero tests; returns the pivot columns.
pub fn rref<S: Scalar>(m: &Mat<S>) -> (Mat<S>, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_exact_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = S::one() / a[(r, c)].clone();
        for j in c..a.cols {
            a[(r, j)] = a[(r, j)].clone() * inv.clone();
        }
        for i in 0..a.rows {
            if i == r || a[(i, c)].is_exact_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..a.cols {
                let t = a[(r, j)].clone();
                if !t.is_exact_zero() {
                    a[(i, j)] = a[(i, j)].clone() - f.clone() * t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Null space basis read off the reduced echelon form: one vector per free
/// column, with a 1 in that column.
pub fn exact_nullspace<S: Scalar>(m: &Mat<S>) -> Mat<S> {
    let (red, pivots) = rref(m);
    let free: Vec<usize> = (0..m.ncols()).filter(|c| !pivots.contains(c)).collect();
    let mut out = Mat::zeros(m.ncols(), free.len());
    for (k, &f) in free.iter().enumerate() {
        out[(f, k)] = S::one();
        for (r, &p) in pivots.iter().enumerate() {
            out[(p, k)] = -red[(r, f)].clone();
        }
    }
    out
}

/// Incrementally maintained echelon basis (exact zero tests).
pub struct Echelon<S> {
    dim: usize,
    rows: Vec<(usize, Vec<S>)>,
}

impl<S: Scalar> Echelon<S> {
    pub fn new(dim: usize) -> Self {
        Echelon {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, mut v: Vec<S>) -> Vec<S> {
        assert_eq!(v.len(), self.dim);
        for (p, row) in &self.rows {
            if v[*p].is_exact_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_exact_zero() {
                    *x = x.clone() - f.clone() * r.clone();
                }
            }
        }
        v
    }

    /// Adds `v` when it is independent of the current span.
    pub fn insert(&mut self, v: Vec<S>) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_exact_zero()) else {
            return false;
        };
        let inv = S::one() / v[p].clone();
        for x in v.iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_exact_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, r) in row.iter_mut().zip(&v) {
                *x = x.clone() - f.clone() * r.clone();
            }
        }
        self.rows.push((p, v));
        true
    }
}

/// Columns of `v` lie in span(basis) up to the backend's rank policy.
pub fn in_span<S: Scalar>(basis: &Mat<S>, v: &Mat<S>, ctx: &Context) -> bool {
    let r0 = basis.rank(ctx);
    basis.hstack(v).rank(ctx) == r0
}
