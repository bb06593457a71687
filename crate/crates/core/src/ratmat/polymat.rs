use crate::dense::Mat;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ratfun::RatFun;
use crate::ratmat::RatMat;
use crate::scalar::Scalar;

/// Dense matrix of polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMat<S> {
    rows: usize,
    cols: usize,
    entries: Vec<Poly<S>>,
}

impl<S: Scalar> PolyMat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMat {
            rows,
            cols,
            entries: vec![Poly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Poly::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Poly<S>) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMat { rows, cols, entries }
    }

    /// `c0 + λ c1`.
    pub fn pencil(c0: &Mat<S>, c1: &Mat<S>) -> Self {
        assert_eq!((c0.nrows(), c0.ncols()), (c1.nrows(), c1.ncols()));
        Self::from_fn(c0.nrows(), c0.ncols(), |i, j| {
            Poly::new(vec![c0[(i, j)].clone(), c1[(i, j)].clone()])
        })
    }

    pub fn from_constant(c: &Mat<S>) -> Self {
        Self::from_fn(c.nrows(), c.ncols(), |i, j| Poly::constant(c[(i, j)].clone()))
    }

    /// Fails when an entry has a nonconstant denominator.
    pub fn from_ratmat(r: &RatMat<S>) -> Result<Self> {
        let mut entries = Vec::with_capacity(r.nrows() * r.ncols());
        for i in 0..r.nrows() {
            for j in 0..r.ncols() {
                entries.push(r.get(i, j).as_poly().ok_or_else(|| {
                    Error::Precondition(format!("entry ({i},{j}) is not a polynomial"))
                })?);
            }
        }
        Ok(PolyMat {
            rows: r.nrows(),
            cols: r.ncols(),
            entries,
        })
    }

    pub fn to_ratmat(&self) -> RatMat<S> {
        RatMat::from_fn(self.rows, self.cols, |i, j| RatFun::from_poly(self.get(i, j).clone()))
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly<S> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly<S>) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(|p| p.degree()).max()
    }

    /// Coefficient matrix of λ^k.
    pub fn coeff(&self, k: usize) -> Mat<S> {
        Mat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).coeff(k))
    }

    pub fn eval(&self, x: &S) -> Mat<S> {
        Mat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).eval(x))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
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

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| -self.get(i, j))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        Self::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = Poly::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = o.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        })
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + o.get(i, j))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    /// col_j -= q * col_p
    pub(crate) fn col_axpy(&mut self, j: usize, q: &Poly<S>, p: usize) {
        for i in 0..self.rows {
            let t = self.get(i, p);
            if t.is_zero() {
                continue;
            }
            let v = self.get(i, j) - &(q * t);
            self.set(i, j, v);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub(crate) fn scale_col(&mut self, j: usize, c: &S) {
        for i in 0..self.rows {
            let v = self.get(i, j).scale(c);
            self.set(i, j, v);
        }
    }

    /// Determinant by evaluation and interpolation.
    pub fn det(&self) -> Result<Poly<S>> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Poly::one());
        }
        let bound: usize = (0..n)
            .map(|i| (0..n).filter_map(|j| self.get(i, j).degree()).max().unwrap_or(0))
            .sum();
        let nodes = Nodes::new(bound + 1, 1.0, |_| false);
        let ys: Vec<S> = nodes.points.iter().map(|x| self.eval(x).det()).collect();
        Ok(nodes.interpolate(&ys))
    }

    pub fn max_coeff(&self) -> f64 {
        self.entries.iter().map(|p| p.max_abs()).fold(0.0, f64::max)
    }
}

/// Interpolation nodes: consecutive integers on the exact backend, points on
/// a circle on the float backend (interpolated by an inverse DFT).
pub struct Nodes<S> {
    pub points: Vec<S>,
    radius: f64,
}

impl<S: Scalar> Nodes<S> {
    /// `avoid` rejects unusable nodes (poles); float nodes move to a larger
    /// circle until none is rejected.
    pub fn new(count: usize, radius: f64, avoid: impl Fn(&S) -> bool) -> Self {
        if S::EXACT {
            let mut points = Vec::with_capacity(count);
            let mut k = 0i64;
            while points.len() < count {
                let x = S::from_i64(k);
                if !avoid(&x) {
                    points.push(x);
                }
                k = if k >= 0 { -k - 1 } else { -k };
            }
            return Nodes { points, radius };
        }
        let mut radius = radius;
        loop {
            let points: Vec<S> = (0..count)
                .map(|k| {
                    let z = num_complex::Complex64::from_polar(
                        radius,
                        std::f64::consts::TAU * k as f64 / count as f64 + PHASE,
                    );
                    complex_to_scalar(z)
                })
                .collect();
            if !points.iter().any(&avoid) {
                return Nodes { points, radius };
            }
            radius *= 1.37;
        }
    }

    pub fn interpolate(&self, values: &[S]) -> Poly<S> {
        assert_eq!(values.len(), self.points.len());
        if S::EXACT {
            return newton(&self.points, values);
        }
        let n = values.len();
        let coeffs: Vec<S> = (0..n)
            .map(|j| {
                let mut acc = num_complex::Complex64::new(0.0, 0.0);
                for (k, v) in values.iter().enumerate() {
                    let theta = std::f64::consts::TAU * k as f64 / n as f64 + PHASE;
                    acc += v.to_c64() * num_complex::Complex64::from_polar(1.0, -theta * j as f64);
                }
                complex_to_scalar(acc / (n as f64 * self.radius.powi(j as i32)))
            })
            .collect();
        Poly::new(coeffs)
    }
}

const PHASE: f64 = 0.3;

fn complex_to_scalar<S: Scalar>(z: num_complex::Complex64) -> S {
    let re = S::from_rational(&float_to_rational(z.re));
    match S::imaginary_unit() {
        Some(i) => re + S::from_rational(&float_to_rational(z.im)) * i,
        None => re,
    }
}

fn float_to_rational(v: f64) -> num_rational::BigRational {
    num_rational::BigRational::from_float(v).unwrap_or_default()
}

fn newton<S: Scalar>(xs: &[S], ys: &[S]) -> Poly<S> {
    let n = xs.len();
    let mut c = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            c[i] = (c[i].clone() - c[i - 1].clone()) / (xs[i].clone() - xs[i - j].clone());
        }
    }
    let mut p = Poly::constant(c[n - 1].clone());
    for i in (0..n - 1).rev() {
        let lin = Poly::new(vec![-xs[i].clone(), S::one()]);
        p = &(&p * &lin) + &Poly::constant(c[i].clone());
    }
    p
}
