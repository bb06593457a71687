//! Univariate polynomials, coefficients stored lowest degree first.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{Context, Scalar, DEFAULT_ZERO_TOL};

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    /// Trims the top: exact zeros on the exact backend, coefficients below
    /// 1e-12 of the largest one on the float backend.
    pub fn new(coeffs: Vec<S>) -> Self {
        let scale = coeffs.iter().map(|c| c.modulus()).fold(0.0, f64::max);
        Self::trimmed(coeffs, scale)
    }

    /// Trims relative to an externally supplied magnitude, used after
    /// cancellation-prone operations where the operands set the scale.
    pub fn trimmed(mut coeffs: Vec<S>, scale: f64) -> Self {
        while let Some(c) = coeffs.last() {
            if c.is_exact_zero() || (!S::EXACT && c.negligible(scale, DEFAULT_ZERO_TOL)) {
                coeffs.pop();
            } else {
                break;
            }
        }
        if !S::EXACT {
            for c in coeffs.iter_mut() {
                if c.negligible(scale, DEFAULT_ZERO_TOL * 1e-3) {
                    *c = S::zero();
                }
            }
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Poly {
            coeffs: vec![S::zero(), S::one()],
        }
    }

    pub fn monomial(c: S, k: usize) -> Self {
        let mut v = vec![S::zero(); k];
        v.push(c);
        Self::new(v)
    }

    /// (λ - a)^k
    pub fn linear_power(a: &S, k: usize) -> Self {
        let lin = Poly {
            coeffs: vec![-a.clone(), S::one()],
        };
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * &lin;
        }
        out
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> S {
        self.coeffs.get(i).cloned().unwrap_or_else(S::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> S {
        self.coeffs.last().cloned().unwrap_or_else(S::zero)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.modulus()).fold(0.0, f64::max)
    }

    pub fn eval(&self, x: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_exact_zero() {
            return Self::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let inv = S::one() / self.leading();
        let mut coeffs: Vec<S> = self.coeffs.iter().map(|x| x.clone() * inv.clone()).collect();
        *coeffs.last_mut().unwrap() = S::one();
        Poly { coeffs }
    }

    pub fn divmod(&self, d: &Self) -> Result<(Self, Self)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = d.degree().unwrap();
        let scale = self.max_abs();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let lead_inv = S::one() / d.leading();
        let mut quot = vec![S::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() * lead_inv.clone();
            if !c.is_exact_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].clone() - c.clone() * dj.clone();
                }
            }
            rem[k + dd] = S::zero();
            quot[k] = c;
        }
        rem.truncate(dd);
        let qscale = scale / d.leading().modulus().max(f64::MIN_POSITIVE);
        Ok((Self::trimmed(quot, qscale), Self::trimmed(rem, scale)))
    }

    /// Quotient of a division expected to be exact.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        Ok(self.divmod(d)?.0)
    }

    pub fn gcd(&self, other: &Self, ctx: &Context) -> Self {
        S::poly_gcd(self, other, ctx)
    }

    /// p(t + a) as a polynomial in t.
    pub fn shift(&self, a: &S) -> Self {
        if a.is_exact_zero() {
            return self.clone();
        }
        let mut c = self.coeffs.clone();
        let n = c.len();
        // Repeated synthetic division (Taylor shift).
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = c[j + 1].clone() * a.clone();
                c[j] = c[j].clone() + t;
            }
        }
        Self::trimmed(c, self.max_abs())
    }

    /// t^n p(1/t); requires n >= degree.
    pub fn reverse(&self, n: usize) -> Self {
        let mut c = vec![S::zero(); n + 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            c[n - i] = x.clone();
        }
        Self::new(c)
    }

    pub fn mul_xk(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![S::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        Poly { coeffs: c }
    }

    /// Keeps the coefficients of degree < n.
    pub fn truncate(&self, n: usize) -> Self {
        Self::new(self.coeffs.iter().take(n).cloned().collect())
    }

    /// Number of leading low-order coefficients that vanish.
    pub fn low_zeros(&self, rel: f64) -> usize {
        let scale = self.max_abs();
        self.coeffs
            .iter()
            .take_while(|c| c.is_exact_zero() || (!S::EXACT && c.negligible(scale, rel)))
            .count()
    }

    /// Multiplicity of `a` as a root: exact by synthetic division, float by
    /// counting negligible coefficients of the shifted polynomial.
    pub fn root_multiplicity(&self, a: &S, rel: f64) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        self.shift(a).low_zeros(rel)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * S::from_i64(i as i64))
                .collect(),
        )
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

/// Monic gcd by the Euclidean algorithm; meant for exact arithmetic.
pub fn euclid_gcd<S: Scalar>(a: &Poly<S>, b: &Poly<S>) -> Poly<S> {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let r = x.divmod(&y).expect("nonzero divisor").1;
        x = y;
        y = r;
    }
    x.monic()
}

fn add_coeffs<S: Scalar>(a: &[S], b: &[S], sign: bool) -> Vec<S> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(S::zero);
            let y = b.get(i).cloned().unwrap_or_else(S::zero);
            if sign {
                x + y
            } else {
                x - y
            }
        })
        .collect()
}

impl<S: Scalar> Add for &Poly<S> {
    type Output = Poly<S>;
    fn add(self, rhs: &Poly<S>) -> Poly<S> {
        let scale = self.max_abs().max(rhs.max_abs());
        Poly::trimmed(add_coeffs(&self.coeffs, &rhs.coeffs, true), scale)
    }
}

impl<S: Scalar> Sub for &Poly<S> {
    type Output = Poly<S>;
    fn sub(self, rhs: &Poly<S>) -> Poly<S> {
        let scale = self.max_abs().max(rhs.max_abs());
        Poly::trimmed(add_coeffs(&self.coeffs, &rhs.coeffs, false), scale)
    }
}

impl<S: Scalar> Mul for &Poly<S> {
    type Output = Poly<S>;
    fn mul(self, rhs: &Poly<S>) -> Poly<S> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_exact_zero() {
                    c[i + j] = c[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        let scale = self.max_abs() * rhs.max_abs();
        Poly::trimmed(c, scale)
    }
}

impl<S: Scalar> Neg for &Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl<S: Scalar> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::format::poly_to_string(self))
    }
}
