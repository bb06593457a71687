//! Scalar rational functions and local discrete valuations.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{Context, Scalar};

/// Exponent of (λ - λ0) in the normal form; `Infinite` only for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(k) => Some(k),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Valuation::Infinite
    }

    pub fn min(self, other: Valuation) -> Valuation {
        std::cmp::min(self, other)
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl PartialEq<i64> for Valuation {
    fn eq(&self, other: &i64) -> bool {
        *self == Valuation::Finite(*other)
    }
}

impl PartialOrd<i64> for Valuation {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&Valuation::Finite(*other)))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(k) => write!(f, "{k}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// A finite evaluation point or the point at infinity.
#[derive(Clone, Debug, PartialEq)]
pub enum Point<S> {
    Finite(S),
    Infinity,
}

impl<S: Scalar> Point<S> {
    pub fn finite(&self) -> Option<&S> {
        match self {
            Point::Finite(s) => Some(s),
            Point::Infinity => None,
        }
    }
}

impl<S: Scalar> fmt::Display for Point<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(s) => write!(f, "{}", crate::format::scalar_to_string(s)),
            Point::Infinity => write!(f, "inf"),
        }
    }
}

/// num/den with den monic and gcd(num, den) = 1 (up to tolerance on floats).
#[derive(Clone, Debug, PartialEq)]
pub struct RatFun<S> {
    num: Poly<S>,
    den: Poly<S>,
}

impl<S: Scalar> RatFun<S> {
    pub fn new(num: Poly<S>, den: Poly<S>) -> Result<Self> {
        Self::new_with(num, den, &Context::default())
    }

    pub fn new_with(num: Poly<S>, den: Poly<S>, ctx: &Context) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den, ctx);
            if g.is_constant() {
                (num, den)
            } else {
                (num.div_exact(&g)?, den.div_exact(&g)?)
            }
        };
        let lead = den.leading();
        let inv = S::one() / lead;
        Ok(RatFun {
            num: num.scale(&inv),
            den: den.monic(),
        })
    }

    pub fn from_poly(p: Poly<S>) -> Self {
        RatFun {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: S) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn from_i64(v: i64) -> Self {
        Self::constant(S::from_i64(v))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn x() -> Self {
        Self::from_poly(Poly::x())
    }

    pub fn num(&self) -> &Poly<S> {
        &self.num
    }

    pub fn den(&self) -> &Poly<S> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_constant() && self.num.is_constant()
    }

    /// The polynomial when the denominator is constant.
    pub fn as_poly(&self) -> Option<Poly<S>> {
        self.is_polynomial()
            .then(|| self.num.scale(&(S::one() / self.den.leading())))
    }

    /// `None` at a pole.
    pub fn eval(&self, x: &S) -> Option<S> {
        let d = self.den.eval(x);
        let scale = self.den.max_abs() * (1.0 + x.modulus()).powi(self.den.coeffs().len() as i32);
        if d.is_exact_zero() || (!S::EXACT && d.negligible(scale, 1e-13)) {
            return None;
        }
        Some(self.num.eval(x) / d)
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_exact_zero() {
            return Self::zero();
        }
        RatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn valuation_at(&self, at: &S) -> Valuation {
        self.valuation_at_with(at, &Context::default())
    }

    pub fn valuation_at_with(&self, at: &S, ctx: &Context) -> Valuation {
        if self.is_zero() {
            return Valuation::Infinite;
        }
        let vn = self.num.root_multiplicity(at, ctx.cancel_tol) as i64;
        let vd = self.den.root_multiplicity(at, ctx.cancel_tol) as i64;
        Valuation::Finite(vn - vd)
    }

    pub fn valuation_at_infinity(&self) -> Valuation {
        match (self.num.degree(), self.den.degree()) {
            (None, _) => Valuation::Infinite,
            (Some(n), Some(d)) => Valuation::Finite(d as i64 - n as i64),
            (Some(_), None) => unreachable!("denominator is never zero"),
        }
    }

    pub fn valuation(&self, at: &Point<S>, ctx: &Context) -> Valuation {
        match at {
            Point::Finite(a) => self.valuation_at_with(a, ctx),
            Point::Infinity => self.valuation_at_infinity(),
        }
    }

    /// Coefficients c_from..=c_to of the Laurent expansion about `at`.
    pub fn laurent(&self, at: &S, from: i64, to: i64) -> Result<Vec<S>> {
        self.laurent_with(at, from, to, &Context::default())
    }

    pub fn laurent_with(&self, at: &S, from: i64, to: i64, ctx: &Context) -> Result<Vec<S>> {
        if to < from {
            return Err(Error::EmptyWindow { from, to });
        }
        let len = (to - from + 1) as usize;
        if self.is_zero() {
            return Ok(vec![S::zero(); len]);
        }
        let n = self.num.shift(at);
        let d = self.den.shift(at);
        let vn = n.low_zeros(ctx.cancel_tol);
        let vd = d.low_zeros(ctx.cancel_tol);
        let v = vn as i64 - vd as i64;
        let n = &n.coeffs()[vn..];
        let d = &d.coeffs()[vd..];
        let terms = if to >= v { (to - v + 1) as usize } else { 0 };
        let mut s: Vec<S> = Vec::with_capacity(terms);
        let d0_inv = S::one() / d[0].clone();
        for k in 0..terms {
            let mut acc = n.get(k).cloned().unwrap_or_else(S::zero);
            for j in 1..=k.min(d.len() - 1) {
                acc = acc - d[j].clone() * s[k - j].clone();
            }
            s.push(acc * d0_inv.clone());
        }
        Ok((from..=to)
            .map(|j| {
                if j < v {
                    S::zero()
                } else {
                    s[(j - v) as usize].clone()
                }
            })
            .collect())
    }

    /// r(λ + a).
    pub fn shift(&self, a: &S) -> Self {
        RatFun::new(self.num.shift(a), self.den.shift(a)).expect("shifted denominator is nonzero")
    }

    /// r(1/λ).
    pub fn substitute_reciprocal(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let dn = self.num.degree().unwrap();
        let dd = self.den.degree().unwrap();
        let mut p = self.num.reverse(dn);
        let mut q = self.den.reverse(dd);
        if dn > dd {
            q = q.mul_xk(dn - dd);
        } else {
            p = p.mul_xk(dd - dn);
        }
        RatFun::new(p, q).expect("reversed denominator is nonzero")
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> RatFun<T> {
        RatFun::new(self.num.map(&f), self.den.map(&f)).expect("mapped denominator is nonzero")
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut out = Self::one();
        for _ in 0..k.unsigned_abs() {
            out = &out * &base;
        }
        Ok(out)
    }

    /// (λ - a)^k for any integer k.
    pub fn linear_power(a: &S, k: i64) -> Self {
        let p = Poly::linear_power(a, k.unsigned_abs() as usize);
        if k >= 0 {
            Self::from_poly(p)
        } else {
            RatFun { num: Poly::one(), den: p }
        }
    }
}

impl<S: Scalar> Add for &RatFun<S> {
    type Output = RatFun<S>;
    fn add(self, rhs: &RatFun<S>) -> RatFun<S> {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFun::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        RatFun::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .unwrap()
    }
}

impl<S: Scalar> Sub for &RatFun<S> {
    type Output = RatFun<S>;
    fn sub(self, rhs: &RatFun<S>) -> RatFun<S> {
        self + &(-rhs)
    }
}

impl<S: Scalar> Mul for &RatFun<S> {
    type Output = RatFun<S>;
    fn mul(self, rhs: &RatFun<S>) -> RatFun<S> {
        if self.is_zero() || rhs.is_zero() {
            return RatFun::zero();
        }
        if self.is_polynomial() && rhs.is_polynomial() {
            let c = S::one() / (self.den.leading() * rhs.den.leading());
            return RatFun::from_poly((&self.num * &rhs.num).scale(&c));
        }
        RatFun::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

impl<S: Scalar> Neg for &RatFun<S> {
    type Output = RatFun<S>;
    fn neg(self) -> RatFun<S> {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<S: Scalar> From<Poly<S>> for RatFun<S> {
    fn from(p: Poly<S>) -> Self {
        RatFun::from_poly(p)
    }
}

impl<S: Scalar> fmt::Display for RatFun<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::format::ratfun_to_string(self))
    }
}
