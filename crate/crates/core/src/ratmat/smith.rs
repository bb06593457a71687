use crate::error::{Error, Result};
use crate::ratfun::{Point, RatFun, Valuation};
use crate::ratmat::RatMat;
use crate::scalar::{Context, Scalar};
use crate::toeplitz::{LocalAnalysis, RatSeries};

/// Partial multiplicities at a point. On the exact backend the witnesses
/// satisfy U R V = diag((λ-λ0)^e_1, ..., (λ-λ0)^e_r, 0) with e ascending,
/// i.e. the sigmas in reverse order.
#[derive(Clone, Debug)]
pub struct LocalStructure<S> {
    pub point: Point<S>,
    /// σ_1 ≥ ... ≥ σ_r.
    pub sigmas: Vec<i64>,
    pub u: Option<RatMat<S>>,
    pub v: Option<RatMat<S>>,
}

impl<S: Scalar> LocalStructure<S> {
    pub fn positive(&self) -> Vec<i64> {
        self.sigmas.iter().copied().filter(|&s| s > 0).collect()
    }

    /// Diagonal exponents in the order the witnesses produce them.
    pub fn diagonal_exponents(&self) -> Vec<i64> {
        self.sigmas.iter().rev().copied().collect()
    }
}

pub fn smith_mcmillan_local<S: Scalar>(
    a: &RatMat<S>,
    at: &S,
    ctx: &Context,
) -> Result<LocalStructure<S>> {
    if S::EXACT {
        let (sigmas, u, v) = local_reduce(a, at, ctx)?;
        return Ok(LocalStructure {
            point: Point::Finite(at.clone()),
            sigmas,
            u: Some(u),
            v: Some(v),
        });
    }
    let rank = a.normal_rank(ctx);
    let m = a.pole_order(at, ctx);
    let cap = toeplitz_cap(a, m, rank, ctx);
    let mut series = RatSeries::new(a, at, m, ctx);
    let an = LocalAnalysis::run(&mut series, rank, cap, ctx)?;
    let sigmas = an.taus().into_iter().map(|t| t as i64 - m as i64).collect();
    Ok(LocalStructure {
        point: Point::Finite(at.clone()),
        sigmas,
        u: None,
        v: None,
    })
}

/// Local structure at a finite point or at infinity (through R(1/λ) at 0).
pub fn smith_mcmillan_at<S: Scalar>(
    a: &RatMat<S>,
    at: &Point<S>,
    ctx: &Context,
) -> Result<LocalStructure<S>> {
    match at {
        Point::Finite(x) => smith_mcmillan_local(a, x, ctx),
        Point::Infinity => {
            let mut s = smith_mcmillan_local(&a.substitute_reciprocal(), &S::zero(), ctx)?;
            s.point = Point::Infinity;
            s.u = s.u.map(|u| u.substitute_reciprocal());
            s.v = s.v.map(|v| v.substitute_reciprocal());
            Ok(s)
        }
    }
}

/// Upper bound on the largest partial multiplicity of (λ-λ0)^m R, plus slack.
pub(crate) fn toeplitz_cap<S: Scalar>(a: &RatMat<S>, m: usize, rank: usize, ctx: &Context) -> usize {
    let (p, _) = a.clear_row_denominators(ctx);
    let deg = p.degree().unwrap_or(0);
    m * rank.max(1) + rank * deg + 2
}

/// Smith-style reduction over the local ring: pivot of minimal valuation
/// (ties to the lowest (row, col)), eliminate its row and column with
/// factors of nonnegative valuation, then divide the pivot by its unit part.
fn local_reduce<S: Scalar>(
    a: &RatMat<S>,
    at: &S,
    ctx: &Context,
) -> Result<(Vec<i64>, RatMat<S>, RatMat<S>)> {
    let (m, n) = (a.nrows(), a.ncols());
    let mut w: Vec<Vec<RatFun<S>>> = (0..m).map(|i| a.row(i)).collect();
    let mut u: Vec<Vec<RatFun<S>>> = (0..m).map(|i| RatMat::identity(m).row(i)).collect();
    let mut v: Vec<Vec<RatFun<S>>> = (0..n).map(|i| RatMat::identity(n).row(i)).collect();
    let mut exps = Vec::new();
    for k in 0..m.min(n) {
        let mut best: Option<(i64, usize, usize)> = None;
        for (i, row) in w.iter().enumerate().skip(k) {
            for (j, x) in row.iter().enumerate().skip(k) {
                if let Valuation::Finite(val) = x.valuation_at_with(at, ctx) {
                    if best.is_none_or(|b| val < b.0) {
                        best = Some((val, i, j));
                    }
                }
            }
        }
        let Some((e, pi, pj)) = best else {
            break;
        };
        w.swap(k, pi);
        u.swap(k, pi);
        for row in w.iter_mut() {
            row.swap(k, pj);
        }
        for row in v.iter_mut() {
            row.swap(k, pj);
        }
        let piv_inv = w[k][k].inv()?;
        for i in (k + 1)..m {
            if w[i][k].is_zero() {
                continue;
            }
            let f = &w[i][k] * &piv_inv;
            for j in k..n {
                if !w[k][j].is_zero() {
                    w[i][j] = &w[i][j] - &(&f * &w[k][j]);
                }
            }
            for j in 0..m {
                if !u[k][j].is_zero() {
                    u[i][j] = &u[i][j] - &(&f * &u[k][j]);
                }
            }
        }
        for j in (k + 1)..n {
            if w[k][j].is_zero() {
                continue;
            }
            let g = &w[k][j] * &piv_inv;
            w[k][j] = RatFun::zero();
            for row in v.iter_mut() {
                if !row[k].is_zero() {
                    row[j] = &row[j] - &(&g * &row[k]);
                }
            }
        }
        // Unit part of the pivot, moved into U.
        let unit_inv = &RatFun::linear_power(at, e) * &piv_inv;
        for j in 0..m {
            u[k][j] = &u[k][j] * &unit_inv;
        }
        w[k][k] = RatFun::linear_power(at, e);
        exps.push(e);
    }
    if exps.windows(2).any(|p| p[0] > p[1]) {
        return Err(Error::Verification(
            "local reduction produced non-monotone exponents".into(),
        ));
    }
    let sigmas = exps.iter().rev().copied().collect();
    let u = RatMat::new(u)?;
    let v = RatMat::new(v)?;
    Ok((sigmas, u, v))
}

pub fn is_local_unimodular<S: Scalar>(m: &RatMat<S>, at: &S, ctx: &Context) -> Result<bool> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() == 0 {
        return Ok(true);
    }
    Ok(m.valuation_at(at, ctx) == Valuation::Finite(0)
        && m.det()?.valuation_at_with(at, ctx) == Valuation::Finite(0))
}
