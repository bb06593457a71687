//! Root polynomials of pencils and polynomial matrices at a point, read off
//! the kernels of block Toeplitz truncations, and the Jordan structure of a
//! regular pencil λE - A at a point.

use crate::dense::Mat;
use crate::error::{Error, Result};
use crate::ratfun::{Point, RatFun};
use crate::ratmat::{PolyMat, RatMat};
use crate::rootvec::{normalize, verify_set, MaximalSet, RootVector};
use crate::scalar::{Context, Scalar};
use crate::toeplitz::{blocks_to_polys, LocalAnalysis, PencilSeries, PolySeries};

/// M0 + (λ - λ0) M1.
#[derive(Clone, Debug, PartialEq)]
pub struct Pencil<S> {
    pub m0: Mat<S>,
    pub m1: Mat<S>,
    pub at: S,
}

impl<S: Scalar> Pencil<S> {
    pub fn new(m0: Mat<S>, m1: Mat<S>, at: S) -> Result<Self> {
        if m0.nrows() != m1.nrows() || m0.ncols() != m1.ncols() {
            return Err(Error::Dimension(format!(
                "pencil coefficients are {}x{} and {}x{}",
                m0.nrows(),
                m0.ncols(),
                m1.nrows(),
                m1.ncols()
            )));
        }
        Ok(Pencil { m0, m1, at })
    }

    /// Shifts L(λ) = A0 + λ A1 to the point: M0 = A0 + λ0 A1, M1 = A1.
    pub fn at_point(a0: &Mat<S>, a1: &Mat<S>, at: &S) -> Result<Self> {
        Self::new(a0 + &a1.scale(at), a1.clone(), at.clone())
    }

    pub fn nrows(&self) -> usize {
        self.m0.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.m0.ncols()
    }

    /// The pencil as a polynomial matrix in λ.
    pub fn to_polymat(&self) -> PolyMat<S> {
        let c0 = &self.m0 - &self.m1.scale(&self.at);
        PolyMat::pencil(&c0, &self.m1)
    }

    pub fn to_ratmat(&self) -> RatMat<S> {
        self.to_polymat().to_ratmat()
    }
}

/// Maximal set of root polynomials of the pencil at its point. Chains are
/// picked greedily from the deepest Toeplitz level down, each new value
/// independent of the local kernel and of the values already chosen.
pub fn pencil_maximal_set<S: Scalar>(p: &Pencil<S>, ctx: &Context) -> Result<MaximalSet<S>> {
    let r = p.to_ratmat();
    let rank = r.normal_rank(ctx);
    let mut series = PencilSeries {
        c0: p.m0.clone(),
        c1: p.m1.clone(),
    };
    let an = LocalAnalysis::run(&mut series, rank, rank + 2, ctx)?;
    assemble(&r, &p.at, an, ctx)
}

/// Same as [`pencil_maximal_set`] for a polynomial matrix of any degree.
pub fn poly_maximal_set<S: Scalar>(p: &PolyMat<S>, at: &S, ctx: &Context) -> Result<MaximalSet<S>> {
    let r = p.to_ratmat();
    let rank = r.normal_rank(ctx);
    let mut series = PolySeries::new(p, at);
    let cap = rank * series.degree().max(1) + 2;
    let an = LocalAnalysis::run(&mut series, rank, cap, ctx)?;
    assemble(&r, at, an, ctx)
}

fn assemble<S: Scalar>(r: &RatMat<S>, at: &S, an: LocalAnalysis<S>, ctx: &Context) -> Result<MaximalSet<S>> {
    let neg = -at.clone();
    let vectors = an
        .chains(1, ctx)
        .into_iter()
        .map(|(order, blocks)| {
            let vec = blocks_to_polys(&blocks)
                .into_iter()
                .map(|q| RatFun::from_poly(q.shift(&neg)))
                .collect();
            RootVector {
                point: Point::Finite(at.clone()),
                vec: normalize(vec, at),
                order,
                polynomialized: true,
            }
        })
        .collect();
    let set = MaximalSet {
        point: Point::Finite(at.clone()),
        vectors,
        sigmas: an.taus().into_iter().map(|t| t as i64).collect(),
        kernel: an.kernel,
    };
    verify_set(r, &set, at, ctx)?;
    Ok(set)
}

/// Sizes of the Jordan blocks of λE - A at λ0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotentStructure {
    /// Non-increasing.
    pub blocks: Vec<usize>,
}

impl NilpotentStructure {
    /// Size of the largest block; 0 when λ0 is not an eigenvalue.
    pub fn largest(&self) -> usize {
        self.blocks.first().copied().unwrap_or(0)
    }

    /// Algebraic multiplicity of λ0.
    pub fn multiplicity(&self) -> usize {
        self.blocks.iter().sum()
    }
}

/// Jordan structure at λ0 of the regular pencil λE - A. The kernel growth of
/// the Toeplitz truncations of (λ0 E - A) + t E gives the block sizes.
pub fn nilpotent_structure<S: Scalar>(
    a: &Mat<S>,
    e: &Mat<S>,
    at: &S,
    ctx: &Context,
) -> Result<NilpotentStructure> {
    let d = a.nrows();
    if !a.is_square() || e.nrows() != d || e.ncols() != d {
        return Err(Error::Dimension(format!(
            "A is {}x{}, E is {}x{}",
            a.nrows(),
            a.ncols(),
            e.nrows(),
            e.ncols()
        )));
    }
    if d == 0 {
        return Ok(NilpotentStructure { blocks: Vec::new() });
    }
    let c0 = &e.scale(at) - a;
    if PolyMat::pencil(&(&Mat::zeros(d, d) - a), e).to_ratmat().normal_rank(ctx) < d {
        return Err(Error::SingularPencil);
    }
    let mut series = PencilSeries { c0, c1: e.clone() };
    let an = LocalAnalysis::run(&mut series, d, d + 2, ctx)?;
    let blocks = an.taus().into_iter().filter(|&t| t > 0).collect();
    Ok(NilpotentStructure { blocks })
}
