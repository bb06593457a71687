use crate::dense::Mat;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ratmat::{PolyMat, RatMat};
use crate::scalar::{Context, Scalar};

/// Polynomial basis of the right null space with minimal column degrees.
#[derive(Clone, Debug, PartialEq)]
pub struct MinimalBasis<S> {
    /// n x p, one basis vector per column.
    pub n: PolyMat<S>,
    /// Column degrees, non-decreasing.
    pub indices: Vec<usize>,
}

impl<S: Scalar> MinimalBasis<S> {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn eval(&self, x: &S) -> Mat<S> {
        self.n.eval(x)
    }

    /// Matrix of the coefficients of λ^{deg_j} in each column j.
    pub fn leading_coefficients(&self) -> Mat<S> {
        Mat::from_fn(self.n.nrows(), self.indices.len(), |i, j| {
            self.n.get(i, j).coeff(self.indices[j])
        })
    }
}

/// Degree-by-degree search: the kernel of the block Sylvester matrix S_d
/// holds every null vector of degree ≤ d. At each d the shifts λ^s N_j of
/// the vectors found so far are kept, and the kernel is completed with new
/// vectors, which then have degree exactly d.
pub fn minimal_basis<S: Scalar>(a: &RatMat<S>, ctx: &Context) -> Result<MinimalBasis<S>> {
    let n = a.ncols();
    let rank = a.normal_rank(ctx);
    let p = n - rank;
    if p == 0 {
        return Ok(MinimalBasis {
            n: PolyMat::zeros(n, 0),
            indices: Vec::new(),
        });
    }
    let (pm, _) = a.clear_row_denominators(ctx);
    let delta = pm.degree().unwrap_or(0);
    let coeffs: Vec<Mat<S>> = (0..=delta).map(|k| pm.coeff(k)).collect();
    let m = a.nrows();
    let mut found: Vec<(usize, Mat<S>)> = Vec::new();
    let cap = rank * delta + 1;
    for d in 0..=cap {
        let rows = m * (delta + d + 1);
        let cols = n * (d + 1);
        let mut sd = Mat::zeros(rows, cols);
        for k in 0..=d {
            for (j, c) in coeffs.iter().enumerate() {
                for r in 0..m {
                    for q in 0..n {
                        sd[((j + k) * m + r, k * n + q)] = c[(r, q)].clone();
                    }
                }
            }
        }
        let ker = if m == 0 { Mat::identity(cols) } else { sd.nullspace(ctx) };
        let shifted: usize = found.iter().map(|(e, _)| d - e + 1).sum();
        let new = ker.ncols().saturating_sub(shifted);
        if new > 0 {
            let mut base_cols: Vec<Vec<S>> = Vec::new();
            for (e, v) in &found {
                for s in 0..=(d - e) {
                    let mut col = vec![S::zero(); cols];
                    for t in 0..=*e {
                        for q in 0..n {
                            col[(t + s) * n + q] = v[(q, t)].clone();
                        }
                    }
                    base_cols.push(col);
                }
            }
            let base = Mat::from_columns(cols, &base_cols);
            let coef = S::select_independent(&base, &ker, new.min(p - found.len()), ctx);
            let chosen = &ker * &coef;
            for c in 0..chosen.ncols() {
                let v = Mat::from_fn(n, d + 1, |q, t| chosen[(t * n + q, c)].clone());
                found.push((d, v));
            }
        }
        if found.len() >= p {
            break;
        }
    }
    if found.len() < p {
        return Err(Error::Verification(format!(
            "minimal basis search found {} of {} vectors",
            found.len(),
            p
        )));
    }
    let indices: Vec<usize> = found.iter().map(|(d, _)| *d).collect();
    let basis = PolyMat::from_fn(n, p, |q, j| Poly::new(found[j].1.row(q)));
    Ok(MinimalBasis {
        n: basis,
        indices,
    })
}

/// Minimal indices of the left null space, through the transpose.
pub fn left_minimal_indices<S: Scalar>(a: &RatMat<S>, ctx: &Context) -> Result<Vec<usize>> {
    Ok(minimal_basis(&a.transpose(), ctx)?.indices)
}
