//! Polynomial roots (Aberth iteration) and the approximate gcd built on them.

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::poly::Poly;
use crate::scalar::Context;

/// All complex roots of `p`, with multiplicity.
pub fn roots(p: &Poly<Complex64>) -> Vec<Complex64> {
    let Some(n) = p.degree() else {
        return Vec::new();
    };
    if n == 0 {
        return Vec::new();
    }
    let c = p.monic();
    let c = c.coeffs();
    // Zero roots are split off first; Aberth handles them poorly when exact.
    let zeros = c.iter().take_while(|x| x.is_zero()).count();
    let mut out = vec![Complex64::zero(); zeros];
    let q: Vec<Complex64> = c[zeros..].to_vec();
    let m = q.len() - 1;
    if m == 0 {
        return out;
    }
    if m == 1 {
        out.push(-q[0]);
        return out;
    }
    let bound = 1.0 + q[..m].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let lower = {
        // Cauchy lower bound keeps the starting circle away from 0.
        let a0 = q[0].norm();
        let s = q[1..].iter().map(|x| x.norm()).fold(0.0, f64::max);
        a0 / (a0 + s)
    };
    let radius = (lower * bound).sqrt().max(1e-3);
    let mut z: Vec<Complex64> = (0..m)
        .map(|k| {
            let theta = std::f64::consts::TAU * (k as f64 + 0.25) / m as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();
    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::zero();
        let mut d = Complex64::zero();
        for a in q.iter().rev() {
            d = d * x + v;
            v = v * x + a;
        }
        (v, d)
    };
    for _ in 0..800 {
        let mut moved = 0.0f64;
        for i in 0..m {
            let (v, d) = eval(z[i]);
            if v.is_zero() {
                continue;
            }
            let ratio = v / d;
            let mut s = Complex64::zero();
            for j in 0..m {
                if j != i {
                    let diff = z[i] - z[j];
                    if !diff.is_zero() {
                        s += Complex64::one() / diff;
                    }
                }
            }
            let w = ratio / (Complex64::one() - ratio * s);
            if w.re.is_finite() && w.im.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    out.extend(z);
    out
}

/// Approximate gcd: exact divisibility is tried first (it keeps multiple
/// roots intact), then simple common roots are matched pairwise.
pub fn float_gcd(a: &Poly<Complex64>, b: &Poly<Complex64>, ctx: &Context) -> Poly<Complex64> {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let (hi, lo) = if a.degree() >= b.degree() { (a, b) } else { (b, a) };
    if divides(lo, hi, ctx) {
        return lo.monic();
    }
    let ra = roots(a);
    let mut rb = roots(b);
    let mut common = Vec::new();
    for x in ra {
        let tol = ctx.cancel_tol * x.norm().max(1.0);
        if let Some((j, _)) = rb
            .iter()
            .enumerate()
            .map(|(j, y)| (j, (x - y).norm()))
            .filter(|&(_, d)| d <= tol)
            .min_by(|p, q| p.1.partial_cmp(&q.1).unwrap())
        {
            let y = rb.swap_remove(j);
            common.push((x + y) * 0.5);
        }
    }
    from_roots(&common)
}

/// Whether `d` divides `p` up to a remainder of relative size cancel_tol.
pub fn divides(d: &Poly<Complex64>, p: &Poly<Complex64>, ctx: &Context) -> bool {
    match p.divmod(&d.monic()) {
        Ok((_, r)) => r.max_abs() <= ctx.cancel_tol * p.max_abs(),
        Err(_) => false,
    }
}

pub fn from_roots(rs: &[Complex64]) -> Poly<Complex64> {
    let mut out = Poly::one();
    for r in rs {
        out = &out * &Poly::new(vec![-r, Complex64::one()]);
    }
    out
}
