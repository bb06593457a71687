//! Text rendering that the parser reads back.

use crate::poly::Poly;
use crate::ratfun::RatFun;
use crate::scalar::Scalar;

fn fmt_f64(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:?}")
    }
}

/// Scalars print without surrounding parentheses: `3/4`, `-2`, `1.5+2i`.
pub fn scalar_to_string<S: Scalar>(s: &S) -> String {
    if S::EXACT {
        return format!("{s}");
    }
    let z = s.to_c64();
    match (z.re == 0.0, z.im == 0.0) {
        (_, true) => fmt_f64(z.re),
        (true, false) => format!("{}i", fmt_f64(z.im)),
        (false, false) => {
            let sign = if z.im < 0.0 { "-" } else { "+" };
            format!("{}{}{}i", fmt_f64(z.re), sign, fmt_f64(z.im.abs()))
        }
    }
}

fn is_negative_real<S: Scalar>(s: &S) -> bool {
    let z = s.to_c64();
    z.im == 0.0 && z.re < 0.0
}

fn needs_parens(text: &str) -> bool {
    text.contains('/') || text[1..].contains(['+', '-'])
}

pub fn poly_to_string<S: Scalar>(p: &Poly<S>) -> String {
    poly_string_var(p, "λ")
}

pub fn poly_string_var<S: Scalar>(p: &Poly<S>, var: &str) -> String {
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_exact_zero() {
            continue;
        }
        let neg = is_negative_real(c);
        let mag = if neg { -c.clone() } else { c.clone() };
        let mut text = scalar_to_string(&mag);
        if k > 0 && needs_parens(&text) {
            text = format!("({text})");
        }
        let monomial = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        let term = if k > 0 && mag == S::one() {
            monomial
        } else {
            format!("{text}{monomial}")
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn term_count<S: Scalar>(p: &Poly<S>) -> usize {
    p.coeffs().iter().filter(|c| !c.is_exact_zero()).count()
}

pub fn ratfun_to_string<S: Scalar>(r: &RatFun<S>) -> String {
    if let Some(p) = r.as_poly() {
        return poly_to_string(&p);
    }
    let num = poly_to_string(r.num());
    let den = poly_to_string(r.den());
    let num = if term_count(r.num()) > 1 || num.contains('/') {
        format!("({num})")
    } else {
        num
    };
    let den = if term_count(r.den()) > 1 {
        format!("({den})")
    } else {
        den
    };
    format!("{num}/{den}")
}

pub fn vector_to_string<S: Scalar>(v: &[RatFun<S>]) -> String {
    let parts: Vec<String> = v.iter().map(ratfun_to_string).collect();
    format!("[{}]", parts.join(", "))
}
