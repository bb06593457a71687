//! Text grammar for rational functions and matrices.
//!
//! Expressions use `+ - * / ^`, parentheses, implicit multiplication
//! (`2l^2`, `3(l+1)`), integer/decimal literals (parsed exactly), an `i`
//! suffix for imaginary literals and `l` or `λ` for the variable. A matrix
//! is written row by row, entries separated by `,` and rows by `;`,
//! optionally wrapped in `[ ]`. `#` starts a comment.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ratfun::RatFun;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational, bool),
    Var,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Semi,
    LBracket,
    RBracket,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn perr(line: usize, col: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column: col,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<(Vec<Spanned>, usize, usize)> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' | '−' => Some(Tok::Minus),
            '*' | '·' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            'l' | 'λ' => Some(Tok::Var),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, line: l0, col: c0 });
            i += 1;
            col += 1;
            continue;
        }
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c == 'i' {
            // A bare `i` is the imaginary unit.
            out.push(Spanned {
                tok: Tok::Num(BigRational::one(), true),
                line: l0,
                col: c0,
            });
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let int_part: String = chars[start..i].iter().collect();
            let mut frac = String::new();
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                let fs = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                frac = chars[fs..i].iter().collect();
            }
            if int_part.is_empty() && frac.is_empty() {
                return Err(perr(l0, c0, "malformed number"));
            }
            let mut exp: i64 = 0;
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                let mut sign = 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    if chars[j] == '-' {
                        sign = -1;
                    }
                    j += 1;
                }
                let es = j;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j == es {
                    return Err(perr(l0, c0, "malformed exponent"));
                }
                let digits: String = chars[es..j].iter().collect();
                exp = sign
                    * digits
                        .parse::<i64>()
                        .map_err(|_| perr(l0, c0, "exponent out of range"))?;
                if exp.abs() > 400 {
                    return Err(perr(l0, c0, "exponent out of range"));
                }
                i = j;
            }
            let mut imag = false;
            if i < chars.len() && chars[i] == 'i' {
                imag = true;
                i += 1;
            }
            col += i - start;
            let digits = format!("{int_part}{frac}");
            let mantissa: BigInt = digits.parse().map_err(|_| perr(l0, c0, "malformed number"))?;
            let scale = exp - frac.len() as i64;
            let ten = BigInt::from(10);
            let value = if scale >= 0 {
                BigRational::from_integer(mantissa * ten.pow(scale as u32))
            } else {
                BigRational::new(mantissa, ten.pow((-scale) as u32))
            };
            out.push(Spanned {
                tok: Tok::Num(value, imag),
                line: l0,
                col: c0,
            });
            continue;
        }
        return Err(perr(l0, c0, format!("unexpected character '{c}'")));
    }
    Ok((out, line, col))
}

struct Parser<S> {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
    _s: std::marker::PhantomData<S>,
}

impl<S: Scalar> Parser<S> {
    fn new(src: &str) -> Result<Self> {
        let (toks, line, col) = lex(src)?;
        Ok(Parser {
            toks,
            pos: 0,
            end: (line, col),
            _s: std::marker::PhantomData,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map_or(self.end, |s| (s.line, s.col))
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (l, c) = self.here();
        perr(l, c, msg)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFun<S>> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = &acc + &self.term()?;
            } else if self.eat(&Tok::Minus) {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Num(..)) | Some(Tok::Var) | Some(Tok::LParen)
        )
    }

    fn term(&mut self) -> Result<RatFun<S>> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(&Tok::Star) {
                acc = &acc * &self.unary()?;
            } else if matches!(self.peek(), Some(Tok::Slash)) {
                self.pos += 1;
                let at = self.here();
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(perr(at.0, at.1, "division by zero"));
                }
                acc = acc.div(&d)?;
            } else if self.starts_factor() {
                acc = &acc * &self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFun<S>> {
        if self.eat(&Tok::Minus) {
            return Ok(-&self.unary()?);
        }
        if self.eat(&Tok::Plus) {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFun<S>> {
        let base = self.atom()?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let paren = self.eat(&Tok::LParen);
        let neg = self.eat(&Tok::Minus);
        let at = self.here();
        let k = match self.peek() {
            Some(Tok::Num(v, false)) if v.is_integer() => {
                let k: i64 = v
                    .to_integer()
                    .try_into()
                    .map_err(|_| perr(at.0, at.1, "exponent too large"))?;
                self.pos += 1;
                k
            }
            _ => return Err(perr(at.0, at.1, "expected an integer exponent")),
        };
        if k > 10_000 {
            return Err(perr(at.0, at.1, "exponent too large"));
        }
        if paren && !self.eat(&Tok::RParen) {
            return Err(self.err("expected ')'"));
        }
        let k = if neg { -k } else { k };
        if k < 0 && base.is_zero() {
            return Err(perr(at.0, at.1, "division by zero"));
        }
        base.pow(k)
    }

    fn atom(&mut self) -> Result<RatFun<S>> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(v, imag)) => {
                self.pos += 1;
                let s = S::from_rational(&v);
                if imag {
                    let unit = S::imaginary_unit().ok_or_else(|| {
                        perr(at.0, at.1, "complex coefficients need the float backend")
                    })?;
                    Ok(RatFun::constant(s * unit))
                } else {
                    Ok(RatFun::constant(s))
                }
            }
            Some(Tok::Var) => {
                self.pos += 1;
                Ok(RatFun::x())
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(_) => Err(perr(at.0, at.1, "expected a number, variable or '('")),
            None => Err(perr(at.0, at.1, "unexpected end of input")),
        }
    }
}

pub fn parse_ratfun<S: Scalar>(src: &str) -> Result<RatFun<S>> {
    let mut p = Parser::<S>::new(src)?;
    let r = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(r)
}

/// A scalar constant written in the expression grammar.
pub fn parse_scalar<S: Scalar>(src: &str) -> Result<S> {
    let r = parse_ratfun::<S>(src)?;
    if !r.is_constant() {
        return Err(perr(1, 1, format!("'{src}' is not a constant")));
    }
    Ok(r.num().coeff(0))
}

/// Rows of entries; validates that every row has the same length.
pub fn parse_matrix_rows<S: Scalar>(src: &str) -> Result<Vec<Vec<RatFun<S>>>> {
    let mut p = Parser::<S>::new(src)?;
    let bracketed = p.eat(&Tok::LBracket);
    let mut rows: Vec<Vec<RatFun<S>>> = Vec::new();
    let mut row_pos = Vec::new();
    loop {
        if p.peek().is_none() || (bracketed && p.peek() == Some(&Tok::RBracket)) {
            break;
        }
        row_pos.push(p.here());
        let mut row = vec![p.expr()?];
        while p.eat(&Tok::Comma) {
            row.push(p.expr()?);
        }
        rows.push(row);
        if !p.eat(&Tok::Semi) {
            break;
        }
    }
    if bracketed && !p.eat(&Tok::RBracket) {
        return Err(p.err("expected ']'"));
    }
    if p.pos != p.toks.len() {
        return Err(p.err("expected ',' or ';'"));
    }
    if rows.is_empty() {
        return Err(perr(1, 1, "empty matrix"));
    }
    let width = rows[0].len();
    for (r, row) in rows.iter().enumerate() {
        if row.len() != width {
            let (l, c) = row_pos[r];
            return Err(perr(
                l,
                c,
                format!("row {} has {} entries, expected {}", r + 1, row.len(), width),
            ));
        }
    }
    Ok(rows)
}

pub fn parse_rational_literal(src: &str) -> Option<BigRational> {
    let r = parse_ratfun::<BigRational>(src).ok()?;
    if r.is_constant() {
        Some(r.num().coeff(0))
    } else if r.is_zero() {
        Some(BigRational::zero())
    } else {
        None
    }
}
