//! Text format: variables x1..xn, `+ - * / ^`, integer literals, the
//! imaginary unit `i`, parentheses. Polynomials are separated by `;` or by
//! newlines outside parentheses; `#` starts a comment.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::coeff::Exact;
use super::poly::{Polynomial, PolynomialSystem};
use super::PolyError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    I,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Sep,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> PolyError {
    PolyError::Syntax { line, col, msg: msg.into() }
}

fn lex(text: &str) -> Result<Vec<Spanned>, PolyError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut col) = (1usize, 1usize);
    let mut depth = 0i32;
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let (l0, c0) = (line, col);
        let mut push = |tok: Tok| out.push(Spanned { tok, line: l0, col: c0 });
        match c {
            '\n' => {
                if depth == 0 {
                    push(Tok::Sep);
                }
                line += 1;
                col = 1;
                k += 1;
                continue;
            }
            c if c.is_whitespace() => {}
            '#' => {
                while k < chars.len() && chars[k] != '\n' {
                    k += 1;
                }
                continue;
            }
            ';' => push(Tok::Sep),
            '+' => push(Tok::Plus),
            '-' | '\u{2212}' => push(Tok::Minus),
            '*' => push(Tok::Star),
            '/' => push(Tok::Slash),
            '^' => push(Tok::Caret),
            '(' => {
                depth += 1;
                push(Tok::LParen)
            }
            ')' => {
                depth -= 1;
                push(Tok::RParen)
            }
            'i' | 'I' => push(Tok::I),
            'x' | 'X' => {
                let mut j = k + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j == k + 1 {
                    return Err(syntax(l0, c0, "variable name must be x followed by an index"));
                }
                let digits: String = chars[k + 1..j].iter().collect();
                let idx: usize = digits.parse().map_err(|_| syntax(l0, c0, "variable index too large"))?;
                if idx == 0 {
                    return Err(PolyError::VariableIndexZero { line: l0, col: c0 });
                }
                push(Tok::Var(idx));
                col += j - k;
                k = j;
                continue;
            }
            d if d.is_ascii_digit() => {
                let mut j = k;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let digits: String = chars[k..j].iter().collect();
                push(Tok::Num(digits.parse().expect("digits")));
                col += j - k;
                k = j;
                continue;
            }
            other => return Err(syntax(l0, c0, format!("unexpected character '{other}'"))),
        }
        col += 1;
        k += 1;
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Expr {
    Num(BigInt),
    I,
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize, usize),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    end: (usize, usize),
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|s| (s.line, s.col)).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<&Spanned> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Expr, PolyError> {
        let mut lhs = match self.peek() {
            Some(Tok::Plus) => {
                self.bump();
                self.term()?
            }
            Some(Tok::Minus) => {
                self.bump();
                Expr::Neg(Box::new(self.term()?))
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, PolyError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    let (l, c) = self.here();
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?), l, c);
                }
                // juxtaposition, e.g. `2x1` or `(x1+1)(x2-1)`
                Some(Tok::Num(_)) | Some(Tok::Var(_)) | Some(Tok::I) | Some(Tok::LParen) => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, PolyError> {
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.base()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let (l, c) = self.here();
            return match self.bump().map(|s| s.tok.clone()) {
                Some(Tok::Num(k)) => {
                    let k: u32 = k.try_into().map_err(|_| syntax(l, c, "exponent too large"))?;
                    Ok(Expr::Pow(Box::new(base), k))
                }
                Some(Tok::Minus) => Err(PolyError::NegativeExponent { line: l, col: c }),
                Some(Tok::LParen) => match (self.bump().map(|s| s.tok.clone()), self.bump().map(|s| s.tok.clone())) {
                    (Some(Tok::Minus), _) => Err(PolyError::NegativeExponent { line: l, col: c }),
                    (Some(Tok::Num(k)), Some(Tok::RParen)) => {
                        let k: u32 = k.try_into().map_err(|_| syntax(l, c, "exponent too large"))?;
                        Ok(Expr::Pow(Box::new(base), k))
                    }
                    _ => Err(syntax(l, c, "exponent must be a non-negative integer")),
                },
                _ => Err(syntax(l, c, "exponent must be a non-negative integer")),
            };
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr, PolyError> {
        let (l, c) = self.here();
        match self.bump().map(|s| s.tok.clone()) {
            Some(Tok::Num(v)) => Ok(Expr::Num(v)),
            Some(Tok::I) => Ok(Expr::I),
            Some(Tok::Var(k)) => Ok(Expr::Var(k)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                let (l2, c2) = self.here();
                match self.bump().map(|s| s.tok.clone()) {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(syntax(l2, c2, "expected ')'")),
                }
            }
            Some(t) => Err(syntax(l, c, format!("unexpected token {t:?}"))),
            None => Err(syntax(l, c, "unexpected end of input")),
        }
    }
}

fn max_var(e: &Expr) -> usize {
    match e {
        Expr::Num(_) | Expr::I => 0,
        Expr::Var(k) => *k,
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b, _, _) => max_var(a).max(max_var(b)),
        Expr::Neg(a) | Expr::Pow(a, _) => max_var(a),
    }
}

fn expand(e: &Expr, n: usize) -> Result<Polynomial<Exact>, PolyError> {
    Ok(match e {
        Expr::Num(v) => Polynomial::constant(n, Complex::new(BigRational::from_integer(v.clone()), BigRational::zero())),
        Expr::I => Polynomial::constant(n, Complex::new(BigRational::zero(), BigRational::one())),
        Expr::Var(k) => Polynomial::var(n, k - 1),
        Expr::Add(a, b) => expand(a, n)?.add(&expand(b, n)?),
        Expr::Sub(a, b) => expand(a, n)?.sub(&expand(b, n)?),
        Expr::Mul(a, b) => expand(a, n)?.mul(&expand(b, n)?),
        Expr::Neg(a) => expand(a, n)?.neg(),
        Expr::Pow(a, k) => expand(a, n)?.pow(*k),
        Expr::Div(a, b, l, c) => {
            let num = expand(a, n)?;
            let den = expand(b, n)?;
            let zero = super::poly::ExponentVector::zero(n);
            if den.len() != 1 || den.coeff(&zero).is_none() {
                if den.is_zero() {
                    return Err(PolyError::DivisionByZero { line: *l, col: *c });
                }
                return Err(PolyError::DivisionByNonConstant { line: *l, col: *c });
            }
            let d = den.coeff(&zero).unwrap().clone();
            let inv = Complex::new(BigRational::one(), BigRational::zero()) / d;
            num.scale(&inv)
        }
    })
}

/// Parse a polynomial system; the number of variables is the largest index
/// used.
pub fn parse_system(text: &str) -> Result<PolynomialSystem<Exact>, PolyError> {
    let toks = lex(text)?;
    let last_line = text.lines().count().max(1);
    let mut exprs = Vec::new();
    let mut start = 0;
    for k in 0..=toks.len() {
        if k == toks.len() || toks[k].tok == Tok::Sep {
            let chunk = &toks[start..k];
            start = k + 1;
            if chunk.is_empty() {
                continue;
            }
            let end = toks.get(k).map(|s| (s.line, s.col)).unwrap_or((last_line, 1));
            let mut p = Parser { toks: chunk, pos: 0, end };
            let e = p.expr()?;
            if p.pos < chunk.len() {
                let s = &chunk[p.pos];
                return Err(syntax(s.line, s.col, format!("unexpected token {:?}", s.tok)));
            }
            exprs.push(e);
        }
    }
    if exprs.is_empty() {
        return Err(PolyError::EmptySystem);
    }
    let n = exprs.iter().map(max_var).max().unwrap_or(0).max(1);
    let polys = exprs.iter().map(|e| expand(e, n)).collect::<Result<Vec<_>, _>>()?;
    PolynomialSystem::new(polys, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newline_and_semicolon_separate() {
        let s = parse_system("x1 + x2\nx2 - 1; x3").unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.nvars(), 3);
    }

    #[test]
    fn newline_inside_parentheses_continues() {
        let s = parse_system("(x1 +\n x2)^2").unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.polys()[0].to_string(), "x1^2 + 2*x1*x2 + x2^2");
    }

    #[test]
    fn errors_carry_positions() {
        match parse_system("x1;\n x2 ^ -1") {
            Err(PolyError::NegativeExponent { line, col }) => assert_eq!((line, col), (2, 7)),
            other => panic!("{other:?}"),
        }
        match parse_system("x1 + x0") {
            Err(PolyError::VariableIndexZero { line, col }) => assert_eq!((line, col), (1, 6)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_system("x1 + $"), Err(PolyError::Syntax { line: 1, col: 6, .. })));
        assert!(matches!(parse_system("x1 / x2"), Err(PolyError::DivisionByNonConstant { .. })));
        assert!(matches!(parse_system("  ;\n # nothing\n"), Err(PolyError::EmptySystem)));
    }

    #[test]
    fn rational_and_imaginary_coefficients() {
        let s = parse_system("1/2*x1 - 3i*x2 + (1+i)").unwrap();
        assert_eq!(s.polys()[0].to_string(), "1/2*x1 - 3*i*x2 + (1+i)");
    }
}
