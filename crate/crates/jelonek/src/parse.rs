//! Recursive-descent parser for map files and the canonical printer.
//!
//! A map source is two assignment lines `f1 = <poly>` and `f2 = <poly>` in
//! the fixed variables u, v. Coefficients are exact Gaussian rationals:
//! `3`, `3/2`, `2i`, `(1+2i)`, `(3/2-1/2i)`.

use crate::lattice::Pt;
use crate::polyring::{fmt_gauss, gri, GaussRat, Poly, PolyMap};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

impl std::error::Error for ParseError {}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            line,
            src,
        }
    }

    fn err(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Some(s.parse().unwrap())
    }

    fn rational(&mut self) -> Result<BigRational, ParseError> {
        let col = self.column();
        let num = self
            .digits()
            .ok_or_else(|| self.err(col, "expected a number"))?;
        if self.eat('/') {
            let col2 = self.column();
            let den = self
                .digits()
                .ok_or_else(|| self.err(col2, "expected a denominator"))?;
            if den.is_zero() {
                return Err(self.err(col2, "zero denominator"));
            }
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::from(num))
        }
    }

    /// A signed simple coefficient inside parentheses: `±r` or `±r i` or `±i`.
    fn signed_simple(&mut self) -> Result<GaussRat, ParseError> {
        self.skip_ws();
        let mut sign = BigRational::one();
        loop {
            if self.eat('-') {
                sign = -sign;
            } else if !self.eat('+') {
                break;
            }
            self.skip_ws();
        }
        self.skip_ws();
        if self.eat('i') {
            return Ok(gri(BigRational::zero(), sign));
        }
        let r = self.rational()?;
        if self.eat('i') {
            Ok(gri(BigRational::zero(), sign * r))
        } else {
            Ok(gri(sign * r, BigRational::zero()))
        }
    }

    /// Coefficient: rational, imaginary, or parenthesized Gaussian sum.
    fn coeff(&mut self) -> Result<GaussRat, ParseError> {
        if self.eat('(') {
            let mut acc = self.signed_simple()?;
            self.skip_ws();
            while self.peek() == Some('+') || self.peek() == Some('-') {
                let part = self.signed_simple()?;
                acc = acc + part;
                self.skip_ws();
            }
            let col = self.column();
            if !self.eat(')') {
                return Err(self.err(col, "expected ')'"));
            }
            Ok(acc)
        } else if self.peek() == Some('i') {
            self.bump();
            Ok(gri(BigRational::zero(), BigRational::one()))
        } else {
            let r = self.rational()?;
            if self.eat('i') {
                Ok(gri(BigRational::zero(), r))
            } else {
                Ok(gri(r, BigRational::zero()))
            }
        }
    }

    /// Monomial: optional u-part then optional v-part.
    fn monomial(&mut self) -> Result<Option<Pt>, ParseError> {
        let mut e = Pt::new(0, 0);
        let mut seen = false;
        if self.eat('u') {
            seen = true;
            e.x = if self.eat('^') {
                let col = self.column();
                self.digits()
                    .ok_or_else(|| self.err(col, "expected an exponent"))?
                    .try_into()
                    .map_err(|_| self.err(col, "exponent too large"))?
            } else {
                1
            };
            self.skip_ws();
            if self.eat('*') {
                self.skip_ws();
                let col = self.column();
                if !matches!(self.peek(), Some('v')) {
                    return Err(self.err(col, "expected 'v' after '*'"));
                }
            }
        }
        if self.eat('v') {
            seen = true;
            e.y = if self.eat('^') {
                let col = self.column();
                self.digits()
                    .ok_or_else(|| self.err(col, "expected an exponent"))?
                    .try_into()
                    .map_err(|_| self.err(col, "exponent too large"))?
            } else {
                1
            };
        }
        Ok(if seen { Some(e) } else { None })
    }

    /// term := coeff ('*'? monomial)? | monomial
    fn term(&mut self) -> Result<(Pt, GaussRat), ParseError> {
        self.skip_ws();
        let col = self.column();
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == '(' || c == 'i' => {
                let k = self.coeff()?;
                self.skip_ws();
                if self.eat('*') {
                    self.skip_ws();
                }
                let e = self.monomial()?.unwrap_or(Pt::new(0, 0));
                Ok((e, k))
            }
            Some('u') | Some('v') => {
                let e = self.monomial()?.expect("monomial starts with u or v");
                Ok((e, gri(BigRational::one(), BigRational::zero())))
            }
            _ => Err(self.err(col, "expected a term")),
        }
    }

    fn poly(&mut self) -> Result<Poly, ParseError> {
        let mut out = Poly::zero();
        self.skip_ws();
        let mut negate = false;
        if self.eat('-') {
            negate = true;
        } else {
            self.eat('+');
        }
        let (e, c) = self.term()?;
        out.add_term(e, if negate { -c } else { c });
        loop {
            self.skip_ws();
            let op_col = self.column();
            let neg = match self.peek() {
                Some('+') => false,
                Some('-') => true,
                None => break,
                Some(other) => {
                    return Err(self.err(op_col, format!("unexpected '{other}'")));
                }
            };
            self.bump();
            self.skip_ws();
            if self.peek().is_none() {
                return Err(self.err(op_col, "dangling operator: expected a term"));
            }
            let (e, c) = self.term()?;
            out.add_term(e, if neg { -c } else { c });
        }
        let _ = self.src;
        Ok(out)
    }
}

/// Parse one `fN = <poly>` line.
fn parse_line(src: &str, line_no: usize, name: &str) -> Result<Poly, ParseError> {
    let mut cur = Cursor::new(src, line_no);
    cur.skip_ws();
    for expected in name.chars() {
        let col = cur.column();
        if cur.bump() != Some(expected) {
            return Err(cur.err(col, format!("expected '{name} = ...'")));
        }
    }
    cur.skip_ws();
    let col = cur.column();
    if !cur.eat('=') {
        return Err(cur.err(col, "expected '='"));
    }
    cur.poly()
}

/// Parse a two-line map source (blank lines and `#` comments are skipped).
pub fn parse_map(src: &str) -> Result<PolyMap, ParseError> {
    let mut lines = Vec::new();
    for (idx, raw) in src.lines().enumerate() {
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        lines.push((idx + 1, raw));
    }
    if lines.len() != 2 {
        return Err(ParseError {
            line: lines.len().max(1),
            column: 1,
            message: format!("expected exactly two lines 'f1 = …', 'f2 = …', found {}", lines.len()),
        });
    }
    let f1 = parse_line(lines[0].1, lines[0].0, "f1")?;
    let f2 = parse_line(lines[1].1, lines[1].0, "f2")?;
    if f1.is_zero() || f2.is_zero() {
        return Err(ParseError {
            line: if f1.is_zero() { lines[0].0 } else { lines[1].0 },
            column: 1,
            message: "zero polynomial component".into(),
        });
    }
    Ok(PolyMap::new(f1, f2))
}

/// Canonical printable form; `parse_map ∘ print_map` is the identity.
pub fn print_map(f: &PolyMap) -> String {
    format!("f1 = {}\nf2 = {}\n", print_poly(&f.f1), print_poly(&f.f2))
}

pub fn print_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (e, c) in p.terms() {
        let mono = {
            let mut s = String::new();
            if e.x > 0 {
                s.push('u');
                if e.x > 1 {
                    s.push_str(&format!("^{}", e.x));
                }
            }
            if e.y > 0 {
                if !s.is_empty() {
                    s.push('*');
                }
                s.push('v');
                if e.y > 1 {
                    s.push_str(&format!("^{}", e.y));
                }
            }
            s
        };
        // Pull a leading real sign out of the coefficient for readability.
        let (neg, mag) = if c.im.is_zero() && c.re < BigRational::zero() {
            (true, fmt_gauss(&-c.clone()))
        } else if c.re.is_zero() && c.im < BigRational::zero() {
            (true, fmt_gauss(&-c.clone()))
        } else {
            (false, fmt_gauss(c))
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mono.is_empty() {
            out.push_str(&mag);
        } else if mag == "1" {
            out.push_str(&mono);
        } else {
            out.push_str(&mag);
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{gr, rat};

    #[test]
    fn parses_map_12_first_component() {
        let f = parse_map("f1 = 1 - u^2*v^2 + u^2*v^3\nf2 = 1\n").unwrap();
        let expect = Poly::from_terms([
            (Pt::new(0, 0), gr(1)),
            (Pt::new(2, 2), gr(-1)),
            (Pt::new(2, 3), gr(1)),
        ]);
        assert_eq!(f.f1, expect);
    }

    #[test]
    fn parses_fractional_coefficient() {
        let f = parse_map("f1 = 3/2*u*v\nf2 = 1").unwrap();
        assert_eq!(
            f.f1,
            Poly::from_terms([(Pt::new(1, 1), gri(rat(3, 2), BigRational::zero()))])
        );
    }

    #[test]
    fn parses_gaussian_coefficients() {
        let f = parse_map("f1 = (1+2i)*u - i*v + 2i\nf2 = (3/2-1/2i)").unwrap();
        assert_eq!(f.f1.coeff(Pt::new(1, 0)), gri(rat(1, 1), rat(2, 1)));
        assert_eq!(f.f1.coeff(Pt::new(0, 1)), gri(rat(0, 1), rat(-1, 1)));
        assert_eq!(f.f1.coeff(Pt::new(0, 0)), gri(rat(0, 1), rat(2, 1)));
        assert_eq!(f.f2.coeff(Pt::new(0, 0)), gri(rat(3, 2), rat(-1, 2)));
    }

    #[test]
    fn dangling_operator_error_column() {
        let err = parse_map("f1 = u +\nf2 = v").unwrap_err();
        assert_eq!(err.line, 1);
        assert_eq!(err.column, 8);
    }

    #[test]
    fn zero_component_rejected() {
        assert!(parse_map("f1 = 0\nf2 = v").is_err());
        // 1 - 1 collapses to zero.
        assert!(parse_map("f1 = 1 - 1\nf2 = v").is_err());
    }

    #[test]
    fn print_parse_round_trip() {
        let f = crate::families::fixture("1.2").unwrap();
        let printed = print_map(&f);
        assert_eq!(parse_map(&printed).unwrap(), f);
        let g = parse_map("f1 = (1+2i)*u^3*v - 7/3 + i*v^2\nf2 = u - v\n").unwrap();
        assert_eq!(parse_map(&print_map(&g)).unwrap(), g);
    }
}
