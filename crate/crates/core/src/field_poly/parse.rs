//! Infix polynomial parser: `x1^3+2*x2*x3`, `-(a+b)^2`, integer constants.

use super::monomial::Monomial;
use super::polynomial::{Polynomial, Ring};
use crate::error::{AlgebraError, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: Ring,
    names: &'a [String],
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(AlgebraError::Parse {
        pos,
        msg: msg.into(),
    })
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let e = self.integer()?;
            if e > 255 {
                return err(start, "exponent too large");
            }
            return Ok(base.pow(e as u32));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return err(start, "expected integer");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .or_else(|_| err(start, "integer overflow"))
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            None => err(self.pos, "unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return err(self.pos, "expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                let p = self.ring.p() as u64;
                Ok(self.ring.constant((v % p) as i64))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.names.iter().position(|n| n == name) {
                    Some(i) => Ok(self.ring.term(1, Monomial::var(i))),
                    None => err(start, format!("unknown variable '{name}'")),
                }
            }
            Some(c) => err(self.pos, format!("unexpected character '{}'", c as char)),
        }
    }
}

/// Parse one polynomial in the given ring with the given variable names.
pub fn parse_polynomial(ring: Ring, names: &[String], s: &str) -> Result<Polynomial> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
        ring,
        names,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return err(p.pos, "trailing input");
    }
    Ok(e)
}

/// Parse a comma-separated polynomial list (commas inside parentheses are
/// not separators).
pub fn parse_polynomial_list(ring: Ring, names: &[String], s: &str) -> Result<Vec<Polynomial>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = s.as_bytes();
    for (i, &c) in bytes.iter().enumerate() {
        match c {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b',' if depth == 0 => {
                out.push(offset(parse_polynomial(ring, names, &s[start..i]), start)?);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(offset(parse_polynomial(ring, names, &s[start..]), start)?);
    Ok(out)
}

fn offset<T>(r: Result<T>, by: usize) -> Result<T> {
    r.map_err(|e| match e {
        AlgebraError::Parse { pos, msg } => AlgebraError::Parse { pos: pos + by, msg },
        other => other,
    })
}

/// Parse `[[a,b,c],[d,e,f]]` into rows of polynomials.
pub fn parse_matrix(ring: Ring, names: &[String], s: &str) -> Result<Vec<Vec<Polynomial>>> {
    let t = s.trim();
    let lead = s.len() - s.trim_start().len();
    if !t.starts_with('[') || !t.ends_with(']') {
        return err(lead, "matrix must look like [[..],[..]]");
    }
    let inner = &t[1..t.len() - 1];
    let mut rows = Vec::new();
    let mut i = 0;
    let b = inner.as_bytes();
    while i < b.len() {
        match b[i] {
            b'[' => {
                let Some(close) = inner[i..].find(']') else {
                    return err(lead + 1 + i, "unclosed row");
                };
                let body = &inner[i + 1..i + close];
                rows.push(offset(
                    parse_polynomial_list(ring, names, body),
                    lead + 2 + i,
                )?);
                i += close + 1;
            }
            b',' | b' ' | b'\t' | b'\n' => i += 1,
            _ => return err(lead + 1 + i, "expected '['"),
        }
    }
    if rows.is_empty() {
        return err(lead, "empty matrix");
    }
    let w = rows[0].len();
    if rows.iter().any(|r| r.len() != w) {
        return err(lead, "ragged matrix rows");
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_poly::PrimeField;

    fn setup() -> (Ring, Vec<String>) {
        let r = Ring::new(PrimeField::new(101).unwrap(), 3).unwrap();
        (r, r.default_names())
    }

    #[test]
    fn parses_and_prints() {
        let (r, n) = setup();
        let p = parse_polynomial(r, &n, "x1^3 + 2*x2*x3 - 1").unwrap();
        assert_eq!(p.to_string(), "x1^3+2*x2*x3-1");
        let q = parse_polynomial(r, &n, "(x1+x2)*(x1-x2)").unwrap();
        assert_eq!(q.to_string(), "x1^2-x2^2");
    }

    #[test]
    fn reports_position() {
        let (r, n) = setup();
        match parse_polynomial(r, &n, "x1 + y") {
            Err(AlgebraError::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        assert!(parse_polynomial(r, &n, "x1 +").is_err());
        assert!(parse_polynomial(r, &n, "x1 x2").is_err());
    }

    #[test]
    fn matrix() {
        let (r, n) = setup();
        let m = parse_matrix(r, &n, "[[x1,x2,x3],[x2,x3,x1]]").unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m[1][2].to_string(), "x1");
        assert!(parse_matrix(r, &n, "[[x1],[x2,x3]]").is_err());
    }
}
