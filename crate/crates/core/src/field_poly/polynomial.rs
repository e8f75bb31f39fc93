use std::fmt;

use super::field::PrimeField;
use super::monomial::{Monomial, MAX_VARS};
use crate::error::{AlgebraError, Result};

/// A standard-graded polynomial ring F_p[x1..xn].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ring {
    pub field: PrimeField,
    pub nvars: usize,
}

impl Ring {
    pub fn new(field: PrimeField, nvars: usize) -> Result<Self> {
        if nvars > MAX_VARS {
            return Err(AlgebraError::InvalidParameter(format!(
                "at most {MAX_VARS} variables supported, got {nvars}"
            )));
        }
        Ok(Ring { field, nvars })
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial {
            ring: *self,
            terms: Vec::new(),
        }
    }

    pub fn one(&self) -> Polynomial {
        self.constant(1)
    }

    pub fn constant(&self, c: i64) -> Polynomial {
        self.term(c, Monomial::one())
    }

    pub fn var(&self, i: usize) -> Polynomial {
        assert!(i < self.nvars);
        self.term(1, Monomial::var(i))
    }

    pub fn term(&self, c: i64, m: Monomial) -> Polynomial {
        let c = self.field.from_i64(c);
        let terms = if c == 0 { vec![] } else { vec![(m, c)] };
        Polynomial { ring: *self, terms }
    }

    pub fn default_names(&self) -> Vec<String> {
        (1..=self.nvars).map(|i| format!("x{i}")).collect()
    }
}

/// Sparse polynomial; terms sorted strictly decreasing in grevlex, no zero
/// coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    pub ring: Ring,
    terms: Vec<(Monomial, u32)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Checked arithmetic entry point.
pub fn poly_arith(a: &Polynomial, b: &Polynomial, op: PolyOp) -> Result<Polynomial> {
    if a.ring != b.ring {
        return Err(AlgebraError::RingMismatch(format!(
            "F_{}[{} vars] vs F_{}[{} vars]",
            a.ring.p(),
            a.ring.nvars,
            b.ring.p(),
            b.ring.nvars
        )));
    }
    Ok(match op {
        PolyOp::Add => a.add(b),
        PolyOp::Sub => a.sub(b),
        PolyOp::Mul => a.mul(b),
    })
}

impl Polynomial {
    /// Builds a polynomial from arbitrary (monomial, coefficient) pairs.
    pub fn from_terms(ring: Ring, terms: Vec<(Monomial, i64)>) -> Self {
        let f = ring.field;
        let raw = terms.into_iter().map(|(m, c)| (m, f.from_i64(c))).collect();
        Self::from_raw(ring, raw)
    }

    pub(crate) fn from_raw(ring: Ring, mut raw: Vec<(Monomial, u32)>) -> Self {
        raw.sort_by(|a, b| b.0.cmp(&a.0));
        let f = ring.field;
        let mut terms: Vec<(Monomial, u32)> = Vec::with_capacity(raw.len());
        for (m, c) in raw {
            match terms.last_mut() {
                Some(last) if last.0 == m => last.1 = f.add(last.1, c),
                _ => terms.push((m, c)),
            }
        }
        terms.retain(|t| t.1 != 0);
        Polynomial { ring, terms }
    }

    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<(Monomial, u32)> {
        self.terms.first().copied()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => {
                let d = m.degree();
                self.terms.iter().all(|(t, _)| t.degree() == d)
            }
        }
    }

    /// Degree of the leading term; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    pub fn constant_term(&self) -> u32 {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => *c,
            _ => 0,
        }
    }

    pub fn coeff(&self, m: &Monomial) -> u32 {
        self.terms
            .binary_search_by(|t| m.cmp(&t.0))
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let f = self.ring.field;
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate { f.neg(b[j].1) } else { b[j].1 };
                    out.push((b[j].0, c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate {
                        f.sub(a[i].1, b[j].1)
                    } else {
                        f.add(a[i].1, b[j].1)
                    };
                    if c != 0 {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let c = if negate { f.neg(t.1) } else { t.1 };
            out.push((t.0, c));
        }
        Polynomial {
            ring: self.ring,
            terms: out,
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.ring, other.ring);
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.ring, other.ring);
        self.merge(other, true)
    }

    pub fn neg(&self) -> Polynomial {
        let f = self.ring.field;
        Polynomial {
            ring: self.ring,
            terms: self.terms.iter().map(|&(m, c)| (m, f.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let f = self.ring.field;
        let c = c % f.p();
        if c == 0 {
            return self.ring.zero();
        }
        Polynomial {
            ring: self.ring,
            terms: self.terms.iter().map(|&(m, a)| (m, f.mul(a, c))).collect(),
        }
    }

    pub fn mul_term(&self, c: u32, m: &Monomial) -> Polynomial {
        let f = self.ring.field;
        if c == 0 {
            return self.ring.zero();
        }
        // multiplication by a monomial preserves the order
        Polynomial {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|&(t, a)| (t.mul(m), f.mul(a, c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.ring, other.ring);
        if self.is_zero() || other.is_zero() {
            return self.ring.zero();
        }
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = self.ring.zero();
        for &(m, c) in &small.terms {
            acc = acc.add(&big.mul_term(c, &m));
        }
        acc
    }

    /// `self - c*m*other`, the basic reduction step.
    pub fn sub_mul_term(&self, c: u32, m: &Monomial, other: &Polynomial) -> Polynomial {
        self.sub(&other.mul_term(c, m))
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut r = self.ring.one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Homogeneous component of the given degree.
    pub fn part_of_degree(&self, d: u32) -> Polynomial {
        Polynomial {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|(m, _)| m.degree() == d)
                .collect(),
        }
    }

    pub fn make_monic(&self) -> Polynomial {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(self.ring.field.inv(c)),
        }
    }

    pub fn format_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let f = self.ring.field;
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let sc = f.to_signed(*c);
            let (sign, abs) = if sc < 0 { ("-", -sc) } else { ("+", sc) };
            if k == 0 {
                if sign == "-" {
                    s.push('-');
                }
            } else {
                s.push_str(sign);
            }
            if m.is_one() {
                s.push_str(&abs.to_string());
            } else if abs == 1 {
                s.push_str(&m.format(names));
            } else {
                s.push_str(&format!("{abs}*{}", m.format(names)));
            }
        }
        s
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(&self.ring.default_names()))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u32, n: usize) -> Ring {
        Ring::new(PrimeField::new_allow_two(p).unwrap(), n).unwrap()
    }

    #[test]
    fn char_two_cancels() {
        let r = ring(2, 1);
        let x = r.var(0);
        assert!(poly_arith(&x, &x, PolyOp::Add).unwrap().is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let r = ring(101, 2);
        let (x, y) = (r.var(0), r.var(1));
        let p = poly_arith(&x.add(&y), &x.sub(&y), PolyOp::Mul).unwrap();
        assert_eq!(p, x.mul(&x).sub(&y.mul(&y)));
        assert!(p.is_homogeneous());
    }

    #[test]
    fn ring_mismatch() {
        let a = ring(101, 2).var(0);
        let b = ring(103, 2).var(0);
        assert!(matches!(
            poly_arith(&a, &b, PolyOp::Add),
            Err(AlgebraError::RingMismatch(_))
        ));
    }

    #[test]
    fn display() {
        let r = ring(101, 3);
        let p = r.var(0).pow(3).add(&r.var(1).mul(&r.var(2)).scale(2)).sub(&r.one());
        assert_eq!(p.to_string(), "x1^3+2*x2*x3-1");
    }
}
