//! Finite-dimensional graded pieces of the algebras the engine works over:
//! polynomial rings (truncated at a degree), artinian quotients S/I, and
//! exterior algebras. Each is generated in degree 1.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{AlgebraError, Result};
use crate::field_poly::{GradedMap, Monomial, Polynomial, PrimeField, Ring};
use crate::groebner::QuotientRing;
use crate::linalg::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraKind {
    Polynomial,
    Quotient,
    Exterior,
}

/// Multiplication tables of a standard-graded algebra through degree `top`.
#[derive(Debug)]
pub struct GradedAlgebra {
    pub field: PrimeField,
    pub kind: AlgebraKind,
    pub ngens: usize,
    /// Largest stored degree.
    pub top: i32,
    /// Whether nonzero pieces above `top` exist but were cut off.
    pub truncated: bool,
    basis: Vec<Vec<Monomial>>,
    index: Vec<HashMap<Monomial, usize>>,
    /// mul[d][i][idx]: x_i times basis[d][idx], in degree d+1.
    mul: Vec<Vec<Vec<Vec<(u32, u32)>>>>,
    /// factor[d][idx] = (i, idx') with basis[d][idx] = x_i * basis[d-1][idx'].
    factor: Vec<Vec<(u8, u32)>>,
    ring: Option<Ring>,
    quotient: Option<QuotientRing>,
}

impl GradedAlgebra {
    #[allow(clippy::too_many_arguments)]
    fn build(
        field: PrimeField,
        kind: AlgebraKind,
        ngens: usize,
        top: i32,
        truncated: bool,
        basis: Vec<Vec<Monomial>>,
        ring: Option<Ring>,
        quotient: Option<QuotientRing>,
        product: impl Fn(usize, &Monomial) -> Vec<(Monomial, u32)>,
    ) -> Self {
        let index: Vec<HashMap<Monomial, usize>> = basis
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, m)| (*m, i)).collect())
            .collect();
        let mut mul = Vec::with_capacity(basis.len());
        for d in 0..basis.len() {
            let mut per_gen = Vec::with_capacity(ngens);
            for i in 0..ngens {
                let col: Vec<Vec<(u32, u32)>> = basis[d]
                    .iter()
                    .map(|m| {
                        if d + 1 >= basis.len() {
                            return vec![];
                        }
                        let mut v: Vec<(u32, u32)> = product(i, m)
                            .into_iter()
                            .map(|(t, c)| (index[d + 1][&t] as u32, c))
                            .collect();
                        v.sort();
                        v
                    })
                    .collect();
                per_gen.push(col);
            }
            mul.push(per_gen);
        }
        let mut factor = vec![Vec::new()];
        for d in 1..basis.len() {
            let f: Vec<(u8, u32)> = basis[d]
                .iter()
                .map(|m| {
                    let i = (0..ngens).find(|&i| m.exp(i) > 0).unwrap();
                    let mut e = m.exponents(ngens);
                    e[i] -= 1;
                    let q = Monomial::from_exponents(&e);
                    (i as u8, index[d - 1][&q] as u32)
                })
                .collect();
            factor.push(f);
        }
        GradedAlgebra {
            field,
            kind,
            ngens,
            top,
            truncated,
            basis,
            index,
            mul,
            factor,
            ring,
            quotient,
        }
    }

    /// The polynomial ring itself, truncated at degree `top`.
    pub fn polynomial(ring: Ring, top: i32) -> Arc<Self> {
        let n = ring.nvars;
        let basis: Vec<Vec<Monomial>> = (0..=top.max(0))
            .map(|d| Monomial::all_of_degree(n, d as u32))
            .collect();
        Arc::new(Self::build(
            ring.field,
            AlgebraKind::Polynomial,
            n,
            top,
            true,
            basis,
            Some(ring),
            None,
            |i, m| vec![(m.mul(&Monomial::var(i)), 1)],
        ))
    }

    /// S/I; stored through its top degree when artinian, else through `top`.
    pub fn quotient(q: &QuotientRing, top: Option<i32>) -> Result<Arc<Self>> {
        let (top, truncated) = match (q.top_degree(), top) {
            (Some(t), _) => (t as i32, false),
            (None, Some(t)) => (t, true),
            (None, None) => {
                return Err(AlgebraError::InvalidParameter(
                    "quotient is not artinian; a degree bound is required".into(),
                ))
            }
        };
        let basis: Vec<Vec<Monomial>> = (0..=top)
            .map(|d| q.standard_monomials(d as u32))
            .collect();
        let ring = q.ring;
        let qq = q.clone();
        Ok(Arc::new(Self::build(
            ring.field,
            AlgebraKind::Quotient,
            ring.nvars,
            top,
            truncated,
            basis,
            Some(ring),
            Some(q.clone()),
            move |i, m| {
                let p = qq.normal_form(&ring.term(1, m.mul(&Monomial::var(i))));
                p.terms().to_vec()
            },
        )))
    }

    /// Exterior algebra on `c` generators; basis elements are squarefree
    /// monomials, e_J with J increasing.
    pub fn exterior(field: PrimeField, c: usize) -> Arc<Self> {
        let basis: Vec<Vec<Monomial>> = (0..=c)
            .map(|d| {
                let mut b: Vec<Monomial> = Monomial::all_of_degree(c, d as u32)
                    .into_iter()
                    .filter(|m| (0..c).all(|i| m.exp(i) <= 1))
                    .collect();
                b.sort_by_key(|m| subset_key(m, c));
                b
            })
            .collect();
        Arc::new(Self::build(
            field,
            AlgebraKind::Exterior,
            c,
            c as i32,
            false,
            basis,
            None,
            None,
            |i, m| {
                if m.exp(i) > 0 {
                    return vec![];
                }
                let before: u32 = (0..i).map(|j| m.exp(j)).sum();
                let c = if before % 2 == 0 { 1 } else { field.neg(1) };
                vec![(m.mul(&Monomial::var(i)), c)]
            },
        ))
    }

    pub fn ring(&self) -> Option<Ring> {
        self.ring
    }

    pub fn quotient_ring(&self) -> Option<&QuotientRing> {
        self.quotient.as_ref()
    }

    #[inline]
    pub fn dim(&self, d: i32) -> usize {
        if d < 0 || d > self.top {
            0
        } else {
            self.basis[d as usize].len()
        }
    }

    pub fn basis(&self, d: i32) -> &[Monomial] {
        if d < 0 || d > self.top {
            &[]
        } else {
            &self.basis[d as usize]
        }
    }

    pub fn index_of(&self, d: i32, m: &Monomial) -> Option<usize> {
        if d < 0 || d > self.top {
            return None;
        }
        self.index[d as usize].get(m).copied()
    }

    /// x_i (or e_i) times basis element `idx` of degree d.
    #[inline]
    pub fn mul_gen(&self, d: i32, i: usize, idx: usize) -> &[(u32, u32)] {
        &self.mul[d as usize][i][idx]
    }

    #[inline]
    pub fn factor(&self, d: i32, idx: usize) -> (usize, usize) {
        let (i, j) = self.factor[d as usize][idx];
        (i as usize, j as usize)
    }

    /// Coordinates of a homogeneous polynomial of degree d (reduced mod I
    /// first for quotients).
    pub fn coords(&self, d: i32, p: &Polynomial) -> Vec<(usize, u32)> {
        let q;
        let p = match &self.quotient {
            Some(qr) => {
                q = qr.normal_form(p);
                &q
            }
            None => p,
        };
        if d < 0 || d > self.top {
            return vec![];
        }
        p.terms()
            .iter()
            .map(|(m, c)| {
                let i = self.index[d as usize]
                    .get(m)
                    .unwrap_or_else(|| panic!("monomial {m:?} not a basis element in degree {d}"));
                (*i, *c)
            })
            .collect()
    }

    pub fn poly_from_coords(&self, d: i32, v: &[u32]) -> Polynomial {
        let ring = self.ring.expect("polynomial algebra");
        let terms = v
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| (self.basis[d as usize][i], *c as i64))
            .collect();
        Polynomial::from_terms(ring, terms)
    }
}

fn subset_key(m: &Monomial, c: usize) -> Vec<usize> {
    (0..c).filter(|&i| m.exp(i) > 0).collect()
}

/// Coordinates in a graded free module ⊕ A(-a_g) at a fixed degree.
pub fn offsets(alg: &GradedAlgebra, degrees: &[i32], d: i32) -> (Vec<usize>, usize) {
    let mut off = Vec::with_capacity(degrees.len());
    let mut n = 0;
    for &a in degrees {
        off.push(n);
        n += alg.dim(d - a);
    }
    (off, n)
}

pub fn free_dim(alg: &GradedAlgebra, degrees: &[i32], d: i32) -> usize {
    degrees.iter().map(|&a| alg.dim(d - a)).sum()
}

/// Left action of generator i on a vector of the free module at degree d.
pub fn free_act(alg: &GradedAlgebra, degrees: &[i32], d: i32, i: usize, v: &[u32]) -> Vec<u32> {
    let (off, _) = offsets(alg, degrees, d);
    let (off1, n1) = offsets(alg, degrees, d + 1);
    let f = alg.field;
    let mut out = vec![0u32; n1];
    for (g, &a) in degrees.iter().enumerate() {
        let k = d - a;
        if k < 0 || k + 1 > alg.top {
            continue;
        }
        for idx in 0..alg.dim(k) {
            let c = v[off[g] + idx];
            if c == 0 {
                continue;
            }
            for &(t, m) in alg.mul_gen(k, i, idx) {
                let o = &mut out[off1[g] + t as usize];
                *o = f.add(*o, f.mul(c, m));
            }
        }
    }
    out
}

/// Matrix of a polynomial map (over a polynomial or quotient algebra) from
/// source degree d to target degree d + shift. Columns are indexed by
/// (source generator, basis monomial), rows likewise for the target.
pub fn graded_map_matrix(alg: &GradedAlgebra, map: &GradedMap, d: i32) -> Matrix {
    let s = map.degree_shift;
    let src = &map.source.degrees;
    let tgt = &map.target.degrees;
    let (soff, sn) = offsets(alg, src, d);
    let (toff, tn) = offsets(alg, tgt, d + s);
    let mut m = Matrix::zeros(tn, sn);
    for j in 0..src.len() {
        let k = d - src[j];
        for (idx, mono) in alg.basis(k).iter().enumerate() {
            for (i, p) in map.column(j) {
                let td = d + s - tgt[*i];
                if td < 0 || td > alg.top {
                    continue;
                }
                let prod = p.mul_term(1, mono);
                for (t, c) in alg.coords(td, &prod) {
                    let r = toff[*i] + t;
                    let v = alg.field.add(m.get(r, soff[j] + idx), c);
                    m.set(r, soff[j] + idx, v);
                }
            }
        }
    }
    m
}

/// Turn a coordinate vector at degree d into a dense polynomial column.
pub fn vector_to_polys(alg: &GradedAlgebra, degrees: &[i32], d: i32, v: &[u32]) -> Vec<Polynomial> {
    let (off, _) = offsets(alg, degrees, d);
    degrees
        .iter()
        .enumerate()
        .map(|(g, &a)| {
            let k = d - a;
            let n = alg.dim(k);
            if n == 0 {
                alg.ring().unwrap().zero()
            } else {
                alg.poly_from_coords(k, &v[off[g]..off[g] + n])
            }
        })
        .collect()
}

/// Coordinates of a dense polynomial column of degree d.
pub fn polys_to_vector(alg: &GradedAlgebra, degrees: &[i32], d: i32, v: &[Polynomial]) -> Vec<u32> {
    let (off, n) = offsets(alg, degrees, d);
    let mut out = vec![0u32; n];
    for (g, p) in v.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        for (t, c) in alg.coords(d - degrees[g], p) {
            out[off[g] + t] = c;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_poly::parse_polynomial_list;

    #[test]
    fn exterior_signs() {
        let f = PrimeField::new(101).unwrap();
        let e = GradedAlgebra::exterior(f, 3);
        assert_eq!(e.dim(0), 1);
        assert_eq!(e.dim(1), 3);
        assert_eq!(e.dim(2), 3);
        assert_eq!(e.dim(3), 1);
        // e_1 * e_0 = -e_0 e_1
        let idx_e0 = 0;
        let r = e.mul_gen(1, 1, idx_e0);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].1, 100);
        // e_0 * e_0 = 0
        assert!(e.mul_gen(1, 0, idx_e0).is_empty());
        for d in 1..=3 {
            for idx in 0..e.dim(d) {
                let (i, j) = e.factor(d, idx);
                assert_eq!(e.mul_gen(d - 1, i, j), &[(idx as u32, 1)]);
            }
        }
    }

    #[test]
    fn quotient_tables() {
        let r = Ring::new(PrimeField::new(101).unwrap(), 3).unwrap();
        let f = parse_polynomial_list(r, &r.default_names(), "x1^3,x2^3,x3^3").unwrap();
        let q = QuotientRing::new(r, &f).unwrap();
        let a = GradedAlgebra::quotient(&q, None).unwrap();
        assert_eq!(a.top, 6);
        let total: usize = (0..=6).map(|d| a.dim(d)).sum();
        assert_eq!(total, 27);
        let x1sq = a.index_of(2, &Monomial::from_exponents(&[2, 0, 0])).unwrap();
        assert!(a.mul_gen(2, 0, x1sq).is_empty());
    }
}
