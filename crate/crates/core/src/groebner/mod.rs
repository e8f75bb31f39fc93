//! Gröbner bases for submodules of graded free modules over S, optionally
//! modulo an ideal I (computed by appending I times every basis vector).

mod quotient;

use std::cmp::Ordering;
use std::collections::BTreeMap;

pub use quotient::QuotientRing;

use crate::error::{AlgebraError, Result};
use crate::field_poly::{GradedFreeModule, GradedMap, Monomial, Polynomial, Ring};

/// Monomial order on module terms `m * e_pos`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleOrder {
    /// Term over position: grevlex on the monomial, then smaller position wins.
    TopGrevlex,
    /// Positions `< split` dominate positions `>= split`; TOP inside blocks.
    Elimination { split: usize },
    /// Schreyer order induced by leading terms `(monomial, position)` of a
    /// parent set under a parent order: `m e_i > n e_j` iff `m*lead_i > n*lead_j`,
    /// ties broken by smaller index.
    Schreyer {
        leads: Vec<(Monomial, usize)>,
        parent: Box<ModuleOrder>,
    },
}

impl ModuleOrder {
    pub fn cmp(&self, a: (&Monomial, usize), b: (&Monomial, usize)) -> Ordering {
        match self {
            ModuleOrder::TopGrevlex => a.0.cmp(b.0).then(b.1.cmp(&a.1)),
            ModuleOrder::Elimination { split } => {
                let (ba, bb) = (a.1 >= *split, b.1 >= *split);
                bb.cmp(&ba).then(a.0.cmp(b.0)).then(b.1.cmp(&a.1))
            }
            ModuleOrder::Schreyer { leads, parent } => {
                let (la, lb) = (&leads[a.1], &leads[b.1]);
                let ma = a.0.mul(&la.0);
                let mb = b.0.mul(&lb.0);
                parent
                    .cmp((&ma, la.1), (&mb, lb.1))
                    .then(b.1.cmp(&a.1))
            }
        }
    }
}

/// An element of a free module, as a sorted list of terms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModuleElement {
    /// Terms `(monomial, position, coefficient)`, strictly decreasing.
    pub terms: Vec<(Monomial, usize, u32)>,
}

impl ModuleElement {
    pub fn zero() -> Self {
        ModuleElement { terms: Vec::new() }
    }

    pub fn from_dense(v: &[Polynomial], order: &ModuleOrder) -> Self {
        let mut terms: Vec<(Monomial, usize, u32)> = v
            .iter()
            .enumerate()
            .flat_map(|(i, p)| p.terms().iter().map(move |&(m, c)| (m, i, c)))
            .collect();
        terms.sort_by(|a, b| order.cmp((&b.0, b.1), (&a.0, a.1)));
        ModuleElement { terms }
    }

    pub fn to_dense(&self, ring: Ring, rank: usize) -> Vec<Polynomial> {
        let mut parts: Vec<Vec<(Monomial, i64)>> = vec![Vec::new(); rank];
        for &(m, i, c) in &self.terms {
            parts[i].push((m, c as i64));
        }
        parts
            .into_iter()
            .map(|t| Polynomial::from_terms(ring, t))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<(Monomial, usize, u32)> {
        self.terms.first().copied()
    }

    fn sub_mul(
        &self,
        c: u32,
        m: &Monomial,
        other: &ModuleElement,
        ring: Ring,
        order: &ModuleOrder,
    ) -> ModuleElement {
        let f = ring.field;
        let a = &self.terms;
        let b: Vec<(Monomial, usize, u32)> = other
            .terms
            .iter()
            .map(|&(t, i, d)| (t.mul(m), i, f.neg(f.mul(c, d))))
            .collect();
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match order.cmp((&a[i].0, a[i].1), (&b[j].0, b[j].1)) {
                Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let s = f.add(a[i].2, b[j].2);
                    if s != 0 {
                        out.push((a[i].0, a[i].1, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        ModuleElement { terms: out }
    }

    fn make_monic(&mut self, ring: Ring) {
        if let Some(&(_, _, c)) = self.terms.first() {
            if c != 1 {
                let inv = ring.field.inv(c);
                for t in self.terms.iter_mut() {
                    t.2 = ring.field.mul(t.2, inv);
                }
            }
        }
    }

    /// Degree of the element in a module with the given basis degrees.
    pub fn degree(&self, degrees: &[i32]) -> Option<i32> {
        self.terms
            .first()
            .map(|(m, i, _)| m.degree() as i32 + degrees[*i])
    }

    fn is_homogeneous(&self, degrees: &[i32]) -> bool {
        match self.degree(degrees) {
            None => true,
            Some(d) => self
                .terms
                .iter()
                .all(|(m, i, _)| m.degree() as i32 + degrees[*i] == d),
        }
    }
}

/// A reduced Gröbner basis of a submodule of `⊕ S(-degrees[i])`.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    pub ring: Ring,
    pub degrees: Vec<i32>,
    pub order: ModuleOrder,
    pub elements: Vec<ModuleElement>,
    /// Ideal I appended to every basis vector (empty for S itself).
    pub quotient_ideal: Vec<Polynomial>,
    /// Degree bound used for truncation, if any.
    pub through_degree: Option<i32>,
}

fn check_homogeneous(gens: &[ModuleElement], degrees: &[i32]) -> Result<()> {
    for (k, g) in gens.iter().enumerate() {
        if !g.is_homogeneous(degrees) {
            return Err(AlgebraError::HomogeneityError(format!(
                "generator {k} is not homogeneous"
            )));
        }
    }
    Ok(())
}

/// Reduce `v` completely against `basis`; reducers are chosen by smallest
/// index among those whose leading term divides.
fn reduce_full(
    v: &ModuleElement,
    basis: &[ModuleElement],
    ring: Ring,
    order: &ModuleOrder,
) -> ModuleElement {
    let f = ring.field;
    let mut rest = v.clone();
    let mut done: Vec<(Monomial, usize, u32)> = Vec::new();
    while let Some(&(m, pos, c)) = rest.terms.first() {
        let reducer = basis.iter().find_map(|g| {
            let (lm, lp, _) = g.lead()?;
            if lp == pos {
                lm.quotient(&m).map(|q| (q, g))
            } else {
                None
            }
        });
        match reducer {
            Some((q, g)) => {
                let lc = g.terms[0].2;
                let factor = f.mul(c, f.inv(lc));
                rest = rest.sub_mul(factor, &q, g, ring, order);
            }
            None => {
                done.push((m, pos, c));
                rest.terms.remove(0);
            }
        }
    }
    ModuleElement { terms: done }
}

fn spair(
    a: &ModuleElement,
    b: &ModuleElement,
    ring: Ring,
    order: &ModuleOrder,
) -> ModuleElement {
    let (ma, _, ca) = a.lead().unwrap();
    let (mb, _, cb) = b.lead().unwrap();
    let l = ma.lcm(&mb);
    let qa = ma.quotient(&l).unwrap();
    let qb = mb.quotient(&l).unwrap();
    let f = ring.field;
    // cb*qa*a - ca*qb*b, scaled so that leading terms cancel
    let first = ModuleElement::zero().sub_mul(f.neg(cb), &qa, a, ring, order);
    first.sub_mul(ca, &qb, b, ring, order)
}

/// Degree-truncated Buchberger algorithm. Pairs are processed by degree, then
/// by index; the result is the reduced, monic basis sorted by leading term.
pub fn buchberger(
    ring: Ring,
    degrees: &[i32],
    gens: &[Vec<Polynomial>],
    order: ModuleOrder,
    quotient_ideal: Option<&[Polynomial]>,
    through_degree: Option<i32>,
) -> Result<GroebnerBasis> {
    let rank = degrees.len();
    let mut input: Vec<ModuleElement> = Vec::new();
    for g in gens {
        if g.len() != rank {
            return Err(AlgebraError::ShapeError(format!(
                "generator of length {} in module of rank {rank}",
                g.len()
            )));
        }
        if g.iter().any(|p| p.ring != ring) {
            return Err(AlgebraError::RingMismatch("groebner generator".into()));
        }
        input.push(ModuleElement::from_dense(g, &order));
    }
    check_homogeneous(&input, degrees)?;
    let ideal: Vec<Polynomial> = quotient_ideal.map(|q| q.to_vec()).unwrap_or_default();
    for f in &ideal {
        if !f.is_homogeneous() {
            return Err(AlgebraError::HomogeneityError(format!(
                "ideal generator {f} is not homogeneous"
            )));
        }
        for k in 0..rank {
            let mut v = vec![ring.zero(); rank];
            v[k] = f.clone();
            input.push(ModuleElement::from_dense(&v, &order));
        }
    }
    let within = |e: &ModuleElement| match (through_degree, e.degree(degrees)) {
        (Some(d), Some(e)) => e <= d,
        _ => true,
    };

    let mut basis: Vec<ModuleElement> = Vec::new();
    // pending pairs keyed by (degree, i, j); generators are queued as (deg, usize::MAX, k)
    let mut queue: BTreeMap<(i32, usize, usize), ModuleElement> = BTreeMap::new();
    for (k, g) in input.into_iter().enumerate() {
        if g.is_zero() || !within(&g) {
            continue;
        }
        let d = g.degree(degrees).unwrap();
        queue.insert((d, usize::MAX, k), g);
    }
    while let Some((_, cand)) = queue.pop_first() {
        let mut r = reduce_full(&cand, &basis, ring, &order);
        if r.is_zero() {
            continue;
        }
        r.make_monic(ring);
        let (lm, lp, _) = r.lead().unwrap();
        let new_idx = basis.len();
        for (i, b) in basis.iter().enumerate() {
            let (bm, bp, _) = b.lead().unwrap();
            if bp != lp {
                continue;
            }
            let l = bm.lcm(&lm);
            let d = l.degree() as i32 + degrees[lp];
            if let Some(t) = through_degree {
                if d > t {
                    continue;
                }
            }
            let s = spair(b, &r, ring, &order);
            if !s.is_zero() {
                queue.insert((d, i, new_idx), s);
            }
        }
        basis.push(r);
    }
    // interreduce
    let mut keep: Vec<ModuleElement> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let (gm, gp, _) = g.lead().unwrap();
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            let (hm, hp, _) = h.lead().unwrap();
            j != i && hp == gp && hm.divides(&gm) && (hm != gm || j < i)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let g = &keep[i];
        let lead = ModuleElement {
            terms: vec![g.terms[0]],
        };
        let tail = ModuleElement {
            terms: g.terms[1..].to_vec(),
        };
        let others: Vec<ModuleElement> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, h)| h.clone())
            .collect();
        let t = reduce_full(&tail, &others, ring, &order);
        let mut terms = lead.terms;
        terms.extend(t.terms);
        let mut e = ModuleElement { terms };
        e.make_monic(ring);
        reduced.push(e);
    }
    reduced.sort_by(|a, b| {
        let (am, ap, _) = a.lead().unwrap();
        let (bm, bp, _) = b.lead().unwrap();
        order.cmp((&am, ap), (&bm, bp))
    });
    Ok(GroebnerBasis {
        ring,
        degrees: degrees.to_vec(),
        order,
        elements: reduced,
        quotient_ideal: ideal,
        through_degree,
    })
}

impl GroebnerBasis {
    pub fn leading_terms(&self) -> Vec<(Monomial, usize)> {
        self.elements
            .iter()
            .map(|e| {
                let (m, p, _) = e.lead().unwrap();
                (m, p)
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn to_dense(&self) -> Vec<Vec<Polynomial>> {
        self.elements
            .iter()
            .map(|e| e.to_dense(self.ring, self.rank()))
            .collect()
    }
}

/// Fully reduced remainder of `v` modulo the basis.
pub fn normal_form(v: &[Polynomial], gb: &GroebnerBasis) -> Vec<Polynomial> {
    let e = ModuleElement::from_dense(v, &gb.order);
    reduce_full(&e, &gb.elements, gb.ring, &gb.order).to_dense(gb.ring, gb.rank())
}

/// Dimension of `(ambient / submodule)_d` for `d <= through_degree`, by
/// counting standard monomials. Returned map covers degrees from the
/// smallest basis degree upward.
pub fn hilbert_function(gb: &GroebnerBasis, through_degree: i32) -> BTreeMap<i32, usize> {
    let n = gb.ring.nvars;
    let leads = gb.leading_terms();
    let lo = gb.degrees.iter().copied().min().unwrap_or(0);
    let mut out = BTreeMap::new();
    for d in lo..=through_degree {
        let mut count = 0;
        for (pos, &dp) in gb.degrees.iter().enumerate() {
            if d < dp {
                continue;
            }
            for m in Monomial::all_of_degree(n, (d - dp) as u32) {
                if !leads.iter().any(|(lm, lp)| *lp == pos && lm.divides(&m)) {
                    count += 1;
                }
            }
        }
        out.insert(d, count);
    }
    out
}

/// Generators of ker(f) (over S, or over S/I if `quotient_ideal` is given),
/// returned as the columns of a map into `f.source`. Generators are
/// minimalized and sorted by (degree, leading term).
pub fn kernel(
    f: &GradedMap,
    quotient_ideal: Option<&[Polynomial]>,
    through_degree: Option<i32>,
) -> Result<GradedMap> {
    let ring = f.ring;
    let (n, m) = (f.nrows(), f.ncols());
    // ambient: target ⊕ source, with source shifted by the map's degree
    let mut degrees: Vec<i32> = f.target.degrees.clone();
    degrees.extend(f.source.degrees.iter().map(|d| d + f.degree_shift));
    let mut gens = Vec::with_capacity(m);
    for j in 0..m {
        let mut v = f.dense_column(j);
        v.resize(n + m, ring.zero());
        v[n + j] = ring.one();
        gens.push(v);
    }
    let order = ModuleOrder::Elimination { split: n };
    let gb = buchberger(ring, &degrees, &gens, order, quotient_ideal, through_degree)?;
    let qring = match quotient_ideal {
        Some(q) if !q.is_empty() => Some(QuotientRing::new(ring, q)?),
        _ => None,
    };
    let mut syz: Vec<Vec<Polynomial>> = Vec::new();
    for e in &gb.elements {
        let (_, lp, _) = e.lead().unwrap();
        if lp < n {
            continue;
        }
        let dense = e.to_dense(ring, n + m);
        let mut s: Vec<Polynomial> = dense[n..].to_vec();
        if let Some(q) = &qring {
            s = s.iter().map(|p| q.normal_form(p)).collect();
        }
        if s.iter().any(|p| !p.is_zero()) {
            syz.push(s);
        }
    }
    let src_degrees = &f.source.degrees;
    let kept = minimalize(ring, src_degrees, syz, quotient_ideal)?;
    let cols: Vec<Vec<(usize, Polynomial)>> = kept
        .iter()
        .map(|v| {
            v.iter()
                .enumerate()
                .filter(|(_, p)| !p.is_zero())
                .map(|(i, p)| (i, p.clone()))
                .collect()
        })
        .collect();
    let degs: Vec<i32> = kept
        .iter()
        .map(|v| element_degree(v, src_degrees).unwrap())
        .collect();
    GradedMap::new(
        ring,
        GradedFreeModule::new(degs),
        f.source.clone(),
        0,
        cols,
    )
}

/// Degree of a homogeneous dense element.
pub fn element_degree(v: &[Polynomial], degrees: &[i32]) -> Option<i32> {
    v.iter()
        .zip(degrees)
        .find(|(p, _)| !p.is_zero())
        .map(|(p, d)| p.degree().unwrap() as i32 + d)
}

/// Remove generators lying in the submodule generated by the others
/// (plus I times the ambient module). Processes generators by increasing
/// degree, then leading term; the survivors are returned in that order.
pub fn minimalize(
    ring: Ring,
    degrees: &[i32],
    mut gens: Vec<Vec<Polynomial>>,
    quotient_ideal: Option<&[Polynomial]>,
) -> Result<Vec<Vec<Polynomial>>> {
    let order = ModuleOrder::TopGrevlex;
    gens.retain(|g| g.iter().any(|p| !p.is_zero()));
    gens.sort_by(|a, b| {
        let da = element_degree(a, degrees);
        let db = element_degree(b, degrees);
        da.cmp(&db).then_with(|| {
            let la = ModuleElement::from_dense(a, &order).lead().unwrap();
            let lb = ModuleElement::from_dense(b, &order).lead().unwrap();
            order.cmp((&lb.0, lb.1), (&la.0, la.1))
        })
    });
    let mut kept: Vec<Vec<Polynomial>> = Vec::new();
    for g in gens {
        let d = element_degree(&g, degrees).unwrap();
        let gb = buchberger(ring, degrees, &kept, order.clone(), quotient_ideal, Some(d))?;
        if normal_form(&g, &gb).iter().any(|p| !p.is_zero()) {
            kept.push(g);
        }
    }
    Ok(kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_poly::{parse_polynomial, PrimeField};

    fn ring(n: usize) -> Ring {
        Ring::new(PrimeField::new(101).unwrap(), n).unwrap()
    }

    fn p(r: Ring, s: &str) -> Polynomial {
        parse_polynomial(r, &r.default_names(), s).unwrap()
    }

    #[test]
    fn variables_are_a_basis() {
        let r = ring(2);
        let gb = buchberger(
            r,
            &[0],
            &[vec![p(r, "x1")], vec![p(r, "x2")]],
            ModuleOrder::TopGrevlex,
            None,
            None,
        )
        .unwrap();
        assert_eq!(gb.elements.len(), 2);
    }

    #[test]
    fn hand_trace_contains_cube() {
        let r = ring(2);
        let gb = buchberger(
            r,
            &[0],
            &[vec![p(r, "x1^2-x2^2")], vec![p(r, "x1*x2")]],
            ModuleOrder::TopGrevlex,
            None,
            None,
        )
        .unwrap();
        let dense = gb.to_dense();
        assert!(dense.iter().any(|v| v[0] == p(r, "x2^3")));
    }

    #[test]
    fn unit_survives_normal_form() {
        let r = ring(3);
        let gens: Vec<Vec<Polynomial>> = (0..3).map(|i| vec![r.var(i)]).collect();
        let gb = buchberger(r, &[0], &gens, ModuleOrder::TopGrevlex, None, None).unwrap();
        assert_eq!(normal_form(&[r.one()], &gb), vec![r.one()]);
        assert!(normal_form(&[p(r, "x1*x2+x3^2")], &gb)[0].is_zero());
    }

    #[test]
    fn hilbert_of_polynomial_ring() {
        let r = ring(3);
        let gb = buchberger(r, &[0], &[], ModuleOrder::TopGrevlex, None, None).unwrap();
        let h = hilbert_function(&gb, 4);
        assert_eq!(h.values().copied().collect::<Vec<_>>(), vec![1, 3, 6, 10, 15]);
    }
}
