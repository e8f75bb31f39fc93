//! Bounded chain complexes of graded free modules over S or S/I, Koszul
//! complexes and their homotopies, tensor products, mapping cones, and
//! complexes of vector spaces obtained by reducing mod the maximal ideal.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{graded_map_matrix, polys_to_vector, vector_to_polys, GradedAlgebra};
use crate::error::{AlgebraError, Result};
use crate::field_poly::{compose, GradedFreeModule, GradedMap, Polynomial, PrimeField, Ring};
use crate::groebner::QuotientRing;
use crate::linalg::{nullspace, solve, Echelon, Matrix};

/// C_lo ← C_{lo+1} ← … ← C_hi, degree-preserving differentials.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub ring: Ring,
    /// Entries live in S/I when set (kept in normal form).
    pub quotient: Option<QuotientRing>,
    pub lo: i32,
    /// terms[k] = C_{lo+k}.
    pub terms: Vec<GradedFreeModule>,
    /// diffs[k]: C_{lo+k+1} → C_{lo+k}.
    pub diffs: Vec<GradedMap>,
}

impl ChainComplex {
    /// Checked: shapes match and d∘d = 0 (mod I when a quotient is given).
    pub fn new(
        ring: Ring,
        quotient: Option<QuotientRing>,
        lo: i32,
        terms: Vec<GradedFreeModule>,
        diffs: Vec<GradedMap>,
    ) -> Result<Self> {
        let c = Self::new_unchecked(ring, quotient, lo, terms, diffs)?;
        c.check_d_squared()?;
        Ok(c)
    }

    /// Shapes are checked, d² is not.
    pub fn new_unchecked(
        ring: Ring,
        quotient: Option<QuotientRing>,
        lo: i32,
        terms: Vec<GradedFreeModule>,
        diffs: Vec<GradedMap>,
    ) -> Result<Self> {
        if diffs.len() + 1 != terms.len() && !(terms.is_empty() && diffs.is_empty()) {
            return Err(AlgebraError::ShapeError(format!(
                "{} terms need {} differentials, got {}",
                terms.len(),
                terms.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.ring != ring {
                return Err(AlgebraError::RingMismatch("differential".into()));
            }
            if d.source != terms[k + 1] || d.target != terms[k] {
                return Err(AlgebraError::ShapeError(format!(
                    "differential out of degree {} has the wrong shape",
                    lo + k as i32 + 1
                )));
            }
            if !d.is_zero() && d.degree_shift != 0 {
                return Err(AlgebraError::HomogeneityError(
                    "differentials must preserve degree".into(),
                ));
            }
        }
        let diffs = diffs
            .into_iter()
            .map(|d| reduce_map(quotient.as_ref(), &d))
            .collect();
        Ok(ChainComplex {
            ring,
            quotient,
            lo,
            terms,
            diffs,
        })
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.terms.len() as i32 - 1
    }

    pub fn term(&self, i: i32) -> GradedFreeModule {
        if i < self.lo || i > self.hi() {
            GradedFreeModule::new(vec![])
        } else {
            self.terms[(i - self.lo) as usize].clone()
        }
    }

    pub fn rank(&self, i: i32) -> usize {
        if i < self.lo || i > self.hi() {
            0
        } else {
            self.terms[(i - self.lo) as usize].rank()
        }
    }

    /// d_i: C_i → C_{i-1} (zero outside the stored range).
    pub fn differential(&self, i: i32) -> GradedMap {
        if i <= self.lo || i > self.hi() {
            GradedMap::zero(self.ring, self.term(i), self.term(i - 1), 0)
        } else {
            self.diffs[(i - self.lo - 1) as usize].clone()
        }
    }

    pub fn diff_ref(&self, i: i32) -> Option<&GradedMap> {
        if i <= self.lo || i > self.hi() {
            None
        } else {
            Some(&self.diffs[(i - self.lo - 1) as usize])
        }
    }

    pub fn reduce(&self, m: &GradedMap) -> GradedMap {
        reduce_map(self.quotient.as_ref(), m)
    }

    /// f∘g reduced mod I.
    pub fn compose(&self, f: &GradedMap, g: &GradedMap) -> Result<GradedMap> {
        Ok(self.reduce(&compose(f, g)?))
    }

    pub fn check_d_squared(&self) -> Result<()> {
        for i in (self.lo + 2)..=self.hi() {
            let dd = self.compose(&self.differential(i - 1), &self.differential(i))?;
            if !dd.is_zero() {
                return Err(AlgebraError::ChainMapError(format!(
                    "d_{} d_{i} is not zero",
                    i - 1
                )));
            }
        }
        Ok(())
    }

    pub fn is_minimal(&self) -> bool {
        self.diffs.iter().all(|d| d.is_minimal())
    }

    /// Shift homological degrees: C[s]_i = C_{i+s}, with differentials
    /// multiplied by (-1)^s.
    pub fn shifted(&self, s: i32) -> ChainComplex {
        let sign = if s.rem_euclid(2) == 0 { 1 } else { -1 };
        ChainComplex {
            ring: self.ring,
            quotient: self.quotient.clone(),
            lo: self.lo - s,
            terms: self.terms.clone(),
            diffs: self.diffs.iter().map(|d| d.scale(sign)).collect(),
        }
    }

    /// Truncate to homological degrees lo..=hi.
    pub fn truncated(&self, hi: i32) -> ChainComplex {
        let n = ((hi - self.lo + 1).max(0) as usize).min(self.terms.len());
        ChainComplex {
            ring: self.ring,
            quotient: self.quotient.clone(),
            lo: self.lo,
            terms: self.terms[..n].to_vec(),
            diffs: self.diffs[..n.saturating_sub(1)].to_vec(),
        }
    }

    /// Dimension of H_n in internal degree d, by rank–nullity over `alg`
    /// (which must hold the needed degrees exactly).
    pub fn homology_dim(&self, alg: &GradedAlgebra, n: i32, d: i32) -> usize {
        let f = alg.field;
        let dn = self.differential(n);
        let mn = graded_map_matrix(alg, &dn, d);
        let dim_n = mn.cols;
        let rank_n = mn.rank(f);
        let up = self.differential(n + 1);
        let rank_up = graded_map_matrix(alg, &up, d).rank(f);
        dim_n - rank_n - rank_up
    }
}

pub(crate) fn reduce_map(q: Option<&QuotientRing>, m: &GradedMap) -> GradedMap {
    match q {
        Some(q) => m.map_entries(|p| q.normal_form(p)),
        None => m.clone(),
    }
}

/// Subsets of {0..c} of size q, ordered lexicographically by index list.
pub fn subsets(c: usize, q: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, c: usize, q: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == q {
            out.push(cur.clone());
            return;
        }
        for i in start..c {
            cur.push(i);
            go(i + 1, c, q, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, c, q, &mut Vec::new(), &mut out);
    out
}

/// Koszul complex on f: K_q has basis e_J, |J| = q, and
/// ∂(e_{j1}∧…∧e_{jq}) = Σ_ℓ (−1)^{ℓ+1} f_{jℓ} e_{J∖jℓ}.
pub fn koszul(ring: Ring, f: &[Polynomial]) -> Result<ChainComplex> {
    if f.is_empty() {
        return Err(AlgebraError::InvalidParameter("empty sequence".into()));
    }
    let mut degs = Vec::with_capacity(f.len());
    for p in f {
        if p.is_zero() || !p.is_homogeneous() {
            return Err(AlgebraError::HomogeneityError(format!(
                "{p} is not a nonzero homogeneous polynomial"
            )));
        }
        degs.push(p.degree().unwrap() as i32);
    }
    let c = f.len();
    let subs: Vec<Vec<Vec<usize>>> = (0..=c).map(|q| subsets(c, q)).collect();
    let terms: Vec<GradedFreeModule> = subs
        .iter()
        .map(|s| GradedFreeModule::new(s.iter().map(|j| j.iter().map(|&i| degs[i]).sum()).collect()))
        .collect();
    let mut diffs = Vec::with_capacity(c);
    for q in 1..=c {
        let cols = subs[q]
            .iter()
            .map(|j| {
                let mut col: Vec<(usize, Polynomial)> = j
                    .iter()
                    .enumerate()
                    .map(|(l, &jl)| {
                        let rest: Vec<usize> = j.iter().copied().filter(|&x| x != jl).collect();
                        let row = subs[q - 1].iter().position(|s| *s == rest).unwrap();
                        let p = if l % 2 == 0 { f[jl].clone() } else { f[jl].neg() };
                        (row, p)
                    })
                    .collect();
                col.sort_by_key(|(r, _)| *r);
                col
            })
            .collect();
        diffs.push(GradedMap::new(
            ring,
            terms[q].clone(),
            terms[q - 1].clone(),
            0,
            cols,
        )?);
    }
    ChainComplex::new(ring, None, 0, terms, diffs)
}

/// Left multiplication by e_i on a Koszul complex built by `koszul` on
/// `f`: maps σ_q: K_q → K_{q+1} for q = 0..c−1, of degree shift deg f_i.
pub fn koszul_homotopy(k: &ChainComplex, f: &[Polynomial], i: usize) -> Result<Vec<GradedMap>> {
    let c = f.len();
    if i >= c || k.terms.len() != c + 1 {
        return Err(AlgebraError::InvalidParameter(format!(
            "index {i} for a Koszul complex on {c} elements"
        )));
    }
    let shift = f[i].degree().unwrap_or(0) as i32;
    let mut out = Vec::with_capacity(c);
    for q in 0..c {
        let src = subsets(c, q);
        let tgt = subsets(c, q + 1);
        let cols = src
            .iter()
            .map(|j| {
                if j.contains(&i) {
                    return vec![];
                }
                let before = j.iter().filter(|&&x| x < i).count();
                let mut u: Vec<usize> = j.clone();
                u.push(i);
                u.sort();
                let row = tgt.iter().position(|s| *s == u).unwrap();
                let s = if before % 2 == 0 { 1 } else { -1 };
                vec![(row, k.ring.constant(s))]
            })
            .collect();
        out.push(GradedMap::new(
            k.ring,
            k.term(q as i32),
            k.term(q as i32 + 1),
            shift,
            cols,
        )?);
    }
    Ok(out)
}

/// Block layout of (C⊗D)_n: (i, j, offset) for the summands C_i⊗D_j.
fn tensor_blocks(c: &ChainComplex, d: &ChainComplex, n: i32) -> (Vec<(i32, i32, usize)>, Vec<i32>) {
    let mut blocks = Vec::new();
    let mut degs = Vec::new();
    for i in c.lo..=c.hi() {
        let j = n - i;
        if j < d.lo || j > d.hi() {
            continue;
        }
        blocks.push((i, j, degs.len()));
        for &a in &c.term(i).degrees {
            for &b in &d.term(j).degrees {
                degs.push(a + b);
            }
        }
    }
    (blocks, degs)
}

/// Tensor product with d(a⊗b) = da⊗b + (−1)^{|a|} a⊗db. Basis of C_i⊗D_j
/// is ordered a-major.
pub fn tensor(c: &ChainComplex, d: &ChainComplex) -> Result<ChainComplex> {
    if c.ring != d.ring {
        return Err(AlgebraError::RingMismatch("tensor".into()));
    }
    let ring = c.ring;
    let quotient = c.quotient.clone().or_else(|| d.quotient.clone());
    if c.terms.is_empty() || d.terms.is_empty() {
        return ChainComplex::new(ring, quotient, 0, vec![], vec![]);
    }
    let lo = c.lo + d.lo;
    let hi = c.hi() + d.hi();
    let mut terms = Vec::new();
    let mut layouts = Vec::new();
    for n in lo..=hi {
        let (b, degs) = tensor_blocks(c, d, n);
        terms.push(GradedFreeModule::new(degs));
        layouts.push(b);
    }
    let mut diffs = Vec::new();
    for n in (lo + 1)..=hi {
        let src = &layouts[(n - lo) as usize];
        let tgt = &layouts[(n - 1 - lo) as usize];
        let offset_of = |i: i32| tgt.iter().find(|(ii, _, _)| *ii == i).map(|t| t.2);
        let mut cols: Vec<Vec<(usize, Polynomial)>> = Vec::new();
        for &(i, j, _) in src {
            let (ci, dj) = (c.term(i), d.term(j));
            let (dc, dd) = (c.differential(i), d.differential(j));
            let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            for a in 0..ci.rank() {
                for b in 0..dj.rank() {
                    let mut col: Vec<(usize, Polynomial)> = Vec::new();
                    // da ⊗ b in C_{i-1}⊗D_j
                    if let Some(off) = offset_of(i - 1) {
                        let nb = dj.rank();
                        for (r, p) in dc.column(a) {
                            col.push((off + r * nb + b, p.clone()));
                        }
                    }
                    // ± a ⊗ db in C_i⊗D_{j-1}
                    if let Some(off) = offset_of(i) {
                        let nb = d.rank(j - 1);
                        for (r, p) in dd.column(b) {
                            col.push((off + a * nb + r, p.scale(ring.field.from_i64(sign))));
                        }
                    }
                    col.sort_by_key(|(r, _)| *r);
                    cols.push(col);
                }
            }
        }
        diffs.push(GradedMap::new(
            ring,
            terms[(n - lo) as usize].clone(),
            terms[(n - 1 - lo) as usize].clone(),
            0,
            cols,
        )?);
    }
    ChainComplex::new(ring, quotient, lo, terms, diffs)
}

/// Degree-0 map of complexes C → D; maps[k] is C_{lo+k} → D_{lo+k} with
/// lo = source.lo.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: ChainComplex,
    pub target: ChainComplex,
    pub maps: Vec<GradedMap>,
}

impl ChainMap {
    pub fn new(source: ChainComplex, target: ChainComplex, maps: Vec<GradedMap>) -> Result<Self> {
        if maps.len() != source.terms.len() {
            return Err(AlgebraError::ShapeError("one component per source term".into()));
        }
        let cm = ChainMap {
            source,
            target,
            maps,
        };
        for i in cm.source.lo..=cm.source.hi() {
            let phi = cm.component(i);
            if phi.source != cm.source.term(i) || phi.target != cm.target.term(i) {
                return Err(AlgebraError::ShapeError(format!("component {i} has the wrong shape")));
            }
        }
        cm.check()?;
        Ok(cm)
    }

    pub fn component(&self, i: i32) -> GradedMap {
        let s = &self.source;
        if i < s.lo || i > s.hi() {
            GradedMap::zero(s.ring, s.term(i), self.target.term(i), 0)
        } else {
            self.maps[(i - s.lo) as usize].clone()
        }
    }

    fn check(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        for i in (s.lo + 1)..=s.hi() {
            let lhs = t.compose(&t.differential(i), &self.component(i))?;
            let rhs = t.compose(&self.component(i - 1), &s.differential(i))?;
            let diff = t.reduce(&lhs.sub(&rhs).map_err(|_| {
                AlgebraError::ChainMapError(format!("components at {i} have mismatched shapes"))
            })?);
            if !diff.is_zero() {
                return Err(AlgebraError::ChainMapError(format!(
                    "map does not commute with the differential in degree {i}"
                )));
            }
        }
        Ok(())
    }
}

/// cone_n = D_n ⊕ C_{n−1}, d = [[d_D, φ], [0, −d_C]].
pub fn cone(phi: &ChainMap) -> Result<ChainComplex> {
    phi.check()?;
    let (c, d) = (&phi.source, &phi.target);
    let ring = d.ring;
    let lo = d.lo.min(c.lo + 1);
    let hi = d.hi().max(c.hi() + 1);
    let terms: Vec<GradedFreeModule> = (lo..=hi)
        .map(|n| GradedFreeModule::direct_sum(&[d.term(n), c.term(n - 1)]))
        .collect();
    let mut diffs = Vec::new();
    for n in (lo + 1)..=hi {
        let dd = d.differential(n);
        let ph = phi.component(n - 1);
        let dc = c.differential(n - 1).neg();
        let zero = GradedMap::zero(ring, d.term(n), c.term(n - 2), 0);
        let blocks = vec![vec![Some(&dd), Some(&ph)], vec![Some(&zero), Some(&dc)]];
        diffs.push(GradedMap::from_blocks(
            ring,
            &[d.term(n - 1), c.term(n - 2)],
            &[d.term(n), c.term(n - 1)],
            0,
            &blocks,
        )?);
    }
    ChainComplex::new(ring, d.quotient.clone(), lo, terms, diffs)
}

/// A complex of graded vector spaces: generator degrees per homological
/// degree and scalar differentials (degree-0 parts).
#[derive(Clone, Debug)]
pub struct KComplexOverField {
    pub field: PrimeField,
    pub lo: i32,
    /// Internal degrees of the basis of each term.
    pub terms: Vec<Vec<i32>>,
    /// diffs[k]: term lo+k+1 → term lo+k.
    pub diffs: Vec<Matrix>,
}

/// Homology in one homological degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homology {
    /// Internal degree → dimension (nonzero entries only).
    pub dims: BTreeMap<i32, usize>,
    /// Internal degree → cycle representatives as columns in the full
    /// coordinates of the term.
    pub reps: BTreeMap<i32, Matrix>,
}

impl Homology {
    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }
}

impl KComplexOverField {
    pub fn hi(&self) -> i32 {
        self.lo + self.terms.len() as i32 - 1
    }

    pub fn term(&self, i: i32) -> &[i32] {
        if i < self.lo || i > self.hi() {
            &[]
        } else {
            &self.terms[(i - self.lo) as usize]
        }
    }

    pub fn differential(&self, i: i32) -> Matrix {
        if i <= self.lo || i > self.hi() {
            Matrix::zeros(self.term(i - 1).len(), self.term(i).len())
        } else {
            self.diffs[(i - self.lo - 1) as usize].clone()
        }
    }

    pub fn is_d_squared_zero(&self) -> bool {
        (self.lo + 2..=self.hi()).all(|i| {
            self.differential(i - 1)
                .mul(&self.differential(i), self.field)
                .is_zero()
        })
    }

    /// H_n per internal degree; representatives are the cycle basis vectors
    /// (nullspace basis, in order) that are independent modulo boundaries.
    pub fn homology(&self, n: i32) -> Homology {
        let f = self.field;
        let tn = self.term(n).to_vec();
        let mut degs: Vec<i32> = tn.clone();
        degs.sort();
        degs.dedup();
        let dn = self.differential(n);
        let up = self.differential(n + 1);
        let tup = self.term(n + 1).to_vec();
        let mut dims = BTreeMap::new();
        let mut reps = BTreeMap::new();
        for j in degs {
            let idx: Vec<usize> = (0..tn.len()).filter(|&k| tn[k] == j).collect();
            let sub = dn.select_cols(&idx);
            let ns = nullspace(&sub, f);
            let mut ech = Echelon::new(f, idx.len());
            for c in (0..tup.len()).filter(|&k| tup[k] == j) {
                let v: Vec<u32> = idx.iter().map(|&r| up.get(r, c)).collect();
                ech.insert(&v);
            }
            let mut cols = Vec::new();
            for r in 0..ns.basis.rows {
                let v = ns.basis.row(r).to_vec();
                if ech.insert(&v) {
                    let mut full = vec![0u32; tn.len()];
                    for (k, &pos) in idx.iter().enumerate() {
                        full[pos] = v[k];
                    }
                    cols.push(full);
                }
            }
            if !cols.is_empty() {
                dims.insert(j, cols.len());
                reps.insert(j, Matrix::from_columns(tn.len(), &cols));
            }
        }
        Homology { dims, reps }
    }
}

/// Replace every entry by its degree-0 part.
pub fn reduce_mod_m(c: &ChainComplex) -> KComplexOverField {
    KComplexOverField {
        field: c.ring.field,
        lo: c.lo,
        terms: c.terms.iter().map(|t| t.degrees.clone()).collect(),
        diffs: c.diffs.iter().map(|d| d.constant_part()).collect(),
    }
}

/// An algebra holding every degree needed for maps of degree shift up to
/// `extra` between the terms of `c`.
pub fn algebra_for(c: &ChainComplex, extra: i32) -> Result<Arc<GradedAlgebra>> {
    let degs: Vec<i32> = c.terms.iter().flat_map(|t| t.degrees.iter().copied()).collect();
    let lo = degs.iter().copied().min().unwrap_or(0);
    let hi = degs.iter().copied().max().unwrap_or(0);
    let top = (hi - lo + extra.max(0)).max(0);
    match &c.quotient {
        Some(q) => GradedAlgebra::quotient(q, Some(top)),
        None => Ok(GradedAlgebra::polynomial(c.ring, top)),
    }
}

/// Solve d∘X = b for X (b.source → d.source), one degree at a time; the
/// particular solution has zeros in the free variables. None when some
/// column of b is not in the image of d.
pub fn lift_map(alg: &GradedAlgebra, d: &GradedMap, b: &GradedMap) -> Result<Option<GradedMap>> {
    if b.target != d.target {
        return Err(AlgebraError::ShapeError("lift: targets differ".into()));
    }
    let s = b.degree_shift - d.degree_shift;
    let f = alg.field;
    let mut by_degree: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (j, &a) in b.source.degrees.iter().enumerate() {
        if !b.column(j).is_empty() {
            by_degree.entry(a + s).or_default().push(j);
        }
    }
    let mut cols: Vec<Vec<(usize, Polynomial)>> = vec![Vec::new(); b.ncols()];
    for (e, js) in by_degree {
        let a = graded_map_matrix(alg, d, e);
        let rhs: Vec<Vec<u32>> = js
            .iter()
            .map(|&j| polys_to_vector(alg, &d.target.degrees, e + d.degree_shift, &b.dense_column(j)))
            .collect();
        let bm = Matrix::from_columns(a.rows, &rhs);
        let Some(x) = solve(&a, &bm, f) else {
            return Ok(None);
        };
        for (k, &j) in js.iter().enumerate() {
            let v = x.column(k);
            cols[j] = vector_to_polys(alg, &d.source.degrees, e, &v)
                .into_iter()
                .enumerate()
                .filter(|(_, p)| !p.is_zero())
                .collect();
        }
    }
    Ok(Some(GradedMap::new(
        b.ring,
        b.source.clone(),
        d.source.clone(),
        s,
        cols,
    )?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GradedAlgebra;
    use crate::field_poly::{parse_polynomial_list, PrimeField};

    fn ring(n: usize) -> Ring {
        Ring::new(PrimeField::new(101).unwrap(), n).unwrap()
    }

    fn polys(r: Ring, s: &str) -> Vec<Polynomial> {
        parse_polynomial_list(r, &r.default_names(), s).unwrap()
    }

    #[test]
    fn koszul_cubes_shape() {
        let r = ring(3);
        let k = koszul(r, &polys(r, "x1^3,x2^3,x3^3")).unwrap();
        let ranks: Vec<usize> = k.terms.iter().map(|t| t.rank()).collect();
        assert_eq!(ranks, vec![1, 3, 3, 1]);
        assert_eq!(k.term(2).degrees, vec![6, 6, 6]);
        assert_eq!(k.term(3).degrees, vec![9]);
    }

    #[test]
    fn koszul_is_acyclic_through_degree_12() {
        let r = ring(3);
        let k = koszul(r, &polys(r, "x1^3,x2^3,x3^3")).unwrap();
        let alg = GradedAlgebra::polynomial(r, 12);
        for n in 1..=3 {
            for d in 0..=12 {
                assert_eq!(k.homology_dim(&alg, n, d), 0, "H_{n} in degree {d}");
            }
        }
        // H_0 = S/(cubes): 1,3,6,7,6,3,1,0
        let h0: Vec<usize> = (0..8).map(|d| k.homology_dim(&alg, 0, d)).collect();
        assert_eq!(h0, vec![1, 3, 6, 7, 6, 3, 1, 0]);
    }

    #[test]
    fn koszul_homotopy_identities() {
        let r = ring(3);
        let f = polys(r, "x1^3,x2^3,x3^3");
        let k = koszul(r, &f).unwrap();
        let s: Vec<Vec<GradedMap>> = (0..3).map(|i| koszul_homotopy(&k, &f, i).unwrap()).collect();
        for i in 0..3 {
            for q in 0..=3usize {
                // σ∂ + ∂σ on K_q
                let mut acc = GradedMap::scalar(r, &k.term(q as i32), &f[i]).neg();
                if q >= 1 {
                    let t = compose(&s[i][q - 1], &k.differential(q as i32)).unwrap();
                    acc = acc.add(&t).unwrap();
                }
                if q < 3 {
                    let t = compose(&k.differential(q as i32 + 1), &s[i][q]).unwrap();
                    acc = acc.add(&t).unwrap();
                }
                assert!(acc.is_zero(), "i={i} q={q}");
            }
        }
        for q in 0..2 {
            assert!(compose(&s[1][q + 1], &s[1][q]).unwrap().is_zero());
            let a = compose(&s[0][q + 1], &s[1][q]).unwrap();
            let b = compose(&s[1][q + 1], &s[0][q]).unwrap();
            assert!(a.add(&b).unwrap().is_zero());
        }
    }

    #[test]
    fn tensor_of_koszuls() {
        let r = ring(2);
        let k1 = koszul(r, &polys(r, "x1")).unwrap();
        let k2 = koszul(r, &polys(r, "x2")).unwrap();
        let t = tensor(&k1, &k2).unwrap();
        let k12 = koszul(r, &polys(r, "x1,x2")).unwrap();
        let ranks: Vec<usize> = t.terms.iter().map(|m| m.rank()).collect();
        assert_eq!(ranks, vec![1, 2, 1]);
        assert_eq!(t.term(1).degrees, k12.term(1).degrees);
        // same differential after swapping the two degree-1 basis elements
        let d = t.differential(2);
        assert_eq!(d.entry(0, 0), k12.differential(2).entry(1, 0));
        assert_eq!(d.entry(1, 0), k12.differential(2).entry(0, 0));
    }

    #[test]
    fn cone_of_identity_is_exact() {
        let r = ring(3);
        let k = koszul(r, &polys(r, "x1,x2,x3")).unwrap();
        let maps = k.terms.iter().map(|t| GradedMap::identity(r, t)).collect();
        let phi = ChainMap::new(k.clone(), k.clone(), maps).unwrap();
        let c = cone(&phi).unwrap();
        let alg = GradedAlgebra::polynomial(r, 6);
        for n in c.lo..=c.hi() {
            for d in 0..=5 {
                assert_eq!(c.homology_dim(&alg, n, d), 0);
            }
        }
        let h = reduce_mod_m(&c);
        assert!(h.is_d_squared_zero());
        for n in h.lo..=h.hi() {
            assert_eq!(h.homology(n).total(), 0);
        }
    }

    #[test]
    fn reduce_koszul_on_variables() {
        let r = ring(3);
        let k = koszul(r, &polys(r, "x1,x2,x3")).unwrap();
        let km = reduce_mod_m(&k);
        assert!(km.diffs.iter().all(|d| d.is_zero()));
        let dims: Vec<usize> = (0..=3).map(|n| km.homology(n).total()).collect();
        assert_eq!(dims, vec![1, 3, 3, 1]);
        assert_eq!(km.homology(2).dims.get(&2), Some(&3));
    }

    #[test]
    fn non_minimal_unit_map() {
        let r = ring(1);
        let m = GradedFreeModule::new(vec![0]);
        let d = GradedMap::identity(r, &m);
        let c = ChainComplex::new(r, None, 0, vec![m.clone(), m], vec![d]).unwrap();
        let km = reduce_mod_m(&c);
        assert_eq!(km.diffs[0].get(0, 0), 1);
        assert_eq!(km.homology(0).total() + km.homology(1).total(), 0);
    }
}
