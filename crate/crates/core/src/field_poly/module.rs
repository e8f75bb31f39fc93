use serde::Serialize;

use super::polynomial::{Polynomial, Ring};
use crate::error::{AlgebraError, Result};
use crate::linalg::Matrix;

/// Graded free module ⊕ S(-d_i). `degrees[i]` is the degree of the i-th basis
/// element; the twist is its negative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct GradedFreeModule {
    pub degrees: Vec<i32>,
}

impl GradedFreeModule {
    pub fn new(degrees: Vec<i32>) -> Self {
        GradedFreeModule { degrees }
    }

    pub fn free(rank: usize, degree: i32) -> Self {
        GradedFreeModule {
            degrees: vec![degree; rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn twists(&self) -> Vec<i32> {
        self.degrees.iter().map(|d| -d).collect()
    }

    pub fn shifted(&self, s: i32) -> Self {
        GradedFreeModule {
            degrees: self.degrees.iter().map(|d| d + s).collect(),
        }
    }

    pub fn direct_sum(parts: &[GradedFreeModule]) -> Self {
        GradedFreeModule {
            degrees: parts.iter().flat_map(|m| m.degrees.iter().copied()).collect(),
        }
    }
}

/// A homogeneous map between graded free modules, stored column-major with
/// sparse columns. Entry (i, j) has degree
/// `source.degrees[j] - target.degrees[i] + degree_shift`.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedMap {
    pub ring: Ring,
    pub source: GradedFreeModule,
    pub target: GradedFreeModule,
    pub degree_shift: i32,
    cols: Vec<Vec<(usize, Polynomial)>>,
}

impl std::fmt::Debug for GradedMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "GradedMap {}x{} shift {} [",
            self.target.rank(),
            self.source.rank(),
            self.degree_shift
        )?;
        for i in 0..self.target.rank() {
            let row: Vec<String> = (0..self.source.rank())
                .map(|j| self.entry(i, j).to_string())
                .collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl GradedMap {
    /// Checked constructor from sparse columns.
    pub fn new(
        ring: Ring,
        source: GradedFreeModule,
        target: GradedFreeModule,
        degree_shift: i32,
        cols: Vec<Vec<(usize, Polynomial)>>,
    ) -> Result<Self> {
        if cols.len() != source.rank() {
            return Err(AlgebraError::ShapeError(format!(
                "{} columns for source of rank {}",
                cols.len(),
                source.rank()
            )));
        }
        let mut clean = Vec::with_capacity(cols.len());
        for (j, col) in cols.into_iter().enumerate() {
            let mut col: Vec<(usize, Polynomial)> =
                col.into_iter().filter(|(_, p)| !p.is_zero()).collect();
            col.sort_by_key(|(i, _)| *i);
            for w in col.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(AlgebraError::ShapeError(format!(
                        "duplicate row {} in column {j}",
                        w[0].0
                    )));
                }
            }
            for (i, p) in &col {
                if *i >= target.rank() {
                    return Err(AlgebraError::ShapeError(format!(
                        "row {i} out of range for target of rank {}",
                        target.rank()
                    )));
                }
                if p.ring != ring {
                    return Err(AlgebraError::RingMismatch("map entry".into()));
                }
                let want = source.degrees[j] - target.degrees[*i] + degree_shift;
                if !p.is_homogeneous() || p.degree().map(|d| d as i32) != Some(want) {
                    return Err(AlgebraError::HomogeneityError(format!(
                        "entry ({i},{j}) = {p} should be homogeneous of degree {want}"
                    )));
                }
            }
            clean.push(col);
        }
        Ok(GradedMap {
            ring,
            source,
            target,
            degree_shift,
            cols: clean,
        })
    }

    /// Checked constructor from a dense row-major matrix.
    pub fn from_rows(
        ring: Ring,
        source: GradedFreeModule,
        target: GradedFreeModule,
        degree_shift: i32,
        rows: Vec<Vec<Polynomial>>,
    ) -> Result<Self> {
        if rows.len() != target.rank() || rows.iter().any(|r| r.len() != source.rank()) {
            return Err(AlgebraError::ShapeError(format!(
                "expected {}x{} entries",
                target.rank(),
                source.rank()
            )));
        }
        let mut cols = vec![Vec::new(); source.rank()];
        for (i, row) in rows.into_iter().enumerate() {
            for (j, p) in row.into_iter().enumerate() {
                cols[j].push((i, p));
            }
        }
        Self::new(ring, source, target, degree_shift, cols)
    }

    /// Build a map, inferring source degrees from the (nonzero) columns.
    /// Zero columns get the degree supplied by `zero_col_degree`.
    pub fn infer_source(
        ring: Ring,
        target: GradedFreeModule,
        cols: Vec<Vec<(usize, Polynomial)>>,
        zero_col_degree: i32,
    ) -> Result<Self> {
        let mut degs = Vec::with_capacity(cols.len());
        for col in &cols {
            let d = col
                .iter()
                .find(|(_, p)| !p.is_zero())
                .map(|(i, p)| target.degrees[*i] + p.degree().unwrap() as i32)
                .unwrap_or(zero_col_degree);
            degs.push(d);
        }
        Self::new(ring, GradedFreeModule::new(degs), target, 0, cols)
    }

    pub fn zero(
        ring: Ring,
        source: GradedFreeModule,
        target: GradedFreeModule,
        degree_shift: i32,
    ) -> Self {
        let n = source.rank();
        GradedMap {
            ring,
            source,
            target,
            degree_shift,
            cols: vec![Vec::new(); n],
        }
    }

    pub fn identity(ring: Ring, m: &GradedFreeModule) -> Self {
        Self::scalar(ring, m, &ring.one())
    }

    /// Multiplication by a homogeneous polynomial.
    pub fn scalar(ring: Ring, m: &GradedFreeModule, c: &Polynomial) -> Self {
        let shift = c.degree().unwrap_or(0) as i32;
        let cols = (0..m.rank())
            .map(|j| {
                if c.is_zero() {
                    vec![]
                } else {
                    vec![(j, c.clone())]
                }
            })
            .collect();
        GradedMap {
            ring,
            source: m.clone(),
            target: m.clone(),
            degree_shift: shift,
            cols,
        }
    }

    pub fn nrows(&self) -> usize {
        self.target.rank()
    }

    pub fn ncols(&self) -> usize {
        self.source.rank()
    }

    pub fn column(&self, j: usize) -> &[(usize, Polynomial)] {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[Vec<(usize, Polynomial)>] {
        &self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> Polynomial {
        self.cols[j]
            .iter()
            .find(|(r, _)| *r == i)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    /// True iff no entry has a nonzero constant term.
    pub fn is_minimal(&self) -> bool {
        self.cols
            .iter()
            .all(|c| c.iter().all(|(_, p)| p.constant_term() == 0))
    }

    /// Scalar matrix of degree-0 parts (rows = target, cols = source).
    pub fn constant_part(&self) -> Matrix {
        let mut m = Matrix::zeros(self.nrows(), self.ncols());
        for (j, col) in self.cols.iter().enumerate() {
            for (i, p) in col {
                m.set(*i, j, p.constant_term());
            }
        }
        m
    }

    /// Apply to a column vector (dense, one polynomial per source basis element).
    pub fn apply(&self, v: &[Polynomial]) -> Vec<Polynomial> {
        assert_eq!(v.len(), self.ncols());
        let mut out = vec![self.ring.zero(); self.nrows()];
        for (j, col) in self.cols.iter().enumerate() {
            if v[j].is_zero() {
                continue;
            }
            for (i, p) in col {
                out[*i] = out[*i].add(&p.mul(&v[j]));
            }
        }
        out
    }

    pub fn dense_column(&self, j: usize) -> Vec<Polynomial> {
        let mut out = vec![self.ring.zero(); self.nrows()];
        for (i, p) in &self.cols[j] {
            out[*i] = p.clone();
        }
        out
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &GradedMap) -> Result<GradedMap> {
        compose(self, g)
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        self.same_shape(other)?;
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| merge_cols(a, b, false))
            .collect();
        Ok(GradedMap {
            ring: self.ring,
            source: self.source.clone(),
            target: self.target.clone(),
            degree_shift: self.degree_shift,
            cols,
        })
    }

    pub fn sub(&self, other: &GradedMap) -> Result<GradedMap> {
        self.same_shape(other)?;
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| merge_cols(a, b, true))
            .collect();
        Ok(GradedMap {
            ring: self.ring,
            source: self.source.clone(),
            target: self.target.clone(),
            degree_shift: self.degree_shift,
            cols,
        })
    }

    fn same_shape(&self, other: &GradedMap) -> Result<()> {
        if self.ring != other.ring {
            return Err(AlgebraError::RingMismatch("map sum".into()));
        }
        if self.source != other.source
            || self.target != other.target
            || (self.degree_shift != other.degree_shift && !self.is_zero() && !other.is_zero())
        {
            return Err(AlgebraError::ShapeError("maps of different shape".into()));
        }
        Ok(())
    }

    pub fn scale(&self, c: i64) -> GradedMap {
        let c = self.ring.field.from_i64(c);
        self.map_entries(|p| p.scale(c))
    }

    pub fn neg(&self) -> GradedMap {
        self.map_entries(|p| p.neg())
    }

    /// Apply a degree-preserving transformation to every entry.
    pub fn map_entries(&self, f: impl Fn(&Polynomial) -> Polynomial) -> GradedMap {
        let cols = self
            .cols
            .iter()
            .map(|c| {
                c.iter()
                    .map(|(i, p)| (*i, f(p)))
                    .filter(|(_, p)| !p.is_zero())
                    .collect()
            })
            .collect();
        GradedMap {
            ring: self.ring,
            source: self.source.clone(),
            target: self.target.clone(),
            degree_shift: self.degree_shift,
            cols,
        }
    }

    pub fn transpose_shape(&self) -> (usize, usize) {
        (self.ncols(), self.nrows())
    }

    /// Restrict to a subset of columns.
    pub fn select_columns(&self, idx: &[usize]) -> GradedMap {
        GradedMap {
            ring: self.ring,
            source: GradedFreeModule::new(idx.iter().map(|&j| self.source.degrees[j]).collect()),
            target: self.target.clone(),
            degree_shift: self.degree_shift,
            cols: idx.iter().map(|&j| self.cols[j].clone()).collect(),
        }
    }

    /// Block matrix. `blocks[r][c]` maps `sources[c]` to `targets[r]`; `None`
    /// means zero.
    pub fn from_blocks(
        ring: Ring,
        targets: &[GradedFreeModule],
        sources: &[GradedFreeModule],
        degree_shift: i32,
        blocks: &[Vec<Option<&GradedMap>>],
    ) -> Result<GradedMap> {
        let target = GradedFreeModule::direct_sum(targets);
        let source = GradedFreeModule::direct_sum(sources);
        let mut cols: Vec<Vec<(usize, Polynomial)>> = vec![Vec::new(); source.rank()];
        let mut row_off = 0;
        for (r, t) in targets.iter().enumerate() {
            let mut col_off = 0;
            for (c, s) in sources.iter().enumerate() {
                if let Some(b) = blocks[r][c] {
                    if b.source != *s || b.target != *t {
                        return Err(AlgebraError::ShapeError(format!(
                            "block ({r},{c}) has wrong shape"
                        )));
                    }
                    if !b.is_zero() && b.degree_shift != degree_shift {
                        return Err(AlgebraError::ShapeError(format!(
                            "block ({r},{c}) has shift {} not {degree_shift}",
                            b.degree_shift
                        )));
                    }
                    for (j, col) in b.cols.iter().enumerate() {
                        for (i, p) in col {
                            cols[col_off + j].push((row_off + i, p.clone()));
                        }
                    }
                }
                col_off += s.rank();
            }
            row_off += t.rank();
        }
        for c in cols.iter_mut() {
            c.sort_by_key(|(i, _)| *i);
        }
        Ok(GradedMap {
            ring,
            source,
            target,
            degree_shift,
            cols,
        })
    }

    /// Extract a block given row and column ranges.
    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> GradedMap {
        let target = GradedFreeModule::new(self.target.degrees[rows.clone()].to_vec());
        let source = GradedFreeModule::new(self.source.degrees[cols.clone()].to_vec());
        let c = cols
            .map(|j| {
                self.cols[j]
                    .iter()
                    .filter(|(i, _)| rows.contains(i))
                    .map(|(i, p)| (i - rows.start, p.clone()))
                    .collect()
            })
            .collect();
        GradedMap {
            ring: self.ring,
            source,
            target,
            degree_shift: self.degree_shift,
            cols: c,
        }
    }
}

fn merge_cols(
    a: &[(usize, Polynomial)],
    b: &[(usize, Polynomial)],
    negate: bool,
) -> Vec<(usize, Polynomial)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            let p = if negate { b[j].1.neg() } else { b[j].1.clone() };
            out.push((b[j].0, p));
            j += 1;
        } else {
            let p = if negate {
                a[i].1.sub(&b[j].1)
            } else {
                a[i].1.add(&b[j].1)
            };
            if !p.is_zero() {
                out.push((a[i].0, p));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Matrix product `f ∘ g`; requires `g.target == f.source`.
pub fn compose(f: &GradedMap, g: &GradedMap) -> Result<GradedMap> {
    if f.ring != g.ring {
        return Err(AlgebraError::RingMismatch("compose".into()));
    }
    if g.target != f.source {
        return Err(AlgebraError::ShapeError(format!(
            "cannot compose: inner target rank {} vs outer source rank {}",
            g.target.rank(),
            f.source.rank()
        )));
    }
    let ring = f.ring;
    let cols = g
        .cols
        .iter()
        .map(|gcol| {
            let mut acc: Vec<Polynomial> = vec![ring.zero(); f.nrows()];
            let mut touched = vec![false; f.nrows()];
            for (k, q) in gcol {
                for (i, p) in &f.cols[*k] {
                    acc[*i] = acc[*i].add(&p.mul(q));
                    touched[*i] = true;
                }
            }
            acc.into_iter()
                .enumerate()
                .filter(|(i, p)| touched[*i] && !p.is_zero())
                .collect()
        })
        .collect();
    Ok(GradedMap {
        ring,
        source: g.source.clone(),
        target: f.target.clone(),
        degree_shift: f.degree_shift + g.degree_shift,
        cols,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_poly::PrimeField;

    fn ring() -> Ring {
        Ring::new(PrimeField::new(101).unwrap(), 3).unwrap()
    }

    #[test]
    fn rejects_inhomogeneous_entry() {
        let r = ring();
        let bad = r.var(0).add(&r.var(1).mul(&r.var(2)));
        let e = GradedMap::from_rows(
            r,
            GradedFreeModule::free(1, 1),
            GradedFreeModule::free(1, 0),
            0,
            vec![vec![bad]],
        );
        assert!(matches!(e, Err(AlgebraError::HomogeneityError(_))));
    }

    #[test]
    fn minimality() {
        let r = ring();
        let m = GradedFreeModule::free(1, 0);
        assert!(GradedMap::zero(r, m.clone(), m.clone(), 0).is_minimal());
        assert!(!GradedMap::identity(r, &m).is_minimal());
    }

    #[test]
    fn compose_identity_and_shape() {
        let r = ring();
        let g = GradedMap::from_rows(
            r,
            GradedFreeModule::free(2, 1),
            GradedFreeModule::free(1, 0),
            0,
            vec![vec![r.var(0), r.var(2)]],
        )
        .unwrap();
        let id = GradedMap::identity(r, &g.target);
        assert_eq!(compose(&id, &g).unwrap(), g);
        assert!(matches!(compose(&g, &g), Err(AlgebraError::ShapeError(_))));
    }
}
