//! Minimal graded free resolutions over S and S/I, syzygy modules and
//! Betti tables.
//!
//! Finite-length modules (and every module over an artinian quotient) are
//! resolved degreewise by linear algebra; everything else goes through
//! Gröbner kernels followed by cancellation of unit entries.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{vector_to_polys, GradedAlgebra};
use crate::complexes::{reduce_map, ChainComplex};
use crate::error::{AlgebraError, Result};
use crate::field_poly::{GradedFreeModule, GradedMap, Polynomial, Ring};
use crate::groebner::{buchberger, hilbert_function, kernel, ModuleOrder, QuotientRing};
use crate::linmod::{lin_resolve, LinModule, LinResolution};

/// A graded module given as the cokernel of a map of free modules, over S
/// or over S/I.
#[derive(Clone, Debug)]
pub struct ModulePresentation {
    pub ring: Ring,
    pub quotient: Option<QuotientRing>,
    pub presentation: GradedMap,
}

impl ModulePresentation {
    pub fn new(ring: Ring, quotient: Option<QuotientRing>, presentation: GradedMap) -> Result<Self> {
        if presentation.ring != ring {
            return Err(AlgebraError::RingMismatch("presentation".into()));
        }
        if !presentation.is_zero() && presentation.degree_shift != 0 {
            return Err(AlgebraError::HomogeneityError(
                "presentation must be degree preserving".into(),
            ));
        }
        let presentation = reduce_map(quotient.as_ref(), &presentation);
        Ok(ModulePresentation {
            ring,
            quotient,
            presentation,
        })
    }

    /// k = A/(x_1,…,x_n).
    pub fn residue_field(ring: Ring, quotient: Option<QuotientRing>) -> Self {
        let n = ring.nvars;
        let cols = (0..n).map(|i| vec![(0, ring.var(i))]).collect();
        let pres = GradedMap::new(
            ring,
            GradedFreeModule::free(n, 1),
            GradedFreeModule::free(1, 0),
            0,
            cols,
        )
        .expect("variables are linear forms");
        ModulePresentation {
            ring,
            quotient,
            presentation: pres,
        }
    }

    /// Cokernel of a matrix given by rows, with target generators in
    /// degree 0 and source degrees inferred from the entries.
    pub fn cokernel_of_rows(
        ring: Ring,
        quotient: Option<QuotientRing>,
        target: GradedFreeModule,
        rows: Vec<Vec<Polynomial>>,
    ) -> Result<Self> {
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.len() != target.rank() || rows.iter().any(|r| r.len() != ncols) {
            return Err(AlgebraError::ShapeError("ragged presentation matrix".into()));
        }
        let cols: Vec<Vec<(usize, Polynomial)>> = (0..ncols)
            .map(|j| {
                rows.iter()
                    .enumerate()
                    .filter(|(_, r)| !r[j].is_zero())
                    .map(|(i, r)| (i, r[j].clone()))
                    .collect()
            })
            .collect();
        let pres = GradedMap::infer_source(ring, target, cols, 0)?;
        Self::new(ring, quotient, pres)
    }

    /// The same module viewed over S: the presentation gains the columns
    /// f_j·e_g for every generator g and every f_j in I.
    pub fn over_s(&self) -> Result<ModulePresentation> {
        let Some(q) = &self.quotient else {
            return Ok(self.clone());
        };
        let pres = &self.presentation;
        let tgt = pres.target.clone();
        let mut cols: Vec<Vec<(usize, Polynomial)>> = pres.columns().to_vec();
        let mut degs = pres.source.degrees.clone();
        for fj in &q.ideal {
            let e = fj.degree().unwrap_or(0) as i32;
            for (g, &a) in tgt.degrees.iter().enumerate() {
                cols.push(vec![(g, fj.clone())]);
                degs.push(a + e);
            }
        }
        let map = GradedMap::new(self.ring, GradedFreeModule::new(degs), tgt, 0, cols)?;
        ModulePresentation::new(self.ring, None, map)
    }

    pub fn generators(&self) -> &GradedFreeModule {
        &self.presentation.target
    }

    fn ideal(&self) -> Option<&[Polynomial]> {
        self.quotient.as_ref().map(|q| q.ideal.as_slice())
    }

    /// Largest nonzero degree when the module has finite length.
    pub fn top_degree(&self) -> Result<Option<i32>> {
        let tgt = &self.presentation.target.degrees;
        if tgt.is_empty() {
            return Ok(None);
        }
        let gens: Vec<Vec<Polynomial>> = (0..self.presentation.ncols())
            .map(|j| self.presentation.dense_column(j))
            .collect();
        let gb = buchberger(
            self.ring,
            tgt,
            &gens,
            ModuleOrder::TopGrevlex,
            self.ideal(),
            None,
        )?;
        let leads = gb.leading_terms();
        let n = self.ring.nvars;
        let mut bound = i32::MIN;
        for (pos, &d) in tgt.iter().enumerate() {
            let mut b = d;
            for i in 0..n {
                let pure = leads
                    .iter()
                    .filter(|(m, p)| *p == pos && m.degree() == m.exp(i) && m.exp(i) > 0)
                    .map(|(m, _)| m.exp(i) as i32)
                    .min();
                match pure {
                    Some(a) => b += a - 1,
                    None => return Ok(None),
                }
            }
            bound = bound.max(b);
        }
        let h = hilbert_function(&gb, bound);
        Ok(h.iter().rev().find(|(_, &v)| v > 0).map(|(&d, _)| d))
    }

    /// The module as a finite-dimensional `LinModule` over `alg`, when the
    /// degreewise path applies. Returns the algebra, module, and the degree
    /// bound for truncated algebras.
    pub fn to_lin_module(&self) -> Result<Option<(Arc<GradedAlgebra>, LinModule, i32)>> {
        let tgt = &self.presentation.target.degrees;
        if tgt.is_empty() {
            return Ok(None);
        }
        let lo = *tgt.iter().min().unwrap();
        if let Some(q) = &self.quotient {
            if q.is_artinian() {
                let alg = GradedAlgebra::quotient(q, None)?;
                let hi = tgt.iter().max().unwrap() + alg.top;
                let m = LinModule::coker(&alg, &self.presentation, hi);
                return Ok(Some((alg, m, i32::MAX)));
            }
            return Ok(None);
        }
        let Some(top) = self.top_degree()? else {
            return Ok(None);
        };
        let bound = top + self.ring.nvars as i32 + 1;
        let alg = GradedAlgebra::polynomial(self.ring, bound - lo);
        let m = LinModule::coker(&alg, &self.presentation, top.max(lo));
        Ok(Some((alg, m, bound)))
    }
}

/// Convert a degreewise resolution to polynomial matrices.
fn lin_to_complex(
    ring: Ring,
    quotient: Option<QuotientRing>,
    res: &LinResolution,
) -> Result<ChainComplex> {
    let alg = &res.alg;
    let terms: Vec<GradedFreeModule> = res.gens.iter().map(|g| GradedFreeModule::new(g.clone())).collect();
    let mut diffs = Vec::with_capacity(res.maps.len());
    for fm in &res.maps {
        let cols = fm
            .source
            .iter()
            .zip(&fm.images)
            .map(|(&d, v)| {
                vector_to_polys(alg, &fm.target, d, v)
                    .into_iter()
                    .enumerate()
                    .filter(|(_, p)| !p.is_zero())
                    .collect()
            })
            .collect();
        diffs.push(GradedMap::new(
            ring,
            GradedFreeModule::new(fm.source.clone()),
            GradedFreeModule::new(fm.target.clone()),
            0,
            cols,
        )?);
    }
    ChainComplex::new_unchecked(ring, quotient, 0, terms, diffs)
}

/// Minimal free resolution F_0 ← F_1 ← … ← F_length of the module.
pub fn resolve(m: &ModulePresentation, length: usize) -> Result<ChainComplex> {
    if let Some((alg, lm, bound)) = m.to_lin_module()? {
        let res = lin_resolve(&alg, &lm, length, bound);
        return lin_to_complex(m.ring, m.quotient.clone(), &res);
    }
    resolve_groebner(m, length)
}

/// The degreewise resolution itself (finite-length modules only).
pub fn resolve_linear(m: &ModulePresentation, length: usize) -> Result<LinResolution> {
    match m.to_lin_module()? {
        Some((alg, lm, bound)) => Ok(lin_resolve(&alg, &lm, length, bound)),
        None => Err(AlgebraError::InvalidParameter(
            "module is not of finite length".into(),
        )),
    }
}

/// Kernel-by-kernel resolution, then cancellation of unit entries.
pub fn resolve_groebner(m: &ModulePresentation, length: usize) -> Result<ChainComplex> {
    let ring = m.ring;
    let ideal = m.ideal();
    let pres = &m.presentation;
    let keep: Vec<usize> = (0..pres.ncols()).filter(|&j| !pres.column(j).is_empty()).collect();
    let d1 = pres.select_columns(&keep);
    let mut terms = vec![d1.target.clone(), d1.source.clone()];
    let mut diffs = vec![d1];
    // one extra step so that units in the last map are cancelled too
    while diffs.len() < length + 1 {
        let last = diffs.last().unwrap();
        let k = kernel(last, ideal, None)?;
        terms.push(k.source.clone());
        diffs.push(k);
    }
    let c = ChainComplex::new_unchecked(ring, m.quotient.clone(), 0, terms, diffs)?;
    let c = minimize_complex(&c)?;
    Ok(c.truncated(length as i32))
}

/// Cancel unit entries of the differentials by Gaussian elimination until
/// the complex is minimal. The result is homotopy equivalent to the input.
pub fn minimize_complex(c: &ChainComplex) -> Result<ChainComplex> {
    let ring = c.ring;
    let f = ring.field;
    let q = c.quotient.as_ref();
    let mut degs: Vec<Vec<i32>> = c.terms.iter().map(|t| t.degrees.clone()).collect();
    // dense[k]: rows = term k, cols = term k+1
    let mut dense: Vec<Vec<Vec<Polynomial>>> = c
        .diffs
        .iter()
        .map(|d| {
            let mut rows = vec![vec![ring.zero(); d.ncols()]; d.nrows()];
            for j in 0..d.ncols() {
                for (i, p) in d.column(j) {
                    rows[*i][j] = p.clone();
                }
            }
            rows
        })
        .collect();
    let norm = |p: Polynomial| match q {
        Some(q) => q.normal_form(&p),
        None => p,
    };
    for k in 0..dense.len() {
        loop {
            let a = &dense[k];
            let pos = (0..a.len()).find_map(|r| {
                a[r].iter()
                    .position(|p| p.constant_term() != 0)
                    .map(|cidx| (r, cidx))
            });
            let Some((r, cc)) = pos else { break };
            let u_inv = f.inv(dense[k][r][cc].constant_term());
            let a = &dense[k];
            let nrows = a.len();
            let ncols = a[0].len();
            let col_c: Vec<Polynomial> = (0..nrows).map(|i| a[i][cc].clone()).collect();
            let row_r: Vec<Polynomial> = a[r].clone();
            let mut new_a = Vec::with_capacity(nrows - 1);
            for i in (0..nrows).filter(|&i| i != r) {
                let mut row = Vec::with_capacity(ncols - 1);
                for j in (0..ncols).filter(|&j| j != cc) {
                    let mut p = a[i][j].clone();
                    if !col_c[i].is_zero() && !row_r[j].is_zero() {
                        p = p.sub(&col_c[i].mul(&row_r[j]).scale(u_inv));
                    }
                    row.push(norm(p));
                }
                new_a.push(row);
            }
            dense[k] = new_a;
            // next map: drop row cc
            if k + 1 < dense.len() {
                dense[k + 1].remove(cc);
            }
            // previous map: drop column r
            if k > 0 {
                for row in dense[k - 1].iter_mut() {
                    row.remove(r);
                }
            }
            degs[k + 1].remove(cc);
            degs[k].remove(r);
            if dense[k].is_empty() || dense[k][0].is_empty() {
                break;
            }
        }
    }
    let terms: Vec<GradedFreeModule> = degs.into_iter().map(GradedFreeModule::new).collect();
    let mut diffs = Vec::with_capacity(dense.len());
    for (k, rows) in dense.into_iter().enumerate() {
        let ncols = terms[k + 1].rank();
        let mut cols: Vec<Vec<(usize, Polynomial)>> = vec![Vec::new(); ncols];
        for (i, row) in rows.into_iter().enumerate() {
            for (j, p) in row.into_iter().enumerate() {
                if !p.is_zero() {
                    cols[j].push((i, p));
                }
            }
        }
        diffs.push(GradedMap::new(ring, terms[k + 1].clone(), terms[k].clone(), 0, cols)?);
    }
    ChainComplex::new_unchecked(ring, c.quotient.clone(), c.lo, terms, diffs)
}

/// Presentation of the i-th syzygy (image of d_i, presented by d_{i+1}).
pub fn syzygy_module(m: &ModulePresentation, i: usize) -> Result<ModulePresentation> {
    if i == 0 {
        return Ok(m.clone());
    }
    let res = resolve(m, i + 1)?;
    ModulePresentation::new(m.ring, m.quotient.clone(), res.differential(i as i32 + 1))
}

/// β_{i,j}: homological degree i, internal degree j.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BettiTable {
    pub entries: BTreeMap<(i32, i32), usize>,
    /// Number of columns (homological degrees 0..len) to display.
    pub len: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BettiRowJson {
    pub slope: i32,
    pub entries: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BettiJson {
    pub rows: Vec<BettiRowJson>,
    pub total: Vec<usize>,
}

impl BettiTable {
    pub fn from_degrees(gens: &[Vec<i32>]) -> Self {
        let mut entries = BTreeMap::new();
        for (i, g) in gens.iter().enumerate() {
            for &j in g {
                *entries.entry((i as i32, j)).or_insert(0) += 1;
            }
        }
        BettiTable {
            entries,
            len: gens.len(),
        }
    }

    pub fn get(&self, i: i32, j: i32) -> usize {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn total(&self, i: i32) -> usize {
        self.entries
            .iter()
            .filter(|((ii, _), _)| *ii == i)
            .map(|(_, v)| *v)
            .sum()
    }

    pub fn totals(&self) -> Vec<usize> {
        (0..self.len as i32).map(|i| self.total(i)).collect()
    }

    /// Rows by slope s = j − i.
    pub fn row(&self, s: i32) -> Vec<usize> {
        (0..self.len as i32).map(|i| self.get(i, i + s)).collect()
    }

    pub fn slopes(&self) -> Vec<i32> {
        let mut s: Vec<i32> = self
            .entries
            .iter()
            .filter(|(_, &v)| v > 0)
            .map(|((i, j), _)| j - i)
            .collect();
        s.sort();
        s.dedup();
        s
    }

    /// Rows by slope plus totals, for JSON output.
    pub fn json_view(&self) -> BettiJson {
        BettiJson {
            rows: self
                .slopes()
                .into_iter()
                .map(|s| BettiRowJson {
                    slope: s,
                    entries: self.row(s),
                })
                .collect(),
            total: self.totals(),
        }
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let slopes = self.slopes();
        let cells = |v: &[usize], dot: bool| -> Vec<String> {
            v.iter()
                .map(|&x| if x == 0 && dot { ".".to_string() } else { x.to_string() })
                .collect()
        };
        let mut lines: Vec<(String, Vec<String>)> = Vec::new();
        lines.push((String::new(), (0..self.len).map(|i| i.to_string()).collect()));
        lines.push(("total:".into(), cells(&self.totals(), false)));
        for s in slopes {
            lines.push((format!("{s}:"), cells(&self.row(s), true)));
        }
        let lw = lines.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
        let mut cw = vec![0; self.len];
        for (_, c) in &lines {
            for (k, x) in c.iter().enumerate() {
                cw[k] = cw[k].max(x.len());
            }
        }
        for (l, c) in &lines {
            write!(f, "{l:>lw$}")?;
            for (k, x) in c.iter().enumerate() {
                write!(f, " {x:>w$}", w = cw[k])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Betti table of a minimal complex.
pub fn betti(c: &ChainComplex) -> Result<BettiTable> {
    if !c.is_minimal() {
        return Err(AlgebraError::MinimalityError(
            "differential has a unit entry".into(),
        ));
    }
    let gens: Vec<Vec<i32>> = c.terms.iter().map(|t| t.degrees.clone()).collect();
    Ok(BettiTable::from_degrees(&gens))
}
