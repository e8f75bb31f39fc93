//! Graded modules given as finite-dimensional pieces with the action of the
//! algebra generators, and their minimal free resolutions by degreewise
//! linear algebra.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{free_act, free_dim, graded_map_matrix, offsets, GradedAlgebra};
use crate::error::{AlgebraError, Result};
use crate::field_poly::{GradedMap, PrimeField};
use crate::linalg::{nullspace, rref, Matrix};

/// A graded vector space ⊕_{d} M_d (d from `lo`) with `ngens` operators of
/// degree +1. `ops[k][i]` maps degree `lo+k` to `lo+k+1` and has shape
/// `dims[k+1] × dims[k]` (zero rows past the top).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinModule {
    pub field: PrimeField,
    pub ngens: usize,
    pub lo: i32,
    pub dims: Vec<usize>,
    pub ops: Vec<Vec<Matrix>>,
}

impl LinModule {
    pub fn new(
        field: PrimeField,
        ngens: usize,
        lo: i32,
        dims: Vec<usize>,
        ops: Vec<Vec<Matrix>>,
    ) -> Result<Self> {
        if ops.len() != dims.len() {
            return Err(AlgebraError::ShapeError("one operator family per degree".into()));
        }
        for (k, fam) in ops.iter().enumerate() {
            if fam.len() != ngens {
                return Err(AlgebraError::ShapeError(format!(
                    "{} operators in degree {}, expected {ngens}",
                    fam.len(),
                    lo + k as i32
                )));
            }
            let next = dims.get(k + 1).copied().unwrap_or(0);
            for m in fam {
                if m.rows != next || m.cols != dims[k] {
                    return Err(AlgebraError::ShapeError(format!(
                        "operator in degree {} has shape {}x{}, expected {next}x{}",
                        lo + k as i32,
                        m.rows,
                        m.cols,
                        dims[k]
                    )));
                }
            }
        }
        Ok(LinModule {
            field,
            ngens,
            lo,
            dims,
            ops,
        })
    }

    pub fn zero(field: PrimeField, ngens: usize) -> Self {
        LinModule {
            field,
            ngens,
            lo: 0,
            dims: vec![],
            ops: vec![],
        }
    }

    /// k concentrated in degree `d` with zero action.
    pub fn residue_field(field: PrimeField, ngens: usize, d: i32) -> Self {
        LinModule {
            field,
            ngens,
            lo: d,
            dims: vec![1],
            ops: vec![vec![Matrix::zeros(0, 1); ngens]],
        }
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.dims.len() as i32 - 1
    }

    pub fn dim(&self, d: i32) -> usize {
        if d < self.lo || d > self.hi() {
            0
        } else {
            self.dims[(d - self.lo) as usize]
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Operator i from degree d to d+1 (an empty matrix of the right shape
    /// outside the support).
    pub fn op(&self, i: usize, d: i32) -> Matrix {
        if d < self.lo || d > self.hi() {
            return Matrix::zeros(self.dim(d + 1), self.dim(d));
        }
        self.ops[(d - self.lo) as usize][i].clone()
    }

    pub fn op_ref(&self, i: usize, d: i32) -> Option<&Matrix> {
        if d < self.lo || d > self.hi() {
            None
        } else {
            Some(&self.ops[(d - self.lo) as usize][i])
        }
    }

    pub fn apply(&self, i: usize, d: i32, v: &[u32]) -> Vec<u32> {
        match self.op_ref(i, d) {
            Some(m) => m.mul_vec(v, self.field),
            None => vec![0; self.dim(d + 1)],
        }
    }

    /// Drop zero pieces at both ends.
    pub fn trimmed(&self) -> LinModule {
        let first = self.dims.iter().position(|&d| d > 0);
        let Some(first) = first else {
            return LinModule::zero(self.field, self.ngens);
        };
        let last = self.dims.iter().rposition(|&d| d > 0).unwrap();
        let mut ops: Vec<Vec<Matrix>> = self.ops[first..=last].to_vec();
        let n = ops.len();
        for m in ops[n - 1].iter_mut() {
            *m = Matrix::zeros(0, m.cols);
        }
        LinModule {
            field: self.field,
            ngens: self.ngens,
            lo: self.lo + first as i32,
            dims: self.dims[first..=last].to_vec(),
            ops,
        }
    }

    /// Relations for exterior modules: e_i^2 = 0 and e_i e_j + e_j e_i = 0.
    pub fn check_anticommute(&self) -> bool {
        self.check_relations(true)
    }

    /// Relations for polynomial modules: x_i x_j = x_j x_i.
    pub fn check_commute(&self) -> bool {
        self.check_relations(false)
    }

    fn check_relations(&self, anti: bool) -> bool {
        let f = self.field;
        for d in self.lo..self.hi() {
            for i in 0..self.ngens {
                for j in i..self.ngens {
                    let a = self.op(j, d + 1).mul(&self.op(i, d), f);
                    let b = self.op(i, d + 1).mul(&self.op(j, d), f);
                    let ok = if anti {
                        a.add(&b, f).is_zero()
                    } else {
                        i == j || a == b
                    };
                    if !ok {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// k-dual: degrees negated, operators transposed.
    pub fn dual(&self) -> LinModule {
        if self.dims.is_empty() {
            return self.clone();
        }
        let hi = self.hi();
        let n = self.dims.len();
        let dims: Vec<usize> = self.dims.iter().rev().copied().collect();
        let mut ops = Vec::with_capacity(n);
        for k in 0..n {
            // new degree -hi + k corresponds to old degree hi - k; the dual
            // operator goes from old degree hi-k to hi-k-1 transposed.
            let old = hi - k as i32;
            let fam: Vec<Matrix> = (0..self.ngens)
                .map(|i| {
                    if old - 1 < self.lo {
                        Matrix::zeros(0, self.dim(old))
                    } else {
                        self.op(i, old - 1).transpose()
                    }
                })
                .collect();
            ops.push(fam);
        }
        LinModule {
            field: self.field,
            ngens: self.ngens,
            lo: -hi,
            dims,
            ops,
        }
    }

    /// Restrict the action to the first `p` operators.
    pub fn restrict_ops(&self, p: usize) -> LinModule {
        LinModule {
            field: self.field,
            ngens: p,
            lo: self.lo,
            dims: self.dims.clone(),
            ops: self.ops.iter().map(|fam| fam[..p].to_vec()).collect(),
        }
    }

    /// Shift degrees by s.
    pub fn shifted(&self, s: i32) -> LinModule {
        let mut m = self.clone();
        m.lo += s;
        m
    }

    pub fn direct_sum(&self, other: &LinModule) -> LinModule {
        assert_eq!(self.ngens, other.ngens);
        if self.dims.is_empty() {
            return other.clone();
        }
        if other.dims.is_empty() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let dims: Vec<usize> = (lo..=hi).map(|d| self.dim(d) + other.dim(d)).collect();
        let ops = (lo..=hi)
            .map(|d| {
                (0..self.ngens)
                    .map(|i| {
                        let a = self.op(i, d);
                        let b = other.op(i, d);
                        let rows = if d == hi { 0 } else { a.rows + b.rows };
                        let mut m = Matrix::zeros(rows, a.cols + b.cols);
                        if d < hi {
                            for r in 0..a.rows {
                                for c in 0..a.cols {
                                    m.set(r, c, a.get(r, c));
                                }
                            }
                            for r in 0..b.rows {
                                for c in 0..b.cols {
                                    m.set(a.rows + r, a.cols + c, b.get(r, c));
                                }
                            }
                        }
                        m
                    })
                    .collect()
            })
            .collect();
        LinModule {
            field: self.field,
            ngens: self.ngens,
            lo,
            dims,
            ops,
        }
    }

    /// Minimal generators: per degree, standard basis vectors not in the span
    /// of the images of lower degrees. Returns (degree, vector) pairs.
    pub fn minimal_generators(&self) -> Vec<(i32, Vec<u32>)> {
        let mut out = Vec::new();
        for d in self.lo..=self.hi() {
            let n = self.dim(d);
            if n == 0 {
                continue;
            }
            let cols = self.image_columns(d);
            for k in complement_units(self.field, n, &cols) {
                let mut v = vec![0; n];
                v[k] = 1;
                out.push((d, v));
            }
        }
        out
    }

    /// Columns spanning (m·M)_d.
    fn image_columns(&self, d: i32) -> Vec<Vec<u32>> {
        let mut cols = Vec::new();
        if let Some(fam) = self.ops.get((d - 1 - self.lo) as usize) {
            if d - 1 >= self.lo {
                for m in fam {
                    for c in 0..m.cols {
                        cols.push(m.column(c));
                    }
                }
            }
        }
        cols
    }

    /// Submodule generated by the given homogeneous vectors, with the
    /// inclusion bases (columns in ambient coordinates) per degree.
    pub fn submodule(&self, gens: &[(i32, Vec<u32>)]) -> (LinModule, Vec<Matrix>) {
        let f = self.field;
        let (lo, hi) = (self.lo, self.hi());
        let mut bases: Vec<Matrix> = Vec::new();
        let mut prev: Option<Matrix> = None;
        for d in lo..=hi {
            let n = self.dim(d);
            let mut cols: Vec<Vec<u32>> = gens
                .iter()
                .filter(|(g, _)| *g == d)
                .map(|(_, v)| v.clone())
                .collect();
            if let Some(p) = &prev {
                for i in 0..self.ngens {
                    let img = self.op(i, d - 1).mul(p, f);
                    for c in 0..img.cols {
                        cols.push(img.column(c));
                    }
                }
            }
            let b = column_basis(f, n, &cols);
            prev = Some(b.clone());
            bases.push(b);
        }
        let m = self.induced(&bases);
        (m, bases)
    }

    /// Module structure on a family of invariant subspaces (basis columns),
    /// assumed stable under the operators.
    fn induced(&self, bases: &[Matrix]) -> LinModule {
        let f = self.field;
        let (lo, hi) = (self.lo, self.hi());
        let dims: Vec<usize> = bases.iter().map(|b| b.cols).collect();
        let ops = (lo..=hi)
            .map(|d| {
                let k = (d - lo) as usize;
                (0..self.ngens)
                    .map(|i| {
                        if d == hi {
                            return Matrix::zeros(0, dims[k]);
                        }
                        let img = self.op(i, d).mul(&bases[k], f);
                        express_in(f, &bases[k + 1], &img)
                            .expect("subspace not stable under the action")
                    })
                    .collect()
            })
            .collect();
        LinModule {
            field: f,
            ngens: self.ngens,
            lo,
            dims,
            ops,
        }
    }

    /// Quotient by an invariant subspace family (basis columns per degree,
    /// aligned with `self.lo..=self.hi()`). Returns the quotient and the
    /// projection matrices.
    pub fn quotient(&self, sub: &[Matrix]) -> (LinModule, Vec<Matrix>) {
        let f = self.field;
        let (lo, hi) = (self.lo, self.hi());
        let mut projs = Vec::new();
        let mut dims = Vec::new();
        for d in lo..=hi {
            let k = (d - lo) as usize;
            let p = quotient_projection(f, self.dim(d), &sub[k]);
            dims.push(p.rows);
            projs.push(p);
        }
        // lift of quotient basis: unit vectors at the non-pivot coordinates
        let ops = (lo..=hi)
            .map(|d| {
                let k = (d - lo) as usize;
                (0..self.ngens)
                    .map(|i| {
                        if d == hi {
                            return Matrix::zeros(0, dims[k]);
                        }
                        let lift = section(&projs[k]);
                        let img = self.op(i, d).mul(&lift, f);
                        projs[k + 1].mul(&img, f)
                    })
                    .collect()
            })
            .collect();
        (
            LinModule {
                field: f,
                ngens: self.ngens,
                lo,
                dims,
                ops,
            },
            projs,
        )
    }

    /// Cokernel of a polynomial map into a free module over a polynomial or
    /// quotient algebra, through degree `alg.top` (plus the free module
    /// degrees). Degrees run from the smallest target degree to `hi`.
    pub fn coker(alg: &GradedAlgebra, pres: &GradedMap, hi: i32) -> LinModule {
        let tgt = &pres.target.degrees;
        let lo = tgt.iter().copied().min().unwrap_or(0);
        coker_with(alg, tgt, lo, hi, |d, n| {
            if pres.ncols() > 0 {
                graded_map_matrix(alg, pres, d - pres.degree_shift)
            } else {
                Matrix::zeros(n, 0)
            }
        })
        .0
    }

    /// Cokernel of a map of free modules over any of the algebras, in
    /// degrees `lo..=hi`, with the projections from the free module.
    pub fn coker_free(alg: &GradedAlgebra, map: &FreeMap, lo: i32, hi: i32) -> (LinModule, Vec<Matrix>) {
        let mats = map.matrices(alg, lo, hi);
        coker_with(alg, &map.target, lo, hi, |d, _| mats[(d - lo) as usize].clone())
    }
}

fn coker_with(
    alg: &GradedAlgebra,
    tgt: &[i32],
    lo: i32,
    hi: i32,
    image: impl Fn(i32, usize) -> Matrix,
) -> (LinModule, Vec<Matrix>) {
    let f = alg.field;
    let mut projs = Vec::new();
    for d in lo..=hi {
        let n = free_dim(alg, tgt, d);
        let img = image(d, n);
        let cols: Vec<Vec<u32>> = (0..img.cols).map(|c| img.column(c)).collect();
        let sub = column_basis(f, n, &cols);
        projs.push(quotient_projection(f, n, &sub));
    }
    let dims: Vec<usize> = projs.iter().map(|p| p.rows).collect();
    let ops = (lo..=hi)
        .map(|d| {
            let k = (d - lo) as usize;
            (0..alg.ngens)
                .map(|i| {
                    if d == hi {
                        return Matrix::zeros(0, dims[k]);
                    }
                    let lift = section(&projs[k]);
                    let mut out = Matrix::zeros(dims[k + 1], dims[k]);
                    for c in 0..lift.cols {
                        let v = free_act(alg, tgt, d, i, &lift.column(c));
                        let w = projs[k + 1].mul_vec(&v, f);
                        for (r, x) in w.into_iter().enumerate() {
                            out.set(r, c, x);
                        }
                    }
                    out
                })
                .collect()
        })
        .collect();
    (
        LinModule {
            field: f,
            ngens: alg.ngens,
            lo,
            dims,
            ops,
        },
        projs,
    )
}

/// Indices k such that the unit vectors e_k complete the span of `cols`.
pub fn complement_units(f: PrimeField, n: usize, cols: &[Vec<u32>]) -> Vec<usize> {
    if cols.is_empty() {
        return (0..n).collect();
    }
    let mut m = Matrix::from_rows(cols.len(), n, cols.to_vec());
    let piv = rref(&mut m, f);
    let mut is_piv = vec![false; n];
    for p in piv {
        is_piv[p] = true;
    }
    (0..n).filter(|&k| !is_piv[k]).collect()
}

/// Basis (as columns, in reduced echelon form) of the span of `cols`.
pub fn column_basis(f: PrimeField, n: usize, cols: &[Vec<u32>]) -> Matrix {
    if cols.is_empty() {
        return Matrix::zeros(n, 0);
    }
    let mut m = Matrix::from_rows(cols.len(), n, cols.to_vec());
    let piv = rref(&mut m, f);
    let r = piv.len();
    let mut b = Matrix::zeros(n, r);
    for k in 0..r {
        for i in 0..n {
            b.set(i, k, m.get(k, i));
        }
    }
    b
}

/// Projection onto the quotient by the column span of `sub` (given in RREF
/// columns as produced by `column_basis`), in coordinates indexed by the
/// non-pivot positions.
pub fn quotient_projection(f: PrimeField, n: usize, sub: &Matrix) -> Matrix {
    // pivots of the RREF rows (columns of sub)
    let mut pivots = Vec::new();
    for k in 0..sub.cols {
        let p = (0..n).find(|&i| sub.get(i, k) != 0).unwrap();
        pivots.push(p);
    }
    let mut is_piv = vec![false; n];
    for &p in &pivots {
        is_piv[p] = true;
    }
    let keep: Vec<usize> = (0..n).filter(|&i| !is_piv[i]).collect();
    // v ↦ v - Σ v[p_k] sub_k, then read the kept coordinates
    let mut proj = Matrix::zeros(keep.len(), n);
    for (r, &i) in keep.iter().enumerate() {
        proj.set(r, i, 1);
    }
    for (k, &p) in pivots.iter().enumerate() {
        for (r, &i) in keep.iter().enumerate() {
            let s = sub.get(i, k);
            if s != 0 {
                proj.set(r, p, f.neg(s));
            }
        }
    }
    proj
}

/// A right inverse of a projection built by `quotient_projection`: unit
/// vectors at the kept coordinates.
fn section(proj: &Matrix) -> Matrix {
    let mut s = Matrix::zeros(proj.cols, proj.rows);
    for r in 0..proj.rows {
        // the kept coordinate is the unique column with a 1 whose column is a unit column
        let i = (0..proj.cols)
            .find(|&c| proj.get(r, c) == 1 && (0..proj.rows).all(|rr| rr == r || proj.get(rr, c) == 0))
            .unwrap();
        s.set(i, r, 1);
    }
    s
}

/// Coordinates of the columns of `img` in the column basis `basis`.
pub fn express_in(f: PrimeField, basis: &Matrix, img: &Matrix) -> Option<Matrix> {
    if basis.cols == 0 {
        return if img.is_zero() {
            Some(Matrix::zeros(0, img.cols))
        } else {
            None
        };
    }
    crate::linalg::solve(basis, img, f)
}

/// A map between free modules over a graded algebra, given by the images of
/// the source generators (vectors in the target at the generator degree).
#[derive(Clone, Debug)]
pub struct FreeMap {
    pub source: Vec<i32>,
    pub target: Vec<i32>,
    pub images: Vec<Vec<u32>>,
}

impl FreeMap {
    /// Matrices in all degrees `lo..=hi` (columns = source basis at d, rows =
    /// target basis at d).
    pub fn matrices(&self, alg: &GradedAlgebra, lo: i32, hi: i32) -> Vec<Matrix> {
        let mut out: Vec<Matrix> = Vec::new();
        let mut prev_cols: Vec<Vec<Vec<u32>>> = vec![Vec::new(); self.source.len()];
        for d in lo..=hi {
            let tn = free_dim(alg, &self.target, d);
            let mut cols_d: Vec<Vec<Vec<u32>>> = Vec::with_capacity(self.source.len());
            for (g, &a) in self.source.iter().enumerate() {
                let k = d - a;
                let n = alg.dim(k);
                let mut cg = Vec::with_capacity(n);
                if k == 0 {
                    cg.push(self.images[g].clone());
                } else if n > 0 {
                    for idx in 0..n {
                        let (i, j) = alg.factor(k, idx);
                        cg.push(free_act(alg, &self.target, d - 1, i, &prev_cols[g][j]));
                    }
                }
                cols_d.push(cg);
            }
            let all: Vec<Vec<u32>> = cols_d.iter().flatten().cloned().collect();
            let m = if all.is_empty() {
                Matrix::zeros(tn, 0)
            } else {
                Matrix::from_columns(tn, &all)
            };
            out.push(m);
            prev_cols = cols_d;
        }
        out
    }
}

/// Minimal free resolution of a `LinModule` over a graded algebra.
#[derive(Clone, Debug)]
pub struct LinResolution {
    pub alg: Arc<GradedAlgebra>,
    /// Generator degrees of F_0, F_1, ...
    pub gens: Vec<Vec<i32>>,
    /// Images of the generators of F_0 in the module.
    pub cover: Vec<Vec<u32>>,
    /// maps[i]: F_{i+1} → F_i.
    pub maps: Vec<FreeMap>,
    /// Degrees considered (truncation).
    pub max_degree: i32,
}

impl LinResolution {
    /// β_{i,j}: generators of F_i in degree j.
    pub fn betti(&self) -> Vec<Vec<(i32, usize)>> {
        self.gens
            .iter()
            .map(|g| {
                let mut v: Vec<(i32, usize)> = Vec::new();
                for &d in g {
                    match v.last_mut() {
                        Some((dd, n)) if *dd == d => *n += 1,
                        _ => v.push((d, 1)),
                    }
                }
                v
            })
            .collect()
    }

    pub fn totals(&self) -> Vec<usize> {
        self.gens.iter().map(|g| g.len()).collect()
    }
}

/// Subspace Z_d of an ambient space, given by a basis whose coordinates are
/// read at `free` positions.
struct Layer {
    basis: Matrix,
    free: Vec<usize>,
}

/// Minimal free resolution of `m` over `alg` with `length` maps, through
/// degree `max_degree` (used only when the algebra is truncated).
pub fn lin_resolve(
    alg: &Arc<GradedAlgebra>,
    m: &LinModule,
    length: usize,
    max_degree: i32,
) -> LinResolution {
    let f = alg.field;
    let m = m.trimmed();
    let mut gens: Vec<Vec<i32>> = Vec::new();
    let mut maps: Vec<FreeMap> = Vec::new();
    if m.dims.is_empty() {
        return LinResolution {
            alg: alg.clone(),
            gens: vec![vec![]; length + 1],
            cover: vec![],
            maps: (0..length)
                .map(|_| FreeMap {
                    source: vec![],
                    target: vec![],
                    images: vec![],
                })
                .collect(),
            max_degree,
        };
    }
    let span_hi = |gdeg: &[i32], base_hi: i32| -> i32 {
        let top = if alg.truncated {
            max_degree
        } else {
            gdeg.iter().copied().max().unwrap_or(base_hi) + alg.top
        };
        top.max(base_hi).min(if alg.truncated { max_degree } else { i32::MAX })
    };

    // level 0: cover the module itself
    let lo = m.lo;
    let mhi = m.hi().min(if alg.truncated { max_degree } else { i32::MAX });
    let mut cover: Vec<Vec<u32>> = Vec::new();
    let mut g0: Vec<i32> = Vec::new();
    let mut kernels: Vec<Layer> = Vec::new();
    {
        let mut cols_prev: Vec<Vec<u32>> = Vec::new(); // columns of F_0 at d-1 in M coords
        let mut hi = mhi;
        let mut d = lo;
        while d <= hi {
            let n = m.dim(d);
            // old columns: act on previous degree columns
            let mut cols: Vec<Vec<u32>> = Vec::new();
            let mut layout: Vec<(usize, usize)> = Vec::new(); // (gen, algebra idx)
            for (g, &a) in g0.iter().enumerate() {
                let k = d - a;
                for idx in 0..alg.dim(k) {
                    let (i, j) = alg.factor(k, idx);
                    let src = col_index(alg, &g0, d - 1, g, j);
                    cols.push(m.apply(i, d - 1, &cols_prev[src]));
                    layout.push((g, idx));
                }
            }
            let new = complement_units(f, n, &cols);
            for k in new {
                let mut v = vec![0u32; n];
                v[k] = 1;
                cover.push(v.clone());
                g0.push(d);
                cols.push(v);
            }
            // kernel of F_0,d → M_d
            let fd = cols.len();
            let layer = if fd == 0 {
                Layer {
                    basis: Matrix::zeros(0, 0),
                    free: vec![],
                }
            } else {
                let p = Matrix::from_columns(n, &cols);
                let ns = nullspace(&p, f);
                Layer {
                    basis: ns.basis,
                    free: ns.free,
                }
            };
            kernels.push(layer);
            cols_prev = cols;
            hi = span_hi(&g0, mhi);
            d += 1;
        }
        gens.push(g0.clone());
    }
    let zlo = lo;
    // levels 1..=length
    for _level in 0..length {
        let prev_gens = gens.last().unwrap().clone();
        let mut g: Vec<i32> = Vec::new();
        let mut images: Vec<Vec<u32>> = Vec::new();
        let mut new_kernels: Vec<Layer> = Vec::new();
        let mut cols_prev: Vec<Vec<u32>> = Vec::new();
        let zhi = zlo + kernels.len() as i32 - 1;
        let mut hi = zhi;
        let mut d = zlo;
        while d <= hi {
            let z = if d <= zhi {
                Some(&kernels[(d - zlo) as usize])
            } else {
                None
            };
            let amb_n = free_dim(alg, &prev_gens, d);
            let mut cols: Vec<Vec<u32>> = Vec::new();
            for (gi, &a) in g.iter().enumerate() {
                let k = d - a;
                for idx in 0..alg.dim(k) {
                    let (i, j) = alg.factor(k, idx);
                    let src = col_index(alg, &g, d - 1, gi, j);
                    cols.push(free_act(alg, &prev_gens, d - 1, i, &cols_prev[src]));
                }
            }
            let zn = z.map(|z| z.free.len()).unwrap_or(0);
            let restrict = |v: &Vec<u32>| -> Vec<u32> {
                z.map(|z| z.free.iter().map(|&c| v[c]).collect())
                    .unwrap_or_default()
            };
            let zcols: Vec<Vec<u32>> = cols.par_iter().map(restrict).collect();
            if zn > 0 {
                let z = z.unwrap();
                for k in complement_units(f, zn, &zcols) {
                    let v = z.basis.row(k).to_vec();
                    debug_assert_eq!(v.len(), amb_n);
                    images.push(v.clone());
                    g.push(d);
                    cols.push(v);
                }
            }
            let fd = cols.len();
            let layer = if fd == 0 {
                Layer {
                    basis: Matrix::zeros(0, 0),
                    free: vec![],
                }
            } else {
                let zc: Vec<Vec<u32>> = cols.iter().map(restrict).collect();
                let p = if zn == 0 {
                    Matrix::zeros(0, fd)
                } else {
                    Matrix::from_columns(zn, &zc)
                };
                let ns = nullspace(&p, f);
                Layer {
                    basis: ns.basis,
                    free: ns.free,
                }
            };
            new_kernels.push(layer);
            cols_prev = cols;
            hi = span_hi(&g, zhi);
            d += 1;
        }
        maps.push(FreeMap {
            source: g.clone(),
            target: prev_gens,
            images,
        });
        gens.push(g);
        kernels = new_kernels;
    }
    LinResolution {
        alg: alg.clone(),
        gens,
        cover,
        maps,
        max_degree,
    }
}

/// Position of the column for (generator g, algebra basis idx) in the
/// degree-d column list of a free module with generator degrees `degs`.
#[inline]
fn col_index(alg: &GradedAlgebra, degs: &[i32], d: i32, g: usize, idx: usize) -> usize {
    let (off, _) = offsets(alg, degs, d);
    off[g] + idx
}

/// Basis of Hom(A, B) (degree-preserving module maps), each as a list of
/// matrices per degree of A.
pub fn hom_space(a: &LinModule, b: &LinModule) -> Vec<Vec<Matrix>> {
    let f = a.field;
    assert_eq!(a.ngens, b.ngens);
    let (lo, hi) = (a.lo, a.hi());
    // unknown blocks X_d: dim B_d × dim A_d, row-major, concatenated
    let mut offs = Vec::new();
    let mut n = 0;
    for d in lo..=hi {
        offs.push(n);
        n += a.dim(d) * b.dim(d);
    }
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for d in lo..hi {
        let (ad, bd1) = (a.dim(d), b.dim(d + 1));
        let (ad1, bd) = (a.dim(d + 1), b.dim(d));
        if ad == 0 || bd1 == 0 {
            continue;
        }
        for i in 0..a.ngens {
            let opa = a.op(i, d); // ad1 × ad
            let opb = b.op(i, d); // bd1 × bd
            // X_{d+1} opa - opb X_d = 0, entry (r, c): r < bd1, c < ad
            for r in 0..bd1 {
                for c in 0..ad {
                    let mut row = vec![0u32; n];
                    let o1 = offs[(d + 1 - lo) as usize];
                    for t in 0..ad1 {
                        let v = opa.get(t, c);
                        if v != 0 {
                            row[o1 + r * ad1 + t] = f.add(row[o1 + r * ad1 + t], v);
                        }
                    }
                    let o0 = offs[(d - lo) as usize];
                    for t in 0..bd {
                        let v = opb.get(r, t);
                        if v != 0 {
                            row[o0 + t * ad + c] = f.sub(row[o0 + t * ad + c], v);
                        }
                    }
                    if row.iter().any(|&x| x != 0) {
                        rows.push(row);
                    }
                }
            }
        }
    }
    let sys = if rows.is_empty() {
        Matrix::zeros(0, n)
    } else {
        Matrix::from_rows(rows.len(), n, rows)
    };
    let ns = nullspace(&sys, f);
    (0..ns.basis.rows)
        .map(|k| {
            let v = ns.basis.row(k);
            (lo..=hi)
                .map(|d| {
                    let (ad, bd) = (a.dim(d), b.dim(d));
                    let o = offs[(d - lo) as usize];
                    let mut m = Matrix::zeros(bd, ad);
                    m.data.copy_from_slice(&v[o..o + ad * bd]);
                    m
                })
                .collect()
        })
        .collect()
}

/// Search for an isomorphism A → B: a seeded random element of Hom(A, B)
/// that is invertible in every degree. Returns its per-degree matrices.
pub fn find_isomorphism(a: &LinModule, b: &LinModule, seed: u64) -> Option<Vec<Matrix>> {
    let a = a.trimmed();
    let b = b.trimmed();
    if a.lo != b.lo || a.dims != b.dims {
        return None;
    }
    let f = a.field;
    let basis = hom_space(&a, &b);
    if basis.is_empty() {
        return if a.dims.is_empty() { Some(vec![]) } else { None };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..8 {
        let coeffs: Vec<u32> = (0..basis.len()).map(|_| rng.gen_range(0..f.p())).collect();
        let phi: Vec<Matrix> = (0..a.dims.len())
            .map(|k| {
                let mut acc = Matrix::zeros(b.dims[k], a.dims[k]);
                for (c, h) in coeffs.iter().zip(&basis) {
                    if *c != 0 {
                        acc = acc.add(&h[k].scale(*c, f), f);
                    }
                }
                acc
            })
            .collect();
        if phi.iter().all(|m| m.rows == 0 || m.rank(f) == m.rows) {
            return Some(phi);
        }
    }
    None
}

/// Whether φ: A → B (per-degree matrices) intertwines the operators.
pub fn is_module_map(a: &LinModule, b: &LinModule, phi: &[Matrix]) -> bool {
    let f = a.field;
    for d in a.lo..a.hi() {
        let k = (d - a.lo) as usize;
        for i in 0..a.ngens {
            let lhs = phi[k + 1].mul(&a.op(i, d), f);
            let rhs = b.op(i, d).mul(&phi[k], f);
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    /// E itself as a module over E.
    pub(crate) fn exterior_free(c: usize) -> (Arc<GradedAlgebra>, LinModule) {
        let e = GradedAlgebra::exterior(fp(), c);
        let dims: Vec<usize> = (0..=c as i32).map(|d| e.dim(d)).collect();
        let ops = (0..=c as i32)
            .map(|d| {
                (0..c)
                    .map(|i| {
                        let mut m = Matrix::zeros(e.dim(d + 1), e.dim(d));
                        if d < c as i32 {
                            for idx in 0..e.dim(d) {
                                for &(t, v) in e.mul_gen(d, i, idx) {
                                    m.set(t as usize, idx, v);
                                }
                            }
                        }
                        m
                    })
                    .collect()
            })
            .collect();
        let m = LinModule::new(fp(), c, 0, dims, ops).unwrap();
        (e, m)
    }

    #[test]
    fn free_module_has_length_zero() {
        let (e, m) = exterior_free(3);
        assert!(m.check_anticommute());
        let r = lin_resolve(&e, &m, 2, 10);
        assert_eq!(r.totals(), vec![1, 0, 0]);
    }

    #[test]
    fn residue_field_over_exterior_is_priddy() {
        let e = GradedAlgebra::exterior(fp(), 3);
        let k = LinModule::residue_field(fp(), 3, 0);
        let r = lin_resolve(&e, &k, 5, 10);
        let want: Vec<usize> = (0..=5).map(|i| (i + 2) * (i + 1) / 2).collect();
        assert_eq!(r.totals(), want);
        // linear: generators of F_i in degree i
        for (i, g) in r.gens.iter().enumerate() {
            assert!(g.iter().all(|&d| d == i as i32));
        }
    }

    #[test]
    fn dual_of_free_is_free_shifted() {
        let (e, m) = exterior_free(2);
        let d = m.dual();
        assert_eq!(d.lo, -2);
        assert!(d.check_anticommute());
        let r = lin_resolve(&e, &d, 1, 10);
        assert_eq!(r.totals(), vec![1, 0]);
        assert_eq!(r.gens[0], vec![-2]);
    }

    #[test]
    fn isomorphism_found_for_sign_twisted_copy() {
        let (_, m) = exterior_free(2);
        let mut tw = m.clone();
        for fam in tw.ops.iter_mut() {
            for op in fam.iter_mut() {
                *op = op.neg(fp());
            }
        }
        let phi = find_isomorphism(&m, &tw, 7).unwrap();
        assert!(is_module_map(&m, &tw, &phi));
        let k = LinModule::residue_field(fp(), 2, 0);
        assert!(find_isomorphism(&m, &k, 7).is_none());
    }
}
