//! Ext_R(M,k) as a module over the ring of CI operators k[χ_1..χ_c]: the
//! χ_i are the transposes of the t_{2,i} modulo the maximal ideal.

use std::sync::Arc;

use crate::algebra::{vector_to_polys, GradedAlgebra};
use crate::ci_ops::{CIOperators, LiftedResolution};
use crate::error::{AlgebraError, Result};
use crate::field_poly::{GradedFreeModule, GradedMap, Polynomial, PrimeField, Ring};
use crate::linalg::{nullspace, Matrix};
use crate::linmod::{find_isomorphism, lin_resolve, LinModule, LinResolution};
use crate::resolution::BettiTable;
use crate::tor_emodule::{infer_hmf_ranks, EModule, HmfRanks};

/// Ext_R(M,k) with χ_i: Ext^p → Ext^{p+2}.
#[derive(Clone, Debug)]
pub struct RModule {
    pub field: PrimeField,
    pub c: usize,
    /// dims[p] = β^R_p(M) for p = 0..=bound.
    pub dims: Vec<usize>,
    /// chi[i][p]: Ext^p → Ext^{p+2}, for p + 2 ≤ bound.
    pub chi: Vec<Vec<Matrix>>,
}

/// The even or odd part of Ext with χ_i in degree 1: degree j holds
/// Ext^{2j+s}.
pub type HalfGradedRModule = LinModule;

impl RModule {
    pub fn bound(&self) -> usize {
        self.dims.len() - 1
    }

    /// χ_iχ_j = χ_jχ_i wherever both composites are defined.
    pub fn check_commute(&self) -> bool {
        let f = self.field;
        for p in 0..self.dims.len().saturating_sub(4) {
            for i in 0..self.c {
                for j in i + 1..self.c {
                    let a = self.chi[i][p + 2].mul(&self.chi[j][p], f);
                    let b = self.chi[j][p + 2].mul(&self.chi[i][p], f);
                    if a != b {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Even (s = 0) or odd (s = 1) part, in half-degrees 0..=h where
    /// 2h + s ≤ bound.
    pub fn half(&self, s: usize) -> HalfGradedRModule {
        let bound = self.bound();
        let h = (bound - s) / 2;
        let dims: Vec<usize> = (0..=h).map(|j| self.dims[2 * j + s]).collect();
        let ops = (0..=h)
            .map(|j| {
                (0..self.c)
                    .map(|i| {
                        if j == h {
                            Matrix::zeros(0, dims[j])
                        } else {
                            self.chi[i][2 * j + s].clone()
                        }
                    })
                    .collect()
            })
            .collect();
        LinModule {
            field: self.field,
            ngens: self.c,
            lo: 0,
            dims,
            ops,
        }
    }
}

pub fn ext_rmodule(l: &LiftedResolution, ci: &CIOperators) -> Result<RModule> {
    let c = l.c();
    let dims: Vec<usize> = l.g.iter().map(|g| g.rank()).collect();
    let chi: Vec<Vec<Matrix>> = (0..c)
        .map(|i| {
            (0..=l.bound.saturating_sub(2))
                .map(|p| ci.get(i, p as i32 + 2).constant_part().transpose())
                .collect()
        })
        .collect();
    let m = RModule {
        field: l.ring.field,
        c,
        dims,
        chi,
    };
    if !m.check_commute() {
        return Err(AlgebraError::Internal("the χ_i do not commute".into()));
    }
    Ok(m)
}

/// The polynomial ring k[χ_1..χ_c] in standard grading.
pub fn operator_ring(field: PrimeField, c: usize) -> Result<Ring> {
    Ring::new(field, c)
}

/// Minimal ℛ-free resolution of a truncated half-graded module. Betti
/// numbers in degrees above `valid_degree` reflect the truncation.
#[derive(Clone, Debug)]
pub struct RFreeResolution {
    pub ring: Ring,
    pub resolution: LinResolution,
    pub valid_degree: i32,
}

impl RFreeResolution {
    /// Betti table restricted to trustworthy degrees.
    pub fn betti(&self) -> BettiTable {
        let gens: Vec<Vec<i32>> = self
            .resolution
            .gens
            .iter()
            .map(|g| g.iter().copied().filter(|&d| d <= self.valid_degree).collect())
            .collect();
        let mut t = BettiTable::from_degrees(&gens);
        while t.len > 1 && t.total(t.len as i32 - 1) == 0 {
            t.len -= 1;
        }
        t
    }

    /// The first map F_1 → F_0 with polynomial entries.
    pub fn presentation(&self) -> Result<GradedMap> {
        let r = &self.resolution;
        let src: Vec<i32> = r.gens.get(1).cloned().unwrap_or_default();
        let keep: Vec<usize> = (0..src.len()).filter(|&k| src[k] <= self.valid_degree).collect();
        let tgt = r.gens[0].clone();
        let cols: Vec<Vec<(usize, Polynomial)>> = keep
            .iter()
            .map(|&k| {
                vector_to_polys(&r.alg, &tgt, src[k], &r.maps[0].images[k])
                    .into_iter()
                    .enumerate()
                    .filter(|(_, p)| !p.is_zero())
                    .collect()
            })
            .collect();
        GradedMap::new(
            self.ring,
            GradedFreeModule::new(keep.iter().map(|&k| src[k]).collect()),
            GradedFreeModule::new(tgt),
            0,
            cols,
        )
    }
}

fn polynomial_algebra(u: &HalfGradedRModule, extra: i32) -> Result<(Ring, Arc<GradedAlgebra>, i32)> {
    let ring = operator_ring(u.field, u.ngens)?;
    let top = u.hi().max(u.lo) + extra;
    Ok((ring, GradedAlgebra::polynomial(ring, (top - u.lo.min(0)).max(1)), top))
}

pub fn r_free_resolution(u: &HalfGradedRModule, length: usize) -> Result<RFreeResolution> {
    let c = u.ngens as i32;
    let (ring, alg, top) = polynomial_algebra(u, c + 1)?;
    let resolution = lin_resolve(&alg, u, length, top);
    Ok(RFreeResolution {
        ring,
        resolution,
        valid_degree: u.hi(),
    })
}

/// max_i (top generator degree of F_i) − i over the trustworthy part.
pub fn r_regularity(res: &RFreeResolution) -> i32 {
    let t = res.betti();
    (0..t.len as i32)
        .filter_map(|i| {
            t.entries
                .iter()
                .filter(|((ii, _), &n)| *ii == i && n > 0)
                .map(|((_, j), _)| j - i)
                .max()
        })
        .max()
        .unwrap_or(0)
}

/// Regularity of the even (s = 0) or odd (s = 1) part with Ext^p placed
/// in degree ⌈p/2⌉, so odd generators sit in degree 1.
pub fn ext_regularity(res: &RFreeResolution, s: usize) -> i32 {
    r_regularity(res) + s as i32
}

/// Dimensions from the leading-term module for the order χ_1 ≻ … ≻ χ_c,
/// compared with the module.
#[derive(Clone, Debug)]
pub struct ExtLeadingTerms {
    /// b[p-1] for p = 1..=c+1; the last entry counts generators killed by
    /// every χ.
    pub b: Vec<usize>,
    pub leading_dims: Vec<usize>,
    pub module_dims: Vec<usize>,
    pub flag_ok: bool,
}

impl ExtLeadingTerms {
    pub fn ok(&self) -> bool {
        self.flag_ok && self.leading_dims == self.module_dims
    }
}

fn binom(n: i64, k: i64) -> usize {
    if k == 0 {
        return 1;
    }
    if k < 0 || n < k {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as usize
}

/// L_r = {u ∈ U_0 : χ_r u ∈ Σ_{j>r} χ_j U_0}; b(p) = dim L_{p-1} − dim L_p.
pub fn ext_leading_terms(u: &HalfGradedRModule) -> Result<ExtLeadingTerms> {
    let f = u.field;
    let c = u.ngens;
    if u.minimal_generators().iter().any(|(d, _)| *d != u.lo) {
        return Err(AlgebraError::GenerationError(
            "module is not generated in its lowest degree".into(),
        ));
    }
    let n = u.dim(u.lo);
    let x: Vec<Matrix> = (0..c).map(|i| u.op(i, u.lo)).collect();
    let m1 = u.dim(u.lo + 1);
    // basis matrices (columns) of L_0 ⊇ L_1 ⊇ …
    let mut ls: Vec<Matrix> = vec![Matrix::identity(n)];
    for r in 0..c {
        let mut a = x[r].clone();
        for xj in &x[r + 1..] {
            a = a.hstack(xj);
        }
        if a.rows != m1 {
            a = Matrix::zeros(m1, a.cols);
        }
        let ns = nullspace(&a, f);
        let cols: Vec<Vec<u32>> = (0..ns.basis.rows).map(|k| ns.basis.row(k)[..n].to_vec()).collect();
        let basis = if cols.is_empty() {
            Matrix::zeros(n, 0)
        } else {
            Matrix::from_columns(n, &cols)
        };
        ls.push(basis);
    }
    let dims: Vec<usize> = ls.iter().map(|m| m.rank(f)).collect();
    let mut flag_ok = true;
    for r in 1..ls.len() {
        let joint = ls[r - 1].hstack(&ls[r]).rank(f);
        if joint != dims[r - 1] {
            flag_ok = false;
        }
    }
    let b: Vec<usize> = (1..=c)
        .map(|p| dims[p - 1].saturating_sub(dims[p]))
        .chain(std::iter::once(dims[c]))
        .collect();
    let module_dims: Vec<usize> = u.dims.clone();
    let leading_dims: Vec<usize> = (0..module_dims.len() as i64)
        .map(|d| {
            (1..=c as i64 + 1)
                .map(|p| b[p as usize - 1] * binom(c as i64 - p + d, d))
                .sum()
        })
        .collect();
    Ok(ExtLeadingTerms {
        b,
        leading_dims,
        module_dims,
        flag_ok,
    })
}

/// τ: Tor_1^∨ ⊗ ℛ(−1) → Tor_0^∨ ⊗ ℛ with entries Σ_i χ_i μ_i^∨, where μ_i
/// is multiplication by e_i from Tor_0 to Tor_1. Requires the Betti
/// pattern of a high syzygy.
pub fn nonminimal_presentation(tor: &EModule, r_betti: &[usize]) -> Result<(GradedMap, HmfRanks)> {
    let c = tor.ngens;
    let ranks = infer_hmf_ranks(r_betti, c)?;
    let ring = operator_ring(tor.field, c)?;
    let lo = tor.lo;
    let n0 = tor.dim(lo);
    let n1 = tor.dim(lo + 1);
    let mu: Vec<Matrix> = (0..c).map(|i| tor.op(i, lo)).collect();
    let cols: Vec<Vec<(usize, Polynomial)>> = (0..n1)
        .map(|s| {
            (0..n0)
                .filter_map(|r| {
                    let p = (0..c).fold(ring.zero(), |acc, i| {
                        acc.add(&ring.var(i).scale(mu[i].get(s, r)))
                    });
                    (!p.is_zero()).then_some((r, p))
                })
                .collect()
        })
        .collect();
    let tau = GradedMap::new(
        ring,
        GradedFreeModule::new(vec![1; n1]),
        GradedFreeModule::new(vec![0; n0]),
        0,
        cols,
    )?;
    Ok((tau, ranks))
}

/// Hilbert function of coker(pres) in degrees 0..=hi.
pub fn coker_hilbert(pres: &GradedMap, hi: i32) -> Vec<usize> {
    coker_module(pres, hi).dims
}

fn coker_module(pres: &GradedMap, hi: i32) -> LinModule {
    let alg = GradedAlgebra::polynomial(pres.ring, hi.max(1));
    let mut m = LinModule::coker(&alg, pres, hi);
    // pad to start at degree 0
    while m.lo > 0 {
        m.lo -= 1;
        m.dims.insert(0, 0);
        m.ops.insert(0, (0..m.ngens).map(|_| Matrix::zeros(0, 0)).collect());
    }
    m
}

/// U_{≤hi} as a module.
pub fn truncate(u: &LinModule, hi: i32) -> LinModule {
    if hi >= u.hi() {
        return u.clone();
    }
    let n = (hi - u.lo + 1).max(0) as usize;
    let dims: Vec<usize> = u.dims[..n].to_vec();
    let mut ops: Vec<Vec<Matrix>> = u.ops[..n].to_vec();
    if let Some(last) = ops.last_mut() {
        for m in last.iter_mut() {
            *m = Matrix::zeros(0, m.cols);
        }
    }
    LinModule {
        field: u.field,
        ngens: u.ngens,
        lo: u.lo,
        dims,
        ops,
    }
}

/// ℛ^{free} ⊕ the maximal ideal (generated in degree 0), presented by zero
/// rows above the skew block [[0,χ1,χ2],[−χ1,0,χ3],[−χ2,−χ3,0]].
pub fn skew_block_reference(field: PrimeField, free: usize) -> Result<GradedMap> {
    let ring = operator_ring(field, 3)?;
    let x = |i: usize| ring.var(i);
    let skew = [
        [None, Some(x(0)), Some(x(1))],
        [Some(x(0).neg()), None, Some(x(2))],
        [Some(x(1).neg()), Some(x(2).neg()), None],
    ];
    let cols: Vec<Vec<(usize, Polynomial)>> = (0..3)
        .map(|j| {
            (0..3)
                .filter_map(|i| skew[i][j].clone().map(|p| (free + i, p)))
                .collect()
        })
        .collect();
    GradedMap::new(
        ring,
        GradedFreeModule::new(vec![1; 3]),
        GradedFreeModule::new(vec![0; free + 3]),
        0,
        cols,
    )
}

/// Shape of U from its minimal presentation.
#[derive(Clone, Debug)]
pub struct StructureReport {
    /// Generators not involved in any relation.
    pub free_rank: usize,
    /// Hilbert function of U minus that of its free part.
    pub nonfree_hilbert: Vec<usize>,
    /// U ≅ ℛ^{free} ⊕ 𝔪 (𝔪 generated in degree 0), when c = 3.
    pub free_plus_maximal_ideal: Option<bool>,
}

pub fn structure_report(u: &HalfGradedRModule, res: &RFreeResolution) -> Result<StructureReport> {
    let f = u.field;
    let c = u.ngens;
    let pres = res.presentation()?;
    let n0 = pres.nrows();
    // coefficient flattening: rows = generators, columns = (relation, χ_i)
    let mut flat = Matrix::zeros(n0, pres.ncols() * c);
    for (j, col) in pres.columns().iter().enumerate() {
        for (r, p) in col {
            for (m, a) in p.terms() {
                if let Some(i) = (0..c).find(|&i| m.exp(i) > 0) {
                    if m.degree() == 1 {
                        flat.set(*r, j * c + i, *a);
                    }
                }
            }
        }
    }
    let involved = flat.rank(f);
    let free_rank = n0 - involved;
    let nonfree_hilbert: Vec<usize> = u
        .dims
        .iter()
        .enumerate()
        .map(|(d, &n)| n.saturating_sub(free_rank * binom(c as i64 - 1 + d as i64, d as i64)))
        .collect();
    let free_plus_maximal_ideal = if c == 3 && involved == 3 {
        // generators in degree 0 and relations in degree 1: the truncation
        // at degree 2 already determines the module
        let top = u.hi().min(2);
        let reference = skew_block_reference(f, free_rank)?;
        let a = coker_module(&reference, top).trimmed();
        let b = truncate(u, top).trimmed();
        Some(a.dims == b.dims && find_isomorphism(&a, &b, 11).is_some())
    } else if c == 3 {
        Some(false)
    } else {
        None
    };
    Ok(StructureReport {
        free_rank,
        nonfree_hilbert,
        free_plus_maximal_ideal,
    })
}
