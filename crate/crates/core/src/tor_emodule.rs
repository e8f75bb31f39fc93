//! Tor^S(M,k) as a module over the exterior algebra E = k<e_1..e_c>:
//! the submodule T' generated in degree 0 and the quotient T'', minimal
//! E-free resolutions, regularity, leading-term dimensions, and the ranks
//! b_0(p), b_1(p) read off from Betti numbers over R.

use std::sync::Arc;

use num_rational::Ratio;

use crate::algebra::{free_dim, offsets, GradedAlgebra};
use crate::complexes::ChainComplex;
use crate::error::{AlgebraError, Result};
use crate::field_poly::Polynomial;
use crate::homotopy::{e_action_on_tor, HomotopySystem};
use crate::linalg::{nullspace, Matrix};
use crate::linmod::{
    column_basis, find_isomorphism, lin_resolve, quotient_projection, FreeMap, LinModule, LinResolution,
};
use crate::resolution::{resolve, BettiTable, ModulePresentation};

/// A finite-dimensional graded module over an exterior algebra; the
/// grading of Tor is the homological degree.
pub type EModule = LinModule;

/// Tor^S(M,k) together with the data used to build it.
#[derive(Clone, Debug)]
pub struct TorModule {
    pub module: EModule,
    pub s_resolution: ChainComplex,
    pub homotopies: HomotopySystem,
}

/// The E-module Tor^S(M,k) for M over S or R (restricted to S), with
/// e_i induced by homotopies for f_i on the minimal S-resolution.
pub fn tor_emodule_full(m: &ModulePresentation, f: &[Polynomial]) -> Result<TorModule> {
    let ms = m.over_s()?;
    let res = resolve(&ms, ms.ring.nvars)?;
    let h = HomotopySystem::new(&res, f)?;
    let t = e_action_on_tor(&h)?;
    if !t.check_anticommute() {
        return Err(AlgebraError::Internal("e-operators do not anticommute".into()));
    }
    Ok(TorModule {
        module: t,
        s_resolution: res,
        homotopies: h,
    })
}

pub fn tor_emodule(m: &ModulePresentation, f: &[Polynomial]) -> Result<EModule> {
    Ok(tor_emodule_full(m, f)?.module)
}

/// T' = E·T_0, T'' = T/T', with inclusion bases and projections per degree.
#[derive(Clone, Debug)]
pub struct TPrimeSplit {
    pub t_prime: EModule,
    pub t_double: EModule,
    pub inclusion: Vec<Matrix>,
    pub projection: Vec<Matrix>,
}

pub fn submodule_t_prime(t: &EModule) -> TPrimeSplit {
    let n0 = t.dim(t.lo);
    let gens: Vec<(i32, Vec<u32>)> = (0..n0)
        .map(|k| {
            let mut v = vec![0; n0];
            v[k] = 1;
            (t.lo, v)
        })
        .collect();
    let (tp, incl) = t.submodule(&gens);
    let (tq, proj) = t.quotient(&incl);
    TPrimeSplit {
        t_prime: tp,
        t_double: tq,
        inclusion: incl,
        projection: proj,
    }
}

/// Minimal free resolution over an exterior algebra.
#[derive(Clone, Debug)]
pub struct EFreeComplex {
    pub resolution: LinResolution,
}

impl EFreeComplex {
    pub fn betti(&self) -> BettiTable {
        BettiTable::from_degrees(&self.resolution.gens)
    }

    /// d² = 0 and exactness (rank of d_{i+1} = nullity of d_i) in every
    /// internal degree, including exactness at the module.
    pub fn verify(&self, module: &EModule) -> bool {
        let r = &self.resolution;
        let alg = &r.alg;
        let f = alg.field;
        let m = module.trimmed();
        if m.dims.is_empty() {
            return true;
        }
        let lo = m.lo;
        let hi = r
            .gens
            .iter()
            .flatten()
            .copied()
            .max()
            .unwrap_or(lo)
            .max(m.hi())
            + alg.top;
        let mats: Vec<Vec<Matrix>> = r.maps.iter().map(|fm| fm.matrices(alg, lo, hi)).collect();
        for (k, d) in (lo..=hi).enumerate() {
            let mut prev = cover_matrix(alg, &r.gens[0], &r.cover, &m, d);
            if prev.rank(f) != m.dim(d) {
                return false;
            }
            for mm in &mats {
                let dm = &mm[k];
                if !prev.mul(dm, f).is_zero() {
                    return false;
                }
                if dm.rank(f) != prev.cols - prev.rank(f) {
                    return false;
                }
                prev = dm.clone();
            }
        }
        true
    }
}

/// Matrix of F_0 → M at degree d, from the generator images.
fn cover_matrix(alg: &GradedAlgebra, gens: &[i32], cover: &[Vec<u32>], m: &LinModule, d: i32) -> Matrix {
    let mut cols: Vec<Vec<u32>> = Vec::new();
    for (g, &a) in gens.iter().enumerate() {
        let k = d - a;
        for idx in 0..alg.dim(k) {
            // basis element = e_{i1} ... e_{ik} applied to the generator image
            let mut chain = Vec::new();
            let (mut kk, mut ii) = (k, idx);
            while kk > 0 {
                let (i, j) = alg.factor(kk, ii);
                chain.push(i);
                kk -= 1;
                ii = j;
            }
            let mut v = cover[g].clone();
            let mut deg = a;
            for &i in chain.iter().rev() {
                v = m.apply(i, deg, &v);
                deg += 1;
            }
            cols.push(v);
        }
    }
    let n = m.dim(d);
    if cols.is_empty() || n == 0 {
        Matrix::zeros(n, cols.len())
    } else {
        Matrix::from_columns(n, &cols)
    }
}

pub fn exterior_for(t: &EModule) -> Arc<GradedAlgebra> {
    GradedAlgebra::exterior(t.field, t.ngens)
}

pub fn e_free_resolution(t: &EModule, length: usize) -> EFreeComplex {
    let alg = exterior_for(t);
    EFreeComplex {
        resolution: lin_resolve(&alg, t, length, i32::MAX),
    }
}

/// Regularity on a window of resolution steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regularity {
    pub reg: i32,
    /// max generator degree − i for each computed step (None if F_i = 0).
    pub per_step: Vec<Option<i32>>,
    /// The last two nonzero steps have the same value, equal to `reg`.
    pub stabilized: bool,
}

pub fn regularity_from_gens(gens: &[Vec<i32>], lo: i32) -> Regularity {
    let per_step: Vec<Option<i32>> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| g.iter().max().map(|m| m - lo - i as i32))
        .collect();
    let reg = per_step.iter().flatten().copied().max().unwrap_or(0);
    let vals: Vec<i32> = per_step.iter().flatten().copied().collect();
    let all_zero_tail = per_step.last().map(|v| v.is_none()).unwrap_or(true);
    let stabilized = all_zero_tail
        || (vals.len() >= 2 && vals[vals.len() - 1] == reg && vals[vals.len() - 2] == reg);
    Regularity {
        reg,
        per_step,
        stabilized,
    }
}

/// reg_E T = max_i (top degree of F_i − i), measured from the lowest degree
/// of T, over `window` steps.
pub fn e_regularity(t: &EModule, window: usize) -> Regularity {
    let r = e_free_resolution(t, window);
    regularity_from_gens(&r.resolution.gens, 0)
}

/// Regularity over the subalgebra E(p) = k<e_1..e_p>.
pub fn regularity_over_sub(t: &EModule, p: usize, window: usize) -> Regularity {
    e_regularity(&t.restrict_ops(p), window)
}

/// Default window: 2c + 4 steps.
pub fn default_window(c: usize) -> usize {
    2 * c + 4
}

/// Ranks b_0(p), b_1(p) for p = 1..c.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HmfRanks {
    pub b0: Vec<u64>,
    pub b1: Vec<u64>,
}

fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Σ_p C(c−p+i, c−p) b(p).
pub fn predicted_betti(b: &[u64], i: usize) -> u64 {
    let c = b.len() as i64;
    b.iter()
        .enumerate()
        .map(|(k, &bp)| {
            let p = k as i64 + 1;
            binom(c - p + i as i64, c - p) as u64 * bp
        })
        .sum()
}

fn solve_side(vals: &[u64], c: usize) -> Option<Vec<u64>> {
    if vals.len() < c {
        return None;
    }
    // rows i = 0..c-1, unknowns p = 1..c
    let mut a: Vec<Vec<Ratio<i64>>> = (0..c)
        .map(|i| {
            let mut row: Vec<Ratio<i64>> = (1..=c)
                .map(|p| Ratio::from_integer(binom((c - p + i) as i64, (c - p) as i64)))
                .collect();
            row.push(Ratio::from_integer(vals[i] as i64));
            row
        })
        .collect();
    for col in 0..c {
        let piv = (col..c).find(|&r| a[r][col] != Ratio::from_integer(0))?;
        a.swap(col, piv);
        let pv = a[col][col];
        for x in a[col].iter_mut() {
            *x /= pv;
        }
        for r in 0..c {
            if r != col && a[r][col] != Ratio::from_integer(0) {
                let factor = a[r][col];
                let src = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(src) {
                    *x -= factor * y;
                }
            }
        }
    }
    let mut out = Vec::with_capacity(c);
    for row in &a {
        let v = row[c];
        if !v.is_integer() || v < Ratio::from_integer(0) {
            return None;
        }
        out.push(*v.numer() as u64);
    }
    // the whole window must follow the pattern
    for (i, &v) in vals.iter().enumerate() {
        if predicted_betti(&out, i) != v {
            return None;
        }
    }
    Some(out)
}

/// Invert β_{2i+s} = Σ_p C(c−p+i, c−p) b_s(p) from total Betti numbers
/// over R (at least 2c of them).
pub fn infer_hmf_ranks(betti_totals: &[usize], c: usize) -> Result<HmfRanks> {
    if betti_totals.len() < 2 * c {
        return Err(AlgebraError::InvalidParameter(format!(
            "need at least {} Betti numbers, have {}",
            2 * c,
            betti_totals.len()
        )));
    }
    let even: Vec<u64> = betti_totals.iter().step_by(2).map(|&x| x as u64).collect();
    let odd: Vec<u64> = betti_totals.iter().skip(1).step_by(2).map(|&x| x as u64).collect();
    match (solve_side(&even, c), solve_side(&odd, c)) {
        (Some(b0), Some(b1)) => Ok(HmfRanks { b0, b1 }),
        _ => Err(AlgebraError::NotHighSyzygy(
            "Betti numbers do not follow the binomial pattern".into(),
        )),
    }
}

/// Dimensions of ⊕_p E/(e_p..e_c)⊗B(p) (generated in one degree), i.e.
/// Σ_p C(p−1, d) b(p) in degree d above the generators.
pub fn flag_dims(b: &[usize], len: usize) -> Vec<usize> {
    (0..len)
        .map(|d| {
            b.iter()
                .enumerate()
                .map(|(k, &bp)| binom(k as i64, d as i64) as usize * bp)
                .sum()
        })
        .collect()
}

/// Leading-term comparison for an E-module generated in a single degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingTermReport {
    /// Generating degree.
    pub degree: i32,
    /// b(p), p = 1..c, read off the flag of leading-term conditions.
    pub b: Vec<usize>,
    /// Dimensions of the leading-term module, from the generating degree up.
    pub leading_dims: Vec<usize>,
    /// Dimensions of the module itself on the same range.
    pub module_dims: Vec<usize>,
    /// The subspaces L_1 ⊂ … ⊂ L_c = T_g form a flag.
    pub flag_ok: bool,
}

impl LeadingTermReport {
    pub fn ok(&self) -> bool {
        self.flag_ok && self.leading_dims == self.module_dims
    }
}

/// With the order e_c ≻ … ≻ e_1, a generator v has leading relation
/// e_r v ≡ Σ_{j<r} e_j(…) exactly when v lies in
/// L_r = {v : e_r v ∈ Σ_{j<r} e_j T_g}. The leading-term module is
/// ⊕_p E/(e_p..e_c)⊗B(p) with b(p) = dim L_p − dim L_{p−1}.
pub fn leading_term_module(t: &EModule) -> Result<LeadingTermReport> {
    let t = t.trimmed();
    let f = t.field;
    let c = t.ngens;
    if t.dims.is_empty() {
        return Ok(LeadingTermReport {
            degree: 0,
            b: vec![0; c],
            leading_dims: vec![],
            module_dims: vec![],
            flag_ok: true,
        });
    }
    let g = t.lo;
    if t.minimal_generators().iter().any(|(d, _)| *d != g) {
        return Err(AlgebraError::GenerationError(format!(
            "module is not generated in degree {g}"
        )));
    }
    let n = t.dim(g);
    let n1 = t.dim(g + 1);
    let mut ldims = vec![0usize];
    let mut prev_basis: Option<Matrix> = None;
    let mut flag_ok = true;
    for r in 0..c {
        let mut wcols: Vec<Vec<u32>> = Vec::new();
        for j in 0..r {
            let op = t.op(j, g);
            for k in 0..op.cols {
                wcols.push(op.column(k));
            }
        }
        let w = column_basis(f, n1, &wcols);
        let proj = quotient_projection(f, n1, &w);
        let cond = proj.mul(&t.op(r, g), f);
        let ns = nullspace(&cond, f);
        let basis = ns.basis.transpose(); // n × dim L_r
        if let Some(pb) = &prev_basis {
            // L_{r-1} ⊂ L_r
            let both = pb.hstack(&basis);
            if both.rank(f) != basis.rank(f) {
                flag_ok = false;
            }
        }
        ldims.push(basis.cols);
        prev_basis = Some(basis);
    }
    if ldims[c] != n {
        flag_ok = false;
    }
    let b: Vec<usize> = (1..=c).map(|p| ldims[p].saturating_sub(ldims[p - 1])).collect();
    let len = t.dims.len().max(c + 1);
    let leading_dims = flag_dims(&b, len);
    let module_dims: Vec<usize> = (0..len).map(|d| t.dim(g + d as i32)).collect();
    Ok(LeadingTermReport {
        degree: g,
        b,
        leading_dims,
        module_dims,
        flag_ok,
    })
}

/// Row s = 1 of the table of Tor(M) against row 0 of the table of Tor(M_1)
/// on the first `cols` columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstSyzygyReport {
    pub strand_m: Vec<usize>,
    pub strand_m1: Vec<usize>,
}

impl FirstSyzygyReport {
    pub fn holds(&self) -> bool {
        self.strand_m == self.strand_m1
    }
}

pub fn first_syzygy_check(tor_m: &EModule, tor_m1: &EModule, cols: usize) -> FirstSyzygyReport {
    let b = e_free_resolution(tor_m, cols.saturating_sub(1)).betti();
    let b1 = e_free_resolution(tor_m1, cols.saturating_sub(1)).betti();
    FirstSyzygyReport {
        strand_m: b.row(1),
        strand_m1: b1.row(0),
    }
}

/// The two-row complex on Tor^R(M,k)⊗E built from t_2 and t_3 modulo the
/// maximal ideal, with the checks made on it.
#[derive(Clone, Debug)]
pub struct Main7Complex {
    pub complex: EFreeComplex,
    /// Positions 0..=len of the complex; position i holds G_{2i} (generators
    /// in degree i) followed by G_{2i+1} (degree i+1).
    pub upper_ranks: Vec<usize>,
    pub lower_ranks: Vec<usize>,
    pub d_squared_zero: bool,
    pub minimal: bool,
    /// Exact at positions 1..len-1 in every internal degree.
    pub acyclic: bool,
    pub h0: EModule,
    pub h0_isomorphic: Option<bool>,
}

impl Main7Complex {
    pub fn ok(&self) -> bool {
        self.d_squared_zero && self.minimal && self.acyclic && self.h0_isomorphic == Some(true)
    }
}

/// Per-degree matrices of a sequence of E-free maps; d² = 0, and exactness
/// at positions 1..len-1 in degrees lo..=hi.
fn free_complex_checks(alg: &GradedAlgebra, maps: &[FreeMap], lo: i32, hi: i32) -> (bool, bool) {
    let f = alg.field;
    let mats: Vec<Vec<Matrix>> = maps.iter().map(|m| m.matrices(alg, lo, hi)).collect();
    let mut dsq = true;
    let mut exact = true;
    for k in 0..=(hi - lo) as usize {
        for w in mats.windows(2) {
            let (a, b) = (&w[0][k], &w[1][k]);
            if !a.mul(b, f).is_zero() {
                dsq = false;
            }
            if b.rank(f) != a.cols - a.rank(f) {
                exact = false;
            }
        }
    }
    (dsq, exact)
}

/// The part of a free map between the chosen source and target generators.
fn restrict_free_map(
    alg: &GradedAlgebra,
    m: &FreeMap,
    src: std::ops::Range<usize>,
    tgt: std::ops::Range<usize>,
) -> FreeMap {
    let images = src
        .clone()
        .map(|g| {
            let a = m.source[g];
            let (off, _) = offsets(alg, &m.target, a);
            tgt.clone()
                .flat_map(|t| {
                    let n = alg.dim(a - m.target[t]);
                    m.images[g][off[t]..off[t] + n].to_vec()
                })
                .collect()
        })
        .collect();
    FreeMap {
        source: m.source[src].to_vec(),
        target: m.target[tgt].to_vec(),
        images,
    }
}

/// Build T(M) from the higher CI operators of a minimal R-free resolution:
/// horizontal maps t_2, diagonal maps t_3, both reduced mod the maximal
/// ideal, as E-linear maps. `positions` is the number of maps. The rows are
/// checked for acyclicity first.
pub fn build_main7_complex(
    sys: &crate::ci_ops::HigherCISystem,
    positions: usize,
    tor: Option<&EModule>,
) -> Result<Main7Complex> {
    let c = sys.c();
    if sys.nmax < 3 {
        return Err(AlgebraError::InvalidParameter("t_3 is needed".into()));
    }
    let field = sys.lifted.ring.field;
    let alg = GradedAlgebra::exterior(field, c);
    let bound = sys.lifted.bound;
    if 2 * positions + 1 > bound {
        return Err(AlgebraError::InvalidParameter(format!(
            "{positions} positions need the resolution to length {}",
            2 * positions + 1
        )));
    }
    let rank = |p: usize| sys.lifted.g[p].rank();
    let upper_ranks: Vec<usize> = (0..=positions).map(|i| rank(2 * i)).collect();
    let lower_ranks: Vec<usize> = (0..=positions).map(|i| rank(2 * i + 1)).collect();
    let gens = |i: usize| -> Vec<i32> {
        let mut g = vec![i as i32; upper_ranks[i]];
        g.extend(std::iter::repeat(i as i32 + 1).take(lower_ranks[i]));
        g
    };
    let subs2 = crate::complexes::subsets(c, 2);
    // images of generators of position i in position i-1, over the chosen rows
    let build = |i: usize, upper: bool, lower: bool, diag: bool| -> Result<FreeMap> {
        let src = gens(i);
        let tgt = gens(i - 1);
        let (tdeg_off, _) = offsets(&alg, &tgt, i as i32);
        let (tdeg_off1, _) = offsets(&alg, &tgt, i as i32 + 1);
        let n0 = free_dim(&alg, &tgt, i as i32);
        let n1 = free_dim(&alg, &tgt, i as i32 + 1);
        let nu = upper_ranks[i - 1];
        let mut images = Vec::with_capacity(src.len());
        // G_{2i} → G_{2i-2}⊗e_j
        let t2u = sys.t[2][2 * i].constant_part();
        for g in 0..upper_ranks[i] {
            let mut v = vec![0u32; n0];
            if upper {
                for h in 0..nu {
                    for j in 0..c {
                        v[tdeg_off[h] + j] = t2u.get(h * c + j, g);
                    }
                }
            }
            images.push(v);
        }
        // G_{2i+1} → G_{2i-1}⊗e_j  and  G_{2i-2}⊗e_J, |J| = 2
        let t2l = sys.t[2][2 * i + 1].constant_part();
        let t3 = sys.t[3][2 * i + 1].constant_part();
        let nl = lower_ranks[i - 1];
        for g in 0..lower_ranks[i] {
            let mut v = vec![0u32; n1];
            if lower {
                for h in 0..nl {
                    for j in 0..c {
                        v[tdeg_off1[nu + h] + j] = t2l.get(h * c + j, g);
                    }
                }
            }
            if diag {
                for h in 0..nu {
                    for (ji, _) in subs2.iter().enumerate() {
                        v[tdeg_off1[h] + ji] = t3.get(h * subs2.len() + ji, g);
                    }
                }
            }
            images.push(v);
        }
        Ok(FreeMap {
            source: src,
            target: tgt,
            images,
        })
    };
    let lo = 0;
    let hi = positions as i32 + 1 + c as i32;
    for (name, upper) in [("even", true), ("odd", false)] {
        let maps: Vec<FreeMap> = (1..=positions)
            .map(|i| {
                let m = build(i, upper, !upper, false)?;
                let range = |k: usize| {
                    if upper {
                        0..upper_ranks[k]
                    } else {
                        upper_ranks[k]..upper_ranks[k] + lower_ranks[k]
                    }
                };
                Ok(restrict_free_map(&alg, &m, range(i), range(i - 1)))
            })
            .collect::<Result<_>>()?;
        let (dsq, exact) = free_complex_checks(&alg, &maps, lo, hi);
        if !dsq || !exact {
            return Err(AlgebraError::RegularityHypothesisFailed(format!(
                "the {name} row is not acyclic"
            )));
        }
    }
    let maps: Vec<FreeMap> = (1..=positions)
        .map(|i| build(i, true, true, true))
        .collect::<Result<_>>()?;
    let (d_squared_zero, acyclic) = free_complex_checks(&alg, &maps, lo, hi);
    let minimal = maps.iter().all(|m| {
        m.source
            .iter()
            .zip(&m.images)
            .all(|(&a, v)| {
                let (off, _) = offsets(&alg, &m.target, a);
                m.target
                    .iter()
                    .enumerate()
                    .all(|(t, &b)| b != a || v[off[t]] == 0)
            })
    });
    let hi0 = 1 + c as i32;
    let (h0, projs) = match maps.first() {
        Some(m) => LinModule::coker_free(&alg, m, 0, hi0),
        None => {
            let m = FreeMap {
                source: vec![],
                target: gens(0),
                images: vec![],
            };
            LinModule::coker_free(&alg, &m, 0, hi0)
        }
    };
    let g0 = gens(0);
    let cover: Vec<Vec<u32>> = g0
        .iter()
        .enumerate()
        .map(|(g, &a)| {
            let (off, n) = offsets(&alg, &g0, a);
            let mut e = vec![0u32; n];
            e[off[g]] = 1;
            projs[a as usize].mul_vec(&e, field)
        })
        .collect();
    let h0 = h0.trimmed();
    let h0_isomorphic = tor.map(|t| {
        let t = t.trimmed();
        t.dims == h0.dims && t.lo == h0.lo && find_isomorphism(&t, &h0, 7).is_some()
    });
    let resolution = LinResolution {
        alg: alg.clone(),
        gens: (0..=positions).map(gens).collect(),
        cover,
        maps,
        max_degree: hi,
    };
    Ok(Main7Complex {
        complex: EFreeComplex { resolution },
        upper_ranks,
        lower_ranks,
        d_squared_zero,
        minimal,
        acyclic,
        h0,
        h0_isomorphic,
    })
}
