//! CI operators on a lifted R-free resolution, the higher operators t_n
//! on G⊗K, and the S-free resolution GK assembled from them.

use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::GradedAlgebra;
use crate::complexes::{lift_map, subsets, ChainComplex};
use crate::error::{AlgebraError, Result};
use crate::field_poly::{compose, GradedFreeModule, GradedMap, Polynomial, Ring};
use crate::groebner::QuotientRing;
use crate::resolution::{minimize_complex, ModulePresentation};

/// Maps t_1' of free S-modules lifting a minimal R-free resolution.
#[derive(Clone, Debug)]
pub struct LiftedResolution {
    pub ring: Ring,
    pub f: Vec<Polynomial>,
    pub quotient: QuotientRing,
    /// G_0..G_bound.
    pub g: Vec<GradedFreeModule>,
    /// t1[p - 1]: G_p → G_{p-1}.
    pub t1: Vec<GradedMap>,
    pub bound: usize,
}

impl LiftedResolution {
    pub fn term(&self, p: i32) -> GradedFreeModule {
        if p < 0 || p as usize > self.bound {
            GradedFreeModule::new(vec![])
        } else {
            self.g[p as usize].clone()
        }
    }

    /// t_1' out of G_p (zero outside the range).
    pub fn t1(&self, p: i32) -> GradedMap {
        if p < 1 || p as usize > self.bound {
            GradedMap::zero(self.ring, self.term(p), self.term(p - 1), 0)
        } else {
            self.t1[p as usize - 1].clone()
        }
    }

    pub fn c(&self) -> usize {
        self.f.len()
    }
}

/// Entrywise lift of a minimal R-free resolution: every entry is already a
/// normal form modulo I, read as a polynomial over S.
pub fn lift_resolution(rres: &ChainComplex, f: &[Polynomial], length: usize) -> Result<LiftedResolution> {
    let quotient = match &rres.quotient {
        Some(q) => q.clone(),
        None => QuotientRing::new(rres.ring, f)?,
    };
    let bound = length.min(rres.hi().max(0) as usize);
    let g: Vec<GradedFreeModule> = (0..=bound as i32).map(|p| rres.term(p)).collect();
    let t1: Vec<GradedMap> = (1..=bound as i32)
        .map(|p| rres.differential(p).map_entries(|e| quotient.normal_form(e)))
        .collect();
    let l = LiftedResolution {
        ring: rres.ring,
        f: f.to_vec(),
        quotient,
        g,
        t1,
        bound,
    };
    for p in 2..=bound as i32 {
        let sq = compose(&l.t1(p - 1), &l.t1(p))?;
        if !sq.map_entries(|e| l.quotient.normal_form(e)).is_zero() {
            return Err(AlgebraError::LiftError(format!(
                "t1'^2 out of G_{p} is not zero modulo the ideal"
            )));
        }
    }
    Ok(l)
}

/// Polynomial algebra holding all degrees needed for maps between the
/// terms G_p⊗K_q.
fn algebra_for_lift(l: &LiftedResolution) -> Arc<GradedAlgebra> {
    let fmax: i32 = l.f.iter().map(|p| p.degree().unwrap_or(0) as i32).sum();
    let degs: Vec<i32> = l.g.iter().flat_map(|t| t.degrees.iter().copied()).collect();
    let lo = degs.iter().copied().min().unwrap_or(0);
    let hi = degs.iter().copied().max().unwrap_or(0);
    GradedAlgebra::polynomial(l.ring, (hi + fmax - lo).max(1))
}

/// t_{2,i}: G_p → G_{p-2} (degree shift −deg f_i) with t_1'² = Σ f_i t_{2,i}.
#[derive(Clone, Debug)]
pub struct CIOperators {
    /// maps[i][p] for p = 0..=bound (zero for p < 2).
    pub maps: Vec<Vec<GradedMap>>,
}

impl CIOperators {
    pub fn get(&self, i: usize, p: i32) -> &GradedMap {
        &self.maps[i][p as usize]
    }
}

pub fn ci_operators(l: &LiftedResolution) -> Result<CIOperators> {
    let alg = algebra_for_lift(l);
    let ring = l.ring;
    let c = l.c();
    let degs: Vec<i32> = l.f.iter().map(|p| p.degree().unwrap_or(0) as i32).collect();
    let per_p: Vec<Vec<GradedMap>> = (0..=l.bound as i32)
        .into_par_iter()
        .map(|p| -> Result<Vec<GradedMap>> {
            let src = l.term(p);
            let tgt = l.term(p - 2);
            if p < 2 {
                return Ok((0..c)
                    .map(|i| GradedMap::zero(ring, src.clone(), tgt.clone(), -degs[i]))
                    .collect());
            }
            let sq = compose(&l.t1(p - 1), &l.t1(p))?;
            // [f_1 | … | f_c]: ⊕_i G_{p-2}(−deg f_i) → G_{p-2}
            let parts: Vec<GradedFreeModule> = degs.iter().map(|&d| tgt.shifted(d)).collect();
            let big = GradedFreeModule::direct_sum(&parts);
            let n = tgt.rank();
            let cols: Vec<Vec<(usize, Polynomial)>> = (0..c)
                .flat_map(|i| (0..n).map(move |r| (i, r)))
                .map(|(i, r)| vec![(r, l.f[i].clone())])
                .collect();
            let fm = GradedMap::new(ring, big, tgt.clone(), 0, cols)?;
            let x = lift_map(&alg, &fm, &sq)?.ok_or_else(|| {
                AlgebraError::LiftError(format!("t1'^2 out of G_{p} is not in (f)·G"))
            })?;
            let mut out = Vec::with_capacity(c);
            for i in 0..c {
                let b = x.block(i * n..(i + 1) * n, 0..src.rank());
                let cols = b.columns().to_vec();
                out.push(GradedMap::new(ring, src.clone(), tgt.clone(), -degs[i], cols)?);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let maps = (0..c).map(|i| per_p.iter().map(|v| v[i].clone()).collect()).collect();
    Ok(CIOperators { maps })
}

/// Sign of e_I ∧ e_J relative to e_{I∪J}, or None if they meet.
fn wedge_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut inv = 0usize;
    for &x in a {
        for &y in b {
            if x == y {
                return None;
            }
            if x > y {
                inv += 1;
            }
        }
    }
    let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
    u.sort();
    Some((u, inv % 2 == 1))
}

/// The operators t_n, stored on G_p⊗1 for n = 1..=nmax.
#[derive(Clone, Debug)]
pub struct HigherCISystem {
    pub lifted: LiftedResolution,
    pub nmax: usize,
    /// t[n][p]: G_p → G_{p−n}⊗K_{n−1} (index 0 unused).
    pub t: Vec<Vec<GradedMap>>,
    subsets: Vec<Vec<Vec<usize>>>,
    fdeg: Vec<i32>,
}

impl HigherCISystem {
    pub fn c(&self) -> usize {
        self.lifted.c()
    }

    /// G_p⊗K_q, basis ordered g-major.
    pub fn term(&self, p: i32, q: i32) -> GradedFreeModule {
        let c = self.c() as i32;
        if p < 0 || p as usize > self.lifted.bound || q < 0 || q > c {
            return GradedFreeModule::new(vec![]);
        }
        let g = &self.lifted.g[p as usize];
        let subs = &self.subsets[q as usize];
        let mut degs = Vec::with_capacity(g.rank() * subs.len());
        for &a in &g.degrees {
            for j in subs {
                degs.push(a + j.iter().map(|&i| self.fdeg[i]).sum::<i32>());
            }
        }
        GradedFreeModule::new(degs)
    }

    fn ring(&self) -> Ring {
        self.lifted.ring
    }

    /// t_n on G_p⊗K_q → G_{p−n}⊗K_{q+n−1}: t_0 = (−1)^p(1⊗∂_K), and for
    /// n ≥ 1 the right-E-linear extension t_n(g⊗e_J) = t_n(g⊗1)·e_J.
    pub fn t_full(&self, n: usize, p: i32, q: i32) -> Result<GradedMap> {
        let ring = self.ring();
        let src = self.term(p, q);
        let tgt = self.term(p - n as i32, q + n as i32 - 1);
        let c = self.c() as i32;
        if src.rank() == 0 || tgt.rank() == 0 || q < 0 || q > c {
            return Ok(GradedMap::zero(ring, src, tgt, 0));
        }
        let subs_q = &self.subsets[q as usize];
        let nq = subs_q.len();
        let qt = q + n as i32 - 1;
        let subs_t = &self.subsets[qt as usize];
        let nt = subs_t.len();
        let gp = self.lifted.g[p as usize].rank();
        let mut cols: Vec<Vec<(usize, Polynomial)>> = vec![Vec::new(); gp * nq];
        if n == 0 {
            let sign_p = p % 2 != 0;
            for g in 0..gp {
                for (ji, j) in subs_q.iter().enumerate() {
                    let col = &mut cols[g * nq + ji];
                    for (l, &jl) in j.iter().enumerate() {
                        let rest: Vec<usize> = j.iter().copied().filter(|&x| x != jl).collect();
                        let r = subs_t.iter().position(|s| *s == rest).unwrap();
                        let neg = (l % 2 == 1) ^ sign_p;
                        let e = if neg { self.lifted.f[jl].neg() } else { self.lifted.f[jl].clone() };
                        col.push((g * nt + r, e));
                    }
                    col.sort_by_key(|(r, _)| *r);
                }
            }
            return GradedMap::new(ring, src, tgt, 0, cols);
        }
        if n > self.nmax {
            return Err(AlgebraError::InvalidParameter(format!("t_{n} not computed")));
        }
        let base = &self.t[n][p as usize]; // G_p → G_{p-n}⊗K_{n-1}
        let nb = self.subsets[n - 1].len();
        for g in 0..gp {
            for (ji, j) in subs_q.iter().enumerate() {
                let mut col: Vec<(usize, Polynomial)> = Vec::new();
                for (row, e) in base.column(g) {
                    let (h, ii) = (row / nb, row % nb);
                    let i_set = &self.subsets[n - 1][ii];
                    if let Some((u, neg)) = wedge_sign(i_set, j) {
                        let r = subs_t.iter().position(|s| *s == u).unwrap();
                        col.push((h * nt + r, if neg { e.neg() } else { e.clone() }));
                    }
                }
                col.sort_by_key(|(r, _)| *r);
                // merge duplicates (cannot occur: distinct (h, I) give distinct (h, I∪J))
                cols[g * nq + ji] = col;
            }
        }
        GradedMap::new(ring, src, tgt, 0, cols)
    }

    /// Σ_{i+j=n} t_i t_j on G_p⊗K_q.
    pub fn identity_defect(&self, n: usize, p: i32, q: i32) -> Result<GradedMap> {
        let ring = self.ring();
        let src = self.term(p, q);
        let tgt = self.term(p - n as i32, q + n as i32 - 2);
        let mut acc = GradedMap::zero(ring, src, tgt, 0);
        for j in 0..=n {
            let i = n - j;
            let a = self.t_full(j, p, q)?;
            let b = self.t_full(i, p - j as i32, q + j as i32 - 1)?;
            if a.is_zero() || b.is_zero() {
                continue;
            }
            acc = acc.add(&compose(&b, &a)?)?;
        }
        Ok(acc)
    }

    /// Σ_{i+j=n} t_i t_j = 0 exactly for every p ≤ bound and every q.
    pub fn check_identities(&self, n: usize) -> Result<bool> {
        let c = self.c() as i32;
        let checks: Vec<(i32, i32)> = (0..=self.lifted.bound as i32)
            .flat_map(|p| (0..=c).map(move |q| (p, q)))
            .collect();
        let res: Vec<bool> = checks
            .par_iter()
            .map(|&(p, q)| self.identity_defect(n, p, q).map(|d| d.is_zero()))
            .collect::<Result<_>>()?;
        Ok(res.into_iter().all(|b| b))
    }
}

/// Solve the higher operators by induction on n: t_1 = t_1', t_2 from the
/// CI operators with sign (−1)^{p+1}, and t_n for n ≥ 3 by lifting
/// −Σ_{i+j=n, i,j>0} t_i t_j through t_0.
pub fn higher_ci(l: &LiftedResolution, ci: &CIOperators, nmax: usize) -> Result<HigherCISystem> {
    if nmax < 2 {
        return Err(AlgebraError::InvalidParameter("nmax must be at least 2".into()));
    }
    let c = l.c();
    let ring = l.ring;
    let subsets_all: Vec<Vec<Vec<usize>>> = (0..=c).map(|q| subsets(c, q)).collect();
    let fdeg: Vec<i32> = l.f.iter().map(|p| p.degree().unwrap_or(0) as i32).collect();
    let mut sys = HigherCISystem {
        lifted: l.clone(),
        nmax: 1,
        t: vec![vec![], (0..=l.bound as i32).map(|p| l.t1(p)).collect()],
        subsets: subsets_all,
        fdeg,
    };
    // n = 2
    let t2: Vec<GradedMap> = (0..=l.bound as i32)
        .map(|p| {
            let src = l.term(p);
            let tgt = sys.term(p - 2, 1);
            let mut cols: Vec<Vec<(usize, Polynomial)>> = vec![Vec::new(); src.rank()];
            if p >= 2 {
                let neg = p % 2 == 0; // (−1)^{p+1}
                for (i, maps) in ci.maps.iter().enumerate() {
                    let m = &maps[p as usize];
                    for (g, col) in m.columns().iter().enumerate() {
                        for (h, e) in col {
                            let e = if neg { e.neg() } else { e.clone() };
                            cols[g].push((h * c + i, e));
                        }
                    }
                }
                for col in cols.iter_mut() {
                    col.sort_by_key(|(r, _)| *r);
                }
            }
            GradedMap::new(ring, src, tgt, 0, cols)
        })
        .collect::<Result<_>>()?;
    sys.t.push(t2);
    sys.nmax = 2;
    let alg = algebra_for_lift(l);
    for n in 3..=nmax {
        let tn: Vec<GradedMap> = (0..=l.bound as i32)
            .into_par_iter()
            .map(|p| -> Result<GradedMap> {
                let src = l.term(p);
                let tgt = sys.term(p - n as i32, n as i32 - 1);
                let mid = sys.term(p - n as i32, n as i32 - 2);
                let mut rhs = GradedMap::zero(ring, src.clone(), mid.clone(), 0);
                for j in 1..n {
                    let i = n - j;
                    let a = sys.t_full(j, p, 0)?;
                    let b = sys.t_full(i, p - j as i32, j as i32 - 1)?;
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    rhs = rhs.sub(&compose(&b, &a)?)?;
                }
                if tgt.rank() == 0 {
                    if !rhs.is_zero() {
                        return Err(AlgebraError::Internal(format!(
                            "t_{n} out of G_{p} has nowhere to go but the obstruction is nonzero"
                        )));
                    }
                    return Ok(GradedMap::zero(ring, src, tgt, 0));
                }
                if rhs.is_zero() {
                    return Ok(GradedMap::zero(ring, src, tgt, 0));
                }
                let t0 = sys.t_full(0, p - n as i32, n as i32 - 1)?;
                lift_map(&alg, &t0, &rhs)?.ok_or_else(|| {
                    AlgebraError::Internal(format!("t_{n} out of G_{p} does not lift"))
                })
            })
            .collect::<Result<_>>()?;
        sys.t.push(tn);
        sys.nmax = n;
    }
    Ok(sys)
}

/// Which t_i block sits where in T_n: (i, (p, q) source, (p', q') target).
pub fn gk_block_structure(sys: &HigherCISystem, n: i32) -> Vec<(usize, (i32, i32), (i32, i32))> {
    let c = sys.c() as i32;
    let mut out = Vec::new();
    for p in 0..=n.min(sys.lifted.bound as i32) {
        let q = n - p;
        if q < 0 || q > c {
            continue;
        }
        for i in 0..=sys.nmax {
            let (pt, qt) = (p - i as i32, q + i as i32 - 1);
            if pt < 0 || qt < 0 || qt > c {
                continue;
            }
            out.push((i, (p, q), (pt, qt)));
        }
    }
    out
}

/// GK_n = ⊕_{p+q=n} G_p⊗K_q (p ascending), differential Σ_i t_i. Built for
/// n = 0..=bound.
pub fn build_gk(sys: &HigherCISystem) -> Result<ChainComplex> {
    let ring = sys.ring();
    let c = sys.c() as i32;
    let bound = sys.lifted.bound as i32;
    let pieces = |n: i32| -> Vec<(i32, i32)> {
        (0..=n.min(bound))
            .map(|p| (p, n - p))
            .filter(|&(_, q)| q >= 0 && q <= c)
            .collect()
    };
    let mut terms = Vec::new();
    for n in 0..=bound {
        let parts: Vec<GradedFreeModule> = pieces(n).iter().map(|&(p, q)| sys.term(p, q)).collect();
        terms.push(GradedFreeModule::direct_sum(&parts));
    }
    let mut diffs = Vec::new();
    for n in 1..=bound {
        let src = pieces(n);
        let tgt = pieces(n - 1);
        let sources: Vec<GradedFreeModule> = src.iter().map(|&(p, q)| sys.term(p, q)).collect();
        let targets: Vec<GradedFreeModule> = tgt.iter().map(|&(p, q)| sys.term(p, q)).collect();
        let mut blocks_owned: Vec<Vec<Option<GradedMap>>> = vec![vec![None; src.len()]; tgt.len()];
        for (sc, &(p, q)) in src.iter().enumerate() {
            for (tr, &(pt, qt)) in tgt.iter().enumerate() {
                let i = p - pt;
                if i < 0 || qt != q + i - 1 || i as usize > sys.nmax {
                    continue;
                }
                let m = sys.t_full(i as usize, p, q)?;
                if !m.is_zero() {
                    blocks_owned[tr][sc] = Some(m);
                }
            }
        }
        let blocks: Vec<Vec<Option<&GradedMap>>> = blocks_owned
            .iter()
            .map(|row| row.iter().map(|b| b.as_ref()).collect())
            .collect();
        diffs.push(GradedMap::from_blocks(ring, &targets, &sources, 0, &blocks)?);
    }
    ChainComplex::new(ring, None, 0, terms, diffs)
}

/// Cancel unit entries of GK until minimal. The top term of a truncated
/// GK is not yet final, so the result stops one step earlier.
pub fn minimize_gk(gk: &ChainComplex) -> Result<ChainComplex> {
    let m = minimize_complex(gk)?;
    Ok(m.truncated((gk.hi() - 1).max(gk.lo)))
}

/// Checks on a GK complex.
#[derive(Clone, Debug)]
pub struct GkReport {
    pub d_squared_zero: bool,
    /// Hilbert function of H_0 equals that of M.
    pub h0_matches: bool,
    /// (i, H_i = 0) for i = 1..=upto.
    pub acyclic: Vec<(i32, bool)>,
    /// Internal degrees checked: lo..=degree_bound.
    pub degree_bound: i32,
}

impl GkReport {
    pub fn ok(&self) -> bool {
        self.d_squared_zero && self.h0_matches && self.acyclic.iter().all(|(_, b)| *b)
    }
}

/// d² = 0, H_0 ≅ M as graded vector spaces, and H_i = 0 for 1 ≤ i ≤ upto.
/// Homology is computed on the minimized complex, which is homotopy
/// equivalent, in internal degrees up to the largest generator degree plus
/// the number of variables plus one.
pub fn verify_gk(gk: &ChainComplex, m: &ModulePresentation, upto: i32) -> Result<GkReport> {
    let d_squared_zero = gk.check_d_squared().is_ok();
    let mg = minimize_gk(gk)?;
    let nv = gk.ring.nvars as i32;
    let degs: Vec<i32> = (0..=(upto + 1).min(mg.hi()))
        .flat_map(|i| mg.term(i).degrees)
        .chain(m.generators().degrees.iter().copied())
        .collect();
    let lo = degs.iter().copied().min().unwrap_or(0);
    let hi = degs.iter().copied().max().unwrap_or(0) + nv + 1;
    let alg = GradedAlgebra::polynomial(gk.ring, (hi - lo).max(1));
    let h0_matches = match m.over_s()?.to_lin_module()? {
        Some((_, lm, _)) => (lo..=hi).all(|d| {
            let want = if d >= lm.lo && ((d - lm.lo) as usize) < lm.dims.len() {
                lm.dims[(d - lm.lo) as usize]
            } else {
                0
            };
            mg.homology_dim(&alg, 0, d) == want
        }),
        None => false,
    };
    let acyclic = (1..=upto)
        .map(|i| (i, (lo..=hi).all(|d| i > mg.hi() || mg.homology_dim(&alg, i, d) == 0)))
        .collect();
    Ok(GkReport {
        d_squared_zero,
        h0_matches,
        acyclic,
        degree_bound: hi,
    })
}
