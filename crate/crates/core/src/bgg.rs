//! The BGG functors between graded E-modules and linear complexes over
//! ℛ = k[χ_1..χ_c], with χ and e both in degree 1.

use crate::algebra::GradedAlgebra;
use crate::complexes::{subsets, ChainComplex};
use crate::error::Result;
use crate::ext_rmodule::{operator_ring, HalfGradedRModule};
use crate::field_poly::{GradedFreeModule, GradedMap, Polynomial, PrimeField};
use crate::linalg::Matrix;
use crate::tor_emodule::EModule;

/// 𝕃(T): position i is ℛ⊗T_{−i} generated in degree i, with differential
/// Σ_j χ_j⊗e_j into position i−1.
pub type LinearRComplex = ChainComplex;

pub fn bgg_l(t: &EModule) -> Result<LinearRComplex> {
    let c = t.ngens;
    let ring = operator_ring(t.field, c)?;
    let t = t.trimmed();
    if t.dims.is_empty() {
        return ChainComplex::new(ring, None, 0, vec![GradedFreeModule::new(vec![])], vec![]);
    }
    let (lo, hi) = (t.lo, t.hi());
    // positions -hi..=-lo
    let terms: Vec<GradedFreeModule> = (-hi..=-lo)
        .map(|i| GradedFreeModule::new(vec![i; t.dim(-i)]))
        .collect();
    let mut diffs = Vec::new();
    for i in (-hi + 1)..=-lo {
        let src = GradedFreeModule::new(vec![i; t.dim(-i)]);
        let tgt = GradedFreeModule::new(vec![i - 1; t.dim(-i + 1)]);
        let ops: Vec<Matrix> = (0..c).map(|j| t.op(j, -i)).collect();
        let cols: Vec<Vec<(usize, Polynomial)>> = (0..src.rank())
            .map(|s| {
                (0..tgt.rank())
                    .filter_map(|r| {
                        let p = (0..c).fold(ring.zero(), |acc, j| {
                            acc.add(&ring.var(j).scale(ops[j].get(r, s)))
                        });
                        (!p.is_zero()).then_some((r, p))
                    })
                    .collect()
            })
            .collect();
        diffs.push(GradedMap::new(ring, src, tgt, 0, cols)?);
    }
    ChainComplex::new_unchecked(ring, None, -hi, terms, diffs)
}

/// ℝ(U): position i is Hom_k(E, U_i); the basis is (e_J^*, u) ordered by
/// |J|, then J, then u. δ(e_J^*⊗u) = Σ_{j∈J} ±e_{J∖j}^*⊗χ_j u.
#[derive(Clone, Debug)]
pub struct LinearEComplex {
    pub field: PrimeField,
    pub c: usize,
    pub lo: i32,
    /// dims of U_i for the positions.
    pub u_dims: Vec<usize>,
    /// blocks[k][q]: (E^∨_q ⊗ U_{lo+k}) → (E^∨_{q−1} ⊗ U_{lo+k+1}), for
    /// q = 1..=c (index q); index 0 is empty.
    pub blocks: Vec<Vec<Matrix>>,
}

impl LinearEComplex {
    pub fn positions(&self) -> usize {
        self.u_dims.len()
    }

    fn block_dim(&self, k: usize, q: usize) -> usize {
        binom(self.c, q) * self.u_dims[k]
    }

    /// δ_{i+1}δ_i = 0 block by block.
    pub fn is_complex(&self) -> bool {
        for k in 0..self.blocks.len().saturating_sub(1) {
            for q in 2..=self.c {
                let a = &self.blocks[k][q];
                let b = &self.blocks[k + 1][q - 1];
                if !b.mul(a, self.field).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// dim H^{lo+k} in the part with |J| = q, for positions with both
    /// neighbouring maps defined (the first position has no incoming map).
    pub fn homology_dim(&self, k: usize, q: usize) -> usize {
        let f = self.field;
        let n = self.block_dim(k, q);
        let out_rank = if q >= 1 && k < self.blocks.len() {
            self.blocks[k][q].rank(f)
        } else {
            0
        };
        let in_rank = if k >= 1 && q < self.c {
            self.blocks[k - 1][q + 1].rank(f)
        } else {
            0
        };
        n - out_rank - in_rank
    }

    /// Dimensions of H^0 (the kernel at the first position) by |J|; as an
    /// E-module it sits in degree −|J|.
    pub fn h0_dims(&self) -> Vec<usize> {
        (0..=self.c).map(|q| self.homology_dim(0, q)).collect()
    }
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

pub fn bgg_r(u: &HalfGradedRModule) -> LinearEComplex {
    let f = u.field;
    let c = u.ngens;
    let lo = u.lo;
    let n = u.dims.len();
    let subs: Vec<Vec<Vec<usize>>> = (0..=c).map(|q| subsets(c, q)).collect();
    let mut blocks = Vec::new();
    for k in 0..n.saturating_sub(1) {
        let d = lo + k as i32;
        let (a, b) = (u.dims[k], u.dims[k + 1]);
        let chi: Vec<Matrix> = (0..c).map(|j| u.op(j, d)).collect();
        let mut fam = vec![Matrix::zeros(0, 0)];
        for q in 1..=c {
            let src = &subs[q];
            let tgt = &subs[q - 1];
            let mut m = Matrix::zeros(tgt.len() * b, src.len() * a);
            for (ji, jset) in src.iter().enumerate() {
                for (pos, &j) in jset.iter().enumerate() {
                    let rest: Vec<usize> = jset.iter().copied().filter(|&x| x != j).collect();
                    let ri = tgt.iter().position(|s| *s == rest).unwrap();
                    // φ(e_j ∧ e_rest) = (−1)^pos φ(e_J)
                    let neg = pos % 2 == 1;
                    for col in 0..a {
                        for row in 0..b {
                            let v = chi[j].get(row, col);
                            if v != 0 {
                                let v = if neg { f.neg(v) } else { v };
                                let (r, cc) = (ri * b + row, ji * a + col);
                                m.set(r, cc, f.add(m.get(r, cc), v));
                            }
                        }
                    }
                }
            }
            fam.push(m);
        }
        blocks.push(fam);
    }
    LinearEComplex {
        field: f,
        c,
        lo,
        u_dims: u.dims.clone(),
        blocks,
    }
}

/// Outcome of an acyclicity test: the first position with homology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Acyclicity {
    pub acyclic: bool,
    pub first_failure: Option<i32>,
}

/// 𝕃(T): H_i = 0 for positions i ≠ 0 in internal degrees up to `window`.
pub fn is_acyclic_l(cx: &LinearRComplex, window: i32) -> Acyclicity {
    let alg = algebra_for_window(cx, window);
    for i in cx.lo..=cx.hi() {
        if i == 0 {
            continue;
        }
        let lo_deg = cx.term(i).degrees.iter().copied().min().unwrap_or(i);
        for d in lo_deg..=window {
            if cx.homology_dim(&alg, i, d) != 0 {
                return Acyclicity {
                    acyclic: false,
                    first_failure: Some(i),
                };
            }
        }
    }
    Acyclicity {
        acyclic: true,
        first_failure: None,
    }
}

fn algebra_for_window(cx: &LinearRComplex, window: i32) -> std::sync::Arc<GradedAlgebra> {
    let lo = cx
        .terms
        .iter()
        .flat_map(|t| t.degrees.iter().copied())
        .min()
        .unwrap_or(0);
    GradedAlgebra::polynomial(cx.ring, (window - lo).max(1))
}

/// ℝ(U): H^i = 0 for positions after the first, up to the last position
/// whose outgoing map is known.
pub fn is_acyclic_r(cx: &LinearEComplex) -> Acyclicity {
    for k in 1..cx.blocks.len() {
        for q in 0..=cx.c {
            if cx.homology_dim(k, q) != 0 {
                return Acyclicity {
                    acyclic: false,
                    first_failure: Some(cx.lo + k as i32),
                };
            }
        }
    }
    Acyclicity {
        acyclic: true,
        first_failure: None,
    }
}

/// Both directions of reciprocity at the level of dimensions.
#[derive(Clone, Debug)]
pub struct ReciprocityReport {
    pub l_acyclic: Acyclicity,
    /// Hilbert function of H_0(𝕃(T)) equals that of U up to the window.
    pub l_h0_matches: bool,
    pub r_acyclic: Acyclicity,
    /// dims of H^0(ℝ(U)) in degrees 0, −1, …, −c equal those of T.
    pub r_h0_matches: bool,
}

impl ReciprocityReport {
    pub fn l_holds(&self) -> bool {
        self.l_acyclic.acyclic && self.l_h0_matches
    }

    pub fn r_holds(&self) -> bool {
        self.r_acyclic.acyclic && self.r_h0_matches
    }

    pub fn holds(&self) -> bool {
        self.l_holds() && self.r_holds()
    }
}

/// U is given in degrees 0..=h; `window` caps the internal degrees checked
/// on the 𝕃 side (at most h).
pub fn reciprocity_check(u: &HalfGradedRModule, t: &EModule, window: i32) -> Result<ReciprocityReport> {
    let l = bgg_l(t)?;
    let w = window.min(u.hi());
    let l_acyclic = is_acyclic_l(&l, w);
    let alg = algebra_for_window(&l, w);
    let l_h0_matches = (0..=w).all(|d| l.homology_dim(&alg, 0, d) == u.dim(d));
    let r = bgg_r(u);
    let r_acyclic = is_acyclic_r(&r);
    let h0 = r.h0_dims();
    let tt = t.trimmed();
    let r_h0_matches = (0..=u.ngens).all(|q| h0[q] == tt.dim(-(q as i32)))
        && (tt.dims.is_empty() || (tt.lo >= -(u.ngens as i32) && tt.hi() <= 0));
    Ok(ReciprocityReport {
        l_acyclic,
        l_h0_matches,
        r_acyclic,
        r_h0_matches,
    })
}
