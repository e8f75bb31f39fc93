//! Homotopies for the f_i on an S-free resolution, the relations among
//! them, and the induced exterior algebra action on Tor^S(M,k).

use rayon::prelude::*;

use crate::complexes::{algebra_for, lift_map, reduce_mod_m, ChainComplex, Homology};
use crate::error::{AlgebraError, Result};
use crate::field_poly::{compose, GradedMap, Polynomial};
use crate::linalg::{solve, Matrix};
use crate::linmod::LinModule;

/// σ_p: F_p → F_{p+1} for p = lo..=hi (the last one maps to zero).
#[derive(Clone, Debug)]
pub struct HomotopySystem {
    pub base: ChainComplex,
    pub f: Vec<Polynomial>,
    /// sigmas[i][p - lo]
    pub sigmas: Vec<Vec<GradedMap>>,
}

fn shift_of(f: &Polynomial) -> i32 {
    f.degree().unwrap_or(0) as i32
}

/// Degree-by-degree solution of σ∂ + ∂σ = f·id on a free resolution.
pub fn compute_homotopy(fc: &ChainComplex, f: &Polynomial) -> Result<Vec<GradedMap>> {
    let ring = fc.ring;
    let s = shift_of(f);
    let alg = algebra_for(fc, s)?;
    let mut out: Vec<GradedMap> = Vec::new();
    for p in fc.lo..=fc.hi() {
        let fp = fc.term(p);
        let mut rhs = GradedMap::scalar(ring, &fp, f);
        if f.is_zero() {
            rhs.degree_shift = s;
        }
        if p > fc.lo {
            let prev = compose(&out[(p - fc.lo - 1) as usize], &fc.differential(p))?;
            rhs = rhs.sub(&prev)?;
        }
        let d = fc.differential(p + 1);
        match lift_map(&alg, &d, &rhs)? {
            Some(x) => out.push(x),
            None if p == fc.lo => {
                return Err(AlgebraError::AnnihilationError(format!(
                    "{f} does not annihilate the module"
                )))
            }
            None => {
                return Err(AlgebraError::LiftError(format!(
                    "homotopy does not lift at homological degree {p}"
                )))
            }
        }
    }
    Ok(out)
}

impl HomotopySystem {
    pub fn new(base: &ChainComplex, f: &[Polynomial]) -> Result<Self> {
        let sigmas = f
            .par_iter()
            .map(|fi| compute_homotopy(base, fi))
            .collect::<Result<Vec<_>>>()?;
        Ok(HomotopySystem {
            base: base.clone(),
            f: f.to_vec(),
            sigmas,
        })
    }

    /// σ_i on F_p (zero map outside the range).
    pub fn sigma(&self, i: usize, p: i32) -> GradedMap {
        let b = &self.base;
        if p < b.lo || p > b.hi() {
            GradedMap::zero(b.ring, b.term(p), b.term(p + 1), shift_of(&self.f[i]))
        } else {
            self.sigmas[i][(p - b.lo) as usize].clone()
        }
    }

    /// σ_i∂ + ∂σ_i − f_i on every term; true when all vanish.
    pub fn check_defining_identity(&self) -> Result<bool> {
        let b = &self.base;
        for (i, fi) in self.f.iter().enumerate() {
            for p in b.lo..=b.hi() {
                let mut acc = GradedMap::scalar(b.ring, &b.term(p), fi).neg();
                if fi.is_zero() {
                    acc.degree_shift = shift_of(fi);
                }
                acc = acc.add(&compose(&b.differential(p + 1), &self.sigma(i, p))?)?;
                if p > b.lo {
                    acc = acc.add(&compose(&self.sigma(i, p - 1), &b.differential(p))?)?;
                }
                if !acc.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// How a relation σ_iσ_j + σ_jσ_i = 0 (or σ_i² = 0) holds.
#[derive(Clone, Debug)]
pub enum RelationStatus {
    Exact,
    /// Null-homotopic: α with ∂α + α∂ equal to the composite.
    UpToHomotopy(Vec<GradedMap>),
    Failed(String),
}

#[derive(Clone, Debug)]
pub struct RelationReport {
    /// (i, j, status) for i ≤ j.
    pub relations: Vec<(usize, usize, RelationStatus)>,
}

impl RelationReport {
    pub fn all_certified(&self) -> bool {
        self.relations
            .iter()
            .all(|(_, _, s)| !matches!(s, RelationStatus::Failed(_)))
    }

    pub fn exact_count(&self) -> usize {
        self.relations
            .iter()
            .filter(|(_, _, s)| matches!(s, RelationStatus::Exact))
            .count()
    }
}

/// Certify σ_iσ_j + σ_jσ_i and σ_i² null-homotopic.
pub fn verify_homotopy_relations(h: &HomotopySystem) -> Result<RelationReport> {
    let b = &h.base;
    let c = h.f.len();
    let pairs: Vec<(usize, usize)> = (0..c).flat_map(|i| (i..c).map(move |j| (i, j))).collect();
    let relations = pairs
        .par_iter()
        .map(|&(i, j)| {
            let phi = |p: i32| -> Result<GradedMap> {
                let a = compose(&h.sigma(i, p + 1), &h.sigma(j, p))?;
                if i == j {
                    return Ok(a);
                }
                let bb = compose(&h.sigma(j, p + 1), &h.sigma(i, p))?;
                a.add(&bb)
            };
            let phis: Vec<GradedMap> = (b.lo..=b.hi()).map(phi).collect::<Result<_>>()?;
            if phis.iter().all(|m| m.is_zero()) {
                return Ok((i, j, RelationStatus::Exact));
            }
            let s = shift_of(&h.f[i]) + shift_of(&h.f[j]);
            let alg = algebra_for(b, s)?;
            let mut alphas: Vec<GradedMap> = Vec::new();
            for p in b.lo..=b.hi() {
                let k = (p - b.lo) as usize;
                let mut rhs = phis[k].clone();
                rhs.degree_shift = s;
                if p > b.lo {
                    rhs = rhs.sub(&compose(&alphas[k - 1], &b.differential(p))?)?;
                }
                match lift_map(&alg, &b.differential(p + 3), &rhs)? {
                    Some(x) => alphas.push(x),
                    None => {
                        return Ok((
                            i,
                            j,
                            RelationStatus::Failed(format!("no null-homotopy at degree {p}")),
                        ))
                    }
                }
            }
            Ok((i, j, RelationStatus::UpToHomotopy(alphas)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RelationReport { relations })
}

/// Tor^S(M,k) with the action of e_i induced by σ_i; the grading is the
/// homological degree. For minimal F the basis of Tor_p is the generator
/// basis of F_p; otherwise it is the homology representative basis.
pub fn e_action_on_tor(h: &HomotopySystem) -> Result<LinModule> {
    let b = &h.base;
    let f = b.ring.field;
    let c = h.f.len();
    let kc = reduce_mod_m(b);
    let lo = b.lo;
    let hi = b.hi();
    let minimal = b.is_minimal();
    // basis of Tor_p as columns in F_p ⊗ k, and a solver for coordinates
    let mut bases: Vec<Matrix> = Vec::new();
    let mut boundaries: Vec<Matrix> = Vec::new();
    for p in lo..=hi {
        let n = b.rank(p);
        if minimal {
            bases.push(Matrix::identity(n));
            boundaries.push(Matrix::zeros(n, 0));
        } else {
            let hom: Homology = kc.homology(p);
            let cols: Vec<Vec<u32>> = hom
                .reps
                .values()
                .flat_map(|m| (0..m.cols).map(move |k| m.column(k)))
                .collect();
            bases.push(if cols.is_empty() {
                Matrix::zeros(n, 0)
            } else {
                Matrix::from_columns(n, &cols)
            });
            boundaries.push(kc.differential(p + 1));
        }
    }
    let dims: Vec<usize> = bases.iter().map(|m| m.cols).collect();
    let mut ops: Vec<Vec<Matrix>> = Vec::new();
    for p in lo..=hi {
        let k = (p - lo) as usize;
        let mut fam = Vec::with_capacity(c);
        for i in 0..c {
            if p == hi {
                fam.push(Matrix::zeros(0, dims[k]));
                continue;
            }
            let s = h.sigma(i, p).constant_part();
            let img = s.mul(&bases[k], f);
            let coords = if minimal {
                img
            } else {
                // img = basis * X + boundary * Y
                let a = bases[k + 1].hstack(&boundaries[k + 1]);
                let sol = solve(&a, &img, f).ok_or_else(|| {
                    AlgebraError::Internal("image of a cycle is not a cycle".into())
                })?;
                let idx: Vec<usize> = (0..dims[k + 1]).collect();
                sol.select_rows(&idx)
            };
            fam.push(coords);
        }
        ops.push(fam);
    }
    LinModule::new(f, c, 0, dims, ops).map(|m| m.shifted(lo))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::koszul;
    use crate::field_poly::{parse_polynomial_list, PrimeField, Ring};

    fn ring() -> Ring {
        Ring::new(PrimeField::new(101).unwrap(), 3).unwrap()
    }

    #[test]
    fn homotopies_on_koszul_resolution_of_k() {
        let r = ring();
        let vars = parse_polynomial_list(r, &r.default_names(), "x1,x2,x3").unwrap();
        let f = parse_polynomial_list(r, &r.default_names(), "x1^3,x2^3,x3^3").unwrap();
        let k = koszul(r, &vars).unwrap();
        let h = HomotopySystem::new(&k, &f).unwrap();
        assert!(h.check_defining_identity().unwrap());
        let t = e_action_on_tor(&h).unwrap();
        assert_eq!(t.dims, vec![1, 3, 3, 1]);
        assert!(t.ops.iter().flatten().all(|m| m.is_zero()));
        let rep = verify_homotopy_relations(&h).unwrap();
        assert!(rep.all_certified());
        assert_eq!(rep.relations.len(), 6);
    }

    #[test]
    fn zero_element_gives_zero_homotopy() {
        let r = ring();
        let vars = parse_polynomial_list(r, &r.default_names(), "x1,x2,x3").unwrap();
        let k = koszul(r, &vars).unwrap();
        let h = HomotopySystem::new(&k, &[r.zero()]).unwrap();
        assert!(h.sigmas[0].iter().all(|m| m.is_zero()));
    }

    #[test]
    fn non_annihilating_element_is_rejected() {
        let r = ring();
        let f = parse_polynomial_list(r, &r.default_names(), "x1^3").unwrap();
        let k = koszul(r, &f).unwrap();
        let g = parse_polynomial_list(r, &r.default_names(), "x2^3").unwrap();
        let e = compute_homotopy(&k, &g[0]).unwrap_err();
        assert!(matches!(e, AlgebraError::AnnihilationError(_)));
    }
}
