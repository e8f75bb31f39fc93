//! Standard examples: S = F_101[x1,x2,x3], f = cubes, R = S/f, and the
//! syzygies N_i of the residue field over R.

use crate::error::{AlgebraError, Result};
use crate::field_poly::{parse_polynomial_list, GradedFreeModule, Polynomial, PrimeField, Ring, DEFAULT_PRIME};
use crate::groebner::QuotientRing;
use crate::resolution::{syzygy_module, ModulePresentation};

/// A complete intersection R = S/(f_1,…,f_c).
#[derive(Clone, Debug)]
pub struct CompleteIntersection {
    pub ring: Ring,
    pub f: Vec<Polynomial>,
    pub quotient: QuotientRing,
}

impl CompleteIntersection {
    /// Fails unless f is a homogeneous regular sequence, detected by
    /// HS(S/f) = Π(1 − t^{deg f_i}) / (1 − t)^n.
    pub fn new(ring: Ring, f: Vec<Polynomial>) -> Result<Self> {
        if f.iter().any(|p| p.is_zero() || p.degree() == Some(0)) {
            return Err(AlgebraError::InvalidParameter("f must consist of nonzero forms of positive degree".into()));
        }
        let quotient = QuotientRing::new(ring, &f)?;
        let mut want = vec![1i64];
        for p in &f {
            let d = p.degree().unwrap() as usize;
            let mut next = vec![0i64; want.len() + d];
            for (i, &a) in want.iter().enumerate() {
                next[i] += a;
                next[i + d] -= a;
            }
            want = next;
        }
        if quotient.hilbert_numerator() != want {
            return Err(AlgebraError::InvalidParameter("f is not a regular sequence".into()));
        }
        Ok(CompleteIntersection { ring, f, quotient })
    }

    pub fn parse(nvars: usize, p: u32, f: &str) -> Result<Self> {
        let ring = Ring::new(PrimeField::new(p)?, nvars)?;
        let f = parse_polynomial_list(ring, &ring.default_names(), f)?;
        Self::new(ring, f)
    }

    pub fn c(&self) -> usize {
        self.f.len()
    }

    pub fn residue_field(&self) -> ModulePresentation {
        ModulePresentation::residue_field(self.ring, Some(self.quotient.clone()))
    }

    /// i-th syzygy of k over R.
    pub fn syzygy_of_k(&self, i: usize) -> Result<ModulePresentation> {
        syzygy_module(&self.residue_field(), i)
    }
}

/// F_101[x1,x2,x3] modulo the cubes of the variables.
pub fn cubes() -> CompleteIntersection {
    CompleteIntersection::parse(3, DEFAULT_PRIME, "x1^3,x2^3,x3^3").expect("fixture")
}

/// F_101[x1] modulo x1^3.
pub fn cube_one_var() -> CompleteIntersection {
    CompleteIntersection::parse(1, DEFAULT_PRIME, "x1^3").expect("fixture")
}

/// N_i over the cubes fixture.
pub fn n(i: usize) -> ModulePresentation {
    cubes().syzygy_of_k(i).expect("fixture")
}

/// coker(x1^2) over F_101[x1]/(x1^3).
pub fn periodic_one_var() -> ModulePresentation {
    let ci = cube_one_var();
    let r = ci.ring;
    let x2 = parse_polynomial_list(r, &r.default_names(), "x1^2").expect("fixture");
    ModulePresentation::cokernel_of_rows(r, Some(ci.quotient), GradedFreeModule::new(vec![0]), vec![x2])
        .expect("fixture")
}

/// F_101[x1,x2,x3] modulo fourth powers.
pub fn fourth_powers() -> CompleteIntersection {
    CompleteIntersection::parse(3, DEFAULT_PRIME, "x1^4,x2^4,x3^4").expect("fixture")
}

/// coker [[x1,x2,x3],[x2,x3,x1]] over the fourth powers.
pub fn two_by_three() -> ModulePresentation {
    let ci = fourth_powers();
    let r = ci.ring;
    let p = |s: &str| parse_polynomial_list(r, &r.default_names(), s).expect("fixture");
    ModulePresentation::cokernel_of_rows(
        r,
        Some(ci.quotient),
        GradedFreeModule::new(vec![0, 0]),
        vec![p("x1,x2,x3"), p("x2,x3,x1")],
    )
    .expect("fixture")
}
