use super::{buchberger, normal_form, GroebnerBasis, ModuleOrder};
use crate::error::{AlgebraError, Result};
use crate::field_poly::{Monomial, Polynomial, Ring};

/// R = S/I with a reduced Gröbner basis of I.
#[derive(Clone, Debug)]
pub struct QuotientRing {
    pub ring: Ring,
    pub ideal: Vec<Polynomial>,
    gb: GroebnerBasis,
    leads: Vec<Monomial>,
}

impl QuotientRing {
    pub fn new(ring: Ring, ideal: &[Polynomial]) -> Result<Self> {
        let gens: Vec<Vec<Polynomial>> = ideal.iter().map(|f| vec![f.clone()]).collect();
        let gb = buchberger(ring, &[0], &gens, ModuleOrder::TopGrevlex, None, None)?;
        if gb.elements.iter().any(|e| e.lead().unwrap().0.is_one()) {
            return Err(AlgebraError::InvalidParameter("ideal is the unit ideal".into()));
        }
        let leads = gb.leading_terms().into_iter().map(|(m, _)| m).collect();
        Ok(QuotientRing {
            ring,
            ideal: ideal.to_vec(),
            gb,
            leads,
        })
    }

    pub fn groebner_basis(&self) -> Vec<Polynomial> {
        self.gb.to_dense().into_iter().map(|mut v| v.remove(0)).collect()
    }

    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        if self.leads.is_empty() {
            return p.clone();
        }
        normal_form(std::slice::from_ref(p), &self.gb).remove(0)
    }

    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.leads.iter().any(|l| l.divides(m))
    }

    /// Standard monomials of degree d, decreasing in grevlex.
    pub fn standard_monomials(&self, d: u32) -> Vec<Monomial> {
        Monomial::all_of_degree(self.ring.nvars, d)
            .into_iter()
            .filter(|m| self.is_standard(m))
            .collect()
    }

    /// True when R has finite length (every variable has a pure power in
    /// the leading ideal).
    pub fn is_artinian(&self) -> bool {
        (0..self.ring.nvars).all(|i| {
            self.leads
                .iter()
                .any(|l| l.exp(i) > 0 && l.degree() == l.exp(i))
        })
    }

    /// Largest degree with a standard monomial, for artinian R.
    pub fn top_degree(&self) -> Option<u32> {
        if !self.is_artinian() {
            return None;
        }
        let mut d = 0;
        let mut last = 0;
        loop {
            if !self.standard_monomials(d).is_empty() {
                last = d;
            } else if d > last + self.leads.iter().map(|l| l.degree()).max().unwrap_or(1) {
                return Some(last);
            }
            d += 1;
        }
    }

    pub fn hilbert_function(&self, through: u32) -> Vec<usize> {
        (0..=through).map(|d| self.standard_monomials(d).len()).collect()
    }

    /// K(t) with HS(R) = K(t)/(1−t)^n. By the Taylor resolution of the
    /// leading ideal, deg K is at most the degree of the lcm of all leads.
    pub fn hilbert_numerator(&self) -> Vec<i64> {
        let n = self.ring.nvars;
        let top = self
            .leads
            .iter()
            .fold(Monomial::one(), |a, l| a.lcm(l))
            .degree();
        let mut k: Vec<i64> = self.hilbert_function(top).iter().map(|&h| h as i64).collect();
        for _ in 0..n {
            for d in (1..k.len()).rev() {
                k[d] -= k[d - 1];
            }
        }
        while k.len() > 1 && k.last() == Some(&0) {
            k.pop();
        }
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_poly::{parse_polynomial_list, PrimeField};

    #[test]
    fn cubes_box() {
        let r = Ring::new(PrimeField::new(101).unwrap(), 3).unwrap();
        let f = parse_polynomial_list(r, &r.default_names(), "x1^3,x2^3,x3^3").unwrap();
        let q = QuotientRing::new(r, &f).unwrap();
        assert!(q.is_artinian());
        assert_eq!(q.top_degree(), Some(6));
        let h = q.hilbert_function(7);
        assert_eq!(h, vec![1, 3, 6, 7, 6, 3, 1, 0]);
        assert_eq!(h.iter().sum::<usize>(), 27);
        // (1 - t^3)^3
        assert_eq!(q.hilbert_numerator(), vec![1, 0, 0, -3, 0, 0, 3, 0, 0, -1]);
    }
}
