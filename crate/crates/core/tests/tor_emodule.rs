use torext_core::ci_ops::{ci_operators, higher_ci, lift_resolution};
use torext_core::fixtures;
use torext_core::resolution::{betti, resolve};
use torext_core::tor_emodule::*;

fn tor_of(i: usize) -> EModule {
    let ci = fixtures::cubes();
    tor_emodule(&fixtures::n(i), &ci.f).unwrap()
}

fn rows(t: &torext_core::resolution::BettiTable, s: i32, n: usize) -> Vec<usize> {
    t.row(s)[..n].to_vec()
}

#[test]
fn n1_table() {
    let t = tor_of(1);
    assert_eq!(t.dims, vec![3, 6, 4, 1]);
    let b = e_free_resolution(&t, 5).betti();
    assert_eq!(rows(&b, 0, 6), vec![3, 9, 18, 30, 45, 63]);
    assert_eq!(rows(&b, 1, 6), vec![6, 15, 28, 45, 66, 91]);
    assert_eq!(rows(&b, 2, 6), vec![1, 3, 6, 10, 15, 21]);
}

#[test]
fn n2_and_n3_tables() {
    let t2 = tor_of(2);
    let b2 = e_free_resolution(&t2, 5).betti();
    assert_eq!(b2.totals(), vec![16, 36, 64, 100, 144, 196]);
    assert_eq!(rows(&b2, 0, 6), vec![6, 15, 28, 45, 66, 91]);
    assert_eq!(rows(&b2, 1, 6), vec![10, 21, 36, 55, 78, 105]);
    let t3 = tor_of(3);
    let b3 = e_free_resolution(&t3, 5).betti();
    assert_eq!(b3.totals(), vec![25, 49, 81, 121, 169, 225]);
    assert_eq!(rows(&b3, 0, 6), vec![10, 21, 36, 55, 78, 105]);
    assert_eq!(rows(&b3, 1, 6), vec![15, 28, 45, 66, 91, 120]);
}

#[test]
fn strands_match_r_betti_numbers() {
    let ci = fixtures::cubes();
    let n2 = fixtures::n(2);
    let rb = betti(&resolve(&n2, 11).unwrap()).unwrap().totals();
    let t = tor_emodule(&n2, &ci.f).unwrap();
    let b = e_free_resolution(&t, 5).betti();
    for i in 0..6 {
        assert_eq!(b.get(i, i), rb[2 * i as usize]);
        assert_eq!(b.get(i, i + 1), rb[2 * i as usize + 1]);
    }
}

#[test]
fn resolutions_are_exact() {
    for i in 1..=3 {
        let t = tor_of(i);
        assert!(e_free_resolution(&t, 4).verify(&t));
    }
}

#[test]
fn t_prime_of_n2() {
    let sp = submodule_t_prime(&tor_of(2));
    assert_eq!(sp.t_prime.trimmed().dims, vec![6, 3, 1]);
    assert_eq!(sp.t_double.dims, vec![0, 10, 9, 3]);
    // linear resolutions: T' in slope 0, T'' in slope 1
    let a = e_free_resolution(&sp.t_prime, 4).betti();
    assert_eq!(a.slopes(), vec![0]);
    let b = e_free_resolution(&sp.t_double, 4).betti();
    assert_eq!(b.slopes(), vec![1]);
}

#[test]
fn generated_in_degrees_zero_and_one() {
    for i in 2..=3 {
        let t = tor_of(i);
        assert!(t.minimal_generators().iter().all(|(d, _)| *d <= 1));
    }
}

#[test]
fn regularities() {
    for i in 2..=3 {
        let r = e_regularity(&tor_of(i), default_window(3));
        assert_eq!(r.reg, 1);
        assert!(r.stabilized);
    }
    assert_eq!(e_regularity(&tor_of(1), default_window(3)).reg, 2);
}

#[test]
fn regularity_over_subalgebras() {
    let t = tor_of(2);
    let w = default_window(3);
    let reg = e_regularity(&t, w).reg;
    for p in 1..=2 {
        let r = regularity_over_sub(&t, p, w).reg;
        assert!(reg <= r && r <= reg + 3 - p as i32, "p={p}: {reg} {r}");
    }
}

#[test]
fn hmf_ranks_from_betti_numbers() {
    let rb = betti(&resolve(&fixtures::n(2), 11).unwrap()).unwrap().totals();
    let h = infer_hmf_ranks(&rb, 3).unwrap();
    assert_eq!(h.b0, vec![4, 1, 1]);
    assert_eq!(h.b1, vec![4, 3, 3]);
    for i in 0..6 {
        assert_eq!(predicted_betti(&h.b0, i) as usize, rb[2 * i]);
        assert_eq!(predicted_betti(&h.b1, i) as usize, rb[2 * i + 1]);
    }
    // k itself does not have the pattern
    let kb = betti(&resolve(&fixtures::cubes().residue_field(), 7).unwrap())
        .unwrap()
        .totals();
    assert!(infer_hmf_ranks(&kb, 3).is_err());
}

#[test]
fn leading_terms_match_ranks() {
    let sp = submodule_t_prime(&tor_of(2));
    let a = leading_term_module(&sp.t_prime).unwrap();
    assert!(a.ok());
    assert_eq!(a.b, vec![4, 1, 1]);
    let b = leading_term_module(&sp.t_double).unwrap();
    assert!(b.ok());
    assert_eq!(b.b, vec![4, 3, 3]);
}

#[test]
fn leading_terms_need_single_generating_degree() {
    let sp = submodule_t_prime(&tor_of(1));
    assert!(leading_term_module(&sp.t_double).is_err());
}

#[test]
fn first_syzygy_strands() {
    let r = first_syzygy_check(&tor_of(2), &tor_of(3), 5);
    assert!(r.holds());
}

#[test]
fn main7_complex_for_n2() {
    let ci = fixtures::cubes();
    let n2 = fixtures::n(2);
    let rres = resolve(&n2, 9).unwrap();
    let l = lift_resolution(&rres, &ci.f, 9).unwrap();
    let sys = higher_ci(&l, &ci_operators(&l).unwrap(), 3).unwrap();
    let tor = tor_emodule(&n2, &ci.f).unwrap();
    let m = build_main7_complex(&sys, 4, Some(&tor)).unwrap();
    assert!(m.ok());
    assert_eq!(m.upper_ranks, vec![6, 15, 28, 45, 66]);
    assert_eq!(m.lower_ranks, vec![10, 21, 36, 55, 78]);
    let b = m.complex.betti();
    assert_eq!(b.row(0)[..5].to_vec(), vec![6, 15, 28, 45, 66]);
    assert_eq!(b.row(1)[..5].to_vec(), vec![10, 21, 36, 55, 78]);
    assert!(m.complex.verify(&m.h0));
}

#[test]
fn main7_for_periodic_module() {
    // coker(x1^2) over k[x1]/(x1^3): both rows E ← E ← …
    let ci = fixtures::cube_one_var();
    let m = fixtures::periodic_one_var();
    let rres = resolve(&m, 7).unwrap();
    let l = lift_resolution(&rres, &ci.f, 7).unwrap();
    let sys = higher_ci(&l, &ci_operators(&l).unwrap(), 3).unwrap();
    let tor = tor_emodule(&m, &ci.f).unwrap();
    let c = build_main7_complex(&sys, 3, Some(&tor)).unwrap();
    assert!(c.ok());
    assert_eq!(c.upper_ranks, vec![1, 1, 1, 1]);
    assert_eq!(c.h0.dims, vec![1, 1]);
}
