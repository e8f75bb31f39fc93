use torext_core::ci_ops::*;
use torext_core::field_poly::{compose, GradedFreeModule, GradedMap};
use torext_core::fixtures;
use torext_core::resolution::{betti, resolve, ModulePresentation};

fn system(m: &ModulePresentation, f: &[torext_core::field_poly::Polynomial], len: usize) -> HigherCISystem {
    let rres = resolve(m, len).unwrap();
    let l = lift_resolution(&rres, f, len).unwrap();
    let ops = ci_operators(&l).unwrap();
    higher_ci(&l, &ops, 4).unwrap()
}

#[test]
fn ci_operators_factor_the_square() {
    let ci = fixtures::cubes();
    let rres = resolve(&fixtures::n(2), 6).unwrap();
    let l = lift_resolution(&rres, &ci.f, 6).unwrap();
    let ops = ci_operators(&l).unwrap();
    for p in 2..=6 {
        let sq = compose(&l.t1(p - 1), &l.t1(p)).unwrap();
        let mut sum = GradedMap::zero(l.ring, l.term(p), l.term(p - 2), 0);
        for (i, fi) in ci.f.iter().enumerate() {
            let t = ops.get(i, p);
            let scaled = t.map_entries(|e| e.mul(fi));
            let mut s = scaled;
            s.degree_shift = 0;
            sum = sum.add(&s).unwrap();
        }
        assert_eq!(sum, sq, "p = {p}");
    }
}

#[test]
fn hypersurface_operator_is_a_unit() {
    // k over k[x1]/(x1^3): t_2 is an isomorphism on each G_p
    let ci = fixtures::cube_one_var();
    let rres = resolve(&ci.residue_field(), 6).unwrap();
    let l = lift_resolution(&rres, &ci.f, 6).unwrap();
    let ops = ci_operators(&l).unwrap();
    for p in 2..=6 {
        let m = ops.get(0, p).constant_part();
        assert_eq!(m.rows, 1);
        assert_ne!(m.get(0, 0), 0);
    }
}

#[test]
fn identities_for_n2() {
    let ci = fixtures::cubes();
    let sys = system(&fixtures::n(2), &ci.f, 8);
    for n in 0..=4 {
        assert!(sys.check_identities(n).unwrap(), "n = {n}");
    }
}

#[test]
fn identities_for_periodic_module() {
    let ci = fixtures::cube_one_var();
    let sys = system(&fixtures::periodic_one_var(), &ci.f, 8);
    for n in 0..=4 {
        assert!(sys.check_identities(n).unwrap(), "n = {n}");
    }
}

#[test]
fn gk_resolves_n2() {
    let ci = fixtures::cubes();
    let m = fixtures::n(2);
    let sys = system(&m, &ci.f, 8);
    let gk = build_gk(&sys).unwrap();
    let rep = verify_gk(&gk, &m, 6).unwrap();
    assert!(rep.ok(), "{rep:?}");
    let min = betti(&minimize_gk(&gk).unwrap()).unwrap();
    let direct = betti(&resolve(&m.over_s().unwrap(), 3).unwrap()).unwrap();
    assert_eq!(min.totals()[..4], direct.totals()[..]);
    assert!(min.totals()[4..].iter().all(|&n| n == 0));
    for i in 0..4 {
        for j in 0..12 {
            assert_eq!(min.get(i, j), direct.get(i, j), "({i},{j})");
        }
    }
}

#[test]
fn gk_for_periodic_module() {
    let ci = fixtures::cube_one_var();
    let m = fixtures::periodic_one_var();
    let sys = system(&m, &ci.f, 8);
    let gk = build_gk(&sys).unwrap();
    assert!(verify_gk(&gk, &m, 6).unwrap().ok());
    let min = betti(&minimize_gk(&gk).unwrap()).unwrap();
    assert_eq!(min.totals()[..3], [1, 1, 0]);
    assert_eq!(min.get(1, 2), 1);
}

#[test]
fn gk_of_the_ring_is_koszul() {
    let ci = fixtures::cubes();
    let r = ModulePresentation::cokernel_of_rows(
        ci.ring,
        Some(ci.quotient.clone()),
        GradedFreeModule::new(vec![0]),
        vec![vec![]],
    )
    .unwrap();
    let sys = system(&r, &ci.f, 4);
    let gk = build_gk(&sys).unwrap();
    assert_eq!((0..=3).map(|i| gk.rank(i)).collect::<Vec<_>>(), vec![1, 3, 3, 1]);
    assert!(verify_gk(&gk, &r, 3).unwrap().ok());
}

#[test]
fn block_structure_lists_each_operator() {
    let ci = fixtures::cubes();
    let sys = system(&fixtures::n(2), &ci.f, 6);
    let blocks = gk_block_structure(&sys, 2);
    // from G_2⊗K_0: t_1 to G_1⊗K_0, t_2 to G_0⊗K_1
    assert!(blocks.contains(&(1, (2, 0), (1, 0))));
    assert!(blocks.contains(&(2, (2, 0), (0, 1))));
    // from G_0⊗K_2 only t_0
    assert!(blocks.contains(&(0, (0, 2), (0, 1))));
    assert!(!blocks.iter().any(|(i, s, _)| *s == (0, 2) && *i > 0));
}

#[test]
fn wrong_sign_breaks_the_identities() {
    let ci = fixtures::cubes();
    let mut sys = system(&fixtures::n(2), &ci.f, 6);
    sys.t[2][3] = sys.t[2][3].neg();
    assert!(!sys.check_identities(2).unwrap());
    assert!(build_gk(&sys).is_err());
}

#[test]
fn only_regular_sequences_are_accepted() {
    use torext_core::fixtures::CompleteIntersection;
    assert!(CompleteIntersection::parse(3, 101, "x1^2,x1*x2").is_err());
    assert!(CompleteIntersection::parse(3, 101, "x1^2,x2^2-x1*x3").is_ok());
    assert!(CompleteIntersection::parse(2, 101, "x1*x2,x1*x2").is_err());
}
