use torext_core::complexes::reduce_mod_m;
use torext_core::field_poly::{GradedFreeModule, PrimeField, Ring};
use torext_core::fixtures;
use torext_core::resolution::{betti, resolve, resolve_groebner, syzygy_module, ModulePresentation};

fn s3() -> Ring {
    Ring::new(PrimeField::new(101).unwrap(), 3).unwrap()
}

#[test]
fn residue_field_over_s_is_koszul() {
    let m = ModulePresentation::residue_field(s3(), None);
    let c = resolve(&m, 4).unwrap();
    let b = betti(&c).unwrap();
    assert_eq!(b.totals(), vec![1, 3, 3, 1, 0]);
    assert_eq!(b.row(0), vec![1, 3, 3, 1, 0]);
}

#[test]
fn groebner_path_agrees_on_residue_field() {
    let m = ModulePresentation::residue_field(s3(), None);
    let c = resolve_groebner(&m, 3).unwrap();
    assert!(c.is_minimal());
    assert_eq!(betti(&c).unwrap().totals(), vec![1, 3, 3, 1]);
}

#[test]
fn residue_field_over_cubes() {
    let ci = fixtures::cubes();
    let c = resolve(&ci.residue_field(), 6).unwrap();
    c.check_d_squared().unwrap();
    assert!(c.is_minimal());
    // (1+t)^3 / (1-t^2)^3
    assert_eq!(betti(&c).unwrap().totals(), vec![1, 3, 6, 10, 15, 21, 28]);
}

#[test]
fn syzygies_of_k() {
    let ci = fixtures::cubes();
    let n1 = ci.syzygy_of_k(1).unwrap();
    assert_eq!(n1.generators().degrees, vec![1, 1, 1]);
    let n3 = ci.syzygy_of_k(3).unwrap();
    assert_eq!(n3.generators().rank(), 10);
    assert_eq!(syzygy_module(&n1, 0).unwrap().generators().rank(), 3);
}

#[test]
fn non_finite_length_over_s() {
    // S/(x1 x2): resolution 0 <- S <- S(-2) <- 0
    let r = s3();
    let p = torext_core::field_poly::parse_polynomial(r, &r.default_names(), "x1*x2").unwrap();
    let m = ModulePresentation::cokernel_of_rows(r, None, GradedFreeModule::free(1, 0), vec![vec![p]])
        .unwrap();
    let c = resolve(&m, 3).unwrap();
    let b = betti(&c).unwrap();
    assert_eq!(b.totals(), vec![1, 1, 0, 0]);
    assert_eq!(b.get(1, 2), 1);
}

#[test]
fn betti_columns_match_homology_of_reduction() {
    let ci = fixtures::cubes();
    let c = resolve(&ci.residue_field(), 4).unwrap();
    let k = reduce_mod_m(&c);
    let b = betti(&c).unwrap();
    for i in 0..4 {
        assert_eq!(k.homology(i).total(), b.total(i));
    }
}

#[test]
fn n2_betti_totals() {
    let n2 = fixtures::n(2);
    let c = resolve(&n2, 11).unwrap();
    let b = betti(&c).unwrap();
    assert_eq!(
        b.totals(),
        vec![6, 10, 15, 21, 28, 36, 45, 55, 66, 78, 91, 105]
    );
}
