use proptest::prelude::*;

use torext_core::algebra::GradedAlgebra;
use torext_core::bgg::bgg_l;
use torext_core::ci_ops::{ci_operators, lift_resolution};
use torext_core::ext_rmodule::ext_rmodule;
use torext_core::field_poly::{compose, GradedFreeModule, GradedMap, Monomial, Polynomial, PrimeField, Ring};
use torext_core::fixtures;
use torext_core::groebner::{buchberger, ModuleOrder};
use torext_core::homotopy::{e_action_on_tor, verify_homotopy_relations, HomotopySystem};
use torext_core::linmod::{FreeMap, LinModule};
use torext_core::resolution::{resolve, ModulePresentation};

const P: u32 = 101;

fn ring3() -> Ring {
    Ring::new(PrimeField::new(P).unwrap(), 3).unwrap()
}

/// Homogeneous polynomial of degree `d` with the given coefficients on the
/// monomials of that degree (cycled).
fn form(r: Ring, d: u32, coeffs: &[i64]) -> Polynomial {
    let mons = Monomial::all_of_degree(3, d);
    Polynomial::from_terms(
        r,
        mons.into_iter()
            .zip(coeffs.iter().cycle())
            .map(|(m, &c)| (m, c))
            .collect(),
    )
}

/// Random homogeneous map between free modules with twists `src`, `tgt`.
fn random_map(r: Ring, src: &[i32], tgt: &[i32], coeffs: &[i64]) -> GradedMap {
    let mut k = 0;
    let cols = src
        .iter()
        .map(|&a| {
            tgt.iter()
                .enumerate()
                .filter_map(|(i, &b)| {
                    if a < b {
                        return None;
                    }
                    let n = Monomial::all_of_degree(3, (a - b) as u32).len();
                    let c: Vec<i64> = (0..n).map(|t| coeffs[(k + t) % coeffs.len()]).collect();
                    k += n;
                    let p = form(r, (a - b) as u32, &c);
                    (!p.is_zero()).then_some((i, p))
                })
                .collect()
        })
        .collect();
    GradedMap::new(r, GradedFreeModule::new(src.to_vec()), GradedFreeModule::new(tgt.to_vec()), 0, cols).unwrap()
}

fn twists() -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(0i32..3, 1..4)
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-5i64..6, 8..24)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_matches_integer_arithmetic(a in -1000i64..1000, b in -1000i64..1000) {
        let f = PrimeField::new(P).unwrap();
        let (x, y) = (f.from_i64(a), f.from_i64(b));
        let red = |v: i64| v.rem_euclid(P as i64) as u32;
        prop_assert_eq!(f.add(x, y), red(a + b));
        prop_assert_eq!(f.sub(x, y), red(a - b));
        prop_assert_eq!(f.mul(x, y), red(a * b));
        if x != 0 {
            prop_assert_eq!(f.mul(x, f.inv(x)), 1);
        }
    }

    #[test]
    fn compose_is_associative(
        t0 in twists(), t1 in twists(), t2 in twists(), t3 in twists(),
        c0 in coeffs(), c1 in coeffs(), c2 in coeffs(),
    ) {
        let r = ring3();
        // twists grow along the chain so maps can be nonzero
        let lift = |t: &[i32], s: i32| t.iter().map(|x| x + s).collect::<Vec<_>>();
        let (a, b, c, d) = (t0.clone(), lift(&t1, 2), lift(&t2, 4), lift(&t3, 6));
        let f = random_map(r, &b, &a, &c0);
        let g = random_map(r, &c, &b, &c1);
        let h = random_map(r, &d, &c, &c2);
        let left = compose(&compose(&f, &g).unwrap(), &h).unwrap();
        let right = compose(&f, &compose(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn constructor_checks_homogeneity(
        src in twists(), tgt in twists(), cs in coeffs(), j in 0usize..3, bump in 1u32..3,
    ) {
        let r = ring3();
        let src: Vec<i32> = src.iter().map(|d| d + 2).collect();
        let m = random_map(r, &src, &tgt, &cs);
        // re-checking a valid map succeeds
        let again = GradedMap::new(r, m.source.clone(), m.target.clone(), 0, m.columns().to_vec());
        prop_assert!(again.is_ok());
        // adding a term of the wrong degree is always caught
        let j = j % src.len();
        let mut cols = m.columns().to_vec();
        let d = (src[j] - tgt[0]) as u32 + bump;
        let bad = form(r, d, &[1]);
        match cols[j].iter_mut().find(|(i, _)| *i == 0) {
            Some((_, p)) => *p = p.add(&bad),
            None => cols[j].insert(0, (0, bad)),
        }
        let res = GradedMap::new(r, m.source.clone(), m.target.clone(), 0, cols);
        prop_assert!(res.is_err());
    }

    #[test]
    fn groebner_is_order_insensitive(
        c in prop::collection::vec(coeffs(), 2..5),
        seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let r = ring3();
        let gens: Vec<Vec<Polynomial>> = c
            .iter()
            .enumerate()
            .map(|(i, cs)| vec![form(r, 1 + (i as u32 % 2), cs), form(r, 2 + (i as u32 % 2), &cs[1..])])
            .collect();
        let degrees = [0, -1];
        let mut shuffled = gens.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let a = buchberger(r, &degrees, &gens, ModuleOrder::TopGrevlex, None, Some(6)).unwrap();
        let b = buchberger(r, &degrees, &shuffled, ModuleOrder::TopGrevlex, None, Some(6)).unwrap();
        prop_assert_eq!(a.leading_terms(), b.leading_terms());
        prop_assert_eq!(a.to_dense(), b.to_dense());
    }

    #[test]
    fn random_exterior_modules_give_complexes(
        tgt in prop::collection::vec(0i32..2, 1..3),
        src in prop::collection::vec(1i32..3, 0..3),
        cs in prop::collection::vec(0u32..101, 64),
    ) {
        let f = PrimeField::new(P).unwrap();
        let alg = GradedAlgebra::exterior(f, 3);
        let mut k = 0;
        let images = src
            .iter()
            .map(|&a| {
                let n = torext_core::algebra::free_dim(&alg, &tgt, a);
                let v: Vec<u32> = (0..n).map(|t| cs[(k + t) % cs.len()]).collect();
                k += n;
                v
            })
            .collect();
        let map = FreeMap { source: src.clone(), target: tgt.clone(), images };
        let (t, _) = LinModule::coker_free(&alg, &map, 0, 4);
        prop_assert!(t.check_anticommute());
        let l = bgg_l(&t).unwrap();
        prop_assert!(l.check_d_squared().is_ok());
        // additivity under direct sums
        let ls = bgg_l(&t.direct_sum(&t)).unwrap();
        for i in l.lo..=l.hi() {
            prop_assert_eq!(ls.rank(i), 2 * l.rank(i));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    /// M = S/(cubes, g) for a random form g: homotopies for the cubes
    /// satisfy their identity, the relations hold, and Tor is an E-module.
    #[test]
    fn random_homotopy_fixtures(d in 1u32..3, cs in coeffs()) {
        let ci = fixtures::cubes();
        let r = ci.ring;
        let g = form(r, d, &cs);
        prop_assume!(!g.is_zero());
        let mut row = ci.f.clone();
        row.push(g);
        let m = ModulePresentation::cokernel_of_rows(r, None, GradedFreeModule::new(vec![0]), vec![row]).unwrap();
        let res = resolve(&m, 3).unwrap();
        let h = HomotopySystem::new(&res, &ci.f).unwrap();
        prop_assert!(h.check_defining_identity().unwrap());
        prop_assert!(verify_homotopy_relations(&h).unwrap().all_certified());
        let t = e_action_on_tor(&h).unwrap();
        prop_assert!(t.check_anticommute());
    }

    /// The CI operators on a random quotient of R commute on Ext.
    #[test]
    fn chi_operators_commute(cs in coeffs()) {
        let ci = fixtures::cubes();
        let r = ci.ring;
        let g = form(r, 1, &cs);
        prop_assume!(!g.is_zero());
        let m = ModulePresentation::cokernel_of_rows(
            r,
            Some(ci.quotient.clone()),
            GradedFreeModule::new(vec![0]),
            vec![vec![g]],
        )
        .unwrap();
        let rres = resolve(&m, 5).unwrap();
        let l = lift_resolution(&rres, &ci.f, 5).unwrap();
        let e = ext_rmodule(&l, &ci_operators(&l).unwrap()).unwrap();
        prop_assert!(e.check_commute());
    }
}
