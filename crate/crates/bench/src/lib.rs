//! Shared inputs for the pipeline benchmarks.

use torext_core::ci_ops::{ci_operators, higher_ci, lift_resolution, HigherCISystem, LiftedResolution};
use torext_core::ext_rmodule::{ext_rmodule, HalfGradedRModule};
use torext_core::fixtures;
use torext_core::resolution::resolve;

/// Lift of the R-resolution of N2 over the cubes, `length` steps.
pub fn n2_lift(length: usize) -> LiftedResolution {
    let ci = fixtures::cubes();
    let rres = resolve(&fixtures::n(2), length).expect("resolve");
    lift_resolution(&rres, &ci.f, length).expect("lift")
}

pub fn n2_system(length: usize, nmax: usize) -> HigherCISystem {
    let l = n2_lift(length);
    let ops = ci_operators(&l).expect("operators");
    higher_ci(&l, &ops, nmax).expect("higher operators")
}

/// Even part of Ext_R(N2,k).
pub fn n2_even_ext() -> HalfGradedRModule {
    let l = n2_lift(9);
    ext_rmodule(&l, &ci_operators(&l).expect("operators")).expect("ext").half(0)
}
