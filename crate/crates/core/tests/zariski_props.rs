//! Zariski decomposition properties on random pseudo-effective classes of
//! every table surface and of the smooth surface.
//!
//! The checks use their own intersection form, determinant and reference
//! decomposition, not the library's.

mod common;

use common::zariski::{build_class, run_model};
use dp2_delta::ade::AdeType;
use dp2_delta::rational::q;
use dp2_delta::report::row_model;
use dp2_delta::surface::{build_surface, SingularitySpec, SurfaceModel};
use dp2_delta::table;
use dp2_delta::zariski::{zariski_decompose, CurveSystem};
use proptest::prelude::*;
use proptest::test_runner::Config;

const CASES: u32 = 100;

fn models() -> Vec<SurfaceModel> {
    let mut ms: Vec<SurfaceModel> = table::rows().iter().map(|r| row_model(r, None)).collect();
    ms.push(build_surface(&SingularitySpec::new(AdeType::smooth(), None)).unwrap());
    ms
}

#[test]
fn decomposition_properties_on_every_model() {
    for m in models() {
        let sys = CurveSystem::from_model(&m);
        run_model(&sys, CASES).unwrap_or_else(|e| panic!("{} ({} lines): {e}", m.ade, m.line_count));
    }
}

proptest! {
    #![proptest_config(Config { cases: 64, failure_persistence: None, ..Config::default() })]

    /// A nef class is its own positive part.
    #[test]
    fn nef_classes_are_fixed(k in 1i128..=5, a in 0i128..=4) {
        let m = build_surface(&SingularitySpec::new(AdeType::smooth(), None)).unwrap();
        let sys = CurveSystem::from_model(&m);
        // k(-K) + a h is nef: h meets every line nonnegatively.
        let mut d = build_class(&sys, &[], k);
        d[0] += q(a);
        let z = zariski_decompose(&sys, &d).unwrap();
        prop_assert!(z.negative.is_empty());
        prop_assert_eq!(z.positive, d);
    }
}
