//! Exact flag integrals against adaptive numerical quadrature of the
//! exported piecewise data, on every curve and blowup flag of the table.

mod common;

use common::quadrature;
use dp2_delta::catalog::{Atlas, Candidate};
use dp2_delta::delta;
use dp2_delta::rational::{qr, to_f64, Q};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn candidates() -> Vec<&'static Candidate> {
    let a = Atlas::get();
    a.curve_flags.iter().chain(&a.blowup_flags).collect()
}

#[test]
fn s_curve_matches_quadrature() {
    let mut n = 0;
    for c in candidates() {
        let numeric = quadrature::s_curve(&quadrature::exported(c));
        let exact = to_f64(&c.flag.s_curve);
        assert!((numeric - exact).abs() < TOL, "{} on {}: {numeric} vs {exact}", c.carrier, c.surface);
        n += 1;
    }
    assert!(n > 100);
}

#[test]
fn s_flag_matches_quadrature() {
    let mut n = 0;
    for c in candidates() {
        let pieces = quadrature::exported(c);
        for st in &c.flag.strata {
            let numeric = quadrature::s_flag(&pieces, &c.flag.family.labels, st);
            let exact = to_f64(&st.s_w);
            assert!(
                (numeric - exact).abs() < TOL,
                "{} at {} on {}: {numeric} vs {exact}",
                c.carrier,
                st.name,
                c.surface
            );
            n += 1;
        }
    }
    assert!(n > 300);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 512, failure_persistence: None, ..ProptestConfig::default() })]

    /// `h(v) >= 0` at every rational point of every flag.
    #[test]
    fn h_is_nonnegative(idx in any::<prop::sample::Index>(), st in any::<prop::sample::Index>(), t in 0i128..=1000) {
        let cs = candidates();
        let c = cs[idx.index(cs.len())];
        let strata = &c.flag.strata;
        let s = &strata[st.index(strata.len())];
        let tau = c.flag.family.tau;
        let v: Q = tau * qr(t, 1000);
        let h = delta::h_function(&c.flag.family, &s.stratum).unwrap();
        let piece = h.iter().find(|p| p.start <= v && v <= p.end).unwrap();
        prop_assert!(piece.h.eval(v) >= qr(0, 1), "h({v}) < 0 at {} on {}", s.name, c.surface);
    }
}

#[test]
fn h_is_nonnegative_on_every_piece() {
    for c in candidates() {
        for s in &c.flag.strata {
            for p in delta::h_function(&c.flag.family, &s.stratum).unwrap() {
                assert!(p.h.min_on(p.start, p.end) >= qr(0, 1), "{} on {}", s.name, c.surface);
            }
        }
    }
}
