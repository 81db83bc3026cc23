use std::f64::consts::PI;

use proptest::prelude::*;

use skewfork::attractor::{pullback_delimiters, repulsive_middle, AttractorConfig, FiberGrid};
use skewfork::construct::{
    a1_from_alphas, bump_table, change_of_variables, epsilon1, project_onto_span, realize_band_spectrum,
};
use skewfork::criteria::{cubic_verdict, general_h_verdict, Bounds, HParams};
use skewfork::diagram::{scan_lambda, BifurcationKind, DiagramConfig, Pattern};
use skewfork::dynamics::{autonomous_cubic, flow_map};
use skewfork::spectrum::{lyapunov_on_equilibrium, sacker_sell, EquilibriumRef, SpectrumInterval};
use skewfork::twoparam::{mu_hat, upper_copy_exists, TwoParamConfig};
use skewfork::{CoefficientFn, Driver, Family, TableEntry};

fn trig_driver(c: &[f64]) -> Driver {
    Driver::periodic(2.0 * PI)
        .with("a3", CoefficientFn::trig(1.0 + c[0].abs(), vec![0.5 * c[1]], vec![]))
        .with("a2", CoefficientFn::trig(c[2], vec![c[3]], vec![0.5 * c[4]]))
        .with("a1", CoefficientFn::trig(c[5], vec![c[6], 0.3 * c[7]], vec![c[8]]))
}

fn qp_driver(c: &[f64]) -> Driver {
    Driver::quasi_periodic(vec![1.0, 2f64.sqrt()])
        .with("a3", CoefficientFn::constant(1.0 + c[0].abs()))
        .with("a2", CoefficientFn::constant(c[1]))
        .with(
            "a1",
            CoefficientFn::trig_multi(c[2], vec![vec![c[3]], vec![c[4]]], vec![vec![c[5]], vec![]]),
        )
}

fn family() -> Family {
    Family::cubic("a3", "a2", "a1")
}

fn consistent_tuple() -> impl Strategy<Value = (Bounds, SpectrumInterval, (f64, f64))> {
    (
        -3.0..3.0f64,
        0.01..3.0f64,
        0.1..3.0f64,
        0.0..2.0f64,
        0.0..1.0f64,
        0.0..1.0f64,
        -4.0..4.0f64,
        0.0..3.0f64,
    )
        .prop_map(|(k1, dk, r1, dr, u, w, a, da)| {
            let k2 = k1 + dk;
            let lo = k1 + 1e-3 * dk + u * 0.998 * dk;
            let hi = lo + w * (k2 - 1e-3 * dk - lo);
            (
                Bounds::new(k1, k2, r1, r1 + dr),
                SpectrumInterval::exact(lo, hi),
                (a, a + da),
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn shift_is_time_offset(c in prop::collection::vec(-1.0..1.0f64, 9), s in -20.0..20.0f64, t in -20.0..20.0f64) {
        let d = trig_driver(&c);
        for id in ["a1", "a2", "a3"] {
            let direct = d.eval(id, s + t).unwrap();
            let shifted = d.shifted(s).eval(id, t).unwrap();
            prop_assert!((direct - shifted).abs() <= 1e-12 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn bounds_enclose_values(c in prop::collection::vec(-1.0..1.0f64, 9), ts in prop::collection::vec(-100.0..100.0f64, 150)) {
        let d = trig_driver(&c);
        let (lo, hi) = d.bounds("a1").unwrap();
        for t in ts {
            let v = d.eval("a1", t).unwrap();
            prop_assert!(lo <= v + 1e-12 && v <= hi + 1e-12, "{v} outside [{lo}, {hi}]");
        }
    }

    #[test]
    fn periodic_mean_is_period_independent(c in prop::collection::vec(-1.0..1.0f64, 9), k in 1u32..5) {
        let d = trig_driver(&c);
        let p = 2.0 * PI;
        let one = d.birkhoff("a1", p, p).unwrap().mean;
        let many = d.birkhoff("a1", f64::from(k) * p, p).unwrap().mean;
        prop_assert!((one - many).abs() <= 1e-10, "{one} vs {many}");
    }

    #[test]
    fn zero_is_invariant(c in prop::collection::vec(-1.0..1.0f64, 9), t0 in -5.0..5.0f64, t1 in -5.0..5.0f64) {
        prop_assert_eq!(flow_map(&family(), &trig_driver(&c), t0, 0.0, t1, 1e-8).unwrap(), 0.0);
    }

    #[test]
    fn zero_exponent_is_mean_plus_lambda(c in prop::collection::vec(-1.0..1.0f64, 9), lambda in -2.0..2.0f64) {
        let d = trig_driver(&c);
        let e = lyapunov_on_equilibrium(&family().with_lambda(lambda), &d, EquilibriumRef::Zero, 100.0, 1e-8).unwrap();
        let sp = sacker_sell(&d, "a1", 1.0, 1.0).unwrap();
        prop_assert!((e.value - (sp.lo + lambda)).abs() <= 1e-9, "{} vs {}", e.value, sp.lo + lambda);
    }

    #[test]
    fn spectrum_shifts_with_constants(c in prop::collection::vec(-1.0..1.0f64, 6), shift in -3.0..3.0f64) {
        let d = qp_driver(&c);
        let f = d.function("a1").unwrap().clone();
        let g = CoefficientFn::sum(vec![f.clone(), CoefficientFn::constant(shift)]);
        let d2 = d.clone().with("g", g);
        let a = sacker_sell(&d, "a1", 400.0, 20.0).unwrap();
        let b = sacker_sell(&d2, "g", 400.0, 20.0).unwrap();
        prop_assert!((b.lo - a.lo - shift).abs() <= 1e-9 && (b.hi - a.hi - shift).abs() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn delimiters_are_equilibria_with_middle_between(c in prop::collection::vec(-1.0..1.0f64, 9)) {
        let d = trig_driver(&c);
        let tol = 1e-8;
        let grid = FiberGrid::uniform(&d, 8).unwrap();
        let cfg = AttractorConfig::new(tol).with_independent_fibers();
        let slice = pullback_delimiters(&family(), &d, &grid, &cfg).unwrap();
        for w in slice.fibers.windows(2) {
            let carried = flow_map(&family(), &d, w[0].s, w[0].beta, w[1].s, tol).unwrap();
            prop_assert!((carried - w[1].beta).abs() <= 5.0 * tol, "β {} vs {}", carried, w[1].beta);
            let carried = flow_map(&family(), &d, w[0].s, w[0].alpha, w[1].s, tol).unwrap();
            prop_assert!((carried - w[1].alpha).abs() <= 5.0 * tol, "α {} vs {}", carried, w[1].alpha);
        }
        if let Ok(k) = repulsive_middle(&family(), &d, &grid, &AttractorConfig::new(tol)) {
            for (i, f) in slice.fibers.iter().enumerate() {
                if k.converged[i] {
                    prop_assert!(f.alpha < k.values[i] && k.values[i] < f.beta);
                }
            }
        }
    }

    #[test]
    fn delimiters_monotone_in_parameters(c in prop::collection::vec(-1.0..1.0f64, 9), p in -1.0..1.0f64, dp in 0.05..0.5f64) {
        let d = trig_driver(&c);
        let tol = 1e-8;
        let grid = FiberGrid::uniform(&d, 8).unwrap();
        let cfg = AttractorConfig::new(tol);
        let at = |f: Family| pullback_delimiters(&f, &d, &grid, &cfg).unwrap();
        let (l0, l1) = (at(family().with_lambda(p)), at(family().with_lambda(p + dp)));
        let (m0, m1) = (at(family().with_mu(p)), at(family().with_mu(p + dp)));
        let slack = 2.0 * tol;
        for i in 0..8 {
            prop_assert!(l1.fibers[i].beta >= l0.fibers[i].beta - slack);
            prop_assert!(l1.fibers[i].alpha <= l0.fibers[i].alpha + slack);
            prop_assert!(m1.fibers[i].beta >= m0.fibers[i].beta - slack);
            prop_assert!(m1.fibers[i].alpha >= m0.fibers[i].alpha - slack);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn generalized_pitchfork_precludes_the_others((b, sp, a2) in consistent_tuple()) {
        let v = cubic_verdict(&b, &sp, a2).unwrap();
        if v.ensured == Some(Pattern::GeneralizedPitchfork) {
            prop_assert!(v.precludes(Pattern::SaddleNodeTranscritical) && v.precludes(Pattern::ClassicalPitchfork));
        }
    }

    #[test]
    fn shrinking_a2_range_keeps_verdicts((b, sp, a2) in consistent_tuple(), u in 0.0..1.0f64, w in 0.0..1.0f64) {
        let v = cubic_verdict(&b, &sp, a2).unwrap();
        let lo = a2.0 + u * (a2.1 - a2.0);
        let hi = lo + w * (a2.1 - lo);
        let inner = cubic_verdict(&b, &sp, (lo, hi)).unwrap();
        if let Some(p) = v.ensured {
            // Shrinking onto zero can upgrade to the classical pitchfork.
            prop_assert!(inner.ensured == Some(p) || inner.ensured == Some(Pattern::ClassicalPitchfork));
        }
    }

    #[test]
    fn zero_perturbation_matches_cubic((b, sp, a2) in consistent_tuple(), rho in 0.0..10.0f64) {
        let h = HParams { rho0: rho, eps0: 0.0 };
        let cubic = cubic_verdict(&b, &sp, a2).unwrap();
        if let Ok(g) = general_h_verdict(&b, &sp, a2, &h) {
            prop_assert_eq!(g.ensured, cubic.ensured);
            prop_assert_eq!(g.precluded, cubic.precluded);
        }
    }

    #[test]
    fn alpha_coefficients_satisfy_guarantees(n in 2usize..6, r in 1.0..4.0f64, frac in 0.01..0.99f64, raw in prop::collection::vec(0.01..2.0f64, 6)) {
        let eps = frac * epsilon1(n, r);
        let table = bump_table(n, eps).unwrap();
        // Sorted alphas with alpha_1 < 0 < alpha_n.
        let mut alphas: Vec<f64> = raw[..n].iter().scan(-raw[5], |acc, d| { let v = *acc; *acc += d; Some(v) }).collect();
        let last = alphas[n - 1];
        if last <= 0.0 {
            alphas[n - 1] = 0.1;
        }
        let a = a1_from_alphas(&table, &alphas, r).unwrap();
        prop_assert!(a.spread_ok, "spread fails for {:?}", alphas);
        prop_assert!(a.condition_52, "condition fails for {:?}: {}", alphas, a.condition_52_value);
    }

    #[test]
    fn projection_is_idempotent(n in 1usize..7, eps in 0.01..0.9f64, v in prop::collection::vec(-2.0..2.0f64, 7)) {
        let table = bump_table(n, eps).unwrap();
        let a = TableEntry { integrals: v[..n].to_vec(), min: -2.0, max: 2.0 };
        let p = project_onto_span(&table, &a).unwrap();
        let q = project_onto_span(&table, &p.projected).unwrap();
        for (x, y) in p.alphas.iter().zip(&q.alphas) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn band_realizations_are_certified(lo in -2.0..2.0f64, width in 0.05..2.0f64, n in 2usize..6, r in 1.0..3.0f64) {
        let out = realize_band_spectrum(SpectrumInterval::exact(lo, lo + width), n, r).unwrap();
        prop_assert_eq!(out.verdict.ensured, Some(Pattern::GeneralizedPitchfork));
        prop_assert!((out.spectrum.lo - lo).abs() <= 1e-12 && (out.spectrum.hi - lo - width).abs() <= 1e-12);
    }
}

#[test]
fn change_of_variables_keeps_the_diagram() {
    let d = Driver::periodic(2.0 * PI)
        .with("a3", CoefficientFn::constant(1.0))
        .with("a2", CoefficientFn::trig(0.3, vec![], vec![1.0]))
        .with("a1", CoefficientFn::trig(0.0, vec![1.0], vec![]))
        .with("b", CoefficientFn::trig(0.0, vec![], vec![1.0]));
    let (g, e) = change_of_variables(&family(), &d, "b").unwrap();
    let cfg = DiagramConfig {
        tol_bif: Some(1e-3),
        grid_points: 11,
        ..DiagramConfig::default()
    };
    let grid = FiberGrid::uniform(&d, 8).unwrap();
    let before = scan_lambda(&family(), &d, (-1.5, 0.5), &grid, &cfg).unwrap();
    let after = scan_lambda(&g, &e, (-1.5, 0.5), &grid, &cfg).unwrap();
    assert_eq!(before.pattern, Some(Pattern::SaddleNodeTranscritical));
    assert_eq!(before.pattern, after.pattern);
    for kind in [BifurcationKind::SaddleNode, BifurcationKind::TranscriticalEndpointUpper] {
        let (x, y) = (before.point(kind).unwrap(), after.point(kind).unwrap());
        assert!((x - y).abs() <= 2e-3, "{kind:?}: {x} vs {y}");
    }
}

#[test]
fn threshold_predicate_is_monotone() {
    let (f, d) = autonomous_cubic(1.0, 0.0, 0.0);
    let cfg = TwoParamConfig::default();
    let mut last = f64::INFINITY;
    for l0 in [-2.0, -1.0, -0.5, -0.1] {
        let m = mu_hat(&f, &d, l0, &cfg).unwrap();
        for k in 1..=5 {
            let off = 0.05 * f64::from(k);
            assert!(!upper_copy_exists(&f, &d, l0, m.below - off, &cfg).unwrap());
            assert!(upper_copy_exists(&f, &d, l0, m.above + off, &cfg).unwrap());
        }
        assert!(m.value <= last);
        last = m.value;
    }
}
