use std::collections::BTreeSet;

use num_rational::Rational64;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use super::*;

fn lq() -> TropCurve {
    TropCurve::lq(Rational64::new(1, 2), Rational64::new(1, 3))
}

fn cfg(r: f64, k: i64) -> PerturbationConfig {
    PerturbationConfig::new(r, k, [0.6, 0.8])
}

fn runner(seed: u8, cases: u32) -> TestRunner {
    TestRunner::new_with_rng(Config { cases, ..Config::default() }, TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]))
}

#[test]
fn bump_endpoints_and_midpoint() {
    let c = ChiProfile::Exponential;
    assert_eq!(bump(c, 1.0, 2.0, 0.5).unwrap(), 0.0);
    assert_eq!(bump(c, 1.0, 2.0, 3.0).unwrap(), 1.0);
    assert!((bump(c, 0.0, 1.0, 0.5).unwrap() - 0.5).abs() < 1e-15);
    assert!((bump(ChiProfile::Smoothstep, 0.0, 1.0, 0.5).unwrap() - 0.5).abs() < 1e-15);
    assert_eq!(bump(c, 2.0, 2.0, 0.0), Err(HamError::BadInterval(2.0, 2.0)));
}

#[test]
fn exponential_profile_derivative_is_at_most_two() {
    let n = 20000;
    let mut prev = 0.0;
    for i in 1..=n {
        let s = i as f64 / n as f64;
        let v = ChiProfile::Exponential.eval(s);
        let d = (v - prev) * n as f64;
        assert!(d >= 0.0 && d <= 2.0 + 1e-6, "slope {d} at {s}");
        prev = v;
    }
}

#[test]
fn morse_extrema() {
    let phi = 0.7;
    assert_eq!(morse_mu(phi, phi), -1.0);
    assert!((morse_mu(phi, phi + PI) - 1.0).abs() < 1e-15);
    assert!(morse_mu(0.0, PI / 2.0).abs() < 1e-15);
}

#[test]
fn slope_limits() {
    let c = cfg(100.0, 3);
    let r = c.r;
    let a = 0.8;
    assert!((ham_slope(&c, a, r * r + 3.0 * r) - 3.0 * a / r).abs() < 1e-15);
    assert!((ham_slope(&c, a, r * r + 5.0 * r) - (3.0 * (2.0 * PI + 2.0 * a / r) + 3.0 * a / r)).abs() < 1e-12);
    let z = cfg(100.0, 0);
    for p in [2.0 * r, r * r + 3.5 * r, r * r + 9.0 * r] {
        assert_eq!(ham_slope(&z, a, p), 0.0);
    }
}

#[test]
fn wrap_level_solving() {
    let c = cfg(1000.0, 1);
    assert!(matches!(solve_wrap_levels(&c, 0.8, 2), Err(HamError::OutOfRange { .. })));
    assert!(matches!(solve_wrap_levels(&c, 0.8, 0), Err(HamError::OutOfRange { .. })));
    let p = solve_wrap_levels(&c, 0.8, 1).unwrap();
    assert!((ham_slope(&c, 0.8, p) - 2.0 * PI).abs() < 1e-12 * 2.0 * PI);
    let (w0, w1) = window(&c);
    assert!(p > w0 && p < w1);
    // k = 2, j = 1 sits at the middle of the window by symmetry of χ.
    let c2 = cfg(1000.0, 2);
    let p = solve_wrap_levels(&c2, 0.8, 1).unwrap();
    let s = (p - w0) / (w1 - w0);
    assert!((s - 0.5).abs() < 0.01, "s = {s}");
    assert!(solve_wrap_levels(&c2, -0.8, 0).is_ok());
}

#[test]
fn config_validation() {
    let curve = lq();
    assert!(matches!(resolve(&curve, &PerturbationConfig::new(100.0, 1, [1.0, 0.0])), Err(HamError::ConfigInvalid(_))));
    assert!(matches!(resolve(&curve, &PerturbationConfig::new(100.0, 1, [0.6, 0.6])), Err(HamError::ConfigInvalid(_))));
    assert!(matches!(resolve(&curve, &cfg(4.0, 1)), Err(HamError::ConfigInvalid(_))));
    let mut bad = cfg(100.0, 1);
    bad.phi = PhiPolicy::Explicit(vec![1.0, 2.0, 3.0, 4.0]);
    assert!(matches!(resolve(&curve, &bad), Err(HamError::ConfigInvalid(_))));
    bad.phi = PhiPolicy::Explicit(vec![1.0, 2.0, 3.0]);
    assert!(matches!(resolve(&curve, &bad), Err(HamError::ConfigInvalid(_))));
    let pants = TropCurve::pants();
    // (1/√2, 1/√2) is orthogonal to the diagonal end.
    let h = 0.5f64.sqrt();
    assert!(matches!(resolve(&pants, &PerturbationConfig::new(100.0, 1, [h, h])), Err(HamError::ConfigInvalid(_))));
    assert!(resolve(&pants, &cfg(100.0, 1)).is_ok());
}

#[test]
fn lq_generator_counts() {
    for k in 1..=4 {
        let set = enumerate_generators(&lq(), &cfg(200.0, k)).unwrap();
        assert_eq!(set.count(0), 4 * k as usize);
        assert_eq!(set.count(1), 4 * k as usize + 2);
        assert_eq!(set.generators.iter().filter(|g| g.is_interior()).count(), 2);
        assert_eq!(set.warnings[0], INDEX_RANGE_WARNING);
    }
    let set = enumerate_generators(&lq(), &cfg(200.0, 0)).unwrap();
    assert_eq!(set.generators.len(), 2);
    assert!(set.generators.iter().all(|g| g.is_interior() && g.degree == 1 && g.coords.is_none()));
}

#[test]
fn index_ranges_follow_sign_of_a_alpha() {
    let k = 3;
    let set = enumerate_generators(&lq(), &cfg(200.0, k)).unwrap();
    for (i, end) in set.ends.iter().enumerate() {
        let js: BTreeSet<i64> = set
            .on_end(i)
            .map(|g| match g.kind {
                GenKind::Cylindrical { j, .. } => j,
                _ => unreachable!(),
            })
            .collect();
        let want: BTreeSet<i64> = if end.a_alpha > 0.0 { (1..=k).collect() } else { (0..k).collect() };
        assert_eq!(js, want, "end {:?}", end.end.alpha);
    }
}

#[test]
fn pants_diagonal_end_has_two_sheets() {
    let k = 2;
    let set = enumerate_generators(&TropCurve::pants(), &cfg(200.0, k)).unwrap();
    let diag = set.ends.iter().position(|e| e.end.norm2() == 2).unwrap();
    for j in admissible_levels(k, set.ends[diag].a_alpha) {
        let n = set
            .on_end(diag)
            .filter(|g| matches!(g.kind, GenKind::Cylindrical { j: jj, gen_type: GenType::E, .. } if jj == j))
            .count();
        assert_eq!(n, 2);
    }
    assert_eq!(set.count(0), (k + k + 2 * k) as usize);
    assert_eq!(set.count(1), set.count(0) + 1);
    let labels: BTreeSet<(i64, i64)> = set
        .on_end(diag)
        .filter_map(|g| match g.kind {
            GenKind::Cylindrical { label, gen_type: GenType::E, .. } => Some((label.j0, label.j1)),
            _ => None,
        })
        .collect();
    assert_eq!(labels.len(), 2 * k as usize);
    assert!(labels.iter().all(|(a, b)| b - a >= 0 && *a < 2));
}

#[test]
fn generator_coordinates() {
    let c = cfg(300.0, 2);
    let curve = lq();
    let set = enumerate_generators(&curve, &c).unwrap();
    for g in &set.generators {
        let (end, gen_type) = match g.kind {
            GenKind::Cylindrical { end, gen_type, .. } => (end, gen_type),
            _ => continue,
        };
        assert_eq!(g.degree == 0, gen_type == GenType::E);
        let re = &set.ends[end];
        let x = g.coords.unwrap();
        assert!((x.p_perp - curve.approx(&re.end.log_r)).abs() < 1e-12);
        let target = re.phi + 0.5 * re.a_perp / c.r + if gen_type == GenType::F { PI } else { 0.0 };
        assert!((x.theta_perp - target).abs() <= 10.0 / c.r);
    }
}

#[test]
fn flow_examples() {
    let c = cfg(100.0, 1);
    let x = CylPoint { p_alpha: 3.0 * c.r, theta_alpha: 0.2, p_perp: 0.0, theta_perp: 1.1 };
    assert_eq!(flow_point(&c, 0.8, 0.3, x, 0.0), x);
    let y = flow_point(&c, 0.8, 0.3, x, 1.0);
    assert!((y.theta_alpha - (0.2 + 0.8 / c.r)).abs() < 1e-15);
    assert!((y.theta_perp - (1.1 + 0.3 / c.r)).abs() < 1e-15);
    assert_eq!((y.p_alpha, y.p_perp), (x.p_alpha, x.p_perp));
}

#[test]
fn g_functions_are_consistent_with_the_flow() {
    let c = cfg(50.0, 1);
    let set = enumerate_generators(&lq(), &c).unwrap();
    let end = &set.ends[0];
    let (w0, w1) = window(&c);
    let p = 0.5 * (w0 + w1);
    let dp = 1e-4;
    let dg = (g_k(&c, end, 1, p + dp, 0.3) - g_k(&c, end, 1, p - dp, 0.3)) / (2.0 * dp);
    let chi_slope = (c.chi.eval((p + dp - w0) / (w1 - w0)) - c.chi.eval((p - dp - w0) / (w1 - w0))) / (2.0 * dp);
    let want = 2.0 * PI * (c.chi.eval(0.5) + chi_slope * p) + end.a_alpha / c.r;
    assert!((dg - want).abs() < 1e-5 * want.abs().max(1.0));
    assert!((g_k(&c, end, 0, p, end.phi) + 1.0 / c.r.powi(3)).abs() < 1e-18);
}

#[test]
fn auto_phases_are_accepted() {
    let phis = auto_phis(5);
    assert!((phis[0] - 2.0 * PI * (2f64.sqrt() - 1.0)).abs() < 1e-15);
    assert!(resolve(&lq(), &cfg(100.0, 1)).unwrap().0.iter().all(|e| e.phi > 0.0 && e.phi < 2.0 * PI));
}

#[test]
fn prop_levels_increase_and_counts_match() {
    let mut run = runner(31, 500);
    run.run(&(1i64..6, 60.0f64..2000.0, 0.1f64..1.4), |(k, r, ang)| {
        let a = [ang.cos(), ang.sin()];
        let c = PerturbationConfig::new(r, k, a);
        let set = enumerate_generators(&lq(), &c).unwrap();
        prop_assert_eq!(set.count(0), 4 * k as usize);
        prop_assert_eq!(set.count(1), set.count(0) + 2);
        for re in &set.ends {
            let ps: Vec<f64> = admissible_levels(k, re.a_alpha).map(|j| solve_wrap_levels(&c, re.a_alpha, j).unwrap()).collect();
            prop_assert!(ps.windows(2).all(|w| w[0] < w[1]));
        }
        Ok(())
    })
    .unwrap();
}

#[test]
fn prop_labels_independent_of_r() {
    let mut run = runner(32, 500);
    let labels = |c: &PerturbationConfig| -> BTreeSet<String> {
        enumerate_generators(&TropCurve::pants(), c).unwrap().generators.iter().map(|g| g.label()).collect()
    };
    run.run(&(1i64..5, 50.0f64..500.0, 50.0f64..500.0), |(k, r1, r2)| {
        prop_assert_eq!(labels(&cfg(r1, k)), labels(&cfg(r2, k)));
        Ok(())
    })
    .unwrap();
}

#[test]
fn prop_bump_monotone() {
    let mut run = runner(33, 1000);
    run.run(&(-1.0f64..2.0, -1.0f64..2.0), |(s, t)| {
        let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
        for c in [ChiProfile::Exponential, ChiProfile::Smoothstep] {
            let (a, b) = (c.eval(lo), c.eval(hi));
            prop_assert!((0.0..=1.0).contains(&a) && a <= b);
        }
        Ok(())
    })
    .unwrap();
}
