use num_rational::Rational64;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use super::*;
use crate::hamiltonian::{enumerate_generators, g_k, morse_mu, PerturbationConfig};

fn runner(seed: u8, cases: u32) -> TestRunner {
    TestRunner::new_with_rng(Config { cases, ..Config::default() }, TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]))
}

fn lq() -> TropCurve {
    TropCurve::lq(Rational64::new(1, 2), Rational64::new(1, 3))
}

fn frame() -> EndFrame {
    EndFrame::new([0, 1], 0.25, 0.7)
}

#[test]
fn coordinates_round_trip_and_pull_back_omega() {
    for alpha in [[1, 0], [0, -1], [1, -1], [2, 1]] {
        let f = EndFrame::new(alpha, 0.0, 0.0);
        let x = [0.3, -1.2, 2.5, 0.4];
        let y = f.from_end_coords(&f.end_coords(&x));
        for i in 0..4 {
            assert!((x[i] - y[i]).abs() < 1e-12, "{alpha:?}");
        }
        // ω(u, v) = −dp_α∧dθ_α + dp^⊥∧dθ^⊥ on two coordinate vectors.
        let u = [1.0, 0.5, -0.25, 2.0];
        let v = [-0.5, 1.5, 0.75, -1.0];
        let omega = u[0] * v[1] - u[1] * v[0] + u[2] * v[3] - u[3] * v[2];
        let (a, b) = (f.end_coords(&u), f.end_coords(&v));
        let alt = -(a[0] * b[1] - a[1] * b[0]) + (a[2] * b[3] - a[3] * b[2]);
        assert!((omega - alt).abs() < 1e-12, "{alpha:?}");
    }
}

#[test]
fn wrapping_number_examples() {
    let f = frame();
    let x = cylinder_point(&f, 2.0, 0.3, 0);
    assert_eq!(wrapping_number(&f, &LiftedPath::new(vec![x])).unwrap(), 0);
    let y = cylinder_point(&f, 2.0, 0.3, 1);
    assert_eq!(wrapping_number(&f, &LiftedPath::new(vec![x, y])).unwrap(), 1);
    let mut z = x;
    z[0] += 0.1;
    assert_eq!(wrapping_number(&f, &LiftedPath::new(vec![x, z])), Err(EnergyError::NotALoop));
    // The L_q cylinder joining the two ends normal to ±(1, 0): θ₂ turns once.
    let ends = cylindrical_ends(&lq()).unwrap();
    let e = ends.iter().find(|e| e.alpha == [1, 0]).unwrap();
    let fr = EndFrame::of_end(&lq(), e);
    let a = [0.0, 0.0, -3.0, 0.0];
    let path = LiftedPath::new(vec![a, [0.0, 0.0, 0.0, PI], [0.0, 0.0, 3.0, 2.0 * PI], [0.0, 0.0, -3.0, 2.0 * PI]]);
    assert_eq!(wrapping_number(&fr, &path).unwrap().abs(), 1);
}

#[test]
fn lambda_examples() {
    let f = frame();
    let x = cylinder_point(&f, 2.0, 0.3, 0);
    assert_eq!(integral_lambda(&f, &LiftedPath::new(vec![x])).unwrap(), 0.0);
    let circle = LiftedPath::new(vec![x, cylinder_point(&f, 2.0, 0.3 + PI, 0), cylinder_point(&f, 2.0, 0.3 + 2.0 * PI, 0)]);
    assert!(integral_lambda(&f, &circle).unwrap().abs() < 1e-12);
    // A rectangle in the (p_α, θ_α)-plane.
    let (dp, dt) = (1.5, 0.8);
    let c = |pa: f64, ta: f64| f.from_end_coords(&[pa, f.arg_r + ta, f.log_r, 0.3]);
    let rect = LiftedPath::new(vec![c(2.0, 0.0), c(2.0 + dp, 0.0), c(2.0 + dp, dt), c(2.0, dt), c(2.0, 0.0)]);
    assert!((integral_lambda(&f, &rect).unwrap() + dp * dt).abs() < 1e-12);
}

#[test]
fn eta_examples() {
    let f = frame();
    let x = cylinder_point(&f, 2.0, 0.3, 0);
    assert_eq!(integral_eta(&f, &LiftedPath::new(vec![x]), EtaMode::Standard).unwrap(), 0.0);
    let circle = LiftedPath::new(vec![x, cylinder_point(&f, 2.0, 0.3 + 2.0 * PI, 0)]);
    assert!(dist_mod_4pi2(integral_eta(&f, &circle, EtaMode::Standard).unwrap(), 0.0) < 1e-12);
    let d = EndFrame::new([1, -1], 0.0, PI);
    let c = LiftedPath::new(vec![cylinder_point(&d, 1.0, 0.0, 0), cylinder_point(&d, 1.0, 2.0 * PI, 0)]);
    assert_eq!(integral_eta(&d, &c, EtaMode::Standard), Err(EnergyError::DiagonalNeedsAdjustedMode(2)));
    let v = integral_eta(&d, &c, EtaMode::Adjusted { reference_theta_perp: 0.0 }).unwrap();
    assert!(dist_mod_4pi2(v, 0.0) < 1e-12);
}

#[test]
fn circle_pushed_to_an_end_in_the_reference_frame() {
    // ∫θ₂dθ₁ over θ ↦ θ + 2πα at θ_α = arg r gives 2π arg r + 2π²α₁α₂ mod 4π² when |α| = 1.
    for (alpha, arg) in [([1, 0], 0.4), ([0, -1], -1.1), ([-1, 0], 2.0)] {
        let f = EndFrame::new(alpha, 0.0, arg);
        let a = cylinder_point(&f, 1.0, 0.0, 0);
        let mut b = a;
        b[1] += 2.0 * PI * alpha[0] as f64;
        b[3] += 2.0 * PI * alpha[1] as f64;
        let v = raw_eta(&EndFrame::reference(), &LiftedPath::new(vec![a, b]));
        let want = 2.0 * PI * arg * (alpha[0] * alpha[0]) as f64 + 2.0 * PI * PI * (alpha[0] * alpha[1]) as f64;
        assert!(dist_mod_4pi2(v, want) < 1e-9, "{alpha:?}: {v} vs {want}");
    }
}

#[test]
fn lq_opposite_ends_obstruction() {
    let curve = lq();
    let class = opposite_ends_class(&curve).unwrap().unwrap();
    let r = obstruction_check(&curve, &class).unwrap();
    assert_eq!(r.value_pi2.display(&curve.basis).to_string(), "2*argq");
    assert!(dist_mod_4pi2(r.value, 2.0 * PI * (PI / 3.0)) < 1e-12);
    assert!(dist_mod_4pi2(r.numeric, r.value) < 1e-9);
    assert_eq!(r.verdict, Verdict::NoDisk);
    assert_eq!(r.kernel.len(), 1);
    let zero = obstruction_check(&curve, &[0, 0, 0, 0]).unwrap();
    assert_eq!(zero.verdict, Verdict::Inconclusive);
    assert!(zero.value_pi2.is_zero());
    let ones = obstruction_check(&curve, &[1, 1, 1, 1]).unwrap();
    assert!(ones.trivial_class && ones.value_pi2.is_zero());
    assert!(matches!(obstruction_check(&curve, &[1, 0, 0, 0]), Err(EnergyError::NotNullhomotopic { .. })));
    assert!(matches!(obstruction_check(&curve, &[1, 0]), Err(EnergyError::ClassLength { .. })));
}

#[test]
fn rational_arg_q_on_the_grid_is_inconclusive() {
    let curve = TropCurve::lq(Rational64::new(1, 2), Rational64::from_integer(2));
    let class = opposite_ends_class(&curve).unwrap().unwrap();
    assert_eq!(obstruction_check(&curve, &class).unwrap().verdict, Verdict::Inconclusive);
}

#[test]
fn pants_kernel_is_trivial() {
    let curve = TropCurve::pants();
    let ends = cylindrical_ends(&curve).unwrap();
    assert!(nullhomotopic_kernel(&ends).is_empty());
    let ones = obstruction_check(&curve, &[1, 1, 1]).unwrap();
    assert!(ones.trivial_class && ones.value_pi2.is_zero());
    assert!(dist_mod_4pi2(ones.numeric, 0.0) < 1e-9);
    for class in [[1, 0, 0], [0, 1, 0], [1, -1, 0], [2, 1, 1]] {
        assert!(matches!(obstruction_check(&curve, &class), Err(EnergyError::NotNullhomotopic { .. })));
    }
    assert!(opposite_ends_class(&curve).unwrap().is_none());
}

#[test]
fn forbidden_phases() {
    let v = forbidden_phis(&[(1, 2.0 * PI), (0, 1.0), (-2, PI)]);
    assert_eq!(v.len(), 2);
    assert!((v[0] - (2.0 * PI - 1.0)).abs() < 1e-12);
    assert!((v[1] - 0.25).abs() < 1e-12);
}

#[test]
fn constant_disk_has_zero_energy() {
    let v = DiskVertex { p_alpha: 5.0, theta_perp: 0.0, j: 0 };
    let d = DiskBoundaryData::from_functions(&[0.0, 0.0, 0.0], vec![v; 3], |_, p, _| p * p).unwrap();
    assert_eq!(disk_energy(&d).unwrap(), 0.0);
    let bad = DiskBoundaryData { arcs: d.arcs.clone(), vertices: vec![v; 2] };
    assert!(matches!(disk_energy(&bad), Err(EnergyError::InconsistentCycle(_))));
    assert_eq!(DiskBoundaryData::from_json(&d.to_json()).unwrap(), d);
}

#[test]
fn strip_energy_matches_quadrature() {
    let cfg = PerturbationConfig::new(40.0, 1, [0.6, 0.8]);
    let set = enumerate_generators(&lq(), &cfg).unwrap();
    let end = &set.ends[0];
    let r3 = cfg.r.powi(3);
    let delta = end.a_perp / cfg.r;
    // The graphs of R⁻³μ′ cross where sin(θ − φ) = sin(θ − φ − δ).
    let t0 = end.phi + 0.5 * delta + 0.5 * PI;
    let t1 = t0 + PI;
    let p = 3.0 * cfg.r;
    let verts = vec![DiskVertex { p_alpha: p, theta_perp: t0, j: 0 }, DiskVertex { p_alpha: p, theta_perp: t1, j: 0 }];
    let d = DiskBoundaryData::from_functions(&[0.0, 0.0], verts, |s, _, t| if s == 0 { morse_mu(end.phi, t) } else { morse_mu(end.phi + delta, t) } / r3).unwrap();
    let e = disk_energy(&d).unwrap();
    let n = 20000;
    let h = (t1 - t0) / n as f64;
    let gap = |t: f64| ((t - end.phi).sin() - (t - end.phi - delta).sin()) / r3;
    let mut quad = gap(t0) + gap(t1);
    for i in 1..n {
        quad += gap(t0 + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    quad *= h / 3.0;
    assert!((e.abs() - quad.abs()).abs() < 1e-9 * quad.abs(), "{e} vs {quad}");
    assert!(e.abs() <= 4.0 / r3);
}

#[test]
fn rescale_examples() {
    let cfg = PerturbationConfig::new(60.0, 2, [0.6, 0.8]);
    let set = enumerate_generators(&lq(), &cfg).unwrap();
    let interior = set.generators.iter().find(|g| g.is_interior()).unwrap();
    assert!(matches!(rescale_weight(interior, |_, _| 0.0, |_, _| 0.0), Err(EnergyError::InteriorGeneratorHasNoRescale)));
    let j_of = |g: &FloerGenerator| match g.kind {
        GenKind::Cylindrical { j, .. } => j,
        _ => -1,
    };
    let g0 = set.generators.iter().find(|g| j_of(g) == 0).unwrap();
    let w = rescale_weight(g0, |_, _| 1.5, |_, _| 1.5).unwrap();
    assert!(w.factor == Novikov::one(w.factor.ctx()));
    let end = set.ends.iter().find(|e| e.a_alpha < 0.0).unwrap();
    let r3 = cfg.r.powi(3);
    let morse0 = |_: f64, t: f64| morse_mu(end.phi, t) / r3;
    let morse2 = |_: f64, t: f64| morse_mu(end.phi + 2.0 * end.a_perp / cfg.r, t) / r3;
    let w = rescale_weight(g0, morse0, morse2).unwrap();
    assert!(w.delta_g.abs() <= 2.0 / r3 && w.j == 0);
    let g2 = set.generators.iter().find(|g| j_of(g) == 2).unwrap();
    let w = rescale_weight(g2, |_, _| 0.0, |_, _| 0.0).unwrap();
    let val = w.factor.val().unwrap();
    assert_eq!(val.coeff(1), Rational64::from_integer(4));
    assert!((w.factor.ctx().basis.approx(&val) - 4.0 * PI * w.p_alpha).abs() < 1e-6);
}

#[test]
fn rescaling_leaves_the_lambda_integral() {
    let cfg = PerturbationConfig::new(60.0, 3, [0.6, 0.8]);
    let set = enumerate_generators(&lq(), &cfg).unwrap();
    let end = set.ends[0].clone();
    let levels = [0i64, 1, 3];
    let verts = vec![
        DiskVertex { p_alpha: 3000.0, theta_perp: 0.2, j: 1 },
        DiskVertex { p_alpha: 3500.0, theta_perp: 1.1, j: 2 },
        DiskVertex { p_alpha: 3900.0, theta_perp: 2.5, j: -3 },
    ];
    let lambdas = [0.5, -0.25, 0.125];
    let d = DiskBoundaryData::from_functions(&lambdas, verts.clone(), |s, p, t| g_k(&cfg, &end, levels[s], p, t)).unwrap();
    let e = disk_energy(&d).unwrap();
    let n = verts.len();
    let rescale: f64 = (0..n)
        .map(|s| {
            let v = verts[s];
            let prev = levels[(s + n - 1) % n];
            g_k(&cfg, &end, prev, v.p_alpha, v.theta_perp) - g_k(&cfg, &end, levels[s], v.p_alpha, v.theta_perp)
                + 2.0 * PI * v.j as f64 * v.p_alpha
        })
        .sum();
    assert!((e - rescale - lambdas.iter().sum::<f64>()).abs() < 1e-7 * e.abs().max(1.0));
}

fn coord() -> impl Strategy<Value = f64> + Clone {
    -5.0f64..5.0
}

fn point() -> impl Strategy<Value = [f64; 4]> + Clone {
    [coord(), coord(), coord(), coord()]
}

#[test]
fn prop_stokes_on_parallelograms() {
    let alphas = [[1, 0], [0, 1], [-1, 0], [1, -1], [2, 1]];
    let mut run = runner(41, 500);
    run.run(&(point(), point(), point(), 0usize..5, -3.0f64..3.0, -3.0f64..3.0), |(x, u, v, ai, lr, ar)| {
        let f = EndFrame::new(alphas[ai], lr, ar);
        let add = |a: [f64; 4], b: [f64; 4]| [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]];
        let path = LiftedPath::new(vec![x, add(x, u), add(add(x, u), v), add(x, v), x]);
        let omega = u[0] * v[1] - u[1] * v[0] + u[2] * v[3] - u[3] * v[2];
        let got = integral_lambda(&f, &path).unwrap();
        prop_assert!((got - omega).abs() < 1e-9 * omega.abs().max(1.0), "{} vs {}", got, omega);
        Ok(())
    })
    .unwrap();
}

#[test]
fn prop_eta_homotopy_invariance_on_the_cylinder() {
    let mut run = runner(42, 500);
    let strat = (
        prop_oneof![Just([1i64, 0]), Just([0, -1]), Just([1, -1]), Just([-1, 2])],
        -2.0f64..2.0,
        -3.0f64..3.0,
        -2i64..3,
        proptest::collection::vec((0.5f64..6.0, -4.0f64..4.0), 1..8),
    );
    run.run(&strat, |(alpha, lr, ar, w, wiggles)| {
        let f = EndFrame::new(alpha, lr, ar);
        let start = cylinder_point(&f, 2.0, 0.4, 0);
        let end = cylinder_point(&f, 2.0, 0.4 + 2.0 * PI * w as f64, 0);
        let straight = LiftedPath::new(vec![start, end]);
        let mut pts = vec![start];
        let n = wiggles.len() as f64 + 1.0;
        for (i, (pa, dt)) in wiggles.iter().enumerate() {
            let s = (i + 1) as f64 / n;
            pts.push(cylinder_point(&f, *pa, 0.4 + 2.0 * PI * w as f64 * s + dt, 0));
        }
        pts.push(end);
        let wiggly = LiftedPath::new(pts);
        let reference = EndFrame::reference();
        let a = integral_eta(&reference, &straight, EtaMode::Standard).unwrap();
        let b = integral_eta(&reference, &wiggly, EtaMode::Standard).unwrap();
        prop_assert!(dist_mod_4pi2(a, b) < 1e-9, "{} vs {}", a, b);
        Ok(())
    })
    .unwrap();
}

#[test]
fn prop_obstruction_is_linear() {
    let curve = lq();
    let mut run = runner(43, 500);
    run.run(&(-5i64..6, -5i64..6, -5i64..6, -5i64..6), |(a, b, c, d)| {
        let x = [a, b, a, b];
        let y = [c, d, c, d];
        let s = [a + c, b + d, a + c, b + d];
        let (rx, ry, rs) =
            (obstruction_check(&curve, &x).unwrap(), obstruction_check(&curve, &y).unwrap(), obstruction_check(&curve, &s).unwrap());
        prop_assert!(dist_mod_4pi2(rx.value + ry.value, rs.value) < 1e-9);
        prop_assert!(dist_mod_4pi2(rs.numeric, rs.value) < 1e-8);
        Ok(())
    })
    .unwrap();
}

#[test]
fn prop_disk_energy_is_additive_under_splitting() {
    let mut run = runner(44, 500);
    let strat = (
        proptest::collection::vec((1.0f64..100.0, -10i64..10, -2.0f64..2.0, -3.0f64..3.0), 4..9),
        -2.0f64..2.0,
        -5i64..5,
        0usize..100,
        0usize..100,
    );
    run.run(&strat, |(raw, chord_lambda, chord_lift, i0, i1)| {
        let n = raw.len();
        let (a, b) = {
            let a = i0 % n;
            let mut b = i1 % n;
            if b == a || (b + 1) % n == a || (a + 1) % n == b {
                b = (a + 2) % n;
            }
            (a.min(b), a.max(b))
        };
        prop_assume!(b - a >= 2 && n - (b - a) >= 2);
        // Each arc lies on a lift ℓ_s; the corner index is the jump of lifts.
        let lifts: Vec<i64> = raw.iter().map(|r| r.1).collect();
        let p: Vec<f64> = raw.iter().map(|r| r.0).collect();
        let g = |s: usize, x: f64| raw[s].2 * x + raw[s].3;
        let chord_g = |x: f64| 0.3 * x - 1.0;
        let vertex = |k: usize, incoming: i64, outgoing: i64| DiskVertex { p_alpha: p[k], theta_perp: 0.0, j: outgoing - incoming };
        let arc = |lam: f64, gf: &dyn Fn(f64) -> f64, from: usize, to: usize| DiskArc { lambda: lam, g_start: gf(p[from]), g_end: gf(p[to]) };
        let lam = |s: usize| (s as f64 * 0.37).sin();
        let whole = DiskBoundaryData {
            arcs: (0..n).map(|s| arc(lam(s), &|x| g(s, x), s, (s + 1) % n)).collect(),
            vertices: (0..n).map(|k| vertex(k, lifts[(k + n - 1) % n], lifts[k])).collect(),
        };
        // First piece: vertices a..=b with the chord b → a closing it.
        let mut arcs1: Vec<DiskArc> = (a..b).map(|s| arc(lam(s), &|x| g(s, x), s, s + 1)).collect();
        arcs1.push(arc(chord_lambda, &chord_g, b, a));
        let mut verts1 = vec![vertex(a, chord_lift, lifts[a])];
        verts1.extend((a + 1..b).map(|k| vertex(k, lifts[k - 1], lifts[k])));
        verts1.push(vertex(b, lifts[b - 1], chord_lift));
        // Second piece: vertices b..=a (cyclically) with the chord a → b.
        let idx: Vec<usize> = (b..b + (n - (b - a))).map(|s| s % n).collect();
        let mut arcs2: Vec<DiskArc> = idx.iter().map(|&s| arc(lam(s), &|x| g(s, x), s, (s + 1) % n)).collect();
        arcs2.push(arc(-chord_lambda, &chord_g, a, b));
        let mut verts2 = vec![vertex(b, chord_lift, lifts[b])];
        verts2.extend(idx.iter().skip(1).map(|&k| vertex(k, lifts[(k + n - 1) % n], lifts[k])));
        verts2.push(vertex(a, lifts[(a + n - 1) % n], chord_lift));
        let e = disk_energy(&whole).unwrap();
        let e1 = disk_energy(&DiskBoundaryData { arcs: arcs1, vertices: verts1 }).unwrap();
        let e2 = disk_energy(&DiskBoundaryData { arcs: arcs2, vertices: verts2 }).unwrap();
        prop_assert!((e - e1 - e2).abs() < 1e-9 * e.abs().max(1.0), "{} vs {} + {}", e, e1, e2);
        Ok(())
    })
    .unwrap();
}
