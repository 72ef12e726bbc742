use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skewtent::attractors::*;
use skewtent::interval::Interval;
use skewtent::regions::{l_curve, window_wall, window_geometry, classify_kr, ClassifyOptions, RegionTag, WindowSub};
use skewtent::verify::check_invariance;
use skewtent::MapParams;

fn mp(k: f64, r: f64) -> MapParams {
    MapParams::new(k, r).unwrap()
}

/// A point strictly inside `T_m` at parameter fraction `s` of the way across.
fn window_point(m: usize, r: f64, s: f64) -> MapParams {
    let (lo, hi) = (window_wall(m, r), window_wall(m + 1, r));
    mp(lo + s * (hi - lo), r)
}

#[test]
fn lemma7_closed_form_matches_iteration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 400 {
        let m = rng.gen_range(2..=5);
        let r = rng.gen_range(0.2..0.95);
        let params = window_point(m, r, rng.gen_range(0.01..0.99));
        let core = window_core(&params).unwrap();
        for _ in 0..200 {
            let x = rng.gen_range(0.0..core.domain_end);
            let (closed, iter) = (core.g_power(x), core.g_power_iterated(x));
            assert!((closed - iter).abs() <= 1e-10, "k={} r={} x={x}: {closed} vs {iter}", params.k(), r);
        }
        checked += 1;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn window_orbits_close_and_interleave(m in 2usize..5, r in 0.3f64..0.95, s in 0.02f64..0.98) {
        let (lo, hi) = (window_wall(m, r), l_curve(m, r));
        prop_assume!(lo < hi);
        let params = mp(lo + s * (hi - lo), r);
        let core = window_core(&params).unwrap();
        let w = window_periodic_orbits(&params).unwrap();
        let g = w.core.unit;
        prop_assert!((g.apply_n(core.x_m, m - 1) - g.a).abs() <= 1e-10);
        prop_assert!(w.b_orbit.multiplier.abs() > 1.0);
        prop_assert!((w.a_orbit.multiplier.abs() - core.outer_slope).abs() <= 1e-9 * core.outer_slope);
        // U is forward invariant
        for i in 0..200 {
            let x = i as f64 / 199.0;
            if w.in_trap(x) {
                prop_assert!(w.in_trap(g.apply(x)), "x={x} leaves U");
            }
        }
    }

    #[test]
    fn attractor_orbits_satisfy_residual(k in 0.1f64..6.0, r in 0.05f64..0.99) {
        let params = mp(k, r);
        if let Ok(a) = attractor(&params) {
            if let AttractorKind::Cycle { orbit } = &a.kind {
                let x0 = orbit.points[0];
                let back = params.iterate(x0, orbit.period).last();
                prop_assert!((back - x0).abs() <= 1e-10 * x0.abs().max(1.0));
                prop_assert_eq!(orbit.stable, orbit.multiplier.abs() < 1.0);
            }
            if let AttractorKind::Bands { bands } = &a.kind {
                prop_assert!(bands.min_gap() > 0.0);
                prop_assert!(check_invariance(bands, &params) <= 1e-9);
                let expected = match a.region {
                    RegionTag::Cascade { p, .. } => 1 << p,
                    RegionTag::Window { m, sub: WindowSub::R2 } => m + 1,
                    RegionTag::Window { m, sub: WindowSub::R3 } => 2 * m + 2,
                    _ => unreachable!(),
                };
                prop_assert_eq!(bands.len(), expected);
            }
        }
    }
}

#[test]
fn cascade_bands_nest_across_depths() {
    // points of S_3 \ S_4 and deeper, so depth 1, 2, 3 bands all exist
    for &(k, r) in &[(1.05, 0.99), (1.02, 0.995), (1.08, 0.97)] {
        let tag = classify_kr(k, r, &ClassifyOptions::default()).unwrap();
        let RegionTag::Cascade { p: depth, .. } = tag else { panic!("{tag}") };
        let params = mp(k, r);
        for p in 1..depth {
            let outer = cascade_attractor(&params, p).unwrap();
            let inner = cascade_attractor(&params, p + 1).unwrap();
            let c = inner.unstable_points[p].x;
            let c_orbit = params.iterate(c, 1 << p).points;
            for band in outer.bands.intervals() {
                let inside: Vec<&Interval> = inner.bands.intervals().iter().filter(|b| band.contains_interval(b, 1e-12)).collect();
                assert_eq!(inside.len(), 2, "k={k} r={r} p={p}");
                let gap = Interval::new(inside[0].hi, inside[1].lo);
                assert!(c_orbit.iter().any(|&x| gap.lo < x && x < gap.hi), "k={k} r={r} p={p}");
            }
        }
    }
}

#[test]
fn unstable_cascade_points_lie_in_gaps() {
    let d = cascade_attractor(&mp(1.2, 0.9), 2).unwrap();
    assert_eq!(d.unstable_points.len(), 2);
    for u in &d.unstable_points {
        assert!(!d.bands.contains(u.x));
        assert!(u.multiplier.abs() > 1.0);
    }
}

#[test]
fn r3_bands_nest_in_lambda_bands() {
    let params = mp(4.1, 0.5);
    let core = window_core(&params).unwrap();
    let orbits = window_periodic_orbits(&params).unwrap();
    let outer = lambda_bands(&core);
    let inner = lambda1_bands(&core);
    for i in 0..=core.m {
        let pair = [inner[i], inner[core.m + 1 + i]];
        let a = orbits.a_orbit.points[i];
        for b in pair {
            assert!(outer[i].contains_interval(&b, 1e-12));
        }
        let (lo, hi) = if pair[0].lo < pair[1].lo { (pair[0], pair[1]) } else { (pair[1], pair[0]) };
        assert!(lo.hi < a && a < hi.lo);
    }
}

#[test]
fn band_counts_along_a_window_slice() {
    for m in 2..=4 {
        let r = 0.6;
        let g = window_geometry(m, r).unwrap();
        let k2 = 0.5 * (g.n_m + g.l_m);
        let k3 = 0.5 * (g.inv_rm.max(g.k_m) + g.n_m);
        if g.inv_rm < g.n_m && g.k_m < g.n_m {
            assert_eq!(window_band_attractor(&mp(k2, r)).unwrap().len(), m + 1);
        }
        if g.k_m < g.n_m && g.inv_rm < g.n_m {
            assert_eq!(window_band_attractor(&mp(k3, r)).unwrap().len(), 2 * m + 2);
        }
    }
}
