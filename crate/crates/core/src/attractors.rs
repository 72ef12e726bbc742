//! Attractors in closed form.
//!
//! Everything returned here is in map coordinates (`f` acting on the real line).
//! The window constructions are carried out for the unit map `g` and moved over
//! with `h(x) = 1 - k + k x` at the very end.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalUnion, PiecewiseMap};
use crate::map::{MapParams, UnitMap};
use crate::regions::{
    classify, renorm_sequence, t_relative, window_index, ClassifyOptions, RegionTag, WindowIndex, WindowSub,
};
use crate::symbolic::{escape_cantor_system, window_cantor_system, CantorSystem};

/// Tolerance for periodic-orbit residuals, relative to `max(1, |x|)`.
pub const ORBIT_TOL: f64 = 1e-10;
/// Tolerance for band invariance (Hausdorff distance of image and union).
pub const INVARIANCE_TOL: f64 = 1e-9;
/// Deepest cascade whose `2^p` bands are built explicitly.
pub const MAX_BAND_DEPTH: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodicOrbit {
    pub points: Vec<f64>,
    pub period: usize,
    pub multiplier: f64,
    pub stable: bool,
}

impl PeriodicOrbit {
    /// Iterates `x0` for one period and checks that it closes up.
    pub fn from_seed<M: PiecewiseMap + ?Sized>(map: &M, x0: f64, period: usize) -> Result<Self> {
        let mut points = Vec::with_capacity(period);
        let mut multiplier = 1.0;
        let mut x = x0;
        for _ in 0..period {
            points.push(x);
            multiplier *= map.slope_at(x);
            x = map.apply(x);
        }
        let defect = (x - x0).abs();
        if defect > ORBIT_TOL * x0.abs().max(1.0) * multiplier.abs().max(1.0) {
            return Err(Error::PrecisionLoss { what: "periodic orbit residual", defect });
        }
        Ok(Self { points, period, multiplier, stable: multiplier.abs() < 1.0 })
    }

    pub fn mapped<F: Fn(f64) -> f64>(&self, h: F) -> Self {
        Self { points: self.points.iter().map(|&x| h(x)).collect(), ..self.clone() }
    }

    pub fn distance(&self, x: f64) -> f64 {
        self.points.iter().map(|p| (x - p).abs()).fold(f64::INFINITY, f64::min)
    }
}

/// `C~_m = (f^(2^m)(1) + k_m)/(k_m + 1)`, a repelling fixed point of `f^(2^m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnstablePoint {
    pub m: usize,
    pub x: f64,
    /// Derivative of `f^(2^m)` at `x`.
    pub multiplier: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CascadeData {
    pub p: usize,
    /// `g^(2^p)(1)` in unit coordinates.
    pub b_p: f64,
    pub a_p: f64,
    pub c_p: f64,
    pub k_p: f64,
    pub bands: IntervalUnion,
    pub unstable_points: Vec<UnstablePoint>,
}

fn in_s_p_interior(k: f64, r: f64, p: usize) -> bool {
    k > 1.0 && r > 1.0 / k && (0..p).all(|q| t_relative(q, k, r) < 0.0)
}

fn region_name(params: &MapParams) -> String {
    classify(params, &ClassifyOptions::default()).to_string()
}

/// The `2^p` bands `f^i([f^(2^p)(1), 1])` of the cascade attractor.
///
/// Accepts any `p` with `(k, r)` in the interior of `S_p`, so that the band
/// structure at depth `p` can be compared with the one at `p + 1`.
pub fn cascade_attractor(params: &MapParams, p: usize) -> Result<CascadeData> {
    let (k, r) = (params.k(), params.r());
    if p == 0 || !in_s_p_interior(k, r, p) {
        return Err(Error::WrongRegion { expected: "interior of S_p", found: region_name(params) });
    }
    if p > MAX_BAND_DEPTH {
        return Err(Error::DepthOverflow { p });
    }
    let n_bands = 1usize << p;
    let states = renorm_sequence(params, p)?;
    let k_p = states[p].k_p;
    let unit = params.to_unit()?;
    let b_p = unit.apply_n(1.0, n_bands);
    let a_p = 1.0 - (1.0 - b_p) / k_p;
    let c_p = (b_p + k_p) / (k_p + 1.0);

    let mut band = Interval::new(params.iterate(1.0, n_bands).last(), 1.0);
    let mut list = Vec::with_capacity(n_bands);
    for _ in 0..n_bands {
        list.push(band);
        band = band.image(params);
    }
    let bands = IntervalUnion::from_sorted(list);
    check_bands(params, &bands, n_bands, "cascade band")?;

    let mut unstable_points = Vec::with_capacity(p);
    for (m, state) in states.iter().take(p).enumerate() {
        let period = 1usize << m;
        let k_m = state.k_p;
        let x = (params.iterate(1.0, period).last() + k_m) / (k_m + 1.0);
        let mut y = x;
        let mut multiplier = 1.0;
        for _ in 0..period {
            multiplier *= params.slope(y);
            y = params.eval(y);
        }
        let defect = (y - x).abs();
        if defect > ORBIT_TOL * multiplier.abs().max(1.0) {
            return Err(Error::PrecisionLoss { what: "unstable cascade point residual", defect });
        }
        if multiplier.abs() <= 1.0 {
            return Err(Error::PrecisionLoss { what: "unstable cascade point multiplier", defect: multiplier });
        }
        if bands.contains(x) {
            return Err(Error::PrecisionLoss { what: "unstable cascade point inside a band", defect: bands.distance(x) });
        }
        unstable_points.push(UnstablePoint { m, x, multiplier });
    }

    Ok(CascadeData { p, b_p, a_p, c_p, k_p, bands, unstable_points })
}

fn check_bands(params: &MapParams, bands: &IntervalUnion, expected: usize, what: &'static str) -> Result<()> {
    let gap = bands.min_gap();
    if bands.len() != expected || gap <= 0.0 {
        return Err(Error::PrecisionLoss { what, defect: gap });
    }
    let defect = bands.image(params).hausdorff(bands);
    if defect > INVARIANCE_TOL {
        return Err(Error::PrecisionLoss { what: "band invariance", defect });
    }
    Ok(())
}

/// Quantities of the window `T_m` in unit coordinates, with the closed form of
/// `g^(m+1)` on `[0, b + r x_m]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowCore {
    pub m: usize,
    pub unit: UnitMap,
    /// `x_m = 1 - (1 - r^m)/(k r^(m-1)(1 - r))`, the point with `g^(m-1)(x_m) = a`.
    pub x_m: f64,
    /// `a_1 = k r^m x_m / (k r^m + 1)`
    pub a1: f64,
    /// `b_1 = k^2 r^(m-1) x_m / (k^2 r^(m-1) - 1)`
    pub b1: f64,
    /// `k r^m x_m`
    pub p_val: f64,
    /// `k^2 r^(m-1) (k r^m - 1) x_m`
    pub p1: f64,
    /// `p_val - k r^m p1`
    pub p2: f64,
    /// Slope magnitude `k r^m` of the outer pieces of `g^(m+1)`.
    pub outer_slope: f64,
    /// Slope `k^2 r^(m-1)` of the middle piece.
    pub inner_slope: f64,
    /// `x_m + 1/(k^2 r^(m-1))`, where `g^(m+1)` reaches 1.
    pub peak: f64,
    /// `b + r x_m`, the right end of the closed-form domain.
    pub domain_end: f64,
}

impl WindowCore {
    /// `g^(m+1)(x)` from the three-piece formula; `x` must lie in `[0, b + r x_m]`.
    pub fn g_power(&self, x: f64) -> f64 {
        let d = x - self.x_m;
        if x <= self.x_m {
            -self.outer_slope * d
        } else if x <= self.peak {
            self.inner_slope * d
        } else {
            self.unit.b + self.unit.r() - self.outer_slope * d
        }
    }

    /// `g^(m+1)(x)` by plain iteration.
    pub fn g_power_iterated(&self, x: f64) -> f64 {
        self.unit.apply_n(x, self.m + 1)
    }

    pub fn sub(&self) -> WindowSub {
        let (k, r) = (self.unit.k(), self.unit.r());
        let rm = r.powi(self.m as i32);
        if k * rm < 1.0 {
            WindowSub::R1
        } else if rm * k * k - k - r > 0.0 {
            WindowSub::R4
        } else if rm * rm * k * k * k - k - r > 0.0 {
            WindowSub::R2
        } else {
            WindowSub::R3
        }
    }
}

fn window_m(params: &MapParams) -> Result<usize> {
    let (k, r) = (params.k(), params.r());
    let wrong = || Error::WrongRegion { expected: "window T_m", found: region_name(params) };
    if !(r < 1.0 && k > 2.0) {
        return Err(wrong());
    }
    match window_index(k, r, 0.0)? {
        WindowIndex::Inside(m) => Ok(m),
        _ => Err(wrong()),
    }
}

pub fn window_core(params: &MapParams) -> Result<WindowCore> {
    let m = window_m(params)?;
    let unit = params.to_unit()?;
    let (k, r) = (params.k(), params.r());
    let rm1 = r.powi(m as i32 - 1);
    let rm = rm1 * r;
    let x_m = 1.0 - (1.0 - rm) / (k * rm1 * (1.0 - r));
    let outer_slope = k * rm;
    let inner_slope = k * k * rm1;
    let p_val = outer_slope * x_m;
    let p1 = inner_slope * (outer_slope - 1.0) * x_m;
    let core = WindowCore {
        m,
        unit,
        x_m,
        a1: p_val / (outer_slope + 1.0),
        b1: inner_slope * x_m / (inner_slope - 1.0),
        p_val,
        p1,
        p2: p_val - outer_slope * p1,
        outer_slope,
        inner_slope,
        peak: x_m + 1.0 / inner_slope,
        domain_end: unit.b + r * x_m,
    };
    let defect = (unit.apply_n(x_m, m - 1) - unit.a).abs();
    if !(x_m > 0.0 && x_m < unit.b && unit.b < unit.a) || defect > ORBIT_TOL {
        return Err(Error::PrecisionLoss { what: "window point x_m", defect });
    }
    Ok(core)
}

/// The two period-`(m+1)` orbits of the window and the trap set `U`, in unit coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowOrbits {
    pub core: WindowCore,
    /// Orbit of `a_1`; `points[i]` is `a_(i+1)`.
    pub a_orbit: PeriodicOrbit,
    /// Orbit of `b_1`; `points[i]` is `b_(i+1)`.
    pub b_orbit: PeriodicOrbit,
    /// `bhat[j]` is `b^_(j+2)` for `j = 0..m`, ending with `b^_(m+1) = b_(m+1)`.
    pub bhat: Vec<f64>,
    /// `U = [0, b_1) u (b^_i, b_i) for i = 2..m u (b_(m+1), 1]`, as closures.
    pub trap: Vec<Interval>,
}

impl WindowOrbits {
    /// Whether `x` lies in the open trap set `U`.
    pub fn in_trap(&self, x: f64) -> bool {
        let last = self.trap.len() - 1;
        self.trap.iter().enumerate().any(|(i, iv)| {
            let left_ok = if i == 0 { iv.lo <= x } else { iv.lo < x };
            let right_ok = if i == last { x <= iv.hi } else { x < iv.hi };
            left_ok && right_ok
        })
    }
}

fn chain(values: &[f64], what: &'static str) -> Result<()> {
    for w in values.windows(2) {
        if !(w[0] < w[1]) {
            return Err(Error::PrecisionLoss { what, defect: w[0] - w[1] });
        }
    }
    Ok(())
}

/// Requires `(k, r)` in `T_m` with `r^m k^2 - k - r < 0`.
pub fn window_periodic_orbits(params: &MapParams) -> Result<WindowOrbits> {
    let core = window_core(params)?;
    if core.sub() == WindowSub::R4 {
        return Err(Error::WrongRegion { expected: "window with r^m k^2 - k - r < 0", found: region_name(params) });
    }
    let g = core.unit;
    let m = core.m;
    let a_orbit = PeriodicOrbit::from_seed(&g, core.a1, m + 1)?;
    let b_orbit = PeriodicOrbit::from_seed(&g, core.b1, m + 1)?;
    let a_i = |i: usize| a_orbit.points[i - 1];
    let b_i = |i: usize| b_orbit.points[i - 1];
    let g0 = |n: usize| g.apply_n(0.0, n);
    let gx = |n: usize| g.apply_n(core.x_m, n);

    chain(&[core.p_val, core.b1, g.b], "window ordering k r^m x_m < b_1 < b")?;
    for i in 1..m {
        chain(&[g0(i - 1), a_i(i), gx(i - 1), b_i(i), g0(i), gx(i)], "window orbit interleaving")?;
        if gx(i) > g.a + ORBIT_TOL {
            return Err(Error::PrecisionLoss { what: "window orbit interleaving", defect: gx(i) - g.a });
        }
    }
    chain(&[g0(m - 1), a_i(m), g.a, b_i(m), b_i(m + 1), g0(m), a_i(m + 1)], "window orbit interleaving")?;

    let mut bhat = vec![0.0; m];
    bhat[m - 1] = b_i(m + 1);
    for j in (0..m - 1).rev() {
        bhat[j] = (bhat[j + 1] - g.b) / g.r();
    }
    for i in 2..=m {
        chain(&[b_i(i - 1), bhat[i - 2], g0(i - 1)], "backward chain b^_i")?;
    }

    let mut trap = vec![Interval::new(0.0, core.b1)];
    for i in 2..=m {
        trap.push(Interval::new(bhat[i - 2], b_i(i)));
    }
    trap.push(Interval::new(b_i(m + 1), 1.0));

    Ok(WindowOrbits { core, a_orbit, b_orbit, bhat, trap })
}

/// `g^i([0, p])` for `i = 0..=m`, in unit coordinates and in order of `i`.
pub fn lambda_bands(core: &WindowCore) -> Vec<Interval> {
    orbit_of_interval(&core.unit, Interval::new(0.0, core.p_val), core.m + 1)
}

/// `g^i([0, p_1])` for `i = 0..=2m+1`, in unit coordinates and in order of `i`.
pub fn lambda1_bands(core: &WindowCore) -> Vec<Interval> {
    orbit_of_interval(&core.unit, Interval::new(0.0, core.p1), 2 * core.m + 2)
}

fn orbit_of_interval(g: &UnitMap, start: Interval, count: usize) -> Vec<Interval> {
    let mut out = Vec::with_capacity(count);
    let mut iv = start;
    for _ in 0..count {
        out.push(iv);
        iv = iv.image(g);
    }
    out
}

/// Band attractor of `R_m2` (`m + 1` bands) or `R_m3` (`2m + 2` bands), in map coordinates.
pub fn window_band_attractor(params: &MapParams) -> Result<IntervalUnion> {
    let core = window_core(params)?;
    let g = core.unit;
    let to_map = |list: &[Interval]| IntervalUnion::from_sorted(list.iter().map(|iv| Interval::hull(g.to_map(iv.lo), g.to_map(iv.hi))).collect());
    match core.sub() {
        WindowSub::R2 => {
            let bands = to_map(&lambda_bands(&core));
            check_bands(params, &bands, core.m + 1, "window band")?;
            Ok(bands)
        }
        WindowSub::R3 => {
            let orbits = window_periodic_orbits(params)?;
            let outer = lambda_bands(&core);
            let inner = lambda1_bands(&core);
            let m = core.m;
            for i in 0..=m {
                let (lo, hi) = {
                    let (x, y) = (inner[i], inner[m + 1 + i]);
                    if x.lo < y.lo { (x, y) } else { (y, x) }
                };
                let a = orbits.a_orbit.points[i];
                let nested = outer[i].contains_interval(&lo, ORBIT_TOL) && outer[i].contains_interval(&hi, ORBIT_TOL);
                if !nested || !(lo.hi < a && a < hi.lo) {
                    return Err(Error::PrecisionLoss { what: "nesting of window bands", defect: (hi.lo - lo.hi).min(0.0) });
                }
            }
            let bands = to_map(&inner);
            check_bands(params, &bands, 2 * m + 2, "window band")?;
            Ok(bands)
        }
        _ => Err(Error::WrongRegion { expected: "window subregion R2 or R3", found: region_name(params) }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum AttractorKind {
    Point { x: f64 },
    Cycle { orbit: PeriodicOrbit },
    Bands { bands: IntervalUnion },
    FullInterval { interval: Interval },
    NoneEscape,
}

/// Invariant sets that are not attracted: unstable orbits and Cantor repellers.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Exceptional {
    pub unstable_orbits: Vec<PeriodicOrbit>,
    pub cascade_points: Vec<UnstablePoint>,
    #[serde(skip)]
    pub cantor: Option<CantorSystem>,
    /// Hull of the Cantor set in map coordinates.
    pub cantor_hull: Option<Interval>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Attractor {
    pub region: RegionTag,
    pub kind: AttractorKind,
    pub exceptional: Exceptional,
}

impl Attractor {
    /// Distance from `x` to the attractor; infinite when there is none.
    pub fn distance(&self, x: f64) -> f64 {
        match &self.kind {
            AttractorKind::Point { x: p } => (x - p).abs(),
            AttractorKind::Cycle { orbit } => orbit.distance(x),
            AttractorKind::Bands { bands } => bands.distance(x),
            AttractorKind::FullInterval { interval } => interval.distance(x),
            AttractorKind::NoneEscape => f64::INFINITY,
        }
    }
}

pub fn fixed_point_attractor(params: &MapParams) -> Result<Attractor> {
    let k = params.k();
    if !(k < 1.0) {
        return Err(Error::WrongRegion { expected: "FixedPoint (k < 1)", found: region_name(params) });
    }
    Ok(Attractor {
        region: RegionTag::FixedPoint,
        kind: AttractorKind::Point { x: 1.0 / (k + 1.0) },
        exceptional: Exceptional::default(),
    })
}

pub fn two_cycle(params: &MapParams) -> Result<Attractor> {
    let (k, r) = (params.k(), params.r());
    if !(k > 1.0 && r * k < 1.0) {
        return Err(Error::WrongRegion { expected: "TwoCycle (k > 1, r < 1/k)", found: region_name(params) });
    }
    let d = 1.0 + r * k;
    let orbit = PeriodicOrbit { points: vec![(1.0 - k) / d, (1.0 + r) / d], period: 2, multiplier: -r * k, stable: true };
    let x_star = 1.0 / (k + 1.0);
    let repeller = PeriodicOrbit { points: vec![x_star], period: 1, multiplier: -k, stable: false };
    Ok(Attractor {
        region: RegionTag::TwoCycle,
        kind: AttractorKind::Cycle { orbit },
        exceptional: Exceptional { unstable_orbits: vec![repeller], ..Default::default() },
    })
}

fn full_interval(params: &MapParams, region: RegionTag) -> Attractor {
    let (lo, hi) = params.core_interval();
    Attractor { region, kind: AttractorKind::FullInterval { interval: Interval::new(lo, hi) }, exceptional: Exceptional::default() }
}

fn window_cantor(params: &MapParams, ex: &mut Exceptional) -> Result<()> {
    let sys = window_cantor_system(params)?;
    ex.cantor_hull = Some(sys.hull_in_map_coords());
    ex.cantor = Some(sys);
    Ok(())
}

/// Attractor and exceptional set for any classified `(k, r)`.
pub fn attractor(params: &MapParams) -> Result<Attractor> {
    let region = classify(params, &ClassifyOptions::default());
    match region {
        RegionTag::Boundary { which } => Err(Error::NotClassified(which)),
        RegionTag::Trivial => Err(Error::WrongRegion { expected: "canonical skew tent map", found: region.to_string() }),
        RegionTag::FixedPoint => fixed_point_attractor(params),
        RegionTag::TwoCycle => two_cycle(params),
        RegionTag::FullIntervalChaos | RegionTag::Window { sub: WindowSub::R4, .. } => Ok(full_interval(params, region)),
        RegionTag::EscapeCantor => {
            let sys = escape_cantor_system(params)?;
            let ti = params.trapping_interval();
            Ok(Attractor {
                region,
                kind: AttractorKind::NoneEscape,
                exceptional: Exceptional {
                    cantor_hull: Some(Interval::new(ti.alpha, ti.beta)),
                    cantor: Some(sys),
                    ..Default::default()
                },
            })
        }
        RegionTag::Cascade { p, terminal } => {
            if !terminal {
                return Err(Error::DepthOverflow { p });
            }
            let data = cascade_attractor(params, p)?;
            Ok(Attractor {
                region,
                kind: AttractorKind::Bands { bands: data.bands },
                exceptional: Exceptional { cascade_points: data.unstable_points, ..Default::default() },
            })
        }
        RegionTag::Window { sub: WindowSub::R1, .. } => {
            let orbits = window_periodic_orbits(params)?;
            let g = orbits.core.unit;
            let mut ex = Exceptional::default();
            window_cantor(params, &mut ex)?;
            Ok(Attractor {
                region,
                kind: AttractorKind::Cycle { orbit: orbits.a_orbit.mapped(|u| g.to_map(u)) },
                exceptional: ex,
            })
        }
        RegionTag::Window { sub, .. } => {
            let bands = window_band_attractor(params)?;
            let mut ex = Exceptional::default();
            window_cantor(params, &mut ex)?;
            if sub == WindowSub::R3 {
                let orbits = window_periodic_orbits(params)?;
                let g = orbits.core.unit;
                ex.unstable_orbits.push(orbits.a_orbit.mapped(|u| g.to_map(u)));
            }
            Ok(Attractor { region, kind: AttractorKind::Bands { bands }, exceptional: ex })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mp(k: f64, r: f64) -> MapParams {
        MapParams::new(k, r).unwrap()
    }

    #[test]
    fn fixed_point_examples() {
        let a = fixed_point_attractor(&mp(0.5, 3.0)).unwrap();
        assert_eq!(a.kind, AttractorKind::Point { x: 2.0 / 3.0 });
        let a = fixed_point_attractor(&mp(0.25, 1.0)).unwrap();
        let AttractorKind::Point { x } = a.kind else { panic!() };
        assert!((x - 0.8).abs() < 1e-15);
        assert!((mp(0.25, 1.0).eval(x) - x).abs() <= 1e-15);
        let p = mp(0.9, 5.0);
        let x_star = 1.0 / 1.9;
        let end = p.iterate(0.3, 1000).last();
        assert!((end - x_star).abs() < 1e-10);
        assert!(matches!(fixed_point_attractor(&mp(1.5, 1.0)), Err(Error::WrongRegion { .. })));
    }

    #[test]
    fn two_cycle_examples() {
        let a = two_cycle(&mp(3.0, 0.25)).unwrap();
        let AttractorKind::Cycle { orbit } = &a.kind else { panic!() };
        assert!((orbit.points[0] + 8.0 / 7.0).abs() < 1e-12);
        assert!((orbit.points[1] - 5.0 / 7.0).abs() < 1e-12);
        assert_eq!(orbit.multiplier, -0.75);
        let p = mp(2.0, 0.1);
        let a = two_cycle(&p).unwrap();
        let AttractorKind::Cycle { orbit } = &a.kind else { panic!() };
        assert!((orbit.points[0] + 1.0 / 1.2).abs() < 1e-14);
        assert!((p.eval(p.eval(orbit.points[0])) - orbit.points[0]).abs() <= 1e-14);
        assert!(two_cycle(&mp(2.0, 0.8)).is_err());
    }

    #[test]
    fn cascade_examples() {
        let d = cascade_attractor(&mp(1.5, 1.0), 1).unwrap();
        let iv = d.bands.intervals();
        assert_eq!(iv.len(), 2);
        assert!((iv[0].lo + 0.5).abs() < 1e-12 && (iv[0].hi - 0.25).abs() < 1e-12);
        assert!((iv[1].lo - 0.5).abs() < 1e-12 && (iv[1].hi - 1.0).abs() < 1e-12);
        assert!((d.unstable_points[0].x - 0.4).abs() < 1e-15);
        assert_eq!(d.unstable_points[0].multiplier, -1.5);

        let d = cascade_attractor(&mp(1.2, 0.9), 2).unwrap();
        assert_eq!(d.bands.len(), 4);
        assert!(d.bands.min_gap() > 0.0);

        let wide = cascade_attractor(&mp(1.5, 1.0), 1).unwrap().bands.total_length();
        let narrow = cascade_attractor(&mp(1.05, 1.0), 1).unwrap().bands.total_length();
        assert!(narrow < wide);
        assert!(cascade_attractor(&mp(2.0, 0.8), 1).is_err());
    }

    #[test]
    fn window_core_example() {
        let c = window_core(&mp(3.5, 0.5)).unwrap();
        assert_eq!(c.m, 2);
        assert!((c.x_m - 1.0 / 7.0).abs() < 1e-15);
        assert!((c.a1 - 1.0 / 15.0).abs() < 1e-15);
        assert!((c.b1 - 0.875 / 5.125).abs() < 1e-15);
        assert!((c.peak - (1.0 / 7.0 + 1.0 / 6.125)).abs() < 1e-15);
        assert!(c.g_power(c.x_m).abs() < 1e-15);
        assert!((c.g_power(c.peak) - 1.0).abs() < 1e-12);
        assert!((c.g_power_iterated(c.peak) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn window_orbits_example() {
        let w = window_periodic_orbits(&mp(3.5, 0.5)).unwrap();
        let expect = [1.0 / 15.0, 71.0 / 105.0, 103.0 / 105.0];
        for (x, e) in w.a_orbit.points.iter().zip(expect) {
            assert!((x - e).abs() < 1e-12);
        }
        assert!((w.a_orbit.multiplier.abs() - 0.875).abs() < 1e-12);
        assert!(w.a_orbit.stable);
        assert!((w.b_orbit.multiplier.abs() - 6.125).abs() < 1e-12);
        assert!(!w.b_orbit.stable);
        assert!((w.bhat[0] - 0.616725).abs() < 1e-6);
        assert!((w.b_orbit.points[1] - 0.728223).abs() < 1e-6);
        assert!((w.b_orbit.points[2] - 0.951220).abs() < 1e-6);
    }

    #[test]
    fn window_band_examples() {
        let p = mp(4.3, 0.5);
        let c = window_core(&p).unwrap();
        assert!((c.x_m - (1.0 - 0.75 / 1.075)).abs() < 1e-15);
        let bands = window_band_attractor(&p).unwrap();
        assert_eq!(bands.len(), 3);
        let base = Interval::new(0.0, c.p_val);
        let img = (0..3).fold(base, |iv, _| iv.image(&c.unit));
        assert!((img.lo - base.lo).abs() <= 1e-9 && (img.hi - base.hi).abs() <= 1e-9);

        assert_eq!(window_band_attractor(&mp(4.1, 0.5)).unwrap().len(), 6);
        assert!(window_band_attractor(&mp(3.5, 0.5)).is_err());
    }

    #[test]
    fn attractor_dispatch() {
        let a = attractor(&mp(3.5, 0.5)).unwrap();
        let AttractorKind::Cycle { orbit } = &a.kind else { panic!() };
        let h = |x: f64| -2.5 + 3.5 * x;
        assert!((orbit.points[0] - h(1.0 / 15.0)).abs() < 1e-12);
        assert!(a.exceptional.cantor.is_some());

        let a = attractor(&mp(5.0, 0.5)).unwrap();
        assert_eq!(a.kind, AttractorKind::FullInterval { interval: Interval::new(-4.0, 1.0) });
        let a = attractor(&mp(0.5, 1.0)).unwrap();
        assert_eq!(a.kind, AttractorKind::Point { x: 2.0 / 3.0 });
        let a = attractor(&mp(3.0, 2.0)).unwrap();
        assert_eq!(a.kind, AttractorKind::NoneEscape);
        assert_eq!(a.exceptional.cantor_hull, Some(Interval::new(-1.0, 2.0 / 3.0)));
        let a = attractor(&mp(4.1, 0.5)).unwrap();
        assert_eq!(a.exceptional.unstable_orbits.len(), 1);
        assert!(matches!(attractor(&mp(1.0, 1.0)), Err(Error::NotClassified(_))));
    }
}
