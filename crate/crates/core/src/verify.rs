//! Numerical diagnostics: basins, invariance, disjointness, Lyapunov exponents
//! and interval covering.
//!
//! Random seeds come from `ChaCha8Rng` seeded with a 64-bit value. All seeds are
//! drawn up front in order, so results do not depend on how the per-seed work is
//! scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::attractors::{attractor, Attractor, AttractorKind};
use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalUnion};
use crate::map::{MapParams, ESCAPE_THRESHOLD};
use crate::regions::{classify, ClassifyOptions, RegionTag};

/// Name of the generator, reported with every sampled result.
pub const RNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.3)";
pub const DEFAULT_EPS: f64 = 1e-6;
pub const DEFAULT_HORIZON: usize = 10_000;
/// Half-width of the sampling box when the trapping interval is unbounded.
pub const UNBOUNDED_BOX: f64 = 10.0;
/// Number of tail steps checked against `f^n(y) - alpha = r^n (y - alpha)`.
const TAIL_STEPS: usize = 20;
/// Cap on the number of pieces tracked by [`covering_test`].
const MAX_PIECES: usize = 1 << 16;

fn draw_seeds(lo: f64, hi: f64, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(lo..hi)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LyapunovEstimate {
    pub lambda: f64,
    pub stderr: f64,
    pub n: usize,
    pub n_seeds: usize,
    /// Seeds whose orbit stayed bounded and entered the average.
    pub n_used: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub rng: &'static str,
}

/// Interval from which Lyapunov seeds are drawn.
fn lyapunov_window(params: &MapParams) -> (f64, f64) {
    let ti = params.trapping_interval();
    if params.k() > 1.0 && !params.is_reducible() && ti.is_bounded() {
        (ti.alpha, ti.beta)
    } else {
        let (lo, hi) = params.core_interval();
        (lo.min(hi), lo.max(hi))
    }
}

fn escaped(params: &MapParams, x: f64) -> bool {
    let ti = params.trapping_interval();
    (ti.is_bounded() && !ti.contains(x)) || x.abs() > ESCAPE_THRESHOLD
}

/// Mean of `(1/n) sum ln|f'(x_i)|` over `n_seeds` orbits after `burn_in` steps.
pub fn lyapunov(params: &MapParams, n: usize, n_seeds: usize, burn_in: usize, seed: u64) -> Result<LyapunovEstimate> {
    if n < 1000 || n_seeds == 0 {
        return Err(Error::OutOfDomain(format!("lyapunov needs n >= 1000 and at least one seed, got n={n}, seeds={n_seeds}")));
    }
    let (lo, hi) = lyapunov_window(params);
    let seeds = draw_seeds(lo, hi, n_seeds, seed);
    let (ln_r, ln_k) = (params.r().ln(), params.k().ln());
    let per_seed: Vec<Option<f64>> = seeds
        .par_iter()
        .map(|&x0| {
            let mut x = x0;
            for _ in 0..burn_in {
                x = params.eval(x);
                if escaped(params, x) {
                    return None;
                }
            }
            let mut sum = 0.0;
            for _ in 0..n {
                sum += if x <= 0.0 { ln_r } else { ln_k };
                x = params.eval(x);
                if escaped(params, x) {
                    return None;
                }
            }
            Some(sum / n as f64)
        })
        .collect();
    let values: Vec<f64> = per_seed.into_iter().flatten().collect();
    if values.is_empty() {
        return Err(Error::NoBoundedOrbit);
    }
    let used = values.len() as f64;
    let lambda = values.iter().sum::<f64>() / used;
    let stderr = if values.len() > 1 {
        let var = values.iter().map(|v| (v - lambda).powi(2)).sum::<f64>() / (used - 1.0);
        (var / used).sqrt()
    } else {
        0.0
    };
    Ok(LyapunovEstimate { lambda, stderr, n, n_seeds, n_used: values.len(), burn_in, seed, rng: RNG_NAME })
}

/// Hausdorff distance between `u` and its exact image under `f`.
pub fn check_invariance(u: &IntervalUnion, params: &MapParams) -> f64 {
    u.image(params).hausdorff(u)
}

/// Smallest gap between consecutive intervals after sorting; negative on overlap
/// and `+inf` when there are fewer than two intervals.
pub fn check_disjoint(intervals: &[Interval]) -> f64 {
    IntervalUnion::from_sorted(intervals.to_vec()).min_gap()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FateStats {
    pub n_samples: usize,
    pub n_to_attractor: usize,
    pub n_escaped: usize,
    pub n_undecided: usize,
    /// Median first step at which an attracted seed came within `eps`.
    pub median_landing_time: Option<f64>,
    /// Escaped seeds whose tail broke `f^n(y) - alpha = r^n (y - alpha)`.
    pub tail_violations: usize,
    pub sample_interval: Interval,
    pub eps: f64,
    pub horizon: usize,
    pub seed: u64,
    pub rng: &'static str,
}

impl FateStats {
    pub fn attracted_fraction(&self) -> f64 {
        self.n_to_attractor as f64 / self.n_samples.max(1) as f64
    }

    pub fn escaped_fraction(&self) -> f64 {
        self.n_escaped as f64 / self.n_samples.max(1) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Fate {
    Attracted(usize),
    Escaped { tail_ok: bool },
    Undecided,
}

/// Interval the basin experiment samples from: `int(I)` when bounded, otherwise a box.
pub fn sampling_interval(params: &MapParams) -> Interval {
    let ti = params.trapping_interval();
    if ti.is_bounded() {
        Interval::new(ti.alpha, ti.beta)
    } else {
        Interval::new(-UNBOUNDED_BOX, UNBOUNDED_BOX)
    }
}

/// Checks the linear divergence below `alpha` along the recorded tail.
fn escape_tail_ok(params: &MapParams, y: f64) -> bool {
    let alpha = params.trapping_interval().alpha;
    let r = params.r();
    let mut x = y;
    let mut scale = 1.0;
    for _ in 0..TAIL_STEPS {
        x = params.eval(x);
        scale *= r;
        let expected = scale * (y - alpha);
        if ((x - alpha) - expected).abs() > 1e-9 * expected.abs().max(1.0) {
            return false;
        }
    }
    true
}

fn seed_fate(params: &MapParams, att: &Attractor, x0: f64, horizon: usize, eps: f64) -> Fate {
    let ti = params.trapping_interval();
    let mut x = x0;
    for step in 0..=horizon {
        if att.distance(x) <= eps {
            return Fate::Attracted(step);
        }
        if ti.is_bounded() && x < ti.alpha {
            return Fate::Escaped { tail_ok: escape_tail_ok(params, x) };
        }
        if x.abs() > ESCAPE_THRESHOLD {
            return Fate::Escaped { tail_ok: true };
        }
        x = params.eval(x);
    }
    Fate::Undecided
}

/// Samples `n_samples` uniform seeds and records where each one goes.
pub fn basin_experiment(params: &MapParams, n_samples: usize, horizon: usize, eps: f64, seed: u64) -> Result<FateStats> {
    let att = match attractor(params) {
        Ok(a) => a,
        Err(e) => {
            if classify(params, &ClassifyOptions::default()) == RegionTag::EscapeCantor {
                Attractor { region: RegionTag::EscapeCantor, kind: AttractorKind::NoneEscape, exceptional: Default::default() }
            } else {
                return Err(e);
            }
        }
    };
    let box_ = sampling_interval(params);
    let seeds = draw_seeds(box_.lo, box_.hi, n_samples, seed);
    let fates: Vec<Fate> = seeds.par_iter().map(|&x0| seed_fate(params, &att, x0, horizon, eps)).collect();

    let mut times = Vec::new();
    let (mut esc, mut und, mut bad_tail) = (0, 0, 0);
    for f in fates {
        match f {
            Fate::Attracted(t) => times.push(t),
            Fate::Escaped { tail_ok } => {
                esc += 1;
                if !tail_ok {
                    bad_tail += 1;
                }
            }
            Fate::Undecided => und += 1,
        }
    }
    times.sort_unstable();
    let median_landing_time = match times.len() {
        0 => None,
        n if n % 2 == 1 => Some(times[n / 2] as f64),
        n => Some(0.5 * (times[n / 2 - 1] + times[n / 2]) as f64),
    };
    Ok(FateStats {
        n_samples,
        n_to_attractor: times.len(),
        n_escaped: esc,
        n_undecided: und,
        median_landing_time,
        tail_violations: bad_tail,
        sample_interval: box_,
        eps,
        horizon,
        seed,
        rng: RNG_NAME,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Covering {
    CoveredAt { n: usize },
    NotCovered,
}

/// Pushes `start` forward under `f^power` until the image contains `target`
/// (with `1e-9` slack) or `horizon` applications have been made.
pub fn covering_test(params: &MapParams, power: usize, start: Interval, target: &IntervalUnion, horizon: usize) -> Covering {
    let mut set = IntervalUnion::single(start);
    for n in 0..=horizon {
        if set.covers(target, 1e-9) {
            return Covering::CoveredAt { n };
        }
        if n == horizon || set.len() > MAX_PIECES {
            break;
        }
        for _ in 0..power.max(1) {
            set = set.image(params);
        }
    }
    Covering::NotCovered
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mp(k: f64, r: f64) -> MapParams {
        MapParams::new(k, r).unwrap()
    }

    #[test]
    fn disjoint_examples() {
        assert_eq!(check_disjoint(&[Interval::new(-0.5, 0.25), Interval::new(0.5, 1.0)]), 0.25);
        assert_eq!(check_disjoint(&[Interval::new(0.0, 1.0)]), f64::INFINITY);
        assert!(check_disjoint(&[Interval::new(0.0, 1.0), Interval::new(0.5, 2.0)]) < 0.0);
    }

    #[test]
    fn invariance_examples() {
        let u = IntervalUnion::from_sorted(vec![Interval::new(-0.5, 0.25), Interval::new(0.5, 1.0)]);
        assert!(check_invariance(&u, &mp(1.5, 1.0)) <= 1e-12);
        let x = 2.0 / 3.0;
        // x* is fixed up to one rounding of f
        assert!(check_invariance(&IntervalUnion::single(Interval::point(x)), &mp(0.5, 2.0)) <= f64::EPSILON);
    }

    #[test]
    fn lyapunov_two_cycle() {
        let est = lyapunov(&mp(3.0, 0.25), 100_000, 4, 1000, 1).unwrap();
        assert!((est.lambda - 0.75f64.ln() / 2.0).abs() < 1e-3, "{est:?}");
        assert!(lyapunov(&mp(3.0, 0.25), 10, 4, 0, 1).is_err());
    }

    #[test]
    fn lyapunov_escape_has_no_bounded_orbit() {
        assert_eq!(lyapunov(&mp(3.0, 2.0), 1000, 4, 100, 1), Err(Error::NoBoundedOrbit));
    }

    #[test]
    fn basin_fixed_point() {
        let s = basin_experiment(&mp(0.5, 1.0), 1000, DEFAULT_HORIZON, DEFAULT_EPS, 3).unwrap();
        assert_eq!(s.n_to_attractor, 1000);
        assert_eq!(s.n_to_attractor + s.n_escaped + s.n_undecided, s.n_samples);
    }

    #[test]
    fn basin_escape() {
        let s = basin_experiment(&mp(3.0, 2.0), 1000, DEFAULT_HORIZON, DEFAULT_EPS, 3).unwrap();
        assert!(s.n_escaped >= 990);
        assert_eq!(s.tail_violations, 0);
    }

    #[test]
    fn covering_examples() {
        let p = mp(2.0, 0.8);
        let target = IntervalUnion::single(Interval::new(-1.0, 1.0));
        assert!(matches!(covering_test(&p, 1, Interval::new(0.1, 0.101), &target, 200), Covering::CoveredAt { .. }));
        let p = mp(3.5, 0.5);
        let target = IntervalUnion::single(Interval::new(-2.5, 1.0));
        assert_eq!(covering_test(&p, 1, Interval::new(0.1, 0.101), &target, 200), Covering::NotCovered);
    }
}
