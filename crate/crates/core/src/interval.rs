//! Closed intervals, finite unions of them, and their exact images under a
//! two-branch piecewise-linear map.

use std::fmt;

use serde::Serialize;

use crate::map::{MapParams, UnitMap};

/// A continuous map that is monotone on each side of a single kink.
pub trait PiecewiseMap {
    fn kink(&self) -> f64;
    fn apply(&self, x: f64) -> f64;
    fn slope_at(&self, x: f64) -> f64;
}

impl PiecewiseMap for MapParams {
    fn kink(&self) -> f64 {
        0.0
    }
    fn apply(&self, x: f64) -> f64 {
        self.eval(x)
    }
    fn slope_at(&self, x: f64) -> f64 {
        self.slope(x)
    }
}

impl PiecewiseMap for UnitMap {
    fn kink(&self) -> f64 {
        self.a
    }
    fn apply(&self, x: f64) -> f64 {
        UnitMap::apply(self, x)
    }
    fn slope_at(&self, x: f64) -> f64 {
        self.slope(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "interval [{lo}, {hi}] is reversed");
        Self { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    /// Interval spanned by two points in either order.
    pub fn hull(a: f64, b: f64) -> Self {
        Self { lo: a.min(b), hi: a.max(b) }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_with(&self, x: f64, slack: f64) -> bool {
        self.lo - slack <= x && x <= self.hi + slack
    }

    pub fn contains_interval(&self, other: &Interval, slack: f64) -> bool {
        self.lo - slack <= other.lo && other.hi <= self.hi + slack
    }

    pub fn distance(&self, x: f64) -> f64 {
        if x < self.lo {
            self.lo - x
        } else if x > self.hi {
            x - self.hi
        } else {
            0.0
        }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Exact image under `map`: the hull of the endpoint images, extended to the
    /// kink value when the kink lies inside.
    pub fn image<M: PiecewiseMap + ?Sized>(&self, map: &M) -> Interval {
        let (ylo, yhi) = (map.apply(self.lo), map.apply(self.hi));
        let c = map.kink();
        if self.lo < c && c < self.hi {
            let peak = map.apply(c);
            Interval::new(ylo.min(yhi), peak.max(ylo.max(yhi)))
        } else {
            Interval::hull(ylo, yhi)
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Sorted list of closed intervals.
///
/// Built through [`IntervalUnion::merged`] the intervals are pairwise disjoint;
/// [`IntervalUnion::from_sorted`] keeps whatever it is given so that overlaps can be
/// detected by [`IntervalUnion::min_gap`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalUnion {
    intervals: Vec<Interval>,
}

impl IntervalUnion {
    pub fn single(iv: Interval) -> Self {
        Self { intervals: vec![iv] }
    }

    /// Sorts by left endpoint without merging.
    pub fn from_sorted(mut intervals: Vec<Interval>) -> Self {
        intervals.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        Self { intervals }
    }

    /// Sorts and merges intervals that overlap or touch.
    pub fn merged(intervals: Vec<Interval>) -> Self {
        let mut sorted = Self::from_sorted(intervals).intervals;
        let mut out: Vec<Interval> = Vec::with_capacity(sorted.len());
        for iv in sorted.drain(..) {
            match out.last_mut() {
                Some(last) if iv.lo <= last.hi => last.hi = last.hi.max(iv.hi),
                _ => out.push(iv),
            }
        }
        Self { intervals: out }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        self.intervals.iter().map(Interval::width).sum()
    }

    pub fn hull(&self) -> Option<Interval> {
        Some(Interval::new(self.intervals.first()?.lo, self.intervals.last()?.hi))
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|iv| iv.contains(x))
    }

    pub fn distance(&self, x: f64) -> f64 {
        let i = self.intervals.partition_point(|iv| iv.hi < x);
        let mut d = f64::INFINITY;
        if i < self.intervals.len() {
            d = d.min(self.intervals[i].distance(x));
        }
        if i > 0 {
            d = d.min(self.intervals[i - 1].distance(x));
        }
        d
    }

    /// Whether every interval of `other` sits inside one interval of `self`.
    pub fn covers(&self, other: &IntervalUnion, slack: f64) -> bool {
        other
            .intervals
            .iter()
            .all(|t| self.intervals.iter().any(|iv| iv.contains_interval(t, slack)))
    }

    /// Smallest gap between consecutive intervals; negative on overlap, `+inf` for
    /// fewer than two intervals.
    pub fn min_gap(&self) -> f64 {
        self.intervals
            .windows(2)
            .map(|w| w[1].lo - w[0].hi)
            .fold(f64::INFINITY, f64::min)
    }

    /// Open gaps between consecutive intervals.
    pub fn gaps(&self) -> Vec<Interval> {
        self.intervals.windows(2).map(|w| Interval::new(w[0].hi, w[1].lo.max(w[0].hi))).collect()
    }

    pub fn image<M: PiecewiseMap + ?Sized>(&self, map: &M) -> IntervalUnion {
        Self::merged(self.intervals.iter().map(|iv| iv.image(map)).collect())
    }

    pub fn map_points<F: Fn(f64) -> f64>(&self, h: F) -> IntervalUnion {
        Self::from_sorted(self.intervals.iter().map(|iv| Interval::hull(h(iv.lo), h(iv.hi))).collect())
    }

    /// Hausdorff distance between the two sets.
    pub fn hausdorff(&self, other: &IntervalUnion) -> f64 {
        directed_hausdorff(self, other).max(directed_hausdorff(other, self))
    }
}

/// `sup_{x in a} dist(x, b)`. On each interval of `a` the distance to `b` is
/// piecewise linear with maxima at the endpoints or at midpoints of gaps of `b`.
fn directed_hausdorff(a: &IntervalUnion, b: &IntervalUnion) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    if b.is_empty() {
        return f64::INFINITY;
    }
    let gap_mids: Vec<f64> = b.gaps().iter().map(Interval::midpoint).collect();
    let mut worst: f64 = 0.0;
    for iv in a.intervals() {
        worst = worst.max(b.distance(iv.lo)).max(b.distance(iv.hi));
        for &m in gap_mids.iter().filter(|&&m| iv.contains(m)) {
            worst = worst.max(b.distance(m));
        }
    }
    worst
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.intervals.iter().map(Interval::to_string).collect();
        f.write_str(&parts.join(" u "))
    }
}
