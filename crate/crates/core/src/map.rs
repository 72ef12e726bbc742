//! The canonical skew tent map
//!
//! ```text
//! f(x) = 1 + r x   (x <= 0)
//!        1 - k x   (x >= 0)
//! ```
//!
//! together with the reduction of a general two-branch tent map to this form,
//! the trapping interval `[alpha, beta]`, and the conjugate `g` of `f` restricted
//! to `[1-k, 1]` and rescaled to `[0, 1]`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Orbits are abandoned once an iterate exceeds this magnitude.
pub const ESCAPE_THRESHOLD: f64 = 1e12;

/// Default number of steps for horizon-limited questions.
pub const DEFAULT_HORIZON: usize = 10_000;

/// Which linear piece of the map was used for one step.
///
/// The kink itself (x = 0, or x = a in unit coordinates) is assigned to the left branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    Left,
    Right,
}

impl Branch {
    pub fn letter(self) -> char {
        match self {
            Branch::Left => 'L',
            Branch::Right => 'R',
        }
    }
}

/// Slope pair `(k, r)` of the canonical map. Both are finite and positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MapParams {
    k: f64,
    r: f64,
}

impl MapParams {
    pub fn new(k: f64, r: f64) -> Result<Self> {
        if !k.is_finite() || !r.is_finite() {
            return Err(Error::InvalidMap(format!("non-finite slopes k={k}, r={r}")));
        }
        if k <= 0.0 || r <= 0.0 {
            return Err(Error::InvalidMap(format!("slopes must be positive, got k={k}, r={r}")));
        }
        Ok(Self { k, r })
    }

    #[inline]
    pub fn k(&self) -> f64 {
        self.k
    }

    #[inline]
    pub fn r(&self) -> f64 {
        self.r
    }

    #[inline]
    pub fn branch(&self, x: f64) -> Branch {
        if x <= 0.0 {
            Branch::Left
        } else {
            Branch::Right
        }
    }

    /// Signed slope of the branch used at `x`.
    #[inline]
    pub fn slope(&self, x: f64) -> f64 {
        match self.branch(x) {
            Branch::Left => self.r,
            Branch::Right => -self.k,
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match self.branch(x) {
            Branch::Left => 1.0 + self.r * x,
            Branch::Right => 1.0 - self.k * x,
        }
    }

    /// `n` steps from `x0`, stopping early once `|x| > ESCAPE_THRESHOLD`.
    pub fn iterate(&self, x0: f64, n: usize) -> Orbit {
        let mut points = Vec::with_capacity(n + 1);
        let mut branches = Vec::with_capacity(n);
        let mut x = x0;
        points.push(x);
        let mut escaped = x.abs() > ESCAPE_THRESHOLD;
        for _ in 0..n {
            if escaped {
                break;
            }
            branches.push(self.branch(x));
            x = self.eval(x);
            points.push(x);
            escaped = x.abs() > ESCAPE_THRESHOLD;
        }
        Orbit { x0, points, branches, escaped }
    }

    /// `[1-k, 1]`, the interval every bounded orbit eventually enters.
    pub fn core_interval(&self) -> (f64, f64) {
        (1.0 - self.k, 1.0)
    }

    pub fn trapping_interval(&self) -> TrappingInterval {
        let (k, r) = (self.k, self.r);
        if r > 1.0 {
            TrappingInterval {
                alpha: -1.0 / (r - 1.0),
                beta: r / (k * (r - 1.0)),
            }
        } else {
            TrappingInterval { alpha: f64::NEG_INFINITY, beta: f64::INFINITY }
        }
    }

    /// First `n <= horizon` with `f^n(x)` in `[1-k, 1]`.
    ///
    /// When `r > 1` an iterate outside `[alpha, beta]` is reported as escaped, since
    /// from there the orbit diverges monotonically to minus infinity.
    pub fn landing_time(&self, x: f64, horizon: usize) -> Landing {
        let trap = self.trapping_interval();
        let (lo, hi) = self.core_interval();
        let mut y = x;
        for n in 0..=horizon {
            if y < -ESCAPE_THRESHOLD || (self.r > 1.0 && !trap.contains(y)) {
                return Landing::Escaped;
            }
            if (lo..=hi).contains(&y) {
                return Landing::Landed(n);
            }
            y = self.eval(y);
        }
        Landing::Undecided
    }

    /// True when `[1-k, 1]` is mapped onto itself and the unit conjugate exists.
    pub fn is_reducible(&self) -> bool {
        self.k > 1.0 && self.r <= self.k / (self.k - 1.0)
    }

    pub fn to_unit(&self) -> Result<UnitMap> {
        if !self.is_reducible() {
            return Err(Error::NotReducible { k: self.k, r: self.r });
        }
        let a = 1.0 - 1.0 / self.k;
        let b = 1.0 - self.r * a;
        Ok(UnitMap { a, b, params: *self })
    }
}

/// Outcome of [`MapParams::landing_time`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Landing {
    Landed(usize),
    Escaped,
    Undecided,
}

/// `[alpha, beta]` for `r > 1`; the whole line otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrappingInterval {
    pub alpha: f64,
    pub beta: f64,
}

impl TrappingInterval {
    pub fn is_bounded(&self) -> bool {
        self.alpha.is_finite() && self.beta.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.alpha <= x && x <= self.beta
    }
}

/// A finite orbit with the branch used at every step.
///
/// `branches[i]` is the branch applied to `points[i]` to produce `points[i + 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub x0: f64,
    pub points: Vec<f64>,
    pub branches: Vec<Branch>,
    /// The orbit stopped early because an iterate left the escape threshold.
    pub escaped: bool,
}

impl Orbit {
    pub fn last(&self) -> f64 {
        *self.points.last().expect("orbit always holds its seed")
    }
}

/// The conjugate `g = h^-1 o f o h` on `[0, 1]`, with `h(x) = 1 - k + k x`:
///
/// ```text
/// g(x) = b + r x    (0 <= x <= a)
///        k (1 - x)  (a <= x <= 1)
/// ```
/// where `a = 1 - 1/k` and `b = 1 - r a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitMap {
    pub a: f64,
    pub b: f64,
    pub params: MapParams,
}

impl UnitMap {
    #[inline]
    pub fn k(&self) -> f64 {
        self.params.k
    }

    #[inline]
    pub fn r(&self) -> f64 {
        self.params.r
    }

    #[inline]
    pub fn branch(&self, x: f64) -> Branch {
        if x <= self.a {
            Branch::Left
        } else {
            Branch::Right
        }
    }

    #[inline]
    pub fn slope(&self, x: f64) -> f64 {
        match self.branch(x) {
            Branch::Left => self.r(),
            Branch::Right => -self.k(),
        }
    }

    /// Piecewise formula without the domain check.
    #[inline]
    pub fn apply(&self, x: f64) -> f64 {
        match self.branch(x) {
            Branch::Left => self.b + self.r() * x,
            Branch::Right => self.k() * (1.0 - x),
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        check_unit(x)?;
        Ok(self.apply(x))
    }

    /// `n`-fold composition without the domain check.
    pub fn apply_n(&self, x: f64, n: usize) -> f64 {
        (0..n).fold(x, |y, _| self.apply(y))
    }

    pub fn iterate(&self, x0: f64, n: usize) -> Result<Orbit> {
        check_unit(x0)?;
        let mut points = Vec::with_capacity(n + 1);
        let mut branches = Vec::with_capacity(n);
        let mut x = x0;
        points.push(x);
        for _ in 0..n {
            branches.push(self.branch(x));
            x = self.apply(x);
            points.push(x);
        }
        Ok(Orbit { x0, points, branches, escaped: false })
    }

    /// `h`: unit coordinates to map coordinates.
    #[inline]
    pub fn to_map(&self, u: f64) -> f64 {
        1.0 - self.k() + self.k() * u
    }

    /// `h^-1`: map coordinates to unit coordinates.
    #[inline]
    pub fn from_map(&self, x: f64) -> f64 {
        (x - 1.0 + self.k()) / self.k()
    }
}

fn check_unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::OutOfDomain(format!("unit map evaluated at {x}, outside [0, 1]")))
    }
}

/// A continuous map built from two non-parallel lines meeting at `(x0, y0)`:
/// slope `r` for `x <= x0` and slope `-k` for `x >= x0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneralTent {
    pub r: f64,
    pub k: f64,
    pub x0: f64,
    pub y0: f64,
}

/// Why a general tent map has trivial dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TrivialReason {
    /// The slopes have the same sign, so the map is a homeomorphism.
    Homeomorphism,
    /// The kink lies on or below the diagonal; orbits end up on a monotone branch.
    MonotoneTrap,
}

/// Affine change of coordinates `x = sign * (shift + scale * u)` from the canonical
/// coordinate `u` back to the original one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Conjugacy {
    pub flipped: bool,
    pub shift: f64,
    pub scale: f64,
}

impl Conjugacy {
    pub fn to_original(&self, u: f64) -> f64 {
        let x = self.shift + self.scale * u;
        if self.flipped {
            -x
        } else {
            x
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormalizeResult {
    Trivial(TrivialReason),
    Canonical { params: MapParams, conjugacy: Conjugacy },
}

impl GeneralTent {
    /// From the left slope, the right slope, and the kink.
    pub fn from_slopes(left_slope: f64, right_slope: f64, x0: f64, y0: f64) -> Self {
        Self { r: left_slope, k: -right_slope, x0, y0 }
    }

    /// From the lines `s + r x` and `t - k x` (given by slopes `r` and `-k`).
    pub fn from_lines(s: f64, left_slope: f64, t: f64, right_slope: f64) -> Result<Self> {
        let (r, k) = (left_slope, -right_slope);
        if r + k == 0.0 {
            return Err(Error::InvalidMap("parallel lines do not form a tent".into()));
        }
        let x0 = (t - s) / (r + k);
        Ok(Self { r, k, x0, y0: s + r * x0 })
    }

    pub fn s(&self) -> f64 {
        self.y0 - self.r * self.x0
    }

    pub fn t(&self) -> f64 {
        self.y0 + self.k * self.x0
    }

    pub fn gamma(&self) -> f64 {
        self.y0 - self.x0
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.x0 {
            self.s() + self.r * x
        } else {
            self.t() - self.k * x
        }
    }

    /// Reduce to the canonical `(k, r)` form, or report why the dynamics is trivial.
    ///
    /// Both-negative slopes are first flipped by `x -> -x`; the kink is then moved to
    /// the origin and the scale fixed by `gamma = y0 - x0`. Slopes are unchanged by
    /// the last two steps.
    pub fn normalize(&self) -> Result<NormalizeResult> {
        let GeneralTent { r, k, x0, y0 } = *self;
        if ![r, k, x0, y0].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidMap("non-finite tent data".into()));
        }
        if r == 0.0 || k == 0.0 {
            return Err(Error::InvalidMap("horizontal branch".into()));
        }
        if r + k == 0.0 {
            return Err(Error::InvalidMap("parallel lines do not form a tent".into()));
        }
        if r * k < 0.0 {
            return Ok(NormalizeResult::Trivial(TrivialReason::Homeomorphism));
        }
        let (flipped, r, k, x0, y0) = if r < 0.0 { (true, -k, -r, -x0, -y0) } else { (false, r, k, x0, y0) };
        let gamma = y0 - x0;
        if gamma <= 0.0 {
            return Ok(NormalizeResult::Trivial(TrivialReason::MonotoneTrap));
        }
        Ok(NormalizeResult::Canonical {
            params: MapParams::new(k, r)?,
            conjugacy: Conjugacy { flipped, shift: x0, scale: gamma },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(k: f64, r: f64) -> MapParams {
        MapParams::new(k, r).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(MapParams::new(f64::NAN, 1.0).is_err());
        assert!(MapParams::new(1.0, f64::INFINITY).is_err());
        assert!(MapParams::new(0.0, 1.0).is_err());
        assert!(MapParams::new(1.0, -2.0).is_err());
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p(3.0, 2.0).eval(0.0), 1.0);
        assert_eq!(p(3.0, 2.0).eval(-0.5), 0.0);
        assert_eq!(p(1.5, 1.0).eval(1.0), -0.5);
    }

    #[test]
    fn iterate_examples() {
        let o = p(1.5, 1.0).iterate(1.0, 2);
        assert_eq!(o.points, vec![1.0, -0.5, 0.5]);
        assert_eq!(o.branches, vec![Branch::Right, Branch::Left]);

        let o = p(3.0, 0.25).iterate(-8.0 / 7.0, 2);
        assert!((o.points[1] - 5.0 / 7.0).abs() < 1e-15);
        assert!((o.points[2] + 8.0 / 7.0).abs() < 1e-15);

        let o = p(2.0, 0.3).iterate(0.123, 0);
        assert_eq!(o.points, vec![0.123]);
        assert!(o.branches.is_empty());
    }

    #[test]
    fn iterate_stops_on_escape() {
        let o = p(3.0, 2.0).iterate(-2.0, 1000);
        assert!(o.escaped);
        assert!(o.points.len() < 1001);
        assert!(o.last().abs() > ESCAPE_THRESHOLD);
    }

    #[test]
    fn trapping_interval_examples() {
        let t = p(3.0, 2.0).trapping_interval();
        assert_eq!((t.alpha, t.beta), (-1.0, 2.0 / 3.0));
        let t = p(3.0, 1.0).trapping_interval();
        assert!(!t.is_bounded());
        assert_eq!(t.alpha, f64::NEG_INFINITY);
        let t = p(2.0, 3.0).trapping_interval();
        assert_eq!((t.alpha, t.beta), (-0.5, 0.75));
        let q = p(2.0, 3.0);
        assert!((q.eval(t.alpha) - t.alpha).abs() < 1e-12);
        assert!((q.eval(t.beta) - t.alpha).abs() < 1e-12);
    }

    #[test]
    fn landing_examples() {
        assert_eq!(p(3.0, 2.0).landing_time(0.7, 100), Landing::Escaped);
        assert_eq!(p(3.0, 0.25).landing_time(0.5, 100), Landing::Landed(0));
        match p(1.5, 1.0).landing_time(-10.0, 100) {
            Landing::Landed(n) => assert_eq!(n, 10),
            other => panic!("{other:?}"),
        }
        assert_eq!(p(1.5, 1.0).landing_time(-10.0, 3), Landing::Undecided);
    }

    #[test]
    fn unit_map_examples() {
        let u = p(3.5, 0.5).to_unit().unwrap();
        assert!((u.a - 5.0 / 7.0).abs() < 1e-15);
        assert!((u.b - 9.0 / 14.0).abs() < 1e-15);
        assert!((u.eval(1.0 / 15.0).unwrap() - 71.0 / 105.0).abs() < 1e-15);
        assert_eq!(u.eval(u.a).unwrap(), 1.0);
        assert_eq!(u.eval(1.0).unwrap(), 0.0);
        assert!(matches!(u.eval(1.5), Err(Error::OutOfDomain(_))));
        assert!(u.iterate(-0.1, 3).is_err());

        let u = p(2.0, 1.0).to_unit().unwrap();
        assert_eq!((u.a, u.b), (0.5, 0.5));

        assert!(matches!(p(1.5, 4.0).to_unit(), Err(Error::NotReducible { .. })));
        assert!(p(0.5, 1.0).to_unit().is_err());
    }

    #[test]
    fn normalize_examples() {
        let gt = GeneralTent::from_slopes(2.0, -3.0, 0.0, 1.0);
        match gt.normalize().unwrap() {
            NormalizeResult::Canonical { params, .. } => assert_eq!((params.k(), params.r()), (3.0, 2.0)),
            other => panic!("{other:?}"),
        }
        let gt = GeneralTent::from_slopes(2.0, -3.0, 1.0, 3.0);
        match gt.normalize().unwrap() {
            NormalizeResult::Canonical { params, conjugacy } => {
                assert_eq!((params.k(), params.r()), (3.0, 2.0));
                assert_eq!(conjugacy.scale, 2.0);
            }
            other => panic!("{other:?}"),
        }
        let gt = GeneralTent::from_slopes(2.0, -3.0, 1.0, 1.0);
        assert_eq!(gt.normalize().unwrap(), NormalizeResult::Trivial(TrivialReason::MonotoneTrap));
        let gt = GeneralTent::from_slopes(2.0, 3.0, 0.0, 1.0);
        assert_eq!(gt.normalize().unwrap(), NormalizeResult::Trivial(TrivialReason::Homeomorphism));
    }

    #[test]
    fn normalize_errors() {
        assert!(GeneralTent::from_slopes(0.0, -3.0, 0.0, 1.0).normalize().is_err());
        assert!(GeneralTent::from_slopes(2.0, 0.0, 0.0, 1.0).normalize().is_err());
        assert!(GeneralTent::from_slopes(2.0, 2.0, 0.0, 1.0).normalize().is_err());
        assert!(GeneralTent::from_lines(0.0, 1.5, 4.0, 1.5).is_err());
    }

    #[test]
    fn flipped_tent_is_conjugate() {
        // V-shaped map: slope -2 on the left, +3 on the right, kink at (0.5, -1)
        let gt = GeneralTent::from_slopes(-2.0, 3.0, 0.5, -1.0);
        let NormalizeResult::Canonical { params, conjugacy } = gt.normalize().unwrap() else {
            panic!("expected canonical form");
        };
        assert!(conjugacy.flipped);
        assert_eq!((params.k(), params.r()), (2.0, 3.0));
        for i in 0..50 {
            let u = -2.0 + 0.08 * i as f64;
            let lhs = gt.eval(conjugacy.to_original(u));
            let rhs = conjugacy.to_original(params.eval(u));
            assert!((lhs - rhs).abs() < 1e-12, "u={u}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn from_lines_recovers_kink() {
        let gt = GeneralTent::from_lines(1.0, 2.0, 4.0, -1.0).unwrap();
        assert!((gt.x0 - 1.0).abs() < 1e-15);
        assert!((gt.y0 - 3.0).abs() < 1e-15);
        assert!((gt.s() + gt.r * gt.x0 - (gt.t() - gt.k * gt.x0)).abs() <= 1e-12 * gt.y0.abs());
    }
}
