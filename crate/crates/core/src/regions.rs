//! Parameter-plane atlas.
//!
//! For `k > 1` the `r` axis splits at `1/k < k/(k^2-1) < 1/(k-1) < k/(k-1)`:
//! a stable two-cycle below `1/k`, the band-merging cascade `S_1` up to
//! `k/(k^2-1)`, chaos on `[1-k, 1]`, the period windows `T_m` between
//! `1/(k-1)` and `1` (only when `k > 2`), chaos again up to `k/(k-1)`, and escape
//! above. `k < 1` has an attracting fixed point.
//!
//! Inside `S_1` the depth of the cascade is read off the signs of the polynomials
//! `t_p(k, r)`; inside `T_m` the subregion comes from `k r^m - 1`,
//! `r^m k^2 - k - r` and `r^(2m) k^3 - k - r`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::MapParams;
use crate::roots::{bisect, bisect_sign};

pub const DEFAULT_TAU: f64 = 1e-12;
pub const DEFAULT_P_MAX: usize = 40;

/// `t_p` is evaluated through logarithms from this depth on.
pub const LOG_DOMAIN_DEPTH: usize = 8;

const OVERFLOW_LIMIT: f64 = 1e300;

/// Window indices beyond this are treated as overflow.
const MAX_WINDOW_INDEX: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    /// Relative distance to a defining equality below which a point is reported as boundary.
    pub tau: f64,
    /// Deepest cascade level examined.
    pub p_max: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self { tau: DEFAULT_TAU, p_max: DEFAULT_P_MAX }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WindowSub {
    R1,
    R2,
    R3,
    R4,
}

impl fmt::Display for WindowSub {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            WindowSub::R1 => "R1",
            WindowSub::R2 => "R2",
            WindowSub::R3 => "R3",
            WindowSub::R4 => "R4",
        };
        f.write_str(s)
    }
}

/// The defining equality a boundary point sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "curve")]
pub enum BoundaryKind {
    /// `k = 1`
    KEqualsOne,
    /// `r = 1/k`
    TwoCycleEdge,
    /// `r = k/(k^2-1)`, the closure of `S_1`
    CascadeEdge,
    /// `r = rho_p(k)`, separating `S_p` from `S_(p+1)`
    CascadeDepth { p: usize },
    /// `r = 1/(k-1)`, i.e. `k = 1 + 1/r`
    WindowEdge,
    /// `r = 1` with `k >= 2`
    UnitSlope,
    /// `r = k/(k-1)`
    EscapeEdge,
    /// `k = K_m(r)`
    WindowWall { m: usize },
    /// `k r^m = 1`
    PeriodicEdge { m: usize },
    /// `k = L_m(r)`
    ChaosEdge { m: usize },
    /// `k = N_m(r)`
    BandSplitEdge { m: usize },
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryKind::KEqualsOne => write!(f, "k=1"),
            BoundaryKind::TwoCycleEdge => write!(f, "r=1/k"),
            BoundaryKind::CascadeEdge => write!(f, "r=k/(k^2-1)"),
            BoundaryKind::CascadeDepth { p } => write!(f, "r=rho_{p}(k)"),
            BoundaryKind::WindowEdge => write!(f, "r=1/(k-1)"),
            BoundaryKind::UnitSlope => write!(f, "r=1"),
            BoundaryKind::EscapeEdge => write!(f, "r=k/(k-1)"),
            BoundaryKind::WindowWall { m } => write!(f, "k=K_{m}(r)"),
            BoundaryKind::PeriodicEdge { m } => write!(f, "k=1/r^{m}"),
            BoundaryKind::ChaosEdge { m } => write!(f, "k=L_{m}(r)"),
            BoundaryKind::BandSplitEdge { m } => write!(f, "k=N_{m}(r)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum RegionTag {
    Trivial,
    FixedPoint,
    TwoCycle,
    FullIntervalChaos,
    EscapeCantor,
    /// `(k, r)` in `int(S_p) \ S_(p+1)`; `terminal = false` means the depth cap was hit.
    Cascade { p: usize, terminal: bool },
    Window { m: usize, sub: WindowSub },
    Boundary { which: BoundaryKind },
}

impl RegionTag {
    pub fn name(&self) -> &'static str {
        match self {
            RegionTag::Trivial => "Trivial",
            RegionTag::FixedPoint => "FixedPoint",
            RegionTag::TwoCycle => "TwoCycle",
            RegionTag::FullIntervalChaos => "FullIntervalChaos",
            RegionTag::EscapeCantor => "EscapeCantor",
            RegionTag::Cascade { .. } => "Cascade",
            RegionTag::Window { .. } => "Window",
            RegionTag::Boundary { .. } => "Boundary",
        }
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self, RegionTag::Boundary { .. })
    }
}

impl fmt::Display for RegionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionTag::Cascade { p, terminal: true } => write!(f, "Cascade p={p}"),
            RegionTag::Cascade { p, terminal: false } => write!(f, "Cascade p>={p}"),
            RegionTag::Window { m, sub } => write!(f, "Window m={m} sub={sub}"),
            RegionTag::Boundary { which } => write!(f, "Boundary {which}"),
            other => f.write_str(other.name()),
        }
    }
}

#[inline]
fn near(x: f64, target: f64, tau: f64) -> bool {
    (x - target).abs() <= tau * target.abs().max(f64::MIN_POSITIVE)
}

/// `chi(p) = (2^(p+1) + 2(-1)^(p+1)) / 3`; always even.
pub fn chi(p: usize) -> u64 {
    assert!(p < 62, "chi({p}) does not fit in u64");
    let pow = 1u64 << (p + 1);
    if p % 2 == 0 {
        (pow - 2) / 3
    } else {
        (pow + 2) / 3
    }
}

/// Exponents `(e_r, e_k)` of the leading monomial `r^e_r k^e_k` of `t_p`.
fn t_exponents(p: usize) -> (f64, f64) {
    let c = chi(p) as f64;
    if p % 2 == 1 {
        (c, 2.0 * c - 1.0)
    } else {
        (c + 1.0, 2.0 * c + 2.0)
    }
}

/// `t_p(k, r) / (k + r)`, which carries the sign of `t_p` and never overflows.
///
/// Below [`LOG_DOMAIN_DEPTH`] the monomial is formed with integer powers; from there
/// on the comparison is done as `expm1(e_r ln r + e_k ln k - ln(k + r))`.
pub fn t_relative(p: usize, k: f64, r: f64) -> f64 {
    let (er, ek) = t_exponents(p);
    if p < LOG_DOMAIN_DEPTH {
        let lead = r.powi(er as i32) * k.powi(ek as i32);
        lead / (k + r) - 1.0
    } else {
        let log_lead = er * r.ln() + ek * k.ln();
        (log_lead - (k + r).ln()).exp_m1()
    }
}

/// The cascade polynomial
///
/// ```text
/// t_p(k, r) = r^chi k^(2chi-1) - k - r        (p odd)
///             r^(chi+1) k^(2chi+2) - k - r    (p even)
/// ```
/// whose sign equals that of `r_p k_p^2 - k_p - r_p`.
pub fn t_poly(p: usize, k: f64, r: f64) -> Result<f64> {
    let (er, ek) = t_exponents(p);
    let value = if p < LOG_DOMAIN_DEPTH {
        r.powi(er as i32) * k.powi(ek as i32) - k - r
    } else {
        let log_lead = er * r.ln() + ek * k.ln();
        if log_lead > OVERFLOW_LIMIT.ln() {
            return Err(Error::DepthOverflow { p });
        }
        (k + r) * t_relative(p, k, r)
    };
    if !value.is_finite() || value.abs() > OVERFLOW_LIMIT {
        return Err(Error::DepthOverflow { p });
    }
    Ok(value)
}

pub fn t_sign(p: usize, k: f64, r: f64) -> Ordering {
    t_relative(p, k, r).partial_cmp(&0.0).unwrap_or(Ordering::Equal)
}

/// Renormalized slopes at one level of the cascade.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RenormState {
    pub p: usize,
    pub r_p: f64,
    pub k_p: f64,
    pub chi_p: u64,
}

impl RenormState {
    /// `r_p k_p^2 - k_p - r_p`
    pub fn discriminant(&self) -> f64 {
        self.r_p * self.k_p * self.k_p - self.k_p - self.r_p
    }
}

/// `r_(p+1) = k_p^2`, `k_(p+1) = r_p k_p`, starting from `(r, k)`.
pub fn renorm_sequence(params: &MapParams, depth: usize) -> Result<Vec<RenormState>> {
    let mut out = Vec::with_capacity(depth + 1);
    let (mut r_p, mut k_p) = (params.r(), params.k());
    for p in 0..=depth {
        if !(r_p.is_finite() && k_p.is_finite()) || r_p > OVERFLOW_LIMIT || k_p > OVERFLOW_LIMIT {
            return Err(Error::DepthOverflow { p });
        }
        out.push(RenormState { p, r_p, k_p, chi_p: chi(p) });
        let next = (k_p * k_p, r_p * k_p);
        r_p = next.0;
        k_p = next.1;
    }
    Ok(out)
}

/// Closed form `(r_p, k_p)` of the renormalization recurrence.
pub fn renorm_closed_form(params: &MapParams, p: usize) -> (f64, f64) {
    let c = chi(p) as f64;
    let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
    let (k, r) = (params.k(), params.r());
    let k_p = r.powf(c / 2.0) * k.powf(c + sign);
    let r_p = r.powf(c / 2.0 + sign) * k.powf(c);
    (r_p, k_p)
}

/// `rho_p(k)`: the unique positive `r` with `t_p(k, r) = 0`.
///
/// `t_p(k, r)` has the sign of `r - rho_p(k)`.
pub fn rho(p: usize, k: f64) -> Result<f64> {
    match p {
        0 => {
            if !(k > 1.0) || !k.is_finite() {
                return Err(Error::OutOfDomain(format!("rho_0 needs k > 1, got {k}")));
            }
            Ok(k / (k * k - 1.0))
        }
        _ if !(k >= 1.0) || !k.is_finite() => Err(Error::OutOfDomain(format!("rho_{p} needs k >= 1, got {k}"))),
        1 => Ok((1.0 + (1.0 + 4.0 * k.powi(4)).sqrt()) / (2.0 * k.powi(3))),
        2 => {
            // Cardano on r^3 - r/k^6 - 1/k^5 = 0
            let eps = 4.0 / (27.0 * k.powi(8));
            let root = (1.0 - eps).sqrt();
            let denom = 2.0 * k.powi(5);
            let plus = (1.0 + root) / denom;
            let minus = eps / (1.0 + root) / denom;
            Ok(plus.cbrt() + minus.cbrt())
        }
        _ => {
            let mut hi = 2.0;
            while t_sign(p, k, hi) != Ordering::Greater {
                hi *= 2.0;
                if hi > OVERFLOW_LIMIT {
                    return Err(Error::DepthOverflow { p });
                }
            }
            bisect_sign(0.0, hi, |r| t_sign(p, k, r))
        }
    }
}

/// `K_p` for `p >= 2`: the root of `t_p(k, 1/k)` in `(1, 2)`.
pub fn k_threshold(p: usize) -> Result<f64> {
    if p < 2 {
        return Err(Error::OutOfDomain(format!("K_p is defined for p >= 2, got {p}")));
    }
    bisect_sign(1.0, 2.0, |k| t_sign(p, k, 1.0 / k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CascadeDepth {
    pub p: usize,
    pub terminal: bool,
}

fn in_s1(k: f64, r: f64) -> bool {
    k > 1.0 && r > 1.0 / k && r <= k / (k * k - 1.0)
}

/// Smallest `p >= 1` with `t_p(k, r) > 0`, i.e. the `p` with `(k, r)` in
/// `int(S_p) \ S_(p+1)`, or `p_max` with `terminal = false`.
pub fn cascade_depth(params: &MapParams, p_max: usize) -> Result<CascadeDepth> {
    let (k, r) = (params.k(), params.r());
    if !in_s1(k, r) {
        return Err(Error::OutOfDomain(format!("(k={k}, r={r}) is not in S_1")));
    }
    for p in 1..=p_max {
        if t_relative(p, k, r) > 0.0 {
            return Ok(CascadeDepth { p, terminal: true });
        }
    }
    Ok(CascadeDepth { p: p_max, terminal: false })
}

/// `K_m(r) = 1 + 1/r + ... + 1/r^(m-1)`
pub fn window_wall(m: usize, r: f64) -> f64 {
    (0..m).fold(0.0, |acc, _| 1.0 + acc / r)
}

/// `L_m(r)`: `r^m k^2 - k - r` has the sign of `k - L_m(r)`.
pub fn l_curve(m: usize, r: f64) -> f64 {
    let rm = r.powi(m as i32);
    (1.0 + (1.0 + 4.0 * rm * r).sqrt()) / (2.0 * rm)
}

/// `N_m(r)`: the zero of `r^(2m) k^3 - k - r` on `(1/r^m, L_m(r))`.
pub fn n_curve(m: usize, r: f64) -> Result<f64> {
    let rm = r.powi(m as i32);
    let r2m = rm * rm;
    bisect(1.0 / rm, l_curve(m, r), |k| r2m * k * k * k - k - r)
}

/// `1 - 2r + r^(m+1)`; positive below `alpha_m`.
pub fn p_alpha(m: usize, r: f64) -> f64 {
    1.0 - 2.0 * r + r.powi(m as i32 + 1)
}

fn geometric_sum(r: f64, terms: usize) -> f64 {
    (0..terms).fold(0.0, |acc, _| acc * r + 1.0)
}

/// `r (1 + ... + r^(m-1))^2 - (1 + ... + r^m)`; same sign as `r - beta_m`.
pub fn p_beta(m: usize, r: f64) -> f64 {
    let s = geometric_sum(r, m);
    r * s * s - geometric_sum(r, m + 1)
}

/// `r^2 (1 + ... + r^(m-1))^3 - (1 + ... + r^m)`; same sign as `r - gamma_m`.
pub fn q_gamma(m: usize, r: f64) -> f64 {
    let s = geometric_sum(r, m);
    r * r * s * s * s - geometric_sum(r, m + 1)
}

fn check_m(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::OutOfDomain(format!("window index must be >= 2, got {m}")));
    }
    Ok(())
}

/// `r` at which `K_m(r) = 1/r^m`.
pub fn alpha_m(m: usize) -> Result<f64> {
    check_m(m)?;
    let hi = (2.0 / (m as f64 + 1.0)).powf(1.0 / m as f64);
    bisect(0.5, hi, |r| p_alpha(m, r))
}

/// `r` at which `K_m(r) = L_m(r)`.
pub fn beta_m(m: usize) -> Result<f64> {
    check_m(m)?;
    bisect(0.0, 1.0, |r| p_beta(m, r))
}

/// `r` at which `K_m(r) = N_m(r)`.
pub fn gamma_m(m: usize) -> Result<f64> {
    check_m(m)?;
    bisect(0.0, 1.0, |r| q_gamma(m, r))
}

/// All curves bounding the window `T_m` and its four subregions at a given `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowGeometry {
    pub m: usize,
    pub r: f64,
    pub k_m: f64,
    pub k_m1: f64,
    pub inv_rm: f64,
    pub n_m: f64,
    pub l_m: f64,
    pub alpha_m: f64,
    pub beta_m: f64,
    pub gamma_m: f64,
}

pub fn window_geometry(m: usize, r: f64) -> Result<WindowGeometry> {
    check_m(m)?;
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::OutOfDomain(format!("window geometry needs 0 < r < 1, got {r}")));
    }
    Ok(WindowGeometry {
        m,
        r,
        k_m: window_wall(m, r),
        k_m1: window_wall(m + 1, r),
        inv_rm: r.powi(-(m as i32)),
        n_m: n_curve(m, r)?,
        l_m: l_curve(m, r),
        alpha_m: alpha_m(m)?,
        beta_m: beta_m(m)?,
        gamma_m: gamma_m(m)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowIndex {
    Inside(usize),
    /// Within tolerance of the wall `k = K_m(r)`.
    Wall(usize),
    NotInWindow,
}

/// The `m >= 2` with `K_m(r) < k < K_(m+1)(r)`.
pub fn window_index(k: f64, r: f64, tau: f64) -> Result<WindowIndex> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::OutOfDomain(format!("window index needs 0 < r < 1, got {r}")));
    }
    let mut wall = 1.0 + 1.0 / r;
    if near(k, wall, tau) {
        return Ok(WindowIndex::Wall(2));
    }
    if k < wall {
        return Ok(WindowIndex::NotInWindow);
    }
    for m in 2..MAX_WINDOW_INDEX {
        let next = 1.0 + wall / r;
        if near(k, next, tau) {
            return Ok(WindowIndex::Wall(m + 1));
        }
        if k < next {
            return Ok(WindowIndex::Inside(m));
        }
        wall = next;
    }
    Err(Error::DepthOverflow { p: MAX_WINDOW_INDEX })
}

/// Subregion of `T_m` (or the boundary between two of them).
pub fn window_subregion(k: f64, r: f64, m: usize, tau: f64) -> RegionTag {
    let rm = r.powi(m as i32);
    let krm = k * rm;
    let scale = k + r;
    let disc_l = rm * k * k - k - r;
    let disc_n = rm * rm * k * k * k - k - r;
    if (krm - 1.0).abs() <= tau {
        return RegionTag::Boundary { which: BoundaryKind::PeriodicEdge { m } };
    }
    if krm < 1.0 {
        return RegionTag::Window { m, sub: WindowSub::R1 };
    }
    if disc_l.abs() <= tau * scale {
        return RegionTag::Boundary { which: BoundaryKind::ChaosEdge { m } };
    }
    if disc_l > 0.0 {
        return RegionTag::Window { m, sub: WindowSub::R4 };
    }
    if disc_n.abs() <= tau * scale {
        return RegionTag::Boundary { which: BoundaryKind::BandSplitEdge { m } };
    }
    let sub = if disc_n > 0.0 { WindowSub::R2 } else { WindowSub::R3 };
    RegionTag::Window { m, sub }
}

/// Assign `(k, r)` to exactly one region, or to the boundary it lies on.
pub fn classify(params: &MapParams, opts: &ClassifyOptions) -> RegionTag {
    let (k, r) = (params.k(), params.r());
    let tau = opts.tau;
    let boundary = |which| RegionTag::Boundary { which };

    if (k - 1.0).abs() <= tau {
        return boundary(BoundaryKind::KEqualsOne);
    }
    if k < 1.0 {
        return RegionTag::FixedPoint;
    }

    let two_cycle_edge = 1.0 / k;
    let cascade_edge = k / (k * k - 1.0);
    let escape_edge = k / (k - 1.0);
    let window_edge = 1.0 / (k - 1.0);

    if near(r, two_cycle_edge, tau) {
        return boundary(BoundaryKind::TwoCycleEdge);
    }
    if near(r, cascade_edge, tau) {
        return boundary(BoundaryKind::CascadeEdge);
    }
    if near(r, escape_edge, tau) {
        return boundary(BoundaryKind::EscapeEdge);
    }
    // 1/(k-1) and r = 1 only separate regions once the windows exist (k >= 2).
    let windows_exist = k > 2.0 || near(k, 2.0, tau);
    if windows_exist && near(r, window_edge, tau) {
        return boundary(BoundaryKind::WindowEdge);
    }
    if windows_exist && near(r, 1.0, tau) {
        return boundary(BoundaryKind::UnitSlope);
    }

    if r < two_cycle_edge {
        return RegionTag::TwoCycle;
    }
    if r < cascade_edge {
        return classify_cascade(k, r, opts);
    }
    if windows_exist && r > window_edge && r < 1.0 {
        return match window_index(k, r, tau) {
            Ok(WindowIndex::Inside(m)) => window_subregion(k, r, m, tau),
            Ok(WindowIndex::Wall(2)) => boundary(BoundaryKind::WindowEdge),
            Ok(WindowIndex::Wall(m)) => boundary(BoundaryKind::WindowWall { m }),
            // r > 1/(k-1) already puts k above K_2(r); only a tolerance edge reaches here
            Ok(WindowIndex::NotInWindow) => boundary(BoundaryKind::WindowEdge),
            Err(_) => boundary(BoundaryKind::WindowWall { m: MAX_WINDOW_INDEX }),
        };
    }
    if r < escape_edge {
        return RegionTag::FullIntervalChaos;
    }
    RegionTag::EscapeCantor
}

fn classify_cascade(k: f64, r: f64, opts: &ClassifyOptions) -> RegionTag {
    for p in 1..=opts.p_max {
        let t = t_relative(p, k, r);
        if t.abs() <= opts.tau {
            return RegionTag::Boundary { which: BoundaryKind::CascadeDepth { p } };
        }
        if t > 0.0 {
            return RegionTag::Cascade { p, terminal: true };
        }
    }
    RegionTag::Cascade { p: opts.p_max, terminal: false }
}

/// Convenience wrapper taking raw slopes.
pub fn classify_kr(k: f64, r: f64, opts: &ClassifyOptions) -> Result<RegionTag> {
    Ok(classify(&MapParams::new(k, r)?, opts))
}
