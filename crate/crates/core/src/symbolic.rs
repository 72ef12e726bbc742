//! Cantor repellers and their symbolic dynamics.
//!
//! Two systems are covered. In the escape region (`r > k/(k-1)`) the points that
//! never leave `[alpha, beta]` form a Cantor set coded by the full 2-shift. In a
//! window with `r^m k^2 - k - r < 0` the points of `[0, 1]` that never enter the
//! trap set `U` form a Cantor set coded by `Sigma_m`: sequences over `1..=m` in
//! which every symbol `s < m` is followed by `s + 1`.
//!
//! Membership is only decided up to a finite horizon: [`itinerary`] either returns
//! the first `n` symbols or reports the step at which the orbit left the partition.

use std::fmt;

use serde::Serialize;

use crate::attractors::window_periodic_orbits;
use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalUnion};
use crate::map::{MapParams, UnitMap};
use crate::regions::{classify, ClassifyOptions};

/// Slack used when testing whether an iterate lies in a partition interval.
pub const PARTITION_SLACK: f64 = 1e-12;
/// Endpoint agreement required by the covering relations.
pub const COVERING_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CantorKind {
    FullShift2,
    WindowShift { m: usize },
}

/// Coordinates in which a [`CantorSystem`] works, with the affine change back to
/// map coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Frame {
    /// `x = (r+k) u / (k(r-1)) - 1/(r-1)`, sending `[0, 1]` onto `[alpha, beta]`.
    EscapeConjugate { k: f64, r: f64 },
    /// `x = 1 - k + k u`.
    Unit { k: f64 },
}

impl Frame {
    pub fn to_map(&self, u: f64) -> f64 {
        match *self {
            Frame::EscapeConjugate { k, r } => (r + k) * u / (k * (r - 1.0)) - 1.0 / (r - 1.0),
            Frame::Unit { k } => 1.0 - k + k * u,
        }
    }

    pub fn from_map(&self, x: f64) -> f64 {
        match *self {
            Frame::EscapeConjugate { k, r } => (x + 1.0 / (r - 1.0)) * k * (r - 1.0) / (r + k),
            Frame::Unit { k } => (x - 1.0 + k) / k,
        }
    }
}

/// `x -> slope * x + offset`
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Affine {
    pub slope: f64,
    pub offset: f64,
}

impl Affine {
    pub fn apply(&self, x: f64) -> f64 {
        self.slope * x + self.offset
    }

    pub fn apply_interval(&self, iv: &Interval) -> Interval {
        Interval::hull(self.apply(iv.lo), self.apply(iv.hi))
    }
}

/// Two-branch map in the system's frame: `left` on `[0, kink]`, `right` on `[kink, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
struct FrameMap {
    kink: f64,
    left: Affine,
    right: Affine,
}

impl FrameMap {
    fn apply(&self, u: f64) -> f64 {
        if u <= self.kink {
            self.left.apply(u)
        } else {
            self.right.apply(u)
        }
    }
}

/// Finite word over the alphabet of a [`CantorSystem`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Word(pub Vec<u32>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(u32::to_string).collect();
        f.write_str(&s.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Itinerary {
    Word(Word),
    /// The iterate at this step lies outside every partition interval.
    Exited { step: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CantorSystem {
    pub kind: CantorKind,
    pub frame: Frame,
    /// Partition intervals in frame coordinates, ordered by symbol.
    pub partition: Vec<Interval>,
    /// Inverse of the map on each partition interval, ordered by symbol.
    pub inverses: Vec<Affine>,
    map: FrameMap,
}

impl CantorSystem {
    pub fn first_symbol(&self) -> u32 {
        match self.kind {
            CantorKind::FullShift2 => 0,
            CantorKind::WindowShift { .. } => 1,
        }
    }

    pub fn alphabet_size(&self) -> usize {
        self.partition.len()
    }

    fn index(&self, symbol: u32) -> Result<usize> {
        let first = self.first_symbol();
        let idx = symbol.checked_sub(first).map(|d| d as usize);
        match idx {
            Some(i) if i < self.partition.len() => Ok(i),
            _ => Err(Error::InvalidWord { symbol }),
        }
    }

    /// The map in frame coordinates.
    pub fn apply(&self, u: f64) -> f64 {
        self.map.apply(u)
    }

    pub fn to_map(&self, u: f64) -> f64 {
        self.frame.to_map(u)
    }

    pub fn from_map(&self, x: f64) -> f64 {
        self.frame.from_map(x)
    }

    pub fn hull_in_map_coords(&self) -> Interval {
        let lo = self.partition.first().map_or(0.0, |iv| iv.lo);
        let hi = self.partition.last().map_or(1.0, |iv| iv.hi);
        Interval::hull(self.to_map(lo), self.to_map(hi))
    }

    /// Partition index containing `u`, if any.
    pub fn symbol_at(&self, u: f64) -> Option<u32> {
        self.partition
            .iter()
            .position(|iv| iv.contains_with(u, PARTITION_SLACK))
            .map(|i| i as u32 + self.first_symbol())
    }
}

/// The repeller of the escape region, coded by the full 2-shift.
pub fn escape_cantor_system(params: &MapParams) -> Result<CantorSystem> {
    let (k, r) = (params.k(), params.r());
    if !(k > 1.0 && r > k / (k - 1.0)) {
        let found = classify(params, &ClassifyOptions::default()).to_string();
        return Err(Error::WrongRegion { expected: "EscapeCantor", found });
    }
    let a = k / (r + k);
    if !(r * a > 1.0) {
        return Err(Error::PrecisionLoss { what: "escape expansion r a > 1", defect: r * a - 1.0 });
    }
    Ok(CantorSystem {
        kind: CantorKind::FullShift2,
        frame: Frame::EscapeConjugate { k, r },
        partition: vec![Interval::new(0.0, 1.0 / r), Interval::new(1.0 - 1.0 / k, 1.0)],
        inverses: vec![Affine { slope: 1.0 / r, offset: 0.0 }, Affine { slope: -1.0 / k, offset: 1.0 }],
        map: FrameMap {
            kink: a,
            left: Affine { slope: r, offset: 0.0 },
            right: Affine { slope: -k, offset: k },
        },
    })
}

/// The repeller `S` of a window with `r^m k^2 - k - r < 0`, coded by `Sigma_m`.
pub fn window_cantor_system(params: &MapParams) -> Result<CantorSystem> {
    let orbits = window_periodic_orbits(params)?;
    let m = orbits.core.m;
    let g: UnitMap = orbits.core.unit;
    let (k, r) = (g.k(), g.r());
    let b = &orbits.b_orbit.points;

    let mut partition = Vec::with_capacity(m);
    for j in 0..m - 1 {
        partition.push(Interval::new(b[j], orbits.bhat[j]));
    }
    partition.push(Interval::new(b[m - 1], b[m]));

    let mut inverses = vec![Affine { slope: 1.0 / r, offset: -g.b / r }; m - 1];
    inverses.push(Affine { slope: -1.0 / k, offset: 1.0 });

    let disjoint = IntervalUnion::from_sorted(partition.clone()).min_gap();
    if disjoint <= 0.0 {
        return Err(Error::PrecisionLoss { what: "window partition disjointness", defect: disjoint });
    }
    for j in 0..m - 1 {
        let img = partition[j].image(&g);
        let defect = (img.lo - partition[j + 1].lo).abs().max((img.hi - partition[j + 1].hi).abs());
        if defect > COVERING_TOL {
            return Err(Error::PrecisionLoss { what: "window covering g(I_j) = I_(j+1)", defect });
        }
    }
    let last = partition[m - 1].image(&g);
    if !partition.iter().all(|iv| last.contains_interval(iv, COVERING_TOL)) {
        return Err(Error::PrecisionLoss { what: "window covering g(I_m)", defect: 0.0 });
    }
    let rm1 = r.powi(m as i32 - 1);
    let single = k * k * rm1;
    let double = k * k * rm1 * rm1;
    if !(single > 1.0 && double > 1.0) {
        return Err(Error::PrecisionLoss { what: "window expansion certificate", defect: double.min(single) - 1.0 });
    }

    Ok(CantorSystem {
        kind: CantorKind::WindowShift { m },
        frame: Frame::Unit { k },
        partition,
        inverses,
        map: FrameMap {
            kink: g.a,
            left: Affine { slope: r, offset: g.b },
            right: Affine { slope: -k, offset: k },
        },
    })
}

/// First `n` symbols of the orbit of `u` (frame coordinates), or the step at
/// which it left the partition.
pub fn itinerary(sys: &CantorSystem, u: f64, n: usize) -> Itinerary {
    let mut out = Vec::with_capacity(n);
    let mut x = u;
    for step in 0..n {
        match sys.symbol_at(x) {
            Some(s) => out.push(s),
            None => return Itinerary::Exited { step },
        }
        x = sys.apply(x);
    }
    Itinerary::Word(Word(out))
}

/// Whether `w` satisfies the shift's transition rule.
pub fn is_admissible(w: &Word, sys: &CantorSystem) -> Result<bool> {
    for &s in w.symbols() {
        sys.index(s)?;
    }
    Ok(match sys.kind {
        CantorKind::FullShift2 => true,
        CantorKind::WindowShift { m } => {
            let m = m as u32;
            w.symbols().windows(2).all(|p| p[0] == m || p[1] == p[0] + 1)
        }
    })
}

/// Every admissible word of length `len`, in lexicographic order.
pub fn admissible_words(sys: &CantorSystem, len: usize) -> Vec<Word> {
    let first = sys.first_symbol();
    let last = first + sys.alphabet_size() as u32 - 1;
    let mut words: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &words {
            for s in first..=last {
                let ok = match (sys.kind, w.last()) {
                    (CantorKind::WindowShift { m }, Some(&prev)) => prev == m as u32 || s == prev + 1,
                    _ => true,
                };
                if ok {
                    let mut v = w.clone();
                    v.push(s);
                    next.push(v);
                }
            }
        }
        words = next;
    }
    words.into_iter().map(Word).collect()
}

/// The cylinder of points whose first `|w|` symbols are `w`, in frame coordinates.
///
/// Built by pulling the last partition interval back through the branch inverses.
pub fn point_from_itinerary(sys: &CantorSystem, w: &Word) -> Result<Interval> {
    if w.is_empty() || !is_admissible(w, sys)? {
        return Err(Error::Inadmissible);
    }
    let syms = w.symbols();
    let mut cyl = sys.partition[sys.index(*syms.last().unwrap())?];
    for &s in syms[..syms.len() - 1].iter().rev() {
        let i = sys.index(s)?;
        let pulled = sys.inverses[i].apply_interval(&cyl);
        cyl = pulled.intersect(&sys.partition[i]).ok_or(Error::Inadmissible)?;
    }
    Ok(cyl)
}
