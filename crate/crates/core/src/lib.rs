//! Skew tent maps `f(x) = 1 + r x` for `x <= 0`, `1 - k x` for `x >= 0`.
//!
//! The crate classifies the parameter plane `(k, r)`, builds attractors in closed
//! form, encodes the Cantor repellers with symbolic dynamics and checks all of it
//! numerically.
//!
//! ```
//! use skewtent::{classify, ClassifyOptions, MapParams, RegionTag, WindowSub};
//!
//! let p = MapParams::new(3.5, 0.5).unwrap();
//! let tag = classify(&p, &ClassifyOptions::default());
//! assert_eq!(tag, RegionTag::Window { m: 2, sub: WindowSub::R1 });
//! ```

pub mod attractors;
pub mod error;
pub mod interval;
pub mod map;
pub mod regions;
pub mod roots;
pub mod symbolic;
pub mod verify;

pub use attractors::{attractor, Attractor, AttractorKind, PeriodicOrbit};
pub use error::{Error, Result};
pub use interval::{Interval, IntervalUnion};
pub use map::{Branch, GeneralTent, Landing, MapParams, NormalizeResult, Orbit, UnitMap};
pub use regions::{classify, BoundaryKind, ClassifyOptions, RegionTag, WindowSub};
pub use symbolic::{CantorKind, CantorSystem, Itinerary, Word};
