//! Parameter-plane rasters.
//!
//! Pixel `(i, j)` (column `i` from the left, row `j` from the top) is classified at
//! its center `k = kmin + (i + 1/2)(kmax - kmin)/width`,
//! `r = rmax - (j + 1/2)(rmax - rmin)/height`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use skewtent::regions::{classify, BoundaryKind, ClassifyOptions, RegionTag, WindowSub};
use skewtent::MapParams;

use crate::{CliError, CliResult, RasterFormat, EXIT_OK};

pub const PALETTE_VERSION: &str = "v1";
pub const THREADS_ENV: &str = "SKEWTENT_THREADS";

pub const PALETTE_HELP: &str = "\
Palette v1 (also written to <out>.legend.txt):
  FixedPoint         160 160 160
  TwoCycle             0 170   0
  FullIntervalChaos   40  80 220
  EscapeCantor       255 255 255
  Cascade p=1        220  30  30
  Cascade p=2        255 140   0
  Cascade p=3        140  40 180
  Cascade p>=4        70  20  90
  Window R1          240 220   0
  Window R2          120 190 255
  Window R3          255 130 200
  Window R4            0 150 150
  Boundary, Trivial    0   0   0
Window colors are scaled to 80% for odd m. Pixel centers are classified.
SKEWTENT_THREADS caps the number of worker threads.";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RasterSpec {
    pub k_range: (f64, f64),
    pub r_range: (f64, f64),
    pub width: usize,
    pub height: usize,
    pub p_max: usize,
}

impl RasterSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        let ok_range = |(lo, hi): (f64, f64)| lo.is_finite() && hi.is_finite() && lo >= 0.0 && lo < hi;
        if !ok_range(self.k_range) || !ok_range(self.r_range) {
            return Err(CliError::usage("ranges must be finite, non-negative and ordered (min < max)"));
        }
        if self.width == 0 || self.height == 0 {
            return Err(CliError::usage("width and height must be at least 1"));
        }
        Ok(())
    }

    pub fn pixel_center(&self, i: usize, j: usize) -> (f64, f64) {
        let (k0, k1) = self.k_range;
        let (r0, r1) = self.r_range;
        let k = k0 + (i as f64 + 0.5) * (k1 - k0) / self.width as f64;
        let r = r1 - (j as f64 + 0.5) * (r1 - r0) / self.height as f64;
        (k, r)
    }

    /// Pixel containing `(k, r)`, if inside the raster.
    pub fn pixel_of(&self, k: f64, r: f64) -> Option<(usize, usize)> {
        let (k0, k1) = self.k_range;
        let (r0, r1) = self.r_range;
        let fi = (k - k0) / (k1 - k0) * self.width as f64;
        let fj = (r1 - r) / (r1 - r0) * self.height as f64;
        if fi < 0.0 || fj < 0.0 {
            return None;
        }
        let (i, j) = (fi.floor() as usize, fj.floor() as usize);
        (i < self.width && j < self.height).then_some((i, j))
    }
}

pub fn color(tag: &RegionTag) -> [u8; 3] {
    match *tag {
        RegionTag::FixedPoint => [160, 160, 160],
        RegionTag::TwoCycle => [0, 170, 0],
        RegionTag::FullIntervalChaos => [40, 80, 220],
        RegionTag::EscapeCantor => [255, 255, 255],
        RegionTag::Cascade { p: 1, .. } => [220, 30, 30],
        RegionTag::Cascade { p: 2, .. } => [255, 140, 0],
        RegionTag::Cascade { p: 3, .. } => [140, 40, 180],
        RegionTag::Cascade { .. } => [70, 20, 90],
        RegionTag::Window { m, sub } => {
            let base = match sub {
                WindowSub::R1 => [240, 220, 0],
                WindowSub::R2 => [120, 190, 255],
                WindowSub::R3 => [255, 130, 200],
                WindowSub::R4 => [0, 150, 150],
            };
            if m % 2 == 1 {
                base.map(|c| (c as u32 * 4 / 5) as u8)
            } else {
                base
            }
        }
        RegionTag::Boundary { .. } | RegionTag::Trivial => [0, 0, 0],
    }
}

pub fn legend() -> String {
    format!("skewtent raster palette {PALETTE_VERSION}\n{PALETTE_HELP}\n")
}

fn thread_count() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n: &usize| n > 0)
}

/// Region tags in row-major order, top row first.
pub fn render(spec: &RasterSpec) -> Result<Vec<RegionTag>, CliError> {
    spec.validate()?;
    let opts = ClassifyOptions { p_max: spec.p_max, ..Default::default() };
    let compute = || -> Vec<RegionTag> {
        let rows: Vec<Vec<RegionTag>> = (0..spec.height)
            .into_par_iter()
            .map(|j| {
                (0..spec.width)
                    .map(|i| {
                        let (k, r) = spec.pixel_center(i, j);
                        match MapParams::new(k, r) {
                            Ok(p) => classify(&p, &opts),
                            // a zero range minimum puts no pixel center on an axis, so this is unreachable in practice
                            Err(_) => RegionTag::Boundary { which: BoundaryKind::KEqualsOne },
                        }
                    })
                    .collect()
            })
            .collect();
        rows.into_iter().flatten().collect()
    };
    match thread_count() {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::usage(format!("thread pool: {e}")))?;
            Ok(pool.install(compute))
        }
        None => Ok(compute()),
    }
}

pub fn ppm_bytes(spec: &RasterSpec, tags: &[RegionTag]) -> Vec<u8> {
    let mut buf = format!("P6\n{} {}\n255\n", spec.width, spec.height).into_bytes();
    buf.reserve(tags.len() * 3);
    for t in tags {
        buf.extend_from_slice(&color(t));
    }
    buf
}

fn csv_fields(tag: &RegionTag) -> (String, String) {
    match *tag {
        RegionTag::Cascade { p, .. } => (p.to_string(), String::new()),
        RegionTag::Window { m, sub } => (m.to_string(), sub.to_string()),
        RegionTag::Boundary { which } => (String::new(), which.to_string()),
        _ => (String::new(), String::new()),
    }
}

pub fn csv_text(spec: &RasterSpec, tags: &[RegionTag]) -> String {
    let mut s = String::from("k,r,tag,m_or_p,sub\n");
    for (idx, tag) in tags.iter().enumerate() {
        let (i, j) = (idx % spec.width, idx / spec.width);
        let (k, r) = spec.pixel_center(i, j);
        let (mp, sub) = csv_fields(tag);
        s.push_str(&format!("{k},{r},{},{mp},{sub}\n", tag.name()));
    }
    s
}

pub fn legend_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".legend.txt");
    PathBuf::from(name)
}

pub fn command(spec: &RasterSpec, path: &Path, format: RasterFormat, out: &mut dyn Write) -> CliResult {
    let tags = render(spec)?;
    let bytes = match format {
        RasterFormat::Ppm => ppm_bytes(spec, &tags),
        RasterFormat::Csv => csv_text(spec, &tags).into_bytes(),
    };
    let unwritable = |e: std::io::Error, p: &Path| CliError::usage(format!("cannot write {}: {e}", p.display()));
    fs::write(path, bytes).map_err(|e| unwritable(e, path))?;
    let legend_file = legend_path(path);
    fs::write(&legend_file, legend()).map_err(|e| unwritable(e, &legend_file))?;
    writeln!(out, "wrote {} ({}x{}, palette {PALETTE_VERSION})", path.display(), spec.width, spec.height)?;
    Ok(EXIT_OK)
}
