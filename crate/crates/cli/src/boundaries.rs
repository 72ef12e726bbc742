//! CSV tabulation of boundary curves.
//!
//! Function curves (`rho`, `Km`, `Lm`, `Nm`) are sampled uniformly over a parameter
//! interval; constant families (`Kp`, `alpha`, `beta`, `gamma`) emit one row per index
//! with the index in the `param` column. Values are printed at full precision.

use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::Path;

use skewtent::regions::{alpha_m, beta_m, gamma_m, k_threshold, l_curve, n_curve, rho, window_wall};

use crate::{CliError, CliResult, Curve, EXIT_OK};

pub const DEFAULT_SAMPLES: usize = 101;
pub const DEFAULT_K_RANGE: (f64, f64) = (1.5, 2.5);
pub const DEFAULT_R_RANGE: (f64, f64) = (0.01, 0.99);
pub const DEFAULT_R_SAMPLES: usize = 99;
const DEFAULT_CONSTANTS: RangeInclusive<usize> = 2..=10;

/// Parses `N` or `N..M` (inclusive).
pub fn parse_index(s: &str) -> Result<RangeInclusive<usize>, CliError> {
    let bad = || CliError::usage(format!("bad index {s:?}; expected N or N..M"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a > b {
                return Err(bad());
            }
            Ok(a..=b)
        }
        None => {
            let n = num(s)?;
            Ok(n..=n)
        }
    }
}

/// `n` evenly spaced points from `lo` to `hi`, endpoints included.
pub fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (lo + hi)];
    }
    let d = (n - 1) as f64;
    (0..n).map(|i| (lo * (d - i as f64) + hi * i as f64) / d).collect()
}

fn required<'a>(idx: Option<&'a str>, flag: &str, curve: &str) -> Result<&'a str, CliError> {
    idx.ok_or_else(|| CliError::usage(format!("--curve {curve} needs --{flag}")))
}

fn index_or_default(idx: Option<&str>) -> Result<RangeInclusive<usize>, CliError> {
    idx.map_or(Ok(DEFAULT_CONSTANTS), parse_index)
}

/// Builds the CSV table for `curve`.
pub fn table(
    curve: Curve,
    p: Option<&str>,
    m: Option<&str>,
    samples: Option<usize>,
    from: Option<f64>,
    to: Option<f64>,
) -> Result<String, CliError> {
    let mut rows: Vec<(Option<usize>, f64, f64)> = Vec::new();
    let sampled = |default: (f64, f64), default_n: usize| -> Result<Vec<f64>, CliError> {
        let (lo, hi) = (from.unwrap_or(default.0), to.unwrap_or(default.1));
        let n = samples.unwrap_or(default_n);
        if n == 0 || !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(CliError::usage("need --samples >= 1 and finite --from < --to"));
        }
        Ok(grid(lo, hi, n))
    };
    let multi;
    match curve {
        Curve::Rho => {
            let ps = parse_index(required(p, "p", "rho")?)?;
            multi = ps.start() != ps.end();
            let ks = sampled(DEFAULT_K_RANGE, DEFAULT_SAMPLES)?;
            for p in ps {
                for &k in &ks {
                    // outside rho's domain (k <= 1) there is nothing to tabulate
                    if let Ok(v) = rho(p, k) {
                        rows.push((Some(p), k, v));
                    }
                }
            }
        }
        Curve::Km | Curve::Lm | Curve::Nm => {
            let name = match curve {
                Curve::Km => "Km",
                Curve::Lm => "Lm",
                _ => "Nm",
            };
            let ms = parse_index(required(m, "m", name)?)?;
            if *ms.start() == 0 {
                return Err(CliError::usage("window index must be >= 1"));
            }
            multi = ms.start() != ms.end();
            let rs = sampled(DEFAULT_R_RANGE, DEFAULT_R_SAMPLES)?;
            for m in ms {
                for &r in &rs {
                    if !(r > 0.0) {
                        continue;
                    }
                    let v = match curve {
                        Curve::Km => Some(window_wall(m, r)),
                        Curve::Lm => Some(l_curve(m, r)),
                        // N_m only exists where 1/r^m < L_m(r)
                        _ => n_curve(m, r).ok(),
                    };
                    if let Some(v) = v {
                        rows.push((Some(m), r, v));
                    }
                }
            }
        }
        Curve::Kp => {
            multi = false;
            for p in index_or_default(p)? {
                rows.push((None, p as f64, k_threshold(p)?));
            }
        }
        Curve::Alpha | Curve::Beta | Curve::Gamma => {
            multi = false;
            let f = match curve {
                Curve::Alpha => alpha_m,
                Curve::Beta => beta_m,
                _ => gamma_m,
            };
            for m in index_or_default(m)? {
                rows.push((None, m as f64, f(m)?));
            }
        }
    }

    let index_name = if matches!(curve, Curve::Rho) { "p" } else { "m" };
    let mut s = String::new();
    if multi {
        s.push_str(&format!("{index_name},param,value\n"));
    } else {
        s.push_str("param,value\n");
    }
    for (idx, param, value) in rows {
        match idx {
            Some(i) if multi => s.push_str(&format!("{i},{param},{value}\n")),
            _ => s.push_str(&format!("{param},{value}\n")),
        }
    }
    Ok(s)
}

#[allow(clippy::too_many_arguments)]
pub fn command(
    curve: Curve,
    p: Option<&str>,
    m: Option<&str>,
    samples: Option<usize>,
    from: Option<f64>,
    to: Option<f64>,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> CliResult {
    let csv = table(curve, p, m, samples, from, to)?;
    match path {
        Some(path) => fs::write(path, csv)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?,
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(EXIT_OK)
}
